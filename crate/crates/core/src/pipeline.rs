//! Per-degree survey of minimally embedded subgroups of `Sym(m)`, and the
//! degree-10 certificate.
//!
//! For each minimally embedded `G ≤ Sym(m)` with centralizer `C` the
//! survey records `ind = [<G, C> : G] = [C : C ∩ G]` and looks for an
//! element of prime order in `C \ G`. Any subgroup `D ≤ C` meeting `G`
//! trivially embeds in `<G, C> / G`, so its order divides `ind`; a prime
//! order element of `C` outside `G` exists iff such a `D ≠ 1` does.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use crate::cache::{load_cache, save_cache, CacheRecord};
use crate::error::{Error, Result};
use crate::group::{make_gppq, PermGroup};
use crate::group_ops::centralizer_in_sym;
use crate::mindeg::{mu, IsoFilter};
use crate::perm::{parse_perm, prime_divisors, Permutation};
use crate::subgroups::{sym_subgroup_classes, EnumOptions, SubgroupClass};

/// Where subgroup classes are persisted, if anywhere.
#[derive(Clone, Debug, Default)]
pub struct Cache {
    pub dir: Option<PathBuf>,
}

impl Cache {
    pub fn none() -> Self {
        Cache { dir: None }
    }

    pub fn at(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: Some(dir.into()) }
    }

    fn load(&self, m: usize) -> Result<Option<Vec<CacheRecord>>> {
        match &self.dir {
            None => Ok(None),
            Some(d) => match load_cache(d, m) {
                Ok(r) => Ok(Some(r)),
                Err(Error::MissingCache(_)) => Ok(None),
                Err(e) => Err(e),
            },
        }
    }

    fn save(&self, records: &[CacheRecord]) -> Result<()> {
        match &self.dir {
            None => Ok(()),
            Some(d) => save_cache(records, d),
        }
    }
}

/// Subgroup classes of `Sym(m)`, from the cache when present, otherwise
/// enumerated and written back.
pub fn sym_classes(m: usize, cache: &Cache, options: &EnumOptions) -> Result<Vec<SubgroupClass>> {
    if let Some(records) = cache.load(m)? {
        return records.iter().map(CacheRecord::to_class).collect();
    }
    let classes = sym_subgroup_classes(m, options)?;
    let records: Vec<CacheRecord> = classes.iter().map(|c| CacheRecord::from_class(m, c)).collect();
    cache.save(&records)?;
    Ok(classes)
}

#[derive(Clone, Debug)]
pub struct ClassReport {
    pub class: SubgroupClass,
    pub ind: u128,
    pub comp_witness: Option<Permutation>,
}

#[derive(Clone, Debug)]
pub struct DegreeReport {
    pub degree: usize,
    /// Number of subgroup classes of `Sym(m)`.
    pub total_classes: usize,
    /// The minimally embedded classes, in class id order.
    pub classes: Vec<ClassReport>,
    pub ind_multiset: BTreeMap<u128, usize>,
    pub comp_nonempty: bool,
}

#[derive(Serialize)]
struct ClassJson {
    class_id: usize,
    order: u128,
    generators: Vec<String>,
    fingerprint: String,
    ind: u128,
    comp_witness: Option<String>,
}

#[derive(Serialize)]
struct DegreeJson {
    degree: usize,
    total_classes: usize,
    minemb_count: usize,
    ind_multiset: BTreeMap<String, usize>,
    comp_nonempty: bool,
    classes: Vec<ClassJson>,
}

impl DegreeReport {
    pub fn to_json(&self) -> String {
        let doc = DegreeJson {
            degree: self.degree,
            total_classes: self.total_classes,
            minemb_count: self.classes.len(),
            ind_multiset: self.ind_multiset.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            comp_nonempty: self.comp_nonempty,
            classes: self
                .classes
                .iter()
                .map(|c| ClassJson {
                    class_id: c.class.class_id,
                    order: c.class.order,
                    generators: c.class.representative.generator_strings(),
                    fingerprint: c.class.fingerprint.encode(),
                    ind: c.ind,
                    comp_witness: c.comp_witness.as_ref().map(|p| p.to_string()),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("report serializes")
    }

    /// `ind` values in class order, as a compact list.
    pub fn ind_list(&self) -> Vec<u128> {
        self.classes.iter().map(|c| c.ind).collect()
    }
}

/// `ind` and the first prime-order element of `C \ G`, if any.
pub fn centralizer_data(group: &PermGroup) -> (u128, Option<Permutation>) {
    let gc = group.chain();
    let c = centralizer_in_sym(group);
    let cc = c.chain();
    let mut joined = gc.clone();
    for x in c.generators() {
        joined = joined.extended(x);
    }
    let ind = joined.order() / gc.order();
    let mut witness = None;
    for p in prime_divisors(ind) {
        witness = cc
            .elements_of_order(p as u64)
            .find(|x| !gc.contains_images(x.images()));
        if witness.is_some() {
            break;
        }
    }
    (ind, witness)
}

/// Survey of the minimally embedded subgroup classes of `Sym(m)`.
pub fn survey_degree(m: usize, cache: &Cache, options: &EnumOptions) -> Result<DegreeReport> {
    if !(2..=9).contains(&m) {
        return Err(Error::InvalidArgument(format!("survey degree must be in 2..=9, got {m}")));
    }
    let classes = sym_classes(m, cache, options)?;
    let records = cache.load(m)?;
    let complete = records
        .as_ref()
        .is_some_and(|rs| rs.iter().all(|r| r.minemb == Some(false) || (r.minemb == Some(true) && r.ind.is_some())));

    let mut rows = Vec::new();
    if complete {
        for (r, class) in records.as_ref().unwrap().iter().zip(&classes) {
            if r.minemb != Some(true) {
                continue;
            }
            let comp_witness = r.comp_witness.as_deref().map(|s| parse_perm(s, m)).transpose()?;
            rows.push(ClassReport { class: class.clone(), ind: r.ind.unwrap() as u128, comp_witness });
        }
    } else {
        let lower = sym_classes(m - 1, cache, options)?;
        let mut filter = IsoFilter::new(m, &lower)?;
        let mut records: Vec<CacheRecord> = classes.iter().map(|c| CacheRecord::from_class(m, c)).collect();
        let mut minemb = Vec::with_capacity(classes.len());
        for class in &classes {
            minemb.push(filter.check(&class.representative, Some(&class.fingerprint))?);
        }
        let data: Vec<Option<(u128, Option<Permutation>)>> = classes
            .par_iter()
            .zip(&minemb)
            .map(|(class, &keep)| keep.then(|| centralizer_data(&class.representative)))
            .collect();
        for ((class, record), (keep, data)) in classes.iter().zip(records.iter_mut()).zip(minemb.into_iter().zip(data)) {
            record.minemb = Some(keep);
            if let Some((ind, comp_witness)) = data {
                record.ind = Some(ind as u64);
                record.comp_witness = comp_witness.as_ref().map(|p| p.to_string());
                rows.push(ClassReport { class: class.clone(), ind, comp_witness });
            }
        }
        cache.save(&records)?;
    }

    let mut ind_multiset = BTreeMap::new();
    for r in &rows {
        *ind_multiset.entry(r.ind).or_insert(0) += 1;
    }
    Ok(DegreeReport {
        degree: m,
        total_classes: classes.len(),
        comp_nonempty: rows.iter().any(|r| r.comp_witness.is_some()),
        classes: rows,
        ind_multiset,
    })
}

#[derive(Clone, Debug)]
pub struct Verdict {
    pub reports: Vec<DegreeReport>,
    /// No minimally embedded group of degree `≤ max` has a nontrivial
    /// subgroup of its centralizer meeting it trivially.
    pub holds: bool,
}

/// Surveys degrees `2..=max`, calling `progress` after each one.
pub fn verify_up_to(
    max: usize,
    cache: &Cache,
    options: &EnumOptions,
    mut progress: impl FnMut(&DegreeReport),
) -> Result<Verdict> {
    if !(2..=9).contains(&max) {
        return Err(Error::InvalidArgument(format!("maximum degree must be in 2..=9, got {max}")));
    }
    let mut reports = Vec::new();
    for m in 2..=max {
        let r = survey_degree(m, cache, options)?;
        progress(&r);
        reports.push(r);
    }
    let holds = reports.iter().all(|r| !r.comp_nonempty);
    Ok(Verdict { reports, holds })
}

#[derive(Clone, Debug)]
pub struct WitnessReport {
    pub group: PermGroup,
    pub order: u128,
    pub mu_value: u128,
    pub centralizer: PermGroup,
    pub witness_element: Permutation,
    /// `|<G, z>|`, which is `2 |G|` exactly when `z ∉ G`.
    pub join_order: u128,
    /// `μ` of `<G, z> ≅ G × C2`.
    pub product_mu: u128,
    /// `μ(C2)`.
    pub factor_mu: u128,
}

impl WitnessReport {
    pub fn strict(&self) -> bool {
        self.product_mu < self.mu_value + self.factor_mu
    }
}

/// `G(2,2,5)` on 10 points: `μ(G) = 10`, and a centralizing involution `z`
/// outside `G` gives `μ(G × C2) = 10 < 12`.
pub fn witness_degree_10() -> Result<WitnessReport> {
    let group = make_gppq(2, 5)?;
    let chain = group.chain();
    let mu_value = mu(&group)?.value;
    let centralizer = centralizer_in_sym(&group);
    let witness_element = centralizer
        .chain()
        .elements_of_order(2)
        .find(|z| !chain.contains_images(z.images()))
        .ok_or_else(|| Error::NotContained("no centralizing involution outside G".into()))?;
    let joined = group.with_generator(witness_element.clone());
    let join_order = joined.order();
    let product_mu = mu(&joined)?.value;
    let factor_mu = mu(&PermGroup::new(2, vec![Permutation::from_cycles(2, &[&[0, 1]])?])?)?.value;
    Ok(WitnessReport {
        order: chain.order(),
        group,
        mu_value,
        centralizer,
        witness_element,
        join_order,
        product_mu,
        factor_mu,
    })
}

/// Default cache directory from `PERMDEG_CACHE`, if set.
pub fn cache_from_env() -> Cache {
    match std::env::var_os("PERMDEG_CACHE") {
        Some(d) if !d.is_empty() => Cache::at(Path::new(&d)),
        _ => Cache::none(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_four() {
        let r = survey_degree(4, &Cache::none(), &EnumOptions::default()).unwrap();
        // normal and non-normal Klein four, C4, D8, A4, S4
        assert_eq!(r.classes.len(), 6);
        assert_eq!(r.ind_multiset, BTreeMap::from([(1, 6)]));
        assert!(!r.comp_nonempty);
    }

    #[test]
    fn degree_five() {
        let r = survey_degree(5, &Cache::none(), &EnumOptions::default()).unwrap();
        assert_eq!(r.total_classes, 19);
        assert_eq!(r.classes.len(), 7);
        assert_eq!(r.ind_multiset, BTreeMap::from([(1, 7)]));
    }

    #[test]
    fn ind_one_iff_centralizer_inside() {
        let g = PermGroup::from_cycle_strings(4, &["(1 2)(3 4)"]).unwrap();
        let (ind, w) = centralizer_data(&g);
        // C = <(1 2), (3 4), (1 3)(2 4)> of order 8
        assert_eq!(ind, 4);
        let w = w.unwrap();
        assert_eq!(w.order(), 2);
        assert!(!g.chain().contains(&w).unwrap());
        let s4 = crate::group::make_named(crate::group::NamedKind::Symmetric, 4).unwrap();
        assert_eq!(centralizer_data(&s4), (1, None));
    }
}
