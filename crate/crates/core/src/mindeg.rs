//! Minimal faithful permutation degree.
//!
//! A collection of subgroups `H_i` gives a faithful action of degree
//! `Σ [G : H_i]` exactly when the cores of the `H_i` intersect trivially,
//! which happens iff every minimal normal subgroup of `G` escapes some
//! core. So `μ(G)` is a weighted set cover of the minimal normal subgroups
//! by subgroup classes.

use std::collections::BTreeMap;

use crate::elements::{Bits, ElementTable};
use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::group_ops::{fingerprint, Fingerprint};
use crate::iso::IsoData;
use crate::subgroups::{conjugacy_class_bits, subgroup_classes, EnumOptions, SubgroupClass};

#[derive(Clone, Debug)]
pub struct MuResult {
    pub value: u128,
    /// Subgroups whose coset actions together realize `value`.
    pub witness: Vec<SubgroupClass>,
    /// `[G : H_i]` for each witness class.
    pub degrees: Vec<u128>,
}

/// Subgroup classes of `G` with element sets and cores over a table of `G`.
pub struct CoreData {
    pub table: ElementTable,
    pub classes: Vec<SubgroupClass>,
    pub bits: Vec<Bits>,
    pub cores: Vec<Bits>,
}

impl CoreData {
    pub fn new(group: &PermGroup) -> Result<Self> {
        let table = ElementTable::new(group)?;
        let classes = subgroup_classes(group, &EnumOptions::default())?;
        let mut bits = Vec::with_capacity(classes.len());
        let mut cores = Vec::with_capacity(classes.len());
        for c in &classes {
            let b = table.subgroup_bits(&c.representative.chain());
            let core = conjugacy_class_bits(&table, &b)
                .iter()
                .fold(b.clone(), |acc, x| acc.and(x));
            bits.push(b);
            cores.push(core);
        }
        Ok(CoreData { table, classes, bits, cores })
    }

    pub fn group_order(&self) -> u128 {
        self.table.len() as u128
    }

    pub fn index(&self, class: usize) -> u128 {
        self.group_order() / self.classes[class].order
    }

    /// Classes that are normal subgroups.
    pub fn normal_classes(&self) -> Vec<usize> {
        (0..self.classes.len()).filter(|&i| self.classes[i].class_size == 1).collect()
    }

    /// Nontrivial normal subgroups containing no smaller nontrivial one.
    pub fn minimal_normal_classes(&self) -> Vec<usize> {
        let normal: Vec<usize> = self
            .normal_classes()
            .into_iter()
            .filter(|&i| self.classes[i].order > 1)
            .collect();
        normal
            .iter()
            .copied()
            .filter(|&i| {
                !normal.iter().any(|&j| {
                    self.classes[j].order < self.classes[i].order && self.bits[j].is_subset(&self.bits[i])
                })
            })
            .collect()
    }
}

pub fn mu(group: &PermGroup) -> Result<MuResult> {
    if group.is_trivial() {
        return Ok(MuResult { value: 0, witness: Vec::new(), degrees: Vec::new() });
    }
    mu_with(&CoreData::new(group)?)
}

pub fn mu_with(data: &CoreData) -> Result<MuResult> {
    if data.group_order() == 1 {
        return Ok(MuResult { value: 0, witness: Vec::new(), degrees: Vec::new() });
    }
    let minimal = data.minimal_normal_classes();
    if minimal.len() > 64 {
        return Err(Error::InvalidArgument(format!(
            "{} minimal normal subgroups exceeds the supported 64",
            minimal.len()
        )));
    }
    let all: u64 = if minimal.len() == 64 { u64::MAX } else { (1u64 << minimal.len()) - 1 };

    // Cheapest class for each cover mask; more expensive classes with the
    // same mask are dominated.
    let mut cheapest: BTreeMap<u64, usize> = BTreeMap::new();
    for c in 0..data.classes.len() {
        let mut mask = 0u64;
        for (k, &n) in minimal.iter().enumerate() {
            if !data.bits[n].is_subset(&data.cores[c]) {
                mask |= 1 << k;
            }
        }
        if mask == 0 {
            continue;
        }
        match cheapest.get(&mask) {
            Some(&prev) if data.index(prev) <= data.index(c) => {}
            _ => {
                cheapest.insert(mask, c);
            }
        }
    }
    let mut options: Vec<(u128, u64, usize)> =
        cheapest.into_iter().map(|(mask, c)| (data.index(c), mask, c)).collect();
    options.sort();

    let mut best: Option<(u128, Vec<usize>)> = None;
    let mut chosen = Vec::new();
    cover(&options, all, 0, 0, &mut chosen, &mut best);
    let (value, picks) = best.expect("the trivial subgroup covers every minimal normal subgroup");
    let witness: Vec<SubgroupClass> = picks.iter().map(|&c| data.classes[c].clone()).collect();
    let degrees = picks.iter().map(|&c| data.index(c)).collect();
    Ok(MuResult { value, witness, degrees })
}

fn cover(
    options: &[(u128, u64, usize)],
    all: u64,
    covered: u64,
    cost: u128,
    chosen: &mut Vec<usize>,
    best: &mut Option<(u128, Vec<usize>)>,
) {
    if covered == all {
        if best.as_ref().is_none_or(|b| cost < b.0) {
            *best = Some((cost, chosen.clone()));
        }
        return;
    }
    let need = (!covered & all).trailing_zeros();
    for &(index, mask, class) in options {
        if mask >> need & 1 == 0 {
            continue;
        }
        if best.as_ref().is_some_and(|b| cost + index >= b.0) {
            // options are sorted by index, so the rest cost at least as much
            break;
        }
        chosen.push(class);
        cover(options, all, covered | mask, cost + index, chosen, best);
        chosen.pop();
    }
}

/// How to decide whether a group on `m` points needs all `m` points.
pub enum EmbeddingTest<'a> {
    /// Compare against the subgroup classes of `Sym(m - 1)`.
    IsoFilter { lower: &'a [SubgroupClass] },
    /// Compute `μ(G)` and compare it with `m`.
    DirectMu,
}

pub fn is_minimally_embedded(group: &PermGroup, test: EmbeddingTest<'_>) -> Result<bool> {
    match test {
        EmbeddingTest::DirectMu => Ok(mu(group)?.value == group.degree() as u128),
        EmbeddingTest::IsoFilter { lower } => IsoFilter::new(group.degree(), lower)?.check(group, None),
    }
}

/// Reusable isomorphism filter against the classes of `Sym(m - 1)`, with
/// the isomorphism data of lower classes built on first use.
pub struct IsoFilter<'a> {
    degree: usize,
    lower: &'a [SubgroupClass],
    data: Vec<Option<IsoData>>,
}

impl<'a> IsoFilter<'a> {
    pub fn new(degree: usize, lower: &'a [SubgroupClass]) -> Result<Self> {
        if degree >= 2 && lower.iter().any(|c| c.representative.degree() != degree - 1) {
            return Err(Error::InvalidArgument("lower classes must act on one point fewer".into()));
        }
        if degree >= 2 && lower.is_empty() {
            return Err(Error::MissingCache(degree - 1));
        }
        Ok(IsoFilter { degree, lower, data: (0..lower.len()).map(|_| None).collect() })
    }

    /// Whether `group` (on `degree` points) is isomorphic to no subgroup of
    /// `Sym(degree - 1)`. A precomputed fingerprint may be passed in.
    pub fn check(&mut self, group: &PermGroup, fp: Option<&Fingerprint>) -> Result<bool> {
        if group.degree() != self.degree {
            return Err(Error::DegreeMismatch(group.degree(), self.degree));
        }
        let order = group.order();
        if order == 1 {
            return Ok(self.degree == 0);
        }
        let bound: u128 = (1..self.degree as u128).product();
        if order > bound {
            return Ok(true);
        }
        let moved: usize = group
            .generators()
            .iter()
            .fold(vec![false; self.degree], |mut acc, g| {
                g.moved_points().for_each(|p| acc[p as usize] = true);
                acc
            })
            .into_iter()
            .filter(|&x| x)
            .count();
        if moved < self.degree {
            return Ok(false);
        }
        let owned;
        let fp = match fp {
            Some(f) => f,
            None => {
                owned = fingerprint(group);
                &owned
            }
        };
        let mut mine: Option<IsoData> = None;
        for (i, c) in self.lower.iter().enumerate() {
            let f = &c.fingerprint;
            if f.order != fp.order
                || f.element_orders != fp.element_orders
                || f.abelian != fp.abelian
                || f.center_order != fp.center_order
                || f.derived_order != fp.derived_order
            {
                continue;
            }
            if mine.is_none() {
                mine = Some(IsoData::new(group)?);
            }
            if self.data[i].is_none() {
                self.data[i] = Some(IsoData::new(&c.representative)?);
            }
            let theirs = self.data[i].as_ref().unwrap();
            if mine.as_ref().unwrap().isomorphism_to(theirs).is_some() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}
