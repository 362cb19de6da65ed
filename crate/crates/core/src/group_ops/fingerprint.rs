use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::{cycle_type_of, order_of};

use super::search::OrbitalStructure;
use super::{center_order, derived_subgroup, is_abelian};

/// Conjugation invariants that cost no element enumeration.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuickInvariants {
    pub order: u128,
    pub degree: usize,
    pub orbit_sizes: Vec<u32>,
    pub orbital_sizes: Vec<u32>,
}

pub fn quick_invariants(group: &PermGroup) -> QuickInvariants {
    quick_invariants_with(group.order(), group)
}

pub(crate) fn quick_invariants_with(order: u128, group: &PermGroup) -> QuickInvariants {
    let s = OrbitalStructure::from_group(group);
    QuickInvariants {
        order,
        degree: group.degree(),
        orbit_sizes: s.orbit_sizes(),
        orbital_sizes: s.orbital_sizes(),
    }
}

/// Invariants of a subgroup of `Sym(n)` under conjugation. The
/// degree-independent fields (order, element orders, abelian flag, center
/// and derived orders) are isomorphism invariants.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Fingerprint {
    pub order: u128,
    pub degree: usize,
    pub orbit_sizes: Vec<u32>,
    pub element_orders: BTreeMap<u64, u64>,
    pub cycle_types: BTreeMap<Vec<u32>, u64>,
    pub abelian: bool,
    pub center_order: u128,
    pub derived_order: u128,
}

impl Fingerprint {
    /// Canonical one-line encoding, stable across runs.
    pub fn encode(&self) -> String {
        let mut s = String::new();
        write!(s, "o={};d={};orb=", self.order, self.degree).unwrap();
        s.push_str(&join_nums(&self.orbit_sizes, "."));
        s.push_str(";eo=");
        let eo: Vec<String> = self
            .element_orders
            .iter()
            .map(|(k, v)| format!("{k}:{v}"))
            .collect();
        s.push_str(&eo.join(","));
        s.push_str(";ct=");
        let ct: Vec<String> = self
            .cycle_types
            .iter()
            .map(|(k, v)| format!("{}:{v}", join_nums(k, ".")))
            .collect();
        s.push_str(&ct.join(","));
        write!(
            s,
            ";ab={};z={};dd={}",
            u8::from(self.abelian),
            self.center_order,
            self.derived_order
        )
        .unwrap();
        s
    }

    /// Inverse of [`Fingerprint::encode`].
    pub fn decode(text: &str) -> Result<Fingerprint> {
        let bad = || Error::CorruptCache(format!("bad fingerprint {text:?}"));
        let mut fields = BTreeMap::new();
        for part in text.split(';') {
            let (k, v) = part.split_once('=').ok_or_else(bad)?;
            fields.insert(k, v);
        }
        let field = |k: &str| fields.get(k).copied().ok_or_else(bad);
        let num = |v: &str| v.parse::<u128>().map_err(|_| bad());
        let nums = |v: &str| -> Result<Vec<u32>> {
            if v.is_empty() {
                return Ok(Vec::new());
            }
            v.split('.').map(|x| x.parse().map_err(|_| bad())).collect()
        };
        let pairs = |v: &str| -> Result<Vec<(String, u64)>> {
            if v.is_empty() {
                return Ok(Vec::new());
            }
            v.split(',')
                .map(|e| {
                    let (k, c) = e.split_once(':').ok_or_else(bad)?;
                    Ok((k.to_string(), c.parse().map_err(|_| bad())?))
                })
                .collect()
        };
        let mut element_orders = BTreeMap::new();
        for (k, c) in pairs(field("eo")?)? {
            element_orders.insert(k.parse().map_err(|_| bad())?, c);
        }
        let mut cycle_types = BTreeMap::new();
        for (k, c) in pairs(field("ct")?)? {
            cycle_types.insert(nums(&k)?, c);
        }
        let fp = Fingerprint {
            order: num(field("o")?)?,
            degree: num(field("d")?)? as usize,
            orbit_sizes: nums(field("orb")?)?,
            element_orders,
            cycle_types,
            abelian: match field("ab")? {
                "0" => false,
                "1" => true,
                _ => return Err(bad()),
            },
            center_order: num(field("z")?)?,
            derived_order: num(field("dd")?)?,
        };
        if fp.encode() != text {
            return Err(bad());
        }
        Ok(fp)
    }
}

fn join_nums<T: ToString>(xs: &[T], sep: &str) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}

pub fn fingerprint(group: &PermGroup) -> Fingerprint {
    let chain = group.chain();
    let mut element_orders: BTreeMap<u64, u64> = BTreeMap::new();
    let mut cycle_types: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
    let _ = chain.for_each_element(|g| {
        *element_orders.entry(order_of(g)).or_default() += 1;
        let ct = cycle_type_of(g);
        match cycle_types.get_mut(ct.as_slice()) {
            Some(c) => *c += 1,
            None => {
                cycle_types.insert(ct, 1);
            }
        }
        ControlFlow::Continue(())
    });
    let mut orbit_sizes: Vec<u32> = OrbitalStructure::from_group(group).orbit_sizes();
    orbit_sizes.sort_unstable();
    Fingerprint {
        order: chain.order(),
        degree: group.degree(),
        orbit_sizes,
        element_orders,
        cycle_types,
        abelian: is_abelian(group),
        center_order: center_order(group),
        derived_order: derived_subgroup(group).order(),
    }
}
