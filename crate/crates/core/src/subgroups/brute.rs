//! Exhaustive subgroup lattice of a small group, by closure under joins
//! with single elements. Used as a reference for the class enumerator.

use rustc_hash::FxHashSet;

use crate::elements::{Bits, ElementTable};
use crate::error::{Error, Result};
use crate::group::PermGroup;

/// Largest ambient order [`brute_force_subgroups`] accepts.
pub const BRUTE_FORCE_CAP: u128 = 5040;

/// Every subgroup of `group`, as element sets over the returned table.
/// The list starts with the trivial subgroup and is otherwise in discovery
/// order.
pub fn brute_force_subgroups(group: &PermGroup) -> Result<(ElementTable, Vec<Bits>)> {
    let order = group.order();
    if order > BRUTE_FORCE_CAP {
        return Err(Error::OrderCap { order, cap: BRUTE_FORCE_CAP });
    }
    let table = ElementTable::new(group)?;
    let n = table.len();
    let mut mul = vec![0u32; n * n];
    for a in 0..n {
        for b in 0..n {
            mul[a * n + b] = table.mul(a as u32, b as u32);
        }
    }
    let closure = |start: &Bits, g: u32| -> Bits {
        let mut bits = start.clone();
        let mut members: Vec<u32> = start.iter().collect();
        let mut gens: Vec<u32> = vec![g];
        gens.extend(start.iter().filter(|&x| x != table.identity()));
        if bits.insert(g) {
            members.push(g);
        }
        let mut head = 0;
        while head < members.len() {
            let x = members[head] as usize;
            for &s in &gens {
                let y = mul[x * n + s as usize];
                if bits.insert(y) {
                    members.push(y);
                }
            }
            head += 1;
        }
        bits
    };

    let mut trivial = Bits::new(n);
    trivial.insert(table.identity());
    let mut seen: FxHashSet<Bits> = FxHashSet::default();
    seen.insert(trivial.clone());
    let mut all = vec![trivial];
    let mut head = 0;
    while head < all.len() {
        let s = all[head].clone();
        let members: Vec<u32> = s.iter().collect();
        // <S, g> only depends on the double coset S g S.
        let mut done = s.clone();
        for g in 0..n as u32 {
            if done.contains(g) {
                continue;
            }
            for &a in &members {
                let ag = mul[a as usize * n + g as usize] as usize;
                for &b in &members {
                    done.insert(mul[ag * n + b as usize]);
                }
            }
            let t = closure(&s, g);
            if seen.insert(t.clone()) {
                all.push(t);
            }
        }
        head += 1;
    }
    Ok((table, all))
}

/// All conjugates of the subgroup with element set `bits`.
pub fn conjugacy_class_bits(table: &ElementTable, bits: &Bits) -> Vec<Bits> {
    let gens = table.generator_indices();
    let mut seen: FxHashSet<Bits> = FxHashSet::default();
    seen.insert(bits.clone());
    let mut out = vec![bits.clone()];
    let mut head = 0;
    while head < out.len() {
        for &g in &gens {
            let mut conj = Bits::new(table.len());
            for x in out[head].iter() {
                conj.insert(table.conj(x, g));
            }
            if seen.insert(conj.clone()) {
                out.push(conj);
            }
        }
        head += 1;
    }
    out
}
