//! Orbits, centralizers and normalizers in `Sym(n)`, joins, indices, cores,
//! subgroup conjugacy and invariant fingerprints.

mod centralizer;
mod fingerprint;
mod search;

pub use centralizer::{centralizer_in_sym, centralizer_order_formula};
pub use fingerprint::{fingerprint, quick_invariants, Fingerprint, QuickInvariants};
pub use search::{
    normalizer_backtrack, normalizer_in_sym, normalizer_scan, transporter_in_sym, OrbitalStructure,
};
pub(crate) use search::transporter_with;

pub use crate::group::join;

use std::ops::ControlFlow;

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::Permutation;
use crate::stabchain::StabChain;

/// Orbit of `point` under `<gens>`, in discovery order.
pub fn orbit_of(degree: usize, gens: &[Permutation], point: u32) -> Vec<u32> {
    let mut seen = vec![false; degree];
    seen[point as usize] = true;
    let mut orbit = vec![point];
    let mut head = 0;
    while head < orbit.len() {
        let a = orbit[head];
        for g in gens {
            let b = g.image(a);
            if !seen[b as usize] {
                seen[b as usize] = true;
                orbit.push(b);
            }
        }
        head += 1;
    }
    orbit
}

/// One orbit of a decomposition.
#[derive(Clone, Debug)]
pub struct Orbit {
    /// Points of the orbit, ascending.
    pub points: Vec<u32>,
    /// Smallest point of the orbit.
    pub representative: u32,
    pub stabilizer: PermGroup,
    /// Index of the first orbit whose action is equivalent to this one.
    pub type_key: usize,
}

#[derive(Clone, Debug)]
pub struct OrbitDecomposition {
    pub orbits: Vec<Orbit>,
}

impl OrbitDecomposition {
    pub fn sizes(&self) -> Vec<usize> {
        self.orbits.iter().map(|o| o.points.len()).collect()
    }
}

/// Tries to build a `G`-equivariant map from the orbit of `a` sending `a`
/// to `b`: propagate along generators from `a`, then check consistency
/// and injectivity. Returns the map as images indexed by point.
pub(crate) fn intertwiner(
    degree: usize,
    gens: &[Permutation],
    a: u32,
    b: u32,
) -> Option<Vec<u32>> {
    const NONE: u32 = u32::MAX;
    let mut map = vec![NONE; degree];
    map[a as usize] = b;
    let mut queue = vec![a];
    let mut head = 0;
    while head < queue.len() {
        let c = queue[head];
        let fc = map[c as usize];
        for g in gens {
            let (d, fd) = (g.image(c), g.image(fc));
            match map[d as usize] {
                NONE => {
                    map[d as usize] = fd;
                    queue.push(d);
                }
                x if x != fd => return None,
                _ => {}
            }
        }
        head += 1;
    }
    let mut hit = vec![false; degree];
    for &c in &queue {
        let fc = map[c as usize] as usize;
        if hit[fc] {
            return None;
        }
        hit[fc] = true;
    }
    Some(map)
}

/// Orbits listed by smallest point, with stabilizers of the
/// representatives and action-equivalence type keys.
pub fn orbits(group: &PermGroup) -> OrbitDecomposition {
    let n = group.degree();
    let gens = group.generators();
    let chain = group.chain();
    let mut assigned = vec![false; n];
    let mut out: Vec<Orbit> = Vec::new();
    for p in 0..n as u32 {
        if assigned[p as usize] {
            continue;
        }
        let mut points = orbit_of(n, gens, p);
        for &q in &points {
            assigned[q as usize] = true;
        }
        points.sort_unstable();
        let stabilizer = chain.point_stabilizer(p).expect("point in range");
        let mut type_key = out.len();
        for (k, other) in out.iter().enumerate() {
            if other.type_key != k || other.points.len() != points.len() {
                continue;
            }
            if points
                .iter()
                .any(|&b| intertwiner(n, gens, other.representative, b).is_some())
            {
                type_key = k;
                break;
            }
        }
        out.push(Orbit {
            points,
            representative: p,
            stabilizer,
            type_key,
        });
    }
    OrbitDecomposition { orbits: out }
}

/// `[big : small]`, checking that every generator of `small` lies in `big`.
pub fn index(big: &PermGroup, small: &PermGroup) -> Result<u128> {
    let big_chain = big.chain();
    index_with_chain(&big_chain, small)
}

pub(crate) fn index_with_chain(big: &StabChain, small: &PermGroup) -> Result<u128> {
    if big.degree() != small.degree() {
        return Err(Error::DegreeMismatch(big.degree(), small.degree()));
    }
    if let Some(g) = small
        .generators()
        .iter()
        .find(|g| !big.contains_images(g.images()))
    {
        return Err(Error::NotContained(g.to_string()));
    }
    Ok(big.order() / small.order())
}

/// Normal closure of `<normal_gens>` under conjugation by `group_gens`.
pub fn normal_closure(
    degree: usize,
    group_gens: &[Permutation],
    normal_gens: &[Permutation],
) -> StabChain {
    let mut chain = StabChain::new(degree, normal_gens);
    let mut queue: Vec<Permutation> = chain.generators().to_vec();
    while let Some(x) = queue.pop() {
        for g in group_gens {
            let y = x.conjugate_by(g);
            if !chain.contains_images(y.images()) {
                chain = chain.extended(&y);
                queue.push(y);
            }
        }
    }
    chain
}

/// Commutator subgroup `[G, G]`.
pub fn derived_subgroup(group: &PermGroup) -> StabChain {
    let gens = group.generators();
    let mut comms = Vec::new();
    for (i, a) in gens.iter().enumerate() {
        for b in &gens[i + 1..] {
            let c = a.inverse().then(&b.inverse()).then(a).then(b);
            if !c.is_identity() {
                comms.push(c);
            }
        }
    }
    normal_closure(group.degree(), gens, &comms)
}

/// Orders of the derived series, starting with `|G|` and ending at the
/// perfect residuum.
pub fn derived_series_orders(group: &PermGroup) -> Vec<u128> {
    let mut out = vec![group.order()];
    let mut current = group.clone();
    loop {
        let d = derived_subgroup(&current);
        let o = d.order();
        if o == *out.last().unwrap() {
            return out;
        }
        out.push(o);
        current = d.group();
    }
}

pub fn is_abelian(group: &PermGroup) -> bool {
    let gens = group.generators();
    gens.iter().enumerate().all(|(i, a)| {
        gens[i + 1..].iter().all(|b| a.then(b) == b.then(a))
    })
}

/// Order of the center, scanning whichever of `G` and `C_Sym(n)(G)` is
/// smaller.
pub fn center_order(group: &PermGroup) -> u128 {
    let chain = group.chain();
    let cent = centralizer_in_sym(group).chain();
    let gens = group.generators();
    let mut count = 0u128;
    if cent.order() <= chain.order() {
        let _ = cent.for_each_element(|x| {
            if chain.contains_images(x) {
                count += 1;
            }
            ControlFlow::Continue(())
        });
    } else {
        let _ = chain.for_each_element(|x| {
            let commutes = gens.iter().all(|g| {
                let gi = g.images();
                (0..x.len()).all(|a| gi[x[a] as usize] == x[gi[a] as usize])
            });
            if commutes {
                count += 1;
            }
            ControlFlow::Continue(())
        });
    }
    count
}

/// Whether `sub` is normalized by every generator of `group`.
pub fn is_normal(group: &PermGroup, sub: &PermGroup) -> bool {
    let chain = sub.chain();
    sub.generators().iter().all(|x| {
        group
            .generators()
            .iter()
            .all(|g| chain.contains_images(x.conjugate_by(g).images()))
    })
}

/// Canonical representative of the right coset `H x`: the element of the
/// coset whose base images are lexicographically least.
pub(crate) fn canonical_right_coset_rep(h: &StabChain, x: &Permutation) -> Permutation {
    let mut x = x.clone();
    for level in 0..h.depth() {
        let orbit = h.basic_orbit(level);
        let best = *orbit
            .iter()
            .min_by_key(|&&beta| x.image(beta))
            .expect("non-empty orbit");
        let u = h.transversal(level, best).expect("orbit point");
        x = u.then(&x);
    }
    x
}

/// Core of `H` in `G`: the kernel of the action of `G` on the right cosets
/// of `H`.
pub fn core(g: &PermGroup, h: &PermGroup) -> Result<PermGroup> {
    let g_chain = g.chain();
    index_with_chain(&g_chain, h)?;
    let h_chain = h.chain();
    let n = g.degree();

    // Enumerate the cosets H x by their canonical representatives.
    let start = canonical_right_coset_rep(&h_chain, &Permutation::identity(n));
    let mut reps = vec![start.clone()];
    let mut seen: FxHashMap<Permutation, usize> = FxHashMap::default();
    seen.insert(start, 0);
    let mut head = 0;
    while head < reps.len() {
        for s in g.generators() {
            let y = canonical_right_coset_rep(&h_chain, &reps[head].then(s));
            if !seen.contains_key(&y) {
                seen.insert(y.clone(), reps.len());
                reps.push(y);
            }
        }
        head += 1;
    }

    // x lies in the kernel iff H c x = H c for every coset H c.
    let mut kernel = StabChain::new(n, &[]);
    let _ = h_chain.for_each_element(|x| {
        let x = Permutation::from_images_unchecked(x.to_vec());
        if kernel.contains_images(x.images()) {
            return ControlFlow::Continue(());
        }
        let fixes_all = reps
            .iter()
            .all(|c| canonical_right_coset_rep(&h_chain, &c.then(&x)) == *c);
        if fixes_all {
            kernel = kernel.extended(&x);
        }
        ControlFlow::Continue(())
    });
    Ok(kernel.group())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{make_named, NamedKind};

    fn grp(gens: &[&str], n: usize) -> PermGroup {
        PermGroup::from_cycle_strings(n, gens).unwrap()
    }

    #[test]
    fn orbit_examples() {
        let d = orbits(&grp(&["(1 2 3)(4 5 6)"], 6));
        assert_eq!(d.orbits.len(), 2);
        assert_eq!(d.orbits[0].points, vec![0, 1, 2]);
        assert_eq!(d.orbits[1].points, vec![3, 4, 5]);
        assert_eq!(d.orbits[1].type_key, 0);

        let d = orbits(&make_named(NamedKind::Symmetric, 5).unwrap());
        assert_eq!(d.orbits.len(), 1);

        let d = orbits(&grp(&["(1 2)"], 4));
        assert_eq!(d.sizes(), vec![2, 1, 1]);
        assert_eq!(d.orbits[1].type_key, 1);
        assert_eq!(d.orbits[2].type_key, 1);
    }

    #[test]
    fn inequivalent_orbits_of_equal_size() {
        // Regular C2 x C2 on {1..4} vs C2 x C2 acting through one factor on
        // {5,6} twice: different stabilizers, different types.
        let g = grp(&["(1 2)(3 4)(5 6)", "(1 3)(2 4)"], 6);
        let d = orbits(&g);
        assert_eq!(d.sizes(), vec![4, 2]);
        let g = grp(&["(1 2)(3 4)", "(5 6)(7 8)"], 8);
        let d = orbits(&g);
        assert_eq!(d.orbits[1].type_key, 0);
        assert_eq!(d.orbits[2].type_key, 2);
    }

    #[test]
    fn indices() {
        let s4 = make_named(NamedKind::Symmetric, 4).unwrap();
        let a4 = make_named(NamedKind::Alternating, 4).unwrap();
        assert_eq!(index(&s4, &a4).unwrap(), 2);
        assert_eq!(index(&s4, &s4).unwrap(), 1);
        let s5 = make_named(NamedKind::Symmetric, 5).unwrap();
        let f20 = grp(&["(1 2 3 4 5)", "(2 3 5 4)"], 5);
        assert_eq!(f20.order(), 20);
        assert_eq!(index(&s5, &f20).unwrap(), 6);
        assert!(matches!(index(&a4, &s4), Err(Error::NotContained(_))));
    }

    #[test]
    fn cores() {
        let s4 = make_named(NamedKind::Symmetric, 4).unwrap();
        let a4 = make_named(NamedKind::Alternating, 4).unwrap();
        assert_eq!(core(&s4, &a4).unwrap().order(), 12);
        let s3 = grp(&["(1 2)", "(1 2 3)"], 4);
        assert_eq!(core(&s4, &s3).unwrap().order(), 1);
        let d8 = grp(&["(1 2 3 4)", "(1 3)"], 4);
        let k = core(&s4, &d8).unwrap();
        assert_eq!(k.order(), 4);
        assert!(is_normal(&s4, &k));
        assert!(core(&a4, &s4).is_err());
    }

    #[test]
    fn derived_and_center() {
        let s6 = make_named(NamedKind::Symmetric, 6).unwrap();
        assert_eq!(derived_subgroup(&s6).order(), 360);
        assert_eq!(center_order(&s6), 1);
        assert_eq!(derived_series_orders(&make_named(NamedKind::Symmetric, 4).unwrap()), vec![24, 12, 4, 1]);
        let c4 = grp(&["(1 2 3 4)"], 4);
        assert_eq!(center_order(&c4), 4);
        assert!(is_abelian(&c4));
        assert!(!is_abelian(&s6));
        let d8 = grp(&["(1 2 3 4)", "(1 3)"], 4);
        assert_eq!(center_order(&d8), 2);
    }

    #[test]
    fn canonical_coset_reps() {
        let s4 = make_named(NamedKind::Symmetric, 4).unwrap();
        let h = grp(&["(1 2)", "(1 2 3)"], 4).chain();
        let mut reps: Vec<Permutation> = s4
            .chain()
            .elements()
            .map(|x| canonical_right_coset_rep(&h, &x))
            .collect();
        reps.sort();
        reps.dedup();
        assert_eq!(reps.len(), 4);
    }
}
