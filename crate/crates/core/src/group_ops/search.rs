//! Backtrack searches over `Sym(n)`: transporters between subgroups and
//! normalizers.
//!
//! A conjugating element `g` with `H1^g = H2` maps every `H1`-orbit on
//! ordered pairs of points onto an `H2`-orbit on pairs of the same size. The
//! search assigns point images one at a time and keeps a partial bijection
//! between the two orbital partitions; any clash prunes the branch. Leaves
//! are checked by sifting conjugated generators.

use std::ops::ControlFlow;

use crate::group::{make_named, NamedKind, PermGroup};
use crate::perm::Permutation;
use crate::stabchain::StabChain;

use super::{centralizer_in_sym, orbit_of, quick_invariants};

const NONE: u32 = u32::MAX;

/// The partition of ordered pairs (diagonal included) into orbitals.
#[derive(Clone, Debug)]
pub struct OrbitalStructure {
    n: usize,
    /// `id[a * n + b]`, orbital ids numbered by first pair.
    id: Vec<u32>,
    size: Vec<u32>,
}

impl OrbitalStructure {
    pub fn new(degree: usize, gens: &[Permutation]) -> Self {
        let n = degree;
        let mut parent: Vec<u32> = (0..(n * n) as u32).collect();
        fn find(parent: &mut [u32], mut x: u32) -> u32 {
            while parent[x as usize] != x {
                parent[x as usize] = parent[parent[x as usize] as usize];
                x = parent[x as usize];
            }
            x
        }
        for g in gens {
            for a in 0..n {
                for b in 0..n {
                    let x = find(&mut parent, (a * n + b) as u32);
                    let ga = g.image(a as u32) as usize;
                    let gb = g.image(b as u32) as usize;
                    let y = find(&mut parent, (ga * n + gb) as u32);
                    if x != y {
                        let (lo, hi) = if x < y { (x, y) } else { (y, x) };
                        parent[hi as usize] = lo;
                    }
                }
            }
        }
        let mut id = vec![NONE; n * n];
        let mut size: Vec<u32> = Vec::new();
        let mut root_id: Vec<u32> = vec![NONE; n * n];
        for (x, slot) in id.iter_mut().enumerate() {
            let r = find(&mut parent, x as u32) as usize;
            if root_id[r] == NONE {
                root_id[r] = size.len() as u32;
                size.push(0);
            }
            *slot = root_id[r];
            size[root_id[r] as usize] += 1;
        }
        OrbitalStructure { n, id, size }
    }

    pub fn from_group(group: &PermGroup) -> Self {
        Self::new(group.degree(), group.generators())
    }

    #[inline]
    fn of(&self, a: u32, b: u32) -> u32 {
        self.id[a as usize * self.n + b as usize]
    }

    /// Sorted sizes of the orbits on points.
    pub fn orbit_sizes(&self) -> Vec<u32> {
        let mut out: Vec<u32> = (0..self.n as u32)
            .filter(|&a| (0..a).all(|b| self.of(b, b) != self.of(a, a)))
            .map(|a| self.size[self.of(a, a) as usize])
            .collect();
        out.sort_unstable();
        out
    }

    /// Sorted sizes of the orbitals on ordered pairs of distinct points.
    pub fn orbital_sizes(&self) -> Vec<u32> {
        let mut diagonal = vec![false; self.size.len()];
        for a in 0..self.n as u32 {
            diagonal[self.of(a, a) as usize] = true;
        }
        let mut out: Vec<u32> = self
            .size
            .iter()
            .zip(&diagonal)
            .filter(|(_, &d)| !d)
            .map(|(&s, _)| s)
            .collect();
        out.sort_unstable();
        out
    }
}

/// Depth-first search for permutations compatible with the orbital
/// structures of a source and a target group.
struct Search<'a> {
    src: &'a OrbitalStructure,
    dst: &'a OrbitalStructure,
    img: Vec<u32>,
    used: Vec<bool>,
    fwd: Vec<u32>,
    rev: Vec<u32>,
    trail: Vec<u32>,
    assigned: Vec<u32>,
    nodes: u64,
}

impl<'a> Search<'a> {
    fn new(src: &'a OrbitalStructure, dst: &'a OrbitalStructure) -> Self {
        let n = src.n;
        Search {
            src,
            dst,
            img: vec![NONE; n],
            used: vec![false; n],
            fwd: vec![NONE; src.size.len()],
            rev: vec![NONE; dst.size.len()],
            trail: Vec::new(),
            assigned: Vec::new(),
            nodes: 0,
        }
    }

    fn link(&mut self, s: u32, d: u32) -> bool {
        match self.fwd[s as usize] {
            NONE => {
                if self.rev[d as usize] != NONE || self.src.size[s as usize] != self.dst.size[d as usize] {
                    return false;
                }
                self.fwd[s as usize] = d;
                self.rev[d as usize] = s;
                self.trail.push(s);
                true
            }
            x => x == d,
        }
    }

    /// Tries `a -> b`; on failure the state is left for `undo` to restore.
    fn assign(&mut self, a: u32, b: u32) -> bool {
        if self.used[b as usize] {
            return false;
        }
        self.img[a as usize] = b;
        self.used[b as usize] = true;
        self.assigned.push(a);
        for k in 0..self.assigned.len() {
            let c = self.assigned[k];
            let ic = self.img[c as usize];
            if !self.link(self.src.of(a, c), self.dst.of(b, ic))
                || !self.link(self.src.of(c, a), self.dst.of(ic, b))
            {
                return false;
            }
        }
        true
    }

    fn mark(&self) -> (usize, usize) {
        (self.trail.len(), self.assigned.len())
    }

    fn undo(&mut self, mark: (usize, usize)) {
        while self.trail.len() > mark.0 {
            let s = self.trail.pop().unwrap();
            let d = self.fwd[s as usize];
            self.fwd[s as usize] = NONE;
            self.rev[d as usize] = NONE;
        }
        while self.assigned.len() > mark.1 {
            let a = self.assigned.pop().unwrap();
            let b = self.img[a as usize];
            self.used[b as usize] = false;
            self.img[a as usize] = NONE;
        }
    }

    /// Assigns the points of `order[pos..]`; calls `leaf` on complete maps.
    fn run<F>(&mut self, order: &[u32], pos: usize, choices0: Option<&[u32]>, leaf: &mut F) -> ControlFlow<Vec<u32>>
    where
        F: FnMut(&[u32]) -> bool,
    {
        self.nodes += 1;
        if pos == order.len() {
            return if leaf(&self.img) {
                ControlFlow::Break(self.img.clone())
            } else {
                ControlFlow::Continue(())
            };
        }
        let a = order[pos];
        let n = self.src.n as u32;
        let candidates: Vec<u32> = match (pos, choices0) {
            (0, Some(c)) => c.to_vec(),
            _ => (0..n).collect(),
        };
        for b in candidates {
            if self.used[b as usize] {
                continue;
            }
            let m = self.mark();
            if self.assign(a, b) {
                self.run(order, pos + 1, choices0, leaf)?;
            }
            self.undo(m);
        }
        ControlFlow::Continue(())
    }
}

fn conjugates_into(gens: &[Permutation], g: &[u32], target: &StabChain, buf: &mut [u32]) -> bool {
    gens.iter().all(|h| {
        for (a, &b) in h.images().iter().enumerate() {
            buf[g[a] as usize] = g[b as usize];
        }
        target.contains_in_place(buf)
    })
}

/// Some `g` in `Sym(n)` with `H1^g = H2`, if one exists.
pub fn transporter_in_sym(h1: &PermGroup, h2: &PermGroup) -> Option<Permutation> {
    if h1.degree() != h2.degree() {
        return None;
    }
    if quick_invariants(h1) != quick_invariants(h2) {
        return None;
    }
    let c2 = h2.chain();
    let s1 = OrbitalStructure::from_group(h1);
    let s2 = OrbitalStructure::from_group(h2);
    transporter_with(h1, &s1, &c2, &s2)
}

/// Transporter search given precomputed data for the target. Assumes the
/// two groups have equal order.
pub(crate) fn transporter_with(
    h1: &PermGroup,
    s1: &OrbitalStructure,
    c2: &StabChain,
    s2: &OrbitalStructure,
) -> Option<Permutation> {
    let n = h1.degree();
    // Right-multiplying a solution by H2 keeps it a solution, so the image
    // of the first point only matters up to its H2-orbit.
    let mut seen = vec![false; n];
    let mut first_choices = Vec::new();
    for b in 0..n as u32 {
        if !seen[b as usize] {
            first_choices.push(b);
            for c in orbit_of(n, c2.generators(), b) {
                seen[c as usize] = true;
            }
        }
    }
    let order: Vec<u32> = (0..n as u32).collect();
    let mut buf = vec![0u32; n];
    let gens = h1.generators();
    let mut search = Search::new(s1, s2);
    let mut leaf = |g: &[u32]| conjugates_into(gens, g, c2, &mut buf);
    match search.run(&order, 0, Some(&first_choices), &mut leaf) {
        ControlFlow::Break(images) => Some(Permutation::from_images_unchecked(images)),
        ControlFlow::Continue(()) => None,
    }
}

/// `N_Sym(n)(H)` by scanning every element of `Sym(n)`.
pub fn normalizer_scan(h: &PermGroup) -> PermGroup {
    let n = h.degree();
    let hc = h.chain();
    let sym = make_named(NamedKind::Symmetric, n).expect("n >= 1").chain();
    let mut found = StabChain::new(n, h.generators());
    let mut buf = vec![0u32; n];
    let gens = h.generators();
    let _ = sym.for_each_element(|g| {
        if !found.contains_images(g) && conjugates_into(gens, g, &hc, &mut buf) {
            found = found.extended(&Permutation::from_images_unchecked(g.to_vec()));
        }
        ControlFlow::Continue(())
    });
    found.group()
}

/// `N_Sym(n)(H)` by backtrack over base images with the base `1, .., n`.
///
/// Level by level from the bottom, the orbit of point `i` under the
/// normalizer's stabilizer of `0..i-1` is grown: a point already reached by
/// the known subgroup is skipped, otherwise one search decides whether
/// some normalizing element reaches it.
pub fn normalizer_backtrack(h: &PermGroup) -> PermGroup {
    let n = h.degree();
    let hc = h.chain();
    let structure = OrbitalStructure::from_group(h);
    let gens = h.generators();
    let full_base: Vec<u32> = (0..n as u32).collect();

    let mut known: Vec<Permutation> = gens.to_vec();
    known.extend(centralizer_in_sym(h).generators().iter().cloned());
    let mut k_chain = StabChain::with_base(n, &known, &full_base);
    let mut buf = vec![0u32; n];

    for i in (0..n.saturating_sub(1)).rev() {
        let mut excluded = vec![false; n];
        for gamma in (i + 1) as u32..n as u32 {
            if excluded[gamma as usize] || k_chain.basic_orbit(i).contains(&gamma) {
                continue;
            }
            let mut search = Search::new(&structure, &structure);
            let mut ok = true;
            for p in 0..i as u32 {
                ok &= search.assign(p, p);
            }
            ok &= search.assign(i as u32, gamma);
            let found = if ok {
                let order: Vec<u32> = ((i + 1) as u32..n as u32).collect();
                let mut leaf = |g: &[u32]| conjugates_into(gens, g, &hc, &mut buf);
                match search.run(&order, 0, None, &mut leaf) {
                    ControlFlow::Break(images) => Some(Permutation::from_images_unchecked(images)),
                    ControlFlow::Continue(()) => None,
                }
            } else {
                None
            };
            match found {
                Some(g) => {
                    known.push(g);
                    k_chain = StabChain::with_base(n, &known, &full_base);
                }
                None => {
                    let stab = k_chain.stabilizer_generators(i);
                    for c in orbit_of(n, &stab, gamma) {
                        excluded[c as usize] = true;
                    }
                }
            }
        }
    }
    let strong = StabChain::new(n, &known);
    strong.group()
}

/// `N_Sym(n)(H)`: full scan for `n <= 7`, backtrack above.
pub fn normalizer_in_sym(h: &PermGroup) -> PermGroup {
    if h.degree() <= 7 {
        normalizer_scan(h)
    } else {
        normalizer_backtrack(h)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grp(gens: &[&str], n: usize) -> PermGroup {
        PermGroup::from_cycle_strings(n, gens).unwrap()
    }

    #[test]
    fn normalizer_examples() {
        let a4 = make_named(NamedKind::Alternating, 4).unwrap();
        for f in [normalizer_scan, normalizer_backtrack] {
            assert_eq!(f(&a4).order(), 24);
            assert_eq!(f(&grp(&["(1 2)"], 3)).order(), 2);
            assert_eq!(f(&grp(&["(1 2 3 4 5)"], 5)).order(), 20);
            assert_eq!(f(&PermGroup::trivial(4)).order(), 24);
            assert_eq!(f(&grp(&["(1 2)(3 4)", "(1 3)(2 4)"], 4)).order(), 24);
        }
    }

    #[test]
    fn transporter_examples() {
        let a = grp(&["(1 2)"], 4);
        let b = grp(&["(3 4)"], 4);
        let g = transporter_in_sym(&a, &b).unwrap();
        assert_eq!(a.generators()[0].conjugate_by(&g), b.generators()[0]);
        assert!(transporter_in_sym(&grp(&["(1 2)(3 4)"], 4), &a).is_none());
        let v1 = grp(&["(1 2)", "(3 4)"], 4);
        let v2 = grp(&["(1 2)(3 4)", "(1 3)(2 4)"], 4);
        assert!(transporter_in_sym(&v1, &v2).is_none());
        let v3 = grp(&["(1 3)", "(2 4)"], 4);
        assert!(transporter_in_sym(&v1, &v3).is_some());
    }

    #[test]
    fn orbital_sizes() {
        let s = OrbitalStructure::from_group(&grp(&["(1 2 3)"], 4));
        assert_eq!(s.orbit_sizes(), vec![1, 3]);
        assert_eq!(s.orbital_sizes(), vec![3, 3, 3, 3]);
    }
}
