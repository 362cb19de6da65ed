//! Stabilizer chains (bases and strong generating sets) built with the
//! deterministic Schreier–Sims algorithm.
//!
//! A chain for `G` with base `b_0, .., b_{k-1}` stores, per level `i`, the
//! strong generators of `G_{(b_0..b_{i-1})}` together with the orbit of `b_i`
//! under them and an explicit transversal. Transversal entries are stored
//! as full permutations; the degrees this crate works with are small.

use std::ops::ControlFlow;

use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::{order_of, prime_divisors, Permutation};

const NONE: u32 = u32::MAX;

#[derive(Clone, Debug)]
struct Level {
    base: u32,
    gens: Vec<Permutation>,
    orbit: Vec<u32>,
    /// `slot[b]` indexes `reps` for points in the orbit, `NONE` otherwise.
    slot: Vec<u32>,
    /// `reps[j]` maps the base point to `orbit[j]`.
    reps: Vec<Permutation>,
    inv_reps: Vec<Permutation>,
}

impl Level {
    fn new(base: u32, degree: usize) -> Self {
        Level {
            base,
            gens: Vec::new(),
            orbit: Vec::new(),
            slot: vec![NONE; degree],
            reps: Vec::new(),
            inv_reps: Vec::new(),
        }
    }

    fn rebuild_orbit(&mut self) {
        let degree = self.slot.len();
        self.slot.iter_mut().for_each(|s| *s = NONE);
        self.orbit.clear();
        self.reps.clear();
        self.inv_reps.clear();
        self.orbit.push(self.base);
        self.slot[self.base as usize] = 0;
        self.reps.push(Permutation::identity(degree));
        self.inv_reps.push(Permutation::identity(degree));
        let mut head = 0;
        while head < self.orbit.len() {
            let beta = self.orbit[head];
            for s in &self.gens {
                let gamma = s.image(beta);
                if self.slot[gamma as usize] == NONE {
                    let rep = self.reps[head].then(s);
                    self.slot[gamma as usize] = self.orbit.len() as u32;
                    self.orbit.push(gamma);
                    self.inv_reps.push(rep.inverse());
                    self.reps.push(rep);
                }
            }
            head += 1;
        }
    }
}

/// A base and strong generating set for a permutation group.
#[derive(Clone, Debug)]
pub struct StabChain {
    degree: usize,
    generators: Vec<Permutation>,
    levels: Vec<Level>,
}

impl StabChain {
    /// Chain for `<gens>` on `degree` points; the base starts at the
    /// smallest moved point and is extended greedily.
    pub fn new(degree: usize, gens: &[Permutation]) -> Self {
        Self::with_base(degree, gens, &[])
    }

    /// Chain whose base begins with `prefix`. Prefix points are kept as
    /// levels even when their orbit is trivial, so that level `i` is always
    /// the pointwise stabilizer of `prefix[..i]`.
    pub fn with_base(degree: usize, gens: &[Permutation], prefix: &[u32]) -> Self {
        for g in gens {
            assert_eq!(g.degree(), degree, "generator degree mismatch");
        }
        let generators: Vec<Permutation> =
            gens.iter().filter(|g| !g.is_identity()).cloned().collect();
        let mut chain = StabChain {
            degree,
            generators: generators.clone(),
            levels: prefix.iter().map(|&b| Level::new(b, degree)).collect(),
        };
        if generators.is_empty() {
            for level in &mut chain.levels {
                level.rebuild_orbit();
            }
            return chain;
        }
        if chain.levels.is_empty() {
            let smallest = generators
                .iter()
                .filter_map(|g| g.smallest_moved_point())
                .min()
                .expect("non-identity generator");
            chain.levels.push(Level::new(smallest, degree));
        }
        for g in &generators {
            if chain.levels.iter().all(|l| g.image(l.base) == l.base) {
                let b = g.smallest_moved_point().unwrap();
                chain.levels.push(Level::new(b, degree));
            }
        }
        for g in &generators {
            chain.add_strong_generator(g.clone(), 0);
        }
        for level in &mut chain.levels {
            level.rebuild_orbit();
        }
        let top = chain.levels.len() - 1;
        chain.complete(top);
        chain
    }

    pub fn from_group(group: &PermGroup) -> Self {
        Self::new(group.degree(), group.generators())
    }

    /// Chain for `<self, extra>`, reusing the completed levels.
    pub fn extended(&self, extra: &Permutation) -> Self {
        assert_eq!(extra.degree(), self.degree);
        if self.contains_images(extra.images()) {
            return self.clone();
        }
        let mut chain = self.clone();
        chain.generators.push(extra.clone());
        if chain.levels.iter().all(|l| extra.image(l.base) == l.base) {
            let b = extra.smallest_moved_point().unwrap();
            chain.levels.push(Level::new(b, self.degree));
        }
        let deepest = chain.add_strong_generator(extra.clone(), 0);
        for l in 0..=deepest {
            chain.levels[l].rebuild_orbit();
        }
        chain.complete(deepest);
        chain
    }

    /// Adds `g` to every level from `from` on whose earlier base points it
    /// fixes. Returns the deepest level it was added to.
    fn add_strong_generator(&mut self, g: Permutation, from: usize) -> usize {
        let mut deepest = from;
        for l in from..self.levels.len() {
            if l > from && g.image(self.levels[l - 1].base) != self.levels[l - 1].base {
                break;
            }
            self.levels[l].gens.push(g.clone());
            deepest = l;
        }
        deepest
    }

    /// Schreier–Sims main loop: makes every level from `start` upwards
    /// complete, assuming deeper levels already are.
    fn complete(&mut self, start: usize) {
        let mut i = start as isize;
        'outer: while i >= 0 {
            let lvl = i as usize;
            let orbit_len = self.levels[lvl].orbit.len();
            let ngens = self.levels[lvl].gens.len();
            for j in 0..orbit_len {
                for s in 0..ngens {
                    let level = &self.levels[lvl];
                    let beta = level.orbit[j];
                    let gen = &level.gens[s];
                    let gamma = gen.image(beta);
                    let k = level.slot[gamma as usize] as usize;
                    let schreier = level.reps[j].then(gen).then(&level.inv_reps[k]);
                    let (residue, depth) = self.sift_from(schreier, lvl + 1);
                    if residue.is_identity() {
                        continue;
                    }
                    if depth == self.levels.len() {
                        let b = residue.smallest_moved_point().unwrap();
                        self.levels.push(Level::new(b, self.degree));
                    }
                    let deepest = self.add_strong_generator(residue, lvl + 1);
                    debug_assert!(deepest >= depth.min(self.levels.len() - 1));
                    for l in lvl + 1..=deepest {
                        self.levels[l].rebuild_orbit();
                    }
                    i = deepest as isize;
                    continue 'outer;
                }
            }
            i -= 1;
        }
    }

    /// Strips `g` through the levels starting at `from`. Returns the residue
    /// and the level at which stripping stopped (`levels.len()` if it went
    /// all the way through).
    fn sift_from(&self, mut g: Permutation, from: usize) -> (Permutation, usize) {
        for l in from..self.levels.len() {
            let level = &self.levels[l];
            let beta = g.image(level.base);
            let k = level.slot[beta as usize];
            if k == NONE {
                return (g, l);
            }
            g = g.then(&level.inv_reps[k as usize]);
        }
        (g, self.levels.len())
    }

    /// Residue and stopping level of `g` sifted through the whole chain.
    pub fn sift(&self, g: &Permutation) -> (Permutation, usize) {
        self.sift_from(g.clone(), 0)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn group(&self) -> PermGroup {
        PermGroup::new_unchecked(self.degree, self.generators.clone())
    }

    pub fn base(&self) -> Vec<u32> {
        self.levels.iter().map(|l| l.base).collect()
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    /// Orbit of the `i`-th base point under the `i`-th stabilizer.
    pub fn basic_orbit(&self, i: usize) -> &[u32] {
        &self.levels[i].orbit
    }

    /// Strong generators of the pointwise stabilizer of the first `i` base
    /// points (all strong generators for `i = 0`).
    pub fn stabilizer_generators(&self, i: usize) -> Vec<Permutation> {
        if i < self.levels.len() {
            self.levels[i].gens.clone()
        } else {
            Vec::new()
        }
    }

    pub fn strong_generators(&self) -> Vec<Permutation> {
        self.stabilizer_generators(0)
    }

    /// Transversal element mapping base point `i` to `point`, if any.
    pub fn transversal(&self, i: usize, point: u32) -> Option<&Permutation> {
        let level = &self.levels[i];
        match level.slot[point as usize] {
            NONE => None,
            k => Some(&level.reps[k as usize]),
        }
    }

    pub fn order(&self) -> u128 {
        self.levels.iter().map(|l| l.orbit.len() as u128).product()
    }

    pub fn is_trivial(&self) -> bool {
        self.generators.is_empty()
    }

    /// Membership test; errors on degree mismatch.
    pub fn contains(&self, p: &Permutation) -> Result<bool> {
        if p.degree() != self.degree {
            return Err(Error::DegreeMismatch(p.degree(), self.degree));
        }
        Ok(self.contains_images(p.images()))
    }

    /// Membership test on raw 0-based images (no allocation beyond one
    /// scratch buffer).
    pub fn contains_images(&self, images: &[u32]) -> bool {
        let mut buf = images.to_vec();
        self.contains_in_place(&mut buf)
    }

    /// Membership test that consumes `buf` as scratch space.
    pub fn contains_in_place(&self, buf: &mut [u32]) -> bool {
        for level in &self.levels {
            let beta = buf[level.base as usize];
            let k = level.slot[beta as usize];
            if k == NONE {
                return false;
            }
            if k != 0 {
                let inv = level.inv_reps[k as usize].images();
                for x in buf.iter_mut() {
                    *x = inv[*x as usize];
                }
            }
        }
        buf.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// Visits every element once, in a fixed order, until `f` breaks.
    pub fn for_each_element<F>(&self, mut f: F) -> ControlFlow<()>
    where
        F: FnMut(&[u32]) -> ControlFlow<()>,
    {
        let n = self.degree;
        let depth = self.levels.len();
        if depth == 0 {
            let id: Vec<u32> = (0..n as u32).collect();
            return f(&id);
        }
        // partial[i + 1] = w_i * .. * w_0 as a map, applying w_i first.
        let mut partial: Vec<Vec<u32>> = vec![(0..n as u32).collect(); depth + 1];
        let mut idx = vec![0usize; depth];
        let mut level = 0usize;
        loop {
            if idx[level] < self.levels[level].reps.len() {
                let w = self.levels[level].reps[idx[level]].images();
                let (lo, hi) = partial.split_at_mut(level + 1);
                let prev = &lo[level];
                for (a, out) in hi[0].iter_mut().enumerate() {
                    *out = prev[w[a] as usize];
                }
                if level + 1 == depth {
                    f(&partial[depth])?;
                    idx[level] += 1;
                } else {
                    level += 1;
                    idx[level] = 0;
                }
            } else {
                if level == 0 {
                    return ControlFlow::Continue(());
                }
                level -= 1;
                idx[level] += 1;
            }
        }
    }

    /// All elements, lazily, in the same order as
    /// [`StabChain::for_each_element`].
    pub fn elements(&self) -> Elements<'_> {
        Elements::new(self)
    }

    /// Elements of order exactly `k`, each once, lazily.
    pub fn elements_of_order(&self, k: u64) -> impl Iterator<Item = Permutation> + '_ {
        let order = self.order();
        let possible =
            k >= 1 && prime_divisors(k as u128).iter().all(|p| order.is_multiple_of(*p));
        self.elements()
            .take_while(move |_| possible)
            .filter(move |g| order_of(g.images()) == k)
    }

    /// Generators for the stabilizer of `point`.
    pub fn point_stabilizer(&self, point: u32) -> Result<PermGroup> {
        if point as usize >= self.degree {
            return Err(Error::PointOutOfRange {
                point: point as usize + 1,
                degree: self.degree,
            });
        }
        let chain = if self.levels.first().map(|l| l.base) == Some(point) {
            self.clone()
        } else {
            StabChain::with_base(self.degree, &self.generators, &[point])
        };
        Ok(PermGroup::new_unchecked(
            self.degree,
            chain.stabilizer_generators(1),
        ))
    }

    /// Orbit of `point` under the group.
    pub fn orbit(&self, point: u32) -> Vec<u32> {
        crate::group_ops::orbit_of(self.degree, &self.generators, point)
    }

    /// Checks the structural invariants: strong generators fix earlier
    /// base points and every generator sifts to the identity.
    pub fn verify(&self) -> bool {
        for (i, level) in self.levels.iter().enumerate() {
            for g in &level.gens {
                if self.levels[..i].iter().any(|l| g.image(l.base) != l.base) {
                    return false;
                }
            }
            for (j, rep) in level.reps.iter().enumerate() {
                if rep.image(level.base) != level.orbit[j] {
                    return false;
                }
            }
        }
        self.generators.iter().all(|g| self.contains_images(g.images()))
    }
}

/// Lazy element iterator over a [`StabChain`].
pub struct Elements<'a> {
    chain: &'a StabChain,
    partial: Vec<Vec<u32>>,
    idx: Vec<usize>,
    level: usize,
    done: bool,
}

impl<'a> Elements<'a> {
    fn new(chain: &'a StabChain) -> Self {
        let n = chain.degree;
        let depth = chain.levels.len();
        Elements {
            chain,
            partial: vec![(0..n as u32).collect(); depth + 1],
            idx: vec![0; depth],
            level: 0,
            done: false,
        }
    }
}

impl Iterator for Elements<'_> {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        if self.done {
            return None;
        }
        let depth = self.chain.levels.len();
        if depth == 0 {
            self.done = true;
            return Some(Permutation::identity(self.chain.degree));
        }
        loop {
            let level = self.level;
            if self.idx[level] < self.chain.levels[level].reps.len() {
                let w = self.chain.levels[level].reps[self.idx[level]].images();
                let (lo, hi) = self.partial.split_at_mut(level + 1);
                let prev = &lo[level];
                for (a, out) in hi[0].iter_mut().enumerate() {
                    *out = prev[w[a] as usize];
                }
                if level + 1 == depth {
                    self.idx[level] += 1;
                    return Some(Permutation::from_images_unchecked(
                        self.partial[depth].clone(),
                    ));
                }
                self.level += 1;
                self.idx[self.level] = 0;
            } else {
                if level == 0 {
                    self.done = true;
                    return None;
                }
                self.level -= 1;
                self.idx[self.level] += 1;
            }
        }
    }
}
