//! Explicit element tables for small groups, and element-set bitsets.
//!
//! Everything that needs to treat a group as a finite set (conjugacy
//! classes, cores, subgroup identification inside a small ambient group)
//! goes through [`ElementTable`].

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::{order_of, Permutation};
use crate::stabchain::StabChain;

/// Fixed-size bitset over the elements of an [`ElementTable`].
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Bits(Vec<u64>);

impl Bits {
    pub fn new(len: usize) -> Self {
        Bits(vec![0; len.div_ceil(64)])
    }

    #[inline]
    pub fn insert(&mut self, i: u32) -> bool {
        let (w, b) = ((i / 64) as usize, i % 64);
        let fresh = self.0[w] & (1 << b) == 0;
        self.0[w] |= 1 << b;
        fresh
    }

    #[inline]
    pub fn contains(&self, i: u32) -> bool {
        self.0[(i / 64) as usize] & (1 << (i % 64)) != 0
    }

    pub fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    pub fn is_subset(&self, other: &Bits) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.0.iter().enumerate().flat_map(|(w, &word)| {
            let mut word = word;
            std::iter::from_fn(move || {
                if word == 0 {
                    return None;
                }
                let b = word.trailing_zeros();
                word &= word - 1;
                Some(w as u32 * 64 + b)
            })
        })
    }
}

/// All elements of a permutation group, indexed.
pub struct ElementTable {
    degree: usize,
    elements: Vec<Permutation>,
    index: FxHashMap<Vec<u32>, u32>,
    inverse: Vec<u32>,
    orders: Vec<u64>,
    chain: StabChain,
}

/// Largest group this crate will tabulate element by element.
pub const ELEMENT_TABLE_CAP: u128 = 400_000;

impl ElementTable {
    pub fn new(group: &PermGroup) -> Result<Self> {
        Self::from_chain(group.chain())
    }

    pub fn from_chain(chain: StabChain) -> Result<Self> {
        let order = chain.order();
        if order > ELEMENT_TABLE_CAP {
            return Err(Error::OrderCap { order, cap: ELEMENT_TABLE_CAP });
        }
        let degree = chain.degree();
        let elements: Vec<Permutation> = chain.elements().collect();
        let mut index = FxHashMap::default();
        index.reserve(elements.len());
        for (i, e) in elements.iter().enumerate() {
            index.insert(e.images().to_vec(), i as u32);
        }
        let inverse = elements
            .iter()
            .map(|e| index[e.inverse().images()])
            .collect();
        let orders = elements.iter().map(|e| order_of(e.images())).collect();
        Ok(ElementTable {
            degree,
            elements,
            index,
            inverse,
            orders,
            chain,
        })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn chain(&self) -> &StabChain {
        &self.chain
    }

    pub fn element(&self, i: u32) -> &Permutation {
        &self.elements[i as usize]
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn index_of(&self, images: &[u32]) -> Option<u32> {
        self.index.get(images).copied()
    }

    pub fn identity(&self) -> u32 {
        self.index_of(&(0..self.degree as u32).collect::<Vec<_>>())
            .expect("identity present")
    }

    pub fn inverse(&self, i: u32) -> u32 {
        self.inverse[i as usize]
    }

    pub fn order(&self, i: u32) -> u64 {
        self.orders[i as usize]
    }

    /// Index of `a` then `b`.
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        let x = self.elements[a as usize].images();
        let y = self.elements[b as usize].images();
        let prod: Vec<u32> = x.iter().map(|&p| y[p as usize]).collect();
        self.index[&prod]
    }

    /// Index of `g^-1 a g`.
    pub fn conj(&self, a: u32, g: u32) -> u32 {
        let x = self.elements[a as usize].images();
        let gi = self.elements[g as usize].images();
        let mut out = vec![0u32; self.degree];
        for (p, &q) in x.iter().enumerate() {
            out[gi[p] as usize] = gi[q as usize];
        }
        self.index[&out]
    }

    /// Element set of the subgroup generated by `gens` (indices).
    pub fn closure(&self, gens: &[u32]) -> Bits {
        let mut bits = Bits::new(self.len());
        let id = self.identity();
        bits.insert(id);
        let mut queue = vec![id];
        while let Some(x) = queue.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if bits.insert(y) {
                    queue.push(y);
                }
            }
        }
        bits
    }

    /// Element set of a subgroup given by its stabilizer chain.
    pub fn subgroup_bits(&self, sub: &StabChain) -> Bits {
        let mut bits = Bits::new(self.len());
        let _ = sub.for_each_element(|g| {
            bits.insert(self.index[g]);
            std::ops::ControlFlow::Continue(())
        });
        bits
    }

    /// Conjugacy class id per element, class ids numbered by first
    /// element, plus the class sizes.
    pub fn conjugacy_classes(&self) -> (Vec<u32>, Vec<u32>) {
        let gens: Vec<u32> = self
            .chain
            .generators()
            .iter()
            .map(|g| self.index[g.images()])
            .collect();
        let mut class = vec![u32::MAX; self.len()];
        let mut sizes = Vec::new();
        for start in 0..self.len() as u32 {
            if class[start as usize] != u32::MAX {
                continue;
            }
            let id = sizes.len() as u32;
            class[start as usize] = id;
            let mut members = vec![start];
            let mut head = 0;
            while head < members.len() {
                let x = members[head];
                for &g in &gens {
                    let y = self.conj(x, g);
                    if class[y as usize] == u32::MAX {
                        class[y as usize] = id;
                        members.push(y);
                    }
                }
                head += 1;
            }
            sizes.push(members.len() as u32);
        }
        (class, sizes)
    }

    /// Generators (as indices) of the table's group.
    pub fn generator_indices(&self) -> Vec<u32> {
        self.chain
            .generators()
            .iter()
            .map(|g| self.index[g.images()])
            .collect()
    }

    /// Group generated by the elements with the given indices.
    pub fn group_of(&self, indices: &[u32]) -> PermGroup {
        PermGroup::new_unchecked(
            self.degree,
            indices.iter().map(|&i| self.elements[i as usize].clone()).collect(),
        )
    }

    /// A small generating set for the subgroup with element set `bits`.
    pub fn generators_of(&self, bits: &Bits) -> Vec<u32> {
        let mut chain = StabChain::new(self.degree, &[]);
        let mut gens = Vec::new();
        let target = bits.count() as u128;
        for i in bits.iter() {
            if chain.order() == target {
                break;
            }
            let e = &self.elements[i as usize];
            if !chain.contains_images(e.images()) {
                chain = chain.extended(e);
                gens.push(i);
            }
        }
        gens
    }
}
