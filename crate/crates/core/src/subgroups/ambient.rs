//! The ambient group a subgroup enumeration runs in: either the full
//! `Sym(m)` (elements addressed by Lehmer rank) or a small group with an
//! explicit element table.

use std::ops::ControlFlow;

use crate::elements::{Bits, ElementTable};
use crate::error::Result;
use crate::group::{make_named, NamedKind, PermGroup};
use crate::perm::{order_of, prime_divisors, Permutation};
use crate::stabchain::StabChain;

pub(crate) enum AmbientKind {
    Sym,
    Table(ElementTable),
}

/// Prime-power-order elements of the ambient group, stored flat.
pub(crate) struct PrimePowerElements {
    pub degree: usize,
    pub images: Vec<u32>,
    /// `images` of `g^p`, where `p` is the prime dividing `|g|`.
    pub powers: Vec<u32>,
    pub primes: Vec<u8>,
}

impl PrimePowerElements {
    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn element(&self, i: usize) -> &[u32] {
        &self.images[i * self.degree..(i + 1) * self.degree]
    }

    pub fn power(&self, i: usize) -> &[u32] {
        &self.powers[i * self.degree..(i + 1) * self.degree]
    }
}

pub(crate) struct Ambient {
    pub group: PermGroup,
    pub chain: StabChain,
    pub kind: AmbientKind,
    pub ppo: PrimePowerElements,
}

fn prime_power_prime(order: u64) -> Option<u64> {
    let ps = prime_divisors(order as u128);
    (ps.len() == 1).then(|| ps[0] as u64)
}

impl Ambient {
    pub fn symmetric(m: usize) -> Self {
        let group = make_named(NamedKind::Symmetric, m).expect("m >= 1");
        let chain = group.chain();
        Self::build(group, chain, AmbientKind::Sym)
    }

    pub fn table(group: &PermGroup) -> Result<Self> {
        let table = ElementTable::new(group)?;
        let chain = table.chain().clone();
        Ok(Self::build(group.clone(), chain, AmbientKind::Table(table)))
    }

    fn build(group: PermGroup, chain: StabChain, kind: AmbientKind) -> Self {
        let n = group.degree();
        let mut ppo = PrimePowerElements {
            degree: n,
            images: Vec::new(),
            powers: Vec::new(),
            primes: Vec::new(),
        };
        let _ = chain.for_each_element(|g| {
            if let Some(p) = prime_power_prime(order_of(g)) {
                ppo.images.extend_from_slice(g);
                let gp = Permutation::from_images_unchecked(g.to_vec()).pow(p);
                ppo.powers.extend_from_slice(gp.images());
                ppo.primes.push(p as u8);
            }
            ControlFlow::Continue(())
        });
        Ambient { group, chain, kind, ppo }
    }

    pub fn degree(&self) -> usize {
        self.group.degree()
    }

    pub fn order(&self) -> u128 {
        self.chain.order()
    }

    pub fn is_symmetric(&self) -> bool {
        matches!(self.kind, AmbientKind::Sym)
    }

    /// Dense index of an ambient element in `0..order`.
    pub fn index_of(&self, images: &[u32]) -> usize {
        match &self.kind {
            AmbientKind::Sym => lehmer_rank(images),
            AmbientKind::Table(t) => t.index_of(images).expect("element of the ambient group") as usize,
        }
    }

    /// `N_A(H)`, as a chain.
    pub fn normalizer(&self, h: &PermGroup, hc: &StabChain) -> StabChain {
        match &self.kind {
            AmbientKind::Sym => crate::group_ops::normalizer_in_sym(h).chain(),
            AmbientKind::Table(t) => {
                let n = self.degree();
                let mut found = StabChain::new(n, h.generators());
                let mut buf = vec![0u32; n];
                for x in t.elements() {
                    if found.contains_images(x.images()) {
                        continue;
                    }
                    let xi = x.images();
                    let normalizes = h.generators().iter().all(|g| {
                        for (a, &b) in g.images().iter().enumerate() {
                            buf[xi[a] as usize] = xi[b as usize];
                        }
                        hc.contains_in_place(&mut buf)
                    });
                    if normalizes {
                        found = found.extended(x);
                    }
                }
                found
            }
        }
    }

    pub fn table_ref(&self) -> Option<&ElementTable> {
        match &self.kind {
            AmbientKind::Table(t) => Some(t),
            AmbientKind::Sym => None,
        }
    }

    /// Element set of a subgroup, for table ambients.
    pub fn bits(&self, chain: &StabChain) -> Option<Bits> {
        self.table_ref().map(|t| t.subgroup_bits(chain))
    }
}

/// Rank of a permutation of `0..n` in lexicographic order.
pub(crate) fn lehmer_rank(images: &[u32]) -> usize {
    let n = images.len();
    let mut rank = 0usize;
    let mut used: u64 = 0;
    for (i, &x) in images.iter().enumerate() {
        let smaller_unused = (x as u64) - (used & ((1u64 << x) - 1)).count_ones() as u64;
        rank = rank * (n - i) + smaller_unused as usize;
        used |= 1 << x;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lehmer_ranks_are_a_bijection() {
        let sym = make_named(NamedKind::Symmetric, 5).unwrap().chain();
        let mut ranks: Vec<usize> = sym.elements().map(|g| lehmer_rank(g.images())).collect();
        ranks.sort_unstable();
        assert_eq!(ranks, (0..120).collect::<Vec<_>>());
        assert_eq!(lehmer_rank(&[0, 1, 2, 3]), 0);
        assert_eq!(lehmer_rank(&[3, 2, 1, 0]), 23);
    }

    #[test]
    fn prime_power_elements_of_s4() {
        let a = Ambient::symmetric(4);
        // 6 transpositions, 3 double transpositions, 8 three-cycles, 6 four-cycles
        assert_eq!(a.ppo.len(), 23);
    }
}
