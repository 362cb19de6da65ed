//! Isomorphism testing for permutation groups.
//!
//! Two groups are compared first by cheap invariants, then by a backtrack
//! over images of a generating tuple of `G` in `H`. An accepted tuple is
//! certified by the graph subgroup `<(g_i, h_i)>` of `G × H` acting on the
//! disjoint union of the two point sets.

use std::cmp::Reverse;
use std::collections::BTreeMap;

use rustc_hash::FxHashMap;

use crate::elements::ElementTable;
use crate::error::Result;
use crate::group::PermGroup;
use crate::group_ops::{center_order, derived_series_orders, is_abelian};
use crate::perm::Permutation;
use crate::stabchain::StabChain;

/// Isomorphism invariants of a group, plus the generating tuple the
/// search is rooted at.
#[derive(Clone, Debug)]
pub struct IsoProfile {
    pub order: u128,
    pub element_orders: BTreeMap<u64, u64>,
    pub abelian: bool,
    pub center_order: u128,
    pub derived_series: Vec<u128>,
    /// `(element order, class size)` → number of conjugacy classes.
    pub class_sizes: BTreeMap<(u64, u64), u64>,
    pub generating_tuple: Vec<Permutation>,
}

impl IsoProfile {
    /// Whether every invariant field agrees. The generating tuple is not
    /// an invariant and is ignored.
    pub fn same_invariants(&self, other: &IsoProfile) -> bool {
        self.order == other.order
            && self.element_orders == other.element_orders
            && self.abelian == other.abelian
            && self.center_order == other.center_order
            && self.derived_series == other.derived_series
            && self.class_sizes == other.class_sizes
    }
}

pub fn invariant_profile(group: &PermGroup) -> Result<IsoProfile> {
    Ok(IsoData::new(group)?.profile)
}

pub fn is_isomorphic(g: &PermGroup, h: &PermGroup) -> Result<bool> {
    Ok(find_isomorphism(g, h)?.is_some())
}

pub fn find_isomorphism(g: &PermGroup, h: &PermGroup) -> Result<Option<IsoCertificate>> {
    if g.order() != h.order() {
        return Ok(None);
    }
    Ok(IsoData::new(g)?.isomorphism_to(&IsoData::new(h)?))
}

/// An isomorphism `g_i ↦ h_i` together with its graph subgroup.
#[derive(Clone, Debug)]
pub struct IsoCertificate {
    pub sources: Vec<Permutation>,
    pub images: Vec<Permutation>,
    /// `<(g_i, h_i)>` on `deg(G) + deg(H)` points, `G` on the low points.
    pub graph: PermGroup,
    pub graph_order: u128,
    /// Order of the graph subgroup's intersection with `1 × H`.
    pub kernel_order: u128,
}

impl IsoCertificate {
    /// Rechecks the certificate from scratch against `G` and `H`.
    pub fn verify(&self, g: &PermGroup, h: &PermGroup) -> bool {
        let order = g.order();
        let sources = PermGroup::new_unchecked(g.degree(), self.sources.clone());
        let images = PermGroup::new_unchecked(h.degree(), self.images.clone());
        let (graph_order, kernel_order) = graph_orders(g.degree(), h.degree(), &self.sources, &self.images);
        sources.order() == order
            && images.order() == h.order()
            && graph_order == order
            && kernel_order == 1
            && self.graph_order == graph_order
            && self.kernel_order == kernel_order
    }
}

/// `(a, b)` acting on the disjoint union, `a` on the low points.
fn pair(a: &Permutation, b: &Permutation) -> Permutation {
    let mut images: Vec<u32> = a.images().to_vec();
    images.extend(b.images().iter().map(|&x| x + a.degree() as u32));
    Permutation::from_images_unchecked(images)
}

fn graph_chain(ng: usize, nh: usize, gs: &[Permutation], hs: &[Permutation]) -> StabChain {
    let gens: Vec<Permutation> = gs.iter().zip(hs).map(|(a, b)| pair(a, b)).collect();
    let prefix: Vec<u32> = (0..ng as u32).collect();
    StabChain::with_base(ng + nh, &gens, &prefix)
}

/// Order of the graph chain restricted to the levels past the `G` points.
fn kernel_order(chain: &StabChain, ng: usize) -> u128 {
    (ng..chain.depth()).map(|i| chain.basic_orbit(i).len() as u128).product()
}

fn graph_orders(ng: usize, nh: usize, gs: &[Permutation], hs: &[Permutation]) -> (u128, u128) {
    let chain = graph_chain(ng, nh, gs, hs);
    (chain.order(), kernel_order(&chain, ng))
}

type Signature = (u64, u32);

/// Element table of a group with conjugacy data, reusable across many
/// isomorphism tests.
pub struct IsoData {
    group: PermGroup,
    table: ElementTable,
    class_of: Vec<u32>,
    class_size: Vec<u32>,
    /// Elements by `(order, class size)`, in table order.
    by_signature: FxHashMap<Signature, Vec<u32>>,
    /// First element of each conjugacy class, by signature.
    class_reps: FxHashMap<Signature, Vec<u32>>,
    pub profile: IsoProfile,
}

impl IsoData {
    pub fn new(group: &PermGroup) -> Result<Self> {
        let table = ElementTable::new(group)?;
        let (class_of, class_size) = table.conjugacy_classes();
        let mut by_signature: FxHashMap<Signature, Vec<u32>> = FxHashMap::default();
        let mut class_reps: FxHashMap<Signature, Vec<u32>> = FxHashMap::default();
        let mut seen_class = vec![false; class_size.len()];
        let mut element_orders = BTreeMap::new();
        let mut class_sizes = BTreeMap::new();
        for i in 0..table.len() as u32 {
            let c = class_of[i as usize];
            let sig = (table.order(i), class_size[c as usize]);
            *element_orders.entry(sig.0).or_insert(0u64) += 1;
            by_signature.entry(sig).or_default().push(i);
            if !seen_class[c as usize] {
                seen_class[c as usize] = true;
                class_reps.entry(sig).or_default().push(i);
                *class_sizes.entry((sig.0, sig.1 as u64)).or_insert(0u64) += 1;
            }
        }
        let mut data = IsoData {
            group: group.clone(),
            table,
            class_of,
            class_size,
            by_signature,
            class_reps,
            profile: IsoProfile {
                order: group.order(),
                element_orders,
                abelian: is_abelian(group),
                center_order: center_order(group),
                derived_series: derived_series_orders(group),
                class_sizes,
                generating_tuple: Vec::new(),
            },
        };
        let tuple = data.generating_tuple();
        data.profile.generating_tuple = tuple.iter().map(|&i| data.table.element(i).clone()).collect();
        Ok(data)
    }

    pub fn group(&self) -> &PermGroup {
        &self.group
    }

    fn signature(&self, i: u32) -> Signature {
        (self.table.order(i), self.class_size[self.class_of[i as usize] as usize])
    }

    /// Greedy generating tuple: each step adds the element giving the
    /// largest subgroup (the first step, the largest element order),
    /// preferring smaller conjugacy classes on ties.
    fn generating_tuple(&self) -> Vec<u32> {
        let n = self.table.degree();
        let target = self.table.len() as u128;
        let mut order: Vec<u32> = (0..self.table.len() as u32).collect();
        order.sort_by_key(|&i| (self.signature(i).1, Reverse(self.table.order(i)), i));
        let mut chain = StabChain::new(n, &[]);
        let mut tuple = Vec::new();
        if target > 1 {
            let first = (0..self.table.len() as u32)
                .max_by_key(|&i| (self.table.order(i), Reverse(self.signature(i).1), Reverse(i)))
                .unwrap();
            chain = chain.extended(self.table.element(first));
            tuple.push(first);
        }
        while chain.order() < target {
            let mut best: Option<(u128, u32, StabChain)> = None;
            for &i in &order {
                let e = self.table.element(i);
                if chain.contains_images(e.images()) {
                    continue;
                }
                let ext = chain.extended(e);
                let o = ext.order();
                if best.as_ref().is_none_or(|b| o > b.0) {
                    best = Some((o, i, ext));
                    if o == target {
                        break;
                    }
                }
            }
            let (_, i, ext) = best.expect("proper subgroup has an element outside");
            chain = ext;
            tuple.push(i);
        }
        tuple
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        self.table.mul(a, b)
    }

    fn word_signatures(&self, a: u32, b: u32) -> [Signature; 3] {
        let ab = self.mul(a, b);
        let ab_inv = self.mul(a, self.table.inverse(b));
        let comm = self.mul(
            self.mul(self.table.inverse(a), self.table.inverse(b)),
            ab,
        );
        [self.signature(ab), self.signature(ab_inv), self.signature(comm)]
    }

    /// An isomorphism from this group onto `other`, if one exists.
    pub fn isomorphism_to(&self, other: &IsoData) -> Option<IsoCertificate> {
        if !self.profile.same_invariants(&other.profile) {
            return None;
        }
        let tuple: Vec<u32> = self
            .profile
            .generating_tuple
            .iter()
            .map(|g| self.table.index_of(g.images()).unwrap())
            .collect();
        let ng = self.table.degree();
        let nh = other.table.degree();
        let prefix_orders: Vec<u128> = (1..=tuple.len())
            .map(|k| {
                let gens: Vec<Permutation> =
                    tuple[..k].iter().map(|&i| self.table.element(i).clone()).collect();
                StabChain::new(ng, &gens).order()
            })
            .collect();
        let words: Vec<Vec<[Signature; 3]>> = (0..tuple.len())
            .map(|i| (0..i).map(|j| self.word_signatures(tuple[i], tuple[j])).collect())
            .collect();
        let prefix: Vec<u32> = (0..ng as u32).collect();
        let empty = StabChain::with_base(ng + nh, &[], &prefix);
        let mut images = Vec::with_capacity(tuple.len());
        let found = self.search(other, &tuple, &prefix_orders, &words, &empty, &mut images);
        let images = found?;
        let sources: Vec<Permutation> = tuple.iter().map(|&i| self.table.element(i).clone()).collect();
        let hs: Vec<Permutation> = images.iter().map(|&i| other.table.element(i).clone()).collect();
        let chain = graph_chain(ng, nh, &sources, &hs);
        let cert = IsoCertificate {
            graph: chain.group(),
            graph_order: chain.order(),
            kernel_order: kernel_order(&chain, ng),
            sources,
            images: hs,
        };
        debug_assert!(cert.verify(&self.group, &other.group));
        Some(cert)
    }

    fn search(
        &self,
        other: &IsoData,
        tuple: &[u32],
        prefix_orders: &[u128],
        words: &[Vec<[Signature; 3]>],
        graph: &StabChain,
        images: &mut Vec<u32>,
    ) -> Option<Vec<u32>> {
        let i = images.len();
        if i == tuple.len() {
            let hs: Vec<Permutation> = images.iter().map(|&x| other.table.element(x).clone()).collect();
            let generated = StabChain::new(other.table.degree(), &hs).order();
            return (generated == other.profile.order).then(|| images.clone());
        }
        let sig = self.signature(tuple[i]);
        // Composing with an inner automorphism of H fixes h_1 up to conjugacy.
        let pool = if i == 0 { other.class_reps.get(&sig) } else { other.by_signature.get(&sig) };
        let ng = self.table.degree();
        for &h in pool.map(|v| v.as_slice()).unwrap_or(&[]) {
            if (0..i).any(|j| other.word_signatures(h, images[j]) != words[i][j]) {
                continue;
            }
            let g_elem = self.table.element(tuple[i]);
            let h_elem = other.table.element(h);
            let next = graph.extended(&pair(g_elem, h_elem));
            if next.order() != prefix_orders[i] || kernel_order(&next, ng) != 1 {
                continue;
            }
            images.push(h);
            if let Some(found) = self.search(other, tuple, prefix_orders, words, &next, images) {
                return Some(found);
            }
            images.pop();
        }
        None
    }
}
