//! Permutation groups given by generators, and the named families used
//! throughout the crate.

use std::fmt;

use crate::error::{Error, Result};
use crate::perm::{parse_perm, Permutation};
use crate::stabchain::StabChain;

/// A permutation group on `degree` points, given by generators. The empty
/// generator list is the trivial group.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
}

impl PermGroup {
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self> {
        if degree == 0 {
            return Err(Error::InvalidArgument("degree must be positive".into()));
        }
        if let Some(g) = generators.iter().find(|g| g.degree() != degree) {
            return Err(Error::DegreeMismatch(g.degree(), degree));
        }
        Ok(Self::new_unchecked(degree, generators))
    }

    pub(crate) fn new_unchecked(degree: usize, generators: Vec<Permutation>) -> Self {
        let generators = generators.into_iter().filter(|g| !g.is_identity()).collect();
        PermGroup { degree, generators }
    }

    pub fn trivial(degree: usize) -> Self {
        PermGroup {
            degree,
            generators: Vec::new(),
        }
    }

    /// Parses generators written in cycle notation.
    pub fn from_cycle_strings<S: AsRef<str>>(degree: usize, gens: &[S]) -> Result<Self> {
        let gens = gens
            .iter()
            .map(|s| parse_perm(s.as_ref(), degree))
            .collect::<Result<Vec<_>>>()?;
        Self::new(degree, gens)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn is_trivial(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn chain(&self) -> StabChain {
        StabChain::from_group(self)
    }

    pub fn order(&self) -> u128 {
        self.chain().order()
    }

    /// Conjugate group `G^g`.
    pub fn conjugate_by(&self, g: &Permutation) -> PermGroup {
        PermGroup::new_unchecked(
            self.degree,
            self.generators.iter().map(|x| x.conjugate_by(g)).collect(),
        )
    }

    pub fn with_generator(&self, g: Permutation) -> PermGroup {
        let mut gens = self.generators.clone();
        gens.push(g);
        PermGroup::new_unchecked(self.degree, gens)
    }

    /// Generators written in cycle notation.
    pub fn generator_strings(&self) -> Vec<String> {
        self.generators.iter().map(|g| g.to_string()).collect()
    }
}

impl fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, g) in self.generators.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, "> on {} points", self.degree)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NamedKind {
    Symmetric,
    Alternating,
    Cyclic,
}

fn n_cycle(n: usize) -> Permutation {
    let images = (0..n as u32).map(|a| (a + 1) % n as u32).collect();
    Permutation::from_images_unchecked(images)
}

/// Standard generators of `Sym(n)`, `Alt(n)` or the cyclic group `C_n`
/// acting regularly on `n` points.
pub fn make_named(kind: NamedKind, n: usize) -> Result<PermGroup> {
    if n < 1 {
        return Err(Error::InvalidArgument(format!("{kind:?} group needs n >= 1")));
    }
    let gens = match kind {
        NamedKind::Symmetric if n >= 2 => {
            vec![Permutation::from_cycles(n, &[&[0, 1]])?, n_cycle(n)]
        }
        NamedKind::Alternating if n >= 3 => (2..n as u32)
            .map(|c| Permutation::from_cycles(n, &[&[0, 1, c]]))
            .collect::<Result<_>>()?,
        NamedKind::Cyclic => vec![n_cycle(n)],
        _ => Vec::new(),
    };
    PermGroup::new(n, gens)
}

/// The imprimitive reflection group `G(p,p,q)` on `p*q` points in `q`
/// blocks of size `p`: block swaps plus one element translating the first
/// block by `+1` and the second by `-1` (mod `p`).
pub fn make_gppq(p: usize, q: usize) -> Result<PermGroup> {
    if p < 2 || q < 2 {
        return Err(Error::InvalidArgument(format!("G(p,p,q) needs p, q >= 2, got p={p} q={q}")));
    }
    let n = p * q;
    let mut gens = Vec::with_capacity(q);
    for j in 0..q - 1 {
        let mut images: Vec<u32> = (0..n as u32).collect();
        for i in 0..p {
            images[j * p + i] = ((j + 1) * p + i) as u32;
            images[(j + 1) * p + i] = (j * p + i) as u32;
        }
        gens.push(Permutation::from_images_unchecked(images));
    }
    let mut twist: Vec<u32> = (0..n as u32).collect();
    for i in 0..p {
        twist[i] = ((i + 1) % p) as u32;
        twist[p + i] = (p + (i + p - 1) % p) as u32;
    }
    gens.push(Permutation::from_images_unchecked(twist));
    PermGroup::new(n, gens)
}

/// `G x H` acting on the disjoint union of the two point sets, `H` moved
/// up by `deg(G)`.
pub fn direct_product_disjoint(g: &PermGroup, h: &PermGroup) -> PermGroup {
    let n = g.degree() + h.degree();
    let mut gens: Vec<Permutation> = g.generators().iter().map(|x| x.extend(n)).collect();
    gens.extend(h.generators().iter().map(|x| x.shifted(g.degree(), n)));
    PermGroup::new_unchecked(n, gens)
}

/// The subgroup generated by the union of the two generating sets.
pub fn join(g: &PermGroup, h: &PermGroup) -> Result<PermGroup> {
    if g.degree() != h.degree() {
        return Err(Error::DegreeMismatch(g.degree(), h.degree()));
    }
    let mut gens = g.generators().to_vec();
    gens.extend(h.generators().iter().cloned());
    Ok(PermGroup::new_unchecked(g.degree(), gens))
}
