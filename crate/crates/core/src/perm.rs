//! Permutations of `{1..n}` and their cycle notation.
//!
//! Points are stored 0-based; every textual form (parsing, `Display`) is
//! 1-based. Products act on the right: `p.then(&q)` applies `p` first.

use std::fmt;
use std::ops::Mul;

use crate::error::{Error, Result};

/// A bijection of the points `0..degree`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree as u32).collect(),
        }
    }

    /// Builds a permutation from 0-based images, rejecting anything that is
    /// not a bijection.
    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            let x = x as usize;
            if x >= n {
                return Err(Error::PointOutOfRange { point: x + 1, degree: n });
            }
            if seen[x] {
                return Err(Error::NotABijection);
            }
            seen[x] = true;
        }
        Ok(Permutation { images })
    }

    pub(crate) fn from_images_unchecked(images: Vec<u32>) -> Self {
        debug_assert!(Permutation::from_images(images.clone()).is_ok());
        Permutation { images }
    }

    /// Builds a permutation of `degree` points from 0-based cycles.
    pub fn from_cycles(degree: usize, cycles: &[&[u32]]) -> Result<Self> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut used = vec![false; degree];
        for cycle in cycles {
            for (i, &a) in cycle.iter().enumerate() {
                let a = a as usize;
                if a >= degree {
                    return Err(Error::PointOutOfRange { point: a + 1, degree });
                }
                if used[a] {
                    return Err(Error::RepeatedPoint(a + 1));
                }
                used[a] = true;
                images[a] = cycle[(i + 1) % cycle.len()];
            }
        }
        Ok(Permutation { images })
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of the 0-based point `a`.
    #[inline]
    pub fn image(&self, a: u32) -> u32 {
        self.images[a as usize]
    }

    #[inline]
    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn into_images(self) -> Vec<u32> {
        self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// `self` then `other`: maps `a` to `other(self(a))`.
    #[inline]
    pub fn then(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.degree(), other.degree(), "degree mismatch");
        Permutation {
            images: self.images.iter().map(|&a| other.images[a as usize]).collect(),
        }
    }

    /// Checked version of [`Permutation::then`].
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch(self.degree(), other.degree()));
        }
        Ok(self.then(other))
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Permutation { images: inv }
    }

    /// `g^-1 * self * g`, the conjugate moved along `g`.
    pub fn conjugate_by(&self, g: &Permutation) -> Permutation {
        assert_eq!(self.degree(), g.degree(), "degree mismatch");
        let mut out = vec![0; self.degree()];
        for (a, &b) in self.images.iter().enumerate() {
            out[g.images[a] as usize] = g.images[b as usize];
        }
        Permutation { images: out }
    }

    pub fn pow(&self, mut k: u64) -> Permutation {
        let mut base = self.clone();
        let mut acc = Permutation::identity(self.degree());
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.then(&base);
            }
            base = base.then(&base);
            k >>= 1;
        }
        acc
    }

    /// Disjoint cycles of length at least two, each starting at its
    /// smallest point, listed by smallest point.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start as u32];
            seen[start] = true;
            let mut a = self.images[start] as usize;
            while a != start {
                seen[a] = true;
                cycle.push(a as u32);
                a = self.images[a] as usize;
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }

    /// Sorted (descending) cycle lengths, fixed points included.
    pub fn cycle_type(&self) -> Vec<u32> {
        cycle_type_of(&self.images)
    }

    /// Least `k >= 1` with `self^k` the identity.
    pub fn order(&self) -> u64 {
        order_of(&self.images)
    }

    pub fn is_even(&self) -> bool {
        self.cycles().iter().map(|c| c.len() - 1).sum::<usize>() % 2 == 0
    }

    pub fn moved_points(&self) -> impl Iterator<Item = u32> + '_ {
        self.images
            .iter()
            .enumerate()
            .filter(|(i, &x)| *i as u32 != x)
            .map(|(i, _)| i as u32)
    }

    pub fn smallest_moved_point(&self) -> Option<u32> {
        self.moved_points().next()
    }

    /// The same permutation acting on `degree` points, fixing the new ones.
    pub fn extend(&self, degree: usize) -> Permutation {
        assert!(degree >= self.degree());
        let mut images = self.images.clone();
        images.extend(self.degree() as u32..degree as u32);
        Permutation { images }
    }

    /// Relabels the points by `a -> a + offset` inside a larger domain.
    pub fn shifted(&self, offset: usize, degree: usize) -> Permutation {
        assert!(offset + self.degree() <= degree);
        let mut images: Vec<u32> = (0..degree as u32).collect();
        for (a, &b) in self.images.iter().enumerate() {
            images[a + offset] = b + offset as u32;
        }
        Permutation { images }
    }
}

impl Mul for &Permutation {
    type Output = Permutation;

    fn mul(self, rhs: &Permutation) -> Permutation {
        self.then(rhs)
    }
}

pub(crate) fn order_of(images: &[u32]) -> u64 {
    let mut seen = vec![false; images.len()];
    let mut acc = 1u64;
    for start in 0..images.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0u64;
        let mut a = start;
        while !seen[a] {
            seen[a] = true;
            len += 1;
            a = images[a] as usize;
        }
        acc = lcm(acc, len);
    }
    acc
}

pub(crate) fn cycle_type_of(images: &[u32]) -> Vec<u32> {
    let mut seen = vec![false; images.len()];
    let mut out = Vec::new();
    for start in 0..images.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut a = start;
        while !seen[a] {
            seen[a] = true;
            len += 1;
            a = images[a] as usize;
        }
        out.push(len);
    }
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub(crate) fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Distinct prime divisors in increasing order.
pub(crate) fn prime_divisors(mut n: u128) -> Vec<u128> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for cycle in cycles {
            f.write_str("(")?;
            for (i, a) in cycle.iter().enumerate() {
                if i > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{}", a + 1)?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Parses cycle notation over the points `1..=degree`.
///
/// Accepts `"()"`, `"id"` or the empty string for the identity, and
/// products of disjoint cycles such as `"(1 2)(3,4,5)"`.
pub fn parse_perm(text: &str, degree: usize) -> Result<Permutation> {
    let t = text.trim();
    if t.is_empty() || t == "id" {
        return Ok(Permutation::identity(degree));
    }
    let malformed = |msg: &str| Error::Malformed(format!("{msg} in {text:?}"));
    let mut cycles: Vec<Vec<u32>> = Vec::new();
    let mut rest = t;
    while !rest.is_empty() {
        rest = rest.trim_start();
        if rest.is_empty() {
            break;
        }
        let body = rest
            .strip_prefix('(')
            .ok_or_else(|| malformed("expected '('"))?;
        let close = body.find(')').ok_or_else(|| malformed("unclosed cycle"))?;
        let inner = &body[..close];
        if inner.contains('(') {
            return Err(malformed("nested '('"));
        }
        let mut cycle = Vec::new();
        for tok in inner.split(|c: char| c == ',' || c.is_whitespace()) {
            if tok.is_empty() {
                continue;
            }
            let p: usize = tok
                .parse()
                .map_err(|_| malformed(&format!("bad point {tok:?}")))?;
            if p == 0 || p > degree {
                return Err(Error::PointOutOfRange { point: p, degree });
            }
            cycle.push((p - 1) as u32);
        }
        cycles.push(cycle);
        rest = &body[close + 1..];
    }
    let refs: Vec<&[u32]> = cycles.iter().map(|c| c.as_slice()).collect();
    Permutation::from_cycles(degree, &refs)
}

/// Cycle notation, 1-based. Alias of the `Display` impl.
pub fn format_perm(p: &Permutation) -> String {
    p.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, n: usize) -> Permutation {
        parse_perm(s, n).unwrap()
    }

    #[test]
    fn parse_three_cycle() {
        let c = p("(1 2 3)", 3);
        assert_eq!(c.images(), &[1, 2, 0]);
    }

    #[test]
    fn parse_identity_forms() {
        for s in ["()", "id", "", "  ()  "] {
            assert!(p(s, 5).is_identity());
            assert_eq!(p(s, 5).degree(), 5);
        }
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_perm("(1 2)(2 3)", 3), Err(Error::RepeatedPoint(2))));
        assert!(matches!(
            parse_perm("(1 4)", 3),
            Err(Error::PointOutOfRange { point: 4, degree: 3 })
        ));
        assert!(matches!(parse_perm("(0 1)", 3), Err(Error::PointOutOfRange { .. })));
        assert!(matches!(parse_perm("(1 2", 3), Err(Error::Malformed(_))));
        assert!(matches!(parse_perm("1 2)", 3), Err(Error::Malformed(_))));
        assert!(matches!(parse_perm("(1 x)", 3), Err(Error::Malformed(_))));
        assert!(matches!(parse_perm("(1 (2))", 3), Err(Error::Malformed(_))));
    }

    #[test]
    fn commas_and_whitespace() {
        assert_eq!(p("(1,2, 3)( 4  5 )", 5), p("(1 2 3)(4 5)", 5));
    }

    #[test]
    fn compose_is_left_first() {
        let c = p("(1 2)", 3).compose(&p("(2 3)", 3)).unwrap();
        assert_eq!(c, p("(1 3 2)", 3));
        assert_eq!(c.to_string(), "(1 3 2)");
        assert!(p("(1 2)", 3).compose(&p("(1 2)", 4)).is_err());
    }

    #[test]
    fn inverse_and_identity() {
        let x = p("(1 5 2)(3 4)", 6);
        assert!(x.then(&x.inverse()).is_identity());
        assert_eq!(Permutation::identity(6).then(&x), x);
    }

    #[test]
    fn orders() {
        assert_eq!(p("(1 2)(3 4 5)", 5).order(), 6);
        assert_eq!(Permutation::identity(4).order(), 1);
        assert_eq!(p("(1 2 3 4 5 6 7)", 7).order(), 7);
    }

    #[test]
    fn conjugation_relabels_cycles() {
        let x = p("(1 2 3)", 4);
        let g = p("(1 4)", 4);
        assert_eq!(x.conjugate_by(&g), p("(4 2 3)", 4));
        assert_eq!(x.conjugate_by(&g), g.inverse().then(&x).then(&g));
    }

    #[test]
    fn powers() {
        let x = p("(1 2 3 4 5 6)", 6);
        assert_eq!(x.pow(2), x.then(&x));
        assert!(x.pow(6).is_identity());
        assert_eq!(x.pow(7), x);
    }

    #[test]
    fn parity_and_support() {
        assert!(p("(1 2 3)", 4).is_even());
        assert!(!p("(1 2)", 4).is_even());
        assert_eq!(p("(2 4)", 5).moved_points().collect::<Vec<_>>(), vec![1, 3]);
        assert_eq!(p("(1 2)", 2).shifted(3, 5), p("(4 5)", 5));
    }

    #[test]
    fn primes() {
        assert_eq!(prime_divisors(360), vec![2, 3, 5]);
        assert_eq!(prime_divisors(1), Vec::<u128>::new());
        assert_eq!(prime_divisors(49), vec![7]);
    }
}
