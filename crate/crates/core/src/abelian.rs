//! Finite abelian groups given as direct products of cyclic groups.
//!
//! Elements are residue vectors. The lexicographic order on residue vectors
//! (first coordinate most significant) is the total order used for every
//! canonical encoding downstream, and it coincides with the order of the
//! mixed-radix element index returned by [`GroupSpec::index_of`].

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::numeric::{factorize, gcd, lcm};

/// Largest group order that [`GroupSpec::elements`] will materialize.
pub const MAX_ENUMERATION_ORDER: u64 = 1 << 20;

/// A finite abelian group `C_{f_1} x ... x C_{f_n}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupSpec {
    factors: Vec<u32>,
    order: u64,
    exponent: u64,
}

/// An element of a [`GroupSpec`], stored as reduced residues.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct GroupElement {
    coords: Vec<u32>,
}

impl GroupElement {
    /// Wraps raw coordinates without reducing them. Use [`GroupSpec::element`]
    /// for validated construction.
    pub fn from_coords(coords: Vec<u32>) -> Self {
        GroupElement { coords }
    }

    pub fn coords(&self) -> &[u32] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_list(f, &self.coords)
    }
}

impl FromStr for GroupElement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(GroupElement { coords: parse_list(s)? })
    }
}

impl GroupSpec {
    pub fn new(factors: Vec<u32>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::Contract("a group needs at least one cyclic factor".into()));
        }
        if let Some(&bad) = factors.iter().find(|&&f| f < 2) {
            return Err(Error::Contract(format!("cyclic factor {bad} is smaller than 2")));
        }
        let mut order: u64 = 1;
        let mut exponent: u64 = 1;
        for &f in &factors {
            order = order
                .checked_mul(f as u64)
                .ok_or_else(|| Error::Capacity("group order overflows 64 bits".into()))?;
            exponent = lcm(exponent, f as u64);
        }
        Ok(GroupSpec {
            factors,
            order,
            exponent,
        })
    }

    pub fn factors(&self) -> &[u32] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    /// Returns `Some(p)` when the order is a power of the prime `p`.
    pub fn prime(&self) -> Option<u64> {
        let primes = factorize(self.order);
        match primes.as_slice() {
            [(p, _)] => Some(*p),
            _ => None,
        }
    }

    /// True when all cyclic factors have the same order.
    pub fn is_homocyclic(&self) -> bool {
        self.factors.windows(2).all(|w| w[0] == w[1])
    }

    /// Invariant-factor form: each factor divides the next.
    pub fn canonicalize(&self) -> GroupSpec {
        // collect prime-power parts per prime, largest first
        let mut per_prime: Vec<(u64, Vec<u64>)> = Vec::new();
        for &f in &self.factors {
            for (p, e) in factorize(f as u64) {
                let q = p.pow(e);
                match per_prime.iter_mut().find(|(pp, _)| *pp == p) {
                    Some((_, v)) => v.push(q),
                    None => per_prime.push((p, vec![q])),
                }
            }
        }
        let len = per_prime.iter().map(|(_, v)| v.len()).max().unwrap_or(0);
        let mut inv = vec![1u64; len];
        for (_, powers) in per_prime.iter_mut() {
            powers.sort_unstable_by(|a, b| b.cmp(a));
            for (k, q) in powers.iter().enumerate() {
                inv[len - 1 - k] *= q;
            }
        }
        let factors: Vec<u32> = inv.into_iter().filter(|&x| x > 1).map(|x| x as u32).collect();
        GroupSpec::new(factors).expect("canonical factors of a valid spec are valid")
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement {
            coords: vec![0; self.rank()],
        }
    }

    /// The `i`-th standard generator.
    pub fn basis(&self, i: usize) -> GroupElement {
        let mut e = self.zero();
        e.coords[i] = 1;
        e
    }

    /// Validated construction: the coordinates must already be reduced.
    pub fn element(&self, coords: Vec<u32>) -> Result<GroupElement> {
        let e = GroupElement { coords };
        self.check(&e)?;
        Ok(e)
    }

    /// Reduces arbitrary integers into an element.
    pub fn reduce(&self, coords: &[i64]) -> Result<GroupElement> {
        self.check_len(coords.len())?;
        Ok(GroupElement {
            coords: coords
                .iter()
                .zip(&self.factors)
                .map(|(&c, &f)| c.rem_euclid(f as i64) as u32)
                .collect(),
        })
    }

    pub(crate) fn check_len(&self, len: usize) -> Result<()> {
        if len != self.rank() {
            return Err(Error::Shape(format!("expected {} coordinates, got {len}", self.rank())));
        }
        Ok(())
    }

    pub fn check(&self, a: &GroupElement) -> Result<()> {
        self.check_len(a.len())?;
        for (i, (&c, &f)) in a.coords.iter().zip(&self.factors).enumerate() {
            if c >= f {
                return Err(Error::Shape(format!("coordinate {i} = {c} is not reduced modulo {f}")));
            }
        }
        Ok(())
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.check_len(a.len())?;
        self.check_len(b.len())?;
        Ok(self.add_unchecked(a, b))
    }

    pub(crate) fn add_unchecked(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        GroupElement {
            coords: a
                .coords
                .iter()
                .zip(&b.coords)
                .zip(&self.factors)
                .map(|((&x, &y), &f)| ((x as u64 + y as u64) % f as u64) as u32)
                .collect(),
        }
    }

    pub fn negate(&self, a: &GroupElement) -> Result<GroupElement> {
        self.check_len(a.len())?;
        Ok(self.negate_unchecked(a))
    }

    pub(crate) fn negate_unchecked(&self, a: &GroupElement) -> GroupElement {
        GroupElement {
            coords: a.coords.iter().zip(&self.factors).map(|(&x, &f)| (f - x) % f).collect(),
        }
    }

    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        let nb = self.negate(b)?;
        self.add(a, &nb)
    }

    /// `k * a` for an integer `k`.
    pub fn scale(&self, k: i64, a: &GroupElement) -> GroupElement {
        GroupElement {
            coords: a
                .coords
                .iter()
                .zip(&self.factors)
                .map(|(&x, &f)| (k.rem_euclid(f as i64) * x as i64 % f as i64) as u32)
                .collect(),
        }
    }

    /// The least `n >= 1` with `n * a = 0`.
    pub fn element_order(&self, a: &GroupElement) -> u64 {
        a.coords
            .iter()
            .zip(&self.factors)
            .map(|(&x, &f)| f as u64 / gcd(x as u64, f as u64))
            .fold(1, lcm)
    }

    /// Mixed-radix index of an element; agrees with the lexicographic order.
    pub fn index_of(&self, a: &GroupElement) -> u64 {
        a.coords
            .iter()
            .zip(&self.factors)
            .fold(0u64, |acc, (&x, &f)| acc * f as u64 + x as u64)
    }

    pub fn element_at(&self, mut index: u64) -> GroupElement {
        let mut coords = vec![0u32; self.rank()];
        for i in (0..self.rank()).rev() {
            let f = self.factors[i] as u64;
            coords[i] = (index % f) as u32;
            index /= f;
        }
        GroupElement { coords }
    }

    /// All elements in lexicographic order.
    pub fn elements(&self) -> Result<Vec<GroupElement>> {
        if self.order > MAX_ENUMERATION_ORDER {
            return Err(Error::Capacity(format!(
                "group of order {} exceeds the enumeration bound {MAX_ENUMERATION_ORDER}",
                self.order
            )));
        }
        Ok((0..self.order).map(|i| self.element_at(i)).collect())
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_list(f, &self.factors)
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GroupSpec::new(parse_list(s)?)
    }
}

pub(crate) fn write_list(f: &mut fmt::Formatter<'_>, xs: &[u32]) -> fmt::Result {
    for (i, x) in xs.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{x}")?;
    }
    Ok(())
}

pub(crate) fn parse_list(s: &str) -> Result<Vec<u32>> {
    s.trim()
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<u32>()
                .map_err(|e| Error::Parse(format!("bad integer {t:?}: {e}")))
        })
        .collect()
}
