//! Isomorphism invariants of finite groups given by tables.

use std::collections::BTreeMap;
use std::fmt;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::finite::{CayleyTable, MAX_TABLE_ORDER};
use crate::numeric::{factorize, lcm};

/// Invariants that agree on isomorphic groups.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fingerprint {
    pub group_order: u64,
    pub exponent: u64,
    /// Elementary divisors of the abelianization, ascending.
    pub abelianization_invariants: Vec<u64>,
    pub center_order: u64,
    pub derived_order: u64,
    pub element_order_histogram: BTreeMap<u64, u64>,
    pub conjugacy_class_sizes: Vec<u64>,
}

impl Fingerprint {
    /// First 16 hex digits of a SHA-256 of the canonical text form.
    pub fn hash_hex(&self) -> String {
        let digest = Sha256::digest(self.to_string().as_bytes());
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}

fn join(v: impl IntoIterator<Item = String>) -> String {
    v.into_iter().collect::<Vec<_>>().join(",")
}

impl fmt::Display for Fingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "order={} exp={} ab=[{}] z={} d={} orders=[{}] classes=[{}]",
            self.group_order,
            self.exponent,
            join(self.abelianization_invariants.iter().map(u64::to_string)),
            self.center_order,
            self.derived_order,
            join(self.element_order_histogram.iter().map(|(o, c)| format!("{o}:{c}"))),
            join(self.conjugacy_class_sizes.iter().map(u64::to_string)),
        )
    }
}

pub fn group_fingerprint(t: &CayleyTable) -> Fingerprint {
    let whole = t.whole();
    let mut histogram = BTreeMap::new();
    let mut exponent = 1;
    for a in 0..t.order() as u32 {
        let o = t.element_order(a);
        exponent = lcm(exponent, o);
        *histogram.entry(o).or_insert(0) += 1;
    }
    let derived = t.derived_subgroup(&whole);
    let abelianization = abelian_invariants(&t.quotient_table(&whole, &derived));
    Fingerprint {
        group_order: t.order() as u64,
        exponent,
        abelianization_invariants: abelianization,
        center_order: t.centre(&whole).len() as u64,
        derived_order: derived.len() as u64,
        element_order_histogram: histogram,
        conjugacy_class_sizes: t.class_sizes().into_iter().map(|s| s as u64).collect(),
    }
}

/// Fingerprint of a raw row-major table, rejecting non-groups.
pub fn fingerprint_of_table(n: usize, mul: Vec<u32>) -> Result<Fingerprint> {
    if n > MAX_TABLE_ORDER {
        return Err(Error::Capacity(format!("table of order {n} exceeds {MAX_TABLE_ORDER}")));
    }
    Ok(group_fingerprint(&CayleyTable::from_table(n, mul)?))
}

/// Elementary divisors of an abelian group, ascending. For each prime `p`,
/// the number of cyclic factors of order at least `p^k` is
/// `log_p(|Ω_k| / |Ω_{k-1}|)`, where `Ω_k` is the set of `x` with `x^{p^k} = 1`.
fn abelian_invariants(t: &CayleyTable) -> Vec<u64> {
    let mut out = Vec::new();
    for (p, e) in factorize(t.order() as u64) {
        let mut omega = vec![1u64];
        let mut k = 0;
        while omega.last().copied() != Some(p.pow(e)) {
            k += 1;
            let q = p.pow(k);
            let count = (0..t.order() as u32).filter(|&a| t.pow(a, q) == t.identity()).count() as u64;
            omega.push(count);
        }
        // at_least[k] = number of factors of order >= p^k
        let at_least: Vec<u32> = omega.windows(2).map(|w| (w[1] / w[0]).ilog(p)).collect();
        for (i, &c) in at_least.iter().enumerate() {
            let next = at_least.get(i + 1).copied().unwrap_or(0);
            for _ in 0..c - next {
                out.push(p.pow(i as u32 + 1));
            }
        }
    }
    out.sort_unstable();
    out
}
