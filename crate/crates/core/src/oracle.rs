//! Exhaustive search for regular subgroups, used to cross-check the layered
//! enumeration. It relies only on subgroup closure and the regularity test.

use std::collections::HashSet;

use crate::aut::aut_generators;
use crate::error::{Error, Result};
use crate::finite::ElemSet;
use crate::hol::Holomorph;
use crate::holtable::HolTable;
use crate::subgroup::{is_regular, Conjugators, Subgroup};

/// Largest Sylow subgroup the oracle will search.
pub const MAX_ORACLE_ORDER: usize = 1 << 12;

/// Every regular subgroup of `Hol(G)` for a `p`-group `G`, sorted.
///
/// Subgroups with trivial stabiliser of `0` are grown inside a Sylow
/// `p`-subgroup one generator at a time; every subgroup of a regular subgroup
/// has trivial stabiliser, so each regular subgroup of the Sylow subgroup is
/// reached. The result is then closed under conjugation by `Aut(G)`.
pub fn brute_force_regular_oracle(hol: &Holomorph, p: u64) -> Result<Vec<Subgroup>> {
    let spec = hol.spec();
    if spec.prime() != Some(p) {
        return Err(Error::Domain(format!("{spec} is not a {p}-group")));
    }
    let sylow = HolTable::sylow(hol, p)?;
    if sylow.order() > MAX_ORACLE_ORDER {
        return Err(Error::Capacity(format!(
            "Sylow subgroup of order {} exceeds the oracle bound {MAX_ORACLE_ORDER}",
            sylow.order()
        )));
    }
    let t = sylow.table();
    let target = spec.order() as usize;
    // elements that fix 0 can never lie in a semiregular subgroup
    let usable: Vec<u32> = sylow
        .whole()
        .members()
        .iter()
        .copied()
        .filter(|&i| !sylow.element(i).g.is_zero())
        .collect();

    let mut seen: HashSet<ElemSet> = HashSet::new();
    let mut level = vec![(t.trivial(), Vec::<u32>::new())];
    let mut found = Vec::new();
    if target == 1 {
        found.push(t.trivial());
    }
    while !level.is_empty() {
        let mut next = Vec::new();
        for (k, gens) in &level {
            for &x in &usable {
                if k.contains(x) {
                    continue;
                }
                let mut g2 = gens.clone();
                g2.push(x);
                let h = t.closure(&g2);
                if h.len() > target || sylow.stabiliser_order(&h) != 1 || !seen.insert(h.clone()) {
                    continue;
                }
                if h.len() == target {
                    found.push(h);
                } else {
                    next.push((h, g2));
                }
            }
        }
        level = next;
    }

    let conjugators = Conjugators::from_automorphisms(hol, &aut_generators(spec)?)?;
    let mut all: HashSet<Subgroup> = HashSet::new();
    for h in found {
        let h = sylow.to_subgroup(&h);
        if !is_regular(hol, &h) {
            return Err(Error::Contract(format!(
                "oracle produced a non-regular subgroup of order {}",
                h.order()
            )));
        }
        if !all.contains(&h) {
            all.extend(conjugators.orbit(hol, &h)?);
        }
    }
    let mut out: Vec<Subgroup> = all.into_iter().collect();
    out.sort_unstable();
    Ok(out)
}
