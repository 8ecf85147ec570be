//! Normal series with elementary abelian factors.

use crate::error::{Error, Result};
use crate::finite::{CayleyTable, ElemSet};
use crate::numeric::{factorize, log_p};

/// A descending chain `S = N_0 > N_1 > ... > N_r = 1` of subgroups normal in `S`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalSeries {
    pub terms: Vec<ElemSet>,
}

impl NormalSeries {
    pub fn orders(&self) -> Vec<usize> {
        self.terms.iter().map(ElemSet::len).collect()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Checks normality in `S` and that every factor is elementary abelian.
    pub fn verify(&self, table: &CayleyTable) -> bool {
        let Some(top) = self.terms.first() else {
            return false;
        };
        if self.terms.last().map(ElemSet::len) != Some(1) {
            return false;
        }
        self.terms.windows(2).all(|w| {
            let (upper, lower) = (&w[0], &w[1]);
            lower.is_subset(upper)
                && lower.len() < upper.len()
                && table.is_normal_in(lower, top)
                && is_elementary_abelian_factor(table, upper, lower)
        })
    }
}

/// `upper / lower` is elementary abelian: commutators and `p`-th powers of
/// generators lie in `lower`, for the prime `p` dividing the index.
pub fn is_elementary_abelian_factor(table: &CayleyTable, upper: &ElemSet, lower: &ElemSet) -> bool {
    let index = (upper.len() / lower.len()) as u64;
    let primes = factorize(index);
    let [(p, _)] = primes.as_slice() else {
        return index == 1;
    };
    let gens = table.generators(upper);
    gens.iter()
        .all(|&a| lower.contains(table.pow(a, *p)) && gens.iter().all(|&b| lower.contains(table.commutator(a, b))))
}

/// The lower `p`-central series `N_{i+1} = [N_i, S] N_i^p` when `S` is a
/// `p`-group; otherwise the derived series refined by `q`-th power subgroups.
pub fn elementary_abelian_series(table: &CayleyTable, s: &ElemSet) -> Result<NormalSeries> {
    let order = s.len() as u64;
    if order == 1 {
        return Ok(NormalSeries { terms: vec![s.clone()] });
    }
    let primes = factorize(order);
    if let [(p, _)] = primes.as_slice() {
        return Ok(lower_p_central(table, s, *p));
    }
    soluble_series(table, s)
}

fn lower_p_central(table: &CayleyTable, s: &ElemSet, p: u64) -> NormalSeries {
    let s_gens = table.generators(s);
    let mut terms = vec![s.clone()];
    loop {
        let cur = terms.last().unwrap();
        if cur.len() == 1 {
            break;
        }
        let cur_gens = table.generators(cur);
        let comm = table.commutator_subgroup(&cur_gens, &s_gens, &s_gens);
        let mut gens = table.generators(&comm);
        gens.extend(cur_gens.iter().map(|&a| table.pow(a, p)));
        // p-th powers of generators suffice modulo [N_i, S] since N_i / [N_i, S] is central in S / [N_i, S]
        let next = table.normal_closure(&gens, &s_gens);
        terms.push(next);
    }
    NormalSeries { terms }
}

fn soluble_series(table: &CayleyTable, s: &ElemSet) -> Result<NormalSeries> {
    let s_gens = table.generators(s);
    let mut terms = vec![s.clone()];
    let mut cur = s.clone();
    while cur.len() > 1 {
        let derived = table.derived_subgroup(&cur);
        if derived.len() == cur.len() {
            return Err(Error::Domain(format!("group of order {} is not soluble", s.len())));
        }
        // refine cur / derived into elementary abelian layers
        let mut layer = cur.clone();
        while layer.len() > derived.len() {
            let index = (layer.len() / derived.len()) as u64;
            let q = factorize(index)[0].0;
            let mut gens = table.generators(&derived);
            gens.extend(table.generators(&layer).iter().map(|&a| table.pow(a, q)));
            let next = table.normal_closure(&gens, &s_gens);
            debug_assert!(log_p((layer.len() / next.len()) as u64, q).is_some());
            terms.push(next.clone());
            layer = next;
        }
        cur = derived;
    }
    Ok(NormalSeries { terms })
}
