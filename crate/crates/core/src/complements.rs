//! Complements of an elementary abelian section `N/B` in `A/B`.
//!
//! `A/N` is given a polycyclic presentation `x_1, ..., x_m` read off a
//! composition series `A = A_0 > A_1 > ... > A_m = N`. A complement is
//! determined by the elements `x_k n_k` (with `n_k` in `N/B`) it contains, and
//! those tuples are exactly the solutions of a linear system over `F_p`: each
//! relator `W` must evaluate into `B`, and substituting `x_k -> x_k n_k`
//! changes `W(x)` by a sum of conjugates of the `n_k`.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::finite::{CayleyTable, ElemSet};
use crate::fp;
use crate::hol::Holomorph;
use crate::holtable::HolTable;
use crate::numeric::{factorize, log_p};
use crate::series::is_elementary_abelian_factor;
use crate::subgroup::Subgroup;

/// Largest solution space of the cocycle system that will be enumerated.
pub const MAX_COMPLEMENTS: u64 = 1 << 24;

#[derive(Debug, Clone)]
struct Occurrence {
    generator: usize,
    negative: bool,
    // contribution is -/+ (conjugator^-1 n conjugator)
    conjugator: u32,
}

#[derive(Debug, Clone)]
struct Relator {
    value: u32,
    occurrences: Vec<Occurrence>,
}

/// A polycyclic presentation of `A/N`, reusable for every `B` below `N`.
#[derive(Debug, Clone)]
pub struct Presentation {
    a: ElemSet,
    n: ElemSet,
    gens: Vec<u32>,
    relators: Vec<Relator>,
}

impl Presentation {
    /// Requires `N` normal in `A` and `A/N` soluble.
    pub fn new(table: &CayleyTable, a: &ElemSet, n: &ElemSet) -> Result<Self> {
        if !n.is_subset(a) || !table.is_normal_in(n, a) {
            return Err(Error::Contract("N must be a normal subgroup of A".into()));
        }
        // top-down composition series through N
        let mut series = vec![a.clone()];
        let mut gens = Vec::new();
        let mut primes = Vec::new();
        let n_gens = table.generators(n);
        let mut cur = a.clone();
        while cur.len() > n.len() {
            let cur_gens = table.generators(&cur);
            let mut dgens = table.generators(&table.commutator_subgroup(&cur_gens, &cur_gens, &cur_gens));
            dgens.extend_from_slice(&n_gens);
            let derived = table.closure(&dgens);
            if derived.len() == cur.len() {
                return Err(Error::Domain("A/N is not soluble".into()));
            }
            let q = factorize((cur.len() / derived.len()) as u64)[0].0;
            let mut egens = dgens.clone();
            egens.extend(cur_gens.iter().map(|&g| table.pow(g, q)));
            // cur / E is elementary abelian of exponent q; drop one basis vector
            let mut basis = Vec::new();
            let mut span = table.closure(&egens);
            for &g in &cur_gens {
                if !span.contains(g) {
                    basis.push(g);
                    let mut all = egens.clone();
                    all.extend_from_slice(&basis);
                    span = table.closure(&all);
                }
            }
            let x = basis[0];
            let mut mgens = egens;
            mgens.extend_from_slice(&basis[1..]);
            let next = table.closure(&mgens);
            debug_assert_eq!(cur.len() / next.len(), q as usize);
            gens.push(x);
            primes.push(q);
            series.push(next.clone());
            cur = next;
        }

        let m = gens.len();
        // normal form of g in A_k as x_{k+1}^e ... x_m^e * n; returns the word
        let sift = |mut g: u32, k: usize| -> Vec<(usize, u64)> {
            let mut word = Vec::new();
            for j in k..m {
                let xinv = table.inv(gens[j]);
                let mut e = 0;
                while !series[j + 1].contains(g) {
                    g = table.mul(xinv, g);
                    e += 1;
                }
                if e > 0 {
                    word.push((j, e));
                }
            }
            word
        };
        let mut relators = Vec::new();
        for i in 0..m {
            // x_i^q * (normal form)^-1
            let power = table.pow(gens[i], primes[i]);
            let mut letters: Vec<(usize, bool)> = vec![(i, false); primes[i] as usize];
            append_inverse(&mut letters, &sift(power, i + 1));
            relators.push(letters);
            for j in i + 1..m {
                // x_i^-1 x_j x_i * (normal form)^-1
                let c = table.mul(table.mul(table.inv(gens[i]), gens[j]), gens[i]);
                let mut letters = vec![(i, true), (j, false), (i, false)];
                append_inverse(&mut letters, &sift(c, i + 1));
                relators.push(letters);
            }
        }
        let relators = relators
            .into_iter()
            .map(|letters| evaluate(table, &gens, &letters))
            .collect::<Vec<_>>();
        for r in &relators {
            debug_assert!(n.contains(r.value));
        }
        Ok(Presentation {
            a: a.clone(),
            n: n.clone(),
            gens,
            relators,
        })
    }

    pub fn generators(&self) -> &[u32] {
        &self.gens
    }

    /// All complements of `N/B` in `A/B`, lifted to subgroups of `A`, sorted.
    pub fn complements(&self, table: &CayleyTable, b: &ElemSet) -> Result<Vec<ElemSet>> {
        let (a, n) = (&self.a, &self.n);
        if !b.is_subset(n) || !table.is_normal_in(b, a) {
            return Err(Error::Contract("B must be a subgroup of N normal in A".into()));
        }
        if b.len() == n.len() {
            return Ok(vec![a.clone()]);
        }
        if !is_elementary_abelian_factor(table, n, b) {
            return Err(Error::Contract("N/B is not elementary abelian".into()));
        }
        let index = (n.len() / b.len()) as u64;
        let p = factorize(index)[0].0;
        let d = log_p(index, p).expect("elementary abelian") as usize;
        let coords = SectionCoords::new(table, n, b, p as u32);
        let m = self.gens.len();
        let p32 = p as u32;

        // one block of d equations per relator, unknowns n_1..n_m stacked
        let mut coeffs: Vec<Vec<u32>> = Vec::new();
        let mut rhs: Vec<Vec<u32>> = Vec::new();
        for rel in &self.relators {
            let mut block = vec![vec![0u32; m * d]; d];
            for occ in &rel.occurrences {
                let act = coords.action(table, occ.conjugator);
                for row in 0..d {
                    for col in 0..d {
                        let v = act[row][col];
                        let v = if occ.negative { (p32 - v) % p32 } else { v };
                        let cell = &mut block[row][occ.generator * d + col];
                        *cell = (*cell + v) % p32;
                    }
                }
            }
            let value = coords.coords(rel.value);
            for row in 0..d {
                coeffs.push(block[row].clone());
                rhs.push(vec![(p32 - value[row]) % p32]);
            }
        }
        let Some((particular, null)) = fp::solve(p32, m * d, 1, &coeffs, &rhs) else {
            return Ok(Vec::new());
        };
        let count = (p as u128).checked_pow(null.len() as u32);
        if count.is_none_or(|c| c > MAX_COMPLEMENTS as u128) {
            return Err(Error::Capacity(format!(
                "{p}^{} complements exceed the bound {MAX_COMPLEMENTS}",
                null.len()
            )));
        }
        let particular: Vec<u32> = particular.into_iter().map(|r| r[0]).collect();
        let b_gens = table.generators(b);
        let target = a.len() / n.len() * b.len();
        let mut out = Vec::new();
        for shift in fp::span(p32, m * d, &null) {
            let sol: Vec<u32> = particular.iter().zip(&shift).map(|(x, y)| (x + y) % p32).collect();
            let mut gens = b_gens.clone();
            for k in 0..m {
                let lift = coords.lift(table, &sol[k * d..(k + 1) * d]);
                gens.push(table.mul(self.gens[k], lift));
            }
            let u = table.closure(&gens);
            if u.len() != target {
                return Err(Error::Contract(format!(
                    "cocycle produced a subgroup of order {} instead of {target}",
                    u.len()
                )));
            }
            out.push(u);
        }
        out.sort_unstable();
        Ok(out)
    }
}

fn append_inverse(letters: &mut Vec<(usize, bool)>, word: &[(usize, u64)]) {
    for &(j, e) in word.iter().rev() {
        for _ in 0..e {
            letters.push((j, true));
        }
    }
}

fn evaluate(table: &CayleyTable, gens: &[u32], letters: &[(usize, bool)]) -> Relator {
    let elem = |&(k, neg): &(usize, bool)| if neg { table.inv(gens[k]) } else { gens[k] };
    let value = letters.iter().fold(table.identity(), |acc, l| table.mul(acc, elem(l)));
    let mut suffix = table.identity();
    let mut occurrences = Vec::with_capacity(letters.len());
    for l in letters.iter().rev() {
        let (k, neg) = *l;
        let conjugator = if neg {
            table.mul(table.inv(gens[k]), suffix)
        } else {
            suffix
        };
        occurrences.push(Occurrence {
            generator: k,
            negative: neg,
            conjugator,
        });
        suffix = table.mul(elem(l), suffix);
    }
    Relator { value, occurrences }
}

/// Coordinates on the elementary abelian section `N/B`.
struct SectionCoords {
    p: u32,
    basis: Vec<u32>,
    coord: Vec<Option<Vec<u32>>>,
}

impl SectionCoords {
    fn new(table: &CayleyTable, n: &ElemSet, b: &ElemSet, p: u32) -> Self {
        let mut basis = Vec::new();
        let mut gens = table.generators(b);
        let mut span = b.clone();
        for &y in n.members() {
            if span.len() == n.len() {
                break;
            }
            if !span.contains(y) {
                basis.push(y);
                gens.push(y);
                span = table.closure(&gens);
            }
        }
        let d = basis.len();
        let mut coord = vec![None; table.order()];
        for v in fp::span(p, d, &identity_basis(d)) {
            let e = basis
                .iter()
                .zip(&v)
                .fold(table.identity(), |acc, (&y, &c)| table.mul(acc, table.pow(y, c as u64)));
            for &x in b.members() {
                coord[table.mul(e, x) as usize] = Some(v.clone());
            }
        }
        SectionCoords { p, basis, coord }
    }

    fn coords(&self, x: u32) -> Vec<u32> {
        self.coord[x as usize].clone().expect("element of N")
    }

    fn lift(&self, table: &CayleyTable, v: &[u32]) -> u32 {
        self.basis
            .iter()
            .zip(v)
            .fold(table.identity(), |acc, (&y, &c)| table.mul(acc, table.pow(y, c as u64)))
    }

    /// Matrix of `n -> y^-1 n y`, acting on column vectors.
    fn action(&self, table: &CayleyTable, y: u32) -> Vec<Vec<u32>> {
        let d = self.basis.len();
        let yinv = table.inv(y);
        let mut m = vec![vec![0u32; d]; d];
        for (col, &bj) in self.basis.iter().enumerate() {
            let img = self.coords(table.mul(table.mul(yinv, bj), y));
            for row in 0..d {
                m[row][col] = img[row] % self.p;
            }
        }
        m
    }
}

fn identity_basis(d: usize) -> Vec<Vec<u32>> {
    (0..d)
        .map(|i| {
            let mut v = vec![0u32; d];
            v[i] = 1;
            v
        })
        .collect()
}

/// Complements of `N/B` in `A/B` inside a table.
pub fn complements_in(table: &CayleyTable, a: &ElemSet, n: &ElemSet, b: &ElemSet) -> Result<Vec<ElemSet>> {
    Presentation::new(table, a, n)?.complements(table, b)
}

/// Every subgroup `U` with `B <= U <= A`, `U ∩ N = B` and `UN = A`, found by
/// growing subgroups one element at a time.
pub fn brute_force_complements(table: &CayleyTable, a: &ElemSet, n: &ElemSet, b: &ElemSet) -> Vec<ElemSet> {
    let target = a.len() / n.len() * b.len();
    let mut seen: HashSet<ElemSet> = HashSet::from([b.clone()]);
    let mut frontier = vec![(b.clone(), table.generators(b))];
    let mut out = Vec::new();
    if b.len() == target {
        out.push(b.clone());
    }
    while let Some((v, gens)) = frontier.pop() {
        // <v, x> depends only on the coset vx
        let mut covered = vec![false; table.order()];
        for &x in a.members() {
            if v.contains(x) || n.contains(x) || covered[x as usize] {
                continue;
            }
            for &y in v.members() {
                covered[table.mul(y, x) as usize] = true;
            }
            let mut g2 = gens.clone();
            g2.push(x);
            let w = table.closure(&g2);
            if w.len() > target || w.intersection(n).len() != b.len() || seen.contains(&w) {
                continue;
            }
            seen.insert(w.clone());
            if w.len() == target {
                out.push(w.clone());
            }
            frontier.push((w, g2));
        }
    }
    out.sort_unstable();
    out
}

/// Complements of `N/B` in `A/B` for subgroups of the holomorph.
pub fn complements(hol: &Holomorph, a: &Subgroup, n: &Subgroup, b: &Subgroup) -> Result<Vec<Subgroup>> {
    if !b.is_subgroup_of(n) || !n.is_subgroup_of(a) {
        return Err(Error::Contract("complements need B <= N <= A".into()));
    }
    let ambient = HolTable::generate(hol, &a.generators(hol))?;
    let (sa, sn, sb) = (ambient.to_set(a)?, ambient.to_set(n)?, ambient.to_set(b)?);
    Ok(complements_in(ambient.table(), &sa, &sn, &sb)?
        .iter()
        .map(|u| ambient.to_subgroup(u))
        .collect())
}
