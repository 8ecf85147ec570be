//! Automorphisms of a finite abelian group as integer matrices.
//!
//! Entry `(i, j)` is the coefficient of the `i`-th cyclic factor in the image
//! of the `j`-th standard generator, stored reduced modulo `factors[i]`.
//! A matrix defines a homomorphism iff `factors[i] | m[i][j] * factors[j]`.

use std::fmt;

use crate::abelian::{GroupElement, GroupSpec};
use crate::closure::{greedy_generators, saturate};
use crate::error::{Error, Result};
use crate::numeric::{gcd, log_p, p_part};

/// Bound on candidate matrices scanned by the brute-force automorphism search.
pub const MAX_BRUTE_FORCE_MATRICES: u64 = 1 << 22;

/// Bound on the size of automorphism groups materialized element by element.
pub const MAX_AUT_ORDER: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Automorphism {
    n: usize,
    // row-major, n*n
    entries: Vec<u32>,
}

impl Automorphism {
    pub fn identity(spec: &GroupSpec) -> Self {
        let n = spec.rank();
        let mut entries = vec![0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1;
        }
        Automorphism { n, entries }
    }

    /// Reduces `rows` modulo the row factors and validates the result.
    pub fn new(spec: &GroupSpec, rows: &[Vec<i64>]) -> Result<Self> {
        let m = Self::from_rows_reduced(spec, rows)?;
        if !is_automorphism(spec, &m) {
            return Err(Error::Validity(format!("matrix {m} is not an automorphism of {spec}")));
        }
        Ok(m)
    }

    /// Reduces `rows` modulo the row factors without checking well-definedness
    /// or bijectivity.
    pub fn from_rows_reduced(spec: &GroupSpec, rows: &[Vec<i64>]) -> Result<Self> {
        let n = spec.rank();
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(Error::Shape(format!("expected a {n}x{n} matrix")));
        }
        let entries = rows
            .iter()
            .zip(spec.factors())
            .flat_map(|(row, &f)| row.iter().map(move |&x| x.rem_euclid(f as i64) as u32))
            .collect();
        Ok(Automorphism { n, entries })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> u32 {
        self.entries[i * self.dim() + j]
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn rows(&self) -> Vec<Vec<u32>> {
        let n = self.dim();
        self.entries.chunks(n.max(1)).map(|r| r.to_vec()).collect()
    }

    pub fn is_identity(&self) -> bool {
        let n = self.dim();
        self.entries
            .iter()
            .enumerate()
            .all(|(k, &x)| x == u32::from(k / n == k % n))
    }

    /// Parses the `"1,1;0,1"` syntax and validates against `spec`.
    pub fn parse(spec: &GroupSpec, s: &str) -> Result<Self> {
        let rows = parse_rows(s)?;
        Self::new(spec, &rows)
    }
}

pub(crate) fn parse_rows(s: &str) -> Result<Vec<Vec<i64>>> {
    s.trim()
        .split(';')
        .map(|row| {
            row.split(',')
                .map(|t| {
                    t.trim()
                        .parse::<i64>()
                        .map_err(|e| Error::Parse(format!("bad matrix entry {t:?}: {e}")))
                })
                .collect()
        })
        .collect()
}

impl fmt::Display for Automorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.dim();
        for (i, row) in self.entries.chunks(n.max(1)).enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            crate::abelian::write_list(f, row)?;
        }
        Ok(())
    }
}

fn check_dim(spec: &GroupSpec, m: &Automorphism) -> Result<()> {
    let n = spec.rank();
    if m.n != n {
        return Err(Error::Shape(format!(
            "matrix has {} entries, expected {}",
            m.entries.len(),
            n * n
        )));
    }
    Ok(())
}

pub fn apply(spec: &GroupSpec, phi: &Automorphism, a: &GroupElement) -> Result<GroupElement> {
    check_dim(spec, phi)?;
    spec.check_len(a.len())?;
    Ok(apply_unchecked(spec, phi, a))
}

pub(crate) fn apply_unchecked(spec: &GroupSpec, phi: &Automorphism, a: &GroupElement) -> GroupElement {
    let n = spec.rank();
    let v = a.coords();
    let coords = (0..n)
        .map(|i| {
            let f = spec.factors()[i] as u64;
            let row = &phi.entries[i * n..(i + 1) * n];
            (row.iter().zip(v).map(|(&m, &x)| m as u64 * x as u64).sum::<u64>() % f) as u32
        })
        .collect();
    GroupElement::from_coords(coords)
}

/// `phi o psi`: apply `psi` first.
pub fn compose(spec: &GroupSpec, phi: &Automorphism, psi: &Automorphism) -> Result<Automorphism> {
    check_dim(spec, phi)?;
    check_dim(spec, psi)?;
    Ok(compose_unchecked(spec, phi, psi))
}

pub(crate) fn compose_unchecked(spec: &GroupSpec, phi: &Automorphism, psi: &Automorphism) -> Automorphism {
    let n = spec.rank();
    let mut entries = vec![0u32; n * n];
    for i in 0..n {
        let f = spec.factors()[i] as u64;
        for j in 0..n {
            let s: u64 = (0..n)
                .map(|k| phi.entries[i * n + k] as u64 * psi.entries[k * n + j] as u64)
                .sum();
            entries[i * n + j] = (s % f) as u32;
        }
    }
    Automorphism { n, entries }
}

/// Inverse by powering: `phi^-1 = phi^(k-1)` where `k` is the order of `phi`.
pub fn invert(spec: &GroupSpec, phi: &Automorphism) -> Result<Automorphism> {
    check_dim(spec, phi)?;
    if !is_automorphism(spec, phi) {
        return Err(Error::Validity(format!("matrix {phi} is not invertible on {spec}")));
    }
    Ok(invert_unchecked(spec, phi))
}

pub(crate) fn invert_unchecked(spec: &GroupSpec, phi: &Automorphism) -> Automorphism {
    let mut prev = Automorphism::identity(spec);
    let mut cur = phi.clone();
    while !cur.is_identity() {
        prev = cur.clone();
        cur = compose_unchecked(spec, &cur, phi);
    }
    prev
}

/// Order of `phi` in Aut(G).
pub fn aut_order(spec: &GroupSpec, phi: &Automorphism) -> u64 {
    let mut k = 1;
    let mut cur = phi.clone();
    while !cur.is_identity() {
        cur = compose_unchecked(spec, &cur, phi);
        k += 1;
    }
    k
}

fn well_defined(spec: &GroupSpec, m: &Automorphism) -> bool {
    let f = spec.factors();
    let n = f.len();
    (0..n).all(|i| {
        (0..n).all(|j| {
            let e = m.entries[i * n + j] as u64;
            e < f[i] as u64 && (e * f[j] as u64).is_multiple_of(f[i] as u64)
        })
    })
}

/// True iff `m` is a well-defined bijective endomorphism of `spec`.
///
/// Homocyclic `p`-groups use the determinant modulo `p`; other groups use an
/// exhaustive injectivity check.
pub fn is_automorphism(spec: &GroupSpec, m: &Automorphism) -> bool {
    if m.n != spec.rank() || !well_defined(spec, m) {
        return false;
    }
    match (spec.is_homocyclic(), spec.prime()) {
        (true, Some(p)) => det_mod_p(spec.rank(), m.entries(), p) != 0,
        _ => is_injective(spec, m),
    }
}

fn is_injective(spec: &GroupSpec, m: &Automorphism) -> bool {
    (1..spec.order()).all(|i| !apply_unchecked(spec, m, &spec.element_at(i)).is_zero())
}

/// Determinant of the entrywise reduction modulo the prime `p`.
pub(crate) fn det_mod_p(n: usize, entries: &[u32], p: u64) -> u64 {
    let mut a: Vec<Vec<u64>> = (0..n)
        .map(|i| (0..n).map(|j| entries[i * n + j] as u64 % p).collect())
        .collect();
    let mut det = 1u64;
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| a[r][col] != 0) else {
            return 0;
        };
        if piv != col {
            a.swap(piv, col);
            det = (p - det) % p;
        }
        det = det * a[col][col] % p;
        let inv = crate::fp::inv_mod(a[col][col], p);
        for r in col + 1..n {
            let factor = a[r][col] * inv % p;
            if factor == 0 {
                continue;
            }
            for c in col..n {
                a[r][c] = (a[r][c] + p * p - factor * a[col][c] % p) % p;
            }
        }
    }
    det
}

fn elementary(spec: &GroupSpec, i: usize, j: usize, value: u32) -> Automorphism {
    let n = spec.rank();
    let mut m = Automorphism::identity(spec);
    let f = spec.factors()[i];
    m.entries[i * n + j] = (m.entries[i * n + j] + value) % f;
    m
}

fn diagonal(spec: &GroupSpec, i: usize, unit: u32) -> Automorphism {
    let n = spec.rank();
    let mut m = Automorphism::identity(spec);
    m.entries[i * n + i] = unit;
    m
}

fn unit_generators(q: u32) -> Vec<u32> {
    let units: Vec<u32> = (1..q).filter(|&u| gcd(u as u64, q as u64) == 1).collect();
    greedy_generators(&1u32, &units, q as usize, |a, b| {
        ((*a as u64 * *b as u64) % q as u64) as u32
    })
    .expect("unit group is bounded by q")
}

/// Every automorphism of `spec`, sorted, by scanning all well-defined matrices.
pub fn all_automorphisms(spec: &GroupSpec) -> Result<Vec<Automorphism>> {
    let f = spec.factors();
    let n = f.len();
    // entry (i,j) ranges over multiples of f_i / gcd(f_i, f_j) below f_i
    let steps: Vec<u32> = (0..n * n)
        .map(|k| {
            let (i, j) = (k / n, k % n);
            f[i] / gcd(f[i] as u64, f[j] as u64) as u32
        })
        .collect();
    let counts: Vec<u64> = (0..n * n).map(|k| (f[k / n] / steps[k]) as u64).collect();
    let total = counts.iter().try_fold(1u64, |acc, &c| acc.checked_mul(c));
    match total {
        Some(t) if t <= MAX_BRUTE_FORCE_MATRICES => {}
        _ => {
            return Err(Error::Capacity(format!(
                "brute-force automorphism search on {spec} exceeds {MAX_BRUTE_FORCE_MATRICES} matrices"
            )))
        }
    }
    let total = total.unwrap_or(0);
    let mut out = Vec::new();
    let mut digits = vec![0u64; n * n];
    for _ in 0..total {
        let m = Automorphism {
            n,
            entries: digits.iter().zip(&steps).map(|(&d, &s)| d as u32 * s).collect(),
        };
        if is_automorphism(spec, &m) {
            out.push(m);
        }
        for k in (0..n * n).rev() {
            digits[k] += 1;
            if digits[k] < counts[k] {
                break;
            }
            digits[k] = 0;
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// Every element of the subgroup of Aut(G) generated by `gens`, sorted.
pub fn generate(spec: &GroupSpec, gens: &[Automorphism]) -> Result<Vec<Automorphism>> {
    saturate(Automorphism::identity(spec), gens, MAX_AUT_ORDER, |a, b| {
        compose_unchecked(spec, a, b)
    })
}

/// A generating set of Aut(G).
///
/// Homocyclic `p`-groups get elementary transvections plus diagonal units;
/// everything else goes through [`all_automorphisms`].
pub fn aut_generators(spec: &GroupSpec) -> Result<Vec<Automorphism>> {
    if let (true, Some(_)) = (spec.is_homocyclic(), spec.prime()) {
        let n = spec.rank();
        let q = spec.factors()[0];
        let mut gens = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    gens.push(elementary(spec, i, j, 1));
                }
            }
        }
        gens.extend(unit_generators(q).into_iter().map(|u| diagonal(spec, 0, u)));
        return Ok(gens);
    }
    let all = all_automorphisms(spec)?;
    greedy_generators(&Automorphism::identity(spec), &all, MAX_AUT_ORDER, |a, b| {
        compose_unchecked(spec, a, b)
    })
}

/// Order of Aut(G) for a homocyclic group `C_{p^e}^n`:
/// `p^{(e-1)n^2} * |GL(n, p)|`.
pub fn homocyclic_aut_order(p: u64, e: u32, n: u32) -> u128 {
    let p = p as u128;
    let mut gl: u128 = 1;
    let pn = p.pow(n);
    for k in 0..n {
        gl *= pn - p.pow(k);
    }
    p.pow((e - 1) * n * n) * gl
}

/// Generators of a Sylow `p`-subgroup of Aut(G).
///
/// For `C_{p^e}^n` this is the preimage of the upper unitriangular group
/// under reduction modulo `p`, of order `p^{(e-1)n^2 + n(n-1)/2}`.
pub fn sylow_p_aut_generators(spec: &GroupSpec, p: u64) -> Result<Vec<Automorphism>> {
    if !crate::numeric::is_prime(p) {
        return Err(Error::Contract(format!("{p} is not prime")));
    }
    if spec.is_homocyclic() && spec.prime() == Some(p) {
        let n = spec.rank();
        let q = spec.factors()[0] as u64;
        let e = log_p(q, p).expect("homocyclic p-group");
        let mut gens = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                gens.push(elementary(spec, i, j, 1));
            }
        }
        for k in 1..e {
            let pk = p.pow(k) as u32;
            for i in 0..n {
                for j in 0..n {
                    gens.push(elementary(spec, i, j, pk));
                }
            }
        }
        return Ok(gens);
    }
    let all = all_automorphisms(spec)?;
    let target = p_part(all.len() as u64, p) as usize;
    let sylow = sylow_subgroup(spec, &all, p, target)?;
    greedy_generators(&Automorphism::identity(spec), &sylow, MAX_AUT_ORDER, |a, b| {
        compose_unchecked(spec, a, b)
    })
}

/// Grows a `p`-subgroup one step at a time: a non-Sylow `p`-subgroup `P`
/// always has some `x` in `N(P) \ P` with `x^p` in `P`.
fn sylow_subgroup(spec: &GroupSpec, all: &[Automorphism], p: u64, target: usize) -> Result<Vec<Automorphism>> {
    use std::collections::HashSet;
    let id = Automorphism::identity(spec);
    let mut gens: Vec<Automorphism> = Vec::new();
    let mut members: HashSet<Automorphism> = HashSet::from([id.clone()]);
    while members.len() < target {
        let next = all.iter().find(|x| {
            if members.contains(*x) {
                return false;
            }
            let mut xp = id.clone();
            for _ in 0..p {
                xp = compose_unchecked(spec, &xp, x);
            }
            if !members.contains(&xp) {
                return false;
            }
            let xinv = invert_unchecked(spec, x);
            members.iter().all(|m| {
                let c = compose_unchecked(spec, &compose_unchecked(spec, x, m), &xinv);
                members.contains(&c)
            })
        });
        let Some(x) = next else {
            return Err(Error::Contract("no p-element normalises the current p-subgroup".into()));
        };
        gens.push(x.clone());
        members = generate(spec, &gens)?.into_iter().collect();
    }
    let mut out: Vec<Automorphism> = members.into_iter().collect();
    out.sort_unstable();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(s: &str) -> GroupSpec {
        s.parse().unwrap()
    }

    fn el(s: &str) -> GroupElement {
        s.parse().unwrap()
    }

    fn mat(g: &GroupSpec, s: &str) -> Automorphism {
        Automorphism::from_rows_reduced(g, &parse_rows(s).unwrap()).unwrap()
    }

    #[test]
    fn apply_examples() {
        let g = spec("4");
        assert_eq!(apply(&g, &mat(&g, "3"), &el("2")).unwrap(), el("2"));
        let g = spec("4,4");
        assert_eq!(apply(&g, &Automorphism::identity(&g), &el("1,2")).unwrap(), el("1,2"));
        let g = spec("2,2");
        assert_eq!(apply(&g, &mat(&g, "0,1;1,0"), &el("1,0")).unwrap(), el("0,1"));
    }

    #[test]
    fn compose_examples() {
        let g = spec("4");
        assert_eq!(compose(&g, &mat(&g, "3"), &mat(&g, "3")).unwrap(), mat(&g, "1"));
        let g = spec("2,4");
        let phi = mat(&g, "1,1;0,3");
        assert_eq!(compose(&g, &Automorphism::identity(&g), &phi).unwrap(), phi);
        let g = spec("2,2");
        let swap = mat(&g, "0,1;1,0");
        assert!(compose(&g, &swap, &swap).unwrap().is_identity());
    }

    #[test]
    fn invert_examples() {
        let g = spec("4");
        assert_eq!(invert(&g, &mat(&g, "3")).unwrap(), mat(&g, "3"));
        let g = spec("4,4");
        assert!(invert(&g, &Automorphism::identity(&g)).unwrap().is_identity());
        assert_eq!(invert(&g, &mat(&g, "1,1;0,1")).unwrap(), mat(&g, "1,3;0,1"));
        assert!(matches!(invert(&g, &mat(&g, "2,0;0,1")), Err(Error::Validity(_))));
    }

    #[test]
    fn membership_examples() {
        let g = spec("4");
        assert!(!is_automorphism(&g, &mat(&g, "2")));
        assert!(is_automorphism(&g, &mat(&g, "3")));
        let g = spec("2,4");
        assert!(!is_automorphism(&g, &mat(&g, "1,0;1,1")));
        assert!(is_automorphism(&g, &mat(&g, "1,0;2,1")));
    }

    #[test]
    fn shape_mismatch() {
        let g = spec("4,4");
        let h = spec("4");
        assert!(matches!(apply(&g, &mat(&h, "3"), &el("1,1")), Err(Error::Shape(_))));
        assert!(compose(&g, &mat(&h, "3"), &Automorphism::identity(&g)).is_err());
    }

    /// Independent count: injective well-defined maps found by checking
    /// images of every element rather than the determinant.
    fn brute_aut_count(g: &GroupSpec) -> usize {
        all_automorphisms(g)
            .unwrap()
            .iter()
            .filter(|m| is_injective(g, m))
            .count()
    }

    #[test]
    fn aut_orders() {
        let cases = [
            ("4", 2),
            ("2,2,2", 168),
            ("4,4", 96),
            ("3,3", 48),
            ("8", 4),
            ("9", 6),
            ("2,4", 8),
        ];
        for (s, expected) in cases {
            let g = spec(s);
            let gens = aut_generators(&g).unwrap();
            assert_eq!(generate(&g, &gens).unwrap().len(), expected, "Aut({s})");
        }
        assert_eq!(brute_aut_count(&spec("4,4")), 96);
        assert_eq!(homocyclic_aut_order(2, 2, 2), 96);
        assert_eq!(homocyclic_aut_order(2, 1, 3), 168);
    }

    #[test]
    fn determinant_agrees_with_injectivity() {
        for s in ["2,2", "4,4", "3,3", "2,2,2", "9"] {
            let g = spec(s);
            let all = all_automorphisms(&g).unwrap();
            for m in &all {
                assert!(is_injective(&g, m));
            }
        }
    }

    #[test]
    fn sylow_orders() {
        let cases = [
            ("4", 2, 2),
            ("2,2,2", 2, 8),
            ("4,4,4", 2, 4096),
            ("4,4", 2, 32),
            ("3,3", 3, 3),
            ("9,9", 3, 243),
        ];
        for (s, p, expected) in cases {
            let g = spec(s);
            let gens = sylow_p_aut_generators(&g, p).unwrap();
            assert_eq!(generate(&g, &gens).unwrap().len(), expected, "Syl_{p}(Aut({s}))");
        }
    }

    #[test]
    fn sylow_matches_p_part_of_brute_force_aut() {
        for s in [
            "2", "4", "8", "2,2", "2,4", "2,2,2", "4,4", "3", "9", "3,3", "2,8", "2,2,4", "16",
        ] {
            let g = spec(s);
            let all = all_automorphisms(&g).unwrap();
            for p in [2u64, 3] {
                let gens = sylow_p_aut_generators(&g, p).unwrap();
                let sylow = generate(&g, &gens).unwrap();
                assert_eq!(sylow.len() as u64, p_part(all.len() as u64, p), "{s} p={p}");
            }
        }
    }

    #[test]
    fn generated_automorphisms_are_additive() {
        for s in ["4,4", "2,4", "2,2,2", "4,4,4"] {
            let g = spec(s);
            let elems = g.elements().unwrap();
            for phi in aut_generators(&g).unwrap() {
                assert!(is_automorphism(&g, &phi));
                for a in &elems {
                    for b in elems.iter().step_by(3) {
                        let lhs = apply(&g, &phi, &g.add(a, b).unwrap()).unwrap();
                        let rhs = g
                            .add(&apply(&g, &phi, a).unwrap(), &apply(&g, &phi, b).unwrap())
                            .unwrap();
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn group_axioms_on_aut() {
        let g = spec("2,4");
        let all = generate(&g, &aut_generators(&g).unwrap()).unwrap();
        for a in &all {
            let ai = invert(&g, a).unwrap();
            assert!(compose(&g, a, &ai).unwrap().is_identity());
            assert!(compose(&g, &ai, a).unwrap().is_identity());
            for b in &all {
                for c in &all {
                    let l = compose(&g, &compose(&g, a, b).unwrap(), c).unwrap();
                    let r = compose(&g, a, &compose(&g, b, c).unwrap()).unwrap();
                    assert_eq!(l, r);
                }
            }
        }
    }

    #[test]
    fn text_syntax() {
        let g = spec("4,4");
        let m = Automorphism::parse(&g, "1,1;0,1").unwrap();
        assert_eq!(m.to_string(), "1,1;0,1");
        assert!(Automorphism::parse(&g, "2,0;0,2").is_err());
        assert!(Automorphism::parse(&g, "1,x;0,1").is_err());
    }
}
