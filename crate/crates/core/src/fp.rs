//! Linear algebra over the prime field `F_p`.
//!
//! Vectors and matrices hold residues in `0..p` as `u32`.

pub fn inv_mod(a: u64, p: u64) -> u64 {
    // Fermat; p is prime and small
    let mut result = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    result
}

/// Row-reduced echelon form of a set of row vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Echelon {
    pub p: u32,
    pub dim: usize,
    pub rows: Vec<Vec<u32>>,
    pub pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(p: u32, dim: usize, vectors: &[Vec<u32>]) -> Self {
        let mut rows: Vec<Vec<u32>> = vectors.to_vec();
        let pivots = rref_in_place(p, dim, &mut rows);
        rows.truncate(pivots.len());
        Echelon { p, dim, rows, pivots }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `v` against the rows; the result is zero iff `v` lies in the span.
    pub fn reduce(&self, v: &[u32]) -> Vec<u32> {
        let p = self.p as u64;
        let mut v = v.to_vec();
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            let f = v[c] as u64;
            if f != 0 {
                for k in 0..self.dim {
                    v[k] = ((v[k] as u64 + (p - f) * row[k] as u64) % p) as u32;
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Coordinates of `v` modulo the span, read off at the non-pivot columns.
    pub fn quotient_coords(&self, v: &[u32]) -> Vec<u32> {
        let r = self.reduce(v);
        self.free_columns().into_iter().map(|c| r[c]).collect()
    }

    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.dim).filter(|c| !self.pivots.contains(c)).collect()
    }
}

/// Reduces `rows` to RREF in place and returns the pivot columns; zero rows
/// end up at the bottom.
pub fn rref_in_place(p: u32, ncols: usize, rows: &mut [Vec<u32>]) -> Vec<usize> {
    let p64 = p as u64;
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(piv) = (r..rows.len()).find(|&i| !rows[i][c].is_multiple_of(p)) else {
            continue;
        };
        rows.swap(r, piv);
        let inv = inv_mod(rows[r][c] as u64, p64);
        for x in rows[r].iter_mut() {
            *x = ((*x as u64 * inv) % p64) as u32;
        }
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let f = rows[i][c] as u64;
                for k in 0..ncols.max(rows[i].len()) {
                    let sub = f * rows[r][k] as u64 % p64;
                    rows[i][k] = ((rows[i][k] as u64 + p64 - sub) % p64) as u32;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Solutions of `coeffs * X = rhs` where `coeffs` is `m x k` and `rhs` is
/// `m x d`; the unknown `X` is `k x d`.
///
/// Returns a particular solution and a basis of the null space of `coeffs`
/// (vectors of length `k`), or `None` when the system is inconsistent.
pub fn solve(
    p: u32,
    k: usize,
    d: usize,
    coeffs: &[Vec<u32>],
    rhs: &[Vec<u32>],
) -> Option<(Vec<Vec<u32>>, Vec<Vec<u32>>)> {
    let p64 = p as u64;
    let mut aug: Vec<Vec<u32>> = coeffs
        .iter()
        .zip(rhs)
        .map(|(a, b)| a.iter().chain(b.iter()).copied().collect())
        .collect();
    let pivots = rref_in_place(p, k, &mut aug);
    // rows below the rank must have zero right-hand side
    for row in aug.iter().skip(pivots.len()) {
        if row[k..].iter().any(|&x| x != 0) {
            return None;
        }
    }
    let mut particular = vec![vec![0u32; d]; k];
    for (row, &c) in aug.iter().zip(&pivots) {
        particular[c] = row[k..].to_vec();
    }
    let free: Vec<usize> = (0..k).filter(|c| !pivots.contains(c)).collect();
    let null = free
        .iter()
        .map(|&f| {
            let mut v = vec![0u32; k];
            v[f] = 1;
            for (row, &c) in aug.iter().zip(&pivots) {
                v[c] = ((p64 - row[f] as u64 % p64) % p64) as u32;
            }
            v
        })
        .collect();
    Some((particular, null))
}

/// Calls `f` on the RREF basis of every subspace of `F_p^dim` of the given
/// dimension, in a fixed order.
pub fn for_each_subspace<F: FnMut(&[Vec<u32>])>(p: u32, dim: usize, sub_dim: usize, mut f: F) {
    if sub_dim > dim {
        return;
    }
    let mut pivots = Vec::with_capacity(sub_dim);
    pivot_sets(dim, sub_dim, 0, &mut pivots, &mut |piv| {
        // free slots: positions (row r, column c) with c > piv[r], c not a pivot
        let slots: Vec<(usize, usize)> = piv
            .iter()
            .enumerate()
            .flat_map(|(r, &pc)| (pc + 1..dim).filter(|c| !piv.contains(c)).map(move |c| (r, c)))
            .collect();
        let mut digits = vec![0u32; slots.len()];
        loop {
            let mut basis = vec![vec![0u32; dim]; sub_dim];
            for (r, &pc) in piv.iter().enumerate() {
                basis[r][pc] = 1;
            }
            for (&(r, c), &d) in slots.iter().zip(&digits) {
                basis[r][c] = d;
            }
            f(&basis);
            let mut k = slots.len();
            loop {
                if k == 0 {
                    return;
                }
                k -= 1;
                digits[k] += 1;
                if digits[k] < p {
                    break;
                }
                digits[k] = 0;
            }
        }
    });
}

fn pivot_sets(dim: usize, want: usize, start: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
    if cur.len() == want {
        f(cur);
        return;
    }
    for c in start..dim {
        if dim - c < want - cur.len() {
            break;
        }
        cur.push(c);
        pivot_sets(dim, want, c + 1, cur, f);
        cur.pop();
    }
}

/// All vectors of the span of `basis`, in the order of their coefficient tuples.
pub fn span(p: u32, dim: usize, basis: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut coeffs = vec![0u32; basis.len()];
    loop {
        let mut v = vec![0u32; dim];
        for (b, &c) in basis.iter().zip(&coeffs) {
            for k in 0..dim {
                v[k] = ((v[k] as u64 + c as u64 * b[k] as u64) % p as u64) as u32;
            }
        }
        out.push(v);
        let mut k = basis.len();
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            coeffs[k] += 1;
            if coeffs[k] < p {
                break;
            }
            coeffs[k] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Gaussian binomial coefficient, the number of k-subspaces of F_p^n.
    fn gaussian_binomial(n: u32, k: u32, p: u64) -> u64 {
        let mut num = 1u64;
        let mut den = 1u64;
        for i in 0..k {
            num *= p.pow(n - i) - 1;
            den *= p.pow(i + 1) - 1;
        }
        num / den
    }

    #[test]
    fn subspace_counts() {
        for (p, n) in [(2u32, 4usize), (3, 3), (2, 5)] {
            for k in 0..=n {
                let mut seen = std::collections::HashSet::new();
                for_each_subspace(p, n, k, |b| {
                    assert_eq!(Echelon::new(p, n, b).rank(), k);
                    seen.insert(b.to_vec());
                });
                assert_eq!(seen.len() as u64, gaussian_binomial(n as u32, k as u32, p as u64));
            }
        }
    }

    #[test]
    fn solve_small_system() {
        // x + y = 1, x + 2y = 0 over F_3 -> y = 2, x = 2
        let coeffs = vec![vec![1, 1], vec![1, 2]];
        let rhs = vec![vec![1], vec![0]];
        let (x, null) = solve(3, 2, 1, &coeffs, &rhs).unwrap();
        assert_eq!(x, vec![vec![2], vec![2]]);
        assert!(null.is_empty());
        // inconsistent: x = 0, x = 1
        assert!(solve(2, 1, 1, &[vec![1], vec![1]], &[vec![0], vec![1]]).is_none());
    }

    #[test]
    fn null_space_is_annihilated() {
        let coeffs = vec![vec![1, 1, 0, 1], vec![0, 1, 1, 1]];
        let (_, null) = solve(2, 4, 1, &coeffs, &[vec![0], vec![0]]).unwrap();
        assert_eq!(null.len(), 2);
        for v in &null {
            for row in &coeffs {
                let s: u32 = row.iter().zip(v).map(|(a, b)| a * b).sum();
                assert_eq!(s % 2, 0);
            }
        }
    }

    #[test]
    fn quotient_coordinates() {
        let e = Echelon::new(2, 3, &[vec![1, 1, 0]]);
        assert_eq!(e.free_columns(), vec![1, 2]);
        assert_eq!(e.quotient_coords(&[1, 1, 0]), vec![0, 0]);
        assert_eq!(e.quotient_coords(&[1, 0, 0]), e.quotient_coords(&[0, 1, 0]));
        assert_eq!(span(2, 3, &[vec![1, 0, 0], vec![0, 1, 0]]).len(), 4);
    }
}
