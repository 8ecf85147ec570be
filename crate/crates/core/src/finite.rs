//! Finite groups given by a full multiplication table.
//!
//! Elements are indices `0..n`. Subsets are [`ElemSet`]s; for a table built
//! from sorted holomorph elements, the sorted index list of a subgroup is its
//! canonical encoding.

use std::collections::{HashMap, HashSet, VecDeque};
use std::hash::Hash;

use crate::error::{Error, Result};

/// Largest group for which a multiplication table is built.
pub const MAX_TABLE_ORDER: usize = 4096;

/// A sorted set of element indices with a membership bitmask.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElemSet {
    members: Vec<u32>,
    mask: Vec<u64>,
}

impl ElemSet {
    pub fn new(universe: usize, mut members: Vec<u32>) -> Self {
        members.sort_unstable();
        members.dedup();
        let mut mask = vec![0u64; universe.div_ceil(64)];
        for &m in &members {
            mask[m as usize / 64] |= 1 << (m % 64);
        }
        ElemSet { members, mask }
    }

    fn from_mask(mask: Vec<u64>) -> Self {
        let mut members = Vec::new();
        for (w, &word) in mask.iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                let b = bits.trailing_zeros();
                members.push((w * 64) as u32 + b);
                bits &= bits - 1;
            }
        }
        ElemSet { members, mask }
    }

    #[inline]
    pub fn contains(&self, x: u32) -> bool {
        self.mask[x as usize / 64] >> (x % 64) & 1 == 1
    }

    pub fn members(&self) -> &[u32] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_subset(&self, other: &ElemSet) -> bool {
        self.mask.iter().zip(&other.mask).all(|(a, b)| a & !b == 0)
    }

    pub fn intersection(&self, other: &ElemSet) -> ElemSet {
        ElemSet::from_mask(self.mask.iter().zip(&other.mask).map(|(a, b)| a & b).collect())
    }
}

/// A finite group as a Cayley table.
#[derive(Debug, Clone)]
pub struct CayleyTable {
    n: usize,
    mul: Vec<u32>,
    inv: Vec<u32>,
    identity: u32,
}

impl CayleyTable {
    /// Validates that `mul` (row-major, `n x n`) is a group table.
    pub fn from_table(n: usize, mul: Vec<u32>) -> Result<Self> {
        if n == 0 || mul.len() != n * n {
            return Err(Error::Contract(format!(
                "a table for {n} elements needs {} entries",
                n * n
            )));
        }
        if mul.iter().any(|&x| x as usize >= n) {
            return Err(Error::Contract("table entry out of range".into()));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| mul[e * n + a] as usize == a && mul[a * n + e] as usize == a))
            .ok_or_else(|| Error::Contract("table has no identity".into()))? as u32;
        for a in 0..n {
            for b in 0..n {
                let ab = mul[a * n + b] as usize;
                for c in 0..n {
                    if mul[ab * n + c] != mul[a * n + mul[b * n + c] as usize] {
                        return Err(Error::Contract("table is not associative".into()));
                    }
                }
            }
        }
        let mut inv = vec![0u32; n];
        for a in 0..n {
            let Some(b) = (0..n).find(|&b| mul[a * n + b] == identity) else {
                return Err(Error::Contract(format!("element {a} has no inverse")));
            };
            inv[a] = b as u32;
        }
        Ok(CayleyTable { n, mul, inv, identity })
    }

    /// Builds the table of the group generated by `gens` under `op`, with
    /// elements indexed in sorted order. Returns the sorted elements too.
    pub fn generate<T, F>(identity: T, gens: &[T], mut op: F) -> Result<(Vec<T>, Self)>
    where
        T: Clone + Eq + Hash + Ord,
        F: FnMut(&T, &T) -> T,
    {
        let elements = crate::closure::saturate(identity.clone(), gens, MAX_TABLE_ORDER, &mut op)?;
        let table = Self::from_elements(&elements, &identity, op)?;
        Ok((elements, table))
    }

    /// Table of a finite set of elements already closed under `op`.
    pub fn from_elements<T, F>(elements: &[T], identity: &T, mut op: F) -> Result<Self>
    where
        T: Clone + Eq + Hash,
        F: FnMut(&T, &T) -> T,
    {
        let n = elements.len();
        if n > MAX_TABLE_ORDER {
            return Err(Error::Capacity(format!(
                "group of order {n} exceeds the table bound {MAX_TABLE_ORDER}"
            )));
        }
        let index: HashMap<&T, u32> = elements.iter().enumerate().map(|(i, x)| (x, i as u32)).collect();
        let mut mul = vec![0u32; n * n];
        for (i, a) in elements.iter().enumerate() {
            for (j, b) in elements.iter().enumerate() {
                let c = op(a, b);
                mul[i * n + j] = *index
                    .get(&c)
                    .ok_or_else(|| Error::Contract("element set is not closed".into()))?;
            }
        }
        let identity = *index
            .get(identity)
            .ok_or_else(|| Error::Contract("identity missing from element set".into()))?;
        let mut inv = vec![0u32; n];
        for a in 0..n {
            inv[a] = (0..n)
                .find(|&b| mul[a * n + b] == identity)
                .ok_or_else(|| Error::Contract("element without inverse".into()))? as u32;
        }
        Ok(CayleyTable { n, mul, inv, identity })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn identity(&self) -> u32 {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[a as usize * self.n + b as usize]
    }

    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        self.inv[a as usize]
    }

    pub fn table(&self) -> &[u32] {
        &self.mul
    }

    pub fn pow(&self, a: u32, k: u64) -> u32 {
        let mut r = self.identity;
        for _ in 0..k {
            r = self.mul(r, a);
        }
        r
    }

    pub fn element_order(&self, a: u32) -> u64 {
        let mut k = 1;
        let mut x = a;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// `a^-1 b^-1 a b`.
    pub fn commutator(&self, a: u32, b: u32) -> u32 {
        self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))
    }

    /// `x a x^-1`.
    #[inline]
    pub fn conj(&self, x: u32, a: u32) -> u32 {
        self.mul(self.mul(x, a), self.inv(x))
    }

    pub fn set(&self, members: Vec<u32>) -> ElemSet {
        ElemSet::new(self.n, members)
    }

    pub fn whole(&self) -> ElemSet {
        self.set((0..self.n as u32).collect())
    }

    pub fn trivial(&self) -> ElemSet {
        self.set(vec![self.identity])
    }

    /// Subgroup generated by `gens`.
    pub fn closure(&self, gens: &[u32]) -> ElemSet {
        let mut mask = vec![0u64; self.n.div_ceil(64)];
        let id = self.identity;
        mask[id as usize / 64] |= 1 << (id % 64);
        let gens: Vec<u32> = gens.iter().copied().filter(|&g| g != id).collect();
        let mut stack = vec![id];
        while let Some(x) = stack.pop() {
            for &g in &gens {
                let y = self.mul(x, g);
                let (w, b) = (y as usize / 64, y % 64);
                if mask[w] >> b & 1 == 0 {
                    mask[w] |= 1 << b;
                    stack.push(y);
                }
            }
        }
        ElemSet::from_mask(mask)
    }

    /// Deterministic small generating set of a subgroup.
    pub fn generators(&self, set: &ElemSet) -> Vec<u32> {
        let mut gens = Vec::new();
        let mut span = self.trivial();
        for &x in set.members() {
            if span.len() == set.len() {
                break;
            }
            if !span.contains(x) {
                gens.push(x);
                span = self.closure(&gens);
            }
        }
        gens
    }

    pub fn is_subgroup(&self, set: &ElemSet) -> bool {
        set.contains(self.identity)
            && set
                .members()
                .iter()
                .all(|&a| set.members().iter().all(|&b| set.contains(self.mul(a, self.inv(b)))))
    }

    pub fn conjugate_set(&self, x: u32, set: &ElemSet) -> ElemSet {
        self.set(set.members().iter().map(|&a| self.conj(x, a)).collect())
    }

    /// Whether `x` normalises the subgroup generated by `gens`, whose elements are `set`.
    pub fn normalises(&self, x: u32, gens: &[u32], set: &ElemSet) -> bool {
        gens.iter().all(|&g| set.contains(self.conj(x, g)))
    }

    /// `N_within(set)`.
    pub fn normaliser(&self, within: &ElemSet, set: &ElemSet) -> ElemSet {
        let gens = self.generators(set);
        self.set(
            within
                .members()
                .iter()
                .copied()
                .filter(|&x| self.normalises(x, &gens, set))
                .collect(),
        )
    }

    pub fn is_normal_in(&self, sub: &ElemSet, sup: &ElemSet) -> bool {
        let gens = self.generators(sup);
        gens.iter()
            .all(|&x| sub.members().iter().all(|&a| sub.contains(self.conj(x, a))))
    }

    /// Smallest normal subgroup of the group generated by `ambient_gens`
    /// containing `gens`.
    pub fn normal_closure(&self, gens: &[u32], ambient_gens: &[u32]) -> ElemSet {
        let mut gens = gens.to_vec();
        let mut set = self.closure(&gens);
        loop {
            let mut grew = false;
            for &x in ambient_gens {
                for &g in gens.clone().iter() {
                    let c = self.conj(x, g);
                    if !set.contains(c) {
                        gens.push(c);
                        set = self.closure(&gens);
                        grew = true;
                    }
                }
            }
            if !grew {
                return set;
            }
        }
    }

    /// `[H, K]` for subgroups `H`, `K` of a group with generators `ambient_gens`
    /// that normalise both.
    pub fn commutator_subgroup(&self, h_gens: &[u32], k_gens: &[u32], ambient_gens: &[u32]) -> ElemSet {
        let comms: Vec<u32> = h_gens
            .iter()
            .flat_map(|&a| k_gens.iter().map(move |&b| (a, b)))
            .map(|(a, b)| self.commutator(a, b))
            .collect();
        let mut normalisers = ambient_gens.to_vec();
        normalisers.extend_from_slice(h_gens);
        normalisers.extend_from_slice(k_gens);
        self.normal_closure(&comms, &normalisers)
    }

    pub fn derived_subgroup(&self, set: &ElemSet) -> ElemSet {
        let gens = self.generators(set);
        self.commutator_subgroup(&gens, &gens, &gens)
    }

    pub fn centre(&self, set: &ElemSet) -> ElemSet {
        let gens = self.generators(set);
        self.set(
            set.members()
                .iter()
                .copied()
                .filter(|&z| gens.iter().all(|&g| self.mul(z, g) == self.mul(g, z)))
                .collect(),
        )
    }

    /// Sizes of the conjugacy classes of the whole group, sorted.
    pub fn class_sizes(&self) -> Vec<usize> {
        let mut seen = vec![false; self.n];
        let mut sizes = Vec::new();
        for a in 0..self.n as u32 {
            if seen[a as usize] {
                continue;
            }
            let mut class = HashSet::new();
            let mut queue = VecDeque::from([a]);
            class.insert(a);
            while let Some(b) = queue.pop_front() {
                for x in 0..self.n as u32 {
                    let c = self.conj(x, b);
                    if class.insert(c) {
                        queue.push_back(c);
                    }
                }
            }
            for &c in &class {
                seen[c as usize] = true;
            }
            sizes.push(class.len());
        }
        sizes.sort_unstable();
        sizes
    }

    /// Table of the subgroup `set`, indexed by position in `set.members()`.
    pub fn subgroup_table(&self, set: &ElemSet) -> CayleyTable {
        let pos: HashMap<u32, u32> = set.members().iter().enumerate().map(|(i, &x)| (x, i as u32)).collect();
        let n = set.len();
        let mut mul = vec![0u32; n * n];
        for (i, &a) in set.members().iter().enumerate() {
            for (j, &b) in set.members().iter().enumerate() {
                mul[i * n + j] = pos[&self.mul(a, b)];
            }
        }
        let inv = set.members().iter().map(|&a| pos[&self.inv(a)]).collect();
        CayleyTable {
            n,
            mul,
            inv,
            identity: pos[&self.identity],
        }
    }

    /// Table of `set / normal`, cosets indexed by their least member.
    pub fn quotient_table(&self, set: &ElemSet, normal: &ElemSet) -> CayleyTable {
        let mut coset_of: HashMap<u32, u32> = HashMap::new();
        let mut reps: Vec<u32> = Vec::new();
        for &a in set.members() {
            if coset_of.contains_key(&a) {
                continue;
            }
            let id = reps.len() as u32;
            reps.push(a);
            for &k in normal.members() {
                coset_of.insert(self.mul(a, k), id);
            }
        }
        let n = reps.len();
        let mut mul = vec![0u32; n * n];
        for (i, &a) in reps.iter().enumerate() {
            for (j, &b) in reps.iter().enumerate() {
                mul[i * n + j] = coset_of[&self.mul(a, b)];
            }
        }
        let inv = reps.iter().map(|&a| coset_of[&self.inv(a)]).collect();
        CayleyTable {
            n,
            mul,
            inv,
            identity: coset_of[&self.identity],
        }
    }

    /// Relabels the table by the permutation `perm` (old index -> new index).
    pub fn relabel(&self, perm: &[u32]) -> CayleyTable {
        let n = self.n;
        let mut mul = vec![0u32; n * n];
        let mut inv = vec![0u32; n];
        for a in 0..n {
            inv[perm[a] as usize] = perm[self.inv[a] as usize];
            for b in 0..n {
                mul[perm[a] as usize * n + perm[b] as usize] = perm[self.mul[a * n + b] as usize];
            }
        }
        CayleyTable {
            n,
            mul,
            inv,
            identity: perm[self.identity as usize],
        }
    }
}

/// Cyclic group of order `n` as a table, for tests and examples.
pub fn cyclic_table(n: usize) -> CayleyTable {
    let mul = (0..n * n).map(|k| ((k / n + k % n) % n) as u32).collect();
    CayleyTable::from_table(n, mul).expect("cyclic group")
}

/// Direct product of two tables.
pub fn direct_product(a: &CayleyTable, b: &CayleyTable) -> CayleyTable {
    let (na, nb) = (a.order(), b.order());
    let n = na * nb;
    let mut mul = vec![0u32; n * n];
    for x in 0..n {
        for y in 0..n {
            let (xa, xb) = (x / nb, x % nb);
            let (ya, yb) = (y / nb, y % nb);
            let za = a.mul(xa as u32, ya as u32) as usize;
            let zb = b.mul(xb as u32, yb as u32) as usize;
            mul[x * n + y] = (za * nb + zb) as u32;
        }
    }
    CayleyTable::from_table(n, mul).expect("direct product of groups")
}
