//! Classification of regular subgroups up to conjugation by `Aut(G)`, which
//! is classification of the corresponding braces up to isomorphism.
//!
//! Subgroups are bucketed by invariants of the multiplicative group, of the
//! kernel of `λ` and of the quotient by that kernel. Large buckets are split
//! further by the length of the conjugacy class. Each bucket is then reduced
//! to orbit representatives independently, possibly on several threads.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::aut::aut_generators;
use crate::error::{Error, Result};
use crate::fingerprint::{group_fingerprint, Fingerprint};
use crate::finite::CayleyTable;
use crate::hol::Holomorph;
use crate::subgroup::{dedup_with_lengths, is_regular, Conjugators, Subgroup};

/// Buckets larger than this are refined by class length before dedup.
pub const DEFAULT_REFINE_THRESHOLD: usize = 1000;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BraceInvariants {
    pub mult_fp: Fingerprint,
    pub kernel_fp: Fingerprint,
    pub quotient_fp: Fingerprint,
    pub class_length: usize,
}

impl BraceInvariants {
    /// `mult;kernel;quotient` fingerprint hashes.
    pub fn hash_tuple(&self) -> String {
        format!(
            "{};{};{}",
            self.mult_fp.hash_hex(),
            self.kernel_fp.hash_hex(),
            self.quotient_fp.hash_hex()
        )
    }
}

/// One brace class: its invariants and the least subgroup in its orbit.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ClassRecord {
    pub invariants: BraceInvariants,
    pub representative: Subgroup,
}

type BucketKey = (Fingerprint, Fingerprint, Fingerprint);

/// Classification context for one `Hol(G)`.
#[derive(Debug, Clone)]
pub struct Classifier {
    hol: Holomorph,
    conjugators: Conjugators,
    jobs: usize,
    refine_threshold: usize,
}

impl Classifier {
    pub fn new(hol: &Holomorph, jobs: usize) -> Result<Self> {
        if jobs == 0 {
            return Err(Error::Contract("jobs must be at least 1".into()));
        }
        let conjugators = Conjugators::from_automorphisms(hol, &aut_generators(hol.spec())?)?;
        Ok(Classifier {
            hol: hol.clone(),
            conjugators,
            jobs,
            refine_threshold: DEFAULT_REFINE_THRESHOLD,
        })
    }

    pub fn with_refine_threshold(mut self, threshold: usize) -> Self {
        self.refine_threshold = threshold;
        self
    }

    pub fn holomorph(&self) -> &Holomorph {
        &self.hol
    }

    pub fn multiplicative_table(&self, h: &Subgroup) -> Result<CayleyTable> {
        CayleyTable::from_elements(h.elements(), &self.hol.identity(), |a, b| self.hol.mul_unchecked(a, b))
    }

    fn bucket_key(&self, h: &Subgroup) -> Result<BucketKey> {
        if !is_regular(&self.hol, h) {
            return Err(Error::Contract("brace invariants of a non-regular subgroup".into()));
        }
        let table = self.multiplicative_table(h)?;
        let kernel = table.set(
            h.elements()
                .iter()
                .enumerate()
                .filter(|(_, x)| x.alpha.is_identity())
                .map(|(i, _)| i as u32)
                .collect(),
        );
        let whole = table.whole();
        Ok((
            group_fingerprint(&table),
            group_fingerprint(&table.subgroup_table(&kernel)),
            group_fingerprint(&table.quotient_table(&whole, &kernel)),
        ))
    }

    pub fn brace_invariants(&self, h: &Subgroup) -> Result<BraceInvariants> {
        let (mult_fp, kernel_fp, quotient_fp) = self.bucket_key(h)?;
        Ok(BraceInvariants {
            mult_fp,
            kernel_fp,
            quotient_fp,
            class_length: self.class_length(h)?,
        })
    }

    /// Size of the `Aut(G)`-conjugacy class of `h`.
    pub fn class_length(&self, h: &Subgroup) -> Result<usize> {
        Ok(self.conjugators.orbit(&self.hol, h)?.len())
    }

    /// Least subgroup in the `Aut(G)`-orbit of `h`.
    pub fn canonical(&self, h: &Subgroup) -> Result<Subgroup> {
        self.conjugators.canonical(&self.hol, h)
    }

    pub fn braces_isomorphic(&self, h1: &Subgroup, h2: &Subgroup) -> Result<bool> {
        if self.bucket_key(h1)? != self.bucket_key(h2)? {
            return Ok(false);
        }
        Ok(self.conjugators.orbit(&self.hol, h1)?.binary_search(h2).is_ok())
    }

    fn pool(&self) -> Result<rayon::ThreadPool> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.jobs)
            .build()
            .map_err(|e| Error::Contract(format!("thread pool: {e}")))
    }

    /// One record per `Aut(G)`-class met in `list`, sorted.
    pub fn classify(&self, list: &[Subgroup]) -> Result<Vec<ClassRecord>> {
        let mut list = list.to_vec();
        list.sort_unstable();
        list.dedup();
        self.pool()?.install(|| {
            let keys = list
                .par_iter()
                .map(|h| self.bucket_key(h))
                .collect::<Result<Vec<_>>>()?;
            let mut buckets: BTreeMap<BucketKey, Vec<Subgroup>> = BTreeMap::new();
            for (key, h) in keys.into_iter().zip(list) {
                buckets.entry(key).or_default().push(h);
            }
            let buckets: Vec<(BucketKey, Vec<Subgroup>)> = buckets.into_iter().collect();
            let per_bucket = buckets
                .par_iter()
                .map(|(key, members)| self.reduce_bucket(key, members))
                .collect::<Result<Vec<_>>>()?;
            let mut out: Vec<ClassRecord> = per_bucket.into_iter().flatten().collect();
            out.sort_unstable();
            Ok(out)
        })
    }

    fn reduce_bucket(&self, key: &BucketKey, members: &[Subgroup]) -> Result<Vec<ClassRecord>> {
        let parts: Vec<Vec<Subgroup>> = if members.len() > self.refine_threshold {
            let mut by_length: BTreeMap<usize, Vec<Subgroup>> = BTreeMap::new();
            for h in members {
                by_length.entry(self.class_length(h)?).or_default().push(h.clone());
            }
            by_length.into_values().collect()
        } else {
            vec![members.to_vec()]
        };
        let mut out = Vec::new();
        for part in parts {
            for (representative, class_length) in dedup_with_lengths(&self.hol, &part, &self.conjugators)? {
                out.push(ClassRecord {
                    invariants: BraceInvariants {
                        mult_fp: key.0.clone(),
                        kernel_fp: key.1.clone(),
                        quotient_fp: key.2.clone(),
                        class_length,
                    },
                    representative,
                });
            }
        }
        Ok(out)
    }

    /// Union of two class lists with conjugate entries identified.
    pub fn merge(&self, a: &[ClassRecord], b: &[ClassRecord]) -> Result<Vec<ClassRecord>> {
        let mut buckets: BTreeMap<&BraceInvariants, Vec<Subgroup>> = BTreeMap::new();
        for r in a.iter().chain(b) {
            buckets.entry(&r.invariants).or_default().push(r.representative.clone());
        }
        let buckets: Vec<(&BraceInvariants, Vec<Subgroup>)> = buckets.into_iter().collect();
        self.pool()?.install(|| {
            let per_bucket = buckets
                .par_iter()
                .map(|(inv, members)| {
                    Ok(dedup_with_lengths(&self.hol, members, &self.conjugators)?
                        .into_iter()
                        .map(|(representative, _)| ClassRecord {
                            invariants: (*inv).clone(),
                            representative,
                        })
                        .collect::<Vec<_>>())
                })
                .collect::<Result<Vec<_>>>()?;
            let mut out: Vec<ClassRecord> = per_bucket.into_iter().flatten().collect();
            out.sort_unstable();
            Ok(out)
        })
    }
}

pub fn brace_invariants(hol: &Holomorph, h: &Subgroup) -> Result<BraceInvariants> {
    Classifier::new(hol, 1)?.brace_invariants(h)
}

pub fn class_length(hol: &Holomorph, h: &Subgroup) -> Result<usize> {
    Classifier::new(hol, 1)?.class_length(h)
}

pub fn braces_isomorphic(hol: &Holomorph, h1: &Subgroup, h2: &Subgroup) -> Result<bool> {
    Classifier::new(hol, 1)?.braces_isomorphic(h1, h2)
}

pub fn classify_braces(hol: &Holomorph, list: &[Subgroup], jobs: usize) -> Result<Vec<ClassRecord>> {
    Classifier::new(hol, jobs)?.classify(list)
}
