//! End-to-end runs: enumeration followed by classification, comparison with
//! the oracle, class-list files and reports.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::abelian::GroupSpec;
use crate::checkpoint::parse_generators;
use crate::classify::{ClassRecord, Classifier};
use crate::error::{Error, Result};
use crate::hol::Holomorph;
use crate::layered::{enumerate_regular, LayerOptions};
use crate::oracle::brute_force_regular_oracle;
use crate::subgroup::closure;

pub const CLASSES_HEADER: &str = "BRACEFORGE-CLASSES";
pub const CLASSES_VERSION: u32 = 1;

/// Regular subgroups of a Sylow subgroup, then their brace classes.
pub fn run_pipeline(hol: &Holomorph, opts: &LayerOptions, jobs: usize) -> Result<Vec<ClassRecord>> {
    let candidates = enumerate_regular(hol, opts)?;
    Classifier::new(hol, jobs)?.classify(&candidates)
}

/// Classes found by the oracle, with the same classifier.
pub fn run_oracle(hol: &Holomorph, jobs: usize) -> Result<Vec<ClassRecord>> {
    let p = hol
        .spec()
        .prime()
        .ok_or_else(|| Error::Domain(format!("{} is not a p-group", hol.spec())))?;
    Classifier::new(hol, jobs)?.classify(&brute_force_regular_oracle(hol, p)?)
}

#[derive(Debug, Clone)]
pub struct Comparison {
    pub pipeline: Vec<ClassRecord>,
    pub oracle: Vec<ClassRecord>,
    /// Oracle classes the pipeline did not produce.
    pub missing: Vec<ClassRecord>,
    /// Pipeline classes the oracle did not produce.
    pub extra: Vec<ClassRecord>,
}

impl Comparison {
    pub fn is_equal(&self) -> bool {
        self.missing.is_empty() && self.extra.is_empty()
    }
}

/// Representatives are least in their `Aut(G)`-orbit, so two classified
/// lists agree up to conjugacy exactly when they are equal.
pub fn compare_with_oracle(hol: &Holomorph, jobs: usize) -> Result<Comparison> {
    let pipeline = run_pipeline(hol, &LayerOptions::default(), jobs)?;
    let oracle = run_oracle(hol, jobs)?;
    let missing = oracle.iter().filter(|r| !pipeline.contains(r)).cloned().collect();
    let extra = pipeline.iter().filter(|r| !oracle.contains(r)).cloned().collect();
    Ok(Comparison {
        pipeline,
        oracle,
        missing,
        extra,
    })
}

/// Class-list text: header, group line, one tab-separated line per class
/// (fingerprint hashes, class length, generators) and a count footer.
pub fn write_class_list(hol: &Holomorph, records: &[ClassRecord]) -> String {
    let mut out = format!("{CLASSES_HEADER} {CLASSES_VERSION}\n{}\n", hol.spec());
    for r in records {
        let gens: Vec<String> = r.representative.generators(hol).iter().map(|x| x.to_string()).collect();
        writeln!(
            out,
            "{}\t{}\t{}",
            r.invariants.hash_tuple(),
            r.invariants.class_length,
            gens.join(";")
        )
        .expect("write to string");
    }
    writeln!(out, "count={}", records.len()).expect("write to string");
    out
}

/// Parses a class list, recomputing the invariants of each representative
/// and rejecting the file if they disagree with the recorded ones.
pub fn read_class_list(path: &Path, classifier: &Classifier) -> Result<Vec<ClassRecord>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_class_list(&text, classifier).map_err(|reason| Error::integrity(path, reason))
}

pub fn parse_class_list(text: &str, classifier: &Classifier) -> std::result::Result<Vec<ClassRecord>, String> {
    let hol = classifier.holomorph();
    let spec = hol.spec();
    let lines: Vec<&str> = text.lines().collect();
    if lines.len() < 3 {
        return Err("truncated class list".into());
    }
    if lines[0] != format!("{CLASSES_HEADER} {CLASSES_VERSION}") {
        return Err(format!("bad header {:?}", lines[0]));
    }
    let file_spec: GroupSpec = lines[1].parse().map_err(|e| format!("bad group line: {e}"))?;
    if &file_spec != spec {
        return Err(format!("group {file_spec} does not match {spec}"));
    }
    let count: usize = lines[lines.len() - 1]
        .strip_prefix("count=")
        .and_then(|c| c.parse().ok())
        .ok_or("missing count footer")?;
    let body = &lines[2..lines.len() - 1];
    if body.len() != count {
        return Err(format!("footer says {count} records, found {}", body.len()));
    }
    body.iter()
        .map(|line| {
            let fields: Vec<&str> = line.split('\t').collect();
            let [hashes, length, gens] = fields.as_slice() else {
                return Err(format!("malformed line {line:?}"));
            };
            let gens = parse_generators(spec, gens)?;
            let h = closure(hol, &gens).map_err(|e| e.to_string())?;
            let invariants = classifier.brace_invariants(&h).map_err(|e| e.to_string())?;
            if invariants.hash_tuple() != *hashes || invariants.class_length.to_string() != *length {
                return Err(format!("recorded invariants do not match line {line:?}"));
            }
            let representative = classifier.canonical(&h).map_err(|e| e.to_string())?;
            if representative != h {
                return Err(format!("line {line:?} is not a canonical representative"));
            }
            Ok(ClassRecord {
                invariants,
                representative,
            })
        })
        .collect()
}

/// Rows `mult_group<TAB>count` sorted by the group key, then `total<TAB>n`.
/// Keys are fingerprint hashes, or names from `id_map` where given.
pub fn report(records: &[ClassRecord], id_map: &HashMap<String, String>) -> String {
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for r in records {
        let hash = r.invariants.mult_fp.hash_hex();
        let key = id_map.get(&hash).cloned().unwrap_or(hash);
        *counts.entry(key).or_default() += 1;
    }
    let mut out = String::from("mult_group\tcount\n");
    for (key, n) in &counts {
        writeln!(out, "{key}\t{n}").expect("write to string");
    }
    writeln!(out, "total\t{}", records.len()).expect("write to string");
    out
}

/// Reads `hash<TAB>name` lines; blank lines and `#` comments are skipped.
pub fn parse_id_map(text: &str) -> Result<HashMap<String, String>> {
    text.lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|l| {
            l.split_once('\t')
                .map(|(h, n)| (h.trim().to_string(), n.trim().to_string()))
                .ok_or_else(|| Error::Parse(format!("id map line {l:?} lacks a tab")))
        })
        .collect()
}
