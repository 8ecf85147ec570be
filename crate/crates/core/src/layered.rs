//! Layered enumeration of subgroups of a soluble `S <= Hol(G)`.
//!
//! Along a normal series `S = N_0 > N_1 > ... > N_r = 1` with elementary
//! abelian factors, layer `i` holds one representative of every `S`-class of
//! subgroups `U >= N_i` that survive the filters. A subgroup `V >= N_{i+1}` is
//! determined by `A = V N_i` (a class of layer `i`), by `B = V ∩ N_i` (a
//! subspace of `N_i / N_{i+1}`) and by the choice of `V` among the complements
//! of `N_i / B` in `A / B`. Two such `V` with the same `A` are `S`-conjugate
//! exactly when they are conjugate under `N_S(A)`.

use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};

use crate::checkpoint::{checkpoint_load, checkpoint_save, LayerState};
use crate::complements::Presentation;
use crate::error::{Error, Result};
use crate::finite::{CayleyTable, ElemSet};
use crate::fp;
use crate::hol::{HolElement, Holomorph};
use crate::holtable::HolTable;
use crate::numeric::{factorize, log_p};
use crate::series::elementary_abelian_series;
use crate::subgroup::{size_filter, Subgroup};

/// Checkpointing and interruption settings.
#[derive(Debug, Clone)]
pub struct LayerOptions {
    pub checkpoint_dir: Option<PathBuf>,
    /// Continue from the checkpoints found in `checkpoint_dir`.
    pub resume: bool,
    /// Stop with [`Error::Interrupted`] after processing this many parent
    /// classes, leaving a checkpoint behind.
    pub step_budget: Option<usize>,
    /// Save the partial layer after this many parents.
    pub save_every: usize,
}

impl Default for LayerOptions {
    fn default() -> Self {
        LayerOptions {
            checkpoint_dir: None,
            resume: false,
            step_budget: None,
            save_every: 64,
        }
    }
}

/// Classes of subgroups of `S` of order `target` with surjective projection
/// onto `G`, one per `S`-conjugacy class.
pub fn enumerate_layered(hol: &Holomorph, s: &Subgroup, target: u64, opts: &LayerOptions) -> Result<Vec<Subgroup>> {
    let table = HolTable::generate(hol, &s.generators(hol))?;
    enumerate_in_table(&table, target, opts)
}

/// Regular subgroups of a Sylow `p`-subgroup of `Hol(G)` up to conjugacy in
/// that Sylow subgroup, for a `p`-group `G`.
pub fn enumerate_regular(hol: &Holomorph, opts: &LayerOptions) -> Result<Vec<Subgroup>> {
    let p = hol
        .spec()
        .prime()
        .ok_or_else(|| Error::Domain(format!("{} is not a p-group", hol.spec())))?;
    let table = HolTable::sylow(hol, p)?;
    enumerate_in_table(&table, hol.spec().order(), opts)
}

pub fn enumerate_in_table(table: &HolTable, target: u64, opts: &LayerOptions) -> Result<Vec<Subgroup>> {
    run(table, target, opts, &mut None)
}

/// A complement problem `(A, N, B)` met during enumeration.
pub type ComplementInstance = (ElemSet, ElemSet, ElemSet);

/// Runs the enumeration without checkpoints and returns, besides the result,
/// every `(A, N, B)` handed to the complement solver.
pub fn enumerate_with_trace(table: &HolTable, target: u64) -> Result<(Vec<Subgroup>, Vec<ComplementInstance>)> {
    let mut trace = Some(Vec::new());
    let found = run(table, target, &LayerOptions::default(), &mut trace)?;
    Ok((found, trace.unwrap_or_default()))
}

fn run(
    table: &HolTable,
    target: u64,
    opts: &LayerOptions,
    trace: &mut Option<Vec<ComplementInstance>>,
) -> Result<Vec<Subgroup>> {
    let t = table.table();
    let order = table.order() as u64;
    if target == 0 || !order.is_multiple_of(target) {
        return Err(Error::Contract(format!(
            "target {target} does not divide |S| = {order}"
        )));
    }
    if target == 1 {
        return Ok(vec![table.to_subgroup(&t.trivial())]);
    }
    let series = elementary_abelian_series(t, &table.whole())?.terms;
    let store = opts.checkpoint_dir.as_deref().map(|d| Store::new(d, table.holomorph()));
    if let Some(store) = &store {
        if !opts.resume {
            store.clear()?;
        }
    }

    let mut resumed = None;
    if let (Some(store), true) = (&store, opts.resume) {
        resumed = store.latest(table)?;
    }
    let (mut k, mut layer) = match resumed {
        Some((k, layer)) => (k, layer),
        None => {
            let layer = vec![table.whole()];
            if let Some(store) = &store {
                store.save_layer(table, 0, &layer, None)?;
            }
            (0, layer)
        }
    };

    let mut steps = 0usize;
    while k + 1 < series.len() {
        let step = LayerStep::new(table, &series[k], &series[k + 1], target);
        let (start, mut next) = match (&store, opts.resume) {
            (Some(store), true) => store.partial(table, k + 1)?.unwrap_or_default(),
            _ => (0, Vec::new()),
        };
        for (j, a) in layer.iter().enumerate().skip(start) {
            if opts.step_budget.is_some_and(|b| steps >= b) {
                if let Some(store) = &store {
                    store.save_layer(table, k + 1, &next, Some(j))?;
                }
                return Err(Error::Interrupted { steps });
            }
            next.extend(step.children(a, trace)?);
            steps += 1;
            if let Some(store) = &store {
                if (j + 1) % opts.save_every.max(1) == 0 && j + 1 < layer.len() {
                    store.save_layer(table, k + 1, &next, Some(j + 1))?;
                }
            }
        }
        if let Some(store) = &store {
            store.save_layer(table, k + 1, &next, None)?;
            store.remove_partials(k + 1)?;
        }
        layer = next;
        k += 1;
    }

    // survivors of the last layer already have the target order; check anyway
    let mut out: Vec<Subgroup> = layer
        .iter()
        .filter(|v| v.len() as u64 == target && table.is_transitive(v))
        .map(|v| table.to_subgroup(v))
        .collect();
    out.sort_unstable();
    Ok(out)
}

/// Everything about the step from `N` to `M` that does not depend on `A`.
struct LayerStep<'a> {
    table: &'a HolTable,
    n: &'a ElemSet,
    m_order: u64,
    target: u64,
    /// Every subgroup between `M` and `N`.
    intermediates: Vec<ElemSet>,
}

impl<'a> LayerStep<'a> {
    fn new(table: &'a HolTable, n: &'a ElemSet, m: &'a ElemSet, target: u64) -> Self {
        let t = table.table();
        let index = (n.len() / m.len()) as u64;
        let p = factorize(index)[0].0 as u32;
        let dim = log_p(index, p as u64).expect("elementary abelian factor") as usize;
        let m_gens = t.generators(m);
        let mut lifts = Vec::new();
        let mut span = m.clone();
        for &y in n.members() {
            if span.len() == n.len() {
                break;
            }
            if !span.contains(y) {
                lifts.push(y);
                let mut gens = m_gens.clone();
                gens.extend_from_slice(&lifts);
                span = t.closure(&gens);
            }
        }
        let mut intermediates = Vec::new();
        for sub_dim in 0..=dim {
            fp::for_each_subspace(p, dim, sub_dim, |basis| {
                let mut gens = m_gens.clone();
                gens.extend(basis.iter().map(|v| lift(t, &lifts, v)));
                intermediates.push(t.closure(&gens));
            });
        }
        LayerStep {
            table,
            n,
            m_order: m.len() as u64,
            target,
            intermediates,
        }
    }

    /// Representatives of the classes `V >= M` with `V N = A`.
    fn children(&self, a: &ElemSet, trace: &mut Option<Vec<ComplementInstance>>) -> Result<Vec<ElemSet>> {
        let t = self.table.table();
        let n = self.n;
        let presentation = Presentation::new(t, a, n)?;
        let mut candidates = Vec::new();
        for b in &self.intermediates {
            let order = (a.len() / n.len() * b.len()) as u64;
            if !size_filter(order / self.m_order, self.m_order, self.target) {
                continue;
            }
            if !t.is_normal_in(b, a) {
                continue;
            }
            if let Some(trace) = trace {
                trace.push((a.clone(), n.clone(), b.clone()));
            }
            for u in presentation.complements(t, b)? {
                if self.table.is_transitive(&u) {
                    candidates.push(u);
                }
            }
        }
        let normaliser = t.normaliser(&self.table.whole(), a);
        Ok(orbit_representatives(t, &t.generators(&normaliser), candidates))
    }
}

fn lift(t: &CayleyTable, lifts: &[u32], v: &[u32]) -> u32 {
    lifts
        .iter()
        .zip(v)
        .fold(t.identity(), |acc, (&y, &c)| t.mul(acc, t.pow(y, c as u64)))
}

/// Least member of each conjugation orbit met in `candidates`, sorted.
fn orbit_representatives(t: &CayleyTable, conjugators: &[u32], candidates: Vec<ElemSet>) -> Vec<ElemSet> {
    let mut seen: HashSet<ElemSet> = HashSet::new();
    let mut reps = Vec::new();
    for c in candidates {
        if seen.contains(&c) {
            continue;
        }
        let mut orbit = vec![c.clone()];
        seen.insert(c);
        let mut i = 0;
        while i < orbit.len() {
            for &x in conjugators {
                let y = t.conjugate_set(x, &orbit[i]);
                if seen.insert(y.clone()) {
                    orbit.push(y);
                }
            }
            i += 1;
        }
        reps.push(orbit.into_iter().min().expect("nonempty orbit"));
    }
    reps.sort_unstable();
    reps
}

/// Checkpoint files in one directory: `layer-<k>.ckpt` for finished layers
/// and `layer-<k>-at-<j>.ckpt` for a layer whose first `j` parents are done.
struct Store {
    dir: PathBuf,
    hol: Holomorph,
}

impl Store {
    fn new(dir: &Path, hol: &Holomorph) -> Self {
        Store {
            dir: dir.to_path_buf(),
            hol: hol.clone(),
        }
    }

    fn entries(&self) -> Result<Vec<(usize, Option<usize>, PathBuf)>> {
        let mut out = Vec::new();
        let listing = match fs::read_dir(&self.dir) {
            Ok(l) => l,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(out),
            Err(e) => return Err(Error::io(&self.dir, e)),
        };
        for entry in listing {
            let entry = entry.map_err(|e| Error::io(&self.dir, e))?;
            let name = entry.file_name();
            let Some(stem) = name
                .to_str()
                .and_then(|n| n.strip_prefix("layer-"))
                .and_then(|n| n.strip_suffix(".ckpt"))
            else {
                continue;
            };
            let parsed = match stem.split_once("-at-") {
                Some((k, j)) => k.parse().ok().zip(j.parse().ok()).map(|(k, j)| (k, Some(j))),
                None => stem.parse().ok().map(|k| (k, None)),
            };
            if let Some((k, j)) = parsed {
                out.push((k, j, entry.path()));
            }
        }
        out.sort();
        Ok(out)
    }

    fn clear(&self) -> Result<()> {
        for (_, _, path) in self.entries()? {
            fs::remove_file(&path).map_err(|e| Error::io(&path, e))?;
        }
        Ok(())
    }

    fn remove_partials(&self, k: usize) -> Result<()> {
        for (layer, j, path) in self.entries()? {
            if layer == k && j.is_some() {
                fs::remove_file(&path).map_err(|e| Error::io(&path, e))?;
            }
        }
        Ok(())
    }

    fn path(&self, k: usize, parents_done: Option<usize>) -> PathBuf {
        match parents_done {
            Some(j) => self.dir.join(format!("layer-{k}-at-{j}.ckpt")),
            None => self.dir.join(format!("layer-{k}.ckpt")),
        }
    }

    fn save_layer(&self, table: &HolTable, k: usize, layer: &[ElemSet], parents_done: Option<usize>) -> Result<()> {
        fs::create_dir_all(&self.dir).map_err(|e| Error::io(&self.dir, e))?;
        let t = table.table();
        let mut state = LayerState::new(self.hol.spec().clone(), k);
        state.classes = layer
            .iter()
            .map(|v| t.generators(v).iter().map(|&i| table.element(i).clone()).collect())
            .collect();
        checkpoint_save(&state, &self.path(k, parents_done))?;
        if let Some(j) = parents_done {
            // older partial files of this layer are superseded
            for (layer, old, path) in self.entries()? {
                if layer == k && old.is_some_and(|o| o < j) {
                    fs::remove_file(&path).map_err(|e| Error::io(&path, e))?;
                }
            }
        }
        Ok(())
    }

    fn load(&self, table: &HolTable, path: &Path, k: usize) -> Result<Vec<ElemSet>> {
        let state = checkpoint_load(path, self.hol.spec())?;
        if state.layer_index != k {
            return Err(Error::integrity(
                path,
                format!("layer line says {}, file name says {k}", state.layer_index),
            ));
        }
        state
            .classes
            .iter()
            .map(|gens: &Vec<HolElement>| {
                table
                    .set_from_generators(gens)
                    .map_err(|e| Error::integrity(path, e.to_string()))
            })
            .collect()
    }

    /// The last finished layer.
    fn latest(&self, table: &HolTable) -> Result<Option<(usize, Vec<ElemSet>)>> {
        let last = self.entries()?.into_iter().rfind(|(_, j, _)| j.is_none());
        match last {
            Some((k, _, path)) => Ok(Some((k, self.load(table, &path, k)?))),
            None => Ok(None),
        }
    }

    /// Progress on layer `k`: parents done and classes found so far.
    fn partial(&self, table: &HolTable, k: usize) -> Result<Option<(usize, Vec<ElemSet>)>> {
        let last = self
            .entries()?
            .into_iter().rfind(|(layer, j, _)| *layer == k && j.is_some());
        match last {
            Some((_, Some(j), path)) => Ok(Some((j, self.load(table, &path, k)?))),
            _ => Ok(None),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subgroup::is_regular;

    fn regular(spec: &str) -> Vec<Subgroup> {
        let hol = Holomorph::new(spec.parse().unwrap());
        enumerate_regular(&hol, &LayerOptions::default()).unwrap()
    }

    #[test]
    fn hol_c4() {
        let hol = Holomorph::new("4".parse().unwrap());
        let found = regular("4");
        assert_eq!(found.len(), 2);
        assert!(found.iter().all(|h| is_regular(&hol, h)));
        assert!(found.contains(&crate::subgroup::translations_subgroup(&hol).unwrap()));
    }

    #[test]
    fn sylow_of_hol_klein_four() {
        let hol = Holomorph::new("2,2".parse().unwrap());
        let found = regular("2,2");
        // in the dihedral Sylow subgroup: T and one cyclic class
        assert_eq!(found.len(), 2);
        let orders: Vec<u64> = found
            .iter()
            .map(|h| {
                h.elements()
                    .iter()
                    .map(|x| x.alpha.clone())
                    .collect::<HashSet<_>>()
                    .len() as u64
            })
            .collect();
        assert!(orders.contains(&1) && orders.contains(&2));
        assert!(found.iter().all(|h| is_regular(&hol, h)));
    }

    #[test]
    fn whole_group_target() {
        let hol = Holomorph::new("4".parse().unwrap());
        let s = HolTable::sylow(&hol, 2).unwrap();
        let all = enumerate_in_table(&s, 8, &LayerOptions::default()).unwrap();
        assert_eq!(all, vec![s.to_subgroup(&s.whole())]);
        let one = enumerate_in_table(&s, 1, &LayerOptions::default()).unwrap();
        assert_eq!(one[0].order(), 1);
        assert!(enumerate_in_table(&s, 3, &LayerOptions::default()).is_err());
    }

    #[test]
    fn prime_orders() {
        assert_eq!(regular("2").len(), 1);
        assert_eq!(regular("3").len(), 1);
        assert_eq!(regular("5").len(), 1);
    }

    #[test]
    fn interrupt_and_resume() {
        let hol = Holomorph::new("2,4".parse().unwrap());
        let reference = enumerate_regular(&hol, &LayerOptions::default()).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let mut opts = LayerOptions {
            checkpoint_dir: Some(dir.path().to_path_buf()),
            step_budget: Some(3),
            save_every: 2,
            ..LayerOptions::default()
        };
        let mut interruptions = 0;
        loop {
            match enumerate_regular(&hol, &opts) {
                Ok(found) => {
                    assert_eq!(found, reference);
                    break;
                }
                Err(Error::Interrupted { .. }) => {
                    interruptions += 1;
                    opts.resume = true;
                }
                Err(e) => panic!("{e}"),
            }
        }
        assert!(interruptions > 1);
    }

    #[test]
    fn corrupted_checkpoint_is_reported() {
        let hol = Holomorph::new("4".parse().unwrap());
        let dir = tempfile::tempdir().unwrap();
        let opts = LayerOptions {
            checkpoint_dir: Some(dir.path().to_path_buf()),
            ..LayerOptions::default()
        };
        enumerate_regular(&hol, &opts).unwrap();
        let path = dir.path().join("layer-1.ckpt");
        let text = fs::read_to_string(&path).unwrap();
        fs::write(&path, text.replace("count=", "cnt=")).unwrap();
        let resume = LayerOptions { resume: true, ..opts };
        // layer 2 is the last finished one; remove it so layer 1 is read
        fs::remove_file(dir.path().join("layer-2.ckpt")).unwrap();
        assert!(matches!(enumerate_regular(&hol, &resume), Err(Error::Integrity { .. })));
    }
}
