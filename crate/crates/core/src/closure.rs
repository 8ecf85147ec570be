//! Breadth-first closure of a generating set under a binary operation.

use std::collections::HashSet;
use std::hash::Hash;

use crate::error::{Error, Result};

/// Saturates `gens` under `mul`, starting from `identity`.
///
/// Right multiplication by generators reaches every element of the generated
/// group because the group is finite. Returns the elements sorted.
pub fn saturate<T, F>(identity: T, gens: &[T], bound: usize, mut mul: F) -> Result<Vec<T>>
where
    T: Clone + Eq + Hash + Ord,
    F: FnMut(&T, &T) -> T,
{
    let mut seen: HashSet<T> = HashSet::new();
    seen.insert(identity.clone());
    let mut frontier = vec![identity];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = mul(&x, g);
            if !seen.contains(&y) {
                if seen.len() >= bound {
                    return Err(Error::Capacity(format!(
                        "closure exceeds the bound of {bound} elements"
                    )));
                }
                seen.insert(y.clone());
                frontier.push(y);
            }
        }
    }
    let mut out: Vec<T> = seen.into_iter().collect();
    out.sort_unstable();
    Ok(out)
}

/// Greedy generating set: walks `elements` in order and keeps every element
/// not already in the closure of the kept ones.
pub fn greedy_generators<T, F>(identity: &T, elements: &[T], bound: usize, mut mul: F) -> Result<Vec<T>>
where
    T: Clone + Eq + Hash + Ord,
    F: FnMut(&T, &T) -> T,
{
    let mut gens: Vec<T> = Vec::new();
    let mut span: HashSet<T> = HashSet::from([identity.clone()]);
    for x in elements {
        if span.contains(x) {
            continue;
        }
        gens.push(x.clone());
        span = saturate(identity.clone(), &gens, bound, &mut mul)?
            .into_iter()
            .collect();
        if span.len() == elements.len() {
            break;
        }
    }
    Ok(gens)
}
