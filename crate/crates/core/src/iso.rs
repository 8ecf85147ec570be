//! Isomorphism testing of groups given by tables.

use crate::error::{Error, Result};
use crate::fingerprint::group_fingerprint;
use crate::finite::{CayleyTable, MAX_TABLE_ORDER};

/// Whether `t1` and `t2` are isomorphic.
///
/// After comparing fingerprints, generators of `t1` are mapped one at a time
/// to elements of `t2` of the same order; each partial assignment is extended
/// to the generated subgroup and abandoned as soon as it fails to be a
/// well-defined injective homomorphism.
pub fn are_isomorphic(t1: &CayleyTable, t2: &CayleyTable) -> Result<bool> {
    Ok(find_isomorphism(t1, t2)?.is_some())
}

/// An isomorphism `t1 -> t2` as the image of every element, if one exists.
pub fn find_isomorphism(t1: &CayleyTable, t2: &CayleyTable) -> Result<Option<Vec<u32>>> {
    for t in [t1, t2] {
        if t.order() > MAX_TABLE_ORDER {
            return Err(Error::Capacity(format!(
                "group of order {} exceeds {MAX_TABLE_ORDER}",
                t.order()
            )));
        }
    }
    if t1.order() != t2.order() || group_fingerprint(t1) != group_fingerprint(t2) {
        return Ok(None);
    }
    let gens = generators_by_order(t1);
    let orders2: Vec<u64> = (0..t2.order() as u32).map(|a| t2.element_order(a)).collect();
    let mut images = Vec::with_capacity(gens.len());
    Ok(search(t1, t2, &gens, &orders2, &mut images))
}

/// A generating set found greedily, trying elements of large order first.
fn generators_by_order(t: &CayleyTable) -> Vec<u32> {
    let mut elements: Vec<u32> = (0..t.order() as u32).collect();
    elements.sort_by_key(|&a| (std::cmp::Reverse(t.element_order(a)), a));
    let mut gens = Vec::new();
    let mut span = t.trivial();
    for a in elements {
        if span.len() == t.order() {
            break;
        }
        if !span.contains(a) {
            gens.push(a);
            span = t.closure(&gens);
        }
    }
    gens
}

fn search(
    t1: &CayleyTable,
    t2: &CayleyTable,
    gens: &[u32],
    orders2: &[u64],
    images: &mut Vec<u32>,
) -> Option<Vec<u32>> {
    let k = images.len();
    let map = extend(t1, t2, &gens[..k], images)?;
    if k == gens.len() {
        return Some(map);
    }
    let want = t1.element_order(gens[k]);
    for b in 0..t2.order() as u32 {
        if orders2[b as usize] != want {
            continue;
        }
        images.push(b);
        if let Some(m) = search(t1, t2, gens, orders2, images) {
            return Some(m);
        }
        images.pop();
    }
    None
}

/// Extends `gens[i] -> images[i]` over the generated subgroup, checking that
/// the result is well defined and injective. Unreached entries are `u32::MAX`.
fn extend(t1: &CayleyTable, t2: &CayleyTable, gens: &[u32], images: &[u32]) -> Option<Vec<u32>> {
    let mut map = vec![u32::MAX; t1.order()];
    let mut used = vec![false; t2.order()];
    map[t1.identity() as usize] = t2.identity();
    used[t2.identity() as usize] = true;
    let mut queue = vec![t1.identity()];
    let mut i = 0;
    while i < queue.len() {
        let x = queue[i];
        i += 1;
        for (&g, &h) in gens.iter().zip(images) {
            let y = t1.mul(x, g);
            let fy = t2.mul(map[x as usize], h);
            match map[y as usize] {
                u32::MAX => {
                    if used[fy as usize] {
                        return None;
                    }
                    used[fy as usize] = true;
                    map[y as usize] = fy;
                    queue.push(y);
                }
                prev if prev != fy => return None,
                _ => {}
            }
        }
    }
    Some(map)
}
