//! A subgroup of the holomorph materialized as a multiplication table.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::finite::{CayleyTable, ElemSet};
use crate::hol::{HolElement, Holomorph};
use crate::subgroup::Subgroup;

/// The elements of a subgroup `S <= Hol(G)` in canonical order, with the
/// multiplication table of `S`. Index order equals element order, so sorted
/// index sets map to canonical subgroup encodings.
#[derive(Debug, Clone)]
pub struct HolTable {
    hol: Holomorph,
    elements: Vec<HolElement>,
    index: HashMap<HolElement, u32>,
    table: CayleyTable,
}

impl HolTable {
    pub fn generate(hol: &Holomorph, gens: &[HolElement]) -> Result<Self> {
        let (elements, table) = CayleyTable::generate(hol.identity(), gens, |a, b| hol.mul_unchecked(a, b))?;
        let index = elements
            .iter()
            .enumerate()
            .map(|(i, x)| (x.clone(), i as u32))
            .collect();
        Ok(HolTable {
            hol: hol.clone(),
            elements,
            index,
            table,
        })
    }

    /// A Sylow `p`-subgroup of Hol(G) containing the translations.
    pub fn sylow(hol: &Holomorph, p: u64) -> Result<Self> {
        Self::generate(hol, &hol.sylow_p_generators(p)?)
    }

    pub fn holomorph(&self) -> &Holomorph {
        &self.hol
    }

    pub fn table(&self) -> &CayleyTable {
        &self.table
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn element(&self, i: u32) -> &HolElement {
        &self.elements[i as usize]
    }

    pub fn index_of(&self, x: &HolElement) -> Option<u32> {
        self.index.get(x).copied()
    }

    pub fn whole(&self) -> ElemSet {
        self.table.whole()
    }

    pub fn to_subgroup(&self, set: &ElemSet) -> Subgroup {
        // members are sorted and index order is element order
        Subgroup::from_elements(
            set.members()
                .iter()
                .map(|&i| self.elements[i as usize].clone())
                .collect(),
        )
    }

    pub fn to_set(&self, h: &Subgroup) -> Result<ElemSet> {
        let members = h
            .elements()
            .iter()
            .map(|x| {
                self.index_of(x)
                    .ok_or_else(|| Error::Contract(format!("element {x} lies outside the ambient table")))
            })
            .collect::<Result<Vec<u32>>>()?;
        Ok(self.table.set(members))
    }

    pub fn set_from_generators(&self, gens: &[HolElement]) -> Result<ElemSet> {
        let idx = gens
            .iter()
            .map(|x| {
                self.index_of(x)
                    .ok_or_else(|| Error::Contract(format!("generator {x} lies outside the ambient table")))
            })
            .collect::<Result<Vec<u32>>>()?;
        Ok(self.table.closure(&idx))
    }

    /// Whether the projection of `set` onto `G` is surjective.
    pub fn is_transitive(&self, set: &ElemSet) -> bool {
        let mut seen = std::collections::HashSet::new();
        for &i in set.members() {
            seen.insert(&self.elements[i as usize].g);
        }
        seen.len() as u64 == self.hol.spec().order()
    }

    pub fn stabiliser_order(&self, set: &ElemSet) -> usize {
        set.members()
            .iter()
            .filter(|&&i| self.elements[i as usize].g.is_zero())
            .count()
    }
}
