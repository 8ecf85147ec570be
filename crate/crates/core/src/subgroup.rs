//! Subgroups of the holomorph held as explicit element sets.
//!
//! The canonical encoding of a subgroup is its sorted element list; two
//! subgroups are equal iff their encodings are equal, and "least
//! representative" always means least in the lexicographic order of encodings.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use crate::abelian::GroupElement;
use crate::closure::{greedy_generators, saturate};
use crate::error::{Error, Result};
use crate::hol::{HolElement, Holomorph};

/// Largest subgroup materialized element by element.
pub const MAX_SUBGROUP_ORDER: usize = 1 << 18;

/// Largest conjugation orbit of subgroups that will be enumerated.
pub const MAX_ORBIT_LENGTH: usize = 1 << 22;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subgroup {
    elements: Vec<HolElement>,
}

impl Subgroup {
    /// Wraps an element list that is already a subgroup; sorts it.
    pub fn from_elements(mut elements: Vec<HolElement>) -> Self {
        elements.sort_unstable();
        elements.dedup();
        Subgroup { elements }
    }

    pub fn trivial(hol: &Holomorph) -> Self {
        Subgroup {
            elements: vec![hol.identity()],
        }
    }

    pub fn elements(&self) -> &[HolElement] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, x: &HolElement) -> bool {
        self.elements.binary_search(x).is_ok()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|x| other.contains(x))
    }

    /// Deterministic generating set: scan elements in canonical order and keep
    /// those outside the span of the ones kept so far.
    pub fn generators(&self, hol: &Holomorph) -> Vec<HolElement> {
        greedy_generators(&hol.identity(), &self.elements, MAX_SUBGROUP_ORDER, |a, b| {
            hol.mul_unchecked(a, b)
        })
        .expect("a materialized subgroup is within the closure bound")
    }

    /// Checks closure under products and inverses and the presence of the identity.
    pub fn verify(&self, hol: &Holomorph) -> bool {
        self.contains(&hol.identity())
            && self.elements.iter().all(|x| {
                self.contains(&hol.inv_unchecked(x))
                    && self.elements.iter().all(|y| self.contains(&hol.mul_unchecked(x, y)))
            })
    }
}

impl fmt::Display for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, x) in self.elements.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "({x})")?;
        }
        f.write_str("}")
    }
}

/// The smallest subgroup containing `gens`.
pub fn closure(hol: &Holomorph, gens: &[HolElement]) -> Result<Subgroup> {
    for g in gens {
        if g.g.len() != hol.spec().rank() || g.alpha.dim() != hol.spec().rank() {
            return Err(Error::Shape(format!(
                "generator {g} does not lie in Hol({})",
                hol.spec()
            )));
        }
    }
    let elements = saturate(hol.identity(), gens, MAX_SUBGROUP_ORDER, |a, b| hol.mul_unchecked(a, b))?;
    Ok(Subgroup { elements })
}

pub fn translations_subgroup(hol: &Holomorph) -> Result<Subgroup> {
    closure(hol, &hol.translation_generators())
}

/// `pi_G(H)`, the orbit of 0 under `H`, sorted.
pub fn orbit_of_zero(h: &Subgroup) -> Vec<GroupElement> {
    let mut out: Vec<GroupElement> = h.elements.iter().map(|x| x.g.clone()).collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// `H ∩ Aut(G)`, the stabiliser of 0.
pub fn stabilizer_of_zero(h: &Subgroup) -> Subgroup {
    Subgroup {
        elements: h.elements.iter().filter(|x| x.g.is_zero()).cloned().collect(),
    }
}

/// `|H| = |G|` and trivial stabiliser of 0.
pub fn is_regular(hol: &Holomorph, h: &Subgroup) -> bool {
    h.order() as u64 == hol.spec().order() && stabilizer_of_zero(h).order() == 1
}

/// Regularity straight from the definition: for every pair of points there is
/// exactly one element of `H` carrying the first to the second.
pub fn is_regular_by_definition(hol: &Holomorph, h: &Subgroup) -> Result<bool> {
    let points = hol.spec().elements()?;
    for k in &points {
        let mut hits: HashSet<GroupElement> = HashSet::new();
        for x in &h.elements {
            if !hits.insert(hol.act_unchecked(x, k)) {
                return Ok(false);
            }
        }
        if hits.len() != points.len() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// False when no regular subgroup can lie below `v`: the projection of `v`
/// onto `G` must already be surjective.
pub fn transitive_preimage_filter(hol: &Holomorph, v: &Subgroup) -> bool {
    orbit_of_zero(v).len() as u64 == hol.spec().order()
}

/// Whether a subgroup of order `target` can still map onto a candidate whose
/// image in the current quotient has order `candidate_order`, when the kernel
/// still to be lifted has order `remaining_kernel_order`.
pub fn size_filter(candidate_order: u64, remaining_kernel_order: u64, target: u64) -> bool {
    target.is_multiple_of(candidate_order) && candidate_order * remaining_kernel_order >= target
}

/// `x H x^-1`.
pub fn conjugate_subgroup(hol: &Holomorph, x: &HolElement, h: &Subgroup) -> Result<Subgroup> {
    let xinv = hol.inv(x)?;
    Ok(conjugate_with_inverse(hol, x, &xinv, h))
}

pub(crate) fn conjugate_with_inverse(hol: &Holomorph, x: &HolElement, xinv: &HolElement, h: &Subgroup) -> Subgroup {
    Subgroup::from_elements(h.elements.iter().map(|y| hol.conjugate_unchecked(x, xinv, y)).collect())
}

/// Precomputed conjugators with their inverses.
#[derive(Debug, Clone)]
pub struct Conjugators {
    pairs: Vec<(HolElement, HolElement)>,
}

impl Conjugators {
    pub fn new(hol: &Holomorph, gens: &[HolElement]) -> Result<Self> {
        let pairs = gens
            .iter()
            .map(|g| Ok((g.clone(), hol.inv(g)?)))
            .collect::<Result<_>>()?;
        Ok(Conjugators { pairs })
    }

    /// The conjugators `(0, alpha)` for the given automorphisms.
    pub fn from_automorphisms(hol: &Holomorph, auts: &[crate::aut::Automorphism]) -> Result<Self> {
        let gens: Vec<HolElement> = auts
            .iter()
            .map(|a| HolElement::from_aut(hol.spec(), a.clone()))
            .collect();
        Self::new(hol, &gens)
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// The orbit of `h` under the group generated by the conjugators, sorted.
    pub fn orbit(&self, hol: &Holomorph, h: &Subgroup) -> Result<Vec<Subgroup>> {
        let mut seen: HashSet<Subgroup> = HashSet::from([h.clone()]);
        let mut queue = VecDeque::from([h.clone()]);
        while let Some(k) = queue.pop_front() {
            for (x, xinv) in &self.pairs {
                let c = conjugate_with_inverse(hol, x, xinv, &k);
                if !seen.contains(&c) {
                    if seen.len() >= MAX_ORBIT_LENGTH {
                        return Err(Error::Capacity(format!(
                            "conjugation orbit exceeds {MAX_ORBIT_LENGTH} subgroups"
                        )));
                    }
                    seen.insert(c.clone());
                    queue.push_back(c);
                }
            }
        }
        let mut out: Vec<Subgroup> = seen.into_iter().collect();
        out.sort_unstable();
        Ok(out)
    }

    /// Least element of the orbit of `h`.
    pub fn canonical(&self, hol: &Holomorph, h: &Subgroup) -> Result<Subgroup> {
        Ok(self.orbit(hol, h)?.swap_remove(0))
    }
}

/// One representative per conjugation orbit, each the least encoding in its
/// orbit, returned in ascending order together with the orbit length.
pub fn dedup_with_lengths(
    hol: &Holomorph,
    list: &[Subgroup],
    conjugators: &Conjugators,
) -> Result<Vec<(Subgroup, usize)>> {
    let mut covered: HashSet<Subgroup> = HashSet::new();
    let mut reps = Vec::new();
    for h in list {
        if covered.contains(h) {
            continue;
        }
        let orbit = conjugators.orbit(hol, h)?;
        let len = orbit.len();
        let rep = orbit[0].clone();
        covered.extend(orbit);
        reps.push((rep, len));
    }
    reps.sort_unstable();
    Ok(reps)
}

/// One representative per orbit under conjugation by `<conjugators>`.
pub fn dedup_under_group(hol: &Holomorph, list: &[Subgroup], conjugators: &[HolElement]) -> Result<Vec<Subgroup>> {
    let c = Conjugators::new(hol, conjugators)?;
    Ok(dedup_with_lengths(hol, list, &c)?.into_iter().map(|(s, _)| s).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aut;

    fn hol(s: &str) -> Holomorph {
        Holomorph::new(s.parse().unwrap())
    }

    fn x(h: &Holomorph, s: &str) -> HolElement {
        HolElement::parse(h.spec(), s).unwrap()
    }

    fn klein_c4(h: &Holomorph) -> Subgroup {
        Subgroup::from_elements(["0|1", "2|1", "1|3", "3|3"].iter().map(|s| x(h, s)).collect())
    }

    fn aut_part(h: &Holomorph) -> Subgroup {
        let gens: Vec<HolElement> = aut::aut_generators(h.spec())
            .unwrap()
            .into_iter()
            .map(|m| HolElement::from_aut(h.spec(), m))
            .collect();
        closure(h, &gens).unwrap()
    }

    #[test]
    fn closure_examples() {
        let h = hol("4");
        assert_eq!(closure(&h, &[]).unwrap(), Subgroup::trivial(&h));
        let t = closure(&h, &[x(&h, "1|1")]).unwrap();
        assert_eq!(t, translations_subgroup(&h).unwrap());
        assert_eq!(t.order(), 4);
        let c2 = closure(&h, &[x(&h, "1|3")]).unwrap();
        assert_eq!(c2.elements(), &[x(&h, "0|1"), x(&h, "1|3")]);
        assert!(klein_c4(&h).verify(&h));
    }

    #[test]
    fn orbit_and_stabilizer_examples() {
        let h = hol("4");
        let t = translations_subgroup(&h).unwrap();
        assert_eq!(orbit_of_zero(&t).len(), 4);
        assert_eq!(stabilizer_of_zero(&t).order(), 1);
        let a = aut_part(&h);
        assert_eq!(orbit_of_zero(&a), vec![h.spec().zero()]);
        assert_eq!(stabilizer_of_zero(&a), a);
        assert_eq!(orbit_of_zero(&klein_c4(&h)).len(), 4);
    }

    #[test]
    fn regularity_examples() {
        let h = hol("4");
        assert!(is_regular(&h, &translations_subgroup(&h).unwrap()));
        assert!(!is_regular(&h, &aut_part(&h)));
        assert!(is_regular(&h, &klein_c4(&h)));
        assert!(is_regular_by_definition(&h, &klein_c4(&h)).unwrap());
        assert!(!is_regular_by_definition(&h, &aut_part(&h)).unwrap());
        let big = hol("4,4,4");
        let t = translations_subgroup(&big).unwrap();
        assert_eq!(t.order(), 64);
        assert!(is_regular(&big, &t));
    }

    #[test]
    fn filter_examples() {
        let h = hol("2,2");
        let s = closure(&h, &h.sylow_p_generators(2).unwrap()).unwrap();
        assert!(transitive_preimage_filter(&h, &s));
        assert!(!transitive_preimage_filter(&h, &aut_part(&h)));
        let v = closure(&h, &[x(&h, "1,0|1,0;0,1")]).unwrap();
        assert!(!transitive_preimage_filter(&h, &v));

        assert!(size_filter(32, 4, 64));
        assert!(!size_filter(8, 4, 64));
        assert!(!size_filter(48, 4, 64));
    }

    #[test]
    fn conjugation_examples() {
        let h = hol("4");
        let t = translations_subgroup(&h).unwrap();
        let all = closure(&h, &h.generators().unwrap()).unwrap();
        for g in all.elements() {
            assert_eq!(conjugate_subgroup(&h, g, &t).unwrap(), t);
        }
        let k = klein_c4(&h);
        assert_eq!(conjugate_subgroup(&h, &h.identity(), &k).unwrap(), k);
        let c = conjugate_subgroup(&h, &x(&h, "1|1"), &k).unwrap();
        assert!(is_regular(&h, &c));
        assert!(c.verify(&h));
    }

    #[test]
    fn generators_regenerate() {
        let h = hol("2,4");
        let s = closure(&h, &h.sylow_p_generators(2).unwrap()).unwrap();
        let gens = s.generators(&h);
        assert!(gens.len() <= 6);
        assert_eq!(closure(&h, &gens).unwrap(), s);
    }

    #[test]
    fn dedup_examples() {
        let h = hol("2,2");
        let k = closure(&h, &[x(&h, "1,0|1,1;0,1")]).unwrap();
        assert_eq!(dedup_under_group(&h, std::slice::from_ref(&k), &[]).unwrap(), vec![k.clone()]);
        assert_eq!(dedup_under_group(&h, &[k.clone(), k.clone()], &[]).unwrap().len(), 1);

        // the three cyclic regular subgroups of Hol(C2 x C2)
        let all = closure(&h, &h.generators().unwrap()).unwrap();
        let mut cyclic: Vec<Subgroup> = all
            .elements()
            .iter()
            .map(|g| closure(&h, std::slice::from_ref(g)).unwrap())
            .filter(|s| is_regular(&h, s))
            .collect();
        cyclic.sort();
        cyclic.dedup();
        assert_eq!(cyclic.len(), 3);
        let auts: Vec<HolElement> = aut::aut_generators(h.spec())
            .unwrap()
            .into_iter()
            .map(|m| HolElement::from_aut(h.spec(), m))
            .collect();
        let reps = dedup_under_group(&h, &cyclic, &auts).unwrap();
        assert_eq!(reps, vec![cyclic[0].clone()]);
    }
}
