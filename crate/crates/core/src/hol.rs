//! The holomorph `Hol(G) = G x| Aut(G)` of a finite abelian group.
//!
//! Elements are pairs `(g, alpha)` with product
//! `(g, alpha)(h, beta) = (g + alpha(h), alpha o beta)` and affine action
//! `(g, alpha) * h = g + alpha(h)` on `G`.

use std::fmt;

use crate::abelian::{GroupElement, GroupSpec};
use crate::aut::{self, Automorphism};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HolElement {
    pub g: GroupElement,
    pub alpha: Automorphism,
}

impl HolElement {
    pub fn new(g: GroupElement, alpha: Automorphism) -> Self {
        HolElement { g, alpha }
    }

    pub fn identity(spec: &GroupSpec) -> Self {
        HolElement {
            g: spec.zero(),
            alpha: Automorphism::identity(spec),
        }
    }

    pub fn translation(spec: &GroupSpec, g: GroupElement) -> Self {
        HolElement {
            g,
            alpha: Automorphism::identity(spec),
        }
    }

    pub fn from_aut(spec: &GroupSpec, alpha: Automorphism) -> Self {
        HolElement { g: spec.zero(), alpha }
    }

    pub fn is_identity(&self) -> bool {
        self.g.is_zero() && self.alpha.is_identity()
    }

    /// The translation part `pi_G(x)`. Not a homomorphism.
    pub fn projection(&self) -> &GroupElement {
        &self.g
    }

    /// Parses `"1,2 | 1,0;0,1"`.
    pub fn parse(spec: &GroupSpec, s: &str) -> Result<Self> {
        let (g, m) = s
            .split_once('|')
            .ok_or_else(|| Error::Parse(format!("holomorph element {s:?} lacks '|'")))?;
        let g: GroupElement = g.parse()?;
        spec.check(&g)?;
        let alpha = Automorphism::parse(spec, m)?;
        Ok(HolElement { g, alpha })
    }
}

impl fmt::Display for HolElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} | {}", self.g, self.alpha)
    }
}

/// Arithmetic in `Hol(G)` for a fixed `G`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Holomorph {
    spec: GroupSpec,
}

impl Holomorph {
    pub fn new(spec: GroupSpec) -> Self {
        Holomorph { spec }
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn identity(&self) -> HolElement {
        HolElement::identity(&self.spec)
    }

    fn check(&self, x: &HolElement) -> Result<()> {
        self.spec.check_len(x.g.len())?;
        if x.alpha.dim() != self.spec.rank() {
            return Err(Error::Shape(format!(
                "automorphism of rank {} used in Hol({})",
                x.alpha.dim(),
                self.spec
            )));
        }
        Ok(())
    }

    pub fn mul(&self, x: &HolElement, y: &HolElement) -> Result<HolElement> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.mul_unchecked(x, y))
    }

    pub(crate) fn mul_unchecked(&self, x: &HolElement, y: &HolElement) -> HolElement {
        let s = &self.spec;
        HolElement {
            g: s.add_unchecked(&x.g, &aut::apply_unchecked(s, &x.alpha, &y.g)),
            alpha: aut::compose_unchecked(s, &x.alpha, &y.alpha),
        }
    }

    /// `(g, alpha)^-1 = (-alpha^-1(g), alpha^-1)`.
    pub fn inv(&self, x: &HolElement) -> Result<HolElement> {
        self.check(x)?;
        if !aut::is_automorphism(&self.spec, &x.alpha) {
            return Err(Error::Validity(format!("{x} does not lie in Hol({})", self.spec)));
        }
        Ok(self.inv_unchecked(x))
    }

    pub(crate) fn inv_unchecked(&self, x: &HolElement) -> HolElement {
        let s = &self.spec;
        let ainv = aut::invert_unchecked(s, &x.alpha);
        let g = s.negate_unchecked(&aut::apply_unchecked(s, &ainv, &x.g));
        HolElement { g, alpha: ainv }
    }

    /// The affine action `(g, alpha) * h = g + alpha(h)`.
    pub fn act(&self, x: &HolElement, h: &GroupElement) -> Result<GroupElement> {
        self.check(x)?;
        self.spec.check_len(h.len())?;
        Ok(self.act_unchecked(x, h))
    }

    pub(crate) fn act_unchecked(&self, x: &HolElement, h: &GroupElement) -> GroupElement {
        self.spec
            .add_unchecked(&x.g, &aut::apply_unchecked(&self.spec, &x.alpha, h))
    }

    /// `x y x^-1`.
    pub(crate) fn conjugate_unchecked(&self, x: &HolElement, xinv: &HolElement, y: &HolElement) -> HolElement {
        self.mul_unchecked(&self.mul_unchecked(x, y), xinv)
    }

    /// Standard generators of the translation subgroup `T`.
    pub fn translation_generators(&self) -> Vec<HolElement> {
        (0..self.spec.rank())
            .map(|i| HolElement::translation(&self.spec, self.spec.basis(i)))
            .collect()
    }

    /// Generators of `T x| P` where `P` is a Sylow `p`-subgroup of Aut(G).
    ///
    /// When `G` is a `p`-group this is a Sylow `p`-subgroup of Hol(G).
    pub fn sylow_p_generators(&self, p: u64) -> Result<Vec<HolElement>> {
        if self.spec.prime() != Some(p) {
            return Err(Error::Domain(format!(
                "Sylow construction needs a {p}-group, got order {}",
                self.spec.order()
            )));
        }
        let mut gens = self.translation_generators();
        gens.extend(
            aut::sylow_p_aut_generators(&self.spec, p)?
                .into_iter()
                .map(|m| HolElement::from_aut(&self.spec, m)),
        );
        Ok(gens)
    }

    /// Generators of the whole holomorph.
    pub fn generators(&self) -> Result<Vec<HolElement>> {
        let mut gens = self.translation_generators();
        gens.extend(
            aut::aut_generators(&self.spec)?
                .into_iter()
                .map(|m| HolElement::from_aut(&self.spec, m)),
        );
        Ok(gens)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hol(s: &str) -> Holomorph {
        Holomorph::new(s.parse().unwrap())
    }

    fn x(h: &Holomorph, s: &str) -> HolElement {
        HolElement::parse(h.spec(), s).unwrap()
    }

    fn el(s: &str) -> GroupElement {
        s.parse().unwrap()
    }

    #[test]
    fn product_examples() {
        let h = hol("4");
        assert_eq!(h.mul(&x(&h, "1|3"), &x(&h, "2|1")).unwrap(), x(&h, "3|3"));
        let y = x(&h, "2|3");
        assert_eq!(h.mul(&h.identity(), &y).unwrap(), y);
        let h = hol("2,2");
        assert_eq!(
            h.mul(&x(&h, "1,0|0,1;1,0"), &x(&h, "0,1|0,1;1,0")).unwrap(),
            h.identity()
        );
    }

    #[test]
    fn inverse_examples() {
        let h = hol("4");
        assert_eq!(h.inv(&x(&h, "2|3")).unwrap(), x(&h, "2|3"));
        assert_eq!(h.mul(&x(&h, "2|3"), &x(&h, "2|3")).unwrap(), h.identity());
        assert_eq!(h.inv(&h.identity()).unwrap(), h.identity());
        assert_eq!(h.inv(&x(&h, "1|1")).unwrap(), x(&h, "3|1"));
    }

    #[test]
    fn action_examples() {
        let h = hol("4");
        assert_eq!(h.act(&x(&h, "1|3"), &el("2")).unwrap(), el("3"));
        assert_eq!(h.act(&h.identity(), &el("3")).unwrap(), el("3"));
        for s in ["0|1", "1|3", "2|1", "3|3"] {
            let y = x(&h, s);
            assert_eq!(&h.act(&y, &el("0")).unwrap(), y.projection());
        }
    }

    #[test]
    fn projection_is_not_a_homomorphism() {
        let h = hol("4");
        let a = x(&h, "0|3");
        let b = x(&h, "1|1");
        let ab = h.mul(&a, &b).unwrap();
        assert_eq!(ab.projection(), &el("3"));
        assert_eq!(h.spec().add(a.projection(), b.projection()).unwrap(), el("1"));
    }

    #[test]
    fn shape_errors() {
        let h = hol("4,4");
        let small = hol("4");
        assert!(matches!(h.mul(&h.identity(), &small.identity()), Err(Error::Shape(_))));
        assert!(h.act(&h.identity(), &el("1")).is_err());
    }

    #[test]
    fn text_syntax_roundtrip() {
        let h = hol("4,4,4");
        let y = x(&h, "1,2,3 | 1,0,0;0,1,0;0,0,1");
        assert_eq!(y.to_string(), "1,2,3 | 1,0,0;0,1,0;0,0,1");
        assert!(HolElement::parse(h.spec(), "1,2,3").is_err());
    }

    fn all_elements(h: &Holomorph) -> Vec<HolElement> {
        let gens = h.generators().unwrap();
        crate::closure::saturate(h.identity(), &gens, 1 << 16, |a, b| h.mul_unchecked(a, b)).unwrap()
    }

    #[test]
    fn group_axioms_exhaustive_on_hol_c4() {
        let h = hol("4");
        let all = all_elements(&h);
        assert_eq!(all.len(), 8);
        for a in &all {
            let ai = h.inv(a).unwrap();
            assert!(h.mul(a, &ai).unwrap().is_identity());
            assert!(h.mul(&ai, a).unwrap().is_identity());
            for b in &all {
                for c in &all {
                    let l = h.mul(&h.mul(a, b).unwrap(), c).unwrap();
                    let r = h.mul(a, &h.mul(b, c).unwrap()).unwrap();
                    assert_eq!(l, r);
                }
            }
        }
    }

    #[test]
    fn action_axioms_and_faithfulness() {
        for s in ["4", "2,2", "2,4"] {
            let h = hol(s);
            let all = all_elements(&h);
            let points = h.spec().elements().unwrap();
            let mut images = std::collections::HashSet::new();
            for a in &all {
                for b in &all {
                    let ab = h.mul(a, b).unwrap();
                    for p in &points {
                        let lhs = h.act(&ab, p).unwrap();
                        let rhs = h.act(a, &h.act(b, p).unwrap()).unwrap();
                        assert_eq!(lhs, rhs);
                    }
                }
                let image: Vec<GroupElement> = points.iter().map(|p| h.act(a, p).unwrap()).collect();
                images.insert(image);
            }
            assert_eq!(images.len(), all.len(), "action on {s} is faithful");
        }
    }

    #[test]
    fn sylow_orders() {
        let cases = [
            ("4", 2, 8),
            ("2,2,2", 2, 64),
            ("4,4", 2, 512),
            ("3,3", 3, 27),
            ("2", 2, 2),
        ];
        for (s, p, expected) in cases {
            let h = hol(s);
            let gens = h.sylow_p_generators(p).unwrap();
            let all = crate::closure::saturate(h.identity(), &gens, 1 << 20, |a, b| h.mul_unchecked(a, b)).unwrap();
            assert_eq!(all.len(), expected, "Syl_{p}(Hol({s}))");
        }
        assert!(hol("6").sylow_p_generators(2).is_err());
    }

    #[test]
    #[ignore = "materializes 2^18 elements"]
    fn sylow_order_c4_cubed() {
        let h = hol("4,4,4");
        let gens = h.sylow_p_generators(2).unwrap();
        let all = crate::closure::saturate(h.identity(), &gens, 1 << 20, |a, b| h.mul_unchecked(a, b)).unwrap();
        assert_eq!(all.len(), 262144);
    }
}
