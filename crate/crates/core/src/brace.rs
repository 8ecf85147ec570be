//! Left braces on `G` and the regular subgroups of `Hol(G)` they come from.

use std::fmt::Write as _;

use crate::abelian::{GroupElement, GroupSpec};
use crate::aut::{self, Automorphism};
use crate::error::{Error, Result};
use crate::finite::CayleyTable;
use crate::hol::{HolElement, Holomorph};
use crate::subgroup::{is_regular, Subgroup};

/// A regular subgroup `{(g, λ_g)}` stored as its lambda table, indexed by
/// the position of `g` in `spec.elements()`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RegularSubgroup {
    spec: GroupSpec,
    lambda: Vec<Automorphism>,
}

impl RegularSubgroup {
    /// A lambda table without any validity check; see [`verify_lambda_cocycle`].
    pub fn from_table(spec: GroupSpec, lambda: Vec<Automorphism>) -> Result<Self> {
        if lambda.len() as u64 != spec.order() {
            return Err(Error::Shape(format!(
                "lambda table has {} entries for a group of order {}",
                lambda.len(),
                spec.order()
            )));
        }
        Ok(RegularSubgroup { spec, lambda })
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn lambda(&self, g: &GroupElement) -> &Automorphism {
        &self.lambda[self.spec.index_of(g) as usize]
    }

    pub fn table(&self) -> &[Automorphism] {
        &self.lambda
    }

    pub fn to_subgroup(&self) -> Subgroup {
        Subgroup::from_elements(
            self.lambda
                .iter()
                .enumerate()
                .map(|(i, a)| HolElement::new(self.spec.element_at(i as u64), a.clone()))
                .collect(),
        )
    }

    /// One line per element: `g -> matrix`, after a group line.
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.spec);
        for (i, a) in self.lambda.iter().enumerate() {
            writeln!(out, "{} -> {}", self.spec.element_at(i as u64), a).expect("write to string");
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let spec: GroupSpec = lines
            .next()
            .ok_or_else(|| Error::Parse("empty brace file".into()))?
            .parse()?;
        let mut lambda: Vec<Option<Automorphism>> = vec![None; spec.order() as usize];
        for line in lines.filter(|l| !l.trim().is_empty()) {
            let (g, m) = line
                .split_once("->")
                .ok_or_else(|| Error::Parse(format!("brace line {line:?} lacks '->'")))?;
            let g: GroupElement = g.trim().parse()?;
            spec.check(&g)?;
            let slot = &mut lambda[spec.index_of(&g) as usize];
            if slot.is_some() {
                return Err(Error::Parse(format!("element {g} listed twice")));
            }
            *slot = Some(Automorphism::parse(&spec, m.trim())?);
        }
        let lambda = lambda
            .into_iter()
            .enumerate()
            .map(|(i, a)| a.ok_or_else(|| Error::Parse(format!("no line for {}", spec.element_at(i as u64)))))
            .collect::<Result<Vec<_>>>()?;
        Ok(RegularSubgroup { spec, lambda })
    }
}

/// A brace on `G`: the addition of `G` and a multiplication table on the
/// indices of `spec.elements()`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Brace {
    spec: GroupSpec,
    mul: Vec<u32>,
}

impl Brace {
    pub fn from_table(spec: GroupSpec, mul: Vec<u32>) -> Result<Self> {
        let n = spec.order() as usize;
        if mul.len() != n * n || mul.iter().any(|&x| x as usize >= n) {
            return Err(Error::Shape(format!(
                "a brace table on {n} elements needs {} entries below {n}",
                n * n
            )));
        }
        Ok(Brace { spec, mul })
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn mul(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        let n = self.spec.order();
        let (i, j) = (self.spec.index_of(a), self.spec.index_of(b));
        self.spec.element_at(self.mul[(i * n + j) as usize] as u64)
    }

    pub fn table(&self) -> &[u32] {
        &self.mul
    }

    /// The multiplicative group, if the table is one.
    pub fn multiplicative_group(&self) -> Result<CayleyTable> {
        CayleyTable::from_table(self.spec.order() as usize, self.mul.clone())
    }
}

/// The lambda table of a regular subgroup.
pub fn lambda_table(hol: &Holomorph, h: &Subgroup) -> Result<RegularSubgroup> {
    if !is_regular(hol, h) {
        return Err(Error::Contract("lambda table of a non-regular subgroup".into()));
    }
    let spec = hol.spec();
    let mut lambda = vec![None; spec.order() as usize];
    for x in h.elements() {
        lambda[spec.index_of(&x.g) as usize] = Some(x.alpha.clone());
    }
    Ok(RegularSubgroup {
        spec: spec.clone(),
        lambda: lambda
            .into_iter()
            .map(|a| a.expect("regular subgroups project onto G"))
            .collect(),
    })
}

/// `a · b = a + λ_a(b)`.
pub fn brace_from_regular(h: &RegularSubgroup) -> Result<Brace> {
    let spec = &h.spec;
    let elements = spec.elements()?;
    let n = elements.len();
    let mut mul = vec![0u32; n * n];
    for (i, a) in elements.iter().enumerate() {
        let la = &h.lambda[i];
        for (j, b) in elements.iter().enumerate() {
            let ab = spec.add(a, &aut::apply(spec, la, b)?)?;
            mul[i * n + j] = spec.index_of(&ab) as u32;
        }
    }
    Ok(Brace {
        spec: spec.clone(),
        mul,
    })
}

/// `λ_a(b) = -a + a·b`.
pub fn regular_from_brace(b: &Brace) -> Result<RegularSubgroup> {
    if !verify_brace(b) {
        return Err(Error::Contract("table is not a brace".into()));
    }
    let spec = &b.spec;
    let rank = spec.rank();
    let lambda = spec
        .elements()?
        .iter()
        .map(|a| {
            let neg = spec.negate(a)?;
            let images: Vec<GroupElement> = (0..rank)
                .map(|j| spec.add(&neg, &b.mul(a, &spec.basis(j))))
                .collect::<Result<_>>()?;
            let rows: Vec<Vec<i64>> = (0..rank)
                .map(|i| images.iter().map(|img| img.coords()[i] as i64).collect())
                .collect();
            Automorphism::new(spec, &rows)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RegularSubgroup {
        spec: spec.clone(),
        lambda,
    })
}

/// Whether the multiplication is a group law with identity `0` satisfying
/// `a(b + c) = ab - a + ac`.
pub fn verify_brace(b: &Brace) -> bool {
    let spec = &b.spec;
    let Ok(elements) = spec.elements() else {
        return false;
    };
    let n = elements.len();
    let zero = spec.index_of(&spec.zero()) as usize;
    let mul = |x: usize, y: usize| b.mul[x * n + y] as usize;
    if (0..n).any(|a| mul(zero, a) != a || mul(a, zero) != a) {
        return false;
    }
    if (0..n).any(|a| !(0..n).any(|c| mul(a, c) == zero)) {
        return false;
    }
    for a in 0..n {
        for x in 0..n {
            let ax = mul(a, x);
            if (0..n).any(|y| mul(ax, y) != mul(a, mul(x, y))) {
                return false;
            }
        }
    }
    let add = |x: usize, y: usize| spec.index_of(&spec.add_unchecked(&elements[x], &elements[y])) as usize;
    let neg: Vec<usize> = elements
        .iter()
        .map(|x| spec.index_of(&spec.negate_unchecked(x)) as usize)
        .collect();
    for a in 0..n {
        for x in 0..n {
            for y in 0..n {
                if mul(a, add(x, y)) != add(add(mul(a, x), neg[a]), mul(a, y)) {
                    return false;
                }
            }
        }
    }
    true
}

/// Whether `λ_0 = id`, `λ_{g + λ_g(k)} = λ_g λ_k` and
/// `λ_g^{-1} = λ_{λ_g^{-1}(-g)}` hold for all `g`, `k`.
pub fn verify_lambda_cocycle(h: &RegularSubgroup) -> bool {
    let spec = &h.spec;
    let Ok(elements) = spec.elements() else {
        return false;
    };
    if !h.lambda(&spec.zero()).is_identity() {
        return false;
    }
    for g in &elements {
        let lg = h.lambda(g);
        let Ok(lg_inv) = aut::invert(spec, lg) else {
            return false;
        };
        let Ok(neg) = spec.negate(g) else {
            return false;
        };
        let Ok(point) = aut::apply(spec, &lg_inv, &neg) else {
            return false;
        };
        if h.lambda(&point) != &lg_inv {
            return false;
        }
        for k in &elements {
            let lk = h.lambda(k);
            let Ok(moved) = aut::apply(spec, lg, k).and_then(|v| spec.add(g, &v)) else {
                return false;
            };
            match aut::compose(spec, lg, lk) {
                Ok(c) if &c == h.lambda(&moved) => {}
                _ => return false,
            }
        }
    }
    true
}

/// `{g : λ_g = id}`, sorted.
pub fn kernel_of_lambda(h: &RegularSubgroup) -> Vec<GroupElement> {
    let mut out: Vec<GroupElement> = h
        .lambda
        .iter()
        .enumerate()
        .filter(|(_, a)| a.is_identity())
        .map(|(i, _)| h.spec.element_at(i as u64))
        .collect();
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subgroup::{closure, translations_subgroup};

    fn klein_on_c4(hol: &Holomorph) -> Subgroup {
        let x = HolElement::parse(hol.spec(), "1 | 3").unwrap();
        let y = HolElement::parse(hol.spec(), "2 | 1").unwrap();
        closure(hol, &[x, y]).unwrap()
    }

    fn e(s: &str) -> GroupElement {
        s.parse().unwrap()
    }

    #[test]
    fn translations_give_trivial_brace() {
        let hol = Holomorph::new("2,4".parse().unwrap());
        let t = lambda_table(&hol, &translations_subgroup(&hol).unwrap()).unwrap();
        assert!(t.table().iter().all(Automorphism::is_identity));
        let b = brace_from_regular(&t).unwrap();
        let spec = hol.spec();
        for x in spec.elements().unwrap() {
            for y in spec.elements().unwrap() {
                assert_eq!(b.mul(&x, &y), spec.add(&x, &y).unwrap());
            }
        }
        assert_eq!(regular_from_brace(&b).unwrap(), t);
        assert_eq!(kernel_of_lambda(&t).len(), 8);
    }

    #[test]
    fn klein_brace_on_c4() {
        let hol = Holomorph::new("4".parse().unwrap());
        let h = klein_on_c4(&hol);
        assert_eq!(h.order(), 4);
        let r = lambda_table(&hol, &h).unwrap();
        let m1 = Automorphism::parse(hol.spec(), "1").unwrap();
        let m3 = Automorphism::parse(hol.spec(), "3").unwrap();
        assert_eq!(r.lambda(&e("0")), &m1);
        assert_eq!(r.lambda(&e("2")), &m1);
        assert_eq!(r.lambda(&e("1")), &m3);
        assert_eq!(r.lambda(&e("3")), &m3);
        let b = brace_from_regular(&r).unwrap();
        assert_eq!(b.mul(&e("1"), &e("1")), e("0"));
        assert!(verify_brace(&b));
        assert!(verify_lambda_cocycle(&r));
        // every element squares to 0
        for x in hol.spec().elements().unwrap() {
            assert!(b.mul(&x, &x).is_zero());
        }
        assert_eq!(regular_from_brace(&b).unwrap(), r);
        assert_eq!(r.to_subgroup(), h);
        assert_eq!(kernel_of_lambda(&r), vec![e("0"), e("2")]);
    }

    #[test]
    fn non_regular_input() {
        let hol = Holomorph::new("4".parse().unwrap());
        let x = HolElement::parse(hol.spec(), "0 | 3").unwrap();
        let h = closure(&hol, &[x]).unwrap();
        assert!(matches!(lambda_table(&hol, &h), Err(Error::Contract(_))));
    }

    #[test]
    fn shifted_addition_is_not_a_brace() {
        let spec: GroupSpec = "4".parse().unwrap();
        let n = 4u32;
        let mul = (0..n * n).map(|k| (k / n + k % n + 1) % n).collect();
        let b = Brace::from_table(spec, mul).unwrap();
        assert!(!verify_brace(&b));
        assert!(regular_from_brace(&b).is_err());
    }

    #[test]
    fn bad_lambda_tables() {
        let spec: GroupSpec = "4".parse().unwrap();
        let m3 = Automorphism::parse(&spec, "3").unwrap();
        let r = RegularSubgroup::from_table(spec.clone(), vec![m3.clone(); 4]).unwrap();
        assert!(!verify_lambda_cocycle(&r));
        let id = Automorphism::identity(&spec);
        // λ_1 = 3 alone breaks the cocycle law
        let r = RegularSubgroup::from_table(spec.clone(), vec![id.clone(), m3, id.clone(), id]).unwrap();
        assert!(!verify_lambda_cocycle(&r));
        assert!(RegularSubgroup::from_table(spec, vec![]).is_err());
    }

    #[test]
    fn text_roundtrip() {
        let hol = Holomorph::new("4".parse().unwrap());
        let r = lambda_table(&hol, &klein_on_c4(&hol)).unwrap();
        let text = r.to_text();
        assert!(text.starts_with("4\n0 -> 1\n1 -> 3\n"));
        assert_eq!(RegularSubgroup::from_text(&text).unwrap(), r);
        assert!(RegularSubgroup::from_text("4\n0 -> 1\n").is_err());
    }
}
