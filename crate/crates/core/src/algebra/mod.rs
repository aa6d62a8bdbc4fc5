//! The two quiver algebras over F₂ and their sums of basis paths.

mod peculiar;
mod torus;

use std::collections::BTreeSet;
use std::fmt;
use std::hash::Hash;

pub use peculiar::{Peculiar, PeculiarIdem, TangleGrading};
pub use torus::{KnotGrading, Torus, TorusIdem};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlgebraId {
    Torus,
    Peculiar,
}

impl fmt::Display for AlgebraId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AlgebraId::Torus => "torus",
            AlgebraId::Peculiar => "peculiar",
        })
    }
}

/// A basis path of a finite quiver algebra. Implementors are the basis enums themselves.
pub trait Algebra: Copy + Ord + Hash + fmt::Debug + Send + Sync + 'static {
    type Idem: Copy + Ord + Hash + fmt::Debug + Send + Sync + 'static;
    type Grading: Copy + Eq + Ord + Hash + fmt::Debug + Send + Sync + 'static;

    const ID: AlgebraId;

    fn basis() -> &'static [Self];
    fn idems() -> &'static [Self::Idem];

    fn name(self) -> &'static str;
    fn from_name(s: &str) -> Option<Self>;
    fn idem_name(i: Self::Idem) -> &'static str;
    fn idem_from_name(s: &str) -> Option<Self::Idem>;

    fn source(self) -> Self::Idem;
    fn target(self) -> Self::Idem;
    fn idempotent(i: Self::Idem) -> Self;
    fn as_idempotent(self) -> Option<Self::Idem>;

    /// `self · rhs`, meaning `rhs` is applied first.
    fn mul(self, rhs: Self) -> Option<Self>;

    /// Whether generators in idempotent `i` may carry a grading.
    fn graded_idem(i: Self::Idem) -> bool;

    /// Grading rule for an arrow `src → tgt` labeled `label`, if the algebra has one.
    fn arrow_consistent(src: &Self::Grading, label: Self, tgt: &Self::Grading) -> Option<bool>;

    fn endpoints(self) -> (Self::Idem, Self::Idem) {
        (self.source(), self.target())
    }

    fn is_idempotent(self) -> bool {
        self.as_idempotent().is_some()
    }
}

/// Multiplication data for a path algebra given by its basis words.
pub(crate) struct PathTable {
    n: usize,
    prod: Vec<Option<usize>>,
}

/// Description of one basis element: source idempotent, target idempotent, arrow word in
/// application order (empty for idempotents).
pub(crate) struct PathSpec {
    pub src: usize,
    pub tgt: usize,
    pub word: &'static [u8],
}

impl PathTable {
    /// Builds the table and checks that the basis is closed under concatenation modulo the
    /// forbidden adjacent pairs.
    pub(crate) fn build(specs: &[PathSpec], forbidden: &[(u8, u8)]) -> PathTable {
        let n = specs.len();
        let mut prod = vec![None; n * n];
        for (i, x) in specs.iter().enumerate() {
            for (j, y) in specs.iter().enumerate() {
                // x · y: y first
                if y.tgt != x.src {
                    continue;
                }
                let r = if y.word.is_empty() {
                    Some(i)
                } else if x.word.is_empty() {
                    Some(j)
                } else {
                    let w: Vec<u8> = y.word.iter().chain(x.word).copied().collect();
                    if w.windows(2).any(|p| forbidden.contains(&(p[0], p[1]))) {
                        None
                    } else {
                        let k = specs
                            .iter()
                            .position(|s| s.src == y.src && s.word == w.as_slice())
                            .unwrap_or_else(|| panic!("basis not closed: word {w:?} missing"));
                        assert_eq!(specs[k].tgt, x.tgt, "inconsistent endpoints for {w:?}");
                        Some(k)
                    }
                };
                prod[i * n + j] = r;
            }
        }
        PathTable { n, prod }
    }

    pub(crate) fn mul(&self, i: usize, j: usize) -> Option<usize> {
        self.prod[i * self.n + j]
    }
}

/// An F₂-linear combination of basis paths.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Element<A: Algebra> {
    terms: BTreeSet<A>,
}

impl<A: Algebra> Default for Element<A> {
    fn default() -> Self {
        Element { terms: BTreeSet::new() }
    }
}

impl<A: Algebra> Element<A> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basic(b: A) -> Self {
        Element { terms: BTreeSet::from([b]) }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = A>) -> Self {
        let mut e = Self::zero();
        for t in terms {
            e.add_basic(t);
        }
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = A> + '_ {
        self.terms.iter().copied()
    }

    pub fn contains(&self, b: A) -> bool {
        self.terms.contains(&b)
    }

    /// The single basis element, if this is one.
    pub fn as_basic(&self) -> Option<A> {
        if self.terms.len() == 1 {
            self.terms.first().copied()
        } else {
            None
        }
    }

    pub fn add_basic(&mut self, b: A) {
        if !self.terms.remove(&b) {
            self.terms.insert(b);
        }
    }

    pub fn add_assign(&mut self, other: &Element<A>) {
        for t in other.terms() {
            self.add_basic(t);
        }
    }

    pub fn add(&self, other: &Element<A>) -> Element<A> {
        let mut e = self.clone();
        e.add_assign(other);
        e
    }

    /// `self · rhs` with `rhs` applied first.
    pub fn mul(&self, rhs: &Element<A>) -> Element<A> {
        let mut out = Element::zero();
        for x in self.terms() {
            for y in rhs.terms() {
                if let Some(p) = x.mul(y) {
                    out.add_basic(p);
                }
            }
        }
        out
    }
}

impl<A: Algebra> fmt::Display for Element<A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for t in &self.terms {
            if !first {
                f.write_str("+")?;
            }
            first = false;
            f.write_str(t.name())?;
        }
        Ok(())
    }
}

impl<A: Algebra> fmt::Debug for Element<A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// An element tagged with its algebra, for callers that pick the algebra at runtime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnyElement {
    Torus(Element<Torus>),
    Peculiar(Element<Peculiar>),
}

impl AnyElement {
    pub fn algebra(&self) -> AlgebraId {
        match self {
            AnyElement::Torus(_) => AlgebraId::Torus,
            AnyElement::Peculiar(_) => AlgebraId::Peculiar,
        }
    }

    /// Parses a sum of basis names such as `p23+q14`; `0` is the zero element.
    pub fn parse(alg: AlgebraId, s: &str) -> Result<AnyElement> {
        fn go<A: Algebra>(s: &str) -> Result<Element<A>> {
            let mut e = Element::zero();
            let s = s.trim();
            if s == "0" {
                return Ok(e);
            }
            for tok in s.split('+') {
                let tok = tok.trim();
                let b = A::from_name(tok)
                    .ok_or_else(|| Error::Usage(format!("unknown {} basis element {tok:?}", A::ID)))?;
                e.add_basic(b);
            }
            Ok(e)
        }
        Ok(match alg {
            AlgebraId::Torus => AnyElement::Torus(go(s)?),
            AlgebraId::Peculiar => AnyElement::Peculiar(go(s)?),
        })
    }
}

impl fmt::Display for AnyElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnyElement::Torus(e) => e.fmt(f),
            AnyElement::Peculiar(e) => e.fmt(f),
        }
    }
}

/// Product `x · y` in the algebra `alg`; both operands must belong to it.
pub fn multiply(alg: AlgebraId, x: &AnyElement, y: &AnyElement) -> Result<AnyElement> {
    match (alg, x, y) {
        (AlgebraId::Torus, AnyElement::Torus(a), AnyElement::Torus(b)) => {
            Ok(AnyElement::Torus(a.mul(b)))
        }
        (AlgebraId::Peculiar, AnyElement::Peculiar(a), AnyElement::Peculiar(b)) => {
            Ok(AnyElement::Peculiar(a.mul(b)))
        }
        _ => Err(Error::Usage(format!(
            "operands over {} and {} cannot be multiplied in the {alg} algebra",
            x.algebra(),
            y.algebra()
        ))),
    }
}

/// The bigrading of a single nonzero basis element of the peculiar algebra.
pub fn grading_b(x: &Element<Peculiar>) -> Result<TangleGrading> {
    match x.as_basic() {
        Some(b) => Ok(b.grading()),
        None if x.is_zero() => Err(Error::UndefinedGrading("the zero element has no grading".into())),
        None => Err(Error::UndefinedGrading(format!("{x} is not a basis element"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exhaustive_associativity<A: Algebra>() -> usize {
        let mut n = 0;
        for &x in A::basis() {
            for &y in A::basis() {
                for &z in A::basis() {
                    let l = x.mul(y).and_then(|xy| xy.mul(z));
                    let r = y.mul(z).and_then(|yz| x.mul(yz));
                    assert_eq!(l, r, "({x:?}{y:?}){z:?} != {x:?}({y:?}{z:?})");
                    n += 1;
                }
            }
        }
        n
    }

    fn idempotent_laws<A: Algebra>() {
        for &x in A::basis() {
            let mut left = Element::<A>::zero();
            let mut right = Element::<A>::zero();
            for &i in A::idems() {
                let e = A::idempotent(i);
                assert_eq!(e.as_idempotent(), Some(i));
                if let Some(p) = e.mul(x) {
                    left.add_basic(p);
                }
                if let Some(p) = x.mul(e) {
                    right.add_basic(p);
                }
                assert_eq!(e.mul(x).is_some(), x.target() == i);
                assert_eq!(x.mul(e).is_some(), x.source() == i);
            }
            assert_eq!(left, Element::basic(x));
            assert_eq!(right, Element::basic(x));
        }
    }

    fn endpoint_compatibility<A: Algebra>() {
        for &x in A::basis() {
            for &y in A::basis() {
                if let Some(p) = x.mul(y) {
                    assert_eq!(x.source(), y.target());
                    assert_eq!(p.source(), y.source());
                    assert_eq!(p.target(), x.target());
                }
            }
        }
    }

    #[test]
    fn associativity_exhaustive() {
        assert_eq!(exhaustive_associativity::<Torus>(), 512);
        assert_eq!(exhaustive_associativity::<Peculiar>(), 4096);
    }

    #[test]
    fn idempotents_and_endpoints() {
        idempotent_laws::<Torus>();
        idempotent_laws::<Peculiar>();
        endpoint_compatibility::<Torus>();
        endpoint_compatibility::<Peculiar>();
    }

    #[test]
    fn names_round_trip() {
        for &b in Torus::basis() {
            assert_eq!(Torus::from_name(b.name()), Some(b));
        }
        for &b in Peculiar::basis() {
            assert_eq!(Peculiar::from_name(b.name()), Some(b));
        }
        assert_eq!(Torus::from_name("s4"), None);
        assert_eq!(Peculiar::from_name("q32"), None);
    }

    #[test]
    fn dynamic_multiply() {
        let q2 = AnyElement::parse(AlgebraId::Peculiar, "q2").unwrap();
        let q1 = AnyElement::parse(AlgebraId::Peculiar, "q1").unwrap();
        let q21 = AnyElement::parse(AlgebraId::Peculiar, "q21").unwrap();
        assert_eq!(multiply(AlgebraId::Peculiar, &q2, &q1).unwrap(), q21);

        let s1 = AnyElement::parse(AlgebraId::Torus, "s1").unwrap();
        let s2 = AnyElement::parse(AlgebraId::Torus, "s2").unwrap();
        assert_eq!(multiply(AlgebraId::Torus, &s1, &s2).unwrap().to_string(), "0");
        assert_eq!(multiply(AlgebraId::Torus, &s2, &s1).unwrap().to_string(), "s12");

        let p2 = AnyElement::parse(AlgebraId::Peculiar, "p2").unwrap();
        assert_eq!(multiply(AlgebraId::Peculiar, &p2, &q2).unwrap().to_string(), "0");
        let p1 = AnyElement::parse(AlgebraId::Peculiar, "p1").unwrap();
        let ia = AnyElement::parse(AlgebraId::Peculiar, "i_a").unwrap();
        assert_eq!(multiply(AlgebraId::Peculiar, &p1, &ia).unwrap(), p1);

        assert!(matches!(multiply(AlgebraId::Torus, &s1, &p1), Err(Error::Usage(_))));
        assert!(matches!(multiply(AlgebraId::Peculiar, &s1, &s2), Err(Error::Usage(_))));
    }

    #[test]
    fn sums_cancel_mod_two() {
        let mut e = Element::basic(Peculiar::P23);
        e.add_basic(Peculiar::Q14);
        assert_eq!(e.to_string(), "p23+q14");
        e.add_basic(Peculiar::P23);
        assert_eq!(e, Element::basic(Peculiar::Q14));
        assert_eq!(Element::<Peculiar>::zero().to_string(), "0");
    }

    #[test]
    fn grading_of_zero_is_undefined() {
        assert!(matches!(grading_b(&Element::zero()), Err(Error::UndefinedGrading(_))));
        let q4 = grading_b(&Element::basic(Peculiar::Q4)).unwrap();
        assert_eq!(q4, TangleGrading::new(crate::Half::HALF, 1.into(), 0.into()));
    }
}
