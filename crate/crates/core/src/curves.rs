//! Curve components over the peculiar algebra: templates, recognition and the direct
//! correspondence from knot curve segments.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{Peculiar, PeculiarIdem, TangleGrading};
use crate::complex::{isomorphism, Complex};
use crate::batch::verify_cfd;
use crate::error::{Error, Result};
use crate::half::Half;
use crate::ingest::{KnotInput, Payload};
use crate::segments::{SegmentDecomposition, SegmentKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CurveKind {
    R,
    S,
    SBar,
}

impl CurveKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CurveKind::R => "r",
            CurveKind::S => "s",
            CurveKind::SBar => "sbar",
        }
    }
}

/// A component: `r[k]` of slope k, or `s[2ℓ]` / `sbar[2ℓ]` of length 2ℓ, with its grading
/// shift when graded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TangleCurve {
    pub kind: CurveKind,
    pub param: i64,
    pub shift: Option<TangleGrading>,
    pub local_dim: u32,
}

impl TangleCurve {
    pub fn new(kind: CurveKind, param: i64, shift: Option<TangleGrading>) -> Self {
        TangleCurve { kind, param, shift, local_dim: 1 }
    }

    pub fn r(k: i64, graded: bool) -> Self {
        Self::new(CurveKind::R, k, graded.then_some(TangleGrading::ZERO))
    }
}

impl fmt::Display for TangleCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.kind.as_str(), self.param)?;
        match (self.kind, self.shift) {
            (CurveKind::R, Some(g)) if g == TangleGrading::ZERO => Ok(()),
            (_, None) => Ok(()),
            (_, Some(g)) => write!(f, " {g}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Multicurve {
    components: Vec<TangleCurve>,
    pub graded: bool,
}

impl Multicurve {
    pub fn new(mut components: Vec<TangleCurve>, graded: bool) -> Self {
        components.sort();
        Multicurve { components, graded }
    }

    pub fn components(&self) -> &[TangleCurve] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn rational(&self) -> Option<&TangleCurve> {
        self.components.iter().find(|c| c.kind == CurveKind::R)
    }

    pub fn without_gradings(&self) -> Multicurve {
        Multicurve::new(self.components.iter().map(|c| TangleCurve { shift: None, ..*c }).collect(), false)
    }

    /// One rational component of even slope; s and sbar paired by length and, when graded,
    /// (r; a₁, a₂) against (r; −a₁, −a₂) with a₁ = a₂.
    pub fn validate(&self) -> Result<()> {
        let rs: Vec<_> = self.components.iter().filter(|c| c.kind == CurveKind::R).collect();
        if rs.len() != 1 {
            return Err(Error::Structure(format!("expected exactly one rational component, found {}", rs.len())));
        }
        if rs[0].param % 2 != 0 {
            return Err(Error::Structure(format!("rational component slope {} is odd", rs[0].param)));
        }
        if rs[0].shift.is_some_and(|g| g != TangleGrading::ZERO) {
            return Err(Error::Structure(format!("rational component carries shift {}", rs[0].shift.unwrap())));
        }
        let mut balance: BTreeMap<(i64, Option<TangleGrading>), i64> = BTreeMap::new();
        for c in &self.components {
            if c.shift.is_some() != self.graded {
                return Err(Error::Structure(format!("component {c} grading presence disagrees with the multicurve")));
            }
            if c.local_dim != 1 {
                return Err(Error::Structure(format!("component {c} has a nontrivial local system")));
            }
            if c.kind == CurveKind::R {
                continue;
            }
            if c.param <= 0 || c.param % 2 != 0 {
                return Err(Error::Structure(format!("component {c} has invalid length")));
            }
            if let Some(g) = c.shift {
                if g.a1 != g.a2 {
                    return Err(Error::Structure(format!("component {c} has unequal Alexander shifts")));
                }
            }
            match c.kind {
                CurveKind::S => *balance.entry((c.param, c.shift)).or_default() += 1,
                _ => *balance.entry((c.param, c.shift.map(|g| TangleGrading::new(g.delta, -g.a1, -g.a2)))).or_default() -= 1,
            }
        }
        if let Some(((l, g), n)) = balance.into_iter().find(|(_, n)| *n != 0) {
            let at = g.map(|g| format!(" at {g}")).unwrap_or_default();
            return Err(Error::Structure(format!("s/sbar components of length {l}{at} are unbalanced by {n}")));
        }
        Ok(())
    }

    pub fn render(&self) -> String {
        self.components.iter().map(|c| format!("{c}\n")).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let curves: Vec<serde_json::Value> = self
            .components
            .iter()
            .map(|c| {
                let mut v = serde_json::json!({ "kind": c.kind.as_str(), "param": c.param });
                if let Some(g) = c.shift {
                    v["delta"] = g.delta.to_string().into();
                    v["a1"] = g.a1.to_string().into();
                    v["a2"] = g.a2.to_string().into();
                }
                v
            })
            .collect();
        serde_json::json!({ "graded": self.graded, "curves": curves })
    }
}

fn h(twice: i64) -> Half {
    Half::from_twice(twice)
}

/// Grading of the top generator of an unshifted template.
pub fn top_grading(kind: CurveKind, param: i64) -> TangleGrading {
    let l = param.abs() / 2;
    match kind {
        CurveKind::SBar => TangleGrading::ints(-1, l, l),
        _ => TangleGrading::ints(0, l, l),
    }
}

/// The graded complex of a component. Generators: `top`, `bot`, chains `l0…` and `r0…`
/// counted from the bottom; `a`/`c` for r[0].
pub fn template(kind: CurveKind, param: i64, shift: Option<TangleGrading>) -> Result<Complex<Peculiar>> {
    match kind {
        CurveKind::R if param % 2 != 0 => return Err(Error::Usage(format!("r[{param}]: slope must be even"))),
        CurveKind::S | CurveKind::SBar if param <= 0 || param % 2 != 0 => {
            return Err(Error::Usage(format!("{}[{param}]: length must be positive and even", kind.as_str())))
        }
        _ => {}
    }
    let with = |g: TangleGrading| shift.map(|s| g + s);
    let mut c = Complex::new();
    if kind == CurveKind::R && param == 0 {
        let a = c.add_generator("a", PeculiarIdem::A, with(TangleGrading::ZERO));
        let cc = c.add_generator("c", PeculiarIdem::C, with(TangleGrading::ZERO));
        c.add_arrow(cc, a, Peculiar::P23);
        c.add_arrow(cc, a, Peculiar::Q14);
        return Ok(c);
    }
    let l = param.abs() / 2;
    let n = 2 * l;
    let chain_delta = if kind == CurveKind::R && param > 0 { h(1) } else { h(-1) };
    let (top_idem, bot_idem, bot_delta) = match (kind, param > 0) {
        (CurveKind::S, _) => (PeculiarIdem::A, PeculiarIdem::A, -1),
        (CurveKind::SBar, _) => (PeculiarIdem::C, PeculiarIdem::C, 0),
        (CurveKind::R, true) => (PeculiarIdem::C, PeculiarIdem::A, 0),
        (CurveKind::R, false) => (PeculiarIdem::A, PeculiarIdem::C, 0),
    };
    let top = c.add_generator("top", top_idem, with(top_grading(kind, param)));
    let bot = c.add_generator("bot", bot_idem, with(TangleGrading::ints(bot_delta, -l, -l)));
    let mut left = Vec::new();
    let mut right = Vec::new();
    for k in 0..n {
        let (li, ri) = if k % 2 == 0 {
            (PeculiarIdem::B, PeculiarIdem::D)
        } else {
            (PeculiarIdem::D, PeculiarIdem::B)
        };
        let lg = TangleGrading::new(chain_delta, (k - l).into(), (1 - l + k).into());
        let rg = TangleGrading::new(chain_delta, (1 - l + k).into(), (k - l).into());
        left.push(c.add_generator(format!("l{k}"), li, with(lg)));
        right.push(c.add_generator(format!("r{k}"), ri, with(rg)));
    }
    for k in 0..(n - 1) as usize {
        let (la, ra) = if k % 2 == 0 { (Peculiar::P12, Peculiar::Q21) } else { (Peculiar::Q21, Peculiar::P12) };
        c.add_arrow(left[k], left[k + 1], la);
        c.add_arrow(right[k], right[k + 1], ra);
    }
    let (lt, rt) = (*left.last().unwrap(), *right.last().unwrap());
    let (lb, rb) = (left[0], right[0]);
    // top end
    if top_idem == PeculiarIdem::A {
        c.add_arrow(lt, top, Peculiar::Q1);
        c.add_arrow(rt, top, Peculiar::P2);
    } else {
        c.add_arrow(top, lt, Peculiar::Q4);
        c.add_arrow(top, rt, Peculiar::P3);
    }
    // bottom end
    if bot_idem == PeculiarIdem::A {
        c.add_arrow(bot, lb, Peculiar::Q2);
        c.add_arrow(bot, rb, Peculiar::P1);
    } else {
        c.add_arrow(bot, lb, Peculiar::Q214);
        c.add_arrow(bot, rb, Peculiar::P123);
    }
    Ok(c)
}

/// Classifies a reduced connected component by matching it against regenerated templates.
pub fn recognize(piece: &Complex<Peculiar>) -> Result<TangleCurve> {
    let n = piece.len() as i64;
    let count = |i: PeculiarIdem| piece.generators().iter().filter(|g| g.idem == i).count();
    let (na, nc) = (count(PeculiarIdem::A), count(PeculiarIdem::C));
    let describe = || {
        let mut names: Vec<&str> = piece.generators().iter().map(|g| g.name.as_str()).collect();
        names.sort();
        names.truncate(6);
        format!("{} generators including {}", piece.len(), names.join(", "))
    };
    let candidates: Vec<(CurveKind, i64)> = if n == 2 {
        vec![(CurveKind::R, 0)]
    } else if n >= 6 && (n - 2) % 4 == 0 {
        let p = (n - 2) / 2;
        match (na, nc) {
            (2, 0) => vec![(CurveKind::S, p)],
            (0, 2) => vec![(CurveKind::SBar, p)],
            (1, 1) => vec![(CurveKind::R, p), (CurveKind::R, -p)],
            _ => vec![],
        }
    } else {
        vec![]
    };
    let graded = piece.is_graded();
    let bare = piece.without_gradings();
    for (kind, param) in candidates {
        let t = template(kind, param, None)?;
        let Some(map) = isomorphism(&t, &bare, false) else {
            continue;
        };
        if !graded {
            return Ok(TangleCurve::new(kind, param, None));
        }
        let top = t.index_of(if param == 0 { "a" } else { "top" }).expect("templates name their top");
        let g = piece.generator(map[top]).grading.ok_or_else(|| {
            Error::Unrecognized(format!("{}: partly graded component", describe()))
        })?;
        let shift = g - top_grading(kind, param);
        let shifted = template(kind, param, Some(shift))?;
        if isomorphism(&shifted, piece, true).is_some() {
            return Ok(TangleCurve::new(kind, param, Some(shift)));
        }
        return Err(Error::Unrecognized(format!(
            "{}: matches {}[{param}] ungraded but no single shift fits",
            describe(),
            kind.as_str()
        )));
    }
    Err(Error::Unrecognized(describe()))
}

/// d[2τ] ↦ r[4τ]; u[ℓ] at (r, s) ↦ s[2ℓ] at (r+s; 2s, 2s); v[ℓ] at (r, s) ↦ sbar[2ℓ] at
/// (r−s; 2s, 2s).
pub fn fast_double(dec: &SegmentDecomposition) -> Result<Multicurve> {
    dec.validate()?;
    let curves = dec
        .segments()
        .iter()
        .map(|s| {
            let shift = |sign: i64| {
                s.shift.map(|g| {
                    let a = g.alex.double();
                    let delta = if sign > 0 { g.delta + g.alex } else { g.delta - g.alex };
                    TangleGrading::new(delta, a, a)
                })
            };
            match s.kind {
                SegmentKind::D => TangleCurve::r(2 * s.param, dec.graded),
                SegmentKind::U => TangleCurve::new(CurveKind::S, 2 * s.param, shift(1)),
                SegmentKind::V => TangleCurve::new(CurveKind::SBar, 2 * s.param, shift(-1)),
            }
        })
        .collect();
    let m = Multicurve::new(curves, dec.graded);
    m.validate()?;
    Ok(m)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Equal(Multicurve),
    Diff { fast: Multicurve, oracle: Multicurve, only_fast: Vec<TangleCurve>, only_oracle: Vec<TangleCurve> },
}

impl Verdict {
    pub fn is_equal(&self) -> bool {
        matches!(self, Verdict::Equal(_))
    }

    pub fn render(&self) -> String {
        match self {
            Verdict::Equal(_) => "equal\n".to_string(),
            Verdict::Diff { only_fast, only_oracle, .. } => {
                let mut s = String::from("diff\n");
                for c in only_fast {
                    s.push_str(&format!("- {c}\n"));
                }
                for c in only_oracle {
                    s.push_str(&format!("+ {c}\n"));
                }
                s
            }
        }
    }
}

/// Multiset difference `a − b` of sorted lists.
fn minus(a: &[TangleCurve], b: &[TangleCurve]) -> Vec<TangleCurve> {
    let mut left: BTreeMap<&TangleCurve, i64> = BTreeMap::new();
    for c in b {
        *left.entry(c).or_default() += 1;
    }
    a.iter()
        .filter(|c| match left.get_mut(c) {
            Some(n) if *n > 0 => {
                *n -= 1;
                false
            }
            _ => true,
        })
        .copied()
        .collect()
}

pub fn compare(fast: Multicurve, oracle: Multicurve) -> Verdict {
    if fast == oracle {
        Verdict::Equal(fast)
    } else {
        let only_fast = minus(fast.components(), oracle.components());
        let only_oracle = minus(oracle.components(), fast.components());
        Verdict::Diff { fast, oracle, only_fast, only_oracle }
    }
}

/// Compares the direct correspondence with the pairing route on a cfd-tier input.
pub fn verify_main_theorem(input: &KnotInput) -> Result<Verdict> {
    match &input.payload {
        Payload::Cfd(c) => verify_cfd(c),
        _ => Err(Error::Precondition(format!(
            "verification needs a cfd-tier input, got {}",
            input.tier().as_str()
        ))),
    }
}
