//! Cutting a loop-type complex over the torus algebra at its • generators and classifying the
//! pieces as u, v and d segments.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{KnotGrading, Torus, TorusIdem};
use crate::complex::{isomorphism, Complex};
use crate::error::{Error, Result};
use crate::half::Half;
use crate::ingest::{KnotInput, Payload};
use crate::par;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SegmentKind {
    D,
    U,
    V,
}

impl SegmentKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SegmentKind::D => "d",
            SegmentKind::U => "u",
            SegmentKind::V => "v",
        }
    }
}

/// One piece of the knot curve between two meridian crossings. `param` is the length for
/// u/v and the slope for d; `shift` is the δ^r t^s shift of the template, absent when
/// ungraded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CurveSegment {
    pub kind: SegmentKind,
    pub param: i64,
    pub shift: Option<KnotGrading>,
}

impl CurveSegment {
    pub fn u(l: i64, shift: Option<KnotGrading>) -> Self {
        CurveSegment { kind: SegmentKind::U, param: l, shift }
    }

    pub fn v(l: i64, shift: Option<KnotGrading>) -> Self {
        CurveSegment { kind: SegmentKind::V, param: l, shift }
    }

    pub fn d(k: i64, graded: bool) -> Self {
        CurveSegment { kind: SegmentKind::D, param: k, shift: graded.then_some(KnotGrading::ZERO) }
    }

    /// Number of ○ generators in the piece.
    pub fn circles(&self) -> usize {
        self.param.unsigned_abs() as usize
    }
}

impl fmt::Display for CurveSegment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.kind.as_str(), self.param)?;
        match (self.kind, self.shift) {
            (SegmentKind::D, _) | (_, None) => Ok(()),
            (_, Some(g)) => write!(f, " d={} a={}", g.delta, g.alex),
        }
    }
}

/// The multiset of curve segments of a knot, kept in canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentDecomposition {
    segments: Vec<CurveSegment>,
    pub graded: bool,
}

impl SegmentDecomposition {
    pub fn new(mut segments: Vec<CurveSegment>, graded: bool) -> Self {
        segments.sort();
        SegmentDecomposition { segments, graded }
    }

    pub fn segments(&self) -> &[CurveSegment] {
        &self.segments
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn d_segment(&self) -> Option<&CurveSegment> {
        self.segments.iter().find(|s| s.kind == SegmentKind::D)
    }

    /// Lengths of the u segments, one per U-torsion summand.
    pub fn torsion_orders(&self) -> Vec<i64> {
        self.segments.iter().filter(|s| s.kind == SegmentKind::U).map(|s| s.param).collect()
    }

    pub fn without_gradings(&self) -> SegmentDecomposition {
        let segs = self
            .segments
            .iter()
            .map(|s| CurveSegment { shift: None, ..*s })
            .collect();
        SegmentDecomposition::new(segs, false)
    }

    /// Checks the counting constraints: one d segment of even slope, positive u/v lengths,
    /// u and v paired by length, and, when graded, u at (r, a) paired with v at (r, −a).
    pub fn validate(&self) -> Result<()> {
        let ds: Vec<_> = self.segments.iter().filter(|s| s.kind == SegmentKind::D).collect();
        if ds.len() != 1 {
            return Err(Error::Structure(format!("expected exactly one d segment, found {}", ds.len())));
        }
        if ds[0].param % 2 != 0 {
            return Err(Error::Structure(format!("d segment slope {} is odd", ds[0].param)));
        }
        for s in &self.segments {
            if s.kind != SegmentKind::D && s.param <= 0 {
                return Err(Error::Structure(format!("segment {s} has non-positive length")));
            }
            if s.shift.is_some() != self.graded {
                return Err(Error::Structure(format!(
                    "segment {s} grading presence disagrees with the decomposition"
                )));
            }
            if s.kind == SegmentKind::D && s.shift.is_some_and(|g| g != KnotGrading::ZERO) {
                return Err(Error::Structure(format!("d segment carries shift {}", s.shift.unwrap())));
            }
        }
        let mut balance: BTreeMap<(i64, Option<KnotGrading>), i64> = BTreeMap::new();
        for s in &self.segments {
            match s.kind {
                SegmentKind::U => *balance.entry((s.param, s.shift)).or_default() += 1,
                SegmentKind::V => {
                    let mirrored = s.shift.map(|g| KnotGrading::new(g.delta, -g.alex));
                    *balance.entry((s.param, mirrored)).or_default() -= 1;
                }
                SegmentKind::D => {}
            }
        }
        if let Some(((l, g), n)) = balance.into_iter().find(|(_, n)| *n != 0) {
            let at = g.map(|g| format!(" at {g}")).unwrap_or_default();
            return Err(Error::Structure(format!(
                "u/v segments of length {l}{at} are unbalanced by {n}"
            )));
        }
        Ok(())
    }

    pub fn render(&self) -> String {
        self.segments.iter().map(|s| format!("{s}\n")).collect()
    }
}

/// τ as half the d-segment slope.
pub fn tau_of(dec: &SegmentDecomposition) -> Result<i64> {
    let d = dec.d_segment().ok_or_else(|| Error::Structure("no d segment".into()))?;
    Ok(d.param / 2)
}

fn h(twice: i64) -> Half {
    Half::from_twice(twice)
}

/// Grading of the anchor bullet of an unshifted template: the σ₃ source for u, the σ₁₂₃
/// source for v, the m-end for d.
pub fn anchor_grading(kind: SegmentKind, param: i64) -> KnotGrading {
    let l = param.abs();
    match kind {
        SegmentKind::U => KnotGrading::new(h(l - 2), h(-l)),
        SegmentKind::V => KnotGrading::new(h(-l), h(-l)),
        SegmentKind::D => KnotGrading::new(h(param), h(-param)),
    }
}

/// The path complex of a segment. Generators are `L`, `c1`…`cℓ`, `R`; for d segments `L` is
/// the end that emits σ₃, receives σ₂ or receives σ₁₂.
pub fn piece_template(kind: SegmentKind, param: i64, shift: Option<KnotGrading>) -> Result<Complex<Torus>> {
    if kind != SegmentKind::D && param <= 0 {
        return Err(Error::Usage(format!("{}-segments need a positive length", kind.as_str())));
    }
    let l = param.abs();
    let (gl, gr) = match kind {
        SegmentKind::U => (anchor_grading(kind, l), KnotGrading::new(h(-l), h(l))),
        SegmentKind::V => (anchor_grading(kind, l), KnotGrading::new(h(l - 2), h(l))),
        SegmentKind::D => (anchor_grading(kind, param), KnotGrading::new(h(param), h(param))),
    };
    let graded = |g: KnotGrading| shift.map(|s| g + s);
    let mut c = Complex::new();
    let left = c.add_generator("L", TorusIdem::Dot, graded(gl));
    let circles: Vec<usize> = (1..=l)
        .map(|i| c.add_generator(format!("c{i}"), TorusIdem::Circ, None))
        .collect();
    let right = c.add_generator("R", TorusIdem::Dot, graded(gr));
    for w in circles.windows(2) {
        c.add_arrow(w[0], w[1], Torus::S23);
    }
    let (first, last) = (circles.first().copied(), circles.last().copied());
    match (kind, param.signum()) {
        (SegmentKind::U, _) => {
            c.add_arrow(left, first.unwrap(), Torus::S3);
            c.add_arrow(last.unwrap(), right, Torus::S2);
        }
        (SegmentKind::V, _) => {
            c.add_arrow(left, first.unwrap(), Torus::S123);
            c.add_arrow(right, last.unwrap(), Torus::S1);
        }
        (SegmentKind::D, 1) => {
            c.add_arrow(left, first.unwrap(), Torus::S3);
            c.add_arrow(right, last.unwrap(), Torus::S1);
        }
        (SegmentKind::D, -1) => {
            c.add_arrow(right, first.unwrap(), Torus::S123);
            c.add_arrow(last.unwrap(), left, Torus::S2);
        }
        (SegmentKind::D, _) => c.add_arrow(right, left, Torus::S12),
    }
    Ok(c)
}

/// Number of incident basic arrow ends at every generator must be two.
pub fn check_loop_type(c: &Complex<Torus>) -> Result<()> {
    for i in 0..c.len() {
        let ends = c.arrow_ends(i);
        if ends != 2 {
            return Err(Error::NotLoopType { generator: c.name(i).to_string(), ends });
        }
    }
    Ok(())
}

/// Local-system dimension of each connected component, keyed by generator index.
fn component_dims(c: &Complex<Torus>) -> Vec<u32> {
    let mut dims = vec![1; c.len()];
    for part in c.component_indices() {
        let d = c
            .arrows()
            .filter(|(s, _, _)| part.binary_search(s).is_ok())
            .map(|(s, t, _)| c.dim(s, t))
            .max()
            .unwrap_or(1);
        for &i in &part {
            dims[i] = d;
        }
    }
    dims
}

/// Replaces every • generator by two copies holding one arrow end each and returns the
/// resulting pieces, repeated by the local-system dimension of their curve.
pub fn split_at_bullets(c: &Complex<Torus>) -> Result<Vec<Complex<Torus>>> {
    check_loop_type(c)?;
    let dims = component_dims(c);
    let mut s = Complex::<Torus>::new();
    // copies[i] = (first copy, second copy) for bullets, (i', i') for circles
    let mut copies = Vec::with_capacity(c.len());
    for g in c.generators() {
        if g.idem == TorusIdem::Dot {
            let p = s.add_generator(format!("{}+", g.name), g.idem, g.grading);
            let m = s.add_generator(format!("{}-", g.name), g.idem, g.grading);
            copies.push((p, m));
        } else {
            let k = s.add_generator(g.name.clone(), g.idem, g.grading);
            copies.push((k, k));
        }
    }
    let mut used = vec![0usize; c.len()];
    let end = |i: usize, used: &mut Vec<usize>| {
        let k = used[i];
        used[i] += 1;
        if k == 0 {
            copies[i].0
        } else {
            copies[i].1
        }
    };
    let arrows: Vec<(usize, usize, Torus)> = c
        .arrows()
        .flat_map(|(a, b, e)| e.terms().map(move |t| (a, b, t)).collect::<Vec<_>>())
        .collect();
    let mut piece_dim: BTreeMap<usize, u32> = BTreeMap::new();
    for (a, b, t) in arrows {
        let sa = end(a, &mut used);
        let sb = end(b, &mut used);
        s.add_arrow(sa, sb, t);
        piece_dim.insert(sa, dims[a]);
    }
    let mut pieces = Vec::new();
    for part in s.component_indices() {
        let d = part.iter().filter_map(|i| piece_dim.get(i)).copied().max().unwrap_or(1);
        let piece = s.induced(&part);
        for _ in 0..d {
            pieces.push(piece.clone());
        }
    }
    Ok(pieces)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum End {
    Emits(Torus),
    Receives(Torus),
}

fn end_of(c: &Complex<Torus>, i: usize) -> Option<End> {
    if let Some((_, e)) = c.outgoing(i).next() {
        return e.as_basic().map(End::Emits);
    }
    c.incoming(i).next().and_then(|(_, e)| e.as_basic()).map(End::Receives)
}

/// Classifies a path-shaped piece against the segment templates and reads off its shift.
pub fn classify_segment(piece: &Complex<Torus>) -> Result<CurveSegment> {
    let bullets: Vec<usize> = (0..piece.len())
        .filter(|&i| piece.generator(i).idem == TorusIdem::Dot)
        .collect();
    let circles = (piece.len() - bullets.len()) as i64;
    let describe = || {
        let names: Vec<&str> = (0..piece.len()).map(|i| piece.name(i)).collect();
        format!("piece {{{}}}", names.join(", "))
    };
    if bullets.len() != 2 {
        return Err(Error::UnmatchedSegment(format!(
            "{} has {} bullet ends, expected 2",
            describe(),
            bullets.len()
        )));
    }
    let (x, y) = (bullets[0], bullets[1]);
    let (ex, ey) = match (end_of(piece, x), end_of(piece, y)) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::UnmatchedSegment(format!("{} has a non-basic end", describe()))),
    };
    use End::*;
    use Torus::*;
    // (kind, param, anchor L) for each recognised boundary signature, either bullet order
    let sig = |a: End, b: End| -> Option<(SegmentKind, i64)> {
        match (a, b) {
            (Emits(S3), Receives(S2)) => Some((SegmentKind::U, circles)),
            (Emits(S123), Emits(S1)) => Some((SegmentKind::V, circles)),
            (Emits(S3), Emits(S1)) => Some((SegmentKind::D, circles)),
            (Receives(S2), Emits(S123)) => Some((SegmentKind::D, -circles)),
            (Receives(S12), Emits(S12)) if circles == 0 => Some((SegmentKind::D, 0)),
            _ => None,
        }
    };
    let (kind, param, anchor) = if let Some((k, p)) = sig(ex, ey) {
        (k, p, x)
    } else if let Some((k, p)) = sig(ey, ex) {
        (k, p, y)
    } else {
        return Err(Error::UnmatchedSegment(format!(
            "{} has boundary signature {ex:?}/{ey:?}",
            describe()
        )));
    };
    if kind != SegmentKind::D && param <= 0 {
        return Err(Error::UnmatchedSegment(format!("{} has no ○ generators", describe())));
    }
    let bare = piece_template(kind, param, None)?;
    if isomorphism(&bare, &piece.without_gradings(), false).is_none() {
        return Err(Error::UnmatchedSegment(format!("{} does not match the {} template", describe(), kind.as_str())));
    }
    let shift = match piece.generator(anchor).grading {
        None => {
            if piece.is_graded() {
                return Err(Error::GradingMismatch(format!("{} is only partly graded", describe())));
            }
            None
        }
        Some(g) => {
            let s = g - anchor_grading(kind, param);
            let t = piece_template(kind, param, Some(s))?;
            if isomorphism(&t, piece, true).is_none() {
                return Err(Error::GradingMismatch(format!(
                    "bullets of {} do not fit one shift of the {}[{param}] template",
                    describe(),
                    kind.as_str()
                )));
            }
            if kind == SegmentKind::D && s != KnotGrading::ZERO {
                return Err(Error::GradingMismatch(format!(
                    "d[{param}] segment is shifted by {s}; expected no shift"
                )));
            }
            Some(s)
        }
    };
    Ok(CurveSegment { kind, param, shift })
}

/// Curve segments of a cfd complex.
pub fn decompose_cfd(c: &Complex<Torus>) -> Result<SegmentDecomposition> {
    let pieces = split_at_bullets(c)?;
    let segs = par::map(&pieces, classify_segment).into_iter().collect::<Result<Vec<_>>>()?;
    let dec = SegmentDecomposition::new(segs, c.is_graded());
    dec.validate()?;
    Ok(dec)
}

/// Ungraded decomposition from τ and the U-torsion orders.
pub fn decompose_hfk(tau: i64, torsion: &[i64]) -> Result<SegmentDecomposition> {
    if let Some(&l) = torsion.iter().find(|&&l| l <= 0) {
        return Err(Error::Semantic(format!("torsion order {l} is not positive")));
    }
    let mut segs = vec![CurveSegment::d(2 * tau, false)];
    for &l in torsion {
        segs.push(CurveSegment::u(l, None));
        segs.push(CurveSegment::v(l, None));
    }
    Ok(SegmentDecomposition::new(segs, false))
}

pub fn decompose(input: &KnotInput) -> Result<SegmentDecomposition> {
    match &input.payload {
        Payload::Cfd(c) => decompose_cfd(c),
        Payload::Segments(dec) => {
            dec.validate()?;
            Ok(dec.clone())
        }
        Payload::HfkMinus(h) => decompose_hfk(h.tau, &h.torsion),
    }
}
