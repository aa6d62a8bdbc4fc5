//! Pairing dimensions between curve components and dimension formulas for (2, 2t+1) cables.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::curves::{fast_double, CurveKind};
use crate::error::{Error, Result};
use crate::segments::{tau_of, SegmentDecomposition, SegmentKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Theory {
    HF,
    Kh,
}

impl FromStr for Theory {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "hf" => Ok(Theory::HF),
            "kh" => Ok(Theory::Kh),
            _ => Err(Error::Usage(format!("unknown theory {s:?}; expected hf or kh"))),
        }
    }
}

/// A component named by kind and parameter, e.g. `r7`, `r[-2]`, `s2`, `sbar4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CurveDesc {
    pub kind: CurveKind,
    pub param: i64,
}

impl CurveDesc {
    pub fn new(kind: CurveKind, param: i64) -> Result<Self> {
        if kind != CurveKind::R && (param <= 0 || param % 2 != 0) {
            return Err(Error::Usage(format!(
                "{}{param}: special curve lengths must be even and positive",
                kind.as_str()
            )));
        }
        Ok(CurveDesc { kind, param })
    }
}

impl fmt::Display for CurveDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.kind.as_str(), self.param)
    }
}

impl FromStr for CurveDesc {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let (kind, rest) = if let Some(r) = t.strip_prefix("sbar") {
            (CurveKind::SBar, r)
        } else if let Some(r) = t.strip_prefix('s') {
            (CurveKind::S, r)
        } else if let Some(r) = t.strip_prefix('r') {
            (CurveKind::R, r)
        } else {
            return Err(Error::Usage(format!("bad curve {s:?}; expected r<k>, s<l> or sbar<l>")));
        };
        let num = rest.strip_prefix('[').and_then(|r| r.strip_suffix(']')).unwrap_or(rest);
        let param = num
            .parse()
            .map_err(|_| Error::Usage(format!("bad curve parameter in {s:?}")))?;
        CurveDesc::new(kind, param)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairingQuery {
    pub theory: Theory,
    pub left: CurveDesc,
    pub right: CurveDesc,
}

/// Dimension of the pairing of two components; the order of the two curves does not matter.
pub fn floer_dim(q: &PairingQuery) -> Result<u64> {
    let (a, b) = if q.left.kind == CurveKind::R { (q.left, q.right) } else { (q.right, q.left) };
    let unsupported = || Error::UnsupportedPairing(format!("({}, {}) in {:?}", q.left, q.right, q.theory));
    match (a.kind, b.kind) {
        (CurveKind::R, CurveKind::R) if a.param != b.param => Ok(2 * a.param.abs_diff(b.param)),
        (CurveKind::R, CurveKind::R) => Ok(match q.theory {
            Theory::HF => 2,
            Theory::Kh => 4,
        }),
        (CurveKind::R, CurveKind::S) => Ok(2 * b.param as u64),
        (CurveKind::R, CurveKind::SBar) if q.theory == Theory::HF => Ok(2 * b.param as u64),
        _ => Err(unsupported()),
    }
}

fn cable_offset(tau: i64, t: i64) -> i64 {
    (2 * t + 1 - 4 * tau).abs()
}

/// ½ Σ dim HF(r[2t+1], γ) over the components γ of the doubled multicurve.
pub fn cable_dim_by_pairing(dec: &SegmentDecomposition, t: i64) -> Result<i64> {
    let curves = fast_double(dec)?;
    let probe = CurveDesc::new(CurveKind::R, 2 * t + 1)?;
    let mut total = 0u64;
    for c in curves.components() {
        let q = PairingQuery { theory: Theory::HF, left: probe, right: CurveDesc::new(c.kind, c.param)? };
        total += floer_dim(&q)?;
    }
    if !total.is_multiple_of(2) {
        return Err(Error::Consistency(format!("pairing total {total} is odd")));
    }
    Ok((total / 2) as i64)
}

/// 2(d−1)ℓ̄ + |2t+1−4τ| with ℓ̄ the mean torsion order.
pub fn cable_dim_closed_form(dec: &SegmentDecomposition, t: i64) -> Result<i64> {
    let tau = tau_of(dec)?;
    let orders = dec.torsion_orders();
    let d = dec.len() as i64;
    let first = if orders.is_empty() {
        0
    } else {
        let num = 2 * (d - 1) * orders.iter().sum::<i64>();
        let n = orders.len() as i64;
        if num % n != 0 {
            return Err(Error::Consistency(format!("2(d-1) times the mean torsion order {num}/{n} is not integral")));
        }
        num / n
    };
    Ok(first + cable_offset(tau, t))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CableCounts {
    pub from_u: i64,
    pub from_v: i64,
    pub from_d: i64,
    pub total: i64,
}

/// Segment counts of the cable: 2ℓ pieces per u[ℓ] and v[ℓ]; 1 + 2⌊|2t+1−4τ|/2⌋ from d.
pub fn cable_segment_counts(dec: &SegmentDecomposition, t: i64) -> Result<CableCounts> {
    dec.validate()?;
    let tau = tau_of(dec)?;
    let sum = |k: SegmentKind| -> i64 { dec.segments().iter().filter(|s| s.kind == k).map(|s| 2 * s.param).sum() };
    let from_d = 1 + 2 * (cable_offset(tau, t) / 2);
    let counts = CableCounts {
        from_u: sum(SegmentKind::U),
        from_v: sum(SegmentKind::V),
        from_d,
        total: sum(SegmentKind::U) + sum(SegmentKind::V) + from_d,
    };
    let closed = cable_dim_closed_form(dec, t)?;
    if counts.total != closed {
        return Err(Error::Consistency(format!(
            "segment count {} differs from closed form {closed}",
            counts.total
        )));
    }
    Ok(counts)
}

/// dim HFK-hat of the (2, 2t+1) cable, computed three ways and required to agree.
pub fn cable_hfk_dim(dec: &SegmentDecomposition, t: i64) -> Result<i64> {
    let pairing = cable_dim_by_pairing(dec, t)?;
    let closed = cable_dim_closed_form(dec, t)?;
    let counted = cable_segment_counts(dec, t)?.total;
    if pairing != closed || closed != counted {
        return Err(Error::Consistency(format!(
            "cable dimension routes disagree: pairing {pairing}, closed form {closed}, segment count {counted}"
        )));
    }
    Ok(pairing)
}

/// (2d−1, 2(d−1)ℓ_max + |2t+1−4τ|).
pub fn cable_bounds(d: i64, l_max: i64, tau: i64, t: i64) -> Result<(i64, i64)> {
    if d < 1 {
        return Err(Error::Usage(format!("d must be at least 1, got {d}")));
    }
    Ok((2 * d - 1, 2 * (d - 1) * l_max + cable_offset(tau, t)))
}

/// Bounds for a decomposition, with ℓ_max the longest torsion order (1 if there is none).
pub fn cable_bounds_for(dec: &SegmentDecomposition, t: i64) -> Result<(i64, i64)> {
    let l_max = dec.torsion_orders().into_iter().max().unwrap_or(1);
    cable_bounds(dec.len() as i64, l_max, tau_of(dec)?, t)
}

/// 2d² − 2 + |2t+1−2ϑ₂| for d = dim of reduced Khovanov homology.
pub fn khovanov_cable_lower_bound(d: i64, theta2: i64, t: i64) -> Result<i64> {
    if d < 1 {
        return Err(Error::Usage(format!("d must be at least 1, got {d}")));
    }
    Ok(2 * d * d - 2 + (2 * t + 1 - 2 * theta2).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::builtin_knot;
    use crate::segments::decompose;

    fn q(theory: Theory, l: &str, r: &str) -> PairingQuery {
        PairingQuery { theory, left: l.parse().unwrap(), right: r.parse().unwrap() }
    }

    #[test]
    fn pairing_table() {
        assert_eq!(floer_dim(&q(Theory::HF, "r7", "s2")).unwrap(), 4);
        assert_eq!(floer_dim(&q(Theory::HF, "s2", "r7")).unwrap(), 4);
        assert_eq!(floer_dim(&q(Theory::Kh, "r7", "s2")).unwrap(), 4);
        assert_eq!(floer_dim(&q(Theory::HF, "r7", "sbar4")).unwrap(), 8);
        assert_eq!(floer_dim(&q(Theory::HF, "r7", "r4")).unwrap(), 6);
        assert_eq!(floer_dim(&q(Theory::HF, "r[-3]", "r[4]")).unwrap(), 14);
        assert_eq!(floer_dim(&q(Theory::Kh, "r3", "r3")).unwrap(), 4);
        assert_eq!(floer_dim(&q(Theory::HF, "r3", "r3")).unwrap(), 2);
        assert!(matches!(floer_dim(&q(Theory::Kh, "r1", "sbar2")), Err(Error::UnsupportedPairing(_))));
        assert!(matches!(floer_dim(&q(Theory::HF, "s2", "sbar2")), Err(Error::UnsupportedPairing(_))));
        assert!("s3".parse::<CurveDesc>().is_err());
        assert!("x2".parse::<CurveDesc>().is_err());
    }

    fn dec(name: &str) -> SegmentDecomposition {
        decompose(&builtin_knot(name).unwrap()).unwrap()
    }

    #[test]
    fn cable_examples() {
        assert_eq!(cable_hfk_dim(&dec("trefoil"), 3).unwrap(), 7);
        assert_eq!(cable_hfk_dim(&dec("unknot"), 0).unwrap(), 1);
        assert_eq!(cable_hfk_dim(&dec("torus_3_4"), 5).unwrap(), 13);
        let c = cable_segment_counts(&dec("trefoil"), 3).unwrap();
        assert_eq!(c, CableCounts { from_u: 2, from_v: 2, from_d: 3, total: 7 });
    }

    #[test]
    fn bounds() {
        assert_eq!(cable_bounds(3, 1, 1, 3).unwrap(), (5, 7));
        assert_eq!(cable_bounds(1, 1, 0, 0).unwrap(), (1, 1));
        assert_eq!(cable_bounds(5, 2, 3, 5).unwrap(), (9, 17));
        assert!(cable_bounds(0, 1, 0, 0).is_err());
    }

    #[test]
    fn khovanov_bound() {
        assert_eq!(khovanov_cable_lower_bound(3, 1, 1).unwrap(), 17);
        assert_eq!(khovanov_cable_lower_bound(1, 0, 0).unwrap(), 1);
        assert_eq!(khovanov_cable_lower_bound(5, 3, 0).unwrap(), 53);
    }
}
