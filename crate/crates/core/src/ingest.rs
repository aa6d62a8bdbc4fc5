//! JSON knot documents in three tiers, and the builtin example knots.

use serde::de::{self, Deserializer};
use serde::{Deserialize, Serialize};

use crate::algebra::{Algebra, KnotGrading, Torus, TorusIdem};
use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::half::Half;
use crate::segments::{CurveSegment, SegmentDecomposition, SegmentKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tier {
    Cfd,
    Segments,
    HfkMinus,
}

impl Tier {
    pub fn as_str(self) -> &'static str {
        match self {
            Tier::Cfd => "cfd",
            Tier::Segments => "segments",
            Tier::HfkMinus => "hfk_minus",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HfkMinusData {
    pub tau: i64,
    pub torsion: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Payload {
    Cfd(Complex<Torus>),
    Segments(SegmentDecomposition),
    HfkMinus(HfkMinusData),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnotInput {
    pub name: String,
    pub payload: Payload,
}

impl KnotInput {
    pub fn tier(&self) -> Tier {
        match self.payload {
            Payload::Cfd(_) => Tier::Cfd,
            Payload::Segments(_) => Tier::Segments,
            Payload::HfkMinus(_) => Tier::HfkMinus,
        }
    }
}

// Wire format. Field presence per tier is checked after deserialization so that token errors
// keep their source position.

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Doc {
    name: String,
    tier: Tier,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    generators: Option<Vec<GenDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    arrows: Option<Vec<ArrowDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    segments: Option<Vec<SegDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tau: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    torsion: Option<Vec<i64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum IdemDoc {
    Dot,
    Circ,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GenDoc {
    id: String,
    idem: IdemDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    delta: Option<Half>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    alex: Option<Half>,
}

#[derive(Debug, Clone, Copy)]
struct Label(Torus);

impl Serialize for Label {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.0.name())
    }
}

impl<'de> Deserialize<'de> for Label {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Torus::from_name(&s).map(Label).ok_or_else(|| {
            de::Error::custom(format!(
                "unknown label {s:?}; expected one of i_dot, i_circ, s1, s2, s3, s12, s23, s123"
            ))
        })
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ArrowDoc {
    from: String,
    to: String,
    labels: Vec<Label>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dim: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    matrix: Option<Vec<Vec<u8>>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SegDoc {
    kind: SegmentKind,
    param: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    delta: Option<Half>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    alex: Option<Half>,
}

fn syntax(e: serde_json::Error) -> Error {
    Error::Syntax { line: e.line(), column: e.column(), message: e.to_string() }
}

fn missing(tier: Tier, key: &str) -> Error {
    Error::Semantic(format!("{} document lacks required key {key:?}", tier.as_str()))
}

fn stray(tier: Tier, key: &str) -> Error {
    Error::Semantic(format!("key {key:?} does not belong in a {} document", tier.as_str()))
}

/// Rank of a square matrix over F₂ equals its size.
fn invertible_f2(m: &[Vec<u8>]) -> bool {
    let n = m.len();
    let mut rows: Vec<Vec<bool>> = m.iter().map(|r| r.iter().map(|&x| x & 1 == 1).collect()).collect();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| rows[r][col]) else {
            return false;
        };
        rows.swap(col, p);
        for r in 0..n {
            if r != col && rows[r][col] {
                let pivot = rows[col].clone();
                for (x, y) in rows[r].iter_mut().zip(pivot) {
                    *x ^= y;
                }
            }
        }
    }
    true
}

fn build_cfd(gens: Vec<GenDoc>, arrows: Vec<ArrowDoc>) -> Result<Complex<Torus>> {
    let mut c = Complex::new();
    for g in gens {
        let idem = match g.idem {
            IdemDoc::Dot => TorusIdem::Dot,
            IdemDoc::Circ => TorusIdem::Circ,
        };
        let grading = match (g.delta, g.alex) {
            (Some(d), Some(a)) => Some(KnotGrading::new(d, a)),
            (None, None) => None,
            _ => {
                return Err(Error::Semantic(format!(
                    "generator {:?} needs both delta and alex or neither",
                    g.id
                )))
            }
        };
        c.try_add_generator(g.id, idem, grading)?;
    }
    for a in arrows {
        let lookup = |n: &str| {
            c.index_of(n)
                .ok_or_else(|| Error::Semantic(format!("arrow {} -> {}: unknown generator {n:?}", a.from, a.to)))
        };
        let (s, t) = (lookup(&a.from)?, lookup(&a.to)?);
        if a.labels.is_empty() {
            return Err(Error::Semantic(format!("arrow {} -> {} has no labels", a.from, a.to)));
        }
        for l in &a.labels {
            if l.0.source() != c.generator(s).idem || l.0.target() != c.generator(t).idem {
                return Err(Error::Semantic(format!(
                    "arrow {} -> {} labeled {} does not match the endpoint idempotents",
                    a.from,
                    a.to,
                    l.0.name()
                )));
            }
            c.add_arrow(s, t, l.0);
        }
        let dim = match (&a.matrix, a.dim) {
            (Some(m), d) => {
                let n = m.len();
                if n == 0 || m.iter().any(|r| r.len() != n) || d.is_some_and(|d| d as usize != n) {
                    return Err(Error::Semantic(format!(
                        "arrow {} -> {}: local-system matrix must be square of size dim",
                        a.from, a.to
                    )));
                }
                if !invertible_f2(m) {
                    return Err(Error::Semantic(format!(
                        "arrow {} -> {}: local-system matrix is not invertible over F2",
                        a.from, a.to
                    )));
                }
                n as u32
            }
            (None, Some(0)) => {
                return Err(Error::Semantic(format!("arrow {} -> {}: dim must be positive", a.from, a.to)))
            }
            (None, d) => d.unwrap_or(1),
        };
        if c.arrow(s, t).is_some() {
            c.set_dim(s, t, dim);
        }
    }
    c.validate().into_result().map_err(|e| Error::Semantic(e.to_string()))?;
    Ok(c)
}

fn build_segments(segs: Vec<SegDoc>) -> Result<SegmentDecomposition> {
    let graded_count = segs.iter().filter(|s| s.delta.is_some() || s.alex.is_some()).count();
    let graded = graded_count > 0;
    if graded && graded_count != segs.len() {
        return Err(Error::Semantic("either every segment carries delta/alex or none does".into()));
    }
    let mut out = Vec::with_capacity(segs.len());
    for s in segs {
        let shift = match (s.delta, s.alex) {
            (Some(d), Some(a)) => Some(KnotGrading::new(d, a)),
            (None, None) => None,
            _ => {
                return Err(Error::Semantic(format!(
                    "segment {}[{}] needs both delta and alex",
                    s.kind.as_str(),
                    s.param
                )))
            }
        };
        if s.kind == SegmentKind::D && shift.is_some_and(|g| g != KnotGrading::ZERO) {
            return Err(Error::Semantic(format!("d[{}] must have delta = alex = \"0\"", s.param)));
        }
        out.push(CurveSegment { kind: s.kind, param: s.param, shift });
    }
    let dec = SegmentDecomposition::new(out, graded);
    dec.validate().map_err(|e| Error::Semantic(e.to_string()))?;
    Ok(dec)
}

/// Parses a knot document.
pub fn parse(text: &str) -> Result<KnotInput> {
    let doc: Doc = serde_json::from_str(text).map_err(syntax)?;
    let tier = doc.tier;
    let payload = match tier {
        Tier::Cfd => {
            if doc.segments.is_some() {
                return Err(stray(tier, "segments"));
            }
            if doc.tau.is_some() || doc.torsion.is_some() {
                return Err(stray(tier, "tau"));
            }
            let g = doc.generators.ok_or_else(|| missing(tier, "generators"))?;
            let a = doc.arrows.ok_or_else(|| missing(tier, "arrows"))?;
            Payload::Cfd(build_cfd(g, a)?)
        }
        Tier::Segments => {
            if doc.generators.is_some() || doc.arrows.is_some() {
                return Err(stray(tier, "generators"));
            }
            if doc.tau.is_some() || doc.torsion.is_some() {
                return Err(stray(tier, "tau"));
            }
            Payload::Segments(build_segments(doc.segments.ok_or_else(|| missing(tier, "segments"))?)?)
        }
        Tier::HfkMinus => {
            if doc.generators.is_some() || doc.arrows.is_some() || doc.segments.is_some() {
                return Err(stray(tier, "generators"));
            }
            let tau = doc.tau.ok_or_else(|| missing(tier, "tau"))?;
            let torsion = doc.torsion.ok_or_else(|| missing(tier, "torsion"))?;
            if let Some(l) = torsion.iter().find(|&&l| l <= 0) {
                return Err(Error::Semantic(format!("torsion order {l} is not positive")));
            }
            Payload::HfkMinus(HfkMinusData { tau, torsion })
        }
    };
    Ok(KnotInput { name: doc.name, payload })
}

fn cfd_doc(c: &Complex<Torus>) -> (Vec<GenDoc>, Vec<ArrowDoc>) {
    let gens = c
        .generators()
        .iter()
        .map(|g| GenDoc {
            id: g.name.clone(),
            idem: match g.idem {
                TorusIdem::Dot => IdemDoc::Dot,
                TorusIdem::Circ => IdemDoc::Circ,
            },
            delta: g.grading.map(|x| x.delta),
            alex: g.grading.map(|x| x.alex),
        })
        .collect();
    let arrows = c
        .arrows()
        .map(|(s, t, e)| ArrowDoc {
            from: c.name(s).to_string(),
            to: c.name(t).to_string(),
            labels: e.terms().map(Label).collect(),
            dim: (c.dim(s, t) > 1).then(|| c.dim(s, t)),
            matrix: None,
        })
        .collect();
    (gens, arrows)
}

/// Renders a document that parses back to an equal value.
pub fn render(input: &KnotInput) -> String {
    let mut doc = Doc {
        name: input.name.clone(),
        tier: input.tier(),
        generators: None,
        arrows: None,
        segments: None,
        tau: None,
        torsion: None,
    };
    match &input.payload {
        Payload::Cfd(c) => {
            let (g, a) = cfd_doc(c);
            doc.generators = Some(g);
            doc.arrows = Some(a);
        }
        Payload::Segments(dec) => {
            doc.segments = Some(
                dec.segments()
                    .iter()
                    .map(|s| SegDoc {
                        kind: s.kind,
                        param: s.param,
                        delta: s.shift.map(|g| g.delta),
                        alex: s.shift.map(|g| g.alex),
                    })
                    .collect(),
            );
        }
        Payload::HfkMinus(h) => {
            doc.tau = Some(h.tau);
            doc.torsion = Some(h.torsion.clone());
        }
    }
    serde_json::to_string_pretty(&doc).expect("documents serialize")
}

/// A cfd document for a complex over 𝒜, used for debug dumps of intermediate complexes.
pub fn render_complex<A: Algebra>(name: &str, c: &Complex<A>, grading: impl Fn(&A::Grading) -> serde_json::Value) -> String {
    let gens: Vec<serde_json::Value> = c
        .generators()
        .iter()
        .map(|g| {
            let mut v = serde_json::json!({ "id": g.name, "idem": A::idem_name(g.idem) });
            if let Some(gr) = &g.grading {
                if let (Some(obj), serde_json::Value::Object(extra)) = (v.as_object_mut(), grading(gr)) {
                    obj.extend(extra);
                }
            }
            v
        })
        .collect();
    let arrows: Vec<serde_json::Value> = c
        .arrows()
        .map(|(s, t, e)| {
            let labels: Vec<&str> = e.terms().map(|b| b.name()).collect();
            serde_json::json!({ "from": c.name(s), "to": c.name(t), "labels": labels })
        })
        .collect();
    let doc = serde_json::json!({
        "name": name,
        "algebra": A::ID.to_string(),
        "generators": gens,
        "arrows": arrows,
    });
    serde_json::to_string_pretty(&doc).expect("json values serialize")
}

fn kg(d2: i64, a2: i64) -> Option<KnotGrading> {
    Some(KnotGrading::from_twice(d2, a2))
}

fn unknot() -> Complex<Torus> {
    let mut c = Complex::new();
    let x = c.add_generator("x", TorusIdem::Dot, Some(KnotGrading::ZERO));
    c.add_arrow(x, x, Torus::S12);
    c
}

fn trefoil() -> Complex<Torus> {
    let mut c = Complex::new();
    let x1 = c.add_generator("x1", TorusIdem::Dot, kg(2, 2));
    let x3 = c.add_generator("x3", TorusIdem::Dot, kg(2, 0));
    let x5 = c.add_generator("x5", TorusIdem::Dot, kg(2, -2));
    let cs: Vec<usize> = (1..=4).map(|i| c.add_generator(format!("c{i}"), TorusIdem::Circ, None)).collect();
    c.add_arrow(x1, cs[0], Torus::S1);
    c.add_arrow(cs[1], x1, Torus::S2);
    c.add_arrow(x3, cs[1], Torus::S3);
    c.add_arrow(x3, cs[2], Torus::S1);
    c.add_arrow(cs[3], cs[0], Torus::S23);
    c.add_arrow(x5, cs[3], Torus::S3);
    c.add_arrow(x5, cs[2], Torus::S123);
    c
}

fn segs(d: i64, list: &[(SegmentKind, i64, i64, i64)]) -> SegmentDecomposition {
    let mut v = vec![CurveSegment::d(d, true)];
    for &(kind, l, d2, a2) in list {
        v.push(CurveSegment { kind, param: l, shift: kg(d2, a2) });
    }
    SegmentDecomposition::new(v, true)
}

pub const BUILTIN_KNOTS: [&str; 4] = ["unknot", "trefoil", "figure8", "torus_3_4"];

pub fn builtin_knot(name: &str) -> Result<KnotInput> {
    use SegmentKind::{U, V};
    let payload = match name {
        "unknot" => Payload::Cfd(unknot()),
        "trefoil" => Payload::Cfd(trefoil()),
        "figure8" => Payload::Segments(segs(0, &[(U, 1, 1, 1), (U, 1, 1, -1), (V, 1, 1, -1), (V, 1, 1, 1)])),
        "torus_3_4" => Payload::Segments(segs(6, &[(U, 1, 7, 5), (U, 2, 6, -2), (V, 1, 7, -5), (V, 2, 6, 2)])),
        _ => return Err(Error::UnknownKnot(name.to_string())),
    };
    Ok(KnotInput { name: name.to_string(), payload })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_are_valid() {
        for name in BUILTIN_KNOTS {
            let k = builtin_knot(name).unwrap();
            match &k.payload {
                Payload::Cfd(c) => assert!(c.validate().is_valid(), "{name}"),
                Payload::Segments(d) => d.validate().unwrap(),
                Payload::HfkMinus(_) => unreachable!(),
            }
        }
        assert!(matches!(builtin_knot("5_2"), Err(Error::UnknownKnot(_))));
    }

    #[test]
    fn round_trip_builtins() {
        for name in BUILTIN_KNOTS {
            let k = builtin_knot(name).unwrap();
            assert_eq!(parse(&render(&k)).unwrap(), k, "{name}");
        }
    }

    #[test]
    fn hfk_document() {
        let k = parse(r#"{"name":"t","tier":"hfk_minus","tau":1,"torsion":[1]}"#).unwrap();
        assert_eq!(k.payload, Payload::HfkMinus(HfkMinusData { tau: 1, torsion: vec![1] }));
        assert!(matches!(
            parse(r#"{"name":"t","tier":"hfk_minus","tau":1,"torsion":[0]}"#),
            Err(Error::Semantic(_))
        ));
    }

    #[test]
    fn segments_document() {
        let text = r#"{"name":"trefoil","tier":"segments","segments":[
            {"kind":"d","param":2,"delta":"0","alex":"0"},
            {"kind":"u","param":1,"delta":"3/2","alex":"1/2"},
            {"kind":"v","param":1,"delta":"3/2","alex":"-1/2"}]}"#;
        let k = parse(text).unwrap();
        let Payload::Segments(d) = k.payload else { panic!() };
        assert_eq!(d.render(), "d[2]\nu[1] d=3/2 a=1/2\nv[1] d=3/2 a=-1/2\n");
    }

    #[test]
    fn unknown_label_is_a_syntax_error_with_position() {
        let text = "{\"name\":\"k\",\"tier\":\"cfd\",\n\"generators\":[{\"id\":\"x\",\"idem\":\"dot\"}],\n\"arrows\":[{\"from\":\"x\",\"to\":\"x\",\"labels\":[\"s4\"]}]}";
        match parse(text) {
            Err(Error::Syntax { line, column, message }) => {
                assert_eq!(line, 3);
                assert!(column > 0);
                assert!(message.contains("s4"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn semantic_errors() {
        let bad_ref = r#"{"name":"k","tier":"cfd","generators":[{"id":"x","idem":"dot"}],
            "arrows":[{"from":"x","to":"y","labels":["s12"]}]}"#;
        assert!(matches!(parse(bad_ref), Err(Error::Semantic(m)) if m.contains("\"y\"")));
        let bad_square = r#"{"name":"k","tier":"cfd","generators":[{"id":"x","idem":"dot"},{"id":"y","idem":"circ"}],
            "arrows":[{"from":"x","to":"y","labels":["s1"]},{"from":"y","to":"x","labels":["s2"]}]}"#;
        assert!(matches!(parse(bad_square), Err(Error::Semantic(m)) if m.contains("d^2")));
        let shifted_d = r#"{"name":"k","tier":"segments","segments":[{"kind":"d","param":0,"delta":"1","alex":"0"}]}"#;
        assert!(matches!(parse(shifted_d), Err(Error::Semantic(_))));
        assert!(matches!(parse(r#"{"name":"k","tier":"cfd","arrows":[]}"#), Err(Error::Semantic(_))));
        assert!(matches!(parse("{"), Err(Error::Syntax { .. })));
        assert!(matches!(parse(r#"{"name":"k","tier":"knot"}"#), Err(Error::Syntax { .. })));
    }

    #[test]
    fn local_system_matrix() {
        let doc = |m: &str| {
            format!(
                r#"{{"name":"u","tier":"cfd","generators":[{{"id":"x","idem":"dot"}}],
                "arrows":[{{"from":"x","to":"x","labels":["s12"],"matrix":{m}}}]}}"#
            )
        };
        let k = parse(&doc("[[0,1],[1,1]]")).unwrap();
        let Payload::Cfd(c) = &k.payload else { panic!() };
        assert_eq!(c.dim(0, 0), 2);
        assert!(parse(&doc("[[1,1],[1,1]]")).is_err());
        assert!(parse(&doc("[[1,0]]")).is_err());
    }
}
