//! The doubling bimodule 𝒴 and the box tensor product with a knot complement complex.

use std::collections::VecDeque;
use std::fmt;

use crate::algebra::{Algebra, KnotGrading, Peculiar, PeculiarIdem, TangleGrading, Torus, TorusIdem};
use crate::complex::Complex;
use crate::curves::{recognize, Multicurve};
use crate::error::{Error, Result, StageExt};
use crate::half::Half;
use crate::ingest::{KnotInput, Payload};
use crate::par;

/// Generators of 𝒴. Lower-case letters sit over ι_•, upper-case over ι_○; `P` marks a prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum YGen {
    C,
    A,
    B,
    Bp,
    BigB,
    BigD,
    BigBp,
    BigDp,
}

pub const Y_GENS: [YGen; 8] =
    [YGen::C, YGen::A, YGen::B, YGen::Bp, YGen::BigB, YGen::BigD, YGen::BigBp, YGen::BigDp];

impl YGen {
    pub fn name(self) -> &'static str {
        match self {
            YGen::C => "c",
            YGen::A => "a",
            YGen::B => "b",
            YGen::Bp => "b'",
            YGen::BigB => "B",
            YGen::BigD => "D",
            YGen::BigBp => "B'",
            YGen::BigDp => "D'",
        }
    }

    pub fn left(self) -> TorusIdem {
        match self {
            YGen::C | YGen::A | YGen::B | YGen::Bp => TorusIdem::Dot,
            _ => TorusIdem::Circ,
        }
    }

    pub fn right(self) -> PeculiarIdem {
        match self {
            YGen::A => PeculiarIdem::A,
            YGen::B | YGen::Bp | YGen::BigB | YGen::BigBp => PeculiarIdem::B,
            YGen::C => PeculiarIdem::C,
            YGen::BigD | YGen::BigDp => PeculiarIdem::D,
        }
    }
}

impl fmt::Display for YGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One action of 𝒴: with `input` (or none) arriving at `source`, emit `output ⊗ target`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Action {
    pub source: YGen,
    pub input: Option<Torus>,
    pub output: Peculiar,
    pub target: YGen,
}

const fn act(source: YGen, input: Option<Torus>, output: Peculiar, target: YGen) -> Action {
    Action { source, input, output, target }
}

use Peculiar as P;
use Torus as T;
use YGen::*;

/// The 19 actions; an output of 1 is written as the idempotent of the right-hand side.
pub const ACTIONS: [Action; 19] = [
    act(C, Some(T::S1), P::P3, BigB),
    act(B, Some(T::S1), P::IB, BigBp),
    act(C, None, P::Q214, B),
    act(A, None, P::Q2, Bp),
    act(BigD, None, P::Q21, BigB),
    act(BigDp, None, P::Q21, BigBp),
    act(A, Some(T::S3), P::P1, BigD),
    act(Bp, Some(T::S3), P::P12, BigDp),
    act(BigB, Some(T::S23), P::P12, BigD),
    act(BigBp, Some(T::S23), P::P12, BigDp),
    act(BigB, Some(T::S2), P::P2, A),
    act(BigBp, Some(T::S2), P::IB, Bp),
    act(C, Some(T::S12), P::P23, A),
    act(C, Some(T::S12), P::Q14, A),
    act(B, Some(T::S12), P::IB, Bp),
    act(C, Some(T::S123), P::P123, BigD),
    act(B, Some(T::S123), P::P12, BigDp),
    act(C, Some(T::S1), P::Q4, BigDp),
    act(BigDp, Some(T::S2), P::Q1, A),
];

/// Idempotent compatibility of every action on both sides.
pub fn check_bimodule() -> Result<()> {
    for a in &ACTIONS {
        let left_ok = match a.input {
            None => a.source.left() == a.target.left(),
            Some(i) => !i.is_idempotent() && i.source() == a.source.left() && i.target() == a.target.left(),
        };
        let right_ok = a.output.source() == a.source.right() && a.output.target() == a.target.right();
        if !left_ok || !right_ok {
            return Err(Error::Consistency(format!(
                "bimodule action ({}, {}, {}, {}) is not idempotent-compatible",
                a.source,
                a.input.map_or("-", |i| i.name()),
                a.output.name(),
                a.target
            )));
        }
    }
    Ok(())
}

/// The paired complex with, per generator, the cfd generator and bimodule generator it came
/// from.
#[derive(Debug, Clone)]
pub struct BoxProduct {
    pub complex: Complex<Peculiar>,
    pub origin: Vec<(usize, YGen)>,
    pub cfd: Complex<Torus>,
}

/// Replaces every curve carrying an n-dimensional local system by n parallel copies.
pub fn expand_local_systems(cfd: &Complex<Torus>) -> Complex<Torus> {
    if !cfd.has_local_systems() {
        return cfd.clone();
    }
    let mut out = Complex::new();
    for part in cfd.component_indices() {
        let piece = cfd.induced(&part);
        let dim = piece.arrows().map(|(s, t, _)| piece.dim(s, t)).max().unwrap_or(1);
        for copy in 0..dim {
            let suffix = if copy == 0 { String::new() } else { format!("#{}", copy + 1) };
            let base = out.len();
            for g in piece.generators() {
                out.add_generator(format!("{}{suffix}", g.name), g.idem, g.grading);
            }
            for (s, t, e) in piece.arrows() {
                out.add_label(base + s, base + t, e);
            }
        }
    }
    out
}

pub fn box_tensor(cfd: &Complex<Torus>) -> Result<BoxProduct> {
    check_bimodule()?;
    cfd.validate().into_result()?;
    for (s, t, e) in cfd.arrows() {
        if e.terms().any(|b| b.is_idempotent()) {
            return Err(Error::Precondition(format!(
                "arrow {} -> {} is labeled by an idempotent; reduce the complex first",
                cfd.name(s),
                cfd.name(t)
            )));
        }
    }
    let cfd = expand_local_systems(cfd);
    let mut out = Complex::new();
    let mut origin = Vec::new();
    let mut index = vec![[usize::MAX; 8]; cfd.len()];
    for (x, g) in cfd.generators().iter().enumerate() {
        for (k, &y) in Y_GENS.iter().enumerate() {
            if y.left() == g.idem {
                index[x][k] = out.add_generator(format!("{}⊗{}", g.name, y.name()), y.right(), None);
                origin.push((x, y));
            }
        }
    }
    let at = |x: usize, y: YGen| index[x][y as usize];
    for (x, g) in cfd.generators().iter().enumerate() {
        for a in ACTIONS.iter().filter(|a| a.input.is_none() && a.source.left() == g.idem) {
            out.add_arrow(at(x, a.source), at(x, a.target), a.output);
        }
    }
    for (x, x2, label) in cfd.arrows() {
        for alpha in label.terms() {
            for a in ACTIONS.iter().filter(|a| a.input == Some(alpha)) {
                out.add_arrow(at(x, a.source), at(x2, a.target), a.output);
            }
        }
    }
    out.validate()
        .into_result()
        .map_err(|e| Error::Consistency(format!("box tensor product violates d^2 = 0 or idempotents: {e}")))?;
    Ok(BoxProduct { complex: out, origin, cfd })
}

/// Seeds (x, a) and (x, c) from the bullet grading of x and propagates along arrows.
pub fn seed_and_propagate_gradings(p: &BoxProduct) -> Result<Complex<Peculiar>> {
    let c = &p.complex;
    let mut gr: Vec<Option<TangleGrading>> = vec![None; c.len()];
    let mut queue = VecDeque::new();
    for (i, &(x, y)) in p.origin.iter().enumerate() {
        if !matches!(y, YGen::A | YGen::C) {
            continue;
        }
        let g = p.cfd.generator(x);
        let KnotGrading { delta: m, alex: n } = g.grading.ok_or_else(|| {
            Error::Precondition(format!("cfd generator {} has no grading to seed from", g.name))
        })?;
        let a = n.double();
        let delta = if y == YGen::A { m + n } else { m - n };
        gr[i] = Some(TangleGrading::new(delta, a, a));
        queue.push_back(i);
    }
    let conflict = |i: usize, have: TangleGrading, want: TangleGrading| {
        Error::PropagationConflict(format!(
            "generator {} receives gradings ({have}) and ({want})",
            c.name(i)
        ))
    };
    while let Some(i) = queue.pop_front() {
        let gi = gr[i].expect("queued generators are graded");
        // i → t with label ξ: A(t) = A(i) − A(ξ), δ(t) = δ(i) + 1 − δ(ξ)
        let forward = c.outgoing(i).flat_map(|(t, e)| e.terms().map(move |b| (t, b, true)).collect::<Vec<_>>());
        let backward = c.incoming(i).flat_map(|(s, e)| e.terms().map(move |b| (s, b, false)).collect::<Vec<_>>());
        for (j, b, fwd) in forward.chain(backward) {
            let lg = b.grading();
            let one = TangleGrading::new(Half::ONE, Half::ZERO, Half::ZERO);
            let want = if fwd { gi + one - lg } else { gi - one + lg };
            match gr[j] {
                None => {
                    gr[j] = Some(want);
                    queue.push_back(j);
                }
                Some(have) if have != want => return Err(conflict(j, have, want)),
                Some(_) => {}
            }
        }
    }
    let mut out = c.clone();
    for (i, g) in gr.into_iter().enumerate() {
        match g {
            Some(g) => out.set_grading(i, Some(g)),
            None => return Err(Error::DisconnectedSeed(c.name(i).to_string())),
        }
    }
    Ok(out)
}

/// Pairing, grading, reduction and recognition, with errors tagged by stage.
pub fn double_cfd_via_oracle(cfd: &Complex<Torus>) -> Result<Multicurve> {
    let graded = cfd.is_graded();
    let product = box_tensor(cfd).stage("box tensor")?;
    let paired = if graded {
        seed_and_propagate_gradings(&product).stage("grading propagation")?
    } else {
        product.complex
    };
    let reduced = paired.cancel_identity_arrows().stage("cancellation")?;
    let parts = reduced.connected_components();
    let curves = par::map(&parts, recognize)
        .into_iter()
        .collect::<Result<Vec<_>>>()
        .stage("recognition")?;
    Ok(Multicurve::new(curves, graded))
}

pub fn double_via_oracle(input: &KnotInput) -> Result<Multicurve> {
    match &input.payload {
        Payload::Cfd(c) => double_cfd_via_oracle(c),
        _ => Err(Error::Precondition(format!(
            "the pairing route needs a cfd-tier input, got {}",
            input.tier().as_str()
        ))),
    }
}

/// Complement complexes of the rational test tangles, for i ∈ {0, 1, −2}.
pub fn test_complex(i: i64) -> Result<Complex<Torus>> {
    let mut c = Complex::new();
    match i {
        0 => {
            let x = c.add_generator("x", TorusIdem::Dot, None);
            c.add_arrow(x, x, Torus::S12);
        }
        1 => {
            let x = c.add_generator("x", TorusIdem::Dot, None);
            let y = c.add_generator("y", TorusIdem::Circ, None);
            c.add_arrow(x, y, Torus::S123);
            c.add_arrow(y, x, Torus::S2);
        }
        -2 => {
            let x = c.add_generator("x", TorusIdem::Dot, None);
            let y1 = c.add_generator("y1", TorusIdem::Circ, None);
            let y2 = c.add_generator("y2", TorusIdem::Circ, None);
            c.add_arrow(x, y1, Torus::S1);
            c.add_arrow(x, y2, Torus::S3);
            c.add_arrow(y2, y1, Torus::S23);
        }
        _ => return Err(Error::Usage(format!("no test complex for i = {i}; expected 0, 1 or -2"))),
    }
    Ok(c)
}

/// Slope of the rational curve the test pairing for `i` should produce.
pub fn test_pairing_slope(i: i64) -> i64 {
    -2 * i
}

/// Debug dump of a box product in the cfd document layout.
pub fn dump(p: &BoxProduct, name: &str) -> String {
    crate::ingest::render_complex(name, &p.complex, |g| {
        serde_json::json!({ "delta": g.delta.to_string(), "a1": g.a1.to_string(), "a2": g.a2.to_string() })
    })
}
