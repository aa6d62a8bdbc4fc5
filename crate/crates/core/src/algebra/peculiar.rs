use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::LazyLock;

use serde::{Deserialize, Serialize};

use super::{Algebra, AlgebraId, PathSpec, PathTable};
use crate::half::Half;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PeculiarIdem {
    A,
    B,
    C,
    D,
}

/// Basis of the peculiar algebra: four idempotents and twelve nonzero paths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[repr(u8)]
pub enum Peculiar {
    IA,
    IB,
    IC,
    ID,
    P1,
    P2,
    P3,
    Q1,
    Q2,
    Q4,
    P12,
    P23,
    Q21,
    Q14,
    P123,
    Q214,
}

const ALL: [Peculiar; 16] = [
    Peculiar::IA,
    Peculiar::IB,
    Peculiar::IC,
    Peculiar::ID,
    Peculiar::P1,
    Peculiar::P2,
    Peculiar::P3,
    Peculiar::Q1,
    Peculiar::Q2,
    Peculiar::Q4,
    Peculiar::P12,
    Peculiar::P23,
    Peculiar::Q21,
    Peculiar::Q14,
    Peculiar::P123,
    Peculiar::Q214,
];

const NAMES: [&str; 16] = [
    "i_a", "i_b", "i_c", "i_d", "p1", "p2", "p3", "q1", "q2", "q4", "p12", "p23", "q21", "q14",
    "p123", "q214",
];

const IDEMS: [PeculiarIdem; 4] = [PeculiarIdem::A, PeculiarIdem::B, PeculiarIdem::C, PeculiarIdem::D];

const A: usize = 0;
const B: usize = 1;
const C: usize = 2;
const D: usize = 3;

// Arrow codes.
const P1: u8 = 1;
const P2: u8 = 2;
const P3: u8 = 3;
const Q1: u8 = 4;
const Q2: u8 = 5;
const Q4: u8 = 6;

const SPECS: [PathSpec; 16] = [
    PathSpec { src: A, tgt: A, word: &[] },
    PathSpec { src: B, tgt: B, word: &[] },
    PathSpec { src: C, tgt: C, word: &[] },
    PathSpec { src: D, tgt: D, word: &[] },
    PathSpec { src: A, tgt: D, word: &[P1] },
    PathSpec { src: B, tgt: A, word: &[P2] },
    PathSpec { src: C, tgt: B, word: &[P3] },
    PathSpec { src: D, tgt: A, word: &[Q1] },
    PathSpec { src: A, tgt: B, word: &[Q2] },
    PathSpec { src: C, tgt: D, word: &[Q4] },
    PathSpec { src: B, tgt: D, word: &[P2, P1] },
    PathSpec { src: C, tgt: A, word: &[P3, P2] },
    PathSpec { src: D, tgt: B, word: &[Q1, Q2] },
    PathSpec { src: C, tgt: A, word: &[Q4, Q1] },
    PathSpec { src: C, tgt: D, word: &[P3, P2, P1] },
    PathSpec { src: C, tgt: B, word: &[Q4, Q1, Q2] },
];

// p_i q_i = 0 = q_i p_i for i = 1, 2.
const FORBIDDEN: [(u8, u8); 4] = [(Q1, P1), (P1, Q1), (Q2, P2), (P2, Q2)];

static TABLE: LazyLock<PathTable> = LazyLock::new(|| PathTable::build(&SPECS, &FORBIDDEN));

fn arrow_grading(a: u8) -> TangleGrading {
    let (a1, a2) = match a {
        P1 | Q1 => (-1, 0),
        Q4 => (1, 0),
        P2 | Q2 => (0, -1),
        P3 => (0, 1),
        _ => unreachable!("unknown arrow code {a}"),
    };
    TangleGrading::new(Half::HALF, a1.into(), a2.into())
}

impl Peculiar {
    /// Additive (δ; A₁, A₂) grading; idempotents are neutral.
    pub fn grading(self) -> TangleGrading {
        SPECS[self as usize]
            .word
            .iter()
            .fold(TangleGrading::ZERO, |g, &a| g + arrow_grading(a))
    }
}

impl Algebra for Peculiar {
    type Idem = PeculiarIdem;
    type Grading = TangleGrading;

    const ID: AlgebraId = AlgebraId::Peculiar;

    fn basis() -> &'static [Self] {
        &ALL
    }

    fn idems() -> &'static [PeculiarIdem] {
        &IDEMS
    }

    fn name(self) -> &'static str {
        NAMES[self as usize]
    }

    fn from_name(s: &str) -> Option<Self> {
        NAMES.iter().position(|n| *n == s).map(|i| ALL[i])
    }

    fn idem_name(i: PeculiarIdem) -> &'static str {
        match i {
            PeculiarIdem::A => "a",
            PeculiarIdem::B => "b",
            PeculiarIdem::C => "c",
            PeculiarIdem::D => "d",
        }
    }

    fn idem_from_name(s: &str) -> Option<PeculiarIdem> {
        match s {
            "a" => Some(PeculiarIdem::A),
            "b" => Some(PeculiarIdem::B),
            "c" => Some(PeculiarIdem::C),
            "d" => Some(PeculiarIdem::D),
            _ => None,
        }
    }

    fn source(self) -> PeculiarIdem {
        IDEMS[SPECS[self as usize].src]
    }

    fn target(self) -> PeculiarIdem {
        IDEMS[SPECS[self as usize].tgt]
    }

    fn idempotent(i: PeculiarIdem) -> Self {
        ALL[i as usize]
    }

    fn as_idempotent(self) -> Option<PeculiarIdem> {
        let k = self as usize;
        (k < 4).then(|| IDEMS[k])
    }

    fn mul(self, rhs: Self) -> Option<Self> {
        TABLE.mul(self as usize, rhs as usize).map(|k| ALL[k])
    }

    fn graded_idem(_: PeculiarIdem) -> bool {
        true
    }

    fn arrow_consistent(src: &TangleGrading, label: Self, tgt: &TangleGrading) -> Option<bool> {
        let g = label.grading();
        Some(
            src.a1 == g.a1 + tgt.a1
                && src.a2 == g.a2 + tgt.a2
                && src.delta + Half::ONE == g.delta + tgt.delta,
        )
    }
}

impl fmt::Display for Peculiar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// (δ; A₁, A₂) grading on the tangle side.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TangleGrading {
    pub delta: Half,
    pub a1: Half,
    pub a2: Half,
}

impl TangleGrading {
    pub const ZERO: TangleGrading = TangleGrading { delta: Half::ZERO, a1: Half::ZERO, a2: Half::ZERO };

    pub const fn new(delta: Half, a1: Half, a2: Half) -> Self {
        TangleGrading { delta, a1, a2 }
    }

    pub fn ints(delta: i64, a1: i64, a2: i64) -> Self {
        TangleGrading::new(delta.into(), a1.into(), a2.into())
    }
}

impl Add for TangleGrading {
    type Output = TangleGrading;
    fn add(self, r: TangleGrading) -> TangleGrading {
        TangleGrading::new(self.delta + r.delta, self.a1 + r.a1, self.a2 + r.a2)
    }
}

impl Sub for TangleGrading {
    type Output = TangleGrading;
    fn sub(self, r: TangleGrading) -> TangleGrading {
        TangleGrading::new(self.delta - r.delta, self.a1 - r.a1, self.a2 - r.a2)
    }
}

impl Neg for TangleGrading {
    type Output = TangleGrading;
    fn neg(self) -> TangleGrading {
        TangleGrading::new(-self.delta, -self.a1, -self.a2)
    }
}

impl fmt::Display for TangleGrading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "d={} a1={} a2={}", self.delta, self.a1, self.a2)
    }
}
