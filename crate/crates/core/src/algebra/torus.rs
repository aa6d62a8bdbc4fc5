use std::fmt;
use std::ops::{Add, Sub};
use std::sync::LazyLock;

use serde::{Deserialize, Serialize};

use super::{Algebra, AlgebraId, PathSpec, PathTable};
use crate::half::Half;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TorusIdem {
    Dot,
    Circ,
}

/// Basis of the torus algebra: two idempotents and six nonzero paths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[repr(u8)]
pub enum Torus {
    IDot,
    ICirc,
    S1,
    S2,
    S3,
    S12,
    S23,
    S123,
}

const ALL: [Torus; 8] = [
    Torus::IDot,
    Torus::ICirc,
    Torus::S1,
    Torus::S2,
    Torus::S3,
    Torus::S12,
    Torus::S23,
    Torus::S123,
];

const NAMES: [&str; 8] = ["i_dot", "i_circ", "s1", "s2", "s3", "s12", "s23", "s123"];

const DOT: usize = 0;
const CIRC: usize = 1;

// σ₁: •→○, σ₂: ○→•, σ₃: •→○; words list arrows in the order they are traversed.
const SPECS: [PathSpec; 8] = [
    PathSpec { src: DOT, tgt: DOT, word: &[] },
    PathSpec { src: CIRC, tgt: CIRC, word: &[] },
    PathSpec { src: DOT, tgt: CIRC, word: &[1] },
    PathSpec { src: CIRC, tgt: DOT, word: &[2] },
    PathSpec { src: DOT, tgt: CIRC, word: &[3] },
    PathSpec { src: DOT, tgt: DOT, word: &[1, 2] },
    PathSpec { src: CIRC, tgt: CIRC, word: &[2, 3] },
    PathSpec { src: DOT, tgt: CIRC, word: &[1, 2, 3] },
];

// σ₁σ₂ = 0 (σ₂ then σ₁) and σ₂σ₃ = 0 (σ₃ then σ₂).
const FORBIDDEN: [(u8, u8); 2] = [(2, 1), (3, 2)];

static TABLE: LazyLock<PathTable> = LazyLock::new(|| PathTable::build(&SPECS, &FORBIDDEN));

fn idem_at(i: usize) -> TorusIdem {
    if i == DOT {
        TorusIdem::Dot
    } else {
        TorusIdem::Circ
    }
}

impl Algebra for Torus {
    type Idem = TorusIdem;
    type Grading = KnotGrading;

    const ID: AlgebraId = AlgebraId::Torus;

    fn basis() -> &'static [Self] {
        &ALL
    }

    fn idems() -> &'static [TorusIdem] {
        &[TorusIdem::Dot, TorusIdem::Circ]
    }

    fn name(self) -> &'static str {
        NAMES[self as usize]
    }

    fn from_name(s: &str) -> Option<Self> {
        NAMES.iter().position(|n| *n == s).map(|i| ALL[i])
    }

    fn idem_name(i: TorusIdem) -> &'static str {
        match i {
            TorusIdem::Dot => "dot",
            TorusIdem::Circ => "circ",
        }
    }

    fn idem_from_name(s: &str) -> Option<TorusIdem> {
        match s {
            "dot" => Some(TorusIdem::Dot),
            "circ" => Some(TorusIdem::Circ),
            _ => None,
        }
    }

    fn source(self) -> TorusIdem {
        idem_at(SPECS[self as usize].src)
    }

    fn target(self) -> TorusIdem {
        idem_at(SPECS[self as usize].tgt)
    }

    fn idempotent(i: TorusIdem) -> Self {
        match i {
            TorusIdem::Dot => Torus::IDot,
            TorusIdem::Circ => Torus::ICirc,
        }
    }

    fn as_idempotent(self) -> Option<TorusIdem> {
        match self {
            Torus::IDot => Some(TorusIdem::Dot),
            Torus::ICirc => Some(TorusIdem::Circ),
            _ => None,
        }
    }

    fn mul(self, rhs: Self) -> Option<Self> {
        TABLE.mul(self as usize, rhs as usize).map(|k| ALL[k])
    }

    fn graded_idem(i: TorusIdem) -> bool {
        i == TorusIdem::Dot
    }

    fn arrow_consistent(_: &KnotGrading, _: Self, _: &KnotGrading) -> Option<bool> {
        None
    }
}

impl fmt::Display for Torus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// (δ, A) bigrading of a knot Floer generator, with δ = A − M.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct KnotGrading {
    pub delta: Half,
    pub alex: Half,
}

impl KnotGrading {
    pub const ZERO: KnotGrading = KnotGrading { delta: Half::ZERO, alex: Half::ZERO };

    pub const fn new(delta: Half, alex: Half) -> Self {
        KnotGrading { delta, alex }
    }

    pub fn from_twice(delta2: i64, alex2: i64) -> Self {
        KnotGrading { delta: Half::from_twice(delta2), alex: Half::from_twice(alex2) }
    }

    pub fn maslov(self) -> Half {
        self.alex - self.delta
    }
}

impl Add for KnotGrading {
    type Output = KnotGrading;
    fn add(self, r: KnotGrading) -> KnotGrading {
        KnotGrading::new(self.delta + r.delta, self.alex + r.alex)
    }
}

impl Sub for KnotGrading {
    type Output = KnotGrading;
    fn sub(self, r: KnotGrading) -> KnotGrading {
        KnotGrading::new(self.delta - r.delta, self.alex - r.alex)
    }
}

impl fmt::Display for KnotGrading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "d={} a={}", self.delta, self.alex)
    }
}
