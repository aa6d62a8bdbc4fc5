//! Random loop-type complexes over the torus algebra assembled from segment templates, with
//! the segment multiset they were built from.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{KnotGrading, Torus, TorusIdem};
use crate::complex::Complex;
use crate::half::Half;
use crate::segments::{anchor_grading, piece_template, CurveSegment, SegmentDecomposition, SegmentKind};

#[derive(Debug, Clone, Copy)]
pub struct SynthConfig {
    pub max_length: i64,
    pub max_segments: usize,
    /// Upper bound on the u/v pieces before mirroring on the component through d.
    pub max_half: usize,
    pub max_extra_components: usize,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig { max_length: 5, max_segments: 21, max_half: 5, max_extra_components: 2 }
    }
}

#[derive(Debug, Clone)]
pub struct SynthKnot {
    pub cfd: Complex<Torus>,
    pub segments: SegmentDecomposition,
}

#[derive(Debug, Clone, Copy)]
struct Step {
    kind: SegmentKind,
    len: i64,
    forward: bool,
}

impl Step {
    fn mirror(self) -> Step {
        let kind = if self.kind == SegmentKind::U { SegmentKind::V } else { SegmentKind::U };
        Step { kind, ..self }
    }

    /// Signed change of the bullet grading along the traversal.
    fn delta(self) -> KnotGrading {
        let l = self.len;
        let lr = match self.kind {
            SegmentKind::U => KnotGrading::new(Half::from_int(1 - l), Half::from_int(l)),
            _ => KnotGrading::new(Half::from_int(l - 1), Half::from_int(l)),
        };
        if self.forward {
            lr
        } else {
            KnotGrading::ZERO - lr
        }
    }

    fn right_grading(self) -> KnotGrading {
        anchor_grading(self.kind, self.len)
            + match self.kind {
                SegmentKind::U => KnotGrading::new(Half::from_int(1 - self.len), Half::from_int(self.len)),
                _ => KnotGrading::new(Half::from_int(self.len - 1), Half::from_int(self.len)),
            }
    }
}

struct Builder {
    c: Complex<Torus>,
    segs: Vec<CurveSegment>,
    bullets: usize,
    circles: usize,
}

impl Builder {
    fn bullet(&mut self, g: KnotGrading) -> usize {
        self.bullets += 1;
        self.c.add_generator(format!("x{}", self.bullets), TorusIdem::Dot, Some(g))
    }

    /// Copies a template into the complex, gluing its `L` and `R` to existing bullets.
    fn embed(&mut self, t: &Complex<Torus>, left: usize, right: usize) {
        let mut map = Vec::with_capacity(t.len());
        for g in t.generators() {
            let i = match g.name.as_str() {
                "L" => left,
                "R" => right,
                _ => {
                    self.circles += 1;
                    self.c.add_generator(format!("y{}", self.circles), TorusIdem::Circ, None)
                }
            };
            map.push(i);
        }
        for (s, d, e) in t.arrows() {
            self.c.add_label(map[s], map[d], e);
        }
    }

    /// Lays out `steps` starting at bullet `from`; the last step ends at `close` if given.
    fn walk(&mut self, from: usize, steps: &[Step], close: Option<usize>) -> usize {
        let mut cur = from;
        for (k, &st) in steps.iter().enumerate() {
            let g = self.c.generator(cur).grading.unwrap();
            let next_g = g + st.delta();
            let next = match close {
                Some(end) if k + 1 == steps.len() => {
                    debug_assert_eq!(self.c.generator(end).grading, Some(next_g));
                    end
                }
                _ => self.bullet(next_g),
            };
            let shift = if st.forward {
                g - anchor_grading(st.kind, st.len)
            } else {
                g - st.right_grading()
            };
            let t = piece_template(st.kind, st.len, None).expect("positive length");
            let (l, r) = if st.forward { (cur, next) } else { (next, cur) };
            self.embed(&t, l, r);
            self.segs.push(CurveSegment { kind: st.kind, param: st.len, shift: Some(shift) });
            cur = next;
        }
        cur
    }
}

fn random_half(rng: &mut impl Rng, n: usize, max_len: i64) -> Vec<Step> {
    (0..n)
        .map(|i| Step {
            kind: if i % 2 == 0 { SegmentKind::U } else { SegmentKind::V },
            len: rng.gen_range(1..=max_len),
            forward: rng.gen_bool(0.5),
        })
        .collect()
}

fn mirrored(half: &[Step]) -> Vec<Step> {
    half.iter().copied().chain(half.iter().rev().map(|s| s.mirror())).collect()
}

fn signed(s: &Step) -> i64 {
    if s.forward {
        s.len
    } else {
        -s.len
    }
}

/// A closed u/v loop with zero net Alexander change, or `None` if the draw cannot close.
fn closed_half(rng: &mut impl Rng, n: usize, max_len: i64) -> Option<Vec<Step>> {
    let mut half = random_half(rng, n, max_len);
    let partial: i64 = half[..n - 1].iter().map(signed).sum();
    let last = half.last_mut().unwrap();
    if partial == 0 || partial.abs() > max_len {
        return None;
    }
    last.len = partial.abs();
    last.forward = partial < 0;
    Some(half)
}

/// A graded loop-type complex satisfying the segment counting constraints, drawn from `rng`.
pub fn random_knot(rng: &mut impl Rng, cfg: &SynthConfig) -> SynthKnot {
    let mut b = Builder { c: Complex::new(), segs: Vec::new(), bullets: 0, circles: 0 };
    let budget = cfg.max_segments.saturating_sub(1) / 2;
    let h = rng.gen_range(0..=cfg.max_half.min(budget));
    let half = random_half(rng, h, cfg.max_length);
    let tau = -half.iter().map(signed).sum::<i64>();
    let start = b.bullet(KnotGrading::new(tau.into(), tau.into()));
    let m_end = if h == 0 { start } else { b.walk(start, &mirrored(&half), None) };
    let d = piece_template(SegmentKind::D, 2 * tau, None).expect("d template");
    b.embed(&d, m_end, start);
    b.segs.push(CurveSegment::d(2 * tau, true));

    let mut used = 1 + 2 * h;
    for _ in 0..rng.gen_range(0..=cfg.max_extra_components) {
        let n = rng.gen_range(2..=3);
        if used + 2 * n > cfg.max_segments {
            break;
        }
        let Some(half) = closed_half(rng, n, cfg.max_length) else {
            continue;
        };
        let start = b.bullet(KnotGrading::new(rng.gen_range(-3..=3).into(), Half::ZERO));
        b.walk(start, &mirrored(&half), Some(start));
        used += 2 * n;
    }

    // Shuffle generator order so that nothing downstream relies on construction order.
    let mut order: Vec<usize> = (0..b.c.len()).collect();
    order.shuffle(rng);
    let cfd = b.c.induced(&order);
    SynthKnot { cfd, segments: SegmentDecomposition::new(b.segs, true) }
}

pub fn random_knot_seeded(seed: u64, cfg: &SynthConfig) -> SynthKnot {
    random_knot(&mut ChaCha8Rng::seed_from_u64(seed), cfg)
}

/// `count` knots from consecutive seeds starting at `seed`.
pub fn random_suite(seed: u64, count: usize, cfg: &SynthConfig) -> Vec<SynthKnot> {
    (0..count as u64).map(|i| random_knot_seeded(seed.wrapping_add(i), cfg)).collect()
}
