use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tangle_double::algebra::{Algebra, KnotGrading, Peculiar, PeculiarIdem, TangleGrading};
use tangle_double::analysis::{cable_bounds_for, cable_hfk_dim};
use tangle_double::complex::Complex;
use tangle_double::curves::{fast_double, recognize, template, CurveKind, Multicurve};
use tangle_double::doubling::{box_tensor, seed_and_propagate_gradings};
use tangle_double::ingest::{parse, render, HfkMinusData, KnotInput, Payload};
use tangle_double::segments::{decompose_hfk, CurveSegment, SegmentDecomposition};
use tangle_double::synth::{random_knot_seeded, SynthConfig};
use tangle_double::Half;

fn half() -> impl Strategy<Value = Half> {
    (-40i64..40).prop_map(Half::from_twice)
}

fn shift() -> impl Strategy<Value = TangleGrading> {
    (half(), half()).prop_map(|(d, a)| TangleGrading::new(d, a, a))
}

/// Random complex over the peculiar algebra on at most six generators with d² = 0, built by
/// proposing arrows and keeping those that leave the square zero.
fn random_b_complex(seed: u64) -> Complex<Peculiar> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(2..=6);
    let mut c = Complex::new();
    for i in 0..n {
        let idem = Peculiar::idems()[rng.gen_range(0..4)];
        c.add_generator(format!("g{i}"), idem, None);
    }
    for _ in 0..rng.gen_range(1..=10) {
        let (s, t) = (rng.gen_range(0..n), rng.gen_range(0..n));
        let fits: Vec<Peculiar> = Peculiar::basis()
            .iter()
            .copied()
            .filter(|b| b.source() == c.generator(s).idem && b.target() == c.generator(t).idem)
            .filter(|b| !(s == t && b.is_idempotent()))
            .collect();
        if fits.is_empty() {
            continue;
        }
        // Bias toward identity labels so that cancellation has work to do.
        let label = match fits.iter().find(|b| b.is_idempotent()) {
            Some(&i) if rng.gen_bool(0.4) => i,
            _ => fits[rng.gen_range(0..fits.len())],
        };
        let mut trial = c.clone();
        trial.add_arrow(s, t, label);
        if trial.validate().is_valid() {
            c = trial;
        }
    }
    c
}

fn recognized(c: &Complex<Peculiar>) -> Multicurve {
    let parts: Vec<_> = c.connected_components().iter().map(|p| recognize(p).unwrap()).collect();
    Multicurve::new(parts, c.is_graded())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn recognize_inverts_template(s in shift()) {
        for l in 1..=8i64 {
            for kind in [CurveKind::S, CurveKind::SBar] {
                let t = template(kind, 2 * l, Some(s)).unwrap();
                let r = recognize(&t).unwrap();
                prop_assert_eq!((r.kind, r.param, r.shift), (kind, 2 * l, Some(s)));
            }
            for k in [2 * l, -2 * l] {
                let t = template(CurveKind::R, k, Some(TangleGrading::ZERO)).unwrap();
                let r = recognize(&t).unwrap();
                prop_assert_eq!((r.kind, r.param, r.shift), (CurveKind::R, k, Some(TangleGrading::ZERO)));
            }
        }
    }

    #[test]
    fn cancellation_on_small_complexes(seed in any::<u64>()) {
        let c = random_b_complex(seed);
        prop_assert!(c.validate().is_valid());
        let ids = c.identity_arrows().len();
        let r = c.cancel_identity_arrows().unwrap();
        prop_assert!(r.validate().is_valid(), "{:?}", r.validate());
        prop_assert!(r.identity_arrows().is_empty());
        prop_assert_eq!((c.len() - r.len()) % 2, 0);
        if ids > 0 {
            prop_assert!(r.len() < c.len());
        }
        prop_assert_eq!(r.cancel_identity_arrows().unwrap(), r);
    }

    #[test]
    fn cancellation_preserves_gradings_and_curves(seed in 0u64..10_000, pick_seed in any::<u64>()) {
        let k = random_knot_seeded(seed, &SynthConfig { max_segments: 9, ..SynthConfig::default() });
        let graded = seed_and_propagate_gradings(&box_tensor(&k.cfd).unwrap()).unwrap();
        let canonical = graded.cancel_identity_arrows().unwrap();
        prop_assert!(canonical.validate().is_valid());
        prop_assert_eq!((graded.len() - canonical.len()) % 2, 0);
        let mut rng = ChaCha8Rng::seed_from_u64(pick_seed);
        let shuffled = graded.cancel_identity_arrows_by(|_, cands| rng.gen_range(0..cands.len())).unwrap();
        prop_assert!(shuffled.validate().is_valid());
        prop_assert_eq!(recognized(&canonical), recognized(&shuffled));
    }

    #[test]
    fn cfd_documents_round_trip(seed in any::<u64>()) {
        let k = random_knot_seeded(seed, &SynthConfig::default());
        let input = KnotInput { name: format!("random-{seed}"), payload: Payload::Cfd(k.cfd) };
        let back = parse(&render(&input)).unwrap();
        prop_assert_eq!(back, input);
    }

    #[test]
    fn segment_documents_round_trip(seed in any::<u64>(), graded in any::<bool>()) {
        let k = random_knot_seeded(seed, &SynthConfig::default());
        let segs = if graded { k.segments } else { k.segments.without_gradings() };
        let input = KnotInput { name: "s".into(), payload: Payload::Segments(segs) };
        prop_assert_eq!(parse(&render(&input)).unwrap(), input);
    }

    #[test]
    fn hfk_documents_round_trip(tau in -20i64..20, torsion in prop::collection::vec(1i64..9, 0..6)) {
        let input = KnotInput { name: "h".into(), payload: Payload::HfkMinus(HfkMinusData { tau, torsion }) };
        prop_assert_eq!(parse(&render(&input)).unwrap(), input);
    }

    #[test]
    fn half_round_trips(x in half()) {
        prop_assert_eq!(x.to_string().parse::<Half>().unwrap(), x);
    }

    #[test]
    fn cable_dimension_is_odd_and_bounded(tau in -6i64..6, torsion in prop::collection::vec(1i64..6, 0..5), t in -8i64..8) {
        let dec = decompose_hfk(tau, &torsion).unwrap();
        let dim = cable_hfk_dim(&dec, t).unwrap();
        let (lo, hi) = cable_bounds_for(&dec, t).unwrap();
        prop_assert_eq!(dim % 2, 1);
        prop_assert!(lo <= dim && dim <= hi);
    }

    #[test]
    fn fast_path_respects_structure(seed in any::<u64>()) {
        let k = random_knot_seeded(seed, &SynthConfig::default());
        let m = fast_double(&k.segments).unwrap();
        m.validate().unwrap();
        prop_assert_eq!(m.len(), k.segments.len());
        let u = fast_double(&k.segments.without_gradings()).unwrap();
        prop_assert_eq!(u, m.without_gradings());
    }
}

#[test]
fn asymmetric_segments_are_rejected() {
    let g = |d2, a2| Some(KnotGrading::from_twice(d2, a2));
    let dec = SegmentDecomposition::new(
        vec![CurveSegment::d(0, true), CurveSegment::u(1, g(1, 1)), CurveSegment::v(1, g(1, 1))],
        true,
    );
    assert!(fast_double(&dec).is_err());
}

#[test]
fn seeded_templates_cover_all_idempotents() {
    let t = template(CurveKind::R, 4, Some(TangleGrading::ZERO)).unwrap();
    for i in [PeculiarIdem::A, PeculiarIdem::B, PeculiarIdem::C, PeculiarIdem::D] {
        assert!(t.generators().iter().any(|g| g.idem == i));
    }
}

#[test]
fn small_complex_generator_exercises_cancellation() {
    let with_ids = (0..200).filter(|&s| !random_b_complex(s).identity_arrows().is_empty()).count();
    assert!(with_ids >= 40, "only {with_ids} of 200 small complexes carry identity arrows");
}
