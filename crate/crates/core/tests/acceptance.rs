//! Acceptance suite: one PASS/FAIL line per criterion.

use std::process::ExitCode;
use std::time::Instant;

use tangle_double::algebra::{Algebra, Peculiar, Torus};
use tangle_double::analysis::{cable_bounds_for, cable_dim_by_pairing, cable_dim_closed_form, cable_segment_counts};
use tangle_double::curves::{compare, fast_double, verify_main_theorem, Verdict};
use tangle_double::doubling::{box_tensor, check_bimodule, double_cfd_via_oracle, seed_and_propagate_gradings, test_complex};
use tangle_double::ingest::{builtin_knot, BUILTIN_KNOTS};
use tangle_double::segments::{decompose, decompose_cfd};
use tangle_double::synth::{random_suite, SynthConfig, SynthKnot};

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn golden_trefoil() -> Outcome {
    let k = builtin_knot("trefoil").map_err(|e| e.to_string())?;
    let v = verify_main_theorem(&k).map_err(|e| e.to_string())?;
    let Verdict::Equal(m) = v else {
        return Err(format!("verdict {}", v.render().trim()));
    };
    let want = "r[4]\ns[2] d=2 a1=1 a2=1\nsbar[2] d=2 a1=-1 a2=-1\n";
    ensure(m.render() == want, || format!("got {:?}", m.render()))?;
    Ok("verify = equal; {r[4], s[2] d=2 a1=1 a2=1, sbar[2] d=2 a1=-1 a2=-1}".into())
}

fn golden_segment_tier() -> Outcome {
    let cases = [
        ("figure8", "r[0]\ns[2] d=0 a1=-1 a2=-1\ns[2] d=1 a1=1 a2=1\nsbar[2] d=0 a1=1 a2=1\nsbar[2] d=1 a1=-1 a2=-1\n"),
        ("torus_3_4", "r[12]\ns[2] d=6 a1=5 a2=5\ns[4] d=2 a1=-2 a2=-2\nsbar[2] d=6 a1=-5 a2=-5\nsbar[4] d=2 a1=2 a2=2\n"),
    ];
    for (name, want) in cases {
        let k = builtin_knot(name).map_err(|e| e.to_string())?;
        let dec = decompose(&k).map_err(|e| e.to_string())?;
        let got = fast_double(&dec).map_err(|e| e.to_string())?.render();
        ensure(got == want, || format!("{name}: got {got:?}"))?;
    }
    Ok("figure8 and torus_3_4 match verbatim".into())
}

fn test_pairings() -> Outcome {
    let mut seen = Vec::new();
    for (i, want) in [(0, "r[0]\n"), (1, "r[-2]\n"), (-2, "r[4]\n")] {
        let c = test_complex(i).map_err(|e| e.to_string())?;
        let got = double_cfd_via_oracle(&c).map_err(|e| format!("i={i}: {e}"))?.render();
        ensure(got == want, || format!("i={i}: got {got:?}, want {want:?}"))?;
        seen.push(format!("i={i} -> {}", got.trim()));
    }
    Ok(seen.join(", "))
}

fn bimodule_integrity(suite: &[SynthKnot]) -> Outcome {
    check_bimodule().map_err(|e| e.to_string())?;
    let mut fails = Vec::new();
    for (n, k) in suite.iter().enumerate() {
        let res = box_tensor(&k.cfd).and_then(|p| seed_and_propagate_gradings(&p)).and_then(|g| g.validate().into_result());
        if let Err(e) = res {
            fails.push(format!("#{n}: {e}"));
        }
    }
    ensure(fails.is_empty(), || format!("{} failures, first: {}", fails.len(), fails[0]))?;
    Ok(format!("19 actions compatible; d^2 = 0 and gradings consistent on {} inputs", suite.len()))
}

fn main_theorem(suite: &[SynthKnot]) -> Outcome {
    let mut fails = Vec::new();
    for (n, k) in suite.iter().enumerate() {
        let res = fast_double(&k.segments).and_then(|f| double_cfd_via_oracle(&k.cfd).map(|o| compare(f, o)));
        match res {
            Ok(v) if v.is_equal() => {}
            Ok(v) => fails.push(format!("#{n}: {}", v.render().replace('\n', " "))),
            Err(e) => fails.push(format!("#{n}: {e}")),
        }
    }
    ensure(fails.is_empty(), || format!("{} failures, first: {}", fails.len(), fails[0]))?;
    Ok(format!("fast path = pairing route on {} inputs", suite.len()))
}

fn structure(suite: &[SynthKnot]) -> Outcome {
    let mut checked = 0;
    let mut check = |label: String, cfd: &tangle_double::complex::Complex<Torus>| -> Result<(), String> {
        let dec = decompose_cfd(cfd).map_err(|e| format!("{label}: {e}"))?;
        dec.validate().map_err(|e| format!("{label}: {e}"))?;
        let fast = fast_double(&dec).map_err(|e| format!("{label}: {e}"))?;
        let oracle = double_cfd_via_oracle(cfd).map_err(|e| format!("{label}: {e}"))?;
        for m in [&fast, &oracle] {
            m.validate().map_err(|e| format!("{label}: {e}"))?;
        }
        let hfk = cfd.generators().iter().filter(|g| g.idem == tangle_double::algebra::TorusIdem::Dot).count();
        ensure(oracle.len() == hfk && dec.len() == hfk, || {
            format!("{label}: {} components, {} segments, dim HFK = {hfk}", oracle.len(), dec.len())
        })?;
        checked += 1;
        Ok(())
    };
    for name in ["unknot", "trefoil"] {
        let k = builtin_knot(name).map_err(|e| e.to_string())?;
        let tangle_double::ingest::Payload::Cfd(c) = &k.payload else { unreachable!() };
        check(name.to_string(), c)?;
    }
    for (n, k) in suite.iter().enumerate() {
        check(format!("#{n}"), &k.cfd)?;
    }
    for name in ["figure8", "torus_3_4"] {
        let dec = decompose(&builtin_knot(name).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let m = fast_double(&dec).map_err(|e| e.to_string())?;
        m.validate().map_err(|e| format!("{name}: {e}"))?;
        ensure(m.len() == dec.len(), || format!("{name}: component count"))?;
        checked += 1;
    }
    Ok(format!("segment and multicurve counts hold on {checked} inputs"))
}

fn cables() -> Outcome {
    let mut rows = 0;
    for name in BUILTIN_KNOTS {
        let dec = decompose(&builtin_knot(name).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        for t in -5..=5 {
            let p = cable_dim_by_pairing(&dec, t).map_err(|e| e.to_string())?;
            let c = cable_dim_closed_form(&dec, t).map_err(|e| e.to_string())?;
            let s = cable_segment_counts(&dec, t).map_err(|e| e.to_string())?.total;
            ensure(p == c && c == s, || format!("{name} t={t}: pairing {p}, closed {c}, counts {s}"))?;
            let (lo, hi) = cable_bounds_for(&dec, t).map_err(|e| e.to_string())?;
            ensure(lo <= p && p <= hi, || format!("{name} t={t}: {p} outside [{lo}, {hi}]"))?;
            rows += 1;
        }
    }
    let tre = decompose(&builtin_knot("trefoil").unwrap()).unwrap();
    let t34 = decompose(&builtin_knot("torus_3_4").unwrap()).unwrap();
    let a = cable_dim_closed_form(&tre, 3).map_err(|e| e.to_string())?;
    let b = cable_dim_closed_form(&t34, 5).map_err(|e| e.to_string())?;
    ensure(a == 7 && b == 13, || format!("trefoil t=3 gave {a}, torus_3_4 t=5 gave {b}"))?;
    Ok(format!("three routes agree within bounds on {rows} (knot, t) pairs; trefoil t=3 -> 7, T(3,4) t=5 -> 13"))
}

fn associativity<A: Algebra>() -> Result<usize, String> {
    let mut n = 0;
    for &x in A::basis() {
        for &y in A::basis() {
            for &z in A::basis() {
                let l = x.mul(y).and_then(|p| p.mul(z));
                let r = y.mul(z).and_then(|p| x.mul(p));
                ensure(l == r, || format!("({x:?}{y:?}){z:?}"))?;
                n += 1;
            }
        }
    }
    Ok(n)
}

fn algebra() -> Outcome {
    let a = associativity::<Torus>()?;
    let b = associativity::<Peculiar>()?;
    let mut products = 0;
    for &x in Peculiar::basis() {
        for &y in Peculiar::basis() {
            if let Some(p) = x.mul(y) {
                ensure(p.grading() == x.grading() + y.grading(), || format!("grading of {x:?}{y:?}"))?;
                products += 1;
            }
        }
    }
    ensure(a == 512 && b == 4096, || format!("{a} and {b} triples"))?;
    Ok(format!("{a} + {b} associativity triples, {products} graded products"))
}

fn main() -> ExitCode {
    let start = Instant::now();
    let suite = random_suite(20_241, 200, &SynthConfig::default());
    let criteria: Vec<Criterion> = vec![
        ("1 golden trefoil, both routes", Box::new(golden_trefoil)),
        ("2 golden figure-eight and T(3,4)", Box::new(golden_segment_tier)),
        ("3 test pairings", Box::new(test_pairings)),
        ("4 bimodule integrity", Box::new(|| bimodule_integrity(&suite))),
        ("5 fast path against oracle", Box::new(|| main_theorem(&suite))),
        ("6 structure invariants", Box::new(|| structure(&suite))),
        ("7 cable dimensions", Box::new(cables)),
        ("8 algebra exhaustives", Box::new(algebra)),
    ];
    let mut failed = 0;
    for (name, run) in &criteria {
        match run() {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name}: {why}");
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed in {:.2}s",
        criteria.len() - failed,
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
