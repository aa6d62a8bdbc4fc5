use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use tangle_double::analysis::{
    cable_bounds, cable_bounds_for, cable_hfk_dim, cable_segment_counts, floer_dim, khovanov_cable_lower_bound,
    CurveDesc, PairingQuery, Theory,
};
use tangle_double::curves::{compare, fast_double, Multicurve, Verdict};
use tangle_double::doubling::{check_bimodule, double_cfd_via_oracle, test_complex, test_pairing_slope};
use tangle_double::ingest::{builtin_knot, parse, render, KnotInput, Payload, Tier, BUILTIN_KNOTS};
use tangle_double::segments::decompose;
use tangle_double::Error;

#[derive(Parser)]
#[command(name = "tangle-double", version, about = "Multicurve invariants of doubled knots and cable dimensions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the multicurve of the doubled knot.
    Double(InputArgs),
    /// Print the curve segments of the knot.
    Segments(InputArgs),
    /// Compare the direct correspondence with the box tensor route (cfd input only).
    Verify(InputArgs),
    /// Dimension of the pairing of two curve components.
    Pair(PairArgs),
    /// Dimension and bounds for the (2, 2t+1) cable.
    Cable(CableArgs),
    /// Khovanov lower bound for the (2, 2t+1) cable.
    KhBound(KhArgs),
    /// Run the built-in fixtures.
    Selftest(FormatArg),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct FormatArg {
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
#[group(id = "source", required = true, multiple = false)]
struct Source {
    /// Builtin knot name.
    #[arg(long)]
    knot: Option<String>,
    /// Path to a knot document.
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Args)]
struct InputArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Drop gradings from the output.
    #[arg(long)]
    ungraded: bool,
}

#[derive(Args)]
struct PairArgs {
    #[arg(long)]
    left: CurveDesc,
    #[arg(long)]
    right: CurveDesc,
    #[arg(long, default_value = "hf")]
    theory: Theory,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
#[group(id = "cable_source", multiple = false)]
struct OptSource {
    #[arg(long)]
    knot: Option<String>,
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Args)]
struct CableArgs {
    #[command(flatten)]
    source: OptSource,
    #[arg(long, allow_negative_numbers = true)]
    t: i64,
    /// Without a knot: dim HFK-hat of the companion.
    #[arg(long, conflicts_with = "cable_source", requires_all = ["lmax", "tau"])]
    d: Option<i64>,
    #[arg(long, conflicts_with = "cable_source", requires = "d")]
    lmax: Option<i64>,
    #[arg(long, allow_negative_numbers = true, conflicts_with = "cable_source", requires = "d")]
    tau: Option<i64>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct KhArgs {
    /// Dimension of reduced Khovanov homology of the companion.
    #[arg(long)]
    d: i64,
    #[arg(long, allow_negative_numbers = true)]
    theta2: i64,
    #[arg(long, allow_negative_numbers = true)]
    t: i64,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

enum Failure {
    Domain(Error),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

type Run = Result<String, Failure>;

fn load(knot: Option<&str>, file: Option<&PathBuf>) -> Result<KnotInput, Error> {
    match (knot, file) {
        (Some(k), None) => builtin_knot(k),
        (None, Some(p)) => {
            let text = std::fs::read_to_string(p).map_err(|e| Error::Semantic(format!("cannot read {}: {e}", p.display())))?;
            parse(&text)
        }
        _ => Err(Error::Usage("give exactly one of --knot or --file".into())),
    }
}

fn load_source(s: &Source) -> Result<KnotInput, Error> {
    load(s.knot.as_deref(), s.file.as_ref())
}

fn json_text(v: &Value) -> String {
    format!("{}\n", serde_json::to_string_pretty(v).expect("json values serialize"))
}

fn note_tier(input: &KnotInput) {
    match input.tier() {
        Tier::Cfd => {}
        Tier::Segments => eprintln!("note: segments-tier input; the box tensor cross-check needs a cfd complex"),
        Tier::HfkMinus => eprintln!("note: hfk_minus-tier input; output is ungraded"),
    }
}

/// The input document with the curves appended.
fn curves_json(input: &KnotInput, m: &Multicurve) -> Value {
    let mut doc: Value = serde_json::from_str(&render(input)).expect("rendered documents reparse");
    let extra = m.to_json();
    doc["graded"] = extra["graded"].clone();
    doc["curves"] = extra["curves"].clone();
    doc
}

fn double(a: &InputArgs) -> Run {
    let input = load_source(&a.source)?;
    note_tier(&input);
    let dec = decompose(&input)?;
    let fast = fast_double(&dec)?;
    let m = match &input.payload {
        Payload::Cfd(c) => match compare(fast, double_cfd_via_oracle(c)?) {
            Verdict::Equal(m) => m,
            v => return Err(Failure::Verification(format!("fast path and oracle disagree\n{}", v.render()))),
        },
        _ => fast,
    };
    let m = if a.ungraded { m.without_gradings() } else { m };
    Ok(match a.format {
        Format::Text => m.render(),
        Format::Json => json_text(&curves_json(&input, &m)),
    })
}

fn segments(a: &InputArgs) -> Run {
    let input = load_source(&a.source)?;
    note_tier(&input);
    let dec = decompose(&input)?;
    let dec = if a.ungraded { dec.without_gradings() } else { dec };
    Ok(match a.format {
        Format::Text => dec.render(),
        Format::Json => render(&KnotInput { name: input.name, payload: Payload::Segments(dec) }),
    })
}

fn verify(a: &InputArgs) -> Run {
    let input = load_source(&a.source)?;
    let Payload::Cfd(c) = &input.payload else {
        return Err(Error::Precondition(format!("verify needs a cfd-tier input, got {}", input.tier().as_str())).into());
    };
    let v = tangle_double::batch::verify_cfd(c)?;
    let text = match a.format {
        Format::Text => v.render(),
        Format::Json => json_text(&match &v {
            Verdict::Equal(m) => json!({ "name": input.name, "verdict": "equal", "curves": m.to_json()["curves"] }),
            Verdict::Diff { fast, oracle, .. } => json!({
                "name": input.name,
                "verdict": "diff",
                "fast": fast.to_json()["curves"],
                "oracle": oracle.to_json()["curves"],
            }),
        }),
    };
    if v.is_equal() {
        Ok(text)
    } else {
        print!("{text}");
        Err(Failure::Verification(format!("{}: fast path and oracle disagree", input.name)))
    }
}

fn pair(a: &PairArgs) -> Run {
    let dim = floer_dim(&PairingQuery { theory: a.theory, left: a.left, right: a.right })?;
    Ok(match a.format {
        Format::Text => format!("dim={dim}\n"),
        Format::Json => json_text(&json!({ "left": a.left.to_string(), "right": a.right.to_string(), "dim": dim })),
    })
}

fn cable(a: &CableArgs) -> Run {
    if a.source.knot.is_none() && a.source.file.is_none() {
        let (Some(d), Some(lmax), Some(tau)) = (a.d, a.lmax, a.tau) else {
            return Err(Error::Usage("cable needs --knot, --file or all of --d, --lmax, --tau".into()).into());
        };
        let (lo, hi) = cable_bounds(d, lmax, tau, a.t)?;
        return Ok(match a.format {
            Format::Text => format!("lower={lo} upper={hi}\n"),
            Format::Json => json_text(&json!({ "t": a.t, "lower": lo, "upper": hi })),
        });
    }
    let input = load(a.source.knot.as_deref(), a.source.file.as_ref())?;
    let dec = decompose(&input)?;
    let dim = cable_hfk_dim(&dec, a.t)?;
    let (lo, hi) = cable_bounds_for(&dec, a.t)?;
    Ok(match a.format {
        Format::Text => format!("dim={dim} lower={lo} upper={hi}\n"),
        Format::Json => {
            let counts = cable_segment_counts(&dec, a.t)?;
            json_text(&json!({ "name": input.name, "t": a.t, "dim": dim, "lower": lo, "upper": hi, "counts": counts }))
        }
    })
}

fn kh_bound(a: &KhArgs) -> Run {
    let v = khovanov_cable_lower_bound(a.d, a.theta2, a.t)?;
    Ok(match a.format {
        Format::Text => format!("lower={v}\n"),
        Format::Json => json_text(&json!({ "d": a.d, "theta2": a.theta2, "t": a.t, "lower": v })),
    })
}

const GOLDEN: [(&str, &str); 4] = [
    ("unknot", "r[0]\n"),
    ("trefoil", "r[4]\ns[2] d=2 a1=1 a2=1\nsbar[2] d=2 a1=-1 a2=-1\n"),
    ("figure8", "r[0]\ns[2] d=0 a1=-1 a2=-1\ns[2] d=1 a1=1 a2=1\nsbar[2] d=0 a1=1 a2=1\nsbar[2] d=1 a1=-1 a2=-1\n"),
    ("torus_3_4", "r[12]\ns[2] d=6 a1=5 a2=5\ns[4] d=2 a1=-2 a2=-2\nsbar[2] d=6 a1=-5 a2=-5\nsbar[4] d=2 a1=2 a2=2\n"),
];

fn pairing_check(i: i64) -> Result<String, String> {
    let m = test_complex(i).and_then(|c| double_cfd_via_oracle(&c)).map_err(|e| e.to_string())?;
    let want = format!("r[{}]\n", test_pairing_slope(i));
    if m.render() == want {
        Ok(want.trim_end().to_string())
    } else {
        Err(format!("got {:?}, expected {want:?}", m.render()))
    }
}

fn knot_check(name: &str, golden: &str) -> Result<String, String> {
    let input = builtin_knot(name).map_err(|e| e.to_string())?;
    let m = decompose(&input).and_then(|d| fast_double(&d)).map_err(|e| e.to_string())?;
    if m.render() != golden {
        return Err(format!("fast path gave {:?}", m.render()));
    }
    if let Payload::Cfd(c) = &input.payload {
        let v = tangle_double::batch::verify_cfd(c).map_err(|e| e.to_string())?;
        if !v.is_equal() {
            return Err(format!("oracle disagrees: {}", v.render().trim_end()));
        }
        return Ok(format!("{} curves, oracle agrees", m.len()));
    }
    Ok(format!("{} curves", m.len()))
}

fn selftest(a: &FormatArg) -> Run {
    let mut results: Vec<(String, Result<String, String>)> = Vec::new();
    results.push(("bimodule".into(), check_bimodule().map(|_| "idempotents compatible".into()).map_err(|e| e.to_string())));
    for i in [0, 1, -2] {
        results.push((format!("test pairing {i}"), pairing_check(i)));
    }
    debug_assert_eq!(GOLDEN.len(), BUILTIN_KNOTS.len());
    for (name, golden) in GOLDEN {
        results.push((format!("knot {name}"), knot_check(name, golden)));
    }
    let failed = results.iter().filter(|(_, r)| r.is_err()).count();
    let text = match a.format {
        Format::Text => results
            .iter()
            .map(|(n, r)| match r {
                Ok(d) => format!("PASS {n}: {d}\n"),
                Err(d) => format!("FAIL {n}: {d}\n"),
            })
            .collect(),
        Format::Json => json_text(&Value::Array(
            results
                .iter()
                .map(|(n, r)| match r {
                    Ok(d) => json!({ "check": n, "pass": true, "detail": d }),
                    Err(d) => json!({ "check": n, "pass": false, "detail": d }),
                })
                .collect(),
        )),
    };
    if failed == 0 {
        Ok(text)
    } else {
        print!("{text}");
        Err(Failure::Verification(format!("{failed} selftest checks failed")))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            let body: Vec<&str> = msg
                .lines()
                .take_while(|l| !l.starts_with("Usage:"))
                .map(str::trim)
                .filter(|l| !l.is_empty())
                .collect();
            eprintln!("{}", body.join(" "));
            return ExitCode::from(2);
        }
    };
    let out = match &cli.command {
        Command::Double(a) => double(a),
        Command::Segments(a) => segments(a),
        Command::Verify(a) => verify(a),
        Command::Pair(a) => pair(a),
        Command::Cable(a) => cable(a),
        Command::KhBound(a) => kh_bound(a),
        Command::Selftest(a) => selftest(a),
    };
    match out {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {}", msg.lines().next().unwrap_or_default());
            if let Some(rest) = msg.split_once('\n').map(|(_, r)| r) {
                print!("{rest}");
            }
            ExitCode::from(3)
        }
        Err(Failure::Domain(e)) => {
            eprintln!("error: {}", e.to_string().replace('\n', "; "));
            ExitCode::from(if e.is_usage() { 2 } else { 1 })
        }
    }
}
