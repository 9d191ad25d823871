use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

use obdim_core::catalog::{self, GroupKind, GroupSpec};
use obdim_core::complexes::{build_c, build_sc, extract_l, SimplicialComplex};
use obdim_core::lemmakey::{exhaustive_verify, verification_types};
use obdim_core::matrixmodels::harness::{certify, powers_of_two, HarnessConfig};
use obdim_core::matrixmodels::lemma25::{decades, lemma25_experiment, strictly_increasing};
use obdim_core::matrixmodels::{ConeMap, HeisenbergMap, PsiMap};
use obdim_core::rootsys::parse_types;
use obdim_core::RootSystem;

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(
    name = "obdim",
    version,
    about = "Obstructor dimension computations for arithmetic groups"
)]
struct Cli {
    /// Print a JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Also write the JSON document to DIR/<command>.json.
    #[arg(long, global = true, env = "OBDIM_OUTPUT_DIR", value_name = "DIR")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Positive roots and multiplicities of a root system such as A3 or A2xBC1.
    Rootsys { system: String },
    /// Check the key ordering lemma on every labeling.
    LemmaKey(LemmaKeyArgs),
    /// Build C(n), its signed double, or the obstructor complex L(n).
    Complex(ComplexArgs),
    /// Dimension identities m + 2 = dim G/K.
    Dims(DimsArgs),
    /// Properness and divergence of a cone map.
    Diverge(DivergeArgs),
    /// Growth of the largest entry of S as the lower entries grow.
    Lemma25(Lemma25Args),
}

#[derive(Args)]
struct LemmaKeyArgs {
    /// Root system, e.g. E8 or A2xG2.
    #[arg(long = "type", conflicts_with = "all", required_unless_present = "all")]
    kind: Option<String>,
    /// Every type in A1-A8, B2-B8, C2-C8, D4-D8, E6-E8, F4, G2, BC1-BC8.
    #[arg(long)]
    all: bool,
}

#[derive(Args)]
#[group(required = true, multiple = false, id = "which")]
struct ComplexSelect {
    #[arg(long, value_name = "N")]
    cuspidal: Option<usize>,
    #[arg(long, value_name = "N")]
    signed: Option<usize>,
    #[arg(long, value_name = "N")]
    obstructor: Option<usize>,
}

#[derive(Args)]
struct ComplexArgs {
    #[command(flatten)]
    which: ComplexSelect,
    /// Rational Betti numbers.
    #[arg(long)]
    betti: bool,
    /// Include the vertices and maximal simplices.
    #[arg(long)]
    emit: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Group {
    Sl,
    Sp,
    So,
}

#[derive(Args)]
struct DimsArgs {
    /// Without a group, print the standard table.
    #[arg(long, value_enum)]
    group: Option<Group>,
    #[arg(long, requires = "group")]
    n: Option<usize>,
    /// Z, Zsqrt2 or O (with --r and --s).
    #[arg(long, default_value = "Z")]
    ring: String,
    #[arg(long, default_value_t = 1)]
    r: u32,
    #[arg(long, default_value_t = 0)]
    s: u32,
    /// Witt index, for SO.
    #[arg(long)]
    q: Option<usize>,
    /// dim X_M, for SO.
    #[arg(long)]
    dim_xm: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum MapName {
    Heisenberg,
    Psi,
}

#[derive(Args)]
struct DivergeArgs {
    #[arg(long, value_enum)]
    map: MapName,
    #[arg(long)]
    n: usize,
    /// Radii 2^0 .. 2^K.
    #[arg(long, default_value_t = 20, value_name = "K")]
    radii: u32,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Keep every pair and ray in the JSON report.
    #[arg(long)]
    keep_rows: bool,
}

#[derive(Args)]
struct Lemma25Args {
    #[arg(long)]
    n: usize,
    /// Magnitudes 10^1 .. 10^K.
    #[arg(long, default_value_t = 6, value_name = "K")]
    decades: u32,
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long, default_value_t = 25)]
    seed: u64,
}

struct Outcome {
    command: &'static str,
    passed: bool,
    text: String,
    result: Value,
}

#[derive(Serialize)]
struct Envelope<'a> {
    schema_version: u32,
    command: &'a str,
    passed: bool,
    result: &'a Value,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<bool> {
    let outcome = match &cli.command {
        Command::Rootsys { system } => rootsys(system)?,
        Command::LemmaKey(a) => lemma_key(a)?,
        Command::Complex(a) => complex(a)?,
        Command::Dims(a) => dims(a)?,
        Command::Diverge(a) => diverge(a)?,
        Command::Lemma25(a) => lemma25(a)?,
    };
    let doc = serde_json::to_string_pretty(&Envelope {
        schema_version: SCHEMA_VERSION,
        command: outcome.command,
        passed: outcome.passed,
        result: &outcome.result,
    })?;
    let mut stdout = std::io::stdout().lock();
    if cli.json {
        writeln!(stdout, "{doc}")?;
    } else {
        write!(stdout, "{}", outcome.text)?;
    }
    if let Some(dir) = &cli.out {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let path = dir.join(format!("{}.json", outcome.command));
        std::fs::write(&path, doc + "\n").with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(outcome.passed)
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn rootsys(system: &str) -> Result<Outcome> {
    let kinds = parse_types(system)?;
    let rs = RootSystem::product(&kinds);
    let mut text = format!(
        "{}: rank {}, {} positive roots{}\n",
        rs.type_label(),
        rs.rank(),
        rs.positive_roots().len(),
        if rs.is_standard() { "" } else { " (nonstandard rank)" }
    );
    for i in 0..rs.rank() {
        text += &format!("  dim n_{} = {}\n", i + 1, rs.dim_n_i(i)?);
    }
    for root in rs.positive_roots() {
        text += &format!("  {root}\n");
    }
    Ok(Outcome {
        command: "rootsys",
        passed: true,
        text,
        result: serde_json::to_value(rs.to_json())?,
    })
}

fn lemma_key(args: &LemmaKeyArgs) -> Result<Outcome> {
    let systems: Vec<RootSystem> = match &args.kind {
        Some(s) => vec![RootSystem::product(&parse_types(s)?)],
        None => verification_types().into_iter().map(RootSystem::build).collect(),
    };
    let mut text = String::new();
    let mut reports = Vec::new();
    let mut passed = true;
    for rs in &systems {
        match exhaustive_verify(rs) {
            Ok(r) => {
                text += &format!(
                    "{}: {} labelings, {} witnesses, {}\n",
                    r.system,
                    r.labelings_checked,
                    r.witnesses_found,
                    verdict(r.passed())
                );
                passed &= r.passed();
                reports.push(serde_json::to_value(&r)?);
            }
            Err(e) => {
                text += &format!("{}: {e}, FAIL\n", rs.type_label());
                passed = false;
                reports.push(serde_json::json!({ "system": rs.type_label(), "error": e.to_string() }));
            }
        }
    }
    Ok(Outcome {
        command: "lemma-key",
        passed,
        text,
        result: Value::Array(reports),
    })
}

fn describe<V: obdim_core::complexes::Label>(
    name: String,
    c: &SimplicialComplex<V>,
    args: &ComplexArgs,
    extra: serde_json::Map<String, Value>,
) -> Result<(String, Value)> {
    let f = c.f_vector()?;
    let euler: i64 = f
        .iter()
        .enumerate()
        .map(|(i, &x)| if i % 2 == 0 { x as i64 } else { -(x as i64) })
        .sum();
    let mut text = format!(
        "{name}\n  dim {}\n  f-vector {f:?}\n  euler characteristic {euler}\n",
        c.dim()
    );
    let mut doc = serde_json::Map::new();
    doc.insert("complex".into(), name.into());
    doc.insert("dim".into(), c.dim().into());
    doc.insert("f_vector".into(), serde_json::to_value(&f)?);
    doc.insert("euler".into(), euler.into());
    if args.betti {
        let b = c.betti()?;
        text += &format!("  betti {b:?}\n");
        doc.insert("betti".into(), serde_json::to_value(&b)?);
    }
    for (k, v) in &extra {
        text += &format!(
            "  {} {}\n",
            k.replace('_', " "),
            v.as_str().map_or_else(|| v.to_string(), String::from)
        );
    }
    doc.extend(extra);
    if args.emit {
        let json = c.to_json();
        for s in &json.maximal {
            let names: Vec<&str> = s.iter().map(|&i| json.vertices[i].as_str()).collect();
            text += &format!("  <{}>\n", names.join(","));
        }
        doc.insert("vertices".into(), serde_json::to_value(&json.vertices)?);
        doc.insert("maximal".into(), serde_json::to_value(&json.maximal)?);
    }
    Ok((text, Value::Object(doc)))
}

fn complex(args: &ComplexArgs) -> Result<Outcome> {
    let w = &args.which;
    let check_n = |n: usize| if n < 2 { bail!("n must be at least 2") } else { Ok(n) };
    let (text, result, passed) = if let Some(n) = w.cuspidal {
        let c = build_c(check_n(n)?);
        let (t, v) = describe(format!("C({n})"), &c, args, Default::default())?;
        (t, v, true)
    } else if let Some(n) = w.signed {
        let sc = build_sc(&build_c(check_n(n)?));
        let (t, v) = describe(format!("SC({n})"), &sc, args, Default::default())?;
        (t, v, true)
    } else {
        let n = check_n(w.obstructor.expect("clap requires one of the three"))?;
        let l = extract_l(n);
        let ok = l.lies_in_sc() && l.is_isomorphic_to_model();
        let mut extra = serde_json::Map::new();
        extra.insert("shape".into(), l.shape().to_string().into());
        extra.insert("m".into(), l.shape().m().into());
        extra.insert("in_sc_and_isomorphic".into(), ok.into());
        let (t, v) = describe(format!("L({n})"), &l.complex, args, extra)?;
        (t, v, ok)
    };
    Ok(Outcome {
        command: "complex",
        passed,
        text,
        result,
    })
}

fn standard_specs() -> Vec<GroupSpec> {
    let mut specs: Vec<GroupSpec> = (2..=12).map(|n| GroupSpec::sl_z(n).unwrap()).collect();
    specs.extend((2..=8).map(|n| GroupSpec::sl_z_sqrt2(n).unwrap()));
    specs.extend((2..=10).map(|n| GroupSpec::sp_z(n).unwrap()));
    specs
}

fn dims(args: &DimsArgs) -> Result<Outcome> {
    let specs = match args.group {
        None => standard_specs(),
        Some(group) => {
            let n = args.n.context("--n is required with --group")?;
            let ring = args.ring.to_ascii_lowercase();
            let kind = match (group, ring.as_str()) {
                (Group::Sl, "z") => GroupKind::SlZ,
                (Group::Sl, "zsqrt2" | "z[sqrt2]") => GroupKind::SlZSqrt2,
                (Group::Sl, "o") => GroupKind::SlO { r: args.r, s: args.s },
                (Group::Sp, "z") => GroupKind::SpZ,
                (Group::Sp, "o") => GroupKind::SpO { r: args.r, s: args.s },
                (Group::So, _) => GroupKind::SoQ {
                    q: args.q.context("--q is required for SO")?,
                    dim_xm: args.dim_xm,
                },
                (_, other) => bail!("unknown ring {other:?} for this group (use Z, Zsqrt2 or O)"),
            };
            vec![GroupSpec::new(kind, n)?]
        }
    };
    let reports = specs
        .iter()
        .map(catalog::identity_check)
        .collect::<Result<Vec<_>, _>>()?;
    let passed = reports.iter().all(|r| r.passed());
    let mut text = catalog::render_table(&reports);
    if let [r] = reports.as_slice() {
        text += &format!("{} {}\n", r.row(), verdict(r.passed()));
    }
    Ok(Outcome {
        command: "dims",
        passed,
        text,
        result: serde_json::to_value(&reports)?,
    })
}

fn run_certify<M: ConeMap>(map: &M, name: &str, config: &HarnessConfig) -> Result<Outcome> {
    let (prop, div) = certify(map, name, config)?;
    let passed = prop.passed() && div.passed();
    let mut text = format!(
        "{name}: properness {} ({} rays, {} failed, min growth {:.3})\n",
        verdict(prop.passed()),
        prop.rays,
        prop.failed,
        prop.min_growth
    );
    text += &format!(
        "{name}: divergence {} ({} pairs, {} failed, min growth {:.3}, margin {:.3})\n",
        verdict(div.passed()),
        div.pairs,
        div.failed,
        div.min_growth,
        config.margin
    );
    if let Some(w) = &div.worst {
        text += &format!(
            "  worst pair <{}> vs <{}>: growth {:.3}\n",
            w.sigma.join(","),
            w.tau.join(","),
            w.growth
        );
    }
    Ok(Outcome {
        command: "diverge",
        passed,
        text,
        result: serde_json::json!({ "properness": prop, "divergence": div }),
    })
}

fn diverge(args: &DivergeArgs) -> Result<Outcome> {
    if args.n < 2 {
        bail!("n must be at least 2");
    }
    let mut config = HarnessConfig {
        radii: powers_of_two(args.radii),
        keep_rows: args.keep_rows,
        ..HarnessConfig::default()
    };
    if args.radii <= config.monotone_from as u32 {
        bail!("need more than {} radii doublings", config.monotone_from);
    }
    if let Some(s) = args.samples {
        config.samples = s;
    }
    if let Some(s) = args.seed {
        config.seed = s;
    }
    match args.map {
        MapName::Heisenberg => run_certify(
            &HeisenbergMap::new(args.n),
            &format!("heisenberg n={}", args.n),
            &config,
        ),
        MapName::Psi => run_certify(&PsiMap::new(args.n), &format!("psi_sl n={}", args.n), &config),
    }
}

fn lemma25(args: &Lemma25Args) -> Result<Outcome> {
    if args.decades == 0 || args.decades > 18 {
        bail!("--decades must be between 1 and 18");
    }
    let stats = decades(args.decades)
        .into_iter()
        .map(|m| lemma25_experiment(args.n, m, args.samples, args.seed))
        .collect::<Result<Vec<_>, _>>()?;
    let passed = strictly_increasing(&stats);
    let mut text = format!("n={} samples={} seed={}\n", args.n, args.samples, args.seed);
    text += "M          min max|S|      log10\n";
    for s in &stats {
        text += &format!(
            "{:<10} {:<15} {:.3}\n",
            s.magnitude,
            s.min_max_entry.to_string(),
            s.min_log10
        );
    }
    text += &format!("strictly increasing: {}\n", verdict(passed));
    Ok(Outcome {
        command: "lemma25",
        passed,
        text,
        result: serde_json::to_value(&stats)?,
    })
}
