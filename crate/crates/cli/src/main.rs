//! `stratwitten` command-line front end.

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde_json::{json, Map, Value};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use stratwitten::complexes::{spectrum_length_one, spectrum_length_two};
use stratwitten::cone::{assemble_cone_spectrum, LinkSpectrum};
use stratwitten::fd::{closed_form_eigenvalues, discretize_and_solve, FdProblem, Grid};
use stratwitten::hermite::{p_eigenvalue, PParams};
use stratwitten::morse::{morse_check, nu_point, nu_total, weyl_fit, MorseReport};
use stratwitten::space::{betti, local_model_kernel, CriticalPointModel, StratumDesc};
use stratwitten::spectrum::fmt_num;
use stratwitten::spheres::sphere_link;
use stratwitten::{Ibc, Sign, SpectrumTable};

#[derive(Parser)]
#[command(name = "stratwitten", version, about = "Spectra of Witten Laplacians on cones and local models")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    format: Format,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Clone, Copy, ValueEnum)]
enum SignArg {
    Plus,
    Minus,
}

impl From<SignArg> for Sign {
    fn from(s: SignArg) -> Sign {
        match s {
            SignArg::Plus => Sign::Plus,
            SignArg::Minus => Sign::Minus,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum IbcArg {
    Min,
    Max,
}

impl From<IbcArg> for Ibc {
    fn from(i: IbcArg) -> Ibc {
        match i {
            IbcArg::Min => Ibc::Min,
            IbcArg::Max => Ibc::Max,
        }
    }
}

#[derive(Args)]
struct LinkSource {
    /// Link spectrum JSON file.
    #[arg(long, conflicts_with = "sphere", required_unless_present = "sphere")]
    link: Option<PathBuf>,
    /// Use the round sphere S^k as the link.
    #[arg(long)]
    sphere: Option<usize>,
}

#[derive(Args)]
struct SpectralArgs {
    #[arg(long, value_enum)]
    sign: SignArg,
    #[arg(long, value_enum)]
    ibc: IbcArg,
    #[arg(long)]
    s: f64,
    /// Eigenvalues strictly below cutoff·s are listed.
    #[arg(long)]
    cutoff: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Eigenvalues of H − 2c₁ρ⁻¹d/dρ + c₂ρ⁻² on each admissible core.
    PSpec {
        #[arg(long, allow_hyphen_values = true)]
        c1: f64,
        #[arg(long, allow_hyphen_values = true)]
        c2: f64,
        #[arg(long)]
        s: f64,
        #[arg(long, default_value_t = 5)]
        count: usize,
        /// Restrict to this core exponent.
        #[arg(long, allow_hyphen_values = true)]
        a: Option<f64>,
    },
    /// Spectrum of the length-one or length-two model complex.
    ComplexSpec {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        length: u8,
        #[arg(long, allow_hyphen_values = true)]
        kappa: f64,
        /// Coupling c > 0 of the length-two complex.
        #[arg(long)]
        c: Option<f64>,
        #[command(flatten)]
        spectral: SpectralArgs,
    },
    /// Spectrum of the cone over a link.
    ConeSpec {
        #[command(flatten)]
        source: LinkSource,
        #[command(flatten)]
        spectral: SpectralArgs,
    },
    /// Kernel dimensions of local models from a critical-point list.
    LocalModel {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        ibc: IbcArg,
    },
    /// Kernel dimensions of the Witten complex on a stratum descriptor.
    Betti {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        ibc: IbcArg,
        #[arg(long, value_enum, default_value = "plus")]
        sign: SignArg,
    },
    /// Morse numbers ν of a critical-point list.
    Nu {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        ibc: IbcArg,
    },
    /// Morse inequalities for given β and ν.
    MorseCheck {
        /// Comma-separated Betti numbers.
        #[arg(long)]
        beta: String,
        /// Comma-separated ν; alternatively give --input and --ibc.
        #[arg(long, conflicts_with = "input", required_unless_present = "input")]
        nu: Option<String>,
        #[arg(long, requires = "ibc")]
        input: Option<PathBuf>,
        #[arg(long, value_enum)]
        ibc: Option<IbcArg>,
        /// Exit with status 1 if any inequality fails.
        #[arg(long)]
        assert: bool,
    },
    /// Compare finite-difference eigenvalues with the closed forms.
    FdValidate {
        /// Problem JSON; without it the built-in benchmark set is run.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long = "R", default_value_t = 10.0)]
        r: f64,
        #[arg(long, default_value_t = 5e-3)]
        h: f64,
        #[arg(long, default_value_t = 5)]
        count: usize,
        /// Relative tolerance for --assert.
        #[arg(long, default_value_t = 2e-2)]
        tol: f64,
        #[arg(long)]
        assert: bool,
    },
    /// Weyl-law fit of the counting function of a cone spectrum.
    WeylFit {
        #[command(flatten)]
        source: LinkSource,
        #[command(flatten)]
        spectral: SpectralArgs,
        /// Exit with status 1 unless θ̂ ∈ [lo, hi].
        #[arg(long, num_args = 2, value_names = ["LO", "HI"])]
        assert_theta: Option<Vec<f64>>,
    },
}

enum Failure {
    Input(String),
}

impl From<stratwitten::Error> for Failure {
    fn from(e: stratwitten::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

/// Rendered output in all three formats.
struct Output {
    json: Value,
    rows: Vec<Row>,
    table: String,
}

struct Row {
    degree: usize,
    eigenvalue: f64,
    multiplicity: u64,
    branch: String,
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let de = &mut serde_json::Deserializer::from_str(&text);
    serde_path_to_error::deserialize(de)
        .map_err(|e| Failure::Input(format!("{}: at {}: {}", path.display(), e.path(), e.inner())))
}

/// Rounds every float to 12 significant digits.
fn round_floats(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().unwrap_or(0.0);
            let r: f64 = format!("{x:.11e}").parse().unwrap_or(x);
            json!(r)
        }
        Value::Array(a) => Value::Array(a.into_iter().map(round_floats).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, round_floats(v))).collect()),
        other => other,
    }
}

fn parse_list(s: &str) -> Result<Vec<u64>, Failure> {
    s.split(',')
        .map(|t| t.trim())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<u64>()
                .map_err(|_| Failure::Input(format!("not a non-negative integer: {t:?}")))
        })
        .collect()
}

fn check_spectral(a: &SpectralArgs) -> Result<(), Failure> {
    if !(a.s > 0.0 && a.s.is_finite()) {
        return Err(Failure::Input(format!("--s must be positive, got {}", a.s)));
    }
    if !(a.cutoff > 0.0 && a.cutoff.is_finite()) {
        return Err(Failure::Input(format!("--cutoff must be positive, got {}", a.cutoff)));
    }
    Ok(())
}

fn load_link(src: &LinkSource) -> Result<(LinkSpectrum, String), Failure> {
    match (&src.link, src.sphere) {
        (Some(p), _) => {
            let link: LinkSpectrum = read_json(p)?;
            link.validate()?;
            Ok((link, p.display().to_string()))
        }
        (None, Some(k)) => Ok((sphere_link(k)?, format!("S^{k}"))),
        (None, None) => Err(Failure::Input("one of --link or --sphere is required".into())),
    }
}

fn spectrum_rows(t: &SpectrumTable) -> Vec<Row> {
    if t.ladders.is_empty() {
        return t
            .per_degree
            .iter()
            .enumerate()
            .flat_map(|(d, lv)| {
                lv.iter().map(move |l| Row {
                    degree: d,
                    eigenvalue: l.value,
                    multiplicity: l.mult,
                    branch: String::new(),
                })
            })
            .collect();
    }
    let mut agg: BTreeMap<(usize, String, String), (f64, u64)> = BTreeMap::new();
    for l in &t.ladders {
        for v in l.values_below(t.cutoff) {
            let value = v * t.s;
            let key = (l.degree, format!("{:020.9}", value), l.provenance.to_string());
            agg.entry(key).or_insert((value, 0)).1 += l.mult;
        }
    }
    agg.into_iter()
        .map(|((degree, _, branch), (eigenvalue, multiplicity))| Row {
            degree,
            eigenvalue,
            multiplicity,
            branch,
        })
        .collect()
}

fn spectrum_output(command: &str, params: Value, t: &SpectrumTable) -> Output {
    let rows = spectrum_rows(t);
    let ladders: Vec<Value> = t
        .ladders
        .iter()
        .map(|l| {
            json!({
                "degree": l.degree,
                "branch": l.provenance.as_str(),
                "base": l.symbol,
                "multiplicity": l.mult,
            })
        })
        .collect();
    let mut table = String::new();
    let _ = writeln!(table, "s = {}, eigenvalues below {}·s", fmt_num(t.s), fmt_num(t.cutoff));
    for (d, lv) in t.per_degree.iter().enumerate() {
        let cells: Vec<String> = lv
            .iter()
            .map(|l| {
                if l.mult == 1 {
                    fmt_num(l.value)
                } else {
                    format!("{}×{}", fmt_num(l.value), l.mult)
                }
            })
            .collect();
        let _ = writeln!(table, "degree {d}: {}", cells.join(", "));
    }
    let kd: Vec<String> = t.kernel_dims.iter().map(u64::to_string).collect();
    let _ = writeln!(table, "kernel: ({})", kd.join(", "));
    let spectrum = serde_json::to_value(SpectrumTable {
        ladders: Vec::new(),
        ..t.clone()
    })
    .unwrap_or(Value::Null);
    Output {
        json: json!({
            "command": command,
            "params": params,
            "spectrum": spectrum,
            "ladders": ladders,
        }),
        rows,
        table,
    }
}

fn vector_output(command: &str, params: Value, key: &str, v: &[u64], extra: Map<String, Value>) -> Output {
    let mut obj = Map::new();
    obj.insert("command".into(), json!(command));
    obj.insert("params".into(), params);
    obj.insert(key.into(), json!(v));
    obj.extend(extra);
    let rows = v
        .iter()
        .enumerate()
        .map(|(d, &m)| Row {
            degree: d,
            eigenvalue: 0.0,
            multiplicity: m,
            branch: key.to_string(),
        })
        .collect();
    let s: Vec<String> = v.iter().map(u64::to_string).collect();
    Output {
        json: Value::Object(obj),
        rows,
        table: format!("{key}: ({})\n", s.join(", ")),
    }
}

fn morse_output(beta: &[u64], nu: &[u64], rep: &MorseReport) -> Output {
    let mut table = String::new();
    let _ = writeln!(table, "degree  lhs  rhs  holds");
    for p in &rep.partial_sums {
        let _ = writeln!(table, "{:>6} {:>4} {:>4}  {}", p.degree, p.lhs, p.rhs, p.holds);
    }
    let _ = writeln!(
        table,
        "euler: {} = {}  {}",
        rep.euler_lhs,
        rep.euler_rhs,
        if rep.euler_holds { "holds" } else { "fails" }
    );
    let rows = rep
        .partial_sums
        .iter()
        .map(|p| Row {
            degree: p.degree,
            eigenvalue: 0.0,
            multiplicity: nu.get(p.degree).copied().unwrap_or(0),
            branch: if p.holds { "holds".into() } else { "fails".into() },
        })
        .collect();
    Output {
        json: json!({
            "command": "morse-check",
            "beta": beta,
            "nu": nu,
            "report": serde_json::to_value(rep).unwrap_or(Value::Null),
            "all_hold": rep.all_hold(),
        }),
        rows,
        table,
    }
}

fn benchmark_problems() -> Vec<(String, FdProblem)> {
    let mut out = Vec::new();
    for (c1, c2) in [(0.0, 0.0), (1.0, 0.0), (1.5, 1.0), (0.5, 2.0)] {
        for p in PParams::all(1.0, c1, c2).unwrap_or_default() {
            out.push((
                format!("P c1={} c2={} a={}", fmt_num(c1), fmt_num(c2), fmt_num(p.a)),
                FdProblem::P { c1, c2, s: 1.0, a: Some(p.a) },
            ));
        }
    }
    for (degree, a) in [(0, 0.0), (0, 1.0), (1, 1.0), (1, 0.0)] {
        out.push((
            format!("length-one κ=0 degree {degree} a={a}"),
            FdProblem::LengthOneBlock { kappa: 0.0, s: 1.0, sign: Sign::Plus, degree, a: Some(a) },
        ));
    }
    for index in 0..4 {
        out.push((
            format!("length-two κ=0 c=1 block {index}"),
            FdProblem::LengthTwoBlock { kappa: 0.0, c: 1.0, s: 1.0, sign: Sign::Plus, index, a: None },
        ));
    }
    for (n, r, mu) in [(2, 1, 1.0), (3, 1, 2.0), (3, 2, 2.0), (4, 2, 0.5)] {
        for sign in [Sign::Plus, Sign::Minus] {
            out.push((
                format!("cone n={n} r={r} μ={} {sign:?}", fmt_num(mu)),
                FdProblem::ConeBlock { n, r, mu, s: 1.0, sign },
            ));
        }
    }
    out
}

fn run(cli: &Cli) -> Result<(Output, bool), Failure> {
    let mut ok = true;
    let out = match &cli.command {
        Command::PSpec { c1, c2, s, count, a } => {
            if !(*s > 0.0) {
                return Err(Failure::Input(format!("--s must be positive, got {s}")));
            }
            let params: Vec<PParams> = match a {
                Some(a) => vec![PParams::new(*s, *c1, *c2, *a)?],
                None => PParams::all(*s, *c1, *c2)?,
            };
            if params.is_empty() {
                return Err(Failure::Input("no admissible core exponent".into()));
            }
            let mut branches = Vec::new();
            let mut rows = Vec::new();
            let mut table = String::new();
            for p in &params {
                let ev: Vec<f64> = (0..*count).map(|k| p_eigenvalue(k, p)).collect();
                let label = format!("a={}", fmt_num(p.a));
                let base = format!("(4k+{})s", fmt_num(1.0 + 2.0 * p.sigma));
                let cells: Vec<String> = ev.iter().map(|x| fmt_num(*x)).collect();
                let _ = writeln!(table, "{label} σ={}: {} [{base}]", fmt_num(p.sigma), cells.join(", "));
                for x in &ev {
                    rows.push(Row { degree: 0, eigenvalue: *x, multiplicity: 1, branch: label.clone() });
                }
                branches.push(json!({ "a": p.a, "sigma": p.sigma, "base": base, "eigenvalues": ev }));
            }
            Output {
                json: json!({
                    "command": "p-spec",
                    "params": { "c1": c1, "c2": c2, "s": s },
                    "branches": branches,
                }),
                rows,
                table,
            }
        }
        Command::ComplexSpec { length, kappa, c, spectral } => {
            check_spectral(spectral)?;
            let (sign, ibc) = (spectral.sign.into(), spectral.ibc.into());
            let t = if *length == 1 {
                spectrum_length_one(*kappa, spectral.s, sign, ibc, spectral.cutoff)?
            } else {
                let c = c.ok_or_else(|| Failure::Input("--c is required for --length 2".into()))?;
                spectrum_length_two(*kappa, c, spectral.s, sign, spectral.cutoff)?
            };
            let params = json!({
                "length": length, "kappa": kappa, "c": c, "sign": sign, "ibc": ibc,
                "s": spectral.s, "cutoff": spectral.cutoff,
            });
            spectrum_output("complex-spec", params, &t)
        }
        Command::ConeSpec { source, spectral } => {
            check_spectral(spectral)?;
            let (link, name) = load_link(source)?;
            let (sign, ibc): (Sign, Ibc) = (spectral.sign.into(), spectral.ibc.into());
            let t = assemble_cone_spectrum(&link, sign, ibc, spectral.s, spectral.cutoff)?;
            let params = json!({
                "link": name, "sign": sign, "ibc": ibc, "s": spectral.s, "cutoff": spectral.cutoff,
            });
            spectrum_output("cone-spec", params, &t)
        }
        Command::LocalModel { input, ibc } => {
            let ibc: Ibc = (*ibc).into();
            let points = read_points(input)?;
            let mut kernels = Vec::new();
            let mut table = String::new();
            let mut rows = Vec::new();
            for (i, cp) in points.iter().enumerate() {
                let k = local_model_kernel(cp, ibc)?;
                let cells: Vec<String> = k.iter().map(u64::to_string).collect();
                let _ = writeln!(table, "point {i}: kernel ({})", cells.join(", "));
                for (d, &m) in k.iter().enumerate() {
                    rows.push(Row { degree: d, eigenvalue: 0.0, multiplicity: m, branch: format!("point {i}") });
                }
                kernels.push(json!(k));
            }
            Output {
                json: json!({ "command": "local-model", "params": { "ibc": ibc }, "kernels": kernels }),
                rows,
                table,
            }
        }
        Command::Betti { input, ibc, sign } => {
            let desc: StratumDesc = read_json(input)?;
            let (ibc, sign): (Ibc, Sign) = ((*ibc).into(), (*sign).into());
            let b = betti(&desc, ibc, sign)?;
            vector_output("betti", json!({ "ibc": ibc, "sign": sign }), "betti", &b, Map::new())
        }
        Command::Nu { input, ibc } => {
            let ibc: Ibc = (*ibc).into();
            let points = read_points(input)?;
            let per: Vec<Vec<u64>> = points.iter().map(|p| nu_point(p, ibc)).collect::<Result<_, _>>()?;
            let total = nu_total(&points, ibc)?;
            let mut extra = Map::new();
            extra.insert("per_point".into(), json!(per));
            vector_output("nu", json!({ "ibc": ibc }), "nu", &total, extra)
        }
        Command::MorseCheck { beta, nu, input, ibc, assert } => {
            let beta = parse_list(beta)?;
            let nu = match (nu, input, ibc) {
                (Some(n), _, _) => parse_list(n)?,
                (None, Some(p), Some(i)) => nu_total(&read_points(p)?, (*i).into())?,
                _ => return Err(Failure::Input("give --nu or --input with --ibc".into())),
            };
            let rep = morse_check(&beta, &nu);
            if *assert && !rep.all_hold() {
                ok = false;
            }
            morse_output(&beta, &nu, &rep)
        }
        Command::FdValidate { input, r, h, count, tol, assert } => {
            let grid = Grid::new(*r, *h)?;
            let problems = match input {
                Some(p) => vec![(p.display().to_string(), read_json::<FdProblem>(p)?)],
                None => benchmark_problems(),
            };
            let mut results = Vec::new();
            let mut rows = Vec::new();
            let mut table = String::new();
            for (name, prob) in &problems {
                let fd = discretize_and_solve(prob, &grid, *count)?;
                let exact = closed_form_eigenvalues(prob, *count)?;
                let err = fd
                    .iter()
                    .zip(&exact)
                    .map(|(a, b)| (a - b).abs() / b.abs().max(prob.s()))
                    .fold(0.0, f64::max);
                let pass = err <= *tol;
                ok &= pass || !*assert;
                let cells: Vec<String> = fd.iter().map(|x| format!("{x:.6}")).collect();
                let _ = writeln!(
                    table,
                    "{} {name}: [{}] max rel err {err:.2e}",
                    if pass { "ok  " } else { "FAIL" },
                    cells.join(", ")
                );
                for x in &fd {
                    rows.push(Row { degree: 0, eigenvalue: *x, multiplicity: 1, branch: name.clone() });
                }
                results.push(json!({
                    "name": name,
                    "problem": prob,
                    "fd": fd,
                    "closed_form": exact,
                    "max_rel_err": err,
                    "pass": pass,
                }));
            }
            Output {
                json: json!({
                    "command": "fd-validate",
                    "grid": grid,
                    "tolerance": tol,
                    "results": results,
                }),
                rows,
                table,
            }
        }
        Command::WeylFit { source, spectral, assert_theta } => {
            check_spectral(spectral)?;
            let (link, name) = load_link(source)?;
            let (sign, ibc): (Sign, Ibc) = (spectral.sign.into(), spectral.ibc.into());
            let t = assemble_cone_spectrum(&link, sign, ibc, spectral.s, spectral.cutoff)?;
            let (theta, c) = weyl_fit(&t)?;
            if let Some(b) = assert_theta {
                if !(b[0] <= theta && theta <= b[1]) {
                    ok = false;
                }
            }
            Output {
                json: json!({
                    "command": "weyl-fit",
                    "params": { "link": name, "sign": sign, "ibc": ibc, "s": spectral.s, "cutoff": spectral.cutoff },
                    "theta_hat": theta,
                    "c_hat": c,
                    "count": t.total_count(),
                }),
                rows: Vec::new(),
                table: format!("theta_hat = {}\nc_hat = {}\n", fmt_num(theta), fmt_num(c)),
            }
        }
    };
    Ok((out, ok))
}

/// A single critical point or an array of them.
fn read_points(path: &Path) -> Result<Vec<CriticalPointModel>, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let de = &mut serde_json::Deserializer::from_str(&text);
    let points = if text.trim_start().starts_with('[') {
        serde_path_to_error::deserialize::<_, Vec<CriticalPointModel>>(de)
    } else {
        serde_path_to_error::deserialize::<_, CriticalPointModel>(de).map(|p| vec![p])
    }
    .map_err(|e| Failure::Input(format!("{}: at {}: {}", path.display(), e.path(), e.inner())))?;
    for p in &points {
        p.validate()?;
    }
    Ok(points)
}

fn render(out: &Output, format: Format) -> String {
    match format {
        Format::Json => {
            let v = round_floats(out.json.clone());
            serde_json::to_string_pretty(&v).unwrap_or_default() + "\n"
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let _ = w.write_record(["degree", "eigenvalue", "multiplicity", "branch"]);
            for r in &out.rows {
                let _ = w.write_record([
                    r.degree.to_string(),
                    fmt_num(r.eigenvalue),
                    r.multiplicity.to_string(),
                    r.branch.clone(),
                ]);
            }
            String::from_utf8(w.into_inner().unwrap_or_default()).unwrap_or_default()
        }
        Format::Table => out.table.clone(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((out, ok)) => {
            let text = render(&out, cli.format);
            match &cli.output {
                Some(p) => {
                    if let Err(e) = std::fs::write(p, text) {
                        eprintln!("error: {}: {e}", p.display());
                        return ExitCode::from(2);
                    }
                }
                None => print!("{text}"),
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                eprintln!("assertion failed");
                ExitCode::from(1)
            }
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
