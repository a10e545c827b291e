//! The `fdx` command-line front end.
//!
//! Exit codes: 0 success, 1 I/O or parse failure, 2 invalid scenario or
//! grid, 3 verification mismatch.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::dof_region::{
    compare, corner_points_lemma1, corner_points_lemma2, AuxQuantities, DofRegion, Point,
};
use crate::error::{Error, Result};
use crate::io::{
    approx, exact, parse_interval_list, parse_rational, parse_rational_list, point_json,
    read_scenario, region_json, scenario_to_json,
};
use crate::library::{case_a, case_b, case_c, length_sweep, overlap_sweep, preset, SweepResult};
use crate::oracle::{verify_against, VerifyOptions};
use crate::scenario::{operator_dims, OperatorDims, Scenario};
use crate::{IntervalSet, Rational};

#[derive(Parser, Debug)]
#[command(
    name = "fdx",
    version,
    about = "Spatial degrees-of-freedom regions of a three-node full-duplex network"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Half-duplex and both full-duplex regions with their classification.
    Region(ScenarioCmd),
    /// Corner points from the achievability construction and from the bounds.
    Corners(ScenarioCmd),
    /// Signal-space and operator dimensions.
    Dims(ScenarioCmd),
    /// Pairwise inclusion of the three regions.
    Compare(ScenarioCmd),
    /// Overlap or array-length sweep as CSV.
    Sweep(SweepArgs),
    /// Check the dimension formulas against random finite matrices.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum CaseName {
    A,
    B,
    C,
    S1,
    S2,
    S4,
}

#[derive(Args, Debug)]
struct OutputArgs {
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct Source {
    /// Scenario JSON file.
    #[arg(long = "in", value_name = "PATH")]
    input: Option<PathBuf>,
    /// Built-in scenario family or preset.
    #[arg(long, value_enum)]
    case: Option<CaseName>,
}

#[derive(Args, Debug)]
struct ScenarioArgs {
    #[command(flatten)]
    source: Source,
    /// Base-station array half-length (cases a, c).
    #[arg(long, allow_hyphen_values = true)]
    l_bs: Option<String>,
    /// User array half-length (cases a, c).
    #[arg(long, allow_hyphen_values = true)]
    l_usr: Option<String>,
    /// Common array half-length (case b).
    #[arg(long, allow_hyphen_values = true)]
    l: Option<String>,
    /// Shared support as `lo,hi;lo,hi` (case a).
    #[arg(long, allow_hyphen_values = true)]
    psi: Option<String>,
    /// Forward support (cases b, c).
    #[arg(long, allow_hyphen_values = true)]
    psi_fwd: Option<String>,
    /// Backscatter support (cases b, c).
    #[arg(long, allow_hyphen_values = true)]
    psi_back: Option<String>,
}

#[derive(Args, Debug)]
struct ScenarioCmd {
    #[command(flatten)]
    scenario: ScenarioArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
#[command(group(clap::ArgGroup::new("kind").required(true).args(["overlap", "length"])))]
struct SweepArgs {
    /// Slide a unit forward support across a unit backscatter support.
    #[arg(long)]
    overlap: bool,
    /// Vary the base-station half-length with user arrays fixed.
    #[arg(long)]
    length: bool,
    /// Common half-length for the overlap sweep.
    #[arg(long, default_value = "1/2", allow_hyphen_values = true)]
    l: String,
    #[arg(long, default_value_t = 11)]
    steps: usize,
    #[arg(long, default_value = "1/2", allow_hyphen_values = true)]
    l_usr: String,
    /// Comma-separated, strictly increasing base-station half-lengths.
    #[arg(long, default_value = "1/2,1,2", allow_hyphen_values = true)]
    l_bs: String,
    #[arg(long, default_value = "0,1", allow_hyphen_values = true)]
    psi_fwd: String,
    #[arg(long, default_value = "0,1", allow_hyphen_values = true)]
    psi_back: String,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,
    #[arg(long, default_value_t = 10)]
    trials: usize,
    #[arg(long, env = "FDX_SEED", default_value_t = 0)]
    seed: u64,
    /// Grid density; the smallest integral one is chosen when omitted.
    #[arg(long)]
    density: Option<u64>,
    /// Adds one to the named analytic quantity before comparing.
    #[arg(long, hide = true)]
    corrupt_analytic: Option<String>,
    #[command(flatten)]
    output: OutputArgs,
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } | Error::Io { .. } | Error::BadRange(_) => 1,
        Error::OutOfRange { .. }
        | Error::MalformedPair { .. }
        | Error::InvalidScenario(_)
        | Error::NonIntegralGrid { .. }
        | Error::AmbiguousCorner { .. } => 2,
        Error::IllConditioned { .. } => 3,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{rendered}");
                1
            } else {
                let _ = write!(out, "{rendered}");
                0
            };
        }
    };
    let (output, result) = dispatch(&cli.command);
    let (text, code) = match result {
        Ok(pair) => pair,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return exit_code(&e);
        }
    };
    match &output.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                let _ = writeln!(err, "error: {}: {e}", path.display());
                return 1;
            }
        }
        None => {
            if out.write_all(text.as_bytes()).is_err() {
                return 1;
            }
        }
    }
    if code == 3 {
        let _ = writeln!(err, "verification failed");
    }
    code
}

fn dispatch(command: &Command) -> (&OutputArgs, Result<(String, i32)>) {
    let ok = |r: Result<String>| r.map(|s| (s, 0));
    match command {
        Command::Region(c) => (&c.output, ok(cmd_region(c))),
        Command::Corners(c) => (&c.output, ok(cmd_corners(c))),
        Command::Dims(c) => (&c.output, ok(cmd_dims(c))),
        Command::Compare(c) => (&c.output, ok(cmd_compare(c))),
        Command::Sweep(c) => (&c.output, ok(cmd_sweep(c))),
        Command::Verify(c) => (&c.output, cmd_verify(c)),
    }
}

fn required<'a>(value: &'a Option<String>, flag: &str, case: &str) -> Result<&'a str> {
    value.as_deref().ok_or_else(|| Error::Parse {
        field: flag.into(),
        message: format!("required for --case {case}"),
    })
}

fn load_scenario(a: &ScenarioArgs) -> Result<Scenario> {
    if let Some(path) = &a.source.input {
        return read_scenario(path);
    }
    let case = a.source.case.expect("clap enforces one source");
    let num =
        |v: &Option<String>, flag: &str, case: &str| parse_rational(flag, required(v, flag, case)?);
    let set = |v: &Option<String>, flag: &str, case: &str| {
        parse_interval_list(flag, required(v, flag, case)?)
    };
    match case {
        CaseName::A => case_a(
            num(&a.l_bs, "--l-bs", "a")?,
            num(&a.l_usr, "--l-usr", "a")?,
            &set(&a.psi, "--psi", "a")?,
        ),
        CaseName::B => case_b(
            num(&a.l, "--l", "b")?,
            &set(&a.psi_fwd, "--psi-fwd", "b")?,
            &set(&a.psi_back, "--psi-back", "b")?,
        ),
        CaseName::C => case_c(
            num(&a.l_bs, "--l-bs", "c")?,
            num(&a.l_usr, "--l-usr", "c")?,
            &set(&a.psi_fwd, "--psi-fwd", "c")?,
            &set(&a.psi_back, "--psi-back", "c")?,
        ),
        CaseName::S1 | CaseName::S2 | CaseName::S4 => {
            let name = format!("{case:?}");
            Ok(preset(&name).expect("known preset"))
        }
    }
}

fn to_json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

/// Left-aligned columns separated by two spaces.
fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        padded.join("  ").trim_end().to_owned() + "\n"
    };
    let mut out = line(header.to_vec());
    for row in rows {
        out += &line(row.iter().map(String::as_str).collect());
    }
    out
}

fn csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = header.join(",") + "\n";
    for row in rows {
        out += &(row.join(",") + "\n");
    }
    out
}

fn tabular(format: Format, header: &[&str], rows: &[Vec<String>]) -> String {
    match format {
        Format::Csv => csv(header, rows),
        _ => table(header, rows),
    }
}

fn point_row(name: &str, p: &Point<Rational>) -> Vec<String> {
    vec![
        name.into(),
        p.d1.to_string(),
        p.d2.to_string(),
        approx(&p.d1),
        approx(&p.d2),
    ]
}

fn region_rows(name: &str, r: &DofRegion<Rational>) -> Vec<Vec<String>> {
    r.vertices().iter().map(|p| point_row(name, p)).collect()
}

const POINT_HEADER: [&str; 5] = ["name", "d1", "d2", "d1_approx", "d2_approx"];

fn cmd_region(c: &ScenarioCmd) -> Result<String> {
    let s = load_scenario(&c.scenario)?;
    let summary = compare(&s)?;
    let (prime, double_prime) = corner_points_lemma2(&s)?;
    let format = c.output.format.unwrap_or(Format::Text);
    if format == Format::Json {
        let b = &summary.bounds;
        return Ok(to_json_text(&json!({
            "scenario": scenario_to_json(&s),
            "bounds": {
                "d1_max": exact(&b.d1_max),
                "d2_max": exact(&b.d2_max),
                "d_sum_max": exact(&b.d_sum_max),
                "fdp_sum_max": exact(&summary.fdp_sum_max),
            },
            "vertices": region_json(&summary.fd),
            "hd_vertices": region_json(&summary.hd),
            "fdp_vertices": region_json(&summary.fdp),
            "corners": {"prime": point_json(&prime), "double_prime": point_json(&double_prime)},
            "classification": summary.classification.to_string(),
            "rectangular": {
                "hd": summary.hd.is_rectangular(),
                "fd": summary.fd.is_rectangular(),
                "fdp": summary.fdp.is_rectangular(),
            },
        })));
    }
    let mut rows = region_rows("hd", &summary.hd);
    rows.extend(region_rows("fd", &summary.fd));
    rows.extend(region_rows("fdp", &summary.fdp));
    let mut text = tabular(format, &POINT_HEADER, &rows);
    if format == Format::Text {
        text = format!("classification: {}\n{text}", summary.classification);
    }
    Ok(text)
}

fn cmd_corners(c: &ScenarioCmd) -> Result<String> {
    let s = load_scenario(&c.scenario)?;
    let achievable = corner_points_lemma1(&s)?;
    let (prime, double_prime) = corner_points_lemma2(&s)?;
    let agree = achievable.prime == prime && achievable.double_prime == double_prime;
    let format = c.output.format.unwrap_or(Format::Text);
    if format == Format::Json {
        let aux: serde_json::Map<String, Value> = AuxQuantities::<Rational>::NAMES
            .iter()
            .zip(achievable.aux.values())
            .map(|(n, v)| ((*n).to_owned(), exact(v)))
            .collect();
        return Ok(to_json_text(&json!({
            "scenario": scenario_to_json(&s),
            "achievable": {"prime": point_json(&achievable.prime), "double_prime": point_json(&achievable.double_prime)},
            "from_bounds": {"prime": point_json(&prime), "double_prime": point_json(&double_prime)},
            "aux": aux,
            "agree": agree,
        })));
    }
    let rows = vec![
        point_row("prime", &achievable.prime),
        point_row("double_prime", &achievable.double_prime),
        point_row("prime_from_bounds", &prime),
        point_row("double_prime_from_bounds", &double_prime),
    ];
    let mut text = tabular(format, &POINT_HEADER, &rows);
    if format == Format::Text {
        let aux: Vec<Vec<String>> = AuxQuantities::<Rational>::NAMES
            .iter()
            .zip(achievable.aux.values())
            .map(|(n, v)| vec![(*n).to_owned(), v.to_string(), approx(v)])
            .collect();
        text += "\n";
        text += &table(&["aux", "exact", "approx"], &aux);
        text += &format!("\nagree: {agree}\n");
    }
    Ok(text)
}

fn dims_rows(d: &OperatorDims<Rational>) -> Vec<Vec<String>> {
    OperatorDims::<Rational>::NAMES
        .iter()
        .zip(d.values())
        .map(|(n, v)| vec![(*n).to_owned(), v.to_string(), approx(v)])
        .collect()
}

fn cmd_dims(c: &ScenarioCmd) -> Result<String> {
    let s = load_scenario(&c.scenario)?;
    let d = operator_dims(&s)?;
    match c.output.format.unwrap_or(Format::Text) {
        Format::Json => {
            let dims: serde_json::Map<String, Value> = OperatorDims::<Rational>::NAMES
                .iter()
                .zip(d.values())
                .map(|(n, v)| ((*n).to_owned(), exact(v)))
                .collect();
            Ok(to_json_text(
                &json!({"scenario": scenario_to_json(&s), "dims": dims}),
            ))
        }
        f => Ok(tabular(f, &["quantity", "exact", "approx"], &dims_rows(&d))),
    }
}

fn cmd_compare(c: &ScenarioCmd) -> Result<String> {
    let s = load_scenario(&c.scenario)?;
    let summary = compare(&s)?;
    let cls = summary.classification;
    let pairs: Vec<(&str, String)> = vec![
        ("classification", cls.to_string()),
        ("hd_fd", format!("{:?}", cls.hd_fd)),
        ("fd_fdp", format!("{:?}", cls.fd_fdp)),
        ("hd_fdp", format!("{:?}", cls.hd_fdp)),
        ("d_sum_hd", summary.hd.max_sum().to_string()),
        ("d_sum_fd", summary.fd.max_sum().to_string()),
        ("d_sum_fdp", summary.fdp.max_sum().to_string()),
        ("rect_fd", summary.fd.is_rectangular().to_string()),
        ("rect_fdp", summary.fdp.is_rectangular().to_string()),
    ];
    match c.output.format.unwrap_or(Format::Text) {
        Format::Json => {
            let mut obj: serde_json::Map<String, Value> = pairs
                .into_iter()
                .map(|(k, v)| (k.to_owned(), Value::String(v)))
                .collect();
            obj.insert("scenario".into(), scenario_to_json(&s));
            Ok(to_json_text(&Value::Object(obj)))
        }
        f => {
            let rows: Vec<Vec<String>> = pairs
                .into_iter()
                .map(|(k, v)| vec![k.to_owned(), v])
                .collect();
            Ok(tabular(f, &["key", "value"], &rows))
        }
    }
}

fn sweep_json(r: &SweepResult<Rational>) -> Value {
    let rows: Vec<Value> = r
        .rows
        .iter()
        .map(|row| {
            json!({
                "param": exact(&row.param),
                "d1_max": exact(&row.d1_max),
                "d2_max": exact(&row.d2_max),
                "d_sum_fd": exact(&row.d_sum_fd),
                "d_sum_fdp": exact(&row.d_sum_fdp),
                "class": row.classification.to_string(),
                "rect_fd": row.rect_fd,
            })
        })
        .collect();
    json!({"parameter": r.parameter, "rows": rows})
}

fn cmd_sweep(c: &SweepArgs) -> Result<String> {
    let result = if c.overlap {
        overlap_sweep(parse_rational("--l", &c.l)?, c.steps)?
    } else {
        let fwd: IntervalSet = parse_interval_list("--psi-fwd", &c.psi_fwd)?;
        let back = parse_interval_list("--psi-back", &c.psi_back)?;
        let l_usr = parse_rational("--l-usr", &c.l_usr)?;
        if !(l_usr > Rational::from_integer(0)) {
            return Err(Error::BadRange(format!("--l-usr must be > 0, got {l_usr}")));
        }
        let l_bs = parse_rational_list("--l-bs", &c.l_bs)?;
        if let Some(bad) = l_bs.iter().find(|l| **l <= Rational::from_integer(0)) {
            return Err(Error::BadRange(format!(
                "--l-bs values must be > 0, got {bad}"
            )));
        }
        length_sweep(l_usr, &l_bs, &fwd, &back)?
    };
    Ok(match c.output.format.unwrap_or(Format::Csv) {
        Format::Json => to_json_text(&sweep_json(&result)),
        Format::Csv => result.to_csv(),
        Format::Text => {
            let mut lines = result
                .to_csv()
                .lines()
                .map(|l| l.split(',').map(str::to_owned).collect::<Vec<_>>())
                .collect::<Vec<_>>();
            let header = lines.remove(0);
            let header: Vec<&str> = header.iter().map(String::as_str).collect();
            table(&header, &lines)
        }
    })
}

fn corrupt(d: &mut OperatorDims<Rational>, name: &str) -> Result<()> {
    let idx = OperatorDims::<Rational>::NAMES
        .iter()
        .position(|n| *n == name)
        .ok_or_else(|| Error::Parse {
            field: "--corrupt-analytic".into(),
            message: format!("unknown quantity {name:?}"),
        })?;
    let mut i = 0;
    *d = d.map(|v| {
        let bumped = if i == idx {
            v + Rational::from_integer(1)
        } else {
            *v
        };
        i += 1;
        bumped
    });
    Ok(())
}

fn cmd_verify(c: &VerifyArgs) -> Result<(String, i32)> {
    let s = load_scenario(&c.scenario)?;
    let mut analytic = operator_dims(&s)?;
    if let Some(name) = &c.corrupt_analytic {
        corrupt(&mut analytic, name)?;
    }
    let opts = VerifyOptions {
        trials: c.trials,
        seed: c.seed,
        density: c.density,
    };
    let report = verify_against(&s, &opts, &analytic)?;
    let code = if report.passed() { 0 } else { 3 };
    let text = match c.output.format.unwrap_or(Format::Text) {
        Format::Json => to_json_text(&report.to_json()),
        f => {
            let status = |ok: bool| if ok { "pass" } else { "FAIL" }.to_owned();
            let mut rows: Vec<Vec<String>> = report
                .quantities
                .iter()
                .map(|q| {
                    let g = Rational::from_integer(report.grid_density as i64);
                    vec![
                        q.name.to_owned(),
                        (q.analytic * g).to_string(),
                        format!("{}..{}", q.numerical_min, q.numerical_max),
                        q.gap.to_string(),
                        status(q.gap == 0),
                    ]
                })
                .collect();
            let g = Rational::from_integer(report.grid_density as i64);
            rows.push(vec![
                "preimage_p12".into(),
                (report.preimage_dim_generic * g).to_string(),
                (report.preimage_dim_numerical * g).to_string(),
                report.preimage_gap.to_string(),
                status(report.preimage_gap == 0),
            ]);
            let mut text = tabular(
                f,
                &["quantity", "expected", "numerical", "gap", "status"],
                &rows,
            );
            if f == Format::Text {
                text = format!(
                    "scenario: {}\ngrid density: {}  trials: {}  seed: {}\n{text}corner: {}\nill-conditioned trials: {}\nresult: {}\n",
                    if s.label.is_empty() { "(unnamed)" } else { &s.label },
                    report.grid_density,
                    report.trials,
                    report.seed,
                    report.corner.label(),
                    report.ill_conditioned_trials,
                    if report.passed() { "PASS" } else { "FAIL" },
                );
            }
            text
        }
    };
    Ok((text, code))
}
