//! Command-line interface. Every command builds a [`Table`] (or a trace)
//! in memory and writes it only on success, so error paths produce no
//! partial output.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::averaging::{self, ReplayOutcome};
use crate::dims::{self, GroupSpec, NamedFamily, Sourced};
use crate::error::{Error, Result};
use crate::parabolic;
use crate::rational;
use crate::roots::{build_root_system, Family, Functional, RootSystem, RootSystemType};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Table,
    JsonLines,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "rescodim", version, about = "Restricted root systems, resonant codimension and averaging traces")]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Table)]
    pub format: OutputFormat,
    /// Write output to this file instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for randomly generated functionals.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the roots with simple-root coefficients, heights and coarse classes.
    Roots { family: Family, rank: usize },
    /// Per type: Dynkin bonds, choice of a_1, highest roots and the resonant
    /// codimension of every maximal parabolic.
    Table {
        #[arg(long, default_value_t = 8)]
        max_rank: usize,
    },
    /// Every standard parabolic of one type.
    Parabolics { family: Family, rank: usize },
    /// Run the averaging pipeline and print its trace.
    Average {
        family: Family,
        rank: usize,
        /// Ambient coordinates, comma-separated rationals; random when omitted.
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
    },
    /// Check a trace file in any supported format.
    Replay { path: PathBuf },
    /// Consistency checks; exit status 1 if any row fails.
    Verify {
        #[command(subcommand)]
        what: Verify,
    },
    /// Critical dimensions of a group given as `A3,A1*` (`*` = compact).
    Dims {
        spec: String,
        #[arg(long)]
        dim_m: Option<usize>,
        /// The action preserves a volume.
        #[arg(long)]
        volume: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum Verify {
    /// Exhaustive parabolicity check of closed subsets within the codimension bound.
    Prop25 {
        #[arg(long, default_value_t = 3)]
        max_rank: usize,
    },
    /// Choice of b^, root strings and random averaging runs for every type.
    Remark53 {
        #[arg(long, default_value_t = 8)]
        max_rank: usize,
        #[arg(long, default_value_t = 10)]
        samples: usize,
    },
    /// Tabulated critical dimensions against computed ones.
    Dims,
}

/// Rows of string cells under fixed headers; rendered identically in all
/// three formats.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(headers: &[&str]) -> Self {
        Table {
            headers: headers.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Table => self.render_aligned(),
            OutputFormat::JsonLines => self
                .rows
                .iter()
                .map(|row| {
                    let obj: serde_json::Map<String, serde_json::Value> = self
                        .headers
                        .iter()
                        .zip(row)
                        .map(|(h, v)| (h.clone(), serde_json::Value::String(v.clone())))
                        .collect();
                    serde_json::Value::Object(obj).to_string() + "\n"
                })
                .collect(),
            OutputFormat::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&self.headers).expect("writing to memory");
                for row in &self.rows {
                    w.write_record(row).expect("writing to memory");
                }
                String::from_utf8(w.into_inner().expect("writing to memory")).expect("utf-8 cells")
            }
        }
    }

    fn render_aligned(&self) -> String {
        let widths: Vec<usize> = (0..self.headers.len())
            .map(|c| {
                self.rows
                    .iter()
                    .map(|r| r[c].chars().count())
                    .chain([self.headers[c].chars().count()])
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let mut out = String::new();
        for row in std::iter::once(&self.headers).chain(&self.rows) {
            let cells: Vec<String> = row
                .iter()
                .zip(&widths)
                .map(|(cell, &w)| format!("{cell:<w$}"))
                .collect();
            let _ = writeln!(out, "{}", cells.join("  ").trim_end());
        }
        out
    }
}

/// Exit status for a library error: 2 for bad input, 3 for a failed side
/// condition, 1 for falsification and internal inconsistencies.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::SideCondition { .. } => 3,
        Error::Falsification(_)
        | Error::Orientation(_)
        | Error::NoRootString { .. }
        | Error::AmbiguousSecondHighest { .. }
        | Error::SearchExhausted { .. }
        | Error::NotClosed => 1,
        _ => 2,
    }
}

/// Output of a successful command and the status to exit with.
struct Output {
    text: String,
    code: i32,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, code: 0 }
    }
}

fn system(family: Family, rank: usize) -> Result<RootSystem> {
    build_root_system(RootSystemType::new(family, rank)?)
}

fn yes_no(b: bool) -> String {
    if b { "pass" } else { "FAIL" }.to_string()
}

fn cmd_roots(rs: &RootSystem) -> Table {
    let mut t = Table::new(&["index", "coefficients", "ambient", "height", "positive", "class"]);
    for i in 0..rs.num_roots() {
        t.push(vec![
            i.to_string(),
            rs.fmt_coeffs(i),
            rational::fmt_vec(&rs.root(i).coords, ","),
            rs.height(i).to_string(),
            rs.is_positive(i).to_string(),
            rs.class_of(i).to_string(),
        ]);
    }
    t
}

fn dynkin_string(rs: &RootSystem) -> String {
    rs.dynkin_edges()
        .iter()
        .map(|&(i, j, bond)| {
            let sym = match bond {
                1 => "-",
                2 => "=",
                _ => "≡",
            };
            format!("{}{sym}{}", i + 1, j + 1)
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn cmd_table(max_rank: usize) -> Result<Table> {
    let mut t = Table::new(&[
        "type",
        "dynkin",
        "bourbaki_order",
        "delta",
        "delta_prime",
        "beta_hat",
        "codimensions",
        "r",
    ]);
    for ty in RootSystemType::all_up_to(1, max_rank) {
        let rs = build_root_system(ty)?;
        let order = (0..rs.rank())
            .map(|j| rs.bourbaki_label(j).to_string())
            .collect::<Vec<_>>()
            .join(",");
        let delta_prime = rs
            .second_highest_root()
            .map(|i| rs.fmt_coeffs(i))
            .unwrap_or_else(|_| "-".into());
        let beta_hat = if rs.rank() >= 2 {
            rs.fmt_coeffs(averaging::select_beta_hat(&rs)?)
        } else {
            "-".into()
        };
        let table = parabolic::maximal_parabolic_table(&rs);
        let codims = table
            .iter()
            .map(|(j, c)| format!("({j},{c})"))
            .collect::<Vec<_>>()
            .join(" ");
        let r = table.iter().map(|&(_, c)| c).min().expect("rank >= 1");
        t.push(vec![
            ty.to_string(),
            dynkin_string(&rs),
            order,
            rs.fmt_coeffs(rs.highest_root()),
            delta_prime,
            beta_hat,
            codims,
            r.to_string(),
        ]);
    }
    Ok(t)
}

fn cmd_parabolics(rs: &RootSystem) -> Result<Table> {
    let l = rs.rank();
    let mut t = Table::new(&["kept_simple_roots", "roots", "resonant_codimension", "maximal"]);
    for mask in 0u32..(1 << l) {
        let levi: Vec<usize> = (0..l).filter(|j| mask >> j & 1 == 1).collect();
        let p = parabolic::standard_parabolic(rs, &levi)?;
        let label = if levi.is_empty() {
            "-".to_string()
        } else {
            levi.iter().map(|j| (j + 1).to_string()).collect::<Vec<_>>().join(",")
        };
        t.push(vec![
            label,
            p.roots().len().to_string(),
            parabolic::resonant_codimension(rs, p.roots()).to_string(),
            (levi.len() + 1 == l).to_string(),
        ]);
    }
    Ok(t)
}

fn cmd_average(rs: &RootSystem, lambda: Option<&str>, seed: u64, format: OutputFormat) -> Result<String> {
    let lambda = match lambda {
        Some(s) => {
            let v = rational::parse_vec(s)?;
            rs.check_dim(&v)?;
            Functional::new(v)
        }
        None => averaging::random_lambda(rs, &mut ChaCha8Rng::seed_from_u64(seed)),
    };
    let trace = averaging::run_averaging(rs, &lambda)?;
    Ok(match format {
        OutputFormat::Table => averaging::write_text(rs, &trace),
        OutputFormat::JsonLines => averaging::write_json(rs, &trace),
        OutputFormat::Csv => averaging::write_csv(rs, &trace),
    })
}

fn cmd_replay(path: &PathBuf, format: OutputFormat) -> Result<Output> {
    let input = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    let (trace, _) = averaging::parse_trace(&input)?;
    let outcome = averaging::replay(&trace);
    let mut t = Table::new(&["result", "step", "reason"]);
    let code = match &outcome {
        ReplayOutcome::Valid => {
            t.push(vec!["valid".into(), "-".into(), "-".into()]);
            0
        }
        ReplayOutcome::Invalid { step, reason } => {
            let step = step.map_or("header".to_string(), |k| (k + 1).to_string());
            t.push(vec!["invalid".into(), step, reason.clone()]);
            1
        }
    };
    Ok(Output {
        text: t.render(format),
        code,
    })
}

fn cmd_verify_prop25(max_rank: usize) -> Result<(Table, bool)> {
    if max_rank > parabolic::EXHAUSTIVE_MAX_RANK {
        return Err(Error::Capability(format!(
            "exhaustive verification is limited to rank <= {}",
            parabolic::EXHAUSTIVE_MAX_RANK
        )));
    }
    let mut t = Table::new(&[
        "type", "classes", "r", "subsets", "closed", "within_bound", "confirmed", "counterexamples", "status",
    ]);
    let mut all = true;
    for ty in RootSystemType::all_up_to(1, max_rank) {
        let rep = parabolic::verify_prop25(&build_root_system(ty)?)?;
        all &= rep.passed();
        t.push(vec![
            ty.to_string(),
            rep.classes.to_string(),
            rep.minimal_codimension.to_string(),
            rep.subsets_examined.to_string(),
            rep.closed.to_string(),
            rep.within_bound.to_string(),
            rep.confirmed.to_string(),
            rep.counterexamples.len().to_string(),
            yes_no(rep.passed()),
        ]);
    }
    Ok((t, all))
}

fn cmd_verify_remark53(max_rank: usize, samples: usize, seed: u64) -> Result<(Table, bool)> {
    let mut t = Table::new(&[
        "type", "beta_hat", "string_length", "delta_a1", "runs", "valid_runs", "status",
    ]);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut all = true;
    for ty in RootSystemType::all_up_to(2, max_rank) {
        let rs = build_root_system(ty)?;
        let bh = averaging::select_beta_hat(&rs)?;
        let string = averaging::root_string(&rs, rs.simple(0), bh)?;
        let delta_a1 = rs.coefficients(rs.highest_root())[0];
        let expected = if ty.family().uses_second_highest() { 2 } else { 1 };
        let mut valid = 0;
        for _ in 0..samples {
            let lambda = averaging::random_lambda(&rs, &mut rng);
            if let Ok(trace) = averaging::run_averaging(&rs, &lambda) {
                if averaging::replay_with(&rs, &trace).is_valid() {
                    valid += 1;
                }
            }
        }
        let ok = delta_a1 == expected && valid == samples;
        all &= ok;
        t.push(vec![
            ty.to_string(),
            rs.fmt_coeffs(bh),
            string.len().to_string(),
            delta_a1.to_string(),
            samples.to_string(),
            valid.to_string(),
            yes_no(ok),
        ]);
    }
    Ok((t, all))
}

fn opt(v: Option<Sourced>) -> String {
    v.map_or("-".into(), |s| s.value.to_string())
}

fn cmd_verify_dims() -> Result<(Table, bool)> {
    let mut t = Table::new(&["group", "n", "d", "d_prime", "v", "r", "status"]);
    let mut all = true;
    for family in NamedFamily::ALL {
        for n in family.range() {
            let (row, ok) = match dims::known_dims(family, n) {
                Ok(rep) => {
                    let ok = rep.v.is_some_and(|v| rep.r.value <= v.value);
                    (
                        vec![
                            rep.group,
                            opt(rep.n),
                            opt(rep.d),
                            opt(rep.d_prime),
                            opt(rep.v),
                            rep.r.value.to_string(),
                            yes_no(ok),
                        ],
                        ok,
                    )
                }
                Err(e) => {
                    let mut row = vec![family.name(n)];
                    row.extend(std::iter::repeat_n("-".to_string(), 5));
                    row.push(format!("FAIL: {e}"));
                    (row, false)
                }
            };
            all &= ok;
            t.push(row);
        }
    }
    for ty in RootSystemType::all_up_to(2, 8) {
        if !ty.family().is_reduced() {
            continue;
        }
        let ok = dims::r_at_most_v(ty)?;
        all &= ok;
        let v = dims::v_of_split(ty)?;
        let r = dims::r_of(&GroupSpec::new(vec![(ty, false)])?)?;
        t.push(vec![
            format!("split {ty}"),
            "-".into(),
            "-".into(),
            "-".into(),
            v.to_string(),
            r.to_string(),
            yes_no(ok),
        ]);
    }
    Ok((t, all))
}

fn cmd_dims(spec: &str, dim_m: Option<usize>, volume: bool) -> Result<Table> {
    let spec: GroupSpec = spec.parse()?;
    let rep = dims::report_for(&spec)?;
    let mut t = Table::new(&["quantity", "value", "source"]);
    let mut field = |name: &str, v: Option<Sourced>| {
        if let Some(s) = v {
            t.push(vec![name.into(), s.value.to_string(), s.source.as_str().into()]);
        }
    };
    field("r", Some(rep.r));
    field("v", rep.v);
    field("d_prime", rep.d_prime);
    if let Some(m) = dim_m {
        let h = dims::theorem_hypothesis(&spec, m, volume)?;
        let clause = h.clause.map_or("none".to_string(), |c| format!("clause ({})", c.number()));
        t.push(vec!["hypothesis".into(), clause, "computed".into()]);
        if !h.rank_one_factors.is_empty() {
            t.push(vec![
                "rank_one_factors".into(),
                h.rank_one_factors.join(" "),
                "computed".into(),
            ]);
        }
    }
    Ok(t)
}

fn dispatch(cli: &Cli) -> Result<Output> {
    let f = cli.format;
    let checked = |(t, ok): (Table, bool)| Output {
        text: t.render(f),
        code: if ok { 0 } else { 1 },
    };
    match &cli.command {
        Command::Roots { family, rank } => Ok(Output::ok(cmd_roots(&system(*family, *rank)?).render(f))),
        Command::Table { max_rank } => Ok(Output::ok(cmd_table(*max_rank)?.render(f))),
        Command::Parabolics { family, rank } => {
            Ok(Output::ok(cmd_parabolics(&system(*family, *rank)?)?.render(f)))
        }
        Command::Average { family, rank, lambda } => Ok(Output::ok(cmd_average(
            &system(*family, *rank)?,
            lambda.as_deref(),
            cli.seed,
            f,
        )?)),
        Command::Replay { path } => cmd_replay(path, f),
        Command::Verify { what } => match what {
            Verify::Prop25 { max_rank } => cmd_verify_prop25(*max_rank).map(checked),
            Verify::Remark53 { max_rank, samples } => {
                cmd_verify_remark53(*max_rank, *samples, cli.seed).map(checked)
            }
            Verify::Dims => cmd_verify_dims().map(checked),
        },
        Command::Dims { spec, dim_m, volume } => Ok(Output::ok(cmd_dims(spec, *dim_m, *volume)?.render(f))),
    }
}

/// Parses arguments, runs the command and writes its output. Returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(&cli) {
        Ok(out) => {
            let written = match &cli.out {
                Some(path) => std::fs::write(path, &out.text).map_err(|e| e.to_string()),
                None => {
                    print!("{}", out.text);
                    Ok(())
                }
            };
            match written {
                Ok(()) => out.code,
                Err(e) => {
                    eprintln!("error: cannot write output: {e}");
                    2
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
