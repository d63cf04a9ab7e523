//! `dt`: parameters, witness trees, closures, constructions, growth
//! exploration and verification suites for decision tables.
//!
//! Exit status: 0 on success, 1 when a verification finds a violation, 2 on
//! usage or input errors.

use clap::{Args, Parser, Subcommand, ValueEnum};
use closed_tables::closure::{ClassEnumeration, Limits};
use closed_tables::construct::{
    adversarial_relabel, fig5_family, isolate_row, lemma12_construct, lemma14_construct,
    single_column_generators, threshold_table, BoolFn, Phi, ThresholdSystem,
};
use closed_tables::explore::{builtin, growth, GrowthFn, Scenario};
use closed_tables::format::{parse_measure, parse_table, render_measure, render_table};
use closed_tables::harness::{suite_measures, verify, Suite, VerifySuiteConfig};
use closed_tables::{full_report, psi_d, psi_s, ComplexityMeasure, DecisionTable};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "dt", version, about = "Exact computation for decision tables with 0-1 decisions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print all parameters of a table with witnesses.
    Params {
        table: PathBuf,
        #[command(flatten)]
        measure: MeasureArg,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Write an optimal deterministic or strongly nondeterministic tree.
    Tree {
        #[arg(value_enum)]
        kind: TreeKind,
        table: PathBuf,
        #[command(flatten)]
        measure: MeasureArg,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Enumerate the closure of a table into a directory.
    Closure {
        table: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        limit: usize,
    },
    /// Run a construction.
    Construct {
        #[command(subcommand)]
        which: Construction,
    },
    /// Growth functions over a finitely generated closed class.
    Explore(ExploreArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
}

#[derive(Args, Clone)]
struct MeasureArg {
    /// `.cm` file, `depth`, or `sum:a.cm,b.cm` / `max:a.cm,b.cm`.
    #[arg(short, long)]
    measure: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Kv,
}

#[derive(Clone, Copy, ValueEnum)]
enum TreeKind {
    Det,
    Snd,
}

#[derive(Subcommand)]
enum Construction {
    /// Closure member with psi_d = W_psi = S_psi equal to S_psi of the input.
    Lemma12 {
        table: PathBuf,
        #[command(flatten)]
        measure: MeasureArg,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Adversarial relabeling of a critical table.
    Lemma13 {
        table: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Deep closure member from a smallest separating column set.
    Lemma14 {
        table: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Keep a cheapest separator of one row and label only that row 1.
    Isolate {
        table: PathBuf,
        /// Row values, comma separated.
        #[arg(long)]
        row: String,
        #[command(flatten)]
        measure: MeasureArg,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// The table T_n for a tabulated phi, with its measure.
    Fig5 {
        /// phi(1), phi(2), ..., comma separated.
        #[arg(long)]
        phi: String,
        #[arg(long)]
        n: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        measure_out: Option<PathBuf>,
    },
    /// Table of a threshold system.
    Thresholds {
        /// Strictly increasing thresholds, comma separated.
        #[arg(long)]
        at: String,
        /// zero, one, first, and, or, xor
        #[arg(long, default_value = "first")]
        nu: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Single-column generators with their measure.
    Gens {
        /// Positive integers, comma separated.
        #[arg(long)]
        d: String,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct ExploreArgs {
    #[arg(long = "fn")]
    function: String,
    /// Directory of `.dt` files or `builtin:idN`, `builtin:thm3:a,b,..`,
    /// `builtin:fig5:p1,p2,..`.
    #[arg(long)]
    gen: String,
    #[command(flatten)]
    measure: MeasureArg,
    #[arg(long, default_value_t = 5)]
    max_n: u64,
    #[arg(long, default_value_t = 1_000_000)]
    limit_tables: usize,
    #[arg(long, default_value_t = 20)]
    limit_columns: usize,
    #[arg(long, default_value_t = 20)]
    limit_rows: usize,
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    suite: String,
    #[arg(long, default_value_t = 2)]
    k: u32,
    #[arg(long, default_value_t = 3)]
    max_cols: usize,
    #[arg(long, default_value_t = 4)]
    max_rows: usize,
    /// 0 enumerates every table within the bounds.
    #[arg(long, default_value_t = 0)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    measure: MeasureArg,
    /// Where counterexamples are written.
    #[arg(long, default_value = ".")]
    dump: PathBuf,
}

enum Failure {
    Input(String),
    Verification(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_table(path: &Path) -> Result<DecisionTable, Failure> {
    parse_table(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_measure(spec: &str) -> Result<ComplexityMeasure, Failure> {
    if spec == "depth" || spec == "h" {
        return Ok(ComplexityMeasure::Depth);
    }
    for (prefix, sum) in [("sum:", true), ("max:", false)] {
        if let Some(list) = spec.strip_prefix(prefix) {
            let children = list
                .split(',')
                .map(load_measure)
                .collect::<Result<Vec<_>, _>>()?;
            return Ok(if sum {
                ComplexityMeasure::SumOf(children)
            } else {
                ComplexityMeasure::MaxOf(children)
            });
        }
    }
    let path = Path::new(spec);
    parse_measure(&read(path)?).map_err(|e| Failure::Input(format!("{spec}: {e}")))
}

impl MeasureArg {
    fn get(&self) -> Result<Option<ComplexityMeasure>, Failure> {
        self.measure.as_deref().map(load_measure).transpose()
    }

    fn or_depth(&self) -> Result<ComplexityMeasure, Failure> {
        Ok(self.get()?.unwrap_or(ComplexityMeasure::Depth))
    }
}

fn emit(output: &Option<PathBuf>, text: &str) -> Outcome {
    match output {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Input(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn numbers<T: std::str::FromStr>(s: &str) -> Result<Vec<T>, Failure> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse()
                .map_err(|_| Failure::Input(format!("bad number `{x}` in `{s}`")))
        })
        .collect()
}

fn params(table: &Path, measure: &MeasureArg, format: Format) -> Outcome {
    let t = load_table(table)?;
    let psi = measure.or_depth()?;
    let r = full_report(&psi, &t)?;
    match format {
        Format::Text => print!("{r}"),
        Format::Kv => print!("{}", r.to_kv()),
    }
    if r.is_consistent() {
        Ok(())
    } else {
        Err(Failure::Verification("report is inconsistent".into()))
    }
}

fn tree(kind: TreeKind, table: &Path, measure: &MeasureArg, output: &Option<PathBuf>) -> Outcome {
    let t = load_table(table)?;
    let psi = measure.or_depth()?;
    let (value, tree) = match kind {
        TreeKind::Det => psi_d(&psi, &t)?,
        TreeKind::Snd => psi_s(&psi, &t)?,
    };
    eprintln!("cost {value}");
    match tree {
        Some(tree) => emit(output, &format!("{tree}\n")),
        None => Err(Failure::Input(match kind {
            TreeKind::Det => "the empty table has no deterministic tree".into(),
            TreeKind::Snd => "constant tables have no strongly nondeterministic tree".into(),
        })),
    }
}

fn closure(table: &Path, out: &Path, limit: usize) -> Outcome {
    let t = load_table(table)?;
    fs::create_dir_all(out)?;
    let limits = Limits {
        max_tables: limit,
        ..Limits::default()
    };
    let mut index = String::from("# file\tkey\tremoved\tnu\n");
    let mut io_error = None;
    let summary = ClassEnumeration::new(vec![t], limits).run(|m| {
        let name = format!("{:06}.dt", index.lines().count() - 1);
        let removed: Vec<String> = m.removed.iter().map(|a| a.to_string()).collect();
        let nu: Vec<String> = m
            .table
            .rows()
            .iter()
            .zip(&m.labels)
            .map(|(r, l)| {
                let v: Vec<String> = r.values.iter().map(|x| x.to_string()).collect();
                format!("{}:{l}", v.join(""))
            })
            .collect();
        index.push_str(&format!(
            "{name}\t{}\t{{{}}}\t{{{}}}\n",
            m.key,
            removed.join(","),
            nu.join(",")
        ));
        if let Err(e) = fs::write(out.join(&name), render_table(&m.table)) {
            io_error.get_or_insert(e);
        }
    });
    if let Some(e) = io_error {
        return Err(e.into());
    }
    index.push_str(&format!(
        "# members {} exhausted {}\n",
        summary.emitted,
        summary.exhausted()
    ));
    fs::write(out.join("index.tsv"), index)?;
    println!("{} members, exhausted: {}", summary.emitted, summary.exhausted());
    Ok(())
}

fn construct(which: &Construction) -> Outcome {
    match which {
        Construction::Lemma12 {
            table,
            measure,
            output,
        } => {
            let t = load_table(table)?;
            let ext = lemma12_construct(&measure.or_depth()?, &t)?;
            emit(output, &render_table(&ext.table))
        }
        Construction::Lemma13 { table, output } => {
            let adv = adversarial_relabel(&load_table(table)?)?;
            emit(output, &render_table(&adv.table))
        }
        Construction::Lemma14 { table, output } => {
            let w = lemma14_construct(&load_table(table)?)?;
            emit(output, &render_table(&w.table))
        }
        Construction::Isolate {
            table,
            row,
            measure,
            output,
        } => {
            let t = load_table(table)?;
            let row: Vec<u32> = numbers(row)?;
            let ext = isolate_row(&measure.or_depth()?, &t, &row)?;
            emit(output, &render_table(&ext.table))
        }
        Construction::Fig5 {
            phi,
            n,
            output,
            measure_out,
        } => {
            let mut values = vec![0];
            values.extend(numbers::<u64>(phi)?);
            let phi = Phi::new(values)?;
            let (family, psi) = fig5_family(&phi)?;
            let member = family
                .iter()
                .find(|f| f.n == *n)
                .ok_or_else(|| Failure::Input(format!("n = {n} is not tabulated")))?;
            eprintln!("phi(n) = {} * {} + {}", member.l, member.n, member.j);
            if let Some(p) = measure_out {
                fs::write(p, render_measure(&psi)?)?;
            }
            emit(output, &render_table(&member.table))
        }
        Construction::Thresholds { at, nu, output } => {
            let sys = ThresholdSystem::new(numbers(at)?)?;
            let f = BoolFn::parse(nu).ok_or_else(|| Failure::Input(format!("unknown nu `{nu}`")))?;
            emit(output, &render_table(&threshold_table(&sys, |v| f.eval(v))))
        }
        Construction::Gens { d, out } => {
            let (tables, psi) = single_column_generators(&numbers(d)?)?;
            fs::create_dir_all(out)?;
            for t in &tables {
                fs::write(out.join(format!("{}.dt", t.columns()[0])), render_table(t))?;
            }
            fs::write(out.join("measure.cm"), render_measure(&psi)?)?;
            println!("{} generators", tables.len());
            Ok(())
        }
    }
}

fn load_generators(spec: &str) -> Result<Scenario, Failure> {
    if let Some(b) = spec.strip_prefix("builtin:") {
        return Ok(builtin(b)?);
    }
    let dir = Path::new(spec);
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| Failure::Input(format!("{spec}: {e}")))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "dt"))
        .collect();
    paths.sort();
    let generators = paths
        .iter()
        .map(|p| load_table(p))
        .collect::<Result<Vec<_>, _>>()?;
    let cm = dir.join("measure.cm");
    let measure = if cm.exists() {
        Some(load_measure(&cm.to_string_lossy())?)
    } else {
        None
    };
    Ok(Scenario {
        name: spec.to_string(),
        generators,
        measure,
        steps: None,
    })
}

fn explore(a: &ExploreArgs) -> Outcome {
    let function: GrowthFn = a.function.parse()?;
    let sc = load_generators(&a.gen)?;
    let psi = match a.measure.get()? {
        Some(m) => m,
        None => sc.measure.clone().unwrap_or(ComplexityMeasure::Depth),
    };
    let limits = Limits {
        max_tables: a.limit_tables,
        max_columns: a.limit_columns,
        max_rows: a.limit_rows,
    };
    let r = growth(function, &sc.generators, &sc.name, &psi, a.max_n, limits)?;
    print!("{r}");
    if let Some(steps) = &sc.steps {
        let h: Vec<String> = (0..=a.max_n).map(|n| steps.eval(n).to_string()).collect();
        println!("H_D      {}", h.join(" "));
    }
    if let Some(p) = &a.csv {
        fs::write(p, r.to_csv())?;
    }
    Ok(())
}

fn run_verify(a: &VerifyArgs) -> Outcome {
    let suite: Suite = a.suite.parse()?;
    let measures = match a.measure.get()? {
        Some(m) => vec![(a.measure.measure.clone().unwrap_or_default(), m)],
        None => suite_measures(),
    };
    let config = VerifySuiteConfig {
        suite,
        k: a.k,
        max_cols: a.max_cols,
        max_rows: a.max_rows,
        samples: a.samples,
        seed: a.seed,
        measures,
    };
    let report = verify(&config)?;
    print!("{report}");
    if report.passed() {
        return Ok(());
    }
    fs::create_dir_all(&a.dump)?;
    for (i, text) in report.counterexamples().iter().enumerate() {
        let p = a.dump.join(format!("counterexample-{i}.dt"));
        fs::write(&p, text)?;
        eprintln!("wrote {}", p.display());
    }
    Err(Failure::Verification(format!(
        "{} violations",
        report.failures.len()
    )))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Params {
            table,
            measure,
            format,
        } => params(table, measure, *format),
        Command::Tree {
            kind,
            table,
            measure,
            output,
        } => tree(*kind, table, measure, output),
        Command::Closure { table, out, limit } => closure(table, out, *limit),
        Command::Construct { which } => construct(which),
        Command::Explore(a) => explore(a),
        Command::Verify(a) => run_verify(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(m)) => {
            eprintln!("dt: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Input(m)) => {
            eprintln!("dt: {m}");
            ExitCode::from(2)
        }
    }
}
