//! Command-line front end.
//!
//! Exit status: 0 on success, 1 on validation or usage errors, 2 when a work
//! budget is exhausted.

use clap::{Args, Parser, Subcommand, ValueEnum};
use pointconf::bounds::catalog;
use pointconf::counting::{count, CountQuery, Method, Semantics, DEFAULT_BUDGET};
use pointconf::graphs::{find_best_cover, max_matching, Weights};
use pointconf::harness::{run_experiment, ExperimentConfig};
use pointconf::io::{format_graph, format_points, read_graph, read_points};
use pointconf::{ConstructionKind, ConstructionSpec, Dim, Error, Mode, Tolerance};
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "pointconf", version, about = "Count weighted configurations in point sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build an extremal construction and write its points.
    Generate {
        #[command(flatten)]
        build: BuildArgs,
        #[command(flatten)]
        common: Common,
        /// Also write the matching template graph here.
        #[arg(long)]
        template_out: Option<PathBuf>,
    },
    /// Count assignments of a template into a point set.
    Count {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Best cover by single edges and two-edge paths.
    Cover {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        graph: PathBuf,
    },
    /// Maximum matching.
    Match {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        graph: PathBuf,
    },
    /// Exponent bounds report as CSV.
    Bounds {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        graph: PathBuf,
    },
    /// Count over a grid of sizes and fit the growth exponent.
    Experiment {
        #[command(flatten)]
        build: BuildArgs,
        #[command(flatten)]
        common: Common,
        /// Template to count instead of the construction's own.
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long, value_delimiter = ',', required = true)]
        n_grid: Vec<usize>,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        /// Record wall-clock seconds per row.
        #[arg(long)]
        timing: bool,
    },
    /// Run the built-in invariant suites.
    Verify {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long, value_enum, default_value_t = ModeArg::Distance)]
    mode: ModeArg,
    #[arg(long, default_value_t = 2)]
    dim: usize,
    #[arg(long, value_enum, default_value_t = SemanticsArg::Hom)]
    semantics: SemanticsArg,
    #[arg(long, default_value_t = 1e-9)]
    epsilon: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct Inputs {
    #[arg(long)]
    points: PathBuf,
    #[arg(long)]
    graph: PathBuf,
}

#[derive(Args)]
struct BuildArgs {
    #[arg(long, value_enum)]
    kind: KindArg,
    #[arg(long, default_value_t = 100)]
    n: usize,
    /// Star arity.
    #[arg(long)]
    k: Option<usize>,
    /// Tree branching factor.
    #[arg(long)]
    c: Option<usize>,
    /// Tree height.
    #[arg(long)]
    h: Option<usize>,
    /// Comma-separated edge weights; a single value is used for every edge.
    /// Triangle sets take the three type values here.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    weights: Vec<f64>,
    /// Progression start.
    #[arg(long, default_value_t = 1.0)]
    a: f64,
    /// Progression ratio.
    #[arg(long, default_value_t = 2.0)]
    g: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Star,
    Tree,
    Triangle,
    Progression,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Distance,
    Dot,
}

#[derive(Clone, Copy, ValueEnum)]
enum SemanticsArg {
    Injective,
    Hom,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Auto,
    Bruteforce,
    Fastdp,
}

impl Common {
    fn mode(&self) -> Mode {
        match self.mode {
            ModeArg::Distance => Mode::Distance,
            ModeArg::Dot => Mode::DotProduct,
        }
    }

    fn dim(&self) -> Result<Dim, Error> {
        Dim::new(self.dim)
    }

    fn semantics(&self) -> Semantics {
        match self.semantics {
            SemanticsArg::Injective => Semantics::Injective,
            SemanticsArg::Hom => Semantics::Homomorphism,
        }
    }

    fn query(&self) -> Result<CountQuery, Error> {
        Ok(CountQuery::new(self.mode(), self.semantics()).with_tol(Tolerance::new(self.epsilon)?))
    }

    fn emit(&self, text: &str) -> Result<(), Error> {
        match &self.out {
            Some(p) => Ok(std::fs::write(p, text)?),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

fn required(v: Option<usize>, flag: &str) -> Result<usize, Error> {
    v.ok_or_else(|| Error::InvalidParams(format!("--{flag} is required for this kind")))
}

impl BuildArgs {
    fn spec(&self, common: &Common) -> Result<ConstructionSpec, Error> {
        let mode = common.mode();
        let kind = match self.kind {
            KindArg::Star => {
                let k = required(self.k, "k")?;
                let weights = match self.weights.as_slice() {
                    [] => vec![1.0; k],
                    [w] => vec![*w; k],
                    ws => ws.to_vec(),
                };
                ConstructionKind::StarSet { k, weights, mode }
            }
            KindArg::Tree => {
                let weights = match self.weights.as_slice() {
                    [] => Weights::Uniform(1.0),
                    [w] => Weights::Uniform(*w),
                    ws => Weights::Explicit(ws.to_vec()),
                };
                ConstructionKind::TreeSet { c: required(self.c, "c")?, h: required(self.h, "h")?, weights, mode }
            }
            KindArg::Triangle => {
                let alphas: [f64; 3] = self.weights.as_slice().try_into().map_err(|_| {
                    Error::InvalidParams(format!("triangle needs 3 weights, got {}", self.weights.len()))
                })?;
                ConstructionKind::CoincidentTriangle { alphas }
            }
            KindArg::Progression => ConstructionKind::ProgressionLine { a: self.a, g: self.g },
        };
        Ok(ConstructionSpec { kind, n: self.n, dim: common.dim()?, seed: common.seed })
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Generate { build, common, template_out } => {
            let built = pointconf::constructions::generate(&build.spec(&common)?)?;
            if let Some(p) = template_out {
                std::fs::write(p, format_graph(&built.template))?;
            }
            common.emit(&format_points(&built.points))
        }
        Command::Count { common, inputs, method, budget } => {
            let points = read_points(&inputs.points)?;
            let g = read_graph(&inputs.graph)?;
            let method = match method {
                MethodArg::Auto => Method::Auto,
                MethodArg::Bruteforce => Method::BruteForce,
                MethodArg::Fastdp => Method::FastDp,
            };
            let q = common.query()?.with_method(method).with_budget(budget);
            let r = count(&points, &g, &q)?;
            common.emit(&format!("{}\n", r.count))
        }
        Command::Cover { common, graph } => {
            let c = find_best_cover(&read_graph(&graph)?)?;
            let mut s = format!("s,{}\nt,{}\nexponent,{}\n", c.s, c.t, c.exponent);
            for [u, v] in &c.p2_blocks {
                let _ = writeln!(s, "p2,{u} {v}");
            }
            for [a, m, b] in &c.p3_blocks {
                let _ = writeln!(s, "p3,{a} {m} {b}");
            }
            for v in &c.leftover {
                let _ = writeln!(s, "leftover,{v}");
            }
            common.emit(&s)
        }
        Command::Match { common, graph } => {
            let g = read_graph(&graph)?;
            let m = max_matching(&g)?;
            let mut s = format!("m,{}\nr,{}\n", m.m, m.r);
            for &e in &m.edges {
                let e = g.edges()[e];
                let _ = writeln!(s, "edge,{} {}", e.u, e.v);
            }
            common.emit(&s)
        }
        Command::Bounds { common, graph } => {
            let report = catalog(&read_graph(&graph)?, common.mode(), common.dim()?)?;
            common.emit(&report.to_csv())
        }
        Command::Experiment { build, common, graph, n_grid, budget, timing } => {
            let mut cfg = ExperimentConfig::new(build.spec(&common)?, n_grid);
            cfg.semantics = common.semantics();
            cfg.query = common.query()?.with_budget(budget);
            cfg.template = graph.map(read_graph).transpose()?;
            common.emit(&run_experiment(&cfg)?.to_csv(timing))
        }
        Command::Verify { common } => {
            let results = pointconf::verify::run_all(common.seed);
            let mut s = String::new();
            for r in &results {
                let _ = writeln!(s, "{} {} {}/{}", if r.ok() { "PASS" } else { "FAIL" }, r.name, r.passed, r.total);
                for f in &r.failures {
                    let _ = writeln!(s, "  {f}");
                }
            }
            common.emit(&s)?;
            if results.iter().all(|r| r.ok()) {
                Ok(())
            } else {
                Err(Error::InvalidParams("invariant suites failed".into()))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_budget() { 2 } else { 1 })
        }
    }
}
