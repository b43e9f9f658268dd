use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use philab::certs::{
    render_text, ConfigCertificate, EmbedOutput, FormulaOutput, IdOutput, IsolationOutput, LitMap, TypesOutput,
};
use philab::corpus::{regression_corpus, Instance};
use philab::format::{parse_structure, serialize_structure, ParseError};
use philab::genspec::{parse_seeds, GenSpec, Sidecar, SpecError};
use philab::suites::{self, k_sat_name, Suite, SuiteOptions};
use philab_core::delta::Satisfiability;
use philab_core::goodconfig::Strategy;
use philab_core::{vc, BipartiteStructure, Elem, Error, Lab, Limits, Param, PhiType};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "philab", version, about = "Finite-model laboratory for partitioned formulas")]
struct Cli {
    #[command(flatten)]
    run: RunConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct RunConfig {
    /// Structure file.
    #[arg(short, long, global = true)]
    input: Option<PathBuf>,
    /// Inline generator spec, e.g. `eqrel:1,2,3` or `random:unions2`.
    #[arg(long = "gen", global = true)]
    generator: Option<String>,
    /// Seed for seeded generators.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Satisfiability degree for extension steps: `all` or a positive count.
    #[arg(long, global = true, default_value = "all", value_parser = parse_k_sat)]
    k_sat: Satisfiability,
    /// Maximum entries in one Δ-type table.
    #[arg(long, global = true, value_parser = positive)]
    delta_cap: Option<usize>,
    /// Maximum literals tried by the minimum isolating-subtype search.
    #[arg(long, global = true, value_parser = positive)]
    budget: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StrategyArg {
    Greedy,
    Exhaustive,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Greedy => Strategy::Greedy,
            StrategyArg::Exhaustive => Strategy::Exhaustive,
        }
    }
}

#[derive(Args, Debug)]
struct TypeSpec {
    /// Take the trace of this row.
    #[arg(long, conflicts_with = "lits")]
    of: Option<usize>,
    /// Domain of the trace: `B`, `ALL` or a comma-separated index list.
    #[arg(long, default_value = "B")]
    over: String,
    /// Explicit literals, e.g. `b3=1,b7=0`.
    #[arg(long)]
    lits: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Independence dimension and a witness.
    Id,
    /// The realized φ-types over a domain.
    Types {
        #[arg(long, default_value = "B")]
        over: String,
    },
    /// Isolated extension certificate for a type over B.
    Isolate {
        #[command(flatten)]
        ty: TypeSpec,
        #[arg(long, value_enum, default_value_t = StrategyArg::Greedy)]
        strategy: StrategyArg,
    },
    /// Maximal good configuration certificate.
    Config {
        #[command(flatten)]
        ty: TypeSpec,
        #[arg(long, value_enum, default_value_t = StrategyArg::Greedy)]
        strategy: StrategyArg,
    },
    /// Defining formula of a type, evaluated on every parameter.
    Define {
        #[command(flatten)]
        ty: TypeSpec,
        #[arg(long, value_enum, default_value_t = StrategyArg::Greedy)]
        strategy: StrategyArg,
    },
    /// Defines the trace of a row over B through its isolated extension.
    Embed {
        #[arg(long)]
        of: usize,
    },
    /// Compiles a generator spec to a structure file and metadata sidecar.
    Gen {
        /// Structure output path; the sidecar goes next to it as `<path>.meta.json`.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Runs a verification suite.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        /// Inclusive seed range for seeded generators, e.g. `0..99`.
        #[arg(long)]
        seeds: Option<String>,
        /// Use the built-in regression corpus as input.
        #[arg(long)]
        corpus: bool,
        /// Write oracle comparisons as JSON lines to this file.
        #[arg(long)]
        log: Option<PathBuf>,
        /// Conjunctions of p kept in the q-type.
        #[arg(long)]
        sample: Option<usize>,
    },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Core(#[from] Error),
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error("{0}")]
    Usage(String),
    #[error("invariant violated")]
    Violation,
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Violation => 1,
            CliError::Parse(_) | CliError::Io { .. } => 2,
            CliError::Core(Error::ResourceLimit { .. }) => 3,
            CliError::Core(Error::UnsoundExtension(_) | Error::Invariant(_)) => 1,
            CliError::Core(_) | CliError::Spec(_) | CliError::Usage(_) => 4,
        }
    }
}

type Res<T> = Result<T, CliError>;

fn parse_k_sat(text: &str) -> Result<Satisfiability, String> {
    match text {
        "all" | "ALL" => Ok(Satisfiability::All),
        n => match n.parse::<usize>() {
            Ok(k) if k > 0 => Ok(Satisfiability::AtMost(k)),
            _ => Err("expected `all` or a positive integer".into()),
        },
    }
}

fn positive(text: &str) -> Result<usize, String> {
    match text.parse::<usize>() {
        Ok(n) if n > 0 => Ok(n),
        _ => Err("expected a positive integer".into()),
    }
}

impl RunConfig {
    fn limits(&self) -> Limits {
        let mut limits = Limits::default();
        if let Some(cap) = self.delta_cap {
            limits.delta_entries = cap;
        }
        limits
    }

    fn spec(&self) -> Res<Option<GenSpec>> {
        Ok(self.generator.as_deref().map(str::parse).transpose()?)
    }

    fn load(&self) -> Res<BipartiteStructure> {
        match (&self.input, self.spec()?) {
            (Some(path), None) => read_structure(path),
            (None, Some(spec)) => Ok(spec.build(self.seed, &self.limits())?.structure),
            _ => Err(CliError::Usage("give exactly one of --input or --gen".into())),
        }
    }
}

fn read_structure(path: &Path) -> Res<BipartiteStructure> {
    let text =
        fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    Ok(parse_structure(&text)?)
}

fn domain(s: &BipartiteStructure, over: &str) -> Res<Vec<Param>> {
    match over {
        "B" => Ok(s.base_set().to_vec()),
        "ALL" => Ok(s.params().collect()),
        "" => Ok(Vec::new()),
        list => list
            .split(',')
            .map(|t| {
                let j: usize = t.trim().trim_start_matches('b').parse().map_err(|_| {
                    CliError::Usage(format!("bad parameter `{t}` in --over"))
                })?;
                s.check_param(Param(j))?;
                Ok(Param(j))
            })
            .collect(),
    }
}

fn parse_lits(s: &BipartiteStructure, text: &str) -> Res<PhiType> {
    let mut p = PhiType::new();
    for tok in text.split(',').filter(|t| !t.trim().is_empty()) {
        let (b, v) = tok
            .trim()
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("bad literal `{tok}`, expected b<j>=0|1")))?;
        let j: usize = b
            .trim_start_matches('b')
            .parse()
            .map_err(|_| CliError::Usage(format!("bad parameter in `{tok}`")))?;
        let sign = match v {
            "0" => false,
            "1" => true,
            _ => return Err(CliError::Usage(format!("bad sign in `{tok}`"))),
        };
        s.check_param(Param(j))?;
        p.insert(Param(j), sign)?;
    }
    Ok(p)
}

fn target_type(s: &BipartiteStructure, ty: &TypeSpec) -> Res<PhiType> {
    match (ty.of, &ty.lits) {
        (Some(row), None) => {
            let d = domain(s, &ty.over)?;
            Ok(s.trace(Elem(row), &d)?)
        }
        (None, Some(text)) => parse_lits(s, text),
        _ => Err(CliError::Usage("give exactly one of --of or --lits".into())),
    }
}

fn emit<T: Serialize>(format: OutputFormat, value: &T) -> Res<()> {
    let json = serde_json::to_value(value).expect("serializable output");
    let text = match format {
        OutputFormat::Json => serde_json::to_string_pretty(&json).expect("json") + "\n",
        OutputFormat::Text => render_text(&json),
    };
    print!("{text}");
    Ok(())
}

fn lab<'s>(run: &RunConfig, s: &'s BipartiteStructure) -> Lab<'s> {
    Lab::new(s).with_limits(run.limits())
}

fn cmd_id(run: &RunConfig) -> Res<()> {
    let s = run.load()?;
    let out = IdOutput::from(&vc::independence_dimension(&s, s.num_params()));
    match run.format {
        OutputFormat::Text => print!("{}", out.text()),
        OutputFormat::Json => emit(run.format, &out)?,
    }
    Ok(())
}

fn cmd_types(run: &RunConfig, over: &str) -> Res<()> {
    let s = run.load()?;
    let d = domain(&s, over)?;
    let types = s.type_space(&d)?;
    let out = TypesOutput {
        domain: d.iter().map(|b| b.0).collect(),
        count: types.len(),
        independent: vc::is_phi_independent(&s, &d)?,
        types: types.into_iter().map(LitMap).collect(),
    };
    emit(run.format, &out)
}

fn cmd_isolate(run: &RunConfig, ty: &TypeSpec, strategy: StrategyArg) -> Res<()> {
    let s = run.load()?;
    let p = target_type(&s, ty)?;
    let lab = lab(run, &s);
    let ext = lab.isolated_extension_with(&p, strategy.into(), run.k_sat)?;
    let mut out_ext = ext.clone();
    if let Some(budget) = run.budget {
        out_ext.certificate = lab.find_isolating_subtype(&ext.extended, Some(budget))?;
    }
    let formula = lab.phi_defining_formula(&out_ext.certificate)?;
    emit(run.format, &IsolationOutput::new(&s, &out_ext, &formula)?)
}

fn cmd_config(run: &RunConfig, ty: &TypeSpec, strategy: StrategyArg) -> Res<()> {
    let s = run.load()?;
    let p = target_type(&s, ty)?;
    let lab = lab(run, &s);
    let config = lab.build_maximal(&p, strategy.into(), run.k_sat)?;
    let check = lab.check_configuration(&config)?;
    let name = match strategy {
        StrategyArg::Greedy => "greedy",
        StrategyArg::Exhaustive => "exhaustive",
    };
    let cert = ConfigCertificate::new(&config, &check, lab.id, lab.verify_bound(&config), name, k_sat_name(run.k_sat));
    emit(run.format, &cert)
}

#[derive(Serialize)]
struct DefineOutput {
    #[serde(rename = "type")]
    target: LitMap,
    formula: FormulaOutput,
    /// `ψ(b)` on every parameter; `constrained` marks the type's domain.
    values: Vec<Value>,
}

fn cmd_define(run: &RunConfig, ty: &TypeSpec, strategy: StrategyArg) -> Res<()> {
    let s = run.load()?;
    let p = target_type(&s, ty)?;
    let lab = lab(run, &s);
    let ext = lab.isolated_extension_with(&p, strategy.into(), run.k_sat)?;
    let formula = lab.phi_defining_formula(&ext.certificate)?;
    let values = s
        .params()
        .map(|b| {
            let v = formula.eval_flagged(&s, b)?;
            Ok(json!({"param": b.0, "psi": u8::from(v.value), "constrained": v.constrained}))
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let out = DefineOutput { target: LitMap(p.clone()), formula: FormulaOutput::new(&s, &formula, &p)?, values };
    emit(run.format, &out)
}

fn cmd_embed(run: &RunConfig, row: usize) -> Res<()> {
    let s = run.load()?;
    let lab = lab(run, &s);
    let e = lab.embed_trace(Elem(row), run.k_sat)?;
    emit(run.format, &EmbedOutput::new(&s, row, &e)?)
}

fn write_file(path: &Path, text: &str) -> Res<()> {
    fs::write(path, text).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn cmd_gen(run: &RunConfig, output: Option<&Path>) -> Res<()> {
    let spec = run.spec()?.ok_or_else(|| CliError::Usage("gen needs --gen".into()))?;
    let generated = spec.build(run.seed, &run.limits())?;
    let text = serialize_structure(&generated.structure);
    let meta = serde_json::to_string_pretty(&Sidecar::new(&spec, run.seed, &generated)).expect("json") + "\n";
    match output {
        Some(path) => {
            write_file(path, &text)?;
            let mut meta_path = path.as_os_str().to_owned();
            meta_path.push(".meta.json");
            write_file(Path::new(&meta_path), &meta)?;
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn verify_instances(run: &RunConfig, seeds: Option<&str>, corpus: bool) -> Res<Vec<Instance>> {
    let limits = run.limits();
    match (corpus, &run.input, run.spec()?) {
        (true, None, None) => Ok(regression_corpus(&limits)?),
        (false, Some(path), None) => {
            Ok(vec![Instance { label: path.display().to_string(), structure: read_structure(path)? }])
        }
        (false, None, Some(spec)) => {
            let seeds = match seeds {
                Some(text) if spec.is_seeded() => parse_seeds(text)?,
                Some(_) => return Err(CliError::Usage("--seeds only applies to seeded generators".into())),
                None => vec![run.seed],
            };
            seeds.into_iter().map(|seed| Ok(Instance::from_spec(&spec, seed, &limits)?)).collect()
        }
        _ => Err(CliError::Usage("give exactly one of --input, --gen or --corpus".into())),
    }
}

fn cmd_verify(
    run: &RunConfig,
    suite: Suite,
    seeds: Option<&str>,
    corpus: bool,
    log: Option<&Path>,
    sample: Option<usize>,
) -> Res<()> {
    let mut opts = SuiteOptions { limits: run.limits(), q_sample: sample, ..SuiteOptions::default() };
    if run.k_sat != Satisfiability::All {
        opts.k_sats = vec![run.k_sat];
    }
    let report = if suite == Suite::Growth {
        let ns = match run.spec()? {
            Some(GenSpec::EqRel(spec)) => spec.b_picks,
            None if run.input.is_none() => vec![1, 2, 3],
            _ => return Err(CliError::Usage("the growth suite takes --gen eqrel:N1,N2,...".into())),
        };
        suites::growth(&ns, &opts)?
    } else {
        suites::run(suite, &verify_instances(run, seeds, corpus)?, &opts)?
    };
    if let Some(path) = log {
        let mut lines = String::new();
        for r in &report.oracle_reports {
            lines.push_str(&serde_json::to_string(r).expect("json"));
            lines.push('\n');
        }
        write_file(path, &lines)?;
    }
    emit(run.format, &report)?;
    if report.passed {
        Ok(())
    } else {
        Err(CliError::Violation)
    }
}

fn dispatch(cli: &Cli) -> Res<()> {
    let run = &cli.run;
    match &cli.command {
        Command::Id => cmd_id(run),
        Command::Types { over } => cmd_types(run, over),
        Command::Isolate { ty, strategy } => cmd_isolate(run, ty, *strategy),
        Command::Config { ty, strategy } => cmd_config(run, ty, *strategy),
        Command::Define { ty, strategy } => cmd_define(run, ty, *strategy),
        Command::Embed { of } => cmd_embed(run, *of),
        Command::Gen { output } => cmd_gen(run, output.as_deref()),
        Command::Verify { suite, seeds, corpus, log, sample } => {
            cmd_verify(run, *suite, seeds.as_deref(), *corpus, log.as_deref(), *sample)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let _ = std::io::stdout().flush();
            if !matches!(e, CliError::Violation) {
                eprintln!("error: {e}");
            }
            ExitCode::from(e.exit_code())
        }
    }
}
