use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{json, Value};

use cauchon::grid::enumerate_diagrams;
use cauchon::harness::{
    local_identity_sweep, nonnegativity_sweep, round_trip_sweep, verify_bijection, verify_bruhat_interval,
    verify_counts, verify_equivalence, EquivalenceConfig, BRUHAT_BOUND,
};
use cauchon::minors::{enumerate_minors, minor_family};
use cauchon::oracle::vanishing_set;
use cauchon::perm::enumerate_restricted;
use cauchon::pipedream::{diagram_to_permutation, permutation_to_diagram};
use cauchon::tnn::cell_witness;
use cauchon::{CauchonDiagram, Error, FieldChoice, GridShape, Permutation, Result};

use crate::args::{Cli, Command, Format, Kind, Level};
use crate::cache::{Cache, Outcome};

/// Round-trip pairs checked by `verify --level full`.
const ROUND_TRIP_PAIRS: usize = 50;

/// Everything that determines a command's output.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub shape: Option<GridShape>,
    pub seed: u64,
    pub trials: usize,
    pub field: FieldChoice,
    pub format: Format,
    pub command: Command,
}

impl RunConfig {
    pub fn from_cli(cli: &Cli) -> Result<Self> {
        let shape = match (cli.m, cli.p) {
            (Some(m), Some(p)) => Some(GridShape::new(m, p)?),
            (None, None) => None,
            _ => return Err(Error::InvalidInput("--m and --p must be given together".into())),
        };
        Ok(RunConfig {
            shape,
            seed: cli.seed,
            trials: cli.trials,
            field: cli.field.parse()?,
            format: cli.format,
            command: cli.command.clone(),
        })
    }

    fn shape(&self) -> Result<GridShape> {
        self.shape
            .ok_or_else(|| Error::InvalidInput(format!("{} needs --m and --p", self.command.name())))
    }

    fn cache_label(&self) -> String {
        self.shape.map_or_else(|| "any".to_string(), |s| format!("{}x{}", s.m(), s.p()))
    }
}

/// Exit status for a library error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::BoundExceeded { .. } => 2,
        Error::InvariantViolation(_) => 1,
        _ => 3,
    }
}

/// Runs the command, consulting the cache when one is configured.
pub fn execute(cli: &Cli) -> Result<Outcome> {
    let config = RunConfig::from_cli(cli)?;
    let Some(dir) = &cli.cache_dir else {
        return run(&config);
    };
    let cache = Cache::new(dir);
    let key = serde_json::to_string(&config).expect("config serializes");
    let path = cache.path(config.command.name(), &config.cache_label(), config.seed, &key);
    if let Some(hit) = cache.load(&path) {
        return Ok(hit);
    }
    let outcome = run(&config)?;
    if let Err(e) = cache.store(&path, &outcome) {
        eprintln!("warning: could not write cache file {}: {e}", path.display());
    }
    Ok(outcome)
}

pub fn run(config: &RunConfig) -> Result<Outcome> {
    match &config.command {
        Command::Enumerate { kind } => enumerate(config, *kind),
        Command::Map { diagram, permutation } => map(config, diagram.as_deref(), permutation.as_deref()),
        Command::Family { permutation } => family(config, permutation),
        Command::Vanish { diagram } => vanish(config, diagram),
        Command::Witness { diagram, samples } => witness(config, diagram, *samples),
        Command::Verify { level, samples, sample } => verify(config, *level, *samples, *sample),
        Command::IdentityCheck { assignments, sample } => identity_check(config, *assignments, *sample),
    }
}

fn ok(output: String) -> Result<Outcome> {
    Ok(Outcome { exit_code: 0, output })
}

fn to_line<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("domain types serialize");
    s.push('\n');
    s
}

/// Reads a diagram from JSON, or from `all-white` / `all-black` with `--m`/`--p`.
pub fn parse_diagram(text: &str, shape: Option<GridShape>) -> Result<CauchonDiagram> {
    let need_shape = || shape.ok_or_else(|| Error::InvalidInput(format!("{text} needs --m and --p")));
    let d = match text.trim() {
        "all-white" | "empty" => CauchonDiagram::empty(need_shape()?),
        "all-black" | "full" => CauchonDiagram::full(need_shape()?),
        json => serde_json::from_str(json).map_err(|e| Error::InvalidInput(format!("bad diagram: {e}")))?,
    };
    if let Some(s) = shape {
        if s != d.shape() {
            return Err(Error::InvalidInput(format!(
                "diagram is {} but --m/--p give {s}",
                d.shape()
            )));
        }
    }
    Ok(d)
}

/// Reads a permutation from `[2,1,3]`, `2,1,3` or `{"n":3,"images":[2,1,3]}`.
pub fn parse_permutation(text: &str) -> Result<Permutation> {
    let t = text.trim();
    if t.starts_with('{') {
        return serde_json::from_str(t).map_err(|e| Error::InvalidInput(format!("bad permutation: {e}")));
    }
    let inner = t.trim_start_matches('[').trim_end_matches(']');
    let images = inner
        .split(',')
        .map(|s| s.trim().parse::<usize>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|e| Error::InvalidInput(format!("bad permutation {text:?}: {e}")))?;
    Permutation::new(images)
}

fn enumerate(config: &RunConfig, kind: Kind) -> Result<Outcome> {
    let shape = config.shape()?;
    let mut out = String::new();
    let count = match kind {
        Kind::Diagrams => {
            let mut n = 0;
            for d in enumerate_diagrams(shape)? {
                match config.format {
                    Format::Json => out.push_str(&to_line(&d)),
                    Format::Table => writeln!(out, "{d}").unwrap(),
                }
                n += 1;
            }
            n
        }
        Kind::Permutations => {
            let all = enumerate_restricted(shape)?;
            for w in &all {
                match config.format {
                    Format::Json => out.push_str(&to_line(w)),
                    Format::Table => writeln!(out, "{w}").unwrap(),
                }
            }
            all.len()
        }
        Kind::Minors => {
            let all = enumerate_minors(shape);
            for ix in &all {
                match config.format {
                    Format::Json => out.push_str(&to_line(ix)),
                    Format::Table => writeln!(out, "{ix}").unwrap(),
                }
            }
            all.len()
        }
    };
    match config.format {
        Format::Json => out.push_str(&to_line(&json!({ "count": count }))),
        Format::Table => writeln!(out, "count: {count}").unwrap(),
    }
    ok(out)
}

fn map(config: &RunConfig, diagram: Option<&str>, permutation: Option<&str>) -> Result<Outcome> {
    let (d, w) = match (diagram, permutation) {
        (Some(text), _) => {
            let d = parse_diagram(text, config.shape)?;
            (d, diagram_to_permutation(&d))
        }
        (None, Some(text)) => {
            let w = parse_permutation(text)?;
            (permutation_to_diagram(&w, config.shape()?)?, w)
        }
        (None, None) => return Err(Error::InvalidInput("map needs --diagram or --permutation".into())),
    };
    match config.format {
        Format::Json => ok(to_line(&json!({ "diagram": d, "permutation": w }))),
        Format::Table => ok(format!("{d}\n{w}\n")),
    }
}

fn family(config: &RunConfig, permutation: &str) -> Result<Outcome> {
    let w = parse_permutation(permutation)?;
    let fam = minor_family(&w, config.shape()?)?;
    match config.format {
        Format::Json => ok(to_line(&json!({ "permutation": w, "family": fam }))),
        Format::Table => ok(format!("{w}: {fam}\n")),
    }
}

fn vanish(config: &RunConfig, diagram: &str) -> Result<Outcome> {
    let d = parse_diagram(diagram, config.shape)?;
    let report = vanishing_set(&d, config.trials, config.field, config.seed)?;
    match config.format {
        Format::Json => ok(to_line(&report)),
        Format::Table => ok(format!("{}\n", report.vanishing)),
    }
}

fn witness(config: &RunConfig, diagram: &str, samples: usize) -> Result<Outcome> {
    let d = parse_diagram(diagram, config.shape)?;
    let cw = cell_witness(&d, samples, config.seed)?;
    let output = match config.format {
        Format::Json => to_line(&cw),
        Format::Table => {
            let mut s = String::new();
            for row in &cw.witness.matrix {
                let cells: Vec<String> = row.iter().map(cauchon::field::rational_to_string).collect();
                writeln!(s, "{}", cells.join("  ")).unwrap();
            }
            writeln!(s, "zero minors: {}", cw.zero_set).unwrap();
            writeln!(s, "consistent: {}", cw.consistent).unwrap();
            s
        }
    };
    Ok(Outcome {
        exit_code: if cw.consistent { 0 } else { 1 },
        output,
    })
}

/// Collects labelled check results, in JSON lines or as a table.
struct Report {
    format: Format,
    out: String,
    pass: bool,
}

impl Report {
    fn new(format: Format) -> Self {
        Report {
            format,
            out: String::new(),
            pass: true,
        }
    }

    fn check<T: Serialize>(&mut self, label: &str, passed: bool, value: &T) {
        self.pass &= passed;
        match self.format {
            Format::Json => {
                let mut obj = serde_json::Map::new();
                obj.insert(label.to_string(), serde_json::to_value(value).expect("reports serialize"));
                obj.insert("ok".to_string(), Value::Bool(passed));
                self.out.push_str(&to_line(&obj));
            }
            Format::Table => {
                writeln!(self.out, "{label:<14} {}", if passed { "ok" } else { "FAIL" }).unwrap();
            }
        }
    }

    fn line<T: Serialize>(&mut self, value: &T) {
        if self.format == Format::Json {
            self.out.push_str(&to_line(value));
        }
    }

    fn finish(mut self) -> Outcome {
        let verdict = if self.pass { "pass" } else { "fail" };
        match self.format {
            Format::Json => self.out.push_str(&to_line(&json!({ "verdict": verdict }))),
            Format::Table => writeln!(self.out, "verdict: {verdict}").unwrap(),
        }
        Outcome {
            exit_code: if self.pass { 0 } else { 1 },
            output: self.out,
        }
    }
}

fn verify(config: &RunConfig, level: Level, samples: usize, sample: Option<usize>) -> Result<Outcome> {
    let shape = config.shape()?;
    let mut report = Report::new(config.format);

    let counts = verify_counts(shape)?;
    report.check("counts", counts.equal, &counts);
    if shape.n() <= BRUHAT_BOUND {
        let bruhat = verify_bruhat_interval(shape)?;
        report.check("bruhat", bruhat.equal, &bruhat);
    }
    let bijection = verify_bijection(shape)?;
    report.check("bijection", bijection.ok(), &bijection);

    if level == Level::Full {
        let eq = verify_equivalence(
            shape,
            &EquivalenceConfig {
                trials: config.trials,
                field: config.field,
                witness_samples: samples,
                seed: config.seed,
                sample,
            },
        )?;
        for r in &eq.records {
            report.line(r);
        }
        report.check("equivalence", eq.ok(), &eq.summary);
        let identity = local_identity_sweep(shape, 3, config.seed, sample)?;
        report.check("identity", identity.ok(), &identity);
        let round_trip = round_trip_sweep(shape, ROUND_TRIP_PAIRS, config.seed)?;
        report.check("round_trip", round_trip.ok(), &round_trip);
        let nonneg = nonnegativity_sweep(shape, config.seed, sample)?;
        report.check("nonnegativity", nonneg.ok(), &nonneg);
    }
    Ok(report.finish())
}

fn identity_check(config: &RunConfig, assignments: usize, sample: Option<usize>) -> Result<Outcome> {
    let sweep = local_identity_sweep(config.shape()?, assignments, config.seed, sample)?;
    let mut report = Report::new(config.format);
    report.check("identity", sweep.ok(), &sweep);
    Ok(report.finish())
}
