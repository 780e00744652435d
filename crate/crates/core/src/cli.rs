//! Experiment runner behind the `sharegame` binary: configuration files,
//! presets, and CSV reports.
//!
//! A config file is a list of `key = value` lines with `#` comments.
//! Recognised keys:
//!
//! | key | value |
//! |---|---|
//! | `dataset` | row label (defaults to the graph's label) |
//! | `graph` | family: `karate`, `star:N`, `chain:N`, `complete:N`, `er:N:PROB`, `two_center_tree:K:M`, `center_arms_tree:K:M` |
//! | `edge_list` | path to an edge-list file (instead of `graph`) |
//! | `graph_seed` | seed for `er` graphs (defaults to `seed`) |
//! | `variant` | `sgg`, `sgg-ac` or `both` |
//! | `k`, `b`, `p` | game parameters |
//! | `xi` / `a` | comma-separated threshold or access-cost grid (one of the two) |
//! | `runs`, `seed` | Monte Carlo replicates and master seed |
//! | `analyses` | comma-separated subset of `optimum`, `dynamics`, `exact_efficiency`, `stabilize`, `export_lp` |
//! | `out` | CSV path; side files are written next to it |
//! | `node_budget` | branch-and-bound node limit |
//!
//! Relative `edge_list` paths resolve against the config file's directory.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::dynamics::stabilize;
use crate::equilibria::{
    empirical_cost_stats, exact_efficiency, CostStats, DEFAULT_MAX_N_SGG, DEFAULT_MAX_N_SGGAC,
};
use crate::error::{Error, Result};
use crate::game::{Game, GameConfig, Variant};
use crate::netgraph::{generate, read_edge_list, FamilySpec, Graph, Neighborhoods};
use crate::optimum::{export_ilp, min_dominating_exact_in, OptResult, DEFAULT_NODE_BUDGET};

/// Environment variable holding the number of worker threads.
pub const WORKERS_ENV: &str = "SHAREGAME_WORKERS";

pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_RUNS: usize = 1000;

pub const CSV_HEADER: &str = "dataset,n,edges,variant,k,b,p,a,xi,runs,seed,opt_cost,opt_proven,\
mean_cost,std_cost,min_cost,max_cost,mean_passes,poa_exact,pos_exact";

pub const PRESETS: [&str; 3] = ["table3_synthetic", "table3_karate", "table4_karate"];

#[derive(Debug, Clone, PartialEq)]
pub enum GraphSource {
    Family(FamilySpec),
    EdgeList(PathBuf),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VariantChoice {
    Sgg,
    SggAc,
    Both,
}

impl VariantChoice {
    fn parse(s: &str) -> Result<Self> {
        if s.trim().eq_ignore_ascii_case("both") {
            return Ok(Self::Both);
        }
        match s.parse::<Variant>() {
            Ok(Variant::Sgg) => Ok(Self::Sgg),
            Ok(Variant::SggAc) => Ok(Self::SggAc),
            Err(_) => Err(Error::Config(format!("unknown variant {s:?}"))),
        }
    }

    fn includes(self, v: Variant) -> bool {
        matches!(
            (self, v),
            (Self::Both, _) | (Self::Sgg, Variant::Sgg) | (Self::SggAc, Variant::SggAc)
        )
    }
}

/// The SGG-AC access price, as raw costs or as thresholds.
#[derive(Debug, Clone, PartialEq)]
pub enum AccessGrid {
    A(Vec<f64>),
    Xi(Vec<usize>),
}

impl AccessGrid {
    fn len(&self) -> usize {
        match self {
            AccessGrid::A(v) => v.len(),
            AccessGrid::Xi(v) => v.len(),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Analyses {
    pub optimum: bool,
    pub dynamics: bool,
    pub exact_efficiency: bool,
    pub stabilize: bool,
    pub export_lp: bool,
}

impl Analyses {
    fn parse(s: &str) -> Result<Self> {
        let mut out = Analyses::default();
        for name in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let flag = match name {
                "optimum" => &mut out.optimum,
                "dynamics" => &mut out.dynamics,
                "exact_efficiency" => &mut out.exact_efficiency,
                "stabilize" => &mut out.stabilize,
                "export_lp" => &mut out.export_lp,
                other => return Err(Error::Config(format!("unknown analysis {other:?}"))),
            };
            *flag = true;
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub dataset: Option<String>,
    pub source: GraphSource,
    pub graph_seed: Option<u64>,
    pub variant: VariantChoice,
    pub k: usize,
    pub b: f64,
    pub p: f64,
    pub access: Option<AccessGrid>,
    pub runs: usize,
    pub master_seed: u64,
    pub analyses: Analyses,
    pub out: Option<PathBuf>,
    pub node_budget: u64,
}

impl ExperimentConfig {
    /// Defaults: SGG, k=1, b=2, p=1, 1000 runs, optimum and dynamics.
    pub fn new(source: GraphSource) -> Self {
        Self {
            dataset: None,
            source,
            graph_seed: None,
            variant: VariantChoice::Sgg,
            k: 1,
            b: 2.0,
            p: 1.0,
            access: None,
            runs: DEFAULT_RUNS,
            master_seed: DEFAULT_SEED,
            analyses: Analyses {
                optimum: true,
                dynamics: true,
                ..Analyses::default()
            },
            out: None,
            node_budget: DEFAULT_NODE_BUDGET,
        }
    }

    /// Parses a config file body; `base` resolves relative edge-list paths.
    pub fn parse(text: &str, base: Option<&Path>) -> Result<Self> {
        let mut pairs = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected `key = value`", idx + 1))
            })?;
            pairs.push((key.trim().to_string(), value.trim().to_string()));
        }
        let mut seen = BTreeSet::new();
        for (key, _) in &pairs {
            if !seen.insert(key.as_str()) {
                return Err(Error::Config(format!("key {key:?} given twice")));
            }
        }
        if seen.contains("a") && seen.contains("xi") {
            return Err(Error::Config("give either `a` or `xi`, not both".into()));
        }
        match (seen.contains("graph"), seen.contains("edge_list")) {
            (true, true) => {
                return Err(Error::Config(
                    "give either `graph` or `edge_list`, not both".into(),
                ))
            }
            (false, false) => return Err(Error::Config("missing `graph` or `edge_list`".into())),
            _ => {}
        }
        let mut cfg = ExperimentConfig::new(GraphSource::Family(FamilySpec::Karate));
        for (key, value) in &pairs {
            cfg.set(key, value)?;
        }
        if let (GraphSource::EdgeList(path), Some(base)) = (&mut cfg.source, base) {
            if path.is_relative() {
                *path = base.join(&*path);
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text, path.parent())
    }

    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "dataset" => self.dataset = Some(value.to_string()),
            "graph" => self.source = GraphSource::Family(parse_family(value, 0)?),
            "edge_list" => self.source = GraphSource::EdgeList(PathBuf::from(value)),
            "graph_seed" => self.graph_seed = Some(parse_num(key, value)?),
            "variant" => self.variant = VariantChoice::parse(value)?,
            "k" => self.k = parse_num(key, value)?,
            "b" => self.b = parse_num(key, value)?,
            "p" => self.p = parse_num(key, value)?,
            "a" => self.access = Some(AccessGrid::A(parse_list(key, value)?)),
            "xi" => self.access = Some(AccessGrid::Xi(parse_list(key, value)?)),
            "runs" => self.runs = parse_num(key, value)?,
            "seed" => self.master_seed = parse_num(key, value)?,
            "analyses" => self.analyses = Analyses::parse(value)?,
            "out" => self.out = Some(PathBuf::from(value)),
            "node_budget" => self.node_budget = parse_num(key, value)?,
            other => return Err(Error::Config(format!("unknown key {other:?}"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.runs == 0 {
            return Err(Error::Config("runs must be at least 1".into()));
        }
        if self.variant != VariantChoice::Sgg && self.access.as_ref().is_none_or(|g| g.len() == 0) {
            return Err(Error::Config("SGG-AC rows need an `a` or `xi` grid".into()));
        }
        if let GraphSource::Family(spec) = &self.source {
            spec.validate()?;
        }
        self.games().map(|_| ())
    }

    pub fn dataset_label(&self) -> String {
        if let Some(name) = &self.dataset {
            return name.clone();
        }
        match &self.source {
            GraphSource::Family(spec) => spec.label(),
            GraphSource::EdgeList(path) => path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "edge_list".into()),
        }
    }

    /// The game of every output row, in row order: SGG first, then the
    /// access grid in the order given.
    pub fn games(&self) -> Result<Vec<GameConfig>> {
        let mut out = Vec::new();
        if self.variant.includes(Variant::Sgg) {
            out.push(GameConfig::sgg(self.k, self.b, self.p)?);
        }
        if self.variant.includes(Variant::SggAc) {
            match &self.access {
                Some(AccessGrid::A(values)) => {
                    for &a in values {
                        out.push(GameConfig::sgg_ac(self.k, self.b, self.p, a)?);
                    }
                }
                Some(AccessGrid::Xi(values)) => {
                    for &xi in values {
                        out.push(GameConfig::sgg_ac_with_xi(self.k, self.b, self.p, xi)?);
                    }
                }
                None => {}
            }
        }
        Ok(out)
    }

    pub fn load_graph(&self) -> Result<Graph> {
        match &self.source {
            GraphSource::Family(FamilySpec::ErRandom { n, prob, .. }) => {
                generate(&FamilySpec::ErRandom {
                    n: *n,
                    prob: *prob,
                    seed: self.graph_seed.unwrap_or(self.master_seed),
                })
            }
            GraphSource::Family(spec) => generate(spec),
            GraphSource::EdgeList(path) => Ok(read_edge_list(path)?.graph),
        }
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("{key}: cannot parse {value:?}")))
}

fn parse_list<T: std::str::FromStr>(key: &str, value: &str) -> Result<Vec<T>> {
    value
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| parse_num(key, t))
        .collect()
}

/// Parses a family name such as `star:100` or `er:50:0.1`.
pub fn parse_family(text: &str, seed: u64) -> Result<FamilySpec> {
    let parts: Vec<&str> = text.trim().split(':').map(str::trim).collect();
    let num = |i: usize| -> Result<usize> {
        parts
            .get(i)
            .ok_or_else(|| Error::Config(format!("family {text:?} is missing a parameter")))
            .and_then(|v| parse_num("graph", v))
    };
    let expect_len = |len: usize| {
        if parts.len() == len {
            Ok(())
        } else {
            Err(Error::Config(format!(
                "family {text:?}: expected {} parameter(s)",
                len - 1
            )))
        }
    };
    let spec = match parts[0].to_ascii_lowercase().as_str() {
        "karate" => {
            expect_len(1)?;
            FamilySpec::Karate
        }
        "star" => {
            expect_len(2)?;
            FamilySpec::Star { n: num(1)? }
        }
        "chain" => {
            expect_len(2)?;
            FamilySpec::Chain { n: num(1)? }
        }
        "complete" => {
            expect_len(2)?;
            FamilySpec::Complete { n: num(1)? }
        }
        "er" | "er_random" | "random" => {
            expect_len(3)?;
            FamilySpec::ErRandom {
                n: num(1)?,
                prob: parse_num("graph", parts[2])?,
                seed,
            }
        }
        "two_center_tree" => {
            expect_len(3)?;
            FamilySpec::TwoCenterTree {
                arm_len: num(1)?,
                arms: num(2)?,
            }
        }
        "center_arms_tree" => {
            expect_len(3)?;
            FamilySpec::CenterArmsTree {
                arm_len: num(1)?,
                arms: num(2)?,
            }
        }
        other => return Err(Error::Config(format!("unknown graph family {other:?}"))),
    };
    spec.validate()?;
    Ok(spec)
}

/// The experiment list of a named preset.
pub fn presets(name: &str) -> Result<Vec<ExperimentConfig>> {
    const K1_XI_GRID: [usize; 5] = [1, 2, 5, 10, 20];
    let row = |spec: FamilySpec, k: usize, xi: &[usize]| {
        let mut cfg = ExperimentConfig::new(GraphSource::Family(spec));
        cfg.variant = VariantChoice::Both;
        cfg.k = k;
        cfg.access = Some(AccessGrid::Xi(xi.to_vec()));
        cfg
    };
    match name {
        "table3_synthetic" => Ok(vec![
            row(FamilySpec::Star { n: 100 }, 1, &K1_XI_GRID),
            row(FamilySpec::Chain { n: 100 }, 1, &K1_XI_GRID),
            row(
                FamilySpec::ErRandom {
                    n: 50,
                    prob: 0.1,
                    seed: 0,
                },
                1,
                &K1_XI_GRID,
            ),
        ]),
        "table3_karate" => Ok(vec![row(FamilySpec::Karate, 1, &K1_XI_GRID)]),
        "table4_karate" => Ok((2..=4).map(|k| row(FamilySpec::Karate, k, &[6])).collect()),
        other => Err(Error::Config(format!(
            "unknown preset {other:?}; expected one of {}",
            PRESETS.join(", ")
        ))),
    }
}

/// One CSV row.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRow {
    pub dataset: String,
    pub n: usize,
    pub edges: usize,
    pub variant: Variant,
    pub k: usize,
    pub b: f64,
    pub p: f64,
    pub a: Option<f64>,
    pub xi: Option<usize>,
    pub runs: usize,
    pub seed: u64,
    pub opt_cost: Option<f64>,
    pub opt_proven: Option<bool>,
    pub stats: Option<CostStats>,
    pub poa_exact: Option<f64>,
    pub pos_exact: Option<f64>,
}

impl RunRow {
    pub fn to_csv(&self) -> String {
        let num = |x: Option<f64>| x.map(format_sig).unwrap_or_default();
        let stat = |f: fn(&CostStats) -> f64| num(self.stats.as_ref().map(f));
        [
            csv_field(&self.dataset),
            self.n.to_string(),
            self.edges.to_string(),
            self.variant.to_string(),
            self.k.to_string(),
            format_sig(self.b),
            format_sig(self.p),
            num(self.a),
            self.xi.map(|x| x.to_string()).unwrap_or_default(),
            self.runs.to_string(),
            self.seed.to_string(),
            num(self.opt_cost),
            self.opt_proven.map(|b| b.to_string()).unwrap_or_default(),
            stat(|s| s.mean),
            stat(|s| s.std),
            stat(|s| s.min),
            stat(|s| s.max),
            stat(|s| s.mean_passes),
            num(self.poa_exact),
            num(self.pos_exact),
        ]
        .join(",")
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Formats with at most 6 significant digits, dropping trailing zeros.
pub fn format_sig(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x.is_finite() {
            "0".into()
        } else {
            x.to_string()
        };
    }
    // the exponent after rounding to 6 digits, so 9.9999996 counts as 1e1
    let sci = format!("{x:.5e}");
    let exponent: i32 = sci[sci.find('e').expect("scientific format") + 1..]
        .parse()
        .expect("integer exponent");
    let decimals = (5 - exponent).max(0) as usize;
    let mut s = format!("{x:.decimals$}");
    if s.contains('.') {
        s = s.trim_end_matches('0').trim_end_matches('.').to_string();
    }
    s
}

/// Runs every analysis of `cfg`, writing side files (stabilized profiles,
/// LP files) next to `cfg.out` when requested.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<RunRow>> {
    cfg.validate()?;
    let graph = cfg.load_graph()?;
    let dataset = cfg.dataset_label();
    let hoods = Neighborhoods::new(&graph, cfg.k)?;
    let side_dir = cfg
        .out
        .as_deref()
        .and_then(Path::parent)
        .map(Path::to_path_buf)
        .unwrap_or_default();

    let needs_opt = cfg.analyses.optimum || cfg.analyses.stabilize;
    let opt: Option<OptResult> =
        needs_opt.then(|| min_dominating_exact_in(&hoods, cfg.node_budget));

    if cfg.analyses.export_lp {
        let path = side_dir.join(format!("{dataset}_k{}.lp", cfg.k));
        write_file(&path, &export_ilp(&hoods, cfg.p))?;
    }

    let mut rows = Vec::new();
    for game_cfg in cfg.games()? {
        let game = Game::new(&graph, game_cfg);
        let mut row = RunRow {
            dataset: dataset.clone(),
            n: graph.node_count(),
            edges: graph.edge_count(),
            variant: game_cfg.variant(),
            k: cfg.k,
            b: cfg.b,
            p: cfg.p,
            a: game_cfg.access_cost(),
            xi: game_cfg.xi(),
            runs: cfg.runs,
            seed: cfg.master_seed,
            opt_cost: opt.as_ref().map(|o| o.cost(cfg.p)),
            opt_proven: opt.as_ref().map(|o| o.proven_optimal),
            stats: None,
            poa_exact: None,
            pos_exact: None,
        };
        if cfg.analyses.dynamics {
            row.stats = Some(empirical_cost_stats(&game, cfg.runs, cfg.master_seed)?);
        }
        if cfg.analyses.exact_efficiency {
            let limit = match game_cfg.variant() {
                Variant::Sgg => DEFAULT_MAX_N_SGG,
                Variant::SggAc => DEFAULT_MAX_N_SGGAC,
            };
            match exact_efficiency(&game, limit) {
                Ok(report) => {
                    row.poa_exact = Some(report.poa);
                    row.pos_exact = Some(report.pos);
                    row.opt_cost.get_or_insert(report.opt_cost);
                    row.opt_proven.get_or_insert(report.exact);
                }
                Err(Error::Size { n, max_n }) => {
                    eprintln!("{dataset}: skipping exact efficiency, {n} nodes exceeds {max_n}");
                }
                Err(e) => return Err(e),
            }
        }
        if cfg.analyses.stabilize && game_cfg.variant() == Variant::SggAc {
            let opt = opt.as_ref().expect("optimum computed for stabilize");
            let profile = stabilize(&game, &opt.owners)?;
            let xi = game_cfg.xi().expect("SGG-AC has a threshold");
            let path = side_dir.join(format!("{dataset}_k{}_xi{xi}_stabilized.txt", cfg.k));
            write_file(&path, &profile.to_text())?;
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Header plus one line per row, LF-terminated.
pub fn rows_to_csv(rows: &[RunRow]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for row in rows {
        let _ = writeln!(out, "{}", row.to_csv());
    }
    out
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Sizes the global thread pool from `SHAREGAME_WORKERS` when set.
pub fn configure_workers() -> Result<()> {
    let Ok(raw) = std::env::var(WORKERS_ENV) else {
        return Ok(());
    };
    let workers: usize = raw.trim().parse().ok().filter(|&w| w > 0).ok_or_else(|| {
        Error::Config(format!(
            "{WORKERS_ENV} must be a positive integer, got {raw:?}"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build_global()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))
}

#[derive(Debug, Parser)]
#[command(
    name = "sharegame",
    version,
    about = "Shareable-goods games on networks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// Overrides applied on top of a config file or preset.
#[derive(Debug, Default, Args)]
pub struct Overrides {
    /// Master seed for the Monte Carlo runs.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Number of best-response runs per row.
    #[arg(long)]
    pub runs: Option<usize>,
    /// Comma-separated threshold grid for SGG-AC.
    #[arg(long, conflicts_with = "a")]
    pub xi: Option<String>,
    /// Comma-separated access-cost grid for SGG-AC.
    #[arg(long)]
    pub a: Option<String>,
    /// sgg, sgg-ac or both.
    #[arg(long)]
    pub variant: Option<String>,
    /// Hop radius.
    #[arg(long)]
    pub k: Option<usize>,
}

impl Overrides {
    pub fn apply(&self, cfg: &mut ExperimentConfig) -> Result<()> {
        if let Some(seed) = self.seed {
            cfg.master_seed = seed;
        }
        if let Some(runs) = self.runs {
            cfg.runs = runs;
        }
        if let Some(xi) = &self.xi {
            cfg.set("xi", xi)?;
        }
        if let Some(a) = &self.a {
            cfg.set("a", a)?;
        }
        if let Some(v) = &self.variant {
            cfg.set("variant", v)?;
        }
        if let Some(k) = self.k {
            cfg.k = k;
        }
        cfg.validate()
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the experiment described by a config file.
    Run {
        config: PathBuf,
        /// CSV output path (stdout when neither this nor `out` is set).
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Run a named preset (table3_synthetic, table3_karate, table4_karate).
    Preset {
        name: String,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Minimum-cost purchase set of a graph.
    Optimum {
        /// Family name, e.g. karate, star:100, er:50:0.1.
        #[arg(long, required_unless_present = "graph", conflicts_with = "graph")]
        family: Option<String>,
        /// Edge-list file.
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long)]
        k: usize,
        /// Seed for random families.
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
    },
    /// Write the covering integer program of a graph as an LP file.
    ExportLp {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        out: PathBuf,
        /// Objective coefficient of every purchase.
        #[arg(long, default_value_t = 1.0)]
        p: f64,
    },
}

/// Executes a parsed command line, returning what to print on stdout.
pub fn execute(cli: Cli) -> Result<String> {
    match cli.command {
        Command::Run {
            config,
            out,
            overrides,
        } => {
            let mut cfg = ExperimentConfig::from_file(&config)?;
            if out.is_some() {
                cfg.out = out;
            }
            overrides.apply(&mut cfg)?;
            let csv = rows_to_csv(&run_experiment(&cfg)?);
            emit(cfg.out.as_deref(), csv)
        }
        Command::Preset {
            name,
            out,
            overrides,
        } => {
            let mut rows = Vec::new();
            for mut cfg in presets(&name)? {
                cfg.out = Some(out.clone());
                overrides.apply(&mut cfg)?;
                rows.extend(run_experiment(&cfg)?);
            }
            emit(Some(&out), rows_to_csv(&rows))
        }
        Command::Optimum {
            family,
            graph,
            k,
            seed,
            budget,
        } => {
            let g = match (family, graph) {
                (Some(f), _) => generate(&parse_family(&f, seed)?)?,
                (None, Some(path)) => read_edge_list(&path)?.graph,
                (None, None) => return Err(Error::Argument("give --family or --graph".into())),
            };
            let r = min_dominating_exact_in(&Neighborhoods::new(&g, k)?, budget);
            let owners: Vec<String> = r.owners.iter().map(|o| o.to_string()).collect();
            Ok(format!(
                "size {}\nproven {}\nnodes_explored {}\nowners {}\n",
                r.size(),
                r.proven_optimal,
                r.nodes_explored,
                owners.join(" ")
            ))
        }
        Command::ExportLp { graph, k, out, p } => {
            if !(p > 0.0 && p.is_finite()) {
                return Err(Error::Argument(format!("price must be positive, got {p}")));
            }
            let g = read_edge_list(&graph)?.graph;
            write_file(&out, &export_ilp(&Neighborhoods::new(&g, k)?, p))?;
            Ok(String::new())
        }
    }
}

fn emit(out: Option<&Path>, csv: String) -> Result<String> {
    match out {
        Some(path) => write_file(path, &csv).map(|_| String::new()),
        None => Ok(csv),
    }
}
