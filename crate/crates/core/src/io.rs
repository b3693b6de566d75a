//! Config documents, results files and atomic file output.
//!
//! Config is TOML with a `schema_version` key; unknown keys are rejected and
//! omitted keys fall back to [`default_grid`]. Results are CSV with a
//! fixed header, reals written with 9 significant digits.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Deserialize;
use toml::Spanned;

use crate::dynamics::{InitPolicy, Termination, UpdateRule};
use crate::equilibrium::EquilibriumClass;
use crate::error::{Error, Result};
use crate::experiments::{
    default_grid, BetaRule, SurfacePoint, SweepConfig, SweepRecord, DEFAULT_PI_REALIZATIONS,
    SCHEMA_VERSION,
};
use crate::game::{GameKind, PayoffParams};
use crate::graph::TopologySpec;

pub const RESULTS_HEADER: [&str; 18] = [
    "schema_version",
    "topology",
    "n",
    "mean_degree_or_m",
    "game",
    "dynamics",
    "info",
    "alpha",
    "beta",
    "ratio",
    "rho0",
    "realization",
    "seed",
    "steps",
    "termination",
    "d1",
    "df",
    "class",
];

pub const AGGREGATE_HEADER: [&str; 27] = [
    "schema_version",
    "topology",
    "n",
    "mean_degree_or_m",
    "game",
    "dynamics",
    "info",
    "alpha",
    "beta",
    "ratio",
    "rho0",
    "realizations",
    "fixed_point",
    "two_cycle",
    "budget_exhausted",
    "mean_d1",
    "std_d1",
    "mean_df",
    "std_df",
    "converged_mean_d1",
    "converged_mean_df",
    "ss",
    "fs",
    "sh",
    "fh",
    "ne",
    "unclassified",
];

/// Rounds to 9 significant digits.
pub fn round_sig9(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.8e}").parse().unwrap_or(x)
}

/// Shortest decimal text for `x` rounded to 9 significant digits.
pub fn fmt_sig9(x: f64) -> String {
    if x.is_nan() {
        return "NaN".to_string();
    }
    format!("{}", round_sig9(x))
}

// ---------------------------------------------------------------- config

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    schema_version: Option<u32>,
    base_seed: Option<u64>,
    realizations: Option<usize>,
    workers: Option<usize>,
    games: Option<Vec<GameKind>>,
    rho0: Option<Vec<f64>>,
    info: Option<String>,
    init: Option<InitPolicy>,
    topology: Option<Vec<Spanned<TopologySpec>>>,
    dynamics: Option<Spanned<RawDynamics>>,
    rewards: Option<Spanned<RawRewards>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDynamics {
    rule: Option<String>,
    update_fraction: Option<f64>,
    max_steps: Option<usize>,
    convergence_window: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRewards {
    alpha: Option<Vec<f64>>,
    beta: Option<Vec<Vec<f64>>>,
    beta_count: Option<usize>,
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

fn at_line(line: usize, key: &str, e: impl std::fmt::Display) -> Error {
    Error::parse(Some(line), format!("{key}: {e}"))
}

/// Parses and validates a sweep config document.
pub fn parse_config(text: &str) -> Result<SweepConfig> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| {
        let line = e.span().map(|s| line_of(text, s.start));
        Error::parse(line, e.message().to_string())
    })?;

    match raw.schema_version {
        Some(v) if v == SCHEMA_VERSION => {}
        Some(v) => {
            return Err(Error::parse(
                None,
                format!("schema_version: unsupported version {v} (expected {SCHEMA_VERSION})"),
            ))
        }
        None => return Err(Error::parse(None, "schema_version: missing required key")),
    }
    let base_seed = raw
        .base_seed
        .ok_or_else(|| Error::parse(None, "base_seed: missing required key"))?;

    let mut cfg = default_grid();
    cfg.base_seed = base_seed;

    if let Some(topologies) = raw.topology {
        cfg.topologies = Vec::with_capacity(topologies.len());
        for (i, t) in topologies.into_iter().enumerate() {
            let line = line_of(text, t.span().start);
            let spec = t.into_inner();
            spec.validate()
                .map_err(|e| at_line(line, &format!("topology[{i}]"), e))?;
            cfg.topologies.push(spec);
        }
    }
    if let Some(games) = raw.games {
        cfg.games = games;
    }
    if let Some(rho0) = raw.rho0 {
        cfg.rho0_grid = rho0;
    }
    if let Some(init) = raw.init {
        cfg.init = init;
    }
    if let Some(w) = raw.workers {
        cfg.workers = w;
    }

    let info = raw.info.as_deref().unwrap_or("complete");
    let (dyn_line, raw_dyn) = match raw.dynamics {
        Some(d) => (Some(line_of(text, d.span().start)), Some(d.into_inner())),
        None => (None, None),
    };
    let rule_label = raw_dyn.as_ref().and_then(|d| d.rule.as_deref()).unwrap_or("br");
    cfg.dynamics.rule = UpdateRule::from_labels(rule_label, info)
        .map_err(|e| Error::parse(dyn_line, format!("dynamics.rule/info: {e}")))?;
    if let Some(d) = raw_dyn {
        if let Some(f) = d.update_fraction {
            cfg.dynamics.update_fraction = f;
        }
        if let Some(m) = d.max_steps {
            cfg.dynamics.max_steps = m;
        }
        if let Some(w) = d.convergence_window {
            cfg.dynamics.convergence_window = w;
        }
        cfg.dynamics
            .validate()
            .map_err(|e| Error::parse(dyn_line, format!("dynamics: {e}")))?;
    }
    cfg.realizations = match raw.realizations {
        Some(r) => r,
        None if cfg.dynamics.rule == UpdateRule::ProportionalImitation => DEFAULT_PI_REALIZATIONS,
        None => cfg.realizations,
    };

    if let Some(rw) = raw.rewards {
        let line = line_of(text, rw.span().start);
        let rw = rw.into_inner();
        if let Some(alpha) = rw.alpha {
            cfg.alpha_grid = alpha;
        }
        cfg.beta_rule = match (rw.beta, rw.beta_count) {
            (Some(_), Some(_)) => {
                return Err(at_line(line, "rewards", "give either `beta` or `beta_count`, not both"))
            }
            (Some(lists), None) => BetaRule::PerAlpha(lists),
            (None, Some(count)) => BetaRule::EvenlySpaced(count),
            (None, None) => cfg.beta_rule,
        };
        if let BetaRule::PerAlpha(lists) = &cfg.beta_rule {
            if lists.len() != cfg.alpha_grid.len() {
                return Err(at_line(
                    line,
                    "rewards.beta",
                    format!("{} lists for {} alpha values", lists.len(), cfg.alpha_grid.len()),
                ));
            }
            for (i, (alpha, betas)) in cfg.alpha_grid.iter().zip(lists).enumerate() {
                for (j, beta) in betas.iter().enumerate() {
                    PayoffParams::new(*alpha, *beta)
                        .map_err(|e| at_line(line, &format!("rewards.beta[{i}][{j}]"), e))?;
                }
            }
        }
        cfg.reward_pairs()
            .map_err(|e| at_line(line, "rewards", e))?;
    }

    cfg.validate().map_err(|e| Error::parse(None, e.to_string()))?;
    Ok(cfg)
}

pub fn read_config(path: &Path) -> Result<SweepConfig> {
    parse_config(&fs::read_to_string(path)?)
}

fn float_list(xs: &[f64]) -> String {
    let items: Vec<String> = xs.iter().map(|x| format!("{x:?}")).collect();
    format!("[{}]", items.join(", "))
}

/// Renders `cfg` as a config document that parses back to an equal value.
pub fn config_to_toml(cfg: &SweepConfig) -> String {
    let games: Vec<String> = cfg.games.iter().map(|g| format!("\"{}\"", g.label())).collect();
    let init = match cfg.init {
        InitPolicy::UniformRandomAction => "uniform_random_action",
        InitPolicy::AllPreferred => "all_preferred",
    };
    let d = &cfg.dynamics;
    let mut s = format!(
        "schema_version = {SCHEMA_VERSION}\nbase_seed = {}\nrealizations = {}\nworkers = {}\n\
         games = [{}]\nrho0 = {}\ninfo = \"{}\"\ninit = \"{init}\"\n",
        cfg.base_seed,
        cfg.realizations,
        cfg.workers,
        games.join(", "),
        float_list(&cfg.rho0_grid),
        d.rule.info_label(),
    );
    for t in &cfg.topologies {
        match t {
            TopologySpec::Er { n, mean_degree } => {
                s += &format!("\n[[topology]]\nkind = \"er\"\nn = {n}\nmean_degree = {mean_degree:?}\n")
            }
            TopologySpec::Ba { n, m_attach } => {
                s += &format!("\n[[topology]]\nkind = \"ba\"\nn = {n}\nm_attach = {m_attach}\n")
            }
        }
    }
    s += &format!(
        "\n[dynamics]\nrule = \"{}\"\nupdate_fraction = {:?}\nmax_steps = {}\nconvergence_window = {}\n",
        d.rule.dynamics_label(),
        d.update_fraction,
        d.max_steps,
        d.convergence_window
    );
    s += &format!("\n[rewards]\nalpha = {}\n", float_list(&cfg.alpha_grid));
    match &cfg.beta_rule {
        BetaRule::EvenlySpaced(count) => s += &format!("beta_count = {count}\n"),
        BetaRule::PerAlpha(lists) => {
            let rows: Vec<String> = lists.iter().map(|l| float_list(l)).collect();
            s += &format!("beta = [{}]\n", rows.join(", "));
        }
    }
    s
}

// --------------------------------------------------------------- results

/// Writes `bytes` to `path` through a temporary file in the same directory
/// followed by a rename, so readers never see a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

fn csv_error(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::parse(None, format!("{other:?}")),
    }
}

fn record_row(r: &SweepRecord) -> Vec<String> {
    vec![
        r.schema_version.to_string(),
        r.topology.clone(),
        r.n.to_string(),
        fmt_sig9(r.mean_degree_or_m),
        r.game.label().to_string(),
        r.dynamics.clone(),
        r.info.clone(),
        fmt_sig9(r.alpha),
        fmt_sig9(r.beta),
        fmt_sig9(r.ratio),
        fmt_sig9(r.rho0),
        r.realization.to_string(),
        r.seed.to_string(),
        r.steps.to_string(),
        r.termination.label().to_string(),
        fmt_sig9(r.d1),
        fmt_sig9(r.df),
        r.class.map_or("none", EquilibriumClass::label).to_string(),
    ]
}

pub fn results_to_csv(records: &[SweepRecord]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(RESULTS_HEADER).map_err(csv_error)?;
    for r in records {
        w.write_record(record_row(r)).map_err(csv_error)?;
    }
    w.into_inner().map_err(|e| Error::Io(e.into_error()))
}

pub fn write_results(records: &[SweepRecord], path: &Path) -> Result<()> {
    write_atomic(path, &results_to_csv(records)?)
}

fn field<T: std::str::FromStr>(row: &csv::StringRecord, idx: usize, line: usize) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    let raw = row
        .get(idx)
        .ok_or_else(|| Error::parse(Some(line), format!("missing column `{}`", RESULTS_HEADER[idx])))?;
    raw.parse::<T>()
        .map_err(|e| Error::parse(Some(line), format!("column `{}`: {e}", RESULTS_HEADER[idx])))
}

pub fn results_from_csv(text: &str) -> Result<Vec<SweepRecord>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(text.as_bytes());
    let header = rdr.headers().map_err(csv_error)?.clone();
    if header.iter().ne(RESULTS_HEADER.iter().copied()) {
        return Err(Error::parse(Some(1), "unexpected results header"));
    }
    let mut out = Vec::new();
    for (idx, row) in rdr.records().enumerate() {
        let line = idx + 2;
        let row = row.map_err(|e| Error::parse(Some(line), e.to_string()))?;
        if row.len() != RESULTS_HEADER.len() {
            return Err(Error::parse(
                Some(line),
                format!("expected {} columns, found {}", RESULTS_HEADER.len(), row.len()),
            ));
        }
        let class_text: String = field(&row, 17, line)?;
        let class = match class_text.as_str() {
            "none" => None,
            other => Some(
                other
                    .parse::<EquilibriumClass>()
                    .map_err(|e| Error::parse(Some(line), e.to_string()))?,
            ),
        };
        let game: String = field(&row, 4, line)?;
        let termination: String = field(&row, 14, line)?;
        out.push(SweepRecord {
            schema_version: field(&row, 0, line)?,
            topology: field(&row, 1, line)?,
            n: field(&row, 2, line)?,
            mean_degree_or_m: field(&row, 3, line)?,
            game: game
                .parse()
                .map_err(|e: Error| Error::parse(Some(line), e.to_string()))?,
            dynamics: field(&row, 5, line)?,
            info: field(&row, 6, line)?,
            alpha: field(&row, 7, line)?,
            beta: field(&row, 8, line)?,
            ratio: field(&row, 9, line)?,
            rho0: field(&row, 10, line)?,
            realization: field(&row, 11, line)?,
            seed: field(&row, 12, line)?,
            steps: field(&row, 13, line)?,
            termination: termination
                .parse::<Termination>()
                .map_err(|e| Error::parse(Some(line), e.to_string()))?,
            d1: field(&row, 15, line)?,
            df: field(&row, 16, line)?,
            class,
        });
    }
    Ok(out)
}

pub fn read_results(path: &Path) -> Result<Vec<SweepRecord>> {
    results_from_csv(&fs::read_to_string(path)?)
}

pub fn aggregate_to_csv(points: &[SurfacePoint]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(AGGREGATE_HEADER).map_err(csv_error)?;
    for p in points {
        let c = &p.classes;
        let row = vec![
            SCHEMA_VERSION.to_string(),
            p.topology.clone(),
            p.n.to_string(),
            fmt_sig9(p.mean_degree_or_m),
            p.game.label().to_string(),
            p.dynamics.clone(),
            p.info.clone(),
            fmt_sig9(p.alpha),
            fmt_sig9(p.beta),
            fmt_sig9(p.ratio),
            fmt_sig9(p.rho0),
            p.realizations.to_string(),
            p.fixed_point.to_string(),
            p.two_cycle.to_string(),
            p.budget_exhausted.to_string(),
            fmt_sig9(p.mean_d1),
            fmt_sig9(p.std_d1),
            fmt_sig9(p.mean_df),
            fmt_sig9(p.std_df),
            fmt_sig9(p.converged_mean_d1),
            fmt_sig9(p.converged_mean_df),
            c.ss.to_string(),
            c.fs.to_string(),
            c.sh.to_string(),
            c.fh.to_string(),
            c.ne.to_string(),
            c.unclassified.to_string(),
        ];
        w.write_record(row).map_err(csv_error)?;
    }
    w.into_inner().map_err(|e| Error::Io(e.into_error()))
}

/// Aggregates as a JSON document: `{"schema_version": 1, "points": [...]}`.
pub fn aggregate_to_json(points: &[SurfacePoint]) -> Result<Vec<u8>> {
    let rounded: Vec<SurfacePoint> = points
        .iter()
        .map(|p| SurfacePoint {
            mean_d1: round_sig9(p.mean_d1),
            std_d1: round_sig9(p.std_d1),
            mean_df: round_sig9(p.mean_df),
            std_df: round_sig9(p.std_df),
            converged_mean_d1: round_sig9(p.converged_mean_d1),
            converged_mean_df: round_sig9(p.converged_mean_df),
            ratio: round_sig9(p.ratio),
            ..p.clone()
        })
        .collect();
    let doc = serde_json::json!({
        "schema_version": SCHEMA_VERSION,
        "points": rounded,
    });
    let mut bytes = serde_json::to_vec_pretty(&doc).map_err(|e| Error::parse(None, e.to_string()))?;
    bytes.push(b'\n');
    Ok(bytes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::{aggregate, run_sweep};
    use proptest::prelude::*;

    const MINIMAL: &str = "schema_version = 1\nbase_seed = 42\n";

    #[test]
    fn minimal_config_uses_grid_defaults() {
        let cfg = parse_config(MINIMAL).unwrap();
        let mut expected = default_grid();
        expected.base_seed = 42;
        assert_eq!(cfg, expected);
    }

    #[test]
    fn missing_seed_is_an_error() {
        let err = parse_config("schema_version = 1\n").unwrap_err().to_string();
        assert!(err.contains("base_seed"), "{err}");
        assert!(parse_config("base_seed = 1\n").is_err());
        assert!(parse_config("schema_version = 2\nbase_seed = 1\n").is_err());
    }

    #[test]
    fn unknown_keys_are_rejected_with_line() {
        let err = parse_config("schema_version = 1\nbase_seed = 1\nbogus = 3\n")
            .unwrap_err()
            .to_string();
        assert!(err.contains("line 3"), "{err}");
        let err = parse_config("schema_version = 1\nbase_seed = 1\n[dynamics]\nrule = \"br\"\nspeed = 2\n")
            .unwrap_err()
            .to_string();
        assert!(err.contains("speed"), "{err}");
    }

    #[test]
    fn equal_rewards_are_rejected() {
        let text = "schema_version = 1\nbase_seed = 1\n\n[rewards]\nalpha = [0.5]\nbeta = [[0.5]]\n";
        let err = parse_config(text).unwrap_err().to_string();
        assert!(err.contains("line 4") && err.contains("alpha=0.5, beta=0.5"), "{err}");
    }

    #[test]
    fn alpha_at_twice_beta_bound_is_rejected() {
        let text = "schema_version = 1\nbase_seed = 1\n[rewards]\nalpha = [0.9]\nbeta = [[0.5]]\n";
        assert!(parse_config(text).is_ok());
        let text = "schema_version = 1\nbase_seed = 1\n[rewards]\nalpha = [1.0]\nbeta = [[0.5]]\n";
        let err = parse_config(text).unwrap_err().to_string();
        assert!(err.contains("rewards.beta[0][0]"), "{err}");
    }

    #[test]
    fn topology_errors_carry_line() {
        let text = "schema_version = 1\nbase_seed = 1\n\n[[topology]]\nkind = \"er\"\nn = 10\nmean_degree = 12.0\n";
        let err = parse_config(text).unwrap_err().to_string();
        assert!(err.contains("line 4") && err.contains("topology[0]"), "{err}");
    }

    #[test]
    fn full_config() {
        let text = r#"
schema_version = 1
base_seed = 7
realizations = 4
workers = 2
games = ["ag"]
rho0 = [0.25, 0.75]
info = "complete"
init = "all_preferred"

[[topology]]
kind = "ba"
n = 50
m_attach = 2

[dynamics]
rule = "pi"
update_fraction = 0.5
max_steps = 30
convergence_window = 5

[rewards]
alpha = [0.6]
beta_count = 3
"#;
        let cfg = parse_config(text).unwrap();
        assert_eq!(cfg.topologies, vec![TopologySpec::Ba { n: 50, m_attach: 2 }]);
        assert_eq!(cfg.games, vec![GameKind::Anticoordination]);
        assert_eq!(cfg.dynamics.rule, UpdateRule::ProportionalImitation);
        assert_eq!(cfg.dynamics.update_fraction, 0.5);
        assert_eq!(cfg.reward_pairs().unwrap().len(), 3);
        assert_eq!(cfg.realizations, 4);
        assert_eq!(cfg.init, InitPolicy::AllPreferred);
    }

    #[test]
    fn imitation_defaults_to_ten_realizations_and_needs_complete_info() {
        let cfg = parse_config("schema_version = 1\nbase_seed = 1\n[dynamics]\nrule = \"pi\"\n").unwrap();
        assert_eq!(cfg.realizations, 10);
        assert!(parse_config("schema_version = 1\nbase_seed = 1\ninfo = \"incomplete\"\n[dynamics]\nrule = \"pi\"\n").is_err());
    }

    #[test]
    fn rendered_configs_parse_back() {
        use crate::experiments::Figure;
        let mut cfgs = vec![default_grid()];
        cfgs.extend(Figure::ALL.iter().map(|f| f.config(9)));
        for cfg in cfgs {
            let text = config_to_toml(&cfg);
            assert_eq!(parse_config(&text).unwrap(), cfg, "{text}");
        }
    }

    #[test]
    fn empty_results_round_trip() {
        let bytes = results_to_csv(&[]).unwrap();
        let text = String::from_utf8(bytes).unwrap();
        assert_eq!(text.lines().count(), 1);
        assert!(results_from_csv(&text).unwrap().is_empty());
    }

    fn tiny_records() -> Vec<SweepRecord> {
        let mut cfg = parse_config(
            "schema_version = 1\nbase_seed = 3\nrealizations = 2\nrho0 = [0.3, 0.5]\n[[topology]]\nkind = \"er\"\nn = 30\nmean_degree = 4.0\n[rewards]\nalpha = [0.7]\nbeta_count = 2\n",
        )
        .unwrap();
        cfg.games = vec![GameKind::Coordination];
        run_sweep(&cfg).unwrap()
    }

    #[test]
    fn results_round_trip_and_formatting() {
        let mut records = tiny_records();
        records[0].d1 = 0.5;
        let text = String::from_utf8(results_to_csv(&records).unwrap()).unwrap();
        let row = text.lines().nth(1).unwrap();
        assert_eq!(row.split(',').nth(15), Some("0.5"));
        let back = results_from_csv(&text).unwrap();
        let expected: Vec<SweepRecord> = records.iter().map(SweepRecord::quantized).collect();
        assert_eq!(back, expected);
        // compare rendered tables so NaN cells count as equal
        assert_eq!(
            aggregate_to_csv(&aggregate(&back)).unwrap(),
            aggregate_to_csv(&aggregate(&records)).unwrap()
        );
    }

    #[test]
    fn malformed_results_report_row() {
        let records = tiny_records();
        let text = String::from_utf8(results_to_csv(&records).unwrap()).unwrap();
        let mut lines: Vec<String> = text.lines().map(String::from).collect();
        lines[3] = lines[3].replace("fixed_point", "stuck").replace("two_cycle", "stuck");
        let broken = lines.join("\n");
        let err = results_from_csv(&broken).unwrap_err().to_string();
        assert!(err.contains("line 4"), "{err}");
    }

    #[test]
    fn aggregate_row_count_for_full_grid() {
        // 64 reward pairs x 11 rho0 values, one realization each, built by hand
        let cfg = default_grid();
        let pairs = cfg.reward_pairs().unwrap();
        let mut records = Vec::new();
        for p in &pairs {
            for &rho0 in &cfg.rho0_grid {
                records.push(SweepRecord {
                    schema_version: 1,
                    topology: "er".into(),
                    n: 100,
                    mean_degree_or_m: 5.0,
                    game: GameKind::Coordination,
                    dynamics: "br".into(),
                    info: "complete".into(),
                    alpha: p.alpha(),
                    beta: p.beta(),
                    ratio: p.ratio(),
                    rho0,
                    realization: 0,
                    seed: 0,
                    steps: 1,
                    termination: Termination::FixedPoint,
                    d1: 0.0,
                    df: 0.0,
                    class: Some(EquilibriumClass::SatisfactorySpecialized),
                });
            }
        }
        let table = aggregate(&records);
        assert_eq!(table.len(), 704);
        let text = String::from_utf8(aggregate_to_csv(&table).unwrap()).unwrap();
        assert_eq!(text.lines().count(), 705);
        let json: serde_json::Value = serde_json::from_slice(&aggregate_to_json(&table).unwrap()).unwrap();
        assert_eq!(json["points"].as_array().unwrap().len(), 704);
    }

    #[test]
    fn atomic_write_replaces_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.csv");
        write_atomic(&path, b"first").unwrap();
        write_atomic(&path, b"second").unwrap();
        assert_eq!(fs::read(&path).unwrap(), b"second");
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
    }

    proptest! {
        #[test]
        fn sig9_is_idempotent_and_close(x in -1e6f64..1e6) {
            let r = round_sig9(x);
            prop_assert_eq!(round_sig9(r), r);
            prop_assert_eq!(fmt_sig9(r).parse::<f64>().unwrap(), r);
            prop_assert!((r - x).abs() <= 1e-8 * x.abs().max(1e-300));
        }
    }
}
