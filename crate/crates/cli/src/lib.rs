//! Configuration, input files, table export and verification suites behind the
//! `localp2` binary.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use localp2::mirror::Chart;
use localp2::rational::{self, Rational};
use localp2::solver::cache::{run_cached, Cache};
use localp2::solver::tables::{InvariantTables, Table, TableKind};
use localp2::solver::verify::{self, Report};
use localp2::solver::{self, GenusInputs, InputSet, Mode, Orders, Solver, SolverConfig, SolverError};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    /// 2 for bad configuration or inputs, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Solver(SolverError::Precision(_) | SolverError::Support(_) | SolverError::OracleMismatch { .. }) => 1,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.to_path_buf(), source }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
    Md,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "md" => Ok(Format::Md),
            _ => Err(format!("unknown format {s:?} (expected json, csv or md)")),
        }
    }
}

/// Everything a run needs. Every field is optional in the config file; flags
/// override file values.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub max_genus: Option<u32>,
    pub max_degree: Option<i64>,
    pub max_insertions: Option<i64>,
    pub con_max: Option<i64>,
    pub mode: Option<Mode>,
    pub a: Option<String>,
    pub inputs: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub cache: Option<PathBuf>,
    #[serde(default)]
    pub orders: BTreeMap<String, i64>,
    pub format: Option<Format>,
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<RunConfig> {
        let text = fs::read_to_string(path).map_err(io_err(path))?;
        serde_json::from_str(&text).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))
    }

    /// `self` with every field set in `over` replaced.
    pub fn merged(mut self, over: RunConfig) -> RunConfig {
        macro_rules! take {
            ($($f:ident),*) => { $( if over.$f.is_some() { self.$f = over.$f; } )* };
        }
        take!(max_genus, max_degree, max_insertions, con_max, mode, a, inputs, out, cache, format);
        self.orders.extend(over.orders);
        self
    }

    pub fn mode(&self) -> Mode {
        self.mode.unwrap_or_default()
    }

    pub fn format(&self) -> Format {
        self.format.unwrap_or_default()
    }

    pub fn out_dir(&self) -> PathBuf {
        self.out.clone().unwrap_or_else(|| PathBuf::from("out"))
    }

    pub fn solver_config(&self) -> Result<SolverConfig> {
        let g = self.max_genus.unwrap_or(7);
        if g < 1 {
            return Err(CliError::Invalid("max-genus must be at least 1".into()));
        }
        let mut c = SolverConfig::new(g);
        if let Some(d) = self.max_degree {
            c.max_degree = d;
        }
        if let Some(k) = self.max_insertions {
            c.max_insertions = k;
        }
        if let Some(m) = self.con_max {
            c.con_max = m;
        }
        if c.max_degree < 1 || c.max_insertions < 3 || c.con_max < -1 {
            return Err(CliError::Invalid("table ranges must be positive".into()));
        }
        if let Some(a) = &self.a {
            c.a = rational::parse(a).map_err(|e| CliError::Invalid(format!("--a {a:?}: {e}")))?;
        }
        c.orders = Orders::for_ranges(g, c.max_degree, c.max_insertions, c.con_max);
        for (k, &v) in &self.orders {
            let chart = match k.as_str() {
                "lr" => Chart::LargeRadius,
                "orb" => Chart::Orbifold,
                "con" => Chart::Conifold,
                _ => return Err(CliError::Invalid(format!("unknown order key {k:?} (expected lr, orb or con)"))),
            };
            if v < 1 {
                return Err(CliError::Invalid(format!("order {k}={v} must be positive")));
            }
            c.orders.set(chart, v);
        }
        Ok(c)
    }

    /// Embedded inputs, overridden per genus by the `inputs` file.
    pub fn input_set(&self) -> Result<InputSet> {
        let g = self.max_genus.unwrap_or(7);
        let mut set = solver::default_inputs(g, self.mode());
        if let Some(path) = &self.inputs {
            let text = fs::read_to_string(path).map_err(io_err(path))?;
            let file: BTreeMap<String, InputRecord> =
                serde_json::from_str(&text).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))?;
            for (key, rec) in file {
                let genus: u32 = key
                    .parse()
                    .map_err(|_| CliError::Invalid(format!("{}: genus key {key:?} is not an integer", path.display())))?;
                if genus < 2 || genus > g {
                    continue;
                }
                set.insert(genus, rec.into_inputs(genus, self.mode())?);
            }
        }
        for inp in set.values() {
            inp.validate()?;
        }
        Ok(set)
    }
}

/// One genus of an inputs file: `{"gw0": "p/q", "gv": {"1": "p/q", …}}`.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputRecord {
    pub gw0: Option<String>,
    #[serde(default)]
    pub gv: BTreeMap<String, String>,
}

impl InputRecord {
    fn into_inputs(self, g: u32, mode: Mode) -> Result<GenusInputs> {
        let parse = |s: &str| rational::parse(s).map_err(|e| CliError::Invalid(format!("genus {g} value {s:?}: {e}")));
        let gw0 = self.gw0.as_deref().map(parse).transpose()?;
        let mut gv_low = BTreeMap::new();
        for (d, v) in &self.gv {
            let d: u32 = d.parse().map_err(|_| CliError::Invalid(format!("genus {g} degree {d:?}")))?;
            gv_low.insert(d, parse(v)?);
        }
        Ok(GenusInputs { g, gv_low, gw0, mode })
    }
}

/// Runs the pipeline, through the cache when one is configured.
pub fn compute(cfg: &RunConfig) -> Result<(Solver, InvariantTables)> {
    let sc = cfg.solver_config()?;
    let inputs = cfg.input_set()?;
    match &cfg.cache {
        Some(dir) => {
            let cache = Cache::open(dir)?;
            let (s, t, _) = run_cached(sc, &inputs, &cache)?;
            Ok((s, t))
        }
        None => Ok(solver::run(sc, &inputs)?),
    }
}

/// `{table, genus, degree_or_insertions, value}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Record {
    pub table: TableKind,
    pub genus: u32,
    pub degree_or_insertions: i64,
    #[serde(with = "localp2::rational::serde_str")]
    pub value: Rational,
}

pub fn to_records(t: &InvariantTables) -> Vec<Record> {
    TableKind::ALL
        .into_iter()
        .flat_map(|kind| {
            t.get(kind).iter().map(move |(&(genus, i), v)| Record {
                table: kind,
                genus,
                degree_or_insertions: i,
                value: v.clone(),
            })
        })
        .collect()
}

pub fn from_records(records: &[Record]) -> InvariantTables {
    let mut t = InvariantTables::default();
    for r in records {
        t.get_mut(r.table).insert((r.genus, r.degree_or_insertions), r.value.clone());
    }
    t
}

fn columns(t: &Table) -> Vec<i64> {
    let mut c: Vec<i64> = t.keys().map(|k| k.1).collect();
    c.sort_unstable();
    c.dedup();
    c
}

fn genera(t: &Table) -> Vec<u32> {
    let mut g: Vec<u32> = t.keys().map(|k| k.0).collect();
    g.dedup();
    g
}

/// One row per genus and one column per index; missing cells are empty.
pub fn table_to_csv(t: &Table) -> String {
    let cols = columns(t);
    let mut w = csv::Writer::from_writer(Vec::new());
    let header: Vec<String> = std::iter::once("genus".to_string()).chain(cols.iter().map(|c| c.to_string())).collect();
    w.write_record(&header).expect("in-memory write");
    for g in genera(t) {
        let row: Vec<String> = std::iter::once(g.to_string())
            .chain(cols.iter().map(|&c| t.get(&(g, c)).map(rational::to_canonical).unwrap_or_default()))
            .collect();
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
}

pub fn table_from_csv(text: &str) -> Result<Table> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let bad = |e: String| CliError::Invalid(format!("csv: {e}"));
    let cols: Vec<i64> = r
        .headers()
        .map_err(|e| bad(e.to_string()))?
        .iter()
        .skip(1)
        .map(|h| h.parse().map_err(|_| bad(format!("column {h:?} is not an index"))))
        .collect::<Result<_>>()?;
    let mut t = Table::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        let g: u32 = rec.get(0).unwrap_or("").parse().map_err(|_| bad("bad genus cell".into()))?;
        for (cell, &c) in rec.iter().skip(1).zip(&cols) {
            if !cell.is_empty() {
                t.insert((g, c), rational::parse(cell).map_err(|e| bad(format!("{cell:?}: {e}")))?);
            }
        }
    }
    Ok(t)
}

pub fn tables_to_md(t: &InvariantTables) -> String {
    let mut s = String::new();
    for kind in TableKind::ALL {
        let table = t.get(kind);
        let cols = columns(table);
        let _ = writeln!(s, "## {}\n", kind.title());
        let _ = write!(s, "| g \\ {} |", kind.index_name());
        for c in &cols {
            let _ = write!(s, " {c} |");
        }
        let _ = write!(s, "\n|---|");
        s.push_str(&"---|".repeat(cols.len()));
        s.push('\n');
        for g in genera(table) {
            let _ = write!(s, "| {g} |");
            for c in &cols {
                let _ = write!(s, " {} |", table.get(&(g, *c)).map(rational::to_canonical).unwrap_or_default());
            }
            s.push('\n');
        }
        s.push('\n');
    }
    s
}

/// Writes `t` under `dir` and returns the files written.
pub fn export(t: &InvariantTables, format: Format, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let mut files = Vec::new();
    let mut put = |name: String, body: String| -> Result<()> {
        let p = dir.join(name);
        fs::write(&p, body).map_err(io_err(&p))?;
        files.push(p);
        Ok(())
    };
    match format {
        Format::Json => put(
            "tables.json".into(),
            serde_json::to_string_pretty(&to_records(t)).expect("records serialize"),
        )?,
        Format::Csv => {
            for kind in TableKind::ALL {
                put(format!("{}.csv", kind.label()), table_to_csv(t.get(kind)))?;
            }
        }
        Format::Md => put("tables.md".into(), tables_to_md(t))?,
    }
    Ok(files)
}

/// Reads `tables.json` or a directory of per-table CSV files.
pub fn load_tables(path: &Path) -> Result<InvariantTables> {
    if path.is_dir() {
        let mut t = InvariantTables::default();
        for kind in TableKind::ALL {
            let p = path.join(format!("{}.csv", kind.label()));
            let text = fs::read_to_string(&p).map_err(io_err(&p))?;
            *t.get_mut(kind) = table_from_csv(&text)?;
        }
        return Ok(t);
    }
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    let records: Vec<Record> =
        serde_json::from_str(&text).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))?;
    Ok(from_records(&records))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Tables,
    Gap,
    E2,
    Eta,
    Oracle,
    Graphs,
    FiniteGen,
    All,
}

impl FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Ok(match s {
            "tables" => Suite::Tables,
            "gap" => Suite::Gap,
            "e2" => Suite::E2,
            "eta" => Suite::Eta,
            "oracle" => Suite::Oracle,
            "graphs" => Suite::Graphs,
            "finite-gen" => Suite::FiniteGen,
            "all" => Suite::All,
            _ => return Err(format!("unknown suite {s:?}")),
        })
    }
}

pub fn run_suite(suite: Suite, cfg: &RunConfig) -> Result<Report> {
    let mut r = Report::default();
    let needs_pipeline = matches!(suite, Suite::Tables | Suite::Gap | Suite::Oracle | Suite::All);
    let mut pipeline = if needs_pipeline { Some(compute(cfg)?) } else { None };
    let mut suites = vec![suite];
    if suite == Suite::All {
        suites = vec![Suite::Tables, Suite::Gap, Suite::E2, Suite::Eta, Suite::Oracle, Suite::Graphs, Suite::FiniteGen];
    }
    for s in suites {
        match s {
            Suite::Tables => {
                let (solver, t) = pipeline.as_ref().expect("pipeline ran");
                r.extend(verify::verify_tables(t, &solver.config));
            }
            Suite::Gap => {
                let (solver, _) = pipeline.as_ref().expect("pipeline ran");
                for g in 2..=solver.sealed_genus() {
                    r.extend(verify::verify_gap(solver, g)?);
                }
            }
            Suite::E2 => r.extend(verify::verify_e2(15)?),
            Suite::Eta => r.extend(verify::verify_eta(15)?),
            Suite::Oracle => {
                let (solver, _) = pipeline.as_mut().expect("pipeline ran");
                r.extend(verify::verify_propagator_ode(15, &[Rational::from_integer(0.into()), rational::q(1, 12)])?);
                r.extend(verify::verify_oracle(solver, 4, 2)?);
                r.extend(verify::verify_anomaly(solver, 3, 2)?);
                r.extend(verify::verify_cocycle(solver, &Rational::from_integer(0.into()))?);
            }
            Suite::Graphs => r.extend(verify::verify_graphs(&verify::GRAPH_CASES)?),
            Suite::FiniteGen => {
                let a = cfg.solver_config()?.a;
                r.extend(verify::verify_finite_generation(&a, 3, 1)?);
            }
            Suite::All => unreachable!("expanded above"),
        }
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use localp2::rational::{int, q};

    fn sample() -> InvariantTables {
        let mut t = InvariantTables::default();
        t.gw_y.insert((0, 1), int(3));
        t.gw_y.insert((0, 2), q(-45, 8));
        t.gw_y.insert((1, 1), q(1, 4));
        t.gw_con.insert((2, -2), q(-1, 80));
        t.gw_orb.insert((0, 3), q(1, 3));
        t
    }

    #[test]
    fn csv_round_trip_with_gaps() {
        let t = sample();
        for kind in TableKind::ALL {
            assert_eq!(&table_from_csv(&table_to_csv(t.get(kind))).unwrap(), t.get(kind));
        }
    }

    #[test]
    fn json_records() {
        let t = sample();
        let recs = to_records(&t);
        let orb = recs.iter().find(|r| r.table == TableKind::GwOrb).unwrap();
        let j = serde_json::to_value(orb).unwrap();
        assert_eq!(j["value"], "1/3");
        assert_eq!(j["table"], "gw_orb");
        assert_eq!(j["degree_or_insertions"], 3);
        assert_eq!(from_records(&recs), t);
    }

    #[test]
    fn md_cells() {
        let md = tables_to_md(&sample());
        assert!(md.contains("| 0 | 3 | -45/8 |"));
    }

    #[test]
    fn flags_override_file() {
        let file = RunConfig { max_genus: Some(5), a: Some("0".into()), ..Default::default() };
        let flags = RunConfig { max_genus: Some(3), ..Default::default() };
        let m = file.merged(flags);
        assert_eq!(m.max_genus, Some(3));
        assert_eq!(m.a.as_deref(), Some("0"));
    }

    #[test]
    fn bad_orders_rejected() {
        let mut c = RunConfig::default();
        c.orders.insert("xyz".into(), 3);
        assert_eq!(c.solver_config().unwrap_err().exit_code(), 2);
    }
}
