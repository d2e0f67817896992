//! Content-addressed persistence of sealed genus-`g` 0-point series.
//!
//! A cache directory holds `manifest.json` and one JSON file per sealed
//! quantity. File names carry the chart, genus, series order and a hash of
//! everything the series depends on (`a`, the orders and the inputs of every
//! genus up to `g`). Writes go to a temporary file in the same directory and are
//! renamed into place.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{AmbiguityFunction, InputSet, InvariantTables, Orders, Result, Solver, SolverConfig, SolverError};
use crate::mirror::Chart;
use crate::rational::{self, Rational};
use crate::series::Series;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    #[serde(with = "crate::rational::serde_str")]
    pub a: Rational,
    pub orders: Orders,
    /// Hash per sealed genus, as `(genus, hex digest)`.
    pub genera: Vec<(u32, String)>,
}

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

fn cache_err(path: &Path, e: impl std::fmt::Display) -> SolverError {
    SolverError::Cache(format!("{}: {e}", path.display()))
}

impl Cache {
    pub fn open(dir: impl Into<PathBuf>) -> Result<Cache> {
        let dir = dir.into();
        fs::create_dir_all(&dir).map_err(|e| cache_err(&dir, e))?;
        Ok(Cache { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// Digest of `a`, the orders and the inputs of genera `2..=g`.
    pub fn input_hash(config: &SolverConfig, inputs: &InputSet, g: u32) -> String {
        let mut h = Sha256::new();
        h.update(format!("a={}\n", rational::to_canonical(&config.a)));
        h.update(format!("orders={},{},{}\n", config.orders.lr, config.orders.orb, config.orders.con));
        for (gg, inp) in inputs.range(2..=g) {
            h.update(format!("g={gg} mode={}\n", inp.mode));
            if let Some(c) = &inp.gw0 {
                h.update(format!("gw0={}\n", rational::to_canonical(c)));
            }
            for (d, v) in &inp.gv_low {
                h.update(format!("gv{d}={}\n", rational::to_canonical(v)));
            }
        }
        hex::encode(h.finalize())
    }

    fn series_path(&self, chart: Chart, g: u32, order: i64, hash: &str) -> PathBuf {
        self.dir.join(format!("f0-{}-g{g}-o{order}-{}.json", chart.label(), &hash[..16]))
    }

    fn ambiguity_path(&self, g: u32, hash: &str) -> PathBuf {
        self.dir.join(format!("amb-g{g}-{}.json", &hash[..16]))
    }

    fn write_json<T: Serialize>(&self, path: &Path, value: &T) -> Result<()> {
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir).map_err(|e| cache_err(path, e))?;
        serde_json::to_writer(&mut tmp, value).map_err(|e| cache_err(path, e))?;
        tmp.flush().map_err(|e| cache_err(path, e))?;
        tmp.persist(path).map_err(|e| cache_err(path, e.error))?;
        Ok(())
    }

    fn read_json<T: for<'de> Deserialize<'de>>(&self, path: &Path) -> Result<Option<T>> {
        match fs::read_to_string(path) {
            Ok(s) => serde_json::from_str(&s).map(Some).map_err(|e| cache_err(path, e)),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(cache_err(path, e)),
        }
    }

    /// Stores the genus-`g` ambiguity and 0-point series of every chart.
    pub fn store(&self, solver: &Solver, g: u32, hash: &str) -> Result<()> {
        let amb = solver
            .ambiguities
            .get(&g)
            .ok_or_else(|| SolverError::Cache(format!("genus {g} is not sealed")))?;
        for c in &solver.charts {
            let f = c.family.entry(g, 0)?;
            self.write_json(&self.series_path(c.chart, g, solver.config.orders.get(c.chart), hash), f)?;
        }
        self.write_json(&self.ambiguity_path(g, hash), amb)
    }

    /// The stored genus-`g` data, if every file is present.
    pub fn load(&self, config: &SolverConfig, g: u32, hash: &str) -> Result<Option<(AmbiguityFunction, Vec<Series>)>> {
        let Some(amb) = self.read_json::<AmbiguityFunction>(&self.ambiguity_path(g, hash))? else {
            return Ok(None);
        };
        let mut series = Vec::new();
        for chart in Chart::ALL {
            match self.read_json::<Series>(&self.series_path(chart, g, config.orders.get(chart), hash))? {
                Some(s) => series.push(s),
                None => return Ok(None),
            }
        }
        Ok(Some((amb, series)))
    }

    pub fn manifest(&self) -> Result<Option<Manifest>> {
        self.read_json(&self.dir.join("manifest.json"))
    }

    pub fn write_manifest(&self, m: &Manifest) -> Result<()> {
        self.write_json(&self.dir.join("manifest.json"), m)
    }
}

/// Like [`super::run`], reusing sealed genera found in `cache` and storing
/// newly sealed ones. Returns the solver, its tables and the genera loaded.
pub fn run_cached(config: SolverConfig, inputs: &InputSet, cache: &Cache) -> Result<(Solver, InvariantTables, Vec<u32>)> {
    let mut s = Solver::new(config)?;
    let mut loaded = Vec::new();
    let mut genera = Vec::new();
    for g in 2..=s.config.max_genus {
        let inp = inputs.get(&g).ok_or_else(|| SolverError::Inputs(format!("no inputs for genus {g}")))?;
        let hash = Cache::input_hash(&s.config, inputs, g);
        match cache.load(&s.config, g, &hash)? {
            Some((amb, series)) => {
                s.seal_loaded(amb, series)?;
                loaded.push(g);
            }
            None => {
                s.step(inp)?;
                cache.store(&s, g, &hash)?;
            }
        }
        genera.push((g, hash));
    }
    cache.write_manifest(&Manifest { a: s.config.a.clone(), orders: s.config.orders, genera })?;
    let t = s.tables()?;
    Ok((s, t, loaded))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{default_inputs, run, Mode};

    #[test]
    fn reload_matches_fresh_run() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::open(dir.path()).unwrap();
        let cfg = SolverConfig::new(3);
        let inputs = default_inputs(3, Mode::Joint);
        let (_, first, loaded) = run_cached(cfg.clone(), &inputs, &cache).unwrap();
        assert!(loaded.is_empty());
        let (_, second, loaded) = run_cached(cfg.clone(), &inputs, &cache).unwrap();
        assert_eq!(loaded, vec![2, 3]);
        assert_eq!(first, second);
        let (_, fresh) = run(cfg, &inputs).unwrap();
        assert_eq!(first, fresh);
        assert_eq!(cache.manifest().unwrap().unwrap().genera.len(), 2);
    }

    #[test]
    fn hash_tracks_inputs() {
        let cfg = SolverConfig::new(3);
        let a = default_inputs(3, Mode::Joint);
        let mut b = a.clone();
        b.get_mut(&3).unwrap().gw0 = Some(rational::int(1));
        assert_eq!(Cache::input_hash(&cfg, &a, 2), Cache::input_hash(&cfg, &b, 2));
        assert_ne!(Cache::input_hash(&cfg, &a, 3), Cache::input_hash(&cfg, &b, 3));
    }
}
