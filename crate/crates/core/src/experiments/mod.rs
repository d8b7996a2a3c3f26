//! Named, seeded reproductions of the numeric claims, and the command line.
//!
//! Each experiment turns a set of string parameters into an
//! [`ExperimentReport`]: a list of claims, each comparing an observed number
//! with an expected one under a tolerance. Reports are deterministic given
//! the seed; only `wall_time` varies between runs.

mod cli;
mod registry;

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use cli::{cli, cli_with};

/// How an observed value is compared with the expected one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    /// `|observed − expected| ≤ tolerance`.
    TwoSided,
    /// `observed ≥ expected − tolerance`, for certified lower bounds.
    AtLeast,
    /// `observed ≤ expected + tolerance`, for upper bounds and slacks.
    AtMost,
}

impl Direction {
    pub fn holds(self, expected: f64, observed: f64, tolerance: f64) -> bool {
        match self {
            Direction::TwoSided => (observed - expected).abs() <= tolerance,
            Direction::AtLeast => observed >= expected - tolerance,
            Direction::AtMost => observed <= expected + tolerance,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::TwoSided => "two-sided",
            Direction::AtLeast => "at-least",
            Direction::AtMost => "at-most",
        })
    }
}

impl FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "two-sided" => Ok(Direction::TwoSided),
            "at-least" => Ok(Direction::AtLeast),
            "at-most" => Ok(Direction::AtMost),
            other => Err(Error::invalid(format!("unknown claim direction {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Claim {
    pub description: String,
    pub expected: f64,
    pub observed: f64,
    pub tolerance: f64,
    pub direction: Direction,
    pub pass: bool,
}

impl Claim {
    pub fn new(description: impl Into<String>, expected: f64, observed: f64, tolerance: f64, direction: Direction) -> Self {
        Claim {
            description: description.into(),
            expected,
            observed,
            tolerance,
            direction,
            pass: direction.holds(expected, observed, tolerance),
        }
    }

    pub fn two_sided(description: impl Into<String>, expected: f64, observed: f64, tolerance: f64) -> Self {
        Self::new(description, expected, observed, tolerance, Direction::TwoSided)
    }

    pub fn at_least(description: impl Into<String>, expected: f64, observed: f64, tolerance: f64) -> Self {
        Self::new(description, expected, observed, tolerance, Direction::AtLeast)
    }

    pub fn at_most(description: impl Into<String>, expected: f64, observed: f64, tolerance: f64) -> Self {
        Self::new(description, expected, observed, tolerance, Direction::AtMost)
    }

    /// A yes/no check, recorded as observed 1 against expected 1.
    pub fn holds(description: impl Into<String>, ok: bool) -> Self {
        Self::two_sided(description, 1.0, if ok { 1.0 } else { 0.0 }, 0.0)
    }

    /// Moves `expected` far enough that the claim fails.
    fn sabotage(&mut self) {
        let shift = 2.0 * self.tolerance + self.observed.abs() + self.expected.abs() + 1.0;
        self.expected += match self.direction {
            Direction::AtMost => -shift,
            _ => shift,
        };
        self.pass = self.direction.holds(self.expected, self.observed, self.tolerance);
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let relation = match self.direction {
            Direction::TwoSided => "=",
            Direction::AtLeast => ">=",
            Direction::AtMost => "<=",
        };
        write!(
            f,
            "[{}] {}: observed {} {relation} expected {} (tol {:e})",
            if self.pass { "pass" } else { "FAIL" },
            self.description,
            self.observed,
            self.expected,
            self.tolerance
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub name: String,
    pub params: BTreeMap<String, String>,
    pub claims: Vec<Claim>,
    pub seed: u64,
    /// Seconds.
    pub wall_time: f64,
}

impl ExperimentReport {
    pub fn passed(&self) -> bool {
        self.claims.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Claim> {
        self.claims.iter().filter(|c| !c.pass)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["claim", "expected", "observed", "tolerance", "direction", "pass"])?;
        for c in &self.claims {
            w.write_record([
                c.description.clone(),
                c.expected.to_string(),
                c.observed.to_string(),
                c.tolerance.to_string(),
                c.direction.to_string(),
                c.pass.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }

    pub fn save_json(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()? + "\n")?;
        Ok(())
    }

    pub fn save_csv(&self, path: &Path) -> Result<()> {
        self.write_csv(std::fs::File::create(path)?)
    }
}

/// Reads back the claims written by [`ExperimentReport::write_csv`].
pub fn claims_from_csv(text: &str) -> Result<Vec<Claim>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let mut claims = Vec::new();
    for row in r.records() {
        let row = row?;
        let field = |i: usize| row.get(i).unwrap_or_default();
        let number = |i: usize| {
            field(i)
                .parse::<f64>()
                .map_err(|e| Error::invalid(format!("bad number {:?} in csv: {e}", field(i))))
        };
        claims.push(Claim {
            description: field(0).to_string(),
            expected: number(1)?,
            observed: number(2)?,
            tolerance: number(3)?,
            direction: field(4).parse()?,
            pass: field(5)
                .parse()
                .map_err(|_| Error::invalid(format!("bad pass flag {:?} in csv", field(5))))?,
        });
    }
    Ok(claims)
}

/// String parameters of a run, with typed accessors and defaults.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Params(BTreeMap<String, String>);

impl Params {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(mut self, key: &str, value: impl ToString) -> Self {
        self.0.insert(key.to_string(), value.to_string());
        self
    }

    pub fn insert(&mut self, key: &str, value: impl ToString) {
        self.0.insert(key.to_string(), value.to_string());
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    /// Parses `key=value` pairs.
    pub fn parse_pairs<'a, I: IntoIterator<Item = &'a str>>(pairs: I) -> Result<Self> {
        let mut params = Params::new();
        for pair in pairs {
            let (k, v) = pair
                .split_once('=')
                .ok_or_else(|| Error::invalid(format!("expected key=value, got {pair:?}")))?;
            params.insert(k.trim(), v.trim());
        }
        Ok(params)
    }

    fn value<T: FromStr>(&mut self, key: &str, default: T) -> Result<T>
    where
        T: ToString,
        T::Err: fmt::Display,
    {
        match self.0.get(key) {
            Some(raw) => raw
                .parse()
                .map_err(|e| Error::invalid(format!("parameter {key}={raw:?}: {e}"))),
            None => {
                self.0.insert(key.to_string(), default.to_string());
                Ok(default)
            }
        }
    }

    fn list<T: FromStr>(&mut self, key: &str, default: &str) -> Result<Vec<T>>
    where
        T::Err: fmt::Display,
    {
        let raw = self.0.entry(key.to_string()).or_insert_with(|| default.to_string()).clone();
        raw.split(',')
            .map(|s| {
                s.trim()
                    .parse()
                    .map_err(|e| Error::invalid(format!("parameter {key}={raw:?}: {e}")))
            })
            .collect()
    }

    fn reject_unknown(&self, allowed: &[&str]) -> Result<()> {
        match self.0.keys().find(|k| !allowed.contains(&k.as_str())) {
            Some(k) => Err(Error::invalid(format!(
                "unknown parameter {k:?}; expected one of {}",
                allowed.join(", ")
            ))),
            None => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunOptions {
    /// Overrides the experiment's default seed.
    pub seed: Option<u64>,
    /// Test hook: perturb the expected value of this claim (index modulo the
    /// number of claims) so that it fails.
    pub inject_failure: Option<usize>,
}

pub struct Experiment {
    pub name: &'static str,
    pub summary: &'static str,
    params: &'static [&'static str],
    body: fn(&mut Params, u64) -> Result<Vec<Claim>>,
}

impl Experiment {
    pub fn params(&self) -> &'static [&'static str] {
        self.params
    }
}

pub fn registry() -> &'static [Experiment] {
    registry::EXPERIMENTS
}

pub fn find(name: &str) -> Result<&'static Experiment> {
    registry()
        .iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::UnknownExperiment(name.to_string()))
}

/// FNV-1a hash of the experiment name.
pub fn default_seed(name: &str) -> u64 {
    name.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

pub fn run(name: &str, params: Params) -> Result<ExperimentReport> {
    run_with(name, params, &RunOptions::default())
}

pub fn run_with(name: &str, mut params: Params, opts: &RunOptions) -> Result<ExperimentReport> {
    let exp = find(name)?;
    params.reject_unknown(exp.params)?;
    let seed = opts.seed.unwrap_or_else(|| default_seed(name));
    let start = Instant::now();
    let mut claims = (exp.body)(&mut params, seed).map_err(|e| e.context(format!("experiment {name}")))?;
    if let Some(i) = opts.inject_failure {
        if !claims.is_empty() {
            let n = claims.len();
            claims[i % n].sabotage();
        }
    }
    Ok(ExperimentReport {
        name: name.to_string(),
        params: params.0,
        claims,
        seed,
        wall_time: start.elapsed().as_secs_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn directions() {
        assert!(Claim::two_sided("x", 1.0, 1.0 + 1e-9, 1e-8).pass);
        assert!(!Claim::two_sided("x", 1.0, 1.1, 1e-8).pass);
        assert!(Claim::at_least("x", 6.0, 7.0, 0.0).pass);
        assert!(!Claim::at_least("x", 6.0, 5.99, 1e-4).pass);
        assert!(Claim::at_most("x", 1.0, 0.5, 0.0).pass);
        assert!(!Claim::at_most("x", 1.0, 1.5, 0.1).pass);
        for d in [Direction::TwoSided, Direction::AtLeast, Direction::AtMost] {
            assert_eq!(d.to_string().parse::<Direction>().unwrap(), d);
            let mut c = Claim::new("y", 3.0, 3.0, 1e-3, d);
            assert!(c.pass);
            c.sabotage();
            assert!(!c.pass);
        }
    }

    #[test]
    fn default_seeds_differ_and_are_stable() {
        assert_eq!(default_seed(""), 0xcbf2_9ce4_8422_2325);
        assert_eq!(default_seed("a"), 0xaf63_dc4c_8601_ec8c);
        let seeds: std::collections::HashSet<u64> = registry().iter().map(|e| default_seed(e.name)).collect();
        assert_eq!(seeds.len(), registry().len());
    }

    #[test]
    fn params() {
        let mut p = Params::parse_pairs(["k_max=5", "d_max = 3"]).unwrap();
        assert_eq!(p.value::<u32>("k_max", 12).unwrap(), 5);
        assert_eq!(p.value::<u32>("other", 7).unwrap(), 7);
        assert_eq!(p.get("other"), Some("7"));
        assert_eq!(p.list::<u32>("ks", "1, 2,3").unwrap(), vec![1, 2, 3]);
        assert!(p.reject_unknown(&["k_max", "d_max", "other", "ks"]).is_ok());
        assert!(p.reject_unknown(&["k_max"]).is_err());
        assert!(Params::parse_pairs(["novalue"]).is_err());
        let mut bad = Params::new().set("k_max", "x");
        assert!(bad.value::<u32>("k_max", 1).is_err());
    }

    #[test]
    fn unknown_experiment_is_a_usage_error() {
        let err = run("no-such-thing", Params::new()).unwrap_err();
        assert!(err.is_usage());
        let err = run("l1-constants-table", Params::new().set("bogus", 1)).unwrap_err();
        assert!(err.is_usage());
    }

    #[test]
    fn report_round_trips() {
        let report = run("l1-constants-table", Params::new().set("k_max", 6).set("d_max", 3)).unwrap();
        assert!(report.passed());
        let back = ExperimentReport::from_json(&report.to_json().unwrap()).unwrap();
        assert_eq!(back, report);
        let claims = claims_from_csv(&report.to_csv().unwrap()).unwrap();
        assert_eq!(claims, report.claims);
    }

    #[test]
    fn reproducible_claims_and_injection() {
        let params = Params::new().set("cases", 20);
        let a = run("polarization-oracle", params.clone()).unwrap();
        let b = run("polarization-oracle", params.clone()).unwrap();
        assert_eq!(a.claims, b.claims);
        assert_eq!(a.params, b.params);
        assert!(a.passed());
        let opts = RunOptions {
            inject_failure: Some(0),
            ..Default::default()
        };
        let c = run_with("polarization-oracle", params, &opts).unwrap();
        assert!(!c.passed());
        assert_eq!(c.failures().count(), 1);
    }
}
