//! Flag values, optionally completed from a JSON parameter file with the same keys.

use crate::{Fail, Global};
use multitype::checks::Precision;
use multitype::weights::{Character, RootSet};
use serde::Deserialize;
use std::path::{Path, PathBuf};

#[derive(Deserialize)]
#[serde(untagged)]
enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T> OneOrMany<T> {
    fn into_vec(self) -> Vec<T> {
        match self {
            OneOrMany::One(x) => vec![x],
            OneOrMany::Many(v) => v,
        }
    }
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct ParamFile {
    p: Option<OneOrMany<u64>>,
    f: Option<OneOrMany<usize>>,
    mu: Option<String>,
    irhomu: Option<String>,
    #[serde(rename = "I")]
    i: Option<String>,
    #[serde(rename = "prec-N")]
    prec_n: Option<u32>,
    #[serde(rename = "prec-M")]
    prec_m: Option<u32>,
    window: Option<i64>,
    #[serde(rename = "cache-dir")]
    cache_dir: Option<PathBuf>,
    jobs: Option<usize>,
    seed: Option<u64>,
}

/// Fill every flag left unset from the parameter file.
pub fn merge_file(g: &mut Global, path: &Path) -> Result<(), Fail> {
    let txt = std::fs::read_to_string(path).map_err(|e| Fail::param(format!("{}: {e}", path.display())))?;
    let pf: ParamFile = serde_json::from_str(&txt).map_err(|e| Fail::param(format!("{}: {e}", path.display())))?;
    if g.p.is_empty() {
        g.p = pf.p.map(OneOrMany::into_vec).unwrap_or_default();
    }
    if g.f.is_empty() {
        g.f = pf.f.map(OneOrMany::into_vec).unwrap_or_default();
    }
    g.mu = g.mu.take().or(pf.mu);
    g.irhomu = g.irhomu.take().or(pf.irhomu);
    g.i = g.i.take().or(pf.i);
    g.prec_n = g.prec_n.or(pf.prec_n);
    g.prec_m = g.prec_m.or(pf.prec_m);
    g.window = g.window.or(pf.window);
    g.cache_dir = g.cache_dir.take().or(pf.cache_dir);
    g.jobs = g.jobs.or(pf.jobs);
    g.seed = g.seed.or(pf.seed);
    Ok(())
}

/// "4,1", "(5,1),(8,1)" or "[[5,1],[8,1]]": integers read in order and paired.
pub fn parse_mu(s: &str) -> Result<Character, Fail> {
    let nums: Result<Vec<i64>, _> = s
        .split(|c: char| !(c.is_ascii_digit() || c == '-'))
        .filter(|t| !t.is_empty())
        .map(str::parse::<i64>)
        .collect();
    let nums = nums.map_err(|e| Fail::param(format!("bad character {s}: {e}")))?;
    if nums.is_empty() || nums.len() % 2 != 0 {
        return Err(Fail::param(format!("character {s} must be a list of pairs")));
    }
    Ok(Character(nums.chunks(2).map(|c| (c[0], c[1])).collect()))
}

pub struct Resolved {
    pub p: u64,
    pub f: usize,
    pub mu: Option<Character>,
    pub irm: RootSet,
    pub i: Option<RootSet>,
}

impl Global {
    pub fn precision(&self) -> Precision {
        let d = Precision::default();
        Precision { n: self.prec_n.unwrap_or(d.n), m: self.prec_m.unwrap_or(d.m), window: self.window, window_scale: 1 }
    }

    pub fn mus(&self) -> Result<Vec<Character>, Fail> {
        match &self.mu {
            None => Ok(vec![]),
            Some(s) => s.split(';').map(parse_mu).collect(),
        }
    }

    /// A single (p, f) point. f comes from --f, else from --mu, else 1.
    pub fn point(&self, need_mu: bool) -> Result<Resolved, Fail> {
        let p = match self.p.as_slice() {
            [p] => *p,
            [] => return Err(Fail::param("--p is required")),
            _ => return Err(Fail::param("this command takes a single --p")),
        };
        if p < 5 || !(2..p).take_while(|d| d * d <= p).all(|d| p % d != 0) {
            return Err(Fail::param(format!("p = {p} must be a prime ≥ 5")));
        }
        let mus = self.mus()?;
        if mus.len() > 1 {
            return Err(Fail::param("this command takes a single --mu"));
        }
        let mu = mus.into_iter().next();
        let f = match (self.f.as_slice(), &mu) {
            ([f], Some(m)) if *f != m.f() => return Err(Fail::param(format!("--f {f} disagrees with --mu of length {}", m.f()))),
            ([f], _) => *f,
            ([], Some(m)) => m.f(),
            ([], None) => 1,
            _ => return Err(Fail::param("this command takes a single --f")),
        };
        if !(1..=3).contains(&f) {
            return Err(Fail::param(format!("f = {f} is outside 1..=3")));
        }
        if need_mu && mu.is_none() {
            return Err(Fail::param("--mu is required"));
        }
        let irm = RootSet::parse(self.irhomu.as_deref().unwrap_or(""), f).map_err(Fail::core)?;
        let i = self.i.as_deref().map(|s| RootSet::parse(s, f)).transpose().map_err(Fail::core)?;
        Ok(Resolved { p, f, mu, irm, i })
    }
}
