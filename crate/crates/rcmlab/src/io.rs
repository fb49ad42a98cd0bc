//! Text and JSON formats: domain files, configuration and sample dumps,
//! chain specs, enumeration summaries, observable dumps and extremal reports.

use std::fmt::Write as _;
use std::path::Path;

use rcmlab_core::enumerate::ExactMeasure;
use rcmlab_core::medial::MedialGraph;
use rcmlab_core::parafermion::ObservableField;
use rcmlab_core::sampler::{Algorithm, ChainSpec};
use rcmlab_core::{BoundaryLoop, Configuration, Domain, Point, Weights};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// A parsed domain file: the domain and any `MARK` lines, in file order.
#[derive(Clone, Debug)]
pub struct DomainFile {
    pub domain: Domain,
    pub marks: Vec<Point>,
}

fn parse_pair(line: &str, n: usize) -> CliResult<(i32, i32)> {
    let mut it = line.split_whitespace();
    let bad = || CliError::Parse { line: n, msg: format!("expected two integers, got {line:?}") };
    let x = it.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
    let y = it.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
    if it.next().is_some() {
        return Err(bad());
    }
    Ok((x, y))
}

/// `LOOP n`, n lines `x y`, then optional `MARK x y` lines. Blank lines and
/// `#` comments are ignored. Clockwise loops are reversed.
pub fn parse_domain(text: &str) -> CliResult<DomainFile> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap().trim()))
        .filter(|(_, l)| !l.is_empty());
    let (n0, head) = lines.next().ok_or(CliError::Parse { line: 1, msg: "empty domain file".into() })?;
    let count: usize = head
        .strip_prefix("LOOP")
        .and_then(|s| s.trim().parse().ok())
        .ok_or_else(|| CliError::Parse { line: n0, msg: "expected `LOOP n`".into() })?;
    let mut pts = Vec::with_capacity(count);
    for _ in 0..count {
        let (n, l) = lines.next().ok_or(CliError::Parse { line: n0, msg: format!("loop needs {count} points") })?;
        let (x, y) = parse_pair(l, n)?;
        pts.push(Point::new(x, y));
    }
    let mut marks = Vec::new();
    for (n, l) in lines {
        let rest = l.strip_prefix("MARK").ok_or_else(|| CliError::Parse { line: n, msg: format!("unexpected {l:?}") })?;
        let (x, y) = parse_pair(rest, n)?;
        marks.push(Point::new(x, y));
    }
    let domain = Domain::new(BoundaryLoop::new(pts)?);
    Ok(DomainFile { domain, marks })
}

pub fn format_domain(domain: &Domain, marks: &[Point]) -> String {
    let pts = domain.boundary_loop().points();
    let mut s = format!("LOOP {}\n", pts.len());
    for p in pts {
        writeln!(s, "{} {}", p.x, p.y).unwrap();
    }
    for m in marks {
        writeln!(s, "MARK {} {}", m.x, m.y).unwrap();
    }
    s
}

pub fn read_to_string(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

pub fn read_domain(path: &Path) -> CliResult<DomainFile> {
    parse_domain(&read_to_string(path)?)
}

/// One bit string per line in canonical edge order.
pub fn parse_configurations(text: &str, domain: &Domain) -> CliResult<Vec<Configuration>> {
    let mut out = Vec::new();
    for (i, l) in text.lines().enumerate() {
        let l = l.trim();
        if l.is_empty() {
            continue;
        }
        let c = Configuration::parse(l).map_err(|e| CliError::Parse { line: i + 1, msg: e.to_string() })?;
        c.check_len(domain).map_err(|e| CliError::Parse { line: i + 1, msg: e.to_string() })?;
        out.push(c);
    }
    Ok(out)
}

/// Sample dump line: sweep index, a space, the configuration bits.
pub fn format_sample(sweep: u64, config: &Configuration) -> String {
    format!("{sweep} {}", config.to_bit_string())
}

pub fn parse_sample(line: &str) -> CliResult<(u64, Configuration)> {
    let bad = || CliError::Parse { line: 1, msg: format!("bad sample line {line:?}") };
    let (sweep, bits) = line.trim().split_once(' ').ok_or_else(bad)?;
    Ok((sweep.parse().map_err(|_| bad())?, Configuration::parse(bits)?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlgorithmName {
    HeatBath,
    ChayesMachta,
    /// Chayes–Machta for q ≥ 1, heat-bath below.
    Auto,
}

impl AlgorithmName {
    pub fn resolve(self, q: f64) -> Algorithm {
        match self {
            AlgorithmName::HeatBath => Algorithm::HeatBath,
            AlgorithmName::ChayesMachta => Algorithm::ChayesMachta,
            AlgorithmName::Auto if q >= 1.0 => Algorithm::ChayesMachta,
            AlgorithmName::Auto => Algorithm::HeatBath,
        }
    }
}

/// Serialised form of a chain specification.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainSpecJson {
    pub q: f64,
    pub p: f64,
    pub algorithm: AlgorithmName,
    pub seed: u64,
    pub burn_in: Option<u64>,
    pub thin: u64,
}

impl ChainSpecJson {
    pub fn from_spec(spec: &ChainSpec) -> ChainSpecJson {
        ChainSpecJson {
            q: spec.weights.q(),
            p: spec.weights.p(),
            algorithm: match spec.algorithm {
                Algorithm::HeatBath => AlgorithmName::HeatBath,
                Algorithm::ChayesMachta => AlgorithmName::ChayesMachta,
            },
            seed: spec.seed,
            burn_in: spec.burn_in,
            thin: spec.thin,
        }
    }

    pub fn to_spec(&self) -> CliResult<ChainSpec> {
        let mut spec = ChainSpec::new(Weights::new(self.p, self.q)?, self.algorithm.resolve(self.q), self.seed);
        spec.burn_in = self.burn_in;
        spec.thin = self.thin;
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasureSummary {
    pub q: f64,
    pub p: f64,
    pub edges: usize,
    #[serde(rename = "logZ")]
    pub log_z: f64,
}

impl MeasureSummary {
    pub fn of(m: &ExactMeasure) -> MeasureSummary {
        MeasureSummary { q: m.weights().q(), p: m.weights().p(), edges: m.num_edges(), log_z: m.log_z() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtremalReport {
    pub ell: f64,
    pub dual_ell: f64,
    pub product: f64,
    pub refinement: u32,
    pub residual: f64,
}

fn half(v: i32) -> String {
    if v % 2 == 0 {
        format!("{}", v / 2)
    } else {
        format!("{}", v as f64 / 2.0)
    }
}

/// CSV `x1,y1,x2,y2,re,im`, endpoints of each medial edge in lattice units
/// (multiples of 1/2), tail first.
pub fn format_observable(medial: &MedialGraph, field: &ObservableField) -> String {
    let mut s = String::from("x1,y1,x2,y2,re,im\n");
    for (k, e) in medial.edges().iter().enumerate() {
        let z = field.get(k as u32);
        writeln!(s, "{},{},{},{},{:e},{:e}", half(e.tail.x), half(e.tail.y), half(e.head.x), half(e.head.y), z.re, z.im)
            .unwrap();
    }
    s
}
