//! ExperimentConfig: the JSON-serialisable description of an experiment run.

use std::path::PathBuf;

use rcmlab_core::domain::{CentredFamily, CornerClosing};
use rcmlab_core::sampler::ChainSpec;
use rcmlab_core::{Domain, Mask, Point, Quad, Weights};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};
use crate::io::AlgorithmName;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MaskName {
    Full,
    Half,
    Quarter,
}

impl MaskName {
    pub fn mask(self) -> Mask {
        match self {
            MaskName::Full => Mask::Full,
            MaskName::Half => Mask::Half,
            MaskName::Quarter => Mask::Quarter,
        }
    }
}

/// Quads for the crossing sweep. Marks run counterclockwise and the crossing
/// is from (ab) to (cd).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum QuadSpec {
    /// [0, w] × [0, h], crossing from the left side to the right side.
    Rectangle { w: i32, h: i32 },
    /// [0, 2n] × [0, n] ∪ [0, n] × [0, 2n], from the bottom side to the arc
    /// running from (2n, n) round the notch to (n, 2n).
    LShape { n: i32 },
    /// [0, w] × [0, h] with the unit-wide column above (w/2, 0) removed up to
    /// height `depth`; crossing from the left side to the right side.
    Slit { w: i32, h: i32, depth: i32 },
    /// Staircase corner domain, crossing from the x-axis to the y-axis with
    /// the corner vertex as (da).
    Staircase { m: i32, ell: i32 },
}

impl QuadSpec {
    pub fn name(&self) -> String {
        match self {
            QuadSpec::Rectangle { w, h } => format!("rect-{w}x{h}"),
            QuadSpec::LShape { n } => format!("l-shape-{n}"),
            QuadSpec::Slit { w, h, depth } => format!("slit-{w}x{h}-{depth}"),
            QuadSpec::Staircase { m, ell } => format!("staircase-{m}x{ell}"),
        }
    }

    pub fn build(&self) -> CliResult<Quad> {
        let p = Point::new;
        Ok(match *self {
            QuadSpec::Rectangle { w, h } => {
                let d = rcmlab_core::domain::rectangle(0, 0, w, h)?;
                Quad::new(d, [p(0, h), p(0, 0), p(w, 0), p(w, h)])?
            }
            QuadSpec::LShape { n } => {
                let faces: Vec<Point> = (0..2 * n)
                    .flat_map(|x| (0..2 * n).map(move |y| p(x, y)))
                    .filter(|f| f.x < n || f.y < n)
                    .collect();
                Quad::new(Domain::from_faces(&faces)?, [p(0, 0), p(2 * n, 0), p(2 * n, n), p(n, 2 * n)])?
            }
            QuadSpec::Slit { w, h, depth } => {
                if depth >= h || w < 3 {
                    return Err(CliError::Invalid("slit must be shorter than the height and w >= 3".into()));
                }
                let cut = w / 2;
                let faces: Vec<Point> = (0..w)
                    .flat_map(|x| (0..h).map(move |y| p(x, y)))
                    .filter(|f| !(f.x == cut && f.y < depth))
                    .collect();
                Quad::new(Domain::from_faces(&faces)?, [p(0, h), p(0, 0), p(w, 0), p(w, h)])?
            }
            QuadSpec::Staircase { m, ell } => {
                let kind = rcmlab_core::domain::SpecialKind::Corner { m, ell, closing: CornerClosing::Staircase };
                let (d, _) = rcmlab_core::domain::special_domain(kind)?;
                // The corner vertex itself forms the arc (da).
                Quad::new(d, [p(1, 0), p(ell, 0), p(0, m), p(0, 1)])
                    .map_err(|_| CliError::Invalid(format!("staircase {m}x{ell} does not yield a quad")))?
            }
        })
    }
}

/// Sweep over (r, R) scales; pairs use every r < R with R ≥ 2r.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: String,
    pub q: Vec<f64>,
    /// Edge parameter; None means p_c(q) for each q.
    pub p: Option<f64>,
    pub r: Vec<u32>,
    #[serde(rename = "R")]
    pub big_r: Vec<u32>,
    pub rho: Vec<u32>,
    /// Centred-domain family name, or None for all three.
    pub family: Option<String>,
    pub domains_per_family: usize,
    pub sigma: Vec<String>,
    pub mask: MaskName,
    pub samples: usize,
    pub chains: usize,
    pub burn_in: Option<u64>,
    pub thin: u64,
    pub algorithm: AlgorithmName,
    /// The plane measure is approximated in a box of this many outer radii.
    pub box_factor: u32,
    pub seed: u64,
    pub quads: Vec<QuadSpec>,
    pub refine: u32,
    /// Chains of clusters: rectangle height N and aspect ℓ, K values, α list
    /// and δ as fractions of N.
    pub n: u32,
    pub ell: u32,
    pub k_max: u32,
    pub alpha: Vec<f64>,
    pub delta: f64,
    pub max_edges: usize,
    pub mc_samples: usize,
    /// When false, wall_ms is written as 0 so that output bytes depend on
    /// the configuration alone.
    pub record_wall_time: bool,
    pub out: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            experiment: String::new(),
            q: vec![1.0],
            p: None,
            r: vec![2],
            big_r: vec![4, 8, 16],
            rho: Vec::new(),
            family: None,
            domains_per_family: 3,
            sigma: vec!["10".into()],
            mask: MaskName::Full,
            samples: 10_000,
            chains: 4,
            burn_in: None,
            thin: 1,
            algorithm: AlgorithmName::Auto,
            box_factor: 4,
            seed: 1,
            quads: vec![
                QuadSpec::Rectangle { w: 16, h: 16 },
                QuadSpec::Rectangle { w: 24, h: 12 },
                QuadSpec::LShape { n: 8 },
                QuadSpec::Slit { w: 17, h: 12, depth: 6 },
            ],
            refine: 8,
            n: 16,
            ell: 2,
            k_max: 10,
            alpha: vec![0.05, 0.1, 0.2, 0.4],
            delta: 0.25,
            max_edges: 18,
            mc_samples: 100_000,
            record_wall_time: true,
            out: None,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> CliResult<()> {
        let bad = |m: &str| Err(CliError::Invalid(m.to_string()));
        if self.q.is_empty() || self.q.iter().any(|&q| !(q > 0.0 && q.is_finite())) {
            return bad("q values must be positive");
        }
        if let Some(p) = self.p {
            if !(p > 0.0 && p < 1.0) {
                return bad("p must lie in (0, 1)");
            }
        }
        if self.samples == 0 || self.chains == 0 {
            return bad("samples and chains must be positive");
        }
        for list in [&self.r, &self.big_r, &self.rho] {
            if list.windows(2).any(|w| w[0] >= w[1]) {
                return bad("scale lists must be strictly increasing");
            }
        }
        if self.box_factor == 0 {
            return bad("box_factor must be positive");
        }
        for s in &self.sigma {
            if s.is_empty() || !s.chars().all(|c| c == '0' || c == '1') {
                return bad("sigma must be a non-empty word over {0, 1}");
            }
        }
        if let Some(f) = &self.family {
            family_by_name(f)?;
        }
        Ok(())
    }

    /// (r, R) pairs with R ≥ 2r.
    pub fn scale_pairs(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        for &big in &self.big_r {
            for &r in &self.r {
                if big >= 2 * r.max(1) {
                    out.push((r, big));
                }
            }
        }
        out
    }

    pub fn weights(&self, q: f64) -> CliResult<Weights> {
        Ok(match self.p {
            Some(p) => Weights::new(p, q)?,
            None => Weights::critical(q)?,
        })
    }

    /// Chain spec for one q with this config's sampler settings.
    pub fn chain_spec(&self, q: f64) -> CliResult<ChainSpec> {
        let mut spec = ChainSpec::new(self.weights(q)?, self.algorithm.resolve(q), self.seed);
        spec.burn_in = self.burn_in;
        spec.thin = self.thin;
        spec.validate()?;
        Ok(spec)
    }

    pub fn families(&self) -> CliResult<Vec<CentredFamily>> {
        match &self.family {
            None => Ok(CentredFamily::ALL.to_vec()),
            Some(f) => Ok(vec![family_by_name(f)?]),
        }
    }
}

pub fn family_by_name(name: &str) -> CliResult<CentredFamily> {
    CentredFamily::ALL
        .iter()
        .copied()
        .find(|f| f.name() == name)
        .ok_or_else(|| CliError::Invalid(format!("unknown domain family {name:?}")))
}
