//! Every tolerance and run size used by the acceptance suite, next to the
//! claim it guards.

/// Discrete contour integrals of F vanish at p_c: exact up to rounding.
pub const CONTOUR_TOL: f64 = 1e-12;
/// The same sums at p_c + 0.05 must be visibly nonzero (for q < 4).
pub const OFF_CRITICAL_MIN: f64 = 1e-6;
/// Largest Dobrushin domain (edge count) in the exhaustive suite.
pub const PARAFERMION_MAX_EDGES: usize = 18;
pub const PARAFERMION_QS: [f64; 6] = [0.5, 1.0, 1.5, 2.0, 3.0, 4.0];

/// Per-vertex relation at every interior medial vertex.
pub const VERTEX_TOL: f64 = 1e-12;

/// One heat-bath sweep maps the enumerated measure to itself.
pub const SWEEP_L1_TOL: f64 = 1e-10;
pub const SWEEP_MAX_EDGES: usize = 10;
pub const SWEEP_QS: [f64; 5] = [1.0, 1.5, 2.0, 3.0, 4.0];
/// Chayes–Machta empirical law on the unit square at q = 2.
pub const CM_TV_TOL: f64 = 0.01;
pub const CM_STEPS: usize = 1_000_000;

/// Self-dual rectangles at q = 1 are crossed with probability exactly 1/2.
pub const CROSSING_SIZES: [i32; 3] = [4, 8, 16];
pub const CROSSING_SAMPLES: usize = 40_000;
pub const CROSSING_SE: f64 = 3.0;
pub const CROSSING_EXACT_N: i32 = 2;
pub const CROSSING_EXACT_TOL: f64 = 1e-12;

/// Half-plane two arms decay like r/R and five bulk arms like (r/R)².
pub const ARM_SAMPLES: usize = 100_000;
pub const ARM_INNER: u32 = 4;
pub const ARM_OUTER: [u32; 4] = [8, 16, 32, 64];
pub const HALF_TWO_ARM: (f64, f64) = (1.0, 0.15);
pub const FIVE_ARM: (f64, f64) = (2.0, 0.3);

/// FKG and comparison between boundary conditions, up to rounding.
pub const FKG_MARGIN: f64 = -1e-12;
pub const FKG_QS: [f64; 4] = [1.0, 1.5, 2.0, 4.0];
pub const FKG_MAX_EDGES: usize = 10;

/// ℓ of an n-wide, m-high rectangle is n/m; ℓ · ℓ_dual = 1.
pub const EXTREMAL_REFINE: u32 = 32;
pub const RECTANGLE_REL: f64 = 0.02;
pub const DUALITY_REL: f64 = 0.03;
pub const EXTREMAL_SOLVER_TOL: f64 = 1e-10;

/// Exhaustive arm comparison up to this many relevant edges, random above.
pub const ARM_ORACLE_EXHAUSTIVE: usize = 20;
pub const ARM_ORACLE_RANDOM: usize = 20_000;

pub const HAMMING_CONFIGS: usize = 1000;
pub const HAMMING_BOX: i32 = 3;

/// Lower bound on p(R) across the centred-domain families.
pub const TOUCH_MIN: f64 = 0.02;
pub const TOUCH_QS: [f64; 3] = [1.0, 2.0, 3.0];
pub const TOUCH_RADII: [u32; 2] = [4, 8];
pub const TOUCH_SAMPLES: usize = 2000;
/// Quasi-multiplicativity ratios P(r,ρ)P(ρ,R)/P(r,R) stay bounded.
pub const QM_RANGE: (f64, f64) = (0.1, 10.0);
pub const QM_SAMPLES: usize = 4000;
