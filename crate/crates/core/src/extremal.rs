//! Extremal distance of a quad through the discrete Dirichlet problem.
//!
//! The continuous domain is the union of the closed faces of D. It is
//! refined s times; each refined edge gets conductance equal to half the
//! number of refined cells beside it, which is the five-point scheme with
//! the natural (Neumann) treatment of the free arcs. With potential 0 on
//! (ab) and 1 on (cd) the minimal energy is 1/ℓ, with no mesh factor since
//! Dirichlet energy is scale invariant in two dimensions.

use alloc::vec;
use alloc::vec::Vec;

use crate::domain::{Point, Quad};
use crate::error::{Error, Result};

pub const MAX_ITERATIONS: usize = 1_000_000;
pub const DEFAULT_TOLERANCE: f64 = 1e-8;

/// Discrete harmonic problem on the s-refined domain of a quad.
#[derive(Clone, Debug)]
pub struct HarmonicProblem {
    refinement: u32,
    /// Node positions in refined units.
    nodes: Vec<Point>,
    /// Conductance-weighted edges (i, j, c).
    edges: Vec<(u32, u32, f64)>,
    /// Dirichlet value per node, NaN for free nodes.
    fixed: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HarmonicSolution {
    pub ell: f64,
    pub energy: f64,
    pub iterations: usize,
    pub residual: f64,
}

impl HarmonicProblem {
    pub fn new(quad: &Quad, refinement: u32) -> Result<HarmonicProblem> {
        if refinement == 0 {
            return Err(Error::InvalidParams("refinement must be at least 1"));
        }
        let s = refinement as i32;
        let domain = quad.domain();
        let faces = domain.faces();
        if faces.is_empty() {
            return Err(Error::InvalidQuad("domain has no faces"));
        }
        let (mut x0, mut y0, mut x1, mut y1) = (i32::MAX, i32::MAX, i32::MIN, i32::MIN);
        for f in faces {
            x0 = x0.min(f.x);
            y0 = y0.min(f.y);
            x1 = x1.max(f.x + 1);
            y1 = y1.max(f.y + 1);
        }
        // Refined cell (i, j) lies in the coarse face (i / s, j / s).
        let (cw, ch) = ((x1 - x0) * s, (y1 - y0) * s);
        let mut coarse = vec![false; ((x1 - x0) * (y1 - y0)) as usize];
        for f in faces {
            coarse[((f.y - y0) * (x1 - x0) + (f.x - x0)) as usize] = true;
        }
        let cell = |i: i32, j: i32| -> bool {
            i >= 0 && j >= 0 && i < cw && j < ch && coarse[((j / s) * (x1 - x0) + i / s) as usize]
        };
        let nw = cw + 1;
        let mut index = vec![u32::MAX; (nw * (ch + 1)) as usize];
        let mut nodes = Vec::new();
        for j in 0..=ch {
            for i in 0..=cw {
                if cell(i - 1, j - 1) || cell(i, j - 1) || cell(i - 1, j) || cell(i, j) {
                    index[(j * nw + i) as usize] = nodes.len() as u32;
                    nodes.push(Point::new(i, j));
                }
            }
        }
        let mut edges = Vec::new();
        for (k, p) in nodes.iter().enumerate() {
            let (i, j) = (p.x, p.y);
            if i < cw {
                let c = (u8::from(cell(i, j - 1)) + u8::from(cell(i, j))) as f64 / 2.0;
                if c > 0.0 {
                    edges.push((k as u32, index[(j * nw + i + 1) as usize], c));
                }
            }
            if j < ch {
                let c = (u8::from(cell(i - 1, j)) + u8::from(cell(i, j))) as f64 / 2.0;
                if c > 0.0 {
                    edges.push((k as u32, index[((j + 1) * nw + i) as usize], c));
                }
            }
        }

        let mut fixed = vec![f64::NAN; nodes.len()];
        let pts = domain.boundary_loop().points();
        let n = pts.len();
        let mut mark_pos = [0usize; 4];
        for (k, m) in quad.marks().iter().enumerate() {
            mark_pos[k] = pts.iter().position(|p| p == m).ok_or(Error::InvalidQuad("mark not on the boundary loop"))?;
        }
        for (arc, value) in [(0usize, 0.0), (2, 1.0)] {
            let (from, to) = (mark_pos[arc], mark_pos[arc + 1]);
            let len = (to + n - from) % n;
            if len == 0 {
                return Err(Error::InvalidQuad("degenerate marked arc"));
            }
            for step in 0..len {
                let (p, q) = (pts[(from + step) % n], pts[(from + step + 1) % n]);
                for t in 0..=s {
                    let x = (p.x - x0) * s + (q.x - p.x) * t;
                    let y = (p.y - y0) * s + (q.y - p.y) * t;
                    let k = index[(y * nw + x) as usize];
                    if k == u32::MAX {
                        return Err(Error::InvalidQuad("boundary node missing from the grid"));
                    }
                    fixed[k as usize] = value;
                }
            }
        }
        Ok(HarmonicProblem { refinement, nodes, edges, fixed })
    }

    pub fn refinement(&self) -> u32 {
        self.refinement
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    /// Dirichlet energy Σ c (u_i − u_j)².
    pub fn energy(&self, u: &[f64]) -> f64 {
        self.edges.iter().map(|&(i, j, c)| {
            let d = u[i as usize] - u[j as usize];
            c * d * d
        }).sum()
    }

    /// Preconditioned conjugate gradients (Jacobi) on the free nodes, stopped
    /// at relative residual `tol`.
    pub fn solve(&self, tol: f64) -> Result<(Vec<f64>, HarmonicSolution)> {
        if !(tol > 0.0) {
            return Err(Error::InvalidParams("tolerance must be positive"));
        }
        let n = self.nodes.len();
        let free: Vec<bool> = self.fixed.iter().map(|v| v.is_nan()).collect();
        let mut u: Vec<f64> = self.fixed.iter().map(|&v| if v.is_nan() { 0.5 } else { v }).collect();
        let mut diag = vec![0.0; n];
        for &(i, j, c) in &self.edges {
            diag[i as usize] += c;
            diag[j as usize] += c;
        }
        // Residual r = −(L u) on free nodes, i.e. b − A u for the reduced system.
        let apply = |x: &[f64], out: &mut [f64]| {
            out.iter_mut().for_each(|v| *v = 0.0);
            for &(i, j, c) in &self.edges {
                let (i, j) = (i as usize, j as usize);
                let d = c * (x[i] - x[j]);
                out[i] += d;
                out[j] -= d;
            }
        };
        let mut r = vec![0.0; n];
        apply(&u, &mut r);
        for k in 0..n {
            r[k] = if free[k] { -r[k] } else { 0.0 };
        }
        let norm = |v: &[f64]| libm::sqrt(v.iter().map(|x| x * x).sum::<f64>());
        // Scale of the right-hand side: the Dirichlet data pushed into the free nodes.
        let mut b = vec![0.0; n];
        let boundary_only: Vec<f64> = self.fixed.iter().map(|&v| if v.is_nan() { 0.0 } else { v }).collect();
        apply(&boundary_only, &mut b);
        let b_norm = norm(&b.iter().zip(&free).map(|(&v, &f)| if f { v } else { 0.0 }).collect::<Vec<_>>()).max(1e-300);

        let precond = |r: &[f64], z: &mut [f64]| {
            for k in 0..n {
                z[k] = if free[k] && diag[k] > 0.0 { r[k] / diag[k] } else { 0.0 };
            }
        };
        let mut z = vec![0.0; n];
        precond(&r, &mut z);
        let mut p = z.clone();
        let mut rz: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
        let mut ap = vec![0.0; n];
        let mut residual = norm(&r) / b_norm;
        let mut iterations = 0;
        while residual >= tol {
            if iterations >= MAX_ITERATIONS {
                return Err(Error::NoConvergence { iterations, residual });
            }
            apply(&p, &mut ap);
            for k in 0..n {
                if !free[k] {
                    ap[k] = 0.0;
                }
            }
            let pap: f64 = p.iter().zip(&ap).map(|(a, b)| a * b).sum();
            if pap <= 0.0 {
                break;
            }
            let alpha = rz / pap;
            for k in 0..n {
                u[k] += alpha * p[k];
                r[k] -= alpha * ap[k];
            }
            precond(&r, &mut z);
            let rz_next: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
            let beta = rz_next / rz;
            rz = rz_next;
            for k in 0..n {
                p[k] = z[k] + beta * p[k];
            }
            residual = norm(&r) / b_norm;
            iterations += 1;
        }
        let energy = self.energy(&u);
        if !(energy > 0.0) {
            return Err(Error::InvalidQuad("marked arcs are not separated"));
        }
        Ok((u, HarmonicSolution { ell: 1.0 / energy, energy, iterations, residual }))
    }
}

/// ℓ_D[(ab), (cd)] at refinement `s`.
pub fn extremal_distance(quad: &Quad, s: u32, tol: f64) -> Result<f64> {
    Ok(extremal_distance_report(quad, s, tol)?.ell)
}

pub fn extremal_distance_report(quad: &Quad, s: u32, tol: f64) -> Result<HarmonicSolution> {
    Ok(HarmonicProblem::new(quad, s)?.solve(tol)?.1)
}

/// ℓ_D[(ab), (cd)] · ℓ_D[(bc), (da)], which is 1 in the continuum.
pub fn duality_check(quad: &Quad, s: u32, tol: f64) -> Result<f64> {
    Ok(extremal_distance(quad, s, tol)? * extremal_distance(&quad.rotated(), s, tol)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::rectangle;

    #[test]
    fn square_and_rectangles() {
        let sq = Quad::rectangle(1, 1).unwrap();
        assert!((extremal_distance(&sq, 32, 1e-10).unwrap() - 1.0).abs() < 1e-3);
        // 1 wide, 2 tall with the short sides marked.
        let d = rectangle(0, 0, 1, 2).unwrap();
        let q = Quad::new(d, [Point::new(0, 0), Point::new(1, 0), Point::new(1, 2), Point::new(0, 2)]).unwrap();
        assert!((extremal_distance(&q, 32, 1e-10).unwrap() - 2.0).abs() < 0.04);
    }

    #[test]
    fn rectangle_is_exact() {
        // The linear potential is discrete harmonic, so rectangles are exact
        // at every refinement.
        for (w, h) in [(1, 1), (3, 1), (2, 5)] {
            let q = Quad::rectangle(w, h).unwrap();
            let ell = extremal_distance(&q, 4, 1e-12).unwrap();
            assert!((ell - w as f64 / h as f64).abs() < 1e-9, "{w}x{h}: {ell}");
            assert!((duality_check(&q, 4, 1e-12).unwrap() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn degenerate_inputs() {
        let q = Quad::rectangle(2, 2).unwrap();
        assert!(HarmonicProblem::new(&q, 0).is_err());
        assert!(HarmonicProblem::new(&q, 2).unwrap().solve(0.0).is_err());
    }
}
