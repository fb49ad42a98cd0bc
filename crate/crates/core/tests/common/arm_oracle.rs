//! Exhaustive arm search used as an oracle for the flow-based detector.
//!
//! Every canonical arm is enumerated as an explicit self-avoiding path, then
//! a backtracking search looks for a pairwise disjoint family whose types,
//! read in angular order of the starting points, spell σ (cyclically for the
//! full plane, from the positive x-axis otherwise). Annuli are centred at the
//! origin with R ≤ 3 so that vertex and face sets fit in a u64.

#![allow(dead_code)]

use rcmlab_core::domain::{Domain, Mask, Point};
use rcmlab_core::measure::Configuration;

#[derive(Clone, Copy, Debug)]
struct Arm {
    angle: f64,
    primal: bool,
    cells: u64,
}

fn norm(p: Point) -> i32 {
    p.x.abs().max(p.y.abs())
}

fn angle(x: f64, y: f64) -> f64 {
    let a = y.atan2(x);
    if a < -1e-12 {
        a + std::f64::consts::TAU
    } else {
        a.max(0.0)
    }
}

struct Ctx<'a> {
    domain: &'a Domain,
    cfg: &'a Configuration,
    r: i32,
    big: i32,
    mask: Mask,
}

impl Ctx<'_> {
    fn vbit(&self, p: Point) -> u64 {
        let side = 2 * self.big + 1;
        1 << ((p.y + self.big) * side + (p.x + self.big))
    }

    fn fbit(&self, f: Point) -> u64 {
        let side = 2 * self.big;
        1 << ((f.y + self.big) * side + (f.x + self.big))
    }

    fn in_annulus(&self, p: Point) -> bool {
        let n = norm(p);
        n >= self.r && n <= self.big && self.mask.allows(p)
    }

    fn open(&self, p: Point, q: Point) -> bool {
        self.cfg.get(self.domain.edge_between(p, q).expect("edge in domain") as usize)
    }

    fn in_band(&self, f: Point) -> bool {
        [f, f.offset(1, 0), f.offset(0, 1), f.offset(1, 1)].iter().all(|&c| self.in_annulus(c))
    }

    /// Sides of face `f` as (p, q, face across).
    fn sides(f: Point) -> [(Point, Point, Point); 4] {
        [
            (f, f.offset(1, 0), f.offset(0, -1)),
            (f.offset(0, 1), f.offset(1, 1), f.offset(0, 1)),
            (f, f.offset(0, 1), f.offset(-1, 0)),
            (f.offset(1, 0), f.offset(1, 1), f.offset(1, 0)),
        ]
    }

    fn can_exit(&self, f: Point) -> bool {
        Self::sides(f).iter().any(|&(p, q, _)| norm(p) == self.big && norm(q) == self.big && !self.open(p, q))
    }

    fn primal_arms(&self, out: &mut Vec<Arm>) {
        for x in -self.r..=self.r {
            for y in -self.r..=self.r {
                let p = Point::new(x, y);
                if norm(p) != self.r || !self.mask.allows(p) {
                    continue;
                }
                let a = angle(x as f64, y as f64);
                self.extend_primal(p, self.vbit(p), a, out);
            }
        }
    }

    fn extend_primal(&self, at: Point, used: u64, a: f64, out: &mut Vec<Arm>) {
        for (dx, dy) in [(1, 0), (0, 1), (-1, 0), (0, -1)] {
            let q = at.offset(dx, dy);
            if !self.in_annulus(q) || norm(q) == self.r || used & self.vbit(q) != 0 || !self.open(at, q) {
                continue;
            }
            let next = used | self.vbit(q);
            if norm(q) == self.big {
                out.push(Arm { angle: a, primal: true, cells: next });
            } else {
                self.extend_primal(q, next, a, out);
            }
        }
    }

    fn dual_arms(&self, out: &mut Vec<Arm>) {
        if self.r == 0 {
            return;
        }
        for x in -self.r..self.r + 1 {
            for y in -self.r..self.r + 1 {
                let p = Point::new(x, y);
                for q in [p.offset(1, 0), p.offset(0, 1)] {
                    if norm(p) != self.r || norm(q) != self.r || !self.mask.allows(p) || !self.mask.allows(q) {
                        continue;
                    }
                    if self.open(p, q) {
                        continue;
                    }
                    let candidates = if p.y == q.y { [p, p.offset(0, -1)] } else { [p, p.offset(-1, 0)] };
                    let Some(&f) = candidates.iter().find(|&&f| {
                        [f, f.offset(1, 0), f.offset(0, 1), f.offset(1, 1)].iter().all(|&c| norm(c) >= self.r)
                    }) else {
                        continue;
                    };
                    if !self.in_band(f) {
                        continue;
                    }
                    let a = angle((p.x + q.x) as f64 / 2.0, (p.y + q.y) as f64 / 2.0);
                    self.extend_dual(f, self.fbit(f), a, out);
                }
            }
        }
    }

    fn extend_dual(&self, f: Point, used: u64, a: f64, out: &mut Vec<Arm>) {
        if self.can_exit(f) {
            out.push(Arm { angle: a, primal: false, cells: used });
            return;
        }
        for (p, q, g) in Self::sides(f) {
            if self.in_band(g) && used & self.fbit(g) == 0 && !self.open(p, q) {
                self.extend_dual(g, used | self.fbit(g), a, out);
            }
        }
    }
}

fn search(arms: &[Arm], words: &[Vec<bool>], from: usize, used: [u64; 2], chosen: &mut Vec<bool>) -> bool {
    let k = words[0].len();
    if chosen.len() == k {
        return true;
    }
    for i in from..arms.len() {
        let arm = arms[i];
        let t = usize::from(arm.primal);
        if used[t] & arm.cells != 0 {
            continue;
        }
        // Arms starting at the same slot share their first cell, so angles of
        // a disjoint family are strictly increasing in this order.
        chosen.push(arm.primal);
        let ok = words.iter().any(|w| w[..chosen.len()] == chosen[..]) && {
            let mut next = used;
            next[t] |= arm.cells;
            search(arms, words, i + 1, next, chosen)
        };
        chosen.pop();
        if ok {
            return true;
        }
    }
    false
}

/// Whether k disjoint canonical arms of types σ exist in the masked annulus
/// Λ_R \ Λ_r around the origin.
pub fn oracle_arms(domain: &Domain, cfg: &Configuration, r: i32, big: i32, mask: Mask, sigma: &[bool]) -> bool {
    assert!(big <= 3 && r < big, "oracle handles R ≤ 3 only");
    let ctx = Ctx { domain, cfg, r, big, mask };
    let mut arms = Vec::new();
    ctx.primal_arms(&mut arms);
    ctx.dual_arms(&mut arms);
    arms.sort_by(|a, b| a.angle.partial_cmp(&b.angle).unwrap());
    let k = sigma.len();
    let words: Vec<Vec<bool>> = if mask == Mask::Full {
        (0..k).map(|j| (0..k).map(|i| sigma[(i + j) % k]).collect()).collect()
    } else {
        vec![sigma.to_vec()]
    };
    search(&arms, &words, 0, [0, 0], &mut Vec::new())
}

/// Edges whose state can matter: both endpoints in the masked annulus.
pub fn relevant_edges(domain: &Domain, r: i32, big: i32, mask: Mask) -> Vec<u32> {
    (0..domain.num_edges() as u32)
        .filter(|&e| {
            let (p, q) = domain.edge_points(e);
            [p, q].iter().all(|&c| norm(c) >= r && norm(c) <= big && mask.allows(c))
        })
        .collect()
}

pub fn parse_sigma(word: &str) -> Vec<bool> {
    word.chars().map(|c| c == '1').collect()
}
