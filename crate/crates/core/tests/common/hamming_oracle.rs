//! Brute-force Hamming distance to a crossing.
//!
//! Two independent routes: Bellman–Ford relaxation of closed-edge counts over
//! all vertices, and, for small distances, a search over every set of k closed
//! edges that could be opened, with a plain flood fill for the crossing.

#![allow(dead_code)]

use rcmlab_core::domain::Quad;
use rcmlab_core::measure::Configuration;

pub fn bellman_ford(quad: &Quad, cfg: &Configuration) -> u32 {
    let d = quad.domain();
    let mut dist = vec![u32::MAX; d.num_vertices()];
    for v in quad.arc(0) {
        dist[v as usize] = 0;
    }
    loop {
        let mut changed = false;
        for (e, &[u, v]) in d.edges().iter().enumerate() {
            let w = u32::from(!cfg.get(e));
            for (a, b) in [(u, v), (v, u)] {
                if dist[a as usize] != u32::MAX && dist[a as usize] + w < dist[b as usize] {
                    dist[b as usize] = dist[a as usize] + w;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    quad.arc(2).iter().map(|&v| dist[v as usize]).min().unwrap()
}

fn crossing(quad: &Quad, cfg: &Configuration) -> bool {
    let d = quad.domain();
    let mut seen = vec![false; d.num_vertices()];
    let mut stack: Vec<u32> = quad.arc(0);
    for &v in &stack {
        seen[v as usize] = true;
    }
    let target = quad.arc(2);
    while let Some(v) = stack.pop() {
        if target.contains(&v) {
            return true;
        }
        for (e, &[a, b]) in d.edges().iter().enumerate() {
            if cfg.get(e) && (a == v || b == v) {
                let w = if a == v { b } else { a };
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    stack.push(w);
                }
            }
        }
    }
    false
}

fn opens_to_crossing(quad: &Quad, cfg: &mut Configuration, closed: &[usize], k: usize, from: usize) -> bool {
    if k == 0 {
        return crossing(quad, cfg);
    }
    for i in from..closed.len() {
        cfg.set(closed[i], true);
        let hit = opens_to_crossing(quad, cfg, closed, k - 1, i + 1);
        cfg.set(closed[i], false);
        if hit {
            return true;
        }
    }
    false
}

/// Smallest k ≤ `max_k` such that opening some k closed edges creates a
/// crossing, or None if more are needed.
pub fn subset_search(quad: &Quad, cfg: &Configuration, max_k: usize) -> Option<u32> {
    let closed: Vec<usize> = (0..cfg.len()).filter(|&e| !cfg.get(e)).collect();
    let mut work = cfg.clone();
    (0..=max_k).find(|&k| opens_to_crossing(quad, &mut work, &closed, k, 0)).map(|k| k as u32)
}
