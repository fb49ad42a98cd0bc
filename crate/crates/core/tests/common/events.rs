//! A catalogue of increasing events on small domains, each computed by a
//! plain flood fill so that no library connectivity code is involved.

#![allow(dead_code)]

use std::sync::Arc;

use rcmlab_core::domain::{Domain, Point};
use rcmlab_core::measure::Configuration;

pub type Event = Arc<dyn Fn(&Configuration) -> bool + Send + Sync>;

/// Vertices reachable from `start` through open edges.
pub fn reach(d: &Domain, cfg: &Configuration, start: &[u32]) -> Vec<bool> {
    let mut seen = vec![false; d.num_vertices()];
    let mut stack = start.to_vec();
    for &v in start {
        seen[v as usize] = true;
    }
    while let Some(v) = stack.pop() {
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
    seen
}

pub fn increasing_events(d: &Domain) -> Vec<(String, Event)> {
    let mut out: Vec<(String, Event)> = Vec::new();
    let nv = d.num_vertices() as u32;
    let ne = d.num_edges();
    for e in [0, ne / 2, ne - 1] {
        out.push((format!("edge {e} open"), Arc::new(move |c: &Configuration| c.get(e))));
    }
    let pairs = [(0, nv - 1), (0, nv / 2), (nv / 3, nv - 1)];
    for (x, y) in pairs {
        if x == y {
            continue;
        }
        let dd = d.clone();
        out.push((format!("{x} <-> {y}"), Arc::new(move |c: &Configuration| reach(&dd, c, &[x])[y as usize])));
    }
    {
        let dd = d.clone();
        let interior: Vec<u32> = (0..nv).filter(|&v| !d.is_boundary(v)).collect();
        if let Some(&x) = interior.first() {
            out.push((
                format!("{x} <-> boundary"),
                Arc::new(move |c: &Configuration| {
                    let r = reach(&dd, c, &[x]);
                    dd.boundary().iter().any(|&b| r[b as usize])
                }),
            ));
        }
    }
    {
        // Left-right crossing of the bounding box.
        let dd = d.clone();
        let xs: Vec<i32> = d.vertices().iter().map(|p| p.x).collect();
        let (x0, x1) = (*xs.iter().min().unwrap(), *xs.iter().max().unwrap());
        let left: Vec<u32> = (0..nv).filter(|&v| d.vertex(v).x == x0).collect();
        let right: Vec<u32> = (0..nv).filter(|&v| d.vertex(v).x == x1).collect();
        out.push((
            "left-right crossing".into(),
            Arc::new(move |c: &Configuration| {
                let r = reach(&dd, c, &left);
                right.iter().any(|&v| r[v as usize])
            }),
        ));
    }
    for k in [1, ne / 2] {
        out.push((format!("at least {k} open"), Arc::new(move |c: &Configuration| c.count_open() >= k)));
    }
    {
        let dd = d.clone();
        let origin = d.vertex_index(Point::new(0, 0)).unwrap_or(0);
        out.push((
            "cluster of first vertex has 3+ vertices".into(),
            Arc::new(move |c: &Configuration| reach(&dd, c, &[origin]).iter().filter(|&&s| s).count() >= 3),
        ));
    }
    out
}
