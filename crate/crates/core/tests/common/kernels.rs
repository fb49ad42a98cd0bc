//! Exact and empirical checks of the Markov kernels against enumeration.

#![allow(dead_code)]

use rcmlab_core::domain::Domain;
use rcmlab_core::enumerate::enumerate;
use rcmlab_core::measure::{BoundaryPartition, Configuration, Weights};
use rcmlab_core::sampler::{stream_rng, ChayesMachta, HeatBath};

/// L¹ distance between π and π K, where K is one systematic heat-bath sweep
/// assembled edge by edge from the sampler's conditional probabilities.
pub fn heat_bath_sweep_l1(d: &Domain, bc: &BoundaryPartition, w: Weights) -> f64 {
    let m = d.num_edges();
    let pi = enumerate(d, bc, w).unwrap().distribution();
    let mut hb = HeatBath::new(d, bc);
    let mut cur = pi.clone();
    for e in 0..m as u32 {
        let mut next = vec![0.0; cur.len()];
        let [u, v] = d.edge(e);
        for (i, &mass) in cur.iter().enumerate() {
            if mass == 0.0 {
                continue;
            }
            let c = Configuration::from_word(i as u64, m);
            let po = if hb.connected_without(d, &c, u, v, e) { w.p() } else { w.bridge_probability() };
            next[i | 1 << e] += mass * po;
            next[i & !(1 << e)] += mass * (1.0 - po);
        }
        cur = next;
    }
    pi.iter().zip(&cur).map(|(a, b)| (a - b).abs()).sum()
}

/// Total variation between the empirical law of `steps` consecutive
/// Chayes–Machta states (started empty) and the enumerated measure.
pub fn chayes_machta_tv(d: &Domain, bc: &BoundaryPartition, w: Weights, steps: usize, seed: u64) -> f64 {
    let m = d.num_edges();
    let pi = enumerate(d, bc, w).unwrap().distribution();
    let mut counts = vec![0u64; pi.len()];
    let mut cfg = Configuration::empty(m);
    let mut cm = ChayesMachta::new();
    let mut rng = stream_rng(seed, 0);
    for _ in 0..steps {
        cm.step(d, &mut cfg, bc, &w, &mut rng).unwrap();
        counts[cfg.words()[0] as usize] += 1;
    }
    0.5 * pi.iter().zip(&counts).map(|(p, &c)| (p - c as f64 / steps as f64).abs()).sum::<f64>()
}
