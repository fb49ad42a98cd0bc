mod common;

use common::hamming_oracle::{bellman_ford, subset_search};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rcmlab_core::connectivity::{clusters, hamming_crossing};
use rcmlab_core::domain::{box_domain, Point, Quad};
use rcmlab_core::measure::{BoundaryPartition, Configuration};

fn box_quad(n: i32) -> Quad {
    let d = box_domain(n, Point::new(0, 0)).unwrap();
    Quad::new(d, [Point::new(-n, -n), Point::new(n, -n), Point::new(n, n), Point::new(-n, n)]).unwrap()
}

#[test]
fn matches_brute_force_on_box() {
    let quad = box_quad(3);
    let d = quad.domain();
    let free = BoundaryPartition::free(d);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for i in 0..300 {
        let p = [0.2, 0.4, 0.5, 0.6][i % 4];
        let cfg = Configuration::from_fn(d.num_edges(), |_| rng.gen_bool(p));
        let (k, chain) = hamming_crossing(&quad, &cfg);
        assert_eq!(k, bellman_ford(&quad, &cfg), "{}", cfg.to_bit_string());
        if k <= 2 {
            assert_eq!(Some(k), subset_search(&quad, &cfg, 2));
        }
        // The chain: k + 1 distinct clusters joined by k closed edges, from
        // (ab) to (cd).
        let lab = clusters(d, &cfg, &free).unwrap();
        assert_eq!(chain.clusters.len(), k as usize + 1);
        assert_eq!(chain.defects.len(), k as usize);
        let mut sorted = chain.clusters.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), chain.clusters.len());
        for (j, &e) in chain.defects.iter().enumerate() {
            assert!(!cfg.get(e as usize));
            let [u, v] = d.edge(e);
            let ends = [lab.primal[u as usize], lab.primal[v as usize]];
            assert!(ends.contains(&chain.clusters[j]) && ends.contains(&chain.clusters[j + 1]));
        }
        let touches = |c: u32, arc: usize| quad.arc(arc).iter().any(|&v| lab.primal[v as usize] == c);
        assert!(touches(chain.clusters[0], 0) && touches(*chain.clusters.last().unwrap(), 2));
    }
}

#[test]
fn trivial_configurations() {
    let quad = box_quad(2);
    let n = quad.domain().num_edges();
    assert_eq!(hamming_crossing(&quad, &Configuration::full(n)).0, 0);
    // All closed: a straight column of 4 edges is the cheapest crossing.
    assert_eq!(hamming_crossing(&quad, &Configuration::empty(n)).0, 4);
}
