//! Seeded random graph generators for tests and benchmarks.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::graph::Graph;
use crate::rng;

/// G(n, p). May be disconnected.
pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = rng::seeded(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.gen::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges).expect("ids in range")
}

/// Random recursive tree plus independent G(n, p) edges; always connected.
pub fn random_connected(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = rng::seeded(seed);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut edges = Vec::new();
    for i in 1..n {
        let j = rng.gen_range(0..i);
        edges.push((order[i], order[j]));
    }
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.gen::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges).expect("ids in range")
}

/// Preferential attachment: each new node links to `m` distinct earlier nodes
/// chosen proportionally to degree.
pub fn barabasi_albert(n: usize, m: usize, seed: u64) -> Graph {
    let m = m.max(1);
    let mut rng = rng::seeded(seed);
    let mut edges = Vec::new();
    let mut ends: Vec<usize> = Vec::new();
    let core = (m + 1).min(n);
    for u in 0..core {
        for v in (u + 1)..core {
            edges.push((u, v));
            ends.push(u);
            ends.push(v);
        }
    }
    let mut picked = Vec::with_capacity(m);
    for v in core..n {
        picked.clear();
        while picked.len() < m.min(v) {
            let u = ends[rng.gen_range(0..ends.len())];
            if !picked.contains(&u) {
                picked.push(u);
            }
        }
        for &u in &picked {
            edges.push((u, v));
            ends.push(u);
            ends.push(v);
        }
    }
    Graph::from_edges(n, edges).expect("ids in range")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{gcc_size, NodeMask};

    #[test]
    fn generators_are_seeded() {
        assert_eq!(
            erdos_renyi(30, 0.2, 1).edges(),
            erdos_renyi(30, 0.2, 1).edges()
        );
        assert_ne!(
            erdos_renyi(30, 0.2, 1).edges(),
            erdos_renyi(30, 0.2, 2).edges()
        );
    }

    #[test]
    fn random_connected_is_connected() {
        for seed in 0..10 {
            let g = random_connected(40, 0.02, seed);
            assert_eq!(gcc_size(&g, &NodeMask::full(40)), 40);
        }
    }

    #[test]
    fn barabasi_albert_edge_count() {
        let g = barabasi_albert(200, 3, 4);
        assert_eq!(g.edge_count(), 6 + 3 * 196);
        assert_eq!(gcc_size(&g, &NodeMask::full(200)), 200);
    }
}
