//! Cross-checks against the independent reference oracles.

use dismantle::cover::local_ratio_cover;
use dismantle::{
    components, cost_of, dismantle, reinsert, synth, weighted_vertex_cover, CostVector, CutEdgeSet,
    DismantleParams, DismantlingTarget, Graph, NodeMask, WeightedLaplacian,
};
use dismantle_oracles::{
    bfs_component_sizes, brute_force_min_dismantling, brute_force_min_vertex_cover,
    dense_weighted_laplacian, symmetric_eigen, OracleBudget,
};
use rand::Rng;

fn rng(seed: u64) -> dismantle::rng::Rng {
    dismantle::rng::seeded(seed)
}

#[test]
fn components_match_bfs_oracle() {
    let mut r = rng(1);
    for case in 0..50 {
        let n = r.gen_range(1..=32);
        let g = synth::erdos_renyi(n, r.gen_range(0.02..0.3), case);
        let active: Vec<bool> = (0..n).map(|_| r.gen_bool(0.8)).collect();
        let mask = NodeMask::from_flags(active.clone());
        let ours = components(&g, &mask);
        let oracle = bfs_component_sizes(n, g.edges(), &active).unwrap();
        assert_eq!(ours.sizes(), oracle.as_slice(), "case {case}");
        assert_eq!(ours.gcc_size(), oracle.iter().copied().max().unwrap_or(0));
    }
}

#[test]
fn weighted_laplacian_has_zero_bottom_eigenvalue() {
    for seed in 0..20 {
        let n = 5 + (seed as usize * 13) % 46;
        let g = synth::random_connected(n, 0.1, seed);
        let costs = CostVector::degree(&g);
        let comp: Vec<usize> = (0..n).collect();
        let l = dense_weighted_laplacian(n, g.edges(), costs.weights(), &comp).unwrap();
        let (values, vectors) = symmetric_eigen(&l);
        assert!(
            values[0].abs() <= 1e-8,
            "seed {seed}: lambda_min = {}",
            values[0]
        );
        let first = vectors[0][0];
        let spread = vectors[0]
            .iter()
            .map(|x| (x - first).abs())
            .fold(0.0, f64::max);
        assert!(spread < 1e-8, "bottom eigenvector is not constant");

        // The matrix-free operator agrees with the dense one column by column.
        let op = WeightedLaplacian::build(&g, &NodeMask::full(n), &costs, &comp).unwrap();
        let mut e = vec![0.0; n];
        let mut y = vec![0.0; n];
        for j in 0..n {
            e[j] = 1.0;
            op.apply_laplacian(&e, &mut y);
            for i in 0..n {
                assert!((y[i] - l[i][j]).abs() < 1e-12);
            }
            e[j] = 0.0;
        }
        assert!(op.shift() >= values[n - 1] - 1e-9);
    }
}

fn random_cut(r: &mut dismantle::rng::Rng) -> (CutEdgeSet, Vec<f64>) {
    let left = r.gen_range(1..=6);
    let right = r.gen_range(1..=(12 - left).min(6));
    let mut edges = Vec::new();
    for u in 0..left {
        for v in left..(left + right) {
            if r.gen_bool(0.5) {
                edges.push((u, v));
            }
        }
    }
    if edges.is_empty() {
        edges.push((0, left));
    }
    let costs = (0..left + right)
        .map(|_| r.gen_range(1..=9) as f64)
        .collect();
    (CutEdgeSet::from_edges(edges), costs)
}

#[test]
fn cover_is_within_twice_optimal() {
    let mut r = rng(7);
    for case in 0..100 {
        let (cut, costs) = random_cut(&mut r);
        let opt = brute_force_min_vertex_cover(cut.edges(), &costs).unwrap();
        for res in [
            weighted_vertex_cover(&cut, &costs).unwrap(),
            local_ratio_cover(&cut, &costs).unwrap(),
        ] {
            for &(u, v) in cut.edges() {
                assert!(
                    res.cover.contains(&u) || res.cover.contains(&v),
                    "case {case}"
                );
            }
            assert!(
                res.total_cost <= 2.0 * opt + 1e-12,
                "case {case}: {} vs opt {opt}",
                res.total_cost
            );
            assert!(res.total_cost >= opt - 1e-12);
        }
    }
}

#[test]
fn triangle_cut_optimum_is_one() {
    let cut = CutEdgeSet::from_edges(vec![(0, 1), (0, 2)]);
    assert_eq!(
        brute_force_min_vertex_cover(cut.edges(), &[1.0; 3]).unwrap(),
        1.0
    );
    assert_eq!(local_ratio_cover(&cut, &[1.0; 3]).unwrap().total_cost, 2.0);
}

#[test]
fn dismantling_never_beats_the_optimum() {
    let budget = OracleBudget::default();
    for seed in 0..30 {
        let n = 6 + (seed as usize % 7);
        let g = synth::erdos_renyi(n, 0.35, 100 + seed);
        let target = DismantlingTarget::absolute(2).unwrap();
        for costs in [CostVector::unit(&g), CostVector::degree(&g)] {
            let (opt, set) =
                brute_force_min_dismantling(n, g.edges(), costs.weights(), 2, &budget).unwrap();
            let mut mask = NodeMask::full(n);
            set.iter().for_each(|&v| mask.deactivate(v));
            assert!(components(&g, &mask).gcc_size() <= 2);

            let sol = dismantle(
                &g,
                &costs,
                &target,
                &DismantleParams {
                    seed,
                    ..Default::default()
                },
            )
            .unwrap();
            let back = reinsert(&g, &costs, &target, &sol).unwrap();
            assert!(back.total_cost >= opt - 1e-9, "seed {seed}");
            assert!(sol.total_cost >= back.total_cost);
        }
    }
}

#[test]
fn reported_cost_matches_oracle_scale() {
    let g = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
    let costs = CostVector::degree(&g);
    let (opt, set) =
        brute_force_min_dismantling(3, g.edges(), costs.weights(), 1, &OracleBudget::default())
            .unwrap();
    assert_eq!(opt, 2.0);
    assert_eq!(set, vec![1]);
    let target = DismantlingTarget::absolute(1).unwrap();
    let sol = dismantle(&g, &costs, &target, &DismantleParams::default()).unwrap();
    assert_eq!(cost_of(&sol, &costs), 0.5);
}
