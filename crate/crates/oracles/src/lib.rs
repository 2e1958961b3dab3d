//! Reference oracles for dismantling tests.
//!
//! Everything here works on raw edge lists and cost slices and shares no
//! code with the library it checks: components come from breadth-first
//! search, optima from subset enumeration, eigenpairs from a dense cyclic
//! Jacobi sweep. All of it is exponential or cubic and meant for desk-scale
//! instances only; budgets are enforced as hard errors.

use std::collections::VecDeque;

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum OracleError {
    #[error("{what}: size {size} exceeds oracle budget {limit}")]
    BudgetExceeded {
        what: &'static str,
        size: usize,
        limit: usize,
    },
    #[error("component is not connected")]
    Disconnected,
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, OracleError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleBudget {
    pub max_nodes_for_subsets: usize,
    pub max_nodes_for_dense_eigen: usize,
}

impl Default for OracleBudget {
    fn default() -> Self {
        Self {
            max_nodes_for_subsets: 14,
            max_nodes_for_dense_eigen: 200,
        }
    }
}

/// Most endpoints `brute_force_min_vertex_cover` will enumerate over.
pub const MAX_COVER_ENDPOINTS: usize = 20;

fn adjacency(n: usize, edges: &[(usize, usize)]) -> Result<Vec<Vec<usize>>> {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        if u >= n || v >= n {
            return Err(OracleError::Invalid(format!(
                "edge ({u}, {v}) with n = {n}"
            )));
        }
        if u != v {
            adj[u].push(v);
            adj[v].push(u);
        }
    }
    for row in adj.iter_mut() {
        row.sort_unstable();
        row.dedup();
    }
    Ok(adj)
}

/// Sizes of the components among `active` nodes, ordered by each
/// component's smallest node.
pub fn bfs_component_sizes(
    n: usize,
    edges: &[(usize, usize)],
    active: &[bool],
) -> Result<Vec<usize>> {
    if active.len() != n {
        return Err(OracleError::Invalid("mask length differs from n".into()));
    }
    let adj = adjacency(n, edges)?;
    let mut seen = vec![false; n];
    let mut sizes = Vec::new();
    let mut queue = VecDeque::new();
    for start in 0..n {
        if !active[start] || seen[start] {
            continue;
        }
        seen[start] = true;
        queue.push_back(start);
        let mut size = 0;
        while let Some(v) = queue.pop_front() {
            size += 1;
            for &u in &adj[v] {
                if active[u] && !seen[u] {
                    seen[u] = true;
                    queue.push_back(u);
                }
            }
        }
        sizes.push(size);
    }
    Ok(sizes)
}

fn largest_with_removed(adj: &[Vec<usize>], removed: u64) -> usize {
    let n = adj.len();
    let mut seen = removed;
    let mut best = 0;
    let mut stack = Vec::new();
    for start in 0..n {
        if seen >> start & 1 == 1 {
            continue;
        }
        seen |= 1 << start;
        stack.push(start);
        let mut size = 0;
        while let Some(v) = stack.pop() {
            size += 1;
            for &u in &adj[v] {
                if seen >> u & 1 == 0 {
                    seen |= 1 << u;
                    stack.push(u);
                }
            }
        }
        best = best.max(size);
    }
    best
}

/// Cheapest node set leaving every component with at most `max_gcc` nodes.
///
/// Ties go to fewer nodes, then to the numerically smallest bitmask.
pub fn brute_force_min_dismantling(
    n: usize,
    edges: &[(usize, usize)],
    costs: &[f64],
    max_gcc: usize,
    budget: &OracleBudget,
) -> Result<(f64, Vec<usize>)> {
    if n > budget.max_nodes_for_subsets || n > 63 {
        return Err(OracleError::BudgetExceeded {
            what: "subset enumeration",
            size: n,
            limit: budget.max_nodes_for_subsets.min(63),
        });
    }
    if costs.len() != n {
        return Err(OracleError::Invalid("cost length differs from n".into()));
    }
    let adj = adjacency(n, edges)?;
    let mut best: Option<(f64, u32, u64)> = None;
    for subset in 0u64..(1u64 << n) {
        let cost: f64 = (0..n)
            .filter(|&v| subset >> v & 1 == 1)
            .map(|v| costs[v])
            .sum();
        let count = subset.count_ones();
        if let Some((bc, bn, _)) = best {
            if cost > bc || (cost == bc && count >= bn) {
                continue;
            }
        }
        if largest_with_removed(&adj, subset) <= max_gcc {
            best = Some((cost, count, subset));
        }
    }
    let (cost, _, subset) = best.expect("removing every node always works");
    Ok((cost, (0..n).filter(|&v| subset >> v & 1 == 1).collect()))
}

/// Exact minimum-cost vertex cover of `edges` by enumeration over endpoints.
pub fn brute_force_min_vertex_cover(edges: &[(usize, usize)], costs: &[f64]) -> Result<f64> {
    let mut endpoints: Vec<usize> = edges.iter().flat_map(|&(u, v)| [u, v]).collect();
    endpoints.sort_unstable();
    endpoints.dedup();
    if endpoints.len() > MAX_COVER_ENDPOINTS {
        return Err(OracleError::BudgetExceeded {
            what: "cover enumeration",
            size: endpoints.len(),
            limit: MAX_COVER_ENDPOINTS,
        });
    }
    if endpoints.last().is_some_and(|&v| v >= costs.len()) {
        return Err(OracleError::Invalid("endpoint without cost".into()));
    }
    let pos = |v: usize| endpoints.binary_search(&v).unwrap();
    let masks: Vec<(u32, u32)> = edges
        .iter()
        .map(|&(u, v)| (1 << pos(u), 1 << pos(v)))
        .collect();
    let mut best = f64::INFINITY;
    for subset in 0u32..(1u32 << endpoints.len()) {
        if masks.iter().all(|&(a, b)| subset & (a | b) != 0) {
            let cost: f64 = endpoints
                .iter()
                .enumerate()
                .filter(|(i, _)| subset >> i & 1 == 1)
                .map(|(_, &v)| costs[v])
                .sum();
            best = best.min(cost);
        }
    }
    Ok(best)
}

/// Eigen-decomposition of a dense symmetric matrix by cyclic Jacobi
/// rotations. Returns eigenvalues ascending with matching unit column
/// vectors (`vectors[k]` is the k-th eigenvector).
#[allow(clippy::needless_range_loop)]
pub fn symmetric_eigen(matrix: &[Vec<f64>]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = matrix.len();
    let mut a: Vec<Vec<f64>> = matrix.to_vec();
    let mut q: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| f64::from(u8::from(i == j))).collect())
        .collect();
    let scale: f64 = a
        .iter()
        .flatten()
        .map(|x| x * x)
        .sum::<f64>()
        .sqrt()
        .max(1e-300);

    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for r in (p + 1)..n {
                if a[p][r].abs() <= 1e-300 {
                    continue;
                }
                let theta = (a[r][r] - a[p][p]) / (2.0 * a[p][r]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akr = a[k][r];
                    a[k][p] = c * akp - s * akr;
                    a[k][r] = s * akp + c * akr;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let ark = a[r][k];
                    a[p][k] = c * apk - s * ark;
                    a[r][k] = s * apk + c * ark;
                }
                for row in q.iter_mut() {
                    let qp = row[p];
                    let qr = row[r];
                    row[p] = c * qp - s * qr;
                    row[r] = s * qp + c * qr;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i][i].total_cmp(&a[j][j]));
    let values = order.iter().map(|&i| a[i][i]).collect();
    let vectors = order
        .iter()
        .map(|&k| (0..n).map(|i| q[i][k]).collect())
        .collect();
    (values, vectors)
}

/// Dense node-weighted Laplacian over `component` (sorted ascending), with
/// edge weights `w_u + w_v`.
pub fn dense_weighted_laplacian(
    n: usize,
    edges: &[(usize, usize)],
    costs: &[f64],
    component: &[usize],
) -> Result<Vec<Vec<f64>>> {
    let mut nodes = component.to_vec();
    nodes.sort_unstable();
    nodes.dedup();
    let adj = adjacency(n, edges)?;
    let k = nodes.len();
    let mut l = vec![vec![0.0; k]; k];
    for (i, &u) in nodes.iter().enumerate() {
        for &v in &adj[u] {
            if let Ok(j) = nodes.binary_search(&v) {
                let b = costs[u] + costs[v];
                l[i][j] -= b;
                l[i][i] += b;
            }
        }
    }
    Ok(l)
}

/// Second-smallest eigenvalue and unit eigenvector of the component's
/// node-weighted Laplacian. Entries follow ascending node id.
pub fn dense_fiedler(
    n: usize,
    edges: &[(usize, usize)],
    costs: &[f64],
    component: &[usize],
    budget: &OracleBudget,
) -> Result<(f64, Vec<f64>)> {
    let mut nodes = component.to_vec();
    nodes.sort_unstable();
    nodes.dedup();
    if nodes.len() > budget.max_nodes_for_dense_eigen {
        return Err(OracleError::BudgetExceeded {
            what: "dense eigensolve",
            size: nodes.len(),
            limit: budget.max_nodes_for_dense_eigen,
        });
    }
    if nodes.len() < 2 {
        return Err(OracleError::Invalid("component needs two nodes".into()));
    }
    let mut active = vec![false; n];
    for &v in &nodes {
        active[v] = true;
    }
    let sub_edges: Vec<(usize, usize)> = edges
        .iter()
        .copied()
        .filter(|&(u, v)| active[u] && active[v])
        .collect();
    let sizes = bfs_component_sizes(n, &sub_edges, &active)?;
    if sizes.len() != 1 {
        return Err(OracleError::Disconnected);
    }
    let l = dense_weighted_laplacian(n, edges, costs, &nodes)?;
    let (values, vectors) = symmetric_eigen(&l);
    Ok((values[1], vectors[1].clone()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn components_by_bfs() {
        let sizes = bfs_component_sizes(4, &[(0, 1), (1, 2), (0, 2)], &[true; 4]).unwrap();
        assert_eq!(sizes, vec![3, 1]);
        let sizes = bfs_component_sizes(3, &[(0, 1), (1, 2)], &[true, false, true]).unwrap();
        assert_eq!(sizes, vec![1, 1]);
    }

    #[test]
    fn path_needs_its_middle() {
        let (cost, set) = brute_force_min_dismantling(
            3,
            &[(0, 1), (1, 2)],
            &[1.0; 3],
            1,
            &OracleBudget::default(),
        )
        .unwrap();
        assert_eq!(cost, 1.0);
        assert_eq!(set, vec![1]);
    }

    #[test]
    fn complete_graph_keeps_one_node() {
        let edges: Vec<(usize, usize)> = (0..4)
            .flat_map(|u| ((u + 1)..4).map(move |v| (u, v)))
            .collect();
        let (cost, _) =
            brute_force_min_dismantling(4, &edges, &[1.0; 4], 1, &OracleBudget::default()).unwrap();
        assert_eq!(cost, 3.0);
    }

    #[test]
    fn subset_budget_is_enforced() {
        let err = brute_force_min_dismantling(15, &[], &[1.0; 15], 1, &OracleBudget::default())
            .unwrap_err();
        assert!(matches!(err, OracleError::BudgetExceeded { .. }));
    }

    #[test]
    fn cover_oracle_small_cases() {
        assert_eq!(
            brute_force_min_vertex_cover(&[(0, 1)], &[1.0, 5.0]).unwrap(),
            1.0
        );
        let cycle = [(0, 1), (1, 2), (2, 3), (0, 3)];
        assert_eq!(
            brute_force_min_vertex_cover(&cycle, &[1.0; 4]).unwrap(),
            2.0
        );
        let wide: Vec<(usize, usize)> = (0..11).map(|i| (i, i + 11)).collect();
        assert!(brute_force_min_vertex_cover(&wide, &[1.0; 22]).is_err());
    }

    #[test]
    fn single_edge_fiedler() {
        let (lambda, v) =
            dense_fiedler(2, &[(0, 1)], &[1.0, 1.0], &[0, 1], &OracleBudget::default()).unwrap();
        assert!((lambda - 4.0).abs() < 1e-12);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((v[0].abs() - r).abs() < 1e-12);
        assert!((v[0] + v[1]).abs() < 1e-12);
    }

    #[test]
    fn disconnected_component_is_rejected() {
        let err = dense_fiedler(
            4,
            &[(0, 1), (2, 3)],
            &[1.0; 4],
            &[0, 1, 2, 3],
            &OracleBudget::default(),
        )
        .unwrap_err();
        assert_eq!(err, OracleError::Disconnected);
    }

    #[test]
    fn jacobi_reproduces_path_spectrum() {
        // Unweighted path P4 Laplacian: eigenvalues 2 - 2 cos(k pi / 4).
        let l = vec![
            vec![1.0, -1.0, 0.0, 0.0],
            vec![-1.0, 2.0, -1.0, 0.0],
            vec![0.0, -1.0, 2.0, -1.0],
            vec![0.0, 0.0, -1.0, 1.0],
        ];
        let (values, vectors) = symmetric_eigen(&l);
        for (k, value) in values.iter().enumerate() {
            let expected = 2.0 - 2.0 * (k as f64 * std::f64::consts::PI / 4.0).cos();
            assert!(
                (value - expected).abs() < 1e-12,
                "{k}: {value} vs {expected}"
            );
        }
        for (k, vec) in vectors.iter().enumerate() {
            let mut lv = [0.0; 4];
            for i in 0..4 {
                lv[i] = (0..4).map(|j| l[i][j] * vec[j]).sum();
            }
            for i in 0..4 {
                assert!((lv[i] - values[k] * vec[i]).abs() < 1e-12);
            }
        }
    }
}
