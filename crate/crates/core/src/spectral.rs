//! Node-weighted spectral bisection.
//!
//! For a connected component with node costs `w`, every edge `(u, v)` gets
//! weight `b_uv = w_u + w_v` and the Laplacian is `L = D_B - B`. The second
//! eigenvector of `L` is approximated by power iteration on the shifted
//! operator `cI - L` with `c = 2 * max_u d_u`, projecting out the all-ones
//! vector on every step. Signs of the result split the component into the
//! groups `M` (negative) and `MBar` (non-negative).

use std::io::Write;

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::cost::CostVector;
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeMask};
use crate::rng::{self, REDRAW_OFFSET};

const NO_LOCAL: usize = usize::MAX;

/// Matrix-free node-weighted Laplacian of one component.
#[derive(Clone, Debug)]
pub struct WeightedLaplacian {
    nodes: Vec<usize>,
    offsets: Vec<usize>,
    targets: Vec<usize>,
    weights: Vec<f64>,
    degree: Vec<f64>,
    shift: f64,
}

impl WeightedLaplacian {
    /// `component` must be one connected component of the masked graph.
    pub fn build(
        graph: &Graph,
        mask: &NodeMask,
        costs: &CostVector,
        component: &[usize],
    ) -> Result<Self> {
        if component.len() < 2 {
            return Err(Error::ComponentTooSmall(component.len()));
        }
        let mut nodes = component.to_vec();
        nodes.sort_unstable();
        nodes.dedup();

        let mut local = vec![NO_LOCAL; graph.node_count()];
        for (i, &v) in nodes.iter().enumerate() {
            if !mask.is_active(v) {
                return Err(Error::InvalidConfig(format!(
                    "component node {v} is inactive"
                )));
            }
            local[v] = i;
        }
        if nodes.iter().all(|&v| costs.get(v) == 0.0) {
            return Err(Error::InvalidCosts("component has zero total cost".into()));
        }

        let mut offsets = Vec::with_capacity(nodes.len() + 1);
        let mut targets = Vec::new();
        let mut weights = Vec::new();
        let mut degree = Vec::with_capacity(nodes.len());
        offsets.push(0);
        for &v in &nodes {
            let mut d = 0.0;
            for &u in graph.neighbors(v) {
                let j = local[u];
                if j == NO_LOCAL || !mask.is_active(u) {
                    continue;
                }
                let b = costs.get(v) + costs.get(u);
                targets.push(j);
                weights.push(b);
                d += b;
            }
            degree.push(d);
            offsets.push(targets.len());
        }
        let shift = 2.0 * degree.iter().cloned().fold(0.0, f64::max);

        Ok(Self {
            nodes,
            offsets,
            targets,
            weights,
            degree,
            shift,
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Global ids, ascending; position is the local id.
    pub fn nodes(&self) -> &[usize] {
        &self.nodes
    }

    pub fn weighted_degree(&self, local: usize) -> f64 {
        self.degree[local]
    }

    /// Shift constant `c`.
    pub fn shift(&self) -> f64 {
        self.shift
    }

    /// Weighted neighbors `(local id, b_uv)` of a local node.
    pub fn row(&self, local: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.offsets[local]..self.offsets[local + 1];
        self.targets[range.clone()]
            .iter()
            .copied()
            .zip(self.weights[range].iter().copied())
    }

    /// `y = L x`.
    pub fn apply_laplacian(&self, x: &[f64], y: &mut [f64]) {
        for (u, out) in y.iter_mut().enumerate() {
            let mut acc = self.degree[u] * x[u];
            for (v, b) in self.row(u) {
                acc -= b * x[v];
            }
            *out = acc;
        }
    }

    /// `y = (cI - L) x`.
    pub fn apply_shifted(&self, x: &[f64], y: &mut [f64]) {
        for (u, out) in y.iter_mut().enumerate() {
            let mut acc = (self.shift - self.degree[u]) * x[u];
            for (v, b) in self.row(u) {
                acc += b * x[v];
            }
            *out = acc;
        }
    }

    /// `x . L x`, summed edge by edge.
    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        let mut total = 0.0;
        for u in 0..self.len() {
            for (v, b) in self.row(u) {
                if u < v {
                    let d = x[u] - x[v];
                    total += b * d * d;
                }
            }
        }
        total
    }
}

/// `D * ceil(30 ln(n) sqrt(ln(n)))`, at least 1.
pub fn iteration_budget(n: usize, multiplier: usize) -> usize {
    let ln = (n.max(1) as f64).ln();
    let base = (30.0 * ln * ln.sqrt()).ceil() as usize;
    base.max(1).saturating_mul(multiplier.max(1))
}

/// Approximate second eigenvector of a component Laplacian.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralVector {
    nodes: Vec<usize>,
    values: Vec<f64>,
    seed: u64,
    iterations: usize,
}

impl SpectralVector {
    pub fn nodes(&self) -> &[usize] {
        &self.nodes
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Power-iteration steps actually applied.
    pub fn iterations(&self) -> usize {
        self.iterations
    }
}

fn deflate(x: &mut [f64]) {
    let mean = x.iter().sum::<f64>() / x.len() as f64;
    x.iter_mut().for_each(|e| *e -= mean);
}

fn normalize(x: &mut [f64]) -> bool {
    let norm = x.iter().map(|e| e * e).sum::<f64>().sqrt();
    if norm == 0.0 || !norm.is_finite() {
        return false;
    }
    x.iter_mut().for_each(|e| *e /= norm);
    true
}

fn draw_start(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = rng::seeded(seed);
    (0..n).map(|_| rng.gen::<f64>() - 0.5).collect()
}

fn power_iterate(op: &WeightedLaplacian, start: Vec<f64>, iterations: usize) -> Option<Vec<f64>> {
    let mut x = start;
    deflate(&mut x);
    if !normalize(&mut x) {
        return None;
    }
    let mut y = vec![0.0; x.len()];
    for _ in 0..iterations {
        deflate(&mut x);
        op.apply_shifted(&x, &mut y);
        std::mem::swap(&mut x, &mut y);
        if !normalize(&mut x) {
            return None;
        }
    }
    deflate(&mut x);
    normalize(&mut x).then_some(x)
}

/// Power iteration from a start vector drawn uniformly from `[-0.5, 0.5)`.
///
/// A two-node component is returned after deflation only: its orthogonal
/// complement of the ones vector is one-dimensional, so the deflated start
/// is already exact, while `c = lambda_max` would annihilate it.
pub fn approx_fiedler(
    op: &WeightedLaplacian,
    seed: u64,
    iterations: usize,
) -> Result<SpectralVector> {
    let n = op.len();
    if n < 2 {
        return Err(Error::ComponentTooSmall(n));
    }
    let steps = if n == 2 { 0 } else { iterations.max(1) };
    let values = power_iterate(op, draw_start(n, seed), steps)
        .or_else(|| power_iterate(op, draw_start(n, seed.wrapping_add(REDRAW_OFFSET)), steps))
        .ok_or(Error::DegenerateSpectrum)?;
    Ok(SpectralVector {
        nodes: op.nodes.clone(),
        values,
        seed,
        iterations: steps,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Group {
    #[serde(rename = "M")]
    M,
    #[serde(rename = "MBAR")]
    MBar,
}

impl Group {
    pub fn opposite(self) -> Self {
        match self {
            Group::M => Group::MBar,
            Group::MBar => Group::M,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Group::M => "M",
            Group::MBar => "MBAR",
        }
    }

    fn index(self) -> usize {
        match self {
            Group::M => 0,
            Group::MBar => 1,
        }
    }
}

/// Two-group labeling of a component's nodes (ascending global id).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    nodes: Vec<usize>,
    labels: Vec<Group>,
}

impl Partition {
    pub fn new(nodes: Vec<usize>, labels: Vec<Group>) -> Result<Self> {
        if nodes.len() != labels.len() {
            return Err(Error::InvalidConfig(format!(
                "{} nodes but {} labels",
                nodes.len(),
                labels.len()
            )));
        }
        if nodes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidConfig(
                "partition nodes must be strictly ascending".into(),
            ));
        }
        Ok(Self { nodes, labels })
    }

    pub fn nodes(&self) -> &[usize] {
        &self.nodes
    }

    pub fn labels(&self) -> &[Group] {
        &self.labels
    }

    pub fn group_of(&self, v: usize) -> Option<Group> {
        self.nodes.binary_search(&v).ok().map(|i| self.labels[i])
    }

    pub fn count(&self, group: Group) -> usize {
        self.labels.iter().filter(|&&g| g == group).count()
    }

    pub fn members(&self, group: Group) -> Vec<usize> {
        self.nodes
            .iter()
            .zip(&self.labels)
            .filter(|(_, &g)| g == group)
            .map(|(&v, _)| v)
            .collect()
    }

    /// Number of active edges whose endpoints carry opposite labels.
    pub fn cut_size(&self, graph: &Graph, mask: &NodeMask) -> usize {
        let mut cut = 0;
        for (i, &v) in self.nodes.iter().enumerate() {
            for &u in graph.neighbors(v) {
                if u > v && mask.is_active(u) {
                    if let Some(g) = self.group_of(u) {
                        cut += usize::from(g != self.labels[i]);
                    }
                }
            }
        }
        cut
    }
}

/// Negative entries go to `M`, the rest to `MBar`.
///
/// If one side comes out empty the split falls back to the median entry
/// (values at or below it go to `M`); if every entry is equal, the node with
/// the smallest local id alone goes to `M`.
pub fn sign_partition(v: &SpectralVector) -> Partition {
    let values = v.values();
    let mut labels: Vec<Group> = values
        .iter()
        .map(|&x| if x < 0.0 { Group::M } else { Group::MBar })
        .collect();

    let in_m = labels.iter().filter(|&&g| g == Group::M).count();
    if values.len() >= 2 && (in_m == 0 || in_m == values.len()) {
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let median = sorted[(sorted.len() - 1) / 2];
        labels = values
            .iter()
            .map(|&x| if x <= median { Group::M } else { Group::MBar })
            .collect();
        if labels.iter().all(|&g| g == Group::M) {
            labels.iter_mut().for_each(|g| *g = Group::MBar);
            labels[0] = Group::M;
        }
    }

    Partition {
        nodes: v.nodes().to_vec(),
        labels,
    }
}

/// Flip every node whose active neighbors all sit in the opposite group,
/// provided its own group keeps at least one other member.
pub fn fine_tune_partition(graph: &Graph, mask: &NodeMask, partition: &Partition) -> Partition {
    fine_tune_traced(graph, mask, partition).0
}

/// Like [`fine_tune_partition`], also returning flipped nodes in flip order.
///
/// Nodes are scanned in ascending id against the labels as updated so far,
/// and scans repeat until one makes no flip.
pub fn fine_tune_traced(
    graph: &Graph,
    mask: &NodeMask,
    partition: &Partition,
) -> (Partition, Vec<usize>) {
    let mut out = partition.clone();
    let mut local = vec![NO_LOCAL; graph.node_count()];
    for (i, &v) in out.nodes.iter().enumerate() {
        local[v] = i;
    }
    let mut counts = [out.count(Group::M), out.count(Group::MBar)];
    let mut flips = Vec::new();

    loop {
        let mut flipped_any = false;
        for i in 0..out.nodes.len() {
            let v = out.nodes[i];
            let group = out.labels[i];
            if counts[group.index()] <= 1 {
                continue;
            }
            let mut seen = 0usize;
            let isolated_in_group = graph.neighbors(v).iter().all(|&u| {
                if !mask.is_active(u) || local[u] == NO_LOCAL {
                    return true;
                }
                seen += 1;
                out.labels[local[u]] != group
            });
            if isolated_in_group && seen > 0 {
                out.labels[i] = group.opposite();
                counts[group.index()] -= 1;
                counts[group.opposite().index()] += 1;
                flips.push(v);
                flipped_any = true;
            }
        }
        if !flipped_any {
            break;
        }
    }
    (out, flips)
}

/// CSV dump `node_id,group,eigenvector_value` using original node labels.
pub fn write_partition_csv<W: Write>(
    mut out: W,
    graph: &Graph,
    partition: &Partition,
    vector: &SpectralVector,
) -> std::io::Result<()> {
    writeln!(out, "node_id,group,eigenvector_value")?;
    for (i, &v) in partition.nodes().iter().enumerate() {
        let value = vector
            .nodes()
            .binary_search(&v)
            .map(|j| vector.values()[j])
            .unwrap_or(f64::NAN);
        writeln!(
            out,
            "{},{},{}",
            graph.label(v),
            partition.labels()[i].as_str(),
            value
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vector(values: &[f64]) -> SpectralVector {
        SpectralVector {
            nodes: (0..values.len()).collect(),
            values: values.to_vec(),
            seed: 0,
            iterations: 0,
        }
    }

    fn whole(graph: &Graph) -> (NodeMask, Vec<usize>) {
        let n = graph.node_count();
        (NodeMask::full(n), (0..n).collect())
    }

    #[test]
    fn single_edge_operator() {
        let g = Graph::from_edges(2, [(0, 1)]).unwrap();
        let (mask, comp) = whole(&g);
        let op = WeightedLaplacian::build(&g, &mask, &CostVector::unit(&g), &comp).unwrap();
        assert_eq!(op.row(0).collect::<Vec<_>>(), vec![(1, 2.0)]);
        assert_eq!(op.weighted_degree(0), 2.0);
        assert_eq!(op.weighted_degree(1), 2.0);
        assert_eq!(op.shift(), 4.0);
        let mut y = [0.0; 2];
        op.apply_laplacian(&[1.0, 0.0], &mut y);
        assert_eq!(y, [2.0, -2.0]);
    }

    #[test]
    fn weighted_path_operator() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let (mask, comp) = whole(&g);
        let costs = CostVector::custom(vec![1.0, 2.0, 1.0]).unwrap();
        let op = WeightedLaplacian::build(&g, &mask, &costs, &comp).unwrap();
        assert_eq!(op.row(0).collect::<Vec<_>>(), vec![(1, 3.0)]);
        assert_eq!(op.row(1).collect::<Vec<_>>(), vec![(0, 3.0), (2, 3.0)]);
        let d: Vec<f64> = (0..3).map(|u| op.weighted_degree(u)).collect();
        assert_eq!(d, vec![3.0, 6.0, 3.0]);
        assert_eq!(op.shift(), 12.0);
    }

    #[test]
    fn tiny_component_is_rejected() {
        let g = Graph::from_edges(2, [(0, 1)]).unwrap();
        let mask = NodeMask::full(2);
        let err = WeightedLaplacian::build(&g, &mask, &CostVector::unit(&g), &[0]).unwrap_err();
        assert!(matches!(err, Error::ComponentTooSmall(1)));
        assert_eq!(err.to_string(), "component too small to bisect (size 1)");
    }

    #[test]
    fn budgets() {
        assert_eq!(iteration_budget(2000, 1), 629);
        assert_eq!(iteration_budget(2, 1), 18);
        assert_eq!(iteration_budget(2000, 1000), 629_000);
        assert_eq!(iteration_budget(1, 1), 1);
    }

    #[test]
    fn bridged_triangles_split_at_bridge() {
        let g =
            Graph::from_edges(6, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (4, 5), (3, 5)]).unwrap();
        let (mask, comp) = whole(&g);
        let op = WeightedLaplacian::build(&g, &mask, &CostVector::unit(&g), &comp).unwrap();
        for seed in 0..5 {
            let v = approx_fiedler(&op, seed, iteration_budget(6, 1)).unwrap();
            let p = sign_partition(&v);
            let left = p.labels()[0];
            assert!(p.labels()[..3].iter().all(|&g| g == left), "seed {seed}");
            assert!(
                p.labels()[3..].iter().all(|&g| g == left.opposite()),
                "seed {seed}"
            );
        }
    }

    #[test]
    fn fiedler_is_deterministic_unit_and_centered() {
        let g = Graph::from_edges(
            7,
            [
                (0, 1),
                (1, 2),
                (2, 3),
                (3, 4),
                (4, 5),
                (5, 6),
                (6, 0),
                (1, 4),
            ],
        )
        .unwrap();
        let (mask, comp) = whole(&g);
        let op = WeightedLaplacian::build(&g, &mask, &CostVector::degree(&g), &comp).unwrap();
        let a = approx_fiedler(&op, 99, 50).unwrap();
        let b = approx_fiedler(&op, 99, 50).unwrap();
        assert_eq!(a, b);
        let norm: f64 = a.values().iter().map(|x| x * x).sum::<f64>().sqrt();
        assert!((norm - 1.0).abs() < 1e-12);
        let mean: f64 = a.values().iter().sum::<f64>() / 7.0;
        assert!(mean.abs() < 1e-9 * 7f64.sqrt());
        assert_eq!(a.iterations(), 50);
    }

    #[test]
    fn two_node_component_gets_exact_vector() {
        let g = Graph::from_edges(2, [(0, 1)]).unwrap();
        let (mask, comp) = whole(&g);
        let op = WeightedLaplacian::build(&g, &mask, &CostVector::unit(&g), &comp).unwrap();
        let v = approx_fiedler(&op, 3, 18).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((v.values()[0].abs() - r).abs() < 1e-12);
        assert!((v.values()[0] + v.values()[1]).abs() < 1e-12);
        let p = sign_partition(&v);
        assert_eq!(p.count(Group::M), 1);
    }

    #[test]
    fn sign_partition_rules() {
        let p = sign_partition(&vector(&[-1.0, 0.5]));
        assert_eq!(p.members(Group::M), vec![0]);
        assert_eq!(p.members(Group::MBar), vec![1]);

        let p = sign_partition(&vector(&[0.0, 0.3]));
        assert_eq!(p.members(Group::M), vec![0]);
        assert_eq!(p.members(Group::MBar), vec![1]);

        let p = sign_partition(&vector(&[-0.2, -0.1, 0.4]));
        assert_eq!(p.members(Group::M), vec![0, 1]);
        assert_eq!(p.members(Group::MBar), vec![2]);

        let p = sign_partition(&vector(&[0.25, 0.25, 0.25]));
        assert_eq!(p.members(Group::M), vec![0]);
    }

    #[test]
    fn star_cut_shrinks_to_one_edge() {
        // Center 0 and leaf 1 in M, leaves 2..=5 in MBar. The center keeps
        // leaf 1 as a same-group neighbor, so the MBar leaves move instead
        // until one is left on its own.
        let g = Graph::from_edges(6, (1..6).map(|l| (0, l))).unwrap();
        let mask = NodeMask::full(6);
        let labels = vec![
            Group::M,
            Group::M,
            Group::MBar,
            Group::MBar,
            Group::MBar,
            Group::MBar,
        ];
        let p = Partition::new((0..6).collect(), labels).unwrap();
        assert_eq!(p.cut_size(&g, &mask), 4);
        let (tuned, flips) = fine_tune_traced(&g, &mask, &p);
        assert_eq!(flips, vec![2, 3, 4]);
        assert_eq!(tuned.group_of(0), Some(Group::M));
        assert_eq!(tuned.members(Group::MBar), vec![5]);
        assert_eq!(tuned.cut_size(&g, &mask), 1);
    }

    #[test]
    fn fine_tune_keeps_fixpoint() {
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let mask = NodeMask::full(4);
        let p = Partition::new(
            vec![0, 1, 2, 3],
            vec![Group::M, Group::M, Group::MBar, Group::MBar],
        )
        .unwrap();
        assert_eq!(fine_tune_partition(&g, &mask, &p), p);
    }

    #[test]
    fn fine_tune_never_empties_a_group() {
        let g = Graph::from_edges(2, [(0, 1)]).unwrap();
        let mask = NodeMask::full(2);
        let p = Partition::new(vec![0, 1], vec![Group::M, Group::MBar]).unwrap();
        assert_eq!(fine_tune_partition(&g, &mask, &p), p);
    }

    #[test]
    fn partition_csv_dump() {
        let g = crate::graph::parse_edge_list_str("a b\nb c\n").unwrap();
        let v = vector(&[-0.5, 0.0, 0.5]);
        let p = sign_partition(&v);
        let mut buf = Vec::new();
        write_partition_csv(&mut buf, &g, &p, &v).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "node_id,group,eigenvector_value\na,M,-0.5\nb,MBAR,0\nc,MBAR,0.5\n"
        );
    }
}
