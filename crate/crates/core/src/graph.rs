//! Undirected simple graphs, node masks and connected components.
//!
//! A [`Graph`] is immutable once built. The "remaining network" during
//! dismantling is a [`NodeMask`] over it; every traversal in this crate
//! respects the mask and never visits inactive nodes or their edges.

use std::collections::HashMap;
use std::io::BufRead;

use serde::{Deserialize, Serialize};

use crate::dsu::DisjointSet;
use crate::error::{Error, Result};

/// Immutable undirected simple graph with contiguous node ids `0..n`.
///
/// Adjacency is stored in compressed rows with each neighbor list sorted.
#[derive(Clone, Debug)]
pub struct Graph {
    offsets: Vec<usize>,
    neighbors: Vec<usize>,
    edges: Vec<(usize, usize)>,
    labels: Vec<String>,
}

impl Graph {
    /// Builds a graph over nodes `0..n`, dropping self-loops and collapsing
    /// duplicate or reversed edges. Labels are the decimal node ids.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let labels = (0..n).map(|i| i.to_string()).collect();
        Self::build(labels, edges)
    }

    fn build<I>(labels: Vec<String>, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let n = labels.len();
        let mut canon = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidConfig(format!(
                    "edge ({u}, {v}) out of range for {n} nodes"
                )));
            }
            if u != v {
                canon.push((u.min(v), u.max(v)));
            }
        }
        canon.sort_unstable();
        canon.dedup();

        let mut degree = vec![0usize; n];
        for &(u, v) in &canon {
            degree[u] += 1;
            degree[v] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..n].to_vec();
        let mut neighbors = vec![0usize; offsets[n]];
        for &(u, v) in &canon {
            neighbors[fill[u]] = v;
            fill[u] += 1;
        }
        for &(u, v) in &canon {
            neighbors[fill[v]] = u;
            fill[v] += 1;
        }
        for u in 0..n {
            neighbors[offsets[u]..offsets[u + 1]].sort_unstable();
        }

        Ok(Self {
            offsets,
            neighbors,
            edges: canon,
            labels,
        })
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Canonical edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    /// Original label of a node, as it appeared in the input.
    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    pub fn stats(&self) -> GraphStats {
        let degrees = (0..self.node_count()).map(|v| self.degree(v));
        GraphStats {
            n: self.node_count(),
            m: self.edge_count(),
            degree_min: degrees.clone().min().unwrap_or(0),
            degree_max: degrees.max().unwrap_or(0),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphStats {
    pub n: usize,
    pub m: usize,
    pub degree_min: usize,
    pub degree_max: usize,
}

/// Parses a whitespace-separated edge list.
///
/// Lines starting with `%` or `#` are comments and blank lines are skipped.
/// The first two tokens of every other line are node labels; further tokens
/// (weights, timestamps) are ignored. Labels are mapped to contiguous ids in
/// order of first appearance.
pub fn parse_edge_list<R: BufRead>(reader: R) -> Result<Graph> {
    let mut ids: HashMap<String, usize> = HashMap::new();
    let mut labels: Vec<String> = Vec::new();
    let mut edges = Vec::new();
    let mut intern = |label: &str, labels: &mut Vec<String>| -> usize {
        if let Some(&id) = ids.get(label) {
            return id;
        }
        let id = labels.len();
        ids.insert(label.to_owned(), id);
        labels.push(label.to_owned());
        id
    };

    for (index, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') || trimmed.starts_with('#') {
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        let (Some(a), Some(b)) = (tokens.next(), tokens.next()) else {
            return Err(Error::Parse {
                line: index + 1,
                message: format!("expected two node labels, found {trimmed:?}"),
            });
        };
        let u = intern(a, &mut labels);
        let v = intern(b, &mut labels);
        edges.push((u, v));
    }

    if edges.is_empty() {
        return Err(Error::NoEdges);
    }
    Graph::build(labels, edges)
}

pub fn parse_edge_list_str(text: &str) -> Result<Graph> {
    parse_edge_list(text.as_bytes())
}

/// Per-node active flag describing the remaining network.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeMask {
    active: Vec<bool>,
    active_count: usize,
}

impl NodeMask {
    pub fn full(n: usize) -> Self {
        Self {
            active: vec![true; n],
            active_count: n,
        }
    }

    pub fn empty(n: usize) -> Self {
        Self {
            active: vec![false; n],
            active_count: 0,
        }
    }

    pub fn from_flags(active: Vec<bool>) -> Self {
        let active_count = active.iter().filter(|&&a| a).count();
        Self {
            active,
            active_count,
        }
    }

    pub fn len(&self) -> usize {
        self.active.len()
    }

    pub fn is_empty(&self) -> bool {
        self.active.is_empty()
    }

    pub fn is_active(&self, v: usize) -> bool {
        self.active[v]
    }

    pub fn active_count(&self) -> usize {
        self.active_count
    }

    pub fn flags(&self) -> &[bool] {
        &self.active
    }

    pub fn deactivate(&mut self, v: usize) {
        if std::mem::replace(&mut self.active[v], false) {
            self.active_count -= 1;
        }
    }

    pub fn activate(&mut self, v: usize) {
        if !std::mem::replace(&mut self.active[v], true) {
            self.active_count += 1;
        }
    }

    /// Number of active neighbors of `v`.
    pub fn active_degree(&self, graph: &Graph, v: usize) -> usize {
        graph
            .neighbors(v)
            .iter()
            .filter(|&&u| self.active[u])
            .count()
    }
}

/// Connected components of the active part of a graph.
///
/// Component indices are assigned in ascending order of each component's
/// smallest node id, so index 0 holds the smallest active node.
#[derive(Clone, Debug)]
pub struct ComponentDecomposition {
    component_of: Vec<Option<usize>>,
    sizes: Vec<usize>,
    representatives: Vec<usize>,
    gcc: Option<usize>,
}

impl ComponentDecomposition {
    pub fn count(&self) -> usize {
        self.sizes.len()
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn component_of(&self, v: usize) -> Option<usize> {
        self.component_of[v]
    }

    /// Smallest node id contained in component `k`.
    pub fn representative(&self, k: usize) -> usize {
        self.representatives[k]
    }

    /// Index of a largest component; ties go to the smallest index.
    pub fn gcc_id(&self) -> Option<usize> {
        self.gcc
    }

    pub fn gcc_size(&self) -> usize {
        self.gcc.map_or(0, |k| self.sizes[k])
    }

    /// Nodes of component `k` in ascending id order.
    pub fn members(&self, k: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.sizes[k]);
        out.extend(
            self.component_of
                .iter()
                .enumerate()
                .skip(self.representatives[k])
                .filter(|(_, c)| **c == Some(k))
                .map(|(v, _)| v),
        );
        out
    }

    /// Component indices ordered by decreasing size, ties by index.
    pub fn by_decreasing_size(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.count()).collect();
        order.sort_by(|&a, &b| self.sizes[b].cmp(&self.sizes[a]).then(a.cmp(&b)));
        order
    }
}

#[allow(clippy::needless_range_loop)]
pub fn components(graph: &Graph, mask: &NodeMask) -> ComponentDecomposition {
    let n = graph.node_count();
    debug_assert_eq!(mask.len(), n);
    let mut dsu = DisjointSet::new(n);
    for &(u, v) in graph.edges() {
        if mask.is_active(u) && mask.is_active(v) {
            dsu.union(u, v);
        }
    }

    let mut index_of_root: Vec<Option<usize>> = vec![None; n];
    let mut component_of = vec![None; n];
    let mut sizes = Vec::new();
    let mut representatives = Vec::new();
    for v in 0..n {
        if !mask.is_active(v) {
            continue;
        }
        let root = dsu.find(v);
        let k = *index_of_root[root].get_or_insert_with(|| {
            sizes.push(0);
            representatives.push(v);
            sizes.len() - 1
        });
        sizes[k] += 1;
        component_of[v] = Some(k);
    }

    let mut gcc: Option<usize> = None;
    for (k, &s) in sizes.iter().enumerate() {
        if gcc.is_none_or(|g| s > sizes[g]) {
            gcc = Some(k);
        }
    }

    ComponentDecomposition {
        component_of,
        sizes,
        representatives,
        gcc,
    }
}

pub fn gcc_size(graph: &Graph, mask: &NodeMask) -> usize {
    components(graph, mask).gcc_size()
}
