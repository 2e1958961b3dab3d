//! Disjoint-set forest with union by size and path halving.

#[derive(Clone, Debug)]
pub(crate) struct DisjointSet {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSet {
    pub(crate) fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub(crate) fn find(&mut self, mut node: usize) -> usize {
        while self.parent[node] != node {
            let grand = self.parent[self.parent[node]];
            self.parent[node] = grand;
            node = grand;
        }
        node
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) -> usize {
        let mut a = self.find(a);
        let mut b = self.find(b);
        if a == b {
            return a;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        a
    }

    /// Size of the set rooted at `root`. Only meaningful for roots.
    pub(crate) fn root_size(&self, root: usize) -> usize {
        self.size[root]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn union_merges_sizes() {
        let mut dsu = DisjointSet::new(5);
        dsu.union(0, 1);
        dsu.union(3, 4);
        dsu.union(1, 4);
        let r = dsu.find(0);
        assert_eq!(dsu.root_size(r), 4);
        assert_eq!(dsu.find(3), r);
        let lone = dsu.find(2);
        assert_eq!(dsu.root_size(lone), 1);
    }
}
