//! Digraphs, signed and weighted digraphs, two-level (agent/group) networks,
//! incidence matrices and spanning trees.
//!
//! Node indices are 0-based. Graphs are simple as undirected graphs: no
//! self-loops and at most one edge per unordered node pair, so an edge and
//! its reversal cannot coexist.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::{DenseMatrix, Rational, Scalar};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Digraph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Digraph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut seen = BTreeMap::new();
        for (j, &(tail, head)) in edges.iter().enumerate() {
            for node in [tail, head] {
                if node >= n {
                    return Err(Error::NodeOutOfRange { edge: j, node, n });
                }
            }
            if tail == head {
                return Err(Error::SelfLoop { edge: j, node: tail });
            }
            let key = (tail.min(head), tail.max(head));
            if let Some(&first) = seen.get(&key) {
                return Err(Error::DuplicatePair { edge: j, first });
            }
            seen.insert(key, j);
        }
        Ok(Self { n, edges })
    }

    /// Graph on `n` nodes with no edges.
    pub fn empty(n: usize) -> Result<Self> {
        Self::new(n, Vec::new())
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Undirected degree of every node.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for &(t, h) in &self.edges {
            d[t] += 1;
            d[h] += 1;
        }
        d
    }

    /// Node-by-edge matrix with `+1` where edge `j` leaves node `i` and `-1`
    /// where it enters.
    pub fn incidence_matrix<T: Scalar>(&self) -> DenseMatrix<T> {
        let mut a = DenseMatrix::zeros(self.n, self.edges.len());
        for (j, &(tail, head)) in self.edges.iter().enumerate() {
            a[(tail, j)] = T::one();
            a[(head, j)] = -T::one();
        }
        a
    }

    /// Incidence matrix with row `drop_node` removed. For a connected graph
    /// the result has full row rank `n - 1`.
    pub fn reduced_incidence<T: Scalar>(&self, drop_node: usize) -> Result<DenseMatrix<T>> {
        if drop_node >= self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: drop_node,
            });
        }
        if !self.is_connected() {
            return Err(Error::NotConnected);
        }
        Ok(self.incidence_matrix::<T>().without_row(drop_node))
    }

    /// Connectivity of the underlying undirected graph.
    pub fn is_connected(&self) -> bool {
        let adj = self.adjacency_lists();
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut reached = 1;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    reached += 1;
                    stack.push(w);
                }
            }
        }
        reached == self.n
    }

    fn adjacency_lists(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(t, h) in &self.edges {
            adj[t].push(h);
            adj[h].push(t);
        }
        adj
    }

    /// Weighted Laplacian `A W Aᵀ`; unit weights when `weights` is `None`.
    pub fn laplacian<T: Scalar>(&self, weights: Option<&[T]>) -> Result<DenseMatrix<T>> {
        if let Some(w) = weights {
            if w.len() != self.edges.len() {
                return Err(Error::DimensionMismatch {
                    expected: self.edges.len(),
                    found: w.len(),
                });
            }
        }
        let mut l = DenseMatrix::<T>::zeros(self.n, self.n);
        for (j, &(t, h)) in self.edges.iter().enumerate() {
            let w = weights.map_or_else(T::one, |w| w[j].clone());
            for (a, b, v) in [(t, t, w.clone()), (h, h, w.clone()), (t, h, -w.clone()), (h, t, -w)] {
                l[(a, b)] = l[(a, b)].clone() + v;
            }
        }
        Ok(l)
    }

    /// Number of spanning trees by the Matrix-Tree theorem, evaluated in exact
    /// arithmetic. Saturates at `u128::MAX`.
    pub fn tree_count(&self) -> Result<u128> {
        if !self.is_connected() {
            return Err(Error::NotConnected);
        }
        let reduced = self.laplacian::<Rational>(None)?.without_row(self.n - 1);
        let reduced = reduced.submatrix(0..self.n - 1, 0..self.n - 1);
        let det = Rational::det(&reduced)?;
        Ok(num_traits::ToPrimitive::to_u128(&det.to_integer()).unwrap_or(u128::MAX))
    }

    /// All spanning trees, as sorted edge-index sets in lexicographic order.
    ///
    /// Fails with [`Error::CapExceeded`] when the Matrix-Tree count is larger
    /// than `cap`.
    pub fn enumerate_spanning_trees(&self, cap: u128) -> Result<Vec<SpanningTree>> {
        let count = self.tree_count()?;
        if count > cap {
            return Err(Error::CapExceeded { count, cap });
        }
        let mut out = Vec::with_capacity(count as usize);
        let mut chosen = Vec::with_capacity(self.n - 1);
        let parent: Vec<usize> = (0..self.n).collect();
        self.grow_trees(0, &mut chosen, parent, &mut out);
        Ok(out)
    }

    // Include/exclude recursion over edges in index order. Each edge subset is
    // visited at most once, so the output is duplicate-free.
    fn grow_trees(
        &self,
        next: usize,
        chosen: &mut Vec<usize>,
        parent: Vec<usize>,
        out: &mut Vec<SpanningTree>,
    ) {
        let needed = self.n - 1 - chosen.len();
        if needed == 0 {
            out.push(SpanningTree { edges: chosen.clone() });
            return;
        }
        if self.edges.len() - next < needed {
            return;
        }
        let (t, h) = self.edges[next];
        let mut with = parent.clone();
        let (rt, rh) = (find(&mut with, t), find(&mut with, h));
        if rt != rh {
            with[rt] = rh;
            chosen.push(next);
            self.grow_trees(next + 1, chosen, with, out);
            chosen.pop();
        }
        if self.completable(next + 1, &parent) {
            self.grow_trees(next + 1, chosen, parent, out);
        }
    }

    // Whether the components in `parent` can still be joined using edges from
    // `from` onwards.
    fn completable(&self, from: usize, parent: &[usize]) -> bool {
        let mut p = parent.to_vec();
        let mut components = (0..self.n).filter(|&v| find(&mut p, v) == v).count();
        for &(t, h) in &self.edges[from..] {
            let (a, b) = (find(&mut p, t), find(&mut p, h));
            if a != b {
                p[a] = b;
                components -= 1;
                if components == 1 {
                    return true;
                }
            }
        }
        components == 1
    }
}

fn find(parent: &mut [usize], mut v: usize) -> usize {
    while parent[v] != v {
        parent[v] = parent[parent[v]];
        v = parent[v];
    }
    v
}

/// Spanning tree of a host graph, as sorted edge indices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct SpanningTree {
    edges: Vec<usize>,
}

impl SpanningTree {
    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    /// Product of the host-graph weights over the tree edges.
    pub fn weight<T: Scalar>(&self, weights: &[T]) -> T {
        self.edges
            .iter()
            .fold(T::one(), |acc, &j| acc * weights[j].clone())
    }

    /// Whether the edges form a connected acyclic spanning subgraph of `g`.
    pub fn is_valid_for(&self, g: &Digraph) -> bool {
        if self.edges.len() + 1 != g.node_count() {
            return false;
        }
        let mut parent: Vec<usize> = (0..g.node_count()).collect();
        for &j in &self.edges {
            let Some(&(t, h)) = g.edges().get(j) else {
                return false;
            };
            let (a, b) = (find(&mut parent, t), find(&mut parent, h));
            if a == b {
                return false;
            }
            parent[a] = b;
        }
        true
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn from_i64(edge: usize, value: i64) -> Result<Self> {
        match value {
            1 => Ok(Sign::Positive),
            -1 => Ok(Sign::Negative),
            _ => Err(Error::InvalidSign { edge, value }),
        }
    }

    pub fn value(self) -> i64 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SignedDigraph {
    base: Digraph,
    signs: Vec<Sign>,
}

impl SignedDigraph {
    pub fn new(base: Digraph, signs: Vec<Sign>) -> Result<Self> {
        if signs.len() != base.edge_count() {
            return Err(Error::DimensionMismatch {
                expected: base.edge_count(),
                found: signs.len(),
            });
        }
        Ok(Self { base, signs })
    }

    /// Signs given as `±1` integers.
    pub fn from_values(base: Digraph, signs: &[i64]) -> Result<Self> {
        let signs = signs
            .iter()
            .enumerate()
            .map(|(j, &v)| Sign::from_i64(j, v))
            .collect::<Result<Vec<_>>>()?;
        Self::new(base, signs)
    }

    pub fn base(&self) -> &Digraph {
        &self.base
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    pub fn to_weighted<T: Scalar>(&self) -> WeightedDigraph<T> {
        WeightedDigraph {
            base: self.base.clone(),
            weights: self.signs.iter().map(|s| T::from_i64(s.value())).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeightedDigraph<T = f64> {
    base: Digraph,
    weights: Vec<T>,
}

impl<T: Scalar> WeightedDigraph<T> {
    pub fn new(base: Digraph, weights: Vec<T>) -> Result<Self> {
        if weights.len() != base.edge_count() {
            return Err(Error::DimensionMismatch {
                expected: base.edge_count(),
                found: weights.len(),
            });
        }
        Ok(Self { base, weights })
    }

    pub fn base(&self) -> &Digraph {
        &self.base
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    /// `A W Aᵀ`.
    pub fn laplacian(&self) -> DenseMatrix<T> {
        self.base
            .laplacian(Some(&self.weights))
            .expect("weights length checked at construction")
    }
}

/// Agent digraph, group digraph and a partition of agents into groups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoLevelNetwork {
    agents: Digraph,
    groups: Digraph,
    membership: Vec<usize>,
    group_sizes: Vec<usize>,
}

impl TwoLevelNetwork {
    /// `membership[i]` is the group of agent `i`.
    pub fn new(agents: Digraph, groups: Digraph, membership: Vec<usize>) -> Result<Self> {
        let n = agents.node_count();
        let p = groups.node_count();
        if membership.len() != n {
            return Err(Error::InvalidPartition(format!(
                "membership lists {} agents, graph has {n}",
                membership.len()
            )));
        }
        let mut group_sizes = vec![0; p];
        for (i, &g) in membership.iter().enumerate() {
            if g >= p {
                return Err(Error::InvalidPartition(format!(
                    "agent {i} assigned to group {g}, but there are {p} groups"
                )));
            }
            group_sizes[g] += 1;
        }
        if let Some(j) = group_sizes.iter().position(|&s| s == 0) {
            return Err(Error::InvalidPartition(format!("group {j} is empty")));
        }
        Ok(Self {
            agents,
            groups,
            membership,
            group_sizes,
        })
    }

    pub fn agents(&self) -> &Digraph {
        &self.agents
    }

    pub fn groups(&self) -> &Digraph {
        &self.groups
    }

    pub fn membership(&self) -> &[usize] {
        &self.membership
    }

    pub fn group_sizes(&self) -> &[usize] {
        &self.group_sizes
    }

    pub fn agent_count(&self) -> usize {
        self.agents.node_count()
    }

    pub fn group_count(&self) -> usize {
        self.groups.node_count()
    }

    /// Agent-by-group 0/1 membership matrix `A_H`.
    pub fn group_incidence<T: Scalar>(&self) -> DenseMatrix<T> {
        let mut a = DenseMatrix::zeros(self.agent_count(), self.group_count());
        for (i, &g) in self.membership.iter().enumerate() {
            a[(i, g)] = T::one();
        }
        a
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle4() -> Digraph {
        Digraph::new(4, vec![(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap()
    }

    #[test]
    fn rejects_invalid_edges() {
        assert_eq!(Digraph::new(0, vec![]), Err(Error::EmptyGraph));
        assert_eq!(
            Digraph::new(2, vec![(0, 0)]),
            Err(Error::SelfLoop { edge: 0, node: 0 })
        );
        assert_eq!(
            Digraph::new(2, vec![(0, 2)]),
            Err(Error::NodeOutOfRange { edge: 0, node: 2, n: 2 })
        );
        assert_eq!(
            Digraph::new(2, vec![(0, 1), (1, 0)]),
            Err(Error::DuplicatePair { edge: 1, first: 0 })
        );
    }

    #[test]
    fn single_edge_incidence() {
        let g = Digraph::new(2, vec![(0, 1)]).unwrap();
        assert_eq!(g.incidence_matrix::<f64>().to_rows(), vec![vec![1.0], vec![-1.0]]);
        assert_eq!(g.reduced_incidence::<f64>(1).unwrap().to_rows(), vec![vec![1.0]]);
    }

    #[test]
    fn connectivity() {
        assert!(Digraph::empty(1).unwrap().is_connected());
        assert!(!Digraph::empty(2).unwrap().is_connected());
        assert_eq!(
            Digraph::empty(2).unwrap().reduced_incidence::<f64>(0),
            Err(Error::NotConnected)
        );
    }

    #[test]
    fn cycle_trees() {
        let trees = cycle4().enumerate_spanning_trees(100).unwrap();
        assert_eq!(trees.len(), 4);
        assert!(trees.iter().all(|t| t.is_valid_for(&cycle4())));
        assert_eq!(
            cycle4().enumerate_spanning_trees(3),
            Err(Error::CapExceeded { count: 4, cap: 3 })
        );
    }

    #[test]
    fn single_node_has_one_empty_tree() {
        let g = Digraph::empty(1).unwrap();
        assert_eq!(g.tree_count().unwrap(), 1);
        assert_eq!(g.enumerate_spanning_trees(1).unwrap(), vec![SpanningTree { edges: vec![] }]);
    }

    #[test]
    fn group_incidence_small() {
        let t = TwoLevelNetwork::new(
            Digraph::empty(3).unwrap(),
            Digraph::new(2, vec![(0, 1)]).unwrap(),
            vec![0, 0, 1],
        )
        .unwrap();
        let ah = t.group_incidence::<f64>();
        assert_eq!(ah.to_rows(), vec![vec![1.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]]);
        let gram = ah.transpose().matmul(&ah).unwrap();
        assert_eq!(gram, DenseMatrix::from_diagonal(&[2.0, 1.0]));
    }

    #[test]
    fn partition_errors() {
        let empty_group = TwoLevelNetwork::new(
            Digraph::empty(2).unwrap(),
            Digraph::empty(3).unwrap(),
            vec![0, 1],
        );
        assert!(matches!(empty_group, Err(Error::InvalidPartition(_))));
        let bad_index =
            TwoLevelNetwork::new(Digraph::empty(1).unwrap(), Digraph::empty(1).unwrap(), vec![1]);
        assert!(matches!(bad_index, Err(Error::InvalidPartition(_))));
    }

    #[test]
    fn signs_validated() {
        assert_eq!(
            SignedDigraph::from_values(cycle4(), &[1, 1, 0, -1]),
            Err(Error::InvalidSign { edge: 2, value: 0 })
        );
    }
}
