//! Shared generators and independent oracles for the integration tests.
#![allow(dead_code, clippy::needless_range_loop)]

use netdyn_core::linalg::{symmetric_eigenvalues, DenseMatrix};
use netdyn_core::{Digraph, TwoLevelNetwork};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Connected simple digraph on `n` nodes: a random spanning tree plus each
/// remaining unordered pair with probability `density`, random orientations,
/// shuffled edge order.
pub fn random_connected(rng: &mut impl Rng, n: usize, density: f64) -> Digraph {
    let mut labels: Vec<usize> = (0..n).collect();
    labels.shuffle(rng);
    let mut pairs = Vec::new();
    let mut present = vec![vec![false; n]; n];
    for i in 1..n {
        let j = rng.gen_range(0..i);
        let (a, b) = (labels[i], labels[j]);
        present[a][b] = true;
        present[b][a] = true;
        pairs.push((a, b));
    }
    for a in 0..n {
        for b in (a + 1)..n {
            if !present[a][b] && rng.gen_bool(density) {
                present[a][b] = true;
                present[b][a] = true;
                pairs.push((a, b));
            }
        }
    }
    pairs.shuffle(rng);
    let edges = pairs
        .into_iter()
        .map(|(a, b)| if rng.gen_bool(0.5) { (a, b) } else { (b, a) })
        .collect();
    Digraph::new(n, edges).unwrap()
}

/// Random two-level network with `n` agents and `p ≤ n` groups: every group
/// nonempty, connected group graph, arbitrary (possibly disconnected) agent
/// graph.
pub fn random_two_level(rng: &mut impl Rng, n: usize, p: usize) -> TwoLevelNetwork {
    let mut membership: Vec<usize> = (0..n).map(|i| if i < p { i } else { rng.gen_range(0..p) }).collect();
    membership.shuffle(rng);
    let groups = random_connected(rng, p, 0.4);
    let agents = if n > 1 {
        random_connected(rng, n, 0.2)
    } else {
        Digraph::empty(1).unwrap()
    };
    TwoLevelNetwork::new(agents, groups, membership).unwrap()
}

pub fn random_vector(rng: &mut impl Rng, len: usize, scale: f64) -> Vec<f64> {
    (0..len).map(|_| rng.gen_range(-scale..scale)).collect()
}

/// Union-find acyclicity check of an edge subset.
fn is_spanning_tree(g: &Digraph, subset: &[usize]) -> bool {
    let n = g.node_count();
    if subset.len() + 1 != n {
        return false;
    }
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for &e in subset {
        let (a, b) = g.edges()[e];
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra == rb {
            return false;
        }
        parent[ra] = rb;
    }
    true
}

/// Every spanning tree, found by testing all `(n-1)`-subsets of edges.
pub fn brute_force_trees(g: &Digraph) -> Vec<Vec<usize>> {
    let m = g.edge_count();
    let k = g.node_count() - 1;
    let mut out = Vec::new();
    let mut subset = Vec::with_capacity(k);
    fn rec(g: &Digraph, start: usize, m: usize, k: usize, subset: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if subset.len() == k {
            if is_spanning_tree(g, subset) {
                out.push(subset.clone());
            }
            return;
        }
        for e in start..m {
            if m - e < k - subset.len() {
                break;
            }
            subset.push(e);
            rec(g, e + 1, m, k, subset, out);
            subset.pop();
        }
    }
    rec(g, 0, m, k, &mut subset, &mut out);
    out
}

/// Second-smallest Laplacian eigenvalue (algebraic connectivity).
pub fn algebraic_connectivity(g: &Digraph) -> f64 {
    let l: DenseMatrix = g.laplacian(None).unwrap();
    symmetric_eigenvalues(&l).unwrap()[1]
}

/// Horizon long enough for `e^{-rate T}` to fall far below the tolerances.
pub fn horizon_for_rate(rate: f64) -> f64 {
    (40.0 / rate.abs()).max(10.0)
}

pub fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

pub fn to_nalgebra(m: &DenseMatrix) -> nalgebra::DMatrix<f64> {
    nalgebra::DMatrix::from_row_slice(m.rows(), m.cols(), m.as_slice())
}

/// The 4-cycle 1→2→3→4→1 (0-based here).
pub fn cycle4() -> Digraph {
    Digraph::new(4, vec![(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap()
}

/// K4 with edges e1: 1→2, e2: 2→3, e3: 3→4, e4: 4→1, e5: 1→3, e6: 2→4.
pub fn k4() -> Digraph {
    Digraph::new(4, vec![(0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (1, 3)]).unwrap()
}

pub const CYCLE4_SIGNS: [i64; 4] = [1, 1, -1, -1];
pub const K4_SIGNS: [i64; 6] = [-1, 1, -1, 1, -1, -1];

pub fn path(n: usize) -> Digraph {
    Digraph::new(n, (1..n).map(|i| (i - 1, i)).collect()).unwrap()
}
