//! Cut rank, exact rank width by subset dynamic programming, heuristic
//! decompositions for larger graphs, and entanglement width.
//!
//! The exact solver runs the recurrence
//! `f(S) = max(cutrank(S), min over splits S = S1 ⊎ S2 of max(f(S1), f(S2)))`
//! with `f({v}) = cutrank({v})`, answering
//! `min over root splits V = A ⊎ B of max(f(A), f(B))`. Enumerating every
//! split of every subset costs `O(3^n)`, which is fine at desk scale; the
//! witness tree is rebuilt from stored argmin splits.

use crate::bits::{rank_of, Gf2Vec};
use crate::error::{Error, Result};
use crate::graph::{Bipartition, Graph};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Largest `n` the exact subset DP accepts by default.
pub const DEFAULT_EXACT_LIMIT: usize = 16;

/// GF(2) rank of the adjacency submatrix between the two sides.
pub fn cut_rank(g: &Graph, p: &Bipartition) -> usize {
    rank_of(p.side_a().iter_ones().map(|u| g.row(u).and(p.side_b())))
}

fn cut_rank_of_set(g: &Graph, side_a: &Gf2Vec) -> usize {
    let side_b = side_a.not();
    rank_of(side_a.iter_ones().map(|u| g.row(u).and(&side_b)))
}

/// An unrooted decomposition tree with one leaf per graph vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankDecomposition {
    num_nodes: usize,
    edges: Vec<(usize, usize)>,
    /// (tree node, graph vertex)
    leaves: Vec<(usize, usize)>,
}

impl RankDecomposition {
    pub fn new(
        num_nodes: usize,
        edges: Vec<(usize, usize)>,
        leaves: Vec<(usize, usize)>,
    ) -> RankDecomposition {
        RankDecomposition {
            num_nodes,
            edges,
            leaves,
        }
    }

    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn leaves(&self) -> &[(usize, usize)] {
        &self.leaves
    }

    /// Check tree shape and the leaf ↔ vertex bijection against `g`.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidDecomposition(msg));
        if self.num_nodes == 0 {
            return bad("tree has no nodes".into());
        }
        if self.edges.len() + 1 != self.num_nodes {
            return bad(format!(
                "{} edges cannot form a tree on {} nodes",
                self.edges.len(),
                self.num_nodes
            ));
        }
        let mut deg = vec![0usize; self.num_nodes];
        let mut adj = vec![Vec::new(); self.num_nodes];
        for &(u, v) in &self.edges {
            if u >= self.num_nodes || v >= self.num_nodes || u == v {
                return bad(format!("bad tree edge ({u}, {v})"));
            }
            deg[u] += 1;
            deg[v] += 1;
            adj[u].push(v);
            adj[v].push(u);
        }
        // connectivity
        let mut seen = vec![false; self.num_nodes];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return bad("tree is disconnected".into());
        }
        let mut vertex_of = vec![None; self.num_nodes];
        let mut seen_vertices = vec![false; g.n()];
        for &(node, vertex) in &self.leaves {
            if node >= self.num_nodes || vertex >= g.n() {
                return bad(format!("leaf entry ({node}, {vertex}) out of range"));
            }
            if vertex_of[node].replace(vertex).is_some() {
                return bad(format!("node {node} mapped twice"));
            }
            if std::mem::replace(&mut seen_vertices[vertex], true) {
                return bad(format!("vertex {vertex} mapped twice"));
            }
        }
        if self.leaves.len() != g.n() || seen_vertices.iter().any(|s| !s) {
            return bad(format!(
                "leaf map covers {} of {} vertices",
                self.leaves.len(),
                g.n()
            ));
        }
        for node in 0..self.num_nodes {
            let is_leaf = vertex_of[node].is_some();
            match (is_leaf, deg[node]) {
                (true, 0) if self.num_nodes == 1 => {}
                (true, 1) => {}
                (false, 2) | (false, 3) => {}
                _ => {
                    return bad(format!(
                        "node {node} has degree {} but {} a leaf",
                        deg[node],
                        if is_leaf { "is" } else { "is not" }
                    ))
                }
            }
        }
        Ok(())
    }

    /// For each tree edge, the vertex set on the side of its first endpoint.
    pub fn edge_splits(&self, n: usize) -> Vec<Gf2Vec> {
        let mut adj = vec![Vec::new(); self.num_nodes];
        for (i, &(u, v)) in self.edges.iter().enumerate() {
            adj[u].push((v, i));
            adj[v].push((u, i));
        }
        let vertex_of: BTreeMap<usize, usize> = self.leaves.iter().copied().collect();
        self.edges
            .iter()
            .enumerate()
            .map(|(i, &(u, _))| {
                let mut side = Gf2Vec::zeros(n);
                let mut stack = vec![u];
                let mut seen = vec![false; self.num_nodes];
                seen[u] = true;
                while let Some(x) = stack.pop() {
                    if let Some(&vv) = vertex_of.get(&x) {
                        side.set(vv, true);
                    }
                    for &(y, ei) in &adj[x] {
                        if ei != i && !seen[y] {
                            seen[y] = true;
                            stack.push(y);
                        }
                    }
                }
                side
            })
            .collect()
    }

    /// Cut rank across every tree edge, recomputed from the graph.
    pub fn edge_widths(&self, g: &Graph) -> Vec<usize> {
        self.edge_splits(g.n())
            .iter()
            .map(|side| cut_rank_of_set(g, side))
            .collect()
    }

    pub fn width(&self, g: &Graph) -> usize {
        self.edge_widths(g).into_iter().max().unwrap_or(0)
    }

    pub fn to_json(&self, g: &Graph) -> String {
        let leaf_map: BTreeMap<String, String> = self
            .leaves
            .iter()
            .map(|&(node, vertex)| (node.to_string(), g.label(vertex).to_string()))
            .collect();
        let j = DecompositionJson {
            tree: self.edges.clone(),
            leaf_map,
            widths: self.edge_widths(g),
        };
        serde_json::to_string_pretty(&j).expect("decomposition serializes")
    }

    pub fn from_json(text: &str, g: &Graph) -> Result<RankDecomposition> {
        let j: DecompositionJson = serde_json::from_str(text)?;
        let num_nodes = j
            .tree
            .iter()
            .flat_map(|&(u, v)| [u, v])
            .max()
            .map_or(1, |m| m + 1);
        let mut leaves = Vec::with_capacity(j.leaf_map.len());
        for (node, label) in &j.leaf_map {
            let node: usize = node.parse().map_err(|_| {
                Error::InvalidDecomposition(format!("leaf key {node:?} is not a node id"))
            })?;
            let vertex = g
                .vertex_by_label(label)
                .ok_or_else(|| Error::NoSuchLabel(label.clone()))?;
            leaves.push((node, vertex));
        }
        let d = RankDecomposition {
            num_nodes,
            edges: j.tree,
            leaves,
        };
        d.validate(g)?;
        let widths = d.edge_widths(g);
        if j.widths != widths {
            return Err(Error::InvalidDecomposition(format!(
                "stored widths {:?} disagree with recomputed {:?}",
                j.widths, widths
            )));
        }
        Ok(d)
    }
}

#[derive(Serialize, Deserialize)]
struct DecompositionJson {
    tree: Vec<(usize, usize)>,
    leaf_map: BTreeMap<String, String>,
    widths: Vec<usize>,
}

/// A width value with its witness.
#[derive(Clone, Debug)]
pub struct WidthReport {
    pub value: usize,
    pub exact: bool,
    pub decomposition: RankDecomposition,
}

impl WidthReport {
    pub fn to_json(&self, g: &Graph) -> String {
        format!(
            "{{\n  \"value\": {},\n  \"exact\": {},\n  \"decomposition\": {}\n}}",
            self.value,
            self.exact,
            self.decomposition.to_json(g)
        )
    }
}

// ---- exact subset DP ----

fn word_rows(g: &Graph) -> Vec<u64> {
    (0..g.n())
        .map(|v| g.neighbors(v).fold(0u64, |acc, u| acc | 1 << u))
        .collect()
}

fn word_cut_rank(rows: &[u64], subset: u64, comp: u64) -> u8 {
    let mut basis = [0u64; 64];
    let mut rank = 0u8;
    let mut s = subset;
    while s != 0 {
        let v = s.trailing_zeros() as usize;
        s &= s - 1;
        let mut r = rows[v] & comp;
        while r != 0 {
            let p = r.trailing_zeros() as usize;
            if basis[p] != 0 {
                r ^= basis[p];
            } else {
                basis[p] = r;
                rank += 1;
                break;
            }
        }
    }
    rank
}

/// Optimal rank width and a witness decomposition, by memoized subset DP.
pub fn exact_rank_width(g: &Graph, limit: usize) -> Result<WidthReport> {
    let n = g.n();
    if n > limit {
        return Err(Error::OverLimit {
            n,
            limit,
            advice: "use heuristic_rank_decomposition for an upper-bound witness".into(),
        });
    }
    if n > 24 {
        return Err(Error::OverLimit {
            n,
            limit: 24,
            advice: "the 3^n split enumeration is impractical beyond n = 24".into(),
        });
    }
    if n == 0 {
        return Err(Error::Infeasible("rank width needs at least one vertex".into()));
    }
    if n == 1 {
        let d = RankDecomposition::new(1, vec![], vec![(0, 0)]);
        return Ok(WidthReport {
            value: 0,
            exact: true,
            decomposition: d,
        });
    }

    let rows = word_rows(g);
    let full: u64 = if n == 64 { !0 } else { (1 << n) - 1 };
    let size = 1usize << n;
    let mut cr = vec![0u8; size];
    for s in 1..size as u64 {
        cr[s as usize] = word_cut_rank(&rows, s, full & !s);
    }

    // f[S] and the chosen first half of the best split; ties prefer balanced
    // splits, then the lexicographically smallest mask.
    let mut f = vec![0u8; size];
    let mut choice = vec![0u64; size];
    for s in 1..size as u64 {
        let si = s as usize;
        if s & (s - 1) == 0 {
            f[si] = cr[si];
            continue;
        }
        let pop_s = s.count_ones() as i64;
        let mut best = (u8::MAX, i64::MAX, u64::MAX);
        let mut sub = (s - 1) & s;
        while sub != 0 {
            let other = s ^ sub;
            if sub <= other {
                let v = f[sub as usize].max(f[other as usize]);
                let imbalance = (pop_s - 2 * sub.count_ones() as i64).abs();
                let cand = (v, imbalance, sub);
                if cand < best {
                    best = cand;
                }
            }
            sub = (sub - 1) & s;
        }
        f[si] = cr[si].max(best.0);
        choice[si] = best.2;
    }

    let mut best = (u8::MAX, i64::MAX, u64::MAX);
    let mut sub = (full - 1) & full;
    while sub != 0 {
        let other = full ^ sub;
        if sub <= other {
            let v = f[sub as usize].max(f[other as usize]);
            let imbalance = (n as i64 - 2 * sub.count_ones() as i64).abs();
            let cand = (v, imbalance, sub);
            if cand < best {
                best = cand;
            }
        }
        sub = (sub - 1) & full;
    }

    // rebuild the witness tree from the argmin splits
    let mut edges = Vec::new();
    let mut leaves = Vec::new();
    let mut next_node = 0usize;
    fn build(
        mask: u64,
        choice: &[u64],
        next_node: &mut usize,
        edges: &mut Vec<(usize, usize)>,
        leaves: &mut Vec<(usize, usize)>,
    ) -> usize {
        let node = *next_node;
        *next_node += 1;
        if mask & (mask - 1) == 0 {
            leaves.push((node, mask.trailing_zeros() as usize));
            return node;
        }
        let sub = choice[mask as usize];
        let a = build(sub, choice, next_node, edges, leaves);
        let b = build(mask ^ sub, choice, next_node, edges, leaves);
        edges.push((node, a));
        edges.push((node, b));
        node
    }
    let (root_a, root_b) = (best.2, full ^ best.2);
    let ta = build(root_a, &choice, &mut next_node, &mut edges, &mut leaves);
    let tb = build(root_b, &choice, &mut next_node, &mut edges, &mut leaves);
    edges.push((ta, tb));
    let d = RankDecomposition::new(next_node, edges, leaves);
    debug_assert!(d.validate(g).is_ok());
    let value = best.0 as usize;
    debug_assert_eq!(d.width(g), value);
    Ok(WidthReport {
        value,
        exact: true,
        decomposition: d,
    })
}

// ---- heuristics ----

/// Caterpillar decomposition along a vertex order: tree-edge splits are the
/// prefixes of the order.
fn caterpillar(order: &[usize]) -> RankDecomposition {
    let n = order.len();
    if n == 1 {
        return RankDecomposition::new(1, vec![], vec![(0, order[0])]);
    }
    if n == 2 {
        return RankDecomposition::new(2, vec![(0, 1)], vec![(0, order[0]), (1, order[1])]);
    }
    // leaves 0..n, spine n..2n-2
    let spine = |i: usize| n + i;
    let mut edges = vec![(0, spine(0)), (1, spine(0))];
    for i in 1..n - 2 {
        edges.push((spine(i - 1), spine(i)));
        edges.push((i + 1, spine(i)));
    }
    edges.push((spine(n - 3), n - 1));
    let leaves = order.iter().enumerate().map(|(i, &v)| (i, v)).collect();
    RankDecomposition::new(2 * n - 2, edges, leaves)
}

/// Recursive balanced bisection, growing each half greedily by smallest
/// global cut rank.
fn greedy_bisection(g: &Graph) -> RankDecomposition {
    struct Builder {
        edges: Vec<(usize, usize)>,
        leaves: Vec<(usize, usize)>,
        next: usize,
    }
    impl Builder {
        fn node(&mut self) -> usize {
            self.next += 1;
            self.next - 1
        }
    }
    fn split(g: &Graph, verts: &[usize]) -> (Vec<usize>, Vec<usize>) {
        let n = g.n();
        let target = verts.len() / 2;
        let mut side: Vec<usize> = Vec::with_capacity(target);
        let mut mask = Gf2Vec::zeros(n);
        let mut rest: Vec<usize> = verts.to_vec();
        while side.len() < target {
            let (best_i, _) = rest
                .iter()
                .enumerate()
                .map(|(i, &v)| {
                    let mut m = mask.clone();
                    m.set(v, true);
                    (i, cut_rank_of_set(g, &m))
                })
                .min_by_key(|&(i, r)| (r, rest[i]))
                .expect("rest is nonempty");
            let v = rest.remove(best_i);
            mask.set(v, true);
            side.push(v);
        }
        (side, rest)
    }
    fn rec(g: &Graph, verts: &[usize], b: &mut Builder) -> usize {
        let node = b.node();
        if verts.len() == 1 {
            b.leaves.push((node, verts[0]));
            return node;
        }
        let (s1, s2) = split(g, verts);
        let a = rec(g, &s1, b);
        let c = rec(g, &s2, b);
        b.edges.push((node, a));
        b.edges.push((node, c));
        node
    }

    let n = g.n();
    let verts: Vec<usize> = (0..n).collect();
    if n == 1 {
        return RankDecomposition::new(1, vec![], vec![(0, 0)]);
    }
    let mut b = Builder {
        edges: vec![],
        leaves: vec![],
        next: 0,
    };
    let root = b.node();
    let (s1, s2) = split(g, &verts);
    let a = rec(g, &s1, &mut b);
    let c = rec(g, &s2, &mut b);
    // contract the degree-2 root into a single tree edge
    let mut edges = b.edges;
    edges.push((a, c));
    let _ = root;
    // node 0 (the contracted root) is now isolated; renumber it away
    let remap = |x: usize| x - 1;
    let edges = edges.iter().map(|&(u, v)| (remap(u), remap(v))).collect();
    let leaves = b.leaves.iter().map(|&(u, v)| (remap(u), v)).collect();
    RankDecomposition::new(b.next - 1, edges, leaves)
}

/// Swap leaf assignments pairwise while it improves (width, number of edges
/// at the maximum), up to a sweep cap.
fn leaf_swap_descent(g: &Graph, d: &mut RankDecomposition) {
    fn score(g: &Graph, d: &RankDecomposition) -> (usize, usize) {
        let w = d.edge_widths(g);
        let max = w.iter().copied().max().unwrap_or(0);
        (max, w.iter().filter(|&&x| x == max).count())
    }
    let mut best = score(g, d);
    for _ in 0..200 {
        let mut improved = false;
        'scan: for i in 0..d.leaves.len() {
            for j in i + 1..d.leaves.len() {
                let (ni, vi) = d.leaves[i];
                let (nj, vj) = d.leaves[j];
                d.leaves[i] = (ni, vj);
                d.leaves[j] = (nj, vi);
                let s = score(g, d);
                if s < best {
                    best = s;
                    improved = true;
                    break 'scan;
                }
                d.leaves[i] = (ni, vi);
                d.leaves[j] = (nj, vj);
            }
        }
        if !improved {
            break;
        }
    }
}

/// Upper-bound witness: caterpillar and greedy-bisection candidates, local
/// leaf-swap descent at effort >= 1, seeded random-order restarts at
/// effort >= 2. Deterministic given `effort` and `seed`.
pub fn heuristic_rank_decomposition(g: &Graph, effort: u8, seed: u64) -> WidthReport {
    let n = g.n();
    let natural: Vec<usize> = (0..n).collect();
    let mut candidates = vec![caterpillar(&natural)];
    if n >= 2 {
        candidates.push(greedy_bisection(g));
    }
    if effort >= 2 {
        use rand::seq::SliceRandom;
        let mut rng = crate::random::rng(seed);
        for _ in 0..6 {
            let mut order = natural.clone();
            order.shuffle(&mut rng);
            candidates.push(caterpillar(&order));
        }
    }
    let mut best = candidates
        .into_iter()
        .min_by_key(|d| d.width(g))
        .expect("at least one candidate");
    if effort >= 1 && n >= 3 {
        leaf_swap_descent(g, &mut best);
    }
    debug_assert!(best.validate(g).is_ok());
    WidthReport {
        value: best.width(g),
        exact: false,
        decomposition: best,
    }
}

/// Entanglement width of the graph state: equals the rank width of the
/// graph. Exact when the DP is within its limit, otherwise a heuristic
/// upper bound.
pub fn entanglement_width(g: &Graph, exact_limit: usize, effort: u8, seed: u64) -> WidthReport {
    if g.n() <= exact_limit {
        if let Ok(r) = exact_rank_width(g, exact_limit) {
            return r;
        }
    }
    heuristic_rank_decomposition(g, effort, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{build_lattice, Boundary, TorusSpec};
    use crate::transform::delete_vertex;

    fn cycle(n: usize) -> Graph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::new(n, &edges).unwrap()
    }

    fn matching(n: usize) -> Graph {
        let edges: Vec<_> = (0..n / 2).map(|i| (2 * i, 2 * i + 1)).collect();
        Graph::new(n, &edges).unwrap()
    }

    #[test]
    fn cut_rank_examples() {
        let k7 = Graph::complete(7);
        for a in [vec![0], vec![0, 1, 2], vec![1, 3, 5, 6]] {
            let p = Bipartition::from_side_a(7, &a).unwrap();
            assert_eq!(cut_rank(&k7, &p), 1);
        }
        let c4 = cycle(4);
        let p = Bipartition::from_side_a(4, &[0, 1]).unwrap();
        assert_eq!(cut_rank(&c4, &p), 2);
    }

    #[test]
    fn cut_rank_is_symmetric_in_the_sides() {
        let mut rng = crate::random::rng(5);
        for _ in 0..200 {
            let n = rand::Rng::gen_range(&mut rng, 2..=10);
            let g = crate::random::graph(&mut rng, n, 0.5);
            let p = crate::random::bipartition(&mut rng, n);
            let q = Bipartition::from_mask(p.side_b().clone()).unwrap();
            assert_eq!(cut_rank(&g, &p), cut_rank(&g, &q));
        }
    }

    /// Every unrooted binary tree on n labeled leaves, by leaf insertion
    /// into each edge. Test-only exhaustive oracle.
    fn all_decompositions(n: usize) -> Vec<RankDecomposition> {
        assert!(n >= 2);
        let mut trees = vec![RankDecomposition::new(
            2,
            vec![(0, 1)],
            vec![(0, 0), (1, 1)],
        )];
        for v in 2..n {
            let mut next = Vec::new();
            for t in &trees {
                for (i, &(a, b)) in t.edges.iter().enumerate() {
                    // subdivide edge i with node `mid`, hang leaf for v
                    let mid = t.num_nodes;
                    let leaf = t.num_nodes + 1;
                    let mut edges = t.edges.clone();
                    edges[i] = (a, mid);
                    edges.push((mid, b));
                    edges.push((mid, leaf));
                    let mut leaves = t.leaves.clone();
                    leaves.push((leaf, v));
                    next.push(RankDecomposition::new(t.num_nodes + 2, edges, leaves));
                }
            }
            trees = next;
        }
        trees
    }

    #[test]
    fn exact_matches_exhaustive_tree_enumeration() {
        // (2n-5)!! trees: 15 at n=5, 105 at n=6
        assert_eq!(all_decompositions(5).len(), 15);
        let mut rng = crate::random::rng(9);
        for n in [5usize, 6] {
            for _ in 0..6 {
                let g = crate::random::graph(&mut rng, n, 0.5);
                let brute = all_decompositions(n)
                    .into_iter()
                    .map(|d| d.width(&g))
                    .min()
                    .unwrap();
                let dp = exact_rank_width(&g, DEFAULT_EXACT_LIMIT).unwrap();
                assert_eq!(dp.value, brute, "n={n} graph={g:?}");
                assert_eq!(dp.decomposition.width(&g), dp.value);
            }
        }
    }

    #[test]
    fn exact_known_values() {
        assert_eq!(exact_rank_width(&Graph::complete(5), 16).unwrap().value, 1);
        assert_eq!(exact_rank_width(&cycle(5), 16).unwrap().value, 2);
        assert_eq!(exact_rank_width(&cycle(9), 16).unwrap().value, 2);
        assert_eq!(exact_rank_width(&matching(8), 16).unwrap().value, 1);
        assert_eq!(exact_rank_width(&Graph::empty(6), 16).unwrap().value, 0);
        assert_eq!(exact_rank_width(&Graph::new(1, &[]).unwrap(), 16).unwrap().value, 0);

        let grid = build_lattice(&TorusSpec::square(3, 3, Boundary::Open)).unwrap();
        assert_eq!(exact_rank_width(&grid, 16).unwrap().value, 2);

        // the 3x3 torus also has rank width 2: its witness cuts collapse by
        // parity, so at n = 9 the hard family does NOT beat the single cycle
        let torus = build_lattice(&TorusSpec::square(3, 3, Boundary::Torus)).unwrap();
        assert_eq!(exact_rank_width(&torus, 16).unwrap().value, 2);

        assert!(matches!(
            exact_rank_width(&Graph::empty(17), 16),
            Err(Error::OverLimit { .. })
        ));
    }

    #[test]
    fn rank_width_zero_iff_edgeless() {
        let mut rng = crate::random::rng(21);
        for _ in 0..20 {
            let n = rand::Rng::gen_range(&mut rng, 1..=8);
            let g = crate::random::graph(&mut rng, n, 0.3);
            let w = exact_rank_width(&g, 16).unwrap().value;
            assert_eq!(w == 0, g.edge_count() == 0);
        }
    }

    #[test]
    fn witness_edge_widths_reproduce() {
        let mut rng = crate::random::rng(13);
        for _ in 0..10 {
            let g = crate::random::graph(&mut rng, 8, 0.5);
            let r = exact_rank_width(&g, 16).unwrap();
            let widths = r.decomposition.edge_widths(&g);
            assert_eq!(widths.iter().copied().max().unwrap(), r.value);
        }
    }

    #[test]
    fn heuristic_examples() {
        for n in [4usize, 9, 17, 30] {
            let r = heuristic_rank_decomposition(&Graph::complete(n), 0, 0);
            assert_eq!(r.value, 1, "K_{n}");
        }
        let r = heuristic_rank_decomposition(&cycle(40), 0, 0);
        assert!(r.value <= 2, "C_40 caterpillar gives width 2, got {}", r.value);
        assert!(!r.exact);
        r.decomposition.validate(&cycle(40)).unwrap();
    }

    #[test]
    fn heuristic_never_beats_exact() {
        let mut rng = crate::random::rng(17);
        for _ in 0..15 {
            let n = rand::Rng::gen_range(&mut rng, 4..=12);
            let g = crate::random::graph(&mut rng, n, 0.5);
            let exact = exact_rank_width(&g, 16).unwrap().value;
            for effort in 0..=2 {
                let h = heuristic_rank_decomposition(&g, effort, 42);
                assert!(h.value >= exact, "heuristic {} < exact {exact}", h.value);
            }
        }
    }

    #[test]
    fn complement_moves_rank_width_by_at_most_one() {
        let mut rng = crate::random::rng(19);
        for _ in 0..15 {
            let n = rand::Rng::gen_range(&mut rng, 3..=10);
            let g = crate::random::graph(&mut rng, n, 0.5);
            let a = exact_rank_width(&g, 16).unwrap().value as i64;
            let b = exact_rank_width(&g.complement(), 16).unwrap().value as i64;
            assert!((a - b).abs() <= 1, "rw {a} vs complement {b}");
        }
    }

    #[test]
    fn deletion_never_increases_rank_width() {
        let mut rng = crate::random::rng(23);
        for _ in 0..15 {
            let n = rand::Rng::gen_range(&mut rng, 3..=10);
            let g = crate::random::graph(&mut rng, n, 0.5);
            let w = exact_rank_width(&g, 16).unwrap().value;
            let v = rand::Rng::gen_range(&mut rng, 0..n);
            let h = delete_vertex(&g, v).unwrap();
            if h.n() >= 1 {
                let wh = exact_rank_width(&h, 16).unwrap().value;
                assert!(wh <= w, "deletion raised width {w} -> {wh}");
            }
        }
    }

    #[test]
    fn entanglement_width_examples() {
        assert_eq!(entanglement_width(&Graph::complete(9), 16, 1, 0).value, 1);
        assert_eq!(entanglement_width(&matching(8), 16, 1, 0).value, 1);
        let r = entanglement_width(&cycle(40), 16, 0, 0);
        assert!(!r.exact && r.value <= 2);
    }

    #[test]
    fn decomposition_json_round_trip() {
        let g = cycle(6);
        let r = exact_rank_width(&g, 16).unwrap();
        let text = r.decomposition.to_json(&g);
        let back = RankDecomposition::from_json(&text, &g).unwrap();
        assert_eq!(back.width(&g), r.value);

        // corrupted widths are rejected
        let bad = text.replace("\"widths\": [", "\"widths\": [9, ");
        assert!(RankDecomposition::from_json(&bad, &g).is_err());
    }
}
