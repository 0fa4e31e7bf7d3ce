//! Simple undirected graphs with bit-packed adjacency rows and persistent
//! string labels.
//!
//! The adjacency matrix doubles as a GF(2) matrix: cut matrices and cut ranks
//! are submatrix views of it. Labels are carried in a side table and survive
//! every transformation that keeps the vertex alive, which lets reductions be
//! verified label-for-label instead of up to isomorphism.

use crate::bits::{Gf2Mat, Gf2Vec};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use std::fmt::Write as _;

/// An immutable simple undirected graph.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    rows: Vec<Gf2Vec>,
    labels: Vec<String>,
}

fn default_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

impl Graph {
    /// Build a graph from an edge list. Duplicate edges collapse; self-loops
    /// and out-of-range endpoints are rejected.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Graph> {
        Graph::with_labels(n, edges, default_labels(n))
    }

    pub fn with_labels(n: usize, edges: &[(usize, usize)], labels: Vec<String>) -> Result<Graph> {
        if labels.len() != n {
            return Err(Error::LabelCountMismatch {
                expected: n,
                got: labels.len(),
            });
        }
        let mut seen = HashSet::with_capacity(n);
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        let mut rows = vec![Gf2Vec::zeros(n); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::EdgeOutOfRange { u, v, n });
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            rows[u].set(v, true);
            rows[v].set(u, true);
        }
        let g = Graph { n, rows, labels };
        g.debug_validate();
        Ok(g)
    }

    /// Empty graph on `n` vertices with default labels.
    pub fn empty(n: usize) -> Graph {
        Graph {
            n,
            rows: vec![Gf2Vec::zeros(n); n],
            labels: default_labels(n),
        }
    }

    pub fn complete(n: usize) -> Graph {
        Graph::empty(n).complement()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones()).sum::<usize>() / 2
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rows[v].count_ones()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rows[u].get(v)
    }

    /// Adjacency row of `v` as a bit vector over all vertices.
    pub fn row(&self, v: usize) -> &Gf2Vec {
        &self.rows[v]
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.rows[v].iter_ones()
    }

    /// Edges as sorted `(u, v)` pairs with `u < v`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n {
            for v in self.rows[u].iter_ones() {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn vertex_by_label(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Replace every label through `f`, keeping adjacency. Fails if the new
    /// labels collide.
    pub fn map_labels(&self, f: impl Fn(&str) -> String) -> Result<Graph> {
        let labels: Vec<String> = self.labels.iter().map(|l| f(l)).collect();
        let mut seen = HashSet::with_capacity(labels.len());
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        Ok(Graph {
            n: self.n,
            rows: self.rows.clone(),
            labels,
        })
    }

    /// Edge present iff absent in `self`; labels preserved.
    pub fn complement(&self) -> Graph {
        let mut rows = Vec::with_capacity(self.n);
        for (v, r) in self.rows.iter().enumerate() {
            let mut c = r.not();
            c.set(v, false);
            rows.push(c);
        }
        let g = Graph {
            n: self.n,
            rows,
            labels: self.labels.clone(),
        };
        g.debug_validate();
        g
    }

    pub fn is_k_regular(&self, k: usize) -> bool {
        self.rows.iter().all(|r| r.count_ones() == k)
    }

    /// The |A| x |B| adjacency submatrix with rows from side A and columns
    /// from side B, columns compacted in ascending vertex order.
    pub fn cut_matrix(&self, p: &Bipartition) -> Gf2Mat {
        let cols: Vec<usize> = p.side_b().iter_ones().collect();
        let rows = p
            .side_a()
            .iter_ones()
            .map(|u| {
                Gf2Vec::from_indices(
                    cols.len(),
                    cols.iter()
                        .enumerate()
                        .filter(|(_, c)| self.rows[u].get(**c))
                        .map(|(j, _)| j),
                )
            })
            .collect();
        Gf2Mat::new(rows, cols.len())
    }

    /// Label-wise equality: same label set and the same edges under the label
    /// bijection, regardless of vertex numbering.
    pub fn same_by_labels(&self, other: &Graph) -> bool {
        if self.n != other.n {
            return false;
        }
        let mut map = Vec::with_capacity(self.n);
        for l in &self.labels {
            match other.vertex_by_label(l) {
                Some(v) => map.push(v),
                None => return false,
            }
        }
        for u in 0..self.n {
            for v in u + 1..self.n {
                if self.has_edge(u, v) != other.has_edge(map[u], map[v]) {
                    return false;
                }
            }
        }
        true
    }

    pub(crate) fn debug_validate(&self) {
        #[cfg(debug_assertions)]
        {
            for u in 0..self.n {
                debug_assert!(!self.rows[u].get(u), "nonzero diagonal at {u}");
                for v in self.rows[u].iter_ones() {
                    debug_assert!(self.rows[v].get(u), "asymmetric edge ({u}, {v})");
                }
            }
        }
    }

    // ---- serialization ----

    /// Edge-list text: first line `n m`, then one `u v` line per edge.
    pub fn to_edge_list(&self) -> String {
        let edges = self.edges();
        let mut s = format!("{} {}\n", self.n, edges.len());
        for (u, v) in edges {
            let _ = writeln!(s, "{u} {v}");
        }
        s
    }

    pub fn parse_edge_list(text: &str) -> Result<Graph> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (line_no, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing `n m` header".into(),
        })?;
        let parse_pair = |line: usize, s: &str| -> Result<(usize, usize)> {
            let mut it = s.split_whitespace();
            let a = it.next().and_then(|t| t.parse().ok());
            let b = it.next().and_then(|t| t.parse().ok());
            match (a, b, it.next()) {
                (Some(a), Some(b), None) => Ok((a, b)),
                _ => Err(Error::Parse {
                    line,
                    msg: format!("expected two integers, got {s:?}"),
                }),
            }
        };
        let (n, m) = parse_pair(line_no, header)?;
        let mut edges = Vec::with_capacity(m);
        for (line_no, l) in lines {
            edges.push(parse_pair(line_no, l).and_then(|(u, v)| {
                if u >= n || v >= n {
                    Err(Error::Parse {
                        line: line_no,
                        msg: format!("endpoint out of range in ({u}, {v})"),
                    })
                } else if u == v {
                    Err(Error::Parse {
                        line: line_no,
                        msg: format!("self-loop at {u}"),
                    })
                } else {
                    Ok((u, v))
                }
            })?);
        }
        if edges.len() != m {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("header announced {m} edges, found {}", edges.len()),
            });
        }
        Graph::new(n, &edges)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&GraphJson::from(self)).expect("graph serializes")
    }

    pub fn from_json(text: &str) -> Result<Graph> {
        let j: GraphJson = serde_json::from_str(text)?;
        j.into_graph()
    }

    /// DOT export, for visualization only.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph G {\n");
        for v in 0..self.n {
            let _ = writeln!(s, "  v{} [label=\"{}\"];", v, self.labels[v]);
        }
        for (u, v) in self.edges() {
            let _ = writeln!(s, "  v{u} -- v{v};");
        }
        s.push_str("}\n");
        s
    }
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges())
    }
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    n: usize,
    edges: Vec<(usize, usize)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

impl From<&Graph> for GraphJson {
    fn from(g: &Graph) -> Self {
        GraphJson {
            n: g.n,
            edges: g.edges(),
            labels: Some(g.labels.clone()),
        }
    }
}

impl GraphJson {
    fn into_graph(self) -> Result<Graph> {
        match self.labels {
            Some(labels) => Graph::with_labels(self.n, &self.edges, labels),
            None => Graph::new(self.n, &self.edges),
        }
    }
}

impl Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GraphJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Graph, D::Error> {
        GraphJson::deserialize(d)?
            .into_graph()
            .map_err(serde::de::Error::custom)
    }
}

/// A two-sided vertex split; both sides nonempty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bipartition {
    side_a: Gf2Vec,
    side_b: Gf2Vec,
}

impl Bipartition {
    /// Build from the vertices of side A; side B is the complement.
    pub fn from_side_a(n: usize, side_a: &[usize]) -> Result<Bipartition> {
        for &v in side_a {
            if v >= n {
                return Err(Error::NoSuchVertex(v));
            }
        }
        let a = Gf2Vec::from_indices(n, side_a.iter().copied());
        Self::from_mask(a)
    }

    pub fn from_mask(side_a: Gf2Vec) -> Result<Bipartition> {
        let side_b = side_a.not();
        if side_a.is_zero() || side_b.is_zero() {
            return Err(Error::EmptySide);
        }
        Ok(Bipartition { side_a, side_b })
    }

    pub fn side_a(&self) -> &Gf2Vec {
        &self.side_a
    }

    pub fn side_b(&self) -> &Gf2Vec {
        &self.side_b
    }

    pub fn n(&self) -> usize {
        self.side_a.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn cycle(n: usize) -> Graph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::new(n, &edges).unwrap()
    }

    #[test]
    fn make_graph_examples() {
        let c4 = cycle(4);
        assert_eq!(c4.edge_count(), 4);

        let single = Graph::new(1, &[]).unwrap();
        assert_eq!(single.n(), 1);
        assert_eq!(single.edge_count(), 0);

        // duplicate edges collapse
        let g = Graph::new(3, &[(0, 1), (0, 1)]).unwrap();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn make_graph_rejections() {
        assert!(matches!(
            Graph::new(3, &[(0, 0)]),
            Err(Error::SelfLoop(0))
        ));
        assert!(matches!(
            Graph::new(3, &[(0, 3)]),
            Err(Error::EdgeOutOfRange { u: 0, v: 3, n: 3 })
        ));
    }

    #[test]
    fn complement_examples() {
        let c4 = cycle(4);
        let m = c4.complement();
        assert_eq!(m.edges(), vec![(0, 2), (1, 3)]);

        let k5 = Graph::complete(5);
        assert_eq!(k5.complement().edge_count(), 0);
        assert!(k5.is_k_regular(4));
    }

    #[test]
    fn regularity_examples() {
        assert!(cycle(4).is_k_regular(2));
        assert!(Graph::complete(5).is_k_regular(4));
        let p3 = Graph::new(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(!p3.is_k_regular(2));
    }

    #[test]
    fn cut_matrix_examples() {
        let c4 = cycle(4);
        let p = Bipartition::from_side_a(4, &[0, 1]).unwrap();
        let m = c4.cut_matrix(&p);
        // columns are vertices {2, 3}; row 0 hits 3, row 1 hits 2
        assert_eq!(m.nrows(), 2);
        assert!(!m.rows[0].get(0) && m.rows[0].get(1));
        assert!(m.rows[1].get(0) && !m.rows[1].get(1));
        assert_eq!(m.rank(), 2);

        let k6 = Graph::complete(6);
        let p = Bipartition::from_side_a(6, &[0, 1, 2]).unwrap();
        assert_eq!(k6.cut_matrix(&p).rank(), 1);

        let e = Graph::empty(5);
        let p = Bipartition::from_side_a(5, &[0, 4]).unwrap();
        assert_eq!(e.cut_matrix(&p).rank(), 0);

        assert!(Bipartition::from_side_a(4, &[]).is_err());
        assert!(Bipartition::from_side_a(4, &[0, 1, 2, 3]).is_err());
    }

    #[test]
    fn cut_matrix_complement_is_rank_one_perturbation() {
        let mut rng = crate::random::rng(11);
        for _ in 0..50 {
            let g = crate::random::graph(&mut rng, 8, 0.4);
            let p = crate::random::bipartition(&mut rng, 8);
            let r = g.cut_matrix(&p).rank() as i64;
            let rc = g.complement().cut_matrix(&p).rank() as i64;
            assert!((r - rc).abs() <= 1, "ranks {r} vs {rc}");
        }
    }

    #[test]
    fn edge_list_round_trip() {
        let g = Graph::parse_edge_list("2 1\n0 1\n").unwrap();
        assert_eq!(g.n(), 2);
        assert_eq!(g.edges(), vec![(0, 1)]);

        let k3 = Graph::complete(3);
        assert!(k3.to_edge_list().starts_with("3 3\n"));
        assert_eq!(Graph::parse_edge_list(&k3.to_edge_list()).unwrap(), k3);
    }

    #[test]
    fn edge_list_errors_carry_line_numbers() {
        let err = Graph::parse_edge_list("2 1\n0 x\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        let err = Graph::parse_edge_list("2 1\n0 5\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
    }

    #[test]
    fn json_round_trip_keeps_labels() {
        let g = Graph::with_labels(
            3,
            &[(0, 1), (1, 2)],
            vec!["a".into(), "b".into(), "c".into()],
        )
        .unwrap();
        let back = Graph::from_json(&g.to_json()).unwrap();
        assert_eq!(back, g);
        assert_eq!(back.label(2), "c");
    }

    #[test]
    fn label_based_equality_ignores_ordering() {
        let g1 = Graph::with_labels(3, &[(0, 1)], vec!["x".into(), "y".into(), "z".into()])
            .unwrap();
        let g2 = Graph::with_labels(3, &[(2, 1)], vec!["z".into(), "y".into(), "x".into()])
            .unwrap();
        assert!(g1.same_by_labels(&g2));
        assert!(!g1.same_by_labels(&Graph::new(3, &[(0, 1)]).unwrap()));
    }

    #[test]
    fn duplicate_labels_rejected() {
        assert!(matches!(
            Graph::with_labels(2, &[], vec!["a".into(), "a".into()]),
            Err(Error::DuplicateLabel(_))
        ));
    }
}
