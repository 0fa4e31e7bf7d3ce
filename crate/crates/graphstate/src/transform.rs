//! The graph-rewriting calculus: local complementation, vertex deletion,
//! replayable pipelines, and the named reductions (duality, torus cut-open,
//! hard-family reduction) with machine-checked endpoints.
//!
//! Every reduction returns a [`ReductionCertificate`] that records the
//! initial graph, the ordered rewrite steps, and the final graph; replaying
//! the steps reproduces the final graph bit for bit. Endpoints are verified
//! by label-wise comparison against a freshly built expected lattice, never
//! by isomorphism search.

use crate::bits::Gf2Vec;
use crate::constructions::{build_lattice, Boundary, LatticeKind, TorusSpec};
use crate::error::{Error, Result};
use crate::graph::Graph;
use serde::{Deserialize, Serialize};

/// Complement the induced subgraph on the neighborhood of `v`.
pub fn local_complement(g: &Graph, v: usize) -> Result<Graph> {
    if v >= g.n() {
        return Err(Error::NoSuchVertex(v));
    }
    let nv: Gf2Vec = g.row(v).clone();
    let mut edges = g.edges();
    edges.retain(|&(a, b)| !(nv.get(a) && nv.get(b)));
    let neighbors: Vec<usize> = nv.iter_ones().collect();
    for (i, &a) in neighbors.iter().enumerate() {
        for &b in &neighbors[i + 1..] {
            if !g.has_edge(a, b) {
                edges.push((a, b));
            }
        }
    }
    Graph::with_labels(g.n(), &edges, g.labels().to_vec())
}

/// Remove `v` and its incident edges; surviving labels are untouched and ids
/// are compacted.
pub fn delete_vertex(g: &Graph, v: usize) -> Result<Graph> {
    if v >= g.n() {
        return Err(Error::NoSuchVertex(v));
    }
    let remap = |u: usize| if u < v { u } else { u - 1 };
    let edges: Vec<(usize, usize)> = g
        .edges()
        .into_iter()
        .filter(|&(a, b)| a != v && b != v)
        .map(|(a, b)| (remap(a), remap(b)))
        .collect();
    let labels: Vec<String> = g
        .labels()
        .iter()
        .enumerate()
        .filter(|(u, _)| *u != v)
        .map(|(_, l)| l.clone())
        .collect();
    Graph::with_labels(g.n() - 1, &edges, labels)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepKind {
    LocalComplement,
    DeleteVertex,
}

/// One rewrite, targeting a vertex by its persistent label.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RewriteStep {
    pub kind: StepKind,
    pub target: String,
}

impl RewriteStep {
    pub fn lc(target: impl Into<String>) -> RewriteStep {
        RewriteStep {
            kind: StepKind::LocalComplement,
            target: target.into(),
        }
    }

    pub fn delete(target: impl Into<String>) -> RewriteStep {
        RewriteStep {
            kind: StepKind::DeleteVertex,
            target: target.into(),
        }
    }

    pub fn apply(&self, g: &Graph) -> Result<Graph> {
        let v = g
            .vertex_by_label(&self.target)
            .ok_or_else(|| Error::NoSuchLabel(self.target.clone()))?;
        match self.kind {
            StepKind::LocalComplement => local_complement(g, v),
            StepKind::DeleteVertex => delete_vertex(g, v),
        }
    }
}

/// A replayable record of a reduction: initial graph, steps, final graph.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReductionCertificate {
    pub initial: Graph,
    pub steps: Vec<RewriteStep>,
    #[serde(rename = "final")]
    pub final_graph: Graph,
}

impl ReductionCertificate {
    /// Re-run the steps from the initial graph.
    pub fn replay(&self) -> Result<Graph> {
        let mut g = self.initial.clone();
        for (index, step) in self.steps.iter().enumerate() {
            g = step.apply(&g).map_err(|e| Error::PipelineStep {
                index,
                source: Box::new(e),
            })?;
        }
        Ok(g)
    }

    /// True when replaying reproduces the recorded final graph exactly.
    pub fn verify(&self) -> Result<bool> {
        Ok(self.replay()? == self.final_graph)
    }
}

/// Run a step sequence and certify the result. The first invalid step is
/// reported with its index.
pub fn apply_pipeline(g: &Graph, steps: &[RewriteStep]) -> Result<ReductionCertificate> {
    let mut cur = g.clone();
    for (index, step) in steps.iter().enumerate() {
        cur = step.apply(&cur).map_err(|e| Error::PipelineStep {
            index,
            source: Box::new(e),
        })?;
    }
    Ok(ReductionCertificate {
        initial: g.clone(),
        steps: steps.to_vec(),
        final_graph: cur,
    })
}

fn parse_coord(s: &str) -> Option<(usize, usize)> {
    let (r, c) = s.split_once(',')?;
    Some((r.parse().ok()?, c.parse().ok()?))
}

/// Split an optional `A:`/`B:` torus prefix off a coordinate label.
fn split_label(s: &str) -> (Option<&str>, &str) {
    match s.split_once(':') {
        Some((p, rest)) => (Some(p), rest),
        None => (None, s),
    }
}

/// Lattice dimensions implied by a set of coordinate labels, requiring the
/// full `rows x cols` rectangle to be present.
fn coord_dims<'a>(labels: impl Iterator<Item = &'a str>) -> Result<(usize, usize)> {
    let mut coords = Vec::new();
    for l in labels {
        let (_, c) = split_label(l);
        coords.push(parse_coord(c).ok_or_else(|| {
            Error::Infeasible(format!("label {l:?} carries no `row,col` coordinate"))
        })?);
    }
    let rows = coords.iter().map(|c| c.0).max().unwrap_or(0) + 1;
    let cols = coords.iter().map(|c| c.1).max().unwrap_or(0) + 1;
    if coords.len() != rows * cols {
        return Err(Error::Infeasible(format!(
            "labels do not cover a full {rows} x {cols} grid"
        )));
    }
    Ok((rows, cols))
}

/// Expected open lattice after removing row 0 and column 0: coordinates
/// shifted up by one, with an optional label prefix retained.
fn shifted_open_lattice(
    kind: LatticeKind,
    rows: usize,
    cols: usize,
    prefix: Option<&str>,
) -> Result<Graph> {
    let base = build_lattice(&TorusSpec {
        rows: rows - 1,
        cols: cols - 1,
        kind,
        boundary: Boundary::Open,
    })?;
    base.map_labels(|l| {
        let (r, c) = parse_coord(l).expect("lattice labels are coordinates");
        match prefix {
            Some(p) => format!("{p}:{},{}", r + 1, c + 1),
            None => format!("{},{}", r + 1, c + 1),
        }
    })
}

fn check_endpoint(cert: ReductionCertificate, expected: &Graph, what: &str) -> Result<ReductionCertificate> {
    if cert.final_graph.same_by_labels(expected) {
        Ok(cert)
    } else {
        Err(Error::ReductionMismatch(format!(
            "{what}: got {} vertices / {} edges, expected {} / {}",
            cert.final_graph.n(),
            cert.final_graph.edge_count(),
            expected.n(),
            expected.edge_count()
        )))
    }
}

/// Row-0 and column-0 labels in ascending `(row, col)` order, optionally
/// skipping some and carrying a prefix.
fn seam_labels(rows: usize, cols: usize, prefix: Option<&str>, skip: &[(usize, usize)]) -> Vec<String> {
    let mut coords: Vec<(usize, usize)> = (0..cols)
        .map(|c| (0, c))
        .chain((1..rows).map(|r| (r, 0)))
        .collect();
    coords.retain(|rc| !skip.contains(rc));
    coords.sort_unstable();
    coords
        .into_iter()
        .map(|(r, c)| match prefix {
            Some(p) => format!("{p}:{r},{c}"),
            None => format!("{r},{c}"),
        })
        .collect()
}

/// The duality walkthrough: starting from the complement of the open
/// `m x m` grid, one local complementation at the corner plus deletions of
/// the corner, its two grid neighbors, and the rest of the corner's row and
/// column leave exactly the open `(m-1) x (m-1)` grid, label for label.
pub fn duality_reduction(m: usize) -> Result<ReductionCertificate> {
    if m < 3 {
        return Err(Error::Infeasible("duality reduction needs m >= 3".into()));
    }
    let grid = build_lattice(&TorusSpec::square(m, m, Boundary::Open))?;
    let initial = grid.complement();
    let mut steps = vec![
        RewriteStep::lc("0,0"),
        RewriteStep::delete("0,0"),
        RewriteStep::delete("0,1"),
        RewriteStep::delete("1,0"),
    ];
    steps.extend(
        seam_labels(m, m, None, &[(0, 0), (0, 1), (1, 0)])
            .into_iter()
            .map(RewriteStep::delete),
    );
    let cert = apply_pipeline(&initial, &steps)?;
    let expected = shifted_open_lattice(LatticeKind::Square, m, m, None)?;
    check_endpoint(cert, &expected, "duality reduction")
}

/// Cut a torus open by deleting one full row and one full column of
/// vertices, certifying that the open lattice of reduced dimensions remains.
pub fn cut_open_torus(g: &Graph) -> Result<ReductionCertificate> {
    let (rows, cols) = coord_dims(g.labels().iter().map(|s| s.as_str()))?;
    let prefix = split_label(g.label(0)).0.map(str::to_owned);
    let kind = if g.is_k_regular(4) {
        LatticeKind::Square
    } else if g.is_k_regular(3) {
        LatticeKind::Hexagonal
    } else {
        return Err(Error::Infeasible(
            "cut-open expects a 4-regular square torus or 3-regular hexagonal torus".into(),
        ));
    };
    let torus = build_lattice(&TorusSpec {
        rows,
        cols,
        kind,
        boundary: Boundary::Torus,
    })?;
    let relabeled = match &prefix {
        Some(p) => torus.map_labels(|l| format!("{p}:{l}"))?,
        None => torus,
    };
    if !g.same_by_labels(&relabeled) {
        return Err(Error::Infeasible(format!(
            "graph does not match a {rows} x {cols} {} torus",
            match kind {
                LatticeKind::Square => "square",
                LatticeKind::Hexagonal => "hexagonal",
            }
        )));
    }
    let steps: Vec<RewriteStep> = seam_labels(rows, cols, prefix.as_deref(), &[])
        .into_iter()
        .map(RewriteStep::delete)
        .collect();
    let cert = apply_pipeline(g, &steps)?;
    let expected = shifted_open_lattice(kind, rows, cols, prefix.as_deref())?;
    check_endpoint(cert, &expected, "cut-open")
}

/// Complement-of-torus reduction: one local complementation at the `0,0`
/// corner turns the surviving induced subgraph back into lattice edges, and
/// deleting the whole row 0 and column 0 (which contain the corner and all
/// of its torus neighbors) leaves the open lattice.
fn complement_torus_steps(rows: usize, cols: usize, prefix: Option<&str>) -> Vec<RewriteStep> {
    let corner = match prefix {
        Some(p) => format!("{p}:0,0"),
        None => "0,0".to_string(),
    };
    let mut steps = vec![RewriteStep::lc(corner)];
    steps.extend(
        seam_labels(rows, cols, prefix, &[])
            .into_iter()
            .map(RewriteStep::delete),
    );
    steps
}

/// Reduce a hard-family graph to an open lattice, dispatching on its labels:
/// double-torus members drop torus B and cut open; complement members drop
/// torus B and run the duality-style corner steps.
pub fn hard_family_reduction(g: &Graph) -> Result<ReductionCertificate> {
    let has_ab = g.labels().iter().any(|l| l.starts_with("A:"));
    if has_ab {
        let a_count = g.labels().iter().filter(|l| l.starts_with("A:")).count();
        let b_labels: Vec<String> = {
            let mut b: Vec<String> = g
                .labels()
                .iter()
                .filter(|l| l.starts_with("B:"))
                .cloned()
                .collect();
            b.sort();
            b
        };
        if a_count + b_labels.len() != g.n() || a_count != b_labels.len() {
            return Err(Error::Infeasible(
                "double-torus reduction needs equal A:-/B:-labeled halves".into(),
            ));
        }
        let (rows, cols) = coord_dims(
            g.labels()
                .iter()
                .filter(|l| l.starts_with("A:"))
                .map(|s| s.as_str()),
        )?;
        let k = g.degree(0);
        let mut steps: Vec<RewriteStep> = b_labels.into_iter().map(RewriteStep::delete).collect();
        if 2 * k <= g.n() {
            // direct double torus: what remains is torus A; cut it open
            steps.extend(
                seam_labels(rows, cols, Some("A"), &[])
                    .into_iter()
                    .map(RewriteStep::delete),
            );
        } else {
            // complement family: what remains is the complement of torus A
            steps.extend(complement_torus_steps(rows, cols, Some("A")));
        }
        let cert = apply_pipeline(g, &steps)?;
        let expected = shifted_open_lattice(LatticeKind::Square, rows, cols, Some("A"))?;
        return check_endpoint(cert, &expected, "hard-family reduction");
    }

    // single-torus families, direct or complemented
    let (rows, cols) = coord_dims(g.labels().iter().map(|s| s.as_str()))?;
    if g.is_k_regular(4) || g.is_k_regular(3) {
        return cut_open_torus(g);
    }
    let comp = g.complement();
    let kind = if comp.is_k_regular(4) {
        LatticeKind::Square
    } else if comp.is_k_regular(3) {
        LatticeKind::Hexagonal
    } else {
        return Err(Error::Infeasible(
            "labels look like a lattice but the graph is neither a torus nor a \
             torus complement"
                .into(),
        ));
    };
    let cert = apply_pipeline(g, &complement_torus_steps(rows, cols, None))?;
    let expected = shifted_open_lattice(kind, rows, cols, None)?;
    check_endpoint(cert, &expected, "hard-family reduction")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{build_double_torus, build_hard_family};

    fn path3() -> Graph {
        Graph::new(3, &[(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn lc_examples() {
        let tri = local_complement(&path3(), 1).unwrap();
        assert_eq!(tri.edges(), vec![(0, 1), (0, 2), (1, 2)]);

        // degree 0 and degree 1 leave the graph unchanged
        let g = Graph::new(4, &[(0, 1)]).unwrap();
        assert_eq!(local_complement(&g, 0).unwrap(), g);
        assert_eq!(local_complement(&g, 2).unwrap(), g);

        assert!(matches!(
            local_complement(&g, 9),
            Err(Error::NoSuchVertex(9))
        ));
    }

    #[test]
    fn lc_is_an_involution() {
        let mut rng = crate::random::rng(3);
        for _ in 0..100 {
            let n = rand::Rng::gen_range(&mut rng, 2..=9);
            let g = crate::random::graph(&mut rng, n, 0.5);
            let v = rand::Rng::gen_range(&mut rng, 0..n);
            let twice = local_complement(&local_complement(&g, v).unwrap(), v).unwrap();
            assert_eq!(twice, g);
        }
    }

    #[test]
    fn lc_touches_only_the_neighborhood() {
        let mut rng = crate::random::rng(4);
        for _ in 0..50 {
            let n = 8;
            let g = crate::random::graph(&mut rng, n, 0.4);
            let v = rand::Rng::gen_range(&mut rng, 0..n);
            let h = local_complement(&g, v).unwrap();
            for a in 0..n {
                for b in a + 1..n {
                    let inside = g.row(v).get(a) && g.row(v).get(b);
                    if inside {
                        assert_eq!(h.has_edge(a, b), !g.has_edge(a, b));
                    } else {
                        assert_eq!(h.has_edge(a, b), g.has_edge(a, b));
                    }
                }
            }
        }
    }

    #[test]
    fn deletion_examples() {
        let k3 = Graph::complete(3);
        let e = delete_vertex(&k3, 0).unwrap();
        assert_eq!(e.edges(), vec![(0, 1)]);

        let c4 = Graph::new(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let p = delete_vertex(&c4, 3).unwrap();
        assert_eq!(p.edges(), vec![(0, 1), (1, 2)]);

        // labels survive deletion of other vertices
        let g = Graph::with_labels(3, &[(0, 1)], vec!["x".into(), "y".into(), "z".into()])
            .unwrap();
        let h = delete_vertex(&g, 0).unwrap();
        assert_eq!(h.labels(), &["y".to_string(), "z".to_string()]);
    }

    #[test]
    fn deleting_torus_b_restores_torus_a() {
        let g = build_double_torus(3, 5).unwrap();
        let mut cur = g.clone();
        let mut b_labels: Vec<String> = g
            .labels()
            .iter()
            .filter(|l| l.starts_with("B:"))
            .cloned()
            .collect();
        b_labels.sort();
        for l in b_labels {
            let v = cur.vertex_by_label(&l).unwrap();
            cur = delete_vertex(&cur, v).unwrap();
        }
        let torus = build_lattice(&TorusSpec::square(3, 3, Boundary::Torus))
            .unwrap()
            .map_labels(|l| format!("A:{l}"))
            .unwrap();
        assert!(cur.same_by_labels(&torus));
    }

    #[test]
    fn pipeline_examples() {
        let g = path3();
        let empty = apply_pipeline(&g, &[]).unwrap();
        assert_eq!(empty.final_graph, g);
        assert!(empty.verify().unwrap());

        let cert = apply_pipeline(&g, &[RewriteStep::lc("1")]).unwrap();
        assert_eq!(cert.final_graph.edge_count(), 3);
        assert!(cert.verify().unwrap());

        let err = apply_pipeline(
            &g,
            &[RewriteStep::delete("0"), RewriteStep::delete("nope")],
        )
        .unwrap_err();
        assert!(matches!(err, Error::PipelineStep { index: 1, .. }), "{err}");
    }

    #[test]
    fn certificate_json_round_trip() {
        let cert = duality_reduction(3).unwrap();
        let text = serde_json::to_string(&cert).unwrap();
        let back: ReductionCertificate = serde_json::from_str(&text).unwrap();
        assert_eq!(back, cert);
        assert!(back.verify().unwrap());
    }

    #[test]
    fn duality_endpoints() {
        let cert = duality_reduction(3).unwrap();
        assert_eq!(cert.final_graph.n(), 4);
        assert_eq!(cert.final_graph.edge_count(), 4);

        for m in [4, 5, 6] {
            let cert = duality_reduction(m).unwrap();
            let expected = shifted_open_lattice(LatticeKind::Square, m, m, None).unwrap();
            assert!(cert.final_graph.same_by_labels(&expected));
            assert!(cert.verify().unwrap());
        }

        assert!(duality_reduction(2).is_err());
    }

    #[test]
    fn cut_open_examples() {
        let t4 = build_lattice(&TorusSpec::square(4, 4, Boundary::Torus)).unwrap();
        let cert = cut_open_torus(&t4).unwrap();
        let open3 = build_lattice(&TorusSpec::square(3, 3, Boundary::Open)).unwrap();
        assert_eq!(cert.final_graph.n(), open3.n());
        assert_eq!(cert.final_graph.edge_count(), open3.edge_count());

        let t3 = build_lattice(&TorusSpec::square(3, 3, Boundary::Torus)).unwrap();
        let cert = cut_open_torus(&t3).unwrap();
        assert_eq!(cert.final_graph.n(), 4);
        assert_eq!(cert.final_graph.edge_count(), 4);

        let hex = build_lattice(&TorusSpec::hexagonal(4, 4, Boundary::Torus)).unwrap();
        let cert = cut_open_torus(&hex).unwrap();
        assert!((0..cert.final_graph.n()).all(|v| cert.final_graph.degree(v) <= 3));

        // labels without coordinates are rejected
        let plain = Graph::new(4, &[(0, 1)]).unwrap();
        assert!(cut_open_torus(&plain).is_err());
    }

    #[test]
    fn hard_family_reductions_reach_open_lattices() {
        for (n, k) in [(9, 4), (16, 3), (18, 5), (18, 9), (18, 12), (18, 13), (16, 12)] {
            let g = build_hard_family(n, k).unwrap();
            let cert = hard_family_reduction(&g).expect("reduction succeeds");
            assert!(cert.verify().unwrap(), "replay mismatch for ({n}, {k})");
        }
    }

    #[test]
    fn hard_family_reduction_endpoint_shapes() {
        // n=18, k=5: drop torus B (9 vertices), cut 3x3 torus open -> 2x2 grid
        let cert = hard_family_reduction(&build_hard_family(18, 5).unwrap()).unwrap();
        assert_eq!(cert.final_graph.n(), 4);
        assert_eq!(cert.final_graph.edge_count(), 4);

        // complement case lands on the same open grid
        let cert = hard_family_reduction(&build_hard_family(18, 12).unwrap()).unwrap();
        assert_eq!(cert.final_graph.n(), 4);
        assert_eq!(cert.final_graph.edge_count(), 4);
    }
}
