//! Embedded and abstract metric graphs with the shortest-path metric.
//!
//! A graph is a multigraph: parallel edges are allowed (a theta graph is two
//! vertices with three parallel edges), self-loops are not. In embedded mode
//! every edge length equals the Euclidean distance of its endpoint positions;
//! abstract mode decouples lengths from positions so quotient graphs can be
//! metrized without an embedding.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::geometry::{distance_unchecked, Point, PointCloud, Segment};

const EMBED_LENGTH_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub length: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphMode {
    Embedded,
    Abstract,
}

#[derive(Debug, Clone)]
pub struct MetricGraph {
    vertices: Vec<Point>,
    edges: Vec<Edge>,
    mode: GraphMode,
    adjacency: Vec<Vec<(usize, f64)>>,
}

/// How a diameter value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiameterMethod {
    /// Max over all pairs of graph points, edge interiors included.
    ExactInterior,
    /// Vertex-pair max plus the longest edge; an upper envelope of the true
    /// diameter, sound wherever the diameter feeds an upper bound.
    UpperEnvelope,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiameterResult {
    pub value: f64,
    pub method: DiameterMethod,
}

/// Estimate of the restricted (eta, R)-distortion over a discretization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistortionEstimate {
    pub value: f64,
    pub eta: f64,
    pub r_min: f64,
    pub discretization_step: f64,
}

impl MetricGraph {
    /// Embedded graph; edge lengths are computed from vertex positions.
    pub fn embedded(vertices: Vec<Point>, edge_pairs: &[(usize, usize)]) -> Result<Self> {
        let edges = edge_pairs
            .iter()
            .map(|&(u, v)| {
                let length = if u < vertices.len() && v < vertices.len() {
                    distance_unchecked(vertices[u].coords(), vertices[v].coords())
                } else {
                    0.0
                };
                Edge { u, v, length }
            })
            .collect();
        Self::build(vertices, edges, GraphMode::Embedded)
    }

    /// Embedded graph with explicit lengths, each checked against the
    /// Euclidean endpoint distance.
    pub fn embedded_with_lengths(vertices: Vec<Point>, edges: Vec<Edge>) -> Result<Self> {
        Self::build(vertices, edges, GraphMode::Embedded)
    }

    /// Abstract graph: `n` vertices without positions, lengths as given.
    pub fn abstract_graph(n: usize, edges: Vec<Edge>) -> Result<Self> {
        let vertices = vec![Point::new(vec![]).unwrap(); n];
        Self::build(vertices, edges, GraphMode::Abstract)
    }

    fn build(vertices: Vec<Point>, edges: Vec<Edge>, mode: GraphMode) -> Result<Self> {
        if !vertices.is_empty() {
            let dim = vertices[0].dim();
            for v in &vertices {
                if v.dim() != dim {
                    return Err(Error::DimensionMismatch(dim, v.dim()));
                }
            }
        }
        for e in &edges {
            for idx in [e.u, e.v] {
                if idx >= vertices.len() {
                    return Err(Error::InvalidVertex {
                        index: idx,
                        len: vertices.len(),
                    });
                }
            }
            if e.u == e.v {
                return Err(Error::InvalidEdge {
                    u: e.u,
                    v: e.v,
                    reason: "self-loop".into(),
                });
            }
            if !e.length.is_finite() || e.length < 0.0 {
                return Err(Error::InvalidEdge {
                    u: e.u,
                    v: e.v,
                    reason: format!("bad length {}", e.length),
                });
            }
            if mode == GraphMode::Embedded {
                let d = distance_unchecked(vertices[e.u].coords(), vertices[e.v].coords());
                if (e.length - d).abs() > EMBED_LENGTH_TOL {
                    return Err(Error::InvalidEdge {
                        u: e.u,
                        v: e.v,
                        reason: format!("length {} != embedded distance {}", e.length, d),
                    });
                }
            }
        }
        let mut adjacency = vec![Vec::new(); vertices.len()];
        for e in &edges {
            adjacency[e.u].push((e.v, e.length));
            adjacency[e.v].push((e.u, e.length));
        }
        Ok(MetricGraph {
            vertices,
            edges,
            mode,
            adjacency,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn mode(&self) -> GraphMode {
        self.mode
    }

    pub fn dim(&self) -> usize {
        self.vertices.first().map_or(0, |p| p.dim())
    }

    pub fn max_edge_length(&self) -> f64 {
        self.edges.iter().map(|e| e.length).fold(0.0, f64::max)
    }

    pub fn total_length(&self) -> f64 {
        self.edges.iter().map(|e| e.length).sum()
    }

    fn check_vertex(&self, i: usize) -> Result<()> {
        if i >= self.vertices.len() {
            return Err(Error::InvalidVertex {
                index: i,
                len: self.vertices.len(),
            });
        }
        Ok(())
    }

    /// Single-source shortest-path distances over edge lengths (Dijkstra).
    /// Unreachable vertices get `f64::INFINITY`.
    pub fn single_source_distances(&self, source: usize) -> Result<Vec<f64>> {
        self.check_vertex(source)?;
        Ok(dijkstra(&self.adjacency, source))
    }

    pub fn shortest_path_metric(&self, u: usize, v: usize) -> Result<f64> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Ok(0.0);
        }
        Ok(dijkstra(&self.adjacency, u)[v])
    }

    /// Connected components: (count, label per vertex). Labels are the
    /// smallest vertex index in each component.
    pub fn components(&self) -> (usize, Vec<usize>) {
        let mut uf = UnionFind::new(self.vertices.len());
        for e in &self.edges {
            uf.union(e.u, e.v);
        }
        let mut labels = vec![0usize; self.vertices.len()];
        let mut count = 0;
        let mut seen = std::collections::HashMap::new();
        for i in 0..self.vertices.len() {
            let root = uf.find(i);
            let label = *seen.entry(root).or_insert_with(|| {
                count += 1;
                i
            });
            labels[i] = label;
        }
        (count, labels)
    }

    pub fn is_connected(&self) -> bool {
        self.vertices.is_empty() || self.components().0 == 1
    }

    fn require_connected(&self) -> Result<()> {
        let (n, _) = self.components();
        if n > 1 {
            return Err(Error::Disconnected { components: n });
        }
        Ok(())
    }

    /// Intrinsic diameter with edge interiors handled exactly.
    ///
    /// For two interior points x on (u,v) and y on (p,q) the distance is the
    /// min of four affine routes through the endpoints (plus the direct route
    /// on a shared edge); the sup of that concave piecewise-linear function
    /// over the parameter box is found in closed form over t and by ternary
    /// search over s.
    pub fn diameter(&self) -> Result<DiameterResult> {
        self.require_connected()?;
        if self.vertices.is_empty() {
            return Err(Error::EmptyInput("graph"));
        }
        let dist = self.all_pairs();
        let mut best: f64 = 0.0;
        for row in &dist {
            for &d in row {
                best = best.max(d);
            }
        }
        // Same-edge sup: (l + d(u, v)) / 2; equals l for a bridge.
        for e in &self.edges {
            best = best.max((e.length + dist[e.u][e.v]) / 2.0);
        }
        for (i, e1) in self.edges.iter().enumerate() {
            for e2 in self.edges.iter().skip(i + 1) {
                best = best.max(edge_pair_sup(e1, e2, &dist));
            }
        }
        Ok(DiameterResult {
            value: best,
            method: DiameterMethod::ExactInterior,
        })
    }

    /// Cheap certified over-estimate: vertex diameter plus the longest edge.
    pub fn diameter_upper_envelope(&self) -> Result<DiameterResult> {
        self.require_connected()?;
        if self.vertices.is_empty() {
            return Err(Error::EmptyInput("graph"));
        }
        let mut vertex_diam: f64 = 0.0;
        for u in 0..self.vertices.len() {
            let d = dijkstra(&self.adjacency, u);
            for &x in &d {
                vertex_diam = vertex_diam.max(x);
            }
        }
        Ok(DiameterResult {
            value: vertex_diam + self.max_edge_length(),
            method: DiameterMethod::UpperEnvelope,
        })
    }

    fn all_pairs(&self) -> Vec<Vec<f64>> {
        (0..self.vertices.len())
            .map(|u| dijkstra(&self.adjacency, u))
            .collect()
    }

    /// Number of edges with length <= ell.
    pub fn edge_length_census(&self, ell: f64) -> usize {
        self.edges.iter().filter(|e| e.length <= ell).count()
    }

    /// First Betti number: |E| - |V| + #components.
    pub fn betti_1(&self) -> usize {
        let (c, _) = self.components();
        self.edges.len() + c - self.vertices.len()
    }

    /// Every geodesic decomposes into legs of length <= delta; for a metric
    /// graph this reduces to max edge length <= delta.
    pub fn is_delta_dense(&self, delta: f64) -> bool {
        self.edges.iter().all(|e| e.length <= delta)
    }

    /// Arc-length discretization of an embedded graph. Returns the sample
    /// positions together with, for each sample, its intrinsic distances to
    /// every other sample (computed on the subdivided graph, which carries
    /// the same metric as the original).
    pub fn discretize(&self, step: f64) -> Result<Discretization> {
        if step <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "step",
                reason: "must be positive".into(),
            });
        }
        if self.mode != GraphMode::Embedded {
            return Err(Error::InvalidParameter {
                name: "graph",
                reason: "discretization needs an embedded graph".into(),
            });
        }
        let mut points: Vec<Point> = self.vertices.clone();
        let mut sub_edges: Vec<Edge> = Vec::new();
        for e in &self.edges {
            let seg = Segment::new(self.vertices[e.u].clone(), self.vertices[e.v].clone())?;
            let k = ((e.length / step).ceil() as usize).max(1);
            let mut prev = e.u;
            for j in 1..k {
                let t = j as f64 / k as f64;
                points.push(seg.at(t));
                let idx = points.len() - 1;
                sub_edges.push(Edge {
                    u: prev,
                    v: idx,
                    length: e.length / k as f64,
                });
                prev = idx;
            }
            sub_edges.push(Edge {
                u: prev,
                v: e.v,
                length: e.length / k as f64,
            });
        }
        let subdivided = MetricGraph::abstract_graph(points.len(), sub_edges)?;
        Ok(Discretization {
            cloud: PointCloud::new(points)?,
            subdivided,
            step,
        })
    }

    /// Restricted (eta, R)-distortion over an arc-length discretization:
    /// sup over sample pairs at intrinsic distance >= r_min of
    /// intrinsic distance / Rips shortest-path distance.
    pub fn restricted_distortion(
        &self,
        eta: f64,
        r_min: f64,
        step: f64,
    ) -> Result<DistortionEstimate> {
        for (name, v) in [("eta", eta), ("r_min", r_min), ("step", step)] {
            if v <= 0.0 {
                return Err(Error::InvalidParameter {
                    name,
                    reason: "must be positive".into(),
                });
            }
        }
        if step > eta / 4.0 {
            return Err(Error::InvalidParameter {
                name: "step",
                reason: format!("must be <= eta/4 = {}", eta / 4.0),
            });
        }
        self.require_connected()?;
        let disc = self.discretize(step)?;
        let rips = crate::rips::build_rips(&disc.cloud, eta)?;
        if !rips.graph().is_connected() {
            return Err(Error::RipsDisconnected { eta });
        }
        let n = disc.cloud.len();
        let mut value: f64 = 0.0;
        for i in 0..n {
            let intrinsic = disc.subdivided.single_source_distances(i)?;
            let chorded = rips.graph().single_source_distances(i)?;
            for j in (i + 1)..n {
                if intrinsic[j] >= r_min && chorded[j] > 0.0 {
                    value = value.max(intrinsic[j] / chorded[j]);
                }
            }
        }
        Ok(DistortionEstimate {
            value,
            eta,
            r_min,
            discretization_step: step,
        })
    }

    /// Line-oriented text serialization: `dim <d>`, `v <coords...>`,
    /// `e <i> <j> <length>`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("dim {}\n", self.dim()));
        for v in &self.vertices {
            out.push('v');
            for c in v.coords() {
                out.push_str(&format!(" {}", c));
            }
            out.push('\n');
        }
        for e in &self.edges {
            out.push_str(&format!("e {} {} {}\n", e.u, e.v, e.length));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut dim: Option<usize> = None;
        let mut vertices: Vec<Point> = Vec::new();
        let mut edges: Vec<Edge> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split_whitespace();
            let tag = parts.next().unwrap();
            let parse_err = |message: String| Error::Parse {
                line: lineno + 1,
                message,
            };
            match tag {
                "dim" => {
                    let d = parts
                        .next()
                        .ok_or_else(|| parse_err("missing dimension".into()))?
                        .parse::<usize>()
                        .map_err(|e| parse_err(e.to_string()))?;
                    dim = Some(d);
                }
                "v" => {
                    let coords: std::result::Result<Vec<f64>, _> =
                        parts.map(|s| s.parse::<f64>()).collect();
                    let coords = coords.map_err(|e| parse_err(e.to_string()))?;
                    let d = dim.ok_or_else(|| parse_err("v before dim".into()))?;
                    if coords.len() != d {
                        return Err(parse_err(format!(
                            "expected {} coordinates, got {}",
                            d,
                            coords.len()
                        )));
                    }
                    vertices.push(Point::new(coords)?);
                }
                "e" => {
                    let u = parts
                        .next()
                        .ok_or_else(|| parse_err("missing edge endpoint".into()))?
                        .parse::<usize>()
                        .map_err(|e| parse_err(e.to_string()))?;
                    let v = parts
                        .next()
                        .ok_or_else(|| parse_err("missing edge endpoint".into()))?
                        .parse::<usize>()
                        .map_err(|e| parse_err(e.to_string()))?;
                    let length = match parts.next() {
                        Some(s) => s.parse::<f64>().map_err(|e| parse_err(e.to_string()))?,
                        None => {
                            if u < vertices.len() && v < vertices.len() {
                                distance_unchecked(
                                    vertices[u].coords(),
                                    vertices[v].coords(),
                                )
                            } else {
                                return Err(parse_err("edge before vertices".into()));
                            }
                        }
                    };
                    edges.push(Edge { u, v, length });
                }
                other => return Err(parse_err(format!("unknown record `{}`", other))),
            }
        }
        let dim = dim.ok_or(Error::Parse {
            line: 0,
            message: "missing dim header".into(),
        })?;
        if dim == 0 {
            let n = vertices.len();
            return MetricGraph::abstract_graph(n, edges);
        }
        // Embedded only when every length matches the embedding.
        let embedded_ok = edges.iter().all(|e| {
            e.u < vertices.len()
                && e.v < vertices.len()
                && (e.length
                    - distance_unchecked(vertices[e.u].coords(), vertices[e.v].coords()))
                .abs()
                    <= EMBED_LENGTH_TOL
        });
        if embedded_ok {
            MetricGraph::embedded_with_lengths(vertices, edges)
        } else {
            Self::build(vertices, edges, GraphMode::Abstract)
        }
    }
}

/// Result of `MetricGraph::discretize`.
pub struct Discretization {
    pub cloud: PointCloud,
    /// Subdivided graph over the sample points; same metric as the original.
    pub subdivided: MetricGraph,
    pub step: f64,
}

/// Hausdorff distance between a cloud and an embedded graph, with both
/// directed parts and the discretization step used on the graph side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GraphHausdorff {
    pub value: f64,
    pub cloud_to_graph: f64,
    pub graph_to_cloud: f64,
    pub step: f64,
}

/// d_H(S, G) with the graph side discretized at a step no coarser than 1% of
/// each edge length (and eta/10 when a scale is supplied by the caller).
pub fn hausdorff_cloud_to_graph(
    cloud: &PointCloud,
    graph: &MetricGraph,
    step_hint: Option<f64>,
) -> Result<GraphHausdorff> {
    if graph.vertex_count() == 0 {
        return Err(Error::EmptyInput("graph"));
    }
    if cloud.dim() != graph.dim() {
        return Err(Error::DimensionMismatch(cloud.dim(), graph.dim()));
    }
    let segments: Vec<Segment> = graph
        .edges()
        .iter()
        .map(|e| Segment::new(graph.vertices()[e.u].clone(), graph.vertices()[e.v].clone()))
        .collect::<Result<_>>()?;
    let mut cloud_to_graph: f64 = 0.0;
    for p in cloud.iter() {
        let mut best = f64::INFINITY;
        for s in &segments {
            best = best.min(crate::geometry::point_segment_distance(p, s)?);
        }
        for v in graph.vertices() {
            best = best.min(distance_unchecked(p.coords(), v.coords()));
        }
        cloud_to_graph = cloud_to_graph.max(best);
    }
    let max_len = graph.max_edge_length();
    let mut step = if max_len > 0.0 { max_len * 0.01 } else { 1.0 };
    if let Some(h) = step_hint {
        step = step.min(h / 10.0);
    }
    // Per-edge step is additionally capped at 1% of that edge's length.
    let mut graph_to_cloud: f64 = 0.0;
    let mut probe = |p: &Point| {
        let mut best = f64::INFINITY;
        for q in cloud.iter() {
            best = best.min(distance_unchecked(p.coords(), q.coords()));
        }
        graph_to_cloud = graph_to_cloud.max(best);
    };
    for v in graph.vertices() {
        probe(v);
    }
    for (e, s) in graph.edges().iter().zip(&segments) {
        if e.length == 0.0 {
            continue;
        }
        let eff_step = step.min(e.length * 0.01);
        let k = (e.length / eff_step).ceil() as usize;
        for j in 1..k {
            probe(&s.at(j as f64 / k as f64));
        }
    }
    Ok(GraphHausdorff {
        value: cloud_to_graph.max(graph_to_cloud),
        cloud_to_graph,
        graph_to_cloud,
        step,
    })
}

/// Sup over the parameter box of the min of the four endpoint routes between
/// interior points of two distinct edges. The objective is concave
/// piecewise-linear: closed form over t, ternary search plus breakpoint
/// evaluation over s.
fn edge_pair_sup(e1: &Edge, e2: &Edge, dist: &[Vec<f64>]) -> f64 {
    let (l1, l2) = (e1.length, e2.length);
    let a0 = dist[e1.u][e2.u];
    let b0 = dist[e1.u][e2.v];
    let c0 = dist[e1.v][e2.u];
    let d0 = dist[e1.v][e2.v];
    if !(a0.is_finite() && b0.is_finite() && c0.is_finite() && d0.is_finite()) {
        return 0.0;
    }
    let eval = |s: f64| -> f64 {
        let a = (s + a0).min(l2 - s + b0);
        let b = (s + c0).min(l2 - s + d0);
        let t = ((l1 + b - a) / 2.0).clamp(0.0, l1);
        (t + a).min(l1 - t + b)
    };
    let mut best = eval(0.0).max(eval(l2));
    for s in [(l2 + b0 - a0) / 2.0, (l2 + d0 - c0) / 2.0] {
        if s.is_finite() {
            best = best.max(eval(s.clamp(0.0, l2)));
        }
    }
    let (mut lo, mut hi) = (0.0, l2);
    for _ in 0..200 {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if eval(m1) < eval(m2) {
            lo = m1;
        } else {
            hi = m2;
        }
    }
    best.max(eval((lo + hi) / 2.0))
}

fn dijkstra(adjacency: &[Vec<(usize, f64)>], source: usize) -> Vec<f64> {
    #[derive(PartialEq)]
    struct Item(f64, usize);
    impl Eq for Item {}
    impl PartialOrd for Item {
        fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
            Some(self.cmp(other))
        }
    }
    impl Ord for Item {
        fn cmp(&self, other: &Self) -> Ordering {
            // min-heap on distance
            other.0.partial_cmp(&self.0).unwrap_or(Ordering::Equal)
        }
    }
    let mut dist = vec![f64::INFINITY; adjacency.len()];
    dist[source] = 0.0;
    let mut heap = BinaryHeap::new();
    heap.push(Item(0.0, source));
    while let Some(Item(d, u)) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        for &(v, w) in &adjacency[u] {
            let nd = d + w;
            if nd < dist[v] {
                dist[v] = nd;
                heap.push(Item(nd, v));
            }
        }
    }
    dist
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(coords: &[f64]) -> Point {
        Point::from_slice(coords).unwrap()
    }

    fn path_abc() -> MetricGraph {
        MetricGraph::embedded(
            vec![pt(&[0.0]), pt(&[1.0]), pt(&[2.0])],
            &[(0, 1), (1, 2)],
        )
        .unwrap()
    }

    #[test]
    fn shortest_path_cases() {
        let g = path_abc();
        assert_eq!(g.shortest_path_metric(1, 1).unwrap(), 0.0);
        assert!((g.shortest_path_metric(0, 2).unwrap() - 2.0).abs() < 1e-9);
        let disjoint = MetricGraph::embedded(
            vec![pt(&[0.0]), pt(&[1.0]), pt(&[10.0]), pt(&[11.0])],
            &[(0, 1), (2, 3)],
        )
        .unwrap();
        assert!(disjoint.shortest_path_metric(0, 3).unwrap().is_infinite());
        assert!(g.shortest_path_metric(0, 7).is_err());
    }

    #[test]
    fn diameter_cases() {
        let single = MetricGraph::embedded(vec![pt(&[0.0]), pt(&[1.0])], &[(0, 1)]).unwrap();
        assert!((single.diameter().unwrap().value - 1.0).abs() < 1e-9);

        // Unit-circumference cycle as 4 equal edges: diameter 0.5 over interiors.
        let quarter = 0.25;
        let cycle = MetricGraph::abstract_graph(
            4,
            (0..4)
                .map(|i| Edge {
                    u: i,
                    v: (i + 1) % 4,
                    length: quarter,
                })
                .collect(),
        )
        .unwrap();
        assert!((cycle.diameter().unwrap().value - 0.5).abs() < 1e-9);

        assert!((path_abc().diameter().unwrap().value - 2.0).abs() < 1e-9);
    }

    #[test]
    fn diameter_envelope_is_upper_bound() {
        let g = path_abc();
        let exact = g.diameter().unwrap();
        let upper = g.diameter_upper_envelope().unwrap();
        assert!(upper.value >= exact.value - 1e-12);
        assert_eq!(upper.method, DiameterMethod::UpperEnvelope);
    }

    #[test]
    fn diameter_rejects_disconnected() {
        let g = MetricGraph::embedded(
            vec![pt(&[0.0]), pt(&[1.0]), pt(&[5.0]), pt(&[6.0])],
            &[(0, 1), (2, 3)],
        )
        .unwrap();
        assert!(g.diameter().is_err());
    }

    #[test]
    fn census_cases() {
        let g = MetricGraph::abstract_graph(
            4,
            vec![
                Edge { u: 0, v: 1, length: 1.0 },
                Edge { u: 1, v: 2, length: 2.0 },
                Edge { u: 2, v: 3, length: 3.0 },
            ],
        )
        .unwrap();
        assert_eq!(g.edge_length_census(2.0), 2);
        assert_eq!(g.edge_length_census(0.5), 0);
        assert_eq!(g.edge_length_census(3.0), 3);
    }

    #[test]
    fn betti_cases() {
        let tree = MetricGraph::abstract_graph(
            5,
            (0..4)
                .map(|i| Edge { u: i, v: i + 1, length: 1.0 })
                .collect(),
        )
        .unwrap();
        assert_eq!(tree.betti_1(), 0);
        let cycle = MetricGraph::abstract_graph(
            3,
            vec![
                Edge { u: 0, v: 1, length: 1.0 },
                Edge { u: 1, v: 2, length: 1.0 },
                Edge { u: 2, v: 0, length: 1.0 },
            ],
        )
        .unwrap();
        assert_eq!(cycle.betti_1(), 1);
        let theta = MetricGraph::abstract_graph(
            2,
            vec![
                Edge { u: 0, v: 1, length: 1.0 },
                Edge { u: 0, v: 1, length: 1.2 },
                Edge { u: 0, v: 1, length: 1.4 },
            ],
        )
        .unwrap();
        assert_eq!(theta.betti_1(), 2);
    }

    #[test]
    fn delta_dense_cases() {
        let g = MetricGraph::abstract_graph(2, vec![Edge { u: 0, v: 1, length: 2.0 }]).unwrap();
        assert!(!g.is_delta_dense(1.0));
        assert!(g.is_delta_dense(2.0));
        let empty = MetricGraph::abstract_graph(3, vec![]).unwrap();
        assert!(empty.is_delta_dense(0.1));
    }

    #[test]
    fn self_loop_rejected() {
        assert!(MetricGraph::abstract_graph(2, vec![Edge { u: 1, v: 1, length: 1.0 }]).is_err());
    }

    #[test]
    fn embedded_length_mismatch_rejected() {
        let r = MetricGraph::embedded_with_lengths(
            vec![pt(&[0.0]), pt(&[1.0])],
            vec![Edge { u: 0, v: 1, length: 2.0 }],
        );
        assert!(r.is_err());
    }

    #[test]
    fn restricted_distortion_segment_is_one() {
        let g = MetricGraph::embedded(vec![pt(&[0.0, 0.0]), pt(&[1.0, 0.0])], &[(0, 1)]).unwrap();
        let est = g.restricted_distortion(0.2, 0.5, 0.05).unwrap();
        assert!((est.value - 1.0).abs() <= 2.0 * est.discretization_step);
    }

    #[test]
    fn restricted_distortion_rejects_coarse_step() {
        let g = MetricGraph::embedded(vec![pt(&[0.0]), pt(&[1.0])], &[(0, 1)]).unwrap();
        assert!(g.restricted_distortion(0.2, 0.5, 0.1).is_err());
    }

    #[test]
    fn text_roundtrip() {
        let g = MetricGraph::embedded(
            vec![pt(&[0.0, 0.5]), pt(&[1.25, -3.0]), pt(&[2.0, 2.0])],
            &[(0, 1), (1, 2)],
        )
        .unwrap();
        let text = g.to_text();
        let back = MetricGraph::from_text(&text).unwrap();
        assert_eq!(back.to_text(), text);
        assert_eq!(back.mode(), GraphMode::Embedded);

        let a = MetricGraph::abstract_graph(2, vec![Edge { u: 0, v: 1, length: 7.5 }]).unwrap();
        let text = a.to_text();
        let back = MetricGraph::from_text(&text).unwrap();
        assert_eq!(back.to_text(), text);
        assert_eq!(back.mode(), GraphMode::Abstract);
    }

    #[test]
    fn cloud_graph_hausdorff_cases() {
        let g = MetricGraph::embedded(vec![pt(&[0.0, 0.0]), pt(&[1.0, 0.0])], &[(0, 1)]).unwrap();
        let s = PointCloud::new(vec![pt(&[0.0, 0.0]), pt(&[1.0, 0.0])]).unwrap();
        let h = hausdorff_cloud_to_graph(&s, &g, None).unwrap();
        assert!(h.cloud_to_graph < 1e-9);

        let s2 = PointCloud::new(vec![pt(&[0.5, 0.1])]).unwrap();
        let h2 = hausdorff_cloud_to_graph(&s2, &g, None).unwrap();
        assert!((h2.cloud_to_graph - 0.1).abs() < 1e-9);
        assert!((h2.value - (0.5f64.powi(2) + 0.1f64.powi(2)).sqrt()).abs() < 1e-2);
    }
}
