//! Correspondence machinery: exact Gromov-Hausdorff distance on tiny finite
//! metric spaces, (epsilon, R)-approximation checks, annulus component
//! diameters, and the reconstruction bound evaluators.

use crate::error::{Error, Result};
use crate::geometry::{distance_unchecked, PointCloud};
use crate::graph::MetricGraph;

/// Maximum |X| * |Y| accepted by `gh_bruteforce`.
pub const GH_SIZE_CAP: usize = 400;

/// Finite metric space given by its full distance matrix.
#[derive(Debug, Clone)]
pub struct FiniteMetricSpace {
    n: usize,
    dist: Vec<f64>,
}

impl FiniteMetricSpace {
    pub fn from_matrix(n: usize, dist: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyInput("metric space"));
        }
        if dist.len() != n * n {
            return Err(Error::InvalidParameter {
                name: "dist",
                reason: format!("expected {} entries, got {}", n * n, dist.len()),
            });
        }
        let at = |i: usize, j: usize| dist[i * n + j];
        for i in 0..n {
            if at(i, i) != 0.0 {
                return Err(Error::InvalidParameter {
                    name: "dist",
                    reason: format!("nonzero diagonal at {}", i),
                });
            }
            for j in 0..n {
                let d = at(i, j);
                if !d.is_finite() || d < 0.0 {
                    return Err(Error::InvalidParameter {
                        name: "dist",
                        reason: format!("bad entry ({}, {})", i, j),
                    });
                }
                if (d - at(j, i)).abs() > 1e-12 {
                    return Err(Error::InvalidParameter {
                        name: "dist",
                        reason: format!("asymmetry at ({}, {})", i, j),
                    });
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if at(i, j) > at(i, k) + at(k, j) + 1e-9 {
                        return Err(Error::InvalidParameter {
                            name: "dist",
                            reason: format!(
                                "triangle inequality violated on ({}, {}, {})",
                                i, j, k
                            ),
                        });
                    }
                }
            }
        }
        Ok(FiniteMetricSpace { n, dist })
    }

    pub fn from_cloud(cloud: &PointCloud) -> Self {
        let n = cloud.len();
        let mut dist = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                dist[i * n + j] =
                    distance_unchecked(cloud.point(i).coords(), cloud.point(j).coords());
            }
        }
        FiniteMetricSpace { n, dist }
    }

    /// Vertex metric of a connected graph.
    pub fn from_graph(graph: &MetricGraph) -> Result<Self> {
        let n = graph.vertex_count();
        if n == 0 {
            return Err(Error::EmptyInput("graph"));
        }
        let mut dist = vec![0.0; n * n];
        for i in 0..n {
            let row = graph.single_source_distances(i)?;
            for (j, d) in row.into_iter().enumerate() {
                if d.is_infinite() {
                    let (c, _) = graph.components();
                    return Err(Error::Disconnected { components: c });
                }
                dist[i * n + j] = d;
            }
        }
        Ok(FiniteMetricSpace { n, dist })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn dist(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.n + j]
    }

    pub fn diameter(&self) -> f64 {
        self.dist.iter().copied().fold(0.0, f64::max)
    }
}

/// Correspondence between two finite metric spaces: a set of index pairs
/// covering both sides.
#[derive(Debug, Clone)]
pub struct Correspondence {
    pub pairs: Vec<(usize, usize)>,
}

impl Correspondence {
    pub fn identity(n: usize) -> Self {
        Correspondence {
            pairs: (0..n).map(|i| (i, i)).collect(),
        }
    }

    fn validate(&self, x: &FiniteMetricSpace, y: &FiniteMetricSpace) -> Result<()> {
        for i in 0..x.len() {
            if !self.pairs.iter().any(|&(a, _)| a == i) {
                return Err(Error::NonCoveringCorrespondence { side: "X", index: i });
            }
        }
        for j in 0..y.len() {
            if !self.pairs.iter().any(|&(_, b)| b == j) {
                return Err(Error::NonCoveringCorrespondence { side: "Y", index: j });
            }
        }
        for &(a, b) in &self.pairs {
            if a >= x.len() || b >= y.len() {
                return Err(Error::InvalidParameter {
                    name: "correspondence",
                    reason: format!("pair ({}, {}) out of range", a, b),
                });
            }
        }
        Ok(())
    }
}

/// sup over pairs of correspondence pairs of |d_X - d_Y|.
pub fn correspondence_distortion(
    x: &FiniteMetricSpace,
    y: &FiniteMetricSpace,
    c: &Correspondence,
) -> Result<f64> {
    c.validate(x, y)?;
    let mut worst: f64 = 0.0;
    for (k, &(x1, y1)) in c.pairs.iter().enumerate() {
        for &(x2, y2) in &c.pairs[k..] {
            worst = worst.max((x.dist(x1, x2) - y.dist(y1, y2)).abs());
        }
    }
    Ok(worst)
}

/// Exact Gromov-Hausdorff distance: half the minimal distortion over all
/// correspondences.
///
/// A minimal correspondence is the union of a map X -> Y and a map Y -> X,
/// so the search runs a threshold decision (is there a covering, pairwise
/// compatible set of pairs with distortion <= t) over the finite candidate
/// set of |d_X - d_Y| values, with a backtracking assignment inside.
pub fn gh_bruteforce(x: &FiniteMetricSpace, y: &FiniteMetricSpace) -> Result<f64> {
    let size = x.len() * y.len();
    if size > GH_SIZE_CAP {
        return Err(Error::SizeCapExceeded {
            size,
            cap: GH_SIZE_CAP,
        });
    }
    let mut candidates: Vec<f64> = Vec::new();
    for i in 0..x.len() {
        for j in 0..x.len() {
            for k in 0..y.len() {
                for l in 0..y.len() {
                    candidates.push((x.dist(i, j) - y.dist(k, l)).abs());
                }
            }
        }
    }
    candidates.sort_by(|a, b| a.partial_cmp(b).unwrap());
    candidates.dedup();
    // Binary search the smallest feasible threshold.
    let (mut lo, mut hi) = (0usize, candidates.len() - 1);
    if !feasible(x, y, candidates[hi]) {
        // Cannot happen: the full product correspondence always works at the
        // max candidate value.
        unreachable!("full correspondence infeasible at max distortion");
    }
    while lo < hi {
        let mid = (lo + hi) / 2;
        if feasible(x, y, candidates[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(candidates[lo] / 2.0)
}

fn compatible(
    x: &FiniteMetricSpace,
    y: &FiniteMetricSpace,
    t: f64,
    p: (usize, usize),
    q: (usize, usize),
) -> bool {
    (x.dist(p.0, q.0) - y.dist(p.1, q.1)).abs() <= t
}

fn feasible(x: &FiniteMetricSpace, y: &FiniteMetricSpace, t: f64) -> bool {
    let mut chosen: Vec<(usize, usize)> = Vec::new();
    assign_x(x, y, t, 0, &mut chosen)
}

fn assign_x(
    x: &FiniteMetricSpace,
    y: &FiniteMetricSpace,
    t: f64,
    i: usize,
    chosen: &mut Vec<(usize, usize)>,
) -> bool {
    if i == x.len() {
        let mut uncovered: Vec<usize> = (0..y.len())
            .filter(|&j| !chosen.iter().any(|&(_, b)| b == j))
            .collect();
        return cover_y(x, y, t, &mut uncovered, chosen);
    }
    for j in 0..y.len() {
        let p = (i, j);
        if chosen.iter().all(|&q| compatible(x, y, t, p, q)) {
            chosen.push(p);
            if assign_x(x, y, t, i + 1, chosen) {
                return true;
            }
            chosen.pop();
        }
    }
    false
}

fn cover_y(
    x: &FiniteMetricSpace,
    y: &FiniteMetricSpace,
    t: f64,
    uncovered: &mut Vec<usize>,
    chosen: &mut Vec<(usize, usize)>,
) -> bool {
    let j = match uncovered.pop() {
        None => return true,
        Some(j) => j,
    };
    for i in 0..x.len() {
        let p = (i, j);
        if chosen.iter().all(|&q| compatible(x, y, t, p, q)) {
            chosen.push(p);
            if cover_y(x, y, t, uncovered, chosen) {
                return true;
            }
            chosen.pop();
        }
    }
    uncovered.push(j);
    false
}

/// Worst pair-of-pairs found by `check_eps_r_approx` when the check fails.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Violation {
    pub first: (usize, usize),
    pub second: (usize, usize),
    pub difference: f64,
}

/// True iff every pair of correspondence pairs with min{d_X, d_Y} <= r_cap
/// has |d_X - d_Y| <= 2 * epsilon.
pub fn check_eps_r_approx(
    x: &FiniteMetricSpace,
    y: &FiniteMetricSpace,
    c: &Correspondence,
    epsilon: f64,
    r_cap: f64,
) -> Result<(bool, Option<Violation>)> {
    c.validate(x, y)?;
    let mut worst: Option<Violation> = None;
    for (k, &(x1, y1)) in c.pairs.iter().enumerate() {
        for &(x2, y2) in &c.pairs[k..] {
            let dx = x.dist(x1, x2);
            let dy = y.dist(y1, y2);
            if dx.min(dy) <= r_cap {
                let diff = (dx - dy).abs();
                if diff > 2.0 * epsilon
                    && worst.map_or(true, |w| diff > w.difference)
                {
                    worst = Some(Violation {
                        first: (x1, y1),
                        second: (x2, y2),
                        difference: diff,
                    });
                }
            }
        }
    }
    Ok((worst.is_none(), worst))
}

/// Maximum diameter of any connected component of the filter preimage of
/// [d_center - alpha_half, d_center + alpha_half]. Distances are measured in
/// the induced subgraph of the band, so paths stay inside it.
pub fn annulus_component_diameter(
    graph: &MetricGraph,
    base: usize,
    d_center: f64,
    alpha_half: f64,
) -> Result<f64> {
    let filter = crate::reeb::filter_values(graph, base)?;
    let lo = d_center - alpha_half;
    let hi = d_center + alpha_half;
    let n = graph.vertex_count();
    let in_band: Vec<bool> = filter.iter().map(|&f| lo <= f && f <= hi).collect();
    let band: Vec<usize> = (0..n).filter(|&v| in_band[v]).collect();
    if band.is_empty() {
        return Ok(0.0);
    }
    let index_in_band: std::collections::HashMap<usize, usize> =
        band.iter().enumerate().map(|(k, &v)| (v, k)).collect();
    let edges: Vec<crate::graph::Edge> = graph
        .edges()
        .iter()
        .filter(|e| in_band[e.u] && in_band[e.v])
        .map(|e| crate::graph::Edge {
            u: index_in_band[&e.u],
            v: index_in_band[&e.v],
            length: e.length,
        })
        .collect();
    let induced = MetricGraph::abstract_graph(band.len(), edges)?;
    let mut best: f64 = 0.0;
    for u in 0..band.len() {
        let d = induced.single_source_distances(u)?;
        for &x in d.iter().filter(|x| x.is_finite()) {
            best = best.max(x);
        }
    }
    Ok(best)
}

/// Inputs to the reconstruction Gromov-Hausdorff bound.
#[derive(Debug, Clone)]
pub struct GhBoundInputs {
    pub beta1: usize,
    pub alpha: f64,
    pub epsilon: f64,
    /// May be `f64::INFINITY`, selecting the limit form of the bound.
    pub r_cap: f64,
    pub m_diam: f64,
    /// Edge lengths of the ground-truth graph; the census N(l) counts those
    /// of length <= l.
    pub edge_lengths: Vec<f64>,
}

impl GhBoundInputs {
    pub fn census(&self, ell: f64) -> usize {
        self.edge_lengths.iter().filter(|&&l| l <= ell).count()
    }

    fn core_term(&self) -> f64 {
        if self.r_cap.is_infinite() {
            self.alpha + 4.0 * self.epsilon
        } else {
            self.alpha + 4.0 * self.epsilon * self.m_diam / self.r_cap + 4.0 * self.epsilon
        }
    }

    fn tail_term(&self) -> f64 {
        if self.r_cap.is_infinite() {
            2.0 * self.epsilon
        } else {
            (4.0 * self.m_diam / self.r_cap + 2.0) * self.epsilon
        }
    }
}

/// The reconstruction bound
/// (beta1 + 1) * 4 * (2 + N(4 * t)) * t + tail,
/// with t = alpha + 4*eps*M/R + 4*eps and tail = (4M/R + 2)*eps; for
/// R = infinity, t = alpha + 4*eps and tail = 2*eps. The unmatched bracket in
/// the source formula is read as 4 * (2 + N(...)).
pub fn theorem_bound(inputs: &GhBoundInputs) -> f64 {
    let t = inputs.core_term();
    (inputs.beta1 as f64 + 1.0) * 4.0 * (2.0 + inputs.census(4.0 * t) as f64) * t
        + inputs.tail_term()
}

/// Simplified bound (beta1 + 1) * (8*alpha + 36*eps*M/R + 34*eps), valid only
/// when the smallest ground-truth edge is at least 4 * t; returns None when
/// the premise fails.
pub fn simplified_bound(inputs: &GhBoundInputs) -> Option<f64> {
    let t = inputs.core_term();
    let min_edge = inputs
        .edge_lengths
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    if min_edge < 4.0 * t {
        return None;
    }
    let mr = if inputs.r_cap.is_infinite() {
        0.0
    } else {
        inputs.m_diam / inputs.r_cap
    };
    Some(
        (inputs.beta1 as f64 + 1.0)
            * (8.0 * inputs.alpha + 36.0 * inputs.epsilon * mr + 34.0 * inputs.epsilon),
    )
}
