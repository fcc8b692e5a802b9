//! Discrete alpha-Reeb graph of a metric graph under the
//! distance-from-basepoint filter.
//!
//! The range of the filter is covered by overlapping open intervals of length
//! at most alpha. Inside each interval, vertices whose filter value falls in
//! the interval are grouped into connected components through the induced
//! edges; each component becomes a Reeb node. Nodes in different intervals are
//! joined when they share a source vertex, or through the single contracted
//! adjacency each graph edge contributes between its endpoints' nodes.

use crate::error::{Error, Result};
use crate::graph::{Edge, MetricGraph, UnionFind};

#[derive(Debug, Clone)]
pub struct IntervalCover {
    alpha: f64,
    intervals: Vec<(f64, f64)>,
}

impl IntervalCover {
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Unclipped open interval bounds, in order.
    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn contains(&self, index: usize, t: f64) -> bool {
        let (lo, hi) = self.intervals[index];
        lo < t && t < hi
    }
}

/// Default cover: intervals of length alpha with 50% overlap,
/// I_k = (k*alpha/2 - alpha/2, k*alpha/2 + alpha/2).
pub fn make_cover(filter_max: f64, alpha: f64) -> Result<IntervalCover> {
    make_cover_with_overlap(filter_max, alpha, 0.5)
}

/// Cover with configurable overlap fraction. Consecutive intervals must
/// overlap by at least alpha/4, so the fraction is confined to [0.25, 0.75].
pub fn make_cover_with_overlap(
    filter_max: f64,
    alpha: f64,
    overlap: f64,
) -> Result<IntervalCover> {
    if alpha <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "alpha",
            reason: "must be positive".into(),
        });
    }
    if !(0.25..=0.75).contains(&overlap) {
        return Err(Error::InvalidParameter {
            name: "overlap",
            reason: "must lie in [0.25, 0.75]".into(),
        });
    }
    if filter_max < 0.0 || !filter_max.is_finite() {
        return Err(Error::InvalidParameter {
            name: "filter_max",
            reason: "must be finite and nonnegative".into(),
        });
    }
    let step = alpha * (1.0 - overlap);
    let k_max = if filter_max == 0.0 {
        0
    } else {
        (filter_max / step).ceil() as usize
    };
    let intervals = (0..=k_max)
        .map(|k| {
            let center = k as f64 * step;
            (center - alpha / 2.0, center + alpha / 2.0)
        })
        .collect();
    Ok(IntervalCover { alpha, intervals })
}

/// Shortest-path distances from the base vertex; the Reeb filter.
pub fn filter_values(graph: &MetricGraph, base: usize) -> Result<Vec<f64>> {
    let distances = graph.single_source_distances(base)?;
    if distances.iter().any(|d| d.is_infinite()) {
        let (n, _) = graph.components();
        return Err(Error::Disconnected { components: n });
    }
    Ok(distances)
}

#[derive(Debug, Clone)]
pub struct ReebNode {
    pub interval: usize,
    /// Component id within the interval: the smallest member vertex index.
    pub component: usize,
    /// Sorted source vertex indices.
    pub members: Vec<usize>,
    /// Median of the members' filter values.
    pub filter_value: f64,
}

#[derive(Debug, Clone)]
pub struct AlphaReebGraph {
    pub nodes: Vec<ReebNode>,
    /// Sorted, deduplicated node index pairs (a < b).
    pub edges: Vec<(usize, usize)>,
    pub basepoint: usize,
    pub alpha: f64,
    /// For each source vertex, the sorted list of containing nodes.
    pub assignment: Vec<Vec<usize>>,
    /// Filter value of each source vertex.
    pub filter: Vec<f64>,
}

fn median(mut values: Vec<f64>) -> f64 {
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        (values[n / 2 - 1] + values[n / 2]) / 2.0
    }
}

pub fn build_alpha_reeb(
    graph: &MetricGraph,
    base: usize,
    cover: &IntervalCover,
) -> Result<AlphaReebGraph> {
    let filter = filter_values(graph, base)?;
    let n = graph.vertex_count();

    // Per-interval connected components over the induced edges.
    let mut nodes: Vec<ReebNode> = Vec::new();
    for (idx, _) in cover.intervals().iter().enumerate() {
        let member_mask: Vec<bool> = (0..n).map(|v| cover.contains(idx, filter[v])).collect();
        if !member_mask.iter().any(|&m| m) {
            continue;
        }
        let mut uf = UnionFind::new(n);
        for e in graph.edges() {
            if member_mask[e.u] && member_mask[e.v] {
                uf.union(e.u, e.v);
            }
        }
        let mut comp_members: std::collections::BTreeMap<usize, Vec<usize>> =
            std::collections::BTreeMap::new();
        let mut label_of_root: std::collections::HashMap<usize, usize> =
            std::collections::HashMap::new();
        for v in 0..n {
            if member_mask[v] {
                let root = uf.find(v);
                let label = *label_of_root.entry(root).or_insert(v);
                comp_members.entry(label).or_default().push(v);
            }
        }
        for (label, members) in comp_members {
            let filter_value = median(members.iter().map(|&v| filter[v]).collect());
            nodes.push(ReebNode {
                interval: idx,
                component: label,
                members,
                filter_value,
            });
        }
    }

    // Node lookup per vertex.
    let mut containing: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, node) in nodes.iter().enumerate() {
        for &v in &node.members {
            containing[v].push(i);
        }
    }

    // Adjacency between nodes of different intervals: shared vertices, or a
    // graph edge running between the member sets. Shared vertices at exactly
    // equal node filter values realize the transitive closure of the quotient
    // relation and merge the nodes instead.
    let mut merge = UnionFind::new(nodes.len());
    let mut raw_edges: Vec<(usize, usize)> = Vec::new();
    for v in 0..n {
        let list = &containing[v];
        for i in 0..list.len() {
            for j in (i + 1)..list.len() {
                let (a, b) = (list[i], list[j]);
                if nodes[a].filter_value == nodes[b].filter_value {
                    merge.union(a, b);
                } else {
                    raw_edges.push((a.min(b), a.max(b)));
                }
            }
        }
    }
    // Along an edge the filter sweeps monotonically between the endpoint
    // values (up to the discretization), passing through a chain of interval
    // components. Interior components hold no vertex and contract away, so the
    // edge contributes exactly one adjacency: the node of the low endpoint
    // that reaches furthest up the filter joined to the node of the high
    // endpoint that reaches furthest down. Connecting more pairs would add
    // chords that inflate the first Betti number.
    for e in graph.edges() {
        let (lo_v, hi_v) = if filter[e.u] <= filter[e.v] {
            (e.u, e.v)
        } else {
            (e.v, e.u)
        };
        let a = containing[lo_v]
            .iter()
            .copied()
            .max_by_key(|&i| nodes[i].interval);
        let b = containing[hi_v]
            .iter()
            .copied()
            .min_by_key(|&i| nodes[i].interval);
        if let (Some(a), Some(b)) = (a, b) {
            if a != b && nodes[a].interval != nodes[b].interval {
                raw_edges.push((a.min(b), a.max(b)));
            }
        }
    }

    // Contract merged nodes deterministically.
    let mut rep_of: Vec<usize> = (0..nodes.len()).collect();
    for i in 0..nodes.len() {
        rep_of[i] = merge.find(i);
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> =
        std::collections::BTreeMap::new();
    for (i, &r) in rep_of.iter().enumerate() {
        groups.entry(r).or_default().push(i);
    }
    let mut final_nodes: Vec<ReebNode> = Vec::new();
    let mut index_of: Vec<usize> = vec![0; nodes.len()];
    let mut grouped: Vec<(usize, usize, Vec<usize>)> = groups
        .into_iter()
        .map(|(_, ids)| {
            let interval = ids.iter().map(|&i| nodes[i].interval).min().unwrap();
            let component = ids.iter().map(|&i| nodes[i].component).min().unwrap();
            (interval, component, ids)
        })
        .collect();
    grouped.sort_by_key(|(interval, component, _)| (*interval, *component));
    for (interval, component, ids) in grouped {
        let mut members: Vec<usize> = ids
            .iter()
            .flat_map(|&i| nodes[i].members.iter().copied())
            .collect();
        members.sort_unstable();
        members.dedup();
        let filter_value = median(members.iter().map(|&v| filter[v]).collect());
        for &i in &ids {
            index_of[i] = final_nodes.len();
        }
        final_nodes.push(ReebNode {
            interval,
            component,
            members,
            filter_value,
        });
    }

    let mut edges: Vec<(usize, usize)> = raw_edges
        .into_iter()
        .map(|(a, b)| {
            let (a, b) = (index_of[a], index_of[b]);
            (a.min(b), a.max(b))
        })
        .filter(|(a, b)| a != b)
        .collect();
    edges.sort_unstable();
    edges.dedup();

    let mut assignment: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, node) in final_nodes.iter().enumerate() {
        for &v in &node.members {
            assignment[v].push(i);
        }
    }
    for list in &mut assignment {
        list.dedup();
    }

    Ok(AlphaReebGraph {
        nodes: final_nodes,
        edges,
        basepoint: base,
        alpha: cover.alpha(),
        assignment,
        filter,
    })
}

impl AlphaReebGraph {
    /// Abstract metric graph over the Reeb nodes; edge length is the filter
    /// gap with a floor of alpha/100 so no edge collapses to length zero.
    pub fn to_metric_graph(&self) -> Result<MetricGraph> {
        let floor = self.alpha / 100.0;
        let edges = self
            .edges
            .iter()
            .map(|&(a, b)| Edge {
                u: a,
                v: b,
                length: (self.nodes[a].filter_value - self.nodes[b].filter_value)
                    .abs()
                    .max(floor),
            })
            .collect();
        MetricGraph::abstract_graph(self.nodes.len(), edges)
    }

    pub fn betti_1(&self) -> usize {
        self.to_metric_graph()
            .map(|g| g.betti_1())
            .unwrap_or_default()
    }

    /// Text export: the metric-graph format of the node graph plus one
    /// `n <interval> <component> <f-value> <member-count>` line per node.
    pub fn to_text(&self) -> Result<String> {
        let mut out = self.to_metric_graph()?.to_text();
        for node in &self.nodes {
            out.push_str(&format!(
                "n {} {} {} {}\n",
                node.interval,
                node.component,
                node.filter_value,
                node.members.len()
            ));
        }
        Ok(out)
    }
}
