//! Vietoris-Rips graph at scale eta over a point cloud.
//!
//! An edge joins every pair at Euclidean distance <= eta (closed threshold).
//! Duplicate points stay distinct vertices joined by zero-length edges. The
//! default construction uses a uniform grid of cell size eta; the brute-force
//! pairwise build is kept public as the oracle it is checked against.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::geometry::{distance_unchecked, PointCloud};
use crate::graph::{Edge, MetricGraph};

#[derive(Debug, Clone)]
pub struct RipsGraph {
    base: PointCloud,
    eta: f64,
    graph: MetricGraph,
}

impl RipsGraph {
    pub fn base(&self) -> &PointCloud {
        &self.base
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn graph(&self) -> &MetricGraph {
        &self.graph
    }

    /// Shortest-path metric d^eta between two sample points.
    pub fn metric(&self, i: usize, j: usize) -> Result<f64> {
        self.graph.shortest_path_metric(i, j)
    }

    /// (connected, component count) via union-find over the edge set.
    pub fn connectivity(&self) -> (bool, usize) {
        let (count, _) = self.graph.components();
        (count == 1, count)
    }

    /// Vertex indices of the largest connected component (ties broken by
    /// smallest component label).
    pub fn largest_component(&self) -> Vec<usize> {
        let (_, labels) = self.graph.components();
        let mut sizes: HashMap<usize, usize> = HashMap::new();
        for &l in &labels {
            *sizes.entry(l).or_insert(0) += 1;
        }
        let best = sizes
            .iter()
            .max_by_key(|(label, size)| (**size, std::cmp::Reverse(**label)))
            .map(|(l, _)| *l)
            .unwrap_or(0);
        (0..labels.len()).filter(|&i| labels[i] == best).collect()
    }
}

fn make_rips(base: PointCloud, eta: f64, mut pairs: Vec<(usize, usize)>) -> Result<RipsGraph> {
    pairs.sort_unstable();
    pairs.dedup();
    let edges: Vec<Edge> = pairs
        .into_iter()
        .map(|(i, j)| Edge {
            u: i,
            v: j,
            length: distance_unchecked(base.point(i).coords(), base.point(j).coords()),
        })
        .collect();
    let graph = MetricGraph::embedded_with_lengths(base.points().to_vec(), edges)?;
    Ok(RipsGraph { base, eta, graph })
}

/// Grid-accelerated construction; edge set identical to the brute-force rule.
pub fn build_rips(cloud: &PointCloud, eta: f64) -> Result<RipsGraph> {
    if eta <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "eta",
            reason: "must be positive".into(),
        });
    }
    let dim = cloud.dim();
    let cell = |coords: &[f64]| -> Vec<i64> {
        coords.iter().map(|c| (c / eta).floor() as i64).collect()
    };
    let mut grid: HashMap<Vec<i64>, Vec<usize>> = HashMap::new();
    for (i, p) in cloud.iter().enumerate() {
        grid.entry(cell(p.coords())).or_default().push(i);
    }
    let mut pairs = Vec::new();
    let mut neighbor = vec![0i64; dim];
    for (i, p) in cloud.iter().enumerate() {
        let home = cell(p.coords());
        // Walk the 3^d neighborhood of the home cell.
        let mut offsets = vec![-1i64; dim];
        loop {
            for k in 0..dim {
                neighbor[k] = home[k] + offsets[k];
            }
            if let Some(bucket) = grid.get(&neighbor) {
                for &j in bucket {
                    if j > i
                        && distance_unchecked(p.coords(), cloud.point(j).coords()) <= eta
                    {
                        pairs.push((i, j));
                    }
                }
            }
            // next offset vector, or done
            let mut k = 0;
            loop {
                if k == dim {
                    break;
                }
                offsets[k] += 1;
                if offsets[k] <= 1 {
                    break;
                }
                offsets[k] = -1;
                k += 1;
            }
            if k == dim {
                break;
            }
        }
    }
    make_rips(cloud.clone(), eta, pairs)
}

/// O(n^2) reference construction, used as the oracle for `build_rips`.
pub fn build_rips_bruteforce(cloud: &PointCloud, eta: f64) -> Result<RipsGraph> {
    if eta <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "eta",
            reason: "must be positive".into(),
        });
    }
    let mut pairs = Vec::new();
    for i in 0..cloud.len() {
        for j in (i + 1)..cloud.len() {
            if distance_unchecked(cloud.point(i).coords(), cloud.point(j).coords()) <= eta {
                pairs.push((i, j));
            }
        }
    }
    make_rips(cloud.clone(), eta, pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;

    fn cloud(coords: &[&[f64]]) -> PointCloud {
        PointCloud::new(coords.iter().map(|c| Point::from_slice(c).unwrap()).collect()).unwrap()
    }

    #[test]
    fn threshold_rule() {
        let c = cloud(&[&[0.0, 0.0], &[1.0, 0.0], &[3.0, 0.0]]);
        let r = build_rips(&c, 1.5).unwrap();
        assert_eq!(r.graph().edge_count(), 1);
        let e = r.graph().edges()[0];
        assert_eq!((e.u, e.v), (0, 1));
        assert!((e.length - 1.0).abs() < 1e-12);
    }

    #[test]
    fn closed_boundary_included() {
        let c = cloud(&[&[0.0, 0.0], &[1.5, 0.0]]);
        let r = build_rips(&c, 1.5).unwrap();
        assert_eq!(r.graph().edge_count(), 1);
    }

    #[test]
    fn metric_cases() {
        let c = cloud(&[&[0.0], &[1.0], &[2.0]]);
        let r = build_rips(&c, 1.0).unwrap();
        assert!((r.metric(0, 2).unwrap() - 2.0).abs() < 1e-12);
        let c2 = cloud(&[&[0.0], &[0.4]]);
        let r2 = build_rips(&c2, 0.5).unwrap();
        assert!((r2.metric(0, 1).unwrap() - 0.4).abs() < 1e-12);
        let c3 = cloud(&[&[0.0], &[10.0]]);
        let r3 = build_rips(&c3, 1.0).unwrap();
        assert!(r3.metric(0, 1).unwrap().is_infinite());
    }

    #[test]
    fn connectivity_cases() {
        let single = cloud(&[&[0.0, 0.0]]);
        assert_eq!(build_rips(&single, 1.0).unwrap().connectivity(), (true, 1));
        let far = cloud(&[&[0.0, 0.0], &[100.0, 0.0]]);
        assert_eq!(build_rips(&far, 1.0).unwrap().connectivity(), (false, 2));
    }

    #[test]
    fn circle_sample_connected_with_cycle() {
        let n = 200;
        let pts: Vec<Point> = (0..n)
            .map(|i| {
                let a = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
                Point::new(vec![a.cos(), a.sin()]).unwrap()
            })
            .collect();
        let c = PointCloud::new(pts).unwrap();
        let r = build_rips_bruteforce(&c, 0.2).unwrap();
        assert_eq!(r.connectivity(), (true, 1));
        assert!(r.graph().betti_1() >= 1);
        // grid build agrees
        let g = build_rips(&c, 0.2).unwrap();
        assert_eq!(g.graph().edges(), r.graph().edges());
    }

    #[test]
    fn duplicates_kept_with_zero_length_edge() {
        let c = cloud(&[&[1.0, 1.0], &[1.0, 1.0]]);
        let r = build_rips(&c, 0.5).unwrap();
        assert_eq!(r.graph().edge_count(), 1);
        assert_eq!(r.graph().edges()[0].length, 0.0);
    }

    #[test]
    fn delta_dense_at_eta() {
        let c = cloud(&[&[0.0, 0.0], &[0.3, 0.0], &[0.5, 0.4]]);
        let r = build_rips(&c, 0.6).unwrap();
        assert!(r.graph().is_delta_dense(0.6));
    }
}
