//! Gaussian-kernel geometric smoothing: embeds a Reeb graph back into the
//! ambient space by averaging the member data points of each edge along the
//! filter parameter.

use crate::error::{Error, Result};
use crate::geometry::{Point, PointCloud};
use crate::reeb::AlphaReebGraph;

/// Normalized Gaussian weights centered at t over the given filter values.
/// When every kernel value underflows, the nearest filter value gets weight 1.
pub fn gaussian_weights(filter_values: &[f64], t: f64, sigma: f64) -> Result<Vec<f64>> {
    if filter_values.is_empty() {
        return Err(Error::EmptyInput("filter values"));
    }
    if sigma <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "sigma",
            reason: "must be positive".into(),
        });
    }
    // Shift by the nearest filter value so the largest kernel value is 1.
    let nearest = filter_values
        .iter()
        .map(|f| (f - t).abs())
        .fold(f64::INFINITY, f64::min);
    let raw: Vec<f64> = filter_values
        .iter()
        .map(|f| {
            let z = (f - t).abs();
            (-(z * z - nearest * nearest) / (2.0 * sigma * sigma)).exp()
        })
        .collect();
    let sum: f64 = raw.iter().sum();
    if sum < 1e-300 {
        let mut w = vec![0.0; filter_values.len()];
        let best = filter_values
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| {
                (*a - t).abs().partial_cmp(&(*b - t).abs()).unwrap()
            })
            .map(|(i, _)| i)
            .unwrap();
        w[best] = 1.0;
        return Ok(w);
    }
    Ok(raw.into_iter().map(|r| r / sum).collect())
}

fn weighted_mean(points: &[(&Point, f64)], weights: &[f64]) -> Point {
    let dim = points[0].0.dim();
    let mut coords = vec![0.0; dim];
    for ((p, _), w) in points.iter().zip(weights) {
        for (c, x) in coords.iter_mut().zip(p.coords()) {
            *c += w * x;
        }
    }
    Point::new(coords).expect("weighted mean of finite points is finite")
}

/// Polyline produced for one Reeb edge (or an isolated node).
#[derive(Debug, Clone)]
pub struct EdgePolyline {
    /// Node indices (a, b) for an edge; (a, a) for an isolated node.
    pub nodes: (usize, usize),
    pub points: Vec<Point>,
    pub t_range: (f64, f64),
}

#[derive(Debug, Clone)]
pub struct SmoothedEmbedding {
    pub polylines: Vec<EdgePolyline>,
    pub sigma: f64,
    pub samples_per_edge: usize,
}

impl SmoothedEmbedding {
    pub fn total_length(&self) -> f64 {
        self.polylines
            .iter()
            .map(|pl| {
                pl.points
                    .windows(2)
                    .map(|w| {
                        crate::geometry::distance_unchecked(w[0].coords(), w[1].coords())
                    })
                    .sum::<f64>()
            })
            .sum()
    }
}

/// Smooth one edge: `samples` evenly spaced t values over [t_lo, t_hi],
/// each mapped to the Gaussian-weighted mean of the member points.
pub fn embed_edge(
    data: &[(&Point, f64)],
    t_lo: f64,
    t_hi: f64,
    sigma: f64,
    samples: usize,
) -> Result<Vec<Point>> {
    if data.is_empty() {
        return Err(Error::EmptyInput("edge member set"));
    }
    if samples == 0 {
        return Err(Error::InvalidParameter {
            name: "samples",
            reason: "must be positive".into(),
        });
    }
    let filters: Vec<f64> = data.iter().map(|(_, f)| *f).collect();
    if t_lo == t_hi || samples == 1 {
        let w = gaussian_weights(&filters, t_lo, sigma)?;
        return Ok(vec![weighted_mean(data, &w)]);
    }
    let mut out = Vec::with_capacity(samples);
    for k in 0..samples {
        let t = t_lo + (t_hi - t_lo) * k as f64 / (samples - 1) as f64;
        let w = gaussian_weights(&filters, t, sigma)?;
        out.push(weighted_mean(data, &w));
    }
    Ok(out)
}

/// Smooth every Reeb edge; isolated nodes become single weighted points.
/// Requires sigma < alpha/4.
pub fn embed_reeb(
    reeb: &AlphaReebGraph,
    source: &PointCloud,
    sigma: f64,
    samples: usize,
) -> Result<SmoothedEmbedding> {
    if sigma <= 0.0 || sigma >= reeb.alpha / 4.0 {
        return Err(Error::InvalidParameter {
            name: "sigma",
            reason: format!(
                "must satisfy 0 < sigma < alpha/4 = {} (got {})",
                reeb.alpha / 4.0,
                sigma
            ),
        });
    }
    let mut polylines = Vec::new();
    let member_data = |nodes: &[usize]| -> Vec<(&Point, f64)> {
        let mut seen = std::collections::BTreeSet::new();
        for &nd in nodes {
            for &v in &reeb.nodes[nd].members {
                seen.insert(v);
            }
        }
        seen.iter()
            .map(|&v| (source.point(v), reeb.filter[v]))
            .collect()
    };
    for &(a, b) in &reeb.edges {
        let data = member_data(&[a, b]);
        let f_lo = data.iter().map(|(_, f)| *f).fold(f64::INFINITY, f64::min);
        let f_hi = data
            .iter()
            .map(|(_, f)| *f)
            .fold(f64::NEG_INFINITY, f64::max);
        // Vertex medians can fall outside the member range with skewed
        // membership; clamp the parameter interval to the data.
        let t_a = reeb.nodes[a].filter_value.clamp(f_lo, f_hi);
        let t_b = reeb.nodes[b].filter_value.clamp(f_lo, f_hi);
        let points = embed_edge(&data, t_a, t_b, sigma, samples)?;
        polylines.push(EdgePolyline {
            nodes: (a, b),
            points,
            t_range: (t_a, t_b),
        });
    }
    let mut touched = vec![false; reeb.nodes.len()];
    for &(a, b) in &reeb.edges {
        touched[a] = true;
        touched[b] = true;
    }
    for (i, node) in reeb.nodes.iter().enumerate() {
        if !touched[i] {
            let data = member_data(&[i]);
            let points = embed_edge(&data, node.filter_value, node.filter_value, sigma, 1)?;
            polylines.push(EdgePolyline {
                nodes: (i, i),
                points,
                t_range: (node.filter_value, node.filter_value),
            });
        }
    }
    Ok(SmoothedEmbedding {
        polylines,
        sigma,
        samples_per_edge: samples,
    })
}
