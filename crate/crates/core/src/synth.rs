//! Synthetic ground-truth graphs and Hausdorff-noise samplers used by the
//! verification suites and tests.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{Point, PointCloud, Segment};
use crate::graph::{GraphMode, MetricGraph};

/// Sampling parameters: arc-length-equispaced points per edge, each displaced
/// uniformly inside a ball of radius `noise_radius`. Deterministic per seed.
#[derive(Debug, Clone, Copy)]
pub struct NoisySampleSpec {
    pub points_per_unit_length: f64,
    pub noise_radius: f64,
    pub seed: u64,
}

/// Generated sample plus the Hausdorff distance bound it is certified to
/// satisfy: noise_radius + max spacing / 2.
#[derive(Debug, Clone)]
pub struct SampledCloud {
    pub cloud: PointCloud,
    pub certified_hausdorff: f64,
}

fn ball_noise(rng: &mut ChaCha8Rng, dim: usize, radius: f64) -> Vec<f64> {
    if radius == 0.0 {
        return vec![0.0; dim];
    }
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.gen_range(-radius..=radius)).collect();
        if v.iter().map(|x| x * x).sum::<f64>() <= radius * radius {
            return v;
        }
    }
}

pub fn sample_graph(graph: &MetricGraph, spec: &NoisySampleSpec) -> Result<SampledCloud> {
    if graph.mode() != GraphMode::Embedded || graph.edge_count() == 0 {
        return Err(Error::DegenerateData(
            "sampling needs an embedded graph with at least one edge".into(),
        ));
    }
    if spec.points_per_unit_length <= 0.0 || spec.noise_radius < 0.0 {
        return Err(Error::InvalidParameter {
            name: "spec",
            reason: "points_per_unit_length must be positive, noise_radius nonnegative".into(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let dim = graph.dim();
    let mut points = Vec::new();
    let mut max_spacing: f64 = 0.0;
    for e in graph.edges() {
        let seg = Segment::new(
            graph.vertices()[e.u].clone(),
            graph.vertices()[e.v].clone(),
        )?;
        let k = ((e.length * spec.points_per_unit_length).round() as usize).max(1);
        max_spacing = max_spacing.max(e.length / k as f64);
        for j in 0..=k {
            let base = seg.at(j as f64 / k as f64);
            let noise = ball_noise(&mut rng, dim, spec.noise_radius);
            let coords: Vec<f64> = base
                .coords()
                .iter()
                .zip(&noise)
                .map(|(c, n)| c + n)
                .collect();
            points.push(Point::new(coords)?);
        }
    }
    Ok(SampledCloud {
        cloud: PointCloud::new(points)?,
        certified_hausdorff: spec.noise_radius + max_spacing / 2.0,
    })
}

/// A named ground-truth graph with its known invariants.
#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: &'static str,
    pub graph: MetricGraph,
    pub beta_1: usize,
    pub diameter: f64,
}

fn polyline(points: Vec<Point>, close: bool) -> MetricGraph {
    let n = points.len();
    let mut pairs: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
    if close {
        pairs.push((n - 1, 0));
    }
    MetricGraph::embedded(points, &pairs).expect("fixture construction")
}

fn circle_points(center: (f64, f64), radius: f64, n: usize, phase: f64) -> Vec<Point> {
    (0..n)
        .map(|i| {
            let a = phase + 2.0 * std::f64::consts::PI * i as f64 / n as f64;
            Point::new(vec![center.0 + radius * a.cos(), center.1 + radius * a.sin()]).unwrap()
        })
        .collect()
}

pub fn circle_fixture(radius: f64, segments: usize) -> Fixture {
    let graph = polyline(circle_points((0.0, 0.0), radius, segments, 0.0), true);
    let diameter = graph.total_length() / 2.0;
    Fixture {
        name: "circle",
        graph,
        beta_1: 1,
        diameter,
    }
}

/// segment, circle, Y, theta, figure-eight.
pub fn standard_fixtures() -> Vec<Fixture> {
    let mut out = Vec::new();

    let segment = MetricGraph::embedded(
        vec![
            Point::new(vec![0.0, 0.0]).unwrap(),
            Point::new(vec![1.0, 0.0]).unwrap(),
        ],
        &[(0, 1)],
    )
    .unwrap();
    out.push(Fixture {
        name: "segment",
        graph: segment,
        beta_1: 0,
        diameter: 1.0,
    });

    out.push(circle_fixture(1.0, 40));

    // Y: three unit arms from the origin, each a single edge.
    let arm = |angle_deg: f64| {
        let a = angle_deg.to_radians();
        Point::new(vec![a.cos(), a.sin()]).unwrap()
    };
    let y = MetricGraph::embedded(
        vec![
            Point::new(vec![0.0, 0.0]).unwrap(),
            arm(90.0),
            arm(210.0),
            arm(330.0),
        ],
        &[(0, 1), (0, 2), (0, 3)],
    )
    .unwrap();
    out.push(Fixture {
        name: "y",
        graph: y,
        beta_1: 0,
        diameter: 2.0,
    });

    // Theta: chord plus upper and lower semicircular arcs between (-1, 0)
    // and (1, 0).
    {
        let arc_segments = 20;
        let mut pts = vec![
            Point::new(vec![-1.0, 0.0]).unwrap(),
            Point::new(vec![1.0, 0.0]).unwrap(),
        ];
        let mut pairs = vec![(0usize, 1usize)];
        for upper in [true, false] {
            let mut prev = 0;
            for k in 1..arc_segments {
                let a = std::f64::consts::PI * (1.0 - k as f64 / arc_segments as f64);
                let sign = if upper { 1.0 } else { -1.0 };
                pts.push(Point::new(vec![a.cos(), sign * a.sin()]).unwrap());
                let idx = pts.len() - 1;
                pairs.push((prev, idx));
                prev = idx;
            }
            pairs.push((prev, 1));
        }
        let graph = MetricGraph::embedded(pts, &pairs).unwrap();
        let diameter = graph.diameter().unwrap().value;
        out.push(Fixture {
            name: "theta",
            graph,
            beta_1: 2,
            diameter,
        });
    }

    // Figure eight: two unit-radius circles tangent at the origin, sharing
    // that vertex.
    {
        let n = 20;
        let left = circle_points((-1.0, 0.0), 1.0, n, 0.0);
        let right = circle_points((1.0, 0.0), 1.0, n, std::f64::consts::PI);
        let mut pts = vec![Point::new(vec![0.0, 0.0]).unwrap()];
        let mut pairs = Vec::new();
        for ring in [left, right] {
            // ring[0] is the tangent point; reuse vertex 0 for it.
            let mut prev = 0usize;
            for p in ring.into_iter().skip(1) {
                pts.push(p);
                let idx = pts.len() - 1;
                pairs.push((prev, idx));
                prev = idx;
            }
            pairs.push((prev, 0));
        }
        let graph = MetricGraph::embedded(pts, &pairs).unwrap();
        let diameter = graph.diameter().unwrap().value;
        out.push(Fixture {
            name: "figure-eight",
            graph,
            beta_1: 2,
            diameter,
        });
    }

    out
}

pub fn fixture_by_name(name: &str) -> Option<Fixture> {
    standard_fixtures().into_iter().find(|f| f.name == name)
}
