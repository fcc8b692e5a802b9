//! Acceptance gate: one test per criterion, each printing a pass/fail line.
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use std::time::Instant;

use graphrecon::geometry::{Point, PointCloud};
use graphrecon::gh::{
    annulus_component_diameter, check_eps_r_approx, gh_bruteforce, theorem_bound, Correspondence,
    FiniteMetricSpace, GhBoundInputs,
};
use graphrecon::graph::{hausdorff_cloud_to_graph, Edge, MetricGraph};
use graphrecon::reeb::{build_alpha_reeb, filter_values, make_cover};
use graphrecon::rips::{build_rips, build_rips_bruteforce};
use graphrecon::synth::{circle_fixture, sample_graph, standard_fixtures, NoisySampleSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report(criterion: usize, pass: bool, detail: &str) {
    println!(
        "criterion {}: {} — {}",
        criterion,
        if pass { "PASS" } else { "FAIL" },
        detail
    );
    assert!(pass, "criterion {} failed: {}", criterion, detail);
}

fn reeb_beta1_of_sample(cloud: &PointCloud, eta: f64, alpha: f64) -> Option<usize> {
    let rips = build_rips(cloud, eta).ok()?;
    let (connected, _) = rips.connectivity();
    if !connected {
        return None;
    }
    let filter = filter_values(rips.graph(), 0).ok()?;
    let fmax = filter.iter().copied().fold(0.0, f64::max);
    let cover = make_cover(fmax, alpha).ok()?;
    let reeb = build_alpha_reeb(rips.graph(), 0, &cover).ok()?;
    Some(reeb.betti_1())
}

#[test]
fn criterion_1_topology_recovery() {
    let mut detail = String::new();
    let mut pass = true;
    for fixture in standard_fixtures() {
        let start = Instant::now();
        let diam = fixture.diameter;
        let eta = 0.05 * diam;
        let mut hits = 0;
        for seed in 0..20u64 {
            let spec = NoisySampleSpec {
                points_per_unit_length: 100.0 / diam,
                noise_radius: eta / 8.0,
                seed,
            };
            let sample = sample_graph(&fixture.graph, &spec).unwrap();
            if reeb_beta1_of_sample(&sample.cloud, eta, 0.1 * diam) == Some(fixture.beta_1) {
                hits += 1;
            }
        }
        let elapsed = start.elapsed().as_secs_f64();
        if hits < 19 || elapsed >= 10.0 {
            pass = false;
        }
        detail.push_str(&format!("{} {}/20 in {:.1}s; ", fixture.name, hits, elapsed));
    }
    report(1, pass, detail.trim_end_matches("; "));
}

#[test]
fn criterion_2_theorem_bound_holds() {
    let start = Instant::now();
    let circle = circle_fixture(1.0, 120);
    let mut violations = 0;
    let mut worst_margin = f64::INFINITY;
    for seed in 0..50u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rho = 0.05;
        let points: Vec<Point> = (0..12)
            .map(|i| {
                let a = 2.0 * std::f64::consts::PI * i as f64 / 12.0;
                let (dx, dy) = loop {
                    let dx = rng.gen_range(-rho..=rho);
                    let dy = rng.gen_range(-rho..=rho);
                    if dx * dx + dy * dy <= rho * rho {
                        break (dx, dy);
                    }
                };
                Point::new(vec![a.cos() + dx, a.sin() + dy]).unwrap()
            })
            .collect();
        let cloud = PointCloud::new(points).unwrap();
        // certified sample-to-circle Hausdorff: measured value plus the
        // discretization step of the graph side
        let h = hausdorff_cloud_to_graph(&cloud, &circle.graph, None).unwrap();
        let epsilon = h.value + h.step;
        let rips = build_rips(&cloud, 0.8).unwrap();
        let filter = filter_values(rips.graph(), 0).unwrap();
        let fmax = filter.iter().copied().fold(0.0, f64::max);
        let alpha = 0.8;
        let cover = make_cover(fmax, alpha).unwrap();
        let reeb = build_alpha_reeb(rips.graph(), 0, &cover).unwrap();
        let x = FiniteMetricSpace::from_graph(rips.graph()).unwrap();
        let y = FiniteMetricSpace::from_graph(&reeb.to_metric_graph().unwrap()).unwrap();
        let gh = gh_bruteforce(&x, &y).unwrap();
        let bound = theorem_bound(&GhBoundInputs {
            beta1: reeb.betti_1(),
            alpha,
            epsilon,
            r_cap: f64::INFINITY,
            m_diam: circle.diameter,
            edge_lengths: rips.graph().edges().iter().map(|e| e.length).collect(),
        });
        if gh > bound {
            violations += 1;
        }
        worst_margin = worst_margin.min(bound - gh);
    }
    let elapsed = start.elapsed().as_secs_f64();
    report(
        2,
        violations == 0 && elapsed < 60.0,
        &format!(
            "{} violations across 50 seeds, min margin {:.3}, {:.1}s",
            violations, worst_margin, elapsed
        ),
    );
}

#[test]
fn criterion_3_lemma_4_1_inequality() {
    let start = Instant::now();
    let mut violations = 0;
    for seed in 0..20u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // Y: a random cycle or path; X: the same graph with perturbed lengths.
        let n = rng.gen_range(8..20);
        let cyclic = rng.gen_bool(0.5);
        let mut y_edges = Vec::new();
        let mut x_edges = Vec::new();
        let limit = if cyclic { n } else { n - 1 };
        for i in 0..limit {
            let l = rng.gen_range(0.5..1.5);
            let bump = l * rng.gen_range(-0.05..0.05);
            y_edges.push(Edge { u: i, v: (i + 1) % n, length: l });
            x_edges.push(Edge { u: i, v: (i + 1) % n, length: l + bump });
        }
        let gy = MetricGraph::abstract_graph(n, y_edges).unwrap();
        let gx = MetricGraph::abstract_graph(n, x_edges).unwrap();
        // certified epsilon for the identity correspondence
        let mut max_diff: f64 = 0.0;
        for s in 0..n {
            let dy = gy.single_source_distances(s).unwrap();
            let dx = gx.single_source_distances(s).unwrap();
            for t in 0..n {
                max_diff = max_diff.max((dx[t] - dy[t]).abs());
            }
        }
        let epsilon = max_diff / 2.0;
        let m = gy.diameter().unwrap().value;
        let r = m;
        let alpha = 0.3 * m;
        let widened = alpha + (4.0 * m / r + 4.0) * epsilon;
        let tail = (4.0 * m / r + 2.0) * epsilon;
        for step in 0..5 {
            let d_center = m * step as f64 / 4.0;
            let dx = annulus_component_diameter(&gx, 0, d_center, alpha).unwrap();
            let dy = annulus_component_diameter(&gy, 0, d_center, widened).unwrap();
            if dx > dy + tail + 1e-12 {
                violations += 1;
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    report(
        3,
        violations == 0 && elapsed < 30.0,
        &format!("{} violations across 20 fixtures x 5 bands, {:.1}s", violations, elapsed),
    );
}

#[test]
fn criterion_4_lemma_3_2_hypothesis() {
    let start = Instant::now();
    let circle = circle_fixture(1.0, 200);
    let eta = 1.0;
    let r = 2.0;
    // sampling-condition side: restricted distortion within the 4/3 budget
    let delta = circle
        .graph
        .restricted_distortion(eta, r, eta / 4.0)
        .unwrap()
        .value;
    assert!(delta <= 4.0 / 3.0, "distortion {} exceeds 4/3", delta);
    let y = FiniteMetricSpace::from_graph(&circle.graph).unwrap();
    let mut violations = 0;
    for seed in 0..20u64 {
        let spec = NoisySampleSpec {
            points_per_unit_length: 20.0,
            noise_radius: 0.1,
            seed,
        };
        let sample = sample_graph(&circle.graph, &spec).unwrap();
        assert!(
            sample.certified_hausdorff < eta / 4.0,
            "sample not within eta/4"
        );
        let rips = build_rips(&sample.cloud, eta).unwrap();
        let x = FiniteMetricSpace::from_graph(rips.graph()).unwrap();
        // natural nearest-point correspondence, both directions
        let mut pairs = Vec::new();
        for (i, p) in sample.cloud.iter().enumerate() {
            let j = circle
                .graph
                .vertices()
                .iter()
                .enumerate()
                .min_by(|(_, a), (_, b)| {
                    graphrecon::euclidean_distance(p, a)
                        .unwrap()
                        .partial_cmp(&graphrecon::euclidean_distance(p, b).unwrap())
                        .unwrap()
                })
                .map(|(j, _)| j)
                .unwrap();
            pairs.push((i, j));
        }
        for (j, q) in circle.graph.vertices().iter().enumerate() {
            let i = sample
                .cloud
                .iter()
                .enumerate()
                .min_by(|(_, a), (_, b)| {
                    graphrecon::euclidean_distance(q, a)
                        .unwrap()
                        .partial_cmp(&graphrecon::euclidean_distance(q, b).unwrap())
                        .unwrap()
                })
                .map(|(i, _)| i)
                .unwrap();
            pairs.push((i, j));
        }
        let c = Correspondence { pairs };
        let (ok, _) = check_eps_r_approx(&x, &y, &c, r / 2.0, r).unwrap();
        if !ok {
            violations += 1;
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    report(
        4,
        violations == 0,
        &format!(
            "distortion {:.4} <= 4/3, {} violations across 20 seeds, {:.1}s",
            delta, violations, elapsed
        ),
    );
}

#[test]
fn criterion_5_distortion_monotonicity() {
    let start = Instant::now();
    let circle = circle_fixture(1.0, 120);
    let step = 0.05;
    let etas = [0.3, 0.8, 1.6];
    let rs = [0.5, 1.5, 2.5];
    let mut grid = [[0.0; 3]; 3];
    for (i, &eta) in etas.iter().enumerate() {
        for (j, &r) in rs.iter().enumerate() {
            grid[i][j] = circle
                .graph
                .restricted_distortion(eta, r, step)
                .unwrap()
                .value;
        }
    }
    let tol = 2.0 * step;
    let mono_eta = (0..3).all(|j| (1..3).all(|i| grid[i][j] + tol >= grid[i - 1][j]));
    let mono_r = (0..3).all(|i| (1..3).all(|j| grid[i][j] <= grid[i][j - 1] + tol));
    let elapsed = start.elapsed().as_secs_f64();
    report(
        5,
        mono_eta && mono_r && elapsed < 20.0,
        &format!(
            "eta-monotone {}, r-monotone {}, {:.1}s",
            mono_eta, mono_r, elapsed
        ),
    );
}

#[test]
fn criterion_6_rips_oracle_equivalence() {
    let start = Instant::now();
    let mut checked = 0usize;
    for seed in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = if seed == 0 {
            2000
        } else {
            rng.gen_range(10..=300)
        };
        let dim = rng.gen_range(1..=3);
        let points: Vec<Point> = (0..n)
            .map(|_| {
                Point::new((0..dim).map(|_| rng.gen_range(-10.0..10.0)).collect()).unwrap()
            })
            .collect();
        let cloud = PointCloud::new(points).unwrap();
        let eta = rng.gen_range(0.2..3.0);
        let grid = build_rips(&cloud, eta).unwrap();
        let brute = build_rips_bruteforce(&cloud, eta).unwrap();
        let key = |g: &MetricGraph| -> Vec<(usize, usize, u64)> {
            g.edges()
                .iter()
                .map(|e| (e.u, e.v, e.length.to_bits()))
                .collect()
        };
        assert_eq!(key(grid.graph()), key(brute.graph()), "seed {}", seed);
        checked += 1;
    }
    let elapsed = start.elapsed().as_secs_f64();
    report(
        6,
        checked == 100,
        &format!("{} clouds bit-exact (one at n = 2000), {:.1}s", checked, elapsed),
    );
}

#[test]
fn criterion_7_gh_oracle_sanity() {
    let point = FiniteMetricSpace::from_matrix(1, vec![0.0]).unwrap();
    let mut pass = true;
    let mut detail = String::new();
    // d_GH to a point is half the diameter, exactly
    for seed in 0..20u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(2..=5);
        let points: Vec<Point> = (0..n)
            .map(|_| Point::new(vec![rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)]).unwrap())
            .collect();
        let x = FiniteMetricSpace::from_cloud(&PointCloud::new(points).unwrap());
        let gh = gh_bruteforce(&x, &point).unwrap();
        if gh != x.diameter() / 2.0 {
            pass = false;
        }
    }
    // symmetry and zero-iff-isometric on random tiny pairs
    let mut asymmetries = 0;
    let mut zero_mismatches = 0;
    for seed in 100..150u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let make = |rng: &mut ChaCha8Rng| {
            let n = rng.gen_range(2..=4);
            let pts: Vec<Point> = (0..n)
                .map(|_| {
                    Point::new(vec![rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)]).unwrap()
                })
                .collect();
            FiniteMetricSpace::from_cloud(&PointCloud::new(pts).unwrap())
        };
        let x = make(&mut rng);
        let y = make(&mut rng);
        let xy = gh_bruteforce(&x, &y).unwrap();
        let yx = gh_bruteforce(&y, &x).unwrap();
        if xy != yx {
            asymmetries += 1;
        }
        // relabeled copy of x is isometric: distance must be exactly zero
        let n = x.len();
        let perm: Vec<usize> = (0..n).rev().collect();
        let relabeled = FiniteMetricSpace::from_matrix(
            n,
            (0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .map(|(i, j)| x.dist(perm[i], perm[j]))
                .collect(),
        )
        .unwrap();
        if gh_bruteforce(&x, &relabeled).unwrap() != 0.0 {
            zero_mismatches += 1;
        }
        // different sorted distance multisets certify non-isometry
        let multiset = |s: &FiniteMetricSpace| {
            let mut v: Vec<u64> = (0..s.len())
                .flat_map(|i| (0..s.len()).map(move |j| (i, j)))
                .filter(|&(i, j)| i < j)
                .map(|(i, j)| s.dist(i, j).to_bits())
                .collect();
            v.sort_unstable();
            v
        };
        if x.len() != y.len() || multiset(&x) != multiset(&y) {
            if xy == 0.0 {
                zero_mismatches += 1;
            }
        }
    }
    if asymmetries > 0 || zero_mismatches > 0 {
        pass = false;
    }
    detail.push_str(&format!(
        "point distance exact, {} asymmetries, {} zero/isometry mismatches across 50 pairs",
        asymmetries, zero_mismatches
    ));
    report(7, pass, &detail);
}

#[test]
fn criterion_8_geo_pipeline_end_to_end() {
    let start = Instant::now();
    let data = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data");
    let catalog = data.join("south_america_catalog.csv");
    let slab = data.join("slab2_100km_contour.csv");
    let bin = env!("CARGO_BIN_EXE_graphrecon");
    let tmp = std::env::temp_dir();
    let out_a = tmp.join("acceptance_recon_a.geojson");
    let out_b = tmp.join("acceptance_recon_b.geojson");
    let diag = tmp.join("acceptance_diag.csv");

    let reconstruct = |out: &std::path::Path| {
        let status = std::process::Command::new(bin)
            .args([
                "reconstruct",
                "--input",
                catalog.to_str().unwrap(),
                "--min-depth",
                "60",
                "--min-mag",
                "4",
                "--slice-start",
                "90",
                "--slice-width",
                "20",
                "--only-slice",
                "90",
                "--eta",
                "50",
                "--alpha",
                "100",
                "--sigma",
                "20",
                "--seed",
                "11",
                "--output",
                out.to_str().unwrap(),
                "--diagnostics",
                diag.to_str().unwrap(),
            ])
            .stderr(std::process::Stdio::null())
            .status()
            .unwrap();
        assert!(status.success(), "reconstruct failed");
    };
    reconstruct(&out_a);
    reconstruct(&out_b);
    let bytes_a = std::fs::read(&out_a).unwrap();
    let bytes_b = std::fs::read(&out_b).unwrap();
    let deterministic = bytes_a == bytes_b;

    let diag_text = std::fs::read_to_string(&diag).unwrap();
    let row = diag_text.lines().nth(1).expect("diagnostics row");
    let cols: Vec<&str> = row.split(',').collect();
    let n_components: usize = cols[3].parse().unwrap();
    let connected_principal = n_components >= 1 && !diag_text.is_empty();

    let output = std::process::Command::new(bin)
        .args([
            "compare",
            "--recon",
            out_a.to_str().unwrap(),
            "--slab",
            slab.to_str().unwrap(),
            "--depth",
            "100",
        ])
        .output()
        .unwrap();
    assert!(output.status.success(), "compare failed");
    let stdout = String::from_utf8(output.stdout).unwrap();
    let field = |name: &str| -> f64 {
        stdout
            .lines()
            .find(|l| l.starts_with(name))
            .and_then(|l| l.split(',').nth(1))
            .and_then(|v| v.parse().ok())
            .unwrap_or(f64::NAN)
    };
    let hausdorff = field("hausdorff_km");
    let ratio = field("length_ratio");
    let elapsed = start.elapsed().as_secs_f64();
    report(
        8,
        deterministic && connected_principal && hausdorff.is_finite() && ratio < 1.0 && elapsed < 60.0,
        &format!(
            "byte-identical {}, hausdorff {:.1} km, length ratio {:.3}, {:.1}s",
            deterministic, hausdorff, ratio, elapsed
        ),
    );
}
