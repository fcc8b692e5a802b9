//! Command-line front end: reconstruct slab contours from an earthquake
//! catalog, compare reconstructions to benchmark contours, export synthetic
//! samples, and run the verification suites.
//!
//! Exit codes: 0 success, 2 validation error, 3 I/O error, 4 degenerate data.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use graphrecon::geo::{
    compare_to_slab, ingest_catalog, project_local, read_slab_contours, reconstruct_slice,
    render_geojson, parse_recon_geojson, slice_by_depth, slice_to_output, BasepointChoice,
    Origin, ReconstructionParams, SliceOutput,
};
use graphrecon::synth::{fixture_by_name, sample_graph, NoisySampleSpec};
use graphrecon::Error;

#[derive(Parser)]
#[command(name = "graphrecon", version, about = "Metric-graph reconstruction of slab contours")]
struct Cli {
    /// Worker threads for slice processing (0 = auto).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Log more detail to standard error.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reconstruct per-depth-slice contours from a hypocenter catalog.
    Reconstruct {
        /// Catalog CSV with time, latitude, longitude, depth, mag columns.
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 60.0)]
        min_depth: f64,
        #[arg(long, default_value_t = 4.0)]
        min_mag: f64,
        #[arg(long, default_value_t = 60.0)]
        slice_start: f64,
        #[arg(long, default_value_t = 20.0)]
        slice_width: f64,
        /// Rips scale, km.
        #[arg(long)]
        eta: f64,
        /// Reeb interval length, km.
        #[arg(long)]
        alpha: f64,
        /// Smoothing bandwidth, km (must be < alpha/4).
        #[arg(long)]
        sigma: f64,
        #[arg(long, default_value_t = 0.5)]
        overlap: f64,
        /// Explicit basepoint vertex index.
        #[arg(long, conflicts_with = "seed")]
        base_index: Option<usize>,
        /// Seed for random basepoint selection.
        #[arg(long)]
        seed: Option<u64>,
        /// Only reconstruct the single slice starting at this depth.
        #[arg(long)]
        only_slice: Option<f64>,
        /// Reporting epsilon for the reconstruction bound.
        #[arg(long, default_value_t = 0.0)]
        epsilon: f64,
        /// Reporting R for the reconstruction bound (infinite if omitted).
        #[arg(long)]
        r_cap: Option<f64>,
        /// Output GeoJSON path.
        #[arg(long)]
        output: PathBuf,
        /// Optional diagnostics CSV path.
        #[arg(long)]
        diagnostics: Option<PathBuf>,
        /// Optional benchmark contour file for the diagnostics column.
        #[arg(long)]
        slab: Option<PathBuf>,
    },
    /// Compare a reconstruction GeoJSON against a benchmark contour.
    Compare {
        #[arg(long)]
        recon: PathBuf,
        #[arg(long)]
        slab: PathBuf,
        /// Contour depth to compare against, km.
        #[arg(long)]
        depth: f64,
    },
    /// Sample a synthetic fixture to a point-cloud file.
    Synth {
        /// Fixture name: segment, circle, y, theta, figure-eight.
        #[arg(long)]
        fixture: String,
        /// Noise radius.
        #[arg(long, default_value_t = 0.0)]
        rho: f64,
        /// Target arc-length spacing between samples.
        #[arg(long)]
        spacing: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output path; standard output if omitted.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run a verification suite: bounds, distortion, or topology.
    Verify { suite: String },
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Io(_) | Error::Csv(_) | Error::Json(_) => 3,
        Error::DegenerateData(_) | Error::RipsDisconnected { .. } => 4,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(()) => 0,
        Err(RunError::Lib(e)) => {
            eprintln!("error: {}", e);
            exit_code_for(&e)
        }
        Err(RunError::Validation(msg)) => {
            eprintln!("error: {}", msg);
            2
        }
        Err(RunError::Io(msg)) => {
            eprintln!("error: {}", msg);
            3
        }
        Err(RunError::Failed) => 1,
    };
    ExitCode::from(code)
}

enum RunError {
    Lib(Error),
    Validation(String),
    Io(String),
    /// A verify suite reported failures.
    Failed,
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        RunError::Lib(e)
    }
}

fn run(cli: Cli) -> Result<(), RunError> {
    match cli.command {
        Command::Reconstruct {
            input,
            min_depth,
            min_mag,
            slice_start,
            slice_width,
            eta,
            alpha,
            sigma,
            overlap,
            base_index,
            seed,
            only_slice,
            epsilon,
            r_cap,
            output,
            diagnostics,
            slab,
        } => {
            if sigma >= alpha / 4.0 {
                return Err(RunError::Validation(format!(
                    "sigma = {} must be smaller than alpha/4 = {} (smoothing rule sigma < alpha/4)",
                    sigma,
                    alpha / 4.0
                )));
            }
            if eta <= 0.0 {
                return Err(RunError::Validation("eta must be positive".into()));
            }
            if slice_width <= 0.0 {
                return Err(RunError::Validation("slice width must be positive".into()));
            }
            let basepoint = match (base_index, seed) {
                (Some(k), _) => BasepointChoice::Index(k),
                (None, Some(s)) => BasepointChoice::Seeded(s),
                (None, None) => BasepointChoice::MinIndex,
            };
            let params = ReconstructionParams {
                eta,
                alpha,
                sigma,
                overlap,
                basepoint,
                epsilon,
                r_cap: r_cap.unwrap_or(f64::INFINITY),
                ..Default::default()
            };
            reconstruct_cmd(
                &input,
                min_depth,
                min_mag,
                slice_start,
                slice_width,
                only_slice,
                &params,
                &output,
                diagnostics.as_deref(),
                slab.as_deref(),
                cli.verbose,
            )
        }
        Command::Compare { recon, slab, depth } => compare_cmd(&recon, &slab, depth),
        Command::Synth {
            fixture,
            rho,
            spacing,
            seed,
            output,
        } => synth_cmd(&fixture, rho, spacing, seed, output.as_deref()),
        Command::Verify { suite } => verify_cmd(&suite),
    }
}

#[allow(clippy::too_many_arguments)]
fn reconstruct_cmd(
    input: &std::path::Path,
    min_depth: f64,
    min_mag: f64,
    slice_start: f64,
    slice_width: f64,
    only_slice: Option<f64>,
    params: &ReconstructionParams,
    output: &std::path::Path,
    diagnostics: Option<&std::path::Path>,
    slab: Option<&std::path::Path>,
    verbose: u8,
) -> Result<(), RunError> {
    let report = ingest_catalog(input, min_depth, min_mag)?;
    eprintln!(
        "ingested {} records ({} filtered, {} malformed)",
        report.records.len(),
        report.filtered,
        report.malformed
    );
    if report.records.is_empty() {
        return Err(RunError::Lib(Error::DegenerateData(
            "no records pass the depth/magnitude filters".into(),
        )));
    }
    let origin = Origin::centroid(&report.records)?;
    let slices = slice_by_depth(&report.records, slice_start, slice_width)?;
    let slab_contours = match slab {
        Some(path) => Some(read_slab_contours(path)?),
        None => None,
    };

    let mut outputs: Vec<SliceOutput> = Vec::new();
    let mut diag_lines = vec![
        "slice_lo,slice_hi,n_points,n_components,beta1,bound,hausdorff_to_slab_km".to_string(),
    ];
    for slice in &slices {
        if let Some(lo) = only_slice {
            if (slice.lo - lo).abs() > 1e-9 {
                continue;
            }
        }
        let cloud = project_local(&slice.records, &origin)?;
        match reconstruct_slice(&cloud, params) {
            Ok(recon) => {
                let d = &recon.diagnostics;
                if verbose > 0 {
                    eprintln!(
                        "slice [{}, {}): {} points, {} components, beta1 = {}",
                        slice.lo, slice.hi, d.n_points, d.n_components, d.beta1
                    );
                }
                let hausdorff = slab_contours
                    .as_ref()
                    .and_then(|contours| {
                        let mid = (slice.lo + slice.hi) / 2.0;
                        contours.iter().min_by(|a, b| {
                            (a.depth - mid)
                                .abs()
                                .partial_cmp(&(b.depth - mid).abs())
                                .unwrap()
                        })
                    })
                    .map(|contour| {
                        let out = slice_to_output(slice.lo, slice.hi, &recon, &origin);
                        let recon_km = projected_features(&out, &origin);
                        let contour_km: Vec<Vec<[f64; 2]>> = contour
                            .polylines
                            .iter()
                            .map(|pl| {
                                pl.iter().map(|&(lon, lat)| origin.project(lat, lon)).collect()
                            })
                            .collect();
                        compare_to_slab(&recon_km, &contour_km).map(|c| c.hausdorff_km)
                    })
                    .transpose()?;
                diag_lines.push(format!(
                    "{},{},{},{},{},{:.6},{}",
                    slice.lo,
                    slice.hi,
                    d.n_points,
                    d.n_components,
                    d.beta1,
                    d.bound,
                    hausdorff.map(|h| format!("{:.3}", h)).unwrap_or_default()
                ));
                outputs.push(slice_to_output(slice.lo, slice.hi, &recon, &origin));
            }
            Err(Error::DegenerateData(msg)) => {
                eprintln!("slice [{}, {}) skipped: {}", slice.lo, slice.hi, msg);
            }
            Err(e) => return Err(e.into()),
        }
    }
    if outputs.is_empty() {
        return Err(RunError::Lib(Error::DegenerateData(
            "no slice produced a reconstruction".into(),
        )));
    }
    let geojson = render_geojson(&outputs, &origin, params);
    std::fs::write(output, geojson).map_err(|e| RunError::Io(format!("{}: {}", output.display(), e)))?;
    eprintln!("wrote {} ({} slices)", output.display(), outputs.len());
    if let Some(path) = diagnostics {
        std::fs::write(path, diag_lines.join("\n") + "\n")
            .map_err(|e| RunError::Io(format!("{}: {}", path.display(), e)))?;
    }
    Ok(())
}

fn projected_features(out: &SliceOutput, origin: &Origin) -> Vec<Vec<[f64; 2]>> {
    out.features
        .iter()
        .map(|(_, pl)| pl.iter().map(|&(lon, lat)| origin.project(lat, lon)).collect())
        .collect()
}

fn compare_cmd(recon: &std::path::Path, slab: &std::path::Path, depth: f64) -> Result<(), RunError> {
    let text = std::fs::read_to_string(recon)
        .map_err(|e| RunError::Io(format!("{}: {}", recon.display(), e)))?;
    let parsed = parse_recon_geojson(&text)?;
    let contours = read_slab_contours(slab)?;
    if contours.is_empty() {
        return Err(RunError::Io(format!(
            "{}: no contour polylines found",
            slab.display()
        )));
    }
    let contour = contours
        .iter()
        .min_by(|a, b| {
            (a.depth - depth)
                .abs()
                .partial_cmp(&(b.depth - depth).abs())
                .unwrap()
        })
        .unwrap();
    if (contour.depth - depth).abs() > 1e-6 {
        eprintln!(
            "note: no contour at exactly {} km; using nearest at {} km",
            depth, contour.depth
        );
    }
    let origin = parsed.origin;
    let recon_km: Vec<Vec<[f64; 2]>> = parsed
        .polylines
        .iter()
        .map(|pl| pl.iter().map(|&(lon, lat)| origin.project(lat, lon)).collect())
        .collect();
    let contour_km: Vec<Vec<[f64; 2]>> = contour
        .polylines
        .iter()
        .map(|pl| pl.iter().map(|&(lon, lat)| origin.project(lat, lon)).collect())
        .collect();
    let report = compare_to_slab(&recon_km, &contour_km)?;
    println!("hausdorff_km,{:.3}", report.hausdorff_km);
    println!("recon_to_contour_km,{:.3}", report.recon_to_contour_km);
    println!("contour_to_recon_km,{:.3}", report.contour_to_recon_km);
    println!("recon_length_km,{:.3}", report.recon_length_km);
    println!("contour_length_km,{:.3}", report.contour_length_km);
    println!("length_ratio,{:.4}", report.length_ratio());
    Ok(())
}

fn synth_cmd(
    fixture: &str,
    rho: f64,
    spacing: f64,
    seed: u64,
    output: Option<&std::path::Path>,
) -> Result<(), RunError> {
    let fix = fixture_by_name(fixture).ok_or_else(|| {
        RunError::Validation(format!(
            "unknown fixture '{}'; expected segment, circle, y, theta, or figure-eight",
            fixture
        ))
    })?;
    if spacing <= 0.0 {
        return Err(RunError::Validation("spacing must be positive".into()));
    }
    let spec = NoisySampleSpec {
        points_per_unit_length: 1.0 / spacing,
        noise_radius: rho,
        seed,
    };
    let sample = sample_graph(&fix.graph, &spec)?;
    let mut text = String::new();
    for p in sample.cloud.iter() {
        let coords: Vec<String> = p.coords().iter().map(|c| format!("{:.9}", c)).collect();
        text.push_str(&coords.join(" "));
        text.push('\n');
    }
    match output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| RunError::Io(format!("{}: {}", path.display(), e)))?,
        None => print!("{}", text),
    }
    eprintln!(
        "{}: {} points, certified hausdorff {:.6}",
        fix.name,
        sample.cloud.len(),
        sample.certified_hausdorff
    );
    Ok(())
}

fn verify_cmd(suite: &str) -> Result<(), RunError> {
    let results = match suite {
        "topology" => verify_topology()?,
        "distortion" => verify_distortion()?,
        "bounds" => verify_bounds()?,
        other => {
            return Err(RunError::Validation(format!(
                "unknown suite '{}'; expected bounds, distortion, or topology",
                other
            )))
        }
    };
    let mut all_pass = true;
    for (name, pass, detail) in &results {
        println!("{}\t{}\t{}", name, if *pass { "pass" } else { "FAIL" }, detail);
        all_pass &= *pass;
    }
    if all_pass {
        Ok(())
    } else {
        Err(RunError::Failed)
    }
}

/// Per-fixture Betti-number recovery from a seeded noisy sample.
fn verify_topology() -> Result<Vec<(String, bool, String)>, RunError> {
    use graphrecon::reeb::{build_alpha_reeb, filter_values, make_cover};
    use graphrecon::rips::build_rips;
    let mut rows = Vec::new();
    for fix in graphrecon::synth::standard_fixtures() {
        let diam = fix.diameter;
        let spec = NoisySampleSpec {
            points_per_unit_length: 100.0 / diam,
            noise_radius: 0.05 * diam / 8.0,
            seed: 7,
        };
        let sample = sample_graph(&fix.graph, &spec)?;
        let rips = build_rips(&sample.cloud, 0.05 * diam)?;
        let filter = filter_values(rips.graph(), 0)?;
        let fmax = filter.iter().copied().fold(0.0, f64::max);
        let cover = make_cover(fmax, 0.1 * diam)?;
        let reeb = build_alpha_reeb(rips.graph(), 0, &cover)?;
        let got = reeb.betti_1();
        rows.push((
            fix.name.to_string(),
            got == fix.beta_1,
            format!("beta1 {} expected {}", got, fix.beta_1),
        ));
    }
    Ok(rows)
}

/// Monotonicity of the restricted distortion on the unit circle.
fn verify_distortion() -> Result<Vec<(String, bool, String)>, RunError> {
    let circle = graphrecon::synth::circle_fixture(1.0, 120);
    let step = 0.05;
    let etas = [0.3, 0.8, 1.6];
    let rs = [0.5, 1.5, 2.5];
    let mut grid = [[0.0; 3]; 3];
    for (i, &eta) in etas.iter().enumerate() {
        for (j, &r) in rs.iter().enumerate() {
            grid[i][j] = circle.graph.restricted_distortion(eta, r, step)?.value;
        }
    }
    let tol = 2.0 * step;
    let mono_eta = (0..3).all(|j| (1..3).all(|i| grid[i][j] + tol >= grid[i - 1][j]));
    let mono_r = (0..3).all(|i| (1..3).all(|j| grid[i][j] <= grid[i][j - 1] + tol));
    Ok(vec![
        (
            "circle eta-monotone".into(),
            mono_eta,
            format!("grid col0 {:?}", [grid[0][0], grid[1][0], grid[2][0]]),
        ),
        (
            "circle r-monotone".into(),
            mono_r,
            format!("grid row0 {:?}", grid[0]),
        ),
    ])
}

/// Empirical reconstruction-bound check on a 12-point circle sample.
fn verify_bounds() -> Result<Vec<(String, bool, String)>, RunError> {
    use graphrecon::gh::{gh_bruteforce, theorem_bound, FiniteMetricSpace, GhBoundInputs};
    use graphrecon::graph::hausdorff_cloud_to_graph;
    use graphrecon::reeb::{build_alpha_reeb, filter_values, make_cover};
    use graphrecon::rips::build_rips;
    use rand::{Rng, SeedableRng};
    let circle = graphrecon::synth::circle_fixture(1.0, 60);
    let mut rows = Vec::new();
    for seed in [1u64, 2, 3] {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let rho = 0.05;
        let points: Vec<graphrecon::Point> = (0..12)
            .map(|i| {
                let a = 2.0 * std::f64::consts::PI * i as f64 / 12.0;
                let (dx, dy) = loop {
                    let dx = rng.gen_range(-rho..=rho);
                    let dy = rng.gen_range(-rho..=rho);
                    if dx * dx + dy * dy <= rho * rho {
                        break (dx, dy);
                    }
                };
                graphrecon::Point::new(vec![a.cos() + dx, a.sin() + dy]).unwrap()
            })
            .collect();
        let cloud = graphrecon::PointCloud::new(points)?;
        let epsilon = hausdorff_cloud_to_graph(&cloud, &circle.graph, None)?.value;
        let rips = build_rips(&cloud, 0.8)?;
        let filter = filter_values(rips.graph(), 0)?;
        let fmax = filter.iter().copied().fold(0.0, f64::max);
        let alpha = 0.8;
        let cover = make_cover(fmax, alpha)?;
        let reeb = build_alpha_reeb(rips.graph(), 0, &cover)?;
        let x = FiniteMetricSpace::from_graph(rips.graph())?;
        let y = FiniteMetricSpace::from_graph(&reeb.to_metric_graph()?)?;
        let gh = gh_bruteforce(&x, &y)?;
        let bound = theorem_bound(&GhBoundInputs {
            beta1: reeb.betti_1(),
            alpha,
            epsilon,
            r_cap: f64::INFINITY,
            m_diam: circle.diameter,
            edge_lengths: rips.graph().edges().iter().map(|e| e.length).collect(),
        });
        rows.push((
            format!("circle seed {}", seed),
            gh <= bound,
            format!("gh {:.4} bound {:.4} eps {:.4}", gh, bound, epsilon),
        ));
    }
    Ok(rows)
}
