//! Earthquake catalog ingestion, local geodetic projection, depth slicing,
//! per-slice reconstruction, contour comparison, and GeoJSON emission.

use std::io::Read;
use std::path::Path;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{Point, PointCloud};
use crate::gh::{theorem_bound, GhBoundInputs};
use crate::reeb::{build_alpha_reeb, make_cover_with_overlap, AlphaReebGraph};
use crate::rips::build_rips;
use crate::smoothing::{embed_reeb, SmoothedEmbedding};

pub const EARTH_RADIUS_KM: f64 = 6371.0;

#[derive(Debug, Clone, PartialEq)]
pub struct HypocenterRecord {
    pub latitude: f64,
    pub longitude: f64,
    /// km, positive down.
    pub depth: f64,
    pub magnitude: f64,
    /// Opaque timestamp, preserved verbatim.
    pub time: String,
}

#[derive(Debug, Clone)]
pub struct IngestReport {
    pub records: Vec<HypocenterRecord>,
    /// Rows dropped by the depth / magnitude filters.
    pub filtered: usize,
    /// Rows that failed to parse or violated field ranges.
    pub malformed: usize,
}

/// Read a comma-separated catalog with header-named columns
/// `time, latitude, longitude, depth, mag` (extra columns ignored), keeping
/// records with depth >= min_depth and magnitude strictly > min_mag.
pub fn ingest_catalog(path: &Path, min_depth: f64, min_mag: f64) -> Result<IngestReport> {
    let file = std::fs::File::open(path)?;
    ingest_catalog_reader(file, min_depth, min_mag)
}

pub fn ingest_catalog_reader<R: Read>(
    reader: R,
    min_depth: f64,
    min_mag: f64,
) -> Result<IngestReport> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr.headers()?.clone();
    let col = |name: &str| -> Result<usize> {
        headers
            .iter()
            .position(|h| h.eq_ignore_ascii_case(name))
            .ok_or_else(|| Error::MissingColumn(name.to_string()))
    };
    let (c_time, c_lat, c_lon, c_depth, c_mag) = (
        col("time")?,
        col("latitude")?,
        col("longitude")?,
        col("depth")?,
        col("mag")?,
    );
    let mut records = Vec::new();
    let mut filtered = 0usize;
    let mut malformed = 0usize;
    for row in rdr.records() {
        let row = match row {
            Ok(r) => r,
            Err(_) => {
                malformed += 1;
                continue;
            }
        };
        let field = |i: usize| row.get(i).unwrap_or("");
        let parse = |i: usize| field(i).parse::<f64>();
        match (parse(c_lat), parse(c_lon), parse(c_depth), parse(c_mag)) {
            (Ok(latitude), Ok(longitude), Ok(depth), Ok(magnitude)) => {
                let in_range = (-90.0..=90.0).contains(&latitude)
                    && (-180.0..=180.0).contains(&longitude)
                    && depth.is_finite()
                    && depth >= 0.0
                    && magnitude.is_finite();
                if !in_range {
                    malformed += 1;
                } else if depth >= min_depth && magnitude > min_mag {
                    records.push(HypocenterRecord {
                        latitude,
                        longitude,
                        depth,
                        magnitude,
                        time: field(c_time).to_string(),
                    });
                } else {
                    filtered += 1;
                }
            }
            _ => malformed += 1,
        }
    }
    Ok(IngestReport {
        records,
        filtered,
        malformed,
    })
}

/// Projection origin in degrees.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Origin {
    pub latitude: f64,
    pub longitude: f64,
}

impl Origin {
    pub fn centroid(records: &[HypocenterRecord]) -> Result<Self> {
        if records.is_empty() {
            return Err(Error::EmptyInput("records"));
        }
        let n = records.len() as f64;
        Ok(Origin {
            latitude: records.iter().map(|r| r.latitude).sum::<f64>() / n,
            longitude: records.iter().map(|r| r.longitude).sum::<f64>() / n,
        })
    }

    /// Equirectangular local tangent projection to (x, y) in km.
    pub fn project(&self, latitude: f64, longitude: f64) -> [f64; 2] {
        let lat0 = self.latitude.to_radians();
        [
            EARTH_RADIUS_KM * lat0.cos() * (longitude - self.longitude).to_radians(),
            EARTH_RADIUS_KM * (latitude - self.latitude).to_radians(),
        ]
    }

    pub fn invert(&self, x: f64, y: f64) -> (f64, f64) {
        let lat0 = self.latitude.to_radians();
        (
            self.latitude + (y / EARTH_RADIUS_KM).to_degrees(),
            self.longitude + (x / (EARTH_RADIUS_KM * lat0.cos())).to_degrees(),
        )
    }
}

/// Project records to a 2D local Cartesian cloud (km). Rejects inputs
/// spanning more than 60 degrees of longitude, where the tangent
/// approximation breaks down.
pub fn project_local(records: &[HypocenterRecord], origin: &Origin) -> Result<PointCloud> {
    if records.is_empty() {
        return Err(Error::EmptyInput("records"));
    }
    let lon_min = records.iter().map(|r| r.longitude).fold(f64::INFINITY, f64::min);
    let lon_max = records
        .iter()
        .map(|r| r.longitude)
        .fold(f64::NEG_INFINITY, f64::max);
    if lon_max - lon_min > 60.0 {
        return Err(Error::InvalidParameter {
            name: "records",
            reason: format!("longitude span {:.1} deg exceeds 60", lon_max - lon_min),
        });
    }
    let points = records
        .iter()
        .map(|r| Point::new(origin.project(r.latitude, r.longitude).to_vec()))
        .collect::<Result<Vec<_>>>()?;
    PointCloud::new(points)
}

#[derive(Debug, Clone)]
pub struct DepthSlice {
    /// Half-open bin [lo, hi).
    pub lo: f64,
    pub hi: f64,
    pub records: Vec<HypocenterRecord>,
}

/// Half-open bins [start + k*width, start + (k+1)*width); empty bins omitted.
pub fn slice_by_depth(records: &[HypocenterRecord], start: f64, width: f64) -> Result<Vec<DepthSlice>> {
    if width <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "width",
            reason: "must be positive".into(),
        });
    }
    let mut bins: std::collections::BTreeMap<i64, Vec<HypocenterRecord>> =
        std::collections::BTreeMap::new();
    for r in records {
        if r.depth < start {
            continue;
        }
        let k = ((r.depth - start) / width).floor() as i64;
        bins.entry(k).or_default().push(r.clone());
    }
    Ok(bins
        .into_iter()
        .map(|(k, records)| DepthSlice {
            lo: start + k as f64 * width,
            hi: start + (k + 1) as f64 * width,
            records,
        })
        .collect())
}

#[derive(Debug, Clone, Copy)]
pub enum BasepointChoice {
    MinIndex,
    Index(usize),
    Seeded(u64),
}

#[derive(Debug, Clone)]
pub struct ReconstructionParams {
    /// Rips scale, km.
    pub eta: f64,
    /// Reeb interval length, km.
    pub alpha: f64,
    /// Smoothing bandwidth, km; must be < alpha / 4.
    pub sigma: f64,
    /// Cover overlap fraction.
    pub overlap: f64,
    pub samples_per_edge: usize,
    pub basepoint: BasepointChoice,
    /// Reporting inputs for the reconstruction bound.
    pub epsilon: f64,
    pub r_cap: f64,
}

impl Default for ReconstructionParams {
    fn default() -> Self {
        ReconstructionParams {
            eta: 50.0,
            alpha: 100.0,
            sigma: 20.0,
            overlap: 0.5,
            samples_per_edge: 16,
            basepoint: BasepointChoice::MinIndex,
            epsilon: 0.0,
            r_cap: f64::INFINITY,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SliceDiagnostics {
    pub n_points: usize,
    pub n_components: usize,
    pub largest_component: usize,
    pub beta1: usize,
    /// Reconstruction bound evaluated with the user-supplied epsilon and R,
    /// with the largest-component Rips graph standing in for the unknown
    /// ground truth (diameter by the certified upper envelope, census over
    /// its edges).
    pub bound: f64,
}

#[derive(Debug, Clone)]
pub struct SliceReconstruction {
    pub reeb: AlphaReebGraph,
    pub embedding: SmoothedEmbedding,
    /// Projected points of the largest Rips component, in input order.
    pub component_cloud: PointCloud,
    pub diagnostics: SliceDiagnostics,
}

/// Reconstruct one depth slice from its projected 2D cloud.
pub fn reconstruct_slice(
    cloud: &PointCloud,
    params: &ReconstructionParams,
) -> Result<SliceReconstruction> {
    if cloud.len() < 2 {
        return Err(Error::DegenerateData(format!(
            "slice has {} points, need at least 2",
            cloud.len()
        )));
    }
    if params.sigma >= params.alpha / 4.0 {
        return Err(Error::InvalidParameter {
            name: "sigma",
            reason: format!("must be < alpha/4 = {}", params.alpha / 4.0),
        });
    }
    let rips = build_rips(cloud, params.eta)?;
    let (_, n_components) = rips.connectivity();
    let component = rips.largest_component();
    if component.len() < 2 {
        return Err(Error::DegenerateData(format!(
            "largest Rips component has {} point(s); eta = {} too small",
            component.len(),
            params.eta
        )));
    }
    let sub_points: Vec<Point> = component.iter().map(|&i| cloud.point(i).clone()).collect();
    let sub_cloud = PointCloud::new(sub_points)?;
    let sub_rips = build_rips(&sub_cloud, params.eta)?;

    let base = match params.basepoint {
        BasepointChoice::MinIndex => 0,
        BasepointChoice::Index(k) => component
            .iter()
            .position(|&i| i == k)
            .ok_or_else(|| Error::InvalidParameter {
                name: "base-index",
                reason: format!("vertex {} is not in the largest component", k),
            })?,
        BasepointChoice::Seeded(seed) => {
            ChaCha8Rng::seed_from_u64(seed).gen_range(0..sub_cloud.len())
        }
    };
    let filter = crate::reeb::filter_values(sub_rips.graph(), base)?;
    let filter_max = filter.iter().copied().fold(0.0, f64::max);
    let cover = make_cover_with_overlap(filter_max, params.alpha, params.overlap)?;
    let reeb = build_alpha_reeb(sub_rips.graph(), base, &cover)?;
    let embedding = embed_reeb(&reeb, &sub_cloud, params.sigma, params.samples_per_edge)?;

    let m_diam = sub_rips.graph().diameter_upper_envelope()?.value;
    let bound = theorem_bound(&GhBoundInputs {
        beta1: reeb.betti_1(),
        alpha: params.alpha,
        epsilon: params.epsilon,
        r_cap: params.r_cap,
        m_diam,
        edge_lengths: sub_rips.graph().edges().iter().map(|e| e.length).collect(),
    });
    let diagnostics = SliceDiagnostics {
        n_points: cloud.len(),
        n_components,
        largest_component: sub_cloud.len(),
        beta1: reeb.betti_1(),
        bound,
    };
    Ok(SliceReconstruction {
        reeb,
        embedding,
        component_cloud: sub_cloud,
        diagnostics,
    })
}

/// One constant-depth contour as (longitude, latitude) polylines.
#[derive(Debug, Clone)]
pub struct SlabContour {
    pub depth: f64,
    pub polylines: Vec<Vec<(f64, f64)>>,
}

/// Read contours either as comma-separated `lon, lat, depth` rows with
/// blank-line-separated polylines, or as a GeoJSON FeatureCollection of
/// LineStrings carrying a `depth` property.
pub fn read_slab_contours(path: &Path) -> Result<Vec<SlabContour>> {
    let text = std::fs::read_to_string(path)?;
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') {
        return read_slab_geojson(&text);
    }
    read_slab_csv(&text)
}

fn read_slab_csv(text: &str) -> Result<Vec<SlabContour>> {
    let mut contours: std::collections::BTreeMap<i64, Vec<Vec<(f64, f64)>>> =
        std::collections::BTreeMap::new();
    let mut depth_of: std::collections::HashMap<i64, f64> = std::collections::HashMap::new();
    let mut current: Vec<(f64, f64)> = Vec::new();
    let mut current_depth: Option<f64> = None;
    let mut flush = |cur: &mut Vec<(f64, f64)>, depth: &mut Option<f64>| {
        if let (Some(d), true) = (*depth, cur.len() >= 2) {
            let key = (d * 1e6).round() as i64;
            depth_of.insert(key, d);
            contours.entry(key).or_default().push(std::mem::take(cur));
        } else {
            cur.clear();
        }
        *depth = None;
    };
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            flush(&mut current, &mut current_depth);
            continue;
        }
        if line.starts_with('#') || line.to_ascii_lowercase().starts_with("lon") {
            continue;
        }
        let parts: Vec<&str> = line.split(',').map(|s| s.trim()).collect();
        if parts.len() < 3 {
            return Err(Error::Parse {
                line: lineno + 1,
                message: "expected lon, lat, depth".into(),
            });
        }
        let nums: std::result::Result<Vec<f64>, _> =
            parts[..3].iter().map(|s| s.parse::<f64>()).collect();
        let nums = nums.map_err(|e| Error::Parse {
            line: lineno + 1,
            message: e.to_string(),
        })?;
        current.push((nums[0], nums[1]));
        current_depth = Some(nums[2]);
    }
    flush(&mut current, &mut current_depth);
    Ok(contours
        .into_iter()
        .map(|(key, polylines)| SlabContour {
            depth: depth_of[&key],
            polylines,
        })
        .collect())
}

fn read_slab_geojson(text: &str) -> Result<Vec<SlabContour>> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    let features = value["features"]
        .as_array()
        .ok_or_else(|| Error::Parse {
            line: 0,
            message: "missing features array".into(),
        })?;
    let mut contours: std::collections::BTreeMap<i64, SlabContour> =
        std::collections::BTreeMap::new();
    for f in features {
        if f["geometry"]["type"] != "LineString" {
            continue;
        }
        let depth = f["properties"]["depth"].as_f64().ok_or_else(|| Error::Parse {
            line: 0,
            message: "LineString feature without a depth property".into(),
        })?;
        let coords = f["geometry"]["coordinates"]
            .as_array()
            .ok_or_else(|| Error::Parse {
                line: 0,
                message: "missing coordinates".into(),
            })?;
        let mut polyline = Vec::new();
        for c in coords {
            let lon = c[0].as_f64();
            let lat = c[1].as_f64();
            match (lon, lat) {
                (Some(lon), Some(lat)) => polyline.push((lon, lat)),
                _ => {
                    return Err(Error::Parse {
                        line: 0,
                        message: "bad coordinate pair".into(),
                    })
                }
            }
        }
        if polyline.len() < 2 {
            continue;
        }
        let key = (depth * 1e6).round() as i64;
        contours
            .entry(key)
            .or_insert_with(|| SlabContour {
                depth,
                polylines: Vec::new(),
            })
            .polylines
            .push(polyline);
    }
    Ok(contours.into_values().collect())
}

fn polyline_length(pl: &[[f64; 2]]) -> f64 {
    pl.windows(2)
        .map(|w| ((w[0][0] - w[1][0]).powi(2) + (w[0][1] - w[1][1]).powi(2)).sqrt())
        .sum()
}

/// Vertices plus intermediate samples at most `spacing` apart.
fn densify(pl: &[[f64; 2]], spacing: f64) -> Vec<[f64; 2]> {
    let mut out = Vec::new();
    if pl.is_empty() {
        return out;
    }
    out.push(pl[0]);
    for w in pl.windows(2) {
        let len = ((w[0][0] - w[1][0]).powi(2) + (w[0][1] - w[1][1]).powi(2)).sqrt();
        let k = (len / spacing).ceil().max(1.0) as usize;
        for j in 1..=k {
            let t = j as f64 / k as f64;
            out.push([
                w[0][0] + t * (w[1][0] - w[0][0]),
                w[0][1] + t * (w[1][1] - w[0][1]),
            ]);
        }
    }
    out
}

fn point_to_polylines(p: [f64; 2], polylines: &[Vec<[f64; 2]>]) -> f64 {
    let mut best = f64::INFINITY;
    for pl in polylines {
        if pl.len() == 1 {
            best = best.min(((p[0] - pl[0][0]).powi(2) + (p[1] - pl[0][1]).powi(2)).sqrt());
            continue;
        }
        for w in pl.windows(2) {
            let (ax, ay, bx, by) = (w[0][0], w[0][1], w[1][0], w[1][1]);
            let (dx, dy) = (bx - ax, by - ay);
            let denom = dx * dx + dy * dy;
            let t = if denom == 0.0 {
                0.0
            } else {
                (((p[0] - ax) * dx + (p[1] - ay) * dy) / denom).clamp(0.0, 1.0)
            };
            let (qx, qy) = (ax + t * dx, ay + t * dy);
            best = best.min(((p[0] - qx).powi(2) + (p[1] - qy).powi(2)).sqrt());
        }
    }
    best
}

#[derive(Debug, Clone, Copy)]
pub struct SlabComparison {
    /// Symmetric Hausdorff distance, km.
    pub hausdorff_km: f64,
    pub recon_to_contour_km: f64,
    pub contour_to_recon_km: f64,
    pub recon_length_km: f64,
    pub contour_length_km: f64,
}

impl SlabComparison {
    pub fn length_ratio(&self) -> f64 {
        self.recon_length_km / self.contour_length_km
    }
}

/// Symmetric Hausdorff distance between reconstruction polylines and contour
/// polylines, both in the same local km frame, densified at <= 1 km.
pub fn compare_to_slab(
    recon: &[Vec<[f64; 2]>],
    contour: &[Vec<[f64; 2]>],
) -> Result<SlabComparison> {
    if recon.iter().all(|p| p.is_empty()) {
        return Err(Error::EmptyInput("reconstruction"));
    }
    if contour.iter().all(|p| p.is_empty()) {
        return Err(Error::EmptyInput("contour"));
    }
    let spacing = 1.0;
    let mut recon_to_contour: f64 = 0.0;
    for pl in recon {
        for p in densify(pl, spacing) {
            recon_to_contour = recon_to_contour.max(point_to_polylines(p, contour));
        }
    }
    let mut contour_to_recon: f64 = 0.0;
    for pl in contour {
        for p in densify(pl, spacing) {
            contour_to_recon = contour_to_recon.max(point_to_polylines(p, recon));
        }
    }
    Ok(SlabComparison {
        hausdorff_km: recon_to_contour.max(contour_to_recon),
        recon_to_contour_km: recon_to_contour,
        contour_to_recon_km: contour_to_recon,
        recon_length_km: recon.iter().map(|p| polyline_length(p)).sum(),
        contour_length_km: contour.iter().map(|p| polyline_length(p)).sum(),
    })
}

/// One reconstructed slice ready for GeoJSON emission.
#[derive(Debug, Clone)]
pub struct SliceOutput {
    pub lo: f64,
    pub hi: f64,
    pub beta1: usize,
    /// Per feature: Reeb node pair and its polyline in (lon, lat) degrees.
    pub features: Vec<((usize, usize), Vec<(f64, f64)>)>,
}

/// Deterministic GeoJSON FeatureCollection; coordinates printed with six
/// decimal places.
pub fn render_geojson(
    slices: &[SliceOutput],
    origin: &Origin,
    params: &ReconstructionParams,
) -> String {
    let mut out = String::new();
    out.push_str("{\"type\":\"FeatureCollection\",\"properties\":{");
    out.push_str(&format!(
        "\"origin_lat\":{:.6},\"origin_lon\":{:.6},\"eta_km\":{},\"alpha_km\":{},\"sigma_km\":{}",
        origin.latitude, origin.longitude, params.eta, params.alpha, params.sigma
    ));
    out.push_str("},\"features\":[");
    let mut first = true;
    for slice in slices {
        for ((a, b), polyline) in &slice.features {
            if !first {
                out.push(',');
            }
            first = false;
            out.push_str("{\"type\":\"Feature\",\"properties\":{");
            out.push_str(&format!(
                "\"slice_lo\":{},\"slice_hi\":{},\"beta1\":{},\"nodes\":[{},{}]",
                slice.lo, slice.hi, slice.beta1, a, b
            ));
            out.push_str("},\"geometry\":{\"type\":\"");
            if polyline.len() == 1 {
                out.push_str(&format!(
                    "Point\",\"coordinates\":[{:.6},{:.6}]",
                    polyline[0].0, polyline[0].1
                ));
            } else {
                out.push_str("LineString\",\"coordinates\":[");
                for (k, (lon, lat)) in polyline.iter().enumerate() {
                    if k > 0 {
                        out.push(',');
                    }
                    out.push_str(&format!("[{:.6},{:.6}]", lon, lat));
                }
                out.push(']');
            }
            out.push_str("}}");
        }
    }
    out.push_str("]}\n");
    out
}

pub fn slice_to_output(
    slice_lo: f64,
    slice_hi: f64,
    recon: &SliceReconstruction,
    origin: &Origin,
) -> SliceOutput {
    let features = recon
        .embedding
        .polylines
        .iter()
        .map(|pl| {
            let coords: Vec<(f64, f64)> = pl
                .points
                .iter()
                .map(|p| {
                    let (lat, lon) = origin.invert(p.coords()[0], p.coords()[1]);
                    (lon, lat)
                })
                .collect();
            (pl.nodes, coords)
        })
        .collect();
    SliceOutput {
        lo: slice_lo,
        hi: slice_hi,
        beta1: recon.diagnostics.beta1,
        features,
    }
}

/// Parsed reconstruction GeoJSON: origin and (lon, lat) polylines.
#[derive(Debug, Clone)]
pub struct ParsedRecon {
    pub origin: Origin,
    pub polylines: Vec<Vec<(f64, f64)>>,
}

pub fn parse_recon_geojson(text: &str) -> Result<ParsedRecon> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    let props = &value["properties"];
    let origin = Origin {
        latitude: props["origin_lat"].as_f64().ok_or_else(|| Error::Parse {
            line: 0,
            message: "missing origin_lat".into(),
        })?,
        longitude: props["origin_lon"].as_f64().ok_or_else(|| Error::Parse {
            line: 0,
            message: "missing origin_lon".into(),
        })?,
    };
    let mut polylines = Vec::new();
    for f in value["features"].as_array().into_iter().flatten() {
        let geom = &f["geometry"];
        match geom["type"].as_str() {
            Some("LineString") => {
                let coords = geom["coordinates"].as_array().cloned().unwrap_or_default();
                let pl: Vec<(f64, f64)> = coords
                    .iter()
                    .filter_map(|c| Some((c[0].as_f64()?, c[1].as_f64()?)))
                    .collect();
                if !pl.is_empty() {
                    polylines.push(pl);
                }
            }
            Some("Point") => {
                if let (Some(lon), Some(lat)) = (
                    geom["coordinates"][0].as_f64(),
                    geom["coordinates"][1].as_f64(),
                ) {
                    polylines.push(vec![(lon, lat)]);
                }
            }
            _ => {}
        }
    }
    Ok(ParsedRecon { origin, polylines })
}
