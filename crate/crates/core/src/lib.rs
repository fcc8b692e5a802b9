//! Metric-graph reconstruction from noisy Euclidean samples.
//!
//! Builds Vietoris–Rips graphs over point clouds, collapses them to
//! alpha-Reeb quotient graphs, smooths the quotient back into the ambient
//! space, and quantifies reconstruction quality with Gromov–Hausdorff
//! machinery. A geospatial layer applies the pipeline to earthquake
//! hypocenter catalogs, reconstructing constant-depth slab contours.

pub mod error;
pub mod geo;
pub mod geometry;
pub mod gh;
pub mod graph;
pub mod reeb;
pub mod rips;
pub mod smoothing;
pub mod synth;

pub use error::{Error, Result};
pub use geometry::{euclidean_distance, hausdorff_distance, Point, PointCloud, Segment};
pub use graph::{Edge, GraphMode, MetricGraph};
pub use reeb::{build_alpha_reeb, make_cover, AlphaReebGraph, IntervalCover};
pub use rips::{build_rips, build_rips_bruteforce, RipsGraph};
