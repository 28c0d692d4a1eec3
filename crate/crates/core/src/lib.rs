//! Rank diversity of N-grams across grammatical, temporal and spatial scales.
//!
//! The crate reads geolocated, timestamped short texts, tokenizes them,
//! ranks N-grams by frequency in every time bin, and measures how many
//! distinct N-grams pass through each rank. The resulting rank-diversity
//! curves are summarized by a fitted cumulative Gaussian on log rank, and
//! the fitted location `μ` is compared across scales.
//!
//! ```no_run
//! use rankdiv::config::RunConfig;
//! use rankdiv::pipeline::run_grid;
//!
//! let config = RunConfig::from_file("mexico.toml".as_ref())?;
//! let run = run_grid(&config)?;
//! println!("{} cells", run.cells.len());
//! # Ok::<(), rankdiv::error::Error>(())
//! ```

pub mod config;
pub mod error;
pub mod fit;
pub mod ingest;
pub mod pipeline;
pub mod plot;
pub mod rankdiv;
pub mod report;
pub mod scales;
pub mod special;
pub mod stats;
pub mod tokenize;
pub mod tokenstats;

pub use error::{Error, Result};

/// Engine version recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
