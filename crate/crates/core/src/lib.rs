//! Batch toolkit for forensic (post-mortem) iris image analysis.
//!
//! The crate covers the full non-generative half of a forensic iris pipeline:
//!
//! 1. **pmi** – manifest ingestion and post-mortem-interval class binning.
//! 2. **segmentation** – pupil/iris boundary localisation (intensity-gradient
//!    circular search) and occlusion masking, or ingestion of external
//!    segmentation sidecars.
//! 3. **normalization** – rubber-sheet mapping of the iris annulus onto a
//!    fixed polar grid together with an aligned validity mask.
//! 4. **quality** – the twelve ISO/IEC 29794-6 style image quality metrics
//!    with the 255 uncomputable sentinel.
//! 5. **encoder** – ICA-learned binarized filter banks and bit-packed iris
//!    codes.
//! 6. **matcher** – masked fractional Hamming distance with rotation
//!    compensation and batch pairwise scoring.
//! 7. **calibration** – latent-perturbation policies and selection of the
//!    same-identity hypersphere radius by genuine-score distribution
//!    alignment.
//! 8. **stats / report** – ECDFs, histograms, d-prime, per-class
//!    partitioning and CSV/SVG report emission.
//!
//! All operations are deterministic for fixed seeds and safe to call from
//! multiple threads.

pub mod calibration;
pub mod encoder;
pub mod error;
pub mod matcher;
pub mod normalization;
pub mod pmi;
pub mod quality;
pub mod raster;
pub mod render;
pub mod report;
pub mod segmentation;
pub mod stats;

pub use error::{Error, Result};
pub use raster::{IrisImage, Mask};
