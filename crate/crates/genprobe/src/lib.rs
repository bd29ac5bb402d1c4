//! genprobe: a learner-agnostic toolkit for probing the generalization
//! behavior of image-generating models in low-dimensional feature spaces.
//!
//! The toolkit builds synthetic probe datasets (dots, pies, composed digit
//! images) with ground-truth manifests, measures features of generated
//! samples, and quantifies how a learned distribution differs from its
//! training distribution: impulse responses, convolution predictions,
//! prototype enhancement, feature independence, combination-support
//! precision/recall, label-distribution metrics (CE, EMD, AUC), and a
//! description-length model of distribution complexity.
//!
//! Deep models integrate through the filesystem: they consume a generated
//! dataset directory and write samples back in the same layout; nothing here
//! trains or invokes a model.

pub mod analysis;
pub mod error;
pub mod featureval;
pub mod hist;
pub mod learner;
pub mod manifest;
pub mod mdl;
pub mod metrics;
pub mod mnist;
pub mod report;
pub mod space;
pub mod synth;

pub use error::CoreError;
pub use hist::{discrete_convolve, histogram_from_samples, Axis, BinId, Histogram};
pub use space::{ComboId, CombinationSpace, FeatureSpec, FeatureValue, FeatureVector};
