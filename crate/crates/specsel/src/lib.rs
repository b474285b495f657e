//! Spectral clustering with automatic selection of the cluster count.
//!
//! Given a symmetric affinity matrix with entries in `[0, 1]`, the library
//! scores every candidate cluster count in a range with four validity
//! criteria — silhouette, the eigenvalue-gap heuristic, Davies-Bouldin and
//! Calinski-Harabasz — normalizes the scores into confidences, and picks the
//! count with the highest average confidence (voting, random and
//! single-criterion strategies are available for comparison). The selected
//! count feeds a deterministic spectral clustering (normalized Laplacian
//! embedding plus seeded k-means).
//!
//! Multiple affinity views of the same samples can be fused before
//! selection, and the [`evalbench`] module scores predictions against ground
//! truth over manifest-driven benchmark runs.
//!
//! The numeric core is generic over the scalar type (`f32` or `f64`, see
//! [`Scalar`]); the `*64` aliases below are the default instantiation.
//!
//! ```
//! use specsel::{
//!     generate_block_affinity, select_for_views, KRange, SelectionStrategy, SynthSpec,
//! };
//!
//! let spec = SynthSpec::new(3, 10, 0.8, 1.0, 0.0, 0.2, 7).unwrap();
//! let (affinity, _planted) = generate_block_affinity::<f64>(&spec);
//! let range = KRange::new(2, 5).unwrap();
//! let k = select_for_views(&[affinity], range, SelectionStrategy::Average, 42).unwrap();
//! assert_eq!(k, 3);
//! ```

pub mod eigen;
pub mod error;
pub mod evalbench;
pub mod matrix;
pub mod scalar;
pub mod selection;
pub mod spectral;
pub mod validity;

pub use eigen::{GapVector, Spectrum};
pub use error::{Error, Result};
pub use evalbench::{
    error_rate, evaluate_manifest, exact_accuracy, generate_block_affinity, labels_to_string, mse,
    read_labels, read_manifest, BreakdownRow, EvaluationReport, SequenceFailure, SequenceOutcome,
    SequenceRecord, SynthSpec,
};
pub use matrix::{fuse, AffinityMatrix, DistanceMatrix, Normalization, SymmetricMatrix};
pub use scalar::Scalar;
pub use selection::{
    confidence_table, fuse_views, random_k, select_for_views, select_k, ConfidenceTable, Criterion,
    KRange, SelectionStrategy,
};
pub use spectral::{
    embed_from_spectrum, kmeans, spectral_cluster, spectral_embed, ClusterAssignment, Embedding,
};
pub use validity::{calinski_harabasz, davies_bouldin, eigengap_gaps, silhouette, ClusterStats};

/// Default double-precision instantiations.
pub type AffinityMatrix64 = AffinityMatrix<f64>;
pub type DistanceMatrix64 = DistanceMatrix<f64>;
pub type SymmetricMatrix64 = SymmetricMatrix<f64>;
pub type Spectrum64 = Spectrum<f64>;
pub type GapVector64 = GapVector<f64>;
pub type Embedding64 = Embedding<f64>;
pub type ConfidenceTable64 = ConfidenceTable<f64>;

/// Single-precision instantiations.
pub type AffinityMatrix32 = AffinityMatrix<f32>;
pub type DistanceMatrix32 = DistanceMatrix<f32>;
pub type SymmetricMatrix32 = SymmetricMatrix<f32>;
pub type Spectrum32 = Spectrum<f32>;
pub type GapVector32 = GapVector<f32>;
pub type Embedding32 = Embedding<f32>;
pub type ConfidenceTable32 = ConfidenceTable<f32>;
