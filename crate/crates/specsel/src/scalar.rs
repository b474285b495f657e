//! Scalar abstraction so the numeric core runs on `f32` or `f64`.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};

/// Floating-point scalar the library is generic over.
///
/// The associated constants pin the numeric thresholds the algorithms use;
/// they scale with the precision of the concrete type. `f64` is the default
/// instantiation (see the aliases at the crate root); `f32` trades accuracy
/// for memory.
pub trait Scalar:
    Float
    + NumAssign
    + FromPrimitive
    + ToPrimitive
    + Sum
    + Default
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
    + 'static
{
    /// Jacobi sweeps stop once the off-diagonal Frobenius norm falls below
    /// this fraction of the full Frobenius norm.
    const JACOBI_TOL: Self;
    /// Lloyd iterations stop when no centroid moves farther than this.
    const KMEANS_TOL: Self;
    /// Embedding rows with a smaller pre-normalization norm stay zero.
    const NORM_FLOOR: Self;
    /// Separations below this count as coincident in ratio denominators.
    const SEP_FLOOR: Self;
    /// Score used in place of a ratio whose denominator vanished.
    const RATIO_CEIL: Self;
    /// Largest asymmetry repaired by averaging a matrix with its transpose.
    const SYMMETRY_SLACK: Self;
    /// Largest deviation from a unit diagonal repaired on construction.
    const DIAGONAL_SLACK: Self;

    /// Conversion from `f64`, for literals and RNG draws.
    fn of(v: f64) -> Self {
        Self::from_f64(v).expect("f64 converts to any Scalar")
    }
}

impl Scalar for f64 {
    const JACOBI_TOL: Self = 1e-12;
    const KMEANS_TOL: Self = 1e-6;
    const NORM_FLOOR: Self = 1e-12;
    const SEP_FLOOR: Self = 1e-12;
    const RATIO_CEIL: Self = 1e12;
    const SYMMETRY_SLACK: Self = 1e-9;
    const DIAGONAL_SLACK: Self = 1e-6;
}

impl Scalar for f32 {
    const JACOBI_TOL: Self = 1e-6;
    const KMEANS_TOL: Self = 1e-4;
    const NORM_FLOOR: Self = 1e-6;
    const SEP_FLOOR: Self = 1e-6;
    const RATIO_CEIL: Self = 1e6;
    const SYMMETRY_SLACK: Self = 1e-5;
    const DIAGONAL_SLACK: Self = 1e-4;
}
