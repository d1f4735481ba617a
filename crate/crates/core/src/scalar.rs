//! Scalar abstraction for the cost model.
//!
//! All model arithmetic (rates, delays, energies, utilities) is written
//! against [`Real`] so the same code runs in `f32` or `f64`. The harness
//! and the CLI pin `f64`; see the type aliases at the crate root.

use std::fmt::{Debug, Display};

use num_traits::Float;

/// Floating-point scalar used throughout the cost model and solvers.
pub trait Real: Float + Debug + Display {
    /// Lossy conversion from `f64`, for literals and RNG draws.
    fn from_f64(value: f64) -> Self {
        Self::from(value).expect("f64 literal must convert into the scalar type")
    }

    /// Lossy conversion into `f64`, for reporting.
    fn into_f64(self) -> f64 {
        self.to_f64().expect("scalar must convert into f64")
    }
}

impl<T: Float + Debug + Display> Real for T {}

#[cfg(test)]
mod tests {
    use super::*;

    fn half<F: Real>() -> F {
        F::from_f64(0.5)
    }

    #[test]
    fn literal_conversion_roundtrips() {
        assert_eq!(half::<f64>(), 0.5);
        assert_eq!(half::<f32>(), 0.5f32);
        assert_eq!(half::<f64>().into_f64(), 0.5);
    }
}
