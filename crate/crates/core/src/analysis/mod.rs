//! Test functions, the smooth weight, the lattice transform and the constants
//! behind the nonvanishing bound.

pub mod constants;
pub mod jet;
pub mod optimize;
pub mod poisson;
pub mod quad;
pub mod testfn;
pub mod transform;
pub mod weight;

pub use testfn::{cosine_test_function, fejer_squared_test_function, fejer_test_function, usp_integral, TestFunction, TestFunctionKind};
pub use constants::{nonvanishing_constants, NonvanishingConstants};
pub use optimize::{optimize_test_function, OptimizedTestFunction};
pub use poisson::{verify_poisson, verify_poisson_odd_restricted, PoissonReport};
pub use weight::SmoothWeight;
