//! Solutions of the functional equation `(1-z)φ(x) = φ(φ(xz)(1-z)/z)` on the
//! one-point compactification `R^k ∪ {∞}`.
//!
//! The equation is the special case `F(x, z) = (1/z)·φ(xz)` of the
//! translation equation, and every solution generates a one-parameter flow
//! `φ^z`. Limits of scaled iterates `n·g∘…∘g(x/n)` land in this class.
//!
//! The numeric core is generic over [`Real`] (`f32` or `f64`); the `*64`
//! aliases below fix it to `f64`, which is what the CLI and all quoted
//! tolerances use.
//!
//! ```
//! use flowlab::{CatalogEntry, ExtScalar, Point, Solution};
//!
//! let s = Solution::catalog(CatalogEntry::Pvz5);
//! let y = s.eval(&Point::finite(vec![1.0, 1.0]).unwrap()).unwrap();
//! assert_eq!(y.to_string(), "0.8,0.4");
//! let half = s.flow(ExtScalar::Finite(2.0), &Point::finite(vec![0.5, 0.5]).unwrap()).unwrap();
//! assert_eq!(half.to_string(), "0.4,0.2");
//! ```

pub mod cli;
pub mod descriptor;
pub mod error;
pub mod export;
pub mod forms;
pub mod homothety;
pub mod iteration;
pub mod linalg;
pub mod oned;
pub mod orbits;
pub mod sampling;
pub mod scalar;
pub mod solutions;
pub mod space;

pub use error::{Error, Result};
pub use forms::{LinearForm, QuadraticForm};
pub use homothety::Homothety;
pub use iteration::{IterMap, LimitEstimate};
pub use linalg::Matrix;
pub use oned::OneDSolution;
pub use orbits::{OrbitTrace, RepSetSolution};
pub use sampling::{Budget, SamplingBox, VerificationReport};
pub use scalar::Real;
pub use solutions::{CatalogEntry, Solution};
pub use space::{chordal_distance, scale, stereographic, ExtScalar, Point};

pub type Point64 = Point<f64>;
pub type ExtScalar64 = ExtScalar<f64>;
pub type QuadraticForm64 = QuadraticForm<f64>;
pub type LinearForm64 = LinearForm<f64>;
pub type Matrix64 = Matrix<f64>;
pub type Homothety64 = Homothety<f64>;
pub type Solution64 = Solution<f64>;
pub type VerificationReport64 = VerificationReport<f64>;
pub type IterMap64 = IterMap<f64>;
pub type LimitEstimate64 = LimitEstimate<f64>;
pub type OrbitTrace64 = OrbitTrace<f64>;
pub type RepSetSolution64 = RepSetSolution<f64>;
pub type OneDSolution64 = OneDSolution<f64>;

pub type Point32 = Point<f32>;
pub type Solution32 = Solution<f32>;
