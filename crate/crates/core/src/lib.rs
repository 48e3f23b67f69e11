//! Cone orders, convex maps, and certified Lipschitz constants in finite
//! dimension.
//!
//! The crate provides, over a generic floating scalar:
//!
//! - polyhedral cones in generator form, the vector order they induce, order
//!   intervals, full hulls, lattice operations and normality measurements
//!   ([`cone`], [`lattice`], [`normality`]);
//! - evaluable seminorms, including Minkowski functionals of symmetric
//!   polytopes ([`seminorm`]);
//! - evaluable convex maps with chord/slope diagnostics ([`convex`]);
//! - Lipschitz certificates from explicit constants, each cross-checked
//!   against a brute-force sampling oracle ([`certify`]);
//! - Lipschitz behavior under non-norm metrics ([`metrics`]);
//! - numeric reproduction of classical counterexamples: thin-cone order
//!   blow-up and the discontinuous derivative-at-a-point functional on
//!   polynomials ([`pathology`]).
//!
//! Core math is generic over the scalar via [`scalar::Real`]; concrete type
//! aliases for f64 and f32 sit at the crate root.

pub mod certify;
pub mod convex;
pub mod cone;
pub mod error;
pub mod lattice;
pub mod linalg;
pub mod metrics;
pub mod normality;
pub mod pathology;
pub mod report;
pub mod rng;
pub mod scalar;
pub mod seminorm;
pub mod simplex;
pub mod slope;
pub mod vector;
pub mod verify;

pub use error::{Error, Result};
pub use rng::Rng;
pub use scalar::Real;

/// f64 aliases (the precision used by the CLI and the acceptance suite).
pub type Vector64 = vector::Vector<f64>;
pub type Cone64 = cone::PolyCone<f64>;
pub type Interval64 = cone::OrderInterval<f64>;
pub type Seminorm64 = seminorm::SeminormSpec<f64>;
pub type Map64 = convex::ConvexMap<f64>;
pub type Section64 = convex::Section<f64>;
pub type Certificate64 = certify::LipschitzCertificate<f64>;
pub type Metric64 = metrics::Metric<f64>;


/// f32 aliases.
pub type Vector32 = vector::Vector<f32>;
pub type Cone32 = cone::PolyCone<f32>;
pub type Seminorm32 = seminorm::SeminormSpec<f32>;
pub type Map32 = convex::ConvexMap<f32>;

