//! Extremal numbers of rational points on abelian surfaces and jacobians over
//! finite fields, with an exhaustive curve census to check them against.
//!
//! * [`exact_arith`]: prime powers, integer square roots, exact surd comparisons.
//! * [`av_bounds`]: bounds valid in every dimension.
//! * [`surface_enum`]: isogeny classes of surfaces as pairs `(a₁, a₂)`.
//! * [`extremal`]: closed forms for the extremal jacobian orders in dimensions 1 and 2.
//! * [`finite_field`]: small finite fields and their extensions.
//! * [`curve_oracle`]: brute-force enumeration of elliptic and genus-2 curves.

pub mod av_bounds;
pub mod curve_oracle;
pub mod exact_arith;
pub mod extremal;
pub mod finite_field;
mod ser;
pub mod surface_enum;

pub use exact_arith::{PrimePower, SurdThreshold};
pub use surface_enum::SurfacePair;
