//! Swept-region compiler: turns "a convex polygon translating along a
//! piecewise planar trajectory" into an exact, quantifier-free predicate
//! over obstacle coordinates, and certifies the result against a
//! brute-force sampling oracle.
//!
//! Pipeline: [`expr`] (closed-form functions) → [`geometry`] (polygons,
//! active corners) → [`trajectory`] (piecewise curves, clamping) →
//! [`transitions`] (where active corners switch) → [`region`] (the
//! compiled predicate) → [`oracle`] (independent certification).

pub mod expr;
pub mod geometry;
pub mod job;
pub mod oracle;
pub mod plot;
pub mod region;
pub mod trajectory;
pub mod transitions;

pub use expr::{Expr, ExprError, Scalar};
pub use geometry::{ActivePair, GeometryError, Polygon};
pub use region::RegionFormula;
pub use trajectory::{Piece, Trajectory, TrajectoryError};
