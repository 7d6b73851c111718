//! Piecewise trajectories: each piece is y=f(x) or x=f(y) on a subdomain,
//! C¹ inside it. Also the clamped subfunction g that freezes a piece's
//! value outside a working interval.

use crate::expr::{Expr, ExprError};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Orientation {
    /// y = f(x) on an x-interval.
    YOfX,
    /// x = f(y) on a y-interval.
    XOfY,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TrajectoryError {
    #[error("trajectory has no pieces")]
    Empty,
    #[error("piece domain [{0}, {1}] is empty or reversed")]
    BadDomain(f64, f64),
    #[error("piece is not defined across its subdomain at {x}: {source}")]
    NotDefined { x: f64, source: ExprError },
    #[error("piece derivative is not finite at {x} inside the subdomain")]
    NotSmooth { x: f64 },
    #[error("pieces {0} and {1} overlap")]
    Overlap(usize, usize),
    #[error("gap in coverage between pieces {0} and {1}")]
    Gap(usize, usize),
    #[error("point {0} is outside the trajectory domain")]
    OutsideDomain(f64),
    #[error("clamp interval [{0}, {1}] is not inside the piece subdomain")]
    ClampOutside(f64, f64),
}

/// One C¹ piece of a trajectory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Piece {
    pub orientation: Orientation,
    pub f: Expr,
    #[serde(skip, default = "zero_expr")]
    fp: Expr,
    pub lo: f64,
    pub hi: f64,
}

fn zero_expr() -> Expr {
    Expr::num_int(0)
}

impl Piece {
    /// Build and validate a piece. Definedness and smoothness are checked
    /// by dense sampling of the (horizon-capped) subdomain: f must
    /// evaluate at every sample including finite endpoints, f′ must be
    /// finite at interior samples.
    pub fn new(orientation: Orientation, f: Expr, lo: f64, hi: f64) -> Result<Piece, TrajectoryError> {
        if !(lo < hi) {
            return Err(TrajectoryError::BadDomain(lo, hi));
        }
        let fp = f.differentiate();
        let p = Piece {
            orientation,
            f,
            fp,
            lo,
            hi,
        };
        let (a, b) = p.finite_window(100.0);
        let n = 129;
        for k in 0..=n {
            let x = a + (b - a) * k as f64 / n as f64;
            let v = p
                .f
                .eval(x)
                .map_err(|e| TrajectoryError::NotDefined { x, source: e })?;
            if !v.is_finite() {
                return Err(TrajectoryError::NotSmooth { x });
            }
            if k > 0 && k < n {
                match p.fp.eval(x) {
                    Ok(d) if d.is_finite() => {}
                    _ => return Err(TrajectoryError::NotSmooth { x }),
                }
            }
        }
        Ok(p)
    }

    /// Reconstruct the cached derivative after deserialization.
    pub fn rebuild(mut self) -> Result<Piece, TrajectoryError> {
        self.fp = Expr::num_int(0);
        Piece::new(self.orientation, self.f, self.lo, self.hi)
    }

    /// Subdomain clipped to `[lo_bound, hi_bound]` around the finite side
    /// when one side is infinite (both infinite: centered at 0).
    pub fn finite_window(&self, horizon: f64) -> (f64, f64) {
        let a = if self.lo.is_finite() {
            self.lo
        } else if self.hi.is_finite() {
            self.hi - horizon
        } else {
            -horizon
        };
        let b = if self.hi.is_finite() {
            self.hi
        } else if self.lo.is_finite() {
            self.lo + horizon
        } else {
            horizon
        };
        (a, b)
    }

    pub fn derivative(&self) -> &Expr {
        &self.fp
    }

    pub fn eval(&self, t: f64) -> Result<f64, ExprError> {
        self.f.eval(t)
    }

    pub fn slope(&self, t: f64) -> Result<f64, ExprError> {
        self.fp.eval(t)
    }

    /// World coordinates of the point at parameter `t`.
    pub fn point(&self, t: f64) -> Result<(f64, f64), ExprError> {
        let v = self.f.eval(t)?;
        Ok(match self.orientation {
            Orientation::YOfX => (t, v),
            Orientation::XOfY => (v, t),
        })
    }

    /// Finite endpoint placements in world coordinates.
    pub fn endpoint_placements(&self) -> Vec<(f64, f64)> {
        [self.lo, self.hi]
            .iter()
            .filter(|t| t.is_finite())
            .map(|&t| self.point(t).expect("endpoint inside validated domain"))
            .collect()
    }
}

/// Ordered list of pieces forming one trajectory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub pieces: Vec<Piece>,
}

impl Trajectory {
    /// Validate piece chaining: consecutive pieces of the same orientation
    /// must tile their parameter axis with no gap or overlap.
    pub fn new(pieces: Vec<Piece>) -> Result<Trajectory, TrajectoryError> {
        if pieces.is_empty() {
            return Err(TrajectoryError::Empty);
        }
        for i in 1..pieces.len() {
            let (a, b) = (&pieces[i - 1], &pieces[i]);
            if a.orientation != b.orientation {
                continue;
            }
            let scale = 1.0 + a.hi.abs().min(1e300);
            if a.hi.is_finite() && b.lo.is_finite() {
                if b.lo < a.hi - 1e-12 * scale {
                    return Err(TrajectoryError::Overlap(i - 1, i));
                }
                if b.lo > a.hi + 1e-12 * scale {
                    return Err(TrajectoryError::Gap(i - 1, i));
                }
            } else if !a.hi.is_finite() {
                return Err(TrajectoryError::Overlap(i - 1, i));
            } else {
                return Err(TrajectoryError::Gap(i - 1, i));
            }
        }
        Ok(Trajectory { pieces })
    }

    /// Value at parameter `x` (pieces of the leading orientation). At a
    /// shared boundary the earlier piece wins; `eval_both` exposes the
    /// pair for discontinuous junctions.
    pub fn eval(&self, x: f64) -> Result<f64, TrajectoryError> {
        for p in &self.pieces {
            if x >= p.lo && x <= p.hi {
                return p
                    .eval(x)
                    .map_err(|e| TrajectoryError::NotDefined { x, source: e });
            }
        }
        Err(TrajectoryError::OutsideDomain(x))
    }

    /// Values of every piece whose closed subdomain contains `x`.
    pub fn eval_both(&self, x: f64) -> Vec<f64> {
        self.pieces
            .iter()
            .filter(|p| x >= p.lo && x <= p.hi)
            .filter_map(|p| p.eval(x).ok())
            .collect()
    }

    /// Translate the whole trajectory by (a, b): each y=f(x) piece maps
    /// to y = f(x − a) + b on the shifted domain (symmetric for x=f(y)).
    pub fn translated(&self, d: (f64, f64)) -> Trajectory {
        let pieces = self
            .pieces
            .iter()
            .map(|p| {
                let (da, db) = match p.orientation {
                    Orientation::YOfX => (d.0, d.1),
                    Orientation::XOfY => (d.1, d.0),
                };
                let shifted = Expr::add(
                    p.f.substitute(&Expr::sub(Expr::Var, Expr::num_f64(da))),
                    Expr::num_f64(db),
                );
                Piece::new(p.orientation, shifted, p.lo + da, p.hi + da)
                    .expect("translation preserves validity")
            })
            .collect();
        Trajectory { pieces }
    }

    /// Mirror across the y-axis: y=f(x) pieces become y=f(−x) on the
    /// negated, swapped domain.
    pub fn reflect_x(&self) -> Trajectory {
        let mut pieces: Vec<Piece> = self
            .pieces
            .iter()
            .map(|p| {
                let g = p.f.substitute(&Expr::mul(Expr::num_int(-1), Expr::Var));
                match p.orientation {
                    Orientation::YOfX => Piece::new(p.orientation, g, -p.hi, -p.lo),
                    Orientation::XOfY => Piece::new(
                        p.orientation,
                        Expr::mul(Expr::num_int(-1), p.f.clone()),
                        p.lo,
                        p.hi,
                    ),
                }
                .expect("reflection preserves validity")
            })
            .collect();
        pieces.reverse();
        Trajectory { pieces }
    }
}

/// A piece function frozen outside a working interval: g(t) = f(clamped t).
/// An absent side applies no clamp.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClampedPiece {
    pub f: Expr,
    /// (t, f(t)) at the lower clamp point, if any.
    pub lo: Option<(f64, f64)>,
    /// (t, f(t)) at the upper clamp point, if any.
    pub hi: Option<(f64, f64)>,
}

impl ClampedPiece {
    /// Clamp `piece` to `interval` (ends may be infinite, meaning no
    /// clamp on that side). The interval must sit inside the subdomain.
    pub fn new(piece: &Piece, lo: f64, hi: f64) -> Result<ClampedPiece, TrajectoryError> {
        let eps = 1e-9 * (1.0 + lo.abs().min(1e300).max(hi.abs().min(1e300)));
        if lo < piece.lo - eps || hi > piece.hi + eps || !(lo < hi) {
            return Err(TrajectoryError::ClampOutside(lo, hi));
        }
        let at = |t: f64| -> Result<Option<(f64, f64)>, TrajectoryError> {
            if !t.is_finite() {
                return Ok(None);
            }
            let t = t.clamp(piece.lo, piece.hi);
            let v = piece
                .eval(t)
                .map_err(|e| TrajectoryError::NotDefined { x: t, source: e })?;
            Ok(Some((t, v)))
        };
        Ok(ClampedPiece {
            f: piece.f.clone(),
            lo: at(lo)?,
            hi: at(hi)?,
        })
    }

    pub fn eval(&self, t: f64) -> Result<f64, ExprError> {
        if let Some((a, va)) = self.lo {
            if t <= a {
                return Ok(va);
            }
        }
        if let Some((b, vb)) = self.hi {
            if t >= b {
                return Ok(vb);
            }
        }
        self.f.eval(t)
    }
}
