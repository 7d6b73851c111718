//! Transition points: trajectory points where the tangent slope crosses a
//! polygon side direction (the active pair switches), plus piecewise
//! boundaries and domain endpoints. Segments between consecutive
//! transitions carry one fixed active pair and a clamped piece function.

use crate::expr::{Expr, Scalar};
use crate::geometry::{ActivePair, Polygon};
use crate::trajectory::{ClampedPiece, Orientation, Piece, Trajectory, TrajectoryError};
use num::BigRational;
use num::FromPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy)]
pub struct TransitionOptions {
    /// Sign-change scan resolution per piece subdomain.
    pub scan_samples: usize,
    /// Coincident transition points closer than this are merged.
    pub merge_eps: f64,
    /// Relative bisection convergence tolerance on x.
    pub rel_tol: f64,
    /// Window half-length substituted for an unbounded subdomain side.
    pub horizon: f64,
}

impl Default for TransitionOptions {
    fn default() -> Self {
        TransitionOptions {
            scan_samples: 4096,
            merge_eps: 1e-9,
            rel_tol: 1e-13,
            horizon: 1e6,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TransitionError {
    #[error("root refinement did not converge in bracket [{0}, {1}]")]
    NoConvergence(f64, f64),
    #[error(transparent)]
    Trajectory(#[from] TrajectoryError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TransitionKind {
    SlopeTransition,
    PiecewiseBoundary,
    DomainEndpoint,
}

/// A cut point of the motion, in world coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransitionPoint {
    pub x: f64,
    pub y: f64,
    pub kind: TransitionKind,
    pub piece: usize,
}

impl TransitionPoint {
    /// Piece-local parameter value (x for y=f(x) pieces, y otherwise).
    pub fn param(&self, orientation: Orientation) -> f64 {
        match orientation {
            Orientation::YOfX => self.x,
            Orientation::XOfY => self.y,
        }
    }
}

/// A maximal run of the motion with one fixed active pair. Coordinates
/// are piece-local (the pair indexes the axis-swapped polygon for x=f(y)
/// pieces).
#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub piece: usize,
    pub lo: f64,
    pub hi: f64,
    pub pair: ActivePair,
    pub g: ClampedPiece,
}

/// Polygon side slopes mod 180°, deduplicated; `None` marks a vertical
/// side.
fn side_slopes(p: &Polygon) -> Vec<Option<f64>> {
    let mut out: Vec<Option<f64>> = Vec::new();
    for (dx, dy) in p.side_directions() {
        let norm = (dx * dx + dy * dy).sqrt();
        let s = if dx.abs() <= 1e-12 * norm {
            None
        } else {
            Some(dy / dx)
        };
        let dup = out.iter().any(|o| match (o, &s) {
            (None, None) => true,
            (Some(a), Some(b)) => (a - b).abs() <= 1e-12 * (1.0 + a.abs()),
            _ => false,
        });
        if !dup {
            out.push(s);
        }
    }
    out
}

/// Sign of `e` at `t`; exact rational arithmetic when the tree allows it,
/// `None` when evaluation fails (treated as an unusable sample).
fn sign_at(e: &Expr, exact: bool, t: f64) -> Option<i32> {
    if exact {
        let r = BigRational::from_f64(t)?;
        return e.eval_scalar(&Scalar::Rat(r)).ok().map(|s| s.signum());
    }
    let v = e.eval(t).ok()?;
    if !v.is_finite() {
        return None;
    }
    Some(if v == 0.0 {
        0
    } else if v > 0.0 {
        1
    } else {
        -1
    })
}

/// All roots of `e` in the open interval (a, b), located by a dense
/// sign-change scan refined with bisection.
fn scan_roots(
    e: &Expr,
    a: f64,
    b: f64,
    opts: &TransitionOptions,
) -> Result<Vec<f64>, TransitionError> {
    let exact = e.is_rational();
    let n = opts.scan_samples.max(8);
    // Float signs are enough for bracketing; bisection re-checks signs
    // exactly where the tree is rational.
    let samples: Vec<(f64, Option<i32>)> = (0..n)
        .map(|k| {
            let t = a + (b - a) * (k as f64 + 0.5) / n as f64;
            (t, sign_at(e, false, t))
        })
        .collect();
    let mut roots = Vec::new();
    for k in 0..n {
        match samples[k].1 {
            // A grazing touch counts as a root, but a run of zeros (the
            // target holds identically, e.g. a straight piece parallel
            // to a side) is not a transition anywhere inside it.
            Some(0) => {
                let left = k > 0 && samples[k - 1].1.map_or(false, |s| s != 0);
                let right = k + 1 < n && samples[k + 1].1.map_or(false, |s| s != 0);
                if left || right {
                    roots.push(samples[k].0);
                }
            }
            Some(sc) => {
                if k > 0 {
                    if let (tp, Some(sp)) = samples[k - 1] {
                        if sp != 0 && sp != sc {
                            roots.push(bisect(e, exact, tp, sp, samples[k].0, opts)?);
                        }
                    }
                }
            }
            None => {}
        }
    }
    Ok(roots)
}

fn bisect(
    e: &Expr,
    exact: bool,
    mut a: f64,
    sa: i32,
    mut b: f64,
    opts: &TransitionOptions,
) -> Result<f64, TransitionError> {
    let (a0, b0) = (a, b);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if (b - a).abs() <= opts.rel_tol * m.abs().max(1.0) {
            return Ok(m);
        }
        match sign_at(e, exact, m) {
            Some(0) => return Ok(m),
            Some(s) if s == sa => a = m,
            Some(_) => b = m,
            None => b = m, // push the failing side inward
        }
    }
    Err(TransitionError::NoConvergence(a0, b0))
}

/// Piece-local parameters of every slope transition in the open
/// subdomain: roots of f′ = m for each side slope m, plus vertical-
/// tangent crossings when the polygon has a vertical side.
fn piece_slope_cuts(
    piece: &Piece,
    local_poly: &Polygon,
    opts: &TransitionOptions,
) -> Result<Vec<f64>, TransitionError> {
    let (a, b) = piece.finite_window(opts.horizon);
    let mut cuts = Vec::new();
    for slope in side_slopes(local_poly) {
        let target = match slope {
            Some(m) => Expr::sub(piece.derivative().clone(), Expr::num_f64(m)),
            // Vertical side: f′ blows up where 1/f′ crosses zero.
            None => Expr::Div(
                std::sync::Arc::new(Expr::num_int(1)),
                std::sync::Arc::new(piece.derivative().clone()),
            ),
        };
        cuts.extend(scan_roots(&target, a, b, opts)?);
    }
    cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    Ok(cuts)
}

/// Local polygon a piece works against: axis-swapped for x=f(y) pieces.
pub fn local_polygon(piece: &Piece, p: &Polygon) -> Polygon {
    match piece.orientation {
        Orientation::YOfX => p.clone(),
        Orientation::XOfY => p.swap_axes(),
    }
}

/// All transition points of the trajectory, in path order, deduplicated
/// within `merge_eps`.
pub fn find_transitions(
    t: &Trajectory,
    p: &Polygon,
    opts: &TransitionOptions,
) -> Result<Vec<TransitionPoint>, TransitionError> {
    let last = t.pieces.len() - 1;
    let mut out: Vec<TransitionPoint> = Vec::new();
    for (idx, piece) in t.pieces.iter().enumerate() {
        let local = local_polygon(piece, p);
        let mut locals: Vec<(f64, TransitionKind)> = Vec::new();
        if piece.lo.is_finite() {
            let kind = if idx == 0 {
                TransitionKind::DomainEndpoint
            } else {
                TransitionKind::PiecewiseBoundary
            };
            locals.push((piece.lo, kind));
        }
        for c in piece_slope_cuts(piece, &local, opts)? {
            locals.push((c, TransitionKind::SlopeTransition));
        }
        if piece.hi.is_finite() {
            let kind = if idx == last {
                TransitionKind::DomainEndpoint
            } else {
                TransitionKind::PiecewiseBoundary
            };
            locals.push((piece.hi, kind));
        }
        locals.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        for (c, kind) in locals {
            let (x, y) = piece
                .point(c)
                .map_err(|e| TrajectoryError::NotDefined { x: c, source: e })?;
            out.push(TransitionPoint {
                x,
                y,
                kind,
                piece: idx,
            });
        }
    }
    // Merge coincident points; boundary/endpoint kinds outrank slope
    // transitions (the notch check is identical either way).
    let mut merged: Vec<TransitionPoint> = Vec::new();
    for tp in out {
        if let Some(prev) = merged.last_mut() {
            let scale = 1.0 + tp.x.abs().max(tp.y.abs());
            if (prev.x - tp.x).abs() <= opts.merge_eps * scale
                && (prev.y - tp.y).abs() <= opts.merge_eps * scale
                && prev.piece == tp.piece
            {
                if prev.kind == TransitionKind::SlopeTransition {
                    prev.kind = tp.kind;
                }
                continue;
            }
        }
        merged.push(tp);
    }
    Ok(merged)
}

/// Cut each piece at its transition points and attach the active pair
/// (sampled at the interval midpoint) and the clamped function.
pub fn build_segments(
    t: &Trajectory,
    p: &Polygon,
    transitions: &[TransitionPoint],
    opts: &TransitionOptions,
) -> Result<Vec<Segment>, TransitionError> {
    let mut out = Vec::new();
    for (idx, piece) in t.pieces.iter().enumerate() {
        let local = local_polygon(piece, p);
        let mut cuts: Vec<f64> = transitions
            .iter()
            .filter(|tp| tp.piece == idx)
            .map(|tp| tp.param(piece.orientation))
            .collect();
        if !piece.lo.is_finite() {
            cuts.insert(0, f64::NEG_INFINITY);
        }
        if !piece.hi.is_finite() {
            cuts.push(f64::INFINITY);
        }
        for w in cuts.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            let scale = 1.0 + lo.abs().min(1e300).max(hi.abs().min(1e300));
            if !(hi - lo > opts.merge_eps * scale) {
                continue; // zero-width segment between merged cuts
            }
            let (wa, wb) = (
                lo.max(piece.finite_window(opts.horizon).0),
                hi.min(piece.finite_window(opts.horizon).1),
            );
            let mid = 0.5 * (wa + wb);
            let slope = piece
                .slope(mid)
                .map_err(|e| TrajectoryError::NotDefined { x: mid, source: e })?;
            let pair = local.active_pairs((1.0, slope))[0];
            let g = ClampedPiece::new(piece, lo, hi)?;
            out.push(Segment {
                piece: idx,
                lo,
                hi,
                pair,
                g,
            });
        }
    }
    Ok(out)
}
