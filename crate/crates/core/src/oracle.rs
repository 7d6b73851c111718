//! Brute-force reference: dense sampling of polygon placements along the
//! trajectory, and the comparator certifying a compiled region against
//! it. Slow and trusted; the compiled formula is fast and checked.

use crate::geometry::Polygon;
use crate::region::RegionFormula;
use crate::trajectory::{Orientation, Trajectory};
use crate::transitions::{find_transitions, TransitionError, TransitionOptions, TransitionPoint};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Rectangular evaluation lattice.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValidationGrid {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
    pub step: f64,
}

impl ValidationGrid {
    pub fn counts(&self) -> (usize, usize) {
        let nx = ((self.x1 - self.x0) / self.step).round() as usize + 1;
        let ny = ((self.y1 - self.y0) / self.step).round() as usize + 1;
        (nx, ny)
    }

    pub fn point(&self, i: usize, j: usize) -> (f64, f64) {
        (self.x0 + self.step * i as f64, self.y0 + self.step * j as f64)
    }

    pub fn is_valid(&self) -> bool {
        self.step > 0.0 && self.x1 > self.x0 && self.y1 > self.y0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleConfig {
    /// Nominal per-sample advance; the sampler shrinks it where the
    /// trajectory is steep so each step moves at most this far in x and
    /// in y.
    pub traj_step: f64,
    pub grid: ValidationGrid,
    /// Completeness margin override; default is the sweep-gap bound of
    /// the sampler.
    pub margin: Option<f64>,
}

/// Sampled swept set: polygon placements along the trajectory, sorted by
/// center x for windowed queries.
pub struct SweptSamples {
    centers: Vec<(f64, f64)>,
    polygon: Polygon,
    /// Guaranteed cover bound: any point of the continuous sweep is
    /// within this distance of the sampled sweep. Adaptive stepping keeps
    /// consecutive placements within `traj_step` in each axis, so the
    /// uncovered sliver is at most √2·step thick; doubled for slack.
    pub delta: f64,
}

/// Sample placements along `t`, including every transition, boundary and
/// endpoint placement exactly. Unbounded subdomain sides are clipped to
/// the neighborhood of `clip` (a grid), since placements beyond it cannot
/// touch any query point.
pub fn sample_sweep(
    t: &Trajectory,
    p: &Polygon,
    traj_step: f64,
    transitions: &[TransitionPoint],
    clip: &ValidationGrid,
) -> SweptSamples {
    assert!(traj_step > 0.0);
    let mut centers: Vec<(f64, f64)> = Vec::new();
    for (idx, piece) in t.pieces.iter().enumerate() {
        // Parameter range that can still reach the grid.
        let (qlo, qhi) = match piece.orientation {
            Orientation::YOfX => (clip.x0 - p.w_x() - traj_step, clip.x1 + p.w_x() + traj_step),
            Orientation::XOfY => (clip.y0 - p.h_y() - traj_step, clip.y1 + p.h_y() + traj_step),
        };
        let lo = if piece.lo.is_finite() { piece.lo } else { qlo.min(piece.hi.min(qhi)) };
        let hi = if piece.hi.is_finite() { piece.hi } else { qhi.max(lo) };
        if !(lo < hi) {
            continue;
        }
        let mut u = lo;
        let max_iter = 50_000_000usize;
        let mut iters = 0usize;
        while u < hi {
            if let Ok(c) = piece.point(u) {
                centers.push(c);
            }
            let slope = piece.slope(u).unwrap_or(f64::INFINITY).abs();
            let dt = if slope.is_finite() {
                traj_step / (1.0 + slope)
            } else {
                traj_step * 1e-9
            };
            u += dt.max(traj_step * 1e-9);
            iters += 1;
            if iters > max_iter {
                break;
            }
        }
        if hi.is_finite() {
            if let Ok(c) = piece.point(hi) {
                centers.push(c);
            }
        }
        for tp in transitions.iter().filter(|tp| tp.piece == idx) {
            centers.push((tp.x, tp.y));
        }
    }
    centers.sort_by(|a, b| a.partial_cmp(b).unwrap());
    SweptSamples {
        centers,
        polygon: p.clone(),
        delta: 2.0 * traj_step * (1.0 + std::f64::consts::SQRT_2),
    }
}

impl SweptSamples {
    /// True iff some sampled placement contains `q` (closed test, exact
    /// arithmetic: no widening tolerance).
    pub fn unsafe_at(&self, q: (f64, f64)) -> bool {
        let w = self.polygon.w_x();
        let h = self.polygon.h_y();
        let from = self
            .centers
            .partition_point(|c| c.0 < q.0 - w);
        for c in &self.centers[from..] {
            if c.0 > q.0 + w {
                break;
            }
            if (c.1 - q.1).abs() <= h && self.polygon.contains(*c, q, 0.0) {
                return true;
            }
        }
        false
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }
}

/// Convenience single-point oracle (resamples every call; use
/// `sample_sweep` + `unsafe_at` for batches).
pub fn oracle_unsafe(
    t: &Trajectory,
    p: &Polygon,
    q: (f64, f64),
    cfg: &OracleConfig,
) -> Result<bool, TransitionError> {
    let tps = find_transitions(t, p, &TransitionOptions::default())?;
    let sweep = sample_sweep(t, p, cfg.traj_step, &tps, &cfg.grid);
    Ok(sweep.unsafe_at(q))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ValidationReport {
    pub grid_points: usize,
    pub oracle_unsafe: usize,
    pub formula_unsafe: usize,
    /// Completeness margin actually used.
    pub delta: f64,
    /// Grid points sitting exactly (≤1e−12) on a formula atom boundary,
    /// excluded from completeness accounting.
    pub boundary_excluded: usize,
    /// Formula-unsafe ∧ oracle-safe points within `delta` of the formula
    /// boundary: expected sampling slack, not violations.
    pub completeness_excused: usize,
    pub soundness_violations: usize,
    pub completeness_violations: usize,
    pub evaluation_errors: usize,
    /// Violating points, capped.
    pub soundness_points: Vec<(f64, f64)>,
    pub completeness_points: Vec<(f64, f64)>,
}

impl ValidationReport {
    pub fn pass(&self) -> bool {
        self.soundness_violations == 0
            && self.completeness_violations == 0
            && self.evaluation_errors == 0
    }

    pub fn summary(&self) -> String {
        format!(
            "{}: {} grid points, oracle-unsafe {}, formula-unsafe {}, \
             soundness violations {}, completeness violations {} \
             (excused near boundary: {}, on boundary: {}, delta {:.3e})",
            if self.pass() { "PASS" } else { "FAIL" },
            self.grid_points,
            self.oracle_unsafe,
            self.formula_unsafe,
            self.soundness_violations,
            self.completeness_violations,
            self.completeness_excused,
            self.boundary_excluded,
            self.delta,
        )
    }
}

const VIOLATION_CAP: usize = 32;

#[derive(Clone, Copy, PartialEq)]
enum PointClass {
    Agree,
    OracleUnsafeOnly,
    FormulaUnsafeExcusedBoundary,
    FormulaUnsafeExcusedMargin,
    FormulaUnsafeOnly,
    EvalError,
}

/// Distance from `q` to the formula's unsafe/safe boundary, found by
/// bisecting toward the nearest formula-safe grid neighbor. `None` when
/// no neighbor within one grid step is formula-safe.
fn distance_to_formula_boundary(f: &RegionFormula, q: (f64, f64), step: f64) -> Option<f64> {
    let mut best: Option<f64> = None;
    for (dx, dy) in [
        (1.0, 0.0),
        (-1.0, 0.0),
        (0.0, 1.0),
        (0.0, -1.0),
        (1.0, 1.0),
        (1.0, -1.0),
        (-1.0, 1.0),
        (-1.0, -1.0),
    ] {
        let n = (q.0 + dx * step, q.1 + dy * step);
        if f.evaluate(n).unwrap_or(true) {
            continue;
        }
        let (mut a, mut b) = (q, n); // a unsafe, b safe
        for _ in 0..60 {
            let m = (0.5 * (a.0 + b.0), 0.5 * (a.1 + b.1));
            if f.evaluate(m).unwrap_or(false) {
                a = m;
            } else {
                b = m;
            }
        }
        let d = ((b.0 - q.0).powi(2) + (b.1 - q.1).powi(2)).sqrt();
        best = Some(best.map_or(d, |x: f64| x.min(d)));
    }
    best
}

/// Certify `f` against the sampling oracle over the configured grid.
/// Soundness (oracle-unsafe ⇒ formula-unsafe) is required exactly;
/// completeness slack is allowed only within `delta` of the formula
/// boundary.
pub fn validate(
    f: &RegionFormula,
    t: &Trajectory,
    p: &Polygon,
    cfg: &OracleConfig,
) -> Result<ValidationReport, TransitionError> {
    let tps = find_transitions(t, p, &TransitionOptions::default())?;
    let sweep = sample_sweep(t, p, cfg.traj_step, &tps, &cfg.grid);
    let delta = cfg.margin.unwrap_or(sweep.delta);
    let (nx, ny) = cfg.grid.counts();

    let classes: Vec<(usize, PointClass, bool, bool)> = (0..nx * ny)
        .into_par_iter()
        .map(|k| {
            let q = cfg.grid.point(k % nx, k / nx);
            let o = sweep.unsafe_at(q);
            let fml = match f.evaluate(q) {
                Ok(v) => v,
                Err(_) => return (k, PointClass::EvalError, o, false),
            };
            let class = match (o, fml) {
                (true, false) => PointClass::OracleUnsafeOnly,
                (false, true) => {
                    if f.near_boundary(q, 1e-12) {
                        PointClass::FormulaUnsafeExcusedBoundary
                    } else {
                        match distance_to_formula_boundary(f, q, cfg.grid.step) {
                            Some(d) if d <= delta => PointClass::FormulaUnsafeExcusedMargin,
                            _ => PointClass::FormulaUnsafeOnly,
                        }
                    }
                }
                _ => PointClass::Agree,
            };
            (k, class, o, fml)
        })
        .collect();

    let mut report = ValidationReport {
        grid_points: nx * ny,
        oracle_unsafe: 0,
        formula_unsafe: 0,
        delta,
        boundary_excluded: 0,
        completeness_excused: 0,
        soundness_violations: 0,
        completeness_violations: 0,
        evaluation_errors: 0,
        soundness_points: Vec::new(),
        completeness_points: Vec::new(),
    };
    for (k, class, o, fml) in classes {
        if o {
            report.oracle_unsafe += 1;
        }
        if fml {
            report.formula_unsafe += 1;
        }
        let q = cfg.grid.point(k % nx, k / nx);
        match class {
            PointClass::Agree => {}
            PointClass::OracleUnsafeOnly => {
                report.soundness_violations += 1;
                if report.soundness_points.len() < VIOLATION_CAP {
                    report.soundness_points.push(q);
                }
            }
            PointClass::FormulaUnsafeExcusedBoundary => report.boundary_excluded += 1,
            PointClass::FormulaUnsafeExcusedMargin => report.completeness_excused += 1,
            PointClass::FormulaUnsafeOnly => {
                report.completeness_violations += 1;
                if report.completeness_points.len() < VIOLATION_CAP {
                    report.completeness_points.push(q);
                }
            }
            PointClass::EvalError => report.evaluation_errors += 1,
        }
    }
    Ok(report)
}
