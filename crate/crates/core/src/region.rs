//! The compiled unsafe-region predicate: a disjunction of segment
//! clauses (corridor between the two active-corner trajectories, cut off
//! at the segment ends) and notch clauses (the polygon footprint at each
//! transition placement). Quantifier-free, closed, and cheap to evaluate.

use crate::expr::{Expr, ExprError};
use crate::geometry::Polygon;
use crate::trajectory::{ClampedPiece, Orientation, Trajectory};
use crate::transitions::{
    build_segments, find_transitions, local_polygon, Segment, TransitionError, TransitionOptions,
};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CmpOp {
    /// lhs ≤ 0
    Le,
    /// lhs ≥ 0
    Ge,
}

/// Closed half-plane `a·x + b·y + c (≤|≥) 0` in obstacle coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "LinearAtomDoc", try_from = "LinearAtomDoc")]
pub struct LinearAtom {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub op: CmpOp,
}

impl LinearAtom {
    pub fn value(&self, q: (f64, f64)) -> f64 {
        self.a * q.0 + self.b * q.1 + self.c
    }

    pub fn holds(&self, q: (f64, f64)) -> bool {
        match self.op {
            CmpOp::Le => self.value(q) <= 0.0,
            CmpOp::Ge => self.value(q) >= 0.0,
        }
    }

    /// Euclidean distance from `q` to the atom's boundary line.
    pub fn boundary_distance(&self, q: (f64, f64)) -> f64 {
        let n = (self.a * self.a + self.b * self.b).sqrt();
        if n == 0.0 {
            f64::INFINITY
        } else {
            self.value(q).abs() / n
        }
    }

    /// Swap the roles of x and y (maps an atom built in axis-swapped
    /// coordinates back to world coordinates).
    fn swap_axes(&self) -> LinearAtom {
        LinearAtom {
            a: self.b,
            b: self.a,
            c: self.c,
            op: self.op,
        }
    }

    /// Line through `p1` and `p2`, oriented so `inside` satisfies it.
    /// `None` when the points coincide or `inside` sits on the line.
    fn through(p1: (f64, f64), p2: (f64, f64), inside: (f64, f64)) -> Option<LinearAtom> {
        let (dx, dy) = (p2.0 - p1.0, p2.1 - p1.1);
        let scale = dx.abs().max(dy.abs());
        if scale <= 1e-300 {
            return None;
        }
        let mut atom = LinearAtom {
            a: -dy,
            b: dx,
            c: dy * p1.0 - dx * p1.1,
            op: CmpOp::Ge,
        };
        let v = atom.value(inside);
        if v.abs() <= 1e-12 * scale {
            return None;
        }
        if v < 0.0 {
            atom = LinearAtom {
                a: -atom.a,
                b: -atom.b,
                c: -atom.c,
                op: CmpOp::Ge,
            };
        }
        Some(atom)
    }

    fn pretty(&self) -> String {
        let mut s = String::new();
        let push_term = |coef: f64, var: &str, s: &mut String| {
            if coef == 0.0 {
                return;
            }
            if !s.is_empty() {
                s.push_str(if coef < 0.0 { " - " } else { " + " });
            } else if coef < 0.0 {
                s.push('-');
            }
            let m = coef.abs();
            if m == 1.0 && !var.is_empty() {
                s.push_str(var);
            } else if var.is_empty() {
                s.push_str(&format!("{m:?}"));
            } else {
                s.push_str(&format!("{m:?}*{var}"));
            }
        };
        push_term(self.a, "x", &mut s);
        push_term(self.b, "y", &mut s);
        push_term(self.c, "", &mut s);
        if s.is_empty() {
            s.push('0');
        }
        s
    }
}

#[derive(Serialize, Deserialize)]
struct LinearAtomDoc {
    op: String,
    cmp: String,
    lhs: String,
    linear: [f64; 3],
}

impl From<LinearAtom> for LinearAtomDoc {
    fn from(a: LinearAtom) -> Self {
        LinearAtomDoc {
            op: "cmp".into(),
            cmp: match a.op {
                CmpOp::Le => "<=0".into(),
                CmpOp::Ge => ">=0".into(),
            },
            lhs: a.pretty(),
            linear: [a.a, a.b, a.c],
        }
    }
}

impl TryFrom<LinearAtomDoc> for LinearAtom {
    type Error = String;
    fn try_from(d: LinearAtomDoc) -> Result<Self, String> {
        let op = match d.cmp.as_str() {
            "<=0" => CmpOp::Le,
            ">=0" => CmpOp::Ge,
            other => return Err(format!("unknown comparison `{other}`")),
        };
        Ok(LinearAtom {
            a: d.linear[0],
            b: d.linear[1],
            c: d.linear[2],
            op,
        })
    }
}

/// One factor of the corner-product atom: the clamped piece function
/// translated by a vertex offset. Its residual at an obstacle point is
/// `y − g(x − dx) − dy` (in piece-local coordinates).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CornerTrajectory {
    pub g: ClampedPiece,
    pub dx: f64,
    pub dy: f64,
}

impl CornerTrajectory {
    fn residual(&self, local: (f64, f64)) -> Result<f64, ExprError> {
        Ok(local.1 - self.g.eval(local.0 - self.dx)? - self.dy)
    }
}

/// The between-corner-trajectories test: residual_i · residual_j ≤ 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CornerProductAtom {
    pub gi: CornerTrajectory,
    pub gj: CornerTrajectory,
    /// Atom was built in axis-swapped coordinates (x=f(y) piece);
    /// evaluate with world (y, x).
    pub swapped: bool,
}

impl CornerProductAtom {
    fn local(&self, q: (f64, f64)) -> (f64, f64) {
        if self.swapped {
            (q.1, q.0)
        } else {
            q
        }
    }

    pub fn holds(&self, q: (f64, f64)) -> Result<bool, ExprError> {
        let l = self.local(q);
        Ok(self.gi.residual(l)? * self.gj.residual(l)? <= 0.0)
    }

    /// Proximity to the atom's boundary: the product is zero exactly when
    /// one factor is, so the smaller |residual| is the relevant measure.
    pub fn boundary_distance(&self, q: (f64, f64)) -> Result<f64, ExprError> {
        let l = self.local(q);
        Ok(self.gi.residual(l)?.abs().min(self.gj.residual(l)?.abs()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Clause {
    /// guards ∧ corner-product, over one fixed-active-pair run.
    Segment {
        guards: Vec<LinearAtom>,
        corner: CornerProductAtom,
    },
    /// Polygon footprint at a transition placement: one half-plane per
    /// edge.
    Notch {
        placement: (f64, f64),
        halfplanes: Vec<LinearAtom>,
    },
}

impl Clause {
    pub fn holds(&self, q: (f64, f64)) -> Result<bool, ExprError> {
        match self {
            Clause::Segment { guards, corner } => {
                if !guards.iter().all(|g| g.holds(q)) {
                    return Ok(false);
                }
                corner.holds(q)
            }
            Clause::Notch { halfplanes, .. } => Ok(halfplanes.iter().all(|h| h.holds(q))),
        }
    }

    /// Distance from `q` to the nearest atom boundary of this clause.
    pub fn boundary_distance(&self, q: (f64, f64)) -> f64 {
        match self {
            Clause::Segment { guards, corner } => {
                let g = guards
                    .iter()
                    .map(|a| a.boundary_distance(q))
                    .fold(f64::INFINITY, f64::min);
                let c = corner.boundary_distance(q).unwrap_or(f64::INFINITY);
                g.min(c)
            }
            Clause::Notch { halfplanes, .. } => halfplanes
                .iter()
                .map(|a| a.boundary_distance(q))
                .fold(f64::INFINITY, f64::min),
        }
    }
}

/// The compiled predicate: `unsafe(q) = any clause holds at q`.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionFormula {
    pub clauses: Vec<Clause>,
}

impl RegionFormula {
    /// True when the obstacle point is in the unsafe (reachable) region.
    pub fn evaluate(&self, q: (f64, f64)) -> Result<bool, ExprError> {
        for c in &self.clauses {
            if c.holds(q)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// True when `q` lies within `tol` of any atom's zero set — the
    /// conservative "too close to the boundary to trust a strict
    /// comparison" test used by the validators.
    pub fn near_boundary(&self, q: (f64, f64), tol: f64) -> bool {
        self.clauses.iter().any(|c| c.boundary_distance(q) <= tol)
    }

    /// Disjunction of several compiled regions (union of unsafe sets).
    pub fn union(parts: Vec<RegionFormula>) -> RegionFormula {
        RegionFormula {
            clauses: parts.into_iter().flat_map(|f| f.clauses).collect(),
        }
    }

    pub fn segment_clause_count(&self) -> usize {
        self.clauses
            .iter()
            .filter(|c| matches!(c, Clause::Segment { .. }))
            .count()
    }

    pub fn notch_placements(&self) -> Vec<(f64, f64)> {
        self.clauses
            .iter()
            .filter_map(|c| match c {
                Clause::Notch { placement, .. } => Some(*placement),
                _ => None,
            })
            .collect()
    }
}

impl Serialize for RegionFormula {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("RegionFormula", 2)?;
        st.serialize_field("op", "or")?;
        st.serialize_field("args", &self.clauses)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for RegionFormula {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<RegionFormula, D::Error> {
        #[derive(Deserialize)]
        struct Doc {
            op: String,
            args: Vec<Clause>,
        }
        let doc = Doc::deserialize(d)?;
        if doc.op != "or" {
            return Err(serde::de::Error::custom(format!(
                "expected top-level op \"or\", got {:?}",
                doc.op
            )));
        }
        Ok(RegionFormula { clauses: doc.args })
    }
}

/// Segment clause per the generic explicit formulation: x-bound guard
/// (dropping infinite sides), the line through the two active corners at
/// each finite segment end, and the corner-product atom.
pub fn segment_clause(t: &Trajectory, p: &Polygon, seg: &Segment) -> Clause {
    let piece = &t.pieces[seg.piece];
    let local = local_polygon(piece, p);
    let swapped = piece.orientation == Orientation::XOfY;
    let verts = local.vertices();
    let (di, dj) = (verts[seg.pair.upper], verts[seg.pair.lower]);
    let w = local.w_x();

    let mut guards: Vec<LinearAtom> = Vec::new();
    if seg.lo.is_finite() {
        guards.push(LinearAtom {
            a: 1.0,
            b: 0.0,
            c: -(seg.lo - w),
            op: CmpOp::Ge,
        });
    }
    if seg.hi.is_finite() {
        guards.push(LinearAtom {
            a: 1.0,
            b: 0.0,
            c: -(seg.hi + w),
            op: CmpOp::Le,
        });
    }

    // Interior reference point: the trajectory point mid-segment.
    let (wa, wb) = (
        seg.lo.max(piece.finite_window(1e6).0),
        seg.hi.min(piece.finite_window(1e6).1),
    );
    let mid = 0.5 * (wa + wb);
    let mid_pt = (mid, seg.g.eval(mid).expect("segment interior is defined"));

    for end in [seg.g.lo, seg.g.hi].into_iter().flatten() {
        let (xt, yt) = end;
        let p1 = (xt + di.0, yt + di.1);
        let p2 = (xt + dj.0, yt + dj.1);
        if let Some(atom) = LinearAtom::through(p1, p2, mid_pt) {
            guards.push(atom);
        }
    }

    if swapped {
        guards = guards.iter().map(|g| g.swap_axes()).collect();
    }

    Clause::Segment {
        guards,
        corner: CornerProductAtom {
            gi: CornerTrajectory {
                g: seg.g.clone(),
                dx: di.0,
                dy: di.1,
            },
            gj: CornerTrajectory {
                g: seg.g.clone(),
                dx: dj.0,
                dy: dj.1,
            },
            swapped,
        },
    }
}

/// Point-in-polygon at a fixed placement, expanded to one closed
/// half-plane atom per edge (world coordinates).
pub fn notch_clause(p: &Polygon, placement: (f64, f64)) -> Clause {
    let verts = p.vertices();
    let n = verts.len();
    let halfplanes = (0..n)
        .map(|i| {
            let a = (placement.0 + verts[i].0, placement.1 + verts[i].1);
            let b = (
                placement.0 + verts[(i + 1) % n].0,
                placement.1 + verts[(i + 1) % n].1,
            );
            let (dx, dy) = (b.0 - a.0, b.1 - a.1);
            LinearAtom {
                a: -dy,
                b: dx,
                c: dy * a.0 - dx * a.1,
                op: CmpOp::Ge,
            }
        })
        .collect();
    Clause::Notch {
        placement,
        halfplanes,
    }
}

/// Compile the full unsafe-region predicate for polygon `p` translating
/// along `t`.
pub fn compile(
    t: &Trajectory,
    p: &Polygon,
    opts: &TransitionOptions,
) -> Result<RegionFormula, TransitionError> {
    let tps = find_transitions(t, p, opts)?;
    let segs = build_segments(t, p, &tps, opts)?;
    let mut clauses: Vec<Clause> = segs.iter().map(|s| segment_clause(t, p, s)).collect();
    // A piecewise boundary is reported once per adjacent piece; one notch
    // suffices.
    let mut placed: Vec<(f64, f64)> = Vec::new();
    for tp in &tps {
        if placed
            .iter()
            .any(|&(x, y)| (x - tp.x).abs() <= opts.merge_eps && (y - tp.y).abs() <= opts.merge_eps)
        {
            continue;
        }
        placed.push((tp.x, tp.y));
        clauses.push(notch_clause(p, (tp.x, tp.y)));
    }
    Ok(RegionFormula { clauses })
}

/// LaTeX rendering: one `\left( … \right)` group per clause, joined by
/// `\lor`, atoms over `x_O, y_O`.
pub fn to_latex(f: &RegionFormula) -> String {
    let atom = |a: &LinearAtom| {
        let cmp = match a.op {
            CmpOp::Le => "\\leq",
            CmpOp::Ge => "\\geq",
        };
        format!("{} {cmp} 0", latex_linear(a))
    };
    let clauses: Vec<String> = f
        .clauses
        .iter()
        .map(|c| match c {
            Clause::Segment { guards, corner } => {
                let mut parts: Vec<String> = guards.iter().map(atom).collect();
                parts.push(format!(
                    "\\big({}\\big)\\big({}\\big) \\leq 0",
                    latex_residual(&corner.gi, corner.swapped),
                    latex_residual(&corner.gj, corner.swapped)
                ));
                format!("\\left( {} \\right)", parts.join(" \\land "))
            }
            Clause::Notch { halfplanes, .. } => {
                let parts: Vec<String> = halfplanes.iter().map(atom).collect();
                format!("\\left( {} \\right)", parts.join(" \\land "))
            }
        })
        .collect();
    format!("\\textbf{{unsafe?}} = {}", clauses.join(" \\lor "))
}

fn latex_num(v: f64) -> String {
    if v == v.trunc() && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        format!("{v:?}")
    }
}

fn latex_linear(a: &LinearAtom) -> String {
    let mut out = String::new();
    for (coef, var) in [(a.a, "x_O"), (a.b, "y_O"), (a.c, "")] {
        if coef == 0.0 {
            continue;
        }
        if !out.is_empty() {
            out.push_str(if coef < 0.0 { " - " } else { " + " });
        } else if coef < 0.0 {
            out.push('-');
        }
        let m = coef.abs();
        if var.is_empty() {
            out.push_str(&latex_num(m));
        } else if m == 1.0 {
            out.push_str(var);
        } else {
            out.push_str(&format!("{} {var}", latex_num(m)));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn latex_residual(ct: &CornerTrajectory, swapped: bool) -> String {
    let (xv, yv) = if swapped { ("y_O", "x_O") } else { ("x_O", "y_O") };
    let shift = if ct.dx == 0.0 {
        xv.to_string()
    } else if ct.dx > 0.0 {
        format!("{xv} - {}", latex_num(ct.dx))
    } else {
        format!("{xv} + {}", latex_num(-ct.dx))
    };
    let off = if ct.dy == 0.0 {
        String::new()
    } else if ct.dy > 0.0 {
        format!(" - {}", latex_num(ct.dy))
    } else {
        format!(" + {}", latex_num(-ct.dy))
    };
    format!("{yv} - g({shift}){off}")
}

/// CAS text (Mathematica syntax): the predicate over `x, y` with clamped
/// pieces kept in `Piecewise` case form, wrapped in a `RegionPlot`
/// command over the given window.
pub fn to_cas(f: &RegionFormula, window: (f64, f64, f64, f64)) -> String {
    let atom = |a: &LinearAtom| {
        let cmp = match a.op {
            CmpOp::Le => "<=",
            CmpOp::Ge => ">=",
        };
        format!("{} {cmp} 0", a.pretty())
    };
    let clauses: Vec<String> = f
        .clauses
        .iter()
        .map(|c| match c {
            Clause::Segment { guards, corner } => {
                let mut parts: Vec<String> = guards.iter().map(atom).collect();
                parts.push(format!(
                    "({})*({}) <= 0",
                    cas_residual(&corner.gi, corner.swapped),
                    cas_residual(&corner.gj, corner.swapped)
                ));
                format!("({})", parts.join(" && "))
            }
            Clause::Notch { halfplanes, .. } => {
                let parts: Vec<String> = halfplanes.iter().map(atom).collect();
                format!("({})", parts.join(" && "))
            }
        })
        .collect();
    let body = clauses.join(" || ");
    let (x0, x1, y0, y1) = window;
    format!("RegionPlot[{body}, {{x, {x0:?}, {x1:?}}}, {{y, {y0:?}, {y1:?}}}]")
}

fn cas_residual(ct: &CornerTrajectory, swapped: bool) -> String {
    let (xv, yv) = if swapped { ("y", "x") } else { ("x", "y") };
    let arg = if ct.dx == 0.0 {
        xv.to_string()
    } else if ct.dx > 0.0 {
        format!("({xv} - {:?})", ct.dx)
    } else {
        format!("({xv} + {:?})", -ct.dx)
    };
    // f's formal variable becomes the shifted obstacle coordinate.
    let fx = cas_expr(&ct.g.f, &arg);
    let g = match (ct.g.lo, ct.g.hi) {
        (Some((a, va)), Some((b, vb))) => format!(
            "Piecewise[{{{{{va:?}, {arg} <= {a:?}}}, {{{vb:?}, {arg} >= {b:?}}}}}, {fx}]"
        ),
        (Some((a, va)), None) => {
            format!("Piecewise[{{{{{va:?}, {arg} <= {a:?}}}}}, {fx}]")
        }
        (None, Some((b, vb))) => {
            format!("Piecewise[{{{{{vb:?}, {arg} >= {b:?}}}}}, {fx}]")
        }
        (None, None) => fx,
    };
    let off = if ct.dy == 0.0 {
        String::new()
    } else if ct.dy > 0.0 {
        format!(" - {:?}", ct.dy)
    } else {
        format!(" + {:?}", -ct.dy)
    };
    format!("{yv} - {g}{off}")
}

/// Render an expression in Mathematica syntax with the formal variable
/// replaced by `var`.
fn cas_expr(e: &Expr, var: &str) -> String {
    use crate::expr::Scalar;
    match e {
        Expr::Num(Scalar::Float(v)) => format!("{v:?}"),
        Expr::Num(s) => format!("({s})"),
        Expr::Var => var.to_string(),
        Expr::Add(a, b) => format!("({} + {})", cas_expr(a, var), cas_expr(b, var)),
        Expr::Sub(a, b) => format!("({} - {})", cas_expr(a, var), cas_expr(b, var)),
        Expr::Mul(a, b) => format!("({}*{})", cas_expr(a, var), cas_expr(b, var)),
        Expr::Div(a, b) => format!("({}/{})", cas_expr(a, var), cas_expr(b, var)),
        Expr::Pow(b, n) => format!("({}^{n})", cas_expr(b, var)),
        Expr::Sqrt(a) => format!("Sqrt[{}]", cas_expr(a, var)),
    }
}
