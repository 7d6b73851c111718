//! Convex polygons: validation, active-corner selection by trajectory
//! direction, point containment, and Minkowski-sum obstacle inflation.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("vertices {0} and {1} coincide")]
    DuplicateVertex(usize, usize),
    #[error("polygon is not strictly convex in counter-clockwise order at vertex {0}")]
    NotConvexCcw(usize),
    #[error("regular polygon needs at least 3 sides, got {0}")]
    BadSideCount(usize),
    #[error("regular polygon radius must be positive, got {0}")]
    BadRadius(f64),
}

/// Convex polygon stored as CCW vertex offsets from its center.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polygon {
    verts: Vec<(f64, f64)>,
    w_x: f64,
    h_y: f64,
    centrally_symmetric: bool,
}

/// Indices of the two simultaneously active vertices for some trajectory
/// direction: `upper` maximizes the left-normal projection, `lower`
/// minimizes it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActivePair {
    pub upper: usize,
    pub lower: usize,
}

impl Polygon {
    /// Validate and build a polygon from CCW vertex offsets. Rejects
    /// clockwise input, repeated vertices and collinear triples.
    pub fn new(verts: Vec<(f64, f64)>) -> Result<Polygon, GeometryError> {
        let n = verts.len();
        if n < 3 {
            return Err(GeometryError::TooFewVertices(n));
        }
        for i in 0..n {
            let j = (i + 1) % n;
            if verts[i] == verts[j] {
                return Err(GeometryError::DuplicateVertex(i, j));
            }
        }
        for i in 0..n {
            let a = verts[i];
            let b = verts[(i + 1) % n];
            let c = verts[(i + 2) % n];
            let cross = (b.0 - a.0) * (c.1 - b.1) - (b.1 - a.1) * (c.0 - b.0);
            if cross <= 0.0 {
                return Err(GeometryError::NotConvexCcw((i + 1) % n));
            }
        }
        let w_x = verts.iter().map(|v| v.0.abs()).fold(0.0, f64::max);
        let h_y = verts.iter().map(|v| v.1.abs()).fold(0.0, f64::max);
        let centrally_symmetric = n % 2 == 0 && {
            let scale = w_x.max(h_y).max(1e-300);
            (0..n / 2).all(|i| {
                let a = verts[i];
                let b = verts[i + n / 2];
                (a.0 + b.0).abs() <= 1e-12 * scale && (a.1 + b.1).abs() <= 1e-12 * scale
            })
        };
        Ok(Polygon {
            verts,
            w_x,
            h_y,
            centrally_symmetric,
        })
    }

    /// Axis-aligned rectangle of half-width `w` and half-height `h`.
    pub fn rectangle(w: f64, h: f64) -> Polygon {
        Polygon::new(vec![(w, h), (-w, h), (-w, -h), (w, -h)]).expect("valid rectangle")
    }

    /// Regular n-gon whose inscribed circle has radius
    /// `inscribed_circle_radius` (the apothem); first vertex at angle
    /// `rotation` (radians, CCW from +x).
    pub fn regular_ngon(
        n: usize,
        inscribed_circle_radius: f64,
        rotation: f64,
    ) -> Result<Polygon, GeometryError> {
        if n < 3 {
            return Err(GeometryError::BadSideCount(n));
        }
        if !(inscribed_circle_radius > 0.0) {
            return Err(GeometryError::BadRadius(inscribed_circle_radius));
        }
        let circumradius = inscribed_circle_radius / (std::f64::consts::PI / n as f64).cos();
        Polygon::regular_ngon_circumradius(n, circumradius, rotation)
    }

    /// Regular n-gon with vertices at distance `circumradius` from the
    /// center; first vertex at angle `rotation`.
    pub fn regular_ngon_circumradius(
        n: usize,
        circumradius: f64,
        rotation: f64,
    ) -> Result<Polygon, GeometryError> {
        if n < 3 {
            return Err(GeometryError::BadSideCount(n));
        }
        if !(circumradius > 0.0) {
            return Err(GeometryError::BadRadius(circumradius));
        }
        let verts = (0..n)
            .map(|k| {
                let a = rotation + 2.0 * std::f64::consts::PI * k as f64 / n as f64;
                // Snap near-zero coordinates so axis-aligned shapes come
                // out exact (cos(pi/2) is not 0.0 in doubles).
                let snap = |v: f64| if v.abs() < 1e-15 * circumradius { 0.0 } else { v };
                (snap(circumradius * a.cos()), snap(circumradius * a.sin()))
            })
            .collect();
        Polygon::new(verts)
    }

    pub fn vertices(&self) -> &[(f64, f64)] {
        &self.verts
    }

    pub fn len(&self) -> usize {
        self.verts.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// x half-extent: max |Δx_i|.
    pub fn w_x(&self) -> f64 {
        self.w_x
    }

    /// y half-extent: max |Δy_i|.
    pub fn h_y(&self) -> f64 {
        self.h_y
    }

    pub fn centrally_symmetric(&self) -> bool {
        self.centrally_symmetric
    }

    /// Direction angles (radians, in [0, 2π)) of each edge v_k → v_{k+1}.
    pub fn side_directions(&self) -> Vec<(f64, f64)> {
        let n = self.verts.len();
        (0..n)
            .map(|k| {
                let a = self.verts[k];
                let b = self.verts[(k + 1) % n];
                (b.0 - a.0, b.1 - a.1)
            })
            .collect()
    }

    /// Active vertex pairs for a trajectory heading `dir` (need not be
    /// normalized). A vertex is active when it is extreme along the left
    /// normal of `dir`; at a tie (heading parallel to a side) both side
    /// endpoints are extreme and every extreme pairing is reported.
    pub fn active_pairs(&self, dir: (f64, f64)) -> Vec<ActivePair> {
        let norm = (dir.0 * dir.0 + dir.1 * dir.1).sqrt();
        debug_assert!(norm > 0.0, "zero direction");
        let nx = -dir.1 / norm;
        let ny = dir.0 / norm;
        let dots: Vec<f64> = self.verts.iter().map(|v| nx * v.0 + ny * v.1).collect();
        let scale = self.w_x.max(self.h_y).max(1e-300);
        let tol = 1e-9 * scale;
        let max = dots.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let min = dots.iter().cloned().fold(f64::INFINITY, f64::min);
        let uppers: Vec<usize> = (0..dots.len()).filter(|&i| max - dots[i] <= tol).collect();
        let lowers: Vec<usize> = (0..dots.len()).filter(|&i| dots[i] - min <= tol).collect();
        if self.centrally_symmetric {
            // Opposite vertices stay paired; a tie then yields exactly
            // one pair per extreme side endpoint.
            let half = self.verts.len() / 2;
            uppers
                .iter()
                .map(|&u| ActivePair {
                    upper: u,
                    lower: (u + half) % self.verts.len(),
                })
                .collect()
        } else {
            uppers
                .iter()
                .flat_map(|&u| lowers.iter().map(move |&l| ActivePair { upper: u, lower: l }))
                .collect()
        }
    }

    /// Closed containment test for `q` against this polygon translated to
    /// `center`. `tol ≥ 0` widens the boundary; `tol = 0` is the exact
    /// closed region.
    pub fn contains(&self, center: (f64, f64), q: (f64, f64), tol: f64) -> bool {
        let n = self.verts.len();
        let (px, py) = (q.0 - center.0, q.1 - center.1);
        for i in 0..n {
            let a = self.verts[i];
            let b = self.verts[(i + 1) % n];
            let cross = (b.0 - a.0) * (py - a.1) - (b.1 - a.1) * (px - a.0);
            if cross < -tol {
                return false;
            }
        }
        true
    }

    /// Minkowski sum of `self` (the moving object) with the
    /// point-reflection of `obstacle`: the two bodies collide at relative
    /// center offset d exactly when the inflated polygon contains d.
    pub fn inflate(&self, obstacle: &Polygon) -> Polygon {
        let mut sums = Vec::with_capacity(self.verts.len() * obstacle.verts.len());
        for a in &self.verts {
            for b in &obstacle.verts {
                sums.push((a.0 - b.0, a.1 - b.1));
            }
        }
        let hull = convex_hull(sums);
        Polygon::new(hull).expect("Minkowski sum of convex polygons is convex")
    }

    /// Mirror across the y-axis (order reversed to stay CCW).
    pub fn reflect_x(&self) -> Polygon {
        let mut verts: Vec<(f64, f64)> = self.verts.iter().map(|v| (-v.0, v.1)).collect();
        verts.reverse();
        Polygon::new(verts).expect("reflection preserves convexity")
    }

    /// Reflect across the line y = x (order reversed to stay CCW); used
    /// to process x=f(y) trajectory pieces through the y=f(x) pipeline.
    pub fn swap_axes(&self) -> Polygon {
        let mut verts: Vec<(f64, f64)> = self.verts.iter().map(|v| (v.1, v.0)).collect();
        verts.reverse();
        Polygon::new(verts).expect("axis swap preserves convexity")
    }

    /// Translate every vertex (changes the center offset interpretation;
    /// used by tests, not the compile pipeline).
    pub fn translated(&self, d: (f64, f64)) -> Result<Polygon, GeometryError> {
        Polygon::new(self.verts.iter().map(|v| (v.0 + d.0, v.1 + d.1)).collect())
    }
}

/// Andrew's monotone chain. Strictly convex output: collinear hull points
/// are dropped.
fn convex_hull(mut pts: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let cross = |o: (f64, f64), a: (f64, f64), b: (f64, f64)| {
        (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
    };
    let mut lower: Vec<(f64, f64)> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<(f64, f64)> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}
