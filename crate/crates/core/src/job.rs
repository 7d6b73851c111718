//! Job files: JSON descriptions of a compile/validate task — polygon,
//! trajectory pieces, optional obstacle (inflation), validation grid and
//! output options.

use crate::expr::Expr;
use crate::geometry::{GeometryError, Polygon};
use crate::oracle::{OracleConfig, ValidationGrid};
use crate::trajectory::{Orientation, Piece, Trajectory, TrajectoryError};
use serde::Deserialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum JobError {
    #[error("cannot read job file: {0}")]
    Io(#[from] std::io::Error),
    #[error("job file: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("field `polygon`: specify exactly one of `vertices` or `regular`")]
    PolygonSource,
    #[error("field `polygon`: {0}")]
    Polygon(GeometryError),
    #[error("field `obstacle`: {0}")]
    Obstacle(GeometryError),
    #[error("field `trajectory`: {0}")]
    Trajectory(#[from] TrajectoryError),
    #[error("field `trajectory[{index}].f`: {source}")]
    PieceExpr {
        index: usize,
        source: crate::expr::ExprError,
    },
    #[error("field `validation.grid`: empty or inverted grid")]
    Grid,
}

/// A number in a job file: JSON number, rational string "p/q", or an
/// "inf"/"-inf" sentinel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Num(pub f64);

impl<'de> Deserialize<'de> for Num {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Num, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            F(f64),
            S(String),
        }
        let v = match Raw::deserialize(d)? {
            Raw::F(v) => v,
            Raw::S(s) => parse_num(&s).map_err(serde::de::Error::custom)?,
        };
        Ok(Num(v))
    }
}

pub fn parse_num(s: &str) -> Result<f64, String> {
    let s = s.trim();
    match s {
        "inf" | "+inf" => return Ok(f64::INFINITY),
        "-inf" => return Ok(f64::NEG_INFINITY),
        _ => {}
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: f64 = p.trim().parse().map_err(|_| format!("bad rational `{s}`"))?;
        let q: f64 = q.trim().parse().map_err(|_| format!("bad rational `{s}`"))?;
        if q == 0.0 {
            return Err(format!("zero denominator in `{s}`"));
        }
        return Ok(p / q);
    }
    s.parse().map_err(|_| format!("bad number `{s}`"))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegularSpec {
    pub sides: usize,
    /// Inscribed-circle radius; mutually exclusive with `circumradius`.
    pub apothem: Option<Num>,
    pub circumradius: Option<Num>,
    #[serde(default)]
    pub rotation_deg: Option<Num>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolygonSpec {
    pub vertices: Option<Vec<(Num, Num)>>,
    pub regular: Option<RegularSpec>,
}

impl PolygonSpec {
    pub fn build(&self) -> Result<Polygon, JobError> {
        match (&self.vertices, &self.regular) {
            (Some(v), None) => {
                Polygon::new(v.iter().map(|(x, y)| (x.0, y.0)).collect()).map_err(JobError::Polygon)
            }
            (None, Some(r)) => {
                let rot = r.rotation_deg.map(|n| n.0).unwrap_or(0.0).to_radians();
                match (&r.apothem, &r.circumradius) {
                    (Some(a), None) => {
                        Polygon::regular_ngon(r.sides, a.0, rot).map_err(JobError::Polygon)
                    }
                    (None, Some(c)) => Polygon::regular_ngon_circumradius(r.sides, c.0, rot)
                        .map_err(JobError::Polygon),
                    _ => Err(JobError::PolygonSource),
                }
            }
            _ => Err(JobError::PolygonSource),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PieceSpec {
    #[serde(default = "default_orientation")]
    pub orientation: Orientation,
    pub f: String,
    pub domain: (Num, Num),
}

fn default_orientation() -> Orientation {
    Orientation::YOfX
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub x0: Num,
    pub x1: Num,
    pub y0: Num,
    pub y1: Num,
    pub step: Num,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValidationSpec {
    pub traj_step: Num,
    pub grid: GridSpec,
    #[serde(default)]
    pub margin: Option<Num>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    #[serde(default)]
    pub name: Option<String>,
    pub polygon: PolygonSpec,
    /// Obstacle with area: the compiled polygon becomes the Minkowski
    /// inflation of `polygon` by it.
    #[serde(default)]
    pub obstacle: Option<PolygonSpec>,
    pub trajectory: Vec<PieceSpec>,
    pub validation: ValidationSpec,
    /// Plot window [x0, x1, y0, y1]; defaults to the validation grid.
    #[serde(default)]
    pub plot_window: Option<(Num, Num, Num, Num)>,
    /// Output formats for `compile`: subset of "json", "latex", "cas".
    #[serde(default)]
    pub formats: Option<Vec<String>>,
}

impl JobSpec {
    pub fn from_str(text: &str) -> Result<JobSpec, JobError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &std::path::Path) -> Result<JobSpec, JobError> {
        JobSpec::from_str(&std::fs::read_to_string(path)?)
    }

    /// The effective moving polygon: inflated by the obstacle when one
    /// is given.
    pub fn polygon(&self) -> Result<Polygon, JobError> {
        let p = self.polygon.build()?;
        match &self.obstacle {
            Some(o) => {
                let ob = o.build().map_err(|e| match e {
                    JobError::Polygon(g) => JobError::Obstacle(g),
                    other => other,
                })?;
                Ok(p.inflate(&ob))
            }
            None => Ok(p),
        }
    }

    pub fn trajectory(&self) -> Result<Trajectory, JobError> {
        let mut pieces = Vec::new();
        for (index, ps) in self.trajectory.iter().enumerate() {
            let f = Expr::parse(&ps.f).map_err(|source| JobError::PieceExpr { index, source })?;
            pieces.push(Piece::new(ps.orientation, f, ps.domain.0 .0, ps.domain.1 .0)?);
        }
        Ok(Trajectory::new(pieces)?)
    }

    pub fn oracle_config(&self) -> Result<OracleConfig, JobError> {
        let g = &self.validation.grid;
        let grid = ValidationGrid {
            x0: g.x0.0,
            x1: g.x1.0,
            y0: g.y0.0,
            y1: g.y1.0,
            step: g.step.0,
        };
        if !grid.is_valid() {
            return Err(JobError::Grid);
        }
        Ok(OracleConfig {
            traj_step: self.validation.traj_step.0,
            grid,
            margin: self.validation.margin.map(|n| n.0),
        })
    }

    pub fn plot_window(&self) -> Result<(f64, f64, f64, f64), JobError> {
        if let Some((a, b, c, d)) = &self.plot_window {
            return Ok((a.0, b.0, c.0, d.0));
        }
        let cfg = self.oracle_config()?;
        Ok((cfg.grid.x0, cfg.grid.x1, cfg.grid.y0, cfg.grid.y1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const DIVE_JOB: &str = r#"{
        "name": "worked-example",
        "polygon": {"vertices": [[2, 1], [-2, 1], [-2, -1], [2, -1]]},
        "trajectory": [
            {"orientation": "y-of-x", "f": "-2*x", "domain": [0, 5]},
            {"orientation": "y-of-x", "f": "x - 15", "domain": [5, "inf"]}
        ],
        "validation": {
            "traj_step": "1/100",
            "grid": {"x0": -5, "x1": 20, "y0": -12, "y1": 5, "step": 0.25}
        }
    }"#;

    #[test]
    fn parses_job() {
        let job = JobSpec::from_str(DIVE_JOB).unwrap();
        let p = job.polygon().unwrap();
        assert_eq!(p.w_x(), 2.0);
        let t = job.trajectory().unwrap();
        assert_eq!(t.pieces.len(), 2);
        assert!(t.pieces[1].hi.is_infinite());
        let cfg = job.oracle_config().unwrap();
        assert_eq!(cfg.traj_step, 0.01);
        assert_eq!(job.plot_window().unwrap(), (-5.0, 20.0, -12.0, 5.0));
    }

    #[test]
    fn rejects_unknown_field_by_name() {
        let bad = DIVE_JOB.replace("\"name\"", "\"nam\"");
        let err = JobSpec::from_str(&bad).unwrap_err().to_string();
        assert!(err.contains("nam"), "{err}");
    }

    #[test]
    fn rejects_double_polygon_source() {
        let bad = r#"{
            "polygon": {
                "vertices": [[1,0],[0,1],[-1,0],[0,-1]],
                "regular": {"sides": 6, "apothem": 1}
            },
            "trajectory": [{"f": "x", "domain": [0, 1]}],
            "validation": {"traj_step": 0.1,
                "grid": {"x0": 0, "x1": 1, "y0": 0, "y1": 1, "step": 0.5}}
        }"#;
        let job = JobSpec::from_str(bad).unwrap();
        assert!(matches!(job.polygon(), Err(JobError::PolygonSource)));
    }

    #[test]
    fn bad_expression_names_the_piece() {
        let bad = DIVE_JOB.replace("\"-2*x\"", "\"-2*z\"");
        let job = JobSpec::from_str(&bad).unwrap();
        let err = job.trajectory().unwrap_err().to_string();
        assert!(err.contains("trajectory[0].f"), "{err}");
    }

    #[test]
    fn rational_and_sentinel_numbers() {
        assert_eq!(parse_num("3/4").unwrap(), 0.75);
        assert_eq!(parse_num("-inf").unwrap(), f64::NEG_INFINITY);
        assert!(parse_num("1/0").is_err());
    }

    #[test]
    fn obstacle_triggers_inflation() {
        let with_obstacle = DIVE_JOB.replace(
            "\"trajectory\"",
            "\"obstacle\": {\"vertices\": [[0.75, 0.5], [-0.75, 0.5], [-0.75, -0.5], [0.75, -0.5]]},\n\"trajectory\"",
        );
        let job = JobSpec::from_str(&with_obstacle).unwrap();
        let p = job.polygon().unwrap();
        assert!((p.w_x() - 2.75).abs() < 1e-12);
        assert!((p.h_y() - 1.5).abs() < 1e-12);
    }
}
