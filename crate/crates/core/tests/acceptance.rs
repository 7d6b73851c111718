//! End-to-end gate: compiled predicates against hand-written references,
//! the published active-corner table, oracle certification of all
//! built-in instances, and randomized structural properties.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::time::Instant;
use swept_region::job::JobSpec;
use swept_region::oracle;
use swept_region::region::{self, Clause, RegionFormula};
use swept_region::transitions::TransitionOptions;
use swept_region::{Expr, Polygon, Trajectory};

const UAV_JOB: &str = include_str!("../jobs/uav-descent.job");
const CLIMB_JOB: &str = include_str!("../jobs/climb-out.job");
const ARC_JOB: &str = include_str!("../jobs/arc-line-arc.job");
const DIVE_JOB: &str = include_str!("../jobs/corner-dive.job");


/// The test harness captures `println!`; write criterion verdicts to the
/// real stdout so they show up in a plain `cargo test` run.
macro_rules! report {
    ($($arg:tt)*) => {{
        use std::io::Write as _;
        let _ = writeln!(std::io::stdout(), $($arg)*);
    }};
}

const S3: f64 = 1.732_050_807_568_877_2;

fn compile_job(text: &str) -> (RegionFormula, Trajectory, Polygon) {
    let spec = JobSpec::from_str(text).unwrap();
    let p = spec.polygon().unwrap();
    let t = spec.trajectory().unwrap();
    let f = region::compile(&t, &p, &TransitionOptions::default()).unwrap();
    (f, t, p)
}

// ---------------------------------------------------------------- 1

/// Hand-written reference for the rectangle-on-a-corner instance
/// (w=2, h=1; y=−2x then y=x−15): two convex pieces, written as
/// conjunctions of half-planes a·x + b·y + c ≥ 0.
const DIVE_REF: [&[(f64, f64, f64)]; 2] = [
    &[
        (1.0, 0.0, 2.0),    // x ≥ −2
        (0.0, -1.0, 1.0),   // y ≤ 1
        (2.0, 1.0, 5.0),    // y ≥ −2x − 5
        (-1.0, 0.0, 7.0),   // x ≤ 7
        (-2.0, -1.0, 5.0),  // y ≤ −2x + 5
        (0.0, 1.0, 11.0),   // y ≥ −11
    ],
    &[
        (1.0, 0.0, -3.0),   // x ≥ 3
        (0.0, 1.0, 11.0),   // y ≥ −11
        (1.0, -1.0, -12.0), // y ≤ x − 12
        (-1.0, 1.0, 18.0),  // y ≥ x − 18
    ],
];

fn halfplanes_hold(hp: &[(f64, f64, f64)], q: (f64, f64)) -> bool {
    hp.iter().all(|&(a, b, c)| a * q.0 + b * q.1 + c >= 0.0)
}

fn halfplanes_boundary_dist(hp: &[(f64, f64, f64)], q: (f64, f64)) -> f64 {
    hp.iter()
        .map(|&(a, b, c)| (a * q.0 + b * q.1 + c).abs() / a.hypot(b))
        .fold(f64::INFINITY, f64::min)
}

#[test]
fn corner_dive_matches_reference_predicate() {
    let start = Instant::now();
    let (f, _, _) = compile_job(DIVE_JOB);
    let reference = |q| DIVE_REF.iter().any(|hp| halfplanes_hold(hp, q));
    let ref_dist =
        |q| DIVE_REF.iter().map(|hp| halfplanes_boundary_dist(hp, q)).fold(f64::INFINITY, f64::min);

    let (mut checked, mut skipped) = (0usize, 0usize);
    let mut y = -12.0f64;
    while y <= 5.0 + 1e-12 {
        let mut x = -5.0f64;
        while x <= 20.0 + 1e-12 {
            let q = (x, y);
            if ref_dist(q) <= 1e-9 || f.near_boundary(q, 1e-9) {
                skipped += 1;
            } else {
                assert_eq!(
                    f.evaluate(q).unwrap(),
                    reference(q),
                    "disagreement at ({x}, {y})"
                );
                checked += 1;
            }
            x += 0.25;
        }
        y += 0.25;
    }
    let dt = start.elapsed();
    assert!(checked > 5000, "only {checked} points checked");
    assert!(dt.as_secs_f64() < 5.0, "took {dt:?}");
    report!(
        "ACCEPTANCE 1 corner-dive vs reference predicate: PASS ({checked} agree, {skipped} on boundary, {dt:?})"
    );
}

// ---------------------------------------------------------------- 2

#[test]
fn hexagon_active_corner_table() {
    // Hexagon with v1 at −60°: v1=(1,−√3), v2=(2,0), …, CCW. Expected
    // active pairs: v1&v4 for θ∈[0°,60°], v2&v5 for [60°,120°],
    // v3&v6 for [120°,180°]; both pairs at the shared endpoints.
    let hex = Polygon::regular_ngon_circumradius(6, 2.0, (-60f64).to_radians()).unwrap();
    let expected = |deg: u32| -> Vec<(usize, usize)> {
        match deg {
            0 => vec![(0, 3), (2, 5)],
            60 => vec![(0, 3), (1, 4)],
            120 => vec![(1, 4), (2, 5)],
            d if d < 60 => vec![(0, 3)],
            d if d < 120 => vec![(1, 4)],
            _ => vec![(2, 5)],
        }
    };
    for deg in 0..180u32 {
        let a = (deg as f64).to_radians();
        let mut got: Vec<(usize, usize)> = hex
            .active_pairs((a.cos(), a.sin()))
            .iter()
            .map(|p| (p.upper.min(p.lower), p.upper.max(p.lower)))
            .collect();
        got.sort_unstable();
        got.dedup();
        let mut want = expected(deg);
        want.sort_unstable();
        assert_eq!(got, want, "at {deg} degrees");
    }
    report!("ACCEPTANCE 2 hexagon active-corner table at 1-degree sampling: PASS");
}

// ---------------------------------------------------------------- 3

// Hand-written reference for the hexagon descent (circumradius 2;
// y = −√3(x−5)/3 + 5√3 on [−12,5], then the circle arc √(100−x²) to
// (10,0)): three corner-trajectory clauses plus hexagon notches.

fn uav_g1(a: f64) -> f64 {
    if a < -12.0 {
        32.0 * S3 / 3.0
    } else if a <= 5.0 {
        -S3 * (a - 5.0) / 3.0 + 5.0 * S3
    } else {
        5.0 * S3
    }
}

fn uav_g2(a: f64) -> f64 {
    if a < 5.0 {
        5.0 * S3
    } else if a <= 5.0 * S3 {
        (100.0 - a * a).sqrt()
    } else {
        5.0
    }
}

fn uav_g3(a: f64) -> f64 {
    if a < 5.0 * S3 {
        5.0
    } else if a <= 10.0 {
        (100.0 - a * a).max(0.0).sqrt()
    } else {
        0.0
    }
}

const HEX_NOTCH_CENTERS: [(f64, f64); 4] = [
    (10.0, 0.0),
    (5.0, 5.0 * S3),
    (-12.0, 32.0 * S3 / 3.0),
    (5.0 * S3, 5.0),
];

/// Per-clause truth and distance-to-boundary proxy (min |atom residual|,
/// linear atoms normalized).
struct AtomSet {
    holds: bool,
    dist: f64,
}

fn uav_segment(
    q: (f64, f64),
    x_lo: f64,
    x_hi: f64,
    lines: (f64, f64), // offsets c1, c2 of the guard lines √3·x − y + c = 0
    corners: impl Fn(f64, f64) -> (f64, f64),
) -> AtomSet {
    let (x, y) = q;
    let l1 = S3 * x - y + lines.0;
    let l2 = S3 * x - y + lines.1;
    let (r1, r2) = corners(x, y);
    let holds = x >= x_lo && x <= x_hi && l1 * l2 <= 0.0 && r1 * r2 <= 0.0;
    let dist = [
        (x - x_lo).abs(),
        (x - x_hi).abs(),
        l1.abs() / 2.0,
        l2.abs() / 2.0,
        r1.abs(),
        r2.abs(),
    ]
    .into_iter()
    .fold(f64::INFINITY, f64::min);
    AtomSet { holds, dist }
}

fn uav_third_segment(q: (f64, f64)) -> AtomSet {
    let (x, y) = q;
    let (r1, r2) = (y - uav_g3(x - 2.0), y - uav_g3(x + 2.0));
    let holds = x >= 5.0 * S3 - 2.0 && x <= 12.0 && y * (y - 5.0) <= 0.0 && r1 * r2 <= 0.0;
    let dist = [
        (x - (5.0 * S3 - 2.0)).abs(),
        (x - 12.0).abs(),
        y.abs(),
        (y - 5.0).abs(),
        r1.abs(),
        r2.abs(),
    ]
    .into_iter()
    .fold(f64::INFINITY, f64::min);
    AtomSet { holds, dist }
}

fn hexagon_notch(center: (f64, f64), q: (f64, f64)) -> AtomSet {
    let verts: Vec<(f64, f64)> = (0..6)
        .map(|k| {
            let a = std::f64::consts::PI * k as f64 / 3.0;
            (center.0 + 2.0 * a.cos(), center.1 + 2.0 * a.sin())
        })
        .collect();
    let mut holds = true;
    let mut dist = f64::INFINITY;
    for i in 0..6 {
        let (ax, ay) = verts[i];
        let (bx, by) = verts[(i + 1) % 6];
        let cross = (bx - ax) * (q.1 - ay) - (by - ay) * (q.0 - ax);
        holds &= cross >= 0.0;
        dist = dist.min(cross.abs() / (bx - ax).hypot(by - ay));
    }
    AtomSet { holds, dist }
}

fn uav_reference(q: (f64, f64)) -> (bool, f64) {
    let mut parts = vec![
        uav_segment(q, -14.0, 7.0, (0.0, 68.0 * S3 / 3.0), |x, y| {
            (y - uav_g1(x - 1.0) - S3, y - uav_g1(x + 1.0) + S3)
        }),
        uav_segment(q, 3.0, 2.0 + 5.0 * S3, (0.0, -10.0), |x, y| {
            (y - uav_g2(x - 1.0) - S3, y - uav_g2(x + 1.0) + S3)
        }),
        uav_third_segment(q),
    ];
    parts.extend(HEX_NOTCH_CENTERS.iter().map(|&c| hexagon_notch(c, q)));
    let holds = parts.iter().any(|p| p.holds);
    let dist = parts.iter().map(|p| p.dist).fold(f64::INFINITY, f64::min);
    (holds, dist)
}

#[test]
fn uav_descent_matches_reference_predicate() {
    let start = Instant::now();
    let (f, _, _) = compile_job(UAV_JOB);
    let compile_time = start.elapsed();
    assert!(compile_time.as_secs_f64() < 5.0, "compile took {compile_time:?}");

    let (mut checked, mut skipped) = (0usize, 0usize);
    let mut y = -6.0f64;
    while y <= 16.0 + 1e-12 {
        let mut x = -20.0f64;
        while x <= 16.0 + 1e-12 {
            let q = (x, y);
            let (want, dist) = uav_reference(q);
            if dist <= 1e-6 || f.near_boundary(q, 1e-6) {
                skipped += 1;
            } else {
                assert_eq!(f.evaluate(q).unwrap(), want, "disagreement at ({x}, {y})");
                checked += 1;
            }
            x += 0.25;
        }
        y += 0.25;
    }
    assert!(checked > 10_000, "only {checked} points checked");
    report!(
        "ACCEPTANCE 3a uav-descent vs reference predicate: PASS ({checked} agree, {skipped} on boundary, compile {compile_time:?})"
    );
}

#[test]
fn uav_descent_oracle_validates() {
    let spec = JobSpec::from_str(UAV_JOB).unwrap();
    let (f, t, p) = compile_job(UAV_JOB);
    let cfg = spec.oracle_config().unwrap();
    assert_eq!(cfg.traj_step, 1e-3);
    assert_eq!(cfg.grid.step, 0.1);
    let report = oracle::validate(&f, &t, &p, &cfg).unwrap();
    assert!(report.pass(), "{}", report.summary());
    assert_eq!(report.soundness_violations, 0);
    report!("ACCEPTANCE 3b uav-descent oracle validation: {}", report.summary());
}

// ---------------------------------------------------------------- 4

#[test]
fn climb_out_clause_inventory_and_validation() {
    let spec = JobSpec::from_str(CLIMB_JOB).unwrap();
    let (f, t, p) = compile_job(CLIMB_JOB);

    assert_eq!(f.segment_clause_count(), 2);
    let mut notches = f.notch_placements();
    notches.sort_by(|a, b| a.partial_cmp(b).unwrap());
    assert_eq!(notches.len(), 2);
    // Domain start and the parabola/line boundary (the far end is open).
    assert!((notches[0].0).abs() < 1e-9 && (notches[0].1).abs() < 1e-9);
    assert!((notches[1].0 - 2.0).abs() < 1e-9 && (notches[1].1 - 2.0).abs() < 1e-9);

    let report = oracle::validate(&f, &t, &p, &spec.oracle_config().unwrap()).unwrap();
    assert!(report.pass(), "{}", report.summary());
    report!(
        "ACCEPTANCE 4 climb-out clause inventory (2 segments, notches at (0,0),(2,2)) and validation: {}",
        report.summary()
    );
}

// ---------------------------------------------------------------- 5

#[test]
fn arc_line_arc_oracle_validates() {
    let start = Instant::now();
    let spec = JobSpec::from_str(ARC_JOB).unwrap();
    let (f, t, p) = compile_job(ARC_JOB);
    let compile_time = start.elapsed();
    assert!(compile_time.as_secs_f64() < 10.0, "compile took {compile_time:?}");
    let cfg = spec.oracle_config().unwrap();
    assert_eq!(cfg.traj_step, 1e-3);
    assert_eq!(cfg.grid.step, 0.1);
    let report = oracle::validate(&f, &t, &p, &cfg).unwrap();
    assert!(report.pass(), "{}", report.summary());
    report!(
        "ACCEPTANCE 5 arc-line-arc oracle validation: {} (compile {compile_time:?})",
        report.summary()
    );
}

// ---------------------------------------------------------------- 6

const CASES: usize = 200;

fn random_instance(rng: &mut ChaCha8Rng) -> (Trajectory, Polygon) {
    let a: f64 = rng.gen_range(-1.5..1.5);
    let b: f64 = rng.gen_range(-2.0..2.0);
    let c: f64 = rng.gen_range(-3.0..3.0);
    let lo: f64 = rng.gen_range(-3.0..-0.5);
    let hi: f64 = rng.gen_range(0.5..3.0);
    let w: f64 = rng.gen_range(0.3..1.5);
    let h: f64 = rng.gen_range(0.3..1.2);
    let f = Expr::parse(&format!("({a:?})*x^2 + ({b:?})*x + ({c:?})")).unwrap();
    let piece =
        swept_region::Piece::new(swept_region::trajectory::Orientation::YOfX, f, lo, hi).unwrap();
    (Trajectory::new(vec![piece]).unwrap(), Polygon::rectangle(w, h))
}

fn random_probe(rng: &mut ChaCha8Rng, t: &Trajectory) -> (f64, f64) {
    let (lo, hi) = (t.pieces[0].lo, t.pieces[0].hi);
    let x = rng.gen_range(lo - 2.0..hi + 2.0);
    let y_mid = t.eval(lo).unwrap().min(0.0);
    (x, y_mid + rng.gen_range(-6.0..8.0))
}

#[test]
fn compiled_regions_are_translation_equivariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(61);
    let opts = TransitionOptions::default();
    let mut compared = 0usize;
    for _ in 0..CASES {
        let (t, p) = random_instance(&mut rng);
        let d = (rng.gen_range(-4.0..4.0), rng.gen_range(-4.0..4.0));
        let f = region::compile(&t, &p, &opts).unwrap();
        let f_shifted = region::compile(&t.translated(d), &p, &opts).unwrap();
        for _ in 0..20 {
            let q = random_probe(&mut rng, &t);
            let qs = (q.0 + d.0, q.1 + d.1);
            if f.near_boundary(q, 1e-7) || f_shifted.near_boundary(qs, 1e-7) {
                continue;
            }
            assert_eq!(
                f.evaluate(q).unwrap(),
                f_shifted.evaluate(qs).unwrap(),
                "shift {d:?}, probe {q:?}"
            );
            compared += 1;
        }
    }
    assert!(compared > CASES * 10, "only {compared} comparisons landed");
    report!("ACCEPTANCE 6a translation equivariance ({CASES} instances): PASS");
}

#[test]
fn compiled_regions_are_reflection_equivariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(62);
    let opts = TransitionOptions::default();
    let mut compared = 0usize;
    for _ in 0..CASES {
        let (t, p) = random_instance(&mut rng);
        let f = region::compile(&t, &p, &opts).unwrap();
        let f_mirror = region::compile(&t.reflect_x(), &p.reflect_x(), &opts).unwrap();
        for _ in 0..20 {
            let q = random_probe(&mut rng, &t);
            let qm = (-q.0, q.1);
            if f.near_boundary(q, 1e-7) || f_mirror.near_boundary(qm, 1e-7) {
                continue;
            }
            assert_eq!(
                f.evaluate(q).unwrap(),
                f_mirror.evaluate(qm).unwrap(),
                "probe {q:?}"
            );
            compared += 1;
        }
    }
    assert!(compared > CASES * 10, "only {compared} comparisons landed");
    report!("ACCEPTANCE 6b reflection equivariance ({CASES} instances): PASS");
}

#[test]
fn symbolic_derivative_matches_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(63);
    for case in 0..CASES {
        let coeffs: Vec<f64> = (0..5).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let mut text = format!("({:?})", coeffs[0]);
        for (k, c) in coeffs.iter().enumerate().skip(1) {
            text.push_str(&format!(" + ({c:?})*x^{k}"));
        }
        if case % 3 == 0 {
            text.push_str(" + sqrt(x + 10)");
        }
        let f = Expr::parse(&text).unwrap();
        let fp = f.differentiate();
        for _ in 0..5 {
            let x: f64 = rng.gen_range(-2.0..2.0);
            let h = 1e-5;
            let fd = (f.eval(x + h).unwrap() - f.eval(x - h).unwrap()) / (2.0 * h);
            let sym = fp.eval(x).unwrap();
            assert!(
                (sym - fd).abs() <= 1e-6 * (1.0 + sym.abs()),
                "{text} at {x}: symbolic {sym}, finite-difference {fd}"
            );
        }
    }
    report!("ACCEPTANCE 6c derivative vs finite differences ({CASES} cases): PASS");
}

#[test]
fn clamped_pieces_are_continuous_and_frozen() {
    let mut rng = ChaCha8Rng::seed_from_u64(64);
    for _ in 0..CASES {
        let (t, _) = random_instance(&mut rng);
        let piece = &t.pieces[0];
        let span = piece.hi - piece.lo;
        let a = piece.lo + rng.gen_range(0.05..0.45) * span;
        let b = piece.lo + rng.gen_range(0.55..0.95) * span;
        let g = swept_region::trajectory::ClampedPiece::new(piece, a, b).unwrap();
        let (ga, gb) = (g.eval(a).unwrap(), g.eval(b).unwrap());
        // Frozen outside, continuous at the clamp points.
        for d in [1e-6, 0.1, 3.0] {
            assert_eq!(g.eval(a - d).unwrap(), ga);
            assert_eq!(g.eval(b + d).unwrap(), gb);
        }
        assert!((g.eval(a + 1e-9).unwrap() - ga).abs() < 1e-6);
        assert!((g.eval(b - 1e-9).unwrap() - gb).abs() < 1e-6);
    }
    report!("ACCEPTANCE 6d clamped-piece continuity ({CASES} cases): PASS");
}

/// Random strictly convex CCW polygon: random edge vectors sorted by
/// angle, chained, then centered.
fn random_convex(rng: &mut ChaCha8Rng) -> Polygon {
    loop {
        let n = rng.gen_range(3..7);
        let mut angles: Vec<f64> = (0..n)
            .map(|_| rng.gen_range(0.0..std::f64::consts::TAU))
            .collect();
        angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let edges: Vec<(f64, f64)> = angles
            .iter()
            .map(|&a| {
                let len = rng.gen_range(0.3..1.2);
                (len * a.cos(), len * a.sin())
            })
            .collect();
        let mut verts = Vec::with_capacity(n);
        let (mut x, mut y) = (0.0, 0.0);
        for (ex, ey) in &edges {
            verts.push((x, y));
            x += ex;
            y += ey;
        }
        // Edge chaining only closes if the edge vectors sum to ~0; shear
        // the leftover across all vertices instead and recheck convexity.
        let (cx, cy) = (
            verts.iter().map(|v| v.0).sum::<f64>() / n as f64,
            verts.iter().map(|v| v.1).sum::<f64>() / n as f64,
        );
        let closing = ((-x) / n as f64, (-y) / n as f64);
        let adjusted: Vec<(f64, f64)> = verts
            .iter()
            .enumerate()
            .map(|(k, v)| {
                (
                    v.0 - cx + closing.0 * k as f64,
                    v.1 - cy + closing.1 * k as f64,
                )
            })
            .collect();
        if let Ok(p) = Polygon::new(adjusted) {
            return p;
        }
    }
}

/// Separating-axis intersection test for convex polygons at offsets.
fn sat_overlap(p: &Polygon, c: (f64, f64), o: &Polygon, q: (f64, f64)) -> (bool, f64) {
    let mut margin = f64::INFINITY;
    let mut overlap = true;
    for (poly, other, pc, oc) in [(p, o, c, q), (o, p, q, c)] {
        let verts = poly.vertices();
        for i in 0..verts.len() {
            let a = verts[i];
            let b = verts[(i + 1) % verts.len()];
            let n = (a.1 - b.1, b.0 - a.0); // outward-ish normal; sign moot
            let norm = n.0.hypot(n.1);
            let proj = |vs: &[(f64, f64)], off: (f64, f64)| {
                let mut lo = f64::INFINITY;
                let mut hi = f64::NEG_INFINITY;
                for v in vs {
                    let d = (v.0 + off.0) * n.0 + (v.1 + off.1) * n.1;
                    lo = lo.min(d);
                    hi = hi.max(d);
                }
                (lo, hi)
            };
            let (alo, ahi) = proj(poly.vertices(), pc);
            let (blo, bhi) = proj(other.vertices(), oc);
            let gap = (blo - ahi).max(alo - bhi) / norm;
            margin = margin.min(gap.abs());
            if gap > 0.0 {
                overlap = false;
            }
        }
    }
    (overlap, margin)
}

#[test]
fn inflation_reduces_polygon_collision_to_point_membership() {
    let mut rng = ChaCha8Rng::seed_from_u64(65);
    let mut compared = 0usize;
    for _ in 0..CASES {
        let p = random_convex(&mut rng);
        let o = random_convex(&mut rng);
        let inflated = p.inflate(&o);
        for _ in 0..10 {
            let c = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let q = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let (hit, margin) = sat_overlap(&p, c, &o, q);
            if margin < 1e-9 {
                continue;
            }
            assert_eq!(inflated.contains(c, q, 0.0), hit, "c {c:?}, q {q:?}");
            compared += 1;
        }
    }
    assert!(compared > CASES * 8, "only {compared} comparisons landed");
    report!("ACCEPTANCE 6e inflation reduction equivalence ({CASES} pairs): PASS");
}

#[test]
fn removing_an_apex_notch_breaks_soundness() {
    let mut rng = ChaCha8Rng::seed_from_u64(66);
    let opts = TransitionOptions::default();
    for case in 0..CASES {
        // Downward parabola: the active pair flips at the apex, leaving a
        // notch under the top edge of the rectangle placed there.
        let a: f64 = rng.gen_range(0.3..2.0);
        let l: f64 = rng.gen_range(1.0..3.0);
        let shift: f64 = rng.gen_range(-2.0..2.0);
        let w: f64 = rng.gen_range(0.5..1.5);
        let h: f64 = rng.gen_range(0.5..1.2);
        let f = Expr::parse(&format!("({:?})*x^2 + ({shift:?})", -a)).unwrap();
        let piece =
            swept_region::Piece::new(swept_region::trajectory::Orientation::YOfX, f, -l, l)
                .unwrap();
        let t = Trajectory::new(vec![piece]).unwrap();
        let p = Polygon::rectangle(w, h);
        let full = region::compile(&t, &p, &opts).unwrap();

        let mut mutated = full.clone();
        let before = mutated.clauses.len();
        mutated.clauses.retain(|c| match c {
            Clause::Notch { placement, .. } => placement.0.abs() > 1e-9,
            _ => true,
        });
        assert_eq!(before - mutated.clauses.len(), 1, "case {case}: no apex notch");

        // Points inside the polygon placed at the apex are unsafe by
        // construction; one of them must now test safe.
        let mut violated = false;
        for i in 0..40 {
            for j in 0..20 {
                let q = (
                    -w * 0.95 + 1.9 * w * i as f64 / 39.0,
                    shift - h * 0.95 + 1.9 * h * j as f64 / 19.0,
                );
                assert!(
                    full.evaluate(q).unwrap(),
                    "case {case}: full formula misses apex interior {q:?}"
                );
                if !mutated.evaluate(q).unwrap() {
                    violated = true;
                }
            }
        }
        assert!(violated, "case {case}: notch removal went unnoticed");
    }
    report!("ACCEPTANCE 6f notch mutation sensitivity ({CASES} parabola instances): PASS");
}

// ------------------------------------------------- CLI + artifacts

#[test]
fn cli_round_trip_and_reproducible_artifacts() {
    use std::process::Command;
    let bin = env!("CARGO_BIN_EXE_swept-region");
    let dir = std::env::temp_dir().join(format!("swept-region-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let job = dir.join("corner-dive.job");
    std::fs::write(&job, DIVE_JOB).unwrap();

    let run = |args: &[&str]| {
        Command::new(bin)
            .args(args)
            .current_dir(&dir)
            .output()
            .unwrap()
    };

    let out = run(&["compile", "corner-dive.job", "--format", "latex,cas"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let region_path = dir.join("corner-dive.region.json");
    let first = std::fs::read(&region_path).unwrap();
    let first_tex = std::fs::read(dir.join("corner-dive.tex")).unwrap();
    assert!(dir.join("corner-dive.cas.txt").exists());

    // Byte-reproducible artifacts.
    assert!(run(&["compile", "corner-dive.job", "--format", "latex,cas"]).status.success());
    assert_eq!(first, std::fs::read(&region_path).unwrap());
    assert_eq!(first_tex, std::fs::read(dir.join("corner-dive.tex")).unwrap());

    // Round-trip through the serialized formula.
    let f: RegionFormula =
        serde_json::from_str(&String::from_utf8(first.clone()).unwrap()).unwrap();
    assert!(f.evaluate((0.0, 0.0)).unwrap());

    let checks = [
        (&["eval", "corner-dive.region.json", "0", "0"][..], Some(1), "UNSAFE"),
        (&["eval", "corner-dive.region.json", "100", "100"][..], Some(0), "SAFE"),
        (&["eval", "corner-dive.region.json", "5", "-10.5"][..], Some(1), "UNSAFE"),
        (&["eval", "corner-dive.region.json", "5", "oops"][..], Some(2), ""),
    ];
    for (args, code, needle) in checks {
        let out = run(args);
        assert_eq!(out.status.code(), code, "{args:?}");
        assert!(
            String::from_utf8_lossy(&out.stdout).contains(needle),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stdout)
        );
    }

    let out = run(&["validate", "corner-dive.job"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).contains("PASS"));
    assert!(dir.join("corner-dive.report.json").exists());

    let out = run(&["plot", "corner-dive.job", "-o", "corner-dive.svg"]);
    assert!(out.status.success());
    let svg = std::fs::read_to_string(dir.join("corner-dive.svg")).unwrap();
    assert!(svg.starts_with("<svg ") && svg.ends_with("</svg>\n"));

    let out = run(&["compile", "missing.job"]);
    assert_eq!(out.status.code(), Some(2));

    std::fs::remove_dir_all(&dir).ok();
    report!("ACCEPTANCE CLI round trip and reproducible artifacts: PASS");
}
