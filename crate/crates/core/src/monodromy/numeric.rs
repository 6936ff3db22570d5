//! Lasso-loop monodromy by adaptive Dormand–Prince integration.

use std::f64::consts::PI;

use num::ToPrimitive;
use num_complex::Complex64;
use serde::{Serialize, Serializer};

use super::FuchsianSystem;
use crate::error::{Error, Result};
use crate::expr::{Polynomial, RationalFunction};

type C = Complex64;
/// A 2×2 complex matrix, row-major.
pub type CMat = [C; 4];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MonodromyOptions {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Default for MonodromyOptions {
    fn default() -> Self {
        MonodromyOptions {
            rtol: 1e-12,
            atol: 1e-13,
            max_steps: 200_000,
        }
    }
}

fn ser_c<S: Serializer>(z: &C, s: S) -> std::result::Result<S::Ok, S::Error> {
    [z.re, z.im].serialize(s)
}

fn ser_m<S: Serializer>(m: &CMat, s: S) -> std::result::Result<S::Ok, S::Error> {
    [[m[0], m[1]], [m[2], m[3]]]
        .map(|row| row.map(|z| [z.re, z.im]))
        .serialize(s)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LoopMatrix {
    /// The encircled singular point.
    pub point: String,
    #[serde(serialize_with = "ser_c")]
    pub center: C,
    pub radius: f64,
    #[serde(serialize_with = "ser_m")]
    pub matrix: CMat,
    pub det_error: f64,
    /// Accepted integration steps.
    pub steps: usize,
}

impl LoopMatrix {
    pub fn trace(&self) -> C {
        self.matrix[0] + self.matrix[3]
    }

    /// Eigenvalues of the loop matrix.
    pub fn eigenvalues(&self) -> [C; 2] {
        eigenvalues(&self.matrix)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonodromyData {
    #[serde(serialize_with = "ser_c")]
    pub base: C,
    /// Loops in relation order: `M_last ⋯ M_first` is the loop around every
    /// finite singular point.
    pub loops: Vec<LoopMatrix>,
    pub infinity_singular: bool,
    /// `‖M_last ⋯ M_first − I‖` (max-entry norm).
    pub relation_residual: f64,
    pub max_det_error: f64,
}

impl MonodromyData {
    /// Loop around the given point label.
    pub fn find(&self, point: &str) -> Option<&LoopMatrix> {
        self.loops.iter().find(|l| l.point == point)
    }
}

pub fn mat_mul(a: &CMat, b: &CMat) -> CMat {
    [
        a[0] * b[0] + a[1] * b[2],
        a[0] * b[1] + a[1] * b[3],
        a[2] * b[0] + a[3] * b[2],
        a[2] * b[1] + a[3] * b[3],
    ]
}

pub fn det(m: &CMat) -> C {
    m[0] * m[3] - m[1] * m[2]
}

pub fn eigenvalues(m: &CMat) -> [C; 2] {
    let tr = m[0] + m[3];
    let disc = (tr * tr - 4.0 * det(m)).sqrt();
    [(tr + disc) / 2.0, (tr - disc) / 2.0]
}

const IDENTITY: CMat = [
    C { re: 1.0, im: 0.0 },
    C { re: 0.0, im: 0.0 },
    C { re: 0.0, im: 0.0 },
    C { re: 1.0, im: 0.0 },
];

/// Floating-point image of a univariate rational function.
struct Evaluator {
    entries: Vec<(Vec<C>, Vec<C>)>,
}

fn float_coeffs(p: &Polynomial) -> Vec<C> {
    let d = p.degree_in(0).unwrap_or(0) as usize;
    let mut c = vec![C::new(0.0, 0.0); d + 1];
    for (m, v) in p.terms() {
        c[m.0[0] as usize] = C::new(v.to_f64().unwrap_or(f64::NAN), 0.0);
    }
    c
}

fn horner(c: &[C], z: C) -> C {
    c.iter().rev().fold(C::new(0.0, 0.0), |acc, a| acc * z + a)
}

impl Evaluator {
    fn new(s: &[[RationalFunction; 2]; 2]) -> Self {
        let entries = s
            .iter()
            .flatten()
            .map(|e| (float_coeffs(e.numerator()), float_coeffs(e.denominator())))
            .collect();
        Evaluator { entries }
    }

    fn at(&self, z: C) -> CMat {
        let mut m = [C::new(0.0, 0.0); 4];
        for (k, (n, d)) in self.entries.iter().enumerate() {
            m[k] = horner(n, z) / horner(d, z);
        }
        m
    }
}

/// A path piece parametrized on `[0, 1]`.
#[derive(Clone, Copy)]
enum Piece {
    Line { from: C, to: C },
    Circle { center: C, radius: f64, start: f64 },
}

impl Piece {
    fn point(&self, s: f64) -> (C, C) {
        match *self {
            Piece::Line { from, to } => (from + (to - from) * s, to - from),
            Piece::Circle {
                center,
                radius,
                start,
            } => {
                let e = C::from_polar(radius, start + 2.0 * PI * s);
                (center + e, C::new(0.0, 2.0 * PI) * e)
            }
        }
    }
}

// Dormand–Prince 5(4) tableau.
const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const CS: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

fn axpy(y: &CMat, ks: &[CMat], coeffs: &[f64], h: f64) -> CMat {
    let mut out = *y;
    for (k, &c) in ks.iter().zip(coeffs) {
        if c != 0.0 {
            for i in 0..4 {
                out[i] += k[i] * (c * h);
            }
        }
    }
    out
}

/// Transport `y` along `piece`: `dY/ds = S(z(s))·z'(s)·Y`.
fn transport(
    ev: &Evaluator,
    piece: Piece,
    y: CMat,
    opts: &MonodromyOptions,
    steps: &mut usize,
) -> Result<CMat> {
    let rhs = |s: f64, y: &CMat| -> CMat {
        let (z, dz) = piece.point(s);
        let a = ev.at(z);
        let a = a.map(|e| e * dz);
        mat_mul(&a, y)
    };
    let mut s = 0.0;
    let mut y = y;
    let mut h: f64 = 1e-3;
    let mut k1 = rhs(s, &y);
    while s < 1.0 {
        if *steps > opts.max_steps {
            return Err(Error::Numeric("integration step budget exhausted".into()));
        }
        if h < 1e-14 {
            return Err(Error::Numeric("step-size underflow near a pole".into()));
        }
        h = h.min(1.0 - s);
        let mut ks = vec![k1];
        for stage in 0..6 {
            let yi = axpy(&y, &ks, &A[stage][..=stage], h);
            ks.push(rhs(s + CS[stage + 1] * h, &yi));
        }
        let y5 = axpy(&y, &ks[..6], &A[5], h);
        let mut err: f64 = 0.0;
        for i in 0..4 {
            let e: C = ks.iter().zip(E).map(|(k, c)| k[i] * c).sum::<C>() * h;
            let scale = opts.atol + opts.rtol * y[i].norm().max(y5[i].norm());
            err = err.max(e.norm() / scale);
        }
        if !err.is_finite() {
            h *= 0.1;
            continue;
        }
        if err <= 1.0 {
            s += h;
            y = y5;
            k1 = ks[6];
            *steps += 1;
        }
        let factor = if err == 0.0 {
            5.0
        } else {
            0.9 * err.powf(-0.2)
        };
        h *= factor.clamp(0.2, 5.0);
    }
    Ok(y)
}

fn seg_distance(p: C, a: C, b: C) -> f64 {
    let d = b - a;
    let t = ((p - a) * d.conj()).re / d.norm_sqr();
    (p - (a + d * t.clamp(0.0, 1.0))).norm()
}

/// Monodromy of every finite singular point along lassos from a common base
/// point, with loop radius half the distance to the nearest other pole.
pub fn numeric_monodromy(sys: &FuchsianSystem, opts: MonodromyOptions) -> Result<MonodromyData> {
    let pts: Vec<(String, C, f64)> = sys
        .points()
        .iter()
        .map(|p| {
            (
                p.location.label(),
                p.location.approx(),
                p.location.error_radius(),
            )
        })
        .collect();
    let ev = Evaluator::new(sys.matrix());
    let n = pts.len();
    let radii: Vec<f64> = (0..n)
        .map(|i| {
            let near = (0..n)
                .filter(|&j| j != i)
                .map(|j| (pts[i].1 - pts[j].1).norm())
                .fold(f64::INFINITY, f64::min);
            if near.is_finite() {
                near / 2.0
            } else {
                1.0
            }
        })
        .collect();
    for (i, p) in pts.iter().enumerate() {
        if radii[i] <= 4.0 * p.2 {
            return Err(Error::Numeric(format!(
                "loop around {} would meet the error radius of a pole",
                p.0
            )));
        }
    }
    let centroid = if n == 0 {
        C::new(0.0, 0.0)
    } else {
        pts.iter().map(|p| p.1).sum::<C>() / n as f64
    };
    let spread = 1.0
        + pts
            .iter()
            .map(|p| (p.1 - centroid).norm())
            .fold(0.0, f64::max);
    let mut chosen = None;
    'base: for j in 0..32 {
        let theta = -PI / 2.0 + 0.37 * j as f64;
        let b = centroid + C::from_polar(2.0 * spread, theta);
        let mut angles = Vec::new();
        for i in 0..n {
            let touch = pts[i].1 + (b - pts[i].1) * (radii[i] / (b - pts[i].1).norm());
            for k in (0..n).filter(|&k| k != i) {
                if seg_distance(pts[k].1, b, touch) < 1.2 * radii[k] {
                    continue 'base;
                }
            }
            angles.push(((pts[i].1 - b) / (centroid - b)).arg());
        }
        let mut sorted = angles.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        if sorted.windows(2).any(|w| w[1] - w[0] < 1e-9) {
            continue;
        }
        chosen = Some((b, angles));
        break;
    }
    let (base, angles) =
        chosen.ok_or_else(|| Error::Numeric("no admissible base point for lassos".into()))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| angles[a].partial_cmp(&angles[b]).unwrap());
    let mut loops = Vec::new();
    for &i in &order {
        let (label, center, _) = pts[i].clone();
        let r = radii[i];
        let dir = (base - center) / (base - center).norm();
        let touch = center + dir * r;
        let mut steps = 0;
        let mut y = IDENTITY;
        y = transport(
            &ev,
            Piece::Line {
                from: base,
                to: touch,
            },
            y,
            &opts,
            &mut steps,
        )?;
        y = transport(
            &ev,
            Piece::Circle {
                center,
                radius: r,
                start: dir.arg(),
            },
            y,
            &opts,
            &mut steps,
        )?;
        y = transport(
            &ev,
            Piece::Line {
                from: touch,
                to: base,
            },
            y,
            &opts,
            &mut steps,
        )?;
        loops.push(LoopMatrix {
            point: label,
            center,
            radius: r,
            det_error: (det(&y) - 1.0).norm(),
            matrix: y,
            steps,
        });
    }
    let product = loops
        .iter()
        .fold(IDENTITY, |acc, l| mat_mul(&l.matrix, &acc));
    let relation_residual = (0..4)
        .map(|i| (product[i] - IDENTITY[i]).norm())
        .fold(0.0, f64::max);
    let max_det_error = loops.iter().map(|l| l.det_error).fold(0.0, f64::max);
    Ok(MonodromyData {
        base,
        loops,
        infinity_singular: sys.infinity_order() > 0,
        relation_residual,
        max_det_error,
    })
}
