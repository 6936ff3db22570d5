//! 2×2 matrices over rational functions and over 1-forms.

use crate::error::{Error, Result};
use crate::expr::{Polynomial, RationalFunction};
use crate::forms::{OneForm, TwoForm};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat2 {
    pub e: [[RationalFunction; 2]; 2],
}

impl Mat2 {
    pub fn new(
        a: RationalFunction,
        b: RationalFunction,
        c: RationalFunction,
        d: RationalFunction,
    ) -> Self {
        Mat2 {
            e: [[a, b], [c, d]],
        }
    }

    pub fn from_polys(a: Polynomial, b: Polynomial, c: Polynomial, d: Polynomial) -> Self {
        Self::new(a.into(), b.into(), c.into(), d.into())
    }

    pub fn identity(n: usize) -> Self {
        Self::new(
            RationalFunction::one(n),
            RationalFunction::zero(n),
            RationalFunction::zero(n),
            RationalFunction::one(n),
        )
    }

    pub fn diag(a: RationalFunction, d: RationalFunction) -> Self {
        let n = a.nvars();
        Self::new(a, RationalFunction::zero(n), RationalFunction::zero(n), d)
    }

    pub fn nvars(&self) -> usize {
        self.e[0][0].nvars()
    }

    pub fn det(&self) -> RationalFunction {
        &(&self.e[0][0] * &self.e[1][1]) - &(&self.e[0][1] * &self.e[1][0])
    }

    pub fn inverse(&self) -> Result<Self> {
        let det = self.det();
        if det.is_zero() {
            return Err(Error::Contract(
                "matrix determinant vanishes identically".into(),
            ));
        }
        let inv = det.recip()?;
        Ok(Self::new(
            &self.e[1][1] * &inv,
            -&(&self.e[0][1] * &inv),
            -&(&self.e[1][0] * &inv),
            &self.e[0][0] * &inv,
        ))
    }

    pub fn mul(&self, o: &Mat2) -> Self {
        let f = |i: usize, j: usize| &(&self.e[i][0] * &o.e[0][j]) + &(&self.e[i][1] * &o.e[1][j]);
        Self::new(f(0, 0), f(0, 1), f(1, 0), f(1, 1))
    }

    pub fn apply(&self, v: &[RationalFunction; 2]) -> [RationalFunction; 2] {
        [
            &(&self.e[0][0] * &v[0]) + &(&self.e[0][1] * &v[1]),
            &(&self.e[1][0] * &v[0]) + &(&self.e[1][1] * &v[1]),
        ]
    }

    pub fn scale(&self, f: &RationalFunction) -> Self {
        Self::new(
            &self.e[0][0] * f,
            &self.e[0][1] * f,
            &self.e[1][0] * f,
            &self.e[1][1] * f,
        )
    }

    /// Entrywise differential.
    pub fn differential(&self) -> FormMat2 {
        FormMat2 {
            e: self
                .e
                .clone()
                .map(|row| row.map(|c| OneForm::differential(&c))),
        }
    }

    /// Whether every entry is a polynomial.
    pub fn is_polynomial(&self) -> bool {
        self.e.iter().flatten().all(|c| c.is_polynomial())
    }

    /// Whether `self = c · other` for a nonzero rational function `c`.
    pub fn projectively_equal(&self, o: &Mat2) -> bool {
        let mut ratio: Option<RationalFunction> = None;
        for i in 0..2 {
            for j in 0..2 {
                let (a, b) = (&self.e[i][j], &o.e[i][j]);
                if a.is_zero() != b.is_zero() {
                    return false;
                }
                if a.is_zero() {
                    continue;
                }
                let r = a / b;
                match &ratio {
                    None => ratio = Some(r),
                    Some(q) if *q != r => return false,
                    _ => {}
                }
            }
        }
        true
    }

    pub fn map(&self, f: impl Fn(&RationalFunction) -> RationalFunction) -> Self {
        Mat2 {
            e: [
                [f(&self.e[0][0]), f(&self.e[0][1])],
                [f(&self.e[1][0]), f(&self.e[1][1])],
            ],
        }
    }
}

/// 2×2 matrix of 1-forms, e.g. a connection matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormMat2 {
    pub e: [[OneForm; 2]; 2],
}

impl FormMat2 {
    /// `M · A` and `A · M` for a function matrix `M`.
    pub fn left_mul(m: &Mat2, a: &FormMat2) -> FormMat2 {
        let f = |i: usize, j: usize| &a.e[0][j].mul(&m.e[i][0]) + &a.e[1][j].mul(&m.e[i][1]);
        FormMat2 {
            e: [[f(0, 0), f(0, 1)], [f(1, 0), f(1, 1)]],
        }
    }

    pub fn right_mul(a: &FormMat2, m: &Mat2) -> FormMat2 {
        let f = |i: usize, j: usize| &a.e[i][0].mul(&m.e[0][j]) + &a.e[i][1].mul(&m.e[1][j]);
        FormMat2 {
            e: [[f(0, 0), f(0, 1)], [f(1, 0), f(1, 1)]],
        }
    }

    pub fn sub(&self, o: &FormMat2) -> FormMat2 {
        let f = |i: usize, j: usize| &self.e[i][j] - &o.e[i][j];
        FormMat2 {
            e: [[f(0, 0), f(0, 1)], [f(1, 0), f(1, 1)]],
        }
    }

    pub fn trace(&self) -> OneForm {
        &self.e[0][0] + &self.e[1][1]
    }

    /// Entries of `dA + A∧A`.
    pub fn curvature(&self) -> [[TwoForm; 2]; 2] {
        let f = |i: usize, j: usize| {
            &(&self.e[i][j].exterior_derivative() + &self.e[i][0].wedge(&self.e[0][j]))
                + &self.e[i][1].wedge(&self.e[1][j])
        };
        [[f(0, 0), f(0, 1)], [f(1, 0), f(1, 1)]]
    }

    pub fn is_flat(&self) -> bool {
        self.curvature().iter().flatten().all(|c| c.is_zero())
    }
}
