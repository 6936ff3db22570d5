//! Does a projective representation lift to SL(2)? Generators are normalized
//! to unit determinant, every relation word then evaluates to `±I`, and the
//! question becomes a choice of one sign per generator.

use num::{BigInt, BigRational, Signed, Zero};
use num_complex::{Complex, Complex64};
use serde::Serialize;

use crate::error::{Error, Result};

/// Scalars a presentation can be written over.
pub trait LiftScalar: Clone + std::fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Option<Self>;
    /// A square root in the working field, if one exists.
    fn sqrt(&self) -> Option<Self>;
    /// Equality (exact, or within tolerance for floating point).
    fn close(&self, o: &Self) -> bool;
    /// `close` with the tolerance multiplied by `scale` (for products whose
    /// rounding error grows with the size of the factors).
    fn close_scaled(&self, o: &Self, _scale: f64) -> bool {
        self.close(o)
    }
    /// Size used to scale tolerances; irrelevant for exact fields.
    fn magnitude(&self) -> f64 {
        1.0
    }
    fn show(&self) -> String;
}

/// Gaussian rationals `ℚ(i)`.
pub type Exact = Complex<BigRational>;

fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let (n, d) = (r.numer(), r.denom());
    let (sn, sd) = (n.sqrt(), d.sqrt());
    (&sn * &sn == *n && &sd * &sd == *d).then(|| BigRational::new(sn, sd))
}

impl LiftScalar for Exact {
    fn zero() -> Self {
        Complex::new(BigRational::zero(), BigRational::zero())
    }
    fn one() -> Self {
        Complex::new(
            BigRational::from_integer(BigInt::from(1)),
            BigRational::zero(),
        )
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self.clone()
    }
    fn inv(&self) -> Option<Self> {
        let n = self.norm_sqr();
        (!n.is_zero()).then(|| Complex::new(&self.re / &n, -&self.im / &n))
    }
    fn sqrt(&self) -> Option<Self> {
        // (a + bi)² = p + qi with a² = (p + |z|)/2
        let norm = rational_sqrt(&self.norm_sqr())?;
        let two = BigRational::from_integer(BigInt::from(2));
        let a = rational_sqrt(&((&self.re + &norm) / &two))?;
        let b = if a.is_zero() {
            rational_sqrt(&((&norm - &self.re) / &two))?
        } else {
            &self.im / (&two * &a)
        };
        let r = Complex::new(a, b);
        (&r * &r == *self).then_some(r)
    }
    fn close(&self, o: &Self) -> bool {
        self == o
    }
    fn show(&self) -> String {
        if self.im.is_zero() {
            self.re.to_string()
        } else {
            format!("{} + {}i", self.re, self.im)
        }
    }
}

const TOL: f64 = 1e-6;

impl LiftScalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        (self.norm() > 0.0).then(|| 1.0 / self)
    }
    fn sqrt(&self) -> Option<Self> {
        Some(Complex64::sqrt(*self))
    }
    fn close(&self, o: &Self) -> bool {
        (self - o).norm() <= TOL
    }
    fn close_scaled(&self, o: &Self, scale: f64) -> bool {
        (self - o).norm() <= TOL * scale.max(1.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn show(&self) -> String {
        format!("{}{:+}i", self.re, self.im)
    }
}

type M<T> = [[T; 2]; 2];

fn mmul<T: LiftScalar>(a: &M<T>, b: &M<T>) -> M<T> {
    let e = |i: usize, j: usize| a[i][0].mul(&b[0][j]).add(&a[i][1].mul(&b[1][j]));
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

fn mdet<T: LiftScalar>(a: &M<T>) -> T {
    a[0][0].mul(&a[1][1]).add(&a[0][1].mul(&a[1][0]).neg())
}

fn mscale<T: LiftScalar>(a: &M<T>, c: &T) -> M<T> {
    [
        [a[0][0].mul(c), a[0][1].mul(c)],
        [a[1][0].mul(c), a[1][1].mul(c)],
    ]
}

/// Inverse of a unit-determinant matrix.
fn minv_unimodular<T: LiftScalar>(a: &M<T>) -> M<T> {
    [
        [a[1][1].clone(), a[0][1].neg()],
        [a[1][0].neg(), a[0][0].clone()],
    ]
}

fn identity<T: LiftScalar>() -> M<T> {
    [[T::one(), T::zero()], [T::zero(), T::one()]]
}

/// `+1` for `I`, `−1` for `−I`, `None` otherwise.
fn scalar_sign<T: LiftScalar>(a: &M<T>, scale: f64) -> Option<i8> {
    let near = |x: &T, y: &T| x.close_scaled(y, scale);
    let off = near(&a[0][1], &T::zero()) && near(&a[1][0], &T::zero());
    if !off {
        return None;
    }
    if near(&a[0][0], &T::one()) && near(&a[1][1], &T::one()) {
        Some(1)
    } else if near(&a[0][0], &T::one().neg()) && near(&a[1][1], &T::one().neg()) {
        Some(-1)
    } else {
        None
    }
}

/// A word in the generators: `(index, exponent)` letters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Word(pub Vec<(usize, i32)>);

/// Parse `a b a^-1 b^-1` (letters separated by spaces or `*`).
pub fn parse_word(text: &str, names: &[String]) -> Result<Word> {
    let mut letters = Vec::new();
    for tok in text
        .split(|c: char| c == '*' || c.is_whitespace())
        .filter(|t| !t.is_empty())
    {
        let (name, exp) = match tok.split_once('^') {
            Some((n, e)) => (
                n,
                e.trim_matches(|c| c == '(' || c == ')')
                    .parse::<i32>()
                    .map_err(|_| Error::Document(format!("bad exponent in `{tok}`")))?,
            ),
            None => (tok, 1),
        };
        let i = names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::Document(format!("unknown generator `{name}`")))?;
        letters.push((i, exp));
    }
    Ok(Word(letters))
}

#[derive(Debug, Clone)]
pub struct PSL2Presentation<T: LiftScalar> {
    pub names: Vec<String>,
    pub generators: Vec<M<T>>,
    pub relations: Vec<Word>,
}

impl<T: LiftScalar> PSL2Presentation<T> {
    pub fn new(names: Vec<String>, generators: Vec<M<T>>, relations: Vec<Word>) -> Result<Self> {
        if names.len() != generators.len() {
            return Err(Error::Contract("one name per generator".into()));
        }
        if relations
            .iter()
            .any(|w| w.0.iter().any(|&(i, _)| i >= generators.len()))
        {
            return Err(Error::Contract("relation uses an unknown generator".into()));
        }
        Ok(PSL2Presentation {
            names,
            generators,
            relations,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LiftReport {
    pub lifts: bool,
    /// Signs applied to the unit-determinant normalizations.
    pub signs: Option<Vec<i8>>,
    /// Sign each relation takes under the plain normalization.
    pub defects: Vec<i8>,
    /// The lifted generators as strings, when a lift exists.
    pub witness: Option<Vec<[[String; 2]; 2]>>,
    pub assignments_tried: u64,
}

/// Largest generator count searched exhaustively.
pub const MAX_GENERATORS: usize = 24;

/// Product of the entry sizes along `w`: a bound for the growth of rounding
/// error when the word is evaluated.
fn word_scale<T: LiftScalar>(gens: &[M<T>], w: &Word) -> f64 {
    w.0.iter().fold(1.0, |acc, &(i, e)| {
        let m = gens[i]
            .iter()
            .flatten()
            .map(LiftScalar::magnitude)
            .fold(1.0, f64::max);
        acc * m.powi(e.abs())
    })
}

fn evaluate<T: LiftScalar>(gens: &[M<T>], w: &Word) -> M<T> {
    w.0.iter().fold(identity(), |acc, &(i, e)| {
        let g = if e >= 0 {
            gens[i].clone()
        } else {
            minv_unimodular(&gens[i])
        };
        (0..e.unsigned_abs()).fold(acc, |a, _| mmul(&a, &g))
    })
}

/// Exhaustive search over the `2ⁿ` sign choices for a lift with every
/// relation equal to `+I`.
pub fn sl2_lift_exists<T: LiftScalar>(p: &PSL2Presentation<T>) -> Result<LiftReport> {
    let n = p.generators.len();
    if n > MAX_GENERATORS {
        return Err(Error::BudgetExceeded(format!(
            "{n} generators exceed the exhaustive limit {MAX_GENERATORS}"
        )));
    }
    let mut unit = Vec::with_capacity(n);
    for (g, name) in p.generators.iter().zip(&p.names) {
        let d = mdet(g);
        let inv = d.sqrt().and_then(|r| r.inv()).ok_or_else(|| {
            Error::Contract(format!(
                "generator {name}: determinant {} has no square root in the working field",
                d.show()
            ))
        })?;
        unit.push(mscale(g, &inv));
    }
    let mut defects = Vec::new();
    let mut parities = Vec::new();
    for w in &p.relations {
        let v = evaluate(&unit, w);
        let s = scalar_sign(&v, word_scale(&unit, w))
            .ok_or_else(|| Error::Contract("a relation does not evaluate to ±I".into()))?;
        defects.push(s);
        let mut mask = 0u64;
        for &(i, e) in &w.0 {
            if e % 2 != 0 {
                mask ^= 1 << i;
            }
        }
        parities.push(mask);
    }
    let mut tried = 0u64;
    for choice in 0u64..(1u64 << n) {
        tried += 1;
        let ok = defects.iter().zip(&parities).all(|(&d, &mask)| {
            let flips = (choice & mask).count_ones() % 2;
            (d as i32) * if flips == 1 { -1 } else { 1 } == 1
        });
        if ok {
            let signs: Vec<i8> = (0..n)
                .map(|i| if choice >> i & 1 == 1 { -1 } else { 1 })
                .collect();
            let lifted: Vec<M<T>> = unit
                .iter()
                .zip(&signs)
                .map(|(g, &s)| {
                    if s < 0 {
                        mscale(g, &T::one().neg())
                    } else {
                        g.clone()
                    }
                })
                .collect();
            for w in &p.relations {
                if scalar_sign(&evaluate(&lifted, w), word_scale(&lifted, w)) != Some(1) {
                    return Err(Error::Contract("sign witness failed verification".into()));
                }
            }
            let witness = lifted
                .iter()
                .map(|g| g.clone().map(|row| row.map(|e| e.show())))
                .collect();
            return Ok(LiftReport {
                lifts: true,
                signs: Some(signs),
                defects,
                witness: Some(witness),
                assignments_tried: tried,
            });
        }
    }
    Ok(LiftReport {
        lifts: false,
        signs: None,
        defects,
        witness: None,
        assignments_tried: tried,
    })
}
