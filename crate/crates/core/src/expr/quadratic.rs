//! Elements `a + b√D` of a quadratic extension ℚ(√D), `D` a squarefree
//! integer. Rational values use `b = 0`, `D = 1`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};
use num_complex::Complex64;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadraticNumber {
    a: BigRational,
    b: BigRational,
    d: BigInt,
}

impl QuadraticNumber {
    pub fn rational(a: BigRational) -> Self {
        QuadraticNumber {
            a,
            b: BigRational::zero(),
            d: BigInt::one(),
        }
    }

    /// `a + b√d`; `d` must be squarefree (checked by caller predicates).
    pub fn new(a: BigRational, b: BigRational, d: BigInt) -> Self {
        if b.is_zero() || d.is_one() {
            let a = if d.is_one() { a + b } else { a };
            return Self::rational(a);
        }
        if d.is_zero() {
            return Self::rational(a);
        }
        QuadraticNumber { a, b, d }
    }

    /// Exact square root of a rational, written as `s√D`.
    pub fn sqrt_of(c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::rational(BigRational::zero());
        }
        // √(p/q) = √(p q) / q
        let pq = c.numer() * c.denom();
        let (s, dpart) = split_square(&pq);
        let coeff = BigRational::new(s, c.denom().clone());
        if dpart.is_one() {
            Self::rational(coeff)
        } else {
            QuadraticNumber {
                a: BigRational::zero(),
                b: coeff,
                d: dpart,
            }
        }
    }

    pub fn real_part(&self) -> &BigRational {
        &self.a
    }

    pub fn surd_coefficient(&self) -> &BigRational {
        &self.b
    }

    pub fn radicand(&self) -> &BigInt {
        &self.d
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        self.is_rational().then_some(&self.a)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.is_rational() && self.a.is_integer()
    }

    /// `Some(n)` for a positive integer value.
    pub fn positive_integer(&self) -> Option<u64> {
        if self.is_integer() && self.a.is_positive() {
            self.a.to_integer().to_u64()
        } else {
            None
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        let d = self.d.to_f64().unwrap_or(f64::NAN);
        if d >= 0.0 {
            Complex64::new(a + b * d.sqrt(), 0.0)
        } else {
            Complex64::new(a, b * (-d).sqrt())
        }
    }

    fn field(&self, other: &Self) -> BigInt {
        match (self.is_rational(), other.is_rational()) {
            (true, _) => other.d.clone(),
            (_, true) => self.d.clone(),
            _ => {
                assert_eq!(self.d, other.d, "mixing different quadratic fields");
                self.d.clone()
            }
        }
    }
}

/// `n = s² · D` with `D` squarefree (sign kept in `D`).
pub fn split_square(n: &BigInt) -> (BigInt, BigInt) {
    let neg = n.is_negative();
    let mut m = n.abs();
    let mut s = BigInt::one();
    let mut d = BigInt::one();
    let mut p = BigInt::from(2);
    while &p * &p <= m {
        let mut e = 0u32;
        while (&m % &p).is_zero() {
            m /= &p;
            e += 1;
        }
        if e > 0 {
            s *= p.pow(e / 2);
            if e % 2 == 1 {
                d *= &p;
            }
        }
        p += 1;
    }
    d *= m;
    if neg {
        d = -d;
    }
    (s, d)
}

pub fn is_squarefree_integer(n: &BigInt) -> bool {
    !n.is_zero() && split_square(n).0.is_one()
}

impl Add for &QuadraticNumber {
    type Output = QuadraticNumber;
    fn add(self, o: &QuadraticNumber) -> QuadraticNumber {
        let d = self.field(o);
        QuadraticNumber::new(&self.a + &o.a, &self.b + &o.b, d)
    }
}

impl Sub for &QuadraticNumber {
    type Output = QuadraticNumber;
    fn sub(self, o: &QuadraticNumber) -> QuadraticNumber {
        self + &(-o)
    }
}

impl Mul for &QuadraticNumber {
    type Output = QuadraticNumber;
    fn mul(self, o: &QuadraticNumber) -> QuadraticNumber {
        let d = self.field(o);
        let dr = BigRational::from_integer(d.clone());
        QuadraticNumber::new(
            &self.a * &o.a + &self.b * &o.b * dr,
            &self.a * &o.b + &self.b * &o.a,
            d,
        )
    }
}

impl Neg for &QuadraticNumber {
    type Output = QuadraticNumber;
    fn neg(self) -> QuadraticNumber {
        QuadraticNumber {
            a: -&self.a,
            b: -&self.b,
            d: self.d.clone(),
        }
    }
}

fn rat_str(c: &BigRational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for QuadraticNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return f.write_str(&rat_str(&self.a));
        }
        let surd = if self.b.is_one() {
            format!("sqrt({})", self.d)
        } else if (-&self.b).is_one() {
            format!("-sqrt({})", self.d)
        } else {
            format!("{}*sqrt({})", rat_str(&self.b), self.d)
        };
        if self.a.is_zero() {
            f.write_str(&surd)
        } else if let Some(rest) = surd.strip_prefix('-') {
            write!(f, "{} - {}", rat_str(&self.a), rest)
        } else {
            write!(f, "{} + {}", rat_str(&self.a), surd)
        }
    }
}
