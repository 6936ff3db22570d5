//! Multivariate gcd: heuristic integer evaluation first, recursive
//! primitive remainder sequences as the fallback.

use num::{BigInt, BigRational, Integer, One, Signed, Zero};

use super::poly::{Monomial, Polynomial};

/// Greatest common divisor, normalized to leading coefficient 1.
///
/// `gcd(a, 0) = monic(a)` and `gcd(0, 0) = 0`.
pub fn gcd(a: &Polynomial, b: &Polynomial) -> Polynomial {
    assert_eq!(a.nvars(), b.nvars(), "variable count mismatch");
    let n = a.nvars();
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return Polynomial::one(n);
    }
    if a.num_terms() == 1 && b.num_terms() == 1 {
        return monomial_gcd(a, b);
    }
    // Cheap exact-division shortcut.
    if a.num_terms() <= b.num_terms() {
        if a.divides(b) {
            return a.monic();
        }
    } else if b.divides(a) {
        return b.monic();
    }
    if let Some(h) = heu_gcd(&a.primitive_integer(), &b.primitive_integer()) {
        return h.monic();
    }

    // Pick a main variable: one used by both, of least combined degree.
    let shared: Vec<usize> = (0..n).filter(|&v| a.uses_var(v) && b.uses_var(v)).collect();
    if shared.is_empty() {
        // Only factors free of a's variables can be common: reduce a to its
        // content with respect to every variable b does not use.
        let mut ca = a.clone();
        for v in a.active_vars() {
            if !b.uses_var(v) {
                ca = content_in(&ca, v);
            }
        }
        let mut cb = b.clone();
        for v in b.active_vars() {
            if !ca.uses_var(v) {
                cb = content_in(&cb, v);
            }
        }
        if ca.is_constant() || cb.is_constant() {
            return Polynomial::one(n);
        }
        return gcd(&ca, &cb);
    }
    for v in a.active_vars() {
        if !b.uses_var(v) {
            return gcd(&content_in(a, v), b);
        }
    }
    for v in b.active_vars() {
        if !a.uses_var(v) {
            return gcd(a, &content_in(b, v));
        }
    }
    let v = *shared
        .iter()
        .min_by_key(|&&v| a.degree_in(v).unwrap() + b.degree_in(v).unwrap())
        .unwrap();

    let ca = content_in(a, v);
    let cb = content_in(b, v);
    let c = gcd(&ca, &cb);
    let pa = a.div_exact(&ca).expect("content divides");
    let pb = b.div_exact(&cb).expect("content divides");
    if image_coprime(&pa, &pb, v) {
        return c.monic();
    }
    let g = primitive_prs_gcd(&pa, &pb, v);
    (&c * &g).monic()
}

/// Integer gcd of integer-coefficient polynomials by evaluation at a large
/// integer and balanced-radix reconstruction. Every candidate is verified
/// by division, and the evaluation point exceeds twice the smaller norm, so
/// a verified candidate is the gcd. `None` means the heuristic gave up.
fn heu_gcd(f: &Polynomial, g: &Polynomial) -> Option<Polynomial> {
    let n = f.nvars();
    let (cf, cg) = (integer_content(f), integer_content(g));
    let content = cf.gcd(&cg);
    let x = (0..n).rev().find(|&v| f.uses_var(v) || g.uses_var(v));
    let Some(x) = x else {
        return Some(Polynomial::constant(n, BigRational::from_integer(content)));
    };
    let f = f.scale(&BigRational::from_integer(cf).recip());
    let g = g.scale(&BigRational::from_integer(cg).recip());
    let mut xi = BigInt::from(2) * max_norm(&f).min(max_norm(&g)) + BigInt::from(29);
    for _ in 0..6 {
        let at = BigRational::from_integer(xi.clone());
        let (ff, gg) = (f.substitute_const(x, &at), g.substitute_const(x, &at));
        if !ff.is_zero() && !gg.is_zero() {
            if let Some(h) = heu_gcd(&ff, &gg) {
                let cand = radix_reconstruct(&h, x, &xi).primitive_integer();
                if !cand.is_zero() && cand.divides(&f) && cand.divides(&g) {
                    return Some(cand.scale(&BigRational::from_integer(content)));
                }
            }
        }
        xi = xi * BigInt::from(73794) / BigInt::from(27011);
    }
    None
}

fn integer_content(p: &Polynomial) -> BigInt {
    p.terms()
        .fold(BigInt::zero(), |acc, (_, c)| acc.gcd(c.numer()))
}

fn max_norm(p: &Polynomial) -> BigInt {
    p.terms()
        .map(|(_, c)| c.numer().abs())
        .max()
        .unwrap_or_default()
}

/// Read `h = Σ hᵢ ξⁱ` (balanced digits, coefficientwise) as `Σ hᵢ xⁱ`.
fn radix_reconstruct(h: &Polynomial, x: usize, xi: &BigInt) -> Polynomial {
    let n = h.nvars();
    let half = xi / BigInt::from(2);
    let mut rest = h.clone();
    let mut out = Polynomial::zero(n);
    let mut i = 0u32;
    while !rest.is_zero() {
        let digit = Polynomial::from_terms(
            n,
            rest.terms().map(|(m, c)| {
                let mut r = c.numer().mod_floor(xi);
                if r > half {
                    r -= xi;
                }
                (m.clone(), BigRational::from_integer(r))
            }),
        );
        let mut mono = vec![0u32; n];
        mono[x] = i;
        out = &out + &digit.mul_monomial(&Monomial(mono), &BigRational::one());
        rest = (&rest - &digit).scale(&BigRational::from_integer(xi.clone()).recip());
        i += 1;
    }
    out
}

fn monomial_gcd(a: &Polynomial, b: &Polynomial) -> Polynomial {
    let (ma, _) = a.leading_term().unwrap();
    let (mb, _) = b.leading_term().unwrap();
    let e = ma.0.iter().zip(&mb.0).map(|(x, y)| *x.min(y)).collect();
    Polynomial::monomial(super::poly::Monomial(e), BigRational::one())
}

/// Exact coprimality certificate: if the images of the primitive parts
/// under a specialization of every other variable keep their `v`-degrees
/// and are coprime, the primitive gcd has `v`-degree zero, hence is 1.
fn image_coprime(a: &Polynomial, b: &Polynomial, v: usize) -> bool {
    let others: Vec<usize> = (0..a.nvars())
        .filter(|&w| w != v && (a.uses_var(w) || b.uses_var(w)))
        .collect();
    if others.is_empty() {
        return false;
    }
    let la = a.coefficients_in(v).pop().expect("nonzero");
    let lb = b.coefficients_in(v).pop().expect("nonzero");
    for attempt in 0..3i64 {
        let point: Vec<BigRational> = others
            .iter()
            .enumerate()
            .map(|(i, _)| BigRational::from_integer((3 + 7 * attempt + 5 * i as i64).into()))
            .collect();
        let spec = |p: &Polynomial| {
            others
                .iter()
                .zip(&point)
                .fold(p.clone(), |acc, (&w, x)| acc.substitute_const(w, x))
        };
        if spec(&la).is_zero() || spec(&lb).is_zero() {
            continue;
        }
        return gcd(&spec(a), &spec(b)).is_constant();
    }
    false
}

/// Gcd of the coefficients of `p` viewed as a polynomial in `v`.
pub fn content_in(p: &Polynomial, v: usize) -> Polynomial {
    let coeffs = p.coefficients_in(v);
    let mut g = Polynomial::zero(p.nvars());
    for c in coeffs.iter().filter(|c| !c.is_zero()) {
        g = gcd(&g, c);
        if g.is_constant() {
            return Polynomial::one(p.nvars());
        }
    }
    g
}

/// Primitive part of `p` with respect to `v`, scaled to coprime integer
/// coefficients.
pub fn primitive_part_in(p: &Polynomial, v: usize) -> Polynomial {
    if p.is_zero() {
        return p.clone();
    }
    let c = content_in(p, v);
    p.div_exact(&c)
        .expect("content divides")
        .primitive_integer()
}

fn primitive_prs_gcd(a: &Polynomial, b: &Polynomial, v: usize) -> Polynomial {
    let (mut f, mut g) = if a.degree_in(v) >= b.degree_in(v) {
        (a.primitive_integer(), b.primitive_integer())
    } else {
        (b.primitive_integer(), a.primitive_integer())
    };
    loop {
        let r = pseudo_remainder(&f, &g, v);
        if r.is_zero() {
            return primitive_part_in(&g, v).monic();
        }
        if r.degree_in(v) == Some(0) {
            return Polynomial::one(a.nvars());
        }
        f = g;
        g = primitive_part_in(&r, v);
    }
}

/// Sparse pseudo-remainder of `f` by `g` in variable `v`: some
/// `lc_v(g)^e · f` reduced modulo `g` to `v`-degree below `deg_v g`.
pub fn pseudo_remainder(f: &Polynomial, g: &Polynomial, v: usize) -> Polynomial {
    let n = f.nvars();
    let dg = g.degree_in(v).expect("nonzero divisor") as usize;
    let gc = g.coefficients_in(v);
    let lg = gc[dg].clone();
    let mut r = f.coefficients_in(v);
    trim(&mut r);
    while r.len() > dg && !r.is_empty() {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        let shift = dr - dg;
        let mut next: Vec<Polynomial> = r.iter().map(|c| &lg * c).collect();
        for (i, gci) in gc.iter().enumerate() {
            if gci.is_zero() {
                continue;
            }
            next[i + shift] = &next[i + shift] - &(&lr * gci);
        }
        debug_assert!(next[dr].is_zero());
        r = next;
        trim(&mut r);
    }
    Polynomial::from_coefficients_in(n, v, &r)
}

/// Pseudo-remainder with the exponent fixed at `deg_v f − deg_v g + 1`,
/// returning `(remainder, e)` with `lc_v(g)^e · f ≡ remainder (mod g)`.
pub fn pseudo_remainder_exact(f: &Polynomial, g: &Polynomial, v: usize) -> (Polynomial, u32) {
    let n = f.nvars();
    let dg = g.degree_in(v).expect("nonzero divisor") as usize;
    let gc = g.coefficients_in(v);
    let lg = gc[dg].clone();
    let mut r = f.coefficients_in(v);
    trim(&mut r);
    if r.len() <= dg {
        return (f.clone(), 0);
    }
    let df = r.len() - 1;
    for i in (dg..=df).rev() {
        let ri = r[i].clone();
        let shift = i - dg;
        let mut next: Vec<Polynomial> = r.iter().map(|c| &lg * c).collect();
        if !ri.is_zero() {
            for (j, gcj) in gc.iter().enumerate() {
                if !gcj.is_zero() {
                    next[j + shift] = &next[j + shift] - &(&ri * gcj);
                }
            }
        }
        r = next;
    }
    trim(&mut r);
    (
        Polynomial::from_coefficients_in(n, v, &r),
        (df - dg + 1) as u32,
    )
}

fn trim(c: &mut Vec<Polynomial>) {
    while c.last().is_some_and(|p| p.is_zero()) {
        c.pop();
    }
}

/// Resultant of `f` and `g` with respect to `v`, via the fraction-free
/// (Bareiss) determinant of the Sylvester matrix.
pub fn resultant(f: &Polynomial, g: &Polynomial, v: usize) -> Polynomial {
    let n = f.nvars();
    let fc = f.coefficients_in(v);
    let gc = g.coefficients_in(v);
    if fc.is_empty() || gc.is_empty() {
        return Polynomial::zero(n);
    }
    let m = fc.len() - 1;
    let k = gc.len() - 1;
    if m == 0 {
        return fc[0].pow(k as u32);
    }
    if k == 0 {
        return gc[0].pow(m as u32);
    }
    let size = m + k;
    let mut mat = vec![vec![Polynomial::zero(n); size]; size];
    for i in 0..k {
        for (j, c) in fc.iter().rev().enumerate() {
            mat[i][i + j] = c.clone();
        }
    }
    for i in 0..m {
        for (j, c) in gc.iter().rev().enumerate() {
            mat[k + i][i + j] = c.clone();
        }
    }
    bareiss_det(mat, n)
}

fn bareiss_det(mut a: Vec<Vec<Polynomial>>, nvars: usize) -> Polynomial {
    let size = a.len();
    let mut sign = BigRational::one();
    let mut prev = Polynomial::one(nvars);
    for k in 0..size {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..size).find(|&r| !a[r][k].is_zero()) else {
                return Polynomial::zero(nvars);
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..size {
            for j in k + 1..size {
                let t = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = t.div_exact(&prev).expect("Bareiss division is exact");
            }
            a[i][k] = Polynomial::zero(nvars);
        }
        prev = a[k][k].clone();
    }
    a[size - 1][size - 1].scale(&sign)
}

/// Least common multiple, monic.
pub fn lcm(a: &Polynomial, b: &Polynomial) -> Polynomial {
    if a.is_zero() || b.is_zero() {
        return Polynomial::zero(a.nvars());
    }
    let g = gcd(a, b);
    (&a.div_exact(&g).expect("gcd divides") * b).monic()
}
