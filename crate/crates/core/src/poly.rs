//! Dense univariate polynomials over an exact field.
//!
//! Used for minimal polynomials of multiplication operators and for locating
//! their roots in the ground field. Coefficients are stored lowest degree
//! first with no trailing zeros.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::field::{FieldSpec, Scalar};
use crate::linalg::Matrix;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    pub field: FieldSpec,
    pub coeffs: Vec<Scalar>,
}

impl Poly {
    pub fn new(field: FieldSpec, mut coeffs: Vec<Scalar>) -> Poly {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { field, coeffs }
    }

    pub fn zero(field: FieldSpec) -> Poly {
        Poly {
            field,
            coeffs: Vec::new(),
        }
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => self.clone(),
            Some(l) => {
                let inv = l.inv().expect("leading coefficient is nonzero");
                Poly::new(
                    self.field,
                    self.coeffs.iter().map(|c| c.mul(&inv)).collect(),
                )
            }
        }
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut acc = self.field.zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero(self.field);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.mul(&self.field.from_i64(i as i64)))
            .collect();
        Poly::new(self.field, coeffs)
    }

    /// Euclidean division; panics if `divisor` is zero.
    pub fn divrem(&self, divisor: &Poly) -> (Poly, Poly) {
        let dd = divisor.degree().expect("division by zero polynomial");
        let lead_inv = divisor.leading().unwrap().inv().unwrap();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![self.field.zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd {
            let k = rem.len() - 1 - dd;
            let factor = rem.last().unwrap().mul(&lead_inv);
            if !factor.is_zero() {
                quot[k] = factor.clone();
                for (i, c) in divisor.coeffs.iter().enumerate() {
                    let idx = k + i;
                    rem[idx] = rem[idx].sub(&factor.mul(c));
                }
            }
            rem.pop();
        }
        (Poly::new(self.field, quot), Poly::new(self.field, rem))
    }

    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn is_squarefree(&self) -> bool {
        let d = self.derivative();
        if d.is_zero() {
            // constant, or p-th power pattern in characteristic p
            return self.degree() == Some(0) || self.is_zero();
        }
        self.gcd(&d).degree() == Some(0)
    }

    /// All roots of the polynomial that lie in the ground field, without
    /// multiplicity, together with the degree left after deflating them.
    pub fn roots_in_field(&self) -> (Vec<Scalar>, usize) {
        match self.field {
            FieldSpec::Prime(p) => {
                assert!(p <= 1 << 20, "prime too large for exhaustive root search");
                let mut roots = Vec::new();
                let mut f = self.monic();
                for v in 0..p {
                    let x = Scalar::Residue {
                        value: v,
                        modulus: p,
                    };
                    if f.eval(&x).is_zero() {
                        roots.push(x.clone());
                        loop {
                            let lin = Poly::new(self.field, vec![x.neg(), self.field.one()]);
                            let (q, r) = f.divrem(&lin);
                            if r.is_zero() {
                                f = q;
                            } else {
                                break;
                            }
                        }
                    }
                }
                (roots, f.degree().unwrap_or(0))
            }
            FieldSpec::Rational => self.rational_roots(),
        }
    }

    fn rational_roots(&self) -> (Vec<Scalar>, usize) {
        let mut roots = Vec::new();
        let mut f = self.monic();
        loop {
            match f.degree() {
                None | Some(0) => break,
                Some(1) => {
                    // x + c ⇒ root -c
                    roots.push(f.coeffs[0].neg());
                    return (roots, 0);
                }
                Some(2) => {
                    // quadratic formula with an exact square test
                    let c = rational_of(&f.coeffs[0]);
                    let b = rational_of(&f.coeffs[1]);
                    let disc = &b * &b - BigRational::from_integer(BigInt::from(4)) * &c;
                    match rational_sqrt(&disc) {
                        Some(s) => {
                            let two = BigRational::from_integer(BigInt::from(2));
                            for r in [(-&b + &s) / &two, (-&b - &s) / &two] {
                                let sc = Scalar::Rational(r);
                                if !roots.contains(&sc) {
                                    roots.push(sc);
                                }
                            }
                        }
                        None => return (roots, 2),
                    }
                    return (roots, 0);
                }
                Some(_) => match f.find_one_rational_root() {
                    Some(r) => {
                        if !roots.contains(&r) {
                            roots.push(r.clone());
                        }
                        let lin = Poly::new(self.field, vec![r.neg(), self.field.one()]);
                        let (q, rem) = f.divrem(&lin);
                        debug_assert!(rem.is_zero());
                        f = q;
                    }
                    None => return (roots, f.degree().unwrap_or(0)),
                },
            }
        }
        (roots, 0)
    }

    /// Rational-root search on the integer model of the polynomial.
    fn find_one_rational_root(&self) -> Option<Scalar> {
        let zero = Scalar::Rational(BigRational::zero());
        if self.coeffs[0].is_zero() {
            return Some(zero);
        }
        // clear denominators
        let mut lcm = BigInt::one();
        for c in &self.coeffs {
            lcm = lcm.lcm(rational_of(c).denom());
        }
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| {
                let r = rational_of(c) * BigRational::from_integer(lcm.clone());
                r.to_integer()
            })
            .collect();
        let a0 = ints.first().unwrap().abs();
        let an = ints.last().unwrap().abs();
        let nums = bounded_divisors(&a0);
        let dens = bounded_divisors(&an);
        for num in &nums {
            for den in &dens {
                for sign in [1i64, -1] {
                    let cand =
                        Scalar::Rational(BigRational::new(num * BigInt::from(sign), den.clone()));
                    if self.eval(&cand).is_zero() {
                        return Some(cand);
                    }
                }
            }
        }
        None
    }
}

fn rational_of(s: &Scalar) -> BigRational {
    match s {
        Scalar::Rational(r) => r.clone(),
        Scalar::Residue { .. } => panic!("expected a rational scalar"),
    }
}

/// Exact square root of a non-negative rational, if it is a perfect square.
pub fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let num = integer_sqrt(r.numer())?;
    let den = integer_sqrt(r.denom())?;
    Some(BigRational::new(num, den))
}

pub fn integer_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let s = n.sqrt();
    if &(&s * &s) == n {
        Some(s)
    } else {
        None
    }
}

/// Divisors of |n| found by trial division. The cofactor left after the
/// trial bound is kept as an extra candidate so that moderately large roots
/// are still discovered.
fn bounded_divisors(n: &BigInt) -> Vec<BigInt> {
    let mut divs = vec![BigInt::one()];
    if n.is_zero() {
        return divs;
    }
    let mut rest = n.abs();
    let mut primes: Vec<(BigInt, u32)> = Vec::new();
    let mut d = BigInt::from(2);
    let bound = BigInt::from(1_000_000u64);
    while &d * &d <= rest && d <= bound {
        let mut mult = 0u32;
        while (&rest % &d).is_zero() {
            rest = rest / &d;
            mult += 1;
        }
        if mult > 0 {
            primes.push((d.clone(), mult));
        }
        d += 1;
    }
    if rest > BigInt::one() {
        primes.push((rest, 1));
    }
    for (p, mult) in primes {
        let existing = divs.clone();
        let mut power = BigInt::one();
        for _ in 0..mult {
            power = &power * &p;
            for e in &existing {
                let v = e * &power;
                if !divs.contains(&v) {
                    divs.push(v);
                }
            }
        }
    }
    divs
}

/// Minimal polynomial of a square matrix, via the first linear dependence
/// among the flattened powers I, M, M², …
pub fn min_poly_of_matrix(m: &Matrix) -> Poly {
    let field = m.field();
    let n = m.rows();
    assert!(m.is_square());
    let mut powers: Vec<Matrix> = vec![Matrix::identity(field, n)];
    for k in 1..=n {
        let next = powers.last().unwrap().mul(m).expect("square power");
        // S x = vec(next) with S the matrix of flattened previous powers
        let cols: Vec<Vec<Scalar>> = powers.iter().map(|p| flatten(p)).collect();
        let s = Matrix::from_cols(field, cols).expect("consistent flattening");
        if let Some(x) = s.solve(&flatten(&next)).expect("dimensions agree") {
            let mut coeffs: Vec<Scalar> = x.iter().map(|c| c.neg()).collect();
            coeffs.push(field.one());
            return Poly::new(field, coeffs);
        }
        powers.push(next);
        let _ = k;
    }
    unreachable!("a degree-n matrix satisfies a polynomial of degree at most n");
}

fn flatten(m: &Matrix) -> Vec<Scalar> {
    let mut v = Vec::with_capacity(m.rows() * m.cols());
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            v.push(m.at(i, j).clone());
        }
    }
    v
}

/// Minimal polynomial of the sequence v₀, v₁, v₂, … of Krylov vectors: the
/// monic polynomial of least degree with Σ cᵢ vᵢ = 0. The sequence must be
/// long enough to contain a dependence.
pub fn min_poly_of_krylov(field: FieldSpec, krylov: &[Vec<Scalar>]) -> Poly {
    for k in 1..krylov.len() {
        let cols: Vec<Vec<Scalar>> = krylov[..k].to_vec();
        let s = Matrix::from_cols(field, cols).expect("consistent krylov vectors");
        if let Some(x) = s.solve(&krylov[k]).expect("dimensions agree") {
            let mut coeffs: Vec<Scalar> = x.iter().map(|c| c.neg()).collect();
            coeffs.push(field.one());
            return Poly::new(field, coeffs);
        }
    }
    panic!("krylov sequence contained no dependence");
}
