//! Dense univariate polynomials and rational functions over ℚ.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::rational::{self, Rational};

/// `Σ c_i x^i` over ℤ, used for the quadratic-time kernels.
type IntCoeffs = Vec<BigInt>;

fn int_mul(a: &[BigInt], b: &[BigInt]) -> IntCoeffs {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn int_mul_linear(p: &[BigInt], slope: &BigInt, intercept: &BigInt) -> IntCoeffs {
    let mut out = vec![BigInt::zero(); p.len() + 1];
    for (i, c) in p.iter().enumerate() {
        out[i] += c * intercept;
        out[i + 1] += c * slope;
    }
    out
}

/// Common denominator of a list of rationals.
fn common_denominator<'a, I: IntoIterator<Item = &'a Rational>>(xs: I) -> BigInt {
    xs.into_iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()))
}

/// Dense polynomial, coefficients lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Poly::new(vec![c])
    }

    /// `x - a`.
    pub fn linear_root(a: &Rational) -> Self {
        Poly::new(vec![-a.clone(), rational::one()])
    }

    /// `slope·x + intercept`.
    pub fn linear(slope: Rational, intercept: Rational) -> Self {
        Poly::new(vec![intercept, slope])
    }

    /// `c·x^k`.
    pub fn monomial(c: Rational, k: usize) -> Self {
        let mut coeffs = vec![rational::zero(); k + 1];
        coeffs[k] = c;
        Poly::new(coeffs)
    }

    /// `(c, L)` with `self = Σ c_i x^i / L` and every `c_i` an integer.
    fn integral(&self) -> (IntCoeffs, BigInt) {
        let l = common_denominator(&self.coeffs);
        let ints = self.coeffs.iter().map(|c| c.numer() * (&l / c.denom())).collect();
        (ints, l)
    }

    fn from_integral(ints: IntCoeffs, den: &BigInt) -> Poly {
        Poly::new(ints.into_iter().map(|c| Rational::new(c, den.clone())).collect())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    /// Index of the lowest nonzero coefficient (the `x`-adic valuation).
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    /// Multiplies by `slope·x + intercept` in linear time.
    pub fn mul_linear(&self, slope: &Rational, intercept: &Rational) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![rational::zero(); self.coeffs.len() + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c * intercept;
            out[i + 1] += c * slope;
        }
        Poly::new(out)
    }

    pub fn pow(&self, mut e: u64) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `(x - a)^e`, expanded as `(q x − p)^e / q^e` for `a = p/q`.
    pub fn root_power(a: &Rational, e: u64) -> Poly {
        let (num, den) = (a.numer(), a.denom());
        let minus = -num;
        let mut p: IntCoeffs = vec![BigInt::one()];
        for _ in 0..e {
            p = int_mul_linear(&p, den, &minus);
        }
        Poly::from_integral(p, &num_traits::pow(den.clone(), e as usize))
    }

    /// Divides by `x - a`; returns quotient and remainder `p(a)`.
    pub fn div_linear(&self, a: &Rational) -> (Poly, Rational) {
        if self.is_zero() {
            return (Poly::zero(), rational::zero());
        }
        let n = self.coeffs.len();
        let mut q = vec![rational::zero(); n - 1];
        let mut carry = rational::zero();
        for i in (0..n).rev() {
            let v = &self.coeffs[i] + &carry * a;
            if i == 0 {
                return (Poly::new(q), v);
            }
            q[i - 1] = v.clone();
            carry = v;
        }
        unreachable!()
    }

    /// Multiplicity of `a` as a root. The zero polynomial reports `usize::MAX`.
    pub fn root_multiplicity(&self, a: &Rational) -> usize {
        if self.is_zero() {
            return usize::MAX;
        }
        let mut p = self.clone();
        let mut k = 0;
        loop {
            let (q, r) = p.div_linear(a);
            if !r.is_zero() {
                return k;
            }
            p = q;
            k += 1;
        }
    }

    /// `p(φ(x))·(c x + d)^target` for `φ(x) = (a x + b)/(c x + d)`, with
    /// `target >= deg p`. Horner over precomputed powers of `c x + d`.
    pub fn homogenized_compose(
        &self,
        a: &Rational,
        b: &Rational,
        c: &Rational,
        d: &Rational,
        target: usize,
    ) -> Poly {
        let Some(deg) = self.degree() else {
            return Poly::zero();
        };
        assert!(target >= deg, "homogenization degree below polynomial degree");
        let (coeffs, l0) = self.integral();
        let l = common_denominator([a, b, c, d]);
        let scaled = |x: &Rational| x.numer() * (&l / x.denom());
        let (a, b, c, d) = (scaled(a), scaled(b), scaled(c), scaled(d));
        // r_k = Σ_{i >= deg-k} a_i (ax+b)^{i-(deg-k)} (cx+d)^{deg-i}
        let mut r: IntCoeffs = vec![coeffs[deg].clone()];
        let mut den_pow: IntCoeffs = vec![BigInt::one()];
        for i in (0..deg).rev() {
            den_pow = int_mul_linear(&den_pow, &c, &d);
            r = int_mul_linear(&r, &a, &b);
            for (x, y) in r.iter_mut().zip(&den_pow) {
                *x += y * &coeffs[i];
            }
        }
        for _ in deg..target {
            r = int_mul_linear(&r, &c, &d);
        }
        Poly::from_integral(r, &(l0 * num_traits::pow(l, target)))
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let out = (0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect();
        Poly::new(out)
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let out = (0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect();
        Poly::new(out)
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let (x, lx) = self.integral();
        let (y, ly) = rhs.integral();
        Poly::from_integral(int_mul(&x, &y), &(lx * ly))
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { coeffs: self.coeffs.into_iter().map(|c| -c).collect() }
    }
}

/// `numerator / denominator`, not reduced; denominators are kept as built.
#[derive(Clone, Debug)]
pub struct RationalFunction {
    pub numerator: Poly,
    pub denominator: Poly,
}

impl RationalFunction {
    pub fn new(numerator: Poly, denominator: Poly) -> Self {
        assert!(!denominator.is_zero(), "zero denominator");
        RationalFunction { numerator, denominator }
    }

    pub fn constant(c: Rational) -> Self {
        RationalFunction::new(Poly::constant(c), Poly::one())
    }

    pub fn mul(&self, other: &RationalFunction) -> RationalFunction {
        RationalFunction::new(
            &self.numerator * &other.numerator,
            &self.denominator * &other.denominator,
        )
    }

    pub fn scale(&self, c: &Rational) -> RationalFunction {
        RationalFunction::new(self.numerator.scale(c), self.denominator.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    /// Exact equality as elements of ℚ(x), by cross multiplication.
    pub fn same_function(&self, other: &RationalFunction) -> bool {
        &self.numerator * &other.denominator == &other.numerator * &self.denominator
    }

    /// Order of pole at `a` (negative means a zero).
    pub fn pole_order(&self, a: &Rational) -> i64 {
        let den = self.denominator.root_multiplicity(a) as i64;
        let num = self.numerator.root_multiplicity(a);
        if num == usize::MAX {
            return i64::MIN;
        }
        den - num as i64
    }

    /// Order of vanishing at infinity of the function (`deg den − deg num`).
    pub fn order_at_infinity(&self) -> Option<i64> {
        let n = self.numerator.degree()? as i64;
        let d = self.denominator.degree().expect("nonzero denominator") as i64;
        Some(d - n)
    }

    /// Residue of `f dx` at a pole of order at most one.
    pub fn residue_simple(&self, a: &Rational) -> Option<Rational> {
        let mult = self.denominator.root_multiplicity(a);
        let num_mult = self.numerator.root_multiplicity(a);
        if num_mult >= mult {
            return Some(rational::zero());
        }
        if mult - num_mult > 1 {
            return None;
        }
        let mut num = self.numerator.clone();
        for _ in 0..num_mult {
            num = num.div_linear(a).0;
        }
        let mut den = self.denominator.clone();
        for _ in 0..mult {
            den = den.div_linear(a).0;
        }
        Some(num.eval(a) / den.eval(a))
    }

    /// Residue of `f dx` at infinity: minus the `1/x` coefficient of the expansion.
    pub fn residue_at_infinity(&self) -> Rational {
        let Some(n) = self.numerator.degree() else {
            return rational::zero();
        };
        let d = self.denominator.degree().expect("nonzero denominator");
        if d == n + 1 {
            -(self.numerator.leading().unwrap() / self.denominator.leading().unwrap())
        } else if d > n + 1 {
            rational::zero()
        } else {
            // Polynomial part present; the 1/x coefficient needs long division.
            let mut rem = self.numerator.clone();
            let lead = self.denominator.leading().unwrap().clone();
            while let Some(rd) = rem.degree() {
                if rd < d {
                    break;
                }
                let c = rem.leading().unwrap() / &lead;
                let t = Poly::monomial(c, rd - d);
                rem = &rem - &(&t * &self.denominator);
            }
            RationalFunction::new(rem, self.denominator.clone()).residue_at_infinity()
        }
    }
}

impl PartialEq for RationalFunction {
    fn eq(&self, other: &Self) -> bool {
        self.same_function(other)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn p(c: &[i64]) -> Poly {
        Poly::new(c.iter().map(|&v| int(v)).collect())
    }

    #[test]
    fn arithmetic() {
        let a = p(&[1, 1]);
        let b = p(&[-1, 1]);
        assert_eq!(&a * &b, p(&[-1, 0, 1]));
        assert_eq!((&a + &b), p(&[0, 2]));
        assert_eq!((&a - &a), Poly::zero());
        assert_eq!(a.pow(3), p(&[1, 3, 3, 1]));
        assert_eq!(Poly::root_power(&int(2), 2), p(&[4, -4, 1]));
        assert_eq!(p(&[0, 0, 3]).valuation(), Some(2));
    }

    #[test]
    fn linear_division() {
        let f = p(&[-6, 11, -6, 1]); // (x-1)(x-2)(x-3)
        let (q, r) = f.div_linear(&int(1));
        assert_eq!(r, int(0));
        assert_eq!(q, p(&[6, -5, 1]));
        assert_eq!(f.div_linear(&int(4)).1, int(6));
        let sq = &f * &p(&[-2, 1]);
        assert_eq!(sq.root_multiplicity(&int(2)), 2);
        assert_eq!(sq.root_multiplicity(&int(7)), 0);
    }

    #[test]
    fn compose_matches_pointwise() {
        let f = p(&[3, -1, 0, 2]);
        let (a, b, c, d) = (int(2), int(1), int(1), int(3));
        let g = f.homogenized_compose(&a, &b, &c, &d, 5);
        for x in [int(0), int(1), ratio(-1, 2), int(5)] {
            let phi = (&a * &x + &b) / (&c * &x + &d);
            let h = (&c * &x + &d).pow(5);
            assert_eq!(g.eval(&x), f.eval(&phi) * h);
        }
    }

    #[test]
    fn residues() {
        // 1/(x(x-1)) dx: residue -1 at 0, +1 at 1, 0 at infinity
        let f = RationalFunction::new(Poly::one(), p(&[0, -1, 1]));
        assert_eq!(f.residue_simple(&int(0)), Some(int(-1)));
        assert_eq!(f.residue_simple(&int(1)), Some(int(1)));
        assert_eq!(f.residue_at_infinity(), int(0));
        // dx/x has residue -1 at infinity
        let g = RationalFunction::new(Poly::one(), p(&[0, 1]));
        assert_eq!(g.residue_at_infinity(), int(-1));
        // (x^2+1)/x dx = x dx + dx/x
        let h = RationalFunction::new(p(&[1, 0, 1]), p(&[0, 1]));
        assert_eq!(h.residue_at_infinity(), int(-1));
        assert_eq!(f.pole_order(&int(0)), 1);
    }
}
