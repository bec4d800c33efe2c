//! Exact Gaussian rationals `p/q + (p'/q') i` and small dense matrices over them.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// An element of Q(i). Both parts are kept as reduced `BigRational`s.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct GaussScalar {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussScalar {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussScalar { re, im }
    }

    pub fn from_int(n: i64) -> Self {
        GaussScalar { re: BigRational::from_integer(BigInt::from(n)), im: BigRational::zero() }
    }

    pub fn ratio(p: i64, q: i64) -> Self {
        GaussScalar { re: BigRational::new(BigInt::from(p), BigInt::from(q)), im: BigRational::zero() }
    }

    pub fn real(re: BigRational) -> Self {
        GaussScalar { re, im: BigRational::zero() }
    }

    pub fn i() -> Self {
        GaussScalar { re: BigRational::zero(), im: BigRational::one() }
    }

    /// Exact conversion of a finite binary float pair. Returns `None` for NaN or infinities.
    pub fn from_c64(z: Complex64) -> Option<Self> {
        Some(GaussScalar { re: BigRational::from_float(z.re)?, im: BigRational::from_float(z.im)? })
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(rat_to_f64(&self.re), rat_to_f64(&self.im))
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussScalar { re: self.re.clone(), im: -self.im.clone() }
    }

    /// Squared modulus, a nonnegative rational.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(GaussScalar { re: &self.re / &n, im: -(&self.im / &n) })
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = GaussScalar::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }
}

fn rat_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        // numerator or denominator beyond f64 range: scale by powers of two
        let n = q.numer().bits() as i64;
        let d = q.denom().bits() as i64;
        let shift = n - d;
        let scaled = if shift > 0 {
            q / BigRational::from_integer(BigInt::one() << (shift as usize))
        } else {
            q * BigRational::from_integer(BigInt::one() << ((-shift) as usize))
        };
        scaled.to_f64().unwrap_or(f64::NAN) * 2f64.powi(shift as i32)
    })
}

impl Zero for GaussScalar {
    fn zero() -> Self {
        GaussScalar { re: BigRational::zero(), im: BigRational::zero() }
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussScalar {
    fn one() -> Self {
        GaussScalar { re: BigRational::one(), im: BigRational::zero() }
    }
}

impl<'a> Add<&'a GaussScalar> for &'a GaussScalar {
    type Output = GaussScalar;
    fn add(self, o: &GaussScalar) -> GaussScalar {
        GaussScalar { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}
impl<'a> Sub<&'a GaussScalar> for &'a GaussScalar {
    type Output = GaussScalar;
    fn sub(self, o: &GaussScalar) -> GaussScalar {
        GaussScalar { re: &self.re - &o.re, im: &self.im - &o.im }
    }
}
impl<'a> Mul<&'a GaussScalar> for &'a GaussScalar {
    type Output = GaussScalar;
    fn mul(self, o: &GaussScalar) -> GaussScalar {
        if self.im.is_zero() && o.im.is_zero() {
            return GaussScalar::real(&self.re * &o.re);
        }
        GaussScalar { re: &self.re * &o.re - &self.im * &o.im, im: &self.re * &o.im + &self.im * &o.re }
    }
}
impl<'a> Div<&'a GaussScalar> for &'a GaussScalar {
    type Output = GaussScalar;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: &GaussScalar) -> GaussScalar {
        self * &o.inv().expect("division by zero GaussScalar")
    }
}
impl Add for GaussScalar {
    type Output = GaussScalar;
    fn add(self, o: GaussScalar) -> GaussScalar {
        &self + &o
    }
}
impl Sub for GaussScalar {
    type Output = GaussScalar;
    fn sub(self, o: GaussScalar) -> GaussScalar {
        &self - &o
    }
}
impl Mul for GaussScalar {
    type Output = GaussScalar;
    fn mul(self, o: GaussScalar) -> GaussScalar {
        &self * &o
    }
}
impl Div for GaussScalar {
    type Output = GaussScalar;
    fn div(self, o: GaussScalar) -> GaussScalar {
        &self / &o
    }
}
impl Neg for GaussScalar {
    type Output = GaussScalar;
    fn neg(self) -> GaussScalar {
        GaussScalar { re: -self.re, im: -self.im }
    }
}
impl Neg for &GaussScalar {
    type Output = GaussScalar;
    fn neg(self) -> GaussScalar {
        GaussScalar { re: -self.re.clone(), im: -self.im.clone() }
    }
}
impl AddAssign<&GaussScalar> for GaussScalar {
    fn add_assign(&mut self, o: &GaussScalar) {
        self.re += &o.re;
        self.im += &o.im;
    }
}
impl SubAssign<&GaussScalar> for GaussScalar {
    fn sub_assign(&mut self, o: &GaussScalar) {
        self.re -= &o.re;
        self.im -= &o.im;
    }
}
impl MulAssign<&GaussScalar> for GaussScalar {
    fn mul_assign(&mut self, o: &GaussScalar) {
        *self = &*self * o;
    }
}

impl From<i64> for GaussScalar {
    fn from(n: i64) -> Self {
        GaussScalar::from_int(n)
    }
}

fn fmt_rat(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl GaussScalar {
    /// True when the printed form needs parentheses to be used as a product factor.
    pub fn is_compound(&self) -> bool {
        !self.re.is_zero() && !self.im.is_zero()
    }

    /// Sign used when this scalar leads a term: a purely real or purely imaginary
    /// negative value prints as `- |c|`.
    pub fn is_negative_display(&self) -> bool {
        if self.im.is_zero() {
            self.re.is_negative()
        } else if self.re.is_zero() {
            self.im.is_negative()
        } else {
            false
        }
    }
}

impl fmt::Display for GaussScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", fmt_rat(&self.re));
        }
        if self.re.is_zero() {
            return write!(f, "{}i", fmt_rat(&self.im));
        }
        let sign = if self.im.is_negative() { "-" } else { "+" };
        write!(f, "({}{}{}i)", fmt_rat(&self.re), sign, fmt_rat(&self.im.abs()))
    }
}

/// Dense square or rectangular matrix over Q(i), row-major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SMat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<GaussScalar>,
}

impl SMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SMat { rows, cols, data: vec![GaussScalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = SMat::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = GaussScalar::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<GaussScalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged matrix rows");
        SMat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        SMat::from_rows(rows.iter().map(|r| r.iter().map(|&x| GaussScalar::from_int(x)).collect()).collect())
    }

    pub fn get(&self, i: usize, j: usize) -> &GaussScalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: GaussScalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn to_rows(&self) -> Vec<Vec<GaussScalar>> {
        self.data.chunks(self.cols.max(1)).map(|c| c.to_vec()).take(self.rows).collect()
    }

    pub fn mul(&self, o: &SMat) -> SMat {
        assert_eq!(self.cols, o.rows);
        let mut out = SMat::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        out.data[i * o.cols + j] += &(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> SMat {
        let mut out = SMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == SMat::identity(self.rows)
    }

    /// Gauss-Jordan inverse; `None` when singular or not square.
    pub fn inverse(&self) -> Option<SMat> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = SMat::identity(n);
        for col in 0..n {
            let piv = (col..n).find(|&r| !a.get(r, col).is_zero())?;
            if piv != col {
                for j in 0..n {
                    a.data.swap(piv * n + j, col * n + j);
                    inv.data.swap(piv * n + j, col * n + j);
                }
            }
            let p = a.get(col, col).inv()?;
            for j in 0..n {
                let x = a.get(col, j) * &p;
                a.set(col, j, x);
                let y = inv.get(col, j) * &p;
                inv.set(col, j, y);
            }
            for r in 0..n {
                if r == col || a.get(r, col).is_zero() {
                    continue;
                }
                let factor = a.get(r, col).clone();
                for j in 0..n {
                    let x = a.get(r, j) - &(&factor * a.get(col, j));
                    a.set(r, j, x);
                    let y = inv.get(r, j) - &(&factor * inv.get(col, j));
                    inv.set(r, j, y);
                }
            }
        }
        Some(inv)
    }

    pub fn det(&self) -> GaussScalar {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut det = GaussScalar::one();
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| !a.get(r, col).is_zero()) else {
                return GaussScalar::zero();
            };
            if piv != col {
                for j in 0..n {
                    a.data.swap(piv * n + j, col * n + j);
                }
                det = -det;
            }
            let p = a.get(col, col).clone();
            det = &det * &p;
            let pinv = p.inv().unwrap();
            for r in col + 1..n {
                if a.get(r, col).is_zero() {
                    continue;
                }
                let factor = a.get(r, col) * &pinv;
                for j in col..n {
                    let x = a.get(r, j) - &(&factor * a.get(col, j));
                    a.set(r, j, x);
                }
            }
        }
        det
    }
}
