//! Exact 2x2 rational linear algebra and the standard symplectic form.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::padic::{parse_rational, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Vec2 {
    pub x1: Rational,
    pub x2: Rational,
}

impl Vec2 {
    pub fn new(x1: Rational, x2: Rational) -> Self {
        Vec2 { x1, x2 }
    }

    pub fn from_ints(x1: i64, x2: i64) -> Self {
        Vec2::new(int(x1), int(x2))
    }

    pub fn zero() -> Self {
        Vec2::from_ints(0, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.x1.is_zero() && self.x2.is_zero()
    }

    pub fn scaled(&self, s: &Rational) -> Vec2 {
        Vec2::new(&self.x1 * s, &self.x2 * s)
    }

    /// Parses `"x,y"`.
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').collect();
        if parts.len() != 2 {
            return Err(Error::InvalidInput(format!("expected \"x,y\", got {s:?}")));
        }
        Ok(Vec2::new(parse_rational(parts[0])?, parse_rational(parts[1])?))
    }
}

impl fmt::Display for Vec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.x1, self.x2)
    }
}

impl Add for &Vec2 {
    type Output = Vec2;
    fn add(self, rhs: &Vec2) -> Vec2 {
        Vec2::new(&self.x1 + &rhs.x1, &self.x2 + &rhs.x2)
    }
}

impl Sub for &Vec2 {
    type Output = Vec2;
    fn sub(self, rhs: &Vec2) -> Vec2 {
        Vec2::new(&self.x1 - &rhs.x1, &self.x2 - &rhs.x2)
    }
}

impl Neg for &Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-&self.x1, -&self.x2)
    }
}

/// Row-major 2x2 matrix `[[a, b], [c, d]]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat2 {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
    pub d: Rational,
}

pub(crate) fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

impl Mat2 {
    pub fn new(a: Rational, b: Rational, c: Rational, d: Rational) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Self {
        Mat2::new(int(a), int(b), int(c), int(d))
    }

    pub fn identity() -> Self {
        Mat2::from_ints(1, 0, 0, 1)
    }

    /// The standard symplectic matrix `[[0, 1], [-1, 0]]`.
    pub fn j() -> Self {
        Mat2::from_ints(0, 1, -1, 0)
    }

    pub fn diag(x: Rational, y: Rational) -> Self {
        Mat2::new(x, Rational::zero(), Rational::zero(), y)
    }

    pub fn scalar(s: Rational) -> Self {
        Mat2::diag(s.clone(), s)
    }

    pub fn from_columns(u: &Vec2, v: &Vec2) -> Self {
        Mat2::new(u.x1.clone(), v.x1.clone(), u.x2.clone(), v.x2.clone())
    }

    pub fn col(&self, i: usize) -> Vec2 {
        match i {
            0 => Vec2::new(self.a.clone(), self.c.clone()),
            1 => Vec2::new(self.b.clone(), self.d.clone()),
            _ => panic!("column index {i} out of range"),
        }
    }

    pub fn columns(&self) -> [Vec2; 2] {
        [self.col(0), self.col(1)]
    }

    pub fn det(&self) -> Rational {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn is_singular(&self) -> bool {
        self.det().is_zero()
    }

    pub fn transpose(&self) -> Mat2 {
        Mat2::new(self.a.clone(), self.c.clone(), self.b.clone(), self.d.clone())
    }

    /// `adj(M)` with `M * adj(M) = det(M) * I`.
    pub fn adjugate(&self) -> Mat2 {
        Mat2::new(self.d.clone(), -&self.b, -&self.c, self.a.clone())
    }

    pub fn inverse(&self) -> Option<Mat2> {
        let det = self.det();
        if det.is_zero() {
            return None;
        }
        Some(self.adjugate().scaled(&det.recip()))
    }

    pub fn scaled(&self, s: &Rational) -> Mat2 {
        Mat2::new(&self.a * s, &self.b * s, &self.c * s, &self.d * s)
    }

    pub fn apply(&self, v: &Vec2) -> Vec2 {
        Vec2::new(
            &self.a * &v.x1 + &self.b * &v.x2,
            &self.c * &v.x1 + &self.d * &v.x2,
        )
    }

    pub fn is_one(&self) -> bool {
        *self == Mat2::identity()
    }

    pub fn entries(&self) -> [&Rational; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    /// Parses `"a,b;c,d"` (rows separated by `;`).
    pub fn parse(s: &str) -> Result<Self> {
        let rows: Vec<&str> = s.split(';').collect();
        if rows.len() != 2 {
            return Err(Error::InvalidInput(format!(
                "expected matrix \"a,b;c,d\", got {s:?}"
            )));
        }
        let r0 = Vec2::parse(rows[0])?;
        let r1 = Vec2::parse(rows[1])?;
        Ok(Mat2::new(r0.x1, r0.x2, r1.x1, r1.x2))
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{};{},{}", self.a, self.b, self.c, self.d)
    }
}

impl Mul for &Mat2 {
    type Output = Mat2;
    fn mul(self, r: &Mat2) -> Mat2 {
        Mat2::new(
            &self.a * &r.a + &self.b * &r.c,
            &self.a * &r.b + &self.b * &r.d,
            &self.c * &r.a + &self.d * &r.c,
            &self.c * &r.b + &self.d * &r.d,
        )
    }
}

impl Mul<&Vec2> for &Mat2 {
    type Output = Vec2;
    fn mul(self, v: &Vec2) -> Vec2 {
        self.apply(v)
    }
}

/// `Delta(u, v) = u^T J v = u1 v2 - u2 v1`.
pub fn sympl(u: &Vec2, v: &Vec2) -> Rational {
    &u.x1 * &v.x2 - &u.x2 * &v.x1
}

pub fn is_symplectic(m: &Mat2) -> bool {
    m.det().is_one()
}
