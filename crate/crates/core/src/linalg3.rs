//! 3-vectors and 3×3 matrices over any [`Scalar`] backend.

use std::ops::{Add, Index, Mul, Neg, Sub};

use crate::qfield::FieldError;
use crate::scalar::Scalar;

/// Column vector `(x, y, z)ᵗ`.
#[derive(Clone, Debug, PartialEq)]
pub struct Vec3<S> {
    pub x: S,
    pub y: S,
    pub z: S,
}

impl<S: Scalar> Vec3<S> {
    pub fn new(x: S, y: S, z: S) -> Self {
        Vec3 { x, y, z }
    }

    pub fn from_array([x, y, z]: [S; 3]) -> Self {
        Vec3 { x, y, z }
    }

    pub fn zero() -> Self {
        Vec3::new(S::zero(), S::zero(), S::zero())
    }

    /// The `i`-th canonical basis vector (`i` in `0..3`).
    pub fn basis(i: usize) -> Self {
        let mut v = [S::zero(), S::zero(), S::zero()];
        v[i] = S::one();
        Vec3::from_array(v)
    }

    pub fn to_array(&self) -> [S; 3] {
        [self.x.clone(), self.y.clone(), self.z.clone()]
    }

    pub fn get(&self, i: usize) -> &S {
        match i {
            0 => &self.x,
            1 => &self.y,
            2 => &self.z,
            _ => panic!("Vec3 index {i} out of range"),
        }
    }

    pub fn map<T, F: FnMut(&S) -> T>(&self, mut f: F) -> Vec3<T> {
        Vec3 {
            x: f(&self.x),
            y: f(&self.y),
            z: f(&self.z),
        }
    }

    pub fn dot(&self, other: &Self) -> S {
        dot(self, other)
    }

    pub fn cross(&self, other: &Self) -> Self {
        cross(self, other)
    }

    pub fn norm_squared(&self) -> S {
        dot(self, self)
    }

    pub fn scale(&self, k: &S) -> Self {
        self.map(|c| c.clone() * k.clone())
    }

    pub fn try_div(&self, k: &S) -> Result<Self, FieldError> {
        Ok(Vec3::new(
            self.x.try_div(k)?,
            self.y.try_div(k)?,
            self.z.try_div(k)?,
        ))
    }

    pub fn to_f64(&self) -> [f64; 3] {
        [self.x.to_f64(), self.y.to_f64(), self.z.to_f64()]
    }
}

/// `⟨u, v⟩ = Σ uᵢvᵢ`.
pub fn dot<S: Scalar>(u: &Vec3<S>, v: &Vec3<S>) -> S {
    u.x.clone() * v.x.clone() + u.y.clone() * v.y.clone() + u.z.clone() * v.z.clone()
}

/// `u ∧ v` in a right-handed frame.
pub fn cross<S: Scalar>(u: &Vec3<S>, v: &Vec3<S>) -> Vec3<S> {
    Vec3 {
        x: u.y.clone() * v.z.clone() - u.z.clone() * v.y.clone(),
        y: u.z.clone() * v.x.clone() - u.x.clone() * v.z.clone(),
        z: u.x.clone() * v.y.clone() - u.y.clone() * v.x.clone(),
    }
}

impl<S: Scalar> Add for Vec3<S> {
    type Output = Vec3<S>;
    fn add(self, rhs: Self) -> Self {
        Vec3::new(self.x + rhs.x, self.y + rhs.y, self.z + rhs.z)
    }
}

impl<S: Scalar> Sub for Vec3<S> {
    type Output = Vec3<S>;
    fn sub(self, rhs: Self) -> Self {
        Vec3::new(self.x - rhs.x, self.y - rhs.y, self.z - rhs.z)
    }
}

impl<S: Scalar> Neg for Vec3<S> {
    type Output = Vec3<S>;
    fn neg(self) -> Self {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

/// Dense row-major 3×3 matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat3<S> {
    rows: [[S; 3]; 3],
}

impl<S: Scalar> Mat3<S> {
    pub fn from_rows(rows: [[S; 3]; 3]) -> Self {
        Mat3 { rows }
    }

    pub fn from_fn<F: FnMut(usize, usize) -> S>(mut f: F) -> Self {
        Mat3 {
            rows: std::array::from_fn(|i| std::array::from_fn(|j| f(i, j))),
        }
    }

    /// Matrix with the given columns.
    pub fn from_columns(c0: &Vec3<S>, c1: &Vec3<S>, c2: &Vec3<S>) -> Self {
        let cols = [c0, c1, c2];
        Self::from_fn(|i, j| cols[j].get(i).clone())
    }

    pub fn identity() -> Self {
        Self::from_fn(|i, j| if i == j { S::one() } else { S::zero() })
    }

    pub fn zero() -> Self {
        Self::from_fn(|_, _| S::zero())
    }

    pub fn diag(a: S, b: S, c: S) -> Self {
        let d = [a, b, c];
        Self::from_fn(|i, j| if i == j { d[i].clone() } else { S::zero() })
    }

    /// `u·vᵗ`.
    pub fn outer(u: &Vec3<S>, v: &Vec3<S>) -> Self {
        Self::from_fn(|i, j| u.get(i).clone() * v.get(j).clone())
    }

    pub fn rows(&self) -> &[[S; 3]; 3] {
        &self.rows
    }

    pub fn into_rows(self) -> [[S; 3]; 3] {
        self.rows
    }

    pub fn row(&self, i: usize) -> Vec3<S> {
        Vec3::from_array(self.rows[i].clone())
    }

    pub fn column(&self, j: usize) -> Vec3<S> {
        Vec3::new(
            self.rows[0][j].clone(),
            self.rows[1][j].clone(),
            self.rows[2][j].clone(),
        )
    }

    pub fn entries(&self) -> impl Iterator<Item = &S> {
        self.rows.iter().flatten()
    }

    pub fn map<F: FnMut(&S) -> S>(&self, mut f: F) -> Self {
        Self::from_fn(|i, j| f(&self.rows[i][j]))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(|i, j| self.rows[j][i].clone())
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        Self::from_fn(|i, j| {
            self.rows[i][0].clone() * rhs.rows[0][j].clone()
                + self.rows[i][1].clone() * rhs.rows[1][j].clone()
                + self.rows[i][2].clone() * rhs.rows[2][j].clone()
        })
    }

    pub fn matvec(&self, v: &Vec3<S>) -> Vec3<S> {
        Vec3::new(
            dot(&self.row(0), v),
            dot(&self.row(1), v),
            dot(&self.row(2), v),
        )
    }

    pub fn scale(&self, k: &S) -> Self {
        self.map(|e| e.clone() * k.clone())
    }

    /// Cofactor expansion along the first row.
    pub fn det(&self) -> S {
        let m = &self.rows;
        let minor = |r1: usize, r2: usize, c1: usize, c2: usize| {
            m[r1][c1].clone() * m[r2][c2].clone() - m[r1][c2].clone() * m[r2][c1].clone()
        };
        m[0][0].clone() * minor(1, 2, 1, 2) - m[0][1].clone() * minor(1, 2, 0, 2)
            + m[0][2].clone() * minor(1, 2, 0, 1)
    }

    pub fn trace(&self) -> S {
        self.rows[0][0].clone() + self.rows[1][1].clone() + self.rows[2][2].clone()
    }

    /// Largest absolute entry, evaluated in floating point.
    pub fn max_abs(&self) -> f64 {
        self.entries().map(|e| e.to_f64().abs()).fold(0.0, f64::max)
    }

    /// True when every entry of `self − other` is zero within `tol`.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> Result<bool, FieldError> {
        for (a, b) in self.entries().zip(other.entries()) {
            if !a.approx_eq(b, tol)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Rewrites the entries into one common representation.
    pub fn unified(&self) -> Result<Self, FieldError> {
        let mut flat: Vec<S> = self.entries().cloned().collect();
        S::unify(&mut flat)?;
        Ok(Self::from_fn(|i, j| flat[3 * i + j].clone()))
    }

    pub fn to_f64(&self) -> [[f64; 3]; 3] {
        std::array::from_fn(|i| std::array::from_fn(|j| self.rows[i][j].to_f64()))
    }
}

impl<S> Index<(usize, usize)> for Mat3<S> {
    type Output = S;
    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.rows[i][j]
    }
}

impl<S: Scalar> Add for Mat3<S> {
    type Output = Mat3<S>;
    fn add(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| self.rows[i][j].clone() + rhs.rows[i][j].clone())
    }
}

impl<S: Scalar> Sub for Mat3<S> {
    type Output = Mat3<S>;
    fn sub(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| self.rows[i][j].clone() - rhs.rows[i][j].clone())
    }
}

impl<S: Scalar> Neg for Mat3<S> {
    type Output = Mat3<S>;
    fn neg(self) -> Self {
        self.map(|e| -e.clone())
    }
}

impl<S: Scalar> Mul for Mat3<S> {
    type Output = Mat3<S>;
    fn mul(self, rhs: Self) -> Self {
        self.matmul(&rhs)
    }
}

impl<S: Scalar> Mul<Vec3<S>> for Mat3<S> {
    type Output = Vec3<S>;
    fn mul(self, rhs: Vec3<S>) -> Vec3<S> {
        self.matvec(&rhs)
    }
}
