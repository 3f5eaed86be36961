//! Points and small dense matrices in dimensions 2 and 3.
//!
//! Both store a fixed `[f64; 3]` backing array plus the active dimension, so
//! they are `Copy` and cheap to pass through the hot gauge/support loops.
//! 2-D values keep the third coordinate at exactly 0.0.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::ops::{Add, Index, Mul, Neg, Sub};

/// A point (or vector) in R^2 or R^3.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point {
    coords: [f64; 3],
    dim: usize,
}

impl Point {
    pub fn new2(x: f64, y: f64) -> Self {
        Point { coords: [x, y, 0.0], dim: 2 }
    }

    pub fn new3(x: f64, y: f64, z: f64) -> Self {
        Point { coords: [x, y, z], dim: 3 }
    }

    /// Origin of the given dimension (2 or 3).
    pub fn zero(dim: usize) -> Self {
        assert!(dim == 2 || dim == 3, "dimension must be 2 or 3");
        Point { coords: [0.0; 3], dim }
    }

    pub fn basis(i: usize, dim: usize) -> Self {
        let mut p = Point::zero(dim);
        p.coords[i] = 1.0;
        p
    }

    pub fn from_slice(coords: &[f64]) -> Self {
        match coords {
            [x, y] => Point::new2(*x, *y),
            [x, y, z] => Point::new3(*x, *y, *z),
            _ => panic!("point must have 2 or 3 coordinates, got {}", coords.len()),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn x(&self) -> f64 {
        self.coords[0]
    }

    pub fn y(&self) -> f64 {
        self.coords[1]
    }

    pub fn z(&self) -> f64 {
        self.coords[2]
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords[..self.dim]
    }

    pub fn dot(&self, other: &Point) -> f64 {
        debug_assert_eq!(self.dim, other.dim);
        self.coords[0] * other.coords[0]
            + self.coords[1] * other.coords[1]
            + self.coords[2] * other.coords[2]
    }

    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn dist(&self, other: &Point) -> f64 {
        (*self - *other).norm()
    }

    pub fn scale(&self, s: f64) -> Self {
        Point {
            coords: [self.coords[0] * s, self.coords[1] * s, self.coords[2] * s],
            dim: self.dim,
        }
    }

    /// Unit vector in the same direction; `None` for (numerically) zero input.
    pub fn normalize(&self) -> Option<Self> {
        let n = self.norm();
        if n <= f64::EPSILON {
            None
        } else {
            Some(self.scale(1.0 / n))
        }
    }

    /// Cross product; both operands must be 3-D.
    pub fn cross(&self, other: &Point) -> Point {
        debug_assert_eq!(self.dim, 3);
        debug_assert_eq!(other.dim, 3);
        let a = &self.coords;
        let b = &other.coords;
        Point::new3(
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        )
    }

    /// 2-D cross product (z-component of the 3-D cross of embedded vectors).
    pub fn cross2(&self, other: &Point) -> f64 {
        self.coords[0] * other.coords[1] - self.coords[1] * other.coords[0]
    }

    /// Perpendicular vector in 2-D, rotated +90 degrees.
    pub fn perp(&self) -> Point {
        debug_assert_eq!(self.dim, 2);
        Point::new2(-self.coords[1], self.coords[0])
    }

    /// Embed a 2-D point into the z=0 plane of R^3.
    pub fn lift(&self) -> Point {
        debug_assert_eq!(self.dim, 2);
        Point::new3(self.coords[0], self.coords[1], 0.0)
    }

    /// Drop the z coordinate of a 3-D point.
    pub fn project_xy(&self) -> Point {
        debug_assert_eq!(self.dim, 3);
        Point::new2(self.coords[0], self.coords[1])
    }

    /// Component-wise maximum absolute difference.
    pub fn max_abs_diff(&self, other: &Point) -> f64 {
        let mut m: f64 = 0.0;
        for i in 0..self.dim {
            m = m.max((self.coords[i] - other.coords[i]).abs());
        }
        m
    }

    pub fn is_finite(&self) -> bool {
        self.coords().iter().all(|c| c.is_finite())
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, rhs: Point) -> Point {
        debug_assert_eq!(self.dim, rhs.dim);
        Point {
            coords: [
                self.coords[0] + rhs.coords[0],
                self.coords[1] + rhs.coords[1],
                self.coords[2] + rhs.coords[2],
            ],
            dim: self.dim,
        }
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, rhs: Point) -> Point {
        debug_assert_eq!(self.dim, rhs.dim);
        Point {
            coords: [
                self.coords[0] - rhs.coords[0],
                self.coords[1] - rhs.coords[1],
                self.coords[2] - rhs.coords[2],
            ],
            dim: self.dim,
        }
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        self.scale(-1.0)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, rhs: f64) -> Point {
        self.scale(rhs)
    }
}

impl Index<usize> for Point {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        debug_assert!(i < self.dim);
        &self.coords[i]
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.coords().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let coords = Vec::<f64>::deserialize(deserializer)?;
        if coords.len() != 2 && coords.len() != 3 {
            return Err(D::Error::custom(format!(
                "point must have 2 or 3 coordinates, got {}",
                coords.len()
            )));
        }
        Ok(Point::from_slice(&coords))
    }
}

/// A square matrix acting on points of the matching dimension.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat {
    rows: [[f64; 3]; 3],
    dim: usize,
}

impl Mat {
    pub fn identity(dim: usize) -> Self {
        assert!(dim == 2 || dim == 3);
        let mut rows = [[0.0; 3]; 3];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        Mat { rows, dim }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let dim = rows.len();
        assert!(dim == 2 || dim == 3, "matrix must be 2x2 or 3x3");
        let mut m = Mat { rows: [[0.0; 3]; 3], dim };
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), dim, "matrix must be square");
            m.rows[i][..dim].copy_from_slice(&row[..dim]);
        }
        if dim == 2 {
            m.rows[2][2] = 1.0;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.rows[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.rows[i][j] = v;
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.dim)
            .map(|i| self.rows[i][..self.dim].to_vec())
            .collect()
    }

    pub fn apply(&self, p: &Point) -> Point {
        let mut out = [0.0; 3];
        for (i, row) in self.rows.iter().enumerate() {
            out[i] = row[0] * p.coords[0] + row[1] * p.coords[1] + row[2] * p.coords[2];
        }
        Point { coords: out, dim: self.dim }
    }

    pub fn transpose(&self) -> Mat {
        let mut t = *self;
        for i in 0..3 {
            for j in 0..3 {
                t.rows[i][j] = self.rows[j][i];
            }
        }
        t
    }

    pub fn det(&self) -> f64 {
        let r = &self.rows;
        if self.dim == 2 {
            r[0][0] * r[1][1] - r[0][1] * r[1][0]
        } else {
            r[0][0] * (r[1][1] * r[2][2] - r[1][2] * r[2][1])
                - r[0][1] * (r[1][0] * r[2][2] - r[1][2] * r[2][0])
                + r[0][2] * (r[1][0] * r[2][1] - r[1][1] * r[2][0])
        }
    }

    /// Inverse via the adjugate; `None` when the determinant vanishes.
    pub fn inverse(&self) -> Option<Mat> {
        let d = self.det();
        if d.abs() < 1e-300 || !d.is_finite() {
            return None;
        }
        let r = &self.rows;
        let mut inv = Mat::identity(self.dim);
        if self.dim == 2 {
            inv.rows[0][0] = r[1][1] / d;
            inv.rows[0][1] = -r[0][1] / d;
            inv.rows[1][0] = -r[1][0] / d;
            inv.rows[1][1] = r[0][0] / d;
        } else {
            for i in 0..3 {
                for j in 0..3 {
                    let (a, b) = ((i + 1) % 3, (i + 2) % 3);
                    let (c, e) = ((j + 1) % 3, (j + 2) % 3);
                    // adjugate: cofactor of (j, i)
                    inv.rows[i][j] = (r[c][a] * r[e][b] - r[c][b] * r[e][a]) / d;
                }
            }
        }
        Some(inv)
    }

    /// Cholesky factor L (lower triangular, A = L·Lᵀ) of a symmetric
    /// positive-definite matrix; `None` if a pivot is not positive.
    pub fn cholesky(&self) -> Option<Mat> {
        let mut l = Mat { rows: [[0.0; 3]; 3], dim: self.dim };
        if self.dim == 2 {
            l.rows[2][2] = 1.0;
        }
        for i in 0..self.dim {
            for j in 0..=i {
                let mut s = self.rows[i][j];
                for k in 0..j {
                    s -= l.rows[i][k] * l.rows[j][k];
                }
                if i == j {
                    if s <= 0.0 {
                        return None;
                    }
                    l.rows[i][i] = s.sqrt();
                } else {
                    l.rows[i][j] = s / l.rows[j][j];
                }
            }
        }
        Some(l)
    }

    pub fn matmul(&self, other: &Mat) -> Mat {
        debug_assert_eq!(self.dim, other.dim);
        let mut out = Mat { rows: [[0.0; 3]; 3], dim: self.dim };
        for i in 0..3 {
            for j in 0..3 {
                let mut s = 0.0;
                for (k, other_row) in other.rows.iter().enumerate() {
                    s += self.rows[i][k] * other_row[j];
                }
                out.rows[i][j] = s;
            }
        }
        out
    }

    /// Rotation by `angle` in the plane (dim 2).
    pub fn rotation2(angle: f64) -> Mat {
        let (s, c) = angle.sin_cos();
        Mat::from_rows(&[vec![c, -s], vec![s, c]])
    }

    /// Rotation in 3-D from ZYZ Euler angles.
    pub fn rotation3(alpha: f64, beta: f64, gamma: f64) -> Mat {
        let rz1 = Mat::from_rows(&[
            vec![alpha.cos(), -alpha.sin(), 0.0],
            vec![alpha.sin(), alpha.cos(), 0.0],
            vec![0.0, 0.0, 1.0],
        ]);
        let ry = Mat::from_rows(&[
            vec![beta.cos(), 0.0, beta.sin()],
            vec![0.0, 1.0, 0.0],
            vec![-beta.sin(), 0.0, beta.cos()],
        ]);
        let rz2 = Mat::from_rows(&[
            vec![gamma.cos(), -gamma.sin(), 0.0],
            vec![gamma.sin(), gamma.cos(), 0.0],
            vec![0.0, 0.0, 1.0],
        ]);
        rz1.matmul(&ry).matmul(&rz2)
    }
}

impl Serialize for Mat {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_rows().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Mat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let rows = Vec::<Vec<f64>>::deserialize(deserializer)?;
        if rows.len() != 2 && rows.len() != 3 {
            return Err(D::Error::custom("matrix must be 2x2 or 3x3"));
        }
        for row in &rows {
            if row.len() != rows.len() {
                return Err(D::Error::custom("matrix must be square"));
            }
        }
        Ok(Mat::from_rows(&rows))
    }
}
