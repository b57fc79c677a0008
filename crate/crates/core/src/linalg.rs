//! Small fixed-size dense linear algebra: 3×3 and 4×4 matrices, 4-vectors,
//! and a cyclic Jacobi eigenvalue solver for symmetric matrices.

use core::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use crate::algebra::Vec3;
use crate::real;

/// A vector of ℝ⁴ with components indexed `0..4`. Component 0 is the
/// distinguished axis `e₀` of the space-form models.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Vec4(pub [f64; 4]);

impl Vec4 {
    pub const ZERO: Vec4 = Vec4([0.0; 4]);

    pub const fn new(x0: f64, x1: f64, x2: f64, x3: f64) -> Self {
        Vec4([x0, x1, x2, x3])
    }

    /// Basis vector `e_i`.
    pub fn basis(i: usize) -> Self {
        let mut v = [0.0; 4];
        v[i] = 1.0;
        Vec4(v)
    }

    /// Builds `(x0, v)`.
    pub fn from_parts(x0: f64, v: Vec3) -> Self {
        Vec4([x0, v.x, v.y, v.z])
    }

    /// The last three components.
    pub fn spatial(&self) -> Vec3 {
        Vec3::new(self.0[1], self.0[2], self.0[3])
    }

    pub fn dot(&self, other: &Vec4) -> f64 {
        self.0.iter().zip(other.0.iter()).map(|(a, b)| a * b).sum()
    }

    pub fn norm(&self) -> f64 {
        real::sqrt(self.dot(self))
    }

    pub fn scale(&self, s: f64) -> Vec4 {
        Vec4(self.0.map(|a| a * s))
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, a| m.max(a.abs()))
    }
}

impl Add for Vec4 {
    type Output = Vec4;
    fn add(self, o: Vec4) -> Vec4 {
        Vec4(core::array::from_fn(|i| self.0[i] + o.0[i]))
    }
}

impl Sub for Vec4 {
    type Output = Vec4;
    fn sub(self, o: Vec4) -> Vec4 {
        Vec4(core::array::from_fn(|i| self.0[i] - o.0[i]))
    }
}

impl Neg for Vec4 {
    type Output = Vec4;
    fn neg(self) -> Vec4 {
        self.scale(-1.0)
    }
}

impl Index<usize> for Vec4 {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for Vec4 {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.0[i]
    }
}

macro_rules! square_matrix {
    ($name:ident, $n:expr, $vec:ty) => {
        /// Row-major square matrix.
        #[derive(Clone, Copy, Debug, PartialEq)]
        pub struct $name(pub [[f64; $n]; $n]);

        impl Default for $name {
            fn default() -> Self {
                Self::ZERO
            }
        }

        impl $name {
            pub const ZERO: $name = $name([[0.0; $n]; $n]);

            pub fn identity() -> Self {
                let mut m = Self::ZERO;
                for i in 0..$n {
                    m.0[i][i] = 1.0;
                }
                m
            }

            /// Entries `f(i, j)`, filled in row-major order.
            pub fn from_fn(mut f: impl FnMut(usize, usize) -> f64) -> Self {
                let mut m = [[0.0; $n]; $n];
                for (i, row) in m.iter_mut().enumerate() {
                    for (j, v) in row.iter_mut().enumerate() {
                        *v = f(i, j);
                    }
                }
                $name(m)
            }

            pub fn transpose(&self) -> Self {
                Self::from_fn(|i, j| self.0[j][i])
            }

            pub fn scale(&self, s: f64) -> Self {
                Self::from_fn(|i, j| self.0[i][j] * s)
            }

            /// Largest absolute entry.
            pub fn max_abs(&self) -> f64 {
                self.0
                    .iter()
                    .flat_map(|row| row.iter())
                    .fold(0.0, |m, a| m.max(a.abs()))
            }

            pub fn symmetric_part(&self) -> Self {
                Self::from_fn(|i, j| 0.5 * (self.0[i][j] + self.0[j][i]))
            }

            pub fn antisymmetric_part(&self) -> Self {
                Self::from_fn(|i, j| 0.5 * (self.0[i][j] - self.0[j][i]))
            }

            pub fn trace(&self) -> f64 {
                (0..$n).map(|i| self.0[i][i]).sum()
            }

            pub fn is_finite(&self) -> bool {
                self.0.iter().flat_map(|r| r.iter()).all(|a| a.is_finite())
            }
        }

        impl Add for $name {
            type Output = $name;
            fn add(self, o: $name) -> $name {
                $name::from_fn(|i, j| self.0[i][j] + o.0[i][j])
            }
        }

        impl Sub for $name {
            type Output = $name;
            fn sub(self, o: $name) -> $name {
                $name::from_fn(|i, j| self.0[i][j] - o.0[i][j])
            }
        }

        impl Neg for $name {
            type Output = $name;
            fn neg(self) -> $name {
                self.scale(-1.0)
            }
        }

        impl Mul for $name {
            type Output = $name;
            fn mul(self, o: $name) -> $name {
                $name::from_fn(|i, j| (0..$n).map(|k| self.0[i][k] * o.0[k][j]).sum())
            }
        }

        impl Mul<$vec> for $name {
            type Output = $vec;
            fn mul(self, v: $vec) -> $vec {
                let a: [f64; $n] = v.into();
                let out: [f64; $n] =
                    core::array::from_fn(|i| (0..$n).map(|k| self.0[i][k] * a[k]).sum());
                out.into()
            }
        }
    };
}

square_matrix!(Mat3, 3, Vec3);
square_matrix!(Mat4, 4, Vec4);

impl From<Vec4> for [f64; 4] {
    fn from(v: Vec4) -> [f64; 4] {
        v.0
    }
}

impl From<[f64; 4]> for Vec4 {
    fn from(a: [f64; 4]) -> Vec4 {
        Vec4(a)
    }
}

impl Mat3 {
    pub fn from_columns(c0: Vec3, c1: Vec3, c2: Vec3) -> Self {
        Mat3([[c0.x, c1.x, c2.x], [c0.y, c1.y, c2.y], [c0.z, c1.z, c2.z]])
    }

    pub fn from_rows(r0: Vec3, r1: Vec3, r2: Vec3) -> Self {
        Mat3([r0.to_array(), r1.to_array(), r2.to_array()])
    }

    pub fn column(&self, j: usize) -> Vec3 {
        Vec3::new(self.0[0][j], self.0[1][j], self.0[2][j])
    }

    pub fn row(&self, i: usize) -> Vec3 {
        Vec3::from_array(self.0[i])
    }

    pub fn diag(d: [f64; 3]) -> Self {
        Mat3::from_fn(|i, j| if i == j { d[i] } else { 0.0 })
    }

    pub fn det(&self) -> f64 {
        det3(&self.0)
    }
}

impl Mat4 {
    /// Embeds `a` as the lower-right 3×3 block with `corner` at (0,0).
    pub fn block_diag(corner: f64, a: &Mat3) -> Self {
        let mut m = Mat4::ZERO;
        m.0[0][0] = corner;
        for i in 0..3 {
            for j in 0..3 {
                m.0[i + 1][j + 1] = a.0[i][j];
            }
        }
        m
    }

    pub fn column(&self, j: usize) -> Vec4 {
        Vec4(core::array::from_fn(|i| self.0[i][j]))
    }

    pub fn from_columns(cols: [Vec4; 4]) -> Self {
        Mat4::from_fn(|i, j| cols[j].0[i])
    }

    /// Lower-right 3×3 block.
    pub fn lower_block(&self) -> Mat3 {
        Mat3::from_fn(|i, j| self.0[i + 1][j + 1])
    }

    /// Determinant by cofactor expansion along the first row.
    pub fn det(&self) -> f64 {
        let m = &self.0;
        let mut total = 0.0;
        for col in 0..4 {
            let minor: [[f64; 3]; 3] = core::array::from_fn(|i| {
                core::array::from_fn(|j| m[i + 1][if j < col { j } else { j + 1 }])
            });
            let sign = if col % 2 == 0 { 1.0 } else { -1.0 };
            total += sign * m[0][col] * det3(&minor);
        }
        total
    }
}

pub fn det3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Cholesky factorization of a symmetric matrix. Returns `None` unless every
/// pivot exceeds `floor`, i.e. unless the matrix is positive definite with
/// margin.
pub fn cholesky<const N: usize>(a: &[[f64; N]; N], floor: f64) -> Option<[[f64; N]; N]> {
    let mut l = [[0.0; N]; N];
    for j in 0..N {
        let mut d = a[j][j];
        for k in 0..j {
            d -= l[j][k] * l[j][k];
        }
        if !(d > floor) {
            return None;
        }
        let djj = real::sqrt(d);
        l[j][j] = djj;
        for i in (j + 1)..N {
            let mut s = a[i][j];
            for k in 0..j {
                s -= l[i][k] * l[j][k];
            }
            l[i][j] = s / djj;
        }
    }
    Some(l)
}

/// Eigenvalues of a symmetric matrix by the cyclic Jacobi method, in
/// ascending order. Only the upper triangle is read.
pub fn symmetric_eigenvalues<const N: usize>(a: &[[f64; N]; N]) -> [f64; N] {
    let mut m = [[0.0; N]; N];
    for i in 0..N {
        for j in i..N {
            m[i][j] = a[i][j];
            m[j][i] = a[i][j];
        }
    }
    let scale = m
        .iter()
        .flat_map(|r| r.iter())
        .fold(0.0f64, |s, x| s.max(x.abs()));
    if scale == 0.0 {
        return [0.0; N];
    }
    for _sweep in 0..64 {
        let mut off = 0.0;
        for i in 0..N {
            for j in (i + 1)..N {
                off += m[i][j] * m[i][j];
            }
        }
        if off <= (f64::EPSILON * scale) * (f64::EPSILON * scale) {
            break;
        }
        for p in 0..N {
            for q in (p + 1)..N {
                if m[p][q] == 0.0 {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
                let t = theta.signum() / (theta.abs() + real::sqrt(theta * theta + 1.0));
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / real::sqrt(t * t + 1.0);
                let s = t * c;
                for k in 0..N {
                    let mkp = m[k][p];
                    let mkq = m[k][q];
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for k in 0..N {
                    let mpk = m[p][k];
                    let mqk = m[q][k];
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
            }
        }
    }
    let mut eig: [f64; N] = core::array::from_fn(|i| m[i][i]);
    eig.sort_by(|a, b| a.partial_cmp(b).unwrap_or(core::cmp::Ordering::Equal));
    eig
}

/// Counts of (positive, negative, zero) eigenvalues, with `|λ| ≤ tol` counted
/// as zero.
pub fn inertia<const N: usize>(a: &[[f64; N]; N], tol: f64) -> (usize, usize, usize) {
    let eig = symmetric_eigenvalues(a);
    let pos = eig.iter().filter(|&&l| l > tol).count();
    let neg = eig.iter().filter(|&&l| l < -tol).count();
    (pos, neg, N - pos - neg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::SMatrix;

    #[test]
    fn jacobi_matches_nalgebra_on_random_symmetric() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let mut a = [[0.0; 6]; 6];
            for i in 0..6 {
                for j in i..6 {
                    let v: f64 = rng.random_range(-2.0..2.0);
                    a[i][j] = v;
                    a[j][i] = v;
                }
            }
            let ours = symmetric_eigenvalues(&a);
            let m = SMatrix::<f64, 6, 6>::from_fn(|i, j| a[i][j]);
            let mut theirs: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
            theirs.sort_by(|a, b| a.partial_cmp(b).unwrap());
            for (x, y) in ours.iter().zip(theirs.iter()) {
                assert!((x - y).abs() < 1e-12, "{x} vs {y}");
            }
        }
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let a = [[1.0, 0.0], [0.0, -1.0]];
        assert!(cholesky(&a, 0.0).is_none());
        let b = [[4.0, 2.0], [2.0, 3.0]];
        let l = cholesky(&b, 0.0).unwrap();
        assert!((l[0][0] - 2.0).abs() < 1e-15);
        assert!((l[1][0] - 1.0).abs() < 1e-15);
        assert!((l[1][1] - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn det4_of_permutation() {
        let p = Mat4::from_columns([
            Vec4::basis(1),
            Vec4::basis(0),
            Vec4::basis(2),
            Vec4::basis(3),
        ]);
        assert_eq!(p.det(), -1.0);
        assert_eq!(Mat4::identity().det(), 1.0);
    }
}
