//! Fixed-size complex linear algebra on the 4-dimensional spinor space.

use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::de::{Deserializer, Error as DeError};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Column spinor with four complex components.
pub type Vec4 = [C64; 4];

/// Row covector, the shape of a dual spinor.
pub type Covec4 = [C64; 4];

/// A 4×4 complex matrix stored row-major.
#[derive(Clone, Copy, PartialEq)]
pub struct Matrix4(pub [[C64; 4]; 4]);

impl Matrix4 {
    pub const fn zero() -> Self {
        Matrix4([[ZERO; 4]; 4])
    }

    pub const fn identity() -> Self {
        let mut m = [[ZERO; 4]; 4];
        m[0][0] = ONE;
        m[1][1] = ONE;
        m[2][2] = ONE;
        m[3][3] = ONE;
        Matrix4(m)
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = [[ZERO; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = f(i, j);
            }
        }
        Matrix4(m)
    }

    /// Builds a matrix from real row-major entries.
    pub fn from_real(rows: [[f64; 4]; 4]) -> Self {
        Self::from_fn(|i, j| C64::new(rows[i][j], 0.0))
    }

    pub fn diag(d: [C64; 4]) -> Self {
        Self::from_fn(|i, j| if i == j { d[i] } else { ZERO })
    }

    /// Assembles a matrix from four 2×2 blocks `[[a, b], [c, d]]`.
    pub fn from_blocks(a: [[C64; 2]; 2], b: [[C64; 2]; 2], c: [[C64; 2]; 2], d: [[C64; 2]; 2]) -> Self {
        Self::from_fn(|i, j| match (i < 2, j < 2) {
            (true, true) => a[i][j],
            (true, false) => b[i][j - 2],
            (false, true) => c[i - 2][j],
            (false, false) => d[i - 2][j - 2],
        })
    }

    /// Returns block `(r, c)` with `r, c ∈ {0, 1}`.
    pub fn block(&self, r: usize, c: usize) -> [[C64; 2]; 2] {
        let mut out = [[ZERO; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = self.0[2 * r + i][2 * c + j];
            }
        }
        out
    }

    pub fn conj(&self) -> Self {
        Self::from_fn(|i, j| self.0[i][j].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(|i, j| self.0[j][i])
    }

    pub fn dagger(&self) -> Self {
        Self::from_fn(|i, j| self.0[j][i].conj())
    }

    pub fn trace(&self) -> C64 {
        (0..4).map(|i| self.0[i][i]).sum()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::from_fn(|i, j| self.0[i][j] * s)
    }

    pub fn scale_re(&self, s: f64) -> Self {
        Self::from_fn(|i, j| self.0[i][j] * s)
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.0.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Entrywise comparison with absolute tolerance.
    pub fn approx_eq(&self, other: &Matrix4, tol: f64) -> bool {
        (*self - *other).max_abs() <= tol
    }

    pub fn mul_vec(&self, v: &Vec4) -> Vec4 {
        let mut out = [ZERO; 4];
        for (i, o) in out.iter_mut().enumerate() {
            *o = (0..4).map(|j| self.0[i][j] * v[j]).sum();
        }
        out
    }

    /// Row covector times matrix.
    pub fn left_mul_covec(&self, w: &Covec4) -> Covec4 {
        let mut out = [ZERO; 4];
        for (j, o) in out.iter_mut().enumerate() {
            *o = (0..4).map(|i| w[i] * self.0[i][j]).sum();
        }
        out
    }

    /// Commutator `AB - BA`.
    pub fn commutator(&self, other: &Matrix4) -> Matrix4 {
        *self * *other - *other * *self
    }

    /// Anticommutator `AB + BA`.
    pub fn anticommutator(&self, other: &Matrix4) -> Matrix4 {
        *self * *other + *other * *self
    }

    pub fn rows(&self) -> &[[C64; 4]; 4] {
        &self.0
    }

    /// Entries flattened row-major.
    pub fn flat(&self) -> [C64; 16] {
        let mut out = [ZERO; 16];
        for i in 0..4 {
            for j in 0..4 {
                out[4 * i + j] = self.0[i][j];
            }
        }
        out
    }
}

impl Default for Matrix4 {
    fn default() -> Self {
        Matrix4::zero()
    }
}

impl Index<(usize, usize)> for Matrix4 {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.0[i][j]
    }
}

impl IndexMut<(usize, usize)> for Matrix4 {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.0[i][j]
    }
}

impl Add for Matrix4 {
    type Output = Matrix4;
    fn add(self, rhs: Matrix4) -> Matrix4 {
        Matrix4::from_fn(|i, j| self.0[i][j] + rhs.0[i][j])
    }
}

impl AddAssign for Matrix4 {
    fn add_assign(&mut self, rhs: Matrix4) {
        for i in 0..4 {
            for j in 0..4 {
                self.0[i][j] += rhs.0[i][j];
            }
        }
    }
}

impl Sub for Matrix4 {
    type Output = Matrix4;
    fn sub(self, rhs: Matrix4) -> Matrix4 {
        Matrix4::from_fn(|i, j| self.0[i][j] - rhs.0[i][j])
    }
}

impl Neg for Matrix4 {
    type Output = Matrix4;
    fn neg(self) -> Matrix4 {
        Matrix4::from_fn(|i, j| -self.0[i][j])
    }
}

impl Mul for Matrix4 {
    type Output = Matrix4;
    fn mul(self, rhs: Matrix4) -> Matrix4 {
        Matrix4::from_fn(|i, j| (0..4).map(|k| self.0[i][k] * rhs.0[k][j]).sum())
    }
}

impl Mul<C64> for Matrix4 {
    type Output = Matrix4;
    fn mul(self, s: C64) -> Matrix4 {
        self.scale(s)
    }
}

impl Mul<f64> for Matrix4 {
    type Output = Matrix4;
    fn mul(self, s: f64) -> Matrix4 {
        self.scale_re(s)
    }
}

impl Mul<Matrix4> for C64 {
    type Output = Matrix4;
    fn mul(self, m: Matrix4) -> Matrix4 {
        m.scale(self)
    }
}

impl Mul<Matrix4> for f64 {
    type Output = Matrix4;
    fn mul(self, m: Matrix4) -> Matrix4 {
        m.scale_re(self)
    }
}

impl fmt::Debug for Matrix4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix4[")?;
        for row in &self.0 {
            write!(f, "  ")?;
            for z in row {
                write!(f, "{:>+9.4}{:+.4}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

// JSON form: 4×4 array of [re, im] pairs.
impl Serialize for Matrix4 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<[f64; 2]>> = self
            .0
            .iter()
            .map(|r| r.iter().map(|z| [z.re, z.im]).collect())
            .collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Matrix4 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows: Vec<Vec<[f64; 2]>> = Vec::deserialize(d)?;
        if rows.len() != 4 || rows.iter().any(|r| r.len() != 4) {
            return Err(D::Error::custom("expected a 4x4 array of [re, im] pairs"));
        }
        Ok(Matrix4::from_fn(|i, j| C64::new(rows[i][j][0], rows[i][j][1])))
    }
}

/// `Σ_i a_i b_i` without conjugation.
pub fn dot(a: &Covec4, b: &Vec4) -> C64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Outer product `ψ χ` of a column spinor and a row covector.
pub fn outer(col: &Vec4, row: &Covec4) -> Matrix4 {
    Matrix4::from_fn(|i, j| col[i] * row[j])
}

pub fn vec_conj(v: &Vec4) -> Vec4 {
    [v[0].conj(), v[1].conj(), v[2].conj(), v[3].conj()]
}

pub fn vec_scale(v: &Vec4, s: C64) -> Vec4 {
    [v[0] * s, v[1] * s, v[2] * s, v[3] * s]
}

pub fn vec_add(a: &Vec4, b: &Vec4) -> Vec4 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]]
}

pub fn vec_norm(v: &Vec4) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn vec_max_abs(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Serde adapter for slices of complex numbers as `[re, im]` pairs.
pub mod complex_pairs {
    use super::C64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer, const N: usize>(v: &[C64; N], s: S) -> Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = v.iter().map(|z| [z.re, z.im]).collect();
        pairs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>, const N: usize>(d: D) -> Result<[C64; N], D::Error> {
        let pairs: Vec<[f64; 2]> = Vec::deserialize(d)?;
        if pairs.len() != N {
            return Err(serde::de::Error::custom(format!("expected {N} complex pairs")));
        }
        let mut out = [C64::new(0.0, 0.0); N];
        for (o, p) in out.iter_mut().zip(pairs) {
            *o = C64::new(p[0], p[1]);
        }
        Ok(out)
    }
}

/// Serde adapter for a single complex number as `[re, im]`.
pub mod complex_pair {
    use super::C64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(z: &C64, s: S) -> Result<S::Ok, S::Error> {
        [z.re, z.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<C64, D::Error> {
        let p = <[f64; 2]>::deserialize(d)?;
        Ok(C64::new(p[0], p[1]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_neutral() {
        let m = Matrix4::from_fn(|i, j| C64::new(i as f64, j as f64));
        assert_eq!(m * Matrix4::identity(), m);
        assert_eq!(Matrix4::identity() * m, m);
    }

    #[test]
    fn blocks_roundtrip() {
        let m = Matrix4::from_fn(|i, j| C64::new((4 * i + j) as f64, -(j as f64)));
        let r = Matrix4::from_blocks(m.block(0, 0), m.block(0, 1), m.block(1, 0), m.block(1, 1));
        assert_eq!(m, r);
    }

    #[test]
    fn dagger_of_product_reverses() {
        let a = Matrix4::from_fn(|i, j| C64::new(i as f64 + 0.5, j as f64 - 1.0));
        let b = Matrix4::from_fn(|i, j| C64::new(j as f64 * 0.25, i as f64));
        assert!((a * b).dagger().approx_eq(&(b.dagger() * a.dagger()), 1e-12));
    }

    #[test]
    fn json_roundtrip() {
        let m = Matrix4::from_fn(|i, j| C64::new(i as f64, -(j as f64)));
        let s = serde_json::to_string(&m).unwrap();
        let back: Matrix4 = serde_json::from_str(&s).unwrap();
        assert_eq!(m, back);
        assert!(serde_json::from_str::<Matrix4>("[[[1,0]]]").is_err());
    }
}
