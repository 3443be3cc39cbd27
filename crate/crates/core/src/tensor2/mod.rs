//! Vectors and second-rank tensors over 3-space.

mod eigen;
mod polar;
mod rotation;

pub use eigen::{eigen_sym, SpectralDecomp};
pub use polar::{polar, sqrt_spd, PolarDecomp};
pub use rotation::{
    change_basis_tensor, change_basis_vector, reflexion, rotation_composed, rotation_from_axis_angle,
    rotation_to_axis_angle, AngleKind, AxisAngle,
};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec3(pub [f64; 3]);

impl Vec3 {
    pub const ZERO: Vec3 = Vec3([0.0; 3]);

    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3([x, y, z])
    }

    pub fn e(i: usize) -> Self {
        let mut v = [0.0; 3];
        v[i] = 1.0;
        Vec3(v)
    }

    pub fn from_slice(s: &[f64]) -> Result<Self> {
        match s {
            [x, y, z] => Ok(Vec3([*x, *y, *z])),
            [x, y] => Ok(Vec3([*x, *y, 0.0])),
            _ => Err(Error::Dimension {
                expected: 3,
                found: s.len(),
            }),
        }
    }

    pub fn dot(&self, o: &Vec3) -> f64 {
        self.0[0] * o.0[0] + self.0[1] * o.0[1] + self.0[2] * o.0[2]
    }

    pub fn cross(&self, o: &Vec3) -> Vec3 {
        let [a, b, c] = self.0;
        let [x, y, z] = o.0;
        Vec3([b * z - c * y, c * x - a * z, a * y - b * x])
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn normalized(&self) -> Option<Vec3> {
        let n = self.norm();
        (n > 0.0).then(|| *self * (1.0 / n))
    }

    pub fn scale(&self, s: f64) -> Vec3 {
        *self * s
    }
}

/// Mixed product `a x b . c`.
pub fn mixed(a: &Vec3, b: &Vec3, c: &Vec3) -> f64 {
    a.cross(b).dot(c)
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }
}

impl AddAssign for Vec3 {
    fn add_assign(&mut self, o: Vec3) {
        *self = *self + o;
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3([self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2]])
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        self * -1.0
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3([self.0[0] * s, self.0[1] * s, self.0[2] * s])
    }
}

impl Index<usize> for Vec3 {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for Vec3 {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.0[i]
    }
}

/// Second-rank tensor, components `L_ij` in row-major order.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Tensor2(pub [[f64; 3]; 3]);

impl Tensor2 {
    pub const ZERO: Tensor2 = Tensor2([[0.0; 3]; 3]);
    pub const IDENTITY: Tensor2 = Tensor2([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);

    pub fn from_fn(f: impl Fn(usize, usize) -> f64) -> Self {
        let mut m = [[0.0; 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = f(i, j);
            }
        }
        Tensor2(m)
    }

    pub fn diag(a: f64, b: f64, c: f64) -> Self {
        Tensor2([[a, 0.0, 0.0], [0.0, b, 0.0], [0.0, 0.0, c]])
    }

    pub fn from_rows(r0: Vec3, r1: Vec3, r2: Vec3) -> Self {
        Tensor2([r0.0, r1.0, r2.0])
    }

    pub fn from_cols(c0: Vec3, c1: Vec3, c2: Vec3) -> Self {
        Tensor2::from_rows(c0, c1, c2).transpose()
    }

    pub fn row(&self, i: usize) -> Vec3 {
        Vec3(self.0[i])
    }

    pub fn col(&self, j: usize) -> Vec3 {
        Vec3([self.0[0][j], self.0[1][j], self.0[2][j]])
    }

    pub fn apply(&self, u: &Vec3) -> Vec3 {
        Vec3([self.row(0).dot(u), self.row(1).dot(u), self.row(2).dot(u)])
    }

    pub fn compose(&self, o: &Tensor2) -> Tensor2 {
        Tensor2::from_fn(|i, j| (0..3).map(|k| self.0[i][k] * o.0[k][j]).sum())
    }

    pub fn transpose(&self) -> Tensor2 {
        Tensor2::from_fn(|i, j| self.0[j][i])
    }

    pub fn trace(&self) -> f64 {
        self.0[0][0] + self.0[1][1] + self.0[2][2]
    }

    /// Scalar product `A . B = A_ij B_ij`.
    pub fn inner(&self, o: &Tensor2) -> f64 {
        (0..3).flat_map(|i| (0..3).map(move |j| (i, j))).map(|(i, j)| self.0[i][j] * o.0[i][j]).sum()
    }

    pub fn norm(&self) -> f64 {
        self.inner(self).sqrt()
    }

    pub fn scale(&self, s: f64) -> Tensor2 {
        Tensor2::from_fn(|i, j| self.0[i][j] * s)
    }

    pub fn sym(&self) -> Tensor2 {
        (*self + self.transpose()).scale(0.5)
    }

    pub fn skw(&self) -> Tensor2 {
        (*self - self.transpose()).scale(0.5)
    }

    pub fn sph(&self) -> Tensor2 {
        Tensor2::IDENTITY.scale(self.trace() / 3.0)
    }

    pub fn dev(&self) -> Tensor2 {
        *self - self.sph()
    }

    pub fn det(&self) -> f64 {
        let m = &self.0;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    /// Adjugate `L*` with `L* = det(L) L^-T`; defined for singular `L` too.
    pub fn adjugate(&self) -> Tensor2 {
        let m = &self.0;
        let cof = |i: usize, j: usize| {
            let (a, b) = ((i + 1) % 3, (i + 2) % 3);
            let (c, d) = ((j + 1) % 3, (j + 2) % 3);
            m[a][c] * m[b][d] - m[a][d] * m[b][c]
        };
        Tensor2::from_fn(cof)
    }

    pub fn invariants(&self) -> [f64; 3] {
        let t = self.trace();
        let t2 = self.compose(self).trace();
        [t, 0.5 * (t * t - t2), self.det()]
    }

    pub fn inverse(&self) -> Result<Tensor2> {
        let det = self.det();
        let n = self.norm();
        if det.abs() <= 1e-12 * n * n * n || det == 0.0 {
            return Err(Error::SingularTensor { det });
        }
        Ok(self.adjugate().transpose().scale(1.0 / det))
    }

    pub fn dyad(u: &Vec3, v: &Vec3) -> Tensor2 {
        Tensor2::from_fn(|i, j| u.0[i] * v.0[j])
    }

    /// Skew tensor with `W u = w x u`.
    pub fn axial(w: &Vec3) -> Tensor2 {
        let [a, b, c] = w.0;
        Tensor2([[0.0, -c, b], [c, 0.0, -a], [-b, a, 0.0]])
    }

    pub fn axial_inv(&self) -> Result<Vec3> {
        let defect = (*self + self.transpose()).norm();
        if defect > 1e-10 * self.norm() {
            return Err(Error::NotSkew { defect });
        }
        let w = self.skw();
        Ok(Vec3([w.0[2][1], w.0[0][2], w.0[1][0]]))
    }

    pub fn symmetry_defect(&self) -> f64 {
        (*self - self.transpose()).norm()
    }

    pub fn is_symmetric(&self, rel_tol: f64) -> bool {
        self.symmetry_defect() <= rel_tol * self.norm()
    }

    pub fn cayley_hamilton_residual(&self) -> f64 {
        let [i1, i2, i3] = self.invariants();
        let l2 = self.compose(self);
        let l3 = l2.compose(self);
        (l3 - l2.scale(i1) + self.scale(i2) - Tensor2::IDENTITY.scale(i3)).norm()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().fold(0.0, |m, x| m.max(x.abs()))
    }
}

/// Determinant, principal invariants, adjugate and (when regular) inverse.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeterminantSuite {
    pub det: f64,
    pub invariants: [f64; 3],
    pub inverse: Option<Tensor2>,
    pub adjugate: Tensor2,
}

pub fn determinant_suite(l: &Tensor2) -> DeterminantSuite {
    DeterminantSuite {
        det: l.det(),
        invariants: l.invariants(),
        inverse: l.inverse().ok(),
        adjugate: l.adjugate(),
    }
}

impl Add for Tensor2 {
    type Output = Tensor2;
    fn add(self, o: Tensor2) -> Tensor2 {
        Tensor2::from_fn(|i, j| self.0[i][j] + o.0[i][j])
    }
}

impl Sub for Tensor2 {
    type Output = Tensor2;
    fn sub(self, o: Tensor2) -> Tensor2 {
        Tensor2::from_fn(|i, j| self.0[i][j] - o.0[i][j])
    }
}

impl Neg for Tensor2 {
    type Output = Tensor2;
    fn neg(self) -> Tensor2 {
        self.scale(-1.0)
    }
}

impl Mul for Tensor2 {
    type Output = Tensor2;
    fn mul(self, o: Tensor2) -> Tensor2 {
        self.compose(&o)
    }
}

impl Mul<Vec3> for Tensor2 {
    type Output = Vec3;
    fn mul(self, u: Vec3) -> Vec3 {
        self.apply(&u)
    }
}

impl Mul<f64> for Tensor2 {
    type Output = Tensor2;
    fn mul(self, s: f64) -> Tensor2 {
        self.scale(s)
    }
}
