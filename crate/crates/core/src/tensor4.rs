//! Fourth-rank tensors on 3-space and the Kelvin 6x6 representation.

use crate::error::{Error, Result};
use crate::tensor2::Tensor2;
use serde::{Deserialize, Serialize};
use std::ops::{Add, Mul, Sub};

#[inline]
fn ix(i: usize, j: usize, k: usize, l: usize) -> usize {
    ((i * 3 + j) * 3 + k) * 3 + l
}

fn delta(i: usize, j: usize) -> f64 {
    if i == j {
        1.0
    } else {
        0.0
    }
}

/// Dense 3x3x3x3 tensor; acts on second-rank tensors by `A_ij = L_ijkl B_kl`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor4(pub [f64; 81]);

impl Tensor4 {
    pub fn zero() -> Self {
        Tensor4([0.0; 81])
    }

    pub fn from_fn(f: impl Fn(usize, usize, usize, usize) -> f64) -> Self {
        let mut t = [0.0; 81];
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    for l in 0..3 {
                        t[ix(i, j, k, l)] = f(i, j, k, l);
                    }
                }
            }
        }
        Tensor4(t)
    }

    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.0[ix(i, j, k, l)]
    }

    /// Fourth-rank identity `I [x] I`.
    pub fn identity() -> Self {
        Tensor4::from_fn(|i, j, k, l| delta(i, k) * delta(j, l))
    }

    /// `(A (x) B)_ijkl = A_ij B_kl`
    pub fn dyad(a: &Tensor2, b: &Tensor2) -> Self {
        Tensor4::from_fn(|i, j, k, l| a.0[i][j] * b.0[k][l])
    }

    /// Conjugation product `(A [x] B)_ijkl = A_ik B_jl`, so `(A [x] B) L = A L B^T`.
    pub fn boxtimes(a: &Tensor2, b: &Tensor2) -> Self {
        Tensor4::from_fn(|i, j, k, l| a.0[i][k] * b.0[j][l])
    }

    pub fn apply(&self, b: &Tensor2) -> Tensor2 {
        Tensor2::from_fn(|i, j| {
            let mut s = 0.0;
            for k in 0..3 {
                for l in 0..3 {
                    s += self.get(i, j, k, l) * b.0[k][l];
                }
            }
            s
        })
    }

    pub fn compose(&self, o: &Tensor4) -> Tensor4 {
        Tensor4::from_fn(|i, j, r, s| {
            let mut acc = 0.0;
            for k in 0..3 {
                for l in 0..3 {
                    acc += self.get(i, j, k, l) * o.get(k, l, r, s);
                }
            }
            acc
        })
    }

    /// `(L^T)_ijkl = L_klij`
    pub fn transpose(&self) -> Tensor4 {
        Tensor4::from_fn(|i, j, k, l| self.get(k, l, i, j))
    }

    /// `tr L = L_ijij`
    pub fn trace(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                s += self.get(i, j, i, j);
            }
        }
        s
    }

    /// `A . B = tr(A^T B) = A_klij B_klij`
    pub fn inner(&self, o: &Tensor4) -> f64 {
        self.0.iter().zip(o.0.iter()).map(|(a, b)| a * b).sum()
    }

    pub fn norm(&self) -> f64 {
        self.inner(self).sqrt()
    }

    pub fn scale(&self, s: f64) -> Tensor4 {
        Tensor4(self.0.map(|x| x * s))
    }

    pub fn symmetry(&self) -> SymmetryReport {
        let n = self.norm();
        let res = |f: &dyn Fn(usize, usize, usize, usize) -> f64| {
            let d = Tensor4::from_fn(|i, j, k, l| self.get(i, j, k, l) - f(i, j, k, l));
            d.norm()
        };
        let major = res(&|i, j, k, l| self.get(k, l, i, j));
        let left = res(&|i, j, k, l| self.get(j, i, k, l));
        let right = res(&|i, j, k, l| self.get(i, j, l, k));
        // full index symmetry given the other three
        let cp = res(&|i, j, k, l| self.get(i, k, j, l)).max(major).max(left).max(right);
        let tol = 1e-12 * n;
        SymmetryReport {
            has_major: major <= tol,
            has_minor_left: left <= tol,
            has_minor_right: right <= tol,
            has_cauchy_poisson: cp <= tol,
            residuals: [major, left, right, cp],
        }
    }

    pub fn minor_symmetry_defect(&self) -> f64 {
        let r = self.symmetry();
        r.residuals[1].max(r.residuals[2])
    }
}

impl Add for Tensor4 {
    type Output = Tensor4;
    fn add(self, o: Tensor4) -> Tensor4 {
        Tensor4(std::array::from_fn(|n| self.0[n] + o.0[n]))
    }
}

impl Sub for Tensor4 {
    type Output = Tensor4;
    fn sub(self, o: Tensor4) -> Tensor4 {
        Tensor4(std::array::from_fn(|n| self.0[n] - o.0[n]))
    }
}

impl Mul for &Tensor4 {
    type Output = Tensor4;
    fn mul(self, o: &Tensor4) -> Tensor4 {
        self.compose(o)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetryReport {
    pub has_major: bool,
    pub has_minor_left: bool,
    pub has_minor_right: bool,
    pub has_cauchy_poisson: bool,
    /// Major, minor left, minor right, Cauchy-Poisson.
    pub residuals: [f64; 4],
}

impl SymmetryReport {
    /// Independent components left by the detected symmetries.
    pub fn independent_components(&self) -> usize {
        let minor = self.has_minor_left && self.has_minor_right;
        match (self.has_cauchy_poisson, minor, self.has_major) {
            (true, _, _) => 15,
            (false, true, true) => 21,
            (false, true, false) => 36,
            (false, false, true) => 45,
            _ if self.has_minor_left || self.has_minor_right => 54,
            _ => 81,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Projectors {
    pub sph: Tensor4,
    pub dev: Tensor4,
    /// Identity restricted to symmetric tensors.
    pub sym_identity: Tensor4,
    pub transposition: Tensor4,
    pub sym: Tensor4,
    pub skw: Tensor4,
}

pub fn projectors() -> Projectors {
    let i2 = Tensor2::IDENTITY;
    let sph = Tensor4::dyad(&i2, &i2).scale(1.0 / 3.0);
    let sym_identity = Tensor4::from_fn(|i, j, k, l| 0.5 * (delta(i, k) * delta(j, l) + delta(i, l) * delta(j, k)));
    let transposition = Tensor4::from_fn(|i, j, k, l| delta(i, l) * delta(j, k));
    let id = Tensor4::identity();
    Projectors {
        dev: sym_identity.clone() - sph.clone(),
        sph,
        sym: (id.clone() + transposition.clone()).scale(0.5),
        skw: (id - transposition.clone()).scale(0.5),
        sym_identity,
        transposition,
    }
}

/// `2 mu I^s + lambda I (x) I`
pub fn isotropic(lambda: f64, mu: f64) -> Tensor4 {
    let p = projectors();
    p.sym_identity.scale(2.0 * mu) + Tensor4::dyad(&Tensor2::IDENTITY, &Tensor2::IDENTITY).scale(lambda)
}

fn check_orthogonal(u: &Tensor2) -> Result<()> {
    let defect = (u.transpose().compose(u) - Tensor2::IDENTITY).norm();
    if defect > 1e-9 {
        return Err(Error::NotOrthogonal { defect });
    }
    Ok(())
}

/// Orthogonal conjugator `U [x] U`.
pub fn conjugator(u: &Tensor2) -> Result<Tensor4> {
    check_orthogonal(u)?;
    Ok(Tensor4::boxtimes(u, u))
}

/// `L'_pqrs = U_pi U_qj U_rk U_sl L_ijkl`
pub fn rotate4(l: &Tensor4, u: &Tensor2) -> Result<Tensor4> {
    check_orthogonal(u)?;
    // contract one index at a time
    let step = |t: &Tensor4, slot: usize| {
        Tensor4::from_fn(|a, b, c, d| {
            let idx = [a, b, c, d];
            (0..3)
                .map(|m| {
                    let mut j = idx;
                    j[slot] = m;
                    u.0[idx[slot]][m] * t.get(j[0], j[1], j[2], j[3])
                })
                .sum()
        })
    };
    let mut t = l.clone();
    for slot in 0..4 {
        t = step(&t, slot);
    }
    Ok(t)
}

/// Kelvin ordering of the symmetric index pairs.
pub const KELVIN_PAIRS: [(usize, usize); 6] = [(0, 0), (1, 1), (2, 2), (1, 2), (2, 0), (0, 1)];

fn weight(a: usize) -> f64 {
    if a < 3 {
        1.0
    } else {
        std::f64::consts::SQRT_2
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KelvinMatrix(pub [[f64; 6]; 6]);

impl KelvinMatrix {
    pub fn identity() -> Self {
        KelvinMatrix(std::array::from_fn(|a| std::array::from_fn(|b| delta(a, b))))
    }

    pub fn transpose(&self) -> Self {
        KelvinMatrix(std::array::from_fn(|a| std::array::from_fn(|b| self.0[b][a])))
    }

    pub fn mul(&self, o: &KelvinMatrix) -> Self {
        KelvinMatrix(std::array::from_fn(|a| {
            std::array::from_fn(|b| (0..6).map(|c| self.0[a][c] * o.0[c][b]).sum())
        }))
    }

    pub fn apply(&self, v: &[f64; 6]) -> [f64; 6] {
        std::array::from_fn(|a| (0..6).map(|b| self.0[a][b] * v[b]).sum())
    }

    pub fn max_abs_diff(&self, o: &KelvinMatrix) -> f64 {
        let mut m: f64 = 0.0;
        for a in 0..6 {
            for b in 0..6 {
                m = m.max((self.0[a][b] - o.0[a][b]).abs());
            }
        }
        m
    }
}

/// Kelvin 6-vector of a symmetric tensor (off-diagonal entries carry sqrt 2).
pub fn kelvin_vector(a: &Tensor2) -> [f64; 6] {
    std::array::from_fn(|n| {
        let (i, j) = KELVIN_PAIRS[n];
        weight(n) * 0.5 * (a.0[i][j] + a.0[j][i])
    })
}

pub fn from_kelvin_vector(v: &[f64; 6]) -> Tensor2 {
    let mut m = Tensor2::ZERO;
    for (n, &(i, j)) in KELVIN_PAIRS.iter().enumerate() {
        m.0[i][j] = v[n] / weight(n);
        m.0[j][i] = m.0[i][j];
    }
    m
}

pub fn to_kelvin(l: &Tensor4) -> Result<KelvinMatrix> {
    let defect = l.minor_symmetry_defect();
    if defect > 1e-10 * l.norm() {
        return Err(Error::MissingMinorSymmetry { defect });
    }
    Ok(KelvinMatrix(std::array::from_fn(|a| {
        std::array::from_fn(|b| {
            let (i, j) = KELVIN_PAIRS[a];
            let (k, m) = KELVIN_PAIRS[b];
            weight(a) * weight(b) * l.get(i, j, k, m)
        })
    })))
}

pub fn from_kelvin(k: &KelvinMatrix) -> Tensor4 {
    let pos = |i: usize, j: usize| KELVIN_PAIRS.iter().position(|&(a, b)| (a, b) == (i, j) || (b, a) == (i, j)).unwrap_or(0);
    Tensor4::from_fn(|i, j, r, s| {
        let (a, b) = (pos(i, j), pos(r, s));
        k.0[a][b] / (weight(a) * weight(b))
    })
}

/// The 6x6 rotation matrix `[U]` acting on Kelvin vectors.
pub fn kelvin_rotation(u: &Tensor2) -> Result<KelvinMatrix> {
    check_orthogonal(u)?;
    let m = &u.0;
    let s2 = std::f64::consts::SQRT_2;
    let mut k = [[0.0; 6]; 6];
    for a in 0..6 {
        let (i, j) = KELVIN_PAIRS[a];
        for b in 0..6 {
            let (p, q) = KELVIN_PAIRS[b];
            k[a][b] = match (a < 3, b < 3) {
                (true, true) => m[i][p] * m[i][p],
                (true, false) => s2 * m[i][p] * m[i][q],
                (false, true) => s2 * m[i][p] * m[j][p],
                (false, false) => m[i][p] * m[j][q] + m[i][q] * m[j][p],
            };
        }
    }
    Ok(KelvinMatrix(k))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projector_products() {
        let p = projectors();
        assert!((p.sph.inner(&p.sph) - 1.0).abs() < 1e-15);
        assert!((p.dev.inner(&p.dev) - 5.0).abs() < 1e-14);
        assert!(p.sph.inner(&p.dev).abs() < 1e-15);
        assert_eq!(Tensor4::identity().trace(), 9.0);
    }

    #[test]
    fn sym_identity_is_kelvin_identity() {
        let k = to_kelvin(&projectors().sym_identity).unwrap();
        assert!(k.max_abs_diff(&KelvinMatrix::identity()) < 1e-15);
    }

    #[test]
    fn boxtimes_action() {
        let a = Tensor2([[1.0, 2.0, 0.0], [0.5, -1.0, 3.0], [2.0, 0.0, 1.0]]);
        let b = Tensor2([[0.0, 1.0, 1.0], [2.0, 1.0, -1.0], [1.0, 3.0, 0.5]]);
        let l = Tensor2([[1.0, -1.0, 2.0], [0.0, 4.0, 1.0], [3.0, 1.0, 0.0]]);
        let lhs = Tensor4::boxtimes(&a, &b).apply(&l);
        let rhs = a.compose(&l).compose(&b.transpose());
        assert!((lhs - rhs).norm() < 1e-13);
    }

    #[test]
    fn missing_minor_symmetry() {
        assert!(matches!(to_kelvin(&Tensor4::identity()), Err(Error::MissingMinorSymmetry { .. })));
    }

    #[test]
    fn component_counts() {
        assert_eq!(isotropic(1.0, 2.0).symmetry().independent_components(), 21);
        let ii = Tensor4::dyad(&Tensor2::IDENTITY, &Tensor2::IDENTITY);
        assert_eq!(ii.symmetry().independent_components(), 21);
        let full = Tensor4::from_fn(|i, j, k, l| {
            delta(i, j) * delta(k, l) + delta(i, k) * delta(j, l) + delta(i, l) * delta(j, k)
        });
        assert_eq!(full.symmetry().independent_components(), 15);
        assert_eq!(Tensor4::identity().symmetry().independent_components(), 45);
    }
}
