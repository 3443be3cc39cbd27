use super::{Tensor2, Vec3};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralDecomp {
    /// Descending.
    pub values: [f64; 3],
    /// Orthonormal and right-handed.
    pub vectors: [Vec3; 3],
}

impl SpectralDecomp {
    /// `sum f(lambda_i) u_i (x) u_i`
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Tensor2 {
        (0..3).fold(Tensor2::ZERO, |acc, i| {
            acc + Tensor2::dyad(&self.vectors[i], &self.vectors[i]).scale(f(self.values[i]))
        })
    }

    pub fn reconstruct(&self) -> Tensor2 {
        self.map(|x| x)
    }
}

/// Cyclic Jacobi eigen-decomposition of a symmetric tensor.
pub fn eigen_sym(l: &Tensor2) -> Result<SpectralDecomp> {
    let scale = l.norm();
    let defect = l.symmetry_defect();
    if defect > 1e-10 * scale {
        return Err(Error::NotSymmetric { defect });
    }
    let mut a = l.sym().0;
    let mut v = Tensor2::IDENTITY.0;
    let off = |a: &[[f64; 3]; 3]| (2.0 * (a[0][1].powi(2) + a[0][2].powi(2) + a[1][2].powi(2))).sqrt();
    for _sweep in 0..64 {
        if off(&a) <= 1e-14 * scale || scale == 0.0 {
            break;
        }
        for (p, q) in [(0, 1), (0, 2), (1, 2)] {
            if a[p][q] == 0.0 {
                continue;
            }
            let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
            let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
            let t = if theta == 0.0 { 1.0 } else { t };
            let c = 1.0 / (t * t + 1.0).sqrt();
            let s = t * c;
            // A <- J^T A J with J the (p, q) plane rotation
            for k in 0..3 {
                let (akp, akq) = (a[k][p], a[k][q]);
                a[k][p] = c * akp - s * akq;
                a[k][q] = s * akp + c * akq;
            }
            for k in 0..3 {
                let (apk, aqk) = (a[p][k], a[q][k]);
                a[p][k] = c * apk - s * aqk;
                a[q][k] = s * apk + c * aqk;
            }
            for row in v.iter_mut() {
                let (vp, vq) = (row[p], row[q]);
                row[p] = c * vp - s * vq;
                row[q] = s * vp + c * vq;
            }
        }
    }
    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| a[j][j].total_cmp(&a[i][i]));
    let vt = Tensor2(v);
    let values = order.map(|i| a[i][i]);
    let mut vectors = order.map(|i| vt.col(i));
    if vectors[0].cross(&vectors[1]).dot(&vectors[2]) < 0.0 {
        vectors[2] = -vectors[2];
    }
    Ok(SpectralDecomp { values, vectors })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_sorted() {
        let d = eigen_sym(&Tensor2::diag(3.0, 1.0, 2.0)).unwrap();
        assert_eq!(d.values, [3.0, 2.0, 1.0]);
    }

    #[test]
    fn general_symmetric() {
        let l = Tensor2([[4.0, 1.0, -2.0], [1.0, 2.0, 0.5], [-2.0, 0.5, -3.0]]);
        let d = eigen_sym(&l).unwrap();
        for i in 0..3 {
            let r = l.apply(&d.vectors[i]) - d.vectors[i] * d.values[i];
            assert!(r.norm() < 1e-12 * l.norm());
        }
        assert!((d.reconstruct() - l).norm() < 1e-13);
        let [i1, i2, i3] = l.invariants();
        let [a, b, c] = d.values;
        assert!((i1 - (a + b + c)).abs() < 1e-12);
        assert!((i2 - (a * b + b * c + c * a)).abs() < 1e-12);
        assert!((i3 - a * b * c).abs() < 1e-11);
    }

    #[test]
    fn rejects_nonsymmetric() {
        let l = Tensor2([[1.0, 2.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);
        assert!(matches!(eigen_sym(&l), Err(Error::NotSymmetric { .. })));
    }
}
