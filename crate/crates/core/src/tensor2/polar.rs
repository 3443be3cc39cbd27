use super::{eigen_sym, Tensor2};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolarDecomp {
    pub r: Tensor2,
    pub u: Tensor2,
    pub v: Tensor2,
}

/// Unique symmetric positive definite square root.
pub fn sqrt_spd(l: &Tensor2) -> Result<Tensor2> {
    let d = eigen_sym(l)?;
    let smallest = d.values[2];
    if smallest <= 1e-14 * l.norm() || smallest <= 0.0 {
        return Err(Error::NotSpd { eigenvalue: smallest });
    }
    Ok(d.map(f64::sqrt).sym())
}

/// `F = R U = V R` with `R` a rotation and `U`, `V` symmetric positive definite.
pub fn polar(f: &Tensor2) -> Result<PolarDecomp> {
    let det = f.det();
    let n = f.norm();
    if det <= 1e-12 * n * n * n || det <= 0.0 {
        return Err(Error::NonPositiveDeterminant { det });
    }
    let c = f.transpose().compose(f);
    let d = eigen_sym(&c)?;
    let u = d.map(f64::sqrt).sym();
    let u_inv = d.map(|x| 1.0 / x.sqrt()).sym();
    let mut r = f.compose(&u_inv);
    // one Newton step on the orthogonal factor mops up rounding in U^-1
    if let Ok(inv) = r.inverse() {
        r = (r + inv.transpose()).scale(0.5);
    }
    let v = r.compose(&u).compose(&r.transpose()).sym();
    Ok(PolarDecomp { r, u, v })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_of_diagonal() {
        let s = sqrt_spd(&Tensor2::diag(4.0, 9.0, 16.0)).unwrap();
        assert!((s - Tensor2::diag(2.0, 3.0, 4.0)).norm() < 1e-14);
    }

    #[test]
    fn sqrt_rejects_indefinite() {
        assert!(matches!(
            sqrt_spd(&Tensor2::diag(1.0, -1.0, 2.0)),
            Err(Error::NotSpd { eigenvalue }) if eigenvalue == -1.0
        ));
    }

    #[test]
    fn stretch_only() {
        let p = polar(&Tensor2::diag(2.0, 3.0, 4.0)).unwrap();
        assert!((p.r - Tensor2::IDENTITY).norm() < 1e-14);
        assert!((p.u - Tensor2::diag(2.0, 3.0, 4.0)).norm() < 1e-14);
    }

    #[test]
    fn reflection_rejected() {
        assert!(polar(&Tensor2::diag(1.0, 1.0, -1.0)).is_err());
    }
}
