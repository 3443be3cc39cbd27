use super::{Tensor2, Vec3};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisAngle {
    pub axis: Vec3,
    /// In `[0, pi]`.
    pub angle: f64,
}

fn check_unit(w: &Vec3) -> Result<()> {
    let norm = w.norm();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::NotUnit { norm });
    }
    Ok(())
}

/// `R = I + sin(phi) W + (1 - cos(phi)) W^2` for the axial tensor `W` of `w`.
pub fn rotation_from_axis_angle(aa: &AxisAngle) -> Result<Tensor2> {
    check_unit(&aa.axis)?;
    let w = Tensor2::axial(&aa.axis);
    let (s, c) = aa.angle.sin_cos();
    Ok(Tensor2::IDENTITY + w.scale(s) + w.compose(&w).scale(1.0 - c))
}

pub(crate) fn rotation_defect(r: &Tensor2) -> (f64, f64) {
    let defect = (r.compose(&r.transpose()) - Tensor2::IDENTITY).norm();
    (defect, r.det())
}

pub fn rotation_to_axis_angle(r: &Tensor2) -> Result<AxisAngle> {
    let (defect, det) = rotation_defect(r);
    if defect > 1e-9 || (det - 1.0).abs() > 1e-9 {
        return Err(Error::NotARotation { defect, det });
    }
    let cos = ((r.trace() - 1.0) / 2.0).clamp(-1.0, 1.0);
    let angle = cos.acos();
    if angle < 1e-8 {
        return Err(Error::AxisUndefined { angle });
    }
    // skew part = sin(phi) W
    let sw = {
        let k = r.skw();
        Vec3([k.0[2][1], k.0[0][2], k.0[1][0]])
    };
    let axis = if angle < std::f64::consts::FRAC_PI_2 {
        sw * (1.0 / angle.sin())
    } else {
        // sym part = cos(phi) I + (1 - cos(phi)) w (x) w; take the dominant column
        let m = (r.sym() - Tensor2::IDENTITY.scale(cos)).scale(1.0 / (1.0 - cos));
        let k = (0..3).max_by(|&a, &b| m.0[a][a].total_cmp(&m.0[b][b])).unwrap_or(0);
        let w = m.col(k).normalized().unwrap_or(Vec3::e(2));
        if w.dot(&sw) < 0.0 {
            -w
        } else {
            w
        }
    };
    let axis = axis.normalized().unwrap_or(Vec3::e(2));
    Ok(AxisAngle { axis, angle })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AngleKind {
    /// Precession, nutation, proper rotation: `R_z(psi) R_x(theta) R_z(phi)`.
    Euler,
    /// `R_x(alpha) R_y(beta) R_z(gamma)` with the `beta` factor as written
    /// `[[cb, 0, -sb], [0, 1, 0], [sb, 0, cb]]`.
    Coordinate,
    /// Axis through spherical angles `(theta, psi)` and amplitude `phi`;
    /// angles are given as `[theta, psi, phi]`.
    Physical,
}

fn about_x(a: f64) -> Tensor2 {
    let (s, c) = a.sin_cos();
    Tensor2([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])
}

fn about_z(a: f64) -> Tensor2 {
    let (s, c) = a.sin_cos();
    Tensor2([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])
}

fn beta_factor(a: f64) -> Tensor2 {
    let (s, c) = a.sin_cos();
    Tensor2([[c, 0.0, -s], [0.0, 1.0, 0.0], [s, 0.0, c]])
}

pub fn rotation_composed(kind: AngleKind, angles: [f64; 3]) -> Tensor2 {
    let [a, b, c] = angles;
    match kind {
        AngleKind::Euler => about_z(a).compose(&about_x(b)).compose(&about_z(c)),
        AngleKind::Coordinate => about_x(a).compose(&beta_factor(b)).compose(&about_z(c)),
        AngleKind::Physical => {
            let (st, ct) = a.sin_cos();
            let axis = Vec3::new(st * b.cos(), st * b.sin(), ct);
            let w = Tensor2::axial(&axis);
            let (s, co) = c.sin_cos();
            Tensor2::IDENTITY + w.scale(s) + w.compose(&w).scale(1.0 - co)
        }
    }
}

/// Components of `u` in the basis rotated by `R`: `u' = R^T u`.
pub fn change_basis_vector(u: &Vec3, r: &Tensor2) -> Vec3 {
    r.transpose().apply(u)
}

/// `L' = R^T L R`.
pub fn change_basis_tensor(l: &Tensor2, r: &Tensor2) -> Tensor2 {
    r.transpose().compose(l).compose(r)
}

/// Mirror symmetry about the plane with unit normal `n`.
pub fn reflexion(n: &Vec3) -> Result<Tensor2> {
    check_unit(n)?;
    Ok(Tensor2::IDENTITY - Tensor2::dyad(n, n).scale(2.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn about_e3_matches_planar_rotation() {
        let phi = 0.7;
        let r = rotation_from_axis_angle(&AxisAngle {
            axis: Vec3::e(2),
            angle: phi,
        })
        .unwrap();
        let (s, c) = phi.sin_cos();
        let expected = Tensor2([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]]);
        assert!((r - expected).norm() < 1e-15);
    }

    #[test]
    fn amplitude_of_quarter_turn() {
        let r = about_z(FRAC_PI_2);
        let aa = rotation_to_axis_angle(&r).unwrap();
        assert!((aa.angle - FRAC_PI_2).abs() < 1e-15);
        assert!((aa.axis - Vec3::e(2)).norm() < 1e-15);
    }

    #[test]
    fn half_turn_axis() {
        let w = Vec3::new(1.0, -2.0, 0.5).normalized().unwrap();
        let r = rotation_from_axis_angle(&AxisAngle { axis: w, angle: PI }).unwrap();
        let aa = rotation_to_axis_angle(&r).unwrap();
        assert!((aa.angle - PI).abs() < 1e-7);
        assert!((aa.axis - w).norm() < 1e-7 || (aa.axis + w).norm() < 1e-7);
    }

    #[test]
    fn identity_has_no_axis() {
        assert!(matches!(
            rotation_to_axis_angle(&Tensor2::IDENTITY),
            Err(Error::AxisUndefined { .. })
        ));
    }

    #[test]
    fn euler_closed_form() {
        let (psi, theta, phi): (f64, f64, f64) = (0.3, 1.1, -0.8);
        let (sp, cp) = psi.sin_cos();
        let (st, ct) = theta.sin_cos();
        let (sf, cf) = phi.sin_cos();
        let expected = Tensor2([
            [cp * cf - sp * sf * ct, -cp * sf - sp * cf * ct, sp * st],
            [sp * cf + cp * sf * ct, -sp * sf + cp * cf * ct, -cp * st],
            [sf * st, cf * st, ct],
        ]);
        let r = rotation_composed(AngleKind::Euler, [psi, theta, phi]);
        assert!((r - expected).norm() < 1e-15);
    }

    #[test]
    fn coordinate_closed_form() {
        let (a, b, g) = (0.4, -0.9, 2.0);
        let (sa, ca) = f64::sin_cos(a);
        let (sb, cb) = f64::sin_cos(b);
        let (sg, cg) = f64::sin_cos(g);
        let expected = Tensor2([
            [cb * cg, -cb * sg, -sb],
            [ca * sg - sa * sb * cg, ca * cg + sa * sb * sg, -sa * cb],
            [sa * sg + ca * sb * cg, sa * cg - ca * sb * sg, ca * cb],
        ]);
        let r = rotation_composed(AngleKind::Coordinate, [a, b, g]);
        assert!((r - expected).norm() < 1e-15);
    }

    #[test]
    fn reflexion_about_e3() {
        assert_eq!(reflexion(&Vec3::e(2)).unwrap(), Tensor2::diag(1.0, 1.0, -1.0));
        assert!(matches!(reflexion(&Vec3::new(1.0, 1.0, 0.0)), Err(Error::NotUnit { .. })));
    }
}
