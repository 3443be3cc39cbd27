use crate::error::{Error, Result};
use crate::expr::ExprMap;
use crate::tensor2::{polar, Tensor2, Vec3};

/// A scalar function of arc length.
#[derive(Debug, Clone)]
pub enum ProfileFn {
    Expr(ExprMap),
    /// Piecewise-linear through `(s, value)` samples with increasing `s`.
    Table { s: Vec<f64>, values: Vec<f64> },
}

impl ProfileFn {
    pub fn eval(&self, s: f64) -> Result<f64> {
        match self {
            ProfileFn::Expr(m) => Ok(m.eval(&[s])?[0]),
            ProfileFn::Table { s: xs, values } => {
                if xs.is_empty() || xs.len() != values.len() {
                    return Err(Error::invalid("profile table needs matching non-empty columns"));
                }
                let k = xs.partition_point(|x| *x <= s);
                if k == 0 {
                    return Ok(values[0]);
                }
                if k == xs.len() {
                    return Ok(values[xs.len() - 1]);
                }
                let w = (s - xs[k - 1]) / (xs[k] - xs[k - 1]);
                Ok(values[k - 1] * (1.0 - w) + values[k] * w)
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct CurvatureProfile {
    pub curvature: ProfileFn,
    pub torsion: ProfileFn,
    pub s_range: (f64, f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampledCurve {
    pub s: Vec<f64>,
    pub points: Vec<Vec3>,
    /// Rows tau, nu, beta.
    pub frames: Vec<[Vec3; 3]>,
}

impl SampledCurve {
    /// Worst `|F F^T - I|` over all frames.
    pub fn frame_drift(&self) -> f64 {
        self.frames
            .iter()
            .map(|f| {
                let m = Tensor2::from_rows(f[0], f[1], f[2]);
                (m.compose(&m.transpose()) - Tensor2::IDENTITY).norm()
            })
            .fold(0.0, f64::max)
    }
}

type State = [f64; 12];

fn rhs(y: &State, c: f64, th: f64) -> State {
    let v = |k: usize| Vec3([y[3 * k], y[3 * k + 1], y[3 * k + 2]]);
    let (tau, nu, beta) = (v(1), v(2), v(3));
    let parts = [tau, nu * c, tau * (-c) - beta * th, nu * th];
    let mut out = [0.0; 12];
    for (k, p) in parts.iter().enumerate() {
        out[3 * k..3 * k + 3].copy_from_slice(&p.0);
    }
    out
}

fn axpy(y: &State, h: f64, k: &State) -> State {
    std::array::from_fn(|i| y[i] + h * k[i])
}

/// Integrate the Cartan system `e' = C e` together with `p' = tau`.
///
/// Fixed-step RK4; after every step the frame is replaced by the rotation
/// factor of its polar decomposition.
pub fn bonnet_reconstruct(profile: &CurvatureProfile, p0: Vec3, frame0: [Vec3; 3], step: f64) -> Result<SampledCurve> {
    let f0 = Tensor2::from_rows(frame0[0], frame0[1], frame0[2]);
    let defect = (f0.compose(&f0.transpose()) - Tensor2::IDENTITY).norm();
    if defect > 1e-10 || f0.det() < 0.0 {
        return Err(Error::NonOrthonormalSeed { defect: defect.max(1.0 - f0.det()) });
    }
    let (s0, s1) = profile.s_range;
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::invalid("step must be positive"));
    }
    if !(s0 < s1) {
        return Err(Error::invalid("arc-length range must be increasing"));
    }
    let n = ((s1 - s0) / step).round().max(1.0) as usize;
    let h = (s1 - s0) / n as f64;
    let coeffs = |s: f64| -> Result<(f64, f64)> {
        let c = profile.curvature.eval(s)?;
        if !(c > 0.0) {
            return Err(Error::UndefinedNormal { t: s });
        }
        Ok((c, profile.torsion.eval(s)?))
    };

    let mut y: State = [0.0; 12];
    y[..3].copy_from_slice(&p0.0);
    for (k, e) in frame0.iter().enumerate() {
        y[3 + 3 * k..6 + 3 * k].copy_from_slice(&e.0);
    }
    let mut out = SampledCurve {
        s: Vec::with_capacity(n + 1),
        points: Vec::with_capacity(n + 1),
        frames: Vec::with_capacity(n + 1),
    };
    let push = |out: &mut SampledCurve, s: f64, y: &State| {
        let v = |k: usize| Vec3([y[3 * k], y[3 * k + 1], y[3 * k + 2]]);
        out.s.push(s);
        out.points.push(v(0));
        out.frames.push([v(1), v(2), v(3)]);
    };
    push(&mut out, s0, &y);
    for i in 0..n {
        let s = s0 + i as f64 * h;
        let (ca, ta) = coeffs(s)?;
        let (cm, tm) = coeffs(s + 0.5 * h)?;
        let (cb, tb) = coeffs(s + h)?;
        let k1 = rhs(&y, ca, ta);
        let k2 = rhs(&axpy(&y, 0.5 * h, &k1), cm, tm);
        let k3 = rhs(&axpy(&y, 0.5 * h, &k2), cm, tm);
        let k4 = rhs(&axpy(&y, h, &k3), cb, tb);
        for j in 0..12 {
            y[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
        let f = Tensor2([
            [y[3], y[4], y[5]],
            [y[6], y[7], y[8]],
            [y[9], y[10], y[11]],
        ]);
        let r = polar(&f)?.r;
        y[3..12].copy_from_slice(&[r.0[0], r.0[1], r.0[2]].concat());
        push(&mut out, s0 + (i + 1) as f64 * h, &y);
    }
    Ok(out)
}

/// Curvature and torsion at sample `i` from fourth-order central
/// differences with spacing `stride * h`.
pub fn sampled_curvature_torsion(points: &[Vec3], h: f64, i: usize, stride: usize) -> Option<(f64, f64)> {
    let st = stride.max(1);
    if i < 3 * st || i + 3 * st >= points.len() {
        return None;
    }
    let p = |k: i64| points[(i as i64 + k * st as i64) as usize];
    let hh = h * st as f64;
    let d1 = (p(-2) - p(2) + (p(1) - p(-1)) * 8.0) * (1.0 / (12.0 * hh));
    let d2 = ((p(2) + p(-2)) * -1.0 + (p(1) + p(-1)) * 16.0 - p(0) * 30.0) * (1.0 / (12.0 * hh * hh));
    let d3 = ((p(3) - p(-3)) * -1.0 + (p(2) - p(-2)) * 8.0 - (p(1) - p(-1)) * 13.0) * (1.0 / (8.0 * hh * hh * hh));
    let cr = d1.cross(&d2);
    let sp = d1.norm();
    let c = cr.norm() / (sp * sp * sp);
    let theta = -cr.dot(&d3) / cr.dot(&cr);
    Some((c, theta))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn constant(v: f64) -> ProfileFn {
        ProfileFn::Table {
            s: vec![0.0],
            values: vec![v],
        }
    }

    #[test]
    fn circle_from_constant_curvature() {
        let a = 2.0;
        let prof = CurvatureProfile {
            curvature: constant(1.0 / a),
            torsion: constant(0.0),
            s_range: (0.0, 2.0 * std::f64::consts::PI * a),
        };
        let frame = [Vec3::e(0), Vec3::e(1), Vec3::e(2)];
        let out = bonnet_reconstruct(&prof, Vec3::ZERO, frame, 1e-3).unwrap();
        let center = Vec3::e(1) * a;
        let worst = out
            .points
            .iter()
            .zip(&out.s)
            .map(|(p, s)| {
                let exact = center - Vec3::e(1) * (a * (s / a).cos()) + Vec3::e(0) * (a * (s / a).sin());
                (*p - exact).norm()
            })
            .fold(0.0, f64::max);
        assert!(worst < 1e-6, "{worst}");
    }

    #[test]
    fn zero_curvature_rejected() {
        let prof = CurvatureProfile {
            curvature: constant(0.0),
            torsion: constant(0.0),
            s_range: (0.0, 1.0),
        };
        let frame = [Vec3::e(0), Vec3::e(1), Vec3::e(2)];
        assert!(matches!(
            bonnet_reconstruct(&prof, Vec3::ZERO, frame, 1e-2),
            Err(Error::UndefinedNormal { .. })
        ));
    }

    #[test]
    fn skewed_seed_rejected() {
        let prof = CurvatureProfile {
            curvature: constant(1.0),
            torsion: constant(0.0),
            s_range: (0.0, 1.0),
        };
        let frame = [Vec3::e(0), Vec3::new(0.1, 1.0, 0.0), Vec3::e(2)];
        assert!(matches!(
            bonnet_reconstruct(&prof, Vec3::ZERO, frame, 1e-2),
            Err(Error::NonOrthonormalSeed { .. })
        ));
    }
}
