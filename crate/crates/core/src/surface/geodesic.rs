use super::{inv2, quad_form, vec3, Surface};
use crate::error::{Error, Result};
use crate::tensor2::Vec3;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeodesicState {
    pub u: f64,
    pub v: f64,
    pub du: f64,
    pub dv: f64,
    /// Arc length travelled so far.
    pub s: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeodesicRhs {
    /// `u''^k = -Gamma^k_ij u'^i u'^j`.
    #[default]
    Christoffel,
    /// Euler-Lagrange equations of `1/2 g_ij u'^i u'^j`.
    EulerLagrange,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeodesicOptions {
    pub step: f64,
    pub rhs: GeodesicRhs,
    /// Halve the step while one step changes the squared g-speed by more
    /// than this.
    pub drift_tol: Option<f64>,
}

impl GeodesicOptions {
    pub fn fixed(step: f64) -> Self {
        GeodesicOptions {
            step,
            rhs: GeodesicRhs::Christoffel,
            drift_tol: None,
        }
    }
}

/// Second parameter derivatives along a geodesic through `(u, v)` with
/// velocity `(du, dv)`.
fn acceleration(s: &Surface, rhs: GeodesicRhs, u: f64, v: f64, w: [f64; 2]) -> Result<[f64; 2]> {
    let l = s.local(u, v)?;
    let basis = [vec3(&l.fu), vec3(&l.fv)];
    let second = [
        [vec3(&l.fu.map(|x| x.partial(0))), vec3(&l.fu.map(|x| x.partial(1)))],
        [vec3(&l.fv.map(|x| x.partial(0))), vec3(&l.fv.map(|x| x.partial(1)))],
    ];
    let g = std::array::from_fn(|i| std::array::from_fn(|j| basis[i].dot(&basis[j])));
    let gi = inv2(&g);
    match rhs {
        GeodesicRhs::Christoffel => {
            // f_ij . f_k contracted with the velocity
            let mut first = [0.0; 2];
            for (k, fk) in basis.iter().enumerate() {
                for i in 0..2 {
                    for j in 0..2 {
                        first[k] += second[i][j].dot(fk) * w[i] * w[j];
                    }
                }
            }
            Ok([-(gi[0][0] * first[0] + gi[0][1] * first[1]), -(gi[1][0] * first[0] + gi[1][1] * first[1])])
        }
        GeodesicRhs::EulerLagrange => {
            // dg[i][j][k] = g_ij,k
            let dg = |i: usize, j: usize, k: usize| second[i][k].dot(&basis[j]) + basis[i].dot(&second[j][k]);
            let mut f = [0.0; 2];
            for (k, fk) in f.iter_mut().enumerate() {
                for i in 0..2 {
                    for j in 0..2 {
                        *fk += 0.5 * dg(i, j, k) * w[i] * w[j] - dg(k, j, i) * w[i] * w[j];
                    }
                }
            }
            Ok([gi[0][0] * f[0] + gi[0][1] * f[1], gi[1][0] * f[0] + gi[1][1] * f[1]])
        }
    }
}

fn rk4(s: &Surface, rhs: GeodesicRhs, y: [f64; 4], h: f64) -> Result<[f64; 4]> {
    let f = |y: [f64; 4]| -> Result<[f64; 4]> {
        let a = acceleration(s, rhs, y[0], y[1], [y[2], y[3]])?;
        Ok([y[2], y[3], a[0], a[1]])
    };
    let add = |y: [f64; 4], k: [f64; 4], c: f64| -> [f64; 4] { std::array::from_fn(|i| y[i] + c * k[i]) };
    let k1 = f(y)?;
    let k2 = f(add(y, k1, 0.5 * h))?;
    let k3 = f(add(y, k2, 0.5 * h))?;
    let k4 = f(add(y, k3, h))?;
    Ok(std::array::from_fn(|i| y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])))
}

fn speed_sq(s: &Surface, y: [f64; 4]) -> Result<f64> {
    let g = s.metric(y[0], y[1])?;
    Ok(quad_form(&g, [y[2], y[3]], [y[2], y[3]]))
}

fn advance(s: &Surface, opts: &GeodesicOptions, y: [f64; 4], h: f64, depth: usize) -> Result<[f64; 4]> {
    let next = rk4(s, opts.rhs, y, h)?;
    if let Some(tol) = opts.drift_tol {
        if depth < 12 && (speed_sq(s, next)? - speed_sq(s, y)?).abs() > tol {
            let mid = advance(s, opts, y, 0.5 * h, depth + 1)?;
            return advance(s, opts, mid, 0.5 * h, depth + 1);
        }
    }
    Ok(next)
}

pub fn geodesic_integrate(s: &Surface, start: GeodesicState, s_max: f64, step: f64) -> Result<Vec<GeodesicState>> {
    geodesic_integrate_with(s, start, s_max, &GeodesicOptions::fixed(step))
}

/// RK4 from `start` until the arc length reaches `s_max`, one state per step.
pub fn geodesic_integrate_with(s: &Surface, start: GeodesicState, s_max: f64, opts: &GeodesicOptions) -> Result<Vec<GeodesicState>> {
    if !(opts.step > 0.0 && opts.step.is_finite()) {
        return Err(Error::invalid("geodesic step must be positive"));
    }
    if !s.contains(start.u, start.v) {
        return Err(Error::invalid("geodesic must start inside the parameter domain"));
    }
    let mut out = vec![start];
    let mut y = [start.u, start.v, start.du, start.dv];
    let mut arc = start.s;
    while arc < s_max - 1e-12 * opts.step {
        let h = opts.step.min(s_max - arc);
        y = advance(s, opts, y, h, 0)?;
        arc += h;
        let state = GeodesicState {
            u: y[0],
            v: y[1],
            du: y[2],
            dv: y[3],
            s: arc,
        };
        if !s.contains(y[0], y[1]) {
            return Err(Error::LeftDomain {
                s: arc,
                u: y[0],
                v: y[1],
                du: y[2],
                dv: y[3],
            });
        }
        out.push(state);
    }
    Ok(out)
}

/// `u''^k + Gamma^k_ij u'^i u'^j` for a prescribed motion.
pub fn geodesic_residual(s: &Surface, state: &GeodesicState, ddu: f64, ddv: f64) -> Result<[f64; 2]> {
    let a = acceleration(s, GeodesicRhs::Christoffel, state.u, state.v, [state.du, state.dv])?;
    Ok([ddu - a[0], ddv - a[1]])
}

/// `tau' . (N x tau)` at interior states, with `tau'` from central
/// differences along the trajectory.
pub fn geodesic_curvature_along(s: &Surface, traj: &[GeodesicState]) -> Result<Vec<f64>> {
    let tangent = |st: &GeodesicState| -> Result<(Vec3, Vec3)> {
        let j = s.jet_at(st.u, st.v)?;
        let t = j.ambient([st.du, st.dv]);
        Ok((t * (1.0 / t.norm()), j.normal))
    };
    let frames = traj.iter().map(tangent).collect::<Result<Vec<_>>>()?;
    Ok((1..traj.len().saturating_sub(1))
        .map(|i| {
            let ds = traj[i + 1].s - traj[i - 1].s;
            let dt = (frames[i + 1].0 - frames[i - 1].0) * (1.0 / ds);
            let (t, n) = frames[i];
            dt.dot(&n.cross(&t))
        })
        .collect())
}
