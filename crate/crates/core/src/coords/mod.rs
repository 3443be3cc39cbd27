//! Curvilinear coordinates: metric, Christoffel symbols, covariant
//! derivatives, differential operators and integral theorems.

mod field;
mod integral;
pub(crate) mod linalg;
mod ops;

pub use field::{Field, GridField, MetricField};
pub use integral::{integral_theorem_residual, IntegrationDomain, Theorem};
pub use ops::{diff_ops, laplacian_curvilinear, DiffOp, FieldKind, System};

use crate::error::{Error, Result};
use crate::expr::{Derivatives, ExprMap};
use linalg::Mat;
use serde::{Deserialize, Serialize};

/// Cartesian coordinates `x_k` as functions of curvilinear `z^j`.
#[derive(Debug, Clone)]
pub struct CoordMap {
    map: ExprMap,
}

impl CoordMap {
    pub fn new(map: ExprMap) -> Result<Self> {
        let n = map.arity();
        if n == 0 || n > 3 || map.dim() != n {
            return Err(Error::invalid(
                "a coordinate map needs as many components as variables (1 to 3)",
            ));
        }
        Ok(CoordMap { map })
    }

    fn builtin(components: &[&str], vars: &[&str]) -> Self {
        CoordMap {
            map: ExprMap::parse(components, vars, &[]).expect("builtin coordinate map"),
        }
    }

    pub fn cartesian(n: usize) -> Self {
        let names = ["x1", "x2", "x3"];
        let n = n.clamp(1, 3);
        Self::builtin(&names[..n], &names[..n])
    }

    pub fn polar() -> Self {
        Self::builtin(&["r*cos(th)", "r*sin(th)"], &["r", "th"])
    }

    /// `(rho, theta, z)`
    pub fn cylindrical() -> Self {
        Self::builtin(&["rho*cos(th)", "rho*sin(th)", "z"], &["rho", "th", "z"])
    }

    /// `(r, phi, theta)` with `phi` the colatitude and `theta` the azimuth.
    pub fn spherical() -> Self {
        Self::builtin(
            &["r*cos(th)*sin(ph)", "r*sin(th)*sin(ph)", "r*cos(ph)"],
            &["r", "ph", "th"],
        )
    }

    /// Straight but non-orthogonal axes; `alpha` is the angle between the
    /// first two.
    pub fn oblique(alpha: f64) -> Self {
        CoordMap {
            map: ExprMap::parse(&["z1 + z2*cos(al)", "z2*sin(al)", "z3"], &["z1", "z2", "z3"], &[("al", alpha)])
                .expect("builtin coordinate map"),
        }
    }

    pub fn dim(&self) -> usize {
        self.map.arity()
    }

    pub fn map(&self) -> &ExprMap {
        &self.map
    }

    pub fn x(&self, z: &[f64]) -> Result<Vec<f64>> {
        self.map.eval(z)
    }

    pub(crate) fn derivatives(&self, z: &[f64]) -> Result<Derivatives> {
        self.map.derivatives(z)
    }

    /// `J[k][j] = dx_k / dz^j`, checked for invertibility.
    fn jacobian_checked(&self, z: &[f64], d: &Derivatives) -> Result<(Mat, Mat)> {
        let j = d.d1.clone();
        let det = linalg::det(&j);
        if det.abs() <= 1e-10 || !det.is_finite() {
            return Err(Error::DegenerateJacobian { point: z.to_vec(), det });
        }
        let inv = linalg::inverse(&j).ok_or(Error::DegenerateJacobian { point: z.to_vec(), det })?;
        Ok((j, inv))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metric {
    /// `g_ij`
    pub cov: Mat,
    /// `g^ij`
    pub con: Mat,
    /// Natural basis `g_k` (ambient components).
    pub tangent: Mat,
    /// Dual basis `g^k`.
    pub dual: Mat,
    pub det: f64,
}

impl Metric {
    pub fn dim(&self) -> usize {
        self.cov.len()
    }

    /// Squared line element for a coordinate increment.
    pub fn line_element_sq(&self, dz: &[f64]) -> f64 {
        let gdz = linalg::matvec(&self.cov, dz);
        gdz.iter().zip(dz).map(|(a, b)| a * b).sum()
    }
}

pub fn metric_at(map: &CoordMap, z: &[f64]) -> Result<Metric> {
    let d = map.derivatives(z)?;
    metric_from(map, z, &d)
}

fn metric_from(map: &CoordMap, z: &[f64], d: &Derivatives) -> Result<Metric> {
    let (j, jinv) = map.jacobian_checked(z, d)?;
    let jt = linalg::transpose(&j);
    let cov = linalg::matmul(&jt, &j);
    let con = linalg::inverse(&cov).ok_or(Error::DegenerateJacobian {
        point: z.to_vec(),
        det: 0.0,
    })?;
    Ok(Metric {
        det: linalg::det(&cov),
        cov,
        con,
        tangent: jt,
        dual: jinv,
    })
}

/// `dg[i][j][k] = d g_ij / dz^k`
pub fn metric_derivatives(map: &CoordMap, z: &[f64]) -> Result<Vec<Vec<Vec<f64>>>> {
    let d = map.derivatives(z)?;
    Ok(metric_derivatives_from(&d))
}

fn metric_derivatives_from(d: &Derivatives) -> Vec<Vec<Vec<f64>>> {
    let n = d.d1.first().map_or(0, |r| r.len());
    let mut dg = vec![vec![vec![0.0; n]; n]; n];
    for (m, row) in d.d1.iter().enumerate() {
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    dg[i][j][k] += d.d2[m][i][k] * row[j] + row[i] * d.d2[m][j][k];
                }
            }
        }
    }
    dg
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChristoffelMethod {
    /// Dual basis against second derivatives of the map.
    SecondDerivative,
    /// Half-sum of metric derivatives raised by the inverse metric.
    MetricDerivative,
}

/// `Gamma^h_kl`, symmetric in the lower pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Christoffel {
    pub n: usize,
    pub data: Vec<f64>,
}

impl Christoffel {
    pub fn zeros(n: usize) -> Self {
        Christoffel {
            n,
            data: vec![0.0; n * n * n],
        }
    }

    pub fn get(&self, h: usize, k: usize, l: usize) -> f64 {
        self.data[(h * self.n + k) * self.n + l]
    }

    pub fn set(&mut self, h: usize, k: usize, l: usize, v: f64) {
        let n = self.n;
        self.data[(h * n + k) * n + l] = v;
    }

    pub fn max_abs_diff(&self, o: &Christoffel) -> f64 {
        self.data.iter().zip(&o.data).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

pub fn christoffel(map: &CoordMap, z: &[f64], method: ChristoffelMethod) -> Result<Christoffel> {
    let d = map.derivatives(z)?;
    let n = map.dim();
    let metric = metric_from(map, z, &d)?;
    let mut g = Christoffel::zeros(n);
    match method {
        ChristoffelMethod::SecondDerivative => {
            for h in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let s: f64 = (0..n).map(|m| metric.dual[h][m] * d.d2[m][k][l]).sum();
                        g.set(h, k, l, s);
                    }
                }
            }
        }
        ChristoffelMethod::MetricDerivative => {
            let dg = metric_derivatives_from(&d);
            for h in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let s: f64 = (0..n)
                            .map(|m| metric.con[h][m] * (dg[m][k][l] + dg[m][l][k] - dg[k][l][m]))
                            .sum();
                        g.set(h, k, l, 0.5 * s);
                    }
                }
            }
        }
    }
    Ok(g)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Raise,
    Lower,
}

/// Raise or lower every index of a vector (`n` components) or a
/// second-rank tensor (`n*n` components, row-major).
pub fn raise_lower(components: &[f64], metric: &Metric, direction: Direction) -> Result<Vec<f64>> {
    let n = metric.dim();
    let m = match direction {
        Direction::Raise => &metric.con,
        Direction::Lower => &metric.cov,
    };
    if components.len() == n {
        return Ok(linalg::matvec(m, components));
    }
    if components.len() == n * n {
        let l: Mat = components.chunks(n).map(|r| r.to_vec()).collect();
        let out = linalg::matmul(&linalg::matmul(m, &l), m);
        return Ok(out.into_iter().flatten().collect());
    }
    Err(Error::Dimension {
        expected: n,
        found: components.len(),
    })
}

/// Mixed components `L^i_j = g^ih L_hj` from covariant ones.
pub fn mixed_from_covariant(l: &[f64], metric: &Metric) -> Result<Vec<f64>> {
    let n = metric.dim();
    if l.len() != n * n {
        return Err(Error::Dimension {
            expected: n * n,
            found: l.len(),
        });
    }
    let lm: Mat = l.chunks(n).map(|r| r.to_vec()).collect();
    Ok(linalg::matmul(&metric.con, &lm).into_iter().flatten().collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variance {
    /// `v^h`
    Contra,
    /// `v_h`
    Co,
    /// `L^np`
    TensorContra,
    /// `L_np`
    TensorCo,
    /// `L^n_p`
    TensorMixed,
}

/// Covariant derivative of a field at `z`.
///
/// Vectors give `out[h*n + k] = v^h;k` (or `v_h;k`); tensors give
/// `out[(a*n + b)*n + h] = L_ab;h` with the variance's index placement.
pub fn covariant_derivative(field: &dyn Field, z: &[f64], gamma: &Christoffel, variance: Variance) -> Result<Vec<f64>> {
    let n = gamma.n;
    let (v, dv) = field.value_and_gradient(z)?;
    let vector = matches!(variance, Variance::Contra | Variance::Co);
    let need = if vector { n } else { n * n };
    if v.len() != need {
        return Err(Error::Dimension {
            expected: need,
            found: v.len(),
        });
    }
    let g = |h, k, l| gamma.get(h, k, l);
    if vector {
        let mut out = vec![0.0; n * n];
        for h in 0..n {
            for k in 0..n {
                let corr: f64 = match variance {
                    Variance::Contra => (0..n).map(|l| g(h, k, l) * v[l]).sum(),
                    _ => -(0..n).map(|l| g(l, k, h) * v[l]).sum::<f64>(),
                };
                out[h * n + k] = dv[h][k] + corr;
            }
        }
        return Ok(out);
    }
    let at = |a: usize, b: usize| v[a * n + b];
    let mut out = vec![0.0; n * n * n];
    for a in 0..n {
        for b in 0..n {
            for h in 0..n {
                let corr: f64 = (0..n)
                    .map(|r| match variance {
                        Variance::TensorContra => g(a, h, r) * at(r, b) + g(b, h, r) * at(a, r),
                        Variance::TensorCo => -g(r, h, a) * at(r, b) - g(r, h, b) * at(a, r),
                        _ => g(a, h, r) * at(r, b) - g(r, b, h) * at(a, r),
                    })
                    .sum();
                out[(a * n + b) * n + h] = dv[a * n + b][h] + corr;
            }
        }
    }
    Ok(out)
}

/// `div v = v^h;h` for contravariant components.
pub fn divergence_contra(field: &dyn Field, z: &[f64], gamma: &Christoffel) -> Result<f64> {
    let n = gamma.n;
    let d = covariant_derivative(field, z, gamma, Variance::Contra)?;
    Ok((0..n).map(|h| d[h * n + h]).sum())
}
