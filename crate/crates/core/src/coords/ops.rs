use super::{christoffel, metric_at, ChristoffelMethod, CoordMap};
use crate::error::{Error, Result};
use crate::expr::{Derivatives, ExprMap};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum System {
    Cartesian,
    /// `(rho, theta, z)`, basis `e_rho, e_theta, e_z`.
    Cylindrical,
    /// `(r, phi, theta)` with colatitude `phi`, basis `e_r, e_phi, e_theta`.
    Spherical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldKind {
    Scalar,
    Vector,
    Tensor,
}

impl FieldKind {
    fn components(self) -> usize {
        match self {
            FieldKind::Scalar => 1,
            FieldKind::Vector => 3,
            FieldKind::Tensor => 9,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DiffOp {
    Grad,
    Div,
    Curl,
    Laplacian,
}

const GUARD: f64 = 1e-8;

struct D<'a>(&'a Derivatives);

impl D<'_> {
    fn v(&self, c: usize) -> f64 {
        self.0.value[c]
    }
    fn d(&self, c: usize, j: usize) -> f64 {
        self.0.d1[c][j]
    }
    fn dd(&self, c: usize, j: usize, l: usize) -> f64 {
        self.0.d2[c][j][l]
    }
}

/// Differential operators on physical components in one of the three
/// standard systems. Vector fields have 3 components, tensors 9 (row-major).
pub fn diff_ops(system: System, kind: FieldKind, op: DiffOp, field: &ExprMap, point: &[f64]) -> Result<Vec<f64>> {
    if field.arity() != 3 || point.len() != 3 {
        return Err(Error::invalid("differential operators act on fields of three coordinates"));
    }
    if field.dim() != kind.components() {
        return Err(Error::Dimension {
            expected: kind.components(),
            found: field.dim(),
        });
    }
    match system {
        System::Cylindrical if point[0].abs() < GUARD => {
            return Err(Error::CoordinateSingularity { point: point.to_vec() })
        }
        System::Spherical if point[0].abs() < GUARD || point[1].sin().abs() < GUARD => {
            return Err(Error::CoordinateSingularity { point: point.to_vec() })
        }
        _ => {}
    }
    let der = field.derivatives(point)?;
    let f = D(&der);
    let unsupported = || Err(Error::invalid(format!("{op:?} is not defined for a {kind:?} field")));
    match system {
        System::Cartesian => cartesian(&f, kind, op).map_or_else(unsupported, Ok),
        System::Cylindrical => cylindrical(&f, point, kind, op).map_or_else(unsupported, Ok),
        System::Spherical => spherical(&f, point, kind, op).map_or_else(unsupported, Ok),
    }
}

fn cartesian(f: &D, kind: FieldKind, op: DiffOp) -> Option<Vec<f64>> {
    use DiffOp::*;
    use FieldKind::*;
    Some(match (kind, op) {
        (Scalar, Grad) => (0..3).map(|i| f.d(0, i)).collect(),
        (Scalar, Laplacian) => vec![(0..3).map(|i| f.dd(0, i, i)).sum()],
        (Vector, Grad) => (0..9).map(|n| f.d(n / 3, n % 3)).collect(),
        (Vector, Div) => vec![(0..3).map(|i| f.d(i, i)).sum()],
        (Vector, Curl) => vec![f.d(2, 1) - f.d(1, 2), f.d(0, 2) - f.d(2, 0), f.d(1, 0) - f.d(0, 1)],
        (Vector, Laplacian) => (0..3).map(|c| (0..3).map(|i| f.dd(c, i, i)).sum()).collect(),
        (Tensor, Div) => (0..3).map(|i| (0..3).map(|j| f.d(3 * i + j, j)).sum()).collect(),
        _ => return None,
    })
}

fn cylindrical(f: &D, p: &[f64], kind: FieldKind, op: DiffOp) -> Option<Vec<f64>> {
    use DiffOp::*;
    use FieldKind::*;
    let r = p[0];
    let lap = |c: usize| f.dd(c, 0, 0) + f.d(c, 0) / r + f.dd(c, 1, 1) / (r * r) + f.dd(c, 2, 2);
    Some(match (kind, op) {
        (Scalar, Grad) => vec![f.d(0, 0), f.d(0, 1) / r, f.d(0, 2)],
        (Scalar, Laplacian) => vec![lap(0)],
        (Vector, Grad) => vec![
            f.d(0, 0),
            (f.d(0, 1) - f.v(1)) / r,
            f.d(0, 2),
            f.d(1, 0),
            (f.d(1, 1) + f.v(0)) / r,
            f.d(1, 2),
            f.d(2, 0),
            f.d(2, 1) / r,
            f.d(2, 2),
        ],
        (Vector, Div) => vec![f.d(0, 0) + (f.d(1, 1) + f.v(0)) / r + f.d(2, 2)],
        (Vector, Curl) => vec![
            f.d(2, 1) / r - f.d(1, 2),
            f.d(0, 2) - f.d(2, 0),
            (f.v(1) + r * f.d(1, 0) - f.d(0, 1)) / r,
        ],
        (Vector, Laplacian) => vec![
            lap(0) - (f.v(0) + 2.0 * f.d(1, 1)) / (r * r),
            lap(1) - (f.v(1) - 2.0 * f.d(0, 1)) / (r * r),
            lap(2),
        ],
        (Tensor, Div) => {
            let l = |i: usize, j: usize| 3 * i + j;
            vec![
                (f.v(l(0, 0)) + r * f.d(l(0, 0), 0) + f.d(l(0, 1), 1) - f.v(l(1, 1))) / r + f.d(l(0, 2), 2),
                f.d(l(1, 0), 0) + (f.d(l(1, 1), 1) + f.v(l(0, 1)) + f.v(l(1, 0))) / r + f.d(l(1, 2), 2),
                (f.v(l(2, 0)) + r * f.d(l(2, 0), 0) + f.d(l(2, 1), 1)) / r + f.d(l(2, 2), 2),
            ]
        }
        _ => return None,
    })
}

fn spherical(f: &D, p: &[f64], kind: FieldKind, op: DiffOp) -> Option<Vec<f64>> {
    use DiffOp::*;
    use FieldKind::*;
    let r = p[0];
    let (s, c) = p[1].sin_cos();
    let cot = c / s;
    let r2 = r * r;
    // index 0: r, 1: phi (colatitude), 2: theta (azimuth)
    let lap = |k: usize| {
        f.dd(k, 0, 0) + 2.0 * f.d(k, 0) / r + (f.dd(k, 1, 1) + cot * f.d(k, 1)) / r2 + f.dd(k, 2, 2) / (r2 * s * s)
    };
    Some(match (kind, op) {
        (Scalar, Grad) => vec![f.d(0, 0), f.d(0, 1) / r, f.d(0, 2) / (r * s)],
        (Scalar, Laplacian) => vec![lap(0)],
        (Vector, Grad) => vec![
            f.d(0, 0),
            (f.d(0, 1) - f.v(1)) / r,
            (f.d(0, 2) / s - f.v(2)) / r,
            f.d(1, 0),
            (f.d(1, 1) + f.v(0)) / r,
            (f.d(1, 2) / s - f.v(2) * cot) / r,
            f.d(2, 0),
            f.d(2, 1) / r,
            (f.d(2, 2) / s + f.v(0) + f.v(1) * cot) / r,
        ],
        (Vector, Div) => vec![
            f.d(0, 0) + 2.0 * f.v(0) / r + (f.d(1, 1) * s + f.v(1) * c + f.d(2, 2)) / (r * s),
        ],
        (Vector, Curl) => vec![
            (f.d(2, 1) * s + f.v(2) * c - f.d(1, 2)) / (r * s),
            f.d(0, 2) / (r * s) - (f.v(2) + r * f.d(2, 0)) / r,
            (f.v(1) + r * f.d(1, 0) - f.d(0, 1)) / r,
        ],
        (Vector, Laplacian) => vec![
            lap(0) - 2.0 * f.v(0) / r2 - 2.0 * (f.d(1, 1) + cot * f.v(1)) / r2 - 2.0 * f.d(2, 2) / (r2 * s),
            lap(1) - f.v(1) / (r2 * s * s) + 2.0 * f.d(0, 1) / r2 - 2.0 * c * f.d(2, 2) / (r2 * s * s),
            lap(2) - f.v(2) / (r2 * s * s) + 2.0 * f.d(0, 2) / (r2 * s) + 2.0 * c * f.d(1, 2) / (r2 * s * s),
        ],
        (Tensor, Div) => {
            let l = |i: usize, j: usize| 3 * i + j;
            let row = |i: usize| f.d(l(i, 0), 0) + 2.0 * f.v(l(i, 0)) / r + f.d(l(i, 1), 1) / r + f.d(l(i, 2), 2) / (r * s);
            vec![
                row(0) - (f.v(l(1, 1)) + f.v(l(2, 2))) / r + cot * f.v(l(0, 1)) / r,
                row(1) + f.v(l(0, 1)) / r + cot * (f.v(l(1, 1)) - f.v(l(2, 2))) / r,
                row(2) + f.v(l(0, 2)) / r + cot * (f.v(l(1, 2)) + f.v(l(2, 1))) / r,
            ]
        }
        _ => return None,
    })
}

/// `Delta f = g^hk (f,hk - Gamma^j_hk f,j)` for a scalar given in the
/// curvilinear coordinates of `map`.
pub fn laplacian_curvilinear(map: &CoordMap, f: &ExprMap, z: &[f64]) -> Result<f64> {
    if f.dim() != 1 || f.arity() != map.dim() {
        return Err(Error::invalid("scalar field must share the coordinate map's variables"));
    }
    let n = map.dim();
    let metric = metric_at(map, z)?;
    let gamma = christoffel(map, z, ChristoffelMethod::SecondDerivative)?;
    let d = f.derivatives(z)?;
    let mut s = 0.0;
    for h in 0..n {
        for k in 0..n {
            let corr: f64 = (0..n).map(|j| gamma.get(j, h, k) * d.d1[0][j]).sum();
            s += metric.con[h][k] * (d.d2[0][h][k] - corr);
        }
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(src: &[&str], vars: &[&str]) -> ExprMap {
        ExprMap::parse(src, vars, &[]).unwrap()
    }

    #[test]
    fn cylindrical_examples() {
        let v = ["rho", "th", "z"];
        let lap = diff_ops(System::Cylindrical, FieldKind::Scalar, DiffOp::Laplacian, &field(&["rho^2"], &v), &[1.7, 0.3, -2.0]).unwrap();
        assert!((lap[0] - 4.0).abs() < 1e-13);
        let div = diff_ops(System::Cylindrical, FieldKind::Vector, DiffOp::Div, &field(&["rho", "0", "0"], &v), &[0.6, 2.0, 1.0]).unwrap();
        assert!((div[0] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn spherical_inverse_distance_is_harmonic() {
        let v = ["r", "ph", "th"];
        let lap = diff_ops(System::Spherical, FieldKind::Scalar, DiffOp::Laplacian, &field(&["1/r"], &v), &[1.3, 0.7, 2.0]).unwrap();
        assert!(lap[0].abs() < 1e-14);
    }

    #[test]
    fn guard_bands() {
        let v = ["r", "ph", "th"];
        let err = diff_ops(System::Spherical, FieldKind::Scalar, DiffOp::Grad, &field(&["r"], &v), &[1.0, 0.0, 0.0]);
        assert!(matches!(err, Err(Error::CoordinateSingularity { .. })));
    }

    #[test]
    fn general_laplacian_matches_polar_closed_form() {
        // f = r^3 cos(th): Delta f = 9 r cos th - r cos th = 8 r cos th
        let f = field(&["r^3*cos(th)"], &["r", "th"]);
        let l = laplacian_curvilinear(&CoordMap::polar(), &f, &[1.5, 0.4]).unwrap();
        assert!((l - 8.0 * 1.5 * 0.4f64.cos()).abs() < 1e-12);
    }
}
