use crate::error::{Error, Result};
use crate::expr::ExprMap;
use crate::quad::GaussLegendre;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Theorem {
    /// `int_dV phi n = int_V grad phi`, `int_dV v.n = int_V div v`,
    /// `int_dV L n = int_V div L` depending on the field's size.
    Gauss,
    /// Circulation round a disc in a plane `x3 = const` against the
    /// normal component of the curl.
    Stokes,
    /// `int_dV phi grad psi . n = int_V (phi lap psi + grad phi . grad psi)`.
    Green,
    /// Outflow of a solenoidal field; the residual is the flux itself.
    Flux,
    /// `int_dV v (x) n = int_V grad v`.
    DivergenceLemma,
    /// `int_dV n x v = int_V curl v`.
    Curl,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IntegrationDomain {
    Box { min: [f64; 3], max: [f64; 3] },
    /// Disc in the plane `x3 = center[2]`.
    Disc { center: [f64; 3], radius: f64 },
}

/// Norm of the difference between the boundary and the domain sides,
/// both computed with tensor-product Gauss-Legendre rules of `order`.
pub fn integral_theorem_residual(theorem: Theorem, fields: &[&ExprMap], domain: &IntegrationDomain, order: usize) -> Result<f64> {
    let need = if theorem == Theorem::Green { 2 } else { 1 };
    if fields.len() != need {
        return Err(Error::invalid(format!("{theorem:?} takes {need} field(s), got {}", fields.len())));
    }
    for f in fields {
        if f.arity() != 3 {
            return Err(Error::invalid("integral theorems act on fields of (x1, x2, x3)"));
        }
    }
    let gl = GaussLegendre::new(order.max(1));
    let (boundary, volume) = match (theorem, domain) {
        (Theorem::Stokes, IntegrationDomain::Disc { center, radius }) => stokes(fields[0], center, *radius, &gl)?,
        (Theorem::Stokes, _) => return Err(Error::invalid("Stokes is checked on a disc")),
        (_, IntegrationDomain::Box { min, max }) => boxed(theorem, fields, min, max, &gl)?,
        _ => return Err(Error::invalid(format!("{theorem:?} is checked on a box"))),
    };
    Ok(boundary.iter().zip(&volume).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt())
}

fn expect_dim(f: &ExprMap, allowed: &[usize]) -> Result<()> {
    if allowed.contains(&f.dim()) {
        Ok(())
    } else {
        Err(Error::Dimension {
            expected: allowed[0],
            found: f.dim(),
        })
    }
}

fn boxed(theorem: Theorem, fields: &[&ExprMap], min: &[f64; 3], max: &[f64; 3], gl: &GaussLegendre) -> Result<(Vec<f64>, Vec<f64>)> {
    let f = fields[0];
    match theorem {
        Theorem::Gauss => expect_dim(f, &[1, 3, 9])?,
        Theorem::Flux | Theorem::DivergenceLemma | Theorem::Curl => expect_dim(f, &[3])?,
        Theorem::Green => {
            expect_dim(f, &[1])?;
            expect_dim(fields[1], &[1])?;
        }
        Theorem::Stokes => unreachable!(),
    }
    let m = f.dim();
    let out_len = match theorem {
        Theorem::Gauss if m == 1 => 3,
        Theorem::Gauss if m == 3 => 1,
        Theorem::Gauss => 3,
        Theorem::Flux | Theorem::Green => 1,
        Theorem::DivergenceLemma => 9,
        Theorem::Curl => 3,
        Theorem::Stokes => unreachable!(),
    };

    // boundary: six faces with outward normals +-e_a
    let mut boundary = vec![0.0; out_len];
    for a in 0..3 {
        let (b, c) = ((a + 1) % 3, (a + 2) % 3);
        for (side, sign) in [(max[a], 1.0), (min[a], -1.0)] {
            for (xb, wb) in gl.on(min[b], max[b]) {
                for (xc, wc) in gl.on(min[c], max[c]) {
                    let mut x = [0.0; 3];
                    x[a] = side;
                    x[b] = xb;
                    x[c] = xc;
                    let w = wb * wc;
                    let mut n = [0.0; 3];
                    n[a] = sign;
                    let v = f.eval(&x)?;
                    match theorem {
                        Theorem::Gauss if m == 1 => boundary[a] += w * v[0] * sign,
                        Theorem::Gauss if m == 3 => boundary[0] += w * v[a] * sign,
                        Theorem::Gauss => {
                            for i in 0..3 {
                                boundary[i] += w * v[3 * i + a] * sign;
                            }
                        }
                        Theorem::Flux => boundary[0] += w * v[a] * sign,
                        Theorem::Green => {
                            let d = fields[1].derivatives(&x)?;
                            boundary[0] += w * v[0] * d.d1[0][a] * sign;
                        }
                        Theorem::DivergenceLemma => {
                            for i in 0..3 {
                                boundary[3 * i + a] += w * v[i] * sign;
                            }
                        }
                        Theorem::Curl => {
                            let nv = [n[1] * v[2] - n[2] * v[1], n[2] * v[0] - n[0] * v[2], n[0] * v[1] - n[1] * v[0]];
                            for i in 0..3 {
                                boundary[i] += w * nv[i];
                            }
                        }
                        Theorem::Stokes => unreachable!(),
                    }
                }
            }
        }
    }

    let mut volume = vec![0.0; out_len];
    if theorem == Theorem::Flux {
        return Ok((boundary, volume));
    }
    for (x0, w0) in gl.on(min[0], max[0]) {
        for (x1, w1) in gl.on(min[1], max[1]) {
            for (x2, w2) in gl.on(min[2], max[2]) {
                let x = [x0, x1, x2];
                let w = w0 * w1 * w2;
                let d = f.derivatives(&x)?;
                let g = &d.d1;
                match theorem {
                    Theorem::Gauss if m == 1 => {
                        for i in 0..3 {
                            volume[i] += w * g[0][i];
                        }
                    }
                    Theorem::Gauss if m == 3 => volume[0] += w * (g[0][0] + g[1][1] + g[2][2]),
                    Theorem::Gauss => {
                        for i in 0..3 {
                            volume[i] += w * (0..3).map(|j| g[3 * i + j][j]).sum::<f64>();
                        }
                    }
                    Theorem::Green => {
                        let e = fields[1].derivatives(&x)?;
                        let lap: f64 = (0..3).map(|i| e.d2[0][i][i]).sum();
                        let dot: f64 = (0..3).map(|i| g[0][i] * e.d1[0][i]).sum();
                        volume[0] += w * (d.value[0] * lap + dot);
                    }
                    Theorem::DivergenceLemma => {
                        for k in 0..9 {
                            volume[k] += w * g[k / 3][k % 3];
                        }
                    }
                    Theorem::Curl => {
                        let c = [g[2][1] - g[1][2], g[0][2] - g[2][0], g[1][0] - g[0][1]];
                        for i in 0..3 {
                            volume[i] += w * c[i];
                        }
                    }
                    Theorem::Flux | Theorem::Stokes => unreachable!(),
                }
            }
        }
    }
    Ok((boundary, volume))
}

const PANELS: usize = 8;

fn stokes(f: &ExprMap, center: &[f64; 3], radius: f64, gl: &GaussLegendre) -> Result<(Vec<f64>, Vec<f64>)> {
    expect_dim(f, &[3])?;
    let dt = 2.0 * PI / PANELS as f64;
    let mut circ = 0.0;
    let mut area = 0.0;
    for p in 0..PANELS {
        let t0 = p as f64 * dt;
        for (t, wt) in gl.on(t0, t0 + dt) {
            let (s, c) = t.sin_cos();
            let x = [center[0] + radius * c, center[1] + radius * s, center[2]];
            let v = f.eval(&x)?;
            circ += wt * radius * (-s * v[0] + c * v[1]);
            for (r, wr) in gl.on(0.0, radius) {
                let y = [center[0] + r * c, center[1] + r * s, center[2]];
                let g = f.derivatives(&y)?.d1;
                area += wt * wr * r * (g[1][0] - g[0][1]);
            }
        }
    }
    Ok((vec![circ], vec![area]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_cube() -> IntegrationDomain {
        IntegrationDomain::Box {
            min: [0.0; 3],
            max: [1.0; 3],
        }
    }

    #[test]
    fn identity_field_through_cube() {
        let v = ExprMap::parse(&["x1", "x2", "x3"], &["x1", "x2", "x3"], &[]).unwrap();
        let r = integral_theorem_residual(Theorem::Gauss, &[&v], &unit_cube(), 16).unwrap();
        assert!(r < 1e-12);
    }

    #[test]
    fn rotation_field_on_unit_disc() {
        let v = ExprMap::parse(&["-x2", "x1", "0"], &["x1", "x2", "x3"], &[]).unwrap();
        let d = IntegrationDomain::Disc {
            center: [0.0; 3],
            radius: 1.0,
        };
        assert!(integral_theorem_residual(Theorem::Stokes, &[&v], &d, 16).unwrap() < 1e-10);
    }

    #[test]
    fn green_divergence_lemma_and_curl() {
        let vars = ["x1", "x2", "x3"];
        let phi = ExprMap::parse(&["x1^2*x3 + sin(x2)"], &vars, &[]).unwrap();
        let psi = ExprMap::parse(&["x1*x2*x3 + x3^3"], &vars, &[]).unwrap();
        let v = ExprMap::parse(&["x2*x3^2", "exp(x1)", "x1*x2"], &vars, &[]).unwrap();
        let d = IntegrationDomain::Box {
            min: [-0.5, 0.0, 0.2],
            max: [0.7, 1.1, 1.0],
        };
        assert!(integral_theorem_residual(Theorem::Green, &[&phi, &psi], &d, 16).unwrap() < 1e-12);
        assert!(integral_theorem_residual(Theorem::DivergenceLemma, &[&v], &d, 16).unwrap() < 1e-12);
        assert!(integral_theorem_residual(Theorem::Curl, &[&v], &d, 16).unwrap() < 1e-12);
        assert!(integral_theorem_residual(Theorem::Gauss, &[&phi], &d, 16).unwrap() < 1e-12);
    }

    #[test]
    fn solenoidal_flux_vanishes() {
        let vars = ["x1", "x2", "x3"];
        let v = ExprMap::parse(&["x2*x3", "x1^2", "sin(x1*x2)"], &vars, &[]).unwrap();
        assert!(integral_theorem_residual(Theorem::Flux, &[&v], &unit_cube(), 16).unwrap() < 1e-13);
    }
}
