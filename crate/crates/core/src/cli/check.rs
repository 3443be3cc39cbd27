//! Quick invariant battery behind `tensorgeo check`.

use crate::coords::{christoffel, integral_theorem_residual, ChristoffelMethod, CoordMap, IntegrationDomain, Theorem};
use crate::curve::{bonnet_reconstruct, sampled_curvature_torsion, CurvatureProfile, Curve, ProfileFn};
use crate::error::Result;
use crate::expr::ExprMap;
use crate::surface::{egregium_k, geodesic_integrate, revolution_surface, GeodesicState, Surface};
use crate::tensor2::{eigen_sym, polar, rotation_from_axis_angle, rotation_to_axis_angle, AxisAngle, Tensor2, Vec3};
use crate::tensor4::{from_kelvin, kelvin_rotation, projectors, rotate4, to_kelvin, KelvinMatrix};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::f64::consts::PI;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckRow {
    pub name: &'static str,
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
}

fn random_tensor(rng: &mut StdRng) -> Tensor2 {
    let mut m = [[0.0; 3]; 3];
    m.iter_mut().flatten().for_each(|x| *x = rng.gen_range(-1.0..1.0));
    Tensor2(m)
}

fn random_rotation(rng: &mut StdRng) -> Tensor2 {
    let axis = loop {
        let v = Vec3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        if let Some(u) = v.normalized() {
            break u;
        }
    };
    rotation_from_axis_angle(&AxisAngle {
        axis,
        angle: rng.gen_range(0.0..PI),
    })
    .expect("unit axis")
}

fn one(src: &str) -> ExprMap {
    ExprMap::parse(&[src], &["t"], &[]).expect("built-in expression")
}

type Check = fn(&mut StdRng) -> Result<f64>;

fn cayley_hamilton(rng: &mut StdRng) -> Result<f64> {
    Ok((0..200).map(|_| {
        let l = random_tensor(rng);
        l.cayley_hamilton_residual() / l.norm().powi(3)
    }).fold(0.0, f64::max))
}

fn rotation_orthogonality(rng: &mut StdRng) -> Result<f64> {
    Ok((0..200).map(|_| {
        let r = random_rotation(rng);
        (r.compose(&r.transpose()) - Tensor2::IDENTITY).norm().max((r.det() - 1.0).abs())
    }).fold(0.0, f64::max))
}

fn axis_angle_roundtrip(rng: &mut StdRng) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let axis = Vec3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            .normalized()
            .unwrap_or(Vec3::e(2));
        let angle = rng.gen_range(0.1..3.0);
        let back = rotation_to_axis_angle(&rotation_from_axis_angle(&AxisAngle { axis, angle })?)?;
        worst = worst.max((back.angle - angle).abs()).max((back.axis - axis).norm());
    }
    Ok(worst)
}

fn polar_factors(rng: &mut StdRng) -> Result<f64> {
    let mut worst: f64 = 0.0;
    let mut n = 0;
    while n < 200 {
        let f = random_tensor(rng) + Tensor2::IDENTITY;
        if f.det() <= 0.1 {
            continue;
        }
        n += 1;
        let p = polar(&f)?;
        worst = worst.max((f - p.r.compose(&p.u)).norm() / f.norm());
    }
    Ok(worst)
}

fn spectral_reconstruction(rng: &mut StdRng) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let l = random_tensor(rng).sym();
        worst = worst.max((eigen_sym(&l)?.reconstruct() - l).norm() / l.norm());
    }
    Ok(worst)
}

fn kelvin_conjugation(rng: &mut StdRng) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let mut m = [[0.0; 6]; 6];
        for i in 0..6 {
            for j in i..6 {
                m[i][j] = rng.gen_range(-1.0..1.0);
                m[j][i] = m[i][j];
            }
        }
        let e = from_kelvin(&KelvinMatrix(m));
        let r = random_rotation(rng);
        let u = kelvin_rotation(&r)?;
        let lhs = u.mul(&KelvinMatrix(m)).mul(&u.transpose());
        worst = worst.max(lhs.max_abs_diff(&to_kelvin(&rotate4(&e, &r)?)?));
    }
    Ok(worst)
}

fn projector_products(_: &mut StdRng) -> Result<f64> {
    let p = projectors();
    Ok((p.sph.inner(&p.sph) - 1.0).abs() + (p.dev.inner(&p.dev) - 5.0).abs() + p.sph.inner(&p.dev).abs())
}

fn christoffel_methods(rng: &mut StdRng) -> Result<f64> {
    let map = CoordMap::spherical();
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let z = [rng.gen_range(0.5..2.0), rng.gen_range(0.2..2.9), rng.gen_range(-3.0..3.0)];
        let a = christoffel(&map, &z, ChristoffelMethod::SecondDerivative)?;
        let b = christoffel(&map, &z, ChristoffelMethod::MetricDerivative)?;
        worst = worst.max(a.max_abs_diff(&b));
    }
    Ok(worst)
}

fn helix_constants(_: &mut StdRng) -> Result<f64> {
    let m = ExprMap::parse(&["2*cos(t)", "2*sin(t)", "t"], &["t"], &[])?;
    let c = Curve::new(m, 0.0, 10.0)?;
    let mut worst: f64 = 0.0;
    for t in c.grid(50) {
        let f = c.frenet(t)?;
        worst = worst.max((f.c - 0.4).abs()).max((f.theta + 0.2).abs());
    }
    Ok(worst)
}

fn bonnet_roundtrip(_: &mut StdRng) -> Result<f64> {
    let profile = CurvatureProfile {
        curvature: ProfileFn::Expr(one("0.4")),
        torsion: ProfileFn::Expr(one("-0.2")),
        s_range: (0.0, 3.0),
    };
    let h = 1e-3;
    let out = bonnet_reconstruct(&profile, Vec3::ZERO, [Vec3::e(0), Vec3::e(1), Vec3::e(2)], h)?;
    let mut worst = out.frame_drift();
    for i in (200..out.points.len() - 200).step_by(250) {
        if let Some((c, th)) = sampled_curvature_torsion(&out.points, h, i, 10) {
            worst = worst.max((c - 0.4).abs()).max((th + 0.2).abs());
        }
    }
    Ok(worst)
}

fn pseudosphere(_: &mut StdRng) -> Result<f64> {
    let s = revolution_surface(&one("sin(t)"), &one("cos(t) + ln(tan(t/2))"), (0.1, 1.4), (0.0, 6.0))?;
    let mut worst: f64 = 0.0;
    for i in 1..=10 {
        for j in 1..=10 {
            let (u, v) = (0.1 + 1.3 * i as f64 / 11.0, 6.0 * j as f64 / 11.0);
            worst = worst.max((s.jet_at(u, v)?.gauss + 1.0).abs());
        }
    }
    Ok(worst)
}

fn catenoid_minimal(_: &mut StdRng) -> Result<f64> {
    let s = revolution_surface(&one("cosh(t)"), &one("t"), (-1.0, 1.0), (0.0, 6.0))?;
    let mut worst: f64 = 0.0;
    for i in 0..10 {
        for j in 0..10 {
            worst = worst.max(s.jet_at(-1.0 + 0.2 * i as f64, 0.6 * j as f64)?.mean.abs());
        }
    }
    Ok(worst)
}

fn egregium_torus(_: &mut StdRng) -> Result<f64> {
    let s = revolution_surface(&one("2 + cos(t)"), &one("sin(t)"), (-3.0, 3.0), (0.0, 6.0))?;
    let mut worst: f64 = 0.0;
    for i in 0..10 {
        for j in 0..10 {
            let (u, v) = (-3.0 + 0.6 * i as f64, 0.6 * j as f64);
            worst = worst.max((egregium_k(&s, u, v)? - s.jet_at(u, v)?.gauss).abs());
        }
    }
    Ok(worst)
}

fn gauss_cube(_: &mut StdRng) -> Result<f64> {
    let vars = ["x1", "x2", "x3"];
    let v = ExprMap::parse(&["x1^3 - x2*x3", "x1*x2^2 + x3", "x3^3*x1 - x2"], &vars, &[])?;
    let cube = IntegrationDomain::Box {
        min: [0.0; 3],
        max: [1.0; 3],
    };
    integral_theorem_residual(Theorem::Gauss, &[&v], &cube, 16)
}

fn great_circle(_: &mut StdRng) -> Result<f64> {
    let m = ExprMap::parse(&["cos(u)*cos(v)", "cos(u)*sin(v)", "sin(u)"], &["u", "v"], &[])?;
    let s = Surface::new(m, (-1.5, 1.5), (-10.0, 10.0))?;
    let a: f64 = 0.6;
    let start = GeodesicState {
        u: 0.0,
        v: 0.0,
        du: a.sin(),
        dv: a.cos(),
        s: 0.0,
    };
    // great circle through (1,0,0) with tangent (0, cos a, sin a): normal (0, -sin a, cos a)
    let n = Vec3::new(0.0, -a.sin(), a.cos());
    let traj = geodesic_integrate(&s, start, PI, 1e-3)?;
    let mut worst: f64 = 0.0;
    for st in traj.iter().step_by(50) {
        worst = worst.max(s.point(st.u, st.v)?.dot(&n).abs());
    }
    Ok(worst)
}

const CHECKS: &[(&str, Check, f64)] = &[
    ("cayley_hamilton", cayley_hamilton, 1e-10),
    ("rotation_orthogonality", rotation_orthogonality, 1e-12),
    ("axis_angle_roundtrip", axis_angle_roundtrip, 1e-8),
    ("polar_factors", polar_factors, 1e-10),
    ("spectral_reconstruction", spectral_reconstruction, 1e-12),
    ("kelvin_conjugation", kelvin_conjugation, 1e-12),
    ("projector_products", projector_products, 1e-14),
    ("christoffel_methods", christoffel_methods, 1e-8),
    ("helix_constants", helix_constants, 1e-8),
    ("bonnet_roundtrip", bonnet_roundtrip, 1e-5),
    ("pseudosphere_curvature", pseudosphere, 1e-6),
    ("catenoid_minimal", catenoid_minimal, 1e-8),
    ("egregium_torus", egregium_torus, 1e-6),
    ("gauss_theorem_cube", gauss_cube, 1e-10),
    ("sphere_great_circle", great_circle, 1e-6),
];

pub fn battery() -> Vec<CheckRow> {
    let mut rng = StdRng::seed_from_u64(20_240_917);
    CHECKS
        .iter()
        .map(|&(name, f, threshold)| {
            let value = f(&mut rng).unwrap_or(f64::INFINITY);
            CheckRow {
                name,
                value,
                threshold,
                pass: value < threshold,
            }
        })
        .collect()
}

pub fn render(rows: &[CheckRow]) -> String {
    let mut s = format!("{:<26} {:>12} {:>10}  result\n", "check", "value", "threshold");
    for r in rows {
        s.push_str(&format!(
            "{:<26} {:>12.3e} {:>10.0e}  {}\n",
            r.name,
            r.value,
            r.threshold,
            if r.pass { "PASS" } else { "FAIL" }
        ));
    }
    s
}

#[cfg(test)]
mod tests {
    #[test]
    fn battery_passes() {
        let rows = super::battery();
        let failed: Vec<_> = rows.iter().filter(|r| !r.pass).collect();
        assert!(failed.is_empty(), "{failed:?}");
    }
}
