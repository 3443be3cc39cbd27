//! Acceptance battery. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::f64::consts::PI;
use std::time::Instant;
use tensorgeo::coords::{christoffel, integral_theorem_residual, ChristoffelMethod, CoordMap, IntegrationDomain, Theorem};
use tensorgeo::curve::{bonnet_reconstruct, sampled_curvature_torsion, CurvatureProfile, Curve, ProfileFn};
use tensorgeo::expr::ExprMap;
use tensorgeo::surface::{
    classify_point, egregium_k, geodesic_integrate, geodesic_residual, revolution_surface, GeodesicState, PointClass,
    Surface,
};
use tensorgeo::tensor2::{polar, rotation_from_axis_angle, AxisAngle, Tensor2, Vec3};
use tensorgeo::tensor4::{from_kelvin, kelvin_rotation, projectors, rotate4, to_kelvin, KelvinMatrix, Tensor4};
use tensorgeo::Result;

struct Outcome {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Result<Outcome> {
    Ok(Outcome { pass, detail })
}

fn surface(components: [&str; 3], u: (f64, f64), v: (f64, f64)) -> Result<Surface> {
    Surface::new(ExprMap::parse(&components, &["u", "v"], &[])?, u, v)
}

fn curve(components: [&str; 3], t0: f64, t1: f64) -> Result<Curve> {
    Curve::new(ExprMap::parse(&components, &["t"], &[])?, t0, t1)
}

fn profile(src: &str) -> ExprMap {
    ExprMap::parse(&[src], &["t"], &[]).unwrap()
}

/// `n` interior nodes of `[a, b]`.
fn interior(a: f64, b: f64, n: usize) -> impl Iterator<Item = f64> {
    (1..=n).map(move |i| a + (b - a) * i as f64 / (n + 1) as f64)
}

fn grid(u: (f64, f64), v: (f64, f64), n: usize) -> Vec<(f64, f64)> {
    interior(u.0, u.1, n).flat_map(|a| interior(v.0, v.1, n).map(move |b| (a, b))).collect()
}

fn random_unit(rng: &mut StdRng) -> Vec3 {
    loop {
        let v = Vec3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        if v.norm() > 0.1 && v.norm() <= 1.0 {
            return v.normalized().unwrap();
        }
    }
}

fn random_tensor(rng: &mut StdRng, scale: f64) -> Tensor2 {
    let mut m = [[0.0; 3]; 3];
    m.iter_mut().flatten().for_each(|x| *x = rng.gen_range(-scale..scale));
    Tensor2(m)
}

fn pseudosphere_curvature() -> Result<Outcome> {
    let start = Instant::now();
    let u = (0.1, 1.4);
    let s = surface(["sin(u)*cos(v)", "sin(u)*sin(v)", "cos(u) + ln(tan(u/2))"], u, (0.0, 2.0 * PI))?;
    let mut worst: f64 = 0.0;
    let pts = grid(u, (0.0, 2.0 * PI), 20);
    for &(a, b) in &pts {
        worst = worst.max((s.jet_at(a, b)?.gauss + 1.0).abs());
    }
    let secs = start.elapsed().as_secs_f64();
    verdict(
        worst < 1e-6 && secs < 1.0 && pts.len() == 400,
        format!("max |K+1| = {worst:.2e} over {} points in {secs:.3} s", pts.len()),
    )
}

fn minimal_surfaces() -> Result<Outcome> {
    let cases = [
        ("catenoid", surface(["cosh(u)*cos(v)", "cosh(u)*sin(v)", "u"], (-1.5, 1.5), (0.0, 2.0 * PI))?),
        ("helicoid", surface(["u*cos(v)", "u*sin(v)", "v"], (-2.0, 2.0), (0.0, 2.0 * PI))?),
    ];
    let mut worst: f64 = 0.0;
    let mut bad_class = 0;
    for (_, s) in &cases {
        for (u, v) in grid(s.u_range(), s.v_range(), 20) {
            let j = s.jet_at(u, v)?;
            worst = worst.max(j.mean.abs());
            match classify_point(&j) {
                PointClass::Hyperbolic | PointClass::Planar => {}
                _ => bad_class += 1,
            }
        }
    }
    verdict(
        worst < 1e-8 && bad_class == 0,
        format!("max |H| = {worst:.2e}, non-hyperbolic non-planar points = {bad_class}"),
    )
}

fn helix_constants() -> Result<Outcome> {
    let (a, b) = (2.0, 1.0);
    let c = curve(["2*cos(t)", "2*sin(t)", "t"], 0.0, 4.0 * PI)?;
    // right-handed helix: curvature a/(a^2+b^2), torsion of opposite sign to b/(a^2+b^2)
    let (c0, th0) = (a / (a * a + b * b), -b / (a * a + b * b));
    let mut err: f64 = 0.0;
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for t in c.grid(100) {
        let f = c.frenet(t)?;
        err = err.max((f.c - c0).abs()).max((f.theta - th0).abs());
        lo = lo.min(f.c / f.theta);
        hi = hi.max(f.c / f.theta);
    }
    verdict(
        err < 1e-8 && hi - lo < 1e-10,
        format!("max deviation {err:.2e}, ratio spread {:.2e}", hi - lo),
    )
}

fn bonnet_roundtrip() -> Result<Outcome> {
    let h = 1e-3;
    let p = CurvatureProfile {
        curvature: ProfileFn::Expr(profile("0.4")),
        torsion: ProfileFn::Expr(profile("-0.2")),
        s_range: (0.0, 10.0),
    };
    let out = bonnet_reconstruct(&p, Vec3::ZERO, [Vec3::e(0), Vec3::e(1), Vec3::e(2)], h)?;
    let mut err: f64 = 0.0;
    for i in (100..out.points.len() - 100).step_by(100) {
        let (c, th) = sampled_curvature_torsion(&out.points, h, i, 10).expect("interior sample");
        err = err.max((c - 0.4).abs()).max((th + 0.2).abs());
    }
    let drift = out.frame_drift();
    verdict(err < 1e-5 && drift < 1e-9, format!("curvature/torsion error {err:.2e}, frame drift {drift:.2e}"))
}

fn egregium() -> Result<Outcome> {
    let cases: [(&str, Surface, fn(f64) -> f64); 3] = [
        (
            "sphere",
            surface(["cos(u)*cos(v)", "cos(u)*sin(v)", "sin(u)"], (-1.4, 1.4), (0.0, 2.0 * PI))?,
            |_| 1.0,
        ),
        (
            "catenoid",
            revolution_surface(&profile("cosh(t)"), &profile("t"), (-1.5, 1.5), (0.0, 2.0 * PI))?,
            |u| -1.0 / u.cosh().powi(4),
        ),
        (
            "torus",
            revolution_surface(&profile("2 + cos(t)"), &profile("sin(t)"), (-PI, PI), (0.0, 2.0 * PI))?,
            |u| u.cos() / (2.0 + u.cos()),
        ),
    ];
    let mut worst: f64 = 0.0;
    let mut oracle: f64 = 0.0;
    for (_, s, exact) in &cases {
        for (u, v) in grid(s.u_range(), s.v_range(), 20) {
            let k = egregium_k(s, u, v)?;
            worst = worst.max((k - s.jet_at(u, v)?.gauss).abs());
            oracle = oracle.max((k - exact(u)).abs());
        }
    }
    verdict(
        worst < 1e-6 && oracle < 1e-6,
        format!("max |intrinsic - extrinsic| = {worst:.2e}, max |intrinsic - closed form| = {oracle:.2e}"),
    )
}

fn rotations(rng: &mut StdRng) -> Result<Outcome> {
    let (mut orth, mut det, mut tr): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for _ in 0..1000 {
        let angle = rng.gen_range(-PI..PI);
        let r = rotation_from_axis_angle(&AxisAngle {
            axis: random_unit(rng),
            angle,
        })?;
        orth = orth.max((r.compose(&r.transpose()) - Tensor2::IDENTITY).norm());
        det = det.max((r.det() - 1.0).abs());
        tr = tr.max((r.trace() - (1.0 + 2.0 * angle.cos())).abs());
    }
    verdict(
        orth < 1e-12 && det < 1e-12 && tr < 1e-12,
        format!("|RR^T-I| {orth:.2e}, |det-1| {det:.2e}, trace {tr:.2e}"),
    )
}

fn is_spd(a: &Tensor2) -> bool {
    let m = a.0;
    let minor2 = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    a.symmetry_defect() < 1e-12 * a.norm() && m[0][0] > 0.0 && minor2 > 0.0 && a.det() > 0.0
}

fn polar_decompositions(rng: &mut StdRng) -> Result<Outcome> {
    let (mut fac, mut conj): (f64, f64) = (0.0, 0.0);
    let mut spd_fail = 0;
    let mut n = 0;
    while n < 1000 {
        let f = random_tensor(rng, 2.0);
        if f.det() <= 0.1 {
            continue;
        }
        n += 1;
        let p = polar(&f)?;
        fac = fac.max((f - p.r.compose(&p.u)).norm() / f.norm());
        conj = conj.max((p.v - p.r.compose(&p.u).compose(&p.r.transpose())).max_abs());
        if !is_spd(&p.u) || !is_spd(&p.v) {
            spd_fail += 1;
        }
    }
    verdict(
        fac < 1e-10 && conj < 1e-10 && spd_fail == 0,
        format!("|F-RU|/|F| {fac:.2e}, |V-RUR^T| {conj:.2e}, non-SPD factors {spd_fail}"),
    )
}

fn kelvin(rng: &mut StdRng) -> Result<Outcome> {
    let (mut conj, mut orth): (f64, f64) = (0.0, 0.0);
    for _ in 0..200 {
        // minor and major symmetric: E_ijkl built from symmetric pairs
        let e = Tensor4::from_fn({
            let mut m = [[0.0; 6]; 6];
            for i in 0..6 {
                for j in i..6 {
                    m[i][j] = rng.gen_range(-1.0..1.0);
                    m[j][i] = m[i][j];
                }
            }
            let e = from_kelvin(&KelvinMatrix(m));
            move |i, j, k, l| e.get(i, j, k, l)
        });
        let r = rotation_from_axis_angle(&AxisAngle {
            axis: random_unit(rng),
            angle: rng.gen_range(0.0..PI),
        })?;
        let u = kelvin_rotation(&r)?;
        let lhs = u.mul(&to_kelvin(&e)?).mul(&u.transpose());
        conj = conj.max(lhs.max_abs_diff(&to_kelvin(&rotate4(&e, &r)?)?));
        orth = orth.max(u.mul(&u.transpose()).max_abs_diff(&KelvinMatrix::identity()));
    }
    verdict(conj < 1e-12 && orth < 1e-13, format!("conjugation {conj:.2e}, |UU^T-I| {orth:.2e}"))
}

fn projector_identities() -> Result<Outcome> {
    let p = projectors();
    let scalars = (p.sph.inner(&p.sph) - 1.0).abs().max((p.dev.inner(&p.dev) - 5.0).abs()).max(p.sph.inner(&p.dev).abs());
    let diff = |a: &Tensor4, b: &Tensor4| a.0.iter().zip(&b.0).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    let zero = Tensor4::zero();
    let products = diff(&p.sph.compose(&p.sph), &p.sph)
        .max(diff(&p.dev.compose(&p.dev), &p.dev))
        .max(diff(&p.sph.compose(&p.dev), &zero))
        .max(diff(&p.dev.compose(&p.sph), &zero));
    verdict(
        scalars < 1e-14 && products < 1e-14,
        format!("inner products {scalars:.2e}, idempotence/annihilation {products:.2e}"),
    )
}

fn christoffel_cross_check(rng: &mut StdRng) -> Result<Outcome> {
    let maps = [CoordMap::polar(), CoordMap::cylindrical(), CoordMap::spherical(), CoordMap::oblique(1.1)];
    let mut worst: f64 = 0.0;
    for map in &maps {
        for _ in 0..100 {
            let z: Vec<f64> = (0..map.dim())
                .map(|i| if i == 1 { rng.gen_range(0.2..2.9) } else { rng.gen_range(0.3..2.0) })
                .collect();
            let a = christoffel(map, &z, ChristoffelMethod::SecondDerivative)?;
            let b = christoffel(map, &z, ChristoffelMethod::MetricDerivative)?;
            worst = worst.max(a.max_abs_diff(&b));
        }
    }
    let mut polar_err: f64 = 0.0;
    for _ in 0..100 {
        let (r, th) = (rng.gen_range(0.1..5.0), rng.gen_range(-PI..PI));
        let g = christoffel(&maps[0], &[r, th], ChristoffelMethod::SecondDerivative)?;
        polar_err = polar_err.max((g.get(0, 1, 1) + r).abs()).max((g.get(1, 0, 1) - 1.0 / r).abs());
    }
    verdict(
        worst < 1e-8 && polar_err < 1e-10,
        format!("route difference {worst:.2e}, polar closed form {polar_err:.2e}"),
    )
}

/// Random polynomial of total degree <= `deg` in x1, x2, x3.
fn random_poly(rng: &mut StdRng, deg: u32) -> String {
    let mut terms = Vec::new();
    for a in 0..=deg {
        for b in 0..=deg - a {
            for c in 0..=deg - a - b {
                terms.push(format!("{:.6}*x1^{a}*x2^{b}*x3^{c}", rng.gen_range(-1.0..1.0)));
            }
        }
    }
    terms.join(" + ")
}

fn field_identities(rng: &mut StdRng) -> Result<Outcome> {
    let vars = ["x1", "x2", "x3"];
    let eps = |i: usize, j: usize, k: usize| ((i as i64 - j as i64) * (j as i64 - k as i64) * (k as i64 - i as i64)) as f64 / 2.0;
    let (mut dc, mut cg): (f64, f64) = (0.0, 0.0);
    for _ in 0..50 {
        let v = [random_poly(rng, 4), random_poly(rng, 4), random_poly(rng, 4)];
        let vm = ExprMap::parse(&[&v[0], &v[1], &v[2]], &vars, &[])?;
        let phi = ExprMap::parse(&[&random_poly(rng, 4)], &vars, &[])?;
        let p: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let dv = vm.derivatives(&p)?;
        let dp = phi.derivatives(&p)?;
        // div curl v = eps_ijk v_k,ji ; (curl grad phi)_i = eps_ijk phi,kj
        let mut s = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    s += eps(i, j, k) * dv.d2[k][j][i];
                }
            }
            let c: f64 = (0..3).flat_map(|j| (0..3).map(move |k| (j, k))).map(|(j, k)| eps(i, j, k) * dp.d2[0][k][j]).sum();
            cg = cg.max(c.abs());
        }
        dc = dc.max(s.abs());
    }
    let cube = IntegrationDomain::Box {
        min: [0.0; 3],
        max: [1.0; 3],
    };
    let mut gauss: f64 = 0.0;
    for _ in 0..10 {
        let v = [random_poly(rng, 3), random_poly(rng, 3), random_poly(rng, 3)];
        let vm = ExprMap::parse(&[&v[0], &v[1], &v[2]], &vars, &[])?;
        gauss = gauss.max(integral_theorem_residual(Theorem::Gauss, &[&vm], &cube, 4)?);
    }
    verdict(
        dc < 1e-9 && cg < 1e-9 && gauss < 1e-10,
        format!("div curl {dc:.2e}, curl grad {cg:.2e}, Gauss cube {gauss:.2e}"),
    )
}

fn geodesics() -> Result<Outcome> {
    // great circle through (1,0,0) with initial heading a from the equator
    let sphere = surface(["cos(u)*cos(v)", "cos(u)*sin(v)", "sin(u)"], (-1.5, 1.5), (-10.0, 10.0))?;
    let a: f64 = 0.7;
    let start = GeodesicState {
        u: 0.0,
        v: 0.0,
        du: a.sin(),
        dv: a.cos(),
        s: 0.0,
    };
    let plane = Vec3::new(0.0, -a.sin(), a.cos());
    let mut circle: f64 = 0.0;
    for st in geodesic_integrate(&sphere, start, 2.0 * PI, 1e-3)? {
        let x = sphere.point(st.u, st.v)?;
        circle = circle.max(x.dot(&plane).abs()).max((x.norm() - 1.0).abs());
    }

    // unit-speed meridians: u' = 1/L(u), u'' = -L'(u)/L^3 with L the profile speed
    let torus = revolution_surface(&profile("2 + cos(t)"), &profile("sin(t)"), (-PI, PI), (0.0, 2.0 * PI))?;
    let catenoid = revolution_surface(&profile("cosh(t)"), &profile("t"), (-1.5, 1.5), (0.0, 2.0 * PI))?;
    let mut meridian: f64 = 0.0;
    for u in interior(-3.0, 3.0, 50) {
        let r = geodesic_residual(&torus, &GeodesicState { u, v: 1.0, du: 1.0, dv: 0.0, s: 0.0 }, 0.0, 0.0)?;
        meridian = meridian.max(r[0].abs()).max(r[1].abs());
    }
    for u in interior(-1.4, 1.4, 50) {
        let (l, dl) = (u.cosh(), u.sinh());
        let st = GeodesicState { u, v: 2.0, du: 1.0 / l, dv: 0.0, s: 0.0 };
        let r = geodesic_residual(&catenoid, &st, -dl / l.powi(3), 0.0)?;
        meridian = meridian.max(r[0].abs()).max(r[1].abs());
    }

    // torus parallels: u0 = 0 has phi'(u0) = 0, u0 = 0.5 does not
    let parallel = |u0: f64| -> Result<f64> {
        let st = GeodesicState { u: u0, v: 0.0, du: 0.0, dv: 1.0 / (2.0 + u0.cos()), s: 0.0 };
        let r = geodesic_residual(&torus, &st, 0.0, 0.0)?;
        Ok(r[0].abs().max(r[1].abs()))
    };
    let (on, off) = (parallel(0.0)?, parallel(0.5)?);
    verdict(
        circle < 1e-6 && meridian < 1e-10 && on < 1e-10 && off > 1e-3,
        format!("great circle {circle:.2e}, meridian residual {meridian:.2e}, parallel u0=0 {on:.2e}, u0=0.5 {off:.2e}"),
    )
}

fn frenet_serret() -> Result<Outcome> {
    let curves = [
        ("helix", curve(["2*cos(t)", "2*sin(t)", "t"], 0.0, 10.0)?),
        ("tractrix", curve(["t - tanh(t)", "1/cosh(t)", "0"], 0.3, 3.0)?),
        ("catenary", curve(["t", "cosh(t)", "0"], -2.0, 2.0)?),
        ("twisted cubic", curve(["t", "t^2", "t^3"], -1.0, 1.0)?),
        ("conical spiral", curve(["t*cos(t)", "t*sin(t)", "t"], 0.5, 6.0)?),
    ];
    let h = 1e-4;
    let mut worst: f64 = 0.0;
    for (_, c) in &curves {
        let (t0, t1) = c.domain();
        for t in interior(t0 + 2.0 * h, t1 - 2.0 * h, 25) {
            let f = c.frenet(t)?;
            let (fp, fm) = (c.frenet(t + h)?, c.frenet(t - h)?);
            let ds = 2.0 * h * c.speed(t)?;
            let d = |a: Vec3, b: Vec3| (a - b) * (1.0 / ds);
            let r1 = d(fp.tau, fm.tau) - f.nu * f.c;
            let r2 = d(fp.nu, fm.nu) + f.tau * f.c + f.beta * f.theta;
            let r3 = d(fp.beta, fm.beta) - f.nu * f.theta;
            worst = worst.max(r1.norm()).max(r2.norm()).max(r3.norm());
        }
    }
    verdict(worst < 1e-5, format!("max frame equation residual {worst:.2e} over 5 curves"))
}

fn cayley_hamilton(rng: &mut StdRng) -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let scale = 10.0_f64.powf(rng.gen_range(-2.0..2.0));
        let l = random_tensor(rng, scale);
        worst = worst.max(l.cayley_hamilton_residual() / l.norm().powi(3));
    }
    verdict(worst < 1e-10, format!("max residual / |L|^3 = {worst:.2e}"))
}

fn main() {
    let mut rng = StdRng::seed_from_u64(7);
    let criteria: Vec<(&str, Result<Outcome>)> = vec![
        ("pseudosphere Gaussian curvature", pseudosphere_curvature()),
        ("minimal surfaces", minimal_surfaces()),
        ("helix curvature and torsion", helix_constants()),
        ("curve reconstruction from curvature and torsion", bonnet_roundtrip()),
        ("intrinsic Gaussian curvature", egregium()),
        ("rotation algebra", rotations(&mut rng)),
        ("polar decomposition", polar_decompositions(&mut rng)),
        ("Kelvin matrix rotation", kelvin(&mut rng)),
        ("projector identities", projector_identities()),
        ("Christoffel symbols", christoffel_cross_check(&mut rng)),
        ("field identities and divergence theorem", field_identities(&mut rng)),
        ("geodesics", geodesics()),
        ("Frenet-Serret equations", frenet_serret()),
        ("Cayley-Hamilton", cayley_hamilton(&mut rng)),
    ];
    let mut failed = 0;
    for (i, (name, outcome)) in criteria.into_iter().enumerate() {
        let (pass, detail) = match outcome {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failed += 1;
        }
        println!("{} criterion {:>2}: {name}: {detail}", if pass { "PASS" } else { "FAIL" }, i + 1);
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
