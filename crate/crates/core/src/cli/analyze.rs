use super::report::{num, Skipped, Table};
use super::scene::{Params, Scene, SceneKind};
use super::{CliError, Output};
use crate::coords::{christoffel, laplacian_curvilinear, metric_at, ChristoffelMethod, CoordMap};
use crate::curve::Curve;
use crate::error::Error;
use crate::expr::ExprMap;
use crate::surface::{
    classify_point, direction_fields, egregium_k, gauss_weingarten_residual, geodesic_integrate_with, surface_area,
    GeodesicOptions, GeodesicRhs, GeodesicState, Surface,
};
use serde_json::{json, Value};

pub const CURVE_TOL: f64 = 1e-10;

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    let n = n.max(2);
    (0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect()
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).unwrap_or(Value::Null)
}

/// Record a numerical failure at one grid point and carry on; anything
/// else aborts the run.
fn skip_or_fail(out: &mut Output, op: &str, e: Error) -> Result<(), CliError> {
    if e.is_validation() {
        return Err(e.into());
    }
    out.report.diagnostics.skipped.push(Skipped {
        op: op.to_string(),
        point: e.point().unwrap_or_default(),
        reason: e.to_string(),
    });
    Ok(())
}

pub fn run_scene(scene: &Scene, out: &mut Output) -> Result<(), CliError> {
    match scene.kind {
        SceneKind::Curve => curve(scene, out),
        SceneKind::Surface => surface(scene, out),
        SceneKind::Coordmap => coordmap(scene, out),
        SceneKind::TensorJob => super::tensor_job::run(scene, out),
    }
}

fn curve(scene: &Scene, out: &mut Output) -> Result<(), CliError> {
    let [t0, t1] = scene.domain[0];
    let tol = out.tol.unwrap_or(CURVE_TOL);
    out.report.diagnostics.tolerances.insert("curve_regularity".into(), tol);
    let c = Curve::new(scene.map()?, t0, t1)?.with_tolerance(tol);
    for (i, req) in scene.requests.iter().enumerate() {
        let p = Params { index: i, map: &req.params };
        let n = p.usize_opt("grid")?.unwrap_or(out.grid);
        let op = req.op.as_str();
        let result = match op {
            "frenet" => {
                let mut t = Table::new(&["t", "x1", "x2", "x3", "c", "theta"]);
                for s in linspace(t0, t1, n) {
                    match c.frenet(s) {
                        Ok(f) => t.push_numbers(&[s, f.point[0], f.point[1], f.point[2], f.c, f.theta]),
                        Err(e) => skip_or_fail(out, op, e)?,
                    }
                }
                out.table(i, op, t)
            }
            "evolute" => {
                let mut t = Table::new(&["t", "x1", "x2", "x3"]);
                for s in linspace(t0, t1, n) {
                    match c.evolute(s) {
                        Ok(e) => t.push_numbers(&[s, e[0], e[1], e[2]]),
                        Err(e @ Error::NonPlanar { .. }) => return Err(e.into()),
                        Err(e) => skip_or_fail(out, op, e)?,
                    }
                }
                out.table(i, op, t)
            }
            "arc_length" => {
                let a = p.f64_opt("t0")?.unwrap_or(t0);
                let b = p.f64_opt("t1")?.unwrap_or(t1);
                json!({"t0": a, "t1": b, "length": c.arc_length(a, b)?})
            }
            "osculating" => {
                let t = p.f64("t")?;
                json!({"t": t, "osculating": to_value(&c.osculating(t)?), "frenet": to_value(&c.frenet(t)?)})
            }
            "canonical" => {
                let t = p.f64("t")?;
                json!({"t": t, "coefficients": to_value(&c.canonical_coefficients(t)?)})
            }
            _ => unreachable!("validated"),
        };
        out.push(op, result);
    }
    Ok(())
}

fn surface(scene: &Scene, out: &mut Output) -> Result<(), CliError> {
    let (ur, vr) = ((scene.domain[0][0], scene.domain[0][1]), (scene.domain[1][0], scene.domain[1][1]));
    let s = Surface::new(scene.map()?, ur, vr)?;
    for (i, req) in scene.requests.iter().enumerate() {
        let p = Params { index: i, map: &req.params };
        let n = p.usize_opt("grid")?.unwrap_or(out.grid);
        let op = req.op.as_str();
        let grid: Vec<(f64, f64)> = linspace(ur.0, ur.1, n)
            .into_iter()
            .flat_map(|u| linspace(vr.0, vr.1, n).into_iter().map(move |v| (u, v)))
            .collect();
        let result = match op {
            "gauss_curvature" | "mean_curvature" => {
                let col = if op == "gauss_curvature" { "K" } else { "H" };
                let mut t = Table::new(&["u", "v", col]);
                let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
                for &(u, v) in &grid {
                    match s.jet_at(u, v) {
                        Ok(j) => {
                            let x = if op == "gauss_curvature" { j.gauss } else { j.mean };
                            lo = lo.min(x);
                            hi = hi.max(x);
                            t.push_numbers(&[u, v, x]);
                        }
                        Err(e) => skip_or_fail(out, op, e)?,
                    }
                }
                let mut r = out.table(i, op, t);
                r["min"] = num(lo);
                r["max"] = num(hi);
                r
            }
            "classify" => {
                let mut t = Table::new(&["u", "v", "class"]);
                let mut counts = std::collections::BTreeMap::<String, u64>::new();
                for &(u, v) in &grid {
                    match s.jet_at(u, v) {
                        Ok(j) => {
                            let class = to_value(&classify_point(&j));
                            *counts.entry(class.as_str().unwrap_or("").to_string()).or_default() += 1;
                            t.rows.push(vec![num(u), num(v), class]);
                        }
                        Err(e) => skip_or_fail(out, op, e)?,
                    }
                }
                let mut r = out.table(i, op, t);
                r["counts"] = to_value(&counts);
                r
            }
            "egregium" => {
                let mut t = Table::new(&["u", "v", "K_extrinsic", "K_intrinsic"]);
                let mut worst: f64 = 0.0;
                for &(u, v) in &grid {
                    match s.jet_at(u, v).and_then(|j| Ok((j.gauss, egregium_k(&s, u, v)?))) {
                        Ok((a, b)) => {
                            worst = worst.max((a - b).abs());
                            t.push_numbers(&[u, v, a, b]);
                        }
                        Err(e) => skip_or_fail(out, op, e)?,
                    }
                }
                let mut r = out.table(i, op, t);
                r["max_difference"] = num(worst);
                r
            }
            "gauss_weingarten" => {
                let (mut g, mut w) = (0.0f64, 0.0f64);
                for &(u, v) in &grid {
                    match gauss_weingarten_residual(&s, u, v) {
                        Ok((a, b)) => {
                            g = g.max(a);
                            w = w.max(b);
                        }
                        Err(e) => skip_or_fail(out, op, e)?,
                    }
                }
                json!({"gauss_residual": g, "weingarten_residual": w, "scale": s.scale()})
            }
            "fundamental_forms" | "directions" => {
                let (u, v) = (p.f64("u")?, p.f64("v")?);
                let j = s.jet_at(u, v)?;
                let mut r = json!({"u": u, "v": v, "class": to_value(&classify_point(&j))});
                if op == "fundamental_forms" {
                    r["jet"] = to_value(&j);
                } else {
                    r["directions"] = to_value(&direction_fields(&j)?);
                }
                r
            }
            "area" => {
                let a: [f64; 2] = p.get_opt("u_range", "[min, max]")?.unwrap_or([ur.0, ur.1]);
                let b: [f64; 2] = p.get_opt("v_range", "[min, max]")?.unwrap_or([vr.0, vr.1]);
                let order = p.usize_opt("order")?.unwrap_or(16);
                json!({"u_range": a, "v_range": b, "order": order, "area": surface_area(&s, (a[0], a[1]), (b[0], b[1]), order)?})
            }
            "geodesic" => geodesic(&s, &p, n, i, out)?,
            _ => unreachable!("validated"),
        };
        out.push(op, result);
    }
    Ok(())
}

fn geodesic(s: &Surface, p: &Params, n: usize, i: usize, out: &mut Output) -> Result<Value, CliError> {
    let (u, v) = (p.f64("u")?, p.f64("v")?);
    let (du, dv) = (p.f64("du")?, p.f64("dv")?);
    let s_max = p.f64_opt("s_max")?.unwrap_or(1.0);
    let step = p.f64_opt("step")?.unwrap_or(1e-3);
    let rhs = match p.str_opt("rhs")? {
        None | Some("christoffel") => GeodesicRhs::Christoffel,
        Some("euler_lagrange") => GeodesicRhs::EulerLagrange,
        Some(other) => return Err(CliError::Validation(format!("requests[{i}].params.rhs: unknown `{other}`"))),
    };
    let g = s.metric(u, v)?;
    let speed = (g[0][0] * du * du + 2.0 * g[0][1] * du * dv + g[1][1] * dv * dv).sqrt();
    if !(speed > 0.0) {
        return Err(CliError::Validation(format!("requests[{i}].params: initial velocity is zero")));
    }
    let start = GeodesicState {
        u,
        v,
        du: du / speed,
        dv: dv / speed,
        s: 0.0,
    };
    let opts = GeodesicOptions {
        step,
        rhs,
        drift_tol: p.f64_opt("drift_tol")?,
    };
    let traj = geodesic_integrate_with(s, start, s_max, &opts)?;
    let every = p.usize_opt("every")?.unwrap_or((traj.len() / n.max(1)).max(1));
    let mut t = Table::new(&["s", "u", "v", "x1", "x2", "x3"]);
    let mut drift: f64 = 0.0;
    for (k, st) in traj.iter().enumerate() {
        let g = s.metric(st.u, st.v)?;
        let sp = g[0][0] * st.du * st.du + 2.0 * g[0][1] * st.du * st.dv + g[1][1] * st.dv * st.dv;
        drift = drift.max((sp.sqrt() - 1.0).abs());
        if k % every == 0 || k + 1 == traj.len() {
            let x = s.point(st.u, st.v)?;
            t.push_numbers(&[st.s, st.u, st.v, x[0], x[1], x[2]]);
        }
    }
    let mut r = out.table(i, "geodesic", t);
    r["speed_drift"] = num(drift);
    r["steps"] = json!(traj.len() - 1);
    Ok(r)
}

fn coordmap(scene: &Scene, out: &mut Output) -> Result<(), CliError> {
    let map = CoordMap::new(scene.map()?)?;
    for (i, req) in scene.requests.iter().enumerate() {
        let p = Params { index: i, map: &req.params };
        let z: Vec<f64> = p.get("point", "an array of coordinates")?;
        let op = req.op.as_str();
        let result = match op {
            "metric" => {
                let m = metric_at(&map, &z)?;
                json!({"point": z, "covariant": m.cov, "contravariant": m.con, "det": m.det})
            }
            "christoffel" => {
                let method = match p.str_opt("method")? {
                    None | Some("second_derivative") => ChristoffelMethod::SecondDerivative,
                    Some("metric_derivative") => ChristoffelMethod::MetricDerivative,
                    Some(o) => return Err(CliError::Validation(format!("requests[{i}].params.method: unknown `{o}`"))),
                };
                let g = christoffel(&map, &z, method)?;
                let other = christoffel(
                    &map,
                    &z,
                    if method == ChristoffelMethod::SecondDerivative {
                        ChristoffelMethod::MetricDerivative
                    } else {
                        ChristoffelMethod::SecondDerivative
                    },
                )?;
                let n = g.n;
                let nested: Vec<Vec<Vec<f64>>> =
                    (0..n).map(|h| (0..n).map(|k| (0..n).map(|l| g.get(h, k, l)).collect()).collect()).collect();
                json!({"point": z, "method": to_value(&method), "symbols": nested, "method_difference": g.max_abs_diff(&other)})
            }
            "laplacian" => {
                let src: String = p.get("field", "an expression string")?;
                let f = ExprMap::parse_owned(&[src], scene.variables.clone(), scene.constants())
                    .map_err(|e| CliError::Validation(format!("requests[{i}].params.field: {e}")))?;
                json!({"point": z, "laplacian": laplacian_curvilinear(&map, &f, &z)?})
            }
            _ => unreachable!("validated"),
        };
        out.push(op, result);
    }
    Ok(())
}
