//! Python bindings for tensorgeo.

use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;
use std::collections::HashMap;
use tensorgeo::coords::{self, ChristoffelMethod, CoordMap, DiffOp, FieldKind, System};
use tensorgeo::curve::{self, CurvatureProfile, ProfileFn};
use tensorgeo::expr::ExprMap;
use tensorgeo::surface::{self, GeodesicState};
use tensorgeo::tensor2::{self, AxisAngle, Tensor2, Vec3};
use tensorgeo::tensor4;

type M3 = [[f64; 3]; 3];

fn to_py(e: tensorgeo::Error) -> PyErr {
    if e.is_validation() {
        PyValueError::new_err(e.to_string())
    } else {
        PyArithmeticError::new_err(e.to_string())
    }
}

fn parse_map(components: &[String], variables: &[String], constants: Option<HashMap<String, f64>>) -> PyResult<ExprMap> {
    let mut consts: Vec<(String, f64)> = constants.unwrap_or_default().into_iter().collect();
    consts.sort_by(|a, b| a.0.cmp(&b.0));
    ExprMap::parse_owned(components, variables.to_vec(), consts).map_err(to_py)
}

fn enum_from<T: serde::de::DeserializeOwned>(name: &str, what: &str) -> PyResult<T> {
    serde_json::from_value(serde_json::Value::String(name.into()))
        .map_err(|_| PyValueError::new_err(format!("unknown {what} `{name}`")))
}

/// Vector-valued expression map over named variables.
#[pyclass(name = "Expr", frozen)]
struct PyExpr(ExprMap);

#[pymethods]
impl PyExpr {
    #[new]
    #[pyo3(signature = (components, variables, constants=None))]
    fn new(components: Vec<String>, variables: Vec<String>, constants: Option<HashMap<String, f64>>) -> PyResult<Self> {
        Ok(PyExpr(parse_map(&components, &variables, constants)?))
    }

    #[getter]
    fn arity(&self) -> usize {
        self.0.arity()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn eval(&self, point: Vec<f64>) -> PyResult<Vec<f64>> {
        self.0.eval(&point).map_err(to_py)
    }

    /// `(value, jacobian, hessians)` with `hessians[k][i][j]`.
    #[allow(clippy::type_complexity)]
    fn derivatives(&self, point: Vec<f64>) -> PyResult<(Vec<f64>, Vec<Vec<f64>>, Vec<Vec<Vec<f64>>>)> {
        let d = self.0.derivatives(&point).map_err(to_py)?;
        Ok((d.value, d.d1, d.d2))
    }

    fn unparse(&self) -> Vec<String> {
        self.0.unparse()
    }

    fn __repr__(&self) -> String {
        format!("Expr({:?}, {:?})", self.0.unparse(), self.0.variables())
    }
}

#[pyclass(name = "Curve", frozen)]
struct PyCurve(curve::Curve);

#[pymethods]
impl PyCurve {
    #[new]
    #[pyo3(signature = (components, t_range, constants=None, variable="t".to_string()))]
    fn new(components: Vec<String>, t_range: (f64, f64), constants: Option<HashMap<String, f64>>, variable: String) -> PyResult<Self> {
        let m = parse_map(&components, &[variable], constants)?;
        Ok(PyCurve(curve::Curve::new(m, t_range.0, t_range.1).map_err(to_py)?))
    }

    fn point(&self, t: f64) -> PyResult<[f64; 3]> {
        Ok(self.0.point(t).map_err(to_py)?.0)
    }

    /// Frame, curvature and torsion at `t`.
    fn frenet<'py>(&self, py: Python<'py>, t: f64) -> PyResult<Bound<'py, PyDict>> {
        let f = self.0.frenet(t).map_err(to_py)?;
        let d = PyDict::new(py);
        d.set_item("point", f.point.0)?;
        d.set_item("tangent", f.tau.0)?;
        d.set_item("normal", f.nu.0)?;
        d.set_item("binormal", f.beta.0)?;
        d.set_item("curvature", f.c)?;
        d.set_item("torsion", f.theta)?;
        Ok(d)
    }

    #[pyo3(signature = (t0=None, t1=None))]
    fn arc_length(&self, t0: Option<f64>, t1: Option<f64>) -> PyResult<f64> {
        let (a, b) = self.0.domain();
        self.0.arc_length(t0.unwrap_or(a), t1.unwrap_or(b)).map_err(to_py)
    }

    /// Osculating circle as `(center, radius)`.
    fn osculating_circle(&self, t: f64) -> PyResult<([f64; 3], f64)> {
        let o = self.0.osculating(t).map_err(to_py)?;
        Ok((o.circle_center.0, o.circle_radius))
    }
}

#[pyclass(name = "Surface", frozen)]
struct PySurface(surface::Surface);

#[pymethods]
impl PySurface {
    #[new]
    #[pyo3(signature = (components, u_range, v_range, constants=None, variables=("u".to_string(), "v".to_string())))]
    fn new(
        components: Vec<String>,
        u_range: (f64, f64),
        v_range: (f64, f64),
        constants: Option<HashMap<String, f64>>,
        variables: (String, String),
    ) -> PyResult<Self> {
        let m = parse_map(&components, &[variables.0, variables.1], constants)?;
        Ok(PySurface(surface::Surface::new(m, u_range, v_range).map_err(to_py)?))
    }

    /// Surface of revolution from profile expressions in `t`.
    #[staticmethod]
    fn revolution(radius: String, height: String, u_range: (f64, f64), v_range: (f64, f64)) -> PyResult<Self> {
        let t = ["t".to_string()];
        let phi = parse_map(&[radius], &t, None)?;
        let psi = parse_map(&[height], &t, None)?;
        Ok(PySurface(surface::revolution_surface(&phi, &psi, u_range, v_range).map_err(to_py)?))
    }

    fn point(&self, u: f64, v: f64) -> PyResult<[f64; 3]> {
        Ok(self.0.point(u, v).map_err(to_py)?.0)
    }

    /// Fundamental forms, curvatures and principal directions at `(u, v)`.
    fn local<'py>(&self, py: Python<'py>, u: f64, v: f64) -> PyResult<Bound<'py, PyDict>> {
        let j = self.0.jet_at(u, v).map_err(to_py)?;
        let d = PyDict::new(py);
        d.set_item("point", j.point.0)?;
        d.set_item("normal", j.normal.0)?;
        d.set_item("first_form", j.g)?;
        d.set_item("second_form", j.b)?;
        d.set_item("principal_curvatures", (j.k1, j.k2))?;
        d.set_item("principal_directions", (j.d1, j.d2))?;
        d.set_item("umbilic", j.umbilic)?;
        d.set_item("gauss", j.gauss)?;
        d.set_item("mean", j.mean)?;
        d.set_item("class", format!("{:?}", surface::classify_point(&j)).to_lowercase())?;
        Ok(d)
    }

    fn gauss_curvature(&self, u: f64, v: f64) -> PyResult<f64> {
        Ok(self.0.jet_at(u, v).map_err(to_py)?.gauss)
    }

    fn mean_curvature(&self, u: f64, v: f64) -> PyResult<f64> {
        Ok(self.0.jet_at(u, v).map_err(to_py)?.mean)
    }

    /// Gaussian curvature from the metric alone.
    fn intrinsic_curvature(&self, u: f64, v: f64) -> PyResult<f64> {
        surface::egregium_k(&self.0, u, v).map_err(to_py)
    }

    #[pyo3(signature = (u_range=None, v_range=None, order=16))]
    fn area(&self, u_range: Option<(f64, f64)>, v_range: Option<(f64, f64)>, order: usize) -> PyResult<f64> {
        let ur = u_range.unwrap_or(self.0.u_range());
        let vr = v_range.unwrap_or(self.0.v_range());
        surface::surface_area(&self.0, ur, vr, order).map_err(to_py)
    }

    /// RK4 geodesic; returns `(s, u, v)` samples.
    #[pyo3(signature = (u, v, du, dv, length, step=1e-3))]
    fn geodesic(&self, u: f64, v: f64, du: f64, dv: f64, length: f64, step: f64) -> PyResult<Vec<(f64, f64, f64)>> {
        let start = GeodesicState { u, v, du, dv, s: 0.0 };
        let traj = surface::geodesic_integrate(&self.0, start, length, step).map_err(to_py)?;
        Ok(traj.iter().map(|st| (st.s, st.u, st.v)).collect())
    }
}

fn t2(m: M3) -> Tensor2 {
    Tensor2(m)
}

#[pyfunction]
fn invariants(tensor: M3) -> [f64; 3] {
    t2(tensor).invariants()
}

#[pyfunction]
fn cayley_hamilton_residual(tensor: M3) -> f64 {
    t2(tensor).cayley_hamilton_residual()
}

/// Eigenvalues and eigenvectors (as rows) of a symmetric tensor.
#[pyfunction]
fn eigen_sym(tensor: M3) -> PyResult<([f64; 3], M3)> {
    let e = tensor2::eigen_sym(&t2(tensor)).map_err(to_py)?;
    Ok((e.values, e.vectors.map(|v| v.0)))
}

#[pyfunction]
fn sqrt_spd(tensor: M3) -> PyResult<M3> {
    Ok(tensor2::sqrt_spd(&t2(tensor)).map_err(to_py)?.0)
}

/// `F = R U = V R`; returns `(R, U, V)`.
#[pyfunction]
fn polar(tensor: M3) -> PyResult<(M3, M3, M3)> {
    let p = tensor2::polar(&t2(tensor)).map_err(to_py)?;
    Ok((p.r.0, p.u.0, p.v.0))
}

#[pyfunction]
fn rotation(axis: [f64; 3], angle: f64) -> PyResult<M3> {
    Ok(tensor2::rotation_from_axis_angle(&AxisAngle { axis: Vec3(axis), angle }).map_err(to_py)?.0)
}

#[pyfunction]
fn axis_angle(rotation: M3) -> PyResult<([f64; 3], f64)> {
    let a = tensor2::rotation_to_axis_angle(&t2(rotation)).map_err(to_py)?;
    Ok((a.axis.0, a.angle))
}

/// 6x6 Kelvin matrix of an isotropic stiffness.
#[pyfunction]
fn isotropic_kelvin(lam: f64, mu: f64) -> PyResult<[[f64; 6]; 6]> {
    Ok(tensor4::to_kelvin(&tensor4::isotropic(lam, mu)).map_err(to_py)?.0)
}

/// Rotate a stiffness given by its Kelvin matrix.
#[pyfunction]
fn rotate_kelvin(kelvin: [[f64; 6]; 6], rotation: M3) -> PyResult<[[f64; 6]; 6]> {
    let e = tensor4::from_kelvin(&tensor4::KelvinMatrix(kelvin));
    let r = tensor4::rotate4(&e, &t2(rotation)).map_err(to_py)?;
    Ok(tensor4::to_kelvin(&r).map_err(to_py)?.0)
}

fn coord_map(system: &str, alpha: Option<f64>) -> PyResult<CoordMap> {
    Ok(match system {
        "polar" => CoordMap::polar(),
        "cylindrical" => CoordMap::cylindrical(),
        "spherical" => CoordMap::spherical(),
        "oblique" => CoordMap::oblique(alpha.unwrap_or(std::f64::consts::FRAC_PI_3)),
        "cartesian" => CoordMap::cartesian(3),
        _ => return Err(PyValueError::new_err(format!("unknown coordinate system `{system}`"))),
    })
}

/// Christoffel symbols `G[h][k][l]` of a built-in coordinate system.
#[pyfunction]
#[pyo3(signature = (system, point, alpha=None, method="second_derivative"))]
fn christoffel(system: &str, point: Vec<f64>, alpha: Option<f64>, method: &str) -> PyResult<Vec<Vec<Vec<f64>>>> {
    let map = coord_map(system, alpha)?;
    let method = match method {
        "second_derivative" => ChristoffelMethod::SecondDerivative,
        "metric" => ChristoffelMethod::MetricDerivative,
        _ => return Err(PyValueError::new_err(format!("unknown method `{method}`"))),
    };
    let g = coords::christoffel(&map, &point, method).map_err(to_py)?;
    let n = g.n;
    Ok((0..n).map(|h| (0..n).map(|k| (0..n).map(|l| g.get(h, k, l)).collect()).collect()).collect())
}

/// Grad, div, curl or Laplacian of physical components in cartesian,
/// cylindrical or spherical coordinates.
#[pyfunction]
#[pyo3(signature = (system, kind, op, components, variables, point, constants=None))]
fn diff_op(
    system: &str,
    kind: &str,
    op: &str,
    components: Vec<String>,
    variables: Vec<String>,
    point: Vec<f64>,
    constants: Option<HashMap<String, f64>>,
) -> PyResult<Vec<f64>> {
    let system: System = enum_from(system, "system")?;
    let kind: FieldKind = enum_from(kind, "field kind")?;
    let op: DiffOp = enum_from(op, "operator")?;
    let field = parse_map(&components, &variables, constants)?;
    coords::diff_ops(system, kind, op, &field, &point).map_err(to_py)
}

/// Rebuild a curve from curvature and torsion expressions in `s`.
#[pyfunction]
#[pyo3(signature = (curvature, torsion, s_range, step=1e-3))]
fn reconstruct(curvature: String, torsion: String, s_range: (f64, f64), step: f64) -> PyResult<(Vec<f64>, Vec<[f64; 3]>)> {
    let s = ["s".to_string()];
    let profile = CurvatureProfile {
        curvature: ProfileFn::Expr(parse_map(&[curvature], &s, None)?),
        torsion: ProfileFn::Expr(parse_map(&[torsion], &s, None)?),
        s_range,
    };
    let out = curve::bonnet_reconstruct(&profile, Vec3::ZERO, [Vec3::e(0), Vec3::e(1), Vec3::e(2)], step).map_err(to_py)?;
    Ok((out.s, out.points.iter().map(|p| p.0).collect()))
}

/// Run the command-line tool with `args` (without the program name).
#[pyfunction]
fn run_cli(args: Vec<String>) -> i32 {
    tensorgeo::cli::run(std::iter::once("tensorgeo".to_string()).chain(args))
}

#[pymodule]
fn tensorgeo_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyExpr>()?;
    m.add_class::<PyCurve>()?;
    m.add_class::<PySurface>()?;
    m.add_function(wrap_pyfunction!(invariants, m)?)?;
    m.add_function(wrap_pyfunction!(cayley_hamilton_residual, m)?)?;
    m.add_function(wrap_pyfunction!(eigen_sym, m)?)?;
    m.add_function(wrap_pyfunction!(sqrt_spd, m)?)?;
    m.add_function(wrap_pyfunction!(polar, m)?)?;
    m.add_function(wrap_pyfunction!(rotation, m)?)?;
    m.add_function(wrap_pyfunction!(axis_angle, m)?)?;
    m.add_function(wrap_pyfunction!(isotropic_kelvin, m)?)?;
    m.add_function(wrap_pyfunction!(rotate_kelvin, m)?)?;
    m.add_function(wrap_pyfunction!(christoffel, m)?)?;
    m.add_function(wrap_pyfunction!(diff_op, m)?)?;
    m.add_function(wrap_pyfunction!(reconstruct, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enum_names_follow_serde() {
        assert!(matches!(enum_from::<System>("spherical", "system"), Ok(System::Spherical)));
        assert!(matches!(enum_from::<DiffOp>("laplacian", "operator"), Ok(DiffOp::Laplacian)));
        assert!(enum_from::<FieldKind>("matrix", "field kind").is_err());
    }

    #[test]
    fn builtin_systems() {
        assert_eq!(coord_map("oblique", Some(1.0)).unwrap().dim(), 3);
        assert_eq!(coord_map("polar", None).unwrap().dim(), 2);
        assert!(coord_map("toroidal", None).is_err());
    }

    #[test]
    fn constants_are_bound() {
        let mut c = HashMap::new();
        c.insert("k".to_string(), 2.0);
        let m = parse_map(&["k*x".to_string()], &["x".to_string()], Some(c)).unwrap();
        assert_eq!(m.eval(&[3.0]).unwrap(), vec![6.0]);
    }
}
