use super::scene::{Params, Scene};
use super::{CliError, Output};
use crate::tensor2::{
    change_basis_tensor, change_basis_vector, determinant_suite, eigen_sym, polar, rotation_composed,
    rotation_from_axis_angle, rotation_to_axis_angle, sqrt_spd, AngleKind, AxisAngle, Tensor2, Vec3,
};
use crate::tensor4::{isotropic, projectors, rotate4, to_kelvin, Tensor4};
use serde_json::{json, Value};

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).unwrap_or(Value::Null)
}

fn tensor(p: &Params, key: &str) -> Result<Tensor2, CliError> {
    Ok(Tensor2(p.get(key, "a 3x3 array")?))
}

/// `tensor4` as 81 numbers in `ijkl` order, or `isotropic: {lambda, mu}`.
fn tensor4(p: &Params) -> Result<Tensor4, CliError> {
    if let Some(iso) = p.get_opt::<serde_json::Map<String, Value>>("isotropic", "{lambda, mu}")? {
        let q = Params { index: p.index, map: &iso };
        return Ok(isotropic(q.f64("lambda")?, q.f64("mu")?));
    }
    let v: Vec<f64> = p.get("tensor4", "81 numbers")?;
    let arr: [f64; 81] = v
        .try_into()
        .map_err(|_| CliError::Validation(format!("requests[{}].params.tensor4: expected 81 numbers", p.index)))?;
    Ok(Tensor4(arr))
}

/// A rotation given directly, by axis and angle, or by three angles.
fn rotation(p: &Params) -> Result<Tensor2, CliError> {
    if p.map.contains_key("rotation") {
        return tensor(p, "rotation");
    }
    if let Some(kind) = p.get_opt::<AngleKind>("kind", "euler, coordinate or physical")? {
        let angles: [f64; 3] = p.get("angles", "three angles")?;
        return Ok(rotation_composed(kind, angles));
    }
    let axis: [f64; 3] = p.get("axis", "a unit vector")?;
    Ok(rotation_from_axis_angle(&AxisAngle {
        axis: Vec3(axis),
        angle: p.f64("angle")?,
    })?)
}

pub fn run(scene: &Scene, out: &mut Output) -> Result<(), CliError> {
    for (i, req) in scene.requests.iter().enumerate() {
        let p = Params { index: i, map: &req.params };
        let op = req.op.as_str();
        let result = match op {
            "invariants" => {
                let l = tensor(&p, "tensor")?;
                let mut r = to_value(&determinant_suite(&l));
                r["cayley_hamilton_residual"] = json!(l.cayley_hamilton_residual());
                r
            }
            "eigen" => to_value(&eigen_sym(&tensor(&p, "tensor")?)?),
            "sqrt" => json!({"root": sqrt_spd(&tensor(&p, "tensor")?)?}),
            "polar" => to_value(&polar(&tensor(&p, "tensor")?)?),
            "axis_angle" => to_value(&rotation_to_axis_angle(&tensor(&p, "tensor")?)?),
            "rotation" => {
                let r = rotation(&p)?;
                json!({"rotation": r, "det": r.det()})
            }
            "change_basis" => {
                let r = rotation(&p)?;
                if p.map.contains_key("vector") {
                    let u: [f64; 3] = p.get("vector", "three numbers")?;
                    json!({"vector": change_basis_vector(&Vec3(u), &r)})
                } else {
                    json!({"tensor": change_basis_tensor(&tensor(&p, "tensor")?, &r)})
                }
            }
            "kelvin" => {
                let l = tensor4(&p)?;
                let sym = l.symmetry();
                json!({
                    "symmetry": sym,
                    "independent_components": sym.independent_components(),
                    "kelvin": to_kelvin(&l)?.0,
                })
            }
            "rotate4" => {
                let l = tensor4(&p)?;
                let r = rotation(&p)?;
                json!({"kelvin": to_kelvin(&rotate4(&l, &r)?)?.0})
            }
            "projectors" => {
                let pr = projectors();
                json!({
                    "sph_sph": pr.sph.inner(&pr.sph),
                    "dev_dev": pr.dev.inner(&pr.dev),
                    "sph_dev": pr.sph.inner(&pr.dev),
                    "sph_idempotence": (pr.sph.compose(&pr.sph).0.iter().zip(&pr.sph.0)).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max),
                    "dev_idempotence": (pr.dev.compose(&pr.dev).0.iter().zip(&pr.dev.0)).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max),
                })
            }
            _ => unreachable!("validated"),
        };
        out.push(op, result);
    }
    Ok(())
}
