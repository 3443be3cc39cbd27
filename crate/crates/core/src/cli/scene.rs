use super::report::check_schema_version;
use super::CliError;
use crate::expr::ExprMap;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use std::collections::BTreeMap;
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SceneKind {
    Curve,
    Surface,
    Coordmap,
    TensorJob,
}

impl SceneKind {
    pub fn ops(self) -> &'static [&'static str] {
        match self {
            SceneKind::Curve => &["frenet", "arc_length", "osculating", "evolute", "canonical"],
            SceneKind::Surface => &[
                "gauss_curvature",
                "mean_curvature",
                "classify",
                "fundamental_forms",
                "directions",
                "egregium",
                "gauss_weingarten",
                "area",
                "geodesic",
            ],
            SceneKind::Coordmap => &["metric", "christoffel", "laplacian"],
            SceneKind::TensorJob => &[
                "invariants",
                "eigen",
                "sqrt",
                "polar",
                "axis_angle",
                "rotation",
                "change_basis",
                "kelvin",
                "rotate4",
                "projectors",
            ],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Request {
    pub op: String,
    #[serde(default)]
    pub params: Map<String, Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scene {
    #[serde(default)]
    pub schema_version: Option<u64>,
    pub kind: SceneKind,
    #[serde(default)]
    pub components: Vec<String>,
    #[serde(default)]
    pub variables: Vec<String>,
    #[serde(default)]
    pub constants: BTreeMap<String, f64>,
    #[serde(default)]
    pub domain: Vec<[f64; 2]>,
    pub requests: Vec<Request>,
}

/// Bonnet input: curvature and torsion as expressions in `variable` or as
/// `[[s, value], ...]` tables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileSpec {
    #[serde(default)]
    pub schema_version: Option<u64>,
    pub curvature: ProfileValue,
    pub torsion: ProfileValue,
    #[serde(default = "default_variable")]
    pub variable: String,
    #[serde(default)]
    pub constants: BTreeMap<String, f64>,
    pub s_range: [f64; 2],
    #[serde(default = "default_step")]
    pub step: f64,
    #[serde(default)]
    pub origin: Option<[f64; 3]>,
    /// Rows tau, nu, beta.
    #[serde(default)]
    pub frame: Option<[[f64; 3]; 3]>,
    /// Keep every n-th integration step in the output.
    #[serde(default)]
    pub every: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ProfileValue {
    Expr(String),
    Table(Vec<[f64; 2]>),
}

fn default_variable() -> String {
    "s".into()
}

fn default_step() -> f64 {
    1e-3
}

pub fn read_json(path: &Path) -> Result<(Value, String), CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
    Ok((v, text))
}

fn typed<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> Result<T, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| CliError::Validation(format!("{what}: {} at `{}`", e.inner(), e.path())))
}

pub fn parse_scene(text: &str) -> Result<(Scene, Value), CliError> {
    let v: Value = serde_json::from_str(text).map_err(|e| CliError::Validation(format!("scene: {e}")))?;
    check_schema_version(&v, "scene")?;
    let scene: Scene = typed(text, "scene")?;
    scene.validate()?;
    Ok((scene, v))
}

pub fn parse_profile(text: &str) -> Result<(ProfileSpec, Value), CliError> {
    let v: Value = serde_json::from_str(text).map_err(|e| CliError::Validation(format!("profile: {e}")))?;
    check_schema_version(&v, "profile")?;
    let p: ProfileSpec = typed(text, "profile")?;
    let [a, b] = p.s_range;
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(CliError::Validation("profile: `s_range` must be finite with min < max".into()));
    }
    if !(p.step > 0.0 && p.step.is_finite()) {
        return Err(CliError::Validation("profile: `step` must be positive".into()));
    }
    Ok((p, v))
}

impl Scene {
    fn validate(&self) -> Result<(), CliError> {
        let bad = |m: String| Err(CliError::Validation(format!("scene: {m}")));
        for (i, r) in self.requests.iter().enumerate() {
            if !self.kind.ops().contains(&r.op.as_str()) {
                return bad(format!(
                    "requests[{i}].op `{}` is not available for {:?} scenes (choose from {})",
                    r.op,
                    self.kind,
                    self.kind.ops().join(", ")
                ));
            }
        }
        for (i, [a, b]) in self.domain.iter().enumerate() {
            if !(a.is_finite() && b.is_finite() && a < b) {
                return bad(format!("domain[{i}] must be finite with min < max"));
            }
        }
        let (vars, dims): (usize, &[usize]) = match self.kind {
            SceneKind::Curve => (1, &[2, 3]),
            SceneKind::Surface => (2, &[3]),
            SceneKind::Coordmap => (self.variables.len(), &[1, 2, 3]),
            SceneKind::TensorJob => return Ok(()),
        };
        if self.variables.len() != vars || !dims.contains(&self.components.len()) {
            return bad(format!(
                "{:?} scenes need {vars} variable(s) and {dims:?} components, got {} and {}",
                self.kind,
                self.variables.len(),
                self.components.len()
            ));
        }
        if self.kind == SceneKind::Coordmap && self.components.len() != vars {
            return bad("a coordinate map needs as many components as variables".into());
        }
        if self.kind != SceneKind::Coordmap && self.domain.len() != vars {
            return bad(format!("`domain` needs {vars} interval(s)"));
        }
        Ok(())
    }

    pub fn constants(&self) -> Vec<(String, f64)> {
        self.constants.iter().map(|(k, v)| (k.clone(), *v)).collect()
    }

    pub fn map(&self) -> Result<ExprMap, CliError> {
        for (i, c) in self.components.iter().enumerate() {
            ExprMap::parse_owned(&[c], self.variables.clone(), self.constants())
                .map_err(|e| CliError::Validation(format!("components[{i}]: {e}")))?;
        }
        ExprMap::parse_owned(&self.components, self.variables.clone(), self.constants()).map_err(CliError::from)
    }
}

/// Typed access to a request's parameters with the path in error messages.
pub struct Params<'a> {
    pub index: usize,
    pub map: &'a Map<String, Value>,
}

impl Params<'_> {
    fn err(&self, key: &str, what: &str) -> CliError {
        CliError::Validation(format!("requests[{}].params.{key}: expected {what}", self.index))
    }

    pub fn f64_opt(&self, key: &str) -> Result<Option<f64>, CliError> {
        match self.map.get(key) {
            None => Ok(None),
            Some(v) => v.as_f64().map(Some).ok_or_else(|| self.err(key, "a number")),
        }
    }

    pub fn f64(&self, key: &str) -> Result<f64, CliError> {
        self.f64_opt(key)?.ok_or_else(|| self.err(key, "a number"))
    }

    pub fn usize_opt(&self, key: &str) -> Result<Option<usize>, CliError> {
        match self.map.get(key) {
            None => Ok(None),
            Some(v) => v.as_u64().map(|x| Some(x as usize)).ok_or_else(|| self.err(key, "a non-negative integer")),
        }
    }

    pub fn str_opt(&self, key: &str) -> Result<Option<&str>, CliError> {
        match self.map.get(key) {
            None => Ok(None),
            Some(v) => v.as_str().map(Some).ok_or_else(|| self.err(key, "a string")),
        }
    }

    pub fn get<T: for<'de> Deserialize<'de>>(&self, key: &str, what: &str) -> Result<T, CliError> {
        let v = self.map.get(key).ok_or_else(|| self.err(key, what))?;
        serde_json::from_value(v.clone()).map_err(|_| self.err(key, what))
    }

    pub fn get_opt<T: for<'de> Deserialize<'de>>(&self, key: &str, what: &str) -> Result<Option<T>, CliError> {
        if self.map.contains_key(key) {
            self.get(key, what).map(Some)
        } else {
            Ok(None)
        }
    }
}

pub fn load_scene(path: &Path) -> Result<(Scene, Value), CliError> {
    let (_, text) = read_json(path)?;
    parse_scene(&text)
}

pub fn load_profile(path: &Path) -> Result<(ProfileSpec, Value), CliError> {
    let (_, text) = read_json(path)?;
    parse_profile(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_op_is_a_validation_error() {
        let text = r#"{"kind": "curve", "components": ["t", "t^2"], "variables": ["t"],
                       "domain": [[0, 1]], "requests": [{"op": "gauss_curvature"}]}"#;
        let err = parse_scene(text).unwrap_err();
        assert!(matches!(err, CliError::Validation(m) if m.contains("requests[0].op")));
    }

    #[test]
    fn schema_path_is_reported() {
        let text = r#"{"kind": "curve", "components": ["t"], "variables": ["t"],
                       "domain": [[0, "x"]], "requests": []}"#;
        let err = parse_scene(text).unwrap_err();
        assert!(matches!(err, CliError::Validation(m) if m.contains("domain[0]")));
    }

    #[test]
    fn expression_errors_cite_component_and_offset() {
        let text = r#"{"kind": "curve", "components": ["t", "t**2"], "variables": ["t"],
                       "domain": [[0, 1]], "requests": []}"#;
        let (scene, _) = parse_scene(text).unwrap();
        let err = scene.map().unwrap_err();
        assert!(matches!(err, CliError::Validation(m) if m.contains("components[1]") && m.contains("byte")));
    }
}
