use super::{det2, Kind, Surface, M2};
use crate::error::{Error, Result};
use crate::expr::{Expr, ExprMap};
use crate::tensor2::Vec3;
use serde::{Deserialize, Serialize};

const SCAN: usize = 65;

fn uv_vars() -> Vec<String> {
    vec!["u".into(), "v".into()]
}

/// A one-parameter map rewritten over `(u, v)`, depending on `u` only.
fn lift(profile: &ExprMap) -> Result<Vec<Expr>> {
    if profile.arity() != 1 {
        return Err(Error::invalid("profile maps take exactly one parameter"));
    }
    let u = [Expr::Var(0, "u".into())];
    Ok(profile.components().iter().map(|c| c.substitute(&u)).collect())
}

fn scan(range: (f64, f64)) -> impl Iterator<Item = f64> {
    (0..SCAN).map(move |k| range.0 + (range.1 - range.0) * k as f64 / (SCAN - 1) as f64)
}

/// `f = (phi(u) cos v, phi(u) sin v, psi(u))`.
pub fn revolution_surface(phi: &ExprMap, psi: &ExprMap, u_range: (f64, f64), v_range: (f64, f64)) -> Result<Surface> {
    if phi.dim() != 1 || psi.dim() != 1 {
        return Err(Error::invalid("revolution profiles are scalar"));
    }
    for u in scan(u_range) {
        let radius = phi.eval(&[u])?[0];
        if !(radius > 0.0) {
            return Err(Error::NonPositiveRadius { u, radius });
        }
    }
    let outer = ExprMap::parse(&["P*cos(v)", "P*sin(v)", "Q"], &["P", "Q", "v"], &[])?;
    let mut inner = lift(phi)?;
    inner.extend(lift(psi)?);
    inner.push(Expr::Var(1, "v".into()));
    let map = outer.compose(&ExprMap::from_exprs(inner, uv_vars())?)?;
    Surface::with_kind(
        map,
        u_range,
        v_range,
        Kind::Revolution {
            phi: phi.clone(),
            psi: psi.clone(),
        },
    )
}

/// `f = gamma(u) + v lambda(u)`.
pub fn ruled_surface(gamma: &ExprMap, lambda: &ExprMap, u_range: (f64, f64), v_range: (f64, f64)) -> Result<Surface> {
    if gamma.dim() != 3 || lambda.dim() != 3 {
        return Err(Error::invalid("directrix and director need three components"));
    }
    let mut scale: f64 = 0.0;
    let mut norms = Vec::with_capacity(SCAN);
    for u in scan(u_range) {
        let g = Vec3::from_slice(&gamma.eval(&[u])?)?;
        let l = Vec3::from_slice(&lambda.eval(&[u])?)?;
        scale = scale.max(g.norm()).max(l.norm());
        norms.push((u, l.norm()));
    }
    let scale = if scale > 0.0 { scale } else { 1.0 };
    if let Some(&(u, _)) = norms.iter().find(|(_, n)| !(*n > 1e-12 * scale)) {
        return Err(Error::DegenerateDirector { u });
    }
    let outer = ExprMap::parse(
        &["g1 + v*l1", "g2 + v*l2", "g3 + v*l3"],
        &["g1", "g2", "g3", "l1", "l2", "l3", "v"],
        &[],
    )?;
    let mut inner = lift(gamma)?;
    inner.extend(lift(lambda)?);
    inner.push(Expr::Var(1, "v".into()));
    let map = outer.compose(&ExprMap::from_exprs(inner, uv_vars())?)?;
    Surface::with_kind(
        map,
        u_range,
        v_range,
        Kind::Ruled {
            gamma: gamma.clone(),
            lambda: lambda.clone(),
        },
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Developability {
    pub developable: bool,
    /// `gamma' x lambda . lambda'` over `|gamma'| |lambda| |lambda'|`.
    pub witness: f64,
}

pub fn developability(surface: &Surface, u: f64) -> Result<Developability> {
    let Kind::Ruled { gamma, lambda } = &surface.kind else {
        return Err(Error::invalid("developability is defined for ruled surfaces"));
    };
    let d = |m: &ExprMap| -> Result<(Vec3, Vec3)> {
        let j = m.eval_jet(&[u], 1)?;
        Ok((Vec3([j[0].value(), j[1].value(), j[2].value()]), Vec3([j[0].du(), j[1].du(), j[2].du()])))
    };
    let (_, gp) = d(gamma)?;
    let (l, lp) = d(lambda)?;
    if l.norm() == 0.0 {
        return Err(Error::DegenerateDirector { u });
    }
    let denom = gp.norm() * l.norm() * lp.norm();
    let triple = gp.cross(&l).dot(&lp);
    let witness = if denom > 0.0 { triple / denom } else { 0.0 };
    Ok(Developability {
        developable: witness.abs() <= 1e-10,
        witness,
    })
}

/// Fundamental forms of a revolution surface straight from its profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClosedForm {
    pub g: M2,
    pub b: M2,
    pub gauss: f64,
    pub mean: f64,
}

impl Surface {
    /// `g = diag(phi'^2 + psi'^2, phi^2)`,
    /// `B = diag((phi' psi'' - phi'' psi') / L, phi psi' / L)` with `L = |(phi', psi')|`.
    /// Only revolution surfaces have one.
    pub fn closed_form(&self, u: f64) -> Result<Option<ClosedForm>> {
        let Kind::Revolution { phi, psi } = &self.kind else {
            return Ok(None);
        };
        let a = phi.eval_jet(&[u], 2)?[0];
        let c = psi.eval_jet(&[u], 2)?[0];
        let (p, p1, p2) = (a.value(), a.du(), a.derivative(2, 0));
        let (q1, q2) = (c.du(), c.derivative(2, 0));
        let l2 = p1 * p1 + q1 * q1;
        let l = l2.sqrt();
        let g = [[l2, 0.0], [0.0, p * p]];
        let b = [[(p1 * q2 - p2 * q1) / l, 0.0], [0.0, p * q1 / l]];
        Ok(Some(ClosedForm {
            g,
            b,
            gauss: det2(&b) / det2(&g),
            mean: 0.5 * (b[0][0] / g[0][0] + b[1][1] / g[1][1]),
        }))
    }
}
