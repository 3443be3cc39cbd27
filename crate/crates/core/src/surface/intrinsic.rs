use super::{vec3, Surface};
use crate::error::{Error, Result};
use crate::expr::{ExprMap, Jet};
use crate::quad::{self, GaussLegendre};

type JetM2 = [[Jet; 2]; 2];

/// Second-kind symbols `Gamma^h_ij` as first-order jets, built from the
/// metric alone, together with the metric values.
fn christoffel_jets(s: &Surface, u: f64, v: f64) -> Result<([[f64; 2]; 2], [[[Jet; 2]; 2]; 2])> {
    let l = s.local(u, v)?;
    let basis = [l.fu, l.fv];
    let g: JetM2 = std::array::from_fn(|i| std::array::from_fn(|j| Jet::dot3(&basis[i], &basis[j])));
    // dg[i][j][k] = g_ij,k
    let dg: [[[Jet; 2]; 2]; 2] = std::array::from_fn(|i| std::array::from_fn(|j| std::array::from_fn(|k| g[i][j].partial(k))));
    let first: [[[Jet; 2]; 2]; 2] = std::array::from_fn(|k| {
        std::array::from_fn(|i| std::array::from_fn(|j| (dg[k][i][j] + dg[k][j][i] - dg[i][j][k]) * 0.5))
    });
    let det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
    let gi: JetM2 = [[g[1][1] / det, -g[0][1] / det], [-g[1][0] / det, g[0][0] / det]];
    let gamma = std::array::from_fn(|h| {
        std::array::from_fn(|i| std::array::from_fn(|j| gi[h][0] * first[0][i][j] + gi[h][1] * first[1][i][j]))
    });
    let gv = g.map(|r| r.map(|x| x.value()));
    Ok((gv, gamma))
}

/// Gaussian curvature from the metric and its Christoffel symbols only.
/// Uses the `g11` relation, or the `g12` companion when that coefficient
/// is the larger one.
pub fn egregium_k(s: &Surface, u: f64, v: f64) -> Result<f64> {
    let (g, gj) = christoffel_jets(s, u, v)?;
    let c = |h: usize, i: usize, j: usize| gj[h - 1][i - 1][j - 1].value();
    let d = |h: usize, i: usize, j: usize, k: usize| {
        let x = gj[h - 1][i - 1][j - 1];
        if k == 1 {
            x.du()
        } else {
            x.dv()
        }
    };
    if g[0][0].abs() >= g[0][1].abs() {
        let rhs = c(1, 1, 1) * c(2, 1, 2) + c(2, 1, 1) * c(2, 2, 2) + d(2, 1, 1, 2)
            - c(1, 1, 2) * c(2, 1, 1)
            - c(2, 1, 2) * c(2, 1, 2)
            - d(2, 1, 2, 1);
        Ok(rhs / g[0][0])
    } else {
        let rhs = d(1, 1, 1, 2) - d(1, 1, 2, 1) + c(2, 1, 1) * c(1, 2, 2) - c(2, 1, 2) * c(1, 1, 2);
        Ok(-rhs / g[0][1])
    }
}

/// Largest `|f,ij - Gamma^h_ij f_h - B_ij N|` and `|N,j + X^i_j f_i|`.
pub fn gauss_weingarten_residual(s: &Surface, u: f64, v: f64) -> Result<(f64, f64)> {
    let jet = s.jet_at(u, v)?;
    let l = s.local(u, v)?;
    let basis = [jet.f_u, jet.f_v];
    let second = [[l.fu.map(|x| x.partial(0)), l.fu.map(|x| x.partial(1))], [l.fv.map(|x| x.partial(0)), l.fv.map(|x| x.partial(1))]];
    let mut gauss: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            let r = vec3(&second[i][j])
                - basis[0] * jet.christoffel[0][i][j]
                - basis[1] * jet.christoffel[1][i][j]
                - jet.normal * jet.b[i][j];
            gauss = gauss.max(r.norm());
        }
    }
    let cr = Jet::cross3(&l.fu, &l.fv);
    let len = Jet::dot3(&cr, &cr).sqrt().ok_or(Error::IrregularPoint { u, v })?;
    let n = cr.map(|c| c / len);
    let mut weingarten: f64 = 0.0;
    for j in 0..2 {
        let nj = vec3(&n.map(|x| x.partial(j)));
        let r = nj + basis[0] * jet.x[0][j] + basis[1] * jet.x[1][j];
        weingarten = weingarten.max(r.norm());
    }
    Ok((gauss, weingarten))
}

/// `int sqrt(det g) du dv` over a sub-rectangle.
pub fn surface_area(s: &Surface, u_range: (f64, f64), v_range: (f64, f64), order: usize) -> Result<f64> {
    let gl = GaussLegendre::new(order.max(1));
    let mut area = 0.0;
    for (u, wu) in gl.on(u_range.0, u_range.1) {
        for (v, wv) in gl.on(v_range.0, v_range.1) {
            let g = s.metric(u, v)?;
            area += wu * wv * super::det2(&g).sqrt();
        }
    }
    Ok(area)
}

/// Length of the surface curve `t -> f(u(t), v(t))` from the first form.
pub fn curve_length(s: &Surface, path: &ExprMap, t0: f64, t1: f64) -> Result<f64> {
    if path.arity() != 1 || path.dim() != 2 {
        return Err(Error::invalid("a parameter path maps t to (u, v)"));
    }
    let mut ref_speed: f64 = 0.0;
    let speed = |t: f64| -> Result<f64> {
        let j = path.eval_jet(&[t], 1)?;
        let w = [j[0].du(), j[1].du()];
        let g = s.metric(j[0].value(), j[1].value())?;
        Ok(super::quad_form(&g, w, w).max(0.0).sqrt())
    };
    for k in 0..=16 {
        ref_speed = ref_speed.max(speed(t0 + (t1 - t0) * k as f64 / 16.0)?);
    }
    let tol = 1e-12 * (t1 - t0).abs() * ref_speed.max(1e-300);
    quad::adaptive(t0, t1, tol, speed)
}
