//! Parametric surfaces `f(u, v)` in 3-space.

mod geodesic;
mod intrinsic;
mod special;

pub use geodesic::{
    geodesic_curvature_along, geodesic_integrate, geodesic_integrate_with, geodesic_residual, GeodesicOptions, GeodesicRhs,
    GeodesicState,
};
pub use intrinsic::{curve_length, egregium_k, gauss_weingarten_residual, surface_area};
pub use special::{developability, revolution_surface, ruled_surface, ClosedForm, Developability};

use crate::error::{Error, Result};
use crate::expr::{ExprMap, Jet};
use crate::tensor2::Vec3;
use serde::{Deserialize, Serialize};

pub type M2 = [[f64; 2]; 2];

const SCAN: usize = 17;
const REGULARITY: f64 = 1e-10;

#[derive(Debug, Clone)]
pub(crate) enum Kind {
    General,
    Revolution { phi: ExprMap, psi: ExprMap },
    Ruled { gamma: ExprMap, lambda: ExprMap },
}

#[derive(Debug, Clone)]
pub struct Surface {
    map: ExprMap,
    u_range: (f64, f64),
    v_range: (f64, f64),
    scale: f64,
    pub(crate) kind: Kind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceJet {
    pub u: f64,
    pub v: f64,
    pub point: Vec3,
    pub f_u: Vec3,
    pub f_v: Vec3,
    pub normal: Vec3,
    /// First fundamental form.
    pub g: M2,
    /// Second fundamental form `B_ij = N . f,ij`.
    pub b: M2,
    /// Weingarten operator `g^-1 B`, `x[i][j] = X^i_j`.
    pub x: M2,
    pub k1: f64,
    pub k2: f64,
    /// Principal directions, components on `(f_u, f_v)`, unit in `g`.
    pub d1: [f64; 2],
    pub d2: [f64; 2],
    pub umbilic: bool,
    pub gauss: f64,
    pub mean: f64,
    /// `christoffel[h][i][j] = Gamma^h_ij`.
    pub christoffel: [[[f64; 2]; 2]; 2],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PointClass {
    Elliptic,
    Hyperbolic,
    Parabolic,
    Planar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DupinConic {
    Ellipse,
    ConjugateHyperbolae,
    ParallelLines,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirectionFields {
    /// Empty at an umbilic, where every direction qualifies.
    pub curvature_lines: Vec<[f64; 2]>,
    pub asymptotic: Vec<[f64; 2]>,
    pub dupin: DupinConic,
}

pub(crate) fn vec3(j: &[Jet; 3]) -> Vec3 {
    Vec3([j[0].value(), j[1].value(), j[2].value()])
}

pub(crate) fn det2(m: &M2) -> f64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

pub(crate) fn inv2(m: &M2) -> M2 {
    let d = det2(m);
    [[m[1][1] / d, -m[0][1] / d], [-m[1][0] / d, m[0][0] / d]]
}

pub(crate) fn mul2(a: &M2, b: &M2) -> M2 {
    std::array::from_fn(|i| std::array::from_fn(|j| a[i][0] * b[0][j] + a[i][1] * b[1][j]))
}

fn apply2(m: &M2, x: [f64; 2]) -> [f64; 2] {
    [m[0][0] * x[0] + m[0][1] * x[1], m[1][0] * x[0] + m[1][1] * x[1]]
}

/// Square root of a 2x2 SPD matrix: `(M + sqrt(det) I) / sqrt(tr + 2 sqrt(det))`.
fn sqrt_spd2(m: &M2) -> M2 {
    let s = det2(m).sqrt();
    let t = (m[0][0] + m[1][1] + 2.0 * s).sqrt();
    [[(m[0][0] + s) / t, m[0][1] / t], [m[1][0] / t, (m[1][1] + s) / t]]
}

pub(crate) fn quad_form(m: &M2, a: [f64; 2], b: [f64; 2]) -> f64 {
    let mb = apply2(m, b);
    a[0] * mb[0] + a[1] * mb[1]
}

fn g_unit(g: &M2, d: [f64; 2]) -> [f64; 2] {
    let n = quad_form(g, d, d).sqrt();
    [d[0] / n, d[1] / n]
}

/// Jets of `f`, `f_u` and `f_v` at a point.
pub(crate) struct Local {
    pub f: [Jet; 3],
    pub fu: [Jet; 3],
    pub fv: [Jet; 3],
}

impl Surface {
    pub fn new(map: ExprMap, u_range: (f64, f64), v_range: (f64, f64)) -> Result<Self> {
        Self::with_kind(map, u_range, v_range, Kind::General)
    }

    pub(crate) fn with_kind(map: ExprMap, u_range: (f64, f64), v_range: (f64, f64), kind: Kind) -> Result<Self> {
        if map.arity() != 2 || map.dim() != 3 {
            return Err(Error::invalid("a surface maps two parameters to three components"));
        }
        for (a, b) in [u_range, v_range] {
            if !(a.is_finite() && b.is_finite() && a < b) {
                return Err(Error::invalid("surface domain must be finite with min < max"));
            }
        }
        let mut s = Surface {
            map,
            u_range,
            v_range,
            scale: 1.0,
            kind,
        };
        let mut scale: f64 = 0.0;
        for i in 0..SCAN {
            for j in 0..SCAN {
                let u = u_range.0 + (u_range.1 - u_range.0) * i as f64 / (SCAN - 1) as f64;
                let v = v_range.0 + (v_range.1 - v_range.0) * j as f64 / (SCAN - 1) as f64;
                let l = s.local(u, v)?;
                scale = scale.max(vec3(&l.f).norm());
            }
        }
        s.scale = if scale > 0.0 { scale } else { 1.0 };
        Ok(s)
    }

    pub fn map(&self) -> &ExprMap {
        &self.map
    }

    pub fn u_range(&self) -> (f64, f64) {
        self.u_range
    }

    pub fn v_range(&self) -> (f64, f64) {
        self.v_range
    }

    /// Largest |f| on the construction grid.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn contains(&self, u: f64, v: f64) -> bool {
        (self.u_range.0..=self.u_range.1).contains(&u) && (self.v_range.0..=self.v_range.1).contains(&v)
    }

    pub fn point(&self, u: f64, v: f64) -> Result<Vec3> {
        Vec3::from_slice(&self.map.eval(&[u, v])?)
    }

    pub(crate) fn local(&self, u: f64, v: f64) -> Result<Local> {
        let j = self.map.eval_jet(&[u, v], 3)?;
        let f = [j[0], j[1], j[2]];
        let fu = f.map(|x| x.partial(0));
        let fv = f.map(|x| x.partial(1));
        let (a, b) = (vec3(&fu), vec3(&fv));
        let cr = a.cross(&b).norm();
        if !(cr.is_finite() && cr > REGULARITY * (a.dot(&a) + b.dot(&b))) || !f.iter().all(Jet::is_finite) {
            return Err(Error::IrregularPoint { u, v });
        }
        Ok(Local { f, fu, fv })
    }

    /// Unit normal `f_u x f_v / |f_u x f_v|`.
    pub fn normal(&self, u: f64, v: f64) -> Result<Vec3> {
        let l = self.local(u, v)?;
        let n = vec3(&l.fu).cross(&vec3(&l.fv));
        Ok(n * (1.0 / n.norm()))
    }

    /// First fundamental form only.
    pub fn metric(&self, u: f64, v: f64) -> Result<M2> {
        let l = self.local(u, v)?;
        let (a, b) = (vec3(&l.fu), vec3(&l.fv));
        Ok([[a.dot(&a), a.dot(&b)], [a.dot(&b), b.dot(&b)]])
    }

    pub fn jet_at(&self, u: f64, v: f64) -> Result<SurfaceJet> {
        let l = self.local(u, v)?;
        let fu = vec3(&l.fu);
        let fv = vec3(&l.fv);
        let second = [
            [vec3(&l.fu.map(|x| x.partial(0))), vec3(&l.fu.map(|x| x.partial(1)))],
            [vec3(&l.fv.map(|x| x.partial(0))), vec3(&l.fv.map(|x| x.partial(1)))],
        ];
        let cr = fu.cross(&fv);
        let normal = cr * (1.0 / cr.norm());
        let basis = [fu, fv];
        let g: M2 = std::array::from_fn(|i| std::array::from_fn(|j| basis[i].dot(&basis[j])));
        let b: M2 = std::array::from_fn(|i| std::array::from_fn(|j| normal.dot(&second[i][j])));
        let gi = inv2(&g);
        let x = mul2(&gi, &b);
        let first_kind: [[[f64; 2]; 2]; 2] =
            std::array::from_fn(|k| std::array::from_fn(|i| std::array::from_fn(|j| second[i][j].dot(&basis[k]))));
        let christoffel =
            std::array::from_fn(|h| std::array::from_fn(|i| std::array::from_fn(|j| gi[h][0] * first_kind[0][i][j] + gi[h][1] * first_kind[1][i][j])));

        // principal pairs from the symmetric g^-1/2 B g^-1/2
        let root = sqrt_spd2(&g);
        let ri = inv2(&root);
        let s = mul2(&mul2(&ri, &b), &ri);
        let m = 0.5 * (s[0][0] + s[1][1]);
        let r = (0.5 * (s[0][0] - s[1][1])).hypot(0.5 * (s[0][1] + s[1][0]));
        let (k1, k2) = (m + r, m - r);
        let umbilic = (k1 - k2).abs() < 1e-8 * (k1.abs() + k2.abs() + 1e-30);
        let (e1, e2) = if umbilic {
            ([1.0, 0.0], [0.0, 1.0])
        } else {
            let th = 0.5 * (s[0][1] + s[1][0]).atan2(s[0][0] - s[1][1]);
            let (sn, cs) = th.sin_cos();
            ([cs, sn], [-sn, cs])
        };
        Ok(SurfaceJet {
            u,
            v,
            point: vec3(&l.f),
            f_u: fu,
            f_v: fv,
            normal,
            g,
            b,
            x,
            k1,
            k2,
            d1: apply2(&ri, e1),
            d2: apply2(&ri, e2),
            umbilic,
            gauss: det2(&b) / det2(&g),
            mean: 0.5 * (x[0][0] + x[1][1]),
            christoffel,
        })
    }
}

impl SurfaceJet {
    /// Ambient vector of a tangent direction given on `(f_u, f_v)`.
    pub fn ambient(&self, d: [f64; 2]) -> Vec3 {
        self.f_u * d[0] + self.f_v * d[1]
    }

    /// `II(t, t) / I(t, t)`.
    pub fn normal_curvature(&self, t: [f64; 2]) -> f64 {
        quad_form(&self.b, t, t) / quad_form(&self.g, t, t)
    }

    fn b_norm(&self) -> f64 {
        self.b.iter().flatten().map(|x| x * x).sum::<f64>().sqrt()
    }
}

pub fn classify_point(jet: &SurfaceJet) -> PointClass {
    let bn = jet.b_norm();
    let reference = (jet.f_u.dot(&jet.f_u) + jet.f_v.dot(&jet.f_v)).sqrt();
    if bn <= 1e-10 * reference {
        return PointClass::Planar;
    }
    let d = det2(&jet.b);
    if d.abs() <= 1e-10 * bn * bn {
        PointClass::Parabolic
    } else if d > 0.0 {
        PointClass::Elliptic
    } else {
        PointClass::Hyperbolic
    }
}

pub fn direction_fields(jet: &SurfaceJet) -> Result<DirectionFields> {
    let class = classify_point(jet);
    let b = &jet.b;
    let asymptotic = match class {
        PointClass::Planar => return Err(Error::PlanarPoint { u: jet.u, v: jet.v }),
        PointClass::Elliptic => vec![],
        PointClass::Parabolic => {
            let d = if b[0][0].abs() >= b[1][1].abs() {
                [-b[0][1], b[0][0]]
            } else {
                [b[1][1], -b[0][1]]
            };
            vec![g_unit(&jet.g, d)]
        }
        PointClass::Hyperbolic => {
            let disc = (b[0][1] * b[0][1] - b[0][0] * b[1][1]).max(0.0).sqrt();
            let pair = if b[0][0] == 0.0 && b[1][1] == 0.0 {
                [[1.0, 0.0], [0.0, 1.0]]
            } else if b[0][0].abs() >= b[1][1].abs() {
                [[-b[0][1] + disc, b[0][0]], [-b[0][1] - disc, b[0][0]]]
            } else {
                [[b[1][1], -b[0][1] + disc], [b[1][1], -b[0][1] - disc]]
            };
            pair.iter().map(|&d| g_unit(&jet.g, d)).collect()
        }
    };
    let dupin = match class {
        PointClass::Elliptic => DupinConic::Ellipse,
        PointClass::Hyperbolic => DupinConic::ConjugateHyperbolae,
        _ => DupinConic::ParallelLines,
    };
    let curvature_lines = if jet.umbilic { vec![] } else { vec![jet.d1, jet.d2] };
    Ok(DirectionFields {
        curvature_lines,
        asymptotic,
        dupin,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn sphere() -> Surface {
        let m = ExprMap::parse(&["cos(u)*cos(v)", "cos(u)*sin(v)", "sin(u)"], &["u", "v"], &[]).unwrap();
        Surface::new(m, (-1.4, 1.4), (-3.0, 3.0)).unwrap()
    }

    #[test]
    fn unit_sphere_is_umbilic_with_unit_curvature() {
        let s = sphere();
        for (u, v) in [(0.0, 0.0), (0.7, -1.2), (-1.1, 2.5)] {
            let j = s.jet_at(u, v).unwrap();
            assert!((j.gauss - 1.0).abs() < 1e-12);
            assert!((j.mean.abs() - 1.0).abs() < 1e-12);
            assert!(j.umbilic);
            assert!((j.normal.norm() - 1.0).abs() < 1e-15);
            assert!(j.normal.dot(&j.f_u).abs() < 1e-14 && j.normal.dot(&j.f_v).abs() < 1e-14);
            assert_eq!(classify_point(&j), PointClass::Elliptic);
            let df = direction_fields(&j).unwrap();
            assert!(df.asymptotic.is_empty());
            assert_eq!(df.dupin, DupinConic::Ellipse);
        }
    }

    #[test]
    fn plane_patch_is_planar() {
        let m = ExprMap::parse(&["u", "v", "0"], &["u", "v"], &[]).unwrap();
        let s = Surface::new(m, (0.0, 1.0), (0.0, 1.0)).unwrap();
        let j = s.jet_at(0.3, 0.4).unwrap();
        assert_eq!(j.b, [[0.0; 2]; 2]);
        assert_eq!((j.gauss, j.mean), (0.0, 0.0));
        assert_eq!(classify_point(&j), PointClass::Planar);
        assert!(matches!(direction_fields(&j), Err(Error::PlanarPoint { .. })));
    }

    #[test]
    fn pole_is_irregular() {
        let m = ExprMap::parse(&["cos(u)*cos(v)", "cos(u)*sin(v)", "sin(u)"], &["u", "v"], &[]).unwrap();
        let err = Surface::new(m, (0.0, std::f64::consts::FRAC_PI_2), (0.0, 1.0)).unwrap_err();
        assert!(matches!(err, Error::IrregularPoint { .. }));
    }

    #[test]
    fn hyperbolic_asymptotic_directions_have_zero_normal_curvature() {
        let m = ExprMap::parse(&["u", "v", "u^2 - 2*v^2 + u*v"], &["u", "v"], &[]).unwrap();
        let s = Surface::new(m, (-1.0, 1.0), (-1.0, 1.0)).unwrap();
        let j = s.jet_at(0.2, -0.3).unwrap();
        assert_eq!(classify_point(&j), PointClass::Hyperbolic);
        let df = direction_fields(&j).unwrap();
        assert_eq!(df.asymptotic.len(), 2);
        for d in df.asymptotic {
            assert!(quad_form(&j.b, d, d).abs() < 1e-10);
        }
        // principal directions are g-orthonormal eigenvectors of X
        let [a, b] = [j.d1, j.d2];
        assert!(quad_form(&j.g, a, b).abs() < 1e-12);
        let xa = apply2(&j.x, a);
        assert!((xa[0] - j.k1 * a[0]).abs() < 1e-12 && (xa[1] - j.k1 * a[1]).abs() < 1e-12);
        assert!((j.normal_curvature(a) - j.k1).abs() < 1e-12);
    }
}
