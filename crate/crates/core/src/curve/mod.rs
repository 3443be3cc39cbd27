//! Parametric curves in 3-space.

mod bonnet;

pub use bonnet::{bonnet_reconstruct, sampled_curvature_torsion, CurvatureProfile, ProfileFn, SampledCurve};

use crate::error::{Error, Result};
use crate::expr::{ExprMap, Jet};
use crate::quad;
use crate::tensor2::Vec3;
use serde::{Deserialize, Serialize};

const SCAN: usize = 64;

#[derive(Debug, Clone)]
pub struct Curve {
    map: ExprMap,
    domain: (f64, f64),
    scale: f64,
    planar_defect: Option<(f64, f64)>,
    rel_tol: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrenetData {
    pub t: f64,
    pub point: Vec3,
    pub tau: Vec3,
    pub nu: Vec3,
    pub beta: Vec3,
    pub c: f64,
    pub theta: f64,
    pub rho: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Osculating {
    pub circle_center: Vec3,
    pub circle_radius: f64,
    pub sphere_center: Option<Vec3>,
    pub sphere_radius: Option<f64>,
}

/// Curvature, its arc-length derivative and torsion at a point; they fix
/// the local projections of the curve on the Frenet planes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Canonical {
    pub c0: f64,
    pub c0_prime: f64,
    pub theta0: f64,
}

impl Canonical {
    /// Osculating-plane parabola `p2(p1)`.
    pub fn osculating_projection(&self, p1: f64) -> f64 {
        0.5 * self.c0 * p1 * p1
    }

    /// Rectifying-plane cubic `p3(p1)`.
    pub fn rectifying_projection(&self, p1: f64) -> f64 {
        -self.c0 * self.theta0 * p1 * p1 * p1 / 6.0
    }

    /// Normal-plane semicubic: `p3^2` as a function of `p2`.
    pub fn normal_projection_sq(&self, p2: f64) -> f64 {
        2.0 / 9.0 * self.theta0 * self.theta0 / self.c0 * p2 * p2 * p2
    }
}

/// Jet-valued quantities shared by the Frenet computations.
struct Local {
    p: [Jet; 3],
    d1: [Jet; 3],
    d2: [Jet; 3],
    d3: [f64; 3],
}

fn vec(j: &[Jet; 3]) -> Vec3 {
    Vec3([j[0].value(), j[1].value(), j[2].value()])
}

impl Curve {
    pub fn new(map: ExprMap, t_min: f64, t_max: f64) -> Result<Self> {
        if map.arity() != 1 {
            return Err(Error::invalid("a curve needs exactly one parameter"));
        }
        if !(map.dim() == 2 || map.dim() == 3) {
            return Err(Error::invalid("a curve has 2 or 3 components"));
        }
        if !(t_min.is_finite() && t_max.is_finite() && t_min < t_max) {
            return Err(Error::invalid("curve domain must be finite with min < max"));
        }
        let mut scale: f64 = 0.0;
        let mut out_of_plane = None;
        for k in 0..SCAN {
            let t = t_min + (t_max - t_min) * k as f64 / (SCAN - 1) as f64;
            let p = map.eval(&[t])?;
            scale = scale.max(p.iter().map(|x| x * x).sum::<f64>().sqrt());
            if map.dim() == 3 {
                let z = p[2].abs();
                if out_of_plane.is_none_or(|(_, v)| z > v) {
                    out_of_plane = Some((t, z));
                }
            }
        }
        let scale = if scale > 0.0 { scale } else { 1.0 };
        Ok(Curve {
            map,
            domain: (t_min, t_max),
            scale,
            planar_defect: out_of_plane,
            rel_tol: 1e-10,
        })
    }

    /// Override the relative regularity tolerance (default 1e-10).
    pub fn with_tolerance(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn map(&self) -> &ExprMap {
        &self.map
    }

    /// Largest |p| seen on the construction grid.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    fn tol(&self) -> f64 {
        self.rel_tol * self.scale
    }

    pub fn point(&self, t: f64) -> Result<Vec3> {
        Vec3::from_slice(&self.map.eval(&[t])?)
    }

    fn jets(&self, t: f64) -> Result<[Jet; 3]> {
        let j = self.map.eval_jet(&[t], 3)?;
        Ok([j[0], j[1], j.get(2).copied().unwrap_or_else(|| Jet::constant(0.0, 3))])
    }

    fn local(&self, t: f64) -> Result<Local> {
        let p = self.jets(t)?;
        let d1 = p.map(|x| x.partial(0));
        let d2 = d1.map(|x| x.partial(0));
        let d3 = d2.map(|x| x.du());
        let speed = vec(&d1).norm();
        if speed <= self.tol() || !speed.is_finite() {
            return Err(Error::IrregularCurve { t });
        }
        Ok(Local { p, d1, d2, d3 })
    }

    /// p'(t), p''(t), p'''(t).
    pub fn derivatives(&self, t: f64) -> Result<[Vec3; 3]> {
        let l = self.local(t)?;
        Ok([vec(&l.d1), vec(&l.d2), Vec3(l.d3)])
    }

    pub fn speed(&self, t: f64) -> Result<f64> {
        Ok(vec(&self.local(t)?.d1).norm())
    }

    pub fn tangent(&self, t: f64) -> Result<Vec3> {
        let v = vec(&self.local(t)?.d1);
        Ok(v * (1.0 / v.norm()))
    }

    fn curvature_defined(&self, c: f64, cross: f64) -> bool {
        cross > 0.0 && c * self.scale > self.rel_tol
    }

    pub fn frenet(&self, t: f64) -> Result<FrenetData> {
        let l = self.local(t)?;
        let (v1, v2, v3) = (vec(&l.d1), vec(&l.d2), Vec3(l.d3));
        let speed = v1.norm();
        let cr = v1.cross(&v2);
        let crn = cr.norm();
        let c = crn / (speed * speed * speed);
        if !self.curvature_defined(c, crn) {
            return Err(Error::UndefinedNormal { t });
        }
        let tau = v1 * (1.0 / speed);
        let beta = cr * (1.0 / crn);
        let nu = beta.cross(&tau);
        let theta = -cr.dot(&v3) / (crn * crn);
        Ok(FrenetData {
            t,
            point: vec(&l.p),
            tau,
            nu,
            beta,
            c,
            theta,
            rho: 1.0 / c,
        })
    }

    /// Curvature as a first-order jet in t, and the speed |p'|.
    fn curvature_jet(&self, t: f64) -> Result<(Jet, f64)> {
        let l = self.local(t)?;
        let cr = Jet::cross3(&l.d1, &l.d2);
        let crn = Jet::dot3(&cr, &cr).sqrt().ok_or(Error::UndefinedNormal { t })?;
        let sp = Jet::dot3(&l.d1, &l.d1).sqrt().ok_or(Error::IrregularCurve { t })?;
        let c = crn / (sp * sp * sp);
        if !self.curvature_defined(c.value(), crn.value()) || !c.is_finite() {
            return Err(Error::UndefinedNormal { t });
        }
        Ok((c, sp.value()))
    }

    /// d rho / ds.
    fn rho_prime(&self, t: f64) -> Result<f64> {
        let (c, speed) = self.curvature_jet(t)?;
        Ok(-c.du() / (c.value() * c.value()) / speed)
    }

    fn torsion_defined(&self, theta: f64) -> bool {
        theta.abs() * self.scale > self.rel_tol
    }

    pub fn osculating(&self, t: f64) -> Result<Osculating> {
        let f = self.frenet(t)?;
        let circle_center = f.point + f.nu * f.rho;
        let (sphere_center, sphere_radius) = if self.torsion_defined(f.theta) {
            let k = self.rho_prime(t)? / f.theta;
            (
                Some(circle_center - f.beta * k),
                Some((f.rho * f.rho + k * k).sqrt()),
            )
        } else {
            (None, None)
        };
        Ok(Osculating {
            circle_center,
            circle_radius: f.rho,
            sphere_center,
            sphere_radius,
        })
    }

    pub fn osculating_sphere(&self, t: f64) -> Result<(Vec3, f64)> {
        let o = self.osculating(t)?;
        match (o.sphere_center, o.sphere_radius) {
            (Some(c), Some(r)) => Ok((c, r)),
            _ => Err(Error::UndefinedOsculatingSphere { t }),
        }
    }

    fn check_planar(&self) -> Result<()> {
        if let Some((t, z)) = self.planar_defect {
            if z > self.tol() {
                return Err(Error::NonPlanar { t, value: z });
            }
        }
        Ok(())
    }

    /// Centre of curvature of a plane curve.
    pub fn evolute(&self, t: f64) -> Result<Vec3> {
        self.check_planar()?;
        let f = self.frenet(t)?;
        Ok(f.point + f.nu * f.rho)
    }

    pub fn canonical_coefficients(&self, t0: f64) -> Result<Canonical> {
        let f = self.frenet(t0)?;
        let (c, speed) = self.curvature_jet(t0)?;
        Ok(Canonical {
            c0: f.c,
            c0_prime: c.du() / speed,
            theta0: f.theta,
        })
    }

    fn check_interval(&self, t0: f64, t1: f64) -> Result<()> {
        let (a, b) = self.domain;
        let slack = 1e-12 * (b - a);
        if !(t0 < t1 && t0 >= a - slack && t1 <= b + slack) {
            return Err(Error::invalid(format!(
                "arc-length interval [{t0}, {t1}] must be increasing and inside [{a}, {b}]"
            )));
        }
        Ok(())
    }

    pub fn arc_length(&self, t0: f64, t1: f64) -> Result<f64> {
        self.check_interval(t0, t1)?;
        let mut vmax: f64 = 0.0;
        for k in 0..SCAN {
            let t = t0 + (t1 - t0) * k as f64 / (SCAN - 1) as f64;
            vmax = vmax.max(self.speed(t)?);
        }
        let tol = 1e-10 * (t1 - t0) * vmax;
        quad::adaptive(t0, t1, tol, |t| self.speed(t))
    }

    /// `(t, s(t))` at `n` uniform parameters across the domain.
    pub fn arclength_table(&self, n: usize) -> Result<Vec<(f64, f64)>> {
        let n = n.max(2);
        let (a, b) = self.domain;
        let mut out = vec![(a, 0.0)];
        let mut s = 0.0;
        for k in 1..n {
            let t_prev = a + (b - a) * (k - 1) as f64 / (n - 1) as f64;
            let t = a + (b - a) * k as f64 / (n - 1) as f64;
            s += self.arc_length(t_prev, t)?;
            out.push((t, s));
        }
        Ok(out)
    }

    /// Uniform parameter grid of `n` points over the domain.
    pub fn grid(&self, n: usize) -> Vec<f64> {
        let (a, b) = self.domain;
        let n = n.max(2);
        (0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect()
    }
}
