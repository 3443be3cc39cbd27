use super::{metric_derivatives_from, metric_from, CoordMap};
use crate::error::{Error, Result};
use crate::expr::ExprMap;

/// Component field over coordinate space with first partials.
pub trait Field {
    fn components(&self) -> usize;
    /// Values and `grad[component][variable]`.
    fn value_and_gradient(&self, z: &[f64]) -> Result<(Vec<f64>, Vec<Vec<f64>>)>;
}

impl Field for ExprMap {
    fn components(&self) -> usize {
        self.dim()
    }

    fn value_and_gradient(&self, z: &[f64]) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
        let d = self.derivatives(z)?;
        Ok((d.value, d.d1))
    }
}

/// Components sampled on a regular grid; partials come from five-point
/// Lagrange stencils (shifted inward near the edges).
#[derive(Debug, Clone)]
pub struct GridField {
    origin: Vec<f64>,
    spacing: Vec<f64>,
    counts: Vec<usize>,
    ncomp: usize,
    /// Node-major: `data[node * ncomp + c]`.
    data: Vec<f64>,
}

const STENCIL: usize = 5;

/// Weights of the derivative at node `m` of the Lagrange interpolant
/// through nodes `0..5` with unit spacing.
fn weights(m: usize) -> [f64; STENCIL] {
    let x = m as f64;
    std::array::from_fn(|j| {
        let denom: f64 = (0..STENCIL).filter(|&l| l != j).map(|l| j as f64 - l as f64).product();
        let num: f64 = (0..STENCIL)
            .filter(|&k| k != j)
            .map(|k| {
                (0..STENCIL)
                    .filter(|&l| l != j && l != k)
                    .map(|l| x - l as f64)
                    .product::<f64>()
            })
            .sum();
        num / denom
    })
}

impl GridField {
    /// Sample `f` on the grid `origin + i*spacing`, `i < counts`.
    pub fn sample(f: &ExprMap, origin: Vec<f64>, spacing: Vec<f64>, counts: Vec<usize>) -> Result<Self> {
        let n = counts.len();
        if origin.len() != n || spacing.len() != n || f.arity() != n {
            return Err(Error::invalid("grid origin, spacing and counts must match the field arity"));
        }
        if let Some(&c) = counts.iter().find(|&&c| c < STENCIL) {
            return Err(Error::InsufficientResolution {
                given: c,
                required: STENCIL,
            });
        }
        let total: usize = counts.iter().product();
        let mut data = Vec::with_capacity(total * f.dim());
        for node in 0..total {
            let z = Self::coords_of(&origin, &spacing, &counts, node);
            data.extend(f.eval(&z)?);
        }
        Ok(GridField {
            origin,
            spacing,
            counts,
            ncomp: f.dim(),
            data,
        })
    }

    fn coords_of(origin: &[f64], spacing: &[f64], counts: &[usize], node: usize) -> Vec<f64> {
        let mut rest = node;
        let mut z = vec![0.0; counts.len()];
        for a in (0..counts.len()).rev() {
            z[a] = origin[a] + spacing[a] * (rest % counts[a]) as f64;
            rest /= counts[a];
        }
        z
    }

    fn node_index(&self, idx: &[usize]) -> usize {
        idx.iter().zip(&self.counts).fold(0, |acc, (i, c)| acc * c + i)
    }

    fn snap(&self, z: &[f64]) -> Result<Vec<usize>> {
        if z.len() != self.counts.len() {
            return Err(Error::Dimension {
                expected: self.counts.len(),
                found: z.len(),
            });
        }
        z.iter()
            .enumerate()
            .map(|(a, &x)| {
                let r = (x - self.origin[a]) / self.spacing[a];
                let i = r.round();
                if (r - i).abs() > 1e-6 || i < 0.0 || i as usize >= self.counts[a] {
                    Err(Error::invalid(format!("{z:?} is not a node of the sampling grid")))
                } else {
                    Ok(i as usize)
                }
            })
            .collect()
    }
}

impl Field for GridField {
    fn components(&self) -> usize {
        self.ncomp
    }

    fn value_and_gradient(&self, z: &[f64]) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
        let idx = self.snap(z)?;
        let node = self.node_index(&idx);
        let value = self.data[node * self.ncomp..(node + 1) * self.ncomp].to_vec();
        let n = self.counts.len();
        let mut grad = vec![vec![0.0; n]; self.ncomp];
        for a in 0..n {
            let start = idx[a].saturating_sub(2).min(self.counts[a] - STENCIL);
            let w = weights(idx[a] - start);
            for (s, wk) in w.iter().enumerate() {
                let mut j = idx.clone();
                j[a] = start + s;
                let nd = self.node_index(&j);
                for (c, g) in grad.iter_mut().enumerate() {
                    g[a] += wk * self.data[nd * self.ncomp + c] / self.spacing[a];
                }
            }
        }
        Ok((value, grad))
    }
}

/// The metric of a coordinate map as a field, in covariant or
/// contravariant components.
pub struct MetricField<'a> {
    pub map: &'a CoordMap,
    pub contravariant: bool,
}

impl Field for MetricField<'_> {
    fn components(&self) -> usize {
        self.map.dim() * self.map.dim()
    }

    fn value_and_gradient(&self, z: &[f64]) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
        let n = self.map.dim();
        let d = self.map.derivatives(z)?;
        let metric = metric_from(self.map, z, &d)?;
        let dg = metric_derivatives_from(&d);
        let mut value = Vec::with_capacity(n * n);
        let mut grad = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                if self.contravariant {
                    value.push(metric.con[i][j]);
                    grad.push(
                        (0..n)
                            .map(|k| {
                                let mut s = 0.0;
                                for a in 0..n {
                                    for b in 0..n {
                                        s -= metric.con[i][a] * dg[a][b][k] * metric.con[b][j];
                                    }
                                }
                                s
                            })
                            .collect(),
                    );
                } else {
                    value.push(metric.cov[i][j]);
                    grad.push(dg[i][j].clone());
                }
            }
        }
        Ok((value, grad))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stencil_weights_are_exact_for_quartics() {
        for m in 0..STENCIL {
            let w = weights(m);
            let d: f64 = (0..STENCIL).map(|j| w[j] * (j as f64).powi(4)).sum();
            assert!((d - 4.0 * (m as f64).powi(3)).abs() < 1e-10);
        }
    }

    #[test]
    fn grid_needs_five_points() {
        let f = ExprMap::parse(&["x*y"], &["x", "y"], &[]).unwrap();
        let err = GridField::sample(&f, vec![0.0, 0.0], vec![0.1, 0.1], vec![4, 8]).unwrap_err();
        assert_eq!(err, Error::InsufficientResolution { given: 4, required: 5 });
    }

    #[test]
    fn grid_gradient_of_cubic() {
        let f = ExprMap::parse(&["x^3 + x*y^2"], &["x", "y"], &[]).unwrap();
        let g = GridField::sample(&f, vec![0.0, 0.0], vec![0.1, 0.1], vec![9, 9]).unwrap();
        for z in [[0.0, 0.0], [0.4, 0.3], [0.8, 0.8]] {
            let (_, d) = g.value_and_gradient(&z).unwrap();
            let exact = [3.0 * z[0] * z[0] + z[1] * z[1], 2.0 * z[0] * z[1]];
            assert!((d[0][0] - exact[0]).abs() < 1e-12);
            assert!((d[0][1] - exact[1]).abs() < 1e-12);
        }
    }
}
