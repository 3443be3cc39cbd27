//! Expression language and exact jet evaluation.

mod ast;
mod eval;
mod jet;
mod parse;

pub use ast::{BinOp, Expr, Func};
pub use jet::{Jet, MAX_ORDER};
pub use parse::parse_expr;

use crate::error::{Error, Result};
use eval::{eval, Binding};

/// A vector-valued map `R^n -> R^m` given by one expression per component.
#[derive(Debug, Clone, PartialEq)]
pub struct ExprMap {
    vars: Vec<String>,
    consts: Vec<(String, f64)>,
    components: Vec<Expr>,
}

/// First and second partial derivatives of every component at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct Derivatives {
    pub value: Vec<f64>,
    /// `d1[k][j] = dx_k / dz_j`
    pub d1: Vec<Vec<f64>>,
    /// `d2[k][j][l] = d^2 x_k / dz_j dz_l`
    pub d2: Vec<Vec<Vec<f64>>>,
}

impl ExprMap {
    pub fn parse(components: &[&str], vars: &[&str], consts: &[(&str, f64)]) -> Result<Self> {
        let vars: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        let consts: Vec<(String, f64)> = consts.iter().map(|(n, v)| (n.to_string(), *v)).collect();
        Self::parse_owned(components, vars, consts)
    }

    pub fn parse_owned<S: AsRef<str>>(
        components: &[S],
        vars: Vec<String>,
        consts: Vec<(String, f64)>,
    ) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::invalid("a map needs at least one component"));
        }
        for (i, v) in vars.iter().enumerate() {
            if vars[..i].contains(v) {
                return Err(Error::invalid(format!("duplicate variable `{v}`")));
            }
            if crate::expr::Func::from_name(v).is_some() {
                return Err(Error::invalid(format!("variable `{v}` shadows a function")));
            }
        }
        let components = components
            .iter()
            .map(|c| parse_expr(c.as_ref(), &vars, &consts))
            .collect::<Result<Vec<_>>>()?;
        Ok(ExprMap {
            vars,
            consts,
            components,
        })
    }

    /// Build a map from already constructed trees.
    pub fn from_exprs(components: Vec<Expr>, vars: Vec<String>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::invalid("a map needs at least one component"));
        }
        if let Some(m) = components.iter().filter_map(|c| c.max_var()).max() {
            if m >= vars.len() {
                return Err(Error::invalid("expression refers to an undeclared variable"));
            }
        }
        let mut consts = Vec::new();
        components.iter().for_each(|c| c.collect_constants(&mut consts));
        Ok(ExprMap {
            vars,
            consts,
            components,
        })
    }

    pub fn arity(&self) -> usize {
        self.vars.len()
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn variables(&self) -> &[String] {
        &self.vars
    }

    pub fn constants(&self) -> &[(String, f64)] {
        &self.consts
    }

    pub fn components(&self) -> &[Expr] {
        &self.components
    }

    /// Source text of every component, fully parenthesised.
    pub fn unparse(&self) -> Vec<String> {
        self.components.iter().map(|c| c.to_string()).collect()
    }

    /// Substitute `inner`'s components for this map's variables.
    pub fn compose(&self, inner: &ExprMap) -> Result<ExprMap> {
        if inner.dim() != self.arity() {
            return Err(Error::Dimension {
                expected: self.arity(),
                found: inner.dim(),
            });
        }
        let comps = self.components.iter().map(|c| c.substitute(&inner.components)).collect();
        ExprMap::from_exprs(comps, inner.vars.clone())
    }

    fn check_point(&self, point: &[f64]) -> Result<()> {
        if point.len() != self.arity() {
            return Err(Error::Dimension {
                expected: self.arity(),
                found: point.len(),
            });
        }
        Ok(())
    }

    pub fn eval(&self, point: &[f64]) -> Result<Vec<f64>> {
        Ok(self.eval_jet_with(point, [None, None], 0)?.iter().map(Jet::value).collect())
    }

    /// Jets of every component; all variables are active (at most two).
    pub fn eval_jet(&self, point: &[f64], order: usize) -> Result<Vec<Jet>> {
        if self.arity() > 2 {
            return Err(Error::invalid(
                "jets carry at most two active variables; use eval_jet_pair",
            ));
        }
        let slots = [(self.arity() > 0).then_some(0), (self.arity() > 1).then_some(1)];
        self.eval_jet_with(point, slots, order)
    }

    /// Jets in the variables `i` and `j`, the others held fixed.
    pub fn eval_jet_pair(&self, point: &[f64], i: usize, j: usize, order: usize) -> Result<Vec<Jet>> {
        if i >= self.arity() || j >= self.arity() {
            return Err(Error::invalid("active variable index out of range"));
        }
        let second = if i == j { None } else { Some(j) };
        self.eval_jet_with(point, [Some(i), second], order)
    }

    fn eval_jet_with(&self, point: &[f64], slots: [Option<usize>; 2], order: usize) -> Result<Vec<Jet>> {
        self.check_point(point)?;
        let b = Binding {
            values: point,
            slots,
            order: order.min(MAX_ORDER),
        };
        self.components.iter().map(|c| eval(c, &b)).collect()
    }

    /// All first and second partials, for any number of variables.
    pub fn derivatives(&self, point: &[f64]) -> Result<Derivatives> {
        let n = self.arity();
        let m = self.dim();
        let mut d1 = vec![vec![0.0; n]; m];
        let mut d2 = vec![vec![vec![0.0; n]; n]; m];
        let mut value = vec![0.0; m];
        if n == 0 {
            value = self.eval(point)?;
        }
        if n == 1 {
            let jets = self.eval_jet(point, 2)?;
            for (k, jt) in jets.iter().enumerate() {
                value[k] = jt.value();
                d1[k][0] = jt.du();
                d2[k][0][0] = jt.derivative(2, 0);
            }
        }
        for a in 0..n {
            for b in a + 1..n {
                let jets = self.eval_jet_pair(point, a, b, 2)?;
                for (k, jt) in jets.iter().enumerate() {
                    value[k] = jt.value();
                    d1[k][a] = jt.du();
                    d1[k][b] = jt.dv();
                    d2[k][a][a] = jt.derivative(2, 0);
                    d2[k][b][b] = jt.derivative(0, 2);
                    d2[k][a][b] = jt.derivative(1, 1);
                    d2[k][b][a] = d2[k][a][b];
                }
            }
        }
        Ok(Derivatives { value, d1, d2 })
    }
}
