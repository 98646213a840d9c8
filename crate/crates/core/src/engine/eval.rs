use num_traits::One;
use thiserror::Error;

use super::{Engine, EngineError};
use crate::expr::Expr;
use crate::terms::{DerivedGenerator, LambdaPoly, Monomial, Scalar, StateVector};

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

fn is_scalar_like(p: &LambdaPoly) -> bool {
    p.iter().all(|(_, v)| v.monomials().all(Monomial::is_vacuum))
}

impl Engine {
    /// `Σ λ^{n+m} :p_n q_m:`.
    fn lambda_product(&self, p: &LambdaPoly, q: &LambdaPoly) -> Result<LambdaPoly, EngineError> {
        let mut out = LambdaPoly::zero();
        for (n, a) in p.iter() {
            for (m, b) in q.iter() {
                out.add_state(n + m, &self.wick(a, b)?, &Scalar::one());
            }
        }
        Ok(out)
    }

    /// Evaluates an expression to canonical form. The result is a polynomial
    /// in `L`; plain states come back as constants.
    pub fn eval(&self, e: &Expr) -> Result<LambdaPoly, EvalError> {
        Ok(match e {
            Expr::Num(q) => LambdaPoly::constant(StateVector::scalar(q.clone())),
            Expr::Lambda => {
                let mut p = LambdaPoly::zero();
                p.add_term(1, Monomial::vacuum(), Scalar::one());
                p
            }
            Expr::Vac => LambdaPoly::constant(StateVector::vacuum()),
            Expr::Name(s) => {
                if let Some(g) = self.spec().generator_index(s) {
                    LambdaPoly::constant(StateVector::generator(DerivedGenerator::base(g)))
                } else if let Some(q) = self.spec().param(s) {
                    LambdaPoly::constant(StateVector::scalar(q.clone()))
                } else {
                    return Err(EvalError::UnknownName(s.clone()));
                }
            }
            Expr::Deriv(k, inner) => {
                let v = self.eval(inner)?;
                v.map_states(|s| self.apply_t_pow(s, *k))?
            }
            Expr::Nop(items) => {
                let mut acc = self.eval(items.last().expect("nonempty"))?;
                for item in items[..items.len() - 1].iter().rev() {
                    acc = self.lambda_product(&self.eval(item)?, &acc)?;
                }
                acc
            }
            Expr::Add(a, b) => {
                let mut x = self.eval(a)?;
                x.add(&self.eval(b)?);
                x
            }
            Expr::Neg(a) => self.eval(a)?.scaled(&-Scalar::one()),
            Expr::Mul(a, b) => {
                let (x, y) = (self.eval(a)?, self.eval(b)?);
                if !is_scalar_like(&x) && !is_scalar_like(&y) {
                    return Err(EvalError::Invalid(
                        "`*` needs a scalar or L factor; write :a b: for products of states".into(),
                    ));
                }
                self.lambda_product(&x, &y)?
            }
            Expr::Pow(a, k) => {
                let x = self.eval(a)?;
                if !is_scalar_like(&x) {
                    return Err(EvalError::Invalid("only scalars and L may be raised to a power".into()));
                }
                let mut acc = LambdaPoly::constant(StateVector::vacuum());
                for _ in 0..*k {
                    acc = self.lambda_product(&acc, &x)?;
                }
                acc
            }
            Expr::Bracket(a, b) => {
                let (x, y) = (self.eval(a)?, self.eval(b)?);
                if x.degree().unwrap_or(0) > 0 || y.degree().unwrap_or(0) > 0 {
                    return Err(EvalError::Invalid("bracket arguments may not involve L".into()));
                }
                self.bracket(&x.coeff(0), &y.coeff(0))?
            }
        })
    }
}
