use std::sync::Arc;

use num_traits::Zero;

use super::{Polynomial, Ring};
use crate::error::{Error, Result};

/// Spatial variables `x_1..x_n` plus the deformation parameter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarContext {
    spatial: Arc<Ring>,
    full: Arc<Ring>,
}

impl VarContext {
    pub fn new<S: AsRef<str>>(spatial_vars: &[S], param: &str) -> Result<Self> {
        if spatial_vars.is_empty() {
            return Err(Error::Validation(
                "at least one spatial variable is required".into(),
            ));
        }
        if spatial_vars.iter().any(|v| v.as_ref() == param) {
            return Err(Error::Validation(format!(
                "parameter `{param}` is also a spatial variable"
            )));
        }
        let names: Vec<String> = spatial_vars
            .iter()
            .map(|s| s.as_ref().to_string())
            .collect();
        for n in names.iter().chain(std::iter::once(&param.to_string())) {
            if !is_identifier(n) {
                return Err(Error::Validation(format!(
                    "`{n}` is not a valid variable name"
                )));
            }
        }
        let spatial = Ring::new(names.clone())?;
        let full = Ring::new(names.into_iter().chain(std::iter::once(param.to_string())))?;
        Ok(VarContext { spatial, full })
    }

    /// Ring of the spatial variables only.
    pub fn spatial_ring(&self) -> &Arc<Ring> {
        &self.spatial
    }

    /// Ring `(x_1, .., x_n, t)`.
    pub fn full_ring(&self) -> &Arc<Ring> {
        &self.full
    }

    pub fn n(&self) -> usize {
        self.spatial.len()
    }

    pub fn param_index(&self) -> usize {
        self.spatial.len()
    }

    pub fn param(&self) -> &str {
        self.full.name(self.param_index())
    }

    pub fn spatial_vars(&self) -> &[String] {
        self.spatial.names()
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_alphabetic() || c == '_' => chars.all(|c| c.is_alphanumeric() || c == '_'),
        _ => false,
    }
}

/// Splits `F(x,t) = f_0(x) + sum_j t^j f_j(x)`; each `f_j` is returned over the spatial ring.
///
/// Fails when some coefficient does not vanish at the origin.
pub fn t_expansion(f: &Polynomial, ctx: &VarContext) -> Result<Vec<Polynomial>> {
    let f = f.embed(ctx.full_ring())?;
    let coeffs = f.coefficients_in(ctx.param_index());
    let mut out = Vec::with_capacity(coeffs.len());
    for (j, c) in coeffs.into_iter().enumerate() {
        let c = c.embed_dropping(ctx.spatial_ring());
        if !c.constant_term().is_zero() {
            return Err(Error::Validation(format!(
                "coefficient f_{j} of t^{j} does not vanish at the origin"
            )));
        }
        out.push(c);
    }
    Ok(out)
}

impl Polynomial {
    /// Like `embed`, but for polynomials known not to involve the missing variables.
    pub(crate) fn embed_dropping(&self, target: &Arc<Ring>) -> Polynomial {
        self.embed(target)
            .expect("polynomial involves a dropped variable")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    #[test]
    fn rejects_parameter_among_spatial() {
        assert!(VarContext::new(&["x", "t"], "t").is_err());
        assert!(VarContext::new::<&str>(&[], "t").is_err());
        assert!(VarContext::new(&["x", "x"], "t").is_err());
    }

    #[test]
    fn t_free_polynomial_expands_to_one_coefficient() {
        let ctx = VarContext::new(&["x", "y"], "t").unwrap();
        let r = ctx.full_ring();
        let p = &Polynomial::var(r, 0).pow(2) + &Polynomial::var(r, 1).pow(3);
        let e = t_expansion(&p, &ctx).unwrap();
        assert_eq!(e.len(), 1);
        assert_eq!(e[0].ring(), ctx.spatial_ring());
    }

    #[test]
    fn nonvanishing_coefficient_is_rejected() {
        let ctx = VarContext::new(&["x"], "t").unwrap();
        let r = ctx.full_ring();
        let p = &Polynomial::var(r, 0) + &Polynomial::var(r, 1);
        assert!(t_expansion(&p, &ctx).is_err());
        let q = &Polynomial::var(r, 0) + &Polynomial::constant(r, rat(1));
        assert!(t_expansion(&q, &ctx).is_err());
    }
}
