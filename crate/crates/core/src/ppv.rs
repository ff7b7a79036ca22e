//! Defining operators of parameterized Picard–Vessiot groups for first-order
//! systems `D_i(Y) = f_i` with rational right-hand sides.
//!
//! The group is `{ a : L(a) = 0 }` where `L` is the minimal parallel
//! telescoper of the `f_i`; the system is treated as hyperexponential
//! elements over the trivial term.

use crate::error::{Error, Result};
use crate::exec::Config;
use crate::hyperexp::{d_apply, elements_equal, HElement, HTerm};
use crate::ore::OreOp;
use crate::paratele::paratele_compatible_with;
use crate::ratfun::RatFun;
use crate::syntax::{default_names, render_group};

#[derive(Clone, Debug)]
pub struct PpvResult {
    /// Normalized defining operator, coefficients in `t` only.
    pub operator: OreOp,
    /// `L(f_i) = D_i(certificate)` for every `i`.
    pub certificate: RatFun,
    /// `{ a ∈ F : L(a) = 0 }` rendered with the monic operator.
    pub group_description: String,
}

pub fn ppv_defining_operator(fs: &[RatFun]) -> Result<PpvResult> {
    ppv_defining_operator_with(fs, &Config::default())
}

pub fn ppv_defining_operator_with(fs: &[RatFun], cfg: &Config) -> Result<PpvResult> {
    let n = fs.first().map(|f| f.nvars()).ok_or(Error::ZeroInput)?;
    if fs.len() + 1 != n {
        return Err(Error::WrongArity { expected: n - 1, got: fs.len() });
    }
    let inputs: Vec<HElement> = fs.iter().map(|f| HElement::rational(f.clone())).collect();
    for i in 0..inputs.len() {
        for j in i + 1..inputs.len() {
            if !elements_equal(&d_apply(&inputs[j], i + 1), &d_apply(&inputs[i], j + 1)) {
                return Err(Error::IncompatibleSystem { i: i + 1, j: j + 1 });
            }
        }
    }
    let r = paratele_compatible_with(&inputs, cfg)?;
    if !r.operator.is_free_of_parameters() {
        return Err(Error::XFreenessViolated(format!("{:?}", r.operator)));
    }
    let certificate = r
        .certificate
        .coeff_over(&HTerm::trivial(n))
        .ok_or_else(|| Error::InvariantBreach("certificate of a rational system is not rational".into()))?;
    let group_description = render_group(&r.operator, &default_names(n));
    Ok(PpvResult { operator: r.operator, certificate, group_description })
}
