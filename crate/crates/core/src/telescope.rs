//! Minimal telescopers for a single hyperexponential element with respect to
//! one parameter.

use crate::error::{Error, Result};
use crate::exec::Config;
use crate::hyperexp::{d_apply, elements_equal, op_apply, HElement};
use crate::ore::OreOp;
use crate::ratfun::RatFun;
use crate::rde::{param_rde_par, ParamRdeProblem};

/// `L(f) = D_z(g)` with `L` of minimal order and normalized.
#[derive(Clone, Debug)]
pub struct TelescopeResult {
    pub operator: OreOp,
    pub certificate: HElement,
}

pub fn min_telescoper(f: &HElement, z: usize) -> Result<TelescopeResult> {
    min_telescoper_with(f, z, &Config::default())
}

pub fn min_telescoper_with(f: &HElement, z: usize, cfg: &Config) -> Result<TelescopeResult> {
    let n = f.nvars();
    if z == 0 || z >= n {
        return Err(Error::NotAParameter(z));
    }
    let (c, h) = match f.parts() {
        [] => return Err(Error::ZeroInput),
        [(c, h)] => (c, h),
        parts => return Err(Error::MultiPartElement(parts.len())),
    };
    // with g = u·c·h:  D_z(g) = c·(D_z(u) + w·u)·h  and  Dt^i(f) = T^i(c)·h
    let w = &c.log_derivative(z)? + h.r(z);
    let c_inv = c.inv()?;
    let mut phis = vec![RatFun::one(n)];
    let mut t_pow = c.clone();
    for order in 0..=cfg.max_order {
        if order > 0 {
            t_pow = h.t_map(&t_pow);
            phis.push(&t_pow * &c_inv);
        }
        let problem = ParamRdeProblem { var: z, w: w.clone(), rhs: phis.clone() };
        let space = param_rde_par(&problem, cfg.parallelism)?;
        let mut found = space.inhomogeneous();
        let Some(sol) = found.next() else { continue };
        if found.next().is_some() {
            return Err(Error::InvariantBreach(format!(
                "two independent telescopers at minimal order {order}"
            )));
        }
        let raw = OreOp::from_coeffs(n, sol.e.clone());
        let (operator, lambda) = raw.normalize();
        let certificate = HElement::single(&(&lambda * &sol.u) * c, h.clone());
        if !elements_equal(&op_apply(&operator, f), &d_apply(&certificate, z)) {
            return Err(Error::InvariantBreach("telescoper certificate fails verification".into()));
        }
        return Ok(TelescopeResult { operator, certificate });
    }
    Err(Error::MaxOrderExceeded(cfg.max_order))
}
