//! Parallel telescopers: one operator `L` in `t` and `Dt` alone with
//! `L(f_i) = D_i(g)` for a common certificate `g` and every parameter `x_i`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exec::{self, Config};
use crate::hyperexp::{
    d_apply, elements_equal, is_similar, kt_annihilator, op_apply, similarity_classes, HElement, HTerm,
};
use crate::ore::{lclm_with_cofactors_par, OreOp};
use crate::ratfun::RatFun;
use crate::telescope::min_telescoper_with;

#[derive(Clone, Debug)]
pub struct ParallelTelescoperResult {
    pub operator: OreOp,
    pub certificate: HElement,
    /// Whether the operator is known to have minimal order.
    pub minimal: bool,
}

impl ParallelTelescoperResult {
    pub fn order(&self) -> usize {
        self.operator.order()
    }
}

/// Checks `L(f_i) = D_i(g)` for all `i` (input `i` pairs with variable `i + 1`)
/// and that `L` is free of the parameters.
pub fn verify_parallel(op: &OreOp, cert: &HElement, inputs: &[HElement]) -> Result<()> {
    if !op.is_free_of_parameters() {
        return Err(Error::XFreenessViolated(format!("{op:?}")));
    }
    for (i, f) in inputs.iter().enumerate() {
        if !elements_equal(&op_apply(op, f), &d_apply(cert, i + 1)) {
            return Err(Error::InvariantBreach(format!("certificate identity fails for input {}", i + 1)));
        }
    }
    Ok(())
}

fn check_arity(nvars: usize, count: usize) -> Result<()> {
    if count + 1 != nvars {
        return Err(Error::WrongArity { expected: nvars - 1, got: count });
    }
    Ok(())
}

/// First incompatible pair `(i, j)`, 1-based, if any.
pub fn first_incompatible(inputs: &[HElement]) -> Option<(usize, usize)> {
    for i in 0..inputs.len() {
        for j in i + 1..inputs.len() {
            if !elements_equal(&d_apply(&inputs[j], i + 1), &d_apply(&inputs[i], j + 1)) {
                return Some((i + 1, j + 1));
            }
        }
    }
    None
}

pub fn paratele_similar(coeffs: &[RatFun], h: &Arc<HTerm>) -> Result<ParallelTelescoperResult> {
    paratele_similar_with(coeffs, h, &Config::default())
}

/// Minimal parallel telescoper for `r_1·h, ..., r_n·h`.
pub fn paratele_similar_with(
    coeffs: &[RatFun],
    h: &Arc<HTerm>,
    cfg: &Config,
) -> Result<ParallelTelescoperResult> {
    let n = h.nvars();
    check_arity(n, coeffs.len())?;
    let inputs: Vec<HElement> = coeffs.iter().map(|r| HElement::single(r.clone(), h.clone())).collect();
    if let Some((i, j)) = first_incompatible(&inputs) {
        return Err(Error::NotCompatible { i, j });
    }
    if coeffs.iter().all(|r| r.is_zero()) {
        return Err(Error::ZeroInput);
    }
    let vars: Vec<usize> = (1..n).collect();
    let (op, gamma) = similar_rec(coeffs, h, &vars, cfg)?;
    // the product form is kept: a common polynomial factor is not divided out
    let (op, lambda) = op.clear_denominators();
    let certificate = HElement::single(&gamma * &lambda, h.clone());
    verify_parallel(&op, &certificate, &inputs)?;
    Ok(ParallelTelescoperResult { operator: op, certificate, minimal: true })
}

/// Recursive core: `coeffs[k]·h` pairs with variable `vars[k]`. The first
/// variable is eliminated first. Returns the operator and the certificate
/// coefficient over `h`.
fn similar_rec(coeffs: &[RatFun], h: &Arc<HTerm>, vars: &[usize], cfg: &Config) -> Result<(OreOp, RatFun)> {
    let n = h.nvars();
    if coeffs.iter().all(|r| r.is_zero()) {
        return Ok((OreOp::one(n), RatFun::zero(n)));
    }
    let z = vars[0];
    let (ln, gn) = if coeffs[0].is_zero() {
        (OreOp::one(n), RatFun::zero(n))
    } else {
        let tel = min_telescoper_with(&HElement::single(coeffs[0].clone(), h.clone()), z, cfg)?;
        let g = tel.certificate.coeff_over(h).ok_or_else(|| {
            Error::InvariantBreach("telescoper certificate left the term class".into())
        })?;
        (tel.operator, g)
    };
    if !ln.is_free_of_parameters() {
        return Err(Error::XFreenessViolated(format!("telescoper with respect to variable {z}: {ln:?}")));
    }
    if vars.len() == 1 {
        return Ok((ln, gn));
    }
    // psi_i·h = D_i(g_1) - L_1(r_i·h) is free of z
    let psis: Vec<RatFun> = (1..vars.len())
        .map(|k| &h.d_coeff(&gn, vars[k]) - &h.op_coeff(&ln, &coeffs[k]))
        .collect();
    for psi in &psis {
        if !h.d_coeff(psi, z).is_zero() {
            return Err(Error::InvariantBreach(format!("reduced input still depends on variable {z}")));
        }
    }
    let Some(i0) = psis.iter().position(|p| !p.is_zero()) else {
        return Ok((ln, gn));
    };
    // rebase onto psi_{i0}·h, whose data no longer involve z
    let anchor = psis[i0].clone();
    let base = h.times_rational(&anchor, format!("{}'", h.label()))?;
    let anchor_inv = anchor.inv()?;
    let reduced: Vec<RatFun> = psis.iter().map(|p| p * &anchor_inv).collect();
    let (lt, gt) = similar_rec(&reduced, &base, &vars[1..], cfg)?;
    let op = &lt * &ln;
    let gamma = &h.op_coeff(&lt, &gn) - &(&gt * &anchor);
    Ok((op, gamma))
}

pub fn paratele_compatible(inputs: &[HElement]) -> Result<ParallelTelescoperResult> {
    paratele_compatible_with(inputs, &Config::default())
}

/// Minimal parallel telescoper for compatible inputs: one telescoper per
/// similarity class, merged by least common left multiples.
pub fn paratele_compatible_with(inputs: &[HElement], cfg: &Config) -> Result<ParallelTelescoperResult> {
    let n = inputs.first().map(|f| f.nvars()).ok_or(Error::ZeroInput)?;
    check_arity(n, inputs.len())?;
    if let Some((i, j)) = first_incompatible(inputs) {
        return Err(Error::NotCompatible { i, j });
    }
    if inputs.iter().all(|f| f.is_zero()) {
        return Ok(ParallelTelescoperResult {
            operator: OreOp::one(n),
            certificate: HElement::zero(n),
            minimal: true,
        });
    }
    let classes = similarity_classes(inputs);
    // project every input onto every class, expressed over the class representative
    let projections: Vec<Vec<RatFun>> = classes
        .iter()
        .map(|class| {
            let rep = &class[0];
            inputs
                .iter()
                .map(|f| {
                    f.parts()
                        .iter()
                        .find_map(|(c, k)| {
                            if !class.iter().any(|m| **m == **k) {
                                return None;
                            }
                            let q = is_similar(k, rep).expect("class members are similar");
                            Some(c * &q)
                        })
                        .unwrap_or_else(|| RatFun::zero(n))
                })
                .collect()
        })
        .collect();
    for (class, coeffs) in classes.iter().zip(&projections) {
        let parts: Vec<HElement> = coeffs.iter().map(|r| HElement::single(r.clone(), class[0].clone())).collect();
        if let Some((i, j)) = first_incompatible(&parts) {
            return Err(Error::CrossClassNonzero { i, j });
        }
    }
    let jobs: Vec<(Vec<RatFun>, Arc<HTerm>)> =
        projections.into_iter().zip(classes.iter().map(|c| c[0].clone())).collect();
    let per_class = exec::map(cfg.parallelism, &jobs, |(coeffs, rep)| {
        let vars: Vec<usize> = (1..n).collect();
        similar_rec(coeffs, rep, &vars, cfg).map(|(op, gamma)| {
            let (op, lambda) = op.clear_denominators();
            (op, HElement::single(&gamma * &lambda, rep.clone()))
        })
    });
    let per_class: Vec<(OreOp, HElement)> = per_class.into_iter().collect::<Result<_>>()?;

    let mut op = per_class[0].0.clone();
    let mut cofactors = vec![OreOp::one(n)];
    for (lc, _) in &per_class[1..] {
        let (l, u, v) = lclm_with_cofactors_par(&op, lc, cfg.parallelism)?;
        for c in cofactors.iter_mut() {
            *c = &u * &*c;
        }
        cofactors.push(v);
        op = l;
    }
    let certificate = cofactors
        .iter()
        .zip(&per_class)
        .fold(HElement::zero(n), |acc, (u, (_, g))| acc.add(&op_apply(u, g)));
    verify_parallel(&op, &certificate, inputs)?;
    Ok(ParallelTelescoperResult { operator: op, certificate, minimal: true })
}

pub fn existence_check(inputs: &[HElement]) -> Result<Option<OreOp>> {
    existence_check_with(inputs, &Config::default())
}

/// A nonzero `P` in `t` and `Dt` with `P(D_i(f_j) - D_j(f_i)) = 0` for all
/// pairs, or `None` when no parallel telescoper exists.
pub fn existence_check_with(inputs: &[HElement], cfg: &Config) -> Result<Option<OreOp>> {
    let n = inputs.first().map(|f| f.nvars()).ok_or(Error::ZeroInput)?;
    check_arity(n, inputs.len())?;
    let pairs: Vec<(usize, usize)> =
        (0..inputs.len()).flat_map(|i| (i + 1..inputs.len()).map(move |j| (i, j))).collect();
    let results = exec::map(cfg.parallelism, &pairs, |&(i, j)| -> Result<Option<OreOp>> {
        let delta = d_apply(&inputs[j], i + 1).sub(&d_apply(&inputs[i], j + 1));
        // parts of different classes must be annihilated separately
        let mut p = OreOp::one(n);
        for (c, h) in delta.parts() {
            match kt_annihilator(&HElement::single(c.clone(), h.clone()))? {
                None => return Ok(None),
                Some(a) => p = lclm_with_cofactors_par(&p, &a, cfg.parallelism)?.0,
            }
        }
        Ok(Some(p))
    });
    let mut total = OreOp::one(n);
    for r in results {
        match r? {
            None => return Ok(None),
            Some(p) => total = lclm_with_cofactors_par(&total, &p, cfg.parallelism)?.0,
        }
    }
    Ok(Some(total.normalized()))
}

pub fn paratele_general(inputs: &[HElement]) -> Result<ParallelTelescoperResult> {
    paratele_general_with(inputs, &Config::default())
}

/// Parallel telescoper for arbitrary inputs; minimal when they are compatible.
pub fn paratele_general_with(inputs: &[HElement], cfg: &Config) -> Result<ParallelTelescoperResult> {
    let n = inputs.first().map(|f| f.nvars()).ok_or(Error::ZeroInput)?;
    check_arity(n, inputs.len())?;
    if first_incompatible(inputs).is_none() {
        return paratele_compatible_with(inputs, cfg);
    }
    let p = existence_check_with(inputs, cfg)?.ok_or(Error::NoParallelTelescoperExists)?;
    let images: Vec<HElement> = inputs.iter().map(|f| op_apply(&p, f)).collect();
    let inner = paratele_compatible_with(&images, cfg)?;
    let (op, lambda) = (&inner.operator * &p).clear_denominators();
    let certificate = inner.certificate.scale(&lambda);
    verify_parallel(&op, &certificate, inputs)?;
    Ok(ParallelTelescoperResult { operator: op, certificate, minimal: false })
}
