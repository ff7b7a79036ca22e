//! Hyperexponential terms given by their log-derivative vectors, and the
//! module elements `Σ c_k h_k` built over them.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gcd::{primitive_part_in, gcd};
use crate::ore::{lclm, twist, OreOp};
use crate::poly::MPoly;
use crate::ratfun::{integer_residues, rational_log_primitive, split_k_factors, RatFun};

/// A hyperexponential term `h`, known only through
/// `(Dt(h)/h, D1(h)/h, ..., Dn(h)/h)`. Two terms with the same vector are the
/// same term; the label is for display.
#[derive(Clone, Debug)]
pub struct HTerm {
    logd: Vec<RatFun>,
    label: String,
}

impl PartialEq for HTerm {
    fn eq(&self, other: &Self) -> bool {
        self.logd == other.logd
    }
}

impl Eq for HTerm {}

impl HTerm {
    /// Checks the arity and the integrability conditions `d_b(r_a) = d_a(r_b)`.
    pub fn new(label: impl Into<String>, logd: Vec<RatFun>) -> Result<Arc<HTerm>> {
        let label = label.into();
        let n = logd.first().map(|r| r.nvars()).unwrap_or(0);
        if logd.len() != n || logd.iter().any(|r| r.nvars() != n) {
            return Err(Error::WrongArity { expected: n, got: logd.len() });
        }
        for a in 0..n {
            for b in a + 1..n {
                if logd[a].derive(b) != logd[b].derive(a) {
                    return Err(Error::NotIntegrable { term: label, a, b });
                }
            }
        }
        Ok(Arc::new(HTerm { logd, label }))
    }

    /// The term `1`.
    pub fn trivial(nvars: usize) -> Arc<HTerm> {
        Arc::new(HTerm { logd: vec![RatFun::zero(nvars); nvars], label: "1".into() })
    }

    pub fn nvars(&self) -> usize {
        self.logd.len()
    }

    pub fn logd(&self) -> &[RatFun] {
        &self.logd
    }

    pub fn r(&self, var: usize) -> &RatFun {
        &self.logd[var]
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn is_trivial(&self) -> bool {
        self.logd.iter().all(|r| r.is_zero())
    }

    /// The term `q·self` for a nonzero rational `q`.
    pub fn times_rational(&self, q: &RatFun, label: impl Into<String>) -> Result<Arc<HTerm>> {
        let logd = (0..self.nvars())
            .map(|v| Ok(&self.logd[v] + &q.log_derivative(v)?))
            .collect::<Result<Vec<_>>>()?;
        Ok(Arc::new(HTerm { logd, label: label.into() }))
    }

    /// `T(c) = Dt(c) + c·r_t`, so that `Dt(c·h) = T(c)·h`.
    pub fn t_map(&self, c: &RatFun) -> RatFun {
        &c.derive(0) + &(c * &self.logd[0])
    }

    /// Coefficient of `D_v(c·h)`: `d_v(c) + c·r_v`.
    pub fn d_coeff(&self, c: &RatFun, var: usize) -> RatFun {
        &c.derive(var) + &(c * &self.logd[var])
    }

    /// Coefficient of `L(c·h)`.
    pub fn op_coeff(&self, op: &OreOp, c: &RatFun) -> RatFun {
        let mut acc = RatFun::zero(c.nvars());
        let mut cur = c.clone();
        for (i, a) in op.coeffs().iter().enumerate() {
            if i > 0 {
                cur = self.t_map(&cur);
            }
            if !a.is_zero() {
                acc = &acc + &(a * &cur);
            }
        }
        acc
    }
}

/// Rational `q` with `D_v(q)/q = r_v(h1) - r_v(h2)` for every variable, i.e.
/// `h1 = q·h2` up to a constant; `None` if the ratio is not rational.
pub fn is_similar(h1: &HTerm, h2: &HTerm) -> Option<RatFun> {
    let n = h1.nvars();
    if h2.nvars() != n {
        return None;
    }
    let mut s: Vec<RatFun> = (0..n).map(|v| h1.r(v) - h2.r(v)).collect();
    let mut q = RatFun::one(n);
    // after variable v is handled the remaining ratio is free of it, and
    // integrability keeps every later component free of it as well
    for v in 0..n {
        if s[v].is_zero() {
            continue;
        }
        let qv = rational_log_primitive(&s[v], v)?;
        for (w, sw) in s.iter_mut().enumerate().skip(v) {
            *sw = &*sw - &qv.log_derivative(w).ok()?;
        }
        q = &q * &qv;
    }
    if s.iter().all(|x| x.is_zero()) {
        Some(q)
    } else {
        None
    }
}

/// A finite sum `Σ c_k·h_k` over pairwise non-similar terms with nonzero
/// coefficients; no parts means zero.
#[derive(Clone, Debug)]
pub struct HElement {
    nvars: usize,
    parts: Vec<(RatFun, Arc<HTerm>)>,
}

impl HElement {
    pub fn zero(nvars: usize) -> Self {
        HElement { nvars, parts: Vec::new() }
    }

    pub fn single(c: RatFun, h: Arc<HTerm>) -> Self {
        let nvars = h.nvars();
        let parts = if c.is_zero() { Vec::new() } else { vec![(c, h)] };
        HElement { nvars, parts }
    }

    /// A rational function, as an element over the trivial term.
    pub fn rational(f: RatFun) -> Self {
        let n = f.nvars();
        Self::single(f, HTerm::trivial(n))
    }

    /// Sum of arbitrary parts, merging similar terms.
    pub fn from_parts(nvars: usize, parts: impl IntoIterator<Item = (RatFun, Arc<HTerm>)>) -> Self {
        let mut e = Self::zero(nvars);
        for (c, h) in parts {
            e.add_part(c, &h);
        }
        e
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn parts(&self) -> &[(RatFun, Arc<HTerm>)] {
        &self.parts
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    fn add_part(&mut self, c: RatFun, h: &Arc<HTerm>) {
        if c.is_zero() {
            return;
        }
        let slot = self.parts.iter().position(|(_, k)| Arc::ptr_eq(k, h) || **k == **h);
        let (idx, c) = match slot {
            Some(i) => (Some(i), c),
            None => {
                // h = q·k with q rational: c·h = (c·q)·k
                let mut found = None;
                for (i, (_, k)) in self.parts.iter().enumerate() {
                    if let Some(q) = is_similar(h, k) {
                        found = Some((i, &c * &q));
                        break;
                    }
                }
                match found {
                    Some((i, cq)) => (Some(i), cq),
                    None => (None, c),
                }
            }
        };
        match idx {
            Some(i) => {
                let sum = &self.parts[i].0 + &c;
                if sum.is_zero() {
                    self.parts.remove(i);
                } else {
                    self.parts[i].0 = sum;
                }
            }
            None => self.parts.push((c, h.clone())),
        }
    }

    pub fn add(&self, other: &HElement) -> HElement {
        let mut out = self.clone();
        for (c, h) in &other.parts {
            out.add_part(c.clone(), h);
        }
        out
    }

    pub fn neg(&self) -> HElement {
        HElement { nvars: self.nvars, parts: self.parts.iter().map(|(c, h)| (-c, h.clone())).collect() }
    }

    pub fn sub(&self, other: &HElement) -> HElement {
        self.add(&other.neg())
    }

    /// Multiplication by a rational function.
    pub fn scale(&self, f: &RatFun) -> HElement {
        if f.is_zero() {
            return HElement::zero(self.nvars);
        }
        HElement { nvars: self.nvars, parts: self.parts.iter().map(|(c, h)| (c * f, h.clone())).collect() }
    }

    /// Coefficient of this element over `h` if it is zero or a single part
    /// over a term similar to `h`.
    pub fn coeff_over(&self, h: &HTerm) -> Option<RatFun> {
        match self.parts.as_slice() {
            [] => Some(RatFun::zero(self.nvars)),
            [(c, k)] => {
                let q = is_similar(k, h)?;
                Some(c * &q)
            }
            _ => None,
        }
    }
}

/// `D_v(e)`.
pub fn d_apply(e: &HElement, var: usize) -> HElement {
    let parts = e.parts.iter().map(|(c, h)| (h.d_coeff(c, var), h.clone()));
    HElement { nvars: e.nvars, parts: parts.filter(|(c, _)| !c.is_zero()).collect() }
}

/// `L(e)`, with `Dt` acting on the module.
pub fn op_apply(op: &OreOp, e: &HElement) -> HElement {
    let parts = e.parts.iter().map(|(c, h)| (h.op_coeff(op, c), h.clone()));
    HElement { nvars: e.nvars, parts: parts.filter(|(c, _)| !c.is_zero()).collect() }
}

/// Whether `a - b` is zero in the module.
pub fn elements_equal(a: &HElement, b: &HElement) -> bool {
    a.sub(b).is_zero()
}

/// Partition of all referenced terms into similarity classes, in order of
/// first appearance.
pub fn similarity_classes(elements: &[HElement]) -> Vec<Vec<Arc<HTerm>>> {
    let mut classes: Vec<Vec<Arc<HTerm>>> = Vec::new();
    for e in elements {
        for (_, h) in &e.parts {
            let mut placed = false;
            for class in classes.iter_mut() {
                if class.iter().any(|k| **k == **h) {
                    placed = true;
                    break;
                }
                if is_similar(h, &class[0]).is_some() {
                    class.push(h.clone());
                    placed = true;
                    break;
                }
            }
            if !placed {
                classes.push(vec![h.clone()]);
            }
        }
    }
    classes
}

/// `(p, r)` with `r_t = Dt(p)/p + r`, `p` a polynomial in `t` with
/// coefficients in the parameters and `r` a rational function of `t` alone.
pub fn split_log_derivative(rt: &RatFun) -> Option<(MPoly, RatFun)> {
    let n = rt.nvars();
    let param_free = |f: &RatFun| f.is_free_of_all_but(&[0]);
    if param_free(rt) {
        return Some((MPoly::one(n), rt.clone()));
    }
    let (_, dx) = split_k_factors(rt.den()).ok()?;
    let e = primitive_part_in(&dx, 0);
    let mut p = MPoly::one(n);
    if e.involves(0) {
        if gcd(&e, &e.derivative(0)).involves(0) {
            // a parameter-dependent pole of order >= 2 cannot come from Dt(p)/p
            return None;
        }
        for (k, g) in integer_residues(rt.num(), rt.den(), &e, 0) {
            if k > 0.into() {
                let k = u32::try_from(&k).ok()?;
                p = &p * &g.pow(k);
            }
        }
    }
    let r = rt - &RatFun::from_poly(p.clone()).log_derivative(0).ok()?;
    if param_free(&r) {
        return Some((p, r));
    }
    if e.involves(0) {
        log::warn!(
            "log-derivative has parameter-dependent poles without positive integer residues; \
             no decomposition over the rationals"
        );
    }
    None
}

/// A nonzero operator with coefficients in `t` alone annihilating the
/// single-part element `e`, if one exists; `1` for the zero element.
pub fn kt_annihilator(e: &HElement) -> Result<Option<OreOp>> {
    let n = e.nvars;
    let (c, h) = match e.parts.as_slice() {
        [] => return Ok(Some(OreOp::one(n))),
        [(c, h)] => (c, h),
        parts => return Err(Error::MultiPartElement(parts.len())),
    };
    let s = &c.log_derivative(0)? + h.r(0);
    let Some((p, r)) = split_log_derivative(&s) else {
        return Ok(None);
    };
    let base = OreOp::dt_pow(n, p.degree_in(0) as usize + 1);
    Ok(Some(twist(&base, &r)))
}

/// lclm of the annihilators of all parts, `None` if some part has none.
pub fn kt_annihilator_multi(e: &HElement) -> Result<Option<OreOp>> {
    let mut acc = OreOp::one(e.nvars);
    for (c, h) in &e.parts {
        match kt_annihilator(&HElement::single(c.clone(), h.clone()))? {
            None => return Ok(None),
            Some(a) => acc = lclm(&acc, &a)?,
        }
    }
    Ok(Some(acc))
}

#[cfg(test)]
mod tests {
    use super::*;

    const N: usize = 3;
    fn v(i: usize) -> RatFun {
        RatFun::var(N, i)
    }
    fn c(k: i64) -> RatFun {
        RatFun::from_int(N, k)
    }
    fn sqrt_t() -> Arc<HTerm> {
        let rt = c(-1).checked_div(&(&v(0) * &c(2))).unwrap();
        HTerm::new("h", vec![rt, c(0), c(0)]).unwrap()
    }

    #[test]
    fn integrability_is_checked() {
        assert!(HTerm::new("ok", vec![v(1), v(0), c(0)]).is_ok());
        assert!(matches!(HTerm::new("bad", vec![v(1), c(0), c(0)]), Err(Error::NotIntegrable { .. })));
        assert!(matches!(HTerm::new("short", vec![c(0), c(0)]), Err(Error::WrongArity { .. })));
    }

    #[test]
    fn module_action_basics() {
        let h = sqrt_t();
        let e = HElement::single(c(1), h.clone());
        let d = d_apply(&e, 0);
        assert_eq!(d.parts()[0].0, h.r(0).clone());
        assert!(d_apply(&HElement::zero(N), 1).is_zero());
        let p = OreOp::from_int_coeffs(N, &[&[1], &[0, 2]]);
        assert!(op_apply(&p, &HElement::single(c(-1), h)).is_zero());
    }

    #[test]
    fn similarity_recovers_rational_ratio() {
        let h = HTerm::new("g", vec![v(1), v(0), c(0)]).unwrap();
        let q = v(0).checked_div(&(&v(1) + &c(1))).unwrap();
        let h2 = h.times_rational(&q, "g2").unwrap();
        let found = is_similar(&h2, &h).unwrap();
        let ratio = found.checked_div(&q).unwrap();
        assert!(ratio.constant_value().is_some());
        assert_eq!(is_similar(&h, &h), Some(RatFun::one(N)));
        let ex1 = HTerm::new("e", vec![c(0), c(1), c(0)]).unwrap();
        assert!(is_similar(&ex1, &HTerm::trivial(N)).is_none());
    }

    #[test]
    fn similar_parts_merge() {
        let h = HTerm::new("g", vec![v(1), v(0), c(0)]).unwrap();
        let q = &v(0) + &v(2);
        let h2 = h.times_rational(&q, "g2").unwrap();
        let a = HElement::single(q.clone(), h.clone());
        let b = HElement::single(c(-1), h2);
        // q·h - 1·(q·h) = 0
        assert!(a.add(&b).is_zero());
        let classes = similarity_classes(&[a, b, HElement::single(c(1), sqrt_t())]);
        assert_eq!(classes.len(), 2);
    }

    #[test]
    fn split_examples() {
        let rt = c(-1).checked_div(&(&v(0) * &c(2))).unwrap();
        assert_eq!(split_log_derivative(&rt), Some((MPoly::one(N), rt.clone())));
        let s = &(&v(0) + &v(1)) + &v(2);
        let (p, r) = split_log_derivative(&c(1).checked_div(&s).unwrap()).unwrap();
        assert_eq!(RatFun::from_poly(p), s);
        assert!(r.is_zero());
        assert!(split_log_derivative(&v(1).checked_div(&(&v(0) - &c(1))).unwrap()).is_none());
        assert!(split_log_derivative(&v(1)).is_none());
    }

    #[test]
    fn annihilator_examples() {
        let h = sqrt_t();
        let p = kt_annihilator(&HElement::single(c(-1), h)).unwrap().unwrap();
        assert_eq!(p, OreOp::from_int_coeffs(N, &[&[1], &[0, 2]]));
        assert_eq!(kt_annihilator(&HElement::zero(N)).unwrap(), Some(OreOp::one(N)));
        let etx = HTerm::new("etx", vec![v(1), v(0), c(0)]).unwrap();
        assert_eq!(kt_annihilator(&HElement::single(c(1), etx)).unwrap(), None);
        // a polynomial times sqrt(t)
        let f = HElement::single(&(&v(0) * &v(1)) + &c(3), sqrt_t());
        let l = kt_annihilator(&f).unwrap().unwrap();
        assert!(op_apply(&l, &f).is_zero());
    }
}
