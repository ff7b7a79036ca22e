//! Linear differential operators in `Dt` with rational function coefficients.

use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::exec::Parallelism;
use crate::gcd::{gcd, lcm};
use crate::linalg::{nullspace_ratfun, rational_content};
use crate::poly::{forward_owned, MPoly};
use crate::ratfun::RatFun;

/// `Σ a_i Dt^i`, coefficients stored low to high with a nonzero leading
/// coefficient; the zero operator has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OreOp {
    nvars: usize,
    coeffs: Vec<RatFun>,
}

impl OreOp {
    pub fn zero(nvars: usize) -> Self {
        OreOp { nvars, coeffs: Vec::new() }
    }

    pub fn one(nvars: usize) -> Self {
        OreOp { nvars, coeffs: vec![RatFun::one(nvars)] }
    }

    /// The derivation `Dt` itself.
    pub fn dt(nvars: usize) -> Self {
        Self::dt_pow(nvars, 1)
    }

    pub fn dt_pow(nvars: usize, k: usize) -> Self {
        let mut coeffs = vec![RatFun::zero(nvars); k + 1];
        coeffs[k] = RatFun::one(nvars);
        OreOp { nvars, coeffs }
    }

    pub fn from_coeffs(nvars: usize, coeffs: Vec<RatFun>) -> Self {
        let mut op = OreOp { nvars, coeffs };
        op.trim();
        op
    }

    /// Operator with integer polynomial coefficients in `t` given low to high,
    /// e.g. `[[-15], [0, 18], ...]`.
    pub fn from_int_coeffs(nvars: usize, coeffs: &[&[i64]]) -> Self {
        let t = RatFun::var(nvars, 0);
        let coeffs = coeffs
            .iter()
            .map(|cs| {
                cs.iter().rev().fold(RatFun::zero(nvars), |acc, &c| &(&acc * &t) + &RatFun::from_int(nvars, c))
            })
            .collect();
        Self::from_coeffs(nvars, coeffs)
    }

    pub fn constant(c: RatFun) -> Self {
        let n = c.nvars();
        Self::from_coeffs(n, vec![c])
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn coeffs(&self) -> &[RatFun] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> RatFun {
        self.coeffs.get(i).cloned().unwrap_or_else(|| RatFun::zero(self.nvars))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Order; the zero operator has order 0.
    pub fn order(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading_coeff(&self) -> Option<&RatFun> {
        self.coeffs.last()
    }

    /// True when every coefficient involves only `t`.
    pub fn is_free_of_parameters(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_free_of_all_but(&[0]))
    }

    pub fn involves(&self, var: usize) -> bool {
        self.coeffs.iter().any(|c| c.involves(var))
    }

    /// Left multiplication by a function: `c · self`.
    pub fn scale(&self, c: &RatFun) -> OreOp {
        Self::from_coeffs(self.nvars, self.coeffs.iter().map(|a| a * c).collect())
    }

    /// `Dt · self`.
    fn dt_times(&self) -> OreOp {
        let mut out = vec![RatFun::zero(self.nvars); self.coeffs.len() + 1];
        for (j, b) in self.coeffs.iter().enumerate() {
            out[j] = &out[j] + &b.derive(0);
            out[j + 1] = &out[j + 1] + b;
        }
        Self::from_coeffs(self.nvars, out)
    }

    /// `[self, Dt·self, ..., Dt^k·self]`.
    fn dt_multiples(&self, k: usize) -> Vec<OreOp> {
        let mut out = Vec::with_capacity(k + 1);
        out.push(self.clone());
        for i in 0..k {
            let next = out[i].dt_times();
            out.push(next);
        }
        out
    }

    fn combine(&self, other: &OreOp, negate: bool) -> OreOp {
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = RatFun::zero(self.nvars);
        let coeffs = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).unwrap_or(&z);
                let b = other.coeffs.get(i).unwrap_or(&z);
                if negate {
                    a - b
                } else {
                    a + b
                }
            })
            .collect();
        Self::from_coeffs(self.nvars, coeffs)
    }

    fn product(&self, other: &OreOp) -> OreOp {
        if self.is_zero() || other.is_zero() {
            return OreOp::zero(self.nvars);
        }
        let multiples = other.dt_multiples(self.order());
        let mut acc = OreOp::zero(self.nvars);
        for (a, m) in self.coeffs.iter().zip(&multiples) {
            if !a.is_zero() {
                acc = &acc + &m.scale(a);
            }
        }
        acc
    }

    /// Applies the operator to a rational function, `Dt` acting as `d/dt`.
    pub fn apply_to(&self, f: &RatFun) -> RatFun {
        let mut acc = RatFun::zero(self.nvars);
        let mut d = f.clone();
        for (i, a) in self.coeffs.iter().enumerate() {
            if i > 0 {
                d = d.derive(0);
            }
            if !a.is_zero() {
                acc = &acc + &(a * &d);
            }
        }
        acc
    }

    /// Presentation with coprime polynomial coefficients, integer content 1 and
    /// positive leading value, together with the factor `lambda` such that the
    /// result equals `lambda · self`.
    pub fn normalize(&self) -> (OreOp, RatFun) {
        self.normalize_inner(true)
    }

    /// Like [`OreOp::normalize`] but keeps a common polynomial factor of the
    /// coefficients: only denominators, the rational content and the sign
    /// are removed.
    pub fn clear_denominators(&self) -> (OreOp, RatFun) {
        self.normalize_inner(false)
    }

    fn normalize_inner(&self, strip_gcd: bool) -> (OreOp, RatFun) {
        let n = self.nvars;
        if self.is_zero() {
            return (self.clone(), RatFun::one(n));
        }
        let den = self
            .coeffs
            .iter()
            .filter(|c| !c.is_zero())
            .fold(MPoly::one(n), |acc, c| if c.den().is_one() { acc } else { lcm(&acc, c.den()) });
        let polys: Vec<MPoly> = self
            .coeffs
            .iter()
            .map(|c| if c.is_zero() { MPoly::zero(n) } else { &den.div_exact(c.den()).unwrap() * c.num() })
            .collect();
        let mut g = MPoly::zero(n);
        if !strip_gcd {
            g = MPoly::one(n);
        }
        for p in polys.iter().filter(|p| !p.is_zero() && strip_gcd) {
            g = gcd(&g, p);
            if g.is_one() {
                break;
            }
        }
        let polys: Vec<MPoly> =
            polys.into_iter().map(|p| if p.is_zero() { p } else { p.div_exact(&g).unwrap() }).collect();
        let mut content = rational_content(polys.iter());
        if polys.last().unwrap().leading_coeff().is_negative() {
            content = -content;
        }
        let inv = content.recip();
        let coeffs: Vec<RatFun> = polys.into_iter().map(|p| RatFun::from_poly(p.scale(&inv))).collect();
        let lambda = RatFun::new(den.scale(&inv), g).expect("nonzero content");
        (OreOp { nvars: n, coeffs }, lambda)
    }

    pub fn normalized(&self) -> OreOp {
        self.normalize().0
    }

    /// Monic presentation (leading coefficient 1).
    pub fn monic(&self) -> OreOp {
        match self.leading_coeff() {
            None => self.clone(),
            Some(lc) => self.scale(&lc.inv().unwrap()),
        }
    }

    /// `self(Dt - r)`: every `Dt` replaced by `Dt - r`, normalized.
    pub fn twist(&self, r: &RatFun) -> OreOp {
        twist(self, r)
    }
}

impl Add for &OreOp {
    type Output = OreOp;
    fn add(self, rhs: &OreOp) -> OreOp {
        self.combine(rhs, false)
    }
}

impl Sub for &OreOp {
    type Output = OreOp;
    fn sub(self, rhs: &OreOp) -> OreOp {
        self.combine(rhs, true)
    }
}

impl Mul for &OreOp {
    type Output = OreOp;
    fn mul(self, rhs: &OreOp) -> OreOp {
        self.product(rhs)
    }
}

impl Neg for &OreOp {
    type Output = OreOp;
    fn neg(self) -> OreOp {
        OreOp { nvars: self.nvars, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

forward_owned!(Add, add, OreOp);
forward_owned!(Sub, sub, OreOp);
forward_owned!(Mul, mul, OreOp);

pub fn op_mul(a: &OreOp, b: &OreOp) -> OreOp {
    a * b
}

/// `(Q, R)` with `A = Q·B + R` and `order(R) < order(B)`.
pub fn right_divmod(a: &OreOp, b: &OreOp) -> Result<(OreOp, OreOp)> {
    if b.is_zero() {
        return Err(Error::DivisorZero);
    }
    let n = a.nvars;
    if a.is_zero() || a.order() < b.order() {
        return Ok((OreOp::zero(n), a.clone()));
    }
    let k = a.order() - b.order();
    let multiples = b.dt_multiples(k);
    let lc_inv = b.leading_coeff().unwrap().inv()?;
    let mut q = vec![RatFun::zero(n); k + 1];
    let mut r = a.clone();
    while !r.is_zero() && r.order() >= b.order() {
        let shift = r.order() - b.order();
        let c = r.leading_coeff().unwrap() * &lc_inv;
        r = &r - &multiples[shift].scale(&c);
        q[shift] = c;
    }
    Ok((OreOp::from_coeffs(n, q), r))
}

/// Least common left multiple together with cofactors `(L, U, V)` such that
/// `L = U·A = V·B`, `L` normalized.
pub fn lclm_with_cofactors(a: &OreOp, b: &OreOp) -> Result<(OreOp, OreOp, OreOp)> {
    lclm_with_cofactors_par(a, b, Parallelism::default())
}

pub(crate) fn lclm_with_cofactors_par(
    a: &OreOp,
    b: &OreOp,
    par: Parallelism,
) -> Result<(OreOp, OreOp, OreOp)> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::OperandZero);
    }
    let n = a.nvars;
    let (da, db) = (a.order(), b.order());
    let ma = a.dt_multiples(db);
    let mb = b.dt_multiples(da);
    // smallest m admitting U·A = V·B with order(U) = m - da, order(V) = m - db
    for m in da.max(db)..=da + db {
        let cols: Vec<OreOp> = ma[..=m - da].iter().cloned().chain(mb[..=m - db].iter().map(|x| -x)).collect();
        let rows: Vec<Vec<RatFun>> = (0..=m).map(|i| cols.iter().map(|c| c.coeff(i)).collect()).collect();
        let basis = nullspace_ratfun(n, &rows, cols.len(), par);
        if let Some(v) = basis.into_iter().next() {
            let u = OreOp::from_coeffs(n, v[..=m - da].to_vec());
            let w = OreOp::from_coeffs(n, v[m - da + 1..].to_vec());
            let l = &u * a;
            let (l, lambda) = l.normalize();
            return Ok((l, u.scale(&lambda), w.scale(&lambda)));
        }
    }
    Err(Error::InvariantBreach("no common left multiple up to the order sum".into()))
}

pub fn lclm(a: &OreOp, b: &OreOp) -> Result<OreOp> {
    Ok(lclm_with_cofactors(a, b)?.0)
}

/// `A(Dt - r)`, normalized.
pub fn twist(a: &OreOp, r: &RatFun) -> OreOp {
    let n = a.nvars;
    if a.is_zero() {
        return a.clone();
    }
    let shift = OreOp::from_coeffs(n, vec![-r, RatFun::one(n)]);
    let mut power = OreOp::one(n);
    let mut acc = OreOp::zero(n);
    for (i, c) in a.coeffs.iter().enumerate() {
        if i > 0 {
            power = &shift * &power;
        }
        if !c.is_zero() {
            acc = &acc + &power.scale(c);
        }
    }
    acc.normalized()
}

/// Whether two operators agree up to a nonzero function factor.
pub fn same_up_to_normalization(a: &OreOp, b: &OreOp) -> bool {
    a.normalized() == b.normalized()
}
