//! Rational functions over the rationals in `t, x1, ..., xn`, kept in canonical
//! form, together with the factorization primitives the rest of the crate uses.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::gcd::{gcd, primitive_part_in, squarefree_in, SquarefreeDecomposition};
use crate::poly::{forward_owned, Exponents, MPoly, Rat};
use crate::upoly::UPoly;

/// `num / den` with `gcd(num, den) = 1` and `den` normalized (integer
/// coefficients, integer content 1, positive leading coefficient in grlex).
/// Zero is `0 / 1`. Equality is therefore equality of rational functions.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFun {
    num: MPoly,
    den: MPoly,
}

impl fmt::Debug for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?})/({:?})", self.num, self.den)
    }
}

impl RatFun {
    pub fn zero(nvars: usize) -> Self {
        RatFun { num: MPoly::zero(nvars), den: MPoly::one(nvars) }
    }

    pub fn one(nvars: usize) -> Self {
        RatFun { num: MPoly::one(nvars), den: MPoly::one(nvars) }
    }

    pub fn constant(nvars: usize, c: Rat) -> Self {
        RatFun { num: MPoly::constant(nvars, c), den: MPoly::one(nvars) }
    }

    pub fn from_int(nvars: usize, c: i64) -> Self {
        Self::constant(nvars, Rat::from_integer(BigInt::from(c)))
    }

    pub fn var(nvars: usize, var: usize) -> Self {
        Self::from_poly(MPoly::var(nvars, var))
    }

    pub fn from_poly(p: MPoly) -> Self {
        let n = p.nvars();
        RatFun { num: p, den: MPoly::one(n) }
    }

    /// Reduces `num / den` to canonical form.
    pub fn new(num: MPoly, den: MPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: MPoly, den: MPoly) -> Self {
        if num.is_zero() {
            return Self::zero(num.nvars());
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).unwrap(), den.div_exact(&g).unwrap())
        };
        Self::with_coprime(num, den)
    }

    /// Canonicalizes the unit of an already coprime pair.
    fn with_coprime(num: MPoly, den: MPoly) -> Self {
        let (c, den) = den.integer_primitive();
        RatFun { num: num.scale(&c.recip()), den }
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn num(&self) -> &MPoly {
        &self.num
    }

    pub fn den(&self) -> &MPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn constant_value(&self) -> Option<Rat> {
        if self.den.is_one() {
            self.num.constant_value()
        } else {
            None
        }
    }

    pub fn involves(&self, var: usize) -> bool {
        self.num.involves(var) || self.den.involves(var)
    }

    /// True when only variables from `keep` occur.
    pub fn is_free_of_all_but(&self, keep: &[usize]) -> bool {
        self.num.is_free_of_all_but(keep) && self.den.is_free_of_all_but(keep)
    }

    pub fn scale(&self, c: &Rat) -> RatFun {
        RatFun { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn inv(&self) -> Result<RatFun> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::with_coprime(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, other: &RatFun) -> Result<RatFun> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, k: i32) -> Result<RatFun> {
        if k < 0 {
            return self.inv()?.pow(-k);
        }
        let k = k as u32;
        Ok(RatFun { num: self.num.pow(k), den: self.den.pow(k) })
    }

    /// Partial derivative with respect to `var`.
    pub fn derive(&self, var: usize) -> RatFun {
        let dn = self.num.derivative(var);
        if self.den.is_constant() {
            return RatFun { num: dn, den: self.den.clone() };
        }
        let dd = self.den.derivative(var);
        if dd.is_zero() {
            return RatFun::with_coprime(dn, self.den.clone()).reduce_again();
        }
        // (n/d)' = (n' d - n d') / d^2; with g = gcd(d, d') the numerator and
        // denominator can be divided by g up front
        let g = gcd(&self.den, &dd);
        let d_over_g = self.den.div_exact(&g).unwrap();
        let dd_over_g = dd.div_exact(&g).unwrap();
        let num = &(&dn * &d_over_g) - &(&self.num * &dd_over_g);
        let den = &self.den * &d_over_g;
        RatFun::reduce(num, den)
    }

    fn reduce_again(self) -> RatFun {
        RatFun::reduce(self.num, self.den)
    }

    /// Log-derivative `derive(self, var) / self`.
    pub fn log_derivative(&self, var: usize) -> Result<RatFun> {
        self.derive(var).checked_div(self)
    }

    /// Substitutes a rational constant for `var`; `None` if the denominator vanishes.
    pub fn eval_var(&self, var: usize, value: &Rat) -> Option<RatFun> {
        let den = self.den.eval_var(var, value);
        if den.is_zero() {
            return None;
        }
        Some(RatFun::reduce(self.num.eval_var(var, value), den))
    }

    /// Value at a full point; `None` at a pole.
    pub fn eval(&self, point: &[Rat]) -> Option<Rat> {
        let d = self.den.eval(point);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(point) / d)
    }

    /// Substitutes a rational function for `var`.
    pub fn substitute(&self, var: usize, value: &RatFun) -> Result<RatFun> {
        let subst = |p: &MPoly| -> RatFun {
            let coeffs = p.coeffs_in(var);
            let mut acc = RatFun::zero(p.nvars());
            for c in coeffs.iter().rev() {
                acc = &(&acc * value) + &RatFun::from_poly(c.clone());
            }
            acc
        };
        subst(&self.num).checked_div(&subst(&self.den))
    }

    fn sum(&self, other: &RatFun, negate: bool) -> RatFun {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return if negate { -other } else { other.clone() };
        }
        let on = if negate { -&other.num } else { other.num.clone() };
        if self.den == other.den {
            return RatFun::reduce(&self.num + &on, self.den.clone());
        }
        if self.den.is_one() {
            return RatFun::with_coprime(&(&self.num * &other.den) + &on, other.den.clone());
        }
        if other.den.is_one() {
            return RatFun::with_coprime(&self.num + &(&on * &self.den), self.den.clone());
        }
        // Henrici: only the common part of the denominators can cancel
        let g = gcd(&self.den, &other.den);
        let b_g = self.den.div_exact(&g).unwrap();
        let d_g = other.den.div_exact(&g).unwrap();
        let num = &(&self.num * &d_g) + &(&on * &b_g);
        let den = &self.den * &d_g;
        if g.is_one() {
            RatFun::with_coprime(num, den)
        } else {
            RatFun::reduce(num, den)
        }
    }

    fn product(&self, other: &RatFun) -> RatFun {
        if self.is_zero() || other.is_zero() {
            return RatFun::zero(self.nvars());
        }
        let g1 = gcd(&self.num, &other.den);
        let g2 = gcd(&other.num, &self.den);
        let n1 = self.num.div_exact(&g1).unwrap();
        let d2 = other.den.div_exact(&g1).unwrap();
        let n2 = other.num.div_exact(&g2).unwrap();
        let d1 = self.den.div_exact(&g2).unwrap();
        RatFun::with_coprime(&n1 * &n2, &d1 * &d2)
    }
}

impl Add for &RatFun {
    type Output = RatFun;
    fn add(self, rhs: &RatFun) -> RatFun {
        self.sum(rhs, false)
    }
}

impl Sub for &RatFun {
    type Output = RatFun;
    fn sub(self, rhs: &RatFun) -> RatFun {
        self.sum(rhs, true)
    }
}

impl Mul for &RatFun {
    type Output = RatFun;
    fn mul(self, rhs: &RatFun) -> RatFun {
        self.product(rhs)
    }
}

impl Neg for &RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        RatFun { num: -&self.num, den: self.den.clone() }
    }
}

impl Neg for RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        -&self
    }
}

forward_owned!(Add, add, RatFun);
forward_owned!(Sub, sub, RatFun);
forward_owned!(Mul, mul, RatFun);

/// Arithmetic entry point with an explicit operation selector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn rf_arith(a: &RatFun, b: &RatFun, op: ArithOp) -> Result<RatFun> {
    Ok(match op {
        ArithOp::Add => a + b,
        ArithOp::Sub => a - b,
        ArithOp::Mul => a * b,
        ArithOp::Div => a.checked_div(b)?,
    })
}

/// Squarefree decomposition of a nonzero polynomial with respect to `var`.
pub fn squarefree(p: &MPoly, var: usize) -> Result<SquarefreeDecomposition> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    Ok(squarefree_in(p, var))
}

/// Splits `p`, viewed as a polynomial in `t` over the field of the parameters,
/// into `(p_k, p_x)` with `p = p_k * p_x`: `p_k` collects every factor whose
/// coefficients are rational constants, `p_x` has no such nonconstant factor.
pub fn split_k_factors(p: &MPoly) -> Result<(MPoly, MPoly)> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    // a factor in Q[t] divides p iff it divides every coefficient of p with
    // respect to the parameter monomials
    let mut groups: std::collections::BTreeMap<Vec<u32>, Vec<Rat>> = Default::default();
    for (e, c) in p.terms() {
        let key = e.0[1..].to_vec();
        let k = e.0[0] as usize;
        let entry = groups.entry(key).or_default();
        if entry.len() <= k {
            entry.resize(k + 1, Rat::zero());
        }
        entry[k] = c.clone();
    }
    let mut g = UPoly::zero();
    for coeffs in groups.into_values() {
        g = g.gcd(&UPoly::new(coeffs));
        if g.degree() == Some(0) {
            break;
        }
    }
    let n = p.nvars();
    let pk = MPoly::from_terms(
        n,
        g.coeffs().iter().enumerate().map(|(k, c)| {
            let mut e = Exponents::zero(n);
            e.0[0] = k as u32;
            (e, c.clone())
        }),
    )
    .normalized();
    let px = p.div_exact(&pk).expect("constant-coefficient part divides");
    Ok((pk, px))
}

/// Result of a squarefree partial fraction decomposition with respect to one
/// variable.
#[derive(Clone, Debug, PartialEq)]
pub struct PartialFractions {
    /// Polynomial in the chosen variable (coefficients rational in the others).
    pub polynomial_part: RatFun,
    /// `(factor, power, numerator)` meaning `numerator / factor^power`; each
    /// numerator has lower degree in the variable than its factor.
    pub terms: Vec<(MPoly, u32, RatFun)>,
}

impl PartialFractions {
    pub fn recombine(&self) -> RatFun {
        self.terms.iter().fold(self.polynomial_part.clone(), |acc, (f, k, a)| {
            let denom = RatFun::from_poly(f.pow(*k));
            &acc + &a.checked_div(&denom).expect("nonzero factor")
        })
    }
}

/// Polynomial in one variable with coefficients rational in the others.
#[derive(Clone, Debug)]
struct VPoly {
    var: usize,
    nvars: usize,
    coeffs: Vec<RatFun>,
}

impl VPoly {
    fn from_mpoly(p: &MPoly, var: usize) -> Self {
        let mut v = VPoly {
            var,
            nvars: p.nvars(),
            coeffs: p.coeffs_in(var).into_iter().map(RatFun::from_poly).collect(),
        };
        v.trim();
        v
    }

    fn from_coeffs(var: usize, nvars: usize, coeffs: Vec<RatFun>) -> Self {
        let mut v = VPoly { var, nvars, coeffs };
        v.trim();
        v
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    fn to_ratfun(&self) -> RatFun {
        let x = RatFun::var(self.nvars, self.var);
        let mut acc = RatFun::zero(self.nvars);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &x) + c;
        }
        acc
    }

    fn add(&self, other: &VPoly) -> VPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = RatFun::zero(self.nvars);
        let coeffs = (0..n)
            .map(|i| self.coeffs.get(i).unwrap_or(&z) + other.coeffs.get(i).unwrap_or(&z))
            .collect();
        VPoly::from_coeffs(self.var, self.nvars, coeffs)
    }

    fn neg(&self) -> VPoly {
        VPoly::from_coeffs(self.var, self.nvars, self.coeffs.iter().map(|c| -c).collect())
    }

    fn mul(&self, other: &VPoly) -> VPoly {
        if self.is_zero() || other.is_zero() {
            return VPoly::from_coeffs(self.var, self.nvars, Vec::new());
        }
        let mut out = vec![RatFun::zero(self.nvars); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        VPoly::from_coeffs(self.var, self.nvars, out)
    }

    fn div_rem(&self, d: &VPoly) -> (VPoly, VPoly) {
        let dd = d.degree();
        let lc_inv = d.coeffs.last().expect("nonzero divisor").inv().unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (VPoly::from_coeffs(self.var, self.nvars, Vec::new()), self.clone());
        }
        let mut quot = vec![RatFun::zero(self.nvars); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let q = &rem[k + dd] * &lc_inv;
            if !q.is_zero() {
                for (i, c) in d.coeffs.iter().enumerate() {
                    rem[k + i] = &rem[k + i] - &(&q * c);
                }
            }
            quot[k] = q;
        }
        rem.truncate(dd);
        (
            VPoly::from_coeffs(self.var, self.nvars, quot),
            VPoly::from_coeffs(self.var, self.nvars, rem),
        )
    }

    /// `(s, t)` with `s*a + t*b = 1`, assuming `a` and `b` coprime.
    fn bezout(a: &VPoly, b: &VPoly) -> (VPoly, VPoly) {
        let one = VPoly::from_coeffs(a.var, a.nvars, vec![RatFun::one(a.nvars)]);
        let zero = VPoly::from_coeffs(a.var, a.nvars, Vec::new());
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (one.clone(), zero.clone());
        let (mut t0, mut t1) = (zero, one);
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s2 = s0.add(&q.mul(&s1).neg());
            let t2 = t0.add(&q.mul(&t1).neg());
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
            t0 = t1;
            t1 = t2;
        }
        // r0 is a nonzero constant for coprime inputs
        let c = r0.coeffs[0].inv().expect("coprime inputs");
        let scale = VPoly::from_coeffs(a.var, a.nvars, vec![c]);
        (s0.mul(&scale), t0.mul(&scale))
    }
}

/// Squarefree partial fraction decomposition of `f` with respect to `var`.
pub fn partial_fractions(f: &RatFun, var: usize) -> PartialFractions {
    let n = f.nvars();
    if f.is_zero() || !f.den().involves(var) {
        return PartialFractions { polynomial_part: f.clone(), terms: Vec::new() };
    }
    let sqf = squarefree_in(f.den(), var);
    // the content of the denominator is a unit over the other variables
    let content_inv = RatFun::from_poly(sqf.content.clone()).inv().unwrap();
    let num = VPoly::from_mpoly(f.num(), var);
    let num = VPoly::from_coeffs(var, n, num.coeffs.iter().map(|c| c * &content_inv).collect());
    let powered: Vec<(MPoly, u32, VPoly)> = sqf
        .factors
        .iter()
        .map(|(d, m)| (d.clone(), *m, VPoly::from_mpoly(&d.pow(*m), var)))
        .collect();
    let full = powered
        .iter()
        .fold(VPoly::from_coeffs(var, n, vec![RatFun::one(n)]), |acc, (_, _, q)| acc.mul(q));
    let (poly_part, mut rem) = num.div_rem(&full);

    let mut terms = Vec::new();
    let mut rest = full;
    for (idx, (d, m, q)) in powered.iter().enumerate() {
        let numerator_i = if idx + 1 == powered.len() {
            rem.clone()
        } else {
            let (others, _) = rest.div_rem(q);
            // rem/(q*others) = rem*s/others + rem*u/q with s*q + u*others = 1
            let (s, u) = VPoly::bezout(q, &others);
            let a_i = rem.mul(&u).div_rem(q).1;
            rem = rem.mul(&s).div_rem(&others).1;
            rest = others;
            a_i
        };
        // d-adic expansion of numerator_i / d^m
        let dv = VPoly::from_mpoly(d, var);
        let mut a = numerator_i;
        for j in 0..*m {
            if a.is_zero() {
                break;
            }
            let (quo, digit) = a.div_rem(&dv);
            if !digit.is_zero() {
                terms.push((d.clone(), m - j, digit.to_ratfun()));
            }
            a = quo;
        }
    }
    PartialFractions { polynomial_part: poly_part.to_ratfun(), terms }
}

/// Deterministic pseudo-random specialization points.
pub(crate) fn specialization_point(nvars: usize, skip: usize, attempt: usize) -> Vec<Rat> {
    (0..nvars)
        .map(|v| {
            if v == skip {
                return Rat::zero();
            }
            let h = (attempt as u64 + 1)
                .wrapping_mul(0x9E37_79B9_7F4A_7C15)
                .wrapping_add((v as u64 + 1).wrapping_mul(0xC2B2_AE3D_27D4_EB4F));
            let h = (h ^ (h >> 29)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
            let val = (h >> 40) % 211;
            Rat::from_integer(BigInt::from(val as i64 - 105))
        })
        .collect()
}

/// Integer residues of `num/den` at the roots of `factor` with respect to `var`.
///
/// `factor` must be squarefree in `var` and divide `den` exactly once. Returns
/// every nonzero integer `n` that is the residue at some root of `factor`,
/// together with `gcd(factor, num - n * d(den)/d(var))`, the part of `factor`
/// where the residue equals `n`.
pub fn integer_residues(num: &MPoly, den: &MPoly, factor: &MPoly, var: usize) -> Vec<(BigInt, MPoly)> {
    let deg = factor.degree_in(var) as usize;
    if deg == 0 {
        return Vec::new();
    }
    let dden = den.derivative(var);
    let cofactor = den.div_exact(factor).expect("factor divides the denominator");
    let n = num.nvars();
    let mut found = None;
    for attempt in 0..64 {
        let point = specialization_point(n, var, attempt);
        let fs = factor.specialize_to_univariate(var, &point);
        if fs.degree() != Some(deg) {
            continue;
        }
        if fs.gcd(&fs.derivative()).degree() != Some(0) {
            continue;
        }
        let cs = cofactor.specialize_to_univariate(var, &point);
        if cs.is_zero() || fs.gcd(&cs).degree() != Some(0) {
            continue;
        }
        found = Some((fs, num.specialize_to_univariate(var, &point), dden.specialize_to_univariate(var, &point)));
        break;
    }
    let Some((fs, ns, ds)) = found else {
        // every probe degenerated; fall back to no candidates would lose
        // residues, so report loudly
        panic!("no admissible specialization found for residue computation");
    };
    // R(z) = Π (num - z den')(α) over the roots α of factor, degree <= deg in
    // z; the resultant carries lc^deg(g), which varies with z when the degree
    // of g drops, so it is divided out
    let lc = fs.lc();
    let samples: Vec<(Rat, Rat)> = (0..=deg)
        .map(|k| {
            let z = Rat::from_integer(BigInt::from(k as i64));
            let g = ns.sub(&ds.scale(&z));
            let r = match g.degree() {
                Some(dg) => fs.resultant(&g) / num_traits::pow(lc.clone(), dg),
                None => Rat::zero(),
            };
            (z, r)
        })
        .collect();
    let r = UPoly::interpolate(&samples);
    let mut out = Vec::new();
    for root in r.integer_roots() {
        if root.is_zero() {
            continue;
        }
        let cand = num - &dden.scale(&Rat::from_integer(root.clone()));
        let g = gcd(factor, &cand);
        if g.involves(var) {
            out.push((root, g));
        }
    }
    out
}

/// `q` with `d(q)/dvar / q = sigma`, determined up to a factor free of `var`,
/// if one exists.
pub fn rational_log_primitive(sigma: &RatFun, var: usize) -> Option<RatFun> {
    let n = sigma.nvars();
    if sigma.is_zero() {
        return Some(RatFun::one(n));
    }
    // a log-derivative is proper in var with simple poles
    if sigma.num().degree_in(var) >= sigma.den().degree_in(var) {
        return None;
    }
    let e = primitive_part_in(sigma.den(), var);
    let de = e.derivative(var);
    if gcd(&e, &de).involves(var) {
        return None;
    }
    let mut q = RatFun::one(n);
    for (k, g) in integer_residues(sigma.num(), sigma.den(), &e, var) {
        let k: i32 = i32::try_from(&k).ok()?;
        q = &q * &RatFun::from_poly(g).pow(k).ok()?;
    }
    if q.log_derivative(var).ok()? == *sigma {
        Some(q)
    } else {
        None
    }
}
