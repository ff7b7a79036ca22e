//! Sparse multivariate polynomials over the rationals.
//!
//! Variables are addressed by index: index 0 is the distinguished variable `t`,
//! indices `1..nvars` are the parameters `x1..xn`. Terms are kept sorted in
//! descending graded-lexicographic order with `t > x1 > ... > xn`, so the first
//! stored term is the leading term.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational number; numerator and denominator are kept coprime with a
/// positive denominator by `num-rational`.
pub type Rat = BigRational;

/// Exponent vector of a monomial.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Exponents(pub Vec<u32>);

impl Exponents {
    pub fn zero(nvars: usize) -> Self {
        Exponents(vec![0; nvars])
    }

    pub fn unit(nvars: usize, var: usize) -> Self {
        let mut e = vec![0; nvars];
        e[var] = 1;
        Exponents(e)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Exponents) -> Exponents {
        Exponents(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Exponents) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self.divides(other)`.
    pub fn quotient_of(&self, other: &Exponents) -> Exponents {
        Exponents(other.0.iter().zip(&self.0).map(|(a, b)| a - b).collect())
    }
}

impl Ord for Exponents {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Exponents {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MPoly {
    nvars: usize,
    /// descending grlex, no zero coefficients
    terms: Vec<(Exponents, Rat)>,
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}", c)?;
            for (v, &k) in e.0.iter().enumerate() {
                if k > 0 {
                    write!(f, "*v{}^{}", v, k)?;
                }
            }
        }
        Ok(())
    }
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly { nvars, terms: Vec::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rat::one())
    }

    pub fn constant(nvars: usize, c: Rat) -> Self {
        if c.is_zero() {
            return Self::zero(nvars);
        }
        MPoly { nvars, terms: vec![(Exponents::zero(nvars), c)] }
    }

    pub fn from_int(nvars: usize, c: i64) -> Self {
        Self::constant(nvars, Rat::from_integer(BigInt::from(c)))
    }

    pub fn var(nvars: usize, var: usize) -> Self {
        assert!(var < nvars, "variable index {var} out of range");
        MPoly { nvars, terms: vec![(Exponents::unit(nvars, var), Rat::one())] }
    }

    pub fn monomial(nvars: usize, exps: Exponents, c: Rat) -> Self {
        assert_eq!(exps.0.len(), nvars);
        if c.is_zero() {
            return Self::zero(nvars);
        }
        MPoly { nvars, terms: vec![(exps, c)] }
    }

    /// Builds a polynomial from arbitrary (possibly repeated, possibly zero) terms.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Exponents, Rat)>) -> Self {
        let mut acc: BTreeMap<Exponents, Rat> = BTreeMap::new();
        for (e, c) in terms {
            debug_assert_eq!(e.0.len(), nvars);
            if c.is_zero() {
                continue;
            }
            match acc.get_mut(&e) {
                Some(v) => *v += c,
                None => {
                    acc.insert(e, c);
                }
            }
        }
        Self::from_map(nvars, acc)
    }

    fn from_map(nvars: usize, acc: BTreeMap<Exponents, Rat>) -> Self {
        let terms = acc.into_iter().rev().filter(|(_, c)| !c.is_zero()).collect();
        MPoly { nvars, terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[(Exponents, Rat)] {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_zero() && self.terms[0].1.is_one()
    }

    pub fn constant_value(&self) -> Option<Rat> {
        if self.is_zero() {
            Some(Rat::zero())
        } else if self.is_constant() {
            Some(self.terms[0].1.clone())
        } else {
            None
        }
    }

    pub fn leading_coeff(&self) -> Rat {
        self.terms.first().map(|t| t.1.clone()).unwrap_or_else(Rat::zero)
    }

    pub fn leading_exponents(&self) -> Option<&Exponents> {
        self.terms.first().map(|t| &t.0)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.first().map(|t| t.0.total_degree())
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.iter().map(|(e, _)| e.0[var]).max().unwrap_or(0)
    }

    pub fn min_degree_in(&self, var: usize) -> u32 {
        self.terms.iter().map(|(e, _)| e.0[var]).min().unwrap_or(0)
    }

    pub fn involves(&self, var: usize) -> bool {
        self.terms.iter().any(|(e, _)| e.0[var] > 0)
    }

    /// Which variables occur with positive exponent.
    pub fn occurring_vars(&self) -> Vec<bool> {
        let mut occ = vec![false; self.nvars];
        for (e, _) in &self.terms {
            for (v, &k) in e.0.iter().enumerate() {
                if k > 0 {
                    occ[v] = true;
                }
            }
        }
        occ
    }

    pub fn is_free_of_all_but(&self, keep: &[usize]) -> bool {
        self.occurring_vars()
            .iter()
            .enumerate()
            .all(|(v, &o)| !o || keep.contains(&v))
    }

    pub fn scale(&self, c: &Rat) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(self.nvars);
        }
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect(),
        }
    }

    pub fn mul_term(&self, exps: &Exponents, c: &Rat) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(self.nvars);
        }
        // multiplying by a monomial preserves the grlex order
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, a)| (e.mul(exps), a * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> MPoly {
        let mut result = MPoly::one(self.nvars);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn derivative(&self, var: usize) -> MPoly {
        let terms = self.terms.iter().filter(|(e, _)| e.0[var] > 0).map(|(e, c)| {
            let k = e.0[var];
            let mut e2 = e.clone();
            e2.0[var] -= 1;
            (e2, c * Rat::from_integer(BigInt::from(k)))
        });
        MPoly::from_terms(self.nvars, terms)
    }

    /// Coefficients with respect to `var`: entry `k` is the coefficient of `var^k`
    /// (a polynomial free of `var`).
    pub fn coeffs_in(&self, var: usize) -> Vec<MPoly> {
        if self.is_zero() {
            return Vec::new();
        }
        let deg = self.degree_in(var) as usize;
        let mut buckets: Vec<Vec<(Exponents, Rat)>> = vec![Vec::new(); deg + 1];
        for (e, c) in &self.terms {
            let k = e.0[var] as usize;
            let mut e2 = e.clone();
            e2.0[var] = 0;
            buckets[k].push((e2, c.clone()));
        }
        // dropping one exponent keeps relative grlex order only within equal powers of
        // `var`; re-sort to be safe
        buckets
            .into_iter()
            .map(|ts| MPoly::from_terms(self.nvars, ts))
            .collect()
    }

    pub fn from_coeffs_in(nvars: usize, var: usize, coeffs: &[MPoly]) -> MPoly {
        let mut terms = Vec::new();
        for (k, c) in coeffs.iter().enumerate() {
            for (e, a) in &c.terms {
                let mut e2 = e.clone();
                e2.0[var] += k as u32;
                terms.push((e2, a.clone()));
            }
        }
        MPoly::from_terms(nvars, terms)
    }

    /// Leading coefficient with respect to `var`.
    pub fn lc_in(&self, var: usize) -> MPoly {
        let deg = self.degree_in(var);
        let terms = self.terms.iter().filter(|(e, _)| e.0[var] == deg).map(|(e, c)| {
            let mut e2 = e.clone();
            e2.0[var] = 0;
            (e2, c.clone())
        });
        MPoly::from_terms(self.nvars, terms)
    }

    /// Substitutes a rational constant for `var`.
    pub fn eval_var(&self, var: usize, value: &Rat) -> MPoly {
        let terms = self.terms.iter().map(|(e, c)| {
            let k = e.0[var];
            let mut e2 = e.clone();
            e2.0[var] = 0;
            (e2, c * num_traits::pow(value.clone(), k as usize))
        });
        MPoly::from_terms(self.nvars, terms)
    }

    /// Substitutes a polynomial for `var`.
    pub fn substitute(&self, var: usize, value: &MPoly) -> MPoly {
        let coeffs = self.coeffs_in(var);
        let mut acc = MPoly::zero(self.nvars);
        for c in coeffs.iter().rev() {
            acc = &(&acc * value) + c;
        }
        acc
    }

    /// Evaluates at a full point.
    pub fn eval(&self, point: &[Rat]) -> Rat {
        let mut acc = Rat::zero();
        for (e, c) in &self.terms {
            let mut m = c.clone();
            for (v, &k) in e.0.iter().enumerate() {
                if k > 0 {
                    m *= num_traits::pow(point[v].clone(), k as usize);
                }
            }
            acc += m;
        }
        acc
    }

    /// Exact division; `None` if `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &MPoly) -> Option<MPoly> {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        if self.is_zero() {
            return Some(MPoly::zero(self.nvars));
        }
        if let Some(c) = divisor.constant_value() {
            return Some(self.scale(&c.recip()));
        }
        if (0..self.nvars).any(|v| divisor.degree_in(v) > self.degree_in(v)) {
            return None;
        }
        let (lead_e, lead_c) = &divisor.terms[0];
        let mut quotient = Vec::new();
        let mut rem: BTreeMap<Exponents, Rat> = self.terms.iter().cloned().collect();
        while let Some((re, rc)) = rem.pop_last() {
            if rc.is_zero() {
                continue;
            }
            if !lead_e.divides(&re) {
                return None;
            }
            let qe = lead_e.quotient_of(&re);
            let qc = rc / lead_c;
            for (de, dc) in &divisor.terms[1..] {
                let e = de.mul(&qe);
                let c = dc * &qc;
                match rem.entry(e) {
                    std::collections::btree_map::Entry::Occupied(mut o) => {
                        *o.get_mut() -= c;
                        if o.get().is_zero() {
                            o.remove();
                        }
                    }
                    std::collections::btree_map::Entry::Vacant(v) => {
                        v.insert(-c);
                    }
                }
            }
            quotient.push((qe, qc));
        }
        Some(MPoly { nvars: self.nvars, terms: quotient })
    }

    /// Splits off the rational content so that the remaining polynomial has
    /// coprime integer coefficients and a positive leading coefficient:
    /// `self = content * primitive`.
    pub fn integer_primitive(&self) -> (Rat, MPoly) {
        if self.is_zero() {
            return (Rat::one(), self.clone());
        }
        let mut den_lcm = BigInt::one();
        for (_, c) in &self.terms {
            den_lcm = den_lcm.lcm(c.denom());
        }
        let mut num_gcd = BigInt::zero();
        for (_, c) in &self.terms {
            let scaled = c.numer() * (&den_lcm / c.denom());
            num_gcd = num_gcd.gcd(&scaled);
        }
        let mut content = Rat::new(num_gcd, den_lcm);
        if self.terms[0].1.is_negative() {
            content = -content;
        }
        (content.clone(), self.scale(&content.recip()))
    }

    /// The canonical associate: integer coefficients, integer content 1, positive
    /// leading coefficient in grlex order.
    pub fn normalized(&self) -> MPoly {
        self.integer_primitive().1
    }

    /// Restricts a polynomial to a univariate one by substituting the given
    /// values for every variable except `var`.
    pub fn specialize_to_univariate(&self, var: usize, point: &[Rat]) -> crate::upoly::UPoly {
        let mut coeffs: Vec<Rat> = vec![Rat::zero(); self.degree_in(var) as usize + 1];
        for (e, c) in &self.terms {
            let mut m = c.clone();
            for (v, &k) in e.0.iter().enumerate() {
                if v != var && k > 0 {
                    m *= num_traits::pow(point[v].clone(), k as usize);
                }
            }
            coeffs[e.0[var] as usize] += m;
        }
        crate::upoly::UPoly::new(coeffs)
    }

    fn merge(&self, other: &MPoly, negate_other: bool) -> MPoly {
        assert_eq!(self.nvars, other.nvars, "polynomials over different variable sets");
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let a = &self.terms;
        let b = &other.terms;
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let c = if negate_other { -&b[j].1 } else { b[j].1.clone() };
                    out.push((b[j].0.clone(), c));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate_other { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        for t in &b[j..] {
            let c = if negate_other { -&t.1 } else { t.1.clone() };
            out.push((t.0.clone(), c));
        }
        MPoly { nvars: self.nvars, terms: out }
    }

    fn product(&self, other: &MPoly) -> MPoly {
        assert_eq!(self.nvars, other.nvars, "polynomials over different variable sets");
        if self.is_zero() || other.is_zero() {
            return MPoly::zero(self.nvars);
        }
        if self.terms.len() == 1 {
            return other.mul_term(&self.terms[0].0, &self.terms[0].1);
        }
        if other.terms.len() == 1 {
            return self.mul_term(&other.terms[0].0, &other.terms[0].1);
        }
        let mut acc: BTreeMap<Exponents, Rat> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.mul(eb);
                let c = ca * cb;
                match acc.get_mut(&e) {
                    Some(v) => *v += c,
                    None => {
                        acc.insert(e, c);
                    }
                }
            }
        }
        MPoly::from_map(self.nvars, acc)
    }
}

impl Add for &MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        self.merge(rhs, false)
    }
}

impl Sub for &MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        self.merge(rhs, true)
    }
}

impl Mul for &MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        self.product(rhs)
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident, $t:ty) => {
        impl $tr<$t> for $t {
            type Output = $t;
            fn $m(self, rhs: $t) -> $t {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&$t> for $t {
            type Output = $t;
            fn $m(self, rhs: &$t) -> $t {
                (&self).$m(rhs)
            }
        }
        impl $tr<$t> for &$t {
            type Output = $t;
            fn $m(self, rhs: $t) -> $t {
                self.$m(&rhs)
            }
        }
    };
}
pub(crate) use forward_owned;

forward_owned!(Add, add, MPoly);
forward_owned!(Sub, sub, MPoly);
forward_owned!(Mul, mul, MPoly);

impl Neg for MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        -&self
    }
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}
