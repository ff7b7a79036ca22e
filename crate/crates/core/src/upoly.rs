//! Dense univariate polynomials over the rationals.
//!
//! Used for specialized computations: resultants with a symbolic residue
//! parameter and integer-root finding.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::poly::Rat;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UPoly {
    /// low to high degree, no trailing zeros
    coeffs: Vec<Rat>,
}

impl UPoly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn zero() -> Self {
        UPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rat) -> Self {
        Self::new(vec![c])
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lc(&self) -> Rat {
        self.coeffs.last().cloned().unwrap_or_else(Rat::zero)
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> UPoly {
        UPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Rat::from_integer(BigInt::from(k)))
                .collect(),
        )
    }

    pub fn add(&self, other: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = Rat::zero();
        UPoly::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&z) + other.coeffs.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn scale(&self, c: &Rat) -> UPoly {
        UPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn sub(&self, other: &UPoly) -> UPoly {
        self.add(&other.scale(&-Rat::one()))
    }

    pub fn mul(&self, other: &UPoly) -> UPoly {
        if self.is_zero() || other.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UPoly::new(out)
    }

    pub fn div_rem(&self, divisor: &UPoly) -> (UPoly, UPoly) {
        let dd = divisor.degree().expect("division by zero polynomial");
        let lc = divisor.lc();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (UPoly::zero(), self.clone());
        }
        let mut quot = vec![Rat::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let q = &rem[k + dd] / &lc;
            if !q.is_zero() {
                for (i, d) in divisor.coeffs.iter().enumerate() {
                    rem[k + i] -= &q * d;
                }
            }
            quot[k] = q;
        }
        rem.truncate(dd);
        (UPoly::new(quot), UPoly::new(rem))
    }

    pub fn monic(&self) -> UPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lc().recip())
    }

    pub fn gcd(&self, other: &UPoly) -> UPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Resultant computed by the Euclidean scheme.
    pub fn resultant(&self, other: &UPoly) -> Rat {
        let (Some(m), Some(n)) = (self.degree(), other.degree()) else {
            return Rat::zero();
        };
        if n == 0 {
            return num_traits::pow(other.lc(), m);
        }
        if m == 0 {
            return num_traits::pow(self.lc(), n);
        }
        let (_, r) = self.div_rem(other);
        let Some(k) = r.degree() else {
            return Rat::zero();
        };
        let sign = if (m * n) % 2 == 1 { -Rat::one() } else { Rat::one() };
        sign * num_traits::pow(other.lc(), m - k) * other.resultant(&r)
    }

    /// Interpolates the polynomial of degree < points.len() through the given
    /// (x, y) pairs.
    pub fn interpolate(points: &[(Rat, Rat)]) -> UPoly {
        let mut result = UPoly::zero();
        for (i, (xi, yi)) in points.iter().enumerate() {
            if yi.is_zero() {
                continue;
            }
            let mut basis = UPoly::constant(Rat::one());
            let mut denom = Rat::one();
            for (j, (xj, _)) in points.iter().enumerate() {
                if i != j {
                    basis = basis.mul(&UPoly::new(vec![-xj, Rat::one()]));
                    denom *= xi - xj;
                }
            }
            result = result.add(&basis.scale(&(yi / denom)));
        }
        result
    }

    /// All distinct integer roots, ascending.
    pub fn integer_roots(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return Vec::new();
        }
        let ints = to_primitive_integers(&self.coeffs);
        let mut roots = Vec::new();
        // strip the power of z
        let shift = ints.iter().position(|c| !c.is_zero()).unwrap_or(0);
        if shift > 0 {
            roots.push(BigInt::zero());
        }
        let f: Vec<BigInt> = ints[shift..].to_vec();
        if f.len() > 1 {
            let sqf = squarefree_integer(&f);
            roots.extend(padic_integer_roots(&sqf));
        }
        roots.sort();
        roots.dedup();
        roots
    }
}

fn to_primitive_integers(coeffs: &[Rat]) -> Vec<BigInt> {
    let mut den = BigInt::one();
    for c in coeffs {
        den = den.lcm(c.denom());
    }
    let ints: Vec<BigInt> = coeffs.iter().map(|c| c.numer() * (&den / c.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|c| c / &g).collect()
}

fn squarefree_integer(f: &[BigInt]) -> Vec<BigInt> {
    let p = UPoly::new(f.iter().map(|c| Rat::from_integer(c.clone())).collect());
    let g = p.gcd(&p.derivative());
    if g.degree() == Some(0) {
        return f.to_vec();
    }
    let (q, _) = p.div_rem(&g);
    to_primitive_integers(q.coeffs())
}

fn eval_int(f: &[BigInt], x: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for c in f.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

fn eval_mod(f: &[BigInt], x: &BigInt, m: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for c in f.iter().rev() {
        acc = (acc * x + c).mod_floor(m);
    }
    acc
}

fn derivative_int(f: &[BigInt]) -> Vec<BigInt> {
    f.iter().enumerate().skip(1).map(|(k, c)| c * BigInt::from(k)).collect()
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

/// Is `f` squarefree modulo the prime `p` with nonvanishing leading coefficient?
fn good_prime(f: &[BigInt], p: u64) -> bool {
    let pb = BigInt::from(p);
    if f.last().unwrap().mod_floor(&pb).is_zero() {
        return false;
    }
    let reduce = |g: &[BigInt]| -> Vec<u64> {
        let mut v: Vec<u64> = g.iter().map(|c| c.mod_floor(&pb).to_u64().unwrap()).collect();
        while v.last() == Some(&0) {
            v.pop();
        }
        v
    };
    let a = reduce(f);
    let b = reduce(&derivative_int(f));
    gcd_mod_p(a, b, p).len() == 1
}

pub(crate) fn gcd_mod_p(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> Vec<u64> {
    let inv = |x: u64| -> u64 { pow_mod(x, p - 2, p) };
    while !b.is_empty() {
        // a mod b
        let lb_inv = inv(*b.last().unwrap());
        while a.len() >= b.len() && !a.is_empty() {
            let q = (*a.last().unwrap() as u128 * lb_inv as u128 % p as u128) as u64;
            let shift = a.len() - b.len();
            for (i, &bc) in b.iter().enumerate() {
                let sub = (q as u128 * bc as u128 % p as u128) as u64;
                a[shift + i] = (a[shift + i] + p - sub) % p;
            }
            while a.last() == Some(&0) {
                a.pop();
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    a
}

pub(crate) fn pow_mod(b: u64, mut e: u64, m: u64) -> u64 {
    let m = m as u128;
    let mut r = 1u128;
    let mut bb = b as u128 % m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * bb % m;
        }
        bb = bb * bb % m;
        e >>= 1;
    }
    r as u64
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Integer roots of a squarefree integer polynomial with nonzero constant term,
/// by lifting the roots modulo a good prime past the Cauchy bound.
fn padic_integer_roots(f: &[BigInt]) -> Vec<BigInt> {
    if f.len() == 2 {
        // a0 + a1 z
        let (q, r) = (-&f[0]).div_rem(&f[1]);
        return if r.is_zero() { vec![q] } else { Vec::new() };
    }
    let lc = f.last().unwrap().abs();
    let max_c = f[..f.len() - 1].iter().map(|c| c.abs()).max().unwrap_or_else(BigInt::zero);
    let bound = max_c / &lc + 2;
    let p = (3u64..)
        .filter(|&p| is_prime(p))
        .find(|&p| good_prime(f, p))
        .expect("a good prime exists for a squarefree polynomial");
    let pb = BigInt::from(p);
    let df = derivative_int(f);
    let mut roots = Vec::new();
    for r0 in 0..p {
        let r0b = BigInt::from(r0);
        if !eval_mod(f, &r0b, &pb).is_zero() {
            continue;
        }
        // Newton lifting: the root is simple modulo p
        let mut r = r0b;
        let mut modulus = pb.clone();
        while modulus <= &bound * 2 {
            modulus = &modulus * &modulus;
            let fr = eval_int(f, &r);
            let dfr = eval_mod(&df, &r, &modulus);
            let Some(inv) = mod_inverse(&dfr, &modulus) else {
                break;
            };
            r = (&r - fr * inv).mod_floor(&modulus);
        }
        let half = &modulus / 2;
        let candidate = if r > half { r - &modulus } else { r };
        if eval_int(f, &candidate).is_zero() {
            roots.push(candidate);
        }
    }
    roots
}
