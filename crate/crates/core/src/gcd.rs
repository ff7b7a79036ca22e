//! Multivariate gcd over the rationals and squarefree decomposition.
//!
//! The gcd is computed recursively: contents are split off with respect to a
//! main variable and the primitive parts are handled by the subresultant
//! polynomial remainder sequence. All divisions are exact.

use num_integer::Integer;

use crate::poly::MPoly;

/// Normalized gcd: integer coefficients, integer content 1, positive leading
/// coefficient. `gcd(0, q)` is the normalized `q`; `gcd(0, 0) = 0`.
pub fn gcd(a: &MPoly, b: &MPoly) -> MPoly {
    if a.is_zero() {
        return b.normalized();
    }
    if b.is_zero() {
        return a.normalized();
    }
    gcd_rec(a, b).normalized()
}

pub fn lcm(a: &MPoly, b: &MPoly) -> MPoly {
    if a.is_zero() || b.is_zero() {
        return MPoly::zero(a.nvars());
    }
    let g = gcd(a, b);
    (a * &b.div_exact(&g).expect("gcd divides")).normalized()
}

/// Gcd of the coefficients of `p` viewed as a polynomial in `var`.
pub fn content_in(p: &MPoly, var: usize) -> MPoly {
    let mut g = MPoly::zero(p.nvars());
    for c in p.coeffs_in(var).iter().rev() {
        if c.is_zero() {
            continue;
        }
        g = if g.is_zero() { c.normalized() } else { gcd_rec(&g, c).normalized() };
        if g.is_one() {
            break;
        }
    }
    g
}

/// Primitive part with respect to `var`; zero stays zero.
pub fn primitive_part_in(p: &MPoly, var: usize) -> MPoly {
    if p.is_zero() {
        return p.clone();
    }
    let c = content_in(p, var);
    p.div_exact(&c).expect("content divides")
}

fn monomial_gcd(a: &MPoly, b: &MPoly) -> MPoly {
    // gcd with a single-term polynomial is the monomial of pointwise minimal
    // exponents over both supports
    let n = a.nvars();
    let mut mins: Vec<u32> = vec![u32::MAX; n];
    for p in [a, b] {
        for (e, _) in p.terms() {
            for v in 0..n {
                mins[v] = mins[v].min(e.0[v]);
            }
        }
    }
    MPoly::monomial(n, crate::poly::Exponents(mins), num_traits::One::one())
}

fn gcd_rec(a: &MPoly, b: &MPoly) -> MPoly {
    let n = a.nvars();
    if a.is_constant() || b.is_constant() {
        return MPoly::one(n);
    }
    if a.num_terms() == 1 || b.num_terms() == 1 {
        return monomial_gcd(a, b);
    }
    if a == b {
        return a.clone();
    }
    let va = a.occurring_vars();
    let vb = b.occurring_vars();
    // a variable present in only one operand can be eliminated through contents
    for v in 0..n {
        if va[v] && !vb[v] {
            return gcd_rec(&content_in(a, v), b);
        }
        if vb[v] && !va[v] {
            return gcd_rec(a, &content_in(b, v));
        }
    }
    // a gcd free of some shared variable is the gcd of the contents in it;
    // modular images detect this exactly and cheaply
    let (ia, ib) = (a.normalized(), b.normalized());
    for v in 0..n {
        if va[v] && modular_degree_bound(&ia, &ib, v) == Some(0) {
            return gcd_rec(&content_in(a, v), &content_in(b, v));
        }
    }
    // main variable: the largest shared degree keeps the evaluation grid for
    // the remaining variables small
    let main = (0..n)
        .filter(|&v| va[v])
        .max_by_key(|&v| (a.degree_in(v).min(b.degree_in(v)), std::cmp::Reverse(v)))
        .expect("nonconstant polynomial has a variable");
    let ca = content_in(a, main);
    let cb = content_in(b, main);
    let pa = a.div_exact(&ca).expect("content divides").normalized();
    let pb = b.div_exact(&cb).expect("content divides").normalized();
    let c = gcd_rec(&ca, &cb);
    // the gcd over Z[other vars], integer content included, so that the
    // leading coefficient of the true gcd divides it
    let (la, lb) = (pa.lc_in(main), pb.lc_in(main));
    let icont = la.integer_primitive().0.numer().gcd(lb.integer_primitive().0.numer());
    let gamma = gcd_rec(&la, &lb).normalized().scale(&icont.into());
    let g = crate::modgcd::modular_gcd(&pa, &pb, main, &gamma)
        .unwrap_or_else(|| subresultant_gcd(&pa, &pb, main));
    &c * &g
}

const MOD_PRIME: u64 = 4_294_967_291;

fn reduce_mod(c: &num_bigint::BigInt, p: u64) -> u64 {
    use num_traits::ToPrimitive;
    let p_big = num_bigint::BigInt::from(p);
    let r = ((c % &p_big) + &p_big) % &p_big;
    r.to_u64().unwrap()
}

/// Image of an integer polynomial in `Z_p[var]` at a point for the other
/// variables.
fn univariate_image(f: &MPoly, var: usize, point: &[u64], p: u64) -> Vec<u64> {
    let mut coeffs = vec![0u64; f.degree_in(var) as usize + 1];
    for (e, c) in f.terms() {
        let mut m = reduce_mod(c.numer(), p) as u128;
        for (v, &k) in e.0.iter().enumerate() {
            if v != var && k > 0 {
                m = m * crate::upoly::pow_mod(point[v], k as u64, p) as u128 % p as u128;
            }
        }
        let slot = &mut coeffs[e.0[var] as usize];
        *slot = ((*slot as u128 + m) % p as u128) as u64;
    }
    while coeffs.last() == Some(&0) {
        coeffs.pop();
    }
    coeffs
}

/// Upper bound for `deg_var gcd(a, b)` from a modular image, for integer
/// primitive `a`, `b`; `None` if no probe point kept both leading
/// coefficients alive. Exact: the image of the gcd divides the image gcd and
/// keeps its degree whenever the leading coefficients survive.
fn modular_degree_bound(a: &MPoly, b: &MPoly, var: usize) -> Option<usize> {
    let n = a.nvars();
    let (da, db) = (a.degree_in(var) as usize, b.degree_in(var) as usize);
    for attempt in 0..4u64 {
        let point: Vec<u64> = (0..n)
            .map(|v| {
                let h = (attempt + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ (v as u64 + 7).wrapping_mul(0xC2B2_AE3D_27D4_EB4F);
                (h >> 17) % (MOD_PRIME - 2) + 2
            })
            .collect();
        let ia = univariate_image(a, var, &point, MOD_PRIME);
        let ib = univariate_image(b, var, &point, MOD_PRIME);
        if ia.len() != da + 1 || ib.len() != db + 1 {
            continue;
        }
        let g = crate::upoly::gcd_mod_p(ia, ib, MOD_PRIME);
        return Some(g.len().saturating_sub(1));
    }
    None
}

/// Univariate view: coefficient list in `var`, low to high.
type VCoeffs = Vec<MPoly>;

fn vdeg(p: &VCoeffs) -> usize {
    p.len() - 1
}

fn trim(p: &mut VCoeffs) {
    while p.len() > 1 && p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn is_vzero(p: &VCoeffs) -> bool {
    p.iter().all(|c| c.is_zero())
}

/// Pseudo-remainder of `a` by `b` in the main variable.
fn prem(a: &VCoeffs, b: &VCoeffs) -> VCoeffs {
    let db = vdeg(b);
    let lcb = b.last().unwrap();
    let mut r = a.clone();
    trim(&mut r);
    if r.len() <= db {
        return r;
    }
    let mut exponent = vdeg(&r) + 1 - db;
    while !is_vzero(&r) && vdeg(&r) >= db {
        let dr = vdeg(&r);
        let lcr = r[dr].clone();
        let shift = dr - db;
        for c in r.iter_mut() {
            *c = &*c * lcb;
        }
        for (i, bc) in b.iter().enumerate() {
            r[shift + i] = &r[shift + i] - &(&lcr * bc);
        }
        r.pop();
        trim(&mut r);
        exponent -= 1;
    }
    if exponent > 0 {
        let f = lcb.pow(exponent as u32);
        for c in r.iter_mut() {
            *c = &*c * &f;
        }
    }
    r
}

fn subresultant_gcd(a: &MPoly, b: &MPoly, var: usize) -> MPoly {
    let n = a.nvars();
    let mut pa = a.coeffs_in(var);
    let mut pb = b.coeffs_in(var);
    if vdeg(&pa) < vdeg(&pb) {
        std::mem::swap(&mut pa, &mut pb);
    }
    let mut g = MPoly::one(n);
    let mut h = MPoly::one(n);
    let last = loop {
        if vdeg(&pb) == 0 {
            return MPoly::one(n);
        }
        let delta = vdeg(&pa) - vdeg(&pb);
        let r = prem(&pa, &pb);
        if is_vzero(&r) {
            break pb;
        }
        if vdeg(&r) == 0 {
            return MPoly::one(n);
        }
        let divisor = &g * &h.pow(delta as u32);
        let next: VCoeffs = r
            .iter()
            .map(|c| c.div_exact(&divisor).expect("subresultant division is exact"))
            .collect();
        pa = pb;
        pb = next;
        g = pa.last().unwrap().clone();
        h = if delta == 0 {
            h
        } else {
            let num = g.pow(delta as u32);
            let den = h.pow(delta as u32 - 1);
            num.div_exact(&den).expect("subresultant division is exact")
        };
    };
    primitive_part_in(&MPoly::from_coeffs_in(n, var, &last), var)
}

/// Squarefree decomposition with respect to one variable:
/// `p = content * Π factor^multiplicity`, where `content` is free of `var`
/// (a unit when `p` is viewed over the field of the other variables) and the
/// factors are pairwise coprime, squarefree and of positive degree in `var`.
#[derive(Clone, Debug, PartialEq)]
pub struct SquarefreeDecomposition {
    pub content: MPoly,
    pub factors: Vec<(MPoly, u32)>,
}

impl SquarefreeDecomposition {
    pub fn expand(&self) -> MPoly {
        self.factors.iter().fold(self.content.clone(), |acc, (f, m)| &acc * &f.pow(*m))
    }

    /// Product of the distinct factors.
    pub fn radical(&self) -> MPoly {
        let n = self.content.nvars();
        self.factors.iter().fold(MPoly::one(n), |acc, (f, _)| &acc * f)
    }

    pub fn factor_with_multiplicity(&self, m: u32) -> Option<&MPoly> {
        self.factors.iter().find(|(_, k)| *k == m).map(|(f, _)| f)
    }
}

/// Yun's algorithm. Panics on the zero polynomial; the public entry point in
/// `ratfun` reports that case as an error.
pub fn squarefree_in(p: &MPoly, var: usize) -> SquarefreeDecomposition {
    assert!(!p.is_zero(), "squarefree decomposition of zero");
    let n = p.nvars();
    let prim = primitive_part_in(p, var).normalized();
    let mut factors = Vec::new();
    if prim.involves(var) {
        let dp = prim.derivative(var);
        let c = gcd(&prim, &dp);
        let mut w = prim.div_exact(&c).unwrap();
        let mut y = dp.div_exact(&c).unwrap();
        let mut z = &y - &w.derivative(var);
        let mut i = 1;
        while w.involves(var) {
            let g = gcd(&w, &z);
            if g.involves(var) {
                factors.push((g.clone(), i));
            }
            w = w.div_exact(&g).unwrap();
            y = z.div_exact(&g).unwrap();
            z = &y - &w.derivative(var);
            i += 1;
        }
    }
    let prod = factors.iter().fold(MPoly::one(n), |acc, (f, m)| &acc * &f.pow(*m));
    let content = p.div_exact(&prod).expect("squarefree factors divide the input");
    SquarefreeDecomposition { content, factors }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat_int;

    fn v(i: usize) -> MPoly {
        MPoly::var(3, i)
    }
    fn c(k: i64) -> MPoly {
        MPoly::from_int(3, k)
    }

    #[test]
    fn gcd_of_difference_of_squares() {
        let t = v(0);
        let x1 = v(1);
        let a = &(&t * &t) - &(&x1 * &x1);
        let b = &t - &x1;
        assert_eq!(gcd(&a, &b), b);
        assert_eq!(gcd(&a, &c(1)), c(1));
    }

    #[test]
    fn gcd_with_powers() {
        let t = v(0);
        let s = &v(2) + &t;
        let a = &s.pow(3) * &t;
        let b = &s * &t.pow(2);
        let g = gcd(&a, &b);
        assert_eq!(g, (&s * &t).normalized());
        assert!(a.div_exact(&g).is_some() && b.div_exact(&g).is_some());
    }

    #[test]
    fn gcd_is_normalized_and_scale_invariant() {
        let t = v(0);
        let x = v(1);
        let f = &(&t * &x) + &c(3);
        let a = (&f * &(&t + &c(1))).scale(&rat_int(-6));
        let b = (&f * &(&x - &c(2))).scale(&crate::poly::rat(4, 7));
        assert_eq!(gcd(&a, &b), f);
    }

    #[test]
    fn trivariate_gcd() {
        let (t, x1, x2) = (v(0), v(1), v(2));
        let g = &(&(&t * &x1) + &x2.pow(2)) - &c(1);
        let a = &g * &(&(&t + &x1) + &x2);
        let b = &g * &(&(&t * &x2) - &x1);
        assert_eq!(gcd(&a, &b), g.normalized());
    }

    #[test]
    fn squarefree_example() {
        let t = v(0);
        let x1 = v(1);
        let p = &t.pow(2) * &(&t - &x1).pow(3);
        let d = squarefree_in(&p, 0);
        assert_eq!(d.factors, vec![(t.clone(), 2), ((&t - &x1).normalized(), 3)]);
        assert_eq!(d.expand(), p);
    }

    #[test]
    fn squarefree_content_goes_to_unit() {
        let t = v(0);
        let x2 = v(2);
        let p = (&x2 * &(&x2 + &t).pow(4)).scale(&rat_int(3));
        let d = squarefree_in(&p, 0);
        assert_eq!(d.factors, vec![((&x2 + &t), 4)]);
        assert_eq!(d.expand(), p);
        assert!(!d.content.involves(0));
    }
}
