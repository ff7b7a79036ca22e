//! Shared helpers for the integration tests: seeded random generators and a
//! brute-force oracle that searches for parallel telescopers with a dense
//! ansatz, independently of the library's algorithms.

#![allow(dead_code)]

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use paratele_core::gcd::squarefree_in;
use paratele_core::hyperexp::{HElement, HTerm};
use paratele_core::ore::OreOp;
use paratele_core::poly::{rat, Exponents};
use paratele_core::{MPoly, Rat, RatFun};

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

/// Exponent vectors of total degree `<= deg` in `nvars` variables.
pub fn monomials(nvars: usize, deg: u32) -> Vec<Exponents> {
    fn go(prefix: &mut Vec<u32>, left: usize, budget: u32, out: &mut Vec<Exponents>) {
        if left == 0 {
            out.push(Exponents(prefix.clone()));
            return;
        }
        for e in 0..=budget {
            prefix.push(e);
            go(prefix, left - 1, budget - e, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), nvars, deg, &mut out);
    out
}

/// Sparse random polynomial with small integer coefficients.
pub fn poly(r: &mut ChaCha8Rng, nvars: usize, deg: u32, terms: usize) -> MPoly {
    let mons = monomials(nvars, deg);
    MPoly::from_terms(
        nvars,
        (0..terms).map(|_| (mons[r.gen_range(0..mons.len())].clone(), Rat::from_integer(r.gen_range(-5..=5).into()))),
    )
}

pub fn nonzero_poly(r: &mut ChaCha8Rng, nvars: usize, deg: u32, terms: usize) -> MPoly {
    loop {
        let p = poly(r, nvars, deg, terms);
        if !p.is_zero() {
            return p;
        }
    }
}

/// Nonconstant polynomial that involves `var`.
pub fn poly_in(r: &mut ChaCha8Rng, nvars: usize, deg: u32, terms: usize, var: usize) -> MPoly {
    loop {
        let p = poly(r, nvars, deg.max(1), terms);
        if p.involves(var) {
            return p;
        }
    }
}

pub fn ratfun(r: &mut ChaCha8Rng, nvars: usize, num_deg: u32, den_deg: u32) -> RatFun {
    let num = poly(r, nvars, num_deg, 3);
    let den = nonzero_poly(r, nvars, den_deg, 2);
    RatFun::new(num, den).unwrap()
}

pub fn nonzero_ratfun(r: &mut ChaCha8Rng, nvars: usize, num_deg: u32, den_deg: u32) -> RatFun {
    loop {
        let f = ratfun(r, nvars, num_deg, den_deg);
        if !f.is_zero() {
            return f;
        }
    }
}

pub fn small_rat(r: &mut ChaCha8Rng) -> Rat {
    rat(r.gen_range(-6..=6), r.gen_range(1..=4))
}

/// A valid term `exp(a) * p^c` with polynomial `a`, `p` and rational `c`,
/// given by its log-derivatives `D_v(a) + c D_v(p)/p`.
pub fn term(r: &mut ChaCha8Rng, nvars: usize, label: &str) -> Arc<HTerm> {
    let a = poly(r, nvars, 2, 2);
    let p = nonzero_poly(r, nvars, 2, 2);
    let c = RatFun::constant(nvars, small_rat(r));
    let pr = RatFun::from_poly(p.clone());
    let logd = (0..nvars)
        .map(|v| &RatFun::from_poly(a.derivative(v)) + &(&c * &RatFun::from_poly(p.derivative(v))).checked_div(&pr).unwrap())
        .collect();
    HTerm::new(label, logd).expect("a vector of log-derivatives is integrable")
}

/// Operator with rational coefficients in `t` and the parameters.
pub fn operator(r: &mut ChaCha8Rng, nvars: usize, order: usize, t_only: bool) -> OreOp {
    let n = if t_only { 1 } else { nvars };
    let lift = |f: RatFun| -> RatFun {
        if t_only {
            let num = MPoly::from_terms(nvars, f.num().terms().iter().map(|(e, c)| (widen(e, nvars), c.clone())));
            let den = MPoly::from_terms(nvars, f.den().terms().iter().map(|(e, c)| (widen(e, nvars), c.clone())));
            RatFun::new(num, den).unwrap()
        } else {
            f
        }
    };
    let mut coeffs: Vec<RatFun> = (0..order).map(|_| lift(ratfun(r, n, 2, 1))).collect();
    coeffs.push(lift(nonzero_ratfun(r, n, 2, 1)));
    OreOp::from_coeffs(nvars, coeffs)
}

fn widen(e: &Exponents, nvars: usize) -> Exponents {
    let mut v = e.0.clone();
    v.resize(nvars, 0);
    Exponents(v)
}

/// Squarefree part with respect to all variables jointly.
pub fn radical(p: &MPoly) -> MPoly {
    let n = p.nvars();
    let mut acc = MPoly::one(n);
    let mut rest = p.clone();
    for v in 0..n {
        if rest.is_constant() {
            break;
        }
        let d = squarefree_in(&rest, v);
        acc = &acc * &d.radical();
        rest = d.content;
    }
    acc
}

/// Largest `t`-degree appearing in a coefficient.
pub fn coeff_degree(op: &OreOp) -> u32 {
    op.coeffs().iter().map(|c| c.num().degree_in(0).max(c.den().degree_in(0))).max().unwrap_or(0)
}

// ---------------------------------------------------------------------------
// modular brute-force oracle

/// Two primes below 2^31, so products fit in a u64.
pub const ORACLE_PRIMES: [u64; 2] = [2_147_483_647, 2_147_483_629];

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> Option<u64> {
    (a % p != 0).then(|| pow_mod(a, p - 2, p))
}

fn int_mod(n: &BigInt, p: u64) -> u64 {
    let m = BigInt::from(p);
    let r = ((n % &m) + &m) % &m;
    r.to_u64().unwrap()
}

fn rat_mod(c: &Rat, p: u64) -> Option<u64> {
    Some(int_mod(c.numer(), p) * inv_mod(int_mod(c.denom(), p), p)? % p)
}

fn mono_mod(e: &[u32], point: &[u64], p: u64) -> u64 {
    e.iter().zip(point).fold(1, |acc, (&k, &x)| acc * pow_mod(x, k as u64, p) % p)
}

fn poly_mod(f: &MPoly, point: &[u64], p: u64) -> Option<u64> {
    let mut acc = 0;
    for (e, c) in f.terms() {
        acc = (acc + rat_mod(c, p)? * mono_mod(&e.0, point, p)) % p;
    }
    Some(acc)
}

fn ratfun_mod(f: &RatFun, point: &[u64], p: u64) -> Option<u64> {
    let d = poly_mod(f.den(), point, p)?;
    Some(poly_mod(f.num(), point, p)? * inv_mod(d, p)? % p)
}

/// `D_v` of the monomial `e`, evaluated.
fn mono_deriv_mod(e: &[u32], v: usize, point: &[u64], p: u64) -> u64 {
    if e[v] == 0 {
        return 0;
    }
    let mut d = e.to_vec();
    d[v] -= 1;
    e[v] as u64 % p * mono_mod(&d, point, p) % p
}

/// Incremental row echelon form over `F_p`; the pivot of a row is its
/// leftmost nonzero entry.
struct Echelon {
    p: u64,
    rows: Vec<(usize, Vec<u64>)>,
    is_pivot: Vec<bool>,
}

impl Echelon {
    fn new(ncols: usize, p: u64) -> Self {
        Echelon { p, rows: Vec::new(), is_pivot: vec![false; ncols] }
    }

    fn insert(&mut self, mut row: Vec<u64>) {
        let p = self.p;
        for (piv, b) in &self.rows {
            let f = row[*piv];
            if f != 0 {
                let g = p - f;
                for (x, y) in row.iter_mut().zip(b) {
                    *x = (*x + g * y) % p;
                }
            }
        }
        if let Some(piv) = row.iter().position(|&x| x != 0) {
            let inv = inv_mod(row[piv], p).unwrap();
            for x in row.iter_mut() {
                *x = *x * inv % p;
            }
            self.is_pivot[piv] = true;
            self.rows.push((piv, row));
        }
    }
}

/// Size of one oracle query, for reporting.
#[derive(Clone, Copy, Debug, Default)]
pub struct OracleStats {
    pub unknowns: usize,
    pub equations: usize,
}

/// Searches for `L = Σ_{k<=order} c_k(t) Dt^k`, `deg c_k <= dc`, not all
/// zero, and a rational `g` with `L(s_i h) = D_i(g h)` for all `i`. The
/// certificate ansatz is `g = N / den_g` with
/// `den_g = den_base * radical(den_base)^order`, where `den_base` is the lcm
/// of the denominators of the `s_i` times the denominator of `D_t(h)/h`, and
/// `N` runs over all polynomials of total degree `<= deg den_g + dc + slack`.
///
/// The identity is imposed at random points modulo each of two primes, and
/// the answer is `Some(found)` when both primes agree, `None` otherwise.
pub fn ansatz_solution_exists(
    coeffs: &[RatFun],
    h: &HTerm,
    order: usize,
    dc: u32,
    slack: u32,
    seed: u64,
) -> (Option<bool>, OracleStats) {
    let nvars = h.nvars();
    let rt = h.r(0);
    let den_base = coeffs.iter().fold(MPoly::one(nvars), |acc, s| paratele_core::gcd::lcm(&acc, s.den()));
    let den_base = &den_base * rt.den();
    let den_g = &den_base * &radical(&den_base).pow(order as u32);
    let dn = den_g.total_degree().unwrap() + dc + slack;
    let mons = monomials(nvars, dn);
    // A[i][k] = T^k(s_i) with T(s) = D_t(s) + r_t s, so L(s_i h) = h Σ c_k A[i][k]
    let a: Vec<Vec<RatFun>> = coeffs
        .iter()
        .map(|s| {
            let mut v = vec![s.clone()];
            for _ in 0..order {
                let last = v.last().unwrap();
                v.push(&last.derive(0) + &(rt * last));
            }
            v
        })
        .collect();
    let d_den: Vec<MPoly> = (1..nvars).map(|i| den_g.derivative(i)).collect();
    let nb = mons.len();
    let ncols = nb + (order + 1) * (dc as usize + 1);
    let npoints = ncols + 8;
    let stats = OracleStats { unknowns: ncols, equations: npoints * coeffs.len() };
    let mut answers = Vec::new();
    for (pi, &p) in ORACLE_PRIMES.iter().enumerate() {
        let mut r = rng(seed ^ (pi as u64 + 1).wrapping_mul(0x9e37_79b9_7f4a_7c15));
        let mut ech = Echelon::new(ncols, p);
        let mut used = 0;
        while used < npoints {
            let point: Vec<u64> = (0..nvars).map(|_| r.gen_range(1..p)).collect();
            let Some(rows) = point_rows(&a, h, &den_g, &d_den, &mons, order, dc, &point, p) else {
                continue;
            };
            used += 1;
            for row in rows {
                ech.insert(row);
            }
            if ech.is_pivot[nb..].iter().all(|&b| b) {
                break;
            }
        }
        answers.push(ech.is_pivot[nb..].iter().any(|&b| !b));
    }
    let agreed = answers.windows(2).all(|w| w[0] == w[1]).then_some(answers[0]);
    (agreed, stats)
}

/// One row per parameter: `B` columns (certificate monomials) first, then the
/// `c_{k,j}` columns. `None` if a denominator vanishes at the point.
#[allow(clippy::too_many_arguments)]
fn point_rows(
    a: &[Vec<RatFun>],
    h: &HTerm,
    den_g: &MPoly,
    d_den: &[MPoly],
    mons: &[Exponents],
    order: usize,
    dc: u32,
    point: &[u64],
    p: u64,
) -> Option<Vec<Vec<u64>>> {
    let dg = poly_mod(den_g, point, p)?;
    let w1 = inv_mod(dg, p)?;
    let mon_vals: Vec<u64> = mons.iter().map(|e| mono_mod(&e.0, point, p)).collect();
    let mut rows = Vec::with_capacity(a.len());
    for (i0, ai) in a.iter().enumerate() {
        let i = i0 + 1;
        // D_i(m/den) + r_i m/den = D_i(m) w1 + m w2
        let ri = ratfun_mod(h.r(i), point, p)?;
        let ddi = poly_mod(&d_den[i0], point, p)?;
        let w2 = (ri * w1 % p + p - ddi * w1 % p * w1 % p) % p;
        let mut row = Vec::with_capacity(mons.len() + (order + 1) * (dc as usize + 1));
        for (e, &mv) in mons.iter().zip(&mon_vals) {
            let v = (mono_deriv_mod(&e.0, i, point, p) * w1 + mv * w2) % p;
            row.push((p - v) % p);
        }
        for ak in ai {
            let av = ratfun_mod(ak, point, p)?;
            let mut tj = 1;
            for _ in 0..=dc {
                row.push(av * tj % p);
                tj = tj * point[0] % p;
            }
        }
        rows.push(row);
    }
    Some(rows)
}

// ---------------------------------------------------------------------------
// families

/// A compatible family with its term: inputs `s_i h`.
pub struct Family {
    pub coeffs: Vec<RatFun>,
    pub h: Arc<HTerm>,
    /// Upper bound on the order of the minimal parallel telescoper.
    pub expected_max_order: usize,
}

impl Family {
    pub fn inputs(&self) -> Vec<HElement> {
        self.coeffs.iter().map(|s| HElement::single(s.clone(), self.h.clone())).collect()
    }
}

/// `f_i = D_i(u h)` for a random rational `u` and a random term `h`; the
/// minimal parallel telescoper is `1`.
pub fn exact_family(r: &mut ChaCha8Rng, nparams: usize) -> Family {
    let n = nparams + 1;
    let h = term(r, n, "h");
    let u = loop {
        let num = poly(r, n, 3, 3);
        let den = nonzero_poly(r, n, 2, 2);
        let u = RatFun::new(num, den).unwrap();
        if (1..n).all(|i| u.involves(i) || h.r(i).involves(i)) && !u.is_zero() {
            break u;
        }
    };
    let coeffs = (1..n).map(|i| &u.derive(i) + &(&u * h.r(i))).collect();
    Family { coeffs, h, expected_max_order: 0 }
}

/// `f_i = h (D_i(u) + Σ_k a_k(t) D_i(q_k)/q_k)` with `h = h(t)`,
/// `D_t(h)/h = α/t + β` (`h = 1` unless `exponential`): formally `f_i = D_i(h (u + Σ a_k log q_k))`, so the
/// family is compatible and its parallel telescopers annihilate every
/// `a_k h`. The minimal order is at most `K` (the number of logarithms).
pub fn log_family(r: &mut ChaCha8Rng, nparams: usize, k: usize, exponential: bool) -> Family {
    let n = nparams + 1;
    let t = RatFun::var(n, 0);
    let alpha = loop {
        let a = small_rat(r);
        if !a.is_zero() {
            break a;
        }
    };
    let beta = Rat::from_integer(r.gen_range(-1..=1).into());
    let rt = &RatFun::constant(n, alpha).checked_div(&t).unwrap() + &RatFun::constant(n, beta);
    let h = if exponential {
        let mut logd = vec![RatFun::zero(n); n];
        logd[0] = rt;
        HTerm::new("h", logd).unwrap()
    } else {
        HTerm::trivial(n)
    };
    let u = RatFun::from_poly(poly(r, n, 2, 3));
    let mut powers: Vec<u32> = (0..3).collect();
    let mut qs: Vec<MPoly> = Vec::new();
    let mut coeffs: Vec<RatFun> = (1..n).map(|i| u.derive(i)).collect();
    for _ in 0..k {
        let m = powers.remove(r.gen_range(0..powers.len()));
        let scale = loop {
            let s = r.gen_range(-3i64..=3);
            if s != 0 {
                break s;
            }
        };
        let ak = RatFun::from_poly(MPoly::var(n, 0).pow(m).scale(&Rat::from_integer(scale.into())));
        let q = loop {
            let mut terms = vec![(Exponents::unit(n, 0), Rat::from_integer(1.into()))];
            for i in 1..n {
                let c: i64 = if r.gen_bool(0.5) { r.gen_range(1..=3) } else { r.gen_range(-3..=-1) };
                terms.push((Exponents::unit(n, i), Rat::from_integer(c.into())));
            }
            terms.push((Exponents::zero(n), Rat::from_integer(r.gen_range(-2i64..=2).into())));
            let q = MPoly::from_terms(n, terms);
            if !qs.contains(&q) {
                break q;
            }
        };
        let qr = RatFun::from_poly(q.clone());
        for (i0, c) in coeffs.iter_mut().enumerate() {
            let term = (&ak * &RatFun::from_poly(q.derivative(i0 + 1))).checked_div(&qr).unwrap();
            *c = &*c + &term;
        }
        qs.push(q);
    }
    Family { coeffs, h, expected_max_order: k }
}

// ---------------------------------------------------------------------------
// worked examples

pub fn v(n: usize, i: usize) -> RatFun {
    RatFun::var(n, i)
}

pub fn c(n: usize, k: i64) -> RatFun {
    RatFun::from_int(n, k)
}

/// The term with `D_t(h)/h = -1/(2t)`, i.e. `1/sqrt(t)`.
pub fn inv_sqrt_t() -> Arc<HTerm> {
    HTerm::new("h", vec![c(3, -1).checked_div(&(&v(3, 0) * &c(3, 2))).unwrap(), c(3, 0), c(3, 0)]).unwrap()
}

/// Two elements over `1/sqrt(t)` whose compatibility defect is `-h`.
pub fn defect_pair() -> (HElement, HElement) {
    let n = 3;
    let (t, x1, x2) = (v(n, 0), v(n, 1), v(n, 2));
    let u = &(&t + &x1) + &x2;
    let c1 = (&t * &(&(&x1 + &t) + &(&(&t * &t) * &u))).checked_div(&(&u * &(&t + &x1))).unwrap();
    let tp1 = &t + &c(n, 1);
    let inner = &(&(&tp1 * &tp1) + &(&x1 * &x2)) + &(&t * &(&x1 - &c(n, 1)));
    let c2 = (&(&inner * &u) - &(&t * &x1)).checked_div(&(&u * &(&t + &x2))).unwrap();
    let h = inv_sqrt_t();
    (HElement::single(c1, h.clone()), HElement::single(c2, h))
}

/// Right-hand sides of the first-order system with defining operator `t Dt^2`.
pub fn ppv_system() -> [RatFun; 2] {
    let names = paratele_core::syntax::default_names(3);
    [
        paratele_core::syntax::parse_expr("t/(x1+x2+t)", &names).unwrap(),
        paratele_core::syntax::parse_expr("(t*x2+t^2+x1+x2+t)/((x1+x2+t)*(x2+t))", &names).unwrap(),
    ]
}
