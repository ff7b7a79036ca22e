//! Dense modular gcd for integer polynomials.
//!
//! Images are univariate gcds over `Z_p` on a grid of evaluation points for
//! the non-main variables, normalized to a known multiple of the leading
//! coefficient, interpolated per prime and lifted by Chinese remaindering.
//! A candidate is only returned after trial division confirms it.

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::poly::{Exponents, MPoly, Rat};
use crate::upoly::{gcd_mod_p, pow_mod};

/// Grids beyond this many points are left to the remainder-sequence gcd.
pub(crate) const MAX_GRID: usize = 1 << 20;

fn mul(a: u64, b: u64, p: u64) -> u64 {
    (a as u128 * b as u128 % p as u128) as u64
}

fn sub(a: u64, b: u64, p: u64) -> u64 {
    if a >= b { a - b } else { a + p - b }
}

fn inv(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn splitmix(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &q in &BASES {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primes below 2^62, descending.
fn primes() -> impl Iterator<Item = u64> {
    let mut n = (1u64 << 62) - 1;
    std::iter::from_fn(move || {
        while !is_prime_u64(n) {
            n -= 2;
        }
        let p = n;
        n -= 2;
        Some(p)
    })
}

/// Integer polynomial reduced mod `p`, split by main-variable degree.
struct ModImage {
    terms: Vec<(usize, Vec<u32>, u64)>,
    deg: usize,
}

impl ModImage {
    fn new(f: &MPoly, main: usize, ys: &[usize], p: u64) -> Self {
        let pb = BigInt::from(p);
        let terms = f
            .terms()
            .iter()
            .map(|(e, c)| {
                let r = c.numer() % &pb;
                let r = if r.is_negative() { r + &pb } else { r };
                (e.0[main] as usize, ys.iter().map(|&y| e.0[y]).collect(), r.to_u64().unwrap())
            })
            .filter(|t| t.2 != 0)
            .collect();
        ModImage { terms, deg: f.degree_in(main) as usize }
    }

    /// Univariate image at the grid point whose per-variable power tables are
    /// `powers[j]`.
    fn eval(&self, powers: &[&[u64]], p: u64) -> Vec<u64> {
        let mut out = vec![0u64; self.deg + 1];
        for (d, ey, c) in &self.terms {
            let mut m = *c;
            for (j, &k) in ey.iter().enumerate() {
                if k > 0 {
                    m = mul(m, powers[j][k as usize], p);
                }
            }
            let s = out[*d] + m;
            out[*d] = if s >= p { s - p } else { s };
        }
        while out.last() == Some(&0) {
            out.pop();
        }
        out
    }
}

/// Coefficients in the monomial basis of the interpolant through
/// `(xs[i], vs[i])`.
fn interpolate(xs: &[u64], vs: &mut [u64], p: u64) {
    let n = xs.len();
    for k in 1..n {
        for i in (k..n).rev() {
            let num = sub(vs[i], vs[i - 1], p);
            vs[i] = mul(num, inv(sub(xs[i], xs[i - k], p), p), p);
        }
    }
    // Newton form to monomial form, Horner style
    let newton: Vec<u64> = vs.to_vec();
    let mut poly = vec![0u64; n];
    poly[0] = newton[n - 1];
    let mut len = 1;
    for i in (0..n - 1).rev() {
        // poly = poly * (y - xs[i]) + newton[i]
        for k in (0..=len).rev() {
            let shifted = if k > 0 { poly[k - 1] } else { 0 };
            let here = if k < len { mul(poly[k], xs[i], p) } else { 0 };
            poly[k] = sub(shifted, here, p);
        }
        poly[0] = (poly[0] + newton[i]) % p;
        len += 1;
    }
    vs.copy_from_slice(&poly);
}

/// Result of one prime: main-variable degree and the interpolated
/// normalized gcd as a sparse map.
type PrimeImage = (usize, BTreeMap<Exponents, u64>);

#[allow(clippy::too_many_arguments)]
fn image_for_prime(
    a: &MPoly,
    b: &MPoly,
    gamma: &MPoly,
    main: usize,
    ys: &[usize],
    sizes: &[usize],
    p: u64,
    seed: &mut u64,
) -> Option<PrimeImage> {
    let n = a.nvars();
    let (ia, ib, ig) = (ModImage::new(a, main, ys, p), ModImage::new(b, main, ys, p), ModImage::new(gamma, main, ys, p));
    let total: usize = sizes.iter().product();
    'attempt: for _ in 0..3 {
        let points: Vec<Vec<u64>> = sizes
            .iter()
            .map(|&s| {
                let mut seen = HashSet::new();
                let mut v = Vec::with_capacity(s);
                while v.len() < s {
                    let x = splitmix(seed) % (p - 1) + 1;
                    if seen.insert(x) {
                        v.push(x);
                    }
                }
                v
            })
            .collect();
        let max_exp: Vec<usize> = ys
            .iter()
            .map(|&y| a.degree_in(y).max(b.degree_in(y)).max(gamma.degree_in(y)) as usize)
            .collect();
        let powers: Vec<Vec<Vec<u64>>> = points
            .iter()
            .zip(&max_exp)
            .map(|(pts, &m)| {
                pts.iter()
                    .map(|&x| {
                        let mut row = Vec::with_capacity(m + 1);
                        let mut acc = 1u64;
                        for _ in 0..=m {
                            row.push(acc);
                            acc = mul(acc, x, p);
                        }
                        row
                    })
                    .collect()
            })
            .collect();
        let mut images: Vec<Vec<u64>> = Vec::with_capacity(total);
        let mut deg = usize::MAX;
        let mut idx = vec![0usize; ys.len()];
        for _ in 0..total {
            let pw: Vec<&[u64]> = idx.iter().enumerate().map(|(j, &i)| powers[j][i].as_slice()).collect();
            let va = ia.eval(&pw, p);
            let vb = ib.eval(&pw, p);
            if va.len() != ia.deg + 1 || vb.len() != ib.deg + 1 {
                continue 'attempt;
            }
            let gv = ig.eval(&pw, p);
            let gval = gv.first().copied().unwrap_or(0);
            if gval == 0 {
                continue 'attempt;
            }
            let g = gcd_mod_p(va, vb, p);
            let d = g.len() - 1;
            if d == 0 {
                return Some((0, BTreeMap::new()));
            }
            if deg != usize::MAX && d != deg {
                // an unlucky point; a fresh grid settles which degree is right
                continue 'attempt;
            }
            deg = d;
            let scale = mul(gval, inv(*g.last().unwrap(), p), p);
            images.push(g.into_iter().map(|c| mul(c, scale, p)).collect());
            // advance the mixed-radix index, first variable fastest
            for j in 0..idx.len() {
                idx[j] += 1;
                if idx[j] < sizes[j] {
                    break;
                }
                idx[j] = 0;
            }
        }
        // per main-degree coefficient, tensor interpolation over the grid
        let mut result = BTreeMap::new();
        for k in 0..=deg {
            let mut vals: Vec<u64> = images.iter().map(|g| g[k]).collect();
            let mut stride = 1;
            for (j, &s) in sizes.iter().enumerate() {
                let block = stride * s;
                let mut fiber = vec![0u64; s];
                for base in (0..total).step_by(block) {
                    for off in 0..stride {
                        for i in 0..s {
                            fiber[i] = vals[base + off + i * stride];
                        }
                        interpolate(&points[j], &mut fiber, p);
                        for i in 0..s {
                            vals[base + off + i * stride] = fiber[i];
                        }
                    }
                }
                stride = block;
            }
            let mut idx = vec![0usize; ys.len()];
            for &v in &vals {
                if v != 0 {
                    let mut e = vec![0u32; n];
                    e[main] = k as u32;
                    for (j, &y) in ys.iter().enumerate() {
                        e[y] = idx[j] as u32;
                    }
                    result.insert(Exponents(e), v);
                }
                for j in 0..idx.len() {
                    idx[j] += 1;
                    if idx[j] < sizes[j] {
                        break;
                    }
                    idx[j] = 0;
                }
            }
        }
        return Some((deg, result));
    }
    None
}

/// Gcd of integer polynomials `a`, `b` that are primitive with respect to
/// `main`, given `gamma = gcd(lc_main(a), lc_main(b))`. Returns the gcd up to
/// an integer unit, or `None` if the evaluation grid would be too large.
pub(crate) fn modular_gcd(a: &MPoly, b: &MPoly, main: usize, gamma: &MPoly) -> Option<MPoly> {
    let n = a.nvars();
    let ys: Vec<usize> = (0..n).filter(|&v| v != main && (a.involves(v) || b.involves(v))).collect();
    let sizes: Vec<usize> = ys
        .iter()
        .map(|&y| (gamma.degree_in(y) + a.degree_in(y).min(b.degree_in(y))) as usize + 1)
        .collect();
    sizes.iter().try_fold(1usize, |acc, &s| acc.checked_mul(s).filter(|&t| t <= MAX_GRID))?;
    let mut seed = 0x5EED_u64 ^ (a.num_terms() as u64) << 20 ^ b.num_terms() as u64;
    let mut best_deg = usize::MAX;
    let mut acc: BTreeMap<Exponents, BigInt> = BTreeMap::new();
    let mut modulus = BigInt::one();
    let mut previous: Option<MPoly> = None;
    for p in primes() {
        let Some((deg, img)) = image_for_prime(a, b, gamma, main, &ys, &sizes, p, &mut seed) else {
            continue;
        };
        if deg == 0 {
            return Some(MPoly::one(n));
        }
        if deg > best_deg {
            continue;
        }
        if deg < best_deg {
            best_deg = deg;
            acc.clear();
            modulus = BigInt::one();
            previous = None;
        }
        // Chinese remaindering of the accumulated image with the new one
        let pb = BigInt::from(p);
        let m_inv = BigInt::from(inv((&modulus % &pb).to_u64().unwrap(), p));
        let keys: Vec<Exponents> = acc.keys().chain(img.keys()).cloned().collect::<std::collections::BTreeSet<_>>().into_iter().collect();
        let mut next = BTreeMap::new();
        for e in keys {
            let old = acc.get(&e).cloned().unwrap_or_else(BigInt::zero);
            let new = BigInt::from(img.get(&e).copied().unwrap_or(0));
            let old_mod = &old % &pb;
            let mut diff = (&new - old_mod) % &pb;
            if diff.is_negative() {
                diff += &pb;
            }
            let k = (diff * &m_inv) % &pb;
            let c = old + &modulus * k;
            if !c.is_zero() {
                next.insert(e, c);
            }
        }
        modulus *= &pb;
        acc = next;
        let half = &modulus >> 1;
        let candidate = MPoly::from_terms(
            n,
            acc.iter().map(|(e, c)| {
                let c = if c > &half { c - &modulus } else { c.clone() };
                (e.clone(), Rat::from_integer(c))
            }),
        );
        if previous.as_ref() == Some(&candidate) {
            let g = crate::gcd::primitive_part_in(&candidate, main).normalized();
            if a.div_exact(&g).is_some() && b.div_exact(&g).is_some() {
                return Some(g);
            }
        }
        previous = Some(candidate);
    }
    unreachable!("the prime supply is unbounded")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolation_recovers_polynomial() {
        let p = 1_000_000_007;
        // 3 + 2y + 5y^2
        let xs = [1u64, 2, 3];
        let mut vs: Vec<u64> = xs.iter().map(|&x| (3 + 2 * x + 5 * x * x) % p).collect();
        interpolate(&xs, &mut vs, p);
        assert_eq!(vs, vec![3, 2, 5]);
    }

    #[test]
    fn primes_are_prime() {
        let ps: Vec<u64> = primes().take(3).collect();
        assert!(ps.iter().all(|&p| is_prime_u64(p) && p < 1 << 62));
        assert!(!is_prime_u64(1 << 61));
    }
}
