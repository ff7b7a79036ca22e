//! Nullspaces of matrices over the rational function field.
//!
//! Rows are cleared of denominators and eliminated fraction-free; every
//! updated row is divided by its content so entries stay small. The basis is
//! read off by back substitution with one vector per free column, normalized
//! to 1 in that column and 0 in every other free column, which makes it
//! independent of pivoting choices.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exec::{self, Parallelism};
use crate::gcd::gcd;
use crate::poly::{MPoly, Rat};
use crate::ratfun::RatFun;

/// Right nullspace basis of a matrix with polynomial entries.
pub fn nullspace(nvars: usize, rows: Vec<Vec<MPoly>>, ncols: usize, par: Parallelism) -> Vec<Vec<RatFun>> {
    let mut rows: Vec<Vec<MPoly>> = rows
        .into_iter()
        .filter(|r| r.iter().any(|e| !e.is_zero()))
        .map(primitive_row)
        .collect();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == rows.len() {
            break;
        }
        let candidate = (r..rows.len())
            .filter(|&i| !rows[i][col].is_zero())
            .min_by_key(|&i| (rows[i][col].num_terms(), row_size(&rows[i])));
        let Some(p) = candidate else { continue };
        rows.swap(r, p);
        let (head, tail) = rows.split_at_mut(r + 1);
        let piv = &head[r];
        exec::for_each_mut(par, tail, |row| {
            if row[col].is_zero() {
                return;
            }
            let g = gcd(&piv[col], &row[col]);
            let a = piv[col].div_exact(&g).unwrap();
            let b = row[col].div_exact(&g).unwrap();
            let updated: Vec<MPoly> = row
                .iter()
                .zip(piv.iter())
                .map(|(x, y)| {
                    if y.is_zero() {
                        x * &a
                    } else if x.is_zero() {
                        -(&b * y)
                    } else {
                        &(x * &a) - &(&b * y)
                    }
                })
                .collect();
            *row = primitive_row(updated);
        });
        rows.retain(|row| row.iter().any(|e| !e.is_zero()));
        pivots.push(col);
        r += 1;
    }
    rows.truncate(pivots.len());

    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    let rows = &rows;
    let pivots = &pivots;
    let free_ref = &free;
    exec::map(par, &free, |&f| {
        let mut x = vec![RatFun::zero(nvars); ncols];
        x[f] = RatFun::one(nvars);
        for (k, &pc) in pivots.iter().enumerate().rev() {
            let row = &rows[k];
            let mut acc = RatFun::zero(nvars);
            for j in pc + 1..ncols {
                if !row[j].is_zero() && !x[j].is_zero() {
                    acc = &acc + &(&RatFun::from_poly(row[j].clone()) * &x[j]);
                }
            }
            if !acc.is_zero() {
                x[pc] = (-acc).checked_div(&RatFun::from_poly(row[pc].clone())).unwrap();
            }
        }
        debug_assert!(free_ref.iter().all(|&c| c == f || x[c].is_zero()));
        x
    })
}

/// Nullspace of a matrix with rational function entries.
pub fn nullspace_ratfun(
    nvars: usize,
    rows: &[Vec<RatFun>],
    ncols: usize,
    par: Parallelism,
) -> Vec<Vec<RatFun>> {
    let cleared = exec::map(par, rows, |row| {
        let den = row.iter().fold(None::<MPoly>, |acc, e| {
            if e.is_zero() || e.den().is_one() {
                return acc;
            }
            Some(match acc {
                None => e.den().clone(),
                Some(d) => crate::gcd::lcm(&d, e.den()),
            })
        });
        match den {
            None => row.iter().map(|e| e.num().clone()).collect::<Vec<_>>(),
            Some(d) => row
                .iter()
                .map(|e| {
                    if e.is_zero() {
                        e.num().clone()
                    } else {
                        &d.div_exact(e.den()).unwrap() * e.num()
                    }
                })
                .collect(),
        }
    });
    nullspace(nvars, cleared, ncols, par)
}

fn row_size(row: &[MPoly]) -> usize {
    row.iter().map(|e| e.num_terms()).sum()
}

/// Divides a row by the gcd of its entries and makes its coefficients
/// coprime integers.
fn primitive_row(row: Vec<MPoly>) -> Vec<MPoly> {
    let mut g = MPoly::zero(0);
    let mut first = true;
    for e in row.iter().filter(|e| !e.is_zero()) {
        g = if first { e.normalized() } else { gcd(&g, e) };
        first = false;
        if g.is_one() {
            break;
        }
    }
    if first {
        return row;
    }
    let row: Vec<MPoly> = if g.is_one() {
        row
    } else {
        row.into_iter().map(|e| if e.is_zero() { e } else { e.div_exact(&g).unwrap() }).collect()
    };
    let c = rational_content(row.iter());
    if c.is_one() {
        row
    } else {
        let inv = c.recip();
        row.into_iter().map(|e| e.scale(&inv)).collect()
    }
}

/// Positive rational `c` such that dividing every coefficient by `c` yields
/// coprime integers.
pub(crate) fn rational_content<'a>(polys: impl Iterator<Item = &'a MPoly>) -> Rat {
    let mut num = num_bigint::BigInt::zero();
    let mut den = num_bigint::BigInt::one();
    for p in polys {
        for (_, c) in p.terms() {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
    }
    if num.is_zero() {
        return Rat::one();
    }
    Rat::new(num.abs(), den)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(k: i64) -> MPoly {
        MPoly::from_int(2, k)
    }

    #[test]
    fn rank_one_system() {
        let t = MPoly::var(2, 0);
        // [t, 1, 2]·x = 0 has a two-dimensional nullspace
        let basis = nullspace(2, vec![vec![t.clone(), c(1), c(2)]], 3, Parallelism::Sequential);
        assert_eq!(basis.len(), 2);
        for v in &basis {
            let s = &(&(&RatFun::from_poly(t.clone()) * &v[0]) + &v[1]) + &(&RatFun::from_int(2, 2) * &v[2]);
            assert!(s.is_zero());
        }
    }

    #[test]
    fn full_rank_has_trivial_nullspace() {
        let t = MPoly::var(2, 0);
        let rows = vec![vec![t.clone(), c(1)], vec![c(1), t.clone()]];
        assert!(nullspace(2, rows, 2, Parallelism::Sequential).is_empty());
    }

    #[test]
    fn basis_is_independent_of_parallelism() {
        let t = MPoly::var(2, 0);
        let x = MPoly::var(2, 1);
        let rows = vec![
            vec![t.clone(), x.clone(), &t + &x, c(0)],
            vec![x.clone(), c(0), x.clone(), &t * &x],
            vec![&t + &x, x.clone(), &(&t + &x) + &x, &t * &x],
        ];
        let a = nullspace(2, rows.clone(), 4, Parallelism::Sequential);
        let b = nullspace(2, rows, 4, Parallelism::Parallel);
        assert_eq!(a, b);
        assert_eq!(a.len(), 2);
    }

    #[test]
    fn empty_matrix_has_full_nullspace() {
        assert_eq!(nullspace(2, Vec::new(), 2, Parallelism::Sequential).len(), 2);
    }
}
