//! Rational solutions of parametrized first-order equations
//! `D_z(u) + w·u = Σ e_i·φ_i`, with unknown `u` rational and unknown
//! coefficients `e_i` free of `z`.
//!
//! The solver bounds the denominator of `u` (poles of the right-hand sides
//! plus integer residues of `w` at its simple poles), bounds the degree of the
//! remaining polynomial unknown in `z`, and solves the resulting linear system
//! over the field of functions free of `z`.

use num_traits::{Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::exec::Parallelism;
use crate::gcd::{gcd, lcm, primitive_part_in, squarefree_in};
use crate::linalg::nullspace;
use crate::poly::{Exponents, MPoly};
use crate::ratfun::{integer_residues, RatFun};

#[derive(Clone, Debug, PartialEq)]
pub struct ParamRdeProblem {
    pub var: usize,
    pub w: RatFun,
    pub rhs: Vec<RatFun>,
}

/// One solution `(e_0, ..., e_rho; u)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RdeSolution {
    pub e: Vec<RatFun>,
    pub u: RatFun,
}

impl RdeSolution {
    pub fn is_homogeneous(&self) -> bool {
        self.e.iter().all(|e| e.is_zero())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ParamRdeSolutionSpace {
    /// Basis over the functions free of the main variable, homogeneous
    /// solutions included.
    pub basis: Vec<RdeSolution>,
    /// Degree bound used for the polynomial part.
    pub degree_bound: usize,
    /// Set when the indicial root at infinity depended on other variables and
    /// the bound fell back to degree comparison alone.
    pub degree_bound_fallback: bool,
}

impl ParamRdeSolutionSpace {
    /// Solutions with a nonzero parameter part.
    pub fn inhomogeneous(&self) -> impl Iterator<Item = &RdeSolution> {
        self.basis.iter().filter(|s| !s.is_homogeneous())
    }
}

/// Residual `D_z(u) + w·u - Σ e_i φ_i`.
pub fn residual(problem: &ParamRdeProblem, sol: &RdeSolution) -> RatFun {
    let z = problem.var;
    let lhs = &sol.u.derive(z) + &(&problem.w * &sol.u);
    sol.e.iter().zip(&problem.rhs).fold(lhs, |acc, (e, phi)| &acc - &(e * phi))
}

pub fn param_rde(problem: &ParamRdeProblem) -> Result<ParamRdeSolutionSpace> {
    param_rde_par(problem, Parallelism::default())
}

pub fn param_rde_par(problem: &ParamRdeProblem, par: Parallelism) -> Result<ParamRdeSolutionSpace> {
    let z = problem.var;
    let n = problem.w.nvars();
    if z >= n {
        return Err(Error::NotAParameter(z));
    }
    let rho = problem.rhs.len();

    // common denominator of the right-hand sides
    let e_den = problem
        .rhs
        .iter()
        .filter(|f| !f.is_zero())
        .fold(MPoly::one(n), |acc, f| if f.den().is_one() { acc } else { lcm(&acc, f.den()) });

    // denominator bound: a pole of order j of the right-hand side allows a
    // pole of order j - 1 in u ...
    let mut h = MPoly::one(n);
    let ez = primitive_part_in(&e_den, z);
    if ez.involves(z) {
        for (f, j) in squarefree_in(&ez, z).factors {
            if j > 1 {
                h = &h * &f.pow(j - 1);
            }
        }
    }
    // ... and a simple pole of w with positive integer residue m allows a
    // pole of order m that the left-hand side annihilates
    let (a, b) = (problem.w.num().clone(), problem.w.den().clone());
    if !a.is_zero() {
        let bz = primitive_part_in(&b, z);
        if bz.involves(z) {
            if let Some(b1) = squarefree_in(&bz, z).factor_with_multiplicity(1) {
                for (m, g) in integer_residues(&a, &b, b1, z) {
                    if m.is_positive() {
                        h = &h * &g.pow(m.to_u32().expect("residue fits"));
                    }
                }
            }
        }
    }

    // with u = U/h:  A·U' + B·U = Σ e_i C_i
    let dh = h.derivative(z);
    let mut big_a = &(&e_den * &b) * &h;
    let mut big_b = &e_den * &(&(&a * &h) - &(&b * &dh));
    let h2b = &(&h * &h) * &b;
    let mut cs: Vec<MPoly> = problem
        .rhs
        .iter()
        .map(|f| {
            if f.is_zero() {
                MPoly::zero(n)
            } else {
                &h2b * &(&e_den.div_exact(f.den()).unwrap() * f.num())
            }
        })
        .collect();
    let mut g = gcd(&big_a, &big_b);
    for c in cs.iter().filter(|c| !c.is_zero()) {
        if g.is_one() {
            break;
        }
        g = gcd(&g, c);
    }
    if !g.is_one() {
        big_a = big_a.div_exact(&g).unwrap();
        big_b = big_b.div_exact(&g).unwrap();
        for c in cs.iter_mut() {
            if !c.is_zero() {
                *c = c.div_exact(&g).unwrap();
            }
        }
    }

    // degree bound at infinity
    let da = big_a.degree_in(z) as i64;
    let dc = cs.iter().filter(|c| !c.is_zero()).map(|c| c.degree_in(z) as i64).max();
    let mut fallback = false;
    let bound = match dc {
        None => 0,
        Some(dc) => {
            if big_b.is_zero() || (big_b.degree_in(z) as i64) < da - 1 {
                dc - da + 1
            } else {
                let db = big_b.degree_in(z) as i64;
                if db > da - 1 {
                    dc - db
                } else {
                    // leading terms cancel when deg U = -lc(B)/lc(A)
                    let ratio = RatFun::new(-big_b.lc_in(z), big_a.lc_in(z))?;
                    match ratio.constant_value() {
                        Some(r) if r.is_integer() && !r.is_negative() => {
                            (dc - db).max(r.to_integer().to_i64().expect("indicial root fits"))
                        }
                        Some(_) => dc - db,
                        None => {
                            fallback = true;
                            dc - db
                        }
                    }
                }
            }
        }
    };
    // homogeneous solutions can also have degree at the indicial root when
    // there is no right-hand side to compare against
    let mut bound = bound.max(0);
    if !big_b.is_zero() && big_b.degree_in(z) as i64 == da - 1 {
        if let Some(r) = RatFun::new(-big_b.lc_in(z), big_a.lc_in(z))?.constant_value() {
            if r.is_integer() && !r.is_negative() {
                bound = bound.max(r.to_integer().to_i64().unwrap());
            }
        }
    }
    let bound = bound as usize;

    // columns: U coefficients first, then the parameters
    let zpow = |k: usize| {
        let mut e = Exponents::zero(n);
        e.0[z] = k as u32;
        e
    };
    let one = crate::poly::rat_int(1);
    let mut columns: Vec<MPoly> = (0..=bound)
        .map(|k| {
            let mut col = big_b.mul_term(&zpow(k), &one);
            if k > 0 {
                col = &col + &big_a.mul_term(&zpow(k - 1), &crate::poly::rat_int(k as i64));
            }
            col
        })
        .collect();
    columns.extend(cs.iter().map(|c| -c));
    let ncols = columns.len();
    let col_coeffs: Vec<Vec<MPoly>> = columns.iter().map(|c| c.coeffs_in(z)).collect();
    let nrows = col_coeffs.iter().map(|c| c.len()).max().unwrap_or(0);
    let rows: Vec<Vec<MPoly>> = (0..nrows)
        .map(|r| col_coeffs.iter().map(|c| c.get(r).cloned().unwrap_or_else(|| MPoly::zero(n))).collect())
        .collect();
    let kernel = nullspace(n, rows, ncols, par);

    // the cleared identity A·U' + B·U = Σ e_i C_i is equivalent to the
    // equation and cheap to check with polynomial arithmetic alone
    for v in &kernel {
        let den = v
            .iter()
            .filter(|x| !x.is_zero())
            .fold(MPoly::one(n), |acc, x| if x.den().is_one() { acc } else { lcm(&acc, x.den()) });
        let mut total = MPoly::zero(n);
        for (x, col) in v.iter().zip(&columns) {
            if !x.is_zero() {
                total = &total + &(&(&den.div_exact(x.den()).unwrap() * x.num()) * col);
            }
        }
        if !total.is_zero() {
            return Err(Error::InvariantBreach("parametrized equation solution fails verification".into()));
        }
    }

    let zf = RatFun::var(n, z);
    let hf = RatFun::from_poly(h);
    let basis = kernel
        .into_iter()
        .map(|v| {
            let mut num = RatFun::zero(n);
            for k in (0..=bound).rev() {
                num = &(&num * &zf) + &v[k];
            }
            let u = num.checked_div(&hf).unwrap();
            RdeSolution { e: v[bound + 1..].to_vec(), u }
        })
        .collect::<Vec<_>>();
    debug_assert!(basis.iter().all(|s| s.e.len() == rho));
    Ok(ParamRdeSolutionSpace { basis, degree_bound: bound, degree_bound_fallback: fallback })
}
