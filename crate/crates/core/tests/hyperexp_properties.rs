mod common;

use std::sync::Arc;

use common::*;
use proptest::prelude::*;

use paratele_core::hyperexp::{
    d_apply, elements_equal, is_similar, kt_annihilator, op_apply, split_log_derivative, HElement, HTerm,
};
use paratele_core::{MPoly, RatFun};

const N: usize = 3;

fn element(r: &mut rand_chacha::ChaCha8Rng) -> HElement {
    let h1 = term(r, N, "h1");
    let h2 = term(r, N, "h2");
    HElement::single(nonzero_ratfun(r, N, 2, 1), h1).add(&HElement::single(nonzero_ratfun(r, N, 2, 1), h2))
}

/// Term `p(t, x) * w(t)` with `D_t(w)/w` in `Q(t)`, so the element has an
/// annihilator with coefficients in `t`.
fn kt_term(r: &mut rand_chacha::ChaCha8Rng) -> (Arc<HTerm>, MPoly, RatFun) {
    let p = poly_in(r, N, 2, 3, 0);
    let t = RatFun::var(N, 0);
    let rt = &RatFun::constant(N, small_rat(r)).checked_div(&t).unwrap() + &RatFun::constant(N, small_rat(r));
    let pr = RatFun::from_poly(p.clone());
    let logd = (0..N).map(|v| &pr.log_derivative(v).unwrap() + &if v == 0 { rt.clone() } else { RatFun::zero(N) }).collect();
    (HTerm::new("h", logd).unwrap(), p, rt)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn constructed_terms_are_integrable(seed in any::<u64>(), a in 0..N, b in 0..N) {
        let mut r = rng(seed);
        let h = term(&mut r, N, "h");
        prop_assert_eq!(h.r(a).derive(b), h.r(b).derive(a));
        let mut bad = h.logd().to_vec();
        bad[1] = &bad[1] + &RatFun::var(N, 2);
        let rejected = matches!(HTerm::new("bad", bad), Err(paratele_core::Error::NotIntegrable { .. }));
        prop_assert!(rejected);
    }

    #[test]
    fn derivations_commute_on_elements(seed in any::<u64>(), a in 0..N, b in 0..N) {
        let mut r = rng(seed);
        let e = element(&mut r);
        prop_assert!(elements_equal(&d_apply(&d_apply(&e, a), b), &d_apply(&d_apply(&e, b), a)));
    }

    #[test]
    fn operators_act_as_a_module(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = operator(&mut r, N, 1, false);
        let b = operator(&mut r, N, 2, false);
        let (e1, e2) = (element(&mut r), element(&mut r));
        prop_assert!(elements_equal(&op_apply(&(&a * &b), &e1), &op_apply(&a, &op_apply(&b, &e1))));
        prop_assert!(elements_equal(&op_apply(&a, &e1.add(&e2)), &op_apply(&a, &e1).add(&op_apply(&a, &e2))));
        prop_assert!(elements_equal(&op_apply(&(&a + &b), &e1), &op_apply(&a, &e1).add(&op_apply(&b, &e1))));
    }

    #[test]
    fn similarity_is_an_equivalence(seed in any::<u64>()) {
        let mut r = rng(seed);
        let h1 = term(&mut r, N, "h1");
        let q1 = nonzero_ratfun(&mut r, N, 2, 1);
        let q2 = nonzero_ratfun(&mut r, N, 1, 2);
        let h2 = h1.times_rational(&q1, "h2").unwrap();
        let h3 = h2.times_rational(&q2, "h3").unwrap();
        let constant = |f: &RatFun| f.constant_value().is_some();
        prop_assert!(is_similar(&h1, &h1).unwrap().is_one());
        let q21 = is_similar(&h2, &h1).unwrap();
        prop_assert!(constant(&q21.checked_div(&q1).unwrap()));
        let q12 = is_similar(&h1, &h2).unwrap();
        prop_assert!(constant(&(&q12 * &q21)));
        let q31 = is_similar(&h3, &h1).unwrap();
        let q32 = is_similar(&h3, &h2).unwrap();
        prop_assert!(constant(&q31.checked_div(&(&q32 * &q21)).unwrap()));
        // exp(x1) and sqrt(t + x2) are not rational
        let mut e = h1.logd().to_vec();
        e[1] = &e[1] + &RatFun::one(N);
        prop_assert!(is_similar(&HTerm::new("e", e).unwrap(), &h1).is_none());
        let s = h1.times_rational(&RatFun::one(N), "s").unwrap();
        let half = (&RatFun::var(N, 0) + &RatFun::var(N, 2)).log_derivative(0).unwrap().scale(&paratele_core::poly::rat(1, 2));
        let mut sq = s.logd().to_vec();
        sq[0] = &sq[0] + &half;
        sq[2] = &sq[2] + &half;
        prop_assert!(is_similar(&HTerm::new("sq", sq).unwrap(), &h1).is_none());
    }

    #[test]
    fn similar_parts_merge(seed in any::<u64>()) {
        let mut r = rng(seed);
        let h = term(&mut r, N, "h");
        let q = nonzero_ratfun(&mut r, N, 1, 1);
        let hq = h.times_rational(&q, "hq").unwrap();
        let c = nonzero_ratfun(&mut r, N, 2, 1);
        let e = HElement::single(&c * &q, h.clone()).add(&HElement::single(c.clone(), hq));
        // terms are fixed only up to a constant factor, so the merged part may cancel
        prop_assert!(e.parts().len() <= 1);
        prop_assert!(e.parts().iter().all(|(c, _)| !c.is_zero()));
        prop_assert!(HElement::single(c.clone(), h.clone()).sub(&HElement::single(c, h)).is_zero());
    }

    #[test]
    fn log_derivative_split_reconstructs(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (h, _, _) = kt_term(&mut r);
        let rt = h.r(0).clone();
        let (p, rest) = split_log_derivative(&rt).unwrap();
        prop_assert!(rest.is_free_of_all_but(&[0]));
        prop_assert_eq!(&RatFun::from_poly(p).log_derivative(0).unwrap() + &rest, rt);
        // arbitrary inputs: whenever a split is returned it reconstructs
        let other = ratfun(&mut r, N, 2, 2);
        if let Some((p, rest)) = split_log_derivative(&other) {
            prop_assert!(rest.is_free_of_all_but(&[0]));
            prop_assert_eq!(&RatFun::from_poly(p).log_derivative(0).unwrap() + &rest, other);
        }
    }

    #[test]
    fn kt_annihilator_annihilates(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (h, _, _) = kt_term(&mut r);
        let c = RatFun::from_poly(nonzero_poly(&mut r, N, 2, 2));
        let e = HElement::single(c, h);
        let l = kt_annihilator(&e).unwrap().unwrap();
        prop_assert!(l.is_free_of_parameters());
        prop_assert!(op_apply(&l, &e).is_zero());
    }
}
