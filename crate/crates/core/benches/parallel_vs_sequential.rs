use std::sync::Arc;
use std::time::Duration;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use paratele_core::exec::{Config, Parallelism};
use paratele_core::hyperexp::{op_apply, HElement, HTerm};
use paratele_core::linalg::nullspace;
use paratele_core::ore::OreOp;
use paratele_core::paratele::{paratele_general_with, paratele_similar_with};
use paratele_core::poly::{rat, Exponents, MPoly};
use paratele_core::RatFun;

const N: usize = 3;

fn configs() -> [(&'static str, Config); 2] {
    [("sequential", Config::sequential()), ("parallel", Config { parallelism: Parallelism::Parallel, ..Config::default() })]
}

/// The incompatible pair over `1/sqrt(t)` with a telescoper of order four.
fn pair() -> [HElement; 2] {
    let v = |i| RatFun::var(N, i);
    let c = |k| RatFun::from_int(N, k);
    let (t, x1, x2) = (v(0), v(1), v(2));
    let u = &(&t + &x1) + &x2;
    let c1 = (&t * &(&(&x1 + &t) + &(&(&t * &t) * &u))).checked_div(&(&u * &(&t + &x1))).unwrap();
    let tp1 = &t + &c(1);
    let inner = &(&(&tp1 * &tp1) + &(&x1 * &x2)) + &(&t * &(&x1 - &c(1)));
    let c2 = (&(&inner * &u) - &(&t * &x1)).checked_div(&(&u * &(&t + &x2))).unwrap();
    let h = HTerm::new("h", vec![c(-1).checked_div(&(&t * &c(2))).unwrap(), c(0), c(0)]).unwrap();
    [HElement::single(c1, h.clone()), HElement::single(c2, h)]
}

fn inv_sqrt_t(pair: &[HElement; 2]) -> Arc<HTerm> {
    pair[0].parts()[0].1.clone()
}

fn matrix(seed: u64, rows: usize, cols: usize) -> Vec<Vec<MPoly>> {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    (0..rows)
        .map(|_| {
            (0..cols)
                .map(|_| {
                    (0..3).fold(MPoly::zero(N), |acc, _| {
                        let e = Exponents((0..N).map(|_| r.gen_range(0..2)).collect());
                        &acc + &MPoly::monomial(N, e, rat(r.gen_range(-4..5), 1))
                    })
                })
                .collect()
        })
        .collect()
}

fn bench(c: &mut Criterion) {
    let pair = pair();
    let h = inv_sqrt_t(&pair);
    let p = OreOp::from_int_coeffs(N, &[&[1], &[0, 2]]);
    let similar: Vec<RatFun> = pair.iter().map(|e| op_apply(&p, e).coeff_over(&h).unwrap()).collect();
    let m = matrix(7, 5, 8);

    let mut g = c.benchmark_group("paratele");
    g.sample_size(10).measurement_time(Duration::from_secs(20));
    for (name, cfg) in configs() {
        g.bench_with_input(BenchmarkId::new("similar", name), &cfg, |b, cfg| {
            b.iter(|| paratele_similar_with(&similar, &h, cfg).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("general", name), &cfg, |b, cfg| {
            b.iter(|| paratele_general_with(&pair, cfg).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("nullspace", name), &cfg, |b, cfg| {
            b.iter(|| nullspace(N, m.clone(), 8, cfg.parallelism))
        });
    }
    g.finish();
}

criterion_group!(benches, bench);
criterion_main!(benches);
