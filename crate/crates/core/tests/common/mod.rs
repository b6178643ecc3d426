#![allow(dead_code)]

use std::sync::Arc;

use nplectic::exterior::{DiffForm, MultiVec};
use nplectic::scalar::{parse_rational, qi, Expr, Monomial};
use nplectic::Chart;
use num_rational::Rational64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn chart(dim: usize) -> Arc<Chart> {
    Chart::new(dim).shared()
}

pub fn pos_chart(dim: usize, positive: &[usize]) -> Arc<Chart> {
    Chart::new(dim).with_positive(positive.iter().copied()).unwrap().shared()
}

pub fn e(s: &str) -> Expr {
    parse_rational(s).unwrap()
}

pub fn form(c: &Arc<Chart>, degree: usize, terms: &[(&[usize], &str)]) -> DiffForm {
    DiffForm::parse(c, degree, terms).unwrap()
}

pub fn mv(c: &Arc<Chart>, degree: usize, terms: &[(&[usize], &str)]) -> MultiVec {
    MultiVec::parse(c, degree, terms).unwrap()
}

/// Random polynomial in the listed 0-based variables with small integer
/// coefficients.
pub fn rand_poly_in(rng: &mut ChaCha8Rng, vars: &[usize], max_deg: i64, terms: usize) -> Expr {
    let mut acc = Expr::from_i64(0);
    for _ in 0..terms {
        let c = rng.gen_range(-3i64..=3);
        if c == 0 {
            continue;
        }
        let pairs = vars
            .iter()
            .map(|&v| (v, Rational64::from_integer(rng.gen_range(0..=max_deg))))
            .collect();
        acc = &acc + &Expr::monomial(qi(c), Monomial::from_pairs(pairs));
    }
    acc
}

pub fn rand_poly(rng: &mut ChaCha8Rng, dim: usize, max_deg: i64, terms: usize) -> Expr {
    let vars: Vec<usize> = (0..dim).collect();
    rand_poly_in(rng, &vars, max_deg, terms)
}

/// All strictly increasing index tuples of length `k` below `n`.
pub fn tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

pub fn rand_form(rng: &mut ChaCha8Rng, c: &Arc<Chart>, degree: usize, max_deg: i64) -> DiffForm {
    let mut terms = Vec::new();
    for idx in tuples(c.dim(), degree) {
        if rng.gen_bool(0.6) {
            let p = rand_poly(rng, c.dim(), max_deg, 3);
            terms.push((idx, p));
        }
    }
    DiffForm::from_terms(c, degree, terms).unwrap()
}

pub fn rand_multivec(rng: &mut ChaCha8Rng, c: &Arc<Chart>, degree: usize, max_deg: i64) -> MultiVec {
    let mut terms = Vec::new();
    for idx in tuples(c.dim(), degree) {
        if rng.gen_bool(0.6) {
            let p = rand_poly(rng, c.dim(), max_deg, 2);
            terms.push((idx, p));
        }
    }
    MultiVec::from_terms(c, degree, terms).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}
