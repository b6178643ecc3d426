mod common;

use common::{chart, e, form, mv, rand_poly_in, rng};
use nplectic::classify::{direct_sum, product_normal_form, symplectic_form};
use nplectic::exterior::{ext_d, interior, pullback, DiffForm, MultiVec, SmoothMap};
use nplectic::linfty::*;
use nplectic::scalar::Expr;
use nplectic::Error;
use rand_chacha::ChaCha8Rng;

fn obs(w: &DiffForm, a: &DiffForm) -> Observable {
    make_observable(w, a).unwrap()
}

#[test]
fn observables() {
    let c = chart(3);
    let w = form(&c, 3, &[(&[1, 2, 3], "1")]);
    assert_eq!(obs(&w, &form(&c, 1, &[(&[1], "x3")])).ham_field, Some(mv(&c, 1, &[(&[2], "-1")])));
    let c2 = chart(2);
    let s = form(&c2, 2, &[(&[1, 2], "1")]);
    assert_eq!(obs(&s, &DiffForm::scalar(&c2, e("x1"))).ham_field, Some(mv(&c2, 1, &[(&[2], "1")])));
    let p = product_normal_form();
    assert!(matches!(make_observable(&p, &form(p.chart(), 1, &[(&[4], "x1")])), Err(Error::NotHamiltonian)));
    let low = obs(&w, &DiffForm::scalar(&c, e("x1")));
    assert!(low.ham_field.is_none());
}

#[test]
fn bracket_examples() {
    let c = chart(3);
    let w = form(&c, 3, &[(&[1, 2, 3], "1")]);
    let a = obs(&w, &form(&c, 1, &[(&[1], "x3")]));
    let b = obs(&w, &form(&c, 1, &[(&[2], "x1")]));
    assert_eq!(b.ham_field, Some(mv(&c, 1, &[(&[3], "-1")])));
    assert_eq!(l_k(&w, &[a.clone(), b.clone()]).unwrap().form, form(&c, 1, &[(&[1], "1")]));

    let c4 = chart(4);
    let w4 = form(&c4, 4, &[(&[1, 2, 3, 4], "1")]);
    let a1 = obs(&w4, &form(&c4, 2, &[(&[3, 4], "-x2")]));
    let a2 = obs(&w4, &form(&c4, 2, &[(&[3, 4], "x1")]));
    let a3 = obs(&w4, &form(&c4, 2, &[(&[1, 2], "x4")]).neg());
    for (i, o) in [&a1, &a2, &a3].iter().enumerate() {
        let want = MultiVec::basis(&c4, &[i]).unwrap();
        let dx = &o.ham_field;
        // Oracle: iota_{d_i} w = -d(alpha_i).
        assert_eq!(interior(&want, &w4).unwrap(), ext_d(&o.form).neg());
        assert_eq!(dx.as_ref().unwrap(), &want);
    }
    assert_eq!(l_k(&w4, &[a1, a2, a3]).unwrap().form, form(&c4, 1, &[(&[4], "-1")]));
}

#[test]
fn zero_extension_flag() {
    let c = chart(3);
    let w = form(&c, 3, &[(&[1, 2, 3], "1")]);
    let a = obs(&w, &form(&c, 1, &[(&[1], "x3")]));
    let f = obs(&w, &DiffForm::scalar(&c, e("x2")));
    let v = l_k(&w, &[a, f]).unwrap();
    assert!(v.zero_extended && v.form.is_zero());
}

fn random_volume_observable(r: &mut ChaCha8Rng, w: &DiffForm, deg: i64) -> (Observable, Vec<Vec<Expr>>) {
    let c = w.chart().clone();
    let n = c.dim();
    let vars: Vec<usize> = (0..n).collect();
    let mut f = vec![vec![Expr::from_i64(0); n]; n];
    let mut alpha = DiffForm::zero(&c, n - 2);
    for i in 0..n {
        for j in i + 1..n {
            let p = rand_poly_in(r, &vars, deg, 3);
            let ii = interior(&MultiVec::basis(&c, &[i]).unwrap(), w).unwrap();
            let jj = interior(&MultiVec::basis(&c, &[j]).unwrap(), &ii).unwrap();
            alpha = alpha.add(&jj.scale(&p)).unwrap();
            f[j][i] = -p.clone();
            f[i][j] = p;
        }
    }
    (obs(w, &alpha), f)
}

#[test]
fn volume_bracket_matches_double_sum() {
    let mut r = rng(5);
    for n in [3usize, 4] {
        let c = chart(n);
        let w = DiffForm::basis(&c, &(0..n).collect::<Vec<_>>()).unwrap();
        for _ in 0..5 {
            let (a, f) = random_volume_observable(&mut r, &w, 1);
            let (b, ft) = random_volume_observable(&mut r, &w, 1);
            let x = |f: &Vec<Vec<Expr>>, j: usize| -> Expr {
                (0..n).filter(|&k| k != j).fold(Expr::from_i64(0), |acc, k| &acc + &f[k][j].partial_derivative(k))
            };
            let mut want = DiffForm::zero(&c, n - 2);
            for i in 0..n {
                for j in i + 1..n {
                    let coeff = &(&x(&ft, j) * &x(&f, i)) - &(&x(&ft, i) * &x(&f, j));
                    let ii = interior(&MultiVec::basis(&c, &[i]).unwrap(), &w).unwrap();
                    let jj = interior(&MultiVec::basis(&c, &[j]).unwrap(), &ii).unwrap();
                    want = want.add(&jj.scale(&coeff)).unwrap();
                }
            }
            assert_eq!(l_k(&w, &[a, b]).unwrap().form, want);
        }
    }
}

fn random_hamiltonian_1forms(r: &mut ChaCha8Rng, w: &DiffForm, count: usize) -> Vec<Observable> {
    // Hamiltonian 1-forms: alpha = iota_X w-potentials are hard to sample
    // directly, so keep those that pass the solver.
    let c = w.chart().clone();
    let mut out = Vec::new();
    while out.len() < count {
        let a = common::rand_form(r, &c, w.degree() - 2, 2);
        if let Ok(o) = make_observable(w, &a) {
            out.push(o);
        }
    }
    out
}

#[test]
fn relations_hold() {
    let mut r = rng(9);
    let c = chart(3);
    let w = form(&c, 3, &[(&[1, 2, 3], "1")]);
    for k in 2..=3 {
        let args = random_hamiltonian_1forms(&mut r, &w, k + 1);
        assert!(linfty_relation_residual(&w, k, &args).unwrap().is_zero(), "k={k}");
    }
    let s = symplectic_form(1);
    let args = random_hamiltonian_1forms(&mut r, &s, 3);
    assert!(linfty_relation_residual(&s, 2, &args).unwrap().is_zero());
    let c4 = chart(4);
    let w4 = form(&c4, 4, &[(&[1, 2, 3, 4], "1")]);
    let coords = [
        form(&c4, 2, &[(&[3, 4], "-x2")]),
        form(&c4, 2, &[(&[3, 4], "x1")]),
        form(&c4, 2, &[(&[1, 2], "-x4")]),
        form(&c4, 2, &[(&[1, 2], "x3")]),
    ];
    let args: Vec<Observable> = coords.iter().map(|a| obs(&w4, a)).collect();
    assert!(linfty_relation_residual(&w4, 3, &args).unwrap().is_zero());
    for k in 2..=4 {
        let args = random_hamiltonian_1forms(&mut r, &w4, k + 1);
        assert!(linfty_relation_residual(&w4, k, &args).unwrap().is_zero(), "k={k}");
    }
}

#[test]
fn jacobiator_identity() {
    let c = chart(3);
    let w = form(&c, 3, &[(&[1, 2, 3], "1")]);
    let a = obs(&w, &form(&c, 1, &[(&[1], "x3")]));
    let b = obs(&w, &form(&c, 1, &[(&[2], "x1")]));
    let g = obs(&w, &form(&c, 1, &[(&[3], "x2")]));
    assert!(jacobiator_identity_residual(&w, &a, &b, &g).unwrap().is_zero());
    assert!(jacobiator_identity_residual(&w, &a, &b, &b).unwrap().is_zero());
    let mut r = rng(21);
    let p = product_normal_form();
    for _ in 0..3 {
        let v = random_hamiltonian_1forms(&mut r, &p, 3);
        assert!(jacobiator_identity_residual(&p, &v[0], &v[1], &v[2]).unwrap().is_zero());
    }
}

#[test]
fn brackets_alternate() {
    let mut r = rng(13);
    let c4 = chart(4);
    let w4 = form(&c4, 4, &[(&[1, 2, 3, 4], "1")]);
    let v = random_hamiltonian_1forms(&mut r, &w4, 3);
    let base = l_k(&w4, &v).unwrap().form;
    let swapped = l_k(&w4, &[v[1].clone(), v[0].clone(), v[2].clone()]).unwrap().form;
    assert_eq!(base, swapped.neg());
    let swapped = l_k(&w4, &[v[0].clone(), v[2].clone(), v[1].clone()]).unwrap().form;
    assert_eq!(base, swapped.neg());
}

#[test]
fn sums_are_functorial() {
    let mut r = rng(17);
    let c3 = chart(3);
    let w3 = form(&c3, 3, &[(&[1, 2, 3], "1")]);
    let w = direct_sum(&[w3.clone(), w3.clone()]).unwrap();
    let c6 = w.chart().clone();
    let proj = |off: usize| SmoothMap::new(&c6, &c3, (0..3).map(|i| Expr::var(i + off)).collect()).unwrap();
    for off in [0, 3] {
        let v = random_hamiltonian_1forms(&mut r, &w3, 2);
        let pa = obs(&w, &pullback(&proj(off), &v[0].form).unwrap());
        let pb = obs(&w, &pullback(&proj(off), &v[1].form).unwrap());
        let block = l_k(&w3, &v).unwrap().form;
        assert_eq!(l_k(&w, &[pa, pb]).unwrap().form, pullback(&proj(off), &block).unwrap());
    }
}

#[test]
fn symplectic_poisson_bracket() {
    let s = symplectic_form(1);
    let c = s.chart().clone();
    let f = obs(&s, &DiffForm::scalar(&c, e("x1^2 x2")));
    let g = obs(&s, &DiffForm::scalar(&c, e("x2^3 + x1")));
    let fg = l_k(&s, &[f.clone(), g.clone()]).unwrap().form;
    let gf = l_k(&s, &[g, f.clone()]).unwrap().form;
    assert_eq!(fg, gf.neg());
    // Oracle: omega(X_f, X_g) evaluated directly.
    let xf = f.ham_field.unwrap();
    assert_eq!(fg.get(&[]), nplectic::exterior::evaluate_on(&s, &[xf, make_observable(&s, &DiffForm::scalar(&c, e("x2^3 + x1"))).unwrap().ham_field.unwrap()]).unwrap());
}
