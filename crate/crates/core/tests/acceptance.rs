//! End-to-end acceptance criteria. Runs as a plain binary so that the
//! PASS/FAIL lines are always printed.

mod common;

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use common::{chart, e, form, pos_chart, rand_poly_in, rng};
use nplectic::classify::*;
use nplectic::exterior::{ext_d, interior, linear_map, pullback, DiffForm, MultiVec};
use nplectic::hdw::{hamilton_volterra_residual, multiphase_forms};
use nplectic::liesym::*;
use nplectic::linalg;
use nplectic::linfty::{jacobiator_identity_residual, l_k, linfty_relation_residual, make_observable, Observable};
use nplectic::mover::{move_points, realify_and_check, Point};
use nplectic::scalar::{q, qi, Expr, GaussQ, Q};
use nplectic::{Chart, SmoothMap};
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ok<T, E: std::fmt::Debug>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|err| format!("{err:?}"))
}

fn hitchin_matrix() -> Outcome {
    let c = chart(6);
    let w = ok(omega_f(&c, e("x2")))?;
    let j = ok(hitchin_endomorphism(&w, &standard_volume(&c)))?;
    let f = e("x2");
    let z = Expr::zero();
    let k = Expr::from_i64;
    let mut want = vec![vec![z.clone(); 6]; 6];
    want[0][1] = f.scale(&qi(-2));
    want[1][0] = k(-2);
    want[2][3] = f.scale(&qi(-2));
    want[3][2] = k(-2);
    want[4][5] = k(2);
    want[5][4] = f.scale(&qi(2));
    ensure(j.matrix() == &want, || format!("J = {:?}", j.matrix()))
}

fn random_invertible(r: &mut ChaCha8Rng, n: usize) -> Vec<Vec<Q>> {
    loop {
        let m: Vec<Vec<Q>> = (0..n).map(|_| (0..n).map(|_| qi(r.gen_range(-2..=2))).collect()).collect();
        if !linalg::det(&m).is_zero() {
            return m;
        }
    }
}

fn trichotomy() -> Outcome {
    let expected = [LinearType::ProductType, LinearType::ComplexType, LinearType::TangentType];
    let origin = vec![Q::zero(); 6];
    let forms = dim6_normal_forms();
    for (w, lt) in forms.iter().zip(expected) {
        let got = ok(classify6(w, &origin))?.linear_type;
        ensure(got == lt, || format!("normal form classified as {got:?}, expected {lt:?}"))?;
    }
    let mut r = rng(2024);
    let c = chart(6);
    let mut seen = std::collections::BTreeSet::new();
    for i in 0..1000 {
        let which = i % 3;
        let g = ok(linear_map(&c, &random_invertible(&mut r, 6)))?;
        let pw = ok(pullback(&g, &forms[which]))?;
        let got = ok(classify6_linear(&pw))?.linear_type;
        ensure(got == expected[which], || format!("conjugate {i} classified as {got:?}"))?;
        seen.insert(got.name());
    }
    ensure(seen.len() == 3, || format!("verdicts {seen:?}"))
}

fn nonflat_witness() -> Outcome {
    let c = pos_chart(6, &[1]);
    let w = ok(omega_f(&c, e("x2")))?;
    let (w1, _) = ok(split_product(&w))?;
    let want = form(&c, 4, &[(&[1, 2, 4, 5], "1/4 x2^(-1/2)"), (&[1, 2, 3, 6], "1/4 x2^(-3/2)")]);
    ensure(ext_d(&w1) == want, || format!("d w1 = {}", ext_d(&w1)))?;
    let rep = ok(flatness_report(&w))?;
    ensure(rep.flat == Flatness::NonFlat, || format!("flatness {:?}", rep.flat))?;
    let inv = ok(product_invariants(&w))?;
    let xixi = form(&c, 2, &[(&[1, 2], "1/16 x2^(-5/2)")]);
    ensure(inv.xi_xi_volume == xixi, || format!("iota_xi iota_xi Omega = {}", inv.xi_xi_volume))
}

fn flat_and_nonflat() -> Outcome {
    let flat = ok(flatness_report(&ok(omega_f(&chart(6), e("1")))?))?;
    let c = pos_chart(6, &[1]);
    let nonflat = ok(flatness_report(&ok(omega_f(&c, e("x2")))?))?;
    ensure(flat.flat == Flatness::Flat && nonflat.flat == Flatness::NonFlat, || {
        format!("f = 1: {:?}, f = x2: {:?}", flat.flat, nonflat.flat)
    })
}

fn nondegeneracy() -> Outcome {
    ensure(ok(nondegenerate(&g2_form(), None))?.nondegenerate, || "G2 form degenerate".into())?;
    ensure(ok(nondegenerate(&sphere_tangent_form(), None))?.nondegenerate, || "S6 form degenerate".into())?;
    let c = chart(6);
    let rep = ok(nondegenerate(&form(&c, 3, &[(&[1, 2, 3], "1")]), None))?;
    let mut kernel: Vec<Vec<Expr>> = rep.kernel.iter().map(|v| v.components().unwrap()).collect();
    linalg::rref(&mut kernel);
    let want: Vec<Vec<Expr>> =
        (3..6).map(|i| (0..6).map(|j| if i == j { Expr::one() } else { Expr::zero() }).collect()).collect();
    ensure(!rep.nondegenerate && kernel[..3] == want[..], || format!("kernel {kernel:?}"))?;
    for j in 1..=4 {
        let w = ok(symplectic_power(4, j))?;
        ensure(ok(nondegenerate(&w, None))?.nondegenerate, || format!("omega^{j} degenerate"))?;
    }
    Ok(())
}

/// A Hamiltonian 1-form for `dx123` or `dx123 + dx456`: each block only sees
/// its own variables, plus an arbitrary exact term.
fn hamiltonian_1form(r: &mut ChaCha8Rng, c: &Arc<Chart>) -> DiffForm {
    let n = c.dim();
    let mut a = DiffForm::zero(c, 1);
    for block in (0..n).collect::<Vec<_>>().chunks(3) {
        for &i in block {
            a.add_term(vec![i], rand_poly_in(r, block, 2, 3)).unwrap();
        }
    }
    let all: Vec<usize> = (0..n).collect();
    a.add(&ext_d(&DiffForm::scalar(c, rand_poly_in(r, &all, 3, 3)))).unwrap()
}

fn linfty_relations() -> Outcome {
    let mut r = rng(6);
    let volume = {
        let c = chart(3);
        form(&c, 3, &[(&[1, 2, 3], "1")])
    };
    let targets = [volume, product_normal_form()];
    for case in 0..100 {
        let w = &targets[case % 2];
        let k = 2 + (case / 2) % 2;
        let args: Vec<Observable> = (0..k + 1)
            .map(|_| make_observable(w, &hamiltonian_1form(&mut r, w.chart())))
            .collect::<Result<_, _>>()
            .map_err(|err| format!("case {case}: {err:?}"))?;
        ensure(args.iter().all(Observable::is_hamiltonian), || format!("case {case}: sample not Hamiltonian"))?;
        let res = ok(linfty_relation_residual(w, k, &args))?;
        ensure(res.is_zero(), || format!("case {case}, k = {k}: residual {res}"))?;
        let jac = ok(jacobiator_identity_residual(w, &args[0], &args[1], &args[2]))?;
        ensure(jac.is_zero(), || format!("case {case}: Jacobiator residual {jac}"))?;
    }
    Ok(())
}

fn volume_l2() -> Outcome {
    let mut r = rng(7);
    for n in [3usize, 4] {
        let c = chart(n);
        let w = DiffForm::basis(&c, &(0..n).collect::<Vec<_>>()).unwrap();
        let vars: Vec<usize> = (0..n).collect();
        let iota2 = |i: usize, j: usize| {
            let ii = interior(&MultiVec::basis(&c, &[i]).unwrap(), &w).unwrap();
            interior(&MultiVec::basis(&c, &[j]).unwrap(), &ii).unwrap()
        };
        let mut sample = || {
            let mut f = vec![vec![Expr::zero(); n]; n];
            let mut alpha = DiffForm::zero(&c, n - 2);
            for i in 0..n {
                for j in i + 1..n {
                    let p = rand_poly_in(&mut r, &vars, 1, n + 1);
                    alpha = alpha.add(&iota2(i, j).scale(&p)).unwrap();
                    f[j][i] = -p.clone();
                    f[i][j] = p;
                }
            }
            (alpha, f)
        };
        let (a, f) = sample();
        let (b, ft) = sample();
        let x = |f: &Vec<Vec<Expr>>, j: usize| {
            (0..n).filter(|&k| k != j).fold(Expr::zero(), |acc, k| &acc + &f[k][j].partial_derivative(k))
        };
        let mut want = DiffForm::zero(&c, n - 2);
        for i in 0..n {
            for j in i + 1..n {
                let coeff = &(&x(&ft, j) * &x(&f, i)) - &(&x(&ft, i) * &x(&f, j));
                want = want.add(&iota2(i, j).scale(&coeff)).unwrap();
            }
        }
        let oa = ok(make_observable(&w, &a))?;
        let ob = ok(make_observable(&w, &b))?;
        let got = ok(l_k(&w, &[oa, ob]))?.form;
        ensure(got == want, || format!("n = {n}: l2 = {got}, formula = {want}"))?;
    }
    Ok(())
}

fn diag(v: i64, n: usize) -> Vec<Vec<Q>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { qi(v) } else { Q::zero() }).collect()).collect()
}

fn lie_suite() -> Outcome {
    let so3 = LieAlgebra::so3();
    let (k, _) = killing_form(&so3);
    ensure(k == diag(-2, 3), || format!("so(3) Killing form {k:?}"))?;
    let w = canonical_three_form(&so3);
    ensure(ok(nondegenerate(&w, None))?.nondegenerate, || "so(3) canonical form degenerate".into())?;
    let cochain: Vec<Q> = vec![w.get(&[0, 1, 2]).as_constant().ok_or("non-constant")?];
    ensure(coboundary_test(&so3, 3, &cochain).is_none(), || "omega_e is a coboundary".into())?;
    let (act, vol) = so3_gibbs_action();
    let obs = ok(obstruction_cochain(&act, &vol, 3))?;
    ensure(obs.coboundary == Some(false), || format!("g3 report {obs:?}"))?;
    let (k, ss) = killing_form(&LieAlgebra::sl2());
    ensure(ss && k[0][0] == qi(8) && k[1][2] == qi(4), || format!("sl(2) Killing form {k:?}"))?;
    for d in 1..=3 {
        let (k, ss) = killing_form(&LieAlgebra::abelian(d));
        ensure(!ss && k == diag(0, d), || format!("abelian({d}) Killing form {k:?}"))?;
    }
    Ok(())
}

fn comoment_roundtrip() -> Outcome {
    let c2 = chart(2);
    let w2 = form(&c2, 2, &[(&[1, 2], "1")]);
    let act2 = ok(LieAction::new(LieAlgebra::abelian(1), vec![common::mv(&c2, 1, &[(&[2], "1")])]))?;
    let cm2 = ok(comoment_from_potential(&act2, &w2, &form(&c2, 1, &[(&[2], "x1")])))?;
    ensure(ok(comoment_verify(&act2, &w2, &cm2))?.all_zero, || "symplectic comoment residual".into())?;

    let c3 = chart(3);
    let w3 = form(&c3, 3, &[(&[1, 2, 3], "1")]);
    let gens = vec![common::mv(&c3, 1, &[(&[2], "1")]), common::mv(&c3, 1, &[(&[3], "1")])];
    let act3 = ok(LieAction::new(LieAlgebra::abelian(2), gens))?;
    let cm3 = ok(comoment_from_potential(&act3, &w3, &form(&c3, 2, &[(&[2, 3], "x1")])))?;
    ensure(ok(comoment_verify(&act3, &w3, &cm3))?.all_zero, || "volume comoment residual".into())?;

    let mut r = rng(9);
    for (act, w, cm) in [(&act2, &w2, &cm2), (&act3, &w3, &cm3)] {
        let c = w.chart().clone();
        let mut bumped = cm.clone();
        let deg = w.degree() - 2;
        let all: Vec<usize> = (0..c.dim()).collect();
        let mut noise = DiffForm::zero(&c, deg);
        while noise.is_zero() || ext_d(&noise).is_zero() {
            noise = common::rand_form(&mut r, &c, deg, 2);
            if deg == 0 {
                noise = DiffForm::scalar(&c, rand_poly_in(&mut r, &all, 2, 2));
            }
        }
        let v = bumped.maps[0].get_mut(&vec![0]).ok_or("missing f1")?;
        *v = v.add(&noise).unwrap();
        let rep = ok(comoment_verify(act, w, &bumped))?;
        ensure(!rep.all_zero, || format!("perturbation {noise} undetected"))?;
    }
    Ok(())
}

fn locally_conserved(r: &mut ChaCha8Rng, c: &Arc<Chart>) -> DiffForm {
    let mut base = DiffForm::zero(c, 1);
    for i in 0..3 {
        base.add_term(vec![i], rand_poly_in(r, &[0, 2], 2, 3)).unwrap();
    }
    let f = DiffForm::scalar(c, rand_poly_in(r, &[0, 2], 2, 3));
    base.add(&ext_d(&f).scale(&e("x2"))).unwrap()
}

fn conserved_brackets() -> Outcome {
    let mut r = rng(10);
    let c = chart(3);
    let w = form(&c, 3, &[(&[1, 2, 3], "1")]);
    let h = ok(make_observable(&w, &form(&c, 1, &[(&[1], "x3")])))?;
    for case in 0..50 {
        let a = ok(make_observable(&w, &locally_conserved(&mut r, &c)))?;
        let b = ok(make_observable(&w, &locally_conserved(&mut r, &c)))?;
        for o in [&a, &b] {
            let cls = ok(conserved_classify(&h, &o.form))?;
            ensure(cls != Conservation::NotConserved, || format!("case {case}: input {cls:?}"))?;
        }
        let l2 = ok(l_k(&w, &[a, b]))?.form;
        let cls = ok(conserved_classify(&h, &l2))?;
        ensure(cls == Conservation::Strict, || format!("case {case}: l2 {cls:?}"))?;
    }
    Ok(())
}

fn rand_points(r: &mut ChaCha8Rng, n: usize, k: usize) -> Vec<Point> {
    let mut out: Vec<Point> = Vec::new();
    while out.len() < k {
        let p: Point = (0..n)
            .map(|_| GaussQ::new(q(r.gen_range(-6..=6), r.gen_range(1..=4)), q(r.gen_range(-6..=6), r.gen_range(1..=4))))
            .collect();
        if !out.contains(&p) {
            out.push(p);
        }
    }
    out
}

fn mover_end_to_end() -> Outcome {
    let mut r = rng(11);
    for case in 0..20 {
        let n = 2 + case % 2;
        let k = 1 + (case / 2) % 5;
        let src = rand_points(&mut r, n, k);
        let dst = rand_points(&mut r, n, k);
        let f = ok(move_points(&src, &dst, n))?;
        for (s, d) in src.iter().zip(&dst) {
            ensure(&ok(f.apply(s))? == d, || format!("case {case}: point not moved"))?;
        }
        let det = ok(f.jacobian_determinant())?;
        ensure(det.as_constant() == Some(GaussQ::one()), || format!("case {case}: det = {det}"))?;
        let rep = ok(realify_and_check(&f))?;
        ensure(rep.preserves, || format!("case {case}: pullback changed the form ({:?})", rep.step_preserves))?;
    }
    Ok(())
}

fn multiphase() -> Outcome {
    for n in 1..=3 {
        for big_n in 1..=3 {
            let m = ok(multiphase_forms(n, big_n))?;
            let tag = format!("n = {n}, N = {big_n}");
            ensure(m.omega == ext_d(&m.theta).neg(), || format!("{tag}: omega != -d theta"))?;
            ensure(ext_d(&m.omega).is_zero(), || format!("{tag}: omega not closed"))?;
            ensure(ok(nondegenerate(&m.omega, None))?.nondegenerate, || format!("{tag}: degenerate"))?;

            // Free field H = 1/2 sum (p^mu_a)^2 with affine q^a = sum_mu (a + mu + 1) x^mu.
            let mut h = Expr::zero();
            for a in 0..big_n {
                for mu in 0..n {
                    let p = Expr::var(m.p_mu(mu, a));
                    h = &h + &(&p * &p).scale(&q(1, 2));
                }
            }
            let slope = |a: usize, mu: usize| Expr::from_i64((a + mu + 1) as i64);
            let mut comps: Vec<Expr> = (0..big_n)
                .map(|a| (0..n).fold(Expr::zero(), |acc, mu| &acc + &(&slope(a, mu) * &Expr::var(mu))))
                .collect();
            for a in 0..big_n {
                for mu in 0..n {
                    comps.push(-slope(a, mu));
                }
            }
            let sec = |comps: Vec<Expr>| SmoothMap::new(&chart(n), &chart(big_n + n * big_n), comps).unwrap();
            let res = ok(hamilton_volterra_residual(&m, &h, &sec(comps.clone())))?;
            ensure(res.iter().all(Zero::is_zero), || format!("{tag}: free-field residual {res:?}"))?;
            comps[0] = &comps[0] + &e("x1^2");
            let res = ok(hamilton_volterra_residual(&m, &h, &sec(comps)))?;
            ensure(res.iter().any(|x| !x.is_zero()), || format!("{tag}: perturbation not detected"))?;
        }
    }
    Ok(())
}

struct Criterion {
    id: usize,
    name: &'static str,
    budget: Option<Duration>,
    run: fn() -> Outcome,
}

fn main() -> ExitCode {
    let secs = |s: u64| Some(Duration::from_secs(s));
    let criteria = [
        Criterion { id: 1, name: "Hitchin endomorphism of omega^f", budget: secs(1), run: hitchin_matrix },
        Criterion { id: 2, name: "classification trichotomy under GL(6)", budget: secs(30), run: trichotomy },
        Criterion { id: 3, name: "non-flat witness and invariant bivector", budget: secs(5), run: nonflat_witness },
        Criterion { id: 4, name: "flat and non-flat charts coexist", budget: None, run: flat_and_nonflat },
        Criterion { id: 5, name: "non-degeneracy suite", budget: None, run: nondegeneracy },
        Criterion { id: 6, name: "L-infinity relations and Jacobiator", budget: secs(60), run: linfty_relations },
        Criterion { id: 7, name: "volume bracket double sum", budget: None, run: volume_l2 },
        Criterion { id: 8, name: "Lie algebra suite", budget: None, run: lie_suite },
        Criterion { id: 9, name: "comoment round trip", budget: None, run: comoment_roundtrip },
        Criterion { id: 10, name: "brackets of locally conserved are strict", budget: None, run: conserved_brackets },
        Criterion { id: 11, name: "point mover end to end", budget: secs(120), run: mover_end_to_end },
        Criterion { id: 12, name: "multiphase identities", budget: None, run: multiphase },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let took = start.elapsed();
        let outcome = match (outcome, c.budget) {
            (Ok(()), Some(b)) if took > b => Err(format!("took {took:.2?}, budget {b:?}")),
            (o, _) => o,
        };
        match outcome {
            Ok(()) => println!("PASS [{:>2}] {} ({took:.2?})", c.id, c.name),
            Err(msg) => {
                failed += 1;
                println!("FAIL [{:>2}] {} ({took:.2?}): {msg}", c.id, c.name);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
