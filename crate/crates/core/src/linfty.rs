//! The Lie n-algebra of Hamiltonian forms on an n-plectic chart.

use crate::error::{Error, Result};
use crate::exterior::{ext_d, interior, DiffForm, MultiVec};
use crate::hdw::{ham_vector_field, SignConvention};
use crate::scalar::{q, Q};

/// A form of degree at most `n - 1`; top-degree forms carry their
/// Hamiltonian vector field.
#[derive(Clone, Debug, PartialEq)]
pub struct Observable {
    pub form: DiffForm,
    pub ham_field: Option<MultiVec>,
}

impl Observable {
    pub fn is_hamiltonian(&self) -> bool {
        self.ham_field.is_some()
    }
}

fn plectic_n(w: &DiffForm) -> Result<usize> {
    if w.degree() < 2 {
        return Err(Error::DegreeError(format!("a {}-form is not n-plectic for n >= 1", w.degree())));
    }
    Ok(w.degree() - 1)
}

pub fn make_observable(w: &DiffForm, alpha: &DiffForm) -> Result<Observable> {
    let n = plectic_n(w)?;
    alpha.same_chart(w.chart())?;
    if alpha.degree() + 1 > n {
        return Err(Error::DegreeError(format!("observables have degree at most {}", n - 1)));
    }
    let ham_field = if alpha.degree() + 1 == n {
        Some(ham_vector_field(w, alpha, SignConvention::MinusDh)?)
    } else {
        None
    };
    Ok(Observable { form: alpha.clone(), ham_field })
}

/// Value of a bracket; `zero_extended` is set when some argument was not of
/// top degree and the bracket was extended by zero.
#[derive(Clone, Debug, PartialEq)]
pub struct BracketValue {
    pub form: DiffForm,
    pub zero_extended: bool,
}

fn sign_k(k: usize) -> Q {
    // -(-1)^{k(k+1)/2}
    if (k * (k + 1) / 2) % 2 == 0 {
        q(-1, 1)
    } else {
        q(1, 1)
    }
}

/// `l_k(a_1..a_k) = -(-1)^{k(k+1)/2} iota_{X_k} .. iota_{X_1} w` for `k >= 2`.
pub fn l_k(w: &DiffForm, args: &[Observable]) -> Result<BracketValue> {
    let n = plectic_n(w)?;
    let k = args.len();
    if k < 2 || k > n + 1 {
        return Err(Error::DegreeError(format!("l_k needs 2 <= k <= {}, got {k}", n + 1)));
    }
    let out_degree = n + 1 - k;
    let mut acc = w.clone();
    for a in args {
        a.form.same_chart(w.chart())?;
        let Some(x) = &a.ham_field else {
            return Ok(BracketValue { form: DiffForm::zero(w.chart(), out_degree), zero_extended: true });
        };
        acc = interior(x, &acc)?;
    }
    Ok(BracketValue { form: acc.scale_q(&sign_k(k)), zero_extended: false })
}

/// `l_1`: `d` below top degree, zero on Hamiltonian top-degree forms.
pub fn l_1(w: &DiffForm, a: &Observable) -> Result<DiffForm> {
    let n = plectic_n(w)?;
    if a.form.degree() + 1 == n {
        Ok(DiffForm::zero(w.chart(), n))
    } else {
        Ok(ext_d(&a.form))
    }
}

/// Shorthand for `l_2` on top-degree observables, returned as an observable.
pub fn bracket(w: &DiffForm, a: &Observable, b: &Observable) -> Result<Observable> {
    let v = l_k(w, &[a.clone(), b.clone()])?;
    make_observable(w, &v.form)
}

/// `(d l_k)(a_1..a_{k+1}) - l_1(l_{k+1}(a_1..a_{k+1}))` with
/// `(d l_k)(..) = sum_{i<j} (-1)^{i+j} l_k(l_2(a_i, a_j), a_1, .., ^i, .., ^j, ..)`.
pub fn linfty_relation_residual(w: &DiffForm, k: usize, args: &[Observable]) -> Result<DiffForm> {
    let n = plectic_n(w)?;
    if k < 2 || k > n + 1 {
        return Err(Error::DegreeError(format!("relation index k must satisfy 2 <= k <= {}", n + 1)));
    }
    if args.len() != k + 1 {
        return Err(Error::ShapeError(format!("relation for k = {k} takes {} arguments", k + 1)));
    }
    let out_degree = n + 1 - k;
    let mut lhs = DiffForm::zero(w.chart(), out_degree);
    for i in 0..args.len() {
        for j in i + 1..args.len() {
            let b = bracket(w, &args[i], &args[j])?;
            let mut call = vec![b];
            call.extend(args.iter().enumerate().filter(|&(t, _)| t != i && t != j).map(|(_, a)| a.clone()));
            let mut term = l_k(w, &call)?.form;
            // 1-based indices i+1, j+1 give the same parity as i + j.
            if (i + j) % 2 == 1 {
                term = term.neg();
            }
            lhs = lhs.add(&term)?;
        }
    }
    let rhs = if k == n + 1 {
        DiffForm::zero(w.chart(), out_degree)
    } else {
        let top = l_k(w, args)?.form;
        ext_d(&top)
    };
    lhs.sub(&rhs)
}

/// `({a,{b,c}} - {{a,b},c} - {b,{a,c}}) + d(iota_{X_c} iota_{X_b} iota_{X_a} w)`
/// with `{,} = l_2`.
pub fn jacobiator_identity_residual(w: &DiffForm, a: &Observable, b: &Observable, c: &Observable) -> Result<DiffForm> {
    for o in [a, b, c] {
        if !o.is_hamiltonian() {
            return Err(Error::DegreeError("the Jacobiator identity needs Hamiltonian top-degree forms".into()));
        }
    }
    let bc = bracket(w, b, c)?;
    let ab = bracket(w, a, b)?;
    let ac = bracket(w, a, c)?;
    let t1 = bracket(w, a, &bc)?.form;
    let t2 = bracket(w, &ab, c)?.form;
    let t3 = bracket(w, b, &ac)?.form;
    let fields: Vec<&MultiVec> = [a, b, c].iter().map(|o| o.ham_field.as_ref().expect("checked")).collect();
    let mut triple = w.clone();
    for x in fields {
        triple = interior(x, &triple)?;
    }
    t1.sub(&t2)?.sub(&t3)?.add(&ext_d(&triple))
}
