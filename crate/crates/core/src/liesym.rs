//! Lie algebras, symmetry actions, comoments and conserved quantities.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::chart::Chart;
use crate::error::{Error, Result};
use crate::exterior::{ext_d, interior, lie_bracket, lie_derivative, poincare_homotopy, sort_sign, DiffForm, MultiVec};
use crate::linalg::{self, Matrix};
use crate::linfty::{l_k, Observable};
use crate::scalar::{q, qi, Expr, Q};

/// Structure constants `c[i][j][k]` with `[e_i, e_j] = sum_k c[i][j][k] e_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct LieAlgebra {
    c: Vec<Vec<Vec<Q>>>,
}

impl LieAlgebra {
    pub fn new(c: Vec<Vec<Vec<Q>>>) -> Result<Self> {
        let d = c.len();
        if c.iter().any(|r| r.len() != d || r.iter().any(|s| s.len() != d)) {
            return Err(Error::ShapeError(format!("structure constants must be {d}x{d}x{d}")));
        }
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    if c[i][j][k] != -c[j][i][k].clone() {
                        return Err(Error::JacobiViolation(format!("antisymmetry at ({}, {}, {})", i + 1, j + 1, k + 1)));
                    }
                }
            }
        }
        let g = LieAlgebra { c };
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let (a, b, cc) = (g.basis(i), g.basis(j), g.basis(k));
                    let t1 = g.bracket(&a, &g.bracket(&b, &cc));
                    let t2 = g.bracket(&b, &g.bracket(&cc, &a));
                    let t3 = g.bracket(&cc, &g.bracket(&a, &b));
                    if (0..d).any(|l| !(&t1[l] + &t2[l] + &t3[l]).is_zero()) {
                        return Err(Error::JacobiViolation(format!("Jacobi identity at ({}, {}, {})", i + 1, j + 1, k + 1)));
                    }
                }
            }
        }
        Ok(g)
    }

    /// Build from the nonzero brackets `(i, j, [(k, c)])` with `i < j`, 0-based.
    pub fn from_brackets(dim: usize, brackets: &[(usize, usize, Vec<(usize, Q)>)]) -> Result<Self> {
        let mut c = vec![vec![vec![Q::zero(); dim]; dim]; dim];
        for (i, j, terms) in brackets {
            if *i >= dim || *j >= dim || terms.iter().any(|(k, _)| *k >= dim) {
                return Err(Error::ShapeError("bracket index out of range".into()));
            }
            for (k, v) in terms {
                c[*i][*j][*k] += v;
                c[*j][*i][*k] -= v;
            }
        }
        Self::new(c)
    }

    /// `[e_i, e_j] = eps_ijk e_k`.
    pub fn so3() -> Self {
        let one = qi(1);
        Self::from_brackets(
            3,
            &[(0, 1, vec![(2, one.clone())]), (1, 2, vec![(0, one.clone())]), (2, 0, vec![(1, one)])],
        )
        .expect("so(3)")
    }

    /// Basis `(h, e, f)` with `[h,e] = 2e`, `[h,f] = -2f`, `[e,f] = h`.
    pub fn sl2() -> Self {
        Self::from_brackets(3, &[(0, 1, vec![(1, qi(2))]), (0, 2, vec![(2, qi(-2))]), (1, 2, vec![(0, qi(1))])])
            .expect("sl(2)")
    }

    pub fn abelian(dim: usize) -> Self {
        Self::new(vec![vec![vec![Q::zero(); dim]; dim]; dim]).expect("abelian")
    }

    /// `[e_1, e_2] = e_3`.
    pub fn heisenberg() -> Self {
        Self::from_brackets(3, &[(0, 1, vec![(2, qi(1))])]).expect("heisenberg")
    }

    pub fn dim(&self) -> usize {
        self.c.len()
    }

    pub fn structure_constants(&self) -> &[Vec<Vec<Q>>] {
        &self.c
    }

    pub fn basis(&self, i: usize) -> Vec<Q> {
        (0..self.dim()).map(|k| if k == i { Q::one() } else { Q::zero() }).collect()
    }

    pub fn bracket(&self, x: &[Q], y: &[Q]) -> Vec<Q> {
        let d = self.dim();
        let mut out = vec![Q::zero(); d];
        for i in 0..d {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..d {
                if y[j].is_zero() {
                    continue;
                }
                let s = &x[i] * &y[j];
                for (k, o) in out.iter_mut().enumerate() {
                    if !self.c[i][j][k].is_zero() {
                        *o += &s * &self.c[i][j][k];
                    }
                }
            }
        }
        out
    }

    /// Matrix of `ad_x`; column `j` is `[x, e_j]`.
    pub fn ad(&self, x: &[Q]) -> Matrix<Q> {
        let cols: Vec<Vec<Q>> = (0..self.dim()).map(|j| self.bracket(x, &self.basis(j))).collect();
        linalg::transpose(&cols)
    }

    /// Structure constants in the basis `b_i = sum_j p[j][i] e_j`.
    pub fn change_basis(&self, p: &Matrix<Q>) -> Result<Self> {
        let inv = linalg::inverse(p).ok_or_else(|| Error::ShapeError("singular change of basis".into()))?;
        let d = self.dim();
        let cols: Vec<Vec<Q>> = (0..d).map(|i| (0..d).map(|j| p[j][i].clone()).collect()).collect();
        let mut c = vec![vec![vec![Q::zero(); d]; d]; d];
        for i in 0..d {
            for j in 0..d {
                c[i][j] = linalg::mat_vec(&inv, &self.bracket(&cols[i], &cols[j]));
            }
        }
        Self::new(c)
    }
}

/// `K(x, y) = trace(ad_x ad_y)` and whether it is non-degenerate.
pub fn killing_form(g: &LieAlgebra) -> (Matrix<Q>, bool) {
    let d = g.dim();
    let ads: Vec<Matrix<Q>> = (0..d).map(|i| g.ad(&g.basis(i))).collect();
    let k: Matrix<Q> = (0..d).map(|i| (0..d).map(|j| linalg::trace(&linalg::mat_mul(&ads[i], &ads[j]))).collect()).collect();
    let semisimple = d > 0 && !linalg::det(&k).is_zero();
    (k, semisimple)
}

/// The constant 3-form `(x, y, z) -> K(x, [y, z])` on `R^d`.
pub fn canonical_three_form(g: &LieAlgebra) -> DiffForm {
    let d = g.dim();
    let (k, _) = killing_form(g);
    let chart = Chart::new(d).shared();
    let terms = wedge_basis(d, 3).into_iter().filter_map(|s| {
        let br = g.bracket(&g.basis(s[1]), &g.basis(s[2]));
        let v: Q = (0..d).map(|l| &k[s[0]][l] * &br[l]).sum();
        (!v.is_zero()).then(|| (s, Expr::from_q(v)))
    });
    DiffForm::from_terms(&chart, 3, terms).expect("valid indices")
}

/// Sorted `k`-subsets of `0..d`, the basis of `Lambda^k g`.
pub fn wedge_basis(d: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, d: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..d {
            cur.push(i);
            go(i + 1, d, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, d, k, &mut Vec::new(), &mut out);
    out
}

fn omit2(s: &[usize], i: usize, j: usize) -> Vec<usize> {
    s.iter().enumerate().filter(|&(t, _)| t != i && t != j).map(|(_, &x)| x).collect()
}

/// Matrix of `delta_k : Lambda^k g -> Lambda^{k-1} g` in the wedge bases.
pub fn delta_matrix(g: &LieAlgebra, k: usize) -> Matrix<Q> {
    let d = g.dim();
    let rows = wedge_basis(d, k.saturating_sub(1));
    let cols = wedge_basis(d, k);
    let row_of: BTreeMap<Vec<usize>, usize> = rows.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
    let mut m = vec![vec![Q::zero(); cols.len()]; rows.len()];
    if k < 2 {
        return m;
    }
    for (c, s) in cols.iter().enumerate() {
        for i in 0..k {
            for j in i + 1..k {
                let br = g.bracket(&g.basis(s[i]), &g.basis(s[j]));
                let rest = omit2(s, i, j);
                let parity = (i + j) % 2 == 1;
                for (l, v) in br.iter().enumerate() {
                    if v.is_zero() {
                        continue;
                    }
                    let mut idx = vec![l];
                    idx.extend(rest.iter().copied());
                    let Some(neg) = sort_sign(&mut idx) else { continue };
                    let val = if neg != parity { -v.clone() } else { v.clone() };
                    m[row_of[&idx]][c] += val;
                }
            }
        }
    }
    m
}

/// Matrix of the cochain differential `C^k -> C^{k+1}` (dual of `delta_{k+1}`).
pub fn ce_differential(g: &LieAlgebra, k: usize) -> Matrix<Q> {
    linalg::transpose(&delta_matrix(g, k + 1))
}

/// A `(k-1)`-cochain `b` with `d b = c`, if one exists. Cochains are
/// coefficient vectors over `wedge_basis(dim, k)`.
pub fn coboundary_test(g: &LieAlgebra, k: usize, c: &[Q]) -> Option<Vec<Q>> {
    if k == 0 {
        return c.iter().all(Zero::is_zero).then(Vec::new);
    }
    let m = ce_differential(g, k - 1);
    if m.is_empty() || m[0].is_empty() {
        return c.iter().all(Zero::is_zero).then(Vec::new);
    }
    linalg::solve(&m, c)
}

pub fn is_cocycle(g: &LieAlgebra, k: usize, c: &[Q]) -> bool {
    let m = ce_differential(g, k);
    m.is_empty() || linalg::mat_vec(&m, c).iter().all(Zero::is_zero)
}

/// A Lie algebra acting by vector fields `zeta(e_i)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LieAction {
    pub algebra: LieAlgebra,
    pub generators: Vec<MultiVec>,
}

impl LieAction {
    /// Checks `[zeta(e_i), zeta(e_j)] = sum_k c_ij^k zeta(e_k)`.
    pub fn new(algebra: LieAlgebra, generators: Vec<MultiVec>) -> Result<Self> {
        let d = algebra.dim();
        if generators.len() != d {
            return Err(Error::ShapeError(format!("{} generators for a {d}-dimensional algebra", generators.len())));
        }
        let chart = generators.first().map(|x| x.chart().clone());
        for x in &generators {
            if x.degree() != 1 {
                return Err(Error::DegreeError("generators must be vector fields".into()));
            }
            x.same_chart(chart.as_ref().expect("nonempty"))?;
        }
        let act = LieAction { algebra, generators };
        for i in 0..d {
            for j in i + 1..d {
                let lhs = lie_bracket(&act.generators[i], &act.generators[j])?;
                let rhs = act.field(&act.algebra.bracket(&act.algebra.basis(i), &act.algebra.basis(j)))?;
                if lhs != rhs {
                    return Err(Error::NotHomomorphism(format!("bracket of generators {} and {}", i + 1, j + 1)));
                }
            }
        }
        Ok(act)
    }

    pub fn chart(&self) -> Option<&Arc<Chart>> {
        self.generators.first().map(|x| x.chart())
    }

    /// `zeta(x)` for a coefficient vector `x`.
    pub fn field(&self, x: &[Q]) -> Result<MultiVec> {
        let chart = self.chart().ok_or_else(|| Error::ShapeError("empty action".into()))?;
        let mut out = MultiVec::zero(chart, 1);
        for (g, c) in self.generators.iter().zip(x) {
            if !c.is_zero() {
                out = out.add(&g.scale_q(c))?;
            }
        }
        Ok(out)
    }

    /// Whether `L_{zeta(e_i)} a = 0` for every generator.
    pub fn preserves(&self, a: &DiffForm) -> Result<bool> {
        for x in &self.generators {
            if !lie_derivative(x, a)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn contract_chain(&self, s: &[usize], a: &DiffForm) -> Result<DiffForm> {
        let mut acc = a.clone();
        for &i in s {
            acc = interior(&self.generators[i], &acc)?;
        }
        Ok(acc)
    }
}

/// Right-invariant counterpart of [`so3_gibbs_action`]'s generators;
/// these commute with the action and are useful for invariant potentials.
pub fn so3_gibbs_right_field(i: usize) -> MultiVec {
    gibbs_field(i, false)
}

fn gibbs_field(i: usize, left: bool) -> MultiVec {
    let chart = Chart::new(3).shared();
    let g: Vec<Expr> = (0..3).map(Expr::var).collect();
    let half = Expr::from_q(q(1, 2));
    let comps = (0..3)
        .map(|k| {
            // g x e_i has component eps_{k,l,i} g_l
            let mut cross = Expr::zero();
            for l in 0..3 {
                let eps = levi_civita(k, l, i);
                if eps != 0 {
                    cross = &cross + &g[l].scale(&qi(eps));
                }
            }
            if !left {
                cross = -cross;
            }
            let delta = if k == i { Expr::one() } else { Expr::zero() };
            &(&(&delta + &cross) + &(&g[i] * &g[k])) * &half
        })
        .collect();
    MultiVec::vector(&chart, comps).expect("dimension 3")
}

fn levi_civita(a: usize, b: usize, c: usize) -> i64 {
    match (a, b, c) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1,
        _ => 0,
    }
}

/// `so(3)` acting on the rotation group in Gibbs-vector coordinates by
/// left-invariant fields, together with the invariant 3-form normalized so
/// that it restricts to the canonical form at the identity.
pub fn so3_gibbs_action() -> (LieAction, DiffForm) {
    let gens = (0..3).map(|i| gibbs_field(i, true)).collect();
    let act = LieAction::new(LieAlgebra::so3(), gens).expect("left-invariant fields form a homomorphism");
    let chart = act.chart().expect("nonempty").clone();
    let r2 = crate::scalar::parse_rational("1 + x1^2 + x2^2 + x3^2").expect("valid");
    let coeff = Expr::from_i64(-16).checked_div(&(&r2 * &r2)).expect("nonzero");
    let w = DiffForm::from_terms(&chart, 3, [(vec![0, 1, 2], coeff)]).expect("valid");
    (act, w)
}

/// Values of the obstruction cochain `(xi_1..xi_i) -> iota_{zeta(xi_i)} .. iota_{zeta(xi_1)} w`.
#[derive(Clone, Debug, PartialEq)]
pub struct ObstructionReport {
    pub i: usize,
    pub values: BTreeMap<Vec<usize>, DiffForm>,
    /// The cochain as rationals when every value is a constant function.
    pub constant_cochain: Option<Vec<Q>>,
    /// Whether the constant cochain is a CE coboundary.
    pub coboundary: Option<bool>,
    /// Whether every value is certified exact by the homotopy operator.
    pub exact: Option<bool>,
    /// Whether the class is certified to vanish (`None`: undecided).
    pub vanishes: Option<bool>,
}

pub fn obstruction_cochain(act: &LieAction, w: &DiffForm, i: usize) -> Result<ObstructionReport> {
    let chart = act.chart().ok_or_else(|| Error::ShapeError("empty action".into()))?;
    w.same_chart(chart)?;
    let n = w.degree().checked_sub(1).ok_or_else(|| Error::DegreeError("w must have positive degree".into()))?;
    if i == 0 || i > n + 1 {
        return Err(Error::DegreeError(format!("obstruction index must lie in 1..={}", n + 1)));
    }
    if !act.preserves(w)? {
        return Err(Error::NotSymmetryAction);
    }
    let d = act.algebra.dim();
    let basis = wedge_basis(d, i);
    let mut values = BTreeMap::new();
    for s in &basis {
        values.insert(s.clone(), act.contract_chain(s, w)?);
    }
    let mut report = ObstructionReport { i, values, constant_cochain: None, coboundary: None, exact: None, vanishes: None };
    if i == n + 1 {
        let consts: Option<Vec<Q>> = basis.iter().map(|s| report.values[s].get(&[]).as_constant()).collect();
        if let Some(c) = consts {
            let cob = coboundary_test(&act.algebra, i, &c).is_some();
            report.coboundary = Some(cob);
            report.vanishes = Some(cob);
            report.constant_cochain = Some(c);
        }
        report.exact = Some(report.values.values().all(DiffForm::is_zero));
    } else {
        let mut all_exact = Some(true);
        for v in report.values.values() {
            match exact_certificate(v) {
                Ok(true) => {}
                Ok(false) => all_exact = Some(false),
                Err(_) => {
                    all_exact = None;
                    break;
                }
            }
        }
        report.exact = all_exact;
        if all_exact == Some(true) {
            report.vanishes = Some(true);
        }
    }
    Ok(report)
}

/// `Ok(true)` when `a = d(h a)` for the homotopy operator `h`.
fn exact_certificate(a: &DiffForm) -> Result<bool> {
    if a.is_zero() {
        return Ok(true);
    }
    if a.degree() == 0 {
        return Ok(false);
    }
    let h = poincare_homotopy(a)?;
    Ok(ext_d(&h) == *a)
}

/// Alternating maps `f_k : Lambda^k g -> Omega^{n-k}`, `k = 1..n`, stored by
/// their values on sorted basis tuples.
#[derive(Clone, Debug, PartialEq)]
pub struct Comoment {
    pub n: usize,
    pub maps: Vec<BTreeMap<Vec<usize>, DiffForm>>,
}

impl Comoment {
    /// `f_k` on the basis tuple `s` (any order; sign applied).
    pub fn value(&self, k: usize, s: &[usize]) -> Option<DiffForm> {
        let mut idx = s.to_vec();
        let neg = sort_sign(&mut idx)?;
        let v = self.maps.get(k - 1)?.get(&idx)?.clone();
        Some(if neg { v.neg() } else { v })
    }
}

fn comoment_sign(k: usize) -> Q {
    // (-1)^k (-1)^{k(k+1)/2}
    if (k + k * (k + 1) / 2) % 2 == 0 {
        Q::one()
    } else {
        -Q::one()
    }
}

/// `f_k(xi_1..xi_k) = (-1)^k (-1)^{k(k+1)/2} iota_{zeta(xi_k)} .. iota_{zeta(xi_1)} eta`
/// for an invariant potential `d eta = w`.
pub fn comoment_from_potential(act: &LieAction, w: &DiffForm, eta: &DiffForm) -> Result<Comoment> {
    let chart = act.chart().ok_or_else(|| Error::ShapeError("empty action".into()))?;
    w.same_chart(chart)?;
    eta.same_chart(chart)?;
    if ext_d(eta) != *w {
        return Err(Error::NotPotential);
    }
    if !act.preserves(eta)? {
        return Err(Error::NotInvariantPotential);
    }
    let n = w.degree() - 1;
    let d = act.algebra.dim();
    let mut maps = Vec::with_capacity(n);
    for k in 1..=n {
        let mut m = BTreeMap::new();
        for s in wedge_basis(d, k) {
            m.insert(s.clone(), act.contract_chain(&s, eta)?.scale_q(&comoment_sign(k)));
        }
        maps.push(m);
    }
    Ok(Comoment { n, maps })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComomentReport {
    /// `d f_1(e_i) + iota_{zeta(e_i)} w` per basis element.
    pub lifting: Vec<DiffForm>,
    /// For `i = 1..n`: `(d f_i + l_1 f_{i+1} + f_1^* l_{i+1})` on each sorted basis `(i+1)`-tuple.
    pub relations: Vec<BTreeMap<Vec<usize>, DiffForm>>,
    pub all_zero: bool,
    pub note: Option<String>,
}

/// `f_k` extended multilinearly to arbitrary arguments.
fn eval_alternating(cm: &Comoment, k: usize, args: &[Vec<Q>], chart: &Arc<Chart>) -> Result<DiffForm> {
    let d = args.first().map_or(0, Vec::len);
    let deg = cm.n - k;
    let mut out = DiffForm::zero(chart, deg);
    for s in wedge_basis(d, k) {
        let m: Matrix<Q> = args.iter().map(|a| s.iter().map(|&j| a[j].clone()).collect()).collect();
        let det = linalg::det(&m);
        if det.is_zero() {
            continue;
        }
        if let Some(v) = cm.value(k, &s) {
            out = out.add(&v.scale_q(&det))?;
        }
    }
    Ok(out)
}

pub fn comoment_verify(act: &LieAction, w: &DiffForm, cm: &Comoment) -> Result<ComomentReport> {
    let chart = act.chart().ok_or_else(|| Error::ShapeError("empty action".into()))?.clone();
    let g = &act.algebra;
    let d = g.dim();
    let n = cm.n;
    if w.degree() != n + 1 || cm.maps.len() != n {
        return Err(Error::DegreeError("comoment does not match the form degree".into()));
    }
    let mut lifting = Vec::with_capacity(d);
    for i in 0..d {
        let f1 = cm.value(1, &[i]).unwrap_or_else(|| DiffForm::zero(&chart, n - 1));
        lifting.push(ext_d(&f1).add(&interior(&act.generators[i], w)?)?);
    }
    let observables: Vec<Observable> = (0..d)
        .map(|i| Observable {
            form: cm.value(1, &[i]).unwrap_or_else(|| DiffForm::zero(&chart, n - 1)),
            ham_field: Some(act.generators[i].clone()),
        })
        .collect();
    let mut relations = Vec::with_capacity(n);
    for i in 1..=n {
        let mut m = BTreeMap::new();
        for s in wedge_basis(d, i + 1) {
            let deg = n - i;
            let mut acc = DiffForm::zero(&chart, deg);
            for a in 0..s.len() {
                for b in a + 1..s.len() {
                    let br = g.bracket(&g.basis(s[a]), &g.basis(s[b]));
                    let mut args = vec![br];
                    args.extend(omit2(&s, a, b).into_iter().map(|t| g.basis(t)));
                    let mut term = eval_alternating(cm, i, &args, &chart)?;
                    if (a + b) % 2 == 1 {
                        term = term.neg();
                    }
                    acc = acc.add(&term)?;
                }
            }
            if i < n {
                if let Some(next) = cm.value(i + 1, &s) {
                    acc = acc.add(&ext_d(&next))?;
                }
            }
            let args: Vec<Observable> = s.iter().map(|&t| observables[t].clone()).collect();
            acc = acc.add(&l_k(w, &args)?.form)?;
            m.insert(s, acc);
        }
        relations.push(m);
    }
    let all_zero = lifting.iter().all(DiffForm::is_zero) && relations.iter().all(|m| m.values().all(DiffForm::is_zero));
    let note = (all_zero && n >= 2)
        .then(|| "f_k for k >= 2 is only determined up to terms the relations do not see (e.g. closed additions)".to_string());
    Ok(ComomentReport { lifting, relations, all_zero, note })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Conservation {
    Strict,
    Conserved,
    LocallyConserved,
    NotConserved,
    Undetermined,
}

impl Conservation {
    pub fn name(self) -> &'static str {
        match self {
            Conservation::Strict => "Strict",
            Conservation::Conserved => "Conserved",
            Conservation::LocallyConserved => "LocallyConserved",
            Conservation::NotConserved => "None",
            Conservation::Undetermined => "Undetermined",
        }
    }
}

/// Classify `alpha` by `L_{X_H} alpha`: zero, exact, closed or neither.
pub fn conserved_classify(h: &Observable, alpha: &DiffForm) -> Result<Conservation> {
    let x = h.ham_field.as_ref().ok_or_else(|| Error::DegreeError("H must be a Hamiltonian form".into()))?;
    let l = lie_derivative(x, alpha)?;
    if l.is_zero() {
        return Ok(Conservation::Strict);
    }
    if !ext_d(&l).is_zero() {
        return Ok(Conservation::NotConserved);
    }
    match exact_certificate(&l) {
        Ok(true) => Ok(Conservation::Conserved),
        Ok(false) => Ok(Conservation::LocallyConserved),
        Err(Error::HomotopyPole { .. }) | Err(Error::NotLaurent(_)) => Ok(Conservation::Undetermined),
        Err(e) => Err(e),
    }
}
