use num_traits::{One, Signed, Zero};

use crate::chart::Chart;
use crate::scalar::{q, qi, Expr, Q};

/// Sign of an expression over a chart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SignInfo {
    Positive,
    Negative,
    Zero,
    /// Two points with different signs.
    NonConstant(Vec<Q>, Vec<Q>),
}

impl SignInfo {
    pub fn symbol(&self) -> &'static str {
        match self {
            SignInfo::Positive => "+",
            SignInfo::Negative => "-",
            SignInfo::Zero => "0",
            SignInfo::NonConstant(..) => "mixed",
        }
    }
}

fn sign_of(x: &Q) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

/// Candidate sample points: the constant point `1`, and for every variable
/// that occurs in `e`, each grid value with the other variables at 1, plus
/// all occurring variables at the same grid value.
pub fn sample_points(e: &Expr, chart: &Chart) -> Vec<Vec<Q>> {
    let n = chart.dim();
    let vars: Vec<usize> = (0..n).filter(|&v| e.depends_on(v)).collect();
    let grid = [qi(1), qi(-1), qi(2), qi(-2), q(1, 2), q(-1, 2), qi(0), qi(3), q(-1, 3), qi(4)];
    let admissible = |v: usize, x: &Q| !chart.is_positive(v) || x.is_positive();
    let mut pts = vec![vec![Q::one(); n]];
    for g in &grid {
        let mut p = vec![Q::one(); n];
        for &v in &vars {
            if admissible(v, g) {
                p[v] = g.clone();
            }
        }
        pts.push(p);
    }
    for &v in &vars {
        for g in &grid {
            if admissible(v, g) {
                let mut p = vec![Q::one(); n];
                p[v] = g.clone();
                pts.push(p);
            }
        }
    }
    pts
}

/// Decide the sign of `e` on `chart`.
///
/// Constants and single monomials in positive variables are decided
/// symbolically; anything else is sampled on a rational grid with exact
/// evaluation (points where evaluation fails are skipped).
pub fn determine_sign(e: &Expr, chart: &Chart) -> SignInfo {
    if e.is_zero() {
        return SignInfo::Zero;
    }
    if let Some(c) = e.as_constant() {
        return if c.is_positive() { SignInfo::Positive } else { SignInfo::Negative };
    }
    if let Some((m, c)) = e.as_scalar().and_then(|s| s.single_term()) {
        if m.iter().all(|&(v, _)| chart.is_positive(v)) {
            return if c.is_positive() { SignInfo::Positive } else { SignInfo::Negative };
        }
    }
    let mut seen: [Option<Vec<Q>>; 3] = [None, None, None];
    for p in sample_points(e, chart) {
        if let Ok(v) = e.eval_exact(&p) {
            let s = (sign_of(&v) + 1) as usize;
            if seen[s].is_none() {
                seen[s] = Some(p);
            }
        }
    }
    let found: Vec<(usize, Vec<Q>)> = seen.into_iter().enumerate().filter_map(|(i, p)| p.map(|p| (i, p))).collect();
    match found.len() {
        0 => SignInfo::Zero,
        1 => match found[0].0 {
            0 => SignInfo::Negative,
            1 => SignInfo::Zero,
            _ => SignInfo::Positive,
        },
        _ => {
            let mut it = found.into_iter();
            let a = it.next().expect("two points").1;
            let b = it.next().expect("two points").1;
            SignInfo::NonConstant(a, b)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::parse_rational;

    #[test]
    fn monomial_on_positive_chart() {
        let c = Chart::new(6).with_positive([1]).unwrap();
        assert_eq!(determine_sign(&parse_rational("24 x2").unwrap(), &c), SignInfo::Positive);
    }

    #[test]
    fn sign_change_found() {
        let c = Chart::new(6);
        match determine_sign(&parse_rational("24 x2").unwrap(), &c) {
            SignInfo::NonConstant(a, b) => assert_ne!(a[1].signum(), b[1].signum()),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn positive_polynomial() {
        let c = Chart::new(2);
        assert_eq!(determine_sign(&parse_rational("1 + x1^2 + x2^2").unwrap(), &c), SignInfo::Positive);
    }
}
