use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::chart::Chart;
use crate::error::{Error, Result};
use crate::exterior::MultiVec;
use crate::linalg::{self, Matrix};
use crate::scalar::{Expr, Q};

/// An endomorphism field of the tangent bundle; column `j` is `J(d/dx_j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct EndField {
    chart: Arc<Chart>,
    matrix: Matrix<Expr>,
}

impl EndField {
    pub fn new(chart: &Arc<Chart>, matrix: Matrix<Expr>) -> Result<Self> {
        let n = chart.dim();
        if matrix.len() != n || matrix.iter().any(|r| r.len() != n) {
            return Err(Error::ShapeError(format!("endomorphism must be {n}x{n}")));
        }
        Ok(EndField { chart: chart.clone(), matrix })
    }

    pub fn from_columns(chart: &Arc<Chart>, cols: &[MultiVec]) -> Result<Self> {
        let comps: Vec<Vec<Expr>> = cols.iter().map(MultiVec::components).collect::<Result<_>>()?;
        if comps.len() != chart.dim() {
            return Err(Error::ShapeError(format!("{} columns for dimension {}", comps.len(), chart.dim())));
        }
        Self::new(chart, linalg::transpose(&comps))
    }

    pub fn identity(chart: &Arc<Chart>) -> Self {
        EndField { chart: chart.clone(), matrix: linalg::identity(chart.dim()) }
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn matrix(&self) -> &Matrix<Expr> {
        &self.matrix
    }

    pub fn entry(&self, i: usize, j: usize) -> &Expr {
        &self.matrix[i][j]
    }

    pub fn column(&self, j: usize) -> MultiVec {
        MultiVec::vector(&self.chart, self.matrix.iter().map(|r| r[j].clone()).collect()).expect("square matrix")
    }

    pub fn apply(&self, v: &MultiVec) -> Result<MultiVec> {
        v.same_chart(&self.chart)?;
        MultiVec::vector(&self.chart, linalg::mat_vec(&self.matrix, &v.components()?))
    }

    /// `self` after `other`.
    pub fn compose(&self, other: &EndField) -> Result<EndField> {
        if !self.chart.compatible(&other.chart) {
            return Err(Error::ChartMismatch);
        }
        Ok(EndField { chart: self.chart.clone(), matrix: linalg::mat_mul(&self.matrix, &other.matrix) })
    }

    pub fn square(&self) -> EndField {
        self.compose(self).expect("same chart")
    }

    pub fn trace(&self) -> Expr {
        linalg::trace(&self.matrix)
    }

    pub fn scale(&self, f: &Expr) -> EndField {
        EndField {
            chart: self.chart.clone(),
            matrix: self.matrix.iter().map(|r| r.iter().map(|x| x * f).collect()).collect(),
        }
    }

    pub fn neg(&self) -> EndField {
        self.scale(&-Expr::one())
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.iter().flatten().all(Zero::is_zero)
    }

    /// `self = c * I` for some expression `c`.
    pub fn as_scalar_multiple(&self) -> Option<Expr> {
        let n = self.matrix.len();
        let c = self.matrix.first()?.first()?.clone();
        for i in 0..n {
            for j in 0..n {
                let want = if i == j { &c } else { &Expr::zero() };
                if &self.matrix[i][j] != want {
                    return None;
                }
            }
        }
        Some(c)
    }

    pub fn eval_at(&self, p: &[Q]) -> Result<EndField> {
        let matrix = self
            .matrix
            .iter()
            .map(|r| r.iter().map(|x| x.eval_exact(p).map(Expr::from_q)).collect::<Result<_>>())
            .collect::<Result<_>>()?;
        Ok(EndField { chart: self.chart.clone(), matrix })
    }
}

impl fmt::Display for EndField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.matrix {
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}
