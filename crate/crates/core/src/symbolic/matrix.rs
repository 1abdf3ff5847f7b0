//! Dense matrices of polynomials, the symbolic Laplacian and the Gramian.

use std::fmt;

use nalgebra::DMatrix;
use rayon::prelude::*;

use super::poly::{Polynomial, Var};
use super::SymbolicError;
use crate::graph::SignedNetwork;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Polynomial>,
}

impl SymMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SymMatrix { rows, cols, data: vec![Polynomial::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = SymMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Polynomial::int(1));
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Polynomial>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        SymMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Polynomial {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, p: Polynomial) {
        self.data[r * self.cols + c] = p;
    }

    pub fn row(&self, r: usize) -> Vec<Polynomial> {
        self.data[r * self.cols..(r + 1) * self.cols].to_vec()
    }

    pub fn max_terms(&self) -> usize {
        self.data.iter().map(Polynomial::term_count).max().unwrap_or(0)
    }

    pub fn mul(&self, other: &SymMatrix) -> Result<SymMatrix, SymbolicError> {
        if self.cols != other.rows {
            return Err(SymbolicError::DimensionMismatch {
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        let data = (0..self.rows * other.cols)
            .into_par_iter()
            .map(|k| {
                let (i, j) = (k / other.cols, k % other.cols);
                (0..self.cols)
                    .filter(|&t| !self.get(i, t).is_zero() && !other.get(t, j).is_zero())
                    .fold(Polynomial::zero(), |acc, t| &acc + &(self.get(i, t) * other.get(t, j)))
            })
            .collect();
        Ok(SymMatrix { rows: self.rows, cols: other.cols, data })
    }

    pub fn eval(&self, values: &[f64]) -> DMatrix<f64> {
        DMatrix::from_fn(self.rows, self.cols, |r, c| self.get(r, c).eval(values))
    }

    pub fn render(&self, name: &dyn Fn(Var) -> String) -> String {
        let mut out = String::new();
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).render(name)).collect();
            out.push_str(&format!("[{}]\n", row.join(", ")));
        }
        out
    }
}

impl fmt::Display for SymMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&|v| format!("x{v}")))
    }
}

/// One symbol per state edge, in the network's edge order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolTable {
    pub edges: Vec<(u32, u32)>,
}

impl SymbolTable {
    pub fn name(&self, v: Var) -> String {
        let (a, b) = self.edges[v as usize];
        format!("a_{a}_{b}")
    }

    pub fn var_of(&self, a: u32, b: u32) -> Option<Var> {
        let key = (a.min(b), a.max(b));
        self.edges.iter().position(|&e| e == key).map(|p| p as Var)
    }

    pub fn render(&self, p: &Polynomial) -> String {
        p.render(&|v| self.name(v))
    }
}

/// Laplacian over edge symbols: off-diagonal `sign * x`, diagonal the
/// negated row sum.
pub fn build_symbolic_laplacian(net: &SignedNetwork) -> (SymMatrix, SymbolTable) {
    let n = net.state_count();
    let mut l = SymMatrix::zeros(n, n);
    let mut table = SymbolTable { edges: vec![] };
    for (v, (i, j, s)) in net.edges_idx().enumerate() {
        table.edges.push((net.label_of(i), net.label_of(j)));
        let x = Polynomial::var(v as Var);
        let e = if s == crate::graph::Sign::Positive { x } else { -x };
        l.set(i, j, e.clone());
        l.set(j, i, e.clone());
        for k in [i, j] {
            let d = l.get(k, k) - &e;
            l.set(k, k, d);
        }
    }
    (l, table)
}

/// Input matrix with the input signs as constant entries.
pub fn build_symbolic_input(net: &SignedNetwork) -> SymMatrix {
    let mut b = SymMatrix::zeros(net.state_count(), net.input_count());
    for (c, e) in net.input_edges().iter().enumerate() {
        let r = net.index_of(e.target).expect("validated target");
        b.set(r, c, Polynomial::int(e.sign.as_f64() as i64));
    }
    b
}

pub const DEFAULT_TERM_CAP: usize = 1_000_000;

pub fn gramian(l: &SymMatrix, b: &SymMatrix) -> Result<SymMatrix, SymbolicError> {
    gramian_with_cap(l, b, DEFAULT_TERM_CAP)
}

/// `[B, LB, ..., L^(n-1) B]`, refusing once an entry exceeds `cap` terms.
pub fn gramian_with_cap(l: &SymMatrix, b: &SymMatrix, cap: usize) -> Result<SymMatrix, SymbolicError> {
    let n = l.rows();
    if l.cols() != n || b.rows() != n {
        return Err(SymbolicError::DimensionMismatch { left: (l.rows(), l.cols()), right: (b.rows(), b.cols()) });
    }
    let m = b.cols();
    let mut out = SymMatrix::zeros(n, n * m);
    let mut block = b.clone();
    for k in 0..n {
        if k > 0 {
            block = l.mul(&block)?;
            let worst = block.max_terms();
            if worst > cap {
                return Err(SymbolicError::PolynomialBudgetExceeded { terms: worst, cap });
            }
        }
        for r in 0..n {
            for c in 0..m {
                out.set(r, k * m + c, block.get(r, c).clone());
            }
        }
    }
    Ok(out)
}
