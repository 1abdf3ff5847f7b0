//! Exact Gramian over edge-weight symbols and a conservative rank.
//!
//! Elimination is fraction-free; rows changed by an elimination step are
//! divided by their common monomial and rational content. A candidate pivot
//! with two or more terms is treated as possibly zero: it is logged (with its
//! own content stripped), set to zero and skipped. The resulting rank
//! is a lower bound on the rank at any positive weight assignment.

pub mod matrix;
pub mod poly;

use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

pub use matrix::{build_symbolic_input, build_symbolic_laplacian, gramian, gramian_with_cap, SymMatrix, SymbolTable, DEFAULT_TERM_CAP};
pub use poly::{Monomial, Polynomial, Var};

use crate::graph::SignedNetwork;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymbolicError {
    #[error("dimension mismatch: {left:?} against {right:?}")]
    DimensionMismatch { left: (usize, usize), right: (usize, usize) },
    #[error("a polynomial reached {terms} terms, cap is {cap}")]
    PolynomialBudgetExceeded { terms: usize, cap: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PivotAction {
    Used,
    ZeroedByCondition1,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PivotEvent {
    /// 1-based position in the working matrix.
    pub row: usize,
    pub col: usize,
    /// The pivot entry; zeroed candidates are shown in primitive form.
    pub pivot: Polynomial,
    pub action: PivotAction,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionReport {
    pub rank: usize,
    pub pivot_log: Vec<PivotEvent>,
    pub rref: SymMatrix,
}

impl ReductionReport {
    /// One line per pivot event: `step <k>: pivot (r,c) = <poly> [used|zeroed]`.
    pub fn audit(&self, table: &SymbolTable) -> String {
        let mut out = String::new();
        for (k, ev) in self.pivot_log.iter().enumerate() {
            let tag = match ev.action {
                PivotAction::Used => "used",
                PivotAction::ZeroedByCondition1 => "zeroed",
            };
            let _ = writeln!(out, "step {}: pivot ({},{}) = {} [{tag}]", k + 1, ev.row, ev.col, table.render(&ev.pivot));
        }
        out
    }

    pub fn zeroed(&self) -> impl Iterator<Item = &PivotEvent> {
        self.pivot_log.iter().filter(|e| e.action == PivotAction::ZeroedByCondition1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymbolicOptions {
    /// Accept multi-term pivots whose coefficients all share one sign.
    pub sign_definite_pivots: bool,
    pub term_cap: usize,
}

impl Default for SymbolicOptions {
    fn default() -> Self {
        SymbolicOptions { sign_definite_pivots: false, term_cap: DEFAULT_TERM_CAP }
    }
}

pub fn rank_with_condition1(c: &SymMatrix) -> Result<ReductionReport, SymbolicError> {
    rank_with_options(c, &SymbolicOptions::default())
}

/// Divide a row by the common monomial and rational content of its entries
/// and make the first nonzero entry's leading coefficient positive.
fn normalize_row(row: &mut [Polynomial]) {
    let nonzero: Vec<&Polynomial> = row.iter().filter(|p| !p.is_zero()).collect();
    if nonzero.is_empty() {
        return;
    }
    let mono = nonzero.iter().skip(1).fold(nonzero[0].monomial_content(), |g, p| g.gcd(&p.monomial_content()));
    let coeffs: Vec<_> = nonzero.iter().flat_map(|p| p.terms().map(|(_, c)| c.clone())).collect();
    let mut content = poly::rational_content(coeffs.iter());
    if nonzero[0].leading_coefficient().is_some_and(num::Signed::is_negative) {
        content = -content;
    }
    let inv = num::BigRational::from_integer(1.into()) / content;
    for p in row.iter_mut() {
        if !p.is_zero() {
            *p = p.div_monomial(&mono).scale(&inv);
        }
    }
}

pub fn rank_with_options(c: &SymMatrix, opts: &SymbolicOptions) -> Result<ReductionReport, SymbolicError> {
    let (nr, nc) = (c.rows(), c.cols());
    let mut rows: Vec<Vec<Polynomial>> = (0..nr).map(|r| c.row(r)).collect();
    let mut log = vec![];
    let mut rank = 0;
    for col in 0..nc {
        if rank == nr {
            break;
        }
        let usable = |p: &Polynomial| p.term_count() == 1 || (opts.sign_definite_pivots && p.is_sign_definite());
        let best = (rank..nr)
            .filter(|&r| !rows[r][col].is_zero())
            .min_by_key(|&r| (!usable(&rows[r][col]), rows[r][col].term_count(), r));
        let Some(best) = best else { continue };
        if !usable(&rows[best][col]) {
            for (r, row) in rows.iter_mut().enumerate().skip(rank) {
                if !row[col].is_zero() {
                    log.push(PivotEvent {
                        row: r + 1,
                        col: col + 1,
                        pivot: row[col].primitive(),
                        action: PivotAction::ZeroedByCondition1,
                    });
                    row[col] = Polynomial::zero();
                }
            }
            continue;
        }
        rows.swap(rank, best);
        let p = rows[rank][col].clone();
        log.push(PivotEvent { row: rank + 1, col: col + 1, pivot: p.clone(), action: PivotAction::Used });
        let pivot_row = rows[rank].clone();
        for row in rows.iter_mut().skip(rank + 1) {
            let e = row[col].clone();
            if e.is_zero() {
                continue;
            }
            for k in col..nc {
                let v = &(&p * &row[k]) - &(&e * &pivot_row[k]);
                if v.term_count() > opts.term_cap {
                    return Err(SymbolicError::PolynomialBudgetExceeded { terms: v.term_count(), cap: opts.term_cap });
                }
                row[k] = v;
            }
            normalize_row(row);
        }
        rank += 1;
    }
    Ok(ReductionReport { rank, pivot_log: log, rref: SymMatrix::from_rows(rows) })
}

/// Gramian of the network and its conservative rank; true when the rank is
/// the number of state nodes.
pub fn verify_ssc_symbolic(
    net: &SignedNetwork,
    opts: &SymbolicOptions,
) -> Result<(bool, ReductionReport, SymbolTable), SymbolicError> {
    let (l, table) = build_symbolic_laplacian(net);
    let b = build_symbolic_input(net);
    let c = gramian_with_cap(&l, &b, opts.term_cap)?;
    let report = rank_with_options(&c, opts)?;
    Ok((report.rank == net.state_count(), report, table))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn x(v: Var) -> Polynomial {
        Polynomial::var(v)
    }

    fn k(c: i64) -> Polynomial {
        Polynomial::int(c)
    }

    #[test]
    fn laplacian_of_three_path() {
        let (l, t) = build_symbolic_laplacian(&fixtures::path3_middle_input());
        assert_eq!(t.edges, vec![(1, 2), (2, 3)]);
        let (a12, a23) = (x(0), x(1));
        let expect = SymMatrix::from_rows(vec![
            vec![-a12.clone(), a12.clone(), k(0)],
            vec![a12.clone(), -(&a12 + &a23), a23.clone()],
            vec![k(0), a23.clone(), -a23.clone()],
        ]);
        assert_eq!(l, expect);
    }

    #[test]
    fn laplacian_rows_sum_to_zero() {
        for net in [fixtures::square_two_inputs(), fixtures::mixed_bridge_chain_placed()] {
            let (l, _) = build_symbolic_laplacian(&net);
            for r in 0..l.rows() {
                let s = (0..l.cols()).fold(Polynomial::zero(), |acc, c| &acc + l.get(r, c));
                assert!(s.is_zero());
                for c in 0..l.cols() {
                    assert_eq!(l.get(r, c), l.get(c, r));
                }
            }
        }
    }

    #[test]
    fn single_node_laplacian_is_zero() {
        let (l, _) = build_symbolic_laplacian(&fixtures::path(&[1], &[1]));
        assert_eq!(l, SymMatrix::zeros(1, 1));
        let c = gramian(&l, &SymMatrix::identity(1)).unwrap();
        assert_eq!(c, SymMatrix::identity(1));
    }

    #[test]
    fn gramian_of_three_path() {
        let net = fixtures::path3_middle_input();
        let (l, _) = build_symbolic_laplacian(&net);
        let c = gramian(&l, &build_symbolic_input(&net)).unwrap();
        let (a12, a23) = (x(0), x(1));
        let s1 = a12.clone();
        let s2 = &a12 + &a23;
        let s3 = a23.clone();
        let expect = SymMatrix::from_rows(vec![
            vec![k(0), a12.clone(), -(&a12 * &(&s1 + &s2))],
            vec![k(1), -s2.clone(), &(&(&a12 * &a12) + &(&s2 * &s2)) + &(&a23 * &a23)],
            vec![k(0), a23.clone(), -(&a23 * &(&s2 + &s3))],
        ]);
        assert_eq!(c, expect);
    }

    #[test]
    fn condition1_zeroes_difference_pivot() {
        let net = fixtures::path3_middle_input();
        let (ok, rep, table) = verify_ssc_symbolic(&net, &SymbolicOptions::default()).unwrap();
        assert!(!ok);
        assert_eq!(rep.rank, 2);
        let zeroed: Vec<&PivotEvent> = rep.zeroed().collect();
        assert_eq!(zeroed.len(), 1);
        assert_eq!((zeroed[0].row, zeroed[0].col), (3, 3));
        assert_eq!(zeroed[0].pivot, &x(0) - &x(1));
        assert_eq!(
            rep.audit(&table),
            "step 1: pivot (1,1) = 1 [used]\nstep 2: pivot (2,2) = a_1_2 [used]\nstep 3: pivot (3,3) = a_1_2 - a_2_3 [zeroed]\n"
        );
    }

    #[test]
    fn identity_has_full_rank() {
        let rep = rank_with_condition1(&SymMatrix::identity(3)).unwrap();
        assert_eq!(rep.rank, 3);
        assert_eq!(rep.zeroed().count(), 0);
    }

    #[test]
    fn two_node_path() {
        let net = fixtures::path(&[1, 2], &[2]);
        let (l, _) = build_symbolic_laplacian(&net);
        let c = gramian(&l, &build_symbolic_input(&net)).unwrap();
        assert_eq!(c, SymMatrix::from_rows(vec![vec![k(0), x(0)], vec![k(1), -x(0)]]));
        let rep = rank_with_condition1(&c).unwrap();
        assert_eq!(rep.rank, 2);
        let pivots: Vec<Polynomial> = rep.pivot_log.iter().map(|e| e.pivot.clone()).collect();
        assert_eq!(pivots, vec![k(1), x(0)]);
    }

    #[test]
    fn terminal_input_path_is_full_rank() {
        let (ok, rep, _) = verify_ssc_symbolic(&fixtures::path4_terminal_input(), &SymbolicOptions::default()).unwrap();
        assert!(ok);
        assert_eq!(rep.rank, 4);
        assert_eq!(rep.zeroed().count(), 0);
    }

    #[test]
    fn single_node_with_input() {
        let (ok, rep, _) = verify_ssc_symbolic(&fixtures::path(&[1], &[1]), &SymbolicOptions::default()).unwrap();
        assert!(ok);
        assert_eq!(rep.rank, 1);
    }

    #[test]
    fn constant_matrices_match_exact_rank() {
        let m = SymMatrix::from_rows(vec![
            vec![k(1), k(2), k(3)],
            vec![k(2), k(4), k(6)],
            vec![k(1), k(0), k(1)],
        ]);
        let rep = rank_with_condition1(&m).unwrap();
        assert_eq!(rep.rank, 2);
        assert_eq!(rep.zeroed().count(), 0);
    }

    #[test]
    fn term_cap_is_enforced() {
        let (net, _) = fixtures::mixed_bridge_chain();
        let net = net.with_inputs(&[(1, crate::graph::Sign::Positive)]).unwrap();
        let (l, _) = build_symbolic_laplacian(&net);
        let err = gramian_with_cap(&l, &build_symbolic_input(&net), 50).unwrap_err();
        assert!(matches!(err, SymbolicError::PolynomialBudgetExceeded { cap: 50, .. }));
    }

    #[test]
    fn dimension_mismatch() {
        let err = gramian(&SymMatrix::zeros(2, 2), &SymMatrix::zeros(3, 1)).unwrap_err();
        assert!(matches!(err, SymbolicError::DimensionMismatch { .. }));
    }
}
