//! Graded dimensions of `U_q^-` by exact linear algebra.
//!
//! `U_q^-` is presented as the free algebra on the `f_i` modulo the quantum
//! Serre relations (real `i`) and the commutation relations (`a_ij = 0`).
//! The relations are weight-homogeneous, so the weight-`alpha` part of the
//! two-sided ideal is spanned by the products `u r v` of weight `alpha`, and
//!
//! ```text
//! dim U_q^-_{-alpha} = #words(alpha) - rank span{ u r v }
//! ```
//!
//! with the rank taken over `Q(q)` by fraction-free elimination in
//! `Z[q, q^-1]`.
//!
//! Agreement of this count with `|B(infinity)_{-alpha}|` is a theorem of
//! crystal basis theory for these algebras; the crate uses it as an
//! acceptance oracle, not as an input to the crystal computations.

mod laurent;

use std::collections::HashMap;

use thiserror::Error;

use crate::cartan::{CartanDatum, Weight};

pub use laurent::{q_binomial, q_factorial, q_int, LaurentScalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("inexact division: {0}")]
    InexactDivision(String),
    #[error("weight of height {height} exceeds the bound {bound}")]
    HeightExceeded { height: u64, bound: u64 },
    #[error("weight has a negative coordinate at index {index}")]
    NegativeCoordinate { index: usize },
    #[error("weight has length {got}, expected {expected}")]
    LengthMismatch { got: usize, expected: usize },
}

pub const DEFAULT_HEIGHT_BOUND: u64 = 7;

/// `f_{j_1} ... f_{j_r}`, 0-based indices.
pub type Word = Vec<usize>;

/// A weight-homogeneous element of the free algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    /// Multiplicities of each `f_i`.
    pub weight: Vec<u64>,
    pub terms: Vec<(LaurentScalar, Word)>,
}

/// Quantum Serre relations for every real `i` and `j != i`, and
/// `f_i f_j - f_j f_i` for every unordered pair with `a_ij = 0`.
pub fn build_relations(d: &CartanDatum) -> Result<Vec<Relation>, OracleError> {
    let n = d.rank();
    let mut out = Vec::new();
    for &i in d.real_indices() {
        for j in (0..n).filter(|&j| j != i) {
            let top = (1 - d.a(i, j)) as u32;
            let mut terms = Vec::with_capacity(top as usize + 1);
            for k in 0..=top {
                let mut c = q_binomial(top, k)?;
                if k % 2 == 1 {
                    c = -&c;
                }
                let mut word = vec![i; (top - k) as usize];
                word.push(j);
                word.extend(std::iter::repeat_n(i, k as usize));
                terms.push((c, word));
            }
            let mut weight = vec![0; n];
            weight[i] = top as u64;
            weight[j] = 1;
            out.push(Relation { weight, terms });
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if d.a(i, j) == 0 {
                let mut weight = vec![0; n];
                weight[i] = 1;
                weight[j] = 1;
                out.push(Relation {
                    weight,
                    terms: vec![(LaurentScalar::one(), vec![i, j]), (LaurentScalar::monomial(-1, 0), vec![j, i])],
                });
            }
        }
    }
    Ok(out)
}

/// All words with the given multiplicities, in lexicographic order.
pub fn words_of_weight(alpha: &[u64]) -> Vec<Word> {
    fn go(remaining: &mut [u64], prefix: &mut Word, out: &mut Vec<Word>) {
        if remaining.iter().all(|&c| c == 0) {
            out.push(prefix.clone());
            return;
        }
        for i in 0..remaining.len() {
            if remaining[i] > 0 {
                remaining[i] -= 1;
                prefix.push(i);
                go(remaining, prefix, out);
                prefix.pop();
                remaining[i] += 1;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut alpha.to_vec(), &mut Vec::new(), &mut out);
    out
}

/// Rank over `Q(q)` of a matrix with Laurent polynomial entries, by
/// fraction-free (Bareiss) elimination with deterministic pivoting: the
/// first nonzero entry in the current column, scanning rows top-down.
pub fn rank(mut rows: Vec<Vec<LaurentScalar>>) -> Result<usize, OracleError> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    let mut prev = LaurentScalar::one();
    for col in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&k| !rows[k][col].is_zero()) else { continue };
        rows.swap(r, p);
        let (head, tail) = rows.split_at_mut(r + 1);
        let pivot_row = &head[r];
        let pivot = &pivot_row[col];
        for row in tail.iter_mut() {
            let factor = row[col].clone();
            for c in (col + 1)..ncols {
                let num = &(pivot * &row[c]) - &(&factor * &pivot_row[c]);
                row[c] = num.exact_div(&prev)?;
            }
            row[col] = LaurentScalar::zero();
        }
        prev = pivot.clone();
        r += 1;
    }
    Ok(r)
}

/// The relation-product matrix at weight `alpha`, with its column words.
pub fn relation_matrix(d: &CartanDatum, alpha: &[u64]) -> Result<(Vec<Word>, Vec<Vec<LaurentScalar>>), OracleError> {
    let relations = build_relations(d)?;
    let columns = words_of_weight(alpha);
    let index: HashMap<&Word, usize> = columns.iter().enumerate().map(|(k, w)| (w, k)).collect();
    let mut rows = Vec::new();
    for rel in &relations {
        if rel.weight.iter().zip(alpha).any(|(r, a)| r > a) {
            continue;
        }
        let rest: Vec<u64> = alpha.iter().zip(&rel.weight).map(|(a, r)| a - r).collect();
        for w in words_of_weight(&rest) {
            for split in 0..=w.len() {
                let mut row = vec![LaurentScalar::zero(); columns.len()];
                for (c, word) in &rel.terms {
                    let mut full = w[..split].to_vec();
                    full.extend_from_slice(word);
                    full.extend_from_slice(&w[split..]);
                    let k = index[&full];
                    row[k] = &row[k] + c;
                }
                if row.iter().any(|c| !c.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    Ok((columns, rows))
}

fn check_alpha(d: &CartanDatum, alpha: &Weight, bound: u64) -> Result<Vec<u64>, OracleError> {
    if alpha.len() != d.rank() {
        return Err(OracleError::LengthMismatch { got: alpha.len(), expected: d.rank() });
    }
    if let Some(index) = alpha.coords().iter().position(|&c| c < 0) {
        return Err(OracleError::NegativeCoordinate { index });
    }
    let height = alpha.height() as u64;
    if height > bound {
        return Err(OracleError::HeightExceeded { height, bound });
    }
    Ok(alpha.coords().iter().map(|&c| c as u64).collect())
}

/// `dim U_q^-_{-alpha}` for `alpha` in `Q_+` of height at most `bound`.
pub fn graded_dim(d: &CartanDatum, alpha: &Weight, bound: u64) -> Result<u64, OracleError> {
    let alpha = check_alpha(d, alpha, bound)?;
    let (columns, rows) = relation_matrix(d, &alpha)?;
    Ok((columns.len() - rank(rows)?) as u64)
}

/// Every `alpha` in `Q_+` of height `1..=max_height` for the given rank,
/// ordered by height and then lexicographically (descending coordinates).
pub fn weights_up_to_height(rank: usize, max_height: u64) -> Vec<Weight> {
    fn go(rank: usize, left: u64, prefix: &mut Vec<i64>, out: &mut Vec<Weight>) {
        if prefix.len() == rank - 1 {
            prefix.push(left as i64);
            out.push(Weight::new(prefix.clone()));
            prefix.pop();
            return;
        }
        for c in (0..=left).rev() {
            prefix.push(c as i64);
            go(rank, left - c, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    for h in 1..=max_height {
        go(rank, h, &mut Vec::new(), &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn datum(m: Vec<Vec<i64>>) -> CartanDatum {
        CartanDatum::new(m).unwrap()
    }

    fn w(c: &[i64]) -> Weight {
        Weight::new(c.to_vec())
    }

    #[test]
    fn relation_sets() {
        let a2 = build_relations(&datum(vec![vec![2, -1], vec![-1, 2]])).unwrap();
        let mut degrees: Vec<_> = a2.iter().map(|r| r.weight.clone()).collect();
        degrees.sort();
        assert_eq!(degrees, vec![vec![1, 2], vec![2, 1]]);
        let serre = a2.iter().find(|r| r.weight == vec![2, 1]).unwrap();
        assert_eq!(
            serre.terms,
            vec![
                (LaurentScalar::one(), vec![0, 0, 1]),
                (-&q_int(2), vec![0, 1, 0]),
                (LaurentScalar::one(), vec![1, 0, 0]),
            ]
        );

        for t in 1..4 {
            assert!(build_relations(&datum(vec![vec![2 - 2 * t]])).unwrap().is_empty());
        }

        let mixed = build_relations(&datum(vec![vec![2, 0], vec![0, 0]])).unwrap();
        // the Serre relation for the real index has degree (1, 1) and is the commutator too
        assert!(mixed.iter().all(|r| r.weight == vec![1, 1]));
        assert!(mixed.iter().any(|r| r.terms
            == vec![(LaurentScalar::one(), vec![0, 1]), (LaurentScalar::monomial(-1, 0), vec![1, 0])]));
    }

    #[test]
    fn words() {
        assert_eq!(words_of_weight(&[1, 1]), vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(words_of_weight(&[2, 1]).len(), 3);
        assert_eq!(words_of_weight(&[0, 0]), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn graded_dim_examples() {
        for t in 1..4 {
            let d = datum(vec![vec![2 - 2 * t]]);
            for l in 0..=7 {
                assert_eq!(graded_dim(&d, &w(&[l]), 7).unwrap(), 1);
            }
        }
        let b = datum(vec![vec![0, -1], vec![-1, 2]]);
        assert_eq!(graded_dim(&b, &w(&[1, 1]), 7).unwrap(), 2);
        assert_eq!(graded_dim(&b, &w(&[1, 2]), 7).unwrap(), 2);
        let a2 = datum(vec![vec![2, -1], vec![-1, 2]]);
        assert_eq!(graded_dim(&a2, &w(&[1, 1]), 7).unwrap(), 2);
    }

    #[test]
    fn graded_dim_errors() {
        let d = datum(vec![vec![2]]);
        assert_eq!(graded_dim(&d, &w(&[8]), 7), Err(OracleError::HeightExceeded { height: 8, bound: 7 }));
        assert_eq!(graded_dim(&d, &w(&[-1]), 7), Err(OracleError::NegativeCoordinate { index: 0 }));
    }

    #[test]
    fn rank_of_small_matrices() {
        let s = |pairs: &[(i64, i64)]| LaurentScalar::from_terms(pairs.iter().copied());
        // [[1, [2]], [[2], [2]^2]] has rank 1
        let q2 = q_int(2);
        let rows = vec![vec![LaurentScalar::one(), q2.clone()], vec![q2.clone(), &q2 * &q2]];
        assert_eq!(rank(rows).unwrap(), 1);
        // det of [[q, 1], [1, q]] = q^2 - 1 != 0
        let rows = vec![vec![s(&[(1, 1)]), s(&[(0, 1)])], vec![s(&[(0, 1)]), s(&[(1, 1)])]];
        assert_eq!(rank(rows).unwrap(), 2);
        assert_eq!(rank(vec![]).unwrap(), 0);
    }

    #[test]
    fn weights_enumeration() {
        let ws = weights_up_to_height(2, 2);
        assert_eq!(ws, vec![w(&[1, 0]), w(&[0, 1]), w(&[2, 0]), w(&[1, 1]), w(&[0, 2])]);
        assert_eq!(weights_up_to_height(3, 3).len(), 3 + 6 + 10);
    }
}
