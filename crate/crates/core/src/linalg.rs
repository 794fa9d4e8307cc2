//! Sparse exact Gaussian elimination over the rationals.
//!
//! Rows are sorted `(column, value)` lists without zeros. The reduced row
//! echelon form of a matrix is unique for a given column order, so the result
//! does not depend on the order in which rows are fed in.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use crate::rational::Rational;

pub type SparseRow = Vec<(usize, Rational)>;

/// Builds a sorted row from unsorted entries, summing duplicates and dropping zeros.
pub fn sparse_row(entries: impl IntoIterator<Item = (usize, Rational)>) -> SparseRow {
    let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
    for (c, v) in entries {
        *acc.entry(c).or_insert_with(Rational::zero) += v;
    }
    acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
}

/// `a + k * b`.
fn axpy(a: &[(usize, Rational)], k: &Rational, b: &[(usize, Rational)]) -> SparseRow {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            out.push((b[j].0, k * &b[j].1));
            j += 1;
        } else {
            let v = &a[i].1 + k * &b[j].1;
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn normalize_leading(row: &mut SparseRow) {
    let inv = Rational::one() / &row[0].1;
    for (_, v) in row.iter_mut() {
        *v *= &inv;
    }
}

/// Reduced row echelon form: each row has leading entry 1 in its pivot column,
/// pivot columns are strictly increasing and zero in every other row.
#[derive(Clone, Debug, PartialEq)]
pub struct Rref {
    ncols: usize,
    rows: Vec<SparseRow>,
    pivots: Vec<usize>,
    pivot_row: HashMap<usize, usize>,
}

impl Rref {
    pub fn from_rows(ncols: usize, rows: impl IntoIterator<Item = SparseRow>) -> Self {
        // forward pass: semi-echelon form, each stored row has a unique leading column
        let mut stored: Vec<SparseRow> = Vec::new();
        let mut lead: HashMap<usize, usize> = HashMap::new();
        for mut row in rows {
            debug_assert!(row.iter().all(|(c, _)| *c < ncols));
            while let Some((c, v)) = row.first().cloned() {
                match lead.get(&c) {
                    Some(&r) => row = axpy(&row, &-v, &stored[r]),
                    None => break,
                }
            }
            if row.is_empty() {
                continue;
            }
            normalize_leading(&mut row);
            lead.insert(row[0].0, stored.len());
            stored.push(row);
        }
        // back substitution, highest pivot first
        let mut order: Vec<usize> = (0..stored.len()).collect();
        order.sort_by_key(|&r| std::cmp::Reverse(stored[r][0].0));
        for &r in &order {
            let pivot = stored[r][0].0;
            loop {
                let hit = stored[r].iter().skip(1).find(|(c, _)| lead.contains_key(c)).map(|(c, v)| (*c, v.clone()));
                let Some((c, v)) = hit else { break };
                debug_assert!(c > pivot);
                let other = lead[&c];
                let reduced = axpy(&stored[r], &-v, &stored[other]);
                stored[r] = reduced;
            }
        }
        let mut rows: Vec<SparseRow> = stored;
        rows.sort_by_key(|row| row[0].0);
        let pivots: Vec<usize> = rows.iter().map(|r| r[0].0).collect();
        let pivot_row = pivots.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        Rref { ncols, rows, pivots, pivot_row }
    }

    /// Reassembles a form that is already reduced (e.g. loaded from disk); returns
    /// `None` if the rows violate the echelon invariants.
    pub fn from_reduced(ncols: usize, rows: Vec<SparseRow>) -> Option<Self> {
        let pivots: Vec<usize> = rows.iter().map(|r| r.first().map(|e| e.0)).collect::<Option<_>>()?;
        if pivots.windows(2).any(|w| w[0] >= w[1]) {
            return None;
        }
        let pivot_row: HashMap<usize, usize> = pivots.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        for (i, row) in rows.iter().enumerate() {
            if !row[0].1.is_one() || row.windows(2).any(|w| w[0].0 >= w[1].0) {
                return None;
            }
            if row.iter().any(|(c, v)| *c >= ncols || v.is_zero()) {
                return None;
            }
            if row.iter().skip(1).any(|(c, _)| pivot_row.get(c).is_some_and(|&j| j != i)) {
                return None;
            }
        }
        Some(Rref { ncols, rows, pivots, pivot_row })
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseRow] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_row.contains_key(&col)
    }

    /// Canonical representative of `v` modulo the row space; supported on free columns.
    pub fn reduce(&self, v: &[(usize, Rational)]) -> SparseRow {
        let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
        for (c, x) in v {
            match self.pivot_row.get(c) {
                Some(&r) => {
                    for (c2, y) in self.rows[r].iter().skip(1) {
                        *acc.entry(*c2).or_insert_with(Rational::zero) -= x * y;
                    }
                }
                None => *acc.entry(*c).or_insert_with(Rational::zero) += x,
            }
        }
        acc.into_iter().filter(|(_, x)| !x.is_zero()).collect()
    }
}

/// Outcome of solving `A x = b` exactly.
#[derive(Clone, Debug, PartialEq)]
pub enum Solution {
    Unique(Vec<Rational>),
    Underdetermined { rank: usize },
    Inconsistent,
}

/// Solves a dense system given as rows of `A` and the right-hand side `b`.
pub fn solve(a: &[Vec<Rational>], b: &[Rational]) -> Solution {
    let n = a.first().map_or(0, Vec::len);
    let rows = a.iter().zip(b).map(|(row, rhs)| {
        sparse_row(row.iter().cloned().enumerate().chain(std::iter::once((n, rhs.clone()))))
    });
    let rref = Rref::from_rows(n + 1, rows);
    if rref.is_pivot(n) {
        return Solution::Inconsistent;
    }
    if rref.rank() < n {
        return Solution::Underdetermined { rank: rref.rank() };
    }
    let x = rref
        .rows()
        .iter()
        .map(|row| row.iter().find(|(c, _)| *c == n).map_or_else(Rational::zero, |(_, v)| v.clone()))
        .collect();
    Solution::Unique(x)
}
