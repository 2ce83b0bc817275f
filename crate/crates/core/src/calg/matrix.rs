//! Sparse square matrices over an arrow basis.

use std::collections::BTreeMap;

use super::scalar::Scalar;

pub type SparseVec<S> = BTreeMap<usize, S>;

#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix<S> {
    pub n: usize,
    pub rows: Vec<BTreeMap<usize, S>>,
}

impl<S: Scalar> SparseMatrix<S> {
    pub fn zeros(n: usize) -> Self {
        SparseMatrix {
            n,
            rows: vec![BTreeMap::new(); n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, S::scalar_one());
        }
        m
    }

    pub fn diagonal(values: Vec<S>) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, v) in values.into_iter().enumerate() {
            m.set(i, i, v);
        }
        m
    }

    pub fn set(&mut self, i: usize, j: usize, v: S) {
        if v.negligible(0.0) {
            self.rows[i].remove(&j);
        } else {
            self.rows[i].insert(j, v);
        }
    }

    pub fn get(&self, i: usize, j: usize) -> S {
        self.rows[i].get(&j).cloned().unwrap_or_else(S::scalar_zero)
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    pub fn apply(&self, v: &SparseVec<S>) -> SparseVec<S> {
        let mut out = SparseVec::new();
        for (i, row) in self.rows.iter().enumerate() {
            let mut acc = S::scalar_zero();
            let mut hit = false;
            for (j, a) in row {
                if let Some(x) = v.get(j) {
                    acc = acc + a.clone() * x.clone();
                    hit = true;
                }
            }
            if hit && !acc.negligible(0.0) {
                out.insert(i, acc);
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.n);
        for (i, row) in self.rows.iter().enumerate() {
            let mut acc: BTreeMap<usize, S> = BTreeMap::new();
            for (k, a) in row {
                for (j, b) in &other.rows[*k] {
                    let e = acc.entry(*j).or_insert_with(S::scalar_zero);
                    *e = e.clone() + a.clone() * b.clone();
                }
            }
            for (j, v) in acc {
                out.set(i, j, v);
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (i, row) in other.rows.iter().enumerate() {
            for (j, b) in row {
                let v = out.get(i, *j) + b.clone();
                out.set(i, *j, v);
            }
        }
        out
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::zeros(self.n);
        for (i, row) in self.rows.iter().enumerate() {
            for (j, a) in row {
                out.set(i, *j, a.clone() * c.clone());
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.n);
        for (i, row) in self.rows.iter().enumerate() {
            for (j, a) in row {
                out.set(*j, i, a.conj());
            }
        }
        out
    }

    /// First entry where the two matrices differ by more than `tol`.
    pub fn first_difference(&self, other: &Self, tol: f64) -> Option<(usize, usize, S, S)> {
        for i in 0..self.n {
            for j in self.rows[i].keys().chain(other.rows[i].keys()) {
                let (a, b) = (self.get(i, *j), other.get(i, *j));
                if !a.close(&b, tol) {
                    return Some((i, *j, a, b));
                }
            }
        }
        None
    }

    /// Row-major flattening, for rank computations.
    pub fn flatten(&self) -> SparseVec<S> {
        let mut out = SparseVec::new();
        for (i, row) in self.rows.iter().enumerate() {
            for (j, a) in row {
                out.insert(i * self.n + j, a.clone());
            }
        }
        out
    }
}

/// Rank of a family of sparse vectors by Gaussian elimination.
pub fn rank<S: Scalar>(vectors: &[SparseVec<S>], tol: f64) -> usize {
    // pivot column -> reduced row
    let mut basis: BTreeMap<usize, SparseVec<S>> = BTreeMap::new();
    for v in vectors {
        let mut v = v.clone();
        loop {
            v.retain(|_, a| !a.negligible(tol));
            let Some((&lead, lv)) = v.iter().next() else { break };
            let Some(row) = basis.get(&lead) else {
                let inv = S::scalar_one() / lv.clone();
                let normalized = v.into_iter().map(|(k, a)| (k, a * inv.clone())).collect();
                basis.insert(lead, normalized);
                break;
            };
            let factor = lv.clone();
            for (k, b) in row {
                let e = v.entry(*k).or_insert_with(S::scalar_zero);
                *e = e.clone() - factor.clone() * b.clone();
            }
        }
    }
    basis.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Q;

    #[test]
    fn product_and_adjoint() {
        let mut a: SparseMatrix<Q> = SparseMatrix::zeros(2);
        a.set(0, 1, Q::from_integer(2));
        let b = a.adjoint();
        assert_eq!(b.get(1, 0), Q::from_integer(2));
        let p = a.mul(&b);
        assert_eq!(p.get(0, 0), Q::from_integer(4));
        assert_eq!(p.nnz(), 1);
    }

    #[test]
    fn rank_of_dependent_vectors() {
        let one = Q::from_integer(1);
        let v1: SparseVec<Q> = [(0, one), (1, one)].into_iter().collect();
        let v2: SparseVec<Q> = [(1, one)].into_iter().collect();
        let v3: SparseVec<Q> = [(0, one + one), (1, Q::from_integer(3))].into_iter().collect();
        assert_eq!(rank(&[v1.clone(), v2.clone()], 0.0), 2);
        assert_eq!(rank(&[v1, v2, v3], 0.0), 2);
    }
}
