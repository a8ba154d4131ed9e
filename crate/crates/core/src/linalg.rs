//! Sparse exact linear algebra: rank, kernel and solving by Gauss–Jordan
//! elimination with a fixed pivoting rule (columns left to right, lowest row
//! index first), so output is reproducible.

use std::collections::{BTreeMap, BTreeSet};

use crate::field::{Field, Scalar};

type Row = BTreeMap<usize, Scalar>;

#[derive(Clone, Debug)]
pub struct SparseMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Row>,
}

impl SparseMatrix {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> SparseMatrix {
        SparseMatrix { field: field.clone(), rows, cols, data: vec![Row::new(); rows] }
    }

    pub fn identity(field: &Field, n: usize) -> SparseMatrix {
        let mut m = SparseMatrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_dense(field: &Field, entries: &[Vec<Scalar>]) -> SparseMatrix {
        let rows = entries.len();
        let cols = entries.first().map_or(0, |r| r.len());
        let mut m = SparseMatrix::zeros(field, rows, cols);
        for (i, row) in entries.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged matrix");
            for (j, x) in row.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.data[i].get(&j).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn set(&mut self, i: usize, j: usize, x: Scalar) {
        assert!(i < self.rows && j < self.cols, "index out of range");
        if self.field.is_zero(&x) {
            self.data[i].remove(&j);
        } else {
            self.data[i].insert(j, x);
        }
    }

    /// Add `x` to entry (i, j).
    pub fn add_to(&mut self, i: usize, j: usize, x: &Scalar) {
        let cur = self.get(i, j);
        self.set(i, j, self.field.add(&cur, x));
    }

    /// Nonzero entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> {
        self.data.iter().enumerate().flat_map(|(i, r)| r.iter().map(move |(j, x)| (i, *j, x)))
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(|r| r.len()).sum()
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols, "dimension mismatch");
        let k = &self.field;
        self.data
            .iter()
            .map(|r| {
                r.iter().fold(k.zero(), |acc, (j, x)| {
                    if k.is_zero(&v[*j]) {
                        acc
                    } else {
                        k.add(&acc, &k.mul(x, &v[*j]))
                    }
                })
            })
            .collect()
    }

    pub fn rank(&self) -> usize {
        eliminate(&self.field, self.data.clone(), self.cols).pivots.len()
    }

    /// Basis of the null space: one vector per non-pivot column.
    pub fn kernel_basis(&self) -> Vec<Vec<Scalar>> {
        let k = &self.field;
        let e = eliminate(k, self.data.clone(), self.cols);
        let pivot_set: BTreeSet<usize> = e.pivots.iter().copied().collect();
        (0..self.cols)
            .filter(|c| !pivot_set.contains(c))
            .map(|f| {
                let mut v = vec![k.zero(); self.cols];
                v[f] = k.one();
                for (r, &pc) in e.pivots.iter().enumerate() {
                    if let Some(x) = e.rows[r].get(&f) {
                        v[pc] = k.neg(x);
                    }
                }
                v
            })
            .collect()
    }

    /// A solution of `M x = b` with all free variables zero, or `None`.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        self.solve_many(std::slice::from_ref(&b.to_vec())).pop().unwrap()
    }

    /// Solve for several right-hand sides with one elimination.
    pub fn solve_many(&self, bs: &[Vec<Scalar>]) -> Vec<Option<Vec<Scalar>>> {
        let k = &self.field;
        let mut data = self.data.clone();
        for (j, b) in bs.iter().enumerate() {
            assert_eq!(b.len(), self.rows, "dimension mismatch");
            for (i, x) in b.iter().enumerate() {
                if !k.is_zero(x) {
                    data[i].insert(self.cols + j, x.clone());
                }
            }
        }
        let e = eliminate(k, data, self.cols);
        let mut bad = BTreeSet::new();
        for r in &e.rest {
            bad.extend(r.keys().map(|c| c - self.cols));
        }
        (0..bs.len())
            .map(|j| {
                if bad.contains(&j) {
                    return None;
                }
                let mut x = vec![k.zero(); self.cols];
                for (r, &pc) in e.pivots.iter().enumerate() {
                    if let Some(v) = e.rows[r].get(&(self.cols + j)) {
                        x[pc] = v.clone();
                    }
                }
                Some(x)
            })
            .collect()
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut t = SparseMatrix::zeros(&self.field, self.cols, self.rows);
        for (i, j, x) in self.entries() {
            t.data[j].insert(i, x.clone());
        }
        t
    }
}

struct Elimination {
    /// Pivot column of each reduced row.
    pivots: Vec<usize>,
    /// Reduced rows with unit pivots; pivot columns are cleared elsewhere.
    rows: Vec<Row>,
    /// Leftover nonzero rows supported in columns `>= limit`.
    rest: Vec<Row>,
}

fn axpy(k: &Field, dst: &mut Row, f: &Scalar, src: &Row) {
    for (c, x) in src {
        let v = match dst.get(c) {
            Some(y) => k.sub(y, &k.mul(f, x)),
            None => k.neg(&k.mul(f, x)),
        };
        if k.is_zero(&v) {
            dst.remove(c);
        } else {
            dst.insert(*c, v);
        }
    }
}

/// Gauss–Jordan elimination choosing pivots only in columns `< limit`.
fn eliminate(k: &Field, data: Vec<Row>, limit: usize) -> Elimination {
    let mut rows: Vec<Row> = data;
    let mut by_lead: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    for (i, r) in rows.iter().enumerate() {
        if let Some((&c, _)) = r.first_key_value() {
            by_lead.entry(c).or_default().insert(i);
        }
    }
    let mut pivots = Vec::new();
    let mut prow: Vec<Row> = Vec::new();
    while let Some((&c, _)) = by_lead.first_key_value() {
        if c >= limit {
            break;
        }
        let set = by_lead.remove(&c).unwrap();
        let mut it = set.into_iter();
        let p = it.next().unwrap();
        let mut pivot = std::mem::take(&mut rows[p]);
        let inv = k.inv(&pivot[&c]);
        for x in pivot.values_mut() {
            *x = k.mul(x, &inv);
        }
        for i in it {
            let f = rows[i][&c].clone();
            axpy(k, &mut rows[i], &f, &pivot);
            if let Some((&nc, _)) = rows[i].first_key_value() {
                by_lead.entry(nc).or_default().insert(i);
            }
        }
        pivots.push(c);
        prow.push(pivot);
    }
    for r in (0..prow.len()).rev() {
        let (before, after) = prow.split_at_mut(r);
        let pivot = &after[0];
        let c = pivots[r];
        for other in before.iter_mut() {
            if let Some(f) = other.get(&c).cloned() {
                axpy(k, other, &f, pivot);
            }
        }
    }
    let rest = by_lead.into_values().flatten().map(|i| std::mem::take(&mut rows[i])).collect();
    Elimination { pivots, rows: prow, rest }
}
