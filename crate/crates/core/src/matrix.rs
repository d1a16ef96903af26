//! Dense matrices over a finite field: echelon forms, rank, kernels, and an
//! incremental echelon basis for subset searches.

use rand::RngExt;

use crate::field::{Elem, Field};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Elem::ZERO; rows * cols],
        }
    }

    /// Builds a matrix from rows of equal length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<Vec<Elem>>) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in &rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend_from_slice(r);
        }
        Matrix {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Elem {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Elem) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Elem> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn row_vectors(&self) -> Vec<Vec<Elem>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn push_row(&mut self, row: &[Elem]) {
        assert_eq!(row.len(), self.cols);
        self.data.extend_from_slice(row);
        self.rows += 1;
    }

    pub fn select_columns(&self, idx: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(self.rows, idx.len());
        for r in 0..self.rows {
            for (j, &c) in idx.iter().enumerate() {
                m.set(r, j, self.get(r, c));
            }
        }
        m
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        Matrix::from_rows(self.cols, idx.iter().map(|&r| self.row(r).to_vec()).collect())
    }

    /// `self * diag(lambda)`.
    pub fn scale_columns(&self, f: &Field, lambda: &[Elem]) -> Matrix {
        assert_eq!(lambda.len(), self.cols);
        let mut m = self.clone();
        for r in 0..self.rows {
            for (c, &l) in lambda.iter().enumerate() {
                m.set(r, c, f.mul(self.get(r, c), l));
            }
        }
        m
    }

    /// `self * v`.
    pub fn mul_vec(&self, f: &Field, v: &[Elem]) -> Vec<Elem> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| dot(f, self.row(r), v))
            .collect()
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn rref_in_place(&mut self, f: &Field) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut lead = 0;
        for c in 0..self.cols {
            if lead == self.rows {
                break;
            }
            let Some(pr) = (lead..self.rows).find(|&r| !self.get(r, c).is_zero()) else {
                continue;
            };
            self.swap_rows(pr, lead);
            let inv = f.inv(self.get(lead, c)).expect("pivot is nonzero");
            for j in c..self.cols {
                let v = f.mul(self.get(lead, j), inv);
                self.set(lead, j, v);
            }
            for r in 0..self.rows {
                if r == lead {
                    continue;
                }
                let factor = self.get(r, c);
                if factor.is_zero() {
                    continue;
                }
                for j in c..self.cols {
                    let v = f.sub(self.get(r, j), f.mul(factor, self.get(lead, j)));
                    self.set(r, j, v);
                }
            }
            pivots.push(c);
            lead += 1;
        }
        pivots
    }

    /// RREF with zero rows dropped, plus pivot columns.
    pub fn rref(&self, f: &Field) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place(f);
        m.data.truncate(pivots.len() * m.cols);
        m.rows = pivots.len();
        (m, pivots)
    }

    pub fn rank(&self, f: &Field) -> usize {
        let mut m = self.clone();
        m.forward_eliminate(f)
    }

    /// Row echelon form (not reduced); returns the rank.
    fn forward_eliminate(&mut self, f: &Field) -> usize {
        let mut lead = 0;
        for c in 0..self.cols {
            if lead == self.rows {
                break;
            }
            let Some(pr) = (lead..self.rows).find(|&r| !self.get(r, c).is_zero()) else {
                continue;
            };
            self.swap_rows(pr, lead);
            let inv = f.inv(self.get(lead, c)).expect("pivot is nonzero");
            for r in lead + 1..self.rows {
                let factor = f.mul(self.get(r, c), inv);
                if factor.is_zero() {
                    continue;
                }
                for j in c..self.cols {
                    let v = f.sub(self.get(r, j), f.mul(factor, self.get(lead, j)));
                    self.set(r, j, v);
                }
            }
            lead += 1;
        }
        lead
    }

    /// A basis of the right kernel `{v : self * v = 0}`, one vector per free
    /// column, each with a `1` in its free column.
    pub fn kernel(&self, f: &Field) -> Vec<Vec<Elem>> {
        let (r, pivots) = self.rref(f);
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![Elem::ZERO; self.cols];
            v[free] = f.one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = f.neg(r.get(i, free));
            }
            basis.push(v);
        }
        basis
    }

    /// Indices of a maximal set of linearly independent rows, greedily from
    /// the top.
    pub fn independent_rows(&self, f: &Field) -> Vec<usize> {
        let mut basis = IncrementalEchelon::new(self.cols);
        let mut keep = Vec::new();
        for r in 0..self.rows {
            if basis.try_push(f, self.row(r)) {
                keep.push(r);
            }
        }
        keep
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// CSV with one matrix row per line, entries as element digit strings.
    pub fn to_csv(&self, f: &Field) -> String {
        let mut out = String::new();
        for r in 0..self.rows {
            let line: Vec<String> = self.row(r).iter().map(|&x| f.format(x)).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }
}

pub fn dot(f: &Field, a: &[Elem], b: &[Elem]) -> Elem {
    a.iter()
        .zip(b)
        .fold(Elem::ZERO, |acc, (&x, &y)| f.add(acc, f.mul(x, y)))
}

/// `a += c * b`.
#[inline]
pub fn axpy(f: &Field, a: &mut [Elem], c: Elem, b: &[Elem]) {
    if c.is_zero() {
        return;
    }
    for (x, &y) in a.iter_mut().zip(b) {
        *x = f.add(*x, f.mul(c, y));
    }
}

/// Linear combination `sum coeffs[i] * vectors[i]`.
pub fn combine(f: &Field, coeffs: &[Elem], vectors: &[Vec<Elem>], len: usize) -> Vec<Elem> {
    let mut out = vec![Elem::ZERO; len];
    for (c, v) in coeffs.iter().zip(vectors) {
        axpy(f, &mut out, *c, v);
    }
    out
}

/// An echelon basis that supports push/pop, for depth-first subset searches.
/// Stored vectors have a `1` at their pivot and zeros at earlier pivots.
#[derive(Debug, Clone)]
pub struct IncrementalEchelon {
    dim: usize,
    vectors: Vec<Vec<Elem>>,
    pivots: Vec<usize>,
}

impl IncrementalEchelon {
    pub fn new(dim: usize) -> Self {
        IncrementalEchelon {
            dim,
            vectors: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Reduces `v` against the basis; returns its leading position if it is
    /// independent of the basis.
    pub fn reduce(&self, f: &Field, v: &mut [Elem]) -> Option<usize> {
        for (b, &p) in self.vectors.iter().zip(&self.pivots) {
            let c = v[p];
            if !c.is_zero() {
                axpy(f, v, f.neg(c), b);
            }
        }
        v.iter().position(|x| !x.is_zero())
    }

    /// True when `v` is in the span of the basis.
    pub fn is_dependent(&self, f: &Field, v: &[Elem]) -> bool {
        let mut w = v.to_vec();
        self.reduce(f, &mut w).is_none()
    }

    /// Pushes `v` if independent; returns whether it was pushed.
    pub fn try_push(&mut self, f: &Field, v: &[Elem]) -> bool {
        debug_assert_eq!(v.len(), self.dim);
        let mut w = v.to_vec();
        match self.reduce(f, &mut w) {
            None => false,
            Some(p) => {
                let inv = f.inv(w[p]).expect("leading entry is nonzero");
                for x in w.iter_mut() {
                    *x = f.mul(*x, inv);
                }
                self.vectors.push(w);
                self.pivots.push(p);
                true
            }
        }
    }

    pub fn pop(&mut self) {
        self.vectors.pop();
        self.pivots.pop();
    }
}

/// Number of projective points of an `m`-dimensional space over GF(order).
pub fn projective_count(order: usize, m: usize) -> u128 {
    if m == 0 {
        return 0;
    }
    let q = order as u128;
    (q.pow(m as u32) - 1) / (q - 1)
}

/// How much of a span was visited by [`scan_span`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanCoverage {
    /// Every projective point of the span was visited.
    Complete,
    /// The span was too large; the basis vectors and random combinations
    /// were visited instead.
    Sampled,
}

/// Visits the projective points of `span(basis)` (one representative per
/// line, leading coefficient 1). Spans with more than `limit` points are
/// sampled: each basis vector and then `samples` random combinations. The
/// callback returns `true` to stop early.
pub fn scan_span<F>(
    f: &Field,
    basis: &[Vec<Elem>],
    limit: u128,
    samples: usize,
    seed: u64,
    mut visit: F,
) -> ScanCoverage
where
    F: FnMut(&[Elem]) -> bool,
{
    let m = basis.len();
    if m == 0 {
        return ScanCoverage::Complete;
    }
    let len = basis[0].len();
    let q = f.order();
    if projective_count(q, m) <= limit {
        let mut coeffs = vec![Elem::ZERO; m];
        for lead in 0..m {
            // coefficients before `lead` are zero, at `lead` one, after free
            let free = m - lead - 1;
            let total = (q as u128).pow(free as u32);
            for idx in 0..total {
                coeffs.iter_mut().for_each(|c| *c = Elem::ZERO);
                coeffs[lead] = f.one();
                let mut n = idx;
                for slot in coeffs.iter_mut().skip(lead + 1) {
                    *slot = Elem((n % q as u128) as u16);
                    n /= q as u128;
                }
                let v = combine(f, &coeffs, basis, len);
                if visit(&v) {
                    return ScanCoverage::Complete;
                }
            }
        }
        return ScanCoverage::Complete;
    }
    for b in basis {
        if visit(b) {
            return ScanCoverage::Sampled;
        }
    }
    let mut rng = crate::rng(seed);
    for _ in 0..samples {
        let coeffs: Vec<Elem> = (0..m)
            .map(|_| Elem(rng.random_range(0..q) as u16))
            .collect();
        if coeffs.iter().all(|c| c.is_zero()) {
            continue;
        }
        let v = combine(f, &coeffs, basis, len);
        if visit(&v) {
            break;
        }
    }
    ScanCoverage::Sampled
}
