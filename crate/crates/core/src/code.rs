//! Evaluation codes `C(B, d, -E)` on the Hermitian curve and their duals.

use std::collections::BTreeSet;

use rand::seq::index::sample;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curve::{CurveError, HermitianCurve};
use crate::field::{Elem, Field};
use crate::matrix::{scan_span, IncrementalEchelon, Matrix, ScanCoverage};
use crate::plane::{enumerate_lines, monomial_count, monomial_values, HomogeneousForm, ProjPoint};
use crate::scheme::{build_scheme, SchemeError, ZeroScheme};

/// Default cap on the number of subsets an exhaustive search may visit.
pub const SUBSET_LIMIT: u128 = 1_000_000_000;
/// Default cap on `q^(2k)` for weight enumeration.
pub const WEIGHT_LIMIT: u128 = 100_000_000;
/// Projective kernels up to this size are scanned completely.
pub const KERNEL_SCAN_LIMIT: u128 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodeError {
    #[error("the degree must be positive")]
    ZeroDegree,
    #[error("evaluation point {0} is not on the curve")]
    PointOffCurve(String),
    #[error("evaluation point {0} lies in the support of E")]
    PointInScheme(String),
    #[error("evaluation point {0} is repeated")]
    RepeatedPoint(String),
    #[error("E is not contained in the curve at {0}")]
    SchemeOffCurve(String),
    #[error("length {n} does not exceed d(q+1) - deg E = {bound}")]
    LengthBound { n: usize, bound: i64 },
    #[error("dimension {got} differs from h0(O_C(d)) - deg E + h1 = {expected}")]
    DimensionMismatch { got: usize, expected: usize },
    #[error("search needs C({n}, {w}) = {subsets} subsets, above the limit {limit}")]
    Guard { n: usize, w: usize, subsets: u128, limit: u128 },
    #[error("q^(2k) = {0} codewords exceeds the limit {1}")]
    TooManyWords(u128, u128),
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("scaling vector has a zero entry at {0}")]
    ZeroScaling(usize),
    #[error("multiplicities must be sorted ascending and in 1..=q+1")]
    BadMultiplicities,
    #[error("reduced degree d' = {0} is not positive")]
    NonPositiveDegree(i64),
    #[error("dependent subset {0:?} does not raise h1 (oracle disagreement)")]
    OracleMismatch(Vec<usize>),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error(transparent)]
    Curve(#[from] CurveError),
}

/// `h^0(C, O_C(d))` for a plane curve of degree `c`.
pub fn h0_plane_curve(c: usize, d: usize) -> usize {
    let full = monomial_count(d);
    if d < c {
        full
    } else {
        full - monomial_count(d - c)
    }
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// The code obtained by evaluating the degree-`d` forms through `E` at the
/// points of `B`. Columns follow the canonical curve-point order.
#[derive(Debug, Clone)]
pub struct CodeInstance {
    curve: HermitianCurve,
    d: usize,
    e: ZeroScheme,
    b: Vec<ProjPoint>,
    g: Matrix,
    columns: Vec<Vec<Elem>>,
    h1_e: usize,
}

pub fn build_code(
    curve: &HermitianCurve,
    d: usize,
    e: &ZeroScheme,
    b: &[ProjPoint],
) -> Result<CodeInstance, CodeError> {
    let f = curve.field();
    if d == 0 {
        return Err(CodeError::ZeroDegree);
    }
    for c in e.components() {
        let p = c.point();
        let inside = curve.contains(p)
            && match c.carrier() {
                Some(l) => curve.contact_order(l, p)? >= c.mult(),
                None => c.mult() == 1,
            };
        if !inside {
            return Err(CodeError::SchemeOffCurve(p.display(f)));
        }
    }
    let support = e.support();
    let mut idx = Vec::with_capacity(b.len());
    for p in b {
        let i = curve
            .index_of(p)
            .ok_or_else(|| CodeError::PointOffCurve(p.display(f)))?;
        if support.contains(p) {
            return Err(CodeError::PointInScheme(p.display(f)));
        }
        idx.push(i);
    }
    idx.sort_unstable();
    if let Some(w) = idx.windows(2).find(|w| w[0] == w[1]) {
        return Err(CodeError::RepeatedPoint(curve.rational_points()[w[0]].display(f)));
    }
    let b: Vec<ProjPoint> = idx.iter().map(|&i| curve.rational_points()[i]).collect();
    let n = b.len();
    let bound = (d * curve.degree()) as i64 - e.degree() as i64;
    if n as i64 <= bound {
        return Err(CodeError::LengthBound { n, bound });
    }

    let basis = e.forms_through(f, d);
    let values: Vec<Vec<Elem>> = b.iter().map(|p| monomial_values(f, p.coords(), d)).collect();
    let rows: Vec<Vec<Elem>> = basis
        .iter()
        .map(|form| values.iter().map(|v| crate::matrix::dot(f, form, v)).collect())
        .collect();
    let full = Matrix::from_rows(n, rows);
    let keep = full.independent_rows(f);
    let g = full.select_rows(&keep);

    let h1_e = e.cohomology(f, d).h1;
    let expected = h0_plane_curve(curve.degree(), d) + h1_e - e.degree();
    if g.rows() != expected {
        return Err(CodeError::DimensionMismatch {
            got: g.rows(),
            expected,
        });
    }
    let columns = (0..n).map(|c| g.column(c)).collect();
    Ok(CodeInstance {
        curve: curve.clone(),
        d,
        e: e.clone(),
        b,
        g,
        columns,
        h1_e,
    })
}

/// How much a reported dual distance has been proved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Guarantee {
    Exhaustive,
    Structured,
}

/// Which subsets a dual-distance search visits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    /// Every subset of each size.
    Exhaustive,
    /// Every subset lying on a line, plus `random_subsets` uniform subsets
    /// of each size.
    Structured { random_subsets: usize },
}

#[derive(Debug, Clone, Copy)]
pub struct SearchOptions {
    pub w_max: usize,
    pub mode: SearchMode,
    pub seed: u64,
    pub subset_limit: u128,
    /// Random non-witness subsets cross-checked against the h1 oracle.
    pub oracle_samples: usize,
}

impl SearchOptions {
    pub fn exhaustive(w_max: usize) -> Self {
        SearchOptions {
            w_max,
            mode: SearchMode::Exhaustive,
            seed: 0,
            subset_limit: SUBSET_LIMIT,
            oracle_samples: 1000,
        }
    }

    pub fn structured(w_max: usize, random_subsets: usize, seed: u64) -> Self {
        SearchOptions {
            w_max,
            mode: SearchMode::Structured { random_subsets },
            seed,
            subset_limit: SUBSET_LIMIT,
            oracle_samples: 1000,
        }
    }
}

/// Result of a dual minimum distance search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualDistance {
    /// The smallest weight with a dependent subset, or `None` when no
    /// subset of size at most `w_max` was found dependent.
    pub weight: Option<usize>,
    /// Column-index supports of that weight, sorted.
    pub supports: Vec<Vec<usize>>,
    pub guarantee: Guarantee,
    /// Number of subsets whose rank was tested.
    pub subsets_tested: u64,
}

/// A dual codeword restricted to its support.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualWord {
    pub support: Vec<usize>,
    /// Coefficients on the support, first entry 1.
    pub coeffs: Vec<Elem>,
    /// The kernel of the support columns is one-dimensional.
    pub unique: bool,
    pub coverage: ScanCoverage,
}

impl DualWord {
    pub fn weight(&self) -> usize {
        self.support.len()
    }
}

impl CodeInstance {
    pub fn curve(&self) -> &HermitianCurve {
        &self.curve
    }

    pub fn field(&self) -> &Field {
        self.curve.field()
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn scheme(&self) -> &ZeroScheme {
        &self.e
    }

    /// Evaluation points in column order.
    pub fn points(&self) -> &[ProjPoint] {
        &self.b
    }

    pub fn n(&self) -> usize {
        self.b.len()
    }

    pub fn k(&self) -> usize {
        self.g.rows()
    }

    pub fn generator(&self) -> &Matrix {
        &self.g
    }

    pub fn h1_e(&self) -> usize {
        self.h1_e
    }

    /// Canonical curve index of each column.
    pub fn point_indices(&self) -> Vec<usize> {
        self.b
            .iter()
            .map(|p| self.curve.index_of(p).expect("B is on the curve"))
            .collect()
    }

    pub fn column_of(&self, p: &ProjPoint) -> Option<usize> {
        self.b.binary_search(p).ok()
    }

    /// True when the columns in `subset` are linearly dependent.
    pub fn columns_dependent(&self, subset: &[usize]) -> bool {
        let f = self.field();
        let mut ech = IncrementalEchelon::new(self.k());
        !subset.iter().all(|&c| ech.try_push(f, &self.columns[c]))
    }

    /// The cohomological criterion `h1(E ∪ S) > h1(E)` for a set of columns.
    pub fn oracle_dependent(&self, subset: &[usize]) -> bool {
        let f = self.field();
        let pts: Vec<ProjPoint> = subset.iter().map(|&c| self.b[c]).collect();
        let s = ZeroScheme::reduced(f, &pts).expect("distinct columns");
        let z = self.e.union(f, &s).expect("B avoids E");
        z.cohomology(f, self.d).h1 > self.h1_e
    }

    /// Every line of the plane meeting `B` in at least `min` points, with
    /// the column indices on it.
    pub fn line_subsets(&self, min: usize) -> Vec<(HomogeneousForm, Vec<usize>)> {
        let f = self.field();
        enumerate_lines(f)
            .into_iter()
            .filter_map(|l| {
                let on: Vec<usize> = (0..self.n())
                    .filter(|&c| l.eval(f, &self.b[c]).is_zero())
                    .collect();
                (on.len() >= min).then_some((l, on))
            })
            .collect()
    }

    /// Smallest number of dependent columns (the dual minimum distance) up
    /// to `w_max`, with every support of that size found by the search.
    pub fn dual_min_distance(&self, opts: &SearchOptions) -> Result<DualDistance, CodeError> {
        let n = self.n();
        if opts.mode == SearchMode::Exhaustive {
            let w = opts.w_max.min(n);
            let subsets = binomial(n, w);
            if subsets > opts.subset_limit {
                return Err(CodeError::Guard {
                    n,
                    w,
                    subsets,
                    limit: opts.subset_limit,
                });
            }
        }
        let mut tested = 0u64;
        let mut rng = crate::rng(opts.seed);
        for w in 1..=opts.w_max.min(n) {
            let found: BTreeSet<Vec<usize>> = match opts.mode {
                SearchMode::Exhaustive => {
                    tested += binomial(n, w) as u64;
                    self.dependent_subsets(w).into_iter().collect()
                }
                SearchMode::Structured { random_subsets } => {
                    let mut found = BTreeSet::new();
                    for (_, on) in self.line_subsets(w) {
                        for_each_subset(on.len(), w, |pick| {
                            let s: Vec<usize> = pick.iter().map(|&i| on[i]).collect();
                            tested += 1;
                            if self.columns_dependent(&s) {
                                found.insert(s);
                            }
                        });
                    }
                    for _ in 0..random_subsets {
                        let mut s = sample(&mut rng, n, w).into_vec();
                        s.sort_unstable();
                        tested += 1;
                        if self.columns_dependent(&s) {
                            found.insert(s);
                        }
                    }
                    found
                }
            };
            if opts.oracle_samples > 0 {
                for _ in 0..opts.oracle_samples {
                    let mut s = sample(&mut rng, n, w).into_vec();
                    s.sort_unstable();
                    if self.columns_dependent(&s) != self.oracle_dependent(&s) {
                        return Err(CodeError::OracleMismatch(s));
                    }
                }
            }
            if !found.is_empty() {
                for s in &found {
                    if !self.oracle_dependent(s) {
                        return Err(CodeError::OracleMismatch(s.clone()));
                    }
                }
                return Ok(DualDistance {
                    weight: Some(w),
                    supports: found.into_iter().collect(),
                    guarantee: guarantee(opts.mode),
                    subsets_tested: tested,
                });
            }
        }
        Ok(DualDistance {
            weight: None,
            supports: Vec::new(),
            guarantee: guarantee(opts.mode),
            subsets_tested: tested,
        })
    }

    /// All dependent `w`-subsets, assuming none of smaller size exists.
    fn dependent_subsets(&self, w: usize) -> Vec<Vec<usize>> {
        let n = self.n();
        let k = self.k();
        let f = self.field();
        let mut out: Vec<Vec<usize>> = (0..n)
            .into_par_iter()
            .flat_map_iter(|first| {
                let mut ech = IncrementalEchelon::new(k);
                let mut found = Vec::new();
                if w == 1 {
                    if self.columns[first].iter().all(|x| x.is_zero()) {
                        found.push(vec![first]);
                    }
                    return found;
                }
                if ech.try_push(f, &self.columns[first]) {
                    let mut chosen = vec![first];
                    let mut buf = vec![Elem::ZERO; k];
                    self.dfs(&mut ech, &mut chosen, first + 1, w, &mut buf, &mut found);
                }
                found
            })
            .collect();
        out.sort();
        out
    }

    fn dfs(
        &self,
        ech: &mut IncrementalEchelon,
        chosen: &mut Vec<usize>,
        start: usize,
        w: usize,
        buf: &mut [Elem],
        found: &mut Vec<Vec<usize>>,
    ) {
        let f = self.field();
        let n = self.n();
        let remaining = w - chosen.len();
        for c in start..=(n - remaining) {
            if remaining == 1 {
                buf.copy_from_slice(&self.columns[c]);
                if ech.reduce(f, buf).is_none() {
                    let mut s = chosen.clone();
                    s.push(c);
                    found.push(s);
                }
            } else if ech.try_push(f, &self.columns[c]) {
                chosen.push(c);
                self.dfs(ech, chosen, c + 1, w, buf, found);
                chosen.pop();
                ech.pop();
            }
        }
    }

    /// A dual codeword with support exactly `subset`, if one exists.
    pub fn support_word(&self, subset: &[usize], seed: u64) -> Option<DualWord> {
        let f = self.field();
        let kernel = self.g.select_columns(subset).kernel(f);
        if kernel.is_empty() {
            return None;
        }
        let full = |v: &[Elem]| v.iter().all(|x| !x.is_zero());
        let normalize = |v: &[Elem]| -> Vec<Elem> {
            let inv = f.inv(v[0]).expect("full support");
            v.iter().map(|&x| f.mul(x, inv)).collect()
        };
        if kernel.len() == 1 {
            return full(&kernel[0]).then(|| DualWord {
                support: subset.to_vec(),
                coeffs: normalize(&kernel[0]),
                unique: true,
                coverage: ScanCoverage::Complete,
            });
        }
        let mut hit = None;
        let coverage = scan_span(f, &kernel, KERNEL_SCAN_LIMIT, 100_000, seed, |v| {
            if full(v) {
                hit = Some(normalize(v));
                true
            } else {
                false
            }
        });
        hit.map(|coeffs| DualWord {
            support: subset.to_vec(),
            coeffs,
            unique: false,
            coverage,
        })
    }

    /// Weight enumerator `W_0..W_n` by listing every codeword.
    pub fn weight_distribution(&self, limit: u128) -> Result<Vec<u64>, CodeError> {
        let f = self.field();
        let q2 = f.order() as u128;
        let words = q2.checked_pow(self.k() as u32).unwrap_or(u128::MAX);
        if words > limit {
            return Err(CodeError::TooManyWords(words, limit));
        }
        let n = self.n();
        let mut dist = vec![0u64; n + 1];
        // multiples[i][a] = a * row i
        let multiples: Vec<Vec<Vec<Elem>>> = (0..self.k())
            .map(|i| {
                f.elements()
                    .map(|a| self.g.row(i).iter().map(|&x| f.mul(a, x)).collect())
                    .collect()
            })
            .collect();
        let mut stack = vec![vec![Elem::ZERO; n]; self.k() + 1];
        fn walk(
            f: &Field,
            level: usize,
            multiples: &[Vec<Vec<Elem>>],
            stack: &mut [Vec<Elem>],
            dist: &mut [u64],
        ) {
            if level == multiples.len() {
                let wt = stack[level].iter().filter(|x| !x.is_zero()).count();
                dist[wt] += 1;
                return;
            }
            for m in &multiples[level] {
                let (head, tail) = stack.split_at_mut(level + 1);
                for ((out, &x), &y) in tail[0].iter_mut().zip(&head[level]).zip(m) {
                    *out = f.add(x, y);
                }
                walk(f, level + 1, multiples, stack, dist);
            }
        }
        walk(f, 0, &multiples, &mut stack, &mut dist);
        Ok(dist)
    }
}

fn guarantee(mode: SearchMode) -> Guarantee {
    match mode {
        SearchMode::Exhaustive => Guarantee::Exhaustive,
        SearchMode::Structured { .. } => Guarantee::Structured,
    }
}

/// Calls `visit` with each `w`-subset of `0..n` in lexicographic order.
pub fn for_each_subset<F: FnMut(&[usize])>(n: usize, w: usize, mut visit: F) {
    if w > n {
        return;
    }
    let mut idx: Vec<usize> = (0..w).collect();
    loop {
        visit(&idx);
        let mut i = w;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] < n - w + i {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..w {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// True when the two codes have the same row space after scaling the
/// columns of `c2` by `lambda`.
pub fn strong_isometry_check(
    c1: &CodeInstance,
    c2: &CodeInstance,
    lambda: &[Elem],
) -> Result<bool, CodeError> {
    if c1.n() != c2.n() {
        return Err(CodeError::LengthMismatch(c1.n(), c2.n()));
    }
    if lambda.len() != c1.n() {
        return Err(CodeError::LengthMismatch(c1.n(), lambda.len()));
    }
    if let Some(i) = lambda.iter().position(|x| x.is_zero()) {
        return Err(CodeError::ZeroScaling(i));
    }
    if c1.k() != c2.k() {
        return Ok(false);
    }
    let f = c1.field();
    let (r1, _) = c1.g.rref(f);
    let (r2, _) = c2.g.scale_columns(f, lambda).rref(f);
    Ok(r1 == r2)
}

/// Output of [`reduce_by_tangents`].
#[derive(Debug, Clone)]
pub struct Reduction {
    pub r: usize,
    pub d_prime: usize,
    /// The kept assignments `(P_i, a_i)`, `i <= r`.
    pub kept: Vec<(ProjPoint, usize)>,
    /// Product of the dropped tangent forms evaluated at `B`.
    pub lambda: Vec<Elem>,
    pub original: CodeInstance,
    pub reduced: CodeInstance,
    /// Strong isometry of the two codes under `lambda`.
    pub certificate: bool,
}

/// Divides out the tangent lines at the points whose multiplicity forces
/// them: `r` is the largest index with `a_r <= d - s + r` and the tangents
/// at `P_{r+1}, ..., P_s` are dropped, leaving degree `d - s + r`.
pub fn reduce_by_tangents(
    curve: &HermitianCurve,
    d: usize,
    assignments: &[(ProjPoint, usize)],
    b: &[ProjPoint],
) -> Result<Reduction, CodeError> {
    let f = curve.field();
    let s = assignments.len();
    let mults: Vec<usize> = assignments.iter().map(|&(_, a)| a).collect();
    if mults.iter().any(|&a| a == 0 || a > curve.q() + 1) || mults.windows(2).any(|w| w[0] > w[1]) {
        return Err(CodeError::BadMultiplicities);
    }
    let r = (1..=s)
        .rev()
        .find(|&i| (mults[i - 1] as i64) <= d as i64 - s as i64 + i as i64)
        .unwrap_or(0);
    let d_prime = d as i64 - s as i64 + r as i64;
    if d_prime <= 0 {
        return Err(CodeError::NonPositiveDegree(d_prime));
    }
    let d_prime = d_prime as usize;
    let kept = assignments[..r].to_vec();

    let e = build_scheme(curve, assignments)?;
    let original = build_code(curve, d, &e, b)?;
    let e_prime = build_scheme(curve, &kept)?;
    let reduced = build_code(curve, d_prime, &e_prime, b)?;

    let mut product = HomogeneousForm::new(0, vec![f.one()]).expect("constant");
    for (p, _) in &assignments[r..] {
        product = product.mul(f, &curve.tangent_form(p)?);
    }
    let lambda: Vec<Elem> = original.points().iter().map(|p| product.eval(f, p)).collect();
    let certificate = strong_isometry_check(&original, &reduced, &lambda)?;
    Ok(Reduction {
        r,
        d_prime,
        kept,
        lambda,
        original,
        reduced,
        certificate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plane::line_through;

    fn collinear_setup(q: u32) -> (HermitianCurve, Vec<ProjPoint>, HomogeneousForm) {
        let x = HermitianCurve::new(q).unwrap();
        let pts = x.rational_points();
        let r = line_through(x.field(), &pts[0], &pts[1]).unwrap();
        let on = x.points_on(&r);
        (x.clone(), on, r)
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(60, 4), 487_635);
        assert_eq!(binomial(5, 7), 0);
        assert_eq!(binomial(7, 0), 1);
    }

    #[test]
    fn subsets_in_lex_order() {
        let mut seen = Vec::new();
        for_each_subset(5, 3, |s| seen.push(s.to_vec()));
        assert_eq!(seen.len(), 10);
        assert_eq!(seen[0], vec![0, 1, 2]);
        assert_eq!(seen[9], vec![2, 3, 4]);
        assert!(seen.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn full_line_code() {
        let x = HermitianCurve::new(2).unwrap();
        let b = x.rational_points().to_vec();
        let c = build_code(&x, 1, &ZeroScheme::empty(), &b).unwrap();
        assert_eq!((c.n(), c.k()), (9, 3));
        // three collinear points are the smallest dependent sets
        let dd = c.dual_min_distance(&SearchOptions::exhaustive(4)).unwrap();
        assert_eq!(dd.weight, Some(3));
        let f = x.field();
        for s in &dd.supports {
            let l = line_through(f, &b[s[0]], &b[s[1]]).unwrap();
            assert!(l.eval(f, &b[s[2]]).is_zero());
        }
    }

    #[test]
    fn collinear_two_point_code() {
        let (x, on, _) = collinear_setup(4);
        let e = build_scheme(&x, &[(on[0], 2), (on[1], 2)]).unwrap();
        let b: Vec<_> = x
            .rational_points()
            .iter()
            .filter(|p| **p != on[0] && **p != on[1])
            .copied()
            .collect();
        let c = build_code(&x, 3, &e, &b).unwrap();
        assert_eq!((c.n(), c.k()), (63, 6));
        let mut opts = SearchOptions::exhaustive(3);
        opts.oracle_samples = 50;
        let dd = c.dual_min_distance(&opts).unwrap();
        assert_eq!(dd.weight, Some(3));
        let expected: Vec<usize> = on[2..].iter().map(|p| c.column_of(p).unwrap()).collect();
        assert_eq!(dd.supports, vec![expected.clone()]);
        let word = c.support_word(&expected, 1).unwrap();
        assert!(word.unique);
        assert_eq!(word.weight(), 3);
        assert_eq!(c.support_word(&expected[..2], 1), None);
        // a dependent 4-set whose kernel vector misses the extra column
        let extra = (0..c.n()).find(|i| !expected.contains(i)).unwrap();
        let mut four = expected.clone();
        four.push(extra);
        four.sort();
        assert!(c.columns_dependent(&four));
        assert_eq!(c.support_word(&four, 1), None);
    }

    #[test]
    fn build_errors() {
        let (x, on, _) = collinear_setup(2);
        let e = build_scheme(&x, &[(on[0], 2)]).unwrap();
        let all = x.rational_points().to_vec();
        assert!(matches!(build_code(&x, 1, &e, &all), Err(CodeError::PointInScheme(_))));
        assert!(matches!(
            build_code(&x, 2, &ZeroScheme::empty(), &all[..5]),
            Err(CodeError::LengthBound { .. })
        ));
        assert!(matches!(
            build_code(&x, 0, &ZeroScheme::empty(), &all),
            Err(CodeError::ZeroDegree)
        ));
        let f = x.field();
        let secant = line_through(f, &on[0], &on[1]).unwrap();
        let bad = ZeroScheme::new(
            f,
            vec![crate::scheme::FatPoint::new(f, on[0], 2, Some(&secant)).unwrap()],
        )
        .unwrap();
        assert!(matches!(build_code(&x, 1, &bad, &all[1..]), Err(CodeError::SchemeOffCurve(_))));
    }

    #[test]
    fn guard_refuses_large_searches() {
        let x = HermitianCurve::new(4).unwrap();
        let b = x.rational_points().to_vec();
        let c = build_code(&x, 1, &ZeroScheme::empty(), &b).unwrap();
        let err = c.dual_min_distance(&SearchOptions::exhaustive(8)).unwrap_err();
        assert!(matches!(err, CodeError::Guard { .. }));
    }

    #[test]
    fn isometry_and_weights() {
        let x = HermitianCurve::new(2).unwrap();
        let f = x.field();
        let b = x.rational_points()[1..].to_vec();
        let c = build_code(&x, 1, &ZeroScheme::empty(), &b).unwrap();
        let ones = vec![f.one(); c.n()];
        assert!(strong_isometry_check(&c, &c, &ones).unwrap());
        let mut zero = ones.clone();
        zero[2] = Elem::ZERO;
        assert!(matches!(strong_isometry_check(&c, &c, &zero), Err(CodeError::ZeroScaling(2))));
        let w = c.weight_distribution(WEIGHT_LIMIT).unwrap();
        assert_eq!(w[0], 1);
        assert_eq!(w.iter().sum::<u64>(), 64);
    }

    #[test]
    fn tangent_reduction_identity_and_drop() {
        let x = HermitianCurve::new(4).unwrap();
        let pts = x.rational_points();
        let b: Vec<_> = pts[2..].to_vec();
        let red = reduce_by_tangents(&x, 3, &[(pts[0], 1), (pts[1], 2)], &b).unwrap();
        assert_eq!((red.r, red.d_prime), (2, 3));
        assert!(red.lambda.iter().all(|&v| v == x.field().one()));
        assert!(red.certificate);
        let red = reduce_by_tangents(&x, 3, &[(pts[0], 3), (pts[1], 5)], &b).unwrap();
        assert_eq!((red.r, red.d_prime), (0, 1));
        assert!(red.certificate);
        assert!(matches!(
            reduce_by_tangents(&x, 1, &[(pts[0], 4), (pts[1], 5)], &b),
            Err(CodeError::NonPositiveDegree(_))
        ));
    }
}
