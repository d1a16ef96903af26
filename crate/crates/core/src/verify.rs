//! Theorem-level checks: build the code of each statement, compute its dual
//! distance and minimum-weight supports, and compare with the prediction.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::seq::index::sample;
use rand::RngExt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::code::{
    binomial, build_code, for_each_subset, reduce_by_tangents, CodeError, CodeInstance, SearchOptions, SUBSET_LIMIT,
};
use crate::curve::{CurveError, HermitianCurve};
use crate::plane::{line_through, HomogeneousForm, ProjPoint};
use crate::scheme::{build_scheme, SchemeError, ZeroScheme};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("case is for q = {case} but the verifier was built for q = {curve}")]
    WrongCurve { case: u32, curve: usize },
    #[error("point index {0} is out of range")]
    BadPoint(usize),
    #[error("unknown theorem key {0:?}")]
    UnknownTheorem(String),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error(transparent)]
    Curve(#[from] CurveError),
}

/// The statements the harness knows how to check. The serialized keys are
/// the ones accepted on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Theorem {
    /// Three non-collinear points, `B` = all other points: distance `d`.
    #[serde(rename = "u5")]
    ThreePoint,
    /// Three non-collinear points, the three lines deleted: distance `d+1`.
    #[serde(rename = "m1")]
    ThreePointPunctured,
    /// `s` collinear points: distance `d + 2 - s`.
    #[serde(rename = "u0.1")]
    Collinear,
    /// `s` collinear points with their line deleted: distance `d + 1`.
    #[serde(rename = "m3")]
    CollinearPunctured,
    /// Weight-`d` words on lines through the third point when `a1 = a2 = d`.
    #[serde(rename = "remark_m2")]
    DoubleFull,
    /// `h1(E, d) = 0` for staircase multiplicities.
    #[serde(rename = "lemma_u500")]
    Staircase,
    /// The residual inequality along the line of collinear points.
    #[serde(rename = "lemma_c1")]
    Residual,
    /// Reduction by tangent lines is a strong isometry.
    #[serde(rename = "lemma_u4")]
    TangentReduction,
}

impl Theorem {
    pub const ALL: [Theorem; 8] = [
        Theorem::ThreePoint,
        Theorem::ThreePointPunctured,
        Theorem::Collinear,
        Theorem::CollinearPunctured,
        Theorem::DoubleFull,
        Theorem::Staircase,
        Theorem::Residual,
        Theorem::TangentReduction,
    ];

    pub fn key(self) -> &'static str {
        match self {
            Theorem::ThreePoint => "u5",
            Theorem::ThreePointPunctured => "m1",
            Theorem::Collinear => "u0.1",
            Theorem::CollinearPunctured => "m3",
            Theorem::DoubleFull => "remark_m2",
            Theorem::Staircase => "lemma_u500",
            Theorem::Residual => "lemma_c1",
            Theorem::TangentReduction => "lemma_u4",
        }
    }

    fn needs_collinear(self) -> Option<bool> {
        match self {
            Theorem::ThreePoint | Theorem::ThreePointPunctured | Theorem::DoubleFull => Some(false),
            Theorem::Collinear | Theorem::CollinearPunctured | Theorem::Residual => Some(true),
            Theorem::Staircase | Theorem::TangentReduction => None,
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl FromStr for Theorem {
    type Err = VerifyError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Theorem::ALL
            .into_iter()
            .find(|t| t.key() == s)
            .ok_or_else(|| VerifyError::UnknownTheorem(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Exhaustive,
    Structured,
}

/// One instance of a statement. `points` are canonical curve-point
/// indices paired with `mults`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TheoremCase {
    pub theorem: Theorem,
    pub q: u32,
    pub d: usize,
    pub mults: Vec<usize>,
    pub points: Vec<usize>,
    /// The evaluation points `S` of a residual-inequality case.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub subset: Vec<usize>,
    pub mode: Mode,
    pub seed: u64,
}

impl TheoremCase {
    pub fn s(&self) -> usize {
        self.mults.len()
    }

    /// Short identifier used in tables.
    pub fn key(&self) -> String {
        let join = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(";");
        let mut k = format!(
            "{}/q{}/d{}/a{}/p{}",
            self.theorem,
            self.q,
            self.d,
            join(&self.mults),
            join(&self.points)
        );
        if !self.subset.is_empty() {
            k.push_str(&format!("/S{}", join(&self.subset)));
        }
        k
    }
}

/// Knobs for the randomized and capped parts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    /// Random subsets per size below the predicted distance (structured mode).
    pub random_subsets: usize,
    /// Random subsets per weight cross-checked against the cohomology oracle.
    pub oracle_samples: usize,
    /// Point configurations per sweep cell before sampling kicks in.
    pub config_cap: usize,
    /// Weight distributions are compared when `q^(2k)` is at most this.
    pub weight_limit: u128,
    pub subset_limit: u128,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            random_subsets: 1_000_000,
            oracle_samples: 1000,
            config_cap: 100_000,
            weight_limit: 1_000_000,
            subset_limit: SUBSET_LIMIT,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub case: TheoremCase,
    pub status: Status,
    /// The violated hypothesis of a skipped case.
    pub skip_reason: Option<String>,
    pub collinear: bool,
    pub n_expected: Option<usize>,
    pub n_observed: Option<usize>,
    pub k_expected: Option<usize>,
    pub k_observed: Option<usize>,
    pub distance_expected: Option<usize>,
    pub distance_observed: Option<usize>,
    pub census_expected: Option<u64>,
    pub census_observed: Option<u64>,
    /// `exhaustive` or `structured+randomized`.
    pub guarantee: Option<String>,
    /// Point configurations folded into this report.
    pub configurations: u64,
    pub failures: Vec<String>,
    pub notes: Vec<String>,
    pub seconds: f64,
}

impl VerificationReport {
    fn new(case: &TheoremCase, collinear: bool) -> Self {
        VerificationReport {
            case: case.clone(),
            status: Status::Pass,
            skip_reason: None,
            collinear,
            n_expected: None,
            n_observed: None,
            k_expected: None,
            k_observed: None,
            distance_expected: None,
            distance_observed: None,
            census_expected: None,
            census_observed: None,
            guarantee: None,
            configurations: 1,
            failures: Vec::new(),
            notes: Vec::new(),
            seconds: 0.0,
        }
    }

    fn fail(&mut self, msg: impl Into<String>) {
        self.failures.push(msg.into());
    }

    fn expect<T: PartialEq + fmt::Debug>(&mut self, what: &str, expected: T, observed: T) {
        if expected != observed {
            self.fail(format!("{what}: expected {expected:?}, observed {observed:?}"));
        }
    }

    fn finish(mut self, start: Instant) -> Self {
        self.seconds = start.elapsed().as_secs_f64();
        if self.status != Status::Skip {
            self.status = if self.failures.is_empty() { Status::Pass } else { Status::Fail };
        }
        self
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    pub const CSV_HEADER: &'static str = "case,status,n_expected,n_observed,k_expected,k_observed,\
distance_expected,distance_observed,census_expected,census_observed,guarantee,seconds";

    pub fn csv_row(&self) -> String {
        fn o<T: ToString>(v: &Option<T>) -> String {
            v.as_ref().map(T::to_string).unwrap_or_default()
        }
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{:.3}",
            self.case.key(),
            self.status,
            o(&self.n_expected),
            o(&self.n_observed),
            o(&self.k_expected),
            o(&self.k_observed),
            o(&self.distance_expected),
            o(&self.distance_observed),
            o(&self.census_expected),
            o(&self.census_observed),
            self.guarantee.as_deref().unwrap_or(""),
            self.seconds
        )
    }
}

/// Writes reports as CSV with a header row.
pub fn reports_csv(reports: &[VerificationReport]) -> String {
    let mut out = String::from(VerificationReport::CSV_HEADER);
    out.push('\n');
    for r in reports {
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    out
}

/// Checks the hypotheses that only involve the integers. Returns the first
/// violated predicate.
pub fn numeric_hypothesis(theorem: Theorem, q: usize, d: usize, a: &[usize]) -> Result<(), String> {
    fn need(ok: bool, what: &str) -> Result<(), String> {
        if ok {
            Ok(())
        } else {
            Err(what.to_string())
        }
    }
    let s = a.len();
    let sum: usize = a.iter().sum();
    let (d, q) = (d as i64, q as i64);
    let sum = sum as i64;
    let collinear_box = |extra: &dyn Fn() -> Result<(), String>| -> Result<(), String> {
        need(s >= 2, "2 <= s")?;
        need((s as i64) < d, "s <= d-1")?;
        need(d - 1 <= q - 2, "d-1 <= q-2")?;
        need(
            a.iter().enumerate().all(|(i, &x)| x > 0 && x as i64 <= d - i as i64),
            "0 < a_i <= d+1-i",
        )?;
        extra()
    };
    match theorem {
        Theorem::ThreePoint | Theorem::ThreePointPunctured | Theorem::DoubleFull => {
            need(s == 3, "s = 3")?;
            need(d >= 5, "d >= 5")?;
            need(d < q, "d <= q-1")?;
            need(a.iter().all(|&x| x >= 1 && x as i64 <= d), "1 <= a_i <= d")?;
            match theorem {
                Theorem::ThreePoint => {
                    need(sum <= 3 * d - 5, "a_1+a_2+a_3 <= 3d-5")?;
                    need(a.iter().filter(|&&x| x as i64 == d).count() <= 1, "a_i = d for at most one index")
                }
                Theorem::ThreePointPunctured => {
                    need(sum <= 3 * d - 5, "a_1+a_2+a_3 <= 3d-5")?;
                    need((a[0] + a[1]) as i64 <= 2 * d - 2, "a_1+a_2 <= 2d-2")
                }
                _ => {
                    need(d >= 6, "d >= 6")?;
                    need(a[0] as i64 == d && a[1] as i64 == d, "a_1 = a_2 = d")?;
                    need(a[2] as i64 <= d - 5, "1 <= a_3 <= d-5")
                }
            }
        }
        Theorem::Collinear => collinear_box(&|| need(sum <= 3 * d - 7 + s as i64, "a_1+...+a_s <= 3d-7+s")),
        Theorem::CollinearPunctured => collinear_box(&|| {
            need(sum <= 3 * d - 6, "a_1+...+a_s <= 3d-6")?;
            let top: Vec<i64> = {
                let mut v: Vec<i64> = a.iter().map(|&x| x as i64).collect();
                v.sort_unstable_by(|x, y| y.cmp(x));
                v
            };
            need(top[0] + top[1] <= 2 * d - 2, "a_i+a_j <= 2d-2 for i != j")
        }),
        Theorem::Residual => {
            need(s >= 2, "2 <= s")?;
            need((s as i64) < d, "s <= d-1")?;
            need(d - 1 <= q - 2, "d-1 <= q-2")?;
            need(a.iter().all(|&x| x >= 1 && x as i64 <= q + 1), "1 <= a_i <= q+1")
        }
        Theorem::Staircase => {
            need(s >= 1, "s >= 1")?;
            need(d >= s as i64, "d >= s")?;
            need(
                a.iter().enumerate().all(|(i, &b)| b as i64 <= d + 1 - i as i64 && b as i64 <= q + 1),
                "0 <= b_i <= min(d+2-i, q+1)",
            )
        }
        Theorem::TangentReduction => {
            need(s >= 1, "s >= 1")?;
            need(d >= 1, "d > 0")?;
            need(a.iter().all(|&x| x >= 1 && x as i64 <= q + 1), "a_i in 1..=q+1")?;
            need(a.windows(2).all(|w| w[0] <= w[1]), "a_1 <= ... <= a_s")?;
            need(reduced_degree(d as usize, a) > 0, "d' > 0")
        }
    }
}

/// `d' = d - s + r` with `r` the largest `i` such that `a_i <= d - s + i`.
pub fn reduced_degree(d: usize, a: &[usize]) -> i64 {
    let (d, s) = (d as i64, a.len() as i64);
    let r = (1..=s).rev().find(|&i| a[i as usize - 1] as i64 <= d - s + i).unwrap_or(0);
    d - s + r
}

/// Lines meeting the curve in `q + 1` points, as sorted curve indices, in
/// order of their first pair.
pub fn secant_lines(curve: &HermitianCurve) -> Vec<(HomogeneousForm, Vec<usize>)> {
    let f = curve.field();
    let pts = curve.rational_points();
    let n = pts.len();
    let mut covered = vec![false; n * n];
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if covered[i * n + j] {
                continue;
            }
            let l = line_through(f, &pts[i], &pts[j]).expect("distinct points");
            let on: Vec<usize> = curve
                .points_on(&l)
                .iter()
                .map(|p| curve.index_of(p).expect("on curve"))
                .collect();
            for &a in &on {
                for &b in &on {
                    covered[a * n + b] = true;
                }
            }
            out.push((l, on));
        }
    }
    out
}

fn collinear(curve: &HermitianCurve, idx: &[usize]) -> bool {
    if idx.len() < 3 {
        return true;
    }
    let f = curve.field();
    let pts = curve.rational_points();
    let l = line_through(f, &pts[idx[0]], &pts[idx[1]]).expect("distinct points");
    idx[2..].iter().all(|&i| l.eval(f, &pts[i]).is_zero())
}

/// The first non-collinear triple or the first `s` points of the first
/// secant, in canonical order.
pub fn default_points(curve: &HermitianCurve, theorem: Theorem, s: usize) -> Vec<usize> {
    match theorem.needs_collinear() {
        Some(true) => secant_lines(curve)[0].1[..s].to_vec(),
        Some(false) => {
            let third = (2..curve.rational_points().len())
                .find(|&k| !collinear(curve, &[0, 1, k]))
                .expect("the curve is not a line");
            vec![0, 1, third]
        }
        None => (0..s).collect(),
    }
}

/// Runs the checks of a [`TheoremCase`] on one curve.
pub struct Verifier {
    curve: HermitianCurve,
    opts: VerifyOptions,
}

impl Verifier {
    pub fn new(q: u32, opts: VerifyOptions) -> Result<Self, VerifyError> {
        Ok(Verifier {
            curve: HermitianCurve::new(q)?,
            opts,
        })
    }

    pub fn curve(&self) -> &HermitianCurve {
        &self.curve
    }

    pub fn options(&self) -> &VerifyOptions {
        &self.opts
    }

    /// A case at the default point configuration.
    pub fn default_case(&self, theorem: Theorem, d: usize, mults: Vec<usize>, mode: Mode, seed: u64) -> TheoremCase {
        let points = default_points(&self.curve, theorem, mults.len());
        TheoremCase {
            theorem,
            q: self.curve.q() as u32,
            d,
            mults,
            points,
            subset: Vec::new(),
            mode,
            seed,
        }
    }

    fn point(&self, i: usize) -> Result<ProjPoint, VerifyError> {
        self.curve.rational_points().get(i).copied().ok_or(VerifyError::BadPoint(i))
    }

    fn hypothesis(&self, case: &TheoremCase) -> Result<(), String> {
        if case.points.len() != case.mults.len() {
            return Err("one point per multiplicity".into());
        }
        let distinct: HashSet<_> = case.points.iter().collect();
        if distinct.len() != case.points.len() {
            return Err("P_1, ..., P_s distinct".into());
        }
        numeric_hypothesis(case.theorem, self.curve.q(), case.d, &case.mults)?;
        match case.theorem.needs_collinear() {
            Some(true) if !collinear(&self.curve, &case.points) => Err("P_1, ..., P_s collinear".into()),
            Some(false) if collinear(&self.curve, &case.points) => Err("P_1, P_2, P_3 not collinear".into()),
            _ => Ok(()),
        }
    }

    /// Checks one case. Hypothesis violations give a `SKIP` report.
    pub fn verify(&self, case: &TheoremCase) -> Result<VerificationReport, VerifyError> {
        let start = Instant::now();
        if case.q as usize != self.curve.q() {
            return Err(VerifyError::WrongCurve {
                case: case.q,
                curve: self.curve.q(),
            });
        }
        for &i in case.points.iter().chain(&case.subset) {
            self.point(i)?;
        }
        let mut report = VerificationReport::new(case, collinear(&self.curve, &case.points));
        if let Err(why) = self.hypothesis(case) {
            report.status = Status::Skip;
            report.skip_reason = Some(why);
            return Ok(report.finish(start));
        }
        match case.theorem {
            Theorem::ThreePoint
            | Theorem::ThreePointPunctured
            | Theorem::Collinear
            | Theorem::CollinearPunctured => self.distance_case(case, &mut report)?,
            Theorem::DoubleFull => self.double_full(case, &mut report)?,
            Theorem::Staircase => self.staircase(case, &mut report)?,
            Theorem::Residual => self.residual(case, &mut report)?,
            Theorem::TangentReduction => self.tangent_reduction(case, &mut report)?,
        }
        Ok(report.finish(start))
    }

    fn assignments(&self, case: &TheoremCase) -> Vec<(ProjPoint, usize)> {
        case.points
            .iter()
            .zip(&case.mults)
            .filter(|(_, &a)| a > 0)
            .map(|(&i, &a)| (self.curve.rational_points()[i], a))
            .collect()
    }

    fn curve_indices_on(&self, l: &HomogeneousForm) -> Vec<usize> {
        self.curve
            .points_on(l)
            .iter()
            .map(|p| self.curve.index_of(p).expect("on curve"))
            .collect()
    }

    /// Lines through `p` other than the tangent, each with the curve points
    /// it contains.
    fn lines_through(&self, p: usize) -> Vec<(HomogeneousForm, Vec<usize>)> {
        let f = self.curve.field();
        let pts = self.curve.rational_points();
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for j in 0..pts.len() {
            if j == p {
                continue;
            }
            let l = line_through(f, &pts[p], &pts[j]).expect("distinct points");
            if seen.insert(l.clone()) {
                let on = self.curve_indices_on(&l);
                out.push((l, on));
            }
        }
        out
    }

    fn distance_case(&self, case: &TheoremCase, report: &mut VerificationReport) -> Result<(), VerifyError> {
        let f = self.curve.field();
        let q = self.curve.q();
        let (d, s) = (case.d, case.s());
        let pts = self.curve.rational_points();
        let e = build_scheme(&self.curve, &self.assignments(case))?;
        let line = |i: usize, j: usize| line_through(f, &pts[case.points[i]], &pts[case.points[j]]).expect("distinct");

        // deleted curve points
        let deleted: BTreeSet<usize> = match case.theorem {
            Theorem::ThreePointPunctured => [(1, 2), (0, 2), (0, 1)]
                .iter()
                .flat_map(|&(i, j)| self.curve_indices_on(&line(i, j)))
                .collect(),
            Theorem::CollinearPunctured => self.curve_indices_on(&line(0, 1)).into_iter().collect(),
            _ => case.points.iter().copied().collect(),
        };
        let b: Vec<ProjPoint> = (0..pts.len()).filter(|i| !deleted.contains(i)).map(|i| pts[i]).collect();
        let code = build_code(&self.curve, d, &e, &b)?;
        let column = |i: usize| code.column_of(&pts[i]);

        let q3 = q * q * q;
        let (n_expected, w0) = match case.theorem {
            Theorem::ThreePoint => (q3 - 2, d),
            Theorem::ThreePointPunctured => (q3 + 1 - 3 * q, d + 1),
            Theorem::Collinear => (q3 + 1 - s, d + 2 - s),
            _ => (q3 - q, d + 1),
        };
        let k_expected = crate::plane::monomial_count(d) - case.mults.iter().sum::<usize>();
        report.n_expected = Some(n_expected);
        report.n_observed = Some(code.n());
        report.k_expected = Some(k_expected);
        report.k_observed = Some(code.k());
        report.distance_expected = Some(w0);
        report.expect("n", n_expected, code.n());
        report.expect("k", k_expected, code.k());

        // the predicted minimum-weight supports, as column sets
        let mut carriers: Vec<Vec<usize>> = Vec::new();
        match case.theorem {
            Theorem::ThreePoint => {
                for (i, j) in [(1, 2), (0, 2), (0, 1)] {
                    carriers.push(self.curve_indices_on(&line(i, j)));
                }
            }
            Theorem::Collinear => carriers.push(self.curve_indices_on(&line(0, 1))),
            _ => {
                let excluded: HashSet<HomogeneousForm> = match case.theorem {
                    Theorem::ThreePointPunctured => [(1, 2), (0, 2), (0, 1)].iter().map(|&(i, j)| line(i, j)).collect(),
                    _ => [line(0, 1)].into_iter().collect(),
                };
                for &p in &case.points {
                    for (l, on) in self.lines_through(p) {
                        if !excluded.contains(&l) {
                            carriers.push(on);
                        }
                    }
                }
            }
        }
        let mut predicted = BTreeSet::new();
        for on in &carriers {
            let cols: Vec<usize> = on.iter().filter_map(|&i| column(i)).collect();
            for_each_subset(cols.len(), w0, |pick| {
                predicted.insert(pick.iter().map(|&i| cols[i]).collect::<Vec<usize>>());
            });
        }
        let formula = match case.theorem {
            Theorem::ThreePoint => 3 * binomial(q - 1, d),
            Theorem::ThreePointPunctured => 3 * (q * q - 2) as u128 * binomial(q, d + 1),
            Theorem::Collinear => binomial(q + 1 - s, w0),
            _ => (s * (q * q - 1)) as u128 * binomial(q, d + 1),
        } as u64;
        report.census_expected = Some(formula);
        if predicted.len() as u64 != formula {
            report.notes.push(format!(
                "the geometric construction gives {} candidate supports, the counting formula {}",
                predicted.len(),
                formula
            ));
        }

        // existence, uniqueness
        let missing: Vec<&Vec<usize>> = predicted
            .par_iter()
            .filter(|sup| !matches!(code.support_word(sup, case.seed), Some(w) if w.unique))
            .collect();
        if !missing.is_empty() {
            report.fail(format!(
                "{} predicted supports carry no unique word, first {:?}",
                missing.len(),
                self.to_points(&code, missing[0])
            ));
        }

        // search
        let (observed_w, found) = match case.mode {
            Mode::Exhaustive => {
                let mut opts = SearchOptions::exhaustive(w0);
                opts.seed = case.seed;
                opts.subset_limit = self.opts.subset_limit;
                opts.oracle_samples = self.opts.oracle_samples;
                let dd = code.dual_min_distance(&opts)?;
                report.guarantee = Some("exhaustive".into());
                (dd.weight, dd.supports.into_iter().collect::<BTreeSet<_>>())
            }
            Mode::Structured => {
                report.guarantee = Some("structured+randomized".into());
                let flagged = code
                    .line_subsets(1)
                    .iter()
                    .filter(|(l, on)| e.intersection_degree(f, l) + on.len() >= d + 2)
                    .count();
                report.notes.push(format!(
                    "{flagged} lines with deg(L∩E)+|L∩B| >= d+2; every line-confined subset tested, {} random subsets per size below {w0}, seed {}",
                    self.opts.random_subsets, case.seed
                ));
                self.structured_search(&code, w0, case.seed)?
            }
        };
        report.distance_observed = observed_w;
        report.census_observed = Some(found.len() as u64);
        report.expect("dual distance", Some(w0), observed_w);
        if observed_w == Some(w0) {
            let extra: Vec<&Vec<usize>> = found.difference(&predicted).collect();
            let unseen = predicted.difference(&found).count();
            if unseen > 0 {
                report.fail(format!("{unseen} predicted supports not found by the search"));
            }
            let complete = match case.theorem {
                Theorem::ThreePointPunctured => d >= 6 && case.mults.iter().sum::<usize>() + 6 <= 3 * d,
                _ => true,
            };
            if !extra.is_empty() {
                let msg = format!(
                    "{} supports outside the prediction, first {:?}",
                    extra.len(),
                    self.to_points(&code, extra[0])
                );
                if complete {
                    report.fail(msg);
                } else {
                    report.notes.push(msg);
                }
            }
            report.expect("support census", formula, found.len() as u64);
            let bad = found
                .par_iter()
                .filter(|sup| !self.support_conditions(&code, sup))
                .count();
            if bad > 0 {
                report.fail(format!("{bad} supports violate the h1 conditions"));
            }
        }
        Ok(())
    }

    /// `h1(E∪S) > h1(E)` and `h1(E∪S') < h1(E∪S)` for each maximal `S' ⊊ S`
    /// (enough by monotonicity).
    fn support_conditions(&self, code: &CodeInstance, sup: &[usize]) -> bool {
        let f = self.curve.field();
        let h1 = |cols: &[usize]| {
            let pts: Vec<ProjPoint> = cols.iter().map(|&c| code.points()[c]).collect();
            let z = code
                .scheme()
                .union(f, &ZeroScheme::reduced(f, &pts).expect("distinct"))
                .expect("B avoids E");
            z.cohomology(f, code.d()).h1
        };
        let full = h1(sup);
        full > code.h1_e()
            && (0..sup.len()).all(|i| {
                let mut less = sup.to_vec();
                less.remove(i);
                h1(&less) < full
            })
    }

    fn to_points(&self, code: &CodeInstance, cols: &[usize]) -> Vec<String> {
        cols.iter().map(|&c| code.points()[c].display(self.curve.field())).collect()
    }

    /// Every line-confined subset of each size up to `w0`, plus random
    /// subsets below `w0`. Returns the first weight with a dependency.
    fn structured_search(
        &self,
        code: &CodeInstance,
        w0: usize,
        seed: u64,
    ) -> Result<(Option<usize>, BTreeSet<Vec<usize>>), VerifyError> {
        let n = code.n();
        let lines = code.line_subsets(2);
        for w in 1..=w0.min(n) {
            let mut found: BTreeSet<Vec<usize>> = if w == 1 {
                (0..n).filter(|&c| code.columns_dependent(&[c])).map(|c| vec![c]).collect()
            } else {
                lines
                    .par_iter()
                    .filter(|(_, on)| on.len() >= w)
                    .flat_map_iter(|(_, on)| {
                        let mut hits = Vec::new();
                        for_each_subset(on.len(), w, |pick| {
                            let s: Vec<usize> = pick.iter().map(|&i| on[i]).collect();
                            if code.columns_dependent(&s) {
                                hits.push(s);
                            }
                        });
                        hits
                    })
                    .collect()
            };
            if w < w0 && w > 1 {
                found.extend(self.random_dependent(code, w, self.opts.random_subsets, seed ^ w as u64));
            }
            let mut rng = crate::rng(seed.wrapping_add(w as u64));
            for _ in 0..self.opts.oracle_samples {
                let mut s = sample(&mut rng, n, w).into_vec();
                s.sort_unstable();
                if code.columns_dependent(&s) != code.oracle_dependent(&s) {
                    return Err(CodeError::OracleMismatch(s).into());
                }
            }
            if let Some(s) = found.iter().find(|s| !code.oracle_dependent(s)) {
                return Err(CodeError::OracleMismatch(s.clone()).into());
            }
            if !found.is_empty() {
                return Ok((Some(w), found));
            }
        }
        Ok((None, BTreeSet::new()))
    }

    fn random_dependent(&self, code: &CodeInstance, w: usize, count: usize, seed: u64) -> Vec<Vec<usize>> {
        const CHUNK: usize = 10_000;
        let n = code.n();
        (0..count.div_ceil(CHUNK))
            .into_par_iter()
            .flat_map_iter(|chunk| {
                let mut rng = crate::rng(seed.wrapping_mul(0x9e37_79b9).wrapping_add(chunk as u64));
                let len = CHUNK.min(count - chunk * CHUNK);
                let mut hits = Vec::new();
                for _ in 0..len {
                    let mut s = sample(&mut rng, n, w).into_vec();
                    s.sort_unstable();
                    if code.columns_dependent(&s) {
                        hits.push(s);
                    }
                }
                hits
            })
            .collect()
    }

    fn double_full(&self, case: &TheoremCase, report: &mut VerificationReport) -> Result<(), VerifyError> {
        let d = case.d;
        let pts = self.curve.rational_points();
        let e = build_scheme(&self.curve, &self.assignments(case))?;
        let b: Vec<ProjPoint> = (0..pts.len())
            .filter(|i| !case.points.contains(i))
            .map(|i| pts[i])
            .collect();
        let code = build_code(&self.curve, d, &e, &b)?;
        let q3 = self.curve.q().pow(3);
        report.n_expected = Some(q3 - 2);
        report.n_observed = Some(code.n());
        report.expect("n", q3 - 2, code.n());
        let k_expected = crate::plane::monomial_count(d) - case.mults.iter().sum::<usize>();
        report.k_expected = Some(k_expected);
        report.k_observed = Some(code.k());
        report.expect("k", k_expected, code.k());
        report.distance_expected = Some(d);
        report.guarantee = Some("exhaustive".into());

        let tangent = self.curve.tangent_form(&pts[case.points[2]])?;
        let mut supports = Vec::new();
        let mut lines = 0;
        for (l, on) in self.lines_through(case.points[2]) {
            if l == tangent {
                continue;
            }
            lines += 1;
            let cols: Vec<usize> = on.iter().filter_map(|&i| code.column_of(&pts[i])).collect();
            for_each_subset(cols.len(), d, |pick| supports.push(pick.iter().map(|&i| cols[i]).collect::<Vec<_>>()));
        }
        report.notes.push(format!("{lines} lines through P_3 other than its tangent"));
        report.census_expected = Some(supports.len() as u64);
        let f = self.curve.field();
        // None: S supports a weight-d word; Some(T): the kernel on S lives on T ⊊ S
        let outcome: Vec<Option<Vec<usize>>> = supports
            .par_iter()
            .map(|sup| match code.support_word(sup, case.seed) {
                Some(w) if w.weight() == d => None,
                _ => {
                    let kernel = code.generator().select_columns(sup).kernel(f);
                    let inner = kernel
                        .first()
                        .map(|v| sup.iter().zip(v).filter(|(_, c)| !c.is_zero()).map(|(&i, _)| i).collect())
                        .unwrap_or_default();
                    Some(inner)
                }
            })
            .collect();
        let ok = outcome.iter().filter(|o| o.is_none()).count();
        let mut smaller: Vec<Vec<usize>> = outcome.into_iter().flatten().filter(|t| !t.is_empty()).collect();
        smaller.sort();
        smaller.dedup();
        report.census_observed = Some(ok as u64);
        let min_seen = smaller.iter().map(Vec::len).min();
        report.distance_observed = match min_seen {
            Some(w) => Some(w),
            None => (ok > 0).then_some(d),
        };
        if let Some(w) = min_seen {
            let confirmed = smaller
                .iter()
                .filter(|t| code.oracle_dependent(t) && t.iter().all(|&c| {
                    let rest: Vec<usize> = t.iter().copied().filter(|&x| x != c).collect();
                    !code.oracle_dependent(&rest)
                }))
                .count();
            report.fail(format!(
                "{} dual words of weight {w} supported on lines through P_3 ({confirmed} confirmed minimal by h1)",
                smaller.len()
            ));
            report.notes.push(format!(
                "{} of {} d-subsets contain one of them and support no weight-d word",
                supports.len() - ok,
                supports.len()
            ));
        }
        report.expect("supports with a weight-d word", supports.len(), ok);
        Ok(())
    }

    fn staircase(&self, case: &TheoremCase, report: &mut VerificationReport) -> Result<(), VerifyError> {
        let f = self.curve.field();
        let e = build_scheme(&self.curve, &self.assignments(case))?;
        let h1 = e.cohomology(f, case.d).h1;
        report.expect("h1(E, d)", 0, h1);
        Ok(())
    }

    fn residual(&self, case: &TheoremCase, report: &mut VerificationReport) -> Result<(), VerifyError> {
        let f = self.curve.field();
        let pts = self.curve.rational_points();
        if case.subset.iter().any(|i| case.points.contains(i)) {
            report.status = Status::Skip;
            report.skip_reason = Some("S ⊆ B".into());
            return Ok(());
        }
        let r = line_through(f, &pts[case.points[0]], &pts[case.points[1]]).expect("distinct");
        let e = build_scheme(&self.curve, &self.assignments(case))?;
        let s_pts: Vec<ProjPoint> = case.subset.iter().map(|&i| pts[i]).collect();
        let z = e.union(f, &ZeroScheme::reduced(f, &s_pts)?)?;
        let residual = z.residual_by_line(f, &r)?;

        // Res_R(E ∪ S) = E' ∪ (S \ R) with E' = sum (a_i - 1) P_i
        let lowered: Vec<(ProjPoint, usize)> = self
            .assignments(case)
            .into_iter()
            .filter(|&(_, a)| a > 1)
            .map(|(p, a)| (p, a - 1))
            .collect();
        let off: Vec<ProjPoint> = s_pts.iter().filter(|p| !r.eval(f, p).is_zero()).copied().collect();
        let expected = build_scheme(&self.curve, &lowered)?.union(f, &ZeroScheme::reduced(f, &off)?)?;
        let sorted = |z: &ZeroScheme| {
            let mut v: Vec<(ProjPoint, usize)> = z.components().iter().map(|c| (*c.point(), c.mult())).collect();
            v.sort();
            v
        };
        report.expect("residual scheme", sorted(&expected), sorted(&residual));

        let on_r = s_pts.len() - off.len();
        let t_min = on_r + case.s() - 1;
        let top = z.degree() + 1;
        let mut checked = 0;
        for t in t_min.max(1)..=top {
            let lhs = z.cohomology(f, t).h1;
            let rhs = residual.cohomology(f, t - 1).h1;
            checked += 1;
            if lhs > rhs {
                report.fail(format!("t = {t}: h1(E∪S, t) = {lhs} > h1(Res, t-1) = {rhs}"));
            }
        }
        report.notes.push(format!("t from {} to {top}: {checked} values", t_min.max(1)));
        Ok(())
    }

    fn tangent_reduction(&self, case: &TheoremCase, report: &mut VerificationReport) -> Result<(), VerifyError> {
        let pts = self.curve.rational_points();
        let b: Vec<ProjPoint> = (0..pts.len())
            .filter(|i| !case.points.contains(i))
            .map(|i| pts[i])
            .collect();
        let red = reduce_by_tangents(&self.curve, case.d, &self.assignments(case), &b)?;
        report.n_observed = Some(red.original.n());
        report.k_expected = Some(red.original.k());
        report.k_observed = Some(red.reduced.k());
        report.guarantee = Some("exhaustive".into());
        report.notes.push(format!("r = {}, d' = {}", red.r, red.d_prime));
        if !red.certificate {
            report.fail("codes are not strongly isometric under the tangent scaling");
        }
        report.expect("k", red.original.k(), red.reduced.k());
        match (
            red.original.weight_distribution(self.opts.weight_limit),
            red.reduced.weight_distribution(self.opts.weight_limit),
        ) {
            (Ok(a), Ok(b)) => report.expect("weight distribution", a, b),
            (Err(CodeError::TooManyWords(..)), _) | (_, Err(CodeError::TooManyWords(..))) => {
                report.notes.push("weight distributions above the limit, not compared".into())
            }
            (Err(e), _) | (_, Err(e)) => return Err(e.into()),
        }
        Ok(())
    }

    /// The weight-`d` words on the lines through `P_3` for `a = (d, d, a3)`.
    pub fn verify_remark_m2(&self, d: usize, a3: usize, seed: u64) -> Result<VerificationReport, VerifyError> {
        let case = self.default_case(Theorem::DoubleFull, d, vec![d, d, a3], Mode::Exhaustive, seed);
        self.verify(&case)
    }

    /// Every case of the hypothesis box of `theorem`, in a fixed order.
    /// Point configurations beyond `config_cap` per cell are sampled with
    /// `seed`.
    pub fn sweep(&self, theorem: Theorem, mode: Mode, seed: u64) -> Result<Vec<VerificationReport>, VerifyError> {
        let cases = self.sweep_cases(theorem, mode, seed);
        if theorem == Theorem::Staircase {
            return self.staircase_sweep(cases);
        }
        cases.par_iter().map(|c| self.verify(c)).collect()
    }

    /// The cases [`Verifier::sweep`] runs.
    pub fn sweep_cases(&self, theorem: Theorem, mode: Mode, seed: u64) -> Vec<TheoremCase> {
        let q = self.curve.q();
        let mut cases = Vec::new();
        let d_range: Vec<usize> = match theorem {
            Theorem::TangentReduction => (1..=q + 1).collect(),
            _ => (1..=q.saturating_sub(1)).collect(),
        };
        let s_range = |d: usize| -> Vec<usize> {
            match theorem {
                Theorem::ThreePoint | Theorem::ThreePointPunctured | Theorem::DoubleFull => vec![3],
                Theorem::Collinear | Theorem::CollinearPunctured | Theorem::Residual => (2..d).collect(),
                Theorem::Staircase => (1..=d).collect(),
                Theorem::TangentReduction => (1..=3).collect(),
            }
        };
        for d in d_range {
            for s in s_range(d) {
                let boxes = self.mult_boxes(theorem, d, s);
                if boxes.is_empty() {
                    continue;
                }
                let configs = self.configurations(theorem, s, seed ^ ((d as u64) << 32 | s as u64));
                for a in &boxes {
                    for pts in &configs {
                        let mut case = TheoremCase {
                            theorem,
                            q: q as u32,
                            d,
                            mults: a.clone(),
                            points: pts.clone(),
                            subset: Vec::new(),
                            mode,
                            seed,
                        };
                        if theorem == Theorem::Residual {
                            case.subset = self.random_subset(&case, seed);
                        }
                        cases.push(case);
                    }
                }
            }
        }
        cases
    }

    fn mult_boxes(&self, theorem: Theorem, d: usize, s: usize) -> Vec<Vec<usize>> {
        let q = self.curve.q();
        let (lo, hi) = match theorem {
            Theorem::Staircase => (0, (d + 1).min(q + 1)),
            Theorem::TangentReduction | Theorem::Residual => (1, q + 1),
            _ => (1, d.max(1)),
        };
        let mut out = Vec::new();
        let mut a = vec![lo; s];
        loop {
            if numeric_hypothesis(theorem, q, d, &a).is_ok() {
                out.push(a.clone());
            }
            let mut i = s;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if a[i] < hi {
                    a[i] += 1;
                    break;
                }
                a[i] = lo;
            }
        }
    }

    /// Ordered point tuples for a sweep cell, capped by sampling.
    fn configurations(&self, theorem: Theorem, s: usize, seed: u64) -> Vec<Vec<usize>> {
        let cap = self.opts.config_cap.max(1);
        let n = self.curve.rational_points().len();
        let want = theorem.needs_collinear();
        if want == Some(true) {
            let mut all = Vec::new();
            for (_, on) in secant_lines(&self.curve) {
                permutations(&on, s, &mut all);
            }
            return cap_sample(all, cap, seed);
        }
        let total = (0..s).fold(1u128, |acc, i| acc * (n - i) as u128);
        if total <= 4 * cap as u128 {
            let mut all = Vec::new();
            permutations(&(0..n).collect::<Vec<_>>(), s, &mut all);
            all.retain(|t| want.is_none() || !collinear(&self.curve, t));
            return cap_sample(all, cap, seed);
        }
        let mut rng = crate::rng(seed);
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        while out.len() < cap {
            let t = sample(&mut rng, n, s).into_vec();
            if want == Some(false) && collinear(&self.curve, &t) {
                continue;
            }
            if seen.insert(t.clone()) {
                out.push(t);
            }
        }
        out.sort();
        out
    }

    /// A random `S ⊆ B` mixing points of `R` and points off it.
    pub fn random_subset(&self, case: &TheoremCase, seed: u64) -> Vec<usize> {
        let f = self.curve.field();
        let pts = self.curve.rational_points();
        let r = line_through(f, &pts[case.points[0]], &pts[case.points[1]]).expect("distinct");
        let mut rng = crate::rng(seed ^ hash_case(case));
        let free: Vec<usize> = (0..pts.len()).filter(|i| !case.points.contains(i)).collect();
        let (on, off): (Vec<usize>, Vec<usize>) = free.into_iter().partition(|&i| r.eval(f, &pts[i]).is_zero());
        let k_on = rng.random_range(0..=on.len());
        let k_off = rng.random_range(0..=(2 * case.d).min(off.len()));
        let mut s: Vec<usize> = sample(&mut rng, on.len(), k_on).into_iter().map(|i| on[i]).collect();
        s.extend(sample(&mut rng, off.len(), k_off).into_iter().map(|i| off[i]));
        s.sort_unstable();
        s
    }

    /// Staircase cases folded into one report per `(d, b)`.
    fn staircase_sweep(&self, cases: Vec<TheoremCase>) -> Result<Vec<VerificationReport>, VerifyError> {
        let mut groups: Vec<(TheoremCase, Vec<TheoremCase>)> = Vec::new();
        for c in cases {
            match groups.last_mut() {
                Some((head, members)) if head.d == c.d && head.mults == c.mults => members.push(c),
                _ => groups.push((c.clone(), vec![c])),
            }
        }
        groups
            .into_par_iter()
            .map(|(head, members)| {
                let start = Instant::now();
                let mut report = VerificationReport::new(&head, collinear(&self.curve, &head.points));
                report.configurations = members.len() as u64;
                for c in &members {
                    let r = self.verify(c)?;
                    if r.status == Status::Fail {
                        report.fail(format!("points {:?}: {}", c.points, r.failures.join("; ")));
                    }
                }
                Ok(report.finish(start))
            })
            .collect()
    }
}

fn hash_case(case: &TheoremCase) -> u64 {
    use std::hash::{DefaultHasher, Hash, Hasher};
    let mut h = DefaultHasher::new();
    (case.d, &case.mults, &case.points).hash(&mut h);
    h.finish()
}

fn permutations(items: &[usize], s: usize, out: &mut Vec<Vec<usize>>) {
    fn rec(items: &[usize], s: usize, used: &mut Vec<bool>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == s {
            out.push(cur.clone());
            return;
        }
        for i in 0..items.len() {
            if !used[i] {
                used[i] = true;
                cur.push(items[i]);
                rec(items, s, used, cur, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    rec(items, s, &mut vec![false; items.len()], &mut Vec::new(), out);
}

fn cap_sample(mut all: Vec<Vec<usize>>, cap: usize, seed: u64) -> Vec<Vec<usize>> {
    if all.len() > cap {
        let mut rng = crate::rng(seed);
        let mut keep = sample(&mut rng, all.len(), cap).into_vec();
        keep.sort_unstable();
        all = keep.into_iter().map(|i| all[i].clone()).collect();
    }
    all
}

/// Checks one case on a freshly built curve.
pub fn verify_case(case: &TheoremCase, opts: VerifyOptions) -> Result<VerificationReport, VerifyError> {
    Verifier::new(case.q, opts)?.verify(case)
}

/// [`Verifier::sweep`] on a freshly built curve.
pub fn sweep(q: u32, theorem: Theorem, mode: Mode, seed: u64, opts: VerifyOptions) -> Result<Vec<VerificationReport>, VerifyError> {
    Verifier::new(q, opts)?.sweep(theorem, mode, seed)
}

/// [`Verifier::verify_remark_m2`] on a freshly built curve.
pub fn verify_remark_m2(q: u32, d: usize, a3: usize, seed: u64) -> Result<VerificationReport, VerifyError> {
    Verifier::new(q, VerifyOptions::default())?.verify_remark_m2(d, a3, seed)
}
