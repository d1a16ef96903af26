//! Acceptance criteria 1-13, one PASS/FAIL line each.
//!
//! Criteria listed in `KNOWN_FAILURES` still print FAIL with their
//! details; the process exits 1 when any other criterion fails or a known
//! failure starts passing. Budgets are wall-clock.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use hermitian_codes::classify::classify;
use hermitian_codes::code::binomial;
use hermitian_codes::curve::HermitianCurve;
use hermitian_codes::field::Field;
use hermitian_codes::plane::{enumerate_lines, enumerate_points, line_through, monomial_count, ProjPoint};
use hermitian_codes::scheme::{build_scheme, FatPoint, ZeroScheme};
use hermitian_codes::verify::{
    sweep, verify_case, verify_remark_m2, Mode, Status, Theorem, VerificationReport, Verifier, VerifyOptions,
};
use rand::seq::index::sample;
use rand::RngExt;

const SEED: u64 = 2024;

/// Criteria whose stated numbers disagree with what the codes actually do.
const KNOWN_FAILURES: [(usize, &str); 2] = [
    (10, "the counting formula assumes q points of B' on every line of the family; q-1 lines through each P_i keep only q-1"),
    (13, "weight d-1 dual words exist on lines through P_3; d-subsets containing them support no weight-d word"),
];

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    failures: Vec<String>,
    detail: String,
}

impl Outcome {
    fn new() -> Self {
        Outcome { failures: Vec::new(), detail: String::new() }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok && self.failures.len() < 20 {
            self.failures.push(what());
        }
    }
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

/// Points of `x^{q+1} = y z^q + y^q z`, counted by brute force.
fn count_points(f: &Field, q: u64) -> usize {
    enumerate_points(f)
        .iter()
        .filter(|p| {
            let [x, y, z] = p.coords();
            let rhs = f.add(f.mul(y, f.pow(z, q)), f.mul(f.pow(y, q), z));
            f.pow(x, q + 1) == rhs
        })
        .count()
}

fn c1_census() -> Outcome {
    let mut o = Outcome::new();
    for q in [2u32, 3, 4, 5, 7, 8] {
        let t = Instant::now();
        let x = HermitianCurve::new(q).unwrap();
        let n = x.rational_points().len();
        let dt = t.elapsed();
        let q64 = q as u64;
        o.check(n as u64 == q64.pow(3) + 1, || format!("q = {q}: {n} points"));
        o.check(count_points(x.field(), q64) == n, || format!("q = {q}: brute force disagrees"));
        o.check(dt < secs(1), || format!("q = {q}: {dt:?}"));
    }
    o.detail = "q in {2,3,4,5,7,8}".into();
    o
}

fn c2_incidence() -> Outcome {
    let mut o = Outcome::new();
    let mut lines = 0;
    for q in [2u32, 3, 4] {
        let x = HermitianCurve::new(q).unwrap();
        let f = x.field();
        for l in enumerate_lines(f) {
            lines += 1;
            let on = x.points_on(&l);
            let tangent = on.len() == 1 && x.tangent_form(&on[0]).unwrap() == l;
            let ok = match on.len() {
                1 => tangent,
                k => k == q as usize + 1 && on.iter().all(|p| x.tangent_form(p).unwrap() != l),
            };
            o.check(ok, || format!("q = {q}: line {:?} meets X in {} points", l.coeffs(), on.len()));
        }
    }
    o.detail = format!("{lines} lines");
    o
}

fn c3_contact() -> Outcome {
    let mut o = Outcome::new();
    let mut tangents = 0;
    for q in [2u32, 3, 4, 5, 7, 8] {
        let x = HermitianCurve::new(q).unwrap();
        for p in x.rational_points() {
            let t = x.tangent_line(p).unwrap();
            let c = x.contact_order(&t, p).unwrap();
            tangents += 1;
            o.check(c == q as usize + 1, || format!("q = {q}: contact {c} at {:?}", p.coords()));
        }
    }
    o.detail = format!("{tangents} tangent lines, q <= 8");
    o
}

fn random_plane_scheme(f: &Field, plane: &[ProjPoint], rng: &mut impl RngExt) -> ZeroScheme {
    let s = rng.random_range(1..=6);
    let comps = sample(rng, plane.len(), s)
        .into_iter()
        .map(|i| {
            let m = rng.random_range(1..=4);
            let other = (i + rng.random_range(1..plane.len())) % plane.len();
            let l = line_through(f, &plane[i], &plane[other]).unwrap();
            FatPoint::new(f, plane[i], m, Some(&l)).unwrap()
        })
        .collect();
    ZeroScheme::new(f, comps).unwrap()
}

fn c4_euler() -> Outcome {
    let mut o = Outcome::new();
    let mut rng = hermitian_codes::rng(SEED);
    for q in [2u32, 3, 4] {
        let x = HermitianCurve::new(q).unwrap();
        let f = x.field();
        let plane = enumerate_points(f);
        for _ in 0..10_000 {
            let z = random_plane_scheme(f, &plane, &mut rng);
            for d in 0..=6 {
                let h0 = z.forms_through(f, d).len() as i64;
                let h1 = z.cohomology(f, d).h1 as i64;
                let rhs = monomial_count(d) as i64 - z.degree() as i64;
                o.check(h0 - h1 == rhs, || format!("q = {q}, d = {d}: {h0} - {h1} != {rhs}"));
            }
        }
    }
    o.detail = format!("3 x 10^4 schemes, d = 0..6, seed {SEED}");
    o
}

fn all_pass(o: &mut Outcome, reports: &[VerificationReport]) {
    for r in reports {
        o.check(r.status == Status::Pass, || format!("{}: {}", r.case.key(), r.failures.join("; ")));
    }
}

fn c5_staircase() -> Outcome {
    let mut o = Outcome::new();
    let t = Instant::now();
    let opts = VerifyOptions { config_cap: 100_000, ..Default::default() };
    let mut configs = 0;
    let mut cells = 0;
    for q in [3u32, 4] {
        let reports = sweep(q, Theorem::Staircase, Mode::Exhaustive, SEED, opts).unwrap();
        cells += reports.len();
        configs += reports.iter().map(|r| r.configurations).sum::<u64>();
        all_pass(&mut o, &reports);
    }
    let dt = t.elapsed();
    o.check(dt < secs(300), || format!("{dt:?}"));
    o.detail = format!("{cells} (d, b) cells, {configs} configurations, cap 10^5, seed {SEED}, {dt:.0?}");
    o
}

/// Schemes on the nine points of the q = 2 curve, multiplicities <= 3,
/// degree <= 11.
fn q2_box() -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut a = [0usize; 9];
    loop {
        let deg: usize = a.iter().sum();
        if (1..=11).contains(&deg) {
            out.push(a.to_vec());
        }
        let mut i = 0;
        loop {
            if i == 9 {
                return out;
            }
            if a[i] < 3 {
                a[i] += 1;
                break;
            }
            a[i] = 0;
            i += 1;
        }
    }
}

fn c6_classifier() -> Outcome {
    let mut o = Outcome::new();
    let t = Instant::now();
    let x = HermitianCurve::new(2).unwrap();
    let f = x.field();
    let pts = x.rational_points();
    let all = q2_box();
    let total = all.len();
    let mut rng = hermitian_codes::rng(SEED);
    let chosen: Vec<Vec<usize>> = if total > 100_000 {
        let mut idx = sample(&mut rng, total, 100_000).into_vec();
        idx.sort_unstable();
        idx.into_iter().map(|i| all[i].clone()).collect()
    } else {
        all
    };
    let mut positive = 0;
    for a in &chosen {
        let assign: Vec<(ProjPoint, usize)> =
            a.iter().zip(pts).filter(|(&m, _)| m > 0).map(|(&m, p)| (*p, m)).collect();
        let z = build_scheme(&x, &assign).unwrap();
        let c = classify(f, &z, 4, SEED).unwrap();
        positive += usize::from(c.oracle_h1 > 0);
        o.check(c.h1_positive == (c.oracle_h1 > 0), || format!("q = 2, {a:?}"));
    }
    let y = HermitianCurve::new(3).unwrap();
    let g = y.field();
    let ypts = y.rational_points();
    for d in [4usize, 5] {
        for _ in 0..10_000 {
            let s = rng.random_range(1..=10);
            let mut assign: Vec<(ProjPoint, usize)> = sample(&mut rng, ypts.len(), s)
                .into_iter()
                .map(|i| (ypts[i], rng.random_range(1..=4)))
                .collect();
            while assign.iter().map(|a| a.1).sum::<usize>() > 4 * d - 5 {
                assign.pop();
            }
            let z = build_scheme(&y, &assign).unwrap();
            let c = classify(g, &z, d, SEED).unwrap();
            positive += usize::from(c.oracle_h1 > 0);
            o.check(c.h1_positive == (c.oracle_h1 > 0), || format!("q = 3, d = {d}, {assign:?}"));
        }
    }
    let dt = t.elapsed();
    o.check(dt < secs(600), || format!("{dt:?}"));
    o.detail = format!(
        "q = 2 box {total} schemes, {} checked; q = 3: 2 x 10^4 random; {positive} with h1 > 0; seed {SEED}, {dt:.0?}",
        chosen.len()
    );
    o
}

fn c7_collinear() -> Outcome {
    let mut o = Outcome::new();
    let t = Instant::now();
    let reports = sweep(4, Theorem::Collinear, Mode::Exhaustive, SEED, VerifyOptions::default()).unwrap();
    all_pass(&mut o, &reports);
    for r in &reports {
        let k = 10 - r.case.mults.iter().sum::<usize>();
        let ok = r.case.d == 3
            && r.n_observed == Some(63)
            && r.k_observed == Some(k)
            && r.distance_observed == Some(3)
            && r.census_observed == Some(1)
            && r.guarantee.as_deref() == Some("exhaustive");
        o.check(ok, || format!("{}: n {:?} k {:?} d {:?} census {:?}", r.case.key(), r.n_observed, r.k_observed, r.distance_observed, r.census_observed));
    }
    let dt = t.elapsed();
    o.check(!reports.is_empty(), || "no cases".into());
    o.check(dt < secs(600), || format!("{dt:?}"));
    o.detail = format!("{} cases, every ordered pair on every secant, {dt:.0?}", reports.len());
    o
}

fn c8_collinear_punctured() -> Outcome {
    let mut o = Outcome::new();
    let t = Instant::now();
    let opts = VerifyOptions { oracle_samples: 20, ..Default::default() };
    let reports = sweep(4, Theorem::CollinearPunctured, Mode::Exhaustive, SEED, opts).unwrap();
    all_pass(&mut o, &reports);
    // s (q^2 - 1) C(q, d+1) with s = 2, q = 4, d = 3
    let census = 2 * 15 * binomial(4, 4) as u64;
    for r in &reports {
        let ok = r.n_observed == Some(60) && r.distance_observed == Some(4) && r.census_observed == Some(census);
        o.check(ok, || format!("{}: n {:?} d {:?} census {:?}", r.case.key(), r.n_observed, r.distance_observed, r.census_observed));
    }
    let dt = t.elapsed();
    o.check(!reports.is_empty(), || "no cases".into());
    o.check(dt < secs(1800), || format!("{dt:?}"));
    o.detail = format!("{} cases, census {census}, 20 h1 cross-checks per case, {dt:.0?}", reports.len());
    o
}

fn structured(theorem: Theorem) -> VerificationReport {
    let v = Verifier::new(7, VerifyOptions::default()).unwrap();
    let case = v.default_case(theorem, 5, vec![3, 3, 3], Mode::Structured, SEED);
    v.verify(&case).unwrap()
}

fn c9_three_point() -> Outcome {
    let mut o = Outcome::new();
    let t = Instant::now();
    let r = structured(Theorem::ThreePoint);
    all_pass(&mut o, std::slice::from_ref(&r));
    // 3 C(6, 5): five points out of the six of B on each side
    let census = 3 * binomial(6, 5) as u64;
    o.check(r.n_observed == Some(341) && r.k_observed == Some(12), || format!("n {:?} k {:?}", r.n_observed, r.k_observed));
    o.check(r.census_observed == Some(census), || format!("census {:?}", r.census_observed));
    o.check(r.guarantee.as_deref() == Some("structured+randomized"), || "guarantee".into());
    let dt = t.elapsed();
    o.check(dt < secs(1800), || format!("{dt:?}"));
    o.detail = format!("{}; {}, {dt:.1?}", r.case.key(), r.notes.join("; "));
    o
}

fn c10_three_point_punctured() -> Outcome {
    let mut o = Outcome::new();
    let t = Instant::now();
    let r = structured(Theorem::ThreePointPunctured);
    all_pass(&mut o, std::slice::from_ref(&r));
    // q^3 - 3q + 1 and 3 (q^2 - 2) C(q, 6) at q = 7
    let census = 3 * 47 * binomial(7, 6) as u64;
    o.check(r.n_observed == Some(343 - 21 + 1), || format!("n {:?}", r.n_observed));
    o.check(r.k_observed == Some(12), || format!("k {:?}", r.k_observed));
    o.check(r.distance_observed == Some(6), || format!("distance {:?}", r.distance_observed));
    o.check(r.census_observed == Some(census), || format!("census {:?}, formula {census}", r.census_observed));
    let dt = t.elapsed();
    o.check(dt < secs(3600), || format!("{dt:?}"));
    o.detail = format!("{}; n = {:?}, q^3-3q+1 = 323; {}, {dt:.1?}", r.case.key(), r.n_observed, r.notes.join("; "));
    o
}

fn c11_tangent_reduction() -> Outcome {
    let mut o = Outcome::new();
    let t = Instant::now();
    let cap = 40;
    let opts = VerifyOptions { config_cap: cap, ..Default::default() };
    let reports = sweep(4, Theorem::TangentReduction, Mode::Exhaustive, SEED, opts).unwrap();
    all_pass(&mut o, &reports);
    let compared = reports.iter().filter(|r| r.notes.iter().all(|n| !n.contains("not compared"))).count();
    let dt = t.elapsed();
    o.check(dt < secs(600), || format!("{dt:?}"));
    o.detail = format!(
        "{} cases (full multiplicity box, {cap} point tuples per (d, s), seed {SEED}), {compared} with weight distributions, {dt:.0?}",
        reports.len()
    );
    o
}

fn c12_residual() -> Outcome {
    let mut o = Outcome::new();
    let mut rng = hermitian_codes::rng(SEED);
    let mut checked = 0;
    for q in [4u32, 5] {
        let v = Verifier::new(q, VerifyOptions { config_cap: 2_000, ..Default::default() }).unwrap();
        let cases = v.sweep_cases(Theorem::Residual, Mode::Exhaustive, SEED);
        let pick = sample(&mut rng, cases.len(), 1000.min(cases.len())).into_vec();
        for i in pick {
            let r = verify_case(&cases[i], *v.options()).unwrap();
            checked += 1;
            o.check(r.status == Status::Pass, || format!("{}: {}", r.case.key(), r.failures.join("; ")));
        }
    }
    o.detail = format!("{checked} random collinear configurations, seed {SEED}");
    o
}

fn c13_double_full() -> Outcome {
    let mut o = Outcome::new();
    let t = Instant::now();
    let r = verify_remark_m2(8, 6, 1, SEED).unwrap();
    // 62 lines with 8 points of B, two (towards P_1, P_2) with 7
    let census = 62 * binomial(8, 6) as u64 + 2 * binomial(7, 6) as u64;
    o.check(r.census_expected == Some(census), || format!("predicted {:?}", r.census_expected));
    all_pass(&mut o, std::slice::from_ref(&r));
    let dt = t.elapsed();
    o.check(dt < secs(1800), || format!("{dt:?}"));
    o.detail = format!("census {census}, observed {:?}; {}", r.census_observed, r.notes.join("; "));
    o
}

fn main() -> ExitCode {
    let criteria: [Criterion; 13] = [
        ("curve census", c1_census),
        ("line incidence", c2_incidence),
        ("contact order", c3_contact),
        ("euler identity", c4_euler),
        ("staircase vanishing", c5_staircase),
        ("classifier vs oracle", c6_classifier),
        ("collinear, q = 4", c7_collinear),
        ("collinear punctured, q = 4", c8_collinear_punctured),
        ("three points, q = 7", c9_three_point),
        ("three points punctured, q = 7", c10_three_point_punctured),
        ("tangent reduction, q = 4", c11_tangent_reduction),
        ("residual inequality", c12_residual),
        ("double full multiplicity, q = 8", c13_double_full),
    ];
    let only: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = BTreeMap::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let n = i + 1;
        if !only.is_empty() && !only.contains(&n) {
            continue;
        }
        let o = run();
        let status = if o.failures.is_empty() { "PASS" } else { "FAIL" };
        println!("criterion {n:>2} {status} {name}: {}", o.detail);
        for f in &o.failures {
            println!("    {f}");
        }
        if !o.failures.is_empty() {
            failed.insert(n, name);
        }
    }
    let known: BTreeMap<usize, &str> = KNOWN_FAILURES.into_iter().collect();
    let mut unexpected = false;
    for (n, name) in &failed {
        match known.get(n) {
            Some(why) => println!("criterion {n:>2} known failure ({name}): {why}"),
            None => unexpected = true,
        }
    }
    for n in known.keys() {
        if (only.is_empty() || only.contains(n)) && !failed.contains_key(n) {
            println!("criterion {n:>2} listed as a known failure but passed");
            unexpected = true;
        }
    }
    let ran = if only.is_empty() { criteria.len() } else { only.len() };
    println!("acceptance: {} PASS, {} FAIL {:?}", ran - failed.len(), failed.len(), failed.keys().collect::<Vec<_>>());
    if unexpected {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
