use hermitian_codes::classify::{classify, complete_intersection_check, Regime, WitnessKind};
use hermitian_codes::curve::HermitianCurve;
use hermitian_codes::field::{make_field, Elem, Field};
use hermitian_codes::plane::{enumerate_points, line_through, HomogeneousForm, ProjPoint};
use hermitian_codes::scheme::{build_scheme, FatPoint, ZeroScheme};
use rand::seq::index::sample;
use rand::RngExt;

fn pt(f: &Field, c: [i64; 3]) -> ProjPoint {
    ProjPoint::new(f, c.map(|x| f.from_int(x))).unwrap()
}

fn lin(f: &Field, a: i64, b: i64, c: i64) -> HomogeneousForm {
    HomogeneousForm::linear(f.from_int(a), f.from_int(b), f.from_int(c))
}

fn product(f: &Field, forms: &[HomogeneousForm]) -> HomogeneousForm {
    forms
        .iter()
        .fold(HomogeneousForm::new(0, vec![f.one()]).unwrap(), |acc, l| acc.mul(f, l))
}

/// Points `(c : e : 1)` on the lines `x = c z` and `y = e z`.
fn grid(f: &Field, xs: &[Elem], ys: &[Elem]) -> (ZeroScheme, HomogeneousForm, HomogeneousForm) {
    let pts: Vec<ProjPoint> = xs
        .iter()
        .flat_map(|&c| ys.iter().map(move |&e| [c, e, Elem::ZERO]))
        .map(|[c, e, _]| ProjPoint::new(f, [c, e, f.one()]).unwrap())
        .collect();
    let vert: Vec<_> = xs.iter().map(|&c| HomogeneousForm::linear(f.one(), Elem::ZERO, f.neg(c))).collect();
    let horiz: Vec<_> = ys.iter().map(|&e| HomogeneousForm::linear(Elem::ZERO, f.one(), f.neg(e))).collect();
    (ZeroScheme::reduced(f, &pts).unwrap(), product(f, &vert), product(f, &horiz))
}

#[test]
fn grid_complete_intersections() {
    let f = make_field(3, 2).unwrap();
    let els: Vec<Elem> = f.elements().collect();
    for d in [3, 4] {
        let (z, t3, cd) = grid(&f, &els[..3], &els[3..3 + d]);
        assert!(z.lies_on(&f, &t3) && z.lies_on(&f, &cd));
        let c = classify(&f, &z, d, 5).unwrap();
        assert_eq!(c.regime, Regime::D);
        assert_eq!(c.oracle_h1, 1);
        let w = c.witness.expect("complete intersection found");
        assert_eq!(w.kind, WitnessKind::CubicCI);
        let partner = w.partner.unwrap();
        assert!(z.lies_on(&f, &partner));
        assert!(partner.is_coprime(&f, &w.curve));
        if d == 4 {
            assert_eq!(w.cubics_through, Some(1));
            assert_eq!(w.curve, t3.normalized(&f));
        }
        let back = complete_intersection_check(&f, &z, &t3, d, 1).unwrap().unwrap();
        assert!(back.is_coprime(&f, &t3) && z.lies_on(&f, &back));
    }
}

#[test]
fn tangential_complete_intersection() {
    // T3 = z y (y - z), C3 = (x^2 - yz)(x - y - 2z) over GF(9): the conic
    // touches z = 0 and y = 0, giving two double points.
    let f = make_field(3, 2).unwrap();
    let t3 = product(&f, &[lin(&f, 0, 0, 1), lin(&f, 0, 1, 0), lin(&f, 0, 1, -1)]);
    let conic = HomogeneousForm::from_terms(&f, 2, &[(f.one(), [2, 0, 0]), (f.from_int(-1), [0, 1, 1])]);
    let c3 = conic.mul(&f, &lin(&f, 1, -1, -2));
    let mut comps = vec![
        FatPoint::new(&f, pt(&f, [0, 1, 0]), 2, Some(&lin(&f, 0, 0, 1))).unwrap(),
        FatPoint::new(&f, pt(&f, [0, 0, 1]), 2, Some(&lin(&f, 0, 1, 0))).unwrap(),
    ];
    for c in [[1, 1, 1], [2, 1, 1], [0, 1, 1], [1, 1, 0], [2, 0, 1]] {
        comps.push(FatPoint::reduced(pt(&f, c)));
    }
    let z = ZeroScheme::new(&f, comps).unwrap();
    assert_eq!(z.degree(), 9);
    assert!(z.lies_on(&f, &t3) && z.lies_on(&f, &c3));
    assert_eq!(z.intersection_degree(&f, &conic), 6);

    let c = classify(&f, &z, 3, 2).unwrap();
    assert_eq!(c.oracle_h1, 1);
    let w = c.witness.unwrap();
    assert_eq!(w.kind, WitnessKind::CubicCI);
    assert!(complete_intersection_check(&f, &z, &t3, 3, 0).unwrap().is_some());
}

#[test]
fn collinear_excess_has_no_partner() {
    // five points on y = 0: every cubic through them contains that line
    let f = make_field(3, 2).unwrap();
    let els: Vec<Elem> = f.elements().collect();
    let mut pts: Vec<ProjPoint> = els[..5]
        .iter()
        .map(|&a| ProjPoint::new(&f, [a, Elem::ZERO, f.one()]).unwrap())
        .collect();
    pts.extend([pt(&f, [0, 1, 1]), pt(&f, [1, 1, 1]), pt(&f, [0, 2, 1]), pt(&f, [1, 2, 1])]);
    let z = ZeroScheme::reduced(&f, &pts).unwrap();
    let t3 = product(&f, &[lin(&f, 0, 1, 0), lin(&f, 0, 1, -1), lin(&f, 0, 1, -2)]);
    assert_eq!(complete_intersection_check(&f, &z, &t3, 3, 0).unwrap(), None);
    let c = classify(&f, &z, 3, 0).unwrap();
    let w = c.witness.unwrap();
    assert_eq!(w.kind, WitnessKind::LineD2);
    assert_eq!(w.intersection_degree, 5);
    assert!(c.oracle_h1 > 0);
    assert!(complete_intersection_check(&f, &z, &lin(&f, 0, 1, 0), 3, 0).is_err());
}

#[test]
fn agrees_with_oracle_on_curve_schemes() {
    // on the q = 2 curve only d = 1 admits a witness
    let x = HermitianCurve::new(2).unwrap();
    let f = x.field();
    let pts = x.rational_points();
    let mut rng = hermitian_codes::rng(17);
    let mut positive = 0;
    for d in 1..=4 {
        for _ in 0..200 {
            let s = rng.random_range(1..=pts.len());
            let chosen = sample(&mut rng, pts.len(), s).into_vec();
            let mut assign: Vec<(ProjPoint, usize)> =
                chosen.iter().map(|&i| (pts[i], rng.random_range(1..=3))).collect();
            while assign.iter().map(|a| a.1).sum::<usize>() > max_degree(d) {
                assign.pop();
            }
            let z = build_scheme(&x, &assign).unwrap();
            let c = classify(f, &z, d, 3).unwrap();
            assert_eq!(c.h1_positive, c.oracle_h1 > 0, "{assign:?}");
            positive += usize::from(c.h1_positive);
        }
    }
    assert!(positive > 0);
}

fn max_degree(d: usize) -> usize {
    match d {
        1 => 3,
        2 => 5,
        3 => 9,
        _ => 4 * d - 5,
    }
}

#[test]
fn agrees_with_oracle_on_plane_schemes() {
    let f = make_field(2, 2).unwrap();
    let plane = enumerate_points(&f);
    let mut rng = hermitian_codes::rng(29);
    let mut kinds = std::collections::HashSet::new();
    for d in 1..=5 {
        for _ in 0..150 {
            let s = rng.random_range(1..=8);
            let chosen = sample(&mut rng, plane.len(), s).into_vec();
            let mut comps = Vec::new();
            let mut deg = 0;
            for &i in &chosen {
                let m = rng.random_range(1..=3).min(max_degree(d) - deg);
                if m == 0 {
                    break;
                }
                let other = (i + rng.random_range(1..plane.len())) % plane.len();
                let l = line_through(&f, &plane[i], &plane[other]).unwrap();
                comps.push(FatPoint::new(&f, plane[i], m, Some(&l)).unwrap());
                deg += m;
            }
            let z = ZeroScheme::new(&f, comps).unwrap();
            let c = classify(&f, &z, d, 4).unwrap();
            assert_eq!(c.h1_positive, c.oracle_h1 > 0, "d = {d}, {z:?}");
            if let Some(w) = c.witness {
                kinds.insert(w.kind);
            }
        }
    }
    assert!(kinds.contains(&WitnessKind::LineD2) && kinds.contains(&WitnessKind::Conic2D2));
}
