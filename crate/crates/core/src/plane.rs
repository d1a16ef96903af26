//! Points, lines and homogeneous forms of the projective plane over a
//! finite field.
//!
//! Monomials of degree `d` are laid out in graded-lexicographic order with
//! `x > y > z`: `x^d, x^{d-1}y, x^{d-1}z, x^{d-2}y^2, ...`. Every coefficient
//! vector and every condition-matrix column in this crate uses that order.

use std::fmt;

use thiserror::Error;

use crate::field::{Elem, Field};
use crate::matrix::dot;
use crate::poly::{BiPoly, Poly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlaneError {
    #[error("(0:0:0) is not a projective point")]
    ZeroVector,
    #[error("a line needs two distinct points")]
    SamePoints,
    #[error("point {0} does not lie on the line")]
    NotOnLine(String),
    #[error("a degree {degree} form has {expected} coefficients, got {got}")]
    BadLength {
        degree: usize,
        expected: usize,
        got: usize,
    },
    #[error("expected a nonzero linear form")]
    NotALine,
    #[error("forms of degree {0} and {1} cannot be added")]
    DegreeMismatch(usize, usize),
}

/// `C(d + 2, 2)`, the number of degree-`d` monomials in three variables.
pub fn monomial_count(d: usize) -> usize {
    (d + 1) * (d + 2) / 2
}

/// Exponent triples of degree `d` in graded-lex order.
pub fn monomials(d: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::with_capacity(monomial_count(d));
    for a in (0..=d).rev() {
        for b in (0..=d - a).rev() {
            out.push([a, b, d - a - b]);
        }
    }
    out
}

/// Position of `x^a y^b z^c` in [`monomials`] for `d = a + b + c`.
pub fn monomial_index(exp: [usize; 3]) -> usize {
    let d = exp[0] + exp[1] + exp[2];
    let k = d - exp[0];
    k * (k + 1) / 2 + (k - exp[1])
}

/// A point of the plane with its leftmost nonzero coordinate equal to 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint([Elem; 3]);

impl ProjPoint {
    pub fn new(f: &Field, coords: [Elem; 3]) -> Result<Self, PlaneError> {
        let lead = coords
            .iter()
            .find(|c| !c.is_zero())
            .ok_or(PlaneError::ZeroVector)?;
        let inv = f.inv(*lead).expect("nonzero");
        Ok(ProjPoint(coords.map(|c| f.mul(c, inv))))
    }

    pub fn coords(&self) -> [Elem; 3] {
        self.0
    }

    pub fn display(&self, f: &Field) -> String {
        format!(
            "({}:{}:{})",
            f.format(self.0[0]),
            f.format(self.0[1]),
            f.format(self.0[2])
        )
    }
}

/// All `Q^2 + Q + 1` points of the plane over GF(Q), in canonical order.
pub fn enumerate_points(f: &Field) -> Vec<ProjPoint> {
    let one = f.one();
    let mut pts = Vec::with_capacity(f.order() * f.order() + f.order() + 1);
    pts.push(ProjPoint([Elem::ZERO, Elem::ZERO, one]));
    for z in f.elements() {
        pts.push(ProjPoint([Elem::ZERO, one, z]));
    }
    for y in f.elements() {
        for z in f.elements() {
            pts.push(ProjPoint([one, y, z]));
        }
    }
    pts.sort();
    pts
}

/// All lines of the plane, as normalized linear forms in canonical order.
pub fn enumerate_lines(f: &Field) -> Vec<HomogeneousForm> {
    enumerate_points(f)
        .into_iter()
        .map(|p| HomogeneousForm {
            degree: 1,
            coeffs: p.0.to_vec(),
        })
        .collect()
}

fn cross(f: &Field, a: [Elem; 3], b: [Elem; 3]) -> [Elem; 3] {
    [
        f.sub(f.mul(a[1], b[2]), f.mul(a[2], b[1])),
        f.sub(f.mul(a[2], b[0]), f.mul(a[0], b[2])),
        f.sub(f.mul(a[0], b[1]), f.mul(a[1], b[0])),
    ]
}

/// The normalized linear form vanishing at two distinct points.
pub fn line_through(f: &Field, p: &ProjPoint, q: &ProjPoint) -> Result<HomogeneousForm, PlaneError> {
    let c = cross(f, p.0, q.0);
    let n = ProjPoint::new(f, c).map_err(|_| PlaneError::SamePoints)?;
    Ok(HomogeneousForm {
        degree: 1,
        coeffs: n.0.to_vec(),
    })
}

/// Intersection point of two distinct lines.
pub fn meet(f: &Field, l: &HomogeneousForm, m: &HomogeneousForm) -> Option<ProjPoint> {
    let a = [l.coeffs[0], l.coeffs[1], l.coeffs[2]];
    let b = [m.coeffs[0], m.coeffs[1], m.coeffs[2]];
    ProjPoint::new(f, cross(f, a, b)).ok()
}

/// Vanishing order of a form along a line: finite, or infinite when the line
/// is a component of the curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Order {
    Finite(usize),
    Infinite,
}

impl Order {
    /// `min(self, cap)` as an integer.
    pub fn clamp(self, cap: usize) -> usize {
        match self {
            Order::Finite(k) => k.min(cap),
            Order::Infinite => cap,
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(k) => write!(f, "{k}"),
            Order::Infinite => write!(f, "inf"),
        }
    }
}

/// A homogeneous form of fixed degree in `x, y, z`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HomogeneousForm {
    degree: usize,
    coeffs: Vec<Elem>,
}

impl HomogeneousForm {
    pub fn new(degree: usize, coeffs: Vec<Elem>) -> Result<Self, PlaneError> {
        let expected = monomial_count(degree);
        if coeffs.len() != expected {
            return Err(PlaneError::BadLength {
                degree,
                expected,
                got: coeffs.len(),
            });
        }
        Ok(HomogeneousForm { degree, coeffs })
    }

    pub fn zero(degree: usize) -> Self {
        HomogeneousForm {
            degree,
            coeffs: vec![Elem::ZERO; monomial_count(degree)],
        }
    }

    /// `a x + b y + c z`.
    pub fn linear(a: Elem, b: Elem, c: Elem) -> Self {
        HomogeneousForm {
            degree: 1,
            coeffs: vec![a, b, c],
        }
    }

    /// Sum of `coeff * x^a y^b z^c` terms, all of degree `degree`.
    pub fn from_terms(f: &Field, degree: usize, terms: &[(Elem, [usize; 3])]) -> Self {
        let mut h = HomogeneousForm::zero(degree);
        for &(c, exp) in terms {
            assert_eq!(exp.iter().sum::<usize>(), degree, "term of wrong degree");
            let i = monomial_index(exp);
            h.coeffs[i] = f.add(h.coeffs[i], c);
        }
        h
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Scaled so the first nonzero coefficient is 1; zero stays zero.
    pub fn normalized(&self, f: &Field) -> Self {
        match self.coeffs.iter().find(|c| !c.is_zero()) {
            None => self.clone(),
            Some(&lead) => self.scale(f, f.inv(lead).expect("nonzero")),
        }
    }

    pub fn scale(&self, f: &Field, c: Elem) -> Self {
        HomogeneousForm {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|&x| f.mul(x, c)).collect(),
        }
    }

    pub fn add(&self, f: &Field, other: &Self) -> Result<Self, PlaneError> {
        if self.degree != other.degree {
            return Err(PlaneError::DegreeMismatch(self.degree, other.degree));
        }
        Ok(HomogeneousForm {
            degree: self.degree,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| f.add(a, b))
                .collect(),
        })
    }

    pub fn mul(&self, f: &Field, other: &Self) -> Self {
        let d = self.degree + other.degree;
        let mut out = HomogeneousForm::zero(d);
        let ma = monomials(self.degree);
        let mb = monomials(other.degree);
        for (i, ea) in ma.iter().enumerate() {
            let a = self.coeffs[i];
            if a.is_zero() {
                continue;
            }
            for (j, eb) in mb.iter().enumerate() {
                let b = other.coeffs[j];
                if b.is_zero() {
                    continue;
                }
                let k = monomial_index([ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]]);
                out.coeffs[k] = f.add(out.coeffs[k], f.mul(a, b));
            }
        }
        out
    }

    /// Formal partial derivative with respect to variable `var` (0, 1, 2
    /// for x, y, z). Exponents are reduced into the field, so in
    /// characteristic p the factor vanishes when p divides the exponent.
    pub fn partial(&self, f: &Field, var: usize) -> Self {
        if self.degree == 0 {
            return HomogeneousForm::zero(0);
        }
        let mut out = HomogeneousForm::zero(self.degree - 1);
        for (i, e) in monomials(self.degree).iter().enumerate() {
            let c = self.coeffs[i];
            if c.is_zero() || e[var] == 0 {
                continue;
            }
            let mut lowered = *e;
            lowered[var] -= 1;
            let k = monomial_index(lowered);
            let term = f.mul(c, f.from_int(e[var] as i64));
            out.coeffs[k] = f.add(out.coeffs[k], term);
        }
        out
    }

    pub fn eval(&self, f: &Field, p: &ProjPoint) -> Elem {
        self.eval_coords(f, p.0)
    }

    pub fn eval_coords(&self, f: &Field, c: [Elem; 3]) -> Elem {
        dot(f, &self.coeffs, &monomial_values(f, c, self.degree))
    }

    /// Restriction `t -> F(base + t * direction)` along a parametrized line.
    pub fn restrict(&self, f: &Field, line: &LineParam) -> Poly {
        restrict_coords(f, &self.coeffs, self.degree, line.base.0, line.direction.0)
    }

    /// Order of vanishing at `p` along `line`, using the chart of the line
    /// centred at `p`.
    pub fn vanishing_order(
        &self,
        f: &Field,
        line: &LineParam,
        p: &ProjPoint,
    ) -> Result<Order, PlaneError> {
        let chart = line.chart_at(f, p)?;
        Ok(match self.restrict(f, &chart).valuation() {
            Some(k) => Order::Finite(k),
            None => Order::Infinite,
        })
    }

    /// Largest `k` with `z^k` dividing the form (degree + 1 for zero).
    fn z_valuation(&self) -> usize {
        monomials(self.degree)
            .iter()
            .zip(&self.coeffs)
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, _)| e[2])
            .min()
            .unwrap_or(self.degree + 1)
    }

    /// `F(x, y, 1)` as a polynomial in `x` over `F[y]`.
    fn dehomogenize(&self) -> BiPoly {
        let mut terms = vec![vec![Elem::ZERO; self.degree + 1]; self.degree + 1];
        for (e, &c) in monomials(self.degree).iter().zip(&self.coeffs) {
            terms[e[0]][e[1]] = c;
        }
        BiPoly::new(terms.into_iter().map(Poly::new).collect())
    }

    fn homogenize(f: &Field, g: &BiPoly) -> Self {
        let t = g.total_degree().unwrap_or(0);
        let mut h = HomogeneousForm::zero(t);
        for (a, py) in g.terms().iter().enumerate() {
            for (b, &c) in py.coeffs().iter().enumerate() {
                if !c.is_zero() {
                    let i = monomial_index([a, b, t - a - b]);
                    h.coeffs[i] = f.add(h.coeffs[i], c);
                }
            }
        }
        h
    }

    /// Normalized gcd of two forms. The gcd of zero and `g` is `g`.
    pub fn gcd(&self, f: &Field, other: &Self) -> Self {
        if self.is_zero() {
            return other.normalized(f);
        }
        if other.is_zero() {
            return self.normalized(f);
        }
        let k = self.z_valuation().min(other.z_valuation());
        let g = self.dehomogenize().gcd(f, &other.dehomogenize());
        let affine = HomogeneousForm::homogenize(f, &g);
        let z = HomogeneousForm::linear(Elem::ZERO, Elem::ZERO, f.one());
        let mut out = affine;
        for _ in 0..k {
            out = out.mul(f, &z);
        }
        out.normalized(f)
    }

    /// True when the two forms share no factor of positive degree.
    pub fn is_coprime(&self, f: &Field, other: &Self) -> bool {
        self.gcd(f, other).degree == 0
    }
}

/// Values of all degree-`d` monomials at `c`, in graded-lex order.
pub fn monomial_values(f: &Field, c: [Elem; 3], d: usize) -> Vec<Elem> {
    let powers: Vec<Vec<Elem>> = c
        .iter()
        .map(|&x| {
            let mut v = Vec::with_capacity(d + 1);
            let mut acc = f.one();
            for _ in 0..=d {
                v.push(acc);
                acc = f.mul(acc, x);
            }
            v
        })
        .collect();
    monomials(d)
        .iter()
        .map(|e| f.mul(f.mul(powers[0][e[0]], powers[1][e[1]]), powers[2][e[2]]))
        .collect()
}

/// Truncated powers `(b + t * v)^k mod t^len` for `k = 0..=d`.
fn linear_powers(f: &Field, b: Elem, v: Elem, d: usize, len: usize) -> Vec<Poly> {
    let lin = Poly::new(vec![b, v]);
    let mut out = Vec::with_capacity(d + 1);
    let mut acc = Poly::constant(f.one());
    for _ in 0..=d {
        out.push(acc.clone());
        acc = acc.mul_trunc(f, &lin, len);
    }
    out
}

fn restrict_coords(f: &Field, coeffs: &[Elem], d: usize, base: [Elem; 3], dir: [Elem; 3]) -> Poly {
    let len = d + 1;
    let pw: Vec<Vec<Poly>> = (0..3)
        .map(|i| linear_powers(f, base[i], dir[i], d, len))
        .collect();
    let mut out = Poly::zero();
    for (e, &c) in monomials(d).iter().zip(coeffs) {
        if c.is_zero() {
            continue;
        }
        let term = pw[0][e[0]]
            .mul(f, &pw[1][e[1]])
            .mul(f, &pw[2][e[2]])
            .scale(f, c);
        out = out.add(f, &term);
    }
    out
}

/// Where a point sits on a parametrized line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LinePosition {
    At(Elem),
    Infinity,
}

/// A line together with the parametrization `t -> base + t * direction`;
/// `t = infinity` gives `direction`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LineParam {
    line: HomogeneousForm,
    base: ProjPoint,
    direction: ProjPoint,
}

impl LineParam {
    pub fn through(f: &Field, base: &ProjPoint, direction: &ProjPoint) -> Result<Self, PlaneError> {
        let line = line_through(f, base, direction)?;
        Ok(LineParam {
            line,
            base: *base,
            direction: *direction,
        })
    }

    /// Parametrizes a linear form by its first two points in canonical order.
    pub fn from_form(f: &Field, form: &HomogeneousForm) -> Result<Self, PlaneError> {
        if form.degree != 1 || form.is_zero() {
            return Err(PlaneError::NotALine);
        }
        let line = form.normalized(f);
        let mut on = enumerate_points(f)
            .into_iter()
            .filter(|p| line.eval(f, p).is_zero());
        let base = on.next().expect("a line has points");
        let direction = on.next().expect("a line has at least two points");
        Ok(LineParam {
            line,
            base,
            direction,
        })
    }

    /// The line `form` parametrized with `p` at `t = 0`.
    pub fn centered(f: &Field, form: &HomogeneousForm, p: &ProjPoint) -> Result<Self, PlaneError> {
        if form.degree != 1 || form.is_zero() {
            return Err(PlaneError::NotALine);
        }
        let line = form.normalized(f);
        if !line.eval(f, p).is_zero() {
            return Err(PlaneError::NotOnLine(p.display(f)));
        }
        let l = [line.coeffs[0], line.coeffs[1], line.coeffs[2]];
        let one = f.one();
        let zero = Elem::ZERO;
        // meets with the coordinate lines; at least two of them are distinct
        let direction = [[one, zero, zero], [zero, one, zero], [zero, zero, one]]
            .into_iter()
            .filter_map(|axis| ProjPoint::new(f, cross(f, l, axis)).ok())
            .find(|q| q != p)
            .expect("a line has two distinct coordinate meets");
        Ok(LineParam {
            line,
            base: *p,
            direction,
        })
    }

    pub fn form(&self) -> &HomogeneousForm {
        &self.line
    }

    pub fn base(&self) -> &ProjPoint {
        &self.base
    }

    pub fn direction(&self) -> &ProjPoint {
        &self.direction
    }

    pub fn contains(&self, f: &Field, p: &ProjPoint) -> bool {
        self.line.eval(f, p).is_zero()
    }

    /// Same underlying line (parametrizations may differ).
    pub fn same_line(&self, other: &LineParam) -> bool {
        self.line == other.line
    }

    /// The rational points in parametrization order: `t` over the field in
    /// canonical order, then the point at infinity.
    pub fn points(&self, f: &Field) -> Vec<ProjPoint> {
        let (b, v) = (self.base.0, self.direction.0);
        let mut out: Vec<ProjPoint> = f
            .elements()
            .map(|t| {
                let c = [0, 1, 2].map(|i| f.add(b[i], f.mul(t, v[i])));
                ProjPoint::new(f, c).expect("base and direction are independent")
            })
            .collect();
        out.push(self.direction);
        out
    }

    /// Parameter of a point on the line.
    pub fn position(&self, f: &Field, p: &ProjPoint) -> Result<LinePosition, PlaneError> {
        if !self.contains(f, p) {
            return Err(PlaneError::NotOnLine(p.display(f)));
        }
        if *p == self.direction {
            return Ok(LinePosition::Infinity);
        }
        // p = alpha * base + beta * direction; solve on a pair of coordinates
        let (b, v, c) = (self.base.0, self.direction.0, p.0);
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            let det = f.sub(f.mul(b[i], v[j]), f.mul(b[j], v[i]));
            if let Some(inv) = f.inv(det) {
                let alpha = f.mul(f.sub(f.mul(c[i], v[j]), f.mul(c[j], v[i])), inv);
                let beta = f.mul(f.sub(f.mul(b[i], c[j]), f.mul(b[j], c[i])), inv);
                let t = f.div(beta, alpha).expect("p differs from direction");
                return Ok(LinePosition::At(t));
            }
        }
        unreachable!("base and direction are independent")
    }

    /// The same line parametrized with `p` at `t = 0`. When `p` is the
    /// point at infinity the roles of base and direction swap.
    pub fn chart_at(&self, f: &Field, p: &ProjPoint) -> Result<LineParam, PlaneError> {
        if !self.contains(f, p) {
            return Err(PlaneError::NotOnLine(p.display(f)));
        }
        let other = if *p == self.direction {
            self.base
        } else {
            self.direction
        };
        Ok(LineParam {
            line: self.line.clone(),
            base: *p,
            direction: other,
        })
    }

    /// Rows `r = 0..count` of the linear maps sending a degree-`d` form to
    /// the coefficient of `t^r` of its restriction to this line, expanded at
    /// the base point. Columns follow the monomial order.
    pub fn taylor_rows(&self, f: &Field, d: usize, count: usize) -> Vec<Vec<Elem>> {
        let mons = monomials(d);
        let mut rows = vec![vec![Elem::ZERO; mons.len()]; count];
        if count == 0 {
            return rows;
        }
        let (b, v) = (self.base.0, self.direction.0);
        let pw: Vec<Vec<Poly>> = (0..3)
            .map(|i| linear_powers(f, b[i], v[i], d, count))
            .collect();
        for (j, e) in mons.iter().enumerate() {
            let poly = pw[0][e[0]]
                .mul_trunc(f, &pw[1][e[1]], count)
                .mul_trunc(f, &pw[2][e[2]], count);
            for (r, row) in rows.iter_mut().enumerate() {
                row[j] = poly.coeff(r);
            }
        }
        rows
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    fn pt(f: &Field, s: [&str; 3]) -> ProjPoint {
        ProjPoint::new(f, s.map(|x| f.parse(x).unwrap())).unwrap()
    }

    #[test]
    fn monomial_layout() {
        assert_eq!(monomials(1), vec![[1, 0, 0], [0, 1, 0], [0, 0, 1]]);
        assert_eq!(
            monomials(2),
            vec![[2, 0, 0], [1, 1, 0], [1, 0, 1], [0, 2, 0], [0, 1, 1], [0, 0, 2]]
        );
        for d in 0..8 {
            let m = monomials(d);
            assert_eq!(m.len(), monomial_count(d));
            for (i, e) in m.iter().enumerate() {
                assert_eq!(monomial_index(*e), i);
            }
        }
    }

    #[test]
    fn point_counts() {
        assert_eq!(enumerate_points(&make_field(2, 1).unwrap()).len(), 7);
        let f = make_field(2, 2).unwrap();
        let pts = enumerate_points(&f);
        assert_eq!(pts.len(), 21);
        let origin = pt(&f, ["0", "0", "1"]);
        assert_eq!(pts.iter().filter(|&&p| p == origin).count(), 1);
        assert_eq!(pts[0], origin);
    }

    #[test]
    fn normalization() {
        let f = make_field(5, 1).unwrap();
        let p = ProjPoint::new(&f, [Elem::ZERO, f.from_int(3), f.from_int(2)]).unwrap();
        assert_eq!(p.coords()[1], f.one());
        assert_eq!(ProjPoint::new(&f, p.coords()).unwrap(), p);
        assert_eq!(
            ProjPoint::new(&f, [Elem::ZERO; 3]),
            Err(PlaneError::ZeroVector)
        );
    }

    #[test]
    fn lines_through_points() {
        let f = make_field(3, 1).unwrap();
        let x = pt(&f, ["1", "0", "0"]);
        let y = pt(&f, ["0", "1", "0"]);
        let z = pt(&f, ["0", "0", "1"]);
        let one = f.one();
        let zero = Elem::ZERO;
        assert_eq!(line_through(&f, &x, &y).unwrap(), HomogeneousForm::linear(zero, zero, one));
        assert_eq!(line_through(&f, &z, &y).unwrap(), HomogeneousForm::linear(one, zero, zero));
        let l = line_through(&f, &pt(&f, ["1", "1", "1"]), &x).unwrap();
        assert_eq!(l, HomogeneousForm::linear(zero, one, f.neg(one)));
        assert_eq!(line_through(&f, &x, &x), Err(PlaneError::SamePoints));
    }

    #[test]
    fn restriction_examples() {
        let f = make_field(5, 1).unwrap();
        let x = pt(&f, ["1", "0", "0"]);
        let y = pt(&f, ["0", "1", "0"]);
        let z = pt(&f, ["0", "0", "1"]);
        let xy = HomogeneousForm::from_terms(&f, 2, &[(f.one(), [1, 1, 0])]);
        assert!(xy.restrict(&f, &LineParam::through(&f, &z, &x).unwrap()).is_zero());
        assert!(xy.restrict(&f, &LineParam::through(&f, &z, &y).unwrap()).is_zero());
        let g = xy.restrict(&f, &LineParam::through(&f, &x, &y).unwrap());
        assert_eq!(g, Poly::monomial(f.one(), 1));
        let zz = HomogeneousForm::from_terms(&f, 2, &[(f.one(), [0, 0, 2])]);
        assert!(zz.restrict(&f, &LineParam::through(&f, &x, &y).unwrap()).is_zero());
        let l = LineParam::through(&f, &x, &z).unwrap();
        assert!(l.form().restrict(&f, &l).is_zero());
    }

    #[test]
    fn vanishing_orders() {
        let f = make_field(7, 1).unwrap();
        let p = pt(&f, ["1", "2", "3"]);
        let q = pt(&f, ["0", "1", "4"]);
        let l = LineParam::through(&f, &q, &p).unwrap();
        // a line through p transverse to l, squared, times a form nonzero at p
        let m = line_through(&f, &p, &pt(&f, ["0", "0", "1"])).unwrap();
        let other = HomogeneousForm::linear(f.one(), f.one(), f.one());
        assert!(!other.eval(&f, &p).is_zero());
        let g = m.mul(&f, &m).mul(&f, &other);
        assert_eq!(g.vanishing_order(&f, &l, &p).unwrap(), Order::Finite(2));
        assert_eq!(other.vanishing_order(&f, &l, &p).unwrap(), Order::Finite(0));
        assert_eq!(l.form().vanishing_order(&f, &l, &p).unwrap(), Order::Infinite);
        // p is the direction of l here: the swapped chart is used
        assert_eq!(l.position(&f, &p).unwrap(), LinePosition::Infinity);
        let off = pt(&f, ["1", "0", "0"]);
        assert!(g.vanishing_order(&f, &l, &off).is_err());
    }

    #[test]
    fn line_parametrization_covers_line() {
        for (pp, e) in [(2, 2), (3, 2), (2, 4)] {
            let f = make_field(pp, e).unwrap();
            let all = enumerate_points(&f);
            for form in enumerate_lines(&f).iter().step_by(3) {
                let l = LineParam::from_form(&f, form).unwrap();
                let mut pts = l.points(&f);
                assert_eq!(pts.len(), f.order() + 1);
                pts.sort();
                pts.dedup();
                assert_eq!(pts.len(), f.order() + 1);
                let on: Vec<_> = all.iter().filter(|p| l.contains(&f, p)).copied().collect();
                assert_eq!(on, pts);
                for (i, p) in l.points(&f).iter().enumerate() {
                    let pos = l.position(&f, p).unwrap();
                    if i < f.order() {
                        assert_eq!(pos, LinePosition::At(Elem(i as u16)));
                    } else {
                        assert_eq!(pos, LinePosition::Infinity);
                    }
                }
            }
        }
    }

    #[test]
    fn taylor_rows_match_restriction() {
        let f = make_field(3, 2).unwrap();
        let p = pt(&f, ["1", "01", "2"]);
        let q = pt(&f, ["0", "1", "11"]);
        let l = LineParam::through(&f, &p, &q).unwrap();
        let h = HomogeneousForm::new(3, (1..=10).map(|i| f.from_int(i * 7 % 9)).collect()).unwrap();
        let g = h.restrict(&f, &l);
        let rows = l.taylor_rows(&f, 3, 4);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(dot(&f, row, h.coeffs()), g.coeff(r));
        }
    }

    #[test]
    fn form_gcd() {
        let f = make_field(3, 2).unwrap();
        let one = f.one();
        let zero = Elem::ZERO;
        let x = HomogeneousForm::linear(one, zero, zero);
        let z = HomogeneousForm::linear(zero, zero, one);
        let l = HomogeneousForm::linear(one, f.parse("01").unwrap(), one);
        let conic = HomogeneousForm::from_terms(&f, 2, &[(one, [2, 0, 0]), (one, [0, 1, 1])]);
        let a = l.mul(&f, &conic).mul(&f, &z);
        let b = l.mul(&f, &x).mul(&f, &z).mul(&f, &z);
        assert_eq!(a.gcd(&f, &b), l.mul(&f, &z).normalized(&f));
        assert!(conic.is_coprime(&f, &x));
        assert!(!a.is_coprime(&f, &conic));
    }
}
