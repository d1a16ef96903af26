//! The Hermitian curve `x^{q+1} = y z^q + y^q z` over GF(q^2).

use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

use crate::field::{make_field, prime_power, Elem, Field, FieldError};
use crate::plane::{HomogeneousForm, LineParam, Order, PlaneError, ProjPoint};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error("q = {0} is not a prime power")]
    NotPrimePower(u32),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Plane(#[from] PlaneError),
    #[error("point {0} is not on the curve")]
    NotOnCurve(String),
}

#[derive(Debug)]
struct Inner {
    q: usize,
    field: Field,
    form: HomogeneousForm,
    points: Vec<ProjPoint>,
    index: HashMap<ProjPoint, usize>,
}

/// The Hermitian curve over GF(q^2) with its rational points in canonical
/// order. Cloning is cheap.
#[derive(Debug, Clone)]
pub struct HermitianCurve(Arc<Inner>);

impl HermitianCurve {
    pub fn new(q: u32) -> Result<Self, CurveError> {
        let (p, k) = prime_power(q).ok_or(CurveError::NotPrimePower(q))?;
        let field = make_field(p, 2 * k)?;
        let qq = q as usize;
        let one = field.one();
        let form = HomogeneousForm::from_terms(
            &field,
            qq + 1,
            &[
                (one, [qq + 1, 0, 0]),
                (field.neg(one), [0, 1, qq]),
                (field.neg(one), [0, qq, 1]),
            ],
        );

        let mut by_trace: HashMap<Elem, Vec<Elem>> = HashMap::new();
        for y in field.elements() {
            let (_, tr) = field.norm_trace(y)?;
            by_trace.entry(tr).or_default().push(y);
        }
        let mut points = vec![ProjPoint::new(&field, [Elem::ZERO, one, Elem::ZERO])?];
        for x in field.elements() {
            let (n, _) = field.norm_trace(x)?;
            for &y in by_trace.get(&n).map(Vec::as_slice).unwrap_or(&[]) {
                points.push(ProjPoint::new(&field, [x, y, one])?);
            }
        }
        points.sort();
        let index = points.iter().enumerate().map(|(i, p)| (*p, i)).collect();
        Ok(HermitianCurve(Arc::new(Inner {
            q: qq,
            field,
            form,
            points,
            index,
        })))
    }

    pub fn q(&self) -> usize {
        self.0.q
    }

    /// GF(q^2).
    pub fn field(&self) -> &Field {
        &self.0.field
    }

    /// The defining form of degree `q + 1`.
    pub fn form(&self) -> &HomogeneousForm {
        &self.0.form
    }

    pub fn degree(&self) -> usize {
        self.0.q + 1
    }

    pub fn genus(&self) -> usize {
        self.0.q * (self.0.q - 1) / 2
    }

    /// The `q^3 + 1` rational points in canonical order.
    pub fn rational_points(&self) -> &[ProjPoint] {
        &self.0.points
    }

    /// Canonical index of a rational point.
    pub fn index_of(&self, p: &ProjPoint) -> Option<usize> {
        self.0.index.get(p).copied()
    }

    pub fn contains(&self, p: &ProjPoint) -> bool {
        self.0.form.eval(&self.0.field, p).is_zero()
    }

    /// The linear form `F_x(P) x + F_y(P) y + F_z(P) z` from the formal
    /// partials of the defining form.
    pub fn tangent_form(&self, p: &ProjPoint) -> Result<HomogeneousForm, CurveError> {
        let f = &self.0.field;
        if !self.contains(p) {
            return Err(CurveError::NotOnCurve(p.display(f)));
        }
        let g = [0, 1, 2].map(|v| self.0.form.partial(f, v).eval(f, p));
        Ok(HomogeneousForm::linear(g[0], g[1], g[2]).normalized(f))
    }

    /// Tangent line at `p`, parametrized from `p`. The contact order is
    /// checked to be exactly `q + 1`.
    pub fn tangent_line(&self, p: &ProjPoint) -> Result<LineParam, CurveError> {
        let f = &self.0.field;
        let form = self.tangent_form(p)?;
        let line = LineParam::centered(f, &form, p)?;
        let contact = self.contact_order(&line, p)?;
        assert_eq!(contact, self.0.q + 1, "tangent contact order at {}", p.display(f));
        Ok(line)
    }

    /// Order of contact of the curve with `line` at `p` (0 when `p` is off
    /// the curve).
    pub fn contact_order(&self, line: &LineParam, p: &ProjPoint) -> Result<usize, CurveError> {
        match self.0.form.vanishing_order(&self.0.field, line, p)? {
            Order::Finite(k) => Ok(k),
            Order::Infinite => unreachable!("the Hermitian curve contains no line"),
        }
    }

    /// Rational points of the curve on a line, in canonical order.
    pub fn points_on(&self, line: &HomogeneousForm) -> Vec<ProjPoint> {
        let f = &self.0.field;
        self.0
            .points
            .iter()
            .filter(|p| line.eval(f, p).is_zero())
            .copied()
            .collect()
    }
}
