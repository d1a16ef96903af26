//! Zero-dimensional schemes made of reduced points and curvilinear fat
//! points carried by lines, with their interpolation conditions.

use thiserror::Error;

use crate::curve::{CurveError, HermitianCurve};
use crate::field::Field;
use crate::matrix::Matrix;
use crate::plane::{monomial_count, monomial_values, HomogeneousForm, LineParam, PlaneError, ProjPoint};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemeError {
    #[error("multiplicity must be at least 1")]
    ZeroMultiplicity,
    #[error("fat point {0} of multiplicity {1} needs a carrier line")]
    MissingCarrier(String, usize),
    #[error("point {0} appears twice")]
    RepeatedPoint(String),
    #[error("multiplicity {mult} at {point} exceeds q + 1 = {max}")]
    MultiplicityTooLarge { point: String, mult: usize, max: usize },
    #[error(transparent)]
    Plane(#[from] PlaneError),
    #[error(transparent)]
    Curve(#[from] CurveError),
}

/// The degree-`mult` subscheme of the carrier line concentrated at `point`.
/// A reduced point may omit the carrier.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FatPoint {
    point: ProjPoint,
    mult: usize,
    carrier: Option<LineParam>,
}

impl FatPoint {
    pub fn reduced(point: ProjPoint) -> Self {
        FatPoint {
            point,
            mult: 1,
            carrier: None,
        }
    }

    pub fn new(
        f: &Field,
        point: ProjPoint,
        mult: usize,
        carrier: Option<&HomogeneousForm>,
    ) -> Result<Self, SchemeError> {
        if mult == 0 {
            return Err(SchemeError::ZeroMultiplicity);
        }
        let carrier = match carrier {
            // a reduced point does not remember its line
            Some(l) if mult >= 2 => Some(LineParam::centered(f, l, &point)?),
            Some(l) => {
                if !l.eval(f, &point).is_zero() {
                    return Err(PlaneError::NotOnLine(point.display(f)).into());
                }
                None
            }
            None if mult >= 2 => return Err(SchemeError::MissingCarrier(point.display(f), mult)),
            None => None,
        };
        Ok(FatPoint {
            point,
            mult,
            carrier,
        })
    }

    pub fn point(&self) -> &ProjPoint {
        &self.point
    }

    pub fn mult(&self) -> usize {
        self.mult
    }

    /// The carrier, parametrized with the support point at `t = 0`.
    pub fn carrier(&self) -> Option<&LineParam> {
        self.carrier.as_ref()
    }

    /// The same point with a different multiplicity (`None` for 0).
    pub fn with_mult(&self, mult: usize) -> Option<FatPoint> {
        (mult > 0).then(|| FatPoint {
            point: self.point,
            mult,
            carrier: if mult >= 2 { self.carrier.clone() } else { None },
        })
    }

    fn rows(&self, f: &Field, d: usize) -> Vec<Vec<crate::field::Elem>> {
        match &self.carrier {
            Some(l) => l.taylor_rows(f, d, self.mult),
            None => vec![monomial_values(f, self.point.coords(), d)],
        }
    }

    fn meet_degree(&self, f: &Field, t: &HomogeneousForm) -> usize {
        match &self.carrier {
            Some(l) => t
                .vanishing_order(f, l, &self.point)
                .expect("carrier contains its point")
                .clamp(self.mult),
            None => usize::from(t.eval(f, &self.point).is_zero()),
        }
    }
}

/// `h^0` and `h^1` of `I_Z(d)` and the rank of the condition matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CohomologyResult {
    pub h0: usize,
    pub h1: usize,
    pub rank: usize,
}

/// A finite union of fat points with distinct supports.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct ZeroScheme {
    components: Vec<FatPoint>,
}

impl ZeroScheme {
    pub fn empty() -> Self {
        ZeroScheme::default()
    }

    pub fn new(f: &Field, components: Vec<FatPoint>) -> Result<Self, SchemeError> {
        for (i, c) in components.iter().enumerate() {
            if components[..i].iter().any(|o| o.point == c.point) {
                return Err(SchemeError::RepeatedPoint(c.point.display(f)));
            }
        }
        Ok(ZeroScheme { components })
    }

    /// Reduced scheme on distinct points.
    pub fn reduced(f: &Field, points: &[ProjPoint]) -> Result<Self, SchemeError> {
        ZeroScheme::new(f, points.iter().map(|&p| FatPoint::reduced(p)).collect())
    }

    pub fn components(&self) -> &[FatPoint] {
        &self.components
    }

    pub fn degree(&self) -> usize {
        self.components.iter().map(|c| c.mult).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn support(&self) -> Vec<ProjPoint> {
        self.components.iter().map(|c| c.point).collect()
    }

    pub fn multiplicities(&self) -> Vec<usize> {
        self.components.iter().map(|c| c.mult).collect()
    }

    /// The subscheme with component `i` cut down to `mults[i]` (0 drops it).
    pub fn sub_scheme(&self, mults: &[usize]) -> ZeroScheme {
        assert_eq!(mults.len(), self.components.len());
        ZeroScheme {
            components: self
                .components
                .iter()
                .zip(mults)
                .filter_map(|(c, &m)| {
                    assert!(m <= c.mult, "not a subscheme");
                    c.with_mult(m)
                })
                .collect(),
        }
    }

    /// Disjoint union; overlapping supports are an error.
    pub fn union(&self, f: &Field, other: &ZeroScheme) -> Result<ZeroScheme, SchemeError> {
        let mut components = self.components.clone();
        components.extend(other.components.iter().cloned());
        ZeroScheme::new(f, components)
    }

    /// Rows are the conditions `f -> coeff of t^r in f|carrier` at each fat
    /// point, `r < mult`; columns follow the degree-`d` monomial order.
    pub fn condition_matrix(&self, f: &Field, d: usize) -> Matrix {
        let rows = self.components.iter().flat_map(|c| c.rows(f, d)).collect();
        Matrix::from_rows(monomial_count(d), rows)
    }

    pub fn cohomology(&self, f: &Field, d: usize) -> CohomologyResult {
        let rank = self.condition_matrix(f, d).rank(f);
        let n = monomial_count(d);
        let deg = self.degree();
        let res = CohomologyResult {
            h0: n - rank,
            h1: deg - rank,
            rank,
        };
        assert_eq!(res.h0 + deg, res.h1 + n, "Euler characteristic");
        res
    }

    /// Degree-`d` forms vanishing on the scheme, as coefficient vectors.
    pub fn forms_through(&self, f: &Field, d: usize) -> Vec<Vec<crate::field::Elem>> {
        self.condition_matrix(f, d).kernel(f)
    }

    /// `Res_R(Z)`: points off `R` stay, a fat point carried by `R` goes
    /// away, any other component on `R` loses one.
    pub fn residual_by_line(&self, f: &Field, r: &HomogeneousForm) -> Result<ZeroScheme, SchemeError> {
        if r.degree() != 1 || r.is_zero() {
            return Err(PlaneError::NotALine.into());
        }
        let r = r.normalized(f);
        let components = self
            .components
            .iter()
            .filter_map(|c| {
                if !r.eval(f, &c.point).is_zero() {
                    return Some(c.clone());
                }
                match &c.carrier {
                    Some(l) if *l.form() == r => None,
                    _ => c.with_mult(c.mult - 1),
                }
            })
            .collect();
        Ok(ZeroScheme { components })
    }

    /// `deg(T ∩ Z)`, adding `min(mult, order of T along the carrier)` per
    /// fat point.
    pub fn intersection_degree(&self, f: &Field, t: &HomogeneousForm) -> usize {
        self.components.iter().map(|c| c.meet_degree(f, t)).sum()
    }

    /// `T ∩ Z` as a subscheme of `Z`.
    pub fn intersection(&self, f: &Field, t: &HomogeneousForm) -> ZeroScheme {
        let mults: Vec<usize> = self.components.iter().map(|c| c.meet_degree(f, t)).collect();
        self.sub_scheme(&mults)
    }

    /// True when every component is contained in the curve `t = 0`.
    pub fn lies_on(&self, f: &Field, t: &HomogeneousForm) -> bool {
        self.components.iter().all(|c| c.meet_degree(f, t) == c.mult)
    }
}

/// The divisor `sum a_i P_i` of the Hermitian curve as a plane scheme: each
/// fat point is carried by the tangent line.
pub fn build_scheme(x: &HermitianCurve, assignments: &[(ProjPoint, usize)]) -> Result<ZeroScheme, SchemeError> {
    let f = x.field();
    let mut components = Vec::with_capacity(assignments.len());
    for &(p, a) in assignments {
        if !x.contains(&p) {
            return Err(CurveError::NotOnCurve(p.display(f)).into());
        }
        if a > x.q() + 1 {
            return Err(SchemeError::MultiplicityTooLarge {
                point: p.display(f),
                mult: a,
                max: x.q() + 1,
            });
        }
        let tangent = x.tangent_form(&p)?;
        components.push(FatPoint::new(f, p, a, Some(&tangent))?);
    }
    ZeroScheme::new(f, components)
}
