//! JSON formats for schemes, code descriptions, reports and witnesses.
//!
//! Field elements travel as digit strings (see [`Field::format`]); points
//! and lines as triples of them.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classify::{Regime, Witness, WitnessKind};
use crate::code::{build_code, CodeError, CodeInstance, DualDistance, Guarantee};
use crate::curve::{CurveError, HermitianCurve};
use crate::field::{Elem, Field, FieldError};
use crate::plane::{HomogeneousForm, PlaneError, ProjPoint};
use crate::scheme::{FatPoint, SchemeError, ZeroScheme};

/// Version tag of every top-level JSON document.
pub const SCHEMA: &str = "hermitian-codes/1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WireError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Plane(#[from] PlaneError),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error("form over {0} read with field of order {1}")]
    FieldMismatch(String, usize),
}

pub type Triple = [String; 3];

fn triple(f: &Field, c: [Elem; 3]) -> Triple {
    c.map(|x| f.format(x))
}

fn parse_triple(f: &Field, t: &Triple) -> Result<[Elem; 3], WireError> {
    Ok([f.parse(&t[0])?, f.parse(&t[1])?, f.parse(&t[2])?])
}

pub fn point_to_json(f: &Field, p: &ProjPoint) -> Triple {
    triple(f, p.coords())
}

pub fn point_from_json(f: &Field, t: &Triple) -> Result<ProjPoint, WireError> {
    Ok(ProjPoint::new(f, parse_triple(f, t)?)?)
}

pub fn line_to_json(f: &Field, l: &HomogeneousForm) -> Triple {
    let c = l.coeffs();
    triple(f, [c[0], c[1], c[2]])
}

pub fn line_from_json(f: &Field, t: &Triple) -> Result<HomogeneousForm, WireError> {
    let [a, b, c] = parse_triple(f, t)?;
    let l = HomogeneousForm::linear(a, b, c);
    if l.is_zero() {
        return Err(PlaneError::NotALine.into());
    }
    Ok(l.normalized(f))
}

fn field_name(f: &Field) -> String {
    format!("GF({})", f.order())
}

/// A form as coefficient strings in graded-lex order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormJson {
    pub degree: usize,
    pub field: String,
    pub coeffs: Vec<String>,
}

impl FormJson {
    pub fn new(f: &Field, form: &HomogeneousForm) -> Self {
        FormJson {
            degree: form.degree(),
            field: field_name(f),
            coeffs: form.coeffs().iter().map(|&c| f.format(c)).collect(),
        }
    }

    pub fn to_form(&self, f: &Field) -> Result<HomogeneousForm, WireError> {
        if self.field != field_name(f) {
            return Err(WireError::FieldMismatch(self.field.clone(), f.order()));
        }
        let coeffs = self.coeffs.iter().map(|s| f.parse(s)).collect::<Result<Vec<_>, _>>()?;
        Ok(HomogeneousForm::new(self.degree, coeffs)?)
    }
}

/// One component of a scheme file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentJson {
    pub point: Triple,
    pub mult: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub carrier: Option<Triple>,
}

/// Reads a scheme. A fat point without a carrier lying on `curve` is
/// carried by the tangent there.
pub fn scheme_from_json(
    f: &Field,
    comps: &[ComponentJson],
    curve: Option<&HermitianCurve>,
) -> Result<ZeroScheme, WireError> {
    let mut out = Vec::with_capacity(comps.len());
    for c in comps {
        let p = point_from_json(f, &c.point)?;
        let carrier = match &c.carrier {
            Some(t) => Some(line_from_json(f, t)?),
            None => match curve {
                Some(x) if c.mult >= 2 && x.contains(&p) => Some(x.tangent_form(&p)?),
                _ => None,
            },
        };
        out.push(FatPoint::new(f, p, c.mult, carrier.as_ref())?);
    }
    Ok(ZeroScheme::new(f, out)?)
}

pub fn scheme_to_json(f: &Field, z: &ZeroScheme) -> Vec<ComponentJson> {
    z.components()
        .iter()
        .map(|c| ComponentJson {
            point: point_to_json(f, c.point()),
            mult: c.mult(),
            carrier: c.carrier().map(|l| line_to_json(f, l.form())),
        })
        .collect()
}

/// A code description: `E` as points with multiplicities on the curve,
/// `B` = every other rational point off the deleted lines.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeFile {
    pub q: u32,
    pub d: usize,
    pub points: Vec<(Triple, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deleted_lines: Option<Vec<Triple>>,
    #[serde(default)]
    pub structured_mode: bool,
}

impl CodeFile {
    /// The divisor assignments `(P_i, a_i)`.
    pub fn assignments(&self, curve: &HermitianCurve) -> Result<Vec<(ProjPoint, usize)>, WireError> {
        let f = curve.field();
        self.points
            .iter()
            .map(|(t, a)| Ok((point_from_json(f, t)?, *a)))
            .collect()
    }

    /// The evaluation set `B`.
    pub fn evaluation_points(&self, curve: &HermitianCurve) -> Result<Vec<ProjPoint>, WireError> {
        let f = curve.field();
        let support: Vec<ProjPoint> = self.assignments(curve)?.into_iter().map(|(p, _)| p).collect();
        let deleted = self
            .deleted_lines
            .iter()
            .flatten()
            .map(|t| line_from_json(f, t))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(curve
            .rational_points()
            .iter()
            .filter(|p| !support.contains(p) && deleted.iter().all(|l| !l.eval(f, p).is_zero()))
            .copied()
            .collect())
    }

    pub fn build(&self) -> Result<CodeInstance, WireError> {
        let curve = HermitianCurve::new(self.q)?;
        let e = crate::scheme::build_scheme(&curve, &self.assignments(&curve)?)?;
        let b = self.evaluation_points(&curve)?;
        Ok(build_code(&curve, self.d, &e, &b)?)
    }
}

/// Result of a dual-distance computation. Supports are given as canonical
/// curve-point indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeReport {
    pub schema: String,
    pub n: usize,
    pub k: usize,
    pub dual_distance: Option<usize>,
    pub guarantee: Guarantee,
    pub supports: Vec<Vec<usize>>,
    /// Minimum-weight dual words, nonzero multiples included.
    pub word_count: u64,
}

impl CodeReport {
    pub fn new(code: &CodeInstance, dd: &DualDistance) -> Self {
        let idx = code.point_indices();
        let units = code.field().order() as u64 - 1;
        CodeReport {
            schema: SCHEMA.to_string(),
            n: code.n(),
            k: code.k(),
            dual_distance: dd.weight,
            guarantee: dd.guarantee,
            supports: dd
                .supports
                .iter()
                .map(|s| s.iter().map(|&c| idx[c]).collect())
                .collect(),
            // a minimal dependent set carries one word up to scalars
            word_count: dd.supports.len() as u64 * units,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessJson {
    pub kind: WitnessKind,
    pub curve: FormJson,
    pub intersection_degree: usize,
    pub regime: Regime,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partner: Option<FormJson>,
}

impl WitnessJson {
    pub fn new(f: &Field, w: &Witness, regime: Regime) -> Self {
        WitnessJson {
            kind: w.kind,
            curve: FormJson::new(f, &w.curve),
            intersection_degree: w.intersection_degree,
            regime,
            partner: w.partner.as_ref().map(|p| FormJson::new(f, p)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scheme_round_trip() {
        let x = HermitianCurve::new(3).unwrap();
        let f = x.field();
        let pts = x.rational_points();
        let z = crate::scheme::build_scheme(&x, &[(pts[2], 3), (pts[9], 1)]).unwrap();
        let json = serde_json::to_string(&scheme_to_json(f, &z)).unwrap();
        let back: Vec<ComponentJson> = serde_json::from_str(&json).unwrap();
        assert_eq!(scheme_from_json(f, &back, None).unwrap(), z);
        // carrier omitted: the tangent is filled in
        let bare: Vec<ComponentJson> = back
            .into_iter()
            .map(|c| ComponentJson { carrier: None, ..c })
            .collect();
        assert_eq!(scheme_from_json(f, &bare, Some(&x)).unwrap(), z);
        assert!(scheme_from_json(f, &bare, None).is_err());
    }

    #[test]
    fn form_round_trip() {
        let x = HermitianCurve::new(4).unwrap();
        let f = x.field();
        let j = FormJson::new(f, x.form());
        assert_eq!(j.field, "GF(16)");
        let text = serde_json::to_string(&j).unwrap();
        let back: FormJson = serde_json::from_str(&text).unwrap();
        assert_eq!(&back.to_form(f).unwrap(), x.form());
        let other = HermitianCurve::new(2).unwrap();
        assert!(back.to_form(other.field()).is_err());
    }

    #[test]
    fn code_spec_builds() {
        let text = r#"{"q": 2, "d": 1, "points": [[["0", "1", "0"], 2]], "structured_mode": false}"#;
        let file: CodeFile = serde_json::from_str(text).unwrap();
        let code = file.build().unwrap();
        assert_eq!((code.n(), code.k()), (8, 1));
        let again: CodeFile = serde_json::from_str(&serde_json::to_string(&file).unwrap()).unwrap();
        assert_eq!(again, file);
    }
}
