//! Geometric witnesses for `h^1(I_Z(d)) > 0`: lines, conics and cubics
//! meeting the scheme in high degree, and complete intersections.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::Field;
use crate::matrix::{scan_span, ScanCoverage};
use crate::plane::{line_through, HomogeneousForm};
use crate::scheme::ZeroScheme;

/// Kernels up to this many projective points are scanned completely.
pub const CURVE_SCAN_LIMIT: u128 = 1_000_000;
/// Random combinations tried when a kernel is too large to scan.
pub const CURVE_SCAN_SAMPLES: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("degree {z} is outside every regime for d = {d}")]
    OutOfRange { z: usize, d: usize },
    #[error("{kind:?} witness found but h1 = 0")]
    Unsound { kind: WitnessKind },
    #[error("expected a scheme of degree {expected}, got {got}")]
    DegreeMismatch { expected: usize, got: usize },
    #[error("expected a cubic, got a form of degree {0}")]
    NotACubic(usize),
    #[error("the scheme is not contained in the cubic")]
    NotContained,
}

/// Which part of the classification applies, by `z = deg Z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    /// `z <= d + 1`: always `h1 = 0`.
    A,
    /// `d + 2 <= z <= 2d + 1`: lines.
    B,
    /// `2d + 2 <= z <= 3d - 1`: lines and conics.
    C,
    /// `z = 3d`: lines, conics, complete intersections of a cubic.
    D,
    /// `3d + 1 <= z <= 4d - 5`: all of the above and cubics through
    /// `3d + 1`.
    E,
}

pub fn regime(z: usize, d: usize) -> Result<Regime, ClassifyError> {
    let r = if z <= d + 1 {
        Regime::A
    } else if z <= 2 * d + 1 {
        Regime::B
    } else if d >= 2 && z < 3 * d {
        Regime::C
    } else if d >= 3 && z == 3 * d {
        Regime::D
    } else if d >= 4 && z + 5 <= 4 * d {
        Regime::E
    } else {
        return Err(ClassifyError::OutOfRange { z, d });
    };
    Ok(r)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WitnessKind {
    /// A line with `deg(T ∩ Z) >= d + 2`.
    LineD2,
    /// A conic with `deg(T ∩ Z) >= 2d + 2`.
    Conic2D2,
    /// A degree `3d` subscheme cut out by a cubic and a degree-`d` curve.
    CubicCI,
    /// A cubic with `deg(T ∩ Z) >= 3d + 1`.
    Cubic3D1,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub kind: WitnessKind,
    pub curve: HomogeneousForm,
    pub intersection_degree: usize,
    /// The complete intersection `W` for [`WitnessKind::CubicCI`].
    pub subscheme: Option<ZeroScheme>,
    /// The degree-`d` curve with `W = T ∩ C_d`.
    pub partner: Option<HomogeneousForm>,
    /// Dimension of the space of cubics through `W`.
    pub cubics_through: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub regime: Regime,
    /// Decided by the witness search alone.
    pub h1_positive: bool,
    pub witness: Option<Witness>,
    /// `h1` from the condition matrix.
    pub oracle_h1: usize,
    /// `Sampled` when some kernel was too large to scan completely.
    pub coverage: ScanCoverage,
}

/// Decides `h1(I_Z(d)) > 0` by searching for a witness curve, and checks
/// any witness against the rank computation.
pub fn classify(f: &Field, z: &ZeroScheme, d: usize, seed: u64) -> Result<Classification, ClassifyError> {
    let reg = regime(z.degree(), d)?;
    let oracle_h1 = z.cohomology(f, d).h1;
    let mut search = Search {
        f,
        z,
        d,
        seed,
        coverage: ScanCoverage::Complete,
    };
    let witness = match reg {
        Regime::A => None,
        Regime::B => search.line(),
        Regime::C => search.line().or_else(|| search.conic()),
        Regime::D => search
            .line()
            .or_else(|| search.conic())
            .or_else(|| search.whole_ci()),
        Regime::E => search
            .line()
            .or_else(|| search.conic())
            .or_else(|| search.cubic()),
    };
    if let Some(w) = &witness {
        if oracle_h1 == 0 {
            return Err(ClassifyError::Unsound { kind: w.kind });
        }
    }
    Ok(Classification {
        regime: reg,
        h1_positive: witness.is_some(),
        witness,
        oracle_h1,
        coverage: search.coverage,
    })
}

/// A degree-`d` form through `z` sharing no component with `t3`, if the
/// forms through `z` contain one. `z` must have degree `3d` and lie on `t3`.
pub fn complete_intersection_check(
    f: &Field,
    z: &ZeroScheme,
    t3: &HomogeneousForm,
    d: usize,
    seed: u64,
) -> Result<Option<HomogeneousForm>, ClassifyError> {
    if z.degree() != 3 * d {
        return Err(ClassifyError::DegreeMismatch {
            expected: 3 * d,
            got: z.degree(),
        });
    }
    if t3.degree() != 3 {
        return Err(ClassifyError::NotACubic(t3.degree()));
    }
    if !z.lies_on(f, t3) {
        return Err(ClassifyError::NotContained);
    }
    Ok(partner(f, z, t3, d, seed).0)
}

fn partner(
    f: &Field,
    z: &ZeroScheme,
    t3: &HomogeneousForm,
    d: usize,
    seed: u64,
) -> (Option<HomogeneousForm>, ScanCoverage) {
    let kernel = z.forms_through(f, d);
    let mut hit = None;
    let cov = scan_span(f, &kernel, CURVE_SCAN_LIMIT, CURVE_SCAN_SAMPLES, seed, |v| {
        let c = HomogeneousForm::new(d, v.to_vec()).expect("kernel vector length");
        if c.is_coprime(f, t3) {
            hit = Some(c.normalized(f));
            true
        } else {
            false
        }
    });
    (hit, cov)
}

/// Number of sub-multiplicity vectors `0 <= v_i <= m_i` summing to `target`.
pub fn count_subschemes(mults: &[usize], target: usize) -> u128 {
    let mut ways = vec![0u128; target + 1];
    ways[0] = 1;
    for &m in mults {
        let mut next = vec![0u128; target + 1];
        for (t, &w) in ways.iter().enumerate() {
            if w == 0 {
                continue;
            }
            for v in 0..=m.min(target - t) {
                next[t + v] += w;
            }
        }
        ways = next;
    }
    ways[target]
}

/// Visits sub-multiplicity vectors summing to `target` until `visit`
/// returns `true`.
pub fn for_each_subscheme<F: FnMut(&[usize]) -> bool>(mults: &[usize], target: usize, mut visit: F) -> bool {
    let n = mults.len();
    // suffix[i] = sum of mults[i..]
    let mut suffix = vec![0; n + 1];
    for i in (0..n).rev() {
        suffix[i] = suffix[i + 1] + mults[i];
    }
    let mut cur = vec![0; n];
    fn go<F: FnMut(&[usize]) -> bool>(
        i: usize,
        left: usize,
        mults: &[usize],
        suffix: &[usize],
        cur: &mut [usize],
        visit: &mut F,
    ) -> bool {
        if i == mults.len() {
            return left == 0 && visit(cur);
        }
        if suffix[i] < left {
            return false;
        }
        for v in (0..=mults[i].min(left)).rev() {
            cur[i] = v;
            if go(i + 1, left - v, mults, suffix, cur, visit) {
                return true;
            }
        }
        cur[i] = 0;
        false
    }
    go(0, target, mults, &suffix, &mut cur, &mut visit)
}

struct Search<'a> {
    f: &'a Field,
    z: &'a ZeroScheme,
    d: usize,
    seed: u64,
    coverage: ScanCoverage,
}

impl Search<'_> {
    fn note(&mut self, cov: ScanCoverage) {
        if cov == ScanCoverage::Sampled {
            self.coverage = ScanCoverage::Sampled;
        }
    }

    fn witness(&self, kind: WitnessKind, curve: HomogeneousForm) -> Witness {
        let curve = curve.normalized(self.f);
        Witness {
            kind,
            intersection_degree: self.z.intersection_degree(self.f, &curve),
            curve,
            subscheme: None,
            partner: None,
            cubics_through: None,
        }
    }

    /// Lines through two support points, and carrier lines.
    fn line(&mut self) -> Option<Witness> {
        let f = self.f;
        let pts = self.z.support();
        let mut seen = HashSet::new();
        let mut candidates = Vec::new();
        for c in self.z.components() {
            if let Some(l) = c.carrier() {
                candidates.push(l.form().clone());
            }
        }
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                candidates.push(line_through(f, &pts[i], &pts[j]).expect("distinct support"));
            }
        }
        candidates
            .into_iter()
            .filter(|l| seen.insert(l.clone()))
            .find(|l| self.z.intersection_degree(f, l) >= self.d + 2)
            .map(|l| self.witness(WitnessKind::LineD2, l))
    }

    /// Curves of degree `deg` meeting `Z` in degree at least `target`, found
    /// from subschemes of degree `target` (any kernel form works) or of
    /// degree `seed_size` (kernels are scanned), whichever list is shorter.
    fn curve_through(&mut self, deg: usize, target: usize, seed_size: usize) -> Option<HomogeneousForm> {
        let f = self.f;
        let mults = self.z.multiplicities();
        let full = count_subschemes(&mults, target);
        if full == 0 {
            return None;
        }
        let mut found = None;
        if full <= count_subschemes(&mults, seed_size) {
            for_each_subscheme(&mults, target, |v| {
                let k = self.z.sub_scheme(v).forms_through(f, deg);
                if let Some(t) = k.into_iter().next() {
                    found = Some(HomogeneousForm::new(deg, t).expect("length"));
                }
                found.is_some()
            });
        } else {
            let (z, seed) = (self.z, self.seed);
            let mut cov = ScanCoverage::Complete;
            for_each_subscheme(&mults, seed_size, |v| {
                let k = z.sub_scheme(v).forms_through(f, deg);
                let c = scan_span(f, &k, CURVE_SCAN_LIMIT, CURVE_SCAN_SAMPLES, seed, |t| {
                    let t = HomogeneousForm::new(deg, t.to_vec()).expect("length");
                    if z.intersection_degree(f, &t) >= target {
                        found = Some(t);
                        true
                    } else {
                        false
                    }
                });
                if c == ScanCoverage::Sampled {
                    cov = c;
                }
                found.is_some()
            });
            self.note(cov);
        }
        found
    }

    fn conic(&mut self) -> Option<Witness> {
        self.curve_through(2, 2 * self.d + 2, 5)
            .map(|t| self.witness(WitnessKind::Conic2D2, t))
    }

    /// Regime (d): `Z` itself must be a complete intersection.
    fn whole_ci(&mut self) -> Option<Witness> {
        let z = self.z.clone();
        self.ci_on(&z)
    }

    /// Tries every cubic through `w` (degree `3d`) as `T_3`.
    fn ci_on(&mut self, w: &ZeroScheme) -> Option<Witness> {
        let f = self.f;
        let d = self.d;
        let cubics = w.forms_through(f, 3);
        let dim = cubics.len();
        let mut found = None;
        let mut inner = ScanCoverage::Complete;
        let seed = self.seed;
        let cov = scan_span(f, &cubics, CURVE_SCAN_LIMIT, CURVE_SCAN_SAMPLES, seed, |t| {
            let t3 = HomogeneousForm::new(3, t.to_vec()).expect("length");
            let (p, c) = partner(f, w, &t3, d, seed);
            if c == ScanCoverage::Sampled {
                inner = c;
            }
            if let Some(p) = p {
                found = Some((t3, p));
            }
            found.is_some()
        });
        self.note(cov);
        self.note(inner);
        found.map(|(t3, p)| {
            let mut wit = self.witness(WitnessKind::CubicCI, t3);
            wit.subscheme = Some(w.clone());
            wit.partner = Some(p);
            wit.cubics_through = Some(dim);
            wit
        })
    }

    /// Regime (e): cubics through `3d + 1`, then complete intersections on
    /// degree `3d` subschemes.
    fn cubic(&mut self) -> Option<Witness> {
        let f = self.f;
        let d = self.d;
        let mults = self.z.multiplicities();
        let full = count_subschemes(&mults, 3 * d) + count_subschemes(&mults, 3 * d + 1);
        if full <= count_subschemes(&mults, 9) {
            if let Some(t) = self.curve_through(3, 3 * d + 1, 3 * d + 1) {
                return Some(self.witness(WitnessKind::Cubic3D1, t));
            }
            let mut found = None;
            let z = self.z.clone();
            for_each_subscheme(&mults, 3 * d, |v| {
                let w = z.sub_scheme(v);
                found = self.ci_on(&w);
                found.is_some()
            });
            return found;
        }
        let z = self.z.clone();
        let seed = self.seed;
        let mut found = None;
        let mut cov = ScanCoverage::Complete;
        for_each_subscheme(&mults, 9, |v| {
            let k = z.sub_scheme(v).forms_through(f, 3);
            let c = scan_span(f, &k, CURVE_SCAN_LIMIT, CURVE_SCAN_SAMPLES, seed, |t| {
                let t3 = HomogeneousForm::new(3, t.to_vec()).expect("length");
                let meet = z.intersection(f, &t3);
                if meet.degree() > 3 * d {
                    found = Some(self.witness(WitnessKind::Cubic3D1, t3));
                } else if meet.degree() == 3 * d {
                    found = self.ci_on(&meet);
                }
                found.is_some()
            });
            if c == ScanCoverage::Sampled {
                cov = c;
            }
            found.is_some()
        });
        self.note(cov);
        found
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regimes() {
        assert_eq!(regime(5, 4), Ok(Regime::A));
        assert_eq!(regime(6, 4), Ok(Regime::B));
        assert_eq!(regime(9, 4), Ok(Regime::B));
        assert_eq!(regime(10, 4), Ok(Regime::C));
        assert_eq!(regime(11, 4), Ok(Regime::C));
        assert_eq!(regime(12, 4), Ok(Regime::D));
        assert!(regime(13, 4).is_err());
        assert!(regime(16, 5).is_err());
        assert_eq!(regime(19, 6), Ok(Regime::E));
        assert!(regime(4, 1).is_err());
        assert_eq!(regime(9, 3), Ok(Regime::D));
    }

    #[test]
    fn subscheme_counts() {
        assert_eq!(count_subschemes(&[1, 1, 1, 1], 2), 6);
        assert_eq!(count_subschemes(&[3, 2], 3), 3);
        let mut n = 0;
        for_each_subscheme(&[3, 2, 1], 3, |v| {
            assert_eq!(v.iter().sum::<usize>(), 3);
            n += 1;
            false
        });
        assert_eq!(n as u128, count_subschemes(&[3, 2, 1], 3));
    }
}
