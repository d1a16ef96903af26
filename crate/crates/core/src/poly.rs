//! Univariate polynomials over a finite field, and bivariate gcds via
//! primitive pseudo-remainder sequences.

use crate::field::{Elem, Field};

/// A univariate polynomial, constant term first, without trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Elem>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: Elem) -> Self {
        Poly::new(vec![c])
    }

    pub fn new(mut coeffs: Vec<Elem>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    /// `c * t^k`.
    pub fn monomial(c: Elem, k: usize) -> Self {
        let mut v = vec![Elem::ZERO; k + 1];
        v[k] = c;
        Poly::new(v)
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Elem {
        self.coeffs.get(k).copied().unwrap_or(Elem::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Elem {
        self.coeffs.last().copied().unwrap_or(Elem::ZERO)
    }

    /// Index of the lowest nonzero coefficient, `None` for zero.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn eval(&self, f: &Field, t: Elem) -> Elem {
        self.coeffs
            .iter()
            .rev()
            .fold(Elem::ZERO, |acc, &c| f.add(f.mul(acc, t), c))
    }

    pub fn add(&self, f: &Field, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new(
            (0..n)
                .map(|i| f.add(self.coeff(i), other.coeff(i)))
                .collect(),
        )
    }

    pub fn sub(&self, f: &Field, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new(
            (0..n)
                .map(|i| f.sub(self.coeff(i), other.coeff(i)))
                .collect(),
        )
    }

    pub fn scale(&self, f: &Field, c: Elem) -> Poly {
        Poly::new(self.coeffs.iter().map(|&x| f.mul(x, c)).collect())
    }

    pub fn mul(&self, f: &Field, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Elem::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Poly::new(out)
    }

    /// Product truncated to degree `< len`.
    pub fn mul_trunc(&self, f: &Field, other: &Poly, len: usize) -> Poly {
        let mut out = vec![Elem::ZERO; len.min(self.coeffs.len() + other.coeffs.len())];
        for (i, &a) in self.coeffs.iter().enumerate().take(len) {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate().take(len - i) {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Poly::new(out)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn divrem(&self, f: &Field, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead_inv = f.inv(d.leading()).expect("nonzero leading coefficient");
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut q = vec![Elem::ZERO; r.len() - dd];
        for k in (dd..r.len()).rev() {
            let c = f.mul(r[k], lead_inv);
            if c.is_zero() {
                continue;
            }
            q[k - dd] = c;
            for (i, &di) in d.coeffs.iter().enumerate() {
                r[k - dd + i] = f.sub(r[k - dd + i], f.mul(c, di));
            }
        }
        r.truncate(dd);
        (Poly::new(q), Poly::new(r))
    }

    pub fn monic(&self, f: &Field) -> Poly {
        match f.inv(self.leading()) {
            Some(inv) => self.scale(f, inv),
            None => Poly::zero(),
        }
    }

    /// Monic gcd (zero only if both inputs are zero).
    pub fn gcd(&self, f: &Field, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.divrem(f, &b).1;
            a = std::mem::replace(&mut b, r);
        }
        a.monic(f)
    }

    /// Taylor shift `p(t + c)`.
    pub fn shift(&self, f: &Field, c: Elem) -> Poly {
        // Horner with the linear polynomial t + c
        let lin = Poly::new(vec![c, f.one()]);
        self.coeffs
            .iter()
            .rev()
            .fold(Poly::zero(), |acc, &a| acc.mul(f, &lin).add(f, &Poly::constant(a)))
    }
}

/// A polynomial in `x` whose coefficients are polynomials in `y`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BiPoly {
    /// `terms[i]` is the coefficient of `x^i`.
    terms: Vec<Poly>,
}

impl BiPoly {
    pub fn new(mut terms: Vec<Poly>) -> Self {
        while terms.last().is_some_and(|p| p.is_zero()) {
            terms.pop();
        }
        BiPoly { terms }
    }

    pub fn terms(&self) -> &[Poly] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree_x(&self) -> Option<usize> {
        self.terms.len().checked_sub(1)
    }

    /// Total degree in `x` and `y`.
    pub fn total_degree(&self) -> Option<usize> {
        self.terms
            .iter()
            .enumerate()
            .filter_map(|(i, p)| p.degree().map(|d| i + d))
            .max()
    }

    fn leading(&self) -> &Poly {
        self.terms.last().expect("nonzero bivariate polynomial")
    }

    fn scale(&self, f: &Field, c: &Poly) -> BiPoly {
        BiPoly::new(self.terms.iter().map(|t| t.mul(f, c)).collect())
    }

    /// Content in `F[y]`: the monic gcd of the coefficients.
    pub fn content(&self, f: &Field) -> Poly {
        self.terms
            .iter()
            .fold(Poly::zero(), |acc, t| acc.gcd(f, t))
    }

    /// Divides every coefficient by `c`, which must divide them exactly.
    fn divide_exact(&self, f: &Field, c: &Poly) -> BiPoly {
        BiPoly::new(
            self.terms
                .iter()
                .map(|t| {
                    let (q, r) = t.divrem(f, c);
                    debug_assert!(r.is_zero(), "inexact division by content");
                    q
                })
                .collect(),
        )
    }

    pub fn primitive_part(&self, f: &Field) -> BiPoly {
        if self.is_zero() {
            return BiPoly::default();
        }
        self.divide_exact(f, &self.content(f))
    }

    /// Pseudo-remainder of `self` by `d` with respect to `x`.
    fn pseudo_rem(&self, f: &Field, d: &BiPoly) -> BiPoly {
        let dd = d.degree_x().expect("nonzero divisor");
        let lc = d.leading().clone();
        let mut r = self.clone();
        while let Some(rd) = r.degree_x() {
            if rd < dd {
                break;
            }
            let lr = r.leading().clone();
            let shift = rd - dd;
            let mut next = r.scale(f, &lc).terms;
            for (i, t) in d.terms.iter().enumerate() {
                next[i + shift] = next[i + shift].sub(f, &t.mul(f, &lr));
            }
            r = BiPoly::new(next);
        }
        r
    }

    /// Gcd in `F[x, y]`, normalized so the leading coefficient (highest `x`
    /// power, then highest `y` power) is 1.
    pub fn gcd(&self, f: &Field, other: &BiPoly) -> BiPoly {
        if self.is_zero() {
            return other.normalized(f);
        }
        if other.is_zero() {
            return self.normalized(f);
        }
        let content = self.content(f).gcd(f, &other.content(f));
        let (mut a, mut b) = (self.primitive_part(f), other.primitive_part(f));
        if a.degree_x() < b.degree_x() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            if b.degree_x() == Some(0) {
                // b is a unit after taking primitive parts
                a = BiPoly::new(vec![Poly::constant(f.one())]);
                break;
            }
            let r = a.pseudo_rem(f, &b);
            a = std::mem::replace(&mut b, r.primitive_part(f));
        }
        a.scale(f, &content).normalized(f)
    }

    fn normalized(&self, f: &Field) -> BiPoly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = f.inv(self.leading().leading()).expect("nonzero");
        BiPoly::new(self.terms.iter().map(|t| t.scale(f, inv)).collect())
    }
}
