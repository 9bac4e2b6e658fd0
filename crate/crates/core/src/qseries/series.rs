//! Truncated series `Σ c_s q^{offset + s/D}` with exact exponents.
//!
//! A series stores its coefficients on the grid `offset + (1/D)·Z_{>=0}` and
//! carries an exclusive absolute `cutoff`: every coefficient with exponent
//! below the cutoff is exact and nothing at or beyond it is stored. The
//! coefficient type is pluggable, so the same arithmetic drives one-variable
//! series over rationals and q-series whose coefficients are Laurent
//! polynomials in a charge variable.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact coefficient arithmetic needed by [`Series`].
pub trait Coefficient: Clone + PartialEq + fmt::Debug + Send + Sync {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn add_assign(&mut self, rhs: &Self);
    fn sub_assign(&mut self, rhs: &Self);
    fn mul(&self, rhs: &Self) -> Self;
    /// `self / rhs` if the quotient exists in the coefficient ring.
    fn exact_div(&self, rhs: &Self) -> Option<Self>;
}

impl Coefficient for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn add_assign(&mut self, rhs: &Self) {
        *self += rhs;
    }

    fn sub_assign(&mut self, rhs: &Self) {
        *self -= rhs;
    }

    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn exact_div(&self, rhs: &Self) -> Option<Self> {
        if Zero::is_zero(rhs) {
            None
        } else {
            Some(self / rhs)
        }
    }
}

/// Laurent polynomial in the charge variable `y`, stored as `charge -> coefficient`.
///
/// The charge is the `h`-eigenvalue of the `sl_2` Cartan element, i.e. twice
/// the exponent of the usual `z` variable.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, BigRational>,
}

impl LaurentPoly {
    pub fn monomial(charge: i64, coeff: BigRational) -> Self {
        let mut p = LaurentPoly::default();
        if !Zero::is_zero(&coeff) {
            p.terms.insert(charge, coeff);
        }
        p
    }

    pub fn get(&self, charge: i64) -> Option<&BigRational> {
        self.terms.get(&charge)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &BigRational)> {
        self.terms.iter().map(|(&c, v)| (c, v))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, charge: i64, coeff: &BigRational) {
        let slot = self.terms.entry(charge).or_insert_with(Zero::zero);
        *slot += coeff;
        if Zero::is_zero(slot) {
            self.terms.remove(&charge);
        }
    }

    fn bounds(&self) -> Option<(i64, i64)> {
        Some((*self.terms.keys().next()?, *self.terms.keys().next_back()?))
    }
}

impl Coefficient for LaurentPoly {
    fn zero() -> Self {
        LaurentPoly::default()
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_assign(&mut self, rhs: &Self) {
        for (&c, v) in &rhs.terms {
            self.add_term(c, v);
        }
    }

    fn sub_assign(&mut self, rhs: &Self) {
        for (&c, v) in &rhs.terms {
            self.add_term(c, &-v);
        }
    }

    fn mul(&self, rhs: &Self) -> Self {
        let mut out = LaurentPoly::default();
        for (&a, x) in &self.terms {
            for (&b, y) in &rhs.terms {
                out.add_term(a + b, &(x * y));
            }
        }
        out
    }

    /// Long division from the top degree; `None` unless the remainder vanishes.
    fn exact_div(&self, rhs: &Self) -> Option<Self> {
        let (d_lo, d_hi) = rhs.bounds()?;
        let lead = &rhs.terms[&d_hi];
        let mut rem = self.clone();
        let mut quot = LaurentPoly::default();
        while let Some((r_lo, r_hi)) = rem.bounds() {
            let shift = r_hi - d_hi;
            if r_lo - d_lo > shift {
                return None;
            }
            let q = &rem.terms[&r_hi] / lead;
            for (&c, v) in &rhs.terms {
                rem.add_term(c + shift, &-(&q * v));
            }
            quot.add_term(shift, &q);
        }
        Some(quot)
    }
}

/// A truncated series with coefficients of type `C`.
///
/// Equality compares the represented terms and the cutoff, not the grid
/// they happen to be stored on.
#[derive(Debug, Clone)]
pub struct Series<C> {
    offset: Rational64,
    step_denominator: u64,
    terms: BTreeMap<u64, C>,
    cutoff: Rational64,
}

/// One-variable series over exact rationals.
pub type PuiseuxSeries = Series<BigRational>;

/// q-series whose coefficients are Laurent polynomials in the charge variable.
pub type TwoVarSeries = Series<LaurentPoly>;

impl<C: Coefficient> PartialEq for Series<C> {
    fn eq(&self, other: &Self) -> bool {
        self.cutoff == other.cutoff && self.iter().eq(other.iter())
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

impl<C: Coefficient> Series<C> {
    /// The zero series, exact below `cutoff`.
    pub fn zero(offset: Rational64, step_denominator: u64, cutoff: Rational64) -> Self {
        assert!(step_denominator > 0, "step denominator must be positive");
        Series {
            offset,
            step_denominator,
            terms: BTreeMap::new(),
            cutoff,
        }
    }

    /// Builds a series from `(exponent, coefficient)` pairs, summing repeats
    /// and dropping anything at or beyond `cutoff`.
    pub fn from_terms<I>(
        offset: Rational64,
        step_denominator: u64,
        cutoff: Rational64,
        terms: I,
    ) -> Result<Self>
    where
        I: IntoIterator<Item = (Rational64, C)>,
    {
        let mut s = Self::zero(offset, step_denominator, cutoff);
        for (e, c) in terms {
            s.add_term(e, &c)?;
        }
        Ok(s)
    }

    fn step_of(&self, exponent: Rational64) -> Result<u64> {
        let scaled =
            (exponent - self.offset) * Rational64::from_integer(self.step_denominator as i64);
        if !scaled.is_integer() || scaled.is_negative() {
            return Err(Error::InvalidArgument(format!(
                "exponent {exponent} is not on the grid {} + Z/{}",
                self.offset, self.step_denominator
            )));
        }
        Ok(scaled.to_integer() as u64)
    }

    /// Adds `coeff·q^exponent`; terms at or beyond the cutoff are ignored.
    pub fn add_term(&mut self, exponent: Rational64, coeff: &C) -> Result<()> {
        let step = self.step_of(exponent)?;
        if exponent >= self.cutoff || coeff.is_zero() {
            return Ok(());
        }
        let slot = self.terms.entry(step).or_insert_with(C::zero);
        slot.add_assign(coeff);
        if slot.is_zero() {
            self.terms.remove(&step);
        }
        Ok(())
    }

    pub fn offset(&self) -> Rational64 {
        self.offset
    }

    pub fn step_denominator(&self) -> u64 {
        self.step_denominator
    }

    /// Exclusive absolute exponent bound below which the series is exact.
    pub fn cutoff(&self) -> Rational64 {
        self.cutoff
    }

    #[inline]
    pub fn exponent(&self, step: u64) -> Rational64 {
        self.offset + Rational64::new(step as i64, self.step_denominator as i64)
    }

    /// Nonzero terms as `(exponent, coefficient)` in increasing exponent order.
    pub fn iter(&self) -> impl Iterator<Item = (Rational64, &C)> + '_ {
        self.terms.iter().map(|(&s, c)| (self.exponent(s), c))
    }

    /// Nonzero terms as `(step, coefficient)`.
    pub fn steps(&self) -> impl Iterator<Item = (u64, &C)> + '_ {
        self.terms.iter().map(|(&s, c)| (s, c))
    }

    pub fn coeff(&self, exponent: Rational64) -> Option<&C> {
        self.step_of(exponent).ok().and_then(|s| self.terms.get(&s))
    }

    pub fn lowest_exponent(&self) -> Option<Rational64> {
        self.terms.keys().next().map(|&s| self.exponent(s))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Same as [`Series::is_empty`]: no stored term below the cutoff.
    pub fn is_zero(&self) -> bool {
        self.is_empty()
    }

    /// Lower bound on every exponent that can appear: the lowest stored
    /// exponent, or the cutoff for the zero series.
    fn valuation(&self) -> Rational64 {
        self.lowest_exponent().unwrap_or(self.cutoff)
    }

    /// Re-expresses the series on the finer grid `offset + Z/step_denominator`.
    pub fn rebase(&self, offset: Rational64, step_denominator: u64) -> Result<Self> {
        let mut out = Self::zero(offset, step_denominator, self.cutoff);
        for (e, c) in self.iter() {
            let step = out.step_of(e)?;
            out.terms.insert(step, c.clone());
        }
        Ok(out)
    }

    /// Both series on one grid whose base is the smaller offset.
    fn aligned(&self, other: &Self) -> Result<(Self, Self)> {
        let delta = self.offset - other.offset;
        let d = lcm(
            lcm(self.step_denominator, other.step_denominator),
            *delta.denom() as u64,
        );
        let base = self.offset.min(other.offset);
        Ok((self.rebase(base, d)?, other.rebase(base, d)?))
    }

    /// Lowers the cutoff and drops terms at or beyond it.
    pub fn truncate(&self, cutoff: Rational64) -> Self {
        let cutoff = cutoff.min(self.cutoff);
        let mut out = Self::zero(self.offset, self.step_denominator, cutoff);
        out.terms = self
            .terms
            .iter()
            .filter(|(&s, _)| self.exponent(s) < cutoff)
            .map(|(&s, c)| (s, c.clone()))
            .collect();
        out
    }

    /// Multiplies by `q^delta`.
    pub fn shift(&self, delta: Rational64) -> Self {
        let mut out = self.clone();
        out.offset += delta;
        out.cutoff += delta;
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, true)
    }

    fn combine(&self, other: &Self, negate: bool) -> Result<Self> {
        let (mut a, b) = self.aligned(other)?;
        a.cutoff = a.cutoff.min(b.cutoff);
        for (s, c) in b.terms {
            let slot = a.terms.entry(s).or_insert_with(C::zero);
            if negate {
                slot.sub_assign(&c);
            } else {
                slot.add_assign(&c);
            }
        }
        let cutoff = a.cutoff;
        Ok(a.truncate(cutoff).pruned())
    }

    fn pruned(mut self) -> Self {
        self.terms.retain(|_, c| !c.is_zero());
        self
    }

    /// Product, exact below `min(cutoff_a + val_b, cutoff_b + val_a)`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        let d = lcm(self.step_denominator, other.step_denominator);
        let a = self.rebase(self.offset, d)?;
        let b = other.rebase(other.offset, d)?;
        let cutoff = (a.cutoff + b.valuation()).min(b.cutoff + a.valuation());
        let mut out = Self::zero(a.offset + b.offset, d, cutoff);
        for (&sa, ca) in &a.terms {
            for (&sb, cb) in &b.terms {
                let step = sa + sb;
                if out.exponent(step) >= cutoff {
                    break;
                }
                let prod = ca.mul(cb);
                let slot = out.terms.entry(step).or_insert_with(C::zero);
                slot.add_assign(&prod);
            }
        }
        Ok(out.pruned())
    }

    /// Quotient by leading-term recursion. The leading coefficient of the
    /// divisor must divide every remainder head exactly.
    pub fn div(&self, other: &Self) -> Result<Self> {
        let (a, b) = self.aligned(other)?;
        let (&lead_step, lead) = b
            .terms
            .iter()
            .next()
            .ok_or_else(|| Error::DivisionFailure("divisor is zero below its cutoff".into()))?;
        let lead_exp = b.exponent(lead_step);
        let val_q = a.valuation() - lead_exp;
        let cutoff = (a.cutoff - lead_exp).min(b.cutoff - lead_exp + val_q);
        let d = a.step_denominator;
        let mut quot = Self::zero(val_q, d, cutoff);
        let Some(&first) = a.terms.keys().next() else {
            return Ok(quot);
        };
        // A remainder term at step s of the common grid contributes the
        // quotient term at exponent a.exponent(s) - lead_exp, i.e. step s - first.
        let tail: Vec<(u64, &C)> = b
            .terms
            .iter()
            .skip(1)
            .map(|(&s, c)| (s - lead_step, c))
            .collect();
        let mut rem: BTreeMap<u64, C> = a.terms.clone();
        while let Some((s, head)) = rem.pop_first() {
            if quot.exponent(s - first) >= cutoff {
                break;
            }
            let q = head.exact_div(lead).ok_or_else(|| {
                Error::DivisionFailure(format!(
                    "leading coefficient does not divide the remainder at exponent {}",
                    a.exponent(s)
                ))
            })?;
            for &(t, bt) in &tail {
                let target = s + t;
                if quot.exponent(target - first) >= cutoff {
                    break;
                }
                let slot = rem.entry(target).or_insert_with(C::zero);
                slot.sub_assign(&q.mul(bt));
                if slot.is_zero() {
                    rem.remove(&target);
                }
            }
            quot.terms.insert(s - first, q);
        }
        Ok(quot)
    }

    /// Applies `f` to every coefficient, dropping zero images.
    pub fn map<D: Coefficient, F: Fn(&C) -> D>(&self, f: F) -> Series<D> {
        Series {
            offset: self.offset,
            step_denominator: self.step_denominator,
            terms: self
                .terms
                .iter()
                .map(|(&s, c)| (s, f(c)))
                .filter(|(_, c)| !c.is_zero())
                .collect(),
            cutoff: self.cutoff,
        }
    }
}

impl TwoVarSeries {
    /// The coefficient series of `y^charge`.
    pub fn charge_sector(&self, charge: i64) -> PuiseuxSeries {
        self.map(|p| p.get(charge).cloned().unwrap_or_else(Zero::zero))
    }

    /// Every charge that appears with a nonzero coefficient.
    pub fn charges(&self) -> std::collections::BTreeSet<i64> {
        self.terms
            .values()
            .flat_map(|p| p.iter().map(|(c, _)| c))
            .collect()
    }
}

impl PuiseuxSeries {
    /// Embeds the series in charge zero.
    pub fn to_two_var(&self) -> TwoVarSeries {
        self.map(|c| LaurentPoly::monomial(0, c.clone()))
    }

    /// Evaluates at `q = exp(2πiτ)`. The tail estimate is the modulus of the
    /// last included term.
    pub fn evaluate(&self, tau: Complex64) -> Result<Evaluation> {
        if !(tau.im > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "tau = {tau} must lie in the upper half plane"
            )));
        }
        let two_pi_i_tau = Complex64::new(0.0, 2.0 * PI) * tau;
        let mut value = Complex64::new(0.0, 0.0);
        let mut tail = 0.0;
        for (e, c) in self.iter() {
            let e = e.to_f64().expect("finite exponent");
            let term = (two_pi_i_tau * e).exp() * big_to_f64(c);
            value += term;
            tail = term.norm();
        }
        Ok(Evaluation { value, tail })
    }

    /// True if every stored coefficient is a nonnegative integer.
    pub fn has_nonnegative_integer_coefficients(&self) -> bool {
        self.terms
            .values()
            .all(|c| c.is_integer() && !c.is_negative())
    }

    /// Integer coefficients in step order starting at `offset`, including
    /// zeros, up to the cutoff. `None` if some coefficient is not an integer.
    pub fn integer_coefficients(&self) -> Option<Vec<BigInt>> {
        let span =
            (self.cutoff - self.offset) * Rational64::from_integer(self.step_denominator as i64);
        let len = span.ceil().to_integer().max(0) as u64;
        (0..len)
            .map(|s| match self.terms.get(&s) {
                Some(c) if c.is_integer() => Some(c.to_integer()),
                Some(_) => None,
                None => Some(BigInt::zero()),
            })
            .collect()
    }
}

/// Value of a truncated series at a point, with a truncation-tail estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub value: Complex64,
    pub tail: f64,
}

pub(crate) fn big_to_f64(c: &BigRational) -> f64 {
    c.to_f64().unwrap_or(f64::NAN)
}

pub(crate) fn rat(n: i64, d: i64) -> Rational64 {
    Rational64::new(n, d)
}

#[cfg(test)]
pub(crate) fn big(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn poly(terms: &[(i64, i64)]) -> LaurentPoly {
        let mut p = LaurentPoly::default();
        for &(c, v) in terms {
            p.add_term(c, &big(v));
        }
        p
    }

    fn series(
        offset: Rational64,
        d: u64,
        cutoff: Rational64,
        terms: &[(i64, i64)],
    ) -> PuiseuxSeries {
        PuiseuxSeries::from_terms(
            offset,
            d,
            cutoff,
            terms
                .iter()
                .map(|&(s, v)| (offset + rat(s, d as i64), big(v))),
        )
        .unwrap()
    }

    #[test]
    fn laurent_exact_division() {
        // (y - 1/y)(y^2 + 3 + y^-2) = y^3 + 2y - 2y^-1 - y^-3
        let d = poly(&[(1, 1), (-1, -1)]);
        let p = poly(&[(3, 1), (1, 2), (-1, -2), (-3, -1)]);
        assert_eq!(p.exact_div(&d).unwrap(), poly(&[(2, 1), (0, 3), (-2, 1)]));
        // y^2 is not a multiple of y - 1/y.
        assert!(poly(&[(2, 1)]).exact_div(&d).is_none());
        assert!(p.exact_div(&LaurentPoly::default()).is_none());
    }

    #[test]
    fn geometric_inverse() {
        // 1/(1-q) = 1 + q + q^2 + ...
        let one_minus_q = series(rat(0, 1), 1, rat(10, 1), &[(0, 1), (1, -1)]);
        let unit = series(rat(0, 1), 1, rat(10, 1), &[(0, 1)]);
        let inv = unit.div(&one_minus_q).unwrap();
        assert_eq!(inv.cutoff(), rat(10, 1));
        assert_eq!(inv.len(), 10);
        assert!(inv.iter().all(|(_, c)| *c == big(1)));
        let back = inv.mul(&one_minus_q).unwrap();
        assert_eq!(back.truncate(rat(10, 1)), unit);
    }

    #[test]
    fn mixed_grids_add() {
        let a = series(rat(1, 24), 1, rat(5, 1), &[(0, 1), (2, 3)]);
        let b = series(rat(1, 3), 2, rat(4, 1), &[(1, 2)]);
        let s = a.add(&b).unwrap();
        assert_eq!(s.cutoff(), rat(4, 1));
        assert_eq!(s.coeff(rat(1, 24)), Some(&big(1)));
        assert_eq!(s.coeff(rat(1, 3) + rat(1, 2)), Some(&big(2)));
        assert_eq!(s.coeff(rat(1, 24) + rat(2, 1)), Some(&big(3)));
        assert!(s.sub(&s).unwrap().is_zero());
    }

    #[test]
    fn off_grid_term_is_rejected() {
        let mut s = PuiseuxSeries::zero(rat(0, 1), 2, rat(3, 1));
        assert!(s.add_term(rat(1, 3), &big(1)).is_err());
        assert!(s.add_term(rat(-1, 2), &big(1)).is_err());
        s.add_term(rat(7, 2), &big(1)).unwrap();
        assert!(s.is_zero());
    }

    #[test]
    fn evaluate_basics() {
        let z = PuiseuxSeries::zero(rat(0, 1), 1, rat(5, 1));
        let e = z.evaluate(Complex64::new(0.0, 1.0)).unwrap();
        assert_eq!(e.value, Complex64::new(0.0, 0.0));
        let s = series(rat(1, 2), 1, rat(3, 1), &[(0, 2)]);
        let v = s.evaluate(Complex64::new(0.0, 1.0)).unwrap().value;
        assert!((v.re - 2.0 * (-PI).exp()).abs() < 1e-15);
        assert!(s.evaluate(Complex64::new(0.3, 0.0)).is_err());
    }

    proptest! {
        #[test]
        fn product_then_quotient_roundtrips(
            a in proptest::collection::vec(-5i64..5, 1..8),
            b in proptest::collection::vec(-5i64..5, 0..8),
            sign in prop::bool::ANY,
        ) {
            let cutoff = rat(12, 1);
            let lead = if sign { 1 } else { -1 };
            let a_terms: Vec<(i64, i64)> = a.iter().enumerate().map(|(i, &v)| (i as i64, v)).collect();
            let mut b_terms = vec![(0i64, lead)];
            b_terms.extend(b.iter().enumerate().map(|(i, &v)| (i as i64 + 1, v)));
            let sa = series(rat(1, 3), 3, cutoff, &a_terms);
            let sb = series(rat(-1, 8), 1, cutoff, &b_terms);
            let prod = sa.mul(&sb).unwrap();
            let back = prod.div(&sb).unwrap();
            let common = back.cutoff().min(sa.cutoff());
            prop_assert_eq!(back.truncate(common), sa.truncate(common));
        }

        #[test]
        fn evaluate_is_linear(
            a in proptest::collection::vec(-9i64..9, 0..10),
            b in proptest::collection::vec(-9i64..9, 0..10),
            x in -0.5f64..0.5, y in 0.3f64..2.0,
        ) {
            let ta: Vec<(i64, i64)> = a.iter().enumerate().map(|(i, &v)| (i as i64, v)).collect();
            let tb: Vec<(i64, i64)> = b.iter().enumerate().map(|(i, &v)| (2 * i as i64, v)).collect();
            let sa = series(rat(1, 24), 1, rat(10, 1), &ta);
            let sb = series(rat(1, 12), 2, rat(10, 1), &tb);
            let tau = Complex64::new(x, y);
            let lhs = sa.add(&sb).unwrap().evaluate(tau).unwrap().value;
            let rhs = sa.evaluate(tau).unwrap().value + sb.evaluate(tau).unwrap().value;
            prop_assert!((lhs - rhs).norm() < 1e-9 * (1.0 + rhs.norm()));
        }
    }
}
