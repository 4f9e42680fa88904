//! Precision-tracked formal series over a subgroup of the rationals.
//!
//! A series is a finite list of (exponent, coefficient) terms, strictly
//! increasing in exponent, plus a precision: the exponent below which the
//! coefficients are certified. A series with infinite precision is exact.
//! An empty series with finite precision is *indistinguishable from zero*
//! at that precision; this is a first-class state, never coerced to zero.

use std::fmt;

use thiserror::Error;

use crate::exponent::Exponent;
use crate::field::Field;

/// The exponent below which a series' coefficients are certified.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Precision {
    /// All coefficients known; the series is an honest finite sum.
    Exact,
    /// Coefficients known only for exponents strictly below the bound.
    Below(Exponent),
}

impl Precision {
    pub fn is_exact(&self) -> bool {
        matches!(self, Precision::Exact)
    }

    pub fn bound(&self) -> Option<&Exponent> {
        match self {
            Precision::Exact => None,
            Precision::Below(e) => Some(e),
        }
    }

    /// Is an exponent within the certified range?
    pub fn certifies(&self, e: &Exponent) -> bool {
        match self {
            Precision::Exact => true,
            Precision::Below(p) => e < p,
        }
    }

    pub fn min(self, other: Precision) -> Precision {
        match (self, other) {
            (Precision::Exact, p) | (p, Precision::Exact) => p,
            (Precision::Below(a), Precision::Below(b)) => Precision::Below(a.min(b)),
        }
    }

    pub fn shift(self, g: &Exponent) -> Precision {
        match self {
            Precision::Exact => Precision::Exact,
            Precision::Below(p) => Precision::Below(p + g),
        }
    }
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Precision::Exact => write!(f, "exact"),
            Precision::Below(p) => write!(f, "O(T^({p}))"),
        }
    }
}

/// Valuation of a series or vector: the smallest exponent carrying a
/// nonzero coefficient.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Valuation {
    Known(Exponent),
    /// Exactly the zero element.
    Infinite,
    /// No certified terms; the true valuation is at least the bound.
    AtLeast(Exponent),
}

impl Valuation {
    pub fn known(&self) -> Option<&Exponent> {
        match self {
            Valuation::Known(e) => Some(e),
            _ => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Valuation::Infinite)
    }

    /// A lower bound valid in every case; `None` encodes +infinity.
    pub fn lower_bound(&self) -> Option<&Exponent> {
        match self {
            Valuation::Known(e) | Valuation::AtLeast(e) => Some(e),
            Valuation::Infinite => None,
        }
    }

    pub fn shift(self, g: &Exponent) -> Valuation {
        match self {
            Valuation::Known(e) => Valuation::Known(e + g),
            Valuation::Infinite => Valuation::Infinite,
            Valuation::AtLeast(e) => Valuation::AtLeast(e + g),
        }
    }

    /// Valuation of a sum or aggregate: the minimum, staying honest about
    /// what is certified. A known value wins only if no uncertain bound
    /// sits below it.
    pub fn combine_min(items: impl IntoIterator<Item = Valuation>) -> Valuation {
        let mut best_known: Option<Exponent> = None;
        let mut least_bound: Option<Exponent> = None;
        for v in items {
            match v {
                Valuation::Known(e) => {
                    if best_known.as_ref().is_none_or(|b| e < *b) {
                        best_known = Some(e);
                    }
                }
                Valuation::AtLeast(e) => {
                    if least_bound.as_ref().is_none_or(|b| e < *b) {
                        least_bound = Some(e);
                    }
                }
                Valuation::Infinite => {}
            }
        }
        match (best_known, least_bound) {
            (Some(k), Some(b)) if b <= k => Valuation::AtLeast(b),
            (Some(k), _) => Valuation::Known(k),
            (None, Some(b)) => Valuation::AtLeast(b),
            (None, None) => Valuation::Infinite,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Known(e) => write!(f, "{e}"),
            Valuation::Infinite => write!(f, "+inf"),
            Valuation::AtLeast(e) => write!(f, "unknown(>={e})"),
        }
    }
}

#[derive(Error, Debug, Clone, PartialEq)]
pub enum SeriesError {
    #[error("division by the exact zero series")]
    DivisionByZero,
    #[error("series is indistinguishable from zero at precision O(T^({0}))")]
    IndistinguishableFromZero(Exponent),
    #[error("coefficient at T^({requested}) not certified (precision O(T^({available})))")]
    CoefficientBeyondPrecision {
        requested: Exponent,
        available: Exponent,
    },
}

/// A formal series with exact coefficients in a field and rational exponents.
#[derive(Clone, PartialEq, Debug)]
pub struct NovikovSeries<F: Field> {
    field: F,
    terms: Vec<(Exponent, F::Elem)>,
    prec: Precision,
}

impl<F: Field> NovikovSeries<F> {
    pub fn zero(field: F) -> Self {
        NovikovSeries {
            field,
            terms: Vec::new(),
            prec: Precision::Exact,
        }
    }

    /// The zero-looking series known only below `p`.
    pub fn zero_at_precision(field: F, p: Exponent) -> Self {
        NovikovSeries {
            field,
            terms: Vec::new(),
            prec: Precision::Below(p),
        }
    }

    pub fn one(field: F) -> Self {
        let coeff = field.one();
        Self::monomial(field, Exponent::zero(), coeff)
    }

    pub fn monomial(field: F, exp: Exponent, coeff: F::Elem) -> Self {
        Self::from_terms(field, vec![(exp, coeff)], Precision::Exact)
    }

    /// Normalizing constructor: sorts, merges duplicate exponents, drops
    /// zero coefficients and terms at or beyond the precision bound.
    pub fn from_terms(field: F, mut terms: Vec<(Exponent, F::Elem)>, prec: Precision) -> Self {
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        let mut merged: Vec<(Exponent, F::Elem)> = Vec::with_capacity(terms.len());
        for (e, c) in terms {
            if !prec.certifies(&e) {
                continue;
            }
            match merged.last_mut() {
                Some((last_e, last_c)) if *last_e == e => {
                    *last_c = field.add(last_c, &c);
                }
                _ => merged.push((e, c)),
            }
        }
        merged.retain(|(_, c)| !field.is_zero(c));
        NovikovSeries {
            field,
            terms: merged,
            prec,
        }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn terms(&self) -> &[(Exponent, F::Elem)] {
        &self.terms
    }

    pub fn precision(&self) -> &Precision {
        &self.prec
    }

    /// Exactly zero: no terms and nothing hidden beyond the precision.
    pub fn is_exact_zero(&self) -> bool {
        self.terms.is_empty() && self.prec.is_exact()
    }

    /// Has at least one certified nonzero term.
    pub fn is_known_nonzero(&self) -> bool {
        !self.terms.is_empty()
    }

    /// Smallest exponent with a nonzero coefficient.
    pub fn valuation(&self) -> Valuation {
        match self.terms.first() {
            Some((e, _)) => Valuation::Known(e.clone()),
            None => match &self.prec {
                Precision::Exact => Valuation::Infinite,
                Precision::Below(p) => Valuation::AtLeast(p.clone()),
            },
        }
    }

    /// Coefficient of `T^e`; an error if `e` is beyond the precision.
    pub fn coefficient_at(&self, e: &Exponent) -> Result<F::Elem, SeriesError> {
        if !self.prec.certifies(e) {
            let available = self
                .prec
                .bound()
                .cloned()
                .expect("exact precision certifies everything");
            return Err(SeriesError::CoefficientBeyondPrecision {
                requested: e.clone(),
                available,
            });
        }
        Ok(self
            .terms
            .iter()
            .find(|(te, _)| te == e)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(|| self.field.zero()))
    }

    pub fn leading(&self) -> Option<(&Exponent, &F::Elem)> {
        self.terms.first().map(|(e, c)| (e, c))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.field, other.field, "mixed coefficient fields");
        let prec = self.prec.clone().min(other.prec.clone());
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Self::from_terms(self.field.clone(), terms, prec)
    }

    pub fn negate(&self) -> Self {
        NovikovSeries {
            field: self.field.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), self.field.neg(c)))
                .collect(),
            prec: self.prec.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.negate())
    }

    /// Product, with the valuation-arithmetic precision rule
    /// prec(ab) = min(v(a) + prec(b), v(b) + prec(a)).
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.field, other.field, "mixed coefficient fields");
        if self.is_exact_zero() || other.is_exact_zero() {
            return Self::zero(self.field.clone());
        }
        let prec = prec_of_product(
            self.valuation().lower_bound(),
            &self.prec,
            other.valuation().lower_bound(),
            &other.prec,
        );
        let mut terms: Vec<(Exponent, F::Elem)> = Vec::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea + eb;
                if !prec.certifies(&e) {
                    continue;
                }
                terms.push((e, self.field.mul(ca, cb)));
            }
        }
        Self::from_terms(self.field.clone(), terms, prec)
    }

    /// Multiply by a field scalar.
    pub fn scale(&self, c: &F::Elem) -> Self {
        if self.field.is_zero(c) {
            // Scaling by zero erases the known terms but cannot improve on
            // what is hidden beyond the precision.
            return NovikovSeries {
                field: self.field.clone(),
                terms: Vec::new(),
                prec: self.prec.clone(),
            };
        }
        NovikovSeries {
            field: self.field.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, a)| (e.clone(), self.field.mul(a, c)))
                .collect(),
            prec: self.prec.clone(),
        }
    }

    /// Multiply by `T^g`: shifts all exponents and the precision.
    pub fn monomial_shift(&self, g: &Exponent) -> Self {
        NovikovSeries {
            field: self.field.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e + g, c.clone()))
                .collect(),
            prec: self.prec.clone().shift(g),
        }
    }

    /// Inverse modulo valuation >= `target`, by geometric expansion of the
    /// unit part. Requires a known valuation.
    pub fn invert(&self, target: &Exponent) -> Result<Self, SeriesError> {
        let g = match self.valuation() {
            Valuation::Known(g) => g,
            Valuation::Infinite => return Err(SeriesError::DivisionByZero),
            Valuation::AtLeast(p) => return Err(SeriesError::IndistinguishableFromZero(p)),
        };
        let lead = self.terms[0].1.clone();
        let lead_inv = self
            .field
            .inv(&lead)
            .expect("leading coefficient is nonzero");

        // Unit part u = 1 + r with v(r) > 0.
        let unit = self.monomial_shift(&-&g).scale(&lead_inv);
        // How far we can trust the result: the requested target, capped by
        // what the input precision supports (prec - 2g in output exponents).
        let result_prec = match self.prec.bound() {
            None => Precision::Below(target.clone()),
            Some(p) => {
                let cap = p - &g - &g;
                Precision::Below(cap.min(target.clone()))
            }
        };
        let Some(unit_target) = result_prec.bound().map(|b| b + &g) else {
            unreachable!("result precision is always finite")
        };

        let one = Self::one(self.field.clone());
        let minus_r = one.sub(&unit).truncate(&unit_target);
        let mut acc = one.clone();
        let mut pow = one;
        loop {
            pow = pow.mul(&minus_r).truncate(&unit_target);
            if !pow.is_known_nonzero() {
                break;
            }
            acc = acc.add(&pow);
        }
        // acc may have acquired finite precision from truncation; the
        // certified range is result_prec by construction.
        let inv = acc.monomial_shift(&-&g).scale(&lead_inv);
        Ok(NovikovSeries {
            field: inv.field,
            terms: inv.terms,
            prec: result_prec,
        })
    }

    /// Drop terms at or beyond `p`, lowering the precision accordingly.
    pub fn truncate(&self, p: &Exponent) -> Self {
        let prec = self.prec.clone().min(Precision::Below(p.clone()));
        Self::from_terms(self.field.clone(), self.terms.clone(), prec)
    }

    /// Keep only terms whose exponent satisfies the predicate. The precision
    /// is unchanged: the hidden tail may contain terms of either kind.
    pub fn restrict_exponents(&self, keep: impl Fn(&Exponent) -> bool) -> Self {
        NovikovSeries {
            field: self.field.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| keep(e))
                .cloned()
                .collect(),
            prec: self.prec.clone(),
        }
    }
}

fn prec_of_product(
    va: Option<&Exponent>,
    pa: &Precision,
    vb: Option<&Exponent>,
    pb: &Precision,
) -> Precision {
    // v = None means the factor is exactly zero, handled by the caller.
    let part_a = match (vb, pa.bound()) {
        (Some(v), Some(p)) => Precision::Below(v + p),
        _ => Precision::Exact,
    };
    let part_b = match (va, pb.bound()) {
        (Some(v), Some(p)) => Precision::Below(v + p),
        _ => Precision::Exact,
    };
    part_a.min(part_b)
}

impl<F: Field> fmt::Display for NovikovSeries<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut pieces: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| format!("{}*T^({})", self.field.format_elem(c), e))
            .collect();
        if let Precision::Below(p) = &self.prec {
            pieces.push(format!("O(T^({p}))"));
        }
        if pieces.is_empty() {
            return write!(f, "0");
        }
        write!(f, "{}", pieces.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    fn ex(n: i64, d: i64) -> Exponent {
        Exponent::from_ratio(n, d)
    }

    fn q(n: i64) -> NovikovSeries<Rationals> {
        NovikovSeries::monomial(Rationals, Exponent::zero(), Rationals.from_int(n))
    }

    fn t_pow(n: i64, d: i64) -> NovikovSeries<Rationals> {
        NovikovSeries::monomial(Rationals, ex(n, d), Rationals.from_int(1))
    }

    #[test]
    fn valuation_of_zero_is_infinite() {
        assert_eq!(
            NovikovSeries::<Rationals>::zero(Rationals).valuation(),
            Valuation::Infinite
        );
    }

    #[test]
    fn valuation_is_min_stored_exponent() {
        let s = t_pow(3, 2).add(&t_pow(5, 2).scale(&Rationals.from_int(2)));
        assert_eq!(s.valuation(), Valuation::Known(ex(3, 2)));
    }

    #[test]
    fn empty_series_at_precision_is_unknown() {
        let s = NovikovSeries::<Rationals>::zero_at_precision(Rationals, ex(4, 1));
        assert_eq!(s.valuation(), Valuation::AtLeast(ex(4, 1)));
        assert!(!s.is_exact_zero());
    }

    #[test]
    fn add_cancels_exactly() {
        let s = q(1).add(&t_pow(1, 1));
        let sum = s.add(&q(-1));
        assert_eq!(sum, t_pow(1, 1));
        assert!(sum.precision().is_exact());
    }

    #[test]
    fn add_propagates_min_precision() {
        let a = q(1).truncate(&ex(2, 1));
        let b = t_pow(3, 1);
        let sum = a.add(&b);
        assert_eq!(sum.precision(), &Precision::Below(ex(2, 1)));
        assert_eq!(sum.terms().len(), 1); // the T^3 term is beyond precision
        assert_eq!(sum.coefficient_at(&Exponent::zero()).unwrap(), Rationals.from_int(1));
    }

    #[test]
    fn char_two_addition() {
        let f2 = PrimeField::new(2);
        let one_plus_t = NovikovSeries::from_terms(
            f2,
            vec![(ex(0, 1), 1u64), (ex(1, 1), 1u64)],
            Precision::Exact,
        );
        assert!(one_plus_t.add(&one_plus_t).is_exact_zero());
    }

    #[test]
    fn mul_exact() {
        let a = q(1).add(&t_pow(1, 1)); // 1 + T
        let b = q(1).sub(&t_pow(1, 1)); // 1 - T
        let p = a.mul(&b);
        // 1 - T^2
        assert_eq!(p.terms().len(), 2);
        assert_eq!(p.coefficient_at(&ex(2, 1)).unwrap(), Rationals.from_int(-1));
        assert!(p.precision().is_exact());
    }

    #[test]
    fn mul_precision_shift() {
        let x = q(2).truncate(&ex(3, 1)); // prec 3
        let s = t_pow(1, 2); // T^{1/2}, exact
        let p = s.mul(&x);
        assert_eq!(p.precision(), &Precision::Below(ex(7, 2)));
    }

    #[test]
    fn mul_with_indistinguishable_zero() {
        let blind = NovikovSeries::<Rationals>::zero_at_precision(Rationals, ex(2, 1));
        let p = blind.mul(&t_pow(3, 1));
        assert!(!p.is_known_nonzero());
        assert_eq!(p.precision(), &Precision::Below(ex(5, 1)));
    }

    #[test]
    fn shift_roundtrip() {
        let s = q(1).add(&t_pow(2, 1)).truncate(&ex(3, 1));
        let g = ex(5, 2);
        let back = s.monomial_shift(&g).monomial_shift(&-&g);
        assert_eq!(back, s);
        assert_eq!(
            s.monomial_shift(&g).valuation(),
            Valuation::Known(ex(5, 2))
        );
    }

    #[test]
    fn invert_geometric() {
        let s = q(1).sub(&t_pow(1, 1)); // 1 - T
        let inv = s.invert(&ex(3, 1)).unwrap();
        // 1 + T + T^2 + O(T^3)
        assert_eq!(inv.terms().len(), 3);
        for k in 0..3 {
            assert_eq!(inv.coefficient_at(&ex(k, 1)).unwrap(), Rationals.from_int(1));
        }
        assert_eq!(inv.precision(), &Precision::Below(ex(3, 1)));
    }

    #[test]
    fn invert_monomial() {
        let s = t_pow(3, 2);
        let inv = s.invert(&ex(2, 1)).unwrap();
        assert_eq!(inv.terms().len(), 1);
        assert_eq!(inv.terms()[0].0, ex(-3, 2));
        assert_eq!(s.mul(&inv).coefficient_at(&ex(0, 1)).unwrap(), Rationals.from_int(1));
    }

    #[test]
    fn invert_rejects_zeroish() {
        assert_eq!(
            NovikovSeries::<Rationals>::zero(Rationals).invert(&ex(1, 1)),
            Err(SeriesError::DivisionByZero)
        );
        let blind = NovikovSeries::<Rationals>::zero_at_precision(Rationals, ex(2, 1));
        assert_eq!(
            blind.invert(&ex(1, 1)),
            Err(SeriesError::IndistinguishableFromZero(ex(2, 1)))
        );
    }

    #[test]
    fn coefficient_beyond_precision_errors() {
        let s = q(1).truncate(&ex(1, 1));
        assert!(s.coefficient_at(&Exponent::zero()).is_ok());
        assert!(matches!(
            s.coefficient_at(&ex(1, 1)),
            Err(SeriesError::CoefficientBeyondPrecision { .. })
        ));
    }

    #[test]
    fn display_forms() {
        let s = q(3).add(&t_pow(5, 2));
        assert_eq!(s.to_string(), "3/1*T^(0) + 1/1*T^(5/2)");
        assert_eq!(s.truncate(&ex(4, 1)).to_string(), "3/1*T^(0) + 1/1*T^(5/2) + O(T^(4))");
        assert_eq!(NovikovSeries::<Rationals>::zero(Rationals).to_string(), "0");
        assert_eq!(
            NovikovSeries::<Rationals>::zero_at_precision(Rationals, ex(4, 1)).to_string(),
            "O(T^(4))"
        );
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_series() -> impl Strategy<Value = NovikovSeries<Rationals>> {
            let term = (-8i64..=8, 1i64..=2, -5i64..=5).prop_map(|(n, d, c)| {
                (ex(n, d), Rationals.from_int(c))
            });
            proptest::collection::vec(term, 0..5).prop_map(|terms| {
                NovikovSeries::from_terms(Rationals, terms, Precision::Exact)
            })
        }

        proptest! {
            #[test]
            fn valuation_multiplicative(a in arb_series(), b in arb_series()) {
                let p = a.mul(&b);
                match (a.valuation(), b.valuation(), p.valuation()) {
                    (Valuation::Known(va), Valuation::Known(vb), Valuation::Known(vp)) => {
                        prop_assert_eq!(vp, va + vb);
                    }
                    (Valuation::Infinite, _, vp) | (_, Valuation::Infinite, vp) => {
                        prop_assert_eq!(vp, Valuation::Infinite);
                    }
                    other => prop_assert!(false, "unexpected valuations {:?}", other),
                }
            }

            #[test]
            fn non_archimedean_inequality(a in arb_series(), b in arb_series()) {
                let s = a.add(&b);
                if let (Some(va), Some(vb)) = (a.valuation().known(), b.valuation().known()) {
                    let min = va.clone().min(vb.clone());
                    match s.valuation() {
                        Valuation::Known(vs) => {
                            prop_assert!(vs >= min);
                            if va != vb {
                                prop_assert_eq!(vs, min);
                            }
                        }
                        Valuation::Infinite => prop_assert_eq!(va, vb),
                        Valuation::AtLeast(_) => prop_assert!(false, "exact inputs"),
                    }
                }
            }

            #[test]
            fn ring_axioms_mod_precision(a in arb_series(), b in arb_series(), c in arb_series()) {
                let assoc_l = a.add(&b).add(&c);
                let assoc_r = a.add(&b.add(&c));
                prop_assert_eq!(assoc_l, assoc_r);
                let dist_l = a.mul(&b.add(&c));
                let dist_r = a.mul(&b).add(&a.mul(&c));
                prop_assert_eq!(dist_l, dist_r);
            }

            #[test]
            fn inverse_is_inverse_mod_precision(a in arb_series(), p in 1i64..=6) {
                prop_assume!(a.is_known_nonzero());
                let target = ex(p, 1);
                let inv = a.invert(&target).unwrap();
                let prod = a.mul(&inv);
                // prod == 1 on its whole certified range, and that range is
                // target + min(0, v(a)) for exact input.
                prop_assert!(!prod.sub(&NovikovSeries::one(Rationals)).is_known_nonzero());
                let va = a.valuation().known().unwrap().clone();
                prop_assert_eq!(prod.precision(), &Precision::Below(&target + &va));
            }
        }
    }
}
