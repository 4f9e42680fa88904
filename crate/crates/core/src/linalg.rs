//! Valued vectors and matrices over the series ring: entrywise-minimum
//! valuations, weighted variants, the induced metric, and leading-term
//! extraction. Dimension mismatches are caller bugs and panic.

use std::fmt;

use crate::exponent::Exponent;
use crate::field::Field;
use crate::series::{NovikovSeries, Precision, SeriesError, Valuation};

/// A fixed-length tuple of series sharing one coefficient field.
#[derive(Clone, PartialEq, Debug)]
pub struct ValuedVector<F: Field> {
    field: F,
    entries: Vec<NovikovSeries<F>>,
}

impl<F: Field> ValuedVector<F> {
    pub fn new(field: F, entries: Vec<NovikovSeries<F>>) -> Self {
        assert!(
            entries.iter().all(|s| *s.field() == field),
            "mixed coefficient fields in vector"
        );
        ValuedVector { field, entries }
    }

    pub fn zero(field: F, len: usize) -> Self {
        let entries = (0..len)
            .map(|_| NovikovSeries::zero(field.clone()))
            .collect();
        ValuedVector { field, entries }
    }

    /// Standard basis vector with `T^0` in position `i`.
    pub fn unit(field: F, len: usize, i: usize) -> Self {
        let mut v = Self::zero(field.clone(), len);
        v.entries[i] = NovikovSeries::one(field);
        v
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[NovikovSeries<F>] {
        &self.entries
    }

    pub fn entry(&self, i: usize) -> &NovikovSeries<F> {
        &self.entries[i]
    }

    pub fn is_exact_zero(&self) -> bool {
        self.entries.iter().all(NovikovSeries::is_exact_zero)
    }

    /// Entrywise-minimum valuation.
    pub fn valuation(&self) -> Valuation {
        Valuation::combine_min(self.entries.iter().map(NovikovSeries::valuation))
    }

    /// min_i (v(a_i) - t_i): the weighted valuation.
    pub fn weighted_valuation(&self, t: &WeightVector) -> Valuation {
        assert_eq!(self.len(), t.len(), "weight length mismatch");
        Valuation::combine_min(
            self.entries
                .iter()
                .zip(t.iter())
                .map(|(s, ti)| s.valuation().shift(&-ti)),
        )
    }

    /// The metric exponent: d(v, w) = e^{-val(v - w)}, reported as the
    /// valuation to stay exact. `Infinite` means distance zero.
    pub fn distance(&self, other: &Self) -> Valuation {
        self.sub(other).valuation()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len(), "vector length mismatch");
        ValuedVector {
            field: self.field.clone(),
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len(), "vector length mismatch");
        ValuedVector {
            field: self.field.clone(),
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.sub(b))
                .collect(),
        }
    }

    pub fn negate(&self) -> Self {
        self.map(|s| s.negate())
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        self.map(|s| s.scale(c))
    }

    /// Multiply every entry by the series `a`.
    pub fn scale_series(&self, a: &NovikovSeries<F>) -> Self {
        self.map(|s| s.mul(a))
    }

    /// Multiply by `T^g`.
    pub fn monomial_shift(&self, g: &Exponent) -> Self {
        self.map(|s| s.monomial_shift(g))
    }

    /// Shift entry `i` by `T^{-t_i}`: the coordinate change that turns the
    /// weighted valuation into the plain one.
    pub fn reweight(&self, t: &WeightVector) -> Self {
        assert_eq!(self.len(), t.len(), "weight length mismatch");
        ValuedVector {
            field: self.field.clone(),
            entries: self
                .entries
                .iter()
                .zip(t.iter())
                .map(|(s, ti)| s.monomial_shift(&-ti))
                .collect(),
        }
    }

    pub fn truncate(&self, p: &Exponent) -> Self {
        self.map(|s| s.truncate(p))
    }

    pub fn restrict_exponents(&self, keep: impl Fn(&Exponent) -> bool) -> Self {
        self.map(|s| s.restrict_exponents(&keep))
    }

    /// Coefficients of `T^at` across entries, zero where absent. Errors if
    /// any entry's precision does not certify that exponent.
    pub fn leading_coefficients(&self, at: &Exponent) -> Result<Vec<F::Elem>, SeriesError> {
        self.entries.iter().map(|s| s.coefficient_at(at)).collect()
    }

    /// Greatest lower bound of all entry precisions.
    pub fn precision_floor(&self) -> Precision {
        self.entries
            .iter()
            .fold(Precision::Exact, |acc, s| acc.min(s.precision().clone()))
    }

    /// Exponents appearing in any entry, deduplicated and sorted.
    pub fn exponent_support(&self) -> Vec<Exponent> {
        let mut out: Vec<Exponent> = self
            .entries
            .iter()
            .flat_map(|s| s.terms().iter().map(|(e, _)| e.clone()))
            .collect();
        out.sort();
        out.dedup();
        out
    }

    fn map(&self, f: impl Fn(&NovikovSeries<F>) -> NovikovSeries<F>) -> Self {
        ValuedVector {
            field: self.field.clone(),
            entries: self.entries.iter().map(f).collect(),
        }
    }
}

impl<F: Field> fmt::Display for ValuedVector<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, s) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, "]")
    }
}

/// The weights t_i defining a weighted valuation; exact rationals, possibly
/// in an extension of the ambient exponent group.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WeightVector {
    t: Vec<Exponent>,
}

impl WeightVector {
    pub fn new(t: Vec<Exponent>) -> Self {
        WeightVector { t }
    }

    pub fn zero(len: usize) -> Self {
        WeightVector {
            t: vec![Exponent::zero(); len],
        }
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn get(&self, i: usize) -> &Exponent {
        &self.t[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = &Exponent> {
        self.t.iter()
    }

    pub fn as_slice(&self) -> &[Exponent] {
        &self.t
    }
}

/// A rectangular matrix of series, stored column-major.
#[derive(Clone, PartialEq, Debug)]
pub struct ValuedMatrix<F: Field> {
    field: F,
    rows: usize,
    cols: Vec<ValuedVector<F>>,
}

impl<F: Field> ValuedMatrix<F> {
    pub fn from_columns(field: F, rows: usize, cols: Vec<ValuedVector<F>>) -> Self {
        assert!(
            cols.iter().all(|c| c.len() == rows),
            "ragged matrix columns"
        );
        ValuedMatrix { field, rows, cols }
    }

    pub fn from_rows(field: F, rows: Vec<Vec<NovikovSeries<F>>>) -> Self {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == m), "ragged matrix rows");
        let cols = (0..m)
            .map(|j| {
                ValuedVector::new(field.clone(), rows.iter().map(|r| r[j].clone()).collect())
            })
            .collect();
        ValuedMatrix {
            field,
            rows: n,
            cols,
        }
    }

    pub fn zero(field: F, rows: usize, cols: usize) -> Self {
        let cols = (0..cols)
            .map(|_| ValuedVector::zero(field.clone(), rows))
            .collect();
        ValuedMatrix { field, rows, cols }
    }

    pub fn identity(field: F, n: usize) -> Self {
        let cols = (0..n)
            .map(|i| ValuedVector::unit(field.clone(), n, i))
            .collect();
        ValuedMatrix {
            field,
            rows: n,
            cols,
        }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn columns(&self) -> &[ValuedVector<F>] {
        &self.cols
    }

    pub fn column(&self, j: usize) -> &ValuedVector<F> {
        &self.cols[j]
    }

    pub fn entry(&self, i: usize, j: usize) -> &NovikovSeries<F> {
        self.cols[j].entry(i)
    }

    /// Matrix-vector product A x = sum_j x_j * col_j.
    pub fn apply(&self, x: &ValuedVector<F>) -> ValuedVector<F> {
        assert_eq!(x.len(), self.ncols(), "dimension mismatch in apply");
        let mut acc = ValuedVector::zero(self.field.clone(), self.rows);
        for (xj, col) in x.entries().iter().zip(&self.cols) {
            if xj.is_exact_zero() {
                continue;
            }
            acc = acc.add(&col.scale_series(xj));
        }
        acc
    }

    /// Matrix product self * other.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.ncols(), other.rows, "dimension mismatch in compose");
        let cols = other.cols.iter().map(|c| self.apply(c)).collect();
        ValuedMatrix {
            field: self.field.clone(),
            rows: self.rows,
            cols,
        }
    }

    /// Rescale row `i` by `T^{-t_i}` for every row.
    pub fn reweight_rows(&self, t: &WeightVector) -> Self {
        assert_eq!(t.len(), self.rows, "weight length mismatch");
        ValuedMatrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols.iter().map(|c| c.reweight(t)).collect(),
        }
    }

    pub fn truncate(&self, p: &Exponent) -> Self {
        ValuedMatrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols.iter().map(|c| c.truncate(p)).collect(),
        }
    }

    /// All exponents appearing anywhere in the matrix.
    pub fn exponent_support(&self) -> Vec<Exponent> {
        let mut out: Vec<Exponent> = self
            .cols
            .iter()
            .flat_map(|c| c.exponent_support())
            .collect();
        out.sort();
        out.dedup();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;

    fn ex(n: i64, d: i64) -> Exponent {
        Exponent::from_ratio(n, d)
    }

    fn t_pow(n: i64) -> NovikovSeries<Rationals> {
        NovikovSeries::monomial(Rationals, ex(n, 1), Rationals.from_int(1))
    }

    fn vec2(a: NovikovSeries<Rationals>, b: NovikovSeries<Rationals>) -> ValuedVector<Rationals> {
        ValuedVector::new(Rationals, vec![a, b])
    }

    #[test]
    fn zero_vector_valuation_infinite() {
        let v = ValuedVector::zero(Rationals, 3);
        assert_eq!(v.valuation(), Valuation::Infinite);
    }

    #[test]
    fn vector_valuation_is_min() {
        let v = vec2(t_pow(2), t_pow(3));
        assert_eq!(v.valuation(), Valuation::Known(ex(2, 1)));
    }

    #[test]
    fn known_entry_dominates_unknown() {
        let blind = NovikovSeries::zero_at_precision(Rationals, ex(5, 1));
        let v = vec2(blind, t_pow(2));
        assert_eq!(v.valuation(), Valuation::Known(ex(2, 1)));
        // but an unknown below the known entry wins
        let blind_low = NovikovSeries::zero_at_precision(Rationals, ex(1, 1));
        let w = vec2(blind_low, t_pow(2));
        assert_eq!(w.valuation(), Valuation::AtLeast(ex(1, 1)));
    }

    #[test]
    fn weighted_valuation_examples() {
        let v = vec2(t_pow(2), t_pow(3));
        let t = WeightVector::new(vec![ex(1, 1), ex(0, 1)]);
        assert_eq!(v.weighted_valuation(&t), Valuation::Known(ex(1, 1)));
        // zero weights reduce to the plain valuation
        assert_eq!(
            v.weighted_valuation(&WeightVector::zero(2)),
            v.valuation()
        );
        let w = vec2(
            NovikovSeries::one(Rationals),
            NovikovSeries::zero(Rationals),
        );
        let t2 = WeightVector::new(vec![ex(2, 1), ex(0, 1)]);
        assert_eq!(w.weighted_valuation(&t2), Valuation::Known(ex(-2, 1)));
    }

    #[test]
    fn reweight_matches_weighted_valuation() {
        let v = vec2(t_pow(2), t_pow(-1));
        let t = WeightVector::new(vec![ex(1, 2), ex(-3, 1)]);
        assert_eq!(v.reweight(&t).valuation(), v.weighted_valuation(&t));
    }

    #[test]
    fn distance_of_equal_vectors_is_zero() {
        let v = vec2(t_pow(1), t_pow(2));
        assert_eq!(v.distance(&v), Valuation::Infinite);
        let w = vec2(t_pow(1).add(&t_pow(4)), t_pow(2));
        assert_eq!(v.distance(&w), Valuation::Known(ex(4, 1)));
    }

    #[test]
    fn leading_coefficients_examples() {
        let one_plus_t = NovikovSeries::one(Rationals).add(&t_pow(1));
        let v = vec2(one_plus_t, t_pow(1));
        assert_eq!(
            v.leading_coefficients(&ex(1, 1)).unwrap(),
            vec![Rationals.from_int(1), Rationals.from_int(1)]
        );
        assert_eq!(
            v.leading_coefficients(&ex(0, 1)).unwrap(),
            vec![Rationals.from_int(1), Rationals.from_int(0)]
        );
        let truncated = v.truncate(&ex(1, 1));
        assert!(truncated.leading_coefficients(&ex(1, 1)).is_err());
    }

    #[test]
    fn matrix_apply_and_compose() {
        // A = [[1, T], [0, 1]] acting on (1, 1)
        let a = ValuedMatrix::from_rows(
            Rationals,
            vec![
                vec![NovikovSeries::one(Rationals), t_pow(1)],
                vec![NovikovSeries::zero(Rationals), NovikovSeries::one(Rationals)],
            ],
        );
        let x = vec2(NovikovSeries::one(Rationals), NovikovSeries::one(Rationals));
        let y = a.apply(&x);
        assert_eq!(y.entry(0), &NovikovSeries::one(Rationals).add(&t_pow(1)));
        assert_eq!(y.entry(1), &NovikovSeries::one(Rationals));

        let id = ValuedMatrix::identity(Rationals, 2);
        assert_eq!(a.compose(&id), a);
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_vec() -> impl Strategy<Value = ValuedVector<Rationals>> {
            let term = (-6i64..=6, -4i64..=4).prop_map(|(e, c)| (ex(e, 1), Rationals.from_int(c)));
            let series = proptest::collection::vec(term, 0..4).prop_map(|terms| {
                NovikovSeries::from_terms(Rationals, terms, Precision::Exact)
            });
            proptest::collection::vec(series, 2).prop_map(|entries| {
                ValuedVector::new(Rationals, entries)
            })
        }

        proptest! {
            #[test]
            fn ultrametric_inequality(u in arb_vec(), v in arb_vec(), w in arb_vec()) {
                // d(u,w) <= max(d(u,v), d(v,w)), i.e. val(u-w) >= min of the others
                let uw = u.distance(&w);
                let uv = u.distance(&v);
                let vw = v.distance(&w);
                let bound = Valuation::combine_min([uv, vw]);
                match (uw, bound) {
                    (Valuation::Infinite, _) => {}
                    (Valuation::Known(a), Valuation::Known(b)) => prop_assert!(a >= b),
                    (Valuation::Known(_), Valuation::Infinite) => {
                        prop_assert!(false, "equal pair but unequal endpoints")
                    }
                    other => prop_assert!(false, "unexpected {:?}", other),
                }
            }

            #[test]
            fn vector_nonarchimedean_equality_case(v in arb_vec(), w in arb_vec()) {
                let s = v.add(&w);
                if let (Valuation::Known(a), Valuation::Known(b)) = (v.valuation(), w.valuation()) {
                    if a != b {
                        let expect = a.min(b);
                        prop_assert_eq!(s.valuation(), Valuation::Known(expect));
                    }
                }
            }
        }
    }
}
