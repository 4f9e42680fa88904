//! The reduction engine: adapted bases of matrix images, the fixed-point
//! reduction iteration, and weighted best approximation.
//!
//! Everything here certifies statements about valuation levels strictly
//! below a caller-supplied precision. Inputs stay exact; precision enters
//! only as the level at which iterations stop. Termination is guaranteed
//! because all levels live on the discrete lattice generated by the finitely
//! many input exponents.

use thiserror::Error;

use crate::exponent::Exponent;
use crate::field::Field;
use crate::linalg::{ValuedMatrix, ValuedVector, WeightVector};
use crate::period::ValueGroup;
use crate::series::{NovikovSeries, Valuation};

#[derive(Error, Debug, Clone, PartialEq)]
pub enum ReductionError {
    #[error("precision {0} certifies no level: it must be positive")]
    PrecisionTooSmall(Exponent),
    #[error("basis vector {0} does not have valuation zero")]
    InconsistentBasis(usize),
}

/// Express `target` as a K-linear combination of `basis` vectors, or report
/// that it lies outside their span. Gaussian elimination with first-nonzero
/// pivots in basis order; free coefficients are set to zero.
pub(crate) fn solve_in_span<F: Field>(
    field: &F,
    basis: &[Vec<F::Elem>],
    target: &[F::Elem],
) -> Option<Vec<F::Elem>> {
    let k = basis.len();
    let n = target.len();
    debug_assert!(basis.iter().all(|b| b.len() == n));
    // augmented matrix, row-major: basis columns then the target
    let mut mat: Vec<Vec<F::Elem>> = (0..n)
        .map(|i| {
            let mut row: Vec<F::Elem> = basis.iter().map(|b| b[i].clone()).collect();
            row.push(target[i].clone());
            row
        })
        .collect();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; k];
    let mut used = vec![false; n];
    for col in 0..k {
        let Some(pivot) = (0..n).find(|&i| !used[i] && !field.is_zero(&mat[i][col])) else {
            continue;
        };
        used[pivot] = true;
        pivot_of_col[col] = Some(pivot);
        let inv = field.inv(&mat[pivot][col]).expect("pivot is nonzero");
        for x in mat[pivot].iter_mut() {
            *x = field.mul(x, &inv);
        }
        let pivot_row = mat[pivot].clone();
        for (i, row) in mat.iter_mut().enumerate() {
            if i == pivot || field.is_zero(&row[col]) {
                continue;
            }
            let factor = row[col].clone();
            for (x, p) in row.iter_mut().zip(pivot_row.iter()) {
                *x = field.sub(x, &field.mul(&factor, p));
            }
        }
    }
    // rows without a pivot must have zero target component
    for (i, row) in mat.iter().enumerate() {
        if !used[i] && !field.is_zero(&row[k]) {
            return None;
        }
    }
    let mut coeffs = vec![field.zero(); k];
    for (col, pivot) in pivot_of_col.iter().enumerate() {
        if let Some(i) = pivot {
            coeffs[col] = mat[*i][k].clone();
        }
    }
    Some(coeffs)
}

/// Generators of the nonnegative part of a matrix image, normalized to
/// valuation zero, with preimage witnesses and the constant gamma.
#[derive(Clone, Debug)]
pub struct AdaptedBasis<F: Field> {
    field: F,
    source: ValuedMatrix<F>,
    basis: Vec<ValuedVector<F>>,
    preimages: Vec<ValuedVector<F>>,
    leading: Vec<Vec<F::Elem>>,
    gamma: Exponent,
    precision: Exponent,
    unresolved: usize,
}

impl<F: Field> AdaptedBasis<F> {
    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn source(&self) -> &ValuedMatrix<F> {
        &self.source
    }

    pub fn vectors(&self) -> &[ValuedVector<F>] {
        &self.basis
    }

    pub fn preimages(&self) -> &[ValuedVector<F>] {
        &self.preimages
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    /// gamma = -min_i val(preimage_i); zero for an empty basis.
    pub fn gamma(&self) -> &Exponent {
        &self.gamma
    }

    /// The level below which the basis is certified.
    pub fn precision(&self) -> &Exponent {
        &self.precision
    }

    /// Columns that could not be resolved below the precision.
    pub fn unresolved_columns(&self) -> usize {
        self.unresolved
    }

    fn leading_vectors(&self) -> &[Vec<F::Elem>] {
        &self.leading
    }
}

/// gamma from a basis, as defined by its preimage witnesses.
pub fn gamma_constant<F: Field>(basis: &AdaptedBasis<F>) -> Exponent {
    basis.gamma().clone()
}

/// Compute an adapted basis of the image of `a`, certified below
/// `precision`: normalize each column to valuation zero, then eliminate
/// K-linear dependencies among leading vectors level by level, pushing
/// dependent columns to strictly higher valuation until they either
/// contribute a new independent direction or leave the certified range.
pub fn adapted_basis<F: Field>(
    a: &ValuedMatrix<F>,
    precision: &Exponent,
) -> Result<AdaptedBasis<F>, ReductionError> {
    if *precision <= Exponent::zero() {
        return Err(ReductionError::PrecisionTooSmall(precision.clone()));
    }
    let field = a.field().clone();
    let m = a.ncols();
    let mut out = AdaptedBasis {
        field: field.clone(),
        source: a.clone(),
        basis: Vec::new(),
        preimages: Vec::new(),
        leading: Vec::new(),
        gamma: Exponent::zero(),
        precision: precision.clone(),
        unresolved: 0,
    };
    let zero = Exponent::zero();
    for j in 0..m {
        let mut v = a.column(j).clone();
        let mut pre = ValuedVector::unit(field.clone(), m, j);
        loop {
            let level = match v.valuation() {
                Valuation::Infinite => break, // exactly in the span already
                Valuation::AtLeast(_) => {
                    out.unresolved += 1;
                    break;
                }
                Valuation::Known(level) => level,
            };
            if level >= *precision {
                out.unresolved += 1;
                break;
            }
            let shift = -&level;
            let cand = v.monomial_shift(&shift);
            let cand_pre = pre.monomial_shift(&shift);
            let Ok(lead) = cand.leading_coefficients(&zero) else {
                out.unresolved += 1;
                break;
            };
            match solve_in_span(&field, &out.leading, &lead) {
                None => {
                    out.basis.push(cand);
                    out.preimages.push(cand_pre);
                    out.leading.push(lead);
                    break;
                }
                Some(coeffs) => {
                    for (i, c) in coeffs.iter().enumerate() {
                        if field.is_zero(c) {
                            continue;
                        }
                        v = v.sub(&out.basis[i].scale(c).monomial_shift(&level));
                        pre = pre.sub(&out.preimages[i].scale(c).monomial_shift(&level));
                    }
                }
            }
        }
    }
    let mut min_val: Option<Exponent> = None;
    for pre in &out.preimages {
        if let Some(bound) = pre.valuation().lower_bound() {
            if min_val.as_ref().is_none_or(|m| bound < m) {
                min_val = Some(bound.clone());
            }
        }
    }
    out.gamma = min_val.map(|v| -v).unwrap_or_else(Exponent::zero);
    Ok(out)
}

/// Build a basis from externally supplied vectors, validating that each has
/// valuation exactly zero. Preimages are taken on faith; gamma is derived.
pub fn basis_from_vectors<F: Field>(
    source: ValuedMatrix<F>,
    basis: Vec<ValuedVector<F>>,
    preimages: Vec<ValuedVector<F>>,
    precision: Exponent,
) -> Result<AdaptedBasis<F>, ReductionError> {
    assert_eq!(basis.len(), preimages.len(), "one preimage per basis vector");
    let field = source.field().clone();
    let zero = Exponent::zero();
    let mut leading = Vec::with_capacity(basis.len());
    for (i, u) in basis.iter().enumerate() {
        if u.valuation() != Valuation::Known(zero.clone()) {
            return Err(ReductionError::InconsistentBasis(i));
        }
        let lead = u
            .leading_coefficients(&zero)
            .map_err(|_| ReductionError::InconsistentBasis(i))?;
        leading.push(lead);
    }
    let mut min_val: Option<Exponent> = None;
    for pre in &preimages {
        if let Some(bound) = pre.valuation().lower_bound() {
            if min_val.as_ref().is_none_or(|m| bound < m) {
                min_val = Some(bound.clone());
            }
        }
    }
    let gamma = min_val.map(|v| -v).unwrap_or_else(Exponent::zero);
    Ok(AdaptedBasis {
        field,
        source,
        basis,
        preimages,
        leading,
        gamma,
        precision,
        unresolved: 0,
    })
}

/// One reduction step: the level it acted at and the K-coefficients used,
/// pre-rendered for logging.
#[derive(Clone, Debug, PartialEq)]
pub struct ReductionStep {
    pub level: Exponent,
    pub coefficients: Vec<String>,
}

/// A log of the fixed-point iteration: strictly increasing levels, plus the
/// exponent sets whose sums form the discrete witness set the levels live in.
#[derive(Clone, Debug, Default)]
pub struct ReductionTrace {
    pub start: Option<Exponent>,
    pub steps: Vec<ReductionStep>,
    pub base_exponents: Vec<Exponent>,
    pub basis_exponents: Vec<Exponent>,
}

impl ReductionTrace {
    pub fn render(&self) -> String {
        let mut out = String::new();
        match &self.start {
            Some(s) => out.push_str(&format!("start level {s}\n")),
            None => out.push_str("start level +inf (zero input)\n"),
        }
        for step in &self.steps {
            out.push_str(&format!(
                "  level {}: subtract [{}]\n",
                step.level,
                step.coefficients.join(", ")
            ));
        }
        out.push_str(&format!(
            "witness set: N(v) = {{{}}}, N(basis) = {{{}}}\n",
            join_exponents(&self.base_exponents),
            join_exponents(&self.basis_exponents)
        ));
        out
    }
}

fn join_exponents(es: &[Exponent]) -> String {
    es.iter()
        .map(|e| e.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

#[derive(Clone, Debug, PartialEq)]
pub enum ReduceStatus {
    /// A genuine fixed point: the leading vector is certifiably outside the
    /// K-span of the basis leading vectors (or the residual is exactly zero).
    Optimal,
    /// The iteration left the certified range at the given level.
    PrecisionExhausted { level: Exponent },
}

/// Outcome of the fixed-point reduction.
#[derive(Clone, Debug)]
pub struct Reduction<F: Field> {
    pub fixed: ValuedVector<F>,
    /// Coefficients of the subtracted basis combination, one series per
    /// basis vector; valuations all >= the starting level.
    pub combination: Vec<NovikovSeries<F>>,
    pub status: ReduceStatus,
    pub trace: ReductionTrace,
}

/// Iterate the single-step reduction against an adapted basis: at each
/// level, solve for the leading vector in the K-span of the basis leading
/// vectors and subtract. Stops at a fixed point (leading vector outside the
/// span) or when the level leaves the certified range.
pub fn reduce_to_fixed_point<F: Field>(
    v: &ValuedVector<F>,
    basis: &AdaptedBasis<F>,
) -> Result<Reduction<F>, ReductionError> {
    let field = basis.field().clone();
    let zero = Exponent::zero();
    for (i, u) in basis.vectors().iter().enumerate() {
        if u.valuation() != Valuation::Known(zero.clone()) {
            return Err(ReductionError::InconsistentBasis(i));
        }
    }

    let mut trace = ReductionTrace {
        start: v.valuation().lower_bound().cloned(),
        base_exponents: v.exponent_support(),
        basis_exponents: {
            let mut out: Vec<Exponent> = basis
                .vectors()
                .iter()
                .flat_map(|u| u.exponent_support())
                .collect();
            out.sort();
            out.dedup();
            out
        },
        ..ReductionTrace::default()
    };

    let mut current = v.clone();
    let mut combination: Vec<NovikovSeries<F>> = (0..basis.len())
        .map(|_| NovikovSeries::zero(field.clone()))
        .collect();

    let status = loop {
        let level = match current.valuation() {
            Valuation::Infinite => break ReduceStatus::Optimal,
            Valuation::AtLeast(q) => break ReduceStatus::PrecisionExhausted { level: q },
            Valuation::Known(level) => level,
        };
        if level >= *basis.precision() {
            break ReduceStatus::PrecisionExhausted { level };
        }
        let Ok(lead) = current
            .monomial_shift(&-&level)
            .leading_coefficients(&zero)
        else {
            break ReduceStatus::PrecisionExhausted { level };
        };
        match solve_in_span(&field, basis.leading_vectors(), &lead) {
            None => break ReduceStatus::Optimal,
            Some(coeffs) => {
                trace.steps.push(ReductionStep {
                    level: level.clone(),
                    coefficients: coeffs.iter().map(|c| field.format_elem(c)).collect(),
                });
                for (i, c) in coeffs.iter().enumerate() {
                    if field.is_zero(c) {
                        continue;
                    }
                    current = current.sub(&basis.vectors()[i].scale(c).monomial_shift(&level));
                    let step = NovikovSeries::monomial(field.clone(), level.clone(), c.clone());
                    combination[i] = combination[i].add(&step);
                }
            }
        }
    };

    Ok(Reduction {
        fixed: current,
        combination,
        status,
        trace,
    })
}

/// Drop every term of every entry whose exponent lies outside the group.
/// When the ambient data lives over the group, this can only improve the
/// weighted valuation of the residual.
pub fn project_exponents<F: Field>(x: &ValuedVector<F>, group: &ValueGroup) -> ValuedVector<F> {
    x.restrict_exponents(|e| group.contains(e))
}

/// The subgroup of the rationals generated by every exponent present in the
/// matrix and the vector.
pub fn exponent_group<F: Field>(a: &ValuedMatrix<F>, w: &ValuedVector<F>) -> ValueGroup {
    let mut gen = Exponent::zero();
    for e in a.exponent_support().iter().chain(w.exponent_support().iter()) {
        gen = gen.rational_gcd(e);
    }
    ValueGroup::from_step(gen)
}

#[derive(Clone, Debug, PartialEq)]
pub enum ApproxStatus {
    /// The distance is the exact supremum: the residual's leading vector is
    /// certifiably outside the span of a fully resolved adapted basis.
    Optimal,
    /// The reported distance was achieved but optimality is uncertified:
    /// either the reduction left the certified range, or some matrix column
    /// could not be resolved below the precision (so the basis may
    /// under-generate the image).
    PrecisionExhausted,
}

/// Record of the valuation bound on the approximant.
#[derive(Clone, Debug)]
pub struct GammaCertificate {
    pub x0_valuation: Valuation,
    pub input_valuation: Valuation,
    pub gamma: Exponent,
    /// input_valuation - gamma, when the input valuation is known.
    pub lower_bound: Option<Exponent>,
    pub holds: bool,
}

/// Result of a weighted best-approximation query.
#[derive(Clone, Debug)]
pub struct ApproxResult<F: Field> {
    pub x0: ValuedVector<F>,
    pub residual: ValuedVector<F>,
    /// Weighted valuation of the residual: the negative log of the distance.
    pub distance: Valuation,
    pub status: ApproxStatus,
    pub gamma: Exponent,
    pub certificate: GammaCertificate,
    pub trace: ReductionTrace,
}

/// Best approximation of `w` by the image of `a` in the weighted valuation
/// given by `t`: rescale rows by T^{-t_i}, compute an adapted basis of the
/// rescaled image, run the fixed-point reduction, and project the solution
/// coordinates back onto the exponent group of the input data.
pub fn best_approx<F: Field>(
    a: &ValuedMatrix<F>,
    t: &WeightVector,
    w: &ValuedVector<F>,
    precision: &Exponent,
) -> Result<ApproxResult<F>, ReductionError> {
    assert_eq!(a.rows(), w.len(), "matrix and target dimension mismatch");
    assert_eq!(a.rows(), t.len(), "matrix and weight dimension mismatch");
    let group = exponent_group(a, w);

    let rescaled = a.reweight_rows(t);
    let target = w.reweight(t);
    let basis = adapted_basis(&rescaled, precision)?;
    let reduction = reduce_to_fixed_point(&target, &basis)?;

    let mut x0 = ValuedVector::zero(a.field().clone(), a.ncols());
    for (coeff, pre) in reduction.combination.iter().zip(basis.preimages()) {
        if coeff.is_exact_zero() {
            continue;
        }
        x0 = x0.add(&pre.scale_series(coeff));
    }
    let x0 = project_exponents(&x0, &group);
    let residual = w.sub(&a.apply(&x0));
    let distance = residual.weighted_valuation(t);

    let status = match reduction.status {
        // A fixed point certifies optimality only if every column resolved:
        // an unresolved column leaves directions of the image unaccounted
        // for, and a later (higher-precision) basis may reduce further. An
        // exactly zero residual needs no such certificate.
        ReduceStatus::Optimal
            if basis.unresolved_columns() == 0 || distance == Valuation::Infinite =>
        {
            ApproxStatus::Optimal
        }
        _ => ApproxStatus::PrecisionExhausted,
    };
    if status == ApproxStatus::Optimal {
        // Projection cannot change the optimal distance.
        debug_assert_eq!(
            distance.known(),
            reduction.fixed.valuation().known(),
            "projection changed the certified distance"
        );
    }

    let gamma = basis.gamma().clone();
    let input_valuation = w.weighted_valuation(t);
    let lower_bound = input_valuation.known().map(|v| v - &gamma);
    let holds = match (&lower_bound, x0.valuation().lower_bound()) {
        (Some(bound), Some(xv)) => xv >= bound,
        (Some(_), None) => true, // x0 = 0 exactly
        (None, _) => true,       // no finite bound claimed
    };
    let certificate = GammaCertificate {
        x0_valuation: x0.valuation(),
        input_valuation,
        gamma: gamma.clone(),
        lower_bound,
        holds,
    };

    Ok(ApproxResult {
        x0,
        residual,
        distance,
        status,
        gamma,
        certificate,
        trace: reduction.trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use crate::series::Precision;

    fn ex(n: i64, d: i64) -> Exponent {
        Exponent::from_ratio(n, d)
    }

    fn qs(terms: &[(i64, i64, i64)]) -> NovikovSeries<Rationals> {
        NovikovSeries::from_terms(
            Rationals,
            terms
                .iter()
                .map(|(n, d, c)| (ex(*n, *d), Rationals.from_int(*c)))
                .collect(),
            Precision::Exact,
        )
    }

    fn f2s(field: PrimeField, exps: &[(i64, i64)]) -> NovikovSeries<PrimeField> {
        NovikovSeries::from_terms(
            field,
            exps.iter().map(|(n, d)| (ex(*n, *d), 1u64)).collect(),
            Precision::Exact,
        )
    }

    #[test]
    fn solve_in_span_basics() {
        let f = Rationals;
        let one = f.from_int(1);
        let zero = f.from_int(0);
        let basis = vec![vec![one.clone(), one.clone()], vec![zero.clone(), one.clone()]];
        // (1, 3) = 1*(1,1) + 2*(0,1)
        let c = solve_in_span(&f, &basis, &[f.from_int(1), f.from_int(3)]).unwrap();
        assert_eq!(c, vec![f.from_int(1), f.from_int(2)]);
        // outside the span of (1,1) alone
        assert!(solve_in_span(&f, &basis[..1].to_vec(), &[f.from_int(1), f.from_int(3)]).is_none());
        // trivial span contains only zero
        assert!(solve_in_span(&f, &[], &[one]).is_none());
        assert!(solve_in_span(&f, &[], &[zero]).is_some());
    }

    #[test]
    fn identity_matrix_basis() {
        let a = ValuedMatrix::identity(Rationals, 3);
        let basis = adapted_basis(&a, &ex(4, 1)).unwrap();
        assert_eq!(basis.len(), 3);
        assert_eq!(basis.gamma(), &Exponent::zero());
        for (i, u) in basis.vectors().iter().enumerate() {
            assert_eq!(u, &ValuedVector::unit(Rationals, 3, i));
        }
    }

    #[test]
    fn single_column_with_negative_valuation() {
        // column (1, T^{-1}): normalized to (T, 1) with preimage T, gamma = -1
        let a = ValuedMatrix::from_rows(
            Rationals,
            vec![vec![qs(&[(0, 1, 1)])], vec![qs(&[(-1, 1, 1)])]],
        );
        let basis = adapted_basis(&a, &ex(4, 1)).unwrap();
        assert_eq!(basis.len(), 1);
        assert_eq!(
            basis.vectors()[0],
            ValuedVector::new(Rationals, vec![qs(&[(1, 1, 1)]), qs(&[(0, 1, 1)])])
        );
        assert_eq!(
            basis.preimages()[0],
            ValuedVector::new(Rationals, vec![qs(&[(1, 1, 1)])])
        );
        assert_eq!(basis.gamma(), &ex(-1, 1));
        assert_eq!(gamma_constant(&basis), ex(-1, 1));
    }

    #[test]
    fn dependent_columns_over_f2() {
        // columns (1,1) and (1,1+T): second reduces to (0,T), renormalized (0,1)
        let f2 = PrimeField::new(2);
        let a = ValuedMatrix::from_rows(
            f2,
            vec![
                vec![f2s(f2, &[(0, 1)]), f2s(f2, &[(0, 1)])],
                vec![f2s(f2, &[(0, 1)]), f2s(f2, &[(0, 1), (1, 1)])],
            ],
        );
        let basis = adapted_basis(&a, &ex(4, 1)).unwrap();
        assert_eq!(basis.len(), 2);
        assert_eq!(
            basis.vectors()[0],
            ValuedVector::new(f2, vec![f2s(f2, &[(0, 1)]), f2s(f2, &[(0, 1)])])
        );
        assert_eq!(
            basis.vectors()[1],
            ValuedVector::new(f2, vec![NovikovSeries::zero(f2), f2s(f2, &[(0, 1)])])
        );
        assert_eq!(
            basis.preimages()[1],
            ValuedVector::new(f2, vec![f2s(f2, &[(-1, 1)]), f2s(f2, &[(-1, 1)])])
        );
        assert_eq!(basis.gamma(), &ex(1, 1));
    }

    #[test]
    fn zero_matrix_basis_is_empty() {
        let a = ValuedMatrix::zero(Rationals, 2, 2);
        let basis = adapted_basis(&a, &ex(3, 1)).unwrap();
        assert!(basis.is_empty());
        assert_eq!(basis.gamma(), &Exponent::zero());
    }

    #[test]
    fn precision_must_be_positive() {
        let a = ValuedMatrix::identity(Rationals, 1);
        let err = adapted_basis(&a, &Exponent::zero()).unwrap_err();
        assert_eq!(err, ReductionError::PrecisionTooSmall(Exponent::zero()));
    }

    #[test]
    fn reduce_already_fixed_vector() {
        let f2 = PrimeField::new(2);
        let a = ValuedMatrix::from_rows(f2, vec![vec![f2s(f2, &[(0, 1)])], vec![f2s(f2, &[(0, 1)])]]);
        let basis = adapted_basis(&a, &ex(4, 1)).unwrap();
        // (1, 0) has leading vector outside span{(1,1)}
        let v = ValuedVector::new(f2, vec![f2s(f2, &[(0, 1)]), NovikovSeries::zero(f2)]);
        let red = reduce_to_fixed_point(&v, &basis).unwrap();
        assert_eq!(red.status, ReduceStatus::Optimal);
        assert_eq!(red.fixed, v);
        assert!(red.combination.iter().all(NovikovSeries::is_exact_zero));
        assert!(red.trace.steps.is_empty());
    }

    #[test]
    fn reduce_basis_vector_to_zero() {
        let a = ValuedMatrix::identity(Rationals, 2);
        let basis = adapted_basis(&a, &ex(4, 1)).unwrap();
        let v = ValuedVector::unit(Rationals, 2, 0);
        let red = reduce_to_fixed_point(&v, &basis).unwrap();
        assert_eq!(red.status, ReduceStatus::Optimal);
        assert!(red.fixed.is_exact_zero());
        assert_eq!(red.combination[0], NovikovSeries::one(Rationals));
        assert!(red.combination[1].is_exact_zero());
    }

    #[test]
    fn reduce_two_step_trace_over_f2() {
        // basis {(1,1), (0,1)}, v = (1, 1+T):
        // step at level 0 subtracts u_1 leaving (0, T); step at level 1
        // subtracts T*u_2 leaving 0.
        let f2 = PrimeField::new(2);
        let source = ValuedMatrix::from_rows(
            f2,
            vec![
                vec![f2s(f2, &[(0, 1)]), NovikovSeries::zero(f2)],
                vec![f2s(f2, &[(0, 1)]), f2s(f2, &[(0, 1)])],
            ],
        );
        let basis = adapted_basis(&source, &ex(4, 1)).unwrap();
        assert_eq!(basis.len(), 2);
        let v = ValuedVector::new(f2, vec![f2s(f2, &[(0, 1)]), f2s(f2, &[(0, 1), (1, 1)])]);
        let red = reduce_to_fixed_point(&v, &basis).unwrap();
        assert_eq!(red.status, ReduceStatus::Optimal);
        assert!(red.fixed.is_exact_zero());
        let levels: Vec<&Exponent> = red.trace.steps.iter().map(|s| &s.level).collect();
        assert_eq!(levels, vec![&ex(0, 1), &ex(1, 1)]);
        assert_eq!(red.combination[0], f2s(f2, &[(0, 1)]));
        assert_eq!(red.combination[1], f2s(f2, &[(1, 1)]));
    }

    #[test]
    fn reduce_rejects_unnormalized_basis() {
        let a = ValuedMatrix::identity(Rationals, 1);
        let shifted = ValuedVector::new(Rationals, vec![qs(&[(1, 1, 1)])]);
        let bad = basis_from_vectors(
            a.clone(),
            vec![shifted.clone()],
            vec![shifted],
            ex(4, 1),
        );
        assert_eq!(bad.unwrap_err(), ReductionError::InconsistentBasis(0));
    }

    #[test]
    fn trace_levels_strictly_increase() {
        let f2 = PrimeField::new(2);
        // geometric-flavored instance that takes several steps
        let a = ValuedMatrix::from_rows(f2, vec![vec![f2s(f2, &[(0, 1), (1, 2)])]]);
        let basis = adapted_basis(&a, &ex(3, 1)).unwrap();
        let v = ValuedVector::new(f2, vec![f2s(f2, &[(0, 1)])]);
        let red = reduce_to_fixed_point(&v, &basis).unwrap();
        for pair in red.trace.steps.windows(2) {
            assert!(pair[0].level < pair[1].level, "levels must strictly increase");
        }
        assert!(matches!(red.status, ReduceStatus::PrecisionExhausted { .. }));
    }

    #[test]
    fn best_approx_column_with_negative_valuation() {
        // A = column (1, T^{-1}), t = 0, w = (0, 1): optimum x0 = T,
        // residual (-T, 0), distance 1.
        let a = ValuedMatrix::from_rows(
            Rationals,
            vec![vec![qs(&[(0, 1, 1)])], vec![qs(&[(-1, 1, 1)])]],
        );
        let w = ValuedVector::new(Rationals, vec![NovikovSeries::zero(Rationals), qs(&[(0, 1, 1)])]);
        let r = best_approx(&a, &WeightVector::zero(2), &w, &ex(4, 1)).unwrap();
        assert_eq!(r.status, ApproxStatus::Optimal);
        assert_eq!(r.distance, Valuation::Known(ex(1, 1)));
        assert_eq!(r.x0, ValuedVector::new(Rationals, vec![qs(&[(1, 1, 1)])]));
        assert_eq!(
            r.residual,
            ValuedVector::new(Rationals, vec![qs(&[(1, 1, -1)]), NovikovSeries::zero(Rationals)])
        );
        assert!(r.certificate.holds);
    }

    #[test]
    fn best_approx_weighted_untouchable_row() {
        // A = column (0, 1), t = (0, 2), w = (1, 0): x0 = 0, distance 0.
        let a = ValuedMatrix::from_rows(
            Rationals,
            vec![vec![NovikovSeries::zero(Rationals)], vec![qs(&[(0, 1, 1)])]],
        );
        let t = WeightVector::new(vec![ex(0, 1), ex(2, 1)]);
        let w = ValuedVector::new(Rationals, vec![qs(&[(0, 1, 1)]), NovikovSeries::zero(Rationals)]);
        let r = best_approx(&a, &t, &w, &ex(4, 1)).unwrap();
        assert_eq!(r.status, ApproxStatus::Optimal);
        assert_eq!(r.distance, Valuation::Known(ex(0, 1)));
        assert!(r.x0.is_exact_zero());
    }

    #[test]
    fn best_approx_exact_membership() {
        // w = A x for x = (1, T): certified infinite distance, zero residual.
        let a = ValuedMatrix::from_rows(
            Rationals,
            vec![
                vec![qs(&[(0, 1, 1)]), qs(&[(1, 1, 2)])],
                vec![NovikovSeries::zero(Rationals), qs(&[(0, 1, 1)])],
            ],
        );
        let x = ValuedVector::new(Rationals, vec![qs(&[(0, 1, 1)]), qs(&[(1, 1, 1)])]);
        let w = a.apply(&x);
        let r = best_approx(&a, &WeightVector::zero(2), &w, &ex(5, 1)).unwrap();
        assert_eq!(r.status, ApproxStatus::Optimal);
        assert_eq!(r.distance, Valuation::Infinite);
        assert!(r.residual.is_exact_zero());
        assert!(r.certificate.holds);
    }

    #[test]
    fn best_approx_zero_matrix() {
        let a = ValuedMatrix::zero(Rationals, 2, 1);
        let w = ValuedVector::new(Rationals, vec![qs(&[(1, 1, 1)]), qs(&[(2, 1, 3)])]);
        let t = WeightVector::new(vec![ex(0, 1), ex(1, 1)]);
        let r = best_approx(&a, &t, &w, &ex(4, 1)).unwrap();
        assert_eq!(r.status, ApproxStatus::Optimal);
        assert_eq!(r.distance, Valuation::Known(ex(1, 1)));
        assert!(r.x0.is_exact_zero());
        assert_eq!(r.gamma, Exponent::zero());
    }

    #[test]
    fn projection_examples() {
        let g = ValueGroup::from_step(ex(1, 1));
        let x = ValuedVector::new(Rationals, vec![qs(&[(1, 2, 1)])]);
        assert!(project_exponents(&x, &g).is_exact_zero());
        let y = ValuedVector::new(Rationals, vec![qs(&[(2, 1, 5)])]);
        assert_eq!(project_exponents(&y, &g), y);
    }

    #[test]
    fn gamma_invariant_under_basis_order() {
        // min over preimage valuations does not care about listing order
        let f2 = PrimeField::new(2);
        let source = ValuedMatrix::identity(f2, 2);
        let u1 = ValuedVector::new(f2, vec![f2s(f2, &[(0, 1)]), f2s(f2, &[(0, 1)])]);
        let u2 = ValuedVector::new(f2, vec![NovikovSeries::zero(f2), f2s(f2, &[(0, 1)])]);
        let p1 = ValuedVector::new(f2, vec![f2s(f2, &[(0, 1)]), NovikovSeries::zero(f2)]);
        let p2 = ValuedVector::new(f2, vec![f2s(f2, &[(-1, 1)]), f2s(f2, &[(-1, 1)])]);
        let fwd = basis_from_vectors(
            source.clone(),
            vec![u1.clone(), u2.clone()],
            vec![p1.clone(), p2.clone()],
            ex(4, 1),
        )
        .unwrap();
        let rev = basis_from_vectors(source, vec![u2, u1], vec![p2, p1], ex(4, 1)).unwrap();
        assert_eq!(gamma_constant(&fwd), gamma_constant(&rev));
        assert_eq!(gamma_constant(&fwd), ex(1, 1));
    }
}
