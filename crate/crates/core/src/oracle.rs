//! Brute-force best-approximation oracle over finite fields.
//!
//! Enumerates coefficient assignments directly: every x whose coordinates
//! are supported on a finite window of the exponent group, evaluated at a
//! finite precision cap. No shared code with the reduction engine; this is
//! the trust anchor the reduction results are checked against.
//!
//! All arithmetic runs on an integer-scaled exponent grid so the inner loop
//! touches only machine integers and field elements.

use log::debug;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use thiserror::Error;

use crate::exponent::Exponent;
use crate::field::Field;
use crate::linalg::{ValuedMatrix, ValuedVector, WeightVector};
use crate::period::ValueGroup;

/// Bounds for the exhaustive search.
#[derive(Clone, Debug)]
pub struct OracleConfig {
    /// The group the approximant coordinates range over.
    pub group: ValueGroup,
    /// Lowest exponent allowed in any approximant coordinate.
    pub x_lo: Exponent,
    /// Evaluation cap in the weighted scale: residual levels at or above
    /// this are indistinguishable from an exact solution.
    pub cap: Exponent,
    /// Hard limit on the number of assignments to enumerate.
    pub max_leaves: u64,
}

impl OracleConfig {
    pub fn new(group: ValueGroup, x_lo: Exponent, cap: Exponent) -> Self {
        OracleConfig {
            group,
            x_lo,
            cap,
            max_leaves: 8_000_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum OracleOutcome {
    /// The maximal weighted residual valuation over the search space.
    Finite(Exponent),
    /// Some assignment drives the residual below distinguishability.
    AtLeastCap,
}

#[derive(Error, Debug, Clone, PartialEq)]
pub enum OracleError {
    #[error("search space of {leaves:.3e} assignments exceeds the guard of {guard}")]
    SearchSpaceTooLarge { leaves: f64, guard: u64 },
    #[error("the oracle requires a finite coefficient field")]
    InfiniteField,
    #[error("the oracle requires exact inputs (no precision markers)")]
    InexactInput,
    #[error("scaled exponent overflows the integer grid")]
    GridOverflow,
}

/// Exhaustive maximization of the weighted residual valuation
/// max_x val_t(w - A x) over all x supported on the window.
pub fn oracle_best_approx<F: Field>(
    a: &ValuedMatrix<F>,
    t: &WeightVector,
    w: &ValuedVector<F>,
    cfg: &OracleConfig,
) -> Result<OracleOutcome, OracleError> {
    assert_eq!(a.rows(), w.len(), "matrix and target dimension mismatch");
    assert_eq!(a.rows(), t.len(), "matrix and weight dimension mismatch");
    let field = a.field().clone();
    let elements = field.elements().ok_or(OracleError::InfiniteField)?;
    let exact = w.precision_floor().is_exact()
        && a.columns().iter().all(|c| c.precision_floor().is_exact());
    if !exact {
        return Err(OracleError::InexactInput);
    }

    // Common denominator of every exponent in sight; the grid unit is 1/d.
    let mut denom = BigInt::one();
    let mut absorb = |e: &Exponent| denom = denom.lcm(e.denom());
    for e in a.exponent_support() {
        absorb(&e);
    }
    for e in w.exponent_support() {
        absorb(&e);
    }
    for ti in t.iter() {
        absorb(ti);
    }
    absorb(&cfg.x_lo);
    absorb(&cfg.cap);
    let step = cfg
        .group
        .generator()
        .cloned()
        .unwrap_or_else(Exponent::zero);
    if !step.is_zero() {
        absorb(&step);
    }
    let scale = |e: &Exponent| -> Result<i64, OracleError> {
        let r = e.as_rational() * BigRational::from_integer(denom.clone());
        debug_assert!(r.is_integer());
        r.to_integer().to_i64().ok_or(OracleError::GridOverflow)
    };

    let cap_s = scale(&cfg.cap)?;
    let t_s: Vec<i64> = t.iter().map(&scale).collect::<Result<_, _>>()?;
    let step_s = if step.is_zero() { 0 } else { scale(&step)? };
    let x_lo_s = scale(&cfg.x_lo)?;

    // Per-row storage range [base, t_i + cap) on the grid.
    let n = a.rows();
    let mut base_s = vec![i64::MAX; n];
    let mut cutoff_s = vec![0i64; n];
    for i in 0..n {
        cutoff_s[i] = t_s[i] + cap_s;
        for (e, _) in w.entry(i).terms() {
            base_s[i] = base_s[i].min(scale(e)?);
        }
    }
    // Column valuations in the weighted scale determine how far x-slots can
    // reach before their contribution leaves every row's window.
    let m = a.ncols();
    let mut col_min_s: Vec<Option<i64>> = vec![None; m];
    for j in 0..m {
        for i in 0..n {
            for (e, _) in a.entry(i, j).terms() {
                let es = scale(e)?;
                base_s[i] = base_s[i].min(es + x_lo_s);
                let weighted = es - t_s[i];
                col_min_s[j] = Some(col_min_s[j].map_or(weighted, |v: i64| v.min(weighted)));
            }
        }
    }
    for i in 0..n {
        if base_s[i] == i64::MAX {
            base_s[i] = cutoff_s[i]; // empty row
        }
    }

    let row_len = |i: usize| -> usize {
        if cutoff_s[i] <= base_s[i] {
            0
        } else {
            (cutoff_s[i] - base_s[i]) as usize
        }
    };

    // Enumerate the slot list: grid points of the group within the window,
    // keeping only slots that touch some visible cell.
    struct Slot<E> {
        cells: Vec<(usize, usize, E)>,
    }
    let mut slots: Vec<Slot<F::Elem>> = Vec::new();
    for (j, col_min) in col_min_s.iter().enumerate() {
        let Some(cmin) = col_min else { continue }; // zero column
        // x_j exponent g matters only while g + cmin < cap.
        let hi_s = cap_s - cmin;
        let grid: Vec<i64> = if step_s == 0 {
            if x_lo_s <= 0 && 0 < hi_s {
                vec![0]
            } else {
                vec![]
            }
        } else {
            let mut g = x_lo_s;
            // align up to the group grid
            let rem = g.rem_euclid(step_s);
            if rem != 0 {
                g += step_s - rem;
            }
            let mut out = Vec::new();
            while g < hi_s {
                out.push(g);
                g += step_s;
            }
            out
        };
        for g in grid {
            let mut cells = Vec::new();
            for i in 0..n {
                for (e, c) in a.entry(i, j).terms() {
                    let pos = scale(e)? + g;
                    if pos >= base_s[i] && pos < cutoff_s[i] {
                        cells.push((i, (pos - base_s[i]) as usize, c.clone()));
                    }
                }
            }
            if !cells.is_empty() {
                slots.push(Slot { cells });
            }
        }
    }

    let leaves = (elements.len() as f64).powi(slots.len() as i32);
    debug!(
        "oracle search: {} slots over {} field elements = {:.3e} assignments",
        slots.len(),
        elements.len(),
        leaves
    );
    if leaves > cfg.max_leaves as f64 {
        return Err(OracleError::SearchSpaceTooLarge {
            leaves,
            guard: cfg.max_leaves,
        });
    }

    // Residual cells initialized from w.
    let mut cells: Vec<Vec<F::Elem>> = (0..n)
        .map(|i| vec![field.zero(); row_len(i)])
        .collect();
    for i in 0..n {
        for (e, c) in w.entry(i).terms() {
            let pos = scale(e)?;
            if pos < cutoff_s[i] {
                cells[i][(pos - base_s[i]) as usize] = c.clone();
            }
        }
    }

    struct Search<'s, F: Field> {
        field: &'s F,
        elements: &'s [F::Elem],
        slots: &'s [Slot<F::Elem>],
        cells: Vec<Vec<F::Elem>>,
        base_s: Vec<i64>,
        t_s: Vec<i64>,
        best: Option<i64>,
        reached_cap: bool,
    }

    impl<F: Field> Search<'_, F> {
        fn evaluate(&mut self) {
            let mut min: Option<i64> = None;
            for (i, row) in self.cells.iter().enumerate() {
                if let Some(idx) = row.iter().position(|c| !self.field.is_zero(c)) {
                    let val = self.base_s[i] + idx as i64 - self.t_s[i];
                    min = Some(min.map_or(val, |m| m.min(val)));
                }
            }
            match min {
                None => self.reached_cap = true,
                Some(v) => {
                    if self.best.is_none_or(|b| v > b) {
                        self.best = Some(v);
                    }
                }
            }
        }

        fn recurse(&mut self, depth: usize) {
            if self.reached_cap {
                return;
            }
            if depth == self.slots.len() {
                self.evaluate();
                return;
            }
            // zero assignment first: no work to apply
            self.recurse(depth + 1);
            for idx in 0..self.elements.len() {
                let c = self.elements[idx].clone();
                if self.field.is_zero(&c) {
                    continue;
                }
                for (row, cell, a) in &self.slots[depth].cells {
                    let delta = self.field.mul(&c, a);
                    self.cells[*row][*cell] = self.field.sub(&self.cells[*row][*cell], &delta);
                }
                self.recurse(depth + 1);
                if self.reached_cap {
                    return; // no need to restore state
                }
                for (row, cell, a) in &self.slots[depth].cells {
                    let delta = self.field.mul(&c, a);
                    self.cells[*row][*cell] = self.field.add(&self.cells[*row][*cell], &delta);
                }
            }
        }
    }

    let mut search = Search {
        field: &field,
        elements: &elements,
        slots: &slots,
        cells,
        base_s,
        t_s,
        best: None,
        reached_cap: false,
    };
    search.recurse(0);

    if search.reached_cap {
        return Ok(OracleOutcome::AtLeastCap);
    }
    let best = search
        .best
        .expect("the zero assignment always yields an evaluation");
    let value = BigRational::new(BigInt::from(best), denom);
    Ok(OracleOutcome::Finite(Exponent::from_rational(value)))
}

/// Window start justified by the valuation bound on optimal approximants:
/// an optimum exists with val(x) >= val_t(w) - gamma, so searching below
/// that is wasted work. Floored onto the group grid.
pub fn window_start(
    input_valuation: Option<&Exponent>,
    gamma: &Exponent,
    group: &ValueGroup,
) -> Exponent {
    let Some(v) = input_valuation else {
        return Exponent::zero();
    };
    let lo = v - gamma;
    match group.generator() {
        Some(g) => lo.floor_to_multiple(g),
        None => Exponent::zero(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::series::{NovikovSeries, Precision};

    fn ex(n: i64, d: i64) -> Exponent {
        Exponent::from_ratio(n, d)
    }

    fn f2s(field: PrimeField, exps: &[(i64, i64)]) -> NovikovSeries<PrimeField> {
        NovikovSeries::from_terms(
            field,
            exps.iter().map(|(n, d)| (ex(*n, *d), 1u64)).collect(),
            Precision::Exact,
        )
    }

    fn cfg_z(x_lo: i64, cap: i64) -> OracleConfig {
        OracleConfig::new(
            ValueGroup::from_step(ex(1, 1)),
            ex(x_lo, 1),
            ex(cap, 1),
        )
    }

    #[test]
    fn zero_matrix_returns_weighted_valuation_of_target() {
        let f2 = PrimeField::new(2);
        let a = ValuedMatrix::zero(f2, 2, 1);
        let w = ValuedVector::new(f2, vec![f2s(f2, &[(1, 1)]), f2s(f2, &[(0, 1)])]);
        let t = WeightVector::new(vec![ex(0, 1), ex(2, 1)]);
        let got = oracle_best_approx(&a, &t, &w, &cfg_z(-2, 4)).unwrap();
        assert_eq!(got, OracleOutcome::Finite(ex(-2, 1)));
    }

    #[test]
    fn negative_valuation_column_instance() {
        // the derivation for the reduction example: column (1, T^{-1}),
        // t = 0, w = (0, 1) has optimum 1
        let f2 = PrimeField::new(2);
        let a = ValuedMatrix::from_rows(f2, vec![vec![f2s(f2, &[(0, 1)])], vec![f2s(f2, &[(-1, 1)])]]);
        let w = ValuedVector::new(f2, vec![NovikovSeries::zero(f2), f2s(f2, &[(0, 1)])]);
        let got = oracle_best_approx(&a, &WeightVector::zero(2), &w, &cfg_z(-3, 4)).unwrap();
        assert_eq!(got, OracleOutcome::Finite(ex(1, 1)));
    }

    #[test]
    fn exact_member_reaches_cap() {
        let f2 = PrimeField::new(2);
        let a = ValuedMatrix::from_rows(f2, vec![vec![f2s(f2, &[(0, 1), (1, 1)])]]);
        let w = ValuedVector::new(f2, vec![f2s(f2, &[(0, 1), (1, 1)])]);
        let got = oracle_best_approx(&a, &WeightVector::zero(1), &w, &cfg_z(-2, 4)).unwrap();
        assert_eq!(got, OracleOutcome::AtLeastCap);
    }

    #[test]
    fn geometric_tail_reaches_cap() {
        // w = 1, image generated by 1 - T: the truncated geometric series
        // drives the residual past any cap
        let f2 = PrimeField::new(2);
        let a = ValuedMatrix::from_rows(f2, vec![vec![f2s(f2, &[(0, 1), (1, 1)])]]);
        let w = ValuedVector::new(f2, vec![f2s(f2, &[(0, 1)])]);
        let got = oracle_best_approx(&a, &WeightVector::zero(1), &w, &cfg_z(-2, 4)).unwrap();
        assert_eq!(got, OracleOutcome::AtLeastCap);
    }

    #[test]
    fn guard_trips_on_large_spaces() {
        let f2 = PrimeField::new(2);
        let a = ValuedMatrix::from_rows(
            f2,
            vec![vec![f2s(f2, &[(-2, 1)]), f2s(f2, &[(-2, 1)]), f2s(f2, &[(-2, 1)])]],
        );
        let w = ValuedVector::new(f2, vec![f2s(f2, &[(0, 1)])]);
        let mut cfg = cfg_z(-8, 8);
        cfg.max_leaves = 16;
        let err = oracle_best_approx(&a, &WeightVector::zero(1), &w, &cfg).unwrap_err();
        assert!(matches!(err, OracleError::SearchSpaceTooLarge { .. }));
    }

    #[test]
    fn rejects_inexact_input() {
        let f2 = PrimeField::new(2);
        let a = ValuedMatrix::zero(f2, 1, 1);
        let w = ValuedVector::new(f2, vec![NovikovSeries::zero_at_precision(f2, ex(3, 1))]);
        let err = oracle_best_approx(&a, &WeightVector::zero(1), &w, &cfg_z(-2, 4)).unwrap_err();
        assert_eq!(err, OracleError::InexactInput);
    }

    #[test]
    fn half_integer_grid() {
        // G = (1/2)Z, column T^{1/2}, w = (1): optimum is infinite-at-cap
        // via x = T^{-1/2}
        let f2 = PrimeField::new(2);
        let a = ValuedMatrix::from_rows(f2, vec![vec![f2s(f2, &[(1, 2)])]]);
        let w = ValuedVector::new(f2, vec![f2s(f2, &[(0, 1)])]);
        let cfg = OracleConfig::new(ValueGroup::from_step(ex(1, 2)), ex(-2, 1), ex(3, 1));
        let got = oracle_best_approx(&a, &WeightVector::zero(1), &w, &cfg).unwrap();
        assert_eq!(got, OracleOutcome::AtLeastCap);
    }

    #[test]
    fn window_start_floors_to_grid() {
        let g = ValueGroup::from_step(ex(1, 2));
        let lo = window_start(Some(&ex(-3, 4)), &ex(1, 1), &g);
        assert_eq!(lo, ex(-2, 1));
        assert_eq!(window_start(None, &ex(5, 1), &g), Exponent::zero());
    }
}
