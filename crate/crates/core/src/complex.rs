//! Filtered chain complexes over a Novikov ring: validation, the filtration
//! level, spectral numbers with certificates, boundary depth, spectrality,
//! and homology ranks.
//!
//! A complex is given by generator labels with chosen action values, period
//! data for the coefficient exponents, and a boundary matrix whose column i
//! is the boundary of generator i in the generator basis.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::exponent::Exponent;
use crate::field::Field;
use crate::linalg::{ValuedMatrix, ValuedVector, WeightVector};
use crate::period::{PeriodData, ValueGroup};
use crate::reduction::{
    best_approx, ApproxStatus, ReductionError, ReductionTrace,
};
use crate::series::Valuation;

/// A generator with its chosen lift's action value and optional degree.
#[derive(Clone, Debug, PartialEq)]
pub struct Generator {
    pub label: String,
    pub action: Exponent,
    pub degree: Option<i64>,
}

/// A chain in generator coordinates.
pub type Chain<F> = ValuedVector<F>;

/// The filtration level of a chain: the largest action among its terms.
#[derive(Clone, Debug, PartialEq)]
pub enum FiltrationLevel {
    Finite(Exponent),
    /// Only the zero chain.
    MinusInfinite,
    /// Certified to be at most the bound; the exact level is hidden beyond
    /// the chain's precision.
    Unknown { at_most: Exponent },
}

impl FiltrationLevel {
    /// The level is -val_t with the action weights; this converts.
    pub fn from_valuation(v: &Valuation) -> Self {
        match v {
            Valuation::Known(e) => FiltrationLevel::Finite(-e),
            Valuation::Infinite => FiltrationLevel::MinusInfinite,
            Valuation::AtLeast(e) => FiltrationLevel::Unknown { at_most: -e },
        }
    }

    pub fn finite(&self) -> Option<&Exponent> {
        match self {
            FiltrationLevel::Finite(e) => Some(e),
            _ => None,
        }
    }

    /// An upper bound valid in every case; `None` encodes minus infinity.
    pub fn upper_bound(&self) -> Option<&Exponent> {
        match self {
            FiltrationLevel::Finite(e) => Some(e),
            FiltrationLevel::Unknown { at_most } => Some(at_most),
            FiltrationLevel::MinusInfinite => None,
        }
    }
}

impl fmt::Display for FiltrationLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiltrationLevel::Finite(e) => write!(f, "{e}"),
            FiltrationLevel::MinusInfinite => write!(f, "-inf"),
            FiltrationLevel::Unknown { at_most } => write!(f, "unknown(<={at_most})"),
        }
    }
}

/// A structural violation found by `validate`.
#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    /// Term T^e in boundary entry (row, col) does not strictly decrease the
    /// action: action(row) - e >= action(col).
    Filtration {
        row: usize,
        col: usize,
        exponent: Exponent,
    },
    /// Entry (row, col) of the squared boundary is certifiably nonzero.
    BoundarySquare { row: usize, col: usize },
    /// Nonzero entry between degrees that do not differ by one.
    Degree { row: usize, col: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Filtration { row, col, exponent } => write!(
                f,
                "boundary entry ({row},{col}) term T^({exponent}) does not strictly decrease the action"
            ),
            Violation::BoundarySquare { row, col } => {
                write!(f, "boundary squared is nonzero at ({row},{col})")
            }
            Violation::Degree { row, col } => {
                write!(f, "boundary entry ({row},{col}) does not lower degree by one")
            }
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn first(&self) -> Option<&Violation> {
        self.violations.first()
    }
}

#[derive(Error, Debug, Clone, PartialEq)]
pub enum SpectralError {
    #[error("chain is not a cycle: boundary is nonzero in coordinate {row}")]
    NotACycle { row: usize },
    #[error("cycle status undecided at precision O(T^({bound}))")]
    CycleUndecided { bound: Exponent },
    #[error(transparent)]
    Reduction(#[from] ReductionError),
}

/// Tri-state cycle test.
#[derive(Clone, Debug, PartialEq)]
pub enum CycleCheck {
    Yes,
    No { row: usize },
    Undecided { bound: Exponent },
}

/// The spectral number of a class, with its certificate.
#[derive(Clone, Debug, PartialEq)]
pub enum Rho {
    Finite(Exponent),
    MinusInfinity,
    Unknown { at_most: Exponent },
}

impl fmt::Display for Rho {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rho::Finite(e) => write!(f, "{e}"),
            Rho::MinusInfinity => write!(f, "-inf"),
            Rho::Unknown { at_most } => write!(f, "unknown(<={at_most})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SpectralStatus {
    Optimal,
    PrecisionExhausted,
}

/// Witness that the queried cycle bounds: a chain h with boundary equal to
/// the cycle (exactly, or below the stated level) and controlled level.
#[derive(Clone, Debug)]
pub struct BoundaryWitness<F: Field> {
    pub h: Chain<F>,
    pub level_h: FiltrationLevel,
    /// Allowed level: level of the input plus the boundary depth.
    pub allowed: Option<Exponent>,
    /// The equation `boundary(h) = cycle` holds below this level; `None`
    /// means it holds exactly.
    pub verified_below: Option<Exponent>,
}

#[derive(Clone, Debug)]
pub struct SpectralResult<F: Field> {
    pub rho: Rho,
    /// Optimal representative: a chain in the class whose level equals rho.
    pub representative: Option<Chain<F>>,
    pub witness: Option<BoundaryWitness<F>>,
    pub status: SpectralStatus,
    pub distance: Valuation,
    pub gamma: Exponent,
    pub boundary_depth: Exponent,
    pub precision: Exponent,
    pub trace: ReductionTrace,
}

#[derive(Clone, Debug, PartialEq)]
pub enum RankResult {
    Known(usize),
    Undecided,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HomologyRanks {
    pub total: RankResult,
    pub by_degree: Option<BTreeMap<i64, RankResult>>,
}

/// A filtered chain complex over the Novikov ring of its period data.
#[derive(Clone, Debug)]
pub struct FilteredComplex<F: Field> {
    field: F,
    generators: Vec<Generator>,
    period: PeriodData,
    boundary: ValuedMatrix<F>,
}

impl<F: Field> FilteredComplex<F> {
    pub fn new(
        field: F,
        generators: Vec<Generator>,
        period: PeriodData,
        boundary: ValuedMatrix<F>,
    ) -> Result<Self, String> {
        let n = generators.len();
        if n == 0 {
            return Err("a complex needs at least one generator".to_owned());
        }
        if boundary.rows() != n || boundary.ncols() != n {
            return Err(format!(
                "boundary must be {n}x{n}, got {}x{}",
                boundary.rows(),
                boundary.ncols()
            ));
        }
        if *boundary.field() != field {
            return Err("boundary field differs from the complex field".to_owned());
        }
        let graded = generators.iter().filter(|g| g.degree.is_some()).count();
        if graded != 0 && graded != n {
            return Err("either all generators carry a degree or none do".to_owned());
        }
        Ok(FilteredComplex {
            field,
            generators,
            period,
            boundary,
        })
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn period(&self) -> &PeriodData {
        &self.period
    }

    pub fn boundary(&self) -> &ValuedMatrix<F> {
        &self.boundary
    }

    pub fn is_graded(&self) -> bool {
        self.generators.iter().all(|g| g.degree.is_some())
    }

    pub fn value_group(&self) -> ValueGroup {
        self.period.value_group()
    }

    /// The action values as a weight vector: the level function is the
    /// negated weighted valuation for these weights.
    pub fn action_weights(&self) -> WeightVector {
        WeightVector::new(self.generators.iter().map(|g| g.action.clone()).collect())
    }

    /// Default certification level: four times the spread of the input
    /// exponents plus one, so desk-scale complexes certify on first attempt.
    pub fn default_precision(&self) -> Exponent {
        let mut values: Vec<Exponent> = self
            .generators
            .iter()
            .map(|g| g.action.clone())
            .collect();
        values.extend(self.boundary.exponent_support());
        let spread = match (values.iter().min(), values.iter().max()) {
            (Some(lo), Some(hi)) => hi - lo,
            _ => Exponent::zero(),
        };
        let four = Exponent::from(4);
        let one = Exponent::one();
        Exponent::from_rational(
            four.as_rational() * spread.as_rational() + one.as_rational(),
        )
    }

    /// Check the filtration condition, that the boundary squares to zero
    /// (modulo precision), and degree compatibility when graded.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let n = self.n();
        for col in 0..n {
            let action_col = &self.generators[col].action;
            for row in 0..n {
                let entry = self.boundary.entry(row, col);
                for (e, _) in entry.terms() {
                    // require action(row) - e < action(col), strictly
                    if &(&self.generators[row].action - e) >= action_col {
                        report.violations.push(Violation::Filtration {
                            row,
                            col,
                            exponent: e.clone(),
                        });
                    }
                }
                if self.is_graded() && entry.is_known_nonzero() {
                    let dr = self.generators[row].degree.unwrap();
                    let dc = self.generators[col].degree.unwrap();
                    if dr != dc - 1 {
                        report.violations.push(Violation::Degree { row, col });
                    }
                }
            }
        }
        let square = self.boundary.compose(&self.boundary);
        for col in 0..n {
            for row in 0..n {
                if square.entry(row, col).is_known_nonzero() {
                    report
                        .violations
                        .push(Violation::BoundarySquare { row, col });
                }
            }
        }
        report
    }

    /// The level of a chain: the largest action over its terms, minus
    /// infinity for the zero chain.
    pub fn filtration_level(&self, x: &Chain<F>) -> FiltrationLevel {
        FiltrationLevel::from_valuation(&x.weighted_valuation(&self.action_weights()))
    }

    pub fn is_cycle(&self, x: &Chain<F>) -> CycleCheck {
        let dx = self.boundary.apply(x);
        for (row, entry) in dx.entries().iter().enumerate() {
            if entry.is_known_nonzero() {
                return CycleCheck::No { row };
            }
        }
        match dx.valuation() {
            Valuation::Infinite => CycleCheck::Yes,
            Valuation::AtLeast(bound) => CycleCheck::Undecided { bound },
            Valuation::Known(_) => unreachable!("known terms already handled"),
        }
    }

    /// Spectral number at the default precision.
    pub fn spectral_number(&self, x: &Chain<F>) -> Result<SpectralResult<F>, SpectralError> {
        self.spectral_number_at(x, &self.default_precision())
    }

    /// The spectral number of the class of `x`: the infimum of levels over
    /// representatives, realized by a best approximation of `x` by the
    /// boundary image in the action-weighted valuation.
    pub fn spectral_number_at(
        &self,
        x: &Chain<F>,
        precision: &Exponent,
    ) -> Result<SpectralResult<F>, SpectralError> {
        match self.is_cycle(x) {
            CycleCheck::Yes => {}
            CycleCheck::No { row } => return Err(SpectralError::NotACycle { row }),
            CycleCheck::Undecided { bound } => {
                return Err(SpectralError::CycleUndecided { bound })
            }
        }
        let t = self.action_weights();
        let max_action = self
            .generators
            .iter()
            .map(|g| g.action.clone())
            .max()
            .expect("at least one generator");
        let r = best_approx(&self.boundary, &t, x, precision)?;
        let depth = &r.gamma + &max_action;
        let level_x = self.filtration_level(x);

        let result = match (&r.status, &r.distance) {
            (ApproxStatus::Optimal, Valuation::Known(d)) => SpectralResult {
                rho: Rho::Finite(-d),
                representative: Some(r.residual.clone()),
                witness: None,
                status: SpectralStatus::Optimal,
                distance: r.distance.clone(),
                gamma: r.gamma.clone(),
                boundary_depth: depth,
                precision: precision.clone(),
                trace: r.trace.clone(),
            },
            (ApproxStatus::Optimal, Valuation::Infinite) => {
                // x is exactly a boundary; the solving chain is exact.
                let witness = self.certify_witness(&r.x0, &level_x, &depth, None);
                SpectralResult {
                    rho: Rho::MinusInfinity,
                    representative: None,
                    witness: Some(witness),
                    status: SpectralStatus::Optimal,
                    distance: r.distance.clone(),
                    gamma: r.gamma.clone(),
                    boundary_depth: depth,
                    precision: precision.clone(),
                    trace: r.trace.clone(),
                }
            }
            (_, dist) => {
                // The reduction left the certified range. If the residual
                // valuation is at least the precision (or the residual is
                // exactly zero), x - boundary(h) vanishes modulo the
                // certified range: report minus infinity with the witness.
                // Otherwise stay undecided.
                let indistinguishable = dist.lower_bound().is_none_or(|q| q >= precision);
                let witness_ok = indistinguishable.then(|| {
                    self.certify_witness(&r.x0, &level_x, &depth, dist.lower_bound().cloned())
                });
                match witness_ok {
                    Some(witness) if witness_level_ok(&witness) => SpectralResult {
                        rho: Rho::MinusInfinity,
                        representative: None,
                        witness: Some(witness),
                        status: SpectralStatus::Optimal,
                        distance: r.distance.clone(),
                        gamma: r.gamma.clone(),
                        boundary_depth: depth,
                        precision: precision.clone(),
                        trace: r.trace.clone(),
                    },
                    _ => {
                        let at_most = match dist.lower_bound() {
                            Some(b) => -b,
                            None => -precision,
                        };
                        SpectralResult {
                            rho: Rho::Unknown { at_most },
                            representative: None,
                            witness: None,
                            status: SpectralStatus::PrecisionExhausted,
                            distance: r.distance.clone(),
                            gamma: r.gamma.clone(),
                            boundary_depth: depth,
                            precision: precision.clone(),
                            trace: r.trace.clone(),
                        }
                    }
                }
            }
        };
        Ok(result)
    }

    fn certify_witness(
        &self,
        h: &Chain<F>,
        level_x: &FiltrationLevel,
        depth: &Exponent,
        verified_below: Option<Exponent>,
    ) -> BoundaryWitness<F> {
        let level_h = self.filtration_level(h);
        let allowed = level_x.upper_bound().map(|lx| lx + depth);
        BoundaryWitness {
            h: h.clone(),
            level_h,
            allowed,
            verified_below,
        }
    }

    /// The boundary depth: gamma of the reweighted boundary image plus the
    /// largest action. Every certified boundary admits a solving chain whose
    /// level exceeds the cycle's by at most this much.
    pub fn boundary_depth(&self) -> Result<Exponent, ReductionError> {
        self.boundary_depth_at(&self.default_precision())
    }

    pub fn boundary_depth_at(&self, precision: &Exponent) -> Result<Exponent, ReductionError> {
        let t = self.action_weights();
        let basis = crate::reduction::adapted_basis(&self.boundary.reweight_rows(&t), precision)?;
        let max_action = self
            .generators
            .iter()
            .map(|g| g.action.clone())
            .max()
            .expect("at least one generator");
        Ok(basis.gamma() + &max_action)
    }

    /// Does a finite optimal spectral number land in the action spectrum
    /// {action_i - g : g in the value group}?
    pub fn spectrality_check(&self, result: &SpectralResult<F>) -> bool {
        let Rho::Finite(rho) = &result.rho else {
            return false;
        };
        if result.status != SpectralStatus::Optimal {
            return false;
        }
        let group = self.value_group();
        self.generators
            .iter()
            .any(|g| group.contains(&(&g.action - rho)))
    }

    /// Homology rank over the series field: total, and per degree when
    /// graded. The boundary rank is computed by valuation-pivot elimination
    /// certified below the precision.
    pub fn homology_rank(&self, precision: &Exponent) -> HomologyRanks {
        let total_rank = rank_at_precision(self.boundary.columns(), precision);
        let n = self.n();
        let total = match total_rank {
            RankResult::Known(r) => RankResult::Known(n - 2 * r),
            RankResult::Undecided => RankResult::Undecided,
        };
        let by_degree = self.is_graded().then(|| {
            let mut per_degree: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
            for (i, g) in self.generators.iter().enumerate() {
                per_degree.entry(g.degree.unwrap()).or_default().push(i);
            }
            let rank_of_degree = |k: i64| -> RankResult {
                match per_degree.get(&k) {
                    None => RankResult::Known(0),
                    Some(cols) => {
                        let selected: Vec<_> = cols
                            .iter()
                            .map(|&j| self.boundary.column(j).clone())
                            .collect();
                        rank_at_precision(&selected, precision)
                    }
                }
            };
            per_degree
                .keys()
                .map(|&k| {
                    let nk = per_degree[&k].len();
                    let rk = rank_of_degree(k);
                    let rk1 = rank_of_degree(k + 1);
                    let hk = match (rk, rk1) {
                        (RankResult::Known(a), RankResult::Known(b)) => {
                            RankResult::Known(nk - a - b)
                        }
                        _ => RankResult::Undecided,
                    };
                    (k, hk)
                })
                .collect()
        });
        HomologyRanks { total, by_degree }
    }
}

fn witness_level_ok<F: Field>(w: &BoundaryWitness<F>) -> bool {
    match (&w.level_h, &w.allowed) {
        (FiltrationLevel::MinusInfinite, _) => true,
        (_, None) => false, // nonzero h bounding the zero chain: malformed
        (level, Some(allowed)) => level.upper_bound().is_some_and(|b| b <= allowed),
    }
}

/// Rank of the span of the columns, certified below the precision: pick the
/// column with the smallest known valuation, clear its leading row from the
/// others, repeat. Columns that leave the certified range undecide the rank.
fn rank_at_precision<F: Field>(cols: &[ValuedVector<F>], precision: &Exponent) -> RankResult {
    let mut work: Vec<ValuedVector<F>> = cols.to_vec();
    let mut rank = 0usize;
    loop {
        work.retain(|c| !c.is_exact_zero());
        let mut pivot: Option<(usize, Exponent)> = None;
        for (idx, c) in work.iter().enumerate() {
            if let Valuation::Known(v) = c.valuation() {
                if v < *precision && pivot.as_ref().is_none_or(|(_, pv)| v < *pv) {
                    pivot = Some((idx, v));
                }
            }
        }
        let Some((pidx, pval)) = pivot else {
            return if work.is_empty() {
                RankResult::Known(rank)
            } else {
                RankResult::Undecided
            };
        };
        let pcol = work.swap_remove(pidx);
        rank += 1;
        let prow = (0..pcol.len())
            .find(|&i| pcol.entry(i).valuation() == Valuation::Known(pval.clone()))
            .expect("some entry attains the column valuation");
        let Ok(pinv) = pcol.entry(prow).invert(precision) else {
            return RankResult::Undecided;
        };
        for c in work.iter_mut() {
            let e = c.entry(prow);
            if e.is_known_nonzero() {
                let q = e.mul(&pinv);
                *c = c.sub(&pcol.scale_series(&q));
            }
        }
    }
}
