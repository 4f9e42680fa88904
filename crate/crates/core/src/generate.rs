//! Seeded random instances: approximation problems and two-layer filtered
//! complexes. Deterministic given the seed; the instance index selects an
//! independent stream so batches can be regenerated item by item.

use rand::prelude::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complex::{FilteredComplex, Generator};
use crate::exponent::Exponent;
use crate::field::Field;
use crate::linalg::{ValuedMatrix, ValuedVector, WeightVector};
use crate::period::{PeriodData, ValueGroup};
use crate::series::{NovikovSeries, Precision};

/// Distribution parameters for random instances.
#[derive(Clone, Debug)]
pub struct GeneratorParams {
    /// Matrix dimensions are drawn from 1..=max_dim.
    pub max_dim: usize,
    /// Term exponents are drawn from the group window [-bound, bound].
    pub exponent_bound: i64,
    /// Terms per series entry, 0..=max_terms.
    pub max_terms: usize,
    /// Probability that a matrix entry is zero.
    pub zero_probability: f64,
    /// Certification level range (integers).
    pub precision_min: i64,
    pub precision_max: i64,
    /// Probability that the target is planted in the image.
    pub membership_bias: f64,
}

impl Default for GeneratorParams {
    fn default() -> Self {
        GeneratorParams {
            max_dim: 3,
            exponent_bound: 2,
            max_terms: 2,
            zero_probability: 0.35,
            precision_min: 2,
            precision_max: 6,
            membership_bias: 0.25,
        }
    }
}

/// A weighted best-approximation problem.
#[derive(Clone, Debug)]
pub struct ApproxInstance<F: Field> {
    pub matrix: ValuedMatrix<F>,
    pub weights: WeightVector,
    pub target: ValuedVector<F>,
    pub precision: Exponent,
    pub group: ValueGroup,
}

/// Deterministic instance source: one seed, many independent streams.
#[derive(Clone, Debug)]
pub struct InstanceGenerator {
    seed: u64,
    pub params: GeneratorParams,
}

impl InstanceGenerator {
    pub fn new(seed: u64) -> Self {
        InstanceGenerator {
            seed,
            params: GeneratorParams::default(),
        }
    }

    pub fn with_params(seed: u64, params: GeneratorParams) -> Self {
        InstanceGenerator { seed, params }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// An rng whose stream is fully determined by (seed, index).
    pub fn rng_for(&self, index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index);
        rng
    }

    /// Grid points of the group inside [-bound, bound]; for the trivial
    /// group this is just the origin.
    fn window(&self, group: &ValueGroup) -> Vec<Exponent> {
        let bound = Exponent::from(self.params.exponent_bound);
        match group.generator() {
            None => vec![Exponent::zero()],
            Some(step) => {
                let mut out = Vec::new();
                let mut g = (-&bound).floor_to_multiple(step);
                if g < -&bound {
                    g = &g + step;
                }
                while g <= bound {
                    out.push(g.clone());
                    g = &g + step;
                }
                out
            }
        }
    }

    fn random_nonzero_coeff<F: Field>(&self, field: &F, rng: &mut ChaCha8Rng) -> F::Elem {
        loop {
            let c = field.from_int(rng.random_range(-6..=6));
            if !field.is_zero(&c) {
                return c;
            }
        }
    }

    fn random_series<F: Field>(
        &self,
        field: &F,
        rng: &mut ChaCha8Rng,
        window: &[Exponent],
        min_terms: usize,
    ) -> NovikovSeries<F> {
        let max = self.params.max_terms.min(window.len());
        let count = rng.random_range(min_terms..=max.max(min_terms));
        let mut terms = Vec::with_capacity(count);
        for _ in 0..count {
            let e = window.choose(rng).expect("nonempty window").clone();
            terms.push((e, self.random_nonzero_coeff(field, rng)));
        }
        NovikovSeries::from_terms(field.clone(), terms, Precision::Exact)
    }

    /// A random weighted approximation problem over the given field and
    /// exponent group.
    pub fn approx_instance<F: Field>(
        &self,
        field: F,
        index: u64,
        group: ValueGroup,
    ) -> ApproxInstance<F> {
        let mut rng = self.rng_for(index);
        let window = self.window(&group);
        let n = rng.random_range(1..=self.params.max_dim);
        let m = rng.random_range(1..=self.params.max_dim);

        let rows: Vec<Vec<NovikovSeries<F>>> = (0..n)
            .map(|_| {
                (0..m)
                    .map(|_| {
                        if rng.random_bool(self.params.zero_probability) {
                            NovikovSeries::zero(field.clone())
                        } else {
                            self.random_series(&field, &mut rng, &window, 1)
                        }
                    })
                    .collect()
            })
            .collect();
        let matrix = ValuedMatrix::from_rows(field.clone(), rows);

        // weights on the half-integer grid, to exercise group extension
        let weights = WeightVector::new(
            (0..n)
                .map(|_| {
                    Exponent::from_ratio(
                        rng.random_range(-2 * self.params.exponent_bound
                            ..=2 * self.params.exponent_bound),
                        2,
                    )
                })
                .collect(),
        );

        let target = if rng.random_bool(self.params.membership_bias) && m > 0 {
            // plant the target in the image
            let x = ValuedVector::new(
                field.clone(),
                (0..m)
                    .map(|_| self.random_series(&field, &mut rng, &window, 0))
                    .collect(),
            );
            matrix.apply(&x)
        } else {
            ValuedVector::new(
                field.clone(),
                (0..n)
                    .map(|_| self.random_series(&field, &mut rng, &window, 0))
                    .collect(),
            )
        };

        let precision = Exponent::from(
            rng.random_range(self.params.precision_min..=self.params.precision_max),
        );
        ApproxInstance {
            matrix,
            weights,
            target,
            precision,
            group,
        }
    }

    /// A random two-layer graded complex: generators in degrees one and
    /// zero, every boundary term strictly action-decreasing by construction,
    /// and the square of the boundary vanishes identically since there are
    /// no composable arrows.
    pub fn random_complex<F: Field>(&self, field: F, index: u64) -> FilteredComplex<F> {
        let mut rng = self.rng_for(index);
        let step = if rng.random_bool(0.5) {
            Exponent::one()
        } else {
            Exponent::from_ratio(1, 2)
        };
        let period = PeriodData::cyclic(step.clone());
        let n0 = rng.random_range(1..=2usize);
        let n1 = rng.random_range(1..=2usize);
        let n = n0 + n1;

        let mut generators = Vec::with_capacity(n);
        for i in 0..n {
            let degree = if i < n0 { 0 } else { 1 };
            generators.push(Generator {
                label: format!("g{i}"),
                action: Exponent::from_ratio(rng.random_range(-4..=4), 2),
                degree: Some(degree),
            });
        }

        let zero = NovikovSeries::zero(field.clone());
        let mut rows: Vec<Vec<NovikovSeries<F>>> = vec![vec![zero; n]; n];
        for col in n0..n {
            for (row, row_entries) in rows.iter_mut().enumerate().take(n0) {
                if rng.random_bool(self.params.zero_probability) {
                    continue;
                }
                // terms must satisfy e > action(row) - action(col)
                let lo = &generators[row].action - &generators[col].action;
                let mut allowed = Vec::new();
                let mut e = lo.floor_to_multiple(&step) + &step;
                while &e - &lo <= Exponent::from(self.params.exponent_bound) {
                    allowed.push(e.clone());
                    e = &e + &step;
                }
                let count = rng.random_range(1..=self.params.max_terms.min(allowed.len()).max(1));
                let mut terms = Vec::new();
                for _ in 0..count {
                    let e = allowed.choose(&mut rng).expect("nonempty").clone();
                    terms.push((e, self.random_nonzero_coeff(&field, &mut rng)));
                }
                row_entries[col] =
                    NovikovSeries::from_terms(field.clone(), terms, Precision::Exact);
            }
        }
        FilteredComplex::new(
            field.clone(),
            generators,
            period,
            ValuedMatrix::from_rows(field, rows),
        )
        .expect("two-layer complexes are well formed by construction")
    }

    /// A random chain in the coordinates of the complex.
    pub fn random_chain<F: Field>(
        &self,
        complex: &FilteredComplex<F>,
        rng: &mut ChaCha8Rng,
    ) -> ValuedVector<F> {
        let field = complex.field().clone();
        let window = self.window(&complex.value_group());
        ValuedVector::new(
            field.clone(),
            (0..complex.n())
                .map(|_| {
                    if rng.random_bool(self.params.zero_probability) {
                        NovikovSeries::zero(field.clone())
                    } else {
                        self.random_series(&field, rng, &window, 0)
                    }
                })
                .collect(),
        )
    }

    /// A random cycle: supported on the degree-zero generators, which the
    /// two-layer boundary annihilates.
    pub fn random_cycle<F: Field>(
        &self,
        complex: &FilteredComplex<F>,
        rng: &mut ChaCha8Rng,
    ) -> ValuedVector<F> {
        let field = complex.field().clone();
        let window = self.window(&complex.value_group());
        ValuedVector::new(
            field.clone(),
            (0..complex.n())
                .map(|i| {
                    let deg = complex.generators()[i].degree;
                    if deg == Some(0) && !rng.random_bool(self.params.zero_probability / 2.0) {
                        self.random_series(&field, rng, &window, 0)
                    } else {
                        NovikovSeries::zero(field.clone())
                    }
                })
                .collect(),
        )
    }

    /// A random series with nonnegative valuation (all exponents >= 0).
    pub fn random_nonneg_series<F: Field>(
        &self,
        field: &F,
        rng: &mut ChaCha8Rng,
        group: &ValueGroup,
    ) -> NovikovSeries<F> {
        let window: Vec<Exponent> = self
            .window(group)
            .into_iter()
            .filter(|e| !e.is_negative())
            .collect();
        self.random_series(field, rng, &window, 0)
    }

    /// A random vector with entries supported on the group window.
    pub fn random_vector<F: Field>(
        &self,
        field: &F,
        rng: &mut ChaCha8Rng,
        group: &ValueGroup,
        len: usize,
    ) -> ValuedVector<F> {
        let window = self.window(group);
        ValuedVector::new(
            field.clone(),
            (0..len)
                .map(|_| self.random_series(field, rng, &window, 0))
                .collect(),
        )
    }
}
