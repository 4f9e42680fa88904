//! Named desk-scale complexes with hard-coded flowline counts, taken from
//! the standard Morse pictures on the circle and the torus (see
//! docs/fixtures.md for the pictures).

use std::str::FromStr;

use crate::complex::{FilteredComplex, Generator};
use crate::exponent::Exponent;
use crate::field::{Field, Rationals};
use crate::linalg::ValuedMatrix;
use crate::period::PeriodData;
use crate::series::{NovikovSeries, Precision};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FixtureName {
    /// Height function on the circle: two critical points, the two
    /// connecting flowlines cancel over the rationals.
    MorseCircle,
    /// Circle with a degree-one closed form: the boundary picks up the deck
    /// transformation, d p = (1 - T) q.
    NovikovCircle,
    /// Standard height function on the torus: four critical points, zero
    /// boundary over the rationals.
    TorusMorse,
    /// Two generators over the half-integer group with d p = T^{1/2} q.
    TwoGeneratorCancel,
}

impl FromStr for FixtureName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "morse_circle" => Ok(FixtureName::MorseCircle),
            "novikov_circle" => Ok(FixtureName::NovikovCircle),
            "torus_morse" => Ok(FixtureName::TorusMorse),
            "two_generator_cancel" => Ok(FixtureName::TwoGeneratorCancel),
            other => Err(format!(
                "unknown fixture {other:?}; expected one of morse_circle, \
                 novikov_circle, torus_morse, two_generator_cancel"
            )),
        }
    }
}

impl FixtureName {
    pub const ALL: [FixtureName; 4] = [
        FixtureName::MorseCircle,
        FixtureName::NovikovCircle,
        FixtureName::TorusMorse,
        FixtureName::TwoGeneratorCancel,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            FixtureName::MorseCircle => "morse_circle",
            FixtureName::NovikovCircle => "novikov_circle",
            FixtureName::TorusMorse => "torus_morse",
            FixtureName::TwoGeneratorCancel => "two_generator_cancel",
        }
    }
}

/// Build a named fixture over the rationals.
pub fn fixture(name: FixtureName) -> FilteredComplex<Rationals> {
    match name {
        FixtureName::MorseCircle => morse_circle(),
        FixtureName::NovikovCircle => novikov_circle(),
        FixtureName::TorusMorse => torus_morse(),
        FixtureName::TwoGeneratorCancel => two_generator_cancel(),
    }
}

fn gen(label: &str, action: (i64, i64), degree: i64) -> Generator {
    Generator {
        label: label.to_owned(),
        action: Exponent::from_ratio(action.0, action.1),
        degree: Some(degree),
    }
}

fn series(terms: &[((i64, i64), i64)]) -> NovikovSeries<Rationals> {
    NovikovSeries::from_terms(
        Rationals,
        terms
            .iter()
            .map(|((n, d), c)| (Exponent::from_ratio(*n, *d), Rationals.from_int(*c)))
            .collect(),
        Precision::Exact,
    )
}

fn morse_circle() -> FilteredComplex<Rationals> {
    FilteredComplex::new(
        Rationals,
        vec![gen("q", (0, 1), 0), gen("p", (1, 1), 1)],
        PeriodData::trivial(),
        ValuedMatrix::zero(Rationals, 2, 2),
    )
    .expect("fixture is well formed")
}

fn novikov_circle() -> FilteredComplex<Rationals> {
    let z = NovikovSeries::zero(Rationals);
    let boundary = ValuedMatrix::from_rows(
        Rationals,
        vec![
            vec![z.clone(), series(&[((0, 1), 1), ((1, 1), -1)])],
            vec![z.clone(), z.clone()],
        ],
    );
    FilteredComplex::new(
        Rationals,
        vec![gen("q", (0, 1), 0), gen("p", (1, 1), 1)],
        PeriodData::cyclic(Exponent::one()),
        boundary,
    )
    .expect("fixture is well formed")
}

fn torus_morse() -> FilteredComplex<Rationals> {
    FilteredComplex::new(
        Rationals,
        vec![
            gen("min", (0, 1), 0),
            gen("saddle1", (1, 1), 1),
            gen("saddle2", (1, 1), 1),
            gen("max", (2, 1), 2),
        ],
        PeriodData::trivial(),
        ValuedMatrix::zero(Rationals, 4, 4),
    )
    .expect("fixture is well formed")
}

fn two_generator_cancel() -> FilteredComplex<Rationals> {
    let z = NovikovSeries::zero(Rationals);
    let boundary = ValuedMatrix::from_rows(
        Rationals,
        vec![
            vec![z.clone(), series(&[((1, 2), 1)])],
            vec![z.clone(), z.clone()],
        ],
    );
    FilteredComplex::new(
        Rationals,
        vec![gen("q", (0, 1), 0), gen("p", (1, 1), 1)],
        PeriodData::cyclic(Exponent::from_ratio(1, 2)),
        boundary,
    )
    .expect("fixture is well formed")
}
