//! The period homomorphism on a finitely generated abelian group, its value
//! group inside the rationals, and the splitting along it.
//!
//! Weights are exact rationals, so the value group is cyclic and membership
//! is a single divisibility test. Torsion always maps to zero.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::exponent::Exponent;
use crate::lattice::{gcd_witness, integer_kernel};

/// A finitely generated abelian group together with a homomorphism to the
/// reals, given by its values on the free generators.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PeriodData {
    rank: usize,
    torsion: Vec<u64>,
    weights: Vec<Exponent>,
}

impl PeriodData {
    pub fn new(rank: usize, torsion: Vec<u64>, weights: Vec<Exponent>) -> Result<Self, String> {
        if weights.len() != rank {
            return Err(format!(
                "expected {rank} weights for rank {rank}, got {}",
                weights.len()
            ));
        }
        if torsion.iter().any(|&t| t == 0) {
            return Err("torsion orders must be positive".to_owned());
        }
        Ok(PeriodData {
            rank,
            torsion,
            weights,
        })
    }

    /// The trivial group with the zero homomorphism.
    pub fn trivial() -> Self {
        PeriodData {
            rank: 0,
            torsion: Vec::new(),
            weights: Vec::new(),
        }
    }

    /// Free rank one, a single generator of period `w`.
    pub fn cyclic(w: Exponent) -> Self {
        PeriodData {
            rank: 1,
            torsion: Vec::new(),
            weights: vec![w],
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn torsion(&self) -> &[u64] {
        &self.torsion
    }

    pub fn weights(&self) -> &[Exponent] {
        &self.weights
    }

    /// Total coordinate length: free part followed by torsion part.
    pub fn coord_len(&self) -> usize {
        self.rank + self.torsion.len()
    }

    /// Value of the homomorphism on a group element in coordinates.
    /// Torsion coordinates contribute nothing.
    pub fn omega(&self, gamma: &[BigInt]) -> Exponent {
        assert_eq!(gamma.len(), self.coord_len(), "coordinate length mismatch");
        let mut acc = BigRational::zero();
        for (c, w) in gamma.iter().zip(self.weights.iter()) {
            acc += BigRational::from_integer(c.clone()) * w.as_rational();
        }
        Exponent::from_rational(acc)
    }

    /// The image subgroup of the rationals.
    pub fn value_group(&self) -> ValueGroup {
        let mut g = Exponent::zero();
        for w in &self.weights {
            g = g.rational_gcd(w);
        }
        ValueGroup::from_step(g)
    }
}

/// A finitely generated subgroup of the rationals: either trivial or the
/// multiples of a positive rational step.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ValueGroup {
    step: Option<Exponent>,
}

impl ValueGroup {
    pub fn trivial() -> Self {
        ValueGroup { step: None }
    }

    pub fn from_step(step: Exponent) -> Self {
        if step.is_zero() {
            ValueGroup { step: None }
        } else {
            assert!(!step.is_negative(), "group step must be nonnegative");
            ValueGroup { step: Some(step) }
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.step.is_none()
    }

    /// Generator of the group; `None` for the trivial group.
    pub fn generator(&self) -> Option<&Exponent> {
        self.step.as_ref()
    }

    pub fn contains(&self, x: &Exponent) -> bool {
        match &self.step {
            None => x.is_zero(),
            Some(g) => x.is_zero() || x.is_multiple_of(g),
        }
    }

    /// Smallest group containing both.
    pub fn join(&self, other: &ValueGroup) -> ValueGroup {
        match (&self.step, &other.step) {
            (None, _) => other.clone(),
            (_, None) => self.clone(),
            (Some(a), Some(b)) => ValueGroup::from_step(a.rational_gcd(b)),
        }
    }
}

impl fmt::Display for ValueGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.step {
            None => write!(f, "{{0}}"),
            Some(g) => write!(f, "({g})Z"),
        }
    }
}

/// A splitting of the group along its period homomorphism: a basis of the
/// kernel and a complement element mapping to the generator of the image.
#[derive(Clone, Debug)]
pub struct Splitting {
    period: PeriodData,
    kernel_basis: Vec<Vec<BigInt>>,
    complement: Option<Vec<BigInt>>,
    generator: Option<Exponent>,
}

impl Splitting {
    /// Kernel basis vectors, in free-then-torsion coordinates. Torsion unit
    /// vectors are always included since torsion maps to zero.
    pub fn kernel_basis(&self) -> &[Vec<BigInt>] {
        &self.kernel_basis
    }

    /// An element mapping onto the generator of the value group, if any.
    pub fn complement(&self) -> Option<&[BigInt]> {
        self.complement.as_deref()
    }

    pub fn image_generator(&self) -> Option<&Exponent> {
        self.generator.as_ref()
    }

    /// Write `gamma` as kernel part plus a multiple of the complement.
    /// The multiple is `omega(gamma) / generator`, an exact integer.
    pub fn decompose(&self, gamma: &[BigInt]) -> (Vec<BigInt>, BigInt) {
        let val = self.period.omega(gamma);
        let mult = match (&self.generator, &self.complement) {
            (Some(g), Some(_)) => {
                let q = val.as_rational() / g.as_rational();
                assert!(q.is_integer(), "omega value outside the image group");
                q.to_integer()
            }
            _ => {
                assert!(val.is_zero(), "nonzero omega value in trivial image");
                BigInt::zero()
            }
        };
        let mut kernel_part = gamma.to_vec();
        if let Some(c) = &self.complement {
            for (k, ci) in kernel_part.iter_mut().zip(c.iter()) {
                *k -= &mult * ci;
            }
        }
        debug_assert!(self.period.omega(&kernel_part).is_zero());
        (kernel_part, mult)
    }

    /// Inverse of `decompose`.
    pub fn reassemble(&self, kernel_part: &[BigInt], mult: &BigInt) -> Vec<BigInt> {
        let mut out = kernel_part.to_vec();
        if let Some(c) = &self.complement {
            for (o, ci) in out.iter_mut().zip(c.iter()) {
                *o += mult * ci;
            }
        }
        out
    }
}

/// Split the group along its period homomorphism. Always succeeds for
/// rational weights: the image is torsion-free, so the exact sequence
/// kernel -> group -> image splits.
pub fn compute_splitting(p: &PeriodData) -> Splitting {
    let denom_lcm = p
        .weights
        .iter()
        .fold(BigInt::one(), |acc, w| acc.lcm(w.denom()));
    let int_row: Vec<BigInt> = p
        .weights
        .iter()
        .map(|w| w.numer() * (&denom_lcm / w.denom()))
        .collect();

    let pad = |v: Vec<BigInt>, p: &PeriodData| -> Vec<BigInt> {
        let mut out = v;
        out.resize(p.coord_len(), BigInt::zero());
        out
    };

    let mut kernel_basis: Vec<Vec<BigInt>> = if p.rank > 0 {
        integer_kernel(&[int_row.clone()])
            .into_iter()
            .map(|v| pad(v, p))
            .collect()
    } else {
        Vec::new()
    };
    // Torsion generators map to zero.
    for i in 0..p.torsion.len() {
        let mut v = vec![BigInt::zero(); p.coord_len()];
        v[p.rank + i] = BigInt::one();
        kernel_basis.push(v);
    }

    let (complement, generator) = match gcd_witness(&int_row) {
        Some((v, g)) => {
            let gen = Exponent::from_rational(BigRational::new(g, denom_lcm));
            (Some(pad(v, p)), Some(gen))
        }
        None => (None, None),
    };

    Splitting {
        period: p.clone(),
        kernel_basis,
        complement,
        generator,
    }
}

/// Period data for the group generated by the given generators plus extra
/// values. Every element of the result admits an exact membership test, and
/// the original group embeds via `value_group`.
pub fn extend_group(g_weights: &[Exponent], extra: &[Exponent]) -> PeriodData {
    let weights: Vec<Exponent> = g_weights.iter().chain(extra.iter()).cloned().collect();
    let rank = weights.len();
    PeriodData::new(rank, Vec::new(), weights).expect("lengths match by construction")
}
