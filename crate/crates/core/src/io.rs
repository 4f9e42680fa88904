//! File formats: complexes, matrices, and oracle instances as JSON with
//! exact literals for every number. See docs/formats.md for the schemas.
//!
//! The complex boundary is stored column-major: `boundary[i]` is the
//! boundary of generator i in generator coordinates. Plain matrices are
//! stored row-major, the way they read.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{FilteredComplex, Generator};
use crate::exponent::Exponent;
use crate::field::{Field, PrimeField, Rationals};
use crate::linalg::{ValuedMatrix, ValuedVector, WeightVector};
use crate::parse::{parse_exponent, parse_series, ParseError};
use crate::period::PeriodData;

#[derive(Error, Debug)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("in {context}: {err}")]
    Literal { context: String, err: ParseError },
    #[error("{0}")]
    Shape(String),
}

impl IoError {
    fn literal(context: impl Into<String>) -> impl FnOnce(ParseError) -> IoError {
        let context = context.into();
        move |err| IoError::Literal { context, err }
    }
}

/// Which coefficient field a file declares.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldTag {
    Rationals,
    Prime(u64),
}

impl FieldTag {
    pub fn parse(s: &str) -> Result<Self, IoError> {
        if s == "Q" {
            return Ok(FieldTag::Rationals);
        }
        if let Some(p) = s.strip_prefix('F') {
            if let Ok(p) = p.parse::<u64>() {
                return Ok(FieldTag::Prime(p));
            }
        }
        Err(IoError::Shape(format!(
            "unknown field tag {s:?}; expected \"Q\" or \"F<prime>\""
        )))
    }

    pub fn as_string(&self) -> String {
        match self {
            FieldTag::Rationals => "Q".to_owned(),
            FieldTag::Prime(p) => format!("F{p}"),
        }
    }
}

fn default_field() -> String {
    "Q".to_owned()
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct PeriodDataDto {
    pub rank: usize,
    #[serde(default)]
    pub torsion: Vec<u64>,
    pub weights: Vec<String>,
}

impl PeriodDataDto {
    pub fn to_period(&self) -> Result<PeriodData, IoError> {
        let weights = self
            .weights
            .iter()
            .map(|w| parse_exponent(w))
            .collect::<Result<Vec<_>, _>>()
            .map_err(IoError::literal("period weights"))?;
        PeriodData::new(self.rank, self.torsion.clone(), weights).map_err(IoError::Shape)
    }

    pub fn from_period(p: &PeriodData) -> Self {
        PeriodDataDto {
            rank: p.rank(),
            torsion: p.torsion().to_vec(),
            weights: p.weights().iter().map(|w| w.to_string()).collect(),
        }
    }
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct GeneratorDto {
    pub label: String,
    pub action: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<i64>,
}

/// A filtered complex on disk.
#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct ComplexFile {
    #[serde(default = "default_field")]
    pub field: String,
    pub generators: Vec<GeneratorDto>,
    pub period: PeriodDataDto,
    /// Column-major: `boundary[i]` is the boundary of generator i.
    pub boundary: Vec<Vec<String>>,
}

/// A plain matrix with its exponent group.
#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct MatrixFile {
    #[serde(default = "default_field")]
    pub field: String,
    pub period: PeriodDataDto,
    /// Row-major: `matrix[i][j]` is the entry in row i, column j.
    pub matrix: Vec<Vec<String>>,
}

/// A full best-approximation instance for oracle cross-checks.
#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct InstanceFile {
    #[serde(default = "default_field")]
    pub field: String,
    pub period: PeriodDataDto,
    pub weights: Vec<String>,
    /// Row-major.
    pub matrix: Vec<Vec<String>>,
    pub target: Vec<String>,
    pub precision: String,
    /// Optional lower bound for approximant exponents; derived from the
    /// reduction's gamma when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window_lo: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_leaves: Option<u64>,
}

/// A complex over whichever field its file declares.
#[derive(Clone, Debug)]
pub enum AnyComplex {
    Rationals(FilteredComplex<Rationals>),
    Prime(FilteredComplex<PrimeField>),
}

pub fn load_complex(json: &str) -> Result<AnyComplex, IoError> {
    let file: ComplexFile = serde_json::from_str(json)?;
    match FieldTag::parse(&file.field)? {
        FieldTag::Rationals => Ok(AnyComplex::Rationals(complex_from_file(Rationals, &file)?)),
        FieldTag::Prime(p) => Ok(AnyComplex::Prime(complex_from_file(
            PrimeField::new(p),
            &file,
        )?)),
    }
}

pub fn complex_from_file<F: Field>(
    field: F,
    file: &ComplexFile,
) -> Result<FilteredComplex<F>, IoError> {
    let generators = file
        .generators
        .iter()
        .map(|g| {
            Ok(Generator {
                label: g.label.clone(),
                action: parse_exponent(&g.action)
                    .map_err(IoError::literal(format!("action of {:?}", g.label)))?,
                degree: g.degree,
            })
        })
        .collect::<Result<Vec<_>, IoError>>()?;
    let period = file.period.to_period()?;
    let n = generators.len();
    if file.boundary.len() != n {
        return Err(IoError::Shape(format!(
            "boundary has {} columns for {n} generators",
            file.boundary.len()
        )));
    }
    let mut columns = Vec::with_capacity(n);
    for (i, col) in file.boundary.iter().enumerate() {
        if col.len() != n {
            return Err(IoError::Shape(format!(
                "boundary column {i} has {} entries for {n} generators",
                col.len()
            )));
        }
        let entries = col
            .iter()
            .enumerate()
            .map(|(j, s)| {
                parse_series(&field, s)
                    .map_err(IoError::literal(format!("boundary[{i}][{j}]")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        columns.push(ValuedVector::new(field.clone(), entries));
    }
    let boundary = ValuedMatrix::from_columns(field.clone(), n, columns);
    FilteredComplex::new(field, generators, period, boundary).map_err(IoError::Shape)
}

pub fn complex_to_file<F: Field>(complex: &FilteredComplex<F>) -> ComplexFile {
    let generators = complex
        .generators()
        .iter()
        .map(|g| GeneratorDto {
            label: g.label.clone(),
            action: g.action.to_string(),
            degree: g.degree,
        })
        .collect();
    let boundary = complex
        .boundary()
        .columns()
        .iter()
        .map(|col| col.entries().iter().map(|s| s.to_string()).collect())
        .collect();
    ComplexFile {
        field: complex.field().name(),
        generators,
        period: PeriodDataDto::from_period(complex.period()),
        boundary,
    }
}

pub fn complex_to_json<F: Field>(complex: &FilteredComplex<F>) -> String {
    serde_json::to_string_pretty(&complex_to_file(complex)).expect("serializable")
}

/// A matrix over whichever field its file declares, with its period data.
#[derive(Clone, Debug)]
pub enum AnyMatrix {
    Rationals(ValuedMatrix<Rationals>, PeriodData),
    Prime(ValuedMatrix<PrimeField>, PeriodData),
}

pub fn load_matrix(json: &str) -> Result<AnyMatrix, IoError> {
    let file: MatrixFile = serde_json::from_str(json)?;
    let period = file.period.to_period()?;
    match FieldTag::parse(&file.field)? {
        FieldTag::Rationals => Ok(AnyMatrix::Rationals(
            matrix_from_rows(Rationals, &file.matrix)?,
            period,
        )),
        FieldTag::Prime(p) => Ok(AnyMatrix::Prime(
            matrix_from_rows(PrimeField::new(p), &file.matrix)?,
            period,
        )),
    }
}

pub fn matrix_from_rows<F: Field>(
    field: F,
    rows: &[Vec<String>],
) -> Result<ValuedMatrix<F>, IoError> {
    let width = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != width) {
        return Err(IoError::Shape("ragged matrix rows".to_owned()));
    }
    let parsed = rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, s)| {
                    parse_series(&field, s).map_err(IoError::literal(format!("matrix[{i}][{j}]")))
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ValuedMatrix::from_rows(field, parsed))
}

pub fn vector_from_strings<F: Field>(
    field: F,
    entries: &[String],
    context: &str,
) -> Result<ValuedVector<F>, IoError> {
    let parsed = entries
        .iter()
        .enumerate()
        .map(|(i, s)| parse_series(&field, s).map_err(IoError::literal(format!("{context}[{i}]"))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ValuedVector::new(field, parsed))
}

/// A parsed oracle instance over whichever field its file declares.
pub enum AnyInstance {
    Rationals(ParsedInstance<Rationals>),
    Prime(ParsedInstance<PrimeField>),
}

pub struct ParsedInstance<F: Field> {
    pub matrix: ValuedMatrix<F>,
    pub weights: WeightVector,
    pub target: ValuedVector<F>,
    pub precision: Exponent,
    pub period: PeriodData,
    pub window_lo: Option<Exponent>,
    pub max_leaves: Option<u64>,
}

pub fn load_instance(json: &str) -> Result<AnyInstance, IoError> {
    let file: InstanceFile = serde_json::from_str(json)?;
    let period = file.period.to_period()?;
    let weights = WeightVector::new(
        file.weights
            .iter()
            .map(|w| parse_exponent(w))
            .collect::<Result<Vec<_>, _>>()
            .map_err(IoError::literal("weights"))?,
    );
    let precision =
        parse_exponent(&file.precision).map_err(IoError::literal("precision"))?;
    let window_lo = file
        .window_lo
        .as_deref()
        .map(parse_exponent)
        .transpose()
        .map_err(IoError::literal("window_lo"))?;
    match FieldTag::parse(&file.field)? {
        FieldTag::Rationals => {
            let matrix = matrix_from_rows(Rationals, &file.matrix)?;
            let target = vector_from_strings(Rationals, &file.target, "target")?;
            check_instance_shape(&matrix, &weights, &target)?;
            Ok(AnyInstance::Rationals(ParsedInstance {
                matrix,
                weights,
                target,
                precision,
                period,
                window_lo,
                max_leaves: file.max_leaves,
            }))
        }
        FieldTag::Prime(p) => {
            let field = PrimeField::new(p);
            let matrix = matrix_from_rows(field, &file.matrix)?;
            let target = vector_from_strings(field, &file.target, "target")?;
            check_instance_shape(&matrix, &weights, &target)?;
            Ok(AnyInstance::Prime(ParsedInstance {
                matrix,
                weights,
                target,
                precision,
                period,
                window_lo,
                max_leaves: file.max_leaves,
            }))
        }
    }
}

fn check_instance_shape<F: Field>(
    matrix: &ValuedMatrix<F>,
    weights: &WeightVector,
    target: &ValuedVector<F>,
) -> Result<(), IoError> {
    if matrix.rows() != target.len() {
        return Err(IoError::Shape(format!(
            "target has {} entries for a matrix with {} rows",
            target.len(),
            matrix.rows()
        )));
    }
    if matrix.rows() != weights.len() {
        return Err(IoError::Shape(format!(
            "weights have {} entries for a matrix with {} rows",
            weights.len(),
            matrix.rows()
        )));
    }
    Ok(())
}
