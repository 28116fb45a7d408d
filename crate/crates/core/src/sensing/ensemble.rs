use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkit::{dot, ComplexVec};
use crate::rng::{self, Purpose};

use super::operator::{Arm, MeasurementOperator, PairedSensing};

/// `|<a, x>|²`
pub fn intensity(a: &ComplexVec, x: &ComplexVec) -> Result<f64> {
    Ok(crate::numkit::inner(a, x)?.norm_sqr())
}

/// Row `index` of the family `purpose`: `n` i.i.d. `CN(0,1)` entries from
/// stream `(seed, purpose, index)`. Rows are therefore reproducible one at a
/// time without materializing the ensemble.
pub fn gaussian_row(seed: u64, purpose: Purpose, index: usize, n: usize) -> Vec<Complex64> {
    rng::complex_gaussian_vec(n, &mut rng::stream(seed, purpose, index as u64))
}

fn check_shape(n: usize, m: usize) -> Result<()> {
    if n == 0 || m == 0 {
        return Err(Error::InvalidParameter(format!("ensemble needs n >= 1 and m >= 1, got n={n}, m={m}")));
    }
    Ok(())
}

fn generate(seed: u64, purpose: Purpose, n: usize, m: usize) -> Vec<Complex64> {
    let mut data = Vec::with_capacity(n * m);
    for i in 0..m {
        data.extend(gaussian_row(seed, purpose, i, n));
    }
    data
}

/// Row-major dense rows viewed as a measurement operator.
#[derive(Debug, Clone, Copy)]
pub struct DenseRows<'a> {
    n: usize,
    data: &'a [Complex64],
}

impl<'a> DenseRows<'a> {
    /// Rows of length `n` stored back to back in `data`.
    pub fn from_flat(n: usize, data: &'a [Complex64]) -> Result<Self> {
        if n == 0 || data.is_empty() {
            return Err(Error::EmptyVector);
        }
        if data.len() % n != 0 {
            return Err(Error::DimensionMismatch { expected: n * data.len().div_ceil(n), got: data.len() });
        }
        Ok(Self::new(n, data))
    }

    fn new(n: usize, data: &'a [Complex64]) -> Self {
        debug_assert_eq!(data.len() % n, 0);
        Self { n, data }
    }

    fn row(&self, i: usize) -> &'a [Complex64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    fn energy(&self) -> f64 {
        crate::numkit::norm_sqr(self.data)
    }
}

impl MeasurementOperator for DenseRows<'_> {
    fn dim(&self) -> usize {
        self.n
    }

    fn rows(&self) -> usize {
        self.data.len() / self.n
    }

    fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.n, "operator input dimension mismatch");
        self.data.chunks_exact(self.n).map(|row| dot(row, x)).collect()
    }

    fn adjoint(&self, y: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(y.len(), self.rows(), "operator adjoint length mismatch");
        let mut out = vec![Complex64::new(0.0, 0.0); self.n];
        for (row, yi) in self.data.chunks_exact(self.n).zip(y) {
            crate::numkit::axpy(*yi, row, &mut out);
        }
        out
    }
}

/// `m` i.i.d. complex Gaussian sensing vectors `a_i ~ CN(0, I_n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PlainEnsemble {
    n: usize,
    m: usize,
    seed: u64,
    rows: Vec<Complex64>,
}

impl PlainEnsemble {
    pub fn new(n: usize, m: usize, seed: u64) -> Result<Self> {
        check_shape(n, m)?;
        Ok(Self { n, m, seed, rows: generate(seed, Purpose::PlainRows, n, m) })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        self.view().row(i)
    }

    pub fn view(&self) -> DenseRows<'_> {
        DenseRows::new(self.n, &self.rows)
    }

    /// Contiguous block of rows as an operator.
    pub fn block(&self, range: Range<usize>) -> DenseRows<'_> {
        DenseRows::new(self.n, &self.rows[range.start * self.n..range.end * self.n])
    }

    pub fn header(&self) -> EnsembleHeader {
        EnsembleHeader { kind: EnsembleKind::Plain, n: self.n, m: self.m, seed: self.seed }
    }
}

impl MeasurementOperator for PlainEnsemble {
    fn dim(&self) -> usize {
        self.n
    }
    fn rows(&self) -> usize {
        self.m
    }
    fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        self.view().apply(x)
    }
    fn adjoint(&self, y: &[Complex64]) -> Vec<Complex64> {
        self.view().adjoint(y)
    }
}

/// `m` pairs `(a¹_i, a²_i)` of i.i.d. complex Gaussian sensing vectors. The two
/// families come from disjoint stream purposes, so every one of the `2m`
/// vectors is independent.
#[derive(Debug, Clone, PartialEq)]
pub struct PairedEnsemble {
    n: usize,
    m: usize,
    seed: u64,
    first: Vec<Complex64>,
    second: Vec<Complex64>,
}

impl PairedEnsemble {
    pub fn new(n: usize, m: usize, seed: u64) -> Result<Self> {
        check_shape(n, m)?;
        Ok(Self {
            n,
            m,
            seed,
            first: generate(seed, Purpose::FirstRows, n, m),
            second: generate(seed, Purpose::SecondRows, n, m),
        })
    }

    /// Ensemble with explicit rows; `first` and `second` hold `m` rows each.
    pub fn from_rows(first: Vec<ComplexVec>, second: Vec<ComplexVec>) -> Result<Self> {
        if first.len() != second.len() || first.is_empty() {
            return Err(Error::InvalidParameter("need the same nonzero number of rows in each arm".into()));
        }
        let n = first[0].dim();
        for row in first.iter().chain(&second) {
            if row.dim() != n {
                return Err(Error::DimensionMismatch { expected: n, got: row.dim() });
            }
        }
        Ok(Self {
            n,
            m: first.len(),
            seed: 0,
            first: first.iter().flat_map(|r| r.iter().copied()).collect(),
            second: second.iter().flat_map(|r| r.iter().copied()).collect(),
        })
    }

    /// Row `i` of both arms without building the ensemble.
    pub fn pair_at(seed: u64, n: usize, i: usize) -> (Vec<Complex64>, Vec<Complex64>) {
        (gaussian_row(seed, Purpose::FirstRows, i, n), gaussian_row(seed, Purpose::SecondRows, i, n))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn first_row(&self, i: usize) -> &[Complex64] {
        &self.first[i * self.n..(i + 1) * self.n]
    }

    pub fn second_row(&self, i: usize) -> &[Complex64] {
        &self.second[i * self.n..(i + 1) * self.n]
    }

    pub fn view(&self) -> PairedRows<'_> {
        self.block(0..self.m)
    }

    /// Contiguous block of pairs.
    pub fn block(&self, range: Range<usize>) -> PairedRows<'_> {
        let span = range.start * self.n..range.end * self.n;
        PairedRows {
            first: DenseRows::new(self.n, &self.first[span.clone()]),
            second: DenseRows::new(self.n, &self.second[span]),
        }
    }

    pub fn header(&self) -> EnsembleHeader {
        EnsembleHeader { kind: EnsembleKind::Paired, n: self.n, m: self.m, seed: self.seed }
    }
}

/// Borrowed view of (a block of) a [`PairedEnsemble`].
#[derive(Debug, Clone, Copy)]
pub struct PairedRows<'a> {
    first: DenseRows<'a>,
    second: DenseRows<'a>,
}

impl PairedRows<'_> {
    pub fn first_row(&self, i: usize) -> &[Complex64] {
        self.first.row(i)
    }

    pub fn second_row(&self, i: usize) -> &[Complex64] {
        self.second.row(i)
    }

    fn arm(&self, arm: Arm) -> &DenseRows<'_> {
        match arm {
            Arm::First => &self.first,
            Arm::Second => &self.second,
        }
    }
}

impl PairedSensing for PairedRows<'_> {
    fn dim(&self) -> usize {
        self.first.dim()
    }
    fn pairs(&self) -> usize {
        self.first.rows()
    }
    fn apply_arm(&self, arm: Arm, x: &[Complex64]) -> Vec<Complex64> {
        self.arm(arm).apply(x)
    }
    fn adjoint_arm(&self, arm: Arm, y: &[Complex64]) -> Vec<Complex64> {
        self.arm(arm).adjoint(y)
    }
    fn mean_pair_energy(&self) -> f64 {
        (self.first.energy() + self.second.energy()) / self.pairs() as f64
    }
}

impl PairedSensing for PairedEnsemble {
    fn dim(&self) -> usize {
        self.n
    }
    fn pairs(&self) -> usize {
        self.m
    }
    fn apply_arm(&self, arm: Arm, x: &[Complex64]) -> Vec<Complex64> {
        self.view().apply_arm(arm, x)
    }
    fn adjoint_arm(&self, arm: Arm, y: &[Complex64]) -> Vec<Complex64> {
        self.view().adjoint_arm(arm, y)
    }
    fn mean_pair_energy(&self) -> f64 {
        self.view().mean_pair_energy()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EnsembleKind {
    Plain,
    Paired,
}

/// Textual ensemble descriptor. Rows are never stored: they are regenerated
/// from `(kind, n, m, seed)`.
///
/// Format (one line, fields in this order):
/// `onebit-ensemble v1 kind=<plain|paired> n=<n> m=<m> seed=<seed>`
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnsembleHeader {
    pub kind: EnsembleKind,
    pub n: usize,
    pub m: usize,
    pub seed: u64,
}

impl EnsembleHeader {
    pub fn build_paired(&self) -> Result<PairedEnsemble> {
        match self.kind {
            EnsembleKind::Paired => PairedEnsemble::new(self.n, self.m, self.seed),
            EnsembleKind::Plain => Err(Error::InvalidParameter("header describes a plain ensemble".into())),
        }
    }

    pub fn build_plain(&self) -> Result<PlainEnsemble> {
        match self.kind {
            EnsembleKind::Plain => PlainEnsemble::new(self.n, self.m, self.seed),
            EnsembleKind::Paired => Err(Error::InvalidParameter("header describes a paired ensemble".into())),
        }
    }
}

impl fmt::Display for EnsembleHeader {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            EnsembleKind::Plain => "plain",
            EnsembleKind::Paired => "paired",
        };
        write!(f, "onebit-ensemble v1 kind={kind} n={} m={} seed={}", self.n, self.m, self.seed)
    }
}

impl FromStr for EnsembleHeader {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |why: &str| Error::InvalidParameter(format!("bad ensemble header '{s}': {why}"));
        let mut parts = s.split_whitespace();
        if parts.next() != Some("onebit-ensemble") || parts.next() != Some("v1") {
            return Err(bad("expected 'onebit-ensemble v1' prefix"));
        }
        let mut field = |name: &str| -> Result<&str> {
            let part = parts.next().ok_or_else(|| bad("missing field"))?;
            part.strip_prefix(name).and_then(|p| p.strip_prefix('=')).ok_or_else(|| bad(&format!("expected {name}=...")))
        };
        let kind = match field("kind")? {
            "plain" => EnsembleKind::Plain,
            "paired" => EnsembleKind::Paired,
            _ => return Err(bad("unknown kind")),
        };
        let n = field("n")?.parse().map_err(|_| bad("n"))?;
        let m = field("m")?.parse().map_err(|_| bad("m"))?;
        let seed = field("seed")?.parse().map_err(|_| bad("seed"))?;
        if parts.next().is_some() {
            return Err(bad("trailing fields"));
        }
        Ok(Self { kind, n, m, seed })
    }
}
