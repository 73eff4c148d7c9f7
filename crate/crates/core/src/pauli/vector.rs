use std::fmt;

use super::point::PauliPoint;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Largest register for which a full `4^n` coefficient vector is materialized.
pub const MAX_VECTOR_QUBITS: usize = 10;

/// Coefficients `Tr(T_b X)` of an operator `X = 2^{-n} sum_b c_b T_b`,
/// stored densely and indexed by [`PauliPoint::index`].
#[derive(Clone, Debug, PartialEq)]
pub struct PauliVector<S> {
    n: usize,
    coeffs: Vec<S>,
}

impl<S: Scalar> PauliVector<S> {
    pub fn zeros(n: usize) -> Result<Self> {
        if n > MAX_VECTOR_QUBITS {
            return Err(Error::TooManyQubits(n, MAX_VECTOR_QUBITS));
        }
        Ok(PauliVector {
            n,
            coeffs: vec![S::zero(); 1 << (2 * n)],
        })
    }

    /// The maximally mixed state `I / 2^n`.
    pub fn maximally_mixed(n: usize) -> Result<Self> {
        let mut v = Self::zeros(n)?;
        v.coeffs[0] = S::one();
        Ok(v)
    }

    pub fn from_terms(n: usize, terms: &[(PauliPoint, S)]) -> Result<Self> {
        let mut v = Self::zeros(n)?;
        for (p, c) in terms {
            if !p.fits(n) {
                return Err(Error::OutOfRange(format!("{p} on {n} qubits")));
            }
            v.coeffs[p.index(n)] = c.clone();
        }
        Ok(v)
    }

    pub fn from_coeffs(n: usize, coeffs: Vec<S>) -> Result<Self> {
        if n > MAX_VECTOR_QUBITS {
            return Err(Error::TooManyQubits(n, MAX_VECTOR_QUBITS));
        }
        if coeffs.len() != 1 << (2 * n) {
            return Err(Error::DimensionMismatch {
                expected: 1 << (2 * n),
                got: coeffs.len(),
            });
        }
        Ok(PauliVector { n, coeffs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn get(&self, a: PauliPoint) -> &S {
        &self.coeffs[a.index(self.n)]
    }

    pub fn set(&mut self, a: PauliPoint, value: S) {
        let i = a.index(self.n);
        self.coeffs[i] = value;
    }

    /// Nonzero entries in index order.
    pub fn terms(&self) -> Vec<(PauliPoint, S)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_negligible())
            .map(|(i, c)| (PauliPoint::from_index(i, self.n), c.clone()))
            .collect()
    }

    pub fn is_unit_trace(&self) -> bool {
        (self.coeffs[0].clone() - S::one()).is_negligible()
    }

    /// Coefficients of `self ⊗ other`, `other` occupying the higher qubits.
    pub fn tensor(&self, other: &PauliVector<S>) -> Result<PauliVector<S>> {
        let n = self.n + other.n;
        let mut out = Self::zeros(n)?;
        for (a, ca) in self.terms() {
            for (b, cb) in other.terms() {
                let p = PauliPoint::new(a.z | b.z << self.n, a.x | b.x << self.n);
                out.set(p, ca.clone() * cb);
            }
        }
        Ok(out)
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> PauliVector<T> {
        PauliVector {
            n: self.n,
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    pub fn to_f64(&self) -> PauliVector<f64> {
        self.map(|c| c.to_f64())
    }

    pub fn max_abs_diff(&self, other: &PauliVector<S>) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a.to_f64() - b.to_f64()).abs())
            .fold(0.0, f64::max)
    }
}

impl<S: Scalar> fmt::Display for PauliVector<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n={}", self.n)?;
        for (p, c) in self.terms() {
            writeln!(f, "{c}\t{}", p.to_letters(self.n))?;
        }
        Ok(())
    }
}
