use std::collections::HashMap;
use std::fmt;

use super::lp::{Certificate, LinearProgram, LpOutcome};
use crate::error::{Error, Result};
use crate::pauli::PauliVector;
use crate::phasespace::{stabilizers, PhasePointOperator, PhaseSpace};
use crate::scalar::Scalar;

/// Affine expansion `rho = sum_alpha w_alpha A_alpha` over a generating set.
#[derive(Clone, Debug, PartialEq)]
pub struct QuasiDecomposition<S> {
    /// `(operator id, weight)` pairs with nonzero weight, ids ascending.
    pub weights: Vec<(usize, S)>,
    pub one_norm: S,
    pub nonnegative: bool,
}

impl<S: Scalar> QuasiDecomposition<S> {
    fn from_weights(mut weights: Vec<(usize, S)>) -> Self {
        weights.retain(|(_, w)| !w.is_negligible());
        weights.sort_by_key(|(id, _)| *id);
        let one_norm = weights.iter().fold(S::zero(), |acc, (_, w)| acc + w.abs_val());
        let nonnegative = weights.iter().all(|(_, w)| *w >= S::zero());
        QuasiDecomposition {
            weights,
            one_norm,
            nonnegative,
        }
    }

    /// `one_norm - 1`.
    pub fn negativity(&self) -> S {
        self.one_norm.clone() - S::one()
    }

    pub fn weight_sum(&self) -> S {
        self.weights.iter().fold(S::zero(), |acc, (_, w)| acc + w.clone())
    }

    pub fn reconstruct(&self, set: &[PauliVector<S>]) -> Result<PauliVector<S>> {
        let first = set.first().ok_or_else(|| Error::OutOfRange("empty generating set".into()))?;
        let mut acc = vec![S::zero(); first.coeffs().len()];
        for (id, w) in &self.weights {
            let col = set
                .get(*id)
                .ok_or_else(|| Error::OutOfRange(format!("operator id {id}")))?;
            for (a, c) in acc.iter_mut().zip(col.coeffs()) {
                *a = a.clone() + w.clone() * c.clone();
            }
        }
        PauliVector::from_coeffs(first.n(), acc)
    }
}

impl<S: Scalar> fmt::Display for QuasiDecomposition<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "one_norm\t{}", self.one_norm)?;
        writeln!(f, "nonnegative\t{}", self.nonnegative)?;
        for (id, w) in &self.weights {
            writeln!(f, "weight\t{id}\t{w}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub enum Feasibility<S> {
    Feasible(QuasiDecomposition<S>),
    /// `y` with `y.A_alpha <= 0` for every member and `y.rho > 0`.
    Infeasible { separating: Vec<S> },
}

impl<S> Feasibility<S> {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible(_))
    }
}

#[derive(Clone, Debug)]
pub struct RobustnessReport<S> {
    pub value: S,
    pub decomposition: QuasiDecomposition<S>,
    /// Dual vector over Pauli coordinates: `|y.A_alpha| <= 1` and `y.rho = value`.
    pub dual: Vec<S>,
    pub certificate: Certificate,
    pub iterations: usize,
}

impl<S: Scalar> RobustnessReport<S> {
    /// Recheck the dual directly against the set and the state.
    pub fn dual_gap(&self, rho: &PauliVector<S>, set: &[PauliVector<S>]) -> f64 {
        let dot = |a: &[S]| {
            a.iter()
                .zip(&self.dual)
                .fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
        };
        let violation = set
            .iter()
            .map(|col| dot(col.coeffs()).abs_val().to_f64() - 1.0)
            .fold(0.0, f64::max);
        let gap = (dot(rho.coeffs()) - self.value.clone()).to_f64().abs();
        violation.max(gap)
    }
}

impl<S: Scalar> fmt::Display for RobustnessReport<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "objective\t{}", self.value)?;
        write!(f, "{}", self.decomposition)?;
        let dual: Vec<String> = self.dual.iter().map(|y| y.to_string()).collect();
        writeln!(f, "dual\t{}", dual.join("\t"))?;
        writeln!(f, "certificate_residual\t{:e}", self.certificate.worst())
    }
}

/// Coefficient vectors of a phase space, in operator order.
pub fn phase_space_columns<S: Scalar>(space: &PhaseSpace) -> Result<Vec<PauliVector<S>>> {
    operator_columns(&space.operators)
}

pub fn operator_columns<S: Scalar>(ops: &[PhasePointOperator]) -> Result<Vec<PauliVector<S>>> {
    ops.iter()
        .map(|op| Ok(op.to_vector()?.map(|c| S::from_rational(c))))
        .collect()
}

fn float_key<S: Scalar>(v: &PauliVector<S>) -> Vec<u64> {
    v.coeffs()
        .iter()
        .map(|c| {
            let x = c.to_f64();
            if x == 0.0 {
                0
            } else {
                x.to_bits()
            }
        })
        .collect()
}

/// Distinct columns with the first id at which each occurs.
fn dedupe<S: Scalar>(rho: &PauliVector<S>, set: &[PauliVector<S>]) -> Result<Vec<usize>> {
    if set.is_empty() {
        return Err(Error::OutOfRange("empty generating set".into()));
    }
    let dim = rho.coeffs().len();
    if let Some(bad) = set.iter().find(|v| v.coeffs().len() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: bad.coeffs().len(),
        });
    }
    if !rho.is_unit_trace() {
        return Err(Error::OutOfRange("state must have unit trace".into()));
    }
    let mut seen = HashMap::new();
    let mut ids = Vec::new();
    for (id, v) in set.iter().enumerate() {
        if seen.insert(float_key(v), id).is_none() {
            ids.push(id);
        }
    }
    Ok(ids)
}

/// Feasibility of `rho = sum w_alpha A_alpha` with `w >= 0`; the identity
/// coordinate enforces `sum w = 1`.
pub fn decompose_nonnegative<S: Scalar>(rho: &PauliVector<S>, set: &[PauliVector<S>]) -> Result<Feasibility<S>> {
    let ids = dedupe(rho, set)?;
    let columns: Vec<Vec<S>> = ids.iter().map(|&id| set[id].coeffs().to_vec()).collect();
    let costs = vec![S::zero(); columns.len()];
    let lp = LinearProgram::new(rho.coeffs().len(), columns, rho.coeffs().to_vec(), costs)?;
    match lp.solve()? {
        LpOutcome::Optimal(sol) => Ok(Feasibility::Feasible(QuasiDecomposition::from_weights(
            ids.into_iter().zip(sol.x).collect(),
        ))),
        LpOutcome::Infeasible { farkas } => Ok(Feasibility::Infeasible { separating: farkas }),
        LpOutcome::Unbounded => Err(Error::Unbounded),
    }
}

/// Minimum one-norm affine decomposition, in split form `w = u - v`.
pub fn robustness<S: Scalar>(rho: &PauliVector<S>, set: &[PauliVector<S>]) -> Result<RobustnessReport<S>> {
    let ids = dedupe(rho, set)?;
    let mut columns: Vec<Vec<S>> = ids.iter().map(|&id| set[id].coeffs().to_vec()).collect();
    let negated: Vec<Vec<S>> = columns
        .iter()
        .map(|col| col.iter().map(|c| -c.clone()).collect())
        .collect();
    columns.extend(negated);
    let costs = vec![S::one(); columns.len()];
    let lp = LinearProgram::new(rho.coeffs().len(), columns, rho.coeffs().to_vec(), costs)?;
    let sol = match lp.solve()? {
        LpOutcome::Optimal(sol) => sol,
        LpOutcome::Infeasible { .. } => return Err(Error::Infeasible),
        LpOutcome::Unbounded => return Err(Error::Unbounded),
    };
    let certificate = lp.certify(&sol);
    let k = ids.len();
    let weights = ids
        .iter()
        .enumerate()
        .map(|(i, &id)| (id, sol.x[i].clone() - sol.x[i + k].clone()))
        .collect();
    Ok(RobustnessReport {
        value: sol.objective.clone(),
        decomposition: QuasiDecomposition::from_weights(weights),
        dual: sol.dual,
        certificate,
        iterations: sol.iterations,
    })
}

/// Stabilizer projectors on `n` qubits as coefficient vectors.
pub fn stabilizer_columns<S: Scalar>(n: usize, cap: usize) -> Result<Vec<PauliVector<S>>> {
    let ops: Vec<PhasePointOperator> = stabilizers(n, cap)?
        .iter()
        .map(PhasePointOperator::from_projector)
        .collect();
    operator_columns(&ops)
}

/// Robustness over all stabilizer projectors.
pub fn robustness_of_magic<S: Scalar>(rho: &PauliVector<S>, cap: usize) -> Result<RobustnessReport<S>> {
    let set = stabilizer_columns(rho.n(), cap)?;
    robustness(rho, &set)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::{PauliPoint, DEFAULT_STABILIZER_CAP};
    use crate::scalar::{rat, rat_int, Rational};

    fn bloch(x: Rational, y: Rational, z: Rational) -> PauliVector<Rational> {
        PauliVector::from_terms(
            1,
            &[
                (PauliPoint::IDENTITY, rat_int(1)),
                (PauliPoint::new(0, 1), x),
                (PauliPoint::new(1, 1), y),
                (PauliPoint::new(1, 0), z),
            ],
        )
        .unwrap()
    }

    #[test]
    fn stabilizer_state_has_unit_robustness() {
        let rho = bloch(rat_int(0), rat_int(0), rat_int(1));
        let r = robustness_of_magic(&rho, DEFAULT_STABILIZER_CAP).unwrap();
        assert_eq!(r.value, rat_int(1));
        assert!(r.certificate.is_valid(0.0));
    }

    #[test]
    fn cube_corner_robustness_is_three() {
        let rho = bloch(rat_int(1), rat_int(1), rat_int(1));
        let r = robustness_of_magic(&rho, DEFAULT_STABILIZER_CAP).unwrap();
        assert_eq!(r.value, rat_int(3));
        assert!(r.certificate.is_valid(0.0));
        let set = stabilizer_columns::<Rational>(1, 1).unwrap();
        assert_eq!(r.dual_gap(&rho, &set), 0.0);
        assert_eq!(r.decomposition.weight_sum(), rat_int(1));
    }

    #[test]
    fn float_path_matches_exact() {
        let rho = bloch(rat(1, 2), rat(1, 3), rat(2, 3));
        let exact = robustness_of_magic(&rho, 1).unwrap();
        let float = robustness_of_magic(&rho.to_f64(), 1).unwrap();
        assert!((exact.value.to_f64() - float.value).abs() < 1e-9);
        assert!(float.certificate.is_valid(1e-8));
    }

    #[test]
    fn outside_hull_is_infeasible_with_separator() {
        let rho = bloch(rat_int(1), rat_int(1), rat_int(0));
        let set = stabilizer_columns::<Rational>(1, 1).unwrap();
        match decompose_nonnegative(&rho, &set).unwrap() {
            Feasibility::Infeasible { separating } => {
                let dot = |v: &[Rational]| v.iter().zip(&separating).map(|(a, b)| a * b).sum::<Rational>();
                assert!(dot(rho.coeffs()) > rat_int(0));
                assert!(set.iter().all(|c| dot(c.coeffs()) <= rat_int(0)));
            }
            Feasibility::Feasible(_) => panic!("expected infeasible"),
        }
    }

    #[test]
    fn member_decomposes_to_itself() {
        let set = stabilizer_columns::<Rational>(1, 1).unwrap();
        let Feasibility::Feasible(d) = decompose_nonnegative(&set[3], &set).unwrap() else {
            panic!("expected feasible");
        };
        assert_eq!(d.reconstruct(&set).unwrap(), set[3]);
        assert!(d.nonnegative);
    }

    #[test]
    fn rejects_bad_inputs() {
        let set = stabilizer_columns::<Rational>(1, 1).unwrap();
        let two = PauliVector::<Rational>::maximally_mixed(2).unwrap();
        assert!(matches!(robustness(&two, &set), Err(Error::DimensionMismatch { .. })));
        let bad = PauliVector::<Rational>::from_terms(1, &[(PauliPoint::IDENTITY, rat_int(2))]).unwrap();
        assert!(robustness(&bad, &set).is_err());
        let big = bloch(rat_int(2), rat_int(0), rat_int(0));
        assert!(!decompose_nonnegative(&big, &set).unwrap().is_feasible());
    }
}
