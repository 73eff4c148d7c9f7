use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::graphs::{frustration_graph, is_line_graph_up_to_twins, Graph};
use crate::pauli::{beta_unchecked, symplectic, CliffordTableau, Gate, PauliPoint, PauliVector, PhasedPauli};
use crate::phasespace::PhasePointOperator;
use crate::scalar::Scalar;

/// A phase-space point in canonical form
/// `A = Pi_record (sum_j c_j T_j) / 2^{n-k}`.
///
/// The record holds `k` commuting Paulis with eigenvalue bits, kept in
/// reduced row-echelon form (each row's pivot is its lowest bit and no other
/// row contains it). Core points commute with the record, are reduced modulo
/// its span, and the identity coefficient is 1.
#[derive(Clone, Debug, PartialEq)]
pub struct CanonicalState<S> {
    n: usize,
    record: Vec<(PauliPoint, bool)>,
    core: BTreeMap<PauliPoint, S>,
}

fn pivot(p: PauliPoint) -> u32 {
    p.lowest_bit().expect("record rows are nonzero")
}

/// `(rep, sign)` with `Pi T_p = (-1)^sign Pi T_rep`; `p` must commute with
/// every row.
fn reduce(rows: &[(PauliPoint, bool)], p: PauliPoint) -> (PauliPoint, bool) {
    let mut cur = p;
    let mut sign = false;
    for &(row, s) in rows {
        if cur.has_bit(pivot(row)) {
            let next = cur + row;
            sign ^= beta_unchecked(next, row) ^ s;
            cur = next;
        }
    }
    (cur, sign)
}

/// Adjoin `T_p` with eigenvalue `(-1)^bit`; `Ok(false)` if already implied.
fn insert_row(rows: &mut Vec<(PauliPoint, bool)>, n: usize, p: PauliPoint, bit: bool) -> Result<bool> {
    if let Some(&(r, _)) = rows.iter().find(|(r, _)| symplectic(*r, p)) {
        return Err(Error::Anticommuting(p.to_letters(n), r.to_letters(n)));
    }
    let (rep, sign) = reduce(rows, p);
    if rep.is_identity() {
        if sign != bit {
            return Err(Error::InconsistentSigns(format!(
                "{} already fixed with opposite eigenvalue",
                p.to_letters(n)
            )));
        }
        return Ok(false);
    }
    let bit = bit ^ sign;
    let piv = pivot(rep);
    for (row, s) in rows.iter_mut() {
        if row.has_bit(piv) {
            *s ^= bit ^ beta_unchecked(*row, rep);
            *row = *row + rep;
        }
    }
    rows.push((rep, bit));
    rows.sort_by_key(|(r, _)| pivot(*r));
    Ok(true)
}

impl<S: Scalar> CanonicalState<S> {
    /// Canonical form of `Pi_rows C / 2^{n-k}` with `C = sum c_j T_j`.
    pub fn new(
        n: usize,
        rows: impl IntoIterator<Item = (PauliPoint, bool)>,
        core: impl IntoIterator<Item = (PauliPoint, S)>,
    ) -> Result<Self> {
        let mut record = Vec::new();
        for (p, bit) in rows {
            if !p.fits(n) {
                return Err(Error::OutOfRange(format!("{p} on {n} qubits")));
            }
            insert_row(&mut record, n, p, bit)?;
        }
        let mut merged: BTreeMap<PauliPoint, S> = BTreeMap::new();
        for (j, c) in core {
            if !j.fits(n) {
                return Err(Error::OutOfRange(format!("{j} on {n} qubits")));
            }
            if let Some(&(r, _)) = record.iter().find(|(r, _)| symplectic(*r, j)) {
                return Err(Error::Anticommuting(j.to_letters(n), r.to_letters(n)));
            }
            let (rep, sign) = reduce(&record, j);
            let c = if sign { -c } else { c };
            let slot = merged.entry(rep).or_insert_with(S::zero);
            *slot = slot.clone() + c;
        }
        let one = merged.get(&PauliPoint::IDENTITY).cloned().unwrap_or_else(S::zero);
        if !(one - S::one()).is_negligible() {
            return Err(Error::OutOfRange("canonical state must have unit trace".into()));
        }
        merged.retain(|p, c| p.is_identity() || !c.is_negligible());
        merged.insert(PauliPoint::IDENTITY, S::one());
        Ok(CanonicalState {
            n,
            record,
            core: merged,
        })
    }

    /// Split a coefficient map into its stabilizer group and one core point
    /// per coset.
    pub fn from_terms(n: usize, terms: &BTreeMap<PauliPoint, S>) -> Result<Self> {
        let one = terms.get(&PauliPoint::IDENTITY).cloned().unwrap_or_else(S::zero);
        if !(one - S::one()).is_negligible() {
            return Err(Error::OutOfRange("operator must have unit trace".into()));
        }
        let support: Vec<(PauliPoint, S)> = terms
            .iter()
            .filter(|(_, c)| !c.is_negligible())
            .map(|(p, c)| (*p, c.clone()))
            .collect();
        let lookup = |p: PauliPoint| terms.get(&p).cloned().unwrap_or_else(S::zero);
        let mut rows = Vec::new();
        for (s, cs) in &support {
            if s.is_identity() || !(cs.abs_val() - S::one()).is_negligible() {
                continue;
            }
            if support.iter().any(|(b, _)| symplectic(*s, *b)) {
                continue;
            }
            let bit = *cs < S::zero();
            let stabilizes = support.iter().all(|(b, cb)| {
                let expected = if bit ^ beta_unchecked(*s, *b) { -cb.clone() } else { cb.clone() };
                (lookup(*s + *b) - expected).is_negligible()
            });
            if stabilizes {
                insert_row(&mut rows, n, *s, bit)?;
            }
        }
        let core: Vec<(PauliPoint, S)> = support
            .into_iter()
            .filter(|(p, _)| reduce(&rows, *p).0 == *p)
            .collect();
        Self::new(n, rows, core)
    }

    pub fn from_vector(v: &PauliVector<S>) -> Result<Self> {
        Self::from_terms(v.n(), &v.terms().into_iter().collect())
    }

    pub fn from_operator(op: &PhasePointOperator) -> Result<Self> {
        let terms = op.terms().map(|(p, c)| (*p, S::from_rational(c))).collect();
        Self::from_terms(op.n(), &terms)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Record rows `(point, eigenvalue bit)` in echelon order.
    pub fn record(&self) -> &[(PauliPoint, bool)] {
        &self.record
    }

    pub fn core(&self) -> &BTreeMap<PauliPoint, S> {
        &self.core
    }

    /// `Tr(T_a A)`.
    pub fn coefficient(&self, a: PauliPoint) -> S {
        if self.record.iter().any(|(r, _)| symplectic(*r, a)) {
            return S::zero();
        }
        let (rep, sign) = reduce(&self.record, a);
        match self.core.get(&rep) {
            Some(c) if sign => -c.clone(),
            Some(c) => c.clone(),
            None => S::zero(),
        }
    }

    /// Full coefficient vector `Tr(T_b A)`.
    pub fn reconstruct(&self) -> Result<PauliVector<S>> {
        let mut out = PauliVector::zeros(self.n)?;
        let mut group = vec![(PauliPoint::IDENTITY, false)];
        for &(r, s) in &self.record {
            let extra: Vec<(PauliPoint, bool)> = group
                .iter()
                .map(|&(g, gs)| (g + r, gs ^ s ^ beta_unchecked(g, r)))
                .collect();
            group.extend(extra);
        }
        for (&j, c) in &self.core {
            for &(g, gs) in &group {
                let v = if gs ^ beta_unchecked(g, j) { -c.clone() } else { c.clone() };
                out.set(g + j, v);
            }
        }
        Ok(out)
    }

    /// Frustration graph of the core support without the identity.
    pub fn frustration_graph(&self) -> Graph {
        let points: Vec<PauliPoint> = self.core.keys().copied().filter(|p| !p.is_identity()).collect();
        frustration_graph(self.n, &points).expect("core points are distinct and nonidentity")
    }

    pub fn core_is_line_graph(&self) -> bool {
        is_line_graph_up_to_twins(&self.frustration_graph())
    }

    pub fn clifford_update(&self, g: &CliffordTableau) -> Result<Self> {
        if g.n() != self.n {
            return Err(Error::QubitMismatch(g.n(), self.n));
        }
        let rows: Vec<(PauliPoint, bool)> = self
            .record
            .iter()
            .map(|&(p, s)| {
                let (img, neg) = g.map_point(p);
                (img, s ^ neg)
            })
            .collect();
        let core: Vec<(PauliPoint, S)> = self
            .core
            .iter()
            .map(|(&p, c)| {
                let (img, neg) = g.map_point(p);
                (img, if neg { -c.clone() } else { c.clone() })
            })
            .collect();
        Self::new(self.n, rows, core)
    }

    pub fn apply_gate(&self, gate: &Gate) -> Result<Self> {
        self.clifford_update(&gate.tableau(self.n)?)
    }

    fn check_measurement(&self, a: &PhasedPauli) -> Result<()> {
        if a.n != self.n {
            return Err(Error::QubitMismatch(a.n, self.n));
        }
        if !a.is_hermitian() {
            return Err(Error::NotHermitian(a.to_string()));
        }
        if a.point.is_identity() {
            return Err(Error::InvalidLabel("cannot measure the identity".into()));
        }
        Ok(())
    }

    /// `Tr(Pi_a^s A) = (1 + (-1)^s c_a) / 2`.
    pub fn outcome_probability(&self, a: &PhasedPauli, outcome: bool) -> Result<S> {
        self.check_measurement(a)?;
        let c = self.coefficient(a.point);
        let c = if outcome ^ a.is_negative() { -c } else { c };
        Ok((S::one() + c) * S::half())
    }

    /// Post-measurement state for a given outcome, with its probability.
    pub fn measure_forced(&self, a: &PhasedPauli, outcome: bool) -> Result<(S, Self)> {
        let prob = self.outcome_probability(a, outcome)?;
        if prob.is_negligible() {
            return Err(Error::ZeroProbability {
                pauli: a.to_string(),
                outcome: outcome as u8,
            });
        }
        if prob < S::zero() {
            return Err(Error::OutOfRange(format!("negative outcome probability {prob}")));
        }
        let t = outcome ^ a.is_negative();
        let pt = a.point;
        if let Some(r) = self.record.iter().position(|(p, _)| symplectic(*p, pt)) {
            // swap the anticommuting row for the measured Pauli
            let (pr, sr) = self.record[r];
            let mut rows: Vec<(PauliPoint, bool)> = self
                .record
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != r)
                .map(|(_, &(p, s))| {
                    if symplectic(p, pt) {
                        (p + pr, s ^ sr ^ beta_unchecked(p, pr))
                    } else {
                        (p, s)
                    }
                })
                .collect();
            rows.push((pt, t));
            let core: Vec<(PauliPoint, S)> = self
                .core
                .iter()
                .map(|(&j, c)| {
                    if symplectic(j, pt) {
                        let neg = sr ^ beta_unchecked(j, pr);
                        (j + pr, if neg { -c.clone() } else { c.clone() })
                    } else {
                        (j, c.clone())
                    }
                })
                .collect();
            return Ok((prob, Self::new(self.n, rows, core)?));
        }
        let (rep, sign) = reduce(&self.record, pt);
        if rep.is_identity() {
            return Ok((prob, self.clone()));
        }
        let t_rep = t ^ sign;
        let b = self.core.keys().copied().find(|j| symplectic(*j, rep));
        let scale = S::one() / (prob.clone() + prob.clone());
        let mut core = Vec::new();
        for (&j, c) in &self.core {
            if symplectic(j, rep) {
                continue;
            }
            let c = c.clone() * scale.clone();
            match b {
                Some(b) if symplectic(j, b) => {
                    let neg = t_rep ^ beta_unchecked(rep, j);
                    core.push((rep + j, if neg { -c } else { c }));
                }
                _ => core.push((j, c)),
            }
        }
        let rows = self.record.iter().copied().chain([(rep, t_rep)]);
        Ok((prob, Self::new(self.n, rows, core)?))
    }

    /// Sample an outcome and return it with the post-measurement state.
    pub fn measure_update<R: Rng + ?Sized>(&self, a: &PhasedPauli, rng: &mut R) -> Result<(bool, Self)> {
        let p0 = self.outcome_probability(a, false)?.to_f64();
        let outcome = rng.random::<f64>() >= p0;
        let (_, post) = self.measure_forced(a, outcome)?;
        Ok((outcome, post))
    }

    /// `self ⊗ other`, `other` on the higher qubits.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        self.combine(other, self.n + other.n, |p| p, |p| PauliPoint::new(p.z << self.n, p.x << self.n))
    }

    /// Place this state's qubits at `positions` of an `n_total`-qubit register
    /// and multiply with `other`, which must act on the remaining qubits.
    pub fn embed_into(&self, other: &Self, positions: &[usize]) -> Result<Self> {
        if positions.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: positions.len(),
            });
        }
        self.combine(other, other.n, |p| p.embed(positions), |p| p)
    }

    fn combine(
        &self,
        other: &Self,
        n: usize,
        mine: impl Fn(PauliPoint) -> PauliPoint,
        theirs: impl Fn(PauliPoint) -> PauliPoint,
    ) -> Result<Self> {
        let rows = self
            .record
            .iter()
            .map(|&(p, s)| (mine(p), s))
            .chain(other.record.iter().map(|&(p, s)| (theirs(p), s)))
            .collect::<Vec<_>>();
        let mut core = Vec::with_capacity(self.core.len() * other.core.len());
        for (&a, ca) in &self.core {
            for (&b, cb) in &other.core {
                let (ea, eb) = (mine(a), theirs(b));
                if (ea.z | ea.x) & (eb.z | eb.x) != 0 {
                    return Err(Error::OutOfRange("tensor factors overlap".into()));
                }
                core.push((ea + eb, ca.clone() * cb.clone()));
            }
        }
        Self::new(n, rows, core)
    }

    /// `|0...0>` on `n` qubits.
    pub fn zero_state(n: usize) -> Result<Self> {
        Self::new(
            n,
            (0..n).map(|q| (PauliPoint::new(1 << q, 0), false)),
            [(PauliPoint::IDENTITY, S::one())],
        )
    }
}

impl<S: Scalar> fmt::Display for CanonicalState<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n={}", self.n)?;
        for (p, s) in &self.record {
            writeln!(f, "record\t{}{}", if *s { "-" } else { "+" }, p.to_letters(self.n))?;
        }
        for (p, c) in &self.core {
            writeln!(f, "core\t{c}\t{}", p.to_letters(self.n))?;
        }
        Ok(())
    }
}
