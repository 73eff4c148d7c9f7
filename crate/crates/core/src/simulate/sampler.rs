use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::circuit::{Circuit, Element, StateSpec};
use super::state::CanonicalState;
use crate::decompose::{decompose_nonnegative, phase_space_columns, robustness, Feasibility, QuasiDecomposition};
use crate::error::{Error, Result};
use crate::pauli::{CliffordTableau, PauliVector};
use crate::phasespace::{build_phase_space, PhaseSpace, PhaseSpaceConfig};
use crate::scalar::Scalar;

/// Largest number of non-stabilizer input qubits; they are decomposed
/// jointly over one phase space, since products of phase-space points on
/// separate blocks can leave `Lambda`.
pub const MAX_BLOCK_QUBITS: usize = 2;

/// Per-shot generator: ChaCha8 seeded with the master seed, stream = shot index.
pub fn shot_rng(seed: u64, shot: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shot);
    rng
}

/// Candidate operators for one input block with signed weights.
#[derive(Clone, Debug)]
pub struct Block<S> {
    pub qubits: Vec<usize>,
    pub candidates: Vec<CanonicalState<S>>,
    pub weights: Vec<f64>,
    index: WeightedIndex<f64>,
}

impl<S: Scalar> Block<S> {
    pub fn new(qubits: Vec<usize>, entries: Vec<(CanonicalState<S>, f64)>) -> Result<Self> {
        let entries: Vec<_> = entries.into_iter().filter(|(_, w)| w.abs() > 1e-12).collect();
        if entries.is_empty() {
            return Err(Error::OutOfRange("block has no candidates".into()));
        }
        if let Some((s, _)) = entries.iter().find(|(s, _)| s.n() != qubits.len()) {
            return Err(Error::QubitMismatch(s.n(), qubits.len()));
        }
        let (candidates, weights): (Vec<_>, Vec<_>) = entries.into_iter().unzip();
        let index = WeightedIndex::new(weights.iter().map(|w| w.abs()))
            .map_err(|e| Error::OutOfRange(format!("block weights: {e}")))?;
        Ok(Block {
            qubits,
            candidates,
            weights,
            index,
        })
    }

    pub fn one_norm(&self) -> f64 {
        self.weights.iter().map(|w| w.abs()).sum()
    }
}

/// Initial-state sampler: a product of independently sampled blocks.
#[derive(Clone, Debug)]
pub struct Preparation<S> {
    n: usize,
    blocks: Vec<Block<S>>,
}

struct SpaceCache {
    config: PhaseSpaceConfig,
    spaces: HashMap<usize, (PhaseSpace, Vec<PauliVector<f64>>)>,
}

impl SpaceCache {
    fn get(&mut self, k: usize) -> Result<&(PhaseSpace, Vec<PauliVector<f64>>)> {
        if !self.spaces.contains_key(&k) {
            let space = build_phase_space(k, &self.config)?;
            let cols = phase_space_columns(&space)?;
            self.spaces.insert(k, (space, cols));
        }
        Ok(&self.spaces[&k])
    }
}

impl<S: Scalar> Preparation<S> {
    pub fn from_blocks(n: usize, blocks: Vec<Block<S>>) -> Result<Self> {
        let mut seen = vec![false; n];
        for q in blocks.iter().flat_map(|b| b.qubits.iter()) {
            if *q >= n || std::mem::replace(&mut seen[*q], true) {
                return Err(Error::OutOfRange(format!("block qubit {q}")));
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::OutOfRange("blocks must cover every qubit".into()));
        }
        Ok(Preparation { n, blocks })
    }

    /// Decompose each input block of `circuit` with nonnegative weights.
    pub fn nonnegative(circuit: &Circuit, config: &PhaseSpaceConfig) -> Result<Self> {
        Self::build(circuit, config, false)
    }

    /// Decompose each input block with minimum one-norm signed weights.
    pub fn quasi(circuit: &Circuit, config: &PhaseSpaceConfig) -> Result<Self> {
        Self::build(circuit, config, true)
    }

    fn build(circuit: &Circuit, config: &PhaseSpaceConfig, signed: bool) -> Result<Self> {
        let mut cache = SpaceCache {
            config: config.clone(),
            spaces: HashMap::new(),
        };
        let mut blocks = Vec::new();
        let mut magic_qubits = Vec::new();
        let mut magic = PauliVector::<f64>::maximally_mixed(0)?;
        for input in circuit.input_blocks() {
            let parts: Vec<Vec<usize>> = match input.spec {
                StateSpec::Named(_) => input.qubits.iter().map(|q| vec![*q]).collect(),
                StateSpec::Coefficients { .. } => vec![input.qubits.clone()],
            };
            for qubits in parts {
                let k = qubits.len();
                if input.spec.is_stabilizer() {
                    let v = input.spec.to_vector::<f64>(k)?.map(|c| S::from_i64(c.round() as i64));
                    blocks.push(Block::new(qubits, vec![(CanonicalState::from_vector(&v)?, 1.0)])?);
                } else {
                    if magic_qubits.len() + k > MAX_BLOCK_QUBITS {
                        return Err(Error::CapExceeded {
                            what: "non-stabilizer input qubit",
                            value: magic_qubits.len() + k,
                            cap: MAX_BLOCK_QUBITS,
                        });
                    }
                    magic = magic.tensor(&input.spec.to_vector::<f64>(k)?)?;
                    magic_qubits.extend(qubits);
                }
            }
        }
        if !magic_qubits.is_empty() {
            let k = magic_qubits.len();
            let (space, cols) = cache.get(k)?;
            let decomposition: QuasiDecomposition<f64> = if signed {
                robustness(&magic, cols)?.decomposition
            } else {
                match decompose_nonnegative(&magic, cols)? {
                    Feasibility::Feasible(d) => d,
                    Feasibility::Infeasible { .. } => return Err(Error::Infeasible),
                }
            };
            let entries = decomposition
                .weights
                .iter()
                .map(|(id, w)| Ok((CanonicalState::from_operator(&space.operators[*id])?, *w)))
                .collect::<Result<Vec<_>>>()?;
            blocks.push(Block::new(magic_qubits, entries)?);
        }
        Self::from_blocks(circuit.n(), blocks)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Block<S>] {
        &self.blocks
    }

    /// Product of the block one-norms.
    pub fn one_norm(&self) -> f64 {
        self.blocks.iter().map(Block::one_norm).product()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.blocks.iter().all(|b| b.weights.iter().all(|w| *w >= 0.0))
    }

    /// Sample an initial operator and the sign of its weight.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<(CanonicalState<S>, bool)> {
        let mut state = CanonicalState::new(self.n, [], [(crate::pauli::PauliPoint::IDENTITY, S::one())])?;
        let mut negative = false;
        for block in &self.blocks {
            let i = block.index.sample(rng);
            negative ^= block.weights[i] < 0.0;
            state = block.candidates[i].embed_into(&state, &block.qubits)?;
        }
        Ok((state, negative))
    }
}

/// Outcome bits of one pass, with the sign of the sampled weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transcript {
    pub outcomes: Vec<bool>,
    pub negative: bool,
}

struct Compiled<'a> {
    circuit: &'a Circuit,
    tableaux: Vec<Option<CliffordTableau>>,
    conditions: Vec<Option<usize>>,
}

impl<'a> Compiled<'a> {
    fn new(circuit: &'a Circuit) -> Result<Self> {
        let mut tableaux = Vec::new();
        let mut conditions = Vec::new();
        for e in circuit.elements() {
            match e {
                Element::Gate { gate, condition } => {
                    tableaux.push(Some(gate.tableau(circuit.n())?));
                    conditions.push(condition.as_deref().map(|l| circuit.label_index(l)));
                }
                Element::Measure { .. } => {
                    tableaux.push(None);
                    conditions.push(None);
                }
            }
        }
        Ok(Compiled {
            circuit,
            tableaux,
            conditions,
        })
    }

    fn run<S: Scalar, R: Rng + ?Sized>(&self, mut state: CanonicalState<S>, rng: &mut R) -> Result<Vec<bool>> {
        let mut outcomes = Vec::new();
        for (i, e) in self.circuit.elements().iter().enumerate() {
            match e {
                Element::Gate { .. } => {
                    if self.conditions[i].is_none_or(|l| outcomes[l]) {
                        state = state.clifford_update(self.tableaux[i].as_ref().expect("gate tableau"))?;
                    }
                }
                Element::Measure { pauli, .. } => {
                    let (s, post) = state.measure_update(pauli, rng)?;
                    outcomes.push(s);
                    state = post;
                }
            }
        }
        Ok(outcomes)
    }
}

/// Run `circuit` from a given initial operator.
pub fn run_from<S: Scalar, R: Rng + ?Sized>(
    initial: CanonicalState<S>,
    circuit: &Circuit,
    rng: &mut R,
) -> Result<Vec<bool>> {
    if initial.n() != circuit.n() {
        return Err(Error::QubitMismatch(initial.n(), circuit.n()));
    }
    Compiled::new(circuit)?.run(initial, rng)
}

/// One pass of the sampler for shot `shot` of master seed `seed`.
pub fn simulate_run<S: Scalar>(prep: &Preparation<S>, circuit: &Circuit, seed: u64, shot: u64) -> Result<Transcript> {
    let compiled = Compiled::new(circuit)?;
    one_shot(prep, &compiled, seed, shot)
}

fn one_shot<S: Scalar>(prep: &Preparation<S>, compiled: &Compiled, seed: u64, shot: u64) -> Result<Transcript> {
    if prep.n != compiled.circuit.n() {
        return Err(Error::QubitMismatch(prep.n, compiled.circuit.n()));
    }
    let mut rng = shot_rng(seed, shot);
    let (state, negative) = prep.sample(&mut rng)?;
    let outcomes = compiled.run(state, &mut rng)?;
    Ok(Transcript { outcomes, negative })
}

/// Transcripts of `shots` passes, in shot order.
pub fn transcripts<S: Scalar>(
    prep: &Preparation<S>,
    circuit: &Circuit,
    shots: u64,
    seed: u64,
) -> Result<Vec<Transcript>> {
    let compiled = Compiled::new(circuit)?;
    (0..shots)
        .into_par_iter()
        .map(|shot| one_shot(prep, &compiled, seed, shot))
        .collect()
}

/// Aggregated outcome counts.
#[derive(Clone, Debug, PartialEq)]
pub struct Estimate {
    pub seed: u64,
    pub shots: u64,
    pub labels: Vec<String>,
    pub counts: BTreeMap<Vec<bool>, u64>,
}

impl Estimate {
    pub fn frequency(&self, outcome: &[bool]) -> f64 {
        self.counts.get(outcome).copied().unwrap_or(0) as f64 / self.shots as f64
    }

    /// Binomial standard error of `frequency(outcome)`.
    pub fn standard_error(&self, outcome: &[bool]) -> f64 {
        let p = self.frequency(outcome);
        (p * (1.0 - p) / self.shots as f64).sqrt()
    }

    pub fn total_variation<S: Scalar>(&self, exact: &BTreeMap<Vec<bool>, S>) -> f64 {
        let mut keys: Vec<&Vec<bool>> = self.counts.keys().chain(exact.keys()).collect();
        keys.sort();
        keys.dedup();
        keys.into_iter()
            .map(|k| (self.frequency(k) - exact.get(k).map_or(0.0, |p| p.to_f64())).abs())
            .sum::<f64>()
            / 2.0
    }

    /// Header with the seed, then `outcome  count  frequency  stderr` rows.
    pub fn to_tsv(&self) -> String {
        let mut out = format!("# seed\t{}\n# shots\t{}\n", self.seed, self.shots);
        let _ = writeln!(out, "{}\tcount\tfrequency\tstderr", self.labels.join(","));
        for (k, c) in &self.counts {
            let _ = writeln!(
                out,
                "{}\t{c}\t{:.6}\t{:.6}",
                bits(k),
                self.frequency(k),
                self.standard_error(k)
            );
        }
        out
    }
}

pub(crate) fn bits(outcome: &[bool]) -> String {
    outcome.iter().map(|b| if *b { '1' } else { '0' }).collect()
}

/// Empirical joint distribution over `shots` independent passes.
pub fn estimate_distribution<S: Scalar>(
    prep: &Preparation<S>,
    circuit: &Circuit,
    shots: u64,
    seed: u64,
) -> Result<Estimate> {
    if !prep.is_nonnegative() {
        return Err(Error::Infeasible);
    }
    let compiled = Compiled::new(circuit)?;
    let counts = (0..shots)
        .into_par_iter()
        .map(|shot| one_shot(prep, &compiled, seed, shot))
        .try_fold(BTreeMap::new, |mut acc: BTreeMap<Vec<bool>, u64>, t| {
            *acc.entry(t?.outcomes).or_default() += 1;
            Ok::<_, Error>(acc)
        })
        .try_reduce(BTreeMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_default() += v;
            }
            Ok(a)
        })?;
    Ok(Estimate {
        seed,
        shots,
        labels: circuit.labels().iter().map(|l| l.to_string()).collect(),
        counts,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuasiEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub one_norm: f64,
    pub shots: u64,
}

/// Signed importance-sampling estimate of the probability that the outcome
/// bits match `target` (`None` entries are ignored).
pub fn quasi_estimate<S: Scalar>(
    prep: &Preparation<S>,
    circuit: &Circuit,
    target: &[Option<bool>],
    shots: u64,
    seed: u64,
) -> Result<QuasiEstimate> {
    let labels = circuit.labels().len();
    if target.len() != labels {
        return Err(Error::DimensionMismatch {
            expected: labels,
            got: target.len(),
        });
    }
    if shots < 2 {
        return Err(Error::OutOfRange("quasi estimate needs at least two shots".into()));
    }
    let norm = prep.one_norm();
    let compiled = Compiled::new(circuit)?;
    let (sum, sum_sq) = (0..shots)
        .into_par_iter()
        .map(|shot| {
            let t = one_shot(prep, &compiled, seed, shot)?;
            let hit = t.outcomes.iter().zip(target).all(|(o, w)| w.is_none_or(|w| w == *o));
            let x = if !hit {
                0.0
            } else if t.negative {
                -norm
            } else {
                norm
            };
            Ok((x, x * x))
        })
        .try_reduce(|| (0.0, 0.0), |a, b| Ok((a.0 + b.0, a.1 + b.1)))?;
    let n = shots as f64;
    let mean = sum / n;
    let var = ((sum_sq - n * mean * mean) / (n - 1.0)).max(0.0);
    Ok(QuasiEstimate {
        estimate: mean,
        std_error: (var / n).sqrt(),
        one_norm: norm,
        shots,
    })
}
