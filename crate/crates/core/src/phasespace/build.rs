use std::collections::HashSet;

use num_traits::One;
use rayon::prelude::*;

use super::lambda::{lambda_membership, stabilizers};
use super::majorana::{edge_products, jordan_wigner_majoranas, make_theorem2_operator, Theorem2Label};
use super::operator::PhasePointOperator;
use super::polytope::{enumerate_projected_vertices, projected_operator, DEFAULT_PROJECTED_SUPPORT_CAP};
use crate::error::{Error, Result};
use crate::pauli::{CliffordTableau, Gate, IsotropicSubspace, PauliPoint, DEFAULT_STABILIZER_CAP};
use crate::scalar::Rational;

/// Which families seed the generating set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhaseSpaceConfig {
    pub stabilizers: bool,
    pub cnc: bool,
    pub theorem2: bool,
    pub projected: bool,
    /// Close every seed under conjugation by `H`, `S` and `CX`.
    pub clifford_orbits: bool,
    /// Maximum number of operators.
    pub cap: usize,
    pub stabilizer_cap: usize,
}

impl PhaseSpaceConfig {
    pub fn stabilizer_only() -> Self {
        PhaseSpaceConfig {
            stabilizers: true,
            cnc: false,
            theorem2: false,
            projected: false,
            clifford_orbits: false,
            cap: 1_000_000,
            stabilizer_cap: DEFAULT_STABILIZER_CAP,
        }
    }

    pub fn cnc() -> Self {
        PhaseSpaceConfig {
            cnc: true,
            clifford_orbits: true,
            ..Self::stabilizer_only()
        }
    }

    pub fn line_graph() -> Self {
        PhaseSpaceConfig {
            theorem2: true,
            projected: true,
            ..Self::cnc()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Origin {
    Stabilizer,
    Cnc,
    Majorana,
    Projected,
}

/// A deduplicated generating set.
#[derive(Clone, Debug)]
pub struct PhaseSpace {
    pub n: usize,
    pub operators: Vec<PhasePointOperator>,
    pub origins: Vec<Origin>,
}

impl PhaseSpace {
    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    pub fn count(&self, origin: Origin) -> usize {
        self.origins.iter().filter(|o| **o == origin).count()
    }
}

/// Clifford generators `H_q`, `S_q`, `CX(a,b)` on `n` qubits.
pub fn clifford_generators(n: usize) -> Vec<CliffordTableau> {
    let mut gates = Vec::new();
    for q in 0..n {
        gates.push(Gate::H(q));
        gates.push(Gate::S(q));
        for t in 0..n {
            if t != q {
                gates.push(Gate::CX(q, t));
            }
        }
    }
    gates
        .iter()
        .map(|g| g.tableau(n).expect("qubits in range"))
        .collect()
}

/// `core ⊗ |0...0><0...0|` on `n` qubits.
fn pad(core: &PhasePointOperator, n: usize) -> Result<PhasePointOperator> {
    let k = core.n();
    if k == n {
        return Ok(core.clone());
    }
    core.with_tail(&IsotropicSubspace::computational(n - k, &[]))
}

fn sign_patterns(len: usize) -> impl Iterator<Item = Vec<bool>> {
    (0u64..1 << len).map(move |bits| (0..len).map(|i| bits >> i & 1 == 1).collect())
}

/// CNC cores `2^{-m}(1 + sum_k ±C_k)` over the `2m+1` Jordan-Wigner Majoranas.
pub fn cnc_cores(m: usize) -> Vec<PhasePointOperator> {
    let maj = jordan_wigner_majoranas(2 * m + 1);
    sign_patterns(maj.len())
        .map(|signs| {
            let terms = maj.iter().zip(&signs).map(|(c, &s)| {
                (c.point, if s { -Rational::one() } else { Rational::one() })
            });
            PhasePointOperator::new(m, terms).expect("distinct points")
        })
        .collect()
}

/// Majorana operators on `k` qubits for every sign choice inside `Lambda`.
pub fn theorem2_family(k: usize, stabilizer_cap: usize) -> Result<Vec<PhasePointOperator>> {
    let len = Theorem2Label::support_size(k);
    if len > 20 {
        return Err(Error::CapExceeded {
            what: "majorana sign bits",
            value: len,
            cap: 20,
        });
    }
    sign_patterns(len)
        .par_bridge()
        .map(|eta| -> Result<Option<PhasePointOperator>> {
            let op = make_theorem2_operator(&Theorem2Label::jordan_wigner(k, eta))?;
            Ok(lambda_membership(&op, stabilizer_cap)?.member.then_some(op))
        })
        .filter_map(|r| r.transpose())
        .collect()
}

/// Extreme points of the section of `Lambda` over the Jordan-Wigner
/// `L(K_{2k+1})` support.
pub fn projected_family(k: usize, stabilizer_cap: usize) -> Result<Vec<PhasePointOperator>> {
    let support: Vec<PauliPoint> = edge_products(&jordan_wigner_majoranas(2 * k + 1))?
        .iter()
        .map(|p| p.point)
        .collect();
    enumerate_projected_vertices(k, &support, stabilizer_cap, DEFAULT_PROJECTED_SUPPORT_CAP)?
        .iter()
        .map(|c| projected_operator(k, &support, c))
        .collect()
}

/// Generating set on `n` qubits assembled from the configured families.
pub fn build_phase_space(n: usize, config: &PhaseSpaceConfig) -> Result<PhaseSpace> {
    if n == 0 || n > config.stabilizer_cap.min(2) {
        return Err(Error::CapExceeded {
            what: "phase-space qubit",
            value: n,
            cap: config.stabilizer_cap.min(2),
        });
    }
    let mut seeds: Vec<(PhasePointOperator, Origin)> = Vec::new();
    if config.stabilizers {
        for s in stabilizers(n, config.stabilizer_cap)? {
            seeds.push((PhasePointOperator::from_projector(s), Origin::Stabilizer));
        }
    }
    for k in 1..=n {
        if config.cnc {
            for core in cnc_cores(k) {
                seeds.push((pad(&core, n)?, Origin::Cnc));
            }
        }
        if config.theorem2 {
            for core in theorem2_family(k, config.stabilizer_cap)? {
                seeds.push((pad(&core, n)?, Origin::Majorana));
            }
        }
        if config.projected {
            for core in projected_family(k, config.stabilizer_cap)? {
                seeds.push((pad(&core, n)?, Origin::Projected));
            }
        }
    }
    build_from_seeds(n, seeds, config)
}

/// Deduplicates `seeds` (first origin wins) and, if configured, closes them
/// under Clifford conjugation breadth first.
pub fn build_from_seeds(
    n: usize,
    seeds: Vec<(PhasePointOperator, Origin)>,
    config: &PhaseSpaceConfig,
) -> Result<PhaseSpace> {
    let mut visited: HashSet<Vec<(PauliPoint, Rational)>> = HashSet::new();
    let mut space = PhaseSpace {
        n,
        operators: Vec::new(),
        origins: Vec::new(),
    };
    let push = |op: PhasePointOperator, origin: Origin, space: &mut PhaseSpace, visited: &mut HashSet<_>| -> Result<bool> {
        if !visited.insert(op.key()) {
            return Ok(false);
        }
        if space.operators.len() == config.cap {
            return Err(Error::CapExceeded {
                what: "phase-space operators",
                value: config.cap + 1,
                cap: config.cap,
            });
        }
        space.operators.push(op);
        space.origins.push(origin);
        Ok(true)
    };
    let mut frontier = Vec::new();
    for (op, origin) in seeds {
        if op.n() != n {
            return Err(Error::QubitMismatch(op.n(), n));
        }
        if push(op, origin, &mut space, &mut visited)? {
            frontier.push(space.operators.len() - 1);
        }
    }
    if config.clifford_orbits {
        let gens = clifford_generators(n);
        while !frontier.is_empty() {
            let images: Vec<(PhasePointOperator, Origin)> = frontier
                .par_iter()
                .flat_map_iter(|&i| {
                    let op = &space.operators[i];
                    let origin = space.origins[i];
                    gens.iter()
                        .map(move |g| (op.conjugate(g).expect("same register"), origin))
                })
                .collect();
            frontier.clear();
            for (op, origin) in images {
                if push(op, origin, &mut space, &mut visited)? {
                    frontier.push(space.operators.len() - 1);
                }
            }
        }
    }
    Ok(space)
}
