use std::sync::OnceLock;

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::majorana::{make_theorem2_operator, Theorem2Label};
use super::operator::PhasePointOperator;
use crate::error::{Error, Result};
use crate::linalg::bareiss_rank_i64;
use crate::pauli::{enumerate_stabilizer_projectors, IsotropicSubspace, PauliPoint};
use crate::scalar::{format_rational, Rational};

static STABILIZERS: [OnceLock<Vec<IsotropicSubspace>>; 4] =
    [OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new()];

/// All stabilizer projectors on `n <= cap` qubits (memoised up to 3 qubits).
pub fn stabilizers(n: usize, cap: usize) -> Result<&'static [IsotropicSubspace]> {
    if n > cap || n >= STABILIZERS.len() {
        return Err(Error::CapExceeded {
            what: "stabilizer enumeration qubit",
            value: n,
            cap: cap.min(STABILIZERS.len() - 1),
        });
    }
    Ok(STABILIZERS[n].get_or_init(|| enumerate_stabilizer_projectors(n, n).expect("within cap")))
}

/// `Tr(Pi_I^r A) = |I|^{-1} sum_{a in I ∩ O} (-1)^{r(a)} c_a`.
pub fn stabilizer_inner_product(a: &PhasePointOperator, space: &IsotropicSubspace) -> Result<Rational> {
    if a.n() != space.n() {
        return Err(Error::QubitMismatch(a.n(), space.n()));
    }
    let mut acc = Rational::zero();
    for (p, r) in space.elements() {
        let c = a.coefficient(p);
        if r {
            acc -= c;
        } else {
            acc += c;
        }
    }
    Ok(acc / Rational::from_integer((1i64 << space.dim()).into()))
}

#[derive(Clone, Debug, PartialEq)]
pub struct LambdaVerdict {
    pub member: bool,
    pub min: Rational,
    pub argmin: IsotropicSubspace,
}

/// Membership in `Lambda`: every stabilizer overlap is nonnegative.
pub fn lambda_membership(a: &PhasePointOperator, cap: usize) -> Result<LambdaVerdict> {
    let stabs = stabilizers(a.n(), cap)?;
    let mut best: Option<(Rational, &IsotropicSubspace)> = None;
    for s in stabs {
        let v = stabilizer_inner_product(a, s)?;
        if best.as_ref().is_none_or(|(m, _)| v < *m) {
            best = Some((v, s));
        }
    }
    let (min, argmin) = best.expect("at least one stabilizer");
    Ok(LambdaVerdict {
        member: !min.is_negative(),
        min,
        argmin: argmin.clone(),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct VertexReport {
    pub min: Rational,
    /// Stabilizers with zero overlap.
    pub orthogonal: Vec<IsotropicSubspace>,
    /// Rank of their Pauli coefficient vectors, identity coordinate dropped.
    pub rank: usize,
    pub is_vertex: bool,
}

/// Vertex test for a member of `Lambda`: the orthogonal stabilizers must have
/// coefficient vectors of full rank `4^n - 1`.
pub fn vertex_check(a: &PhasePointOperator, cap: usize) -> Result<VertexReport> {
    let verdict = lambda_membership(a, cap)?;
    if !verdict.member {
        return Err(Error::NotInLambda(format_rational(&verdict.min)));
    }
    let n = a.n();
    let stabs = stabilizers(n, cap)?;
    let mut orthogonal = Vec::new();
    let mut rows = Vec::new();
    for s in stabs {
        if stabilizer_inner_product(a, s)?.is_zero() {
            let mut row = vec![0i64; (1 << (2 * n)) - 1];
            for (p, r) in s.elements() {
                if !p.is_identity() {
                    row[p.index(n) - 1] = if r { -1 } else { 1 };
                }
            }
            rows.push(row);
            orthogonal.push(s.clone());
        }
    }
    let rank = bareiss_rank_i64(&rows);
    Ok(VertexReport {
        min: verdict.min,
        orthogonal,
        rank,
        is_vertex: rank == (1 << (2 * n)) - 1,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignStrategy {
    /// Every `eta` in increasing binary order.
    Exhaustive,
    /// Uniform random `eta` from a seeded generator.
    Random { budget: usize, seed: u64 },
}

/// Result of testing one sign choice.
#[derive(Clone, Debug, PartialEq)]
pub struct SignTrial {
    pub eta: Vec<bool>,
    pub report: VertexReport,
}

pub(crate) fn eta_from_bits(bits: u64, len: usize) -> Vec<bool> {
    (0..len).map(|i| bits >> i & 1 == 1).collect()
}

fn try_eta(n: usize, eta: Vec<bool>, cap: usize) -> Result<Option<SignTrial>> {
    let op = make_theorem2_operator(&Theorem2Label::jordan_wigner(n, eta.clone()))?;
    match vertex_check(&op, cap) {
        Ok(report) => Ok(Some(SignTrial { eta, report })),
        Err(Error::NotInLambda(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// First `eta` (under the strategy) whose Majorana operator passes the
/// vertex check.
pub fn find_vertex_signs(n: usize, strategy: SignStrategy, cap: usize) -> Result<SignTrial> {
    let len = Theorem2Label::support_size(n);
    match strategy {
        SignStrategy::Exhaustive => {
            if len >= 64 {
                return Err(Error::CapExceeded {
                    what: "exhaustive sign bits",
                    value: len,
                    cap: 63,
                });
            }
            let total = 1u64 << len;
            for bits in 0..total {
                if let Some(t) = try_eta(n, eta_from_bits(bits, len), cap)? {
                    if t.report.is_vertex {
                        return Ok(t);
                    }
                }
            }
            Err(Error::BudgetExhausted(total as usize))
        }
        SignStrategy::Random { budget, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..budget {
                let eta: Vec<bool> = (0..len).map(|_| rng.random()).collect();
                if let Some(t) = try_eta(n, eta, cap)? {
                    if t.report.is_vertex {
                        return Ok(t);
                    }
                }
            }
            Err(Error::BudgetExhausted(budget))
        }
    }
}

/// Vertex reports for every `eta` (exhaustive; `n(2n+1) < 24`), in `eta`
/// order. Sign choices outside `Lambda` report `None`.
pub fn scan_vertex_signs(n: usize, cap: usize) -> Result<Vec<(Vec<bool>, Option<VertexReport>)>> {
    let len = Theorem2Label::support_size(n);
    if len >= 24 {
        return Err(Error::CapExceeded {
            what: "exhaustive sign bits",
            value: len,
            cap: 23,
        });
    }
    stabilizers(n, cap)?;
    (0..1u64 << len)
        .into_par_iter()
        .map(|bits| {
            let eta = eta_from_bits(bits, len);
            let t = try_eta(n, eta.clone(), cap)?;
            Ok((eta, t.map(|t| t.report)))
        })
        .collect()
}

/// Points of `I ∩ O*` for a Majorana support.
pub fn intersection_size(space: &IsotropicSubspace, support: &[PauliPoint]) -> usize {
    support.iter().filter(|p| space.contains(**p)).count()
}
