use std::collections::HashMap;

use num_traits::One;

use super::operator::{ConstructiveForm, PhasePointOperator};
use crate::error::{Error, Result};
use crate::pauli::{beta, symplectic, CliffordTableau, IsotropicSubspace, PauliPoint, PhasedPauli};
use crate::scalar::Rational;

/// Jordan-Wigner Majorana operators `C_1, ..., C_N` on `N/2` qubits:
/// `C_{2j-1} = Z..Z X_j`, `C_{2j} = Z..Z Y_j`, and for odd `N` the last one
/// is `Z` on every qubit.
pub fn jordan_wigner_majoranas(count: usize) -> Vec<PhasedPauli> {
    let q = count / 2;
    let mut out = Vec::with_capacity(count);
    for j in 0..q {
        let string = (1u64 << j) - 1;
        out.push(PhasedPauli::from_point(q, PauliPoint::new(string, 1 << j)));
        out.push(PhasedPauli::from_point(q, PauliPoint::new(string | 1 << j, 1 << j)));
    }
    if count % 2 == 1 {
        let all = if q == 64 { u64::MAX } else { (1u64 << q) - 1 };
        out.push(PhasedPauli::from_point(q, PauliPoint::new(all, 0)));
    }
    out
}

/// Hermitian products `±i C_r C_s` for every pair `r < s`, in lexicographic
/// pair order, normalised to phase 0 or 2.
pub fn edge_products(majoranas: &[PhasedPauli]) -> Result<Vec<PhasedPauli>> {
    let mut out = Vec::new();
    for (i, a) in majoranas.iter().enumerate() {
        if !a.is_hermitian() {
            return Err(Error::NotHermitian(a.to_string()));
        }
        for b in &majoranas[i + 1..] {
            if a.commutes_with(b) {
                return Err(Error::InvalidLabel(format!("{a} and {b} commute")));
            }
            let p = a.mul(b)?.times_i(1);
            debug_assert!(p.is_hermitian());
            out.push(p);
        }
    }
    Ok(out)
}

/// Unordered index pairs in the order used by [`edge_products`].
pub fn pair_order(count: usize) -> Vec<(usize, usize)> {
    (0..count)
        .flat_map(|i| (i + 1..count).map(move |j| (i, j)))
        .collect()
}

/// Label of a Majorana operator: `2n+1` pairwise anticommuting Majoranas and
/// a sign bit `eta(b)` for each pairwise product `b` (relative to `T_b`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Theorem2Label {
    pub n: usize,
    pub majoranas: Vec<PhasedPauli>,
    pub eta: Vec<bool>,
}

impl Theorem2Label {
    /// Jordan-Wigner Majoranas on `n` qubits.
    pub fn jordan_wigner(n: usize, eta: Vec<bool>) -> Self {
        Theorem2Label {
            n,
            majoranas: jordan_wigner_majoranas(2 * n + 1),
            eta,
        }
    }

    /// Points of the support `O*`, aligned with `eta`.
    pub fn support(&self) -> Result<Vec<PauliPoint>> {
        Ok(edge_products(&self.majoranas)?.iter().map(|p| p.point).collect())
    }

    pub fn support_size(n: usize) -> usize {
        n * (2 * n + 1)
    }
}

/// `(1/2^n)(1 + (1/n) sum_{b in O*} (-1)^{eta(b)} T_b)`.
pub fn make_theorem2_operator(label: &Theorem2Label) -> Result<PhasePointOperator> {
    let n = label.n;
    if n == 0 {
        return Err(Error::OutOfRange("majorana operators need n >= 1".into()));
    }
    if label.majoranas.len() != 2 * n + 1 {
        return Err(Error::DimensionMismatch {
            expected: 2 * n + 1,
            got: label.majoranas.len(),
        });
    }
    if let Some(p) = label.majoranas.iter().find(|p| p.n != n) {
        return Err(Error::QubitMismatch(p.n, n));
    }
    let support = label.support()?;
    if label.eta.len() != support.len() {
        return Err(Error::DimensionMismatch {
            expected: support.len(),
            got: label.eta.len(),
        });
    }
    // explicit isomorphism with L(K_{2n+1}): products anticommute exactly
    // when their index pairs share one Majorana
    let pairs = pair_order(2 * n + 1);
    for (i, &(a, b)) in pairs.iter().enumerate() {
        for (j, &(c, d)) in pairs.iter().enumerate().skip(i + 1) {
            let share = a == c || a == d || b == c || b == d;
            if symplectic(support[i], support[j]) != share {
                return Err(Error::InvalidLabel("support frustration graph is not L(K_{2n+1})".into()));
            }
        }
    }
    let w = Rational::one() / Rational::from_integer((n as i64).into());
    let core: Vec<(PauliPoint, Rational)> = support
        .iter()
        .zip(&label.eta)
        .map(|(&b, &e)| (b, if e { -w.clone() } else { w.clone() }))
        .chain(std::iter::once((PauliPoint::IDENTITY, Rational::one())))
        .collect();
    PhasePointOperator::from_constructive(ConstructiveForm {
        core_qubits: n,
        core,
        tail: IsotropicSubspace::trivial(0),
        clifford: CliffordTableau::identity(n),
    })
}

/// A CNC label: a set `Omega` (the identity may be omitted) and a value
/// assignment `gamma` on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CncLabel {
    pub n: usize,
    pub omega: Vec<(PauliPoint, bool)>,
}

/// Checks closure under inference for commuting pairs.
pub fn is_closed_under_inference(omega: &[PauliPoint]) -> bool {
    let set: std::collections::HashSet<PauliPoint> = omega.iter().copied().collect();
    omega.iter().all(|&a| {
        omega
            .iter()
            .all(|&b| a == b || symplectic(a, b) || set.contains(&(a + b)))
    })
}

/// `c_b = (-1)^{gamma(b)}` on `Omega`, after validating closure and the
/// consistency rule `gamma(a)+gamma(b)+gamma(a+b) = beta(a,b)`.
pub fn make_cnc_operator(label: &CncLabel) -> Result<PhasePointOperator> {
    let mut gamma: HashMap<PauliPoint, bool> = HashMap::new();
    for &(p, g) in &label.omega {
        if gamma.insert(p, g).is_some() {
            return Err(Error::DuplicatePoint(p.to_letters(label.n)));
        }
    }
    if gamma.get(&PauliPoint::IDENTITY) == Some(&true) {
        return Err(Error::InconsistentSigns("gamma(0) must be 0".into()));
    }
    gamma.insert(PauliPoint::IDENTITY, false);
    let points: Vec<PauliPoint> = gamma.keys().copied().collect();
    if !is_closed_under_inference(&points) {
        return Err(Error::InvalidLabel("Omega is not closed under inference".into()));
    }
    for &a in &points {
        for &b in &points {
            if symplectic(a, b) {
                continue;
            }
            let lhs = gamma[&a] ^ gamma[&b] ^ gamma[&(a + b)];
            if lhs != beta(a, b)? {
                return Err(Error::InconsistentSigns(format!(
                    "gamma fails on {} and {}",
                    a.to_letters(label.n),
                    b.to_letters(label.n)
                )));
            }
        }
    }
    let terms = gamma
        .into_iter()
        .map(|(p, g)| (p, if g { -Rational::one() } else { Rational::one() }));
    PhasePointOperator::new(label.n, terms)
}

/// Solution space of the noncontextuality constraints on `Omega` (identity
/// excluded): a particular assignment and a nullspace basis, or `None` when
/// no consistent `gamma` exists.
pub fn noncontextual_assignments(omega: &[PauliPoint]) -> Option<(Vec<bool>, Vec<Vec<bool>>)> {
    let pts: Vec<PauliPoint> = omega.iter().copied().filter(|p| !p.is_identity()).collect();
    let k = pts.len();
    let words = k.div_ceil(64) + 1;
    let index: HashMap<PauliPoint, usize> = pts.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let set_bit = |row: &mut Vec<u64>, i: usize| row[i / 64] ^= 1 << (i % 64);
    let get_bit = |row: &[u64], i: usize| row[i / 64] >> (i % 64) & 1 == 1;
    // equation rows: k variable bits followed by the right-hand side at bit k
    let mut rows: Vec<Vec<u64>> = Vec::new();
    for (i, &a) in pts.iter().enumerate() {
        for &b in &pts[i + 1..] {
            if symplectic(a, b) {
                continue;
            }
            let Some(&c) = index.get(&(a + b)) else { continue };
            let mut row = vec![0u64; words];
            set_bit(&mut row, index[&a]);
            set_bit(&mut row, index[&b]);
            set_bit(&mut row, c);
            if beta(a, b).expect("commuting") {
                set_bit(&mut row, k);
            }
            rows.push(row);
        }
    }
    // Gauss-Jordan over GF(2)
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for col in 0..k {
        let Some(p) = (r..rows.len()).find(|&i| get_bit(&rows[i], col)) else { continue };
        rows.swap(r, p);
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && get_bit(row, col) {
                for (w, pw) in row.iter_mut().zip(&pivot) {
                    *w ^= pw;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    if rows[r..].iter().any(|row| get_bit(row, k)) {
        return None;
    }
    let mut particular = vec![false; k];
    for (i, &col) in pivots.iter().enumerate() {
        particular[col] = get_bit(&rows[i], k);
    }
    let free: Vec<usize> = (0..k).filter(|c| !pivots.contains(c)).collect();
    let nullspace = free
        .iter()
        .map(|&f| {
            let mut v = vec![false; k];
            v[f] = true;
            for (i, &col) in pivots.iter().enumerate() {
                v[col] = get_bit(&rows[i], f);
            }
            v
        })
        .collect();
    Some((particular, nullspace))
}
