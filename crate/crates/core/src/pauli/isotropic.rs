use std::collections::HashSet;

use super::point::{beta_unchecked, symplectic, PauliPoint};
use crate::error::{Error, Result};

/// An isotropic subspace `I` with a consistent sign function `r`, i.e. the
/// label of the projector `Pi_I^r = |I|^{-1} sum_{a in I} (-1)^{r(a)} T_a`.
///
/// Only a basis and the basis signs are stored; `r` on the rest of the span
/// follows from `r(a+b) = r(a) + r(b) + beta(a,b)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IsotropicSubspace {
    n: usize,
    basis: Vec<(PauliPoint, bool)>,
}

impl IsotropicSubspace {
    pub fn new(n: usize, basis: Vec<(PauliPoint, bool)>) -> Result<Self> {
        for (i, &(a, _)) in basis.iter().enumerate() {
            if !a.fits(n) {
                return Err(Error::InvalidSubspace(format!("{a} does not fit {n} qubits")));
            }
            for &(b, _) in &basis[..i] {
                if symplectic(a, b) {
                    return Err(Error::InvalidSubspace(format!("{a} and {b} anticommute")));
                }
            }
        }
        if gf2_rank(basis.iter().map(|b| b.0)) != basis.len() {
            return Err(Error::InvalidSubspace("basis is linearly dependent".into()));
        }
        Ok(IsotropicSubspace { n, basis })
    }

    pub fn trivial(n: usize) -> Self {
        IsotropicSubspace { n, basis: vec![] }
    }

    /// The computational-basis state `|s_0 s_1 ...>`: `Z_k` with sign `s_k`.
    pub fn computational(n: usize, bits: &[bool]) -> Self {
        let basis = (0..n)
            .map(|k| (PauliPoint::new(1 << k, 0), bits.get(k).copied().unwrap_or(false)))
            .collect();
        IsotropicSubspace { n, basis }
    }

    /// Build from a full list of signed elements, checking closure and the
    /// consistency rule `r(a)+r(b)+r(a+b) = beta(a,b)` on every pair.
    pub fn from_signed_elements(n: usize, elems: &[(PauliPoint, bool)]) -> Result<Self> {
        let map: std::collections::HashMap<PauliPoint, bool> = elems.iter().copied().collect();
        if map.len() != elems.len() {
            return Err(Error::InvalidSubspace("repeated element".into()));
        }
        match map.get(&PauliPoint::IDENTITY) {
            Some(false) => {}
            Some(true) => return Err(Error::InconsistentSigns("r(0) must be 0".into())),
            None => return Err(Error::InvalidSubspace("missing identity".into())),
        }
        for &(a, ra) in elems {
            for &(b, rb) in elems {
                if symplectic(a, b) {
                    return Err(Error::InvalidSubspace(format!("{a} and {b} anticommute")));
                }
                let Some(&rab) = map.get(&(a + b)) else {
                    return Err(Error::InvalidSubspace(format!("{a}+{b} missing")));
                };
                if ra ^ rb ^ rab != beta_unchecked(a, b) {
                    return Err(Error::InconsistentSigns(format!(
                        "r({a})+r({b})+r({}) != beta",
                        a + b
                    )));
                }
            }
        }
        let mut basis: Vec<(PauliPoint, bool)> = Vec::new();
        let mut span: HashSet<PauliPoint> = HashSet::from([PauliPoint::IDENTITY]);
        let mut sorted: Vec<_> = elems.to_vec();
        sorted.sort();
        for (a, ra) in sorted {
            if !span.contains(&a) {
                let new: Vec<PauliPoint> = span.iter().map(|&s| s + a).collect();
                span.extend(new);
                basis.push((a, ra));
            }
        }
        if span.len() != elems.len() {
            return Err(Error::InvalidSubspace("elements do not form a subspace".into()));
        }
        IsotropicSubspace::new(n, basis)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_maximal(&self) -> bool {
        self.basis.len() == self.n
    }

    pub fn basis(&self) -> &[(PauliPoint, bool)] {
        &self.basis
    }

    /// All `2^k` elements with their signs.
    pub fn elements(&self) -> Vec<(PauliPoint, bool)> {
        let mut out = vec![(PauliPoint::IDENTITY, false)];
        for &(b, rb) in &self.basis {
            let len = out.len();
            for i in 0..len {
                let (a, ra) = out[i];
                out.push((a + b, ra ^ rb ^ beta_unchecked(a, b)));
            }
        }
        out
    }

    /// Sign `r(a)` if `a` lies in the span.
    pub fn sign_of(&self, a: PauliPoint) -> Option<bool> {
        // express a in the basis by elimination over GF(2)
        let coeffs = solve_gf2(&self.basis.iter().map(|b| b.0).collect::<Vec<_>>(), a)?;
        let mut acc = (PauliPoint::IDENTITY, false);
        for (i, &(b, rb)) in self.basis.iter().enumerate() {
            if coeffs >> i & 1 == 1 {
                acc = (acc.0 + b, acc.1 ^ rb ^ beta_unchecked(acc.0, b));
            }
        }
        debug_assert_eq!(acc.0, a);
        Some(acc.1)
    }

    pub fn contains(&self, a: PauliPoint) -> bool {
        solve_gf2(&self.basis.iter().map(|b| b.0).collect::<Vec<_>>(), a).is_some()
    }

    /// Same subspace with every sign flipped on the basis.
    pub fn with_basis_signs(&self, signs: &[bool]) -> Self {
        let basis = self
            .basis
            .iter()
            .zip(signs)
            .map(|(&(b, _), &s)| (b, s))
            .collect();
        IsotropicSubspace { n: self.n, basis }
    }

    /// Sorted element list: a canonical key for the signed subspace.
    pub fn canonical_key(&self) -> Vec<(PauliPoint, bool)> {
        let mut e = self.elements();
        e.sort();
        e
    }

    /// Embed into a larger register, qubit `k` going to `positions[k]`.
    pub fn embed(&self, n_total: usize, positions: &[usize]) -> Self {
        IsotropicSubspace {
            n: n_total,
            basis: self.basis.iter().map(|&(b, r)| (b.embed(positions), r)).collect(),
        }
    }
}

pub(crate) fn gf2_rank(points: impl Iterator<Item = PauliPoint>) -> usize {
    let mut rows: Vec<PauliPoint> = Vec::new();
    for mut p in points {
        for r in &rows {
            let bit = r.lowest_bit().unwrap();
            if p.has_bit(bit) {
                p += *r;
            }
        }
        if !p.is_identity() {
            // keep rows reduced against the new pivot
            let bit = p.lowest_bit().unwrap();
            for r in rows.iter_mut() {
                if r.has_bit(bit) {
                    *r += p;
                }
            }
            rows.push(p);
        }
    }
    rows.len()
}

/// Coefficient bitmask `c` with `sum_{i: c_i=1} basis[i] = target`, if any.
pub(crate) fn solve_gf2(basis: &[PauliPoint], target: PauliPoint) -> Option<u64> {
    // rows carry (reduced point, combination mask)
    let mut rows: Vec<(PauliPoint, u64)> = Vec::new();
    for (i, &b) in basis.iter().enumerate() {
        let mut p = (b, 1u64 << i);
        for r in &rows {
            if p.0.has_bit(r.0.lowest_bit().unwrap()) {
                p = (p.0 + r.0, p.1 ^ r.1);
            }
        }
        if !p.0.is_identity() {
            let bit = p.0.lowest_bit().unwrap();
            for r in rows.iter_mut() {
                if r.0.has_bit(bit) {
                    *r = (r.0 + p.0, r.1 ^ p.1);
                }
            }
            rows.push(p);
        }
    }
    let mut t = (target, 0u64);
    for r in &rows {
        if t.0.has_bit(r.0.lowest_bit().unwrap()) {
            t = (t.0 + r.0, t.1 ^ r.1);
        }
    }
    t.0.is_identity().then_some(t.1)
}

/// Every maximal isotropic subspace of `E` for `n` qubits (signs all zero).
pub fn enumerate_maximal_isotropics(n: usize, cap: usize) -> Result<Vec<IsotropicSubspace>> {
    if n > cap {
        return Err(Error::CapExceeded {
            what: "stabilizer enumeration qubit",
            value: n,
            cap,
        });
    }
    let mut seen: HashSet<Vec<PauliPoint>> = HashSet::new();
    let mut out = Vec::new();
    let mut stack: Vec<PauliPoint> = Vec::new();
    let mut span: Vec<PauliPoint> = vec![PauliPoint::IDENTITY];
    extend_isotropic(n, &mut stack, &mut span, &mut seen, &mut out);
    out.sort_by(|a: &IsotropicSubspace, b| a.canonical_key().cmp(&b.canonical_key()));
    Ok(out)
}

fn extend_isotropic(
    n: usize,
    stack: &mut Vec<PauliPoint>,
    span: &mut Vec<PauliPoint>,
    seen: &mut HashSet<Vec<PauliPoint>>,
    out: &mut Vec<IsotropicSubspace>,
) {
    if stack.len() == n {
        let mut key = span.clone();
        key.sort();
        if seen.insert(key) {
            let basis = stack.iter().map(|&b| (b, false)).collect();
            out.push(IsotropicSubspace { n, basis });
        }
        return;
    }
    // Require each new vector to be the smallest element of its coset
    // v + span; this cuts most duplicate orderings.
    let start = stack.last().map_or(1, |l| l.index(n) + 1);
    for idx in start..1usize << (2 * n) {
        let v = PauliPoint::from_index(idx, n);
        if stack.iter().any(|&s| symplectic(s, v)) {
            continue;
        }
        if span.iter().any(|&s| (s + v).index(n) < idx) {
            continue;
        }
        let len = span.len();
        for i in 0..len {
            let w = span[i] + v;
            span.push(w);
        }
        stack.push(v);
        extend_isotropic(n, stack, span, seen, out);
        stack.pop();
        span.truncate(len);
    }
}

/// All stabilizer-state labels `(I, r)` with `I` maximal; exhaustive and
/// duplicate-free, `2^n prod_{k=1}^n (2^k + 1)` entries.
pub fn enumerate_stabilizer_projectors(n: usize, cap: usize) -> Result<Vec<IsotropicSubspace>> {
    let subspaces = enumerate_maximal_isotropics(n, cap)?;
    let mut out = Vec::with_capacity(subspaces.len() << n);
    for s in subspaces {
        for mask in 0u64..1 << n {
            let signs: Vec<bool> = (0..n).map(|k| mask >> k & 1 == 1).collect();
            out.push(s.with_basis_signs(&signs));
        }
    }
    Ok(out)
}
