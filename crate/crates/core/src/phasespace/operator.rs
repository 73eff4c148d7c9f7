use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{parse_err, Error, Result};
use crate::pauli::{CliffordTableau, IsotropicSubspace, PauliPoint, PauliVector, MAX_QUBITS};
use crate::scalar::{format_rational, parse_rational, Rational};

/// `g (A_core ⊗ Pi_tail) g^dag`: a core operator on the first `core_qubits`
/// qubits, a stabilizer tail on the rest, and a Clifford frame.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstructiveForm {
    pub core_qubits: usize,
    pub core: Vec<(PauliPoint, Rational)>,
    pub tail: IsotropicSubspace,
    pub clifford: CliffordTableau,
}

impl ConstructiveForm {
    pub fn expand(&self) -> Result<BTreeMap<PauliPoint, Rational>> {
        let m = self.core_qubits;
        let n = self.clifford.n();
        if self.tail.n() + m != n {
            return Err(Error::QubitMismatch(self.tail.n() + m, n));
        }
        if !self.tail.is_maximal() {
            return Err(Error::InvalidSubspace("stabilizer tail must be maximal".into()));
        }
        let shift: Vec<usize> = (m..n).collect();
        let mut out = BTreeMap::new();
        for (a, c) in &self.core {
            for (t, r) in self.tail.elements() {
                let p = *a + t.embed(&shift);
                let (img, flip) = self.clifford.map_point(p);
                let v = if r ^ flip { -c.clone() } else { c.clone() };
                out.insert(img, v);
            }
        }
        Ok(out)
    }
}

/// `A_O^c = 2^{-n} sum_{b in O} c_b T_b` with exact coefficients and `c_0 = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct PhasePointOperator {
    n: usize,
    terms: BTreeMap<PauliPoint, Rational>,
    constructive: Option<ConstructiveForm>,
}

impl PhasePointOperator {
    /// Builds from support/coefficient pairs; the identity term may be given
    /// (it must equal 1) or omitted. Zero coefficients are dropped.
    pub fn new(n: usize, terms: impl IntoIterator<Item = (PauliPoint, Rational)>) -> Result<Self> {
        if n > MAX_QUBITS {
            return Err(Error::TooManyQubits(n, MAX_QUBITS));
        }
        let mut map = BTreeMap::new();
        for (p, c) in terms {
            if !p.fits(n) {
                return Err(Error::OutOfRange(format!("{p} on {n} qubits")));
            }
            if map.insert(p, c).is_some() {
                return Err(Error::DuplicatePoint(p.to_letters(n)));
            }
        }
        match map.get(&PauliPoint::IDENTITY) {
            Some(c) if !c.is_one() => {
                return Err(Error::InvalidLabel(format!(
                    "identity coefficient must be 1, got {}",
                    format_rational(c)
                )))
            }
            _ => {}
        }
        map.insert(PauliPoint::IDENTITY, Rational::one());
        map.retain(|_, c| !c.is_zero());
        Ok(PhasePointOperator {
            n,
            terms: map,
            constructive: None,
        })
    }

    pub fn maximally_mixed(n: usize) -> Self {
        Self::new(n, []).expect("identity only")
    }

    pub fn from_projector(space: &IsotropicSubspace) -> Self {
        let w = Rational::from_integer((1i64 << space.n()).into()) / Rational::from_integer((1i64 << space.dim()).into());
        let terms = space
            .elements()
            .into_iter()
            .map(|(a, r)| (a, if r { -w.clone() } else { w.clone() }));
        Self::new(space.n(), terms).expect("projector expansion is valid")
    }

    pub fn from_constructive(form: ConstructiveForm) -> Result<Self> {
        let n = form.clifford.n();
        let mut op = Self::new(n, form.expand()?)?;
        op.constructive = Some(form);
        Ok(op)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn constructive(&self) -> Option<&ConstructiveForm> {
        self.constructive.as_ref()
    }

    pub fn coefficient(&self, a: PauliPoint) -> Rational {
        self.terms.get(&a).cloned().unwrap_or_else(Rational::zero)
    }

    /// `(point, coefficient)` pairs sorted by point, identity first.
    pub fn terms(&self) -> impl Iterator<Item = (&PauliPoint, &Rational)> {
        self.terms.iter()
    }

    /// Support without the identity.
    pub fn support(&self) -> Vec<PauliPoint> {
        self.terms.keys().copied().filter(|p| !p.is_identity()).collect()
    }

    pub fn key(&self) -> Vec<(PauliPoint, Rational)> {
        self.terms.iter().map(|(p, c)| (*p, c.clone())).collect()
    }

    pub fn to_vector(&self) -> Result<PauliVector<Rational>> {
        PauliVector::from_terms(self.n, &self.key())
    }

    pub fn to_f64_vector(&self) -> Result<PauliVector<f64>> {
        Ok(self.to_vector()?.to_f64())
    }

    /// `g A g^dag`.
    pub fn conjugate(&self, g: &CliffordTableau) -> Result<Self> {
        if g.n() != self.n {
            return Err(Error::QubitMismatch(g.n(), self.n));
        }
        let terms = self.terms.iter().map(|(p, c)| {
            let (img, flip) = g.map_point(*p);
            (img, if flip { -c.clone() } else { c.clone() })
        });
        let mut op = Self::new(self.n, terms)?;
        op.constructive = self.constructive.as_ref().map(|f| ConstructiveForm {
            clifford: g.compose_after(&f.clifford).expect("same register"),
            ..f.clone()
        });
        Ok(op)
    }

    /// `self ⊗ other`, `other` on the higher qubits.
    pub fn tensor(&self, other: &PhasePointOperator) -> Result<Self> {
        let mut terms = Vec::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let p = PauliPoint::new(a.z | b.z << self.n, a.x | b.x << self.n);
                terms.push((p, ca * cb));
            }
        }
        Self::new(self.n + other.n, terms)
    }

    /// `self ⊗ Pi_tail` with the constructive form recorded.
    pub fn with_tail(&self, tail: &IsotropicSubspace) -> Result<Self> {
        let n = self.n + tail.n();
        let form = match &self.constructive {
            Some(f) if f.clifford == CliffordTableau::identity(self.n) => ConstructiveForm {
                core_qubits: f.core_qubits,
                core: f.core.clone(),
                tail: concat_tails(&f.tail, tail),
                clifford: CliffordTableau::identity(n),
            },
            _ => ConstructiveForm {
                core_qubits: self.n,
                core: self.key(),
                tail: tail.clone(),
                clifford: CliffordTableau::identity(n),
            },
        };
        Self::from_constructive(form)
    }

    /// Operator exchange text: `n=<n>` then `coefficient<TAB>pauli` lines.
    pub fn to_text(&self) -> String {
        let mut s = format!("n={}\n", self.n);
        for (p, c) in &self.terms {
            s.push_str(&format!("{}\t{}\n", format_rational(c), p.to_letters(self.n)));
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut n = None;
        let mut terms = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if n.is_none() {
                let v = line
                    .strip_prefix("n=")
                    .and_then(|v| v.trim().parse::<usize>().ok())
                    .ok_or_else(|| parse_err(i + 1, "expected header `n=<n>`"))?;
                n = Some(v);
                continue;
            }
            let mut parts = line.split_whitespace();
            let (Some(c), Some(p), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(parse_err(i + 1, "expected `coefficient<TAB>pauli`"));
            };
            let c = parse_rational(c).ok_or_else(|| parse_err(i + 1, format!("bad coefficient {c:?}")))?;
            let (len, p) = PauliPoint::parse_letters(p).map_err(|e| parse_err(i + 1, e.to_string()))?;
            if Some(len) != n {
                return Err(parse_err(i + 1, format!("pauli length {len} does not match n")));
            }
            terms.push((p, c));
        }
        let n = n.ok_or_else(|| parse_err(0, "empty operator file"))?;
        Self::new(n, terms).map_err(|e| parse_err(0, e.to_string()))
    }
}

fn concat_tails(first: &IsotropicSubspace, second: &IsotropicSubspace) -> IsotropicSubspace {
    let k = first.n();
    let total = k + second.n();
    let shifted: Vec<usize> = (k..total).collect();
    let mut basis: Vec<(PauliPoint, bool)> = first.basis().to_vec();
    basis.extend(second.embed(total, &shifted).basis().iter().copied());
    IsotropicSubspace::new(total, basis).expect("disjoint tails commute")
}

impl fmt::Display for PhasePointOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::Gate;
    use crate::scalar::rat;

    #[test]
    fn text_roundtrip() {
        let op = PhasePointOperator::new(
            2,
            [(PauliPoint::new(1, 0), rat(1, 2)), (PauliPoint::new(2, 3), rat(-1, 3))],
        )
        .unwrap();
        assert_eq!(PhasePointOperator::parse(&op.to_text()).unwrap(), op);
        assert!(PhasePointOperator::parse("n=1\n2\tI\n").is_err());
        assert!(PhasePointOperator::parse("1\tX\n").is_err());
    }

    #[test]
    fn constructive_matches_flat() {
        let core = PhasePointOperator::new(
            1,
            [
                (PauliPoint::new(0, 1), rat(1, 1)),
                (PauliPoint::new(1, 1), rat(1, 1)),
                (PauliPoint::new(1, 0), rat(1, 1)),
            ],
        )
        .unwrap();
        let tail = IsotropicSubspace::computational(1, &[false]);
        let op = core.with_tail(&tail).unwrap();
        let flat = core.tensor(&PhasePointOperator::from_projector(&tail)).unwrap();
        assert_eq!(op.key(), flat.key());
        let g = CliffordTableau::from_gates(2, &[Gate::H(1), Gate::CX(1, 0)]).unwrap();
        let moved = op.conjugate(&g).unwrap();
        let again = PhasePointOperator::from_constructive(moved.constructive().unwrap().clone()).unwrap();
        assert_eq!(again.key(), moved.key());
    }
}
