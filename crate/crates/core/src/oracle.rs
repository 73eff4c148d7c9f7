//! Dense brute-force reference implementation.
//!
//! Operators are `2^n x 2^n` complex matrices over a [`Scalar`] field, with
//! qubit 0 as the most significant bit of the row index. Clifford gates are
//! kept as Gaussian-integer matrices scaled by `2^{-k/2}`, so conjugation on
//! the exact path stays exact.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::pauli::{Gate, IsotropicSubspace, PauliPoint, PauliVector, PhasedPauli};
use crate::scalar::{Rational, Scalar};
use crate::simulate::{Circuit, Element};

pub const MAX_DENSE_QUBITS: usize = 10;
pub const MAX_BRANCH_MEASUREMENTS: usize = 20;
pub const MAX_BRANCH_QUBITS: usize = 8;

#[derive(Clone, Debug, PartialEq)]
pub struct DenseOperator<S> {
    n: usize,
    dim: usize,
    data: Vec<Complex<S>>,
}

fn czero<S: Scalar>() -> Complex<S> {
    Complex::new(S::zero(), S::zero())
}

impl<S: Scalar> DenseOperator<S> {
    pub fn zeros(n: usize) -> Result<Self> {
        if n > MAX_DENSE_QUBITS {
            return Err(Error::TooManyQubits(n, MAX_DENSE_QUBITS));
        }
        let dim = 1 << n;
        Ok(DenseOperator {
            n,
            dim,
            data: vec![czero(); dim * dim],
        })
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut m = Self::zeros(n)?;
        for i in 0..m.dim {
            m.data[i * m.dim + i] = Complex::new(S::one(), S::zero());
        }
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, r: usize, c: usize) -> &Complex<S> {
        &self.data[r * self.dim + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Complex<S>) {
        self.data[r * self.dim + c] = v;
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let d = self.dim;
        let mut out = vec![czero::<S>(); d * d];
        for i in 0..d {
            for k in 0..d {
                let a = &self.data[i * d + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..d {
                    let b = &other.data[k * d + j];
                    if !b.is_zero() {
                        out[i * d + j] = out[i * d + j].clone() + a.clone() * b.clone();
                    }
                }
            }
        }
        DenseOperator {
            n: self.n,
            dim: d,
            data: out,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        DenseOperator {
            n: self.n,
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-S::one()))
    }

    pub fn scale(&self, s: &S) -> Self {
        DenseOperator {
            n: self.n,
            dim: self.dim,
            data: self.data.iter().map(|a| a.clone() * s.clone()).collect(),
        }
    }

    pub fn adjoint(&self) -> Self {
        let d = self.dim;
        let mut out = self.clone();
        for i in 0..d {
            for j in 0..d {
                out.data[i * d + j] = self.data[j * d + i].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> Complex<S> {
        (0..self.dim).fold(czero(), |acc, i| acc + self.data[i * self.dim + i].clone())
    }

    /// `self ⊗ other`; `other` occupies the higher-numbered qubits.
    pub fn kron(&self, other: &Self) -> Result<Self> {
        let mut out = Self::zeros(self.n + other.n)?;
        let (d1, d2) = (self.dim, other.dim);
        for r1 in 0..d1 {
            for c1 in 0..d1 {
                let a = &self.data[r1 * d1 + c1];
                if a.is_zero() {
                    continue;
                }
                for r2 in 0..d2 {
                    for c2 in 0..d2 {
                        let v = a.clone() * other.data[r2 * d2 + c2].clone();
                        out.set(r1 * d2 + r2, c1 * d2 + c2, v);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.data
            .iter()
            .all(|z| z.re.is_negligible() && z.im.is_negligible())
    }

    pub fn is_hermitian(&self) -> bool {
        self.sub(&self.adjoint()).is_zero()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| {
                let d = a.clone() - b.clone();
                d.re.to_f64().hypot(d.im.to_f64())
            })
            .fold(0.0, f64::max)
    }

    pub fn to_f64(&self) -> DenseOperator<f64> {
        DenseOperator {
            n: self.n,
            dim: self.dim,
            data: self
                .data
                .iter()
                .map(|z| Complex::new(z.re.to_f64(), z.im.to_f64()))
                .collect(),
        }
    }

    /// Reduced operator on `keep` (in the given order), tracing out the rest.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self> {
        let n = self.n;
        if let Some(&q) = keep.iter().find(|&&q| q >= n) {
            return Err(Error::OutOfRange(format!("qubit {q}")));
        }
        let traced: Vec<usize> = (0..n).filter(|q| !keep.contains(q)).collect();
        let mut out = Self::zeros(keep.len())?;
        let bit = |q: usize| 1usize << (n - 1 - q);
        let compose = |kv: usize, tv: usize| {
            let mut idx = 0;
            for (i, &q) in keep.iter().enumerate() {
                if kv >> (keep.len() - 1 - i) & 1 == 1 {
                    idx |= bit(q);
                }
            }
            for (i, &q) in traced.iter().enumerate() {
                if tv >> i & 1 == 1 {
                    idx |= bit(q);
                }
            }
            idx
        };
        for r in 0..out.dim {
            for c in 0..out.dim {
                let mut acc = czero::<S>();
                for t in 0..1usize << traced.len() {
                    acc = acc + self.get(compose(r, t), compose(c, t)).clone();
                }
                out.set(r, c, acc);
            }
        }
        Ok(out)
    }

    /// Text dump: a header `n=<n>` then one row per line of `re,im` pairs.
    pub fn dump(&self) -> String {
        let mut s = format!("n={}\n", self.n);
        for r in 0..self.dim {
            let row: Vec<String> = (0..self.dim)
                .map(|c| {
                    let z = self.get(r, c);
                    format!("{},{}", z.re, z.im)
                })
                .collect();
            let _ = writeln!(s, "{}", row.join(" "));
        }
        s
    }
}

fn rev_bits(mask: u64, n: usize) -> usize {
    let mut out = 0usize;
    for q in 0..n {
        if mask >> q & 1 == 1 {
            out |= 1 << (n - 1 - q);
        }
    }
    out
}

/// Adds `coef * i^phase T_point` into `m`.
fn add_pauli<S: Scalar>(m: &mut DenseOperator<S>, phase: u8, point: PauliPoint, coef: &S) {
    let n = m.n;
    let x = rev_bits(point.x, n);
    let z = rev_bits(point.z, n);
    let ys = (point.x & point.z).count_ones() as u8;
    // entry <r|P|r^x> = (-1)^{|r & z|} (-i)^{#Y} i^phase
    let base = (phase + 3 * ys) & 3;
    for r in 0..m.dim {
        let k = (base + 2 * ((r & z).count_ones() as u8 & 1)) & 3;
        let c = r ^ x;
        let v = match k {
            0 => Complex::new(coef.clone(), S::zero()),
            1 => Complex::new(S::zero(), coef.clone()),
            2 => Complex::new(-coef.clone(), S::zero()),
            _ => Complex::new(S::zero(), -coef.clone()),
        };
        let cur = m.data[r * m.dim + c].clone();
        m.data[r * m.dim + c] = cur + v;
    }
}

/// Kronecker realization of `i^phase T_a`.
pub fn dense_pauli<S: Scalar>(p: &PhasedPauli) -> Result<DenseOperator<S>> {
    let mut m = DenseOperator::zeros(p.n)?;
    add_pauli(&mut m, p.phase, p.point, &S::one());
    Ok(m)
}

/// `2^{-n} sum_b c_b T_b`.
pub fn from_pauli_vector<S: Scalar>(v: &PauliVector<S>) -> Result<DenseOperator<S>> {
    let mut m = DenseOperator::zeros(v.n())?;
    let scale = S::one() / S::from_i64(1 << v.n());
    for (p, c) in v.terms() {
        add_pauli(&mut m, 0, p, &(c * scale.clone()));
    }
    Ok(m)
}

/// `Tr(T_b M)` for every `b`; imaginary parts (nonzero only for non-Hermitian
/// `M`) are discarded.
pub fn pauli_coefficients<S: Scalar>(m: &DenseOperator<S>) -> Result<PauliVector<S>> {
    let n = m.n;
    let mut coeffs = Vec::with_capacity(1 << (2 * n));
    for b in PauliPoint::all(n) {
        let mut t = DenseOperator::zeros(n)?;
        add_pauli(&mut t, 0, b, &S::one());
        let d = m.dim;
        let x = rev_bits(b.x, n);
        let mut acc = czero::<S>();
        for r in 0..d {
            let c = r ^ x;
            acc = acc + t.data[r * d + c].clone() * m.data[c * d + r].clone();
        }
        coeffs.push(acc.re);
    }
    PauliVector::from_coeffs(n, coeffs)
}

/// `Pi_I^r = |I|^{-1} sum_{a in I} (-1)^{r(a)} T_a`, exactly.
pub fn make_projector(space: &IsotropicSubspace) -> Result<DenseOperator<Rational>> {
    let mut m = DenseOperator::zeros(space.n())?;
    let elems = space.elements();
    let w = Rational::one() / Rational::from_i64(elems.len() as i64);
    for (a, r) in elems {
        add_pauli(&mut m, if r { 2 } else { 0 }, a, &w);
    }
    Ok(m)
}

/// `(1 + (-1)^s P) / 2` for a Hermitian Pauli `P`.
pub fn measurement_projector<S: Scalar>(p: &PhasedPauli, outcome: bool) -> Result<DenseOperator<S>> {
    if !p.is_hermitian() {
        return Err(Error::NotHermitian(p.to_string()));
    }
    let mut m = DenseOperator::identity(p.n)?.scale(&S::half());
    let phase = if outcome { p.phase + 2 } else { p.phase };
    add_pauli(&mut m, phase & 3, p.point, &S::half());
    Ok(m)
}

/// Gaussian-integer matrix `G` with `U = 2^{-k/2} G`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliffordUnitary {
    pub n: usize,
    pub entries: Vec<Complex<i64>>,
    pub sqrt2_power: u32,
}

impl CliffordUnitary {
    pub fn of_gate(gate: &Gate, n: usize) -> Result<CliffordUnitary> {
        gate.tableau(n)?;
        if n > MAX_DENSE_QUBITS {
            return Err(Error::TooManyQubits(n, MAX_DENSE_QUBITS));
        }
        let c = |re, im| Complex::new(re, im);
        let single = |q: usize, m: [[Complex<i64>; 2]; 2], k: u32| {
            let dim = 1usize << n;
            let b = 1usize << (n - 1 - q);
            let mut e = vec![c(0, 0); dim * dim];
            for r in 0..dim {
                for col in [r & !b, r | b] {
                    e[r * dim + col] = m[usize::from(r & b != 0)][usize::from(col & b != 0)];
                }
            }
            CliffordUnitary {
                n,
                entries: e,
                sqrt2_power: k,
            }
        };
        let perm = |f: &dyn Fn(usize) -> (usize, i64)| {
            let dim = 1usize << n;
            let mut e = vec![c(0, 0); dim * dim];
            for col in 0..dim {
                let (r, s) = f(col);
                e[r * dim + col] = c(s, 0);
            }
            CliffordUnitary {
                n,
                entries: e,
                sqrt2_power: 0,
            }
        };
        let bit = |q: usize| 1usize << (n - 1 - q);
        let (o, z, i, mi, mo) = (c(1, 0), c(0, 0), c(0, 1), c(0, -1), c(-1, 0));
        Ok(match *gate {
            Gate::I(q) => single(q, [[o, z], [z, o]], 0),
            Gate::X(q) => single(q, [[z, o], [o, z]], 0),
            Gate::Y(q) => single(q, [[z, mi], [i, z]], 0),
            Gate::Z(q) => single(q, [[o, z], [z, mo]], 0),
            Gate::H(q) => single(q, [[o, o], [o, mo]], 1),
            Gate::S(q) => single(q, [[o, z], [z, i]], 0),
            Gate::Sdg(q) => single(q, [[o, z], [z, mi]], 0),
            Gate::SX(q) => single(q, [[z, o], [i, z]], 0),
            Gate::CX(ctl, t) => perm(&|col| {
                if col & bit(ctl) != 0 {
                    (col ^ bit(t), 1)
                } else {
                    (col, 1)
                }
            }),
            Gate::CZ(a, b) => perm(&|col| {
                if col & bit(a) != 0 && col & bit(b) != 0 {
                    (col, -1)
                } else {
                    (col, 1)
                }
            }),
            Gate::Swap(a, b) => perm(&|col| {
                let (ba, bb) = (col & bit(a) != 0, col & bit(b) != 0);
                let mut r = col & !bit(a) & !bit(b);
                if ba {
                    r |= bit(b);
                }
                if bb {
                    r |= bit(a);
                }
                (r, 1)
            }),
        })
    }

    pub fn to_dense<S: Scalar>(&self) -> DenseOperator<S> {
        DenseOperator {
            n: self.n,
            dim: 1 << self.n,
            data: self
                .entries
                .iter()
                .map(|z| Complex::new(S::from_i64(z.re), S::from_i64(z.im)))
                .collect(),
        }
    }

    /// `U M U^dag`, exact whenever `M` is.
    pub fn conjugate<S: Scalar>(&self, m: &DenseOperator<S>) -> DenseOperator<S> {
        let g = self.to_dense::<S>();
        let out = g.mul(m).mul(&g.adjoint());
        out.scale(&(S::one() / S::from_i64(1 << self.sqrt2_power)))
    }
}

/// Born probability and post-measurement operator `P rho P / p`.
pub fn apply_measurement<S: Scalar>(
    rho: &DenseOperator<S>,
    p: &PhasedPauli,
    outcome: bool,
) -> Result<(S, Option<DenseOperator<S>>)> {
    let proj = measurement_projector::<S>(p, outcome)?;
    let unnorm = proj.mul(rho).mul(&proj);
    let prob = unnorm.trace().re;
    if prob.is_negligible() {
        return Ok((prob, None));
    }
    let post = unnorm.scale(&(S::one() / prob.clone()));
    Ok((prob, Some(post)))
}

/// One leaf of the measurement branch tree.
#[derive(Clone, Debug)]
pub struct Branch<S> {
    pub outcomes: Vec<bool>,
    pub prob: S,
    pub log_prob: f64,
    pub state: DenseOperator<S>,
}

/// All nonzero-probability branches of `circuit` run on `rho`.
pub fn exact_branches<S: Scalar>(rho: &DenseOperator<S>, circuit: &Circuit) -> Result<Vec<Branch<S>>> {
    if rho.n != circuit.n() {
        return Err(Error::QubitMismatch(rho.n, circuit.n()));
    }
    if rho.n > MAX_BRANCH_QUBITS {
        return Err(Error::CapExceeded {
            what: "oracle qubits",
            value: rho.n,
            cap: MAX_BRANCH_QUBITS,
        });
    }
    let m = circuit.labels().len();
    if m > MAX_BRANCH_MEASUREMENTS {
        return Err(Error::CapExceeded {
            what: "oracle measurements",
            value: m,
            cap: MAX_BRANCH_MEASUREMENTS,
        });
    }
    let root = Branch {
        outcomes: Vec::new(),
        prob: S::one(),
        log_prob: 0.0,
        state: rho.clone(),
    };
    expand(circuit, 0, root)
}

fn expand<S: Scalar>(circuit: &Circuit, start: usize, mut branch: Branch<S>) -> Result<Vec<Branch<S>>> {
    let elements = circuit.elements();
    for (idx, e) in elements.iter().enumerate().skip(start) {
        match e {
            Element::Gate { gate, condition } => {
                let active = condition
                    .as_ref()
                    .map_or(true, |l| branch.outcomes[circuit.label_index(l)]);
                if active {
                    let u = CliffordUnitary::of_gate(gate, circuit.n())?;
                    branch.state = u.conjugate(&branch.state);
                }
            }
            Element::Measure { pauli, .. } => {
                let children = [false, true].map(|s| -> Result<Option<Branch<S>>> {
                    let (p, post) = apply_measurement(&branch.state, pauli, s)?;
                    Ok(post.map(|state| {
                        let mut outcomes = branch.outcomes.clone();
                        outcomes.push(s);
                        Branch {
                            outcomes,
                            log_prob: branch.log_prob + p.to_f64().ln(),
                            prob: branch.prob.clone() * p,
                            state,
                        }
                    }))
                });
                let [c0, c1] = children;
                let (left, right) = rayon::join(
                    || match c0 {
                        Ok(Some(b)) => expand(circuit, idx + 1, b),
                        Ok(None) => Ok(Vec::new()),
                        Err(e) => Err(e),
                    },
                    || match c1 {
                        Ok(Some(b)) => expand(circuit, idx + 1, b),
                        Ok(None) => Ok(Vec::new()),
                        Err(e) => Err(e),
                    },
                );
                let mut out = left?;
                out.extend(right?);
                return Ok(out);
            }
        }
    }
    Ok(vec![branch])
}

/// Joint outcome distribution, keyed by outcome bits in label order.
pub fn exact_distribution<S: Scalar>(
    rho: &DenseOperator<S>,
    circuit: &Circuit,
) -> Result<BTreeMap<Vec<bool>, S>> {
    let mut dist = BTreeMap::new();
    for b in exact_branches(rho, circuit)? {
        dist.insert(b.outcomes, b.prob);
    }
    Ok(dist)
}

/// Random mixed state: a uniform mixture of `rank` pure states with
/// entries drawn uniformly from the unit square.
pub fn random_density<R: rand::Rng>(n: usize, rank: usize, rng: &mut R) -> Result<DenseOperator<f64>> {
    let mut m = DenseOperator::<f64>::zeros(n)?;
    let d = m.dim;
    for _ in 0..rank.max(1) {
        let psi: Vec<Complex<f64>> = (0..d)
            .map(|_| Complex::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let norm: f64 = psi.iter().map(|c| c.norm_sqr()).sum();
        for r in 0..d {
            for c in 0..d {
                m.data[r * d + c] += psi[r] * psi[c].conj() / norm;
            }
        }
    }
    Ok(m.scale(&(1.0 / rank.max(1) as f64)))
}

/// Dense input state of a circuit.
pub fn dense_input<S: Scalar>(circuit: &Circuit) -> Result<DenseOperator<S>> {
    from_pauli_vector(&circuit.input_vector::<S>()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::enumerate_stabilizer_projectors;
    use crate::scalar::rat;

    fn pp(s: &str) -> PhasedPauli {
        s.parse().unwrap()
    }

    #[test]
    fn y_convention() {
        let y = dense_pauli::<Rational>(&pp("Y")).unwrap();
        assert_eq!(y.get(0, 1), &Complex::new(Rational::zero(), rat(-1, 1)));
        assert_eq!(y.get(1, 0), &Complex::new(Rational::zero(), rat(1, 1)));
        let zx = dense_pauli::<Rational>(&pp("Z"))
            .unwrap()
            .mul(&dense_pauli(&pp("X")).unwrap());
        // ZX = iY
        assert_eq!(zx, dense_pauli(&pp("iY")).unwrap());
    }

    #[test]
    fn paulis_square_to_identity() {
        for a in PauliPoint::all(2) {
            let p = dense_pauli::<Rational>(&PhasedPauli::from_point(2, a)).unwrap();
            assert_eq!(p.mul(&p), DenseOperator::identity(2).unwrap());
        }
    }

    #[test]
    fn projectors_are_rank_one() {
        for s in enumerate_stabilizer_projectors(2, 3).unwrap() {
            let p = make_projector(&s).unwrap();
            assert_eq!(p.mul(&p), p);
            assert!(p.is_hermitian());
            assert_eq!(p.trace().re, rat(1, 1));
        }
    }

    #[test]
    fn coefficient_roundtrip() {
        let v = PauliVector::from_terms(
            2,
            &[
                (PauliPoint::IDENTITY, rat(1, 1)),
                (PauliPoint::new(1, 2), rat(1, 3)),
                (PauliPoint::new(3, 3), rat(-2, 5)),
            ],
        )
        .unwrap();
        let m = from_pauli_vector(&v).unwrap();
        assert_eq!(pauli_coefficients(&m).unwrap(), v);
    }

    #[test]
    fn partial_trace_of_product() {
        let a = from_pauli_vector(
            &PauliVector::from_terms(1, &[(PauliPoint::IDENTITY, rat(1, 1)), (PauliPoint::new(0, 1), rat(1, 2))])
                .unwrap(),
        )
        .unwrap();
        let b = from_pauli_vector(&PauliVector::<Rational>::maximally_mixed(1).unwrap()).unwrap();
        let ab = a.kron(&b).unwrap();
        assert_eq!(ab.partial_trace(&[0]).unwrap(), a);
        assert_eq!(ab.partial_trace(&[1]).unwrap(), b);
    }
}
