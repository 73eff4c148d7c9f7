use std::fmt;
use std::str::FromStr;

use super::phased::PhasedPauli;
use super::point::{symplectic, PauliPoint};
use crate::error::{Error, Result};

/// A Clifford unitary `g` stored as the images `g Z_k g^dag`, `g X_k g^dag`.
///
/// `g(T_a) = (-1)^{Phi_g(a)} T_{S_g a}`; both `S_g` and `Phi_g` are evaluated
/// on demand by multiplying generator images.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CliffordTableau {
    n: usize,
    z_images: Vec<PhasedPauli>,
    x_images: Vec<PhasedPauli>,
}

impl CliffordTableau {
    pub fn identity(n: usize) -> Self {
        CliffordTableau {
            n,
            z_images: (0..n)
                .map(|k| PhasedPauli::from_point(n, PauliPoint::new(1 << k, 0)))
                .collect(),
            x_images: (0..n)
                .map(|k| PhasedPauli::from_point(n, PauliPoint::new(0, 1 << k)))
                .collect(),
        }
    }

    /// Validates hermiticity and the canonical commutation relations.
    pub fn from_images(z_images: Vec<PhasedPauli>, x_images: Vec<PhasedPauli>) -> Result<Self> {
        let n = z_images.len();
        if x_images.len() != n {
            return Err(Error::InvalidTableau("image count mismatch".into()));
        }
        for p in z_images.iter().chain(&x_images) {
            if p.n != n {
                return Err(Error::QubitMismatch(p.n, n));
            }
            if !p.is_hermitian() {
                return Err(Error::InvalidTableau(format!("{p} is not hermitian")));
            }
        }
        for i in 0..n {
            for j in 0..n {
                let zz = symplectic(z_images[i].point, z_images[j].point);
                let xx = symplectic(x_images[i].point, x_images[j].point);
                let zx = symplectic(z_images[i].point, x_images[j].point);
                if zz || xx || zx != (i == j) {
                    return Err(Error::InvalidTableau(format!(
                        "commutation relations broken at ({i},{j})"
                    )));
                }
            }
        }
        Ok(CliffordTableau {
            n,
            z_images,
            x_images,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn z_image(&self, k: usize) -> PhasedPauli {
        self.z_images[k]
    }

    pub fn x_image(&self, k: usize) -> PhasedPauli {
        self.x_images[k]
    }

    /// `g p g^dag`.
    pub fn apply(&self, p: &PhasedPauli) -> Result<PhasedPauli> {
        if p.n != self.n {
            return Err(Error::QubitMismatch(p.n, self.n));
        }
        Ok(self.apply_unchecked(p))
    }

    pub(crate) fn apply_unchecked(&self, p: &PhasedPauli) -> PhasedPauli {
        // T_a = i^{-<a_z|a_x>} prod Z_k^{a_z} prod X_k^{a_x}
        let a = p.point;
        let shift = (4 - (a.zx_dot() % 4) as u8) % 4;
        let mut acc = PhasedPauli::new(self.n, p.phase + shift, PauliPoint::IDENTITY);
        let mut bits = a.z;
        while bits != 0 {
            let k = bits.trailing_zeros() as usize;
            acc = acc.mul_unchecked(&self.z_images[k]);
            bits &= bits - 1;
        }
        let mut bits = a.x;
        while bits != 0 {
            let k = bits.trailing_zeros() as usize;
            acc = acc.mul_unchecked(&self.x_images[k]);
            bits &= bits - 1;
        }
        acc
    }

    /// `(S_g a, Phi_g(a))` for a Hermitian `T_a`.
    pub fn map_point(&self, a: PauliPoint) -> (PauliPoint, bool) {
        let img = self.apply_unchecked(&PhasedPauli::from_point(self.n, a));
        debug_assert!(img.is_hermitian());
        (img.point, img.is_negative())
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn compose_after(&self, first: &CliffordTableau) -> Result<CliffordTableau> {
        if first.n != self.n {
            return Err(Error::QubitMismatch(first.n, self.n));
        }
        Ok(CliffordTableau {
            n: self.n,
            z_images: first.z_images.iter().map(|p| self.apply_unchecked(p)).collect(),
            x_images: first.x_images.iter().map(|p| self.apply_unchecked(p)).collect(),
        })
    }

    /// Apply a gate after this tableau.
    pub fn then(&self, gate: &Gate) -> Result<CliffordTableau> {
        gate.tableau(self.n)?.compose_after(self)
    }

    pub fn from_gates(n: usize, gates: &[Gate]) -> Result<CliffordTableau> {
        gates
            .iter()
            .try_fold(CliffordTableau::identity(n), |t, g| t.then(g))
    }

    pub fn inverse(&self) -> CliffordTableau {
        // g^{-1}(P) is the unique Pauli Q with g(Q) = P; solve on the generators
        // by brute elimination over the 2n images.
        let n = self.n;
        let images: Vec<PhasedPauli> = self.z_images.iter().chain(&self.x_images).copied().collect();
        let basis: Vec<PauliPoint> = images.iter().map(|p| p.point).collect();
        let gens: Vec<PauliPoint> = (0..n)
            .map(|k| PauliPoint::new(1 << k, 0))
            .chain((0..n).map(|k| PauliPoint::new(0, 1 << k)))
            .collect();
        let pre = |target: PauliPoint| -> PhasedPauli {
            let mask = super::isotropic::solve_gf2(&basis, target).expect("tableau images span E");
            let mut q = PauliPoint::IDENTITY;
            for (i, g) in gens.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    q += *g;
                }
            }
            let img = self.apply_unchecked(&PhasedPauli::from_point(n, q));
            debug_assert_eq!(img.point, target);
            // g(T_q) = i^ph T_target  =>  g^{-1}(T_target) = i^{-ph} T_q
            PhasedPauli::new(n, (4 - img.phase) % 4, q)
        };
        CliffordTableau {
            n,
            z_images: (0..n).map(|k| pre(PauliPoint::new(1 << k, 0))).collect(),
            x_images: (0..n).map(|k| pre(PauliPoint::new(0, 1 << k))).collect(),
        }
    }
}

/// Elementary Clifford gates. `SX` is the product `S·X` (X applied first),
/// the correction used in T-gate injection.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Gate {
    I(usize),
    X(usize),
    Y(usize),
    Z(usize),
    H(usize),
    S(usize),
    Sdg(usize),
    SX(usize),
    CX(usize, usize),
    CZ(usize, usize),
    Swap(usize, usize),
}

impl Gate {
    pub fn qubits(&self) -> Vec<usize> {
        use Gate::*;
        match *self {
            I(q) | X(q) | Y(q) | Z(q) | H(q) | S(q) | Sdg(q) | SX(q) => vec![q],
            CX(a, b) | CZ(a, b) | Swap(a, b) => vec![a, b],
        }
    }

    pub fn name(&self) -> &'static str {
        use Gate::*;
        match self {
            I(_) => "I",
            X(_) => "X",
            Y(_) => "Y",
            Z(_) => "Z",
            H(_) => "H",
            S(_) => "S",
            Sdg(_) => "SDG",
            SX(_) => "SX",
            CX(..) => "CX",
            CZ(..) => "CZ",
            Swap(..) => "SWAP",
        }
    }

    pub fn from_name(name: &str, qubits: &[usize]) -> Result<Gate> {
        use Gate::*;
        let one = |f: fn(usize) -> Gate| -> Result<Gate> {
            match qubits {
                [q] => Ok(f(*q)),
                _ => Err(Error::InvalidLabel(format!("gate {name} takes one qubit"))),
            }
        };
        let two = |f: fn(usize, usize) -> Gate| -> Result<Gate> {
            match qubits {
                [a, b] if a != b => Ok(f(*a, *b)),
                _ => Err(Error::InvalidLabel(format!("gate {name} takes two distinct qubits"))),
            }
        };
        match name.to_ascii_uppercase().as_str() {
            "I" | "ID" => one(I),
            "X" => one(X),
            "Y" => one(Y),
            "Z" => one(Z),
            "H" => one(H),
            "S" => one(S),
            "SDG" | "SDAG" => one(Sdg),
            "SX" => one(SX),
            "CX" | "CNOT" => two(CX),
            "CZ" => two(CZ),
            "SWAP" => two(Swap),
            other => Err(Error::InvalidLabel(format!("unknown gate {other}"))),
        }
    }

    /// Full `n`-qubit tableau of this gate.
    pub fn tableau(&self, n: usize) -> Result<CliffordTableau> {
        if let Some(&q) = self.qubits().iter().find(|&&q| q >= n) {
            return Err(Error::OutOfRange(format!("qubit {q} on {n}-qubit register")));
        }
        let mut t = CliffordTableau::identity(n);
        let p = |s: u8, z: u64, x: u64| PhasedPauli::new(n, s, PauliPoint::new(z, x));
        use Gate::*;
        match *self {
            I(_) => {}
            X(q) => t.z_images[q] = p(2, 1 << q, 0),
            Y(q) => {
                t.z_images[q] = p(2, 1 << q, 0);
                t.x_images[q] = p(2, 0, 1 << q);
            }
            Z(q) => t.x_images[q] = p(2, 0, 1 << q),
            H(q) => {
                t.z_images[q] = p(0, 0, 1 << q);
                t.x_images[q] = p(0, 1 << q, 0);
            }
            S(q) => t.x_images[q] = p(0, 1 << q, 1 << q),
            Sdg(q) => t.x_images[q] = p(2, 1 << q, 1 << q),
            SX(q) => {
                t.z_images[q] = p(2, 1 << q, 0);
                t.x_images[q] = p(0, 1 << q, 1 << q);
            }
            CX(c, tg) => {
                t.x_images[c] = p(0, 0, 1 << c | 1 << tg);
                t.z_images[tg] = p(0, 1 << c | 1 << tg, 0);
            }
            CZ(a, b) => {
                t.x_images[a] = p(0, 1 << b, 1 << a);
                t.x_images[b] = p(0, 1 << a, 1 << b);
            }
            Swap(a, b) => {
                t.z_images.swap(a, b);
                t.x_images.swap(a, b);
            }
        }
        Ok(t)
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())?;
        for q in self.qubits() {
            write!(f, " {q}")?;
        }
        Ok(())
    }
}

impl FromStr for Gate {
    type Err = Error;
    fn from_str(s: &str) -> Result<Gate> {
        let mut it = s.split_whitespace();
        let name = it
            .next()
            .ok_or_else(|| Error::InvalidLabel("empty gate".into()))?;
        let qubits = it
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| Error::InvalidLabel(format!("bad qubit index {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Gate::from_name(name, &qubits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pp(s: &str) -> PhasedPauli {
        s.parse().unwrap()
    }

    #[test]
    fn generator_actions() {
        let h = Gate::H(0).tableau(1).unwrap();
        assert_eq!(h.apply(&pp("Z")).unwrap(), pp("+X"));
        assert_eq!(h.apply(&pp("Y")).unwrap(), pp("-Y"));
        let s = Gate::S(0).tableau(1).unwrap();
        assert_eq!(s.apply(&pp("X")).unwrap(), pp("+Y"));
        assert_eq!(s.apply(&pp("Y")).unwrap(), pp("-X"));
        let cx = Gate::CX(0, 1).tableau(2).unwrap();
        assert_eq!(cx.apply(&pp("XI")).unwrap(), pp("+XX"));
        assert_eq!(cx.apply(&pp("IZ")).unwrap(), pp("+ZZ"));
        assert_eq!(cx.apply(&pp("ZI")).unwrap(), pp("+ZI"));
    }

    #[test]
    fn tableaux_validate() {
        for g in [
            Gate::H(1),
            Gate::S(0),
            Gate::Sdg(2),
            Gate::SX(1),
            Gate::CX(2, 0),
            Gate::CZ(0, 1),
            Gate::Swap(1, 2),
            Gate::Y(0),
        ] {
            let t = g.tableau(3).unwrap();
            let z = (0..3).map(|k| t.z_image(k)).collect();
            let x = (0..3).map(|k| t.x_image(k)).collect();
            assert!(CliffordTableau::from_images(z, x).is_ok(), "{g}");
        }
        assert!(Gate::H(3).tableau(3).is_err());
    }

    #[test]
    fn inverse_roundtrip() {
        let g = CliffordTableau::from_gates(
            3,
            &[Gate::H(0), Gate::CX(0, 2), Gate::S(2), Gate::SX(1), Gate::CZ(1, 2)],
        )
        .unwrap();
        let inv = g.inverse();
        assert_eq!(inv.compose_after(&g).unwrap(), CliffordTableau::identity(3));
        assert_eq!(g.compose_after(&inv).unwrap(), CliffordTableau::identity(3));
    }

    #[test]
    fn symplectic_products_preserved() {
        let g = CliffordTableau::from_gates(2, &[Gate::H(0), Gate::CX(0, 1), Gate::S(1)]).unwrap();
        for a in PauliPoint::all(2) {
            for b in PauliPoint::all(2) {
                let (sa, _) = g.map_point(a);
                let (sb, _) = g.map_point(b);
                assert_eq!(symplectic(sa, sb), symplectic(a, b));
            }
        }
    }

    #[test]
    fn gate_parsing() {
        assert_eq!("cx 0 1".parse::<Gate>().unwrap(), Gate::CX(0, 1));
        assert_eq!("SX 2".parse::<Gate>().unwrap(), Gate::SX(2));
        assert!("CX 1 1".parse::<Gate>().is_err());
        assert!("FOO 0".parse::<Gate>().is_err());
    }
}
