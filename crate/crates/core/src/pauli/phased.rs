use std::fmt;
use std::str::FromStr;

use super::point::{product_phase, PauliPoint, MAX_QUBITS};
use crate::error::{Error, Result};

/// `i^phase T_point` on `n` qubits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PhasedPauli {
    pub n: usize,
    pub phase: u8,
    pub point: PauliPoint,
}

impl PhasedPauli {
    pub fn new(n: usize, phase: u8, point: PauliPoint) -> Self {
        debug_assert!(point.fits(n));
        PhasedPauli {
            n,
            phase: phase & 3,
            point,
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::new(n, 0, PauliPoint::IDENTITY)
    }

    pub fn from_point(n: usize, point: PauliPoint) -> Self {
        Self::new(n, 0, point)
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase & 1 == 0
    }

    /// `true` when the phase is `-1` (only meaningful for Hermitian elements).
    pub fn is_negative(&self) -> bool {
        self.phase == 2
    }

    pub fn neg(self) -> Self {
        Self::new(self.n, self.phase + 2, self.point)
    }

    pub fn times_i(self, k: u8) -> Self {
        Self::new(self.n, self.phase + k, self.point)
    }

    /// Product under the fixed phase convention, phases mod 4.
    pub fn mul(&self, other: &PhasedPauli) -> Result<PhasedPauli> {
        if self.n != other.n {
            return Err(Error::QubitMismatch(self.n, other.n));
        }
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &PhasedPauli) -> PhasedPauli {
        let e = product_phase(self.point, other.point);
        PhasedPauli::new(
            self.n,
            self.phase + other.phase + e,
            self.point + other.point,
        )
    }

    pub fn commutes_with(&self, other: &PhasedPauli) -> bool {
        !super::symplectic(self.point, other.point)
    }
}

impl fmt::Display for PhasedPauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = match self.phase {
            0 => "+",
            1 => "+i",
            2 => "-",
            _ => "-i",
        };
        write!(f, "{sign}{}", self.point.to_letters(self.n))
    }
}

impl FromStr for PhasedPauli {
    type Err = Error;

    /// Accepts an optional sign (`+`, `-`, or U+2212), an optional `i`, then
    /// one letter per qubit.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut rest = s;
        let mut phase = 0u8;
        if let Some(r) = rest.strip_prefix('+') {
            rest = r;
        } else if let Some(r) = rest.strip_prefix('-') {
            rest = r;
            phase = 2;
        } else if let Some(r) = rest.strip_prefix('\u{2212}') {
            rest = r;
            phase = 2;
        }
        if let Some(r) = rest.strip_prefix('i') {
            rest = r;
            phase += 1;
        }
        if rest.is_empty() {
            return Err(Error::InvalidLabel(format!("empty pauli string {s:?}")));
        }
        let (n, point) = PauliPoint::parse_letters(rest)?;
        if n > MAX_QUBITS {
            return Err(Error::TooManyQubits(n, MAX_QUBITS));
        }
        Ok(PhasedPauli::new(n, phase, point))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pp(s: &str) -> PhasedPauli {
        s.parse().unwrap()
    }

    #[test]
    fn products() {
        assert_eq!(pp("X").mul(&pp("X")).unwrap(), pp("+I"));
        let t = pp("+XYZ");
        assert_eq!(PhasedPauli::identity(3).mul(&t).unwrap(), t);
        assert_eq!(pp("Z").mul(&pp("X")).unwrap(), pp("+iY"));
        assert_eq!(pp("X").mul(&pp("Z")).unwrap(), pp("-iY"));
        assert!(pp("XX").mul(&pp("X")).is_err());
    }

    #[test]
    fn parse_display() {
        assert_eq!(pp("+XZI").to_string(), "+XZI");
        assert_eq!(pp("\u{2212}iY").to_string(), "-iY");
        assert_eq!(pp("YY").phase, 0);
        assert!("+".parse::<PhasedPauli>().is_err());
        assert!("+XQ".parse::<PhasedPauli>().is_err());
    }

    fn arb(n: usize) -> impl Strategy<Value = PhasedPauli> {
        let mask = (1u64 << n) - 1;
        (0u8..4, any::<u64>(), any::<u64>())
            .prop_map(move |(ph, z, x)| PhasedPauli::new(n, ph, PauliPoint::new(z & mask, x & mask)))
    }

    proptest! {
        #[test]
        fn text_roundtrip(p in arb(5)) {
            prop_assert_eq!(p.to_string().parse::<PhasedPauli>().unwrap(), p);
        }

        #[test]
        fn swapped_product_differs_by_commutator(a in arb(4), b in arb(4)) {
            let ab = a.mul(&b).unwrap();
            let ba = b.mul(&a).unwrap();
            prop_assert_eq!(ab.point, ba.point);
            let expected = if super::super::symplectic(a.point, b.point) { 2 } else { 0 };
            prop_assert_eq!((ab.phase + 4 - ba.phase) % 4, expected);
        }

        #[test]
        fn associative(a in arb(3), b in arb(3), c in arb(3)) {
            let l = a.mul(&b).unwrap().mul(&c).unwrap();
            let r = a.mul(&b.mul(&c).unwrap()).unwrap();
            prop_assert_eq!(l, r);
        }
    }
}
