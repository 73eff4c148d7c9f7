use std::fmt;

use crate::error::{Error, Result};

pub const MAX_QUBITS: usize = 64;

/// A point of `E = Z_2^n x Z_2^n`, bit `k` of each mask belonging to qubit `k`.
///
/// Ordering is lexicographic on `(z, x)` read as integers; this is the
/// canonical order used wherever the crate needs a deterministic choice.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliPoint {
    pub z: u64,
    pub x: u64,
}

impl PauliPoint {
    pub const IDENTITY: PauliPoint = PauliPoint { z: 0, x: 0 };

    pub fn new(z: u64, x: u64) -> Self {
        PauliPoint { z, x }
    }

    pub fn is_identity(self) -> bool {
        self.z == 0 && self.x == 0
    }

    /// Single-qubit factor at `q`: 0 = I, 1 = X, 2 = Z, 3 = Y (bits `z<<1 | x`).
    pub fn factor(self, q: usize) -> u8 {
        (((self.z >> q) & 1) << 1 | ((self.x >> q) & 1)) as u8
    }

    pub fn single(q: usize, letter: char) -> Option<Self> {
        let bit = 1u64 << q;
        match letter {
            'I' => Some(Self::IDENTITY),
            'X' => Some(PauliPoint::new(0, bit)),
            'Z' => Some(PauliPoint::new(bit, 0)),
            'Y' => Some(PauliPoint::new(bit, bit)),
            _ => None,
        }
    }

    /// Number of qubits with a nontrivial factor.
    pub fn weight(self) -> u32 {
        (self.z | self.x).count_ones()
    }

    /// `<a_z|a_x>` as an integer (not reduced).
    pub fn zx_dot(self) -> u32 {
        (self.z & self.x).count_ones()
    }

    /// Integer index `z * 2^n + x`, used for dense coefficient vectors.
    pub fn index(self, n: usize) -> usize {
        ((self.z as usize) << n) | self.x as usize
    }

    pub fn from_index(idx: usize, n: usize) -> Self {
        let mask = (1usize << n) - 1;
        PauliPoint::new((idx >> n) as u64, (idx & mask) as u64)
    }

    /// All `4^n` points in index order.
    pub fn all(n: usize) -> impl Iterator<Item = PauliPoint> {
        (0..1usize << (2 * n)).map(move |i| PauliPoint::from_index(i, n))
    }

    pub fn fits(self, n: usize) -> bool {
        n >= 64 || ((self.z | self.x) >> n) == 0
    }

    /// Lowest set bit in the concatenated `(z, x)` vector, as `0..2n` with
    /// `x` bits first.
    pub fn lowest_bit(self) -> Option<u32> {
        if self.x != 0 {
            Some(self.x.trailing_zeros())
        } else if self.z != 0 {
            Some(64 + self.z.trailing_zeros())
        } else {
            None
        }
    }

    pub fn has_bit(self, bit: u32) -> bool {
        if bit < 64 {
            self.x >> bit & 1 == 1
        } else {
            self.z >> (bit - 64) & 1 == 1
        }
    }

    /// Embed into a larger register, qubit `k` going to `positions[k]`.
    pub fn embed(self, positions: &[usize]) -> Self {
        let mut out = PauliPoint::IDENTITY;
        for (k, &p) in positions.iter().enumerate() {
            out.z |= (self.z >> k & 1) << p;
            out.x |= (self.x >> k & 1) << p;
        }
        out
    }

    pub fn to_letters(self, n: usize) -> String {
        (0..n)
            .map(|q| match self.factor(q) {
                0 => 'I',
                1 => 'X',
                2 => 'Z',
                _ => 'Y',
            })
            .collect()
    }

    pub fn parse_letters(s: &str) -> Result<(usize, Self)> {
        let mut p = PauliPoint::IDENTITY;
        let mut n = 0;
        for (q, ch) in s.chars().enumerate() {
            if q >= MAX_QUBITS {
                return Err(Error::TooManyQubits(q + 1, MAX_QUBITS));
            }
            let f = PauliPoint::single(q, ch.to_ascii_uppercase())
                .ok_or_else(|| Error::InvalidLabel(format!("bad pauli letter {ch:?} in {s:?}")))?;
            p = p + f;
            n = q + 1;
        }
        Ok((n, p))
    }
}

impl std::ops::Add for PauliPoint {
    type Output = PauliPoint;
    fn add(self, rhs: Self) -> Self {
        PauliPoint::new(self.z ^ rhs.z, self.x ^ rhs.x)
    }
}

impl std::ops::AddAssign for PauliPoint {
    fn add_assign(&mut self, rhs: Self) {
        self.z ^= rhs.z;
        self.x ^= rhs.x;
    }
}

impl fmt::Display for PauliPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = (64 - (self.z | self.x).leading_zeros()).max(1) as usize;
        write!(f, "{}", self.to_letters(n))
    }
}

/// Symplectic product `[a,b] = <a_z|b_x> + <a_x|b_z> mod 2`; `true` iff `T_a`
/// and `T_b` anticommute.
pub fn symplectic(a: PauliPoint, b: PauliPoint) -> bool {
    ((a.z & b.x).count_ones() + (a.x & b.z).count_ones()) & 1 == 1
}

/// Phase exponent `e` (mod 4) in `T_a T_b = i^e T_{a+b}`.
pub(crate) fn product_phase(a: PauliPoint, b: PauliPoint) -> u8 {
    let c = a + b;
    let e = c.zx_dot() as i64 - a.zx_dot() as i64 - b.zx_dot() as i64
        + 2 * (a.x & b.z).count_ones() as i64;
    e.rem_euclid(4) as u8
}

/// `beta(a,b)` in `T_a T_b = (-1)^beta T_{a+b}`; defined for commuting pairs.
pub fn beta(a: PauliPoint, b: PauliPoint) -> Result<bool> {
    let e = product_phase(a, b);
    if e & 1 == 1 {
        return Err(Error::Anticommuting(a.to_string(), b.to_string()));
    }
    Ok(e == 2)
}

/// `beta` for pairs already known to commute.
pub(crate) fn beta_unchecked(a: PauliPoint, b: PauliPoint) -> bool {
    debug_assert!(!symplectic(a, b));
    product_phase(a, b) == 2
}
