use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use super::majorana::edge_products;
use crate::error::{Error, Result};
use crate::graphs::SignedBipartiteGraph;
use crate::pauli::{enumerate_maximal_isotropics, IsotropicSubspace, PauliPoint, PhasedPauli};

fn factorial(k: usize) -> BigUint {
    (1..=k).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

/// `f(n,m) = (2m)! (2n-2m)! (2n+1-2m) / (m! (n-m)! 2^n)`: the number of
/// maximal isotropics meeting the Majorana support in `n` points that
/// contain a fixed product of `2m` Majoranas.
pub fn f_counting(n: usize, m: usize) -> Result<BigUint> {
    if m == 0 || m > n {
        return Err(Error::OutOfRange(format!("need 1 <= m <= n, got n={n}, m={m}")));
    }
    let num = factorial(2 * m) * factorial(2 * n - 2 * m) * BigUint::from(2 * n + 1 - 2 * m);
    let den = factorial(m) * factorial(n - m) * (BigUint::one() << n);
    debug_assert!((&num % &den) == BigUint::from(0u8));
    Ok(num / den)
}

/// Subset of the Majoranas (as a bitmask) of even size whose product is
/// proportional to `T_a`.
pub fn even_factorization(a: PauliPoint, majoranas: &[PhasedPauli]) -> Option<u64> {
    let k = majoranas.len();
    if k > 63 {
        return None;
    }
    for mask in 0u64..1 << k {
        if mask.count_ones() % 2 == 1 {
            continue;
        }
        let p = (0..k)
            .filter(|i| mask >> i & 1 == 1)
            .fold(PauliPoint::IDENTITY, |acc, i| acc + majoranas[i].point);
        if p == a {
            return Some(mask);
        }
    }
    None
}

/// Maximal isotropics `I` (unsigned) with `|I ∩ O*| = n`, where `O*` is the
/// set of pairwise products of the `2n+1` Majoranas.
pub fn orthogonal_supports(majoranas: &[PhasedPauli], cap: usize) -> Result<Vec<IsotropicSubspace>> {
    let n = majoranas.len() / 2;
    let support: Vec<PauliPoint> = edge_products(majoranas)?.iter().map(|p| p.point).collect();
    Ok(enumerate_maximal_isotropics(n, cap)?
        .into_iter()
        .filter(|s| support.iter().filter(|p| s.contains(**p)).count() == n)
        .collect())
}

/// `(m, count)`: `a` is a product of `2m` Majoranas and lies in `count` of
/// the [`orthogonal_supports`].
pub fn count_isotropics_containing(a: PauliPoint, majoranas: &[PhasedPauli], cap: usize) -> Result<(usize, usize)> {
    let mask = even_factorization(a, majoranas)
        .filter(|m| *m != 0)
        .ok_or_else(|| Error::InvalidLabel(format!("{a} is not an even Majorana product")))?;
    let m = mask.count_ones() as usize / 2;
    let count = orthogonal_supports(majoranas, cap)?
        .iter()
        .filter(|s| s.contains(a))
        .count();
    Ok((m, count))
}

/// Inclusion graph: left vertices are the nonidentity points in index order,
/// right vertices the orthogonal supports; an edge `a ∈ I` carries the sign
/// `r(a)` of the stabilizer orthogonal to the Majorana operator with signs
/// `eta` (`r = not eta` on `I ∩ O*`, extended by consistency).
pub fn inclusion_graph(
    majoranas: &[PhasedPauli],
    eta: &[bool],
    cap: usize,
) -> Result<(SignedBipartiteGraph, Vec<IsotropicSubspace>)> {
    let n = majoranas.len() / 2;
    let support: Vec<PauliPoint> = edge_products(majoranas)?.iter().map(|p| p.point).collect();
    let mut rights = Vec::new();
    for s in orthogonal_supports(majoranas, cap)? {
        let inter: Vec<(PauliPoint, bool)> = support
            .iter()
            .zip(eta)
            .filter(|(p, _)| s.contains(**p))
            .map(|(&p, &e)| (p, !e))
            .collect();
        // the n intersection points are independent and span I
        rights.push(IsotropicSubspace::new(n, inter)?);
    }
    let mut edges = Vec::new();
    for (j, s) in rights.iter().enumerate() {
        for (p, r) in s.elements() {
            if !p.is_identity() {
                edges.push((p.index(n) - 1, j, r));
            }
        }
    }
    let left = (1usize << (2 * n)) - 1;
    Ok((SignedBipartiteGraph::new(left, rights.len(), edges)?, rights))
}

/// Table row `n`: `f(n, m)` for `m = 1..=n`, then `2^n - 1`.
pub fn table_row(n: usize) -> Result<(Vec<BigUint>, BigUint)> {
    let row = (1..=n).map(|m| f_counting(n, m)).collect::<Result<Vec<_>>>()?;
    Ok((row, (BigUint::one() << n) - BigUint::one()))
}

pub(crate) fn biguint_log2(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().map_or(f64::INFINITY, f64::log2);
    }
    let shift = bits - 64;
    (x >> shift).to_f64().unwrap().log2() + shift as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phasespace::jordan_wigner_majoranas;

    #[test]
    fn table_values() {
        let table: Vec<Vec<u64>> = (1..=5)
            .map(|n| table_row(n).unwrap().0.iter().map(|v| v.to_u64().unwrap()).collect())
            .collect();
        assert_eq!(
            table,
            vec![
                vec![1],
                vec![3, 3],
                vec![15, 9, 15],
                vec![105, 45, 45, 105],
                vec![945, 315, 225, 315, 945],
            ]
        );
        assert!(f_counting(3, 0).is_err());
    }

    #[test]
    fn one_qubit_counts() {
        let c = jordan_wigner_majoranas(3);
        for a in [PauliPoint::new(0, 1), PauliPoint::new(1, 1), PauliPoint::new(1, 0)] {
            assert_eq!(count_isotropics_containing(a, &c, 3).unwrap(), (1, 1));
        }
    }
}
