use std::collections::HashSet;

use num_traits::{Signed, Zero};

use super::lambda::stabilizers;
use super::operator::PhasePointOperator;
use crate::error::{Error, Result};
use crate::graphs::{frustration_graph, is_line_graph_up_to_twins};
use crate::pauli::PauliPoint;
use crate::scalar::Rational;

pub const DEFAULT_PROJECTED_SUPPORT_CAP: usize = 12;
const MAX_CONSTRAINTS: usize = 128;

/// One inequality `row · c <= rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Inequality {
    pub row: Vec<i64>,
    pub rhs: i64,
}

/// Box constraints `|c_b| <= 1` followed by the distinct nontrivial stabilizer
/// constraints `1 + sum_{a in I ∩ O} (-1)^{r(a)} c_a >= 0`.
pub fn projected_constraints(n: usize, support: &[PauliPoint], cap: usize) -> Result<Vec<Inequality>> {
    let d = support.len();
    let mut out = Vec::new();
    for i in 0..d {
        let mut up = vec![0; d];
        up[i] = 1;
        out.push(Inequality { row: up, rhs: 1 });
        let mut down = vec![0; d];
        down[i] = -1;
        out.push(Inequality { row: down, rhs: 1 });
    }
    let mut seen: HashSet<Vec<i64>> = out.iter().map(|q| q.row.clone()).collect();
    for s in stabilizers(n, cap)? {
        let mut row = vec![0i64; d];
        for (p, r) in s.elements() {
            if let Some(i) = support.iter().position(|q| *q == p) {
                row[i] = if r { 1 } else { -1 };
            }
        }
        if row.iter().any(|&v| v != 0) && seen.insert(row.clone()) {
            out.push(Inequality { row, rhs: 1 });
        }
    }
    Ok(out)
}

/// Rank of a small integer matrix by fraction-free elimination in `i128`.
fn small_rank(rows: &[&[i64]], cols: usize) -> usize {
    let mut m: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&v| v as i128).collect()).collect();
    let mut rank = 0;
    let mut prev: i128 = 1;
    for col in 0..cols {
        let Some(piv) = (rank..m.len()).find(|&r| m[r][col] != 0) else { continue };
        m.swap(rank, piv);
        for r in rank + 1..m.len() {
            for c in col + 1..cols {
                m[r][c] = (m[rank][col] * m[r][c] - m[r][col] * m[rank][c]) / prev;
            }
            m[r][col] = 0;
        }
        prev = m[rank][col];
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

struct Vertex {
    x: Vec<Rational>,
    tight: u128,
}

/// Vertices of `{c : row · c <= rhs}` by the double-description method,
/// starting from the box formed by the first `2d` constraints.
pub fn double_description(d: usize, constraints: &[Inequality]) -> Result<Vec<Vec<Rational>>> {
    if constraints.len() > MAX_CONSTRAINTS {
        return Err(Error::CapExceeded {
            what: "polytope constraints",
            value: constraints.len(),
            cap: MAX_CONSTRAINTS,
        });
    }
    if d > 16 {
        return Err(Error::CapExceeded {
            what: "polytope dimension",
            value: d,
            cap: 16,
        });
    }
    let one = Rational::from_integer(1.into());
    let mut verts: Vec<Vertex> = (0u32..1 << d)
        .map(|mask| {
            let mut tight = 0u128;
            let x = (0..d)
                .map(|i| {
                    if mask >> i & 1 == 1 {
                        tight |= 1 << (2 * i + 1);
                        -one.clone()
                    } else {
                        tight |= 1 << (2 * i);
                        one.clone()
                    }
                })
                .collect();
            Vertex { x, tight }
        })
        .collect();
    let eval = |q: &Inequality, x: &[Rational]| -> Rational {
        q.row
            .iter()
            .zip(x)
            .filter(|(a, _)| **a != 0)
            .fold(Rational::zero(), |acc, (&a, v)| acc + v * Rational::from_integer(a.into()))
            - Rational::from_integer(q.rhs.into())
    };
    for k in 2 * d..constraints.len() {
        let q = &constraints[k];
        let slack: Vec<Rational> = verts.iter().map(|v| eval(q, &v.x)).collect();
        if slack.iter().all(|s| !s.is_positive()) {
            for (v, s) in verts.iter_mut().zip(&slack) {
                if s.is_zero() {
                    v.tight |= 1 << k;
                }
            }
            continue;
        }
        let plus: Vec<usize> = (0..verts.len()).filter(|&i| slack[i].is_positive()).collect();
        let minus: Vec<usize> = (0..verts.len()).filter(|&i| slack[i].is_negative()).collect();
        let mut fresh = Vec::new();
        let mut seen: HashSet<Vec<Rational>> = HashSet::new();
        for &u in &plus {
            for &w in &minus {
                let common = verts[u].tight & verts[w].tight;
                if (common.count_ones() as usize) + 1 < d {
                    continue;
                }
                let rows: Vec<&[i64]> = (0..k)
                    .filter(|&j| common >> j & 1 == 1)
                    .map(|j| constraints[j].row.as_slice())
                    .collect();
                if small_rank(&rows, d) + 1 != d {
                    continue;
                }
                let t = &slack[u] / (&slack[u] - &slack[w]);
                let x: Vec<Rational> = verts[u]
                    .x
                    .iter()
                    .zip(&verts[w].x)
                    .map(|(a, b)| a + &t * (b - a))
                    .collect();
                if seen.insert(x.clone()) {
                    fresh.push(Vertex {
                        x,
                        tight: common | 1 << k,
                    });
                }
            }
        }
        let mut next: Vec<Vertex> = Vec::with_capacity(verts.len());
        for (i, mut v) in verts.into_iter().enumerate() {
            if slack[i].is_zero() {
                v.tight |= 1 << k;
                next.push(v);
            } else if slack[i].is_negative() {
                next.push(v);
            }
        }
        next.extend(fresh);
        verts = next;
    }
    let mut out: Vec<Vec<Rational>> = verts.into_iter().map(|v| v.x).collect();
    out.sort();
    out.dedup();
    Ok(out)
}

/// Extreme points of `{c : A_O^c ∈ Lambda}` for a support `O` (identity
/// excluded), as coefficient vectors aligned with `support`.
pub fn enumerate_projected_vertices(
    n: usize,
    support: &[PauliPoint],
    stabilizer_cap: usize,
    support_cap: usize,
) -> Result<Vec<Vec<Rational>>> {
    if support.len() > support_cap {
        return Err(Error::CapExceeded {
            what: "projected support size",
            value: support.len(),
            cap: support_cap,
        });
    }
    let g = frustration_graph(n, support)?;
    if !is_line_graph_up_to_twins(&g) {
        return Err(Error::InvalidLabel("support frustration graph is not a line graph up to twins".into()));
    }
    let cons = projected_constraints(n, support, stabilizer_cap)?;
    double_description(support.len(), &cons)
}

pub fn projected_operator(n: usize, support: &[PauliPoint], coeffs: &[Rational]) -> Result<PhasePointOperator> {
    PhasePointOperator::new(n, support.iter().copied().zip(coeffs.iter().cloned()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn one_qubit_supports() {
        let z = [PauliPoint::new(1, 0)];
        let v = enumerate_projected_vertices(1, &z, 3, 12).unwrap();
        assert_eq!(v, vec![vec![rat(-1, 1)], vec![rat(1, 1)]]);
        let xyz = [PauliPoint::new(0, 1), PauliPoint::new(1, 1), PauliPoint::new(1, 0)];
        let v = enumerate_projected_vertices(1, &xyz, 3, 12).unwrap();
        assert_eq!(v.len(), 8);
    }

    #[test]
    fn triangle_cut() {
        // x, y <= 1, >= -1 and x + y <= 1
        let cons = vec![
            Inequality { row: vec![1, 0], rhs: 1 },
            Inequality { row: vec![-1, 0], rhs: 1 },
            Inequality { row: vec![0, 1], rhs: 1 },
            Inequality { row: vec![0, -1], rhs: 1 },
            Inequality { row: vec![1, 1], rhs: 1 },
        ];
        let v = double_description(2, &cons).unwrap();
        assert_eq!(
            v,
            vec![
                vec![rat(-1, 1), rat(-1, 1)],
                vec![rat(-1, 1), rat(1, 1)],
                vec![rat(0, 1), rat(1, 1)],
                vec![rat(1, 1), rat(-1, 1)],
                vec![rat(1, 1), rat(0, 1)],
            ]
        );
    }
}
