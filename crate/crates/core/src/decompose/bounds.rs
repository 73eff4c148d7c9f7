use std::cmp::Ordering;
use std::f64::consts::LOG2_E;

use num_traits::Signed;

use super::robustness::{robustness_of_magic, RobustnessReport};
use crate::error::{Error, Result};
use crate::phasespace::{biguint_log2, f_counting, make_theorem2_operator, vertex_check, Theorem2Label};
use crate::scalar::{rat, Rational, Scalar};

pub const COLLINEAR_TOL: f64 = 1e-9;

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn diff(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// `(|a-c| + |b-c|) / |a-b|` for `c` on the line through `a`, `b` but not
/// strictly between them.
pub fn two_point_negativity(a: &[f64], b: &[f64], c: &[f64]) -> Result<f64> {
    for v in [b, c] {
        if v.len() != a.len() {
            return Err(Error::DimensionMismatch {
                expected: a.len(),
                got: v.len(),
            });
        }
    }
    let u = diff(b, a);
    let w = diff(c, a);
    let uu: f64 = u.iter().map(|x| x * x).sum();
    if uu == 0.0 {
        return Err(Error::NotCollinear);
    }
    let t = u.iter().zip(&w).map(|(x, y)| x * y).sum::<f64>() / uu;
    let off: Vec<f64> = w.iter().zip(&u).map(|(y, x)| y - t * x).collect();
    if norm(&off) > COLLINEAR_TOL * norm(&w).max(1.0) {
        return Err(Error::NotCollinear);
    }
    if t > COLLINEAR_TOL && t < 1.0 - COLLINEAR_TOL {
        return Err(Error::OutOfRange("c lies strictly between a and b".into()));
    }
    Ok((norm(&diff(a, c)) + norm(&diff(b, c))) / uu.sqrt())
}

#[derive(Clone, Debug, PartialEq)]
pub struct StirlingVerdict {
    pub n: usize,
    pub m: usize,
    /// `log2(2^n f(n,m))`.
    pub lhs: f64,
    /// `m log2 m + (n-m) log2(n-m) + (2 - log2 e) n - log2(e)/6`.
    pub rhs: f64,
    pub margin: f64,
    pub holds: bool,
    pub exceeds_2n: bool,
}

fn xlog2x(x: usize) -> f64 {
    if x == 0 {
        0.0
    } else {
        x as f64 * (x as f64).log2()
    }
}

pub fn appendix_b_check(n: usize, m: usize) -> Result<StirlingVerdict> {
    let f = f_counting(n, m)?;
    let lhs = n as f64 + biguint_log2(&f);
    let rhs = xlog2x(m) + xlog2x(n - m) + (2.0 - LOG2_E) * n as f64 - LOG2_E / 6.0;
    Ok(StirlingVerdict {
        n,
        m,
        lhs,
        rhs,
        margin: lhs - rhs,
        holds: lhs >= rhs,
        exceeds_2n: lhs > 2.0 * n as f64,
    })
}

/// The bound minimised over `m`: `(2 - log2 e) n + n log2(n/2) - log2(e)/6`.
pub fn stirling_min_bound(n: usize) -> f64 {
    let n = n as f64;
    (2.0 - LOG2_E) * n + n * (n / 2.0).log2() - LOG2_E / 6.0
}

/// Distances between a Majorana point `c`, the closest point `a` of the
/// facet `1 + c.x = 0`, and the origin `b`, for a given squared norm of `c`.
#[derive(Clone, Debug, PartialEq)]
pub struct FacetGeometry {
    pub norm_sq: f64,
    pub a_to_c: f64,
    pub b_to_c: f64,
    pub a_to_b: f64,
    pub negativity: f64,
}

impl FacetGeometry {
    fn from_coords(c: &[f64]) -> Result<Self> {
        let norm_sq: f64 = c.iter().map(|x| x * x).sum();
        let a: Vec<f64> = c.iter().map(|x| -x / norm_sq).collect();
        let b = vec![0.0; c.len()];
        Ok(FacetGeometry {
            norm_sq,
            a_to_c: norm(&diff(&a, c)),
            b_to_c: norm(c),
            a_to_b: norm(&a),
            negativity: two_point_negativity(&a, &b, c)?,
        })
    }
}

#[derive(Clone, Debug)]
pub struct VertexMagicReport {
    pub n: usize,
    pub eta: Vec<bool>,
    pub is_vertex: bool,
    pub robustness_of_magic: RobustnessReport<Rational>,
    /// `n(2n+1)/2 + 1`.
    pub bound: Rational,
    /// Coordinates `c_b / 2`, where `|c|^2 = n(2n+1)/4`.
    pub half_coefficients: FacetGeometry,
    /// Coordinates `c_b = Tr(T_b A)`, where `|c|^2 = n(2n+1)`.
    pub coefficients: FacetGeometry,
    /// `robustness_of_magic` compared with `bound`.
    pub comparison: Ordering,
}

/// Closed form `n^2 + n/2 + 1`.
pub fn facet_ratio_bound(n: usize) -> Rational {
    let n = n as i64;
    rat(2 * n * n + n + 2, 2)
}

pub fn vertex_magic_report(label: &Theorem2Label, cap: usize) -> Result<VertexMagicReport> {
    let op = make_theorem2_operator(label)?;
    let report = vertex_check(&op, cap)?;
    let vector = op.to_vector()?;
    let rom = robustness_of_magic(&vector, cap)?;
    let coords: Vec<f64> = vector.coeffs()[1..].iter().map(|c| c.to_f64()).filter(|c| *c != 0.0).collect();
    let halves: Vec<f64> = coords.iter().map(|c| c / 2.0).collect();
    let bound = facet_ratio_bound(label.n);
    let comparison = (&rom.value - &bound).signum().cmp(&Rational::from_integer(0.into()));
    Ok(VertexMagicReport {
        n: label.n,
        eta: label.eta.clone(),
        is_vertex: report.is_vertex,
        comparison,
        robustness_of_magic: rom,
        bound,
        half_coefficients: FacetGeometry::from_coords(&halves)?,
        coefficients: FacetGeometry::from_coords(&coords)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_example() {
        assert_eq!(two_point_negativity(&[0.0], &[2.0], &[3.0]).unwrap(), 2.0);
        assert!(matches!(
            two_point_negativity(&[0.0, 0.0], &[1.0, 0.0], &[1.0, 1.0]),
            Err(Error::NotCollinear)
        ));
        assert!(two_point_negativity(&[0.0], &[2.0], &[1.0]).is_err());
    }

    #[test]
    fn bound_closed_forms_agree() {
        for n in 1..10 {
            let nn = n as i64;
            assert_eq!(facet_ratio_bound(n), rat(nn * (2 * nn + 1), 2) + rat(1, 1));
        }
        assert_eq!(facet_ratio_bound(2), rat(6, 1));
    }

    #[test]
    fn stirling_check_handles_endpoints() {
        let v = appendix_b_check(6, 6).unwrap();
        assert!(v.holds && v.exceeds_2n);
        assert!(appendix_b_check(3, 0).is_err());
    }
}
