use super::graph::Graph;
use crate::error::{Error, Result};

pub const DEFAULT_INDEPENDENCE_CAP: usize = 40;

/// Exact independence number by branch and bound on vertex bitmasks.
pub fn independence_number(g: &Graph, cap: usize) -> Result<usize> {
    Ok(maximum_independent_set(g, cap)?.len())
}

pub fn maximum_independent_set(g: &Graph, cap: usize) -> Result<Vec<usize>> {
    let n = g.vertex_count();
    if n > cap.min(64) {
        return Err(Error::CapExceeded {
            what: "independence vertices",
            value: n,
            cap: cap.min(64),
        });
    }
    let nb: Vec<u64> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u64, |m, &w| m | 1 << w))
        .collect();
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut best = 0u64;
    search(&nb, all, 0, &mut best);
    Ok((0..n).filter(|&v| best >> v & 1 == 1).collect())
}

fn search(nb: &[u64], cand: u64, chosen: u64, best: &mut u64) {
    if cand == 0 {
        if chosen.count_ones() > best.count_ones() {
            *best = chosen;
        }
        return;
    }
    if chosen.count_ones() + cand.count_ones() <= best.count_ones() {
        return;
    }
    // a vertex of degree <= 1 in the candidate graph can always be taken
    let mut pick = None;
    let mut max_v = 0;
    let mut max_d = 0;
    let mut bits = cand;
    while bits != 0 {
        let v = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        let d = (nb[v] & cand).count_ones();
        if d <= 1 {
            pick = Some(v);
            break;
        }
        if d > max_d {
            max_d = d;
            max_v = v;
        }
    }
    if let Some(v) = pick {
        search(nb, cand & !nb[v] & !(1 << v), chosen | 1 << v, best);
        return;
    }
    let v = max_v;
    search(nb, cand & !nb[v] & !(1 << v), chosen | 1 << v, best);
    search(nb, cand & !(1 << v), chosen, best);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_and_line_graphs() {
        assert_eq!(independence_number(&Graph::complete(6), 40).unwrap(), 1);
        for n in 1..=3 {
            let (l, _) = Graph::complete(2 * n + 1).line_graph();
            assert_eq!(independence_number(&l, 40).unwrap(), n);
        }
        assert!(independence_number(&Graph::new(41), 40).is_err());
    }
}
