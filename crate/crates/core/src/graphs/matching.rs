use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{parse_err, Error, Result};
use crate::linalg::bareiss_rank_i64;

/// Bipartite graph with a sign bit (`true` = negative) on each edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedBipartiteGraph {
    pub left: usize,
    pub right: usize,
    pub edges: Vec<(usize, usize, bool)>,
}

impl SignedBipartiteGraph {
    pub fn new(left: usize, right: usize, edges: Vec<(usize, usize, bool)>) -> Result<Self> {
        for &(l, r, _) in &edges {
            if l >= left || r >= right {
                return Err(Error::OutOfRange(format!("edge ({l},{r}) on {left}+{right} vertices")));
            }
        }
        let mut seen = std::collections::HashSet::new();
        for &(l, r, _) in &edges {
            if !seen.insert((l, r)) {
                return Err(Error::InvalidLabel(format!("repeated edge ({l},{r})")));
            }
        }
        Ok(SignedBipartiteGraph { left, right, edges })
    }

    pub fn with_signs(&self, signs: &[bool]) -> Self {
        SignedBipartiteGraph {
            left: self.left,
            right: self.right,
            edges: self
                .edges
                .iter()
                .zip(signs)
                .map(|(&(l, r, _), &s)| (l, r, s))
                .collect(),
        }
    }

    /// Signed biadjacency matrix `B` (left vertices index rows).
    pub fn biadjacency(&self) -> Vec<Vec<i64>> {
        let mut b = vec![vec![0i64; self.right]; self.left];
        for &(l, r, s) in &self.edges {
            b[l][r] = if s { -1 } else { 1 };
        }
        b
    }

    pub fn rank(&self) -> usize {
        bareiss_rank_i64(&self.biadjacency())
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.left];
        for &(l, r, _) in &self.edges {
            adj[l].push(r);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        adj
    }

    /// Edge-list text: `u v [+|-]`, left vertex first, numeric ids; vertex
    /// counts are inferred from the largest ids.
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut edges = Vec::new();
        let (mut left, mut right) = (0, 0);
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let words: Vec<&str> = line.split_whitespace().collect();
            let num = |w: &str| {
                w.parse::<usize>()
                    .map_err(|_| parse_err(i + 1, format!("bad vertex id {w:?}")))
            };
            let (l, r, s) = match words.as_slice() {
                [l, r] => (num(l)?, num(r)?, false),
                [l, r, s] => {
                    let neg = match *s {
                        "+" => false,
                        "-" | "\u{2212}" => true,
                        other => return Err(parse_err(i + 1, format!("bad sign {other:?}"))),
                    };
                    (num(l)?, num(r)?, neg)
                }
                _ => return Err(parse_err(i + 1, "expected `u v [+|-]`")),
            };
            left = left.max(l + 1);
            right = right.max(r + 1);
            edges.push((l, r, s));
        }
        SignedBipartiteGraph::new(left, right, edges)
    }

    pub fn to_edge_list(&self) -> String {
        self.edges
            .iter()
            .map(|&(l, r, s)| format!("{l} {r} {}\n", if s { '-' } else { '+' }))
            .collect()
    }
}

/// A maximum matching with a König vertex cover of the same size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matching {
    pub pairs: Vec<(usize, usize)>,
    pub cover_left: Vec<usize>,
    pub cover_right: Vec<usize>,
}

impl Matching {
    pub fn size(&self) -> usize {
        self.pairs.len()
    }
}

/// Hopcroft-Karp maximum matching plus the König cover.
pub fn max_bipartite_matching(g: &SignedBipartiteGraph) -> Matching {
    const NIL: usize = usize::MAX;
    let adj = g.adjacency();
    let mut match_l = vec![NIL; g.left];
    let mut match_r = vec![NIL; g.right];
    let mut dist = vec![0usize; g.left];
    loop {
        // layered BFS from free left vertices
        let mut queue = VecDeque::new();
        for l in 0..g.left {
            if match_l[l] == NIL {
                dist[l] = 0;
                queue.push_back(l);
            } else {
                dist[l] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(l) = queue.pop_front() {
            for &r in &adj[l] {
                let m = match_r[r];
                if m == NIL {
                    found = true;
                } else if dist[m] == usize::MAX {
                    dist[m] = dist[l] + 1;
                    queue.push_back(m);
                }
            }
        }
        if !found {
            break;
        }
        fn dfs(
            l: usize,
            adj: &[Vec<usize>],
            match_l: &mut [usize],
            match_r: &mut [usize],
            dist: &mut [usize],
        ) -> bool {
            for &r in &adj[l] {
                let m = match_r[r];
                if m == usize::MAX || (dist[m] == dist[l] + 1 && dfs(m, adj, match_l, match_r, dist)) {
                    match_l[l] = r;
                    match_r[r] = l;
                    return true;
                }
            }
            dist[l] = usize::MAX;
            false
        }
        for l in 0..g.left {
            if match_l[l] == NIL {
                dfs(l, &adj, &mut match_l, &mut match_r, &mut dist);
            }
        }
    }
    // König: Z = vertices reachable from free left vertices by alternating paths
    let mut z_left = vec![false; g.left];
    let mut z_right = vec![false; g.right];
    let mut queue: VecDeque<usize> = (0..g.left).filter(|&l| match_l[l] == NIL).collect();
    for &l in &queue {
        z_left[l] = true;
    }
    while let Some(l) = queue.pop_front() {
        for &r in &adj[l] {
            if !z_right[r] {
                z_right[r] = true;
                let m = match_r[r];
                if m != NIL && !z_left[m] {
                    z_left[m] = true;
                    queue.push_back(m);
                }
            }
        }
    }
    Matching {
        pairs: (0..g.left)
            .filter(|&l| match_l[l] != NIL)
            .map(|l| (l, match_l[l]))
            .collect(),
        cover_left: (0..g.left).filter(|&l| !z_left[l]).collect(),
        cover_right: (0..g.right).filter(|&r| z_right[r]).collect(),
    }
}

/// Outcome of [`signed_rank_search`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SignSearch {
    /// Edge signs (aligned with `edges`) giving rank at least the target.
    Found(Vec<bool>),
    /// No matching of the target order exists, so no signing reaches it.
    Fail,
}

/// Signs on the edges of `g` making its biadjacency matrix reach rational
/// rank `target`.
///
/// A handful of random signings are tried first; if none reaches the target,
/// signs are fixed along a maximum matching so that each leading minor stays
/// nonsingular, which always succeeds once the matching is large enough.
pub fn signed_rank_search(g: &SignedBipartiteGraph, target: usize, seed: u64, tries: usize) -> Result<SignSearch> {
    if target > g.left || g.left > g.right {
        return Err(Error::OutOfRange(format!(
            "need target <= left <= right, got {target}, {}, {}",
            g.left, g.right
        )));
    }
    let matching = max_bipartite_matching(g);
    if matching.size() < target {
        return Ok(SignSearch::Fail);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..tries {
        let signs: Vec<bool> = (0..g.edges.len()).map(|_| rng.random()).collect();
        if g.with_signs(&signs).rank() >= target {
            return Ok(SignSearch::Found(signs));
        }
    }
    let mut signs = vec![false; g.edges.len()];
    let edge_index = |l: usize, r: usize| g.edges.iter().position(|&(a, b, _)| a == l && b == r);
    let pairs = &matching.pairs[..target];
    for k in 0..target {
        let (l, r) = pairs[k];
        let e = edge_index(l, r).expect("matched pair is an edge");
        let minor = |signs: &[bool]| {
            let b = g.with_signs(signs).biadjacency();
            let rows: Vec<Vec<i64>> = pairs[..=k]
                .iter()
                .map(|&(li, _)| pairs[..=k].iter().map(|&(_, rj)| b[li][rj]).collect())
                .collect();
            bareiss_rank_i64(&rows) == k + 1
        };
        if !minor(&signs) {
            signs[e] = true;
            if !minor(&signs) {
                unreachable!("leading minor is affine in one entry with nonzero slope");
            }
        }
    }
    Ok(SignSearch::Found(signs))
}
