use std::collections::BTreeSet;

use super::graph::Graph;

/// A root graph `R` together with the witness: vertex `v` of the input is
/// the root edge `edge_of[v]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineGraphRoot {
    pub root: Graph,
    pub edge_of: Vec<(usize, usize)>,
}

impl LineGraphRoot {
    /// Checks that `L(root)` is isomorphic to `g` through `edge_of`.
    pub fn verify(&self, g: &Graph) -> bool {
        let n = g.vertex_count();
        if self.edge_of.len() != n {
            return false;
        }
        let mut seen = BTreeSet::new();
        for &(a, b) in &self.edge_of {
            let key = (a.min(b), a.max(b));
            if a == b || !self.root.has_edge(a, b) || !seen.insert(key) {
                return false;
            }
        }
        if seen.len() != self.root.edge_count() {
            return false;
        }
        for u in 0..n {
            for v in u + 1..n {
                let (a, b) = self.edge_of[u];
                let (c, d) = self.edge_of[v];
                let share = a == c || a == d || b == c || b == d;
                if share != g.has_edge(u, v) {
                    return false;
                }
            }
        }
        true
    }
}

/// Root graph of a line graph, or `None` when `g` is not a line graph.
/// Disconnected inputs are handled component by component; the root is then
/// the disjoint union of the component roots.
pub fn line_graph_root(g: &Graph) -> Option<LineGraphRoot> {
    let n = g.vertex_count();
    let mut root = Graph::new(0);
    let mut edge_of = vec![(0, 0); n];
    for comp in g.connected_components() {
        let sub = g.induced_subgraph(&comp);
        let r = connected_root(&sub)?;
        let offset = root.vertex_count();
        for v in 0..r.root.vertex_count() {
            root.add_vertex(format!("r{}", offset + v));
        }
        for (a, b) in r.root.edges() {
            root.add_edge(a + offset, b + offset).expect("fresh root vertices");
        }
        for (i, &v) in comp.iter().enumerate() {
            let (a, b) = r.edge_of[i];
            edge_of[v] = (a + offset, b + offset);
        }
    }
    let out = LineGraphRoot { root, edge_of };
    debug_assert!(out.verify(g));
    Some(out)
}

pub fn is_line_graph(g: &Graph) -> bool {
    line_graph_root(g).is_some()
}

fn is_clique(g: &Graph, vs: &[usize]) -> bool {
    vs.iter()
        .enumerate()
        .all(|(i, &u)| vs[i + 1..].iter().all(|&v| g.has_edge(u, v)))
}

fn connected_root(g: &Graph) -> Option<LineGraphRoot> {
    let n = g.vertex_count();
    if n == 0 {
        return Some(LineGraphRoot {
            root: Graph::new(0),
            edge_of: Vec::new(),
        });
    }
    let u = 0;
    for (a, b) in neighbourhood_splits(g, u)? {
        if let Some(r) = propagate(g, u, a, b) {
            if r.verify(g) {
                return Some(r);
            }
        }
    }
    None
}

/// Candidate splits of `N(u)` into two cliques, covering every split that a
/// Krausz partition can induce at `u`.
fn neighbourhood_splits(g: &Graph, u: usize) -> Option<Vec<(Vec<usize>, Vec<usize>)>> {
    let nb: Vec<usize> = g.neighbors(u).iter().copied().collect();
    let k = nb.len();
    // colour the complement of G[N(u)]; each component of size > 1 must be
    // bipartite and contributes one binary choice
    let mut colour: Vec<Option<bool>> = vec![None; k];
    let mut comp_of = vec![usize::MAX; k];
    let mut comps: Vec<Vec<usize>> = Vec::new();
    for s in 0..k {
        if comp_of[s] != usize::MAX {
            continue;
        }
        let id = comps.len();
        comp_of[s] = id;
        colour[s] = Some(false);
        let mut members = vec![s];
        let mut stack = vec![s];
        while let Some(i) = stack.pop() {
            for j in 0..k {
                if i == j || g.has_edge(nb[i], nb[j]) {
                    continue;
                }
                match colour[j] {
                    None => {
                        colour[j] = Some(!colour[i].unwrap());
                        comp_of[j] = id;
                        members.push(j);
                        stack.push(j);
                    }
                    Some(c) if c == colour[i].unwrap() => return None,
                    _ => {}
                }
            }
        }
        comps.push(members);
    }
    let (nontrivial, universal): (Vec<_>, Vec<_>) = comps.into_iter().partition(|c| c.len() > 1);
    // in a line graph at most two complement components are nontrivial
    if nontrivial.len() > 2 {
        return None;
    }
    let universal: Vec<usize> = universal.into_iter().map(|c| nb[c[0]]).collect();
    let mut universal_options: Vec<(Vec<usize>, Vec<usize>)> =
        vec![(universal.clone(), Vec::new()), (Vec::new(), universal.clone())];
    if universal.len() > 1 {
        for &x in &universal {
            let rest: Vec<usize> = universal.iter().copied().filter(|&y| y != x).collect();
            universal_options.push((vec![x], rest.clone()));
            universal_options.push((rest, vec![x]));
        }
    }
    let mut out = Vec::new();
    for flips in 0..1u32 << nontrivial.len() {
        let mut a = Vec::new();
        let mut b = Vec::new();
        for (ci, comp) in nontrivial.iter().enumerate() {
            let flip = flips >> ci & 1 == 1;
            for &i in comp {
                if colour[i].unwrap() ^ flip {
                    b.push(nb[i]);
                } else {
                    a.push(nb[i]);
                }
            }
        }
        for (ua, ub) in &universal_options {
            let mut aa = a.clone();
            aa.extend(ua);
            let mut bb = b.clone();
            bb.extend(ub);
            if is_clique(g, &aa) && is_clique(g, &bb) {
                out.push((aa, bb));
            }
        }
    }
    Some(out)
}

/// Forced extension of the cliques at `u` to a full Krausz partition.
fn propagate(g: &Graph, u: usize, a: Vec<usize>, b: Vec<usize>) -> Option<LineGraphRoot> {
    let n = g.vertex_count();
    let mut cliques: Vec<Vec<usize>> = Vec::new();
    let mut member: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut covered: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut add_clique = |vs: Vec<usize>,
                          cliques: &mut Vec<Vec<usize>>,
                          member: &mut Vec<Vec<usize>>|
     -> Option<()> {
        if !is_clique(g, &vs) {
            return None;
        }
        for (i, &x) in vs.iter().enumerate() {
            for &y in &vs[i + 1..] {
                if !covered.insert((x.min(y), x.max(y))) {
                    return None;
                }
            }
        }
        let id = cliques.len();
        for &x in &vs {
            if member[x].len() == 2 {
                return None;
            }
            member[x].push(id);
        }
        cliques.push(vs);
        Some(())
    };
    let mut first = vec![u];
    first.extend(a);
    add_clique(first, &mut cliques, &mut member)?;
    let mut second = vec![u];
    second.extend(b);
    add_clique(second, &mut cliques, &mut member)?;

    let mut queue: Vec<usize> = vec![u];
    let mut queued = vec![false; n];
    queued[u] = true;
    let mut head = 0;
    while head < queue.len() {
        let v = queue[head];
        head += 1;
        let inside: BTreeSet<usize> = member[v].iter().flat_map(|&c| cliques[c].iter().copied()).collect();
        let rest: Vec<usize> = g
            .neighbors(v)
            .iter()
            .copied()
            .filter(|w| !inside.contains(w))
            .collect();
        if !rest.is_empty() || member[v].len() < 2 {
            if member[v].len() == 2 {
                return None;
            }
            let mut k = vec![v];
            k.extend(rest);
            add_clique(k, &mut cliques, &mut member)?;
        }
        for &w in g.neighbors(v) {
            if !queued[w] {
                queued[w] = true;
                queue.push(w);
            }
        }
    }
    if covered.len() != g.edge_count() || member.iter().any(|m| m.len() != 2) {
        return None;
    }
    // every clique becomes a root vertex; a singleton clique is a pendant end
    let mut root = Graph::new(cliques.len());
    let mut edge_of = Vec::with_capacity(n);
    for m in &member {
        root.add_edge(m[0], m[1]).ok()?;
        edge_of.push((m[0], m[1]));
    }
    Some(LineGraphRoot { root, edge_of })
}
