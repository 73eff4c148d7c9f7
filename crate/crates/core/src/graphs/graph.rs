use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use crate::error::{parse_err, Error, Result};
use crate::pauli::{symplectic, PauliPoint};

/// Simple undirected graph on vertices `0..n` with optional display labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    labels: Vec<String>,
    adj: Vec<BTreeSet<usize>>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph {
            labels: (0..n).map(|v| v.to_string()).collect(),
            adj: vec![BTreeSet::new(); n],
        }
    }

    pub fn with_labels(labels: Vec<String>) -> Self {
        let n = labels.len();
        Graph {
            labels,
            adj: vec![BTreeSet::new(); n],
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn complete(m: usize) -> Self {
        let mut g = Graph::new(m);
        for u in 0..m {
            for v in u + 1..m {
                g.adj[u].insert(v);
                g.adj[v].insert(u);
            }
        }
        g
    }

    pub fn path(m: usize) -> Self {
        let edges: Vec<_> = (1..m).map(|v| (v - 1, v)).collect();
        Graph::from_edges(m, &edges).expect("path edges are valid")
    }

    pub fn add_vertex(&mut self, label: impl Into<String>) -> usize {
        self.labels.push(label.into());
        self.adj.push(BTreeSet::new());
        self.adj.len() - 1
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        let n = self.adj.len();
        if u >= n || v >= n {
            return Err(Error::OutOfRange(format!("edge ({u},{v}) on {n} vertices")));
        }
        if u == v {
            return Err(Error::InvalidLabel(format!("self-loop at {u}")));
        }
        self.adj[u].insert(v);
        self.adj[v].insert(u);
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(BTreeSet::len).sum::<usize>() / 2
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(&v)
    }

    pub fn neighbors(&self, v: usize) -> &BTreeSet<usize> {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Edges `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (u, nb) in self.adj.iter().enumerate() {
            out.extend(nb.range(u + 1..).map(|&v| (u, v)));
        }
        out
    }

    pub fn induced_subgraph(&self, vertices: &[usize]) -> Graph {
        let index: HashMap<usize, usize> = vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut g = Graph::with_labels(vertices.iter().map(|&v| self.labels[v].clone()).collect());
        for (i, &v) in vertices.iter().enumerate() {
            for w in &self.adj[v] {
                if let Some(&j) = index.get(w) {
                    g.adj[i].insert(j);
                }
            }
        }
        g
    }

    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let n = self.adj.len();
        let mut seen = vec![false; n];
        let mut comps = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                for &w in &self.adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().len() <= 1
    }

    /// `L(self)`, with vertex `i` of the result standing for `self.edges()[i]`.
    pub fn line_graph(&self) -> (Graph, Vec<(usize, usize)>) {
        let edges = self.edges();
        let labels = edges
            .iter()
            .map(|&(u, v)| format!("{}-{}", self.labels[u], self.labels[v]))
            .collect();
        let mut l = Graph::with_labels(labels);
        for i in 0..edges.len() {
            for j in i + 1..edges.len() {
                let (a, b) = edges[i];
                let (c, d) = edges[j];
                if a == c || a == d || b == c || b == d {
                    l.adj[i].insert(j);
                    l.adj[j].insert(i);
                }
            }
        }
        (l, edges)
    }

    /// Whether `map` (vertex of `self` to vertex of `other`) is an isomorphism.
    pub fn is_isomorphism(&self, other: &Graph, map: &[usize]) -> bool {
        if self.vertex_count() != other.vertex_count() || map.len() != self.vertex_count() {
            return false;
        }
        let image: BTreeSet<usize> = map.iter().copied().collect();
        if image.len() != map.len() || image.iter().any(|&v| v >= other.vertex_count()) {
            return false;
        }
        self.edge_count() == other.edge_count()
            && self.edges().iter().all(|&(u, v)| other.has_edge(map[u], map[v]))
    }

    /// Edge-list text: one `u v` pair per line; `#` starts a comment.
    pub fn parse_edge_list(text: &str) -> Result<Graph> {
        let mut g = Graph::new(0);
        let mut index: HashMap<String, usize> = HashMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let words: Vec<&str> = line.split_whitespace().collect();
            let mut vertex = |name: &str, g: &mut Graph| {
                *index
                    .entry(name.to_string())
                    .or_insert_with(|| g.add_vertex(name))
            };
            match words.as_slice() {
                [u] => {
                    vertex(u, &mut g);
                }
                [u, v] => {
                    let (a, b) = (vertex(u, &mut g), vertex(v, &mut g));
                    g.add_edge(a, b).map_err(|e| parse_err(i + 1, e.to_string()))?;
                }
                _ => return Err(parse_err(i + 1, "expected `u v`")),
            }
        }
        Ok(g)
    }

    pub fn to_edge_list(&self) -> String {
        let mut s = String::new();
        for (v, nb) in self.adj.iter().enumerate() {
            if nb.is_empty() {
                s.push_str(&format!("{}\n", self.labels[v]));
            }
        }
        for (u, v) in self.edges() {
            s.push_str(&format!("{} {}\n", self.labels[u], self.labels[v]));
        }
        s
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_edge_list())
    }
}

/// Vertex per point, edge between anticommuting points.
pub fn frustration_graph(n: usize, points: &[PauliPoint]) -> Result<Graph> {
    let mut seen = BTreeSet::new();
    for p in points {
        if p.is_identity() {
            return Err(Error::InvalidLabel("identity has no frustration vertex".into()));
        }
        if !seen.insert(*p) {
            return Err(Error::DuplicatePoint(p.to_letters(n)));
        }
    }
    let mut g = Graph::with_labels(points.iter().map(|p| p.to_letters(n)).collect());
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            if symplectic(points[i], points[j]) {
                g.add_edge(i, j)?;
            }
        }
    }
    Ok(g)
}
