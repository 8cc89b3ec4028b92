//! Simple undirected graphs, vertex sets, and the graph operators every bound
//! consumes.
//!
//! Graphs are immutable values. Vertices are `0..n`; optional labels carry
//! external names (the modified Schläfli fixture uses labels `"1"..."28"`).

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};

use serde::ser::{Serialize, SerializeSeq, Serializer};

use crate::error::{domain, parse_err, Error, Result};

/// Subset of the vertices of a graph with `n` vertices, stored as a bit mask.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet {
    n: usize,
    words: Vec<u64>,
}

impl VertexSet {
    pub fn empty(n: usize) -> Self {
        VertexSet {
            n,
            words: vec![0; n.div_ceil(64)],
        }
    }

    pub fn full(n: usize) -> Self {
        let mut s = Self::empty(n);
        for v in 0..n {
            s.insert(v);
        }
        s
    }

    pub fn from_indices(n: usize, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut s = Self::empty(n);
        for v in members {
            if v >= n {
                return Err(domain(format!("vertex {v} out of range for n = {n}")));
            }
            s.insert(v);
        }
        Ok(s)
    }

    /// Members of the low 64 vertices given as a mask.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        let mut s = Self::empty(n);
        if !s.words.is_empty() {
            s.words[0] = if n >= 64 {
                mask
            } else {
                mask & ((1u64 << n) - 1)
            };
        }
        s
    }

    /// The set as a single word, when the universe fits in one.
    pub fn as_mask(&self) -> Option<u64> {
        match self.words.len() {
            0 => Some(0),
            1 => Some(self.words[0]),
            _ => None,
        }
    }

    pub fn universe(&self) -> usize {
        self.n
    }

    pub fn insert(&mut self, v: usize) {
        assert!(v < self.n, "vertex {v} out of range for n = {}", self.n);
        self.words[v / 64] |= 1 << (v % 64);
    }

    pub fn remove(&mut self, v: usize) {
        if v < self.n {
            self.words[v / 64] &= !(1 << (v % 64));
        }
    }

    pub fn contains(&self, v: usize) -> bool {
        v < self.n && self.words[v / 64] >> (v % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(i * 64 + b)
                }
            })
        })
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        self.zip(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        self.zip(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        self.zip(other, |a, b| a & !b)
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
            && self.words.len() <= other.words.len()
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    fn zip(&self, other: &VertexSet, op: impl Fn(u64, u64) -> u64) -> VertexSet {
        assert_eq!(self.n, other.n, "vertex sets over different graphs");
        VertexSet {
            n: self.n,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(&a, &b)| op(a, b))
                .collect(),
        }
    }
}

/// Serialized as the ascending list of members.
impl Serialize for VertexSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.len()))?;
        for v in self.iter() {
            seq.serialize_element(&v)?;
        }
        seq.end()
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let members: Vec<String> = self.iter().map(|v| v.to_string()).collect();
        write!(f, "{{{}}}", members.join(","))
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Immutable simple undirected graph.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    adj: Vec<VertexSet>,
    labels: Option<Vec<String>>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n = {}, m = {})", self.n, self.edge_count())
    }
}

impl Graph {
    /// Edgeless graph on `n >= 1` vertices.
    pub fn empty(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(domain("a graph needs at least one vertex"));
        }
        Ok(Graph {
            n,
            adj: vec![VertexSet::empty(n); n],
            labels: None,
        })
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut g = Self::empty(n)?;
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(domain(format!("edge ({u},{v}) out of range for n = {n}")));
            }
            if u == v {
                return Err(domain(format!("self-loop at vertex {u}")));
            }
            g.adj[u].insert(v);
            g.adj[v].insert(u);
        }
        Ok(g)
    }

    /// Builds a graph from a symmetric boolean matrix with zero diagonal.
    pub fn from_adjacency(adjacency: &[Vec<bool>]) -> Result<Self> {
        let n = adjacency.len();
        let mut g = Self::empty(n)?;
        for (i, row) in adjacency.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Dimension(format!(
                    "row {i} has {} entries",
                    row.len()
                )));
            }
            if row[i] {
                return Err(domain(format!("self-loop at vertex {i}")));
            }
            for (j, &a) in row.iter().enumerate() {
                if a != adjacency[j][i] {
                    return Err(domain(format!("adjacency not symmetric at ({i},{j})")));
                }
                if a {
                    g.adj[i].insert(j);
                }
            }
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Result<Self> {
        Self::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
    }

    pub fn path(n: usize) -> Result<Self> {
        Self::from_edges(n, (1..n).map(|v| (v - 1, v)))
    }

    /// The n-cycle, `n >= 3`.
    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(domain(format!("cycle needs n >= 3, got {n}")));
        }
        Self::from_edges(n, (0..n).map(|v| (v, (v + 1) % n)))
    }

    /// Complement of the Schläfli graph: the intersection graph of the 27
    /// lines on a cubic surface, SRG(27,10,1,5).
    ///
    /// Vertex order is `a1..a6`, `b1..b6`, then `c_ij` for `i < j` in
    /// lexicographic order.
    pub fn schlafli_complement() -> Self {
        #[derive(Clone, Copy)]
        enum Line {
            A(usize),
            B(usize),
            C(usize, usize),
        }
        let mut lines: Vec<Line> = (1..=6).map(Line::A).collect();
        lines.extend((1..=6).map(Line::B));
        for i in 1..=6 {
            for j in i + 1..=6 {
                lines.push(Line::C(i, j));
            }
        }
        let meets = |x: Line, y: Line| match (x, y) {
            (Line::A(i), Line::B(j)) | (Line::B(j), Line::A(i)) => i != j,
            (Line::A(i), Line::C(j, k))
            | (Line::C(j, k), Line::A(i))
            | (Line::B(i), Line::C(j, k))
            | (Line::C(j, k), Line::B(i)) => i == j || i == k,
            (Line::C(i, j), Line::C(k, l)) => i != k && i != l && j != k && j != l,
            _ => false,
        };
        let mut edges = Vec::new();
        for u in 0..27 {
            for v in u + 1..27 {
                if meets(lines[u], lines[v]) {
                    edges.push((u, v));
                }
            }
        }
        let labels = lines
            .iter()
            .map(|l| match *l {
                Line::A(i) => format!("a{i}"),
                Line::B(i) => format!("b{i}"),
                Line::C(i, j) => format!("c{i}{j}"),
            })
            .collect();
        Self::from_edges(27, edges)
            .expect("27-lines construction is a valid graph")
            .with_labels(labels)
            .expect("27 labels")
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(Error::Dimension(format!(
                "{} labels for {} vertices",
                labels.len(),
                self.n
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn without_labels(mut self) -> Self {
        self.labels = None;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    pub fn neighbors(&self, v: usize) -> &VertexSet {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| {
            self.adj[u]
                .iter()
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|s| s.len()).sum::<usize>() / 2
    }

    pub fn adjacency_matrix(&self) -> Vec<Vec<bool>> {
        (0..self.n)
            .map(|u| (0..self.n).map(|v| self.has_edge(u, v)).collect())
            .collect()
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Display name of a vertex: its label, or its index.
    pub fn label(&self, v: usize) -> String {
        match &self.labels {
            Some(l) => l[v].clone(),
            None => v.to_string(),
        }
    }

    /// Resolves a vertex token: a label when the graph is labeled, otherwise
    /// a 0-based index.
    pub fn resolve(&self, token: &str) -> Result<usize> {
        let token = token.trim();
        match &self.labels {
            Some(labels) => labels
                .iter()
                .position(|l| l == token)
                .ok_or_else(|| domain(format!("no vertex labeled {token:?}"))),
            None => {
                let v: usize = token
                    .parse()
                    .map_err(|_| domain(format!("not a vertex index: {token:?}")))?;
                if v >= self.n {
                    return Err(domain(format!(
                        "vertex {v} out of range for n = {}",
                        self.n
                    )));
                }
                Ok(v)
            }
        }
    }

    /// `{a,b,...}` with vertex labels.
    pub fn format_set(&self, s: &VertexSet) -> String {
        let names: Vec<String> = s.iter().map(|v| self.label(v)).collect();
        format!("{{{}}}", names.join(","))
    }

    /// Parses `{a,b,...}`, resolving each token with [`Graph::resolve`].
    pub fn parse_set(&self, text: &str) -> Result<VertexSet> {
        let text = text.trim();
        let inner = text
            .strip_prefix('{')
            .and_then(|t| t.strip_suffix('}'))
            .ok_or_else(|| domain(format!("expected {{...}}, found {text:?}")))?;
        let mut s = VertexSet::empty(self.n);
        for tok in inner.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            s.insert(self.resolve(tok)?);
        }
        Ok(s)
    }

    pub fn vertex_set(&self, members: impl IntoIterator<Item = usize>) -> Result<VertexSet> {
        VertexSet::from_indices(self.n, members)
    }

    pub fn all_vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    pub fn is_independent(&self, s: &VertexSet) -> bool {
        s.iter().all(|v| self.adj[v].is_disjoint(s))
    }

    pub fn is_clique(&self, s: &VertexSet) -> bool {
        s.iter()
            .all(|v| s.iter().all(|u| u == v || self.has_edge(u, v)))
    }

    /// Connected components, ordered by smallest member.
    pub fn components(&self) -> Vec<VertexSet> {
        let mut seen = VertexSet::empty(self.n);
        let mut out = Vec::new();
        for start in 0..self.n {
            if seen.contains(start) {
                continue;
            }
            let mut comp = VertexSet::empty(self.n);
            let mut stack = vec![start];
            seen.insert(start);
            while let Some(v) = stack.pop() {
                comp.insert(v);
                for u in self.adj[v].iter() {
                    if !seen.contains(u) {
                        seen.insert(u);
                        stack.push(u);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    /// Strong product with row-major vertex order `(i_g * n_h + i_h)`.
    pub fn strong_product(&self, h: &Graph) -> Graph {
        let (ng, nh) = (self.n, h.n);
        let n = ng * nh;
        let mut adj = vec![VertexSet::empty(n); n];
        for u in 0..ng {
            for up in 0..nh {
                let x = u * nh + up;
                for v in 0..ng {
                    let first = u == v || self.has_edge(u, v);
                    if !first {
                        continue;
                    }
                    for vp in 0..nh {
                        let second = up == vp || h.has_edge(up, vp);
                        let y = v * nh + vp;
                        if second && x != y {
                            adj[x].insert(y);
                        }
                    }
                }
            }
        }
        let labels = match (&self.labels, &h.labels) {
            (Some(a), Some(b)) => Some(
                a.iter()
                    .flat_map(|x| b.iter().map(move |y| format!("({x},{y})")))
                    .collect(),
            ),
            _ => None,
        };
        Graph { n, adj, labels }
    }

    /// Disjoint union; vertices of `h` are shifted by `self.n()`.
    pub fn disjoint_union(&self, h: &Graph) -> Graph {
        let n = self.n + h.n;
        let mut adj = vec![VertexSet::empty(n); n];
        for (u, v) in self.edges() {
            adj[u].insert(v);
            adj[v].insert(u);
        }
        for (u, v) in h.edges() {
            adj[u + self.n].insert(v + self.n);
            adj[v + self.n].insert(u + self.n);
        }
        let labels = match (&self.labels, &h.labels) {
            (Some(a), Some(b)) => Some(a.iter().chain(b).cloned().collect()),
            _ => None,
        };
        Graph { n, adj, labels }
    }

    /// Disjoint union of `copies` copies of `self`.
    pub fn copies(&self, copies: usize) -> Result<Graph> {
        if copies == 0 {
            return Err(domain("need at least one copy"));
        }
        let mut g = self.clone();
        for _ in 1..copies {
            g = g.disjoint_union(self);
        }
        Ok(g)
    }

    /// Subgraph induced by `s`, re-indexed in ascending order of the original
    /// vertices. Labels are carried over when present.
    pub fn induced_subgraph(&self, s: &VertexSet) -> Result<Graph> {
        if s.universe() != self.n {
            return Err(Error::Dimension(format!(
                "vertex set over {} vertices used with a graph on {}",
                s.universe(),
                self.n
            )));
        }
        if s.is_empty() {
            return Err(domain("induced subgraph of the empty set"));
        }
        let members = s.to_vec();
        let k = members.len();
        let mut adj = vec![VertexSet::empty(k); k];
        for (i, &u) in members.iter().enumerate() {
            for (j, &v) in members.iter().enumerate() {
                if self.has_edge(u, v) {
                    adj[i].insert(j);
                }
            }
        }
        let labels = self
            .labels
            .as_ref()
            .map(|l| members.iter().map(|&v| l[v].clone()).collect());
        Ok(Graph { n: k, adj, labels })
    }

    /// Adds one vertex adjacent exactly to `neighbors`.
    pub fn apex_extension(&self, neighbors: &VertexSet) -> Result<Graph> {
        if neighbors.universe() != self.n {
            return Err(Error::Dimension(
                "apex neighbor set over the wrong graph".into(),
            ));
        }
        let n = self.n + 1;
        let mut adj = vec![VertexSet::empty(n); n];
        for (u, v) in self.edges() {
            adj[u].insert(v);
            adj[v].insert(u);
        }
        for v in neighbors.iter() {
            adj[v].insert(self.n);
            adj[self.n].insert(v);
        }
        let labels = self.labels.as_ref().map(|l| {
            let mut l = l.clone();
            l.push(n.to_string());
            l
        });
        Ok(Graph { n, adj, labels })
    }

    pub fn complement(&self) -> Graph {
        let mut adj = vec![VertexSet::empty(self.n); self.n];
        for u in 0..self.n {
            for v in 0..self.n {
                if u != v && !self.has_edge(u, v) {
                    adj[u].insert(v);
                }
            }
        }
        Graph {
            n: self.n,
            adj,
            labels: self.labels.clone(),
        }
    }

    /// `G^k = G^{k-1} ⊠ G`.
    pub fn power(&self, k: usize) -> Result<Graph> {
        if k < 1 {
            return Err(domain("graph power needs k >= 1"));
        }
        let mut g = self.clone();
        for _ in 1..k {
            g = g.strong_product(self);
        }
        Ok(g)
    }

    pub fn remove_edge(&self, u: usize, v: usize) -> Result<Graph> {
        if !self.has_edge(u, v) {
            return Err(domain(format!("no edge ({u},{v}) to remove")));
        }
        let mut g = self.clone();
        g.adj[u].remove(v);
        g.adj[v].remove(u);
        Ok(g)
    }

    /// Checks the strongly-regular parameters `(v, k, lambda, mu)` by
    /// exhaustive common-neighbor counting.
    pub fn is_strongly_regular(&self, v: usize, k: usize, lambda: usize, mu: usize) -> bool {
        if self.n != v || (0..self.n).any(|x| self.degree(x) != k) {
            return false;
        }
        for x in 0..self.n {
            for y in x + 1..self.n {
                let common = self.adj[x].intersection(&self.adj[y]).len();
                let want = if self.has_edge(x, y) { lambda } else { mu };
                if common != want {
                    return false;
                }
            }
        }
        true
    }

    /// Canonical text form: `n m`, sorted `u v` lines, then label lines.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.edge_count());
        for (u, v) in self.edges() {
            let _ = writeln!(out, "{u} {v}");
        }
        if let Some(labels) = &self.labels {
            for (i, l) in labels.iter().enumerate() {
                let _ = writeln!(out, "# label {i} {l}");
            }
        }
        out
    }

    pub fn parse_text(text: &str) -> Result<Graph> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        let (hl, header) = lines
            .next()
            .ok_or_else(|| parse_err(1, "empty graph file"))?;
        let nums: Vec<&str> = header.split_whitespace().collect();
        if nums.len() != 2 {
            return Err(parse_err(hl + 1, "header must be `n m`"));
        }
        let n: usize = nums[0]
            .parse()
            .map_err(|_| parse_err(hl + 1, "bad vertex count"))?;
        let m: usize = nums[1]
            .parse()
            .map_err(|_| parse_err(hl + 1, "bad edge count"))?;
        if n == 0 {
            return Err(parse_err(hl + 1, "a graph needs at least one vertex"));
        }
        let mut edges = BTreeSet::new();
        let mut labels: Vec<Option<String>> = vec![None; n];
        let mut any_label = false;
        for (ln, line) in lines {
            let line = line.trim();
            if let Some(rest) = line.strip_prefix('#') {
                let rest = rest.trim_start();
                if let Some(spec) = rest.strip_prefix("label") {
                    let spec = spec.trim_start();
                    let (idx, name) = spec
                        .split_once(char::is_whitespace)
                        .ok_or_else(|| parse_err(ln + 1, "label line needs `i name`"))?;
                    let i: usize = idx
                        .parse()
                        .map_err(|_| parse_err(ln + 1, "bad label index"))?;
                    if i >= n {
                        return Err(parse_err(ln + 1, "label index out of range"));
                    }
                    labels[i] = Some(name.trim().to_string());
                    any_label = true;
                }
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 2 {
                return Err(parse_err(ln + 1, "edge line must be `u v`"));
            }
            let u: usize = parts[0]
                .parse()
                .map_err(|_| parse_err(ln + 1, "bad endpoint"))?;
            let v: usize = parts[1]
                .parse()
                .map_err(|_| parse_err(ln + 1, "bad endpoint"))?;
            if u >= n || v >= n || u == v {
                return Err(parse_err(ln + 1, format!("invalid edge ({u},{v})")));
            }
            if !edges.insert((u.min(v), u.max(v))) {
                return Err(parse_err(ln + 1, format!("duplicate edge ({u},{v})")));
            }
        }
        if edges.len() != m {
            return Err(parse_err(
                1,
                format!("header says {m} edges, found {}", edges.len()),
            ));
        }
        let g = Graph::from_edges(n, edges)?;
        if any_label {
            let labels = labels
                .into_iter()
                .enumerate()
                .map(|(i, l)| l.ok_or_else(|| parse_err(1, format!("vertex {i} has no label"))))
                .collect::<Result<Vec<_>>>()?;
            g.with_labels(labels)
        } else {
            Ok(g)
        }
    }
}
