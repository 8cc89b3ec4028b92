//! Fitting matrices, rank over ℚ and prime fields, and exact minrank for
//! small graphs.
//!
//! Real-valued statements are realized over ℚ: every matrix of interest has
//! rational entries, and rank over ℚ equals rank over ℝ for those.

mod deletion;
pub mod fixture;

pub use deletion::{
    replay_deletion_proof, tims_step, DeletionScript, DeletionStep, ProofOutcome, StepRecord,
    Verdict,
};

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Inv, One, Zero};
use serde::{Deserialize, Serialize};

use crate::combinatorics::{independence_number, minimum_clique_cover};
use crate::error::{domain, parse_err, Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::scalar::{format_rational, int, is_prime, parse_rational, FieldElement, Fp};

/// Field over which fitting matrices are taken.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FieldSpec {
    Rationals,
    Prime(u32),
}

impl FieldSpec {
    /// F_p for a prime `p < 2^31`.
    pub fn prime(p: u64) -> Result<Self> {
        if p >= 1 << 31 || !is_prime(p) {
            return Err(domain(format!("{p} is not a prime below 2^31")));
        }
        Ok(FieldSpec::Prime(p as u32))
    }

    /// Maps a rational into the field. Over F_p the result is an integer in
    /// `0..p`; fails when the denominator vanishes mod p.
    pub fn embed(&self, x: &BigRational) -> Result<BigRational> {
        match *self {
            FieldSpec::Rationals => Ok(x.clone()),
            FieldSpec::Prime(p) => Ok(BigRational::from_integer(BigInt::from(
                to_fp(x, p)?.value(),
            ))),
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::Prime(p) => write!(f, "{p}"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "Q" | "q" | "QQ" | "rationals" => Ok(FieldSpec::Rationals),
            t => {
                let t = t
                    .strip_prefix('F')
                    .or_else(|| t.strip_prefix("GF"))
                    .unwrap_or(t);
                let p: u64 = t
                    .parse()
                    .map_err(|_| domain(format!("unknown field {s:?}")))?;
                FieldSpec::prime(p)
            }
        }
    }
}

fn to_fp(x: &BigRational, p: u32) -> Result<Fp> {
    let reduce = |v: &BigInt| -> i64 {
        let m = v.mod_floor(&BigInt::from(p));
        i64::try_from(m).expect("residue fits in i64")
    };
    let den = reduce(x.denom());
    if den == 0 {
        return Err(domain(format!(
            "{} has a denominator divisible by {p}",
            format_rational(x)
        )));
    }
    Ok(Fp::new(reduce(x.numer()), p) * Fp::new(den, p).inv())
}

/// Rank by Gaussian elimination over any field.
pub fn rank_over<T: FieldElement>(mut rows: Vec<Vec<T>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero_element()) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = rows[rank][c].clone().inv();
        let pivot: Vec<T> = rows[rank].iter().map(|v| v.clone() * inv.clone()).collect();
        for row in rows.iter_mut().skip(rank + 1) {
            if row[c].is_zero_element() {
                continue;
            }
            let factor = row[c].clone();
            for (v, q) in row.iter_mut().zip(&pivot).skip(c) {
                *v = v.clone() - factor.clone() * q.clone();
            }
        }
        rank += 1;
    }
    rank
}

/// Rank over ℚ by fraction-free (Bareiss) elimination on integer rows.
pub fn rank_rational(m: &[Vec<BigRational>]) -> usize {
    let mut a: Vec<Vec<BigInt>> = m
        .iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
            row.iter()
                .map(|v| (v * BigRational::from_integer(l.clone())).to_integer())
                .collect()
        })
        .collect();
    let cols = a.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..a.len()).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        for i in rank + 1..a.len() {
            for j in c + 1..cols {
                let v = &a[rank][c] * &a[i][j] - &a[i][c] * &a[rank][j];
                a[i][j] = v / &prev;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[rank][c].clone();
        rank += 1;
    }
    rank
}

/// Rank of a matrix over the given field.
pub fn rank(m: &[Vec<BigRational>], field: FieldSpec) -> Result<usize> {
    match field {
        FieldSpec::Rationals => Ok(rank_rational(m)),
        FieldSpec::Prime(p) => {
            let rows = m
                .iter()
                .map(|row| row.iter().map(|x| to_fp(x, p)).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            Ok(rank_over(rows))
        }
    }
}

/// Square matrix over a field, bound to the graph it is meant to fit.
/// Prime-field entries are stored as integers in `0..p`.
#[derive(Clone, Debug, PartialEq)]
pub struct FittingMatrix {
    graph: Graph,
    field: FieldSpec,
    entries: Vec<Vec<BigRational>>,
}

impl FittingMatrix {
    pub fn new(graph: Graph, field: FieldSpec, entries: Vec<Vec<BigRational>>) -> Result<Self> {
        let n = graph.n();
        if entries.len() != n || entries.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension(format!("matrix is not {n}x{n}")));
        }
        let entries = entries
            .iter()
            .map(|row| {
                row.iter()
                    .map(|x| field.embed(x))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FittingMatrix {
            graph,
            field,
            entries,
        })
    }

    pub fn identity(graph: Graph, field: FieldSpec) -> Self {
        let n = graph.n();
        let entries = (0..n)
            .map(|i| (0..n).map(|j| int((i == j) as i64)).collect())
            .collect();
        FittingMatrix {
            graph,
            field,
            entries,
        }
    }

    /// `A - I` for the adjacency matrix `A`.
    pub fn adjacency_minus_identity(graph: Graph, field: FieldSpec) -> Self {
        let n = graph.n();
        let entries = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| match (i == j, graph.has_edge(i, j)) {
                        (true, _) => int(-1),
                        (false, true) => int(1),
                        (false, false) => int(0),
                    })
                    .collect()
            })
            .collect();
        Self::new(graph, field, entries).expect("integer entries embed in every field")
    }

    /// Block matrix with an all-ones block per part; rank is the number of
    /// parts.
    pub fn from_clique_partition(
        graph: Graph,
        field: FieldSpec,
        parts: &[VertexSet],
    ) -> Result<Self> {
        let n = graph.n();
        let mut part_of = vec![usize::MAX; n];
        for (k, part) in parts.iter().enumerate() {
            for v in part.iter() {
                if part_of[v] != usize::MAX {
                    return Err(domain(format!("vertex {v} lies in two parts")));
                }
                part_of[v] = k;
            }
        }
        if part_of.contains(&usize::MAX) {
            return Err(domain("parts do not cover every vertex"));
        }
        let entries = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| int((part_of[i] == part_of[j]) as i64))
                    .collect()
            })
            .collect();
        Ok(FittingMatrix {
            graph,
            field,
            entries,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn entries(&self) -> &[Vec<BigRational>] {
        &self.entries
    }

    pub fn n(&self) -> usize {
        self.entries.len()
    }

    pub fn rank(&self) -> usize {
        rank(&self.entries, self.field).expect("entries were embedded at construction")
    }

    /// Every position where the matrix fails to fit its graph.
    pub fn violations(&self) -> Vec<String> {
        let g = &self.graph;
        let mut out = Vec::new();
        for i in 0..self.n() {
            if self.entries[i][i].is_zero() {
                out.push(format!("zero diagonal entry at {}", g.label(i)));
            }
            for j in 0..self.n() {
                if i != j && !g.has_edge(i, j) && !self.entries[i][j].is_zero() {
                    out.push(format!(
                        "nonzero entry at nonadjacent ({}, {})",
                        g.label(i),
                        g.label(j)
                    ));
                }
            }
        }
        out
    }

    /// The same matrix bound to another graph on the same vertices. Fitting
    /// survives adding edges, so a matrix for a spanning subgraph carries over.
    pub fn rebind(&self, graph: Graph) -> Result<Self> {
        if graph.n() != self.n() {
            return Err(Error::Dimension(format!(
                "matrix is {}x{}, graph has {} vertices",
                self.n(),
                self.n(),
                graph.n()
            )));
        }
        Ok(FittingMatrix {
            graph,
            field: self.field,
            entries: self.entries.clone(),
        })
    }

    /// `B ⊗ B'`, bound to the strong product of the two graphs.
    pub fn kronecker(&self, other: &FittingMatrix) -> Result<Self> {
        self.same_field(other)?;
        let (a, b) = (self.n(), other.n());
        let mut entries = vec![vec![int(0); a * b]; a * b];
        for i in 0..a {
            for j in 0..a {
                for k in 0..b {
                    for l in 0..b {
                        entries[i * b + k][j * b + l] = &self.entries[i][j] * &other.entries[k][l];
                    }
                }
            }
        }
        Self::new(self.graph.strong_product(&other.graph), self.field, entries)
    }

    /// `diag(B, B')`, bound to the disjoint union of the two graphs.
    pub fn block_diagonal(&self, other: &FittingMatrix) -> Result<Self> {
        self.same_field(other)?;
        let (a, b) = (self.n(), other.n());
        let mut entries = vec![vec![int(0); a + b]; a + b];
        for i in 0..a {
            entries[i][..a].clone_from_slice(&self.entries[i]);
        }
        for k in 0..b {
            entries[a + k][a..].clone_from_slice(&other.entries[k]);
        }
        Ok(FittingMatrix {
            graph: self.graph.disjoint_union(&other.graph),
            field: self.field,
            entries,
        })
    }

    fn same_field(&self, other: &FittingMatrix) -> Result<()> {
        if self.field != other.field {
            return Err(domain(format!(
                "fields differ: {} vs {}",
                self.field, other.field
            )));
        }
        Ok(())
    }

    /// Text form: `n field` header, then one row per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n(), self.field);
        for row in &self.entries {
            let cells: Vec<String> = row.iter().map(format_rational).collect();
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
        out
    }

    /// Parses the text form and binds the matrix to `graph`. Prime-field
    /// entries must be integers.
    pub fn parse_text(text: &str, graph: Graph) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hl, header) = lines
            .next()
            .ok_or_else(|| parse_err(1, "empty matrix file"))?;
        let mut parts = header.split_whitespace();
        let n: usize = parts
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| parse_err(hl, "expected `n field` header"))?;
        let field: FieldSpec = parts
            .next()
            .ok_or_else(|| parse_err(hl, "missing field"))?
            .parse()
            .map_err(|e: Error| parse_err(hl, e.to_string()))?;
        let mut entries = Vec::with_capacity(n);
        for (ln, line) in lines {
            let row = line
                .split_whitespace()
                .map(|t| {
                    if matches!(field, FieldSpec::Prime(_)) && t.contains(['/', '.']) {
                        return Err(parse_err(
                            ln,
                            format!("prime-field entry {t:?} is not an integer"),
                        ));
                    }
                    parse_rational(t).map_err(|e| parse_err(ln, e.to_string()))
                })
                .collect::<Result<Vec<_>>>()?;
            if row.len() != n {
                return Err(parse_err(
                    ln,
                    format!("expected {n} entries, found {}", row.len()),
                ));
            }
            entries.push(row);
        }
        if entries.len() != n {
            return Err(parse_err(
                0,
                format!("expected {n} rows, found {}", entries.len()),
            ));
        }
        Self::new(graph, field, entries)
    }
}

/// True iff the diagonal is nonzero and every nonadjacent off-diagonal entry
/// is zero.
pub fn check_fits(b: &FittingMatrix) -> bool {
    b.violations().is_empty()
}

/// `rank(b)`, a certified upper bound on minrk over `b`'s field.
pub fn minrank_upper(g: &Graph, b: &FittingMatrix) -> Result<usize> {
    if b.graph() != g {
        return Err(Error::FitViolation(
            "matrix is bound to a different graph".into(),
        ));
    }
    let v = b.violations();
    if !v.is_empty() {
        return Err(Error::FitViolation(v.join("; ")));
    }
    Ok(b.rank())
}

/// Edge limit for the exhaustive search over F_2.
pub const MAX_F2_EDGES: usize = 20;
/// Vertex limit for exact minrank over other fields.
pub const MAX_SANDWICH_VERTICES: usize = 5;

/// How an exact minrank value was certified from below.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExactMethod {
    /// Exhaustive search over F_2 row spaces found no smaller fitting matrix.
    SubspaceSearch,
    /// `max(α(G), ⌈√α(G⊠G)⌉)` meets the clique cover number.
    Sandwich {
        alpha: usize,
        alpha_square: usize,
        clique_cover: usize,
    },
}

#[derive(Clone, Debug)]
pub struct ExactMinrank {
    pub value: usize,
    pub witness: FittingMatrix,
    pub method: ExactMethod,
}

/// Exact minrk over `field`: exhaustive search over F_2 when `|E| <= 20`,
/// otherwise a matching lower/upper pair for graphs on at most 5 vertices.
pub fn minrank_exact_small(g: &Graph, field: FieldSpec) -> Result<ExactMinrank> {
    if field == FieldSpec::Prime(2) && g.edge_count() <= MAX_F2_EDGES && g.n() <= 64 {
        return f2_search(g);
    }
    if g.n() > MAX_SANDWICH_VERTICES {
        return Err(Error::SizeLimit {
            what: "vertex count for exact minrank",
            actual: g.n(),
            limit: MAX_SANDWICH_VERTICES,
        });
    }
    let alpha = independence_number(g)?;
    let alpha_square = independence_number(&g.strong_product(g))?;
    let cover = minimum_clique_cover(g)?;
    let lower = alpha.max(ceil_sqrt(alpha_square));
    if lower != cover.len() {
        return Err(domain(format!(
            "bounds {lower} and {} do not meet",
            cover.len()
        )));
    }
    Ok(ExactMinrank {
        value: lower,
        witness: FittingMatrix::from_clique_partition(g.clone(), field, &cover)?,
        method: ExactMethod::Sandwich {
            alpha,
            alpha_square,
            clique_cover: cover.len(),
        },
    })
}

fn ceil_sqrt(a: usize) -> usize {
    (0..).find(|r: &usize| r * r >= a).unwrap()
}

/// Per component: the smallest `k` for which rows in the allowed patterns
/// span at most `k` dimensions.
fn f2_search(g: &Graph) -> Result<ExactMinrank> {
    let n = g.n();
    let mut rows = vec![0u64; n];
    for comp in g.components() {
        let members = comp.to_vec();
        let sub = g.induced_subgraph(&comp)?;
        let adj: Vec<u64> = (0..sub.n())
            .map(|v| sub.neighbors(v).as_mask().expect("at most 64 vertices"))
            .collect();
        let lower = independence_number(&sub)?;
        let cover = minimum_clique_cover(&sub)?;
        let mut local = None;
        for k in lower..cover.len() {
            let mut search = SpanSearch {
                adj: &adj,
                k,
                rows: Vec::new(),
            };
            if search.dfs(&mut Vec::new()) {
                local = Some(search.rows);
                break;
            }
        }
        let local = local.unwrap_or_else(|| {
            let mut part_rows = vec![0u64; sub.n()];
            for part in &cover {
                let m = part.as_mask().unwrap();
                for v in part.iter() {
                    part_rows[v] = m;
                }
            }
            part_rows
        });
        for (i, &r) in local.iter().enumerate() {
            rows[members[i]] = (0..sub.n())
                .filter(|&j| r >> j & 1 == 1)
                .map(|j| 1u64 << members[j])
                .sum();
        }
    }
    let entries = rows
        .iter()
        .map(|&r| (0..n).map(|j| int((r >> j & 1) as i64)).collect())
        .collect();
    let witness = FittingMatrix::new(g.clone(), FieldSpec::Prime(2), entries)?;
    debug_assert!(check_fits(&witness));
    Ok(ExactMinrank {
        value: witness.rank(),
        witness,
        method: ExactMethod::SubspaceSearch,
    })
}

struct SpanSearch<'a> {
    adj: &'a [u64],
    k: usize,
    rows: Vec<u64>,
}

impl SpanSearch<'_> {
    /// `basis` is kept fully reduced: each pivot bit appears in exactly one
    /// vector, so reduction gives a canonical coset representative.
    fn dfs(&mut self, basis: &mut Vec<u64>) -> bool {
        let i = self.rows.len();
        if i == self.adj.len() {
            return true;
        }
        let free = self.adj[i];
        let mut fresh = Vec::new();
        let mut seen = HashSet::new();
        let mut in_span = None;
        let mut s = 0u64;
        loop {
            let v = s | 1 << i;
            let r = reduce(basis, v);
            if r == 0 {
                in_span.get_or_insert(v);
            } else if basis.len() < self.k && seen.insert(r) {
                fresh.push((v, r));
            }
            // next subset of `free`
            s = s.wrapping_sub(free) & free;
            if s == 0 {
                break;
            }
        }
        // Rows inside the current span leave the search state unchanged, so
        // one representative suffices.
        if let Some(v) = in_span {
            self.rows.push(v);
            if self.dfs(basis) {
                return true;
            }
            self.rows.pop();
        }
        for (v, r) in fresh {
            let saved = basis.clone();
            insert_reduced(basis, r);
            self.rows.push(v);
            if self.dfs(basis) {
                return true;
            }
            self.rows.pop();
            *basis = saved;
        }
        false
    }
}

fn reduce(basis: &[u64], mut v: u64) -> u64 {
    for &b in basis {
        let pivot = 63 - b.leading_zeros();
        if v >> pivot & 1 == 1 {
            v ^= b;
        }
    }
    v
}

fn insert_reduced(basis: &mut Vec<u64>, r: u64) {
    let pivot = 63 - r.leading_zeros();
    for b in basis.iter_mut() {
        if *b >> pivot & 1 == 1 {
            *b ^= r;
        }
    }
    basis.push(r);
}

/// Exact minrank of paths: `⌈k/2⌉` for `P_k`, certified by the F_2 search
/// and, over every field, by `α = χ̄`.
pub fn path_minrank(k: usize) -> usize {
    k.div_ceil(2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational;

    #[test]
    fn schlafli_a_minus_i_has_rank_seven() {
        let g = Graph::schlafli_complement();
        for field in [FieldSpec::Rationals, FieldSpec::Prime(11)] {
            let b = FittingMatrix::adjacency_minus_identity(g.clone(), field);
            assert!(check_fits(&b));
            assert_eq!(minrank_upper(&g, &b).unwrap(), 7, "over {field}");
        }
    }

    #[test]
    fn identity_and_adjacency() {
        let g = Graph::cycle(5).unwrap();
        let id = FittingMatrix::identity(g.clone(), FieldSpec::Rationals);
        assert!(check_fits(&id));
        assert_eq!(id.rank(), 5);
        let mut adj = FittingMatrix::adjacency_minus_identity(g.clone(), FieldSpec::Rationals);
        for (i, row) in adj.entries.iter_mut().enumerate() {
            row[i] = int(0);
        }
        assert!(!check_fits(&adj));
    }

    #[test]
    fn bareiss_matches_generic_elimination() {
        let m = vec![
            vec![rational(1, 2), int(3), int(0)],
            vec![int(1), int(6), int(0)],
            vec![int(2), rational(-1, 3), int(5)],
            vec![int(0), int(0), int(0)],
        ];
        assert_eq!(rank_rational(&m), 2);
        assert_eq!(rank_rational(&m), rank_over(m.clone()));
    }

    #[test]
    fn prime_rank_can_drop() {
        let m = vec![vec![int(1), int(2)], vec![int(3), int(1)]];
        assert_eq!(rank(&m, FieldSpec::Rationals).unwrap(), 2);
        assert_eq!(rank(&m, FieldSpec::Prime(5)).unwrap(), 1);
        let half = vec![vec![rational(1, 5)]];
        assert!(rank(&half, FieldSpec::Prime(5)).is_err());
    }

    #[test]
    fn field_spec_parsing() {
        assert_eq!("Q".parse::<FieldSpec>().unwrap(), FieldSpec::Rationals);
        assert_eq!("11".parse::<FieldSpec>().unwrap(), FieldSpec::Prime(11));
        assert_eq!("F2".parse::<FieldSpec>().unwrap(), FieldSpec::Prime(2));
        assert!("12".parse::<FieldSpec>().is_err());
        assert!(FieldSpec::prime(2_147_483_659).is_err());
    }

    #[test]
    fn exact_small_values() {
        let c5 = Graph::cycle(5).unwrap();
        let r = minrank_exact_small(&c5, FieldSpec::Prime(2)).unwrap();
        assert_eq!(r.value, 3);
        assert!(check_fits(&r.witness));
        assert_eq!(r.method, ExactMethod::SubspaceSearch);
        let q = minrank_exact_small(&c5, FieldSpec::Rationals).unwrap();
        assert_eq!(q.value, 3);
        assert!(matches!(
            q.method,
            ExactMethod::Sandwich {
                alpha_square: 5,
                ..
            }
        ));
        for m in 1..=5 {
            let k = Graph::complete(m).unwrap();
            assert_eq!(
                minrank_exact_small(&k, FieldSpec::Prime(2)).unwrap().value,
                1
            );
            let e = Graph::empty(m).unwrap();
            assert_eq!(
                minrank_exact_small(&e, FieldSpec::Prime(2)).unwrap().value,
                m
            );
        }
        for k in 1..=9 {
            let p = Graph::path(k).unwrap();
            assert_eq!(
                minrank_exact_small(&p, FieldSpec::Prime(2)).unwrap().value,
                path_minrank(k)
            );
        }
    }

    #[test]
    fn exact_small_limits() {
        let big = Graph::complete(8).unwrap();
        assert!(matches!(
            minrank_exact_small(&big, FieldSpec::Rationals),
            Err(Error::SizeLimit { .. })
        ));
        assert!(minrank_exact_small(&big, FieldSpec::Prime(2)).is_err());
    }

    #[test]
    fn kronecker_and_block_diagonal_fit() {
        let c5 = Graph::cycle(5).unwrap();
        let b = minrank_exact_small(&c5, FieldSpec::Prime(2))
            .unwrap()
            .witness;
        let k = b.kronecker(&b).unwrap();
        assert!(check_fits(&k));
        assert_eq!(k.rank(), 9);
        let d = b.block_diagonal(&b).unwrap();
        assert!(check_fits(&d));
        assert_eq!(d.rank(), 6);
        let q = FittingMatrix::identity(c5.clone(), FieldSpec::Rationals);
        assert!(b.kronecker(&q).is_err());
    }

    #[test]
    fn matrix_text_round_trip() {
        let g = Graph::cycle(5).unwrap();
        for field in [FieldSpec::Rationals, FieldSpec::Prime(7)] {
            let b = FittingMatrix::adjacency_minus_identity(g.clone(), field);
            let text = b.to_text();
            let back = FittingMatrix::parse_text(&text, g.clone()).unwrap();
            assert_eq!(back, b);
            assert_eq!(back.to_text(), text);
        }
        assert!(FittingMatrix::parse_text("2 7\n1/2 0\n0 1\n", Graph::empty(2).unwrap()).is_err());
        assert!(FittingMatrix::parse_text("2 Q\n1 0\n", Graph::empty(2).unwrap()).is_err());
    }
}
