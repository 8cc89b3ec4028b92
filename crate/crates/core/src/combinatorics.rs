//! Independence number, maximal cliques, fractional independence number and
//! clique cover number for graphs with at most 64 vertices.

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::lp::{solve, Constraint, LpCertificate, LpProblem, Relation};
use crate::scalar::int;

pub const MAX_EXACT_VERTICES: usize = 64;
pub const MAX_COVER_VERTICES: usize = 30;

fn check_size(g: &Graph, limit: usize, what: &'static str) -> Result<()> {
    if g.n() > limit {
        return Err(Error::SizeLimit {
            what,
            actual: g.n(),
            limit,
        });
    }
    Ok(())
}

/// Adjacency rows as 64-bit masks.
pub(crate) fn masks(g: &Graph) -> Vec<u64> {
    (0..g.n())
        .map(|v| g.neighbors(v).as_mask().expect("graph fits in 64 bits"))
        .collect()
}

fn bits(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let b = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(b)
        }
    })
}

fn components(adj: &[u64], within: u64) -> Vec<u64> {
    let mut left = within;
    let mut out = Vec::new();
    while left != 0 {
        let mut comp = 1u64 << left.trailing_zeros();
        let mut frontier = comp;
        while frontier != 0 {
            let mut next = 0;
            for v in bits(frontier) {
                next |= adj[v];
            }
            frontier = next & within & !comp;
            comp |= frontier;
        }
        out.push(comp);
        left &= !comp;
    }
    out
}

/// Number of cliques in a greedy clique cover of `p`; an upper bound on the
/// independence number of the subgraph induced by `p`.
fn greedy_cover_bound(adj: &[u64], mut p: u64) -> u32 {
    let mut count = 0;
    while p != 0 {
        let v = p.trailing_zeros() as usize;
        let mut cand = p & adj[v];
        p &= !(1 << v);
        while cand != 0 {
            let u = cand.trailing_zeros() as usize;
            p &= !(1 << u);
            cand &= adj[u];
        }
        count += 1;
    }
    count
}

struct MisSearch<'a> {
    adj: &'a [u64],
    best: u64,
}

impl MisSearch<'_> {
    fn expand(&mut self, current: u64, p: u64) {
        if p == 0 {
            if current.count_ones() > self.best.count_ones() {
                self.best = current;
            }
            return;
        }
        if current.count_ones() + greedy_cover_bound(self.adj, p) <= self.best.count_ones() {
            return;
        }
        let v = p.trailing_zeros() as usize;
        self.expand(current | 1 << v, p & !(1 << v) & !self.adj[v]);
        self.expand(current, p & !(1 << v));
    }
}

/// Exact independence number with a maximum independent set as witness.
///
/// Connected components are solved separately; within a component the
/// search branches on the lowest-index vertex, including it first.
pub fn maximum_independent_set(g: &Graph) -> Result<VertexSet> {
    check_size(
        g,
        MAX_EXACT_VERTICES,
        "vertex count for exact independence number",
    )?;
    let adj = masks(g);
    let all = g.all_vertices().as_mask().expect("n <= 64");
    let mut witness = 0u64;
    for comp in components(&adj, all) {
        let mut s = MisSearch { adj: &adj, best: 0 };
        s.expand(0, comp);
        witness |= s.best;
    }
    Ok(VertexSet::from_mask(g.n(), witness))
}

pub fn independence_number(g: &Graph) -> Result<usize> {
    Ok(maximum_independent_set(g)?.len())
}

fn bron_kerbosch(adj: &[u64], r: u64, mut p: u64, mut x: u64, out: &mut Vec<u64>) {
    if p == 0 {
        if x == 0 {
            out.push(r);
        }
        return;
    }
    let pivot = bits(p | x)
        .max_by_key(|&u| (p & adj[u]).count_ones())
        .expect("p nonempty");
    for v in bits(p & !adj[pivot]) {
        bron_kerbosch(adj, r | 1 << v, p & adj[v], x & adj[v], out);
        p &= !(1 << v);
        x |= 1 << v;
    }
}

fn maximal_clique_masks(adj: &[u64], within: u64) -> Vec<u64> {
    let mut out = Vec::new();
    bron_kerbosch(adj, 0, within, 0, &mut out);
    out
}

/// All maximal cliques, sorted by their sorted member lists.
pub fn maximal_cliques(g: &Graph) -> Result<Vec<VertexSet>> {
    check_size(g, MAX_EXACT_VERTICES, "vertex count for clique enumeration")?;
    let adj = masks(g);
    let mut cliques: Vec<VertexSet> =
        maximal_clique_masks(&adj, g.all_vertices().as_mask().unwrap())
            .into_iter()
            .map(|m| VertexSet::from_mask(g.n(), m))
            .collect();
    cliques.sort_by_key(|c| c.to_vec());
    Ok(cliques)
}

/// Fractional independence number with its certificate. The certificate's
/// dual is a fractional clique cover indexed like `cliques`.
#[derive(Clone, Debug)]
pub struct FractionalIndependence {
    pub value: BigRational,
    pub cliques: Vec<VertexSet>,
    pub certificate: LpCertificate<BigRational>,
}

impl FractionalIndependence {
    pub fn weights(&self) -> &[BigRational] {
        &self.certificate.primal
    }

    pub fn cover(&self) -> &[BigRational] {
        &self.certificate.dual
    }

    /// The LP the certificate answers, rebuilt from `cliques`.
    pub fn problem(&self) -> LpProblem<BigRational> {
        let n = self.weights().len();
        let rows: Vec<_> = self.cliques.iter().map(|c| (c.clone(), int(1))).collect();
        packing_lp(n, &rows).expect("one row per clique")
    }
}

/// Clique-constraint LP over `sets`: maximize Σ w subject to
/// Σ_{x∈S} w(x) <= bound(S).
pub(crate) fn packing_lp(
    n: usize,
    rows: &[(VertexSet, BigRational)],
) -> Result<LpProblem<BigRational>> {
    let constraints = rows
        .iter()
        .map(|(s, b)| Constraint {
            coefficients: (0..n).map(|v| int(s.contains(v) as i64)).collect(),
            relation: Relation::Le,
            rhs: b.clone(),
        })
        .collect();
    LpProblem::new(vec![int(1); n], constraints)
}

/// α_f over maximal cliques (non-maximal clique rows are dominated).
pub fn fractional_independence(g: &Graph) -> Result<FractionalIndependence> {
    let cliques = maximal_cliques(g)?;
    let rows: Vec<_> = cliques.iter().map(|c| (c.clone(), int(1))).collect();
    let lp = packing_lp(g.n(), &rows)?;
    let certificate = solve(&lp)?;
    Ok(FractionalIndependence {
        value: certificate.objective.clone(),
        cliques,
        certificate,
    })
}

fn greedy_independent(adj: &[u64], mut p: u64) -> u32 {
    let mut count = 0;
    while p != 0 {
        let v = p.trailing_zeros() as usize;
        p &= !(1 << v) & !adj[v];
        count += 1;
    }
    count
}

struct CoverSearch<'a> {
    adj: &'a [u64],
    omega: u32,
    best: Vec<u64>,
}

impl CoverSearch<'_> {
    fn lower_bound(&self, uncovered: u64) -> usize {
        let by_size = uncovered.count_ones().div_ceil(self.omega);
        by_size.max(greedy_independent(self.adj, uncovered)) as usize
    }

    fn expand(&mut self, uncovered: u64, current: &mut Vec<u64>) {
        if uncovered == 0 {
            if current.len() < self.best.len() {
                self.best = current.clone();
            }
            return;
        }
        if current.len() + self.lower_bound(uncovered) >= self.best.len() {
            return;
        }
        let v = uncovered.trailing_zeros() as usize;
        let mut options = maximal_clique_masks(self.adj, uncovered & self.adj[v]);
        for c in options.iter_mut() {
            *c |= 1 << v;
        }
        options.sort_by_key(|c| (std::cmp::Reverse(c.count_ones()), *c));
        for c in options {
            current.push(c);
            self.expand(uncovered & !c, current);
            current.pop();
        }
    }
}

/// Minimum clique cover (as a partition into cliques).
pub fn minimum_clique_cover(g: &Graph) -> Result<Vec<VertexSet>> {
    check_size(g, MAX_COVER_VERTICES, "vertex count for exact clique cover")?;
    let adj = masks(g);
    let all = g.all_vertices().as_mask().unwrap();
    let omega = maximal_clique_masks(&adj, all)
        .iter()
        .map(|c| c.count_ones())
        .max()
        .unwrap_or(1);
    let mut search = CoverSearch {
        adj: &adj,
        omega,
        best: greedy_clique_cover(&adj, all),
    };
    search.expand(all, &mut Vec::new());
    let mut cover: Vec<VertexSet> = search
        .best
        .iter()
        .map(|&m| VertexSet::from_mask(g.n(), m))
        .collect();
    cover.sort_by_key(|c| c.to_vec());
    Ok(cover)
}

pub fn clique_cover_number(g: &Graph) -> Result<usize> {
    Ok(minimum_clique_cover(g)?.len())
}

fn greedy_clique_cover(adj: &[u64], mut p: u64) -> Vec<u64> {
    let mut out = Vec::new();
    while p != 0 {
        let v = p.trailing_zeros() as usize;
        let mut clique = 1u64 << v;
        let mut cand = p & adj[v];
        while cand != 0 {
            let u = cand.trailing_zeros() as usize;
            clique |= 1 << u;
            cand &= adj[u];
        }
        p &= !clique;
        out.push(clique);
    }
    out
}

/// A clique partition for graphs of any size, without an optimality claim.
pub fn greedy_clique_partition(g: &Graph) -> Vec<VertexSet> {
    let n = g.n();
    let mut left = g.all_vertices();
    let mut out = Vec::new();
    loop {
        let Some(v) = left.iter().next() else {
            break;
        };
        let mut clique = VertexSet::empty(n);
        clique.insert(v);
        let mut cand = g.neighbors(v).intersection(&left);
        loop {
            let Some(u) = cand.iter().next() else {
                break;
            };
            clique.insert(u);
            cand = cand.intersection(g.neighbors(u));
        }
        left = left.difference(&clique);
        out.push(clique);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational;

    fn brute_alpha(g: &Graph) -> usize {
        let n = g.n();
        (0u64..1 << n)
            .filter(|&m| g.is_independent(&VertexSet::from_mask(n, m)))
            .map(|m| m.count_ones() as usize)
            .max()
            .unwrap()
    }

    /// Smallest k such that the vertices split into k cliques, by trying
    /// every assignment of vertices to k classes.
    fn brute_cover(g: &Graph) -> usize {
        let n = g.n();
        for k in 1..=n {
            let total = k.pow(n as u32);
            for code in 0..total {
                let mut c = code;
                let mut classes = vec![VertexSet::empty(n); k];
                for v in 0..n {
                    classes[c % k].insert(v);
                    c /= k;
                }
                if classes.iter().all(|s| g.is_clique(s)) {
                    return k;
                }
            }
        }
        unreachable!()
    }

    #[test]
    fn independence_examples() {
        assert_eq!(
            independence_number(&Graph::complete(6).unwrap()).unwrap(),
            1
        );
        let c5 = Graph::cycle(5).unwrap();
        assert_eq!(independence_number(&c5.strong_product(&c5)).unwrap(), 5);
        for n in 3..12 {
            let c = Graph::cycle(n).unwrap();
            let w = maximum_independent_set(&c).unwrap();
            assert!(c.is_independent(&w));
            assert_eq!(w.len(), n / 2);
        }
    }

    #[test]
    fn independence_matches_brute_force_on_small_graphs() {
        let g =
            Graph::from_edges(7, [(0, 1), (1, 2), (2, 3), (3, 0), (4, 5), (5, 6), (1, 5)]).unwrap();
        assert_eq!(independence_number(&g).unwrap(), brute_alpha(&g));
        assert_eq!(
            independence_number(&g.complement()).unwrap(),
            brute_alpha(&g.complement())
        );
    }

    #[test]
    fn witness_is_deterministic() {
        let g = Graph::cycle(9).unwrap();
        let a = maximum_independent_set(&g).unwrap();
        let b = maximum_independent_set(&g).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_vec(), vec![0, 2, 4, 6]);
    }

    #[test]
    fn size_limit() {
        let big = Graph::empty(65).unwrap();
        assert!(matches!(
            independence_number(&big),
            Err(Error::SizeLimit { .. })
        ));
        assert!(clique_cover_number(&Graph::empty(31).unwrap()).is_err());
    }

    #[test]
    fn cliques() {
        let c5 = maximal_cliques(&Graph::cycle(5).unwrap()).unwrap();
        assert_eq!(c5.len(), 5);
        assert!(c5.iter().all(|c| c.len() == 2));
        let k4 = maximal_cliques(&Graph::complete(4).unwrap()).unwrap();
        assert_eq!(k4.len(), 1);
        assert_eq!(k4[0].len(), 4);
        let s = Graph::schlafli_complement();
        let sc = maximal_cliques(&s).unwrap();
        assert!(sc.iter().all(|c| c.len() <= 3 && s.is_clique(c)));
        // every edge lies in exactly one triangle when lambda = 1
        assert_eq!(sc.len(), 45);
    }

    #[test]
    fn cliques_are_maximal_and_complete() {
        let g =
            Graph::from_edges(6, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (4, 2), (5, 0)]).unwrap();
        let found = maximal_cliques(&g).unwrap();
        let mut brute = Vec::new();
        for m in 1u64..1 << 6 {
            let s = VertexSet::from_mask(6, m);
            if !g.is_clique(&s) {
                continue;
            }
            let maximal = (0..6).all(|v| {
                s.contains(v) || {
                    let mut t = s.clone();
                    t.insert(v);
                    !g.is_clique(&t)
                }
            });
            if maximal {
                brute.push(s);
            }
        }
        brute.sort_by_key(|c| c.to_vec());
        assert_eq!(found, brute);
    }

    #[test]
    fn fractional_independence_examples() {
        assert_eq!(
            fractional_independence(&Graph::complete(5).unwrap())
                .unwrap()
                .value,
            int(1)
        );
        for n in [5, 7, 9] {
            let r = fractional_independence(&Graph::cycle(n).unwrap()).unwrap();
            assert_eq!(r.value, rational(n as i64, 2));
            let cover_total = r.cover().iter().fold(int(0), |a, b| a + b);
            assert_eq!(cover_total, r.value);
        }
    }

    #[test]
    fn clique_cover_examples() {
        assert_eq!(
            clique_cover_number(&Graph::complete(4).unwrap()).unwrap(),
            1
        );
        assert_eq!(clique_cover_number(&Graph::cycle(5).unwrap()).unwrap(), 3);
        assert_eq!(clique_cover_number(&Graph::empty(6).unwrap()).unwrap(), 6);
        let g = Graph::from_edges(6, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (4, 5)]).unwrap();
        assert_eq!(clique_cover_number(&g).unwrap(), brute_cover(&g));
        assert_eq!(
            clique_cover_number(&Graph::schlafli_complement()).unwrap(),
            9
        );
    }

    #[test]
    fn greedy_partition_is_a_partition_into_cliques() {
        let g = Graph::schlafli_complement()
            .disjoint_union(&Graph::cycle(5).unwrap().copies(7).unwrap());
        let p = greedy_clique_partition(&g);
        let mut seen = VertexSet::empty(g.n());
        for c in &p {
            assert!(g.is_clique(c));
            assert!(c.is_disjoint(&seen));
            seen = seen.union(c);
        }
        assert_eq!(seen.len(), g.n());
    }
}
