//! The modified Schläfli graph: the 27-lines graph on vertices `1..=27`
//! plus vertex 28 joined to nine of them.
//!
//! Only the apex neighborhood, two full neighborhoods, two independent sets
//! and the deletion chain are known, so the shipped labeling is the first
//! labeling of [`Graph::schlafli_complement`] found by [`search_fixture`]
//! that satisfies all of them and reproduces the LP value 71/9. Vertex
//! index is label minus one.

use std::collections::BTreeSet;

use crate::combinatorics::{independence_number, maximal_cliques, packing_lp};
use crate::error::{domain, Result};
use crate::graph::{Graph, VertexSet};
use crate::lp::solve;
use crate::scalar::{int, rational};

use super::{DeletionScript, FieldSpec, FittingMatrix};

pub const FIXTURE_TEXT: &str = include_str!("../../fixtures/modified_schlafli.g");
pub const DELETION_SCRIPT_TEXT: &str = include_str!("../../fixtures/appendix_deletions.txt");

pub const N: usize = 28;
pub const APEX: usize = 28;
pub const APEX_NEIGHBORS: [usize; 9] = [1, 2, 3, 4, 5, 11, 12, 23, 27];
pub const INDEPENDENT: [usize; 7] = [8, 9, 13, 15, 19, 25, 28];
pub const NEIGHBORS_6: [usize; 10] = [5, 13, 14, 17, 18, 21, 22, 25, 26, 27];
/// N(17) after the edge (6, 17) is gone.
pub const NEIGHBORS_17: [usize; 9] = [1, 4, 7, 9, 12, 19, 20, 22, 24];
pub const W_6: [usize; 6] = [5, 17, 18, 21, 22, 27];
pub const W_17: [usize; 5] = [1, 4, 12, 22, 24];
pub const RESIDUAL_INDEPENDENT: [usize; 8] = [6, 12, 15, 16, 17, 18, 24, 27];
pub const T_RANK: usize = 7;

fn set(labels: &[usize]) -> VertexSet {
    VertexSet::from_indices(N, labels.iter().map(|l| l - 1)).expect("labels in 1..=28")
}

/// The 27 non-apex vertices.
pub fn t_set() -> VertexSet {
    VertexSet::from_indices(N, 0..27).unwrap()
}

/// The shipped fixture.
pub fn fixture() -> Result<Graph> {
    Graph::parse_text(FIXTURE_TEXT)
}

/// The shipped deletion script, resolved against `g`.
pub fn appendix_script(g: &Graph) -> Result<DeletionScript> {
    DeletionScript::parse_text(DELETION_SCRIPT_TEXT, g)
}

/// The deletion chain as data: `I` with `u = 6` over `W_6`, then `u = 17`
/// over `W_17`, then the residual claim.
pub fn appendix_script_steps() -> DeletionScript {
    let i = set(&INDEPENDENT);
    let steps = W_6
        .iter()
        .map(|&w| (6, w))
        .chain(W_17.iter().map(|&w| (17, w)))
        .map(|(u, w)| super::DeletionStep {
            independent: i.clone(),
            u: u - 1,
            w: w - 1,
        })
        .collect();
    DeletionScript {
        steps,
        claimed: Some(set(&RESIDUAL_INDEPENDENT)),
    }
}

#[derive(Clone, Debug, Default)]
pub struct FixtureReport {
    pub violations: Vec<String>,
}

impl FixtureReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks every textual constraint on the fixture. Fails only on the wrong
/// vertex count; constraint failures are listed in the report.
pub fn validate_fixture(g: &Graph) -> Result<FixtureReport> {
    if g.n() != N {
        return Err(domain(format!("fixture needs {N} vertices, got {}", g.n())));
    }
    let mut v = Vec::new();
    if let Some(labels) = g.labels() {
        if labels
            .iter()
            .enumerate()
            .any(|(i, l)| *l != (i + 1).to_string())
        {
            v.push("labels are not 1..=28 in order".to_string());
        }
    }
    let t = g.induced_subgraph(&t_set())?;
    if !t.is_strongly_regular(27, 10, 1, 5) {
        v.push("vertices 1..=27 do not induce SRG(27,10,1,5)".into());
    }
    let apex: BTreeSet<usize> = g.neighbors(APEX - 1).iter().map(|x| x + 1).collect();
    if apex != APEX_NEIGHBORS.into_iter().collect() {
        v.push(format!("N(28) = {apex:?}"));
    }
    let n6: BTreeSet<usize> = g.neighbors(5).iter().map(|x| x + 1).collect();
    if n6 != NEIGHBORS_6.into_iter().collect() {
        v.push(format!("N(6) = {n6:?}"));
    }
    let n17: BTreeSet<usize> = g
        .neighbors(16)
        .iter()
        .map(|x| x + 1)
        .filter(|&x| x != 6)
        .collect();
    if n17 != NEIGHBORS_17.into_iter().collect() {
        v.push(format!("N(17) minus 6 = {n17:?}"));
    }
    let i = set(&INDEPENDENT);
    if !g.is_independent(&i) {
        v.push("I is not independent".into());
    }
    match independence_number(g) {
        Ok(a) if a == INDEPENDENT.len() => {}
        Ok(a) => v.push(format!("α = {a}, expected 7")),
        Err(e) => v.push(e.to_string()),
    }
    match super::replay_deletion_proof(g, &appendix_script_steps()) {
        Ok(out) if out.alpha_residual == RESIDUAL_INDEPENDENT.len() => {}
        Ok(out) => v.push(format!("residual α = {}, expected 8", out.alpha_residual)),
        Err(e) => v.push(format!("deletion chain: {e}")),
    }
    Ok(FixtureReport { violations: v })
}

/// `A - I` on the 27-lines block, `1` on the apex diagonal, bound to `g`.
/// Rank 8 over ℚ and every odd-characteristic field.
pub fn apex_extended_matrix(g: &Graph, field: FieldSpec) -> Result<FittingMatrix> {
    let t = g.induced_subgraph(&t_set())?;
    let block = FittingMatrix::adjacency_minus_identity(t, field);
    let one = FittingMatrix::identity(Graph::empty(1)?, field);
    block.block_diagonal(&one)?.rebind(g.clone())
}

/// Value of the LP over maximal cliques (bound 1) and `T` (bound 7).
pub fn clique_and_t_value(g: &Graph) -> Result<num_rational::BigRational> {
    let mut rows: Vec<(VertexSet, _)> = maximal_cliques(g)?
        .into_iter()
        .map(|c| (c, int(1)))
        .collect();
    rows.push((t_set(), int(T_RANK as i64)));
    Ok(solve(&packing_lp(g.n(), &rows)?)?.objective)
}

/// Search outcome: the graph, its labeling of the 27-lines construction
/// (`labeling[L - 1]` is the construction vertex carrying label `L`), and
/// the number of complete labelings examined.
#[derive(Clone, Debug)]
pub struct FixtureSearch {
    pub graph: Graph,
    pub labeling: Vec<usize>,
    pub leaves: usize,
}

/// Order in which labels are placed; constrained labels come first.
const ORDER: [usize; 27] = [
    6, 17, 5, 13, 14, 18, 21, 22, 25, 26, 27, 1, 4, 7, 9, 12, 19, 20, 24, 8, 15, 16, 2, 3, 10, 11,
    23,
];

/// Pairwise adjacency requirements between labels.
fn label_constraints() -> Vec<(usize, usize, bool)> {
    let mut pairs = std::collections::BTreeMap::new();
    for x in (1..=27).filter(|&x| x != 6) {
        pairs.insert((6.min(x), 6.max(x)), NEIGHBORS_6.contains(&x));
    }
    for x in (1..=27).filter(|&x| x != 17) {
        pairs.insert((17.min(x), 17.max(x)), x == 6 || NEIGHBORS_17.contains(&x));
    }
    // 6, 17 and 28 are pinned by the neighborhood lists and the apex
    let inner = |s: &[usize]| -> Vec<usize> {
        s.iter()
            .copied()
            .filter(|x| ![6, 17, 28].contains(x))
            .collect()
    };
    for s in [inner(&INDEPENDENT), inner(&RESIDUAL_INDEPENDENT)] {
        for (k, &a) in s.iter().enumerate() {
            for &b in &s[k + 1..] {
                pairs.insert((a.min(b), a.max(b)), false);
            }
        }
    }
    for (ws, js) in [(&W_6[..], [13, 25]), (&W_17[..], [9, 19])] {
        for &w in ws {
            for j in js {
                pairs.insert((w.min(j), w.max(j)), false);
            }
        }
    }
    pairs.into_iter().map(|((a, b), adj)| (a, b, adj)).collect()
}

fn build(base: &Graph, labeling: &[usize]) -> Result<Graph> {
    let mut edges = Vec::new();
    for a in 0..27 {
        for b in a + 1..27 {
            if base.has_edge(labeling[a], labeling[b]) {
                edges.push((a, b));
            }
        }
    }
    edges.extend(APEX_NEIGHBORS.iter().map(|&l| (l - 1, APEX - 1)));
    Graph::from_edges(N, edges)?.with_labels((1..=N).map(|l| l.to_string()).collect())
}

/// Depth-first search over labelings in [`ORDER`], trying construction
/// vertices in ascending order, and returns the first complete labeling
/// that passes [`validate_fixture`] and gives the LP value 71/9.
pub fn search_fixture() -> Result<FixtureSearch> {
    let base = Graph::schlafli_complement();
    let mut checks: Vec<Vec<(usize, bool)>> = vec![Vec::new(); 28];
    let pos = |l: usize| ORDER.iter().position(|&x| x == l).unwrap();
    for (a, b, adj) in label_constraints() {
        let (early, late) = if pos(a) < pos(b) { (a, b) } else { (b, a) };
        checks[late].push((early, adj));
    }
    let mut state = Search {
        base: &base,
        checks: &checks,
        labeling: vec![usize::MAX; 27],
        used: [false; 27],
        leaves: 0,
        found: None,
    };
    state.dfs(0)?;
    let graph = state
        .found
        .ok_or_else(|| domain("no labeling satisfies the constraints"))?;
    Ok(FixtureSearch {
        graph,
        labeling: state.labeling,
        leaves: state.leaves,
    })
}

struct Search<'a> {
    base: &'a Graph,
    checks: &'a [Vec<(usize, bool)>],
    labeling: Vec<usize>,
    used: [bool; 27],
    leaves: usize,
    found: Option<Graph>,
}

impl Search<'_> {
    fn dfs(&mut self, k: usize) -> Result<bool> {
        if k == ORDER.len() {
            self.leaves += 1;
            let g = build(self.base, &self.labeling)?;
            if validate_fixture(&g)?.is_valid() && clique_and_t_value(&g)? == rational(71, 9) {
                self.found = Some(g);
                return Ok(true);
            }
            return Ok(false);
        }
        let label = ORDER[k];
        for v in 0..27 {
            if self.used[v] {
                continue;
            }
            let ok = self.checks[label]
                .iter()
                .all(|&(other, adj)| self.base.has_edge(v, self.labeling[other - 1]) == adj);
            if !ok {
                continue;
            }
            self.labeling[label - 1] = v;
            self.used[v] = true;
            if self.dfs(k + 1)? {
                return Ok(true);
            }
            self.used[v] = false;
            self.labeling[label - 1] = usize::MAX;
        }
        Ok(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_fixture_is_valid() {
        let g = fixture().unwrap();
        let report = validate_fixture(&g).unwrap();
        assert!(report.is_valid(), "{:?}", report.violations);
        assert_eq!(appendix_script(&g).unwrap(), appendix_script_steps());
    }

    #[test]
    fn search_reproduces_shipped_fixture() {
        let found = search_fixture().unwrap();
        assert_eq!(found.graph.to_text(), FIXTURE_TEXT);
        assert_eq!(
            appendix_script_steps().to_text(&found.graph),
            DELETION_SCRIPT_TEXT
        );
        assert_eq!(found.leaves, 5);
    }

    #[test]
    fn flipped_edge_is_rejected() {
        let g = fixture().unwrap();
        let h = g.remove_edge(5, 4).unwrap();
        assert!(!validate_fixture(&h).unwrap().is_valid());
        assert!(validate_fixture(&Graph::schlafli_complement()).is_err());
    }

    #[test]
    fn apex_matrix_has_rank_eight() {
        let g = fixture().unwrap();
        for field in [FieldSpec::Rationals, FieldSpec::Prime(11)] {
            let b = apex_extended_matrix(&g, field).unwrap();
            assert_eq!(super::super::minrank_upper(&g, &b).unwrap(), 8);
        }
    }
}
