//! Graph functions as pluggable oracles, the f* linear program over them,
//! and the combinators built on top.
//!
//! An oracle returns, for an induced subgraph, a certified upper value of
//! some graph function `f`. Its flags describe `f` itself; they decide which
//! bound an f* value may claim (see [`Licence`]).

mod combine;
mod fstar;
mod table;

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::combinatorics::{
    clique_cover_number, fractional_independence, greedy_clique_partition, independence_number,
    MAX_COVER_VERTICES,
};
use crate::error::{domain, Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::minrank::{minrank_exact_small, minrank_upper, FieldSpec, FittingMatrix};
use crate::scalar::{format_rational, int, round_up, to_f64};
use crate::theta::{lovasz_theta, theta_by_components, MAX_THETA_VERTICES};

pub use combine::{
    check_additivity, geometric_mean_oracle, optimize_geometric_mean, simple_fitting_matrix,
    union_bound_corollary, GeometricMeanOracle, GeometricTerm, UnionBound,
};
pub use fstar::{
    counting_check, fstar, fstar_full, fstar_full_with, FStarOracle, FStarResult, SubsetFamily,
    MAX_FULL_VERTICES,
};
pub use table::{
    format_oracle_table, load_minrank_table, parse_oracle_table, path_union_table, CertificateRef,
    TableLine,
};

/// Properties of the function an oracle bounds.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct OracleFlags {
    /// `α(G) <= f(G)` for every graph.
    pub bounds_independence: bool,
    /// `f(G⊠H) <= f(G) f(H)`.
    pub submultiplicative: bool,
    /// `f(G+H) >= f(G) + f(H)`.
    pub superadditive: bool,
    /// `f(C) = 1` for every clique, and the oracle returns exactly 1 there.
    pub clique_value_one: bool,
    /// `β(G) <= f(G)` for the broadcast rate β.
    pub bounds_broadcast: bool,
}

impl OracleFlags {
    pub fn meet(self, other: OracleFlags) -> OracleFlags {
        OracleFlags {
            bounds_independence: self.bounds_independence && other.bounds_independence,
            submultiplicative: self.submultiplicative && other.submultiplicative,
            superadditive: self.superadditive && other.superadditive,
            clique_value_one: self.clique_value_one && other.clique_value_one,
            bounds_broadcast: self.bounds_broadcast && other.bounds_broadcast,
        }
    }
}

/// Why a flag is set or cleared.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlagNote {
    pub flag: &'static str,
    pub reason: String,
}

fn note(flag: &'static str, reason: impl Into<String>) -> FlagNote {
    FlagNote {
        flag,
        reason: reason.into(),
    }
}

/// Which bounds an f* value is entitled to.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Licence {
    /// `Θ(G) <= f*(G)`: needs a submultiplicative upper bound on α.
    pub capacity: bool,
    /// `β(G) <= f*(G)`: needs an upper bound on β.
    pub broadcast: bool,
}

impl Licence {
    pub fn from_flags(flags: OracleFlags) -> Licence {
        Licence {
            capacity: flags.bounds_independence && flags.submultiplicative,
            broadcast: flags.bounds_broadcast,
        }
    }

    pub fn describe(&self) -> &'static str {
        match (self.capacity, self.broadcast) {
            (true, true) => "bounds the Shannon capacity and the broadcast rate",
            (true, false) => "bounds the Shannon capacity",
            (false, true) => "bounds the broadcast rate",
            (false, false) => "LP value only",
        }
    }
}

/// A graph function with certified upper values.
pub trait BoundOracle: Send + Sync {
    fn name(&self) -> String;

    fn flags(&self) -> OracleFlags;

    fn notes(&self) -> Vec<FlagNote>;

    /// Certified upper value of `f(h)`.
    fn evaluate_graph(&self, h: &Graph) -> Result<BigRational>;

    /// Certified upper value of `f(g[s])`.
    fn evaluate(&self, g: &Graph, s: &VertexSet) -> Result<BigRational> {
        self.evaluate_graph(&g.induced_subgraph(s)?)
    }

    fn licence(&self) -> Licence {
        Licence::from_flags(self.flags())
    }
}

/// Encoding of `g[s]` with vertices taken in ascending order.
pub fn subgraph_key(g: &Graph, s: &VertexSet) -> Vec<u64> {
    let members = s.to_vec();
    let mut key = vec![members.len() as u64];
    let mut word = 0u64;
    let mut used = 0;
    for (i, &u) in members.iter().enumerate() {
        for &v in &members[i + 1..] {
            word |= (g.has_edge(u, v) as u64) << used;
            used += 1;
            if used == 64 {
                key.push(word);
                word = 0;
                used = 0;
            }
        }
    }
    key.push(word);
    key
}

/// Thread-safe memo of oracle values keyed by [`subgraph_key`].
#[derive(Debug, Default)]
pub struct Memo {
    map: Mutex<HashMap<Vec<u64>, BigRational>>,
}

impl Memo {
    pub fn get_or_try(
        &self,
        h: &Graph,
        compute: impl FnOnce() -> Result<BigRational>,
    ) -> Result<BigRational> {
        let key = subgraph_key(h, &h.all_vertices());
        if let Some(v) = self.map.lock().expect("memo lock").get(&key) {
            return Ok(v.clone());
        }
        let v = compute()?;
        self.map.lock().expect("memo lock").insert(key, v.clone());
        Ok(v)
    }

    pub fn len(&self) -> usize {
        self.map.lock().expect("memo lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// `χ̄(h)`, or the size of a greedy clique partition above the exact-cover
/// limit. Both are valid upper bounds on minrk over any field.
pub fn clique_cover_upper(h: &Graph) -> Result<usize> {
    if h.n() <= MAX_COVER_VERTICES {
        clique_cover_number(h)
    } else {
        Ok(greedy_clique_partition(h).len())
    }
}

/// α.
#[derive(Clone, Copy, Debug, Default)]
pub struct AlphaOracle;

impl BoundOracle for AlphaOracle {
    fn name(&self) -> String {
        "alpha".into()
    }

    fn flags(&self) -> OracleFlags {
        OracleFlags {
            bounds_independence: true,
            submultiplicative: false,
            superadditive: true,
            clique_value_one: true,
            bounds_broadcast: false,
        }
    }

    fn notes(&self) -> Vec<FlagNote> {
        vec![
            note("bounds_independence", "α bounds itself"),
            note("submultiplicative", "cleared: α(C5⊠C5) = 5 > α(C5)^2 = 4"),
            note("superadditive", "α(G+H) = α(G) + α(H)"),
            note("bounds_broadcast", "cleared: α is a lower bound on β"),
        ]
    }

    fn evaluate_graph(&self, h: &Graph) -> Result<BigRational> {
        Ok(int(independence_number(h)? as i64))
    }
}

/// Fractional independence number α_f = χ̄_f.
#[derive(Clone, Copy, Debug, Default)]
pub struct FractionalAlphaOracle;

impl BoundOracle for FractionalAlphaOracle {
    fn name(&self) -> String {
        "alpha_f".into()
    }

    fn flags(&self) -> OracleFlags {
        OracleFlags {
            bounds_independence: true,
            submultiplicative: true,
            superadditive: true,
            clique_value_one: true,
            bounds_broadcast: true,
        }
    }

    fn notes(&self) -> Vec<FlagNote> {
        vec![
            note(
                "bounds_independence",
                "an independent set is a feasible 0/1 weighting",
            ),
            note(
                "submultiplicative",
                "products of fractional clique covers cover G⊠H",
            ),
            note("superadditive", "α_f(G+H) = α_f(G) + α_f(H)"),
            note(
                "bounds_broadcast",
                "a fractional clique cover is an index code",
            ),
        ]
    }

    fn evaluate_graph(&self, h: &Graph) -> Result<BigRational> {
        Ok(fractional_independence(h)?.value)
    }
}

/// Clique cover number χ̄ (greedy partition above 30 vertices).
#[derive(Clone, Copy, Debug, Default)]
pub struct CliqueCoverOracle;

impl BoundOracle for CliqueCoverOracle {
    fn name(&self) -> String {
        "clique_cover".into()
    }

    fn flags(&self) -> OracleFlags {
        OracleFlags {
            bounds_independence: true,
            submultiplicative: true,
            superadditive: true,
            clique_value_one: true,
            bounds_broadcast: true,
        }
    }

    fn notes(&self) -> Vec<FlagNote> {
        vec![
            note(
                "bounds_independence",
                "each clique holds at most one independent vertex",
            ),
            note(
                "submultiplicative",
                "products of cliques are cliques of G⊠H",
            ),
            note("superadditive", "χ̄(G+H) = χ̄(G) + χ̄(H)"),
            note(
                "bounds_broadcast",
                "sending the XOR of each clique is an index code",
            ),
        ]
    }

    fn evaluate_graph(&self, h: &Graph) -> Result<BigRational> {
        Ok(int(clique_cover_upper(h)? as i64))
    }
}

fn minrank_flags(field: FieldSpec) -> OracleFlags {
    OracleFlags {
        bounds_independence: true,
        submultiplicative: true,
        superadditive: true,
        clique_value_one: true,
        bounds_broadcast: matches!(field, FieldSpec::Prime(_)),
    }
}

fn minrank_notes(field: FieldSpec) -> Vec<FlagNote> {
    let broadcast = match field {
        FieldSpec::Prime(_) => "a fitting matrix over a finite field is a linear index code",
        FieldSpec::Rationals => "cleared: no finite alphabet over Q",
    };
    vec![
        note(
            "bounds_independence",
            "an independent set indexes an identity submatrix",
        ),
        note(
            "submultiplicative",
            "the Kronecker product of fitting matrices fits G⊠H",
        ),
        note(
            "superadditive",
            "minrk over a fixed field is additive on disjoint unions",
        ),
        note("clique_value_one", "the all-ones block fits a clique"),
        note("bounds_broadcast", broadcast),
    ]
}

/// How a minrank table entry is certified.
#[derive(Clone, Debug)]
pub enum EntryCertificate {
    /// A matrix fitting the induced subgraph with rank at most the value.
    Matrix(FittingMatrix),
    /// Exhaustive minrank search on the induced subgraph.
    ExactSearch,
}

#[derive(Clone, Debug)]
pub struct TableEntry {
    pub set: VertexSet,
    pub value: BigRational,
    pub certificate: EntryCertificate,
}

/// minrk over one field: certified table values on one host graph, χ̄
/// everywhere else.
#[derive(Clone, Debug)]
pub struct MinrankOracle {
    field: FieldSpec,
    host: Graph,
    table: HashMap<VertexSet, BigRational>,
}

impl MinrankOracle {
    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn table(&self) -> &HashMap<VertexSet, BigRational> {
        &self.table
    }
}

/// Checks every entry's certificate against `host` and builds the oracle.
pub fn make_minrank_oracle(
    host: &Graph,
    field: FieldSpec,
    entries: Vec<TableEntry>,
) -> Result<MinrankOracle> {
    let mut table = HashMap::new();
    for e in entries {
        let sub = host.induced_subgraph(&e.set)?;
        let uncertified = |reason: String| Error::Oracle {
            oracle: format!("minrank/{field}"),
            reason: format!("entry {} = {}: {reason}", e.set, format_rational(&e.value)),
        };
        let certified = match &e.certificate {
            EntryCertificate::Matrix(m) => {
                if m.field() != field {
                    return Err(uncertified(format!("matrix is over {}", m.field())));
                }
                let m = m.rebind(sub.clone())?;
                let r = minrank_upper(&sub, &m).map_err(|err| uncertified(err.to_string()))?;
                int(r as i64)
            }
            EntryCertificate::ExactSearch => int(minrank_exact_small(&sub, field)?.value as i64),
        };
        if certified > e.value {
            return Err(uncertified(format!(
                "certificate only shows {}",
                format_rational(&certified)
            )));
        }
        if sub.is_clique(&sub.all_vertices()) && !e.value.is_one() {
            return Err(uncertified("cliques must map to 1".into()));
        }
        table.insert(e.set, e.value);
    }
    Ok(MinrankOracle {
        field,
        host: host.clone(),
        table,
    })
}

impl BoundOracle for MinrankOracle {
    fn name(&self) -> String {
        format!("minrank/{}", self.field)
    }

    fn flags(&self) -> OracleFlags {
        minrank_flags(self.field)
    }

    fn notes(&self) -> Vec<FlagNote> {
        minrank_notes(self.field)
    }

    fn evaluate_graph(&self, h: &Graph) -> Result<BigRational> {
        Ok(int(clique_cover_upper(h)? as i64))
    }

    /// Table entries apply only to subsets of the host graph.
    fn evaluate(&self, g: &Graph, s: &VertexSet) -> Result<BigRational> {
        if *g == self.host {
            if let Some(v) = self.table.get(s) {
                return Ok(v.clone());
            }
        }
        self.evaluate_graph(&g.induced_subgraph(s)?)
    }
}

/// Exact minrk on every induced subgraph, within the exact-search limits.
#[derive(Debug)]
pub struct ExactMinrankOracle {
    field: FieldSpec,
    memo: Memo,
}

impl ExactMinrankOracle {
    pub fn new(field: FieldSpec) -> Self {
        ExactMinrankOracle {
            field,
            memo: Memo::default(),
        }
    }
}

impl BoundOracle for ExactMinrankOracle {
    fn name(&self) -> String {
        format!("minrank-exact/{}", self.field)
    }

    fn flags(&self) -> OracleFlags {
        minrank_flags(self.field)
    }

    fn notes(&self) -> Vec<FlagNote> {
        minrank_notes(self.field)
    }

    fn evaluate_graph(&self, h: &Graph) -> Result<BigRational> {
        self.memo.get_or_try(h, || {
            Ok(int(minrank_exact_small(h, self.field)?.value as i64))
        })
    }
}

/// Upper end of the certified ϑ interval, rounded up to the 10^-9 grid.
/// Cliques and edgeless graphs get their exact values 1 and n.
#[derive(Debug)]
pub struct ThetaOracle {
    tolerance: f64,
    memo: Memo,
}

/// Builds a ϑ oracle; fails on a tolerance outside `[1e-9, 1e-3]`.
pub fn make_theta_oracle(tolerance: f64) -> Result<ThetaOracle> {
    if !(crate::theta::MIN_TOLERANCE..=crate::theta::MAX_TOLERANCE).contains(&tolerance) {
        return Err(domain(format!(
            "tolerance {tolerance} outside [1e-9, 1e-3]"
        )));
    }
    Ok(ThetaOracle {
        tolerance,
        memo: Memo::default(),
    })
}

impl ThetaOracle {
    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// Number of distinct subgraphs evaluated so far.
    pub fn memo_size(&self) -> usize {
        self.memo.len()
    }
}

impl BoundOracle for ThetaOracle {
    fn name(&self) -> String {
        "theta".into()
    }

    fn flags(&self) -> OracleFlags {
        OracleFlags {
            bounds_independence: true,
            submultiplicative: true,
            superadditive: false,
            clique_value_one: true,
            bounds_broadcast: false,
        }
    }

    fn notes(&self) -> Vec<FlagNote> {
        vec![
            note("bounds_independence", "α(G) <= ϑ(G)"),
            note("submultiplicative", "ϑ(G⊠H) = ϑ(G) ϑ(H)"),
            note(
                "superadditive",
                "cleared: ϑ is additive, but rounded upper values are not exactly additive",
            ),
            note("clique_value_one", "ϑ(K_m) = 1, returned exactly"),
            note("bounds_broadcast", "cleared: β can exceed ϑ"),
        ]
    }

    fn evaluate_graph(&self, h: &Graph) -> Result<BigRational> {
        if h.edge_count() == 0 {
            return Ok(int(h.n() as i64));
        }
        if h.is_clique(&h.all_vertices()) {
            return Ok(BigRational::one());
        }
        self.memo.get_or_try(h, || {
            let upper = if h.n() <= MAX_THETA_VERTICES {
                lovasz_theta(h, self.tolerance)?.upper
            } else {
                let sum = theta_by_components(h, self.tolerance)?.upper;
                sum + 4.0 * f64::EPSILON * sum.abs() * h.n() as f64
            };
            round_up(upper)
        })
    }
}

/// Lets any oracle be used through a shared handle.
impl<O: BoundOracle + ?Sized> BoundOracle for Arc<O> {
    fn name(&self) -> String {
        (**self).name()
    }

    fn flags(&self) -> OracleFlags {
        (**self).flags()
    }

    fn notes(&self) -> Vec<FlagNote> {
        (**self).notes()
    }

    fn evaluate_graph(&self, h: &Graph) -> Result<BigRational> {
        (**self).evaluate_graph(h)
    }

    fn evaluate(&self, g: &Graph, s: &VertexSet) -> Result<BigRational> {
        (**self).evaluate(g, s)
    }
}

pub(crate) fn check_nonnegative(oracle: &str, s: &VertexSet, v: &BigRational) -> Result<()> {
    if *v < BigRational::zero() {
        return Err(Error::Oracle {
            oracle: oracle.into(),
            reason: format!("negative value {} on {s}", to_f64(v)),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational;

    #[test]
    fn oracle_values_on_small_graphs() {
        let c5 = Graph::cycle(5).unwrap();
        let all = c5.all_vertices();
        assert_eq!(AlphaOracle.evaluate(&c5, &all).unwrap(), int(2));
        assert_eq!(
            FractionalAlphaOracle.evaluate(&c5, &all).unwrap(),
            rational(5, 2)
        );
        assert_eq!(CliqueCoverOracle.evaluate(&c5, &all).unwrap(), int(3));
        let f2 = ExactMinrankOracle::new(FieldSpec::Prime(2));
        assert_eq!(f2.evaluate(&c5, &all).unwrap(), int(3));
        assert_eq!(f2.memo.len(), 1);
    }

    #[test]
    fn theta_oracle_rounds_outward() {
        let o = make_theta_oracle(1e-7).unwrap();
        assert_eq!(o.evaluate_graph(&Graph::empty(1).unwrap()).unwrap(), int(1));
        assert_eq!(
            o.evaluate_graph(&Graph::complete(4).unwrap()).unwrap(),
            int(1)
        );
        assert_eq!(o.evaluate_graph(&Graph::empty(3).unwrap()).unwrap(), int(3));
        let v = to_f64(&o.evaluate_graph(&Graph::cycle(5).unwrap()).unwrap());
        assert!(v >= 5f64.sqrt() && v <= 5f64.sqrt() + 2e-7);
        assert_eq!(o.memo_size(), 1);
        assert!(make_theta_oracle(1.0).is_err());
    }

    #[test]
    fn minrank_table_is_certified() {
        let g = Graph::schlafli_complement();
        let all = g.all_vertices();
        let f11 = FieldSpec::Prime(11);
        let m = FittingMatrix::adjacency_minus_identity(g.clone(), f11);
        let entry = |value| TableEntry {
            set: all.clone(),
            value,
            certificate: EntryCertificate::Matrix(m.clone()),
        };
        let o = make_minrank_oracle(&g, f11, vec![entry(int(7))]).unwrap();
        assert_eq!(o.evaluate(&g, &all).unwrap(), int(7));
        assert!(make_minrank_oracle(&g, f11, vec![entry(int(6))]).is_err());
        assert!(make_minrank_oracle(&g, FieldSpec::Rationals, vec![entry(int(7))]).is_err());
        assert!(o.licence().capacity && o.licence().broadcast);
    }

    #[test]
    fn minrank_fallback_is_clique_cover() {
        let k4 = Graph::complete(4).unwrap();
        let o = make_minrank_oracle(&k4, FieldSpec::Rationals, vec![]).unwrap();
        assert_eq!(o.evaluate(&k4, &k4.all_vertices()).unwrap(), int(1));
        assert!(!o.licence().broadcast);
    }

    #[test]
    fn exact_search_entries() {
        let c5 = Graph::cycle(5).unwrap();
        let all = c5.all_vertices();
        let f2 = FieldSpec::Prime(2);
        let entry = |value| TableEntry {
            set: all.clone(),
            value,
            certificate: EntryCertificate::ExactSearch,
        };
        assert!(make_minrank_oracle(&c5, f2, vec![entry(int(3))]).is_ok());
        assert!(make_minrank_oracle(&c5, f2, vec![entry(int(2))]).is_err());
    }

    #[test]
    fn subgraph_keys_follow_structure() {
        let c5 = Graph::cycle(5).unwrap();
        let a = VertexSet::from_indices(5, [0, 1, 2]).unwrap();
        let b = VertexSet::from_indices(5, [1, 2, 3]).unwrap();
        let c = VertexSet::from_indices(5, [0, 2, 4]).unwrap();
        assert_eq!(subgraph_key(&c5, &a), subgraph_key(&c5, &b));
        assert_ne!(subgraph_key(&c5, &a), subgraph_key(&c5, &c));
    }

    #[test]
    fn licences() {
        assert!(!AlphaOracle.licence().capacity);
        assert!(FractionalAlphaOracle.licence().capacity);
        let t = make_theta_oracle(1e-6).unwrap();
        assert_eq!(t.licence().describe(), "bounds the Shannon capacity");
    }
}
