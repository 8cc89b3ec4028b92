//! f*: maximize Σ w(x) subject to Σ_{x∈S} w(x) <= f(G_S) over a family of
//! subsets S, solved exactly in its covering form
//! `minimize Σ q(S) f(G_S)` with `Σ_{S∋x} q(S) >= 1`.
//!
//! A family that omits subsets drops primal constraints, so the value can
//! only grow: every restricted optimum is an upper bound on the true f*.

use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::{check_nonnegative, BoundOracle, FlagNote, Licence, Memo, OracleFlags};
use crate::combinatorics::{maximal_cliques, maximum_independent_set};
use crate::error::{domain, parse_err, Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::lp::{solve, Constraint, LpCertificate, LpProblem, LpStatus, Relation};
use crate::scalar::int;

/// Vertex limit for enumerating all subsets.
pub const MAX_FULL_VERTICES: usize = 16;

/// Distinct nonempty vertex subsets of one graph, in insertion order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetFamily {
    n: usize,
    sets: Vec<VertexSet>,
}

impl SubsetFamily {
    pub fn new(n: usize, sets: impl IntoIterator<Item = VertexSet>) -> Result<Self> {
        let mut family = SubsetFamily {
            n,
            sets: Vec::new(),
        };
        family.extend(sets)?;
        Ok(family)
    }

    pub fn extend(&mut self, sets: impl IntoIterator<Item = VertexSet>) -> Result<()> {
        for s in sets {
            if s.universe() != self.n {
                return Err(Error::Dimension(format!(
                    "subset over {} vertices in a family over {}",
                    s.universe(),
                    self.n
                )));
            }
            if s.is_empty() {
                return Err(domain("families may not contain the empty set"));
            }
            if !self.sets.contains(&s) {
                self.sets.push(s);
            }
        }
        Ok(())
    }

    pub fn maximal_cliques(g: &Graph) -> Result<Self> {
        Self::new(g.n(), maximal_cliques(g)?)
    }

    /// Every nonempty subset, for at most 16 vertices.
    pub fn all_subsets(g: &Graph) -> Result<Self> {
        check_full_size(g)?;
        let sets = (1u64..1 << g.n())
            .map(|m| VertexSet::from_mask(g.n(), m))
            .collect();
        Ok(SubsetFamily { n: g.n(), sets })
    }

    /// Maximal cliques, the whole vertex set, then `extra`.
    pub fn default_for(g: &Graph, extra: impl IntoIterator<Item = VertexSet>) -> Result<Self> {
        let mut f = Self::maximal_cliques(g)?;
        f.extend([g.all_vertices()])?;
        f.extend(extra)?;
        Ok(f)
    }

    pub fn universe(&self) -> usize {
        self.n
    }

    pub fn sets(&self) -> &[VertexSet] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// Every vertex lies in some member. Without this the covering LP is
    /// infeasible and the packing LP unbounded.
    pub fn covers(&self) -> bool {
        let mut seen = VertexSet::empty(self.n);
        for s in &self.sets {
            seen = seen.union(s);
        }
        seen.len() == self.n
    }

    /// One `{a,b,...}` per line; `#` starts a comment.
    pub fn parse_text(text: &str, g: &Graph) -> Result<Self> {
        let mut sets = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            sets.push(
                g.parse_set(line)
                    .map_err(|e| parse_err(i + 1, e.to_string()))?,
            );
        }
        Self::new(g.n(), sets)
    }

    pub fn to_text(&self, g: &Graph) -> String {
        self.sets.iter().map(|s| g.format_set(s) + "\n").collect()
    }
}

fn check_full_size(g: &Graph) -> Result<()> {
    if g.n() > MAX_FULL_VERTICES {
        return Err(Error::SizeLimit {
            what: "vertex count for all-subsets f*",
            actual: g.n(),
            limit: MAX_FULL_VERTICES,
        });
    }
    if g.n() == 0 {
        return Err(domain("f* of the empty graph"));
    }
    Ok(())
}

/// Optimal f* over a family with both LP solutions.
#[derive(Clone, Debug, Serialize)]
pub struct FStarResult {
    #[serde(serialize_with = "crate::scalar::rational_text::serialize")]
    pub value: BigRational,
    pub oracle: String,
    pub family: Vec<VertexSet>,
    /// `f(G_S)` per family member.
    #[serde(serialize_with = "crate::scalar::rational_text::serialize_vec")]
    pub values: Vec<BigRational>,
    /// Primal vertex weights.
    #[serde(serialize_with = "crate::scalar::rational_text::serialize_vec")]
    pub weights: Vec<BigRational>,
    /// Fractional cover `q(S)` per family member.
    #[serde(serialize_with = "crate::scalar::rational_text::serialize_vec")]
    pub cover: Vec<BigRational>,
    pub licence: Licence,
}

impl FStarResult {
    /// Members with `q(S) > 0`, with their weights and values.
    pub fn support(&self) -> impl Iterator<Item = (&VertexSet, &BigRational, &BigRational)> {
        self.family
            .iter()
            .zip(&self.cover)
            .zip(&self.values)
            .filter(|((_, q), _)| !q.is_zero())
            .map(|((s, q), f)| (s, q, f))
    }

    /// Re-checks both solutions and the value in exact arithmetic.
    pub fn verify(&self) -> bool {
        let n = self.weights.len();
        let m = self.family.len();
        if self.values.len() != m || self.cover.len() != m {
            return false;
        }
        let zero = BigRational::zero();
        if self.cover.iter().chain(&self.weights).any(|x| *x < zero) {
            return false;
        }
        for x in 0..n {
            let covered: BigRational = self
                .family
                .iter()
                .zip(&self.cover)
                .filter(|(s, _)| s.contains(x))
                .map(|(_, q)| q.clone())
                .sum();
            if covered < BigRational::one() {
                return false;
            }
        }
        for (s, f) in self.family.iter().zip(&self.values) {
            let load: BigRational = s.iter().map(|x| self.weights[x].clone()).sum();
            if load > *f {
                return false;
            }
        }
        let dual: BigRational = self
            .cover
            .iter()
            .zip(&self.values)
            .map(|(q, f)| q * f)
            .sum();
        let primal: BigRational = self.weights.iter().cloned().sum();
        dual == self.value && primal == self.value
    }
}

fn evaluate_all(g: &Graph, f: &dyn BoundOracle, sets: &[VertexSet]) -> Result<Vec<BigRational>> {
    let name = f.name();
    sets.par_iter()
        .map(|s| {
            let v = f.evaluate(g, s)?;
            check_nonnegative(&name, s, &v)?;
            Ok(v)
        })
        .collect()
}

fn solve_family(
    g: &Graph,
    f: &dyn BoundOracle,
    family: Vec<VertexSet>,
    values: Vec<BigRational>,
) -> Result<FStarResult> {
    let n = g.n();
    let constraints = (0..n)
        .map(|x| Constraint {
            coefficients: family.iter().map(|s| int(s.contains(x) as i64)).collect(),
            relation: Relation::Ge,
            rhs: int(1),
        })
        .collect();
    let objective = values.iter().map(|v| -v.clone()).collect();
    let lp = LpProblem::new(objective, constraints)?;
    let cert: LpCertificate<BigRational> = solve(&lp)?;
    if cert.status != LpStatus::Optimal {
        return Err(domain(format!("covering LP is {:?}", cert.status)));
    }
    let result = FStarResult {
        value: -cert.objective,
        oracle: f.name(),
        family,
        values,
        weights: cert.dual.into_iter().map(|y| -y).collect(),
        cover: cert.primal,
        licence: f.licence(),
    };
    if !result.verify() {
        return Err(Error::Certificate(
            "f* solutions failed re-verification".into(),
        ));
    }
    Ok(result)
}

/// f* over `family`. The value is at least the true f*(g); with a capacity
/// licence it bounds Θ(g), with a broadcast licence it bounds β(g).
pub fn fstar(g: &Graph, f: &dyn BoundOracle, family: &SubsetFamily) -> Result<FStarResult> {
    if family.universe() != g.n() {
        return Err(Error::Dimension("family and graph differ in size".into()));
    }
    if !family.covers() {
        return Err(domain("family does not cover every vertex"));
    }
    let values = evaluate_all(g, f, family.sets())?;
    solve_family(g, f, family.sets().to_vec(), values)
}

/// The true f*(g) over all subsets, with dominated constraints pruned.
pub fn fstar_full(g: &Graph, f: &dyn BoundOracle) -> Result<FStarResult> {
    fstar_full_with(g, f, true)
}

/// [`fstar_full`] with pruning switchable. `S` is pruned when some proper
/// superset `S'` has `f(G_S') <= f(G_S)`: with `w >= 0` the constraint for
/// `S'` implies the one for `S`.
pub fn fstar_full_with(g: &Graph, f: &dyn BoundOracle, prune: bool) -> Result<FStarResult> {
    check_full_size(g)?;
    let n = g.n();
    let full = (1usize << n) - 1;
    let sets: Vec<VertexSet> = (1..=full)
        .map(|m| VertexSet::from_mask(n, m as u64))
        .collect();
    let mut values = evaluate_all(g, f, &sets)?;
    values.insert(0, BigRational::zero());
    let keep: Vec<usize> = if prune {
        // best[m] = min f over supersets of m, m included.
        let mut best = values.clone();
        let mut keep = Vec::new();
        for m in (1..=full).rev() {
            let mut sup_min: Option<BigRational> = None;
            for v in (0..n).filter(|v| m & (1 << v) == 0) {
                let b = &best[m | 1 << v];
                if sup_min.as_ref().is_none_or(|s| b < s) {
                    sup_min = Some(b.clone());
                }
            }
            match sup_min {
                Some(s) if s <= values[m] => best[m] = s,
                Some(s) => {
                    keep.push(m);
                    best[m] = s.min(values[m].clone());
                }
                None => keep.push(m),
            }
        }
        keep.reverse();
        keep
    } else {
        (1..=full).collect()
    };
    let family = keep.iter().map(|&m| sets[m - 1].clone()).collect();
    let kept_values = keep.iter().map(|&m| values[m].clone()).collect();
    solve_family(g, f, family, kept_values)
}

/// Re-derives `|Γ| <= value` for independent sets Γ by counting:
/// `|Γ| <= Σ_S q(S) |Γ∩S| <= Σ_S q(S) f(G_S)`, the second step needing
/// `|Γ∩S| <= f(G_S)`. Checks every maximal independent set up to 20
/// vertices and a maximum one above that.
pub fn counting_check(g: &Graph, r: &FStarResult) -> Result<bool> {
    let sets = if g.n() <= 20 {
        maximal_cliques(&g.complement())?
    } else {
        vec![maximum_independent_set(g)?]
    };
    for gamma in sets {
        let size = int(gamma.len() as i64);
        let mut hits = BigRational::zero();
        for (s, q, f) in r.support() {
            let meet = int(gamma.intersection(s).len() as i64);
            if meet > *f {
                return Ok(false);
            }
            hits += q * meet;
        }
        if hits < size || size > r.value {
            return Ok(false);
        }
    }
    Ok(true)
}

/// f* of an inner oracle as an oracle: all subsets up to 16 vertices, the
/// default family above. Both give upper values of the true f*.
pub struct FStarOracle {
    inner: Arc<dyn BoundOracle>,
    memo: Memo,
}

impl FStarOracle {
    pub fn new(inner: Arc<dyn BoundOracle>) -> Self {
        FStarOracle {
            inner,
            memo: Memo::default(),
        }
    }
}

impl BoundOracle for FStarOracle {
    fn name(&self) -> String {
        format!("{}*", self.inner.name())
    }

    /// f* inherits each property from f.
    fn flags(&self) -> OracleFlags {
        self.inner.flags()
    }

    fn notes(&self) -> Vec<FlagNote> {
        self.inner
            .notes()
            .into_iter()
            .map(|n| FlagNote {
                flag: n.flag,
                reason: format!("inherited by f*: {}", n.reason),
            })
            .collect()
    }

    fn evaluate_graph(&self, h: &Graph) -> Result<BigRational> {
        self.memo.get_or_try(h, || {
            let r = if h.n() <= MAX_FULL_VERTICES {
                fstar_full(h, self.inner.as_ref())?
            } else {
                fstar(h, self.inner.as_ref(), &SubsetFamily::default_for(h, [])?)?
            };
            Ok(r.value)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{
        AlphaOracle, CliqueCoverOracle, ExactMinrankOracle, FractionalAlphaOracle,
    };
    use crate::minrank::FieldSpec;
    use crate::scalar::rational;

    #[test]
    fn unit_clique_values_give_alpha_f() {
        for n in [5, 7] {
            let g = Graph::cycle(n).unwrap();
            let fam = SubsetFamily::maximal_cliques(&g).unwrap();
            let r = fstar(&g, &CliqueCoverOracle, &fam).unwrap();
            assert_eq!(r.value, rational(n as i64, 2));
            assert!(r.verify());
        }
    }

    #[test]
    fn full_f2_minrank_on_c5() {
        let g = Graph::cycle(5).unwrap();
        let r = fstar_full(&g, &ExactMinrankOracle::new(FieldSpec::Prime(2))).unwrap();
        assert_eq!(r.value, rational(5, 2));
        assert!(r.licence.capacity && r.licence.broadcast);
        assert!(counting_check(&g, &r).unwrap());
    }

    #[test]
    fn pruning_keeps_the_value() {
        let g = Graph::from_edges(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 5)]).unwrap();
        for f in [&AlphaOracle as &dyn BoundOracle, &FractionalAlphaOracle] {
            let a = fstar_full_with(&g, f, true).unwrap();
            let b = fstar_full_with(&g, f, false).unwrap();
            assert_eq!(a.value, b.value);
            assert!(a.family.len() < b.family.len());
        }
    }

    #[test]
    fn rejects_bad_families() {
        let g = Graph::cycle(5).unwrap();
        let partial = SubsetFamily::new(5, [g.vertex_set([0, 1]).unwrap()]).unwrap();
        assert!(!partial.covers());
        assert!(fstar(&g, &AlphaOracle, &partial).is_err());
        assert!(SubsetFamily::new(5, [VertexSet::empty(5)]).is_err());
        assert!(SubsetFamily::new(5, [VertexSet::empty(4)]).is_err());
        assert!(fstar_full(&Graph::empty(17).unwrap(), &AlphaOracle).is_err());
    }

    #[test]
    fn family_text_round_trip() {
        let g = Graph::cycle(5).unwrap();
        let fam = SubsetFamily::default_for(&g, []).unwrap();
        assert_eq!(fam.len(), 6);
        let back = SubsetFamily::parse_text(&fam.to_text(&g), &g).unwrap();
        assert_eq!(back, fam);
        assert!(SubsetFamily::parse_text("{0,9}\n", &g).is_err());
    }

    #[test]
    fn fstar_oracle_on_c5() {
        let inner: Arc<dyn BoundOracle> = Arc::new(ExactMinrankOracle::new(FieldSpec::Prime(2)));
        let o = FStarOracle::new(inner);
        assert_eq!(
            o.evaluate_graph(&Graph::cycle(5).unwrap()).unwrap(),
            rational(5, 2)
        );
        assert_eq!(o.name(), "minrank-exact/2*");
    }
}
