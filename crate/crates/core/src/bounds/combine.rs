//! Combinators: weighted geometric means of oracles, the disjoint-union
//! bound, and the additivity check.

use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::{fstar_full, note, BoundOracle, FlagNote, OracleFlags};
use crate::combinatorics::{
    fractional_independence, greedy_clique_partition, minimum_clique_cover, MAX_COVER_VERTICES,
};
use crate::error::{domain, Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::minrank::{minrank_upper, FieldSpec, FittingMatrix};
use crate::scalar::{int, round_up, to_f64};

/// `theta^a · base^(1-a)` pointwise, rounded up.
pub struct GeometricMeanOracle {
    a: BigRational,
    theta: Arc<dyn BoundOracle>,
    base: Arc<dyn BoundOracle>,
}

/// Both inputs must be submultiplicative upper bounds on α; the mean then
/// is one as well.
pub fn geometric_mean_oracle(
    a: BigRational,
    theta: Arc<dyn BoundOracle>,
    base: Arc<dyn BoundOracle>,
) -> Result<GeometricMeanOracle> {
    if a < BigRational::zero() || a > BigRational::one() {
        return Err(domain(format!("exponent {a} outside [0, 1]")));
    }
    for o in [&theta, &base] {
        let f = o.flags();
        if !(f.bounds_independence && f.submultiplicative) {
            return Err(Error::Oracle {
                oracle: o.name(),
                reason: "geometric means need a submultiplicative upper bound on α".into(),
            });
        }
    }
    Ok(GeometricMeanOracle { a, theta, base })
}

impl BoundOracle for GeometricMeanOracle {
    fn name(&self) -> String {
        format!(
            "{}^{} {}^(1-{})",
            self.theta.name(),
            self.a,
            self.base.name(),
            self.a
        )
    }

    fn flags(&self) -> OracleFlags {
        let both = self.theta.flags().meet(self.base.flags());
        OracleFlags {
            bounds_independence: true,
            submultiplicative: true,
            superadditive: false,
            clique_value_one: both.clique_value_one,
            bounds_broadcast: false,
        }
    }

    fn notes(&self) -> Vec<FlagNote> {
        vec![
            note("bounds_independence", "α = α^a α^(1-a) <= f^a g^(1-a)"),
            note(
                "submultiplicative",
                "powers and products of submultiplicative functions",
            ),
            note(
                "superadditive",
                "cleared: a power mean of sums exceeds the sum of means",
            ),
            note("bounds_broadcast", "cleared: not established for means"),
        ]
    }

    fn evaluate_graph(&self, h: &Graph) -> Result<BigRational> {
        self.evaluate(h, &h.all_vertices())
    }

    fn evaluate(&self, g: &Graph, s: &VertexSet) -> Result<BigRational> {
        let t = self.theta.evaluate(g, s)?;
        if self.a.is_one() {
            return Ok(t);
        }
        let b = self.base.evaluate(g, s)?;
        if self.a.is_zero() || t == b {
            return Ok(b);
        }
        let a = to_f64(&self.a);
        let v = (a * to_f64(&t).ln() + (1.0 - a) * to_f64(&b).ln()).exp();
        round_up(v * (1.0 + 1e-12))
    }
}

/// One summand `multiplicity · theta^a · base^(1-a)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GeometricTerm {
    pub theta: f64,
    pub base: f64,
    pub multiplicity: usize,
}

fn mean_objective(terms: &[GeometricTerm], a: f64) -> f64 {
    terms
        .iter()
        .map(|t| t.multiplicity as f64 * t.theta.powf(a) * t.base.powf(1.0 - a))
        .sum()
}

/// Minimizes `Σ mult · theta^a · base^(1-a)` over `a ∈ [0, 1]` by ternary
/// search; the objective is a positive combination of exponentials in `a`,
/// hence convex. Returns `(a*, value)` with `a*` within `tolerance`.
pub fn optimize_geometric_mean(terms: &[GeometricTerm], tolerance: f64) -> Result<(f64, f64)> {
    if terms.iter().any(|t| !(t.theta > 0.0 && t.base > 0.0)) {
        return Err(domain("geometric mean terms must be positive"));
    }
    if tolerance.is_nan() || tolerance <= 0.0 {
        return Err(domain("tolerance must be positive"));
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while hi - lo > tolerance {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if mean_objective(terms, m1) <= mean_objective(terms, m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    let a = 0.5 * (lo + hi);
    Ok((a, mean_objective(terms, a)))
}

/// The disjoint-union bound with its ingredients.
#[derive(Clone, Debug, Serialize)]
pub struct UnionBound {
    #[serde(serialize_with = "crate::scalar::rational_text::serialize")]
    pub value: BigRational,
    pub minrank_g: usize,
    pub minrank_h: usize,
    pub field_g: FieldSpec,
    pub field_h: FieldSpec,
    #[serde(serialize_with = "crate::scalar::rational_text::serialize")]
    pub alpha_f_g: BigRational,
    #[serde(serialize_with = "crate::scalar::rational_text::serialize")]
    pub alpha_f_h: BigRational,
    /// `minrk(G) + α_f(H)`.
    #[serde(serialize_with = "crate::scalar::rational_text::serialize")]
    pub left: BigRational,
    /// `α_f(G) + minrk(H)`.
    #[serde(serialize_with = "crate::scalar::rational_text::serialize")]
    pub right: BigRational,
}

/// `Θ(G+H) <= min{minrk(G) + α_f(H), α_f(G) + minrk(H)}` with the minrank
/// terms certified by fitting matrices.
pub fn union_bound_corollary(
    g: &Graph,
    h: &Graph,
    mg: &FittingMatrix,
    mh: &FittingMatrix,
) -> Result<UnionBound> {
    let minrank_g = minrank_upper(g, mg)?;
    let minrank_h = minrank_upper(h, mh)?;
    let alpha_f_g = fractional_independence(g)?.value;
    let alpha_f_h = fractional_independence(h)?.value;
    let left = int(minrank_g as i64) + &alpha_f_h;
    let right = &alpha_f_g + int(minrank_h as i64);
    Ok(UnionBound {
        value: left.clone().min(right.clone()),
        minrank_g,
        minrank_h,
        field_g: mg.field(),
        field_h: mh.field(),
        alpha_f_g,
        alpha_f_h,
        left,
        right,
    })
}

/// The lower-rank of a clique-partition matrix and `A - I` over `field`.
pub fn simple_fitting_matrix(g: &Graph, field: FieldSpec) -> Result<FittingMatrix> {
    let parts = if g.n() <= MAX_COVER_VERTICES {
        minimum_clique_cover(g)?
    } else {
        greedy_clique_partition(g)
    };
    let cover = FittingMatrix::from_clique_partition(g.clone(), field, &parts)?;
    let shifted = FittingMatrix::adjacency_minus_identity(g.clone(), field);
    Ok(if shifted.rank() < cover.rank() {
        shifted
    } else {
        cover
    })
}

/// `f*(G+H) = f*(G) + f*(H)` checked exactly with all-subsets f*.
pub fn check_additivity(g: &Graph, h: &Graph, f: &dyn BoundOracle) -> Result<bool> {
    if !f.flags().superadditive {
        return Err(Error::Oracle {
            oracle: f.name(),
            reason: "additivity needs a superadditive oracle".into(),
        });
    }
    let sum = fstar_full(g, f)?.value + fstar_full(h, f)?.value;
    Ok(fstar_full(&g.disjoint_union(h), f)?.value == sum)
}
