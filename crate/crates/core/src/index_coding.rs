//! Broadcast-rate reporting and scheme plans.
//!
//! β itself is never computed. A report lists certified values for one
//! graph and the claims they license: lower and upper bounds on the Shannon
//! capacity Θ and on the broadcast rate β, each naming its theorem.

use std::fmt::Write as _;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{
    fstar, make_minrank_oracle, simple_fitting_matrix, BoundOracle, EntryCertificate, FStarResult,
    Licence, SubsetFamily, TableEntry,
};
use crate::combinatorics::{
    fractional_independence, greedy_clique_partition, independence_number, minimum_clique_cover,
    MAX_COVER_VERTICES, MAX_EXACT_VERTICES,
};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::minrank::fixture::{
    apex_extended_matrix, appendix_script, t_set, validate_fixture, T_RANK,
};
use crate::minrank::{
    minrank_exact_small, replay_deletion_proof, FieldSpec, FittingMatrix, Verdict,
};
use crate::scalar::{format_rational, int, lcm_of_denominators, rational, to_f64};
use crate::theta::{lovasz_theta, theta_by_components, ThetaInterval, MAX_THETA_VERTICES};

pub const SCHEMA_VERSION: u32 = 1;

pub const THM_ALPHA: &str = "α(G) <= Θ(G) and α(G) <= β(G)";
pub const THM_THETA: &str = "Θ(G) <= ϑ(G) (Lovász)";
pub const THM_RANK_CAPACITY: &str = "Θ(G) <= rank of any fitting matrix (Haemers)";
pub const THM_RANK_BROADCAST: &str = "β(G) <= rank of a fitting matrix over a finite field";
pub const THM_FRACTIONAL: &str = "Θ(G) <= α_f(G) and β(G) <= χ̄_f(G) = α_f(G)";
pub const THM_COVER: &str = "Θ(G) <= χ̄(G) and β(G) <= χ̄(G)";
pub const THM_FSTAR_CAPACITY: &str = "Θ(G) <= f*(G) for a submultiplicative upper bound f on α";
pub const THM_FSTAR_BROADCAST: &str = "β(G) <= f*(G) for an upper bound f on β";
pub const THM_DELETION: &str = "minrk(G) >= α(H) when H comes from G by valid edge deletions";

/// Concatenation plan from a rational cover: `y_S = t q(S)` copies of an
/// index code for `G_S`, each of rate `f(G_S)`.
#[derive(Clone, Debug, Serialize)]
pub struct SchemePlan {
    #[serde(serialize_with = "crate::scalar::rational_text::serialize_int")]
    pub t: BigInt,
    pub blocks: Vec<SchemeBlock>,
    #[serde(serialize_with = "crate::scalar::rational_text::serialize")]
    pub total_rate: BigRational,
}

#[derive(Clone, Debug, Serialize)]
pub struct SchemeBlock {
    pub set: VertexSet,
    #[serde(serialize_with = "crate::scalar::rational_text::serialize_int")]
    pub copies: BigInt,
    #[serde(serialize_with = "crate::scalar::rational_text::serialize")]
    pub rate: BigRational,
}

impl SchemePlan {
    /// `p = Σ y_S`, the number of sub-codes concatenated.
    pub fn transmissions(&self) -> BigInt {
        self.blocks.iter().map(|b| b.copies.clone()).sum()
    }

    /// Every vertex is served by at least `t` blocks and the rate adds up.
    pub fn verify(&self, n: usize) -> bool {
        let served = (0..n).all(|x| {
            let count: BigInt = self
                .blocks
                .iter()
                .filter(|b| b.set.contains(x))
                .map(|b| b.copies.clone())
                .sum();
            count >= self.t
        });
        let sum: BigRational = self
            .blocks
            .iter()
            .map(|b| BigRational::from_integer(b.copies.clone()) * &b.rate)
            .sum();
        served && sum / BigRational::from_integer(self.t.clone()) == self.total_rate
    }
}

pub fn scheme_from_cover(g: &Graph, r: &FStarResult) -> SchemePlan {
    let support: Vec<_> = r.support().collect();
    let t = lcm_of_denominators(support.iter().map(|(_, q, _)| *q));
    let tq = BigRational::from_integer(t.clone());
    let blocks: Vec<SchemeBlock> = support
        .into_iter()
        .map(|(s, q, f)| SchemeBlock {
            set: s.clone(),
            copies: (q * &tq).to_integer(),
            rate: f.clone(),
        })
        .collect();
    let plan = SchemePlan {
        t,
        blocks,
        total_rate: r.value.clone(),
    };
    debug_assert!(plan.verify(g.n()));
    plan
}

/// A reported quantity.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Value {
    Exact {
        #[serde(serialize_with = "crate::scalar::rational_text::serialize")]
        value: BigRational,
    },
    /// Exact lower and upper ends.
    Range {
        #[serde(serialize_with = "crate::scalar::rational_text::serialize")]
        lower: BigRational,
        #[serde(serialize_with = "crate::scalar::rational_text::serialize")]
        upper: BigRational,
    },
    /// Certified floating-point interval.
    Interval { lower: f64, upper: f64 },
}

impl Value {
    pub fn exact(v: BigRational) -> Value {
        Value::Exact { value: v }
    }

    pub fn lower_f64(&self) -> f64 {
        match self {
            Value::Exact { value } => to_f64(value),
            Value::Range { lower, .. } => to_f64(lower),
            Value::Interval { lower, .. } => *lower,
        }
    }

    pub fn upper_f64(&self) -> f64 {
        match self {
            Value::Exact { value } => to_f64(value),
            Value::Range { upper, .. } => to_f64(upper),
            Value::Interval { upper, .. } => *upper,
        }
    }

    /// `p/q` for exact values, `[lo, hi]` otherwise.
    pub fn render(&self) -> String {
        match self {
            Value::Exact { value } => format_rational(value),
            Value::Range { lower, upper } => {
                format!("[{}, {}]", format_rational(lower), format_rational(upper))
            }
            Value::Interval { lower, upper } => format!("[{lower:.10}, {upper:.10}]"),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Entry {
    pub name: String,
    pub value: Value,
    /// Relative path or description of the certificate.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    Capacity,
    BroadcastRate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Lower,
    Upper,
}

/// One link of the bound chain.
#[derive(Clone, Debug, Serialize)]
pub struct Claim {
    pub quantity: Quantity,
    pub side: Side,
    /// Name of the entry whose value is used.
    pub entry: String,
    pub value: f64,
    pub theorem: String,
    /// False for values cited without an independent certificate.
    pub certified: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Absent {
    pub entry: String,
    pub reason: String,
}

/// Certified values and the bound chain for one graph.
#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub schema_version: u32,
    pub graph: String,
    pub vertices: usize,
    pub edges: usize,
    pub entries: Vec<Entry>,
    pub claims: Vec<Claim>,
    pub absent: Vec<Absent>,
    pub notes: Vec<String>,
    /// Certificate files as `(relative path, contents)`, written by callers.
    #[serde(skip)]
    pub attachments: Vec<(String, String)>,
    #[serde(skip)]
    pub fstar_results: Vec<(String, FStarResult)>,
}

impl BoundReport {
    pub fn new(id: &str, g: &Graph) -> Self {
        BoundReport {
            schema_version: SCHEMA_VERSION,
            graph: id.to_string(),
            vertices: g.n(),
            edges: g.edge_count(),
            entries: Vec::new(),
            claims: Vec::new(),
            absent: Vec::new(),
            notes: Vec::new(),
            attachments: Vec::new(),
            fstar_results: Vec::new(),
        }
    }

    pub fn entry(&self, name: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn push(&mut self, name: impl Into<String>, value: Value, certificate: Option<String>) {
        self.entries.push(Entry {
            name: name.into(),
            value,
            certificate,
        });
    }

    pub fn claim(
        &mut self,
        quantity: Quantity,
        side: Side,
        entry: &str,
        theorem: &str,
        certified: bool,
    ) {
        let Some(e) = self.entry(entry) else {
            return;
        };
        let value = match side {
            Side::Lower => e.value.lower_f64(),
            Side::Upper => e.value.upper_f64(),
        };
        self.claims.push(Claim {
            quantity,
            side,
            entry: entry.to_string(),
            value,
            theorem: theorem.to_string(),
            certified,
        });
    }

    pub fn mark_absent(&mut self, entry: impl Into<String>, reason: impl Into<String>) {
        self.absent.push(Absent {
            entry: entry.into(),
            reason: reason.into(),
        });
    }

    /// Best certified upper bound on `q`.
    pub fn best_upper(&self, q: Quantity) -> Option<&Claim> {
        self.claims
            .iter()
            .filter(|c| c.quantity == q && c.side == Side::Upper && c.certified)
            .min_by(|a, b| a.value.total_cmp(&b.value))
    }

    /// Violations of `α <= every upper bound` and `β-bounds <= χ̄`.
    pub fn chain_violations(&self) -> Vec<String> {
        let slack = 1e-9;
        let mut out = Vec::new();
        let alpha = self.entry("alpha").map(|e| e.value.lower_f64());
        let cover = self.entry("clique_cover").map(|e| e.value.upper_f64());
        for c in self.claims.iter().filter(|c| c.side == Side::Upper) {
            if let Some(a) = alpha {
                if a > c.value + slack {
                    out.push(format!("α = {a} exceeds {} = {}", c.entry, c.value));
                }
            }
            if let (Quantity::BroadcastRate, Some(x)) = (c.quantity, cover) {
                if c.value > x + slack {
                    out.push(format!("{} = {} exceeds χ̄ = {x}", c.entry, c.value));
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// Two-column table followed by the claims.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "graph {} ({} vertices, {} edges)",
            self.graph, self.vertices, self.edges
        );
        let width = self.entries.iter().map(|e| e.name.len()).max().unwrap_or(0);
        for e in &self.entries {
            let _ = write!(out, "  {:width$}  {}", e.name, e.value.render());
            if let Some(c) = &e.certificate {
                let _ = write!(out, "  [{c}]");
            }
            out.push('\n');
        }
        for a in &self.absent {
            let _ = writeln!(out, "  {:width$}  absent: {}", a.entry, a.reason);
        }
        for c in &self.claims {
            let q = match c.quantity {
                Quantity::Capacity => "Θ",
                Quantity::BroadcastRate => "β",
            };
            let rel = match c.side {
                Side::Lower => ">=",
                Side::Upper => "<=",
            };
            let cited = if c.certified {
                ""
            } else {
                " (cited, not certified)"
            };
            let _ = writeln!(
                out,
                "{q} {rel} {} via {}: {}{cited}",
                c.value, c.entry, c.theorem
            );
        }
        for n in &self.notes {
            let _ = writeln!(out, "note: {n}");
        }
        out
    }
}

/// Labeled family for reports.
#[derive(Clone, Debug)]
pub struct NamedFamily {
    pub name: String,
    pub family: SubsetFamily,
}

fn theta_interval(g: &Graph, tolerance: f64) -> Result<ThetaInterval> {
    if g.n() <= MAX_THETA_VERTICES {
        Ok(lovasz_theta(g, tolerance)?.interval())
    } else {
        theta_by_components(g, tolerance)
    }
}

fn add_minrank(
    report: &mut BoundReport,
    g: &Graph,
    field: FieldSpec,
    alpha: Option<usize>,
) -> Result<()> {
    let name = format!("minrank/{field}");
    if let Ok(exact) = minrank_exact_small(g, field) {
        let path = format!("minrank_{field}.mat");
        report
            .attachments
            .push((path.clone(), exact.witness.to_text()));
        report.push(&name, Value::exact(int(exact.value as i64)), Some(path));
    } else {
        let m = simple_fitting_matrix(g, field)?;
        let path = format!("minrank_{field}.mat");
        report.attachments.push((path.clone(), m.to_text()));
        let upper = int(m.rank() as i64);
        let value = match alpha {
            Some(a) if int(a as i64) == upper => Value::exact(upper),
            Some(a) => Value::Range {
                lower: int(a as i64),
                upper,
            },
            None => Value::Range {
                lower: int(0),
                upper,
            },
        };
        report.push(&name, value, Some(path));
    }
    report.claim(
        Quantity::Capacity,
        Side::Upper,
        &name,
        THM_RANK_CAPACITY,
        true,
    );
    if matches!(field, FieldSpec::Prime(_)) {
        report.claim(
            Quantity::BroadcastRate,
            Side::Upper,
            &name,
            THM_RANK_BROADCAST,
            true,
        );
    }
    Ok(())
}

fn add_fstar(report: &mut BoundReport, name: String, r: FStarResult) {
    let Licence {
        capacity,
        broadcast,
    } = r.licence;
    report.push(
        &name,
        Value::exact(r.value.clone()),
        Some(format!("cover over {} sets", r.family.len())),
    );
    if capacity {
        report.claim(
            Quantity::Capacity,
            Side::Upper,
            &name,
            THM_FSTAR_CAPACITY,
            true,
        );
    }
    if broadcast {
        report.claim(
            Quantity::BroadcastRate,
            Side::Upper,
            &name,
            THM_FSTAR_BROADCAST,
            true,
        );
    }
    report.fstar_results.push((name, r));
}

/// Computes every entry that fits the module limits; the rest are marked
/// absent, never estimated.
pub fn broadcast_report(
    id: &str,
    g: &Graph,
    fields: &[FieldSpec],
    oracles: &[Arc<dyn BoundOracle>],
    families: &[NamedFamily],
    tolerance: f64,
) -> BoundReport {
    let mut report = BoundReport::new(id, g);
    let small = g.n() <= MAX_EXACT_VERTICES;
    let ((alpha, alpha_f), (cover, theta)) = rayon::join(
        || {
            rayon::join(
                || small.then(|| independence_number(g)),
                || small.then(|| fractional_independence(g)),
            )
        },
        || {
            rayon::join(
                || {
                    if g.n() <= MAX_COVER_VERTICES {
                        minimum_clique_cover(g).map(|c| (c, true))
                    } else {
                        Ok((greedy_clique_partition(g), false))
                    }
                },
                || theta_interval(g, tolerance),
            )
        },
    );
    let alpha = match alpha {
        Some(Ok(a)) => {
            report.push("alpha", Value::exact(int(a as i64)), None);
            report.claim(Quantity::Capacity, Side::Lower, "alpha", THM_ALPHA, true);
            report.claim(
                Quantity::BroadcastRate,
                Side::Lower,
                "alpha",
                THM_ALPHA,
                true,
            );
            Some(a)
        }
        Some(Err(e)) => {
            report.mark_absent("alpha", e.to_string());
            None
        }
        None => {
            report.mark_absent("alpha", format!("more than {MAX_EXACT_VERTICES} vertices"));
            None
        }
    };
    match alpha_f {
        Some(Ok(f)) => {
            report.push(
                "alpha_f",
                Value::exact(f.value),
                Some("LP certificate".into()),
            );
            report.claim(
                Quantity::Capacity,
                Side::Upper,
                "alpha_f",
                THM_FRACTIONAL,
                true,
            );
            report.claim(
                Quantity::BroadcastRate,
                Side::Upper,
                "alpha_f",
                THM_FRACTIONAL,
                true,
            );
        }
        Some(Err(e)) => report.mark_absent("alpha_f", e.to_string()),
        None => report.mark_absent(
            "alpha_f",
            format!("more than {MAX_EXACT_VERTICES} vertices"),
        ),
    }
    match cover {
        Ok((parts, exact)) => {
            let k = int(parts.len() as i64);
            let value = match (exact, alpha) {
                (true, _) => Value::exact(k),
                (false, Some(a)) => Value::Range {
                    lower: int(a as i64),
                    upper: k,
                },
                (false, None) => Value::Range {
                    lower: int(1),
                    upper: k,
                },
            };
            let cert = if exact {
                "minimum clique cover"
            } else {
                "greedy clique partition"
            };
            report.push("clique_cover", value, Some(cert.into()));
            report.claim(
                Quantity::Capacity,
                Side::Upper,
                "clique_cover",
                THM_COVER,
                true,
            );
            report.claim(
                Quantity::BroadcastRate,
                Side::Upper,
                "clique_cover",
                THM_COVER,
                true,
            );
        }
        Err(e) => report.mark_absent("clique_cover", e.to_string()),
    }
    match theta {
        Ok(t) => {
            report.push(
                "theta",
                Value::Interval {
                    lower: t.lower,
                    upper: t.upper,
                },
                Some("SDP witnesses".into()),
            );
            report.claim(Quantity::Capacity, Side::Upper, "theta", THM_THETA, true);
        }
        Err(e) => report.mark_absent("theta", e.to_string()),
    }
    for &field in fields {
        if let Err(e) = add_minrank(&mut report, g, field, alpha) {
            report.mark_absent(format!("minrank/{field}"), e.to_string());
        }
    }
    let jobs: Vec<(String, Result<FStarResult>)> = oracles
        .iter()
        .flat_map(|o| families.iter().map(move |f| (o, f)))
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(o, f)| {
            (
                format!("fstar {} over {}", o.name(), f.name),
                fstar(g, o.as_ref(), &f.family),
            )
        })
        .collect();
    for (name, r) in jobs {
        match r {
            Ok(r) => add_fstar(&mut report, name, r),
            Err(e) => report.mark_absent(name, e.to_string()),
        }
    }
    report
}

/// The modified Schläfli fixture over F_11: f* with `T ↦ 7` beats both
/// minrk = 8 (certified by the deletion proof and the apex matrix) and α_f.
pub fn fixture_report(g: &Graph, tolerance: f64) -> Result<BoundReport> {
    let check = validate_fixture(g)?;
    if !check.is_valid() {
        return Err(Error::Certificate(format!(
            "fixture rejected: {}",
            check.violations.join("; ")
        )));
    }
    let f11 = FieldSpec::Prime(11);
    let oracle = fixture_oracle(g, f11)?;
    let mut family = SubsetFamily::maximal_cliques(g)?;
    family.extend([t_set()])?;
    let families = [NamedFamily {
        name: "cliques+T".into(),
        family,
    }];
    let mut report = broadcast_report(
        "modified-schlafli",
        g,
        &[],
        &[Arc::new(oracle)],
        &families,
        tolerance,
    );

    let proof = replay_deletion_proof(g, &appendix_script(g)?)?;
    let upper = apex_extended_matrix(g, f11)?;
    let lower = proof.alpha_residual;
    if proof.verdict != Verdict::MinrankExceedsAlpha || upper.rank() != lower {
        return Err(Error::Certificate(format!(
            "deletion proof gives {lower}, apex matrix rank {}",
            upper.rank()
        )));
    }
    report
        .attachments
        .push(("apex_extended.mat".into(), upper.to_text()));
    report.push(
        "minrank/11",
        Value::exact(int(lower as i64)),
        Some("deletion script + apex_extended.mat".into()),
    );
    report.claim(
        Quantity::Capacity,
        Side::Upper,
        "minrank/11",
        THM_RANK_CAPACITY,
        true,
    );
    report.claim(
        Quantity::BroadcastRate,
        Side::Upper,
        "minrank/11",
        THM_RANK_BROADCAST,
        true,
    );
    report
        .notes
        .push(format!("minrank lower end: {THM_DELETION}"));
    Ok(report)
}

/// minrk oracle over `field` with the single table entry `T ↦ 7` certified
/// by `A - I` of the 27-vertex subgraph.
pub fn fixture_oracle(g: &Graph, field: FieldSpec) -> Result<crate::bounds::MinrankOracle> {
    let t = t_set();
    let sub = g.induced_subgraph(&t)?;
    let entry = TableEntry {
        set: t,
        value: int(T_RANK as i64),
        certificate: EntryCertificate::Matrix(FittingMatrix::adjacency_minus_identity(sub, field)),
    };
    make_minrank_oracle(g, field, vec![entry])
}

/// Values behind the witness report, for callers that check them.
#[derive(Clone, Debug)]
pub struct SeparationWitness {
    pub report: BoundReport,
    pub theta_additive: ThetaInterval,
    pub theta_direct: ThetaInterval,
    pub minrank_upper: usize,
    pub fstar: FStarResult,
}

/// `G + 7 C_5` with G the Schläfli complement: ϑ < minrk, yet the F_11 f*
/// bound drops below ϑ.
pub fn separation_witness(tolerance: f64) -> Result<SeparationWitness> {
    let g = Graph::schlafli_complement();
    let c5 = Graph::cycle(5)?;
    let h = g.disjoint_union(&c5.copies(7)?);
    let f11 = FieldSpec::Prime(11);

    let (direct, parts) = rayon::join(
        || lovasz_theta(&h, tolerance),
        || -> Result<(ThetaInterval, ThetaInterval)> {
            Ok((
                lovasz_theta(&g, tolerance)?.interval(),
                lovasz_theta(&c5, tolerance)?.interval(),
            ))
        },
    );
    let direct = direct?.interval();
    let (tg, tc) = parts?;
    let additive = tg.add(&tc.scale(7.0));
    if additive.lower > direct.upper + 4.0 * tolerance
        || direct.lower > additive.upper + 4.0 * tolerance
    {
        return Err(Error::Certificate(format!(
            "ϑ by additivity [{}, {}] disagrees with the direct SDP [{}, {}]",
            additive.lower, additive.upper, direct.lower, direct.upper
        )));
    }

    let block_g = FittingMatrix::adjacency_minus_identity(g.clone(), f11);
    let c5_parts = minimum_clique_cover(&c5)?;
    let block_c = FittingMatrix::from_clique_partition(c5.clone(), f11, &c5_parts)?;
    let mut matrix = block_g.clone();
    for _ in 0..7 {
        matrix = matrix.block_diagonal(&block_c)?;
    }
    let matrix = matrix.rebind(h.clone())?;
    let minrank_upper = crate::minrank::minrank_upper(&h, &matrix)?;

    let g_set = VertexSet::from_indices(h.n(), 0..g.n())?;
    let entry = TableEntry {
        set: g_set.clone(),
        value: int(T_RANK as i64),
        certificate: EntryCertificate::Matrix(block_g),
    };
    let oracle = make_minrank_oracle(&h, f11, vec![entry])?;
    let mut family = SubsetFamily::maximal_cliques(&h)?;
    family.extend([g_set])?;
    let fs = fstar(&h, &oracle, &family)?;

    let mut report = BoundReport::new("schlafli-complement+7C5", &h);
    report.push(
        "theta",
        Value::Interval {
            lower: direct.lower,
            upper: direct.upper,
        },
        Some("direct SDP".into()),
    );
    report.push(
        "theta by additivity",
        Value::Interval {
            lower: additive.lower,
            upper: additive.upper,
        },
        Some("ϑ(G) + 7 ϑ(C5)".into()),
    );
    report.claim(Quantity::Capacity, Side::Upper, "theta", THM_THETA, true);
    report
        .attachments
        .push(("block_diagonal.mat".into(), matrix.to_text()));
    report.push(
        "minrank/11",
        Value::Range {
            lower: int(0),
            upper: int(minrank_upper as i64),
        },
        Some("block_diagonal.mat".into()),
    );
    report.push("minrank (cited)", Value::exact(int(28)), None);
    report.claim(
        Quantity::Capacity,
        Side::Upper,
        "minrank/11",
        THM_RANK_CAPACITY,
        true,
    );
    report.claim(
        Quantity::BroadcastRate,
        Side::Upper,
        "minrank/11",
        THM_RANK_BROADCAST,
        true,
    );
    report.claims.push(Claim {
        quantity: Quantity::Capacity,
        side: Side::Upper,
        entry: "minrank (cited)".into(),
        value: 28.0,
        theorem: "minrk(G + 7C5) = 7 + 7·3 over every field".into(),
        certified: false,
    });
    add_fstar(
        &mut report,
        "fstar minrank/11 over cliques+V(G)".into(),
        fs.clone(),
    );

    let theta_lo = direct.lower.max(additive.lower);
    let theta_hi = direct.upper.min(additive.upper);
    if theta_hi >= minrank_upper as f64 || to_f64(&fs.value) >= theta_lo {
        return Err(Error::Certificate(format!(
            "expected {} < ϑ in [{theta_lo}, {theta_hi}] < {minrank_upper}",
            format_rational(&fs.value)
        )));
    }
    report.notes.push(format!(
        "ϑ = [{theta_lo:.10}, {theta_hi:.10}] < 28 certified as an upper end for minrk only by citation; \
         rank of the block matrix certifies minrk <= {minrank_upper}"
    ));
    report.notes.push(format!(
        "f* over F_11 = {} < ϑ lower end {theta_lo:.10}",
        format_rational(&fs.value)
    ));
    debug_assert_eq!(fs.value, rational(49, 2));
    Ok(SeparationWitness {
        report,
        theta_additive: additive,
        theta_direct: direct,
        minrank_upper,
        fstar: fs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{path_union_table, CliqueCoverOracle};
    use crate::minrank::fixture::fixture;
    use num_traits::Zero;

    #[test]
    fn trivial_cover_plan() {
        let g = Graph::complete(3).unwrap();
        let fam = SubsetFamily::new(3, [g.all_vertices()]).unwrap();
        let r = fstar(&g, &CliqueCoverOracle, &fam).unwrap();
        let plan = scheme_from_cover(&g, &r);
        assert_eq!(plan.t, BigInt::from(1));
        assert_eq!(plan.blocks.len(), 1);
        assert_eq!(plan.total_rate, int(1));
        assert!(plan.verify(3));
    }

    #[test]
    fn c5_plan_has_rate_five_halves() {
        let g = Graph::cycle(5).unwrap();
        let o = make_minrank_oracle(
            &g,
            FieldSpec::Prime(2),
            path_union_table(&g, FieldSpec::Prime(2)).unwrap(),
        )
        .unwrap();
        let r = fstar(&g, &o, &SubsetFamily::all_subsets(&g).unwrap()).unwrap();
        let plan = scheme_from_cover(&g, &r);
        assert_eq!(plan.total_rate, rational(5, 2));
        assert!(plan.verify(5));
        assert!(plan.transmissions() >= plan.t);
    }

    #[test]
    fn complete_graph_report() {
        let g = Graph::complete(4).unwrap();
        let r = broadcast_report(
            "K4",
            &g,
            &[FieldSpec::Prime(2)],
            &[Arc::new(CliqueCoverOracle)],
            &[],
            1e-7,
        );
        for name in ["alpha", "alpha_f", "clique_cover", "minrank/2"] {
            assert_eq!(r.entry(name).unwrap().value, Value::exact(int(1)), "{name}");
        }
        let t = r.entry("theta").unwrap().value.clone();
        assert!(t.lower_f64() <= 1.0 && t.upper_f64() >= 1.0);
        assert!(r.chain_violations().is_empty());
        let json: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(json["schema_version"], 1);
        assert_eq!(json["entries"][0]["value"]["value"], "1");
    }

    #[test]
    fn fixture_report_orders_bounds() {
        let g = fixture().unwrap();
        let r = fixture_report(&g, 1e-7).unwrap();
        let fs = r.entry("fstar minrank/11 over cliques+T").unwrap();
        assert_eq!(fs.value, Value::exact(rational(71, 9)));
        assert_eq!(r.entry("minrank/11").unwrap().value, Value::exact(int(8)));
        assert!(r.entry("alpha_f").unwrap().value.lower_f64() >= 9.0);
        assert!(
            r.chain_violations().is_empty(),
            "{:?}",
            r.chain_violations()
        );
        let (_, result) = &r.fstar_results[0];
        let plan = scheme_from_cover(&g, result);
        assert!(plan.t.clone() % BigInt::from(9) == BigInt::zero());
        assert_eq!(plan.total_rate, rational(71, 9));
    }

    #[test]
    fn separation() {
        let w = separation_witness(1e-7).unwrap();
        let want = 9.0 + 7.0 * 5f64.sqrt();
        assert!(w.theta_direct.contains(want, 1e-6));
        assert!(w.theta_additive.contains(want, 1e-6));
        assert_eq!(w.minrank_upper, 28);
        assert_eq!(w.fstar.value, rational(49, 2));
        assert!(w.report.claims.iter().any(|c| !c.certified));
    }
}
