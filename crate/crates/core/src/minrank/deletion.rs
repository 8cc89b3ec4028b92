//! Edge-deletion lower bounds for minrank.
//!
//! Let `I` be a maximum independent set, `u ∉ I`, `J = N(u) ∩ I`, and `w`
//! a neighbor of `u` outside `I` with no neighbor in `J`. Removing `(u, w)`
//! preserves the predicate `minrk = α`. If a chain of such removals raises
//! the independence number, then `minrk(G) > α(G)`.
//!
//! Consecutive steps sharing `I` and `u` form one batch. For a fixed
//! `(I, u)` every qualifying `w` forces `B_uw = B_wu = 0` in any rank-`α`
//! fitting matrix at once, so maximality of `I` is checked once at the
//! start of the batch and the `w` conditions are checked per step.

use serde::Serialize;

use crate::combinatorics::{independence_number, maximum_independent_set};
use crate::error::{parse_err, Error, Result};
use crate::graph::{Graph, VertexSet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeletionStep {
    pub independent: VertexSet,
    pub u: usize,
    pub w: usize,
}

/// Ordered deletion steps plus an optional claimed maximum independent set
/// of the residual graph.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DeletionScript {
    pub steps: Vec<DeletionStep>,
    pub claimed: Option<VertexSet>,
}

impl DeletionScript {
    /// Parses lines `I:{a,b,...} u:x w:y` and an optional final `H:{...}`.
    /// Vertex tokens are labels when `g` is labeled, else 0-based indices.
    pub fn parse_text(text: &str, g: &Graph) -> Result<Self> {
        let mut script = DeletionScript::default();
        for (i, raw) in text.lines().enumerate() {
            let ln = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if script.claimed.is_some() {
                return Err(parse_err(ln, "nothing may follow the H: line"));
            }
            if let Some(rest) = line.strip_prefix("H:") {
                script.claimed = Some(parse_set(rest.trim(), g, ln)?);
                continue;
            }
            let rest = line
                .strip_prefix("I:")
                .ok_or_else(|| parse_err(ln, "expected `I:{...} u:<v> w:<v>` or `H:{...}`"))?;
            let close = rest
                .find('}')
                .ok_or_else(|| parse_err(ln, "unclosed set"))?;
            let independent = parse_set(&rest[..=close], g, ln)?;
            let mut u = None;
            let mut w = None;
            for tok in rest[close + 1..].split_whitespace() {
                let (key, val) = tok
                    .split_once(':')
                    .ok_or_else(|| parse_err(ln, format!("bad token {tok:?}")))?;
                let v = g.resolve(val).map_err(|e| parse_err(ln, e.to_string()))?;
                match key {
                    "u" => u = Some(v),
                    "w" => w = Some(v),
                    _ => return Err(parse_err(ln, format!("unknown key {key:?}"))),
                }
            }
            script.steps.push(DeletionStep {
                independent,
                u: u.ok_or_else(|| parse_err(ln, "missing u"))?,
                w: w.ok_or_else(|| parse_err(ln, "missing w"))?,
            });
        }
        Ok(script)
    }

    pub fn to_text(&self, g: &Graph) -> String {
        let set = |s: &VertexSet| g.format_set(s);
        let mut out = String::new();
        for s in &self.steps {
            out.push_str(&format!(
                "I:{} u:{} w:{}\n",
                set(&s.independent),
                g.label(s.u),
                g.label(s.w)
            ));
        }
        if let Some(h) = &self.claimed {
            out.push_str(&format!("H:{}\n", set(h)));
        }
        out
    }
}

fn parse_set(text: &str, g: &Graph, ln: usize) -> Result<VertexSet> {
    g.parse_set(text).map_err(|e| parse_err(ln, e.to_string()))
}

/// What one applied step removed, and why it was allowed.
#[derive(Clone, Debug, Serialize)]
pub struct StepRecord {
    pub step: usize,
    pub u: usize,
    pub w: usize,
    pub j: Vec<usize>,
    /// α of the graph the step's `I` was checked against.
    pub alpha: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    /// α rose along the chain, so `minrk(G) > α(G)` over every field.
    MinrankExceedsAlpha,
    Inconclusive,
}

#[derive(Clone, Debug)]
pub struct ProofOutcome {
    pub verdict: Verdict,
    pub alpha_original: usize,
    pub alpha_residual: usize,
    /// Maximum independent set of the residual graph: the claimed one when
    /// the script supplies it, otherwise the search's witness.
    pub residual_witness: VertexSet,
    pub residual: Graph,
    pub trail: Vec<StepRecord>,
}

fn check_maximum(g: &Graph, i: &VertexSet) -> std::result::Result<usize, String> {
    if i.universe() != g.n() {
        return Err("I is over a different vertex count".into());
    }
    if !g.is_independent(i) {
        return Err("I is not independent".into());
    }
    let alpha = independence_number(g).map_err(|e| e.to_string())?;
    if i.len() != alpha {
        return Err(format!("I has {} vertices but α = {alpha}", i.len()));
    }
    Ok(alpha)
}

fn check_pair(
    g: &Graph,
    i: &VertexSet,
    u: usize,
    w: usize,
) -> std::result::Result<Vec<usize>, String> {
    if u >= g.n() || w >= g.n() {
        return Err("vertex out of range".into());
    }
    if i.contains(u) {
        return Err(format!("u = {} lies in I", g.label(u)));
    }
    let j = g.neighbors(u).intersection(i);
    if j.is_empty() {
        return Err(format!("J = N({}) ∩ I is empty", g.label(u)));
    }
    if w == u || i.contains(w) {
        return Err(format!("w = {} lies in I ∪ {{u}}", g.label(w)));
    }
    if !g.has_edge(u, w) {
        return Err(format!(
            "w = {} is not adjacent to u = {}",
            g.label(w),
            g.label(u)
        ));
    }
    if let Some(x) = g.neighbors(w).intersection(&j).iter().next() {
        return Err(format!(
            "w = {} is adjacent to {} in J",
            g.label(w),
            g.label(x)
        ));
    }
    Ok(j.to_vec())
}

/// One validated deletion: returns `g` minus the edge `(u, w)`.
pub fn tims_step(g: &Graph, i: &VertexSet, u: usize, w: usize) -> Result<Graph> {
    let fail = |reason: String| Error::Precondition { step: 1, reason };
    check_maximum(g, i).map_err(fail)?;
    check_pair(g, i, u, w).map_err(fail)?;
    g.remove_edge(u, w)
}

/// Applies the script to `g`, validating each step against the current
/// graph, then compares α of the residual graph with α(g). Steps are
/// numbered from 1 in errors; step `len + 1` refers to the `H:` claim.
pub fn replay_deletion_proof(g: &Graph, script: &DeletionScript) -> Result<ProofOutcome> {
    let alpha_original = independence_number(g)?;
    let mut current = g.clone();
    let mut trail = Vec::with_capacity(script.steps.len());
    let mut batch_alpha = 0;
    for (k, s) in script.steps.iter().enumerate() {
        let step = k + 1;
        let fail = |reason: String| Error::Precondition { step, reason };
        let starts_batch = k == 0 || {
            let prev = &script.steps[k - 1];
            prev.u != s.u || prev.independent != s.independent
        };
        if starts_batch {
            batch_alpha = check_maximum(&current, &s.independent).map_err(fail)?;
        }
        let j = check_pair(&current, &s.independent, s.u, s.w).map_err(fail)?;
        current = current.remove_edge(s.u, s.w)?;
        trail.push(StepRecord {
            step,
            u: s.u,
            w: s.w,
            j,
            alpha: batch_alpha,
        });
    }
    let alpha_residual = independence_number(&current)?;
    let residual_witness = match &script.claimed {
        Some(h) => {
            let step = script.steps.len() + 1;
            if !current.is_independent(h) {
                return Err(Error::Precondition {
                    step,
                    reason: "claimed set is not independent in the residual graph".into(),
                });
            }
            if h.len() != alpha_residual {
                return Err(Error::Precondition {
                    step,
                    reason: format!(
                        "claimed set has {} vertices but α = {alpha_residual}",
                        h.len()
                    ),
                });
            }
            h.clone()
        }
        None => maximum_independent_set(&current)?,
    };
    let verdict = if alpha_residual > alpha_original {
        Verdict::MinrankExceedsAlpha
    } else {
        Verdict::Inconclusive
    };
    Ok(ProofOutcome {
        verdict,
        alpha_original,
        alpha_residual,
        residual_witness,
        residual: current,
        trail,
    })
}
