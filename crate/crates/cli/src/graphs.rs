//! Named graphs and graph arguments.
//!
//! A graph argument is a file path or `@name`, with names `cycle:N`,
//! `path:N`, `complete:N`, `empty:N`, `schlafli`, `fixture` and `separation`.

use anyhow::{anyhow, bail, Context};
use capbound::minrank::fixture::{fixture, validate_fixture};
use capbound::Graph;

pub const NAMES: &str = "cycle:N, path:N, complete:N, empty:N, schlafli, fixture, separation";

/// `G + 7 C_5` with G the Schläfli complement.
pub fn separation_graph() -> capbound::Result<Graph> {
    let c5 = Graph::cycle(5)?;
    Ok(Graph::schlafli_complement().disjoint_union(&c5.copies(7)?))
}

/// The shipped fixture, validated before use.
pub fn checked_fixture() -> anyhow::Result<Graph> {
    let g = fixture()?;
    let report = validate_fixture(&g)?;
    if !report.is_valid() {
        bail!("fixture rejected: {}", report.violations.join("; "));
    }
    Ok(g)
}

pub fn named(name: &str) -> anyhow::Result<Graph> {
    let (kind, size) = match name.split_once(':') {
        Some((k, s)) => {
            let n: usize = s.parse().with_context(|| format!("bad size in `{name}`"))?;
            (k, Some(n))
        }
        None => (name, None),
    };
    let g = match (kind, size) {
        ("cycle", Some(n)) => Graph::cycle(n)?,
        ("path", Some(n)) => Graph::path(n)?,
        ("complete", Some(n)) => Graph::complete(n)?,
        ("empty", Some(n)) => Graph::empty(n)?,
        ("schlafli", None) => Graph::schlafli_complement(),
        ("fixture", None) => checked_fixture()?,
        ("separation", None) => separation_graph()?,
        _ => return Err(anyhow!("unknown graph `{name}`; expected one of {NAMES}")),
    };
    Ok(g)
}

/// Resolves a graph argument.
pub fn load(arg: &str) -> anyhow::Result<Graph> {
    if let Some(name) = arg.strip_prefix('@') {
        return named(name);
    }
    let text = std::fs::read_to_string(arg).with_context(|| format!("reading {arg}"))?;
    Graph::parse_text(&text).with_context(|| format!("parsing {arg}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_resolve() {
        assert_eq!(named("cycle:5").unwrap().edge_count(), 5);
        assert_eq!(named("separation").unwrap().n(), 62);
        assert_eq!(named("fixture").unwrap().n(), 28);
        assert!(named("cycle").is_err());
        assert!(named("wheel:5").is_err());
        assert!(load("/nonexistent/graph.g").is_err());
    }
}
