//! Oracle table files: `S:{a,b,...} = p/q  # certificate-ref`, where the
//! reference is `exact-search` or a matrix file relative to the table.

use std::path::Path;

use num_rational::BigRational;

use super::MAX_FULL_VERTICES;
use super::{make_minrank_oracle, EntryCertificate, MinrankOracle, TableEntry};
use crate::combinatorics::minimum_clique_cover;
use crate::error::{domain, parse_err, Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::minrank::{path_minrank, FieldSpec, FittingMatrix};
use crate::scalar::{format_rational, int, parse_rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CertificateRef {
    ExactSearch,
    MatrixFile(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct TableLine {
    pub set: VertexSet,
    pub value: BigRational,
    pub certificate: CertificateRef,
}

pub fn parse_oracle_table(text: &str, g: &Graph) -> Result<Vec<TableLine>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let (body, comment) = match raw.split_once('#') {
            Some((b, c)) => (b.trim(), Some(c.trim())),
            None => (raw.trim(), None),
        };
        if body.is_empty() {
            continue;
        }
        let rest = body
            .strip_prefix("S:")
            .ok_or_else(|| parse_err(ln, "expected `S:{...} = value`"))?;
        let (set, value) = rest
            .split_once('=')
            .ok_or_else(|| parse_err(ln, "missing `=`"))?;
        let set = g.parse_set(set).map_err(|e| parse_err(ln, e.to_string()))?;
        let value = parse_rational(value).map_err(|e| parse_err(ln, e.to_string()))?;
        let certificate = match comment {
            Some("exact-search") => CertificateRef::ExactSearch,
            Some(path) if !path.is_empty() => CertificateRef::MatrixFile(path.to_string()),
            _ => return Err(parse_err(ln, "entry has no certificate reference")),
        };
        out.push(TableLine {
            set,
            value,
            certificate,
        });
    }
    Ok(out)
}

pub fn format_oracle_table(g: &Graph, lines: &[TableLine]) -> String {
    lines
        .iter()
        .map(|l| {
            let cert = match &l.certificate {
                CertificateRef::ExactSearch => "exact-search",
                CertificateRef::MatrixFile(p) => p,
            };
            format!(
                "S:{} = {}  # {cert}\n",
                g.format_set(&l.set),
                format_rational(&l.value)
            )
        })
        .collect()
}

/// Reads a table and its matrix files, then certifies every entry.
pub fn load_minrank_table(path: &Path, g: &Graph, field: FieldSpec) -> Result<MinrankOracle> {
    let text = std::fs::read_to_string(path)?;
    let dir = path.parent().unwrap_or(Path::new("."));
    let mut entries = Vec::new();
    for line in parse_oracle_table(&text, g)? {
        let certificate = match &line.certificate {
            CertificateRef::ExactSearch => EntryCertificate::ExactSearch,
            CertificateRef::MatrixFile(file) => {
                let sub = g.induced_subgraph(&line.set)?;
                let text = std::fs::read_to_string(dir.join(file))?;
                EntryCertificate::Matrix(FittingMatrix::parse_text(&text, sub)?)
            }
        };
        entries.push(TableEntry {
            set: line.set,
            value: line.value,
            certificate,
        });
    }
    make_minrank_oracle(g, field, entries)
}

/// Table over every nonempty subset of a path or cycle (at most 16
/// vertices). Each induced subgraph is a union of paths, or the whole
/// cycle; a component on `k` vertices gets `⌈k/2⌉` either way. Entries are
/// certified by clique partition matrices.
pub fn path_union_table(g: &Graph, field: FieldSpec) -> Result<Vec<TableEntry>> {
    if g.n() > MAX_FULL_VERTICES {
        return Err(Error::SizeLimit {
            what: "vertex count for a subset table",
            actual: g.n(),
            limit: MAX_FULL_VERTICES,
        });
    }
    if (0..g.n()).any(|v| g.degree(v) > 2) {
        return Err(domain("path tables need maximum degree 2"));
    }
    let mut entries = Vec::new();
    for mask in 1u64..1 << g.n() {
        let set = VertexSet::from_mask(g.n(), mask);
        let sub = g.induced_subgraph(&set)?;
        let value: usize = sub.components().iter().map(|c| path_minrank(c.len())).sum();
        let parts = minimum_clique_cover(&sub)?;
        entries.push(TableEntry {
            set,
            value: int(value as i64),
            certificate: EntryCertificate::Matrix(FittingMatrix::from_clique_partition(
                sub, field, &parts,
            )?),
        });
    }
    Ok(entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::BoundOracle;
    use crate::scalar::int;

    #[test]
    fn parses_and_formats() {
        let g = Graph::cycle(5).unwrap();
        let text = "# cycle table\nS:{0,1,2} = 2  # exact-search\nS:{0,1,2,3,4} = 3 # c5.mat\n";
        let lines = parse_oracle_table(text, &g).unwrap();
        assert_eq!(lines.len(), 2);
        assert_eq!(
            lines[1].certificate,
            CertificateRef::MatrixFile("c5.mat".into())
        );
        assert_eq!(
            parse_oracle_table(&format_oracle_table(&g, &lines), &g).unwrap(),
            lines
        );
        assert!(parse_oracle_table("S:{0} = 1\n", &g).is_err());
        assert!(parse_oracle_table("{0} = 1 # exact-search\n", &g).is_err());
    }

    #[test]
    fn cycle_tables_are_certified() {
        for n in [5, 7] {
            let g = Graph::cycle(n).unwrap();
            let entries = path_union_table(&g, FieldSpec::Rationals).unwrap();
            assert_eq!(entries.len(), (1 << n) - 1);
            let full = entries.last().unwrap();
            assert_eq!(full.value, int((n as i64 + 1) / 2));
            make_minrank_oracle(&g, FieldSpec::Rationals, entries).unwrap();
        }
        assert!(path_union_table(&Graph::complete(4).unwrap(), FieldSpec::Rationals).is_err());
    }

    #[test]
    fn loads_matrix_certificates() {
        let dir = tempfile::tempdir().unwrap();
        let g = Graph::schlafli_complement();
        let f11 = FieldSpec::Prime(11);
        let m = FittingMatrix::adjacency_minus_identity(g.clone(), f11);
        std::fs::write(dir.path().join("a.mat"), m.to_text()).unwrap();
        let all = g.format_set(&g.all_vertices());
        let table = dir.path().join("t.txt");
        std::fs::write(&table, format!("S:{all} = 7 # a.mat\n")).unwrap();
        let o = load_minrank_table(&table, &g, f11).unwrap();
        assert_eq!(o.evaluate(&g, &g.all_vertices()).unwrap(), int(7));
        std::fs::write(&table, format!("S:{all} = 6 # a.mat\n")).unwrap();
        assert!(load_minrank_table(&table, &g, f11).is_err());
    }
}
