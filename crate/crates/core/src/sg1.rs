//! The SG1 text format for signed graphs.
//!
//! ```text
//! # optional comments
//! n m
//! u v s        (m lines, s is '+' or '-')
//! ```
//!
//! Blank lines and lines starting with `#` are ignored. All CLI input and
//! output of graphs uses this format.

use crate::{Error, Result, SignedGraph};
use std::fmt::Write as _;

/// Parses a signed graph from SG1 text.
pub fn parse(text: &str) -> Result<SignedGraph> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges: Vec<(usize, usize, i8)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fail = |msg: String| Error::Sg1Parse { line: line_no, msg };
        let fields: Vec<&str> = line.split_whitespace().collect();
        match header {
            None => {
                if fields.len() != 2 {
                    return Err(fail(format!(
                        "expected header `n m`, got {} field(s)",
                        fields.len()
                    )));
                }
                let n = fields[0]
                    .parse::<usize>()
                    .map_err(|_| fail(format!("invalid vertex count `{}`", fields[0])))?;
                let m = fields[1]
                    .parse::<usize>()
                    .map_err(|_| fail(format!("invalid edge count `{}`", fields[1])))?;
                header = Some((n, m));
            }
            Some((_, m)) => {
                if edges.len() == m {
                    return Err(fail(format!("more than {m} edge lines")));
                }
                if fields.len() != 3 {
                    return Err(fail(format!(
                        "expected edge line `u v s`, got {} field(s)",
                        fields.len()
                    )));
                }
                let u = fields[0]
                    .parse::<usize>()
                    .map_err(|_| fail(format!("invalid endpoint `{}`", fields[0])))?;
                let v = fields[1]
                    .parse::<usize>()
                    .map_err(|_| fail(format!("invalid endpoint `{}`", fields[1])))?;
                let s = match fields[2] {
                    "+" => 1,
                    "-" => -1,
                    other => return Err(fail(format!("invalid sign `{other}` (want + or -)"))),
                };
                edges.push((u, v, s));
            }
        }
    }
    let (n, m) = header.ok_or(Error::Sg1Parse {
        line: 0,
        msg: "missing header line `n m`".into(),
    })?;
    if edges.len() != m {
        return Err(Error::Sg1Parse {
            line: 0,
            msg: format!("header promises {m} edges, found {}", edges.len()),
        });
    }
    SignedGraph::new(n, &edges)
}

/// Serializes a signed graph as SG1 text. Edges come out sorted, so
/// `parse(emit(g)) == g` and the output is deterministic.
pub fn emit(g: &SignedGraph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", g.order(), g.edge_count());
    for &(u, v, s) in g.edges() {
        let _ = writeln!(out, "{} {} {}", u, v, if s > 0 { '+' } else { '-' });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_with_comments_and_blank_lines() {
        let text = "# a triangle\n\n3 3\n0 1 +\n\n0 2 +\n# negative edge\n1 2 -\n";
        let g = parse(text).unwrap();
        assert_eq!(g.order(), 3);
        assert_eq!(g.sign(1, 2), -1);
    }

    #[test]
    fn round_trips() {
        let g = SignedGraph::new(5, &[(0, 4, -1), (1, 2, 1), (0, 1, 1)]).unwrap();
        assert_eq!(parse(&emit(&g)).unwrap(), g);
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(matches!(parse(""), Err(Error::Sg1Parse { .. })));
        assert!(matches!(parse("3"), Err(Error::Sg1Parse { .. })));
        assert!(matches!(parse("3 1\n0 1 x"), Err(Error::Sg1Parse { .. })));
        assert!(matches!(parse("3 2\n0 1 +"), Err(Error::Sg1Parse { .. })));
        assert!(matches!(
            parse("3 1\n0 1 +\n1 2 -"),
            Err(Error::Sg1Parse { .. })
        ));
        // Structural errors surface from graph validation.
        assert!(matches!(
            parse("3 1\n0 3 +"),
            Err(Error::VertexOutOfRange { .. })
        ));
        assert!(matches!(
            parse("3 2\n0 1 +\n1 0 -"),
            Err(Error::DuplicateEdge { .. })
        ));
    }
}
