//! Matrix Market input, the plain-text edge-list dump, and the two rules that
//! turn an arbitrary sparsity pattern into a DAG benchmark instance.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::graph::DiGraph;

/// Sparsity pattern of a matrix; numeric values are discarded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparsePattern {
    pub rows: usize,
    pub cols: usize,
    /// Sorted, unique 0-based `(row, col)` coordinates. Symmetric storage is
    /// already expanded.
    pub entries: Vec<(usize, usize)>,
    /// Whether the header declared symmetric (or skew-symmetric) storage.
    pub symmetric: bool,
}

impl SparsePattern {
    pub fn new(rows: usize, cols: usize, mut entries: Vec<(usize, usize)>) -> Result<Self> {
        for &(i, j) in &entries {
            if i >= rows || j >= cols {
                return Err(Error::EndpointOutOfRange { u: i, v: j, n: rows.max(cols) });
            }
        }
        entries.sort_unstable();
        entries.dedup();
        Ok(Self {
            rows,
            cols,
            entries,
            symmetric: false,
        })
    }

    fn ensure_square(&self) -> Result<usize> {
        if self.rows != self.cols {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok(self.rows)
    }

    /// Graph of the strictly upper triangular part, edge `i -> j` for `i < j`.
    pub fn upper_graph(&self) -> Result<DiGraph> {
        let n = self.ensure_square()?;
        let edges: Vec<_> = self.entries.iter().copied().filter(|&(i, j)| i < j).collect();
        DiGraph::from_edges(n, &edges)
    }

    /// Graph of the strictly lower triangular part, edge `i -> j` for `i > j`.
    pub fn lower_graph(&self) -> Result<DiGraph> {
        let n = self.ensure_square()?;
        let edges: Vec<_> = self.entries.iter().copied().filter(|&(i, j)| i > j).collect();
        DiGraph::from_edges(n, &edges)
    }
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

/// Reads a coordinate-format Matrix Market stream.
pub fn parse_matrix_market<R: BufRead>(reader: R) -> Result<SparsePattern> {
    let mut lines = reader.lines().enumerate();

    let (_, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, "empty input"))?;
    let header = header?;
    let tokens: Vec<String> = header.split_whitespace().map(|t| t.to_ascii_lowercase()).collect();
    if tokens.len() != 5 || tokens[0] != "%%matrixmarket" || tokens[1] != "matrix" {
        return Err(parse_err(1, format!("malformed header `{header}`")));
    }
    if tokens[2] != "coordinate" {
        return Err(Error::UnsupportedFormat(tokens[2].clone()));
    }
    let values_per_entry = match tokens[3].as_str() {
        "pattern" => 0,
        "real" | "integer" | "double" => 1,
        other => return Err(Error::UnsupportedFormat(format!("field `{other}`"))),
    };
    let symmetric = match tokens[4].as_str() {
        "general" => false,
        "symmetric" | "skew-symmetric" => true,
        other => return Err(Error::UnsupportedFormat(format!("symmetry `{other}`"))),
    };

    let mut size: Option<(usize, usize, usize)> = None;
    let mut entries = Vec::new();
    let mut seen = 0usize;
    for (idx, line) in lines {
        let lineno = idx + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        match size {
            None => {
                if fields.len() != 3 {
                    return Err(parse_err(lineno, "size line needs `rows cols nnz`"));
                }
                let parse = |s: &str| {
                    s.parse::<usize>()
                        .map_err(|_| parse_err(lineno, format!("bad integer `{s}`")))
                };
                let dims = (parse(fields[0])?, parse(fields[1])?, parse(fields[2])?);
                entries.reserve(if symmetric { 2 * dims.2 } else { dims.2 });
                size = Some(dims);
            }
            Some((rows, cols, nnz)) => {
                if fields.len() < 2 + values_per_entry {
                    return Err(parse_err(lineno, "entry has too few fields"));
                }
                let parse = |s: &str| {
                    s.parse::<usize>()
                        .map_err(|_| parse_err(lineno, format!("bad index `{s}`")))
                };
                let (i, j) = (parse(fields[0])?, parse(fields[1])?);
                if i == 0 || j == 0 || i > rows || j > cols {
                    return Err(parse_err(
                        lineno,
                        format!("index ({i}, {j}) outside {rows} x {cols}"),
                    ));
                }
                seen += 1;
                if seen > nnz {
                    return Err(parse_err(lineno, format!("more than {nnz} entries")));
                }
                entries.push((i - 1, j - 1));
                if symmetric && i != j {
                    entries.push((j - 1, i - 1));
                }
            }
        }
    }
    let (rows, cols, nnz) = size.ok_or_else(|| parse_err(1, "missing size line"))?;
    if seen != nnz {
        return Err(parse_err(0, format!("expected {nnz} entries, found {seen}")));
    }
    entries.sort_unstable();
    entries.dedup();
    Ok(SparsePattern {
        rows,
        cols,
        entries,
        symmetric,
    })
}

/// Writes the (expanded) pattern as a `pattern general` file.
pub fn write_matrix_market<W: Write>(p: &SparsePattern, mut w: W) -> Result<()> {
    writeln!(w, "%%MatrixMarket matrix coordinate pattern general")?;
    writeln!(w, "{} {} {}", p.rows, p.cols, p.entries.len())?;
    for &(i, j) in &p.entries {
        writeln!(w, "{} {}", i + 1, j + 1)?;
    }
    Ok(())
}

/// Off-diagonal entries as edges, plus the percentage of edges whose reverse
/// is also present.
pub fn to_digraph(p: &SparsePattern) -> Result<(DiGraph, f64)> {
    let n = p.ensure_square()?;
    let g = DiGraph::from_edges(n, &p.entries)?;
    Ok((g.clone(), symmetric_edge_percent(&g)))
}

pub fn symmetric_edge_percent(g: &DiGraph) -> f64 {
    if g.num_edges() == 0 {
        return 0.0;
    }
    let sym = g.edges().iter().filter(|&&(u, v)| g.has_edge(v, u)).count();
    100.0 * sym as f64 / g.num_edges() as f64
}

/// Edges per vertex incident to at least one edge; zero for an edgeless graph.
///
/// Isolated vertices are excluded from the denominator. Counting edges alone
/// would be the other natural reading.
pub fn edge_density(g: &DiGraph) -> f64 {
    let spanned = (0..g.n()).filter(|&v| g.degree(v) > 0).count();
    if spanned == 0 {
        0.0
    } else {
        g.num_edges() as f64 / spanned as f64
    }
}

/// Upper part unless the lower part is strictly denser.
fn denser(upper: DiGraph, lower: DiGraph) -> DiGraph {
    if edge_density(&lower) > edge_density(&upper) {
        lower
    } else {
        upper
    }
}

fn non_empty(g: DiGraph) -> Result<DiGraph> {
    if g.num_edges() == 0 {
        Err(Error::EmptyGraph)
    } else {
        Ok(g)
    }
}

/// Conversion used for the acyclic bi-partitioning benchmarks: prefer a
/// weakly connected triangular part, otherwise the largest component of the
/// denser one.
pub fn acyclic_convert_partition_rule(p: &SparsePattern) -> Result<DiGraph> {
    let upper = p.upper_graph()?;
    let lower = p.lower_graph()?;
    let chosen = match (upper.is_weakly_connected(), lower.is_weakly_connected()) {
        (true, false) => upper,
        (false, true) => lower,
        (true, true) => denser(upper, lower),
        (false, false) => {
            let g = denser(upper, lower);
            let comps = g.weakly_connected_components();
            // Largest component; ties go to the one with the smallest vertex.
            let largest = comps
                .iter()
                .enumerate()
                .max_by_key(|(i, c)| (c.len(), std::cmp::Reverse(*i)))
                .map(|(_, c)| c.clone())
                .unwrap_or_default();
            // Ascending relabeling keeps the part triangular.
            g.induced_subgraph(&largest).0
        }
    };
    non_empty(chosen)
}

/// Conversion used for the topological-order benchmarks: the denser
/// triangular part, all vertices kept.
pub fn acyclic_convert_toporder_rule(p: &SparsePattern) -> Result<DiGraph> {
    non_empty(denser(p.upper_graph()?, p.lower_graph()?))
}

/// Writes the edge-list dump: a `# n=<count>` header, then `u v` per line in
/// sorted edge order.
pub fn write_edge_list<W: Write>(g: &DiGraph, mut w: W) -> Result<()> {
    writeln!(w, "# n={}", g.n())?;
    for &(u, v) in g.edges() {
        writeln!(w, "{u} {v}")?;
    }
    Ok(())
}

pub fn edge_list_string(g: &DiGraph) -> String {
    let mut buf = Vec::new();
    write_edge_list(g, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("edge list is ASCII")
}

pub fn read_edge_list<R: BufRead>(reader: R) -> Result<DiGraph> {
    let mut n: Option<usize> = None;
    let mut edges = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix('#') {
            if n.is_none() {
                let count = rest
                    .trim()
                    .strip_prefix("n=")
                    .ok_or_else(|| parse_err(lineno, "expected `# n=<count>` header"))?;
                n = Some(
                    count
                        .trim()
                        .parse()
                        .map_err(|_| parse_err(lineno, format!("bad vertex count `{count}`")))?,
                );
            }
            continue;
        }
        if n.is_none() {
            return Err(parse_err(lineno, "edge before `# n=<count>` header"));
        }
        let mut it = trimmed.split_whitespace();
        let mut next = || -> Result<usize> {
            let tok = it.next().ok_or_else(|| parse_err(lineno, "expected `u v`"))?;
            tok.parse()
                .map_err(|_| parse_err(lineno, format!("bad vertex id `{tok}`")))
        };
        let (u, v) = (next()?, next()?);
        edges.push((u, v));
    }
    let n = n.ok_or_else(|| parse_err(1, "missing `# n=<count>` header"))?;
    DiGraph::from_edges(n, &edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Result<SparsePattern> {
        parse_matrix_market(s.as_bytes())
    }

    #[test]
    fn parses_general_pattern() {
        let p = parse("%%MatrixMarket matrix coordinate pattern general\n% c\n3 3 2\n1 2\n2 3\n")
            .unwrap();
        assert_eq!(p.entries, vec![(0, 1), (1, 2)]);
        assert!(!p.symmetric);
    }

    #[test]
    fn expands_symmetric() {
        let p = parse("%%MatrixMarket matrix coordinate real symmetric\n2 2 1\n2 1 3.5\n").unwrap();
        assert_eq!(p.entries, vec![(0, 1), (1, 0)]);
        assert!(p.symmetric);
    }

    #[test]
    fn rejects_out_of_bounds_and_bad_formats() {
        assert!(matches!(
            parse("%%MatrixMarket matrix coordinate pattern general\n3 3 1\n4 1\n"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse("%%MatrixMarket matrix array real general\n2 2\n1\n2\n3\n4\n"),
            Err(Error::UnsupportedFormat(_))
        ));
        assert!(matches!(
            parse("%%MatrixMarket matrix coordinate complex general\n1 1 1\n1 1 1 0\n"),
            Err(Error::UnsupportedFormat(_))
        ));
        assert!(matches!(parse("garbage\n"), Err(Error::Parse { .. })));
        assert!(parse("%%MatrixMarket matrix coordinate pattern general\n3 3 2\n1 2\n").is_err());
    }

    #[test]
    fn symmetric_percentage() {
        let p = SparsePattern::new(3, 3, vec![(0, 1), (1, 0), (1, 2)]).unwrap();
        let (g, pct) = to_digraph(&p).unwrap();
        assert_eq!(g.num_edges(), 3);
        assert!((pct - 200.0 / 3.0).abs() < 1e-12);
        let lower = SparsePattern::new(3, 3, vec![(1, 0), (2, 0), (2, 1)]).unwrap();
        assert_eq!(to_digraph(&lower).unwrap().1, 0.0);
    }

    #[test]
    fn non_square_rejected() {
        let p = SparsePattern::new(2, 3, vec![(0, 1)]).unwrap();
        assert!(matches!(to_digraph(&p), Err(Error::NotSquare { .. })));
        assert!(acyclic_convert_toporder_rule(&p).is_err());
    }

    #[test]
    fn partition_rule_prefers_connected_part() {
        let p = SparsePattern::new(3, 3, vec![(0, 1), (1, 2), (2, 0)]).unwrap();
        let g = acyclic_convert_partition_rule(&p).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
    }

    #[test]
    fn partition_rule_tie_goes_upper() {
        let p = SparsePattern::new(3, 3, vec![(0, 1), (1, 0), (1, 2), (2, 1)]).unwrap();
        let g = acyclic_convert_partition_rule(&p).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
    }

    #[test]
    fn partition_rule_largest_component_of_denser_part() {
        // Upper: {0->1, 2->3, 3->4, 2->4} (disconnected), lower: {4->0} (disconnected).
        let p = SparsePattern::new(5, 5, vec![(0, 1), (2, 3), (3, 4), (2, 4), (4, 0)]).unwrap();
        let g = acyclic_convert_partition_rule(&p).unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.edges(), &[(0, 1), (0, 2), (1, 2)]);
    }

    #[test]
    fn toporder_rule_density() {
        let p = SparsePattern::new(3, 3, vec![(0, 1), (0, 2), (1, 0)]).unwrap();
        let g = acyclic_convert_toporder_rule(&p).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (0, 2)]);
        let sym = SparsePattern::new(2, 2, vec![(0, 1), (1, 0)]).unwrap();
        assert_eq!(acyclic_convert_toporder_rule(&sym).unwrap().edges(), &[(0, 1)]);
        let lower = SparsePattern::new(3, 3, vec![(1, 0), (2, 1), (0, 2)]).unwrap();
        // Lower: 2 edges on 3 vertices; upper: 1 edge on 2 vertices.
        assert_eq!(acyclic_convert_toporder_rule(&lower).unwrap().edges(), &[(1, 0), (2, 1)]);
    }

    #[test]
    fn empty_conversion_is_an_error() {
        let p = SparsePattern::new(2, 2, vec![(0, 0), (1, 1)]).unwrap();
        assert!(matches!(acyclic_convert_toporder_rule(&p), Err(Error::EmptyGraph)));
        assert!(matches!(acyclic_convert_partition_rule(&p), Err(Error::EmptyGraph)));
    }

    #[test]
    fn edge_list_format_is_exact() {
        let g = DiGraph::from_edges(3, &[(1, 2), (0, 1)]).unwrap();
        let s = edge_list_string(&g);
        assert_eq!(s, "# n=3\n0 1\n1 2\n");
        assert_eq!(read_edge_list(s.as_bytes()).unwrap(), g);
        assert!(read_edge_list("0 1\n".as_bytes()).is_err());
        assert!(read_edge_list("# n=2\n0 5\n".as_bytes()).is_err());
    }
}
