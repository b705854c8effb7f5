//! DIMACS shortest-path `.gr` files: parsing, writing, merging several
//! single-attribute files into one multi-attribute graph, and synthesising
//! the extra cost dimensions used by the benchmark.

use std::fmt::Write as _;
use std::io::{self, BufRead, Write};

use thiserror::Error;

use crate::cost::Cost;
use crate::graph::{Graph, StateId};

/// One `.gr` file: a single integer weight per arc, arcs in file order, ids
/// already converted to zero-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawAttributeGraph {
    pub name: String,
    pub state_count: usize,
    pub arcs: Vec<(u32, u32, Cost)>,
}

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing problem line")]
    MissingProblemLine,
    #[error("problem line declares {declared} arcs, file has {found}")]
    ArcCountMismatch { declared: usize, found: usize },
    #[error("read error: {0}")]
    Io(#[from] io::Error),
}

fn syntax(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        message: message.into(),
    }
}

/// Parses a `.gr` stream: `c` comment lines, one `p sp <n> <m>` line, then
/// `a <u> <v> <w>` arc lines with one-based ids.
pub fn parse_gr<R: BufRead>(reader: R, name: &str) -> Result<RawAttributeGraph, ParseError> {
    let mut header: Option<(usize, usize)> = None;
    let mut arcs = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line?;
        let mut fields = line.split_ascii_whitespace();
        match fields.next() {
            None | Some("c") => continue,
            Some("p") => {
                if header.is_some() {
                    return Err(syntax(line_no, "duplicate problem line"));
                }
                if fields.next() != Some("sp") {
                    return Err(syntax(line_no, "expected `p sp <n> <m>`"));
                }
                let n = parse_field::<usize>(fields.next(), line_no, "state count")?;
                let m = parse_field::<usize>(fields.next(), line_no, "arc count")?;
                if n > u32::MAX as usize {
                    return Err(syntax(line_no, "state count exceeds 32-bit ids"));
                }
                arcs.reserve(m);
                header = Some((n, m));
            }
            Some("a") => {
                let Some((n, _)) = header else {
                    return Err(syntax(line_no, "arc before problem line"));
                };
                let u = parse_field::<usize>(fields.next(), line_no, "arc tail")?;
                let v = parse_field::<usize>(fields.next(), line_no, "arc head")?;
                let w = parse_field::<Cost>(fields.next(), line_no, "arc weight")?;
                for id in [u, v] {
                    if id == 0 || id > n {
                        return Err(syntax(line_no, format!("state {id} out of range 1..={n}")));
                    }
                }
                arcs.push(((u - 1) as u32, (v - 1) as u32, w));
            }
            Some(other) => return Err(syntax(line_no, format!("unknown line type `{other}`"))),
        }
    }
    let (state_count, declared) = header.ok_or(ParseError::MissingProblemLine)?;
    if arcs.len() != declared {
        return Err(ParseError::ArcCountMismatch {
            declared,
            found: arcs.len(),
        });
    }
    Ok(RawAttributeGraph {
        name: name.to_string(),
        state_count,
        arcs,
    })
}

fn parse_field<T: std::str::FromStr>(field: Option<&str>, line: usize, what: &str) -> Result<T, ParseError> {
    let field = field.ok_or_else(|| syntax(line, format!("missing {what}")))?;
    field
        .parse()
        .map_err(|_| syntax(line, format!("invalid {what} `{field}`")))
}

pub fn parse_gr_str(text: &str, name: &str) -> Result<RawAttributeGraph, ParseError> {
    parse_gr(text.as_bytes(), name)
}

/// Writes `graph` in `.gr` form with one-based ids.
pub fn write_gr<W: Write>(graph: &RawAttributeGraph, mut out: W) -> io::Result<()> {
    writeln!(out, "c {}", graph.name)?;
    writeln!(out, "p sp {} {}", graph.state_count, graph.arcs.len())?;
    let mut line = String::new();
    for &(u, v, w) in &graph.arcs {
        line.clear();
        let _ = writeln!(line, "a {} {} {}", u + 1, v + 1, w);
        out.write_all(line.as_bytes())?;
    }
    Ok(())
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MergeError {
    #[error("no attribute files given")]
    Empty,
    #[error("`{name}` has {found} states, expected {expected}")]
    StateCount {
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("`{name}` has {found} arcs, expected {expected}")]
    ArcCount {
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("`{name}` diverges from `{first}` at arc {index}")]
    Topology { name: String, first: String, index: usize },
}

/// Combines single-attribute files over the same arc sequence into one
/// graph whose k-th cost dimension is the k-th file's weight.
pub fn merge_attributes(graphs: &[RawAttributeGraph]) -> Result<Graph, MergeError> {
    let first = graphs.first().ok_or(MergeError::Empty)?;
    for g in &graphs[1..] {
        if g.state_count != first.state_count {
            return Err(MergeError::StateCount {
                name: g.name.clone(),
                expected: first.state_count,
                found: g.state_count,
            });
        }
        if g.arcs.len() != first.arcs.len() {
            return Err(MergeError::ArcCount {
                name: g.name.clone(),
                expected: first.arcs.len(),
                found: g.arcs.len(),
            });
        }
        if let Some(index) = first
            .arcs
            .iter()
            .zip(&g.arcs)
            .position(|(a, b)| (a.0, a.1) != (b.0, b.1))
        {
            return Err(MergeError::Topology {
                name: g.name.clone(),
                first: first.name.clone(),
                index,
            });
        }
    }
    let arity = graphs.len();
    let sources = first.arcs.iter().map(|a| a.0).collect();
    let targets = first.arcs.iter().map(|a| a.1).collect();
    let mut costs = Vec::with_capacity(first.arcs.len() * arity);
    for i in 0..first.arcs.len() {
        costs.extend(graphs.iter().map(|g| g.arcs[i].2));
    }
    Ok(Graph::from_parts(first.state_count, arity, sources, targets, costs))
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExtendError {
    #[error("cannot extend a graph of arity {from} to arity {to}; supported: 2 -> 2, 3 or 4")]
    Unsupported { from: usize, to: usize },
}

/// Adds synthetic dimensions to a two-attribute graph. The third cost of arc
/// `(u, v)` is `(outdeg(u) + outdeg(v))/2` rounded half up; the fourth is 1.
pub fn extend_costs(graph: &Graph, target_arity: usize) -> Result<Graph, ExtendError> {
    if graph.arity() != 2 || !(2..=4).contains(&target_arity) {
        return Err(ExtendError::Unsupported {
            from: graph.arity(),
            to: target_arity,
        });
    }
    if target_arity == 2 {
        return Ok(graph.clone());
    }
    let (sources, targets, old) = graph.columns();
    let mut costs = Vec::with_capacity(sources.len() * target_arity);
    for (i, (&u, &v)) in sources.iter().zip(targets).enumerate() {
        costs.extend_from_slice(&old[2 * i..2 * i + 2]);
        let du = graph.out_degree(StateId(u)) as Cost;
        let dv = graph.out_degree(StateId(v)) as Cost;
        costs.push((du + dv + 1) / 2);
        if target_arity == 4 {
            costs.push(1);
        }
    }
    Ok(Graph::from_parts(
        graph.state_count(),
        target_arity,
        sources.to_vec(),
        targets.to_vec(),
        costs,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost::CostVector;

    #[test]
    fn minimal_file() {
        let g = parse_gr_str("p sp 2 1\na 1 2 5\n", "t").unwrap();
        assert_eq!(g.state_count, 2);
        assert_eq!(g.arcs, vec![(0, 1, 5)]);
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let g = parse_gr_str("c hello\nc\n\np sp 3 2\nc mid\na 1 2 -5\na 3 1 7\n", "t").unwrap();
        assert_eq!(g.arcs, vec![(0, 1, -5), (2, 0, 7)]);
    }

    #[test]
    fn out_of_range_arc_reports_line() {
        let err = parse_gr_str("p sp 2 1\na 1 3 5\n", "t").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { line: 2, .. }), "{err}");
    }

    #[test]
    fn structural_errors() {
        assert!(matches!(
            parse_gr_str("a 1 2 3\n", "t"),
            Err(ParseError::Syntax { line: 1, .. })
        ));
        assert!(matches!(
            parse_gr_str("c only\n", "t"),
            Err(ParseError::MissingProblemLine)
        ));
        assert!(matches!(
            parse_gr_str("p sp 2 1\na 1 2 x\n", "t"),
            Err(ParseError::Syntax { line: 2, .. })
        ));
        assert!(matches!(
            parse_gr_str("p sp 2 2\na 1 2 3\n", "t"),
            Err(ParseError::ArcCountMismatch { declared: 2, found: 1 })
        ));
    }

    #[test]
    fn write_then_parse() {
        let g = parse_gr_str("p sp 3 3\na 1 2 4\na 2 3 -1\na 2 3 9\n", "x").unwrap();
        let mut buf = Vec::new();
        write_gr(&g, &mut buf).unwrap();
        let again = parse_gr(buf.as_slice(), "x").unwrap();
        assert_eq!(again, g);
    }

    #[test]
    fn merge_two_files() {
        let d = parse_gr_str("p sp 3 2\na 1 2 10\na 2 3 20\n", "d").unwrap();
        let t = parse_gr_str("p sp 3 2\na 1 2 1\na 2 3 2\n", "t").unwrap();
        let g = merge_attributes(&[d.clone(), t]).unwrap();
        assert_eq!(g.arity(), 2);
        assert_eq!(g.edge(1).cost, &[20, 2]);
        let single = merge_attributes(&[d]).unwrap();
        assert_eq!(single.arity(), 1);
    }

    #[test]
    fn merge_detects_swapped_arcs() {
        let d = parse_gr_str("p sp 3 2\na 1 2 10\na 2 3 20\n", "d").unwrap();
        let t = parse_gr_str("p sp 3 2\na 2 3 2\na 1 2 1\n", "t").unwrap();
        assert_eq!(
            merge_attributes(&[d, t]).unwrap_err(),
            MergeError::Topology {
                name: "t".into(),
                first: "d".into(),
                index: 0
            }
        );
        assert_eq!(merge_attributes(&[]).unwrap_err(), MergeError::Empty);
    }

    #[test]
    fn extension_by_degree() {
        // outdeg(0) = 4, outdeg(1) = 2.
        let mut edges = vec![(0, 1, CostVector::from([5, 6]))];
        for t in 2..5 {
            edges.push((0, t, CostVector::from([1, 1])));
        }
        edges.push((1, 2, CostVector::from([1, 1])));
        edges.push((1, 3, CostVector::from([1, 1])));
        edges.push((2, 3, CostVector::from([1, 1])));
        let g = Graph::from_edges(5, 2, edges).unwrap();
        let e3 = extend_costs(&g, 3).unwrap();
        assert_eq!(e3.edge(0).cost, &[5, 6, 3]);
        // 0 -> 2: (4 + 1) / 2 = 2.5 rounds up.
        assert_eq!(e3.edge(1).cost[2], 3);
        // 1 -> 2: (2 + 1) / 2 = 1.5 rounds up.
        assert_eq!(e3.edge(4).cost[2], 2);
        // 2 -> 3: (1 + 0) / 2 = 0.5 rounds up.
        assert_eq!(e3.edge(6).cost[2], 1);
        let e4 = extend_costs(&g, 4).unwrap();
        assert!(e4.edges().all(|e| e.cost[3] == 1));
        assert_eq!(e4.edge(0).cost, &[5, 6, 3, 1]);
        let same = extend_costs(&g, 2).unwrap();
        assert_eq!(same.edge(0).cost, &[5, 6]);
        assert!(extend_costs(&g, 5).is_err());
        assert!(extend_costs(&e3, 4).is_err());
    }
}
