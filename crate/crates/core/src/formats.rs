//! Line-oriented text formats.
//!
//! Graph files:
//!
//! ```text
//! graph <id> <vertex_count>
//! e <u> <v>          # one per edge, 0-based, u < v, ascending
//! ```
//!
//! Design files:
//!
//! ```text
//! design <id>
//! snark G<k>
//! host complete <n> [inf] | host multipartite <layout-id>
//! map <name> segments (<base>,<len>,<step>)[,...] [fix <vertex>...]
//! block <map-name> <v1> ... <v24>
//! ```
//!
//! `#` starts a comment and blank lines are ignored. The token `inf` names
//! the point at infinity of a `complete <n> inf` host (vertex `n - 1`).

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use serde::Serialize;
use thiserror::Error;

use crate::catalog::{CatalogError, SnarkId};
use crate::design::{BaseBlock, DesignRecord, MapError, MapSegment, NamedMap, PiecewiseModularMap, VerificationReport};
use crate::graph::{Edge, GraphError, LabeledGraph};
use crate::host::{HostDecl, HostError, HostGraph, LayoutId, LayoutSegment, PartitionLayout};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Graph { line: usize, source: GraphError },
    #[error("line {line}: {source}")]
    Map { line: usize, source: MapError },
    #[error("line {line}: {source}")]
    Host { line: usize, source: HostError },
    #[error("line {line}: {source}")]
    Snark { line: usize, source: CatalogError },
}

fn syntax<T>(line: usize, message: impl Into<String>) -> Result<T, FormatError> {
    Err(FormatError::Syntax { line, message: message.into() })
}

/// Non-blank lines with comments stripped, paired with 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = body.split_whitespace().collect();
        (!tokens.is_empty()).then_some((i + 1, tokens))
    })
}

fn number(line: usize, token: &str) -> Result<usize, FormatError> {
    token.parse().or_else(|_| syntax(line, format!("expected a non-negative integer, found `{token}`")))
}

/// Parses one graph file into its id and graph.
pub fn parse_graph(text: &str) -> Result<(String, LabeledGraph), FormatError> {
    let mut lines = content_lines(text);
    let Some((header_line, header)) = lines.next() else {
        return syntax(1, "empty graph file");
    };
    let (id, n) = match header.as_slice() {
        ["graph", id, n] => (id.to_string(), number(header_line, n)?),
        _ => return syntax(header_line, "expected `graph <id> <vertex_count>`"),
    };
    let mut edges = Vec::new();
    let mut last: Option<Edge> = None;
    let mut last_line = header_line;
    for (line, tokens) in lines {
        last_line = line;
        let (u, v) = match tokens.as_slice() {
            ["e", u, v] => (number(line, u)?, number(line, v)?),
            _ => return syntax(line, "expected `e <u> <v>`"),
        };
        if u == v {
            return Err(FormatError::Graph { line, source: GraphError::LoopEdge(u) });
        }
        if u > v {
            return syntax(line, format!("edge endpoints must satisfy u < v, found {u} {v}"));
        }
        if v >= n {
            return Err(FormatError::Graph {
                line,
                source: GraphError::VertexOutOfRange { vertex: v, vertex_count: n },
            });
        }
        match last {
            Some(prev) if prev == (u, v) => {
                return Err(FormatError::Graph { line, source: GraphError::DuplicateEdge(u, v) })
            }
            Some(prev) if prev > (u, v) => return syntax(line, "edges must be in ascending order"),
            _ => {}
        }
        last = Some((u, v));
        edges.push((u, v));
    }
    let graph = LabeledGraph::new(n, edges).map_err(|source| FormatError::Graph { line: last_line, source })?;
    Ok((id, graph))
}

pub fn emit_graph(id: &str, graph: &LabeledGraph) -> String {
    let mut out = format!("graph {id} {}\n", graph.vertex_count());
    for &(u, v) in graph.edges() {
        let _ = writeln!(out, "e {u} {v}");
    }
    out
}

fn parse_host(line: usize, tokens: &[&str]) -> Result<HostGraph, FormatError> {
    let decl = match tokens {
        ["complete", n] => HostDecl::Complete { n: number(line, n)?, infinity: false },
        ["complete", n, "inf"] => HostDecl::Complete { n: number(line, n)?, infinity: true },
        ["multipartite", "segments", rest @ ..] => {
            let triples = parse_triples(line, &rest.concat())?;
            let segments = triples
                .into_iter()
                .map(|(base, len, part)| {
                    let part = usize::try_from(part).or_else(|_| syntax(line, "negative part index"))?;
                    Ok(LayoutSegment { base: to_usize(line, base)?, len: to_usize(line, len)?, part })
                })
                .collect::<Result<Vec<_>, FormatError>>()?;
            HostDecl::Custom(PartitionLayout::Segments(segments))
        }
        ["multipartite", id] => {
            HostDecl::Named(id.parse::<LayoutId>().map_err(|source| FormatError::Host { line, source })?)
        }
        _ => return syntax(line, "expected `host complete <n> [inf]` or `host multipartite <layout-id>`"),
    };
    HostGraph::from_decl(&decl).map_err(|source| FormatError::Host { line, source })
}

fn to_usize(line: usize, x: i64) -> Result<usize, FormatError> {
    usize::try_from(x).or_else(|_| syntax(line, format!("expected a non-negative integer, found {x}")))
}

/// Parses `(a,b,c),(d,e,f),...` with whitespace already removed.
fn parse_triples(line: usize, text: &str) -> Result<Vec<(i64, i64, i64)>, FormatError> {
    let mut out = Vec::new();
    let mut rest = text;
    loop {
        let Some(inner_start) = rest.strip_prefix('(') else {
            return syntax(line, format!("expected `(` in segment list `{text}`"));
        };
        let Some(close) = inner_start.find(')') else {
            return syntax(line, "unclosed segment");
        };
        let fields: Vec<&str> = inner_start[..close].split(',').collect();
        let [a, b, c] = fields.as_slice() else {
            return syntax(line, "segments have exactly three fields");
        };
        let parse = |s: &str| s.parse::<i64>().or_else(|_| syntax(line, format!("bad integer `{s}` in segment")));
        out.push((parse(a)?, parse(b)?, parse(c)?));
        rest = &inner_start[close + 1..];
        if rest.is_empty() {
            return Ok(out);
        }
        rest = match rest.strip_prefix(',') {
            Some(r) => r,
            None => return syntax(line, "segments must be separated by commas"),
        };
    }
}

fn parse_vertex(line: usize, token: &str, host: &HostGraph) -> Result<usize, FormatError> {
    if token == "inf" {
        return host.infinity().map_or_else(|| syntax(line, "`inf` used on a host without infinity"), Ok);
    }
    let v = number(line, token)?;
    let finite = host.vertex_count() - host.infinity().map_or(0, |_| 1);
    if v >= finite {
        return syntax(line, format!("vertex {v} out of range 0..{finite}"));
    }
    Ok(v)
}

fn parse_map_tokens(line: usize, rest: &[&str], host: &HostGraph) -> Result<PiecewiseModularMap, FormatError> {
    let fix_at = rest.iter().position(|&t| t == "fix").unwrap_or(rest.len());
    if fix_at == 0 {
        return syntax(line, "map needs at least one segment");
    }
    let triples = parse_triples(line, &rest[..fix_at].concat())?;
    let segments = triples
        .into_iter()
        .map(|(b, l, s)| Ok(MapSegment::new(to_usize(line, b)?, to_usize(line, l)?, s)))
        .collect::<Result<Vec<_>, FormatError>>()?;
    let fixed = rest[(fix_at + 1).min(rest.len())..]
        .iter()
        .map(|t| parse_vertex(line, t, host))
        .collect::<Result<Vec<_>, _>>()?;
    if fix_at < rest.len() && fixed.is_empty() {
        return syntax(line, "`fix` needs at least one vertex");
    }
    PiecewiseModularMap::new(segments, fixed, host).map_err(|source| FormatError::Map { line, source })
}

/// Parses the text after `host` in a design file, e.g. `complete 136 inf`.
pub fn parse_host_spec(text: &str) -> Result<HostGraph, FormatError> {
    let tokens: Vec<&str> = text.split_whitespace().collect();
    parse_host(1, &tokens)
}

/// Parses the text after `map <name> segments`, e.g. `(0,135,3) fix inf`.
pub fn parse_map_spec(text: &str, host: &HostGraph) -> Result<PiecewiseModularMap, FormatError> {
    let tokens: Vec<&str> = text.split_whitespace().collect();
    parse_map_tokens(1, &tokens, host)
}

/// Parses a design file into a record. Map validity is checked here;
/// block contents are left for the verifier.
pub fn parse_design(text: &str) -> Result<DesignRecord, FormatError> {
    let mut id: Option<String> = None;
    let mut snark: Option<SnarkId> = None;
    let mut host: Option<HostGraph> = None;
    let mut maps: Vec<NamedMap> = Vec::new();
    let mut blocks: Vec<BaseBlock> = Vec::new();
    let mut last_line = 0;

    for (line, tokens) in content_lines(text) {
        last_line = line;
        let header_done = id.is_some() && snark.is_some() && host.is_some();
        match tokens[0] {
            "design" => {
                if id.is_some() {
                    return syntax(line, "duplicate `design` line");
                }
                let [_, name] = tokens.as_slice() else { return syntax(line, "expected `design <id>`") };
                id = Some(name.to_string());
            }
            "snark" => {
                if snark.is_some() {
                    return syntax(line, "duplicate `snark` line");
                }
                let [_, name] = tokens.as_slice() else { return syntax(line, "expected `snark G<k>`") };
                snark = Some(name.parse().map_err(|source| FormatError::Snark { line, source })?);
            }
            "host" => {
                if host.is_some() {
                    return syntax(line, "duplicate `host` line");
                }
                host = Some(parse_host(line, &tokens[1..])?);
            }
            "map" if header_done => {
                let host = host.as_ref().expect("header complete");
                let (name, rest) = match tokens.as_slice() {
                    [_, name, "segments", rest @ ..] if !rest.is_empty() => (*name, rest),
                    _ => return syntax(line, "expected `map <name> segments (<base>,<len>,<step>)...`"),
                };
                if maps.iter().any(|m| m.name == name) {
                    return syntax(line, format!("map `{name}` declared twice"));
                }
                let map = parse_map_tokens(line, rest, host)?;
                maps.push(NamedMap { name: name.to_string(), map });
            }
            "block" if header_done => {
                let host = host.as_ref().expect("header complete");
                let expected = snark.expect("header complete").graph().vertex_count();
                let [_, name, vertices @ ..] = tokens.as_slice() else {
                    return syntax(line, "expected `block <map> <vertices>`");
                };
                let Some(map) = maps.iter().position(|m| m.name == *name) else {
                    return syntax(line, format!("block uses undeclared map `{name}`"));
                };
                if vertices.len() != expected {
                    return syntax(line, format!("block has {} vertices, expected {expected}", vertices.len()));
                }
                let tuple = vertices.iter().map(|t| parse_vertex(line, t, host)).collect::<Result<Vec<_>, _>>()?;
                blocks.push(BaseBlock { tuple, map });
            }
            "map" | "block" => return syntax(line, "`design`, `snark` and `host` must come first"),
            other => return syntax(line, format!("unknown directive `{other}`")),
        }
    }
    let (Some(id), Some(snark), Some(host)) = (id, snark, host) else {
        return syntax(last_line.max(1), "missing `design`, `snark` or `host` line");
    };
    if blocks.is_empty() {
        return syntax(last_line, "design has no blocks");
    }
    Ok(DesignRecord { id, snark, host, maps, blocks })
}

/// Canonical text: header, maps in declaration order, blocks in input order.
pub fn emit_design(record: &DesignRecord) -> String {
    let host = &record.host;
    let mut out = format!("design {}\nsnark {}\nhost {}\n", record.id, record.snark, host.decl());
    for named in &record.maps {
        let segments: Vec<String> =
            named.map.segments().iter().map(|s| format!("({},{},{})", s.base, s.len, s.step)).collect();
        let _ = write!(out, "map {} segments {}", named.name, segments.join(","));
        if !named.map.fixed_points().is_empty() {
            out.push_str(" fix");
            for &v in named.map.fixed_points() {
                let _ = write!(out, " {}", host.vertex_label(v));
            }
        }
        out.push('\n');
    }
    for block in &record.blocks {
        let _ = write!(out, "block {}", record.maps[block.map].name);
        for &v in &block.tuple {
            let _ = write!(out, " {}", host.vertex_label(v));
        }
        out.push('\n');
    }
    out
}

/// Machine-readable report object.
#[derive(Debug, Serialize)]
pub struct MachineReport<'a> {
    pub id: &'a str,
    pub pass: bool,
    pub blocks: u64,
    pub edges: usize,
    pub histogram: BTreeMap<String, usize>,
    pub violations: &'a [crate::design::Violation],
    pub violation_total: usize,
    pub failure: Option<&'a str>,
}

impl<'a> From<&'a VerificationReport> for MachineReport<'a> {
    fn from(r: &'a VerificationReport) -> Self {
        MachineReport {
            id: &r.id,
            pass: r.pass,
            blocks: r.developed_block_count,
            edges: r.host_edge_count,
            histogram: r.coverage_histogram.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            violations: &r.violations,
            violation_total: r.violation_total,
            failure: r.failure.as_deref(),
        }
    }
}

pub fn emit_report_machine(report: &VerificationReport) -> String {
    serde_json::to_string(&MachineReport::from(report)).expect("report serializes")
}

pub fn emit_report_human(report: &VerificationReport) -> String {
    report.to_string()
}

pub(crate) fn write_report_human(f: &mut fmt::Formatter<'_>, r: &VerificationReport) -> fmt::Result {
    writeln!(f, "{}: {}", r.id, if r.pass { "PASS" } else { "FAIL" })?;
    writeln!(f, "  developed blocks: {}", r.developed_block_count)?;
    writeln!(f, "  host edges: {}", r.host_edge_count)?;
    let hist: Vec<String> = r.coverage_histogram.iter().map(|(m, c)| format!("{m}x{c}")).collect();
    writeln!(f, "  coverage: {}", if hist.is_empty() { "-".to_string() } else { hist.join(" ") })?;
    if let Some(cause) = &r.failure {
        writeln!(f, "  failure: {cause}")?;
    }
    if r.violation_total > 0 {
        writeln!(f, "  violations: {} edges", r.violation_total)?;
        for v in &r.violations {
            writeln!(f, "    {{{}, {}}} covered {} times", v.edge.0, v.edge.1, v.multiplicity)?;
        }
        if r.violation_total > r.violations.len() {
            writeln!(f, "    ... {} more", r.violation_total - r.violations.len())?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const K73_G1: &str = "design g01-k73\nsnark G1\nhost complete 73\nmap a segments (0,73,1)\nblock a 0 1 2 3 5 6 11 13 15 16 24 30 28 44 4 47 49 10 35 70 8 21 61 45\n";

    #[test]
    fn graph_round_trip() {
        let text = "graph tri 3\ne 0 1\ne 0 2\ne 1 2\n";
        let (id, g) = parse_graph(text).unwrap();
        assert_eq!(id, "tri");
        assert_eq!(g.edge_count(), 3);
        assert_eq!(emit_graph(&id, &g), text);
    }

    #[test]
    fn graph_rejections() {
        let cases = [
            ("", "empty"),
            ("graph x\n", "header"),
            ("graph x 3\ne 1 0\n", "u < v"),
            ("graph x 3\ne 0 2\ne 0 1\n", "ascending"),
            ("graph x 3\ne 0 1\ne 0 1\n", "duplicate"),
            ("graph x 3\ne 0 3\n", "range"),
            ("graph x 3\ne 1 1\n", "loop"),
            ("graph x 3\nf 0 1\n", "directive"),
        ];
        for (text, what) in cases {
            assert!(parse_graph(text).is_err(), "{what}");
        }
    }

    #[test]
    fn design_parse_and_emit() {
        let r = parse_design(K73_G1).unwrap();
        assert_eq!(r.id, "g01-k73");
        assert_eq!(r.blocks.len(), 1);
        assert_eq!(r.developed_block_count(), Some(73));
        assert_eq!(emit_design(&r), K73_G1);
    }

    #[test]
    fn infinity_and_comments() {
        let text = "# K_136 excerpt\ndesign x\nsnark G2\nhost complete 136 inf\nmap a segments (0,135,3) fix inf  # shift\nblock a inf 71 112 54 34 92 74 91 27 13 99 46 107 115 123 121 97 25 19 47 31 51 106 14\n";
        let r = parse_design(text).unwrap();
        assert_eq!(r.blocks[0].tuple[0], 135);
        assert_eq!(r.maps[0].map.fixed_points(), &[135]);
        let emitted = emit_design(&r);
        assert!(emitted.contains("fix inf\n"));
        assert!(emitted.contains("block a inf 71 "));
        assert_eq!(parse_design(&emitted).unwrap(), r);
    }

    #[test]
    fn design_errors_carry_line_numbers() {
        let short = K73_G1.replace(" 45\n", "\n");
        match parse_design(&short) {
            Err(FormatError::Syntax { line, message }) => {
                assert_eq!(line, 5);
                assert!(message.contains("23 vertices"), "{message}");
            }
            other => panic!("{other:?}"),
        }
        let bad_map = K73_G1.replace("(0,73,1)", "(0,70,1)");
        assert!(matches!(parse_design(&bad_map), Err(FormatError::Map { line: 4, .. })));
        let no_inf = K73_G1.replace("block a 0 ", "block a inf ");
        assert!(matches!(parse_design(&no_inf), Err(FormatError::Syntax { line: 5, .. })));
        let unknown_map = K73_G1.replace("block a", "block b");
        assert!(matches!(parse_design(&unknown_map), Err(FormatError::Syntax { line: 5, .. })));
        let early = "map a segments (0,73,1)\n";
        assert!(parse_design(early).is_err());
        assert!(matches!(parse_design(&K73_G1.replace("G1", "G40")), Err(FormatError::Snark { line: 2, .. })));
        assert!(matches!(
            parse_design(&K73_G1.replace("complete 73", "multipartite k9")),
            Err(FormatError::Host { line: 3, .. })
        ));
    }

    #[test]
    fn custom_host_round_trip() {
        let text = "design c\nsnark G1\nhost multipartite segments (0,12,0),(12,12,1),(24,12,2)\nmap a segments (0,12,1),(12,12,1),(24,12,1)\nblock a 0 1 2 3 4 5 6 7 8 9 10 11 12 13 14 15 16 17 18 19 20 21 22 23\n";
        let r = parse_design(text).unwrap();
        assert_eq!(r.host.part_sizes(), &[12, 12, 12]);
        assert_eq!(emit_design(&r), text);
    }

    #[test]
    fn standalone_specs() {
        let host = parse_host_spec("complete 136 inf").unwrap();
        let map = parse_map_spec("(0, 135, 9) fix inf", &host).unwrap();
        assert_eq!(map.order(), 15);
        assert_eq!(map.apply(135), 135);
        assert!(parse_map_spec("fix inf", &host).is_err());
        assert!(parse_host_spec("multipartite k12x3").is_ok());
        assert!(parse_host_spec("k12x3").is_err());
    }

    #[test]
    fn machine_report_fields() {
        let r = crate::design::verify_design(&parse_design(K73_G1).unwrap());
        let v: serde_json::Value = serde_json::from_str(&emit_report_machine(&r)).unwrap();
        for key in ["pass", "blocks", "edges", "histogram", "violations"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["pass"], true);
        assert_eq!(v["blocks"], 73);
        assert_eq!(v["histogram"]["1"], 2628);
        assert!(emit_report_human(&r).starts_with("g01-k73: PASS\n"));
    }
}
