//! Plain-text formats for graphs and flow specifications.
//!
//! Both formats are line-oriented: blank lines and lines starting with `#`
//! are ignored. Graph files open with a `nodes N` header followed by one
//! line per directed link; the line order is normative, because membership
//! matrix rows are identified by link position:
//!
//! ```text
//! nodes 4
//! 1 2 1000 1           # directed arc: start end capacity cost
//! link 1 2 1000 1      # keyword form of the same record
//! edge 3 4 1000 1      # undirected: expands to both arcs
//! ```
//!
//! `edge` appends the forward arc in place and queues the reverse arc after
//! all forward rows, matching the generator layout.
//!
//! Flow files hold one line per flow, with an optional per-flow capacity
//! limit (absent means 0, which filters nothing):
//!
//! ```text
//! 1 16 10              # source sink demand
//! flow 4 13 10 20      # keyword form, with a limit column
//! ```

use thiserror::Error;

use qroute_core::{Flow, FlowSpec, GraphError, Link, ModelError, NetworkGraph};

#[derive(Debug, Error)]
pub enum FileError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

fn syntax(line: usize, message: impl Into<String>) -> FileError {
    FileError::Syntax { line, message: message.into() }
}

fn parse_number<T: std::str::FromStr>(
    token: &str,
    line: usize,
    what: &str,
) -> Result<T, FileError> {
    token.parse().map_err(|_| syntax(line, format!("invalid {what} `{token}`")))
}

/// Meaningful lines with their 1-based line numbers.
fn records(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            None
        } else {
            Some((i + 1, line.split_whitespace().collect()))
        }
    })
}

fn parse_link(fields: &[&str], line: usize) -> Result<Link, FileError> {
    let start: u32 = parse_number(fields[0], line, "start node")?;
    let end: u32 = parse_number(fields[1], line, "end node")?;
    let capacity: i64 = parse_number(fields[2], line, "capacity")?;
    let cost: i64 = parse_number(fields[3], line, "cost")?;
    Ok(Link::new(start, end, capacity, cost))
}

pub fn parse_graph(text: &str) -> Result<NetworkGraph, FileError> {
    let mut n_nodes: Option<u32> = None;
    let mut links: Vec<Link> = Vec::new();
    let mut reverse: Vec<Link> = Vec::new();
    for (line, tokens) in records(text) {
        match tokens[0] {
            "nodes" => {
                if n_nodes.is_some() {
                    return Err(syntax(line, "`nodes` declared twice"));
                }
                if tokens.len() != 2 {
                    return Err(syntax(line, "expected `nodes <count>`"));
                }
                n_nodes = Some(parse_number(tokens[1], line, "node count")?);
            }
            kind @ ("link" | "edge") => {
                if n_nodes.is_none() {
                    return Err(syntax(line, "`nodes` must be declared before links"));
                }
                if tokens.len() != 5 {
                    return Err(syntax(
                        line,
                        format!("expected `{kind} <start> <end> <capacity> <cost>`"),
                    ));
                }
                let link = parse_link(&tokens[1..], line)?;
                if kind == "edge" {
                    reverse.push(Link::new(link.end.0, link.start.0, link.capacity, link.cost));
                }
                links.push(link);
            }
            first if first.parse::<u32>().is_ok() => {
                if n_nodes.is_none() {
                    return Err(syntax(line, "`nodes` must be declared before links"));
                }
                if tokens.len() != 4 {
                    return Err(syntax(line, "expected `<start> <end> <capacity> <cost>`"));
                }
                links.push(parse_link(&tokens, line)?);
            }
            other => return Err(syntax(line, format!("unknown record `{other}`"))),
        }
    }
    let n_nodes = n_nodes.ok_or_else(|| syntax(1, "missing `nodes` declaration"))?;
    links.extend(reverse);
    Ok(NetworkGraph::new(n_nodes, links)?)
}

pub fn parse_flows(text: &str) -> Result<FlowSpec, FileError> {
    let mut flows: Vec<Flow> = Vec::new();
    let mut limits: Vec<i64> = Vec::new();
    for (line, tokens) in records(text) {
        let fields: &[&str] = match tokens[0] {
            "flow" => &tokens[1..],
            first if first.parse::<u32>().is_ok() => &tokens,
            other => return Err(syntax(line, format!("unknown record `{other}`"))),
        };
        if fields.len() != 3 && fields.len() != 4 {
            return Err(syntax(line, "expected `<source> <sink> <demand> [limit]`"));
        }
        let source: u32 = parse_number(fields[0], line, "source node")?;
        let sink: u32 = parse_number(fields[1], line, "sink node")?;
        let demand: i64 = parse_number(fields[2], line, "demand")?;
        flows.push(Flow::new(source, sink, demand));
        limits.push(if fields.len() == 4 { parse_number(fields[3], line, "limit")? } else { 0 });
    }
    if flows.is_empty() {
        return Err(syntax(1, "flow file declares no flows"));
    }
    Ok(FlowSpec::with_limits(flows, limits)?)
}

pub fn write_graph(graph: &NetworkGraph) -> String {
    let mut out = format!("nodes {}\n", graph.n_nodes());
    for link in graph.links() {
        out.push_str(&format!("{} {} {} {}\n", link.start, link.end, link.capacity, link.cost));
    }
    out
}

pub fn write_flows(spec: &FlowSpec) -> String {
    let mut out = String::new();
    for (j, flow) in spec.flows().iter().enumerate() {
        match spec.limits() {
            Some(limits) => out.push_str(&format!(
                "{} {} {} {}\n",
                flow.source, flow.sink, flow.demand, limits[j]
            )),
            None => out.push_str(&format!("{} {} {}\n", flow.source, flow.sink, flow.demand)),
        }
    }
    out
}
