//! Rendering of routing results.
//!
//! The machine-readable portion of a result — status, objective, paths,
//! warnings — is deterministic and goes to stdout, either as labelled text
//! lines or as JSON lines with one self-contained object per flow. Search
//! statistics involve wall-clock time and belong on stderr;
//! [`render_stats`] formats them separately.
//!
//! Objectives are printed twice: exactly as a rational, and rounded to ten
//! significant digits as a decimal.

use serde::Serialize;

use qroute_core::{RoutePath, RouteResult, RouteWarning, SolveStatus};

/// Significant digits used for the decimal form of objectives.
pub const DECIMAL_DIGITS: usize = 10;

pub fn status_name(status: SolveStatus) -> &'static str {
    match status {
        SolveStatus::Optimal => "optimal",
        SolveStatus::Satisfiable => "satisfiable",
        SolveStatus::Unsatisfiable => "unsatisfiable",
        SolveStatus::Timeout => "timeout",
    }
}

fn path_line(flow: usize, path: &RoutePath) -> String {
    let nodes: Vec<String> = path.nodes.iter().map(|n| n.to_string()).collect();
    format!("flow {}: {} (cost {})", flow, nodes.join(" -> "), path.cost)
}

/// The deterministic stdout report in labelled-line form.
pub fn render_text(result: &RouteResult) -> String {
    let mut out = format!("status: {}\n", status_name(result.status));
    if let Some(objective) = &result.objective_value {
        out.push_str(&format!("objective: {objective}\n"));
        out.push_str(&format!("objective-decimal: {}\n", objective.decimal_string(DECIMAL_DIGITS)));
    }
    if let Some(paths) = &result.paths {
        for (j, path) in paths.iter().enumerate() {
            out.push_str(&path_line(j + 1, path));
            out.push('\n');
        }
    }
    out
}

#[derive(Serialize)]
struct JsonObjective {
    exact: String,
    decimal: String,
}

/// One JSON line. Every line repeats the status and objective so that it
/// can be parsed without its neighbours.
#[derive(Serialize)]
struct JsonFlowLine {
    status: &'static str,
    objective: Option<JsonObjective>,
    flow: Option<usize>,
    nodes: Option<Vec<u32>>,
    links: Option<Vec<u32>>,
    cost: Option<i64>,
    warnings: Vec<String>,
}

fn objective_json(result: &RouteResult) -> Option<JsonObjective> {
    result
        .objective_value
        .as_ref()
        .map(|o| JsonObjective { exact: o.to_string(), decimal: o.decimal_string(DECIMAL_DIGITS) })
}

/// The deterministic stdout report as JSON lines: one object per flow, or a
/// single pathless object when there is no solution to report.
pub fn render_json_lines(result: &RouteResult) -> String {
    let mut lines: Vec<JsonFlowLine> = Vec::new();
    match &result.paths {
        Some(paths) => {
            for (j, path) in paths.iter().enumerate() {
                let flow = j + 1;
                let warnings = result
                    .warnings
                    .iter()
                    .filter(|w| match w {
                        RouteWarning::CycleDiscarded { flow: f } => *f == flow,
                    })
                    .map(|w| w.to_string())
                    .collect();
                lines.push(JsonFlowLine {
                    status: status_name(result.status),
                    objective: objective_json(result),
                    flow: Some(flow),
                    nodes: Some(path.nodes.iter().map(|n| n.0).collect()),
                    links: Some(path.links.iter().map(|l| l.0).collect()),
                    cost: Some(path.cost),
                    warnings,
                });
            }
        }
        None => lines.push(JsonFlowLine {
            status: status_name(result.status),
            objective: objective_json(result),
            flow: None,
            nodes: None,
            links: None,
            cost: None,
            warnings: result.warnings.iter().map(|w| w.to_string()).collect(),
        }),
    }
    let mut out = String::new();
    for line in lines {
        // Serialization of these plain structs cannot fail.
        out.push_str(&serde_json::to_string(&line).expect("report serialization"));
        out.push('\n');
    }
    out
}

/// Search statistics and warnings for stderr. Wall-clock time makes this
/// non-deterministic, which is why it is kept apart from the report.
pub fn render_stats(result: &RouteResult) -> String {
    let stats = &result.stats;
    let mut out = format!(
        "search: {} nodes, {} propagations, {} ms\n",
        stats.nodes_explored, stats.propagations, stats.wall_time_ms
    );
    if !stats.incumbent_objectives.is_empty() {
        let seq: Vec<String> = stats.incumbent_objectives.iter().map(|o| o.to_string()).collect();
        out.push_str(&format!("incumbents: {}\n", seq.join(" -> ")));
    }
    for warning in &result.warnings {
        out.push_str(&format!("warning: {warning}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use qroute_core::{LinkId, NodeId, Rational, SolveStats};

    fn two_flow_sample() -> RouteResult {
        RouteResult {
            status: SolveStatus::Optimal,
            objective_value: Some(Rational::from_int(4)),
            paths: Some(vec![
                RoutePath {
                    nodes: vec![NodeId(1), NodeId(2), NodeId(4)],
                    links: vec![LinkId(1), LinkId(5)],
                    cost: 2,
                },
                RoutePath {
                    nodes: vec![NodeId(1), NodeId(3), NodeId(4)],
                    links: vec![LinkId(2), LinkId(7)],
                    cost: 2,
                },
            ]),
            warnings: vec![RouteWarning::CycleDiscarded { flow: 2 }],
            stats: SolveStats {
                nodes_explored: 7,
                propagations: 21,
                wall_time_ms: 3,
                incumbent_objectives: vec![Rational::from_int(6), Rational::from_int(4)],
            },
        }
    }

    #[test]
    fn text_report_lists_status_objective_and_paths() {
        let result = RouteResult {
            objective_value: Some(Rational::new(1, 99).unwrap()),
            ..two_flow_sample()
        };
        let text = render_text(&result);
        assert_eq!(
            text,
            "status: optimal\n\
             objective: 1/99\n\
             objective-decimal: 0.01010101010\n\
             flow 1: 1 -> 2 -> 4 (cost 2)\n\
             flow 2: 1 -> 3 -> 4 (cost 2)\n"
        );
    }

    #[test]
    fn unsatisfiable_report_is_status_only() {
        let result = RouteResult {
            status: SolveStatus::Unsatisfiable,
            objective_value: None,
            paths: None,
            warnings: vec![],
            stats: SolveStats::default(),
        };
        assert_eq!(render_text(&result), "status: unsatisfiable\n");
        assert_eq!(
            render_json_lines(&result),
            "{\"status\":\"unsatisfiable\",\"objective\":null,\"flow\":null,\
             \"nodes\":null,\"links\":null,\"cost\":null,\"warnings\":[]}\n"
        );
    }

    #[test]
    fn json_lines_are_one_self_contained_object_per_flow() {
        let rendered = render_json_lines(&two_flow_sample());
        let lines: Vec<&str> = rendered.lines().collect();
        assert_eq!(lines.len(), 2);
        for (i, line) in lines.iter().enumerate() {
            let value: serde_json::Value = serde_json::from_str(line).unwrap();
            assert_eq!(value["status"], "optimal");
            assert_eq!(value["objective"]["exact"], "4");
            assert_eq!(value["objective"]["decimal"], "4");
            assert_eq!(value["flow"], i + 1);
            assert_eq!(value["cost"], 2);
        }
        let second: serde_json::Value = serde_json::from_str(lines[1]).unwrap();
        assert_eq!(second["nodes"], serde_json::json!([1, 3, 4]));
        // The cycle warning belongs to flow 2 alone.
        let first: serde_json::Value = serde_json::from_str(lines[0]).unwrap();
        assert_eq!(first["warnings"], serde_json::json!([]));
        assert_eq!(second["warnings"][0], RouteWarning::CycleDiscarded { flow: 2 }.to_string());
    }

    #[test]
    fn stats_go_to_a_separate_channel() {
        let result = two_flow_sample();
        let stats = render_stats(&result);
        assert!(stats.contains("search: 7 nodes, 21 propagations, 3 ms"));
        assert!(stats.contains("incumbents: 6 -> 4"));
        assert!(stats.contains("warning: flow 2"));
        // Nothing from the stats channel leaks into the report.
        assert!(!render_text(&result).contains("ms"));
    }
}
