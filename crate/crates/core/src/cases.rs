//! The three shipped case studies and the TOML case-file format.
//!
//! A case file looks like this:
//!
//! ```toml
//! name = "flight"
//! nodes = ["A", "B", "C", "D", "E", "F"]
//! edges = [["A", "C"], ["B", "D"]]   # optional when intervals are given
//! k = 3
//! penalty = 4.0
//! colors = ["O", "R", "G"]           # optional, one label per color
//!
//! [intervals]                        # optional, half-open [start, end)
//! A = [0, 4]
//!
//! [[references]]                     # optional known solutions
//! label = "published-vqe"
//! assignment = { A = "G", B = "O" }  # color labels or indices
//! ```
//!
//! When both `edges` and `intervals` are present they must describe the same
//! graph. Every reference must be a complete, proper coloring.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::coloring::conflicting_edges;
use crate::error::{Error, Result};
use crate::graph::{intervals_to_conflict_graph, ColorAssignment, Graph, IntervalSet};
use crate::qubo::DEFAULT_PENALTY;

pub const BUILTIN_CASES: [&str; 3] = ["flight", "frequency", "register"];

/// A named, known-good coloring of a case graph.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceSolution {
    pub label: String,
    pub assignment: ColorAssignment,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CaseStudy {
    pub name: String,
    pub graph: Graph,
    pub k: usize,
    pub penalty: f64,
    pub intervals: Option<IntervalSet>,
    /// Display label of each color index.
    pub colors: Vec<String>,
    pub references: Vec<ReferenceSolution>,
}

/// `O, R, G` for the first three colors, then `C3, C4, ...`.
pub fn default_color_labels(k: usize) -> Vec<String> {
    (0..k)
        .map(|c| match c {
            0 => "O".to_string(),
            1 => "R".to_string(),
            2 => "G".to_string(),
            _ => format!("C{c}"),
        })
        .collect()
}

impl CaseStudy {
    /// Checks labels, references and the interval realization.
    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::CaseFile(format!("case `{}`: k must be at least 1", self.name)));
        }
        if !(self.penalty.is_finite() && self.penalty > 0.0) {
            return Err(Error::CaseFile(format!(
                "case `{}`: penalty must be positive and finite, got {}",
                self.name, self.penalty
            )));
        }
        if self.colors.len() != self.k {
            return Err(Error::CaseFile(format!(
                "case `{}`: {} color labels given for k = {}",
                self.name,
                self.colors.len(),
                self.k
            )));
        }
        if let Some(intervals) = &self.intervals {
            let derived = intervals_to_conflict_graph(intervals)?;
            if derived.nodes() != self.graph.nodes() {
                return Err(Error::CaseFile(format!(
                    "case `{}`: intervals must cover exactly the nodes, in node order",
                    self.name
                )));
            }
            check_same_edges(&self.name, &self.graph, &derived)?;
        }
        for reference in &self.references {
            self.check_reference(reference)?;
        }
        Ok(())
    }

    fn check_reference(&self, reference: &ReferenceSolution) -> Result<()> {
        let context = |msg: String| Error::CaseFile(format!("reference `{}`: {msg}", reference.label));
        for (label, _) in reference.assignment.iter() {
            if self.graph.index_of(label).is_none() {
                return Err(context(format!("unknown node `{label}`")));
            }
        }
        if let Some(missing) = self
            .graph
            .nodes()
            .iter()
            .find(|n| reference.assignment.get(n).is_none())
        {
            return Err(context(format!("node `{missing}` has no color")));
        }
        reference.assignment.check_range(self.k).map_err(|e| context(e.to_string()))?;
        if let Some((u, v)) = conflicting_edges(&self.graph, &reference.assignment)?.first() {
            let c = reference.assignment.get(u).expect("complete assignment");
            return Err(context(format!(
                "edge {u}-{v} has both ends colored {}",
                self.colors[c]
            )));
        }
        Ok(())
    }

    pub fn color_label(&self, color: usize) -> &str {
        &self.colors[color]
    }

    pub fn color_index(&self, label: &str) -> Option<usize> {
        self.colors.iter().position(|c| c == label)
    }

    /// Serializes to the case-file format. [`CaseStudy::from_toml_str`]
    /// reads it back to an equal value.
    pub fn to_toml_string(&self) -> String {
        let raw = RawCase {
            name: Some(self.name.clone()),
            nodes: self.graph.nodes().to_vec(),
            edges: Some(
                self.graph
                    .edge_labels()
                    .into_iter()
                    .map(|(u, v)| [u, v])
                    .collect(),
            ),
            k: self.k,
            penalty: Some(self.penalty),
            colors: Some(self.colors.clone()),
            intervals: self.intervals.as_ref().map(|set| {
                set.iter()
                    .map(|(l, iv)| (l.to_string(), [iv.start, iv.end]))
                    .collect()
            }),
            references: self
                .references
                .iter()
                .map(|r| RawReference {
                    label: r.label.clone(),
                    assignment: r
                        .assignment
                        .iter()
                        .map(|(l, c)| (l.to_string(), RawColor::Label(self.colors[c].clone())))
                        .collect(),
                })
                .collect(),
        };
        toml::to_string(&raw).expect("case serializes")
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let raw: RawCase = toml::from_str(text).map_err(|e| Error::CaseFile(e.to_string()))?;
        raw.into_case()
    }
}

fn check_same_edges(name: &str, declared: &Graph, derived: &Graph) -> Result<()> {
    let declared = declared.label_edge_set();
    let derived = derived.label_edge_set();
    if let Some((u, v)) = declared.difference(&derived).next() {
        return Err(Error::CaseFile(format!(
            "case `{name}`: edge {u}-{v} is declared but the intervals of {u} and {v} do not overlap"
        )));
    }
    if let Some((u, v)) = derived.difference(&declared).next() {
        return Err(Error::CaseFile(format!(
            "case `{name}`: intervals of {u} and {v} overlap but edge {u}-{v} is not declared"
        )));
    }
    Ok(())
}

/// Reads and validates a case file.
pub fn load_case(path: impl AsRef<Path>) -> Result<CaseStudy> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)
        .map_err(|e| Error::CaseFile(format!("cannot read {}: {e}", path.display())))?;
    let mut case = CaseStudy::from_toml_str(&text)
        .map_err(|e| Error::CaseFile(format!("{}: {e}", path.display())))?;
    if case.name.is_empty() {
        case.name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
    }
    Ok(case)
}

/// Built-in case by name.
pub fn builtin_case(name: &str) -> Option<CaseStudy> {
    match name {
        "flight" => Some(case_flight()),
        "frequency" => Some(case_frequency()),
        "register" => Some(case_register()),
        _ => None,
    }
}

const LABELS: [&str; 6] = ["A", "B", "C", "D", "E", "F"];

fn assignment(colors: [&str; 6]) -> ColorAssignment {
    let labels = default_color_labels(3);
    LABELS
        .iter()
        .zip(colors)
        .map(|(&n, c)| (n, labels.iter().position(|l| l == c).expect("O, R or G")))
        .collect()
}

fn reference(label: &str, colors: [&str; 6]) -> ReferenceSolution {
    ReferenceSolution {
        label: label.to_string(),
        assignment: assignment(colors),
    }
}

fn interval_case(name: &str, spans: [(f64, f64); 6], references: Vec<ReferenceSolution>) -> CaseStudy {
    let intervals = LABELS
        .iter()
        .zip(spans)
        .fold(IntervalSet::new(), |set, (&l, (s, e))| set.with(l, s, e));
    CaseStudy {
        name: name.to_string(),
        graph: intervals_to_conflict_graph(&intervals).expect("shipped intervals are valid"),
        k: 3,
        penalty: DEFAULT_PENALTY,
        intervals: Some(intervals),
        colors: default_color_labels(3),
        references,
    }
}

/// Gate allocation for six flights. The edge set AC, BD, BE, CE, DE, DF is
/// the one encoded by the published Q matrix; the intervals realize it.
pub fn case_flight() -> CaseStudy {
    interval_case(
        "flight",
        [(0.0, 4.0), (10.0, 16.0), (2.0, 8.0), (12.0, 18.0), (6.0, 14.0), (17.0, 20.0)],
        vec![
            reference("published-vqe", ["G", "O", "R", "R", "G", "O"]),
            reference("published-qaoa", ["G", "O", "O", "G", "R", "R"]),
        ],
    )
}

/// Frequency assignment for six base stations on a ring with one chord (B-D).
///
/// The interference graph is a reconstruction: both published solutions are
/// proper on it and it needs exactly three colors, but the original edge set
/// is not recoverable.
pub fn case_frequency() -> CaseStudy {
    let graph = Graph::new(
        LABELS,
        [("A", "B"), ("B", "C"), ("C", "D"), ("D", "E"), ("E", "F"), ("F", "A"), ("B", "D")],
    )
    .expect("shipped graph is valid");
    CaseStudy {
        name: "frequency".to_string(),
        graph,
        k: 3,
        penalty: DEFAULT_PENALTY,
        intervals: None,
        colors: default_color_labels(3),
        references: vec![
            reference("published-vqe", ["R", "O", "R", "G", "R", "G"]),
            reference("published-qaoa", ["G", "R", "O", "G", "R", "O"]),
        ],
    }
}

/// Register allocation for six live ranges. Like the frequency case, the
/// intervals are a reconstruction consistent with both published solutions.
pub fn case_register() -> CaseStudy {
    interval_case(
        "register",
        [(0.0, 4.0), (2.0, 6.0), (3.0, 10.0), (9.0, 13.0), (12.0, 16.0), (15.0, 18.0)],
        vec![
            reference("published-vqe", ["G", "O", "R", "O", "R", "G"]),
            reference("published-qaoa", ["R", "O", "G", "O", "G", "R"]),
        ],
    )
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCase {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    nodes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    edges: Option<Vec<[String; 2]>>,
    k: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    penalty: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    colors: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    intervals: Option<BTreeMap<String, [f64; 2]>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    references: Vec<RawReference>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawReference {
    label: String,
    assignment: BTreeMap<String, RawColor>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum RawColor {
    Index(usize),
    Label(String),
}

impl RawCase {
    fn into_case(self) -> Result<CaseStudy> {
        let name = self.name.unwrap_or_default();
        if self.k == 0 {
            return Err(Error::CaseFile("k must be at least 1".into()));
        }
        let colors = self.colors.unwrap_or_else(|| default_color_labels(self.k));

        let intervals = match self.intervals {
            None => None,
            Some(mut table) => {
                let mut set = IntervalSet::new();
                for node in &self.nodes {
                    let [s, e] = table
                        .remove(node)
                        .ok_or_else(|| Error::CaseFile(format!("node `{node}` has no interval")))?;
                    set.push(node.clone(), s, e);
                }
                if let Some(extra) = table.keys().next() {
                    return Err(Error::CaseFile(format!("interval for unknown node `{extra}`")));
                }
                Some(set)
            }
        };
        let graph = match (&self.edges, &intervals) {
            (Some(edges), _) => Graph::new(
                self.nodes.iter().cloned(),
                edges.iter().map(|[u, v]| (u.as_str(), v.as_str())),
            )?,
            (None, Some(set)) => intervals_to_conflict_graph(set)?,
            (None, None) => return Err(Error::CaseFile("need `edges` or `intervals`".into())),
        };

        let mut references = Vec::with_capacity(self.references.len());
        for raw in self.references {
            let mut assignment = ColorAssignment::new();
            for (node, color) in raw.assignment {
                let c = match color {
                    RawColor::Index(c) => c,
                    RawColor::Label(l) => colors.iter().position(|x| *x == l).ok_or_else(|| {
                        Error::CaseFile(format!("reference `{}`: unknown color `{l}` for node `{node}`", raw.label))
                    })?,
                };
                assignment.set(node, c);
            }
            references.push(ReferenceSolution {
                label: raw.label,
                assignment,
            });
        }

        let case = CaseStudy {
            name,
            graph,
            k: self.k,
            penalty: self.penalty.unwrap_or(DEFAULT_PENALTY),
            intervals,
            colors,
            references,
        };
        case.validate()?;
        Ok(case)
    }
}
