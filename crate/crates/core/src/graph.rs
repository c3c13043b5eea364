//! Conflict graphs, live intervals and color assignments.
//!
//! Node order is fixed when a [`Graph`] is built and is the order every
//! downstream structure (QUBO variables, qubits, printed tables) uses.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};

/// Undirected simple graph over string-labeled nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    nodes: Vec<String>,
    index: HashMap<String, usize>,
    // (i, j) with i < j, indices into `nodes`
    edges: BTreeSet<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

impl Graph {
    /// Validates labels and edges and builds the canonical graph.
    ///
    /// Duplicate edges (in either orientation) collapse into one.
    pub fn new<N, E, S>(nodes: N, edges: E) -> Result<Self>
    where
        N: IntoIterator,
        N::Item: Into<String>,
        E: IntoIterator<Item = (S, S)>,
        S: AsRef<str>,
    {
        let nodes: Vec<String> = nodes.into_iter().map(Into::into).collect();
        if nodes.is_empty() {
            return Err(Error::EmptyGraph);
        }
        let mut index = HashMap::with_capacity(nodes.len());
        for (i, label) in nodes.iter().enumerate() {
            if index.insert(label.clone(), i).is_some() {
                return Err(Error::DuplicateNode(label.clone()));
            }
        }
        let mut edge_set = BTreeSet::new();
        for (u, v) in edges {
            let (u, v) = (u.as_ref(), v.as_ref());
            let iu = *index.get(u).ok_or_else(|| Error::UnknownNode(u.to_string()))?;
            let iv = *index.get(v).ok_or_else(|| Error::UnknownNode(v.to_string()))?;
            if iu == iv {
                return Err(Error::SelfLoop(u.to_string()));
            }
            edge_set.insert((iu.min(iv), iu.max(iv)));
        }
        let mut adjacency = vec![Vec::new(); nodes.len()];
        for &(i, j) in &edge_set {
            adjacency[i].push(j);
            adjacency[j].push(i);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(Self {
            nodes,
            index,
            edges: edge_set,
            adjacency,
        })
    }

    /// Complete graph on the given labels.
    pub fn complete<N>(nodes: N) -> Result<Self>
    where
        N: IntoIterator,
        N::Item: Into<String>,
    {
        let nodes: Vec<String> = nodes.into_iter().map(Into::into).collect();
        let mut edges = Vec::new();
        for i in 0..nodes.len() {
            for j in i + 1..nodes.len() {
                edges.push((nodes[i].clone(), nodes[j].clone()));
            }
        }
        Self::new(nodes, edges)
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.nodes[i]
    }

    /// Edges as index pairs `(i, j)` with `i < j`, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    /// Edges as label pairs in the same order as [`Graph::edges`].
    pub fn edge_labels(&self) -> Vec<(String, String)> {
        self.edges
            .iter()
            .map(|&(i, j)| (self.nodes[i].clone(), self.nodes[j].clone()))
            .collect()
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adjacency[i]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    /// Edge set keyed by labels, independent of declaration order.
    pub fn label_edge_set(&self) -> BTreeSet<(String, String)> {
        self.edge_labels()
            .into_iter()
            .map(|(a, b)| if a <= b { (a, b) } else { (b, a) })
            .collect()
    }
}

/// Half-open live interval `[start, end)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub start: f64,
    pub end: f64,
}

impl Interval {
    pub fn new(start: f64, end: f64) -> Self {
        Self { start, end }
    }

    /// Touching endpoints do not overlap.
    pub fn overlaps(&self, other: &Interval) -> bool {
        self.start < other.end && other.start < self.end
    }
}

/// Labeled intervals in declaration order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct IntervalSet {
    entries: Vec<(String, Interval)>,
}

impl IntervalSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, label: impl Into<String>, start: f64, end: f64) -> Self {
        self.push(label, start, end);
        self
    }

    pub fn push(&mut self, label: impl Into<String>, start: f64, end: f64) {
        self.entries.push((label.into(), Interval::new(start, end)));
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, Interval)> {
        self.entries.iter().map(|(l, i)| (l.as_str(), *i))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, label: &str) -> Option<Interval> {
        self.entries
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, i)| *i)
    }

    pub fn validate(&self) -> Result<()> {
        for (label, iv) in &self.entries {
            if !(iv.start < iv.end) {
                return Err(Error::DegenerateInterval {
                    label: label.clone(),
                    start: iv.start,
                    end: iv.end,
                });
            }
        }
        Ok(())
    }
}

/// Conflict graph of a set of live intervals: an edge joins every pair whose
/// intervals intersect.
pub fn intervals_to_conflict_graph(intervals: &IntervalSet) -> Result<Graph> {
    intervals.validate()?;
    let entries = &intervals.entries;
    let mut edges = Vec::new();
    for (i, (a, ia)) in entries.iter().enumerate() {
        for (b, ib) in &entries[i + 1..] {
            if ia.overlaps(ib) {
                edges.push((a.as_str(), b.as_str()));
            }
        }
    }
    Graph::new(entries.iter().map(|(l, _)| l.clone()), edges)
}

/// Node label to color index. May be partial.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ColorAssignment {
    colors: BTreeMap<String, usize>,
}

impl ColorAssignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, label: impl Into<String>, color: usize) {
        self.colors.insert(label.into(), color);
    }

    pub fn get(&self, label: &str) -> Option<usize> {
        self.colors.get(label).copied()
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, usize)> {
        self.colors.iter().map(|(l, &c)| (l.as_str(), c))
    }

    /// Number of distinct colors in use.
    pub fn colors_used(&self) -> usize {
        self.colors.values().collect::<BTreeSet<_>>().len()
    }

    /// Colors listed in graph node order; `None` for uncolored nodes.
    pub fn in_node_order(&self, graph: &Graph) -> Vec<Option<usize>> {
        graph.nodes().iter().map(|l| self.get(l)).collect()
    }

    /// Builds an assignment from colors given in graph node order.
    pub fn from_node_order(graph: &Graph, colors: &[usize]) -> Self {
        let mut a = Self::new();
        for (label, &c) in graph.nodes().iter().zip(colors) {
            a.set(label.clone(), c);
        }
        a
    }

    pub fn check_range(&self, k: usize) -> Result<()> {
        for (label, c) in self.iter() {
            if c >= k {
                return Err(Error::ColorOutOfRange {
                    label: label.to_string(),
                    color: c,
                    k,
                });
            }
        }
        Ok(())
    }
}

impl<S: Into<String>> FromIterator<(S, usize)> for ColorAssignment {
    fn from_iter<T: IntoIterator<Item = (S, usize)>>(iter: T) -> Self {
        Self {
            colors: iter.into_iter().map(|(l, c)| (l.into(), c)).collect(),
        }
    }
}

impl fmt::Display for ColorAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (n, (label, c)) in self.iter().enumerate() {
            if n > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{label}:{c}")?;
        }
        write!(f, "}}")
    }
}
