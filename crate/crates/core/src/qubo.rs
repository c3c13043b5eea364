//! Penalty QUBO for graph k-coloring.
//!
//! Variable `(i, c)` (node `i` in declared order, color `c`) lives at index
//! `i * k + c`. Two equivalent objectives are exposed:
//!
//! * [`ColoringQubo::penalty_energy`], the nonnegative penalty
//!   `P * sum_i (1 - sum_c x_ic)^2 + P * sum_{(u,v) in E} sum_c x_uc x_vc`,
//!   which is zero exactly on proper one-hot colorings. Solvers minimize this.
//! * [`ColoringQubo::matrix_objective`], `x^T Q x + g^T x` with the symmetric
//!   `Q` (zero diagonal, `-P` between colors of one node, `-P/2` between the
//!   same color of adjacent nodes) and `g = (P, ..., P)`.
//!
//! For every `x` the two satisfy `matrix_objective(x) + penalty_energy(x) = n * P`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{ColorAssignment, Graph};

/// Penalty weight used when none is given.
pub const DEFAULT_PENALTY: f64 = 4.0;

/// Variable count up to which `Q` is stored densely.
pub const DENSE_LIMIT: usize = 64;

/// Binary assignment to the `n * k` QUBO variables (or qubits).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVector(Vec<u8>);

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        Self(vec![0; len])
    }

    pub fn from_bits(bits: Vec<u8>) -> Result<Self> {
        if let Some(b) = bits.iter().find(|&&b| b > 1) {
            return Err(Error::InvalidParameter(format!("bit value {b}")));
        }
        Ok(Self(bits))
    }

    /// Bit `j` of `index` becomes entry `j`.
    pub fn from_index(index: usize, len: usize) -> Self {
        Self((0..len).map(|j| ((index >> j) & 1) as u8).collect())
    }

    pub fn to_index(&self) -> usize {
        self.0
            .iter()
            .enumerate()
            .fold(0, |acc, (j, &b)| acc | ((b as usize) << j))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    pub fn get(&self, j: usize) -> bool {
        self.0[j] == 1
    }

    pub fn set(&mut self, j: usize, value: bool) {
        self.0[j] = value as u8;
    }
}

impl FromStr for BitVector {
    type Err = Error;

    /// Parses `0`/`1` characters, entry 0 first. Whitespace is ignored.
    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::InvalidParameter(format!("bad bit character {other:?}"))),
            })
            .collect::<Result<Vec<u8>>>()?;
        Ok(Self(bits))
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

/// Symmetric coupling matrix with zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub enum QMatrix {
    Dense { dim: usize, data: Vec<f64> },
    /// Upper-triangle entries `(i, j, value)` with `i < j`, sorted.
    Sparse { dim: usize, entries: Vec<(usize, usize, f64)> },
}

impl QMatrix {
    fn from_upper(dim: usize, upper: &BTreeMap<(usize, usize), f64>) -> Self {
        if dim <= DENSE_LIMIT {
            let mut data = vec![0.0; dim * dim];
            for (&(i, j), &v) in upper {
                data[i * dim + j] = v;
                data[j * dim + i] = v;
            }
            QMatrix::Dense { dim, data }
        } else {
            QMatrix::Sparse {
                dim,
                entries: upper.iter().map(|(&(i, j), &v)| (i, j, v)).collect(),
            }
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            QMatrix::Dense { dim, .. } | QMatrix::Sparse { dim, .. } => *dim,
        }
    }

    pub fn is_dense(&self) -> bool {
        matches!(self, QMatrix::Dense { .. })
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        match self {
            QMatrix::Dense { dim, data } => data[i * dim + j],
            QMatrix::Sparse { entries, .. } => {
                let key = (i.min(j), i.max(j));
                entries
                    .binary_search_by(|&(a, b, _)| (a, b).cmp(&key))
                    .map(|pos| entries[pos].2)
                    .unwrap_or(0.0)
            }
        }
    }

    /// Nonzero upper-triangle entries `(i, j, value)`, `i < j`.
    pub fn upper_entries(&self) -> Vec<(usize, usize, f64)> {
        match self {
            QMatrix::Dense { dim, data } => {
                let mut out = Vec::new();
                for i in 0..*dim {
                    for j in i + 1..*dim {
                        let v = data[i * dim + j];
                        if v != 0.0 {
                            out.push((i, j, v));
                        }
                    }
                }
                out
            }
            QMatrix::Sparse { entries, .. } => entries.clone(),
        }
    }

    /// Row-major dense copy.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let dim = self.dim();
        let mut rows = vec![vec![0.0; dim]; dim];
        for (i, j, v) in self.upper_entries() {
            rows[i][j] = v;
            rows[j][i] = v;
        }
        rows
    }
}

/// Problem-specific quadratic form over binary variables:
/// `offset + sum_i linear[i] x_i + sum_{i<j} quadratic[(i,j)] x_i x_j`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct BinaryQuadratic {
    pub num_vars: usize,
    pub offset: f64,
    pub linear: Vec<f64>,
    pub quadratic: BTreeMap<(usize, usize), f64>,
}

impl BinaryQuadratic {
    pub fn energy(&self, x: &BitVector) -> f64 {
        let b = x.bits();
        let mut e = self.offset;
        for (i, &w) in self.linear.iter().enumerate() {
            if b[i] == 1 {
                e += w;
            }
        }
        for (&(i, j), &w) in &self.quadratic {
            if b[i] == 1 && b[j] == 1 {
                e += w;
            }
        }
        e
    }
}

/// The k-coloring QUBO for one graph.
#[derive(Debug, Clone, PartialEq)]
pub struct ColoringQubo {
    graph: Graph,
    k: usize,
    penalty: f64,
    q: QMatrix,
    g: Vec<f64>,
    constant: f64,
}

/// A node whose color slice is not one-hot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeDefect {
    pub label: String,
    /// Colors whose bit is set; empty means uncolored.
    pub colors: Vec<usize>,
}

/// Result of reading a bit vector as a coloring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decoded {
    Valid(ColorAssignment),
    Invalid(Vec<NodeDefect>),
}

impl Decoded {
    pub fn assignment(&self) -> Option<&ColorAssignment> {
        match self {
            Decoded::Valid(a) => Some(a),
            Decoded::Invalid(_) => None,
        }
    }

    pub fn is_valid(&self) -> bool {
        matches!(self, Decoded::Valid(_))
    }
}

impl fmt::Display for Decoded {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Decoded::Valid(a) => write!(f, "{a}"),
            Decoded::Invalid(defects) => {
                write!(f, "invalid:")?;
                for d in defects {
                    if d.colors.is_empty() {
                        write!(f, " {} uncolored;", d.label)?;
                    } else {
                        write!(f, " {} has colors {:?};", d.label, d.colors)?;
                    }
                }
                Ok(())
            }
        }
    }
}

impl ColoringQubo {
    pub fn new(graph: &Graph, k: usize, penalty: f64) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter("k must be at least 1".into()));
        }
        if !(penalty > 0.0 && penalty.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "penalty must be positive and finite, got {penalty}"
            )));
        }
        let n = graph.node_count();
        let dim = n * k;
        let mut upper = BTreeMap::new();
        for i in 0..n {
            for c in 0..k {
                for c2 in c + 1..k {
                    upper.insert((i * k + c, i * k + c2), -penalty);
                }
            }
        }
        for (u, v) in graph.edges() {
            for c in 0..k {
                upper.insert((u * k + c, v * k + c), -penalty / 2.0);
            }
        }
        Ok(Self {
            graph: graph.clone(),
            k,
            penalty,
            q: QMatrix::from_upper(dim, &upper),
            g: vec![penalty; dim],
            constant: n as f64 * penalty,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn num_nodes(&self) -> usize {
        self.graph.node_count()
    }

    pub fn num_colors(&self) -> usize {
        self.k
    }

    pub fn penalty(&self) -> f64 {
        self.penalty
    }

    pub fn num_vars(&self) -> usize {
        self.graph.node_count() * self.k
    }

    pub fn var_index(&self, node: usize, color: usize) -> usize {
        node * self.k + color
    }

    pub fn q(&self) -> &QMatrix {
        &self.q
    }

    pub fn g(&self) -> &[f64] {
        &self.g
    }

    /// `n * P`: value of the matrix objective at any proper coloring.
    pub fn constant(&self) -> f64 {
        self.constant
    }

    fn check_len(&self, x: &BitVector) -> Result<()> {
        if x.len() != self.num_vars() {
            return Err(Error::LengthMismatch {
                expected: self.num_vars(),
                actual: x.len(),
            });
        }
        Ok(())
    }

    pub fn penalty_energy(&self, x: &BitVector) -> Result<f64> {
        self.check_len(x)?;
        let k = self.k;
        let b = x.bits();
        let mut one_hot = 0.0;
        for i in 0..self.num_nodes() {
            let set: f64 = b[i * k..(i + 1) * k].iter().map(|&v| v as f64).sum();
            one_hot += (1.0 - set) * (1.0 - set);
        }
        let mut clashes = 0.0;
        for (u, v) in self.graph.edges() {
            for c in 0..k {
                clashes += (b[u * k + c] * b[v * k + c]) as f64;
            }
        }
        Ok(self.penalty * one_hot + self.penalty * clashes)
    }

    /// `x^T Q x + g^T x`, both triangles of `Q` counted.
    pub fn matrix_objective(&self, x: &BitVector) -> Result<f64> {
        self.check_len(x)?;
        let b = x.bits();
        let mut total: f64 = self
            .g
            .iter()
            .zip(b)
            .filter(|(_, &bit)| bit == 1)
            .map(|(gi, _)| gi)
            .sum();
        for (i, j, v) in self.q.upper_entries() {
            if b[i] == 1 && b[j] == 1 {
                total += 2.0 * v;
            }
        }
        Ok(total)
    }

    /// The penalty energy expanded as a quadratic form in the binary
    /// variables. Its [`BinaryQuadratic::energy`] equals
    /// [`ColoringQubo::penalty_energy`] for every input.
    pub fn penalty_form(&self) -> BinaryQuadratic {
        let (n, k, p) = (self.num_nodes(), self.k, self.penalty);
        // (1 - s)^2 = 1 - s + 2 * sum_{c<c'} x_c x_c'  for binary x
        let mut quadratic = BTreeMap::new();
        for i in 0..n {
            for c in 0..k {
                for c2 in c + 1..k {
                    *quadratic.entry((i * k + c, i * k + c2)).or_insert(0.0) += 2.0 * p;
                }
            }
        }
        for (u, v) in self.graph.edges() {
            for c in 0..k {
                *quadratic.entry((u * k + c, v * k + c)).or_insert(0.0) += p;
            }
        }
        BinaryQuadratic {
            num_vars: n * k,
            offset: n as f64 * p,
            linear: vec![-p; n * k],
            quadratic,
        }
    }

    pub fn decode(&self, x: &BitVector) -> Result<Decoded> {
        self.check_len(x)?;
        let k = self.k;
        let mut assignment = ColorAssignment::new();
        let mut defects = Vec::new();
        for (i, label) in self.graph.nodes().iter().enumerate() {
            let colors: Vec<usize> = (0..k).filter(|&c| x.get(i * k + c)).collect();
            if colors.len() == 1 {
                assignment.set(label.clone(), colors[0]);
            } else {
                defects.push(NodeDefect {
                    label: label.clone(),
                    colors,
                });
            }
        }
        Ok(if defects.is_empty() {
            Decoded::Valid(assignment)
        } else {
            Decoded::Invalid(defects)
        })
    }

    /// One-hot encoding of a total assignment.
    pub fn encode(&self, assignment: &ColorAssignment) -> Result<BitVector> {
        assignment.check_range(self.k)?;
        let mut x = BitVector::zeros(self.num_vars());
        for (i, label) in self.graph.nodes().iter().enumerate() {
            let c = assignment
                .get(label)
                .ok_or_else(|| Error::PartialAssignment(label.clone()))?;
            x.set(i * self.k + c, true);
        }
        Ok(x)
    }

    /// `Q` as a whitespace-aligned text grid, one row per line.
    pub fn q_grid(&self) -> String {
        format_grid(&self.q.to_dense())
    }

    /// `g` as a single text row.
    pub fn g_row(&self) -> String {
        format_grid(&[self.g.clone()])
    }
}

fn format_number(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        format!("{v}")
    }
}

fn format_grid(rows: &[Vec<f64>]) -> String {
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| r.iter().map(|&v| format_number(v)).collect())
        .collect();
    let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
    let mut out = String::new();
    for row in cells {
        let line: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}
