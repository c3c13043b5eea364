//! Classical coloring: properness check, greedy first-fit, depth-first
//! backtracking, and an exhaustive counting oracle.

use crate::error::{Error, Result};
use crate::graph::{ColorAssignment, Graph};

/// Default evaluation budget for exhaustive enumeration.
pub const DEFAULT_BRUTE_FORCE_CAP: u128 = 1 << 24;

/// True iff no edge joins two nodes of the same color.
///
/// Fails if any node of `graph` is missing from the assignment.
pub fn is_proper_coloring(graph: &Graph, assignment: &ColorAssignment) -> Result<bool> {
    let colors = total_colors(graph, assignment)?;
    Ok(graph.edges().all(|(i, j)| colors[i] != colors[j]))
}

/// Edges whose endpoints share a color, as label pairs.
pub fn conflicting_edges(graph: &Graph, assignment: &ColorAssignment) -> Result<Vec<(String, String)>> {
    let colors = total_colors(graph, assignment)?;
    Ok(graph
        .edges()
        .filter(|&(i, j)| colors[i] == colors[j])
        .map(|(i, j)| (graph.label(i).to_string(), graph.label(j).to_string()))
        .collect())
}

fn total_colors(graph: &Graph, assignment: &ColorAssignment) -> Result<Vec<usize>> {
    graph
        .nodes()
        .iter()
        .map(|l| assignment.get(l).ok_or_else(|| Error::PartialAssignment(l.clone())))
        .collect()
}

/// First-fit coloring: visiting nodes in `order`, each takes the smallest
/// color not already used by a colored neighbor.
pub fn greedy_color<S: AsRef<str>>(graph: &Graph, order: &[S]) -> Result<ColorAssignment> {
    let n = graph.node_count();
    if order.len() != n {
        return Err(Error::InvalidPermutation(format!(
            "expected {n} nodes, got {}",
            order.len()
        )));
    }
    let mut seen = vec![false; n];
    let mut visit = Vec::with_capacity(n);
    for label in order {
        let label = label.as_ref();
        let i = graph
            .index_of(label)
            .ok_or_else(|| Error::InvalidPermutation(format!("unknown node `{label}`")))?;
        if std::mem::replace(&mut seen[i], true) {
            return Err(Error::InvalidPermutation(format!("node `{label}` repeated")));
        }
        visit.push(i);
    }

    let mut colors: Vec<Option<usize>> = vec![None; n];
    let mut taken = vec![false; n];
    for i in visit {
        taken.iter_mut().for_each(|t| *t = false);
        for &j in graph.neighbors(i) {
            if let Some(c) = colors[j] {
                taken[c] = true;
            }
        }
        colors[i] = taken.iter().position(|t| !t);
    }
    Ok(ColorAssignment::from_node_order(
        graph,
        &colors.into_iter().map(Option::unwrap).collect::<Vec<_>>(),
    ))
}

/// Greedy coloring in declared node order.
pub fn greedy_color_natural(graph: &Graph) -> ColorAssignment {
    greedy_color(graph, graph.nodes()).expect("declared order is a permutation")
}

/// Depth-first search for a proper `k`-coloring.
///
/// Nodes are assigned in declared order and colors tried in ascending order,
/// so the result is the lexicographically first proper coloring. Returns
/// `None` when the search tree is exhausted.
pub fn backtrack_kcolor(graph: &Graph, k: usize) -> Result<Option<ColorAssignment>> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    let n = graph.node_count();
    let mut colors = vec![usize::MAX; n];
    let mut node = 0usize;
    // `colors[node]` holds the last color tried at the current depth.
    loop {
        let start = colors[node].wrapping_add(1);
        let next = (start..k).find(|&c| {
            graph
                .neighbors(node)
                .iter()
                .all(|&j| j >= node || colors[j] != c)
        });
        match next {
            Some(c) => {
                colors[node] = c;
                if node + 1 == n {
                    return Ok(Some(ColorAssignment::from_node_order(graph, &colors)));
                }
                node += 1;
            }
            None => {
                colors[node] = usize::MAX;
                if node == 0 {
                    return Ok(None);
                }
                node -= 1;
            }
        }
    }
}

/// Outcome of exhaustive enumeration.
#[derive(Debug, Clone, PartialEq)]
pub struct BruteForceColorings {
    pub count: u64,
    /// Every proper coloring, in odometer order, when requested.
    pub colorings: Option<Vec<ColorAssignment>>,
}

/// Counts proper `k`-colorings by checking all `k^n` assignments.
pub fn brute_force_colorings(graph: &Graph, k: usize, enumerate: bool) -> Result<BruteForceColorings> {
    brute_force_colorings_with_cap(graph, k, enumerate, DEFAULT_BRUTE_FORCE_CAP)
}

pub fn brute_force_colorings_with_cap(
    graph: &Graph,
    k: usize,
    enumerate: bool,
    cap: u128,
) -> Result<BruteForceColorings> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    let n = graph.node_count();
    let needed = evaluations(k, n);
    if needed > cap {
        return Err(Error::CapExceeded { needed, cap });
    }
    let edges: Vec<(usize, usize)> = graph.edges().collect();
    let mut digits = vec![0usize; n];
    let mut count = 0u64;
    let mut found = enumerate.then(Vec::new);
    'outer: loop {
        if edges.iter().all(|&(i, j)| digits[i] != digits[j]) {
            count += 1;
            if let Some(list) = found.as_mut() {
                list.push(ColorAssignment::from_node_order(graph, &digits));
            }
        }
        // last node is the fastest-moving digit
        for d in digits.iter_mut().rev() {
            *d += 1;
            if *d < k {
                continue 'outer;
            }
            *d = 0;
        }
        break;
    }
    Ok(BruteForceColorings {
        count,
        colorings: found,
    })
}

fn evaluations(k: usize, n: usize) -> u128 {
    let mut total: u128 = 1;
    for _ in 0..n {
        total = total.saturating_mul(k as u128);
    }
    total
}

/// Smallest `k` admitting a proper coloring, by exhaustive enumeration.
pub fn chromatic_number(graph: &Graph) -> Result<usize> {
    chromatic_number_with_cap(graph, DEFAULT_BRUTE_FORCE_CAP)
}

pub fn chromatic_number_with_cap(graph: &Graph, cap: u128) -> Result<usize> {
    let n = graph.node_count();
    if graph.edge_count() == 0 {
        return Ok(1);
    }
    for k in 2..=n {
        if brute_force_colorings_with_cap(graph, k, false, cap)?.count > 0 {
            return Ok(k);
        }
    }
    Ok(n)
}

/// `sqrt(2m) + 1` for a graph with `m` edges.
pub fn chromatic_upper_bound(graph: &Graph) -> f64 {
    (2.0 * graph.edge_count() as f64).sqrt() + 1.0
}
