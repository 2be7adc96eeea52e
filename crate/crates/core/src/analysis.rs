//! State transition graphs, observability graphs, and the controllability
//! and observability decisions built on them.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use serde::Serialize;

use crate::graph;
use crate::model::Lcn;
use crate::stp::DenseMatrix;

/// An edge of the state transition graph with the inputs realising it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TransitionEdge {
    pub from: usize,
    pub to: usize,
    pub inputs: Vec<usize>,
}

/// State transition graph. `adjacency[i][j]` counts the inputs taking state
/// `j+1` to state `i+1`, so every column sums to `M`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateTransitionGraph {
    adjacency: DenseMatrix,
    edges: Vec<TransitionEdge>,
}

impl StateTransitionGraph {
    pub fn n_vertices(&self) -> usize {
        self.adjacency.rows()
    }

    pub fn adjacency(&self) -> &DenseMatrix {
        &self.adjacency
    }

    /// Edges sorted by `(from, to)`; all indices 1-based.
    pub fn edges(&self) -> &[TransitionEdge] {
        &self.edges
    }

    fn successors(&self) -> Vec<Vec<usize>> {
        let mut succ = vec![Vec::new(); self.n_vertices()];
        for e in &self.edges {
            succ[e.from - 1].push(e.to - 1);
        }
        succ
    }
}

/// Builds `[L_1 1_M, …, L_N 1_M]` together with the labelled edge list.
pub fn transition_graph(lcn: &Lcn) -> StateTransitionGraph {
    let n = lcn.state_dim();
    let mut adjacency = DenseMatrix::zeros(n, n);
    let mut labels: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for x in 0..n {
        for u in 0..lcn.input_dim() {
            let y = lcn.next0(x, u);
            *adjacency.get_mut(y, x) += 1;
            labels.entry((x + 1, y + 1)).or_default().push(u + 1);
        }
    }
    let edges = labels
        .into_iter()
        .map(|((from, to), inputs)| TransitionEdge { from, to, inputs })
        .collect();
    StateTransitionGraph { adjacency, edges }
}

/// Outcome of the controllability test.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Controllability {
    pub controllable: bool,
    /// `(source, target)` with no path from source to target.
    pub witness: Option<(usize, usize)>,
}

/// Controllable iff the state transition graph is strongly connected.
///
/// The witness pairs the smallest unreachable target with, among the states
/// that cannot reach it, the one reaching the most states (smallest index on
/// ties).
pub fn is_controllable(lcn: &Lcn) -> Controllability {
    let succ = transition_graph(lcn).successors();
    if graph::tarjan_scc(&succ).len() == 1 {
        return Controllability {
            controllable: true,
            witness: None,
        };
    }
    let n = succ.len();
    let reach: Vec<Vec<bool>> = (0..n).map(|s| graph::reachable_from(&succ, s)).collect();
    let reach_size: Vec<usize> = reach
        .iter()
        .map(|r| r.iter().filter(|&&b| b).count())
        .collect();
    let witness = (0..n).find_map(|t| {
        (0..n)
            .filter(|&s| s != t && !reach[s][t])
            .max_by_key(|&s| (reach_size[s], std::cmp::Reverse(s)))
            .map(|s| (s + 1, t + 1))
    });
    debug_assert!(witness.is_some());
    Controllability {
        controllable: false,
        witness,
    }
}

/// A vertex of the observability graph. Pairs are stored with the smaller
/// state first; the derived order puts pairs lexicographically and the
/// collapsed diagonal last.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ObsVertex {
    Pair(usize, usize),
    Diag,
}

impl ObsVertex {
    fn pair(a: usize, b: usize) -> Self {
        if a < b {
            ObsVertex::Pair(a, b)
        } else {
            ObsVertex::Pair(b, a)
        }
    }

    /// Name used in DOT output and reports: `12` for `{1,2}` when every state
    /// index is a single digit, `1,12` otherwise.
    pub fn label(&self, state_dim: usize) -> String {
        match *self {
            ObsVertex::Pair(a, b) if state_dim < 10 => format!("{a}{b}"),
            ObsVertex::Pair(a, b) => format!("{a},{b}"),
            ObsVertex::Diag => "DIAG".to_string(),
        }
    }
}

impl fmt::Display for ObsVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ObsVertex::Pair(a, b) => write!(f, "{{{a},{b}}}"),
            ObsVertex::Diag => f.write_str("DIAG"),
        }
    }
}

impl Serialize for ObsVertex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match *self {
            ObsVertex::Pair(a, b) => [a, b].serialize(s),
            ObsVertex::Diag => s.serialize_str("DIAG"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ObsEdge {
    pub source: ObsVertex,
    pub target: ObsVertex,
    /// 1-based inputs, ascending.
    pub inputs: Vec<usize>,
}

/// Observability graph with every diagonal vertex merged into
/// [`ObsVertex::Diag`], which carries a self-loop under every input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObservabilityGraph {
    state_dim: usize,
    vertices: Vec<ObsVertex>,
    edges: Vec<ObsEdge>,
}

impl ObservabilityGraph {
    pub fn state_dim(&self) -> usize {
        self.state_dim
    }

    /// Sorted; the last entry is always `Diag`.
    pub fn vertices(&self) -> &[ObsVertex] {
        &self.vertices
    }

    /// Sorted by `(source, target)`.
    pub fn edges(&self) -> &[ObsEdge] {
        &self.edges
    }

    pub fn has_edge(&self, source: ObsVertex, target: ObsVertex) -> bool {
        self.edge(source, target).is_some()
    }

    pub fn edge(&self, source: ObsVertex, target: ObsVertex) -> Option<&ObsEdge> {
        self.edges
            .binary_search_by(|e| (e.source, e.target).cmp(&(source, target)))
            .ok()
            .map(|i| &self.edges[i])
    }

    fn index_of(&self, v: ObsVertex) -> usize {
        self.vertices
            .binary_search(&v)
            .expect("vertex belongs to graph")
    }

    fn successors(&self) -> Vec<Vec<usize>> {
        let mut succ = vec![Vec::new(); self.vertices.len()];
        for e in &self.edges {
            succ[self.index_of(e.source)].push(self.index_of(e.target));
        }
        succ
    }

    /// Applies the cycle criterion: unobservable iff some non-diagonal vertex
    /// reaches a vertex on a cycle.
    pub fn check(&self) -> Observability {
        let succ = self.successors();
        let on_cycle = graph::cycle_vertices(&succ);
        let reaches = graph::can_reach(&succ, &on_cycle);
        let non_diag = self.vertices.len() - 1;
        let Some(start) = (0..non_diag).find(|&v| reaches[v]) else {
            return Observability {
                observable: true,
                witness: None,
            };
        };
        let path = graph::shortest_path_to(&succ, start, &on_cycle)
            .expect("vertex reaching a cycle has a path to it");
        let path: Vec<ObsVertex> = path.into_iter().map(|i| self.vertices[i]).collect();
        let ObsVertex::Pair(a, b) = path[0] else {
            unreachable!("witness starts at a non-diagonal vertex")
        };
        Observability {
            observable: false,
            witness: Some(ObservabilityWitness {
                pair: (a, b),
                cycle_entry: *path.last().expect("non-empty path"),
                path,
            }),
        }
    }
}

/// Builds the observability graph of `lcn`. Successor pairs with unequal
/// outputs produce no edge.
pub fn observability_graph(lcn: &Lcn) -> ObservabilityGraph {
    let n = lcn.state_dim();
    let m = lcn.input_dim();
    let mut vertices = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if lcn.out0(a) == lcn.out0(b) {
                vertices.push(ObsVertex::Pair(a + 1, b + 1));
            }
        }
    }
    let mut edges = Vec::new();
    for &v in &vertices {
        let ObsVertex::Pair(a, b) = v else { continue };
        let mut by_target: BTreeMap<ObsVertex, Vec<usize>> = BTreeMap::new();
        for u in 0..m {
            let (na, nb) = (lcn.next0(a - 1, u), lcn.next0(b - 1, u));
            if lcn.out0(na) != lcn.out0(nb) {
                continue;
            }
            let target = if na == nb {
                ObsVertex::Diag
            } else {
                ObsVertex::pair(na + 1, nb + 1)
            };
            by_target.entry(target).or_default().push(u + 1);
        }
        edges.extend(by_target.into_iter().map(|(target, inputs)| ObsEdge {
            source: v,
            target,
            inputs,
        }));
    }
    vertices.push(ObsVertex::Diag);
    edges.push(ObsEdge {
        source: ObsVertex::Diag,
        target: ObsVertex::Diag,
        inputs: (1..=m).collect(),
    });
    ObservabilityGraph {
        state_dim: n,
        vertices,
        edges,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ObservabilityWitness {
    /// The indistinguishable pair of initial states.
    pub pair: (usize, usize),
    /// Shortest path from the pair to `cycle_entry`, both included.
    pub path: Vec<ObsVertex>,
    /// First vertex on the path that lies on a cycle.
    pub cycle_entry: ObsVertex,
}

impl ObservabilityWitness {
    /// Renders the path as `12 -> 23 -> DIAG`.
    pub fn render(&self, state_dim: usize) -> String {
        let parts: Vec<String> = self.path.iter().map(|v| v.label(state_dim)).collect();
        let mut out = parts.join(" -> ");
        // a one-vertex path sits on its own cycle; show the loop back
        if self.path.len() == 1 {
            write!(out, " -> {}", self.cycle_entry.label(state_dim)).unwrap();
        }
        out
    }
}

/// Outcome of the observability test.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Observability {
    pub observable: bool,
    pub witness: Option<ObservabilityWitness>,
}

/// Decides observability through the observability graph. The witness
/// starts at the smallest pair that reaches a cycle.
pub fn is_observable(lcn: &Lcn) -> Observability {
    observability_graph(lcn).check()
}

/// Graphs that can be rendered as Graphviz DOT.
pub trait ToDot {
    fn to_dot(&self) -> String;
}

/// Deterministic DOT rendering; edge labels are comma-joined inputs.
pub fn export_dot<G: ToDot + ?Sized>(graph: &G) -> String {
    graph.to_dot()
}

fn join(inputs: &[usize]) -> String {
    inputs
        .iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

impl ToDot for StateTransitionGraph {
    fn to_dot(&self) -> String {
        let mut out = String::from("digraph transition {\n");
        for v in 1..=self.n_vertices() {
            writeln!(out, "  \"{v}\";").unwrap();
        }
        for e in &self.edges {
            writeln!(
                out,
                "  \"{}\" -> \"{}\" [label=\"{}\"];",
                e.from,
                e.to,
                join(&e.inputs)
            )
            .unwrap();
        }
        out.push_str("}\n");
        out
    }
}

impl ToDot for ObservabilityGraph {
    fn to_dot(&self) -> String {
        let n = self.state_dim;
        let mut out = String::from("digraph observability {\n");
        for v in &self.vertices {
            match v {
                ObsVertex::Diag => writeln!(out, "  \"DIAG\" [label=\"⋄\"];").unwrap(),
                _ => writeln!(out, "  \"{}\";", v.label(n)).unwrap(),
            }
        }
        for e in &self.edges {
            writeln!(
                out,
                "  \"{}\" -> \"{}\" [label=\"{}\"];",
                e.source.label(n),
                e.target.label(n),
                join(&e.inputs)
            )
            .unwrap();
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ObsVertex::{Diag, Pair};

    fn absorbing_network() -> Lcn {
        Lcn::new(
            4,
            4,
            4,
            &[1, 1, 1, 1, 1, 2, 1, 2, 3, 3, 1, 1, 3, 4, 1, 2],
            None,
        )
        .unwrap()
    }

    fn ring_network() -> Lcn {
        Lcn::new(4, 2, 4, &[2, 2, 1, 3, 4, 4, 2, 2], None).unwrap()
    }

    #[test]
    fn absorbing_network_adjacency_and_witness() {
        let g = transition_graph(&absorbing_network());
        assert_eq!(
            g.adjacency(),
            &DenseMatrix::from_rows(&[[4, 2, 2, 1], [0, 2, 0, 1], [0, 0, 2, 1], [0, 0, 0, 1]])
        );
        assert_eq!(
            is_controllable(&absorbing_network()),
            Controllability {
                controllable: false,
                witness: Some((3, 2))
            }
        );
    }

    #[test]
    fn ring_network_adjacency() {
        let g = transition_graph(&ring_network());
        assert_eq!(
            g.adjacency(),
            &DenseMatrix::from_rows(&[[0, 1, 0, 0], [2, 0, 0, 2], [0, 1, 0, 0], [0, 0, 2, 0]])
        );
        assert!(is_controllable(&ring_network()).controllable);
        let after = Lcn::new(4, 2, 4, &[2, 2, 3, 3, 4, 4, 2, 2], None).unwrap();
        assert!(!is_controllable(&after).controllable);
    }

    #[test]
    fn identity_network_adjacency() {
        let lcn = Lcn::new(3, 2, 3, &[1, 1, 2, 2, 3, 3], None).unwrap();
        let adj = transition_graph(&lcn).adjacency().clone();
        assert_eq!(
            adj,
            DenseMatrix::from_rows(&[[2, 0, 0], [0, 2, 0], [0, 0, 2]])
        );
        assert_eq!(adj.column_sums(), vec![2, 2, 2]);
    }

    #[test]
    fn single_state_network() {
        let lcn = Lcn::new(1, 2, 1, &[1, 1], None).unwrap();
        assert!(is_controllable(&lcn).controllable);
        let g = observability_graph(&lcn);
        assert_eq!(g.vertices(), &[Diag]);
        assert_eq!(g.edges().len(), 1);
        assert!(is_observable(&lcn).observable);
    }

    #[test]
    fn ring_with_output_graphs() {
        let lcn = ring_network().with_output(2, &[1, 1, 1, 2]).unwrap();
        let g = observability_graph(&lcn);
        assert_eq!(g.vertices(), &[Pair(1, 2), Pair(1, 3), Pair(2, 3), Diag]);
        assert_eq!(g.edge(Pair(1, 2), Pair(1, 2)).unwrap().inputs, vec![1]);
        assert_eq!(g.edge(Pair(1, 2), Pair(2, 3)).unwrap().inputs, vec![2]);
        assert_eq!(g.edges().len(), 3);
        let obs = is_observable(&lcn);
        assert!(!obs.observable);
        let w = obs.witness.unwrap();
        assert_eq!(w.pair, (1, 2));
        assert_eq!(w.path, vec![Pair(1, 2)]);
        assert_eq!(w.cycle_entry, Pair(1, 2));
        assert_eq!(w.render(4), "12 -> 12");

        let fb = Lcn::new(4, 2, 2, &[2, 2, 3, 3, 4, 4, 2, 2], Some(&[1, 1, 1, 2])).unwrap();
        let g = observability_graph(&fb);
        assert_eq!(g.edge(Pair(1, 2), Pair(2, 3)).unwrap().inputs, vec![1, 2]);
        assert_eq!(g.edges().len(), 2);
        assert!(is_observable(&fb).observable);
        assert!(g.to_dot().contains("\"12\" -> \"23\" [label=\"1,2\"];"));
    }

    #[test]
    fn two_node_boolean_network() {
        // x1+ = x2 ∧ u, x2+ = ¬x1 ∨ u, y = x1 with true ~ δ_2^1
        let b = |v: bool| if v { 1 } else { 2 };
        let states = [(true, true), (true, false), (false, true), (false, false)];
        let index = |s: (bool, bool)| states.iter().position(|&t| t == s).unwrap() + 1;
        let transition: Vec<Vec<usize>> = states
            .iter()
            .map(|&(x1, x2)| {
                [true, false]
                    .iter()
                    .map(|&u| index((x2 && u, !x1 || u)))
                    .collect()
            })
            .collect();
        let output: Vec<usize> = states.iter().map(|&(x1, _)| b(x1)).collect();
        let lcn = Lcn::from_truth_table(4, 2, 2, &transition, Some(&output)).unwrap();
        let g = observability_graph(&lcn);
        // {00,01} = {4,3}, {10,11} = {2,1}; both collapse under u = 0 (input 2)
        assert_eq!(g.vertices(), &[Pair(1, 2), Pair(3, 4), Diag]);
        assert_eq!(g.edge(Pair(3, 4), Diag).unwrap().inputs, vec![2]);
        assert_eq!(g.edge(Pair(1, 2), Diag).unwrap().inputs, vec![2]);
        assert_eq!(g.edges().len(), 3);
        assert!(!is_observable(&lcn).observable);
    }

    #[test]
    fn three_state_networks() {
        let before = Lcn::new(3, 2, 2, &[1, 3, 3, 2, 1, 1], Some(&[1, 1, 2])).unwrap();
        let g = observability_graph(&before);
        assert_eq!(g.vertices(), &[Pair(1, 2), Diag]);
        assert!(is_observable(&before).observable);
        let after = Lcn::new(3, 1, 2, &[1, 2, 1], Some(&[1, 1, 2])).unwrap();
        let obs = is_observable(&after);
        assert!(!obs.observable);
        assert_eq!(obs.witness.unwrap().cycle_entry, Pair(1, 2));
    }

    #[test]
    fn dot_is_deterministic_and_minimal() {
        let lcn = Lcn::new(2, 1, 2, &[1, 2], Some(&[1, 2])).unwrap();
        let dot = observability_graph(&lcn).to_dot();
        assert_eq!(
            dot,
            "digraph observability {\n  \"DIAG\" [label=\"⋄\"];\n  \"DIAG\" -> \"DIAG\" [label=\"1\"];\n}\n"
        );
        let t = export_dot(&transition_graph(&lcn));
        assert!(t.contains("\"2\" -> \"2\" [label=\"1\"];"));
    }

    #[test]
    fn labels_for_large_networks() {
        assert_eq!(Pair(1, 2).label(9), "12");
        assert_eq!(Pair(1, 12).label(12), "1,12");
        assert_eq!(Diag.label(3), "DIAG");
    }
}
