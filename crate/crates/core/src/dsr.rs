//! Directed species-reaction graph: construction, orientation-respecting
//! simple-cycle enumeration, cycle classification (e/o parity, s-cycles),
//! odd intersections, and the three-condition injectivity criterion.
//!
//! Nodes are species on one side and reactions on the other, with reversible
//! pairs merged into a single reaction node by default. Edges are signed,
//! carry a stoichiometric label, and restrict which traversal directions are
//! allowed:
//!
//! * species consumed and fully removed (target coefficient zero): one
//!   negative edge, both directions;
//! * catalytic species (equal source and target coefficients): one negative
//!   edge, species-to-reaction only;
//! * species only produced: one positive edge, reaction-to-species only;
//! * species on both sides with different coefficients: a negative
//!   species-to-reaction edge labeled by the source coefficient plus a
//!   positive reaction-to-species edge labeled by the target coefficient.
//!   Labeling the second edge by the raw target coefficient (rather than
//!   the net change) is required for soundness: with net labels the
//!   criterion would pass on `X <-> 2X`, whose exact subset products
//!   already certify a sign conflict.
//!
//! For a merged reversible node the same rules apply to its canonical-first
//! direction, with every edge allowed in both directions.

use num_bigint::BigUint;
use serde::Serialize;

use crate::error::{CrnError, Result};
use crate::injectivity::{self, InjectivityVerdict};
use crate::model::ReactionNetwork;

/// Default cap on the number of enumerated cycles.
pub const DEFAULT_CYCLE_CAP: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Sign {
    Positive,
    Negative,
}

/// One labeled edge between a species node and a reaction node.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DsrEdge {
    pub species: usize,
    pub reaction_node: usize,
    pub sign: Sign,
    /// stoichiometric label, >= 1
    pub label: u32,
    pub species_to_reaction: bool,
    pub reaction_to_species: bool,
}

/// A reaction node: one irreversible reaction, or a merged reversible pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReactionNode {
    /// reaction indices represented by this node (one or a pair)
    pub reactions: Vec<usize>,
    pub reversible: bool,
}

/// The bipartite signed labeled multigraph.
#[derive(Debug, Clone, Serialize)]
pub struct DsrGraph {
    pub n_species: usize,
    pub reaction_nodes: Vec<ReactionNode>,
    pub edges: Vec<DsrEdge>,
}

/// Build the graph; with `split_reversible` every reaction keeps its own
/// node instead of merging mutual pairs.
pub fn build_dsr(net: &ReactionNetwork, split_reversible: bool) -> DsrGraph {
    let mut reaction_nodes: Vec<ReactionNode> = Vec::new();
    let mut node_of = vec![usize::MAX; net.n_reactions()];
    for (i, r) in net.reactions().iter().enumerate() {
        if node_of[i] != usize::MAX {
            continue;
        }
        match r.pair {
            Some(j) if !split_reversible => {
                let node = reaction_nodes.len();
                node_of[i] = node;
                node_of[j] = node;
                reaction_nodes.push(ReactionNode {
                    reactions: vec![i.min(j), i.max(j)],
                    reversible: true,
                });
            }
            _ => {
                let node = reaction_nodes.len();
                node_of[i] = node;
                reaction_nodes.push(ReactionNode {
                    reactions: vec![i],
                    reversible: false,
                });
            }
        }
    }

    let mut edges = Vec::new();
    for (node_idx, node) in reaction_nodes.iter().enumerate() {
        // canonical-first member defines the source/target orientation
        let r = &net.reactions()[node.reactions[0]];
        let both = node.reversible;
        for s in 0..net.n_species() {
            let ys = r.source.coeff(s);
            let yt = r.target.coeff(s);
            if ys == 0 && yt == 0 {
                continue;
            }
            if ys > 0 && yt == ys {
                // catalytic: affects the rate, no net change
                edges.push(DsrEdge {
                    species: s,
                    reaction_node: node_idx,
                    sign: Sign::Negative,
                    label: ys,
                    species_to_reaction: true,
                    reaction_to_species: both,
                });
            } else if ys > 0 && yt == 0 {
                edges.push(DsrEdge {
                    species: s,
                    reaction_node: node_idx,
                    sign: Sign::Negative,
                    label: ys,
                    species_to_reaction: true,
                    reaction_to_species: true,
                });
            } else if ys == 0 && yt > 0 {
                edges.push(DsrEdge {
                    species: s,
                    reaction_node: node_idx,
                    sign: Sign::Positive,
                    label: yt,
                    species_to_reaction: both,
                    reaction_to_species: true,
                });
            } else {
                // on both sides with a net change: one edge per occurrence
                edges.push(DsrEdge {
                    species: s,
                    reaction_node: node_idx,
                    sign: Sign::Negative,
                    label: ys,
                    species_to_reaction: true,
                    reaction_to_species: both,
                });
                edges.push(DsrEdge {
                    species: s,
                    reaction_node: node_idx,
                    sign: Sign::Positive,
                    label: yt,
                    species_to_reaction: both,
                    reaction_to_species: true,
                });
            }
        }
    }

    DsrGraph {
        n_species: net.n_species(),
        reaction_nodes,
        edges,
    }
}

impl DsrGraph {
    /// Total node count; species occupy ids `0..n_species`, reaction nodes
    /// follow.
    pub fn n_nodes(&self) -> usize {
        self.n_species + self.reaction_nodes.len()
    }

    fn edge_endpoints(&self, e: usize) -> (usize, usize) {
        let edge = &self.edges[e];
        (edge.species, self.n_species + edge.reaction_node)
    }

    /// Arcs leaving `node` as (edge index, neighbor, forward flag), where
    /// forward means species-to-reaction traversal.
    fn arcs_from(&self, node: usize) -> Vec<(usize, usize, bool)> {
        let mut out = Vec::new();
        for (e, edge) in self.edges.iter().enumerate() {
            let (s, r) = self.edge_endpoints(e);
            if node == s && edge.species_to_reaction {
                out.push((e, r, true));
            }
            if node == r && edge.reaction_to_species {
                out.push((e, s, false));
            }
        }
        out
    }

    fn arc_allowed(&self, e: usize, forward: bool) -> bool {
        if forward {
            self.edges[e].species_to_reaction
        } else {
            self.edges[e].reaction_to_species
        }
    }
}

/// One traversal step in a cycle: which edge, and in which direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct CycleStep {
    pub edge: usize,
    /// true when traversed species -> reaction
    pub forward: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Parity {
    /// positive-edge count has the same parity as half the length
    E,
    /// opposite parity
    O,
}

/// A node-simple directed cycle with its derived classification.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DsrCycle {
    pub steps: Vec<CycleStep>,
    pub len: usize,
    pub positive_edges: usize,
    pub parity: Parity,
    pub s_cycle: bool,
    /// whether the reversed traversal is also direction-valid
    pub reversible_traversal: bool,
}

impl DsrCycle {
    fn from_steps(graph: &DsrGraph, steps: Vec<CycleStep>) -> Self {
        let len = steps.len();
        debug_assert!(len % 2 == 0);
        let positive_edges = steps
            .iter()
            .filter(|s| graph.edges[s.edge].sign == Sign::Positive)
            .count();
        let parity = if positive_edges % 2 == (len / 2) % 2 {
            Parity::E
        } else {
            Parity::O
        };
        // alternating label products, exact
        let mut odd = BigUint::from(1u32);
        let mut even = BigUint::from(1u32);
        for (i, s) in steps.iter().enumerate() {
            let label = BigUint::from(graph.edges[s.edge].label);
            if i % 2 == 0 {
                odd *= label;
            } else {
                even *= label;
            }
        }
        let reversible_traversal = steps.iter().all(|s| graph.arc_allowed(s.edge, !s.forward));
        DsrCycle {
            steps,
            len,
            positive_edges,
            parity,
            s_cycle: odd == even,
            reversible_traversal,
        }
    }

    /// The reversed traversal, when every edge allows it.
    pub fn reversed(&self) -> Option<Vec<CycleStep>> {
        if !self.reversible_traversal {
            return None;
        }
        Some(
            self.steps
                .iter()
                .rev()
                .map(|s| CycleStep {
                    edge: s.edge,
                    forward: !s.forward,
                })
                .collect(),
        )
    }
}

fn canonical_rotation(steps: &[CycleStep]) -> Vec<CycleStep> {
    let n = steps.len();
    let mut best: Option<Vec<CycleStep>> = None;
    for shift in 0..n {
        let rotated: Vec<CycleStep> = (0..n).map(|i| steps[(i + shift) % n]).collect();
        if best.as_ref().is_none_or(|b| rotated < *b) {
            best = Some(rotated);
        }
    }
    best.unwrap()
}

/// Canonical key identifying a cycle up to rotation and (valid) reversal.
fn canonical_key(graph: &DsrGraph, steps: &[CycleStep]) -> Vec<CycleStep> {
    let fwd = canonical_rotation(steps);
    let reversed: Vec<CycleStep> = steps
        .iter()
        .rev()
        .map(|s| CycleStep {
            edge: s.edge,
            forward: !s.forward,
        })
        .collect();
    if reversed
        .iter()
        .all(|s| graph.arc_allowed(s.edge, s.forward))
    {
        let rev = canonical_rotation(&reversed);
        if rev < fwd {
            return rev;
        }
    }
    fwd
}

/// All node-simple directed cycles respecting edge directions, each reported
/// once up to rotation, with a cycle and its valid reversal reported once.
/// Deterministic order; explicit error when the count exceeds `cap`.
pub fn enumerate_cycles(graph: &DsrGraph, cap: usize) -> Result<Vec<DsrCycle>> {
    if cap == 0 {
        return Err(CrnError::Domain("cycle cap must be at least 1".into()));
    }
    let n_nodes = graph.n_nodes();
    let mut found: std::collections::BTreeMap<Vec<CycleStep>, Vec<CycleStep>> =
        std::collections::BTreeMap::new(); // canonical key -> steps

    // Anchored depth-first search: cycles are rooted at their minimal node,
    // paths may only visit nodes >= the root.
    for root in 0..n_nodes {
        let mut path_nodes: Vec<usize> = vec![root];
        let mut path_steps: Vec<CycleStep> = Vec::new();
        let mut on_path = vec![false; n_nodes];
        on_path[root] = true;
        // frame: arcs still to explore from the current node
        let mut stack: Vec<Vec<(usize, usize, bool)>> = vec![graph.arcs_from(root)];
        while let Some(frame) = stack.last_mut() {
            let Some((edge, next, forward)) = frame.pop() else {
                stack.pop();
                if path_nodes.len() > 1 {
                    let node = path_nodes.pop().unwrap();
                    on_path[node] = false;
                    path_steps.pop();
                }
                continue;
            };
            if next < root {
                continue;
            }
            // an edge may appear at most once per cycle
            if path_steps.iter().any(|s| s.edge == edge) {
                continue;
            }
            if next == root {
                let mut steps = path_steps.clone();
                steps.push(CycleStep { edge, forward });
                let key = canonical_key(graph, &steps);
                found.entry(key).or_insert(steps);
                if found.len() > cap {
                    return Err(CrnError::CapExceeded {
                        what: "cycles",
                        count: found.len() as u128,
                        cap: cap as u128,
                    });
                }
                continue;
            }
            if on_path[next] {
                continue;
            }
            on_path[next] = true;
            path_nodes.push(next);
            path_steps.push(CycleStep { edge, forward });
            stack.push(graph.arcs_from(next));
        }
    }

    Ok(found
        .into_values()
        .map(|steps| DsrCycle::from_steps(graph, steps))
        .collect())
}

/// True when some compatible orientation of the two cycles co-directs every
/// shared edge, the shared set is nonempty, and every connected component of
/// it contains an odd number of edges.
pub fn odd_intersection(graph: &DsrGraph, c1: &DsrCycle, c2: &DsrCycle) -> bool {
    let orientations = |c: &DsrCycle| -> Vec<Vec<CycleStep>> {
        let mut v = vec![c.steps.clone()];
        if let Some(rev) = c.reversed() {
            v.push(rev);
        }
        v
    };
    for o1 in orientations(c1) {
        for o2 in orientations(c2) {
            if co_directed_odd_components(graph, &o1, &o2) {
                return true;
            }
        }
    }
    false
}

fn co_directed_odd_components(graph: &DsrGraph, o1: &[CycleStep], o2: &[CycleStep]) -> bool {
    let mut shared: Vec<usize> = Vec::new();
    for s1 in o1 {
        if let Some(s2) = o2.iter().find(|s2| s2.edge == s1.edge) {
            if s2.forward != s1.forward {
                return false; // shared edge traversed in opposite directions
            }
            shared.push(s1.edge);
        }
    }
    if shared.is_empty() {
        return false;
    }
    // connected components of the shared edge set, by endpoint
    let mut component = vec![usize::MAX; graph.n_nodes()];
    let mut comp_count = 0usize;
    let mut edge_comp = vec![usize::MAX; shared.len()];
    while let Some(seed) = edge_comp.iter().position(|&c| c == usize::MAX) {
        let comp = comp_count;
        comp_count += 1;
        let (a, b) = graph.edge_endpoints(shared[seed]);
        component[a] = comp;
        component[b] = comp;
        edge_comp[seed] = comp;
        loop {
            let mut changed = false;
            for (i, &e) in shared.iter().enumerate() {
                if edge_comp[i] != usize::MAX {
                    continue;
                }
                let (a, b) = graph.edge_endpoints(e);
                if component[a] == comp || component[b] == comp {
                    component[a] = comp;
                    component[b] = comp;
                    edge_comp[i] = comp;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
    }
    (0..comp_count).all(|c| edge_comp.iter().filter(|&&x| x == c).count() % 2 == 1)
}

/// The three-condition report: every e-cycle an s-cycle, no two e-cycles
/// with an odd intersection, and some n-subset product nonzero.
#[derive(Debug, Clone, Serialize)]
pub struct DsrCriterionReport {
    pub condition1: bool,
    pub condition2: bool,
    pub condition3: bool,
    pub passes: bool,
    pub cycles: Vec<DsrCycle>,
    /// e-cycles that are not s-cycles (indices into `cycles`)
    pub condition1_violations: Vec<usize>,
    /// pairs of e-cycles with an odd intersection
    pub condition2_violations: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, Copy)]
pub struct DsrOptions {
    pub split_reversible: bool,
    pub cycle_cap: usize,
    pub subset_cap: u128,
}

impl Default for DsrOptions {
    fn default() -> Self {
        DsrOptions {
            split_reversible: false,
            cycle_cap: DEFAULT_CYCLE_CAP,
            subset_cap: injectivity::DEFAULT_SUBSET_CAP,
        }
    }
}

/// Evaluate the criterion; a pass certifies injectivity.
pub fn dsr_criterion(net: &ReactionNetwork, opts: DsrOptions) -> Result<DsrCriterionReport> {
    let graph = build_dsr(net, opts.split_reversible);
    let cycles = enumerate_cycles(&graph, opts.cycle_cap)?;
    let report = injectivity::injectivity_verdict(net, opts.subset_cap)?;
    let condition3 = report.verdict != InjectivityVerdict::DegenerateAllZero
        && (report.n_positive + report.n_negative) > 0;

    let e_cycles: Vec<usize> = cycles
        .iter()
        .enumerate()
        .filter(|(_, c)| c.parity == Parity::E)
        .map(|(i, _)| i)
        .collect();
    let condition1_violations: Vec<usize> = e_cycles
        .iter()
        .copied()
        .filter(|&i| !cycles[i].s_cycle)
        .collect();
    let mut condition2_violations = Vec::new();
    for (a, &i) in e_cycles.iter().enumerate() {
        for &j in &e_cycles[a + 1..] {
            if odd_intersection(&graph, &cycles[i], &cycles[j]) {
                condition2_violations.push((i, j));
            }
        }
    }
    let condition1 = condition1_violations.is_empty();
    let condition2 = condition2_violations.is_empty();
    Ok(DsrCriterionReport {
        condition1,
        condition2,
        condition3,
        passes: condition1 && condition2 && condition3,
        cycles,
        condition1_violations,
        condition2_violations,
    })
}

/// Human-readable walk through a cycle, e.g. `E -(+1)-> [ES -> E + P] ...`.
pub fn describe_cycle(net: &ReactionNetwork, graph: &DsrGraph, cycle: &DsrCycle) -> String {
    let node_name = |step: &CycleStep, at_species: bool| -> String {
        let edge = &graph.edges[step.edge];
        if at_species {
            net.species()[edge.species].name.clone()
        } else {
            let node = &graph.reaction_nodes[edge.reaction_node];
            let r = &net.reactions()[node.reactions[0]];
            let arrow = if node.reversible { "<->" } else { "->" };
            format!(
                "[{} {} {}]",
                crate::parser::format_complex(&r.source, net),
                arrow,
                crate::parser::format_complex(&r.target, net)
            )
        }
    };
    let mut out = String::new();
    for step in &cycle.steps {
        let edge = &graph.edges[step.edge];
        let sign = match edge.sign {
            Sign::Positive => '+',
            Sign::Negative => '-',
        };
        out.push_str(&node_name(step, step.forward));
        out.push_str(&format!(" ({sign}{}) ", edge.label));
    }
    if let Some(first) = cycle.steps.first() {
        out.push_str(&node_name(first, first.forward));
    }
    out
}
