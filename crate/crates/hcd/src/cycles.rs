//! Simple-cycle enumeration, H-cycle recognition and digraph predicates.

use std::collections::BTreeMap;

use crate::digraph::{HostDigraph, VertexId};
use crate::error::{Error, Result};
use crate::instance::{ColouredInstance, VertexSet, Walk};

/// Hard bounds for cycle enumeration. Exceeding either bound is an error,
/// never a silent truncation: the hypothesis checks built on enumeration
/// must stay sound.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct CycleEnumerationLimit {
    pub max_cycles: usize,
    pub max_length: usize,
}

impl CycleEnumerationLimit {
    pub fn new(max_cycles: usize, max_length: usize) -> Self {
        assert!(max_cycles > 0 && max_length > 0, "limits must be positive");
        CycleEnumerationLimit {
            max_cycles,
            max_length,
        }
    }

    /// Defaults: up to a million cycles, lengths up to |V| (no simple cycle
    /// can be longer).
    pub fn default_for(digraph: &HostDigraph) -> Self {
        CycleEnumerationLimit {
            max_cycles: 1_000_000,
            max_length: digraph.vertex_count().max(1),
        }
    }
}

/// Index-based view of a host digraph; vertices are sorted so index order
/// is the canonical identifier order.
struct Indexed<'a> {
    vertices: Vec<&'a VertexId>,
    adjacency: Vec<Vec<usize>>,
}

impl<'a> Indexed<'a> {
    fn new(digraph: &'a HostDigraph) -> Self {
        let vertices: Vec<&VertexId> = digraph.vertices().iter().collect();
        let index: BTreeMap<&VertexId, usize> =
            vertices.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); vertices.len()];
        for arc in digraph.arcs() {
            adjacency[index[&arc.tail]].push(index[&arc.head]);
        }
        Indexed {
            vertices,
            adjacency,
        }
    }
}

/// Tarjan's algorithm restricted to vertices >= min_vertex.
fn strongly_connected_components(adjacency: &[Vec<usize>], min_vertex: usize) -> Vec<Vec<usize>> {
    struct State<'a> {
        adjacency: &'a [Vec<usize>],
        min_vertex: usize,
        index: Vec<Option<usize>>,
        low: Vec<usize>,
        on_stack: Vec<bool>,
        stack: Vec<usize>,
        next: usize,
        components: Vec<Vec<usize>>,
    }

    fn connect(state: &mut State<'_>, v: usize) {
        state.index[v] = Some(state.next);
        state.low[v] = state.next;
        state.next += 1;
        state.stack.push(v);
        state.on_stack[v] = true;

        for i in 0..state.adjacency[v].len() {
            let w = state.adjacency[v][i];
            if w < state.min_vertex {
                continue;
            }
            if state.index[w].is_none() {
                connect(state, w);
                state.low[v] = state.low[v].min(state.low[w]);
            } else if state.on_stack[w] {
                state.low[v] = state.low[v].min(state.index[w].expect("visited"));
            }
        }

        if state.low[v] == state.index[v].expect("visited") {
            let mut component = Vec::new();
            loop {
                let w = state.stack.pop().expect("stack holds the component");
                state.on_stack[w] = false;
                component.push(w);
                if w == v {
                    break;
                }
            }
            state.components.push(component);
        }
    }

    let n = adjacency.len();
    let mut state = State {
        adjacency,
        min_vertex,
        index: vec![None; n],
        low: vec![0; n],
        on_stack: vec![false; n],
        stack: Vec::new(),
        next: 0,
        components: Vec::new(),
    };
    for v in min_vertex..n {
        if state.index[v].is_none() {
            connect(&mut state, v);
        }
    }
    state.components
}

struct CircuitSearch<'a> {
    adjacency: &'a [Vec<usize>],
    in_component: Vec<bool>,
    start: usize,
    blocked: Vec<bool>,
    block_list: Vec<Vec<usize>>,
    path: Vec<usize>,
    cycles: Vec<Vec<usize>>,
    limit: &'a CycleEnumerationLimit,
    found_so_far: usize,
}

impl CircuitSearch<'_> {
    fn unblock(&mut self, v: usize) {
        let mut todo = vec![v];
        while let Some(u) = todo.pop() {
            if !self.blocked[u] {
                continue;
            }
            self.blocked[u] = false;
            todo.append(&mut self.block_list[u]);
        }
    }

    fn record(&mut self) -> Result<()> {
        let length = self.path.len();
        if length > self.limit.max_length {
            return Err(Error::limit(format!(
                "cycle enumeration found a cycle of length {length}, exceeding max_length = {}",
                self.limit.max_length
            )));
        }
        if self.found_so_far + self.cycles.len() >= self.limit.max_cycles {
            return Err(Error::limit(format!(
                "cycle enumeration exceeded max_cycles = {}",
                self.limit.max_cycles
            )));
        }
        self.cycles.push(self.path.clone());
        Ok(())
    }

    fn circuit(&mut self, v: usize) -> Result<bool> {
        let mut found = false;
        self.path.push(v);
        self.blocked[v] = true;
        let neighbours: Vec<usize> = self.adjacency[v]
            .iter()
            .copied()
            .filter(|&w| self.in_component[w])
            .collect();
        for &w in &neighbours {
            if w == self.start {
                self.record()?;
                found = true;
            } else if !self.blocked[w] && self.circuit(w)? {
                found = true;
            }
        }
        if found {
            self.unblock(v);
        } else {
            for &w in &neighbours {
                if !self.block_list[w].contains(&v) {
                    self.block_list[w].push(v);
                }
            }
        }
        self.path.pop();
        Ok(found)
    }
}

/// Enumerates every simple directed cycle of the digraph, Johnson-style:
/// for each start vertex in identifier order, search the strongly connected
/// component containing it inside the subgraph of not-smaller vertices.
///
/// Each cycle is returned once, as a closed walk in canonical rotation
/// (starting at its smallest vertex); the result is sorted by vertex
/// sequence. 2-cycles `u <-> v` count. Self-loops, which a well-formed host
/// never has, would be reported as length-1 cycles.
pub fn enumerate_simple_cycles(
    digraph: &HostDigraph,
    limit: &CycleEnumerationLimit,
) -> Result<Vec<Walk>> {
    let indexed = Indexed::new(digraph);
    let n = indexed.vertices.len();
    let mut cycles: Vec<Vec<usize>> = Vec::new();

    for (v, neighbours) in indexed.adjacency.iter().enumerate() {
        if neighbours.contains(&v) {
            if 1 > limit.max_length {
                return Err(Error::limit(
                    "cycle enumeration found a cycle of length 1, exceeding max_length = 0",
                ));
            }
            if cycles.len() >= limit.max_cycles {
                return Err(Error::limit(format!(
                    "cycle enumeration exceeded max_cycles = {}",
                    limit.max_cycles
                )));
            }
            cycles.push(vec![v]);
        }
    }

    for s in 0..n {
        let components = strongly_connected_components(&indexed.adjacency, s);
        let Some(component) = components.into_iter().find(|c| c.contains(&s)) else {
            continue;
        };
        if component.len() < 2 {
            continue;
        }
        let mut in_component = vec![false; n];
        for &v in &component {
            in_component[v] = true;
        }
        let mut search = CircuitSearch {
            adjacency: &indexed.adjacency,
            in_component,
            start: s,
            blocked: vec![false; n],
            block_list: vec![Vec::new(); n],
            path: Vec::new(),
            cycles: Vec::new(),
            limit,
            found_so_far: cycles.len(),
        };
        search.circuit(s)?;
        cycles.append(&mut search.cycles);
    }

    let mut walks: Vec<Walk> = cycles
        .into_iter()
        .map(|cycle| {
            let mut vertices: Vec<VertexId> =
                cycle.iter().map(|&i| indexed.vertices[i].clone()).collect();
            vertices.push(indexed.vertices[cycle[0]].clone());
            Walk::new(vertices).expect("non-empty")
        })
        .collect();
    walks.sort();
    Ok(walks)
}

/// True iff every consecutive colour pair along the closed walk, including
/// the wrap-around pair (last arc, first arc), is a pattern arc.
pub fn is_h_cycle(instance: &ColouredInstance, cycle: &Walk) -> Result<bool> {
    is_h_cycle_with(instance, cycle, true)
}

/// As [`is_h_cycle`], with the wrap-around pair made optional for
/// experimentation; all pipelines use the inclusive semantics.
pub fn is_h_cycle_with(
    instance: &ColouredInstance,
    cycle: &Walk,
    include_wraparound: bool,
) -> Result<bool> {
    if !cycle.is_closed() {
        return Err(Error::invalid("is_h_cycle expects a closed walk"));
    }
    if cycle.len() < 2 {
        return Err(Error::invalid("a directed cycle has length at least 2"));
    }
    let colours = instance.colour_sequence(cycle)?;
    let pattern = instance.pattern();
    let chain_ok = colours
        .windows(2)
        .all(|pair| pattern.has_arc(&pair[0], &pair[1]));
    if !chain_ok {
        return Ok(false);
    }
    if include_wraparound {
        let last = colours.last().expect("length >= 2");
        let first = colours.first().expect("length >= 2");
        return Ok(pattern.has_arc(last, first));
    }
    Ok(true)
}

/// The hypothesis of the closure machinery: every simple directed cycle of
/// the host is an H-cycle. Vacuously true on acyclic hosts.
pub fn all_cycles_are_h_cycles(
    instance: &ColouredInstance,
    limit: &CycleEnumerationLimit,
) -> Result<bool> {
    match first_non_h_cycle(instance, limit)? {
        None => Ok(true),
        Some(_) => Ok(false),
    }
}

/// The smallest enumerated cycle that fails the H-cycle check, if any.
/// Useful as a hypothesis-violation witness.
pub fn first_non_h_cycle(
    instance: &ColouredInstance,
    limit: &CycleEnumerationLimit,
) -> Result<Option<Walk>> {
    for cycle in enumerate_simple_cycles(instance.host(), limit)? {
        if !is_h_cycle(instance, &cycle)? {
            return Ok(Some(cycle));
        }
    }
    Ok(None)
}

/// True iff every directed cycle contains a symmetric arc; equivalently the
/// subdigraph of asymmetric arcs is acyclic (a cycle avoiding symmetric
/// arcs lies entirely in the asymmetric part, and conversely).
pub fn every_cycle_has_symmetric_arc(digraph: &HostDigraph) -> bool {
    let asymmetric = HostDigraph::new(
        digraph.vertices().iter().cloned(),
        digraph.asymmetric_arcs(),
    );
    digraph_predicate(&asymmetric, DigraphPredicate::Acyclic)
}

/// A directed cycle made only of asymmetric arcs, if one exists; the
/// witness for a failed symmetric-arc check.
pub fn find_asymmetric_cycle(digraph: &HostDigraph) -> Option<Walk> {
    let asymmetric = HostDigraph::new(
        digraph.vertices().iter().cloned(),
        digraph.asymmetric_arcs(),
    );
    let limit = CycleEnumerationLimit::default_for(&asymmetric);
    enumerate_simple_cycles(&asymmetric, &limit)
        .ok()
        .and_then(|cycles| cycles.into_iter().next())
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DigraphPredicate {
    Acyclic,
    BipartiteUnderlying,
    StronglyConnected,
    OddDirectedCycleFree,
}

pub fn digraph_predicate(digraph: &HostDigraph, kind: DigraphPredicate) -> bool {
    match kind {
        DigraphPredicate::Acyclic => is_acyclic(digraph),
        DigraphPredicate::BipartiteUnderlying => underlying_bipartition(digraph).is_some(),
        DigraphPredicate::StronglyConnected => is_strongly_connected(digraph),
        DigraphPredicate::OddDirectedCycleFree => is_odd_directed_cycle_free(digraph),
    }
}

fn is_acyclic(digraph: &HostDigraph) -> bool {
    let indexed = Indexed::new(digraph);
    // A digraph is acyclic iff every strongly connected component is a
    // single vertex without a self-loop.
    strongly_connected_components(&indexed.adjacency, 0)
        .iter()
        .all(|c| c.len() == 1 && !indexed.adjacency[c[0]].contains(&c[0]))
}

fn is_strongly_connected(digraph: &HostDigraph) -> bool {
    let indexed = Indexed::new(digraph);
    if indexed.vertices.len() <= 1 {
        return true;
    }
    strongly_connected_components(&indexed.adjacency, 0).len() == 1
}

/// 2-colours the underlying undirected graph, component by component with
/// the smallest vertex of each component placed in the first part. `None`
/// when an odd undirected cycle makes this impossible.
pub fn underlying_bipartition(digraph: &HostDigraph) -> Option<(VertexSet, VertexSet)> {
    let indexed = Indexed::new(digraph);
    let n = indexed.vertices.len();
    let mut undirected: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (v, neighbours) in indexed.adjacency.iter().enumerate() {
        for &w in neighbours {
            undirected[v].push(w);
            undirected[w].push(v);
        }
    }
    let mut side: Vec<Option<bool>> = vec![None; n];
    for root in 0..n {
        if side[root].is_some() {
            continue;
        }
        side[root] = Some(false);
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            let v_side = side[v].expect("assigned before queueing");
            for &w in &undirected[v] {
                match side[w] {
                    None => {
                        side[w] = Some(!v_side);
                        queue.push_back(w);
                    }
                    Some(w_side) if w_side == v_side => return None,
                    Some(_) => {}
                }
            }
        }
    }
    let mut part_a = VertexSet::new();
    let mut part_b = VertexSet::new();
    for (v, s) in side.iter().enumerate() {
        match s.expect("all vertices coloured") {
            false => part_a.insert(indexed.vertices[v].clone()),
            true => part_b.insert(indexed.vertices[v].clone()),
        };
    }
    Some((part_a, part_b))
}

/// Parity classes of a digraph without odd directed cycles: every arc goes
/// from one class to the other. Assumes strong connectivity (single
/// parity-consistent class structure); `None` when a parity conflict, i.e.
/// an odd directed closed walk, exists.
pub fn directed_parity_bipartition(digraph: &HostDigraph) -> Option<(VertexSet, VertexSet)> {
    let indexed = Indexed::new(digraph);
    let n = indexed.vertices.len();
    let mut parity: Vec<Option<bool>> = vec![None; n];
    for root in 0..n {
        if parity[root].is_some() {
            continue;
        }
        parity[root] = Some(false);
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            let v_parity = parity[v].expect("assigned before queueing");
            for &w in &indexed.adjacency[v] {
                match parity[w] {
                    None => {
                        parity[w] = Some(!v_parity);
                        queue.push_back(w);
                    }
                    Some(w_parity) if w_parity == v_parity => return None,
                    Some(_) => {}
                }
            }
        }
    }
    let mut part_a = VertexSet::new();
    let mut part_b = VertexSet::new();
    for (v, p) in parity.iter().enumerate() {
        match p.expect("all vertices reached") {
            false => part_a.insert(indexed.vertices[v].clone()),
            true => part_b.insert(indexed.vertices[v].clone()),
        };
    }
    Some((part_a, part_b))
}

/// No directed cycle of odd length. Directed cycles live inside strongly
/// connected components, so it suffices to check each component for a
/// parity conflict along its internal arcs.
fn is_odd_directed_cycle_free(digraph: &HostDigraph) -> bool {
    let indexed = Indexed::new(digraph);
    let n = indexed.vertices.len();
    let components = strongly_connected_components(&indexed.adjacency, 0);
    let mut component_of = vec![usize::MAX; n];
    for (c, component) in components.iter().enumerate() {
        for &v in component {
            component_of[v] = c;
        }
    }
    for component in &components {
        if component.len() == 1 && !indexed.adjacency[component[0]].contains(&component[0]) {
            continue;
        }
        // parity labelling via BFS from one root, then verify every
        // internal arc flips parity
        let root = *component.iter().min().expect("non-empty component");
        let mut parity: Vec<Option<bool>> = vec![None; n];
        parity[root] = Some(false);
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            let v_parity = parity[v].expect("assigned");
            for &w in &indexed.adjacency[v] {
                if component_of[w] != component_of[root] {
                    continue;
                }
                if parity[w].is_none() {
                    parity[w] = Some(!v_parity);
                    queue.push_back(w);
                }
            }
        }
        for &v in component {
            for &w in &indexed.adjacency[v] {
                if component_of[w] != component_of[root] {
                    continue;
                }
                if parity[v] == parity[w] {
                    return false;
                }
            }
        }
    }
    true
}
