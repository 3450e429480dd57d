//! H-walk recognition and reachability.
//!
//! The engine is a product construction: states are the arcs of the host,
//! and there is a transition from arc `e` to arc `f` exactly when they share
//! their middle vertex and the colour pair `(colour(e), colour(f))` is an arc
//! of the pattern. H-walks of length >= 1 from `u` to `v` correspond to
//! state paths from an arc leaving `u` to an arc entering `v`, so every
//! reachability question becomes a BFS over at most `|E|` states.

use std::collections::{BTreeMap, VecDeque};

use crate::digraph::{Arc, ColourId, HostDigraph, VertexId};
use crate::error::{Error, Result};
use crate::instance::{ArcPartition, ArcSet, ColouredInstance, Walk};

/// Default step budget for the exhaustive simple-path searches.
pub const DEFAULT_PATH_BUDGET: u64 = 1_000_000;

/// Derived digraph on the arcs of the host; paths here are H-walks there.
pub struct TransitionDigraph {
    states: Vec<Arc>,
    successors: Vec<Vec<usize>>,
    by_tail: BTreeMap<VertexId, Vec<usize>>,
}

impl TransitionDigraph {
    pub fn new(instance: &ColouredInstance) -> Self {
        Self::build(instance, None).expect("full arc set is always valid")
    }

    /// Restricted to a subset of the host's arcs; H-walks through this
    /// digraph use only those arcs.
    pub fn restricted(instance: &ColouredInstance, within: &ArcSet) -> Result<Self> {
        Self::build(instance, Some(within))
    }

    fn build(instance: &ColouredInstance, within: Option<&ArcSet>) -> Result<Self> {
        let states: Vec<Arc> = match within {
            Some(subset) => {
                if let Some(a) = subset.iter().find(|a| !instance.host().contains_arc(a)) {
                    return Err(Error::invalid(format!(
                        "arc subset contains unknown arc '{a}'"
                    )));
                }
                subset.iter().cloned().collect()
            }
            None => instance.host().arcs().iter().cloned().collect(),
        };
        let colours: Vec<&ColourId> = states
            .iter()
            .map(|a| instance.arc_colour(a))
            .collect::<Result<_>>()?;
        let mut by_tail: BTreeMap<VertexId, Vec<usize>> = BTreeMap::new();
        for (i, a) in states.iter().enumerate() {
            by_tail.entry(a.tail.clone()).or_default().push(i);
        }
        let pattern = instance.pattern();
        let successors = states
            .iter()
            .enumerate()
            .map(|(i, e)| {
                by_tail
                    .get(&e.head)
                    .map(|candidates| {
                        candidates
                            .iter()
                            .copied()
                            .filter(|&j| pattern.has_arc(colours[i], colours[j]))
                            .collect()
                    })
                    .unwrap_or_default()
            })
            .collect();
        Ok(TransitionDigraph {
            states,
            successors,
            by_tail,
        })
    }

    pub fn states(&self) -> &[Arc] {
        &self.states
    }

    pub fn successors(&self, state: usize) -> &[usize] {
        &self.successors[state]
    }

    /// Indices of states whose arc leaves the given vertex.
    pub fn states_leaving(&self, v: &VertexId) -> &[usize] {
        self.by_tail.get(v).map(Vec::as_slice).unwrap_or(&[])
    }

    /// All transitions as arc pairs.
    pub fn transitions(&self) -> impl Iterator<Item = (&Arc, &Arc)> {
        self.successors
            .iter()
            .enumerate()
            .flat_map(move |(i, succ)| succ.iter().map(move |&j| (&self.states[i], &self.states[j])))
    }

    /// State indices reachable from the given start states, starts included.
    fn reachable(&self, starts: &[usize]) -> Vec<bool> {
        let mut seen = vec![false; self.states.len()];
        let mut queue: VecDeque<usize> = VecDeque::new();
        for &s in starts {
            if !seen[s] {
                seen[s] = true;
                queue.push_back(s);
            }
        }
        while let Some(i) = queue.pop_front() {
            for &j in &self.successors[i] {
                if !seen[j] {
                    seen[j] = true;
                    queue.push_back(j);
                }
            }
        }
        seen
    }
}

/// Precomputed all-pairs H-walk reachability for one (instance, arc subset)
/// pair. `exists(u, u)` asks for a closed H-walk of length >= 1 through `u`.
pub struct HReach {
    vertices: Vec<VertexId>,
    index: BTreeMap<VertexId, usize>,
    matrix: Vec<bool>,
}

impl HReach {
    pub fn new(instance: &ColouredInstance) -> Self {
        Self::from_transitions(instance.host(), &TransitionDigraph::new(instance))
    }

    pub fn within(instance: &ColouredInstance, arcs: &ArcSet) -> Result<Self> {
        Ok(Self::from_transitions(
            instance.host(),
            &TransitionDigraph::restricted(instance, arcs)?,
        ))
    }

    fn from_transitions(host: &HostDigraph, td: &TransitionDigraph) -> Self {
        let vertices: Vec<VertexId> = host.vertices().iter().cloned().collect();
        let index: BTreeMap<VertexId, usize> = vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), i))
            .collect();
        let n = vertices.len();
        let mut matrix = vec![false; n * n];
        for (u_idx, u) in vertices.iter().enumerate() {
            let seen = td.reachable(td.states_leaving(u));
            for (state, reached) in seen.iter().enumerate() {
                if *reached {
                    let v_idx = index[&td.states[state].head];
                    matrix[u_idx * n + v_idx] = true;
                }
            }
        }
        HReach {
            vertices,
            index,
            matrix,
        }
    }

    /// Panics on vertices outside the instance; callers validate inputs.
    pub fn exists(&self, from: &VertexId, to: &VertexId) -> bool {
        let i = self.index[from];
        let j = self.index[to];
        self.matrix[i * self.vertices.len() + j]
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }
}

/// The H-closure: same vertices as the host, an arc `u -> v` (u != v)
/// exactly when an H-walk from `u` to `v` exists. Loopless by construction
/// even when closed H-walks exist.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ClosureDigraph(HostDigraph);

impl ClosureDigraph {
    pub fn digraph(&self) -> &HostDigraph {
        &self.0
    }

    pub fn into_digraph(self) -> HostDigraph {
        self.0
    }
}

fn check_vertex(instance: &ColouredInstance, v: &VertexId) -> Result<()> {
    if instance.host().contains_vertex(v) {
        Ok(())
    } else {
        Err(Error::invalid(format!("unknown vertex '{v}'")))
    }
}

/// True iff every consecutive colour pair along the walk is a pattern arc.
/// Walks of length 0 and 1 are H-walks vacuously.
pub fn is_h_walk(instance: &ColouredInstance, walk: &Walk) -> Result<bool> {
    let colours = instance.colour_sequence(walk)?;
    Ok(colours
        .windows(2)
        .all(|pair| instance.pattern().has_arc(&pair[0], &pair[1])))
}

/// Is there an H-walk of length >= 1 from `u` to `v`? With `within`, only
/// arcs in that subset may be used. `u == v` asks for a closed H-walk.
pub fn h_walk_exists(
    instance: &ColouredInstance,
    u: &VertexId,
    v: &VertexId,
    within: Option<&ArcSet>,
) -> Result<bool> {
    check_vertex(instance, u)?;
    check_vertex(instance, v)?;
    let td = match within {
        Some(subset) => TransitionDigraph::restricted(instance, subset)?,
        None => TransitionDigraph::new(instance),
    };
    let seen = td.reachable(td.states_leaving(u));
    Ok(td
        .states
        .iter()
        .enumerate()
        .any(|(i, a)| seen[i] && a.head == *v))
}

/// A minimum-length H-walk from `u` to `v`, ties broken by the
/// lexicographically smallest vertex sequence; `None` when no H-walk
/// exists.
pub fn shortest_h_walk(
    instance: &ColouredInstance,
    u: &VertexId,
    v: &VertexId,
    within: Option<&ArcSet>,
) -> Result<Option<Walk>> {
    check_vertex(instance, u)?;
    check_vertex(instance, v)?;
    let td = match within {
        Some(subset) => TransitionDigraph::restricted(instance, subset)?,
        None => TransitionDigraph::new(instance),
    };
    let m = td.states.len();
    let mut predecessors: Vec<Vec<usize>> = vec![Vec::new(); m];
    for (i, succ) in td.successors.iter().enumerate() {
        for &j in succ {
            predecessors[j].push(i);
        }
    }

    // dist[s] = length of the shortest walk that starts with state s and
    // ends on an arc entering v.
    let mut dist: Vec<Option<usize>> = vec![None; m];
    let mut queue: VecDeque<usize> = VecDeque::new();
    for (i, a) in td.states.iter().enumerate() {
        if a.head == *v {
            dist[i] = Some(1);
            queue.push_back(i);
        }
    }
    while let Some(i) = queue.pop_front() {
        let d = dist[i].expect("queued states have distances");
        for &p in &predecessors[i] {
            if dist[p].is_none() {
                dist[p] = Some(d + 1);
                queue.push_back(p);
            }
        }
    }

    let starts = td.states_leaving(u);
    let Some(total) = starts.iter().filter_map(|&i| dist[i]).min() else {
        return Ok(None);
    };

    // Greedy reconstruction: all candidates at a step share their tail, so
    // distinct candidates have distinct heads and picking the smallest head
    // yields the lexicographically smallest minimal walk.
    let mut vertices = vec![u.clone()];
    let mut remaining = total;
    let mut candidates: Vec<usize> = starts
        .iter()
        .copied()
        .filter(|&i| dist[i] == Some(remaining))
        .collect();
    loop {
        let pick = candidates
            .iter()
            .copied()
            .min_by_key(|&i| &td.states[i].head)
            .expect("a state at every level of a BFS distance");
        vertices.push(td.states[pick].head.clone());
        remaining -= 1;
        if remaining == 0 {
            break;
        }
        candidates = td.successors[pick]
            .iter()
            .copied()
            .filter(|&j| dist[j] == Some(remaining))
            .collect();
    }
    let walk = Walk::new(vertices).expect("non-empty");
    debug_assert!(is_h_walk(instance, &walk).unwrap_or(false));
    Ok(Some(walk))
}

/// Builds the H-closure of the instance.
pub fn h_closure(instance: &ColouredInstance) -> ClosureDigraph {
    let reach = HReach::new(instance);
    let mut arcs = ArcSet::new();
    for u in reach.vertices() {
        for v in reach.vertices() {
            if u != v && reach.exists(u, v) {
                arcs.insert(Arc {
                    tail: u.clone(),
                    head: v.clone(),
                });
            }
        }
    }
    ClosureDigraph(HostDigraph::new(
        instance.host().vertices().iter().cloned(),
        arcs,
    ))
}

struct PathSearch<'a> {
    adjacency: Vec<Vec<(usize, usize)>>,
    pattern_arc: Vec<bool>,
    n_colours: usize,
    vertices: Vec<&'a VertexId>,
}

impl<'a> PathSearch<'a> {
    fn new(instance: &'a ColouredInstance) -> Result<Self> {
        let vertices: Vec<&VertexId> = instance.host().vertices().iter().collect();
        let v_index: BTreeMap<&VertexId, usize> =
            vertices.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        let colours: Vec<&ColourId> = instance.pattern().vertices().iter().collect();
        let c_index: BTreeMap<&ColourId, usize> =
            colours.iter().enumerate().map(|(i, c)| (*c, i)).collect();
        let n_colours = colours.len();
        let mut pattern_arc = vec![false; n_colours * n_colours];
        for (a, b) in instance.pattern().arcs() {
            pattern_arc[c_index[a] * n_colours + c_index[b]] = true;
        }
        let mut adjacency: Vec<Vec<(usize, usize)>> = vec![Vec::new(); vertices.len()];
        for arc in instance.host().arcs() {
            let colour = instance.arc_colour(arc)?;
            adjacency[v_index[&arc.tail]].push((v_index[&arc.head], c_index[colour]));
        }
        Ok(PathSearch {
            adjacency,
            pattern_arc,
            n_colours,
            vertices,
        })
    }

    fn index_of(&self, v: &VertexId) -> usize {
        self.vertices
            .binary_search_by(|probe| probe.as_str().cmp(v.as_str()))
            .expect("vertex checked by caller")
    }

    fn compatible(&self, last: Option<usize>, next: usize) -> bool {
        match last {
            None => true,
            Some(c) => self.pattern_arc[c * self.n_colours + next],
        }
    }

    /// Backtracking over simple paths that stay H-compatible. Charges one
    /// budget unit per expansion and errors when the budget runs out.
    fn exists(
        &self,
        current: usize,
        target: usize,
        last_colour: Option<usize>,
        visited: &mut Vec<bool>,
        budget: &mut u64,
    ) -> Result<bool> {
        for &(next, colour) in &self.adjacency[current] {
            if !self.compatible(last_colour, colour) {
                continue;
            }
            if *budget == 0 {
                return Err(Error::limit(
                    "h-path search budget exhausted; raise the budget for larger instances",
                ));
            }
            *budget -= 1;
            if next == target {
                return Ok(true);
            }
            if !visited[next] {
                visited[next] = true;
                let found = self.exists(next, target, Some(colour), visited, budget)?;
                visited[next] = false;
                if found {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }
}

/// Is there an H-path (an H-walk with pairwise-distinct vertices) from `u`
/// to `v`? Exhaustive backtracking, guarded by a step budget.
pub fn h_path_exists(instance: &ColouredInstance, u: &VertexId, v: &VertexId) -> Result<bool> {
    h_path_exists_with_budget(instance, u, v, DEFAULT_PATH_BUDGET)
}

pub fn h_path_exists_with_budget(
    instance: &ColouredInstance,
    u: &VertexId,
    v: &VertexId,
    budget: u64,
) -> Result<bool> {
    check_vertex(instance, u)?;
    check_vertex(instance, v)?;
    if u == v {
        return Err(Error::invalid("h-path endpoints must be distinct"));
    }
    let search = PathSearch::new(instance)?;
    let mut budget = budget;
    let start = search.index_of(u);
    let mut visited = vec![false; search.vertices.len()];
    visited[start] = true;
    search.exists(start, search.index_of(v), None, &mut visited, &mut budget)
}

/// Does H-walk reachability imply H-path reachability on every ordered
/// pair of distinct vertices?
pub fn walk_implies_path_holds(instance: &ColouredInstance) -> Result<bool> {
    walk_implies_path_holds_with_budget(instance, DEFAULT_PATH_BUDGET)
}

pub fn walk_implies_path_holds_with_budget(
    instance: &ColouredInstance,
    budget: u64,
) -> Result<bool> {
    let reach = HReach::new(instance);
    let search = PathSearch::new(instance)?;
    let mut budget = budget;
    let n = search.vertices.len();
    for i in 0..n {
        for j in 0..n {
            if i == j || !reach.exists(search.vertices[i], search.vertices[j]) {
                continue;
            }
            let mut visited = vec![false; n];
            visited[i] = true;
            if !search.exists(i, j, None, &mut visited, &mut budget)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// True iff no transition joins arcs from different blocks, which is
/// equivalent to every H-walk staying inside a single block: a crossing
/// walk contains a crossing transition, and block-pure transitions force
/// block-pure walks by induction on length.
pub fn h_walks_respect_partition(
    instance: &ColouredInstance,
    partition: &ArcPartition,
) -> Result<bool> {
    Ok(first_block_crossing_transition(instance, partition)?.is_none())
}

/// The first pair of consecutive H-compatible arcs lying in different
/// blocks; the witness behind a failed [`h_walks_respect_partition`].
pub fn first_block_crossing_transition(
    instance: &ColouredInstance,
    partition: &ArcPartition,
) -> Result<Option<(Arc, Arc)>> {
    partition.check_against(instance.host())?;
    let mut block_of: BTreeMap<&Arc, usize> = BTreeMap::new();
    for (i, block) in partition.blocks().iter().enumerate() {
        for arc in block {
            block_of.insert(arc, i);
        }
    }
    let td = TransitionDigraph::new(instance);
    let crossing = td
        .transitions()
        .find(|(e, f)| block_of[e] != block_of[f])
        .map(|(e, f)| (e.clone(), f.clone()));
    Ok(crossing)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::PatternDigraph;
    use crate::instance::Colouring;

    fn instance(
        host_arcs: &[(&str, &str, &str)],
        pattern_arcs: &[(&str, &str)],
        extra_colours: &[&str],
    ) -> ColouredInstance {
        let host = HostDigraph::from_arcs([], host_arcs.iter().map(|(u, v, _)| (*u, *v)));
        let pattern = PatternDigraph::from_arcs(
            extra_colours
                .iter()
                .copied()
                .chain(host_arcs.iter().map(|(_, _, c)| *c)),
            pattern_arcs.iter().copied(),
        );
        let colouring = Colouring::new(
            host_arcs
                .iter()
                .map(|(u, v, c)| (Arc::new(*u, *v), ColourId::from(*c))),
        );
        ColouredInstance::new(host, pattern, colouring).expect("well-formed test instance")
    }

    #[test]
    fn short_walks_are_always_h_walks() {
        let inst = instance(&[("u", "v", "a")], &[], &[]);
        let trivial = Walk::from_ids(["u"]).unwrap();
        let single = Walk::from_ids(["u", "v"]).unwrap();
        assert!(is_h_walk(&inst, &trivial).unwrap());
        assert!(is_h_walk(&inst, &single).unwrap());
    }

    #[test]
    fn two_step_walk_checks_the_colour_pair() {
        let ok = instance(&[("u", "v", "a"), ("v", "w", "b")], &[("a", "b")], &[]);
        let walk = Walk::from_ids(["u", "v", "w"]).unwrap();
        assert!(is_h_walk(&ok, &walk).unwrap());

        let bad = instance(&[("u", "v", "a"), ("v", "w", "b")], &[("b", "a")], &[]);
        assert!(!is_h_walk(&bad, &walk).unwrap());
    }

    #[test]
    fn walk_existence_over_a_single_arc() {
        let inst = instance(&[("u", "v", "a")], &[], &[]);
        assert!(h_walk_exists(&inst, &"u".into(), &"v".into(), None).unwrap());
        assert!(!h_walk_exists(&inst, &"v".into(), &"u".into(), None).unwrap());
        assert!(h_walk_exists(&inst, &"zz".into(), &"v".into(), None).is_err());
        assert!(h_path_exists(&inst, &"u".into(), &"v".into()).unwrap());
        assert!(h_path_exists(&inst, &"u".into(), &"u".into()).is_err());
    }

    #[test]
    fn arcless_host_satisfies_walk_implies_path_vacuously() {
        let host = HostDigraph::new(["u", "v"].map(VertexId::from), []);
        let pattern = PatternDigraph::from_arcs(["a"], []);
        let inst = ColouredInstance::new(host, pattern, Colouring::new([])).unwrap();
        assert!(walk_implies_path_holds(&inst).unwrap());
    }

    #[test]
    fn incompatible_colours_block_the_only_walk() {
        let inst = instance(&[("u", "v", "a"), ("v", "w", "b")], &[("b", "a")], &[]);
        assert!(!h_walk_exists(&inst, &"u".into(), &"w".into(), None).unwrap());
    }

    #[test]
    fn within_restricts_usable_arcs() {
        let inst = instance(&[("u", "v", "a"), ("v", "u", "a")], &[("a", "a")], &[]);
        let only_uv: ArcSet = [Arc::new("u", "v")].into_iter().collect();
        assert!(h_walk_exists(&inst, &"u".into(), &"v".into(), Some(&only_uv)).unwrap());
        assert!(!h_walk_exists(&inst, &"v".into(), &"u".into(), Some(&only_uv)).unwrap());
        // closed walk through u needs both arcs
        assert!(h_walk_exists(&inst, &"u".into(), &"u".into(), None).unwrap());
        assert!(!h_walk_exists(&inst, &"u".into(), &"u".into(), Some(&only_uv)).unwrap());
    }

    #[test]
    fn shortest_walk_over_single_arc() {
        let inst = instance(&[("u", "v", "a")], &[], &[]);
        let walk = shortest_h_walk(&inst, &"u".into(), &"v".into(), None)
            .unwrap()
            .expect("walk exists");
        assert_eq!(walk, Walk::from_ids(["u", "v"]).unwrap());
        assert!(shortest_h_walk(&inst, &"v".into(), &"u".into(), None)
            .unwrap()
            .is_none());
    }

    #[test]
    fn shortest_walk_prefers_smallest_vertex_sequence() {
        // two length-2 routes u->m->z and u->p->z, both H-compatible
        let inst = instance(
            &[("u", "m", "a"), ("m", "z", "a"), ("u", "p", "a"), ("p", "z", "a")],
            &[("a", "a")],
            &[],
        );
        let walk = shortest_h_walk(&inst, &"u".into(), &"z".into(), None)
            .unwrap()
            .unwrap();
        assert_eq!(walk, Walk::from_ids(["u", "m", "z"]).unwrap());
    }

    #[test]
    fn closure_of_compatible_two_path() {
        let inst = instance(&[("u", "v", "a"), ("v", "w", "b")], &[("a", "b")], &[]);
        let closure = h_closure(&inst);
        let expected: ArcSet = [Arc::new("u", "v"), Arc::new("v", "w"), Arc::new("u", "w")]
            .into_iter()
            .collect();
        assert_eq!(closure.digraph().arcs(), &expected);
    }

    #[test]
    fn closure_of_arcless_host_is_arcless() {
        let host = HostDigraph::new(["u", "v"].map(VertexId::from), []);
        let pattern = PatternDigraph::from_arcs(["a"], []);
        let inst = ColouredInstance::new(host, pattern, Colouring::new([])).unwrap();
        assert_eq!(h_closure(&inst).digraph().arc_count(), 0);
    }

    /// An H-walk that necessarily repeats a vertex: u->m->w->m->z is an
    /// H-walk, but the only simple route u->m->z has an incompatible
    /// colour pair.
    fn repeat_forcing_instance() -> ColouredInstance {
        instance(
            &[("u", "m", "a"), ("m", "w", "b"), ("w", "m", "c"), ("m", "z", "d")],
            &[("a", "b"), ("b", "c"), ("c", "d")],
            &[],
        )
    }

    #[test]
    fn walk_can_exist_without_a_path() {
        let inst = repeat_forcing_instance();
        assert!(h_walk_exists(&inst, &"u".into(), &"z".into(), None).unwrap());
        assert!(!h_path_exists(&inst, &"u".into(), &"z".into()).unwrap());
        assert!(!walk_implies_path_holds(&inst).unwrap());
    }

    #[test]
    fn path_search_budget_is_enforced() {
        let inst = repeat_forcing_instance();
        assert!(matches!(
            h_path_exists_with_budget(&inst, &"u".into(), &"z".into(), 0),
            Err(Error::ResourceLimit(_))
        ));
    }

    #[test]
    fn complete_looped_pattern_makes_walks_and_paths_agree() {
        let host = HostDigraph::from_arcs([], [("u", "v"), ("v", "w"), ("w", "u")]);
        let pattern = PatternDigraph::complete_with_loops(["a", "b"].map(ColourId::from));
        let colouring = Colouring::new([
            (Arc::new("u", "v"), ColourId::from("a")),
            (Arc::new("v", "w"), ColourId::from("b")),
            (Arc::new("w", "u"), ColourId::from("a")),
        ]);
        let inst = ColouredInstance::new(host, pattern, colouring).unwrap();
        assert!(walk_implies_path_holds(&inst).unwrap());
    }

    #[test]
    fn partition_respect_checks_transitions_only() {
        let inst = instance(&[("u", "v", "a"), ("v", "w", "b")], &[("a", "b")], &[]);
        let uv = Arc::new("u", "v");
        let vw = Arc::new("v", "w");

        let single = ArcPartition::new(vec![[uv.clone(), vw.clone()].into_iter().collect()])
            .unwrap();
        assert!(h_walks_respect_partition(&inst, &single).unwrap());

        let split = ArcPartition::two(
            [uv.clone()].into_iter().collect(),
            [vw.clone()].into_iter().collect(),
        )
        .unwrap();
        assert!(!h_walks_respect_partition(&inst, &split).unwrap());

        // no compatible pair: splitting is harmless
        let incompatible = instance(&[("u", "v", "a"), ("v", "w", "b")], &[("b", "a")], &[]);
        assert!(h_walks_respect_partition(&incompatible, &split).unwrap());
    }
}
