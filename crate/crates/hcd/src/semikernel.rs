//! H-semikernels modulo an arc block, the singleton witness chase, the
//! semikernel digraph, and the kernel pipelines built on them.
//!
//! For a 2-block partition (E1, E2) of the host's arcs, a set `S` is an
//! H-semikernel mod E1 when it is H-independent and every vertex reachable
//! from `S` by an H-walk inside E2 has an H-walk back into `S`.
//!
//! The semikernel digraph has one vertex per non-empty H-semikernel mod E1.
//! Its arc rule (see [`build_semikernel_digraph`]) is one reasonable
//! reading among several; it lives here, alone, where it can be swapped
//! out, and the harness reports whether the acyclicity and sink-is-kernel
//! claims hold under it.

use std::collections::BTreeSet;
use std::fmt;

use crate::cycles::{
    digraph_predicate, directed_parity_bipartition, first_non_h_cycle, underlying_bipartition,
    CycleEnumerationLimit, DigraphPredicate,
};
use crate::digraph::VertexId;
use crate::error::{Error, Result};
use crate::format::serialize_instance;
use crate::instance::{
    vertex_set_string, ArcPartition, ArcSet, ColouredInstance, VertexSet,
};
use crate::kernel::{h_independent_in, is_h_kernel};
use crate::rainbow::{find_rainbow, is_rainbow_free, RainbowKind};
use crate::reach::{first_block_crossing_transition, h_closure, HReach};

/// Note attached to corollary-mode reports: the closure named in the
/// bipartiteness hypothesis is interpreted as the H-closure.
pub const COROLLARY_CLOSURE_NOTE: &str =
    "closure interpretation: C(D) is read as the H-closure of D";

/// Reachability tables for one instance under a 2-block partition.
struct PartitionReach {
    full: HReach,
    block1: HReach,
    block2: HReach,
}

impl PartitionReach {
    fn new(instance: &ColouredInstance, partition: &ArcPartition) -> Result<Self> {
        partition.check_against(instance.host())?;
        let (e1, e2) = partition.pair()?;
        Ok(PartitionReach {
            full: HReach::new(instance),
            block1: HReach::within(instance, e1)?,
            block2: HReach::within(instance, e2)?,
        })
    }

    fn is_semikernel(&self, s: &VertexSet) -> bool {
        if !h_independent_in(&self.full, s) {
            return false;
        }
        self.full
            .vertices()
            .iter()
            .filter(|z| !s.contains(*z))
            .all(|z| {
                let reached_in_e2 = s.iter().any(|t| self.block2.exists(t, z));
                !reached_in_e2 || s.iter().any(|t| self.full.exists(z, t))
            })
    }
}

fn check_subset(instance: &ColouredInstance, s: &VertexSet) -> Result<()> {
    if let Some(v) = s.iter().find(|v| !instance.host().contains_vertex(v)) {
        return Err(Error::invalid(format!("unknown vertex '{v}'")));
    }
    Ok(())
}

/// Is `s` an H-semikernel mod E1 (the partition's first block)? The empty
/// set qualifies vacuously.
pub fn is_h_semikernel_mod(
    instance: &ColouredInstance,
    partition: &ArcPartition,
    s: &VertexSet,
) -> Result<bool> {
    check_subset(instance, s)?;
    let reach = PartitionReach::new(instance, partition)?;
    Ok(reach.is_semikernel(s))
}

/// The witness chase behind the `theorem2` claim. Requires every cycle of D2 = (V, E2) to be
/// an H-cycle; under that hypothesis the chase reaches a vertex whose
/// singleton is an H-semikernel mod E1 before revisiting anything. A
/// revisit is reported as a counterexample carrying the whole chase.
pub fn find_singleton_semikernel(
    instance: &ColouredInstance,
    partition: &ArcPartition,
) -> Result<VertexId> {
    let reach = PartitionReach::new(instance, partition)?;
    let (_, e2) = partition.pair()?;
    let d2 = instance.restrict_arcs(e2)?;
    let limit = CycleEnumerationLimit::default_for(d2.host());
    if let Some(cycle) = first_non_h_cycle(&d2, &limit)? {
        return Err(Error::hypothesis(
            "every cycle of D2 is an H-cycle",
            format!("cycle '{cycle}' in the second block is not an H-cycle"),
        ));
    }
    chase_singleton(instance, partition, &reach)
}

/// The witness chase without the D2 hypothesis check; a revisit is still a
/// counterexample.
pub fn find_singleton_semikernel_unchecked(
    instance: &ColouredInstance,
    partition: &ArcPartition,
) -> Result<VertexId> {
    let reach = PartitionReach::new(instance, partition)?;
    chase_singleton(instance, partition, &reach)
}

fn chase_singleton(
    instance: &ColouredInstance,
    partition: &ArcPartition,
    reach: &PartitionReach,
) -> Result<VertexId> {
    let Some(start) = instance.host().vertices().iter().next().cloned() else {
        return Err(Error::invalid("the host digraph has no vertices"));
    };
    let mut chase = vec![start];
    loop {
        let current = chase.last().expect("chase never empty");
        // witness: a vertex reached from `current` inside E2 with no H-walk
        // back; its absence makes {current} a semikernel
        let witness = reach
            .full
            .vertices()
            .iter()
            .find(|z| {
                *z != current
                    && reach.block2.exists(current, z)
                    && !reach.full.exists(z, current)
            })
            .cloned();
        let Some(next) = witness else {
            let found = chase.pop().expect("chase never empty");
            debug_assert!(reach.is_semikernel(&VertexSet::from([found.clone()])));
            return Ok(found);
        };
        if chase.contains(&next) {
            let trail: Vec<&str> = chase.iter().map(|v| v.as_str()).collect();
            return Err(Error::counterexample(
                "theorem2",
                format!(
                    "witness chase revisited '{next}' after {}",
                    trail.join(" -> ")
                ),
                serialize_instance(instance, Some(partition)),
            ));
        }
        chase.push(next);
    }
}

/// All non-empty H-semikernels mod E1, in lexicographic subset order.
pub fn enumerate_h_semikernels(
    instance: &ColouredInstance,
    partition: &ArcPartition,
    size_guard: usize,
) -> Result<Vec<VertexSet>> {
    let vertices: Vec<&VertexId> = instance.host().vertices().iter().collect();
    let n = vertices.len();
    if n > size_guard {
        return Err(Error::limit(format!(
            "semikernel enumeration over {n} vertices exceeds the size guard {size_guard}"
        )));
    }
    let reach = PartitionReach::new(instance, partition)?;
    let mut found = Vec::new();
    for mask in 1u64..(1u64 << n) {
        let candidate: VertexSet = vertices
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, v)| (*v).clone())
            .collect();
        if reach.is_semikernel(&candidate) {
            found.push(candidate);
        }
    }
    found.sort();
    Ok(found)
}

/// Digraph on the non-empty H-semikernels mod E1.
pub struct SemikernelDigraph {
    vertices: Vec<VertexSet>,
    arcs: BTreeSet<(usize, usize)>,
}

impl SemikernelDigraph {
    pub fn vertices(&self) -> &[VertexSet] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn arc_indices(&self) -> &BTreeSet<(usize, usize)> {
        &self.arcs
    }

    pub fn arcs(&self) -> impl Iterator<Item = (&VertexSet, &VertexSet)> {
        self.arcs
            .iter()
            .map(|&(i, j)| (&self.vertices[i], &self.vertices[j]))
    }

    /// Indices of out-degree-zero vertices, ascending; since vertices are
    /// sorted, the first sink is the lexicographically smallest.
    pub fn sinks(&self) -> Vec<usize> {
        (0..self.vertices.len())
            .filter(|&i| !self.arcs.iter().any(|&(s, _)| s == i))
            .collect()
    }

    pub fn is_acyclic(&self) -> bool {
        self.find_cycle().is_none()
    }

    /// A directed cycle as a list of vertex indices, if one exists.
    pub fn find_cycle(&self) -> Option<Vec<usize>> {
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            New,
            Active,
            Done,
        }
        fn dfs(
            v: usize,
            arcs: &BTreeSet<(usize, usize)>,
            n: usize,
            marks: &mut Vec<Mark>,
            stack: &mut Vec<usize>,
        ) -> Option<Vec<usize>> {
            marks[v] = Mark::Active;
            stack.push(v);
            for w in 0..n {
                if !arcs.contains(&(v, w)) {
                    continue;
                }
                match marks[w] {
                    Mark::Active => {
                        let from = stack.iter().position(|&x| x == w).expect("active on stack");
                        return Some(stack[from..].to_vec());
                    }
                    Mark::New => {
                        if let Some(cycle) = dfs(w, arcs, n, marks, stack) {
                            return Some(cycle);
                        }
                    }
                    Mark::Done => {}
                }
            }
            stack.pop();
            marks[v] = Mark::Done;
            None
        }

        let n = self.vertices.len();
        let mut marks = vec![Mark::New; n];
        let mut stack = Vec::new();
        for v in 0..n {
            if marks[v] == Mark::New {
                if let Some(cycle) = dfs(v, &self.arcs, n, &mut marks, &mut stack) {
                    return Some(cycle);
                }
                stack.clear();
            }
        }
        None
    }
}

impl fmt::Display for SemikernelDigraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "semikernel digraph: {} vertices, {} arcs",
            self.vertex_count(),
            self.arc_count()
        )?;
        for (i, s) in self.vertices.iter().enumerate() {
            writeln!(f, "  S{i} = {}", vertex_set_string(s))?;
        }
        for &(i, j) in &self.arcs {
            writeln!(f, "  S{i} -> S{j}")?;
        }
        Ok(())
    }
}

/// Builds the semikernel digraph under the reconstructed arc rule:
///
/// there is an arc from `S` to `S'` (S != S') iff for every `v` in `S \ S'`
/// some witness `w` in `S'` has an H-walk `v -> w` inside E1 and no H-walk
/// from `w` to any member of `S`. In particular `S` proper-subset-of `S'`
/// gives an arc vacuously.
pub fn build_semikernel_digraph(
    instance: &ColouredInstance,
    partition: &ArcPartition,
    size_guard: usize,
) -> Result<SemikernelDigraph> {
    let semikernels = enumerate_h_semikernels(instance, partition, size_guard)?;
    let reach = PartitionReach::new(instance, partition)?;
    let mut arcs = BTreeSet::new();
    for (i, s) in semikernels.iter().enumerate() {
        for (j, s_next) in semikernels.iter().enumerate() {
            if i == j {
                continue;
            }
            let every_leftover_has_witness = s.difference(s_next).all(|v| {
                s_next.iter().any(|w| {
                    reach.block1.exists(v, w) && s.iter().all(|t| !reach.full.exists(w, t))
                })
            });
            if every_leftover_has_witness {
                arcs.insert((i, j));
            }
        }
    }
    Ok(SemikernelDigraph {
        vertices: semikernels,
        arcs,
    })
}

/// Verifies the three preconditions of the partitioned-kernel pipeline:
/// every cycle of each block's spanning subdigraph is an H-cycle, the
/// instance is {C3, P3}-rainbow free, and every H-walk stays inside one
/// block. All failures are listed.
pub fn check_theorem4_hypotheses(
    instance: &ColouredInstance,
    partition: &ArcPartition,
) -> Result<()> {
    partition.check_against(instance.host())?;
    let (e1, e2) = partition.pair()?;
    let mut failures = Vec::new();
    for (label, block) in [("E1", e1), ("E2", e2)] {
        let restricted = instance.restrict_arcs(block)?;
        let limit = CycleEnumerationLimit::default_for(restricted.host());
        if let Some(cycle) = first_non_h_cycle(&restricted, &limit)? {
            failures.push(format!("cycle '{cycle}' inside {label} is not an H-cycle"));
        }
    }
    for kind in [RainbowKind::C3, RainbowKind::P3] {
        if let Some(witness) = find_rainbow(instance, kind) {
            failures.push(witness.to_string());
        }
    }
    if let Some((e, f)) = first_block_crossing_transition(instance, partition)? {
        failures.push(format!(
            "H-walks cross blocks: arcs '{e}' and '{f}' are consecutive on an H-walk but lie in different blocks"
        ));
    }
    if failures.is_empty() {
        Ok(())
    } else {
        Err(Error::hypothesis(
            "partitioned-kernel preconditions",
            failures.join("; "),
        ))
    }
}

/// The partitioned-kernel pipeline behind the `theorem4` claim: verify the hypotheses, build the semikernel
/// digraph, take its lexicographically smallest out-degree-zero vertex and
/// assert that it is an H-kernel. Failures of the guaranteed steps are
/// counterexamples carrying the serialized instance.
pub fn h_kernel_via_theorem4(
    instance: &ColouredInstance,
    partition: &ArcPartition,
    size_guard: usize,
) -> Result<VertexSet> {
    check_theorem4_hypotheses(instance, partition)?;
    h_kernel_via_theorem4_unchecked(instance, partition, size_guard)
}

/// As [`h_kernel_via_theorem4`] without the hypothesis checks.
pub fn h_kernel_via_theorem4_unchecked(
    instance: &ColouredInstance,
    partition: &ArcPartition,
    size_guard: usize,
) -> Result<VertexSet> {
    if instance.host().vertex_count() == 0 {
        return Err(Error::invalid("the host digraph has no vertices"));
    }
    let digraph = build_semikernel_digraph(instance, partition, size_guard)?;
    if digraph.vertex_count() == 0 {
        return Err(Error::counterexample(
            "theorem2",
            "no non-empty H-semikernel mod E1 exists",
            serialize_instance(instance, Some(partition)),
        ));
    }
    let sinks = digraph.sinks();
    let Some(&sink) = sinks.first() else {
        let cycle = digraph
            .find_cycle()
            .expect("a finite digraph without sinks has a cycle");
        let description: Vec<String> = cycle
            .iter()
            .map(|&i| vertex_set_string(&digraph.vertices()[i]))
            .collect();
        return Err(Error::counterexample(
            "theorem3",
            format!("semikernel digraph cycle: {}", description.join(" -> ")),
            serialize_instance(instance, Some(partition)),
        ));
    };
    let kernel = digraph.vertices()[sink].clone();
    if !is_h_kernel(instance, &kernel)? {
        return Err(Error::counterexample(
            "theorem4",
            format!(
                "out-degree-zero semikernel {} is not an H-kernel",
                vertex_set_string(&kernel)
            ),
            serialize_instance(instance, Some(partition)),
        ));
    }
    Ok(kernel)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CorollaryMode {
    /// Requires the closure's underlying graph to be bipartite.
    Bipartite,
    /// Requires the closure to be strongly connected without odd directed
    /// cycles; bipartiteness is then derived from the parity classes.
    StrongNoOdd,
}

impl fmt::Display for CorollaryMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CorollaryMode::Bipartite => f.write_str("bipartite"),
            CorollaryMode::StrongNoOdd => f.write_str("strong-no-odd"),
        }
    }
}

/// Derives the 2-block partition induced by the closure's bipartition:
/// E1 holds the arcs of the host from the first part to the second, E2 the
/// arcs back. Every host arc is a closure arc, hence crosses the parts.
pub fn derive_partition_corollary(
    instance: &ColouredInstance,
    blocks: &ArcPartition,
    mode: CorollaryMode,
) -> Result<ArcPartition> {
    blocks.check_against(instance.host())?;
    let closure = h_closure(instance);
    let (part_a, part_b) = match mode {
        CorollaryMode::Bipartite => underlying_bipartition(closure.digraph()).ok_or_else(|| {
            Error::hypothesis(
                "the closure's underlying graph is bipartite",
                "it contains an odd undirected cycle",
            )
        })?,
        CorollaryMode::StrongNoOdd => {
            if !digraph_predicate(closure.digraph(), DigraphPredicate::StronglyConnected) {
                return Err(Error::hypothesis(
                    "the closure is strongly connected",
                    "it has more than one strongly connected component",
                ));
            }
            if !digraph_predicate(closure.digraph(), DigraphPredicate::OddDirectedCycleFree) {
                return Err(Error::hypothesis(
                    "the closure has no odd directed cycle",
                    "an odd directed cycle exists",
                ));
            }
            directed_parity_bipartition(closure.digraph())
                .expect("strongly connected without odd directed cycles has consistent parity")
        }
    };
    let mut e1 = ArcSet::new();
    let mut e2 = ArcSet::new();
    for arc in instance.host().arcs() {
        if part_a.contains(&arc.tail) && part_b.contains(&arc.head) {
            e1.insert(arc.clone());
        } else if part_b.contains(&arc.tail) && part_a.contains(&arc.head) {
            e2.insert(arc.clone());
        } else {
            unreachable!("host arcs are closure arcs and closure arcs cross the parts");
        }
    }
    ArcPartition::two(e1, e2)
}

/// Verifies the corollary hypotheses that concern the given blocks: every
/// cycle inside each block is an H-cycle, the instance is rainbow-free,
/// and every H-walk stays inside one block. The closure-shape hypotheses
/// are checked by [`derive_partition_corollary`].
pub fn check_corollary_block_hypotheses(
    instance: &ColouredInstance,
    blocks: &ArcPartition,
) -> Result<()> {
    blocks.check_against(instance.host())?;
    let mut failures = Vec::new();
    for (i, block) in blocks.blocks().iter().enumerate() {
        let restricted = instance.restrict_arcs(block)?;
        let limit = CycleEnumerationLimit::default_for(restricted.host());
        if let Some(cycle) = first_non_h_cycle(&restricted, &limit)? {
            failures.push(format!(
                "cycle '{cycle}' inside block {} is not an H-cycle",
                i + 1
            ));
        }
    }
    if !is_rainbow_free(instance) {
        failures.push("the instance is not {C3, P3}-rainbow free".to_owned());
    }
    if let Some((e, f)) = first_block_crossing_transition(instance, blocks)? {
        failures.push(format!(
            "H-walks cross blocks: arcs '{e}' and '{f}' are consecutive on an H-walk but lie in different blocks"
        ));
    }
    if failures.is_empty() {
        Ok(())
    } else {
        Err(Error::hypothesis(
            "corollary block preconditions",
            failures.join("; "),
        ))
    }
}

/// Full corollary pipeline: check the block hypotheses, derive the 2-block
/// partition from the closure, and run the partitioned pipeline on it. The
/// inner pipeline re-verifies its own preconditions on the derived
/// partition.
pub fn h_kernel_via_corollary(
    instance: &ColouredInstance,
    blocks: &ArcPartition,
    mode: CorollaryMode,
    size_guard: usize,
) -> Result<VertexSet> {
    check_corollary_block_hypotheses(instance, blocks)?;
    let derived = derive_partition_corollary(instance, blocks, mode)?;
    h_kernel_via_theorem4(instance, &derived, size_guard)
}
