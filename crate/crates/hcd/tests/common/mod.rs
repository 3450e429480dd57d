//! Shared brute-force oracles for the integration suites.
//!
//! Everything here recomputes answers from the instance definition alone,
//! without touching the transition-digraph machinery under test: walk
//! existence by bounded-length enumeration, kernels by subset scans over
//! oracle reachability, monochromatic reachability by per-colour DFS.

#![allow(dead_code)]

use std::collections::BTreeSet;

use hcd::digraph::{Arc, ColourId, VertexId};
use hcd::harness::{generate_instance, GeneratorParams, Strategy};
use hcd::instance::{ArcSet, ColouredInstance, VertexSet};

/// All ordered pairs (u, v) joined by an H-walk of length in 1..=|arcs|,
/// computed by dynamic programming over exact walk lengths: after l steps,
/// `current[e]` holds the start vertices of the H-walks of length l whose
/// last arc is e. The length bound is sound because a minimal H-walk never
/// repeats an arc.
pub fn oracle_reachable_pairs(
    instance: &ColouredInstance,
    within: Option<&ArcSet>,
) -> BTreeSet<(VertexId, VertexId)> {
    let arcs: Vec<&Arc> = match within {
        Some(subset) => subset.iter().collect(),
        None => instance.host().arcs().iter().collect(),
    };
    let colour = |a: &Arc| instance.colouring().colour(a).expect("total colouring");
    let m = arcs.len();
    let mut result = BTreeSet::new();
    if m == 0 {
        return result;
    }
    let mut current: Vec<BTreeSet<VertexId>> = arcs
        .iter()
        .map(|a| BTreeSet::from([a.tail.clone()]))
        .collect();
    for length in 1..=m {
        for (i, arc) in arcs.iter().enumerate() {
            for start in &current[i] {
                result.insert((start.clone(), arc.head.clone()));
            }
        }
        if length == m {
            break;
        }
        let mut next: Vec<BTreeSet<VertexId>> = vec![BTreeSet::new(); m];
        for (i, e) in arcs.iter().enumerate() {
            if current[i].is_empty() {
                continue;
            }
            for (j, f) in arcs.iter().enumerate() {
                if e.head == f.tail && instance.pattern().has_arc(colour(e), colour(f)) {
                    let starts: Vec<VertexId> = current[i].iter().cloned().collect();
                    next[j].extend(starts);
                }
            }
        }
        current = next;
    }
    result
}

/// Minimum H-walk length per reachable pair, from the same DP.
pub fn oracle_shortest_lengths(
    instance: &ColouredInstance,
    within: Option<&ArcSet>,
) -> std::collections::BTreeMap<(VertexId, VertexId), usize> {
    let arcs: Vec<&Arc> = match within {
        Some(subset) => subset.iter().collect(),
        None => instance.host().arcs().iter().collect(),
    };
    let colour = |a: &Arc| instance.colouring().colour(a).expect("total colouring");
    let m = arcs.len();
    let mut result = std::collections::BTreeMap::new();
    if m == 0 {
        return result;
    }
    let mut current: Vec<BTreeSet<VertexId>> = arcs
        .iter()
        .map(|a| BTreeSet::from([a.tail.clone()]))
        .collect();
    for length in 1..=m {
        for (i, arc) in arcs.iter().enumerate() {
            for start in &current[i] {
                result
                    .entry((start.clone(), arc.head.clone()))
                    .or_insert(length);
            }
        }
        if length == m {
            break;
        }
        let mut next: Vec<BTreeSet<VertexId>> = vec![BTreeSet::new(); m];
        for (i, e) in arcs.iter().enumerate() {
            if current[i].is_empty() {
                continue;
            }
            for (j, f) in arcs.iter().enumerate() {
                if e.head == f.tail && instance.pattern().has_arc(colour(e), colour(f)) {
                    let starts: Vec<VertexId> = current[i].iter().cloned().collect();
                    next[j].extend(starts);
                }
            }
        }
        current = next;
    }
    result
}

/// Recursive enumeration of H-walks up to a length bound: the slowest,
/// most literal oracle. Walks are grown arc by arc; a prefix that is no
/// longer an H-walk is dropped along with all its extensions, which leaves
/// the recorded endpoint set unchanged.
pub struct WalkEnumerator {
    vertices: Vec<VertexId>,
    adjacency: Vec<Vec<(usize, usize)>>,
    pattern_arc: Vec<Vec<bool>>,
}

impl WalkEnumerator {
    pub fn new(instance: &ColouredInstance) -> Self {
        let vertices: Vec<VertexId> = instance.host().vertices().iter().cloned().collect();
        let colours: Vec<&ColourId> = instance.pattern().vertices().iter().collect();
        let v_index = |v: &VertexId| vertices.binary_search(v).expect("known vertex");
        let c_index = |c: &ColourId| colours.binary_search(&c).expect("known colour");
        let mut pattern_arc = vec![vec![false; colours.len()]; colours.len()];
        for (a, b) in instance.pattern().arcs() {
            pattern_arc[c_index(a)][c_index(b)] = true;
        }
        let mut adjacency = vec![Vec::new(); vertices.len()];
        for arc in instance.host().arcs() {
            let colour = instance.colouring().colour(arc).expect("total colouring");
            adjacency[v_index(&arc.tail)].push((v_index(&arc.head), c_index(colour)));
        }
        WalkEnumerator {
            vertices,
            adjacency,
            pattern_arc,
        }
    }

    fn extend(&self, current: usize, last: Option<usize>, remaining: usize, out: &mut Vec<bool>) {
        if remaining == 0 {
            return;
        }
        for &(next, colour) in &self.adjacency[current] {
            let compatible = match last {
                None => true,
                Some(last) => self.pattern_arc[last][colour],
            };
            if !compatible {
                continue;
            }
            out[next] = true;
            self.extend(next, Some(colour), remaining - 1, out);
        }
    }

    /// Endpoints of H-walks of length 1..=max_length from `start`.
    pub fn reachable_from(&self, start: &VertexId, max_length: usize) -> BTreeSet<VertexId> {
        let index = self.vertices.binary_search(start).expect("known vertex");
        let mut out = vec![false; self.vertices.len()];
        self.extend(index, None, max_length, &mut out);
        out.iter()
            .enumerate()
            .filter(|(_, reached)| **reached)
            .map(|(i, _)| self.vertices[i].clone())
            .collect()
    }
}

/// Monochromatic reachability: is there a path from u to v inside a single
/// colour class? Plain DFS per colour, no walk machinery involved.
pub fn mono_reachable(instance: &ColouredInstance, from: &VertexId, to: &VertexId) -> bool {
    let colours: BTreeSet<&ColourId> = instance.colouring().assignment().values().collect();
    for colour in colours {
        let arcs: Vec<&Arc> = instance
            .colouring()
            .assignment()
            .iter()
            .filter(|(_, c)| *c == colour)
            .map(|(a, _)| a)
            .collect();
        let mut seen: BTreeSet<&VertexId> = BTreeSet::new();
        let mut stack = vec![from];
        while let Some(v) = stack.pop() {
            for arc in &arcs {
                if arc.tail == *v && seen.insert(&arc.head) {
                    if arc.head == *to {
                        return true;
                    }
                    stack.push(&arc.head);
                }
            }
        }
    }
    false
}

/// Kernels by monochromatic paths, brute force over every subset using
/// [`mono_reachable`] only.
pub fn oracle_mono_kernels(instance: &ColouredInstance) -> Vec<VertexSet> {
    let vertices: Vec<&VertexId> = instance.host().vertices().iter().collect();
    let n = vertices.len();
    assert!(n <= 16, "oracle subset scan kept deliberately small");
    let mut kernels = Vec::new();
    for mask in 0u32..(1u32 << n) {
        let candidate: VertexSet = vertices
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, v)| (*v).clone())
            .collect();
        let independent = candidate.iter().all(|u| {
            candidate
                .iter()
                .all(|v| u == v || !mono_reachable(instance, u, v))
        });
        let absorbent = vertices
            .iter()
            .filter(|v| !candidate.contains(**v))
            .all(|v| candidate.iter().any(|t| mono_reachable(instance, v, t)));
        if independent && absorbent {
            kernels.push(candidate);
        }
    }
    kernels.sort();
    kernels
}

/// Deterministic mixed-parameter instance for tests: n in 1..=max_vertices,
/// 1..=max_colours colours, uniform strategy.
pub fn random_instance(seed: u64, max_vertices: usize, max_colours: usize) -> ColouredInstance {
    random_generated(seed, max_vertices, max_colours, None).instance
}

pub fn random_generated(
    seed: u64,
    max_vertices: usize,
    max_colours: usize,
    partition_blocks: Option<usize>,
) -> hcd::harness::Generated {
    let params = GeneratorParams {
        n_vertices: 1 + (seed % max_vertices as u64) as usize,
        n_colours: 1 + (seed / 7 % max_colours as u64) as usize,
        arc_probability: 0.2 + (seed % 5) as f64 * 0.15,
        pattern_density: 0.3 + (seed % 4) as f64 * 0.2,
        strategy: Strategy::Uniform,
        seed,
        partition_blocks,
    };
    generate_instance(&params).expect("uniform generation cannot fail")
}

/// All loopless digraphs on the given labelled vertices, as arc sets in a
/// fixed order (bitmask over the ordered non-loop pairs).
pub fn all_loopless_digraphs<'a>(names: &'a [&'a str]) -> impl Iterator<Item = Vec<Arc>> + 'a {
    let pairs: Vec<Arc> = names
        .iter()
        .flat_map(|u| {
            names
                .iter()
                .filter(move |v| *v != u)
                .map(move |v| Arc::new(*u, *v))
        })
        .collect();
    let count = pairs.len();
    (0u32..(1u32 << count)).map(move |mask| {
        pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, a)| a.clone())
            .collect()
    })
}
