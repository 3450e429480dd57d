//! Rainbow C3 / P3 detection: directed triangles and directed 3-arc paths
//! whose arcs carry three pairwise-distinct colours.

use std::fmt;

use crate::digraph::{ColourId, VertexId};
use crate::instance::{ColouredInstance, Walk};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RainbowKind {
    /// Directed cycle on 3 distinct vertices.
    C3,
    /// Directed path of length 3: 3 arcs, 4 distinct vertices.
    P3,
}

impl fmt::Display for RainbowKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RainbowKind::C3 => f.write_str("C3"),
            RainbowKind::P3 => f.write_str("P3"),
        }
    }
}

/// A rainbow subdigraph: the walk tracing it and its three distinct
/// colours.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RainbowWitness {
    pub kind: RainbowKind,
    pub walk: Walk,
    pub colours: [ColourId; 3],
}

impl fmt::Display for RainbowWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "rainbow {}: {} coloured {}, {}, {}",
            self.kind, self.walk, self.colours[0], self.colours[1], self.colours[2]
        )
    }
}

fn witness(instance: &ColouredInstance, kind: RainbowKind, vertices: &[&VertexId]) -> Option<RainbowWitness> {
    let walk = Walk::new(vertices.iter().map(|v| (*v).clone()).collect()).expect("non-empty");
    let mut colours = Vec::with_capacity(3);
    for arc in walk.arcs() {
        if !instance.host().contains_arc(&arc) {
            return None;
        }
        colours.push(instance.colouring().colour(&arc)?.clone());
    }
    if colours.len() == 3
        && colours[0] != colours[1]
        && colours[0] != colours[2]
        && colours[1] != colours[2]
    {
        Some(RainbowWitness {
            kind,
            walk,
            colours: [colours[0].clone(), colours[1].clone(), colours[2].clone()],
        })
    } else {
        None
    }
}

/// Exhaustive search over ordered vertex triples (C3) or quadruples (P3);
/// returns the witness with the smallest vertex tuple, if any.
pub fn find_rainbow(instance: &ColouredInstance, kind: RainbowKind) -> Option<RainbowWitness> {
    let vertices: Vec<&VertexId> = instance.host().vertices().iter().collect();
    match kind {
        RainbowKind::C3 => {
            for &u in &vertices {
                for &v in &vertices {
                    if v == u {
                        continue;
                    }
                    for &w in &vertices {
                        if w == u || w == v {
                            continue;
                        }
                        if let Some(found) = witness(instance, kind, &[u, v, w, u]) {
                            return Some(found);
                        }
                    }
                }
            }
            None
        }
        RainbowKind::P3 => {
            for &u in &vertices {
                for &v in &vertices {
                    if v == u {
                        continue;
                    }
                    for &w in &vertices {
                        if w == u || w == v {
                            continue;
                        }
                        for &x in &vertices {
                            if x == u || x == v || x == w {
                                continue;
                            }
                            if let Some(found) = witness(instance, kind, &[u, v, w, x]) {
                                return Some(found);
                            }
                        }
                    }
                }
            }
            None
        }
    }
}

/// No rainbow C3 and no rainbow P3.
pub fn is_rainbow_free(instance: &ColouredInstance) -> bool {
    find_rainbow(instance, RainbowKind::C3).is_none()
        && find_rainbow(instance, RainbowKind::P3).is_none()
}
