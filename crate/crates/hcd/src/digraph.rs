//! Host and pattern digraphs with opaque string identifiers.
//!
//! Identifiers carry a canonical total order (lexicographic) that every
//! deterministic tie-break downstream relies on.

use std::collections::BTreeSet;
use std::fmt;

/// Vertex of the host digraph.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(String);

impl VertexId {
    pub fn new(id: impl Into<String>) -> Self {
        VertexId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl From<&str> for VertexId {
    fn from(s: &str) -> Self {
        VertexId(s.to_owned())
    }
}

/// Colour identifier, i.e. a vertex of the pattern digraph.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ColourId(String);

impl ColourId {
    pub fn new(id: impl Into<String>) -> Self {
        ColourId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ColourId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for ColourId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl From<&str> for ColourId {
    fn from(s: &str) -> Self {
        ColourId(s.to_owned())
    }
}

/// Directed arc of the host digraph. Ordered by (tail, head).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Arc {
    pub tail: VertexId,
    pub head: VertexId,
}

impl Arc {
    pub fn new(tail: impl Into<VertexId>, head: impl Into<VertexId>) -> Self {
        Arc {
            tail: tail.into(),
            head: head.into(),
        }
    }

    /// The arc in the opposite direction.
    pub fn reversed(&self) -> Arc {
        Arc {
            tail: self.head.clone(),
            head: self.tail.clone(),
        }
    }

    pub fn is_loop(&self) -> bool {
        self.tail == self.head
    }
}

impl fmt::Display for Arc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.tail, self.head)
    }
}

impl fmt::Debug for Arc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.tail, self.head)
    }
}

impl From<(&str, &str)> for Arc {
    fn from((tail, head): (&str, &str)) -> Self {
        Arc::new(tail, head)
    }
}

/// The digraph being coloured. Construction performs no validation;
/// well-formedness (looplessness in particular) is checked by
/// [`crate::instance::ColouredInstance::validate`].
#[derive(Clone, PartialEq, Eq)]
pub struct HostDigraph {
    vertices: BTreeSet<VertexId>,
    arcs: BTreeSet<Arc>,
}

impl HostDigraph {
    pub fn new(
        vertices: impl IntoIterator<Item = VertexId>,
        arcs: impl IntoIterator<Item = Arc>,
    ) -> Self {
        HostDigraph {
            vertices: vertices.into_iter().collect(),
            arcs: arcs.into_iter().collect(),
        }
    }

    /// Convenience constructor from string pairs; vertices are the arc
    /// endpoints plus any extra isolated vertices.
    pub fn from_arcs<'a>(
        extra_vertices: impl IntoIterator<Item = &'a str>,
        arcs: impl IntoIterator<Item = (&'a str, &'a str)>,
    ) -> Self {
        let arcs: BTreeSet<Arc> = arcs.into_iter().map(Arc::from).collect();
        let mut vertices: BTreeSet<VertexId> =
            extra_vertices.into_iter().map(VertexId::from).collect();
        for a in &arcs {
            vertices.insert(a.tail.clone());
            vertices.insert(a.head.clone());
        }
        HostDigraph { vertices, arcs }
    }

    pub fn vertices(&self) -> &BTreeSet<VertexId> {
        &self.vertices
    }

    pub fn arcs(&self) -> &BTreeSet<Arc> {
        &self.arcs
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn contains_vertex(&self, v: &VertexId) -> bool {
        self.vertices.contains(v)
    }

    pub fn contains_arc(&self, a: &Arc) -> bool {
        self.arcs.contains(a)
    }

    pub fn has_arc(&self, tail: &VertexId, head: &VertexId) -> bool {
        self.arcs.contains(&Arc {
            tail: tail.clone(),
            head: head.clone(),
        })
    }

    pub fn out_neighbours<'a>(&'a self, v: &'a VertexId) -> impl Iterator<Item = &'a VertexId> {
        self.arcs
            .iter()
            .filter(move |a| a.tail == *v)
            .map(|a| &a.head)
    }

    pub fn in_neighbours<'a>(&'a self, v: &'a VertexId) -> impl Iterator<Item = &'a VertexId> {
        self.arcs
            .iter()
            .filter(move |a| a.head == *v)
            .map(|a| &a.tail)
    }

    /// Arcs whose reverse is also present.
    pub fn symmetric_arcs(&self) -> BTreeSet<Arc> {
        self.arcs
            .iter()
            .filter(|a| self.arcs.contains(&a.reversed()))
            .cloned()
            .collect()
    }

    /// Arcs whose reverse is absent.
    pub fn asymmetric_arcs(&self) -> BTreeSet<Arc> {
        self.arcs
            .iter()
            .filter(|a| !self.arcs.contains(&a.reversed()))
            .cloned()
            .collect()
    }
}

impl fmt::Debug for HostDigraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HostDigraph")
            .field("vertices", &self.vertices)
            .field("arcs", &self.arcs)
            .finish()
    }
}

/// The pattern digraph whose vertices serve as arc colours. Loops are
/// permitted here, unlike in the host.
#[derive(Clone, PartialEq, Eq)]
pub struct PatternDigraph {
    vertices: BTreeSet<ColourId>,
    arcs: BTreeSet<(ColourId, ColourId)>,
}

impl PatternDigraph {
    pub fn new(
        vertices: impl IntoIterator<Item = ColourId>,
        arcs: impl IntoIterator<Item = (ColourId, ColourId)>,
    ) -> Self {
        PatternDigraph {
            vertices: vertices.into_iter().collect(),
            arcs: arcs.into_iter().collect(),
        }
    }

    pub fn from_arcs<'a>(
        extra_vertices: impl IntoIterator<Item = &'a str>,
        arcs: impl IntoIterator<Item = (&'a str, &'a str)>,
    ) -> Self {
        let arcs: BTreeSet<(ColourId, ColourId)> = arcs
            .into_iter()
            .map(|(a, b)| (ColourId::from(a), ColourId::from(b)))
            .collect();
        let mut vertices: BTreeSet<ColourId> =
            extra_vertices.into_iter().map(ColourId::from).collect();
        for (a, b) in &arcs {
            vertices.insert(a.clone());
            vertices.insert(b.clone());
        }
        PatternDigraph { vertices, arcs }
    }

    /// Pattern with every ordered pair present, loops included. Every walk
    /// in a host coloured over this pattern is an H-walk.
    pub fn complete_with_loops(colours: impl IntoIterator<Item = ColourId>) -> Self {
        let vertices: BTreeSet<ColourId> = colours.into_iter().collect();
        let arcs = vertices
            .iter()
            .flat_map(|a| vertices.iter().map(move |b| (a.clone(), b.clone())))
            .collect();
        PatternDigraph { vertices, arcs }
    }

    /// Pattern with a loop at every colour and nothing else; H-walks over
    /// this pattern are exactly the monochromatic walks.
    pub fn loops_only(colours: impl IntoIterator<Item = ColourId>) -> Self {
        let vertices: BTreeSet<ColourId> = colours.into_iter().collect();
        let arcs = vertices.iter().map(|c| (c.clone(), c.clone())).collect();
        PatternDigraph { vertices, arcs }
    }

    pub fn vertices(&self) -> &BTreeSet<ColourId> {
        &self.vertices
    }

    pub fn arcs(&self) -> &BTreeSet<(ColourId, ColourId)> {
        &self.arcs
    }

    pub fn contains_colour(&self, c: &ColourId) -> bool {
        self.vertices.contains(c)
    }

    pub fn has_arc(&self, from: &ColourId, to: &ColourId) -> bool {
        self.arcs.contains(&(from.clone(), to.clone()))
    }
}

impl fmt::Debug for PatternDigraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PatternDigraph")
            .field("vertices", &self.vertices)
            .field("arcs", &self.arcs)
            .finish()
    }
}
