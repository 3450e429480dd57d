//! Coloured instances: a host digraph, a pattern digraph and a total arc
//! colouring, plus walks and arc partitions over them.
//!
//! Everything here is immutable after construction; operations return new
//! values. [`ColouredInstance::new`] validates, while `from_parts_unchecked`
//! admits ill-formed data so that [`ColouredInstance::validate`] has
//! something to report on.

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::fmt;

use crate::digraph::{Arc, ColourId, HostDigraph, PatternDigraph, VertexId};
use crate::error::{Error, Result};

pub type VertexSet = BTreeSet<VertexId>;
pub type ArcSet = BTreeSet<Arc>;

/// Total map from host arcs to pattern vertices.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Colouring {
    assignment: BTreeMap<Arc, ColourId>,
}

impl Colouring {
    pub fn new(assignment: impl IntoIterator<Item = (Arc, ColourId)>) -> Self {
        Colouring {
            assignment: assignment.into_iter().collect(),
        }
    }

    pub fn colour(&self, arc: &Arc) -> Option<&ColourId> {
        self.assignment.get(arc)
    }

    pub fn assignment(&self) -> &BTreeMap<Arc, ColourId> {
        &self.assignment
    }

    pub fn colours_used(&self) -> BTreeSet<ColourId> {
        self.assignment.values().cloned().collect()
    }
}

/// One invariant violation found by validation. Display strings are stable
/// and name the violated rule.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Violation {
    HostLoop(VertexId),
    DanglingHostEndpoint { arc: Arc, vertex: VertexId },
    DanglingPatternEndpoint { arc: (ColourId, ColourId), colour: ColourId },
    MissingColour(Arc),
    UnknownColour { arc: Arc, colour: ColourId },
    ColouringOnNonArc(Arc),
    BadIdentifier { kind: &'static str, id: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::HostLoop(v) => write!(f, "loop at vertex '{v}' in host digraph"),
            Violation::DanglingHostEndpoint { arc, vertex } => {
                write!(f, "arc '{arc}' references unknown vertex '{vertex}'")
            }
            Violation::DanglingPatternEndpoint { arc, colour } => write!(
                f,
                "pattern arc '{} -> {}' references unknown colour '{colour}'",
                arc.0, arc.1
            ),
            Violation::MissingColour(arc) => write!(f, "missing colour on arc '{arc}'"),
            Violation::UnknownColour { arc, colour } => {
                write!(f, "unknown colour '{colour}' on arc '{arc}'")
            }
            Violation::ColouringOnNonArc(arc) => {
                write!(f, "colouring assigns a colour to non-arc '{arc}'")
            }
            Violation::BadIdentifier { kind, id } => {
                write!(f, "{kind} identifier {id:?} is empty or contains whitespace or '#'")
            }
        }
    }
}

/// Outcome of validating the parts of a coloured instance. Empty iff the
/// instance is well-formed.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct ValidationReport {
    violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violations(&self) -> &[Violation] {
        &self.violations
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return f.write_str("ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

fn identifier_ok(id: &str) -> bool {
    !id.is_empty() && !id.contains(char::is_whitespace) && !id.contains('#')
}

/// `{u, v, w}` rendering used in reports and error messages.
pub fn vertex_set_string(s: &VertexSet) -> String {
    let members: Vec<&str> = s.iter().map(|v| v.as_str()).collect();
    format!("{{{}}}", members.join(", "))
}

/// An H-coloured digraph: host, pattern and total colouring.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ColouredInstance {
    host: HostDigraph,
    pattern: PatternDigraph,
    colouring: Colouring,
}

impl ColouredInstance {
    /// Builds an instance, rejecting ill-formed input with the full list of
    /// violations.
    pub fn new(
        host: HostDigraph,
        pattern: PatternDigraph,
        colouring: Colouring,
    ) -> std::result::Result<Self, ValidationReport> {
        let instance = Self::from_parts_unchecked(host, pattern, colouring);
        let report = instance.validate();
        if report.is_empty() {
            Ok(instance)
        } else {
            Err(report)
        }
    }

    /// Assembles the parts without validation. Useful for building
    /// deliberately broken instances to feed [`ColouredInstance::validate`].
    pub fn from_parts_unchecked(
        host: HostDigraph,
        pattern: PatternDigraph,
        colouring: Colouring,
    ) -> Self {
        ColouredInstance {
            host,
            pattern,
            colouring,
        }
    }

    pub fn host(&self) -> &HostDigraph {
        &self.host
    }

    pub fn pattern(&self) -> &PatternDigraph {
        &self.pattern
    }

    pub fn colouring(&self) -> &Colouring {
        &self.colouring
    }

    /// Colour of a host arc; invalid-argument if the arc is absent or
    /// uncoloured.
    pub fn arc_colour(&self, arc: &Arc) -> Result<&ColourId> {
        self.colouring
            .colour(arc)
            .ok_or_else(|| Error::invalid(format!("no colour assigned to arc '{arc}'")))
    }

    /// Checks every invariant and reports all violations found.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        for v in self.host.vertices() {
            if !identifier_ok(v.as_str()) {
                violations.push(Violation::BadIdentifier {
                    kind: "vertex",
                    id: v.as_str().to_owned(),
                });
            }
        }
        for c in self.pattern.vertices() {
            if !identifier_ok(c.as_str()) {
                violations.push(Violation::BadIdentifier {
                    kind: "colour",
                    id: c.as_str().to_owned(),
                });
            }
        }
        for (a, b) in self.pattern.arcs() {
            for c in [a, b] {
                if !self.pattern.contains_colour(c) {
                    violations.push(Violation::DanglingPatternEndpoint {
                        arc: (a.clone(), b.clone()),
                        colour: c.clone(),
                    });
                }
            }
        }
        for arc in self.host.arcs() {
            if arc.is_loop() {
                violations.push(Violation::HostLoop(arc.tail.clone()));
            }
            for endpoint in [&arc.tail, &arc.head] {
                if !self.host.contains_vertex(endpoint) {
                    violations.push(Violation::DanglingHostEndpoint {
                        arc: arc.clone(),
                        vertex: endpoint.clone(),
                    });
                }
            }
            match self.colouring.colour(arc) {
                None => violations.push(Violation::MissingColour(arc.clone())),
                Some(c) if !self.pattern.contains_colour(c) => {
                    violations.push(Violation::UnknownColour {
                        arc: arc.clone(),
                        colour: c.clone(),
                    });
                }
                Some(_) => {}
            }
        }
        for arc in self.colouring.assignment().keys() {
            if !self.host.contains_arc(arc) {
                violations.push(Violation::ColouringOnNonArc(arc.clone()));
            }
        }
        ValidationReport { violations }
    }

    /// Subdigraph induced by a vertex set: keeps exactly the arcs with both
    /// endpoints inside, restricting the colouring; the pattern is unchanged.
    pub fn induced_subdigraph(&self, vertices: &VertexSet) -> Result<ColouredInstance> {
        if let Some(v) = vertices.iter().find(|v| !self.host.contains_vertex(v)) {
            return Err(Error::invalid(format!("unknown vertex '{v}'")));
        }
        let arcs: ArcSet = self
            .host
            .arcs()
            .iter()
            .filter(|a| vertices.contains(&a.tail) && vertices.contains(&a.head))
            .cloned()
            .collect();
        let colouring = Colouring::new(
            arcs.iter()
                .map(|a| (a.clone(), self.colouring.colour(a).expect("validated").clone())),
        );
        Ok(ColouredInstance {
            host: HostDigraph::new(vertices.iter().cloned(), arcs),
            pattern: self.pattern.clone(),
            colouring,
        })
    }

    /// Spanning subdigraph on the full vertex set keeping only the given
    /// arcs.
    pub fn restrict_arcs(&self, arcs: &ArcSet) -> Result<ColouredInstance> {
        if let Some(a) = arcs.iter().find(|a| !self.host.contains_arc(a)) {
            return Err(Error::invalid(format!("unknown arc '{a}'")));
        }
        let colouring = Colouring::new(
            arcs.iter()
                .map(|a| (a.clone(), self.colouring.colour(a).expect("validated").clone())),
        );
        Ok(ColouredInstance {
            host: HostDigraph::new(self.host.vertices().iter().cloned(), arcs.iter().cloned()),
            pattern: self.pattern.clone(),
            colouring,
        })
    }

    /// The colour sequence of a walk, one colour per arc; empty for
    /// length-0 walks.
    pub fn colour_sequence(&self, walk: &Walk) -> Result<Vec<ColourId>> {
        walk.check_in(self.host())?;
        walk.arcs()
            .map(|a| self.arc_colour(&a).cloned())
            .collect()
    }
}

/// A walk in the host digraph, stored as its vertex sequence. The sequence
/// is non-empty; a walk of length k visits k+1 vertices.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct Walk {
    vertices: Vec<VertexId>,
}

impl Walk {
    pub fn new(vertices: Vec<VertexId>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::invalid("a walk must visit at least one vertex"));
        }
        Ok(Walk { vertices })
    }

    pub fn single(vertex: VertexId) -> Self {
        Walk {
            vertices: vec![vertex],
        }
    }

    pub fn from_ids<'a>(ids: impl IntoIterator<Item = &'a str>) -> Result<Self> {
        Self::new(ids.into_iter().map(VertexId::from).collect())
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    /// Number of arcs traversed.
    pub fn len(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_closed(&self) -> bool {
        !self.is_empty() && self.vertices.first() == self.vertices.last()
    }

    pub fn first(&self) -> &VertexId {
        self.vertices.first().expect("non-empty")
    }

    pub fn last(&self) -> &VertexId {
        self.vertices.last().expect("non-empty")
    }

    pub fn arcs(&self) -> impl Iterator<Item = Arc> + '_ {
        self.vertices
            .windows(2)
            .map(|w| Arc::new(w[0].clone(), w[1].clone()))
    }

    /// Invalid-argument unless every vertex exists and every consecutive
    /// pair is an arc of the host.
    pub fn check_in(&self, host: &HostDigraph) -> Result<()> {
        for v in &self.vertices {
            if !host.contains_vertex(v) {
                return Err(Error::invalid(format!("walk uses unknown vertex '{v}'")));
            }
        }
        for a in self.arcs() {
            if !host.contains_arc(&a) {
                return Err(Error::invalid(format!("walk uses non-arc '{a}'")));
            }
        }
        Ok(())
    }
}

impl fmt::Display for Walk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                f.write_str(" -> ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Partition of the host's arcs into ordered, pairwise disjoint blocks.
/// Two-block partitions carry the (E1, E2) roles of the semikernel
/// machinery; checks against a host verify exhaustiveness.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ArcPartition {
    blocks: Vec<ArcSet>,
}

impl ArcPartition {
    pub fn new(blocks: Vec<ArcSet>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::invalid("a partition needs at least one block"));
        }
        let mut seen: ArcSet = BTreeSet::new();
        for block in &blocks {
            if let Some(a) = block.iter().find(|a| seen.contains(*a)) {
                return Err(Error::invalid(format!(
                    "arc '{a}' appears in more than one block"
                )));
            }
            seen.extend(block.iter().cloned());
        }
        Ok(ArcPartition { blocks })
    }

    pub fn two(e1: ArcSet, e2: ArcSet) -> Result<Self> {
        Self::new(vec![e1, e2])
    }

    pub fn blocks(&self) -> &[ArcSet] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// Zero-based index of the block containing the arc.
    pub fn block_of(&self, arc: &Arc) -> Option<usize> {
        self.blocks.iter().position(|b| b.contains(arc))
    }

    /// Verifies that the blocks exhaust exactly the host's arcs.
    pub fn check_against(&self, host: &HostDigraph) -> Result<()> {
        let mut union: ArcSet = BTreeSet::new();
        for block in &self.blocks {
            union.extend(block.iter().cloned());
        }
        if let Some(a) = union.iter().find(|a| !host.contains_arc(a)) {
            return Err(Error::invalid(format!("partition contains unknown arc '{a}'")));
        }
        if let Some(a) = host.arcs().iter().find(|a| !union.contains(*a)) {
            return Err(Error::invalid(format!(
                "partition does not cover arc '{a}'"
            )));
        }
        Ok(())
    }

    /// The (E1, E2) pair; invalid-argument unless there are exactly two
    /// blocks.
    pub fn pair(&self) -> Result<(&ArcSet, &ArcSet)> {
        if self.blocks.len() != 2 {
            return Err(Error::invalid(format!(
                "expected a 2-block partition, got {} blocks",
                self.blocks.len()
            )));
        }
        Ok((&self.blocks[0], &self.blocks[1]))
    }
}
