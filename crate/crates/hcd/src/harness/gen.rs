//! Seeded instance generators.
//!
//! Generation is deterministic for a fixed parameter set: the RNG is
//! ChaCha8 seeded from the 64-bit seed, and draws happen in a fixed order
//! (host arcs, pattern arcs, arc colours, then block labels).

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cycles::{all_cycles_are_h_cycles, CycleEnumerationLimit};
use crate::digraph::{Arc, ColourId, HostDigraph, PatternDigraph, VertexId};
use crate::error::{Error, Result};
use crate::instance::{ArcPartition, ArcSet, ColouredInstance, Colouring};

/// Identifier of the RNG recorded in campaign reports.
pub const GENERATOR_ALGORITHM: &str = "chacha8";

/// Attempts before rejection-filtered generation gives up on one instance.
pub const REJECTION_BUDGET: usize = 10_000;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    /// Independent per-arc and per-pattern-arc coin flips.
    Uniform,
    /// Host arcs only go from smaller to larger vertices, so the host is a
    /// DAG and every cycle hypothesis holds vacuously.
    AcyclicHost,
    /// Pattern has every arc including loops, so every walk is an H-walk
    /// and every cycle is an H-cycle.
    CompleteLoopedPattern,
    /// Uniform draws filtered on "every cycle is an H-cycle".
    RejectionFiltered,
}

impl std::fmt::Display for Strategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Strategy::Uniform => "uniform",
            Strategy::AcyclicHost => "acyclic-host",
            Strategy::CompleteLoopedPattern => "complete-looped-pattern",
            Strategy::RejectionFiltered => "rejection-filtered",
        };
        f.write_str(name)
    }
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct GeneratorParams {
    pub n_vertices: usize,
    pub n_colours: usize,
    pub arc_probability: f64,
    pub pattern_density: f64,
    pub strategy: Strategy,
    pub seed: u64,
    /// When set, also draw an arc partition with this many blocks by
    /// independent per-arc block assignment.
    #[serde(default)]
    pub partition_blocks: Option<usize>,
}

impl GeneratorParams {
    pub fn check(&self) -> Result<()> {
        if self.n_vertices == 0 {
            return Err(Error::invalid("n_vertices must be positive"));
        }
        if self.n_colours == 0 {
            return Err(Error::invalid("n_colours must be positive"));
        }
        for (name, value) in [
            ("arc_probability", self.arc_probability),
            ("pattern_density", self.pattern_density),
        ] {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::invalid(format!("{name} must lie in [0, 1]")));
            }
        }
        if self.partition_blocks == Some(0) {
            return Err(Error::invalid("partition_blocks must be positive"));
        }
        Ok(())
    }
}

/// A generated instance plus how many rejection attempts it took.
pub struct Generated {
    pub instance: ColouredInstance,
    pub partition: Option<ArcPartition>,
    pub attempts: usize,
}

fn padded(prefix: &str, index: usize, count: usize) -> String {
    let width = count.saturating_sub(1).to_string().len();
    format!("{prefix}{index:0width$}")
}

fn vertex_names(n: usize) -> Vec<VertexId> {
    (0..n).map(|i| VertexId::new(padded("v", i, n))).collect()
}

fn colour_names(n: usize) -> Vec<ColourId> {
    (0..n).map(|i| ColourId::new(padded("c", i, n))).collect()
}

fn draw_host(params: &GeneratorParams, rng: &mut ChaCha8Rng) -> (Vec<VertexId>, Vec<Arc>) {
    let names = vertex_names(params.n_vertices);
    let mut arcs = Vec::new();
    for i in 0..names.len() {
        for j in 0..names.len() {
            if i == j {
                continue;
            }
            if params.strategy == Strategy::AcyclicHost && i >= j {
                continue;
            }
            if rng.random_bool(params.arc_probability) {
                arcs.push(Arc {
                    tail: names[i].clone(),
                    head: names[j].clone(),
                });
            }
        }
    }
    (names, arcs)
}

fn draw_pattern(params: &GeneratorParams, rng: &mut ChaCha8Rng) -> PatternDigraph {
    let colours = colour_names(params.n_colours);
    if params.strategy == Strategy::CompleteLoopedPattern {
        return PatternDigraph::complete_with_loops(colours);
    }
    let mut arcs = Vec::new();
    for a in &colours {
        for b in &colours {
            if rng.random_bool(params.pattern_density) {
                arcs.push((a.clone(), b.clone()));
            }
        }
    }
    PatternDigraph::new(colours, arcs)
}

fn draw_instance(params: &GeneratorParams, rng: &mut ChaCha8Rng) -> ColouredInstance {
    let (vertices, arcs) = draw_host(params, rng);
    let pattern = draw_pattern(params, rng);
    let colours: Vec<&ColourId> = pattern.vertices().iter().collect();
    let colouring = Colouring::new(arcs.iter().map(|a| {
        let pick = rng.random_range(0..colours.len());
        (a.clone(), colours[pick].clone())
    }));
    let host = HostDigraph::new(vertices, arcs);
    ColouredInstance::new(host, pattern, colouring).expect("generated instances are well-formed")
}

fn draw_partition(
    instance: &ColouredInstance,
    blocks: usize,
    rng: &mut ChaCha8Rng,
) -> ArcPartition {
    let mut sets: Vec<ArcSet> = vec![ArcSet::new(); blocks];
    for arc in instance.host().arcs() {
        let pick = rng.random_range(0..blocks);
        sets[pick].insert(arc.clone());
    }
    ArcPartition::new(sets).expect("per-arc assignment is disjoint")
}

/// Draws one instance (and optionally a partition) for the given
/// parameters. Deterministic for a fixed parameter set.
pub fn generate_instance(params: &GeneratorParams) -> Result<Generated> {
    params.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let (instance, attempts) = match params.strategy {
        Strategy::Uniform | Strategy::AcyclicHost | Strategy::CompleteLoopedPattern => {
            (draw_instance(params, &mut rng), 1)
        }
        Strategy::RejectionFiltered => {
            let mut accepted = None;
            let mut attempts = 0;
            while attempts < REJECTION_BUDGET {
                attempts += 1;
                let candidate = draw_instance(params, &mut rng);
                let limit = CycleEnumerationLimit::default_for(candidate.host());
                if all_cycles_are_h_cycles(&candidate, &limit)? {
                    accepted = Some(candidate);
                    break;
                }
            }
            match accepted {
                Some(instance) => (instance, attempts),
                None => {
                    return Err(Error::limit(format!(
                        "rejection-filtered generation exhausted {REJECTION_BUDGET} attempts \
                         (acceptance rate 0/{REJECTION_BUDGET}); lower arc_probability or raise \
                         pattern_density"
                    )));
                }
            }
        }
    };
    let partition = params
        .partition_blocks
        .map(|blocks| draw_partition(&instance, blocks, &mut rng));
    Ok(Generated {
        instance,
        partition,
        attempts,
    })
}
