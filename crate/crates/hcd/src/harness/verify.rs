//! Per-claim verification: check the hypothesis, run the pipeline under
//! test, and cross-validate its conclusion independently.

use serde::{Deserialize, Serialize};

use crate::cycles::{
    enumerate_simple_cycles, every_cycle_has_symmetric_arc, first_non_h_cycle,
    CycleEnumerationLimit,
};
use crate::digraph::{Arc, HostDigraph, VertexId};
use crate::error::{Error, Result};
use crate::format::serialize_instance;
use crate::instance::{vertex_set_string, ArcPartition, ColouredInstance, VertexSet};
use crate::kernel::{find_h_kernels_bruteforce, h_kernel_via_closure_unchecked, is_h_kernel};
use crate::reach::{h_closure, h_path_exists_with_budget, HReach, DEFAULT_PATH_BUDGET};
use crate::semikernel::{
    build_semikernel_digraph, check_corollary_block_hypotheses, check_theorem4_hypotheses,
    derive_partition_corollary, find_singleton_semikernel, h_kernel_via_theorem4_unchecked,
    is_h_semikernel_mod, CorollaryMode, COROLLARY_CLOSURE_NOTE,
};

/// The verifiable claims.
#[derive(
    Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize, Deserialize,
)]
#[serde(rename_all = "kebab-case")]
pub enum Claim {
    Lemma,
    Theorem1,
    Theorem2,
    Theorem3,
    Theorem4,
    Corollary5,
    Corollary6,
    WalkImpliesPath,
}

impl Claim {
    pub const ALL: [Claim; 8] = [
        Claim::Lemma,
        Claim::Theorem1,
        Claim::Theorem2,
        Claim::Theorem3,
        Claim::Theorem4,
        Claim::Corollary5,
        Claim::Corollary6,
        Claim::WalkImpliesPath,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Claim::Lemma => "lemma",
            Claim::Theorem1 => "theorem1",
            Claim::Theorem2 => "theorem2",
            Claim::Theorem3 => "theorem3",
            Claim::Theorem4 => "theorem4",
            Claim::Corollary5 => "corollary5",
            Claim::Corollary6 => "corollary6",
            Claim::WalkImpliesPath => "walk-implies-path",
        }
    }

    /// Does verification need an arc partition alongside the instance?
    pub fn needs_partition(self) -> bool {
        matches!(
            self,
            Claim::Theorem2
                | Claim::Theorem3
                | Claim::Theorem4
                | Claim::Corollary5
                | Claim::Corollary6
        )
    }
}

impl std::fmt::Display for Claim {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.id())
    }
}

impl std::str::FromStr for Claim {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Claim::ALL
            .into_iter()
            .find(|c| c.id() == s)
            .ok_or_else(|| Error::invalid(format!("unknown claim '{s}'")))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerdictStatus {
    Holds,
    HypothesisNotMet,
    Counterexample,
    ResourceLimit,
}

impl std::fmt::Display for VerdictStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            VerdictStatus::Holds => "holds",
            VerdictStatus::HypothesisNotMet => "hypothesis-not-met",
            VerdictStatus::Counterexample => "COUNTEREXAMPLE",
            VerdictStatus::ResourceLimit => "resource-limit",
        };
        f.write_str(name)
    }
}

/// Serialized evidence attached to a counterexample verdict; the document
/// replays through the instance parser.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Witness {
    pub detail: String,
    pub document: String,
}

/// Outcome of checking one claim on one instance.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Verdict {
    pub claim: Claim,
    pub status: VerdictStatus,
    pub detail: String,
    pub witness: Option<Witness>,
}

impl Verdict {
    fn holds(claim: Claim, detail: impl Into<String>) -> Self {
        Verdict {
            claim,
            status: VerdictStatus::Holds,
            detail: detail.into(),
            witness: None,
        }
    }

    fn hypothesis_not_met(claim: Claim, detail: impl Into<String>) -> Self {
        Verdict {
            claim,
            status: VerdictStatus::HypothesisNotMet,
            detail: detail.into(),
            witness: None,
        }
    }

    fn counterexample(claim: Claim, detail: impl Into<String>, document: String) -> Self {
        let detail = detail.into();
        Verdict {
            claim,
            status: VerdictStatus::Counterexample,
            detail: detail.clone(),
            witness: Some(Witness { detail, document }),
        }
    }

    fn resource_limit(claim: Claim, detail: impl Into<String>) -> Self {
        Verdict {
            claim,
            status: VerdictStatus::ResourceLimit,
            detail: detail.into(),
            witness: None,
        }
    }
}

/// Desk-scale bounds for verification.
#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    /// Brute-force kernel cross-checks run only up to this many vertices.
    pub kernel_size_guard: usize,
    /// Semikernel enumeration (power-set) guard.
    pub semikernel_size_guard: usize,
    /// Step budget for simple-path searches.
    pub path_budget: u64,
    /// Cycle enumeration cap per digraph.
    pub max_cycles: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            kernel_size_guard: 8,
            semikernel_size_guard: 6,
            path_budget: DEFAULT_PATH_BUDGET,
            max_cycles: 1_000_000,
        }
    }
}

impl VerifyOptions {
    fn cycle_limit(&self, digraph: &HostDigraph) -> CycleEnumerationLimit {
        CycleEnumerationLimit::new(self.max_cycles, digraph.vertex_count().max(1))
    }
}

/// Checks one claim on one instance. Hypothesis failures and resource
/// limits become verdict statuses; invalid inputs (missing or wrongly
/// shaped partitions, unknown vertices) are errors.
pub fn verify_claim(
    instance: &ColouredInstance,
    partition: Option<&ArcPartition>,
    claim: Claim,
    options: &VerifyOptions,
) -> Result<Verdict> {
    let partition = match (claim.needs_partition(), partition) {
        (true, None) => {
            return Err(Error::invalid(format!(
                "claim '{claim}' needs an arc partition"
            )))
        }
        (_, p) => p,
    };
    let verdict = match claim {
        Claim::Lemma => verify_lemma(instance, options),
        Claim::Theorem1 => verify_theorem1(instance, options),
        Claim::Theorem2 => verify_theorem2(instance, partition.expect("checked"), options),
        Claim::Theorem3 => verify_theorem3(instance, partition.expect("checked"), options),
        Claim::Theorem4 => verify_theorem4(instance, partition.expect("checked"), options),
        Claim::Corollary5 => verify_corollary(
            instance,
            partition.expect("checked"),
            CorollaryMode::Bipartite,
            Claim::Corollary5,
            options,
        ),
        Claim::Corollary6 => verify_corollary(
            instance,
            partition.expect("checked"),
            CorollaryMode::StrongNoOdd,
            Claim::Corollary6,
            options,
        ),
        Claim::WalkImpliesPath => verify_walk_implies_path(instance, options),
    };
    match verdict {
        Ok(v) => Ok(v),
        Err(Error::ResourceLimit(detail)) => Ok(Verdict::resource_limit(claim, detail)),
        Err(Error::Counterexample(report)) => Ok(Verdict::counterexample(
            claim,
            report.detail,
            report.document,
        )),
        Err(other) => Err(other),
    }
}

/// Hypothesis shared by the lemma and theorem1 claims: every cycle of the
/// host is an H-cycle.
fn cycle_hypothesis(
    instance: &ColouredInstance,
    options: &VerifyOptions,
) -> Result<Option<String>> {
    let limit = options.cycle_limit(instance.host());
    Ok(first_non_h_cycle(instance, &limit)?.map(|cycle| format!("cycle '{cycle}' is not an H-cycle")))
}

fn verify_lemma(instance: &ColouredInstance, options: &VerifyOptions) -> Result<Verdict> {
    if let Some(detail) = cycle_hypothesis(instance, options)? {
        return Ok(Verdict::hypothesis_not_met(Claim::Lemma, detail));
    }
    let closure = h_closure(instance);
    // two independent routes: asymmetric-part acyclicity, and a direct scan
    // over every enumerated closure cycle
    let via_acyclicity = every_cycle_has_symmetric_arc(closure.digraph());
    let limit = options.cycle_limit(closure.digraph());
    let offending = enumerate_simple_cycles(closure.digraph(), &limit)?
        .into_iter()
        .find(|cycle| {
            !cycle
                .arcs()
                .any(|a| closure.digraph().contains_arc(&a.reversed()))
        });
    match (via_acyclicity, offending) {
        (true, None) => Ok(Verdict::holds(
            Claim::Lemma,
            "every closure cycle has a symmetric arc (both routes agree)",
        )),
        (_, Some(cycle)) => Ok(Verdict::counterexample(
            Claim::Lemma,
            format!("closure cycle '{cycle}' has no symmetric arc"),
            serialize_instance(instance, None),
        )),
        (false, None) => Ok(Verdict::counterexample(
            Claim::Lemma,
            "asymmetric part of the closure is cyclic, yet no enumerated cycle lacks a \
             symmetric arc: the two routes disagree"
                .to_owned(),
            serialize_instance(instance, None),
        )),
    }
}

fn verify_theorem1(instance: &ColouredInstance, options: &VerifyOptions) -> Result<Verdict> {
    if let Some(detail) = cycle_hypothesis(instance, options)? {
        return Ok(Verdict::hypothesis_not_met(Claim::Theorem1, detail));
    }
    let kernel = h_kernel_via_closure_unchecked(instance)?;
    validate_h_kernel(instance, &kernel, Claim::Theorem1, options)
}

/// Definitional re-check plus brute-force membership when small enough.
fn validate_h_kernel(
    instance: &ColouredInstance,
    kernel: &VertexSet,
    claim: Claim,
    options: &VerifyOptions,
) -> Result<Verdict> {
    if !is_h_kernel(instance, kernel)? {
        return Ok(Verdict::counterexample(
            claim,
            format!("returned set {} is not an H-kernel", vertex_set_string(kernel)),
            serialize_instance(instance, None),
        ));
    }
    if instance.host().vertex_count() <= options.kernel_size_guard {
        let all = find_h_kernels_bruteforce(instance, options.kernel_size_guard)?;
        if !all.contains(kernel) {
            return Ok(Verdict::counterexample(
                claim,
                format!(
                    "returned set {} is missing from the brute-force H-kernel list",
                    vertex_set_string(kernel)
                ),
                serialize_instance(instance, None),
            ));
        }
    }
    Ok(Verdict::holds(
        claim,
        format!("H-kernel {}", vertex_set_string(kernel)),
    ))
}

fn verify_theorem2(
    instance: &ColouredInstance,
    partition: &ArcPartition,
    options: &VerifyOptions,
) -> Result<Verdict> {
    let (_, e2) = partition.pair()?;
    let d2 = instance.restrict_arcs(e2)?;
    let limit = options.cycle_limit(d2.host());
    if let Some(cycle) = first_non_h_cycle(&d2, &limit)? {
        return Ok(Verdict::hypothesis_not_met(
            Claim::Theorem2,
            format!("cycle '{cycle}' in E2 is not an H-cycle"),
        ));
    }
    let vertex = find_singleton_semikernel(instance, partition)?;
    let singleton = VertexSet::from([vertex.clone()]);
    if !is_h_semikernel_mod(instance, partition, &singleton)? {
        return Ok(Verdict::counterexample(
            Claim::Theorem2,
            format!("chase returned '{vertex}' but {{{vertex}}} is not an H-semikernel mod E1"),
            serialize_instance(instance, Some(partition)),
        ));
    }
    Ok(Verdict::holds(
        Claim::Theorem2,
        format!("singleton H-semikernel {{{vertex}}}"),
    ))
}

fn verify_theorem3(
    instance: &ColouredInstance,
    partition: &ArcPartition,
    options: &VerifyOptions,
) -> Result<Verdict> {
    let (e1, _) = partition.pair()?;
    let d1 = instance.restrict_arcs(e1)?;
    let limit = options.cycle_limit(d1.host());
    if let Some(cycle) = first_non_h_cycle(&d1, &limit)? {
        return Ok(Verdict::hypothesis_not_met(
            Claim::Theorem3,
            format!("cycle '{cycle}' in E1 is not an H-cycle"),
        ));
    }
    let digraph = build_semikernel_digraph(instance, partition, options.semikernel_size_guard)?;
    // direct cycle search, cross-checked through the generic enumerator on
    // an index-labelled copy
    let direct = digraph.find_cycle();
    let relabelled = index_labelled(digraph.vertex_count(), digraph.arc_indices());
    let enumerated =
        enumerate_simple_cycles(&relabelled, &options.cycle_limit(&relabelled))?;
    match (direct, enumerated.is_empty()) {
        (None, true) => Ok(Verdict::holds(
            Claim::Theorem3,
            format!(
                "semikernel digraph with {} vertices and {} arcs is acyclic",
                digraph.vertex_count(),
                digraph.arc_count()
            ),
        )),
        (cycle, _) => {
            let description = cycle
                .map(|c| {
                    c.iter()
                        .map(|&i| vertex_set_string(&digraph.vertices()[i]))
                        .collect::<Vec<_>>()
                        .join(" -> ")
                })
                .unwrap_or_else(|| "found by enumeration only".to_owned());
            Ok(Verdict::counterexample(
                Claim::Theorem3,
                format!("semikernel digraph has a cycle: {description}"),
                serialize_instance(instance, Some(partition)),
            ))
        }
    }
}

/// Digraph on synthetic vertices `s<k>` mirroring index arcs; lets the
/// generic cycle machinery run over the semikernel digraph.
fn index_labelled(
    count: usize,
    arcs: &std::collections::BTreeSet<(usize, usize)>,
) -> HostDigraph {
    let width = count.saturating_sub(1).to_string().len();
    let name = |i: usize| VertexId::new(format!("s{i:0width$}"));
    HostDigraph::new(
        (0..count).map(name),
        arcs.iter().map(|&(i, j)| Arc {
            tail: name(i),
            head: name(j),
        }),
    )
}

fn verify_theorem4(
    instance: &ColouredInstance,
    partition: &ArcPartition,
    options: &VerifyOptions,
) -> Result<Verdict> {
    if let Err(Error::HypothesisViolation { detail, .. }) =
        check_theorem4_hypotheses(instance, partition)
    {
        return Ok(Verdict::hypothesis_not_met(Claim::Theorem4, detail));
    }
    let kernel =
        h_kernel_via_theorem4_unchecked(instance, partition, options.semikernel_size_guard)?;
    validate_h_kernel(instance, &kernel, Claim::Theorem4, options)
}

fn verify_corollary(
    instance: &ColouredInstance,
    blocks: &ArcPartition,
    mode: CorollaryMode,
    claim: Claim,
    options: &VerifyOptions,
) -> Result<Verdict> {
    if let Err(Error::HypothesisViolation { detail, .. }) =
        check_corollary_block_hypotheses(instance, blocks)
    {
        return Ok(Verdict::hypothesis_not_met(claim, detail));
    }
    let derived = match derive_partition_corollary(instance, blocks, mode) {
        Ok(partition) => partition,
        Err(Error::HypothesisViolation { detail, .. }) => {
            return Ok(Verdict::hypothesis_not_met(claim, detail));
        }
        Err(other) => return Err(other),
    };
    // the corollary's own hypotheses hold from here on
    match check_theorem4_hypotheses(instance, &derived) {
        Ok(()) => {
            let kernel = h_kernel_via_theorem4_unchecked(
                instance,
                &derived,
                options.semikernel_size_guard,
            )?;
            let verdict = validate_h_kernel(instance, &kernel, claim, options)?;
            Ok(append_note(verdict, COROLLARY_CLOSURE_NOTE))
        }
        Err(Error::HypothesisViolation { detail, .. }) => {
            // The derived partition does not feed the partitioned pipeline
            // (typically H-walks oscillate across the two derived blocks).
            // The claimed conclusion is only the existence of an H-kernel,
            // so decide that directly.
            if instance.host().vertex_count() > options.kernel_size_guard {
                return Ok(Verdict::resource_limit(
                    claim,
                    format!(
                        "pipeline inapplicable on the derived partition ({detail}) and the \
                         instance is too large for the brute-force existence check"
                    ),
                ));
            }
            let kernels = find_h_kernels_bruteforce(instance, options.kernel_size_guard)?;
            match kernels.first() {
                Some(kernel) => Ok(append_note(
                    Verdict::holds(
                        claim,
                        format!(
                            "pipeline inapplicable on the derived partition ({detail}); \
                             H-kernel {} found by brute force",
                            vertex_set_string(kernel)
                        ),
                    ),
                    COROLLARY_CLOSURE_NOTE,
                )),
                None => Ok(Verdict::counterexample(
                    claim,
                    "corollary hypotheses hold but no H-kernel exists",
                    serialize_instance(instance, Some(blocks)),
                )),
            }
        }
        Err(other) => Err(other),
    }
}

fn append_note(mut verdict: Verdict, note: &str) -> Verdict {
    verdict.detail = format!("{} [{note}]", verdict.detail);
    verdict
}

fn verify_walk_implies_path(
    instance: &ColouredInstance,
    options: &VerifyOptions,
) -> Result<Verdict> {
    let reach = HReach::new(instance);
    let vertices: Vec<VertexId> = reach.vertices().to_vec();
    for u in &vertices {
        for v in &vertices {
            if u == v || !reach.exists(u, v) {
                continue;
            }
            if !h_path_exists_with_budget(instance, u, v, options.path_budget)? {
                return Ok(Verdict::counterexample(
                    Claim::WalkImpliesPath,
                    format!("an H-walk runs from '{u}' to '{v}' but no H-path does"),
                    serialize_instance(instance, None),
                ));
            }
        }
    }
    Ok(Verdict::holds(
        Claim::WalkImpliesPath,
        "every H-walk-reachable pair is H-path-reachable",
    ))
}
