//! Campaigns: many generated instances, several claims, aggregated
//! verdicts, reproducible reports.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harness::gen::{generate_instance, GeneratorParams, GENERATOR_ALGORITHM};
use crate::harness::verify::{verify_claim, Claim, Verdict, VerdictStatus, VerifyOptions};

/// One campaign: every generator draws `instances` instances (seeds derived
/// from its base seed), and every claim is verified on each of them.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CampaignConfig {
    pub claims: Vec<Claim>,
    /// Instances per generator.
    pub instances: usize,
    #[serde(default = "default_workers")]
    pub workers: usize,
    pub generators: Vec<GeneratorParams>,
}

fn default_workers() -> usize {
    1
}

impl CampaignConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::invalid(format!("campaign config: {e}")))
    }

    pub fn check(&self) -> Result<()> {
        if self.workers == 0 {
            return Err(Error::invalid("workers must be positive"));
        }
        for generator in &self.generators {
            generator.check()?;
            for claim in &self.claims {
                let blocks = generator.partition_blocks;
                let two_block_claim = matches!(
                    claim,
                    Claim::Theorem2 | Claim::Theorem3 | Claim::Theorem4
                );
                if two_block_claim && blocks != Some(2) {
                    return Err(Error::invalid(format!(
                        "claim '{claim}' needs generators with partition_blocks = 2"
                    )));
                }
                if claim.needs_partition() && blocks.is_none() {
                    return Err(Error::invalid(format!(
                        "claim '{claim}' needs generators with partition_blocks set"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Per-claim verdict counts.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct ClaimSummary {
    pub claim: String,
    pub holds: usize,
    pub hypothesis_not_met: usize,
    pub counterexamples: usize,
    pub resource_limits: usize,
}

/// Per-generator acceptance statistics.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GeneratorSummary {
    pub generator: usize,
    pub strategy: String,
    pub instances: usize,
    pub attempts: usize,
    pub acceptance_rate: f64,
}

/// A captured counterexample, replayable through the instance parser.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CounterexampleRecord {
    pub generator: usize,
    pub index: usize,
    pub seed: u64,
    pub claim: String,
    pub detail: String,
    pub document: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CampaignReport {
    pub algorithm: String,
    pub instances_per_generator: usize,
    pub claims: Vec<String>,
    pub summaries: Vec<ClaimSummary>,
    pub generators: Vec<GeneratorSummary>,
    pub counterexamples: Vec<CounterexampleRecord>,
    /// Timing; excluded from the canonical text so reports diff cleanly.
    pub wall_clock_seconds: f64,
}

impl CampaignReport {
    pub fn counterexample_count(&self) -> usize {
        self.counterexamples.len()
    }

    pub fn resource_limit_count(&self) -> usize {
        self.summaries.iter().map(|s| s.resource_limits).sum()
    }

    /// Deterministic body: everything except timing.
    pub fn canonical_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "campaign: {} instance(s) per generator, rng {}\n",
            self.instances_per_generator, self.algorithm
        ));
        out.push_str(&format!("claims: {}\n", self.claims.join(", ")));
        for summary in &self.summaries {
            out.push_str(&format!(
                "  {}: holds {}, hypothesis-not-met {}, counterexamples {}, resource-limits {}\n",
                summary.claim,
                summary.holds,
                summary.hypothesis_not_met,
                summary.counterexamples,
                summary.resource_limits
            ));
        }
        for generator in &self.generators {
            out.push_str(&format!(
                "  generator {} ({}): {} instance(s) from {} attempt(s), acceptance {:.4}\n",
                generator.generator,
                generator.strategy,
                generator.instances,
                generator.attempts,
                generator.acceptance_rate
            ));
        }
        if self.counterexamples.is_empty() {
            out.push_str("no counterexamples\n");
        } else {
            out.push_str(&format!(
                "{} COUNTEREXAMPLE(S):\n",
                self.counterexamples.len()
            ));
            for record in &self.counterexamples {
                out.push_str(&format!(
                    "  [{} seed {}] {}: {}\n",
                    record.index, record.seed, record.claim, record.detail
                ));
                for line in record.document.lines() {
                    out.push_str(&format!("    {line}\n"));
                }
            }
        }
        out
    }

    pub fn render_text(&self) -> String {
        format!(
            "{}wall clock: {:.3}s\n",
            self.canonical_text(),
            self.wall_clock_seconds
        )
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

struct TaskOutcome {
    generator: usize,
    index: usize,
    seed: u64,
    attempts: usize,
    verdicts: Vec<Verdict>,
}

/// SplitMix64 step over the base seed and instance index, so per-instance
/// seeds do not collide across nearby bases.
fn derive_seed(base: u64, index: usize) -> u64 {
    let mut z = base.wrapping_add((index as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn run_task(
    config: &CampaignConfig,
    options: &VerifyOptions,
    generator: usize,
    index: usize,
) -> Result<TaskOutcome> {
    let mut params = config.generators[generator].clone();
    params.seed = derive_seed(params.seed, index);
    let seed = params.seed;
    match generate_instance(&params) {
        Ok(generated) => {
            let mut verdicts = Vec::with_capacity(config.claims.len());
            for &claim in &config.claims {
                verdicts.push(verify_claim(
                    &generated.instance,
                    generated.partition.as_ref(),
                    claim,
                    options,
                )?);
            }
            Ok(TaskOutcome {
                generator,
                index,
                seed,
                attempts: generated.attempts,
                verdicts,
            })
        }
        // a dried-up rejection filter is a per-instance resource limit,
        // not a campaign failure
        Err(Error::ResourceLimit(detail)) => Ok(TaskOutcome {
            generator,
            index,
            seed,
            attempts: crate::harness::gen::REJECTION_BUDGET,
            verdicts: config
                .claims
                .iter()
                .map(|&claim| Verdict {
                    claim,
                    status: VerdictStatus::ResourceLimit,
                    detail: detail.clone(),
                    witness: None,
                })
                .collect(),
        }),
        Err(other) => Err(other),
    }
}

pub fn run_campaign(config: &CampaignConfig) -> Result<CampaignReport> {
    run_campaign_with(config, &VerifyOptions::default())
}

pub fn run_campaign_with(
    config: &CampaignConfig,
    options: &VerifyOptions,
) -> Result<CampaignReport> {
    config.check()?;
    let started = Instant::now();
    let tasks: Vec<(usize, usize)> = (0..config.generators.len())
        .flat_map(|g| (0..config.instances).map(move |i| (g, i)))
        .collect();

    let mut outcomes: Vec<TaskOutcome> = if config.workers == 1 {
        tasks
            .iter()
            .map(|&(g, i)| run_task(config, options, g, i))
            .collect::<Result<_>>()?
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.workers)
            .build()
            .map_err(|e| Error::invalid(format!("worker pool: {e}")))?;
        pool.install(|| {
            tasks
                .par_iter()
                .map(|&(g, i)| run_task(config, options, g, i))
                .collect::<Result<_>>()
        })?
    };
    // aggregation is order-independent: sort by (generator, index)
    outcomes.sort_by_key(|o| (o.generator, o.index));

    let mut summaries: Vec<ClaimSummary> = config
        .claims
        .iter()
        .map(|c| ClaimSummary {
            claim: c.id().to_owned(),
            ..ClaimSummary::default()
        })
        .collect();
    let mut generators: Vec<GeneratorSummary> = config
        .generators
        .iter()
        .enumerate()
        .map(|(i, g)| GeneratorSummary {
            generator: i,
            strategy: g.strategy.to_string(),
            instances: 0,
            attempts: 0,
            acceptance_rate: 0.0,
        })
        .collect();
    let mut counterexamples = Vec::new();

    for outcome in &outcomes {
        let generator = &mut generators[outcome.generator];
        generator.instances += 1;
        generator.attempts += outcome.attempts;
        for (slot, verdict) in outcome.verdicts.iter().enumerate() {
            let summary = &mut summaries[slot];
            match verdict.status {
                VerdictStatus::Holds => summary.holds += 1,
                VerdictStatus::HypothesisNotMet => summary.hypothesis_not_met += 1,
                VerdictStatus::Counterexample => summary.counterexamples += 1,
                VerdictStatus::ResourceLimit => summary.resource_limits += 1,
            }
            if verdict.status == VerdictStatus::Counterexample {
                let witness = verdict.witness.as_ref();
                counterexamples.push(CounterexampleRecord {
                    generator: outcome.generator,
                    index: outcome.index,
                    seed: outcome.seed,
                    claim: verdict.claim.id().to_owned(),
                    detail: verdict.detail.clone(),
                    document: witness.map(|w| w.document.clone()).unwrap_or_default(),
                });
            }
        }
    }
    for generator in &mut generators {
        generator.acceptance_rate = if generator.attempts == 0 {
            0.0
        } else {
            generator.instances as f64 / generator.attempts as f64
        };
    }

    Ok(CampaignReport {
        algorithm: GENERATOR_ALGORITHM.to_owned(),
        instances_per_generator: config.instances,
        claims: config.claims.iter().map(|c| c.id().to_owned()).collect(),
        summaries,
        generators,
        counterexamples,
        wall_clock_seconds: started.elapsed().as_secs_f64(),
    })
}
