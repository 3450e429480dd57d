//! Random-instance generation, per-claim verification and campaign
//! orchestration with counterexample capture.

mod campaign;
mod gen;
mod verify;

pub use campaign::{
    run_campaign, run_campaign_with, CampaignConfig, CampaignReport, ClaimSummary,
    CounterexampleRecord, GeneratorSummary,
};
pub use gen::{
    generate_instance, Generated, GeneratorParams, Strategy, GENERATOR_ALGORITHM,
    REJECTION_BUDGET,
};
pub use verify::{verify_claim, Claim, Verdict, VerdictStatus, VerifyOptions, Witness};
