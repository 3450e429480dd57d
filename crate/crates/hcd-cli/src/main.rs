//! `hcd` — analyse H-coloured digraphs from instance documents.
//!
//! Exit codes: 0 success / claim holds, 1 usage or parse error,
//! 2 hypothesis not met, 3 counterexample found, 4 resource limit.

use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand};
use serde_json::json;

use hcd::format::{parse_instance, serialize_instance, ParseError};
use hcd::harness::{
    run_campaign_with, CampaignConfig, Claim, GeneratorParams, Strategy, VerdictStatus,
    VerifyOptions,
};
use hcd::instance::vertex_set_string;
use hcd::kernel;
use hcd::rainbow::{find_rainbow, RainbowKind};
use hcd::reach::h_closure;
use hcd::semikernel::{self, CorollaryMode, COROLLARY_CLOSURE_NOTE};
use hcd::{ArcPartition, ColouredInstance, Error, VertexSet};

#[derive(Parser)]
#[command(name = "hcd", version, about = "Analyse H-coloured digraphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse an instance document and report whether it is well-formed.
    Validate {
        file: PathBuf,
        #[arg(long)]
        json_out: Option<PathBuf>,
    },

    /// Print the H-closure as an edge list.
    Closure {
        file: PathBuf,
        #[arg(long)]
        json_out: Option<PathBuf>,
    },

    /// Kernels of the host digraph, or an H-kernel via the closure pipeline.
    #[command(group(ArgGroup::new("mode").required(true).args(["brute", "constructive", "via_closure"])))]
    Kernel {
        file: PathBuf,
        /// List every kernel of the host digraph by brute force.
        #[arg(long)]
        brute: bool,
        /// Greedy construction; requires every cycle to have a symmetric arc.
        #[arg(long)]
        constructive: bool,
        /// H-kernel through the H-closure pipeline.
        #[arg(long)]
        via_closure: bool,
        #[arg(long, default_value_t = 8)]
        limit_vertices: usize,
        /// Skip hypothesis checks (recorded in the output).
        #[arg(long)]
        force: bool,
        #[arg(long)]
        json_out: Option<PathBuf>,
    },

    /// List every H-kernel by brute force.
    HKernel {
        file: PathBuf,
        #[arg(long, default_value_t = 8)]
        limit_vertices: usize,
        #[arg(long)]
        json_out: Option<PathBuf>,
    },

    /// H-semikernels modulo the first block of the document's partition.
    #[command(group(ArgGroup::new("mode").required(true).args(["singleton", "enumerate", "digraph"])))]
    Semikernel {
        file: PathBuf,
        /// Chase a single-vertex H-semikernel.
        #[arg(long)]
        singleton: bool,
        /// Enumerate all non-empty H-semikernels.
        #[arg(long)]
        enumerate: bool,
        /// Build the semikernel digraph.
        #[arg(long)]
        digraph: bool,
        #[arg(long, default_value_t = 8)]
        limit_vertices: usize,
        /// Skip hypothesis checks (recorded in the output).
        #[arg(long)]
        force: bool,
        #[arg(long)]
        json_out: Option<PathBuf>,
    },

    /// Run the partitioned-kernel pipeline on the document's partition.
    Theorem4 {
        file: PathBuf,
        #[arg(long, default_value_t = 8)]
        limit_vertices: usize,
        /// Skip hypothesis checks (recorded in the output).
        #[arg(long)]
        force: bool,
        #[arg(long)]
        json_out: Option<PathBuf>,
    },

    /// Derive a 2-block partition from the closure and run the pipeline.
    Corollary {
        file: PathBuf,
        /// bipartite | strong-no-odd
        #[arg(long)]
        mode: String,
        #[arg(long, default_value_t = 8)]
        limit_vertices: usize,
        /// Skip block hypothesis checks (recorded in the output).
        #[arg(long)]
        force: bool,
        #[arg(long)]
        json_out: Option<PathBuf>,
    },

    /// Search for rainbow C3 / P3 subdigraphs.
    Rainbow {
        file: PathBuf,
        #[arg(long)]
        json_out: Option<PathBuf>,
    },

    /// Verify one claim on the instance.
    Check {
        file: PathBuf,
        #[arg(long)]
        claim: String,
        #[arg(long, default_value_t = 8)]
        limit_vertices: usize,
        #[arg(long, default_value_t = 1_000_000)]
        limit_cycles: usize,
        #[arg(long)]
        json_out: Option<PathBuf>,
    },

    /// Generate a random instance document.
    Gen {
        #[arg(long, default_value_t = 5)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        colours: usize,
        #[arg(long, default_value_t = 0.4)]
        arc_prob: f64,
        #[arg(long, default_value_t = 0.5)]
        pattern_density: f64,
        /// uniform | acyclic-host | complete-looped-pattern | rejection-filtered
        #[arg(long, default_value = "uniform")]
        strategy: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also draw an arc partition with this many blocks.
        #[arg(long)]
        blocks: Option<usize>,
        /// Write to a file instead of stdout.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },

    /// Run a campaign described by a TOML config file.
    Campaign {
        config: PathBuf,
        #[arg(long)]
        workers: Option<usize>,
        /// Replace generator seeds with seed, seed+1, ...
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        json_out: Option<PathBuf>,
    },
}

enum Failure {
    Parse(ParseError),
    Domain(Error),
    Io(PathBuf, std::io::Error),
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Parse(e) => write!(f, "{e}"),
            Failure::Domain(e) => write!(f, "{e}"),
            Failure::Io(path, e) => write!(f, "{}: {e}", path.display()),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

fn exit_code_for(failure: &Failure) -> u8 {
    match failure {
        Failure::Parse(_) | Failure::Io(..) => 1,
        Failure::Domain(e) => match e {
            Error::InvalidArgument(_) => 1,
            Error::HypothesisViolation { .. } => 2,
            Error::Counterexample(_) => 3,
            Error::ResourceLimit(_) => 4,
        },
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Io(path.to_owned(), e))
}

fn write_file(path: &Path, content: &str) -> Result<(), Failure> {
    std::fs::write(path, content).map_err(|e| Failure::Io(path.to_owned(), e))
}

fn load(path: &Path) -> Result<(ColouredInstance, Option<ArcPartition>), Failure> {
    let text = read_file(path)?;
    parse_instance(&text).map_err(Failure::Parse)
}

fn require_partition(partition: Option<ArcPartition>) -> Result<ArcPartition, Failure> {
    partition.ok_or_else(|| {
        Failure::Domain(Error::invalid(
            "this command needs a document with block labels on its arcs",
        ))
    })
}

fn write_json(path: Option<&PathBuf>, value: &serde_json::Value) -> Result<(), Failure> {
    if let Some(path) = path {
        let text = serde_json::to_string_pretty(value).expect("json serializes");
        write_file(path, &text)?;
    }
    Ok(())
}

fn kernel_list_json(kernels: &[VertexSet]) -> serde_json::Value {
    json!(kernels
        .iter()
        .map(|k| k.iter().map(|v| v.as_str()).collect::<Vec<_>>())
        .collect::<Vec<_>>())
}

fn forced_note(force: bool) {
    if force {
        println!("note: hypothesis checks skipped (--force)");
    }
}

fn parse_strategy(s: &str) -> Result<Strategy, Failure> {
    match s {
        "uniform" => Ok(Strategy::Uniform),
        "acyclic-host" => Ok(Strategy::AcyclicHost),
        "complete-looped-pattern" => Ok(Strategy::CompleteLoopedPattern),
        "rejection-filtered" => Ok(Strategy::RejectionFiltered),
        other => Err(Failure::Domain(Error::invalid(format!(
            "unknown strategy '{other}'"
        )))),
    }
}

fn parse_mode(s: &str) -> Result<CorollaryMode, Failure> {
    match s {
        "bipartite" => Ok(CorollaryMode::Bipartite),
        "strong-no-odd" => Ok(CorollaryMode::StrongNoOdd),
        other => Err(Failure::Domain(Error::invalid(format!(
            "unknown mode '{other}', expected bipartite or strong-no-odd"
        )))),
    }
}

fn run(command: Command) -> Result<u8, Failure> {
    match command {
        Command::Validate { file, json_out } => {
            let (instance, partition) = load(&file)?;
            let report = instance.validate();
            if let Some(p) = &partition {
                p.check_against(instance.host())?;
            }
            println!(
                "ok: {} vertices, {} arcs, {} colours{}",
                instance.host().vertex_count(),
                instance.host().arc_count(),
                instance.pattern().vertices().len(),
                match &partition {
                    Some(p) => format!(", {} blocks", p.block_count()),
                    None => String::new(),
                }
            );
            debug_assert!(report.is_empty());
            write_json(
                json_out.as_ref(),
                &json!({
                    "ok": true,
                    "vertices": instance.host().vertex_count(),
                    "arcs": instance.host().arc_count(),
                    "colours": instance.pattern().vertices().len(),
                    "blocks": partition.as_ref().map(|p| p.block_count()),
                }),
            )?;
            Ok(0)
        }

        Command::Closure { file, json_out } => {
            let (instance, _) = load(&file)?;
            let closure = h_closure(&instance);
            for arc in closure.digraph().arcs() {
                println!("{} {}", arc.tail, arc.head);
            }
            write_json(
                json_out.as_ref(),
                &json!({
                    "vertices": closure.digraph().vertices().iter().map(|v| v.as_str()).collect::<Vec<_>>(),
                    "arcs": closure.digraph().arcs().iter().map(|a| [a.tail.as_str(), a.head.as_str()]).collect::<Vec<_>>(),
                }),
            )?;
            Ok(0)
        }

        Command::Kernel {
            file,
            brute,
            constructive,
            via_closure: _,
            limit_vertices,
            force,
            json_out,
        } => {
            let (instance, _) = load(&file)?;
            forced_note(force);
            if brute {
                let kernels = kernel::find_kernels_bruteforce(instance.host(), limit_vertices)?;
                for k in &kernels {
                    println!("{}", vertex_set_string(k));
                }
                println!("{} kernel(s)", kernels.len());
                write_json(json_out.as_ref(), &json!({"kernels": kernel_list_json(&kernels)}))?;
            } else if constructive {
                let k = kernel::kernel_constructive_symmetric(instance.host())?;
                println!("kernel {}", vertex_set_string(&k));
                write_json(json_out.as_ref(), &json!({"kernel": kernel_list_json(&[k])[0], "forced": force}))?;
            } else {
                let k = if force {
                    kernel::h_kernel_via_closure_unchecked(&instance)?
                } else {
                    kernel::h_kernel_via_closure(&instance)?
                };
                println!("h-kernel {}", vertex_set_string(&k));
                write_json(json_out.as_ref(), &json!({"h_kernel": kernel_list_json(&[k])[0], "forced": force}))?;
            }
            Ok(0)
        }

        Command::HKernel {
            file,
            limit_vertices,
            json_out,
        } => {
            let (instance, _) = load(&file)?;
            let kernels = kernel::find_h_kernels_bruteforce(&instance, limit_vertices)?;
            for k in &kernels {
                println!("{}", vertex_set_string(k));
            }
            println!("{} h-kernel(s)", kernels.len());
            write_json(json_out.as_ref(), &json!({"h_kernels": kernel_list_json(&kernels)}))?;
            Ok(0)
        }

        Command::Semikernel {
            file,
            singleton,
            enumerate,
            digraph: _,
            limit_vertices,
            force,
            json_out,
        } => {
            let (instance, partition) = load(&file)?;
            let partition = require_partition(partition)?;
            forced_note(force);
            if singleton {
                let v = if force {
                    semikernel::find_singleton_semikernel_unchecked(&instance, &partition)?
                } else {
                    semikernel::find_singleton_semikernel(&instance, &partition)?
                };
                println!("singleton h-semikernel {{{v}}}");
                write_json(json_out.as_ref(), &json!({"singleton": v.as_str(), "forced": force}))?;
            } else if enumerate {
                let sets = semikernel::enumerate_h_semikernels(&instance, &partition, limit_vertices)?;
                for s in &sets {
                    println!("{}", vertex_set_string(s));
                }
                println!("{} h-semikernel(s)", sets.len());
                write_json(json_out.as_ref(), &json!({"semikernels": kernel_list_json(&sets)}))?;
            } else {
                let sd = semikernel::build_semikernel_digraph(&instance, &partition, limit_vertices)?;
                print!("{sd}");
                println!("acyclic: {}", sd.is_acyclic());
                write_json(
                    json_out.as_ref(),
                    &json!({
                        "vertices": kernel_list_json(sd.vertices()),
                        "arcs": sd.arc_indices().iter().collect::<Vec<_>>(),
                        "acyclic": sd.is_acyclic(),
                    }),
                )?;
            }
            Ok(0)
        }

        Command::Theorem4 {
            file,
            limit_vertices,
            force,
            json_out,
        } => {
            let (instance, partition) = load(&file)?;
            let partition = require_partition(partition)?;
            forced_note(force);
            let k = if force {
                semikernel::h_kernel_via_theorem4_unchecked(&instance, &partition, limit_vertices)?
            } else {
                semikernel::h_kernel_via_theorem4(&instance, &partition, limit_vertices)?
            };
            println!("h-kernel {}", vertex_set_string(&k));
            write_json(json_out.as_ref(), &json!({"h_kernel": kernel_list_json(&[k])[0], "forced": force}))?;
            Ok(0)
        }

        Command::Corollary {
            file,
            mode,
            limit_vertices,
            force,
            json_out,
        } => {
            let (instance, partition) = load(&file)?;
            let blocks = require_partition(partition)?;
            let mode = parse_mode(&mode)?;
            forced_note(force);
            println!("note: {COROLLARY_CLOSURE_NOTE}");
            let k = if force {
                let derived = semikernel::derive_partition_corollary(&instance, &blocks, mode)?;
                semikernel::h_kernel_via_theorem4_unchecked(&instance, &derived, limit_vertices)?
            } else {
                semikernel::h_kernel_via_corollary(&instance, &blocks, mode, limit_vertices)?
            };
            println!("h-kernel {}", vertex_set_string(&k));
            write_json(
                json_out.as_ref(),
                &json!({
                    "h_kernel": kernel_list_json(&[k])[0],
                    "mode": mode.to_string(),
                    "note": COROLLARY_CLOSURE_NOTE,
                    "forced": force,
                }),
            )?;
            Ok(0)
        }

        Command::Rainbow { file, json_out } => {
            let (instance, _) = load(&file)?;
            let c3 = find_rainbow(&instance, RainbowKind::C3);
            let p3 = find_rainbow(&instance, RainbowKind::P3);
            for witness in [&c3, &p3].into_iter().flatten() {
                println!("{witness}");
            }
            let free = c3.is_none() && p3.is_none();
            println!("rainbow-free: {free}");
            write_json(
                json_out.as_ref(),
                &json!({
                    "rainbow_free": free,
                    "c3": c3.map(|w| w.walk.to_string()),
                    "p3": p3.map(|w| w.walk.to_string()),
                }),
            )?;
            Ok(0)
        }

        Command::Check {
            file,
            claim,
            limit_vertices,
            limit_cycles,
            json_out,
        } => {
            let (instance, partition) = load(&file)?;
            let claim: Claim = claim.parse()?;
            let options = VerifyOptions {
                kernel_size_guard: limit_vertices,
                semikernel_size_guard: limit_vertices,
                max_cycles: limit_cycles,
                ..VerifyOptions::default()
            };
            let verdict = hcd::harness::verify_claim(&instance, partition.as_ref(), claim, &options)?;
            println!("{}: {} — {}", verdict.claim, verdict.status, verdict.detail);
            if let Some(witness) = &verdict.witness {
                println!("witness document:");
                for line in witness.document.lines() {
                    println!("  {line}");
                }
            }
            write_json(json_out.as_ref(), &serde_json::to_value(&verdict).expect("serializes"))?;
            Ok(match verdict.status {
                VerdictStatus::Holds => 0,
                VerdictStatus::HypothesisNotMet => 2,
                VerdictStatus::Counterexample => 3,
                VerdictStatus::ResourceLimit => 4,
            })
        }

        Command::Gen {
            n,
            colours,
            arc_prob,
            pattern_density,
            strategy,
            seed,
            blocks,
            out,
        } => {
            let params = GeneratorParams {
                n_vertices: n,
                n_colours: colours,
                arc_probability: arc_prob,
                pattern_density,
                strategy: parse_strategy(&strategy)?,
                seed,
                partition_blocks: blocks,
            };
            let generated = hcd::harness::generate_instance(&params)?;
            let document = serialize_instance(&generated.instance, generated.partition.as_ref());
            match &out {
                Some(path) => write_file(path, &document)?,
                None => print!("{document}"),
            }
            Ok(0)
        }

        Command::Campaign {
            config,
            workers,
            seed,
            json_out,
        } => {
            let text = read_file(&config)?;
            let mut config = CampaignConfig::from_toml(&text)?;
            if let Some(workers) = workers {
                config.workers = workers;
            }
            if let Some(seed) = seed {
                for (i, generator) in config.generators.iter_mut().enumerate() {
                    generator.seed = seed + i as u64;
                }
            }
            let report = run_campaign_with(&config, &VerifyOptions::default())?;
            print!("{}", report.render_text());
            write_json(json_out.as_ref(), &serde_json::to_value(&report).expect("serializes"))?;
            Ok(if report.counterexample_count() > 0 { 3 } else { 0 })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {failure}");
            ExitCode::from(exit_code_for(&failure))
        }
    }
}
