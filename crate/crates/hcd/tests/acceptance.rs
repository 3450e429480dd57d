//! Acceptance suite: one test per criterion, each printing a PASS line
//! (visible with `cargo test --test acceptance -- --nocapture`).

mod common;

use std::collections::BTreeSet;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use hcd::cycles::{
    all_cycles_are_h_cycles, enumerate_simple_cycles, every_cycle_has_symmetric_arc,
    CycleEnumerationLimit,
};
use hcd::digraph::{Arc, ColourId, HostDigraph, PatternDigraph, VertexId};
use hcd::format::{parse_instance, serialize_instance};
use hcd::harness::{
    generate_instance, run_campaign, verify_claim, CampaignConfig, Claim, Generated,
    GeneratorParams, Strategy, VerdictStatus, VerifyOptions,
};
use hcd::instance::{ArcPartition, ArcSet, ColouredInstance, Colouring, VertexSet};
use hcd::kernel::{
    find_h_kernels_bruteforce, find_kernels_bruteforce, h_kernel_via_closure, is_h_kernel,
    is_kernel, kernel_constructive_symmetric,
};
use hcd::reach::{h_closure, h_walk_exists, HReach};
use hcd::semikernel::{
    check_theorem4_hypotheses, find_singleton_semikernel, h_kernel_via_theorem4,
    is_h_semikernel_mod,
};

use common::{oracle_reachable_pairs, random_instance, WalkEnumerator};

/// Mixed hypothesis-satisfying corpus: acyclic hosts, complete looped
/// patterns, and rejection-filtered uniform instances, in rotation.
fn hypothesis_corpus(
    count: usize,
    base_seed: u64,
    max_vertices: usize,
    max_colours: usize,
    partition_blocks: Option<usize>,
) -> Vec<Generated> {
    (0..count)
        .map(|i| {
            let seed = base_seed.wrapping_add(i as u64);
            let strategy = match i % 3 {
                0 => Strategy::AcyclicHost,
                1 => Strategy::CompleteLoopedPattern,
                _ => Strategy::RejectionFiltered,
            };
            let params = GeneratorParams {
                n_vertices: 2 + (seed % (max_vertices as u64 - 1)) as usize,
                n_colours: 1 + (seed % max_colours as u64) as usize,
                arc_probability: 0.25 + (seed % 3) as f64 * 0.1,
                pattern_density: 0.5,
                strategy,
                seed,
                partition_blocks,
            };
            generate_instance(&params).expect("corpus generation within budget")
        })
        .collect()
}

#[test]
fn criterion_01_reachability_oracle_equivalence() {
    // Exhaustive: all 4096 loopless digraphs on 4 labelled vertices under a
    // fixed 2-colour pattern; all 2-colourings when |E| <= 6, two
    // deterministic colourings otherwise.
    let names = ["u", "v", "w", "x"];
    let pattern = PatternDigraph::from_arcs([], [("a", "a"), ("a", "b"), ("b", "a")]);
    let mut instances_checked = 0usize;
    let mut pairs_checked = 0usize;
    for arcs in common::all_loopless_digraphs(&names) {
        let m = arcs.len();
        let colourings: Vec<Vec<bool>> = if m <= 6 {
            (0u32..(1u32 << m))
                .map(|mask| (0..m).map(|i| mask & (1 << i) != 0).collect())
                .collect()
        } else {
            vec![
                (0..m).map(|i| i % 2 == 0).collect(),
                arcs.iter().map(|a| a.tail < a.head).collect(),
            ]
        };
        for picks in colourings {
            let colouring = Colouring::new(arcs.iter().zip(&picks).map(|(a, &second)| {
                (a.clone(), ColourId::from(if second { "b" } else { "a" }))
            }));
            let host = HostDigraph::new(names.map(VertexId::from), arcs.iter().cloned());
            let instance = ColouredInstance::new(host, pattern.clone(), colouring)
                .expect("well-formed");
            let enumerator = WalkEnumerator::new(&instance);
            let reach = HReach::new(&instance);
            for u in instance.host().vertices() {
                let expected = enumerator.reachable_from(u, m.max(1));
                for v in instance.host().vertices() {
                    assert_eq!(
                        reach.exists(u, v),
                        expected.contains(v),
                        "exhaustive: digraph {arcs:?}, pair {u} -> {v}"
                    );
                    pairs_checked += 1;
                }
            }
            // the one-shot query path on a sample of pairs
            if m <= 4 {
                for u in instance.host().vertices() {
                    for v in instance.host().vertices() {
                        assert_eq!(
                            h_walk_exists(&instance, u, v, None).unwrap(),
                            expected_pair(&enumerator, u, v, m),
                            "exhaustive single query: {arcs:?}, {u} -> {v}"
                        );
                    }
                }
            }
            instances_checked += 1;
        }
    }

    // 1,000 random instances with n <= 5 against the DP oracle.
    for seed in 0..1000u64 {
        let instance = random_instance(seed, 5, 3);
        let expected = oracle_reachable_pairs(&instance, None);
        for u in instance.host().vertices() {
            for v in instance.host().vertices() {
                assert_eq!(
                    h_walk_exists(&instance, u, v, None).unwrap(),
                    expected.contains(&(u.clone(), v.clone())),
                    "random: seed {seed}, pair {u} -> {v}"
                );
                pairs_checked += 1;
            }
        }
    }
    println!(
        "acceptance criterion 1 PASS — reachability matches naive enumeration on \
         {instances_checked} exhaustive instances and 1000 random instances \
         ({pairs_checked} pairs, zero disagreements)"
    );
}

fn expected_pair(enumerator: &WalkEnumerator, u: &VertexId, v: &VertexId, m: usize) -> bool {
    enumerator.reachable_from(u, m.max(1)).contains(v)
}

#[test]
fn criterion_02_closure_kernel_equivalence() {
    for seed in 0..500u64 {
        let instance = random_instance(seed, 5, 3);
        let closure = h_closure(&instance);
        let h_kernels = find_h_kernels_bruteforce(&instance, 8).unwrap();
        let closure_kernels = find_kernels_bruteforce(closure.digraph(), 8).unwrap();
        assert_eq!(h_kernels, closure_kernels, "seed {seed}");
    }
    println!(
        "acceptance criterion 2 PASS — H-kernel lists equal closure kernel lists on \
         500 random instances (zero mismatches)"
    );
}

#[test]
fn criterion_03_main_lemma_campaign() {
    let corpus = hypothesis_corpus(5000, 0x1e44a, 6, 3, None);
    for (i, generated) in corpus.iter().enumerate() {
        let instance = &generated.instance;
        let limit = CycleEnumerationLimit::default_for(instance.host());
        assert!(
            all_cycles_are_h_cycles(instance, &limit).unwrap(),
            "instance {i}: hypothesis filter unsound"
        );
        let closure = h_closure(instance);
        assert!(
            every_cycle_has_symmetric_arc(closure.digraph()),
            "instance {i}: closure cycle without symmetric arc — lemma counterexample:\n{}",
            serialize_instance(instance, None)
        );
    }
    println!(
        "acceptance criterion 3 PASS — symmetric-arc conclusion held on all 5000 \
         hypothesis-satisfying instances (zero counterexamples)"
    );
}

#[test]
fn criterion_04_theorem1_campaign() {
    let corpus = hypothesis_corpus(5000, 0x1e44a, 6, 3, None);
    for (i, generated) in corpus.iter().enumerate() {
        let instance = &generated.instance;
        let kernel = h_kernel_via_closure(instance).unwrap_or_else(|e| {
            panic!(
                "instance {i}: closure pipeline failed: {e}\n{}",
                serialize_instance(instance, None)
            )
        });
        assert!(
            is_h_kernel(instance, &kernel).unwrap(),
            "instance {i}: pipeline result fails the H-kernel definition"
        );
        let all = find_h_kernels_bruteforce(instance, 8).unwrap();
        assert!(
            all.contains(&kernel),
            "instance {i}: pipeline kernel missing from the brute-force list"
        );
    }
    println!(
        "acceptance criterion 4 PASS — closure pipeline produced a verified H-kernel \
         on all 5000 hypothesis-satisfying instances (zero failures)"
    );
}

#[test]
fn criterion_05_duchet_constructive_solver() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xd0c4e7);
    for case in 0..1000 {
        let n = rng.random_range(2..=12usize);
        let names: Vec<VertexId> = (0..n).map(|i| VertexId::new(format!("v{i:02}"))).collect();
        let mut arcs = ArcSet::new();
        // random DAG part
        for i in 0..n {
            for j in (i + 1)..n {
                if rng.random_bool(0.25) {
                    arcs.insert(Arc {
                        tail: names[i].clone(),
                        head: names[j].clone(),
                    });
                }
            }
        }
        // random symmetric pairs
        for _ in 0..n {
            let i = rng.random_range(0..n);
            let j = rng.random_range(0..n);
            if i != j {
                arcs.insert(Arc {
                    tail: names[i].clone(),
                    head: names[j].clone(),
                });
                arcs.insert(Arc {
                    tail: names[j].clone(),
                    head: names[i].clone(),
                });
            }
        }
        let digraph = HostDigraph::new(names.clone(), arcs);
        assert!(every_cycle_has_symmetric_arc(&digraph), "case {case}: construction");
        let kernel = kernel_constructive_symmetric(&digraph)
            .unwrap_or_else(|e| panic!("case {case}: solver failed: {e}"));
        assert!(
            is_kernel(&digraph, &kernel).unwrap(),
            "case {case}: greedy output is not a kernel"
        );
        if n <= 10 {
            let all = find_kernels_bruteforce(&digraph, 10).unwrap();
            assert!(all.contains(&kernel), "case {case}: not in brute-force list");
        }
    }
    println!(
        "acceptance criterion 5 PASS — greedy symmetric-arc solver returned a valid \
         kernel on all 1000 DAG-plus-symmetric-pairs digraphs (zero failures)"
    );
}

#[test]
fn criterion_06_symmetric_arc_predicate_exhaustive() {
    let names = ["a", "b", "c", "d"];
    let mut checked = 0usize;
    for arcs in common::all_loopless_digraphs(&names) {
        let digraph = HostDigraph::new(names.map(VertexId::from), arcs);
        let limit = CycleEnumerationLimit::default_for(&digraph);
        let via_enumeration = enumerate_simple_cycles(&digraph, &limit)
            .unwrap()
            .iter()
            .all(|cycle| cycle.arcs().any(|a| digraph.contains_arc(&a.reversed())));
        assert_eq!(
            every_cycle_has_symmetric_arc(&digraph),
            via_enumeration,
            "digraph #{checked}"
        );
        checked += 1;
    }
    assert_eq!(checked, 4096);
    println!(
        "acceptance criterion 6 PASS — asymmetric-part acyclicity agreed with direct \
         cycle enumeration on all 4096 loopless 4-vertex digraphs (zero disagreements)"
    );
}

#[test]
fn criterion_07_theorem2_campaign() {
    let corpus = hypothesis_corpus(2000, 0x7e02, 6, 3, Some(2));
    for (i, generated) in corpus.iter().enumerate() {
        let instance = &generated.instance;
        let partition = generated.partition.as_ref().expect("requested");
        // hypothesis re-check: every cycle of D2 is an H-cycle
        let (_, e2) = partition.pair().unwrap();
        let d2 = instance.restrict_arcs(e2).unwrap();
        let limit = CycleEnumerationLimit::default_for(d2.host());
        assert!(
            all_cycles_are_h_cycles(&d2, &limit).unwrap(),
            "instance {i}: D2 hypothesis unsound"
        );
        // the chase reports revisits as counterexample errors
        let vertex = find_singleton_semikernel(instance, partition).unwrap_or_else(|e| {
            panic!(
                "instance {i}: witness chase failed: {e}\n{}",
                serialize_instance(instance, Some(partition))
            )
        });
        let singleton = VertexSet::from([vertex]);
        assert!(
            is_h_semikernel_mod(instance, partition, &singleton).unwrap(),
            "instance {i}: returned singleton fails the semikernel definition"
        );
    }
    println!(
        "acceptance criterion 7 PASS — witness chase returned a validated singleton \
         H-semikernel without repetitions on all 2000 instances (zero failures)"
    );
}

#[test]
fn criterion_08_theorem3_campaign() {
    let options = VerifyOptions::default();
    let corpus = hypothesis_corpus(500, 0x7e03, 5, 3, Some(2));
    for (i, generated) in corpus.iter().enumerate() {
        let instance = &generated.instance;
        let partition = generated.partition.as_ref().expect("requested");
        let verdict = verify_claim(instance, Some(partition), Claim::Theorem3, &options)
            .unwrap_or_else(|e| panic!("instance {i}: verification error: {e}"));
        // hypothesis holds by construction, so the only acceptable status is
        // "holds"; a counterexample here is a finding against the
        // reconstructed semikernel-digraph arc rule
        assert_eq!(
            verdict.status,
            VerdictStatus::Holds,
            "instance {i}: semikernel digraph not acyclic under the reconstructed arc \
             rule — {}\n{}",
            verdict.detail,
            serialize_instance(instance, Some(partition))
        );
    }
    println!(
        "acceptance criterion 8 PASS — semikernel digraph acyclic under the \
         reconstructed arc rule on all 500 instances (zero failures)"
    );
}

#[test]
fn criterion_09_theorem4_pipeline() {
    let mut accepted: Vec<(ColouredInstance, ArcPartition)> = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0x7e04);
    // 2 colours keep every instance rainbow-free; degenerate partitions
    // always respect H-walks, random ones are kept when they do
    for i in 0..150u64 {
        let generated = hypothesis_corpus(1, 0x7e04_0000 + i, 5, 2, None)
            .into_iter()
            .next()
            .unwrap();
        let instance = generated.instance;
        let all_arcs = instance.host().arcs().clone();
        let mut candidates = vec![
            ArcPartition::two(all_arcs.clone(), ArcSet::new()).unwrap(),
            ArcPartition::two(ArcSet::new(), all_arcs.clone()).unwrap(),
        ];
        let random_split: ArcSet = all_arcs
            .iter()
            .filter(|_| rng.random_bool(0.5))
            .cloned()
            .collect();
        let complement: ArcSet = all_arcs.difference(&random_split).cloned().collect();
        candidates.push(ArcPartition::two(random_split, complement).unwrap());
        for partition in candidates {
            if check_theorem4_hypotheses(&instance, &partition).is_ok() {
                accepted.push((instance.clone(), partition));
            }
        }
    }
    assert!(
        accepted.len() >= 200,
        "only {} hypothesis-satisfying pairs found",
        accepted.len()
    );
    for (i, (instance, partition)) in accepted.iter().enumerate() {
        let kernel = h_kernel_via_theorem4(instance, partition, 8).unwrap_or_else(|e| {
            panic!(
                "pair {i}: pipeline failed: {e}\n{}",
                serialize_instance(instance, Some(partition))
            )
        });
        assert!(
            is_h_kernel(instance, &kernel).unwrap(),
            "pair {i}: pipeline result fails the H-kernel definition"
        );
        let all = find_h_kernels_bruteforce(instance, 8).unwrap();
        assert!(all.contains(&kernel), "pair {i}: not in brute-force list");
    }
    println!(
        "acceptance criterion 9 PASS — partitioned pipeline produced a verified \
         H-kernel on all {} hypothesis-satisfying pairs (zero failures)",
        accepted.len()
    );
}

#[test]
fn criterion_10_monochromatic_specialization() {
    for seed in 0..500u64 {
        let base = random_instance(seed, 5, 3);
        let pattern = PatternDigraph::loops_only(base.pattern().vertices().iter().cloned());
        let instance =
            ColouredInstance::new(base.host().clone(), pattern, base.colouring().clone())
                .expect("well-formed");
        let via_walks = find_h_kernels_bruteforce(&instance, 8).unwrap();
        let via_mono_paths = common::oracle_mono_kernels(&instance);
        assert_eq!(via_walks, via_mono_paths, "seed {seed}");
    }
    println!(
        "acceptance criterion 10 PASS — H-kernels under loops-only patterns equal \
         kernels by monochromatic paths on 500 random instances (zero disagreements)"
    );
}

#[test]
fn criterion_11_round_trip_and_determinism() {
    // parse/serialize identity on 1000 generated instances
    for seed in 0..1000u64 {
        let params = GeneratorParams {
            n_vertices: 1 + (seed % 6) as usize,
            n_colours: 1 + (seed % 3) as usize,
            arc_probability: 0.4,
            pattern_density: 0.5,
            strategy: match seed % 4 {
                0 => Strategy::Uniform,
                1 => Strategy::AcyclicHost,
                2 => Strategy::CompleteLoopedPattern,
                _ => Strategy::RejectionFiltered,
            },
            seed,
            partition_blocks: if seed % 2 == 0 { Some(2) } else { None },
        };
        let generated = generate_instance(&params).unwrap();
        let document = serialize_instance(&generated.instance, generated.partition.as_ref());
        let (instance, partition) = parse_instance(&document).unwrap();
        assert_eq!(instance, generated.instance, "seed {seed}");
        assert_eq!(partition, generated.partition, "seed {seed}");
    }

    // identical campaign reports (modulo timing) for identical seeds
    let config = CampaignConfig {
        claims: vec![Claim::Lemma, Claim::Theorem1, Claim::Theorem2],
        instances: 30,
        workers: 2,
        generators: vec![
            GeneratorParams {
                n_vertices: 5,
                n_colours: 2,
                arc_probability: 0.35,
                pattern_density: 0.5,
                strategy: Strategy::RejectionFiltered,
                seed: 99,
                partition_blocks: Some(2),
            },
            GeneratorParams {
                n_vertices: 5,
                n_colours: 3,
                arc_probability: 0.3,
                pattern_density: 0.5,
                strategy: Strategy::AcyclicHost,
                seed: 100,
                partition_blocks: Some(2),
            },
        ],
    };
    let first = run_campaign(&config).unwrap();
    let second = run_campaign(&config).unwrap();
    assert_eq!(first.canonical_text(), second.canonical_text());
    let strip = |report: &hcd::harness::CampaignReport| {
        let mut value = serde_json::to_value(report).expect("serializes");
        value
            .as_object_mut()
            .expect("object")
            .remove("wall_clock_seconds");
        value
    };
    assert_eq!(strip(&first), strip(&second));
    assert_eq!(first.counterexample_count(), 0);

    println!(
        "acceptance criterion 11 PASS — 1000 instances round-tripped bit-exactly and \
         repeated campaigns matched modulo timing"
    );
}

/// The replay-soundness contract: a counterexample witness, parsed back and
/// re-verified, reproduces its violating status. Uses the one claim with
/// reliably constructible counterexamples.
#[test]
fn counterexample_witnesses_replay() {
    let mut replayed = 0;
    for seed in 0..400u64 {
        let instance = random_instance(seed, 6, 4);
        let options = VerifyOptions::default();
        let verdict = verify_claim(&instance, None, Claim::WalkImpliesPath, &options).unwrap();
        if verdict.status != VerdictStatus::Counterexample {
            continue;
        }
        let witness = verdict.witness.expect("counterexamples carry witnesses");
        let (reparsed, _) = parse_instance(&witness.document).unwrap();
        let again = verify_claim(&reparsed, None, Claim::WalkImpliesPath, &options).unwrap();
        assert_eq!(again.status, VerdictStatus::Counterexample, "seed {seed}");
        replayed += 1;
    }
    assert!(replayed > 0, "no walk-implies-path counterexamples found at all");
    println!(
        "replay soundness PASS — {replayed} counterexample witnesses reproduced their \
         status after a parse round trip"
    );
}

/// Exhaustive closure-kernel equivalence on every subset, small scale: the
/// bridge identity behind the whole kernel pipeline.
#[test]
fn closure_equivalence_exhaustive_over_subsets() {
    for seed in 0..120u64 {
        let instance = random_instance(seed, 5, 2);
        let closure = h_closure(&instance);
        let vertices: Vec<&VertexId> = instance.host().vertices().iter().collect();
        for mask in 0u32..(1u32 << vertices.len()) {
            let candidate: VertexSet = vertices
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, v)| (*v).clone())
                .collect();
            assert_eq!(
                is_h_kernel(&instance, &candidate).unwrap(),
                is_kernel(closure.digraph(), &candidate).unwrap(),
                "seed {seed}, candidate {candidate:?}"
            );
        }
    }
    println!("closure equivalence PASS — exhaustive over all subsets, 120 instances");
}

/// Spot check that the harness strategies cover what the campaigns assume.
#[test]
fn corpus_builder_is_hypothesis_sound() {
    let corpus = hypothesis_corpus(60, 0xc0de, 6, 3, Some(2));
    let mut strategies = BTreeSet::new();
    for generated in &corpus {
        let instance = &generated.instance;
        let limit = CycleEnumerationLimit::default_for(instance.host());
        assert!(all_cycles_are_h_cycles(instance, &limit).unwrap());
        strategies.insert(format!("{:?}", instance.host().arc_count() % 3));
        generated
            .partition
            .as_ref()
            .expect("requested")
            .check_against(instance.host())
            .unwrap();
    }
    assert!(!strategies.is_empty());
}
