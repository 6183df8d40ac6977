//! Deterministic coverage-guided fuzz loop: mutate byte inputs, translate
//! them into vector sets, run them on a coverage-enabled runner, and keep
//! inputs that discover new branches.

use std::collections::BTreeSet;

use serde_json::{json, Value};

use acvp_core::generator::{translate, TargetSpec, MAX_INPUT_BYTES};
use acvp_core::rng::SplitMix64;

use crate::protocol::{spawn_runner, RunnerReply};

#[derive(Debug, Clone)]
pub struct FuzzConfig {
    pub seed: u64,
    pub budget: u64,
    pub max_input_size: usize,
    pub restrictions_enabled: bool,
    pub timeout_ms: u64,
    pub spec: TargetSpec,
}

impl FuzzConfig {
    pub fn new(seed: u64, budget: u64, spec: TargetSpec, restrictions_enabled: bool) -> Self {
        FuzzConfig {
            seed,
            budget,
            max_input_size: MAX_INPUT_BYTES,
            restrictions_enabled,
            timeout_ms: crate::protocol::DEFAULT_TIMEOUT_MS,
            spec,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusEntry {
    pub input: Vec<u8>,
    /// Branch ids this entry discovered (absent from all earlier entries).
    pub new_branches: BTreeSet<String>,
    pub iteration: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrashRecord {
    pub iteration: u64,
    pub input: Vec<u8>,
    pub failure_kind: String,
    pub failure: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct FuzzStats {
    pub iterations: u64,
    pub branches: BTreeSet<String>,
    pub corpus_size: usize,
    pub crashes: Vec<CrashRecord>,
    /// Set when the loop stopped before its budget (runner unrespawnable).
    pub aborted: Option<String>,
}

impl FuzzStats {
    pub fn to_json(&self) -> Value {
        json!({
            "iterations": self.iterations,
            "branchesCovered": self.branches.len(),
            "corpusSize": self.corpus_size,
            "crashes": self.crashes.iter().map(|c| json!({
                "iteration": c.iteration,
                "input": hex::encode_upper(&c.input),
                "kind": c.failure_kind,
                "failure": c.failure,
            })).collect::<Vec<_>>(),
            "aborted": self.aborted,
        })
    }
}

// ---------------------------------------------------------------------------
// Mutation

/// One mutation step: bit flip, byte overwrite, truncate, extend, or splice
/// with an entry from `splice_pool`. Deterministic given the RNG state.
pub fn mutate(
    input: &[u8],
    rng: &mut SplitMix64,
    splice_pool: &[Vec<u8>],
    max_len: usize,
) -> Vec<u8> {
    let mut out = input.to_vec();
    let op = rng.next_below(5);
    match op {
        0 => {
            // single bit flip
            if out.is_empty() {
                out.push(rng.next_u64() as u8);
            } else {
                let bit = rng.next_below(out.len() as u64 * 8) as usize;
                out[bit / 8] ^= 0x80 >> (bit % 8);
            }
        }
        1 => {
            // byte overwrite
            let byte = rng.next_u64() as u8;
            if out.is_empty() {
                out.push(byte);
            } else {
                let idx = rng.next_below(out.len() as u64) as usize;
                out[idx] = byte;
            }
        }
        2 => {
            // truncate (no-op on empty input)
            let new_len = rng.next_below(out.len() as u64 + 1) as usize;
            out.truncate(new_len);
        }
        3 => {
            // extend with random bytes
            let n = 1 + rng.next_below(16) as usize;
            for _ in 0..n {
                out.push(rng.next_u64() as u8);
            }
        }
        _ => {
            // splice with a pool entry; degenerates to extend when the pool
            // is empty so the op count stays fixed
            if splice_pool.is_empty() {
                let n = 1 + rng.next_below(16) as usize;
                for _ in 0..n {
                    out.push(rng.next_u64() as u8);
                }
            } else {
                let other = &splice_pool[rng.next_below(splice_pool.len() as u64) as usize];
                let cut_a = rng.next_below(out.len() as u64 + 1) as usize;
                let cut_b = rng.next_below(other.len() as u64 + 1) as usize;
                out.truncate(cut_a);
                out.extend_from_slice(&other[cut_b..]);
            }
        }
    }
    out.truncate(max_len);
    out
}

// ---------------------------------------------------------------------------
// The loop

/// Runs the fuzz loop to its budget. The runner is spawned with coverage
/// enabled; crashes and other failures are recorded and the runner is
/// respawned. Fully deterministic for a fixed (seed, budget, spec, runner).
pub fn fuzz_loop(
    config: &FuzzConfig,
    command: &str,
    args: &[String],
) -> Result<(Vec<CorpusEntry>, FuzzStats), String> {
    let mut session =
        spawn_runner(command, args, config.timeout_ms, true).map_err(|e| e.to_string())?;
    let mut rng = SplitMix64::new(config.seed);
    let mut corpus: Vec<CorpusEntry> = Vec::new();
    let mut covered: BTreeSet<String> = BTreeSet::new();
    let mut stats = FuzzStats::default();

    for iteration in 0..config.budget {
        stats.iterations = iteration + 1;
        let base: &[u8] = if corpus.is_empty() {
            &[]
        } else {
            // round-robin scheduling over the corpus
            &corpus[(iteration % corpus.len() as u64) as usize].input
        };
        let pool: Vec<Vec<u8>> = corpus.iter().map(|e| e.input.clone()).collect();
        let input = mutate(base, &mut rng, &pool, config.max_input_size);
        let vs = translate(&input, config.spec, config.restrictions_enabled);

        match session.run_vector_set(&vs) {
            Ok(RunnerReply::Responses(_)) => {
                let new: BTreeSet<String> = session
                    .coverage_report()
                    .branch_ids
                    .difference(&covered)
                    .cloned()
                    .collect();
                if !new.is_empty() {
                    covered.extend(new.iter().cloned());
                    corpus.push(CorpusEntry { input, new_branches: new, iteration });
                }
            }
            Ok(RunnerReply::Refused { .. }) => {}
            Err(failure) => {
                stats.crashes.push(CrashRecord {
                    iteration,
                    input,
                    failure_kind: failure.kind_name().to_string(),
                    failure: failure.to_string(),
                });
                match spawn_runner(command, args, config.timeout_ms, true) {
                    Ok(fresh) => session = fresh,
                    Err(e) => {
                        stats.aborted = Some(format!("runner respawn failed: {e}"));
                        break;
                    }
                }
            }
        }
    }
    session.close();

    stats.branches = covered;
    stats.corpus_size = corpus.len();
    Ok((corpus, stats))
}

/// Greedy set-cover pass over the recorded discovery sets: the result
/// covers the same branch union and contains no entry whose branches are
/// covered by the others.
pub fn minimize_corpus(corpus: &[CorpusEntry]) -> Vec<CorpusEntry> {
    let target: BTreeSet<String> = corpus
        .iter()
        .flat_map(|e| e.new_branches.iter().cloned())
        .collect();

    // greedy: repeatedly take the entry adding the most uncovered branches
    let mut chosen: Vec<CorpusEntry> = Vec::new();
    let mut covered: BTreeSet<String> = BTreeSet::new();
    let mut remaining: Vec<&CorpusEntry> = corpus.iter().collect();
    while covered != target {
        let (idx, _) = remaining
            .iter()
            .enumerate()
            .map(|(i, e)| (i, e.new_branches.difference(&covered).count()))
            .max_by_key(|&(i, gain)| (gain, std::cmp::Reverse(i)))
            .expect("target is the union of entries");
        let entry = remaining.remove(idx);
        if entry.new_branches.difference(&covered).count() == 0 {
            break;
        }
        covered.extend(entry.new_branches.iter().cloned());
        chosen.push(entry.clone());
    }

    // elimination: drop any entry whose set the others still cover
    loop {
        let mut removed = false;
        for i in 0..chosen.len() {
            let others: BTreeSet<&String> = chosen
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .flat_map(|(_, e)| e.new_branches.iter())
                .collect();
            if chosen[i].new_branches.iter().all(|b| others.contains(b)) {
                chosen.remove(i);
                removed = true;
                break;
            }
        }
        if !removed {
            break;
        }
    }
    chosen.sort_by_key(|e| e.iteration);
    chosen
}
