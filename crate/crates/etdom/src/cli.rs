//! Command-line front end. [`execute`] is the whole program minus process
//! plumbing, so tests can drive it with in-memory streams.

use std::io::{Read, Write};
use std::path::PathBuf;
use std::sync::Arc;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use etdom_core::defense::initial_canonical_config;
use etdom_core::attack::AttackError;
use etdom_core::engine::{
    smallest_unoccupied, AttackStrategy, CanonicalDefender, DefenseStrategy, StrategyError, TheoremAttacker, Turn,
};
use etdom_core::oracle::{oracle_edn, safe_configs, Budget, OracleDefender, SafeSet};
use etdom_core::tree::Vertex;
use etdom_core::{play_game, Analysis, AttackerState, GameTrace, GuardConfig, Tree};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cache::SafeSetCache;
use crate::format::{parse_edge_list, serialize_tree, write_reduction_log};
use crate::json::{AttackJson, GameTraceJson, NeocolJson};
use crate::strategies::{RandomAttacker, RandomDefender};
use crate::verify::{check_trees, random_corpus, AttackSample};

#[derive(Debug, Parser)]
#[command(name = "etdom", version, about = "Eternal domination on trees")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the eternal domination number.
    Edn {
        /// Tree in wire format; `-` reads stdin.
        file: PathBuf,
        /// Also print the reduction log.
        #[arg(long)]
        trace: bool,
    },
    /// Print the nice neo-colonization and the L/J/I classes.
    Neocol {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Play the theorem attacker against a defender holding the given guards.
    Attack {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        guards: Vec<Vertex>,
        #[arg(long, value_enum, default_value_t = DefenderKind::Canonical)]
        defender: DefenderKind,
        /// Print the attacker's reasoning for every turn.
        #[arg(long)]
        explain: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Play a game between two chosen strategies.
    Simulate {
        file: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        turns: usize,
        #[arg(long, value_enum, default_value_t = AttackerKind::Theorem)]
        attacker: AttackerKind,
        #[arg(long, value_enum, default_value_t = DefenderKind::Canonical)]
        defender: DefenderKind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Brute-force EDN, or the safe configurations for `--k` guards.
    Oracle {
        file: PathBuf,
        #[arg(long)]
        k: Option<usize>,
        /// Directory for cached safe sets.
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// Cross-check everything against the oracle.
    Verify {
        #[arg(long)]
        max_n: usize,
        #[arg(long, conflicts_with = "random")]
        exhaustive: bool,
        #[arg(long, value_name = "COUNT")]
        random: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Generate trees in wire format, separated by blank lines.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// All non-isomorphic trees with 1..=n vertices.
        #[arg(long)]
        exhaustive: bool,
    },
    /// Run the game service.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DefenderKind {
    Canonical,
    Oracle,
    Random,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum AttackerKind {
    Theorem,
    Random,
}

/// Runs one command. Returns 0 on success, 1 on a domain error (bad input,
/// failed verification, oracle budget) and 2 on a usage error.
pub fn execute<I, S>(argv: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                stdout.write_all(text.as_bytes())
            } else {
                stderr.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match run(cli.command, stdin, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e:#}");
            1
        }
    }
}

fn read_tree(file: &PathBuf, stdin: &mut dyn Read) -> anyhow::Result<Tree> {
    let mut bytes = Vec::new();
    if file.as_os_str() == "-" {
        stdin.read_to_end(&mut bytes).context("reading stdin")?;
    } else {
        bytes = std::fs::read(file).with_context(|| format!("reading {}", file.display()))?;
    }
    parse_edge_list(&bytes).with_context(|| format!("parsing {}", file.display()))
}

fn json_line(out: &mut dyn Write, value: &impl serde::Serialize) -> anyhow::Result<()> {
    serde_json::to_writer(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn run(cmd: Command, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> anyhow::Result<i32> {
    match cmd {
        Command::Edn { file, trace } => {
            let t = read_tree(&file, stdin)?;
            let an = Analysis::new(t);
            writeln!(out, "{}", an.edn())?;
            if trace {
                out.write_all(write_reduction_log(&an.trace).as_bytes())?;
            }
        }
        Command::Neocol { file, json } => {
            let an = Analysis::new(read_tree(&file, stdin)?);
            let summary = NeocolJson::new(&an);
            if json {
                json_line(out, &summary)?;
            } else {
                writeln!(out, "root {} edn {}", summary.root, summary.edn)?;
                for (i, p) in summary.parts.iter().enumerate() {
                    let vs: Vec<String> = p.vertices.iter().map(|v| v.to_string()).collect();
                    writeln!(out, "part {i}: top {} weight {} vertices {}", p.top, p.weight, vs.join(","))?;
                }
                writeln!(out, "classes {}", summary.classes.concat())?;
            }
        }
        Command::Attack {
            file,
            guards,
            defender,
            explain,
            seed,
        } => {
            let an = Analysis::new(read_tree(&file, stdin)?);
            let mut c0 = GuardConfig::new();
            for &g in &guards {
                if g >= an.n() {
                    bail!("guard on nonexistent vertex {g}");
                }
                if !c0.insert(g) {
                    bail!("vertex {g} listed twice in --guards");
                }
            }
            if c0.len() >= an.edn() {
                writeln!(
                    err,
                    "note: {} guards is not below EDN {}; the attacker has no guaranteed win",
                    c0.len(),
                    an.edn()
                )?;
            }
            let safe = oracle_for(defender, an.tree(), c0.len())?;
            let mut attacker = ExplainingAttacker::new(&an);
            let mut def = make_defender(defender, &an, safe.as_ref(), seed);
            let max_turns = an.n().max(1);
            let g = play_game(an.tree(), &mut attacker, def.as_mut(), c0, max_turns)?;
            if explain {
                for d in &attacker.log {
                    json_line(out, d)?;
                }
            }
            json_line(out, &GameTraceJson::from(&g))?;
        }
        Command::Simulate {
            file,
            k,
            turns,
            attacker,
            defender,
            seed,
        } => {
            let an = Analysis::new(read_tree(&file, stdin)?);
            if k > an.n() {
                bail!("k = {k} exceeds n = {}", an.n());
            }
            if turns == 0 {
                bail!("--turns must be at least 1");
            }
            let safe = oracle_for(defender, an.tree(), k)?;
            let c0 = initial_config(defender, &an, k, safe.as_ref(), seed);
            let mut att: Box<dyn AttackStrategy> = match attacker {
                AttackerKind::Theorem => Box::new(TheoremAttacker::new(&an)),
                AttackerKind::Random => Box::new(RandomAttacker::new(an.n(), ChaCha8Rng::seed_from_u64(seed))),
            };
            let mut def = make_defender(defender, &an, safe.as_ref(), seed.wrapping_add(1));
            let g: GameTrace = play_game(an.tree(), att.as_mut(), def.as_mut(), c0, turns)?;
            json_line(out, &GameTraceJson::from(&g))?;
        }
        Command::Oracle { file, k, cache } => {
            let t = read_tree(&file, stdin)?;
            match k {
                None => writeln!(out, "{}", oracle_edn(&t)?)?,
                Some(k) => {
                    let masks: Vec<u32> = match cache {
                        Some(dir) => SafeSetCache::new(dir).get_or_compute(&t, k, Budget::default())?,
                        None => safe_configs(&t, k)?.safe_masks().collect(),
                    };
                    writeln!(out, "{} safe configurations of {k} guards", masks.len())?;
                    for m in masks {
                        let c = GuardConfig::from_mask(m);
                        let vs: Vec<String> = c.iter().map(|v| v.to_string()).collect();
                        writeln!(out, "{}", vs.join(","))?;
                    }
                }
            }
        }
        Command::Verify {
            max_n,
            exhaustive,
            random,
            seed,
        } => {
            let budget = Budget::default();
            if max_n > budget.max_n {
                bail!("--max-n {max_n} exceeds the oracle limit of {}", budget.max_n);
            }
            let trees = match random {
                Some(count) => random_corpus(max_n, count, seed),
                None => {
                    // `--exhaustive` is the default mode.
                    let _ = exhaustive;
                    (2..=max_n).flat_map(etdom_core::enumerate::nonisomorphic_trees).collect()
                }
            };
            let reports = check_trees(&trees, AttackSample::default(), seed);
            let mut failed = 0;
            let mut games = 0;
            for r in &reports {
                games += r.games;
                if !r.passed() {
                    failed += 1;
                    let text = serialize_tree(&r.tree).replace('\n', " ");
                    for f in &r.failures {
                        writeln!(out, "FAIL [{}] {f}", text.trim_end())?;
                    }
                }
            }
            let verdict = if failed == 0 { "PASS" } else { "FAIL" };
            writeln!(
                out,
                "{verdict}: {} trees, {failed} failing, {games} attacker games",
                reports.len()
            )?;
            return Ok(if failed == 0 { 0 } else { 1 });
        }
        Command::Gen {
            n,
            count,
            seed,
            exhaustive,
        } => {
            if n == 0 {
                bail!("--n must be at least 1");
            }
            let trees = if exhaustive {
                crate::gen::exhaustive(n)
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                (0..count).map(|_| crate::gen::random_tree(n, &mut rng)).collect()
            };
            for (i, t) in trees.iter().enumerate() {
                if i > 0 {
                    writeln!(out)?;
                }
                out.write_all(serialize_tree(t).as_bytes())?;
            }
        }
        Command::Serve { port } => {
            let rt = tokio::runtime::Runtime::new()?;
            rt.block_on(crate::service::serve(port, Arc::new(Default::default())))?;
        }
    }
    Ok(0)
}

fn oracle_for(kind: DefenderKind, t: &Tree, k: usize) -> anyhow::Result<Option<SafeSet>> {
    Ok(match kind {
        DefenderKind::Oracle => Some(safe_configs(t, k).context("oracle defender")?),
        _ => None,
    })
}

/// Starting guards for `simulate`: the canonical placement (trimmed or padded
/// with the smallest free vertices when `k` differs from EDN), the oracle's
/// best configuration, or a random one.
fn initial_config(kind: DefenderKind, an: &Analysis, k: usize, safe: Option<&SafeSet>, seed: u64) -> GuardConfig {
    match kind {
        DefenderKind::Canonical => {
            let (canon, _) = initial_canonical_config(an);
            let mut c: GuardConfig = canon.iter().take(k).collect();
            for v in 0..an.n() {
                if c.len() == k {
                    break;
                }
                c.insert(v);
            }
            c
        }
        DefenderKind::Oracle => safe.expect("oracle built").best_config(),
        DefenderKind::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            sample(&mut rng, an.n(), k).into_iter().collect()
        }
    }
}

fn make_defender<'a>(
    kind: DefenderKind,
    an: &'a Analysis,
    safe: Option<&'a SafeSet>,
    seed: u64,
) -> Box<dyn DefenseStrategy + 'a> {
    match kind {
        DefenderKind::Canonical => Box::new(CanonicalDefender::new(an)),
        DefenderKind::Oracle => Box::new(OracleDefender::new(safe.expect("oracle built"))),
        DefenderKind::Random => Box::new(RandomDefender::new(an.tree(), ChaCha8Rng::seed_from_u64(seed))),
    }
}

/// The theorem attacker, keeping each turn's diagnostic. Falls back to the
/// smallest unoccupied vertex when the defender has EDN or more guards.
struct ExplainingAttacker<'a> {
    an: &'a Analysis,
    state: AttackerState,
    log: Vec<AttackJson>,
}

impl<'a> ExplainingAttacker<'a> {
    fn new(an: &'a Analysis) -> Self {
        ExplainingAttacker {
            an,
            state: AttackerState::new(),
            log: Vec::new(),
        }
    }
}

impl AttackStrategy for ExplainingAttacker<'_> {
    fn attack(&mut self, config: &GuardConfig, _turns: &[Turn]) -> Result<Vertex, StrategyError> {
        let mut probe = self.state.clone();
        match probe.explain(self.an, config) {
            Ok(diag) => {
                self.state = probe;
                let j = AttackJson::new(diag.as_ref(), self.an.rooted.root());
                let b = j.b;
                self.log.push(j);
                Ok(b)
            }
            Err(AttackError::NoDeficientVertex) => {
                let b = smallest_unoccupied(self.an.n(), config);
                self.log.push(AttackJson {
                    a: None,
                    deficits: None,
                    v: None,
                    x: None,
                    d: None,
                    b,
                    verdict: "fallback".into(),
                });
                Ok(b)
            }
            Err(e) => Err(StrategyError(e.to_string())),
        }
    }
}
