//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use etdom::gen::random_tree;
use etdom::strategies::RandomAttacker;
use etdom::verify::{attacker_game, explore_canonical, k_subsets};
use etdom_core::defense::initial_canonical_config;
use etdom_core::engine::{cover_greedily, reachable, transition_move, validate_defense, CanonicalDefender};
use etdom_core::enumerate::nonisomorphic_trees;
use etdom_core::neocol::{build_nice_neocol, validate_nice};
use etdom_core::oracle::{oracle_edn, safe_configs};
use etdom_core::reduction::reduce;
use etdom_core::tree::{RootedTree, Vertex};
use etdom_core::{compute_edn, play_game, Analysis, AttackerState, Defense, DefenseMove, GuardConfig, Outcome, Tree};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

struct Verdict {
    ok: bool,
    detail: String,
}

fn verdict(ok: bool, detail: impl Into<String>) -> Verdict {
    Verdict { ok, detail: detail.into() }
}

fn corpus(lo: usize, hi: usize) -> Vec<Tree> {
    (lo..=hi).flat_map(nonisomorphic_trees).collect()
}

fn describe(t: &Tree) -> String {
    format!("n={} edges={:?}", t.n(), t.edges())
}

fn edn_cross_validation() -> Verdict {
    let trees = corpus(2, 9);
    let bad: Vec<String> = trees
        .par_iter()
        .filter_map(|t| {
            let (edn, _) = compute_edn(t);
            match oracle_edn(t) {
                Ok(o) if o == edn => None,
                Ok(o) => Some(format!("{}: reduction {edn}, oracle {o}", describe(t))),
                Err(e) => Some(format!("{}: {e}", describe(t))),
            }
        })
        .collect();
    verdict(
        bad.is_empty(),
        format!("{} trees n=2..9, {} mismatches {:?}", trees.len(), bad.len(), bad.first()),
    )
}

fn nice_neocolonization() -> Verdict {
    let mut trees = corpus(2, 9);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..200 {
        let n = rng.gen_range(2..=60);
        trees.push(random_tree(n, &mut rng));
    }
    let bad: Vec<String> = trees
        .par_iter()
        .filter_map(|t| {
            let an = Analysis::new(t.clone());
            let report = validate_nice(&an.neocol, &an.rooted);
            if !report.passed() {
                return Some(format!("{}: {}", describe(t), report.describe()));
            }
            let total = an.neocol.total_weight();
            (total != an.edn()).then(|| format!("{}: total weight {total} vs EDN {}", describe(t), an.edn()))
        })
        .collect();
    verdict(
        bad.is_empty(),
        format!("{} trees, {} failures {:?}", trees.len(), bad.len(), bad.first()),
    )
}

/// Criteria 3 and 4 share their games.
struct GameStats {
    games: usize,
    over_diameter: Vec<String>,
    over_n: Vec<String>,
    lost: Vec<String>,
}

fn attacker_games() -> GameStats {
    let mut jobs: Vec<(Tree, Vec<GuardConfig>)> = corpus(2, 8)
        .into_iter()
        .map(|t| {
            let k = compute_edn(&t).0 - 1;
            let n = t.n();
            (t, k_subsets(n, k))
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for t in corpus(9, 10) {
        let n = t.n();
        let k = compute_edn(&t).0 - 1;
        let configs = (0..50).map(|_| sample(&mut rng, n, k).into_iter().collect()).collect();
        jobs.push((t, configs));
    }
    let per_tree: Vec<GameStats> = jobs
        .par_iter()
        .map(|(t, configs)| {
            let an = Analysis::new(t.clone());
            let diam = t.diameter();
            let mut s = GameStats {
                games: 0,
                over_diameter: vec![],
                over_n: vec![],
                lost: vec![],
            };
            let safe = match safe_configs(t, an.edn() - 1) {
                Ok(safe) => safe,
                Err(e) => {
                    s.lost.push(format!("{}: {e}", describe(t)));
                    return s;
                }
            };
            for c in configs {
                s.games += 1;
                match attacker_game(&an, &safe, c) {
                    Ok(Outcome::AttackerWins(turn)) => {
                        if turn > diam {
                            s.over_diameter.push(format!("{} from {c}: {turn} > diam {diam}", describe(t)));
                        }
                        if turn > t.n() {
                            s.over_n.push(format!("{} from {c}: {turn} > n", describe(t)));
                        }
                    }
                    other => s.lost.push(format!("{} from {c}: {other:?}", describe(t))),
                }
            }
            s
        })
        .collect();
    per_tree.into_iter().fold(
        GameStats {
            games: 0,
            over_diameter: vec![],
            over_n: vec![],
            lost: vec![],
        },
        |mut acc, s| {
            acc.games += s.games;
            acc.over_diameter.extend(s.over_diameter);
            acc.over_n.extend(s.over_n);
            acc.lost.extend(s.lost);
            acc
        },
    )
}

fn canonical_soundness() -> Verdict {
    let trees = corpus(1, 9);
    let exhaustive: Vec<String> = trees
        .par_iter()
        .filter_map(|t| {
            let an = Analysis::new(t.clone());
            let safe = match safe_configs(t, an.edn()) {
                Ok(s) => s,
                Err(e) => return Some(format!("{}: {e}", describe(t))),
            };
            let mut bad = None;
            let walk = explore_canonical(&an, |c| {
                if !safe.is_safe(c) {
                    bad = Some(format!("{}: reaches unsafe {c}", describe(t)));
                }
                bad.is_none()
            });
            match walk {
                Err(e) => Some(format!("{}: {e}", describe(t))),
                Ok(_) => bad,
            }
        })
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let random_trees: Vec<(Tree, u64)> = (0..100)
        .map(|_| {
            let n = rng.gen_range(2..=40);
            (random_tree(n, &mut rng), rng.gen())
        })
        .collect();
    let lost: Vec<String> = random_trees
        .par_iter()
        .flat_map_iter(|(t, seed)| {
            let an = Analysis::new(t.clone());
            let mut out = Vec::new();
            for s in 0..5 {
                let (c0, _) = initial_canonical_config(&an);
                let mut att = RandomAttacker::new(t.n(), ChaCha8Rng::seed_from_u64(seed.wrapping_add(s)));
                let mut def = CanonicalDefender::new(&an);
                match play_game(t, &mut att, &mut def, c0, 50) {
                    Ok(g) if g.outcome == Outcome::DefenderSurvived(50) => {}
                    other => out.push(format!("{}: {other:?}", describe(t))),
                }
            }
            out
        })
        .collect();
    verdict(
        exhaustive.is_empty() && lost.is_empty(),
        format!(
            "{} trees n<=9 all reachable configs safe ({} failures); 500 random sequences x 50 attacks, {} lost {:?}",
            trees.len(),
            exhaustive.len(),
            lost.len(),
            exhaustive.first().or(lost.first())
        ),
    )
}

/// Every way of giving each guard a destination (itself or a neighbour)
/// without two guards sharing one; the resulting configurations.
fn brute_successors(t: &Tree, c: &[Vertex]) -> Vec<GuardConfig> {
    fn go(t: &Tree, c: &[Vertex], i: usize, taken: &mut Vec<Vertex>, out: &mut Vec<GuardConfig>) {
        if i == c.len() {
            out.push(taken.iter().copied().collect());
            return;
        }
        let g = c[i];
        for w in std::iter::once(g).chain(t.neighbors(g).iter().copied()) {
            if !taken.contains(&w) {
                taken.push(w);
                go(t, c, i + 1, taken, out);
                taken.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(t, c, 0, &mut Vec::new(), &mut out);
    out.sort();
    out.dedup();
    out
}

fn move_legality() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut disagreements = Vec::new();
    let mut reachable_count = 0;
    for i in 0..1000 {
        let n = rng.gen_range(2..=8);
        let t = random_tree(n, &mut rng);
        let k = rng.gen_range(1..=n.min(6));
        let c: Vec<Vertex> = sample(&mut rng, n, k).into_iter().collect();
        let config: GuardConfig = c.iter().copied().collect();
        let succ = brute_successors(&t, &c);
        // Half the targets are known successors, half arbitrary k-subsets.
        let next: GuardConfig = if i % 2 == 0 {
            succ[rng.gen_range(0..succ.len())].clone()
        } else {
            sample(&mut rng, n, k).into_iter().collect()
        };
        let a = rng.gen_range(0..n);
        let brute = succ.contains(&next) && next.contains(a);
        let matched = reachable(&t, &config, &next) && next.contains(a);
        let via_move = transition_move(&t, &config, &next).is_some_and(|mv| validate_defense(&t, &config, &mv, a));
        reachable_count += brute as usize;
        if brute != matched || brute != via_move {
            disagreements.push(format!("{} C={config} C'={next} a={a}: brute {brute}, matching {matched}", describe(&t)));
        }
    }
    verdict(
        disagreements.is_empty(),
        format!(
            "1000 instances ({reachable_count} defendable), {} disagreements {:?}",
            disagreements.len(),
            disagreements.first()
        ),
    )
}

fn known_families() -> Verdict {
    let mut bad = Vec::new();
    let mut oracle_checked = 0;
    for n in 1..=16 {
        let t = Tree::path(n);
        let want = n.div_ceil(2);
        let got = compute_edn(&t).0;
        if got != want {
            bad.push(format!("P{n}: {got} != {want}"));
        }
        if n <= 12 {
            oracle_checked += 1;
            if oracle_edn(&t).ok() != Some(want) {
                bad.push(format!("P{n}: oracle disagrees"));
            }
        }
    }
    for m in 2..=10 {
        let t = Tree::star(m);
        if compute_edn(&t).0 != 2 {
            bad.push(format!("K1,{m}: {}", compute_edn(&t).0));
        }
        oracle_checked += 1;
        if oracle_edn(&t).ok() != Some(2) {
            bad.push(format!("K1,{m}: oracle disagrees"));
        }
    }
    verdict(
        bad.is_empty(),
        format!("P1..P16 and K1,2..K1,10; {oracle_checked} also by oracle; failures {bad:?}"),
    )
}

fn performance() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let big = random_tree(1_000_000, &mut rng);
    let start = Instant::now();
    let rt = RootedTree::root_at(big, None).expect("tree has a leaf");
    let trace = reduce(&rt);
    let nc = build_nice_neocol(&rt, &trace);
    let linear = start.elapsed();
    let nc_ok = nc.is_ok_and(|nc| nc.total_weight() == trace.edn());

    // A path has depth n, stressing anything recursive or quadratic.
    let path_start = Instant::now();
    let prt = RootedTree::root_at(Tree::path(1_000_000), None).expect("path");
    let ptrace = reduce(&prt);
    let path_ok = build_nice_neocol(&prt, &ptrace).is_ok() && ptrace.edn() == 500_000;
    let path_time = path_start.elapsed();

    let an = Analysis::new(random_tree(100_000, &mut rng));
    let (canon, _) = initial_canonical_config(&an);
    let mut c: GuardConfig = canon.iter().skip(1).collect();
    let mut st = AttackerState::new();
    let mut worst = Duration::ZERO;
    let mut turns = 0;
    for _ in 0..20 {
        let t0 = Instant::now();
        let attack = st.next_attack(&an, &c);
        worst = worst.max(t0.elapsed());
        turns += 1;
        let Ok((b, _)) = attack else { break };
        match cover_greedily(an.tree(), &c, b) {
            Defense::Moves(mv) => c = apply(&c, &mv),
            Defense::Forfeit => break,
        }
    }
    // Fresh reference attacks from random configurations of EDN - 1 guards.
    for _ in 0..20 {
        let c: GuardConfig = sample(&mut rng, an.n(), an.edn() - 1).into_iter().collect();
        let t0 = Instant::now();
        let attack = AttackerState::new().next_attack(&an, &c);
        worst = worst.max(t0.elapsed());
        turns += 1;
        if attack.is_err() {
            return verdict(false, format!("next_attack failed: {attack:?}"));
        }
    }
    let ok = nc_ok && path_ok && linear < Duration::from_secs(5) && path_time < Duration::from_secs(5) && worst < Duration::from_millis(50);
    verdict(
        ok,
        format!(
            "n=1e6 random tree reduction+neo-colonization {:.2?}, path {:.2?} (limit 5s); next_attack on n=1e5 worst {:.2?} over {turns} calls (limit 50ms)",
            linear, path_time, worst
        ),
    )
}

fn apply(c: &GuardConfig, mv: &DefenseMove) -> GuardConfig {
    let mut next = c.clone();
    for &(f, _) in mv.pairs() {
        next.remove(f);
    }
    for &(_, t) in mv.pairs() {
        next.insert(t);
    }
    next
}

fn main() -> ExitCode {
    let mut all_ok = true;
    let mut report = |id: &str, name: &str, run: &mut dyn FnMut() -> Verdict| {
        let t0 = Instant::now();
        let v = run();
        all_ok &= v.ok;
        println!(
            "{} {id} {name}: {} [{:.1?}]",
            if v.ok { "PASS" } else { "FAIL" },
            v.detail,
            t0.elapsed()
        );
    };

    report("1", "EDN cross-validation", &mut edn_cross_validation);
    report("2", "nice neo-colonization", &mut nice_neocolonization);
    let mut stats = None;
    report("3", "attacker wins within diam(T)", &mut || {
        let s = attacker_games();
        let ok = s.over_diameter.is_empty() && s.lost.is_empty();
        let detail = format!(
            "{} games, {} lost, {} over diameter {:?}",
            s.games,
            s.lost.len(),
            s.over_diameter.len(),
            s.lost.first().or(s.over_diameter.first())
        );
        stats = Some(s);
        verdict(ok, detail)
    });
    report("4", "attack count <= n", &mut || {
        let s = stats.as_ref().expect("criterion 3 ran");
        verdict(
            s.over_n.is_empty() && s.lost.is_empty(),
            format!("{} games, {} over n {:?}", s.games, s.over_n.len(), s.over_n.first()),
        )
    });
    report("5", "canonical defense soundness", &mut canonical_soundness);
    report("6", "move legality vs brute force", &mut move_legality);
    report("7", "known families", &mut known_families);
    report("8", "performance", &mut performance);

    if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
