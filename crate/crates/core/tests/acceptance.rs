//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Counts, bounds and time limits are pinned below.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use coalition_tactics::bribery::{
    brute_force_bribery, evaluate_bribe, shift_to_swap, solve_dollar, solve_swapshift_no_threshold,
};
use coalition_tactics::election::{Election, Goal, Party, PartySet, PartyUniverse, PreferenceOrder, Voter};
use coalition_tactics::fixtures::worked_example;
use coalition_tactics::io::{self, GenParams, Instance, Problem};
use coalition_tactics::mcf::{solve_min_cost_flow, FlowNetwork};
use coalition_tactics::party_control::{immunity_check, solve_party_control, PartyControlInstance, PartyControlVariant};
use coalition_tactics::rational::{self, int, ratio, Rational};
use coalition_tactics::reductions::{
    brute_force_exact_cover, exact_cover_to_shift, graph_reduction, graph_source_answer, is_clique_reduction,
    ExactCoverInstance, Graph, GRAPH_REDUCTIONS,
};
use coalition_tactics::voter_control::{
    brute_force_voter_control, deletion_as_addition, evaluate_control, solve_add_voters, solve_delete_voters,
};
use coalition_tactics::Execution;
use rand::seq::SliceRandom;
use rand::Rng;

use common::*;

const EXAMPLE_LIMIT: Duration = Duration::from_secs(1);
const DOLLAR_INSTANCES: u64 = 300;
const DOLLAR_MAX_N: usize = 7;
const DOLLAR_MAX_M: usize = 5;
const DOLLAR_LIMIT: Duration = Duration::from_secs(180);
const SWAPSHIFT_INSTANCES: u64 = 200;
const SWAPSHIFT_MAX_N: usize = 6;
const SWAPSHIFT_MAX_M: usize = 5;
const SWAPSHIFT_LIMIT: Duration = Duration::from_secs(120);
const VC_INSTANCES: u64 = 200;
const VC_MAX: usize = 6;
const VC_LIMIT: Duration = Duration::from_secs(180);
const IMMUNITY_ELECTIONS: u64 = 100;
const IMMUNITY_MAX_COALITION: usize = 6;
const RANDOM_GRAPHS: u64 = 120;
const GRAPH_MAX_VERTICES: usize = 6;
const EXACT_COVER_INSTANCES: u64 = 24;
const EXACT_COVER_ELEMENTS: usize = 8;
const EXACT_COVER_GUARD: usize = 16;
const REDUCTION_LIMIT: Duration = Duration::from_secs(600);
const TRANSFORM_INSTANCES: u64 = 100;
const MCF_NODES: usize = 4;
const MCF_MAX_ARCS: usize = 6;
const MCF_MAX_CAP: u64 = 2;
const MCF_MAX_COST: i64 = 5;
/// Arc counts up to this get every cost vector; larger ones a seeded sample.
const MCF_EXHAUSTIVE_COST_ARCS: usize = 3;
const MCF_COST_SAMPLES: usize = 4;
const PERF_SEEDS: u64 = 5;
const DOLLAR_PERF: (usize, usize, Duration) = (20, 6, Duration::from_secs(60));
const SWAPSHIFT_PERF: (usize, usize, Duration) = (40, 6, Duration::from_secs(60));
const AV_PERF: (usize, usize, usize, Duration) = (15, 15, 5, Duration::from_secs(120));

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {t:.1?}, limit {limit:?}"))
}

fn worked_example_rows() -> Outcome {
    let start = Instant::now();
    let (election, goal) = worked_example();
    let u = election.universe().clone();
    ensure(*election.tau() == ratio(3, 20) && election.threshold_count() == 12, || "threshold".into())?;
    let favored = goal.favored.unwrap();
    // (deleted party, coalition share, favored ratio, rounded shares)
    let rows: [(Option<&str>, Rational, Rational, i64, i64); 3] = [
        (None, ratio(20, 65), ratio(1, 1), 31, 100),
        (Some("o1"), ratio(55, 75), ratio(25, 55), 73, 45),
        (Some("o2"), ratio(40, 65), ratio(20, 40), 62, 50),
    ];
    for (deleted, share, fav, share_pct, fav_pct) in rows {
        let running = match deleted {
            Some(d) => election.running().difference(&u.set_of([d]).unwrap()),
            None => election.running().clone(),
        };
        let tally = election.restrict(running).unwrap().tally();
        let got = tally.share(&goal.coalition);
        let got_fav = tally.fraction(favored) / got;
        ensure(got == share && got_fav == fav, || {
            format!("{deleted:?}: {} and {}", rational::format(&got), rational::format(&got_fav))
        })?;
        ensure(rational::percent(&got) == share_pct && rational::percent(&got_fav) == fav_pct, || {
            format!("{deleted:?}: rounded display")
        })?;
    }
    let text = std::fs::read(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/paper-section2.json")).unwrap();
    let parsed = io::parse_instance(&text).map_err(|e| e.to_string())?;
    let Instance::PartyControl(pc) = &parsed.instance else {
        return Err("shipped example is not a party-control instance".into());
    };
    ensure(pc.election == election && pc.goal == goal, || "shipped example differs".into())?;
    let d = solve_party_control(pc).unwrap();
    ensure(d.witness == Some(u.set_of(["o2"]).unwrap()), || "DOP witness".into())?;
    within(start, EXAMPLE_LIMIT)?;
    Ok(format!("4/13, 11/15 with 5/11, 8/13 with 1/2 exact; {:.2?}", start.elapsed()))
}

fn dollar_equivalence() -> Outcome {
    let start = Instant::now();
    let params = GenParams::for_problem(Problem::BriberyDollar);
    let seeds: Vec<u64> = (0..DOLLAR_INSTANCES).collect();
    let results = Execution::Parallel.map(&seeds, |&seed| {
        let (n, m) = shape(seed, DOLLAR_MAX_N, DOLLAR_MAX_M);
        let inst = bribery(generate(seed, n, m, Problem::BriberyDollar, &params));
        let dp = solve_dollar(&inst).map_err(|e| format!("seed {seed}: {e}"))?;
        let bf = brute_force_bribery(&inst, Some(DOLLAR_MAX_N)).map_err(|e| format!("seed {seed}: {e}"))?;
        if dp.feasible != bf.feasible || dp.cost != bf.cost {
            return Err(format!("seed {seed}: dp {:?} vs oracle {:?}", dp.cost, bf.cost));
        }
        Ok(dp.feasible)
    });
    let mut feasible = 0;
    for r in results {
        feasible += r? as usize;
    }
    within(start, DOLLAR_LIMIT)?;
    Ok(format!(
        "{DOLLAR_INSTANCES}/{DOLLAR_INSTANCES} agree ({feasible} feasible); {:.1?}",
        start.elapsed()
    ))
}

fn swapshift_equivalence() -> Outcome {
    let start = Instant::now();
    let seeds: Vec<u64> = (0..SWAPSHIFT_INSTANCES).collect();
    let results = Execution::Parallel.map(&seeds, |&seed| {
        let problem = if seed % 2 == 0 { Problem::BriberySwap } else { Problem::BriberyShift };
        let (n, m) = shape(seed, SWAPSHIFT_MAX_N, SWAPSHIFT_MAX_M);
        let inst = bribery(generate(seed, n, m, problem, &GenParams::for_problem(problem)));
        let flow = solve_swapshift_no_threshold(&inst).map_err(|e| format!("seed {seed}: {e}"))?;
        let oracle = three_group_oracle(&inst);
        if flow.feasible != oracle.is_some() || flow.cost != oracle {
            return Err(format!("seed {seed} ({problem}): flow {:?} vs oracle {:?}", flow.cost, oracle));
        }
        let bf = brute_force_bribery(&inst, Some(SWAPSHIFT_MAX_N)).map_err(|e| e.to_string())?;
        if bf.cost != oracle {
            return Err(format!("seed {seed}: single-lift search {:?} vs oracle {:?}", bf.cost, oracle));
        }
        Ok(flow.feasible)
    });
    let mut feasible = 0;
    for r in results {
        feasible += r? as usize;
    }
    within(start, SWAPSHIFT_LIMIT)?;
    Ok(format!(
        "{SWAPSHIFT_INSTANCES}/{SWAPSHIFT_INSTANCES} agree ({feasible} feasible); {:.1?}",
        start.elapsed()
    ))
}

fn voter_control_equivalence() -> Outcome {
    let start = Instant::now();
    let seeds: Vec<u64> = (0..VC_INSTANCES).collect();
    let av = Execution::Parallel.map(&seeds, |&seed| {
        let mut r = rng(seed ^ 0xa5);
        let (n, w, m) = (r.gen_range(1..=VC_MAX), r.gen_range(1..=VC_MAX), r.gen_range(2..=5));
        let mut params = GenParams::for_problem(Problem::ControlAv);
        params.spoilers = w;
        let Instance::VoterControl(inst) = generate(seed, n, m, Problem::ControlAv, &params).instance else {
            unreachable!()
        };
        let dp = solve_add_voters(&inst).map_err(|e| format!("AV seed {seed}: {e}"))?;
        let bf = brute_force_voter_control(&inst, Some(VC_MAX)).map_err(|e| e.to_string())?;
        if dp.feasible != bf.feasible || dp.cost != bf.cost {
            return Err(format!("AV seed {seed}: dp {:?} vs oracle {:?}", dp.cost, bf.cost));
        }
        Ok(dp.feasible)
    });
    let dv = Execution::Parallel.map(&seeds, |&seed| {
        let mut r = rng(seed ^ 0xd5);
        let (n, m) = (r.gen_range(1..=VC_MAX), r.gen_range(2..=5));
        let params = GenParams::for_problem(Problem::ControlDv);
        let Instance::VoterControl(inst) = generate(seed, n, m, Problem::ControlDv, &params).instance else {
            unreachable!()
        };
        let dp = solve_delete_voters(&inst).map_err(|e| format!("DV seed {seed}: {e}"))?;
        let bf = brute_force_voter_control(&inst, Some(VC_MAX)).map_err(|e| e.to_string())?;
        if dp.feasible != bf.feasible || dp.cost != bf.cost {
            return Err(format!("DV seed {seed}: dp {:?} vs oracle {:?}", dp.cost, bf.cost));
        }
        if let Some(deleted) = &dp.witness {
            let added = deletion_as_addition(&inst).map_err(|e| e.to_string())?;
            let kept_cost: Rational = (0..n).filter(|i| !deleted.contains(i)).map(|i| added.spoilers[i].cost).sum();
            let total: Rational = inst.deletion_costs.iter().sum();
            let (cost, _, met) = evaluate_control(&inst, deleted).map_err(|e| e.to_string())?;
            if !met || cost != total + kept_cost {
                return Err(format!("DV seed {seed}: cost identity fails"));
            }
        }
        Ok(dp.feasible)
    });
    let (mut fa, mut fd) = (0, 0);
    for r in av {
        fa += r? as usize;
    }
    for r in dv {
        fd += r? as usize;
    }
    within(start, VC_LIMIT)?;
    Ok(format!(
        "AV {VC_INSTANCES}/{VC_INSTANCES} ({fa} feasible), DV {VC_INSTANCES}/{VC_INSTANCES} ({fd} feasible) agree; {:.1?}",
        start.elapsed()
    ))
}

fn random_election(seed: u64) -> (Election, Goal, PartySet) {
    let mut r = rng(seed ^ 0x1111);
    let m = r.gen_range(3..=9);
    let n = r.gen_range(1..=12);
    let universe = std::sync::Arc::new(PartyUniverse::new((1..=m).map(|i| format!("p{i}"))).unwrap());
    let mut all: Vec<Party> = universe.parties().collect();
    all.shuffle(&mut r);
    let c = r.gen_range(1..=IMMUNITY_MAX_COALITION.min(m - 1));
    let coalition = PartySet::from_parties(m, all[..c].iter().copied());
    let spoilers = PartySet::from_parties(m, all[c + 1..].iter().copied().filter(|_| r.gen_bool(0.5)));
    let running = PartySet::full(m).difference(&spoilers);
    let voters = (0..n)
        .map(|i| {
            let mut order: Vec<Party> = universe.parties().collect();
            order.shuffle(&mut r);
            Voter::new(format!("v{i}"), PreferenceOrder::new(order, m).unwrap())
        })
        .collect();
    let election = Election::new(universe, running, voters, int(0)).unwrap();
    let goal = Goal::joint(coalition, ratio(1, 2)).unwrap();
    (election, goal, spoilers)
}

fn immunity() -> Outcome {
    let mut checks = 0usize;
    for seed in 0..IMMUNITY_ELECTIONS {
        let (election, goal, spoilers) = random_election(seed);
        let m = election.universe().len();
        let before = election.tally().share(&goal.coalition);
        let members: Vec<Party> = election.running().intersection(&goal.coalition).iter().collect();
        for del in subsets(m, &members) {
            let after = election.running().difference(&del);
            if after.is_empty() {
                continue;
            }
            let share = election.restrict(after).unwrap().tally().share(&goal.coalition);
            ensure(share <= before, || format!("seed {seed}: deleting {del:?} raises the share"))?;
            checks += 1;
        }
        let extra: Vec<Party> = spoilers.iter().collect();
        for add in subsets(m, &extra) {
            let share = election
                .restrict(election.running().union(&add))
                .unwrap()
                .tally()
                .share(&goal.coalition);
            ensure(share <= before, || format!("seed {seed}: adding {add:?} raises the share"))?;
            checks += 1;
        }
        for variant in [PartyControlVariant::Dcp, PartyControlVariant::Aop] {
            let pool = if variant == PartyControlVariant::Aop { spoilers.clone() } else { PartySet::empty(m) };
            let inst = PartyControlInstance::new(election.clone(), pool, m, variant, goal.clone()).unwrap();
            ensure(immunity_check(&inst) == Some(before >= goal.phi), || format!("seed {seed}: {variant:?} shortcut"))?;
        }
    }
    Ok(format!("{IMMUNITY_ELECTIONS} elections, {checks} deletions/additions, 0 counterexamples"))
}

fn reductions_cross_validation() -> Outcome {
    let start = Instant::now();
    let mut graphs: Vec<(String, Graph)> = vec![
        ("K3".into(), Graph::complete(3)),
        ("P3".into(), Graph::path(3)),
        ("K4".into(), Graph::complete(4)),
        ("K1,3".into(), Graph::star(3)),
    ];
    for seed in 0..RANDOM_GRAPHS {
        let mut r = rng(seed ^ 0x6a);
        let n = r.gen_range(1..=GRAPH_MAX_VERTICES);
        let p = [0.3, 0.5, 0.7][seed as usize % 3];
        graphs.push((format!("random#{seed}"), Graph::random(&mut r, n, p)));
    }
    let jobs: Vec<(usize, &str, usize)> = (0..graphs.len())
        .flat_map(|g| GRAPH_REDUCTIONS.iter().flat_map(move |&kind| (1..=3).map(move |k| (g, kind, k))))
        .collect();
    let results = Execution::Parallel.map(&jobs, |&(g, kind, k)| {
        let (name, graph) = &graphs[g];
        if is_clique_reduction(kind) && graph.edges().is_empty() {
            return Ok(None);
        }
        let inst = graph_reduction(kind, graph, k).map_err(|e| format!("{kind} on {name}: {e}"))?;
        let got = solve_party_control(&inst).map_err(|e| e.to_string())?.feasible;
        let want = graph_source_answer(kind, graph, k).map_err(|e| e.to_string())?;
        if got != want {
            return Err(format!("{kind} on {name} with k={k}: reduced {got}, source {want}"));
        }
        Ok(Some(want))
    });
    let (mut checked, mut yes, mut skipped) = (0, 0, 0);
    for r in results {
        match r? {
            Some(w) => {
                checked += 1;
                yes += w as usize;
            }
            None => skipped += 1,
        }
    }

    let seeds: Vec<u64> = (0..EXACT_COVER_INSTANCES).collect();
    let ec = Execution::Parallel.map(&seeds, |&seed| {
        let mut r = rng(seed ^ 0xec);
        let source = ExactCoverInstance::random(&mut r, EXACT_COVER_ELEMENTS, seed % 2 == 0).map_err(|e| e.to_string())?;
        let want = brute_force_exact_cover(&source).map_err(|e| e.to_string())?;
        let inst = exact_cover_to_shift(&source).map_err(|e| e.to_string())?;
        let d = brute_force_bribery(&inst, Some(EXACT_COVER_GUARD)).map_err(|e| e.to_string())?;
        if d.feasible != want {
            return Err(format!("exact cover seed {seed}: bribery {}, source {want}", d.feasible));
        }
        if let Some(b) = &d.witness {
            let report = evaluate_bribe(&inst, b).map_err(|e| e.to_string())?;
            if !report.accepted(&inst.budget) {
                return Err(format!("exact cover seed {seed}: witness rejected"));
            }
        }
        Ok(want)
    });
    let mut covers = 0;
    for r in ec {
        covers += r? as usize;
    }
    within(start, REDUCTION_LIMIT)?;
    Ok(format!(
        "{} graphs: {checked} (graph, construction, k) agree ({yes} yes), {skipped} edgeless clique cases not constructible; \
         exact cover {EXACT_COVER_INSTANCES}/{EXACT_COVER_INSTANCES} agree ({covers} with a cover); {:.1?}",
        graphs.len(),
        start.elapsed()
    ))
}

fn shift_to_swap_preservation() -> Outcome {
    let seeds: Vec<u64> = (0..TRANSFORM_INSTANCES).collect();
    let results = Execution::Parallel.map(&seeds, |&seed| {
        let (n, m) = shape(seed, 6, 5);
        let mut params = GenParams::for_problem(Problem::BriberyShift);
        params.tau = vec![int(0), ratio(1, 4), ratio(2, 5)];
        let shift = bribery(generate(seed, n, m, Problem::BriberyShift, &params));
        let swap = shift_to_swap(&shift).map_err(|e| e.to_string())?;
        let a = brute_force_bribery(&shift, Some(6)).map_err(|e| e.to_string())?;
        let b = brute_force_bribery(&swap, Some(6)).map_err(|e| e.to_string())?;
        if a.feasible != b.feasible || a.cost != b.cost {
            return Err(format!("seed {seed}: shift {:?} vs swap {:?}", a.cost, b.cost));
        }
        if shift.election.tau() == &int(0) {
            let f = solve_swapshift_no_threshold(&swap).map_err(|e| e.to_string())?;
            if f.cost != a.cost {
                return Err(format!("seed {seed}: flow on swap {:?} vs {:?}", f.cost, a.cost));
            }
        }
        Ok(a.feasible)
    });
    let mut feasible = 0;
    for r in results {
        feasible += r? as usize;
    }
    Ok(format!("{TRANSFORM_INSTANCES}/{TRANSFORM_INSTANCES} preserved ({feasible} feasible)"))
}

fn mcf_exhaustive() -> Outcome {
    let start = Instant::now();
    let (s, t) = (0, MCF_NODES - 1);
    let pairs: Vec<(usize, usize)> = (0..MCF_NODES)
        .flat_map(|u| (0..MCF_NODES).filter(move |&v| v != u).map(move |v| (u, v)))
        .collect();
    let mut topologies: Vec<Vec<(usize, usize)>> = Vec::new();
    for mask in 0u32..1 << pairs.len() {
        if mask.count_ones() as usize <= MCF_MAX_ARCS {
            topologies.push((0..pairs.len()).filter(|i| mask >> i & 1 == 1).map(|i| pairs[i]).collect());
        }
    }
    let results = Execution::Parallel.map(&topologies, |arcs| -> Result<usize, String> {
        let k = arcs.len();
        let mut r = rng(arcs.iter().fold(k as u64, |h, &(u, v)| h * 31 + (u * MCF_NODES + v) as u64));
        let mut solves = 0;
        for caps in 0..(MCF_MAX_CAP as usize).pow(k as u32) {
            let cap: Vec<u64> = (0..k).map(|i| (caps / (MCF_MAX_CAP as usize).pow(i as u32)) as u64 % MCF_MAX_CAP + 1).collect();
            let cost_vectors: Vec<Vec<i64>> = if k <= MCF_EXHAUSTIVE_COST_ARCS {
                let base = (MCF_MAX_COST + 1) as usize;
                (0..base.pow(k as u32))
                    .map(|c| (0..k).map(|i| ((c / base.pow(i as u32)) % base) as i64).collect())
                    .collect()
            } else {
                (0..MCF_COST_SAMPLES)
                    .map(|_| (0..k).map(|_| r.gen_range(0..=MCF_MAX_COST)).collect())
                    .collect()
            };
            let out_cap: u64 = arcs.iter().zip(&cap).filter(|((u, _), _)| *u == s).map(|(_, c)| c).sum();
            for costs in cost_vectors {
                let mut net = FlowNetwork::new(MCF_NODES, s, t, 0);
                for (i, &(u, v)) in arcs.iter().enumerate() {
                    net.add_arc(u, v, cap[i], costs[i]);
                }
                let expected = min_costs_by_enumeration(&net, out_cap as usize + 1);
                for (d, want) in expected.iter().enumerate() {
                    net.demand = d as u64;
                    let got = solve_min_cost_flow(&net).map_err(|e| e.to_string())?;
                    if let Some(f) = &got {
                        f.check(&net).map_err(|e| format!("{arcs:?} {cap:?} {costs:?} d={d}: {e}"))?;
                    }
                    if got.as_ref().map(|f| f.total_cost) != *want {
                        return Err(format!("{arcs:?} caps {cap:?} costs {costs:?} d={d}: {:?} vs {want:?}", got.map(|f| f.total_cost)));
                    }
                    solves += 1;
                }
            }
        }
        Ok(solves)
    });
    let mut solves = 0;
    for r in results {
        solves += r?;
    }
    Ok(format!(
        "{} topologies on {MCF_NODES} nodes, {solves} solves optimal and certified; {:.1?}",
        topologies.len(),
        start.elapsed()
    ))
}

/// Slowest of `PERF_SEEDS` runs of `run`, which reports feasibility.
fn slowest(run: impl Fn(u64) -> Result<bool, String>) -> Result<(Duration, usize), String> {
    let mut worst = Duration::ZERO;
    let mut feasible = 0;
    for seed in 0..PERF_SEEDS {
        let start = Instant::now();
        feasible += run(seed)? as usize;
        worst = worst.max(start.elapsed());
    }
    Ok((worst, feasible))
}

fn performance() -> Outcome {
    let (n, m, limit) = DOLLAR_PERF;
    let params = GenParams::for_problem(Problem::BriberyDollar);
    let (t_dollar, f_dollar) = slowest(|seed| {
        let inst = bribery(generate(seed, n, m, Problem::BriberyDollar, &params));
        Ok(solve_dollar(&inst).map_err(|e| e.to_string())?.feasible)
    })?;
    ensure(t_dollar < limit, || format!("dollar n={n} m={m}: {t_dollar:.1?}"))?;

    let (n, m, limit) = SWAPSHIFT_PERF;
    let params = GenParams::for_problem(Problem::BriberySwap);
    let (t_flow, f_flow) = slowest(|seed| {
        let inst = bribery(generate(seed, n, m, Problem::BriberySwap, &params));
        Ok(solve_swapshift_no_threshold(&inst).map_err(|e| e.to_string())?.feasible)
    })?;
    ensure(t_flow < limit, || format!("swap n={n} m={m}: {t_flow:.1?}"))?;

    let (v, w, m, limit) = AV_PERF;
    let mut params = GenParams::for_problem(Problem::ControlAv);
    params.spoilers = w;
    let (t_av, f_av) = slowest(|seed| {
        let Instance::VoterControl(inst) = generate(seed, v, m, Problem::ControlAv, &params).instance else {
            unreachable!()
        };
        Ok(solve_add_voters(&inst).map_err(|e| e.to_string())?.feasible)
    })?;
    ensure(t_av < limit, || format!("AV |V|={v} |W|={w} m={m}: {t_av:.1?}"))?;
    Ok(format!(
        "slowest of {PERF_SEEDS}: dollar {t_dollar:.2?} ({f_dollar} feasible), swap flow {t_flow:.2?} ({f_flow} feasible), \
         add voters {t_av:.2?} ({f_av} feasible)"
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("worked example reproduction", worked_example_rows),
        ("dollar bribery vs exhaustive search", dollar_equivalence),
        ("swap/shift without threshold vs group enumeration", swapshift_equivalence),
        ("voter control vs subset enumeration", voter_control_equivalence),
        ("immunity of coalition deletion / opposition addition", immunity),
        ("reduction cross-validation", reductions_cross_validation),
        ("shift-to-swap decision preservation", shift_to_swap_preservation),
        ("min-cost flow vs flow enumeration", mcf_exhaustive),
        ("desk-scale performance", performance),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("PASS [{}] {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL [{}] {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
