//! Helpers shared by the integration and acceptance suites: seeded instance
//! generation and oracles written independently of the solvers.

#![allow(dead_code)]

use coalition_tactics::bribery::{bribe_cost, BriberyInstance};
use coalition_tactics::election::{check_objectives, Goal, Party, PartySet, Tally};
use coalition_tactics::io::{self, GenParams, Instance, ParsedInstance, Problem};
use coalition_tactics::mcf::FlowNetwork;
use coalition_tactics::rational::{self, Rational};
use coalition_tactics::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn generate(seed: u64, n: usize, m: usize, problem: Problem, params: &GenParams) -> ParsedInstance {
    let doc = io::generate_random(seed, n, m, problem, params).expect("generator");
    io::parse_instance(io::to_json(&doc).as_bytes()).expect("generated documents parse")
}

pub fn bribery(parsed: ParsedInstance) -> BriberyInstance {
    match parsed.instance {
        Instance::Bribery(b) => b,
        other => panic!("expected bribery, got {other:?}"),
    }
}

/// Small random shape: `n` in `1..=max_n`, `m` in `2..=max_m`.
pub fn shape(seed: u64, max_n: usize, max_m: usize) -> (usize, usize) {
    let mut r = rng(seed ^ 0x5eed);
    (r.gen_range(1..=max_n), r.gen_range(2..=max_m))
}

fn groups_of(inst: &BriberyInstance) -> [Vec<Party>; 3] {
    let g = inst.goal.groups(inst.election.running());
    [g.favored.into_iter().collect(), g.rest, g.opposition]
}

/// Optimal swap/shift bribe at `tau = 0` by trying, for every voter, every
/// group as the destination of its vote, reached by the cheapest single lift
/// of a group member. The goal is checked on a fresh tally of the resulting
/// top choices. Returns the optimal cost within budget, if any.
pub fn three_group_oracle(inst: &BriberyInstance) -> Option<Rational> {
    let election = &inst.election;
    let n = election.num_voters();
    let groups = groups_of(inst);
    let mut options: Vec<Vec<(Rational, Party)>> = Vec::with_capacity(n);
    for i in 0..n {
        let order = &election.voters()[i].order;
        let top = election.top_choice(i);
        let mut row = Vec::new();
        for members in &groups {
            if members.contains(&top) {
                row.push((rational::zero(), top));
                continue;
            }
            let mut best: Option<(Rational, Party)> = None;
            for &q in members {
                match bribe_cost(&inst.cost_model, &inst.goal.coalition, i, order, &order.lift(q)) {
                    Ok(c) => {
                        if best.map_or(true, |(b, _)| c < b) {
                            best = Some((c, q));
                        }
                    }
                    Err(Error::IllegalShift { .. } | Error::ScheduleTooShort { .. }) => {}
                    Err(e) => panic!("{e}"),
                }
            }
            row.extend(best);
        }
        options.push(row);
    }
    let m = election.universe().len();
    let mut best: Option<Rational> = None;
    let mut pick = vec![0usize; n];
    loop {
        let cost: Rational = (0..n).map(|i| options[i][pick[i]].0).sum();
        if cost <= inst.budget && best.map_or(true, |b| cost < b) {
            let mut votes = vec![0u64; m];
            for i in 0..n {
                votes[options[i][pick[i]].1 .0] += 1;
            }
            let tally = Tally::from_counts(votes, election.running(), election.tau());
            if check_objectives(&tally, &inst.goal).met() {
                best = Some(cost);
            }
        }
        let mut i = 0;
        while i < n && pick[i] + 1 == options[i].len() {
            pick[i] = 0;
            i += 1;
        }
        if i == n {
            return best;
        }
        pick[i] += 1;
    }
}

/// Coalition share of the active votes.
pub fn coalition_share(tally: &Tally, goal: &Goal) -> Rational {
    tally.share(&goal.coalition)
}

/// Subsets of `items` as party sets, including the empty one.
pub fn subsets(universe_len: usize, items: &[Party]) -> Vec<PartySet> {
    (0u32..1 << items.len())
        .map(|mask| {
            PartySet::from_parties(
                universe_len,
                (0..items.len()).filter(|i| mask >> i & 1 == 1).map(|i| items[i]),
            )
        })
        .collect()
}

/// `best[d]` is the minimum cost of an integer flow of value `d`, found by
/// trying every flow vector within capacities. Values above `max_value` are
/// not recorded.
pub fn min_costs_by_enumeration(net: &FlowNetwork, max_value: usize) -> Vec<Option<i64>> {
    let arcs = &net.arcs;
    let mut flow = vec![0u64; arcs.len()];
    let mut best: Vec<Option<i64>> = vec![None; max_value + 1];
    loop {
        let mut balance = vec![0i64; net.nodes];
        for (a, &f) in arcs.iter().zip(&flow) {
            balance[a.from] -= f as i64;
            balance[a.to] += f as i64;
        }
        let d = balance[net.sink];
        let conserved = d >= 0
            && balance[net.source] == -d
            && (0..net.nodes).all(|v| v == net.source || v == net.sink || balance[v] == 0);
        if conserved && (d as usize) <= max_value {
            let cost: i64 = arcs.iter().zip(&flow).map(|(a, &f)| a.cost * f as i64).sum();
            let slot = &mut best[d as usize];
            *slot = Some(slot.map_or(cost, |b| b.min(cost)));
        }
        let mut i = 0;
        while i < arcs.len() && flow[i] == arcs[i].capacity {
            flow[i] = 0;
            i += 1;
        }
        if i == arcs.len() {
            return best;
        }
        flow[i] += 1;
    }
}
