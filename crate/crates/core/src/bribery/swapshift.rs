//! Swap and coalition-shift bribery without a threshold.
//!
//! With `tau = 0` only the number of voters ending in each group (favored,
//! rest of coalition, opposition) matters, and the cheapest way to move a
//! voter into a group is to lift one member to the top. For every split
//! `(k1, k_rest)` meeting the targets a flow network assigns voters to groups
//! at minimum total lift cost.

use num_traits::{One, Zero};

use super::{certify, min_cost_to_top, Bribe, BriberyDecision, BriberyInstance, CostModel, Group};
use crate::cost;
use crate::election::{counts_meet_goal, PreferenceOrder};
use crate::exec::Execution;
use crate::mcf::{solve_min_cost_flow, FlowNetwork};
use crate::rational::{self, Rational};
use crate::{Error, Result};

type Lifts = Vec<[Option<(i64, PreferenceOrder)>; 3]>;

pub fn solve_swapshift_no_threshold(instance: &BriberyInstance) -> Result<BriberyDecision> {
    solve_swapshift_no_threshold_with(instance, Execution::default())
}

pub fn solve_swapshift_no_threshold_with(
    instance: &BriberyInstance,
    exec: Execution,
) -> Result<BriberyDecision> {
    if !instance.cost_model.is_lift_model() {
        return Err(Error::InvalidInstance("solver needs swap or shift pricing".into()));
    }
    if !instance.election.tau().is_zero() {
        return Err(Error::ThresholdUnsupported);
    }
    let n = instance.num_voters();
    let mut raw = Vec::with_capacity(n);
    for i in 0..n {
        let mut row: [Option<(Rational, PreferenceOrder)>; 3] = [None, None, None];
        for (g, slot) in Group::ALL.iter().zip(row.iter_mut()) {
            *slot = min_cost_to_top(instance, i, *g)?;
        }
        raw.push(row);
    }
    let scale = cost::scale_for(
        raw.iter()
            .flatten()
            .flatten()
            .map(|(c, _)| c)
            .chain(std::iter::once(&instance.budget)),
    );
    let lifts: Lifts = raw
        .into_iter()
        .map(|row| row.map(|slot| slot.map(|(c, o)| (rational::scale_to_int(&c, scale), o))))
        .collect();

    let splits: Vec<(usize, usize)> = (0..=n)
        .flat_map(|k1| (0..=n - k1).map(move |kr| (k1, kr)))
        .filter(|&(k1, kr)| counts_meet_goal(k1 as u64, kr as u64, (n - k1 - kr) as u64, &instance.goal))
        .collect();
    let solved = exec.map(&splits, |&(k1, kr)| assign(&lifts, k1, kr));
    let mut best: Option<(i64, usize, usize, Vec<usize>)> = None;
    for (&(k1, kr), r) in splits.iter().zip(solved) {
        if let Some((c, groups)) = r? {
            if best.as_ref().map_or(true, |b| (c, k1, kr) < (b.0, b.1, b.2)) {
                best = Some((c, k1, kr, groups));
            }
        }
    }
    let budget = rational::scale_to_int(&instance.budget, scale);
    match best {
        Some((c, _, _, groups)) if c <= budget => {
            let election = &instance.election;
            let mut bribe = Bribe::default();
            for (i, g) in groups.into_iter().enumerate() {
                let (_, order) = lifts[i][g].as_ref().expect("assigned group is reachable");
                if *order != election.voters()[i].order {
                    bribe.changes.insert(i, order.clone());
                }
            }
            certify(instance, bribe, cost::unscale(c, scale))
        }
        _ => Ok(BriberyDecision::infeasible()),
    }
}

/// Min-cost assignment of voters to groups with exactly `k1` favored and
/// `kr` rest-of-coalition voters; returns the cost and each voter's group.
fn assign(lifts: &Lifts, k1: usize, kr: usize) -> Result<Option<(i64, Vec<usize>)>> {
    let n = lifts.len();
    // source, 3 group hubs, 3n (voter, group) nodes, n voter nodes, sink
    let source = 0;
    let hub = |g: usize| 1 + g;
    let pair = |i: usize, g: usize| 4 + 3 * i + g;
    let voter = |i: usize| 4 + 3 * n + i;
    let sink = 4 + 4 * n;
    let mut net = FlowNetwork::new(sink + 1, source, sink, n as u64);
    for (g, cap) in [k1, kr, n - k1 - kr].into_iter().enumerate() {
        net.add_arc(source, hub(g), cap as u64, 0);
    }
    let mut choice_arcs = Vec::new();
    for (i, row) in lifts.iter().enumerate() {
        for (g, slot) in row.iter().enumerate() {
            if let Some((c, _)) = slot {
                net.add_arc(hub(g), pair(i, g), 1, 0);
                let arc = net.add_arc(pair(i, g), voter(i), 1, *c);
                choice_arcs.push((arc, i, g));
            }
        }
        net.add_arc(voter(i), sink, 1, 0);
    }
    let Some(flow) = solve_min_cost_flow(&net)? else {
        return Ok(None);
    };
    debug_assert!(flow.check(&net).is_ok());
    let mut groups = vec![usize::MAX; n];
    for (arc, i, g) in choice_arcs {
        if flow.flow[arc] == 1 {
            groups[i] = g;
        }
    }
    Ok(Some((flow.total_cost, groups)))
}

/// Re-prices a linear coalition-shift instance as swap bribery: moving a
/// coalition party up one place costs the voter's slope, moving anything
/// else up costs more than the whole budget.
pub fn shift_to_swap(instance: &BriberyInstance) -> Result<BriberyInstance> {
    let CostModel::CoalitionShift(schedules) = &instance.cost_model else {
        return Err(Error::InvalidInstance("transform needs coalition-shift pricing".into()));
    };
    let m = instance.election.universe().len();
    let over_budget = instance.budget + Rational::one();
    let mut matrices = Vec::with_capacity(schedules.len());
    for s in schedules {
        let slope = s.slope().ok_or(Error::NonLinearSchedule)?;
        let mut rows = vec![vec![over_budget; m]; m];
        for row in rows.iter_mut() {
            for q in instance.goal.coalition.iter() {
                row[q.0] = slope;
            }
        }
        matrices.push(rows);
    }
    BriberyInstance::new(
        instance.election.clone(),
        instance.goal.clone(),
        CostModel::SwapMatrix(matrices),
        instance.budget,
    )
}
