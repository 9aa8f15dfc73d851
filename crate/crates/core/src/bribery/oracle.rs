//! Exhaustive bribery search for small instances.

use super::{bribe_cost, Bribe, BriberyDecision, BriberyInstance, CostModel};
use crate::cost;
use crate::election::{check_objectives, Party, PreferenceOrder, Tally};
use crate::rational;
use crate::{Error, Result};

/// Default size guard for [`brute_force_bribery`].
pub const BRIBERY_GUARD: usize = 7;

/// `fallback`, unless `COALITION_TACTICS_GUARD` holds a number.
pub fn default_guard(fallback: usize) -> usize {
    std::env::var("COALITION_TACTICS_GUARD")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(fallback)
}

/// Exact optimum by enumeration. Price models try every bribed subset and
/// every split of the freed votes among running parties; lift models try,
/// for each voter, no change or lifting a single party to the top (only the
/// top choice matters, and a single lift is the cheapest order with a given
/// top). `guard` bounds the voter count, and for price models also the
/// running-party count.
pub fn brute_force_bribery(instance: &BriberyInstance, guard: Option<usize>) -> Result<BriberyDecision> {
    let guard = guard.unwrap_or_else(|| default_guard(BRIBERY_GUARD));
    let n = instance.num_voters();
    let m = instance.election.running().len();
    if n > guard {
        return Err(Error::GuardExceeded { size: n, guard });
    }
    match &instance.cost_model {
        CostModel::Uniform | CostModel::PerVoter(_) => {
            if m > guard {
                return Err(Error::GuardExceeded { size: m, guard });
            }
            price_search(instance)
        }
        _ => lift_search(instance),
    }
}

fn decided(best: Option<(i64, Bribe)>, scale: i64) -> BriberyDecision {
    match best {
        Some((c, bribe)) => BriberyDecision {
            feasible: true,
            witness: Some(bribe),
            cost: Some(cost::unscale(c, scale)),
        },
        None => BriberyDecision::infeasible(),
    }
}

fn compositions(total: usize, parts: usize, out: &mut Vec<Vec<usize>>, cur: &mut Vec<usize>) {
    if cur.len() + 1 == parts {
        cur.push(total);
        out.push(cur.clone());
        cur.pop();
        return;
    }
    for x in 0..=total {
        cur.push(x);
        compositions(total - x, parts, out, cur);
        cur.pop();
    }
}

fn price_search(instance: &BriberyInstance) -> Result<BriberyDecision> {
    let election = &instance.election;
    let n = election.num_voters();
    let prices = instance.cost_model.voter_prices(n).expect("price model");
    let scale = cost::scale_for(prices.iter().chain(std::iter::once(&instance.budget)));
    let scaled: Vec<i64> = prices.iter().map(|p| rational::scale_to_int(p, scale)).collect();
    let budget = rational::scale_to_int(&instance.budget, scale);
    let running: Vec<Party> = election.running().iter().collect();
    let base = election.vote_counts();
    let tops: Vec<Party> = (0..n).map(|i| election.top_choice(i)).collect();

    let mut splits: Vec<Vec<Vec<usize>>> = Vec::with_capacity(n + 1);
    for s in 0..=n {
        let mut out = Vec::new();
        compositions(s, running.len(), &mut out, &mut Vec::new());
        splits.push(out);
    }

    let mut best: Option<(i64, u32, usize)> = None;
    for mask in 0u32..(1 << n) {
        let c: i64 = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| scaled[i]).sum();
        if c > budget || best.is_some_and(|b| c >= b.0) {
            continue;
        }
        let mut counts = base.clone();
        for i in (0..n).filter(|i| mask >> i & 1 == 1) {
            counts[tops[i].0] -= 1;
        }
        let size = mask.count_ones() as usize;
        for (k, split) in splits[size].iter().enumerate() {
            let mut after = counts.clone();
            for (p, &x) in running.iter().zip(split) {
                after[p.0] += x as u64;
            }
            let tally = Tally::from_counts(after, election.running(), election.tau());
            if check_objectives(&tally, &instance.goal).met() {
                best = Some((c, mask, k));
                break;
            }
        }
    }

    let best = best.map(|(c, mask, k)| {
        let split = &splits[mask.count_ones() as usize][k];
        let targets = running
            .iter()
            .zip(split)
            .flat_map(|(&p, &x)| std::iter::repeat(p).take(x));
        let bribed = (0..n).filter(|i| mask >> i & 1 == 1);
        let mut bribe = Bribe::default();
        for (i, t) in bribed.zip(targets) {
            if tops[i] != t {
                bribe.changes.insert(i, election.voters()[i].order.lift(t));
            }
        }
        (c, bribe)
    });
    Ok(decided(best, scale))
}

struct LiftSearch<'a> {
    instance: &'a BriberyInstance,
    options: Vec<Vec<(i64, PreferenceOrder, Party)>>,
    budget: i64,
    counts: Vec<u64>,
    picks: Vec<usize>,
    best: Option<(i64, Vec<usize>)>,
}

impl LiftSearch<'_> {
    fn run(&mut self, voter: usize, spent: i64) {
        if self.best.as_ref().is_some_and(|b| spent >= b.0) {
            return;
        }
        if voter == self.options.len() {
            let election = &self.instance.election;
            let tally = Tally::from_counts(self.counts.clone(), election.running(), election.tau());
            if check_objectives(&tally, &self.instance.goal).met() {
                self.best = Some((spent, self.picks.clone()));
            }
            return;
        }
        for k in 0..self.options[voter].len() {
            let (c, top) = (self.options[voter][k].0, self.options[voter][k].2);
            let total = spent + c;
            if total > self.budget {
                continue;
            }
            self.counts[top.0] += 1;
            self.picks.push(k);
            self.run(voter + 1, total);
            self.picks.pop();
            self.counts[top.0] -= 1;
        }
    }
}

fn lift_search(instance: &BriberyInstance) -> Result<BriberyDecision> {
    let election = &instance.election;
    let n = election.num_voters();
    let mut raw = Vec::with_capacity(n);
    for i in 0..n {
        let order = &election.voters()[i].order;
        let mut opts = vec![(rational::zero(), order.clone(), election.top_choice(i))];
        for &q in &order.ranking()[1..] {
            if !election.running().contains(q) {
                continue;
            }
            let lifted = order.lift(q);
            match bribe_cost(&instance.cost_model, &instance.goal.coalition, i, order, &lifted) {
                Ok(c) if c <= instance.budget => opts.push((c, lifted, q)),
                Ok(_) | Err(Error::IllegalShift { .. } | Error::ScheduleTooShort { .. }) => {}
                Err(e) => return Err(e),
            }
        }
        raw.push(opts);
    }
    let scale = cost::scale_for(
        raw.iter()
            .flatten()
            .map(|(c, _, _)| c)
            .chain(std::iter::once(&instance.budget)),
    );
    let options = raw
        .into_iter()
        .map(|opts| {
            opts.into_iter()
                .map(|(c, o, q)| (rational::scale_to_int(&c, scale), o, q))
                .collect()
        })
        .collect();
    let mut search = LiftSearch {
        instance,
        options,
        budget: rational::scale_to_int(&instance.budget, scale),
        counts: vec![0; election.universe().len()],
        picks: Vec::with_capacity(n),
        best: None,
    };
    search.run(0, 0);
    let best = search.best.take().map(|(c, picks)| {
        let mut bribe = Bribe::default();
        for (i, k) in picks.into_iter().enumerate() {
            if k != 0 {
                bribe.changes.insert(i, search.options[i][k].1.clone());
            }
        }
        (c, bribe)
    });
    Ok(decided(best, scale))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::election::Goal;
    use crate::fixtures::worked_example;
    use crate::rational::int;

    #[test]
    fn guard_refuses_large_electorates() {
        let (election, goal) = worked_example();
        let inst = BriberyInstance::new(election, goal, CostModel::Uniform, int(1)).unwrap();
        assert!(matches!(
            brute_force_bribery(&inst, Some(7)),
            Err(Error::GuardExceeded { size: 75, guard: 7 })
        ));
    }

    #[test]
    fn empty_budget_means_already_satisfied() {
        let (election, _) = worked_example();
        let u = election.universe().clone();
        let small = election.with_voters(election.voters()[..6].to_vec()).unwrap();
        let met = Goal::joint(u.set_of(["p1"]).unwrap(), rational::ratio(1, 2)).unwrap();
        let unmet = Goal::joint(u.set_of(["o2"]).unwrap(), rational::ratio(1, 2)).unwrap();
        for (goal, expected) in [(met, true), (unmet, false)] {
            let inst = BriberyInstance::new(small.clone(), goal, CostModel::Uniform, int(0)).unwrap();
            assert_eq!(brute_force_bribery(&inst, None).unwrap().feasible, expected);
        }
    }

    #[test]
    fn compositions_count() {
        let mut out = Vec::new();
        compositions(3, 3, &mut out, &mut Vec::new());
        assert_eq!(out.len(), 10);
        assert!(out.iter().all(|c| c.iter().sum::<usize>() == 3));
    }
}
