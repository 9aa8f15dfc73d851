//! Control by adding spoiler voters (AV) or deleting registered voters (DV).
//!
//! AV fixes the number `r` of added voters, which fixes the threshold
//! `T_r = ceil(tau * (n + r))`, and runs a knapsack over the non-favored
//! parties on (voters added, active rest-of-coalition votes, active
//! opposition votes). A party may take voters and still stay below `T_r`;
//! it then contributes nothing. The favored party's additions are settled
//! last.
//!
//! DV is AV on an empty electorate whose spoilers are the registered voters
//! at negated cost: keeping a voter is adding it back.

use std::sync::Arc;

use num_traits::Zero;

use crate::bribery::default_guard;
use crate::cost::{self, add, INF};
use crate::election::{
    check_objectives, counts_meet_goal, Election, Goal, Party, PartySet, PartyUniverse, PreferenceOrder, Tally,
    Voter, VoterId,
};
use crate::exec::Execution;
use crate::rational::{self, Rational};
use crate::{Error, Result};

/// Default guard for [`brute_force_voter_control`].
pub const VOTER_CONTROL_GUARD: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ControlMode {
    AddVoters,
    DeleteVoters,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Spoiler {
    pub id: VoterId,
    pub order: PreferenceOrder,
    pub cost: Rational,
}

impl Spoiler {
    pub fn new(id: impl Into<String>, order: PreferenceOrder, cost: Rational) -> Self {
        Spoiler {
            id: VoterId(id.into()),
            order,
            cost,
        }
    }

    fn voter(&self) -> Voter {
        Voter {
            id: self.id.clone(),
            order: self.order.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VoterControlInstance {
    pub election: Election,
    /// Addable voters (AV only).
    pub spoilers: Vec<Spoiler>,
    /// Price of deleting each registered voter (DV only).
    pub deletion_costs: Vec<Rational>,
    pub budget: Rational,
    pub goal: Goal,
    pub mode: ControlMode,
}

impl VoterControlInstance {
    pub fn new(
        election: Election,
        spoilers: Vec<Spoiler>,
        deletion_costs: Vec<Rational>,
        budget: Rational,
        goal: Goal,
        mode: ControlMode,
    ) -> Result<Self> {
        let m = election.universe().len();
        if goal.coalition.universe_len() != m {
            return Err(Error::InvalidInstance("goal over a different universe".into()));
        }
        let mut ids: std::collections::HashSet<&VoterId> = election.voters().iter().map(|v| &v.id).collect();
        for s in &spoilers {
            if s.order.ranking().len() != m {
                return Err(Error::InvalidOrder(format!("spoiler voter `{}`", s.id)));
            }
            if !ids.insert(&s.id) {
                return Err(Error::DuplicateVoter(s.id.0.clone()));
            }
        }
        if mode == ControlMode::DeleteVoters && deletion_costs.len() != election.num_voters() {
            return Err(Error::InvalidInstance(format!(
                "{} deletion costs for {} voters",
                deletion_costs.len(),
                election.num_voters()
            )));
        }
        Ok(VoterControlInstance {
            election,
            spoilers,
            deletion_costs,
            budget,
            goal,
            mode,
        })
    }

    fn expect_mode(&self, mode: ControlMode) -> Result<()> {
        if self.mode == mode {
            Ok(())
        } else {
            Err(Error::Usage(format!("solver expects a {mode:?} instance, got {:?}", self.mode)))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ControlDecision {
    pub feasible: bool,
    /// Added spoiler indices (AV) or deleted voter indices (DV), ascending.
    pub witness: Option<Vec<usize>>,
    pub cost: Option<Rational>,
}

impl ControlDecision {
    pub fn infeasible() -> Self {
        ControlDecision {
            feasible: false,
            witness: None,
            cost: None,
        }
    }

    pub fn witness_ids(&self, instance: &VoterControlInstance) -> Option<Vec<VoterId>> {
        let w = self.witness.as_ref()?;
        Some(
            w.iter()
                .map(|&i| match instance.mode {
                    ControlMode::AddVoters => instance.spoilers[i].id.clone(),
                    ControlMode::DeleteVoters => instance.election.voters()[i].id.clone(),
                })
                .collect(),
        )
    }
}

/// Sum of the `count` cheapest spoilers whose top running party is `party`;
/// `None` when the pool is too small.
pub fn add_pool_cost(instance: &VoterControlInstance, party: Party, count: usize) -> Option<Rational> {
    let running = instance.election.running();
    let mut pool: Vec<Rational> = instance
        .spoilers
        .iter()
        .filter(|s| crate::election::top_choice(&s.order, running) == party)
        .map(|s| s.cost)
        .collect();
    if count > pool.len() {
        return None;
    }
    pool.sort();
    Some(pool[..count].iter().sum())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Choice {
    cost: i64,
    r: usize,
    s: usize,
    ar: usize,
    ao: usize,
}

impl Choice {
    fn key(&self) -> (i64, usize, usize, usize, usize) {
        (self.cost, self.r, self.s, self.ar, self.ao)
    }
}

/// The AV dynamic program, exposed for inspection.
pub struct AddVotersProgram {
    scale: i64,
    n: usize,
    tau: Rational,
    base: Vec<usize>,
    favored: Option<Party>,
    /// Non-favored running parties, with whether each is in the coalition.
    others: Vec<(Party, bool)>,
    pools: Vec<Vec<usize>>,
    prefix: Vec<Vec<i64>>,
}

impl AddVotersProgram {
    pub fn new(instance: &VoterControlInstance) -> Result<Self> {
        instance.expect_mode(ControlMode::AddVoters)?;
        if instance.goal.rho > Rational::from_integer(1) {
            return Err(Error::InvalidGoal("rho above 1 is not supported by voter control".into()));
        }
        let election = &instance.election;
        let running = election.running();
        if instance.goal.rho > Rational::zero() && !instance.goal.favored.is_some_and(|p| running.contains(p)) {
            return Err(Error::InvalidGoal("favored party must be running when rho > 0".into()));
        }
        let scale = cost::scale_for(
            instance
                .spoilers
                .iter()
                .map(|s| &s.cost)
                .chain(std::iter::once(&instance.budget)),
        );
        let scaled: Vec<i64> = instance
            .spoilers
            .iter()
            .map(|s| rational::scale_to_int(&s.cost, scale))
            .collect();
        let m = election.universe().len();
        let mut pools = vec![Vec::new(); m];
        for (j, s) in instance.spoilers.iter().enumerate() {
            pools[crate::election::top_choice(&s.order, running).0].push(j);
        }
        for pool in &mut pools {
            pool.sort_by_key(|&j| (scaled[j], j));
        }
        let prefix = pools
            .iter()
            .map(|pool| cost::cheapest_prefix(&pool.iter().map(|&j| scaled[j]).collect::<Vec<_>>()))
            .collect();
        let groups = instance.goal.groups(running);
        let others = groups
            .rest
            .iter()
            .map(|&p| (p, true))
            .chain(groups.opposition.iter().map(|&p| (p, false)))
            .collect();
        Ok(AddVotersProgram {
            scale,
            n: election.num_voters(),
            tau: *election.tau(),
            base: election.vote_counts().into_iter().map(|v| v as usize).collect(),
            favored: groups.favored,
            others,
            pools,
            prefix,
        })
    }

    pub fn scale(&self) -> i64 {
        self.scale
    }

    pub fn max_added(&self) -> usize {
        self.pools.iter().map(Vec::len).sum()
    }

    /// `T_r`, the threshold once `r` voters have been added.
    pub fn threshold(&self, r: usize) -> usize {
        rational::ceil_mul(&self.tau, (self.n + r) as u64) as usize
    }

    /// Knapsack layers for `r` added voters; layer `k` covers the first `k`
    /// non-favored parties, indexed by `(s, a_rest, a_opp)`.
    fn layers(&self, r: usize) -> Vec<Vec<i64>> {
        let t = self.threshold(r);
        let w = self.n + r + 1;
        let act = |v: usize| if v >= t { v } else { 0 };
        let mut layers = Vec::with_capacity(self.others.len() + 1);
        let mut cur = vec![INF; (r + 1) * w * w];
        cur[0] = 0;
        layers.push(cur);
        for &(p, in_coalition) in &self.others {
            let prev = layers.last().expect("base layer");
            let mut next = vec![INF; (r + 1) * w * w];
            for s in 0..=r {
                for x in 0..=self.pools[p.0].len().min(s) {
                    let a = act(self.base[p.0] + x);
                    let px = self.prefix[p.0][x];
                    for ar in 0..w {
                        for ao in 0..w {
                            let c = prev[((s - x) * w + ar) * w + ao];
                            if c == INF {
                                continue;
                            }
                            let (nr, no) = if in_coalition { (ar + a, ao) } else { (ar, ao + a) };
                            if nr >= w || no >= w {
                                continue;
                            }
                            let slot = &mut next[(s * w + nr) * w + no];
                            *slot = (*slot).min(c + px);
                        }
                    }
                }
            }
            layers.push(next);
        }
        layers
    }

    /// Favored-party completion of a knapsack state: its added count, price
    /// and active votes.
    fn favored_part(&self, r: usize, s: usize) -> Option<(usize, i64, usize)> {
        let s1 = r - s;
        match self.favored {
            None => (s1 == 0).then_some((0, 0, 0)),
            Some(p1) => {
                if s1 > self.pools[p1.0].len() {
                    return None;
                }
                let v = self.base[p1.0] + s1;
                let a1 = if v >= self.threshold(r) { v } else { 0 };
                Some((s1, self.prefix[p1.0][s1], a1))
            }
        }
    }

    /// Least scaled price of adding exactly `r` voters so that the favored
    /// party, the rest of the coalition and the opposition hold `a1`,
    /// `a_rest` and `a_opp` active votes.
    pub fn g(&self, r: usize, a1: usize, a_rest: usize, a_opp: usize) -> Option<i64> {
        if r > self.max_added() {
            return None;
        }
        let w = self.n + r + 1;
        if a_rest >= w || a_opp >= w {
            return None;
        }
        let table = self.layers(r).pop().expect("final layer");
        (0..=r)
            .filter_map(|s| {
                let (_, c1, got) = self.favored_part(r, s)?;
                let c = table[(s * w + a_rest) * w + a_opp];
                (got == a1 && c != INF).then(|| c + c1)
            })
            .min()
    }

    fn best_for(&self, r: usize, goal: &Goal) -> Option<Choice> {
        let w = self.n + r + 1;
        let table = self.layers(r).pop().expect("final layer");
        let mut best: Option<Choice> = None;
        for s in 0..=r {
            let Some((_, c1, a1)) = self.favored_part(r, s) else {
                continue;
            };
            for ar in 0..w {
                for ao in 0..w {
                    let c = table[(s * w + ar) * w + ao];
                    if c == INF || !counts_meet_goal(a1 as u64, ar as u64, ao as u64, goal) {
                        continue;
                    }
                    let choice = Choice {
                        cost: c + c1,
                        r,
                        s,
                        ar,
                        ao,
                    };
                    if best.map_or(true, |b| choice.key() < b.key()) {
                        best = Some(choice);
                    }
                }
            }
        }
        best
    }

    fn best(&self, goal: &Goal, exec: Execution) -> Option<Choice> {
        let rs: Vec<usize> = (0..=self.max_added()).collect();
        exec.map(&rs, |&r| self.best_for(r, goal))
            .into_iter()
            .flatten()
            .min_by_key(Choice::key)
    }

    fn witness(&self, c: &Choice) -> Vec<usize> {
        let r = c.r;
        let t = self.threshold(r);
        let w = self.n + r + 1;
        let act = |v: usize| if v >= t { v } else { 0 };
        let layers = self.layers(r);
        let mut added = Vec::new();
        let (mut s, mut ar, mut ao) = (c.s, c.ar, c.ao);
        for k in (0..self.others.len()).rev() {
            let (p, in_coalition) = self.others[k];
            let target = layers[k + 1][(s * w + ar) * w + ao];
            let x = (0..=self.pools[p.0].len().min(s))
                .find(|&x| {
                    let a = act(self.base[p.0] + x);
                    let (pr, po) = if in_coalition { (ar.checked_sub(a), Some(ao)) } else { (Some(ar), ao.checked_sub(a)) };
                    match (pr, po) {
                        (Some(pr), Some(po)) => add(layers[k][((s - x) * w + pr) * w + po], self.prefix[p.0][x]) == target,
                        _ => false,
                    }
                })
                .expect("knapsack back-pointer");
            added.extend_from_slice(&self.pools[p.0][..x]);
            let a = act(self.base[p.0] + x);
            if in_coalition {
                ar -= a;
            } else {
                ao -= a;
            }
            s -= x;
        }
        debug_assert_eq!((s, ar, ao), (0, 0, 0));
        if let Some(p1) = self.favored {
            added.extend_from_slice(&self.pools[p1.0][..c.r - c.s]);
        }
        added.sort_unstable();
        added
    }
}

fn av_tally(instance: &VoterControlInstance, added: &[usize]) -> Result<Tally> {
    let mut voters = instance.election.voters().to_vec();
    voters.extend(added.iter().map(|&j| instance.spoilers[j].voter()));
    Ok(instance.election.with_voters(voters)?.tally())
}

fn dv_tally(instance: &VoterControlInstance, deleted: &[usize]) -> Result<Tally> {
    let mut gone = vec![false; instance.election.num_voters()];
    for &i in deleted {
        gone[i] = true;
    }
    let voters = instance
        .election
        .voters()
        .iter()
        .zip(&gone)
        .filter(|(_, &g)| !g)
        .map(|(v, _)| v.clone())
        .collect();
    Ok(instance.election.with_voters(voters)?.tally())
}

/// Re-tallies the controlled election for a witness; returns its price and
/// whether the goal holds.
pub fn evaluate_control(instance: &VoterControlInstance, witness: &[usize]) -> Result<(Rational, Tally, bool)> {
    let (cost, tally) = match instance.mode {
        ControlMode::AddVoters => {
            if witness.iter().any(|&j| j >= instance.spoilers.len()) {
                return Err(Error::InvalidInstance("witness names an unknown spoiler".into()));
            }
            (witness.iter().map(|&j| instance.spoilers[j].cost).sum(), av_tally(instance, witness)?)
        }
        ControlMode::DeleteVoters => {
            if witness.iter().any(|&i| i >= instance.election.num_voters()) {
                return Err(Error::InvalidInstance("witness names an unknown voter".into()));
            }
            (witness.iter().map(|&i| instance.deletion_costs[i]).sum(), dv_tally(instance, witness)?)
        }
    };
    let met = check_objectives(&tally, &instance.goal).met();
    Ok((cost, tally, met))
}

fn certify(instance: &VoterControlInstance, witness: Vec<usize>, cost: Rational) -> Result<ControlDecision> {
    let (actual, _, met) = evaluate_control(instance, &witness)?;
    if !met || actual != cost || actual > instance.budget {
        return Err(Error::WitnessRejected(format!(
            "voter set of cost {} (claimed {}), goal met: {met}",
            rational::format(&actual),
            rational::format(&cost)
        )));
    }
    Ok(ControlDecision {
        feasible: true,
        witness: Some(witness),
        cost: Some(cost),
    })
}

pub fn solve_add_voters(instance: &VoterControlInstance) -> Result<ControlDecision> {
    solve_add_voters_with(instance, Execution::default())
}

pub fn solve_add_voters_with(instance: &VoterControlInstance, exec: Execution) -> Result<ControlDecision> {
    let program = AddVotersProgram::new(instance)?;
    let budget = rational::scale_to_int(&instance.budget, program.scale);
    match program.best(&instance.goal, exec) {
        Some(c) if c.cost <= budget => {
            let witness = program.witness(&c);
            certify(instance, witness, cost::unscale(c.cost, program.scale))
        }
        _ => Ok(ControlDecision::infeasible()),
    }
}

/// The addition instance equivalent to a deletion instance: nobody
/// registered, every registered voter addable at minus its deletion cost,
/// budget lowered by the total deletion cost.
pub fn deletion_as_addition(instance: &VoterControlInstance) -> Result<VoterControlInstance> {
    instance.expect_mode(ControlMode::DeleteVoters)?;
    let e = &instance.election;
    let empty = Election::new(
        Arc::<PartyUniverse>::clone(e.universe()),
        PartySet::clone(e.running()),
        Vec::new(),
        *e.tau(),
    )?;
    let spoilers = e
        .voters()
        .iter()
        .zip(&instance.deletion_costs)
        .map(|(v, c)| Spoiler {
            id: v.id.clone(),
            order: v.order.clone(),
            cost: -c,
        })
        .collect();
    let total: Rational = instance.deletion_costs.iter().sum();
    VoterControlInstance::new(
        empty,
        spoilers,
        Vec::new(),
        instance.budget - total,
        instance.goal.clone(),
        ControlMode::AddVoters,
    )
}

pub fn solve_delete_voters(instance: &VoterControlInstance) -> Result<ControlDecision> {
    solve_delete_voters_with(instance, Execution::default())
}

pub fn solve_delete_voters_with(instance: &VoterControlInstance, exec: Execution) -> Result<ControlDecision> {
    let added = deletion_as_addition(instance)?;
    let kept = solve_add_voters_with(&added, exec)?;
    let Some(kept_set) = kept.witness else {
        return Ok(ControlDecision::infeasible());
    };
    let mut keep = vec![false; instance.election.num_voters()];
    for &i in &kept_set {
        keep[i] = true;
    }
    let deleted: Vec<usize> = (0..keep.len()).filter(|&i| !keep[i]).collect();
    let total: Rational = instance.deletion_costs.iter().sum();
    let cost = total + kept.cost.expect("feasible decision has a cost");
    certify(instance, deleted, cost)
}

/// Exhaustive subset search; `guard` bounds the spoiler pool (AV) or the
/// electorate (DV).
pub fn brute_force_voter_control(instance: &VoterControlInstance, guard: Option<usize>) -> Result<ControlDecision> {
    let guard = guard.unwrap_or_else(|| default_guard(VOTER_CONTROL_GUARD));
    let election = &instance.election;
    let running = election.running();
    let (costs, tops): (Vec<Rational>, Vec<Party>) = match instance.mode {
        ControlMode::AddVoters => instance
            .spoilers
            .iter()
            .map(|s| (s.cost, crate::election::top_choice(&s.order, running)))
            .unzip(),
        ControlMode::DeleteVoters => (0..election.num_voters())
            .map(|i| (instance.deletion_costs[i], election.top_choice(i)))
            .unzip(),
    };
    let size = costs.len();
    if size > guard {
        return Err(Error::GuardExceeded { size, guard });
    }
    let scale = cost::scale_for(costs.iter().chain(std::iter::once(&instance.budget)));
    let scaled: Vec<i64> = costs.iter().map(|c| rational::scale_to_int(c, scale)).collect();
    let budget = rational::scale_to_int(&instance.budget, scale);
    let base = election.vote_counts();
    let mut best: Option<(i64, u32)> = None;
    for mask in 0u32..(1 << size) {
        let members = (0..size).filter(|j| mask >> j & 1 == 1);
        let c: i64 = members.clone().map(|j| scaled[j]).sum();
        if c > budget || best.is_some_and(|b| c >= b.0) {
            continue;
        }
        let mut counts = base.clone();
        for j in members {
            match instance.mode {
                ControlMode::AddVoters => counts[tops[j].0] += 1,
                ControlMode::DeleteVoters => counts[tops[j].0] -= 1,
            }
        }
        let tally = Tally::from_counts(counts, running, election.tau());
        if check_objectives(&tally, &instance.goal).met() {
            best = Some((c, mask));
        }
    }
    Ok(match best {
        Some((c, mask)) => ControlDecision {
            feasible: true,
            witness: Some((0..size).filter(|j| mask >> j & 1 == 1).collect()),
            cost: Some(cost::unscale(c, scale)),
        },
        None => ControlDecision::infeasible(),
    })
}
