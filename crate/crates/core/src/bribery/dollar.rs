//! Unit and per-voter bribery for any threshold.
//!
//! An undetermined bribe removes `l` voters whose top choice is not the
//! favored party and hands `d` new votes to the rest of the coalition. Its
//! cheapest price, split by the resulting active vote totals, is
//!
//! ```text
//! g(l, a_opp, d, a_rest) = min over l_o + l_r = l of f(l_o, a_opp) + h(l_r, d, a_rest)
//! ```
//!
//! where `f` ranges over the opposition parties and `h` over the rest of the
//! coalition, both built party by party. The remaining `l - d` bribed votes
//! go to the favored party; if `d > l` the missing `d - l` votes are bought
//! from the favored party's own voters.

use std::cmp::Ordering;

use super::{certify, check_dp_goal, Bribe, BriberyDecision, BriberyInstance};
use crate::cost::{self, add, INF};
use crate::election::{counts_meet_goal, Party};
use crate::exec::Execution;
use crate::rational;
use crate::{Error, Result};

pub struct DollarProgram {
    scale: i64,
    n: usize,
    threshold: usize,
    favored: Option<Party>,
    rest: Vec<Party>,
    opposition: Vec<Party>,
    votes: Vec<usize>,
    /// Voters topping each party, cheapest first.
    pools: Vec<Vec<usize>>,
    prefix: Vec<Vec<i64>>,
    lo: usize,
    lr: usize,
    f: Vec<Vec<i64>>,
    h: Vec<Vec<i64>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Choice {
    cost: i64,
    lo: usize,
    ao: usize,
    lr: usize,
    d: usize,
    ar: usize,
}

impl Choice {
    fn key(&self) -> (i64, usize, usize, usize, usize, usize) {
        (self.cost, self.lo, self.ao, self.lr, self.d, self.ar)
    }
}

fn better(a: Option<Choice>, b: Option<Choice>) -> Option<Choice> {
    match (a, b) {
        (Some(x), Some(y)) => Some(if y.key().cmp(&x.key()) == Ordering::Less { y } else { x }),
        (x, None) => x,
        (None, y) => y,
    }
}

impl DollarProgram {
    pub fn new(instance: &BriberyInstance) -> Result<Self> {
        DollarProgram::with(instance, Execution::default())
    }

    pub fn with(instance: &BriberyInstance, exec: Execution) -> Result<Self> {
        let election = &instance.election;
        let prices = instance
            .cost_model
            .voter_prices(election.num_voters())
            .ok_or_else(|| Error::InvalidInstance("solver needs unit or per-voter prices".into()))?;
        check_dp_goal(instance)?;
        let scale = cost::scale_for(prices.iter().chain(std::iter::once(&instance.budget)));
        let scaled: Vec<i64> = prices.iter().map(|p| rational::scale_to_int(p, scale)).collect();

        let n = election.num_voters();
        let groups = instance.goal.groups(election.running());
        let votes: Vec<usize> = election.vote_counts().into_iter().map(|v| v as usize).collect();
        let mut pools = vec![Vec::new(); votes.len()];
        for i in 0..n {
            pools[election.top_choice(i).0].push(i);
        }
        for pool in &mut pools {
            pool.sort_by_key(|&i| (scaled[i], i));
        }
        let prefix = pools
            .iter()
            .map(|pool| cost::cheapest_prefix(&pool.iter().map(|&i| scaled[i]).collect::<Vec<_>>()))
            .collect();

        let lo = groups.opposition.iter().map(|p| votes[p.0]).sum();
        let lr = groups.rest.iter().map(|p| votes[p.0]).sum();
        let mut program = DollarProgram {
            scale,
            n,
            threshold: election.threshold_count() as usize,
            favored: groups.favored,
            rest: groups.rest,
            opposition: groups.opposition,
            votes,
            pools,
            prefix,
            lo,
            lr,
            f: Vec::new(),
            h: Vec::new(),
        };
        program.build_f(exec);
        program.build_h(exec);
        Ok(program)
    }

    /// Multiplier applied to prices and budget before the integer DP.
    pub fn scale(&self) -> i64 {
        self.scale
    }

    fn active(&self, votes: usize) -> usize {
        if votes >= self.threshold {
            votes
        } else {
            0
        }
    }

    fn fi(&self, l: usize, a: usize) -> usize {
        l * (self.n + 1) + a
    }

    fn hi(&self, l: usize, d: usize, a: usize) -> usize {
        (l * (self.n + 1) + d) * (self.n + 1) + a
    }

    fn build_f(&mut self, exec: Execution) {
        let w = self.n + 1;
        let mut cur = vec![INF; (self.lo + 1) * w];
        cur[0] = 0;
        self.f.push(cur);
        for k in 0..self.opposition.len() {
            let p = self.opposition[k].0;
            let prev = self.f.last().expect("base layer");
            let rows: Vec<usize> = (0..=self.lo).collect();
            let next = exec.map(&rows, |&l| {
                let mut row = vec![INF; w];
                for x in 0..=self.votes[p].min(l) {
                    let act = self.active(self.votes[p] - x);
                    for a in act..w {
                        let c = add(prev[self.fi(l - x, a - act)], self.prefix[p][x]);
                        if c < row[a] {
                            row[a] = c;
                        }
                    }
                }
                row
            });
            self.f.push(next.concat());
        }
    }

    fn build_h(&mut self, exec: Execution) {
        let w = self.n + 1;
        let mut cur = vec![INF; (self.lr + 1) * w * w];
        cur[0] = 0;
        self.h.push(cur);
        for k in 0..self.rest.len() {
            let p = self.rest[k].0;
            let prev = self.h.last().expect("base layer");
            let rows: Vec<usize> = (0..=self.lr).collect();
            let next = exec.map(&rows, |&l| {
                let mut block = vec![INF; w * w];
                for x in 0..=self.votes[p].min(l) {
                    let px = self.prefix[p][x];
                    for d in 0..w {
                        for y in 0..=d {
                            let act = self.active(self.votes[p] - x + y);
                            for a in act..w {
                                let c = add(prev[self.hi(l - x, d - y, a - act)], px);
                                let slot = &mut block[d * w + a];
                                if c < *slot {
                                    *slot = c;
                                }
                            }
                        }
                    }
                }
                block
            });
            self.h.push(next.concat());
        }
    }

    /// Least scaled price of an undetermined bribe with the given totals, or
    /// `None` if none exists.
    pub fn g(&self, l: usize, a_opp: usize, d: usize, a_rest: usize) -> Option<i64> {
        if a_opp > self.n || d > self.n || a_rest > self.n {
            return None;
        }
        let f = self.f.last().expect("f layer");
        let h = self.h.last().expect("h layer");
        (0..=l.min(self.lo))
            .filter(|&lo| l - lo <= self.lr)
            .map(|lo| add(f[self.fi(lo, a_opp)], h[self.hi(l - lo, d, a_rest)]))
            .min()
            .filter(|&c| c != INF)
    }

    fn favored_extra(&self, l: usize, d: usize) -> Option<(i64, usize)> {
        match self.favored {
            None => (l == d).then_some((0, 0)),
            Some(p1) => {
                let base = self.votes[p1.0];
                if d > l {
                    let take = d - l;
                    (take <= base).then(|| (self.prefix[p1.0][take], self.active(base - take)))
                } else {
                    Some((0, self.active(base + l - d)))
                }
            }
        }
    }

    fn best(&self, instance: &BriberyInstance, exec: Execution) -> Option<Choice> {
        let w = self.n + 1;
        let f = self.f.last().expect("f layer");
        let h = self.h.last().expect("h layer");
        let goal = &instance.goal;
        let rows: Vec<usize> = (0..=self.lo).collect();
        let per_row = exec.map(&rows, |&lo| {
            let mut best = None;
            for ao in 0..w {
                let fc = f[self.fi(lo, ao)];
                if fc == INF {
                    continue;
                }
                for lr in 0..=self.lr {
                    for d in 0..w {
                        let Some((extra, a1)) = self.favored_extra(lo + lr, d) else {
                            continue;
                        };
                        for ar in 0..w {
                            let hc = h[self.hi(lr, d, ar)];
                            if hc == INF || !counts_meet_goal(a1 as u64, ar as u64, ao as u64, goal) {
                                continue;
                            }
                            let c = Choice {
                                cost: fc + hc + extra,
                                lo,
                                ao,
                                lr,
                                d,
                                ar,
                            };
                            best = better(best, Some(c));
                        }
                    }
                }
            }
            best
        });
        per_row.into_iter().fold(None, better)
    }

    fn witness(&self, instance: &BriberyInstance, c: &Choice) -> Bribe {
        let mut removed = Vec::new();
        let mut targets = Vec::new();

        let (mut l, mut a) = (c.lo, c.ao);
        for k in (0..self.opposition.len()).rev() {
            let p = self.opposition[k].0;
            let (prev, cur) = (&self.f[k], &self.f[k + 1]);
            let x = (0..=self.votes[p].min(l))
                .find(|&x| {
                    let act = self.active(self.votes[p] - x);
                    act <= a && add(prev[self.fi(l - x, a - act)], self.prefix[p][x]) == cur[self.fi(l, a)]
                })
                .expect("f back-pointer");
            removed.extend_from_slice(&self.pools[p][..x]);
            a -= self.active(self.votes[p] - x);
            l -= x;
        }

        let (mut l, mut d, mut a) = (c.lr, c.d, c.ar);
        for k in (0..self.rest.len()).rev() {
            let p = self.rest[k].0;
            let (prev, cur) = (&self.h[k], &self.h[k + 1]);
            let target = cur[self.hi(l, d, a)];
            let (x, y) = (0..=self.votes[p].min(l))
                .flat_map(|x| (0..=d).map(move |y| (x, y)))
                .find(|&(x, y)| {
                    let act = self.active(self.votes[p] - x + y);
                    act <= a && add(prev[self.hi(l - x, d - y, a - act)], self.prefix[p][x]) == target
                })
                .expect("h back-pointer");
            removed.extend_from_slice(&self.pools[p][..x]);
            targets.extend(std::iter::repeat(Party(p)).take(y));
            a -= self.active(self.votes[p] - x + y);
            l -= x;
            d -= y;
        }

        let total_l = c.lo + c.lr;
        if let Some(p1) = self.favored {
            if c.d > total_l {
                removed.extend_from_slice(&self.pools[p1.0][..c.d - total_l]);
            } else {
                targets.extend(std::iter::repeat(p1).take(total_l - c.d));
            }
        }
        debug_assert_eq!(removed.len(), targets.len());

        let election = &instance.election;
        let mut bribe = Bribe::default();
        for (&i, &t) in removed.iter().zip(&targets) {
            if election.top_choice(i) != t {
                bribe.changes.insert(i, election.voters()[i].order.lift(t));
            }
        }
        bribe
    }
}

pub fn solve_dollar(instance: &BriberyInstance) -> Result<BriberyDecision> {
    solve_dollar_with(instance, Execution::default())
}

pub fn solve_dollar_with(instance: &BriberyInstance, exec: Execution) -> Result<BriberyDecision> {
    let program = DollarProgram::with(instance, exec)?;
    let budget = rational::scale_to_int(&instance.budget, program.scale);
    match program.best(instance, exec) {
        Some(c) if c.cost <= budget => {
            let bribe = program.witness(instance, &c);
            certify(instance, bribe, cost::unscale(c.cost, program.scale))
        }
        _ => Ok(BriberyDecision::infeasible()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bribery::CostModel;
    use crate::fixtures::worked_example;
    use crate::rational::{int, ratio};

    #[test]
    fn worked_example_needs_bribes() {
        let (election, goal) = worked_example();
        let inst = BriberyInstance::new(election.clone(), goal.clone(), CostModel::Uniform, int(0)).unwrap();
        assert!(!solve_dollar(&inst).unwrap().feasible);
        // two opposition voters lift c1 over the threshold, six more move to
        // p1: coalition 38 of 75 active votes, p1 26 of 38
        let inst = BriberyInstance::new(election.clone(), goal.clone(), CostModel::Uniform, int(75)).unwrap();
        let d = solve_dollar(&inst).unwrap();
        assert_eq!(d.cost, Some(int(8)));
        assert_eq!(d.witness.unwrap().changes.len(), 8);
        let inst = BriberyInstance::new(election, goal, CostModel::Uniform, int(7)).unwrap();
        assert!(!solve_dollar(&inst).unwrap().feasible);
    }

    #[test]
    fn satisfied_goal_is_free() {
        let (election, _) = worked_example();
        let u = election.universe().clone();
        let goal = crate::election::Goal::joint(u.set_of(["p1", "o1"]).unwrap(), ratio(1, 2)).unwrap();
        let inst = BriberyInstance::new(election, goal, CostModel::Uniform, int(0)).unwrap();
        let d = solve_dollar(&inst).unwrap();
        assert_eq!(d.cost, Some(int(0)));
        assert!(d.witness.unwrap().is_empty());
    }

    #[test]
    fn strategies_agree_on_worked_example() {
        let (election, goal) = worked_example();
        let inst = BriberyInstance::new(election, goal, CostModel::Uniform, int(20)).unwrap();
        let seq = solve_dollar_with(&inst, Execution::Sequential).unwrap();
        let par = solve_dollar_with(&inst, Execution::Parallel).unwrap();
        assert_eq!(seq, par);
    }
}
