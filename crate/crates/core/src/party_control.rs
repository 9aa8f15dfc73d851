//! Control by deleting or adding parties, bounded by a cardinality `k`.
//!
//! No polynomial algorithm is expected here, so the solver enumerates pool
//! subsets smallest first, in lexicographic order of party index, and returns
//! the first one that works. Two cases are settled without search: with no
//! threshold and no favored-party target, deleting coalition parties or
//! adding opposition parties can never raise the coalition's share.

use num_traits::Zero;

use crate::election::{check_objectives, Election, Goal, Party, PartySet, Tally};
use crate::exec::Execution;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PartyControlVariant {
    /// Delete coalition parties.
    Dcp,
    /// Delete opposition parties.
    Dop,
    /// Add coalition spoiler parties.
    Acp,
    /// Add opposition spoiler parties.
    Aop,
}

impl PartyControlVariant {
    pub fn is_deletion(self) -> bool {
        matches!(self, PartyControlVariant::Dcp | PartyControlVariant::Dop)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartyControlInstance {
    pub election: Election,
    pub spoilers: PartySet,
    pub k: usize,
    pub variant: PartyControlVariant,
    pub goal: Goal,
}

impl PartyControlInstance {
    pub fn new(
        election: Election,
        spoilers: PartySet,
        k: usize,
        variant: PartyControlVariant,
        goal: Goal,
    ) -> Result<Self> {
        let m = election.universe().len();
        if spoilers.universe_len() != m || goal.coalition.universe_len() != m {
            return Err(Error::InvalidInstance("party sets over a different universe".into()));
        }
        if !spoilers.is_disjoint(election.running()) {
            return Err(Error::InvalidInstance("spoiler parties must not be running".into()));
        }
        match variant {
            PartyControlVariant::Acp if !spoilers.is_subset(&goal.coalition) => {
                return Err(Error::InvalidInstance("coalition spoilers must belong to the coalition".into()))
            }
            PartyControlVariant::Aop if !spoilers.is_disjoint(&goal.coalition) => {
                return Err(Error::InvalidInstance("opposition spoilers must be outside the coalition".into()))
            }
            _ => {}
        }
        Ok(PartyControlInstance {
            election,
            spoilers,
            k,
            variant,
            goal,
        })
    }

    /// Parties the action may remove or add.
    pub fn pool(&self) -> PartySet {
        let running = self.election.running();
        match self.variant {
            PartyControlVariant::Dcp => running.intersection(&self.goal.coalition),
            PartyControlVariant::Dop => running.difference(&self.goal.coalition),
            PartyControlVariant::Acp | PartyControlVariant::Aop => self.spoilers.clone(),
        }
    }

    /// Running set after applying the action, or `None` if nothing would run.
    fn running_after(&self, action: &PartySet) -> Option<PartySet> {
        let running = self.election.running();
        let after = if self.variant.is_deletion() {
            running.difference(action)
        } else {
            running.union(action)
        };
        (!after.is_empty()).then_some(after)
    }

    fn tally_after(&self, action: &PartySet) -> Option<Result<Tally>> {
        let after = self.running_after(action)?;
        Some(self.election.restrict(after).map(|e| e.tally()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartyControlDecision {
    pub feasible: bool,
    pub witness: Option<PartySet>,
    /// Decided without search.
    pub immune: bool,
}

fn already_met(instance: &PartyControlInstance) -> bool {
    check_objectives(&instance.election.tally(), &instance.goal).met()
}

/// Verdict for the two immune configurations (coalition deletion or
/// opposition addition, `tau = 0`, `rho = 0`): feasible exactly when the goal
/// already holds. `None` elsewhere.
pub fn immunity_check(instance: &PartyControlInstance) -> Option<bool> {
    let immune_variant = matches!(instance.variant, PartyControlVariant::Dcp | PartyControlVariant::Aop);
    if immune_variant && instance.election.tau().is_zero() && instance.goal.rho.is_zero() {
        Some(already_met(instance))
    } else {
        None
    }
}

/// Whether applying `action` and re-tallying meets the goal.
pub fn verify_party_witness(instance: &PartyControlInstance, action: &PartySet) -> Result<bool> {
    if action.universe_len() != instance.election.universe().len() || !action.is_subset(&instance.pool()) {
        return Err(Error::InvalidInstance("action outside the variant's pool".into()));
    }
    if action.len() > instance.k {
        return Err(Error::InvalidInstance(format!(
            "action of {} parties exceeds k = {}",
            action.len(),
            instance.k
        )));
    }
    match instance.tally_after(action) {
        None => Ok(false),
        Some(t) => Ok(check_objectives(&t?, &instance.goal).met()),
    }
}

fn combinations(items: &[Party], size: usize) -> Vec<Vec<Party>> {
    fn go(items: &[Party], size: usize, start: usize, cur: &mut Vec<Party>, out: &mut Vec<Vec<Party>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            if items.len() - i < size - cur.len() {
                break;
            }
            cur.push(items[i]);
            go(items, size, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(items, size, 0, &mut Vec::new(), &mut out);
    out
}

pub fn solve_party_control(instance: &PartyControlInstance) -> Result<PartyControlDecision> {
    solve_party_control_with(instance, Execution::default())
}

pub fn solve_party_control_with(instance: &PartyControlInstance, exec: Execution) -> Result<PartyControlDecision> {
    let m = instance.election.universe().len();
    if let Some(feasible) = immunity_check(instance) {
        return Ok(PartyControlDecision {
            feasible,
            witness: feasible.then(|| PartySet::empty(m)),
            immune: true,
        });
    }
    let pool: Vec<Party> = instance.pool().iter().collect();
    let goal = &instance.goal;
    for size in 0..=instance.k.min(pool.len()) {
        let candidates = combinations(&pool, size);
        let works = |combo: &Vec<Party>| {
            let action = PartySet::from_parties(m, combo.iter().copied());
            match instance.tally_after(&action) {
                Some(Ok(t)) => check_objectives(&t, goal).met(),
                _ => false,
            }
        };
        if let Some(i) = exec.position_first(&candidates, works) {
            let action = PartySet::from_parties(m, candidates[i].iter().copied());
            if !verify_party_witness(instance, &action)? {
                return Err(Error::WitnessRejected("party set fails on re-tally".into()));
            }
            return Ok(PartyControlDecision {
                feasible: true,
                witness: Some(action),
                immune: false,
            });
        }
    }
    Ok(PartyControlDecision {
        feasible: false,
        witness: None,
        immune: false,
    })
}
