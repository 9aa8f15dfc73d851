//! Parties, ballots, tallies and objective checks.
//!
//! This is the reference semantics: every solver's witness is re-tallied here
//! before it is reported, and every oracle evaluates candidate outcomes with
//! [`Tally`] and [`check_objectives`].

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use crate::rational::{self, Rational};
use crate::{Error, Result};

/// Index of a party in its [`PartyUniverse`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Party(pub usize);

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VoterId(pub String);

impl fmt::Display for VoterId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for VoterId {
    fn from(s: &str) -> Self {
        VoterId(s.to_string())
    }
}

/// Every party that might run, in a fixed canonical order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartyUniverse {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl PartyUniverse {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let mut index = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::DuplicateParty(name.clone()));
            }
        }
        if names.is_empty() {
            return Err(Error::InvalidElection("empty party universe".into()));
        }
        Ok(PartyUniverse { names, index })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, party: Party) -> &str {
        &self.names[party.0]
    }

    pub fn party(&self, name: &str) -> Result<Party> {
        self.index
            .get(name)
            .map(|&i| Party(i))
            .ok_or_else(|| Error::UnknownParty(name.to_string()))
    }

    pub fn parties(&self) -> impl Iterator<Item = Party> + '_ {
        (0..self.names.len()).map(Party)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn set_of<S: AsRef<str>>(&self, names: impl IntoIterator<Item = S>) -> Result<PartySet> {
        let mut set = PartySet::empty(self.len());
        for name in names {
            set.insert(self.party(name.as_ref())?);
        }
        Ok(set)
    }
}

/// A subset of a universe, iterated in canonical order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PartySet {
    members: Vec<bool>,
}

impl PartySet {
    pub fn empty(universe_len: usize) -> Self {
        PartySet {
            members: vec![false; universe_len],
        }
    }

    pub fn full(universe_len: usize) -> Self {
        PartySet {
            members: vec![true; universe_len],
        }
    }

    pub fn from_parties(universe_len: usize, parties: impl IntoIterator<Item = Party>) -> Self {
        let mut set = PartySet::empty(universe_len);
        for p in parties {
            set.insert(p);
        }
        set
    }

    pub fn universe_len(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, party: Party) -> bool {
        self.members.get(party.0).copied().unwrap_or(false)
    }

    pub fn insert(&mut self, party: Party) {
        self.members[party.0] = true;
    }

    pub fn remove(&mut self, party: Party) {
        self.members[party.0] = false;
    }

    pub fn len(&self) -> usize {
        self.members.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.members.iter().any(|&b| b)
    }

    pub fn iter(&self) -> impl Iterator<Item = Party> + '_ {
        self.members
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| Party(i))
    }

    pub fn is_subset(&self, other: &PartySet) -> bool {
        self.iter().all(|p| other.contains(p))
    }

    pub fn is_disjoint(&self, other: &PartySet) -> bool {
        self.iter().all(|p| !other.contains(p))
    }

    fn zip_with(&self, other: &PartySet, op: impl Fn(bool, bool) -> bool) -> PartySet {
        PartySet {
            members: self
                .members
                .iter()
                .zip(&other.members)
                .map(|(&a, &b)| op(a, b))
                .collect(),
        }
    }

    pub fn union(&self, other: &PartySet) -> PartySet {
        self.zip_with(other, |a, b| a || b)
    }

    pub fn intersection(&self, other: &PartySet) -> PartySet {
        self.zip_with(other, |a, b| a && b)
    }

    pub fn difference(&self, other: &PartySet) -> PartySet {
        self.zip_with(other, |a, b| a && !b)
    }
}

/// A strict total order over the whole universe, most preferred first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PreferenceOrder {
    ranking: Vec<Party>,
    position: Vec<usize>,
}

impl PreferenceOrder {
    pub fn new(ranking: Vec<Party>, universe_len: usize) -> Result<Self> {
        if ranking.len() != universe_len {
            return Err(Error::InvalidOrder(format!(
                "has {} entries, universe has {}",
                ranking.len(),
                universe_len
            )));
        }
        let mut position = vec![usize::MAX; universe_len];
        for (pos, p) in ranking.iter().enumerate() {
            if p.0 >= universe_len {
                return Err(Error::InvalidOrder(format!("party index {} out of range", p.0)));
            }
            if position[p.0] != usize::MAX {
                return Err(Error::InvalidOrder(format!("party index {} repeated", p.0)));
            }
            position[p.0] = pos;
        }
        Ok(PreferenceOrder { ranking, position })
    }

    pub fn from_names<S: AsRef<str>>(
        universe: &PartyUniverse,
        names: impl IntoIterator<Item = S>,
    ) -> Result<Self> {
        let ranking = names
            .into_iter()
            .map(|n| universe.party(n.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        PreferenceOrder::new(ranking, universe.len())
    }

    /// The listed parties first, then everything else in canonical order.
    pub fn with_prefix(universe_len: usize, prefix: &[Party]) -> Result<Self> {
        let mut seen = vec![false; universe_len];
        let mut ranking = Vec::with_capacity(universe_len);
        for &p in prefix {
            if p.0 >= universe_len || seen[p.0] {
                return Err(Error::InvalidOrder(format!("bad prefix entry {}", p.0)));
            }
            seen[p.0] = true;
            ranking.push(p);
        }
        ranking.extend((0..universe_len).filter(|&i| !seen[i]).map(Party));
        PreferenceOrder::new(ranking, universe_len)
    }

    pub fn ranking(&self) -> &[Party] {
        &self.ranking
    }

    pub fn position(&self, party: Party) -> usize {
        self.position[party.0]
    }

    pub fn prefers(&self, a: Party, b: Party) -> bool {
        self.position[a.0] < self.position[b.0]
    }

    pub fn top(&self) -> Party {
        self.ranking[0]
    }

    /// Moves `party` to the front, leaving every other pair untouched.
    pub fn lift(&self, party: Party) -> PreferenceOrder {
        let mut ranking = Vec::with_capacity(self.ranking.len());
        ranking.push(party);
        ranking.extend(self.ranking.iter().copied().filter(|&p| p != party));
        let mut position = vec![0; ranking.len()];
        for (pos, p) in ranking.iter().enumerate() {
            position[p.0] = pos;
        }
        PreferenceOrder { ranking, position }
    }

    /// Pairs `(p, q)` with `p` above `q` here and `q` above `p` in `new`.
    pub fn inversions<'a>(&'a self, new: &'a PreferenceOrder) -> impl Iterator<Item = (Party, Party)> + 'a {
        self.ranking.iter().enumerate().flat_map(move |(i, &p)| {
            self.ranking[i + 1..]
                .iter()
                .filter(move |&&q| new.prefers(q, p))
                .map(move |&q| (p, q))
        })
    }
}

/// Most-preferred party of `order` that belongs to `running`.
///
/// Panics if `running` is empty.
pub fn top_choice(order: &PreferenceOrder, running: &PartySet) -> Party {
    *order
        .ranking()
        .iter()
        .find(|&&p| running.contains(p))
        .expect("running set must be non-empty")
}

/// Minimum vote count for a party to be active: `ceil(tau * n)`.
pub fn threshold_count(tau: &Rational, n: u64) -> u64 {
    rational::ceil_mul(tau, n)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Voter {
    pub id: VoterId,
    pub order: PreferenceOrder,
}

impl Voter {
    pub fn new(id: impl Into<String>, order: PreferenceOrder) -> Self {
        Voter {
            id: VoterId(id.into()),
            order,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Election {
    universe: Arc<PartyUniverse>,
    running: PartySet,
    voters: Vec<Voter>,
    tau: Rational,
}

impl Election {
    pub fn new(
        universe: Arc<PartyUniverse>,
        running: PartySet,
        voters: Vec<Voter>,
        tau: Rational,
    ) -> Result<Self> {
        if running.universe_len() != universe.len() {
            return Err(Error::InvalidElection("running set over a different universe".into()));
        }
        if running.is_empty() {
            return Err(Error::NoRunningParties);
        }
        if tau < rational::zero() || tau >= rational::int(1) {
            return Err(Error::InvalidElection(format!(
                "threshold {} outside [0, 1)",
                rational::format(&tau)
            )));
        }
        let mut ids = HashSet::with_capacity(voters.len());
        for v in &voters {
            if v.order.ranking().len() != universe.len() {
                return Err(Error::InvalidOrder(format!("voter `{}`", v.id)));
            }
            if !ids.insert(&v.id) {
                return Err(Error::DuplicateVoter(v.id.0.clone()));
            }
        }
        Ok(Election {
            universe,
            running,
            voters,
            tau,
        })
    }

    pub fn universe(&self) -> &Arc<PartyUniverse> {
        &self.universe
    }

    pub fn running(&self) -> &PartySet {
        &self.running
    }

    pub fn voters(&self) -> &[Voter] {
        &self.voters
    }

    pub fn tau(&self) -> &Rational {
        &self.tau
    }

    pub fn num_voters(&self) -> usize {
        self.voters.len()
    }

    pub fn top_choice(&self, voter: usize) -> Party {
        top_choice(&self.voters[voter].order, &self.running)
    }

    pub fn threshold_count(&self) -> u64 {
        threshold_count(&self.tau, self.voters.len() as u64)
    }

    /// Votes per universe party (zero for parties not running).
    pub fn vote_counts(&self) -> Vec<u64> {
        let mut votes = vec![0u64; self.universe.len()];
        for v in &self.voters {
            votes[top_choice(&v.order, &self.running).0] += 1;
        }
        votes
    }

    pub fn tally(&self) -> Tally {
        Tally::from_counts(self.vote_counts(), &self.running, &self.tau)
    }

    /// Same voters and orders with a different running set.
    pub fn restrict(&self, new_running: PartySet) -> Result<Election> {
        Election::new(self.universe.clone(), new_running, self.voters.clone(), self.tau)
    }

    /// Same parties and threshold with a different electorate.
    pub fn with_voters(&self, voters: Vec<Voter>) -> Result<Election> {
        Election::new(self.universe.clone(), self.running.clone(), voters, self.tau)
    }
}

/// Free-function form of [`Election::tally`].
pub fn tally(election: &Election) -> Tally {
    election.tally()
}

/// Free-function form of [`Election::restrict`].
pub fn restrict(election: &Election, new_running: PartySet) -> Result<Election> {
    election.restrict(new_running)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tally {
    pub votes: Vec<u64>,
    pub total_voters: u64,
    pub threshold_count: u64,
    pub active: PartySet,
    pub active_votes: u64,
    pub fractions: Vec<Rational>,
}

impl Tally {
    /// Builds a tally from per-party vote counts; the electorate size is their
    /// sum. Parties outside `running` must have zero votes.
    pub fn from_counts(votes: Vec<u64>, running: &PartySet, tau: &Rational) -> Tally {
        debug_assert!(votes
            .iter()
            .enumerate()
            .all(|(i, &v)| v == 0 || running.contains(Party(i))));
        let total_voters: u64 = votes.iter().sum();
        let threshold = threshold_count(tau, total_voters);
        let active = PartySet::from_parties(
            votes.len(),
            running.iter().filter(|p| votes[p.0] >= threshold),
        );
        let active_votes: u64 = active.iter().map(|p| votes[p.0]).sum();
        let fractions = (0..votes.len())
            .map(|i| {
                if active_votes > 0 && active.contains(Party(i)) {
                    Rational::new(votes[i] as i64, active_votes as i64)
                } else {
                    Rational::zero()
                }
            })
            .collect();
        Tally {
            votes,
            total_voters,
            threshold_count: threshold,
            active,
            active_votes,
            fractions,
        }
    }

    pub fn fraction(&self, party: Party) -> Rational {
        self.fractions[party.0]
    }

    /// Active-vote share of a set of parties.
    pub fn share(&self, parties: &PartySet) -> Rational {
        parties.iter().map(|p| self.fractions[p.0]).sum()
    }
}

/// Coalition target and optional favored-party target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Goal {
    pub coalition: PartySet,
    pub favored: Option<Party>,
    pub phi: Rational,
    pub rho: Rational,
}

impl Goal {
    pub fn new(
        coalition: PartySet,
        favored: Option<Party>,
        phi: Rational,
        rho: Rational,
    ) -> Result<Self> {
        if coalition.is_empty() {
            return Err(Error::InvalidGoal("empty coalition".into()));
        }
        if let Some(p) = favored {
            if !coalition.contains(p) {
                return Err(Error::InvalidGoal("favored party outside the coalition".into()));
            }
        }
        if phi < rational::zero() || rho < rational::zero() {
            return Err(Error::InvalidGoal("targets must be non-negative".into()));
        }
        if favored.is_none() && rho > rational::zero() {
            return Err(Error::InvalidGoal("rho > 0 requires a favored party".into()));
        }
        Ok(Goal {
            coalition,
            favored,
            phi,
            rho,
        })
    }

    /// Joint objective only.
    pub fn joint(coalition: PartySet, phi: Rational) -> Result<Self> {
        Goal::new(coalition, None, phi, rational::zero())
    }

    /// Running parties split into favored / rest-of-coalition / opposition.
    ///
    /// With `rho = 0` the favored objective is vacuous, so any running
    /// coalition member may stand in as the favored party; solvers that route
    /// surplus votes to the favored party rely on this.
    pub fn groups(&self, running: &PartySet) -> Groups {
        let in_coalition = running.intersection(&self.coalition);
        let favored = match self.favored {
            Some(p) if running.contains(p) => Some(p),
            _ if self.rho.is_zero() => in_coalition.iter().next(),
            _ => None,
        };
        let rest = in_coalition
            .iter()
            .filter(|&p| Some(p) != favored)
            .collect();
        let opposition = running.difference(&self.coalition).iter().collect();
        Groups {
            favored,
            rest,
            opposition,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Groups {
    pub favored: Option<Party>,
    pub rest: Vec<Party>,
    pub opposition: Vec<Party>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ObjectiveCheck {
    pub joint: bool,
    pub favored: bool,
}

impl ObjectiveCheck {
    pub fn met(&self) -> bool {
        self.joint && self.favored
    }
}

/// Evaluates both objectives on a tally with exact rationals.
pub fn check_objectives(tally: &Tally, goal: &Goal) -> ObjectiveCheck {
    let coalition_share = tally.share(&goal.coalition);
    let favored_share = goal
        .favored
        .map(|p| tally.fraction(p))
        .unwrap_or_else(Rational::zero);
    ObjectiveCheck {
        joint: coalition_share >= goal.phi,
        favored: goal.rho.is_zero() || favored_share >= goal.rho * coalition_share,
    }
}

/// Objective check from aggregated active-vote counts of the favored party,
/// the rest of the coalition and the opposition. Agrees with
/// [`check_objectives`] on the tally those counts came from.
pub fn counts_meet_goal(favored: u64, rest: u64, opposition: u64, goal: &Goal) -> bool {
    let coalition = (favored + rest) as i128;
    let total = coalition + opposition as i128;
    let (phi_n, phi_d) = (*goal.phi.numer() as i128, *goal.phi.denom() as i128);
    let (rho_n, rho_d) = (*goal.rho.numer() as i128, *goal.rho.denom() as i128);
    // with no active votes every share is 0
    let joint = if total == 0 {
        phi_n <= 0
    } else {
        coalition * phi_d >= phi_n * total
    };
    let favored_ok = favored as i128 * rho_d >= rho_n * coalition;
    joint && favored_ok
}
