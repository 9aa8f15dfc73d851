//! JSON instance and result documents, solver dispatch, and a seeded random
//! instance generator.
//!
//! Rationals travel as `"num/den"` strings. Parsing validates everything and
//! reports the path of the offending field.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bribery::{
    brute_force_bribery, evaluate_bribe, solve_dollar_with, solve_swapshift_no_threshold_with, Bribe,
    BriberyInstance, CostModel, ShiftSchedule,
};
use crate::election::{check_objectives, Election, Goal, Party, PartySet, PartyUniverse, PreferenceOrder, Tally, Voter};
use crate::exec::Execution;
use crate::party_control::{solve_party_control_with, verify_party_witness, PartyControlInstance, PartyControlVariant};
use crate::rational::{self, int, ratio, Rational};
use crate::voter_control::{
    brute_force_voter_control, evaluate_control, solve_add_voters_with, solve_delete_voters_with, ControlMode,
    Spoiler, VoterControlInstance,
};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Problem {
    BriberyUnit,
    BriberyDollar,
    BriberySwap,
    BriberyShift,
    ControlAv,
    ControlDv,
    ControlDcp,
    ControlDop,
    ControlAcp,
    ControlAop,
}

impl Problem {
    pub const ALL: [Problem; 10] = [
        Problem::BriberyUnit,
        Problem::BriberyDollar,
        Problem::BriberySwap,
        Problem::BriberyShift,
        Problem::ControlAv,
        Problem::ControlDv,
        Problem::ControlDcp,
        Problem::ControlDop,
        Problem::ControlAcp,
        Problem::ControlAop,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Problem::BriberyUnit => "bribery-1",
            Problem::BriberyDollar => "bribery-dollar",
            Problem::BriberySwap => "bribery-swap",
            Problem::BriberyShift => "bribery-shift",
            Problem::ControlAv => "control-av",
            Problem::ControlDv => "control-dv",
            Problem::ControlDcp => "control-dcp",
            Problem::ControlDop => "control-dop",
            Problem::ControlAcp => "control-acp",
            Problem::ControlAop => "control-aop",
        }
    }

    fn is_bribery(self) -> bool {
        matches!(
            self,
            Problem::BriberyUnit | Problem::BriberyDollar | Problem::BriberySwap | Problem::BriberyShift
        )
    }

    fn party_variant(self) -> Option<PartyControlVariant> {
        match self {
            Problem::ControlDcp => Some(PartyControlVariant::Dcp),
            Problem::ControlDop => Some(PartyControlVariant::Dop),
            Problem::ControlAcp => Some(PartyControlVariant::Acp),
            Problem::ControlAop => Some(PartyControlVariant::Aop),
            _ => None,
        }
    }

    fn from_variant(v: PartyControlVariant) -> Problem {
        match v {
            PartyControlVariant::Dcp => Problem::ControlDcp,
            PartyControlVariant::Dop => Problem::ControlDop,
            PartyControlVariant::Acp => Problem::ControlAcp,
            PartyControlVariant::Aop => Problem::ControlAop,
        }
    }
}

impl std::str::FromStr for Problem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Problem::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| Error::parse("problem", format!("unknown problem `{s}`")))
    }
}

impl std::fmt::Display for Problem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A rational given either as a JSON integer or a `"num/den"` string.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RationalValue {
    Int(i64),
    Text(String),
}

impl RationalValue {
    fn parse(&self, path: &str) -> Result<Rational> {
        match self {
            RationalValue::Int(n) => Ok(int(*n)),
            RationalValue::Text(s) => parse_rational(s, path),
        }
    }

    fn of(value: &Rational) -> Self {
        if value.is_integer() {
            RationalValue::Int(value.to_integer())
        } else {
            RationalValue::Text(rational::format(value))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScheduleDoc {
    Table(Vec<RationalValue>),
    Slope { slope: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ShiftDoc {
    Shared(ScheduleDoc),
    PerVoter { per_voter: BTreeMap<String, ScheduleDoc> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VoterDoc {
    pub id: String,
    pub order: Vec<String>,
    #[serde(default)]
    pub cost: Option<String>,
    #[serde(default = "yes")]
    pub registered: bool,
}

fn yes() -> bool {
    true
}

/// Voter id, then the party `q` that moves up, then the party `p` it
/// overtakes. Missing entries cost 0.
pub type SwapCostsDoc = BTreeMap<String, BTreeMap<String, BTreeMap<String, String>>>;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDocument {
    pub problem: Option<String>,
    pub universe: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub running: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub spoiler_parties: Vec<String>,
    pub tau: Option<String>,
    pub phi: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<String>,
    pub coalition: Option<Vec<String>>,
    #[serde(default)]
    pub favored: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    pub voters: Option<Vec<VoterDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub swap_costs: Option<SwapCostsDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shift_schedule: Option<ShiftDoc>,
    /// Known answer, for test harnesses only; solvers ignore it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_feasible: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Instance {
    Bribery(BriberyInstance),
    VoterControl(VoterControlInstance),
    PartyControl(PartyControlInstance),
}

impl Instance {
    pub fn election(&self) -> &Election {
        match self {
            Instance::Bribery(b) => &b.election,
            Instance::VoterControl(v) => &v.election,
            Instance::PartyControl(p) => &p.election,
        }
    }

    pub fn goal(&self) -> &Goal {
        match self {
            Instance::Bribery(b) => &b.goal,
            Instance::VoterControl(v) => &v.goal,
            Instance::PartyControl(p) => &p.goal,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParsedInstance {
    pub problem: Problem,
    pub instance: Instance,
    pub expected_feasible: Option<bool>,
}

fn parse_rational(text: &str, path: &str) -> Result<Rational> {
    rational::parse(text).map_err(|_| Error::parse(path, format!("malformed rational `{text}`")))
}

fn required<'a, T>(value: &'a Option<T>, path: &str) -> Result<&'a T> {
    value
        .as_ref()
        .ok_or_else(|| Error::parse(path, "missing mandatory key"))
}

fn party_list(universe: &PartyUniverse, names: &[String], path: &str) -> Result<PartySet> {
    let mut set = PartySet::empty(universe.len());
    for (i, name) in names.iter().enumerate() {
        let p = universe
            .party(name)
            .map_err(|_| Error::parse(format!("{path}[{i}]"), format!("unknown party `{name}`")))?;
        set.insert(p);
    }
    Ok(set)
}

/// Parses and validates a document.
pub fn parse_instance(bytes: &[u8]) -> Result<ParsedInstance> {
    let doc: InstanceDocument =
        serde_json::from_slice(bytes).map_err(|e| Error::parse("$", e.to_string()))?;
    doc.to_instance()
}

impl InstanceDocument {
    pub fn to_instance(&self) -> Result<ParsedInstance> {
        let problem: Problem = required(&self.problem, "problem")?.parse()?;
        let names = required(&self.universe, "universe")?;
        let universe = Arc::new(PartyUniverse::new(names.iter().cloned()).map_err(|e| Error::parse("universe", e.to_string()))?);
        let m = universe.len();
        let running = match &self.running {
            Some(r) => party_list(&universe, r, "running")?,
            None => PartySet::full(m),
        };
        if running.is_empty() {
            return Err(Error::parse("running", "no parties running"));
        }
        let spoiler_parties = party_list(&universe, &self.spoiler_parties, "spoiler_parties")?;
        let tau = parse_rational(required(&self.tau, "tau")?, "tau")?;
        let phi = parse_rational(required(&self.phi, "phi")?, "phi")?;
        let rho = match &self.rho {
            Some(r) => parse_rational(r, "rho")?,
            None => Rational::zero(),
        };
        let coalition = party_list(&universe, required(&self.coalition, "coalition")?, "coalition")?;
        let favored = match &self.favored {
            Some(f) => Some(
                universe
                    .party(f)
                    .map_err(|_| Error::parse("favored", format!("unknown party `{f}`")))?,
            ),
            None => None,
        };
        let goal = Goal::new(coalition, favored, phi, rho).map_err(|e| Error::parse("coalition", e.to_string()))?;

        let voter_docs = required(&self.voters, "voters")?;
        if voter_docs.is_empty() {
            return Err(Error::parse("voters", "empty voter list"));
        }
        let mut registered = Vec::new();
        let mut unregistered = Vec::new();
        for (i, v) in voter_docs.iter().enumerate() {
            let order = PreferenceOrder::from_names(&universe, v.order.iter())
                .map_err(|e| Error::parse(format!("voters[{i}].order"), e.to_string()))?;
            let cost = match &v.cost {
                Some(c) => Some(parse_rational(c, &format!("voters[{i}].cost"))?),
                None => None,
            };
            let entry = (i, Voter::new(v.id.clone(), order), cost);
            if v.registered {
                registered.push(entry);
            } else {
                unregistered.push(entry);
            }
        }
        if problem != Problem::ControlAv {
            if let Some((i, _, _)) = unregistered.first() {
                return Err(Error::parse(
                    format!("voters[{i}].registered"),
                    "unregistered voters only make sense for control-av",
                ));
            }
        }
        let cost_of = |entries: &[(usize, Voter, Option<Rational>)]| -> Result<Vec<Rational>> {
            entries
                .iter()
                .map(|(i, _, c)| c.ok_or_else(|| Error::parse(format!("voters[{i}].cost"), "missing mandatory key")))
                .collect()
        };
        let voters: Vec<Voter> = registered.iter().map(|(_, v, _)| v.clone()).collect();
        let election = Election::new(universe.clone(), running, voters, tau).map_err(|e| Error::parse("voters", e.to_string()))?;
        let budget = || -> Result<Rational> { parse_rational(required(&self.budget, "budget")?, "budget") };

        let instance = if problem.is_bribery() {
            let model = match problem {
                Problem::BriberyUnit => CostModel::Uniform,
                Problem::BriberyDollar => CostModel::PerVoter(cost_of(&registered)?),
                Problem::BriberySwap => {
                    let table = required(&self.swap_costs, "swap_costs")?;
                    CostModel::SwapMatrix(swap_matrices(&universe, &registered, table)?)
                }
                _ => {
                    let shift = required(&self.shift_schedule, "shift_schedule")?;
                    CostModel::CoalitionShift(shift_schedules(&registered, shift)?)
                }
            };
            Instance::Bribery(
                BriberyInstance::new(election, goal, model, budget()?).map_err(|e| Error::parse("$", e.to_string()))?,
            )
        } else if let Some(variant) = problem.party_variant() {
            let k = *required(&self.k, "k")?;
            Instance::PartyControl(
                PartyControlInstance::new(election, spoiler_parties, k, variant, goal)
                    .map_err(|e| Error::parse("spoiler_parties", e.to_string()))?,
            )
        } else {
            let (spoilers, deletion, mode) = if problem == Problem::ControlAv {
                let costs = cost_of(&unregistered)?;
                let spoilers = unregistered
                    .iter()
                    .zip(costs)
                    .map(|((_, v, _), c)| Spoiler::new(v.id.0.clone(), v.order.clone(), c))
                    .collect();
                (spoilers, Vec::new(), ControlMode::AddVoters)
            } else {
                (Vec::new(), cost_of(&registered)?, ControlMode::DeleteVoters)
            };
            Instance::VoterControl(
                VoterControlInstance::new(election, spoilers, deletion, budget()?, goal, mode)
                    .map_err(|e| Error::parse("voters", e.to_string()))?,
            )
        };
        Ok(ParsedInstance {
            problem,
            instance,
            expected_feasible: self.expected_feasible,
        })
    }
}

fn swap_matrices(
    universe: &PartyUniverse,
    voters: &[(usize, Voter, Option<Rational>)],
    table: &SwapCostsDoc,
) -> Result<Vec<Vec<Vec<Rational>>>> {
    let m = universe.len();
    let mut index = BTreeMap::new();
    for (k, (_, v, _)) in voters.iter().enumerate() {
        index.insert(v.id.0.as_str(), k);
    }
    let mut out = vec![vec![vec![Rational::zero(); m]; m]; voters.len()];
    for (id, rows) in table {
        let Some(&k) = index.get(id.as_str()) else {
            return Err(Error::parse(format!("swap_costs.{id}"), "unknown voter"));
        };
        for (q, row) in rows {
            let qp = universe
                .party(q)
                .map_err(|_| Error::parse(format!("swap_costs.{id}.{q}"), "unknown party"))?;
            for (p, c) in row {
                let path = format!("swap_costs.{id}.{q}.{p}");
                let pp = universe.party(p).map_err(|_| Error::parse(&path, "unknown party"))?;
                out[k][pp.0][qp.0] = parse_rational(c, &path)?;
            }
        }
    }
    Ok(out)
}

fn schedule(doc: &ScheduleDoc, path: &str) -> Result<ShiftSchedule> {
    match doc {
        ScheduleDoc::Slope { slope } => Ok(ShiftSchedule::Linear(parse_rational(slope, &format!("{path}.slope"))?)),
        ScheduleDoc::Table(t) => Ok(ShiftSchedule::Table(
            t.iter()
                .enumerate()
                .map(|(i, v)| v.parse(&format!("{path}[{i}]")))
                .collect::<Result<_>>()?,
        )),
    }
}

fn shift_schedules(voters: &[(usize, Voter, Option<Rational>)], doc: &ShiftDoc) -> Result<Vec<ShiftSchedule>> {
    match doc {
        ShiftDoc::Shared(s) => {
            let s = schedule(s, "shift_schedule")?;
            Ok(vec![s; voters.len()])
        }
        ShiftDoc::PerVoter { per_voter } => {
            for id in per_voter.keys() {
                if !voters.iter().any(|(_, v, _)| &v.id.0 == id) {
                    return Err(Error::parse(format!("shift_schedule.per_voter.{id}"), "unknown voter"));
                }
            }
            voters
                .iter()
                .map(|(_, v, _)| {
                    let path = format!("shift_schedule.per_voter.{}", v.id);
                    let s = per_voter.get(&v.id.0).ok_or_else(|| Error::parse(&path, "missing mandatory key"))?;
                    schedule(s, &path)
                })
                .collect()
        }
    }
}

fn names_of(universe: &PartyUniverse, set: &PartySet) -> Vec<String> {
    set.iter().map(|p| universe.name(p).to_string()).collect()
}

fn order_names(universe: &PartyUniverse, order: &PreferenceOrder) -> Vec<String> {
    order.ranking().iter().map(|&p| universe.name(p).to_string()).collect()
}

fn schedule_doc(s: &ShiftSchedule) -> ScheduleDoc {
    match s {
        ShiftSchedule::Linear(slope) => ScheduleDoc::Slope {
            slope: rational::format(slope),
        },
        ShiftSchedule::Table(t) => ScheduleDoc::Table(t.iter().map(RationalValue::of).collect()),
    }
}

impl ParsedInstance {
    /// Canonical document for this instance.
    pub fn to_document(&self) -> InstanceDocument {
        let election = self.instance.election();
        let universe = election.universe();
        let goal = self.instance.goal();
        let voter_doc = |v: &Voter, cost: Option<&Rational>, registered: bool| VoterDoc {
            id: v.id.0.clone(),
            order: order_names(universe, &v.order),
            cost: cost.map(rational::format),
            registered,
        };
        let mut doc = InstanceDocument {
            problem: Some(self.problem.as_str().to_string()),
            universe: Some(universe.names().to_vec()),
            running: Some(names_of(universe, election.running())),
            tau: Some(rational::format(election.tau())),
            phi: Some(rational::format(&goal.phi)),
            rho: Some(rational::format(&goal.rho)),
            coalition: Some(names_of(universe, &goal.coalition)),
            favored: goal.favored.map(|p| universe.name(p).to_string()),
            expected_feasible: self.expected_feasible,
            ..InstanceDocument::default()
        };
        let voters = election.voters();
        match &self.instance {
            Instance::Bribery(b) => {
                doc.budget = Some(rational::format(&b.budget));
                let prices = match &b.cost_model {
                    CostModel::PerVoter(p) => Some(p),
                    _ => None,
                };
                doc.voters = Some(
                    voters
                        .iter()
                        .enumerate()
                        .map(|(i, v)| voter_doc(v, prices.map(|p| &p[i]), true))
                        .collect(),
                );
                match &b.cost_model {
                    CostModel::SwapMatrix(mats) => {
                        let mut table = SwapCostsDoc::new();
                        for (v, mat) in voters.iter().zip(mats) {
                            let mut rows = BTreeMap::new();
                            for q in universe.parties() {
                                let row: BTreeMap<String, String> = universe
                                    .parties()
                                    .filter(|p| !mat[p.0][q.0].is_zero())
                                    .map(|p| (universe.name(p).to_string(), rational::format(&mat[p.0][q.0])))
                                    .collect();
                                if !row.is_empty() {
                                    rows.insert(universe.name(q).to_string(), row);
                                }
                            }
                            if !rows.is_empty() {
                                table.insert(v.id.0.clone(), rows);
                            }
                        }
                        doc.swap_costs = Some(table);
                    }
                    CostModel::CoalitionShift(s) => {
                        doc.shift_schedule = Some(if s.windows(2).all(|w| w[0] == w[1]) && !s.is_empty() {
                            ShiftDoc::Shared(schedule_doc(&s[0]))
                        } else {
                            ShiftDoc::PerVoter {
                                per_voter: voters.iter().zip(s).map(|(v, s)| (v.id.0.clone(), schedule_doc(s))).collect(),
                            }
                        });
                    }
                    _ => {}
                }
            }
            Instance::VoterControl(vc) => {
                doc.budget = Some(rational::format(&vc.budget));
                let mut list: Vec<VoterDoc> = match vc.mode {
                    ControlMode::AddVoters => voters.iter().map(|v| voter_doc(v, None, true)).collect(),
                    ControlMode::DeleteVoters => voters
                        .iter()
                        .zip(&vc.deletion_costs)
                        .map(|(v, c)| voter_doc(v, Some(c), true))
                        .collect(),
                };
                list.extend(vc.spoilers.iter().map(|s| VoterDoc {
                    id: s.id.0.clone(),
                    order: order_names(universe, &s.order),
                    cost: Some(rational::format(&s.cost)),
                    registered: false,
                }));
                doc.voters = Some(list);
            }
            Instance::PartyControl(pc) => {
                doc.k = Some(pc.k);
                doc.spoiler_parties = names_of(universe, &pc.spoilers);
                doc.voters = Some(voters.iter().map(|v| voter_doc(v, None, true)).collect());
            }
        }
        doc
    }
}

impl From<BriberyInstance> for ParsedInstance {
    fn from(b: BriberyInstance) -> Self {
        let problem = match b.cost_model {
            CostModel::Uniform => Problem::BriberyUnit,
            CostModel::PerVoter(_) => Problem::BriberyDollar,
            CostModel::SwapMatrix(_) => Problem::BriberySwap,
            CostModel::CoalitionShift(_) => Problem::BriberyShift,
        };
        ParsedInstance {
            problem,
            instance: Instance::Bribery(b),
            expected_feasible: None,
        }
    }
}

impl From<VoterControlInstance> for ParsedInstance {
    fn from(v: VoterControlInstance) -> Self {
        let problem = match v.mode {
            ControlMode::AddVoters => Problem::ControlAv,
            ControlMode::DeleteVoters => Problem::ControlDv,
        };
        ParsedInstance {
            problem,
            instance: Instance::VoterControl(v),
            expected_feasible: None,
        }
    }
}

impl From<PartyControlInstance> for ParsedInstance {
    fn from(p: PartyControlInstance) -> Self {
        ParsedInstance {
            problem: Problem::from_variant(p.variant),
            instance: Instance::PartyControl(p),
            expected_feasible: None,
        }
    }
}

pub fn to_json(doc: &impl Serialize) -> String {
    serde_json::to_string_pretty(doc).expect("documents serialize") + "\n"
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TallyEntry {
    pub party: String,
    pub votes: u64,
    pub active: bool,
    pub fraction: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultDocument {
    pub problem: String,
    pub method: String,
    pub feasible: bool,
    pub cost: Option<String>,
    /// Bribe map (voter id to new order), voter-id list or party-id list.
    pub witness: serde_json::Value,
    pub tally_after: Vec<TallyEntry>,
    pub coalition_share: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub favored_ratio: Option<String>,
    pub checked: bool,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub immune: bool,
}

/// Decision and optimal cost, as compared between solver and oracle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub feasible: bool,
    pub cost: Option<Rational>,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let cost = self.cost.as_ref().map_or("-".to_string(), rational::format);
        write!(f, "feasible={} cost={}", self.feasible, cost)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub verdict: Verdict,
    pub document: ResultDocument,
}

fn tally_entries(universe: &PartyUniverse, running: &PartySet, tally: &Tally) -> Vec<TallyEntry> {
    running
        .iter()
        .map(|p| TallyEntry {
            party: universe.name(p).to_string(),
            votes: tally.votes[p.0],
            active: tally.active.contains(p),
            fraction: rational::format(&tally.fraction(p)),
        })
        .collect()
}

fn favored_ratio(tally: &Tally, goal: &Goal) -> Option<Rational> {
    let share = tally.share(&goal.coalition);
    let p = goal.favored?;
    (!share.is_zero()).then(|| tally.fraction(p) / share)
}

fn document(
    parsed: &ParsedInstance,
    method: &str,
    feasible: bool,
    cost: Option<Rational>,
    witness: serde_json::Value,
    after: (&PartySet, Tally),
    checked: bool,
) -> Solution {
    let universe = parsed.instance.election().universe();
    let goal = parsed.instance.goal();
    let (running, tally) = after;
    Solution {
        verdict: Verdict { feasible, cost },
        document: ResultDocument {
            problem: parsed.problem.as_str().to_string(),
            method: method.to_string(),
            feasible,
            cost: cost.as_ref().map(rational::format),
            witness,
            tally_after: tally_entries(universe, running, &tally),
            coalition_share: rational::format(&tally.share(&goal.coalition)),
            favored_ratio: favored_ratio(&tally, goal).as_ref().map(rational::format),
            checked,
            immune: false,
        },
    }
}

fn bribe_json(election: &Election, bribe: &Bribe) -> serde_json::Value {
    let universe = election.universe();
    let map: serde_json::Map<String, serde_json::Value> = bribe
        .changes
        .iter()
        .map(|(&i, order)| (election.voters()[i].id.0.clone(), serde_json::json!(order_names(universe, order))))
        .collect();
    serde_json::Value::Object(map)
}

/// Runs the solver matching the problem and re-validates the witness.
///
/// Swap and shift bribery with a positive threshold have no polynomial
/// solver; those fall back to exhaustive search under the default guard.
pub fn solve(parsed: &ParsedInstance, exec: Execution) -> Result<Solution> {
    match &parsed.instance {
        Instance::Bribery(b) => {
            let (method, d) = if !b.cost_model.is_lift_model() {
                ("dollar-dp", solve_dollar_with(b, exec)?)
            } else if b.election.tau().is_zero() {
                ("min-cost-flow", solve_swapshift_no_threshold_with(b, exec)?)
            } else {
                ("exhaustive", brute_force_bribery(b, None)?)
            };
            match (&d.witness, d.feasible) {
                (Some(bribe), true) => {
                    let report = evaluate_bribe(b, bribe)?;
                    let claimed = d.cost.expect("feasible decision has a cost");
                    let checked = report.accepted(&b.budget) && report.cost <= claimed;
                    let running = b.election.running().clone();
                    Ok(document(
                        parsed,
                        method,
                        true,
                        Some(claimed),
                        bribe_json(&b.election, bribe),
                        (&running, report.tally),
                        checked,
                    ))
                }
                _ => Ok(infeasible(parsed, method)),
            }
        }
        Instance::VoterControl(vc) => {
            let (method, d) = match vc.mode {
                ControlMode::AddVoters => ("add-voters-dp", solve_add_voters_with(vc, exec)?),
                ControlMode::DeleteVoters => ("delete-voters-dp", solve_delete_voters_with(vc, exec)?),
            };
            match &d.witness {
                Some(w) if d.feasible => {
                    let (actual, tally, met) = evaluate_control(vc, w)?;
                    let claimed = d.cost.expect("feasible decision has a cost");
                    let checked = met && actual == claimed && actual <= vc.budget;
                    let ids: Vec<String> = d.witness_ids(vc).unwrap_or_default().into_iter().map(|v| v.0).collect();
                    let running = vc.election.running().clone();
                    Ok(document(parsed, method, true, Some(claimed), serde_json::json!(ids), (&running, tally), checked))
                }
                _ => Ok(infeasible(parsed, method)),
            }
        }
        Instance::PartyControl(pc) => {
            let d = solve_party_control_with(pc, exec)?;
            let method = if d.immune { "immunity" } else { "subset-search" };
            let mut solution = match &d.witness {
                Some(action) if d.feasible => {
                    let checked = verify_party_witness(pc, action)?;
                    let running = if pc.variant.is_deletion() {
                        pc.election.running().difference(action)
                    } else {
                        pc.election.running().union(action)
                    };
                    let tally = pc.election.restrict(running.clone())?.tally();
                    let names = names_of(pc.election.universe(), action);
                    document(parsed, method, true, None, serde_json::json!(names), (&running, tally), checked)
                }
                _ => infeasible(parsed, method),
            };
            solution.document.immune = d.immune;
            Ok(solution)
        }
    }
}

fn infeasible(parsed: &ParsedInstance, method: &str) -> Solution {
    let election = parsed.instance.election();
    document(
        parsed,
        method,
        false,
        None,
        serde_json::Value::Null,
        (election.running(), election.tally()),
        false,
    )
}

/// Exhaustive answer for comparison with [`solve`].
pub fn oracle(parsed: &ParsedInstance, guard: Option<usize>) -> Result<Verdict> {
    match &parsed.instance {
        Instance::Bribery(b) => {
            let d = brute_force_bribery(b, guard)?;
            Ok(Verdict {
                feasible: d.feasible,
                cost: d.cost,
            })
        }
        Instance::VoterControl(vc) => {
            let d = brute_force_voter_control(vc, guard)?;
            Ok(Verdict {
                feasible: d.feasible,
                cost: d.cost,
            })
        }
        Instance::PartyControl(pc) => {
            let pool: Vec<Party> = pc.pool().iter().collect();
            let guard = guard.unwrap_or_else(|| crate::bribery::default_guard(16));
            if pool.len() > guard {
                return Err(Error::GuardExceeded {
                    size: pool.len(),
                    guard,
                });
            }
            let m = pc.election.universe().len();
            let mut feasible = false;
            for mask in 0u32..1 << pool.len() {
                if mask.count_ones() as usize > pc.k {
                    continue;
                }
                let action = PartySet::from_parties(m, (0..pool.len()).filter(|i| mask >> i & 1 == 1).map(|i| pool[i]));
                if verify_party_witness(pc, &action)? {
                    feasible = true;
                    break;
                }
            }
            Ok(Verdict { feasible, cost: None })
        }
    }
}

/// Value ranges for [`generate_random`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenParams {
    /// Costs are drawn from `1..=max_cost` (swap entries from `0..=max_cost`).
    pub max_cost: i64,
    pub tau: Vec<Rational>,
    pub phi: Vec<Rational>,
    pub rho: Vec<Rational>,
    /// Spoiler voters for `control-av`.
    pub spoilers: usize,
}

impl GenParams {
    pub fn for_problem(problem: Problem) -> Self {
        let tau = match problem {
            Problem::BriberySwap | Problem::BriberyShift => vec![int(0)],
            _ => vec![int(0), ratio(1, 4), ratio(2, 5)],
        };
        GenParams {
            max_cost: 5,
            tau,
            phi: vec![ratio(1, 3), ratio(1, 2), ratio(2, 3)],
            rho: vec![int(0), ratio(1, 2)],
            spoilers: 0,
        }
    }
}

/// Deterministic random instance: `n` registered voters with uniform random
/// orders over `m` parties named `p1..pm`.
pub fn generate_random(seed: u64, n: usize, m: usize, problem: Problem, params: &GenParams) -> Result<InstanceDocument> {
    if n == 0 || m == 0 {
        return Err(Error::Usage("need at least one voter and one party".into()));
    }
    if params.max_cost < 1 || params.tau.is_empty() || params.phi.is_empty() || params.rho.is_empty() {
        return Err(Error::Usage("empty parameter range".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let universe = Arc::new(PartyUniverse::new((1..=m).map(|i| format!("p{i}")))?);
    let all: Vec<Party> = universe.parties().collect();
    let order = |rng: &mut ChaCha8Rng| {
        let mut r = all.clone();
        r.shuffle(rng);
        PreferenceOrder::new(r, m).expect("permutation")
    };
    let voters: Vec<Voter> = (0..n).map(|i| Voter::new(format!("v{}", i + 1), order(&mut rng))).collect();
    let pick = |rng: &mut ChaCha8Rng, xs: &[Rational]| *xs.choose(rng).expect("non-empty");
    let tau = pick(&mut rng, &params.tau);
    let phi = pick(&mut rng, &params.phi);
    let mut rho = pick(&mut rng, &params.rho);

    let mut coalition = PartySet::from_parties(m, all.iter().copied().filter(|_| rng.gen_bool(0.5)));
    if coalition.is_empty() {
        coalition.insert(*all.choose(&mut rng).expect("m > 0"));
    }
    let members: Vec<Party> = coalition.iter().collect();
    let favored = if !rho.is_zero() || rng.gen_bool(0.5) {
        Some(*members.choose(&mut rng).expect("non-empty"))
    } else {
        None
    };
    if favored.is_none() {
        rho = Rational::zero();
    }

    let cost = |rng: &mut ChaCha8Rng| int(rng.gen_range(1..=params.max_cost));
    let max_budget = params.max_cost * n as i64 / 2;
    let budget = int(rng.gen_range(0..=max_budget.max(1)));
    let full = PartySet::full(m);

    let parsed: ParsedInstance = if problem.is_bribery() {
        let election = Election::new(universe.clone(), full, voters, tau)?;
        let goal = Goal::new(coalition.clone(), favored, phi, rho)?;
        let (model, budget) = match problem {
            Problem::BriberyUnit => (CostModel::Uniform, int(rng.gen_range(0..=n as i64))),
            Problem::BriberyDollar => (CostModel::PerVoter((0..n).map(|_| cost(&mut rng)).collect()), budget),
            Problem::BriberySwap => {
                let mats = (0..n)
                    .map(|_| {
                        (0..m)
                            .map(|p| (0..m).map(|q| if p == q { int(0) } else { int(rng.gen_range(0..=params.max_cost)) }).collect())
                            .collect()
                    })
                    .collect();
                (CostModel::SwapMatrix(mats), budget)
            }
            _ => (
                CostModel::CoalitionShift((0..n).map(|_| ShiftSchedule::Linear(cost(&mut rng))).collect()),
                budget,
            ),
        };
        BriberyInstance::new(election, goal, model, budget)?.into()
    } else if let Some(variant) = problem.party_variant() {
        let opposition = full.difference(&coalition);
        let candidates: Vec<Party> = match variant {
            PartyControlVariant::Acp => coalition.iter().filter(|&p| Some(p) != favored).collect(),
            PartyControlVariant::Aop => opposition.iter().collect(),
            _ => Vec::new(),
        };
        let mut spoilers = PartySet::from_parties(m, candidates.into_iter().filter(|_| rng.gen_bool(0.5)));
        if spoilers.len() == m {
            let keep = spoilers.iter().next().expect("non-empty");
            spoilers.remove(keep);
        }
        let running = full.difference(&spoilers);
        let election = Election::new(universe.clone(), running, voters, tau)?;
        let goal = Goal::new(coalition, favored, phi, rho)?;
        let k = rng.gen_range(0..=m);
        PartyControlInstance::new(election, spoilers, k, variant, goal)?.into()
    } else {
        let goal = Goal::new(coalition, favored, phi, rho)?;
        if problem == Problem::ControlAv {
            let spoilers = (0..params.spoilers)
                .map(|j| Spoiler::new(format!("w{}", j + 1), order(&mut rng), cost(&mut rng)))
                .collect();
            let election = Election::new(universe.clone(), full, voters, tau)?;
            VoterControlInstance::new(election, spoilers, Vec::new(), budget, goal, ControlMode::AddVoters)?.into()
        } else {
            let costs = (0..n).map(|_| cost(&mut rng)).collect();
            let election = Election::new(universe.clone(), full, voters, tau)?;
            VoterControlInstance::new(election, Vec::new(), costs, budget, goal, ControlMode::DeleteVoters)?.into()
        }
    };
    Ok(parsed.to_document())
}

/// Checks that a recorded objective holds on the unmodified election.
pub fn already_met(parsed: &ParsedInstance) -> bool {
    check_objectives(&parsed.instance.election().tally(), parsed.instance.goal()).met()
}
