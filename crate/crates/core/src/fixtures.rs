//! The five-party, 75-voter worked example used throughout the docs and
//! tests: coalition {p1, c1, c2}, favored p1, threshold 3/20 and targets
//! phi = rho = 1/2.

use std::sync::Arc;

use crate::election::{Election, Goal, PartySet, PartyUniverse, PreferenceOrder, Voter};
use crate::party_control::{PartyControlInstance, PartyControlVariant};
use crate::rational::ratio;

pub const EXAMPLE_PARTIES: [&str; 5] = ["p1", "c1", "c2", "o1", "o2"];

/// (top, second, number of voters) per voter type.
pub const EXAMPLE_VOTER_TYPES: [(&str, &str, usize); 5] = [
    ("p1", "o1", 20),
    ("c1", "o1", 10),
    ("o1", "c1", 20),
    ("o2", "c2", 20),
    ("o1", "p1", 5),
];

pub fn worked_example() -> (Election, Goal) {
    let universe = Arc::new(PartyUniverse::new(EXAMPLE_PARTIES).expect("static universe"));
    let mut voters = Vec::with_capacity(75);
    for (t, &(top, second, count)) in EXAMPLE_VOTER_TYPES.iter().enumerate() {
        let prefix = [
            universe.party(top).expect("static"),
            universe.party(second).expect("static"),
        ];
        let order = PreferenceOrder::with_prefix(universe.len(), &prefix).expect("static");
        for i in 0..count {
            voters.push(Voter::new(format!("t{}-{:02}", t + 1, i + 1), order.clone()));
        }
    }
    let running = PartySet::full(universe.len());
    let election =
        Election::new(universe.clone(), running, voters, ratio(3, 20)).expect("static election");
    let coalition = universe.set_of(["p1", "c1", "c2"]).expect("static");
    let favored = universe.party("p1").expect("static");
    let goal = Goal::new(coalition, Some(favored), ratio(1, 2), ratio(1, 2)).expect("static goal");
    (election, goal)
}

/// The worked example posed as deleting at most one opposition party.
pub fn worked_example_dop() -> PartyControlInstance {
    let (election, goal) = worked_example();
    let spoilers = PartySet::empty(election.universe().len());
    PartyControlInstance::new(election, spoilers, 1, PartyControlVariant::Dop, goal)
        .expect("static instance")
}
