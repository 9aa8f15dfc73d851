//! Hard instances built from graph and exact-cover problems, and exhaustive
//! solvers for those source problems.
//!
//! Each graph construction maps `(G, k)` to a party-control instance whose
//! answer equals the source answer: `k`-clique for the deletion variants,
//! dominating set of size at most `k` for the addition variants. Vertex `v`
//! becomes party `s_v`. Ties inside a voter's leading block of vertex
//! parties are broken by vertex order, and unlisted tails follow universe
//! order.

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::bribery::{BriberyInstance, CostModel, ShiftSchedule};
use crate::election::{Election, Goal, Party, PartySet, PartyUniverse, PreferenceOrder, Voter};
use crate::party_control::{PartyControlInstance, PartyControlVariant};
use crate::rational::{int, ratio};
use crate::{Error, Result};

/// Size guard for the source-problem solvers.
pub const SOURCE_GUARD: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    vertices: Vec<String>,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    /// Edges are unordered; duplicates collapse.
    pub fn new(vertices: Vec<String>, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let unique: BTreeSet<&String> = vertices.iter().collect();
        if unique.len() != vertices.len() {
            return Err(Error::InvalidInstance("duplicate vertex name".into()));
        }
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u >= vertices.len() || v >= vertices.len() {
                return Err(Error::InvalidInstance(format!("edge ({u}, {v}) names a missing vertex")));
            }
            if u == v {
                return Err(Error::InvalidInstance(format!("self-loop at `{}`", vertices[u])));
            }
            set.insert((u.min(v), u.max(v)));
        }
        Ok(Graph {
            vertices,
            edges: set.into_iter().collect(),
        })
    }

    /// Vertices named `0..n`.
    pub fn unnamed(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        Graph::new((0..n).map(|i| i.to_string()).collect(), edges)
    }

    /// One `u v` pair per line; a single token declares an isolated vertex;
    /// `#` starts a comment.
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut names: Vec<String> = Vec::new();
        let mut index = std::collections::HashMap::new();
        let mut edges = Vec::new();
        let mut id = |name: &str, names: &mut Vec<String>| {
            *index.entry(name.to_string()).or_insert_with(|| {
                names.push(name.to_string());
                names.len() - 1
            })
        };
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            let tokens: Vec<&str> = line.split_whitespace().collect();
            match tokens.as_slice() {
                [] => {}
                [v] => {
                    id(v, &mut names);
                }
                [u, v] => {
                    let (a, b) = (id(u, &mut names), id(v, &mut names));
                    edges.push((a, b));
                }
                _ => {
                    return Err(Error::parse(
                        format!("line {}", lineno + 1),
                        "expected `u v` or a single vertex",
                    ))
                }
            }
        }
        Graph::new(names, edges)
    }

    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        let mut seen = vec![false; self.vertices.len()];
        for &(u, v) in &self.edges {
            seen[u] = true;
            seen[v] = true;
            out.push_str(&format!("{} {}\n", self.vertices[u], self.vertices[v]));
        }
        for (i, name) in self.vertices.iter().enumerate() {
            if !seen[i] {
                out.push_str(&format!("{name}\n"));
            }
        }
        out
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    /// Edges `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.binary_search(&(u.min(v), u.max(v))).is_ok()
    }

    /// `v` and its neighbors, ascending.
    pub fn closed_neighborhood(&self, v: usize) -> Vec<usize> {
        (0..self.vertices.len())
            .filter(|&u| u == v || self.has_edge(u, v))
            .collect()
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Graph::unnamed(n, edges).expect("valid")
    }

    pub fn path(n: usize) -> Self {
        Graph::unnamed(n, (1..n).map(|v| (v - 1, v))).expect("valid")
    }

    /// Center `0` joined to `leaves` leaves.
    pub fn star(leaves: usize) -> Self {
        Graph::unnamed(leaves + 1, (1..=leaves).map(|v| (0, v))).expect("valid")
    }

    /// Each edge present independently with probability `p`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, n: usize, p: f64) -> Self {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(p) {
                    edges.push((u, v));
                }
            }
        }
        Graph::unnamed(n, edges).expect("valid")
    }
}

fn binom2(k: usize) -> usize {
    k * k.saturating_sub(1) / 2
}

fn vertex_party(name: &str) -> String {
    format!("s_{name}")
}

struct Builder {
    universe: Arc<PartyUniverse>,
    voters: Vec<Voter>,
}

impl Builder {
    fn new(fixed: &[&str], g: &Graph) -> Result<Self> {
        let names = fixed
            .iter()
            .map(|s| s.to_string())
            .chain(g.vertices().iter().map(|v| vertex_party(v)));
        Ok(Builder {
            universe: Arc::new(PartyUniverse::new(names)?),
            voters: Vec::new(),
        })
    }

    fn party(&self, name: &str) -> Party {
        self.universe.party(name).expect("declared party")
    }

    fn vertex(&self, g: &Graph, v: usize) -> Party {
        self.party(&vertex_party(&g.vertices()[v]))
    }

    fn voter(&mut self, id: String, prefix: &[Party]) -> Result<()> {
        let order = PreferenceOrder::with_prefix(self.universe.len(), prefix)?;
        self.voters.push(Voter::new(id, order));
        Ok(())
    }

    fn set(&self, names: &[&str]) -> PartySet {
        self.universe.set_of(names.iter().copied()).expect("declared parties")
    }

    fn vertex_set(&self, g: &Graph) -> PartySet {
        PartySet::from_parties(self.universe.len(), (0..g.num_vertices()).map(|v| self.vertex(g, v)))
    }

    fn election(self, running: PartySet, tau: crate::Rational) -> Result<(Arc<PartyUniverse>, Election)> {
        let u = self.universe.clone();
        Ok((u, Election::new(self.universe, running, self.voters, tau)?))
    }
}

fn require_edges(g: &Graph) -> Result<()> {
    if g.edges().is_empty() {
        Err(Error::InvalidInstance("construction needs at least one edge".into()))
    } else {
        Ok(())
    }
}

fn require_vertices(g: &Graph) -> Result<()> {
    if g.num_vertices() == 0 {
        Err(Error::InvalidInstance("construction needs at least one vertex".into()))
    } else {
        Ok(())
    }
}

/// Coalition-deletion instance, favored-party target: J+F is reachable by
/// deleting at most `k` coalition parties iff `g` has a `k`-clique.
pub fn clique_to_dcp_jf(g: &Graph, k: usize) -> Result<PartyControlInstance> {
    require_edges(g)?;
    let e = g.edges().len();
    let mut b = Builder::new(&["p1", "o1"], g)?;
    let (p1, o1) = (b.party("p1"), b.party("o1"));
    for &(x, y) in g.edges() {
        let (sx, sy) = (b.vertex(g, x), b.vertex(g, y));
        let tag = format!("{}-{}", g.vertices()[x], g.vertices()[y]);
        b.voter(format!("a:{tag}"), &[sx, sy, p1, o1])?;
        b.voter(format!("b:{tag}"), &[p1, o1])?;
        b.voter(format!("c1:{tag}"), &[o1])?;
        b.voter(format!("c2:{tag}"), &[o1])?;
    }
    let coalition = b.set(&["p1"]).union(&b.vertex_set(g));
    let m = b.universe.len();
    let (_, election) = b.election(PartySet::full(m), int(0))?;
    let goal = Goal::new(
        coalition,
        Some(p1),
        ratio(1, 2),
        ratio((e + binom2(k)) as i64, 2 * e as i64),
    )?;
    PartyControlInstance::new(election, PartySet::empty(m), k, PartyControlVariant::Dcp, goal)
}

/// Coalition-deletion instance with a threshold, coalition target only.
pub fn clique_to_dcp_j_threshold(g: &Graph, k: usize) -> Result<PartyControlInstance> {
    require_edges(g)?;
    let e = g.edges().len();
    let c = binom2(k);
    let mut b = Builder::new(&["p1", "o1"], g)?;
    let (p1, o1) = (b.party("p1"), b.party("o1"));
    for &(x, y) in g.edges() {
        let (sx, sy) = (b.vertex(g, x), b.vertex(g, y));
        b.voter(format!("a:{}-{}", g.vertices()[x], g.vertices()[y]), &[sx, sy, p1, o1])?;
    }
    for i in 0..e {
        b.voter(format!("b:{i}"), &[p1, o1])?;
    }
    for i in 0..e {
        b.voter(format!("c:{i}"), &[o1])?;
    }
    for i in 0..c {
        b.voter(format!("d:{i}"), &[o1])?;
    }
    let coalition = b.set(&["p1"]).union(&b.vertex_set(g));
    let m = b.universe.len();
    let tau = ratio((e + c) as i64, (3 * e + c) as i64);
    let (_, election) = b.election(PartySet::full(m), tau)?;
    let goal = Goal::joint(coalition, ratio(1, 2))?;
    PartyControlInstance::new(election, PartySet::empty(m), k, PartyControlVariant::Dcp, goal)
}

/// Opposition-deletion instance: the coalition is `{p1}` and each edge voter
/// falls through to `p1` only when both endpoint parties are gone.
pub fn clique_to_dop(g: &Graph, k: usize) -> Result<PartyControlInstance> {
    require_edges(g)?;
    let e = g.edges().len();
    let mut b = Builder::new(&["p1"], g)?;
    let p1 = b.party("p1");
    for &(x, y) in g.edges() {
        let (sx, sy) = (b.vertex(g, x), b.vertex(g, y));
        b.voter(format!("e:{}-{}", g.vertices()[x], g.vertices()[y]), &[sx, sy, p1])?;
    }
    let coalition = b.set(&["p1"]);
    let m = b.universe.len();
    let (_, election) = b.election(PartySet::full(m), int(0))?;
    let goal = Goal::joint(coalition, ratio(binom2(k) as i64, e as i64))?;
    PartyControlInstance::new(election, PartySet::empty(m), k, PartyControlVariant::Dop, goal)
}

/// Coalition-addition instance: vertex parties are coalition spoilers.
pub fn domset_to_acp(g: &Graph, k: usize) -> Result<PartyControlInstance> {
    require_vertices(g)?;
    let mut b = Builder::new(&["p1", "o2"], g)?;
    let (p1, o2) = (b.party("p1"), b.party("o2"));
    for v in 0..g.num_vertices() {
        let mut prefix: Vec<Party> = g.closed_neighborhood(v).into_iter().map(|u| b.vertex(g, u)).collect();
        prefix.extend([o2, p1]);
        let name = &g.vertices()[v];
        b.voter(format!("a:{name}"), &prefix)?;
        b.voter(format!("b:{name}"), &[o2, p1])?;
    }
    let spoilers = b.vertex_set(g);
    let coalition = b.set(&["p1"]).union(&spoilers);
    let running = b.set(&["p1", "o2"]);
    let (_, election) = b.election(running, int(0))?;
    let goal = Goal::joint(coalition, ratio(1, 2))?;
    PartyControlInstance::new(election, spoilers, k, PartyControlVariant::Acp, goal)
}

/// Opposition-addition instance with threshold `2/5`: dominated voters move
/// to spoilers that stay below the threshold.
pub fn domset_to_aop_threshold(g: &Graph, k: usize) -> Result<PartyControlInstance> {
    require_vertices(g)?;
    let mut b = Builder::new(&["p1", "o2", "o3"], g)?;
    let (p1, o2) = (b.party("p1"), b.party("o2"));
    for v in 0..g.num_vertices() {
        let name = &g.vertices()[v];
        for i in 1..=2 {
            b.voter(format!("a{i}:{name}"), &[p1, o2])?;
        }
        for i in 1..=2 {
            b.voter(format!("b{i}:{name}"), &[o2, p1])?;
        }
        let mut prefix: Vec<Party> = g.closed_neighborhood(v).into_iter().map(|u| b.vertex(g, u)).collect();
        prefix.extend([o2, p1]);
        b.voter(format!("c:{name}"), &prefix)?;
    }
    let spoilers = b.vertex_set(g);
    let coalition = b.set(&["p1"]);
    let running = b.set(&["p1", "o2", "o3"]);
    let (_, election) = b.election(running, ratio(2, 5))?;
    let goal = Goal::joint(coalition, ratio(1, 2))?;
    PartyControlInstance::new(election, spoilers, k, PartyControlVariant::Aop, goal)
}

/// Opposition-addition instance with a favored-party target and no
/// threshold: spoilers must pull every dominated voter away from `c2`.
pub fn domset_to_aop_jf(g: &Graph, k: usize) -> Result<PartyControlInstance> {
    require_vertices(g)?;
    let mut b = Builder::new(&["p1", "c2"], g)?;
    let (p1, c2) = (b.party("p1"), b.party("c2"));
    for v in 0..g.num_vertices() {
        let name = &g.vertices()[v];
        b.voter(format!("a:{name}"), &[p1, c2])?;
        b.voter(format!("b:{name}"), &[c2, p1])?;
        let mut prefix: Vec<Party> = g.closed_neighborhood(v).into_iter().map(|u| b.vertex(g, u)).collect();
        prefix.extend([c2, p1]);
        for i in 1..=2 {
            b.voter(format!("c{i}:{name}"), &prefix)?;
        }
    }
    let spoilers = b.vertex_set(g);
    let coalition = b.set(&["p1", "c2"]);
    let (_, election) = b.election(coalition.clone(), int(0))?;
    let goal = Goal::new(coalition, Some(p1), ratio(1, 2), ratio(1, 2))?;
    PartyControlInstance::new(election, spoilers, k, PartyControlVariant::Aop, goal)
}

/// Graph constructions by command-line name.
pub const GRAPH_REDUCTIONS: [&str; 6] = ["dcp-jf", "dcp-j-tau", "dop", "acp", "aop-tau", "aop-jf"];

pub fn graph_reduction(kind: &str, g: &Graph, k: usize) -> Result<PartyControlInstance> {
    match kind {
        "dcp-jf" => clique_to_dcp_jf(g, k),
        "dcp-j-tau" => clique_to_dcp_j_threshold(g, k),
        "dop" => clique_to_dop(g, k),
        "acp" => domset_to_acp(g, k),
        "aop-tau" => domset_to_aop_threshold(g, k),
        "aop-jf" => domset_to_aop_jf(g, k),
        other => Err(Error::Usage(format!("unknown reduction `{other}`"))),
    }
}

/// Whether `kind` reduces from clique (otherwise from dominating set).
pub fn is_clique_reduction(kind: &str) -> bool {
    matches!(kind, "dcp-jf" | "dcp-j-tau" | "dop")
}

/// Source answer for a graph construction.
pub fn graph_source_answer(kind: &str, g: &Graph, k: usize) -> Result<bool> {
    if is_clique_reduction(kind) {
        brute_force_clique(g, k)
    } else {
        brute_force_domset(g, k)
    }
}

/// A collection of 4-subsets of `0..elements`, each element in exactly 3.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactCoverInstance {
    names: Vec<String>,
    sets: Vec<[usize; 4]>,
}

impl ExactCoverInstance {
    pub fn new(names: Vec<String>, sets: Vec<[usize; 4]>) -> Result<Self> {
        let z = names.len();
        let mut count = vec![0usize; z];
        for (i, s) in sets.iter().enumerate() {
            let distinct: BTreeSet<usize> = s.iter().copied().collect();
            if distinct.len() != 4 || s.iter().any(|&x| x >= z) {
                return Err(Error::InvalidInstance(format!("set {i} is not a 4-subset of the elements")));
            }
            for &x in s {
                count[x] += 1;
            }
        }
        if let Some(x) = (0..z).find(|&x| count[x] != 3) {
            return Err(Error::InvalidInstance(format!(
                "element `{}` lies in {} sets, expected 3",
                names[x], count[x]
            )));
        }
        Ok(ExactCoverInstance { names, sets })
    }

    /// One set per line as four element tokens; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut names: Vec<String> = Vec::new();
        let mut sets = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let tokens: Vec<&str> = line.split_whitespace().collect();
            if tokens.len() != 4 {
                return Err(Error::parse(format!("line {}", lineno + 1), "expected four elements"));
            }
            let mut set = [0; 4];
            for (slot, t) in set.iter_mut().zip(tokens) {
                *slot = match names.iter().position(|n| n == t) {
                    Some(i) => i,
                    None => {
                        names.push(t.to_string());
                        names.len() - 1
                    }
                };
            }
            sets.push(set);
        }
        ExactCoverInstance::new(names, sets)
    }

    pub fn to_text(&self) -> String {
        self.sets
            .iter()
            .map(|s| s.map(|x| self.names[x].as_str()).join(" ") + "\n")
            .collect()
    }

    pub fn num_elements(&self) -> usize {
        self.names.len()
    }

    pub fn sets(&self) -> &[[usize; 4]] {
        &self.sets
    }

    /// A random instance over `z` elements (`z` divisible by 4). With
    /// `planted`, the first `z / 4` sets of a hidden shuffle form a cover.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, z: usize, planted: bool) -> Result<Self> {
        if z < 4 || z % 4 != 0 {
            return Err(Error::InvalidInstance("element count must be a positive multiple of 4".into()));
        }
        let names: Vec<String> = (0..z).map(|i| format!("z{i}")).collect();
        let chunked = |rng: &mut R, copies: usize| -> Vec<[usize; 4]> {
            loop {
                let mut slots: Vec<usize> = (0..z).flat_map(|x| std::iter::repeat(x).take(copies)).collect();
                slots.shuffle(rng);
                let sets: Vec<[usize; 4]> = slots
                    .chunks(4)
                    .map(|c| [c[0], c[1], c[2], c[3]])
                    .collect();
                if sets.iter().all(|s| s.iter().collect::<BTreeSet<_>>().len() == 4) {
                    return sets;
                }
            }
        };
        let mut sets = if planted {
            let mut order: Vec<usize> = (0..z).collect();
            order.shuffle(rng);
            let mut sets: Vec<[usize; 4]> = order.chunks(4).map(|c| [c[0], c[1], c[2], c[3]]).collect();
            sets.extend(chunked(rng, 2));
            sets
        } else {
            chunked(rng, 3)
        };
        for s in &mut sets {
            s.sort_unstable();
        }
        sets.shuffle(rng);
        ExactCoverInstance::new(names, sets)
    }
}

/// Coalition-shift bribery instance: a successful bribe within budget `3|Z|`
/// exists iff `ec` has an exact cover.
pub fn exact_cover_to_shift(ec: &ExactCoverInstance) -> Result<BriberyInstance> {
    let z = ec.num_elements();
    if z < 4 {
        return Err(Error::InvalidInstance("construction needs at least 4 elements".into()));
    }
    let d = ec.sets().len();
    let total = d + 3 * z + 1;
    let names = (1..=total).map(|i| format!("p{i}"));
    let universe = Arc::new(PartyUniverse::new(names)?);
    let m = universe.len();
    let main = Party(d);
    let fillers: Vec<Party> = (d + 1..total).map(Party).collect();
    let mut voters = Vec::with_capacity(2 * z);
    for x in 0..z {
        let mut prefix = vec![main];
        prefix.extend((0..d).filter(|&i| ec.sets()[i].contains(&x)).map(Party));
        prefix.extend(&fillers);
        let name = &ec.names[x];
        voters.push(Voter::new(format!("t1:{name}"), PreferenceOrder::with_prefix(m, &prefix)?));
        let mut prefix = vec![main];
        prefix.extend(&fillers);
        voters.push(Voter::new(format!("t2:{name}"), PreferenceOrder::with_prefix(m, &prefix)?));
    }
    let n = voters.len();
    let election = Election::new(universe, PartySet::full(m), voters, ratio(4, 2 * z as i64))?;
    let coalition = PartySet::from_parties(m, (0..d).map(Party));
    let goal = Goal::new(coalition, Some(Party(0)), ratio(1, 2), int(0))?;
    let model = CostModel::CoalitionShift(vec![ShiftSchedule::Linear(int(1)); n]);
    BriberyInstance::new(election, goal, model, int(3 * z as i64))
}

fn guard(size: usize) -> Result<()> {
    let guard = crate::bribery::default_guard(SOURCE_GUARD);
    if size > guard {
        Err(Error::GuardExceeded { size, guard })
    } else {
        Ok(())
    }
}

/// Whether `g` has a clique on `k` vertices.
pub fn brute_force_clique(g: &Graph, k: usize) -> Result<bool> {
    let n = g.num_vertices();
    guard(n)?;
    if k > n {
        return Ok(false);
    }
    Ok((0u32..1 << n).filter(|m| m.count_ones() as usize == k).any(|mask| {
        let vs: Vec<usize> = (0..n).filter(|v| mask >> v & 1 == 1).collect();
        vs.iter()
            .enumerate()
            .all(|(i, &u)| vs[i + 1..].iter().all(|&v| g.has_edge(u, v)))
    }))
}

/// Whether `g` has a dominating set of at most `k` vertices.
pub fn brute_force_domset(g: &Graph, k: usize) -> Result<bool> {
    let n = g.num_vertices();
    guard(n)?;
    let closed: Vec<u32> = (0..n)
        .map(|v| g.closed_neighborhood(v).into_iter().fold(0u32, |acc, u| acc | 1 << u))
        .collect();
    let all = if n == 0 { 0 } else { u32::MAX >> (32 - n) };
    Ok((0u32..1 << n)
        .filter(|m| m.count_ones() as usize <= k)
        .any(|mask| (0..n).filter(|v| mask >> v & 1 == 1).fold(0u32, |acc, v| acc | closed[v]) == all))
}

/// Whether some subcollection covers every element exactly once.
pub fn brute_force_exact_cover(ec: &ExactCoverInstance) -> Result<bool> {
    let z = ec.num_elements();
    guard(z)?;
    let masks: Vec<u32> = ec
        .sets()
        .iter()
        .map(|s| s.iter().fold(0u32, |acc, &x| acc | 1 << x))
        .collect();
    let all = u32::MAX >> (32 - z);
    fn cover(covered: u32, all: u32, masks: &[u32]) -> bool {
        if covered == all {
            return true;
        }
        let first = (!covered).trailing_zeros();
        masks
            .iter()
            .filter(|&&m| m >> first & 1 == 1 && m & covered == 0)
            .any(|&m| cover(covered | m, all, masks))
    }
    Ok(z == 0 || cover(0, all, &masks))
}
