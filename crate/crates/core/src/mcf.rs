//! Integral minimum-cost flow by successive shortest augmenting paths.
//!
//! Costs are non-negative, so the initial potentials are all zero and every
//! Dijkstra run works on non-negative reduced costs. Each augmentation pushes
//! an integral amount, so the returned flow is integral.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FlowArc {
    pub from: usize,
    pub to: usize,
    pub capacity: u64,
    pub cost: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowNetwork {
    pub nodes: usize,
    pub arcs: Vec<FlowArc>,
    pub source: usize,
    pub sink: usize,
    pub demand: u64,
}

impl FlowNetwork {
    pub fn new(nodes: usize, source: usize, sink: usize, demand: u64) -> Self {
        FlowNetwork {
            nodes,
            arcs: Vec::new(),
            source,
            sink,
            demand,
        }
    }

    /// Appends an arc and returns its index.
    pub fn add_arc(&mut self, from: usize, to: usize, capacity: u64, cost: i64) -> usize {
        self.arcs.push(FlowArc {
            from,
            to,
            capacity,
            cost,
        });
        self.arcs.len() - 1
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::MalformedNetwork(msg));
        if self.source >= self.nodes || self.sink >= self.nodes {
            return bad("terminal outside node range".into());
        }
        if self.source == self.sink {
            return bad("source equals sink".into());
        }
        for (i, a) in self.arcs.iter().enumerate() {
            if a.from >= self.nodes || a.to >= self.nodes {
                return bad(format!("arc {i} references a missing node"));
            }
            if a.from == a.to {
                return bad(format!("arc {i} is a self-loop"));
            }
            if a.cost < 0 {
                return bad(format!("arc {i} has negative cost"));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowResult {
    /// Flow per arc, indexed like [`FlowNetwork::arcs`].
    pub flow: Vec<u64>,
    pub total_cost: i64,
}

impl FlowResult {
    /// Checks capacity, conservation, demand and the reported cost.
    pub fn check(&self, network: &FlowNetwork) -> std::result::Result<(), String> {
        if self.flow.len() != network.arcs.len() {
            return Err("flow vector length mismatch".into());
        }
        let mut balance = vec![0i128; network.nodes];
        let mut cost = 0i128;
        for (i, (a, &f)) in network.arcs.iter().zip(&self.flow).enumerate() {
            if f > a.capacity {
                return Err(format!("arc {i} carries {f} > capacity {}", a.capacity));
            }
            balance[a.from] -= f as i128;
            balance[a.to] += f as i128;
            cost += f as i128 * a.cost as i128;
        }
        for (v, &b) in balance.iter().enumerate() {
            let expected = if v == network.source {
                -(network.demand as i128)
            } else if v == network.sink {
                network.demand as i128
            } else {
                0
            };
            if b != expected {
                return Err(format!("node {v} has net inflow {b}, expected {expected}"));
            }
        }
        if cost != self.total_cost as i128 {
            return Err(format!("reported cost {} != {}", self.total_cost, cost));
        }
        Ok(())
    }
}

struct Residual {
    head: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<u64>,
    cost: Vec<i64>,
}

impl Residual {
    fn build(network: &FlowNetwork) -> Self {
        let m = network.arcs.len();
        let mut r = Residual {
            head: vec![Vec::new(); network.nodes],
            to: Vec::with_capacity(2 * m),
            cap: Vec::with_capacity(2 * m),
            cost: Vec::with_capacity(2 * m),
        };
        for a in &network.arcs {
            // edge 2i is the arc, 2i + 1 its reverse
            r.head[a.from].push(r.to.len());
            r.to.push(a.to);
            r.cap.push(a.capacity);
            r.cost.push(a.cost);
            r.head[a.to].push(r.to.len());
            r.to.push(a.from);
            r.cap.push(0);
            r.cost.push(-a.cost);
        }
        r
    }
}

/// Cheapest integral flow of value `network.demand` from source to sink, or
/// `None` when the capacities cannot carry the demand.
pub fn solve_min_cost_flow(network: &FlowNetwork) -> Result<Option<FlowResult>> {
    network.validate()?;
    let n = network.nodes;
    let mut res = Residual::build(network);
    let mut potential = vec![0i64; n];
    let mut dist = vec![i64::MAX; n];
    let mut parent = vec![usize::MAX; n];
    let mut sent = 0u64;
    let mut total_cost = 0i64;

    while sent < network.demand {
        dist.fill(i64::MAX);
        parent.fill(usize::MAX);
        dist[network.source] = 0;
        let mut heap = BinaryHeap::new();
        heap.push(Reverse((0i64, network.source)));
        while let Some(Reverse((d, u))) = heap.pop() {
            if d > dist[u] {
                continue;
            }
            for &e in &res.head[u] {
                if res.cap[e] == 0 {
                    continue;
                }
                let v = res.to[e];
                let reduced = res.cost[e] + potential[u] - potential[v];
                debug_assert!(reduced >= 0, "negative reduced cost");
                let nd = d + reduced;
                if nd < dist[v] {
                    dist[v] = nd;
                    parent[v] = e;
                    heap.push(Reverse((nd, v)));
                }
            }
        }
        if dist[network.sink] == i64::MAX {
            return Ok(None);
        }
        for v in 0..n {
            if dist[v] != i64::MAX {
                potential[v] += dist[v];
            }
        }

        let mut push = network.demand - sent;
        let mut v = network.sink;
        while v != network.source {
            let e = parent[v];
            push = push.min(res.cap[e]);
            v = res.to[e ^ 1];
        }
        let mut v = network.sink;
        while v != network.source {
            let e = parent[v];
            res.cap[e] -= push;
            res.cap[e ^ 1] += push;
            total_cost += push as i64 * res.cost[e];
            v = res.to[e ^ 1];
        }
        sent += push;
    }

    let flow = network
        .arcs
        .iter()
        .enumerate()
        .map(|(i, _)| res.cap[2 * i + 1])
        .collect();
    Ok(Some(FlowResult { flow, total_cost }))
}
