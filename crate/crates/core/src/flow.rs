//! Minimum feasible integral flow with unit lower bounds.
//!
//! [`min_feasible_flow`] uses the two-phase reduction: a feasible circulation
//! is found with an auxiliary max-flow between excess/deficit super nodes,
//! then the value is minimised by pushing flow back from sink to source in
//! the residual network. Both max-flows are shortest-augmenting-path (BFS).

use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::instance::{TemporalSampling, Trajectory};
use crate::level_graph::LevelGraph;
use crate::metric::PointId;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FlowEdge {
    pub from: usize,
    pub to: usize,
    pub lower: u64,
    pub capacity: u64,
}

#[derive(Clone, Debug)]
pub struct FlowNetwork {
    num_nodes: usize,
    source: usize,
    sink: usize,
    edges: Vec<FlowEdge>,
    out_edges: Vec<Vec<usize>>,
}

impl FlowNetwork {
    pub fn new(num_nodes: usize, source: usize, sink: usize) -> Self {
        assert!(source < num_nodes && sink < num_nodes && source != sink);
        FlowNetwork {
            num_nodes,
            source,
            sink,
            edges: Vec::new(),
            out_edges: vec![Vec::new(); num_nodes],
        }
    }

    pub fn add_edge(&mut self, from: usize, to: usize, lower: u64, capacity: u64) -> usize {
        let id = self.edges.len();
        self.edges.push(FlowEdge {
            from,
            to,
            lower,
            capacity,
        });
        self.out_edges[from].push(id);
        id
    }

    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn sink(&self) -> usize {
        self.sink
    }

    pub fn edges(&self) -> &[FlowEdge] {
        &self.edges
    }

    pub fn out_edges(&self, node: usize) -> &[usize] {
        &self.out_edges[node]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralFlow {
    pub flow: Vec<u64>,
    pub value: u64,
}

impl IntegralFlow {
    /// Edge-by-edge bounds and conservation check; returns the first violation found.
    pub fn check(&self, net: &FlowNetwork) -> Result<()> {
        if self.flow.len() != net.edges.len() {
            return Err(Error::FlowInvariant(format!(
                "{} flow entries for {} edges",
                self.flow.len(),
                net.edges.len()
            )));
        }
        let mut balance = vec![0i128; net.num_nodes];
        for (e, (edge, &f)) in net.edges.iter().zip(&self.flow).enumerate() {
            if f < edge.lower || f > edge.capacity {
                return Err(Error::FlowInvariant(format!(
                    "edge {e} carries {f} outside [{}, {}]",
                    edge.lower, edge.capacity
                )));
            }
            balance[edge.from] -= f as i128;
            balance[edge.to] += f as i128;
        }
        for (v, &b) in balance.iter().enumerate() {
            if v != net.source && v != net.sink && b != 0 {
                return Err(Error::FlowInvariant(format!("node {v} has imbalance {b}")));
            }
        }
        let out = -balance[net.source];
        if out != self.value as i128 {
            return Err(Error::FlowInvariant(format!(
                "source emits {out} but value is {}",
                self.value
            )));
        }
        Ok(())
    }
}

/// Residual graph with paired arcs (`a ^ 1` is the reverse of `a`).
struct Residual {
    adj: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<i64>,
}

impl Residual {
    fn new(nodes: usize) -> Self {
        Residual {
            adj: vec![Vec::new(); nodes],
            to: Vec::new(),
            cap: Vec::new(),
        }
    }

    fn add_arc(&mut self, u: usize, v: usize, cap: i64) -> usize {
        let id = self.to.len();
        self.to.push(v);
        self.cap.push(cap);
        self.adj[u].push(id);
        self.to.push(u);
        self.cap.push(0);
        self.adj[v].push(id + 1);
        id
    }

    fn disable(&mut self, arc: usize) {
        self.cap[arc] = 0;
        self.cap[arc ^ 1] = 0;
    }

    fn max_flow(&mut self, s: usize, t: usize) -> i64 {
        let n = self.adj.len();
        let mut total = 0;
        let mut prev_arc = vec![usize::MAX; n];
        loop {
            prev_arc.fill(usize::MAX);
            let mut queue = VecDeque::from([s]);
            let mut seen = vec![false; n];
            seen[s] = true;
            'bfs: while let Some(u) = queue.pop_front() {
                for &a in &self.adj[u] {
                    let v = self.to[a];
                    if !seen[v] && self.cap[a] > 0 {
                        seen[v] = true;
                        prev_arc[v] = a;
                        if v == t {
                            break 'bfs;
                        }
                        queue.push_back(v);
                    }
                }
            }
            if !seen[t] {
                return total;
            }
            let mut push = i64::MAX;
            let mut v = t;
            while v != s {
                let a = prev_arc[v];
                push = push.min(self.cap[a]);
                v = self.to[a ^ 1];
            }
            let mut v = t;
            while v != s {
                let a = prev_arc[v];
                self.cap[a] -= push;
                self.cap[a ^ 1] += push;
                v = self.to[a ^ 1];
            }
            total += push;
        }
    }
}

/// Minimum-value integral flow meeting every lower bound, or `None` if infeasible.
pub fn min_feasible_flow(net: &FlowNetwork) -> Option<IntegralFlow> {
    let n = net.num_nodes;
    let (s, t) = (net.source, net.sink);
    let super_source = n;
    let super_sink = n + 1;
    let mut res = Residual::new(n + 2);

    let mut excess = vec![0i64; n];
    let mut arcs = Vec::with_capacity(net.edges.len());
    let mut big: i64 = 1;
    for e in &net.edges {
        if e.lower > e.capacity {
            return None;
        }
        arcs.push(res.add_arc(e.from, e.to, (e.capacity - e.lower) as i64));
        excess[e.to] += e.lower as i64;
        excess[e.from] -= e.lower as i64;
        big = big.saturating_add(e.capacity as i64);
    }
    let back = res.add_arc(t, s, big);
    let mut demand = 0;
    let mut super_arcs = Vec::new();
    for (v, &x) in excess.iter().enumerate() {
        if x > 0 {
            super_arcs.push(res.add_arc(super_source, v, x));
            demand += x;
        } else if x < 0 {
            super_arcs.push(res.add_arc(v, super_sink, -x));
        }
    }
    if res.max_flow(super_source, super_sink) < demand {
        return None;
    }

    let feasible_value = res.cap[back ^ 1];
    res.disable(back);
    for a in super_arcs {
        res.disable(a);
    }
    let cancelled = res.max_flow(t, s);

    let flow = net
        .edges
        .iter()
        .zip(&arcs)
        .map(|(e, &a)| e.lower + res.cap[a ^ 1] as u64)
        .collect();
    Some(IntegralFlow {
        flow,
        value: (feasible_value - cancelled) as u64,
    })
}

/// Splits an acyclic flow into unit source-to-sink paths, given as edge ids.
///
/// Each walk leaves every node by its first out-edge (insertion order) that
/// still carries flow.
pub fn decompose_paths(net: &FlowNetwork, f: &IntegralFlow) -> Result<Vec<Vec<usize>>> {
    f.check(net)?;
    let mut remaining = f.flow.clone();
    let mut paths = Vec::with_capacity(f.value as usize);
    for _ in 0..f.value {
        let mut node = net.source;
        let mut path = Vec::new();
        while node != net.sink {
            let e = net.out_edges[node]
                .iter()
                .copied()
                .find(|&e| remaining[e] > 0)
                .ok_or_else(|| {
                    Error::FlowInvariant(format!("walk stuck at node {node} with no outgoing flow"))
                })?;
            remaining[e] -= 1;
            path.push(e);
            node = net.edges[e].to;
            if path.len() > net.edges.len() {
                return Err(Error::FlowInvariant("flow contains a cycle".into()));
            }
        }
        paths.push(path);
    }
    if let Some(e) = remaining.iter().position(|&x| x > 0) {
        return Err(Error::FlowInvariant(format!(
            "edge {e} still carries flow after decomposition"
        )));
    }
    Ok(paths)
}

/// The network built on `G_γ(P)` with every center vertex split into a
/// `tail -> head` edge of lower bound 1.
#[derive(Clone, Debug)]
pub struct CenterNetwork {
    graph: LevelGraph,
    net: FlowNetwork,
    /// Level-graph vertex of each network node (`None` for source and sink).
    vertex_of: Vec<Option<usize>>,
    /// `(edge id, level, point)` for each lower-bound edge.
    center_edges: Vec<(usize, usize, PointId)>,
}

const SOURCE: usize = 0;
const SINK: usize = 1;

impl CenterNetwork {
    pub fn build(p: &TemporalSampling, centers: &[Vec<PointId>], gamma: f64) -> Result<Self> {
        if centers.len() != p.len() {
            return Err(Error::InvalidCenters(format!(
                "{} center sets for {} levels",
                centers.len(),
                p.len()
            )));
        }
        let graph = LevelGraph::build(p, gamma);
        let mut is_center = vec![false; graph.num_vertices()];
        for (i, level_centers) in centers.iter().enumerate() {
            for &c in level_centers {
                let pos = p.position(i, c).ok_or_else(|| {
                    Error::InvalidCenters(format!("center {c} is not in level {i}"))
                })?;
                is_center[graph.vertex(i, pos)] = true;
            }
        }

        let mut vertex_of = vec![None, None];
        let mut tail = Vec::with_capacity(graph.num_vertices());
        let mut head = Vec::with_capacity(graph.num_vertices());
        for v in 0..graph.num_vertices() {
            tail.push(vertex_of.len());
            vertex_of.push(Some(v));
            if is_center[v] {
                head.push(vertex_of.len());
                vertex_of.push(Some(v));
            } else {
                head.push(tail[v]);
            }
        }

        let infinite = p.size() as u64;
        let mut net = FlowNetwork::new(vertex_of.len(), SOURCE, SINK);
        for v in graph.level_vertices(0) {
            net.add_edge(SOURCE, tail[v], 0, infinite);
        }
        let last = graph.num_levels() - 1;
        let mut center_edges = Vec::new();
        for v in 0..graph.num_vertices() {
            if is_center[v] {
                let e = net.add_edge(tail[v], head[v], 1, infinite);
                center_edges.push((e, graph.level_of(v), graph.point(v)));
            }
            for &w in graph.successors(v) {
                net.add_edge(head[v], tail[w], 0, infinite);
            }
            if graph.level_of(v) == last {
                net.add_edge(head[v], SINK, 0, infinite);
            }
        }
        Ok(CenterNetwork {
            graph,
            net,
            vertex_of,
            center_edges,
        })
    }

    pub fn network(&self) -> &FlowNetwork {
        &self.net
    }

    pub fn graph(&self) -> &LevelGraph {
        &self.graph
    }

    pub fn center_edges(&self) -> &[(usize, usize, PointId)] {
        &self.center_edges
    }

    pub fn min_feasible_flow(&self) -> Option<IntegralFlow> {
        min_feasible_flow(&self.net)
    }

    /// One trajectory per unit of flow.
    pub fn decompose(&self, f: &IntegralFlow) -> Result<Vec<Trajectory>> {
        decompose_paths(&self.net, f)?
            .into_iter()
            .map(|path| self.trajectory_of(&path))
            .collect()
    }

    fn trajectory_of(&self, path: &[usize]) -> Result<Trajectory> {
        let mut vertices: Vec<usize> = Vec::with_capacity(self.graph.num_levels());
        for &e in path {
            if let Some(v) = self.vertex_of[self.net.edges[e].to] {
                if vertices.last() != Some(&v) {
                    vertices.push(v);
                }
            }
        }
        if vertices.len() != self.graph.num_levels() {
            return Err(Error::FlowInvariant(format!(
                "path visits {} levels, expected {}",
                vertices.len(),
                self.graph.num_levels()
            )));
        }
        Ok(self.graph.trajectory_from_vertices(&vertices))
    }

    pub fn to_debug_json(&self) -> serde_json::Value {
        let nodes: Vec<serde_json::Value> = self
            .vertex_of
            .iter()
            .enumerate()
            .map(|(id, v)| match v {
                None if id == SOURCE => serde_json::json!({ "role": "source" }),
                None => serde_json::json!({ "role": "sink" }),
                Some(v) => serde_json::json!({
                    "level": self.graph.level_of(*v),
                    "point": self.graph.point(*v),
                }),
            })
            .collect();
        serde_json::json!({
            "gamma": self.graph.delta(),
            "source": SOURCE,
            "sink": SINK,
            "nodes": nodes,
            "edges": self.net.edges,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::FiniteMetric;

    fn sampling(xs: &[f64], levels: &[&[usize]]) -> TemporalSampling {
        let m = FiniteMetric::euclidean(1, xs.iter().map(|&x| vec![x]).collect()).unwrap();
        TemporalSampling::new(
            m,
            levels
                .iter()
                .map(|l| l.iter().map(|&i| PointId(i)).collect())
                .collect(),
        )
        .unwrap()
    }

    fn ids(v: &[usize]) -> Vec<PointId> {
        v.iter().map(|&i| PointId(i)).collect()
    }

    #[test]
    fn single_center_chain() {
        let p = sampling(&[0.0], &[&[0]]);
        let cn = CenterNetwork::build(&p, &[ids(&[0])], 0.0).unwrap();
        let net = cn.network();
        // s, sink, tail, head
        assert_eq!(net.num_nodes(), 4);
        assert_eq!(
            net.edges(),
            &[
                FlowEdge { from: 0, to: 2, lower: 0, capacity: 1 },
                FlowEdge { from: 2, to: 3, lower: 1, capacity: 1 },
                FlowEdge { from: 3, to: 1, lower: 0, capacity: 1 },
            ]
        );
        let f = cn.min_feasible_flow().unwrap();
        assert_eq!(f.value, 1);
        assert_eq!(cn.decompose(&f).unwrap(), vec![Trajectory::from(vec![0])]);
    }

    #[test]
    fn two_split_nodes_in_series() {
        let p = sampling(&[0.0, 1.0], &[&[0], &[1]]);
        let cn = CenterNetwork::build(&p, &[ids(&[0]), ids(&[1])], 1.0).unwrap();
        let net = cn.network();
        // s, sink, tail(a), head(a), tail(b), head(b)
        assert_eq!(net.num_nodes(), 6);
        let expected = [(0, 2, 0), (2, 3, 1), (3, 4, 0), (4, 5, 1), (5, 1, 0)];
        let got: Vec<_> = net.edges().iter().map(|e| (e.from, e.to, e.lower)).collect();
        assert_eq!(got, expected);
        assert_eq!(cn.center_edges().len(), 2);
    }

    #[test]
    fn disconnected_levels_are_infeasible() {
        let p = sampling(&[0.0, 5.0], &[&[0], &[1]]);
        let cn = CenterNetwork::build(&p, &[ids(&[0]), ids(&[1])], 1.0).unwrap();
        assert!(cn.min_feasible_flow().is_none());
    }

    #[test]
    fn two_lower_bounds_feeding_one_vertex() {
        // P(1) = {a, b}, P(2) = {c}, all close: both level-1 centers need their own unit.
        let p = sampling(&[0.0, 1.0, 0.5], &[&[0, 1], &[2]]);
        let cn = CenterNetwork::build(&p, &[ids(&[0, 1]), ids(&[2])], 1.0).unwrap();
        let f = cn.min_feasible_flow().unwrap();
        assert_eq!(f.value, 2);
        f.check(cn.network()).unwrap();
        let trajectories = cn.decompose(&f).unwrap();
        assert_eq!(
            trajectories,
            vec![Trajectory::from(vec![0, 2]), Trajectory::from(vec![1, 2])]
        );
    }

    #[test]
    fn center_outside_level_rejected() {
        let p = sampling(&[0.0, 1.0], &[&[0], &[1]]);
        let err = CenterNetwork::build(&p, &[ids(&[1]), ids(&[1])], 1.0).unwrap_err();
        assert!(matches!(err, Error::InvalidCenters(_)));
    }

    #[test]
    fn zero_flow_decomposes_to_nothing() {
        let mut net = FlowNetwork::new(3, 0, 2);
        net.add_edge(0, 1, 0, 4);
        net.add_edge(1, 2, 0, 4);
        let f = min_feasible_flow(&net).unwrap();
        assert_eq!(f.value, 0);
        assert!(decompose_paths(&net, &f).unwrap().is_empty());
    }

    #[test]
    fn non_conserving_flow_is_rejected() {
        let mut net = FlowNetwork::new(3, 0, 2);
        net.add_edge(0, 1, 0, 4);
        net.add_edge(1, 2, 0, 4);
        let bad = IntegralFlow { flow: vec![2, 1], value: 2 };
        assert!(matches!(decompose_paths(&net, &bad), Err(Error::FlowInvariant(_))));
    }

    #[test]
    fn min_flow_cancels_redundant_units() {
        // Two parallel routes, lower bound on one edge only: one unit suffices.
        let mut net = FlowNetwork::new(4, 0, 3);
        net.add_edge(0, 1, 0, 5);
        net.add_edge(0, 2, 0, 5);
        net.add_edge(1, 3, 1, 5);
        net.add_edge(2, 3, 0, 5);
        let f = min_feasible_flow(&net).unwrap();
        assert_eq!(f.value, 1);
        assert_eq!(f.flow, vec![1, 0, 1, 0]);
    }
}
