//! Double-unicast networks: acyclic graphs with unit-capacity edges,
//! min-cuts by edge-disjoint paths, random linear network coding transfer
//! matrices, and the achievable regions of earlier coding strategies.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use crate::channel::ChannelQuadruple;
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::linalg;
use crate::matrix::Matrix;
use crate::region::{capacity_region, Inequality, RatePair, RateRegion};

/// A double-unicast network: a DAG with unit-capacity directed edges
/// (parallel edges allowed), two sources and two sinks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Network {
    names: Vec<String>,
    edges: Vec<(usize, usize)>,
    s1: usize,
    s2: usize,
    t1: usize,
    t2: usize,
}

#[derive(Deserialize)]
struct RawNetwork {
    nodes: Vec<String>,
    edges: Vec<(String, String)>,
    s1: String,
    s2: String,
    t1: String,
    t2: String,
}

impl Network {
    pub fn new(
        nodes: Vec<String>,
        edges: Vec<(String, String)>,
        s1: &str,
        s2: &str,
        t1: &str,
        t2: &str,
    ) -> Result<Self> {
        let index = |name: &str| -> Result<usize> {
            nodes
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| Error::Network(format!("unknown node {name:?}")))
        };
        let mut seen = BTreeSet::new();
        for n in &nodes {
            if !seen.insert(n.clone()) {
                return Err(Error::Network(format!("duplicate node {n:?}")));
            }
        }
        let edges = edges
            .iter()
            .map(|(u, v)| Ok((index(u)?, index(v)?)))
            .collect::<Result<Vec<_>>>()?;
        let net = Network {
            s1: index(s1)?,
            s2: index(s2)?,
            t1: index(t1)?,
            t2: index(t2)?,
            names: nodes,
            edges,
        };
        if net.s1 == net.s2 {
            return Err(Error::Network("s1 and s2 must differ".into()));
        }
        if net.t1 == net.t2 {
            return Err(Error::Network("t1 and t2 must differ".into()));
        }
        for s in [net.s1, net.s2] {
            if s == net.t1 || s == net.t2 {
                return Err(Error::Network(format!(
                    "source {:?} is also a sink",
                    net.names[s]
                )));
            }
        }
        if net.topological_order().is_none() {
            return Err(Error::Network("not acyclic".into()));
        }
        Ok(net)
    }

    pub fn node_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn node_name(&self, i: usize) -> &str {
        &self.names[i]
    }

    /// Kahn's algorithm with an index-ordered frontier; `None` on cycles.
    fn topological_order(&self) -> Option<Vec<usize>> {
        let n = self.names.len();
        let mut indeg = vec![0usize; n];
        for &(_, v) in &self.edges {
            indeg[v] += 1;
        }
        let mut ready: BTreeSet<usize> =
            (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(&v) = ready.iter().next() {
            ready.remove(&v);
            order.push(v);
            for &(a, b) in &self.edges {
                if a == v {
                    indeg[b] -= 1;
                    if indeg[b] == 0 {
                        ready.insert(b);
                    }
                }
            }
        }
        (order.len() == n).then_some(order)
    }
}

/// Parses the network JSON:
/// `{"nodes": [...], "edges": [["u","v"], ...], "s1": ..., "s2": ..., "t1": ..., "t2": ...}`.
/// Parallel edges are expressed by repetition; edge order fixes the
/// coefficient-draw order of the network-code simulator.
pub fn parse_network(text: &str) -> Result<Network> {
    let raw: RawNetwork = serde_json::from_str(text)
        .map_err(|e| Error::Network(format!("malformed network file: {e}")))?;
    Network::new(raw.nodes, raw.edges, &raw.s1, &raw.s2, &raw.t1, &raw.t2)
}

/// All eight min-cut values between source and sink subsets: the number of
/// edge-disjoint paths in each case.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MinCuts {
    pub s1_t1: usize,
    pub s1_t2: usize,
    pub s2_t1: usize,
    pub s2_t2: usize,
    pub s1_both: usize,
    pub s2_both: usize,
    pub both_t1: usize,
    pub both_t2: usize,
}

struct FlowEdge {
    to: usize,
    cap: u32,
    rev: usize,
}

fn add_edge(graph: &mut [Vec<FlowEdge>], from: usize, to: usize, cap: u32) {
    let rev_from = graph[to].len();
    let rev_to = graph[from].len();
    graph[from].push(FlowEdge {
        to,
        cap,
        rev: rev_from,
    });
    graph[to].push(FlowEdge {
        to: from,
        cap: 0,
        rev: rev_to,
    });
}

fn max_flow(net: &Network, sources: &[usize], sinks: &[usize]) -> usize {
    let n = net.node_count();
    let (source, sink) = (n, n + 1);
    let mut graph: Vec<Vec<FlowEdge>> = (0..n + 2).map(|_| Vec::new()).collect();
    for &(u, v) in &net.edges {
        add_edge(&mut graph, u, v, 1);
    }
    // Sources and sinks are disjoint, so every unit of flow crosses a
    // network edge and |E| caps the super-edges safely.
    let big = net.edge_count() as u32 + 1;
    for &s in sources {
        add_edge(&mut graph, source, s, big);
    }
    for &t in sinks {
        add_edge(&mut graph, t, sink, big);
    }

    let mut flow = 0usize;
    loop {
        // BFS for an augmenting path.
        let mut prev: Vec<Option<(usize, usize)>> = vec![None; n + 2];
        let mut queue = std::collections::VecDeque::new();
        queue.push_back(source);
        let mut seen = vec![false; n + 2];
        seen[source] = true;
        while let Some(u) = queue.pop_front() {
            for (ei, e) in graph[u].iter().enumerate() {
                if e.cap > 0 && !seen[e.to] {
                    seen[e.to] = true;
                    prev[e.to] = Some((u, ei));
                    queue.push_back(e.to);
                }
            }
        }
        if !seen[sink] {
            return flow;
        }
        // Trace back and find the bottleneck.
        let mut bottleneck = u32::MAX;
        let mut v = sink;
        while let Some((u, ei)) = prev[v] {
            bottleneck = bottleneck.min(graph[u][ei].cap);
            v = u;
        }
        let mut v = sink;
        while let Some((u, ei)) = prev[v] {
            graph[u][ei].cap -= bottleneck;
            let rev = graph[u][ei].rev;
            graph[v][rev].cap += bottleneck;
            v = u;
        }
        flow += bottleneck as usize;
    }
}

pub fn min_cuts(net: &Network) -> MinCuts {
    let s1 = [net.s1];
    let s2 = [net.s2];
    let both_s = [net.s1, net.s2];
    let t1 = [net.t1];
    let t2 = [net.t2];
    let both_t = [net.t1, net.t2];
    MinCuts {
        s1_t1: max_flow(net, &s1, &t1),
        s1_t2: max_flow(net, &s1, &t2),
        s2_t1: max_flow(net, &s2, &t1),
        s2_t2: max_flow(net, &s2, &t2),
        s1_both: max_flow(net, &s1, &both_t),
        s2_both: max_flow(net, &s2, &both_t),
        both_t1: max_flow(net, &both_s, &t1),
        both_t2: max_flow(net, &both_s, &t2),
    }
}

/// One verified draw of the network code: the channel quadruple it induces
/// plus the local coefficients behind it.
#[derive(Clone, Debug)]
pub struct TransferRealization {
    pub field: FieldSpec,
    pub seed: u64,
    pub attempts: u32,
    pub cuts: MinCuts,
    pub channel: ChannelQuadruple,
    /// Per edge, in edge order: the local combination coefficients drawn
    /// for its tail's inputs (virtual source symbols first, then incoming
    /// edges in edge order).
    pub edge_coeffs: Vec<Vec<Scalar>>,
}

fn attempt_rng(seed: u64, attempt: u32) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_add((attempt as u64).wrapping_mul(0x9E3779B97F4A7C15)))
}

/// Simulates random linear network coding and extracts the induced
/// channel, re-drawing until every rank matches its min-cut.
///
/// Source `s1` injects `s1_both` virtual symbols, `s2` injects `s2_both`.
/// Each edge carries a uniform random combination of its tail's inputs.
/// Raw sink observations (one per incoming edge) are reduced to their
/// lexicographically-first independent rows, so the channel is already in
/// reduced form with `n1 = both_t1`, `n2 = both_t2`.
pub fn rlnc_transfer(
    net: &Network,
    field: FieldSpec,
    seed: u64,
    retry_budget: u32,
) -> Result<TransferRealization> {
    if field.modulus().is_none() {
        return Err(Error::InvalidInput(
            "network coding requires a prime field".into(),
        ));
    }
    let cuts = min_cuts(net);
    let m1 = cuts.s1_both;
    let m2 = cuts.s2_both;
    let total = m1 + m2;
    let order = {
        let topo = net
            .topological_order()
            .expect("validated acyclic at construction");
        let mut rank_of = vec![0usize; net.node_count()];
        for (i, &v) in topo.iter().enumerate() {
            rank_of[v] = i;
        }
        let mut idx: Vec<usize> = (0..net.edge_count()).collect();
        idx.sort_by_key(|&e| (rank_of[net.edges[e].0], e));
        idx
    };

    let mut last_detail = String::new();
    for attempt in 0..retry_budget.max(1) {
        let mut rng = attempt_rng(seed, attempt);
        let mut rows: Vec<Vec<Scalar>> = vec![Vec::new(); net.edge_count()];
        let mut coeffs: Vec<Vec<Scalar>> = vec![Vec::new(); net.edge_count()];
        for &e in &order {
            let (tail, _) = net.edges[e];
            let mut inputs: Vec<Vec<Scalar>> = Vec::new();
            if tail == net.s1 {
                for k in 0..m1 {
                    inputs.push(unit_row(field, total, k));
                }
            }
            if tail == net.s2 {
                for k in 0..m2 {
                    inputs.push(unit_row(field, total, m1 + k));
                }
            }
            for (other, &(_, head)) in net.edges.iter().enumerate() {
                if head == tail {
                    inputs.push(rows[other].clone());
                }
            }
            let mut acc = vec![field.zero(); total];
            let mut local = Vec::with_capacity(inputs.len());
            for input in &inputs {
                let c = field.random_scalar(&mut rng);
                for (a, v) in acc.iter_mut().zip(input.iter()) {
                    *a = field.add(a, &field.mul(&c, v));
                }
                local.push(c);
            }
            rows[e] = acc;
            coeffs[e] = local;
        }

        let sink_matrix = |t: usize| -> Matrix {
            let incoming: Vec<&Vec<Scalar>> = net
                .edges
                .iter()
                .enumerate()
                .filter(|(_, &(_, head))| head == t)
                .map(|(e, _)| &rows[e])
                .collect();
            let data: Vec<Scalar> = incoming.iter().flat_map(|r| r.iter().cloned()).collect();
            Matrix::new(field, incoming.len(), total, data).expect("row length is total")
        };
        let raw1 = sink_matrix(net.t1);
        let raw2 = sink_matrix(net.t2);

        let got_n1 = linalg::rank(&raw1);
        let got_n2 = linalg::rank(&raw2);
        if got_n1 != cuts.both_t1 || got_n2 != cuts.both_t2 {
            last_detail = format!(
                "sink ranks {got_n1}/{} and {got_n2}/{}",
                cuts.both_t1, cuts.both_t2
            );
            continue;
        }
        let kept1 = raw1.select_rows(&linalg::pivot_rows(&raw1));
        let kept2 = raw2.select_rows(&linalg::pivot_rows(&raw2));
        let channel = ChannelQuadruple::new(
            kept1.col_range(0, m1),
            kept1.col_range(m1, total),
            kept2.col_range(0, m1),
            kept2.col_range(m1, total),
        )?;

        let checks = [
            (linalg::rank(channel.h11()), cuts.s1_t1, "h11"),
            (linalg::rank(channel.h12()), cuts.s2_t1, "h12"),
            (linalg::rank(channel.h21()), cuts.s1_t2, "h21"),
            (linalg::rank(channel.h22()), cuts.s2_t2, "h22"),
            (linalg::rank(&channel.tx1_matrix()), cuts.s1_both, "[h11;h21]"),
            (linalg::rank(&channel.tx2_matrix()), cuts.s2_both, "[h12;h22]"),
        ];
        if let Some((got, want, name)) = checks
            .iter()
            .find(|(got, want, _)| got != want)
            .copied()
        {
            last_detail = format!("rank({name}) = {got}, min-cut requires {want}");
            continue;
        }
        debug_assert!(channel.is_reduced());
        return Ok(TransferRealization {
            field,
            seed,
            attempts: attempt + 1,
            cuts,
            channel,
            edge_coeffs: coeffs,
        });
    }
    Err(Error::RetryBudget {
        attempts: retry_budget.max(1),
        detail: format!("{last_detail}; a larger field makes success likely"),
    })
}

fn unit_row(field: FieldSpec, len: usize, k: usize) -> Vec<Scalar> {
    let mut row = vec![field.zero(); len];
    row[k] = field.one();
    row
}

/// The achievable region of the realized network code, with every constant
/// cross-checked against its min-cut closed form.
pub fn nc_region(real: &TransferRealization) -> Result<RateRegion> {
    let p = real.channel.rank_profile()?;
    let cuts = &real.cuts;
    let pairs = [
        (p.r11, cuts.s1_t1, "rank(h11) vs s1->t1 cut"),
        (p.r12, cuts.s2_t1, "rank(h12) vs s2->t1 cut"),
        (p.r21, cuts.s1_t2, "rank(h21) vs s1->t2 cut"),
        (p.r22, cuts.s2_t2, "rank(h22) vs s2->t2 cut"),
        (real.channel.n1(), cuts.both_t1, "n1 vs joint cut into t1"),
        (real.channel.n2(), cuts.both_t2, "n2 vs joint cut into t2"),
        (real.channel.m1(), cuts.s1_both, "m1 vs joint cut out of s1"),
        (real.channel.m2(), cuts.s2_both, "m2 vs joint cut out of s2"),
    ];
    for (got, want, what) in pairs {
        if got != want {
            return Err(Error::CutRankMismatch(format!("{what}: {got} != {want}")));
        }
    }
    Ok(capacity_region(&real.channel))
}

/// The achievable regions of the earlier double-unicast strategies,
/// expressed through min-cuts. The two interference-alignment style
/// regions appear in their dominating relaxed forms; `region4`/`region5`
/// are the rate-exchange pair. All listed verbatim, clamped at zero.
#[derive(Clone, Debug)]
pub struct BaselineRegions {
    pub region1: RateRegion,
    pub region2_relaxed: RateRegion,
    pub region3_relaxed: RateRegion,
    pub region4: RateRegion,
    pub region5: RateRegion,
}

pub fn baseline_regions(cuts: &MinCuts) -> BaselineRegions {
    let c = |x: usize, y: usize| (x as i64 - y as i64).max(0);
    let joint_min = cuts.both_t1.min(cuts.both_t2);
    BaselineRegions {
        region1: RateRegion::new(vec![
            Inequality::new(1, 0, c(cuts.both_t1, cuts.s2_t1)),
            Inequality::new(0, 1, c(cuts.both_t2, cuts.s1_t2)),
        ]),
        region2_relaxed: RateRegion::new(vec![
            Inequality::new(1, 0, cuts.s1_t1 as i64),
            Inequality::new(0, 1, c(joint_min, cuts.s1_t2)),
            Inequality::new(1, 1, cuts.both_t1 as i64),
        ]),
        region3_relaxed: RateRegion::new(vec![
            Inequality::new(0, 1, cuts.s2_t2 as i64),
            Inequality::new(1, 0, c(joint_min, cuts.s2_t1)),
            Inequality::new(1, 1, cuts.both_t2 as i64),
        ]),
        region4: RateRegion::new(vec![
            Inequality::new(1, 0, cuts.s1_t1 as i64),
            Inequality::new(2, 1, cuts.s2_t2 as i64),
        ]),
        region5: RateRegion::new(vec![
            Inequality::new(0, 1, cuts.s2_t2 as i64),
            Inequality::new(1, 2, cuts.s1_t1 as i64),
        ]),
    }
}

/// Result of checking the realized region against both baseline hulls.
#[derive(Clone, Debug)]
pub struct ContainmentReport {
    pub nc_region: RateRegion,
    pub hull_precoding: RateRegion,
    pub hull_rate_exchange: RateRegion,
    /// A vertex of the realized region outside the precoding hull, if any.
    pub strict_beyond_precoding: Option<RatePair>,
    pub strict_beyond_rate_exchange: Option<RatePair>,
}

/// Verifies that both baseline hulls are contained in the realized region
/// and reports where the realized region is strictly larger.
pub fn containment_check(real: &TransferRealization) -> Result<ContainmentReport> {
    let nc = nc_region(real)?;
    let base = baseline_regions(&real.cuts);
    let hull_precoding = RateRegion::convex_hull_union(&[
        base.region1.clone(),
        base.region2_relaxed.clone(),
        base.region3_relaxed.clone(),
    ]);
    let hull_rate_exchange =
        RateRegion::convex_hull_union(&[base.region4.clone(), base.region5.clone()]);

    for (hull, label) in [
        (&hull_precoding, "precoding hull"),
        (&hull_rate_exchange, "rate-exchange hull"),
    ] {
        if let Some(v) = hull.vertices().iter().find(|v| !nc.contains(v)) {
            return Err(Error::ContainmentViolation(format!(
                "{label} vertex {v} lies outside the realized region"
            )));
        }
    }
    let strict = |hull: &RateRegion| nc.vertices().into_iter().find(|v| !hull.contains(v));
    Ok(ContainmentReport {
        strict_beyond_precoding: strict(&hull_precoding),
        strict_beyond_rate_exchange: strict(&hull_rate_exchange),
        nc_region: nc,
        hull_precoding,
        hull_rate_exchange,
    })
}

/// Random DAG with edges oriented along the node order, sources drawn from
/// the front half and sinks from the back half; used by the randomized
/// verification suites.
pub fn random_dag<R: Rng + ?Sized>(rng: &mut R, max_nodes: usize, max_edges: usize) -> Network {
    let n = rng.gen_range(4..=max_nodes.max(4));
    let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let e = rng.gen_range(3..=max_edges.max(3));
    let mut edges = Vec::with_capacity(e);
    for _ in 0..e {
        let a = rng.gen_range(0..n - 1);
        let b = rng.gen_range(a + 1..n);
        edges.push((names[a].clone(), names[b].clone()));
    }
    let half = n / 2;
    let s1 = rng.gen_range(0..half);
    let s2 = loop {
        let c = rng.gen_range(0..half);
        if c != s1 {
            break c;
        }
    };
    let t1 = rng.gen_range(half..n);
    let t2 = loop {
        let c = rng.gen_range(half..n);
        if c != t1 {
            break c;
        }
    };
    Network::new(
        names.clone(),
        edges,
        &names[s1],
        &names[s2],
        &names[t1],
        &names[t2],
    )
    .expect("construction is valid by design")
}

/// The seven-node relay fixture used across the test suites.
pub fn relay_network() -> Network {
    let nodes = ["s1", "s2", "m", "n", "t1", "t2"]
        .iter()
        .map(|s| s.to_string())
        .collect::<Vec<_>>();
    let edge = |a: &str, b: &str| (a.to_string(), b.to_string());
    Network::new(
        nodes,
        vec![
            edge("s1", "t1"),
            edge("s1", "m"),
            edge("s2", "m"),
            edge("s2", "t2"),
            edge("m", "n"),
            edge("n", "t1"),
            edge("n", "t2"),
        ],
        "s1",
        "s2",
        "t1",
        "t2",
    )
    .expect("fixture is valid")
}
