//! Exact max-flow / min-cut (Dinic).
//!
//! Rational capacities are scaled by the lcm of their denominators and the
//! flow runs on integers: `i128` when the scaled total is comfortably in range,
//! `BigInt` otherwise. Infinite edges are given one unit more than the total
//! finite capacity, so they can never lie in a minimum cut.

use std::collections::VecDeque;
use std::ops::{Add, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Rational, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Capacity {
    Finite(Rational),
    Infinite,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowEdge {
    pub from: usize,
    pub to: usize,
    pub capacity: Capacity,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowNetwork {
    nodes: usize,
    source: usize,
    sink: usize,
    edges: Vec<FlowEdge>,
}

impl FlowNetwork {
    pub fn new(nodes: usize, source: usize, sink: usize) -> Result<Self> {
        if source >= nodes || sink >= nodes {
            return Err(Error::invalid("source and sink must be nodes of the network"));
        }
        if source == sink {
            return Err(Error::invalid("source and sink must differ"));
        }
        Ok(FlowNetwork {
            nodes,
            source,
            sink,
            edges: Vec::new(),
        })
    }

    pub fn add_edge(&mut self, from: usize, to: usize, capacity: Capacity) -> Result<()> {
        if from >= self.nodes || to >= self.nodes {
            return Err(Error::invalid(format!("edge {from}->{to} leaves the network")));
        }
        if let Capacity::Finite(c) = &capacity {
            if c.is_negative() {
                return Err(Error::invalid(format!("negative capacity {c} on edge {from}->{to}")));
            }
        }
        self.edges.push(FlowEdge { from, to, capacity });
        Ok(())
    }

    pub fn node_count(&self) -> usize {
        self.nodes
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

    pub fn infinite_edge_count(&self) -> usize {
        self.edges
            .iter()
            .filter(|e| e.capacity == Capacity::Infinite)
            .count()
    }
}

/// Value of a minimum cut together with the source side of one such cut
/// (nodes reachable from the source in the final residual graph).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinCut {
    pub value: Rational,
    pub source_side: Vec<bool>,
}

pub fn max_flow(net: &FlowNetwork) -> Result<Rational> {
    Ok(min_cut(net)?.value)
}

pub fn min_cut(net: &FlowNetwork) -> Result<MinCut> {
    let mut scale = BigInt::one();
    for e in &net.edges {
        if let Capacity::Finite(c) = &e.capacity {
            scale = scale.lcm(c.denom());
        }
    }
    let scaled: Vec<Option<BigInt>> = net
        .edges
        .iter()
        .map(|e| match &e.capacity {
            Capacity::Finite(c) => Some(c.numer() * (&scale / c.denom())),
            Capacity::Infinite => None,
        })
        .collect();
    let finite_total: BigInt = scaled.iter().flatten().sum();
    let infinity = &finite_total + BigInt::one();

    // 2^100 leaves ample headroom for sums of residuals in i128.
    let fits = infinity.bits() < 100;
    let (value, source_side) = if fits {
        let caps: Vec<i128> = scaled
            .iter()
            .map(|c| c.as_ref().unwrap_or(&infinity).to_i128().expect("checked range"))
            .collect();
        let (v, side) = Dinic::new(net, &caps).run();
        (BigInt::from(v), side)
    } else {
        let caps: Vec<BigInt> = scaled
            .into_iter()
            .map(|c| c.unwrap_or_else(|| infinity.clone()))
            .collect();
        Dinic::new(net, &caps).run()
    };
    if value >= infinity {
        return Err(Error::invalid("unbounded flow: a source-sink path uses only infinite edges"));
    }
    Ok(MinCut {
        value: Rational::new(value, scale),
        source_side,
    })
}

trait FlowInt: Clone + Ord + Zero + Add<Output = Self> + Sub<Output = Self> {}
impl<T: Clone + Ord + Zero + Add<Output = T> + Sub<Output = T>> FlowInt for T {}

struct Arc<T> {
    to: usize,
    residual: T,
}

struct Dinic<T> {
    source: usize,
    sink: usize,
    // arcs[2k] is edge k, arcs[2k+1] its reverse.
    arcs: Vec<Arc<T>>,
    adjacency: Vec<Vec<usize>>,
    level: Vec<i64>,
    next: Vec<usize>,
}

impl<T: FlowInt> Dinic<T> {
    fn new(net: &FlowNetwork, caps: &[T]) -> Self {
        let mut arcs = Vec::with_capacity(2 * net.edges.len());
        let mut adjacency = vec![Vec::new(); net.nodes];
        for (e, cap) in net.edges.iter().zip(caps) {
            adjacency[e.from].push(arcs.len());
            arcs.push(Arc {
                to: e.to,
                residual: cap.clone(),
            });
            adjacency[e.to].push(arcs.len());
            arcs.push(Arc {
                to: e.from,
                residual: T::zero(),
            });
        }
        Dinic {
            source: net.source,
            sink: net.sink,
            arcs,
            adjacency,
            level: vec![-1; net.nodes],
            next: vec![0; net.nodes],
        }
    }

    fn run(mut self) -> (T, Vec<bool>) {
        let mut total = T::zero();
        while self.build_levels() {
            self.next.iter_mut().for_each(|p| *p = 0);
            loop {
                let pushed = self.augment(self.source, None);
                if pushed.is_zero() {
                    break;
                }
                total = total + pushed;
            }
        }
        let side = self.level.iter().map(|&l| l >= 0).collect();
        (total, side)
    }

    /// BFS over positive residual arcs; afterwards `level >= 0` marks exactly
    /// the nodes reachable from the source.
    fn build_levels(&mut self) -> bool {
        self.level.iter_mut().for_each(|l| *l = -1);
        self.level[self.source] = 0;
        let mut queue = VecDeque::from([self.source]);
        while let Some(u) = queue.pop_front() {
            for &a in &self.adjacency[u] {
                let arc = &self.arcs[a];
                if self.level[arc.to] < 0 && arc.residual > T::zero() {
                    self.level[arc.to] = self.level[u] + 1;
                    queue.push_back(arc.to);
                }
            }
        }
        self.level[self.sink] >= 0
    }

    /// Pushes one blocking-flow augmenting path; `limit = None` means unbounded.
    fn augment(&mut self, u: usize, limit: Option<T>) -> T {
        if u == self.sink {
            return limit.expect("source differs from sink");
        }
        while self.next[u] < self.adjacency[u].len() {
            let a = self.adjacency[u][self.next[u]];
            let to = self.arcs[a].to;
            let residual = self.arcs[a].residual.clone();
            if residual > T::zero() && self.level[to] == self.level[u] + 1 {
                let bound = match &limit {
                    Some(l) if *l < residual => l.clone(),
                    _ => residual,
                };
                let pushed = self.augment(to, Some(bound));
                if !pushed.is_zero() {
                    let fwd = self.arcs[a].residual.clone() - pushed.clone();
                    self.arcs[a].residual = fwd;
                    let back = self.arcs[a ^ 1].residual.clone() + pushed.clone();
                    self.arcs[a ^ 1].residual = back;
                    return pushed;
                }
            }
            self.next[u] += 1;
        }
        T::zero()
    }
}
