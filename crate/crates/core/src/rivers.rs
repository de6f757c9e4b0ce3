//! Rivers: the new regular forms flowing into a stable mouth through `λ_p`
//! steps and drop structures, and the stream anatomy above a quaternary form.

use crate::classify::{fixtures, is_old, DropRecord, Oldness};
use crate::error::{Error, Result};
use crate::form::Form;
use crate::numth::OddPrime;
use crate::watson::{is_stable, lambda_preimage, small_lambda, PreimageOptions};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;

pub const DEFAULT_RIVER_CAP: u64 = 3000;
pub const DEFAULT_RIVER_BOUND: u64 = 5000;
/// `2·3^7`, large enough to see two instances of every periodic tributary.
pub const STREAM_CAP: u64 = 4374;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EdgeKind {
    Lambda,
    /// `from` maps onto the old `image`, which loses `height` coefficients to reach `to`.
    Drop { height: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub from: Form,
    pub to: Form,
    pub p: OddPrime,
    pub kind: EdgeKind,
    /// Only for drop edges.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub image: Option<Form>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RiverGraph {
    pub mouth: Form,
    pub nodes: BTreeSet<Form>,
    /// Sorted.
    pub edges: Vec<Edge>,
    pub cap: u64,
    pub bound: u64,
}

impl RiverGraph {
    pub fn drop_edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(|e| matches!(e.kind, EdgeKind::Drop { .. }))
    }

    /// Nodes with an edge into `x`.
    pub fn upstream_of(&self, x: &Form) -> Vec<&Edge> {
        self.edges.iter().filter(|e| &e.to == x).collect()
    }

    /// Every node with a path to `x`, including `x`.
    pub fn ancestors(&self, x: &Form) -> BTreeSet<Form> {
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::from([x.clone()]);
        while let Some(cur) = queue.pop_front() {
            if seen.insert(cur.clone()) {
                queue.extend(self.upstream_of(&cur).into_iter().map(|e| e.from.clone()));
            }
        }
        seen
    }

    /// Edge soundness, acyclicity, and reachability of the mouth.
    pub fn check(&self) -> Result<()> {
        for e in &self.edges {
            let img = small_lambda(&e.from, e.p)?.sorted();
            let expect = e.image.as_ref().unwrap_or(&e.to);
            if &img != expect {
                return Err(Error::Internal(format!("edge {} -> {} is not λ_{}", e.from, e.to, e.p)));
            }
        }
        let reach = self.ancestors(&self.mouth);
        if let Some(x) = self.nodes.iter().find(|x| !reach.contains(*x)) {
            return Err(Error::Internal(format!("{x} does not reach the mouth")));
        }
        // Kahn's algorithm consumes every node iff there is no cycle.
        let mut indeg: BTreeMap<&Form, usize> = self.nodes.iter().map(|x| (x, 0)).collect();
        for e in &self.edges {
            *indeg.get_mut(&e.to).expect("edge endpoint is a node") += 1;
        }
        let mut queue: Vec<&Form> = indeg.iter().filter(|(_, &d)| d == 0).map(|(x, _)| *x).collect();
        let mut done = 0;
        while let Some(x) = queue.pop() {
            done += 1;
            for e in self.edges.iter().filter(|e| &e.from == x) {
                let d = indeg.get_mut(&e.to).expect("node");
                *d -= 1;
                if *d == 0 {
                    queue.push(&e.to);
                }
            }
        }
        if done != self.nodes.len() {
            return Err(Error::Internal("river graph has a cycle".into()));
        }
        Ok(())
    }
}

/// `(F, p)` with `F ∈ λ_p^{-1}(e)` p-unstable, new and regular up to `bound`.
pub fn successor_edges(e: &Form, cap: u64, bound: u64) -> Result<Vec<(Form, OddPrime)>> {
    let opts = PreimageOptions { exclude_fixed_points: true, unstable_only: true };
    let mut out = Vec::new();
    for p in OddPrime::small() {
        for f in lambda_preimage(&e.sorted(), p, cap, opts)? {
            if is_old(&f, bound)? == Oldness::New {
                out.push((f, p));
            }
        }
    }
    Ok(out)
}

pub fn successors(e: &Form, cap: u64, bound: u64) -> Result<BTreeSet<Form>> {
    Ok(successor_edges(e, cap, bound)?.into_iter().map(|(f, _)| f).collect())
}

/// Breadth-first closure above `root` under successors and the given drops.
/// The root is not checked.
pub fn build_upstream(root: &Form, cap: u64, bound: u64, drops: &[DropRecord]) -> Result<RiverGraph> {
    let root = root.sorted();
    let mut nodes = BTreeSet::from([root.clone()]);
    let mut edges = BTreeSet::new();
    let mut frontier = vec![root.clone()];
    while !frontier.is_empty() {
        let found: Vec<Vec<Edge>> = frontier
            .par_iter()
            .map(|x| {
                let mut out: Vec<Edge> = successor_edges(x, cap, bound)?
                    .into_iter()
                    .map(|(f, p)| Edge { from: f, to: x.clone(), p, kind: EdgeKind::Lambda, image: None })
                    .collect();
                out.extend(drops.iter().filter(|d| &d.bottom == x && d.top.largest() <= cap).map(|d| Edge {
                    from: d.top.clone(),
                    to: x.clone(),
                    p: d.p,
                    kind: EdgeKind::Drop { height: d.height },
                    image: Some(d.image.clone()),
                }));
                Ok(out)
            })
            .collect::<Result<_>>()?;
        let mut next = BTreeSet::new();
        for e in found.into_iter().flatten() {
            if nodes.insert(e.from.clone()) {
                next.insert(e.from.clone());
            }
            edges.insert(e);
        }
        frontier = next.into_iter().collect();
    }
    let g = RiverGraph { mouth: root, nodes, edges: edges.into_iter().collect(), cap, bound };
    g.check()?;
    Ok(g)
}

/// The river above a stable new regular mouth, with the recorded drop structures.
pub fn build_river(mouth: &Form, cap: u64, bound: u64) -> Result<RiverGraph> {
    let m = mouth.sorted();
    if !m.is_primitive() || !is_stable(&m)? || is_old(&m, bound)? != Oldness::New {
        return Err(Error::Domain(format!("{m} is not a stable new regular form")));
    }
    build_upstream(&m, cap, bound, &fixtures().table3)
}

/// `y` is `x` with one coefficient multiplied by `p^2`, `p ∈ {3,5,7}`.
fn tau_above(x: &Form, y: &Form) -> bool {
    if x.rank() != y.rank() {
        return false;
    }
    OddPrime::small().iter().any(|p| {
        let q = p.get() * p.get();
        (0..x.rank()).any(|i| {
            let mut v = x.coeffs().to_vec();
            v[i] *= q;
            v.sort_unstable();
            v == y.coeffs()
        })
    })
}

fn tau_related(x: &Form, y: &Form) -> bool {
    tau_above(x, y) || tau_above(y, x)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StreamDescriptor {
    pub root: Form,
    /// Each chain starts at the root and alternates between two families.
    pub mainstreams: Vec<Vec<Form>>,
    /// One entry per family, listing its instances within the cap.
    pub periodic_tributaries: Vec<Vec<Form>>,
    pub sporadic: Vec<Form>,
    /// Some candidate chain could not be continued for lack of room under the cap.
    pub partial: bool,
}

impl StreamDescriptor {
    pub fn counts(&self) -> (usize, usize, usize) {
        (self.mainstreams.len(), self.periodic_tributaries.len(), self.sporadic.len())
    }
}

/// Groups `items` into classes of the equivalence generated by `linked`.
fn classes<T: Clone + Ord>(items: &[T], linked: impl Fn(&T, &T) -> bool) -> Vec<Vec<T>> {
    let mut parent: Vec<usize> = (0..items.len()).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while parent[r] != r {
            r = parent[r];
        }
        parent[i] = r;
        r
    }
    for i in 0..items.len() {
        for j in 0..i {
            if linked(&items[i], &items[j]) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<T>> = BTreeMap::new();
    for (i, item) in items.iter().enumerate() {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(item.clone());
    }
    let mut out: Vec<Vec<T>> = groups.into_values().collect();
    out.iter_mut().for_each(|g| g.sort());
    out.sort();
    out
}

/// Mainstreams, periodic tributaries and sporadic forms above `e`, using the
/// `λ_p` edges of `g`. A family counts as periodic only once two of its
/// instances lie in the graph.
pub fn describe_streams(g: &RiverGraph, e: &Form) -> Result<StreamDescriptor> {
    let e = e.sorted();
    if !g.nodes.contains(&e) {
        return Err(Error::Domain(format!("{e} is not in the river")));
    }
    let ups = |x: &Form| -> Vec<Form> {
        g.upstream_of(x).into_iter().filter(|ed| ed.kind == EdgeKind::Lambda).map(|ed| ed.from.clone()).collect()
    };

    let mut mainstreams = Vec::new();
    let mut partial = false;
    // every maximal chain m_0 = e, m_1, m_2, ... with m_{j+2} a τ-lift of m_j
    let mut stack: Vec<Vec<Form>> = ups(&e).into_iter().map(|m1| vec![e.clone(), m1]).collect();
    while let Some(chain) = stack.pop() {
        let n = chain.len();
        let nexts: Vec<Form> = ups(&chain[n - 1]).into_iter().filter(|y| tau_above(&chain[n - 2], y)).collect();
        if nexts.is_empty() {
            if n >= 3 {
                mainstreams.push(chain);
            } else if chain[0].coeffs().iter().all(|&c| c * 9 > g.cap) {
                partial = true;
            }
            continue;
        }
        for y in nexts {
            let mut c = chain.clone();
            c.push(y);
            stack.push(c);
        }
    }
    mainstreams.sort();
    let on_main: BTreeSet<Form> = mainstreams.iter().flatten().cloned().collect();

    let rest: Vec<Form> = g.ancestors(&e).into_iter().filter(|x| x != &e && !on_main.contains(x)).collect();
    let (periodic, sporadic_nodes): (Vec<Form>, Vec<Form>) =
        rest.iter().cloned().partition(|x| rest.iter().any(|y| tau_related(x, y)));

    let adjacent = |x: &Form, y: &Form| g.edges.iter().any(|ed| (&ed.from == x && &ed.to == y) || (&ed.from == y && &ed.to == x));
    // tributaries are the edge-connected pieces; τ-related pieces form one family
    let attached: Vec<Vec<Form>> = classes(&periodic, adjacent)
        .into_iter()
        .filter(|comp| comp.iter().any(|x| ups_target(g, x).iter().any(|t| t == &e || on_main.contains(t))))
        .collect();
    let families = classes(&attached, |a, b| a.iter().any(|x| b.iter().any(|y| tau_related(x, y))));
    let periodic_tributaries = families.into_iter().map(|f| f.into_iter().flatten().collect()).collect();

    let sporadic = classes(&sporadic_nodes, adjacent).into_iter().map(|c| c[0].clone()).collect();
    Ok(StreamDescriptor { root: e, mainstreams, periodic_tributaries, sporadic, partial })
}

/// Targets of the `λ_p` edges leaving `x`.
fn ups_target(g: &RiverGraph, x: &Form) -> Vec<Form> {
    g.edges.iter().filter(|ed| &ed.from == x && ed.kind == EdgeKind::Lambda).map(|ed| ed.to.clone()).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExportFormat {
    Dot,
    Json,
}

fn label(f: &Form) -> String {
    format!("T{f}")
}

pub fn export_graph(g: &RiverGraph, format: ExportFormat) -> String {
    match format {
        ExportFormat::Json => {
            let nodes: Vec<_> = g
                .nodes
                .iter()
                .map(|f| serde_json::json!({ "form": f, "rank": f.rank() }))
                .collect();
            let edges: Vec<_> = g
                .edges
                .iter()
                .map(|e| {
                    let (kind, height) = match e.kind {
                        EdgeKind::Lambda => ("lambda", None),
                        EdgeKind::Drop { height } => ("drop", Some(height)),
                    };
                    serde_json::json!({
                        "from": e.from, "to": e.to, "p": e.p.get(), "kind": kind,
                        "height": height, "image": e.image,
                    })
                })
                .collect();
            let doc = serde_json::json!({
                "mouth": g.mouth, "cap": g.cap, "bound": g.bound, "nodes": nodes, "edges": edges,
            });
            let mut s = serde_json::to_string_pretty(&doc).expect("json values serialize");
            s.push('\n');
            s
        }
        ExportFormat::Dot => {
            let mut s = String::from("digraph river {\n  rankdir=BT;\n");
            for f in &g.nodes {
                let _ = writeln!(s, "  \"{0}\" [label=\"{0}\"];", label(f));
            }
            for e in &g.edges {
                let style = match e.kind {
                    EdgeKind::Lambda => String::new(),
                    EdgeKind::Drop { .. } => ", arrowhead=normalnormal".to_string(),
                };
                let _ = writeln!(s, "  \"{}\" -> \"{}\" [label=\"λ{}\"{}];", label(&e.from), label(&e.to), e.p, style);
            }
            s.push_str("}\n");
            s
        }
    }
}
