//! Bipartite multigraphs, edge colouring into matchings, and the matching
//! surgery used to steer deficiency sets.
//!
//! Matchings are lists of edge ids into a [`BipartiteGraph`], so parallel
//! edges stay distinguishable.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type EdgeId = usize;

/// Bipartite multigraph with left vertices `0..left` and right vertices
/// `0..right`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BipartiteGraph {
    left: u32,
    right: u32,
    edges: Vec<(u32, u32)>,
}

impl BipartiteGraph {
    pub fn new(left: u32, right: u32) -> Self {
        BipartiteGraph {
            left,
            right,
            edges: Vec::new(),
        }
    }

    /// Adds the edge `(l, r)` and returns its id; parallel edges are allowed.
    pub fn add_edge(&mut self, l: u32, r: u32) -> EdgeId {
        assert!(
            l < self.left && r < self.right,
            "edge ({l},{r}) out of range"
        );
        self.edges.push((l, r));
        self.edges.len() - 1
    }

    pub fn left_count(&self) -> u32 {
        self.left
    }

    pub fn right_count(&self) -> u32 {
        self.right
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge(&self, e: EdgeId) -> (u32, u32) {
        self.edges[e]
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn left_degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.left as usize];
        for &(l, _) in &self.edges {
            d[l as usize] += 1;
        }
        d
    }

    pub fn right_degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.right as usize];
        for &(_, r) in &self.edges {
            d[r as usize] += 1;
        }
        d
    }

    pub fn max_degree(&self) -> usize {
        let l = self.left_degrees().into_iter().max().unwrap_or(0);
        let r = self.right_degrees().into_iter().max().unwrap_or(0);
        l.max(r)
    }

    fn right_adjacency(&self) -> Vec<Vec<EdgeId>> {
        let mut adj = vec![Vec::new(); self.right as usize];
        for (id, &(_, r)) in self.edges.iter().enumerate() {
            adj[r as usize].push(id);
        }
        adj
    }

    /// True when the edges share no endpoint.
    pub fn is_matching(&self, m: &[EdgeId]) -> bool {
        let mut seen_l = vec![false; self.left as usize];
        let mut seen_r = vec![false; self.right as usize];
        for &e in m {
            let Some(&(l, r)) = self.edges.get(e) else {
                return false;
            };
            if std::mem::replace(&mut seen_l[l as usize], true)
                || std::mem::replace(&mut seen_r[r as usize], true)
            {
                return false;
            }
        }
        true
    }

    /// Left vertices not covered by `m`.
    pub fn unsaturated_left(&self, m: &[EdgeId]) -> Vec<u32> {
        let mut covered = vec![false; self.left as usize];
        for &e in m {
            covered[self.edges[e].0 as usize] = true;
        }
        (0..self.left).filter(|&x| !covered[x as usize]).collect()
    }
}

/// An ordered list of pairwise disjoint matchings.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchingPartition {
    parts: Vec<Vec<EdgeId>>,
}

impl MatchingPartition {
    pub fn new(mut parts: Vec<Vec<EdgeId>>) -> Self {
        for p in &mut parts {
            p.sort_unstable();
        }
        MatchingPartition { parts }
    }

    pub fn parts(&self) -> &[Vec<EdgeId>] {
        &self.parts
    }

    pub fn into_parts(self) -> Vec<Vec<EdgeId>> {
        self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.parts.iter().map(Vec::len).collect()
    }

    /// `X_i`: left vertices left unsaturated by part `i`.
    pub fn deficiency(&self, g: &BipartiteGraph, i: usize) -> Vec<u32> {
        g.unsaturated_left(&self.parts[i])
    }

    /// Part index of every edge.
    pub fn part_of_edges(&self, g: &BipartiteGraph) -> Vec<Option<usize>> {
        let mut out = vec![None; g.edge_count()];
        for (i, p) in self.parts.iter().enumerate() {
            for &e in p {
                out[e] = Some(i);
            }
        }
        out
    }

    /// Every part is a matching, and the parts partition `E(g)`.
    pub fn validate(&self, g: &BipartiteGraph) -> Result<()> {
        let mut owner = vec![None; g.edge_count()];
        for (i, p) in self.parts.iter().enumerate() {
            if !g.is_matching(p) {
                return Err(Error::Verification(format!("part {i} is not a matching")));
            }
            for &e in p {
                if let Some(j) = owner[e].replace(i) {
                    return Err(Error::Verification(format!(
                        "edge {e} lies in parts {j} and {i}"
                    )));
                }
            }
        }
        if let Some(e) = owner.iter().position(Option::is_none) {
            return Err(Error::Verification(format!("edge {e} lies in no part")));
        }
        Ok(())
    }

    /// The bipartite graph joining left vertex `x` to part `i` whenever
    /// `x` is unsaturated by part `i`.
    pub fn missing_graph(&self, g: &BipartiteGraph) -> BipartiteGraph {
        let mut m = BipartiteGraph::new(g.left_count(), self.parts.len() as u32);
        for i in 0..self.parts.len() {
            for x in self.deficiency(g, i) {
                m.add_edge(x, i as u32);
            }
        }
        m
    }
}

/// Colours the edges of `g` with `Δ(g)` colours so that each colour class is
/// a matching.
///
/// Edges are coloured in id order. When the lowest free colour `a` at the
/// left end is busy at the right end, the `a`/`b` alternating path from the
/// right end is swapped first (`b` free at the right end); in a bipartite
/// graph that path cannot return to the left end.
pub fn konig_color(g: &BipartiteGraph) -> MatchingPartition {
    let delta = g.max_degree();
    if delta == 0 {
        return MatchingPartition::default();
    }
    let nl = g.left as usize;
    let nr = g.right as usize;
    // slot tables: left vertices first, then right vertices
    let mut at: Vec<Option<EdgeId>> = vec![None; (nl + nr) * delta];
    let mut colour: Vec<usize> = vec![usize::MAX; g.edge_count()];
    let lslot = |v: u32, c: usize| v as usize * delta + c;
    let rslot = |v: u32, c: usize| (nl + v as usize) * delta + c;

    for (e, &(u, v)) in g.edges.iter().enumerate() {
        let a = (0..delta)
            .find(|&c| at[lslot(u, c)].is_none())
            .expect("left degree exceeds max degree");
        let b = (0..delta)
            .find(|&c| at[rslot(v, c)].is_none())
            .expect("right degree exceeds max degree");
        if at[rslot(v, a)].is_some() {
            // walk v -a- w -b- v' -a- ...
            let mut path = Vec::new();
            let mut on_right = true;
            let mut cur = v;
            let mut c = a;
            loop {
                let slot = if on_right {
                    rslot(cur, c)
                } else {
                    lslot(cur, c)
                };
                let Some(pe) = at[slot] else { break };
                path.push(pe);
                let (pl, pr) = g.edges[pe];
                cur = if on_right { pl } else { pr };
                on_right = !on_right;
                c = if c == a { b } else { a };
            }
            for &pe in &path {
                let (pl, pr) = g.edges[pe];
                at[lslot(pl, colour[pe])] = None;
                at[rslot(pr, colour[pe])] = None;
            }
            for &pe in &path {
                let (pl, pr) = g.edges[pe];
                colour[pe] = if colour[pe] == a { b } else { a };
                at[lslot(pl, colour[pe])] = Some(pe);
                at[rslot(pr, colour[pe])] = Some(pe);
            }
            debug_assert!(at[lslot(u, a)].is_none());
        }
        colour[e] = a;
        at[lslot(u, a)] = Some(e);
        at[rslot(v, a)] = Some(e);
    }

    let mut parts = vec![Vec::new(); delta];
    for (e, &c) in colour.iter().enumerate() {
        parts[c].push(e);
    }
    MatchingPartition::new(parts)
}

/// Components of `M ∪ N` for two disjoint matchings, each as an ordered walk
/// of edge ids. Paths are listed from one end to the other; cycles from an
/// arbitrary edge.
fn union_components(g: &BipartiteGraph, m: &[EdgeId], n: &[EdgeId]) -> Vec<Vec<EdgeId>> {
    let nl = g.left as usize;
    let slots = nl + g.right as usize;
    // per vertex: (edge in m, edge in n)
    let mut inc: Vec<[Option<EdgeId>; 2]> = vec![[None, None]; slots];
    for (side, list) in [m, n].into_iter().enumerate() {
        for &e in list {
            let (l, r) = g.edges[e];
            inc[l as usize][side] = Some(e);
            inc[nl + r as usize][side] = Some(e);
        }
    }
    let mut in_m = vec![false; g.edge_count()];
    for &e in m {
        in_m[e] = true;
    }
    let mut done = vec![false; g.edge_count()];
    let other_end = |e: EdgeId, from: usize| {
        let (l, r) = g.edges[e];
        if from == l as usize {
            nl + r as usize
        } else {
            l as usize
        }
    };
    let walk = |start_vertex: usize, first: EdgeId, done: &mut Vec<bool>| {
        let mut comp = Vec::new();
        let mut v = start_vertex;
        let mut e = first;
        loop {
            if done[e] {
                break;
            }
            done[e] = true;
            comp.push(e);
            v = other_end(e, v);
            let side = if in_m[e] { 1 } else { 0 };
            match inc[v][side] {
                Some(next) => e = next,
                None => break,
            }
        }
        comp
    };

    let mut comps = Vec::new();
    // paths first: start at vertices of union-degree one
    for (v, &[a, b]) in inc.iter().enumerate().take(slots) {
        let start = match (a, b) {
            (Some(e), None) | (None, Some(e)) => e,
            _ => continue,
        };
        if !done[start] {
            comps.push(walk(v, start, &mut done));
        }
    }
    for &e in m.iter().chain(n) {
        if !done[e] {
            let (l, _) = g.edges[e];
            comps.push(walk(l as usize, e, &mut done));
        }
    }
    comps
}

/// Alternating path of `from ∪ to` with a `from` edge at both ends, lowest
/// leading edge id first.
fn surplus_path(g: &BipartiteGraph, from: &[EdgeId], to: &[EdgeId]) -> Option<Vec<EdgeId>> {
    let mut in_from = vec![false; g.edge_count()];
    for &e in from {
        in_from[e] = true;
    }
    union_components(g, from, to)
        .into_iter()
        // alternating cycles are even, so an odd component is such a path
        .filter(|c| c.len() % 2 == 1 && in_from[c[0]])
        .min_by_key(|c| c.iter().copied().min())
}

fn swap_along(from: &mut Vec<EdgeId>, to: &mut Vec<EdgeId>, path: &[EdgeId]) {
    let in_path = |e: &EdgeId| path.contains(e);
    let moved_from: Vec<EdgeId> = from.iter().copied().filter(in_path).collect();
    let moved_to: Vec<EdgeId> = to.iter().copied().filter(in_path).collect();
    from.retain(|e| !in_path(e));
    to.retain(|e| !in_path(e));
    from.extend(moved_to);
    to.extend(moved_from);
    from.sort_unstable();
    to.sort_unstable();
}

/// Moves one edge's worth of size from `from` to `to` along an alternating
/// path, if one exists. Sizes need not be ordered.
pub fn transfer(g: &BipartiteGraph, from: &mut Vec<EdgeId>, to: &mut Vec<EdgeId>) -> bool {
    match surplus_path(g, from, to) {
        Some(path) => {
            swap_along(from, to, &path);
            true
        }
        None => false,
    }
}

/// Given disjoint matchings with `|M| > |N|`, returns disjoint matchings
/// `M'`, `N'` with `|M'| = |M| - 1`, `|N'| = |N| + 1` and the same union.
pub fn rebalance_pair(
    g: &BipartiteGraph,
    m: &[EdgeId],
    n: &[EdgeId],
) -> Result<(Vec<EdgeId>, Vec<EdgeId>)> {
    if !g.is_matching(m) || !g.is_matching(n) {
        return Err(Error::Precondition("both inputs must be matchings".into()));
    }
    if m.iter().any(|e| n.contains(e)) {
        return Err(Error::Precondition("matchings must be disjoint".into()));
    }
    if m.len() <= n.len() {
        return Err(Error::Precondition(format!(
            "need |M| > |N|, got {} and {}",
            m.len(),
            n.len()
        )));
    }
    let mut m2 = m.to_vec();
    let mut n2 = n.to_vec();
    // |M| > |N| forces an M-heavy path component
    let ok = transfer(g, &mut m2, &mut n2);
    debug_assert!(ok);
    Ok((m2, n2))
}

/// Swaps a random size-preserving component (even path or cycle) of
/// `M ∪ N`. Returns false when there is none.
pub fn kempe_shuffle<R: Rng>(
    g: &BipartiteGraph,
    m: &mut Vec<EdgeId>,
    n: &mut Vec<EdgeId>,
    rng: &mut R,
) -> bool {
    let even: Vec<Vec<EdgeId>> = union_components(g, m, n)
        .into_iter()
        .filter(|c| c.len() % 2 == 0)
        .collect();
    match even.choose(rng) {
        Some(c) => {
            swap_along(m, n, c);
            true
        }
        None => false,
    }
}

/// Reshapes `p` into `targets.len()` matchings with exactly the target
/// sizes, padding with empty parts.
///
/// Repeatedly moves size from a part above target to a part below target by
/// [`transfer`], directly when possible and otherwise along a shortest chain
/// of parts found by breadth-first search.
pub fn redistribute_to_profile(
    g: &BipartiteGraph,
    p: &MatchingPartition,
    targets: &[usize],
) -> Result<MatchingPartition> {
    let total: usize = targets.iter().sum();
    if total != g.edge_count() {
        return Err(Error::Precondition(format!(
            "target sizes sum to {total}, graph has {} edges",
            g.edge_count()
        )));
    }
    if targets.len() < p.len() {
        return Err(Error::Precondition(format!(
            "{} targets for {} existing parts",
            targets.len(),
            p.len()
        )));
    }
    let bound = g
        .left_count()
        .min(g.right_count())
        .try_into()
        .unwrap_or(usize::MAX);
    if let Some(t) = targets.iter().find(|&&t| t > bound) {
        return Err(Error::Precondition(format!(
            "target {t} exceeds the matching bound {bound}"
        )));
    }

    let mut parts = p.parts.clone();
    parts.resize(targets.len(), Vec::new());
    let budget = 4 * g.edge_count() + 100;
    for _ in 0..budget {
        let over: Vec<usize> = (0..parts.len())
            .filter(|&i| parts[i].len() > targets[i])
            .collect();
        if over.is_empty() {
            return Ok(MatchingPartition::new(parts));
        }
        let mut under: Vec<usize> = (0..parts.len())
            .filter(|&i| parts[i].len() < targets[i])
            .collect();
        under.sort_by_key(|&i| (parts[i].len(), i));
        let mut over_sorted = over.clone();
        over_sorted.sort_by_key(|&i| (std::cmp::Reverse(parts[i].len()), i));

        let mut moved = false;
        'direct: for &a in &over_sorted {
            for &b in &under {
                if let Some(path) = surplus_path(g, &parts[a], &parts[b]) {
                    let (pa, pb) = pair_mut(&mut parts, a, b);
                    swap_along(pa, pb, &path);
                    moved = true;
                    break 'direct;
                }
            }
        }
        if moved {
            continue;
        }
        if let Some(chain) = transfer_chain(g, &parts, &over_sorted, &under) {
            for w in chain.windows(2) {
                let (pa, pb) = pair_mut(&mut parts, w[0], w[1]);
                if !transfer(g, pa, pb) {
                    break;
                }
            }
            continue;
        }
        return Err(Error::SearchExhausted(format!(
            "no transfer reaches an under-full part (sizes {:?})",
            parts.iter().map(Vec::len).collect::<Vec<_>>()
        )));
    }
    Err(Error::SearchExhausted(
        "redistribution did not settle within its move budget".into(),
    ))
}

fn transfer_chain(
    g: &BipartiteGraph,
    parts: &[Vec<EdgeId>],
    sources: &[usize],
    sinks: &[usize],
) -> Option<Vec<usize>> {
    let k = parts.len();
    let mut prev = vec![usize::MAX; k];
    let mut seen = vec![false; k];
    let mut queue = VecDeque::new();
    for &s in sources {
        seen[s] = true;
        queue.push_back(s);
    }
    while let Some(a) = queue.pop_front() {
        for b in 0..k {
            if seen[b] || surplus_path(g, &parts[a], &parts[b]).is_none() {
                continue;
            }
            seen[b] = true;
            prev[b] = a;
            if sinks.contains(&b) {
                let mut chain = vec![b];
                let mut cur = b;
                while prev[cur] != usize::MAX {
                    cur = prev[cur];
                    chain.push(cur);
                }
                chain.reverse();
                return Some(chain);
            }
            queue.push_back(b);
        }
    }
    None
}

fn pair_mut<T>(v: &mut [T], a: usize, b: usize) -> (&mut T, &mut T) {
    assert_ne!(a, b);
    if a < b {
        let (x, y) = v.split_at_mut(b);
        (&mut x[a], &mut y[0])
    } else {
        let (x, y) = v.split_at_mut(a);
        (&mut y[0], &mut x[b])
    }
}

/// A set of right vertices whose neighbourhood is too small.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HallViolation {
    pub right: Vec<u32>,
    pub neighbourhood: Vec<u32>,
}

/// Finds a matching covering every vertex in `targets` (right side) using
/// only edges at those vertices, or a Hall violator showing none exists.
pub fn saturating_matching(
    g: &BipartiteGraph,
    targets: &[u32],
) -> std::result::Result<Vec<EdgeId>, HallViolation> {
    let mut targets = targets.to_vec();
    targets.sort_unstable();
    targets.dedup();
    let adj = g.right_adjacency();
    let mut mate_of_left: Vec<Option<EdgeId>> = vec![None; g.left as usize];

    fn augment(
        g: &BipartiteGraph,
        adj: &[Vec<EdgeId>],
        r: u32,
        mate_of_left: &mut [Option<EdgeId>],
        seen_left: &mut [bool],
        seen_right: &mut [bool],
    ) -> bool {
        seen_right[r as usize] = true;
        for &e in &adj[r as usize] {
            let l = g.edges[e].0 as usize;
            if seen_left[l] {
                continue;
            }
            seen_left[l] = true;
            let free = match mate_of_left[l] {
                None => true,
                Some(me) => augment(g, adj, g.edges[me].1, mate_of_left, seen_left, seen_right),
            };
            if free {
                mate_of_left[l] = Some(e);
                return true;
            }
        }
        false
    }

    for &r in &targets {
        if r >= g.right {
            return Err(HallViolation {
                right: vec![r],
                neighbourhood: Vec::new(),
            });
        }
        let mut seen_left = vec![false; g.left as usize];
        let mut seen_right = vec![false; g.right as usize];
        if !augment(
            g,
            &adj,
            r,
            &mut mate_of_left,
            &mut seen_left,
            &mut seen_right,
        ) {
            return Err(HallViolation {
                right: (0..g.right).filter(|&v| seen_right[v as usize]).collect(),
                neighbourhood: (0..g.left).filter(|&v| seen_left[v as usize]).collect(),
            });
        }
    }
    let mut m: Vec<EdgeId> = mate_of_left.into_iter().flatten().collect();
    m.sort_unstable();
    Ok(m)
}

/// Splits `E(g)` into matchings `M'_j` where `M'_j` covers exactly the right
/// vertices in `requirements[j]`, each once.
///
/// Each edge picks a group containing its right end; edges at a common
/// vertex (either side) pick different groups. Solved by depth-first search
/// over edges, most-constrained first, with forward checking.
pub fn partition_missing_graph(
    g: &BipartiteGraph,
    requirements: &[Vec<u32>],
) -> Result<Vec<Vec<EdgeId>>> {
    let k = requirements.len();
    let mut groups_at: Vec<Vec<usize>> = vec![Vec::new(); g.right as usize];
    for (j, req) in requirements.iter().enumerate() {
        let mut sorted = req.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Precondition(format!(
                "requirement {j} repeats a vertex"
            )));
        }
        for &r in req {
            if r >= g.right {
                return Err(Error::Precondition(format!(
                    "requirement {j} names vertex {r} outside the graph"
                )));
            }
            groups_at[r as usize].push(j);
        }
    }
    let need: usize = requirements.iter().map(Vec::len).sum();
    if need != g.edge_count() {
        return Err(Error::Precondition(format!(
            "requirements cover {need} slots, graph has {} edges",
            g.edge_count()
        )));
    }
    let rdeg = g.right_degrees();
    for (r, gs) in groups_at.iter().enumerate() {
        if gs.len() != rdeg[r] {
            let j = gs.first().copied().unwrap_or(0);
            return Err(Error::SearchExhausted(format!(
                "group {j}: vertex {r} has degree {} but is required by {} groups",
                rdeg[r],
                gs.len()
            )));
        }
    }

    let ne = g.edge_count();
    let nl = g.left as usize;
    // neighbouring edges: same left end or same right end
    let mut by_vertex: Vec<Vec<EdgeId>> = vec![Vec::new(); nl + g.right as usize];
    for (e, &(l, r)) in g.edges.iter().enumerate() {
        by_vertex[l as usize].push(e);
        by_vertex[nl + r as usize].push(e);
    }
    let mut domain: Vec<u64> = g
        .edges
        .iter()
        .map(|&(_, r)| groups_at[r as usize].iter().fold(0u64, |m, &j| m | 1 << j))
        .collect();
    if k > 64 {
        return Err(Error::Precondition("at most 64 groups supported".into()));
    }
    let mut assigned: Vec<Option<usize>> = vec![None; ne];

    struct Search<'a> {
        g: &'a BipartiteGraph,
        nl: usize,
        by_vertex: Vec<Vec<EdgeId>>,
        nodes: usize,
        first_conflict: Option<usize>,
    }

    impl Search<'_> {
        fn neighbours(&self, e: EdgeId) -> impl Iterator<Item = EdgeId> + '_ {
            let (l, r) = self.g.edges[e];
            self.by_vertex[l as usize]
                .iter()
                .chain(&self.by_vertex[self.nl + r as usize])
                .copied()
                .filter(move |&f| f != e)
        }

        fn run(&mut self, domain: &mut Vec<u64>, assigned: &mut Vec<Option<usize>>) -> bool {
            self.nodes += 1;
            if self.nodes > 2_000_000 {
                return false;
            }
            let next = (0..domain.len())
                .filter(|&e| assigned[e].is_none())
                .min_by_key(|&e| (domain[e].count_ones(), e));
            let Some(e) = next else { return true };
            let mut options = domain[e];
            while options != 0 {
                let j = options.trailing_zeros() as usize;
                options &= options - 1;
                assigned[e] = Some(j);
                let mut pruned = Vec::new();
                let mut wiped = false;
                for f in self.neighbours(e).collect::<Vec<_>>() {
                    if assigned[f].is_none() && domain[f] & (1 << j) != 0 {
                        domain[f] &= !(1 << j);
                        pruned.push(f);
                        if domain[f] == 0 {
                            wiped = true;
                        }
                    }
                }
                if wiped {
                    self.first_conflict.get_or_insert(j);
                } else if self.run(domain, assigned) {
                    return true;
                }
                for f in pruned {
                    domain[f] |= 1 << j;
                }
                assigned[e] = None;
            }
            false
        }
    }

    let mut search = Search {
        g,
        nl,
        by_vertex,
        nodes: 0,
        first_conflict: None,
    };
    if !search.run(&mut domain, &mut assigned) {
        return Err(Error::SearchExhausted(format!(
            "missing graph admits no split into the required matchings \
             (first conflict in group {}, {} nodes)",
            search.first_conflict.unwrap_or(0),
            search.nodes
        )));
    }
    let mut out = vec![Vec::new(); k];
    for (e, j) in assigned.into_iter().enumerate() {
        out[j.expect("all edges assigned")].push(e);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn graph(left: u32, right: u32, edges: &[(u32, u32)]) -> BipartiteGraph {
        let mut g = BipartiteGraph::new(left, right);
        for &(l, r) in edges {
            g.add_edge(l, r);
        }
        g
    }

    #[test]
    fn star_needs_three_colours() {
        let g = graph(1, 3, &[(0, 0), (0, 1), (0, 2)]);
        let p = konig_color(&g);
        assert_eq!(p.sizes(), vec![1, 1, 1]);
        p.validate(&g).unwrap();
    }

    #[test]
    fn even_cycle_splits_into_two_perfect_matchings() {
        // 6-cycle l0 r0 l1 r1 l2 r2
        let g = graph(3, 3, &[(0, 0), (1, 0), (1, 1), (2, 1), (2, 2), (0, 2)]);
        let p = konig_color(&g);
        assert_eq!(p.sizes(), vec![3, 3]);
        p.validate(&g).unwrap();
    }

    #[test]
    fn empty_graph_has_no_parts() {
        assert!(konig_color(&BipartiteGraph::new(3, 3)).is_empty());
    }

    #[test]
    fn parallel_edges_get_distinct_colours() {
        let g = graph(2, 1, &[(0, 0), (0, 0), (1, 0)]);
        let p = konig_color(&g);
        assert_eq!(p.len(), 3);
        p.validate(&g).unwrap();
    }

    #[test]
    fn rebalance_single_edge() {
        let g = graph(1, 1, &[(0, 0)]);
        let (m, n) = rebalance_pair(&g, &[0], &[]).unwrap();
        assert!(m.is_empty());
        assert_eq!(n, vec![0]);
    }

    #[test]
    fn rebalance_path_of_three() {
        // a-b-c-d with M = {ab, cd}: a=l0, b=r0, c=l1, d=r1, plus bc = (l1, r0)
        let g = graph(2, 2, &[(0, 0), (1, 0), (1, 1)]);
        let (m, n) = rebalance_pair(&g, &[0, 2], &[]).unwrap();
        assert_eq!((m.len(), n.len()), (1, 1));
    }

    #[test]
    fn rebalance_rejects_bad_sizes() {
        let g = graph(2, 2, &[(0, 0), (1, 1)]);
        assert!(matches!(
            rebalance_pair(&g, &[0], &[1]),
            Err(Error::Precondition(_))
        ));
        assert!(rebalance_pair(&g, &[0], &[0]).is_err());
    }

    #[test]
    fn saturating_in_k33() {
        let mut edges = Vec::new();
        for l in 0..3 {
            for r in 0..3 {
                edges.push((l, r));
            }
        }
        let g = graph(3, 3, &edges);
        let m = saturating_matching(&g, &[0, 1, 2]).unwrap();
        assert_eq!(m.len(), 3);
        assert!(g.is_matching(&m));
    }

    #[test]
    fn isolated_target_gives_witness() {
        let g = graph(2, 3, &[(0, 0), (1, 1)]);
        let w = saturating_matching(&g, &[0, 2]).unwrap_err();
        assert_eq!(w.right, vec![2]);
        assert!(w.neighbourhood.is_empty());
    }

    #[test]
    fn hall_witness_is_deficient() {
        // r0 and r1 both only see l0
        let g = graph(2, 3, &[(0, 0), (0, 1), (1, 2)]);
        let w = saturating_matching(&g, &[0, 1, 2]).unwrap_err();
        assert!(w.neighbourhood.len() < w.right.len());
    }

    #[test]
    fn redistribute_identity_and_sum_check() {
        let g = graph(3, 3, &[(0, 0), (1, 0), (1, 1), (2, 1), (2, 2), (0, 2)]);
        let p = konig_color(&g);
        let same = redistribute_to_profile(&g, &p, &[3, 3]).unwrap();
        assert_eq!(same.sizes(), vec![3, 3]);
        assert!(matches!(
            redistribute_to_profile(&g, &p, &[3, 2]),
            Err(Error::Precondition(_))
        ));
        let spread = redistribute_to_profile(&g, &p, &[2, 2, 2]).unwrap();
        assert_eq!(spread.sizes(), vec![2, 2, 2]);
        spread.validate(&g).unwrap();
    }

    #[test]
    fn missing_graph_split_small() {
        // left 0..3, right 0..2; each left vertex in both right vertices
        let g = graph(3, 2, &[(0, 0), (0, 1), (1, 0), (1, 1), (2, 0), (2, 1)]);
        let reqs = vec![vec![0, 1], vec![0, 1], vec![0, 1]];
        let parts = partition_missing_graph(&g, &reqs).unwrap();
        for (p, r) in parts.iter().zip(&reqs) {
            assert!(g.is_matching(p));
            let mut rs: Vec<u32> = p.iter().map(|&e| g.edge(e).1).collect();
            rs.sort();
            assert_eq!(&rs, r);
        }
    }

    #[test]
    fn missing_graph_split_detects_infeasible() {
        // one left vertex joined to r0 and r1, both only in group 0
        let g = graph(1, 2, &[(0, 0), (0, 1)]);
        let err = partition_missing_graph(&g, &[vec![0, 1]]).unwrap_err();
        assert!(matches!(err, Error::SearchExhausted(_)));
        assert!(matches!(
            partition_missing_graph(&g, &[vec![0, 0]]),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn kempe_shuffle_keeps_sizes() {
        let g = graph(3, 3, &[(0, 0), (1, 0), (1, 1), (2, 1), (2, 2), (0, 2)]);
        let p = konig_color(&g).into_parts();
        let (mut a, mut b) = (p[0].clone(), p[1].clone());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(kempe_shuffle(&g, &mut a, &mut b, &mut rng));
        assert_eq!((a.len(), b.len()), (3, 3));
        assert!(g.is_matching(&a) && g.is_matching(&b));
    }
}
