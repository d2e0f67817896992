//! Connected genus-decorated stable graphs with labeled legs.
//!
//! Enumeration starts from the one-vertex graph and un-contracts one edge at a
//! time (every edge contraction of a stable graph is stable, so this reaches
//! every class). Classes are deduplicated by a canonical form computed with
//! colour refinement and individualisation; the same search yields the vertex
//! automorphism group order.

use std::collections::{BTreeMap, HashSet};

use num_traits::Zero;
use serde::Serialize;

use crate::rational::Rational;

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("(g, n) = ({0}, {1}) is unstable")]
    Unstable(u32, usize),
    #[error("malformed graph: {0}")]
    Malformed(String),
}

/// A stable graph. Edges are unordered vertex pairs `(u, v)` with `u <= v`
/// (self-loops allowed, repeated for multiplicity); `legs[i]` is the vertex
/// carrying leg `i + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct StableGraph {
    pub genera: Vec<u32>,
    pub edges: Vec<(usize, usize)>,
    pub legs: Vec<usize>,
    pub aut: u64,
}

/// Adjacency-matrix form used internally.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Multigraph {
    genera: Vec<u32>,
    legs: Vec<usize>,
    mult: Vec<Vec<u32>>,
}

impl Multigraph {
    fn n(&self) -> usize {
        self.genera.len()
    }

    fn valence(&self, v: usize) -> u32 {
        let edges: u32 = (0..self.n()).map(|u| if u == v { 2 * self.mult[v][v] } else { self.mult[v][u] }).sum();
        edges + self.legs.iter().filter(|&&l| l == v).count() as u32
    }

    fn edge_count(&self) -> u32 {
        (0..self.n()).map(|u| (u..self.n()).map(|v| self.mult[u][v]).sum::<u32>()).sum()
    }

    fn genus(&self) -> u32 {
        let e = self.edge_count() as i64;
        (self.genera.iter().sum::<u32>() as i64 + 1 - self.n() as i64 + e) as u32
    }

    fn is_stable(&self) -> bool {
        (0..self.n()).all(|v| 2 * self.genera[v] as i64 - 2 + self.valence(v) as i64 > 0)
    }

    fn is_connected(&self) -> bool {
        let n = self.n();
        if n == 0 {
            return false;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for u in 0..n {
                if !seen[u] && self.mult[v][u] > 0 {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Number of ways to lift a vertex automorphism to half-edges.
    fn edge_lifts(&self) -> u64 {
        let mut lifts = 1u64;
        for u in 0..self.n() {
            for v in u..self.n() {
                let m = self.mult[u][v] as u64;
                lifts *= (1..=m).product::<u64>();
                if u == v {
                    lifts *= 1u64 << m;
                }
            }
        }
        lifts
    }

    fn relabel(&self, perm: &[usize]) -> Multigraph {
        // perm[old] = new
        let n = self.n();
        let mut genera = vec![0; n];
        let mut mult = vec![vec![0; n]; n];
        for u in 0..n {
            genera[perm[u]] = self.genera[u];
            for v in 0..n {
                mult[perm[u]][perm[v]] = self.mult[u][v];
            }
        }
        let legs = self.legs.iter().map(|&l| perm[l]).collect();
        Multigraph { genera, legs, mult }
    }

    fn certificate(&self) -> Vec<u32> {
        let n = self.n();
        let mut c = Vec::with_capacity(1 + n + self.legs.len() + n * (n + 1) / 2);
        c.push(n as u32);
        c.extend(&self.genera);
        c.extend(self.legs.iter().map(|&l| l as u32));
        for u in 0..n {
            for v in u..n {
                c.push(self.mult[u][v]);
            }
        }
        c
    }

    fn to_stable(&self, aut: u64) -> StableGraph {
        let mut edges = Vec::new();
        for u in 0..self.n() {
            for v in u..self.n() {
                for _ in 0..self.mult[u][v] {
                    edges.push((u, v));
                }
            }
        }
        StableGraph { genera: self.genera.clone(), edges, legs: self.legs.clone(), aut }
    }
}

/// Reindexes keys into dense colours, ordered by key.
fn dense<K: Ord + Clone>(keys: &[K]) -> Vec<usize> {
    let mut sorted: Vec<K> = keys.to_vec();
    sorted.sort();
    sorted.dedup();
    keys.iter().map(|k| sorted.binary_search(k).unwrap()).collect()
}

fn refine(g: &Multigraph, mut colors: Vec<usize>) -> Vec<usize> {
    let n = g.n();
    loop {
        let count = colors.iter().collect::<HashSet<_>>().len();
        let keys: Vec<(usize, Vec<(usize, u32)>)> = (0..n)
            .map(|v| {
                let mut nb: Vec<(usize, u32)> =
                    (0..n).filter(|&u| u != v && g.mult[v][u] > 0).map(|u| (colors[u], g.mult[v][u])).collect();
                nb.sort();
                (colors[v], nb)
            })
            .collect();
        let next = dense(&keys);
        let next_count = next.iter().collect::<HashSet<_>>().len();
        colors = next;
        if next_count == count {
            return colors;
        }
    }
}

struct Search<'a> {
    g: &'a Multigraph,
    best: Option<(Vec<u32>, Vec<usize>)>,
    ties: u64,
}

impl Search<'_> {
    fn run(&mut self, colors: Vec<usize>) {
        let colors = refine(self.g, colors);
        let n = self.g.n();
        let mut sizes = vec![0usize; n];
        for &c in &colors {
            sizes[c] += 1;
        }
        match (0..n).find(|&c| sizes[c] > 1) {
            None => {
                let cert = self.g.relabel(&colors).certificate();
                match &self.best {
                    Some((b, _)) if *b < cert => {}
                    Some((b, _)) if *b == cert => self.ties += 1,
                    _ => {
                        self.best = Some((cert, colors));
                        self.ties = 1;
                    }
                }
            }
            Some(cell) => {
                for v in (0..n).filter(|&v| colors[v] == cell) {
                    let keys: Vec<(usize, bool)> = (0..n).map(|u| (colors[u], u != v)).collect();
                    self.run(dense(&keys));
                }
            }
        }
    }
}

/// Canonical relabeling and the order of the vertex automorphism group.
fn canonical(g: &Multigraph) -> (Multigraph, u64) {
    let n = g.n();
    let keys: Vec<(u32, u32, Vec<usize>, u32)> = (0..n)
        .map(|v| {
            let legs: Vec<usize> = g.legs.iter().enumerate().filter(|(_, &l)| l == v).map(|(i, _)| i).collect();
            (g.genera[v], g.mult[v][v], legs, g.valence(v))
        })
        .collect();
    let mut s = Search { g, best: None, ties: 0 };
    s.run(dense(&keys));
    let (_, perm) = s.best.expect("nonempty graph");
    (g.relabel(&perm), s.ties)
}

impl StableGraph {
    fn multigraph(&self) -> Multigraph {
        let n = self.genera.len();
        let mut mult = vec![vec![0; n]; n];
        for &(u, v) in &self.edges {
            mult[u][v] += 1;
            if u != v {
                mult[v][u] += 1;
            }
        }
        Multigraph { genera: self.genera.clone(), legs: self.legs.clone(), mult }
    }

    pub fn genus(&self) -> u32 {
        self.multigraph().genus()
    }

    pub fn n_legs(&self) -> usize {
        self.legs.len()
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn valence(&self, v: usize) -> u32 {
        self.multigraph().valence(v)
    }

    /// `(g_v, n_v)` for every vertex.
    pub fn vertex_types(&self) -> Vec<(u32, u32)> {
        let m = self.multigraph();
        (0..m.n()).map(|v| (m.genera[v], m.valence(v))).collect()
    }

    pub fn is_stable(&self) -> bool {
        self.multigraph().is_stable()
    }

    pub fn is_connected(&self) -> bool {
        self.multigraph().is_connected()
    }

    pub fn validate(&self) -> Result<(), GraphError> {
        let n = self.genera.len();
        if self.edges.iter().any(|&(u, v)| u > v || v >= n) || self.legs.iter().any(|&l| l >= n) {
            return Err(GraphError::Malformed("vertex index out of range or unordered edge".into()));
        }
        Ok(())
    }

    /// Canonically relabeled copy; two graphs are isomorphic iff their
    /// canonical forms are equal.
    pub fn canonical_form(&self) -> StableGraph {
        let (c, _) = canonical(&self.multigraph());
        c.to_stable(self.aut)
    }
}

/// `|Aut Γ|`: vertex automorphisms times the half-edge lifts
/// `∏_{u<v} m_uv! · ∏_v m_vv! 2^(m_vv)`. Legs are fixed pointwise.
pub fn automorphism_order(g: &StableGraph) -> u64 {
    let m = g.multigraph();
    canonical(&m).1 * m.edge_lifts()
}

fn check_stable(g: u32, n: usize) -> Result<(), GraphError> {
    if 2 * g as i64 - 2 + n as i64 <= 0 {
        return Err(GraphError::Unstable(g, n));
    }
    Ok(())
}

/// All ways of splitting vertex `v` into two vertices joined by a new edge.
fn splits(g: &Multigraph, v: usize) -> Vec<Multigraph> {
    let n = g.n();
    let w = n; // index of the new vertex
    let legs_at: Vec<usize> = (0..g.legs.len()).filter(|&i| g.legs[i] == v).collect();
    let loops = g.mult[v][v];
    let others: Vec<usize> = (0..n).filter(|&u| u != v && g.mult[v][u] > 0).collect();
    let mut out = Vec::new();

    // Distribution of edges to other vertices: for each neighbour, how many move to w.
    let mut edge_choices: Vec<Vec<u32>> = vec![vec![]];
    for &u in &others {
        let mut next = Vec::new();
        for c in &edge_choices {
            for k in 0..=g.mult[v][u] {
                let mut c2 = c.clone();
                c2.push(k);
                next.push(c2);
            }
        }
        edge_choices = next;
    }
    for g1 in 0..=g.genera[v] {
        let g2 = g.genera[v] - g1;
        for l_keep in 0..=loops {
            for l_move in 0..=loops - l_keep {
                let l_split = loops - l_keep - l_move;
                for ec in &edge_choices {
                    for mask in 0u64..(1u64 << legs_at.len()) {
                        let mut mult = vec![vec![0u32; n + 1]; n + 1];
                        for a in 0..n {
                            for b in 0..n {
                                mult[a][b] = g.mult[a][b];
                            }
                        }
                        mult[v][v] = l_keep;
                        mult[w][w] = l_move;
                        mult[v][w] = l_split + 1;
                        mult[w][v] = l_split + 1;
                        for (i, &u) in others.iter().enumerate() {
                            mult[v][u] = g.mult[v][u] - ec[i];
                            mult[u][v] = mult[v][u];
                            mult[w][u] = ec[i];
                            mult[u][w] = ec[i];
                        }
                        let mut legs = g.legs.clone();
                        for (bit, &li) in legs_at.iter().enumerate() {
                            if mask >> bit & 1 == 1 {
                                legs[li] = w;
                            }
                        }
                        let mut genera = g.genera.clone();
                        genera[v] = g1;
                        genera.push(g2);
                        let cand = Multigraph { genera, legs, mult };
                        if cand.is_stable() {
                            out.push(cand);
                        }
                    }
                }
            }
        }
    }
    out
}

fn degenerations(g: &Multigraph) -> Vec<Multigraph> {
    let mut out = Vec::new();
    for v in 0..g.n() {
        if g.genera[v] > 0 {
            let mut h = g.clone();
            h.genera[v] -= 1;
            h.mult[v][v] += 1;
            out.push(h);
        }
        out.extend(splits(g, v));
    }
    out
}

/// Iterator over the isomorphism classes of stable graphs of type `(g, n)`,
/// one edge count at a time, starting from the edgeless graph.
pub struct Levels {
    current: Vec<Multigraph>,
    max_edges: u32,
    edges: u32,
    done: bool,
}

impl Iterator for Levels {
    type Item = Vec<StableGraph>;

    fn next(&mut self) -> Option<Vec<StableGraph>> {
        if self.done || self.current.is_empty() {
            return None;
        }
        let level: Vec<StableGraph> = self
            .current
            .iter()
            .map(|m| {
                let (_, aut_v) = canonical(m);
                m.to_stable(aut_v * m.edge_lifts())
            })
            .collect();
        if self.edges >= self.max_edges {
            self.done = true;
        } else {
            let mut seen: BTreeMap<Vec<u32>, Multigraph> = BTreeMap::new();
            for m in &self.current {
                for d in degenerations(m) {
                    let (c, _) = canonical(&d);
                    seen.entry(c.certificate()).or_insert(c);
                }
            }
            self.current = seen.into_values().collect();
            self.edges += 1;
        }
        Some(level)
    }
}

pub fn enumerate_levels(g: u32, n: usize) -> Result<Levels, GraphError> {
    check_stable(g, n)?;
    let start = Multigraph { genera: vec![g], legs: vec![0; n], mult: vec![vec![0]] };
    Ok(Levels { current: vec![start], max_edges: 3 * g + n as u32 - 3, edges: 0, done: false })
}

/// All classes of type `(g, n)`, ordered by edge count then canonical certificate.
pub fn enumerate(g: u32, n: usize) -> Result<Vec<StableGraph>, GraphError> {
    Ok(enumerate_levels(g, n)?.flatten().collect())
}

/// Census record `{g, n, count, edge histogram}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Census {
    pub g: u32,
    pub n: usize,
    pub count: usize,
    pub edges: Vec<usize>,
}

pub fn census(g: u32, n: usize) -> Result<Census, GraphError> {
    let edges: Vec<usize> = enumerate_levels(g, n)?.map(|l| l.len()).collect();
    Ok(Census { g, n, count: edges.iter().sum(), edges })
}

/// `(sorted vertex types (genus, valence), edge count) → Σ 1/|Aut|`.
pub type TypeWeights = BTreeMap<(Vec<(u32, u32)>, usize), Rational>;

/// Feynman weights `Σ 1/|Aut Γ|` grouped by the multiset of vertex types
/// (sorted) and the edge count.
pub fn type_weights(g: u32, n: usize) -> Result<TypeWeights, GraphError> {
    let mut out = TypeWeights::new();
    for gr in enumerate(g, n)? {
        let mut types = gr.vertex_types();
        types.sort_unstable();
        *out.entry((types, gr.n_edges())).or_insert_with(Rational::zero) +=
            Rational::new(1.into(), gr.aut.into());
    }
    Ok(out)
}

/// Independent enumeration: labeled multigraphs of the right genus are
/// generated (vertex genera non-increasing, stability checked as soon as a
/// vertex's valence is final), filtered for connectedness and bucketed by
/// explicit permutation search. `|Aut_V|` is `V!` divided by the number of
/// distinct relabelings of the class representative.
pub fn brute_force_oracle(g: u32, n: usize) -> Result<Vec<StableGraph>, GraphError> {
    check_stable(g, n)?;
    let max_v = (2 * g as usize + n).saturating_sub(2).max(1);
    let mut classes: Vec<Multigraph> = Vec::new();
    let mut buckets: std::collections::HashMap<Vec<(u32, u32, u32)>, Vec<usize>> = Default::default();
    for nv in 1..=max_v {
        for_each_tuple(nv, g + 1, &mut |genera: &[u32]| {
            let gsum: u32 = genera.iter().sum();
            if gsum > g || genera.windows(2).any(|w| w[0] < w[1]) {
                return;
            }
            let e = (g - gsum) as usize + nv - 1;
            for_each_tuple(n, nv as u32, &mut |legs: &[u32]| {
                let mut leg_count = vec![0u32; nv];
                for &l in legs {
                    leg_count[l as usize] += 1;
                }
                let mut mult = vec![vec![0u32; nv]; nv];
                fill_edges(genera, &leg_count, 0, 0, e as u32, &mut mult, &mut |mult: &[Vec<u32>]| {
                    let m = Multigraph {
                        genera: genera.to_vec(),
                        legs: legs.iter().map(|&l| l as usize).collect(),
                        mult: mult.to_vec(),
                    };
                    if !m.is_connected() {
                        return;
                    }
                    let mut key: Vec<(u32, u32, u32)> =
                        (0..nv).map(|v| (m.genera[v], m.valence(v), m.mult[v][v])).collect();
                    key.sort();
                    let bucket = buckets.entry(key).or_default();
                    if !bucket.iter().any(|&i| isomorphic(&classes[i], &m)) {
                        bucket.push(classes.len());
                        classes.push(m);
                    }
                });
            });
        });
    }
    Ok(classes
        .into_iter()
        .map(|m| {
            let vfact: u64 = (1..=m.n() as u64).product();
            m.to_stable(vfact / labeled_copies(&m) * m.edge_lifts())
        })
        .collect())
}

/// Distributes `left` edges over the upper-triangular slots starting at
/// `(u, v)`, checking each vertex's stability once its row is complete.
fn fill_edges(
    genera: &[u32],
    legs: &[u32],
    u: usize,
    v: usize,
    left: u32,
    mult: &mut Vec<Vec<u32>>,
    f: &mut dyn FnMut(&[Vec<u32>]),
) {
    let nv = genera.len();
    if u == nv {
        if left == 0 {
            f(mult);
        }
        return;
    }
    if v == nv {
        let val: u32 = (0..nv).map(|w| if w == u { 2 * mult[u][u] } else { mult[u][w] }).sum::<u32>() + legs[u];
        if 2 * genera[u] as i64 - 2 + val as i64 <= 0 {
            return;
        }
        fill_edges(genera, legs, u + 1, u + 1, left, mult, f);
        return;
    }
    for k in 0..=left {
        mult[u][v] = k;
        mult[v][u] = k;
        fill_edges(genera, legs, u, v + 1, left - k, mult, f);
    }
    mult[u][v] = 0;
    mult[v][u] = 0;
}

fn labeled_copies(m: &Multigraph) -> u64 {
    let mut perm: Vec<usize> = (0..m.n()).collect();
    let mut seen = HashSet::new();
    loop {
        seen.insert(m.relabel(&perm));
        if !next_permutation(&mut perm) {
            return seen.len() as u64;
        }
    }
}

fn for_each_tuple(len: usize, base: u32, f: &mut dyn FnMut(&[u32])) {
    let mut t = vec![0u32; len];
    loop {
        f(&t);
        let mut i = 0;
        loop {
            if i == len {
                return;
            }
            t[i] += 1;
            if t[i] < base {
                break;
            }
            t[i] = 0;
            i += 1;
        }
    }
}

/// Explicit isomorphism test by backtracking over vertex bijections that
/// respect genus, loops and legs and agree on all edge multiplicities.
fn isomorphic(a: &Multigraph, b: &Multigraph) -> bool {
    if a.n() != b.n() || a.legs.len() != b.legs.len() || a.edge_count() != b.edge_count() {
        return false;
    }
    let n = a.n();
    let legs_of = |m: &Multigraph, v: usize| -> Vec<usize> {
        m.legs.iter().enumerate().filter(|(_, &l)| l == v).map(|(i, _)| i).collect()
    };
    let sig = |m: &Multigraph, v: usize| (m.genera[v], m.mult[v][v], m.valence(v), legs_of(m, v));
    let sa: Vec<_> = (0..n).map(|v| sig(a, v)).collect();
    let sb: Vec<_> = (0..n).map(|v| sig(b, v)).collect();
    fn extend(a: &Multigraph, b: &Multigraph, sa: &[(u32, u32, u32, Vec<usize>)], sb: &[(u32, u32, u32, Vec<usize>)], map: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
        let u = map.len();
        if u == a.n() {
            return true;
        }
        for v in 0..b.n() {
            if used[v] || sa[u] != sb[v] {
                continue;
            }
            if (0..u).any(|w| a.mult[u][w] != b.mult[v][map[w]]) {
                continue;
            }
            map.push(v);
            used[v] = true;
            if extend(a, b, sa, sb, map, used) {
                return true;
            }
            map.pop();
            used[v] = false;
        }
        false
    }
    extend(a, b, &sa, &sb, &mut Vec::with_capacity(n), &mut vec![false; n])
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(genera: &[u32], edges: &[(usize, usize)], legs: &[usize]) -> StableGraph {
        StableGraph { genera: genera.to_vec(), edges: edges.to_vec(), legs: legs.to_vec(), aut: 0 }
    }

    #[test]
    fn automorphism_examples() {
        assert_eq!(automorphism_order(&graph(&[1], &[(0, 0)], &[])), 2);
        assert_eq!(automorphism_order(&graph(&[0], &[(0, 0), (0, 0)], &[])), 8);
        assert_eq!(automorphism_order(&graph(&[0, 0], &[(0, 1), (0, 1), (0, 1)], &[])), 12);
        assert_eq!(automorphism_order(&graph(&[0, 0], &[(0, 0), (0, 1), (1, 1)], &[])), 8);
        assert_eq!(automorphism_order(&graph(&[1, 1], &[(0, 1)], &[])), 2);
        assert_eq!(automorphism_order(&graph(&[1, 1], &[(0, 1)], &[0])), 1);
    }

    #[test]
    fn small_enumerations() {
        let g03 = enumerate(0, 3).unwrap();
        assert_eq!(g03.len(), 1);
        assert_eq!(g03[0].aut, 1);
        let g11 = enumerate(1, 1).unwrap();
        assert_eq!(g11.len(), 2);
        assert_eq!(g11[1].genera, vec![0]);
        assert_eq!(g11[1].aut, 2);
        assert!(enumerate(0, 2).is_err());
        assert!(enumerate(1, 0).is_err());
    }

    #[test]
    fn genus_two_weights() {
        let gs = enumerate(2, 0).unwrap();
        assert_eq!(gs.len(), 7);
        let mut auts: Vec<u64> = gs.iter().map(|g| g.aut).collect();
        auts.sort();
        assert_eq!(auts, vec![1, 2, 2, 2, 8, 8, 12]);

        use crate::rational::q;
        let w = type_weights(2, 0).unwrap();
        let expect = [
            (vec![(2, 0)], 0, q(1, 1)),
            (vec![(1, 2)], 1, q(1, 2)),
            (vec![(1, 1), (1, 1)], 1, q(1, 2)),
            (vec![(0, 3), (1, 1)], 2, q(1, 2)),
            (vec![(0, 4)], 2, q(1, 8)),
            (vec![(0, 3), (0, 3)], 3, q(5, 24)),
        ];
        assert_eq!(w.len(), expect.len());
        for (types, e, c) in expect {
            assert_eq!(w[&(types, e)], c);
        }
    }

    #[test]
    fn class_counts() {
        for (g, count) in [(2, 7), (3, 42), (4, 379)] {
            assert_eq!(enumerate(g, 0).unwrap().len(), count, "genus {g}");
        }
    }

    #[test]
    fn canonical_form_is_invariant() {
        let a = graph(&[0, 1, 0], &[(0, 1), (0, 2), (0, 2), (2, 2)], &[1, 2]);
        let b = graph(&[0, 0, 1], &[(0, 1), (0, 1), (0, 2), (1, 1)], &[2, 1]);
        assert_eq!(a.canonical_form(), b.canonical_form());
    }
}
