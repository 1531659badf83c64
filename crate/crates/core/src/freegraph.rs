//! Framed 4-valent graphs written as unoriented multi-circle chord diagrams,
//! and formal linear combinations of them.
//!
//! A vertex of the graph is a chord: its two endpoints are the two passages
//! through the vertex, and the circle neighbours of an endpoint are the
//! opposite half-edges. Circle orientations are bookkeeping only.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::algebra::{pow_u64, Scalar};
use crate::gauss::LinkDiagram;

/// Code of the single-circle generator.
pub const CIRCLE: &str = "(o)";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("chord {0} has {1} endpoints")]
    Endpoints(u32, usize),
    #[error("malformed graph code `{0}`")]
    Code(String),
    #[error("malformed polynomial term `{0}`")]
    Term(String),
    #[error(transparent)]
    Coefficient(#[from] crate::algebra::AlgebraError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Smoothing {
    /// Reconnection respecting both strand orientations.
    Oriented,
    /// The other planar reconnection.
    Disoriented,
    /// Kept as a graphical vertex.
    Vertex,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FreeGraph {
    circles: Vec<Vec<u32>>,
    free_circles: usize,
}

impl FreeGraph {
    /// Empty circles are counted into `free_circles`.
    pub fn new(circles: Vec<Vec<u32>>, free_circles: usize) -> Result<Self, GraphError> {
        let mut count: BTreeMap<u32, usize> = BTreeMap::new();
        for s in circles.iter().flatten() {
            *count.entry(*s).or_default() += 1;
        }
        if let Some((s, c)) = count.iter().find(|(_, c)| **c != 2) {
            return Err(GraphError::Endpoints(*s, *c));
        }
        Ok(Self::assemble(circles, free_circles))
    }

    fn assemble(circles: Vec<Vec<u32>>, free_circles: usize) -> Self {
        let empty = circles.iter().filter(|c| c.is_empty()).count();
        FreeGraph {
            circles: circles.into_iter().filter(|c| !c.is_empty()).collect(),
            free_circles: free_circles + empty,
        }
    }

    /// Circles carrying at least one chord endpoint.
    pub fn circles(&self) -> &[Vec<u32>] {
        &self.circles
    }

    pub fn free_circles(&self) -> usize {
        self.free_circles
    }

    pub fn num_chords(&self) -> usize {
        self.circles.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn total_circles(&self) -> usize {
        self.circles.len() + self.free_circles
    }

    /// Endpoint positions `(circle, index)` of every chord.
    fn occurrences(&self) -> BTreeMap<u32, Vec<(usize, usize)>> {
        let mut occ: BTreeMap<u32, Vec<(usize, usize)>> = BTreeMap::new();
        for (c, circ) in self.circles.iter().enumerate() {
            for (i, s) in circ.iter().enumerate() {
                occ.entry(*s).or_default().push((c, i));
            }
        }
        occ
    }

    /// Chord pairs bounding a bigon. Two chords `u ≠ v` qualify when two
    /// circle edges join them using different endpoints of `u` and different
    /// endpoints of `v`.
    pub fn removable_pairs(&self) -> Vec<(u32, u32)> {
        let occ = self.occurrences();
        let which = |s: u32, at: (usize, usize)| usize::from(occ[&s][1] == at);
        let mut edges: BTreeMap<(u32, u32), BTreeSet<(usize, usize)>> = BTreeMap::new();
        for (c, circ) in self.circles.iter().enumerate() {
            let n = circ.len();
            if n < 2 {
                continue;
            }
            for i in 0..n {
                let j = (i + 1) % n;
                let (s, t) = (circ[i], circ[j]);
                if s == t {
                    continue;
                }
                let (ws, wt) = (which(s, (c, i)), which(t, (c, j)));
                let key = if s < t {
                    ((s, t), (ws, wt))
                } else {
                    ((t, s), (wt, ws))
                };
                edges.entry(key.0).or_default().insert(key.1);
            }
        }
        edges
            .into_iter()
            .filter(|(_, uses)| uses.iter().any(|&(a, b)| uses.contains(&(1 - a, 1 - b))))
            .map(|(k, _)| k)
            .collect()
    }

    /// Deletes both chords of a bigon; emptied circles become free.
    pub fn remove_pair(&self, u: u32, v: u32) -> FreeGraph {
        let circles = self
            .circles
            .iter()
            .map(|c| c.iter().copied().filter(|s| *s != u && *s != v).collect())
            .collect();
        Self::assemble(circles, self.free_circles)
    }

    /// Removes bigons until none is left.
    pub fn r2_reduce(&self) -> FreeGraph {
        let mut g = self.clone();
        while let Some(&(u, v)) = g.removable_pairs().first() {
            g = g.remove_pair(u, v);
        }
        g
    }

    /// Symmetry-invariant code of the chord part: minimal serialization over
    /// chord relabelings, rotations and reflections of circles, and circle
    /// orders. Free circles are not part of the code.
    pub fn canonical_code(&self) -> String {
        let tokens = self.canonical_tokens();
        let mut out = String::new();
        for circle in tokens {
            let labels: Vec<String> = circle.iter().map(|&k| label_name(k)).collect();
            out.push('(');
            out.push_str(&labels.join(" "));
            out.push(')');
        }
        out
    }

    fn canonical_tokens(&self) -> Vec<Vec<u32>> {
        #[derive(Clone)]
        struct Cand {
            used: Vec<bool>,
            map: BTreeMap<u32, u32>,
        }
        let mut order: Vec<usize> = (0..self.circles.len()).collect();
        order.sort_by_key(|&c| self.circles[c].len());
        let lengths: Vec<usize> = order.iter().map(|&c| self.circles[c].len()).collect();
        let mut cands = vec![Cand {
            used: vec![false; self.circles.len()],
            map: BTreeMap::new(),
        }];
        let mut result: Vec<Vec<u32>> = Vec::new();
        for &len in &lengths {
            let mut best: Option<Vec<u32>> = None;
            let mut next: Vec<Cand> = Vec::new();
            let mut seen: BTreeSet<(Vec<bool>, Vec<(u32, u32)>)> = BTreeSet::new();
            for cand in &cands {
                for (c, circ) in self.circles.iter().enumerate() {
                    if cand.used[c] || circ.len() != len {
                        continue;
                    }
                    for rot in 0..len {
                        for refl in [false, true] {
                            let mut map = cand.map.clone();
                            let mut block = Vec::with_capacity(len);
                            for k in 0..len {
                                let idx = if refl {
                                    (rot + len - k) % len
                                } else {
                                    (rot + k) % len
                                };
                                let s = circ[idx];
                                let fresh = map.len() as u32;
                                block.push(*map.entry(s).or_insert(fresh));
                            }
                            let better = match &best {
                                None => true,
                                Some(b) => block < *b,
                            };
                            if better {
                                best = Some(block.clone());
                                next.clear();
                                seen.clear();
                            }
                            if best.as_ref() == Some(&block) {
                                let mut used = cand.used.clone();
                                used[c] = true;
                                let key =
                                    (used.clone(), map.iter().map(|(a, b)| (*a, *b)).collect());
                                if seen.insert(key) {
                                    next.push(Cand { used, map });
                                }
                            }
                        }
                    }
                }
            }
            result.push(best.expect("a circle of this length is unused"));
            cands = next;
        }
        result
    }

    /// Parses a code such as `(a b a b)` or `(a b)(a b)`. `(o)` is the
    /// single free circle.
    pub fn parse_code(text: &str) -> Result<FreeGraph, GraphError> {
        let t = text.trim();
        if t == CIRCLE {
            return Ok(FreeGraph {
                circles: Vec::new(),
                free_circles: 1,
            });
        }
        let err = || GraphError::Code(text.to_string());
        let mut circles = Vec::new();
        let mut names: BTreeMap<String, u32> = BTreeMap::new();
        let mut rest = t;
        while !rest.is_empty() {
            let inner_end = rest.find(')').ok_or_else(err)?;
            if !rest.starts_with('(') {
                return Err(err());
            }
            let inner = &rest[1..inner_end];
            let mut circ = Vec::new();
            for tok in inner.split_whitespace() {
                if !tok.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                    return Err(err());
                }
                let fresh = names.len() as u32;
                circ.push(*names.entry(tok.to_string()).or_insert(fresh));
            }
            if circ.is_empty() {
                return Err(err());
            }
            circles.push(circ);
            rest = rest[inner_end + 1..].trim_start();
        }
        if circles.is_empty() {
            return Err(err());
        }
        FreeGraph::new(circles, 0)
    }
}

/// Label of the `k`-th chord in canonical codes: `a`..`z`, then `z26`, `z27`…
pub fn label_name(k: u32) -> String {
    if k < 26 {
        ((b'a' + k as u8) as char).to_string()
    } else {
        format!("z{k}")
    }
}

/// Traces the circles of a state. A crossing in state `Vertex` contributes
/// its index as a chord endpoint each time a circle passes through it.
pub fn smooth_state(d: &LinkDiagram, state: &[Smoothing]) -> FreeGraph {
    let arcs = d.crossing_arcs();
    let nar = d.num_semiarcs();
    // End of a semiarc: 2*arc for its tail, 2*arc+1 for its head.
    const NONE: usize = usize::MAX;
    let mut partner = vec![NONE; 2 * nar];
    let mut owner = vec![NONE; 2 * nar];
    for (v, a) in arcs.iter().enumerate() {
        let oi = 2 * a.over_in + 1;
        let oo = 2 * a.over_out;
        let ui = 2 * a.under_in + 1;
        let uo = 2 * a.under_out;
        let pairs = match state[v] {
            Smoothing::Vertex => [(oi, oo), (ui, uo)],
            Smoothing::Oriented => [(oi, uo), (ui, oo)],
            Smoothing::Disoriented => [(oi, ui), (oo, uo)],
        };
        for (p, q) in pairs {
            partner[p] = q;
            partner[q] = p;
        }
        for e in [oi, oo, ui, uo] {
            owner[e] = v;
        }
    }
    let mut visited = vec![false; nar];
    let mut circles = Vec::new();
    let mut free = 0;
    for start in 0..nar {
        if visited[start] {
            continue;
        }
        if partner[2 * start] == NONE {
            visited[start] = true;
            free += 1;
            continue;
        }
        let mut seq = Vec::new();
        let start_end = 2 * start;
        let mut cur = start_end;
        loop {
            visited[cur / 2] = true;
            let far = cur ^ 1;
            let v = owner[far];
            if state[v] == Smoothing::Vertex {
                seq.push(v as u32);
            }
            cur = partner[far];
            if cur == start_end {
                break;
            }
        }
        if seq.is_empty() {
            free += 1;
        } else {
            circles.push(seq);
        }
    }
    FreeGraph {
        circles,
        free_circles: free,
    }
}

/// Formal combination of canonical graph codes; no zero coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GraphPolynomial<S: Scalar> {
    terms: BTreeMap<String, S>,
}

impl<S: Scalar> Default for GraphPolynomial<S> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<S: Scalar> GraphPolynomial<S> {
    pub fn zero() -> Self {
        GraphPolynomial {
            terms: BTreeMap::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<String, S> {
        &self.terms
    }

    pub fn coefficient(&self, code: &str) -> S {
        self.terms.get(code).cloned().unwrap_or_else(S::zero)
    }

    pub fn add_term(&mut self, code: &str, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(code) {
            Some(v) => {
                let s = v.clone() + c;
                if s.is_zero() {
                    self.terms.remove(code);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(code.to_string(), c);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_term(k, v.clone());
        }
        out
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::zero();
        for (k, v) in &self.terms {
            out.add_term(k, v.clone() * c.clone());
        }
        out
    }

    /// Adds `c` times a graph, reduced and with free circles evaluated.
    pub fn add_graph(&mut self, c: S, g: &FreeGraph, delta: &S) {
        let r = g.r2_reduce();
        if r.num_chords() > 0 {
            let c = c * pow_u64(delta, r.free_circles() as u64);
            self.add_term(&r.canonical_code(), c);
        } else {
            let k = r.free_circles().max(1) - 1;
            let c = c * pow_u64(delta, k as u64);
            self.add_term(CIRCLE, c);
        }
    }

    /// Value after replacing `(o)` by `delta`, when no other graph occurs.
    pub fn circle_value(&self, delta: &S) -> Option<S> {
        if self.terms.keys().any(|k| k != CIRCLE) {
            return None;
        }
        Some(self.coefficient(CIRCLE) * delta.clone())
    }

    /// Reads the printed form `c1*code1 + c2*code2`. Codes are
    /// re-canonicalized; compound coefficients are parenthesized.
    pub fn parse(text: &str) -> Result<Self, GraphError> {
        let t = text.trim();
        let mut out = Self::zero();
        if t == "0" {
            return Ok(out);
        }
        for term in split_top_level(t) {
            let term = term.trim();
            let err = || GraphError::Term(term.to_string());
            let cut = term
                .match_indices("*(")
                .map(|(i, _)| i)
                .filter(|&i| !term[i + 1..].contains('*'))
                .last()
                .ok_or_else(err)?;
            let coef_txt = term[..cut].trim();
            let coef_txt = coef_txt
                .strip_prefix('(')
                .and_then(|s| s.strip_suffix(')'))
                .unwrap_or(coef_txt);
            let coef = S::parse_elem(coef_txt)?;
            let g = FreeGraph::parse_code(&term[cut + 1..])?;
            let code = if g.num_chords() == 0 {
                CIRCLE.to_string()
            } else {
                g.canonical_code()
            };
            out.add_term(&code, coef);
        }
        Ok(out)
    }
}

fn split_top_level(t: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in t.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            '+' if depth == 0 => {
                out.push(&t[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&t[start..]);
    out
}

fn show_coefficient<S: Scalar>(c: &S) -> String {
    let s = c.to_string();
    if s.contains(" + ") {
        format!("({s})")
    } else {
        s
    }
}

impl<S: Scalar> fmt::Display for GraphPolynomial<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, v)| format!("{}*{k}", show_coefficient(v)))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Collects `(coefficient, graph)` terms into a reduced polynomial.
pub fn normalize<S: Scalar>(terms: &[(S, FreeGraph)], delta: &S) -> GraphPolynomial<S> {
    let mut out = GraphPolynomial::zero();
    for (c, g) in terms {
        out.add_graph(c.clone(), g, delta);
    }
    out
}
