//! Oriented virtual link diagrams stored as signed Gauss data.
//!
//! A diagram is a list of circles. Each circle is a cyclic sequence of
//! passages `(crossing, role)`; every crossing is passed once over and once
//! under and carries a sign. Semiarc `j` of a circle runs from passage `j` to
//! passage `j + 1`; a circle without passages is a single semiarc.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    Over,
    Under,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Pos => 1,
            Sign::Neg => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }

    pub fn from_value(v: i64) -> Sign {
        if v >= 0 {
            Sign::Pos
        } else {
            Sign::Neg
        }
    }

    fn symbol(self) -> char {
        match self {
            Sign::Pos => '+',
            Sign::Neg => '-',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Passage {
    /// Index into [`LinkDiagram::crossings`].
    pub crossing: usize,
    pub role: Role,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Crossing {
    pub label: String,
    pub sign: Sign,
}

/// Location of a passage: circle index and position on that circle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pos {
    pub component: usize,
    pub index: usize,
}

/// The four semiarcs meeting at a crossing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CrossingArcs {
    pub over_in: usize,
    pub over_out: usize,
    pub under_in: usize,
    pub under_out: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GaussError {
    #[error("line {line}: malformed token `{token}`")]
    Syntax { line: usize, token: String },
    #[error("label {label} appears {count} times (expected 2)")]
    LabelCount { label: String, count: usize },
    #[error("label {label} has two {role} passages")]
    DuplicateRole { label: String, role: &'static str },
    #[error("inconsistent signs for label {label}")]
    InconsistentSign { label: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoveError {
    #[error("move not applicable: {0}")]
    NotApplicable(String),
    #[error("unknown crossing label {0}")]
    UnknownLabel(String),
}

/// Oriented virtual link diagram.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinkDiagram {
    components: Vec<Vec<Passage>>,
    crossings: Vec<Crossing>,
}

/// Natural ordering of labels: numeric labels by value, then identifiers.
pub fn label_cmp(a: &str, b: &str) -> Ordering {
    let num = |s: &str| !s.is_empty() && s.bytes().all(|c| c.is_ascii_digit());
    match (num(a), num(b)) {
        (true, true) => a.len().cmp(&b.len()).then_with(|| a.cmp(b)),
        (true, false) => Ordering::Less,
        (false, true) => Ordering::Greater,
        (false, false) => a.cmp(b),
    }
}

fn valid_label(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if ('1'..='9').contains(&c) => chars.all(|c| c.is_ascii_digit()),
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {
            chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        }
        _ => false,
    }
}

type RawComponent = Vec<(String, Role)>;

impl LinkDiagram {
    /// The unknot: one circle with no crossings.
    pub fn unknot() -> Self {
        LinkDiagram {
            components: vec![Vec::new()],
            crossings: Vec::new(),
        }
    }

    /// `k` disjoint bare circles.
    pub fn unlink(k: usize) -> Self {
        LinkDiagram {
            components: vec![Vec::new(); k.max(1)],
            crossings: Vec::new(),
        }
    }

    /// Builds a diagram from labelled passages and a sign table, validating
    /// that each label is passed exactly once over and once under.
    pub fn from_parts(
        components: Vec<RawComponent>,
        signs: &BTreeMap<String, Sign>,
    ) -> Result<Self, GaussError> {
        let mut index: BTreeMap<String, usize> = BTreeMap::new();
        let mut crossings = Vec::new();
        let mut seen: Vec<[bool; 2]> = Vec::new();
        let mut out = Vec::with_capacity(components.len());
        for comp in components {
            let mut passages = Vec::with_capacity(comp.len());
            for (label, role) in comp {
                let id = match index.get(&label) {
                    Some(&id) => id,
                    None => {
                        let sign = *signs.get(&label).ok_or_else(|| GaussError::LabelCount {
                            label: label.clone(),
                            count: 0,
                        })?;
                        crossings.push(Crossing {
                            label: label.clone(),
                            sign,
                        });
                        seen.push([false; 2]);
                        index.insert(label.clone(), crossings.len() - 1);
                        crossings.len() - 1
                    }
                };
                let slot = match role {
                    Role::Over => 0,
                    Role::Under => 1,
                };
                if seen[id][slot] {
                    return Err(GaussError::DuplicateRole {
                        label,
                        role: if slot == 0 { "over" } else { "under" },
                    });
                }
                seen[id][slot] = true;
                passages.push(Passage { crossing: id, role });
            }
            out.push(passages);
        }
        for (id, s) in seen.iter().enumerate() {
            if !(s[0] && s[1]) {
                return Err(GaussError::LabelCount {
                    label: crossings[id].label.clone(),
                    count: 1,
                });
            }
        }
        if out.is_empty() {
            out.push(Vec::new());
        }
        Ok(LinkDiagram {
            components: out,
            crossings,
        })
    }

    pub fn parse(text: &str) -> Result<Self, GaussError> {
        let mut comps: Vec<Vec<(String, Role, Sign, usize)>> = vec![Vec::new()];
        for (lineno, raw_line) in text.lines().enumerate() {
            let line = raw_line.split('#').next().unwrap_or("");
            let mut rest = line;
            loop {
                let (chunk, more) = match rest.find('/') {
                    Some(p) => (&rest[..p], Some(&rest[p + 1..])),
                    None => (rest, None),
                };
                for tok in chunk.split_whitespace() {
                    let err = || GaussError::Syntax {
                        line: lineno + 1,
                        token: tok.to_string(),
                    };
                    let role = match tok.chars().next() {
                        Some('O') => Role::Over,
                        Some('U') => Role::Under,
                        _ => return Err(err()),
                    };
                    let sign = match tok.chars().last() {
                        Some('+') => Sign::Pos,
                        Some('-') => Sign::Neg,
                        _ => return Err(err()),
                    };
                    if tok.len() < 3 {
                        return Err(err());
                    }
                    let label = &tok[1..tok.len() - 1];
                    if !valid_label(label) {
                        return Err(err());
                    }
                    comps.last_mut().expect("at least one component").push((
                        label.to_string(),
                        role,
                        sign,
                        lineno + 1,
                    ));
                }
                match more {
                    Some(m) => {
                        comps.push(Vec::new());
                        rest = m;
                    }
                    None => break,
                }
            }
        }
        let mut counts: BTreeMap<String, usize> = BTreeMap::new();
        let mut signs: BTreeMap<String, Sign> = BTreeMap::new();
        for (label, _, sign, _) in comps.iter().flatten() {
            *counts.entry(label.clone()).or_default() += 1;
            if let Some(prev) = signs.insert(label.clone(), *sign) {
                if prev != *sign {
                    return Err(GaussError::InconsistentSign {
                        label: label.clone(),
                    });
                }
            }
        }
        if let Some((label, count)) = counts.iter().find(|(_, c)| **c != 2) {
            return Err(GaussError::LabelCount {
                label: label.clone(),
                count: *count,
            });
        }
        let raw = comps
            .into_iter()
            .map(|c| c.into_iter().map(|(l, r, _, _)| (l, r)).collect())
            .collect();
        Self::from_parts(raw, &signs)
    }

    pub fn components(&self) -> &[Vec<Passage>] {
        &self.components
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn num_crossings(&self) -> usize {
        self.crossings.len()
    }

    pub fn num_components(&self) -> usize {
        self.components.len()
    }

    pub fn label(&self, crossing: usize) -> &str {
        &self.crossings[crossing].label
    }

    pub fn sign(&self, crossing: usize) -> Sign {
        self.crossings[crossing].sign
    }

    pub fn crossing_index(&self, label: &str) -> Option<usize> {
        self.crossings.iter().position(|c| c.label == label)
    }

    /// Crossing indices ordered by label.
    pub fn sorted_crossings(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.crossings.len()).collect();
        idx.sort_by(|a, b| label_cmp(&self.crossings[*a].label, &self.crossings[*b].label));
        idx
    }

    /// `[over, under]` positions of every crossing.
    pub fn positions(&self) -> Vec<[Pos; 2]> {
        let dummy = Pos {
            component: 0,
            index: 0,
        };
        let mut out = vec![[dummy; 2]; self.crossings.len()];
        for (c, comp) in self.components.iter().enumerate() {
            for (i, p) in comp.iter().enumerate() {
                let slot = match p.role {
                    Role::Over => 0,
                    Role::Under => 1,
                };
                out[p.crossing][slot] = Pos {
                    component: c,
                    index: i,
                };
            }
        }
        out
    }

    /// First semiarc id of each component; a bare circle owns one semiarc.
    pub fn arc_offsets(&self) -> Vec<usize> {
        let mut off = Vec::with_capacity(self.components.len());
        let mut acc = 0;
        for comp in &self.components {
            off.push(acc);
            acc += comp.len().max(1);
        }
        off
    }

    pub fn num_semiarcs(&self) -> usize {
        self.components.iter().map(|c| c.len().max(1)).sum()
    }

    /// Component owning each semiarc.
    pub fn arc_components(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (c, comp) in self.components.iter().enumerate() {
            out.extend(std::iter::repeat(c).take(comp.len().max(1)));
        }
        out
    }

    pub fn crossing_arcs(&self) -> Vec<CrossingArcs> {
        let off = self.arc_offsets();
        let mut out = vec![
            CrossingArcs {
                over_in: 0,
                over_out: 0,
                under_in: 0,
                under_out: 0,
            };
            self.crossings.len()
        ];
        for (c, comp) in self.components.iter().enumerate() {
            let n = comp.len();
            for (i, p) in comp.iter().enumerate() {
                let inc = off[c] + (i + n - 1) % n;
                let outg = off[c] + i;
                let e = &mut out[p.crossing];
                match p.role {
                    Role::Over => {
                        e.over_in = inc;
                        e.over_out = outg;
                    }
                    Role::Under => {
                        e.under_in = inc;
                        e.under_out = outg;
                    }
                }
            }
        }
        out
    }

    fn raw(&self) -> (Vec<RawComponent>, BTreeMap<String, Sign>) {
        let comps = self
            .components
            .iter()
            .map(|c| {
                c.iter()
                    .map(|p| (self.crossings[p.crossing].label.clone(), p.role))
                    .collect()
            })
            .collect();
        let signs = self
            .crossings
            .iter()
            .map(|c| (c.label.clone(), c.sign))
            .collect();
        (comps, signs)
    }

    fn fresh_label(&self, offset: u64) -> String {
        let max = self
            .crossings
            .iter()
            .filter_map(|c| c.label.parse::<u64>().ok())
            .max()
            .unwrap_or(0);
        (max + 1 + offset).to_string()
    }

    /// Same diagram with every crossing relabelled `1..n` in order of first
    /// appearance.
    pub fn relabeled(&self) -> Self {
        let mut d = self.clone();
        let mut order: Vec<usize> = Vec::new();
        for comp in &self.components {
            for p in comp {
                if !order.contains(&p.crossing) {
                    order.push(p.crossing);
                }
            }
        }
        for (k, id) in order.iter().enumerate() {
            d.crossings[*id].label = (k + 1).to_string();
        }
        d
    }

    /// Same passages with the crossing signs replaced, in crossing-index order.
    pub fn with_signs(&self, signs: &[Sign]) -> Self {
        let mut d = self.clone();
        for (c, s) in d.crossings.iter_mut().zip(signs) {
            c.sign = *s;
        }
        d
    }
}

impl fmt::Display for LinkDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let comps: Vec<String> = self
            .components
            .iter()
            .map(|comp| {
                comp.iter()
                    .map(|p| {
                        let c = &self.crossings[p.crossing];
                        let r = match p.role {
                            Role::Over => 'O',
                            Role::Under => 'U',
                        };
                        format!("{r}{}{}", c.label, c.sign.symbol())
                    })
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect();
        write!(f, "{}", comps.join(" / ").trim())
    }
}

impl std::str::FromStr for LinkDiagram {
    type Err = GaussError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        LinkDiagram::parse(s)
    }
}

pub fn parse_gauss_code(text: &str) -> Result<LinkDiagram, GaussError> {
    LinkDiagram::parse(text)
}

pub fn writhe(d: &LinkDiagram) -> i64 {
    d.crossings.iter().map(|c| c.sign.value()).sum()
}

/// Symmetric 0/1 matrix of linked chords, indexed by crossing index.
///
/// A chord with both ends on one circle cuts it into two arcs, and another
/// chord is linked with it when each arc holds exactly one of its ends. Two
/// chords that each join the same pair of distinct circles are linked.
pub fn interlacement(d: &LinkDiagram) -> Vec<Vec<u8>> {
    let n = d.num_crossings();
    let pos = d.positions();
    let mut m = vec![vec![0u8; n]; n];
    for u in 0..n {
        for v in (u + 1)..n {
            let [pu, qu] = pos[u];
            let [pv, qv] = pos[v];
            let linked = if pu.component == qu.component {
                if pv.component == pu.component && qv.component == pu.component {
                    let (lo, hi) = (pu.index.min(qu.index), pu.index.max(qu.index));
                    let inside = |p: Pos| p.index > lo && p.index < hi;
                    inside(pv) != inside(qv)
                } else {
                    false
                }
            } else {
                let a = (
                    pu.component.min(qu.component),
                    pu.component.max(qu.component),
                );
                let b = (
                    pv.component.min(qv.component),
                    pv.component.max(qv.component),
                );
                a == b
            };
            if linked {
                m[u][v] = 1;
                m[v][u] = 1;
            }
        }
    }
    m
}

// ---------------------------------------------------------------------------
// Carrier surface

/// Half-edge at a crossing: a semiarc end.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct HalfEdge {
    arc: usize,
    head: bool,
}

/// A face boundary step: a semiarc traversed with (`forward`) or against its
/// orientation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dart {
    pub arc: usize,
    pub forward: bool,
}

struct Surface {
    faces: Vec<Vec<Dart>>,
    pieces: usize,
    vertices: usize,
    edges: usize,
}

fn union_find_root(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn surface(d: &LinkDiagram) -> Surface {
    let arcs = d.crossing_arcs();
    let nar = d.num_semiarcs();
    // Counterclockwise rotation of half-edges around each crossing.
    let mut rot: Vec<[HalfEdge; 4]> = Vec::with_capacity(arcs.len());
    let mut at = vec![[(usize::MAX, 0usize); 2]; nar];
    for (v, a) in arcs.iter().enumerate() {
        let oi = HalfEdge {
            arc: a.over_in,
            head: true,
        };
        let oo = HalfEdge {
            arc: a.over_out,
            head: false,
        };
        let ui = HalfEdge {
            arc: a.under_in,
            head: true,
        };
        let uo = HalfEdge {
            arc: a.under_out,
            head: false,
        };
        let r = match d.sign(v) {
            Sign::Pos => [oo, uo, oi, ui],
            Sign::Neg => [oo, ui, oi, uo],
        };
        for (k, h) in r.iter().enumerate() {
            at[h.arc][h.head as usize] = (v, k);
        }
        rot.push(r);
    }
    let mut used = vec![[false; 2]; nar];
    let mut faces = Vec::new();
    let mut parent: Vec<usize> = (0..arcs.len()).collect();
    let mut edges = 0;
    for arc in 0..nar {
        if at[arc][0].0 == usize::MAX {
            continue;
        }
        edges += 1;
        let (a, b) = (at[arc][0].0, at[arc][1].0);
        let (ra, rb) = (
            union_find_root(&mut parent, a),
            union_find_root(&mut parent, b),
        );
        parent[ra] = rb;
    }
    for arc in 0..nar {
        for start_head in [false, true] {
            if at[arc][0].0 == usize::MAX || used[arc][start_head as usize] {
                continue;
            }
            let mut face = Vec::new();
            let mut h = HalfEdge {
                arc,
                head: start_head,
            };
            while !used[h.arc][h.head as usize] {
                used[h.arc][h.head as usize] = true;
                face.push(Dart {
                    arc: h.arc,
                    forward: !h.head,
                });
                let other = HalfEdge {
                    arc: h.arc,
                    head: !h.head,
                };
                let (v, k) = at[other.arc][other.head as usize];
                h = rot[v][(k + 3) % 4];
            }
            faces.push(face);
        }
    }
    let mut roots: Vec<usize> = (0..arcs.len())
        .map(|v| union_find_root(&mut parent, v))
        .collect();
    roots.sort_unstable();
    roots.dedup();
    Surface {
        faces,
        pieces: roots.len(),
        vertices: arcs.len(),
        edges,
    }
}

/// Genus of the carrier surface, summed over the connected pieces of the
/// crossing graph. Bare circles contribute nothing.
pub fn carrier_genus(d: &LinkDiagram) -> usize {
    let s = surface(d);
    let chi = s.vertices as i64 - s.edges as i64 + s.faces.len() as i64;
    ((2 * s.pieces as i64 - chi) / 2) as usize
}

pub fn classical_realizability(d: &LinkDiagram) -> bool {
    carrier_genus(d) == 0
}

/// Face boundaries of the carrier surface, each face on the left of its darts.
pub fn faces(d: &LinkDiagram) -> Vec<Vec<Dart>> {
    surface(d).faces
}

// ---------------------------------------------------------------------------
// Reidemeister moves

/// Insertion point on a circle: a new passage is placed before position
/// `index` (`index == len` appends).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gap {
    pub component: usize,
    pub index: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum MoveDescriptor {
    /// Inserts a kink: two passages of one new crossing, over first or under
    /// first.
    R1Insert {
        gap: Gap,
        sign: Sign,
        over_first: bool,
    },
    R1Delete {
        label: String,
    },
    /// Inserts crossings `a`, `b` with signs `sign`, `-sign`. The over passages
    /// `Oa Ob` go into `over_gap`; the under passages `Ua Ub` (parallel) or
    /// `Ub Ua` go into `under_gap`. When both gaps coincide, `overs_first`
    /// selects which pair comes first.
    R2Insert {
        over_gap: Gap,
        under_gap: Gap,
        sign: Sign,
        parallel: bool,
        overs_first: bool,
    },
    R2Delete {
        first: String,
        second: String,
    },
    /// Third move on the triangle with `a` = top×middle, `b` = top×bottom,
    /// `c` = middle×bottom.
    R3 {
        a: String,
        b: String,
        c: String,
    },
}

impl fmt::Display for MoveDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = |s: &Sign| s.symbol();
        match self {
            MoveDescriptor::R1Insert {
                gap,
                sign,
                over_first,
            } => write!(
                f,
                "R1-insert c{} g{} sign{} {}",
                gap.component,
                gap.index,
                s(sign),
                if *over_first { "OU" } else { "UO" }
            ),
            MoveDescriptor::R1Delete { label } => write!(f, "R1-delete {label}"),
            MoveDescriptor::R2Insert {
                over_gap,
                under_gap,
                sign,
                parallel,
                overs_first,
            } => write!(
                f,
                "R2-insert over c{} g{} under c{} g{} sign{} {}{}",
                over_gap.component,
                over_gap.index,
                under_gap.component,
                under_gap.index,
                s(sign),
                if *parallel {
                    "parallel"
                } else {
                    "antiparallel"
                },
                if over_gap == under_gap {
                    if *overs_first {
                        " overs-first"
                    } else {
                        " unders-first"
                    }
                } else {
                    ""
                }
            ),
            MoveDescriptor::R2Delete { first, second } => write!(f, "R2-delete {first} {second}"),
            MoveDescriptor::R3 { a, b, c } => write!(f, "R3 {a} {b} {c}"),
        }
    }
}

impl MoveDescriptor {
    /// Change in crossing count caused by the move.
    pub fn crossing_delta(&self) -> i64 {
        match self {
            MoveDescriptor::R1Insert { .. } => 1,
            MoveDescriptor::R1Delete { .. } => -1,
            MoveDescriptor::R2Insert { .. } => 2,
            MoveDescriptor::R2Delete { .. } => -2,
            MoveDescriptor::R3 { .. } => 0,
        }
    }
}

fn lookup(d: &LinkDiagram, label: &str) -> Result<usize, MoveError> {
    d.crossing_index(label)
        .ok_or_else(|| MoveError::UnknownLabel(label.to_string()))
}

/// `q` is the cyclic successor of `p` on a circle of length > 2.
fn follows(d: &LinkDiagram, p: Pos, q: Pos) -> bool {
    let n = d.components[p.component].len();
    p.component == q.component && n > 2 && (p.index + 1) % n == q.index
}

/// `p` and `q` are cyclic neighbours on a circle of length ≥ 2.
fn neighbours(d: &LinkDiagram, p: Pos, q: Pos) -> bool {
    let n = d.components[p.component].len();
    p.component == q.component
        && p.index != q.index
        && ((p.index + 1) % n == q.index || (q.index + 1) % n == p.index)
}

fn check_gap(d: &LinkDiagram, g: Gap) -> Result<(), MoveError> {
    match d.components.get(g.component) {
        Some(c) if g.index <= c.len() => Ok(()),
        _ => Err(MoveError::NotApplicable(format!(
            "gap c{} g{} out of range",
            g.component, g.index
        ))),
    }
}

fn r1_deletable(d: &LinkDiagram, x: usize) -> bool {
    let [o, u] = d.positions()[x];
    neighbours(d, o, u)
}

fn r2_deletable(d: &LinkDiagram, a: usize, b: usize) -> bool {
    if a == b || d.sign(a) == d.sign(b) {
        return false;
    }
    let pos = d.positions();
    neighbours(d, pos[a][0], pos[b][0]) && neighbours(d, pos[a][1], pos[b][1])
}

/// Adjacent pairs of an R3 triangle: top `(Oa,Ob)`, middle `(Ua,Oc)`,
/// bottom `(Ub,Uc)`.
fn r3_pairs(pos: &[[Pos; 2]], a: usize, b: usize, c: usize) -> [(Pos, Pos); 3] {
    [
        (pos[a][0], pos[b][0]),
        (pos[a][1], pos[c][0]),
        (pos[b][1], pos[c][1]),
    ]
}

fn r3_applicable(d: &LinkDiagram, a: usize, b: usize, c: usize) -> bool {
    if a == b || b == c || a == c {
        return false;
    }
    let pos = d.positions();
    let mut ord = [0i64; 3];
    for (k, (p, q)) in r3_pairs(&pos, a, b, c).iter().enumerate() {
        ord[k] = if follows(d, *p, *q) {
            1
        } else if follows(d, *q, *p) {
            -1
        } else {
            return false;
        };
    }
    let [ot, om, ob] = ord;
    let (sa, sb, sc) = (d.sign(a).value(), d.sign(b).value(), d.sign(c).value());
    sa * sb == om * ob && sa * sc == ot * ob && sb * sc == ot * om
}

fn insert_at(comp: &mut RawComponent, index: usize, items: Vec<(String, Role)>) {
    let idx = index.min(comp.len());
    comp.splice(idx..idx, items);
}

pub fn apply_move(d: &LinkDiagram, m: &MoveDescriptor) -> Result<LinkDiagram, MoveError> {
    let rebuild = |comps: Vec<RawComponent>, signs: BTreeMap<String, Sign>| {
        LinkDiagram::from_parts(comps, &signs).expect("moves preserve validity")
    };
    match m {
        MoveDescriptor::R1Insert {
            gap,
            sign,
            over_first,
        } => {
            check_gap(d, *gap)?;
            let (mut comps, mut signs) = d.raw();
            let l = d.fresh_label(0);
            let items = if *over_first {
                vec![(l.clone(), Role::Over), (l.clone(), Role::Under)]
            } else {
                vec![(l.clone(), Role::Under), (l.clone(), Role::Over)]
            };
            insert_at(&mut comps[gap.component], gap.index, items);
            signs.insert(l, *sign);
            Ok(rebuild(comps, signs))
        }
        MoveDescriptor::R1Delete { label } => {
            let x = lookup(d, label)?;
            if !r1_deletable(d, x) {
                return Err(MoveError::NotApplicable(format!("{label} is not a kink")));
            }
            Ok(delete_labels(d, &[label.as_str()]))
        }
        MoveDescriptor::R2Insert {
            over_gap,
            under_gap,
            sign,
            parallel,
            overs_first,
        } => {
            check_gap(d, *over_gap)?;
            check_gap(d, *under_gap)?;
            let (mut comps, mut signs) = d.raw();
            let a = d.fresh_label(0);
            let b = d.fresh_label(1);
            let overs = vec![(a.clone(), Role::Over), (b.clone(), Role::Over)];
            let unders = if *parallel {
                vec![(a.clone(), Role::Under), (b.clone(), Role::Under)]
            } else {
                vec![(b.clone(), Role::Under), (a.clone(), Role::Under)]
            };
            if over_gap == under_gap {
                let items = if *overs_first {
                    overs.into_iter().chain(unders).collect()
                } else {
                    unders.into_iter().chain(overs).collect()
                };
                insert_at(&mut comps[over_gap.component], over_gap.index, items);
            } else if over_gap.component == under_gap.component && under_gap.index > over_gap.index
            {
                insert_at(&mut comps[under_gap.component], under_gap.index, unders);
                insert_at(&mut comps[over_gap.component], over_gap.index, overs);
            } else {
                insert_at(&mut comps[over_gap.component], over_gap.index, overs);
                insert_at(&mut comps[under_gap.component], under_gap.index, unders);
            }
            signs.insert(a, *sign);
            signs.insert(b, sign.flip());
            Ok(rebuild(comps, signs))
        }
        MoveDescriptor::R2Delete { first, second } => {
            let (a, b) = (lookup(d, first)?, lookup(d, second)?);
            if !r2_deletable(d, a, b) {
                return Err(MoveError::NotApplicable(format!(
                    "{first},{second} do not form a bigon"
                )));
            }
            Ok(delete_labels(d, &[first.as_str(), second.as_str()]))
        }
        MoveDescriptor::R3 { a, b, c } => {
            let (x, y, z) = (lookup(d, a)?, lookup(d, b)?, lookup(d, c)?);
            if !r3_applicable(d, x, y, z) {
                return Err(MoveError::NotApplicable(format!(
                    "{a},{b},{c} do not form an R3 triangle"
                )));
            }
            let pos = d.positions();
            let mut out = d.clone();
            for (p, q) in r3_pairs(&pos, x, y, z) {
                let t = out.components[p.component][p.index];
                out.components[p.component][p.index] = out.components[q.component][q.index];
                out.components[q.component][q.index] = t;
            }
            Ok(out)
        }
    }
}

fn delete_labels(d: &LinkDiagram, labels: &[&str]) -> LinkDiagram {
    let (comps, mut signs) = d.raw();
    let comps = comps
        .into_iter()
        .map(|c| {
            c.into_iter()
                .filter(|(l, _)| !labels.contains(&l.as_str()))
                .collect()
        })
        .collect();
    for l in labels {
        signs.remove(*l);
    }
    LinkDiagram::from_parts(comps, &signs).expect("deletion preserves validity")
}

pub fn gaps(d: &LinkDiagram) -> Vec<Gap> {
    d.components
        .iter()
        .enumerate()
        .flat_map(|(c, comp)| {
            (0..comp.len().max(1)).map(move |i| Gap {
                component: c,
                index: i,
            })
        })
        .collect()
}

/// Applicable moves grouped by kind.
#[derive(Debug, Clone, Default)]
pub struct MoveCatalog {
    pub r1_insert: Vec<MoveDescriptor>,
    pub r1_delete: Vec<MoveDescriptor>,
    pub r2_insert: Vec<MoveDescriptor>,
    pub r2_delete: Vec<MoveDescriptor>,
    pub r3: Vec<MoveDescriptor>,
}

impl MoveCatalog {
    pub fn all(&self) -> impl Iterator<Item = &MoveDescriptor> {
        self.r1_insert
            .iter()
            .chain(&self.r1_delete)
            .chain(&self.r2_insert)
            .chain(&self.r2_delete)
            .chain(&self.r3)
    }
}

pub fn r1_insertions(d: &LinkDiagram) -> Vec<MoveDescriptor> {
    let mut out = Vec::new();
    for gap in gaps(d) {
        for sign in [Sign::Pos, Sign::Neg] {
            for over_first in [true, false] {
                out.push(MoveDescriptor::R1Insert {
                    gap,
                    sign,
                    over_first,
                });
            }
        }
    }
    out
}

pub fn r2_insertions(d: &LinkDiagram) -> Vec<MoveDescriptor> {
    let g = gaps(d);
    let mut out = Vec::new();
    for &over_gap in &g {
        for &under_gap in &g {
            for sign in [Sign::Pos, Sign::Neg] {
                for parallel in [true, false] {
                    let firsts: &[bool] = if over_gap == under_gap {
                        &[true, false]
                    } else {
                        &[true]
                    };
                    for &overs_first in firsts {
                        out.push(MoveDescriptor::R2Insert {
                            over_gap,
                            under_gap,
                            sign,
                            parallel,
                            overs_first,
                        });
                    }
                }
            }
        }
    }
    out
}

pub fn r1_deletions(d: &LinkDiagram) -> Vec<MoveDescriptor> {
    d.sorted_crossings()
        .into_iter()
        .filter(|&x| r1_deletable(d, x))
        .map(|x| MoveDescriptor::R1Delete {
            label: d.label(x).to_string(),
        })
        .collect()
}

pub fn r2_deletions(d: &LinkDiagram) -> Vec<MoveDescriptor> {
    let idx = d.sorted_crossings();
    let mut out = Vec::new();
    for (i, &a) in idx.iter().enumerate() {
        for &b in &idx[i + 1..] {
            if r2_deletable(d, a, b) {
                out.push(MoveDescriptor::R2Delete {
                    first: d.label(a).to_string(),
                    second: d.label(b).to_string(),
                });
            }
        }
    }
    out
}

pub fn r3_moves(d: &LinkDiagram) -> Vec<MoveDescriptor> {
    let idx = d.sorted_crossings();
    let mut out = Vec::new();
    for &a in &idx {
        for &b in &idx {
            for &c in &idx {
                if r3_applicable(d, a, b, c) {
                    out.push(MoveDescriptor::R3 {
                        a: d.label(a).to_string(),
                        b: d.label(b).to_string(),
                        c: d.label(c).to_string(),
                    });
                }
            }
        }
    }
    out
}

pub fn applicable_moves(d: &LinkDiagram) -> MoveCatalog {
    MoveCatalog {
        r1_insert: r1_insertions(d),
        r1_delete: r1_deletions(d),
        r2_insert: r2_insertions(d),
        r2_delete: r2_deletions(d),
        r3: r3_moves(d),
    }
}

/// R2 insertions that push one boundary semiarc of a face across another
/// boundary semiarc of the same face. On a realizable diagram these are the
/// planar second moves.
pub fn face_r2_insertions(d: &LinkDiagram) -> Vec<MoveDescriptor> {
    let comps = d.arc_components();
    let off = d.arc_offsets();
    let gap_after = |arc: usize| {
        let c = comps[arc];
        Gap {
            component: c,
            index: arc - off[c] + 1,
        }
    };
    let mut out = Vec::new();
    for face in faces(d) {
        for (i, f) in face.iter().enumerate() {
            for (j, t) in face.iter().enumerate() {
                if i == j || f.arc == t.arc {
                    continue;
                }
                let ef: i64 = if f.forward { 1 } else { -1 };
                let et: i64 = if t.forward { 1 } else { -1 };
                let parallel = ef != et;
                // Finger from f over t: first crossing along f has sign et.
                out.push(MoveDescriptor::R2Insert {
                    over_gap: gap_after(f.arc),
                    under_gap: gap_after(t.arc),
                    sign: Sign::from_value(et),
                    parallel,
                    overs_first: true,
                });
                // Finger from f under t.
                let sign = if parallel { -et } else { et };
                out.push(MoveDescriptor::R2Insert {
                    over_gap: gap_after(t.arc),
                    under_gap: gap_after(f.arc),
                    sign: Sign::from_value(sign),
                    parallel,
                    overs_first: true,
                });
            }
        }
    }
    out.sort_by_key(|m| m.to_string());
    out.dedup();
    out
}

/// Move kinds offered by [`random_walk`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MoveKind {
    R1Insert,
    R1Delete,
    R2Insert,
    R2Delete,
    R3,
}

/// Options for [`random_walk`].
#[derive(Debug, Clone)]
pub struct WalkOptions {
    pub steps: usize,
    pub seed: u64,
    /// Moves that would exceed this crossing count are not offered.
    pub max_crossings: Option<usize>,
    /// Restrict second-move insertions to [`face_r2_insertions`].
    pub planar_r2: bool,
}

impl WalkOptions {
    pub fn new(steps: usize, seed: u64) -> Self {
        WalkOptions {
            steps,
            seed,
            max_crossings: None,
            planar_r2: false,
        }
    }
}

/// Applies `steps` random moves. Each step picks a move kind uniformly among
/// the kinds with an applicable move, then a descriptor uniformly within the
/// kind. Returns the final diagram and the moves applied.
pub fn random_walk(d: &LinkDiagram, opts: &WalkOptions) -> (LinkDiagram, Vec<MoveDescriptor>) {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut cur = d.clone();
    let mut log = Vec::new();
    for _ in 0..opts.steps {
        let n = cur.num_crossings();
        let room = |k: usize| opts.max_crossings.map_or(true, |m| n + k <= m);
        let mut kinds = Vec::new();
        if room(1) {
            kinds.push(MoveKind::R1Insert);
        }
        let r1d = r1_deletions(&cur);
        if !r1d.is_empty() {
            kinds.push(MoveKind::R1Delete);
        }
        let r2i = if room(2) {
            if opts.planar_r2 {
                face_r2_insertions(&cur)
            } else {
                r2_insertions(&cur)
            }
        } else {
            Vec::new()
        };
        if !r2i.is_empty() {
            kinds.push(MoveKind::R2Insert);
        }
        let r2d = r2_deletions(&cur);
        if !r2d.is_empty() {
            kinds.push(MoveKind::R2Delete);
        }
        let r3 = r3_moves(&cur);
        if !r3.is_empty() {
            kinds.push(MoveKind::R3);
        }
        let Some(kind) = kinds.choose(&mut rng) else {
            continue;
        };
        let m = match kind {
            MoveKind::R1Insert => {
                let g = gaps(&cur);
                MoveDescriptor::R1Insert {
                    gap: g[rng.gen_range(0..g.len())],
                    sign: if rng.gen() { Sign::Pos } else { Sign::Neg },
                    over_first: rng.gen(),
                }
            }
            MoveKind::R1Delete => r1d.choose(&mut rng).cloned().expect("nonempty"),
            MoveKind::R2Insert => r2i.choose(&mut rng).cloned().expect("nonempty"),
            MoveKind::R2Delete => r2d.choose(&mut rng).cloned().expect("nonempty"),
            MoveKind::R3 => r3.choose(&mut rng).cloned().expect("nonempty"),
        };
        cur = apply_move(&cur, &m).expect("catalogued moves apply");
        log.push(m);
    }
    (cur, log)
}

pub fn random_equivalent_diagram(d: &LinkDiagram, steps: usize, seed: u64) -> LinkDiagram {
    random_walk(d, &WalkOptions::new(steps, seed)).0
}

/// Random knot diagram with `n` crossings: a shuffled Gauss word with random
/// roles and signs. Usually virtual.
pub fn random_virtual_knot<R: Rng>(rng: &mut R, n: usize) -> LinkDiagram {
    let mut word: Vec<(String, Role)> = Vec::with_capacity(2 * n);
    let mut signs = BTreeMap::new();
    for k in 1..=n {
        let l = k.to_string();
        word.push((l.clone(), Role::Over));
        word.push((l.clone(), Role::Under));
        signs.insert(l, if rng.gen() { Sign::Pos } else { Sign::Neg });
    }
    word.shuffle(rng);
    LinkDiagram::from_parts(vec![word], &signs).expect("well-formed word")
}

/// Random link diagram with `components` circles and `n` crossings.
pub fn random_virtual_link<R: Rng>(rng: &mut R, components: usize, n: usize) -> LinkDiagram {
    let k = components.max(1);
    let mut comps: Vec<RawComponent> = vec![Vec::new(); k];
    let mut signs = BTreeMap::new();
    for x in 1..=n {
        let l = x.to_string();
        for role in [Role::Over, Role::Under] {
            let c = rng.gen_range(0..k);
            let at = rng.gen_range(0..=comps[c].len());
            comps[c].insert(at, (l.clone(), role));
        }
        signs.insert(l, if rng.gen() { Sign::Pos } else { Sign::Neg });
    }
    LinkDiagram::from_parts(comps, &signs).expect("well-formed link")
}
