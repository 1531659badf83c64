//! Finite biquandles and colorings of diagrams by them.
//!
//! Tables are indexed `circ[x][y] = x∘y` and `star[x][y] = x∗y`. At a crossing
//! the map `S(x, y) = (y∗x, x∘y)` sends the two input colors to the output
//! pair `(under side, over side)`:
//!
//! * positive crossing: `x` = over-in, `y` = under-out; then under-in = `y∗x`
//!   and over-out = `x∘y`;
//! * negative crossing: `x` = over-out, `y` = under-in; then under-out = `y∗x`
//!   and over-in = `x∘y`.

use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::gauss::{CrossingArcs, LinkDiagram, Sign};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BiquandleError {
    #[error("table {table} is not {n}x{n}")]
    Ragged { table: &'static str, n: usize },
    #[error("table {table} entry ({x},{y}) = {value} out of range")]
    OutOfRange {
        table: &'static str,
        x: usize,
        y: usize,
        value: usize,
    },
    #[error("line {line}: {msg}")]
    Format { line: usize, msg: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axiom {
    R1,
    R2Circ,
    R2Star,
    R3,
    R4First,
    R4Second,
    R4Third,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axiom::R1 => "R1 x∘x = x∗x",
            Axiom::R2Circ => "R2 x ↦ x∘y bijective",
            Axiom::R2Star => "R2 x ↦ x∗y bijective",
            Axiom::R3 => "R3 S bijective",
            Axiom::R4First => "R4 (x∘z)∘(y∘z) = (x∘y)∘(z∗y)",
            Axiom::R4Second => "R4 (y∘z)∗(x∘z) = (y∗x)∘(z∗x)",
            Axiom::R4Third => "R4 (z∗x)∗(y∗x) = (z∗y)∗(x∘y)",
        };
        write!(f, "{s}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub axiom: Axiom,
    pub witness: Vec<usize>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w: Vec<String> = self.witness.iter().map(|v| v.to_string()).collect();
        write!(f, "{}: witness ({})", self.axiom, w.join(","))
    }
}

/// A finite set `{0..n}` with two binary operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Biquandle {
    n: usize,
    circ: Vec<Vec<usize>>,
    star: Vec<Vec<usize>>,
    circ_inv: Option<Vec<Vec<usize>>>,
    star_inv: Option<Vec<Vec<usize>>>,
    s_inv: Option<Vec<Vec<(usize, usize)>>>,
}

fn column_inverse(t: &[Vec<usize>]) -> Option<Vec<Vec<usize>>> {
    let n = t.len();
    let mut inv = vec![vec![usize::MAX; n]; n];
    for y in 0..n {
        for x in 0..n {
            let z = t[x][y];
            if inv[z][y] != usize::MAX {
                return None;
            }
            inv[z][y] = x;
        }
    }
    Some(inv)
}

impl Biquandle {
    pub fn new(circ: Vec<Vec<usize>>, star: Vec<Vec<usize>>) -> Result<Self, BiquandleError> {
        let n = circ.len();
        for (name, t) in [("circ", &circ), ("star", &star)] {
            if t.len() != n || t.iter().any(|r| r.len() != n) {
                return Err(BiquandleError::Ragged { table: name, n });
            }
            for (x, row) in t.iter().enumerate() {
                for (y, &v) in row.iter().enumerate() {
                    if v >= n {
                        return Err(BiquandleError::OutOfRange {
                            table: name,
                            x,
                            y,
                            value: v,
                        });
                    }
                }
            }
        }
        let circ_inv = column_inverse(&circ);
        let star_inv = column_inverse(&star);
        let mut s_inv = Some(vec![vec![(usize::MAX, 0); n]; n]);
        for x in 0..n {
            for y in 0..n {
                if let Some(t) = s_inv.as_mut() {
                    let (u, v) = (star[y][x], circ[x][y]);
                    if t[u][v].0 != usize::MAX {
                        s_inv = None;
                    } else {
                        t[u][v] = (x, y);
                    }
                }
            }
        }
        Ok(Biquandle {
            n,
            circ,
            star,
            circ_inv,
            star_inv,
            s_inv,
        })
    }

    pub fn from_fn(
        n: usize,
        circ: impl Fn(usize, usize) -> usize,
        star: impl Fn(usize, usize) -> usize,
    ) -> Result<Self, BiquandleError> {
        let c = (0..n)
            .map(|x| (0..n).map(|y| circ(x, y)).collect())
            .collect();
        let s = (0..n)
            .map(|x| (0..n).map(|y| star(x, y)).collect())
            .collect();
        Self::new(c, s)
    }

    /// `x∘y = x∗y = x + 1 (mod 2)`.
    pub fn flip() -> Self {
        Self::from_fn(2, |x, _| (x + 1) % 2, |x, _| (x + 1) % 2).expect("valid tables")
    }

    /// `x∘y = x`, `x∗y = 2y − x (mod 3)`.
    pub fn dihedral3() -> Self {
        Self::from_fn(3, |x, _| x, |x, y| (2 * y + 3 - x) % 3).expect("valid tables")
    }

    pub fn singleton() -> Self {
        Self::from_fn(1, |_, _| 0, |_, _| 0).expect("valid tables")
    }

    pub fn size(&self) -> usize {
        self.n
    }

    /// `x∘y`.
    pub fn circ(&self, x: usize, y: usize) -> usize {
        self.circ[x][y]
    }

    /// `x∗y`.
    pub fn star(&self, x: usize, y: usize) -> usize {
        self.star[x][y]
    }

    pub fn circ_table(&self) -> &[Vec<usize>] {
        &self.circ
    }

    pub fn star_table(&self) -> &[Vec<usize>] {
        &self.star
    }

    /// `S(x, y) = (y∗x, x∘y)`.
    pub fn s_map(&self, x: usize, y: usize) -> (usize, usize) {
        (self.star[y][x], self.circ[x][y])
    }

    pub fn s_inverse(&self, u: usize, v: usize) -> Option<(usize, usize)> {
        self.s_inv.as_ref().map(|t| t[u][v])
    }

    /// Every axiom violation with a witness; empty iff the tables form a
    /// biquandle.
    pub fn check_axioms(&self) -> Vec<Violation> {
        let n = self.n;
        let (c, s) = (&self.circ, &self.star);
        let mut out = Vec::new();
        for x in 0..n {
            if c[x][x] != s[x][x] {
                out.push(Violation {
                    axiom: Axiom::R1,
                    witness: vec![x],
                });
            }
        }
        for (axiom, t) in [(Axiom::R2Circ, c), (Axiom::R2Star, s)] {
            for y in 0..n {
                let mut first = vec![usize::MAX; n];
                for x in 0..n {
                    let z = t[x][y];
                    if first[z] != usize::MAX {
                        out.push(Violation {
                            axiom,
                            witness: vec![first[z], x, y],
                        });
                        break;
                    }
                    first[z] = x;
                }
            }
        }
        let mut seen = vec![vec![None; n]; n];
        'r3: for x in 0..n {
            for y in 0..n {
                let (u, v) = self.s_map(x, y);
                if let Some((px, py)) = seen[u][v] {
                    out.push(Violation {
                        axiom: Axiom::R3,
                        witness: vec![px, py, x, y],
                    });
                    break 'r3;
                }
                seen[u][v] = Some((x, y));
            }
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if c[c[x][z]][c[y][z]] != c[c[x][y]][s[z][y]] {
                        out.push(Violation {
                            axiom: Axiom::R4First,
                            witness: vec![x, y, z],
                        });
                    }
                    if s[c[y][z]][c[x][z]] != c[s[y][x]][s[z][x]] {
                        out.push(Violation {
                            axiom: Axiom::R4Second,
                            witness: vec![x, y, z],
                        });
                    }
                    if s[s[z][x]][s[y][x]] != s[s[z][y]][c[x][y]] {
                        out.push(Violation {
                            axiom: Axiom::R4Third,
                            witness: vec![x, y, z],
                        });
                    }
                }
            }
        }
        out
    }

    pub fn is_biquandle(&self) -> bool {
        self.check_axioms().is_empty()
    }

    /// Reads `n=<size>`, then `circ:` and `star:` each followed by `n` rows.
    pub fn parse(text: &str) -> Result<Self, BiquandleError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let fmt_err = |line: usize, msg: &str| BiquandleError::Format {
            line,
            msg: msg.to_string(),
        };
        let (ln, head) = lines.next().ok_or_else(|| fmt_err(0, "empty input"))?;
        let n: usize = head
            .strip_prefix("n=")
            .and_then(|v| v.trim().parse().ok())
            .ok_or_else(|| fmt_err(ln, "expected n=<size>"))?;
        let mut read_table = |name: &str| -> Result<Vec<Vec<usize>>, BiquandleError> {
            let (ln, h) = lines
                .next()
                .ok_or_else(|| fmt_err(0, &format!("missing {name}:")))?;
            if h != format!("{name}:") {
                return Err(fmt_err(ln, &format!("expected {name}:")));
            }
            let mut rows = Vec::with_capacity(n);
            for _ in 0..n {
                let (ln, row) = lines
                    .next()
                    .ok_or_else(|| fmt_err(0, &format!("{name}: too few rows")))?;
                let r: Result<Vec<usize>, _> = row.split_whitespace().map(str::parse).collect();
                rows.push(r.map_err(|_| fmt_err(ln, "non-numeric entry"))?);
            }
            Ok(rows)
        };
        let circ = read_table("circ")?;
        let star = read_table("star")?;
        if let Some((ln, _)) = lines.next() {
            return Err(fmt_err(ln, "trailing content"));
        }
        Self::new(circ, star)
    }
}

impl fmt::Display for Biquandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n={}", self.n)?;
        for (name, t) in [("circ", &self.circ), ("star", &self.star)] {
            writeln!(f, "{name}:")?;
            for row in t {
                let r: Vec<String> = row.iter().map(|v| v.to_string()).collect();
                writeln!(f, "{}", r.join(" "))?;
            }
        }
        Ok(())
    }
}

/// Colors of every semiarc, indexed by semiarc id.
pub type Coloring = Vec<usize>;

/// The pair `(x, y)` of input colors at a crossing: `(over-in, under-out)`
/// when positive, `(over-out, under-in)` when negative.
pub fn crossing_inputs(a: &CrossingArcs, sign: Sign, f: &[usize]) -> (usize, usize) {
    match sign {
        Sign::Pos => (f[a.over_in], f[a.under_out]),
        Sign::Neg => (f[a.over_out], f[a.under_in]),
    }
}

/// Semiarc ids `(x, y, under-side output, over-side output)` at a crossing.
fn roles(a: &CrossingArcs, sign: Sign) -> [usize; 4] {
    match sign {
        Sign::Pos => [a.over_in, a.under_out, a.under_in, a.over_out],
        Sign::Neg => [a.over_out, a.under_in, a.under_out, a.over_in],
    }
}

/// True iff `f` satisfies the crossing relation at every crossing.
pub fn is_coloring(d: &LinkDiagram, x: &Biquandle, f: &[usize]) -> bool {
    if f.len() != d.num_semiarcs() || f.iter().any(|&c| c >= x.size()) {
        return false;
    }
    d.crossing_arcs().iter().enumerate().all(|(v, a)| {
        let [p, q, u, o] = roles(a, d.sign(v));
        x.s_map(f[p], f[q]) == (f[u], f[o])
    })
}

struct Solver<'a> {
    x: &'a Biquandle,
    cons: Vec<[usize; 4]>,
    by_arc: Vec<Vec<usize>>,
}

impl Solver<'_> {
    /// Fixes implied colors; false on contradiction.
    fn propagate(&self, f: &mut [usize], trail: &mut Vec<usize>, start: usize) -> bool {
        const NONE: usize = usize::MAX;
        let mut queue = vec![start];
        while let Some(arc) = queue.pop() {
            for &k in &self.by_arc[arc] {
                let [p, q, u, o] = self.cons[k];
                let mut set = |i: usize, v: usize, f: &mut [usize], queue: &mut Vec<usize>| {
                    if f[i] == NONE {
                        f[i] = v;
                        trail.push(i);
                        queue.push(i);
                        true
                    } else {
                        f[i] == v
                    }
                };
                let ok = if f[p] != NONE && f[q] != NONE {
                    let (a, b) = self.x.s_map(f[p], f[q]);
                    set(u, a, f, &mut queue) && set(o, b, f, &mut queue)
                } else if f[u] != NONE && f[o] != NONE {
                    match self.x.s_inverse(f[u], f[o]) {
                        Some((a, b)) => set(p, a, f, &mut queue) && set(q, b, f, &mut queue),
                        None => true,
                    }
                } else if f[p] != NONE && f[u] != NONE {
                    // u = y∗x: solve y through the inverse of ∗x.
                    match &self.x.star_inv {
                        Some(t) => set(q, t[f[u]][f[p]], f, &mut queue),
                        None => true,
                    }
                } else if f[q] != NONE && f[o] != NONE {
                    match &self.x.circ_inv {
                        Some(t) => set(p, t[f[o]][f[q]], f, &mut queue),
                        None => true,
                    }
                } else {
                    true
                };
                if !ok {
                    return false;
                }
            }
        }
        true
    }

    fn search(&self, f: &mut Vec<usize>, out: &mut Vec<Coloring>) {
        let Some(next) = f.iter().position(|&c| c == usize::MAX) else {
            let all_ok = self
                .cons
                .iter()
                .all(|&[p, q, u, o]| self.x.s_map(f[p], f[q]) == (f[u], f[o]));
            if all_ok {
                out.push(f.clone());
            }
            return;
        };
        for c in 0..self.x.size() {
            let mut trail = vec![next];
            f[next] = c;
            if self.propagate(f, &mut trail, next) {
                self.search(f, out);
            }
            for i in trail {
                f[i] = usize::MAX;
            }
        }
    }
}

/// All colorings of `d` by `x`, in lexicographic order of the semiarc color
/// vectors.
pub fn enumerate_colorings(d: &LinkDiagram, x: &Biquandle) -> Vec<Coloring> {
    let nar = d.num_semiarcs();
    let arcs = d.crossing_arcs();
    let cons: Vec<[usize; 4]> = arcs
        .iter()
        .enumerate()
        .map(|(v, a)| roles(a, d.sign(v)))
        .collect();
    let mut by_arc = vec![Vec::new(); nar];
    for (k, c) in cons.iter().enumerate() {
        for &i in c {
            if !by_arc[i].contains(&k) {
                by_arc[i].push(k);
            }
        }
    }
    let solver = Solver { x, cons, by_arc };
    let mut out: Vec<Coloring> = (0..x.size())
        .into_par_iter()
        .map(|c| {
            let mut f = vec![usize::MAX; nar];
            let mut found = Vec::new();
            f[0] = c;
            let mut trail = vec![0];
            if solver.propagate(&mut f, &mut trail, 0) {
                solver.search(&mut f, &mut found);
            }
            found
        })
        .flatten()
        .collect();
    out.sort();
    out
}

pub fn count_colorings(d: &LinkDiagram, x: &Biquandle) -> usize {
    enumerate_colorings(d, x).len()
}
