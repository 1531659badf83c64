//! The parity bracket, scalar biquandle brackets and the parity-biquandle
//! bracket, with their relation checks and a Kauffman-bracket oracle.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Mutex;

use rayon::prelude::*;
use thiserror::Error;

use crate::algebra::{pow_u64, AlgebraError, Scalar, Zmod};
use crate::biquandle::{crossing_inputs, enumerate_colorings, Biquandle, BiquandleError};
use crate::freegraph::{smooth_state, GraphError, GraphPolynomial, Smoothing, CIRCLE};
use crate::gauss::{writhe, LinkDiagram, Sign};
use crate::parity::{parity, ParityError, ParitySelector};
use crate::relations::{
    check, nor_relations, pbbr_relations, Omega3Reading, RelationViolation, Table, Var,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BracketError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Biquandle(#[from] BiquandleError),
    #[error(transparent)]
    Parity(#[from] ParityError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("line {line}: {msg}")]
    Format { line: usize, msg: String },
    #[error("table {table} must be {n}x{n}")]
    Shape { table: char, n: usize },
    #[error("missing table {0}")]
    MissingTable(char),
    #[error("w = {0} is not a unit")]
    WNotUnit(String),
    #[error("{table}[{x}][{y}] = {value} is not a unit")]
    NonUnitEntry {
        table: char,
        x: usize,
        y: usize,
        value: String,
    },
    #[error("ring mismatch: {0} vs {1}")]
    RingMismatch(String, String),
    #[error("{0} is not finite; coefficient search needs a finite ring")]
    InfiniteRing(String),
    #[error("search space exceeds the node budget of {0}")]
    SearchBound(u64),
    #[error("fixed entry ({x},{y}) outside a biquandle of size {n}")]
    FixOutOfRange { x: usize, y: usize, n: usize },
}

type Grid<S> = Vec<Vec<S>>;

fn check_shape<S>(t: &Grid<S>, table: Table, n: usize) -> Result<(), BracketError> {
    if t.len() != n || t.iter().any(|r| r.len() != n) {
        return Err(BracketError::Shape {
            table: table.name(),
            n,
        });
    }
    Ok(())
}

fn invert_grid<S: Scalar>(t: &Grid<S>, table: Table) -> Result<Grid<S>, BracketError> {
    t.iter()
        .enumerate()
        .map(|(x, row)| {
            row.iter()
                .enumerate()
                .map(|(y, v)| {
                    v.inverse().ok_or_else(|| BracketError::NonUnitEntry {
                        table: table.name(),
                        x,
                        y,
                        value: v.to_string(),
                    })
                })
                .collect()
        })
        .collect()
}

fn writhe_factor<S: Scalar>(w: &S, w_inv: &S, wr: i64) -> S {
    if wr >= 0 {
        pow_u64(w_inv, wr as u64)
    } else {
        pow_u64(w, wr.unsigned_abs())
    }
}

/// Skein data `(A, B, δ, w)` of a scalar biquandle bracket. All entries of
/// `A` and `B` are units.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NorBracket<S: Scalar> {
    x: Biquandle,
    a: Grid<S>,
    b: Grid<S>,
    a_inv: Grid<S>,
    b_inv: Grid<S>,
    delta: S,
    w: S,
    w_inv: S,
}

impl<S: Scalar> NorBracket<S> {
    pub fn new(x: Biquandle, a: Grid<S>, b: Grid<S>, delta: S, w: S) -> Result<Self, BracketError> {
        let n = x.size();
        check_shape(&a, Table::A, n)?;
        check_shape(&b, Table::B, n)?;
        let w_inv = w
            .inverse()
            .ok_or_else(|| BracketError::WNotUnit(w.to_string()))?;
        let a_inv = invert_grid(&a, Table::A)?;
        let b_inv = invert_grid(&b, Table::B)?;
        Ok(NorBracket {
            x,
            a,
            b,
            a_inv,
            b_inv,
            delta,
            w,
            w_inv,
        })
    }

    /// Constant tables `A = a`, `B = a⁻¹` with `δ = −a²−a⁻²`, `w = −a³`.
    pub fn kauffman(x: Biquandle, a: S) -> Result<Self, BracketError> {
        let ai = a.unit_inverse()?;
        let n = x.size();
        let delta = -(a.clone() * a.clone()) - ai.clone() * ai.clone();
        let w = -(a.clone() * a.clone() * a.clone());
        Self::new(x, vec![vec![a; n]; n], vec![vec![ai; n]; n], delta, w)
    }

    pub fn biquandle(&self) -> &Biquandle {
        &self.x
    }

    pub fn a(&self) -> &Grid<S> {
        &self.a
    }

    pub fn b(&self) -> &Grid<S> {
        &self.b
    }

    pub fn delta(&self) -> &S {
        &self.delta
    }

    pub fn w(&self) -> &S {
        &self.w
    }

    fn value(&self, v: Var) -> S {
        match v {
            Var::Delta => self.delta.clone(),
            Var::W => self.w.clone(),
            Var::WInv => self.w_inv.clone(),
            Var::Entry(Table::A, x, y) => self.a[x][y].clone(),
            Var::Entry(Table::B, x, y) => self.b[x][y].clone(),
            Var::Inv(Table::A, x, y) => self.a_inv[x][y].clone(),
            Var::Inv(Table::B, x, y) => self.b_inv[x][y].clone(),
            _ => S::zero(),
        }
    }

    /// The sextuple `(A, B, 0, A⁻¹, B⁻¹, 0)`.
    pub fn to_pbbr(&self) -> BracketCoefficients<S> {
        let n = self.x.size();
        let zero = vec![vec![S::zero(); n]; n];
        BracketCoefficients {
            x: self.x.clone(),
            tables: [
                self.a.clone(),
                self.b.clone(),
                zero.clone(),
                self.a_inv.clone(),
                self.b_inv.clone(),
                zero,
            ],
            delta: self.delta.clone(),
            w: self.w.clone(),
            w_inv: self.w_inv.clone(),
        }
    }
}

/// Violated instances of the scalar-bracket relations.
pub fn verify_nor_relations<S: Scalar>(nor: &NorBracket<S>) -> Vec<RelationViolation> {
    check(&nor_relations(&nor.x), &|v| nor.value(v))
}

/// The maps `A..F` on `X × X`, with `δ` and a unit `w`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BracketCoefficients<S: Scalar> {
    x: Biquandle,
    tables: [Grid<S>; 6],
    delta: S,
    w: S,
    w_inv: S,
}

impl<S: Scalar> BracketCoefficients<S> {
    pub fn new(x: Biquandle, tables: [Grid<S>; 6], delta: S, w: S) -> Result<Self, BracketError> {
        for (t, g) in Table::ALL.iter().zip(&tables) {
            check_shape(g, *t, x.size())?;
        }
        let w_inv = w
            .inverse()
            .ok_or_else(|| BracketError::WNotUnit(w.to_string()))?;
        Ok(BracketCoefficients {
            x,
            tables,
            delta,
            w,
            w_inv,
        })
    }

    pub fn biquandle(&self) -> &Biquandle {
        &self.x
    }

    pub fn table(&self, t: Table) -> &Grid<S> {
        &self.tables[t.index()]
    }

    pub fn entry(&self, t: Table, x: usize, y: usize) -> &S {
        &self.tables[t.index()][x][y]
    }

    pub fn set_entry(&mut self, t: Table, x: usize, y: usize, v: S) {
        self.tables[t.index()][x][y] = v;
    }

    pub fn delta(&self) -> &S {
        &self.delta
    }

    pub fn w(&self) -> &S {
        &self.w
    }

    fn value(&self, v: Var) -> S {
        match v {
            Var::Delta => self.delta.clone(),
            Var::W => self.w.clone(),
            Var::WInv => self.w_inv.clone(),
            Var::Entry(t, x, y) => self.tables[t.index()][x][y].clone(),
            Var::Inv(t, x, y) => self.tables[t.index()][x][y]
                .inverse()
                .unwrap_or_else(S::zero),
        }
    }

    /// Coefficients of the oriented, disoriented and vertex smoothings at a
    /// crossing with input colors `(x, y)`.
    fn weights(&self, sign: Sign, x: usize, y: usize) -> [&S; 3] {
        let base = match sign {
            Sign::Pos => 0,
            Sign::Neg => 3,
        };
        [0, 1, 2].map(|k| &self.tables[base + k][x][y])
    }

    /// Writes the coefficient-file form, naming the biquandle by `x_ref`.
    pub fn to_file_text(&self, x_ref: &str) -> String {
        let mut s = format!(
            "ring={}\nX={x_ref}\ndelta={}\nw={}\n",
            S::ring_name(),
            self.delta,
            self.w
        );
        for t in Table::ALL {
            s.push_str(&format!("{}:\n", t.name()));
            for row in self.table(t) {
                let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
                let sep = if cells.iter().any(|c| c.contains(' ')) {
                    " ; "
                } else {
                    " "
                };
                s.push_str(&cells.join(sep));
                s.push('\n');
            }
        }
        s
    }
}

impl BracketCoefficients<Zmod<2>> {
    /// On the flip biquandle: both smoothings on `(x, x)`, the vertex on
    /// `(x, x+1)`; `δ = 0`, `w = 1`.
    pub fn parity_flip() -> Self {
        type Z2 = Zmod<2>;
        let diag = |on_diag: bool| -> Grid<Z2> {
            (0..2)
                .map(|x| {
                    (0..2)
                        .map(|y| Z2::new(i64::from((x == y) == on_diag)))
                        .collect()
                })
                .collect()
        };
        let even = diag(true);
        let odd = diag(false);
        BracketCoefficients::new(
            Biquandle::flip(),
            [
                even.clone(),
                even.clone(),
                odd.clone(),
                even.clone(),
                even,
                odd,
            ],
            Z2::new(0),
            Z2::new(1),
        )
        .expect("w = 1 is a unit")
    }
}

/// Violated instances of the parity-biquandle bracket relations: the kink
/// relations, all second-move forms and the third-move list.
pub fn verify_pbbr_relations<S: Scalar>(
    beta: &BracketCoefficients<S>,
    reading: Omega3Reading,
) -> Vec<RelationViolation> {
    check(&pbbr_relations(&beta.x, reading), &|v| beta.value(v))
}

// ---------------------------------------------------------------------------
// Coefficient files

/// Header and raw tables of a coefficient file, before ring elements are
/// parsed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientFile {
    pub ring: String,
    pub x_ref: String,
    delta: (usize, String),
    w: (usize, String),
    tables: BTreeMap<char, Vec<(usize, Vec<String>)>>,
}

fn split_row(line: &str) -> Vec<String> {
    if line.contains(';') {
        line.split(';').map(|c| c.trim().to_string()).collect()
    } else {
        line.split_whitespace().map(str::to_string).collect()
    }
}

impl CoefficientFile {
    /// Reads `key=value` headers `ring`, `X`, `delta`, `w` and tables
    /// introduced by `A:` .. `F:`. Row entries are separated by whitespace,
    /// or by `;` when entries contain spaces.
    pub fn parse(text: &str) -> Result<Self, BracketError> {
        let mut ring = None;
        let mut x_ref = None;
        let mut delta = None;
        let mut w = None;
        let mut tables: BTreeMap<char, Vec<(usize, Vec<String>)>> = BTreeMap::new();
        let mut current: Option<char> = None;
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some((k, v)) = line.split_once('=') {
                let v = v.trim().to_string();
                match k.trim() {
                    "ring" => ring = Some(v),
                    "X" => x_ref = Some(v),
                    "delta" => delta = Some((line_no, v)),
                    "w" => w = Some((line_no, v)),
                    other => {
                        return Err(BracketError::Format {
                            line: line_no,
                            msg: format!("unknown key `{other}`"),
                        })
                    }
                }
                current = None;
                continue;
            }
            if let Some(name) = line.strip_suffix(':') {
                let c = name.trim();
                if c.len() == 1 && "ABCDEF".contains(c) {
                    let c = c.chars().next().unwrap();
                    if tables.insert(c, Vec::new()).is_some() {
                        return Err(BracketError::Format {
                            line: line_no,
                            msg: format!("table {c} given twice"),
                        });
                    }
                    current = Some(c);
                    continue;
                }
            }
            match current {
                Some(c) => tables.get_mut(&c).unwrap().push((line_no, split_row(line))),
                None => {
                    return Err(BracketError::Format {
                        line: line_no,
                        msg: format!("unexpected `{line}`"),
                    })
                }
            }
        }
        let missing = |what: &str| BracketError::Format {
            line: 0,
            msg: format!("missing `{what}=`"),
        };
        Ok(CoefficientFile {
            ring: ring.ok_or_else(|| missing("ring"))?,
            x_ref: x_ref.ok_or_else(|| missing("X"))?,
            delta: delta.ok_or_else(|| missing("delta"))?,
            w: w.ok_or_else(|| missing("w"))?,
            tables,
        })
    }

    fn elem<S: Scalar>(line: usize, text: &str) -> Result<S, BracketError> {
        S::parse_elem(text).map_err(|e| BracketError::Format {
            line,
            msg: e.to_string(),
        })
    }

    fn check_ring<S: Scalar>(&self) -> Result<(), BracketError> {
        if self.ring != S::ring_name() {
            return Err(BracketError::RingMismatch(
                self.ring.clone(),
                S::ring_name(),
            ));
        }
        Ok(())
    }

    fn grid<S: Scalar>(&self, t: Table, n: usize) -> Result<Grid<S>, BracketError> {
        let rows = self
            .tables
            .get(&t.name())
            .ok_or(BracketError::MissingTable(t.name()))?;
        if rows.len() != n {
            return Err(BracketError::Shape { table: t.name(), n });
        }
        rows.iter()
            .map(|(line, cells)| {
                if cells.len() != n {
                    return Err(BracketError::Format {
                        line: *line,
                        msg: format!("table {} row needs {n} entries", t.name()),
                    });
                }
                cells.iter().map(|c| Self::elem(*line, c)).collect()
            })
            .collect()
    }

    fn scalars<S: Scalar>(&self) -> Result<(S, S), BracketError> {
        self.check_ring::<S>()?;
        Ok((
            Self::elem(self.delta.0, &self.delta.1)?,
            Self::elem(self.w.0, &self.w.1)?,
        ))
    }

    pub fn has_table(&self, t: Table) -> bool {
        self.tables.contains_key(&t.name())
    }

    pub fn coefficients<S: Scalar>(
        &self,
        x: Biquandle,
    ) -> Result<BracketCoefficients<S>, BracketError> {
        let (delta, w) = self.scalars::<S>()?;
        let n = x.size();
        let mut grids = Vec::with_capacity(6);
        for t in Table::ALL {
            grids.push(self.grid::<S>(t, n)?);
        }
        let tables: [Grid<S>; 6] = grids.try_into().expect("six tables");
        BracketCoefficients::new(x, tables, delta, w)
    }

    /// Scalar-bracket data from the `A` and `B` tables; other tables are
    /// ignored.
    pub fn nor<S: Scalar>(&self, x: Biquandle) -> Result<NorBracket<S>, BracketError> {
        let (delta, w) = self.scalars::<S>()?;
        let n = x.size();
        let a = self.grid::<S>(Table::A, n)?;
        let b = self.grid::<S>(Table::B, n)?;
        NorBracket::new(x, a, b, delta, w)
    }
}

/// Resolves `builtin:flip`, `builtin:dihedral3`, `builtin:singleton`.
pub fn builtin_biquandle(name: &str) -> Option<Biquandle> {
    match name.strip_prefix("builtin:")? {
        "flip" => Some(Biquandle::flip()),
        "dihedral3" => Some(Biquandle::dihedral3()),
        "singleton" => Some(Biquandle::singleton()),
        _ => None,
    }
}

// ---------------------------------------------------------------------------
// State sums

/// Sum over states that smooth each even crossing both ways and keep each
/// odd crossing as a vertex, in `Z2` with `δ = 0`.
pub fn parity_bracket(
    d: &LinkDiagram,
    sel: ParitySelector,
) -> Result<GraphPolynomial<Zmod<2>>, BracketError> {
    let p = parity(d, sel)?;
    let even: Vec<usize> = (0..d.num_crossings()).filter(|&v| p.get(v) == 0).collect();
    let zero = Zmod::<2>::new(0);
    let mut out = GraphPolynomial::zero();
    let mut state: Vec<Smoothing> = (0..d.num_crossings())
        .map(|v| {
            if p.get(v) == 0 {
                Smoothing::Oriented
            } else {
                Smoothing::Vertex
            }
        })
        .collect();
    for mask in 0u64..(1u64 << even.len()) {
        for (k, &v) in even.iter().enumerate() {
            state[v] = if mask >> k & 1 == 0 {
                Smoothing::Oriented
            } else {
                Smoothing::Disoriented
            };
        }
        out.add_graph(Zmod::new(1), &smooth_state(d, &state), &zero);
    }
    Ok(out)
}

/// Number of circles in every oriented/disoriented state, indexed by the
/// bitmask of disoriented crossings.
fn circle_counts(d: &LinkDiagram) -> Vec<usize> {
    let n = d.num_crossings();
    (0u64..(1u64 << n))
        .into_par_iter()
        .map(|mask| {
            let st: Vec<Smoothing> = (0..n)
                .map(|v| {
                    if mask >> v & 1 == 0 {
                        Smoothing::Oriented
                    } else {
                        Smoothing::Disoriented
                    }
                })
                .collect();
            smooth_state(d, &st).total_circles()
        })
        .collect()
}

fn nor_value_with<S: Scalar>(
    d: &LinkDiagram,
    f: &[usize],
    nor: &NorBracket<S>,
    counts: &[usize],
) -> S {
    let arcs = d.crossing_arcs();
    let factors: Vec<[S; 2]> = arcs
        .iter()
        .enumerate()
        .map(|(v, a)| {
            let s = d.sign(v);
            let (x, y) = crossing_inputs(a, s, f);
            match s {
                Sign::Pos => [nor.a[x][y].clone(), nor.b[x][y].clone()],
                Sign::Neg => [nor.a_inv[x][y].clone(), nor.b_inv[x][y].clone()],
            }
        })
        .collect();
    let mut sum = S::zero();
    for (mask, &k) in counts.iter().enumerate() {
        let mut p = pow_u64(&nor.delta, k as u64);
        for (v, fv) in factors.iter().enumerate() {
            p = p * fv[mask >> v & 1].clone();
        }
        sum = sum + p;
    }
    sum * writhe_factor(&nor.w, &nor.w_inv, writhe(d))
}

/// Scalar bracket of one coloring: oriented smoothings weighted by `A`
/// (positive) or `A⁻¹` (negative), disoriented by `B` or `B⁻¹`, times
/// `δ^k` for `k` circles, all times `w^(−writhe)`.
pub fn biquandle_bracket_value<S: Scalar>(d: &LinkDiagram, f: &[usize], nor: &NorBracket<S>) -> S {
    nor_value_with(d, f, nor, &circle_counts(d))
}

pub fn biquandle_bracket_multiset<S: Scalar>(
    d: &LinkDiagram,
    nor: &NorBracket<S>,
) -> InvariantMultiset {
    let counts = circle_counts(d);
    let values: Vec<String> = enumerate_colorings(d, &nor.x)
        .par_iter()
        .map(|f| nor_value_with(d, f, nor, &counts).to_string())
        .collect();
    InvariantMultiset::from_values(S::ring_name(), values)
}

/// Reduced code and leftover circle power of each vertex/smoothing state,
/// shared across colorings.
struct StateCache<'a> {
    d: &'a LinkDiagram,
    map: Mutex<HashMap<Vec<Smoothing>, (String, u64)>>,
}

impl<'a> StateCache<'a> {
    fn new(d: &'a LinkDiagram) -> Self {
        StateCache {
            d,
            map: Mutex::new(HashMap::new()),
        }
    }

    fn get(&self, st: &[Smoothing]) -> (String, u64) {
        if let Some(v) = self.map.lock().unwrap().get(st) {
            return v.clone();
        }
        let r = smooth_state(self.d, st).r2_reduce();
        let v = if r.num_chords() > 0 {
            (r.canonical_code(), r.free_circles() as u64)
        } else {
            (CIRCLE.to_string(), r.free_circles().max(1) as u64 - 1)
        };
        self.map.lock().unwrap().insert(st.to_vec(), v.clone());
        v
    }
}

const SMOOTHINGS: [Smoothing; 3] = [
    Smoothing::Oriented,
    Smoothing::Disoriented,
    Smoothing::Vertex,
];

fn pb_value_with<S: Scalar>(
    d: &LinkDiagram,
    f: &[usize],
    beta: &BracketCoefficients<S>,
    cache: &StateCache<'_>,
) -> GraphPolynomial<S> {
    let weights: Vec<[S; 3]> = d
        .crossing_arcs()
        .iter()
        .enumerate()
        .map(|(v, a)| {
            let s = d.sign(v);
            let (x, y) = crossing_inputs(a, s, f);
            beta.weights(s, x, y).map(S::clone)
        })
        .collect();
    let n = d.num_crossings();
    let mut out = GraphPolynomial::zero();
    let mut state = vec![Smoothing::Vertex; n];
    fn walk<S: Scalar>(
        v: usize,
        coef: S,
        weights: &[[S; 3]],
        state: &mut Vec<Smoothing>,
        beta: &BracketCoefficients<S>,
        cache: &StateCache<'_>,
        out: &mut GraphPolynomial<S>,
    ) {
        if v == weights.len() {
            let (code, k) = cache.get(state);
            out.add_term(&code, coef * pow_u64(&beta.delta, k));
            return;
        }
        for (i, s) in SMOOTHINGS.iter().enumerate() {
            if weights[v][i].is_zero() {
                continue;
            }
            state[v] = *s;
            walk(
                v + 1,
                coef.clone() * weights[v][i].clone(),
                weights,
                state,
                beta,
                cache,
                out,
            );
        }
    }
    walk(0, S::one(), &weights, &mut state, beta, cache, &mut out);
    out.scale(&writhe_factor(&beta.w, &beta.w_inv, writhe(d)))
}

/// Picture-valued bracket of one coloring: the sum over all `3ⁿ` states.
pub fn pb_bracket_value<S: Scalar>(
    d: &LinkDiagram,
    f: &[usize],
    beta: &BracketCoefficients<S>,
) -> GraphPolynomial<S> {
    pb_value_with(d, f, beta, &StateCache::new(d))
}

pub fn pb_bracket_values<S: Scalar>(
    d: &LinkDiagram,
    beta: &BracketCoefficients<S>,
) -> Vec<GraphPolynomial<S>> {
    let cache = StateCache::new(d);
    enumerate_colorings(d, &beta.x)
        .par_iter()
        .map(|f| pb_value_with(d, f, beta, &cache))
        .collect()
}

pub fn pb_bracket_multiset<S: Scalar>(
    d: &LinkDiagram,
    beta: &BracketCoefficients<S>,
) -> InvariantMultiset {
    let values = pb_bracket_values(d, beta)
        .iter()
        .map(|p| p.to_string())
        .collect();
    InvariantMultiset::from_values(S::ring_name(), values)
}

/// Multiset of scalars obtained by substituting `δ` for the circle.
/// Values with other graphs are kept in printed form.
pub fn substitute_circle<S: Scalar>(values: &[GraphPolynomial<S>], delta: &S) -> InvariantMultiset {
    let vals = values
        .iter()
        .map(|p| match p.circle_value(delta) {
            Some(s) => s.to_string(),
            None => p.to_string(),
        })
        .collect();
    InvariantMultiset::from_values(S::ring_name(), vals)
}

/// Independent Kauffman state sum with `δ = −a²−a⁻²` and `w = −a³`.
pub fn kauffman_oracle<S: Scalar>(d: &LinkDiagram, a: &S) -> Result<S, BracketError> {
    let ai = a.unit_inverse()?;
    let delta = -(a.clone() * a.clone()) - ai.clone() * ai.clone();
    let arcs = d.crossing_arcs();
    let nar = d.num_semiarcs();
    let n = arcs.len();
    let mut total = S::zero();
    for mask in 0u64..(1u64 << n) {
        let mut uf = UnionFind::new(2 * nar);
        for s in 0..nar {
            uf.union(2 * s, 2 * s + 1);
        }
        let mut na = 0u64;
        for (v, c) in arcs.iter().enumerate() {
            let oi = 2 * c.over_in + 1;
            let oo = 2 * c.over_out;
            let ui = 2 * c.under_in + 1;
            let uo = 2 * c.under_out;
            let take_a = mask >> v & 1 == 0;
            let coherent = match d.sign(v) {
                Sign::Pos => take_a,
                Sign::Neg => !take_a,
            };
            if take_a {
                na += 1;
            }
            if coherent {
                uf.union(oi, uo);
                uf.union(ui, oo);
            } else {
                uf.union(oi, ui);
                uf.union(oo, uo);
            }
        }
        let k = uf.count() as u64;
        let nb = n as u64 - na;
        total = total + pow_u64(a, na) * pow_u64(&ai, nb) * pow_u64(&delta, k);
    }
    let w = -(a.clone() * a.clone() * a.clone());
    Ok(total * w.pow_signed(-writhe(d))?)
}

struct UnionFind {
    parent: Vec<usize>,
    sets: usize,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            sets: n,
        }
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
            self.sets -= 1;
        }
    }

    fn count(&self) -> usize {
        self.sets
    }
}

// ---------------------------------------------------------------------------
// Multisets

/// Values with multiplicities, keyed by canonical serialization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantMultiset {
    ring: String,
    counts: BTreeMap<String, usize>,
}

impl InvariantMultiset {
    pub fn from_values(ring: String, values: Vec<String>) -> Self {
        let mut counts = BTreeMap::new();
        for v in values {
            *counts.entry(v).or_insert(0) += 1;
        }
        InvariantMultiset { ring, counts }
    }

    pub fn ring(&self) -> &str {
        &self.ring
    }

    pub fn counts(&self) -> &BTreeMap<String, usize> {
        &self.counts
    }

    pub fn len(&self) -> usize {
        self.counts.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn multiplicity(&self, value: &str) -> usize {
        self.counts.get(value).copied().unwrap_or(0)
    }

    /// `Σ m·u^(value)`, the generating-function form.
    pub fn u_polynomial(&self) -> String {
        if self.counts.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .counts
            .iter()
            .map(|(v, m)| format!("{m}*u^({v})"))
            .collect();
        parts.join(" + ")
    }

    /// Reads `value # multiplicity` lines, re-canonicalizing each value as
    /// a ring element or, if it contains a graph code, a graph polynomial.
    pub fn parse<S: Scalar>(text: &str) -> Result<Self, BracketError> {
        let mut counts = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| BracketError::Format { line: i + 1, msg };
            let (v, m) = line
                .rsplit_once('#')
                .ok_or_else(|| err("expected `value # multiplicity`".into()))?;
            let m: usize = m
                .trim()
                .parse()
                .map_err(|_| err(format!("bad multiplicity `{}`", m.trim())))?;
            let v = v.trim();
            let canon = if v.contains('(') {
                GraphPolynomial::<S>::parse(v)?.to_string()
            } else {
                S::parse_elem(v)
                    .map_err(|e| err(e.to_string()))?
                    .to_string()
            };
            *counts.entry(canon).or_insert(0) += m;
        }
        counts.retain(|_, m| *m > 0);
        Ok(InvariantMultiset {
            ring: S::ring_name(),
            counts,
        })
    }
}

impl fmt::Display for InvariantMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (v, m) in &self.counts {
            writeln!(f, "{v} # {m}")?;
        }
        Ok(())
    }
}

pub fn compare_multisets(
    a: &InvariantMultiset,
    b: &InvariantMultiset,
) -> Result<bool, BracketError> {
    if a.ring != b.ring {
        return Err(BracketError::RingMismatch(a.ring.clone(), b.ring.clone()));
    }
    Ok(a.counts == b.counts)
}
