//! Backtracking search for parity-biquandle bracket coefficients over a
//! finite ring.

use std::collections::HashMap;

use crate::algebra::Scalar;
use crate::biquandle::Biquandle;
use crate::brackets::{BracketCoefficients, BracketError};
use crate::relations::{pbbr_relations, Omega3Reading, Relation, Table, Var};

/// Values pinned before the search starts.
#[derive(Debug, Clone)]
pub struct SearchFix<S: Scalar> {
    pub delta: Option<S>,
    pub w: Option<S>,
    pub entries: Vec<(Table, usize, usize, S)>,
}

impl<S: Scalar> Default for SearchFix<S> {
    fn default() -> Self {
        SearchFix {
            delta: None,
            w: None,
            entries: Vec::new(),
        }
    }
}

impl<S: Scalar> SearchFix<S> {
    /// Pins every entry of table `t` to `v`.
    pub fn fill(mut self, t: Table, n: usize, v: S) -> Self {
        for x in 0..n {
            for y in 0..n {
                self.entries.push((t, x, y, v.clone()));
            }
        }
        self
    }
}

pub const DEFAULT_NODE_BUDGET: u64 = 5_000_000;

struct Search<'a, S: Scalar> {
    vars: Vec<Var>,
    domains: Vec<Vec<S>>,
    /// Relations whose last variable is the one at that position.
    closing: Vec<Vec<&'a Relation>>,
    index: HashMap<Var, usize>,
    values: Vec<Option<S>>,
    nodes: u64,
    budget: u64,
    found: Vec<Vec<S>>,
}

impl<S: Scalar> Search<'_, S> {
    fn value(&self, v: Var) -> S {
        match v {
            Var::WInv => self.values[self.index[&Var::W]]
                .as_ref()
                .and_then(S::inverse)
                .expect("w assigned as a unit"),
            _ => self.values[self.index[&v]].clone().expect("assigned"),
        }
    }

    fn run(&mut self, k: usize) -> Result<(), BracketError> {
        if k == self.vars.len() {
            self.found
                .push(self.values.iter().map(|v| v.clone().unwrap()).collect());
            return Ok(());
        }
        for i in 0..self.domains[k].len() {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(BracketError::SearchBound(self.budget));
            }
            self.values[k] = Some(self.domains[k][i].clone());
            let ok = self.closing[k]
                .iter()
                .all(|r| r.eval(&|v| self.value(v)).is_zero());
            if ok {
                self.run(k + 1)?;
            }
        }
        self.values[k] = None;
        Ok(())
    }
}

/// All coefficient sets on `x` satisfying every relation, in lexicographic
/// order of `(δ, w, A₀₀..F₀₀, A₀₁..)` by element order.
pub fn search_coefficients<S: Scalar>(
    x: &Biquandle,
    fix: &SearchFix<S>,
    budget: u64,
) -> Result<Vec<BracketCoefficients<S>>, BracketError> {
    let elements = S::elements().ok_or_else(|| BracketError::InfiniteRing(S::ring_name()))?;
    let n = x.size();
    if let Some(w) = &fix.w {
        if !w.is_unit() {
            return Err(BracketError::WNotUnit(w.to_string()));
        }
    }
    let mut vars = vec![Var::Delta, Var::W];
    for a in 0..n {
        for b in 0..n {
            for t in Table::ALL {
                vars.push(Var::Entry(t, a, b));
            }
        }
    }
    let index: HashMap<Var, usize> = vars.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let mut domains: Vec<Vec<S>> = vars
        .iter()
        .map(|v| match v {
            Var::W => elements.iter().filter(|e| e.is_unit()).cloned().collect(),
            _ => elements.clone(),
        })
        .collect();
    if let Some(d) = &fix.delta {
        domains[0] = vec![d.clone()];
    }
    if let Some(w) = &fix.w {
        domains[1] = vec![w.clone()];
    }
    for (t, a, b, v) in &fix.entries {
        if *a >= n || *b >= n {
            return Err(BracketError::FixOutOfRange { x: *a, y: *b, n });
        }
        domains[index[&Var::Entry(*t, *a, *b)]] = vec![v.clone()];
    }
    let rels = pbbr_relations(x, Omega3Reading::Corrected);
    let mut closing: Vec<Vec<&Relation>> = vec![Vec::new(); vars.len()];
    for r in &rels {
        let last = r
            .vars()
            .map(|v| match v {
                Var::WInv => index[&Var::W],
                _ => index[&v],
            })
            .max()
            .unwrap_or(0);
        closing[last].push(r);
    }
    let mut s = Search {
        values: vec![None; vars.len()],
        vars,
        domains,
        closing,
        index,
        nodes: 0,
        budget,
        found: Vec::new(),
    };
    s.run(0)?;
    s.found
        .into_iter()
        .map(|vals| {
            let mut tables: [Vec<Vec<S>>; 6] = Default::default();
            for g in tables.iter_mut() {
                *g = vec![vec![S::zero(); n]; n];
            }
            for (i, v) in s.vars.iter().enumerate() {
                if let Var::Entry(t, a, b) = v {
                    tables[t.index()][*a][*b] = vals[i].clone();
                }
            }
            BracketCoefficients::new(x.clone(), tables, vals[0].clone(), vals[1].clone())
        })
        .collect()
}
