//! Polynomial relations on bracket coefficients, instantiated over a
//! biquandle.

use std::fmt;

use crate::algebra::Scalar;
use crate::biquandle::Biquandle;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Table {
    A,
    B,
    C,
    D,
    E,
    F,
}

impl Table {
    pub const ALL: [Table; 6] = [Table::A, Table::B, Table::C, Table::D, Table::E, Table::F];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> char {
        b"ABCDEF"[self.index()] as char
    }

    fn from_char(c: char) -> Option<Table> {
        Table::ALL.iter().copied().find(|t| t.name() == c)
    }
}

/// An unknown of the relation system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    Delta,
    W,
    WInv,
    Entry(Table, usize, usize),
    /// Inverse of a unit-valued entry.
    Inv(Table, usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub coef: i64,
    pub factors: Vec<Var>,
}

/// `Σ terms = 0` at one instance of the free variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub id: String,
    pub witness: Vec<usize>,
    pub terms: Vec<Term>,
}

impl Relation {
    pub fn eval<S: Scalar>(&self, value: &impl Fn(Var) -> S) -> S {
        let mut acc = S::zero();
        for t in &self.terms {
            let mut p = S::from_i64(t.coef);
            for v in &t.factors {
                p = p * value(*v);
            }
            acc = acc + p;
        }
        acc
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.terms.iter().flat_map(|t| t.factors.iter().copied())
    }
}

/// A failed relation instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationViolation {
    pub id: String,
    pub witness: Vec<usize>,
}

impl fmt::Display for RelationViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = ["x", "y", "z"];
        let w: Vec<String> = self
            .witness
            .iter()
            .zip(names)
            .map(|(v, n)| format!("{n}={v}"))
            .collect();
        write!(f, "{} {}", self.id, w.join(" "))
    }
}

pub fn check<S: Scalar>(rels: &[Relation], value: &impl Fn(Var) -> S) -> Vec<RelationViolation> {
    rels.iter()
        .filter(|r| !r.eval(value).is_zero())
        .map(|r| RelationViolation {
            id: r.id.clone(),
            witness: r.witness.clone(),
        })
        .collect()
}

/// Which version of two irregular third-move relations to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Omega3Reading {
    /// First two factors of every left-hand term indexed `(x,y)`, `(y,z)`.
    Corrected,
    /// One factor of the two irregular terms indexed `(x,z)` instead.
    Printed,
}

fn slot(x: &Biquandle, name: &str, a: usize, b: usize, c: usize) -> (usize, usize) {
    match name {
        "xy" => (a, b),
        "yz" => (b, c),
        "p3" => (x.circ(a, b), x.star(c, b)),
        "xz" => (a, c),
        "q2" => (x.star(b, a), x.star(c, a)),
        "q3" => (x.circ(a, c), x.circ(b, c)),
        _ => unreachable!("unknown slot {name}"),
    }
}

/// Parses a side such as `AAB+dABB'` into terms. Unprimed terms use slots
/// `(x,y)`, `(y,z)`, `(x∘y,z∗y)`; primed ones `(x,z)`, `(y∗x,z∗x)`,
/// `(x∘z,y∘z)`. `d` multiplies by δ, `[slot]` overrides one factor's slot.
fn side(
    x: &Biquandle,
    text: &str,
    sign: i64,
    inverse: bool,
    abc: (usize, usize, usize),
) -> Vec<Term> {
    if text == "0" {
        return Vec::new();
    }
    text.split('+')
        .map(|t| {
            let primed = t.ends_with('\'');
            let body = t.trim_end_matches('\'');
            let defaults = if primed {
                ["xz", "q2", "q3"]
            } else {
                ["xy", "yz", "p3"]
            };
            let mut factors = Vec::new();
            let mut chars = body.chars().peekable();
            let mut k = 0;
            while let Some(ch) = chars.next() {
                if ch == 'd' {
                    factors.push(Var::Delta);
                    continue;
                }
                let table = Table::from_char(ch).expect("table letter");
                let mut name = defaults[k].to_string();
                if chars.peek() == Some(&'[') {
                    chars.next();
                    name = chars.by_ref().take_while(|c| *c != ']').collect();
                }
                let (p, q) = slot(x, &name, abc.0, abc.1, abc.2);
                factors.push(if inverse {
                    Var::Inv(table, p, q)
                } else {
                    Var::Entry(table, p, q)
                });
                k += 1;
            }
            Term {
                coef: sign,
                factors,
            }
        })
        .collect()
}

fn triple_relations(x: &Biquandle, lines: &[(&str, &str)], out: &mut Vec<Relation>) {
    let n = x.size();
    for (id, eq) in lines {
        let (l, r) = eq.split_once('=').expect("equation");
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let mut terms = side(x, l, 1, false, (a, b, c));
                    terms.extend(side(x, r, -1, false, (a, b, c)));
                    out.push(Relation {
                        id: id.to_string(),
                        witness: vec![a, b, c],
                        terms,
                    });
                }
            }
        }
    }
}

const SHARED_THIRD: [(&str, &str); 2] = [
    ("omega3-AAB", "AAB=ABA'+AAB'+dABB'+BBB'"),
    ("omega3-BAA", "BAA'=BAA+ABA+dBBA+BBB"),
];

fn term(coef: i64, factors: Vec<Var>) -> Term {
    Term { coef, factors }
}

/// Relations a biquandle bracket `(A, B, δ, w)` must satisfy.
pub fn nor_relations(x: &Biquandle) -> Vec<Relation> {
    use Var::*;
    let n = x.size();
    let mut out = Vec::new();
    for a in 0..n {
        out.push(Relation {
            id: "kink".into(),
            witness: vec![a],
            terms: vec![
                term(1, vec![Delta, Entry(Table::A, a, a)]),
                term(1, vec![Entry(Table::B, a, a)]),
                term(-1, vec![W]),
            ],
        });
        out.push(Relation {
            id: "kink-inverse".into(),
            witness: vec![a],
            terms: vec![
                term(1, vec![Delta, Inv(Table::A, a, a)]),
                term(1, vec![Inv(Table::B, a, a)]),
                term(-1, vec![WInv]),
            ],
        });
    }
    for a in 0..n {
        for b in 0..n {
            out.push(Relation {
                id: "delta".into(),
                witness: vec![a, b],
                terms: vec![
                    term(1, vec![Delta]),
                    term(1, vec![Entry(Table::A, a, b), Inv(Table::B, a, b)]),
                    term(1, vec![Inv(Table::A, a, b), Entry(Table::B, a, b)]),
                ],
            });
        }
    }
    let lines = [
        ("omega3-AAA", "AAA=AAA'"),
        ("omega3-ABB", "ABB=BBA'"),
        ("omega3-BAB", "BAB=BAB'"),
        SHARED_THIRD[0],
        SHARED_THIRD[1],
    ];
    triple_relations(x, &lines, &mut out);
    out
}

/// Relations a parity-biquandle bracket `(A..F, δ, w)` must satisfy: kink
/// relations, both families of second-move relations, and the third-move
/// list.
pub fn pbbr_relations(x: &Biquandle, reading: Omega3Reading) -> Vec<Relation> {
    use Table::*;
    use Var::*;
    let n = x.size();
    let e = |t: Table, a: usize, b: usize| Entry(t, a, b);
    let mut out = Vec::new();
    for a in 0..n {
        let w = vec![a];
        out.push(Relation {
            id: "kink-A".into(),
            witness: w.clone(),
            terms: vec![
                term(1, vec![Delta, e(A, a, a)]),
                term(1, vec![e(B, a, a)]),
                term(-1, vec![W]),
            ],
        });
        out.push(Relation {
            id: "kink-D".into(),
            witness: w.clone(),
            terms: vec![
                term(1, vec![W, Delta, e(D, a, a)]),
                term(1, vec![W, e(E, a, a)]),
                term(-1, vec![]),
            ],
        });
        out.push(Relation {
            id: "kink-C".into(),
            witness: w.clone(),
            terms: vec![term(1, vec![e(C, a, a)])],
        });
        out.push(Relation {
            id: "kink-F".into(),
            witness: w,
            terms: vec![term(1, vec![e(F, a, a)])],
        });
    }
    for a in 0..n {
        for b in 0..n {
            let m = |t: Table| e(t, a, b);
            let mut rel = |id: &str, terms: Vec<Term>| {
                out.push(Relation {
                    id: id.into(),
                    witness: vec![a, b],
                    terms,
                })
            };
            rel("omega2-AF", vec![term(1, vec![m(A), m(F)])]);
            rel("omega2-CD", vec![term(1, vec![m(C), m(D)])]);
            rel("omega2-BF", vec![term(1, vec![m(B), m(F)])]);
            rel("omega2-CE", vec![term(1, vec![m(C), m(E)])]);
            rel(
                "omega2-AD",
                vec![
                    term(1, vec![m(A), m(D)]),
                    term(1, vec![m(C), m(F)]),
                    term(-1, vec![]),
                ],
            );
            rel(
                "omega2-BE",
                vec![
                    term(1, vec![m(B), m(E)]),
                    term(1, vec![m(C), m(F)]),
                    term(-1, vec![]),
                ],
            );
            rel(
                "omega2-dAD",
                vec![
                    term(1, vec![Delta, m(A), m(D)]),
                    term(1, vec![m(A), m(E)]),
                    term(1, vec![m(B), m(D)]),
                ],
            );
            rel(
                "omega2-dBE",
                vec![
                    term(1, vec![Delta, m(B), m(E)]),
                    term(1, vec![m(A), m(E)]),
                    term(1, vec![m(B), m(D)]),
                ],
            );
            rel(
                "omega2-AF+CD",
                vec![term(1, vec![m(A), m(F)]), term(1, vec![m(C), m(D)])],
            );
            rel(
                "omega2-BF+CE",
                vec![term(1, vec![m(B), m(F)]), term(1, vec![m(C), m(E)])],
            );
        }
    }
    let (l7, l8) = match reading {
        Omega3Reading::Corrected => ("BCB+BAC=BAC'", "ABC+CBB=BCA'"),
        Omega3Reading::Printed => ("BCB+B[xz]AC=BAC'", "ABC+C[xz]BB=BCA'"),
    };
    let lines = [
        ("omega3-1", "AAA+CCA=AAA'+ACC'"),
        ("omega3-2", "ABB+CBC=BBA'+CBC'"),
        ("omega3-3", "BAB+BCC=BAB'+CCB'"),
        ("omega3-4", "ACA+CAA=CAA'"),
        ("omega3-5", "AAC=AAC'+ACA'"),
        ("omega3-6", "ACB=BBC'+CBA'"),
        ("omega3-7", l7),
        ("omega3-8", l8),
        ("omega3-9", "CAB=BCB'+CAB'"),
        ("omega3-10", "CCB=BCC'"),
        ("omega3-11", "ACC=CCA'"),
        ("omega3-12", "CAC=CAC'"),
        ("omega3-BCA", "BCA=0"),
        ("omega3-CBA", "CBA=0"),
        ("omega3-BBC", "BBC=0"),
        ("omega3-CCC", "CCC=0"),
        ("omega3-ABC'", "ABC'=0"),
        ("omega3-ACB'", "ACB'=0"),
        ("omega3-CBB'", "CBB'=0"),
        ("omega3-CCC'", "CCC'=0"),
        SHARED_THIRD[0],
        SHARED_THIRD[1],
    ];
    triple_relations(x, &lines, &mut out);
    out
}
