//! Acceptance suite. Prints one PASS/FAIL line per criterion.
//!
//! Exits non-zero when a criterion fails, unless the only failing checks are
//! listed in `KNOWN_CONFLICTS` (see the README section on known deviations).

mod common;

use std::collections::HashMap;
use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use pbbracket::biquandle::{count_colorings, Axiom, Violation};
use pbbracket::brackets::{
    biquandle_bracket_multiset, biquandle_bracket_value, kauffman_oracle, parity_bracket,
    pb_bracket_multiset, pb_bracket_values, substitute_circle, verify_pbbr_relations,
    BracketCoefficients, NorBracket,
};
use pbbracket::freegraph::FreeGraph;
use pbbracket::gauss::{
    apply_move, classical_realizability, random_virtual_knot, random_virtual_link, random_walk,
    WalkOptions,
};
use pbbracket::parity::{
    biquandle_parity, check_parity_under_move, gaussian_parity, ParitySelector,
};
use pbbracket::relations::{Omega3Reading, Table};
use pbbracket::{Biquandle, LaurentZ, LinkDiagram, Role, Scalar, Sign, Z2, Z5, Z7};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Checks expected to fail for documented reasons: (criterion, check name).
const KNOWN_CONFLICTS: &[(u8, &str)] = &[(4, "virtual trefoil")];

const TREFOIL: &str = "O1+ U2+ O3+ U1+ O2+ U3+";

struct Check {
    name: &'static str,
    ok: bool,
    detail: String,
}

fn check(name: &'static str, ok: bool, detail: impl Into<String>) -> Check {
    Check {
        name,
        ok,
        detail: detail.into(),
    }
}

type Criterion = (u8, &'static str, Option<Duration>, fn() -> Vec<Check>);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        (1, "biquandle axioms", Some(Duration::from_secs(1)), c1),
        (2, "counting invariance", Some(Duration::from_secs(60)), c2),
        (3, "parity", None, c3),
        (4, "parity bracket", None, c4),
        (5, "R2 confluence", None, c5),
        (6, "relation verifiers", None, c6),
        (
            7,
            "pb bracket invariance",
            Some(Duration::from_secs(300)),
            c7,
        ),
        (8, "reductions", None, c8),
        (9, "Kauffman consistency", None, c9),
        (10, "realizability", None, c10),
    ];
    let mut unexpected = 0;
    let mut failed = 0;
    for (id, title, limit, run) in criteria {
        let start = Instant::now();
        let mut checks = run();
        let took = start.elapsed();
        if let Some(l) = limit {
            checks.push(check(
                "runtime",
                took <= l,
                format!("{:.2}s, limit {}s", took.as_secs_f64(), l.as_secs()),
            ));
        }
        let ok = checks.iter().all(|c| c.ok);
        println!(
            "criterion {id}: {} - {title} ({:.2}s)",
            if ok { "PASS" } else { "FAIL" },
            took.as_secs_f64()
        );
        for c in &checks {
            let known = KNOWN_CONFLICTS.contains(&(id, c.name));
            let tag = match (c.ok, known) {
                (true, _) => "ok",
                (false, true) => "FAIL (known conflict)",
                (false, false) => "FAIL",
            };
            println!("    {tag}: {}: {}", c.name, c.detail);
            if !c.ok && !known {
                unexpected += 1;
            }
        }
        if !ok {
            failed += 1;
        }
    }
    println!(
        "acceptance: {} of 10 criteria pass; {unexpected} unexpected failing check(s)",
        10 - failed
    );
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

// ---------------------------------------------------------------------------
// Shared corpus helpers

fn walk(
    d: &LinkDiagram,
    steps: usize,
    seed: u64,
    max: usize,
) -> (LinkDiagram, Vec<pbbracket::MoveDescriptor>) {
    let mut o = WalkOptions::new(steps, seed);
    o.max_crossings = Some(max);
    random_walk(d, &o)
}

fn sample(rng: &mut ChaCha8Rng, max: usize) -> LinkDiagram {
    let n = rng.gen_range(0..=max);
    if rng.gen_bool(0.8) {
        random_virtual_knot(rng, n)
    } else {
        random_virtual_link(rng, 2, n)
    }
}

/// Data files, every knot code with at most three crossings, and random
/// knots and links.
fn corpus() -> Vec<LinkDiagram> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data");
    let mut files: Vec<_> = std::fs::read_dir(&dir)
        .expect("data directory")
        .map(|e| e.expect("entry").path())
        .filter(|p| p.extension().is_some_and(|x| x == "gauss"))
        .collect();
    files.sort();
    let mut out: Vec<LinkDiagram> = files
        .iter()
        .map(|p| LinkDiagram::parse(&std::fs::read_to_string(p).unwrap()).unwrap())
        .collect();
    for n in 0..=3 {
        out.extend(common::all_knot_codes(n));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(800);
    for _ in 0..60 {
        let n = rng.gen_range(0..=6);
        out.push(random_virtual_knot(&mut rng, n));
        let n = rng.gen_range(0..=4);
        out.push(random_virtual_link(&mut rng, 2, n));
    }
    out
}

fn first_failure<T>(items: impl IntoIterator<Item = T>, ok: impl Fn(&T) -> bool) -> Option<T> {
    items.into_iter().find(|t| !ok(t))
}

// ---------------------------------------------------------------------------
// 1. Biquandle axioms

/// Confirms a reported witness straight from the axiom statements.
fn witness_holds(x: &Biquandle, v: &Violation) -> bool {
    let c = |a: usize, b: usize| x.circ(a, b);
    let s = |a: usize, b: usize| x.star(a, b);
    let w = &v.witness;
    match v.axiom {
        Axiom::R1 => c(w[0], w[0]) != s(w[0], w[0]),
        Axiom::R2Circ => w[0] != w[1] && c(w[0], w[2]) == c(w[1], w[2]),
        Axiom::R2Star => w[0] != w[1] && s(w[0], w[2]) == s(w[1], w[2]),
        Axiom::R3 => {
            (w[0], w[1]) != (w[2], w[3])
                && (s(w[1], w[0]), c(w[0], w[1])) == (s(w[3], w[2]), c(w[2], w[3]))
        }
        Axiom::R4First => {
            let (a, b, z) = (w[0], w[1], w[2]);
            c(c(a, z), c(b, z)) != c(c(a, b), s(z, b))
        }
        Axiom::R4Second => {
            let (a, b, z) = (w[0], w[1], w[2]);
            s(c(b, z), c(a, z)) != c(s(b, a), s(z, a))
        }
        Axiom::R4Third => {
            let (a, b, z) = (w[0], w[1], w[2]);
            s(s(z, a), s(b, a)) != s(s(z, b), c(a, b))
        }
    }
}

fn c1() -> Vec<Check> {
    let mut out = Vec::new();
    for (name, x) in [
        ("flip", Biquandle::flip()),
        ("dihedral3", Biquandle::dihedral3()),
    ] {
        let v = x.check_axioms();
        out.push(check(
            if name == "flip" {
                "flip passes"
            } else {
                "dihedral3 passes"
            },
            v.is_empty(),
            format!("{} violation(s)", v.len()),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(100);
    let mut bad = Vec::new();
    for i in 0..20 {
        let base = if i % 2 == 0 {
            Biquandle::flip()
        } else {
            Biquandle::dihedral3()
        };
        let n = base.size();
        let mut circ = base.circ_table().to_vec();
        let mut star = base.star_table().to_vec();
        let t = if rng.gen() { &mut circ } else { &mut star };
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        t[a][b] = (t[a][b] + rng.gen_range(1..n)) % n;
        let x = Biquandle::new(circ, star).expect("tables in range");
        let v = x.check_axioms();
        if v.is_empty() || !v.iter().all(|w| witness_holds(&x, w)) {
            bad.push(i);
        }
    }
    out.push(check(
        "20 corruptions fail with confirmed witnesses",
        bad.is_empty(),
        format!("bad corruptions: {bad:?}"),
    ));
    out
}

// ---------------------------------------------------------------------------
// 2. Counting invariance

fn c2() -> Vec<Check> {
    let xs = [
        Biquandle::flip(),
        Biquandle::dihedral3(),
        Biquandle::singleton(),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(200);
    let mut bad = None;
    let mut moves = 0;
    for i in 0..200 {
        let d = sample(&mut rng, 5);
        let steps = rng.gen_range(1..=30);
        let (e, log) = walk(&d, steps, 2000 + i, 7);
        moves += log.len();
        if xs
            .iter()
            .any(|x| count_colorings(&d, x) != count_colorings(&e, x))
        {
            bad = Some(format!("{d} vs {e}"));
            break;
        }
    }
    let t = LinkDiagram::parse(TREFOIL).unwrap();
    let brute = common::brute_force_count(&t, &Biquandle::dihedral3());
    let fast = count_colorings(&t, &Biquandle::dihedral3());
    vec![
        check(
            "200 pairs, three biquandles",
            bad.is_none(),
            bad.unwrap_or_else(|| format!("{moves} moves applied")),
        ),
        check(
            "trefoil dihedral3 count",
            brute == 9 && fast == 9,
            format!("enumerated {fast}, brute force {brute}"),
        ),
    ]
}

// ---------------------------------------------------------------------------
// 3. Parity

fn c3() -> Vec<Check> {
    let mut exhaustive = 0;
    let mut bad = None;
    for n in 0..=4 {
        for d in common::all_knot_codes(n) {
            exhaustive += 1;
            if biquandle_parity(&d).unwrap() != gaussian_parity(&d) {
                bad.get_or_insert(d.to_string());
            }
        }
    }
    let mut out = vec![check(
        "bp = gp exhaustively up to 4 chords",
        bad.is_none(),
        bad.unwrap_or_else(|| format!("{exhaustive} codes")),
    )];
    let mut rng = ChaCha8Rng::seed_from_u64(300);
    let random: Vec<LinkDiagram> = (0..500)
        .map(|_| {
            let n = rng.gen_range(0..=8);
            random_virtual_knot(&mut rng, n)
        })
        .collect();
    let bad = first_failure(&random, |d| {
        biquandle_parity(d).unwrap() == gaussian_parity(d)
    });
    out.push(check(
        "bp = gp on 500 random diagrams",
        bad.is_none(),
        bad.map_or("500 diagrams".into(), |d| d.to_string()),
    ));
    let mut checked = 0;
    let mut bad = None;
    for i in 0..120u64 {
        let link = i % 4 == 3;
        let n = rng.gen_range(0..=5);
        let d = if link {
            random_virtual_link(&mut rng, 2, n)
        } else {
            random_virtual_knot(&mut rng, n)
        };
        let sels: &[ParitySelector] = if link {
            &[ParitySelector::Component]
        } else {
            &[ParitySelector::Gaussian, ParitySelector::Biquandle]
        };
        let (_, log) = walk(&d, 20, 3000 + i, 8);
        let mut cur = d;
        for m in &log {
            for &sel in sels {
                checked += 1;
                if !check_parity_under_move(&cur, m, sel).unwrap() {
                    bad.get_or_insert(format!("{cur} --{m}-- {}", sel.name()));
                }
            }
            cur = apply_move(&cur, m).unwrap();
        }
    }
    out.push(check(
        "parity axioms on every generated move",
        bad.is_none(),
        bad.unwrap_or_else(|| format!("{checked} move checks")),
    ));
    out
}

// ---------------------------------------------------------------------------
// 4. Parity bracket

/// Circle count of a two-way smoothing, from semiarc connectivity.
fn circles(d: &LinkDiagram, oriented: &[bool]) -> usize {
    let n = d.num_semiarcs();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut a: usize) -> usize {
        while p[a] != a {
            p[a] = p[p[a]];
            a = p[a];
        }
        a
    }
    let mut join = |a: usize, b: usize| {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        parent[ra] = rb;
    };
    for (v, c) in d.crossing_arcs().iter().enumerate() {
        if oriented[v] {
            join(c.over_in, c.under_out);
            join(c.under_in, c.over_out);
        } else {
            join(c.over_in, c.under_in);
            join(c.over_out, c.under_out);
        }
    }
    (0..n).filter(|&a| find(&mut parent, a) == a).count()
}

fn c4() -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(400);
    let mut bad = None;
    for i in 0..200 {
        let n = rng.gen_range(0..=6);
        let d = random_virtual_knot(&mut rng, n);
        let steps = rng.gen_range(1..=30);
        let (e, _) = walk(&d, steps, 4000 + i, 8);
        let a = parity_bracket(&d, ParitySelector::Gaussian).unwrap();
        let b = parity_bracket(&e, ParitySelector::Gaussian).unwrap();
        if a != b {
            bad = Some(format!("{d}: {a} vs {e}: {b}"));
            break;
        }
    }
    let vt = LinkDiagram::parse("O1+ O2+ U1+ U2+").unwrap();
    let vt_value = parity_bracket(&vt, ParitySelector::Gaussian)
        .unwrap()
        .to_string();
    let t = LinkDiagram::parse(TREFOIL).unwrap();
    let single = (0..8u32)
        .filter(|mask| {
            let st: Vec<bool> = (0..3).map(|v| mask >> v & 1 == 0).collect();
            circles(&t, &st) == 1
        })
        .count();
    let expected = if single % 2 == 1 { "1*(o)" } else { "0" };
    let t_value = parity_bracket(&t, ParitySelector::Gaussian)
        .unwrap()
        .to_string();
    vec![
        check(
            "200 pairs",
            bad.is_none(),
            bad.unwrap_or_else(|| "all equal".into()),
        ),
        check(
            "virtual trefoil",
            vt_value == "1*(a b a b)",
            format!("expected 1*(a b a b), got {vt_value}"),
        ),
        check(
            "classical trefoil",
            t_value == expected && single == 3,
            format!("{single} single-circle states, expected {expected}, got {t_value}"),
        ),
    ]
}

// ---------------------------------------------------------------------------
// 5. R2 confluence

fn c5() -> Vec<Check> {
    let mut memo = HashMap::new();
    let mut graphs = 0;
    let mut bad = None;
    for n in 1..=5 {
        for w in common::double_occurrence_words(n) {
            for mask in 0u32..(1 << (2 * n - 1)) {
                let g = common::cut(&w, mask);
                if g.circles().windows(2).all(|p| p[0].len() <= p[1].len()) {
                    graphs += 1;
                    if common::all_outcomes(&g, &mut memo).len() != 1 {
                        bad.get_or_insert(g.canonical_code());
                    }
                }
            }
        }
    }
    let mut out = vec![check(
        "exhaustive up to 5 chords",
        bad.is_none(),
        bad.unwrap_or_else(|| format!("{graphs} graphs")),
    )];
    let mut rng = ChaCha8Rng::seed_from_u64(500);
    let mut bad = None;
    for _ in 0..1000 {
        let n = rng.gen_range(1..=10usize);
        let mut word: Vec<u32> = (0..n as u32).flat_map(|s| [s, s]).collect();
        for i in (1..word.len()).rev() {
            word.swap(i, rng.gen_range(0..=i));
        }
        let mut mask = 0;
        for _ in 1..rng.gen_range(1..=3u32) {
            mask |= 1 << rng.gen_range(0..2 * n - 1);
        }
        let g: FreeGraph = common::cut(&word, mask);
        if common::all_outcomes(&g, &mut memo).len() != 1 {
            bad.get_or_insert(g.canonical_code());
        }
    }
    out.push(check(
        "1000 random graphs up to 10 chords",
        bad.is_none(),
        bad.unwrap_or_else(|| "one outcome each".into()),
    ));
    out
}

// ---------------------------------------------------------------------------
// 6. Relation verifiers

/// Every relation of the bracket definition and the second-move figures,
/// written out term by term.
fn relations_hold<S: Scalar>(beta: &BracketCoefficients<S>, printed: bool) -> bool {
    use Table::*;
    let x = beta.biquandle();
    let n = x.size();
    let e = |t: Table, p: (usize, usize)| beta.entry(t, p.0, p.1).clone();
    let d = beta.delta().clone();
    let w = beta.w().clone();
    let one = S::one();
    let zero = S::zero();
    for a in 0..n {
        let p = (a, a);
        if d.clone() * e(A, p) + e(B, p) != w
            || w.clone() * (d.clone() * e(D, p) + e(E, p)) != one
            || e(C, p) != zero
            || e(F, p) != zero
        {
            return false;
        }
    }
    for a in 0..n {
        for b in 0..n {
            let p = (a, b);
            let cf = e(C, p) * e(F, p);
            let ok = e(A, p) * e(F, p) == zero
                && e(C, p) * e(D, p) == zero
                && e(B, p) * e(F, p) == zero
                && e(C, p) * e(E, p) == zero
                && e(A, p) * e(D, p) + cf.clone() == one
                && e(B, p) * e(E, p) + cf == one
                && d.clone() * e(A, p) * e(D, p) + e(A, p) * e(E, p) + e(B, p) * e(D, p) == zero
                && e(A, p) * e(E, p) + e(B, p) * e(D, p) + d.clone() * e(B, p) * e(E, p) == zero;
            if !ok {
                return false;
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let p1 = (a, b);
                let p2 = (b, c);
                let p3 = (x.circ(a, b), x.star(c, b));
                let q1 = (a, c);
                let q2 = (x.star(b, a), x.star(c, a));
                let q3 = (x.circ(a, c), x.circ(b, c));
                let l = |f: Table, g: Table, h: Table| e(f, p1) * e(g, p2) * e(h, p3);
                let r = |f: Table, g: Table, h: Table| e(f, q1) * e(g, q2) * e(h, q3);
                let l7 = if printed {
                    e(B, q1) * e(A, p2) * e(C, p3)
                } else {
                    l(B, A, C)
                };
                let l8 = if printed {
                    e(C, q1) * e(B, p2) * e(B, p3)
                } else {
                    l(C, B, B)
                };
                let eqs = [
                    (l(A, A, A) + l(C, C, A), r(A, A, A) + r(A, C, C)),
                    (l(A, B, B) + l(C, B, C), r(B, B, A) + r(C, B, C)),
                    (l(B, A, B) + l(B, C, C), r(B, A, B) + r(C, C, B)),
                    (l(A, C, A) + l(C, A, A), r(C, A, A)),
                    (l(A, A, C), r(A, A, C) + r(A, C, A)),
                    (l(A, C, B), r(B, B, C) + r(C, B, A)),
                    (l(B, C, B) + l7, r(B, A, C)),
                    (l(A, B, C) + l8, r(B, C, A)),
                    (l(C, A, B), r(B, C, B) + r(C, A, B)),
                    (l(C, C, B), r(B, C, C)),
                    (l(A, C, C), r(C, C, A)),
                    (l(C, A, C), r(C, A, C)),
                    (l(B, C, A), zero.clone()),
                    (l(C, B, A), zero.clone()),
                    (l(B, B, C), zero.clone()),
                    (l(C, C, C), zero.clone()),
                    (r(A, B, C), zero.clone()),
                    (r(A, C, B), zero.clone()),
                    (r(C, B, B), zero.clone()),
                    (r(C, C, C), zero.clone()),
                    (
                        l(A, A, B),
                        r(A, B, A) + r(A, A, B) + d.clone() * r(A, B, B) + r(B, B, B),
                    ),
                    (
                        r(B, A, A),
                        l(B, A, A) + l(A, B, A) + d.clone() * l(B, B, A) + l(B, B, B),
                    ),
                ];
                if eqs.iter().any(|(u, v)| u != v) {
                    return false;
                }
            }
        }
    }
    true
}

fn c6() -> Vec<Check> {
    let flip = BracketCoefficients::parity_flip();
    let nor = NorBracket::kauffman(Biquandle::flip(), Z5::new(2))
        .unwrap()
        .to_pbbr();
    let lib_ok = |b: &BracketCoefficients<Z2>, r| verify_pbbr_relations(b, r).is_empty();
    let mut out = vec![
        check(
            "parity flip beta, corrected reading",
            relations_hold(&flip, false) && lib_ok(&flip, Omega3Reading::Corrected),
            format!(
                "oracle {}, verifier {}",
                relations_hold(&flip, false),
                lib_ok(&flip, Omega3Reading::Corrected)
            ),
        ),
        check(
            "parity flip beta, printed reading",
            relations_hold(&flip, true) && lib_ok(&flip, Omega3Reading::Printed),
            format!(
                "oracle {}, verifier {}",
                relations_hold(&flip, true),
                lib_ok(&flip, Omega3Reading::Printed)
            ),
        ),
    ];
    let nor_lib = verify_pbbr_relations(&nor, Omega3Reading::Corrected).is_empty();
    out.push(check(
        "(A,B,0,A^-1,B^-1,0) over Z5",
        relations_hold(&nor, false) && nor_lib,
        format!("oracle {}, verifier {nor_lib}", relations_hold(&nor, false)),
    ));
    let mut rng = ChaCha8Rng::seed_from_u64(600);
    let mut bad = Vec::new();
    for i in 0..20 {
        let t = Table::ALL[rng.gen_range(0..6)];
        let (a, b) = (rng.gen_range(0..2), rng.gen_range(0..2));
        let rejected = if i % 2 == 0 {
            let mut c = flip.clone();
            let v = *c.entry(t, a, b) + Z2::new(1);
            c.set_entry(t, a, b, v);
            !relations_hold(&c, false) && !lib_ok(&c, Omega3Reading::Corrected)
        } else {
            let mut c = nor.clone();
            let v = *c.entry(t, a, b) + Z5::new(rng.gen_range(1..5));
            c.set_entry(t, a, b, v);
            !relations_hold(&c, false)
                && !verify_pbbr_relations(&c, Omega3Reading::Corrected).is_empty()
        };
        if !rejected {
            bad.push(i);
        }
    }
    out.push(check(
        "20 corruptions fail",
        bad.is_empty(),
        format!("accepted: {bad:?}"),
    ));
    out
}

// ---------------------------------------------------------------------------
// 7. pb bracket invariance

fn c7() -> Vec<Check> {
    let flip = BracketCoefficients::parity_flip();
    let kauff = NorBracket::kauffman(Biquandle::dihedral3(), Z5::new(2))
        .unwrap()
        .to_pbbr();
    let mut rng = ChaCha8Rng::seed_from_u64(700);
    let mut bad_flip = None;
    let mut bad_kauff = None;
    for i in 0..100 {
        let d = sample(&mut rng, 5);
        let steps = rng.gen_range(1..=30);
        let (e, _) = walk(&d, steps, 7000 + i, 7);
        if pb_bracket_multiset(&d, &flip) != pb_bracket_multiset(&e, &flip) {
            bad_flip.get_or_insert(format!("{d} vs {e}"));
        }
        if pb_bracket_multiset(&d, &kauff) != pb_bracket_multiset(&e, &kauff) {
            bad_kauff.get_or_insert(format!("{d} vs {e}"));
        }
    }
    vec![
        check(
            "parity flip beta, 100 pairs",
            bad_flip.is_none(),
            bad_flip.unwrap_or_else(|| "all equal".into()),
        ),
        check(
            "Kauffman-type beta over Z5 on dihedral3, 100 pairs",
            bad_kauff.is_none(),
            bad_kauff.unwrap_or_else(|| "all equal".into()),
        ),
    ]
}

// ---------------------------------------------------------------------------
// 8. Reductions

fn substitution_ok<S: Scalar>(d: &LinkDiagram, nor: &NorBracket<S>) -> bool {
    let values = pb_bracket_values(d, &nor.to_pbbr());
    substitute_circle(&values, nor.delta()) == biquandle_bracket_multiset(d, nor)
}

fn c8() -> Vec<Check> {
    let corpus = corpus();
    let nors = [
        NorBracket::kauffman(Biquandle::flip(), Z5::new(2)).unwrap(),
        NorBracket::kauffman(Biquandle::dihedral3(), Z5::new(3)).unwrap(),
    ];
    let single = NorBracket::kauffman(Biquandle::singleton(), Z7::new(3)).unwrap();
    let bad = first_failure(&corpus, |d| {
        nors.iter().all(|n| substitution_ok(d, n)) && substitution_ok(d, &single)
    });
    let flip = BracketCoefficients::parity_flip();
    let knots: Vec<&LinkDiagram> = corpus.iter().filter(|d| d.num_components() == 1).collect();
    let twice = first_failure(knots.iter().copied(), |d| {
        let m = pb_bracket_multiset(d, &flip);
        let pb = parity_bracket(d, ParitySelector::Gaussian)
            .unwrap()
            .to_string();
        m.len() == 2 && m.multiplicity(&pb) == 2
    });
    vec![
        check(
            "circle substitution",
            bad.is_none(),
            bad.map_or(format!("{} diagrams", corpus.len()), |d| d.to_string()),
        ),
        check(
            "parity flip beta gives the parity bracket twice",
            twice.is_none(),
            twice.map_or(format!("{} knots", knots.len()), |d| d.to_string()),
        ),
    ]
}

// ---------------------------------------------------------------------------
// 9. Kauffman consistency

fn kauffman_ok<S: Scalar>(corpus: &[LinkDiagram], a: S) -> Option<String> {
    let nor = NorBracket::kauffman(Biquandle::singleton(), a.clone()).unwrap();
    first_failure(corpus, |d| {
        let f = vec![0; d.num_semiarcs()];
        biquandle_bracket_value(d, &f, &nor) == kauffman_oracle(d, &a).unwrap()
    })
    .map(|d| d.to_string())
}

fn c9() -> Vec<Check> {
    let corpus = corpus();
    let done = format!("{} diagrams", corpus.len());
    let z5 = kauffman_ok(&corpus, Z5::new(2));
    let z7 = kauffman_ok(&corpus, Z7::new(3));
    let lz = kauffman_ok(&corpus, LaurentZ::var());
    vec![
        check("Z5", z5.is_none(), z5.unwrap_or_else(|| done.clone())),
        check("Z7", z7.is_none(), z7.unwrap_or_else(|| done.clone())),
        check("LaurentZ", lz.is_none(), lz.unwrap_or(done)),
    ]
}

// ---------------------------------------------------------------------------
// 10. Realizability

fn c10() -> Vec<Check> {
    let t = LinkDiagram::parse(TREFOIL).unwrap();
    let mut realizable_1212 = Vec::new();
    for roles in [[Role::Over, Role::Under], [Role::Under, Role::Over]] {
        for second in [false, true] {
            for s1 in [Sign::Pos, Sign::Neg] {
                for s2 in [Sign::Pos, Sign::Neg] {
                    let r2 = if second { roles[0] } else { roles[1] };
                    let r2b = if r2 == Role::Over {
                        Role::Under
                    } else {
                        Role::Over
                    };
                    let r1b = if roles[0] == Role::Over {
                        Role::Under
                    } else {
                        Role::Over
                    };
                    let code = format!(
                        "{}1{} {}2{} {}1{} {}2{}",
                        letter(roles[0]),
                        sym(s1),
                        letter(r2),
                        sym(s2),
                        letter(r1b),
                        sym(s1),
                        letter(r2b),
                        sym(s2)
                    );
                    let d = LinkDiagram::parse(&code).unwrap();
                    if classical_realizability(&d) {
                        realizable_1212.push(code);
                    }
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(1000);
    let mut moves = 0;
    let mut bad = None;
    for i in 0..150u64 {
        let k = if i % 3 == 2 { 2 } else { 1 };
        let d = common::small_planar(&mut rng, k, 6);
        if !classical_realizability(&d) {
            bad.get_or_insert(format!("{d} not realizable"));
            continue;
        }
        let opts = WalkOptions {
            steps: 15,
            seed: 10_000 + i,
            max_crossings: Some(6),
            planar_r2: true,
        };
        let (_, log) = random_walk(&d, &opts);
        let mut cur = d;
        for m in &log {
            cur = apply_move(&cur, m).unwrap();
            moves += 1;
            if !classical_realizability(&cur) {
                bad.get_or_insert(format!("{cur} after {m}"));
            }
        }
    }
    vec![
        check(
            "trefoil realizable",
            classical_realizability(&t),
            "true expected",
        ),
        check(
            "two-chord linked codes not realizable",
            realizable_1212.is_empty(),
            format!("16 variants, realizable: {realizable_1212:?}"),
        ),
        check(
            "planar moves keep realizability",
            bad.is_none(),
            bad.unwrap_or_else(|| format!("{moves} moves on 150 planar diagrams")),
        ),
    ]
}

fn letter(r: Role) -> char {
    match r {
        Role::Over => 'O',
        Role::Under => 'U',
    }
}

fn sym(s: Sign) -> char {
    match s {
        Sign::Pos => '+',
        Sign::Neg => '-',
    }
}
