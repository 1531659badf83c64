#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap};

use pbbracket::freegraph::FreeGraph;
use pbbracket::gauss::{LinkDiagram, Role, Sign};
use pbbracket::Biquandle;
use rand::Rng;

/// Gauss data of a random generic planar curve system: closed polygons with
/// random vertices, crossings found by segment intersection, over/under
/// chosen at random. Realizable by construction.
pub fn planar_diagram<R: Rng>(rng: &mut R, components: usize, vertices: usize) -> LinkDiagram {
    let polys: Vec<Vec<(f64, f64)>> = (0..components)
        .map(|_| {
            (0..vertices)
                .map(|_| (rng.gen::<f64>(), rng.gen::<f64>()))
                .collect()
        })
        .collect();
    // segment id: (component, index); events: (component, position along curve, crossing id, is_first_strand)
    let segs: Vec<(usize, usize, (f64, f64), (f64, f64))> = polys
        .iter()
        .enumerate()
        .flat_map(|(c, p)| (0..p.len()).map(move |i| (c, i, p[i], p[(i + 1) % p.len()])))
        .collect();
    let mut events: Vec<Vec<(f64, usize, usize)>> = vec![Vec::new(); components];
    let mut dirs: Vec<[(f64, f64); 2]> = Vec::new();
    for s in 0..segs.len() {
        for t in (s + 1)..segs.len() {
            let (c1, i1, a1, b1) = segs[s];
            let (c2, i2, a2, b2) = segs[t];
            if c1 == c2 {
                let n = polys[c1].len();
                if (i1 + 1) % n == i2 || (i2 + 1) % n == i1 {
                    continue;
                }
            }
            let d1 = (b1.0 - a1.0, b1.1 - a1.1);
            let d2 = (b2.0 - a2.0, b2.1 - a2.1);
            let den = d1.0 * d2.1 - d1.1 * d2.0;
            if den.abs() < 1e-12 {
                continue;
            }
            let w = (a2.0 - a1.0, a2.1 - a1.1);
            let u = (w.0 * d2.1 - w.1 * d2.0) / den;
            let v = (w.0 * d1.1 - w.1 * d1.0) / den;
            if u > 0.0 && u < 1.0 && v > 0.0 && v < 1.0 {
                let id = dirs.len();
                dirs.push([d1, d2]);
                events[c1].push((i1 as f64 + u, id, 0));
                events[c2].push((i2 as f64 + v, id, 1));
            }
        }
    }
    let over_strand: Vec<usize> = (0..dirs.len()).map(|_| rng.gen_range(0..2)).collect();
    let mut signs = BTreeMap::new();
    for (id, d) in dirs.iter().enumerate() {
        let (o, u) = (d[over_strand[id]], d[1 - over_strand[id]]);
        let cross = o.0 * u.1 - o.1 * u.0;
        signs.insert(
            (id + 1).to_string(),
            if cross > 0.0 { Sign::Pos } else { Sign::Neg },
        );
    }
    let comps = events
        .into_iter()
        .map(|mut ev| {
            ev.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
            ev.into_iter()
                .map(|(_, id, strand)| {
                    let role = if strand == over_strand[id] {
                        Role::Over
                    } else {
                        Role::Under
                    };
                    ((id + 1).to_string(), role)
                })
                .collect()
        })
        .collect();
    LinkDiagram::from_parts(comps, &signs).unwrap().relabeled()
}

/// Planar diagram with at most `max` crossings (retries until one fits).
pub fn small_planar<R: Rng>(rng: &mut R, components: usize, max: usize) -> LinkDiagram {
    loop {
        let v = rng.gen_range(3..6);
        let d = planar_diagram(rng, components, v);
        if d.num_crossings() <= max {
            return d;
        }
    }
}

/// Double-occurrence words on `n` symbols with symbols numbered in order of
/// first appearance.
pub fn double_occurrence_words(n: usize) -> Vec<Vec<u32>> {
    fn go(word: &mut Vec<u32>, count: &mut Vec<u8>, next: u32, n: usize, out: &mut Vec<Vec<u32>>) {
        if word.len() == 2 * n {
            out.push(word.clone());
            return;
        }
        for s in 0..next {
            if count[s as usize] == 1 {
                count[s as usize] = 2;
                word.push(s);
                go(word, count, next, n, out);
                word.pop();
                count[s as usize] = 1;
            }
        }
        if (next as usize) < n {
            count[next as usize] = 1;
            word.push(next);
            go(word, count, next + 1, n, out);
            word.pop();
            count[next as usize] = 0;
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![0; n], 0, n, &mut out);
    out
}

/// Every 1-component Gauss code with `n` crossings, up to relabeling: each
/// double-occurrence word with every choice of which passage is over and
/// every sign vector.
pub fn all_knot_codes(n: usize) -> Vec<LinkDiagram> {
    let mut out = Vec::new();
    for w in double_occurrence_words(n) {
        for roles in 0u32..(1 << n) {
            for signs in 0u32..(1 << n) {
                let mut seen = vec![false; n];
                let word: Vec<(String, Role)> = w
                    .iter()
                    .map(|&s| {
                        let first = !seen[s as usize];
                        seen[s as usize] = true;
                        let over = (roles >> s & 1 == 0) == first;
                        let role = if over { Role::Over } else { Role::Under };
                        ((s + 1).to_string(), role)
                    })
                    .collect();
                let sg: BTreeMap<String, Sign> = (0..n as u32)
                    .map(|s| {
                        let v = if signs >> s & 1 == 0 {
                            Sign::Pos
                        } else {
                            Sign::Neg
                        };
                        ((s + 1).to_string(), v)
                    })
                    .collect();
                out.push(LinkDiagram::from_parts(vec![word], &sg).unwrap());
            }
        }
    }
    out
}

/// Counts assignments in `X^(semiarcs)` satisfying the crossing rule, read
/// directly off the sideways map `(x, y) ↦ (y∗x, x∘y)`.
pub fn brute_force_count(d: &LinkDiagram, x: &Biquandle) -> usize {
    let m = x.size();
    let k = d.num_semiarcs();
    let arcs = d.crossing_arcs();
    let mut f = vec![0usize; k];
    let mut count = 0;
    loop {
        let ok = arcs.iter().enumerate().all(|(v, a)| match d.sign(v) {
            Sign::Pos => {
                let (p, q) = (f[a.over_in], f[a.under_out]);
                f[a.under_in] == x.star(q, p) && f[a.over_out] == x.circ(p, q)
            }
            Sign::Neg => {
                let (p, q) = (f[a.over_out], f[a.under_in]);
                f[a.under_out] == x.star(q, p) && f[a.over_in] == x.circ(p, q)
            }
        });
        count += usize::from(ok);
        let mut i = 0;
        while i < k {
            f[i] += 1;
            if f[i] < m {
                break;
            }
            f[i] = 0;
            i += 1;
        }
        if i == k {
            return count;
        }
    }
}

pub type Outcome = (String, usize);
pub type Memo = HashMap<(Vec<Vec<u32>>, usize), BTreeSet<Outcome>>;

/// The circles with symbols renumbered by first appearance.
pub fn raw_key(g: &FreeGraph) -> (Vec<Vec<u32>>, usize) {
    let mut map = HashMap::new();
    let circles = g
        .circles()
        .iter()
        .map(|c| {
            c.iter()
                .map(|s| {
                    let k = map.len() as u32;
                    *map.entry(*s).or_insert(k)
                })
                .collect()
        })
        .collect();
    (circles, g.free_circles())
}

/// Canonical codes of every irreducible graph reachable by some removal
/// order.
pub fn all_outcomes(g: &FreeGraph, memo: &mut Memo) -> BTreeSet<Outcome> {
    let key = raw_key(g);
    if let Some(r) = memo.get(&key) {
        return r.clone();
    }
    let pairs = g.removable_pairs();
    let mut out = BTreeSet::new();
    if pairs.is_empty() {
        out.insert((g.canonical_code(), g.free_circles()));
    }
    for (u, v) in pairs {
        out.extend(all_outcomes(&g.remove_pair(u, v), memo));
    }
    memo.insert(key, out.clone());
    out
}

/// Splits a word into consecutive nonempty circles at the cut positions
/// selected by `mask`.
pub fn cut(word: &[u32], mask: u32) -> FreeGraph {
    let mut circles = vec![Vec::new()];
    for (i, &s) in word.iter().enumerate() {
        if i > 0 && mask >> (i - 1) & 1 == 1 {
            circles.push(Vec::new());
        }
        circles.last_mut().unwrap().push(s);
    }
    FreeGraph::new(circles, 0).unwrap()
}

pub fn assert_confluent(g: &FreeGraph, memo: &mut Memo) {
    let outs = all_outcomes(g, memo);
    assert_eq!(outs.len(), 1, "{g:?} reduces to {outs:?}");
    let r = g.r2_reduce();
    assert_eq!(outs.first(), Some(&(r.canonical_code(), r.free_circles())));
}
