use std::fmt;
use std::fs;
use std::path::Path;

use pbbracket::biquandle::{count_colorings, enumerate_colorings, Biquandle};
use pbbracket::brackets::{
    biquandle_bracket_multiset, builtin_biquandle, compare_multisets, parity_bracket,
    pb_bracket_multiset, verify_nor_relations, verify_pbbr_relations, CoefficientFile,
    InvariantMultiset,
};
use pbbracket::gauss::{carrier_genus, random_walk, writhe as diagram_writhe, WalkOptions};
use pbbracket::parity::{parity as parity_of, ParitySelector};
use pbbracket::relations::{Omega3Reading, RelationViolation, Table};
use pbbracket::search::{search_coefficients, SearchFix};
use pbbracket::{with_ring, LinkDiagram, RingDescriptor, Scalar};
use serde_json::{json, Value};

use crate::ParityFlags;

#[derive(Debug)]
pub struct CliError(String);

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

fn fail(context: &str, e: impl fmt::Display) -> CliError {
    CliError(format!("{context}: {e}"))
}

/// Text lines, the JSON form, and whether a check found problems.
pub struct Report {
    pub lines: Vec<String>,
    pub json: Value,
    pub findings: bool,
}

impl Report {
    fn new(lines: Vec<String>, json: Value) -> Self {
        Report {
            lines,
            json,
            findings: false,
        }
    }
}

fn read(path: &str) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| fail(path, e))
}

fn load_diagram(path: &str) -> Result<LinkDiagram, CliError> {
    LinkDiagram::parse(&read(path)?).map_err(|e| fail(path, e))
}

/// A builtin name, or a biquandle file relative to `base`.
fn load_biquandle(name: &str, base: Option<&Path>) -> Result<Biquandle, CliError> {
    if let Some(x) = builtin_biquandle(name) {
        return Ok(x);
    }
    let path = match base {
        Some(dir) if Path::new(name).is_relative() => dir.join(name),
        _ => Path::new(name).to_path_buf(),
    };
    let shown = path.display().to_string();
    let text = fs::read_to_string(&path).map_err(|e| fail(&shown, e))?;
    Biquandle::parse(&text).map_err(|e| fail(&shown, e))
}

struct Coeffs {
    file: CoefficientFile,
    x: Biquandle,
    ring: RingDescriptor,
}

fn load_coeffs(path: &str) -> Result<Coeffs, CliError> {
    let file = CoefficientFile::parse(&read(path)?).map_err(|e| fail(path, e))?;
    let ring = RingDescriptor::parse(&file.ring).map_err(|e| fail(path, e))?;
    let x = load_biquandle(&file.x_ref, Path::new(path).parent())?;
    Ok(Coeffs { file, x, ring })
}

fn ring_arg(ring: Option<&str>) -> Result<RingDescriptor, CliError> {
    let r = ring.ok_or_else(|| CliError("--ring is required".into()))?;
    RingDescriptor::parse(r).map_err(|e| fail("--ring", e))
}

fn selector(sel: ParityFlags, d: &LinkDiagram) -> ParitySelector {
    if sel.comp {
        ParitySelector::Component
    } else if sel.bp {
        ParitySelector::Biquandle
    } else if sel.gp || d.num_components() != 2 {
        ParitySelector::Gaussian
    } else {
        ParitySelector::Component
    }
}

fn multiset_report(m: &InvariantMultiset) -> Report {
    let values: Vec<Value> = m
        .counts()
        .iter()
        .map(|(v, k)| json!({"value": v, "multiplicity": k}))
        .collect();
    Report::new(
        m.to_string().lines().map(str::to_string).collect(),
        json!({"ring": m.ring(), "values": values, "polynomial": m.u_polynomial()}),
    )
}

fn violations_report(context: &str, v: &[RelationViolation]) -> Report {
    let mut lines: Vec<String> = v.iter().map(|r| r.to_string()).collect();
    if v.is_empty() {
        lines.push(format!("ok: {context}"));
    } else {
        lines.push(format!("FAILED: {} violated relation instance(s)", v.len()));
    }
    let list: Vec<Value> = v
        .iter()
        .map(|r| json!({"relation": r.id, "witness": r.witness}))
        .collect();
    Report {
        lines,
        json: json!({"ok": v.is_empty(), "violations": list}),
        findings: !v.is_empty(),
    }
}

pub fn parse(file: &str) -> Result<Report, CliError> {
    let d = load_diagram(file)?;
    Ok(Report::new(
        vec![d.to_string()],
        json!({
            "code": d.to_string(),
            "components": d.num_components(),
            "crossings": d.num_crossings(),
        }),
    ))
}

pub fn writhe(file: &str) -> Result<Report, CliError> {
    let w = diagram_writhe(&load_diagram(file)?);
    Ok(Report::new(vec![w.to_string()], json!({ "writhe": w })))
}

pub fn parity(file: &str, sel: ParityFlags) -> Result<Report, CliError> {
    let d = load_diagram(file)?;
    let s = selector(sel, &d);
    let p = parity_of(&d, s).map_err(|e| fail(file, e))?;
    let bits: Vec<Value> = p
        .labelled(&d)
        .into_iter()
        .map(|(l, b)| json!({"label": l, "parity": b}))
        .collect();
    let text = p.display(&d).to_string();
    Ok(Report::new(
        vec![text],
        json!({"selector": s.name(), "crossings": bits}),
    ))
}

pub fn realizable(file: &str) -> Result<Report, CliError> {
    let d = load_diagram(file)?;
    let g = carrier_genus(&d);
    Ok(Report::new(
        vec![(g == 0).to_string()],
        json!({"realizable": g == 0, "genus": g}),
    ))
}

pub fn perturb(
    file: &str,
    steps: usize,
    seed: u64,
    max_crossings: Option<usize>,
    planar: bool,
) -> Result<Report, CliError> {
    let d = load_diagram(file)?;
    let mut o = WalkOptions::new(steps, seed);
    o.max_crossings = max_crossings;
    o.planar_r2 = planar;
    let (e, moves) = random_walk(&d, &o);
    let mut lines = vec![format!("# seed={seed} steps={steps}")];
    lines.extend(moves.iter().map(|m| format!("# {m}")));
    lines.push(e.to_string());
    let mv: Vec<String> = moves.iter().map(|m| m.to_string()).collect();
    Ok(Report::new(
        lines,
        json!({"seed": seed, "steps": steps, "moves": mv, "code": e.to_string()}),
    ))
}

pub fn biquandle_check(file: &str) -> Result<Report, CliError> {
    let x = Biquandle::parse(&read(file)?).map_err(|e| fail(file, e))?;
    let v = x.check_axioms();
    let mut lines: Vec<String> = v.iter().map(|a| a.to_string()).collect();
    if v.is_empty() {
        lines.push(format!("ok: biquandle of size {}", x.size()));
    } else {
        lines.push(format!("FAILED: {} axiom violation(s)", v.len()));
    }
    let list: Vec<String> = v.iter().map(|a| a.to_string()).collect();
    Ok(Report {
        lines,
        json: json!({"ok": v.is_empty(), "size": x.size(), "violations": list}),
        findings: !v.is_empty(),
    })
}

pub fn colorings(file: &str, x_ref: &str, list: bool) -> Result<Report, CliError> {
    let d = load_diagram(file)?;
    let x = load_biquandle(x_ref, None)?;
    if !list {
        let n = count_colorings(&d, &x);
        return Ok(Report::new(vec![n.to_string()], json!({ "count": n })));
    }
    let cols = enumerate_colorings(&d, &x);
    let mut lines = vec![cols.len().to_string()];
    lines.extend(cols.iter().map(|f| {
        f.iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    }));
    Ok(Report::new(
        lines,
        json!({"count": cols.len(), "colorings": cols}),
    ))
}

pub fn paritybracket(file: &str, sel: ParityFlags) -> Result<Report, CliError> {
    let d = load_diagram(file)?;
    let s = selector(sel, &d);
    let p = parity_bracket(&d, s)
        .map_err(|e| fail(file, e))?
        .to_string();
    Ok(Report::new(
        vec![p.clone()],
        json!({"selector": s.name(), "bracket": p}),
    ))
}

fn nor_multiset<R: Scalar>(
    d: &LinkDiagram,
    c: &Coeffs,
    path: &str,
) -> Result<InvariantMultiset, CliError> {
    let nor = c.file.nor::<R>(c.x.clone()).map_err(|e| fail(path, e))?;
    Ok(biquandle_bracket_multiset(d, &nor))
}

fn pb_multiset<R: Scalar>(
    d: &LinkDiagram,
    c: &Coeffs,
    path: &str,
) -> Result<InvariantMultiset, CliError> {
    let beta = c
        .file
        .coefficients::<R>(c.x.clone())
        .map_err(|e| fail(path, e))?;
    Ok(pb_bracket_multiset(d, &beta))
}

/// Flattens the result of a [`with_ring!`] dispatch.
fn dispatch<T>(
    path: &str,
    r: Result<Result<T, CliError>, pbbracket::algebra::AlgebraError>,
) -> Result<T, CliError> {
    r.map_err(|e| fail(path, e))?
}

pub fn nor_bracket(file: &str, coeffs: &str, poly: bool) -> Result<Report, CliError> {
    let d = load_diagram(file)?;
    let c = load_coeffs(coeffs)?;
    let m = dispatch(
        coeffs,
        with_ring!(c.ring, R => nor_multiset::<R>(&d, &c, coeffs)),
    )?;
    let mut r = multiset_report(&m);
    if poly {
        r.lines = vec![m.u_polynomial()];
    }
    Ok(r)
}

pub fn pbracket(file: &str, coeffs: &str) -> Result<Report, CliError> {
    let d = load_diagram(file)?;
    let c = load_coeffs(coeffs)?;
    let m = dispatch(
        coeffs,
        with_ring!(c.ring, R => pb_multiset::<R>(&d, &c, coeffs)),
    )?;
    Ok(multiset_report(&m))
}

fn verify_typed<R: Scalar>(
    c: &Coeffs,
    path: &str,
    strict: bool,
    nor: bool,
) -> Result<Vec<RelationViolation>, CliError> {
    if nor {
        let n = c.file.nor::<R>(c.x.clone()).map_err(|e| fail(path, e))?;
        return Ok(verify_nor_relations(&n));
    }
    let beta = c
        .file
        .coefficients::<R>(c.x.clone())
        .map_err(|e| fail(path, e))?;
    let reading = if strict {
        Omega3Reading::Printed
    } else {
        Omega3Reading::Corrected
    };
    Ok(verify_pbbr_relations(&beta, reading))
}

pub fn verify_coeffs(file: &str, strict: bool, nor: bool) -> Result<Report, CliError> {
    let c = load_coeffs(file)?;
    let v = dispatch(
        file,
        with_ring!(c.ring, R => verify_typed::<R>(&c, file, strict, nor)),
    )?;
    let what = if nor {
        "scalar bracket relations hold"
    } else {
        "all relations hold"
    };
    Ok(violations_report(what, &v))
}

fn parse_table(s: &str) -> Result<Table, CliError> {
    Table::ALL
        .iter()
        .copied()
        .find(|t| t.name().to_string() == s)
        .ok_or_else(|| CliError(format!("--fix: unknown table `{s}`")))
}

fn parse_elem<R: Scalar>(what: &str, s: &str) -> Result<R, CliError> {
    R::parse_elem(s).map_err(|e| fail(what, e))
}

fn search_typed<R: Scalar>(
    x: &Biquandle,
    x_ref: &str,
    delta: Option<&str>,
    w: Option<&str>,
    fix: &[String],
    budget: u64,
    limit: Option<usize>,
) -> Result<Report, CliError> {
    let mut f = SearchFix::<R> {
        delta: delta.map(|s| parse_elem("--delta", s)).transpose()?,
        w: w.map(|s| parse_elem("--w", s)).transpose()?,
        entries: Vec::new(),
    };
    for item in fix {
        let (lhs, v) = item
            .split_once('=')
            .ok_or_else(|| CliError(format!("--fix: expected T:x:y=value, got `{item}`")))?;
        let v: R = parse_elem("--fix", v.trim())?;
        let parts: Vec<&str> = lhs.trim().split(':').collect();
        let t = parse_table(parts[0])?;
        match parts.len() {
            1 => f = f.fill(t, x.size(), v),
            3 => {
                let idx = |s: &str| {
                    s.parse::<usize>()
                        .map_err(|_| CliError(format!("--fix: bad index `{s}`")))
                };
                f.entries.push((t, idx(parts[1])?, idx(parts[2])?, v));
            }
            _ => {
                return Err(CliError(format!(
                    "--fix: expected T:x:y=value, got `{item}`"
                )))
            }
        }
    }
    let sols = search_coefficients(x, &f, budget).map_err(|e| fail("search-coeffs", e))?;
    let shown = limit.unwrap_or(sols.len()).min(sols.len());
    let mut lines = vec![format!(
        "# biquandle={x_ref} ring={} solutions={}",
        R::ring_name(),
        sols.len()
    )];
    let mut list = Vec::new();
    for b in &sols[..shown] {
        lines.push(String::new());
        let text = b.to_file_text(x_ref);
        lines.extend(text.lines().map(str::to_string));
        let tables: serde_json::Map<String, Value> = Table::ALL
            .iter()
            .map(|t| {
                let g: Vec<Vec<String>> = b
                    .table(*t)
                    .iter()
                    .map(|row| row.iter().map(|v| v.to_string()).collect())
                    .collect();
                (t.name().to_string(), json!(g))
            })
            .collect();
        list.push(
            json!({"delta": b.delta().to_string(), "w": b.w().to_string(), "tables": tables}),
        );
    }
    Ok(Report::new(
        lines,
        json!({"ring": R::ring_name(), "count": sols.len(), "solutions": list}),
    ))
}

#[allow(clippy::too_many_arguments)]
pub fn search_coeffs(
    ring: Option<&str>,
    x_ref: &str,
    delta: Option<&str>,
    w: Option<&str>,
    fix: &[String],
    budget: u64,
    limit: Option<usize>,
) -> Result<Report, CliError> {
    let ring = ring_arg(ring)?;
    let x = load_biquandle(x_ref, None)?;
    dispatch(
        "--ring",
        with_ring!(ring, R => search_typed::<R>(&x, x_ref, delta, w, fix, budget, limit)),
    )
}

fn compare_typed<R: Scalar>(a: &str, b: &str) -> Result<bool, CliError> {
    let ma = InvariantMultiset::parse::<R>(&read(a)?).map_err(|e| fail(a, e))?;
    let mb = InvariantMultiset::parse::<R>(&read(b)?).map_err(|e| fail(b, e))?;
    compare_multisets(&ma, &mb).map_err(|e| fail("compare", e))
}

pub fn compare(ring: Option<&str>, a: &str, b: &str) -> Result<Report, CliError> {
    let ring = ring_arg(ring)?;
    let eq = dispatch("--ring", with_ring!(ring, R => compare_typed::<R>(a, b)))?;
    Ok(Report {
        lines: vec![if eq { "equal" } else { "different" }.to_string()],
        json: json!({ "equal": eq }),
        findings: !eq,
    })
}

pub struct WalkPlan {
    pub samples: usize,
    pub steps: usize,
    pub seed: u64,
    pub max_crossings: usize,
}

pub fn equiv_test(
    file: &str,
    coeffs: Option<&str>,
    nor: bool,
    sel: ParityFlags,
    plan: WalkPlan,
) -> Result<Report, CliError> {
    let d = load_diagram(file)?;
    let c = coeffs.map(load_coeffs).transpose()?;
    let s = selector(sel, &d);
    let (name, eval): (&str, Box<dyn Fn(&LinkDiagram) -> Result<String, CliError>>) =
        match (&c, coeffs) {
            (Some(c), Some(path)) => {
                let ring = c.ring;
                if nor {
                    (
                        "nor-bracket",
                        Box::new(move |e: &LinkDiagram| {
                            dispatch(path, with_ring!(ring, R => nor_multiset::<R>(e, c, path)))
                                .map(|m| m.to_string())
                        }),
                    )
                } else {
                    (
                        "pbracket",
                        Box::new(move |e: &LinkDiagram| {
                            dispatch(path, with_ring!(ring, R => pb_multiset::<R>(e, c, path)))
                                .map(|m| m.to_string())
                        }),
                    )
                }
            }
            _ => (
                "paritybracket",
                Box::new(move |e: &LinkDiagram| {
                    parity_bracket(e, s)
                        .map(|p| p.to_string())
                        .map_err(|err| fail(file, err))
                }),
            ),
        };
    let base = eval(&d)?;
    let mut lines = vec![format!(
        "# seed={} samples={} steps={} max_crossings={} invariant={name}",
        plan.seed, plan.samples, plan.steps, plan.max_crossings
    )];
    let mut results = Vec::new();
    let mut differ = 0;
    for i in 0..plan.samples {
        let seed = plan.seed.wrapping_add(i as u64);
        let mut o = WalkOptions::new(plan.steps, seed);
        o.max_crossings = Some(plan.max_crossings.max(d.num_crossings()));
        let (e, _) = random_walk(&d, &o);
        let same = eval(&e)? == base;
        if !same {
            differ += 1;
        }
        lines.push(format!(
            "sample {i} seed={seed} crossings={}: {}",
            e.num_crossings(),
            if same { "equal" } else { "different" }
        ));
        results.push(json!({"seed": seed, "code": e.to_string(), "equal": same}));
    }
    lines.push(if differ == 0 {
        format!("ok: all {} samples equal", plan.samples)
    } else {
        format!("FAILED: {differ} of {} samples differ", plan.samples)
    });
    Ok(Report {
        lines,
        json: json!({
            "seed": plan.seed,
            "invariant": name,
            "samples": results,
            "all_equal": differ == 0,
        }),
        findings: differ > 0,
    })
}
