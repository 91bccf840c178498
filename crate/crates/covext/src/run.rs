//! Dispatches a scenario to the core library and collects facts.

use std::collections::BTreeMap;

use covext_core::braid::{self, FiberMode, HomSearchConstraints};
use covext_core::coset::{self, DEFAULT_COSET_CAP};
use covext_core::extend::{self, ExtendError};
use covext_core::hartogs::{self, HartogsError, HartogsParams, LeviSignature};
use covext_core::perm::{self, ClosureOrder};
use covext_core::slice::{self, BiPoly, CoverSlice, SliceError, SliceMonodromy, SliceOptions};
use covext_core::{
    Alphabet, CPoly, Complex64, ExtensionProblem, InclusionMap, MonodromyRep, Permutation,
    Presentation, Word,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use crate::report::Report;
use crate::scenario::{
    case_label, BraidPayload, ExtensionPayload, FiberModeSpec, HartogsPayload, Payload,
    RepSource, Scenario, SchemaError, SheetSelector, SlicePayload, Tolerances, C,
};

/// Default distance below which two function values on a fiber coincide.
pub const DEFAULT_SEPARATION_TOL: f64 = 1e-8;
/// Default zero band for Levi eigenvalues.
pub const DEFAULT_LEVI_TOL: f64 = 1e-12;
/// Largest number of tuples an exhaustive candidate search may visit.
pub const CANDIDATE_SEARCH_LIMIT: usize = 1_000_000;
const CLOSURE_CAP: usize = 1_000_000;

#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions {
    /// Include coset tables and lasso geometry in the report details.
    pub debug_tables: bool,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Schema(#[from] SchemaError),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("computation failed: {0}")]
    Computation(String),
    #[error("{0}")]
    Io(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Schema(_) => 2,
            RunError::Numeric(_) => 3,
            RunError::Computation(_) | RunError::Io(_) => 1,
        }
    }
}

impl From<SliceError> for RunError {
    fn from(e: SliceError) -> Self {
        match e {
            SliceError::ZeroDegree | SliceError::NotMonic | SliceError::NoSuchBranchPoint(_) => {
                RunError::Computation(e.to_string())
            }
            _ => RunError::Numeric(e.to_string()),
        }
    }
}

fn comp(e: impl std::fmt::Display) -> RunError {
    RunError::Computation(e.to_string())
}

/// Parses a scenario file's text and runs it.
pub fn run_text(text: &str, opts: RunOptions) -> Result<Report, RunError> {
    let s = Scenario::from_json(text)?;
    run(&s, opts)
}

pub fn run(s: &Scenario, opts: RunOptions) -> Result<Report, RunError> {
    let mut facts = BTreeMap::new();
    let details = match &s.payload {
        Payload::Extension(p) => run_extension(p, &s.tolerances, opts, &mut facts)?,
        Payload::SliceMonodromy(p) => run_slice(p, &s.tolerances, opts, &mut facts, "payload")?.0,
        Payload::BraidSearch(p) => run_braid(p, &mut facts)?,
        Payload::HartogsCheck(p) => run_hartogs(p, s.seed, &s.tolerances, &mut facts)?,
    };
    Ok(Report::new(s.clone(), facts, details))
}

// ---------------------------------------------------------------- wire forms

fn cx(c: C) -> Complex64 {
    Complex64::new(c[0], c[1])
}

fn cx_json(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn cpoly(coeffs: &[C]) -> CPoly {
    CPoly::new(coeffs.iter().copied().map(cx).collect())
}

fn cpoly_json(p: &CPoly) -> Value {
    Value::Array(p.coeffs().iter().copied().map(cx_json).collect())
}

fn perm_from_one_line(v: &[usize], path: &str) -> Result<Permutation, SchemaError> {
    if v.contains(&0) {
        return Err(SchemaError::new(path, "points are 1-based"));
    }
    Permutation::new(v.iter().map(|x| x - 1).collect()).map_err(|e| SchemaError::new(path, e))
}

fn perm_json(p: &Permutation) -> Value {
    json!({
        "one_line": p.images().iter().map(|x| x + 1).collect::<Vec<_>>(),
        "cycles": p.cycle_notation(),
    })
}

fn cycles(ps: &[Permutation]) -> Value {
    Value::Array(ps.iter().map(|p| json!(p.cycle_notation())).collect())
}

fn one_based(v: &[usize]) -> Value {
    json!(v.iter().map(|x| x + 1).collect::<Vec<_>>())
}

fn rep_table(rep: &MonodromyRep) -> Value {
    let alphabet = rep.presentation().alphabet();
    let rows: Vec<Value> = rep
        .images()
        .iter()
        .enumerate()
        .map(|(g, p)| {
            json!({
                "generator": alphabet.name(g),
                "one_line": one_based(p.images()),
                "cycles": p.cycle_notation(),
                "cycle_type": p.cycle_type(),
            })
        })
        .collect();
    Value::Array(rows)
}

fn closure_json(degree: usize, gens: &[Permutation]) -> Result<Value, RunError> {
    Ok(match perm::closure_order(degree, gens, CLOSURE_CAP).map_err(comp)? {
        ClosureOrder::Order(n) => json!(n),
        ClosureOrder::Exceeded => Value::Null,
    })
}

fn presentation(spec: &crate::scenario::PresentationSpec, path: &str) -> Result<Presentation, SchemaError> {
    Presentation::parse(&spec.generators, &spec.relators).map_err(|e| SchemaError::new(path, e))
}

fn slice_options(t: &Tolerances) -> SliceOptions {
    let mut o = SliceOptions::default();
    let set = |slot: &mut f64, v: Option<f64>| {
        if let Some(v) = v {
            *slot = v;
        }
    };
    set(&mut o.match_tol, t.match_tol);
    set(&mut o.dedup_tol, t.dedup_tol);
    set(&mut o.radius_factor, t.radius_factor);
    set(&mut o.max_step, t.max_step);
    set(&mut o.root_tol, t.root_tol);
    set(&mut o.interp_tol, t.interp_tol);
    o
}

// ---------------------------------------------------------------- extension

fn run_extension(
    p: &ExtensionPayload,
    tol: &Tolerances,
    opts: RunOptions,
    facts: &mut BTreeMap<String, Value>,
) -> Result<Value, RunError> {
    let g0 = presentation(&p.g0, "payload.g0")?;
    let g1 = presentation(&p.g1, "payload.g1")?;
    let pairs: Vec<(&String, &String)> = p.inclusion.iter().collect();
    let inclusion = InclusionMap::parse(g0.alphabet(), g1.alphabet(), &pairs)
        .map_err(|e| SchemaError::new("payload.inclusion", e))?;
    let mut details = Map::new();
    let rho0 = match &p.rho0 {
        RepSource::Images(images) => {
            let perms = images
                .iter()
                .enumerate()
                .map(|(i, v)| perm_from_one_line(v, &format!("payload.rho0.images[{i}]")))
                .collect::<Result<Vec<_>, _>>()?;
            MonodromyRep::new(g0.clone(), perms)
                .map_err(|e| SchemaError::new("payload.rho0.images", e))?
        }
        RepSource::Slice(sp) => {
            let names: Vec<&str> = sp.loops.iter().map(|l| l.name.as_str()).collect();
            if names != p.g0.generators.iter().map(String::as_str).collect::<Vec<_>>() {
                return Err(SchemaError::new(
                    "payload.rho0.slice.loops",
                    "loop names must be the generators of g0, in order",
                )
                .into());
            }
            let mut slice_facts = BTreeMap::new();
            let (d, images) = run_slice(sp, tol, opts, &mut slice_facts, "payload.rho0.slice")?;
            details.insert("slice".into(), d);
            MonodromyRep::new(g0.clone(), images).map_err(comp)?
        }
    };
    let cap = p.cap.unwrap_or(DEFAULT_COSET_CAP);
    let problem = ExtensionProblem::new(rho0.clone(), g1.clone(), inclusion, p.surjectivity_assumed, cap)
        .map_err(comp)?;
    facts.insert("b0".into(), json!(rho0.degree()));
    facts.insert("rho0".into(), cycles(rho0.images()));
    facts.insert(
        "abelian_surjective".into(),
        json!(extend::abelianization_onto(&problem.inclusion, &g1)),
    );
    details.insert("rho0".into(), rep_table(&rho0));
    let result = match extend::weak_extend(&problem) {
        Ok(r) => r,
        Err(ExtendError::IndexNotEstablished { cap }) => {
            for f in ["b1", "strong", "equivariant", "rho1", "fiber_map"] {
                facts.insert(f.into(), Value::Null);
            }
            facts.insert("index_established".into(), json!(false));
            details.insert("status".into(), json!(format!("coset enumeration exceeded {cap} cosets")));
            if !p.candidates.is_empty() || !p.candidate_search_degrees.is_empty() {
                return Err(comp("candidates need an established extension"));
            }
            return Ok(Value::Object(details));
        }
        Err(e) => return Err(comp(e)),
    };
    facts.insert("index_established".into(), json!(true));
    facts.insert("b1".into(), json!(result.b1));
    facts.insert("strong".into(), json!(extend::is_strong(&result)));
    facts.insert(
        "equivariant".into(),
        json!(extend::is_equivariant(&result.rho0, &result.inclusion, &result.rho1, &result.fiber_map).map_err(comp)?),
    );
    facts.insert("rho1".into(), cycles(result.rho1.images()));
    facts.insert("fiber_map".into(), one_based(&result.fiber_map));
    details.insert("status".into(), json!("closed"));
    details.insert("rho1".into(), rep_table(&result.rho1));
    details.insert(
        "fiber_map".into(),
        Value::Array(
            result
                .fiber_map
                .iter()
                .enumerate()
                .map(|(s, t)| json!({"sheet": s + 1, "extended_sheet": t + 1}))
                .collect(),
        ),
    );
    let words = |ws: &[Word]| Value::Array(ws.iter().map(|w| json!(w.to_string())).collect());
    details.insert("transversal".into(), words(&result.schreier.representatives));
    details.insert("stabilizer_generators".into(), words(&result.schreier.stabilizer_generators));
    details.insert("pushed_generators".into(), words(&result.pushed_generators));
    if opts.debug_tables {
        let table = coset::todd_coxeter(&g1, &result.pushed_generators, cap).map_err(comp)?;
        details.insert("coset_table".into(), json!(table.dump()));
    }

    let mut verdicts = Vec::new();
    for (i, c) in p.candidates.iter().enumerate() {
        let path = format!("payload.candidates[{i}].images");
        let perms = c
            .images
            .iter()
            .enumerate()
            .map(|(j, v)| perm_from_one_line(v, &format!("{path}[{j}]")))
            .collect::<Result<Vec<_>, _>>()?;
        let cand = MonodromyRep::new(g1.clone(), perms).map_err(|e| SchemaError::new(path, e))?;
        let v = extend::maximality_check(&result, &cand).map_err(comp)?;
        facts.insert(format!("candidate.{}.degree_bound_holds", c.label), json!(v.degree_bound_holds));
        facts.insert(format!("candidate.{}.equivalent", c.label), json!(v.equivalence.is_some()));
        verdicts.push(verdict_json(&c.label, &v));
    }
    for &d in &p.candidate_search_degrees {
        let found = candidate_search(&result, &g1, d)?;
        let all = found.iter().all(|v| v.equivalence.is_some());
        facts.insert(format!("candidates_found.{d}"), json!(found.len()));
        facts.insert(format!("candidates_all_equivalent.{d}"), json!(all));
        for (k, v) in found.iter().enumerate() {
            verdicts.push(verdict_json(&format!("degree-{d}-{}", k + 1), v));
        }
    }
    if !verdicts.is_empty() {
        details.insert("candidates".into(), Value::Array(verdicts));
    }
    Ok(Value::Object(details))
}

fn verdict_json(label: &str, v: &extend::Verdict) -> Value {
    json!({
        "label": label,
        "degree": v.candidate_degree,
        "fiber_map": one_based(&v.fiber_map),
        "degree_bound_holds": v.degree_bound_holds,
        "conjugator": v.equivalence.as_ref().map(perm_json),
    })
}

/// Every transitive representation of `g1` into `S_degree` that extends the
/// original cover, checked against the computed extension.
fn candidate_search(
    r: &covext_core::ExtensionResult,
    g1: &Presentation,
    degree: usize,
) -> Result<Vec<extend::Verdict>, RunError> {
    if degree == 0 || degree > perm::MAX_SEARCH_DEGREE {
        return Err(comp(format!("candidate search degree must be in 1..={}", perm::MAX_SEARCH_DEGREE)));
    }
    let all = perm::all_permutations(degree);
    let k = g1.generator_count();
    let total = (all.len() as f64).powi(k as i32);
    if total > CANDIDATE_SEARCH_LIMIT as f64 {
        return Err(comp(format!("candidate search would visit {total} tuples")));
    }
    let mut out = Vec::new();
    let mut idx = vec![0usize; k];
    loop {
        let images: Vec<Permutation> = idx.iter().map(|&i| all[i].clone()).collect();
        if let Ok(rep) = MonodromyRep::new(g1.clone(), images) {
            if rep.is_transitive()
                && extend::compatible_fiber_map(&r.rho0, &r.inclusion, &rep)
                    .map_err(comp)?
                    .is_some()
            {
                out.push(extend::maximality_check(r, &rep).map_err(comp)?);
            }
        }
        let mut pos = 0;
        while pos < k {
            idx[pos] += 1;
            if idx[pos] < all.len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
        if pos == k {
            break;
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------- slices

fn bipoly(rows: &[Vec<C>]) -> BiPoly {
    BiPoly::new(rows.iter().map(|r| cpoly(r)).collect())
}

fn run_slice(
    p: &SlicePayload,
    tol: &Tolerances,
    opts: RunOptions,
    facts: &mut BTreeMap<String, Value>,
    path: &str,
) -> Result<(Value, Vec<Permutation>), RunError> {
    let cover = CoverSlice::new(p.coefficients.iter().map(|r| cpoly(r)).collect())
        .map_err(|e| SchemaError::new(format!("{path}.coefficients"), e))?;
    let b = cover.degree();
    for (i, q) in p.closedness.iter().enumerate() {
        if let SheetSelector::Index(s) = q.sheet {
            if s == 0 || s > b {
                return Err(SchemaError::new(
                    format!("{path}.closedness[{i}].sheet.index"),
                    format!("sheet must be in 1..={b}"),
                )
                .into());
            }
        }
    }
    if p.weierstrass && p.function.is_none() {
        return Err(SchemaError::new(format!("{path}.weierstrass"), "needs `function`").into());
    }
    if !p.separation_points.is_empty() && p.function.is_none() {
        return Err(SchemaError::new(format!("{path}.separation_points"), "needs `function`").into());
    }
    let sopts = slice_options(tol);
    let m = slice::full_monodromy(&cover, p.basepoint.map(cx), &sopts)?;

    // Named loops as words in the lasso generators.
    let lasso_alphabet = m.rep.presentation().alphabet().clone();
    let mut loop_images = Vec::new();
    for (i, l) in p.loops.iter().enumerate() {
        let w = lasso_alphabet
            .parse_word(&l.word)
            .map_err(|e| SchemaError::new(format!("{path}.loops[{i}].word"), e))?;
        loop_images.push(m.rep.image(&w).map_err(comp)?);
    }
    let named = if p.loops.is_empty() {
        m.rep.clone()
    } else {
        let names: Vec<&str> = p.loops.iter().map(|l| l.name.as_str()).collect();
        let alphabet = Alphabet::new(&names).map_err(|e| SchemaError::new(format!("{path}.loops"), e))?;
        MonodromyRep::with_degree(Presentation::free(alphabet), b, loop_images.clone()).map_err(comp)?
    };

    let pts: Vec<Value> = m.branch_points.iter().copied().map(cx_json).collect();
    facts.insert("branch_points".into(), Value::Array(pts));
    facts.insert("branch_point_count".into(), json!(m.branch_points.len()));
    facts.insert("permutations".into(), cycles(&m.permutations));
    facts.insert(
        "cycle_types".into(),
        Value::Array(m.permutations.iter().map(|p| json!(p.cycle_type())).collect()),
    );
    facts.insert("lasso_product".into(), json!(m.lasso_product().cycle_notation()));
    facts.insert("closure_order".into(), closure_json(b, &m.permutations)?);
    let distinct = m
        .permutations
        .iter()
        .enumerate()
        .all(|(i, a)| m.permutations[i + 1..].iter().all(|c| c != a));
    facts.insert("distinct_permutations".into(), json!(distinct));
    facts.insert("boundary_consistent".into(), json!(m.boundary_consistent()));
    facts.insert("is_galois".into(), json!(extend::is_galois(&m.rep).map_err(comp)?));
    for (l, img) in p.loops.iter().zip(&loop_images) {
        facts.insert(format!("loop.{}", l.name), perm_json(img));
    }
    if p.refinement_check {
        let finer = SliceOptions {
            max_step: sopts.max_step / 2.0,
            ..sopts
        };
        let again = slice::full_monodromy(&cover, p.basepoint.map(cx), &finer)?;
        facts.insert("refinement_stable".into(), json!(again.permutations == m.permutations));
    }

    let mut closed_rows = Vec::new();
    for (i, q) in p.closedness.iter().enumerate() {
        let w = named
            .presentation()
            .alphabet()
            .parse_word(&q.word)
            .map_err(|e| SchemaError::new(format!("{path}.closedness[{i}].word"), e))?;
        let sheet = match &q.sheet {
            SheetSelector::Index(s) => s - 1,
            SheetSelector::AtBranchPoint { near, multiplicity } => {
                select_sheet(&cover, &m, cx(*near), *multiplicity, &sopts)?
            }
        };
        let closed = extend::lift_is_closed(&named, &w, sheet).map_err(comp)?;
        facts.insert(format!("closed.{}", q.label), json!(closed));
        closed_rows.push(json!({
            "label": q.label,
            "word": w.to_string(),
            "sheet": sheet + 1,
            "end_sheet": named.trace(sheet, &w) + 1,
            "closed": closed,
        }));
    }

    let mut details = Map::new();
    details.insert("basepoint".into(), cx_json(m.basepoint));
    details.insert(
        "fiber".into(),
        Value::Array(m.fiber.roots.iter().copied().map(cx_json).collect()),
    );
    let lassos: Vec<Value> = m
        .lassos
        .iter()
        .zip(&m.permutations)
        .enumerate()
        .map(|(i, (l, perm))| {
            let mut row = json!({
                "generator": slice::lasso_name(i),
                "branch_point": cx_json(l.center),
                "permutation": perm_json(perm),
            });
            if opts.debug_tables {
                row["radius"] = json!(l.radius);
                row["entry"] = cx_json(l.entry());
            }
            row
        })
        .collect();
    details.insert("lassos".into(), Value::Array(lassos));
    details.insert("boundary".into(), m.boundary.as_ref().map(perm_json).unwrap_or(Value::Null));
    details.insert("min_root_separation".into(), json!(m.min_separation));
    details.insert("tracking_steps".into(), json!(m.steps));
    if !p.loops.is_empty() {
        details.insert("loops".into(), rep_table(&named));
    }
    if !closed_rows.is_empty() {
        details.insert("closedness".into(), Value::Array(closed_rows));
    }

    if let Some(h) = &p.function {
        let h = bipoly(h);
        if p.weierstrass {
            let coeffs = slice::weierstrass_poly_of_function(&cover, &h, &sopts)?;
            facts.insert("weierstrass".into(), Value::Array(coeffs.iter().map(cpoly_json).collect()));
        }
        let sep_tol = tol.separation_tol.unwrap_or(DEFAULT_SEPARATION_TOL);
        for (i, z) in p.separation_points.iter().enumerate() {
            let s = slice::separates_fiber(&cover, &h, cx(*z), sep_tol, &sopts)?;
            facts.insert(format!("separates.{}", i + 1), json!(s));
        }
    }
    Ok((Value::Object(details), loop_images))
}

fn select_sheet(
    cover: &CoverSlice,
    m: &SliceMonodromy,
    near: Complex64,
    multiplicity: usize,
    opts: &SliceOptions,
) -> Result<usize, RunError> {
    let index = m
        .branch_points
        .iter()
        .enumerate()
        .min_by(|a, b| (a.1 - near).norm().total_cmp(&(b.1 - near).norm()))
        .map(|(i, _)| i)
        .ok_or_else(|| comp("the cover has no branch points"))?;
    let (sheets, _) = slice::sheets_at_branch_point(cover, m, index, multiplicity, opts)?;
    match sheets.as_slice() {
        [s] => Ok(*s),
        _ => Err(comp(format!(
            "{} sheets meet a root of multiplicity {multiplicity} over the branch point near {near}; need exactly one",
            sheets.len()
        ))),
    }
}

// ---------------------------------------------------------------- braids

fn run_braid(p: &BraidPayload, facts: &mut BTreeMap<String, Value>) -> Result<Value, RunError> {
    let mut searches = Vec::new();
    let mut total = 0;
    for (i, s) in p.searches.iter().enumerate() {
        let path = format!("payload.searches[{i}]");
        let pinned: Vec<Option<Permutation>> = if s.pin_standard {
            if !s.pinned.is_empty() {
                return Err(SchemaError::new(path, "use either `pinned` or `pin_standard`").into());
            }
            let std = braid::standard_rep(s.degree).map_err(|e| SchemaError::new(&path, e))?;
            std.images().iter().cloned().map(Some).collect()
        } else {
            s.pinned
                .iter()
                .enumerate()
                .map(|(j, v)| perm_from_one_line(v, &format!("{path}.pinned[{j}]")).map(Some))
                .collect::<Result<_, _>>()?
        };
        if pinned.iter().flatten().any(|q| q.degree() != s.degree) {
            return Err(SchemaError::new(format!("{path}.pinned"), "pins must have the search degree").into());
        }
        let c = HomSearchConstraints {
            degree: s.degree,
            pinned,
            require_transitive: s.require_transitive,
            require_all_nontrivial: s.require_all_nontrivial,
        };
        let found = braid::hom_search(s.strands, &c).map_err(comp)?;
        let mut rows = Vec::new();
        for t in &found {
            let valid = braid::satisfies_relators(s.strands, t).map_err(comp)?
                && braid::meets_constraints(t, &c);
            if !valid {
                return Err(comp(format!("search `{}` returned an invalid tuple", s.label)));
            }
            rows.push(json!({
                "images": cycles(t),
                "transitive": perm::is_transitive(s.degree, t).map_err(comp)?,
                "closure_order": closure_json(s.degree, t)?,
            }));
        }
        total += found.len();
        facts.insert(format!("count.{}", s.label), json!(found.len()));
        facts.insert(
            format!("solutions.{}", s.label),
            Value::Array(found.iter().map(|t| cycles(t)).collect()),
        );
        searches.push(json!({
            "label": s.label,
            "strands": s.strands,
            "degree": s.degree,
            "pinned": c.pinned.iter().flatten().map(Permutation::cycle_notation).collect::<Vec<_>>(),
            "relator_check": "every tuple re-evaluated",
            "solutions": rows,
        }));
    }
    facts.insert("total_count".into(), json!(total));

    let mut extensions = Vec::new();
    for (i, e) in p.extensions.iter().enumerate() {
        let path = format!("payload.extensions[{i}]");
        let g0 = braid::standard_rep(e.from_strands).map_err(|err| SchemaError::new(&path, err))?;
        let mode = match e.mode {
            FiberModeSpec::Surjective => FiberMode::Surjective,
            FiberModeSpec::Injective => FiberMode::Injective,
        };
        let w = braid::minimal_extension_degree(&g0, e.to_strands, e.max_degree, mode).map_err(comp)?;
        let witness = w.as_ref().map(|w| {
            json!({
                "degree": w.degree,
                "images": cycles(&w.images),
                "fiber_map": one_based(&w.fiber_map),
            })
        });
        facts.insert(format!("minimal_degree.{}", e.label), json!(w.as_ref().map(|w| w.degree)));
        facts.insert(format!("witness.{}", e.label), witness.clone().unwrap_or(Value::Null));
        let mut probes = Map::new();
        for &d in &e.probe_degrees {
            let found = braid::extension_of_degree(&g0, e.to_strands, d, mode).map_err(comp)?;
            facts.insert(format!("extends_at.{}.{}", e.label, d), json!(found.is_some()));
            probes.insert(
                d.to_string(),
                found
                    .map(|w| json!({"images": cycles(&w.images), "fiber_map": one_based(&w.fiber_map)}))
                    .unwrap_or(Value::Null),
            );
        }
        extensions.push(json!({
            "label": e.label,
            "from_strands": e.from_strands,
            "to_strands": e.to_strands,
            "mode": e.mode,
            "witness": witness,
            "probes": probes,
        }));
    }
    Ok(json!({ "searches": searches, "extensions": extensions }))
}

// ---------------------------------------------------------------- Hartogs

fn unit_disk_point(rng: &mut ChaCha8Rng) -> Complex64 {
    let r = rng.gen::<f64>().sqrt();
    let t = rng.gen_range(0.0..std::f64::consts::TAU);
    Complex64::from_polar(r, t)
}

fn polydisk_point(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    (0..n).map(|_| unit_disk_point(rng)).collect()
}

fn params(n: usize, q: usize, r: f64, alpha: f64, path: &str) -> Result<HartogsParams, SchemaError> {
    HartogsParams::new(n, q, r, alpha).map_err(|e| SchemaError::new(path, e))
}

fn hcomp(e: HartogsError) -> RunError {
    comp(e)
}

fn signature_key(s: &LeviSignature) -> String {
    format!("+{} -{} 0:{}", s.positive, s.negative, s.zero)
}

fn run_hartogs(
    p: &HartogsPayload,
    seed: u64,
    tol: &Tolerances,
    facts: &mut BTreeMap<String, Value>,
) -> Result<Value, RunError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let levi_tol = tol.levi_tol.unwrap_or(DEFAULT_LEVI_TOL);
    let mut details = Map::new();
    if !p.cases.is_empty() {
        if p.samples == 0 {
            return Err(SchemaError::new("payload.samples", "need at least one sample per case").into());
        }
        let mut expected_all = true;
        let mut neg_dev = 0.0f64;
        let mut fd_rel = 0.0f64;
        let mut herm = 0.0f64;
        let mut rows = Vec::new();
        for (i, c) in p.cases.iter().enumerate() {
            let hp = params(c.n, c.q, c.r, c.alpha, &format!("payload.cases[{i}]"))?;
            let want = LeviSignature {
                positive: c.q,
                negative: c.n - c.q,
                zero: 0,
            };
            let mut hist: BTreeMap<String, usize> = BTreeMap::new();
            for _ in 0..p.samples {
                let w = loop {
                    let w = polydisk_point(&mut rng, c.n);
                    let w2: f64 = w[c.n - c.q..].iter().map(|z| z.norm_sqr()).sum();
                    if w2.sqrt() >= p.min_w2_norm {
                        break w;
                    }
                };
                let h = hartogs::levi_matrix(&w, &hp).map_err(hcomp)?;
                for a in 0..c.n {
                    for b in 0..c.n {
                        herm = herm.max((h[a][b] - h[b][a].conj()).norm());
                    }
                }
                let ev = hartogs::levi_eigenvalues(&w, &hp).map_err(hcomp)?;
                let sig = LeviSignature::from_eigenvalues(&ev, levi_tol);
                expected_all &= sig == want;
                for x in ev.iter().filter(|&&x| x < -levi_tol) {
                    neg_dev = neg_dev.max((x + 2.0).abs());
                }
                let fd = hartogs::levi_matrix_fd(&w, &hp, hartogs::FD_STEP).map_err(hcomp)?;
                fd_rel = fd_rel.max(hartogs::relative_difference(&h, &fd));
                *hist.entry(signature_key(&sig)).or_default() += 1;
            }
            facts.insert(format!("signature.{}", case_label(c)), json!(hist));
            rows.push(json!({ "case": case_label(c), "samples": p.samples, "histogram": hist }));
        }
        facts.insert("signatures_expected".into(), json!(expected_all));
        facts.insert("max_negative_deviation".into(), json!(neg_dev));
        facts.insert("max_fd_relative".into(), json!(fd_rel));
        facts.insert("max_hermitian_defect".into(), json!(herm));
        details.insert("signatures".into(), Value::Array(rows));
    }
    if let Some(c) = &p.containment {
        params(c.n, c.q, c.r, 1.0, "payload.containment")?;
        let threshold = hartogs::containment_threshold(c.n, c.q, c.r).map_err(hcomp)?;
        facts.insert("containment_threshold".into(), json!(threshold));
        match threshold {
            Some(alpha0) => {
                let hp = params(c.n, c.q, c.r, alpha0.max(f64::MIN_POSITIVE), "payload.containment")?;
                let mut accepted = 0;
                let mut violations = 0;
                let mut draws = 0usize;
                while accepted < c.samples {
                    draws += 1;
                    if draws > c.samples.saturating_mul(100_000).max(1_000_000) {
                        return Err(comp("rejection sampling of the sublevel set stalled"));
                    }
                    let w = polydisk_point(&mut rng, c.n);
                    if !hartogs::in_d_plus(&w, &hp).map_err(hcomp)? {
                        continue;
                    }
                    accepted += 1;
                    if !hartogs::in_hartogs_figure(&w, &hp).map_err(hcomp)? {
                        violations += 1;
                    }
                }
                facts.insert("containment_violations".into(), json!(violations));
                details.insert(
                    "containment".into(),
                    json!({"alpha": alpha0, "samples": accepted, "draws": draws, "violations": violations}),
                );
            }
            None => {
                facts.insert("containment_violations".into(), Value::Null);
            }
        }
    }
    if let Some(u) = &p.union {
        if u.min_exponent > u.max_exponent {
            return Err(SchemaError::new("payload.union", "empty exponent range").into());
        }
        let base = params(u.n, u.q, u.r, 1.0, "payload.union")?;
        let sweep: Vec<HartogsParams> = (u.min_exponent..=u.max_exponent)
            .map(|k| base.with_alpha(2f64.powi(k)))
            .collect::<Result<_, _>>()
            .map_err(hcomp)?;
        let mut uncovered = 0;
        let mut checked = 0;
        for _ in 0..u.samples {
            let w = polydisk_point(&mut rng, u.n);
            if hartogs::in_excluded_set(&w, &base).map_err(hcomp)? {
                continue;
            }
            checked += 1;
            let mut hit = false;
            for hp in &sweep {
                if hartogs::rho_alpha(&w, hp).map_err(hcomp)? > 0.0 {
                    hit = true;
                    break;
                }
            }
            if !hit {
                uncovered += 1;
            }
        }
        facts.insert("union_uncovered".into(), json!(uncovered));
        details.insert(
            "union".into(),
            json!({"samples": checked, "exponents": [u.min_exponent, u.max_exponent], "uncovered": uncovered}),
        );
    }
    Ok(Value::Object(details))
}
