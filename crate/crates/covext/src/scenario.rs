//! Scenario files: a JSON document with a `kind`, a kind-specific `payload`,
//! optional tolerance overrides, a seed, and claims to adjudicate.
//!
//! Permutations are written in one-line form with 1-based points, sheets are
//! 1-based, complex numbers are `[re, im]` and polynomials are coefficient
//! lists, constant term first.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// A complex number as `[re, im]`.
pub type C = [f64; 2];

/// Schema violation with the path of the offending field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemaError {
    pub path: String,
    pub message: String,
}

impl SchemaError {
    pub fn new(path: impl Into<String>, message: impl fmt::Display) -> Self {
        SchemaError {
            path: path.into(),
            message: message.to_string(),
        }
    }
}

impl fmt::Display for SchemaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_empty() || self.path == "." {
            write!(f, "schema error: {}", self.message)
        } else {
            write!(f, "schema error at `{}`: {}", self.path, self.message)
        }
    }
}

impl std::error::Error for SchemaError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Extension,
    BraidSearch,
    SliceMonodromy,
    HartogsCheck,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Extension => "extension",
            Kind::BraidSearch => "braid-search",
            Kind::SliceMonodromy => "slice-monodromy",
            Kind::HartogsCheck => "hartogs-check",
        }
    }
}

/// Overrides for numeric tolerances; unset fields keep the library defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub match_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dedup_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius_factor: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_step: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub interp_tol: Option<f64>,
    /// Minimum distance between values of a function on a fiber for it to
    /// count as separating.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub separation_tol: Option<f64>,
    /// Eigenvalues within this of zero count as zero in a Levi signature.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub levi_tol: Option<f64>,
}

impl Tolerances {
    pub fn is_default(&self) -> bool {
        *self == Tolerances::default()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Op {
    Eq,
    Ne,
    Le,
    Ge,
    /// Same shape as `value`, every number within `tol`.
    Approx,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Check {
    pub fact: String,
    pub op: Op,
    pub value: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
}

/// A statement from the source text, paraphrased, with a neutral anchor and
/// the computed fact it is compared against.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Claim {
    pub id: String,
    pub text: String,
    pub anchor: String,
    pub check: Check,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationSpec {
    pub generators: Vec<String>,
    #[serde(default)]
    pub relators: Vec<String>,
}

/// Where the original monodromy comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum RepSource {
    /// One-line images, one per generator of `g0`.
    Images(Vec<Vec<usize>>),
    /// Numeric monodromy of a slice; its named loops must be the generators
    /// of `g0`, in order.
    Slice(SlicePayload),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CandidateSpec {
    pub label: String,
    pub images: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtensionPayload {
    pub g0: PresentationSpec,
    pub rho0: RepSource,
    pub g1: PresentationSpec,
    /// Image in `g1` of each generator of `g0`.
    pub inclusion: BTreeMap<String, String>,
    #[serde(default = "default_true")]
    pub surjectivity_assumed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cap: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub candidates: Vec<CandidateSpec>,
    /// For each degree, check every transitive representation of `g1` of
    /// that degree that extends `rho0` against the computed extension.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub candidate_search_degrees: Vec<usize>,
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NamedLoop {
    pub name: String,
    /// Word in the lasso generators `l1, l2, ...`.
    pub word: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum SheetSelector {
    /// 1-based sheet of the basepoint fiber.
    Index(usize),
    /// The sheet that runs into a root of the given multiplicity over the
    /// branch point nearest to `near`.
    AtBranchPoint { near: C, multiplicity: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClosednessQuery {
    pub label: String,
    pub word: String,
    pub sheet: SheetSelector,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SlicePayload {
    /// Coefficient of `w^k` as a polynomial in `z`, for `k = 0..=b`.
    pub coefficients: Vec<Vec<C>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basepoint: Option<C>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub loops: Vec<NamedLoop>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub closedness: Vec<ClosednessQuery>,
    /// Recompute every permutation with half the maximum step.
    #[serde(default)]
    pub refinement_check: bool,
    /// A function `h(z, w)` on the cover, by powers of `w`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub function: Option<Vec<Vec<C>>>,
    /// Compute the monic polynomial whose roots are the values of `h` on the
    /// fibers.
    #[serde(default)]
    pub weierstrass: bool,
    /// Points where to test whether `h` separates the fiber.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub separation_points: Vec<C>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomSearchSpec {
    pub label: String,
    pub strands: usize,
    pub degree: usize,
    /// One-line images fixed for the first generators.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub pinned: Vec<Vec<usize>>,
    /// Pin the first `degree - 1` generators to the standard transpositions.
    #[serde(default)]
    pub pin_standard: bool,
    #[serde(default)]
    pub require_transitive: bool,
    #[serde(default)]
    pub require_all_nontrivial: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FiberModeSpec {
    Surjective,
    Injective,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtensionSearchSpec {
    pub label: String,
    /// The original cover is the standard representation of this braid
    /// group.
    pub from_strands: usize,
    pub to_strands: usize,
    pub max_degree: usize,
    pub mode: FiberModeSpec,
    /// Degrees at which existence is decided individually.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub probe_degrees: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BraidPayload {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub searches: Vec<HomSearchSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub extensions: Vec<ExtensionSearchSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HartogsCase {
    pub n: usize,
    pub q: usize,
    pub r: f64,
    pub alpha: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContainmentSpec {
    pub n: usize,
    pub q: usize,
    pub r: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UnionSpec {
    pub n: usize,
    pub q: usize,
    pub r: f64,
    pub samples: usize,
    /// The sweep uses `alpha = 2^k` for `k` in this range.
    pub min_exponent: i32,
    pub max_exponent: i32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HartogsPayload {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cases: Vec<HartogsCase>,
    /// Sample points per case.
    #[serde(default)]
    pub samples: usize,
    /// Points with a smaller `|w2|` are redrawn.
    #[serde(default = "default_min_w2")]
    pub min_w2_norm: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub containment: Option<ContainmentSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub union: Option<UnionSpec>,
}

fn default_min_w2() -> f64 {
    0.05
}

#[derive(Debug, Clone, PartialEq)]
pub enum Payload {
    Extension(ExtensionPayload),
    BraidSearch(BraidPayload),
    SliceMonodromy(SlicePayload),
    HartogsCheck(HartogsPayload),
}

impl Payload {
    pub fn kind(&self) -> Kind {
        match self {
            Payload::Extension(_) => Kind::Extension,
            Payload::BraidSearch(_) => Kind::BraidSearch,
            Payload::SliceMonodromy(_) => Kind::SliceMonodromy,
            Payload::HartogsCheck(_) => Kind::HartogsCheck,
        }
    }

    fn to_value(&self) -> Value {
        let v = match self {
            Payload::Extension(p) => serde_json::to_value(p),
            Payload::BraidSearch(p) => serde_json::to_value(p),
            Payload::SliceMonodromy(p) => serde_json::to_value(p),
            Payload::HartogsCheck(p) => serde_json::to_value(p),
        };
        v.expect("payload types serialize")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub description: String,
    pub seed: u64,
    pub tolerances: Tolerances,
    pub payload: Payload,
    pub claims: Vec<Claim>,
    /// Facts reported without a claim attached.
    pub observe: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    name: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    description: String,
    kind: Kind,
    #[serde(default)]
    seed: u64,
    #[serde(default, skip_serializing_if = "Tolerances::is_default")]
    tolerances: Tolerances,
    payload: Value,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    claims: Vec<Claim>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    observe: Vec<String>,
}

fn path_error<E: fmt::Display>(prefix: &str, e: serde_path_to_error::Error<E>) -> SchemaError {
    let inner = e.path().to_string();
    let path = match (prefix, inner.as_str()) {
        (p, ".") => p.to_string(),
        ("", i) => i.to_string(),
        (p, i) => format!("{p}.{i}"),
    };
    SchemaError::new(path, e.into_inner())
}

fn typed<T: serde::de::DeserializeOwned>(v: Value) -> Result<T, SchemaError> {
    serde_path_to_error::deserialize(v).map_err(|e| path_error("payload", e))
}

impl Scenario {
    /// Parses and validates a scenario document.
    pub fn from_json(text: &str) -> Result<Scenario, SchemaError> {
        let mut de = serde_json::Deserializer::from_str(text);
        let raw: RawScenario =
            serde_path_to_error::deserialize(&mut de).map_err(|e| path_error("", e))?;
        de.end().map_err(|e| SchemaError::new("", e))?;
        let payload = match raw.kind {
            Kind::Extension => Payload::Extension(typed(raw.payload)?),
            Kind::BraidSearch => Payload::BraidSearch(typed(raw.payload)?),
            Kind::SliceMonodromy => Payload::SliceMonodromy(typed(raw.payload)?),
            Kind::HartogsCheck => Payload::HartogsCheck(typed(raw.payload)?),
        };
        let s = Scenario {
            name: raw.name,
            description: raw.description,
            seed: raw.seed,
            tolerances: raw.tolerances,
            payload,
            claims: raw.claims,
            observe: raw.observe,
        };
        s.check_facts()?;
        Ok(s)
    }

    pub fn kind(&self) -> Kind {
        self.payload.kind()
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("scenario serializes");
        s.push('\n');
        s
    }

    fn check_facts(&self) -> Result<(), SchemaError> {
        let known = fact_names(&self.payload);
        for (i, c) in self.claims.iter().enumerate() {
            if !known.contains(&c.check.fact) {
                return Err(SchemaError::new(
                    format!("claims[{i}].check.fact"),
                    format!("unknown fact `{}` for kind {}", c.check.fact, self.kind().as_str()),
                ));
            }
            if c.check.op == Op::Approx && c.check.tol.is_none() {
                return Err(SchemaError::new(
                    format!("claims[{i}].check.tol"),
                    "`approx` needs a tolerance",
                ));
            }
        }
        for (i, f) in self.observe.iter().enumerate() {
            if !known.contains(f) {
                return Err(SchemaError::new(
                    format!("observe[{i}]"),
                    format!("unknown fact `{f}` for kind {}", self.kind().as_str()),
                ));
            }
        }
        Ok(())
    }
}

impl Serialize for Scenario {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RawScenario {
            name: self.name.clone(),
            description: self.description.clone(),
            kind: self.kind(),
            seed: self.seed,
            tolerances: self.tolerances.clone(),
            payload: self.payload.to_value(),
            claims: self.claims.clone(),
            observe: self.observe.clone(),
        }
        .serialize(s)
    }
}

/// Names of the facts a scenario with this payload reports.
pub fn fact_names(p: &Payload) -> BTreeSet<String> {
    let mut out: BTreeSet<String> = BTreeSet::new();
    let mut add = |s: String| {
        out.insert(s);
    };
    match p {
        Payload::Extension(e) => {
            for f in [
                "b0",
                "b1",
                "strong",
                "index_established",
                "abelian_surjective",
                "equivariant",
                "rho0",
                "rho1",
                "fiber_map",
            ] {
                add(f.to_string());
            }
            for c in &e.candidates {
                add(format!("candidate.{}.degree_bound_holds", c.label));
                add(format!("candidate.{}.equivalent", c.label));
            }
            for d in &e.candidate_search_degrees {
                add(format!("candidates_found.{d}"));
                add(format!("candidates_all_equivalent.{d}"));
            }
        }
        Payload::SliceMonodromy(s) => slice_facts(s, &mut add),
        Payload::BraidSearch(b) => {
            add("total_count".to_string());
            for s in &b.searches {
                add(format!("count.{}", s.label));
                add(format!("solutions.{}", s.label));
            }
            for e in &b.extensions {
                add(format!("minimal_degree.{}", e.label));
                add(format!("witness.{}", e.label));
                for d in &e.probe_degrees {
                    add(format!("extends_at.{}.{}", e.label, d));
                }
            }
        }
        Payload::HartogsCheck(h) => {
            if !h.cases.is_empty() {
                for f in [
                    "signatures_expected",
                    "max_negative_deviation",
                    "max_fd_relative",
                    "max_hermitian_defect",
                ] {
                    add(f.to_string());
                }
                for c in &h.cases {
                    add(format!("signature.{}", case_label(c)));
                }
            }
            if h.containment.is_some() {
                add("containment_threshold".to_string());
                add("containment_violations".to_string());
            }
            if h.union.is_some() {
                add("union_uncovered".to_string());
            }
        }
    }
    out
}

fn slice_facts(s: &SlicePayload, add: &mut impl FnMut(String)) {
    for f in [
        "branch_points",
        "branch_point_count",
        "permutations",
        "cycle_types",
        "lasso_product",
        "closure_order",
        "distinct_permutations",
        "boundary_consistent",
        "is_galois",
    ] {
        add(f.to_string());
    }
    if s.refinement_check {
        add("refinement_stable".to_string());
    }
    for l in &s.loops {
        add(format!("loop.{}", l.name));
    }
    for q in &s.closedness {
        add(format!("closed.{}", q.label));
    }
    if s.function.is_some() && s.weierstrass {
        add("weierstrass".to_string());
    }
    for i in 0..s.separation_points.len() {
        add(format!("separates.{}", i + 1));
    }
}

/// Stable label of a Hartogs case, e.g. `n3_q2_r0.5_a3.5`.
pub fn case_label(c: &HartogsCase) -> String {
    format!("n{}_q{}_r{}_a{}", c.n, c.q, c.r, c.alpha)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "name": "t",
        "kind": "braid-search",
        "payload": {"searches": [{"label": "a", "strands": 3, "degree": 3}]},
        "claims": [{"id": "c", "text": "x", "anchor": "y",
                    "check": {"fact": "count.a", "op": "ge", "value": 1}}]
    }"#;

    #[test]
    fn parses_and_round_trips() {
        let s = Scenario::from_json(MINIMAL).unwrap();
        assert_eq!(s.kind(), Kind::BraidSearch);
        let once = s.to_json();
        let again = Scenario::from_json(&once).unwrap();
        assert_eq!(again, s);
        assert_eq!(again.to_json(), once);
    }

    #[test]
    fn reports_offending_paths() {
        let bad = MINIMAL.replace("\"strands\": 3", "\"strands\": \"three\"");
        let e = Scenario::from_json(&bad).unwrap_err();
        assert_eq!(e.path, "payload.searches[0].strands");

        let bad = MINIMAL.replace("\"degree\": 3", "\"degree\": 3, \"extra\": 1");
        let e = Scenario::from_json(&bad).unwrap_err();
        assert!(e.message.contains("extra"), "{e}");

        let bad = MINIMAL.replace("count.a", "count.b");
        let e = Scenario::from_json(&bad).unwrap_err();
        assert_eq!(e.path, "claims[0].check.fact");

        let bad = MINIMAL.replace("braid-search", "braid");
        assert_eq!(Scenario::from_json(&bad).unwrap_err().path, "kind");

        assert!(Scenario::from_json("{").is_err());
        assert!(Scenario::from_json(&format!("{MINIMAL} 1")).is_err());
    }

    #[test]
    fn approx_needs_tolerance() {
        let bad = MINIMAL.replace("\"op\": \"ge\"", "\"op\": \"approx\"");
        let e = Scenario::from_json(&bad).unwrap_err();
        assert_eq!(e.path, "claims[0].check.tol");
    }

    #[test]
    fn case_labels() {
        let c = HartogsCase { n: 3, q: 2, r: 0.5, alpha: 3.5 };
        assert_eq!(case_label(&c), "n3_q2_r0.5_a3.5");
    }
}
