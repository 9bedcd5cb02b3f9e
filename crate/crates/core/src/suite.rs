//! The verification suite: a registry of seeded, exact checks and the
//! renderers for their report.
//!
//! Every check draws its samples from a generator seeded by the suite seed
//! and the check name, so a run is reproducible check by check and does not
//! depend on the order (or the parallelism) in which checks run.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::coeff::{AlgHom, Algebra, BuiltinHom, FinPresAlgebra, HomSource};
use crate::extensions::{
    classify_path, classifying_hom, classifying_homotopy, hom_letters, lambda, lambda_id, Classifier, Extension, PathExtension, UniversalExtension,
};
use crate::homotopy::{
    check_cert, circle_pair, collapse, concat, end_value, interval_ctx, inverse_witness, reverse, whisker_left, whisker_right, HomotopyCert,
    Precomposition, SubdividedHomotopy,
};
use crate::mapspace::comparison_square;
use crate::mult::{htilde, mu_image_witness, mu_tensor, random_nested, Cylinder};
use crate::polyfun::{extend_family, hat, random_family, tower, Ctx, ExtendOptions, FamilyRing, PolyFamily};
use crate::sset::{cube_pair, interval_pair, product, std_simplex, subdivide_map, SimplicialPair, SimplicialSet};
use crate::tensor::{FormalTensor, TensorAlgebra, TensorElem, TensorRing};
use crate::{Error, Integers, Result, Ring};

/// Bounds for the suite.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteConfig {
    /// Largest subdivision level.
    pub max_r: usize,
    /// Largest cube dimension.
    pub max_n: usize,
    /// Largest simplicial degree.
    pub max_q: usize,
    /// Largest polynomial degree.
    pub max_deg: u32,
    /// Longest tensor word.
    pub max_word: usize,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            max_r: 2,
            max_n: 2,
            max_q: 1,
            max_deg: 3,
            max_word: 3,
            seed: 0,
        }
    }
}

/// What a single check concluded.
#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    Pass,
    /// A counterexample, as JSON.
    Fail(Value),
    /// The bounds leave nothing to check.
    Skipped(String),
}

pub type CheckFn = fn(&SuiteConfig, &mut ChaCha8Rng) -> Result<Outcome>;

/// A registered check: a name for filtering, the mathematical statement it
/// tests, and the check itself.
#[derive(Clone, Copy)]
pub struct Check {
    pub name: &'static str,
    pub anchor: &'static str,
    pub run: CheckFn,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub anchor: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    /// Wall time in milliseconds.
    pub millis: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Report {
    pub checks: Vec<CheckResult>,
}

impl Report {
    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| c.status == Status::Fail).count()
    }

    pub fn passed(&self) -> bool {
        self.failures() == 0
    }

    /// The exit status of a run: `0` when nothing failed, `1` otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Markdown,
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(Format::Text),
            "markdown" | "md" => Ok(Format::Markdown),
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(Error::Parse(format!("unknown report format `{s}`"))),
        }
    }
}

/// The registered checks, sorted by name.
pub fn checks() -> Vec<Check> {
    let mut all = vec![
        Check {
            name: "gamma_composition",
            anchor: "last vertex maps compose: γ^{p+q} = γ^p ∘ sd^p(γ^q)",
            run: gamma_composition,
        },
        Check {
            name: "sd_counts",
            anchor: "sd X is the nerve of the poset of nondegenerate simplices",
            run: sd_counts,
        },
        Check {
            name: "product_counts",
            anchor: "Δ^p × Δ^q has binom(p+q, p) nondegenerate top simplices",
            run: product_counts,
        },
        Check {
            name: "mu_kernel",
            anchor: "μ maps B^(K,L)_r ⊗ B^(K',L')_s into the kernel over K×L' ∪ L×K'",
            run: mu_kernel,
        },
        Check {
            name: "mu_associativity",
            anchor: "μ is associative",
            run: mu_associativity,
        },
        Check {
            name: "cylinder_homotopy",
            anchor: "ev_1 ∘ H = id and ev_0 ∘ H = ι ∘ v for the cylinder homotopy of B^X",
            run: cylinder_homotopy,
        },
        Check {
            name: "htilde_endpoints",
            anchor: "(d^i)^* ∘ H̃ = (γ^s)^* ∘ (d^i)^* ∘ H",
            run: htilde_endpoints,
        },
        Check {
            name: "group_inverse",
            anchor: "d_0 α = ω ∘ f, d_1 α = 0, d_2 α = f for the inverse witness α",
            run: group_inverse,
        },
        Check {
            name: "path_extension",
            anchor: "P(n,B)^q_r is an extension split by inserting t_0; the splitting is not multiplicative",
            run: path_extension,
        },
        Check {
            name: "classifying_maps",
            anchor: "the classifying map is the unique strong morphism over f; Λ^n = Λ^n_id ∘ J(f)",
            run: classifying_maps,
        },
        Check {
            name: "splitting_independence",
            anchor: "classifying maps for two splittings are elementarily homotopic",
            run: splitting_independence,
        },
        Check {
            name: "mu_image_witness",
            anchor: "μ: Z^{Δ^1} ⊗ Z^{Δ^1} → Z^{Δ^1×Δ^1} is not surjective",
            run: mu_image,
        },
        Check {
            name: "extend_section",
            anchor: "restriction B^{I^2} → B^{∂I^2} has a section: restrict ∘ extend = id",
            run: extend_section,
        },
        Check {
            name: "comparison_square",
            anchor: "ζ^v ∘ (c_{v,m})^* = (c_{v+1,m})^* ∘ Λ^{m+v}",
            run: comparison,
        },
        Check {
            name: "cert_calculus",
            anchor: "concatenation, reversal and whiskering of homotopy certificates",
            run: cert_calculus,
        },
    ];
    all.sort_by_key(|c| c.name);
    all
}

/// A suite whose single check is wrong on purpose: it feeds `μ` a family
/// that does not vanish on the subcomplex and asks for the kernel property.
pub fn corrupted_fixture() -> Vec<Check> {
    vec![Check {
        name: "corrupted_mu_kernel",
        anchor: "μ maps B^(K,L)_r ⊗ B^(K',L')_s into the kernel over K×L' ∪ L×K'",
        run: corrupted_mu_kernel,
    }]
}

/// The seed of the generator of one check.
pub fn check_seed(seed: u64, name: &str) -> u64 {
    // FNV-1a over the name, mixed with the suite seed
    let h = name.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3));
    h ^ seed.wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

/// Runs one check with its own generator. Errors count as failures.
pub fn run_check(cfg: &SuiteConfig, check: &Check) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(check_seed(cfg.seed, check.name));
    let start = Instant::now();
    let outcome = (check.run)(cfg, &mut rng);
    let millis = start.elapsed().as_millis() as u64;
    let (status, witness) = match outcome {
        Ok(Outcome::Pass) => (Status::Pass, None),
        Ok(Outcome::Fail(w)) => (Status::Fail, Some(w)),
        Ok(Outcome::Skipped(why)) => (Status::Skipped, Some(json!({ "reason": why }))),
        Err(e) => (Status::Fail, Some(json!({ "error": e.to_string() }))),
    };
    CheckResult {
        name: check.name.to_string(),
        anchor: check.anchor.to_string(),
        status,
        witness,
        millis,
    }
}

/// Parallelism from `SHL_THREADS`, if set.
pub fn thread_cap() -> Result<Option<usize>> {
    match std::env::var("SHL_THREADS") {
        Err(_) => Ok(None),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(Error::Parse(format!("SHL_THREADS must be a positive integer, got `{s}`"))),
        },
    }
}

/// Runs the checks whose names match the glob `filter` (all when `None`).
pub fn run_checks(cfg: &SuiteConfig, checks: &[Check], filter: Option<&str>) -> Result<Report> {
    let pattern = filter
        .map(|f| glob::Pattern::new(f).map_err(|e| Error::Parse(format!("invalid filter `{f}`: {e}"))))
        .transpose()?;
    let selected: Vec<&Check> = checks
        .iter()
        .filter(|c| pattern.as_ref().is_none_or(|p| p.matches(c.name)))
        .collect();
    let run = || selected.par_iter().map(|c| run_check(cfg, c)).collect::<Vec<_>>();
    let mut results = match thread_cap()? {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Parse(e.to_string()))?
            .install(run),
        None => run(),
    };
    results.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(Report { checks: results })
}

/// Runs the registered suite.
pub fn run_suite(cfg: &SuiteConfig, filter: Option<&str>) -> Result<Report> {
    run_checks(cfg, &checks(), filter)
}

fn pointer(i: usize) -> String {
    format!("#/checks/{i}/witness")
}

/// Renders a report. The CSV and Markdown forms leave out wall times, so
/// equal runs give byte-identical documents; failures point at their
/// witness in the JSON form.
pub fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(report).expect("report serializes") + "\n",
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["name", "anchor", "status", "witness"]).expect("in-memory csv");
            for (i, c) in report.checks.iter().enumerate() {
                let wit = if c.status == Status::Fail { pointer(i) } else { String::new() };
                w.write_record([c.name.as_str(), c.anchor.as_str(), c.status.as_str(), wit.as_str()])
                    .expect("in-memory csv");
            }
            String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8")
        }
        Format::Markdown => {
            let mut s = String::from("| check | statement | status | witness |\n|---|---|---|---|\n");
            for (i, c) in report.checks.iter().enumerate() {
                let wit = if c.status == Status::Fail { format!("`{}`", pointer(i)) } else { String::new() };
                let _ = writeln!(s, "| {} | {} | {} | {} |", c.name, c.anchor.replace('|', "\\|"), c.status.as_str(), wit);
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for c in &report.checks {
                let _ = writeln!(s, "{:<7} {:<24} {:>7} ms  {}", c.status.as_str().to_uppercase(), c.name, c.millis, c.anchor);
                if c.status == Status::Fail {
                    if let Some(w) = &c.witness {
                        let _ = writeln!(s, "        witness: {w}");
                    }
                }
            }
            let _ = writeln!(
                s,
                "{} checks, {} failed",
                report.checks.len(),
                report.failures()
            );
            s
        }
    }
}

// ---------------------------------------------------------------------------
// the checks

fn fail(v: Value) -> Result<Outcome> {
    Ok(Outcome::Fail(v))
}

/// A sampled check passes only if some sample was not zero.
fn nontrivial(nonzero: usize) -> Result<Outcome> {
    if nonzero == 0 {
        fail(json!({ "reason": "every sample was zero" }))
    } else {
        Ok(Outcome::Pass)
    }
}

fn absolute(set: SimplicialSet) -> SimplicialPair {
    SimplicialPair::absolute(Arc::new(set))
}

/// `(Δ^1, {1})`.
pub fn interval_mod_end() -> SimplicialPair {
    SimplicialPair::generated(Arc::new(std_simplex(1)), &["1"]).expect("a vertex of Δ^1")
}

fn small_coeff(rng: &mut ChaCha8Rng) -> BigInt {
    BigInt::from(rng.gen_range(-3i64..=3))
}

/// `sd^p(γ^q)` built by subdividing the map `γ^q` `p` times.
pub fn subdivided_gamma(pair: &SimplicialPair, p: usize, q: usize) -> Result<crate::sset::SimplicialMap> {
    let t = tower(pair);
    let mut g = (*t.gamma(q, 0)?).clone();
    for k in 0..p {
        let src = t.level(q + k + 1);
        let tgt = t.level(k + 1);
        g = subdivide_map(&g, src.sd.as_ref().expect("level above 0"), tgt.sd.as_ref().expect("level above 0"))?;
    }
    Ok(g)
}

/// `γ^{p+q} = γ^p ∘ sd^p(γ^q)` on `Δ^1`, `Δ^2` and `I^2`, for
/// `p + q ≤ max_r + 1`.
fn gamma_composition(cfg: &SuiteConfig, _: &mut ChaCha8Rng) -> Result<Outcome> {
    let spaces = [
        ("Δ^1", absolute(std_simplex(1))),
        ("Δ^2", absolute(std_simplex(2))),
        ("I^2", absolute((*cube_pair(2).set).clone())),
    ];
    let total = cfg.max_r + 1;
    for (name, pair) in &spaces {
        let t = tower(pair);
        for p in 0..=total {
            for q in 0..=total - p {
                let lhs = t.gamma(p + q, 0)?;
                let rhs = t.gamma(p, 0)?.after(&subdivided_gamma(pair, p, q)?)?;
                if *lhs != rhs {
                    return fail(json!({ "space": name, "p": p, "q": q }));
                }
            }
        }
    }
    Ok(Outcome::Pass)
}

/// Counts of strict chains in the face poset of `x`, by length.
pub fn flag_counts(x: &SimplicialSet) -> Vec<usize> {
    let cells: Vec<_> = x.cells().collect();
    let below: Vec<Vec<usize>> = cells
        .iter()
        .map(|&a| (0..cells.len()).filter(|&j| cells[j] != a && x.faces_with_positions(cells[j]).iter().any(|(f, _)| *f == a)).collect())
        .collect();
    let mut counts = Vec::new();
    let mut chains: Vec<Vec<usize>> = (0..cells.len()).map(|i| vec![i]).collect();
    while !chains.is_empty() {
        counts.push(chains.len());
        let mut next = Vec::new();
        for ch in &chains {
            for &j in &below[*ch.last().unwrap()] {
                let mut c = ch.clone();
                c.push(j);
                next.push(c);
            }
        }
        chains = next;
    }
    counts
}

/// The cell counts of `sd Δ^2` and `sd² Δ^1` against chain counts and the
/// known values `(7, 12, 6)` and `(5, 4)`.
fn sd_counts(_: &SuiteConfig, _: &mut ChaCha8Rng) -> Result<Outcome> {
    let d2 = absolute(std_simplex(2));
    let d1 = absolute(std_simplex(1));
    let cases = [
        ("sd Δ^2", tower(&d2).level(1), flag_counts(&std_simplex(2)), vec![7, 12, 6]),
        ("sd² Δ^1", tower(&d1).level(2), flag_counts(&tower(&d1).level(1).set().clone()), vec![5, 4]),
    ];
    for (name, level, chains, known) in cases {
        let counts = level.set().counts();
        if counts != chains || counts != known {
            return fail(json!({ "space": name, "counts": counts, "chains": chains, "expected": known }));
        }
    }
    Ok(Outcome::Pass)
}

/// Top simplices of `Δ^p × Δ^q` for `p, q ≤ max_n + 1`.
fn product_counts(cfg: &SuiteConfig, _: &mut ChaCha8Rng) -> Result<Outcome> {
    let top = cfg.max_n + 1;
    for p in 0..=top {
        for q in 0..=top {
            let pr = product(&Arc::new(std_simplex(p)), &Arc::new(std_simplex(q)));
            let got = pr.set.count(p + q);
            let want = num_integer::binomial(p + q, p);
            if got != want || pr.set.dim() != p + q {
                return fail(json!({ "p": p, "q": q, "count": got, "expected": want }));
            }
        }
    }
    Ok(Outcome::Pass)
}

fn mu_kernel_samples(cfg: &SuiteConfig, rng: &mut ChaCha8Rng, samples: usize, relative: bool) -> Result<Outcome> {
    let pairs = [("(I,∂I)", interval_pair()), ("(I,{1})", interval_mod_end())];
    let b = Algebra::poly1();
    let mut nonzero = 0;
    for i in 0..samples {
        let (a, c) = (rng.gen_range(0..2), rng.gen_range(0..2));
        let r = rng.gen_range(0..=cfg.max_r);
        let s = rng.gen_range(0..=cfg.max_r - r);
        let deg = rng.gen_range(0..=cfg.max_deg);
        let f = random_family(&b, &tower(&pairs[a].1).ctx(r), deg, relative, rng, |g| b.random_elem(g, 3, 3));
        let g = random_family(&Integers, &tower(&pairs[c].1).ctx(s), deg, relative, rng, small_coeff);
        let m = mu_tensor(&b, &[(f, g)])?;
        let expected = pairs[a].1.product(&pairs[c].1).0;
        let witness = |why: String| json!({ "sample": i, "left": pairs[a].0, "right": pairs[c].0, "r": r, "s": s, "reason": why });
        if *m.ctx.tower.base() != expected || m.ctx.r() != r + s {
            return fail(witness("output context".into()));
        }
        if let Err(e) = m.validate(&b) {
            return fail(witness(e.to_string()));
        }
        if let Err(e) = m.kernel_test() {
            return fail(witness(e.to_string()));
        }
        nonzero += usize::from(!m.is_zero());
    }
    nontrivial(nonzero)
}

/// 50 samples of `μ(f ⊗ g)` with `r + s ≤ max_r` and degree `≤ max_deg`.
fn mu_kernel(cfg: &SuiteConfig, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    mu_kernel_samples(cfg, rng, 50, true)
}

fn corrupted_mu_kernel(cfg: &SuiteConfig, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let cfg = SuiteConfig {
        max_deg: cfg.max_deg.max(1),
        ..cfg.clone()
    };
    mu_kernel_samples(&cfg, rng, 5, false)
}

/// 20 triples, degree `≤ min(max_deg, 2)`, levels `≤ 1` with sum `≤ max_r`.
fn mu_associativity(cfg: &SuiteConfig, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let pairs = [interval_pair(), interval_mod_end()];
    let b = Algebra::poly1();
    let deg = cfg.max_deg.min(2);
    let mut nonzero = 0;
    for i in 0..20 {
        let mut levels = [0usize; 3];
        for k in 0..3 {
            let used: usize = levels.iter().sum();
            levels[k] = rng.gen_range(0..=cfg.max_r.saturating_sub(used).min(1));
        }
        let ctx = |k: usize, rng: &mut ChaCha8Rng| tower(&pairs[rng.gen_range(0..2)]).ctx(levels[k]);
        let (c0, c1, c2) = (ctx(0, rng), ctx(1, rng), ctx(2, rng));
        let f = random_family(&b, &c0, deg, true, rng, |g| b.random_elem(g, 3, 3));
        let g = random_family(&Integers, &c1, deg, true, rng, small_coeff);
        let h = random_family(&Integers, &c2, deg, true, rng, small_coeff);
        let left = mu_tensor(&b, &[(mu_tensor(&b, &[(f.clone(), g.clone())])?, h.clone())])?;
        let right = mu_tensor(&b, &[(f, mu_tensor(&Integers, &[(g, h)])?)])?;
        if !left.eq_by_labels(&right) {
            return fail(json!({ "sample": i, "levels": levels }));
        }
        nonzero += usize::from(!left.is_zero());
    }
    nontrivial(nonzero)
}

/// The cylinder identities on every generator `t_v` of `Z^X` for
/// `X = Δ^n` (`n ≤ max_n + 1`) and `Δ^1 × Δ^1`, with the glued homotopy
/// validated as a family.
fn cylinder_homotopy(cfg: &SuiteConfig, _: &mut ChaCha8Rng) -> Result<Outcome> {
    let mut cyls: Vec<(String, Cylinder)> = (0..=cfg.max_n + 1).map(|n| (format!("Δ^{n}"), Cylinder::simplex(n))).collect();
    cyls.push(("Δ^1×Δ^1".into(), Cylinder::prism(1, 1)));
    for (name, cyl) in &cyls {
        for (v, t) in cyl.generators().iter().enumerate() {
            let witness = |why: String| json!({ "space": name, "generator": v, "reason": why });
            let h = match cyl.h(&Integers, t) {
                Ok(h) => h,
                Err(e) => return fail(witness(e.to_string())),
            };
            if let Err(e) = h.validate(&Integers) {
                return fail(witness(e.to_string()));
            }
            if let Err(e) = cyl.check(&Integers, t) {
                return fail(witness(e.to_string()));
            }
        }
    }
    Ok(Outcome::Pass)
}

/// 10 nested homotopies `H` into `(B^{S_n}_r)^{sd^s Δ^1}` with
/// `n ≤ min(max_n, 1)` and `r, s ≤ min(max_r, 1)`.
fn htilde_endpoints(cfg: &SuiteConfig, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let b = Algebra::poly1();
    let top = cfg.max_r.min(1);
    let deg = cfg.max_deg.min(2);
    let mut nonzero = 0;
    for i in 0..10 {
        let n = rng.gen_range(0..=cfg.max_n.min(1));
        let (r, s) = (rng.gen_range(0..=top), rng.gen_range(0..=top));
        let inner = tower(&cube_pair(n)).ctx(r);
        let outer = interval_ctx(s);
        let nested_ring = FamilyRing::new(FamilyRing::new(b, inner.clone()), outer.clone());
        let x = random_nested(&b, &inner, &outer, deg, false, rng, |g| b.random_elem(g, 3, 3));
        let h = AlgHom::new(FinPresAlgebra::free(&["a"]), vec![x])?;
        let (ht, report) = htilde(&b, &inner, &h, &nested_ring)?;
        if !report.passed() || ht.images[0].ctx.r() != r + s {
            return fail(json!({ "sample": i, "n": n, "r": r, "s": s, "ok": report.ok, "generator": report.witness }));
        }
        nonzero += usize::from(!ht.images[0].is_zero());
    }
    nontrivial(nonzero)
}

/// The inverse witness for 4 sampled `f: A → B^{S_1}_0` over each of
/// `poly1` and `matrix(2)`.
fn group_inverse(cfg: &SuiteConfig, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let s1 = tower(&circle_pair()).ctx(0);
    for b in [Algebra::poly1(), Algebra::matrix(2)] {
        for i in 0..4 {
            let f = random_family(&b, &s1, cfg.max_deg, true, rng, |g| b.random_elem(g, 3, 3));
            let hom = AlgHom::new(FinPresAlgebra::free(&["a"]), vec![f])?;
            let (_, report) = inverse_witness(&b, &hom)?;
            if !report.passed() {
                return fail(json!({ "algebra": b.name(), "sample": i, "report": report }));
            }
        }
    }
    Ok(Outcome::Pass)
}

/// `p ∘ s = id`, `p ∘ ι = 0` and `x − s p x ∈ ι(A)` on `P(n, B)^q_r` for
/// `n ≤ max_n`, `q ≤ max_q`, `r ≤ min(max_r, 1)`, and a pair on which the
/// splitting is not multiplicative.
fn path_extension(cfg: &SuiteConfig, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let b = Algebra::poly1();
    let deg = cfg.max_deg.min(2);
    for n in 0..=cfg.max_n {
        for q in 0..=cfg.max_q {
            for r in 0..=cfg.max_r.min(1) {
                let e = PathExtension::simplicial(b, n, q, r)?;
                let witness = |axiom: &str| json!({ "n": n, "q": q, "r": r, "axiom": axiom });
                let g = random_family(&b, &e.quo, deg, true, rng, |g| b.random_elem(g, 3, 3));
                let s = e.split(&g)?;
                if e.in_p(&s).is_err() || e.proj(&s)? != g {
                    return fail(witness("p ∘ s = id"));
                }
                let a = random_family(&b, &e.sub, deg, true, rng, |g| b.random_elem(g, 3, 3));
                if !e.proj(&e.incl(&a)?)?.is_zero() {
                    return fail(witness("p ∘ ι = 0"));
                }
                let x = random_family(&b, &e.mid, deg, true, rng, |g| b.random_elem(g, 3, 3));
                let k = x.sub(&b, &e.split(&e.proj(&x)?)?)?;
                match e.member(&k) {
                    Ok(a) if e.incl(&a)? == k => {}
                    _ => return fail(witness("ker p = ι(A)")),
                }
            }
        }
    }
    // s(t_0 t_1)^2 ≠ s((t_0 t_1)^2) on I
    let e = PathExtension::simplicial(Integers, 1, 0, 0)?;
    let f = hat(&e.quo, 0).mul(&Integers, &hat(&e.quo, 1))?;
    let mid = e.mid();
    let sf = e.split(&f)?;
    if mid.mul(&sf, &sf) == e.split(&f.mul(&Integers, &f)?)? {
        return fail(json!({ "axiom": "the splitting is not multiplicative" }));
    }
    Ok(Outcome::Pass)
}

fn poly_hom_into(ext: &PathExtension<Algebra>, deg: u32, rng: &mut ChaCha8Rng) -> Result<BuiltinHom<FamilyRing<Algebra>>> {
    let b = Algebra::poly1();
    let g = random_family(&b, &ext.quo, deg, true, rng, |r| b.random_elem(r, 3, 2));
    BuiltinHom::new(Algebra::free(1), vec![g], &ext.quo())
}

/// Strong morphism equations and uniqueness on words of length
/// `≤ max_word` for the universal extension of `matrix(2)` and for
/// `Λ^n`, `n ≤ 1`; `Λ^n(x) = Λ^n_id(J f (x))` on 30 words.
fn classifying_maps(cfg: &SuiteConfig, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let w = cfg.max_word.max(1);
    let a = Algebra::matrix(2);
    let u = classifying_hom(Arc::new(UniversalExtension::new(a)), a, hom_letters(&a, &BuiltinHom::identity(a)));
    for i in 0..5 {
        let x = u.source.random_elem(1, rng, 4, w);
        let y = u.source.random_elem(1, rng, 4, w);
        let report = u.check_strong(&x, &y)?;
        let j = u.source.random_j(1, rng, 4, w);
        if !report.passed() || u.xi(&j)? != j {
            return fail(json!({ "extension": "universal", "sample": i, "report": report }));
        }
    }
    let b = Algebra::poly1();
    let ta = TensorAlgebra::new(Algebra::free(1));
    for n in 0..=1 {
        let ext = PathExtension::new(b, n, None, 0)?;
        let f = poly_hom_into(&ext, cfg.max_deg.min(2), rng)?;
        let lam = lambda(&b, n, 0, Algebra::free(1), &f)?;
        let fr = ext.quo();
        for i in 0..3 {
            let x = ta.random_elem(1, rng, 3, w);
            let y = ta.random_elem(1, rng, 3, w);
            let report = lam.check_strong(&x, &y)?;
            if !report.passed() {
                return fail(json!({ "extension": format!("P({n},B)"), "sample": i, "report": report }));
            }
        }
        for i in 0..15 {
            let x = ta.random_j(1, rng, 3, w);
            let lhs = lam.xi(&x)?;
            let jf = FormalTensor::image(&x, |k| Ok(f.apply_basis(&fr, k)))?;
            if lambda_id(&ext, &jf)? != lhs || lhs.kernel_test().is_err() {
                return fail(json!({ "identity": "Λ = Λ_id ∘ J(f)", "n": n, "sample": i, "word": ta.render(&x) }));
            }
        }
    }
    Ok(Outcome::Pass)
}

fn cert_matches<E: Extension>(
    cert: &HomotopyCert<E::Sub>,
    c1: &Classifier<E>,
    c2: &Classifier<E>,
    samples: &[TensorElem],
) -> Result<(bool, bool)>
where
    <E::Sub as Ring>::Elem: PartialEq,
{
    let link = &cert.links[0];
    let mut distinct = false;
    for (k, x) in samples.iter().enumerate() {
        let (a, b) = (c1.xi(x)?, c2.xi(x)?);
        if link.f0.images[k] != a || link.f1.images[k] != b {
            return Ok((false, false));
        }
        distinct |= a != b;
    }
    Ok((cert.links.len() == 1, distinct))
}

/// The homotopy between the classifying maps for the splittings `t_0` and
/// `t_0^2` of `P(1, poly1)`, and for the universal extension of
/// `matrix(2)` with its standard and a twisted splitting.
fn splitting_independence(cfg: &SuiteConfig, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let w = cfg.max_word.clamp(1, 2);
    let b = Algebra::poly1();
    let e1 = Arc::new(PathExtension::new(b, 1, None, 0)?);
    let e2 = Arc::new(e1.resplit(2)?);
    let f = poly_hom_into(&e1, cfg.max_deg.min(2), rng)?;
    let fl = hom_letters(&e1.quo(), &f);
    let ta = TensorAlgebra::new(Algebra::free(1));
    let samples: Vec<TensorElem> = (0..4).map(|_| ta.random_j(1, rng, 3, w)).collect();
    let cert = classifying_homotopy(e1.clone(), e2.clone(), ta.clone(), 0, fl.clone(), &samples)?;
    let report = check_cert(&e1.sub(), &cert)?;
    let c1 = Classifier::new(e1, ta.clone(), 0, fl.clone());
    let c2 = Classifier::new(e2, ta, 0, fl);
    let (ends, distinct) = cert_matches(&cert, &c1, &c2, &samples)?;
    if !report.ok || !ends || !distinct {
        return fail(json!({ "extension": "P(1,B)", "check": report, "endpoints": ends, "distinct": distinct }));
    }
    let a = Algebra::matrix(2);
    let ua = Arc::new(UniversalExtension::new(a));
    let ut = Arc::new(UniversalExtension::twisted(a));
    let tm = TensorAlgebra::new(a);
    let xs: Vec<TensorElem> = (0..3).map(|_| tm.random_j(1, rng, 4, w)).collect();
    let id = hom_letters(&a, &BuiltinHom::identity(a));
    let cert = classifying_homotopy(ua.clone(), ut.clone(), tm.clone(), 0, id.clone(), &xs)?;
    let report = check_cert(&TensorRing::new(a, 1), &cert)?;
    let c1 = Classifier::new(ua, tm.clone(), 0, id.clone());
    let c2 = Classifier::new(ut, tm, 0, id);
    let (ends, distinct) = cert_matches(&cert, &c1, &c2, &xs)?;
    if !report.ok || !ends || !distinct {
        return fail(json!({ "extension": "U(matrix(2))", "check": report, "endpoints": ends, "distinct": distinct }));
    }
    Ok(Outcome::Pass)
}

/// The piecewise family on `Δ^1 × Δ^1` and the certificate that it is not
/// `μ` of polynomials of degree `≤ min(max_deg, 2)`.
fn mu_image(cfg: &SuiteConfig, _: &mut ChaCha8Rng) -> Result<Outcome> {
    let d = cfg.max_deg.min(2);
    let w = mu_image_witness(d)?;
    if w.family.validate(&Integers).is_err() || !w.verify() {
        return fail(json!({ "max_deg": d }));
    }
    Ok(Outcome::Pass)
}

/// 20 families on `sd^r ∂I^2` (`r ≤ min(max_r, 1)`, degree
/// `≤ min(max_deg, 2)`) extended to `sd^r I^2` and restricted back.
fn extend_section(cfg: &SuiteConfig, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let b = Algebra::poly1();
    let pair = cube_pair(2);
    let boundary = absolute((*pair.subcomplex().0).clone());
    for i in 0..20 {
        let r = rng.gen_range(0..=cfg.max_r.min(1));
        let deg = rng.gen_range(0..=cfg.max_deg.min(2));
        let ctx = tower(&pair).ctx(r);
        let g = random_family(&b, &tower(&boundary).ctx(r), deg, false, rng, |g| b.random_elem(g, 3, 3));
        let (e, _) = extend_family(&b, &ctx, &g, &ExtendOptions { degree: 0, cap: None })?;
        let back = e.restrict();
        let agrees = g
            .ctx
            .set()
            .cells()
            .all(|c| back.at_label(g.ctx.set().label(c)) == Some(g.component(c)));
        if e.validate(&b).is_err() || !agrees {
            return fail(json!({ "sample": i, "r": r, "degree": deg }));
        }
    }
    Ok(Outcome::Pass)
}

/// The comparison square for `v = 0`, `m = 1` on 10 words of length
/// `≤ max_word`, with a nonzero `f` of degree `≤ min(max_deg, 2)`.
fn comparison(cfg: &SuiteConfig, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let (v, m) = (0, 1);
    let b = Algebra::poly1();
    let ta = TensorAlgebra::new(Algebra::free(1));
    let ctx: Ctx = tower(&cube_pair(m + v)).ctx(0);
    let fr = FamilyRing::new(b, ctx.clone());
    // f = 0 would make the square commute vacuously
    let g = loop {
        let g = random_family(&b, &ctx, cfg.max_deg.min(2), true, rng, |r| b.random_elem(r, 3, 2));
        if !g.is_zero() {
            break g;
        }
    };
    let f = hom_letters(&fr, &BuiltinHom::new(Algebra::free(1), vec![g], &fr)?);
    let samples: Vec<TensorElem> = (0..10).map(|_| ta.random_j(v + 1, rng, 3, cfg.max_word.max(1))).collect();
    let report = comparison_square(&b, v, m, 0, &ta, f.clone(), &samples)?;
    if !report.passed() {
        return fail(serde_json::to_value(&report).expect("report serializes"));
    }
    let lam = classify_path(&b, m + v, None, 0, ta, 0, f)?;
    let mut nonzero = 0;
    for x in &samples {
        nonzero += usize::from(!lam.xi(x)?.is_zero());
    }
    nontrivial(nonzero)
}

fn free1() -> FinPresAlgebra {
    FinPresAlgebra::free(&["a"])
}

/// A seeded chain of `links` links over `poly1`, each at a level
/// `≤ max_level`, starting at a random value.
pub fn random_chain(rng: &mut ChaCha8Rng, links: usize, max_level: usize, deg: u32) -> Result<HomotopyCert<Algebra>> {
    let b = Algebra::poly1();
    let mut start = b.random_elem(rng, 3, 3);
    let mut out = Vec::new();
    for _ in 0..links {
        let level = rng.gen_range(0..=max_level);
        let ctx = interval_ctx(level);
        let fam = random_family(&b, &ctx, deg, false, rng, |g| b.random_elem(g, 3, 3));
        let shift = b.sub(&start, &end_value(&b, &fam, 0)?);
        let fam = fam.add(&b, &PolyFamily::constant(&b, &ctx, 0, shift))?;
        let link = SubdividedHomotopy::from_hom(&b, level, AlgHom::new(free1(), vec![fam])?)?;
        start = link.f1.images[0].clone();
        out.push(link);
    }
    Ok(HomotopyCert { links: out })
}

/// 20 chains of 1 to 3 links at levels `≤ min(max_r, 1)`: `check_cert` on
/// the chain, its reverse, both whiskerings and the concatenation of its
/// halves, whose level is one more than the larger collapsed level.
fn cert_calculus(cfg: &SuiteConfig, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let b = Algebra::poly1();
    let x = b.generator(1);
    let square = BuiltinHom::new(b, vec![b.generator(0), b.mul(&x, &x)], &b)?;
    let pre = Precomposition {
        source: HomSource::Presented(Arc::new(FinPresAlgebra::free(&["p", "q"]))),
        words: vec![free1().parse_element("a*a")?, free1().parse_element("a + a*a*a")?],
    };
    for i in 0..20 {
        let links = rng.gen_range(1..=3);
        let chain = random_chain(rng, links, cfg.max_r.min(1), cfg.max_deg.min(2))?;
        let witness = |what: &str| json!({ "chain": i, "links": links, "levels": chain.links.iter().map(|l| l.level).collect::<Vec<_>>(), "failed": what });
        let ok = |c: &HomotopyCert<Algebra>| -> Result<bool> { Ok(check_cert(&b, c)?.ok) };
        if !ok(&chain)? {
            return fail(witness("chain"));
        }
        let back = reverse(&b, &chain)?;
        if !ok(&back)? || back.start().map(|f| &f.images) != chain.end().map(|f| &f.images) {
            return fail(witness("reverse"));
        }
        if !ok(&whisker_left(&b, |y| square.apply(&b, y), &chain)?)? {
            return fail(witness("whisker_left"));
        }
        if !ok(&whisker_right(&b, &chain, &pre)?)? {
            return fail(witness("whisker_right"));
        }
        let (first, rest) = if links == 1 {
            (chain.clone(), back.clone())
        } else {
            let cut = rng.gen_range(1..links);
            (
                HomotopyCert { links: chain.links[..cut].to_vec() },
                HomotopyCert { links: chain.links[cut..].to_vec() },
            )
        };
        let glued = concat(&b, &first, &rest)?;
        let expected_level = collapse(&b, &first)?.level.max(collapse(&b, &rest)?.level) + 1;
        let ends = glued.f0.images == first.links[0].f0.images && glued.f1.images == rest.links.last().unwrap().f1.images;
        if !ok(&HomotopyCert::single(glued.clone()))? || glued.level != expected_level || !ends {
            return fail(witness("concat"));
        }
    }
    Ok(Outcome::Pass)
}

/// The names of the registered checks.
pub fn check_names() -> BTreeSet<&'static str> {
    checks().iter().map(|c| c.name).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_is_sorted_and_anchored() {
        let all = checks();
        assert_eq!(all.len(), 15);
        assert!(all.windows(2).all(|w| w[0].name < w[1].name));
        assert!(all.iter().all(|c| !c.anchor.is_empty()));
    }

    #[test]
    fn empty_filter_gives_an_empty_report() {
        let r = run_suite(&SuiteConfig::default(), Some("nothing*")).unwrap();
        assert!(r.checks.is_empty() && r.passed());
        assert_eq!(render(&r, Format::Csv), "name,anchor,status,witness\n");
        assert!(run_suite(&SuiteConfig::default(), Some("[")).is_err());
    }

    #[test]
    fn corrupted_fixture_fails_with_a_witness() {
        let r = run_checks(&SuiteConfig::default(), &corrupted_fixture(), None).unwrap();
        assert_eq!(r.exit_code(), 1);
        assert!(r.checks[0].witness.as_ref().unwrap()["reason"].is_string());
        assert!(render(&r, Format::Csv).contains("#/checks/0/witness"));
    }

    #[test]
    fn seeds_differ_by_name() {
        assert_ne!(check_seed(0, "mu_kernel"), check_seed(0, "mu_associativity"));
        assert_ne!(check_seed(0, "mu_kernel"), check_seed(1, "mu_kernel"));
    }
}
