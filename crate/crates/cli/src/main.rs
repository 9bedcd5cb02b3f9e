//! `shl`: command-line access to the library and the verification suite.
//!
//! All documents are JSON, read from a path or from stdin when the path is
//! `-`, and written to stdout. Exit status: 0 when every check holds, 1 when
//! a check fails, 2 on malformed input.

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde_json::{json, Value};

use shl::coeff::{AlgElem, AlgHom, Algebra, BuiltinHom, FinPresAlgebra};
use shl::extensions::{classifying_hom, classifying_homotopy, classify_path, hom_letters, Extension, PathExtension, TrivialExtension, UniversalExtension};
use shl::homotopy::{check_cert, concat, inverse_witness, reverse, HomotopyCert};
use shl::json::{self as codec, CertDoc, DiagramDoc, FamilyDoc, HomDoc, SpaceDoc};
use shl::mapspace::{comparison_square, decode_vertex, encode_vertex, simplex_pair, MapSimplex};
use shl::mult::{htilde, mu_image_witness, mu_tensor, random_nested, Cylinder};
use shl::polyfun::{extend_family, random_family, tower, Ctx, ExtendOptions, FamilyRing, PolyFamily};
use shl::sset::{cube_pair, SimplicialMap, SimplicialPair};
use shl::suite::{self, Format, SuiteConfig};
use shl::tensor::{TensorAlgebra, TensorElem, TensorRing};
use shl::{Error, Integers, Result, Ring};

#[derive(Parser)]
#[command(name = "shl", version, about = "Exact polynomial homotopy theory of algebras")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Simplicial sets and pairs.
    #[command(subcommand)]
    Sset(SsetCmd),
    /// Polynomial families.
    #[command(subcommand)]
    Fun(FunCmd),
    /// The multiplication μ.
    #[command(subcommand)]
    Mu(MuCmd),
    /// Homotopy certificates.
    #[command(subcommand)]
    Htpy(HtpyCmd),
    /// Extensions and classifying maps.
    #[command(subcommand)]
    Ext(ExtCmd),
    /// Simplices of the spaces of maps.
    #[command(subcommand)]
    Space(SpaceCmd),
    /// Runs the verification suite.
    Verify(VerifyArgs),
}

#[derive(Subcommand)]
enum SsetCmd {
    /// Prints a space as explicit data.
    Build { space: String },
    /// `(K,L)·(K',L') = (K × K', K × L' ∪ L × K')`.
    Product { left: String, right: String },
    /// `sd^r` of a pair.
    Subdivide {
        space: String,
        #[arg(long, default_value_t = 1)]
        times: usize,
    },
    /// The last vertex map `sd^from K → sd^to K`, cell by cell.
    Lastvertex {
        space: String,
        #[arg(long, default_value_t = 1)]
        from: usize,
        #[arg(long, default_value_t = 0)]
        to: usize,
    },
    /// Validates a space and prints its cell counts.
    Check { space: String },
}

#[derive(Subcommand)]
enum FunCmd {
    /// Pullback along a map given by vertex labels.
    Pullback {
        family: String,
        /// The source pair.
        #[arg(long)]
        source: String,
        /// A JSON object sending source vertex labels to target vertex labels.
        #[arg(long)]
        map: String,
    },
    /// Pointwise product of two families on one context.
    Mul { left: String, right: String },
    /// Whether a family vanishes on the subcomplex.
    KernelCheck { family: String },
    /// The image at a higher level under the last vertex maps.
    Transition {
        family: String,
        #[arg(long)]
        to: usize,
    },
    /// Extends a family on `sd^r L` to `sd^r K`.
    Extend {
        family: String,
        /// The pair `(K, L)`.
        #[arg(long)]
        space: String,
        #[arg(long, default_value_t = 0)]
        degree: u32,
        #[arg(long)]
        cap: Option<u32>,
    },
}

#[derive(Subcommand)]
enum MuCmd {
    /// `μ(f ⊗ g)` for `f` over any algebra and `g` over the integers.
    Apply { left: String, right: String },
    /// `μ(f ⊗ g)` and the check that it vanishes on `K×L' ∪ L×K'`.
    VerifyLemma { left: String, right: String },
    /// The endpoint square of `H̃` on seeded nested homotopies.
    Htilde {
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        r: usize,
        #[arg(long, default_value_t = 1)]
        s: usize,
        #[arg(long, default_value_t = 5)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// The cylinder identities on the generators of `Z^X`.
    Cylinder {
        #[arg(long, conflicts_with = "prism")]
        simplex: Option<usize>,
        /// `p,q` for `Δ^p × Δ^q`.
        #[arg(long)]
        prism: Option<String>,
    },
    /// A family on `Δ^1 × Δ^1` outside the image of `μ` in bounded degree.
    Witness {
        #[arg(long, default_value_t = 2)]
        max_deg: u32,
    },
}

#[derive(Subcommand)]
enum HtpyCmd {
    /// Checks every link and the chaining of endpoints.
    Check { cert: String },
    /// Glues two certificates into one link.
    Concat { first: String, second: String },
    /// The certificate run backwards, every link flipped.
    Reverse { cert: String },
    /// The group inverse witness of a map into `B^{S_1}_0`.
    InvertWitness { hom: String },
}

#[derive(Clone, Copy, ValueEnum)]
enum ExtKind {
    Universal,
    Twisted,
    Trivial,
}

#[derive(Subcommand)]
enum ExtCmd {
    /// `ξ` of the identity of `A` for the universal extension.
    Universal {
        #[arg(long)]
        algebra: String,
        /// A tensor in `JA`.
        tensor: String,
    },
    /// `ξ` of the identity of `A` for a chosen extension of `A`.
    Classify {
        #[arg(long)]
        algebra: String,
        #[arg(long, value_enum, default_value_t = ExtKind::Universal)]
        extension: ExtKind,
        tensor: String,
    },
    /// The homotopy between the standard and the twisted splitting of the
    /// universal extension, on a list of tensors.
    SplitHomotopy {
        #[arg(long)]
        algebra: String,
        samples: String,
    },
    /// Splits a family through the path extension `P(n, B)^q_r`.
    Path {
        /// A family on `I^n × Δ^q`, relative to `∂I^n × Δ^q`.
        family: String,
        /// Exponent of `t_0` in the splitting.
        #[arg(long, default_value_t = 1)]
        power: u32,
    },
    /// `Λ^n(f)` on a list of tensors, for `f: D → B^{S_n}_r` out of a builtin `D`.
    Lambda { hom: String, samples: String },
    /// `ζ^n(f)` on a list of tensors in `JD`, for `f: D → B^{(I^n, ∂I^n) × Δ^q}_r`.
    Zeta { hom: String, samples: String },
}

#[derive(Subcommand)]
enum SpaceCmd {
    /// Encodes `f: A → B^{S_n}_r` as a vertex and checks the round trip.
    Vertex { hom: String },
    /// A face or degeneracy of a simplex given on `I^n × Δ^q`.
    Face {
        hom: String,
        #[arg(long)]
        index: usize,
        #[arg(long)]
        degeneracy: bool,
    },
    /// `ζ` of a simplex, evaluated on a list of tensors.
    Zeta { hom: String, samples: String },
    /// Classes of a stage diagram.
    Pi0 { diagram: String },
    /// Both composites of the comparison square on seeded data.
    CompareSquare {
        #[arg(long, default_value_t = 0)]
        v: usize,
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        r: usize,
        #[arg(long, default_value_t = 10)]
        samples: usize,
        #[arg(long, default_value_t = 2)]
        max_deg: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Fixture {
    Corrupted,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 2)]
    max_r: usize,
    #[arg(long, default_value_t = 2)]
    max_n: usize,
    #[arg(long, default_value_t = 1)]
    max_q: usize,
    #[arg(long, default_value_t = 3)]
    max_deg: u32,
    #[arg(long, default_value_t = 3)]
    max_word: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Glob over check names.
    #[arg(long)]
    filter: Option<String>,
    /// text, markdown, csv or json.
    #[arg(long, default_value = "text")]
    format: String,
    /// Runs a fixture suite instead of the registered checks.
    #[arg(long, value_enum)]
    fixture: Option<Fixture>,
}

/// What a command prints and whether its checks held.
enum Output {
    Json(Value, bool),
    Text(String, bool),
}

fn ok(v: Value) -> Output {
    Output::Json(v, true)
}

fn read(path: &str) -> Result<String> {
    let mut s = String::new();
    if path == "-" {
        std::io::stdin().read_to_string(&mut s).map_err(|e| Error::Parse(format!("stdin: {e}")))?;
    } else {
        s = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{path}: {e}")))?;
    }
    Ok(s)
}

fn load<T: DeserializeOwned>(path: &str) -> Result<T> {
    codec::from_str(&read(path)?)
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn space(path: &str) -> Result<SimplicialPair> {
    codec::space_from_doc(&load::<SpaceDoc>(path)?)
}

fn explicit(p: &SimplicialPair) -> Value {
    to_value(&SpaceDoc::Explicit {
        set: codec::set_to_doc(&p.set),
        sub: p.sub_labels(),
    })
}

fn family(path: &str) -> Result<(Algebra, PolyFamily<AlgElem>)> {
    codec::decode_family(&load::<FamilyDoc>(path)?)
}

fn integer_family(path: &str) -> Result<PolyFamily<num_bigint::BigInt>> {
    let (alg, f) = family(path)?;
    if alg != Algebra::integers() {
        return Err(Error::ContextMismatch(format!("{path}: expected a family over the integers, got {}", alg.name())));
    }
    Ok(f.map_coeffs(&Integers, |c| c.terms().next().map(|(_, v)| v.clone()).unwrap_or_default()))
}

fn fam_json(ring: &Algebra, f: &PolyFamily<AlgElem>) -> Value {
    to_value(&codec::encode_family(ring, f))
}

fn tensors(alg: &Algebra, path: &str) -> Result<Vec<TensorElem>> {
    let v: Value = codec::from_str(&read(path)?)?;
    let items = v.as_array().ok_or_else(|| Error::Schema {
        path: "$".into(),
        message: "expected a list of tensors".into(),
    })?;
    items
        .iter()
        .enumerate()
        .map(|(i, t)| codec::tensor_from_json(alg, t, &format!("[{i}]")))
        .collect()
}

fn sset(cmd: SsetCmd) -> Result<Output> {
    Ok(match cmd {
        SsetCmd::Build { space: p } => {
            let pair = space(&p)?;
            ok(json!({ "space": explicit(&pair), "counts": pair.set.counts(), "sub_counts": pair.sub_counts() }))
        }
        SsetCmd::Product { left, right } => {
            let (pair, _) = space(&left)?.product(&space(&right)?);
            ok(to_value(&codec::space_to_doc(&pair)))
        }
        SsetCmd::Subdivide { space: p, times } => {
            let level = tower(&space(&p)?).level(times);
            ok(json!({ "space": explicit(&level.pair), "counts": level.set().counts() }))
        }
        SsetCmd::Lastvertex { space: p, from, to } => {
            let t = tower(&space(&p)?);
            let g = t.gamma(from, to)?;
            let src = t.level(from);
            let images: BTreeMap<String, String> = src
                .set()
                .cells()
                .map(|c| (src.set().label(c).to_string(), g.target().ref_label(g.image(c))))
                .collect();
            ok(json!({ "from": from, "to": to, "images": images }))
        }
        SsetCmd::Check { space: p } => {
            let pair = space(&p)?;
            pair.set.check()?;
            ok(json!({ "ok": true, "counts": pair.set.counts(), "sub_counts": pair.sub_counts(), "euler": pair.set.euler() }))
        }
    })
}

fn fun(cmd: FunCmd) -> Result<Output> {
    Ok(match cmd {
        FunCmd::Pullback { family: p, source, map } => {
            let (ring, f) = family(&p)?;
            let src = space(&source)?;
            let labels: BTreeMap<String, String> = load(&map)?;
            let target = f.ctx.tower.base().set.clone();
            let m = SimplicialMap::from_vertex_labels(src.set.clone(), target, |l| labels.get(l).cloned().unwrap_or_else(|| format!("<{l} unmapped>")))?;
            ok(fam_json(&ring, &f.pullback_base(&ring, &m, &src)?))
        }
        FunCmd::Mul { left, right } => {
            let (ring, f) = family(&left)?;
            let (ring2, g) = family(&right)?;
            if ring != ring2 {
                return Err(Error::ContextMismatch("families over different algebras".into()));
            }
            ok(fam_json(&ring, &f.mul(&ring, &g)?))
        }
        FunCmd::KernelCheck { family: p } => {
            let (_, f) = family(&p)?;
            match f.kernel_test() {
                Ok(()) => ok(json!({ "relative": true })),
                Err(Error::NotRelative { label }) => Output::Json(json!({ "relative": false, "witness": label }), false),
                Err(e) => return Err(e),
            }
        }
        FunCmd::Transition { family: p, to } => {
            let (ring, f) = family(&p)?;
            ok(fam_json(&ring, &f.to_level(&ring, to)?))
        }
        FunCmd::Extend { family: p, space: s, degree, cap } => {
            let (ring, g) = family(&p)?;
            let ctx = Ctx::of(&space(&s)?, g.ctx.r());
            let (e, deg) = extend_family(&ring, &ctx, &g, &ExtendOptions { degree, cap })?;
            ok(json!({ "degree": deg, "family": fam_json(&ring, &e) }))
        }
    })
}

fn mu(cmd: MuCmd) -> Result<Output> {
    Ok(match cmd {
        MuCmd::Apply { left, right } => {
            let (ring, f) = family(&left)?;
            let g = integer_family(&right)?;
            ok(fam_json(&ring, &mu_tensor(&ring, &[(f, g)])?))
        }
        MuCmd::VerifyLemma { left, right } => {
            let (ring, f) = family(&left)?;
            let g = integer_family(&right)?;
            f.kernel_test()?;
            g.kernel_test()?;
            let m = mu_tensor(&ring, &[(f, g)])?;
            match m.kernel_test() {
                Ok(()) => ok(json!({ "relative": true, "level": m.ctx.r() })),
                Err(Error::NotRelative { label }) => Output::Json(json!({ "relative": false, "witness": label }), false),
                Err(e) => return Err(e),
            }
        }
        MuCmd::Htilde { n, r, s, samples, seed } => {
            let b = Algebra::poly1();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let inner = tower(&cube_pair(n)).ctx(r);
            let outer = shl::homotopy::interval_ctx(s);
            let nested_ring = FamilyRing::new(FamilyRing::new(b, inner.clone()), outer.clone());
            let mut reports = Vec::new();
            let mut all = true;
            for _ in 0..samples {
                let x = random_nested(&b, &inner, &outer, 2, false, &mut rng, |g| b.random_elem(g, 3, 3));
                let h = AlgHom::new(FinPresAlgebra::free(&["a"]), vec![x])?;
                let (_, report) = htilde(&b, &inner, &h, &nested_ring)?;
                all &= report.passed();
                reports.push(json!({ "ok": report.ok, "witness": report.witness }));
            }
            Output::Json(json!({ "n": n, "r": r, "s": s, "samples": reports }), all)
        }
        MuCmd::Cylinder { simplex, prism } => {
            let cyl = match (simplex, prism) {
                (Some(n), None) => Cylinder::simplex(n),
                (None, Some(pq)) => {
                    let parts: Vec<usize> = pq
                        .split(',')
                        .map(|s| s.trim().parse().map_err(|_| Error::Parse(format!("bad prism `{pq}`"))))
                        .collect::<Result<_>>()?;
                    match parts[..] {
                        [p, q] => Cylinder::prism(p, q),
                        _ => return Err(Error::Parse(format!("bad prism `{pq}`"))),
                    }
                }
                _ => return Err(Error::Parse("give --simplex N or --prism P,Q".into())),
            };
            let mut failures = Vec::new();
            for (v, t) in cyl.generators().iter().enumerate() {
                if let Err(e) = cyl.check(&Integers, t) {
                    failures.push(json!({ "generator": v, "reason": e.to_string() }));
                }
            }
            let n = cyl.generators().len();
            Output::Json(json!({ "generators": n, "failures": failures }), failures.is_empty())
        }
        MuCmd::Witness { max_deg } => {
            let w = mu_image_witness(max_deg)?;
            let verified = w.verify();
            Output::Json(
                json!({
                    "max_deg": max_deg,
                    "family": fam_json(&Algebra::integers(), &w.family.map_coeffs(&Algebra::integers(), |c| Algebra::integers().scale(c, &Algebra::integers().one().unwrap()))),
                    "unknowns": w.unknowns,
                    "equations": w.matrix.len(),
                    "certificate": { "w": w.certificate.w.iter().map(codec::int_to_json).collect::<Vec<_>>(), "modulus": codec::int_to_json(&w.certificate.modulus) },
                    "verified": verified,
                }),
                verified,
            )
        }
    })
}

fn cert(path: &str) -> Result<(Algebra, HomotopyCert<Algebra>)> {
    codec::decode_cert(&load::<CertDoc>(path)?)
}

fn builtin_of(doc: &HomDoc) -> Option<Algebra> {
    match &doc.source {
        codec::SourceDoc::Builtin(name) => Algebra::builtin(name).ok(),
        _ => None,
    }
}

fn htpy(cmd: HtpyCmd) -> Result<Output> {
    Ok(match cmd {
        HtpyCmd::Check { cert: p } => {
            let (ring, c) = cert(&p)?;
            let report = check_cert(&ring, &c)?;
            Output::Json(to_value(&report), report.ok)
        }
        HtpyCmd::Concat { first, second } => {
            let (ring, a) = cert(&first)?;
            let (ring2, b) = cert(&second)?;
            if ring != ring2 {
                return Err(Error::ContextMismatch("certificates over different algebras".into()));
            }
            let link = concat(&ring, &a, &b)?;
            ok(to_value(&codec::encode_cert(&ring, &HomotopyCert::single(link), None)?))
        }
        HtpyCmd::Reverse { cert: p } => {
            let (ring, c) = cert(&p)?;
            ok(to_value(&codec::encode_cert(&ring, &reverse(&ring, &c)?, None)?))
        }
        HtpyCmd::InvertWitness { hom } => {
            let doc: HomDoc = load(&hom)?;
            let d = codec::decode_hom(&doc)?;
            let (alpha, report) = inverse_witness(&d.ring, &d.hom)?;
            let simplex = alpha.images.first().map(|x| x.ctx.clone()).unwrap_or_else(|| Ctx::of(&simplex_pair(2), 0));
            Output::Json(
                json!({ "alpha": codec::encode_hom(&d.ring, &simplex, &alpha, d.builtin), "report": report }),
                report.passed(),
            )
        }
    })
}

fn classify_with<E: Extension<Sub = TensorRing, Mid = TensorRing, Quo = Algebra>>(e: E, a: Algebra, x: &TensorElem) -> Result<Output> {
    let c = classifying_hom(Arc::new(e), a, hom_letters(&a, &BuiltinHom::identity(a)));
    let xi = c.xi(x)?;
    let report = c.check_strong(x, x)?;
    Ok(Output::Json(
        json!({ "xi": codec::tensor_to_json(&a, &xi), "strong": report }),
        report.passed(),
    ))
}

fn one_tensor(a: &Algebra, path: &str) -> Result<TensorElem> {
    let v: Value = codec::from_str(&read(path)?)?;
    codec::tensor_from_json(a, &v, "$")
}

/// A homomorphism out of a builtin algebra, as a module map on letters.
fn builtin_hom(path: &str) -> Result<(Algebra, Algebra, Ctx, BuiltinHom<FamilyRing<Algebra>>)> {
    let doc: HomDoc = load(path)?;
    let source = builtin_of(&doc).ok_or_else(|| Error::Schema {
        path: "source".into(),
        message: "expected a builtin source algebra".into(),
    })?;
    let d = codec::decode_hom(&doc)?;
    let fr = FamilyRing::new(d.ring, d.ctx.clone());
    let f = BuiltinHom::new(source, d.hom.images, &fr)?;
    Ok((d.ring, source, d.ctx, f))
}

/// `I^n`, or `I^n × Δ^q`, from the space of a homomorphism document.
fn cube_shape(path: &str) -> Result<(usize, Option<usize>)> {
    let doc: HomDoc = load(path)?;
    match doc.space {
        SpaceDoc::Cube { n, q } => Ok((n, q)),
        SpaceDoc::Simplex { q } => Ok((0, Some(q))),
        SpaceDoc::Explicit { .. } => Err(Error::Schema {
            path: "space".into(),
            message: "expected a cube or a simplex".into(),
        }),
    }
}

fn ext(cmd: ExtCmd) -> Result<Output> {
    match cmd {
        ExtCmd::Universal { algebra, tensor } => {
            let a = Algebra::builtin(&algebra)?;
            classify_with(UniversalExtension::new(a), a, &one_tensor(&a, &tensor)?)
        }
        ExtCmd::Classify { algebra, extension, tensor } => {
            let a = Algebra::builtin(&algebra)?;
            let x = one_tensor(&a, &tensor)?;
            match extension {
                ExtKind::Universal => classify_with(UniversalExtension::new(a), a, &x),
                ExtKind::Twisted => classify_with(UniversalExtension::twisted(a), a, &x),
                ExtKind::Trivial => {
                    let c = classifying_hom(Arc::new(TrivialExtension(a)), a, hom_letters(&a, &BuiltinHom::identity(a)));
                    let xi = c.xi(&x)?;
                    let report = c.check_strong(&x, &x)?;
                    Ok(Output::Json(json!({ "xi": codec::elem_to_json(&xi), "strong": report }), report.passed()))
                }
            }
        }
        ExtCmd::SplitHomotopy { algebra, samples } => {
            let a = Algebra::builtin(&algebra)?;
            let xs = tensors(&a, &samples)?;
            let cert = classifying_homotopy(
                Arc::new(UniversalExtension::new(a)),
                Arc::new(UniversalExtension::twisted(a)),
                TensorAlgebra::new(a),
                0,
                hom_letters(&a, &BuiltinHom::identity(a)),
                &xs,
            )?;
            let report = check_cert(&TensorRing::new(a, 1), &cert)?;
            let link = &cert.links[0];
            let ends = |xs: &[TensorElem]| xs.iter().map(|x| codec::tensor_to_json(&a, x)).collect::<Vec<_>>();
            Ok(Output::Json(
                json!({ "check": report, "f0": ends(&link.f0.images), "f1": ends(&link.f1.images) }),
                report.ok,
            ))
        }
        ExtCmd::Path { family: p, power } => {
            let (ring, g) = family(&p)?;
            let doc: FamilyDoc = load(&p)?;
            let (n, q) = match doc.space {
                SpaceDoc::Cube { n, q } => (n, q),
                SpaceDoc::Simplex { q } => (0, Some(q)),
                SpaceDoc::Explicit { .. } => {
                    return Err(Error::Schema {
                        path: "space".into(),
                        message: "expected a cube or a simplex".into(),
                    })
                }
            };
            let e = PathExtension::with_power(ring, n, q.map(simplex_pair), g.ctx.r(), power)?;
            let s = e.split(&g)?;
            e.in_p(&s)?;
            let back = e.proj(&s)? == g;
            Ok(Output::Json(json!({ "split": fam_json(&ring, &s), "projects_back": back }), back))
        }
        ExtCmd::Lambda { hom, samples } | ExtCmd::Zeta { hom, samples } => {
            let (n, q) = cube_shape(&hom)?;
            let (ring, source, ctx, f) = builtin_hom(&hom)?;
            let fr = FamilyRing::new(ring, ctx.clone());
            // the document gives `f` on `D` itself, so it is classified on `JD`
            let c = classify_path(&ring, n, q.map(simplex_pair), ctx.r(), TensorAlgebra::new(source), 0, hom_letters(&fr, &f))?;
            let values = tensors(&source, &samples)?
                .iter()
                .map(|x| Ok(fam_json(&ring, &c.xi(x)?)))
                .collect::<Result<Vec<_>>>()?;
            Ok(ok(json!({ "values": values })))
        }
    }
}

fn simplex(path: &str) -> Result<(HomDoc, MapSimplex<Algebra>)> {
    let doc: HomDoc = load(path)?;
    let (n, q) = match doc.space {
        SpaceDoc::Cube { n, q } => (n, q.unwrap_or(0)),
        SpaceDoc::Simplex { q } => (0, q),
        SpaceDoc::Explicit { .. } => {
            return Err(Error::Schema {
                path: "space".into(),
                message: "expected I^n × Δ^q".into(),
            })
        }
    };
    let d = codec::decode_hom(&doc)?;
    let x = MapSimplex::from_hom(&d.ring, n, q, doc.level, d.hom, d.builtin)?;
    Ok((doc, x))
}

fn space_cmd(cmd: SpaceCmd) -> Result<Output> {
    Ok(match cmd {
        SpaceCmd::Vertex { hom } => {
            let doc: HomDoc = load(&hom)?;
            let n = match doc.space {
                SpaceDoc::Cube { n, q: None } => n,
                SpaceDoc::Simplex { q: 0 } => 0,
                _ => {
                    return Err(Error::Schema {
                        path: "space".into(),
                        message: "expected the cube (I^n, ∂I^n)".into(),
                    })
                }
            };
            let d = codec::decode_hom(&doc)?;
            let x = encode_vertex(&d.ring, n, doc.level, &d.hom, d.builtin)?;
            let back = decode_vertex(&x)?;
            let round_trip = back.images == d.hom.images;
            let h = x.hom().expect("vertices are homomorphisms");
            Output::Json(
                json!({ "vertex": codec::encode_hom(&d.ring, &x.ctx(), h, d.builtin), "round_trip": round_trip }),
                round_trip,
            )
        }
        SpaceCmd::Face { hom, index, degeneracy } => {
            let (doc, x) = simplex(&hom)?;
            let y = if degeneracy { x.degeneracy(index)? } else { x.face(index)? };
            let h = y.hom().expect("homomorphism bodies stay homomorphisms");
            ok(to_value(&codec::encode_hom(&y.ring, &y.ctx(), h, builtin_of(&doc))))
        }
        SpaceCmd::Zeta { hom, samples } => {
            let (doc, x) = simplex(&hom)?;
            let source = builtin_of(&doc).ok_or_else(|| Error::Schema {
                path: "source".into(),
                message: "expected a builtin source algebra".into(),
            })?;
            let z = x.zeta_stage()?;
            let values = tensors(&source, &samples)?
                .iter()
                .map(|t| Ok(fam_json(&z.ring, &z.eval(t)?)))
                .collect::<Result<Vec<_>>>()?;
            ok(json!({ "n": z.n, "q": z.q, "r": z.r, "values": values }))
        }
        SpaceCmd::Pi0 { diagram } => {
            let d = codec::decode_diagram(&load::<DiagramDoc>(&diagram)?)?;
            ok(to_value(&d.pi0()?))
        }
        SpaceCmd::CompareSquare { v, m, r, samples, max_deg, seed } => {
            if v > 0 {
                return Err(Error::Parse("compare-square samples f only for v = 0".into()));
            }
            let b = Algebra::poly1();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let ta = TensorAlgebra::new(Algebra::free(1));
            let ctx = tower(&cube_pair(m)).ctx(r);
            let fr = FamilyRing::new(b, ctx.clone());
            let g = random_family(&b, &ctx, max_deg, true, &mut rng, |g| b.random_elem(g, 3, 2));
            let f = hom_letters(&fr, &BuiltinHom::new(Algebra::free(1), vec![g], &fr)?);
            let xs: Vec<TensorElem> = (0..samples).map(|_| ta.random_j(1, &mut rng, 3, 3)).collect();
            let report = comparison_square(&b, v, m, r, &ta, f, &xs)?;
            let passed = report.passed();
            Output::Json(to_value(&report), passed)
        }
    })
}

fn verify(args: VerifyArgs) -> Result<Output> {
    let cfg = SuiteConfig {
        max_r: args.max_r,
        max_n: args.max_n,
        max_q: args.max_q,
        max_deg: args.max_deg,
        max_word: args.max_word,
        seed: args.seed,
    };
    let format: Format = args.format.parse()?;
    let checks = match args.fixture {
        Some(Fixture::Corrupted) => suite::corrupted_fixture(),
        None => suite::checks(),
    };
    let report = suite::run_checks(&cfg, &checks, args.filter.as_deref())?;
    Ok(Output::Text(suite::render(&report, format), report.passed()))
}

fn run(cli: Cli) -> Result<Output> {
    match cli.cmd {
        Cmd::Sset(c) => sset(c),
        Cmd::Fun(c) => fun(c),
        Cmd::Mu(c) => mu(c),
        Cmd::Htpy(c) => htpy(c),
        Cmd::Ext(c) => ext(c),
        Cmd::Space(c) => space_cmd(c),
        Cmd::Verify(a) => verify(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(out) => {
            let (text, passed) = match out {
                Output::Json(v, passed) => (serde_json::to_string_pretty(&v).expect("json") + "\n", passed),
                Output::Text(s, passed) => (s, passed),
            };
            // a closed pipe downstream is not an error of ours
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            ExitCode::from(if passed { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
