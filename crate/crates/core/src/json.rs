//! JSON documents for sets, families, homomorphisms, certificates, tensor
//! elements and stage diagrams. Coefficients live in a builtin algebra.
//!
//! Integers are JSON numbers when they fit in an `i64` and decimal strings
//! otherwise. An algebra element is a list of `[key, coeff]` pairs, a
//! polynomial a list of `{"exp": [...], "coeff": element}` terms, and a
//! family maps simplex labels (at its subdivision level) to polynomials.
//! Only maximal simplices are written; on input any cells may be given and
//! the rest are derived, so inconsistent data is reported with the label of
//! the offending simplex.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::coeff::{AlgElem, AlgHom, Algebra, FinPresAlgebra, HomSource};
use crate::error::{Error, Result};
use crate::homotopy::{interval_ctx, HomotopyCert, SubdividedHomotopy};
use crate::mapspace::{simplex_space, MapSimplex, StageDiagram};
use crate::poly::{Monomial, Poly};
use crate::polyfun::{maximal_cells, Ctx, FamilyRing, PolyFamily};
use crate::sset::{cube_pair, std_simplex, SimplicialPair, SimplicialSet};
use crate::tensor::{Letter, TensorElem};

fn schema(path: &str, message: impl Into<String>) -> Error {
    Error::Schema {
        path: path.to_string(),
        message: message.into(),
    }
}

/// Parses a document, rejecting unknown fields with the path of the first
/// offending value.
pub fn from_str<T: DeserializeOwned>(text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        schema(&path, e.into_inner().to_string())
    })
}

fn from_value<T: DeserializeOwned>(v: Value, path: &str) -> Result<T> {
    serde_path_to_error::deserialize(v).map_err(|e| schema(&format!("{path}{}", e.path()), e.into_inner().to_string()))
}

pub fn int_to_json(c: &BigInt) -> Value {
    match i64::try_from(c) {
        Ok(k) => json!(k),
        Err(_) => json!(c.to_string()),
    }
}

pub fn int_from_json(v: &Value, path: &str) -> Result<BigInt> {
    match v {
        Value::Number(n) => n.as_i64().map(BigInt::from).ok_or_else(|| schema(path, "expected an integer")),
        Value::String(s) => s.parse().map_err(|_| schema(path, format!("`{s}` is not an integer"))),
        _ => Err(schema(path, "expected an integer")),
    }
}

pub fn elem_to_json(x: &AlgElem) -> Value {
    Value::Array(x.terms().map(|(k, c)| json!([k, int_to_json(c)])).collect())
}

pub fn elem_from_json(alg: &Algebra, v: &Value, path: &str) -> Result<AlgElem> {
    let terms = v.as_array().ok_or_else(|| schema(path, "expected a list of [key, coeff] pairs"))?;
    let mut out = Vec::new();
    for (i, t) in terms.iter().enumerate() {
        let p = format!("{path}[{i}]");
        let pair = t.as_array().filter(|a| a.len() == 2).ok_or_else(|| schema(&p, "expected [key, coeff]"))?;
        let key: Vec<u32> = from_value(pair[0].clone(), &format!("{p}[0]"))?;
        alg.basis_index(&key).map_err(|e| schema(&format!("{p}[0]"), e.to_string()))?;
        out.push((key, int_from_json(&pair[1], &format!("{p}[1]"))?));
    }
    Ok(AlgElem::from_terms(out))
}

pub fn poly_to_json(p: &Poly<AlgElem>) -> Value {
    Value::Array(p.terms().map(|(m, c)| json!({"exp": m.0, "coeff": elem_to_json(c)})).collect())
}

pub fn poly_from_json(alg: &Algebra, nvars: usize, v: &Value, path: &str) -> Result<Poly<AlgElem>> {
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct Term {
        exp: Vec<u32>,
        coeff: Value,
    }
    let terms: Vec<Term> = from_value(v.clone(), path)?;
    let mut out = Vec::new();
    for (i, t) in terms.into_iter().enumerate() {
        let p = format!("{path}[{i}]");
        if t.exp.len() != nvars {
            return Err(schema(&format!("{p}.exp"), format!("expected {nvars} exponents")));
        }
        out.push((Monomial(t.exp), elem_from_json(alg, &t.coeff, &format!("{p}.coeff"))?));
    }
    Ok(Poly::from_terms(alg, nvars, out))
}

/// A simplicial set by its labels and face indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetDoc {
    pub labels: Vec<Vec<String>>,
    pub faces: Vec<Vec<Vec<usize>>>,
}

pub fn set_to_doc(x: &SimplicialSet) -> SetDoc {
    SetDoc {
        labels: x.labels().to_vec(),
        faces: x.face_table().to_vec(),
    }
}

pub fn set_from_doc(d: SetDoc) -> Result<SimplicialSet> {
    SimplicialSet::new(d.labels, d.faces)
}

/// A simplicial pair: a named space or explicit data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum SpaceDoc {
    /// `(Δ^q, ∅)`.
    Simplex { q: usize },
    /// `(I^n, ∂I^n)`, or `(I^n × Δ^q, ∂I^n × Δ^q)` when `q` is given.
    Cube {
        n: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        q: Option<usize>,
    },
    Explicit {
        set: SetDoc,
        /// Labels generating the subcomplex.
        #[serde(default)]
        sub: Vec<String>,
    },
}

pub fn space_from_doc(d: &SpaceDoc) -> Result<SimplicialPair> {
    Ok(match d {
        SpaceDoc::Simplex { q } => SimplicialPair::absolute(Arc::new(std_simplex(*q))),
        SpaceDoc::Cube { n, q: None } => cube_pair(*n),
        SpaceDoc::Cube { n, q: Some(q) } => simplex_space(*n, *q),
        SpaceDoc::Explicit { set, sub } => {
            let set = Arc::new(set_from_doc(set.clone())?);
            let subs: Vec<&str> = sub.iter().map(String::as_str).collect();
            SimplicialPair::generated(set, &subs)?
        }
    })
}

/// A named description when one of the small named spaces matches.
pub fn space_to_doc(p: &SimplicialPair) -> SpaceDoc {
    let (dim, verts) = (p.set.dim(), p.set.count(0));
    if verts == dim + 1 && SimplicialPair::absolute(Arc::new(std_simplex(dim))) == *p {
        return SpaceDoc::Simplex { q: dim };
    }
    for n in 1..=dim {
        if verts == 1 << n && n == dim && cube_pair(n) == *p {
            return SpaceDoc::Cube { n, q: None };
        }
        let q = dim - n;
        if verts == (1 << n) * (q + 1) && simplex_space(n, q) == *p {
            return SpaceDoc::Cube { n, q: Some(q) };
        }
    }
    SpaceDoc::Explicit {
        set: set_to_doc(&p.set),
        sub: p.sub_labels(),
    }
}

/// Simplex label to polynomial.
pub type Components = BTreeMap<String, Value>;

pub fn components_to_json(f: &PolyFamily<AlgElem>) -> Components {
    let set = f.ctx.set();
    maximal_cells(set)
        .into_iter()
        .map(|c| (set.label(c).to_string(), poly_to_json(f.component(c))))
        .collect()
}

pub fn components_from_json(alg: &Algebra, ctx: &Ctx, comps: &Components, path: &str) -> Result<PolyFamily<AlgElem>> {
    let set = ctx.set();
    let mut given = BTreeMap::new();
    for (label, v) in comps {
        let p = format!("{path}.{label}");
        let cell = set.lookup(label).ok_or_else(|| schema(&p, format!("no simplex `{label}` at level {}", ctx.r())))?;
        given.insert(cell, poly_from_json(alg, cell.0, v, &p)?);
    }
    PolyFamily::from_cells(alg, ctx, 0, |c| given.remove(&c)).map_err(|e| match e {
        Error::ContextMismatch(m) => schema(path, m),
        other => other,
    })
}

/// A family with its coefficient algebra, space and level.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyDoc {
    pub ring: String,
    pub space: SpaceDoc,
    pub level: usize,
    pub components: Components,
}

pub fn encode_family(ring: &Algebra, f: &PolyFamily<AlgElem>) -> FamilyDoc {
    FamilyDoc {
        ring: ring.name(),
        space: space_to_doc(f.ctx.tower.base()),
        level: f.ctx.r(),
        components: components_to_json(f),
    }
}

pub fn decode_family(d: &FamilyDoc) -> Result<(Algebra, PolyFamily<AlgElem>)> {
    let alg = Algebra::builtin(&d.ring)?;
    let ctx = Ctx::of(&space_from_doc(&d.space)?, d.level);
    Ok((alg, components_from_json(&alg, &ctx, &d.components, "components")?))
}

/// The source of a homomorphism.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum SourceDoc {
    /// The presentation of a builtin algebra.
    Builtin(String),
    Presented {
        gens: Vec<String>,
        #[serde(default)]
        rels: Vec<String>,
    },
    /// Named sample points of an evaluator.
    Sampled(Vec<String>),
}

/// A decoded source.
pub struct Source {
    pub hom_source: HomSource,
    pub builtin: Option<Algebra>,
}

pub fn source_from_doc(d: &SourceDoc) -> Result<Source> {
    Ok(match d {
        SourceDoc::Builtin(name) => {
            let a = Algebra::builtin(name)?;
            Source {
                hom_source: HomSource::Presented(Arc::new(a.presentation())),
                builtin: Some(a),
            }
        }
        SourceDoc::Presented { gens, rels } => {
            let g: Vec<&str> = gens.iter().map(String::as_str).collect();
            let r: Vec<&str> = rels.iter().map(String::as_str).collect();
            Source {
                hom_source: HomSource::Presented(Arc::new(FinPresAlgebra::parse(&g, &r)?)),
                builtin: None,
            }
        }
        SourceDoc::Sampled(names) => Source {
            hom_source: HomSource::Sampled(Arc::new(names.clone())),
            builtin: None,
        },
    })
}

pub fn source_to_doc(s: &HomSource, builtin: Option<Algebra>) -> SourceDoc {
    match (s, builtin) {
        (_, Some(a)) => SourceDoc::Builtin(a.name()),
        (HomSource::Presented(p), None) => SourceDoc::Presented {
            gens: p.gens.clone(),
            rels: p.rel_strings(),
        },
        (HomSource::Sampled(names), None) => SourceDoc::Sampled(names.as_ref().clone()),
    }
}

fn hom_with<R: crate::Ring>(source: &HomSource, images: Vec<R::Elem>) -> Result<AlgHom<R>> {
    match source {
        HomSource::Presented(p) => AlgHom::new(p.as_ref().clone(), images),
        HomSource::Sampled(n) => AlgHom::sampled(n.as_ref().clone(), images),
    }
}

/// A homomorphism into `B^{sd^r K}` relative to `L`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomDoc {
    pub source: SourceDoc,
    pub ring: String,
    pub space: SpaceDoc,
    pub level: usize,
    pub images: Vec<Components>,
}

/// A decoded homomorphism into a family ring.
pub struct DecodedHom {
    pub ring: Algebra,
    pub builtin: Option<Algebra>,
    pub ctx: Ctx,
    pub hom: AlgHom<FamilyRing<Algebra>>,
}

pub fn decode_hom(d: &HomDoc) -> Result<DecodedHom> {
    let ring = Algebra::builtin(&d.ring)?;
    let src = source_from_doc(&d.source)?;
    let ctx = Ctx::of(&space_from_doc(&d.space)?, d.level);
    let images = d
        .images
        .iter()
        .enumerate()
        .map(|(i, c)| components_from_json(&ring, &ctx, c, &format!("images[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    let hom = hom_with(&src.hom_source, images)?;
    hom.check(&FamilyRing::new(ring, ctx.clone()))?;
    Ok(DecodedHom {
        ring,
        builtin: src.builtin,
        ctx,
        hom,
    })
}

pub fn encode_hom(ring: &Algebra, ctx: &Ctx, hom: &AlgHom<FamilyRing<Algebra>>, builtin: Option<Algebra>) -> HomDoc {
    HomDoc {
        source: source_to_doc(&hom.source, builtin),
        ring: ring.name(),
        space: space_to_doc(ctx.tower.base()),
        level: ctx.r(),
        images: hom.images.iter().map(components_to_json).collect(),
    }
}

/// One elementary link of a certificate; images are families on
/// `sd^level Δ^1`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkDoc {
    pub level: usize,
    pub images: Vec<Components>,
    pub f0: Vec<Value>,
    pub f1: Vec<Value>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertDoc {
    pub source: SourceDoc,
    pub ring: String,
    pub links: Vec<LinkDoc>,
}

pub fn encode_cert(ring: &Algebra, cert: &HomotopyCert<Algebra>, builtin: Option<Algebra>) -> Result<CertDoc> {
    let first = cert.links.first().ok_or_else(|| schema("links", "a certificate has at least one link"))?;
    Ok(CertDoc {
        source: source_to_doc(&first.hom.source, builtin),
        ring: ring.name(),
        links: cert
            .links
            .iter()
            .map(|l| LinkDoc {
                level: l.level,
                images: l.hom.images.iter().map(components_to_json).collect(),
                f0: l.f0.images.iter().map(elem_to_json).collect(),
                f1: l.f1.images.iter().map(elem_to_json).collect(),
            })
            .collect(),
    })
}

/// Decodes without checking the links (see [`crate::homotopy::check_cert`]).
pub fn decode_cert(d: &CertDoc) -> Result<(Algebra, HomotopyCert<Algebra>)> {
    let ring = Algebra::builtin(&d.ring)?;
    let src = source_from_doc(&d.source)?;
    let mut links = Vec::new();
    for (k, l) in d.links.iter().enumerate() {
        let ctx = interval_ctx(l.level);
        let p = format!("links[{k}]");
        let images = l
            .images
            .iter()
            .enumerate()
            .map(|(i, c)| components_from_json(&ring, &ctx, c, &format!("{p}.images[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        let ends = |vs: &[Value], name: &str| -> Result<AlgHom<Algebra>> {
            let xs = vs
                .iter()
                .enumerate()
                .map(|(i, v)| elem_from_json(&ring, v, &format!("{p}.{name}[{i}]")))
                .collect::<Result<Vec<_>>>()?;
            hom_with(&src.hom_source, xs)
        };
        links.push(SubdividedHomotopy {
            level: l.level,
            hom: hom_with(&src.hom_source, images)?,
            f0: ends(&l.f0, "f0")?,
            f1: ends(&l.f1, "f1")?,
        });
    }
    if links.is_empty() {
        return Err(schema("links", "a certificate has at least one link"));
    }
    Ok((ring, HomotopyCert { links }))
}

/// A letter: a basis index of the base algebra or a list of letters.
pub fn letter_to_json(alg: &Algebra, l: &Letter) -> Value {
    match l {
        Letter::Atom(k) => json!(alg.basis_index(k).expect("valid key")),
        Letter::Word(ls) => Value::Array(ls.iter().map(|m| letter_to_json(alg, m)).collect()),
    }
}

pub fn letter_from_json(alg: &Algebra, v: &Value, path: &str) -> Result<Letter> {
    match v {
        Value::Number(n) => {
            let i = n.as_u64().ok_or_else(|| schema(path, "expected a basis index"))?;
            Ok(Letter::Atom(alg.basis_key(i as usize).map_err(|e| schema(path, e.to_string()))?))
        }
        Value::Array(ls) if !ls.is_empty() => Ok(Letter::Word(
            ls.iter()
                .enumerate()
                .map(|(i, m)| letter_from_json(alg, m, &format!("{path}[{i}]")))
                .collect::<Result<Vec<_>>>()?,
        )),
        _ => Err(schema(path, "expected a basis index or a nonempty word")),
    }
}

/// `[{"coeff": c, "word": [letter, ...]}]`: a combination of tensor words.
pub fn tensor_to_json(alg: &Algebra, x: &TensorElem) -> Value {
    Value::Array(
        x.terms()
            .map(|(l, c)| match l {
                Letter::Word(ls) => json!({"coeff": int_to_json(c), "word": ls.iter().map(|m| letter_to_json(alg, m)).collect::<Vec<_>>()}),
                Letter::Atom(_) => json!({"coeff": int_to_json(c), "word": [letter_to_json(alg, l)]}),
            })
            .collect(),
    )
}

pub fn tensor_from_json(alg: &Algebra, v: &Value, path: &str) -> Result<TensorElem> {
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct Term {
        coeff: Value,
        word: Vec<Value>,
    }
    let terms: Vec<Term> = from_value(v.clone(), path)?;
    let mut out = Vec::new();
    let mut depth = None;
    for (i, t) in terms.into_iter().enumerate() {
        let p = format!("{path}[{i}]");
        if t.word.is_empty() {
            return Err(schema(&format!("{p}.word"), "empty word"));
        }
        let ls = t
            .word
            .iter()
            .enumerate()
            .map(|(j, m)| letter_from_json(alg, m, &format!("{p}.word[{j}]")))
            .collect::<Result<Vec<_>>>()?;
        let w = Letter::Word(ls);
        if *depth.get_or_insert(w.depth()) != w.depth() || !uniform(&w) {
            return Err(schema(&p, "words of different tensor levels"));
        }
        out.push((w, int_from_json(&t.coeff, &format!("{p}.coeff"))?));
    }
    Ok(TensorElem::from_terms(out))
}

/// Whether all letters inside a word sit at the same level.
fn uniform(l: &Letter) -> bool {
    match l {
        Letter::Atom(_) => true,
        Letter::Word(ls) => ls.iter().all(|m| m.depth() == ls[0].depth() && uniform(m)),
    }
}

/// A stage diagram of vertices and edges of `Ω^n Ex^∞ Hom(A, B^Δ)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramDoc {
    pub source: SourceDoc,
    pub ring: String,
    pub n: usize,
    pub vertices: Vec<VertexDoc>,
    #[serde(default)]
    pub edges: Vec<EdgeDoc>,
}

/// A vertex: images on `I^n × Δ^0` at stage `level`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexDoc {
    pub id: String,
    pub level: usize,
    pub images: Vec<Components>,
}

/// An edge: images on `I^n × Δ^1` at stage `level`, from `d_1` to `d_0`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDoc {
    pub from: String,
    pub to: String,
    pub level: usize,
    pub images: Vec<Components>,
}

/// A simplex of `Ω^n` given by generator images.
pub fn simplex_from_json(
    ring: &Algebra,
    src: &Source,
    n: usize,
    q: usize,
    level: usize,
    images: &[Components],
    path: &str,
) -> Result<MapSimplex<Algebra>> {
    let ctx = Ctx::of(&simplex_space(n, q), level);
    let images = images
        .iter()
        .enumerate()
        .map(|(i, c)| components_from_json(ring, &ctx, c, &format!("{path}.images[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    MapSimplex::from_hom(ring, n, q, level, hom_with(&src.hom_source, images)?, src.builtin)
}

pub fn decode_diagram(d: &DiagramDoc) -> Result<StageDiagram<Algebra>> {
    let ring = Algebra::builtin(&d.ring)?;
    let src = source_from_doc(&d.source)?;
    let mut out = StageDiagram::new(d.n);
    for (i, v) in d.vertices.iter().enumerate() {
        let x = simplex_from_json(&ring, &src, d.n, 0, v.level, &v.images, &format!("vertices[{i}]"))?;
        out.add_vertex(&v.id, x)?;
    }
    for (i, e) in d.edges.iter().enumerate() {
        let x = simplex_from_json(&ring, &src, d.n, 1, e.level, &e.images, &format!("edges[{i}]"))?;
        out.add_edge(&e.from, &e.to, x)?;
    }
    Ok(out)
}

pub fn encode_diagram(ring: &Algebra, d: &StageDiagram<Algebra>) -> Result<DiagramDoc> {
    let hom = |x: &MapSimplex<Algebra>| x.hom().cloned().ok_or_else(|| Error::InvalidMap("stage diagrams hold homomorphisms".into()));
    let first = d.vertices.first().ok_or_else(|| schema("vertices", "empty diagram"))?;
    let builtin = match &first.simplex.body {
        crate::mapspace::SimplexBody::Hom { builtin, .. } => *builtin,
        _ => None,
    };
    Ok(DiagramDoc {
        source: source_to_doc(&hom(&first.simplex)?.source, builtin),
        ring: ring.name(),
        n: d.n,
        vertices: d
            .vertices
            .iter()
            .map(|v| {
                Ok(VertexDoc {
                    id: v.id.clone(),
                    level: v.simplex.r,
                    images: hom(&v.simplex)?.images.iter().map(components_to_json).collect(),
                })
            })
            .collect::<Result<Vec<_>>>()?,
        edges: d
            .edges
            .iter()
            .map(|e| {
                Ok(EdgeDoc {
                    from: e.from.clone(),
                    to: e.to.clone(),
                    level: e.simplex.r,
                    images: hom(&e.simplex)?.images.iter().map(components_to_json).collect(),
                })
            })
            .collect::<Result<Vec<_>>>()?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homotopy::check_cert;
    use crate::polyfun::random_family;
    use crate::sset::subdivide;
    use crate::tensor::TensorAlgebra;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sets_round_trip() {
        let x = subdivide(&Arc::new(std_simplex(2))).set;
        let text = serde_json::to_string(&set_to_doc(&x)).unwrap();
        let back = set_from_doc(from_str(&text).unwrap()).unwrap();
        assert_eq!(back, *x);
        let p = cube_pair(2);
        assert_eq!(space_from_doc(&space_to_doc(&p)).unwrap(), p);
        let odd = SimplicialPair::generated(Arc::new(std_simplex(2)), &["0;1"]).unwrap();
        assert_eq!(space_from_doc(&space_to_doc(&odd)).unwrap(), odd);
    }

    #[test]
    fn families_round_trip_and_reject_incompatible_data() {
        let b = Algebra::poly1();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let ctx = Ctx::of(&cube_pair(2), 1);
        let f = random_family(&b, &ctx, 2, true, &mut rng, |r| b.random_elem(r, 3, 4));
        let doc = encode_family(&b, &f);
        let text = serde_json::to_string(&doc).unwrap();
        let (_, back) = decode_family(&from_str(&text).unwrap()).unwrap();
        assert_eq!(back, f);
        // an edge component that disagrees with its triangle
        let mut bad = doc.clone();
        let set = ctx.set();
        let edge = set.cells().find(|c| c.0 == 1).unwrap();
        let label = set.label(edge).to_string();
        bad.components.insert(label.clone(), json!([{"exp": [7], "coeff": [[[1], 1]]}]));
        match decode_family(&bad) {
            Err(Error::FaceIncompatible { label: l, .. }) => assert!(ctx.set().lookup(&l).is_some()),
            other => panic!("expected a face incompatibility, got {other:?}"),
        }
        let unknown = text.replacen("\"level\"", "\"colour\": 1, \"level\"", 1);
        assert!(matches!(from_str::<FamilyDoc>(&unknown), Err(Error::Schema { .. })));
    }

    #[test]
    fn certificates_round_trip() {
        let b = Algebra::poly1();
        let f = AlgHom::new(b.presentation(), vec![b.generator(0), b.generator(1)]).unwrap();
        let cert = HomotopyCert::refl(&b, &f);
        let doc = encode_cert(&b, &cert, Some(b)).unwrap();
        let text = serde_json::to_string_pretty(&doc).unwrap();
        let (_, back) = decode_cert(&from_str(&text).unwrap()).unwrap();
        assert!(check_cert(&b, &back).unwrap().ok);
        assert_eq!(back.links[0].hom.images, cert.links[0].hom.images);
        assert_eq!(back.links[0].f1.images, cert.links[0].f1.images);
    }

    #[test]
    fn tensors_round_trip() {
        let a = Algebra::matrix(2);
        let ta = TensorAlgebra::new(a);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for level in 1..=2 {
            let x = ta.random_elem(level, &mut rng, 4, 3);
            let v = tensor_to_json(&a, &x);
            assert_eq!(tensor_from_json(&a, &v, "x").unwrap(), x);
        }
        let big = json!([{"coeff": "123456789012345678901234567890", "word": [0, 1]}]);
        let x = tensor_from_json(&a, &big, "x").unwrap();
        assert_eq!(tensor_to_json(&a, &x), big);
        assert!(tensor_from_json(&a, &json!([{"coeff": 1, "word": [9]}]), "x").is_err());
    }
}
