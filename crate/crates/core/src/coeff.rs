//! Coefficient algebras with exact normal forms, finitely presented source
//! algebras, and homomorphisms out of them.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::{Coordinates, Ring};

/// Index of a basis element. The meaning depends on the algebra:
/// `[]` is `1` in the integers and `x` in the dual algebra, `[k]` is `x^k`
/// in `poly1`, `[i, j]` is the matrix unit `e_ij`, and a free algebra uses
/// the word itself.
pub type Key = Vec<u32>;

/// The builtin algebras.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "algebra", rename_all = "lowercase", deny_unknown_fields)]
pub enum AlgebraKind {
    Integers,
    /// `Z[x]`, one central variable.
    Poly1,
    /// Square-zero: basis `{x}`, `x·x = 0`. Not unital.
    Dual,
    /// `k × k` integer matrices.
    Matrix { size: usize },
    /// Free nonunital algebra on `gens` generators.
    Free { gens: usize },
}

/// An element: finite integer combination of basis keys, zero coefficients
/// never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AlgElem(BTreeMap<Key, BigInt>);

impl AlgElem {
    pub fn zero() -> Self {
        AlgElem(BTreeMap::new())
    }

    pub fn basis(key: Key) -> Self {
        Self::term(key, BigInt::one())
    }

    pub fn term(key: Key, c: BigInt) -> Self {
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert(key, c);
        }
        AlgElem(m)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Key, &BigInt)> {
        self.0.iter()
    }

    pub fn from_terms<I: IntoIterator<Item = (Key, BigInt)>>(terms: I) -> Self {
        let mut out = AlgElem::zero();
        for (k, c) in terms {
            out.add_term(k, &c);
        }
        out
    }

    fn add_term(&mut self, k: Key, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        let e = self.0.entry(k.clone()).or_insert_with(BigInt::zero);
        *e += c;
        if e.is_zero() {
            self.0.remove(&k);
        }
    }
}

/// A basis-presented algebra over the integers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Algebra {
    kind: AlgebraKind,
}

impl Algebra {
    pub fn new(kind: AlgebraKind) -> Self {
        Algebra { kind }
    }

    /// Builtin by name: `integers`, `poly1`, `dual`, `matrix(k)`, `free(g)`.
    pub fn builtin(name: &str) -> Result<Self> {
        let name = name.trim();
        let arg = |prefix: &str| -> Option<usize> {
            name.strip_prefix(prefix)?
                .strip_prefix('(')?
                .strip_suffix(')')?
                .trim()
                .parse()
                .ok()
        };
        let kind = match name {
            "integers" | "Z" => AlgebraKind::Integers,
            "poly1" => AlgebraKind::Poly1,
            "dual" => AlgebraKind::Dual,
            _ => {
                if let Some(k) = arg("matrix").filter(|&k| k > 0) {
                    AlgebraKind::Matrix { size: k }
                } else if let Some(g) = arg("free").filter(|&g| g > 0) {
                    AlgebraKind::Free { gens: g }
                } else {
                    return Err(Error::UnknownAlgebra(name.to_string()));
                }
            }
        };
        Ok(Algebra { kind })
    }

    pub fn integers() -> Self {
        Self::new(AlgebraKind::Integers)
    }
    pub fn poly1() -> Self {
        Self::new(AlgebraKind::Poly1)
    }
    pub fn dual() -> Self {
        Self::new(AlgebraKind::Dual)
    }
    pub fn matrix(k: usize) -> Self {
        Self::new(AlgebraKind::Matrix { size: k })
    }
    pub fn free(g: usize) -> Self {
        Self::new(AlgebraKind::Free { gens: g })
    }

    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }

    pub fn name(&self) -> String {
        match self.kind {
            AlgebraKind::Integers => "integers".into(),
            AlgebraKind::Poly1 => "poly1".into(),
            AlgebraKind::Dual => "dual".into(),
            AlgebraKind::Matrix { size } => format!("matrix({size})"),
            AlgebraKind::Free { gens } => format!("free({gens})"),
        }
    }

    pub fn is_unital(&self) -> bool {
        matches!(
            self.kind,
            AlgebraKind::Integers | AlgebraKind::Poly1 | AlgebraKind::Matrix { .. }
        )
    }

    pub fn is_commutative(&self) -> bool {
        match self.kind {
            AlgebraKind::Integers | AlgebraKind::Poly1 | AlgebraKind::Dual => true,
            AlgebraKind::Matrix { size } => size == 1,
            AlgebraKind::Free { gens } => gens == 0,
        }
    }

    /// Number of basis elements, `None` when countably infinite.
    pub fn basis_len(&self) -> Option<usize> {
        match self.kind {
            AlgebraKind::Integers | AlgebraKind::Dual => Some(1),
            AlgebraKind::Matrix { size } => Some(size * size),
            AlgebraKind::Poly1 | AlgebraKind::Free { .. } => None,
        }
    }

    /// The basis key with the given index in the canonical enumeration.
    pub fn basis_key(&self, index: usize) -> Result<Key> {
        let out_of_range = || Error::IndexOutOfRange {
            index,
            what: format!("basis of {}", self.name()),
        };
        match self.kind {
            AlgebraKind::Integers | AlgebraKind::Dual => {
                if index == 0 {
                    Ok(vec![])
                } else {
                    Err(out_of_range())
                }
            }
            AlgebraKind::Poly1 => Ok(vec![index as u32]),
            AlgebraKind::Matrix { size } => {
                if index < size * size {
                    Ok(vec![(index / size) as u32, (index % size) as u32])
                } else {
                    Err(out_of_range())
                }
            }
            AlgebraKind::Free { gens } => {
                // shortlex over nonempty words
                let mut rem = index;
                let mut len = 1u32;
                let mut block = gens;
                while rem >= block {
                    rem -= block;
                    len += 1;
                    block = block.checked_mul(gens).ok_or_else(out_of_range)?;
                }
                let mut word = vec![0u32; len as usize];
                for slot in word.iter_mut().rev() {
                    *slot = (rem % gens) as u32;
                    rem /= gens;
                }
                Ok(word)
            }
        }
    }

    pub fn basis_index(&self, key: &Key) -> Result<usize> {
        let bad = || Error::Parse(format!("invalid basis key {key:?} for {}", self.name()));
        match self.kind {
            AlgebraKind::Integers | AlgebraKind::Dual => {
                if key.is_empty() {
                    Ok(0)
                } else {
                    Err(bad())
                }
            }
            AlgebraKind::Poly1 => match key.as_slice() {
                [k] => Ok(*k as usize),
                _ => Err(bad()),
            },
            AlgebraKind::Matrix { size } => match key.as_slice() {
                [i, j] if (*i as usize) < size && (*j as usize) < size => {
                    Ok(*i as usize * size + *j as usize)
                }
                _ => Err(bad()),
            },
            AlgebraKind::Free { gens } => {
                if key.is_empty() || key.iter().any(|&g| g as usize >= gens) {
                    return Err(bad());
                }
                let mut offset = 0usize;
                let mut block = gens;
                for _ in 1..key.len() {
                    offset += block;
                    block *= gens;
                }
                let mut rank = 0usize;
                for &g in key {
                    rank = rank * gens + g as usize;
                }
                Ok(offset + rank)
            }
        }
    }

    /// Structure constants: product of two basis elements.
    pub fn mult_basis(&self, a: &Key, b: &Key) -> AlgElem {
        match self.kind {
            AlgebraKind::Integers => AlgElem::basis(vec![]),
            AlgebraKind::Poly1 => AlgElem::basis(vec![a[0] + b[0]]),
            AlgebraKind::Dual => AlgElem::zero(),
            AlgebraKind::Matrix { .. } => {
                if a[1] == b[0] {
                    AlgElem::basis(vec![a[0], b[1]])
                } else {
                    AlgElem::zero()
                }
            }
            AlgebraKind::Free { .. } => {
                let mut w = a.clone();
                w.extend_from_slice(b);
                AlgElem::basis(w)
            }
        }
    }

    /// The multiplicative unit, when there is one.
    pub fn one(&self) -> Option<AlgElem> {
        match self.kind {
            AlgebraKind::Integers => Some(AlgElem::basis(vec![])),
            AlgebraKind::Poly1 => Some(AlgElem::basis(vec![0])),
            AlgebraKind::Matrix { size } => Some(AlgElem::from_terms(
                (0..size as u32).map(|i| (vec![i, i], BigInt::one())),
            )),
            _ => None,
        }
    }

    pub fn int(&self, k: i64) -> Option<AlgElem> {
        self.one().map(|e| self.scale(&BigInt::from(k), &e))
    }

    pub fn basis_name(&self, key: &Key) -> String {
        match self.kind {
            AlgebraKind::Integers => "1".into(),
            AlgebraKind::Poly1 => match key[0] {
                0 => "1".into(),
                1 => "x".into(),
                k => format!("x^{k}"),
            },
            AlgebraKind::Dual => "x".into(),
            AlgebraKind::Matrix { .. } => self.presentation().gens[self.basis_index(key).unwrap()].clone(),
            AlgebraKind::Free { gens } => key
                .iter()
                .map(|&g| free_gen_name(g as usize, gens))
                .collect::<Vec<_>>()
                .join("*"),
        }
    }

    pub fn display(&self, x: &AlgElem) -> String {
        if x.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, (k, c)) in x.terms().enumerate() {
            let name = self.basis_name(k);
            let mag = c.abs();
            if i == 0 {
                if c.is_negative() {
                    s.push('-');
                }
            } else {
                s.push_str(if c.is_negative() { " - " } else { " + " });
            }
            if mag.is_one() {
                s.push_str(&name);
            } else if name == "1" {
                s.push_str(&mag.to_string());
            } else {
                s.push_str(&format!("{mag}*{name}"));
            }
        }
        s
    }

    /// A presentation of the algebra by generators and relations, together
    /// with [`Algebra::basis_word`] expressing basis elements in generators.
    pub fn presentation(&self) -> FinPresAlgebra {
        match self.kind {
            AlgebraKind::Integers => FinPresAlgebra::parse(&["e"], &["e*e - e"]).unwrap(),
            AlgebraKind::Poly1 => {
                FinPresAlgebra::parse(&["e", "x"], &["e*e - e", "e*x - x", "x*e - x"]).unwrap()
            }
            AlgebraKind::Dual => FinPresAlgebra::parse(&["x"], &["x*x"]).unwrap(),
            AlgebraKind::Matrix { size } => {
                let name = |i: usize, j: usize| matrix_unit_name(i, j, size);
                let gens: Vec<String> = (0..size)
                    .flat_map(|i| (0..size).map(move |j| (i, j)))
                    .map(|(i, j)| name(i, j))
                    .collect();
                let mut rels = Vec::new();
                for i in 0..size {
                    for j in 0..size {
                        for k in 0..size {
                            for l in 0..size {
                                let lhs = format!("{}*{}", name(i, j), name(k, l));
                                rels.push(if j == k {
                                    format!("{lhs} - {}", name(i, l))
                                } else {
                                    lhs
                                });
                            }
                        }
                    }
                }
                let g: Vec<&str> = gens.iter().map(String::as_str).collect();
                let r: Vec<&str> = rels.iter().map(String::as_str).collect();
                FinPresAlgebra::parse(&g, &r).unwrap()
            }
            AlgebraKind::Free { gens } => {
                let names: Vec<String> = (0..gens).map(|g| free_gen_name(g, gens)).collect();
                let g: Vec<&str> = names.iter().map(String::as_str).collect();
                FinPresAlgebra::parse(&g, &[]).unwrap()
            }
        }
    }

    /// A basis element as a word in the generators of [`Algebra::presentation`].
    pub fn basis_word(&self, key: &Key) -> Vec<usize> {
        match self.kind {
            AlgebraKind::Integers | AlgebraKind::Dual => vec![0],
            AlgebraKind::Poly1 => {
                if key[0] == 0 {
                    vec![0]
                } else {
                    vec![1; key[0] as usize]
                }
            }
            AlgebraKind::Matrix { size } => vec![key[0] as usize * size + key[1] as usize],
            AlgebraKind::Free { .. } => key.iter().map(|&g| g as usize).collect(),
        }
    }

    /// Image of generator `i` of the presentation.
    pub fn generator(&self, i: usize) -> AlgElem {
        match self.kind {
            AlgebraKind::Integers => AlgElem::basis(vec![]),
            AlgebraKind::Poly1 => AlgElem::basis(vec![i as u32]),
            AlgebraKind::Dual => AlgElem::basis(vec![]),
            AlgebraKind::Matrix { .. } => AlgElem::basis(self.basis_key(i).unwrap()),
            AlgebraKind::Free { .. } => AlgElem::basis(vec![i as u32]),
        }
    }

    /// Keys with index below `bound`, for exhaustive checks.
    pub fn basis_up_to(&self, bound: usize) -> Vec<Key> {
        let n = self.basis_len().map_or(bound, |l| l.min(bound));
        (0..n).map(|i| self.basis_key(i).unwrap()).collect()
    }

    /// Seeded random element over the first `max_index` basis elements.
    pub fn random_elem<G: rand::Rng>(&self, rng: &mut G, max_index: usize, max_coeff: i64) -> AlgElem {
        let keys = self.basis_up_to(max_index.max(1));
        let nterms = rng.gen_range(1..=keys.len().min(3));
        AlgElem::from_terms((0..nterms).map(|_| {
            let k = keys[rng.gen_range(0..keys.len())].clone();
            let mut c = rng.gen_range(-max_coeff..=max_coeff);
            if c == 0 {
                c = 1;
            }
            (k, BigInt::from(c))
        }))
    }
}

fn matrix_unit_name(i: usize, j: usize, size: usize) -> String {
    if size <= 9 {
        format!("e{}{}", i + 1, j + 1)
    } else {
        format!("e{}_{}", i + 1, j + 1)
    }
}

fn free_gen_name(g: usize, gens: usize) -> String {
    if gens <= 26 {
        ((b'a' + g as u8) as char).to_string()
    } else {
        format!("a{g}")
    }
}

impl Ring for Algebra {
    type Elem = AlgElem;

    fn zero(&self) -> AlgElem {
        AlgElem::zero()
    }
    fn add(&self, a: &AlgElem, b: &AlgElem) -> AlgElem {
        let mut out = a.clone();
        for (k, c) in b.terms() {
            out.add_term(k.clone(), c);
        }
        out
    }
    fn neg(&self, a: &AlgElem) -> AlgElem {
        AlgElem(a.0.iter().map(|(k, c)| (k.clone(), -c)).collect())
    }
    fn mul(&self, a: &AlgElem, b: &AlgElem) -> AlgElem {
        let mut out = AlgElem::zero();
        for (ka, ca) in a.terms() {
            for (kb, cb) in b.terms() {
                let prod = ca * cb;
                for (k, c) in self.mult_basis(ka, kb).terms() {
                    out.add_term(k.clone(), &(&prod * c));
                }
            }
        }
        out
    }
    fn scale(&self, k: &BigInt, a: &AlgElem) -> AlgElem {
        if k.is_zero() {
            return AlgElem::zero();
        }
        AlgElem(a.0.iter().map(|(key, c)| (key.clone(), k * c)).collect())
    }
    fn is_zero(&self, a: &AlgElem) -> bool {
        a.is_zero()
    }
}

impl Coordinates for Algebra {
    fn coordinates(&self, a: &AlgElem) -> Vec<(Key, BigInt)> {
        a.terms().map(|(k, c)| (k.clone(), c.clone())).collect()
    }
    fn from_coordinates(&self, terms: Vec<(Key, BigInt)>) -> AlgElem {
        AlgElem::from_terms(terms)
    }
}

/// A noncommutative integer polynomial without constant term: words over
/// generator indices.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NcPoly(pub BTreeMap<Vec<usize>, BigInt>);

impl NcPoly {
    pub fn word(w: Vec<usize>) -> Self {
        let mut m = BTreeMap::new();
        m.insert(w, BigInt::one());
        NcPoly(m)
    }

    fn add_term(&mut self, w: Vec<usize>, c: BigInt) {
        let e = self.0.entry(w.clone()).or_insert_with(BigInt::zero);
        *e += c;
        if e.is_zero() {
            self.0.remove(&w);
        }
    }

    /// Evaluates in `ring`, generator `i` going to `images[i]`.
    pub fn eval<R: Ring>(&self, ring: &R, images: &[R::Elem]) -> R::Elem {
        let mut acc = ring.zero();
        for (w, c) in &self.0 {
            let prod = ring
                .product(w.iter().map(|&g| &images[g]))
                .expect("words are nonempty");
            acc = ring.add(&acc, &ring.scale(c, &prod));
        }
        acc
    }

    pub fn render(&self, gens: &[String]) -> String {
        if self.0.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, (w, c)) in self.0.iter().enumerate() {
            let word = w.iter().map(|&g| gens[g].as_str()).collect::<Vec<_>>().join("*");
            if i > 0 {
                s.push_str(if c.is_negative() { " - " } else { " + " });
            } else if c.is_negative() {
                s.push('-');
            }
            if c.abs().is_one() {
                s.push_str(&word);
            } else {
                s.push_str(&format!("{}*{}", c.abs(), word));
            }
        }
        s
    }
}

/// An algebra given by generators and relations. Relations are
/// noncommutative integer polynomials without constant term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinPresAlgebra {
    pub gens: Vec<String>,
    pub rels: Vec<NcPoly>,
}

impl FinPresAlgebra {
    pub fn free(gens: &[&str]) -> Self {
        FinPresAlgebra {
            gens: gens.iter().map(|s| s.to_string()).collect(),
            rels: vec![],
        }
    }

    pub fn parse(gens: &[&str], rels: &[&str]) -> Result<Self> {
        let gens: Vec<String> = gens.iter().map(|s| s.trim().to_string()).collect();
        for (i, g) in gens.iter().enumerate() {
            let valid = g
                .chars()
                .next()
                .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && g.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !valid || gens[..i].contains(g) {
                return Err(Error::Parse(format!("invalid generator name `{g}`")));
            }
        }
        let rels = rels
            .iter()
            .map(|r| parse_ncpoly(r, &gens))
            .collect::<Result<Vec<_>>>()?;
        Ok(FinPresAlgebra { gens, rels })
    }

    pub fn rel_strings(&self) -> Vec<String> {
        self.rels.iter().map(|r| r.render(&self.gens)).collect()
    }

    pub fn parse_element(&self, s: &str) -> Result<NcPoly> {
        parse_ncpoly(s, &self.gens)
    }
}

/// Parses sums of products such as `2*a*b - b^2*a + c`.
fn parse_ncpoly(s: &str, gens: &[String]) -> Result<NcPoly> {
    let err = |m: &str| Error::Parse(format!("{m} in `{s}`"));
    let mut out = NcPoly::default();
    let src: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if src.is_empty() || src == "0" {
        return Ok(out);
    }
    let mut i = 0;
    let bytes = src.as_bytes();
    while i < bytes.len() {
        let mut sign = BigInt::one();
        if bytes[i] == b'+' || bytes[i] == b'-' {
            if bytes[i] == b'-' {
                sign = -sign;
            }
            i += 1;
        } else if i > 0 {
            return Err(err("expected sign"));
        }
        let start = i;
        while i < bytes.len() && bytes[i] != b'+' && bytes[i] != b'-' {
            i += 1;
        }
        let term = &src[start..i];
        if term.is_empty() {
            return Err(err("empty term"));
        }
        let mut coeff = sign;
        let mut word = Vec::new();
        for factor in term.split('*') {
            let (base, exp) = match factor.split_once('^') {
                Some((b, e)) => (b, e.parse::<usize>().map_err(|_| err("bad exponent"))?),
                None => (factor, 1),
            };
            if let Ok(k) = base.parse::<BigInt>() {
                coeff *= num_traits::pow(k, exp);
            } else if let Some(g) = gens.iter().position(|g| g == base) {
                word.extend(std::iter::repeat_n(g, exp));
            } else {
                return Err(err(&format!("unknown generator `{base}`")));
            }
        }
        if word.is_empty() {
            return Err(err("constant term in a nonunital polynomial"));
        }
        out.add_term(word, coeff);
    }
    Ok(out)
}

/// Where a homomorphism's domain data comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HomSource {
    /// Images are given on generators; relations are checked.
    Presented(Arc<FinPresAlgebra>),
    /// Images are values of an evaluator on named sample elements; there is
    /// nothing to check beyond the values themselves.
    Sampled(Arc<Vec<String>>),
}

impl HomSource {
    pub fn len(&self) -> usize {
        match self {
            HomSource::Presented(a) => a.gens.len(),
            HomSource::Sampled(s) => s.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn point_names(&self) -> Vec<String> {
        match self {
            HomSource::Presented(a) => a.gens.clone(),
            HomSource::Sampled(s) => s.as_ref().clone(),
        }
    }
}

/// A homomorphism into the ring `R`, given by the images of the source's
/// generators (or sample points).
#[derive(Clone, Debug)]
pub struct AlgHom<R: Ring> {
    pub source: HomSource,
    pub images: Vec<R::Elem>,
}

impl<R: Ring> AlgHom<R> {
    pub fn new(source: FinPresAlgebra, images: Vec<R::Elem>) -> Result<Self> {
        if source.gens.len() != images.len() {
            return Err(Error::GeneratorCount {
                expected: source.gens.len(),
                got: images.len(),
            });
        }
        Ok(AlgHom {
            source: HomSource::Presented(Arc::new(source)),
            images,
        })
    }

    pub fn sampled(names: Vec<String>, images: Vec<R::Elem>) -> Result<Self> {
        if names.len() != images.len() {
            return Err(Error::GeneratorCount {
                expected: names.len(),
                got: images.len(),
            });
        }
        Ok(AlgHom {
            source: HomSource::Sampled(Arc::new(names)),
            images,
        })
    }

    pub fn with_images<S: Ring>(&self, images: Vec<S::Elem>) -> AlgHom<S> {
        assert_eq!(images.len(), self.images.len());
        AlgHom {
            source: self.source.clone(),
            images,
        }
    }

    pub fn map<S: Ring, F: FnMut(&R::Elem) -> S::Elem>(&self, f: F) -> AlgHom<S> {
        self.with_images(self.images.iter().map(f).collect())
    }

    pub fn try_map<S: Ring, F: FnMut(&R::Elem) -> Result<S::Elem>>(&self, f: F) -> Result<AlgHom<S>> {
        Ok(self.with_images(self.images.iter().map(f).collect::<Result<Vec<_>>>()?))
    }

    /// Checks that every relation of the source maps to zero. On failure the
    /// error names the first failing relation.
    pub fn check(&self, ring: &R) -> Result<()> {
        if let HomSource::Presented(a) = &self.source {
            if a.gens.len() != self.images.len() {
                return Err(Error::GeneratorCount {
                    expected: a.gens.len(),
                    got: self.images.len(),
                });
            }
            for rel in &a.rels {
                if !ring.is_zero(&rel.eval(ring, &self.images)) {
                    return Err(Error::NotAHom {
                        relation: rel.render(&a.gens),
                    });
                }
            }
        }
        Ok(())
    }

    /// Evaluates a polynomial in the source generators.
    pub fn eval(&self, ring: &R, p: &NcPoly) -> R::Elem {
        p.eval(ring, &self.images)
    }
}

/// A homomorphism out of a builtin algebra, given on the generators of its
/// presentation. Applying it to an element expands basis elements into
/// generator words.
#[derive(Clone, Debug)]
pub struct BuiltinHom<R: Ring> {
    pub source: Algebra,
    pub hom: AlgHom<R>,
}

impl<R: Ring> BuiltinHom<R> {
    pub fn new(source: Algebra, images: Vec<R::Elem>, ring: &R) -> Result<Self> {
        let hom = AlgHom::new(source.presentation(), images)?;
        hom.check(ring)?;
        Ok(BuiltinHom { source, hom })
    }

    pub fn apply_basis(&self, ring: &R, key: &Key) -> R::Elem {
        let w = self.source.basis_word(key);
        ring.product(w.iter().map(|&g| &self.hom.images[g]))
            .expect("basis words are nonempty")
    }

    pub fn apply(&self, ring: &R, x: &AlgElem) -> R::Elem {
        let mut acc = ring.zero();
        for (k, c) in x.terms() {
            acc = ring.add(&acc, &ring.scale(c, &self.apply_basis(ring, k)));
        }
        acc
    }
}

impl BuiltinHom<Algebra> {
    pub fn identity(a: Algebra) -> Self {
        let n = a.presentation().gens.len();
        let images = (0..n).map(|i| a.generator(i)).collect();
        BuiltinHom::new(a, images, &a).expect("identity is a homomorphism")
    }
}

impl fmt::Display for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(k: i64) -> BigInt {
        BigInt::from(k)
    }

    #[test]
    fn builtins_by_name() {
        assert_eq!(Algebra::builtin("matrix(2)").unwrap(), Algebra::matrix(2));
        assert_eq!(Algebra::builtin("free(3)").unwrap(), Algebra::free(3));
        assert!(matches!(
            Algebra::builtin("quaternions"),
            Err(Error::UnknownAlgebra(_))
        ));
    }

    #[test]
    fn integers_basis_is_one() {
        let a = Algebra::integers();
        assert_eq!(a.basis_up_to(10), vec![Vec::<u32>::new()]);
        assert_eq!(a.mult_basis(&vec![], &vec![]), AlgElem::basis(vec![]));
    }

    #[test]
    fn dual_squares_to_zero() {
        let a = Algebra::dual();
        let x = AlgElem::basis(vec![]);
        assert!(a.is_zero(&a.mul(&x, &x)));
    }

    #[test]
    fn matrix_units() {
        let a = Algebra::matrix(2);
        let e = |i, j| AlgElem::basis(vec![i, j]);
        assert_eq!(a.mul(&e(0, 1), &e(1, 0)), e(0, 0));
        assert!(a.mul(&e(0, 0), &e(1, 1)).is_zero());
    }

    #[test]
    fn x_minus_x_is_zero() {
        let a = Algebra::poly1();
        let x = AlgElem::basis(vec![1]);
        assert!(a.sub(&x, &x).is_zero());
    }

    #[test]
    fn basis_enumeration_roundtrips() {
        for a in [Algebra::poly1(), Algebra::matrix(3), Algebra::free(2), Algebra::dual()] {
            for i in 0..a.basis_len().unwrap_or(40) {
                let k = a.basis_key(i).unwrap();
                assert_eq!(a.basis_index(&k).unwrap(), i, "{a} {k:?}");
            }
        }
        assert_eq!(Algebra::free(2).basis_key(2).unwrap(), vec![0, 0]);
    }

    #[test]
    fn associativity_on_basis_triples() {
        for a in [
            Algebra::integers(),
            Algebra::poly1(),
            Algebra::dual(),
            Algebra::matrix(2),
            Algebra::matrix(3),
            Algebra::free(2),
        ] {
            let keys = a.basis_up_to(9);
            for x in &keys {
                for y in &keys {
                    for w in &keys {
                        let (x, y, w) = (AlgElem::basis(x.clone()), AlgElem::basis(y.clone()), AlgElem::basis(w.clone()));
                        assert_eq!(a.mul(&a.mul(&x, &y), &w), a.mul(&x, &a.mul(&y, &w)));
                    }
                }
            }
        }
    }

    #[test]
    fn parse_relations() {
        let a = FinPresAlgebra::parse(&["a", "b"], &["a*b - b*a", "2*a^2 + b"]).unwrap();
        assert_eq!(a.rels[0].0.len(), 2);
        assert_eq!(a.rels[1].0.get(&vec![0, 0]), Some(&z(2)));
        assert!(FinPresAlgebra::parse(&["a"], &["a + 1"]).is_err());
        assert!(FinPresAlgebra::parse(&["a"], &["c"]).is_err());
    }

    #[test]
    fn check_hom_examples() {
        let free1 = FinPresAlgebra::free(&["a"]);
        let any = AlgHom::<Algebra>::new(free1, vec![AlgElem::basis(vec![3])]).unwrap();
        assert!(any.check(&Algebra::poly1()).is_ok());

        let nil = FinPresAlgebra::parse(&["a"], &["a*a"]).unwrap();
        let to_dual = AlgHom::<Algebra>::new(nil.clone(), vec![AlgElem::basis(vec![])]).unwrap();
        assert!(to_dual.check(&Algebra::dual()).is_ok());

        let one = Algebra::matrix(1).one().unwrap();
        let bad = AlgHom::<Algebra>::new(nil, vec![one]).unwrap();
        assert_eq!(
            bad.check(&Algebra::matrix(1)),
            Err(Error::NotAHom { relation: "a*a".into() })
        );
        assert!(matches!(
            AlgHom::<Algebra>::new(FinPresAlgebra::free(&["a", "b"]), vec![]),
            Err(Error::GeneratorCount { .. })
        ));
    }

    #[test]
    fn presentations_hold_in_their_algebras() {
        for a in [
            Algebra::integers(),
            Algebra::poly1(),
            Algebra::dual(),
            Algebra::matrix(2),
            Algebra::free(3),
        ] {
            let id = BuiltinHom::identity(a);
            for k in a.basis_up_to(12) {
                assert_eq!(id.apply_basis(&a, &k), AlgElem::basis(k.clone()));
            }
        }
    }

    #[test]
    fn display() {
        let a = Algebra::poly1();
        let x = AlgElem::from_terms([(vec![2], z(3)), (vec![0], z(-1))]);
        assert_eq!(a.display(&x), "-1 + 3*x^2");
    }
}
