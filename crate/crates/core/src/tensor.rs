//! Tensor algebras `TA` over a builtin algebra and their iterates.
//!
//! Level `0` is the underlying module of `A`, with basis letters
//! [`Letter::Atom`]. Level `k ≥ 1` is `X_k = T(X_{k-1})`, whose basis
//! letters are words [`Letter::Word`] in level `k-1` letters. `J^k A` is a
//! submodule of `X_k`; membership is decided exactly through the projection
//! `π_k = (1 - σ η) ∘ T(π_{k-1})`, which fixes exactly `J^k A`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::coeff::{AlgElem, Algebra, BuiltinHom, Key};
use crate::error::{Error, Result};
use crate::ring::Ring;

/// A basis element of some level.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Letter {
    Atom(Key),
    Word(Vec<Letter>),
}

impl Letter {
    pub fn depth(&self) -> usize {
        match self {
            Letter::Atom(_) => 0,
            Letter::Word(ls) => 1 + ls.first().map_or(0, Letter::depth),
        }
    }
}

/// An integer combination of letters of one level.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TensorElem(BTreeMap<Letter, BigInt>);

impl TensorElem {
    pub fn zero() -> Self {
        TensorElem(BTreeMap::new())
    }

    pub fn letter(l: Letter) -> Self {
        TensorElem(BTreeMap::from([(l, BigInt::one())]))
    }

    /// The basis word `⟨l_1|…|l_k⟩`.
    pub fn word(ls: Vec<Letter>) -> Self {
        Self::letter(Letter::Word(ls))
    }

    pub fn from_terms<I: IntoIterator<Item = (Letter, BigInt)>>(terms: I) -> Self {
        let mut out = TensorElem::zero();
        for (l, c) in terms {
            out.add_term(l, c);
        }
        out
    }

    fn add_term(&mut self, l: Letter, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let e = self.0.entry(l.clone()).or_insert_with(BigInt::zero);
        *e += c;
        if e.is_zero() {
            self.0.remove(&l);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Letter, &BigInt)> {
        self.0.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.0.len()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (l, c) in &other.0 {
            out.add_term(l.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        TensorElem(self.0.iter().map(|(l, c)| (l.clone(), -c)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return TensorElem::zero();
        }
        TensorElem(self.0.iter().map(|(l, c)| (l.clone(), k * c)).collect())
    }

    /// Longest word length (0 for atoms or zero).
    pub fn max_len(&self) -> usize {
        self.0
            .keys()
            .map(|l| match l {
                Letter::Word(ls) => ls.len(),
                Letter::Atom(_) => 0,
            })
            .max()
            .unwrap_or(0)
    }

    pub fn from_alg(x: &AlgElem) -> Self {
        TensorElem::from_terms(x.terms().map(|(k, c)| (Letter::Atom(k.clone()), c.clone())))
    }

    pub fn to_alg(&self) -> Result<AlgElem> {
        let terms = self
            .0
            .iter()
            .map(|(l, c)| match l {
                Letter::Atom(k) => Ok((k.clone(), c.clone())),
                Letter::Word(_) => Err(Error::DimensionMismatch("not a level 0 element".into())),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(AlgElem::from_terms(terms))
    }
}

/// The tower `A, TA, T(TA), …` over a builtin algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorAlgebra {
    pub base: Algebra,
}

impl TensorAlgebra {
    pub fn new(base: Algebra) -> Self {
        TensorAlgebra { base }
    }

    pub fn mul(&self, level: usize, a: &TensorElem, b: &TensorElem) -> Result<TensorElem> {
        let mut out = TensorElem::zero();
        for (la, ca) in a.terms() {
            for (lb, cb) in b.terms() {
                let c = ca * cb;
                match (la, lb) {
                    (Letter::Atom(x), Letter::Atom(y)) if level == 0 => {
                        for (k, d) in self.base.mult_basis(x, y).terms() {
                            out.add_term(Letter::Atom(k.clone()), &c * d);
                        }
                    }
                    (Letter::Word(x), Letter::Word(y)) if level > 0 => {
                        out.add_term(Letter::Word(x.iter().chain(y).cloned().collect()), c);
                    }
                    _ => return Err(Error::DimensionMismatch(format!("letters of the wrong level for {level}"))),
                }
            }
        }
        Ok(out)
    }

    /// `σ: X_{k-1} → X_k`, the length-one words.
    pub fn sigma(&self, x: &TensorElem) -> TensorElem {
        TensorElem::from_terms(x.terms().map(|(l, c)| (Letter::Word(vec![l.clone()]), c.clone())))
    }

    /// `η: X_k → X_{k-1}` for `k ≥ 1`, multiplying out each word.
    pub fn eta(&self, level: usize, x: &TensorElem) -> Result<TensorElem> {
        if level == 0 {
            return Err(Error::DimensionMismatch("η starts at level 1".into()));
        }
        let mut out = TensorElem::zero();
        for (l, c) in x.terms() {
            let Letter::Word(ls) = l else {
                return Err(Error::DimensionMismatch("η of an atom".into()));
            };
            let mut acc = TensorElem::letter(ls[0].clone());
            for m in &ls[1..] {
                acc = self.mul(level - 1, &acc, &TensorElem::letter(m.clone()))?;
            }
            out = out.add(&acc.scale(c));
        }
        Ok(out)
    }

    /// The multilinear word `⟨x_1|…|x_k⟩` of elements of one level.
    pub fn tensor_of(&self, entries: &[TensorElem]) -> TensorElem {
        let mut acc: Vec<(Vec<Letter>, BigInt)> = vec![(Vec::new(), BigInt::one())];
        for e in entries {
            let mut next = Vec::new();
            for (w, c) in &acc {
                for (l, d) in e.terms() {
                    let mut w2 = w.clone();
                    w2.push(l.clone());
                    next.push((w2, c * d));
                }
            }
            acc = next;
        }
        TensorElem::from_terms(acc.into_iter().map(|(w, c)| (Letter::Word(w), c)))
    }

    /// Applies a map on letters of level `k-1` entrywise to the words of
    /// level `k` (the functor `T` on a module map).
    pub fn tmap<F: FnMut(&Letter) -> Result<TensorElem>>(&self, x: &TensorElem, mut f: F) -> Result<TensorElem> {
        let mut cache: BTreeMap<Letter, TensorElem> = BTreeMap::new();
        let mut out = TensorElem::zero();
        for (l, c) in x.terms() {
            let Letter::Word(ls) = l else {
                return Err(Error::DimensionMismatch("T of an atom".into()));
            };
            let mut entries = Vec::with_capacity(ls.len());
            for m in ls {
                if !cache.contains_key(m) {
                    let v = f(m)?;
                    cache.insert(m.clone(), v);
                }
                entries.push(cache[m].clone());
            }
            out = out.add(&self.tensor_of(&entries).scale(c));
        }
        Ok(out)
    }

    /// The projection of `X_k` onto `J^k A`.
    pub fn proj_j(&self, level: usize, x: &TensorElem) -> Result<TensorElem> {
        if level == 0 {
            return Ok(x.clone());
        }
        let y = if level == 1 {
            x.clone()
        } else {
            self.tmap(x, |l| self.proj_j(level - 1, &TensorElem::letter(l.clone())))?
        };
        Ok(y.sub(&self.sigma(&self.eta(level, &y)?)))
    }

    /// Whether `x ∈ J^k A`.
    pub fn in_j(&self, level: usize, x: &TensorElem) -> Result<bool> {
        Ok(self.proj_j(level, x)? == *x)
    }

    /// A random basis letter of level `k`: atoms among the first `bound`
    /// basis elements, words of length at most `max_len`.
    pub fn random_letter<G: rand::Rng>(&self, level: usize, rng: &mut G, bound: usize, max_len: usize) -> Letter {
        if level == 0 {
            let keys = self.base.basis_up_to(bound);
            return Letter::Atom(keys.choose(rng).expect("nonempty basis").clone());
        }
        let len = rng.gen_range(1..=max_len.max(1));
        // inner letters stay short so deep levels remain small
        Letter::Word((0..len).map(|_| self.random_letter(level - 1, rng, bound, 2)).collect())
    }

    /// A random element of `X_k` with one to three terms.
    pub fn random_elem<G: rand::Rng>(&self, level: usize, rng: &mut G, bound: usize, max_len: usize) -> TensorElem {
        let n = rng.gen_range(1..=3);
        TensorElem::from_terms((0..n).map(|_| {
            let c = BigInt::from(rng.gen_range(1i64..=3) * if rng.gen_bool(0.5) { 1 } else { -1 });
            (self.random_letter(level, rng, bound, max_len), c)
        }))
    }

    /// A random element of `J^k A`.
    pub fn random_j<G: rand::Rng>(&self, level: usize, rng: &mut G, bound: usize, max_len: usize) -> TensorElem {
        loop {
            let x = self.random_elem(level, rng, bound, max_len);
            let p = self.proj_j(level, &x).expect("well formed sample");
            if !p.is_zero() {
                return p;
            }
        }
    }

    pub fn render_letter(&self, l: &Letter) -> String {
        match l {
            Letter::Atom(k) => self.base.basis_name(k),
            Letter::Word(ls) => format!("⟨{}⟩", ls.iter().map(|m| self.render_letter(m)).collect::<Vec<_>>().join("|")),
        }
    }

    pub fn render(&self, x: &TensorElem) -> String {
        if x.is_zero() {
            return "0".into();
        }
        x.terms()
            .map(|(l, c)| {
                if c.is_one() {
                    self.render_letter(l)
                } else {
                    format!("{c}·{}", self.render_letter(l))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// `X_k` as a ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorRing {
    pub alg: TensorAlgebra,
    pub level: usize,
}

impl TensorRing {
    pub fn new(base: Algebra, level: usize) -> Self {
        TensorRing {
            alg: TensorAlgebra::new(base),
            level,
        }
    }
}

impl Ring for TensorRing {
    type Elem = TensorElem;

    fn zero(&self) -> TensorElem {
        TensorElem::zero()
    }
    fn add(&self, a: &TensorElem, b: &TensorElem) -> TensorElem {
        a.add(b)
    }
    fn neg(&self, a: &TensorElem) -> TensorElem {
        a.neg()
    }
    fn mul(&self, a: &TensorElem, b: &TensorElem) -> TensorElem {
        self.alg.mul(self.level, a, b).expect("tensor ring: letters of its level")
    }
    fn scale(&self, k: &BigInt, a: &TensorElem) -> TensorElem {
        a.scale(k)
    }
    fn is_zero(&self, a: &TensorElem) -> bool {
        a.is_zero()
    }
}

/// `J(f) = T(f)|_{JA}` for `f: A → A'` between builtin algebras, on level 1.
pub fn j_on_hom(f: &BuiltinHom<Algebra>, target: &TensorAlgebra, x: &TensorElem) -> Result<TensorElem> {
    target.tmap(x, |l| match l {
        Letter::Atom(k) => Ok(TensorElem::from_alg(&f.apply_basis(&target.base, k))),
        Letter::Word(_) => Err(Error::DimensionMismatch("J(f) acts on level 1".into())),
    })
}

/// A tensor word whose entries are arbitrary elements of a ring, kept as an
/// unreduced sum: `Σ c ⟨x_1|…|x_k⟩`. This is `T(M)` for modules without a
/// chosen basis; maps out of it are multilinear, so no normal form is
/// needed to evaluate them.
#[derive(Clone, Debug, PartialEq)]
pub struct FormalTensor<E> {
    pub terms: Vec<(BigInt, Vec<E>)>,
}

impl<E: Clone> FormalTensor<E> {
    /// `T(f)(x)` for `x` of level 1 and `f` given on atoms.
    pub fn image<F: FnMut(&Key) -> Result<E>>(x: &TensorElem, mut f: F) -> Result<Self> {
        let mut cache: BTreeMap<Key, E> = BTreeMap::new();
        let mut terms = Vec::new();
        for (l, c) in x.terms() {
            let Letter::Word(ls) = l else {
                return Err(Error::DimensionMismatch("expected words".into()));
            };
            let mut entries = Vec::new();
            for m in ls {
                let Letter::Atom(k) = m else {
                    return Err(Error::DimensionMismatch("expected a level 1 word".into()));
                };
                if !cache.contains_key(k) {
                    let v = f(k)?;
                    cache.insert(k.clone(), v);
                }
                entries.push(cache[k].clone());
            }
            terms.push((c.clone(), entries));
        }
        Ok(FormalTensor { terms })
    }

    /// `η` into a ring: multiply out each word.
    pub fn multiply_out<R: Ring<Elem = E>>(&self, ring: &R) -> E {
        let mut acc = ring.zero();
        for (c, xs) in &self.terms {
            let p = ring.product(xs.iter()).unwrap_or_else(|| ring.zero());
            acc = ring.add(&acc, &ring.scale(c, &p));
        }
        acc
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::Atom(k) => write!(f, "{k:?}"),
            Letter::Word(ls) => {
                write!(f, "⟨")?;
                for (i, l) in ls.iter().enumerate() {
                    if i > 0 {
                        write!(f, "|")?;
                    }
                    write!(f, "{l}")?;
                }
                write!(f, "⟩")
            }
        }
    }
}
