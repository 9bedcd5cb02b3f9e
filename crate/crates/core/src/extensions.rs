//! Extensions `A → B → C` with module splittings, their classifying maps out
//! of universal extensions, and the path extensions `P(n, B)` behind `Λ^n`
//! and `ζ^n`.
//!
//! Maps out of `TD` and `JD` are evaluators on tensor words, never finite
//! presentations. The source `D` is either a builtin algebra (level 0 of a
//! [`TensorAlgebra`]) or one of its iterates `X_k`; the module map `f` is
//! given on basis letters.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;

use crate::coeff::{AlgElem, AlgHom, Algebra, BuiltinHom, Key};
use crate::error::{Error, Result};
use crate::homotopy::{interval_ctx, HomotopyCert, SubdividedHomotopy};
use crate::mult::mu_tensor;
use crate::poly::{Poly, ZPoly};
use crate::polyfun::{hat, tower, Ctx, FamilyRing, PolyFamily};
use crate::ring::Ring;
use crate::sset::{coordinate_map, coordinates, cube_pair, interval_pair, std_simplex, Coord, SimplicialMap, SimplicialPair};
use crate::tensor::{FormalTensor, Letter, TensorAlgebra, TensorElem, TensorRing};
use crate::Integers;

/// An extension `A → B → C` of algebras with a module splitting `s` of
/// `π: B → C`. `A` is kept as a subset of `B` through `member`.
pub trait Extension: Send + Sync {
    type Mid: Ring;
    type Quo: Ring;
    type Sub: Ring;

    fn mid(&self) -> Self::Mid;
    fn quo(&self) -> Self::Quo;
    fn sub(&self) -> Self::Sub;
    fn proj(&self, x: &<Self::Mid as Ring>::Elem) -> Result<<Self::Quo as Ring>::Elem>;
    fn split(&self, y: &<Self::Quo as Ring>::Elem) -> Result<<Self::Mid as Ring>::Elem>;
    fn incl(&self, a: &<Self::Sub as Ring>::Elem) -> Result<<Self::Mid as Ring>::Elem>;
    /// The element of `A` that `x` is, or `Error::Membership`.
    fn member(&self, x: &<Self::Mid as Ring>::Elem) -> Result<<Self::Sub as Ring>::Elem>;
}

/// `JA → TA → A` with the splitting `σ`, optionally perturbed by
/// `a ↦ ⟨a|a⟩ - σ(a·a)`, which `η` kills.
#[derive(Clone, Debug)]
pub struct UniversalExtension {
    pub alg: TensorAlgebra,
    pub twisted: bool,
}

impl UniversalExtension {
    pub fn new(base: Algebra) -> Self {
        UniversalExtension {
            alg: TensorAlgebra::new(base),
            twisted: false,
        }
    }

    pub fn twisted(base: Algebra) -> Self {
        UniversalExtension {
            alg: TensorAlgebra::new(base),
            twisted: true,
        }
    }

    fn twist(&self, k: &Key) -> TensorElem {
        let a = TensorElem::letter(Letter::Atom(k.clone()));
        let aa = self.alg.mul(0, &a, &a).expect("level 0");
        self.alg.tensor_of(&[a.clone(), a]).sub(&self.alg.sigma(&aa))
    }
}

impl Extension for UniversalExtension {
    type Mid = TensorRing;
    type Quo = Algebra;
    type Sub = TensorRing;

    fn mid(&self) -> TensorRing {
        TensorRing {
            alg: self.alg.clone(),
            level: 1,
        }
    }
    fn quo(&self) -> Algebra {
        self.alg.base
    }
    fn sub(&self) -> TensorRing {
        self.mid()
    }
    fn proj(&self, x: &TensorElem) -> Result<AlgElem> {
        self.alg.eta(1, x)?.to_alg()
    }
    fn split(&self, y: &AlgElem) -> Result<TensorElem> {
        let mut out = self.alg.sigma(&TensorElem::from_alg(y));
        if self.twisted {
            for (k, c) in y.terms() {
                out = out.add(&self.twist(k).scale(c));
            }
        }
        Ok(out)
    }
    fn incl(&self, a: &TensorElem) -> Result<TensorElem> {
        Ok(a.clone())
    }
    fn member(&self, x: &TensorElem) -> Result<TensorElem> {
        if self.alg.eta(1, x)?.is_zero() {
            Ok(x.clone())
        } else {
            Err(Error::Membership(format!("{} is not in J", self.alg.render(x))))
        }
    }
}

/// `0 → C → C` with the identity as splitting (an algebra map).
#[derive(Clone, Debug)]
pub struct TrivialExtension(pub Algebra);

impl Extension for TrivialExtension {
    type Mid = Algebra;
    type Quo = Algebra;
    type Sub = Algebra;

    fn mid(&self) -> Algebra {
        self.0
    }
    fn quo(&self) -> Algebra {
        self.0
    }
    fn sub(&self) -> Algebra {
        self.0
    }
    fn proj(&self, x: &AlgElem) -> Result<AlgElem> {
        Ok(x.clone())
    }
    fn split(&self, y: &AlgElem) -> Result<AlgElem> {
        Ok(y.clone())
    }
    fn incl(&self, a: &AlgElem) -> Result<AlgElem> {
        Ok(a.clone())
    }
    fn member(&self, x: &AlgElem) -> Result<AlgElem> {
        if x.is_zero() {
            Ok(x.clone())
        } else {
            Err(Error::Membership("nonzero element of the zero ideal".into()))
        }
    }
}

/// `(X, Y)` as a product pair, `Δ^0` when both are missing.
fn stack(first: Option<SimplicialPair>, second: Option<&SimplicialPair>) -> SimplicialPair {
    match (first, second) {
        (Some(a), Some(b)) => a.product(b).0,
        (Some(a), None) => a,
        (None, Some(b)) => b.clone(),
        (None, None) => SimplicialPair::absolute(Arc::new(std_simplex(0))),
    }
}

/// `(I^n, ∂I^n) × (K, L)`, with `I^0 × K = K` and `I^0 = Δ^0` when there is
/// no `K`.
pub fn cube_times(n: usize, trailing: Option<&SimplicialPair>) -> SimplicialPair {
    stack((n > 0).then(|| cube_pair(n)), trailing)
}

fn coord_count(pair: &SimplicialPair) -> usize {
    coordinates(pair.set.label((0, 0))).len()
}

/// The path extension
/// `B^{(I^{n+1}×K, ∂)}_r → P(n,B)^K_r → B^{(I^n×K, ∂)}_r`, where `K` is a
/// trailing pair (`Δ^q` in the simplicial direction, `None` for `Δ^0`). The
/// new interval coordinate sits right after `I^n`.
#[derive(Clone, Debug)]
pub struct PathExtension<R: Ring> {
    pub ring: R,
    pub n: usize,
    pub trailing: Option<SimplicialPair>,
    pub r: usize,
    /// The splitting is `μ(? ⊗ t_0^power)` followed by the coordinate shuffle.
    pub power: u32,
    pub quo: Ctx,
    pub mid: Ctx,
    pub sub: Ctx,
    t0: PolyFamily<BigInt>,
    p_map: SimplicialMap,
    shuffle: SimplicialMap,
}

impl<R: Ring> PathExtension<R> {
    pub fn new(ring: R, n: usize, trailing: Option<SimplicialPair>, r: usize) -> Result<Self> {
        Self::with_power(ring, n, trailing, r, 1)
    }

    /// `P(n, B)^q_r`, with trailing factor `Δ^q`.
    pub fn simplicial(ring: R, n: usize, q: usize, r: usize) -> Result<Self> {
        Self::new(ring, n, Some(SimplicialPair::absolute(Arc::new(std_simplex(q)))), r)
    }

    pub fn with_power(ring: R, n: usize, trailing: Option<SimplicialPair>, r: usize, power: u32) -> Result<Self> {
        if power == 0 {
            return Err(Error::InvalidMap("t_0^0 does not vanish at 1".into()));
        }
        let t = trailing.as_ref();
        let quo_pair = cube_times(n, t);
        let open_end = SimplicialPair::generated(Arc::new(std_simplex(1)), &["1"])?;
        let cube_with = |last: SimplicialPair| stack(Some(stack((n > 0).then(|| cube_pair(n)), Some(&last))), t);
        let mid_pair = cube_with(open_end.clone());
        let sub_pair = cube_with(interval_pair());
        let nk = t.map_or(0, coord_count);
        let point = n + nk == 0;
        let quo = tower(&quo_pair).ctx(r);
        let t0_ctx = tower(&open_end).ctx(0);
        let t0 = (0..power).fold(PolyFamily::constant(&Integers, &t0_ctx, 0, BigInt::one()), |acc, _| {
            acc.mul(&Integers, &hat(&t0_ctx, 0)).expect("same context")
        });
        let mut p_coords: Vec<Coord> = (0..n).map(Coord::From).collect();
        p_coords.push(Coord::Fixed("0".into()));
        p_coords.extend((n..n + nk).map(Coord::From));
        let p_map = coordinate_map(&quo_pair.set, &mid_pair.set, &p_coords)?;
        let mu_set = crate::mult::mu_context(&quo, &t0_ctx).tower.base().set.clone();
        let mut s_coords: Vec<Coord> = if point {
            vec![Coord::Fixed("0".into())]
        } else {
            (0..n).chain(n + 1..n + 1 + nk).map(Coord::From).collect()
        };
        s_coords.push(Coord::From(n));
        let shuffle = coordinate_map(&mid_pair.set, &mu_set, &s_coords)?;
        Ok(PathExtension {
            ring,
            n,
            trailing,
            r,
            power,
            quo,
            mid: tower(&mid_pair).ctx(r),
            sub: tower(&sub_pair).ctx(r),
            t0,
            p_map,
            shuffle,
        })
    }

    /// The same extension with the splitting `μ(? ⊗ t_0^power)`.
    pub fn resplit(&self, power: u32) -> Result<Self> {
        Self::with_power(self.ring.clone(), self.n, self.trailing.clone(), self.r, power)
    }

    fn onto(&self, x: &PolyFamily<R::Elem>, ctx: &Ctx) -> Result<PolyFamily<R::Elem>> {
        if x.ctx == *ctx {
            Ok(x.clone())
        } else {
            x.restrict_to(ctx)
        }
    }

    /// Whether `x` is in `P(n, B)`, the kernel over the open end and the
    /// sides.
    pub fn in_p(&self, x: &PolyFamily<R::Elem>) -> Result<()> {
        self.onto(x, &self.mid)?.kernel_test()
    }

    pub fn quo_pair(&self) -> &SimplicialPair {
        self.quo.tower.base()
    }

    pub fn sub_pair(&self) -> &SimplicialPair {
        self.sub.tower.base()
    }

    pub fn mid_pair(&self) -> &SimplicialPair {
        self.mid.tower.base()
    }
}

impl<R: Ring> Extension for PathExtension<R> {
    type Mid = FamilyRing<R>;
    type Quo = FamilyRing<R>;
    type Sub = FamilyRing<R>;

    fn mid(&self) -> FamilyRing<R> {
        FamilyRing::new(self.ring.clone(), self.mid.clone())
    }
    fn quo(&self) -> FamilyRing<R> {
        FamilyRing::new(self.ring.clone(), self.quo.clone())
    }
    fn sub(&self) -> FamilyRing<R> {
        FamilyRing::new(self.ring.clone(), self.sub.clone())
    }
    fn proj(&self, x: &PolyFamily<R::Elem>) -> Result<PolyFamily<R::Elem>> {
        self.onto(x, &self.mid)?.pullback_base(&self.ring, &self.p_map, self.quo_pair())
    }
    fn split(&self, y: &PolyFamily<R::Elem>) -> Result<PolyFamily<R::Elem>> {
        let y = self.onto(y, &self.quo)?;
        let m = mu_tensor(&self.ring, &[(y, self.t0.clone())])?;
        m.pullback_base(&self.ring, &self.shuffle, self.mid_pair())
    }
    fn incl(&self, a: &PolyFamily<R::Elem>) -> Result<PolyFamily<R::Elem>> {
        self.onto(a, &self.mid)
    }
    fn member(&self, x: &PolyFamily<R::Elem>) -> Result<PolyFamily<R::Elem>> {
        let a = self.onto(x, &self.sub)?;
        a.kernel_test().map_err(|e| Error::Membership(e.to_string()))?;
        Ok(a)
    }
}

/// A module map on basis letters.
pub type LetterMap<E> = Arc<dyn Fn(&Letter) -> Result<E> + Send + Sync>;

/// The strong morphism `U_D → (E, s)` over a module map `f: D → C`, where
/// `D = X_level` of `source`.
pub struct Classifier<E: Extension> {
    pub ext: Arc<E>,
    pub source: TensorAlgebra,
    pub level: usize,
    pub f: LetterMap<<E::Quo as Ring>::Elem>,
}

impl<E: Extension> Clone for Classifier<E> {
    fn clone(&self) -> Self {
        Classifier {
            ext: self.ext.clone(),
            source: self.source.clone(),
            level: self.level,
            f: self.f.clone(),
        }
    }
}

type Mid<E> = <<E as Extension>::Mid as Ring>::Elem;
type Quo<E> = <<E as Extension>::Quo as Ring>::Elem;
type Sub<E> = <<E as Extension>::Sub as Ring>::Elem;

impl<E: Extension> Classifier<E> {
    pub fn new(ext: Arc<E>, source: TensorAlgebra, level: usize, f: LetterMap<Quo<E>>) -> Self {
        Classifier { ext, source, level, f }
    }

    /// `f` extended linearly to elements of `D`.
    pub fn f_lin(&self, x: &TensorElem) -> Result<Quo<E>> {
        let quo = self.ext.quo();
        let mut acc = quo.zero();
        for (l, c) in x.terms() {
            acc = quo.add(&acc, &quo.scale(c, &(self.f)(l)?));
        }
        Ok(acc)
    }

    fn words(x: &TensorElem) -> Result<Vec<(&Vec<Letter>, &BigInt)>> {
        x.terms()
            .map(|(l, c)| match l {
                Letter::Word(ls) => Ok((ls, c)),
                Letter::Atom(_) => Err(Error::DimensionMismatch("expected tensor words".into())),
            })
            .collect()
    }

    /// `β(⟨d_1|…|d_k⟩) = s(f(d_1))···s(f(d_k))`.
    pub fn beta(&self, x: &TensorElem) -> Result<Mid<E>> {
        let mid = self.ext.mid();
        let mut cache: BTreeMap<&Letter, Mid<E>> = BTreeMap::new();
        let mut acc = mid.zero();
        for (ls, c) in Self::words(x)? {
            let mut prod: Option<Mid<E>> = None;
            for l in ls {
                if !cache.contains_key(l) {
                    cache.insert(l, self.ext.split(&(self.f)(l)?)?);
                }
                let v = &cache[l];
                prod = Some(match prod {
                    None => v.clone(),
                    Some(p) => mid.mul(&p, v),
                });
            }
            if let Some(p) = prod {
                acc = mid.add(&acc, &mid.scale(c, &p));
            }
        }
        Ok(acc)
    }

    /// The same map obtained only from its values on generators `σ(d)` and
    /// multiplicativity: each word is split in half recursively.
    pub fn beta_by_generators(&self, x: &TensorElem) -> Result<Mid<E>> {
        fn go<E: Extension>(c: &Classifier<E>, ls: &[Letter]) -> Result<Mid<E>> {
            if ls.len() == 1 {
                return c.ext.split(&(c.f)(&ls[0])?);
            }
            let (a, b) = ls.split_at(ls.len() / 2);
            Ok(c.ext.mid().mul(&go(c, a)?, &go(c, b)?))
        }
        let mid = self.ext.mid();
        let mut acc = mid.zero();
        for (ls, c) in Self::words(x)? {
            acc = mid.add(&acc, &mid.scale(c, &go(self, ls)?));
        }
        Ok(acc)
    }

    /// The classifying map `ξ = β|_{JD}`, landing in `A`.
    pub fn xi(&self, x: &TensorElem) -> Result<Sub<E>> {
        if !self.source.in_j(self.level + 1, x)? {
            return Err(Error::Membership("argument is not in J".into()));
        }
        self.ext.member(&self.beta(x)?)
    }

    /// Checks the strong morphism equations at `x ∈ TD` (and `y` for
    /// multiplicativity): `π β = f η`, `β σ = s f`, `β(xy) = β(x)β(y)`.
    pub fn check_strong(&self, x: &TensorElem, y: &TensorElem) -> Result<StrongReport>
    where
        Mid<E>: PartialEq,
        Quo<E>: PartialEq,
    {
        let level = self.level + 1;
        let bx = self.beta(x)?;
        let projected = self.ext.proj(&bx)? == self.f_lin(&self.source.eta(level, x)?)?;
        let d = self.source.eta(level, x)?;
        let splitting = self.beta(&self.source.sigma(&d))? == self.ext.split(&self.f_lin(&d)?)?;
        let xy = self.source.mul(level, x, y)?;
        let mid = self.ext.mid();
        let multiplicative = self.beta(&xy)? == mid.mul(&bx, &self.beta(y)?);
        let unique = self.beta_by_generators(x)? == bx;
        Ok(StrongReport {
            projected,
            splitting,
            multiplicative,
            unique,
        })
    }

    /// The next module map in a chain: `β` on the letters of `X_{level+1}`.
    pub fn as_letter_map(&self) -> LetterMap<Mid<E>>
    where
        E: 'static,
    {
        let me = self.clone();
        Arc::new(move |l: &Letter| match l {
            Letter::Word(_) => me.beta(&TensorElem::letter(l.clone())),
            Letter::Atom(_) => Err(Error::DimensionMismatch("expected a word".into())),
        })
    }
}

/// Which strong morphism equations held.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct StrongReport {
    pub projected: bool,
    pub splitting: bool,
    pub multiplicative: bool,
    pub unique: bool,
}

impl StrongReport {
    pub fn passed(&self) -> bool {
        self.projected && self.splitting && self.multiplicative && self.unique
    }
}

/// The letter map of a homomorphism out of a builtin algebra.
pub fn hom_letters<R: Ring + 'static>(ring: &R, f: &BuiltinHom<R>) -> LetterMap<R::Elem> {
    let (ring, f) = (ring.clone(), f.clone());
    Arc::new(move |l: &Letter| match l {
        Letter::Atom(k) => Ok(f.apply_basis(&ring, k)),
        Letter::Word(_) => Err(Error::DimensionMismatch("expected a basis element".into())),
    })
}

/// The classifying map of `f: D → C` with respect to `(E, s)`.
pub fn classifying_hom<E: Extension>(ext: Arc<E>, source: Algebra, f: LetterMap<Quo<E>>) -> Classifier<E> {
    Classifier::new(ext, TensorAlgebra::new(source), 0, f)
}

/// The elementary homotopy between the classifying maps for two splittings
/// of one extension: `s_u` is `s` at the end `0` and `s'` at the end `1`,
/// linear in between, and the homotopy is the classifying map over the
/// extension tensored with `Z^{Δ^1}`. Checked on the given `JD` samples.
pub fn classifying_homotopy<E: Extension>(
    e1: Arc<E>,
    e2: Arc<E>,
    source: TensorAlgebra,
    level: usize,
    f: LetterMap<Quo<E>>,
    samples: &[TensorElem],
) -> Result<HomotopyCert<E::Sub>> {
    let c1 = Classifier::new(e1.clone(), source.clone(), level, f.clone());
    let c2 = Classifier::new(e2.clone(), source.clone(), level, f.clone());
    let mid = e1.mid();
    let ctx = interval_ctx(0);
    let mid_u = FamilyRing::new(mid.clone(), ctx.clone());
    let sub = e1.sub();
    let mut images = Vec::new();
    let (mut ends0, mut ends1) = (Vec::new(), Vec::new());
    for x in samples {
        if !source.in_j(level + 1, x)? {
            return Err(Error::Membership("sample is not in J".into()));
        }
        let mut cache: BTreeMap<&Letter, PolyFamily<Mid<E>>> = BTreeMap::new();
        let mut acc = mid_u.zero();
        for (ls, c) in Classifier::<E>::words(x)? {
            let mut prod: Option<PolyFamily<Mid<E>>> = None;
            for l in ls {
                if !cache.contains_key(l) {
                    let y = f(l)?;
                    let (a, b) = (e1.split(&y)?, e2.split(&y)?);
                    // a + (b - a) t_1 on the edge
                    let edge = Poly::constant(&mid, 1, a.clone())
                        .add(&mid, &Poly::constant(&mid, 1, mid.sub(&b, &a)).mul_z(&mid, &ZPoly::var(1, 0)));
                    cache.insert(l, PolyFamily::from_cells(&mid, &ctx, 0, |cell| (cell.0 == 1).then(|| edge.clone()))?);
                }
                let v = &cache[l];
                prod = Some(match prod {
                    None => v.clone(),
                    Some(p) => mid_u.mul(&p, v),
                });
            }
            if let Some(p) = prod {
                acc = mid_u.add(&acc, &mid_u.scale(c, &p));
            }
        }
        // coefficientwise membership in A
        for row in acc.components() {
            for p in row {
                for (_, c) in p.terms() {
                    e1.member(c)?;
                }
            }
        }
        images.push(acc.map_coeffs(&sub, |c| e1.member(c).expect("checked above")));
        ends0.push(c1.xi(x)?);
        ends1.push(c2.xi(x)?);
    }
    let names: Vec<String> = (0..samples.len()).map(|i| format!("x{i}")).collect();
    let link = SubdividedHomotopy::new(
        &sub,
        0,
        AlgHom::sampled(names.clone(), images)?,
        AlgHom::sampled(names.clone(), ends0)?,
        AlgHom::sampled(names, ends1)?,
    )?;
    Ok(HomotopyCert::single(link))
}

/// `Λ^n(f)` for `f: A → B^{S_n}_r`: the classifying map of `f` with respect
/// to `P(n, B)^0_r` (no trailing factor).
pub fn lambda<R: Ring + 'static>(ring: &R, n: usize, r: usize, source: Algebra, f: &BuiltinHom<FamilyRing<R>>) -> Result<Classifier<PathExtension<R>>> {
    let ext = Arc::new(PathExtension::new(ring.clone(), n, None, r)?);
    let fr = ext.quo();
    for x in &f.hom.images {
        if x.ctx != ext.quo {
            return Err(Error::ContextMismatch(format!("Λ^{n} needs maps into B^(S_{n})_{r}")));
        }
    }
    Ok(classifying_hom(ext, source, hom_letters(&fr, f)))
}

/// `Λ^n(id)` evaluated on an element of `T(B^{S_n}_r)` given as a formal
/// tensor (for instance `J(f)(x)`).
pub fn lambda_id<R: Ring>(ext: &PathExtension<R>, x: &FormalTensor<PolyFamily<R::Elem>>) -> Result<PolyFamily<R::Elem>> {
    let mid = ext.mid();
    let mut acc = mid.zero();
    for (c, entries) in &x.terms {
        let split = entries.iter().map(|g| ext.split(g)).collect::<Result<Vec<_>>>()?;
        if let Some(p) = mid.product(split.iter()) {
            acc = mid.add(&acc, &mid.scale(c, &p));
        }
    }
    ext.member(&acc)
}

/// `ζ^n(f)` for `f: J^n A → B^{(I^n×K, ∂)}_r` given on the letters of
/// `X_n`: the classifying map with respect to `P(n, B)^K_r`. Values of `f`
/// on other sets with the same simplices (such as the middle term of the
/// previous stage) are moved over by label.
pub fn zeta<R: Ring + 'static>(
    ring: &R,
    n: usize,
    trailing: Option<SimplicialPair>,
    r: usize,
    source: TensorAlgebra,
    f: LetterMap<PolyFamily<R::Elem>>,
) -> Result<Classifier<PathExtension<R>>> {
    classify_path(ring, n, trailing, r, source, n, f)
}

/// The classifying map of a module map `X_level → B^{(I^n×K, ∂)}_r` with
/// respect to `P(n, B)^K_r`. With `level = n` this is `ζ^n`, with no
/// trailing factor it is `Λ^n` on `J^level A`.
pub fn classify_path<R: Ring + 'static>(
    ring: &R,
    n: usize,
    trailing: Option<SimplicialPair>,
    r: usize,
    source: TensorAlgebra,
    level: usize,
    f: LetterMap<PolyFamily<R::Elem>>,
) -> Result<Classifier<PathExtension<R>>> {
    let ext = Arc::new(PathExtension::new(ring.clone(), n, trailing, r)?);
    let quo = ext.quo.clone();
    let g: LetterMap<PolyFamily<R::Elem>> = Arc::new(move |l: &Letter| {
        let v = f(l)?;
        if v.ctx == quo {
            Ok(v)
        } else {
            v.restrict_to(&quo)
        }
    });
    Ok(Classifier::new(ext, source, level, g))
}

/// `J` on a certificate `f ≃ g` between maps of builtin algebras: each link
/// `h` becomes `x ↦ Σ c Π σ(h(a_i))` in `(TB)^{sd^r Δ^1}`, evaluated on the
/// given samples of `JA`.
pub fn j_on_cert(source: Algebra, target: Algebra, cert: &HomotopyCert<Algebra>, samples: &[TensorElem]) -> Result<HomotopyCert<TensorRing>> {
    let ta = TensorAlgebra::new(source);
    let tb = TensorRing::new(target, 1);
    for x in samples {
        if !ta.in_j(1, x)? {
            return Err(Error::Membership("sample is not in J".into()));
        }
    }
    let names: Vec<String> = (0..samples.len()).map(|i| format!("x{i}")).collect();
    let links = cert
        .links
        .iter()
        .map(|link| {
            let fr = FamilyRing::new(target, interval_ctx(link.level));
            let h = BuiltinHom {
                source,
                hom: link.hom.clone(),
            };
            let frt = FamilyRing::new(tb.clone(), interval_ctx(link.level));
            let lifted = |k: &Key| -> PolyFamily<TensorElem> {
                h.apply_basis(&fr, k)
                    .map_coeffs(&tb, |b| tb.alg.sigma(&TensorElem::from_alg(b)))
            };
            let images = samples
                .iter()
                .map(|x| FormalTensor::image(x, |k| Ok(lifted(k))).map(|t| t.multiply_out(&frt)))
                .collect::<Result<Vec<_>>>()?;
            for img in &images {
                for row in img.components() {
                    for p in row {
                        for (_, c) in p.terms() {
                            if !tb.alg.in_j(1, c)? {
                                return Err(Error::Membership("J(h) leaves J".into()));
                            }
                        }
                    }
                }
            }
            let end = |f: &AlgHom<Algebra>| -> Result<AlgHom<TensorRing>> {
                let bf = BuiltinHom { source, hom: f.clone() };
                let vals = samples
                    .iter()
                    .map(|x| crate::tensor::j_on_hom(&bf, &tb.alg, x))
                    .collect::<Result<Vec<_>>>()?;
                AlgHom::sampled(names.clone(), vals)
            };
            SubdividedHomotopy::new(&tb, link.level, AlgHom::sampled(names.clone(), images)?, end(&link.f0)?, end(&link.f1)?)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(HomotopyCert { links })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homotopy::check_cert;
    use crate::polyfun::random_family;
    use crate::sset::coface;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn absolute(x: &PolyFamily<AlgElem>) -> bool {
        x.validate(&Algebra::poly1()).is_ok()
    }

    #[test]
    fn path_extension_axioms() {
        let b = Algebra::poly1();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for n in 0..=1 {
            for q in 0..=1 {
                for r in 0..=1 {
                    let e = PathExtension::simplicial(b, n, q, r).unwrap();
                    let g = random_family(&b, &e.quo, 2, true, &mut rng, |r| b.random_elem(r, 3, 3));
                    let s = e.split(&g).unwrap();
                    assert!(absolute(&s));
                    e.in_p(&s).unwrap();
                    assert_eq!(e.proj(&s).unwrap(), g);
                    let a = random_family(&b, &e.sub, 2, true, &mut rng, |r| b.random_elem(r, 3, 3));
                    assert!(e.proj(&e.incl(&a).unwrap()).unwrap().is_zero());
                    let x = random_family(&b, &e.mid, 2, true, &mut rng, |r| b.random_elem(r, 3, 3));
                    let k = x.sub(&b, &e.split(&e.proj(&x).unwrap()).unwrap()).unwrap();
                    e.member(&k).unwrap();
                }
            }
        }
    }

    #[test]
    fn splitting_is_not_multiplicative() {
        let z = Integers;
        let e = PathExtension::simplicial(z, 1, 0, 0).unwrap();
        let f = hat(&e.quo, 0).mul(&z, &hat(&e.quo, 1)).unwrap();
        let mid = e.mid();
        let lhs = mid.mul(&e.split(&f).unwrap(), &e.split(&f).unwrap());
        let rhs = e.split(&f.mul(&z, &f).unwrap()).unwrap();
        assert_ne!(lhs, rhs);
        // the difference is t_0 t_1-type, so it lies in the kernel over the t = 0 face
        assert!(e.proj(&lhs.sub(&z, &rhs).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn universal_identity_and_zero() {
        let a = Algebra::matrix(2);
        let u = Arc::new(UniversalExtension::new(a));
        let id = hom_letters(&a, &BuiltinHom::identity(a));
        let c = classifying_hom(u.clone(), a, id);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..5 {
            let x = c.source.random_j(1, &mut rng, 4, 3);
            assert_eq!(c.xi(&x).unwrap(), x);
            let y = c.source.random_elem(1, &mut rng, 4, 3);
            assert!(c.check_strong(&y, &x).unwrap().passed());
        }
        let zero: LetterMap<AlgElem> = Arc::new(|_| Ok(AlgElem::zero()));
        let c0 = classifying_hom(u, a, zero);
        let x = c0.source.random_j(1, &mut rng, 4, 3);
        assert!(c0.xi(&x).unwrap().is_zero());
    }

    #[test]
    fn multiplicative_splitting_gives_zero() {
        let d = Algebra::dual();
        let e = Arc::new(TrivialExtension(d));
        let c = classifying_hom(e, d, hom_letters(&d, &BuiltinHom::identity(d)));
        let key = d.basis_key(0).unwrap();
        let w = TensorElem::word(vec![Letter::Atom(key.clone()), Letter::Atom(key)]);
        assert!(c.xi(&w).unwrap().is_zero());
    }

    fn poly_hom_into(ext: &PathExtension<Algebra>, rng: &mut ChaCha8Rng) -> BuiltinHom<FamilyRing<Algebra>> {
        let b = Algebra::poly1();
        let fr = ext.quo();
        // the free nonunital algebra on one generator, sent to a relative family
        let g = random_family(&b, &ext.quo, 2, true, rng, |r| b.random_elem(r, 3, 2));
        BuiltinHom::new(Algebra::free(1), vec![g], &fr).unwrap()
    }

    #[test]
    fn lambda_factors_through_j() {
        let b = Algebra::poly1();
        let ta = TensorAlgebra::new(Algebra::free(1));
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for n in 0..=1 {
            let ext = PathExtension::new(b, n, None, 0).unwrap();
            let f = poly_hom_into(&ext, &mut rng);
            let lam = lambda(&b, n, 0, Algebra::free(1), &f).unwrap();
            let fr = ext.quo();
            for _ in 0..3 {
                let x = ta.random_j(1, &mut rng, 3, 3);
                let lhs = lam.xi(&x).unwrap();
                lhs.kernel_test().unwrap();
                let jf = FormalTensor::image(&x, |k| Ok(f.apply_basis(&fr, k))).unwrap();
                assert_eq!(lambda_id(&ext, &jf).unwrap(), lhs);
                let y = ta.random_elem(1, &mut rng, 3, 2);
                assert!(lam.check_strong(&y, &x).unwrap().passed());
            }
        }
    }

    #[test]
    fn splitting_independence() {
        let b = Algebra::poly1();
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let e1 = Arc::new(PathExtension::new(b, 1, None, 0).unwrap());
        let e2 = Arc::new(e1.resplit(2).unwrap());
        let f = poly_hom_into(&e1, &mut rng);
        let ta = TensorAlgebra::new(Algebra::free(1));
        let samples: Vec<TensorElem> = (0..3).map(|_| ta.random_j(1, &mut rng, 3, 2)).collect();
        let cert = classifying_homotopy(e1.clone(), e2, ta.clone(), 0, hom_letters(&e1.quo(), &f), &samples).unwrap();
        assert!(check_cert(&e1.sub(), &cert).unwrap().ok);
        // equal splittings give the constant homotopy
        let same = classifying_homotopy(e1.clone(), e1.clone(), ta, 0, hom_letters(&e1.quo(), &f), &samples).unwrap();
        let link = &same.links[0];
        assert_eq!(link.f0.images, link.f1.images);
        // the universal extension with a twisted splitting
        let a = Algebra::matrix(2);
        let ua = Arc::new(UniversalExtension::new(a));
        let ut = Arc::new(UniversalExtension::twisted(a));
        let tm = TensorAlgebra::new(a);
        let xs: Vec<TensorElem> = (0..3).map(|_| tm.random_j(1, &mut rng, 4, 2)).collect();
        let cert = classifying_homotopy(ua, ut, tm, 0, hom_letters(&a, &BuiltinHom::identity(a)), &xs).unwrap();
        assert!(check_cert(&TensorRing::new(a, 1), &cert).unwrap().ok);
    }

    #[test]
    fn j_of_certificates() {
        let p = Algebra::poly1();
        let f = AlgHom::new(p.presentation(), vec![p.generator(0), p.generator(1)]).unwrap();
        let refl = HomotopyCert::refl(&p, &f);
        let ta = TensorAlgebra::new(p);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let xs: Vec<TensorElem> = (0..3).map(|_| ta.random_j(1, &mut rng, 3, 3)).collect();
        let jc = j_on_cert(p, p, &refl, &xs).unwrap();
        let tr = TensorRing::new(p, 1);
        assert!(check_cert(&tr, &jc).unwrap().ok);
        assert_eq!(jc.links[0].f0.images, xs);
        // x ↦ x·t_0 + x²·t_1 as an elementary homotopy from x to x²
        let ctx = interval_ctx(0);
        let x = p.generator(1);
        let h = PolyFamily::from_cells(&p, &ctx, 0, |c| {
            (c.0 == 1).then(|| {
                Poly::constant(&p, 1, x.clone()).add(&p, &Poly::constant(&p, 1, p.sub(&p.mul(&x, &x), &x)).mul_z(&p, &ZPoly::var(1, 0)))
            })
        })
        .unwrap();
        let hom = AlgHom::new(p.presentation(), vec![PolyFamily::constant(&p, &ctx, 0, p.generator(0)), h]).unwrap();
        let link = SubdividedHomotopy::from_hom(&p, 0, hom).unwrap();
        let jc = j_on_cert(p, p, &HomotopyCert::single(link), &xs).unwrap();
        assert!(check_cert(&tr, &jc).unwrap().ok);
    }

    #[test]
    fn zeta_naturality() {
        let b = Algebra::poly1();
        let ta = TensorAlgebra::new(Algebra::free(1));
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let simplex = |q: usize| Some(SimplicialPair::absolute(Arc::new(std_simplex(q))));
        // n = 0, q = 1: f lands in B^{Δ^1}
        let e1 = PathExtension::simplicial(b, 0, 1, 0).unwrap();
        let f = poly_hom_into(&e1, &mut rng);
        let fl = hom_letters(&e1.quo(), &f);
        let z1 = zeta(&b, 0, simplex(1), 0, ta.clone(), fl.clone()).unwrap();
        for i in 0..=1 {
            let d = coface(1, i).unwrap();
            let e0 = PathExtension::simplicial(b, 0, 0, 0).unwrap();
            let quo0 = e0.quo_pair().clone();
            let d_q = d.clone();
            let fl2 = fl.clone();
            let pulled: LetterMap<PolyFamily<AlgElem>> = Arc::new(move |l| fl2(l)?.pullback_base(&b, &d_q, &quo0));
            let z0 = zeta(&b, 0, simplex(0), 0, ta.clone(), pulled).unwrap();
            // 1 × d on I × Δ^0 → I × Δ^1
            let up = SimplicialMap::from_vertex_labels(e0.sub_pair().set.clone(), z1.ext.sub_pair().set.clone(), |l| {
                let cs = coordinates(l);
                let v = d.image((0, cs[1].parse::<usize>().unwrap())).base().1;
                format!("{},{v}", cs[0])
            })
            .unwrap();
            for _ in 0..2 {
                let x = ta.random_j(1, &mut rng, 3, 2);
                let lhs = z1.xi(&x).unwrap().pullback_base(&b, &up, e0.sub_pair()).unwrap();
                assert_eq!(lhs, z0.xi(&x).unwrap());
            }
        }
        // transition in r
        let e_r1 = PathExtension::simplicial(b, 0, 1, 1).unwrap();
        let fl1: LetterMap<PolyFamily<AlgElem>> = {
            let fl = fl.clone();
            Arc::new(move |l| Ok(fl(l)?.transition(&b)))
        };
        let z_r1 = zeta(&b, 0, simplex(1), 1, ta.clone(), fl1).unwrap();
        assert_eq!(z_r1.ext.quo, e_r1.quo);
        let x = ta.random_j(1, &mut rng, 3, 2);
        assert_eq!(z1.xi(&x).unwrap().transition(&b), z_r1.xi(&x).unwrap());
        // a second stage lands in the kernel over ∂I^2 × Δ^1
        let z2 = zeta(&b, 1, simplex(1), 0, ta.clone(), z1.as_letter_map()).unwrap();
        let x2 = ta.random_j(2, &mut rng, 2, 2);
        z2.xi(&x2).unwrap().kernel_test().unwrap();
    }
}
