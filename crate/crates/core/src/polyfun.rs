//! Polynomial function algebras `B^{sd^r K}` and their relative versions
//! `B^(K,L)_r`.
//!
//! A [`PolyFamily`] stores one polynomial per nondegenerate simplex of
//! `sd^r K` (in the canonical coordinates of [`crate::poly`]) and is valid
//! when every face of a component equals the component of the face. Since
//! all sets are nonsingular this describes `B^{sd^r K}` completely.
//!
//! Subdivisions are shared through [`PairTower`]s: one tower per simplicial
//! pair, caching `sd^r K`, `sd^r L` and the last vertex maps between
//! consecutive levels.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{Monomial, Poly, ZPoly};
use crate::ring::{Coordinates, Integers, Ring};
use crate::snf;
use crate::sset::{coface_values, Cell, SimplicialMap, SimplicialPair, SimplicialSet, Subdivision};

/// One level of a tower: `(sd^r K, sd^r L)`, with the subdivision data and
/// `γ: sd^r K → sd^{r-1} K` for `r ≥ 1`.
#[derive(Debug)]
pub struct Level {
    pub r: usize,
    pub pair: SimplicialPair,
    pub sd: Option<Subdivision>,
    pub gamma: Option<SimplicialMap>,
}

impl Level {
    pub fn set(&self) -> &Arc<SimplicialSet> {
        &self.pair.set
    }
}

/// The subdivisions of a pair, computed on demand and cached.
pub struct PairTower {
    base: SimplicialPair,
    levels: RwLock<Vec<Arc<Level>>>,
    gammas: RwLock<HashMap<(usize, usize), Arc<SimplicialMap>>>,
}

impl fmt::Debug for PairTower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PairTower({:?}, sub {:?})", self.base.set.counts(), self.base.sub_counts())
    }
}

fn registry() -> &'static Mutex<Vec<Arc<PairTower>>> {
    static REG: OnceLock<Mutex<Vec<Arc<PairTower>>>> = OnceLock::new();
    REG.get_or_init(|| Mutex::new(Vec::new()))
}

/// The shared tower of a pair. Equal pairs get the same tower, so the
/// subdivisions are computed once per process.
pub fn tower(pair: &SimplicialPair) -> Arc<PairTower> {
    let mut reg = registry().lock().unwrap();
    if let Some(t) = reg.iter().find(|t| t.base == *pair) {
        return t.clone();
    }
    let t = Arc::new(PairTower::new(pair.clone()));
    reg.push(t.clone());
    t
}

impl PairTower {
    fn new(base: SimplicialPair) -> Self {
        let level0 = Arc::new(Level {
            r: 0,
            pair: base.clone(),
            sd: None,
            gamma: None,
        });
        PairTower {
            base,
            levels: RwLock::new(vec![level0]),
            gammas: RwLock::new(HashMap::new()),
        }
    }

    pub fn base(&self) -> &SimplicialPair {
        &self.base
    }

    pub fn level(&self, r: usize) -> Arc<Level> {
        if let Some(l) = self.levels.read().unwrap().get(r) {
            return l.clone();
        }
        let mut levels = self.levels.write().unwrap();
        while levels.len() <= r {
            let prev = levels.last().unwrap().clone();
            let (pair, sd) = prev.pair.subdivide();
            let gamma = sd.last_vertex();
            levels.push(Arc::new(Level {
                r: prev.r + 1,
                pair,
                sd: Some(sd),
                gamma: Some(gamma),
            }));
        }
        levels[r].clone()
    }

    /// `γ^{from-to}: sd^from K → sd^to K` as a composite of one-step maps.
    pub fn gamma(&self, from: usize, to: usize) -> Result<Arc<SimplicialMap>> {
        if to > from {
            return Err(Error::IncomparableLevels(format!("no last vertex map from level {from} to {to}")));
        }
        if let Some(g) = self.gammas.read().unwrap().get(&(from, to)) {
            return Ok(g.clone());
        }
        let mut map = SimplicialMap::identity(self.level(from).set().clone());
        for k in (to + 1..=from).rev() {
            let step = self.level(k);
            map = step.gamma.as_ref().unwrap().after(&map)?;
        }
        let map = Arc::new(map);
        self.gammas.write().unwrap().insert((from, to), map.clone());
        Ok(map)
    }

    pub fn ctx(self: &Arc<Self>, r: usize) -> Ctx {
        Ctx {
            tower: self.clone(),
            level: self.level(r),
        }
    }
}

/// A base map between two towers together with its iterated subdivisions.
pub struct MapTower {
    pub source: Arc<PairTower>,
    pub target: Arc<PairTower>,
    levels: RwLock<Vec<Arc<SimplicialMap>>>,
}

impl MapTower {
    pub fn new(f: SimplicialMap, source: Arc<PairTower>, target: Arc<PairTower>) -> Result<Self> {
        if **f.source() != *source.base.set || **f.target() != *target.base.set {
            return Err(Error::ContextMismatch("map does not connect the towers".into()));
        }
        Ok(MapTower {
            source,
            target,
            levels: RwLock::new(vec![Arc::new(f)]),
        })
    }

    /// `sd^r f`.
    pub fn at(&self, r: usize) -> Arc<SimplicialMap> {
        if let Some(m) = self.levels.read().unwrap().get(r) {
            return m.clone();
        }
        let mut levels = self.levels.write().unwrap();
        while levels.len() <= r {
            let k = levels.len();
            let ls = self.source.level(k);
            let lt = self.target.level(k);
            let m = crate::sset::subdivide_map(&levels[k - 1], ls.sd.as_ref().unwrap(), lt.sd.as_ref().unwrap())
                .expect("subdivision of a valid map");
            levels.push(Arc::new(m));
        }
        levels[r].clone()
    }
}

/// `K × K'` of two towers with the subdivided projections.
pub struct ProductTower {
    pub left: Arc<PairTower>,
    pub right: Arc<PairTower>,
    pub tower: Arc<PairTower>,
    pub pr1: MapTower,
    pub pr2: MapTower,
    legs: RwLock<HashMap<(usize, usize), Legs>>,
}

type Legs = (Arc<SimplicialMap>, Arc<SimplicialMap>);

impl ProductTower {
    /// The two maps out of `sd^{r+s}(K × K')` used by `μ`:
    /// `γ^s ∘ sd^{r+s}(pr_1)` into `sd^r K` and `γ^r ∘ sd^{r+s}(pr_2)` into
    /// `sd^s K'`.
    pub fn legs(&self, r: usize, s: usize) -> Legs {
        if let Some(l) = self.legs.read().unwrap().get(&(r, s)) {
            return l.clone();
        }
        let a = self.left.gamma(r + s, r).unwrap().after(&self.pr1.at(r + s)).unwrap();
        let b = self.right.gamma(r + s, s).unwrap().after(&self.pr2.at(r + s)).unwrap();
        let legs = (Arc::new(a), Arc::new(b));
        self.legs.write().unwrap().insert((r, s), legs.clone());
        legs
    }
}

/// The (shared) product of two towers, with product pair
/// `(K × K', K × L' ∪ L × K')`.
pub fn product_tower(left: &Arc<PairTower>, right: &Arc<PairTower>) -> Arc<ProductTower> {
    type Reg = Mutex<Vec<Arc<ProductTower>>>;
    static REG: OnceLock<Reg> = OnceLock::new();
    let reg = REG.get_or_init(|| Mutex::new(Vec::new()));
    if let Some(p) = reg
        .lock()
        .unwrap()
        .iter()
        .find(|p| Arc::ptr_eq(&p.left, left) && Arc::ptr_eq(&p.right, right))
    {
        return p.clone();
    }
    let (pair, prod) = left.base.product(&right.base);
    let t = tower(&pair);
    let pr1 = MapTower::new(prod.pr1, t.clone(), left.clone()).expect("first projection");
    let pr2 = MapTower::new(prod.pr2, t.clone(), right.clone()).expect("second projection");
    let p = Arc::new(ProductTower {
        left: left.clone(),
        right: right.clone(),
        tower: t,
        pr1,
        pr2,
        legs: RwLock::new(HashMap::new()),
    });
    reg.lock().unwrap().push(p.clone());
    p
}

/// A level of a tower: the index set of a family.
#[derive(Clone)]
pub struct Ctx {
    pub tower: Arc<PairTower>,
    pub level: Arc<Level>,
}

impl fmt::Debug for Ctx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ctx(level {}, {:?})", self.level.r, self.tower)
    }
}

impl PartialEq for Ctx {
    fn eq(&self, other: &Self) -> bool {
        self.level.r == other.level.r
            && (Arc::ptr_eq(&self.tower, &other.tower) || self.tower.base == other.tower.base)
    }
}

impl Ctx {
    pub fn of(pair: &SimplicialPair, r: usize) -> Ctx {
        tower(pair).ctx(r)
    }

    pub fn r(&self) -> usize {
        self.level.r
    }

    pub fn set(&self) -> &Arc<SimplicialSet> {
        self.level.set()
    }

    pub fn pair(&self) -> &SimplicialPair {
        &self.level.pair
    }

    pub fn next(&self) -> Ctx {
        self.tower.ctx(self.r() + 1)
    }

    pub fn at(&self, r: usize) -> Ctx {
        self.tower.ctx(r)
    }
}

/// An element of `B^{sd^r K}` (optionally with `extra` trailing central
/// parameters in every component).
#[derive(Clone)]
pub struct PolyFamily<E> {
    pub ctx: Ctx,
    pub extra: usize,
    comps: Vec<Vec<Poly<E>>>,
}

impl<E: fmt::Debug> fmt::Debug for PolyFamily<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let set = self.ctx.set();
        let mut m = f.debug_map();
        for (d, row) in self.comps.iter().enumerate() {
            for (k, p) in row.iter().enumerate() {
                m.entry(&set.label((d, k)), p);
            }
        }
        m.finish()
    }
}

impl<E: PartialEq> PartialEq for PolyFamily<E> {
    fn eq(&self, other: &Self) -> bool {
        self.extra == other.extra && self.comps == other.comps && self.ctx == other.ctx
    }
}

/// Pulls a component back along the coface `δ^i`.
fn face_component<R: Ring>(ring: &R, p: &Poly<R::Elem>, d: usize, i: usize, extra: usize) -> Poly<R::Elem> {
    p.pullback(ring, &coface_values(d, i), extra)
}

impl<E: Clone + PartialEq + fmt::Debug> PolyFamily<E> {
    pub fn zero(ctx: &Ctx, extra: usize) -> Self {
        let set = ctx.set();
        let comps = (0..=set.dim())
            .map(|d| (0..set.count(d)).map(|_| Poly::zero(d + extra)).collect())
            .collect();
        PolyFamily {
            ctx: ctx.clone(),
            extra,
            comps,
        }
    }

    /// A family from all of its components; validated.
    pub fn from_components<R: Ring<Elem = E>>(ring: &R, ctx: &Ctx, extra: usize, comps: Vec<Vec<Poly<E>>>) -> Result<Self> {
        let set = ctx.set();
        if comps.len() != set.dim() + 1 || comps.iter().enumerate().any(|(d, r)| r.len() != set.count(d)) {
            return Err(Error::ContextMismatch("component table has the wrong shape".into()));
        }
        for (d, row) in comps.iter().enumerate() {
            for (k, p) in row.iter().enumerate() {
                if p.nvars() != d + extra {
                    return Err(Error::DimensionMismatch(format!(
                        "component at `{}` has {} variables",
                        set.label((d, k)),
                        p.nvars()
                    )));
                }
            }
        }
        let f = PolyFamily {
            ctx: ctx.clone(),
            extra,
            comps,
        };
        f.validate(ring)?;
        Ok(f)
    }

    /// A family given on some cells (at least the maximal ones); the rest
    /// are obtained by restriction and everything is validated.
    pub fn from_cells<R, F>(ring: &R, ctx: &Ctx, extra: usize, mut given: F) -> Result<Self>
    where
        R: Ring<Elem = E>,
        F: FnMut(Cell) -> Option<Poly<E>>,
    {
        let set = ctx.set();
        let mut comps: Vec<Vec<Option<Poly<E>>>> = (0..=set.dim()).map(|d| vec![None; set.count(d)]).collect();
        for d in (0..=set.dim()).rev() {
            for k in 0..set.count(d) {
                if let Some(p) = given((d, k)) {
                    comps[d][k] = Some(p);
                }
            }
            if d == 0 {
                break;
            }
            for k in 0..set.count(d) {
                let Some(p) = comps[d][k].clone() else { continue };
                for i in 0..=d {
                    let f = set.face((d, k), i);
                    if comps[f.0][f.1].is_none() {
                        comps[f.0][f.1] = Some(face_component(ring, &p, d, i, extra));
                    }
                }
            }
        }
        let comps = comps
            .into_iter()
            .enumerate()
            .map(|(d, row)| {
                row.into_iter()
                    .enumerate()
                    .map(|(k, p)| {
                        p.ok_or_else(|| Error::ContextMismatch(format!("no component for `{}`", set.label((d, k)))))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        PolyFamily::from_components(ring, ctx, extra, comps)
    }

    /// The constant family `c`.
    pub fn constant<R: Ring<Elem = E>>(ring: &R, ctx: &Ctx, extra: usize, c: E) -> Self {
        let set = ctx.set();
        let comps = (0..=set.dim())
            .map(|d| (0..set.count(d)).map(|_| Poly::constant(ring, d + extra, c.clone())).collect())
            .collect();
        PolyFamily {
            ctx: ctx.clone(),
            extra,
            comps,
        }
    }

    pub fn component(&self, c: Cell) -> &Poly<E> {
        &self.comps[c.0][c.1]
    }

    pub fn components(&self) -> &[Vec<Poly<E>>] {
        &self.comps
    }

    /// Component at the simplex with the given label.
    pub fn at_label(&self, label: &str) -> Option<&Poly<E>> {
        self.ctx.set().lookup(label).map(|c| self.component(c))
    }

    pub fn degree(&self) -> u32 {
        self.comps.iter().flatten().filter_map(Poly::degree).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().flatten().all(Poly::is_zero)
    }

    /// Re-checks face compatibility of every component.
    pub fn validate<R: Ring<Elem = E>>(&self, ring: &R) -> Result<()> {
        let set = self.ctx.set();
        for d in 1..self.comps.len() {
            for (k, p) in self.comps[d].iter().enumerate() {
                for i in 0..=d {
                    let f = set.face((d, k), i);
                    if face_component(ring, p, d, i, self.extra) != self.comps[f.0][f.1] {
                        return Err(Error::FaceIncompatible {
                            label: set.label((d, k)).to_string(),
                            face: i,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    fn check_ctx(&self, other: &Self) -> Result<()> {
        if self.ctx != other.ctx || self.extra != other.extra {
            return Err(Error::ContextMismatch(format!("{:?} vs {:?}", self.ctx, other.ctx)));
        }
        Ok(())
    }

    fn zip<F: Fn(&Poly<E>, &Poly<E>) -> Poly<E>>(&self, other: &Self, f: F) -> Result<Self> {
        self.check_ctx(other)?;
        Ok(self.map_components(|c, p| f(p, other.component(c))))
    }

    /// Applies `f` to every component (the caller keeps compatibility).
    pub fn map_components<F: Fn(Cell, &Poly<E>) -> Poly<E>>(&self, f: F) -> Self {
        let comps = self
            .comps
            .iter()
            .enumerate()
            .map(|(d, row)| row.iter().enumerate().map(|(k, p)| f((d, k), p)).collect())
            .collect();
        PolyFamily {
            ctx: self.ctx.clone(),
            extra: self.extra,
            comps,
        }
    }

    pub fn add<R: Ring<Elem = E>>(&self, ring: &R, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a.add(ring, b))
    }

    pub fn sub<R: Ring<Elem = E>>(&self, ring: &R, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a.sub(ring, b))
    }

    pub fn mul<R: Ring<Elem = E>>(&self, ring: &R, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a.mul(ring, b))
    }

    pub fn neg<R: Ring<Elem = E>>(&self, ring: &R) -> Self {
        self.map_components(|_, p| p.neg(ring))
    }

    pub fn scale<R: Ring<Elem = E>>(&self, ring: &R, k: &BigInt) -> Self {
        self.map_components(|_, p| p.scale(ring, k))
    }

    /// Product with an integer family on the same index set.
    pub fn mul_z<R: Ring<Elem = E>>(&self, ring: &R, z: &PolyFamily<BigInt>) -> Result<Self> {
        if self.ctx != z.ctx || self.extra != z.extra {
            return Err(Error::ContextMismatch("integer factor lives elsewhere".into()));
        }
        Ok(self.map_components(|c, p| p.mul_z(ring, z.component(c))))
    }

    /// Applies a coefficient map (a ring homomorphism `B → C`) everywhere.
    pub fn map_coeffs<R2: Ring, F: Fn(&E) -> R2::Elem>(&self, ring: &R2, f: F) -> PolyFamily<R2::Elem> {
        PolyFamily {
            ctx: self.ctx.clone(),
            extra: self.extra,
            comps: self
                .comps
                .iter()
                .map(|row| row.iter().map(|p| p.map_coeffs(ring, &f)).collect())
                .collect(),
        }
    }

    /// `F^* f` for `F: X → Y`, where this family lives on `Y` and `src` is
    /// the context of `X`.
    pub fn pullback<R: Ring<Elem = E>>(&self, ring: &R, map: &SimplicialMap, src: &Ctx) -> Result<Self> {
        let same = |a: &Arc<SimplicialSet>, b: &Arc<SimplicialSet>| Arc::ptr_eq(a, b) || **a == **b;
        if !same(map.target(), self.ctx.set()) || !same(map.source(), src.set()) {
            return Err(Error::ContextMismatch("map does not match the family".into()));
        }
        let set = src.set();
        let comps = (0..=set.dim())
            .map(|d| {
                (0..set.count(d))
                    .map(|k| {
                        let img = map.image((d, k));
                        self.component(img.base()).pullback(ring, &img.map, self.extra)
                    })
                    .collect()
            })
            .collect();
        Ok(PolyFamily {
            ctx: src.clone(),
            extra: self.extra,
            comps,
        })
    }

    /// The image under `B^{sd^r K} → B^{sd^{r+1} K}` (pullback along `γ`).
    pub fn transition<R: Ring<Elem = E>>(&self, ring: &R) -> Self {
        let next = self.ctx.next();
        let gamma = next.level.gamma.as_ref().unwrap();
        self.pullback(ring, gamma, &next).expect("transition")
    }

    /// Iterated transition up to level `r`.
    pub fn to_level<R: Ring<Elem = E>>(&self, ring: &R, r: usize) -> Result<Self> {
        if r < self.ctx.r() {
            return Err(Error::IncomparableLevels(format!("cannot lower level {} to {r}", self.ctx.r())));
        }
        let mut f = self.clone();
        while f.ctx.r() < r {
            f = f.transition(ring);
        }
        Ok(f)
    }

    /// The first simplex of the marked subcomplex where the family does not
    /// vanish.
    pub fn nonvanishing_on(&self, mask: &[Vec<bool>]) -> Option<String> {
        let set = self.ctx.set();
        set.cells()
            .find(|&c| mask[c.0][c.1] && !self.component(c).is_zero())
            .map(|c| set.label(c).to_string())
    }

    /// Membership in `B^(K,L)_r`: `Ok` iff the family vanishes on `sd^r L`,
    /// otherwise the label of a witness simplex.
    pub fn kernel_test(&self) -> Result<()> {
        match self.nonvanishing_on(self.ctx.pair().mask()) {
            None => Ok(()),
            Some(label) => Err(Error::NotRelative { label }),
        }
    }

    pub fn is_relative(&self) -> bool {
        self.kernel_test().is_ok()
    }

    /// Restriction to `sd^r L`, as a family on the subdivided subcomplex
    /// (with empty subcomplex of its own).
    pub fn restrict(&self) -> PolyFamily<E> {
        let (l, _) = self.ctx.tower.base().subcomplex();
        let target = Ctx::of(&SimplicialPair::absolute(l), self.ctx.r());
        self.restrict_to(&target).expect("subcomplex labels are shared")
    }

    /// Restriction to any set whose simplices are simplices of this one
    /// (matched by label).
    pub fn restrict_to(&self, target: &Ctx) -> Result<PolyFamily<E>> {
        let set = self.ctx.set();
        let tset = target.set();
        let comps = (0..=tset.dim())
            .map(|d| {
                (0..tset.count(d))
                    .map(|k| {
                        let l = tset.label((d, k));
                        set.lookup(l)
                            .map(|c| self.component(c).clone())
                            .ok_or_else(|| Error::ContextMismatch(format!("`{l}` is not a simplex of the family")))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PolyFamily {
            ctx: target.clone(),
            extra: self.extra,
            comps,
        })
    }

    /// Equality of families on sets that agree up to reordering, matched by
    /// simplex labels.
    pub fn eq_by_labels(&self, other: &Self) -> bool {
        let a = self.ctx.set();
        let b = other.ctx.set();
        self.extra == other.extra
            && a.counts() == b.counts()
            && a.cells().all(|c| match b.lookup(a.label(c)) {
                Some(o) => self.component(c) == other.component(o),
                None => false,
            })
    }

    /// Pullback along a map of base sets `f: K' → K` (this family lives on
    /// some `sd^r K`): uses `sd^r f`.
    pub fn pullback_base<R: Ring<Elem = E>>(&self, ring: &R, f: &SimplicialMap, source: &SimplicialPair) -> Result<Self> {
        let src = tower(source);
        let mt = MapTower::new(f.clone(), src.clone(), self.ctx.tower.clone())?;
        let r = self.ctx.r();
        self.pullback(ring, &mt.at(r), &src.ctx(r))
    }

    /// Substitutes the last parameter by an integer, dropping it.
    pub fn eval_last_param<R: Ring<Elem = E>>(&self, ring: &R, value: i64) -> Self {
        assert!(self.extra > 0, "no parameter to evaluate");
        let comps = self
            .comps
            .iter()
            .enumerate()
            .map(|(d, row)| {
                row.iter()
                    .map(|p| {
                        let n = d + self.extra;
                        let mut images: Vec<ZPoly> = (0..n - 1).map(|i| ZPoly::var(n - 1, i)).collect();
                        images.push(ZPoly::int(n - 1, value));
                        p.substitute(ring, &images, n - 1)
                    })
                    .collect()
            })
            .collect();
        PolyFamily {
            ctx: self.ctx.clone(),
            extra: self.extra - 1,
            comps,
        }
    }

    /// Adds trailing parameters on which nothing depends.
    pub fn with_params<R: Ring<Elem = E>>(&self, ring: &R, extra: usize) -> Self {
        let comps = self
            .comps
            .iter()
            .enumerate()
            .map(|(d, row)| {
                row.iter()
                    .map(|p| {
                        let n = d + self.extra;
                        let images: Vec<ZPoly> = (0..n).map(|i| ZPoly::var(n + extra, i)).collect();
                        p.substitute(ring, &images, n + extra)
                    })
                    .collect()
            })
            .collect();
        PolyFamily {
            ctx: self.ctx.clone(),
            extra: self.extra + extra,
            comps,
        }
    }

    /// Splits off the last parameter: `f = Σ_k u^k · coefficients[k]`.
    pub fn param_coefficients<R: Ring<Elem = E>>(&self, ring: &R) -> Vec<Self> {
        assert!(self.extra > 0, "no parameter to split");
        let mut out: Vec<Self> = Vec::new();
        for (d, row) in self.comps.iter().enumerate() {
            for (k, p) in row.iter().enumerate() {
                for (m, c) in p.terms() {
                    let e = *m.0.last().unwrap() as usize;
                    while out.len() <= e {
                        out.push(PolyFamily::zero(&self.ctx, self.extra - 1));
                    }
                    let mono = Monomial(m.0[..m.0.len() - 1].to_vec());
                    let add = Poly::monomial(ring, mono, c.clone());
                    out[e].comps[d][k] = out[e].comps[d][k].add(ring, &add);
                }
            }
        }
        if out.is_empty() {
            out.push(PolyFamily::zero(&self.ctx, self.extra - 1));
        }
        out
    }

    /// Evaluation at a vertex of the underlying set.
    pub fn vertex_value(&self, v: usize) -> E
    where
        E: Default,
    {
        self.comps[0][v].terms().next().map(|(_, c)| c.clone()).unwrap_or_default()
    }
}

/// The barycentric coordinate ("hat function") of vertex `v` of `sd^r K`:
/// `t_j` on simplices whose `j`-th vertex is `v`, zero elsewhere.
pub fn hat(ctx: &Ctx, v: usize) -> PolyFamily<BigInt> {
    let set = ctx.set();
    let comps = (0..=set.dim())
        .map(|d| {
            (0..set.count(d))
                .map(|k| match set.vertices((d, k)).iter().position(|&w| w == v) {
                    Some(j) => ZPoly::simplex_coordinate(d, j, 0),
                    None => ZPoly::zero(d),
                })
                .collect()
        })
        .collect();
    PolyFamily {
        ctx: ctx.clone(),
        extra: 0,
        comps,
    }
}

/// Whether the hats of `vs` have a nonzero product on `L`, that is, whether
/// the face they span lies in `L`.
fn spans_in(set: &SimplicialSet, mask: &[Vec<bool>], cell: Cell, vs: &[usize]) -> bool {
    let all = set.vertices(cell);
    let mut pos: Vec<usize> = vs.iter().filter_map(|v| all.iter().position(|w| w == v)).collect();
    pos.sort_unstable();
    pos.dedup();
    let (d, k) = set.face_of(cell, &pos);
    mask[d][k]
}

/// A seeded random element of `B^{sd^r K}` of degree at most `deg`: a sum of
/// products of hat functions with random coefficients. With `relative` set
/// the vertices of every product span a simplex outside `sd^r L`, so the
/// result lies in `B^(K,L)_r`.
pub fn random_family<R, G, F>(ring: &R, ctx: &Ctx, deg: u32, relative: bool, rng: &mut G, mut coeff: F) -> PolyFamily<R::Elem>
where
    R: Ring,
    G: rand::Rng,
    F: FnMut(&mut G) -> R::Elem,
{
    let set = ctx.set();
    let mask = ctx.pair().mask();
    let mut out = PolyFamily::zero(ctx, 0);
    let top: Vec<Cell> = set.cells().filter(|&(d, _)| d == set.dim()).collect();
    let free: Vec<usize> = (0..set.count(0)).filter(|&v| !mask[0][v]).collect();
    if !relative && rng.gen_bool(0.5) {
        out = PolyFamily::constant(ring, ctx, 0, coeff(rng));
    }
    if deg == 0 || top.is_empty() {
        return out;
    }
    let terms = rng.gen_range(1..=3);
    for _ in 0..terms {
        let k = rng.gen_range(1..=deg);
        let cell = top[rng.gen_range(0..top.len())];
        let vs = set.vertices(cell);
        let mut chosen: Vec<usize> = (0..k).map(|_| vs[rng.gen_range(0..vs.len())]).collect();
        for _ in 0..8 {
            if !relative || !spans_in(set, mask, cell, &chosen) {
                break;
            }
            chosen = (0..k).map(|_| vs[rng.gen_range(0..vs.len())]).collect();
        }
        if relative && spans_in(set, mask, cell, &chosen) {
            // fall back to a vertex outside L, if there is one
            let candidates: Vec<usize> = vs.iter().copied().filter(|v| !mask[0][*v]).collect();
            if !candidates.is_empty() {
                chosen[0] = candidates[rng.gen_range(0..candidates.len())];
            } else if !free.is_empty() {
                chosen[0] = free[rng.gen_range(0..free.len())];
            } else {
                continue;
            }
        }
        let mut z = PolyFamily::constant(&Integers, ctx, 0, BigInt::one());
        for v in chosen {
            z = z.mul(&Integers, &hat(ctx, v)).unwrap();
        }
        let c = coeff(rng);
        let term = z.map_coeffs(ring, |k| ring.scale(k, &c));
        out = out.add(ring, &term).unwrap();
    }
    out
}

/// The ring `B^{sd^r K}` over a coefficient ring `B`.
#[derive(Clone, Debug)]
pub struct FamilyRing<R> {
    pub base: R,
    pub ctx: Ctx,
    pub extra: usize,
}

impl<R: Ring> FamilyRing<R> {
    pub fn new(base: R, ctx: Ctx) -> Self {
        FamilyRing { base, ctx, extra: 0 }
    }
}

impl<R: Ring> Ring for FamilyRing<R> {
    type Elem = PolyFamily<R::Elem>;

    fn zero(&self) -> Self::Elem {
        PolyFamily::zero(&self.ctx, self.extra)
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.add(&self.base, b).expect("family ring: context")
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        a.neg(&self.base)
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.mul(&self.base, b).expect("family ring: context")
    }
    fn scale(&self, k: &BigInt, a: &Self::Elem) -> Self::Elem {
        a.scale(&self.base, k)
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.is_zero()
    }
}

/// Cells of `set` that are not a proper face of anything.
pub fn maximal_cells(set: &SimplicialSet) -> Vec<Cell> {
    let mut has_coface: Vec<Vec<bool>> = (0..=set.dim()).map(|d| vec![false; set.count(d)]).collect();
    for d in 1..=set.dim() {
        for k in 0..set.count(d) {
            for i in 0..=d {
                let f = set.face((d, k), i);
                has_coface[f.0][f.1] = true;
            }
        }
    }
    set.cells().filter(|&c| !has_coface[c.0][c.1]).collect()
}

/// Options for [`extend_family`].
#[derive(Clone, Debug)]
pub struct ExtendOptions {
    /// Degree to start the search at (raised to the degree of the data).
    pub degree: u32,
    /// Highest degree tried; `None` means `2·deg(g) + dim K`.
    pub cap: Option<u32>,
}

/// Extends a family `g` on `sd^r L` (any context whose simplices are
/// simplices of `sd^r L`, matched by label) to a family on `sd^r K`, with
/// the given context `(K, L)` at level `r`. The unknowns are the
/// coefficients of the components on maximal simplices; the constraints say
/// that restrictions to shared faces agree and that the result equals `g`
/// on `sd^r L`. The system is solved over the integers one coordinate of
/// `B` at a time, raising the degree until it becomes solvable.
pub fn extend_family<R: Coordinates>(
    ring: &R,
    ctx: &Ctx,
    g: &PolyFamily<R::Elem>,
    opts: &ExtendOptions,
) -> Result<(PolyFamily<R::Elem>, u32)> {
    if g.extra != 0 {
        return Err(Error::ContextMismatch("extension with parameters is not supported".into()));
    }
    let set = ctx.set();
    let mask = ctx.pair().mask();
    let gset = g.ctx.set();
    // data of g on the cells of sd^r L
    let mut data: HashMap<Cell, Poly<R::Elem>> = HashMap::new();
    for c in set.cells().filter(|&c| mask[c.0][c.1]) {
        let l = set.label(c);
        let gc = gset
            .lookup(l)
            .ok_or_else(|| Error::ContextMismatch(format!("no data for `{l}`")))?;
        data.insert(c, g.component(gc).clone());
    }
    let gdeg = g.degree();
    let cap = opts.cap.unwrap_or(2 * gdeg + set.dim() as u32);
    let maximal = maximal_cells(set);
    // incidences: cell -> [(maximal index, positions)]
    let mut inc: HashMap<Cell, Vec<(usize, Vec<usize>)>> = HashMap::new();
    for (mi, &m) in maximal.iter().enumerate() {
        for (c, pos) in set.faces_with_positions(m) {
            inc.entry(c).or_default().push((mi, pos));
        }
    }
    // cells of L that are maximal inside L
    let mut covered: Vec<Vec<bool>> = (0..=set.dim()).map(|d| vec![false; set.count(d)]).collect();
    for c in set.cells().filter(|&c| mask[c.0][c.1] && c.0 > 0) {
        for i in 0..=c.0 {
            let f = set.face(c, i);
            covered[f.0][f.1] = true;
        }
    }
    let l_top: Vec<Cell> = set
        .cells()
        .filter(|&c| mask[c.0][c.1] && !covered[c.0][c.1])
        .collect();
    let mut keys: Vec<Vec<u32>> = data
        .values()
        .flat_map(|p| p.terms().flat_map(|(_, c)| ring.coordinates(c).into_iter().map(|(k, _)| k)).collect::<Vec<_>>())
        .collect();
    keys.sort();
    keys.dedup();
    if keys.is_empty() {
        return Ok((PolyFamily::zero(ctx, 0), opts.degree));
    }
    let mut restriction_cache: HashMap<(usize, Vec<usize>, Monomial), ZPoly> = HashMap::new();
    let mut restrict_mono = |dim: usize, pos: &[usize], m: &Monomial| -> ZPoly {
        restriction_cache
            .entry((dim, pos.to_vec(), m.clone()))
            .or_insert_with(|| ZPoly::monomial(&Integers, m.clone(), BigInt::one()).pullback(&Integers, pos, 0))
            .clone()
    };
    for deg in opts.degree.max(gdeg)..=cap {
        let monos: Vec<Vec<Monomial>> = (0..=set.dim()).map(|d| Monomial::up_to(d, deg)).collect();
        let mut offset = Vec::with_capacity(maximal.len());
        let mut nunk = 0;
        for m in &maximal {
            offset.push(nunk);
            nunk += monos[m.0].len();
        }
        // restricted unknown polynomial: coefficient -> vector over unknowns
        let mut restricted = |mi: usize, pos: &[usize]| -> HashMap<Monomial, Vec<(usize, BigInt)>> {
            let m = maximal[mi];
            let mut out: HashMap<Monomial, Vec<(usize, BigInt)>> = HashMap::new();
            for (j, mono) in monos[m.0].iter().enumerate() {
                for (rm, c) in restrict_mono(m.0, pos, mono).terms() {
                    out.entry(rm.clone()).or_default().push((offset[mi] + j, c.clone()));
                }
            }
            out
        };
        let mut rows: Vec<Vec<BigInt>> = Vec::new();
        let mut rhs_of_row: Vec<Option<(Cell, Monomial)>> = Vec::new();
        let mut cells: Vec<Cell> = inc.keys().copied().collect();
        cells.sort();
        for c in &cells {
            let list = &inc[c];
            let reference = restricted(list[0].0, &list[0].1);
            for (mi, pos) in &list[1..] {
                let other = restricted(*mi, pos);
                for mono in &monos[c.0] {
                    let mut row = vec![BigInt::zero(); nunk];
                    for (u, k) in other.get(mono).into_iter().flatten() {
                        row[*u] += k;
                    }
                    for (u, k) in reference.get(mono).into_iter().flatten() {
                        row[*u] -= k;
                    }
                    if row.iter().any(|x| !x.is_zero()) {
                        rows.push(row);
                        rhs_of_row.push(None);
                    }
                }
            }
            if l_top.contains(c) {
                for mono in &monos[c.0] {
                    let mut row = vec![BigInt::zero(); nunk];
                    for (u, k) in reference.get(mono).into_iter().flatten() {
                        row[*u] += k;
                    }
                    rows.push(row);
                    rhs_of_row.push(Some((*c, mono.clone())));
                }
            }
        }
        let dg = snf::diagonalize(&rows, nunk);
        let mut solutions: Vec<(Vec<u32>, Vec<BigInt>)> = Vec::new();
        let mut ok = true;
        for key in &keys {
            let b: Vec<BigInt> = rhs_of_row
                .iter()
                .map(|r| match r {
                    None => BigInt::zero(),
                    Some((c, mono)) => data[c]
                        .coeff(mono)
                        .map(|e| {
                            ring.coordinates(e)
                                .into_iter()
                                .find(|(k, _)| k == key)
                                .map(|(_, v)| v)
                                .unwrap_or_default()
                        })
                        .unwrap_or_default(),
                })
                .collect();
            match snf::solve_with(&dg, &b) {
                snf::Solution::Solved(x) => solutions.push((key.clone(), x)),
                snf::Solution::Infeasible(_) => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }
        let top: HashMap<Cell, Poly<R::Elem>> = maximal
            .iter()
            .enumerate()
            .map(|(mi, &m)| {
                let terms = monos[m.0].iter().enumerate().map(|(j, mono)| {
                    let coords = solutions
                        .iter()
                        .map(|(key, x)| (key.clone(), x[offset[mi] + j].clone()))
                        .filter(|(_, v)| !v.is_zero())
                        .collect();
                    (mono.clone(), ring.from_coordinates(coords))
                });
                (m, Poly::from_terms(ring, m.0, terms))
            })
            .collect();
        let f = PolyFamily::from_cells(ring, ctx, 0, |c| top.get(&c).cloned())?;
        return Ok((f, deg));
    }
    Err(Error::DegreeCapExceeded { cap: cap as usize })
}
