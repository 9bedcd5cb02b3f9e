//! Subdivided polynomial homotopies between algebra maps, packaged as
//! checkable certificates.
//!
//! A link at level `r` is a map `h: A → B^{sd^r Δ^1}`. Its endpoints are the
//! restrictions to the two ends of the interval: `f_0` at vertex `0` (the
//! pullback along `sd^r(d^1)`) and `f_1` at vertex `1` (along `sd^r(d^0)`).
//! With `B[t] = B^{Δ^1}` via `t = t_0` this is the usual
//! `ev_1 ∘ h = f_0`, `ev_0 ∘ h = f_1`.

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use crate::coeff::{AlgHom, HomSource, NcPoly};
use crate::error::{Error, Result};
use crate::poly::{Poly, ZPoly};
use crate::polyfun::{tower, Ctx, FamilyRing, MapTower, PolyFamily};
use crate::ring::Ring;
use crate::sset::{coface, interval_reflection, std_simplex, Cell, SimplicialMap, SimplicialPair, SimplicialSet};

/// `(Δ^1, ∅)`.
pub fn interval() -> SimplicialPair {
    SimplicialPair::absolute(Arc::new(std_simplex(1)))
}

/// The context of `B^{sd^r Δ^1}`.
pub fn interval_ctx(r: usize) -> Ctx {
    tower(&interval()).ctx(r)
}

/// Label of the vertex of `sd^r Δ^1` sitting over the base vertex `i`.
pub fn end_label(i: usize, r: usize) -> String {
    format!("{}{i}{}", "{".repeat(r), "}".repeat(r))
}

/// Value of a family on `sd^r Δ^1` at the end `i`.
pub fn end_value<R: Ring>(ring: &R, fam: &PolyFamily<R::Elem>, i: usize) -> Result<R::Elem> {
    let label = end_label(i, fam.ctx.r());
    let p = fam
        .at_label(&label)
        .ok_or_else(|| Error::ContextMismatch(format!("`{label}` is not a vertex")))?;
    Ok(vertex_constant(ring, p))
}

fn vertex_constant<R: Ring>(ring: &R, p: &Poly<R::Elem>) -> R::Elem {
    p.terms().next().map(|(_, c)| c.clone()).unwrap_or_else(|| ring.zero())
}

/// Pulls back a family on `sd^r Δ^1` along the reflection `0 ↔ 1`. At
/// `r = 0` this is the substitution `t_1 ↦ 1 - t_1`; above that it is a
/// simplicial automorphism.
pub fn flip_family<R: Ring>(ring: &R, fam: &PolyFamily<R::Elem>) -> Result<PolyFamily<R::Elem>> {
    let ctx = &fam.ctx;
    if ctx.tower.base() != &interval() {
        return Err(Error::ContextMismatch("flip needs a family on the interval".into()));
    }
    let r = ctx.r();
    if r > 0 {
        let map = interval_reflection(ctx.set(), r)?;
        return fam.pullback(ring, &map, ctx);
    }
    let extra = fam.extra;
    let n = 1 + extra;
    let mut images = vec![ZPoly::from_ints(n, &[(&unit(n, None), 1), (&unit(n, Some(0)), -1)])];
    images.extend((1..n).map(|i| ZPoly::var(n, i)));
    let comps = vec![
        vec![fam.component((0, 1)).clone(), fam.component((0, 0)).clone()],
        vec![fam.component((1, 0)).substitute(ring, &images, n)],
    ];
    PolyFamily::from_components(ring, ctx, extra, comps)
}

fn unit(n: usize, i: Option<usize>) -> Vec<u32> {
    (0..n).map(|j| u32::from(Some(j) == i)).collect()
}

/// Why a link failed validation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinkFailure {
    pub link: usize,
    /// The first offending generator, when the failure is local to one.
    pub generator: Option<usize>,
    pub reason: String,
}

/// `h: A → B^{sd^r Δ^1}` with its declared endpoints.
#[derive(Clone, Debug)]
pub struct SubdividedHomotopy<R: Ring> {
    pub level: usize,
    pub hom: AlgHom<FamilyRing<R>>,
    pub f0: AlgHom<R>,
    pub f1: AlgHom<R>,
}

impl<R: Ring> SubdividedHomotopy<R> {
    /// Builds and validates a link.
    pub fn new(ring: &R, level: usize, hom: AlgHom<FamilyRing<R>>, f0: AlgHom<R>, f1: AlgHom<R>) -> Result<Self> {
        let link = SubdividedHomotopy { level, hom, f0, f1 };
        link.validate(ring)
            .map_err(|e| Error::EndpointMismatch(e.reason))?;
        Ok(link)
    }

    /// A link at level `r` whose endpoints are read off from `hom`.
    pub fn from_hom(ring: &R, level: usize, hom: AlgHom<FamilyRing<R>>) -> Result<Self> {
        let ends = |i| hom.try_map::<R, _>(|x| end_value(ring, x, i));
        let (f0, f1) = (ends(0)?, ends(1)?);
        Self::new(ring, level, hom, f0, f1)
    }

    pub fn family_ring(ring: &R, level: usize) -> FamilyRing<R> {
        FamilyRing::new(ring.clone(), interval_ctx(level))
    }

    /// The constant homotopy at `f`.
    pub fn constant(ring: &R, f: &AlgHom<R>, level: usize) -> Self {
        let ctx = interval_ctx(level);
        let hom = f.map(|x| PolyFamily::constant(ring, &ctx, 0, x.clone()));
        SubdividedHomotopy {
            level,
            hom,
            f0: f.clone(),
            f1: f.clone(),
        }
    }

    /// Checks the link in isolation (link index 0 in the report).
    pub fn validate(&self, ring: &R) -> std::result::Result<(), LinkFailure> {
        let fail = |generator, reason: String| LinkFailure {
            link: 0,
            generator,
            reason,
        };
        if self.hom.source != self.f0.source || self.hom.source != self.f1.source {
            return Err(fail(None, "endpoints have a different source".into()));
        }
        if self.hom.images.len() != self.hom.source.len() {
            return Err(fail(None, "wrong number of generator images".into()));
        }
        let ctx = interval_ctx(self.level);
        for (k, x) in self.hom.images.iter().enumerate() {
            if x.ctx != ctx || x.extra != 0 {
                return Err(fail(Some(k), format!("image does not live on sd^{} Δ^1", self.level)));
            }
            if let Err(e) = x.validate(ring) {
                return Err(fail(Some(k), e.to_string()));
            }
        }
        self.f0.check(ring).map_err(|e| fail(None, format!("f0: {e}")))?;
        self.f1.check(ring).map_err(|e| fail(None, format!("f1: {e}")))?;
        self.hom
            .check(&Self::family_ring(ring, self.level))
            .map_err(|e| fail(None, e.to_string()))?;
        for (i, end) in [(0, &self.f0), (1, &self.f1)] {
            for (k, (x, y)) in self.hom.images.iter().zip(&end.images).enumerate() {
                let v = end_value(ring, x, i).map_err(|e| fail(Some(k), e.to_string()))?;
                if v != *y {
                    return Err(fail(Some(k), format!("restriction to end {i} differs from f{i}")));
                }
            }
        }
        Ok(())
    }

    /// Transports the link to a finer level along the last vertex maps.
    pub fn lift(&self, ring: &R, level: usize) -> Result<Self> {
        if level < self.level {
            return Err(Error::IncomparableLevels(format!("cannot lower a link from {} to {level}", self.level)));
        }
        Ok(SubdividedHomotopy {
            level,
            hom: self.hom.try_map(|x| x.to_level(ring, level))?,
            f0: self.f0.clone(),
            f1: self.f1.clone(),
        })
    }

    /// The same homotopy run backwards.
    pub fn flip(&self, ring: &R) -> Result<Self> {
        Ok(SubdividedHomotopy {
            level: self.level,
            hom: self.hom.try_map(|x| flip_family(ring, x))?,
            f0: self.f1.clone(),
            f1: self.f0.clone(),
        })
    }
}

impl<R: Ring> PartialEq for SubdividedHomotopy<R> {
    fn eq(&self, other: &Self) -> bool {
        self.level == other.level
            && self.hom.source == other.hom.source
            && self.hom.images == other.hom.images
            && self.f0.images == other.f0.images
            && self.f1.images == other.f1.images
    }
}

/// A chain of links `f_0 ∼ g_1 ∼ … ∼ f_1`.
#[derive(Clone, Debug, PartialEq)]
pub struct HomotopyCert<R: Ring> {
    pub links: Vec<SubdividedHomotopy<R>>,
}

impl<R: Ring> HomotopyCert<R> {
    pub fn single(link: SubdividedHomotopy<R>) -> Self {
        HomotopyCert { links: vec![link] }
    }

    pub fn refl(ring: &R, f: &AlgHom<R>) -> Self {
        Self::single(SubdividedHomotopy::constant(ring, f, 0))
    }

    pub fn start(&self) -> Option<&AlgHom<R>> {
        self.links.first().map(|l| &l.f0)
    }

    pub fn end(&self) -> Option<&AlgHom<R>> {
        self.links.last().map(|l| &l.f1)
    }
}

/// Outcome of [`check_cert`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertReport {
    pub ok: bool,
    pub failure: Option<LinkFailure>,
}

/// Validates every link and the chaining of their endpoints.
pub fn check_cert<R: Ring>(ring: &R, cert: &HomotopyCert<R>) -> Result<CertReport> {
    if cert.links.is_empty() {
        return Err(Error::EndpointMismatch("a certificate needs at least one link".into()));
    }
    for (n, link) in cert.links.iter().enumerate() {
        if let Err(mut f) = link.validate(ring) {
            f.link = n;
            return Ok(CertReport {
                ok: false,
                failure: Some(f),
            });
        }
        if n > 0 {
            let prev = &cert.links[n - 1].f1;
            if prev.source != link.f0.source {
                return Err(Error::EndpointMismatch(format!("link {n} has a different source")));
            }
            if let Some(k) = prev.images.iter().zip(&link.f0.images).position(|(a, b)| a != b) {
                return Ok(CertReport {
                    ok: false,
                    failure: Some(LinkFailure {
                        link: n,
                        generator: Some(k),
                        reason: format!("link {n} does not start where link {} ends", n - 1),
                    }),
                });
            }
        }
    }
    Ok(CertReport { ok: true, failure: None })
}

/// The edge `Δ^1 → sd Δ^1` from the end `i` to the barycenter.
fn half_edge(i: usize) -> Result<SimplicialMap> {
    let t = tower(&interval());
    let sd1 = t.level(1).set().clone();
    SimplicialMap::from_vertex_labels(t.base().set.clone(), sd1, |l| {
        if l == "0" {
            format!("{{{i}}}")
        } else {
            "{0;1}".to_string()
        }
    })
}

/// Glues two single links at a common level `r` into one at `r + 1`: the
/// first runs from the end `0` to the barycenter of `sd Δ^1`, the second is
/// flipped so that it runs from the barycenter to the end `1`.
fn glue<R: Ring>(ring: &R, a: &SubdividedHomotopy<R>, b: &SubdividedHomotopy<R>) -> Result<SubdividedHomotopy<R>> {
    if a.f1.source != b.f0.source || a.f1.images != b.f0.images {
        return Err(Error::EndpointMismatch("the first homotopy does not end where the second starts".into()));
    }
    let r = a.level.max(b.level);
    let a = a.lift(ring, r)?;
    let b = b.lift(ring, r)?.flip(ring)?;
    let base = tower(&interval());
    let sd1 = tower(&SimplicialPair::absolute(base.level(1).set().clone()));
    let pieces = [(half_edge(0)?, &a), (half_edge(1)?, &b)];
    // top cell of sd^r(sd Δ^1) ↦ (piece, top cell of sd^r Δ^1)
    let mut table: HashMap<Cell, (usize, Cell)> = HashMap::new();
    for (n, (j, _)) in pieces.iter().enumerate() {
        let m = MapTower::new(j.clone(), base.clone(), sd1.clone())?.at(r);
        let src: &Arc<SimplicialSet> = m.source();
        for k in 0..src.count(1) {
            table.insert(m.image((1, k)).base(), (n, (1, k)));
        }
    }
    let glued_ctx = sd1.ctx(r);
    let target = base.ctx(r + 1);
    let images = (0..a.hom.images.len())
        .map(|g| {
            let fam = PolyFamily::from_cells(ring, &glued_ctx, 0, |c| {
                table.get(&c).map(|&(n, src)| pieces[n].1.hom.images[g].component(src).clone())
            })?;
            fam.restrict_to(&target)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SubdividedHomotopy {
        level: r + 1,
        hom: a.hom.with_images(images),
        f0: a.f0.clone(),
        // `b` is flipped, so its start is the far end
        f1: b.f0.clone(),
    })
}

/// Collapses a chain to a single link by gluing from the left.
pub fn collapse<R: Ring>(ring: &R, c: &HomotopyCert<R>) -> Result<SubdividedHomotopy<R>> {
    let (first, rest) = c
        .links
        .split_first()
        .ok_or_else(|| Error::EndpointMismatch("empty certificate".into()))?;
    rest.iter().try_fold(first.clone(), |acc, l| glue(ring, &acc, l))
}

/// A single link running through `c1` and then `c2`. For two single links
/// at levels `p` and `q` the result sits at level `max(p, q) + 1`.
pub fn concat<R: Ring>(ring: &R, c1: &HomotopyCert<R>, c2: &HomotopyCert<R>) -> Result<SubdividedHomotopy<R>> {
    glue(ring, &collapse(ring, c1)?, &collapse(ring, c2)?)
}

pub fn reverse<R: Ring>(ring: &R, c: &HomotopyCert<R>) -> Result<HomotopyCert<R>> {
    let links = c.links.iter().rev().map(|l| l.flip(ring)).collect::<Result<Vec<_>>>()?;
    Ok(HomotopyCert { links })
}

/// `g ∘ c` for a homomorphism `g: B → C` given on elements.
pub fn whisker_left<R, S, G>(target: &S, g: G, c: &HomotopyCert<R>) -> Result<HomotopyCert<S>>
where
    R: Ring,
    S: Ring,
    G: Fn(&R::Elem) -> S::Elem,
{
    let links = c
        .links
        .iter()
        .map(|l| {
            let hom = l.hom.map(|x| x.map_coeffs(target, &g));
            SubdividedHomotopy::new(target, l.level, hom, l.f0.map(&g), l.f1.map(&g))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(HomotopyCert { links })
}

/// A homomorphism `e: A' → A` given by the images of the generators of
/// `A'` as polynomials in the generators of `A`.
#[derive(Clone, Debug)]
pub struct Precomposition {
    pub source: HomSource,
    pub words: Vec<NcPoly>,
}

impl Precomposition {
    pub fn apply<R: Ring>(&self, ring: &R, f: &AlgHom<R>) -> AlgHom<R> {
        AlgHom {
            source: self.source.clone(),
            images: self.words.iter().map(|w| f.eval(ring, w)).collect(),
        }
    }
}

/// `c ∘ e`.
pub fn whisker_right<R: Ring>(ring: &R, c: &HomotopyCert<R>, e: &Precomposition) -> Result<HomotopyCert<R>> {
    let links = c
        .links
        .iter()
        .map(|l| {
            let fr = SubdividedHomotopy::family_ring(ring, l.level);
            let hom = e.apply(&fr, &l.hom);
            SubdividedHomotopy::new(ring, l.level, hom, e.apply(ring, &l.f0), e.apply(ring, &l.f1))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(HomotopyCert { links })
}

/// Reads a family with one trailing parameter `u` as a family on the
/// interval with `u = t_0`: the end `0` is `u = 1`, the end `1` is `u = 0`.
pub fn parameter_as_interval<R: Ring>(ring: &R, fam: &PolyFamily<R::Elem>) -> Result<PolyFamily<PolyFamily<R::Elem>>> {
    let inner = FamilyRing {
        base: ring.clone(),
        ctx: fam.ctx.clone(),
        extra: fam.extra - 1,
    };
    let one_minus_s = ZPoly::from_ints(1, &[(&[0], 1), (&[1], -1)]);
    let mut power = ZPoly::one(1);
    let mut edge = Poly::zero(1);
    for c in fam.param_coefficients(ring) {
        edge = edge.add(&inner, &Poly::constant(&inner, 1, c).mul_z(&inner, &power));
        power = power.mul(&crate::Integers, &one_minus_s);
    }
    PolyFamily::from_cells(&inner, &interval_ctx(0), 0, |c| (c.0 == 1).then(|| edge.clone()))
}

/// Which of the three face identities of the group inverse witness hold.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InverseReport {
    /// `(d^0)^* α = ω ∘ f`
    pub d0: bool,
    /// `(d^1)^* α = 0`
    pub d1: bool,
    /// `(d^2)^* α = f`
    pub d2: bool,
}

impl InverseReport {
    pub fn passed(&self) -> bool {
        self.d0 && self.d1 && self.d2
    }
}

/// `(Δ^1, ∂Δ^1)`.
pub fn circle_pair() -> SimplicialPair {
    SimplicialPair::generated(Arc::new(std_simplex(1)), &["0", "1"]).expect("vertices of Δ^1")
}

/// `α = φ ∘ f` with `φ(t_0) = t_0 + t_2`, `φ(t_1) = t_1`, for `f` landing in
/// the kernel over `∂Δ^1`, and the check of its faces.
pub fn inverse_witness<R: Ring>(ring: &R, f: &AlgHom<FamilyRing<R>>) -> Result<(AlgHom<FamilyRing<R>>, InverseReport)> {
    let s1 = tower(&circle_pair()).ctx(0);
    let simplex = tower(&SimplicialPair::absolute(Arc::new(std_simplex(2)))).ctx(0);
    for x in &f.images {
        if x.ctx != s1 || x.extra != 0 {
            return Err(Error::ContextMismatch("expected a family on (Δ^1, ∂Δ^1) at level 0".into()));
        }
        x.kernel_test()?;
    }
    // in the coordinates (t_1, t_2) of Δ^2, φ(t_1) = t_1
    let images = [ZPoly::var(2, 0)];
    let alpha = f.try_map::<FamilyRing<R>, _>(|x| {
        let top = x.component((1, 0)).substitute(ring, &images, 2);
        PolyFamily::from_cells(ring, &simplex, 0, |c| (c.0 == 2).then(|| top.clone()))
    })?;
    let edge = Ctx::of(&SimplicialPair::absolute(Arc::new(std_simplex(1))), 0);
    let face = |i: usize| -> Result<Vec<PolyFamily<R::Elem>>> {
        let d = coface(2, i)?;
        alpha.images.iter().map(|a| a.pullback(ring, &d, &edge)).collect()
    };
    let as_edge = |x: &PolyFamily<R::Elem>| x.restrict_to(&edge);
    let f_edge = f.images.iter().map(as_edge).collect::<Result<Vec<_>>>()?;
    let omega_f = f_edge.iter().map(|x| flip_family(ring, x)).collect::<Result<Vec<_>>>()?;
    let report = InverseReport {
        d0: face(0)? == omega_f,
        d1: face(1)?.iter().all(|x| x.is_zero()),
        d2: face(2)? == f_edge,
    };
    Ok((alpha, report))
}

/// An element of `[A, B_•]` for the diagram `B_r = B^{sd^r K}`: a
/// representative at some level.
#[derive(Clone, Debug)]
pub struct IndClass<R: Ring> {
    pub base: SimplicialPair,
    pub level: usize,
    pub hom: AlgHom<FamilyRing<R>>,
}

impl<R: Ring> IndClass<R> {
    pub fn new(ring: &R, base: SimplicialPair, level: usize, hom: AlgHom<FamilyRing<R>>) -> Result<Self> {
        let ctx = tower(&base).ctx(level);
        for x in &hom.images {
            if x.ctx != ctx {
                return Err(Error::ContextMismatch("representative is not at its level".into()));
            }
            x.validate(ring)?;
        }
        hom.check(&FamilyRing::new(ring.clone(), ctx))?;
        Ok(IndClass { base, level, hom })
    }

    /// The representative moved to a finer level.
    pub fn at_level(&self, ring: &R, level: usize) -> Result<AlgHom<FamilyRing<R>>> {
        if level < self.level {
            return Err(Error::IncomparableLevels(format!("class lives at level {}, asked for {level}", self.level)));
        }
        self.hom.try_map(|x| x.to_level(ring, level))
    }

    pub fn transition(&self, ring: &R) -> Result<Self> {
        Ok(IndClass {
            base: self.base.clone(),
            level: self.level + 1,
            hom: self.at_level(ring, self.level + 1)?,
        })
    }
}

/// Whether `w`, a certificate over `B_level`, connects the images of `u`
/// and `v` at that level.
pub fn ind_class_eq<R: Ring>(ring: &R, u: &IndClass<R>, v: &IndClass<R>, w: &HomotopyCert<FamilyRing<R>>, level: usize) -> Result<bool> {
    if u.base != v.base {
        return Err(Error::ContextMismatch("classes over different diagrams".into()));
    }
    let (ul, vl) = (u.at_level(ring, level)?, v.at_level(ring, level)?);
    let fr = FamilyRing::new(ring.clone(), tower(&u.base).ctx(level));
    let (Some(start), Some(end)) = (w.start(), w.end()) else {
        return Err(Error::EndpointMismatch("empty certificate".into()));
    };
    if start.images.iter().chain(&end.images).any(|x| x.ctx != fr.ctx) {
        return Err(Error::IncomparableLevels(format!("certificate is not over level {level}")));
    }
    Ok(check_cert(&fr, w)?.ok && start.images == ul.images && end.images == vl.images)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{Algebra, FinPresAlgebra};
    use crate::mult::Cylinder;
    use crate::polyfun::{hat, random_family};
    use crate::Integers;
    use num_bigint::BigInt;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn free1() -> FinPresAlgebra {
        FinPresAlgebra::free(&["a"])
    }

    /// An elementary homotopy `a ↦ x0 + (x1 - x0) t_1` between two
    /// constants.
    fn line(b: &Algebra, x0: &crate::coeff::AlgElem, x1: &crate::coeff::AlgElem, level: usize) -> SubdividedHomotopy<Algebra> {
        let ctx = interval_ctx(0);
        let fam = PolyFamily::constant(b, &ctx, 0, x0.clone())
            .add(b, &hat(&ctx, 1).map_coeffs(b, |k| b.scale(k, &b.sub(x1, x0))))
            .unwrap()
            .to_level(b, level)
            .unwrap();
        let hom = AlgHom::new(free1(), vec![fam]).unwrap();
        SubdividedHomotopy::from_hom(b, level, hom).unwrap()
    }

    #[test]
    fn constant_cert_checks() {
        let b = Algebra::poly1();
        let f = AlgHom::new(free1(), vec![b.generator(1)]).unwrap();
        let c = HomotopyCert::refl(&b, &f);
        assert!(check_cert(&b, &c).unwrap().ok);
        let c2 = concat(&b, &c, &c).unwrap();
        assert_eq!(c2.level, 1);
        assert_eq!(c2.f0.images, f.images);
        assert_eq!(c2.f1.images, f.images);
    }

    #[test]
    fn corrupted_endpoint_is_reported() {
        let b = Algebra::poly1();
        let mut link = line(&b, &b.zero(), &b.generator(1), 0);
        link.f1.images[0] = b.scale(&BigInt::from(2), &b.generator(1));
        let r = check_cert(&b, &HomotopyCert::single(link)).unwrap();
        assert!(!r.ok);
        assert_eq!(r.failure.unwrap().generator, Some(0));
        assert!(check_cert(&b, &HomotopyCert { links: vec![] }).is_err());
    }

    #[test]
    fn cylinder_is_a_homotopy_from_id_to_iota_v() {
        let b = Algebra::matrix(2);
        let cyl = Cylinder::simplex(2);
        let inner = FamilyRing::new(b, cyl.ctx.clone());
        let gens: Vec<PolyFamily<_>> = cyl.generators().iter().map(|t| t.map_coeffs(&b, |k| b.scale(k, &b.generator(1)))).collect();
        let names: Vec<String> = (0..gens.len()).map(|i| format!("t{i}")).collect();
        let images = gens
            .iter()
            .map(|g| parameter_as_interval(&b, &cyl.h(&b, g).unwrap()))
            .collect::<Result<Vec<_>>>()
            .unwrap();
        let id = AlgHom::<FamilyRing<Algebra>>::sampled(names.clone(), gens.clone()).unwrap();
        let iv = id.map(|g| cyl.iota(&b, cyl.v(&b, g)));
        let link = SubdividedHomotopy {
            level: 0,
            hom: AlgHom::sampled(names, images).unwrap(),
            f0: id,
            f1: iv,
        };
        assert!(check_cert(&inner, &HomotopyCert::single(link)).unwrap().ok);
    }

    #[test]
    fn two_links_glue_into_one() {
        let b = Algebra::poly1();
        let x = b.generator(1);
        let x2 = b.mul(&x, &x);
        let l1 = line(&b, &b.zero(), &x, 0);
        let l2 = line(&b, &x, &x2, 1);
        let chain = HomotopyCert { links: vec![l1.clone(), l2.clone()] };
        assert!(check_cert(&b, &chain).unwrap().ok);
        let g = concat(&b, &HomotopyCert::single(l1.clone()), &HomotopyCert::single(l2.clone())).unwrap();
        assert_eq!(g.level, 2);
        g.validate(&b).unwrap();
        assert_eq!((g.f0.images[0].clone(), g.f1.images[0].clone()), (b.zero(), x2));
        // the halves are the lifted inputs, the second one flipped
        let sd1 = interval_ctx(1);
        let sd2 = interval_ctx(2);
        for (end, expect) in [("0", l1.lift(&b, 1).unwrap()), ("1", l2.flip(&b).unwrap())] {
            let half = SimplicialMap::from_vertex_labels(sd1.set().clone(), sd2.set().clone(), |l| match l {
                "{0}" => format!("{{{{{end}}}}}"),
                "{1}" => "{{0;1}}".to_string(),
                _ => format!("{{{{{end}}};{{0;1}}}}"),
            })
            .unwrap();
            assert_eq!(g.hom.images[0].pullback(&b, &half, &sd1).unwrap(), expect.hom.images[0]);
        }
        // reversing and concatenating gives a loop
        let back = reverse(&b, &chain).unwrap();
        assert!(check_cert(&b, &back).unwrap().ok);
        let lp = concat(&b, &chain, &back).unwrap();
        assert_eq!(lp.f0.images, lp.f1.images);
        assert_eq!(reverse(&b, &back).unwrap(), chain);
    }

    #[test]
    fn whiskering() {
        let b = Algebra::poly1();
        let x = b.generator(1);
        let c = HomotopyCert::single(line(&b, &x, &b.zero(), 1));
        assert_eq!(whisker_left(&b, |y| y.clone(), &c).unwrap(), c);
        let x2 = b.mul(&x, &x);
        let sub = crate::coeff::BuiltinHom::new(b, vec![b.generator(0), x2], &b).unwrap();
        let sq = |y: &crate::coeff::AlgElem| sub.apply(&b, y);
        let w = whisker_left(&b, sq, &c).unwrap();
        assert!(check_cert(&b, &w).unwrap().ok);
        let f = AlgHom::new(free1(), vec![x.clone()]).unwrap();
        let r = whisker_left(&b, sq, &HomotopyCert::refl(&b, &f)).unwrap();
        assert_eq!(r, HomotopyCert::refl(&b, &f.map(sq)));
        let two = FinPresAlgebra::free(&["p", "q"]);
        let a = free1();
        let e = Precomposition {
            source: HomSource::Presented(Arc::new(two)),
            words: vec![a.parse_element("a*a").unwrap(), a.parse_element("a + a*a*a").unwrap()],
        };
        let wr = whisker_right(&b, &c, &e).unwrap();
        assert!(check_cert(&b, &wr).unwrap().ok);
        assert_eq!(wr.links[0].f0.images[0], b.mul(&x, &x));
    }

    #[test]
    fn inverse_witness_identities() {
        let s1 = tower(&circle_pair()).ctx(0);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for b in [Algebra::poly1(), Algebra::matrix(2), Algebra::dual(), Algebra::integers()] {
            for _ in 0..4 {
                let f = random_family(&b, &s1, 3, true, &mut rng, |r| b.random_elem(r, 3, 3));
                let hom = AlgHom::new(free1(), vec![f]).unwrap();
                let (alpha, report) = inverse_witness(&b, &hom).unwrap();
                assert!(report.passed(), "{report:?}");
                assert_eq!(alpha.images[0].ctx.set().dim(), 2);
            }
        }
        let b = Algebra::integers();
        let zero = AlgHom::new(free1(), vec![PolyFamily::zero(&s1, 0)]).unwrap();
        let (alpha, report) = inverse_witness(&b, &zero).unwrap();
        assert!(report.passed() && alpha.images[0].is_zero());
        let bad = AlgHom::new(free1(), vec![PolyFamily::constant(&b, &s1, 0, b.generator(0))]).unwrap();
        assert!(inverse_witness(&b, &bad).is_err());
        let _ = rng.gen::<u8>();
    }

    #[test]
    fn ind_classes() {
        let z = Integers;
        let base = circle_pair();
        let ctx = tower(&base).ctx(0);
        let f = hat(&ctx, 0).mul(&z, &hat(&ctx, 1)).unwrap();
        let u = IndClass::new(&z, base.clone(), 0, AlgHom::new(free1(), vec![f]).unwrap()).unwrap();
        let fr0 = FamilyRing::new(z, ctx.clone());
        assert!(ind_class_eq(&z, &u, &u, &HomotopyCert::refl(&fr0, &u.hom), 0).unwrap());
        let v = u.transition(&z).unwrap();
        let fr1 = FamilyRing::new(z, tower(&base).ctx(1));
        let w = HomotopyCert::refl(&fr1, &v.hom);
        assert!(ind_class_eq(&z, &u, &v, &w, 1).unwrap());
        assert!(ind_class_eq(&z, &v, &u, &w, 0).is_err());
        let mut bad = w.clone();
        bad.links[0].f1.images[0] = bad.links[0].f1.images[0].scale(&z, &BigInt::from(2));
        assert!(!ind_class_eq(&z, &u, &v, &bad, 1).unwrap());
    }
}
