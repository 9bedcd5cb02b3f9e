//! The multiplication `μ: B^(K,L)_r ⊗ Z^(K',L')_s → B^{(K×K', K×L' ∪ L×K')}_{r+s}`,
//! the homotopy `H̃` built from it, the cylinder homotopies on `Δ^n` and
//! `Δ^p × Δ^q`, and a family on `Δ^1 × Δ^1` outside the image of `μ`.
//!
//! On a simplex `σ` of `sd^{r+s}(K × K')` let `a = γ^s sd^{r+s}(pr_1) σ` and
//! `b = γ^r sd^{r+s}(pr_2) σ`. Then `μ(f ⊗ g)(σ) = a^* f · b^* g`. Because
//! the right side only depends on the components of `f` and `g` at the
//! bases of `a` and `b`, the same formula applies to nested families
//! (elements of `(B^(K,L)_r)^(K',L')_s`) without choosing a decomposition.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;

use crate::coeff::AlgHom;
use crate::error::{Error, Result};
use crate::poly::{Monomial, Poly, ZPoly};
use crate::polyfun::{hat, product_tower, Ctx, FamilyRing, PolyFamily};
use crate::ring::{Integers, Ring};
use crate::snf;
use crate::sset::{coordinates, product, std_simplex, Coord, SimplicialPair};

/// An element of `(B^(K,L)_r)^(K',L')_s`: an outer family whose
/// coefficients are inner families.
pub type NestedFamily<E> = PolyFamily<PolyFamily<E>>;

/// Output level bookkeeping: `θ(r, s) = r + s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MuIndex {
    pub r: usize,
    pub s: usize,
}

impl MuIndex {
    pub fn theta(&self) -> usize {
        self.r + self.s
    }
}

/// The context of `μ`'s output for inputs in the given contexts.
pub fn mu_context(left: &Ctx, right: &Ctx) -> Ctx {
    let pt = product_tower(&left.tower, &right.tower);
    pt.tower.ctx(MuIndex { r: left.r(), s: right.r() }.theta())
}

fn mu_generic<E, F>(left: &Ctx, right: &Ctx, at: F) -> PolyFamily<E>
where
    E: Clone + PartialEq + std::fmt::Debug,
    F: Fn(usize, &crate::sset::SimplexRef, &crate::sset::SimplexRef) -> Poly<E>,
{
    let pt = product_tower(&left.tower, &right.tower);
    let (a, b) = pt.legs(left.r(), right.r());
    let out = pt.tower.ctx(left.r() + right.r());
    PolyFamily::zero(&out, 0).map_components(|c, _| at(c.0, a.image(c), b.image(c)))
}

/// `μ(Σ f_i ⊗ g_i)` with `f_i` over `B` and `g_i` over the integers.
pub fn mu_tensor<R: Ring>(ring: &R, pairs: &[(PolyFamily<R::Elem>, PolyFamily<BigInt>)]) -> Result<PolyFamily<R::Elem>> {
    let Some((f0, g0)) = pairs.first() else {
        return Err(Error::ContextMismatch("μ of an empty sum needs contexts".into()));
    };
    for (f, g) in pairs {
        if f.ctx != f0.ctx || g.ctx != g0.ctx || f.extra != 0 || g.extra != 0 {
            return Err(Error::ContextMismatch("μ inputs must share contexts".into()));
        }
    }
    Ok(mu_generic(&f0.ctx, &g0.ctx, |d, a, b| {
        let mut acc = Poly::zero(d);
        for (f, g) in pairs {
            let fa = f.component(a.base()).pullback(ring, &a.map, 0);
            let gb = g.component(b.base()).pullback(&Integers, &b.map, 0);
            acc = acc.add(ring, &fa.mul_z(ring, &gb));
        }
        acc
    }))
}

/// `μ(Σ g_i ⊗ f_i)` with `g_i` over the integers and `f_i` over `B`.
pub fn mu_tensor_zb<R: Ring>(ring: &R, pairs: &[(PolyFamily<BigInt>, PolyFamily<R::Elem>)]) -> Result<PolyFamily<R::Elem>> {
    let Some((g0, f0)) = pairs.first() else {
        return Err(Error::ContextMismatch("μ of an empty sum needs contexts".into()));
    };
    for (g, f) in pairs {
        if f.ctx != f0.ctx || g.ctx != g0.ctx || f.extra != 0 || g.extra != 0 {
            return Err(Error::ContextMismatch("μ inputs must share contexts".into()));
        }
    }
    Ok(mu_generic(&g0.ctx, &f0.ctx, |d, a, b| {
        let mut acc = Poly::zero(d);
        for (g, f) in pairs {
            let ga = g.component(a.base()).pullback(&Integers, &a.map, 0);
            let fb = f.component(b.base()).pullback(ring, &b.map, 0);
            acc = acc.add(ring, &fb.mul_z(ring, &ga));
        }
        acc
    }))
}

/// `μ` of a nested family whose inner families live in `inner`.
pub fn mu_nested<R: Ring>(ring: &R, inner: &Ctx, h: &NestedFamily<R::Elem>) -> Result<PolyFamily<R::Elem>> {
    if h.extra != 0 {
        return Err(Error::ContextMismatch("nested family with parameters".into()));
    }
    for row in h.components() {
        for p in row {
            for (_, c) in p.terms() {
                if c.ctx != *inner || c.extra != 0 {
                    return Err(Error::ContextMismatch("inner family in the wrong context".into()));
                }
            }
        }
    }
    Ok(mu_generic(inner, &h.ctx, |d, a, b| {
        let mut acc = Poly::zero(d);
        for (m, c) in h.component(b.base()).terms() {
            let tm = ZPoly::monomial(&Integers, m.clone(), BigInt::one()).pullback(&Integers, &b.map, 0);
            let ca = c.component(a.base()).pullback(ring, &a.map, 0);
            acc = acc.add(ring, &ca.mul_z(ring, &tm));
        }
        acc
    }))
}

/// The nested family `f ⊗ g` (outer `g` with coefficient `f`).
pub fn nest<R: Ring>(ring: &R, f: &PolyFamily<R::Elem>, g: &PolyFamily<BigInt>) -> NestedFamily<R::Elem> {
    let fr = FamilyRing::new(ring.clone(), f.ctx.clone());
    g.map_coeffs(&fr, |k| f.scale(ring, k))
}

/// Result of checking the endpoint square of `H̃`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EndpointReport {
    /// `ok[i]` iff `(d^i)^* H̃ = (γ^s)^* (d^i)^* H` on every generator.
    pub ok: [bool; 2],
    /// First failing generator and endpoint.
    pub witness: Option<(String, usize)>,
}

impl EndpointReport {
    pub fn passed(&self) -> bool {
        self.ok == [true, true]
    }
}

/// `H̃ = μ ∘ H` for `H: A → (B^(K,L)_r)^{sd^s I}` (outer pair `(I, ∅)`):
/// a homomorphism into `B^{(K×I, L×I)}_{r+s}`, together with the check of
/// the endpoint square.
pub fn htilde<R: Ring>(
    ring: &R,
    inner: &Ctx,
    h: &AlgHom<FamilyRing<FamilyRing<R>>>,
    nested_ring: &FamilyRing<FamilyRing<R>>,
) -> Result<(AlgHom<FamilyRing<R>>, EndpointReport)> {
    h.check(nested_ring)?;
    let images = h
        .images
        .iter()
        .map(|x| mu_nested(ring, inner, x))
        .collect::<Result<Vec<_>>>()?;
    let ht: AlgHom<FamilyRing<R>> = h.with_images(images);
    let report = htilde_endpoints(ring, inner, h, &ht)?;
    Ok((ht, report))
}

/// `(d^i)^*` of a family on `sd^r(K × I)`: restriction to `K × {v}` with
/// `v = 1` for `i = 0` and `v = 0` for `i = 1`, as a family on `sd^r K`.
pub fn restrict_cylinder_end<R: Ring>(ring: &R, base: &SimplicialPair, f: &PolyFamily<R::Elem>, i: usize) -> Result<PolyFamily<R::Elem>> {
    let v = if i == 0 { "1" } else { "0" };
    let k = base.set.clone();
    let target = f.ctx.tower.base().set.clone();
    let width = coordinates(k.label((0, 0))).len();
    let mut perm: Vec<Coord> = (0..width).map(Coord::From).collect();
    perm.push(Coord::Fixed(v.to_string()));
    let map = crate::sset::coordinate_map(&k, &target, &perm)?;
    f.pullback_base(ring, &map, base)
}

/// The value at an end of `sd^s I` of a nested family, as an inner family.
pub fn nested_end<R: Ring>(ring: &FamilyRing<R>, f: &NestedFamily<R::Elem>, i: usize) -> PolyFamily<R::Elem> {
    let v = if i == 0 { "1" } else { "0" };
    let r = f.ctx.r();
    let label = format!("{}{v}{}", "{".repeat(r), "}".repeat(r));
    let cell = f.ctx.set().lookup(&label).expect("end vertex");
    f.component(cell)
        .terms()
        .next()
        .map(|(_, c)| c.clone())
        .unwrap_or_else(|| ring.zero())
}

fn htilde_endpoints<R: Ring>(
    ring: &R,
    inner: &Ctx,
    h: &AlgHom<FamilyRing<FamilyRing<R>>>,
    ht: &AlgHom<FamilyRing<R>>,
) -> Result<EndpointReport> {
    let inner_ring = FamilyRing::new(ring.clone(), inner.clone());
    let names = h.source.point_names();
    let mut report = EndpointReport {
        ok: [true, true],
        witness: None,
    };
    for (g, (x, y)) in h.images.iter().zip(&ht.images).enumerate() {
        let s = x.ctx.r();
        for i in 0..2 {
            let lhs = restrict_cylinder_end(ring, inner.tower.base(), y, i)?;
            let rhs = nested_end(&inner_ring, x, i).to_level(ring, inner.r() + s)?;
            if lhs != rhs {
                report.ok[i] = false;
                if report.witness.is_none() {
                    report.witness = Some((names[g].clone(), i));
                }
            }
        }
    }
    Ok(report)
}

/// The cylinder homotopy on a set whose maximal simplices all start at the
/// same vertex (the apex): `Δ^n` and `Δ^p × Δ^q`.
#[derive(Clone, Debug)]
pub struct Cylinder {
    pub ctx: Ctx,
    pub apex: usize,
}

impl Cylinder {
    pub fn simplex(n: usize) -> Self {
        let set = Arc::new(std_simplex(n));
        Cylinder {
            ctx: Ctx::of(&SimplicialPair::absolute(set), 0),
            apex: 0,
        }
    }

    pub fn prism(p: usize, q: usize) -> Self {
        let pr = product(&Arc::new(std_simplex(p)), &Arc::new(std_simplex(q)));
        let apex = match pr.set.lookup("0,0") {
            Some((0, v)) => v,
            _ => unreachable!("product of simplices has a vertex 0,0"),
        };
        Cylinder {
            ctx: Ctx::of(&SimplicialPair::absolute(pr.set), 0),
            apex,
        }
    }

    /// `ι: B → B^X`, constants.
    pub fn iota<R: Ring>(&self, ring: &R, b: R::Elem) -> PolyFamily<R::Elem> {
        PolyFamily::constant(ring, &self.ctx, 0, b)
    }

    /// `v: B^X → B`, evaluation at the apex.
    pub fn v<R: Ring>(&self, ring: &R, f: &PolyFamily<R::Elem>) -> R::Elem {
        f.component((0, self.apex))
            .terms()
            .next()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(|| ring.zero())
    }

    /// `H(f)`, with the homotopy variable `u` as the last parameter: on each
    /// maximal simplex `t_i ↦ u·t_i` for `i > 0` (so `t_0 ↦ t_0 + (1−u)Σ t_i`).
    /// The pieces are glued and their agreement on shared faces is checked.
    pub fn h<R: Ring>(&self, ring: &R, f: &PolyFamily<R::Elem>) -> Result<PolyFamily<R::Elem>> {
        if f.ctx != self.ctx || f.extra != 0 {
            return Err(Error::ContextMismatch("cylinder input".into()));
        }
        let set = self.ctx.set().clone();
        let maximal = crate::polyfun::maximal_cells(&set);
        for &m in &maximal {
            if set.vertices(m)[0] != self.apex {
                return Err(Error::InvalidSimplicialSet(format!("`{}` does not start at the apex", set.label(m))));
            }
        }
        PolyFamily::from_cells(ring, &self.ctx, 1, |c| {
            maximal.contains(&c).then(|| {
                let d = c.0;
                let images: Vec<ZPoly> = (0..d)
                    .map(|i| ZPoly::var(d + 1, i).mul(&Integers, &ZPoly::var(d + 1, d)))
                    .collect();
                f.component(c).substitute(ring, &images, d + 1)
            })
        })
    }

    /// The ring generators `t_v` (hat functions of the vertices).
    pub fn generators(&self) -> Vec<PolyFamily<BigInt>> {
        (0..self.ctx.set().count(0)).map(|v| hat(&self.ctx, v)).collect()
    }

    /// Checks `ev_1 ∘ H = id` and `ev_0 ∘ H = ι ∘ v` on `f`.
    pub fn check<R: Ring>(&self, ring: &R, f: &PolyFamily<R::Elem>) -> Result<()> {
        let hf = self.h(ring, f)?;
        if hf.eval_last_param(ring, 1) != *f {
            return Err(Error::EndpointMismatch("ev_1 ∘ H differs from the identity".into()));
        }
        if hf.eval_last_param(ring, 0) != self.iota(ring, self.v(ring, f)) {
            return Err(Error::EndpointMismatch("ev_0 ∘ H differs from ι ∘ v".into()));
        }
        Ok(())
    }
}

/// A family on `Δ^1 × Δ^1` that is not of the form `Σ x^a y^b c_{ab}` for
/// exponents up to a bound, with the certificate.
#[derive(Clone, Debug)]
pub struct MuWitness {
    pub family: PolyFamily<BigInt>,
    pub max_deg: u32,
    /// Exponent pairs `(a, b)` of the unknowns, in column order.
    pub unknowns: Vec<(u32, u32)>,
    pub matrix: Vec<Vec<BigInt>>,
    pub rhs: Vec<BigInt>,
    pub certificate: snf::Certificate,
}

impl MuWitness {
    /// Re-checks validity of the family and the certificate.
    pub fn verify(&self) -> bool {
        self.family.validate(&Integers).is_ok() && self.certificate.verify(&self.matrix, self.unknowns.len(), &self.rhs)
    }
}

/// The piecewise family `x − y` on the triangle `(0,0) < (1,0) < (1,1)` and
/// `0` on the other one, and a certificate that no sum `Σ c_{ab} x^a y^b`
/// with `a, b ≤ D` (the image of `μ` on polynomials of degree `≤ D` in each
/// factor) equals it.
pub fn mu_image_witness(max_deg: u32) -> Result<MuWitness> {
    let i = Arc::new(std_simplex(1));
    let ti = crate::polyfun::tower(&SimplicialPair::absolute(i));
    let c1 = ti.ctx(0);
    let pt = product_tower(&ti, &ti);
    let sq = pt.tower.ctx(0);
    let set = sq.set().clone();
    let lower = set.lookup("0,0;1,0;1,1").expect("lower triangle");
    let family = PolyFamily::from_cells(&Integers, &sq, 0, |c| {
        (c.0 == 2).then(|| {
            if c == lower {
                ZPoly::var(2, 0)
            } else {
                ZPoly::zero(2)
            }
        })
    })?;
    let t1 = hat(&c1, 1);
    let power = |f: &PolyFamily<BigInt>, e: u32| {
        (0..e).fold(PolyFamily::constant(&Integers, &c1, 0, BigInt::one()), |acc, _| acc.mul(&Integers, f).unwrap())
    };
    let mut unknowns = Vec::new();
    let mut columns: Vec<PolyFamily<BigInt>> = Vec::new();
    for a in 0..=max_deg {
        for b in 0..=max_deg {
            unknowns.push((a, b));
            columns.push(mu_tensor(&Integers, &[(power(&t1, a), power(&t1, b))])?);
        }
    }
    // one equation per coefficient of each top component
    let tops: Vec<_> = set.cells().filter(|c| c.0 == 2).collect();
    let mut monos: Vec<Monomial> = Monomial::up_to(2, 2 * max_deg);
    monos.sort();
    let mut matrix = Vec::new();
    let mut rhs = Vec::new();
    for &t in &tops {
        for m in &monos {
            matrix.push(
                columns
                    .iter()
                    .map(|col| col.component(t).coeff(m).cloned().unwrap_or_default())
                    .collect(),
            );
            rhs.push(family.component(t).coeff(m).cloned().unwrap_or_default());
        }
    }
    match snf::solve(&matrix, unknowns.len(), &rhs) {
        snf::Solution::Infeasible(certificate) => Ok(MuWitness {
            family,
            max_deg,
            unknowns,
            matrix,
            rhs,
            certificate,
        }),
        snf::Solution::Solved(_) => Err(Error::Membership("the witness family lies in the image of μ".into())),
    }
}

/// A seeded random nested family `Σ f_i ⊗ g_i` with `f_i` relative over
/// `B` in `inner` and `g_i` integer families in `outer` (relative when
/// `outer_relative`).
pub fn random_nested<R, G, F>(
    ring: &R,
    inner: &Ctx,
    outer: &Ctx,
    deg: u32,
    outer_relative: bool,
    rng: &mut G,
    mut coeff: F,
) -> NestedFamily<R::Elem>
where
    R: Ring,
    G: rand::Rng,
    F: FnMut(&mut G) -> R::Elem,
{
    let fr = FamilyRing::new(ring.clone(), inner.clone());
    let mut acc: NestedFamily<R::Elem> = PolyFamily::zero(outer, 0);
    for _ in 0..rng.gen_range(1..=2) {
        let f = crate::polyfun::random_family(ring, inner, deg, true, rng, &mut coeff);
        let g = crate::polyfun::random_family(&Integers, outer, deg, outer_relative, rng, |r| {
            BigInt::from(r.gen_range(-3i64..=3))
        });
        acc = acc.add(&fr, &nest(ring, &f, &g)).expect("same contexts");
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{Algebra, FinPresAlgebra};
    use crate::polyfun::tower;
    use crate::sset::{cube_pair, interval_pair};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn t0t1(ctx: &Ctx) -> PolyFamily<BigInt> {
        PolyFamily::from_cells(&Integers, ctx, 0, |c| (c.0 == 1).then(|| ZPoly::from_ints(1, &[(&[1], 1), (&[2], -1)]))).unwrap()
    }

    #[test]
    fn mu_on_points_is_the_product() {
        let pt = SimplicialPair::absolute(Arc::new(std_simplex(0)));
        let ctx = Ctx::of(&pt, 0);
        let b = Algebra::matrix(2);
        let x = b.generator(1);
        let f = PolyFamily::constant(&b, &ctx, 0, x.clone());
        let g = PolyFamily::constant(&Integers, &ctx, 0, BigInt::from(3));
        let m = mu_tensor(&b, &[(f, g)]).unwrap();
        assert_eq!(m.ctx.set().counts(), vec![1]);
        assert_eq!(m.component((0, 0)).terms().next().unwrap().1, &b.scale(&BigInt::from(3), &x));
    }

    #[test]
    fn mu_of_bumps_matches_substitution() {
        let ctx = Ctx::of(&interval_pair(), 0);
        let f = t0t1(&ctx);
        let m = mu_tensor(&Integers, &[(f.clone(), f)]).unwrap();
        m.validate(&Integers).unwrap();
        assert!(m.is_relative());
        assert_eq!(*m.ctx.pair(), cube_pair(2));
        // lower triangle (0,0)<(1,0)<(1,1): x = t1 + t2, y = t2
        let x = ZPoly::from_ints(2, &[(&[1, 0], 1), (&[0, 1], 1)]);
        let y = ZPoly::var(2, 1);
        let one = ZPoly::one(2);
        let bump = |v: &ZPoly| v.mul(&Integers, &one.sub(&Integers, v));
        let expect = bump(&x).mul(&Integers, &bump(&y));
        let lower = m.ctx.set().lookup("0,0;1,0;1,1").unwrap();
        assert_eq!(m.component(lower), &expect);
    }

    #[test]
    fn nested_agrees_with_tensor() {
        let b = Algebra::poly1();
        let inner = Ctx::of(&interval_pair(), 1);
        let outer = Ctx::of(&SimplicialPair::generated(Arc::new(std_simplex(1)), &["1"]).unwrap(), 0);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let f = crate::polyfun::random_family(&b, &inner, 2, true, &mut rng, |r| b.random_elem(r, 3, 3));
        let g = crate::polyfun::random_family(&Integers, &outer, 2, true, &mut rng, |_| BigInt::from(2));
        let lhs = mu_tensor(&b, &[(f.clone(), g.clone())]).unwrap();
        let rhs = mu_nested(&b, &inner, &nest(&b, &f, &g)).unwrap();
        assert_eq!(lhs, rhs);
        assert!(lhs.is_relative());
    }

    #[test]
    fn mu_is_associative() {
        let ip = tower(&interval_pair());
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let sample = |rng: &mut ChaCha8Rng, r| {
            crate::polyfun::random_family(&Integers, &ip.ctx(r), 2, true, rng, |r| BigInt::from(r.gen_range(-2i64..=2)))
        };
        let (f, g, h) = (sample(&mut rng, 0), sample(&mut rng, 1), sample(&mut rng, 0));
        let left = mu_tensor(&Integers, &[(mu_tensor(&Integers, &[(f.clone(), g.clone())]).unwrap(), h.clone())]).unwrap();
        let right = mu_tensor(&Integers, &[(f, mu_tensor(&Integers, &[(g, h)]).unwrap())]).unwrap();
        assert!(left.eq_by_labels(&right));
    }

    #[test]
    fn cylinders() {
        let b = Algebra::dual();
        for cyl in [Cylinder::simplex(0), Cylinder::simplex(1), Cylinder::simplex(3), Cylinder::prism(1, 1), Cylinder::prism(2, 1)] {
            for t in cyl.generators() {
                let f = t.map_coeffs(&b, |k| b.scale(k, &b.generator(0)));
                cyl.check(&b, &f).unwrap();
            }
            // v ∘ ι = id
            let x = b.generator(0);
            assert_eq!(cyl.v(&b, &cyl.iota(&b, x.clone())), x);
        }
        // ev_0 ∘ H kills t_1 on Δ^1
        let cyl = Cylinder::simplex(1);
        let t1 = hat(&cyl.ctx, 1);
        assert!(cyl.h(&Integers, &t1).unwrap().eval_last_param(&Integers, 0).is_zero());
    }

    #[test]
    fn witness_outside_the_image() {
        for d in 1..=3 {
            let w = mu_image_witness(d).unwrap();
            assert_eq!(w.unknowns.len(), ((d + 1) * (d + 1)) as usize);
            assert!(w.verify());
            let diag = w.family.ctx.set().lookup("0,0;1,1").unwrap();
            assert!(w.family.component(diag).is_zero());
        }
    }

    #[test]
    fn htilde_endpoint_square() {
        let b = Algebra::poly1();
        let inner = Ctx::of(&interval_pair(), 1);
        let outer = Ctx::of(&SimplicialPair::absolute(Arc::new(std_simplex(1))), 1);
        let nested_ring = FamilyRing::new(FamilyRing::new(b, inner.clone()), outer.clone());
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let x = random_nested(&b, &inner, &outer, 2, false, &mut rng, |r| b.random_elem(r, 3, 3));
        let h = AlgHom::new(FinPresAlgebra::free(&["a"]), vec![x]).unwrap();
        let (ht, report) = htilde(&b, &inner, &h, &nested_ring).unwrap();
        assert!(report.passed(), "{report:?}");
        assert_eq!(ht.images[0].ctx.r(), 2);
        assert!(ht.images[0].is_relative());
    }
}
