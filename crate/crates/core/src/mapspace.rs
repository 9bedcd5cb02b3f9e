//! Simplices of `Ω^n Ex^r Hom(A, B^Δ)` as homomorphisms into
//! `B^{(I^n×Δ^q, ∂I^n×Δ^q)}_r`, the stage maps `ζ^n`, the comparison square
//! against `Λ`, and a certificate-closed partition of vertices.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::coeff::{AlgHom, Algebra, BuiltinHom};
use crate::error::{Error, Result};
use crate::extensions::{classify_path, cube_times, hom_letters, LetterMap};
use crate::polyfun::{Ctx, FamilyRing, PolyFamily};
use crate::ring::Ring;
use crate::sset::{coordinate_map, coordinates, cube_pair, std_simplex, Coord, SimplicialMap, SimplicialPair};
use crate::tensor::{Letter, TensorAlgebra, TensorElem};

/// `(Δ^q, ∅)`.
pub fn simplex_pair(q: usize) -> SimplicialPair {
    SimplicialPair::absolute(Arc::new(std_simplex(q)))
}

/// `I^n × Δ^q` relative to `∂I^n × Δ^q`.
pub fn simplex_space(n: usize, q: usize) -> SimplicialPair {
    cube_times(n, Some(&simplex_pair(q)))
}

/// The context of `q`-simplices of `Ω^n` at stage `r`.
pub fn simplex_ctx(n: usize, q: usize, r: usize) -> Ctx {
    Ctx::of(&simplex_space(n, q), r)
}

/// The data of a simplex: a homomorphism given on generators, or (for
/// tensor sources) a module map on the letters of `X_level`.
#[derive(Clone)]
pub enum SimplexBody<R: Ring> {
    Hom {
        hom: AlgHom<FamilyRing<R>>,
        /// Set when the source is the presentation of a builtin algebra.
        builtin: Option<Algebra>,
    },
    Letters {
        source: TensorAlgebra,
        level: usize,
        f: LetterMap<PolyFamily<R::Elem>>,
    },
}

/// A `q`-simplex of `Ω^n Ex^r Hom(A, B^Δ)`.
#[derive(Clone)]
pub struct MapSimplex<R: Ring> {
    pub ring: R,
    pub n: usize,
    pub q: usize,
    pub r: usize,
    pub body: SimplexBody<R>,
}

impl<R: Ring + 'static> MapSimplex<R> {
    /// A simplex given by generator images, validated.
    pub fn from_hom(ring: &R, n: usize, q: usize, r: usize, hom: AlgHom<FamilyRing<R>>, builtin: Option<Algebra>) -> Result<Self> {
        let x = MapSimplex {
            ring: ring.clone(),
            n,
            q,
            r,
            body: SimplexBody::Hom { hom, builtin },
        };
        x.validate()?;
        Ok(x)
    }

    /// The zero simplex out of a builtin algebra.
    pub fn zero(ring: &R, n: usize, q: usize, r: usize, source: Algebra) -> Self {
        let ctx = simplex_ctx(n, q, r);
        let images = vec![PolyFamily::zero(&ctx, 0); source.presentation().gens.len()];
        MapSimplex {
            ring: ring.clone(),
            n,
            q,
            r,
            body: SimplexBody::Hom {
                hom: AlgHom::new(source.presentation(), images).expect("generator count"),
                builtin: Some(source),
            },
        }
    }

    pub fn ctx(&self) -> Ctx {
        simplex_ctx(self.n, self.q, self.r)
    }

    pub fn family_ring(&self) -> FamilyRing<R> {
        FamilyRing::new(self.ring.clone(), self.ctx())
    }

    /// Context, face compatibility, relations and the kernel condition of
    /// every generator image. Letter bodies are checked per evaluation.
    pub fn validate(&self) -> Result<()> {
        if let SimplexBody::Hom { hom, .. } = &self.body {
            let ctx = self.ctx();
            for x in &hom.images {
                if x.ctx != ctx {
                    return Err(Error::ContextMismatch(format!("image on {:?}, expected {:?}", x.ctx, ctx)));
                }
                x.validate(&self.ring)?;
                x.kernel_test()?;
            }
            hom.check(&self.family_ring())?;
        }
        Ok(())
    }

    pub fn hom(&self) -> Option<&AlgHom<FamilyRing<R>>> {
        match &self.body {
            SimplexBody::Hom { hom, .. } => Some(hom),
            SimplexBody::Letters { .. } => None,
        }
    }

    /// The tensor source and level of the letters this simplex is defined on.
    pub fn letter_source(&self) -> Result<(TensorAlgebra, usize)> {
        match &self.body {
            SimplexBody::Hom { builtin: Some(a), .. } => Ok((TensorAlgebra::new(*a), 0)),
            SimplexBody::Hom { builtin: None, .. } => Err(Error::InvalidMap("the source is not a builtin algebra".into())),
            SimplexBody::Letters { source, level, .. } => Ok((source.clone(), *level)),
        }
    }

    /// The simplex as a module map on letters.
    pub fn letter_map(&self) -> Result<LetterMap<PolyFamily<R::Elem>>> {
        match &self.body {
            SimplexBody::Hom { builtin: Some(a), hom } => Ok(hom_letters(
                &self.family_ring(),
                &BuiltinHom {
                    source: *a,
                    hom: hom.clone(),
                },
            )),
            SimplexBody::Hom { builtin: None, .. } => Err(Error::InvalidMap("the source is not a builtin algebra".into())),
            SimplexBody::Letters { f, .. } => {
                let (f, ctx) = (f.clone(), self.ctx());
                Ok(Arc::new(move |l: &Letter| {
                    let v = f(l)?;
                    if v.ctx == ctx {
                        Ok(v)
                    } else {
                        v.restrict_to(&ctx)
                    }
                }))
            }
        }
    }

    /// The linear extension of the letter map to `x`.
    pub fn eval(&self, x: &TensorElem) -> Result<PolyFamily<R::Elem>> {
        let f = self.letter_map()?;
        let fr = self.family_ring();
        let mut acc = fr.zero();
        for (l, c) in x.terms() {
            acc = fr.add(&acc, &fr.scale(c, &f(l)?));
        }
        Ok(acc)
    }

    /// Pullback along a map `pair → I^n × Δ^q` of the current stage.
    fn pull(&self, q: usize, r: usize, f: Arc<dyn Fn(&PolyFamily<R::Elem>) -> Result<PolyFamily<R::Elem>> + Send + Sync>) -> Result<Self> {
        let body = match &self.body {
            SimplexBody::Hom { hom, builtin } => SimplexBody::Hom {
                hom: hom.try_map(|x| f(x))?,
                builtin: *builtin,
            },
            SimplexBody::Letters { .. } => {
                let (source, level) = self.letter_source()?;
                let g = self.letter_map()?;
                SimplexBody::Letters {
                    source,
                    level,
                    f: Arc::new(move |l: &Letter| f(&g(l)?)),
                }
            }
        };
        Ok(MapSimplex {
            ring: self.ring.clone(),
            n: self.n,
            q,
            r,
            body,
        })
    }

    /// Pullback along `1 × θ` for an ordinal map `θ: [q'] → [q]`.
    pub fn ordinal(&self, q2: usize, theta: &[usize]) -> Result<Self> {
        let src = simplex_space(self.n, q2);
        let tgt = simplex_space(self.n, self.q);
        let theta = theta.to_vec();
        let map = SimplicialMap::from_vertex_labels(src.set.clone(), tgt.set.clone(), |l| {
            let mut cs: Vec<String> = coordinates(l).iter().map(|c| c.to_string()).collect();
            let last = cs.pop().and_then(|j| j.parse::<usize>().ok()).unwrap_or(usize::MAX);
            cs.push(theta.get(last).map_or("?".into(), |v| v.to_string()));
            cs.join(",")
        })?;
        let ring = self.ring.clone();
        self.pull(q2, self.r, Arc::new(move |x| x.pullback_base(&ring, &map, &src)))
    }

    /// The face `d_i`, pullback along `1 × d^i`.
    pub fn face(&self, i: usize) -> Result<Self> {
        if self.q == 0 || i > self.q {
            return Err(Error::IndexOutOfRange {
                index: i,
                what: format!("faces of a {}-simplex", self.q),
            });
        }
        let theta: Vec<usize> = (0..self.q).map(|j| if j < i { j } else { j + 1 }).collect();
        self.ordinal(self.q - 1, &theta)
    }

    /// The degeneracy `s_i`, pullback along `1 × s^i`.
    pub fn degeneracy(&self, i: usize) -> Result<Self> {
        if i > self.q {
            return Err(Error::IndexOutOfRange {
                index: i,
                what: format!("degeneracies of a {}-simplex", self.q),
            });
        }
        let theta: Vec<usize> = (0..=self.q + 1).map(|j| if j <= i { j } else { j - 1 }).collect();
        self.ordinal(self.q + 1, &theta)
    }

    /// The image at stage `r + 1` under the last vertex map.
    pub fn transition(&self) -> Result<Self> {
        let ring = self.ring.clone();
        self.pull(self.q, self.r + 1, Arc::new(move |x| Ok(x.transition(&ring))))
    }

    pub fn at_level(&self, r: usize) -> Result<Self> {
        if r < self.r {
            return Err(Error::IncomparableLevels(format!("stage {} cannot go down to {r}", self.r)));
        }
        (self.r..r).try_fold(self.clone(), |x, _| x.transition())
    }

    /// `ζ^n` of this simplex: a simplex of `Ω^{n+1}` out of the next tensor
    /// level, as a module map on its letters.
    pub fn zeta_stage(&self) -> Result<Self> {
        let (source, level) = self.letter_source()?;
        let c = classify_path(&self.ring, self.n, Some(simplex_pair(self.q)), self.r, source.clone(), level, self.letter_map()?)?;
        Ok(MapSimplex {
            ring: self.ring.clone(),
            n: self.n + 1,
            q: self.q,
            r: self.r,
            body: SimplexBody::Letters {
                source,
                level: level + 1,
                f: c.as_letter_map(),
            },
        })
    }

    /// Generator images (for homomorphism bodies) or values on `letters`.
    pub fn values(&self, letters: &[Letter]) -> Result<Vec<PolyFamily<R::Elem>>> {
        match &self.body {
            SimplexBody::Hom { hom, .. } => Ok(hom.images.clone()),
            SimplexBody::Letters { .. } => {
                let f = self.letter_map()?;
                letters.iter().map(|l| f(l)).collect()
            }
        }
    }
}

/// `f: A → B^{S_n}_r` as a vertex of `Ω^n Ex^r Hom(A, B^Δ)`.
pub fn encode_vertex<R: Ring + 'static>(ring: &R, n: usize, r: usize, f: &AlgHom<FamilyRing<R>>, builtin: Option<Algebra>) -> Result<MapSimplex<R>> {
    let (src, tgt) = (simplex_space(n, 0), cube_times(n, None));
    let map = coordinate_map(&src.set, &tgt.set, &(0..n.max(1)).map(Coord::From).collect::<Vec<_>>())?;
    let ctx = Ctx::of(&tgt, r);
    let hom = f.try_map(|x| {
        if x.ctx != ctx {
            return Err(Error::ContextMismatch(format!("expected a map into B^(S_{n})_{r}")));
        }
        x.kernel_test()?;
        x.pullback_base(ring, &map, &src)
    })?;
    MapSimplex::from_hom(ring, n, 0, r, hom, builtin)
}

/// The inverse of [`encode_vertex`].
pub fn decode_vertex<R: Ring + 'static>(x: &MapSimplex<R>) -> Result<AlgHom<FamilyRing<R>>> {
    if x.q != 0 {
        return Err(Error::DimensionMismatch(format!("a {}-simplex is not a vertex", x.q)));
    }
    let hom = x.hom().ok_or_else(|| Error::InvalidMap("vertex is not given by a homomorphism".into()))?;
    let (src, tgt) = (cube_times(x.n, None), simplex_space(x.n, 0));
    let map = SimplicialMap::from_vertex_labels(src.set.clone(), tgt.set.clone(), |l| if x.n == 0 { l.to_string() } else { format!("{l},0") })?;
    hom.try_map(|f| f.pullback_base(&x.ring, &map, &src))
}

/// The outcome of comparing `ζ^v ∘ (c_{v,m})^*` with `(c_{v+1,m})^* ∘ Λ^{m+v}`.
#[derive(Clone, Debug, Serialize)]
pub struct SquareReport {
    pub v: usize,
    pub m: usize,
    pub samples: usize,
    pub agreed: usize,
    pub witness: Option<SquareWitness>,
}

impl SquareReport {
    pub fn passed(&self) -> bool {
        self.witness.is_none() && self.agreed == self.samples
    }
}

/// A sample on which the two composites differ.
#[derive(Clone, Debug, Serialize)]
pub struct SquareWitness {
    pub sample: String,
    pub zeta_side: String,
    pub lambda_side: String,
}

/// The map `I^a × K → I^b × K'` rearranging coordinates, or the identity of
/// `Δ^0` when there are none.
fn shuffle(src: &SimplicialPair, tgt: &SimplicialPair, perm: Vec<usize>) -> Result<SimplicialMap> {
    let perm: Vec<Coord> = if perm.is_empty() { vec![Coord::From(0)] } else { perm.into_iter().map(Coord::From).collect() };
    coordinate_map(&src.set, &tgt.set, &perm)
}

/// Both composites of the comparison square on `samples ⊂ J^{v+1}A`, for a
/// module map `f` on the letters of `X_v` into `B^{S_{m+v}}_r` (coordinates
/// `I^m × I^v`).
pub fn comparison_square<R: Ring + 'static>(
    ring: &R,
    v: usize,
    m: usize,
    r: usize,
    source: &TensorAlgebra,
    f: LetterMap<PolyFamily<R::Elem>>,
    samples: &[TensorElem],
) -> Result<SquareReport> {
    let trailing = (m > 0).then(|| cube_pair(m));
    let bottom = cube_pair(m + v);
    let bottom_ctx = Ctx::of(&bottom, r);
    // (c_{v,m})^*: I^v × I^m → I^m × I^v
    let top = cube_times(v, trailing.as_ref());
    let c1 = shuffle(&top, &bottom, (0..m).map(|k| v + k).chain(0..v).collect())?;
    let f_top: LetterMap<PolyFamily<R::Elem>> = {
        let (ring, f, top) = (ring.clone(), f.clone(), top.clone());
        Arc::new(move |l: &Letter| {
            let x = f(l)?;
            let x = if x.ctx == bottom_ctx { x } else { x.restrict_to(&bottom_ctx)? };
            x.pullback_base(&ring, &c1, &top)
        })
    };
    let zeta = classify_path(ring, v, trailing.clone(), r, source.clone(), v, f_top)?;
    let lambda = classify_path(ring, m + v, None, r, source.clone(), v, f)?;
    // (c_{v+1,m})^*: I^{v+1} × I^m → I^m × I^{v+1}
    let top1 = cube_times(v + 1, trailing.as_ref());
    let bottom1 = cube_pair(m + v + 1);
    let c2 = shuffle(&top1, &bottom1, (0..m).map(|k| v + 1 + k).chain(0..=v).collect())?;
    let mut report = SquareReport {
        v,
        m,
        samples: samples.len(),
        agreed: 0,
        witness: None,
    };
    for x in samples {
        let lhs = zeta.xi(x)?;
        let rhs = lambda.xi(x)?.pullback_base(ring, &c2, &top1)?;
        if lhs.eq_by_labels(&rhs) {
            report.agreed += 1;
        } else {
            report.witness = Some(SquareWitness {
                sample: source.render(x),
                zeta_side: format!("{lhs:?}"),
                lambda_side: format!("{rhs:?}"),
            });
            break;
        }
    }
    Ok(report)
}

/// A vertex of a stage diagram.
#[derive(Clone)]
pub struct StageVertex<R: Ring> {
    pub id: String,
    pub simplex: MapSimplex<R>,
}

/// A declared edge: a 1-simplex whose faces `d_1` and `d_0` should be the
/// vertices `from` and `to` after stage alignment.
#[derive(Clone)]
pub struct StageEdge<R: Ring> {
    pub from: String,
    pub to: String,
    pub simplex: MapSimplex<R>,
}

/// Vertices and edges of `Ω^n Ex^∞ Hom(A, B^Δ)` at mixed stages.
#[derive(Clone)]
pub struct StageDiagram<R: Ring> {
    pub n: usize,
    pub vertices: Vec<StageVertex<R>>,
    pub edges: Vec<StageEdge<R>>,
}

/// Classes of vertices connected by verified edges or equal after
/// alignment. A lower bound on connectivity only.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Pi0Report {
    pub classes: Vec<Vec<String>>,
    pub rejected: Vec<RejectedEdge>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RejectedEdge {
    pub edge: usize,
    pub reason: String,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, i: usize) -> usize {
        let p = self.0[i];
        if p == i {
            return i;
        }
        let root = self.find(p);
        self.0[i] = root;
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.0[a.max(b)] = a.min(b);
        }
    }
}

fn aligned_eq<R: Ring + 'static>(x: &MapSimplex<R>, y: &MapSimplex<R>) -> Result<bool> {
    let r = x.r.max(y.r);
    let (x, y) = (x.at_level(r)?, y.at_level(r)?);
    match (x.hom(), y.hom()) {
        (Some(a), Some(b)) => Ok(a.source == b.source && a.images == b.images),
        _ => Err(Error::InvalidMap("stage diagrams hold homomorphisms".into())),
    }
}

impl<R: Ring + 'static> StageDiagram<R> {
    pub fn new(n: usize) -> Self {
        StageDiagram {
            n,
            vertices: vec![],
            edges: vec![],
        }
    }

    pub fn add_vertex(&mut self, id: &str, simplex: MapSimplex<R>) -> Result<()> {
        if simplex.q != 0 || simplex.n != self.n {
            return Err(Error::DimensionMismatch(format!("vertex `{id}` is not a vertex of Ω^{}", self.n)));
        }
        if self.vertices.iter().any(|v| v.id == id) {
            return Err(Error::Schema {
                path: format!("/vertices/{id}"),
                message: "duplicate id".into(),
            });
        }
        simplex.validate()?;
        self.vertices.push(StageVertex { id: id.into(), simplex });
        Ok(())
    }

    pub fn add_edge(&mut self, from: &str, to: &str, simplex: MapSimplex<R>) -> Result<()> {
        if simplex.q != 1 || simplex.n != self.n {
            return Err(Error::DimensionMismatch(format!("edge {from} to {to} is not a 1-simplex of Ω^{}", self.n)));
        }
        for id in [from, to] {
            if !self.vertices.iter().any(|v| v.id == id) {
                return Err(Error::Schema {
                    path: "/edges".into(),
                    message: format!("unknown vertex `{id}`"),
                });
            }
        }
        simplex.validate()?;
        self.edges.push(StageEdge {
            from: from.into(),
            to: to.into(),
            simplex,
        });
        Ok(())
    }

    fn index(&self, id: &str) -> usize {
        self.vertices.iter().position(|v| v.id == id).expect("checked on insertion")
    }

    /// Union-find over verified edges and aligned duplicates. Classes are
    /// listed in order of their first vertex.
    pub fn pi0(&self) -> Result<Pi0Report> {
        let k = self.vertices.len();
        let mut uf = UnionFind((0..k).collect());
        for i in 0..k {
            for j in i + 1..k {
                if aligned_eq(&self.vertices[i].simplex, &self.vertices[j].simplex)? {
                    uf.union(i, j);
                }
            }
        }
        let mut rejected = vec![];
        for (e, edge) in self.edges.iter().enumerate() {
            let (a, b) = (self.index(&edge.from), self.index(&edge.to));
            let ends = [(1, a), (0, b)];
            let mut ok = true;
            for (face, vi) in ends {
                if !aligned_eq(&edge.simplex.face(face)?, &self.vertices[vi].simplex)? {
                    rejected.push(RejectedEdge {
                        edge: e,
                        reason: format!("face d_{face} is not `{}`", self.vertices[vi].id),
                    });
                    ok = false;
                    break;
                }
            }
            if ok {
                uf.union(a, b);
            }
        }
        let mut classes: BTreeMap<usize, Vec<String>> = BTreeMap::new();
        for i in 0..k {
            let root = uf.find(i);
            classes.entry(root).or_default().push(self.vertices[i].id.clone());
        }
        Ok(Pi0Report {
            classes: classes.into_values().collect(),
            rejected,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mult::{htilde, nested_end, random_nested};
    use crate::polyfun::{hat, random_family};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn b() -> Algebra {
        Algebra::poly1()
    }

    fn random_simplex(n: usize, q: usize, r: usize, rng: &mut ChaCha8Rng) -> MapSimplex<Algebra> {
        let b = b();
        let ctx = simplex_ctx(n, q, r);
        let g = random_family(&b, &ctx, 2, true, rng, |r| b.random_elem(r, 3, 2));
        MapSimplex::from_hom(&b, n, q, r, AlgHom::new(Algebra::free(1).presentation(), vec![g]).unwrap(), Some(Algebra::free(1))).unwrap()
    }

    fn same(x: &MapSimplex<Algebra>, y: &MapSimplex<Algebra>) -> bool {
        x.hom().unwrap().images == y.hom().unwrap().images
    }

    #[test]
    fn simplicial_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for q in 0..=2 {
            let x = random_simplex(1, q, 0, &mut rng);
            for i in 0..=q {
                assert!(same(&x.degeneracy(i).unwrap().face(i).unwrap(), &x));
                assert!(same(&x.degeneracy(i).unwrap().face(i + 1).unwrap(), &x));
                for j in i + 1..=q {
                    if q >= 2 {
                        // d_i d_j = d_{j-1} d_i
                        let lhs = x.face(j).unwrap().face(i).unwrap();
                        let rhs = x.face(i).unwrap().face(j - 1).unwrap();
                        assert!(same(&lhs, &rhs));
                    }
                }
            }
        }
        let z = MapSimplex::zero(&b(), 1, 1, 0, Algebra::free(1));
        assert!(z.face(0).unwrap().hom().unwrap().images[0].is_zero());
        assert!(z.face(2).is_err());
    }

    #[test]
    fn vertices_round_trip() {
        let b = b();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for n in 0..=2 {
            let ctx = Ctx::of(&cube_times(n, None), 1);
            let g = random_family(&b, &ctx, 2, true, &mut rng, |r| b.random_elem(r, 3, 2));
            let f = AlgHom::new(Algebra::free(1).presentation(), vec![g]).unwrap();
            let x = encode_vertex(&b, n, 1, &f, None).unwrap();
            assert_eq!(decode_vertex(&x).unwrap().images, f.images);
        }
        // over a point the vertices are the homomorphisms into B
        let ctx = Ctx::of(&cube_times(0, None), 0);
        let one = AlgHom::new(b.presentation(), vec![PolyFamily::constant(&b, &ctx, 0, b.generator(0)), PolyFamily::constant(&b, &ctx, 0, b.generator(1))]).unwrap();
        let x = encode_vertex(&b, 0, 0, &one, Some(b)).unwrap();
        assert_eq!(x.hom().unwrap().images[1].vertex_value(0), b.generator(1));
    }

    #[test]
    fn htilde_edges_have_declared_faces() {
        let b = b();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for (r, s) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            let inner = Ctx::of(&cube_pair(1), r);
            let outer = Ctx::of(&simplex_pair(1), s);
            let inner_ring = FamilyRing::new(b, inner.clone());
            let nested_ring = FamilyRing::new(inner_ring.clone(), outer.clone());
            let x = random_nested(&b, &inner, &outer, 2, false, &mut rng, |r| b.random_elem(r, 3, 2));
            let h = AlgHom::new(Algebra::free(1).presentation(), vec![x.clone()]).unwrap();
            let (ht, _) = htilde(&b, &inner, &h, &nested_ring).unwrap();
            let ctx = simplex_ctx(1, 1, r + s);
            let edge = ht.try_map(|y| y.restrict_to(&ctx)).unwrap();
            let e = MapSimplex::from_hom(&b, 1, 1, r + s, edge, Some(Algebra::free(1))).unwrap();
            for i in 0..=1 {
                let d = decode_vertex(&e.face(i).unwrap()).unwrap();
                let end = nested_end(&inner_ring, &x, i).to_level(&b, r + s).unwrap();
                assert_eq!(d.images[0], end);
            }
        }
    }

    #[test]
    fn zeta_stage_lands_in_the_kernel() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let x = random_simplex(0, 1, 0, &mut rng);
        let z = x.zeta_stage().unwrap();
        let ta = TensorAlgebra::new(Algebra::free(1));
        for _ in 0..3 {
            let s = ta.random_j(1, &mut rng, 3, 2);
            z.eval(&s).unwrap().kernel_test().unwrap();
            // faces commute with ζ
            for i in 0..=1 {
                let lhs = z.face(i).unwrap().eval(&s).unwrap();
                let rhs = x.face(i).unwrap().zeta_stage().unwrap().eval(&s).unwrap();
                assert!(lhs.eq_by_labels(&rhs));
            }
            // so do transitions
            let lhs = z.transition().unwrap().eval(&s).unwrap();
            let rhs = x.transition().unwrap().zeta_stage().unwrap().eval(&s).unwrap();
            assert!(lhs.eq_by_labels(&rhs));
        }
        let zero = MapSimplex::zero(&b(), 0, 0, 0, Algebra::free(1)).zeta_stage().unwrap();
        assert!(zero.eval(&ta.random_j(1, &mut rng, 3, 2)).unwrap().is_zero());
        // a second stage
        let z2 = z.zeta_stage().unwrap();
        z2.eval(&ta.random_j(2, &mut rng, 2, 2)).unwrap().kernel_test().unwrap();
    }

    #[test]
    fn comparison_squares_commute() {
        let b = b();
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let ta = TensorAlgebra::new(Algebra::free(1));
        for (v, m) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            let ctx = Ctx::of(&cube_pair(m + v), 0);
            let f: LetterMap<PolyFamily<_>> = if v == 0 {
                let g = random_family(&b, &ctx, 2, true, &mut rng, |r| b.random_elem(r, 3, 2));
                hom_letters(&FamilyRing::new(b, ctx.clone()), &BuiltinHom::new(Algebra::free(1), vec![g], &FamilyRing::new(b, ctx.clone())).unwrap())
            } else {
                // Λ^{m+v-1} of a random map, as a module map on X_1
                let c0 = Ctx::of(&cube_pair(m + v - 1), 0);
                let g = random_family(&b, &c0, 1, true, &mut rng, |r| b.random_elem(r, 2, 2));
                let fr = FamilyRing::new(b, c0);
                let h = BuiltinHom::new(Algebra::free(1), vec![g], &fr).unwrap();
                classify_path(&b, m + v - 1, None, 0, ta.clone(), 0, hom_letters(&fr, &h)).unwrap().as_letter_map()
            };
            let samples: Vec<TensorElem> = (0..3).map(|_| ta.random_j(v + 1, &mut rng, 2, 2)).collect();
            let report = comparison_square(&b, v, m, 0, &ta, f, &samples).unwrap();
            assert!(report.passed(), "v={v} m={m}: {:?}", report.witness);
        }
    }

    #[test]
    fn pi0_merges_edges_and_aligned_duplicates() {
        let b = b();
        let x = b.generator(1);
        let free = Algebra::free(1);
        // c · (hat of the midpoint of I × {j}) on I × Δ^q at stage 1
        let bump = |q: usize, cs: &[i64]| {
            let ctx = simplex_ctx(1, q, 1);
            let fr = FamilyRing::new(b, ctx.clone());
            let g = cs.iter().enumerate().fold(fr.zero(), |acc, (j, c)| {
                let v = ctx.set().lookup(&format!("{{0,{j};1,{j}}}")).unwrap().1;
                let h = hat(&ctx, v).map_coeffs(&b, |k| b.scale(&(k * c), &x));
                fr.add(&acc, &h)
            });
            MapSimplex::from_hom(&b, 1, q, 1, AlgHom::new(free.presentation(), vec![g]).unwrap(), Some(free)).unwrap()
        };
        let e = bump(1, &[1, 2]);
        let mut d = StageDiagram::new(1);
        d.add_vertex("f", bump(0, &[1])).unwrap();
        d.add_vertex("g", bump(0, &[2])).unwrap();
        d.add_vertex("h", bump(0, &[3])).unwrap();
        assert_eq!(d.pi0().unwrap().classes.len(), 3);
        d.add_vertex("f2", bump(0, &[1]).transition().unwrap()).unwrap();
        assert_eq!(d.pi0().unwrap().classes, vec![vec!["f", "f2"], vec!["g"], vec!["h"]]);
        d.add_edge("f", "g", e.clone()).unwrap();
        d.add_edge("g", "h", e).unwrap();
        let p = d.pi0().unwrap();
        assert_eq!(p.classes, vec![vec!["f", "g", "f2"], vec!["h"]]);
        assert_eq!(p.rejected.len(), 1);
    }
}
