//! Finite nonsingular simplicial sets.
//!
//! A [`SimplicialSet`] stores its nondegenerate simplices by dimension,
//! each with a canonical string label, plus face tables. Degenerate
//! simplices never get stored: a possibly degenerate simplex is a
//! [`SimplexRef`], i.e. a nondegenerate base together with an
//! order-preserving surjection (Eilenberg–Zilber normal form).
//!
//! Every set built here (standard simplices, products, subdivisions,
//! cubes and subcomplexes) has simplices determined by their vertices. Labels
//! follow one convention: a simplex label is its vertex labels joined by
//! `;`, a product vertex is `a,b`, and a vertex of a subdivision is the label
//! of the underlying simplex wrapped in braces. Products therefore associate
//! on the nose at the level of labels, which is how `I^{m+n}` and
//! `I^m × I^n` are identified.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// A cell address: `(dimension, index within that dimension)`.
pub type Cell = (usize, usize);

/// A possibly degenerate simplex: `map^*(base)` where `map: [m] ↠ [dim]` is
/// an order-preserving surjection listed by its values.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SimplexRef {
    pub dim: usize,
    pub idx: usize,
    pub map: Vec<usize>,
}

impl SimplexRef {
    pub fn nondegenerate(dim: usize, idx: usize) -> Self {
        SimplexRef {
            dim,
            idx,
            map: (0..=dim).collect(),
        }
    }

    /// Dimension of the (possibly degenerate) simplex.
    pub fn sdim(&self) -> usize {
        self.map.len() - 1
    }

    pub fn base(&self) -> Cell {
        (self.dim, self.idx)
    }

    pub fn is_degenerate(&self) -> bool {
        self.map.len() != self.dim + 1
    }
}

/// The coface `δ^i: [d-1] → [d]` as a value list.
pub fn coface_values(d: usize, i: usize) -> Vec<usize> {
    (0..=d).filter(|&j| j != i).collect()
}

/// The codegeneracy `σ^i: [d+1] → [d]` as a value list.
pub fn codegeneracy_values(d: usize, i: usize) -> Vec<usize> {
    (0..=d + 1).map(|j| if j <= i { j } else { j - 1 }).collect()
}

#[derive(Clone)]
pub struct SimplicialSet {
    labels: Vec<Vec<String>>,
    faces: Vec<Vec<Vec<usize>>>,
    verts: Vec<Vec<Vec<usize>>>,
    index: HashMap<String, Cell>,
    by_vertices: Option<Vec<HashMap<Vec<usize>, usize>>>,
}

impl fmt::Debug for SimplicialSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SimplicialSet{:?}", self.counts())
    }
}

impl PartialEq for SimplicialSet {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.faces == other.faces
    }
}

impl Eq for SimplicialSet {}

impl SimplicialSet {
    /// Builds and validates a simplicial set from labels and face tables.
    /// `faces[d][k][i]` is the index of `d_i` of cell `k` in dimension `d-1`;
    /// `faces[0]` holds empty lists.
    pub fn new(labels: Vec<Vec<String>>, faces: Vec<Vec<Vec<usize>>>) -> Result<Self> {
        let bad = |m: String| Error::InvalidSimplicialSet(m);
        let mut labels = labels;
        let mut faces = faces;
        while labels.last().is_some_and(|l| l.is_empty()) && labels.len() > 1 {
            labels.pop();
            faces.pop();
        }
        if labels.len() != faces.len() {
            return Err(bad("labels and faces disagree on the dimension".into()));
        }
        let mut index = HashMap::new();
        for (d, ls) in labels.iter().enumerate() {
            if faces[d].len() != ls.len() {
                return Err(bad(format!("face table of dimension {d} has wrong length")));
            }
            for (k, l) in ls.iter().enumerate() {
                if index.insert(l.clone(), (d, k)).is_some() {
                    return Err(bad(format!("duplicate label `{l}`")));
                }
                let fs = &faces[d][k];
                let expect = if d == 0 { 0 } else { d + 1 };
                if fs.len() != expect {
                    return Err(bad(format!("`{l}` has {} faces, expected {expect}", fs.len())));
                }
                if d > 0 && fs.iter().any(|&f| f >= labels[d - 1].len()) {
                    return Err(bad(format!("face of `{l}` out of range")));
                }
            }
        }
        // simplicial identities d_i d_j = d_{j-1} d_i for i < j
        for d in 2..labels.len() {
            for (k, fs) in faces[d].iter().enumerate() {
                for j in 0..=d {
                    for i in 0..j {
                        let lhs = faces[d - 1][fs[j]][i];
                        let rhs = faces[d - 1][fs[i]][j - 1];
                        if lhs != rhs {
                            return Err(bad(format!(
                                "simplicial identity d_{i} d_{j} fails at `{}`",
                                labels[d][k]
                            )));
                        }
                    }
                }
            }
        }
        let mut verts: Vec<Vec<Vec<usize>>> = Vec::with_capacity(labels.len());
        for d in 0..labels.len() {
            let vd = (0..labels[d].len())
                .map(|k| {
                    if d == 0 {
                        vec![k]
                    } else {
                        let mut v = verts[d - 1][faces[d][k][d]].clone();
                        v.push(*verts[d - 1][faces[d][k][0]].last().unwrap());
                        v
                    }
                })
                .collect();
            verts.push(vd);
        }
        let mut set = SimplicialSet {
            labels,
            faces,
            verts,
            index,
            by_vertices: None,
        };
        set.check_nonsingular()?;
        set.by_vertices = set.vertex_index();
        Ok(set)
    }

    fn check_nonsingular(&self) -> Result<()> {
        for d in 1..self.labels.len() {
            for k in 0..self.labels[d].len() {
                let mut seen = HashMap::new();
                for subset in all_subsets(d) {
                    let f = self.face_of((d, k), &subset);
                    if let Some(prev) = seen.insert(f, subset.clone()) {
                        return Err(Error::InvalidSimplicialSet(format!(
                            "`{}` is singular: faces {prev:?} and {subset:?} coincide",
                            self.labels[d][k]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    fn vertex_index(&self) -> Option<Vec<HashMap<Vec<usize>, usize>>> {
        let mut out = Vec::with_capacity(self.verts.len());
        for vd in &self.verts {
            let mut m = HashMap::with_capacity(vd.len());
            for (k, v) in vd.iter().enumerate() {
                if m.insert(v.clone(), k).is_some() {
                    return None;
                }
            }
            out.push(m);
        }
        Some(out)
    }

    /// Builds a vertex-determined set from vertex labels and the vertex lists
    /// of all nondegenerate simplices (which must be closed under faces).
    /// Simplex labels are the vertex labels joined by `;`.
    pub fn from_vertex_lists(vertex_labels: Vec<String>, simplices: Vec<Vec<Vec<usize>>>) -> Result<Self> {
        let mut lookup: Vec<HashMap<Vec<usize>, usize>> = Vec::new();
        let mut labels = Vec::new();
        let mut faces = Vec::new();
        for (d, cells) in simplices.iter().enumerate() {
            let mut m = HashMap::new();
            let mut ls = Vec::new();
            let mut fs = Vec::new();
            for (k, vs) in cells.iter().enumerate() {
                if vs.len() != d + 1 {
                    return Err(Error::InvalidSimplicialSet(format!("simplex {vs:?} listed in dimension {d}")));
                }
                m.insert(vs.clone(), k);
                ls.push(
                    vs.iter()
                        .map(|&v| vertex_labels[v].as_str())
                        .collect::<Vec<_>>()
                        .join(";"),
                );
                if d == 0 {
                    fs.push(vec![]);
                } else {
                    let mut row = Vec::with_capacity(d + 1);
                    for i in 0..=d {
                        let mut f = vs.clone();
                        f.remove(i);
                        row.push(*lookup[d - 1].get(&f).ok_or_else(|| {
                            Error::InvalidSimplicialSet(format!("face {f:?} of {vs:?} missing"))
                        })?);
                    }
                    fs.push(row);
                }
            }
            lookup.push(m);
            labels.push(ls);
            faces.push(fs);
        }
        if labels.is_empty() {
            labels.push(vec![]);
            faces.push(vec![]);
        }
        SimplicialSet::new(labels, faces)
    }

    pub fn empty() -> Self {
        SimplicialSet::new(vec![vec![]], vec![vec![]]).unwrap()
    }

    pub fn dim(&self) -> usize {
        self.labels.len() - 1
    }

    pub fn count(&self, d: usize) -> usize {
        self.labels.get(d).map_or(0, Vec::len)
    }

    pub fn counts(&self) -> Vec<usize> {
        self.labels.iter().map(Vec::len).collect()
    }

    pub fn num_cells(&self) -> usize {
        self.labels.iter().map(Vec::len).sum()
    }

    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        self.labels
            .iter()
            .enumerate()
            .flat_map(|(d, ls)| (0..ls.len()).map(move |k| (d, k)))
    }

    pub fn label(&self, c: Cell) -> &str {
        &self.labels[c.0][c.1]
    }

    pub fn labels(&self) -> &[Vec<String>] {
        &self.labels
    }

    pub fn face_table(&self) -> &[Vec<Vec<usize>>] {
        &self.faces
    }

    pub fn lookup(&self, label: &str) -> Option<Cell> {
        self.index.get(label).copied()
    }

    pub fn face(&self, c: Cell, i: usize) -> Cell {
        (c.0 - 1, self.faces[c.0][c.1][i])
    }

    /// Vertex indices of a nondegenerate simplex, in order.
    pub fn vertices(&self, c: Cell) -> &[usize] {
        &self.verts[c.0][c.1]
    }

    pub fn is_vertex_determined(&self) -> bool {
        self.by_vertices.is_some()
    }

    /// The simplex with the given (strictly listed) vertices, if any.
    pub fn cell_with_vertices(&self, vs: &[usize]) -> Option<Cell> {
        let d = vs.len().checked_sub(1)?;
        self.by_vertices
            .as_ref()?
            .get(d)?
            .get(vs)
            .map(|&k| (d, k))
    }

    /// The face spanned by the vertex positions `subset` (sorted) of `c`.
    pub fn face_of(&self, c: Cell, subset: &[usize]) -> Cell {
        let mut cur = c;
        for j in (0..=c.0).rev() {
            if !subset.contains(&j) {
                cur = self.face(cur, j);
            }
        }
        cur
    }

    /// All faces of `c` (including `c`) with the vertex positions they span.
    pub fn faces_with_positions(&self, c: Cell) -> Vec<(Cell, Vec<usize>)> {
        all_subsets(c.0)
            .into_iter()
            .map(|s| (self.face_of(c, &s), s))
            .collect()
    }

    /// Applies the simplicial operator `θ^*` (θ given by values) to `x`,
    /// returning the Eilenberg–Zilber normal form.
    pub fn apply_operator(&self, x: &SimplexRef, theta: &[usize]) -> SimplexRef {
        let composite: Vec<usize> = theta.iter().map(|&j| x.map[j]).collect();
        let image: Vec<usize> = composite
            .iter()
            .copied()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let (dim, idx) = self.face_of(x.base(), &image);
        let map = composite
            .iter()
            .map(|v| image.binary_search(v).unwrap())
            .collect();
        SimplexRef { dim, idx, map }
    }

    /// Normal form of a weakly increasing vertex sequence, if it spans a
    /// simplex.
    pub fn ref_from_vertices(&self, vs: &[usize]) -> Option<SimplexRef> {
        let mut distinct: Vec<usize> = Vec::with_capacity(vs.len());
        let mut map = Vec::with_capacity(vs.len());
        for &v in vs {
            if distinct.last() != Some(&v) {
                distinct.push(v);
            }
            map.push(distinct.len() - 1);
        }
        let (dim, idx) = self.cell_with_vertices(&distinct)?;
        Some(SimplexRef { dim, idx, map })
    }

    pub fn ref_label(&self, r: &SimplexRef) -> String {
        let l = self.label(r.base());
        if r.is_degenerate() {
            let w: Vec<String> = r.map.iter().map(|v| v.to_string()).collect();
            format!("{l}@{}", w.join("."))
        } else {
            l.to_string()
        }
    }

    /// Exhaustive validation (identities, nonsingularity) of a set that was
    /// built internally.
    pub fn check(&self) -> Result<()> {
        SimplicialSet::new(self.labels.clone(), self.faces.clone()).map(|_| ())
    }

    /// Whether the two sets have the same cells and faces up to reordering,
    /// matched by label.
    pub fn same_by_labels(&self, other: &SimplicialSet) -> bool {
        if self.counts() != other.counts() {
            return false;
        }
        self.cells().all(|c| match other.lookup(self.label(c)) {
            Some(o) if o.0 == c.0 => (0..if c.0 == 0 { 0 } else { c.0 + 1 })
                .all(|i| self.label(self.face(c, i)) == other.label(other.face(o, i))),
            _ => false,
        })
    }

    /// Euler characteristic.
    pub fn euler(&self) -> i64 {
        self.counts()
            .iter()
            .enumerate()
            .map(|(d, &n)| if d % 2 == 0 { n as i64 } else { -(n as i64) })
            .sum()
    }
}

/// Nonempty sorted subsets of `[d]`.
pub(crate) fn all_subsets(d: usize) -> Vec<Vec<usize>> {
    let n = d + 1;
    (1u64..(1 << n))
        .map(|mask| (0..n).filter(|i| mask >> i & 1 == 1).collect())
        .collect()
}

/// A simplicial map, given by the images of the nondegenerate simplices.
#[derive(Clone, Debug)]
pub struct SimplicialMap {
    source: Arc<SimplicialSet>,
    target: Arc<SimplicialSet>,
    images: Vec<Vec<SimplexRef>>,
}

impl SimplicialMap {
    /// Validates that the images have the right dimensions and commute with
    /// all face operators.
    pub fn new(source: Arc<SimplicialSet>, target: Arc<SimplicialSet>, images: Vec<Vec<SimplexRef>>) -> Result<Self> {
        let m = SimplicialMap {
            source,
            target,
            images,
        };
        m.validate()?;
        Ok(m)
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: String| Error::InvalidMap(m);
        if self.images.len() != self.source.labels.len() {
            return Err(bad("image table has wrong dimension".into()));
        }
        for c in self.source.cells() {
            let img = self.images[c.0]
                .get(c.1)
                .ok_or_else(|| bad("image table too short".into()))?;
            if img.sdim() != c.0 || img.dim >= self.target.labels.len() || img.idx >= self.target.count(img.dim) {
                return Err(bad(format!("bad image for `{}`", self.source.label(c))));
            }
            if c.0 > 0 {
                for i in 0..=c.0 {
                    let f = self.source.face(c, i);
                    let expect = self.target.apply_operator(img, &coface_values(c.0, i));
                    if self.images[f.0][f.1] != expect {
                        return Err(bad(format!(
                            "does not commute with d_{i} at `{}`",
                            self.source.label(c)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// The map determined by a vertex map; the target must be vertex
    /// determined.
    pub fn from_vertex_map(source: Arc<SimplicialSet>, target: Arc<SimplicialSet>, vmap: &[usize]) -> Result<Self> {
        let mut images = Vec::with_capacity(source.labels.len());
        for d in 0..source.labels.len() {
            let mut row = Vec::with_capacity(source.count(d));
            for k in 0..source.count(d) {
                let vs: Vec<usize> = source.vertices((d, k)).iter().map(|&v| vmap[v]).collect();
                let r = target.ref_from_vertices(&vs).ok_or_else(|| {
                    Error::InvalidMap(format!(
                        "image of `{}` is not a simplex",
                        source.label((d, k))
                    ))
                })?;
                row.push(r);
            }
            images.push(row);
        }
        SimplicialMap::new(source, target, images)
    }

    /// The map sending vertex labels through `f`.
    pub fn from_vertex_labels<F>(source: Arc<SimplicialSet>, target: Arc<SimplicialSet>, f: F) -> Result<Self>
    where
        F: Fn(&str) -> String,
    {
        let vmap = (0..source.count(0))
            .map(|v| {
                let l = f(source.label((0, v)));
                match target.lookup(&l) {
                    Some((0, w)) => Ok(w),
                    _ => Err(Error::InvalidMap(format!("no target vertex `{l}`"))),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        SimplicialMap::from_vertex_map(source, target, &vmap)
    }

    pub fn identity(x: Arc<SimplicialSet>) -> Self {
        let images = (0..x.labels.len())
            .map(|d| (0..x.count(d)).map(|k| SimplexRef::nondegenerate(d, k)).collect())
            .collect();
        SimplicialMap {
            source: x.clone(),
            target: x,
            images,
        }
    }

    pub fn source(&self) -> &Arc<SimplicialSet> {
        &self.source
    }

    pub fn target(&self) -> &Arc<SimplicialSet> {
        &self.target
    }

    pub fn image(&self, c: Cell) -> &SimplexRef {
        &self.images[c.0][c.1]
    }

    /// Image of a possibly degenerate simplex.
    pub fn apply(&self, x: &SimplexRef) -> SimplexRef {
        let img = self.image(x.base());
        self.target.apply_operator(img, &x.map)
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &SimplicialMap) -> Result<SimplicialMap> {
        if *first.target != *self.source {
            return Err(Error::DimensionMismatch("maps are not composable".into()));
        }
        let images = first
            .images
            .iter()
            .map(|row| row.iter().map(|r| self.apply(r)).collect())
            .collect();
        Ok(SimplicialMap {
            source: first.source.clone(),
            target: self.target.clone(),
            images,
        })
    }

    /// Vertex map (images of vertices).
    pub fn vertex_map(&self) -> Vec<usize> {
        self.images[0].iter().map(|r| r.idx).collect()
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.images
            .iter()
            .flatten()
            .all(|r| !r.is_degenerate() && seen.insert(r.base()))
    }

    /// Equality of maps, comparing sources, targets and images by label.
    pub fn same_by_labels(&self, other: &SimplicialMap) -> bool {
        if !self.source.same_by_labels(&other.source) || !self.target.same_by_labels(&other.target) {
            return false;
        }
        self.source.cells().all(|c| {
            let o = other.source.lookup(self.source.label(c)).unwrap();
            let a = self.image(c);
            let b = other.image(o);
            a.map == b.map && self.target.label(a.base()) == other.target.label(b.base())
        })
    }
}

impl PartialEq for SimplicialMap {
    fn eq(&self, other: &Self) -> bool {
        *self.source == *other.source && *self.target == *other.target && self.images == other.images
    }
}

/// The standard simplex `Δ^n`: cells are the nonempty subsets of `[n]`.
pub fn std_simplex(n: usize) -> SimplicialSet {
    let labels: Vec<String> = (0..=n).map(|v| v.to_string()).collect();
    let mut simplices: Vec<Vec<Vec<usize>>> = vec![vec![]; n + 1];
    for s in all_subsets(n) {
        simplices[s.len() - 1].push(s);
    }
    for cells in &mut simplices {
        cells.sort();
    }
    SimplicialSet::from_vertex_lists(labels, simplices).expect("standard simplex")
}

/// Order-preserving map `[m] → [n]` as a map `Δ^m → Δ^n`.
pub fn ordinal_map(m: usize, n: usize, values: &[usize]) -> Result<SimplicialMap> {
    if values.len() != m + 1 || values.windows(2).any(|w| w[0] > w[1]) || values.iter().any(|&v| v > n) {
        return Err(Error::DimensionMismatch(format!(
            "{values:?} is not an order-preserving map [{m}] -> [{n}]"
        )));
    }
    SimplicialMap::from_vertex_map(Arc::new(std_simplex(m)), Arc::new(std_simplex(n)), values)
}

/// The coface `d^i: Δ^{n-1} → Δ^n`.
pub fn coface(n: usize, i: usize) -> Result<SimplicialMap> {
    if n == 0 || i > n {
        return Err(Error::IndexOutOfRange {
            index: i,
            what: format!("cofaces into Δ^{n}"),
        });
    }
    ordinal_map(n - 1, n, &coface_values(n, i))
}

/// The codegeneracy `s^i: Δ^{n+1} → Δ^n`.
pub fn codegeneracy(n: usize, i: usize) -> Result<SimplicialMap> {
    if i > n {
        return Err(Error::IndexOutOfRange {
            index: i,
            what: format!("codegeneracies onto Δ^{n}"),
        });
    }
    ordinal_map(n + 1, n, &codegeneracy_values(n, i))
}

/// A product `X × Y` with its projections.
#[derive(Clone, Debug)]
pub struct Product {
    pub set: Arc<SimplicialSet>,
    pub pr1: SimplicialMap,
    pub pr2: SimplicialMap,
}

/// Surjections `[m] ↠ [a]` encoded by their jump sets in `{1..m}`.
fn surjections(m: usize, a: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, m: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for j in start..=m {
            if m - j + 1 < left {
                break;
            }
            cur.push(j);
            rec(j + 1, m, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(1, m, a, &mut Vec::new(), &mut out);
    out
}

fn jumps_to_map(m: usize, jumps: &[usize]) -> Vec<usize> {
    (0..=m).map(|i| jumps.iter().filter(|&&j| j <= i).count()).collect()
}

/// The product `X × Y`; nondegenerate simplices are enumerated by shuffles
/// of degeneracy words.
pub fn product(x: &Arc<SimplicialSet>, y: &Arc<SimplicialSet>) -> Product {
    let vertex_labels = x.is_vertex_determined() && y.is_vertex_determined();
    let max = x.dim() + y.dim();
    let mut lookup: Vec<HashMap<(SimplexRef, SimplexRef), usize>> = Vec::new();
    let mut pairs: Vec<Vec<(SimplexRef, SimplexRef)>> = Vec::new();
    if x.num_cells() > 0 && y.num_cells() > 0 {
        for m in 0..=max {
            let mut row = Vec::new();
            for a in 0..=x.dim().min(m) {
                for b in 0..=y.dim().min(m) {
                    if a + b < m {
                        continue;
                    }
                    let sx = surjections(m, a);
                    let sy = surjections(m, b);
                    for jx in &sx {
                        for jy in &sy {
                            let covered = (1..=m).all(|i| jx.contains(&i) || jy.contains(&i));
                            if !covered {
                                continue;
                            }
                            let mx = jumps_to_map(m, jx);
                            let my = jumps_to_map(m, jy);
                            for kx in 0..x.count(a) {
                                for ky in 0..y.count(b) {
                                    row.push((
                                        SimplexRef { dim: a, idx: kx, map: mx.clone() },
                                        SimplexRef { dim: b, idx: ky, map: my.clone() },
                                    ));
                                }
                            }
                        }
                    }
                }
            }
            if row.is_empty() {
                break;
            }
            row.sort();
            lookup.push(row.iter().cloned().enumerate().map(|(k, p)| (p, k)).collect());
            pairs.push(row);
        }
    }
    let vlabel = |rx: &SimplexRef, ry: &SimplexRef| format!("{},{}", x.label(rx.base()), y.label(ry.base()));
    let mut labels = Vec::with_capacity(pairs.len());
    let mut faces = Vec::with_capacity(pairs.len());
    for (m, row) in pairs.iter().enumerate() {
        let mut ls = Vec::with_capacity(row.len());
        let mut fs = Vec::with_capacity(row.len());
        for (rx, ry) in row {
            let label = if m == 0 {
                vlabel(rx, ry)
            } else if vertex_labels {
                (0..=m)
                    .map(|i| {
                        let vx = x.apply_operator(rx, &[i]);
                        let vy = y.apply_operator(ry, &[i]);
                        vlabel(&vx, &vy)
                    })
                    .collect::<Vec<_>>()
                    .join(";")
            } else {
                format!("({}|{})", x.ref_label(rx), y.ref_label(ry))
            };
            ls.push(label);
            if m == 0 {
                fs.push(vec![]);
            } else {
                fs.push(
                    (0..=m)
                        .map(|i| {
                            let d = coface_values(m, i);
                            let key = (x.apply_operator(rx, &d), y.apply_operator(ry, &d));
                            lookup[m - 1][&key]
                        })
                        .collect(),
                );
            }
        }
        labels.push(ls);
        faces.push(fs);
    }
    if labels.is_empty() {
        labels.push(vec![]);
        faces.push(vec![]);
    }
    let set = Arc::new(SimplicialSet::new(labels, faces).expect("products of nonsingular sets are nonsingular"));
    let images1 = pairs.iter().map(|row| row.iter().map(|p| p.0.clone()).collect()).collect();
    let images2 = pairs.iter().map(|row| row.iter().map(|p| p.1.clone()).collect()).collect();
    let pr1 = SimplicialMap::new(set.clone(), x.clone(), images1).expect("first projection");
    let pr2 = SimplicialMap::new(set.clone(), y.clone(), images2).expect("second projection");
    Product { set, pr1, pr2 }
}

/// `f × g` between products built by [`product`].
pub fn product_map(src: &Product, tgt: &Product, f: &SimplicialMap, g: &SimplicialMap) -> Result<SimplicialMap> {
    let vmap = (0..src.set.count(0))
        .map(|v| {
            let a = f.image(src.pr1.image((0, v)).base()).base();
            let b = g.image(src.pr2.image((0, v)).base()).base();
            let label = format!("{},{}", f.target().label(a), g.target().label(b));
            match tgt.set.lookup(&label) {
                Some((0, w)) => Ok(w),
                _ => Err(Error::InvalidMap(format!("no vertex `{label}` in the target product"))),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    SimplicialMap::from_vertex_map(src.set.clone(), tgt.set.clone(), &vmap)
}

/// The barycentric subdivision of a set: the nerve of its poset of
/// nondegenerate simplices.
#[derive(Clone, Debug)]
pub struct Subdivision {
    pub base: Arc<SimplicialSet>,
    pub set: Arc<SimplicialSet>,
    /// The flag of base cells behind each cell of the subdivision.
    pub flags: Vec<Vec<Vec<Cell>>>,
    vertex_of: HashMap<Cell, usize>,
}

impl Subdivision {
    /// Vertex of `sd X` corresponding to a cell of `X`.
    pub fn vertex_of(&self, c: Cell) -> usize {
        self.vertex_of[&c]
    }

    /// The flag behind a cell of `sd X`.
    pub fn flag(&self, c: Cell) -> &[Cell] {
        &self.flags[c.0][c.1]
    }

    /// The last vertex map `γ: sd X → X`: the flag `x_0 < … < x_d` goes to
    /// the face of `x_d` spanned by the last vertices of the `x_k`.
    pub fn last_vertex(&self) -> SimplicialMap {
        let x = &self.base;
        let mut positions: HashMap<Cell, HashMap<Cell, Vec<usize>>> = HashMap::new();
        let images = self
            .flags
            .iter()
            .map(|row| {
                row.iter()
                    .map(|flag| {
                        let top = *flag.last().unwrap();
                        let pos = positions
                            .entry(top)
                            .or_insert_with(|| x.faces_with_positions(top).into_iter().collect());
                        let theta: Vec<usize> = flag.iter().map(|c| *pos[c].last().unwrap()).collect();
                        x.apply_operator(&SimplexRef::nondegenerate(top.0, top.1), &theta)
                    })
                    .collect()
            })
            .collect();
        SimplicialMap::new(self.set.clone(), self.base.clone(), images).expect("last vertex map")
    }
}

/// `sd X`.
pub fn subdivide(x: &Arc<SimplicialSet>) -> Subdivision {
    let cells: Vec<Cell> = x.cells().collect();
    let vertex_of: HashMap<Cell, usize> = cells.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let mut cofaces: Vec<Vec<usize>> = vec![vec![]; cells.len()];
    for (i, &c) in cells.iter().enumerate() {
        for (f, _) in x.faces_with_positions(c) {
            if f != c {
                cofaces[vertex_of[&f]].push(i);
            }
        }
    }
    for cf in &mut cofaces {
        cf.sort();
    }
    let mut chains: Vec<Vec<Vec<usize>>> = vec![(0..cells.len()).map(|i| vec![i]).collect()];
    loop {
        let mut next = Vec::new();
        for ch in chains.last().unwrap() {
            for &y in &cofaces[*ch.last().unwrap()] {
                let mut c = ch.clone();
                c.push(y);
                next.push(c);
            }
        }
        if next.is_empty() {
            break;
        }
        chains.push(next);
    }
    let vlabels: Vec<String> = cells.iter().map(|&c| format!("{{{}}}", x.label(c))).collect();
    let set = if cells.is_empty() {
        SimplicialSet::empty()
    } else {
        SimplicialSet::from_vertex_lists(vlabels, chains.clone()).expect("subdivision")
    };
    let flags = chains
        .iter()
        .map(|row| row.iter().map(|ch| ch.iter().map(|&v| cells[v]).collect()).collect())
        .collect();
    Subdivision {
        base: x.clone(),
        set: Arc::new(set),
        flags,
        vertex_of,
    }
}

/// `sd(f)` between the given subdivisions of the source and target of `f`:
/// a flag goes to the flag of image bases, with repeats normalized.
pub fn subdivide_map(f: &SimplicialMap, sd_source: &Subdivision, sd_target: &Subdivision) -> Result<SimplicialMap> {
    if *sd_source.base != **f.source() || *sd_target.base != **f.target() {
        return Err(Error::DimensionMismatch("subdivisions do not match the map".into()));
    }
    let vmap: Vec<usize> = (0..sd_source.set.count(0))
        .map(|v| {
            let c = sd_source.flag((0, v))[0];
            sd_target.vertex_of(f.image(c).base())
        })
        .collect();
    SimplicialMap::from_vertex_map(sd_source.set.clone(), sd_target.set.clone(), &vmap)
}

/// A finite simplicial pair `(K, L)` with `L` a subcomplex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialPair {
    pub set: Arc<SimplicialSet>,
    sub: Vec<Vec<bool>>,
}

impl SimplicialPair {
    /// Validates that the marked cells are closed under faces.
    pub fn new(set: Arc<SimplicialSet>, sub: Vec<Vec<bool>>) -> Result<Self> {
        if sub.len() != set.labels.len() || sub.iter().zip(&set.labels).any(|(s, l)| s.len() != l.len()) {
            return Err(Error::InvalidSimplicialSet("subcomplex mask has wrong shape".into()));
        }
        for c in set.cells() {
            if sub[c.0][c.1] && c.0 > 0 {
                for i in 0..=c.0 {
                    let f = set.face(c, i);
                    if !sub[f.0][f.1] {
                        return Err(Error::InvalidSimplicialSet(format!(
                            "subcomplex not closed: `{}` in, face `{}` out",
                            set.label(c),
                            set.label(f)
                        )));
                    }
                }
            }
        }
        Ok(SimplicialPair { set, sub })
    }

    pub fn absolute(set: Arc<SimplicialSet>) -> Self {
        let sub = set.labels.iter().map(|l| vec![false; l.len()]).collect();
        SimplicialPair { set, sub }
    }

    /// The subcomplex generated by the given labels (closed under faces).
    pub fn generated(set: Arc<SimplicialSet>, labels: &[&str]) -> Result<Self> {
        let mut sub: Vec<Vec<bool>> = set.labels.iter().map(|l| vec![false; l.len()]).collect();
        for l in labels {
            let c = set
                .lookup(l)
                .ok_or_else(|| Error::InvalidSimplicialSet(format!("unknown label `{l}`")))?;
            for (f, _) in set.faces_with_positions(c) {
                sub[f.0][f.1] = true;
            }
        }
        SimplicialPair::new(set, sub)
    }

    pub fn contains(&self, c: Cell) -> bool {
        self.sub[c.0][c.1]
    }

    pub fn mask(&self) -> &[Vec<bool>] {
        &self.sub
    }

    pub fn sub_labels(&self) -> Vec<String> {
        self.set
            .cells()
            .filter(|&c| self.contains(c))
            .map(|c| self.set.label(c).to_string())
            .collect()
    }

    pub fn sub_counts(&self) -> Vec<usize> {
        self.sub.iter().map(|s| s.iter().filter(|&&b| b).count()).collect()
    }

    /// Union of two subcomplexes of the same set.
    pub fn union(&self, other: &SimplicialPair) -> Result<SimplicialPair> {
        if *self.set != *other.set {
            return Err(Error::ContextMismatch("union of subcomplexes of different sets".into()));
        }
        let sub = self
            .sub
            .iter()
            .zip(&other.sub)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| *x || *y).collect())
            .collect();
        Ok(SimplicialPair { set: self.set.clone(), sub })
    }

    /// The subcomplex as a set of its own, with its inclusion.
    pub fn subcomplex(&self) -> (Arc<SimplicialSet>, SimplicialMap) {
        let mut newidx: Vec<Vec<usize>> = self.sub.iter().map(|s| vec![usize::MAX; s.len()]).collect();
        let mut labels: Vec<Vec<String>> = Vec::new();
        let mut faces: Vec<Vec<Vec<usize>>> = Vec::new();
        let mut images: Vec<Vec<SimplexRef>> = Vec::new();
        for d in 0..self.sub.len() {
            let mut ls = Vec::new();
            let mut fs = Vec::new();
            let mut im = Vec::new();
            for k in 0..self.sub[d].len() {
                if !self.sub[d][k] {
                    continue;
                }
                newidx[d][k] = ls.len();
                ls.push(self.set.label((d, k)).to_string());
                fs.push(if d == 0 {
                    vec![]
                } else {
                    (0..=d).map(|i| newidx[d - 1][self.set.face((d, k), i).1]).collect()
                });
                im.push(SimplexRef::nondegenerate(d, k));
            }
            if ls.is_empty() && d > 0 {
                break;
            }
            labels.push(ls);
            faces.push(fs);
            images.push(im);
        }
        let l = Arc::new(SimplicialSet::new(labels, faces).expect("subcomplex"));
        let incl = SimplicialMap::new(l.clone(), self.set.clone(), images).expect("inclusion");
        (l, incl)
    }

    /// `(K,L)·(K',L') = (K × K', K × L' ∪ L × K')`, with the projections.
    pub fn product(&self, other: &SimplicialPair) -> (SimplicialPair, Product) {
        let p = product(&self.set, &other.set);
        let sub = (0..p.set.labels.len())
            .map(|d| {
                (0..p.set.count(d))
                    .map(|k| {
                        let a = p.pr1.image((d, k)).base();
                        let b = p.pr2.image((d, k)).base();
                        self.contains(a) || other.contains(b)
                    })
                    .collect()
            })
            .collect();
        let pair = SimplicialPair::new(p.set.clone(), sub).expect("product pair");
        (pair, p)
    }

    /// `sd` of the pair: a flag lies in `sd L` iff its top cell lies in `L`.
    pub fn subdivide(&self) -> (SimplicialPair, Subdivision) {
        let sd = subdivide(&self.set);
        let sub = sd
            .flags
            .iter()
            .map(|row| row.iter().map(|f| self.contains(*f.last().unwrap())).collect())
            .collect();
        let pair = SimplicialPair::new(sd.set.clone(), sub).expect("subdivided pair");
        (pair, sd)
    }

    /// Whether `f` maps `source` into this pair's subcomplex wherever
    /// `source` is marked.
    pub fn is_pair_morphism(&self, source: &SimplicialPair, f: &SimplicialMap) -> bool {
        source
            .set
            .cells()
            .filter(|&c| source.contains(c))
            .all(|c| self.contains(f.image(c).base()))
    }

    /// Pairs compare by label under the identifications of products.
    pub fn same_by_labels(&self, other: &SimplicialPair) -> bool {
        self.set.same_by_labels(&other.set)
            && self
                .set
                .cells()
                .all(|c| self.contains(c) == other.contains(other.set.lookup(self.set.label(c)).unwrap()))
    }
}

/// `(I, ∂I)` where `I = Δ^1`.
pub fn interval_pair() -> SimplicialPair {
    SimplicialPair::generated(Arc::new(std_simplex(1)), &["0", "1"]).unwrap()
}

/// `(I^n, ∂I^n)`; `(I^0, ∂I^0) = (Δ^0, ∅)`.
pub fn cube_pair(n: usize) -> SimplicialPair {
    if n == 0 {
        return SimplicialPair::absolute(Arc::new(std_simplex(0)));
    }
    let mut acc = interval_pair();
    for _ in 1..n {
        acc = acc.product(&interval_pair()).0;
    }
    acc
}

/// Splits a product vertex label `a,b,c` into coordinates (top level only).
pub fn coordinates(label: &str) -> Vec<&str> {
    split_top_level(label, ',')
}

/// Splits at `sep` outside of braces.
pub fn split_top_level(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '{' => depth += 1,
            '}' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

/// A map between product sets given by rearranging vertex coordinates:
/// target coordinate `k` is source coordinate `perm[k]`, or the fixed value
/// when `perm[k]` is `None`.
pub fn coordinate_map(source: &Arc<SimplicialSet>, target: &Arc<SimplicialSet>, perm: &[Coord]) -> Result<SimplicialMap> {
    SimplicialMap::from_vertex_labels(source.clone(), target.clone(), |l| {
        let cs = coordinates(l);
        perm.iter()
            .map(|p| match p {
                Coord::From(i) => cs.get(*i).copied().unwrap_or("?").to_string(),
                Coord::Fixed(v) => v.clone(),
            })
            .collect::<Vec<_>>()
            .join(",")
    })
}

/// One target coordinate of a [`coordinate_map`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Coord {
    From(usize),
    Fixed(String),
}

/// The commutativity isomorphism `c_{m,n}: I^m × I^n → I^n × I^m` as a map
/// of cube pairs, with both sets built by [`cube_pair`] products.
pub fn cube_swap(m: usize, n: usize) -> Result<SimplicialMap> {
    let a = cube_pair(m).product(&cube_pair(n)).0;
    let b = cube_pair(n).product(&cube_pair(m)).0;
    let mc = m.max(1);
    let nc = n.max(1);
    // I^0 = Δ^0 still contributes one coordinate to labels.
    let perm: Vec<Coord> = (mc..mc + nc).chain(0..mc).map(Coord::From).collect();
    coordinate_map(&a.set, &b.set, &perm)
}

/// Rewrites vertex labels of `sd^r Δ^1` under the reflection `0 ↔ 1`.
fn reflect_label(label: &str, r: usize) -> String {
    if r == 0 {
        return match label {
            "0" => "1".into(),
            "1" => "0".into(),
            other => other.to_string(),
        };
    }
    let inner = &label[1..label.len() - 1];
    let parts: Vec<String> = split_top_level(inner, ';')
        .into_iter()
        .map(|v| reflect_label(v, r - 1))
        .collect();
    if r == 1 && parts.len() == 2 {
        return format!("{{{}}}", "0;1");
    }
    format!("{{{}}}", parts.join(";"))
}

/// The reflection of `sd^r I` for `r ≥ 1`; on `I` itself the reflection is
/// not simplicial (it reverses the edge).
pub fn interval_reflection(sd_interval: &Arc<SimplicialSet>, r: usize) -> Result<SimplicialMap> {
    if r == 0 {
        return Err(Error::InvalidMap("the reflection of I is not simplicial".into()));
    }
    SimplicialMap::from_vertex_labels(sd_interval.clone(), sd_interval.clone(), |l| reflect_label(l, r))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binom(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn simplex_counts() {
        assert_eq!(std_simplex(0).counts(), vec![1]);
        assert_eq!(std_simplex(2).counts(), vec![3, 3, 1]);
        let s3 = std_simplex(3);
        let oracle: Vec<usize> = (0..=3).map(|d| binom(4, d + 1)).collect();
        assert_eq!(s3.counts(), oracle);
        assert_eq!(s3.label((1, 0)), "0;1");
    }

    #[test]
    fn simplicial_identities_are_enforced() {
        let labels = vec![
            vec!["a".into(), "b".into()],
            vec!["e".into()],
        ];
        assert!(SimplicialSet::new(labels.clone(), vec![vec![vec![], vec![]], vec![vec![1, 0]]]).is_ok());
        // a loop is singular
        assert!(SimplicialSet::new(labels, vec![vec![vec![], vec![]], vec![vec![0, 0]]]).is_err());
    }

    #[test]
    fn product_counts() {
        for p in 0..=3 {
            for q in 0..=3 {
                let x = product(&Arc::new(std_simplex(p)), &Arc::new(std_simplex(q)));
                assert_eq!(x.set.count(p + q), binom(p + q, p), "Δ^{p}×Δ^{q}");
                assert_eq!(x.set.euler(), 1);
            }
        }
        let sq = product(&Arc::new(std_simplex(1)), &Arc::new(std_simplex(1)));
        assert_eq!(sq.set.counts(), vec![4, 5, 2]);
    }

    #[test]
    fn product_with_point_is_isomorphic() {
        let x = Arc::new(std_simplex(2));
        let p = product(&x, &Arc::new(std_simplex(0)));
        assert!(p.pr1.is_injective());
        assert_eq!(p.set.counts(), x.counts());
    }

    #[test]
    fn subdivision_counts() {
        assert_eq!(subdivide(&Arc::new(std_simplex(0))).set.counts(), vec![1]);
        assert_eq!(subdivide(&Arc::new(std_simplex(1))).set.counts(), vec![3, 2]);
        let sd2 = subdivide(&Arc::new(std_simplex(2)));
        assert_eq!(sd2.set.counts(), vec![7, 12, 6]);
        assert_eq!(sd2.set.euler(), 1);
    }

    #[test]
    fn last_vertex_of_barycenter() {
        let i = Arc::new(std_simplex(1));
        let sd = subdivide(&i);
        let g = sd.last_vertex();
        let bary = sd.set.lookup("{0;1}").unwrap();
        assert_eq!(i.label(g.image(bary).base()), "1");
        let e = sd.set.lookup("{0};{0;1}").unwrap();
        // the edge from {0} to the barycenter maps onto the edge 0;1
        assert_eq!(g.image(e), &SimplexRef::nondegenerate(1, 0));
        let e1 = sd.set.lookup("{1};{0;1}").unwrap();
        assert!(g.image(e1).is_degenerate());
    }

    #[test]
    fn cosimplicial_identity() {
        let a = coface(2, 1).unwrap().after(&coface(1, 0).unwrap()).unwrap();
        let b = coface(2, 0).unwrap().after(&coface(1, 0).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn cube_boundary() {
        let c0 = cube_pair(0);
        assert_eq!(c0.set.counts(), vec![1]);
        assert_eq!(c0.sub_counts(), vec![0]);
        assert_eq!(cube_pair(1).sub_counts(), vec![2, 0]);
        assert_eq!(cube_pair(2).sub_counts(), vec![4, 4, 0]);
        // each boundary square carries two triangles and a diagonal
        assert_eq!(cube_pair(3).sub_counts()[..3], [8, 12 + 6, 2 * 6]);
    }

    #[test]
    fn cube_products_associate_by_label() {
        for (m, n) in [(1, 1), (1, 2), (2, 1)] {
            let lhs = cube_pair(m + n);
            let rhs = cube_pair(m).product(&cube_pair(n)).0;
            assert!(lhs.same_by_labels(&rhs));
        }
    }

    #[test]
    fn cube_swap_is_involution() {
        let c = cube_swap(1, 1).unwrap();
        assert!(c.after(&c).unwrap() == SimplicialMap::identity(c.source().clone()));
    }

    #[test]
    fn reflection_of_subdivided_interval() {
        let sd = subdivide(&Arc::new(std_simplex(1)));
        let f = interval_reflection(&sd.set, 1).unwrap();
        let a = sd.set.lookup("{0};{0;1}").unwrap();
        let b = sd.set.lookup("{1};{0;1}").unwrap();
        assert_eq!(f.image(a).base(), b);
        assert_eq!(f.image(b).base(), a);
        let bary = sd.set.lookup("{0;1}").unwrap();
        assert_eq!(f.image(bary).base(), bary);
        let sd2 = subdivide(&sd.set);
        let f2 = interval_reflection(&sd2.set, 2).unwrap();
        assert!(f2.after(&f2).unwrap() == SimplicialMap::identity(sd2.set.clone()));
        assert!(f2.same_by_labels(&subdivide_map(&f, &sd2, &sd2).unwrap()));
    }

    #[test]
    fn pair_product_unit() {
        let i1 = SimplicialPair::generated(Arc::new(std_simplex(1)), &["1"]).unwrap();
        let (p, prod) = i1.product(&SimplicialPair::absolute(Arc::new(std_simplex(0))));
        assert!(prod.pr1.is_injective());
        assert_eq!(p.sub_counts(), vec![1, 0]);
    }
}
