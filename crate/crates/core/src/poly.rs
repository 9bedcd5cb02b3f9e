//! Sparse multivariate polynomials with central variables and coefficients in
//! an arbitrary [`Ring`].
//!
//! On a standard simplex `Δ^p` the coordinate ring is
//! `Z[t_0,…,t_p]/⟨1 − Σ t_i⟩`. We eliminate `t_0`, so a polynomial on `Δ^p`
//! is an ordinary polynomial in `t_1,…,t_p` and every element has exactly one
//! representative. Some callers append extra parameters (a homotopy
//! variable `u`) after the simplex coordinates; see [`Poly::pullback`].

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::ring::{Integers, Ring};

/// Exponent vector, ordered graded-lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// All monomials in `nvars` variables of degree at most `deg`, in
    /// increasing order.
    pub fn up_to(nvars: usize, deg: u32) -> Vec<Monomial> {
        fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
            if i == cur.len() {
                out.push(Monomial(cur.clone()));
                return;
            }
            for e in 0..=left {
                cur[i] = e;
                rec(i + 1, left - e, cur, out);
            }
            cur[i] = 0;
        }
        let mut out = Vec::new();
        rec(0, deg, &mut vec![0; nvars], &mut out);
        out.sort();
        out
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial in `nvars` commuting variables. No zero coefficients are
/// stored.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<E> {
    nvars: usize,
    terms: BTreeMap<Monomial, E>,
}

/// Integer polynomial.
pub type ZPoly = Poly<BigInt>;

impl<E: Clone + PartialEq + fmt::Debug> Poly<E> {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &E)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> Option<&E> {
        self.terms.get(m)
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn constant<R: Ring<Elem = E>>(ring: &R, nvars: usize, c: E) -> Self {
        Self::monomial(ring, Monomial::one(nvars), c)
    }

    pub fn monomial<R: Ring<Elem = E>>(ring: &R, m: Monomial, c: E) -> Self {
        let nvars = m.0.len();
        let mut terms = BTreeMap::new();
        if !ring.is_zero(&c) {
            terms.insert(m, c);
        }
        Poly { nvars, terms }
    }

    /// Builds a polynomial from raw terms, combining repeats and dropping zeros.
    pub fn from_terms<R, I>(ring: &R, nvars: usize, terms: I) -> Self
    where
        R: Ring<Elem = E>,
        I: IntoIterator<Item = (Monomial, E)>,
    {
        let mut p = Poly::zero(nvars);
        for (m, c) in terms {
            assert_eq!(m.0.len(), nvars, "monomial arity");
            p.add_term(ring, m, &c);
        }
        p
    }

    fn add_term<R: Ring<Elem = E>>(&mut self, ring: &R, m: Monomial, c: &E) {
        if ring.is_zero(c) {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(old) => {
                let s = ring.add(old, c);
                if ring.is_zero(&s) {
                    self.terms.remove(&m);
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    pub fn add<R: Ring<Elem = E>>(&self, ring: &R, other: &Self) -> Self {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(ring, m.clone(), c);
        }
        out
    }

    pub fn neg<R: Ring<Elem = E>>(&self, ring: &R) -> Self {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), ring.neg(c)))
                .collect(),
        }
    }

    pub fn sub<R: Ring<Elem = E>>(&self, ring: &R, other: &Self) -> Self {
        self.add(ring, &other.neg(ring))
    }

    /// Product; variables are central so only coefficients use the ring's
    /// (possibly noncommutative) multiplication, in the given order.
    pub fn mul<R: Ring<Elem = E>>(&self, ring: &R, other: &Self) -> Self {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut out = Poly::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(ring, m1.mul(m2), &ring.mul(c1, c2));
            }
        }
        out
    }

    pub fn scale<R: Ring<Elem = E>>(&self, ring: &R, k: &BigInt) -> Self {
        Poly::from_terms(
            ring,
            self.nvars,
            self.terms.iter().map(|(m, c)| (m.clone(), ring.scale(k, c))),
        )
    }

    /// Multiplies by an integer polynomial in the same variables.
    pub fn mul_z<R: Ring<Elem = E>>(&self, ring: &R, z: &ZPoly) -> Self {
        debug_assert_eq!(self.nvars, z.nvars);
        let mut out = Poly::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, k) in &z.terms {
                out.add_term(ring, m1.mul(m2), &ring.scale(k, c1));
            }
        }
        out
    }

    /// Applies `f` to every coefficient.
    pub fn map_coeffs<R2, F>(&self, ring: &R2, f: F) -> Poly<R2::Elem>
    where
        R2: Ring,
        F: Fn(&E) -> R2::Elem,
    {
        Poly::from_terms(
            ring,
            self.nvars,
            self.terms.iter().map(|(m, c)| (m.clone(), f(c))),
        )
    }

    /// Substitutes variable `i` by the integer polynomial `images[i]`; all
    /// images must live in the same number of variables.
    pub fn substitute<R: Ring<Elem = E>>(&self, ring: &R, images: &[ZPoly], nvars_out: usize) -> Self {
        assert_eq!(images.len(), self.nvars, "one image per variable");
        let mut powers: Vec<Vec<ZPoly>> = images
            .iter()
            .map(|_| vec![ZPoly::one(nvars_out)])
            .collect();
        let mut out = Poly::zero(nvars_out);
        for (m, c) in &self.terms {
            let mut z = ZPoly::one(nvars_out);
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap().mul(&Integers, &images[i]);
                    powers[i].push(next);
                }
                z = z.mul(&Integers, &powers[i][e as usize]);
            }
            for (m2, k) in &z.terms {
                out.add_term(ring, m2.clone(), &ring.scale(k, c));
            }
        }
        out
    }

    /// Pullback along an order-preserving map `φ: [p] → [q]`, given by its
    /// values, for a polynomial on `Δ^q` followed by `extra` parameters:
    /// `t_i ↦ Σ_{φ(j)=i} t_j`, with `t_0` of the source re-eliminated.
    pub fn pullback<R: Ring<Elem = E>>(&self, ring: &R, phi: &[usize], extra: usize) -> Self {
        let p = phi.len() - 1;
        let q = self.nvars - extra;
        let out_vars = p + extra;
        let mut images = Vec::with_capacity(self.nvars);
        for i in 1..=q {
            let mut img = ZPoly::zero(out_vars);
            for (j, &v) in phi.iter().enumerate() {
                if v == i {
                    img = img.add(&Integers, &ZPoly::simplex_coordinate(p, j, extra));
                }
            }
            images.push(img);
        }
        for k in 0..extra {
            images.push(ZPoly::var(out_vars, p + k));
        }
        self.substitute(ring, &images, out_vars)
    }

    /// Value at vertex `v` of the simplex (the remaining parameters stay).
    pub fn at_vertex<R: Ring<Elem = E>>(&self, ring: &R, v: usize, extra: usize) -> Self {
        self.pullback(ring, &[v], extra)
    }
}

impl ZPoly {
    pub fn one(nvars: usize) -> Self {
        ZPoly::constant(&Integers, nvars, BigInt::one())
    }

    pub fn int(nvars: usize, k: i64) -> Self {
        ZPoly::constant(&Integers, nvars, BigInt::from(k))
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        ZPoly::monomial(&Integers, Monomial(e), BigInt::one())
    }

    /// The barycentric coordinate `t_j` on `Δ^p` in canonical coordinates
    /// (`t_0 = 1 − t_1 − … − t_p`), in a ring with `extra` trailing
    /// parameters.
    pub fn simplex_coordinate(p: usize, j: usize, extra: usize) -> Self {
        let n = p + extra;
        if j == 0 {
            let mut out = ZPoly::one(n);
            for i in 1..=p {
                out = out.sub(&Integers, &ZPoly::var(n, i - 1));
            }
            out
        } else {
            ZPoly::var(n, j - 1)
        }
    }

    /// Builds an integer polynomial from `(exponents, coefficient)` pairs.
    pub fn from_ints(nvars: usize, terms: &[(&[u32], i64)]) -> Self {
        ZPoly::from_terms(
            &Integers,
            nvars,
            terms
                .iter()
                .map(|(e, c)| (Monomial(e.to_vec()), BigInt::from(*c))),
        )
    }

    /// Constant term value if the polynomial is constant.
    pub fn as_constant(&self) -> Option<BigInt> {
        match self.terms.len() {
            0 => Some(BigInt::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                (m.degree() == 0).then(|| c.clone())
            }
            _ => None,
        }
    }
}

/// The ring of polynomials in a fixed number of central variables over `R`.
#[derive(Clone, Debug)]
pub struct PolyRing<R> {
    pub base: R,
    pub nvars: usize,
}

impl<R: Ring> Ring for PolyRing<R> {
    type Elem = Poly<R::Elem>;

    fn zero(&self) -> Self::Elem {
        Poly::zero(self.nvars)
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.add(&self.base, b)
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        a.neg(&self.base)
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.mul(&self.base, b)
    }
    fn scale(&self, k: &BigInt, a: &Self::Elem) -> Self::Elem {
        a.scale(&self.base, k)
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.is_zero()
    }
}

impl fmt::Display for ZPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            for (i, e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*t{}", i + 1)?,
                    _ => write!(f, "*t{}^{}", i + 1, e)?,
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: usize, t: &[(&[u32], i64)]) -> ZPoly {
        ZPoly::from_ints(n, t)
    }

    #[test]
    fn t1_times_one_minus_t1_is_t0_t1() {
        let t1 = ZPoly::simplex_coordinate(1, 1, 0);
        let t0 = ZPoly::simplex_coordinate(1, 0, 0);
        let lhs = t1.mul(&Integers, &ZPoly::one(1).sub(&Integers, &t1));
        assert_eq!(lhs, t0.mul(&Integers, &t1));
        assert_eq!(lhs, z(1, &[(&[1], 1), (&[2], -1)]));
    }

    #[test]
    fn coface_pullbacks_evaluate_endpoints() {
        // d^0: [0] -> [1] hits vertex 1, d^1 hits vertex 0.
        let t0 = ZPoly::simplex_coordinate(1, 0, 0);
        let t1 = ZPoly::simplex_coordinate(1, 1, 0);
        assert_eq!(t0.pullback(&Integers, &[1], 0), ZPoly::zero(0));
        assert_eq!(t1.pullback(&Integers, &[1], 0), ZPoly::one(0));
        assert_eq!(t0.pullback(&Integers, &[0], 0), ZPoly::one(0));
    }

    #[test]
    fn identity_and_degeneracy_pullbacks() {
        let f = z(2, &[(&[1, 0], 3), (&[1, 2], -2), (&[0, 0], 5)]);
        assert_eq!(f.pullback(&Integers, &[0, 1, 2], 0), f);
        let c = ZPoly::int(0, 7);
        assert_eq!(c.pullback(&Integers, &[0, 0], 0), ZPoly::int(1, 7));
    }

    #[test]
    fn degeneracy_sums_coordinates() {
        // s^0: [2] -> [1], (0,0,1): t_1 ↦ t_2.
        let t1 = ZPoly::simplex_coordinate(1, 1, 0);
        assert_eq!(
            t1.pullback(&Integers, &[0, 0, 1], 0),
            ZPoly::simplex_coordinate(2, 2, 0)
        );
        // s^1: [2] -> [1], (0,1,1): t_1 ↦ t_1 + t_2.
        assert_eq!(
            t1.pullback(&Integers, &[0, 1, 1], 0),
            z(2, &[(&[1, 0], 1), (&[0, 1], 1)])
        );
    }

    #[test]
    fn extra_parameters_are_untouched() {
        // u * t_1 on Δ^1 with one parameter, restricted to vertex 1.
        let f = z(2, &[(&[1, 1], 1)]);
        assert_eq!(f.at_vertex(&Integers, 1, 1), z(1, &[(&[1], 1)]));
        assert_eq!(f.at_vertex(&Integers, 0, 1), ZPoly::zero(1));
    }

    #[test]
    fn grlex_order() {
        assert!(Monomial(vec![0, 2]) > Monomial(vec![1, 0]));
        assert!(Monomial(vec![1, 0]) > Monomial(vec![0, 1]));
    }
}
