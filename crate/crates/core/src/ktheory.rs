//! Equivariant K-theory of `G/B` in the GKM model.
//!
//! A class is a function `W -> Lambda`, its restrictions to the torus-fixed
//! points. Products are pointwise. Schubert classes `O^v` are built by the
//! Demazure recursion from the point class, and expansions in the Schubert
//! basis are obtained by a triangular solve. Constants for `G/P` are computed
//! inside the `G/B` engine through pullback injectivity.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, OnceLock, RwLock};

use crate::error::{Error, Result};
use crate::repring::RingElt;
use crate::rootsys::{CartanDatum, Root};
use crate::weyl::{ParabolicSubset, WeylElement, WeylGroup};

/// A GKM function on `W`, indexed like [`WeylGroup::elements`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KClass {
    values: Vec<RingElt>,
}

impl KClass {
    pub fn from_values(values: Vec<RingElt>) -> Self {
        KClass { values }
    }

    pub fn values(&self) -> &[RingElt] {
        &self.values
    }

    /// Restriction to the fixed point with index `idx`.
    pub fn value(&self, idx: usize) -> &RingElt {
        &self.values[idx]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(RingElt::is_zero)
    }

    pub fn add(&self, other: &KClass) -> KClass {
        KClass {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &KClass) -> KClass {
        KClass {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    /// Pointwise product.
    pub fn multiply(&self, other: &KClass) -> KClass {
        KClass {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a * b)
                .collect(),
        }
    }

    /// Multiplication by a scalar of `Lambda`.
    pub fn scale(&self, c: &RingElt) -> KClass {
        KClass {
            values: self.values.iter().map(|a| a * c).collect(),
        }
    }
}

/// A finite combination `sum_w c_w O^w` (or `O_w`) with `w` in `W^P`, keyed by
/// element index. Never stores zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchubertExpansion {
    parabolic: ParabolicSubset,
    rank: usize,
    coeffs: BTreeMap<usize, RingElt>,
}

impl SchubertExpansion {
    pub fn zero(parabolic: ParabolicSubset, rank: usize) -> Self {
        SchubertExpansion {
            parabolic,
            rank,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn parabolic(&self) -> ParabolicSubset {
        self.parabolic
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient at element index `idx` (zero when absent).
    pub fn coefficient(&self, idx: usize) -> RingElt {
        self.coeffs
            .get(&idx)
            .cloned()
            .unwrap_or_else(|| RingElt::zero(self.rank))
    }

    /// `(index, coefficient)` pairs in element order.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &RingElt)> {
        self.coeffs.iter().map(|(i, c)| (*i, c))
    }

    /// Adds `c` to the coefficient at `idx`.
    pub fn add_term(&mut self, idx: usize, c: &RingElt) {
        if c.is_zero() {
            return;
        }
        let sum = match self.coeffs.get(&idx) {
            Some(old) => old + c,
            None => c.clone(),
        };
        if sum.is_zero() {
            self.coeffs.remove(&idx);
        } else {
            self.coeffs.insert(idx, sum);
        }
    }

    pub fn add(&self, other: &SchubertExpansion) -> SchubertExpansion {
        let mut out = self.clone();
        for (i, c) in other.terms() {
            out.add_term(i, c);
        }
        out
    }

    pub fn sub(&self, other: &SchubertExpansion) -> SchubertExpansion {
        let mut out = self.clone();
        for (i, c) in other.terms() {
            out.add_term(i, &-c);
        }
        out
    }

    pub fn scale(&self, c: &RingElt) -> SchubertExpansion {
        let mut out = SchubertExpansion::zero(self.parabolic, self.rank);
        for (i, x) in self.terms() {
            out.add_term(i, &(x * c));
        }
        out
    }

    /// Same coefficients, reinterpreted over another parabolic.
    pub fn with_parabolic(mut self, parabolic: ParabolicSubset) -> Self {
        self.parabolic = parabolic;
        self
    }
}

/// The classical engine for one root system.
pub struct KTheory {
    group: Arc<WeylGroup>,
    rank: usize,
    /// `right[w * r + k]`: index of `w s_k` (0-based `k`).
    right: Vec<usize>,
    /// `e^{w(alpha_k)}`.
    root_exp: Vec<RingElt>,
    /// `1 - e^{w(alpha_k)}`.
    root_den: Vec<RingElt>,
    schubert: RwLock<HashMap<usize, Arc<KClass>>>,
    opposite: RwLock<HashMap<usize, Arc<KClass>>>,
    products: RwLock<HashMap<(ParabolicSubset, usize, usize), Arc<SchubertExpansion>>>,
    edges: OnceLock<Vec<(usize, usize, RingElt)>>,
}

impl std::fmt::Debug for KTheory {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("KTheory")
            .field("group", &self.group)
            .finish()
    }
}

impl KTheory {
    pub fn new(group: Arc<WeylGroup>) -> Self {
        let rank = group.rank();
        let n = group.order();
        let mut right = Vec::with_capacity(n * rank);
        let mut root_exp = Vec::with_capacity(n * rank);
        let mut root_den = Vec::with_capacity(n * rank);
        for w in group.elements() {
            for k in 0..rank {
                let ws = group.right_mul_gen(w, k);
                right.push(group.index_of(&ws).expect("enumeration is closed"));
                let e = RingElt::exp(group.image_of_simple_root_weight(w, k + 1));
                root_den.push(&RingElt::one(rank) - &e);
                root_exp.push(e);
            }
        }
        KTheory {
            group,
            rank,
            right,
            root_exp,
            root_den,
            schubert: RwLock::new(HashMap::new()),
            opposite: RwLock::new(HashMap::new()),
            products: RwLock::new(HashMap::new()),
            edges: OnceLock::new(),
        }
    }

    pub fn from_type(label: &str) -> Result<Self> {
        Ok(KTheory::new(Arc::new(WeylGroup::from_type(label)?)))
    }

    pub fn group(&self) -> &WeylGroup {
        &self.group
    }

    pub fn group_arc(&self) -> Arc<WeylGroup> {
        self.group.clone()
    }

    pub fn datum(&self) -> &CartanDatum {
        self.group.datum()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Index of `w` among the fixed points.
    pub fn index(&self, w: &WeylElement) -> Result<usize> {
        self.group.index_of(w).ok_or(Error::GroupMismatch)
    }

    pub fn element(&self, idx: usize) -> &WeylElement {
        &self.group.elements()[idx]
    }

    /// Digit word of the element with index `idx`.
    pub fn word(&self, idx: usize) -> String {
        self.group.format_word(self.element(idx))
    }

    pub fn constant_class(&self, c: &RingElt) -> KClass {
        KClass {
            values: vec![c.clone(); self.group.order()],
        }
    }

    fn one(&self) -> RingElt {
        RingElt::one(self.rank)
    }

    /// `prod_{beta > 0, v^{-1} beta < 0} (1 - e^{-beta})`, the restriction of `O^v` at `v`.
    pub fn diagonal_value(&self, v: &WeylElement) -> RingElt {
        let d = self.datum();
        let mut acc = self.one();
        for gamma in d.positive_roots() {
            let img: Root = self.group.apply_root(v, gamma);
            if !img.is_positive() {
                // beta = -v(gamma) > 0 and 1 - e^{-beta} = 1 - e^{v(gamma)}
                acc = &acc * &(&self.one() - &RingElt::exp(d.root_to_weight(&img)));
            }
        }
        acc
    }

    /// The GKM lowering operator
    /// `(D_k f)(w) = (f(w) - e^{w(alpha_k)} f(w s_k)) / (1 - e^{w(alpha_k)})`, 1-based `k`.
    pub fn demazure(&self, f: &KClass, k: usize) -> Result<KClass> {
        self.datum().check_node(k)?;
        let r = self.rank;
        let k0 = k - 1;
        let values = (0..self.group.order())
            .map(|w| {
                let slot = w * r + k0;
                let num = &f.values[w] - &(&self.root_exp[slot] * &f.values[self.right[slot]]);
                num.exact_divide(&self.root_den[slot])
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(KClass { values })
    }

    /// `O^v`, the class of the opposite Schubert variety `Y(v)`.
    pub fn schubert_class(&self, v: &WeylElement) -> Result<Arc<KClass>> {
        let idx = self.index(v)?;
        Ok(self.schubert_by_index(idx))
    }

    pub(crate) fn schubert_by_index(&self, idx: usize) -> Arc<KClass> {
        if let Some(c) = self.schubert.read().unwrap().get(&idx) {
            return c.clone();
        }
        let v = self.element(idx);
        let class =
            if let Some(k0) = (0..self.rank).find(|&k| !self.group.has_right_descent(v, k + 1)) {
                let up = self.schubert_by_index(self.right[idx * self.rank + k0]);
                self.demazure(&up, k0 + 1)
                    .expect("Demazure operator preserves GKM classes")
            } else {
                let mut values = vec![RingElt::zero(self.rank); self.group.order()];
                values[idx] = self.diagonal_value(v);
                KClass { values }
            };
        let class = Arc::new(class);
        self.schubert
            .write()
            .unwrap()
            .entry(idx)
            .or_insert(class)
            .clone()
    }

    /// `O_w`, the class of the Schubert variety `X(w)`, via
    /// `O_w|_u = w_0 . (O^{w_0 w}|_{w_0 u})`.
    pub fn opposite_schubert_class(&self, w: &WeylElement) -> Result<Arc<KClass>> {
        let idx = self.index(w)?;
        if let Some(c) = self.opposite.read().unwrap().get(&idx) {
            return Ok(c.clone());
        }
        let g = &self.group;
        let w0 = g.w0();
        let dual = self.schubert_class(&g.multiply(&w0, w)?)?;
        let values = g
            .elements()
            .iter()
            .map(|u| {
                let j = self.index(&g.multiply(&w0, u)?)?;
                Ok(dual.values[j].weyl_act(g, &w0))
            })
            .collect::<Result<Vec<_>>>()?;
        let class = Arc::new(KClass { values });
        Ok(self
            .opposite
            .write()
            .unwrap()
            .entry(idx)
            .or_insert(class)
            .clone())
    }

    /// The class `sum_w c_w O^w`.
    pub fn class_of(&self, e: &SchubertExpansion) -> KClass {
        let mut acc = KClass {
            values: vec![RingElt::zero(self.rank); self.group.order()],
        };
        for (i, c) in e.terms() {
            acc = acc.add(&self.schubert_by_index(i).scale(c));
        }
        acc
    }

    /// Coefficients of `c` in `{O^v : v in W^P}` by the triangular solve over
    /// `W^P` in increasing length. Raises if `c` is outside that span.
    pub fn expand(&self, c: &KClass, p: ParabolicSubset) -> Result<SchubertExpansion> {
        let n = self.group.order();
        if c.values.len() != n {
            return Err(Error::GroupMismatch);
        }
        let wp = self.group.enumerate_wp(p)?;
        let mut residual = c.values.clone();
        let mut out = SchubertExpansion::zero(p, self.rank);
        for v in wp.iter() {
            let vi = self.index(v)?;
            if residual[vi].is_zero() {
                continue;
            }
            let ov = self.schubert_by_index(vi);
            let coef = residual[vi].exact_divide(&ov.values[vi]).map_err(|_| {
                Error::NotInSpan(format!("restriction at {} is not divisible", self.word(vi)))
            })?;
            for (w, value) in ov.values.iter().enumerate() {
                if !value.is_zero() {
                    residual[w] = &residual[w] - &(&coef * value);
                }
            }
            out.add_term(vi, &coef);
        }
        if let Some(w) = residual.iter().position(|x| !x.is_zero()) {
            return Err(Error::NotInSpan(format!(
                "nonzero residue at {}",
                self.word(w)
            )));
        }
        Ok(out)
    }

    fn require_min_rep(&self, w: &WeylElement, p: ParabolicSubset) -> Result<()> {
        if self.group.is_min_rep(w, p) {
            Ok(())
        } else {
            Err(Error::NotMinimalRepresentative {
                element: self.group.format_word(w),
                parabolic: p.to_string(),
            })
        }
    }

    /// All `c_{u,v}^w` for `u, v` in `W^P`: the expansion of `O^u O^v` over `W^P`.
    pub fn structure_constants(
        &self,
        u: &WeylElement,
        v: &WeylElement,
        p: ParabolicSubset,
    ) -> Result<Arc<SchubertExpansion>> {
        self.require_min_rep(u, p)?;
        self.require_min_rep(v, p)?;
        let (a, b) = (self.index(u)?, self.index(v)?);
        self.structure_constants_by_index(a, b, p)
    }

    pub(crate) fn structure_constants_by_index(
        &self,
        a: usize,
        b: usize,
        p: ParabolicSubset,
    ) -> Result<Arc<SchubertExpansion>> {
        let key = (p, a.min(b), a.max(b));
        if let Some(e) = self.products.read().unwrap().get(&key) {
            return Ok(e.clone());
        }
        let product = self
            .schubert_by_index(a)
            .multiply(&self.schubert_by_index(b));
        let e = Arc::new(self.expand(&product, p)?);
        Ok(self
            .products
            .write()
            .unwrap()
            .entry(key)
            .or_insert(e)
            .clone())
    }

    /// The single constant `c_{u,v}^w` in `K_T(G/P)`.
    pub fn structure_constant(
        &self,
        u: &WeylElement,
        v: &WeylElement,
        w: &WeylElement,
        p: ParabolicSubset,
    ) -> Result<RingElt> {
        self.require_min_rep(w, p)?;
        Ok(self
            .structure_constants(u, v, p)?
            .coefficient(self.index(w)?))
    }

    /// `partial_k`, extended linearly from `O^w -> O^{w_k}`.
    pub fn divided_difference(&self, e: &SchubertExpansion, k: usize) -> Result<SchubertExpansion> {
        self.hecke_map(e, k, false)
    }

    /// `partial_k` on the basis `O_w`, extended linearly from `O_w -> O_{w^k}`.
    pub fn divided_difference_opposite(
        &self,
        e: &SchubertExpansion,
        k: usize,
    ) -> Result<SchubertExpansion> {
        self.hecke_map(e, k, true)
    }

    fn hecke_map(&self, e: &SchubertExpansion, k: usize, up: bool) -> Result<SchubertExpansion> {
        let p = e.parabolic();
        if !self.group.is_k_free(p, k)? {
            return Err(Error::NotKFree {
                k,
                parabolic: p.to_string(),
            });
        }
        let mut out = SchubertExpansion::zero(p, self.rank);
        for (i, c) in e.terms() {
            let w = self.element(i);
            let image = if up {
                self.group.hecke_up(w, k)?
            } else {
                self.group.hecke_down(w, k)?
            };
            out.add_term(self.index(&image)?, c);
        }
        Ok(out)
    }

    /// `pi_*` along `G/P -> G/Q`: `O^w -> O^{min_coset_rep(w, Q)}`.
    pub fn pushforward(
        &self,
        e: &SchubertExpansion,
        q: ParabolicSubset,
    ) -> Result<SchubertExpansion> {
        let p = e.parabolic();
        if !p.is_subset_of(q) {
            return Err(Error::NotContained {
                inner: p.to_string(),
                outer: q.to_string(),
            });
        }
        let mut out = SchubertExpansion::zero(q, self.rank);
        for (i, c) in e.terms() {
            let rep = self.group.min_coset_rep(self.element(i), q)?;
            out.add_term(self.index(&rep)?, c);
        }
        Ok(out)
    }

    /// `pi^*` along `G/P -> G/Q`: `O^w -> O^w`.
    pub fn pullback(&self, e: &SchubertExpansion, p: ParabolicSubset) -> Result<SchubertExpansion> {
        let q = e.parabolic();
        if !p.is_subset_of(q) {
            return Err(Error::NotContained {
                inner: p.to_string(),
                outer: q.to_string(),
            });
        }
        Ok(e.clone().with_parabolic(p))
    }

    /// The equivariant Euler characteristic: the sum of the coefficients, since
    /// every Schubert class integrates to 1.
    pub fn euler_characteristic(&self, e: &SchubertExpansion) -> RingElt {
        e.terms()
            .fold(RingElt::zero(self.rank), |acc, (_, c)| &acc + c)
    }

    /// `int_{G/P} c` for a class pulled back from `G/P`.
    pub fn integral(&self, c: &KClass, p: ParabolicSubset) -> Result<RingElt> {
        Ok(self.euler_characteristic(&self.expand(c, p)?))
    }

    /// Moment graph edges `(w, s_beta w, 1 - e^{beta})` for `beta > 0`, each once.
    fn edges(&self) -> &[(usize, usize, RingElt)] {
        self.edges.get_or_init(|| {
            let g = &self.group;
            let d = self.datum();
            let mut reflections: BTreeMap<Root, WeylElement> = BTreeMap::new();
            for w in g.elements() {
                for k in 1..=self.rank {
                    let beta = g.apply_root(w, &d.simple_root(k).unwrap());
                    if beta.is_positive() && !reflections.contains_key(&beta) {
                        let s = g
                            .multiply(&g.right_mul_gen(w, k - 1), &g.inverse(w))
                            .unwrap();
                        reflections.insert(beta, s);
                    }
                }
            }
            let mut edges = Vec::new();
            for (beta, s) in &reflections {
                let den = &self.one() - &RingElt::exp(d.root_to_weight(beta));
                for (i, w) in g.elements().iter().enumerate() {
                    let j = g.index_of(&g.multiply(s, w).unwrap()).unwrap();
                    if i < j {
                        edges.push((i, j, den.clone()));
                    }
                }
            }
            edges
        })
    }

    /// Edge divisibility: `f(w) - f(s_beta w)` divisible by `1 - e^{beta}`.
    /// Returns the first failing edge as `(w, s_beta w)` words.
    pub fn gkm_check(&self, f: &KClass) -> std::result::Result<(), (String, String)> {
        for (i, j, den) in self.edges() {
            if (&f.values[*i] - &f.values[*j]).exact_divide(den).is_err() {
                return Err((self.word(*i), self.word(*j)));
            }
        }
        Ok(())
    }

    /// Number of moment graph edges, `|W| |R^+| / 2`.
    pub fn edge_count(&self) -> usize {
        self.edges().len()
    }
}
