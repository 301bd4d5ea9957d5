//! Weyl group elements, Bruhat order, parabolic cosets and the Hecke
//! operations `w -> w_k`, `w -> w^k`.
//!
//! An element is stored as its root-image table `(w(alpha_1), ..., w(alpha_r))`
//! in simple-root coordinates. Two elements are equal iff their tables agree.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::rootsys::{CartanDatum, Root, Weight};

/// A set of simple roots `Delta_P`, stored as a bitmask over 0-based nodes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ParabolicSubset(u64);

impl ParabolicSubset {
    /// The Borel subgroup: `Delta_P` empty.
    pub const BOREL: ParabolicSubset = ParabolicSubset(0);

    pub fn from_bits(bits: u64) -> Self {
        ParabolicSubset(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    /// From 1-based node numbers. Range is checked against a datum by the group.
    pub fn from_nodes(nodes: &[usize]) -> Self {
        ParabolicSubset(
            nodes
                .iter()
                .filter(|&&n| (1..=64).contains(&n))
                .fold(0, |acc, &n| acc | 1 << (n - 1)),
        )
    }

    /// Full node set of a rank-`rank` system.
    pub fn full(rank: usize) -> Self {
        if rank >= 64 {
            ParabolicSubset(u64::MAX)
        } else {
            ParabolicSubset((1u64 << rank) - 1)
        }
    }

    /// Parses a comma/space separated node list; the empty string is the Borel.
    pub fn parse(text: &str) -> Result<Self> {
        let mut nodes = Vec::new();
        for tok in text
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
        {
            let tok = tok.trim_start_matches(['a', 'A']).trim_start_matches('_');
            let n: usize = tok
                .parse()
                .map_err(|_| Error::Parse(format!("bad parabolic node `{tok}`")))?;
            if n == 0 || n > 64 {
                return Err(Error::Parse(format!("parabolic node {n} out of range")));
            }
            nodes.push(n);
        }
        Ok(ParabolicSubset::from_nodes(&nodes))
    }

    /// 1-based nodes in increasing order.
    pub fn nodes(self) -> Vec<usize> {
        (0..64)
            .filter(|i| self.0 & (1 << i) != 0)
            .map(|i| i + 1)
            .collect()
    }

    pub fn contains(self, node: usize) -> bool {
        (1..=64).contains(&node) && self.0 & (1 << (node - 1)) != 0
    }

    pub fn with(self, node: usize) -> Self {
        ParabolicSubset(self.0 | 1 << (node - 1))
    }

    pub fn without(self, node: usize) -> Self {
        ParabolicSubset(self.0 & !(1 << (node - 1)))
    }

    pub fn is_subset_of(self, other: ParabolicSubset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Comma-separated node list, empty for the Borel.
    pub fn to_list(self) -> String {
        self.nodes()
            .iter()
            .map(|n| n.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl fmt::Display for ParabolicSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.to_list())
    }
}

/// A Weyl group element as its root-image table; `images[j * r + i]` is the
/// `i`-th simple-root coordinate of `w(alpha_{j+1})`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeylElement {
    images: SmallVec<[i8; 16]>,
    length: u32,
    group: u64,
}

impl WeylElement {
    pub fn rank(&self) -> usize {
        (self.images.len() as f64).sqrt().round() as usize
    }

    pub fn length(&self) -> usize {
        self.length as usize
    }

    pub fn is_identity(&self) -> bool {
        self.length == 0
    }

    /// `w(alpha_j)` in simple-root coordinates, 0-based `j`.
    fn image(&self, r: usize, j: usize) -> &[i8] {
        &self.images[j * r..(j + 1) * r]
    }

    /// The root-image table as roots.
    pub fn root_images(&self) -> Vec<Root> {
        let r = self.rank();
        (0..r)
            .map(|j| Root(self.image(r, j).iter().map(|&x| x as i32).collect()))
            .collect()
    }
}

struct Enumeration {
    elements: Vec<WeylElement>,
    index: HashMap<WeylElement, usize>,
    words: Vec<Vec<usize>>,
}

/// The Weyl group of a Cartan datum, with memo caches for enumerations.
pub struct WeylGroup {
    datum: CartanDatum,
    fingerprint: u64,
    enumeration: OnceLock<Enumeration>,
    cosets: RwLock<HashMap<ParabolicSubset, Arc<Vec<WeylElement>>>>,
}

impl fmt::Debug for WeylGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WeylGroup")
            .field("datum", &self.datum.name())
            .finish()
    }
}

impl WeylGroup {
    pub fn new(datum: CartanDatum) -> Self {
        use std::hash::{Hash, Hasher};
        let mut h = std::collections::hash_map::DefaultHasher::new();
        let r = datum.rank();
        r.hash(&mut h);
        for i in 0..r {
            for j in 0..r {
                datum.entry(i, j).hash(&mut h);
            }
        }
        let fingerprint = h.finish();
        WeylGroup {
            datum,
            fingerprint,
            enumeration: OnceLock::new(),
            cosets: RwLock::new(HashMap::new()),
        }
    }

    pub fn from_type(label: &str) -> Result<Self> {
        Ok(WeylGroup::new(CartanDatum::from_type(label)?))
    }

    pub fn datum(&self) -> &CartanDatum {
        &self.datum
    }

    pub fn rank(&self) -> usize {
        self.datum.rank()
    }

    fn check(&self, w: &WeylElement) -> Result<()> {
        let r = self.rank();
        if w.images.len() != r * r || w.group != self.fingerprint {
            Err(Error::GroupMismatch)
        } else {
            Ok(())
        }
    }

    fn check_parabolic(&self, p: ParabolicSubset) -> Result<()> {
        if !p.is_subset_of(ParabolicSubset::full(self.rank())) {
            let bad = p
                .nodes()
                .into_iter()
                .find(|&n| n > self.rank())
                .unwrap_or(0);
            return Err(Error::IndexOutOfRange {
                index: bad,
                rank: self.rank(),
            });
        }
        Ok(())
    }

    fn build(&self, images: SmallVec<[i8; 16]>) -> WeylElement {
        let length = self.count_inversions(&images);
        WeylElement {
            images,
            length,
            group: self.fingerprint,
        }
    }

    fn count_inversions(&self, images: &[i8]) -> u32 {
        let r = self.rank();
        let mut count = 0;
        for beta in self.datum.positive_roots() {
            for i in 0..r {
                let c: i32 = (0..r).map(|j| beta.0[j] * images[j * r + i] as i32).sum();
                if c != 0 {
                    if c < 0 {
                        count += 1;
                    }
                    break;
                }
            }
        }
        count
    }

    pub fn identity(&self) -> WeylElement {
        let r = self.rank();
        let mut images = SmallVec::from_elem(0i8, r * r);
        for j in 0..r {
            images[j * r + j] = 1;
        }
        WeylElement {
            images,
            length: 0,
            group: self.fingerprint,
        }
    }

    /// The simple reflection `s_i`, 1-based.
    pub fn generator(&self, i: usize) -> Result<WeylElement> {
        self.datum.check_node(i)?;
        Ok(self.right_mul_gen(&self.identity(), i - 1))
    }

    /// `w s_i` for a 0-based node.
    pub(crate) fn right_mul_gen(&self, w: &WeylElement, i: usize) -> WeylElement {
        let r = self.rank();
        let mut images = w.images.clone();
        // (w s_i)(alpha_j) = w(alpha_j) - A[i][j] w(alpha_i)
        for j in 0..r {
            let a = self.datum.entry(i, j);
            if a == 0 {
                continue;
            }
            for c in 0..r {
                images[j * r + c] -= (a * w.images[i * r + c] as i32) as i8;
            }
        }
        let descent = self.has_right_descent0(w, i);
        let length = if descent { w.length - 1 } else { w.length + 1 };
        WeylElement {
            images,
            length,
            group: w.group,
        }
    }

    /// `s_i w` for a 0-based node.
    pub(crate) fn left_mul_gen(&self, w: &WeylElement, i: usize) -> WeylElement {
        let r = self.rank();
        let mut images = w.images.clone();
        for j in 0..r {
            let col: SmallVec<[i32; 8]> = (0..r).map(|c| images[j * r + c] as i32).collect();
            let p = self.datum.root_pairing(&col, i);
            images[j * r + i] = (col[i] - p) as i8;
        }
        self.build(images)
    }

    /// Product of generators, 1-based letters, applied left to right (`[1, 2]` is `s_1 s_2`).
    pub fn from_word(&self, word: &[usize]) -> Result<WeylElement> {
        let mut w = self.identity();
        for &i in word {
            self.datum.check_node(i)?;
            w = self.right_mul_gen(&w, i - 1);
        }
        Ok(w)
    }

    /// Parses `"121"`, `"s1 s2 s1"`, `"s1s2s1"`; `"e"` and `""` are the identity.
    pub fn parse_word(&self, text: &str) -> Result<WeylElement> {
        let word = parse_word_letters(text)?;
        self.from_word(&word)
    }

    /// Product `w v`.
    pub fn multiply(&self, w: &WeylElement, v: &WeylElement) -> Result<WeylElement> {
        self.check(w)?;
        self.check(v)?;
        let r = self.rank();
        let mut images: SmallVec<[i8; 16]> = SmallVec::from_elem(0, r * r);
        for j in 0..r {
            // (wv)(alpha_j) = sum_m v(alpha_j)_m w(alpha_m)
            for m in 0..r {
                let coef = v.images[j * r + m] as i32;
                if coef == 0 {
                    continue;
                }
                for c in 0..r {
                    images[j * r + c] += (coef * w.images[m * r + c] as i32) as i8;
                }
            }
        }
        Ok(self.build(images))
    }

    pub fn inverse(&self, w: &WeylElement) -> WeylElement {
        let word = self.reduced_word(w);
        let mut inv = self.identity();
        for &i in word.iter().rev() {
            inv = self.right_mul_gen(&inv, i - 1);
        }
        inv
    }

    /// Image of a root (simple-root coordinates) under `w`.
    pub fn apply_root(&self, w: &WeylElement, root: &Root) -> Root {
        let r = self.rank();
        Root(
            (0..r)
                .map(|c| (0..r).map(|j| root.0[j] * w.images[j * r + c] as i32).sum())
                .collect(),
        )
    }

    /// Image of a weight under `w`, via a reduced word.
    pub fn apply_weight(&self, w: &WeylElement, weight: &Weight) -> Weight {
        let word = self.reduced_word(w);
        let mut out = weight.clone();
        for &i in word.iter().rev() {
            out = self
                .datum
                .reflect(i, &out)
                .expect("letters are valid nodes");
        }
        out
    }

    /// `w(alpha_k)` as a weight (1-based `k`).
    pub fn image_of_simple_root_weight(&self, w: &WeylElement, k: usize) -> Weight {
        let r = self.rank();
        let col: SmallVec<[i32; 8]> = w.image(r, k - 1).iter().map(|&x| x as i32).collect();
        self.datum.root_coords_to_weight(&col)
    }

    pub fn length(&self, w: &WeylElement) -> usize {
        w.length()
    }

    fn has_right_descent0(&self, w: &WeylElement, i: usize) -> bool {
        let r = self.rank();
        w.image(r, i).iter().any(|&x| x < 0)
    }

    /// `l(w s_k) < l(w)`, i.e. `w(alpha_k) < 0`.
    pub fn has_right_descent(&self, w: &WeylElement, k: usize) -> bool {
        self.has_right_descent0(w, k - 1)
    }

    pub fn has_left_descent(&self, w: &WeylElement, k: usize) -> bool {
        self.left_mul_gen(w, k - 1).length < w.length
    }

    /// Lexicographically minimal reduced word, 1-based letters.
    pub fn reduced_word(&self, w: &WeylElement) -> Vec<usize> {
        if let Some(e) = self.enumeration.get() {
            if let Some(&idx) = e.index.get(w) {
                return e.words[idx].clone();
            }
        }
        let mut word = Vec::with_capacity(w.length());
        let mut cur = w.clone();
        while cur.length > 0 {
            let i = (0..self.rank())
                .find(|&i| self.left_mul_gen(&cur, i).length < cur.length)
                .expect("nonidentity element has a left descent");
            word.push(i + 1);
            cur = self.left_mul_gen(&cur, i);
        }
        word
    }

    /// Digit form (`"121"`), `"e"` for the identity; ranks above 9 use `s10 s2`.
    pub fn format_word(&self, w: &WeylElement) -> String {
        format_letters(&self.reduced_word(w), self.rank())
    }

    fn enumeration(&self) -> &Enumeration {
        self.enumeration.get_or_init(|| {
            let r = self.rank();
            let mut levels: Vec<Vec<WeylElement>> = vec![vec![self.identity()]];
            let mut seen: std::collections::HashSet<WeylElement> =
                levels[0].iter().cloned().collect();
            loop {
                let mut next = Vec::new();
                for w in levels.last().unwrap() {
                    for i in 0..r {
                        if !self.has_right_descent0(w, i) {
                            let v = self.right_mul_gen(w, i);
                            if seen.insert(v.clone()) {
                                next.push(v);
                            }
                        }
                    }
                }
                if next.is_empty() {
                    break;
                }
                levels.push(next);
            }
            let mut elements = Vec::new();
            let mut words = Vec::new();
            for level in levels {
                let mut tagged: Vec<(Vec<usize>, WeylElement)> = level
                    .into_iter()
                    .map(|w| (self.reduced_word(&w), w))
                    .collect();
                tagged.sort();
                for (word, w) in tagged {
                    words.push(word);
                    elements.push(w);
                }
            }
            let index = elements
                .iter()
                .cloned()
                .enumerate()
                .map(|(i, w)| (w, i))
                .collect();
            Enumeration {
                elements,
                index,
                words,
            }
        })
    }

    /// All of `W`, sorted by length then lexicographically minimal reduced word.
    pub fn elements(&self) -> &[WeylElement] {
        &self.enumeration().elements
    }

    pub fn order(&self) -> usize {
        self.elements().len()
    }

    /// Position of `w` in [`Self::elements`].
    pub fn index_of(&self, w: &WeylElement) -> Option<usize> {
        self.enumeration().index.get(w).copied()
    }

    /// Bruhat order by the descent recursion: for a right descent `s` of `w`,
    /// `u <= w` iff `us <= ws` when `s` is a descent of `u`, else `u <= ws`.
    /// Each step has a single recursive call, so the recursion is a chain of
    /// length at most `l(w)`.
    pub fn bruhat_leq(&self, u: &WeylElement, w: &WeylElement) -> bool {
        let r = self.rank();
        let mut u = u.clone();
        let mut w = w.clone();
        loop {
            if u.length > w.length {
                return false;
            }
            if u.length == w.length {
                return u == w;
            }
            if u.length == 0 {
                return true;
            }
            let s = (0..r)
                .find(|&i| self.has_right_descent0(&w, i))
                .expect("w is not the identity");
            if self.has_right_descent0(&u, s) {
                u = self.right_mul_gen(&u, s);
            }
            w = self.right_mul_gen(&w, s);
        }
    }

    /// Whether `w` is the minimal length representative of `w W_P`.
    pub fn is_min_rep(&self, w: &WeylElement, p: ParabolicSubset) -> bool {
        p.nodes()
            .into_iter()
            .all(|k| k <= self.rank() && !self.has_right_descent(w, k))
    }

    /// The unique `u` in `W^P` with `u W_P = w W_P`.
    pub fn min_coset_rep(&self, w: &WeylElement, p: ParabolicSubset) -> Result<WeylElement> {
        self.check(w)?;
        self.check_parabolic(p)?;
        let nodes: Vec<usize> = p.nodes().into_iter().map(|n| n - 1).collect();
        let mut cur = w.clone();
        while let Some(&i) = nodes.iter().find(|&&i| self.has_right_descent0(&cur, i)) {
            cur = self.right_mul_gen(&cur, i);
        }
        Ok(cur)
    }

    /// `W^P`, sorted by length then lexicographically minimal reduced word.
    pub fn enumerate_wp(&self, p: ParabolicSubset) -> Result<Arc<Vec<WeylElement>>> {
        self.check_parabolic(p)?;
        if let Some(list) = self.cosets.read().unwrap().get(&p) {
            return Ok(list.clone());
        }
        let list: Arc<Vec<WeylElement>> = Arc::new(
            self.elements()
                .iter()
                .filter(|w| self.is_min_rep(w, p))
                .cloned()
                .collect(),
        );
        self.cosets.write().unwrap().insert(p, list.clone());
        Ok(list)
    }

    /// `w_k`: `w s_k` if that is shorter, else `w`.
    pub fn hecke_down(&self, w: &WeylElement, k: usize) -> Result<WeylElement> {
        self.check(w)?;
        self.datum.check_node(k)?;
        Ok(if self.has_right_descent(w, k) {
            self.right_mul_gen(w, k - 1)
        } else {
            w.clone()
        })
    }

    /// `w^k`: `w s_k` if that is longer, else `w`.
    pub fn hecke_up(&self, w: &WeylElement, k: usize) -> Result<WeylElement> {
        self.check(w)?;
        self.datum.check_node(k)?;
        Ok(if self.has_right_descent(w, k) {
            w.clone()
        } else {
            self.right_mul_gen(w, k - 1)
        })
    }

    fn require_outside(&self, p: ParabolicSubset, k: usize) -> Result<()> {
        self.check_parabolic(p)?;
        self.datum.check_node(k)?;
        if p.contains(k) {
            return Err(Error::NodeInParabolic {
                k,
                parabolic: p.to_string(),
            });
        }
        Ok(())
    }

    /// `Delta_P` has no node adjacent to `alpha_k`.
    pub fn is_k_free(&self, p: ParabolicSubset, k: usize) -> Result<bool> {
        self.require_outside(p, k)?;
        Ok(p.nodes()
            .into_iter()
            .all(|i| self.datum.entry(i - 1, k - 1) == 0))
    }

    /// Membership of `(P, alpha_k)` in the admissible class: `alpha_k` long, or the
    /// component of `alpha_k` in `Delta_P + alpha_k` simply laced.
    pub fn in_class_p(&self, p: ParabolicSubset, k: usize) -> Result<bool> {
        self.require_outside(p, k)?;
        if self.datum.is_long(k)? {
            return Ok(true);
        }
        let mask = p.with(k).bits();
        let comp = self.datum.component_within(k - 1, mask);
        Ok(self.datum.simply_laced_on(comp))
    }

    /// `Delta_{P_k}`: `Delta_P` minus the nodes adjacent to `alpha_k`.
    pub fn build_pk(&self, p: ParabolicSubset, k: usize) -> Result<ParabolicSubset> {
        self.require_outside(p, k)?;
        let kept: Vec<usize> = p
            .nodes()
            .into_iter()
            .filter(|&i| self.datum.entry(i - 1, k - 1) == 0)
            .collect();
        Ok(ParabolicSubset::from_nodes(&kept))
    }

    /// `Delta_{P(k)} = Delta_{P_k} + alpha_k`.
    pub fn build_p_of_k(&self, p: ParabolicSubset, k: usize) -> Result<ParabolicSubset> {
        Ok(self.build_pk(p, k)?.with(k))
    }

    /// Longest element `w_P` of `W_P`.
    pub fn longest_element(&self, p: ParabolicSubset) -> Result<WeylElement> {
        self.check_parabolic(p)?;
        let nodes: Vec<usize> = p.nodes().into_iter().map(|n| n - 1).collect();
        let mut cur = self.identity();
        while let Some(&i) = nodes.iter().find(|&&i| !self.has_right_descent0(&cur, i)) {
            cur = self.right_mul_gen(&cur, i);
        }
        Ok(cur)
    }

    /// The longest element of `W`.
    pub fn w0(&self) -> WeylElement {
        self.longest_element(ParabolicSubset::full(self.rank()))
            .expect("full parabolic is valid")
    }

    /// For `u` in `W^Q` and `P` inside `Q`: the index in `W^P` of the preimage of
    /// the Schubert variety `X(u)` under `G/P -> G/Q`, i.e. the Bruhat-maximal
    /// element of `W^P` in the coset `u W_Q`.
    pub fn schubert_preimage(
        &self,
        u: &WeylElement,
        q: ParabolicSubset,
        p: ParabolicSubset,
    ) -> Result<WeylElement> {
        self.check(u)?;
        self.check_parabolic(q)?;
        self.check_parabolic(p)?;
        if !p.is_subset_of(q) {
            return Err(Error::NotContained {
                inner: p.to_string(),
                outer: q.to_string(),
            });
        }
        if !self.is_min_rep(u, q) {
            return Err(Error::NotMinimalRepresentative {
                element: self.format_word(u),
                parabolic: q.to_string(),
            });
        }
        let top = self.multiply(u, &self.longest_element(q)?)?;
        self.min_coset_rep(&top, p)
    }
}

/// Parses word letters (1-based) from `"121"`, `"s1 s2"`, `"s_1s_2"`, `"e"`.
pub fn parse_word_letters(text: &str) -> Result<Vec<usize>> {
    let t = text.trim();
    if t.is_empty() || t == "e" || t == "id" {
        return Ok(Vec::new());
    }
    let bad = || Error::Parse(format!("bad Weyl word `{text}`"));
    if t.chars().all(|c| c.is_ascii_digit()) {
        return t
            .chars()
            .map(|c| {
                let d = c.to_digit(10).unwrap() as usize;
                if d == 0 {
                    Err(bad())
                } else {
                    Ok(d)
                }
            })
            .collect();
    }
    let mut out = Vec::new();
    for tok in t.split(|c: char| c == 's' || c == '_' || c == '*' || c.is_whitespace()) {
        if tok.is_empty() {
            continue;
        }
        let n: usize = tok.parse().map_err(|_| bad())?;
        if n == 0 {
            return Err(bad());
        }
        out.push(n);
    }
    if out.is_empty() {
        return Err(bad());
    }
    Ok(out)
}

pub(crate) fn format_letters(word: &[usize], rank: usize) -> String {
    if word.is_empty() {
        "e".to_string()
    } else if rank <= 9 {
        word.iter().map(|d| d.to_string()).collect()
    } else {
        word.iter()
            .map(|d| format!("s{d}"))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a2() -> WeylGroup {
        WeylGroup::from_type("A2").unwrap()
    }

    fn el(g: &WeylGroup, word: &str) -> WeylElement {
        g.parse_word(word).unwrap()
    }

    fn words(g: &WeylGroup, list: &[WeylElement]) -> Vec<String> {
        list.iter().map(|w| g.format_word(w)).collect()
    }

    #[test]
    fn multiplication() {
        let g = a2();
        let s1 = el(&g, "1");
        assert!(g.multiply(&s1, &s1).unwrap().is_identity());
        let s1s2 = g.multiply(&s1, &el(&g, "2")).unwrap();
        let w0 = g.multiply(&s1s2, &s1).unwrap();
        assert_eq!(w0, g.w0());
        assert_eq!(g.format_word(&w0), "121");
        assert!(g.multiply(&w0, &w0).unwrap().is_identity());
        let b2 = WeylGroup::from_type("B2").unwrap();
        assert_eq!(
            g.multiply(&s1, &b2.parse_word("12").unwrap()),
            Err(Error::GroupMismatch)
        );
        let a3 = WeylGroup::from_type("A3").unwrap();
        assert_eq!(g.multiply(&s1, &a3.identity()), Err(Error::GroupMismatch));
    }

    #[test]
    fn word_parsing() {
        let g = a2();
        assert_eq!(el(&g, "121"), el(&g, "s1 s2 s1"));
        assert_eq!(el(&g, "s_1s_2s_1"), el(&g, "212"));
        assert!(el(&g, "e").is_identity());
        assert!(el(&g, "").is_identity());
        assert!(g.parse_word("13").is_err());
        assert!(g.parse_word("1x").is_err());
        assert_eq!(g.format_word(&el(&g, "212")), "121");
        let c2 = WeylGroup::from_type("C2").unwrap();
        assert_eq!(c2.format_word(&c2.w0()), "1212");
    }

    #[test]
    fn length_matches_inversions() {
        let g = WeylGroup::from_type("B3").unwrap();
        for w in g.elements() {
            assert_eq!(w.length(), g.reduced_word(w).len());
            assert_eq!(w.length() as u32, g.count_inversions(&w.images));
            assert_eq!(g.inverse(w).length(), w.length());
            assert!(g.multiply(w, &g.inverse(w)).unwrap().is_identity());
        }
        assert_eq!(g.order(), 48);
        assert_eq!(g.w0().length(), 9);
    }

    #[test]
    fn group_orders() {
        for (label, order) in [
            ("A1", 2),
            ("A2", 6),
            ("A3", 24),
            ("B2", 8),
            ("C3", 48),
            ("G2", 12),
            ("D4", 192),
        ] {
            assert_eq!(
                WeylGroup::from_type(label).unwrap().order(),
                order,
                "{label}"
            );
        }
    }

    #[test]
    fn bruhat_examples() {
        let g = a2();
        assert!(g.bruhat_leq(&el(&g, "1"), &el(&g, "21")));
        assert!(!g.bruhat_leq(&el(&g, "12"), &el(&g, "21")));
        assert!(!g.bruhat_leq(&el(&g, "21"), &el(&g, "12")));
        for w in g.elements() {
            assert!(g.bruhat_leq(&g.identity(), w));
            assert!(g.bruhat_leq(w, &g.w0()));
        }
    }

    /// Subword property as an independent oracle for the recursion.
    fn subword_leq(g: &WeylGroup, u: &WeylElement, w: &WeylElement) -> bool {
        let word = g.reduced_word(w);
        let n = word.len();
        (0u32..1 << n).any(|mask| {
            let sub: Vec<usize> = (0..n)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| word[i])
                .collect();
            g.from_word(&sub).unwrap() == *u
        })
    }

    #[test]
    fn bruhat_matches_subword_property() {
        for label in ["A3", "B3", "G2"] {
            let g = WeylGroup::from_type(label).unwrap();
            let els = g.elements();
            for u in els {
                for w in els {
                    assert_eq!(g.bruhat_leq(u, w), subword_leq(&g, u, w), "{label}");
                }
            }
        }
    }

    #[test]
    fn bruhat_is_partial_order() {
        let g = WeylGroup::from_type("C3").unwrap();
        let els = g.elements();
        for a in els {
            assert!(g.bruhat_leq(a, a));
            for b in els {
                if a != b && g.bruhat_leq(a, b) {
                    assert!(!g.bruhat_leq(b, a));
                    for c in els {
                        if g.bruhat_leq(b, c) {
                            assert!(g.bruhat_leq(a, c));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn cosets() {
        let g = a2();
        let p2 = ParabolicSubset::from_nodes(&[2]);
        assert_eq!(
            g.format_word(&g.min_coset_rep(&el(&g, "12"), p2).unwrap()),
            "1"
        );
        assert_eq!(
            g.format_word(&g.min_coset_rep(&el(&g, "21"), p2).unwrap()),
            "21"
        );
        assert!(g.min_coset_rep(&g.identity(), p2).unwrap().is_identity());
        assert_eq!(
            words(&g, &g.enumerate_wp(p2).unwrap()),
            vec!["e", "1", "21"]
        );
        assert_eq!(g.enumerate_wp(ParabolicSubset::BOREL).unwrap().len(), 6);
        let a1 = WeylGroup::from_type("A1").unwrap();
        assert_eq!(
            words(&a1, &a1.enumerate_wp(ParabolicSubset::BOREL).unwrap()),
            vec!["e", "1"]
        );
    }

    #[test]
    fn coset_sizes_and_idempotence() {
        let g = WeylGroup::from_type("B3").unwrap();
        for bits in 0..8u64 {
            let p = ParabolicSubset::from_bits(bits);
            let wp = g.enumerate_wp(p).unwrap();
            let wpl = g.longest_element(p).unwrap();
            let sub_order = g
                .elements()
                .iter()
                .filter(|w| g.min_coset_rep(w, p).unwrap().is_identity())
                .count();
            assert_eq!(wp.len() * sub_order, g.order());
            for w in g.elements() {
                let m = g.min_coset_rep(w, p).unwrap();
                assert_eq!(g.min_coset_rep(&m, p).unwrap(), m);
                assert!(m.length() <= w.length());
            }
            // l(u v) = l(u) + l(v) for u in W^P, v in W_P
            for u in wp.iter() {
                let uv = g.multiply(u, &wpl).unwrap();
                assert_eq!(uv.length(), u.length() + wpl.length());
            }
        }
    }

    #[test]
    fn hecke_operations() {
        let g = a2();
        assert_eq!(
            g.format_word(&g.hecke_down(&el(&g, "121"), 1).unwrap()),
            "12"
        );
        assert_eq!(g.format_word(&g.hecke_down(&el(&g, "2"), 1).unwrap()), "2");
        assert!(g.hecke_down(&g.identity(), 2).unwrap().is_identity());
        assert_eq!(g.format_word(&g.hecke_up(&el(&g, "2"), 1).unwrap()), "21");
        assert_eq!(g.format_word(&g.hecke_up(&el(&g, "1"), 1).unwrap()), "1");
        assert_eq!(g.hecke_up(&g.w0(), 2).unwrap(), g.w0());
        for w in g.elements() {
            for k in 1..=2 {
                let d = g.hecke_down(w, k).unwrap();
                let u = g.hecke_up(w, k).unwrap();
                assert_eq!(g.hecke_down(&d, k).unwrap(), d);
                assert_eq!(g.hecke_up(&u, k).unwrap(), u);
                assert!(!g.has_right_descent(&d, k));
                assert!(g.has_right_descent(&u, k));
                let back = g.hecke_up(&d, k).unwrap();
                assert!(back == *w || back == g.right_mul_gen(&d, k - 1));
            }
        }
    }

    #[test]
    fn hecke_preserves_min_reps_for_k_free() {
        for label in ["A3", "B3", "C3"] {
            let g = WeylGroup::from_type(label).unwrap();
            for bits in 0..8u64 {
                let p = ParabolicSubset::from_bits(bits);
                for k in 1..=3 {
                    if p.contains(k) || !g.is_k_free(p, k).unwrap() {
                        continue;
                    }
                    for w in g.enumerate_wp(p).unwrap().iter() {
                        assert!(g.is_min_rep(&g.hecke_down(w, k).unwrap(), p));
                        assert!(g.is_min_rep(&g.hecke_up(w, k).unwrap(), p));
                    }
                }
            }
        }
        // negative control: Delta_P = {alpha_2} is not 1-free
        let g = a2();
        let p2 = ParabolicSubset::from_nodes(&[2]);
        let w = el(&g, "21");
        assert!(g.is_min_rep(&w, p2));
        let w1 = g.hecke_down(&w, 1).unwrap();
        assert_eq!(g.format_word(&w1), "2");
        assert!(!g.is_min_rep(&w1, p2));
    }

    #[test]
    fn k_free_and_class_p() {
        let g = a2();
        let p2 = ParabolicSubset::from_nodes(&[2]);
        assert!(!g.is_k_free(p2, 1).unwrap());
        assert!(g.is_k_free(ParabolicSubset::BOREL, 1).unwrap());
        assert!(matches!(
            g.is_k_free(p2, 2),
            Err(Error::NodeInParabolic { k: 2, .. })
        ));
        let a3 = WeylGroup::from_type("A3").unwrap();
        assert!(a3.is_k_free(ParabolicSubset::from_nodes(&[3]), 1).unwrap());

        let b2 = WeylGroup::from_type("B2").unwrap();
        assert!(!b2.in_class_p(ParabolicSubset::from_nodes(&[1]), 2).unwrap());
        assert!(b2.in_class_p(ParabolicSubset::from_nodes(&[2]), 1).unwrap());
        let c2 = WeylGroup::from_type("C2").unwrap();
        assert!(!c2.in_class_p(ParabolicSubset::from_nodes(&[2]), 1).unwrap());
        for label in ["A3", "D4", "B3", "C3", "G2", "F4"] {
            let g = WeylGroup::from_type(label).unwrap();
            let simply_laced = label.starts_with('A') || label.starts_with('D');
            let r = g.rank();
            for bits in 0..(1u64 << r) {
                let p = ParabolicSubset::from_bits(bits);
                for k in 1..=r {
                    if p.contains(k) {
                        continue;
                    }
                    if simply_laced || p.is_empty() {
                        assert!(g.in_class_p(p, k).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn parabolic_constructions() {
        let g = a2();
        let p2 = ParabolicSubset::from_nodes(&[2]);
        assert_eq!(g.build_pk(p2, 1).unwrap(), ParabolicSubset::BOREL);
        assert_eq!(
            g.build_p_of_k(p2, 1).unwrap(),
            ParabolicSubset::from_nodes(&[1])
        );
        assert_eq!(
            g.build_p_of_k(ParabolicSubset::BOREL, 2).unwrap(),
            ParabolicSubset::from_nodes(&[2])
        );
        let a3 = WeylGroup::from_type("A3").unwrap();
        let p3 = ParabolicSubset::from_nodes(&[3]);
        assert_eq!(a3.build_pk(p3, 1).unwrap(), p3);
        assert!(a3.build_pk(p3, 3).is_err());
    }

    #[test]
    fn longest_elements() {
        let g = a2();
        assert_eq!(
            g.format_word(&g.longest_element(ParabolicSubset::full(2)).unwrap()),
            "121"
        );
        assert_eq!(
            g.format_word(
                &g.longest_element(ParabolicSubset::from_nodes(&[2]))
                    .unwrap()
            ),
            "2"
        );
        assert!(g
            .longest_element(ParabolicSubset::BOREL)
            .unwrap()
            .is_identity());
        let b3 = WeylGroup::from_type("B3").unwrap();
        for bits in 0..8u64 {
            let wp = b3
                .longest_element(ParabolicSubset::from_bits(bits))
                .unwrap();
            assert!(b3.multiply(&wp, &wp).unwrap().is_identity());
        }
    }

    #[test]
    fn schubert_preimages() {
        let g = a2();
        let q = ParabolicSubset::from_nodes(&[2]);
        let b = ParabolicSubset::BOREL;
        assert_eq!(
            g.format_word(&g.schubert_preimage(&el(&g, "1"), q, b).unwrap()),
            "12"
        );
        assert_eq!(
            g.format_word(&g.schubert_preimage(&g.identity(), q, b).unwrap()),
            "2"
        );
        assert_eq!(
            g.schubert_preimage(&el(&g, "21"), q, q).unwrap(),
            el(&g, "21")
        );
        assert!(matches!(
            g.schubert_preimage(&el(&g, "1"), b, q),
            Err(Error::NotContained { .. })
        ));
        // Bruhat-maximal element of the fibre, with l = l(u) + l(w_Q) - l(w_P)
        let b3 = WeylGroup::from_type("B3").unwrap();
        for qb in 0..8u64 {
            let q = ParabolicSubset::from_bits(qb);
            for pb in 0..8u64 {
                let p = ParabolicSubset::from_bits(pb);
                if !p.is_subset_of(q) {
                    continue;
                }
                let lq = b3.longest_element(q).unwrap().length();
                let lp = b3.longest_element(p).unwrap().length();
                for u in b3.enumerate_wp(q).unwrap().iter() {
                    let hat = b3.schubert_preimage(u, q, p).unwrap();
                    assert_eq!(hat.length(), u.length() + lq - lp);
                    let fibre: Vec<_> = b3
                        .enumerate_wp(p)
                        .unwrap()
                        .iter()
                        .filter(|v| b3.min_coset_rep(v, q).unwrap() == *u)
                        .cloned()
                        .collect();
                    assert!(fibre.contains(&hat));
                    assert!(fibre.iter().all(|v| b3.bruhat_leq(v, &hat)));
                }
            }
        }
    }

    #[test]
    fn weights_and_roots() {
        let g = a2();
        let s1 = el(&g, "1");
        let d = g.datum();
        let a1 = d.simple_root(1).unwrap();
        assert_eq!(g.apply_root(&s1, &a1), a1.neg());
        let w = el(&g, "12");
        for beta in d.positive_roots() {
            assert_eq!(
                d.root_to_weight(&g.apply_root(&w, beta)),
                g.apply_weight(&w, &d.root_to_weight(beta))
            );
        }
    }
}
