//! Exact arithmetic in the group ring `Z[X]` of the weight lattice.
//!
//! A [`RingElt`] is a finite sum `sum_lambda c_lambda e^lambda` with exponents in
//! fundamental-weight coordinates. Terms are kept sorted by exponent
//! (lexicographic, which is a group order on `Z^r`) with no zero coefficients.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::rootsys::{format_root_combination, CartanDatum, Coords, Weight};
use crate::weyl::{WeylElement, WeylGroup};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingElt {
    rank: usize,
    terms: Vec<(Weight, i64)>,
}

impl RingElt {
    pub fn zero(rank: usize) -> Self {
        RingElt {
            rank,
            terms: Vec::new(),
        }
    }

    pub fn one(rank: usize) -> Self {
        RingElt::monomial(Weight::zero(rank), 1)
    }

    pub fn constant(rank: usize, c: i64) -> Self {
        RingElt::monomial(Weight::zero(rank), c)
    }

    /// `c e^lambda`.
    pub fn monomial(exponent: Weight, c: i64) -> Self {
        let rank = exponent.rank();
        if c == 0 {
            RingElt::zero(rank)
        } else {
            RingElt {
                rank,
                terms: vec![(exponent, c)],
            }
        }
    }

    /// `e^lambda`.
    pub fn exp(exponent: Weight) -> Self {
        RingElt::monomial(exponent, 1)
    }

    /// Collects terms, merging equal exponents and dropping zeros.
    pub fn from_terms(rank: usize, terms: impl IntoIterator<Item = (Weight, i64)>) -> Result<Self> {
        let mut v: Vec<(Weight, i64)> = Vec::new();
        for (w, c) in terms {
            if w.rank() != rank {
                return Err(Error::RankMismatch {
                    expected: rank,
                    found: w.rank(),
                });
            }
            v.push((w, c));
        }
        Ok(RingElt {
            rank,
            terms: normalize(v),
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].1 == 1 && self.terms[0].0.is_zero()
    }

    /// Terms sorted by exponent.
    pub fn terms(&self) -> &[(Weight, i64)] {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, exponent: &Weight) -> i64 {
        self.terms
            .binary_search_by(|(w, _)| w.cmp(exponent))
            .map(|i| self.terms[i].1)
            .unwrap_or(0)
    }

    fn check_rank(&self, other: &RingElt) -> Result<()> {
        if self.rank != other.rank {
            Err(Error::RankMismatch {
                expected: self.rank,
                found: other.rank,
            })
        } else {
            Ok(())
        }
    }

    pub fn checked_add(&self, other: &RingElt) -> Result<RingElt> {
        self.check_rank(other)?;
        Ok(RingElt {
            rank: self.rank,
            terms: merge(&self.terms, &other.terms, 1),
        })
    }

    pub fn checked_sub(&self, other: &RingElt) -> Result<RingElt> {
        self.check_rank(other)?;
        Ok(RingElt {
            rank: self.rank,
            terms: merge(&self.terms, &other.terms, -1),
        })
    }

    pub fn checked_mul(&self, other: &RingElt) -> Result<RingElt> {
        self.check_rank(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(RingElt::zero(self.rank));
        }
        let mut v = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                v.push((a.add(b), ca * cb));
            }
        }
        Ok(RingElt {
            rank: self.rank,
            terms: normalize(v),
        })
    }

    pub fn scale(&self, c: i64) -> RingElt {
        if c == 0 {
            return RingElt::zero(self.rank);
        }
        RingElt {
            rank: self.rank,
            terms: self.terms.iter().map(|(w, x)| (w.clone(), x * c)).collect(),
        }
    }

    /// Multiplication by the monomial `e^lambda`.
    pub fn shift(&self, lambda: &Weight) -> RingElt {
        RingElt {
            rank: self.rank,
            terms: self
                .terms
                .iter()
                .map(|(w, x)| (w.add(lambda), *x))
                .collect(),
        }
    }

    /// `self - c e^shift * b`, merged in one pass.
    fn sub_shifted(&self, b: &RingElt, shift: &Weight, c: i64) -> RingElt {
        let scaled: Vec<(Weight, i64)> =
            b.terms.iter().map(|(w, x)| (w.add(shift), x * c)).collect();
        RingElt {
            rank: self.rank,
            terms: merge(&self.terms, &scaled, -1),
        }
    }

    /// The unique `q` with `self = b q`, or `NotDivisible`.
    ///
    /// Long division by leading terms. Quotient terms are produced in
    /// decreasing order and must stay above `trail(self) - trail(b)`, which
    /// bounds the loop when no exact quotient exists.
    pub fn exact_divide(&self, b: &RingElt) -> Result<RingElt> {
        self.check_rank(b)?;
        let (Some((lead_b, lc_b)), Some((trail_b, _))) = (b.terms.last(), b.terms.first()) else {
            return Err(Error::NotDivisible);
        };
        let Some((trail_a, _)) = self.terms.first() else {
            return Ok(RingElt::zero(self.rank));
        };
        let floor = trail_a.sub(trail_b);
        let mut rem = self.clone();
        let mut quotient = Vec::new();
        while let Some((lead_r, lc_r)) = rem.terms.last() {
            let t = lead_r.sub(lead_b);
            if t < floor || lc_r % lc_b != 0 {
                return Err(Error::NotDivisible);
            }
            let c = lc_r / lc_b;
            rem = rem.sub_shifted(b, &t, c);
            quotient.push((t, c));
        }
        quotient.reverse();
        Ok(RingElt {
            rank: self.rank,
            terms: quotient,
        })
    }

    /// The ring map `e^lambda -> 1`.
    pub fn specialize_to_one(&self) -> i64 {
        self.terms.iter().map(|(_, c)| c).sum()
    }

    /// The automorphism `e^lambda -> e^{w lambda}`.
    pub fn weyl_act(&self, group: &WeylGroup, w: &WeylElement) -> RingElt {
        if w.is_identity() {
            return self.clone();
        }
        let terms = self
            .terms
            .iter()
            .map(|(l, c)| (group.apply_weight(w, l), *c))
            .collect();
        RingElt {
            rank: self.rank,
            terms: normalize(terms),
        }
    }

    /// Coefficients as a polynomial in `y_i = e^{-alpha_i} - 1`, keyed by exponent
    /// vectors of the `y_i`. Errors unless every exponent is a nonpositive
    /// combination of simple roots.
    pub fn rewrite_in_shifted_basis(&self, datum: &CartanDatum) -> Result<BTreeMap<Vec<u32>, i64>> {
        let r = self.rank;
        let mut out: BTreeMap<Vec<u32>, i64> = BTreeMap::new();
        for (lambda, c) in &self.terms {
            let coords = datum
                .weight_to_root_coords(lambda)
                .ok_or(Error::NotInSubring)?;
            if coords.iter().any(|&x| x > 0) {
                return Err(Error::NotInSubring);
            }
            // prod_i (1 + y_i)^{n_i} with n_i = -coords[i]
            let mut poly: BTreeMap<Vec<u32>, i64> = BTreeMap::new();
            poly.insert(vec![0; r], *c);
            for (i, &x) in coords.iter().enumerate() {
                let n = (-x) as u32;
                if n == 0 {
                    continue;
                }
                let mut next = BTreeMap::new();
                for (mono, coef) in &poly {
                    for j in 0..=n {
                        let mut m = mono.clone();
                        m[i] += j;
                        *next.entry(m).or_insert(0) += coef * binomial(n, j);
                    }
                }
                poly = next;
            }
            for (m, coef) in poly {
                *out.entry(m).or_insert(0) += coef;
            }
        }
        out.retain(|_, c| *c != 0);
        Ok(out)
    }

    /// Exponents in simple-root coordinates, when all lie in the root lattice.
    fn root_terms(&self, datum: &CartanDatum) -> Option<Vec<(Coords, i64)>> {
        self.terms
            .iter()
            .map(|(w, c)| datum.weight_to_root_coords(w).map(|rc| (rc, *c)))
            .collect()
    }

    /// Human-readable form such as `1 - e^{-a1} + e^{-a1-a2}`.
    pub fn to_text(&self, datum: &CartanDatum) -> String {
        self.render(datum, Style::Text)
    }

    /// LaTeX form such as `1-e^{-\alpha_1}`.
    pub fn to_latex(&self, datum: &CartanDatum) -> String {
        self.render(datum, Style::Latex)
    }

    fn render(&self, datum: &CartanDatum, style: Style) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let (mut terms, symbol) = match self.root_terms(datum) {
            Some(t) => (t, style.root_symbol()),
            None => (
                self.terms.iter().map(|(w, c)| (w.0.clone(), *c)).collect(),
                style.weight_symbol(),
            ),
        };
        terms.sort_by(|(a, _), (b, _)| display_order(a, b));
        let mut out = String::new();
        for (i, (exp, c)) in terms.iter().enumerate() {
            let sep = match style {
                Style::Text => (" + ", " - "),
                Style::Latex => ("+", "-"),
            };
            if i == 0 {
                if *c < 0 {
                    out.push('-');
                }
            } else {
                out.push_str(if *c < 0 { sep.1 } else { sep.0 });
            }
            let a = c.abs();
            let is_one = exp.iter().all(|&x| x == 0);
            if is_one {
                out.push_str(&a.to_string());
            } else {
                if a != 1 {
                    out.push_str(&a.to_string());
                }
                out.push_str("e^{");
                out.push_str(&format_root_combination(exp, symbol));
                out.push('}');
            }
        }
        out
    }

    /// Canonical serialization: `[[exponent, coefficient], ...]` with exponents in
    /// simple-root coordinates, sorted lexicographically. Exponents outside the
    /// root lattice fall back to `{"omega": [...]}` in fundamental-weight coordinates.
    pub fn to_json(&self, datum: &CartanDatum) -> Value {
        match self.root_terms(datum) {
            Some(mut t) => {
                t.sort();
                Value::Array(t.into_iter().map(|(e, c)| json!([e.to_vec(), c])).collect())
            }
            None => {
                let t: Vec<Value> = self
                    .terms
                    .iter()
                    .map(|(w, c)| json!([w.0.to_vec(), c]))
                    .collect();
                json!({ "omega": t })
            }
        }
    }

    pub fn from_json(value: &Value, datum: &CartanDatum) -> Result<RingElt> {
        let bad = || Error::Parse(format!("bad ring element JSON `{value}`"));
        let (list, omega) = match value {
            Value::Array(a) => (a, false),
            Value::Object(o) => (
                o.get("omega").and_then(Value::as_array).ok_or_else(bad)?,
                true,
            ),
            _ => return Err(bad()),
        };
        let r = datum.rank();
        let mut terms = Vec::new();
        for pair in list {
            let pair = pair.as_array().filter(|p| p.len() == 2).ok_or_else(bad)?;
            let coords: Vec<i32> = pair[0]
                .as_array()
                .ok_or_else(bad)?
                .iter()
                .map(|x| x.as_i64().map(|v| v as i32).ok_or_else(bad))
                .collect::<Result<_>>()?;
            if coords.len() != r {
                return Err(Error::RankMismatch {
                    expected: r,
                    found: coords.len(),
                });
            }
            let c = pair[1].as_i64().ok_or_else(bad)?;
            let w = if omega {
                Weight::from_slice(&coords)
            } else {
                datum.root_coords_to_weight(&coords)
            };
            terms.push((w, c));
        }
        RingElt::from_terms(r, terms)
    }

    /// Parses expressions such as `(1-e^{-a1})e^{-a2}`, `1 + e^{-2α_1-α_2}` or
    /// `(1-e^{-\alpha_1-\alpha_2})`. Exponents use simple roots (`a`, `α`,
    /// `\alpha`, `alpha`) or fundamental weights (`w`, `ω`, `\omega`, `omega`).
    pub fn parse(text: &str, datum: &CartanDatum) -> Result<RingElt> {
        let mut p = Parser {
            chars: text.chars().filter(|c| !c.is_whitespace()).collect(),
            pos: 0,
            datum,
        };
        let e = p.expr()?;
        if p.pos != p.chars.len() {
            return Err(p.error("trailing input"));
        }
        Ok(e)
    }
}

fn binomial(n: u32, k: u32) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

/// Closest-to-constant exponents first, then lexicographic.
fn display_order(a: &[i32], b: &[i32]) -> Ordering {
    let ha: i32 = a.iter().sum();
    let hb: i32 = b.iter().sum();
    hb.cmp(&ha).then_with(|| a.cmp(b))
}

fn normalize(mut v: Vec<(Weight, i64)>) -> Vec<(Weight, i64)> {
    v.sort_unstable_by(|a, b| a.0.cmp(&b.0));
    let mut out: Vec<(Weight, i64)> = Vec::with_capacity(v.len());
    for (w, c) in v {
        match out.last_mut() {
            Some(last) if last.0 == w => last.1 += c,
            _ => out.push((w, c)),
        }
    }
    out.retain(|(_, c)| *c != 0);
    out
}

/// Merges two sorted term lists as `a + sign * b`.
fn merge(a: &[(Weight, i64)], b: &[(Weight, i64)], sign: i64) -> Vec<(Weight, i64)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Greater => {
                out.push((b[j].0.clone(), sign * b[j].1));
                j += 1;
            }
            Ordering::Equal => {
                let c = a[i].1 + sign * b[j].1;
                if c != 0 {
                    out.push((a[i].0.clone(), c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend(a[i..].iter().cloned());
    out.extend(b[j..].iter().map(|(w, c)| (w.clone(), sign * c)));
    out
}

#[derive(Clone, Copy)]
enum Style {
    Text,
    Latex,
}

impl Style {
    fn root_symbol(self) -> &'static str {
        match self {
            Style::Text => "a",
            Style::Latex => "\\alpha_",
        }
    }

    fn weight_symbol(self) -> &'static str {
        match self {
            Style::Text => "w",
            Style::Latex => "\\omega_",
        }
    }
}

impl fmt::Display for RingElt {
    /// Datum-free form with exponents in fundamental-weight coordinates.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(if *c < 0 { " - " } else { " + " })?;
            } else if *c < 0 {
                f.write_str("-")?;
            }
            if w.is_zero() {
                write!(f, "{}", c.abs())?;
            } else {
                if c.abs() != 1 {
                    write!(f, "{}", c.abs())?;
                }
                write!(f, "e^{{{}}}", format_root_combination(&w.0, "w"))?;
            }
        }
        Ok(())
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl std::ops::$tr<&RingElt> for &RingElt {
            type Output = RingElt;
            fn $m(self, rhs: &RingElt) -> RingElt {
                self.$checked(rhs).expect("ring elements of equal rank")
            }
        }
        impl std::ops::$tr<RingElt> for RingElt {
            type Output = RingElt;
            fn $m(self, rhs: RingElt) -> RingElt {
                (&self).$checked(&rhs).expect("ring elements of equal rank")
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl std::ops::Neg for &RingElt {
    type Output = RingElt;
    fn neg(self) -> RingElt {
        self.scale(-1)
    }
}

impl std::ops::Neg for RingElt {
    type Output = RingElt;
    fn neg(self) -> RingElt {
        self.scale(-1)
    }
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    datum: &'a CartanDatum,
}

impl Parser<'_> {
    fn error(&self, what: &str) -> Error {
        let text: String = self.chars.iter().collect();
        Error::Parse(format!("{what} at position {} in `{text}`", self.pos))
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn eat_str(&mut self, s: &str) -> bool {
        let n = s.chars().count();
        if self.chars.len() >= self.pos + n
            && self.chars[self.pos..self.pos + n]
                .iter()
                .copied()
                .eq(s.chars())
        {
            self.pos += n;
            true
        } else {
            false
        }
    }

    fn number(&mut self) -> Option<i64> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        self.chars[start..self.pos]
            .iter()
            .collect::<String>()
            .parse()
            .ok()
    }

    fn expr(&mut self) -> Result<RingElt> {
        let r = self.datum.rank();
        let mut acc = RingElt::zero(r);
        let mut first = true;
        loop {
            let sign = if self.eat('-') {
                -1
            } else if self.eat('+') || first {
                1
            } else {
                break;
            };
            first = false;
            let t = self.term()?;
            acc = &acc + &t.scale(sign);
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RingElt> {
        let mut acc: Option<RingElt> = None;
        loop {
            let _ = self.eat('*') || self.eat('·') || self.eat_str("\\cdot");
            let f = match self.peek() {
                Some('(') => {
                    self.pos += 1;
                    let e = self.expr()?;
                    if !self.eat(')') {
                        return Err(self.error("expected `)`"));
                    }
                    e
                }
                Some('e') => {
                    self.pos += 1;
                    if !self.eat('^') {
                        return Err(self.error("expected `^` after `e`"));
                    }
                    let w = if self.eat('{') {
                        let w = self.linear()?;
                        if !self.eat('}') {
                            return Err(self.error("expected `}`"));
                        }
                        w
                    } else {
                        self.linear_term(1)?
                    };
                    RingElt::exp(w)
                }
                Some(c) if c.is_ascii_digit() => {
                    RingElt::constant(self.datum.rank(), self.number().unwrap())
                }
                _ => break,
            };
            acc = Some(match acc {
                None => f,
                Some(a) => &a * &f,
            });
        }
        acc.ok_or_else(|| self.error("expected a term"))
    }

    fn linear(&mut self) -> Result<Weight> {
        let mut acc = Weight::zero(self.datum.rank());
        let mut first = true;
        loop {
            let sign = if self.eat('-') {
                -1
            } else if self.eat('+') || first {
                1
            } else {
                break;
            };
            first = false;
            acc = acc.add(&self.linear_term(sign)?);
        }
        Ok(acc)
    }

    fn linear_term(&mut self, sign: i32) -> Result<Weight> {
        let coef = self.number().unwrap_or(1) as i32 * sign;
        let root = if ["\\alpha", "alpha", "α", "a"]
            .iter()
            .any(|s| self.eat_str(s))
        {
            true
        } else if ["\\omega", "omega", "ω", "w"]
            .iter()
            .any(|s| self.eat_str(s))
        {
            false
        } else {
            return Err(self.error("expected a simple root or fundamental weight"));
        };
        self.eat('_');
        let braced = self.eat('{');
        let idx = self
            .number()
            .ok_or_else(|| self.error("expected an index"))? as usize;
        if braced && !self.eat('}') {
            return Err(self.error("expected `}`"));
        }
        let r = self.datum.rank();
        if idx == 0 || idx > r {
            return Err(Error::IndexOutOfRange {
                index: idx,
                rank: r,
            });
        }
        let mut coords = vec![0; r];
        coords[idx - 1] = coef;
        Ok(if root {
            self.datum.root_coords_to_weight(&coords)
        } else {
            Weight::from_slice(&coords)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn a2() -> CartanDatum {
        CartanDatum::from_type("A2").unwrap()
    }

    fn p(text: &str, d: &CartanDatum) -> RingElt {
        RingElt::parse(text, d).unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        let d = a2();
        assert_eq!(
            &p("1-e^{-a1}", &d) * &p("e^{-a1}", &d),
            p("e^{-a1}-e^{-2a1}", &d)
        );
        assert_eq!(
            &p("1-e^{-a1}", &d) * &p("1+e^{-a1}", &d),
            p("1-e^{-2a1}", &d)
        );
        let a = p("3e^{a1} - 2e^{-a2}", &d);
        assert!((&a + &(-&a)).is_zero());
        let a3 = RingElt::one(3);
        assert_eq!(
            a.checked_add(&a3),
            Err(Error::RankMismatch {
                expected: 2,
                found: 3
            })
        );
    }

    #[test]
    fn division_examples() {
        let d = a2();
        assert_eq!(
            p("1-e^{-2a1}", &d)
                .exact_divide(&p("1-e^{-a1}", &d))
                .unwrap(),
            p("1+e^{-a1}", &d)
        );
        assert!(RingElt::zero(2)
            .exact_divide(&p("1-e^{-a1}", &d))
            .unwrap()
            .is_zero());
        assert_eq!(
            p("1-e^{-a1}", &d).exact_divide(&p("1-e^{-a2}", &d)),
            Err(Error::NotDivisible)
        );
        assert_eq!(
            p("1", &d).exact_divide(&RingElt::zero(2)),
            Err(Error::NotDivisible)
        );
        assert_eq!(
            p("2", &d).exact_divide(&p("3", &d)),
            Err(Error::NotDivisible)
        );
        assert_eq!(
            p("1-e^{a1}", &d).exact_divide(&p("1-e^{-a1}", &d)).unwrap(),
            p("-e^{a1}", &d)
        );
    }

    #[test]
    fn specialization_examples() {
        let d = a2();
        assert_eq!(p("1-e^{-a1}", &d).specialize_to_one(), 0);
        assert_eq!(p("e^{-a1-a2}", &d).specialize_to_one(), 1);
        assert_eq!(p("-e^{-a1}", &d).specialize_to_one(), -1);
    }

    #[test]
    fn weyl_action_examples() {
        let g = WeylGroup::from_type("A1").unwrap();
        let d = g.datum();
        let s1 = g.parse_word("1").unwrap();
        assert_eq!(p("1-e^{-a1}", d).weyl_act(&g, &s1), p("1-e^{a1}", d));
        assert!(RingElt::one(1).weyl_act(&g, &s1).is_one());
        let g = WeylGroup::from_type("B2").unwrap();
        let w0 = g.w0();
        let a = p("2e^{-a1}-e^{a1+2a2}+e^{w1}", g.datum());
        assert_eq!(a.weyl_act(&g, &w0).weyl_act(&g, &w0), a);
    }

    #[test]
    fn shifted_basis_examples() {
        let d = a2();
        let m = |pairs: &[(&[u32], i64)]| {
            pairs
                .iter()
                .map(|(k, v)| (k.to_vec(), *v))
                .collect::<BTreeMap<_, _>>()
        };
        assert_eq!(
            p("e^{-a1}", &d).rewrite_in_shifted_basis(&d).unwrap(),
            m(&[(&[0, 0], 1), (&[1, 0], 1)])
        );
        assert_eq!(
            p("1-e^{-a1}", &d).rewrite_in_shifted_basis(&d).unwrap(),
            m(&[(&[1, 0], -1)])
        );
        assert_eq!(
            p("e^{-a1-a2}", &d).rewrite_in_shifted_basis(&d).unwrap(),
            m(&[(&[0, 0], 1), (&[0, 1], 1), (&[1, 0], 1), (&[1, 1], 1)])
        );
        assert_eq!(
            p("e^{a1}", &d).rewrite_in_shifted_basis(&d),
            Err(Error::NotInSubring)
        );
        assert_eq!(
            p("e^{w1}", &d).rewrite_in_shifted_basis(&d),
            Err(Error::NotInSubring)
        );
    }

    #[test]
    fn printing_and_parsing() {
        let d = CartanDatum::from_type("C2").unwrap();
        let a = p("(1-e^{-\\alpha_1})(1-e^{-2\\alpha_1-\\alpha_2})", &d);
        assert_eq!(a.to_text(&d), "1 - e^{-a1} - e^{-2a1-a2} + e^{-3a1-a2}");
        assert_eq!(
            a.to_latex(&d),
            "1-e^{-\\alpha_1}-e^{-2\\alpha_1-\\alpha_2}+e^{-3\\alpha_1-\\alpha_2}"
        );
        assert_eq!(p(&a.to_text(&d), &d), a);
        assert_eq!(p(&a.to_latex(&d), &d), a);
        assert_eq!(p("e^{-α_1-α_2}", &d), p("e^{-a1-a2}", &d));
        assert_eq!(RingElt::zero(2).to_text(&d), "0");
        assert_eq!(p("-2e^{-a1}", &d).to_text(&d), "-2e^{-a1}");
        let w = p("e^{w1}", &d);
        assert_eq!(w.to_text(&d), "e^{w1}");
        assert_eq!(p(&w.to_text(&d), &d), w);
        for bad in ["e^{-b1}", "(1-e^{-a1}", "e^{-a3}", "1 +", "e-a1"] {
            assert!(RingElt::parse(bad, &d).is_err(), "{bad}");
        }
    }

    #[test]
    fn json_round_trip() {
        let d = CartanDatum::from_type("C2").unwrap();
        let a = p("1-e^{-a1}+3e^{-2a1-a2}", &d);
        let v = a.to_json(&d);
        assert_eq!(v.to_string(), "[[[-2,-1],3],[[-1,0],-1],[[0,0],1]]");
        assert_eq!(RingElt::from_json(&v, &d).unwrap(), a);
        let w = p("e^{w1}-1", &d);
        assert_eq!(RingElt::from_json(&w.to_json(&d), &d).unwrap(), w);
    }

    fn small_elt(rank: usize) -> impl Strategy<Value = RingElt> {
        prop::collection::vec((prop::collection::vec(-2i32..=2, rank), -3i64..=3), 0..5).prop_map(
            move |terms| {
                RingElt::from_terms(
                    rank,
                    terms.into_iter().map(|(w, c)| (Weight::from_slice(&w), c)),
                )
                .unwrap()
            },
        )
    }

    proptest! {
        #[test]
        fn ring_axioms(a in small_elt(2), b in small_elt(2), c in small_elt(2)) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a * &RingElt::one(2), a.clone());
        }

        #[test]
        fn division_inverts_multiplication(a in small_elt(2), b in small_elt(2)) {
            prop_assume!(!b.is_zero());
            prop_assert_eq!((&a * &b).exact_divide(&b).unwrap(), a);
        }

        #[test]
        fn specialization_is_homomorphism(a in small_elt(3), b in small_elt(3)) {
            prop_assert_eq!((&a * &b).specialize_to_one(), a.specialize_to_one() * b.specialize_to_one());
            prop_assert_eq!((&a + &b).specialize_to_one(), a.specialize_to_one() + b.specialize_to_one());
        }

        #[test]
        fn weyl_action_is_automorphism(a in small_elt(2), b in small_elt(2), idx in 0usize..8) {
            let g = WeylGroup::from_type("C2").unwrap();
            let w = g.elements()[idx].clone();
            prop_assert_eq!((&a * &b).weyl_act(&g, &w), &a.weyl_act(&g, &w) * &b.weyl_act(&g, &w));
            prop_assert_eq!((&a + &b).weyl_act(&g, &w), &a.weyl_act(&g, &w) + &b.weyl_act(&g, &w));
            prop_assert_eq!(a.weyl_act(&g, &w).specialize_to_one(), a.specialize_to_one());
        }

        #[test]
        fn text_round_trip(a in small_elt(2)) {
            let d = CartanDatum::from_type("G2").unwrap();
            prop_assert_eq!(RingElt::parse(&a.to_text(&d), &d).unwrap(), a.clone());
            prop_assert_eq!(RingElt::from_json(&a.to_json(&d), &d).unwrap(), a);
        }
    }
}
