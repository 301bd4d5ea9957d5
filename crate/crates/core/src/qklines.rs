//! Degree `epsilon_k` quantum K-theory: curve neighborhoods, K-theoretic
//! Gromov-Witten invariants through the quantum = classical reduction, the
//! structure constants `N_{u,v}^{w, epsilon_k}` and sweeps checking the
//! structural theorems.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ktheory::{KClass, KTheory, SchubertExpansion};
use crate::repring::RingElt;
use crate::weyl::{ParabolicSubset, WeylElement};

/// Which Schubert variety a curve neighborhood is taken of.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// `X(u)`, the B-stable Schubert variety.
    X,
    /// `Y(u)`, the opposite Schubert variety.
    Y,
}

impl std::str::FromStr for Side {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "X" | "x" => Ok(Side::X),
            "Y" | "y" => Ok(Side::Y),
            _ => Err(Error::Parse(format!("side must be X or Y, got `{s}`"))),
        }
    }
}

/// The Richardson variety `X(top) ∩ Y(bottom)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RichardsonDescriptor {
    pub top: WeylElement,
    pub bottom: WeylElement,
    pub nonempty: bool,
    /// `l(top) - l(bottom)`, or -1 when empty.
    pub dimension: i64,
}

impl RichardsonDescriptor {
    fn new(kt: &KTheory, top: WeylElement, bottom: WeylElement) -> Self {
        let nonempty = kt.group().bruhat_leq(&bottom, &top);
        let dimension = if nonempty {
            top.length() as i64 - bottom.length() as i64
        } else {
            -1
        };
        RichardsonDescriptor {
            top,
            bottom,
            nonempty,
            dimension,
        }
    }
}

/// Inner and outer Richardson bounds for the boundary locus, with its dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryDescriptor {
    pub inner: RichardsonDescriptor,
    pub outer: RichardsonDescriptor,
    pub dimension: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QKConstant {
    pub u: WeylElement,
    pub v: WeylElement,
    pub w: WeylElement,
    pub k: usize,
    pub value: RingElt,
}

/// `O^u ∘ O^v` modulo `q`-degree two: the classical part and one `q_k` part per node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QKProduct {
    pub classical: SchubertExpansion,
    pub quantum: BTreeMap<usize, SchubertExpansion>,
    /// Nodes outside the admissible class, with the reason they were omitted.
    pub skipped: Vec<(usize, String)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Informational only; never counts as a failure.
    Diagnostic,
}

/// One line of a check report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub check: String,
    pub group: String,
    pub parabolic: String,
    pub k: Option<usize>,
    pub status: Status,
    pub cases: usize,
    pub witnesses: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Report {
    fn new(
        check: &str,
        kt: &KTheory,
        p: ParabolicSubset,
        k: Option<usize>,
        cases: usize,
        witnesses: Vec<String>,
    ) -> Self {
        let status = if witnesses.is_empty() {
            Status::Pass
        } else {
            Status::Fail
        };
        Report {
            check: check.to_string(),
            group: kt.datum().name(),
            parabolic: p.to_list(),
            k,
            status,
            cases,
            witnesses,
            notes: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

fn require_k_free(kt: &KTheory, p: ParabolicSubset, k: usize) -> Result<()> {
    if kt.group().is_k_free(p, k)? {
        Ok(())
    } else {
        Err(Error::NotKFree {
            k,
            parabolic: p.to_string(),
        })
    }
}

fn require_class_p(kt: &KTheory, p: ParabolicSubset, k: usize) -> Result<()> {
    if kt.group().in_class_p(p, k)? {
        Ok(())
    } else {
        Err(Error::NotInClassP {
            k,
            parabolic: p.to_string(),
        })
    }
}

fn require_min_rep(kt: &KTheory, w: &WeylElement, p: ParabolicSubset) -> Result<()> {
    if kt.group().is_min_rep(w, p) {
        Ok(())
    } else {
        Err(Error::NotMinimalRepresentative {
            element: kt.group().format_word(w),
            parabolic: p.to_string(),
        })
    }
}

/// `Gamma_{epsilon_k}` of `X(u)` is `X(u^k)`; of `Y(u)` is `Y(u_k)`.
pub fn curve_neighborhood(
    kt: &KTheory,
    side: Side,
    u: &WeylElement,
    k: usize,
    p: ParabolicSubset,
) -> Result<WeylElement> {
    require_k_free(kt, p, k)?;
    require_min_rep(kt, u, p)?;
    match side {
        Side::X => kt.group().hecke_up(u, k),
        Side::Y => kt.group().hecke_down(u, k),
    }
}

/// `ev_1(GW_{epsilon_k}(u, v)) = X(u^k) ∩ Y(v_k)`.
pub fn projected_gw(
    kt: &KTheory,
    u: &WeylElement,
    v: &WeylElement,
    k: usize,
    p: ParabolicSubset,
) -> Result<RichardsonDescriptor> {
    require_k_free(kt, p, k)?;
    require_min_rep(kt, u, p)?;
    require_min_rep(kt, v, p)?;
    let g = kt.group();
    Ok(RichardsonDescriptor::new(
        kt,
        g.hecke_up(u, k)?,
        g.hecke_down(v, k)?,
    ))
}

/// `X(u) ∩ Y(v) ⊂ Gamma_0 ⊂ X(u^k) ∩ Y(v_k)`, with the dimension of the middle term.
pub fn boundary_projected_gw(
    kt: &KTheory,
    u: &WeylElement,
    v: &WeylElement,
    k: usize,
    p: ParabolicSubset,
) -> Result<BoundaryDescriptor> {
    let outer = projected_gw(kt, u, v, k, p)?;
    let inner = RichardsonDescriptor::new(kt, u.clone(), v.clone());
    let dimension = if outer.top != *u && outer.bottom != *v {
        u.length() as i64 - v.length() as i64 + 1
    } else {
        outer.dimension
    };
    Ok(BoundaryDescriptor {
        inner,
        outer,
        dimension,
    })
}

/// `<O^u, O^v, [F]>_{epsilon_k}` on `G/P`. For k-free `P` this is
/// `int O^{u_k} O^{v_k} [F]`; otherwise all three classes are pulled back to `G/P_k`.
pub fn kgw3(
    kt: &KTheory,
    u: &WeylElement,
    v: &WeylElement,
    f: &SchubertExpansion,
    k: usize,
    p: ParabolicSubset,
) -> Result<RingElt> {
    require_class_p(kt, p, k)?;
    require_min_rep(kt, u, p)?;
    require_min_rep(kt, v, p)?;
    if f.parabolic() != p {
        return Err(Error::NotContained {
            inner: f.parabolic().to_string(),
            outer: p.to_string(),
        });
    }
    let g = kt.group();
    if !g.is_k_free(p, k)? {
        let pk = g.build_pk(p, k)?;
        return kgw3(kt, u, v, &kt.pullback(f, pk)?, k, pk);
    }
    let a = kt.schubert_class(&g.hecke_down(u, k)?)?;
    let b = kt.schubert_class(&g.hecke_down(v, k)?)?;
    kt.integral(&a.multiply(&b).multiply(&kt.class_of(f)), p)
}

/// `<O^z, (O^w)^vee>_{epsilon_k} = delta_{z_k, w}` for k-free `P`.
pub fn kgw2(
    kt: &KTheory,
    z: &WeylElement,
    w: &WeylElement,
    k: usize,
    p: ParabolicSubset,
) -> Result<RingElt> {
    require_k_free(kt, p, k)?;
    require_min_rep(kt, z, p)?;
    require_min_rep(kt, w, p)?;
    let hit = kt.group().hecke_down(z, k)? == *w;
    Ok(RingElt::constant(kt.rank(), hit as i64))
}

fn check_triple(
    kt: &KTheory,
    u: &WeylElement,
    v: &WeylElement,
    w: &WeylElement,
    p: ParabolicSubset,
) -> Result<()> {
    require_min_rep(kt, u, p)?;
    require_min_rep(kt, v, p)?;
    require_min_rep(kt, w, p)
}

fn constant(
    kt: &KTheory,
    row: &SchubertExpansion,
    u: &WeylElement,
    v: &WeylElement,
    w: &WeylElement,
    k: usize,
) -> Result<QKConstant> {
    Ok(QKConstant {
        u: u.clone(),
        v: v.clone(),
        w: w.clone(),
        k,
        value: row.coefficient(kt.index(w)?),
    })
}

/// All `N_{u,v}^{w, epsilon_k}`, `w` in `W^P`, by
/// `c_{u_k,v_k}^w - [l(w s_k) > l(w)] (c_{u,v}^{w s_k} + c_{u,v}^w)`.
pub fn qk_row_kfree(
    kt: &KTheory,
    u: &WeylElement,
    v: &WeylElement,
    k: usize,
    p: ParabolicSubset,
) -> Result<SchubertExpansion> {
    require_k_free(kt, p, k)?;
    require_min_rep(kt, u, p)?;
    require_min_rep(kt, v, p)?;
    let g = kt.group();
    let lowered = kt.structure_constants(&g.hecke_down(u, k)?, &g.hecke_down(v, k)?, p)?;
    let classical = kt.structure_constants(u, v, p)?;
    let mut row = SchubertExpansion::zero(p, kt.rank());
    for w in g.enumerate_wp(p)?.iter() {
        let wi = kt.index(w)?;
        let mut value = lowered.coefficient(wi);
        if !g.has_right_descent(w, k) {
            let ws = kt.index(&g.hecke_up(w, k)?)?;
            value = &value - &(&classical.coefficient(ws) + &classical.coefficient(wi));
        }
        row.add_term(wi, &value);
    }
    Ok(row)
}

pub fn qk_constant_kfree(
    kt: &KTheory,
    u: &WeylElement,
    v: &WeylElement,
    w: &WeylElement,
    k: usize,
    p: ParabolicSubset,
) -> Result<QKConstant> {
    check_triple(kt, u, v, w, p)?;
    constant(kt, &qk_row_kfree(kt, u, v, k, p)?, u, v, w, k)
}

/// All `N_{u,v}^{w, epsilon_k}` as the coefficients of
/// `partial_k(O^u) partial_k(O^v) - partial_k(O^u O^v)`.
pub fn qk_row_divided_difference(
    kt: &KTheory,
    u: &WeylElement,
    v: &WeylElement,
    k: usize,
    p: ParabolicSubset,
) -> Result<SchubertExpansion> {
    require_k_free(kt, p, k)?;
    require_min_rep(kt, u, p)?;
    require_min_rep(kt, v, p)?;
    let one = RingElt::one(kt.rank());
    let single = |w: &WeylElement| -> Result<SchubertExpansion> {
        let mut e = SchubertExpansion::zero(p, kt.rank());
        e.add_term(kt.index(w)?, &one);
        Ok(e)
    };
    let du = kt.divided_difference(&single(u)?, k)?;
    let dv = kt.divided_difference(&single(v)?, k)?;
    let first = kt.expand(&kt.class_of(&du).multiply(&kt.class_of(&dv)), p)?;
    let second = kt.divided_difference(kt.structure_constants(u, v, p)?.as_ref(), k)?;
    Ok(first.sub(&second))
}

pub fn qk_constant_divided_difference(
    kt: &KTheory,
    u: &WeylElement,
    v: &WeylElement,
    w: &WeylElement,
    k: usize,
    p: ParabolicSubset,
) -> Result<QKConstant> {
    check_triple(kt, u, v, w, p)?;
    constant(kt, &qk_row_divided_difference(kt, u, v, k, p)?, u, v, w, k)
}

/// All `N_{u,v}^{w, epsilon_k}` for `(P, alpha_k)` in the admissible class:
/// `sum_a c_{u_k,v_k}^a - sum_b c_{u,v}^b` with constants in `K_T(G/P_k)`, `a`
/// over `a W_P = w W_P` and `b` over `b_k W_P = w W_P`.
pub fn qk_row_general(
    kt: &KTheory,
    u: &WeylElement,
    v: &WeylElement,
    k: usize,
    p: ParabolicSubset,
) -> Result<SchubertExpansion> {
    require_class_p(kt, p, k)?;
    require_min_rep(kt, u, p)?;
    require_min_rep(kt, v, p)?;
    let g = kt.group();
    let pk = g.build_pk(p, k)?;
    let lowered = kt.structure_constants(&g.hecke_down(u, k)?, &g.hecke_down(v, k)?, pk)?;
    let classical = kt.structure_constants(u, v, pk)?;
    let mut row = SchubertExpansion::zero(p, kt.rank());
    for (a, c) in lowered.terms() {
        let w = g.min_coset_rep(kt.element(a), p)?;
        row.add_term(kt.index(&w)?, c);
    }
    for (b, c) in classical.terms() {
        let w = g.min_coset_rep(&g.hecke_down(kt.element(b), k)?, p)?;
        row.add_term(kt.index(&w)?, &-c);
    }
    Ok(row)
}

pub fn qk_constant_general(
    kt: &KTheory,
    u: &WeylElement,
    v: &WeylElement,
    w: &WeylElement,
    k: usize,
    p: ParabolicSubset,
) -> Result<QKConstant> {
    check_triple(kt, u, v, w, p)?;
    constant(kt, &qk_row_general(kt, u, v, k, p)?, u, v, w, k)
}

/// `O^u ∘ O^v` up to `q`-degree one. Nodes `k` with `(P, alpha_k)` outside the
/// admissible class are omitted and recorded in `skipped`.
pub fn qk_product_degree1(
    kt: &KTheory,
    u: &WeylElement,
    v: &WeylElement,
    p: ParabolicSubset,
) -> Result<QKProduct> {
    let classical = kt.structure_constants(u, v, p)?.as_ref().clone();
    let mut quantum = BTreeMap::new();
    let mut skipped = Vec::new();
    for k in 1..=kt.rank() {
        if p.contains(k) {
            continue;
        }
        match qk_row_general(kt, u, v, k, p) {
            Ok(row) => {
                quantum.insert(k, row);
            }
            Err(e @ Error::NotInClassP { .. }) => skipped.push((k, e.to_string())),
            Err(e) => return Err(e),
        }
    }
    Ok(QKProduct {
        classical,
        quantum,
        skipped,
    })
}

fn describe(kt: &KTheory, u: &WeylElement, v: &WeylElement, w: usize, value: &RingElt) -> String {
    let g = kt.group();
    format!(
        "u={} v={} w={} N={}",
        g.format_word(u),
        g.format_word(v),
        kt.word(w),
        value.to_text(kt.datum())
    )
}

fn pairs(kt: &KTheory, p: ParabolicSubset) -> Result<Vec<(WeylElement, WeylElement)>> {
    let wp = kt.group().enumerate_wp(p)?;
    Ok(wp
        .iter()
        .flat_map(|u| wp.iter().map(move |v| (u.clone(), v.clone())))
        .collect())
}

/// Runs `f` over all `(u, v)` in parallel; results keep the input order.
fn sweep<T: Send>(
    kt: &KTheory,
    p: ParabolicSubset,
    f: impl Fn(&WeylElement, &WeylElement) -> Result<T> + Sync,
) -> Result<Vec<T>> {
    pairs(kt, p)?.par_iter().map(|(u, v)| f(u, v)).collect()
}

/// `N_{u,v}^{w, epsilon_k} = 0` whenever `u_k = u` or `v_k = v`.
pub fn vanishing_check(kt: &KTheory, p: ParabolicSubset, k: usize) -> Result<Report> {
    require_class_p(kt, p, k)?;
    let g = kt.group();
    let results = sweep(kt, p, |u, v| {
        if g.has_right_descent(u, k) && g.has_right_descent(v, k) {
            return Ok(None);
        }
        let row = qk_row_general(kt, u, v, k, p)?;
        Ok(Some(
            row.terms()
                .map(|(w, c)| describe(kt, u, v, w, c))
                .collect::<Vec<_>>(),
        ))
    })?;
    let cases = results.iter().filter(|r| r.is_some()).count();
    let witnesses = results.into_iter().flatten().flatten().collect();
    Ok(Report::new("vanishing", kt, p, Some(k), cases, witnesses))
}

/// `(-1)^{l(u)+l(v)-l(w)-2} N_{u,v}^{w, epsilon_k}|_{e -> 1} >= 0` for k-free `P`.
pub fn sign_check(kt: &KTheory, p: ParabolicSubset, k: usize) -> Result<Report> {
    require_k_free(kt, p, k)?;
    let results = sweep(kt, p, |u, v| {
        let row = qk_row_kfree(kt, u, v, k, p)?;
        Ok(row
            .terms()
            .filter(|(w, c)| {
                let e = u.length() as i64 + v.length() as i64 - kt.element(*w).length() as i64 - 2;
                let sign = if e.rem_euclid(2) == 0 { 1 } else { -1 };
                sign * c.specialize_to_one() < 0
            })
            .map(|(w, c)| describe(kt, u, v, w, c))
            .collect::<Vec<_>>())
    })?;
    let cases = results.len();
    Ok(Report::new(
        "sign",
        kt,
        p,
        Some(k),
        cases,
        results.into_iter().flatten().collect(),
    ))
}

/// Whether each sign-adjusted nonzero `N` lies in `Z_{>=0}[e^{-alpha_i} - 1]`.
/// Reported as a diagnostic; misses are listed but never fail the report.
pub fn equivariant_positivity_diagnostic(
    kt: &KTheory,
    p: ParabolicSubset,
    k: usize,
) -> Result<Report> {
    require_k_free(kt, p, k)?;
    let datum = kt.datum();
    let results = sweep(kt, p, |u, v| {
        let row = qk_row_kfree(kt, u, v, k, p)?;
        Ok(row
            .terms()
            .filter(|(w, c)| {
                let e = u.length() as i64 + v.length() as i64 - kt.element(*w).length() as i64 - 2;
                let adjusted = if e.rem_euclid(2) == 0 {
                    (*c).clone()
                } else {
                    -*c
                };
                match adjusted.rewrite_in_shifted_basis(datum) {
                    Ok(poly) => poly.values().any(|&x| x < 0),
                    Err(_) => true,
                }
            })
            .map(|(w, c)| describe(kt, u, v, w, c))
            .collect::<Vec<_>>())
    })?;
    let cases = results.len();
    let mut report = Report::new(
        "positivity",
        kt,
        p,
        Some(k),
        cases,
        results.into_iter().flatten().collect(),
    );
    report.status = Status::Diagnostic;
    Ok(report)
}

fn single(kt: &KTheory, w: &WeylElement, p: ParabolicSubset) -> Result<SchubertExpansion> {
    let mut e = SchubertExpansion::zero(p, kt.rank());
    e.add_term(kt.index(w)?, &RingElt::one(kt.rank()));
    Ok(e)
}

/// Values of the comparison `<O^u,O^v,O^w>_{G/P} = <O^u,O^v,O^w>_{G/B} = <O^u,O^v,O^{w w_{P_k}}>_{G/B}`.
pub fn peterson_values(
    kt: &KTheory,
    p: ParabolicSubset,
    k: usize,
    u: &WeylElement,
    v: &WeylElement,
    w: &WeylElement,
) -> Result<[RingElt; 3]> {
    require_class_p(kt, p, k)?;
    check_triple(kt, u, v, w, p)?;
    let g = kt.group();
    let b = ParabolicSubset::BOREL;
    let on_p = kgw3(kt, u, v, &single(kt, w, p)?, k, p)?;
    let on_b = kgw3(kt, u, v, &single(kt, w, b)?, k, b)?;
    let twisted = g.multiply(w, &g.longest_element(g.build_pk(p, k)?)?)?;
    let on_b_twisted = kgw3(kt, u, v, &single(kt, &twisted, b)?, k, b)?;
    Ok([on_p, on_b, on_b_twisted])
}

pub fn peterson_check(
    kt: &KTheory,
    p: ParabolicSubset,
    k: usize,
    u: &WeylElement,
    v: &WeylElement,
    w: &WeylElement,
) -> Result<Report> {
    let [a, b, c] = peterson_values(kt, p, k, u, v, w)?;
    let g = kt.group();
    let mut witnesses = Vec::new();
    if a != b || a != c {
        let d = kt.datum();
        witnesses.push(format!(
            "u={} v={} w={}: G/P {} vs G/B {} vs twisted {}",
            g.format_word(u),
            g.format_word(v),
            g.format_word(w),
            a.to_text(d),
            b.to_text(d),
            c.to_text(d)
        ));
    }
    Ok(Report::new("peterson", kt, p, Some(k), 1, witnesses))
}

/// `sum_z c_{u_k,v_k}^z` in `K_T(G/Q)` over `z` in `W^Q` with `z W_P = w W_P`.
pub fn cor_xi_sum(
    kt: &KTheory,
    u: &WeylElement,
    v: &WeylElement,
    w: &WeylElement,
    k: usize,
    p: ParabolicSubset,
    q: ParabolicSubset,
) -> Result<RingElt> {
    require_class_p(kt, p, k)?;
    check_triple(kt, u, v, w, p)?;
    if !q.is_subset_of(p) {
        return Err(Error::NotContained {
            inner: q.to_string(),
            outer: p.to_string(),
        });
    }
    require_k_free(kt, q, k)?;
    let g = kt.group();
    let c = kt.structure_constants(&g.hecke_down(u, k)?, &g.hecke_down(v, k)?, q)?;
    let mut acc = RingElt::zero(kt.rank());
    for (z, value) in c.terms() {
        if g.min_coset_rep(kt.element(z), p)? == *w {
            acc = &acc + value;
        }
    }
    Ok(acc)
}

/// The dual class `xi_w` of `K_T(G/P)`, pulled back to `G/B`: the combination
/// of the `O_v` (v in W^P) whose pairings with the `O^a` are `delta_{a,w}`,
/// found by inverting the pairing matrix `int O^a O_v`.
pub fn dual_class(kt: &KTheory, w: &WeylElement, p: ParabolicSubset) -> Result<KClass> {
    require_min_rep(kt, w, p)?;
    let g = kt.group();
    let wp = g.enumerate_wp(p)?;
    let wl = g.longest_element(p)?;
    let opposite: Vec<KClass> = wp
        .iter()
        .map(|v| {
            Ok(kt
                .opposite_schubert_class(&g.multiply(v, &wl)?)?
                .as_ref()
                .clone())
        })
        .collect::<Result<_>>()?;
    // pairing[a][v] = int_{G/P} O^a O_v
    let n = wp.len();
    let mut pairing = vec![vec![RingElt::zero(kt.rank()); n]; n];
    for (i, a) in wp.iter().enumerate() {
        let oa = kt.schubert_class(a)?;
        for (j, ov) in opposite.iter().enumerate() {
            pairing[i][j] = kt.integral(&oa.multiply(ov), p)?;
        }
    }
    // Solve pairing * x = e_w by Gaussian elimination over Lambda with exact division.
    let target = wp.iter().position(|x| x == w).expect("w is in W^P");
    let mut rhs: Vec<RingElt> = (0..n)
        .map(|i| RingElt::constant(kt.rank(), (i == target) as i64))
        .collect();
    let mut m = pairing;
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| m[r][col].num_terms() == 1 && m[r][col].terms()[0].1.abs() == 1)
            .ok_or_else(|| Error::NotInSpan("pairing matrix has no unit pivot".into()))?;
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].exact_divide(&m[col][col])?;
                let pivot_row = m[col].clone();
                for (c, x) in pivot_row.iter().enumerate() {
                    m[r][c] = &m[r][c] - &(&f * x);
                }
                let delta = &f * &rhs[col];
                rhs[r] = &rhs[r] - &delta;
            }
        }
    }
    let mut acc = kt.constant_class(&RingElt::zero(kt.rank()));
    for j in 0..n {
        let x = rhs[j].exact_divide(&m[j][j])?;
        if !x.is_zero() {
            acc = acc.add(&opposite[j].scale(&x));
        }
    }
    Ok(acc)
}

/// `<O^u, O^v, xi_w>_{epsilon_k, G/P}` through the dual class itself.
pub fn kgw_dual(
    kt: &KTheory,
    u: &WeylElement,
    v: &WeylElement,
    w: &WeylElement,
    k: usize,
    p: ParabolicSubset,
) -> Result<RingElt> {
    let xi = kt.expand(&dual_class(kt, w, p)?, p)?;
    kgw3(kt, u, v, &xi, k, p)
}

/// Values of `<O^u,O^v,O_w>_{G/P}`, `<O^u,O^v,O_{w w_P}>_{G/B}` and
/// `int_{G/B} O^{u_k} O^{v_k} O_{w w_P w_{P_k}}`.
pub fn mixed_basis_values(
    kt: &KTheory,
    p: ParabolicSubset,
    k: usize,
    u: &WeylElement,
    v: &WeylElement,
    w: &WeylElement,
) -> Result<[RingElt; 3]> {
    require_class_p(kt, p, k)?;
    check_triple(kt, u, v, w, p)?;
    let g = kt.group();
    let b = ParabolicSubset::BOREL;
    let wwp = g.multiply(w, &g.longest_element(p)?)?;
    let o_w_on_p = kt.expand(kt.opposite_schubert_class(&wwp)?.as_ref(), p)?;
    let on_p = kgw3(kt, u, v, &o_w_on_p, k, p)?;
    let on_b = kgw3(
        kt,
        u,
        v,
        &kt.expand(kt.opposite_schubert_class(&wwp)?.as_ref(), b)?,
        k,
        b,
    )?;
    let twisted = g.multiply(&wwp, &g.longest_element(g.build_pk(p, k)?)?)?;
    let direct = {
        let a = kt.schubert_class(&g.hecke_down(u, k)?)?;
        let c = kt.schubert_class(&g.hecke_down(v, k)?)?;
        kt.integral(
            &a.multiply(&c)
                .multiply(kt.opposite_schubert_class(&twisted)?.as_ref()),
            b,
        )?
    };
    Ok([on_p, on_b, direct])
}

/// The Peterson comparison, both readings of the dual-class sum and the
/// mixed-basis identity over all `(u, v, w)` in `(W^P)^3`.
pub fn peterson_suite(kt: &KTheory, p: ParabolicSubset, k: usize) -> Result<Report> {
    require_class_p(kt, p, k)?;
    let g = kt.group();
    let wp = g.enumerate_wp(p)?;
    let pk = g.build_pk(p, k)?;
    let duals: Vec<SchubertExpansion> = wp
        .iter()
        .map(|w| kt.expand(&dual_class(kt, w, p)?, p))
        .collect::<Result<_>>()?;
    let d = kt.datum();
    let results = sweep(kt, p, |u, v| {
        let mut out = Vec::new();
        for (w, xi) in wp.iter().zip(&duals) {
            let tag = format!(
                "u={} v={} w={}",
                g.format_word(u),
                g.format_word(v),
                g.format_word(w)
            );
            let [a, b, c] = peterson_values(kt, p, k, u, v, w)?;
            if a != b || a != c {
                out.push(format!(
                    "{tag}: comparison {} / {} / {}",
                    a.to_text(d),
                    b.to_text(d),
                    c.to_text(d)
                ));
            }
            let direct = kgw3(kt, u, v, xi, k, p)?;
            for q in [pk, ParabolicSubset::BOREL] {
                let sum = cor_xi_sum(kt, u, v, w, k, p, q)?;
                if sum != direct {
                    out.push(format!(
                        "{tag}: dual class {} vs coset sum over Q={q} {}",
                        direct.to_text(d),
                        sum.to_text(d)
                    ));
                }
            }
            let [a, b, c] = mixed_basis_values(kt, p, k, u, v, w)?;
            if a != b || a != c {
                out.push(format!(
                    "{tag}: mixed basis {} / {} / {}",
                    a.to_text(d),
                    b.to_text(d),
                    c.to_text(d)
                ));
            }
        }
        Ok(out)
    })?;
    let cases = results.len() * wp.len();
    Ok(Report::new(
        "peterson",
        kt,
        p,
        Some(k),
        cases,
        results.into_iter().flatten().collect(),
    ))
}

/// `(-1)^{l(u)+l(v)-l(w)} c_{u,v}^w|_{e -> 1} >= 0` over `W^P`.
pub fn brion_sign_check(kt: &KTheory, p: ParabolicSubset) -> Result<Report> {
    let results = sweep(kt, p, |u, v| {
        let c = kt.structure_constants(u, v, p)?;
        Ok(c.terms()
            .filter(|(w, c)| {
                let e = u.length() as i64 + v.length() as i64 - kt.element(*w).length() as i64;
                let sign = if e.rem_euclid(2) == 0 { 1 } else { -1 };
                sign * c.specialize_to_one() < 0
            })
            .map(|(w, c)| describe(kt, u, v, w, c))
            .collect::<Vec<_>>())
    })?;
    let cases = results.len();
    Ok(Report::new(
        "brion-sign",
        kt,
        p,
        None,
        cases,
        results.into_iter().flatten().collect(),
    ))
}

/// Moment graph conditions on every Schubert class, opposite class and
/// pairwise product of Schubert classes: edge divisibility, support
/// (`O^v|_u = 0` unless `v <= u`) and the diagonal values. Also checks that
/// `expand` recovers the coefficients of a combination of the `O^v`, `v` in `W^P`.
pub fn gkm_suite(kt: &KTheory, p: ParabolicSubset) -> Result<Report> {
    let g = kt.group();
    let els = g.elements();
    let n = els.len();
    let mut witnesses: Vec<String> = (0..n)
        .into_par_iter()
        .map(|i| {
            let v = &els[i];
            let mut out = Vec::new();
            let class = kt.schubert_class(v)?;
            if let Err((a, b)) = kt.gkm_check(&class) {
                out.push(format!("O^{}: edge {a} -- {b}", kt.word(i)));
            }
            if *class.value(i) != kt.diagonal_value(v) {
                out.push(format!("O^{}: diagonal value", kt.word(i)));
            }
            for (j, u) in els.iter().enumerate() {
                if !class.value(j).is_zero() && !g.bruhat_leq(v, u) {
                    out.push(format!("O^{}: nonzero at {}", kt.word(i), kt.word(j)));
                }
            }
            let opposite = kt.opposite_schubert_class(v)?;
            if let Err((a, b)) = kt.gkm_check(&opposite) {
                out.push(format!("O_{}: edge {a} -- {b}", kt.word(i)));
            }
            for (j, u) in els.iter().enumerate() {
                if !opposite.value(j).is_zero() && !g.bruhat_leq(u, v) {
                    out.push(format!("O_{}: nonzero at {}", kt.word(i), kt.word(j)));
                }
            }
            for (j, u) in els.iter().enumerate().skip(i) {
                let prod = class.multiply(kt.schubert_class(u)?.as_ref());
                if let Err((a, b)) = kt.gkm_check(&prod) {
                    out.push(format!(
                        "O^{} O^{}: edge {a} -- {b}",
                        kt.word(i),
                        kt.word(j)
                    ));
                }
                for (x, z) in els.iter().enumerate() {
                    if !prod.value(x).is_zero() && !(g.bruhat_leq(v, z) && g.bruhat_leq(u, z)) {
                        out.push(format!(
                            "O^{} O^{}: nonzero at {}",
                            kt.word(i),
                            kt.word(j),
                            kt.word(x)
                        ));
                    }
                }
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let rank = kt.rank();
    let mut combo = SchubertExpansion::zero(p, rank);
    for (i, w) in g.enumerate_wp(p)?.iter().enumerate() {
        let node = i % rank + 1;
        let shift = kt.datum().simple_root(node)?;
        let c = &RingElt::constant(rank, i as i64 + 1)
            - &RingElt::exp(kt.datum().root_to_weight(&shift.neg()));
        combo.add_term(kt.index(w)?, &c);
    }
    if kt.expand(&kt.class_of(&combo), p)? != combo {
        witnesses.push("expand does not invert the combination of Schubert classes".into());
    }
    let cases = n * (n + 1) / 2 + 2 * n + 1;
    Ok(Report::new("gkm", kt, p, None, cases, witnesses))
}
