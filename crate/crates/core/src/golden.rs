//! Hand-transcribed multiplication tables and the comparator that checks the
//! engine against them.
//!
//! A fixture is a header of `# key: value` directives followed by LaTeX
//! `align` rows, stored exactly as printed. Rows are split at `\\`; a chunk
//! holding `\equiv` opens a row and a chunk opening with `&\quad` continues it.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::ktheory::{KTheory, SchubertExpansion};
use crate::qklines::{qk_product_degree1, Report, Status};
use crate::repring::RingElt;
use crate::rootsys::{CartanDatum, Weight};
use crate::weyl::{parse_word_letters, ParabolicSubset, WeylGroup};

pub const SL3: &str = include_str!("../fixtures/sl3.txt");
pub const SP4: &str = include_str!("../fixtures/sp4.txt");

/// Coefficients keyed by digit word (`""` for the identity).
pub type Terms = BTreeMap<String, RingElt>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoldenRow {
    pub u: String,
    pub v: String,
    pub classical: Terms,
    pub quantum: BTreeMap<usize, Terms>,
}

/// A printed coefficient replaced by the mirror image of another coefficient
/// of the same self-mirror row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Erratum {
    pub u: String,
    pub v: String,
    pub k: usize,
    pub w: String,
    pub source_k: usize,
    pub source_w: String,
}

#[derive(Clone, Debug)]
pub struct GoldenFixture {
    pub group: String,
    pub mirror: Option<(usize, usize)>,
    pub errata: Vec<Erratum>,
    pub rows: Vec<GoldenRow>,
    weyl: std::sync::Arc<WeylGroup>,
}

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

/// Canonical (lex-minimal reduced) digit word, `""` for the identity.
fn word_of(g: &WeylGroup, text: &str) -> Result<String> {
    let letters = parse_word_letters(text)?;
    let w = g.from_word(&letters)?;
    Ok(g.reduced_word(&w).iter().map(|d| d.to_string()).collect())
}

fn split_summands(rhs: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for c in rhs.chars() {
        match c {
            '(' | '{' => depth += 1,
            ')' | '}' => depth -= 1,
            '+' | '-' if depth == 0 && !cur.trim().is_empty() => {
                out.push(std::mem::take(&mut cur));
            }
            _ => {}
        }
        cur.push(c);
    }
    if !cur.trim().is_empty() {
        out.push(cur);
    }
    out
}

/// Returns the braced group starting right after `open` (which must end in `{`).
fn braced_after<'a>(text: &'a str, open: &str) -> Option<(usize, &'a str, usize)> {
    let start = text.find(open)?;
    let body = start + open.len();
    let mut depth = 1;
    for (i, c) in text[body..].char_indices() {
        match c {
            '{' => depth += 1,
            '}' => {
                depth -= 1;
                if depth == 0 {
                    return Some((start, &text[body..body + i], body + i + 1));
                }
            }
            _ => {}
        }
    }
    None
}

const SCHUBERT: &str = "{\\mathcal O}^{";

fn parse_summand(raw: &str, g: &WeylGroup, row: &mut GoldenRow) -> Result<()> {
    let datum = g.datum();
    let mut s: String = raw.split_whitespace().collect::<Vec<_>>().join(" ");
    let negative = s.starts_with('-');
    if s.starts_with('+') || s.starts_with('-') {
        s.remove(0);
    }
    let mut word = String::new();
    if let Some((start, w, end)) = braced_after(&s, SCHUBERT) {
        if end != s.len() {
            return Err(parse_err(format!("text after Schubert class in `{raw}`")));
        }
        word = word_of(g, w)?;
        s.truncate(start);
    }
    let mut k = None;
    if let Some(pos) = s.rfind("q_") {
        let tail = &s[pos + 2..];
        let tail = tail.trim_start_matches('{').trim_end_matches('}');
        k = Some(
            tail.parse::<usize>()
                .map_err(|_| parse_err(format!("bad q index in `{raw}`")))?,
        );
        s.truncate(pos);
    }
    let mut coef = if s.is_empty() {
        RingElt::one(datum.rank())
    } else {
        RingElt::parse(&s, datum)?
    };
    if negative {
        coef = -coef;
    }
    let bucket = match k {
        None => &mut row.classical,
        Some(k) => row.quantum.entry(k).or_default(),
    };
    let entry = bucket
        .entry(word)
        .or_insert_with(|| RingElt::zero(datum.rank()));
    *entry = &*entry + &coef;
    Ok(())
}

fn parse_row(lhs: &str, rhs: &str, g: &WeylGroup) -> Result<GoldenRow> {
    let (_, u, rest) =
        braced_after(lhs, SCHUBERT).ok_or_else(|| parse_err(format!("bad row head `{lhs}`")))?;
    let (_, v, _) = braced_after(&lhs[rest..], SCHUBERT)
        .ok_or_else(|| parse_err(format!("bad row head `{lhs}`")))?;
    let mut row = GoldenRow {
        u: word_of(g, u)?,
        v: word_of(g, v)?,
        classical: Terms::new(),
        quantum: BTreeMap::new(),
    };
    for summand in split_summands(rhs) {
        parse_summand(&summand, g, &mut row)?;
    }
    Ok(row)
}

fn parse_erratum(g: &WeylGroup, text: &str) -> Result<Erratum> {
    // `<u> <v> q<k> <w> mirror q<k'> <w'>`, words as digits with `e` for the identity
    let t: Vec<&str> = text.split_whitespace().collect();
    let bad = || parse_err(format!("bad erratum `{text}`"));
    if t.len() != 7 || t[4] != "mirror" {
        return Err(bad());
    }
    let q = |s: &str| {
        s.strip_prefix('q')
            .and_then(|n| n.parse().ok())
            .ok_or_else(bad)
    };
    Ok(Erratum {
        u: word_of(g, t[0])?,
        v: word_of(g, t[1])?,
        k: q(t[2])?,
        w: word_of(g, t[3])?,
        source_k: q(t[5])?,
        source_w: word_of(g, t[6])?,
    })
}

impl GoldenFixture {
    pub fn parse(text: &str) -> Result<Self> {
        let mut group = None;
        let mut mirror = None;
        let mut raw_errata = Vec::new();
        let mut body = String::new();
        for line in text.lines() {
            if let Some(directive) = line.trim().strip_prefix('#') {
                if let Some((key, value)) = directive.split_once(':') {
                    match key.trim() {
                        "group" => group = Some(value.trim().to_string()),
                        "mirror" => {
                            let n: Vec<usize> = value
                                .split_whitespace()
                                .map(|x| x.parse().map_err(|_| parse_err("bad mirror")))
                                .collect::<Result<_>>()?;
                            if n.len() != 2 {
                                return Err(parse_err("mirror needs two nodes"));
                            }
                            mirror = Some((n[0], n[1]));
                        }
                        "erratum" => raw_errata.push(value.trim().to_string()),
                        _ => {}
                    }
                }
                continue;
            }
            body.push_str(line);
            body.push(' ');
        }
        let group = group.ok_or_else(|| parse_err("fixture has no group directive"))?;
        let weyl = std::sync::Arc::new(WeylGroup::new(CartanDatum::from_type(&group)?));
        let mut heads: Vec<(String, String)> = Vec::new();
        for chunk in body.split("\\\\") {
            let chunk = chunk.trim();
            if chunk.is_empty() {
                continue;
            }
            if let Some((lhs, rhs)) = chunk.split_once("&\\equiv") {
                heads.push((lhs.to_string(), rhs.to_string()));
            } else if let Some(rest) = chunk.strip_prefix("&\\quad") {
                let last = heads
                    .last_mut()
                    .ok_or_else(|| parse_err("continuation before first row"))?;
                last.1.push(' ');
                last.1.push_str(rest);
            } else {
                return Err(parse_err(format!("unrecognized fixture text `{chunk}`")));
            }
        }
        let rows = heads
            .iter()
            .map(|(l, r)| parse_row(l, r, &weyl))
            .collect::<Result<Vec<_>>>()?;
        let errata = raw_errata
            .iter()
            .map(|e| parse_erratum(&weyl, e))
            .collect::<Result<_>>()?;
        Ok(GoldenFixture {
            group,
            mirror,
            errata,
            rows,
            weyl,
        })
    }

    pub fn sl3() -> Self {
        Self::parse(SL3).expect("bundled fixture parses")
    }

    pub fn sp4() -> Self {
        Self::parse(SP4).expect("bundled fixture parses")
    }

    pub fn datum(&self) -> &CartanDatum {
        self.weyl.datum()
    }

    fn mirror_node(&self, n: usize) -> usize {
        match self.mirror {
            Some((a, b)) if n == a => b,
            Some((a, b)) if n == b => a,
            _ => n,
        }
    }

    fn mirror_word(&self, w: &str) -> String {
        let swapped: String = w
            .chars()
            .map(|c| {
                self.mirror_node(c.to_digit(10).unwrap() as usize)
                    .to_string()
            })
            .collect();
        word_of(&self.weyl, &swapped).expect("mirror of a valid word")
    }

    fn mirror_ring(&self, r: &RingElt) -> RingElt {
        let terms = r.terms().iter().map(|(wt, c)| {
            let coords: Vec<i32> = (1..=wt.rank())
                .map(|i| wt.0[self.mirror_node(i) - 1])
                .collect();
            (Weight::from_slice(&coords), *c)
        });
        RingElt::from_terms(r.rank(), terms).expect("same rank")
    }

    fn mirror_terms(&self, t: &Terms) -> Terms {
        t.iter()
            .map(|(w, c)| (self.mirror_word(w), self.mirror_ring(c)))
            .collect()
    }

    fn mirror_row(&self, row: &GoldenRow) -> GoldenRow {
        GoldenRow {
            u: self.mirror_word(&row.u),
            v: self.mirror_word(&row.v),
            classical: self.mirror_terms(&row.classical),
            quantum: row
                .quantum
                .iter()
                .map(|(k, t)| (self.mirror_node(*k), self.mirror_terms(t)))
                .collect(),
        }
    }

    /// Printed rows with errata applied, followed by the mirror rows not
    /// already printed. The notes describe each erratum.
    pub fn expanded_rows(&self) -> Result<(Vec<GoldenRow>, Vec<String>)> {
        let mut rows = self.rows.clone();
        let mut notes = Vec::new();
        for e in &self.errata {
            if self.mirror.is_none() {
                return Err(parse_err("erratum needs a mirror directive"));
            }
            let row = rows
                .iter_mut()
                .find(|r| r.u == e.u && r.v == e.v)
                .ok_or_else(|| parse_err(format!("erratum names a missing row {}*{}", e.u, e.v)))?;
            let (mu, mv) = (self.mirror_word(&row.u), self.mirror_word(&row.v));
            let self_mirror = (mu == row.u && mv == row.v) || (mu == row.v && mv == row.u);
            if !self_mirror
                || self.mirror_node(e.source_k) != e.k
                || self.mirror_word(&e.source_w) != e.w
            {
                return Err(parse_err(format!(
                    "erratum for {}*{} is not a mirror pair",
                    e.u, e.v
                )));
            }
            let source = row
                .quantum
                .get(&e.source_k)
                .and_then(|t| t.get(&e.source_w))
                .ok_or_else(|| parse_err("erratum source term missing"))?;
            let fixed = self.mirror_ring(source);
            let printed = row
                .quantum
                .entry(e.k)
                .or_default()
                .insert(e.w.clone(), fixed.clone());
            let printed = printed.unwrap_or_else(|| RingElt::zero(self.datum().rank()));
            if printed == fixed {
                return Err(parse_err(format!(
                    "erratum for {}*{} changes nothing",
                    e.u, e.v
                )));
            }
            notes.push(format!(
                "row {}*{} q{} O^{}: printed {} replaced by the mirror of its q{} O^{} term, {}",
                show(&e.u),
                show(&e.v),
                e.k,
                show(&e.w),
                printed.to_text(self.datum()),
                e.source_k,
                show(&e.source_w),
                fixed.to_text(self.datum())
            ));
        }
        if self.mirror.is_some() {
            let printed = rows.len();
            for i in 0..printed {
                let m = self.mirror_row(&rows[i]);
                let seen = rows
                    .iter()
                    .any(|r| (r.u == m.u && r.v == m.v) || (r.u == m.v && r.v == m.u));
                if !seen {
                    rows.push(m);
                }
            }
        }
        Ok((rows, notes))
    }
}

fn show(w: &str) -> &str {
    if w.is_empty() {
        "e"
    } else {
        w
    }
}

fn compare_terms(
    label: &str,
    expected: &Terms,
    found: &SchubertExpansion,
    kt: &KTheory,
    witnesses: &mut Vec<String>,
) -> Result<()> {
    let datum = kt.datum();
    let mut want: BTreeMap<usize, &RingElt> = BTreeMap::new();
    for (w, c) in expected {
        let idx = kt.index(&kt.group().parse_word(w)?)?;
        if !c.is_zero() {
            want.insert(idx, c);
        }
    }
    let got: BTreeMap<usize, &RingElt> = found.terms().collect();
    let keys: std::collections::BTreeSet<usize> = want.keys().chain(got.keys()).copied().collect();
    for idx in keys {
        let zero = RingElt::zero(kt.rank());
        let a = want.get(&idx).copied().unwrap_or(&zero);
        let b = got.get(&idx).copied().unwrap_or(&zero);
        // compare canonical serializations
        if a.to_json(datum) != b.to_json(datum) {
            witnesses.push(format!(
                "{label} O^{}: table {} engine {}",
                kt.word(idx),
                a.to_text(datum),
                b.to_text(datum)
            ));
        }
    }
    Ok(())
}

/// Compares every row (and generated mirror row) with the engine. With
/// `classical_only` just the `q^0` parts are compared, against the classical
/// structure constants alone.
pub fn compare_fixture(
    fixture: &GoldenFixture,
    kt: &KTheory,
    classical_only: bool,
) -> Result<Report> {
    let (rows, notes) = fixture.expanded_rows()?;
    let g = kt.group();
    let b = ParabolicSubset::BOREL;
    let mut witnesses = Vec::new();
    for row in &rows {
        let (u, v) = (g.parse_word(&row.u)?, g.parse_word(&row.v)?);
        let label = format!("row {}*{}", show(&row.u), show(&row.v));
        if classical_only {
            let c = kt.structure_constants(&u, &v, b)?;
            compare_terms(&label, &row.classical, &c, kt, &mut witnesses)?;
            continue;
        }
        let prod = qk_product_degree1(kt, &u, &v, b)?;
        compare_terms(&label, &row.classical, &prod.classical, kt, &mut witnesses)?;
        let empty = Terms::new();
        for k in 1..=kt.rank() {
            let engine = prod.quantum.get(&k).ok_or_else(|| Error::NotInClassP {
                k,
                parabolic: b.to_string(),
            })?;
            let table = row.quantum.get(&k).unwrap_or(&empty);
            compare_terms(&format!("{label} q{k}"), table, engine, kt, &mut witnesses)?;
        }
    }
    let check = if classical_only {
        "golden-classical"
    } else {
        "golden"
    };
    Ok(Report {
        check: check.to_string(),
        group: fixture.group.clone(),
        parabolic: String::new(),
        k: None,
        status: if witnesses.is_empty() {
            Status::Pass
        } else {
            Status::Fail
        },
        cases: rows.len(),
        witnesses,
        // errata only touch quantum terms
        notes: if classical_only { Vec::new() } else { notes },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summand_splitting() {
        let s = split_summands("(1-e^{-\\alpha_1}){\\mathcal O}^{s_1}+e^{-\\alpha_1}q_1-e^{-\\alpha_1}q_1{\\mathcal O}^{s_2}");
        assert_eq!(s.len(), 3);
        assert!(s[2].starts_with('-'));
    }

    #[test]
    fn fixtures_parse() {
        let sl3 = GoldenFixture::sl3();
        assert_eq!(sl3.rows.len(), 9);
        let d = sl3.datum();
        let first = &sl3.rows[0];
        assert_eq!((first.u.as_str(), first.v.as_str()), ("1", "1"));
        assert_eq!(
            first.classical["1"],
            RingElt::parse("1-e^{-a1}", d).unwrap()
        );
        assert_eq!(first.quantum[&1][""], RingElt::parse("e^{-a1}", d).unwrap());
        assert_eq!(
            first.quantum[&1]["2"],
            RingElt::parse("-e^{-a1}", d).unwrap()
        );
        assert_eq!(sl3.errata.len(), 1);
        let (rows, notes) = sl3.expanded_rows().unwrap();
        assert_eq!(rows.len(), 15);
        assert_eq!(notes.len(), 1);
        let top = rows.iter().find(|r| r.u == "121" && r.v == "121").unwrap();
        let fixed = RingElt::parse("(1-e^{-a2})(1-e^{-a1-a2})e^{-a1}", d).unwrap();
        assert_eq!(top.quantum[&2]["21"], fixed);

        let sp4 = GoldenFixture::sp4();
        assert_eq!(sp4.rows.len(), 28);
        assert!(sp4.mirror.is_none());
        let row = sp4
            .rows
            .iter()
            .find(|r| r.u == "12" && r.v == "21")
            .unwrap();
        assert_eq!(
            row.classical["1212"],
            RingElt::parse("-1+e^{-a1-a2}+e^{-2a1-a2}", sp4.datum()).unwrap()
        );
    }

    #[test]
    fn mirror_rows() {
        let sl3 = GoldenFixture::sl3();
        let (rows, _) = sl3.expanded_rows().unwrap();
        let r = rows.iter().find(|r| r.u == "2" && r.v == "2").unwrap();
        assert_eq!(
            r.classical["2"],
            RingElt::parse("1-e^{-a2}", sl3.datum()).unwrap()
        );
        assert_eq!(
            r.quantum[&2]["1"],
            RingElt::parse("-e^{-a2}", sl3.datum()).unwrap()
        );
    }

    #[test]
    fn bad_errata_are_rejected() {
        let base = "# group: A2\n# mirror: 1 2\n";
        let row = "{\\mathcal O}^{s_1}\\circ {\\mathcal O}^{s_2}&\\equiv q_1+q_2\\\\";
        let not_mirror = format!("{base}# erratum: 1 2 q2 e mirror q2 e\n{row}");
        assert!(GoldenFixture::parse(&not_mirror)
            .unwrap()
            .expanded_rows()
            .is_err());
        let no_change = format!("{base}# erratum: 1 2 q2 e mirror q1 e\n{row}");
        assert!(GoldenFixture::parse(&no_change)
            .unwrap()
            .expanded_rows()
            .is_err());
        let fixes = "{\\mathcal O}^{s_1}\\circ {\\mathcal O}^{s_2}&\\equiv q_1+2q_2\\\\";
        let ok = format!("{base}# erratum: 1 2 q2 e mirror q1 e\n{fixes}");
        let (rows, notes) = GoldenFixture::parse(&ok).unwrap().expanded_rows().unwrap();
        assert!(rows[0].quantum[&2][""].is_one());
        assert_eq!(notes.len(), 1);
    }
}
