//! Command-line frontend. `run` parses arguments and returns the buffered
//! output together with the exit code: 0 pass, 1 check failure, 2 usage or
//! gate error.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::golden::{compare_fixture, GoldenFixture};
use crate::ktheory::{KTheory, SchubertExpansion};
use crate::qklines::{
    brion_sign_check, curve_neighborhood, equivariant_positivity_diagnostic, gkm_suite,
    peterson_suite, qk_constant_general, qk_product_degree1, sign_check, vanishing_check,
    QKProduct, Report, Side, Status,
};
use crate::repring::RingElt;
use crate::rootsys::CartanDatum;
use crate::weyl::{ParabolicSubset, WeylElement, WeylGroup};

#[derive(Parser, Debug)]
#[command(
    name = "qkline",
    about = "Equivariant quantum K-theory of flag manifolds in degrees epsilon_k"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Multiplication table O^u o O^v up to q-degree one.
    Table(TableArgs),
    /// A single constant N_{u,v}^{w, epsilon_k}.
    Constant(ConstantArgs),
    /// Run a verification suite.
    Check(CheckArgs),
    /// Curve neighborhood of X(u) or Y(u) in degree epsilon_k.
    Neighborhood(NeighborhoodArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Latex,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Vanishing,
    Sign,
    Peterson,
    Golden,
    Gkm,
    All,
}

#[derive(Args, Debug)]
pub struct Target {
    /// Type label such as A2, C3, G2, or a Cartan matrix file.
    #[arg(long)]
    pub group: Option<String>,
    /// Comma separated nodes of Delta_P; the empty string is the Borel.
    #[arg(long, default_value = "")]
    pub parabolic: String,
}

#[derive(Args, Debug)]
pub struct TableArgs {
    #[command(flatten)]
    pub target: Target,
    /// Restrict to rows with this u.
    #[arg(long)]
    pub u: Option<String>,
    /// Restrict to rows with this v.
    #[arg(long)]
    pub v: Option<String>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct ConstantArgs {
    #[command(flatten)]
    pub target: Target,
    #[arg(long)]
    pub u: String,
    #[arg(long)]
    pub v: String,
    #[arg(long)]
    pub w: String,
    #[arg(long)]
    pub k: usize,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    #[command(flatten)]
    pub target: Target,
    #[arg(long, value_enum)]
    pub suite: Suite,
    /// Restrict the quantum suites to one node.
    #[arg(long)]
    pub k: Option<usize>,
    /// `json` prints one report per line.
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct NeighborhoodArgs {
    #[command(flatten)]
    pub target: Target,
    /// X for the Schubert variety, Y for the opposite one.
    #[arg(long)]
    pub side: Side,
    #[arg(long)]
    pub u: String,
    #[arg(long)]
    pub k: usize,
}

#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `args` (program name first) and runs the command. Sweeps use at
/// most `QKLINE_THREADS` threads when that variable is set.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome {
                    code,
                    stdout: text,
                    ..Default::default()
                }
            } else {
                Outcome {
                    code,
                    stderr: text,
                    ..Default::default()
                }
            };
        }
    };
    let threads = std::env::var("QKLINE_THREADS")
        .ok()
        .and_then(|t| t.parse::<usize>().ok());
    match threads {
        Some(n) if n > 0 => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| dispatch(&cli.command)),
            Err(e) => Outcome {
                code: 2,
                stderr: format!("error: {e}\n"),
                ..Default::default()
            },
        },
        _ => dispatch(&cli.command),
    }
}

fn dispatch(cmd: &Command) -> Outcome {
    let mut out = Outcome::default();
    let result = match cmd {
        Command::Table(a) => table_command(a, &mut out),
        Command::Constant(a) => constant_command(a, &mut out),
        Command::Check(a) => check_command(a, &mut out),
        Command::Neighborhood(a) => neighborhood_command(a, &mut out),
    };
    if let Err(e) = result {
        let _ = writeln!(out.stderr, "error: {e}");
        out.code = 2;
    }
    out
}

fn engine(group: &Option<String>) -> Result<KTheory> {
    let spec = group
        .as_deref()
        .ok_or_else(|| Error::Parse("--group is required".into()))?;
    let datum = CartanDatum::resolve(spec)?;
    Ok(KTheory::new(Arc::new(WeylGroup::new(datum))))
}

fn parabolic(kt: &KTheory, text: &str) -> Result<ParabolicSubset> {
    let p = ParabolicSubset::parse(text)?;
    for n in p.nodes() {
        kt.datum().check_node(n)?;
    }
    Ok(p)
}

/// What `table` renders.
#[derive(Clone, Debug)]
pub struct TableRequest {
    pub group: String,
    pub parabolic: ParabolicSubset,
    /// Only these `(u, v)` rows when given.
    pub pairs: Option<Vec<(WeylElement, WeylElement)>>,
    pub format: Format,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableRow {
    pub u: WeylElement,
    pub v: WeylElement,
    pub product: QKProduct,
}

/// Rows for unordered pairs `u <= v` of non-identity elements of `W^P`, in
/// enumeration order; `pairs` overrides the selection.
pub fn table_rows(
    kt: &KTheory,
    p: ParabolicSubset,
    pairs: Option<&[(WeylElement, WeylElement)]>,
) -> Result<Vec<TableRow>> {
    let selected: Vec<(WeylElement, WeylElement)> = match pairs {
        Some(list) => list.to_vec(),
        None => {
            let wp = kt.group().enumerate_wp(p)?;
            let mut out = Vec::new();
            for (i, u) in wp.iter().enumerate().skip(1) {
                for v in wp.iter().skip(i) {
                    out.push((u.clone(), v.clone()));
                }
            }
            out
        }
    };
    selected
        .into_iter()
        .map(|(u, v)| {
            let product = qk_product_degree1(kt, &u, &v, p)?;
            Ok(TableRow { u, v, product })
        })
        .collect()
}

fn expansion_json(kt: &KTheory, e: &SchubertExpansion) -> Value {
    Value::Array(
        e.terms()
            .map(|(w, c)| json!([kt.word(w), c.to_json(kt.datum())]))
            .collect(),
    )
}

pub fn table_json(kt: &KTheory, p: ParabolicSubset, rows: &[TableRow]) -> Value {
    let g = kt.group();
    let rows: Vec<Value> = rows
        .iter()
        .map(|r| {
            let quantum: serde_json::Map<String, Value> = r
                .product
                .quantum
                .iter()
                .map(|(k, e)| (k.to_string(), expansion_json(kt, e)))
                .collect();
            json!({
                "u": g.format_word(&r.u),
                "v": g.format_word(&r.v),
                "classical": expansion_json(kt, &r.product.classical),
                "quantum": quantum,
            })
        })
        .collect();
    json!({ "group": kt.datum().name(), "parabolic": p.to_list(), "rows": rows })
}

fn expansion_from_json(kt: &KTheory, p: ParabolicSubset, v: &Value) -> Result<SchubertExpansion> {
    let bad = || Error::Parse("malformed expansion".into());
    let mut e = SchubertExpansion::zero(p, kt.rank());
    for term in v.as_array().ok_or_else(bad)? {
        let pair = term.as_array().filter(|a| a.len() == 2).ok_or_else(bad)?;
        let w = kt.group().parse_word(pair[0].as_str().ok_or_else(bad)?)?;
        e.add_term(kt.index(&w)?, &RingElt::from_json(&pair[1], kt.datum())?);
    }
    Ok(e)
}

/// Reads `table --format json` output back. Omitted quantum columns are
/// restored as skipped with the gate's message.
pub fn table_from_json(kt: &KTheory, value: &Value) -> Result<(ParabolicSubset, Vec<TableRow>)> {
    let bad = |what: &str| Error::Parse(format!("table json: {what}"));
    let p = ParabolicSubset::parse(
        value["parabolic"]
            .as_str()
            .ok_or_else(|| bad("parabolic"))?,
    )?;
    let g = kt.group();
    let mut rows = Vec::new();
    for r in value["rows"].as_array().ok_or_else(|| bad("rows"))? {
        let u = g.parse_word(r["u"].as_str().ok_or_else(|| bad("u"))?)?;
        let v = g.parse_word(r["v"].as_str().ok_or_else(|| bad("v"))?)?;
        let classical = expansion_from_json(kt, p, &r["classical"])?;
        let mut quantum = BTreeMap::new();
        for (k, e) in r["quantum"].as_object().ok_or_else(|| bad("quantum"))? {
            let k: usize = k.parse().map_err(|_| bad("quantum key"))?;
            quantum.insert(k, expansion_from_json(kt, p, e)?);
        }
        let mut skipped = Vec::new();
        for k in (1..=kt.rank()).filter(|k| !p.contains(*k) && !quantum.contains_key(k)) {
            if g.in_class_p(p, k)? {
                return Err(bad("missing quantum column"));
            }
            skipped.push((
                k,
                Error::NotInClassP {
                    k,
                    parabolic: p.to_string(),
                }
                .to_string(),
            ));
        }
        rows.push(TableRow {
            u,
            v,
            product: QKProduct {
                classical,
                quantum,
                skipped,
            },
        });
    }
    Ok((p, rows))
}

fn text_term(kt: &KTheory, idx: usize, c: &RingElt, q: Option<usize>) -> String {
    let mut s = String::new();
    if let Some(k) = q {
        let _ = write!(s, "q{k} ");
    }
    if !c.is_one() {
        let _ = write!(s, "({}) ", c.to_text(kt.datum()));
    }
    let _ = write!(s, "O^{}", kt.word(idx));
    s
}

fn latex_word(g: &WeylGroup, w: &WeylElement) -> String {
    g.reduced_word(w)
        .iter()
        .map(|i| format!("s_{{{i}}}").replace(['{', '}'], ""))
        .collect()
}

fn latex_term(kt: &KTheory, idx: usize, c: &RingElt, q: Option<usize>) -> String {
    let d = kt.datum();
    let mut s = if c.is_one() {
        String::new()
    } else if (-c).is_one() {
        "-".to_string()
    } else if c.num_terms() == 1 {
        c.to_latex(d)
    } else {
        format!("({})", c.to_latex(d))
    };
    if let Some(k) = q {
        let _ = write!(s, "q_{k}");
    }
    let w = kt.element(idx);
    if !w.is_identity() {
        let _ = write!(s, "{{\\mathcal O}}^{{{}}}", latex_word(kt.group(), w));
    } else if s.is_empty() || s == "-" {
        s.push('1');
    }
    s
}

fn row_terms(r: &TableRow) -> Vec<(usize, &RingElt, Option<usize>)> {
    let mut terms: Vec<_> = r
        .product
        .classical
        .terms()
        .map(|(w, c)| (w, c, None))
        .collect();
    for (k, e) in &r.product.quantum {
        terms.extend(e.terms().map(|(w, c)| (w, c, Some(*k))));
    }
    terms
}

pub fn render_table(kt: &KTheory, p: ParabolicSubset, rows: &[TableRow], format: Format) -> String {
    let g = kt.group();
    let mut s = String::new();
    match format {
        Format::Json => {
            s = serde_json::to_string_pretty(&table_json(kt, p, rows)).expect("json");
            s.push('\n');
        }
        Format::Text => {
            let _ = writeln!(s, "{} P={}", kt.datum().name(), p);
            for r in rows {
                let terms: Vec<String> = row_terms(r)
                    .into_iter()
                    .map(|(w, c, q)| text_term(kt, w, c, q))
                    .collect();
                let rhs = if terms.is_empty() {
                    "0".to_string()
                } else {
                    terms.join(" + ")
                };
                let _ = writeln!(
                    s,
                    "O^{} * O^{} = {}",
                    g.format_word(&r.u),
                    g.format_word(&r.v),
                    rhs
                );
            }
        }
        Format::Latex => {
            let _ = writeln!(s, "\\begin{{align*}}");
            for r in rows {
                let mut rhs = String::new();
                for (i, (w, c, q)) in row_terms(r).into_iter().enumerate() {
                    let t = latex_term(kt, w, c, q);
                    if i > 0 && !t.starts_with('-') {
                        rhs.push('+');
                    }
                    rhs.push_str(&t);
                }
                if rhs.is_empty() {
                    rhs.push('0');
                }
                let _ = writeln!(
                    s,
                    "{{\\mathcal O}}^{{{}}}\\circ {{\\mathcal O}}^{{{}}}&\\equiv {}\\\\",
                    latex_word(g, &r.u),
                    latex_word(g, &r.v),
                    rhs
                );
            }
            let _ = writeln!(s, "\\end{{align*}}");
        }
    }
    s
}

pub fn cmd_table(kt: &KTheory, req: &TableRequest) -> Result<(String, Vec<String>)> {
    let rows = table_rows(kt, req.parabolic, req.pairs.as_deref())?;
    let mut notes: Vec<String> = Vec::new();
    if let Some(first) = rows.first() {
        notes = first
            .product
            .skipped
            .iter()
            .map(|(k, reason)| format!("column q{k} omitted: {reason}"))
            .collect();
    }
    Ok((render_table(kt, req.parabolic, &rows, req.format), notes))
}

fn table_command(a: &TableArgs, out: &mut Outcome) -> Result<()> {
    let kt = engine(&a.target.group)?;
    let p = parabolic(&kt, &a.target.parabolic)?;
    let g = kt.group();
    let pairs = if a.u.is_some() || a.v.is_some() {
        let wp = g.enumerate_wp(p)?;
        let pick = |x: &Option<String>| -> Result<Vec<WeylElement>> {
            match x {
                Some(t) => Ok(vec![g.parse_word(t)?]),
                None => Ok(wp.iter().cloned().collect()),
            }
        };
        let (us, vs) = (pick(&a.u)?, pick(&a.v)?);
        Some(
            us.iter()
                .flat_map(|u| vs.iter().map(move |v| (u.clone(), v.clone())))
                .collect(),
        )
    } else {
        None
    };
    let req = TableRequest {
        group: kt.datum().name(),
        parabolic: p,
        pairs,
        format: a.format,
    };
    let (text, notes) = cmd_table(&kt, &req)?;
    out.stdout.push_str(&text);
    for n in notes {
        let _ = writeln!(out.stderr, "{n}");
    }
    Ok(())
}

fn constant_command(a: &ConstantArgs, out: &mut Outcome) -> Result<()> {
    let kt = engine(&a.target.group)?;
    let p = parabolic(&kt, &a.target.parabolic)?;
    let g = kt.group();
    let (u, v, w) = (
        g.parse_word(&a.u)?,
        g.parse_word(&a.v)?,
        g.parse_word(&a.w)?,
    );
    let n = qk_constant_general(&kt, &u, &v, &w, a.k, p)?;
    let _ = writeln!(out.stdout, "{}", n.value.to_text(kt.datum()));
    let _ = writeln!(
        out.stdout,
        "nonequivariant: {}",
        n.value.specialize_to_one()
    );
    Ok(())
}

fn neighborhood_command(a: &NeighborhoodArgs, out: &mut Outcome) -> Result<()> {
    let kt = engine(&a.target.group)?;
    let p = parabolic(&kt, &a.target.parabolic)?;
    let g = kt.group();
    let u = g.parse_word(&a.u)?;
    let image = curve_neighborhood(&kt, a.side, &u, a.k, p)?;
    let side = match a.side {
        Side::X => "X",
        Side::Y => "Y",
    };
    let _ = writeln!(out.stdout, "{}", g.format_word(&image));
    let _ = writeln!(
        out.stdout,
        "Gamma_{{eps_{}}}({side}({})) = {side}({})",
        a.k,
        g.format_word(&u),
        g.format_word(&image)
    );
    Ok(())
}

fn skip_report(check: &str, kt: &KTheory, p: ParabolicSubset, k: usize, reason: String) -> Report {
    Report {
        check: check.to_string(),
        group: kt.datum().name(),
        parabolic: p.to_list(),
        k: Some(k),
        status: Status::Diagnostic,
        cases: 0,
        witnesses: Vec::new(),
        notes: vec![format!("skipped: {reason}")],
    }
}

fn nodes(kt: &KTheory, p: ParabolicSubset, only: Option<usize>) -> Result<Vec<usize>> {
    if let Some(k) = only {
        kt.datum().check_node(k)?;
        if p.contains(k) {
            return Err(Error::NodeInParabolic {
                k,
                parabolic: p.to_string(),
            });
        }
        return Ok(vec![k]);
    }
    Ok((1..=kt.rank()).filter(|k| !p.contains(*k)).collect())
}

/// Runs one suite on one group and parabolic.
pub fn run_suite(
    kt: &KTheory,
    p: ParabolicSubset,
    suite: Suite,
    only: Option<usize>,
) -> Result<Vec<Report>> {
    let g = kt.group();
    let mut reports = Vec::new();
    match suite {
        Suite::Vanishing | Suite::Peterson => {
            let name = if suite == Suite::Vanishing {
                "vanishing"
            } else {
                "peterson"
            };
            for k in nodes(kt, p, only)? {
                if !g.in_class_p(p, k)? {
                    let reason = Error::NotInClassP {
                        k,
                        parabolic: p.to_string(),
                    }
                    .to_string();
                    reports.push(skip_report(name, kt, p, k, reason));
                } else if suite == Suite::Vanishing {
                    reports.push(vanishing_check(kt, p, k)?);
                } else {
                    reports.push(peterson_suite(kt, p, k)?);
                }
            }
        }
        Suite::Sign => {
            for k in nodes(kt, p, only)? {
                if g.is_k_free(p, k)? {
                    reports.push(sign_check(kt, p, k)?);
                    reports.push(equivariant_positivity_diagnostic(kt, p, k)?);
                } else {
                    let reason = Error::NotKFree {
                        k,
                        parabolic: p.to_string(),
                    }
                    .to_string();
                    reports.push(skip_report("sign", kt, p, k, reason));
                }
            }
            reports.push(brion_sign_check(kt, p)?);
        }
        Suite::Gkm => reports.push(gkm_suite(kt, p)?),
        Suite::Golden => reports.extend(golden_reports()?),
        Suite::All => {
            for s in [Suite::Vanishing, Suite::Sign, Suite::Peterson, Suite::Gkm] {
                reports.extend(run_suite(kt, p, s, only)?);
            }
        }
    }
    Ok(reports)
}

/// Both fixtures, full rows and classical parts alone.
pub fn golden_reports() -> Result<Vec<Report>> {
    let mut reports = Vec::new();
    for fixture in [GoldenFixture::sl3(), GoldenFixture::sp4()] {
        let kt = KTheory::from_type(&fixture.group)?;
        reports.push(compare_fixture(&fixture, &kt, false)?);
        reports.push(compare_fixture(&fixture, &kt, true)?);
    }
    Ok(reports)
}

fn check_command(a: &CheckArgs, out: &mut Outcome) -> Result<()> {
    let mut reports = Vec::new();
    match (a.suite, &a.target.group) {
        (Suite::Golden, _) => reports.extend(golden_reports()?),
        (Suite::All, None) => {
            reports.extend(golden_reports()?);
            for label in ["A2", "C2"] {
                let kt = KTheory::from_type(label)?;
                let p = parabolic(&kt, &a.target.parabolic)?;
                reports.extend(run_suite(&kt, p, Suite::All, a.k)?);
            }
        }
        (suite, group) => {
            let kt = engine(group)?;
            let p = parabolic(&kt, &a.target.parabolic)?;
            if suite == Suite::All {
                reports.extend(golden_reports()?);
            }
            reports.extend(run_suite(&kt, p, suite, a.k)?);
        }
    }
    let failed = reports.iter().filter(|r| !r.passed()).count();
    for r in &reports {
        if a.format == Format::Json {
            let _ = writeln!(out.stdout, "{}", r.to_json_line());
            continue;
        }
        let status = match r.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Diagnostic => "INFO",
        };
        let k = r.k.map(|k| format!(" k={k}")).unwrap_or_default();
        let _ = writeln!(
            out.stdout,
            "{status} {} {} P={{{}}}{k} cases={} witnesses={}",
            r.check,
            r.group,
            r.parabolic,
            r.cases,
            r.witnesses.len()
        );
        for n in &r.notes {
            let _ = writeln!(out.stdout, "  note: {n}");
        }
        for w in r.witnesses.iter().take(20) {
            let _ = writeln!(out.stdout, "  {w}");
        }
    }
    if a.format == Format::Text {
        let _ = writeln!(out.stdout, "{} reports, {failed} failed", reports.len());
    }
    if failed > 0 {
        out.code = 1;
    }
    Ok(())
}
