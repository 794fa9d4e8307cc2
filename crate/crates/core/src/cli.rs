//! The `fdes` command line.
//!
//! Exit codes: 0 success, 1 a verification failed, 2 bad input.

use std::ffi::OsString;
use std::io::Write;
use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::action::wplus_check;
use crate::eisenstein::recognize_quasimodular;
use crate::error::{Error, Result};
use crate::export::{
    dimension_table, identity_reports_json, identity_reports_table, realization_table_csv, realization_table_json,
    relation_system_json, relation_system_table, DimensionRow, Table,
};
use crate::formal::{map_partial, map_pi, map_sigma, relations, resolve_cache_dir, GenId, RelationCache, Space};
use crate::identities::{
    catalog, mfprod_i_plus_sum, ramanujan, ramanujan_g4_swapped, Identity, IdentityReport, Ramanujan,
};
use crate::kronecker::{
    check_derivation_diagram, closed_form_depth2, fay_check, fay_product, kronecker_b1, KroneckerRealization,
    Provenance, RealizationTable,
};
use crate::parse::{parse_expression, parse_genid};
use crate::poly::{BiSeries, MultiPoly};
use crate::rational::format_rational;
use crate::series::QSeries;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "fdes", version, about = "Formal double Eisenstein spaces over the rationals")]
pub struct Cli {
    /// Truncation order of q-series.
    #[arg(long, global = true, default_value_t = 30)]
    pub q_order: usize,
    /// Total degree in the formal variables for series checks.
    #[arg(long, global = true, default_value_t = 8)]
    pub degree: u32,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Directory for cached relation systems.
    #[arg(long, global = true, env = "FDES_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Dimensions of the formal spaces.
    Dimension {
        #[arg(long, default_value = "E")]
        space: Space,
        /// A weight, a range `a..b` or a comma list.
        #[arg(long, default_value = "1..12")]
        weights: String,
    },
    /// The relations of one weight, reduced unless `--raw`.
    Relations {
        #[arg(long, default_value = "E")]
        space: Space,
        #[arg(long)]
        weight: u32,
        #[arg(long)]
        raw: bool,
    },
    /// Normal form of an expression modulo the relations.
    Reduce {
        expr: String,
        /// Fail unless the expression vanishes.
        #[arg(long)]
        expect_zero: bool,
    },
    /// Apply one of the structural maps.
    Map {
        #[arg(value_enum)]
        kind: MapKind,
        expr: String,
    },
    /// Realization values.
    Realize(RealizeArgs),
    /// Fay identity for the Kronecker function or a test function.
    FayCheck {
        #[arg(long, value_enum, default_value_t = FayFunction::Kronecker)]
        function: FayFunction,
    },
    /// Membership of F(X1;Y1) F(X2;Y2) in W+.
    WplusCheck {
        #[arg(long, value_enum, default_value_t = FayFunction::Kronecker)]
        function: FayFunction,
    },
    /// Check an identity family formally and through the Kronecker realization.
    Verify {
        #[arg(long, value_enum)]
        identity: IdentityFamily,
        #[arg(long, default_value_t = 10)]
        max_weight: u32,
    },
    /// Inspect or clear the relation cache.
    Cache {
        #[arg(value_enum)]
        action: CacheAction,
    },
}

#[derive(Args, Debug)]
pub struct RealizeArgs {
    #[arg(value_enum, default_value_t = Realization::Kronecker)]
    pub method: Realization,
    /// A single generator.
    #[arg(long, conflicts_with_all = ["expr", "weight"])]
    pub gen: Option<String>,
    /// A linear combination.
    #[arg(long, conflicts_with = "weight")]
    pub expr: Option<String>,
    /// Every generator of one weight.
    #[arg(long)]
    pub weight: Option<u32>,
    /// Compare against the closed formula for `G(k1,k2;0,0)`.
    #[arg(long)]
    pub check_closed_form: bool,
    /// Write the value in the G2, G4, G6 monomial basis.
    #[arg(long)]
    pub recognize: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MapKind {
    Pi,
    Sigma,
    Partial,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Realization {
    Kronecker,
    Bernoulli,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FayFunction {
    /// The Kronecker function.
    Kronecker,
    /// Only the pole `-(1/X + 1/Y)/2`.
    Polar,
    /// The pole plus `X`, which is not a solution.
    PolarPlusX,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum IdentityFamily {
    SumFormula,
    Parity,
    Relprodandg,
    Mfprod,
    Ramanujan,
    Diagram,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CacheAction {
    Status,
    Clear,
}

/// One command's result in every output format.
struct Output {
    json: Value,
    table: Table,
    text: String,
    ok: bool,
}

impl Output {
    fn new(json: Value, table: Table, text: String) -> Self {
        Output { json, table, text, ok: true }
    }

    fn with_ok(mut self, ok: bool) -> Self {
        self.ok = ok;
        self
    }
}

fn kv_table(pairs: &[(&str, String)]) -> Table {
    let mut t = Table::new(["key", "value"]);
    for (k, v) in pairs {
        t.push([k.to_string(), v.clone()]);
    }
    t
}

fn parse_weights(text: &str) -> Result<Vec<u32>> {
    let bad = || Error::InvalidArgument(format!("cannot read weights '{text}'; use 5, 1..12 or 2,4,6"));
    let num = |s: &str| s.trim().parse::<u32>().map_err(|_| bad());
    let ws: Vec<u32> = if let Some((a, b)) = text.split_once("..") {
        let b = b.strip_prefix('=').unwrap_or(b);
        RangeInclusive::new(num(a)?, num(b)?).collect()
    } else {
        text.split(',').map(num).collect::<Result<_>>()?
    };
    if ws.is_empty() || ws.contains(&0) {
        return Err(bad());
    }
    Ok(ws)
}

struct Context {
    q_order: usize,
    degree: u32,
    cache: RelationCache,
}

impl Context {
    fn system(&self, space: Space, weight: u32) -> Result<crate::formal::RelationSystem> {
        if weight == 0 {
            return Err(Error::InvalidArgument("weight must be at least 1".into()));
        }
        self.cache.get_or_build(space, weight)
    }
}

fn dimension(ctx: &Context, space: Space, weights: &str) -> Result<Output> {
    let rows = parse_weights(weights)?
        .into_iter()
        .map(|w| ctx.system(space, w).map(|s| DimensionRow::of(&s)))
        .collect::<Result<Vec<_>>>()?;
    let text = rows.iter().map(|r| format!("{space} weight {:>2}: dimension {}", r.weight, r.dimension)).collect::<Vec<_>>();
    Ok(Output::new(serde_json::to_value(&rows)?, dimension_table(&rows), text.join("\n")))
}

fn relations_cmd(ctx: &Context, space: Space, weight: u32, raw: bool) -> Result<Output> {
    let sys = ctx.system(space, weight)?;
    if !raw {
        let text = sys.reduced_rows().iter().map(|e| format!("{e} = 0")).collect::<Vec<_>>().join("\n");
        return Ok(Output::new(relation_system_json(&sys), relation_system_table(&sys), text));
    }
    let rows = relations(space, weight);
    let mut table = Table::new(sys.basis().iter().map(ToString::to_string));
    for r in &rows {
        table.push(sys.basis().iter().map(|g| format_rational(&r.coeff(g))));
    }
    let json = json!({
        "space": space,
        "weight": weight,
        "basis": sys.basis().iter().map(ToString::to_string).collect::<Vec<_>>(),
        "relations": rows.iter().map(ToString::to_string).collect::<Vec<_>>(),
    });
    let text = rows.iter().map(|e| format!("{e} = 0")).collect::<Vec<_>>().join("\n");
    Ok(Output::new(json, table, text))
}

fn reduce(ctx: &Context, expr: &str, expect_zero: bool) -> Result<Output> {
    let e = parse_expression(expr)?.element;
    let nf = ctx.system(e.space(), e.weight())?.normal_form(&e)?;
    let zero = nf.is_empty();
    let json = json!({"input": e.to_string(), "space": e.space(), "weight": e.weight(), "normal_form": nf.to_string(), "is_zero": zero});
    let table = kv_table(&[("input", e.to_string()), ("normal_form", nf.to_string()), ("is_zero", zero.to_string())]);
    Ok(Output::new(json, table, nf.to_string()).with_ok(zero || !expect_zero))
}

fn map_cmd(ctx: &Context, kind: MapKind, expr: &str) -> Result<Output> {
    let e = parse_expression(expr)?.element;
    let out = match kind {
        MapKind::Pi => map_pi(&e)?,
        MapKind::Sigma => map_sigma(&e)?,
        MapKind::Partial => map_partial(&e)?,
    };
    let nf = ctx.system(out.space(), out.weight())?.normal_form(&out)?;
    let name = format!("{kind:?}").to_lowercase();
    let json = json!({"map": name, "input": e.to_string(), "output": out.to_string(), "space": out.space(), "weight": out.weight(), "normal_form": nf.to_string()});
    let table = kv_table(&[("map", name), ("input", e.to_string()), ("output", out.to_string()), ("normal_form", nf.to_string())]);
    Ok(Output::new(json, table, out.to_string()))
}

fn recognition_json(s: &QSeries, weight: u32) -> Value {
    match recognize_quasimodular(s, weight) {
        Ok(m) => Value::Object(
            m.iter().map(|((a, b, c), v)| (format!("G2^{a}*G4^{b}*G6^{c}"), Value::String(format_rational(v)))).collect(),
        ),
        Err(e) => json!({"error": e.to_string()}),
    }
}

fn realize(ctx: &Context, args: &RealizeArgs) -> Result<Output> {
    let n = ctx.q_order;
    if let Some(w) = args.weight {
        let prov = if args.check_closed_form { Provenance::ClosedForm } else { Provenance::SeriesExtraction };
        let t = RealizationTable::build(w, n, prov)?;
        let text = t.values.iter().map(|(g, v)| format!("{g}: {v}")).collect::<Vec<_>>().join("\n");
        return Ok(Output::new(realization_table_json(&t), realization_table_csv(&t), text));
    }
    let e = match (&args.gen, &args.expr) {
        (Some(g), _) => crate::FormalElement::from_gen(parse_genid(g)?),
        (None, Some(x)) => parse_expression(x)?.element,
        (None, None) => return Err(Error::InvalidArgument("realize needs --gen, --expr or --weight".into())),
    };
    if e.space() != Space::Eisenstein {
        return Err(Error::WrongSpace { expected: Space::Eisenstein, found: e.space() });
    }
    let order = if args.method == Realization::Bernoulli { 0 } else { n };
    let value = KroneckerRealization::shared(e.weight(), order)?.realize(&e)?;
    let mut ok = true;
    let mut json = json!({"input": e.to_string(), "method": format!("{:?}", args.method).to_lowercase()});
    let mut pairs = vec![("input", e.to_string())];
    match args.method {
        Realization::Bernoulli => {
            let v = format_rational(value.constant_term());
            json["value"] = Value::String(v.clone());
            pairs.push(("value", v));
        }
        Realization::Kronecker => {
            json["value"] = Value::String(value.to_string());
            json["provenance"] = json!(Provenance::SeriesExtraction);
            pairs.push(("value", value.to_string()));
        }
    }
    if args.check_closed_form {
        let single = (e.len() == 1).then(|| *e.terms().keys().next().expect("one term"));
        let Some(GenId::E2 { k1, k2, d1: 0, d2: 0 }) = single else {
            return Err(Error::InvalidArgument("--check-closed-form needs a single generator G(k1,k2;0,0)".into()));
        };
        let coeff = e.terms().values().next().expect("one term");
        let closed = closed_form_depth2(k1, k2, order)?.scale(coeff);
        ok = closed == value;
        json["closed_form"] = Value::String(closed.to_string());
        json["agree"] = Value::Bool(ok);
        pairs.push(("closed_form", closed.to_string()));
        pairs.push(("agree", ok.to_string()));
    }
    if args.recognize {
        json["quasimodular"] = recognition_json(&value, e.weight());
        pairs.push(("quasimodular", json["quasimodular"].to_string()));
    }
    let text = pairs.iter().map(|(k, v)| format!("{k}: {v}")).collect::<Vec<_>>().join("\n");
    Ok(Output::new(json, kv_table(&pairs), text).with_ok(ok))
}

fn test_function(ctx: &Context, f: FayFunction) -> BiSeries<QSeries> {
    match f {
        FayFunction::Kronecker => kronecker_b1(ctx.degree, ctx.q_order).b1().clone(),
        FayFunction::Polar => BiSeries::new(ctx.degree),
        FayFunction::PolarPlusX => {
            let mut b = BiSeries::new(ctx.degree);
            b.add_term(1, 0, QSeries::one(ctx.q_order));
            b
        }
    }
}

fn check_output(name: &str, ctx: &Context, f: FayFunction, holds: bool) -> Output {
    let function = f.to_possible_value().expect("no skipped variants").get_name().to_string();
    let json = json!({"check": name, "function": function, "degree": ctx.degree, "q_order": ctx.q_order, "holds": holds});
    let table = kv_table(&[("check", name.into()), ("function", function.clone()), ("holds", holds.to_string())]);
    let text = format!("{name} for {function} at degree {}, q-order {}: {}", ctx.degree, ctx.q_order, if holds { "holds" } else { "fails" });
    Output::new(json, table, text).with_ok(holds)
}

fn fay(ctx: &Context, f: FayFunction) -> Output {
    let holds = fay_check(true, &test_function(ctx, f), ctx.degree, ctx.q_order);
    check_output("fay", ctx, f, holds)
}

fn wplus(ctx: &Context, f: FayFunction) -> Output {
    let p = fay_product(true, &test_function(ctx, f), &QSeries::one(ctx.q_order));
    let holds = wplus_check(&p, &MultiPoly::new(p.numerator().max_degree()), ctx.degree as i64);
    check_output("wplus", ctx, f, holds)
}

fn family_names(f: IdentityFamily) -> &'static [&'static str] {
    match f {
        IdentityFamily::SumFormula => &["sum_formula"],
        IdentityFamily::Parity => &["parity"],
        IdentityFamily::Relprodandg => &["relprodandg"],
        IdentityFamily::Mfprod => &["mfprod_i", "mfprod_ii"],
        IdentityFamily::Ramanujan => &["ramanujan"],
        IdentityFamily::Diagram => &[],
        IdentityFamily::All => &["sum_formula", "parity", "relprodandg", "mfprod_i", "mfprod_ii", "ramanujan"],
    }
}

fn verify(ctx: &Context, family: IdentityFamily, max_weight: u32) -> Result<Output> {
    let mut instances: Vec<Identity> =
        catalog(max_weight).into_iter().filter(|i| family_names(family).contains(&i.name)).collect();
    if family == IdentityFamily::Ramanujan {
        for (i, w) in [Ramanujan::G2, Ramanujan::G4, Ramanujan::G6].into_iter().enumerate() {
            let e = ramanujan(w);
            if e.weight() > max_weight {
                instances.push(Identity { name: "ramanujan", params: vec![2 * i as u32 + 2], element: e });
            }
        }
    }
    let mut reports = Vec::new();
    let mut systems = std::collections::BTreeMap::new();
    for inst in &instances {
        let w = inst.element.weight();
        if !systems.contains_key(&w) {
            systems.insert(w, ctx.system(Space::Eisenstein, w)?);
        }
        reports.push(IdentityReport::check(inst, &systems[&w], ctx.q_order)?);
    }
    let mut ok = reports.iter().all(IdentityReport::passed);
    let mut json = json!({"identity": format!("{family:?}").to_lowercase(), "q_order": ctx.q_order, "max_weight": max_weight});
    let mut text: Vec<String> = reports
        .iter()
        .map(|r| {
            let params = r.params.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
            format!("{}({params}): {}", r.name, if r.passed() { "ok" } else { "FAILED" })
        })
        .collect();
    if matches!(family, IdentityFamily::Ramanujan | IdentityFamily::Mfprod | IdentityFamily::All) {
        // the swapped and sign-flipped variants must be rejected by both checks
        let controls = [("ramanujan_g4_swapped", ramanujan_g4_swapped()), ("mfprod_i_plus_sum", mfprod_i_plus_sum(4)?)];
        let mut out = Vec::new();
        for (name, e) in controls {
            let sys = ctx.cache.get_or_build(Space::Eisenstein, e.weight())?;
            let r = IdentityReport::check(&Identity { name, params: vec![], element: e }, &sys, ctx.q_order)?;
            let rejected = !r.reduced_to_zero && r.realized_zero_to_order.is_none();
            ok &= rejected;
            text.push(format!("{name}: {}", if rejected { "rejected as expected" } else { "NOT rejected" }));
            out.push(json!({"name": name, "reduced_to_zero": r.reduced_to_zero, "realized_zero": r.realized_zero_to_order.is_some(), "rejected": rejected}));
        }
        json["negative_controls"] = Value::Array(out);
    }
    let mut table = identity_reports_table(&reports);
    if matches!(family, IdentityFamily::Diagram | IdentityFamily::All) {
        let mut diag = Vec::new();
        for k in 1..=max_weight {
            let holds = check_derivation_diagram(k, ctx.q_order)?;
            ok &= holds;
            text.push(format!("diagram({k}): {}", if holds { "ok" } else { "FAILED" }));
            table.push(["diagram".to_string(), k.to_string(), String::new(), holds.to_string(), holds.then(|| ctx.q_order.to_string()).unwrap_or_default()]);
            diag.push(json!({"weight": k, "commutes": holds}));
        }
        json["diagram"] = Value::Array(diag);
    }
    json["results"] = identity_reports_json(&reports);
    json["passed"] = Value::Bool(ok);
    Ok(Output::new(json, table, text.join("\n")).with_ok(ok))
}

fn cache_cmd(ctx: &Context, action: CacheAction) -> Result<Output> {
    let dir = ctx.cache.dir().display().to_string();
    match action {
        CacheAction::Status => {
            let entries = ctx.cache.status()?;
            let mut table = Table::new(["space", "weight", "bytes"]);
            for e in &entries {
                table.push([e.space.to_string(), e.weight.to_string(), e.bytes.to_string()]);
            }
            let mut text = vec![format!("cache directory: {dir}")];
            text.extend(entries.iter().map(|e| format!("{} weight {}: {} bytes", e.space, e.weight, e.bytes)));
            Ok(Output::new(json!({"dir": dir, "entries": entries}), table, text.join("\n")))
        }
        CacheAction::Clear => {
            let n = ctx.cache.clear()?;
            Ok(Output::new(json!({"dir": dir, "removed": n}), kv_table(&[("removed", n.to_string())]), format!("removed {n} cached systems from {dir}")))
        }
    }
}

fn execute(cli: &Cli) -> Result<Output> {
    let ctx = Context {
        q_order: cli.q_order,
        degree: cli.degree,
        cache: RelationCache::new(resolve_cache_dir(cli.cache_dir.as_deref())),
    };
    match &cli.command {
        Command::Dimension { space, weights } => dimension(&ctx, *space, weights),
        Command::Relations { space, weight, raw } => relations_cmd(&ctx, *space, *weight, *raw),
        Command::Reduce { expr, expect_zero } => reduce(&ctx, expr, *expect_zero),
        Command::Map { kind, expr } => map_cmd(&ctx, *kind, expr),
        Command::Realize(args) => realize(&ctx, args),
        Command::FayCheck { function } => Ok(fay(&ctx, *function)),
        Command::WplusCheck { function } => Ok(wplus(&ctx, *function)),
        Command::Verify { identity, max_weight } => verify(&ctx, *identity, *max_weight),
        Command::Cache { action } => cache_cmd(&ctx, *action),
    }
}

/// Runs the command line and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{rendered}") } else { write!(out, "{rendered}") };
            return code;
        }
    };
    let output = match execute(&cli) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return match e {
                Error::Io(_) | Error::Cache(_) => EXIT_FAILED,
                _ => EXIT_USAGE,
            };
        }
    };
    let rendered = match cli.format {
        Format::Json => serde_json::to_string_pretty(&output.json).map(|s| s + "\n").map_err(Error::from),
        Format::Csv => output.table.to_csv(),
        Format::Text => Ok(output.text + "\n"),
    };
    match rendered {
        Ok(s) => {
            let _ = out.write_all(s.as_bytes());
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_FAILED;
        }
    }
    if output.ok {
        EXIT_OK
    } else {
        EXIT_FAILED
    }
}
