use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use fgva_core::associate::{assoc_check, nonvanishing_probe, TransformKind};
use fgva_core::bivar::{parse_lp, parse_pp};
use fgva_core::fields::{closure_generate, ClosureParams, FockSpace};
use fgva_core::formal_group::fg_check;
use fgva_core::gen::DEFAULT_SEED;
use fgva_core::harness::{d_definition, f_assoc_alt, g_locality_equiv, jacobi_f, weak_assoc, weak_comm, x1_minus_x2_pow, ProductData, Window3};
use fgva_core::literal::parse_series;
use fgva_core::report::combine;
use fgva_core::suite::{self, derived_x_window, parse_associate, Outcome};
use fgva_core::vertex::{borcherds_build, change_variables, d_operator, VertexStructure};
use fgva_core::zhu::{
    check_module, poly_t_grading, xw_map, zhu_transform, GradedVertexStructure, ModuleParams, ModuleStructure, ModuleVariant,
};
use fgva_core::{Associate, CheckReport, DerivationAlgebra, PowerSeries, Error, FormalGroupLaw, GSeries, Vector, Verdict, Window2};

const USAGE: u8 = 64;

#[derive(Parser)]
#[command(name = "fgva", version, about = "Formal groups, associates and vertex F-algebras over the rationals")]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct Opts {
    /// Truncation order
    #[arg(long, global = true, env = "FGVA_DEFAULT_ORDER", default_value_t = 8, value_parser = clap::value_parser!(i64).range(1..))]
    order: i64,
    /// z-order of associates
    #[arg(long, global = true, value_parser = clap::value_parser!(i64).range(1..))]
    z_order: Option<i64>,
    /// x exponent window of associates, a:b
    #[arg(long, global = true, allow_hyphen_values = true, value_parser = parse_range)]
    x_window: Option<(i64, i64)>,
    /// Comparison window, a:b[,a:b[,a:b]]
    #[arg(long, global = true, allow_hyphen_values = true, value_parser = parse_box)]
    window: Option<Ranges>,
    #[arg(long, global = true, default_value_t = 8, value_parser = clap::value_parser!(i64).range(0..))]
    l_max: i64,
    #[arg(long, global = true, default_value_t = 8, value_parser = clap::value_parser!(i64).range(0..))]
    k_max: i64,
    /// One JSON object per line
    #[arg(long, global = true)]
    json: bool,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Builtin example
    #[arg(long, global = true)]
    example: Option<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Formal group laws
    Fg {
        #[command(subcommand)]
        cmd: FgCmd,
    },
    /// Associates
    Assoc {
        #[command(subcommand)]
        cmd: AssocCmd,
    },
    /// Vertex F-algebras from derivation algebras
    Va {
        #[command(subcommand)]
        cmd: VaCmd,
    },
    /// Axiom checks on a builtin example
    Check {
        kind: CheckKind,
        #[command(flatten)]
        va: VaArgs,
        #[command(flatten)]
        vecs: Vecs,
        /// Reparametrisation for g-equiv
        #[arg(long, default_value = "x + x^2")]
        g: String,
        /// Basis pairs probed by d-def
        #[arg(long, default_value_t = 3)]
        pairs: usize,
    },
    /// Zhu transform and phi-coordinated modules
    Zhu {
        #[command(subcommand)]
        cmd: ZhuCmd,
    },
    /// Fields on a Fock space
    Fields {
        #[command(subcommand)]
        cmd: FieldsCmd,
    },
    /// Acceptance batteries
    Suite {
        name: SuiteName,
        /// Write regenerated golden fixtures into this directory first
        #[arg(long)]
        bless: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum FgCmd {
    Log {
        #[arg(long, default_value = "mult")]
        group: String,
    },
    FromLog {
        #[arg(long)]
        f: String,
    },
    Conjugate {
        #[arg(long, default_value = "add")]
        group: String,
        #[arg(long)]
        g: String,
    },
    Check {
        #[arg(long, default_value = "mult")]
        group: String,
    },
}

#[derive(Subcommand)]
enum AssocCmd {
    FromP {
        #[arg(long, default_value = "add")]
        group: String,
        #[arg(long)]
        p: String,
    },
    Check {
        #[arg(long, default_value = "add")]
        group: String,
        #[arg(long)]
        phi: String,
    },
    Transform {
        #[arg(long, default_value = "add")]
        group: String,
        #[arg(long)]
        phi: String,
        #[arg(long)]
        kind: Kind,
        #[arg(long, default_value = "x")]
        g: String,
        /// Target law of the bar transform
        #[arg(long)]
        target: Option<String>,
    },
    Probe {
        #[arg(long, default_value = "add")]
        group: String,
        #[arg(long, default_value = "x*e^z")]
        phi: String,
        /// Multiplier in x1, x2
        #[arg(long)]
        q: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Conjugate,
    Retime,
    Bar,
}

#[derive(Args)]
struct VaArgs {
    #[arg(long, default_value = "add")]
    group: String,
    /// Degree cap of the derivation algebra
    #[arg(long)]
    cap: Option<usize>,
}

#[derive(Args)]
struct Vecs {
    #[arg(long)]
    u: Option<String>,
    #[arg(long)]
    v: Option<String>,
    #[arg(long)]
    w: Option<String>,
}

#[derive(Subcommand)]
enum VaCmd {
    Build {
        #[command(flatten)]
        va: VaArgs,
    },
    ChangeVars {
        #[command(flatten)]
        va: VaArgs,
        #[arg(long)]
        g: String,
    },
    DOperator {
        #[command(flatten)]
        va: VaArgs,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckKind {
    WeakAssoc,
    WeakComm,
    FAssocAlt,
    Jacobi,
    DDef,
    GEquiv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Deg {
    Neg,
    Pos,
}

#[derive(Subcommand)]
enum ZhuCmd {
    Transform {
        #[arg(long, default_value = "neg")]
        deg: Deg,
        #[arg(long, default_value_t = 8)]
        cap: usize,
    },
    Xw {
        #[arg(long, default_value_t = 8)]
        cap: usize,
    },
    Check {
        #[arg(long)]
        variant: String,
        #[command(flatten)]
        vecs: Vecs,
        #[arg(long)]
        phi: Option<String>,
        /// Multiplier in x1, x2 for the quasi variants
        #[arg(long)]
        q: Option<String>,
        #[arg(long, default_value_t = 8)]
        cap: usize,
    },
}

#[derive(Subcommand)]
enum FieldsCmd {
    Closure {
        #[arg(long, default_value = "x*e^z")]
        phi: String,
        #[arg(long, default_value = "add")]
        group: String,
        #[arg(long, default_value_t = 2)]
        depth: usize,
        #[arg(long, default_value_t = 3)]
        weight_cap: u32,
        #[arg(long, default_value_t = 6)]
        mode_window: u32,
        #[arg(long, default_value_t = 96)]
        size_cap: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteName {
    PaperTables,
    AxiomsAll,
    Golden,
}

fn parse_range(s: &str) -> std::result::Result<(i64, i64), String> {
    let (a, b) = s.split_once(':').ok_or_else(|| format!("expected a:b, got {s}"))?;
    let a: i64 = a.trim().parse().map_err(|e| format!("{a}: {e}"))?;
    let b: i64 = b.trim().parse().map_err(|e| format!("{b}: {e}"))?;
    if a > b {
        return Err(format!("empty window {s}"));
    }
    Ok((a, b))
}

#[derive(Clone, Debug)]
struct Ranges(Vec<(i64, i64)>);

fn parse_box(s: &str) -> std::result::Result<Ranges, String> {
    let v = s.split(',').map(parse_range).collect::<std::result::Result<Vec<_>, _>>()?;
    if v.len() > 3 {
        return Err("at most three ranges".into());
    }
    Ok(Ranges(v))
}

/// Failure of a command before any report was produced.
enum Fail {
    Usage(String),
    Core(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(m) => Fail::Usage(m),
            other => Fail::Core(other),
        }
    }
}

type Run = std::result::Result<u8, Fail>;

impl Opts {
    fn win2(&self, default: Window2) -> Window2 {
        match self.window.as_ref().map(|r| r.0.as_slice()) {
            None => default,
            Some([a]) => Window2::new(*a, *a),
            Some([a, b, ..]) => Window2::new(*a, *b),
            Some([]) => default,
        }
    }

    fn win3(&self) -> Window3 {
        match self.window.as_ref().map(|r| r.0.as_slice()) {
            Some([a]) => Window3 { x0: *a, x1: *a, x2: *a },
            Some([a, b]) => Window3 { x0: *a, x1: *a, x2: *b },
            Some([a, b, c, ..]) => Window3 { x0: *a, x1: *b, x2: *c },
            _ => Window3::cube(-6, 6),
        }
    }

    fn z_order(&self) -> i64 {
        self.z_order.unwrap_or(self.order)
    }

    fn x_window(&self) -> (i64, i64) {
        self.x_window.unwrap_or((-6, 6))
    }

    fn value(&self, text: String, value: Value) -> u8 {
        if self.json {
            println!("{value}");
        } else {
            println!("{text}");
        }
        0
    }

    fn reports(&self, reports: &[CheckReport]) -> u8 {
        for r in reports {
            if self.json {
                println!("{}", r.to_json_line());
            } else {
                println!("{r}");
            }
        }
        combine(reports).exit_code() as u8
    }
}

fn default_window() -> Window2 {
    Window2::square(-6, 6)
}

fn group(s: &str, order: i64) -> std::result::Result<FormalGroupLaw, Fail> {
    Ok(FormalGroupLaw::parse(s, order)?)
}

fn gseries(s: &str, order: i64) -> std::result::Result<GSeries, Fail> {
    Ok(GSeries::new(parse_series(s, "x")?.truncate(order))?)
}

/// `(x1-x2)^k` or a power-series literal in `x1`, `x2`.
fn multiplier(s: &str) -> std::result::Result<PowerSeries, Fail> {
    let t = s.replace(' ', "");
    if let Some(k) = t.strip_prefix("(x1-x2)^").and_then(|k| k.parse::<i64>().ok()) {
        return Ok(x1_minus_x2_pow(k));
    }
    if t == "(x1-x2)" {
        return Ok(x1_minus_x2_pow(1));
    }
    Ok(parse_pp(s, ["x1", "x2"])?)
}

/// The literal, followed by one line per `z` row when the rows are known
/// to different `x` orders.
fn assoc_out(o: &Opts, a: &Associate, mut extra: Value) -> u8 {
    let phi = a.phi();
    let orders: Vec<i64> = phi.terms().map(|(_, r)| r.order()).collect();
    let uniform = orders.windows(2).all(|w| w[0] == w[1]);
    let rows: Vec<Value> = phi.terms().map(|(j, r)| json!({"z": j, "row": r.to_literal("x")})).collect();
    let mut text = a.to_literal();
    if !uniform {
        for (j, r) in phi.terms() {
            text.push_str(&format!("\n  z^{j}: {}", r.to_literal("x")));
        }
    }
    extra["phi"] = json!(a.to_literal());
    extra["z_order"] = json!(a.z_order());
    extra["rows"] = Value::Array(rows);
    o.value(text, extra)
}

fn example_algebra(example: Option<&str>, cap: Option<usize>) -> std::result::Result<DerivationAlgebra, Fail> {
    let name = example.unwrap_or("poly_t");
    let cap = cap.unwrap_or(if name == "upper_triangular" { 4 } else { 8 });
    Ok(DerivationAlgebra::builtin(name, cap)?)
}

fn vertex(o: &Opts, va: &VaArgs) -> std::result::Result<VertexStructure, Fail> {
    let alg = example_algebra(o.example.as_deref(), va.cap)?;
    Ok(borcherds_build(&alg, &group(&va.group, o.order)?, o.order)?)
}

fn basis(v: &VertexStructure, label: Option<&String>, default: &str) -> std::result::Result<Vector, Fail> {
    let l = label.map(String::as_str).unwrap_or(default);
    let i = v.space.index(l).ok_or_else(|| Fail::Usage(format!("no basis vector {l}")))?;
    Ok(Vector::basis(i))
}

fn triple(v: &VertexStructure, vecs: &Vecs) -> std::result::Result<[Vector; 3], Fail> {
    let (du, dv) = if v.space.index("E12").is_some() { ("E12", "E22") } else { ("t^1", "t^1") };
    let one = v.label(v.vacuum);
    Ok([basis(v, vecs.u.as_ref(), du)?, basis(v, vecs.v.as_ref(), dv)?, basis(v, vecs.w.as_ref(), &one)?])
}

fn fg(o: &Opts, cmd: &FgCmd) -> Run {
    match cmd {
        FgCmd::Log { group: g } => {
            let law = group(g, o.order)?;
            let f = law.log(o.order)?;
            let lit = f.series().to_literal("x");
            Ok(o.value(lit.clone(), json!({"group": law.to_literal(), "log": lit})))
        }
        FgCmd::FromLog { f } => {
            let law = FormalGroupLaw::from_log(&gseries(f, o.order)?, o.order)?;
            let lit = law.to_literal();
            Ok(o.value(lit.clone(), json!({"f": f, "group": lit})))
        }
        FgCmd::Conjugate { group: g, g: gs } => {
            let law = group(g, o.order)?.conjugate(&gseries(gs, o.order)?, o.order)?;
            let lit = law.to_literal();
            Ok(o.value(lit.clone(), json!({"g": gs, "group": lit})))
        }
        FgCmd::Check { group: g } => {
            let series = match FormalGroupLaw::builtin(g) {
                Ok(law) => law.series().clone(),
                Err(_) => parse_pp(g, ["x", "y"])?,
            };
            Ok(o.reports(&[fg_check(&series, o.order)]))
        }
    }
}

fn assoc(o: &Opts, cmd: &AssocCmd) -> Run {
    let zo = o.z_order();
    match cmd {
        AssocCmd::FromP { group: g, p } => {
            let p = parse_series(p, "x")?;
            let xw = o.x_window.unwrap_or_else(|| derived_x_window(&p, zo));
            let a = fgva_core::associate::assoc_from_p(&group(g, o.order)?, &p, zo, xw)?;
            Ok(assoc_out(o, &a, json!({"p": p.to_literal("x"), "x_window": [xw.0, xw.1]})))
        }
        AssocCmd::Check { group: g, phi } => {
            let law = group(g, o.order)?;
            let nested = match parse_associate(phi, &law, zo, o.x_window()) {
                Ok(a) => a.phi().clone(),
                Err(_) => parse_lp(phi, ["x", "z"])?.truncate(zo),
            };
            Ok(o.reports(&[assoc_check(&nested, &law, o.x_window())]))
        }
        AssocCmd::Transform { group: g, phi, kind, g: gs, target } => {
            let law = group(g, o.order)?;
            let a = parse_associate(phi, &law, zo, o.x_window())?;
            let kind = match kind {
                Kind::Conjugate => TransformKind::Conjugate,
                Kind::Retime => TransformKind::Retime,
                Kind::Bar => TransformKind::Bar,
            };
            let target = target.as_deref().map(|t| group(t, o.order)).transpose()?;
            let b = a.transform(&gseries(gs, zo)?, kind, target.as_ref())?;
            Ok(assoc_out(o, &b, json!({"group": b.group().to_literal()})))
        }
        AssocCmd::Probe { group: g, phi, q } => {
            let law = group(g, o.order)?;
            let a = parse_associate(phi, &law, zo, o.x_window())?;
            let q = multiplier(q)?;
            Ok(o.reports(&[nonvanishing_probe(&q, &a, o.win2(default_window()))]))
        }
    }
}

fn table_text(table: &Value) -> String {
    let mut lines = Vec::new();
    for e in table.as_array().into_iter().flatten() {
        let terms: Vec<String> = e["series"]
            .as_array()
            .into_iter()
            .flatten()
            .map(|t| {
                let vec: Vec<String> = t["vector"].as_object().into_iter().flatten().map(|(k, c)| format!("{}*{k}", c.as_str().unwrap_or(""))).collect();
                format!("({})*x^{}", vec.join(" + "), t["exp"])
            })
            .collect();
        let body = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
        let tail = match &e["order"] {
            Value::Number(n) => format!(" + O(x^{n})"),
            _ => String::new(),
        };
        lines.push(format!("Y({}, x){} = {body}{tail}", e["u"].as_str().unwrap_or(""), e["v"].as_str().unwrap_or("")));
    }
    lines.join("\n")
}

fn table_out(o: &Opts, table: Value) -> u8 {
    if o.json {
        for e in table.as_array().into_iter().flatten() {
            println!("{e}");
        }
        0
    } else {
        o.value(table_text(&table), table)
    }
}

fn filter_exps(table: &mut Value, (lo, hi): (i64, i64)) {
    for e in table.as_array_mut().into_iter().flatten() {
        if let Some(s) = e["series"].as_array_mut() {
            s.retain(|t| t["exp"].as_i64().is_some_and(|x| lo <= x && x <= hi));
        }
    }
}

fn va(o: &Opts, cmd: &VaCmd) -> Run {
    match cmd {
        VaCmd::Build { va } => Ok(table_out(o, vertex(o, va)?.y_table_json())),
        VaCmd::ChangeVars { va, g } => {
            let v = vertex(o, va)?;
            let w = change_variables(&v, &gseries(g, o.order)?)?;
            Ok(table_out(o, w.y_table_json()))
        }
        VaCmd::DOperator { va } => {
            let v = vertex(o, va)?;
            let d = d_operator(&v)?;
            let mut text = Vec::new();
            let mut rows = Vec::new();
            for (i, r) in d.iter().enumerate() {
                text.push(format!("D {} = {}", v.label(i), v.space.vector_literal(r)));
                rows.push(json!({"v": v.label(i), "image": v.space.vector_json(r)}));
            }
            Ok(o.value(text.join("\n"), Value::Array(rows)))
        }
    }
}

fn check(o: &Opts, kind: CheckKind, va: &VaArgs, vecs: &Vecs, g: &str, pairs: usize) -> Run {
    let v = vertex(o, va)?;
    let [x, y, w] = triple(&v, vecs)?;
    let win = o.win2(default_window());
    let r = match kind {
        CheckKind::WeakAssoc => weak_assoc(&v, &x, &y, &w, o.l_max, win),
        CheckKind::WeakComm => weak_comm(&v, &x, &y, &[w], o.k_max, win),
        CheckKind::FAssocAlt => f_assoc_alt(&v, &x, &y, &w, o.k_max, win),
        CheckKind::Jacobi => jacobi_f(&v, &x, &y, &w, o.win3()),
        CheckKind::DDef => d_definition(&v, &d_operator(&v)?, pairs, win),
        CheckKind::GEquiv => {
            let d = ProductData::new(&v, &x, &y, &w)?;
            g_locality_equiv(&v, &d, &gseries(g, o.order)?, o.k_max, win)
        }
    };
    Ok(o.reports(&[r]))
}

fn graded(o: &Opts, cap: usize, sign: i64) -> std::result::Result<GradedVertexStructure, Fail> {
    let v = borcherds_build(&DerivationAlgebra::poly_t(cap), &FormalGroupLaw::additive(), o.order)?;
    let deg = poly_t_grading(&v.space, sign)?;
    Ok(GradedVertexStructure::new(v, deg)?)
}

fn zhu(o: &Opts, cmd: &ZhuCmd) -> Run {
    match cmd {
        ZhuCmd::Transform { deg, cap } => {
            let sign = match deg {
                Deg::Neg => -1,
                Deg::Pos => 1,
            };
            let g = graded(o, *cap, sign)?;
            Ok(table_out(o, zhu_transform(&g, o.order)?.y_table_json()))
        }
        ZhuCmd::Xw { cap } => {
            let g = graded(o, *cap, -1)?;
            let m = xw_map(&ModuleStructure::adjoint(g.structure()), &g, o.order)?;
            let mut j = m.y_table_json();
            let mut t = j["table"].take();
            for e in t.as_array_mut().into_iter().flatten() {
                e["kind"] = j["kind"].clone();
            }
            if let Some(r) = o.window.as_ref().and_then(|w| w.0.first()) {
                filter_exps(&mut t, *r);
            }
            Ok(table_out(o, t))
        }
        ZhuCmd::Check { variant, vecs, phi, q, cap } => {
            let variant: ModuleVariant = variant.parse()?;
            let g = graded(o, *cap, -1)?;
            let adj = ModuleStructure::adjoint(g.structure());
            let m = match variant {
                ModuleVariant::Module | ModuleVariant::Quasi => adj,
                ModuleVariant::Phi | ModuleVariant::PhiQuasi => xw_map(&adj, &g, o.order)?,
            };
            let [x, y, w] = triple(g.structure(), vecs)?;
            let zo = o.z_order();
            let params = ModuleParams {
                k_max: o.k_max,
                l_max: o.l_max,
                q: q.as_deref().map(multiplier).transpose()?,
                phi: phi.as_deref().map(|p| parse_associate(p, &FormalGroupLaw::additive(), zo, o.x_window())).transpose()?,
            };
            let win = o.win2(Window2::new((0, 3), (-6, 4)));
            Ok(o.reports(&[check_module(&m, variant, &params, &x, &y, &w, win)]))
        }
    }
}

fn fields(o: &Opts, cmd: &FieldsCmd) -> Run {
    match cmd {
        FieldsCmd::Closure { phi, group: g, depth, weight_cap, mode_window, size_cap } => {
            if let Some(e) = o.example.as_deref().filter(|e| *e != "heisenberg") {
                return Err(Fail::Usage(format!("unknown field example {e}")));
            }
            let fock = FockSpace::new(*weight_cap, *mode_window)?;
            let law = group(g, o.order)?;
            let a = parse_associate(phi, &law, 12.max(o.order), (-4, 8))?;
            let params = ClosureParams {
                depth: *depth,
                z_order: o.z_order.unwrap_or(3),
                k_max: o.k_max,
                size_cap: *size_cap,
                ..Default::default()
            };
            let c = closure_generate(&[("h".into(), fock.heisenberg())], &a, &params)?;
            let names: Vec<&str> = c.fields.iter().map(|(n, _)| n.as_str()).collect();
            let text = format!("fields: {}\nundecided: {}", names.join(", "), c.undecided);
            Ok(o.value(text, c.to_json()))
        }
    }
}

fn outcomes(o: &Opts, list: &[Outcome]) -> u8 {
    let mut all = Vec::new();
    for out in list {
        if !o.json {
            println!("criterion {} ({}): {}", out.criterion, out.title, out.verdict().as_str());
        }
        for r in &out.reports {
            if o.json {
                let mut v: Value = serde_json::from_str(&r.to_json_line()).expect("report json");
                v["criterion"] = json!(out.criterion);
                println!("{v}");
            } else {
                println!("  {r}");
            }
        }
        all.extend(out.reports.iter().cloned());
    }
    let v = if list.iter().any(|x| x.reports.is_empty()) { Verdict::InsufficientPrecision } else { combine(&all) };
    v.exit_code() as u8
}

fn run_suite(o: &Opts, name: SuiteName, bless: Option<&PathBuf>) -> Run {
    // a lower --order never weakens a criterion below its own precision
    let bump = (o.order - 8).max(0);
    match name {
        SuiteName::PaperTables => {
            let list = [suite::criterion_1(bump), suite::criterion_2(bump, o.seed), suite::criterion_3(bump), suite::criterion_4(bump)];
            Ok(outcomes(o, &list))
        }
        SuiteName::AxiomsAll => {
            let base = suite::criteria(bump, o.seed);
            let bumped = suite::criteria(bump + 2, o.seed);
            let mut list: Vec<Outcome> = base[4..].to_vec();
            list.push(suite::precision_regression(&base, &bumped));
            Ok(outcomes(o, &list))
        }
        SuiteName::Golden => {
            if let Some(dir) = bless {
                std::fs::create_dir_all(dir).map_err(|e| Fail::Usage(e.to_string()))?;
                for (file, text) in suite::golden_tables()? {
                    std::fs::write(dir.join(file), text).map_err(|e| Fail::Usage(e.to_string()))?;
                }
            }
            Ok(o.reports(&suite::golden_suite()))
        }
    }
}

fn dispatch(cli: &Cli) -> Run {
    let o = &cli.opts;
    match &cli.cmd {
        Cmd::Fg { cmd } => fg(o, cmd),
        Cmd::Assoc { cmd } => assoc(o, cmd),
        Cmd::Va { cmd } => va(o, cmd),
        Cmd::Check { kind, va, vecs, g, pairs } => check(o, *kind, va, vecs, g, *pairs),
        Cmd::Zhu { cmd } => zhu(o, cmd),
        Cmd::Fields { cmd } => fields(o, cmd),
        Cmd::Suite { name, bless } => run_suite(o, *name, bless.as_ref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE } else { 0 });
        }
    };
    match dispatch(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(Fail::Usage(m)) => {
            eprintln!("usage error: {m}");
            ExitCode::from(USAGE)
        }
        Err(Fail::Core(e)) => {
            if cli.opts.json {
                println!("{}", json!({"error": e.to_string(), "verdict": "insufficient-precision"}));
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(Verdict::InsufficientPrecision.exit_code() as u8)
        }
    }
}
