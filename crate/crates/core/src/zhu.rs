//! Graded structures, the Zhu transform `Y[v, x] = Y(e^{x L(0)} v, e^x - 1)`,
//! modules and phi-coordinated modules.

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::associate::{nonvanishing_probe, Associate, TransformKind};
use crate::bivar::{compare_v, inner_only, nested_get, x_exp_z, Nested, Window2};
use crate::error::{Error, Result};
use crate::formal_group::FormalGroupLaw;
use crate::gseries::GSeries;
use crate::harness::{f_increment, pp_supported, substituted_assoc_at, substituted_assoc_search, weak_assoc, x1_low, ProductData};
use crate::power::PowerSeries;
use crate::report::{combine, CheckReport, Tally, Verdict, Witness};
use crate::scalar::{factorial, q, Q};
use crate::series::{std_series, Coeff, LaurentSeries, Series, Vector, EXACT};
use crate::vertex::{change_variables, series_json, Operators, Provenance, StateSpace, VSeries, VertexStructure};

/// `deg t^n = sign * n` on `poly_t`-style labels (`1`, `t^1`, ...).
pub fn poly_t_grading(space: &StateSpace, sign: i64) -> Result<Vec<i64>> {
    space
        .labels
        .iter()
        .map(|l| match l.as_str() {
            "1" => Ok(0),
            other => other
                .strip_prefix("t^")
                .and_then(|n| n.parse::<i64>().ok())
                .map(|n| sign * n)
                .ok_or_else(|| Error::Parse(format!("no polynomial degree for {other}"))),
        })
        .collect()
}

/// Violations `(u, n, k, component, coefficient)` of `u_n V_(k) ⊆ V_(m+k-n-1)`
/// on stored entries, in basis order.
pub fn grading_violations(v: &VertexStructure, deg: &[i64]) -> Vec<(usize, i64, usize, usize, Q)> {
    let mut out = Vec::new();
    for u in 0..v.dim() {
        for b in 0..v.dim() {
            let Some(s) = v.entry_opt(u, b) else { continue };
            for (j, c) in s.terms() {
                let n = -j - 1;
                let target = deg[u] + deg[b] - n - 1;
                for (e, x) in c.iter() {
                    if deg[e] != target && !x.is_zero() {
                        out.push((u, n, b, e, x.clone()));
                    }
                }
            }
        }
    }
    out
}

/// The grading axiom on every stored coefficient, plus `1 ∈ V_(0)`.
/// Witness exponents are `(n, deg b)` with the offending component.
pub fn grading_check(v: &VertexStructure, deg: &[i64]) -> CheckReport {
    let r = CheckReport::new("grading").input("deg", json!(deg));
    if deg.len() != v.dim() {
        return r.insufficient("grading must be total on the basis");
    }
    if deg[v.vacuum] != 0 {
        return r.fail(Witness::new(vec![deg[v.vacuum]], &q(deg[v.vacuum]), &q(0))).note("vacuum is not in degree 0");
    }
    let bad = grading_violations(v, deg);
    let r = r.window_entry("violations", bad.len());
    match bad.first() {
        None => r.pass(),
        Some((u, n, b, e, c)) => {
            let w = Witness::new(vec![*n, deg[*b]], c, &q(0)).with_component(v.label(*e));
            r.fail(w).note(format!("u = {}, b = {}", v.label(*u), v.label(*b)))
        }
    }
}

/// A vertex structure with a validated integer grading.
#[derive(Clone, Debug)]
pub struct GradedVertexStructure {
    v: VertexStructure,
    deg: Vec<i64>,
}

impl GradedVertexStructure {
    pub fn new(v: VertexStructure, deg: Vec<i64>) -> Result<Self> {
        let r = grading_check(&v, &deg);
        if !r.is_pass() {
            return Err(Error::Validation(r.to_string()));
        }
        let space = v.space.clone().with_grading(deg.clone());
        Ok(GradedVertexStructure { v: v.with_space(space), deg })
    }

    pub fn structure(&self) -> &VertexStructure {
        &self.v
    }

    pub fn deg(&self) -> &[i64] {
        &self.deg
    }

    /// `x^{L(0)}` on a vector: per-basis exponent shifts.
    fn l0(&self, e: usize) -> i64 {
        self.deg[e]
    }
}

/// Both conjugation identities for `L(0)` on `Y(v, x1)b`:
/// `x^{L(0)} Y(v,x1) x^{-L(0)} = Y(x^{L(0)}v, x x1)` and
/// `e^{x L(0)} Y(v,x1) e^{-x L(0)} = Y(e^{x L(0)} v, e^x x1)`.
/// `window.var1` bounds `x1`, `window.var2` the `x` exponents (for the
/// exponential form, `x^m` with `m >= 0`).
pub fn l0_conjugation_check(g: &GradedVertexStructure, panel: &[usize], window: Window2) -> CheckReport {
    let v = &g.v;
    let r = CheckReport::new("l0-conjugation")
        .input("v", json!(panel.iter().map(|i| v.label(*i)).collect::<Vec<_>>()))
        .range("x1", window.var1.0, window.var1.1)
        .range("x", window.var2.0, window.var2.1);
    let label = |i: usize| v.label(i);
    let mut power = Tally::default();
    let mut expo = Tally::default();
    for &u in panel {
        for b in 0..v.dim() {
            let Some(s) = v.entry_opt(u, b) else { continue };
            for j in window.var1.0..=window.var1.1 {
                let c = s.known(j).then(|| s.get(j));
                for m in window.var2.0..=window.var2.1 {
                    // x-power form: lhs carries x^{deg e - deg b}, rhs x^{deg u + j}
                    let lhs = c.as_ref().map(|c| {
                        Vector::from_pairs(c.iter().filter(|(e, _)| g.l0(*e) - g.l0(b) == m).map(|(e, x)| (e, x.clone())))
                    });
                    let rhs = c.as_ref().map(|c| if g.l0(u) + j == m { c.clone() } else { Vector::new() });
                    power.vector(&[u as i64, b as i64, j, m], lhs.as_ref(), rhs.as_ref(), &label);
                    if m < 0 {
                        continue;
                    }
                    // exponential form: coefficient of x1^j x^m
                    let fact = factorial(m as u64);
                    let lhs = c.as_ref().map(|c| {
                        Vector::from_pairs(c.iter().map(|(e, x)| (e, x * pow_q(g.l0(e) - g.l0(b), m) / &fact)))
                    });
                    let rhs = c.as_ref().map(|c| c.scaled(&(pow_q(g.l0(u) + j, m) / &fact)));
                    expo.vector(&[u as i64, b as i64, j, m], lhs.as_ref(), rhs.as_ref(), &label);
                }
            }
        }
    }
    let r = r
        .window_entry("power-form", power.verdict().as_str())
        .window_entry("exponential-form", expo.verdict().as_str())
        .note("witness exponents are (u, b, x1, x)");
    let mut t = power;
    t.merge(&expo);
    r.tally(&t)
}

fn pow_q(base: i64, m: i64) -> Q {
    let mut acc = Q::one();
    for _ in 0..m {
        acc *= q(base);
    }
    acc
}

/// `Y[v, x] = Y(e^{x L(0)} v, e^x - 1)` to `x`-order `order`.
pub fn zhu_transform(g: &GradedVertexStructure, order: i64) -> Result<VertexStructure> {
    let v = &g.v;
    if !v.group.is_additive() {
        return Err(Error::GroupMismatch("the Zhu transform takes a structure over the additive law".into()));
    }
    if order >= EXACT {
        return Err(Error::PrecisionExhausted("the Zhu transform needs a finite order".into()));
    }
    let expm1 = std_series::expm1(order);
    let mut table = vec![vec![None; v.dim()]; v.dim()];
    for (u, row) in table.iter_mut().enumerate() {
        let scale = std_series::exp_linear(&q(g.l0(u)), order);
        for (b, slot) in row.iter_mut().enumerate() {
            if let Some(s) = v.entry_opt(u, b) {
                let c = s.compose(&expm1, order)?;
                *slot = Some(c.times(&scale).truncate(order));
            }
        }
    }
    let out = v.with_table(
        table,
        v.group.clone(),
        Provenance::Transformed { parent: format!("{:?}", v.provenance), g: "zhu".into() },
    )?;
    Ok(out.with_space(g.v.space.clone()))
}

/// Harness spot checks on a transformed structure: weak associativity for
/// every panel pair (vacuum as `w`), and weak commutativity when the source
/// passes it.
pub fn zhu_spot_checks(source: &VertexStructure, transformed: &VertexStructure, panel: &[usize], window: Window2) -> Vec<CheckReport> {
    use crate::harness::weak_comm;
    let one = Vector::basis(transformed.vacuum);
    let mut out = Vec::new();
    for &a in panel {
        for &b in panel {
            let (ea, eb) = (Vector::basis(a), Vector::basis(b));
            out.push(weak_assoc(transformed, &ea, &eb, &one, crate::harness::DEFAULT_SEARCH, window));
            let src = weak_comm(source, &ea, &eb, std::slice::from_ref(&one), crate::harness::DEFAULT_SEARCH, window);
            if src.is_pass() {
                out.push(weak_comm(transformed, &ea, &eb, std::slice::from_ref(&one), crate::harness::DEFAULT_SEARCH, window));
            }
        }
    }
    out
}

/// Which weak associativity a module satisfies. `phi: None` means the
/// group law itself.
#[derive(Clone, Debug, PartialEq)]
pub struct ModuleKind {
    pub phi: Option<Associate>,
    pub quasi: bool,
}

impl ModuleKind {
    pub fn module() -> Self {
        ModuleKind { phi: None, quasi: false }
    }

    pub fn tag(&self) -> String {
        let base = match &self.phi {
            None => "module".to_string(),
            Some(a) => format!("phi-coordinated({})", a.to_literal()),
        };
        if self.quasi { format!("quasi {base}") } else { base }
    }
}

#[derive(Clone, Debug)]
pub struct ModuleStructure {
    pub algebra: VertexStructure,
    pub space: StateSpace,
    table: Vec<Vec<Option<VSeries>>>,
    pub kind: ModuleKind,
}

impl ModuleStructure {
    /// Checks `Y_W(1, x) = 1_W` on stored entries.
    pub fn new(algebra: VertexStructure, space: StateSpace, table: Vec<Vec<Option<VSeries>>>, kind: ModuleKind) -> Result<Self> {
        if table.len() != algebra.dim() || table.iter().any(|r| r.len() != space.dim()) {
            return Err(Error::Validation("module table shape differs from the spaces".into()));
        }
        for w in 0..space.dim() {
            if let Some(s) = &table[algebra.vacuum][w] {
                if *s != Series::new(s.order(), [(0, Vector::basis(w))]) {
                    return Err(Error::Validation(format!("Y_W(1, x) moves {}", space.label(w))));
                }
            }
        }
        Ok(ModuleStructure { algebra, space, table, kind })
    }

    /// The algebra acting on itself.
    pub fn adjoint(v: &VertexStructure) -> Self {
        let table = v.map_entries(|s| Ok(s.clone())).expect("cloning cannot fail");
        ModuleStructure { algebra: v.clone(), space: v.space.clone(), table, kind: ModuleKind::module() }
    }

    pub fn entry(&self, u: usize, w: usize) -> Result<&VSeries> {
        self.table[u][w].as_ref().ok_or_else(|| {
            Error::OverflowBeyondCap(format!("Y_W({}, x){}", self.algebra.label(u), self.space.label(w)))
        })
    }

    pub fn entry_opt(&self, u: usize, w: usize) -> Option<&VSeries> {
        self.table[u][w].as_ref()
    }

    pub fn map_entries(&self, op: impl Fn(usize, &VSeries) -> Result<VSeries>) -> Result<Vec<Vec<Option<VSeries>>>> {
        self.table
            .iter()
            .enumerate()
            .map(|(u, row)| row.iter().map(|e| e.as_ref().map(|s| op(u, s)).transpose()).collect())
            .collect()
    }

    pub fn y_table_json(&self) -> Value {
        let mut out = Vec::new();
        for u in 0..self.algebra.dim() {
            for w in 0..self.space.dim() {
                if let Some(s) = &self.table[u][w] {
                    out.push(series_json(&self.space, &self.algebra.label(u), &self.space.label(w), s));
                }
            }
        }
        json!({"kind": self.kind.tag(), "table": out})
    }
}

impl Operators for ModuleStructure {
    fn algebra(&self) -> &VertexStructure {
        &self.algebra
    }

    fn carrier(&self) -> &StateSpace {
        &self.space
    }

    fn op(&self, u: &Vector, w: &Vector) -> Result<VSeries> {
        let mut acc = VSeries::zero();
        for (a, ca) in u.iter() {
            for (b, cb) in w.iter() {
                acc = acc.plus(&self.entry(a, b)?.scaled(&(ca * cb)));
            }
        }
        Ok(acc)
    }

    fn op_floor(&self, u: &Vector) -> i64 {
        let mut m = EXACT;
        for (a, _) in u.iter() {
            for s in self.table[a].iter().flatten() {
                if s.num_terms() > 0 || !s.is_exact() {
                    m = m.min(s.low());
                }
            }
        }
        m
    }
}

/// `φ(x, z) = x e^z` to `z`-order `z_order`, an associate of the additive law.
pub fn exp_associate(z_order: i64) -> Result<Associate> {
    Associate::new(x_exp_z(z_order), FormalGroupLaw::additive(), (-4, 8))
}

/// `φ(x, z) = F(x, z)`, the associate attached to modules.
pub fn group_associate(group: &FormalGroupLaw, z_order: i64) -> Result<Associate> {
    let phi: Nested<Q> = group.series().to_nested(1).truncate(z_order);
    Associate::new(phi, group.clone(), (-4, 8))
}

/// `X_W(v, x) = Y_W(x^{L(0)} v, x)`, a phi-coordinated module with
/// `φ = x e^z` over the Zhu transform.
pub fn xw_map(m: &ModuleStructure, g: &GradedVertexStructure, order: i64) -> Result<ModuleStructure> {
    if m.kind.phi.is_some() {
        return Err(Error::Validation("X_W takes a module over the structure itself".into()));
    }
    let zhu = zhu_transform(g, order)?;
    let table = m.map_entries(|u, s| Ok(s.shift(g.l0(u))))?;
    let kind = ModuleKind { phi: Some(exp_associate(order)?), quasi: m.kind.quasi };
    ModuleStructure::new(zhu, m.space.clone(), table, kind)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModuleTransform {
    /// `Y_W(v, g(x))` over `V_g`, coordinated by `φ_g`.
    CoordinateChange,
    /// Same map over `(V, Y_g)`, coordinated by `φ(x, g(z))`.
    Retime,
}

impl std::str::FromStr for ModuleTransform {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "coordinate-change" => Ok(ModuleTransform::CoordinateChange),
            "retime" => Ok(ModuleTransform::Retime),
            o => Err(Error::Parse(format!("unknown module transform {o}"))),
        }
    }
}

pub fn module_transform(m: &ModuleStructure, g: &GSeries, kind: ModuleTransform) -> Result<ModuleStructure> {
    if g.is_identity() && g.series().is_exact() {
        return Ok(m.clone());
    }
    let order = g.order().min(m.algebra.order());
    let algebra = change_variables(&m.algebra, g)?;
    let z_order = match &m.kind.phi {
        Some(a) => a.z_order().min(order),
        None => order,
    };
    let phi = match &m.kind.phi {
        Some(a) => a.clone(),
        None => group_associate(&m.algebra.group, z_order)?,
    };
    match kind {
        ModuleTransform::CoordinateChange => {
            let table = m.map_entries(|_, s| s.compose(g.series(), order))?;
            let phi = match &m.kind.phi {
                None => None,
                Some(_) => Some(phi.transform(g, TransformKind::Conjugate, None)?),
            };
            ModuleStructure::new(algebra, m.space.clone(), table, ModuleKind { phi, quasi: m.kind.quasi })
        }
        ModuleTransform::Retime => {
            let table = m.map_entries(|_, s| Ok(s.clone()))?;
            let phi = phi.transform(g, TransformKind::Retime, None)?;
            ModuleStructure::new(algebra, m.space.clone(), table, ModuleKind { phi: Some(phi), quasi: m.kind.quasi })
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModuleVariant {
    Module,
    Quasi,
    Phi,
    PhiQuasi,
}

impl std::str::FromStr for ModuleVariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "module" => Ok(ModuleVariant::Module),
            "quasi" => Ok(ModuleVariant::Quasi),
            "phi" => Ok(ModuleVariant::Phi),
            "phi-quasi" => Ok(ModuleVariant::PhiQuasi),
            o => Err(Error::Parse(format!("unknown module variant {o}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ModuleParams {
    pub k_max: i64,
    pub l_max: i64,
    /// Multiplier for the quasi variants.
    pub q: Option<PowerSeries>,
    /// Overrides the module's own associate.
    pub phi: Option<Associate>,
}

impl Default for ModuleParams {
    fn default() -> Self {
        ModuleParams { k_max: crate::harness::DEFAULT_SEARCH, l_max: crate::harness::DEFAULT_SEARCH, q: None, phi: None }
    }
}

fn phi_increment(a: &Associate) -> Nested<Q> {
    a.phi().minus(&inner_only(&LaurentSeries::x()))
}

/// Weak associativity of the requested variant for `(u, v, w)` on a window
/// in `(x0, x2)`.
pub fn check_module(
    m: &ModuleStructure,
    variant: ModuleVariant,
    params: &ModuleParams,
    u: &Vector,
    v: &Vector,
    w: &Vector,
    window: Window2,
) -> CheckReport {
    match variant {
        ModuleVariant::Module => {
            let r = weak_assoc(m, u, v, w, params.l_max, window);
            let alt = substituted_assoc_search("module-alt", m, u, v, w, &f_increment(&m.algebra), params.k_max, window);
            let agree = r.is_pass() == alt.is_pass();
            CheckReport { check: "module".into(), ..r }
                .window_entry("alt-form", alt.verdict.as_str())
                .window_entry("forms-agree", agree)
        }
        ModuleVariant::Phi => {
            let phi = match params.phi.as_ref().or(m.kind.phi.as_ref()) {
                Some(a) => a,
                None => return CheckReport::new("phi-module").insufficient("no associate given"),
            };
            let r = substituted_assoc_search("phi-module", m, u, v, w, &phi_increment(phi), params.k_max, window);
            r.input("phi", phi.to_literal())
        }
        ModuleVariant::Quasi | ModuleVariant::PhiQuasi => {
            let name = if variant == ModuleVariant::Quasi { "quasi-module" } else { "phi-quasi-module" };
            let r = CheckReport::new(name)
                .range("x0", window.var1.0, window.var1.1)
                .range("x2", window.var2.0, window.var2.1);
            let Some(qs) = params.q.as_ref() else {
                return r.insufficient("the quasi variants need a multiplier q");
            };
            let r = r.input("q", qs.to_literal(&["x1", "x2"]));
            let (eps, phi_lit) = if variant == ModuleVariant::Quasi {
                (f_increment(&m.algebra), m.algebra.group.to_literal())
            } else {
                match params.phi.as_ref().or(m.kind.phi.as_ref()) {
                    Some(a) => {
                        let probe = nonvanishing_probe(qs, a, Window2::new((-2, window.var2.1.max(2)), (0, window.var1.1.max(1))));
                        if probe.verdict == Verdict::Fail {
                            return r.fail(probe.witness.unwrap()).note("q(phi(x2, x0), x2) vanishes");
                        }
                        (phi_increment(a), a.to_literal())
                    }
                    None => return r.insufficient("no associate given"),
                }
            };
            let r = r.input("phi", phi_lit);
            let run = || -> Result<CheckReport> {
                let d = ProductData::one_sided(m, u, v, w)?;
                if !pp_supported(&d.a.times(&qs.to_nested(1)), d.bound, x1_low(qs)) {
                    return Ok(r.clone().insufficient("q does not bound the x1 support"));
                }
                let c = m.iterate(u, v, w)?;
                let label = |i: usize| m.space.label(i);
                let t = substituted_assoc_at(&d, &c, qs, &eps, &window, &label)?;
                Ok(r.clone().tally(&t))
            };
            run().unwrap_or_else(|e| r.clone().insufficient(e.to_string()))
        }
    }
}

/// `Y_W(e^{z𝒟} v, x) = e^{z x d/dx} Y_W(v, x)` through `z^{z_order-1}` (the
/// `z^1` term is `Y_W(𝒟v, x) = x d/dx Y_W(v, x)`), and the commutator
/// formula `[Y_W(u,x1), Y_W(v,x2)] = Σ_j (1/j!) Y_W(u_j v, x2)(x2 ∂2)^j δ(x2/x1)`
/// on a window in `(x1, x2)`, for `φ = x e^z` modules.
pub fn check_phi_d_and_commutator(m: &ModuleStructure, panel: &[usize], z_order: i64, window: Window2) -> CheckReport {
    let r = CheckReport::new("phi-d-commutator")
        .input("algebra", json!(panel.iter().map(|i| m.algebra.label(*i)).collect::<Vec<_>>()))
        .range("x1", window.var1.0, window.var1.1)
        .range("x2", window.var2.0, window.var2.1)
        .window_entry("z_order", z_order);
    // 𝒟b is the x^1 coefficient of Y(b, x)1; entries may be missing
    let vac = m.algebra.vacuum;
    let dcol = |v: &Vector| -> Option<Vector> {
        let mut acc = Vector::new();
        for (b, c) in v.iter() {
            let s = m.algebra.entry_opt(b, vac)?;
            if !s.known(1) {
                return None;
            }
            acc = acc.plus(&s.get(1).scaled(c));
        }
        Some(acc)
    };
    let label = |i: usize| m.space.label(i);
    let mut dpart = Tally::default();
    for &a in panel {
        let mut dv = Vector::basis(a);
        for k in 0..z_order {
            for w in 0..m.space.dim() {
                let ew = Vector::basis(w);
                let (Ok(lhs), Ok(base)) = (m.op(&dv, &ew), m.op(&Vector::basis(a), &ew)) else { continue };
                for x in window.var1.0..=window.var1.1 {
                    let l = lhs.known(x).then(|| lhs.get(x));
                    let rr = base.known(x).then(|| base.get(x).scaled(&pow_q(x, k)));
                    dpart.vector(&[a as i64, k, w as i64, x], l.as_ref(), rr.as_ref(), &label);
                }
            }
            match dcol(&dv) {
                Some(next) => dv = next,
                None => break,
            }
        }
    }
    let mut comm = Tally::default();
    for &a in panel {
        for &b in panel {
            let (ea, eb) = (Vector::basis(a), Vector::basis(b));
            let Ok(y) = m.algebra.y(&ea, &eb) else { continue };
            if y.order() < 0 {
                continue;
            }
            let modes: Vec<(i64, Vector)> = y.terms().filter(|(e, _)| *e < 0).map(|(e, c)| (-e - 1, c.clone())).collect();
            for w in 0..m.space.dim() {
                let ew = Vector::basis(w);
                let (Ok(pa), Ok(pb)) = (m.product(&ea, &eb, &ew), m.product(&eb, &ea, &ew)) else { continue };
                let ys: Vec<(i64, Option<VSeries>)> = modes.iter().map(|(j, c)| (*j, m.op(c, &ew).ok())).collect();
                let lhs = |x1: i64, x2: i64| -> Option<Vector> { Some(nested_get(&pa, x2, x1)?.minus(&nested_get(&pb, x1, x2)?)) };
                let rhs = |x1: i64, x2: i64| -> Option<Vector> {
                    let mut acc = Vector::new();
                    for (j, s) in &ys {
                        let s = s.as_ref()?;
                        let e = x2 + x1;
                        if !s.known(e) {
                            return None;
                        }
                        let coef = pow_q(-x1, *j) / factorial(*j as u64);
                        acc = acc.plus(&s.get(e).scaled(&coef));
                    }
                    Some(acc)
                };
                let mut t = Tally::default();
                compare_v(&mut t, &window, lhs, rhs, &label);
                comm.merge(&t);
            }
        }
    }
    let parts = [CheckReport::new("d").tally(&dpart), CheckReport::new("c").tally(&comm)];
    let r = r
        .window_entry("d-property", dpart.verdict().as_str())
        .window_entry("commutator", comm.verdict().as_str());
    match combine(&parts) {
        Verdict::Pass => r.pass(),
        Verdict::Fail => {
            let (w, note) = match dpart.mismatch {
                Some(w) => (w, "D-property; exponents (v, k, w, x)"),
                None => (comm.mismatch.unwrap(), "commutator; exponents (x1, x2)"),
            };
            r.fail(w).note(note)
        }
        Verdict::InsufficientPrecision => r.insufficient("one of the identities had nothing to compare"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bivar::nested_get;
    use crate::scalar::qr;
    use crate::vertex::{borcherds_build, d_operator, DerivationAlgebra};

    fn graded(cap: usize) -> GradedVertexStructure {
        let v = borcherds_build(&DerivationAlgebra::poly_t(cap), &FormalGroupLaw::additive(), 8).unwrap();
        let deg = poly_t_grading(&v.space, -1).unwrap();
        GradedVertexStructure::new(v, deg).unwrap()
    }

    fn e(i: usize) -> Vector {
        Vector::basis(i)
    }

    #[test]
    fn grading_signs() {
        let g = graded(8);
        let v = g.structure();
        assert!(grading_check(v, g.deg()).is_pass());
        let plus = poly_t_grading(&v.space, 1).unwrap();
        let r = grading_check(v, &plus);
        assert_eq!(r.verdict, Verdict::Fail);
        let bad = grading_violations(v, &plus);
        assert!(bad.iter().any(|(u, n, b, comp, _)| (*u, *n, *b, *comp) == (1, -2, 1, 1)));
        assert!(grading_check(v, &[0; 9]).verdict == Verdict::Fail);
    }

    #[test]
    fn l0_conjugation() {
        let g = graded(8);
        let r = l0_conjugation_check(&g, &[0, 1, 2], Window2::new((-2, 5), (-6, 5)));
        assert!(r.is_pass(), "{r}");
    }

    #[test]
    fn zhu_golden() {
        let g = graded(8);
        let z = zhu_transform(&g, 6).unwrap();
        let s = z.entry(1, 1).unwrap();
        assert_eq!(s.get(0), e(2));
        assert_eq!(s.get(1), Vector::from_pairs([(2, q(-1)), (1, q(1))]));
        assert_eq!(s.get(2), Vector::from_pairs([(2, qr(1, 2)), (1, qr(-1, 2))]));
        for b in 0..9 {
            assert_eq!(z.entry(0, b).unwrap().get(0), e(b));
        }
        let d = d_operator(&z).unwrap();
        assert_eq!(d[1], Vector::from_pairs([(0, q(1)), (1, q(-1))]));
        let checks = zhu_spot_checks(g.structure(), &z, &[0, 1, 2], Window2::square(-3, 4));
        for c in &checks {
            assert!(c.is_pass(), "{c}");
        }
    }

    #[test]
    fn xw_module() {
        let g = graded(8);
        let m = ModuleStructure::adjoint(g.structure());
        let x = xw_map(&m, &g, 6).unwrap();
        let s = x.entry(1, 0).unwrap();
        assert_eq!(s.get(-1), e(1));
        assert_eq!(s.get(0), e(0));
        assert_eq!(s.num_terms(), 2);
        // the phi-associativity instance (t, t, 1)
        let d = ProductData::one_sided(&x, &e(1), &e(1), &e(0)).unwrap();
        let phi = x.kind.phi.clone().unwrap();
        let label = |i: usize| x.space.label(i);
        let t = substituted_assoc_at(&d, &x.iterate(&e(1), &e(1), &e(0)).unwrap(), &x1_minus_x2_pow0(), &phi_increment(&phi), &Window2::new((0, 4), (-3, 2)), &label)
            .unwrap();
        assert_eq!(t.verdict(), Verdict::Pass);
        let r = check_module(&x, ModuleVariant::Phi, &ModuleParams::default(), &e(1), &e(1), &e(0), Window2::new((0, 4), (-3, 2)));
        assert_eq!((r.verdict, r.multiplier), (Verdict::Pass, Some(0)), "{r}");
        let wrong = ModuleParams { phi: Some(group_associate(&FormalGroupLaw::additive(), 6).unwrap()), ..Default::default() };
        let r = check_module(&x, ModuleVariant::Phi, &wrong, &e(1), &e(1), &e(0), Window2::new((0, 4), (-3, 2)));
        assert_eq!(r.verdict, Verdict::Fail, "{r}");
    }

    fn x1_minus_x2_pow0() -> PowerSeries {
        crate::harness::x1_minus_x2_pow(0)
    }

    #[test]
    fn phi_identity_golden() {
        let g = graded(8);
        let x = xw_map(&ModuleStructure::adjoint(g.structure()), &g, 6).unwrap();
        let c = x.iterate(&e(1), &e(1), &e(0)).unwrap();
        // e^{-x0} x2^-2 t^2 + (e^{-x0} + 1) x2^-1 t + 1
        for a in 0..5 {
            let em = qr(if a % 2 == 0 { 1 } else { -1 }, 1) / factorial(a as u64);
            assert_eq!(nested_get(&c, a, -2).unwrap(), Vector::from_pairs([(2, em.clone())]));
            let one = if a == 0 { q(1) } else { q(0) };
            assert_eq!(nested_get(&c, a, -1).unwrap(), Vector::from_pairs([(1, em + &one)]));
            assert_eq!(nested_get(&c, a, 0).unwrap(), Vector::from_pairs([(0, one)]));
        }
    }

    #[test]
    fn module_checks_and_transforms() {
        let g = graded(8);
        let m = ModuleStructure::adjoint(g.structure());
        let r = check_module(&m, ModuleVariant::Module, &ModuleParams::default(), &e(1), &e(1), &e(1), Window2::square(-3, 4));
        assert_eq!((r.verdict, r.multiplier), (Verdict::Pass, Some(0)), "{r}");
        assert_eq!(r.window["forms-agree"], true);
        let x = xw_map(&m, &g, 6).unwrap();
        let w = Window2::new((0, 4), (-3, 2));
        let retimed = module_transform(&x, &GSeries::log1p(6), ModuleTransform::Retime).unwrap();
        let phi = retimed.kind.phi.clone().unwrap();
        assert_eq!(phi.coeff(1, 1), Some(q(1)));
        assert_eq!(phi.coeff(1, 2), Some(q(0)));
        for (a, b, c) in [(1, 1, 0), (1, 2, 0), (2, 1, 1)] {
            let r1 = check_module(&x, ModuleVariant::Phi, &ModuleParams::default(), &e(a), &e(b), &e(c), w);
            let r2 = check_module(&retimed, ModuleVariant::Phi, &ModuleParams::default(), &e(a), &e(b), &e(c), w);
            assert_eq!(r1.verdict, r2.verdict, "{r1} / {r2}");
            assert!(r1.is_pass());
        }
        let there = module_transform(&m, &GSeries::expm1(6), ModuleTransform::CoordinateChange).unwrap();
        let back = module_transform(&there, &GSeries::log1p(6), ModuleTransform::CoordinateChange).unwrap();
        for u in 0..4 {
            for w in 0..4 {
                let s = back.entry(u, w).unwrap();
                assert_eq!(s, &m.entry(u, w).unwrap().truncate(s.order()));
            }
        }
        let r = check_module(&there, ModuleVariant::Module, &ModuleParams::default(), &e(1), &e(1), &e(0), Window2::new((-2, 4), (-2, 4)));
        assert!(r.is_pass(), "{r}");
    }

    #[test]
    fn d_property_and_commutator() {
        let g = graded(8);
        let x = xw_map(&ModuleStructure::adjoint(g.structure()), &g, 6).unwrap();
        let r = check_phi_d_and_commutator(&x, &[0, 1, 2], 4, Window2::new((-3, 3), (-3, 3)));
        assert!(r.is_pass(), "{r}");
        let dt = d_operator(&x.algebra).unwrap();
        let s = x.op(&dt[1], &e(0)).unwrap();
        assert_eq!(s.get(-1), Vector::from_pairs([(1, q(-1))]));
        assert_eq!(s.get(0), Vector::new());
    }
}
