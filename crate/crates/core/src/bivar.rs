//! Bivariate series under explicit expansion conventions.
//!
//! Iterated series are stored nested: `Nested<C> = Series<Series<C>>`,
//! an outer series whose coefficients are inner series. An element of
//! `K((y))((t))` is a nested series with outer variable `t` and inner
//! variable `y`. Each inner row carries its own precision, so the
//! staircase precision of truncated power series is represented exactly.
//!
//! Conventions:
//! * `PP`: power series in both variables, total-degree precision.
//! * `LP`: Laurent in the first variable, power series in the second
//!   (outer) variable; row lower bounds are exact.
//! * `WW`: a finite rectangle of coefficients.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{exhausted, Error, Result};
use crate::formal_group::FormalGroupLaw;
use crate::gseries::GSeries;
use crate::literal::{parse_literal, variables, Literal};
use crate::power::PowerSeries;
use crate::report::{CheckReport, Tally};
use crate::scalar::{binomial, factorial, fmt_q, Q};
use crate::series::{ord_add, push_term, Act, Coeff, LaurentSeries, Series, Vector, EXACT};

pub type Nested<C> = Series<Series<C>>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Convention {
    PP,
    LP,
    WW,
}

/// Inclusive exponent rectangle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window2 {
    pub var1: (i64, i64),
    pub var2: (i64, i64),
}

impl Window2 {
    pub fn square(lo: i64, hi: i64) -> Self {
        Window2 { var1: (lo, hi), var2: (lo, hi) }
    }

    pub fn new(var1: (i64, i64), var2: (i64, i64)) -> Self {
        Window2 { var1, var2 }
    }

    pub fn points(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        (self.var2.0..=self.var2.1).flat_map(move |b| (self.var1.0..=self.var1.1).map(move |a| (a, b)))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum BiSeries {
    PP { vars: [String; 2], series: PowerSeries },
    /// Laurent in `vars[0]` (inner), power series in `vars[1]` (outer).
    LP { vars: [String; 2], series: Nested<Q> },
    WW { vars: [String; 2], window: Window2, coeffs: BTreeMap<(i64, i64), Q> },
}

impl BiSeries {
    pub fn convention(&self) -> Convention {
        match self {
            BiSeries::PP { .. } => Convention::PP,
            BiSeries::LP { .. } => Convention::LP,
            BiSeries::WW { .. } => Convention::WW,
        }
    }

    pub fn vars(&self) -> &[String; 2] {
        match self {
            BiSeries::PP { vars, .. } | BiSeries::LP { vars, .. } | BiSeries::WW { vars, .. } => vars,
        }
    }

    pub fn pp(vars: [&str; 2], series: PowerSeries) -> Self {
        BiSeries::PP { vars: vars.map(String::from), series }
    }

    pub fn lp(vars: [&str; 2], series: Nested<Q>) -> Self {
        BiSeries::LP { vars: vars.map(String::from), series }
    }

    /// Coefficient of `vars[0]^e1 vars[1]^e2`, `None` if unknown.
    pub fn coefficient(&self, e1: i64, e2: i64) -> Option<Q> {
        match self {
            BiSeries::PP { series, .. } => {
                if e1 < 0 || e2 < 0 {
                    return Some(Q::zero());
                }
                if e1 + e2 >= series.order() {
                    return None;
                }
                Some(series.get(&[e1 as u32, e2 as u32]))
            }
            BiSeries::LP { series, .. } => {
                if e2 < 0 {
                    return Some(Q::zero());
                }
                nested_get(series, e2, e1)
            }
            BiSeries::WW { window, coeffs, .. } => {
                let inside = (window.var1.0..=window.var1.1).contains(&e1)
                    && (window.var2.0..=window.var2.1).contains(&e2);
                inside.then(|| coeffs.get(&(e1, e2)).cloned().unwrap_or_else(Q::zero))
            }
        }
    }

    /// Restricts to a window; coefficients unknown in the source are omitted
    /// from the table and make the conversion fail.
    pub fn to_window(&self, window: Window2) -> Result<BiSeries> {
        let mut coeffs = BTreeMap::new();
        for (a, b) in window.points() {
            match self.coefficient(a, b) {
                Some(c) if !c.is_zero() => {
                    coeffs.insert((a, b), c);
                }
                Some(_) => {}
                None => return Err(exhausted(format!("coefficient ({a},{b}) is not known"))),
            }
        }
        Ok(BiSeries::WW { vars: self.vars().clone(), window, coeffs })
    }

    pub fn to_literal(&self) -> String {
        let v = self.vars();
        match self {
            BiSeries::PP { series, .. } => series.to_literal(&[&v[0], &v[1]]),
            BiSeries::LP { series, .. } => nested_literal(series, &v[0], &v[1]),
            BiSeries::WW { coeffs, .. } => {
                let mut out = String::new();
                for ((a, b), c) in coeffs {
                    push_term(&mut out, c, &[(&v[0], *a), (&v[1], *b)]);
                }
                if out.is_empty() {
                    out.push('0');
                }
                out
            }
        }
    }

    /// JSON form of a windowed series.
    pub fn to_json(&self) -> serde_json::Value {
        match self {
            BiSeries::WW { vars, window, coeffs } => serde_json::json!({
                "vars": vars,
                "window": window,
                "coeffs": coeffs.iter().map(|((a, b), c)| serde_json::json!([a, b, fmt_q(c)])).collect::<Vec<_>>(),
            }),
            other => serde_json::json!({ "vars": other.vars(), "literal": other.to_literal() }),
        }
    }
}

/// Prints a nested series as `inner`/`outer` literal with an `O(inner^a, outer^b)`
/// marker, `a` being the least row precision.
pub fn nested_literal(s: &Nested<Q>, inner: &str, outer: &str) -> String {
    let a = s.terms().map(|(_, r)| r.order()).min().unwrap_or(EXACT);
    let mut keyed: Vec<(i64, i64, &Q)> = Vec::new();
    for (j, row) in s.terms() {
        for (i, c) in row.terms() {
            if i < a {
                keyed.push((j, i, c));
            }
        }
    }
    keyed.sort_by_key(|(j, i, _)| (*j + *i, *j));
    let mut out = String::new();
    for (j, i, c) in keyed {
        push_term(&mut out, c, &[(inner, i), (outer, j)]);
    }
    if out.is_empty() {
        out.push('0');
    }
    let marks: Vec<String> = [(inner, a), (outer, s.order())]
        .iter()
        .filter(|(_, n)| *n < EXACT)
        .map(|(v, n)| format!("{v}^{n}"))
        .collect();
    if !marks.is_empty() {
        out.push_str(&format!(" + O({})", marks.join(", ")));
    }
    out
}

fn exponents_of(m: &[(String, i64)], vars: &[String; 2]) -> Result<(i64, i64)> {
    let mut e = (0, 0);
    for (v, d) in m {
        if *v == vars[0] {
            e.0 += d;
        } else if *v == vars[1] {
            e.1 += d;
        } else {
            return Err(Error::Parse(format!("unexpected variable {v}")));
        }
    }
    Ok(e)
}

fn check_vars(lit: &Literal, vars: &[String; 2]) -> Result<()> {
    for v in variables(lit) {
        if !vars.contains(&v) {
            return Err(Error::Parse(format!("unexpected variable {v}; expected {vars:?}")));
        }
    }
    Ok(())
}

/// Parses a power series in two variables with an optional `O(x, y)^N` marker.
pub fn parse_pp(s: &str, vars: [&str; 2]) -> Result<PowerSeries> {
    let vars = vars.map(String::from);
    let lit = parse_literal(s)?;
    check_vars(&lit, &vars)?;
    if !lit.orders.is_empty() {
        return Err(Error::Parse("power series take a total-degree marker O(x, y)^N".into()));
    }
    let order = lit.total.as_ref().map(|(_, n)| *n).unwrap_or(EXACT);
    let mut terms = Vec::new();
    for (c, m) in &lit.terms {
        let (a, b) = exponents_of(m, &vars)?;
        if a < 0 || b < 0 {
            return Err(Error::ConventionMismatch("negative exponent in a power series".into()));
        }
        if a + b >= order {
            return Err(Error::Parse("term beyond the precision marker".into()));
        }
        terms.push((vec![a as u32, b as u32], c.clone()));
    }
    Ok(PowerSeries::new(2, order, terms))
}

/// Parses a series Laurent in `vars[0]` and power series in `vars[1]`,
/// with an optional `O(x^a, z^b)` marker.
pub fn parse_lp(s: &str, vars: [&str; 2]) -> Result<Nested<Q>> {
    let vars = vars.map(String::from);
    let lit = parse_literal(s)?;
    check_vars(&lit, &vars)?;
    if lit.total.is_some() {
        return Err(Error::Parse("Laurent-power series take O(x^a, z^b) markers".into()));
    }
    let (mut inner, mut outer) = (EXACT, EXACT);
    for (v, n) in &lit.orders {
        if *v == vars[0] {
            inner = *n;
        } else {
            outer = *n;
        }
    }
    let mut rows: BTreeMap<i64, Vec<(i64, Q)>> = BTreeMap::new();
    for (c, m) in &lit.terms {
        let (a, b) = exponents_of(m, &vars)?;
        if b < 0 {
            return Err(Error::ConventionMismatch(format!("negative power of {}", vars[1])));
        }
        if a >= inner || b >= outer {
            return Err(Error::Parse("term beyond the precision marker".into()));
        }
        rows.entry(b).or_default().push((a, c.clone()));
    }
    let top = if outer < EXACT { outer } else { rows.keys().next_back().map(|b| b + 1).unwrap_or(0) };
    Ok(Series::new(
        outer,
        (0..top).map(|b| (b, LaurentSeries::new(inner, rows.remove(&b).unwrap_or_default()))),
    ))
}

/// Coefficient of `outer^o inner^i`, `None` when unknown.
pub fn nested_get<C: Coeff>(n: &Nested<C>, outer: i64, inner: i64) -> Option<C> {
    if !n.known(outer) {
        return None;
    }
    match n.coeff(outer) {
        None => Some(C::additive_zero()),
        Some(row) => row.known(inner).then(|| row.get(inner)),
    }
}

/// Drops everything at or beyond `outer^o` and, in every row, `inner^i`.
pub fn clip<C: Coeff>(n: &Nested<C>, outer: i64, inner: i64) -> Nested<C> {
    let t = n.truncate(outer);
    Series::new(t.order(), t.terms().map(|(e, r)| (e, r.truncate(inner))))
}

/// A series in the outer variable, with constant inner rows.
pub fn outer_only(s: &LaurentSeries) -> Nested<Q> {
    s.map(|c| LaurentSeries::constant(c.clone()))
}

/// A series in the inner variable, placed at outer exponent 0.
pub fn inner_only<C: Coeff>(s: &Series<C>) -> Nested<C> {
    Series::exact([(0, s.clone())])
}

/// Least inner exponent over all stored rows.
pub fn inner_low<C: Coeff>(n: &Nested<C>) -> i64 {
    n.terms().map(|(_, r)| r.low()).min().unwrap_or(EXACT)
}

/// Inverse in `K((y))((t))`: the lowest known outer row must be a unit in
/// `K((y))`. Rows are capped at `inner_cap`, the outer series at `outer_cap`.
pub fn nested_inv(d: &Nested<Q>, inner_cap: i64, outer_cap: i64) -> Result<Nested<Q>> {
    let (j0, u0) = match d.terms().next() {
        Some((j, r)) => (j, r.clone()),
        None => return Err(Error::ZeroDenominator),
    };
    if u0.num_terms() == 0 {
        return Err(Error::ZeroDenominator);
    }
    let b0 = u0.inv(inner_cap)?;
    if d.num_terms() == 1 && d.is_exact() {
        return Ok(Series::exact([(-j0, b0)]).truncate(outer_cap));
    }
    let out_order = ord_add(ord_add(d.order(), -j0), -j0).min(outer_cap);
    if out_order >= EXACT {
        return Err(exhausted("inverse of a non-monomial needs an outer cap"));
    }
    let len = out_order + j0;
    if len <= 0 {
        return Ok(Series::zero_mod(out_order));
    }
    let u: Vec<LaurentSeries> = (0..len).map(|k| d.get(j0 + k)).collect();
    let mut b: Vec<LaurentSeries> = vec![b0.clone()];
    for n in 1..len as usize {
        let mut s = LaurentSeries::zero();
        for k in 1..=n {
            if !u[k].is_exact_zero() {
                s = s.plus(&u[k].times(&b[n - k]).truncate(inner_cap));
            }
        }
        b.push(b0.times(&s).truncate(inner_cap).negated());
    }
    Ok(Series::new(out_order, b.into_iter().enumerate().map(|(i, c)| (i as i64 - j0, c))))
}

/// Integer power in `K((y))((t))`, clipped to the given caps.
pub fn nested_pow(d: &Nested<Q>, n: i64, inner_cap: i64, outer_cap: i64) -> Result<Nested<Q>> {
    let base = if n < 0 { nested_inv(d, inner_cap, outer_cap)? } else { d.clone() };
    let mut acc: Nested<Q> = Series::exact([(0, LaurentSeries::one())]);
    for _ in 0..n.unsigned_abs() {
        acc = clip(&acc.times(&base), outer_cap, inner_cap);
    }
    Ok(acc)
}

/// Rows of the increment below outer degree 1 must vanish; they are exactly
/// zero by the unit law even when stored as zero modulo some inner order.
fn increment(eps: &Nested<Q>, var: &str) -> Result<Nested<Q>> {
    if eps.terms().any(|(e, r)| e < 1 && r.num_terms() > 0) {
        return Err(Error::DomainViolation(format!("substituted increment must vanish at {var} = 0")));
    }
    Ok(Series::new(eps.order(), eps.terms().filter(|(e, _)| *e >= 1).map(|(e, r)| (e, r.clone()))))
}

/// `A(y, t)|_{y = base + ε(base, t)}` for `A ∈ W((y))((t))` (outer `t`,
/// inner `y`) and `ε ∈ t K((base))[[t]]` (outer `t`, inner `base`).
/// Each row is Taylor expanded around `base`; the result has outer `t`
/// and inner `base`, known below `t^outer_cap` at most.
pub fn subst_laurent_base<C: Act<Q>>(a: &Nested<C>, eps: &Nested<Q>, outer_cap: i64) -> Result<Nested<C>> {
    let eps = &increment(eps, "t")?;
    let t_ord = a.order().min(outer_cap);
    let finite_rows = a.is_exact()
        && eps.is_exact()
        && a.terms().all(|(_, r)| r.is_exact() && r.low() >= 0);
    if t_ord >= EXACT && !finite_rows {
        return Err(exhausted("substitution into a Laurent row needs an outer cap"));
    }
    let a_low = a.low();
    let pow_cap = if t_ord >= EXACT { EXACT } else { t_ord - a_low };
    let mut acc: Nested<C> = Series::zero_mod(t_ord);
    let mut pows: Vec<Nested<Q>> = vec![Series::exact([(0, LaurentSeries::one())])];
    for (e, row) in a.terms() {
        if e >= t_ord {
            break;
        }
        let kmax = if t_ord >= EXACT { row.high().unwrap_or(0).max(0) } else { (t_ord - e - 1) / eps.low() };
        let mut d = row.clone();
        for k in 0..=kmax {
            if k > 0 {
                d = d.derivative().scaled(&(Q::one() / Q::from_integer(k.into())));
            }
            if d.num_terms() == 0 && d.is_exact() {
                break;
            }
            while pows.len() as i64 <= k {
                let next = pows.last().unwrap().times(eps).truncate(pow_cap);
                pows.push(next);
            }
            let term: Nested<C> = pows[k as usize].map(|r| d.times(r));
            acc = acc.plus(&term.shift(e));
        }
    }
    Ok(acc)
}

/// `A(y1, y2)|_{y1 = y2 + ε(y2, s)}` for `A` with outer `y2` and inner `y1`,
/// `ε ∈ s K((y2))[[s]]` (outer `s`, inner `y2`). Every coefficient of `A`,
/// known or not, must have `y1`-exponent at least `floor`; then
/// `D_k(y2) = (∂_1^k A / k!)|_{y1 = y2}` is a Laurent series and the result
/// is `Σ_k D_k ε^k` with outer `s` and inner `y2`.
pub fn subst_diagonal<C: Act<Q>>(a: &Nested<C>, floor: i64, eps: &Nested<Q>, outer_cap: i64) -> Result<Nested<C>> {
    let eps = &increment(eps, "s")?;
    if let Some((e, r)) = a.terms().find(|(_, r)| r.num_terms() > 0 && r.low() < floor) {
        return Err(Error::UnboundedPrincipalPart(format!(
            "row {e} reaches exponent {} below the floor {floor}",
            r.low()
        )));
    }
    let mut kcap = outer_cap;
    if kcap >= EXACT {
        let poly = a.is_exact() && eps.is_exact() && a.terms().all(|(_, r)| r.is_exact()) && floor >= 0;
        if !poly {
            return Err(exhausted("diagonal substitution needs an outer cap"));
        }
        kcap = a.terms().filter_map(|(_, r)| r.high()).max().unwrap_or(0) + 1;
    }
    let mut acc: Nested<C> = Series::zero_mod(outer_cap);
    let mut pow: Nested<Q> = Series::exact([(0, LaurentSeries::one())]);
    for k in 0..kcap {
        let mut order = ord_add(a.order(), floor - k);
        let mut terms: Vec<(i64, C)> = Vec::new();
        for (e, row) in a.terms() {
            order = order.min(ord_add(ord_add(row.order(), e), -k));
            for (m, c) in row.terms() {
                let b = binomial(m, k as u64);
                if !b.is_zero() {
                    terms.push((e + m - k, c.scaled(&b)));
                }
            }
        }
        let dk: Series<C> = Series::new(order, terms);
        if k > 0 {
            pow = pow.times(eps).truncate(outer_cap);
        }
        if !(dk.num_terms() == 0 && dk.is_exact()) {
            acc = acc.plus(&pow.map(|r| dk.times(r)));
        }
    }
    Ok(acc)
}

/// `ψ(x, z) ↦ ψ(x, g(z))` for `ψ` Laurent in `x`, power series in `z`.
pub fn substitute_second(a: &Nested<Q>, g: &GSeries) -> Result<Nested<Q>> {
    if a.low() < 0 {
        return Err(Error::ConventionMismatch("second variable carries negative powers".into()));
    }
    a.compose(g.series(), EXACT)
}

/// `ι_{first, other}(num / den)`: Laurent in the variable with index
/// `laurent`, power series in the other. Rows are capped at `inner_cap`,
/// the power-series variable at `outer_cap`.
pub fn iota_expand(
    num: &PowerSeries,
    den: &PowerSeries,
    laurent: usize,
    inner_cap: i64,
    outer_cap: i64,
) -> Result<Nested<Q>> {
    let outer = 1 - laurent;
    let n = num.to_nested(outer);
    let d = den.to_nested(outer);
    if d.terms().all(|(_, r)| r.num_terms() == 0) {
        return Err(Error::ZeroDenominator);
    }
    let shift = inner_low(&d).min(0);
    let inv = nested_inv(&d, inner_cap - shift.min(0) + 1, outer_cap)?;
    Ok(clip(&n.times(&inv), outer_cap, inner_cap))
}

/// Target of a by-name substitution.
#[derive(Clone, Debug)]
pub struct Substitution {
    /// Variable being replaced.
    pub target: String,
    /// Replacement, Laurent in `vars[0]` and power series in `vars[1]`,
    /// with `s(vars[0], 0) = vars[0]`.
    pub s: BiSeries,
}

/// Replaces `target` in `a` by `s`. When the Laurent variable of `s` is the
/// other variable of `a` the diagonal expansion is used (result Laurent in
/// that variable, power series in the new one); when the power variable of
/// `s` is the other variable the Taylor expansion around the new variable is
/// used (result Laurent in the new variable, power series in the other).
pub fn substitute_var(a: &BiSeries, sub: &Substitution, outer_cap: i64, floor: Option<i64>) -> Result<BiSeries> {
    let av = a.vars();
    let ti = av
        .iter()
        .position(|v| *v == sub.target)
        .ok_or_else(|| Error::ConventionMismatch(format!("{} does not occur", sub.target)))?;
    let other = av[1 - ti].clone();
    let (sv, s) = match &sub.s {
        BiSeries::LP { vars, series } => (vars.clone(), series.clone()),
        BiSeries::PP { vars, series } => (vars.clone(), series.to_nested(1)),
        BiSeries::WW { .. } => return Err(Error::ConventionMismatch("windowed replacement".into())),
    };
    let a_nested = |outer: usize| -> Result<Nested<Q>> {
        match a {
            BiSeries::PP { series, .. } => Ok(series.to_nested(outer)),
            BiSeries::LP { series, .. } if outer == 1 => Ok(series.clone()),
            _ => Err(Error::ConventionMismatch("substitution source must be PP or LP with the target Laurent".into())),
        }
    };
    let eps = s.minus(&Series::exact([(0, LaurentSeries::x())]));
    if sv[0] == other {
        let n = a_nested(1 - ti)?;
        let fl = match floor {
            Some(f) => f,
            None if n.is_exact() && n.terms().all(|(_, r)| r.is_exact()) => inner_low(&n).min(0),
            None => {
                return Err(Error::UnboundedPrincipalPart(format!(
                    "no floor for the {} principal part",
                    sub.target
                )))
            }
        };
        let r = subst_diagonal(&n, fl, &eps, outer_cap)?;
        Ok(BiSeries::LP { vars: [other, sv[1].clone()], series: r })
    } else if sv[1] == other {
        let n = a_nested(1 - ti)?;
        let r = subst_laurent_base(&n, &eps, outer_cap)?;
        Ok(BiSeries::LP { vars: [sv[0].clone(), other], series: r })
    } else {
        Err(Error::ConventionMismatch("replacement must involve the other variable".into()))
    }
}

/// Compares two coefficient functions on a window, slow index `var2`.
pub fn compare_q(
    t: &mut Tally,
    w: &Window2,
    lhs: impl Fn(i64, i64) -> Option<Q>,
    rhs: impl Fn(i64, i64) -> Option<Q>,
) {
    for (a, b) in w.points() {
        t.scalar(&[a, b], lhs(a, b).as_ref(), rhs(a, b).as_ref());
    }
}

/// Vector-valued variant of [`compare_q`].
pub fn compare_v(
    t: &mut Tally,
    w: &Window2,
    lhs: impl Fn(i64, i64) -> Option<Vector>,
    rhs: impl Fn(i64, i64) -> Option<Vector>,
    label: &dyn Fn(usize) -> String,
) {
    for (a, b) in w.points() {
        t.vector(&[a, b], lhs(a, b).as_ref(), rhs(a, b).as_ref(), label);
    }
}

/// Checks `(A|_{x1=F(x0,x2)})|_{x0=f^{-1}(f(x1)-f(x2))} = A` on a window.
/// `a` has outer `x2` and inner `x1`; `order` is the total degree used for
/// `f^{-1}(f(x1) - f(x2))`.
pub fn double_substitution_roundtrip(a: &Nested<Q>, fg: &FormalGroupLaw, window: Window2, order: i64) -> CheckReport {
    let report = CheckReport::new("double-substitution")
        .input("a", nested_literal(a, "x1", "x2"))
        .input("group", fg.to_literal())
        .range("x1", window.var1.0, window.var1.1)
        .range("x2", window.var2.0, window.var2.1);
    let cap = window.var2.1 + 1;
    let run = || -> Result<Nested<Q>> {
        let eps1 = fg.series().minus(&PowerSeries::var(2, 0)).to_nested(1);
        let b = subst_laurent_base(a, &eps1, cap)?;
        let h = fg.subtraction(order)?;
        let eps2 = h.minus(&PowerSeries::var(2, 0)).to_nested(1);
        subst_laurent_base(&b, &eps2, cap)
    };
    match run() {
        Err(e) => report.insufficient(e.to_string()),
        Ok(c) => {
            let mut t = Tally::default();
            compare_q(&mut t, &window, |x1, x2| nested_get(&c, x2, x1), |x1, x2| nested_get(a, x2, x1));
            report.tally(&t)
        }
    }
}

/// `x^m e^{m z}`-style helper: the series `x·exp(z)` as LP in `(x, z)`.
pub fn x_exp_z(z_order: i64) -> Nested<Q> {
    Series::new(
        z_order,
        (0..z_order).map(|k| (k, LaurentSeries::monomial(Q::one() / factorial(k as u64), 1))),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qr};

    fn pp(s: &str) -> PowerSeries {
        parse_pp(s, ["x1", "x2"]).unwrap()
    }

    #[test]
    fn iota_both_directions() {
        let one = PowerSeries::constant(2, q(1));
        let d = pp("x1 - x2");
        let a = iota_expand(&one, &d, 0, 10, 6).unwrap();
        for j in 0..6 {
            assert_eq!(nested_get(&a, j, -1 - j), Some(q(1)));
            assert_eq!(a.get(j).num_terms(), 1);
        }
        let back = clip(&a.times(&d.to_nested(1)), 6, 10);
        assert_eq!(nested_get(&back, 0, 0), Some(q(1)));
        for j in 1..6 {
            assert!(back.get(j).vanishes());
        }
        let b = iota_expand(&one, &d, 1, 10, 6).unwrap();
        for j in 0..6 {
            assert_eq!(nested_get(&b, j, -1 - j), Some(q(-1)));
        }
    }

    #[test]
    fn iota_of_multiplicative_law() {
        let one = PowerSeries::constant(2, q(1));
        let fm = parse_pp("x + y + x*y", ["x", "y"]).unwrap();
        let a = iota_expand(&one, &fm, 0, 8, 5).unwrap();
        assert_eq!(nested_get(&a, 0, -1), Some(q(1)));
        assert_eq!(nested_get(&a, 1, -2), Some(q(-1)));
        assert_eq!(nested_get(&a, 1, -1), Some(q(-1)));
        let prod = a.times(&fm.to_nested(1));
        for j in 0..5 {
            for i in -4..6 {
                if let Some(c) = nested_get(&prod, j, i) {
                    assert_eq!(c, q(if (i, j) == (0, 0) { 1 } else { 0 }));
                }
            }
        }
    }

    #[test]
    fn substitute_second_examples() {
        let psi = parse_lp("x + z", ["x", "z"]).unwrap();
        let r = substitute_second(&psi, &GSeries::log1p(6)).unwrap();
        assert_eq!(nested_get(&r, 2, 0), Some(qr(-1, 2)));
        assert_eq!(nested_get(&r, 0, 1), Some(q(1)));
        let xez = x_exp_z(7);
        let r = substitute_second(&xez, &GSeries::log1p(7)).unwrap();
        let expected = parse_lp("x + x*z + O(z^7)", ["x", "z"]).unwrap();
        assert_eq!(r, expected);
        assert_eq!(substitute_second(&xez, &GSeries::identity()).unwrap(), xez);
    }

    #[test]
    fn exponential_substitution() {
        // x1^m at x1 = x2 e^{x0} is x2^m sum_k m^k/k! x0^k.
        for m in [-2i64, -1, 0, 3] {
            let a = BiSeries::lp(["x1", "x2"], Series::exact([(0, LaurentSeries::monomial(q(1), m))]));
            let sub = Substitution { target: "x1".into(), s: BiSeries::lp(["x2", "x0"], x_exp_z(6)) };
            let r = substitute_var(&a, &sub, 6, None).unwrap();
            assert_eq!(r.vars(), &["x2".to_string(), "x0".to_string()]);
            for k in 0..6 {
                let want = Q::from_integer(m.pow(k as u32).into()) / factorial(k as u64);
                assert_eq!(r.coefficient(m, k), Some(want), "m={m} k={k}");
            }
        }
    }

    #[test]
    fn additive_substitutions() {
        let a = BiSeries::pp(["x1", "x2"], pp("x1 - x2"));
        let phi = parse_lp("x2 + x0", ["x2", "x0"]).unwrap();
        let sub = Substitution { target: "x1".into(), s: BiSeries::lp(["x2", "x0"], phi) };
        let r = substitute_var(&a, &sub, 5, None).unwrap();
        assert_eq!(r.coefficient(0, 1), Some(q(1)));
        assert_eq!(r.coefficient(1, 0), Some(q(0)));
        let x1 = BiSeries::pp(["x1", "x2"], pp("x1"));
        let f = BiSeries::pp(["x0", "x2"], parse_pp("x0 + x2 + x0*x2", ["x0", "x2"]).unwrap());
        let sub = Substitution { target: "x1".into(), s: f };
        let r = substitute_var(&x1, &sub, EXACT, None).unwrap();
        assert_eq!(r.coefficient(1, 1), Some(q(1)));
        assert_eq!(r.coefficient(0, 1), Some(q(1)));
        assert_eq!(r.coefficient(1, 0), Some(q(1)));
    }

    #[test]
    fn unbounded_principal_part_is_refused() {
        let a: Nested<Q> = Series::new(4, [(0, LaurentSeries::monomial(q(1), -3))]);
        let eps = parse_lp("z", ["x", "z"]).unwrap();
        assert!(matches!(subst_diagonal(&a, -1, &eps, 4), Err(Error::UnboundedPrincipalPart(_))));
    }

    #[test]
    fn double_substitution_examples() {
        let w = Window2::square(-6, 6);
        let mono = |c: i64, e1: i64, e2: i64| -> Nested<Q> { Series::exact([(e2, LaurentSeries::monomial(q(c), e1))]) };
        let cases = [
            (mono(1, 2, -1), FormalGroupLaw::additive()),
            (mono(1, -1, 0), FormalGroupLaw::multiplicative()),
            (mono(1, 0, 0), FormalGroupLaw::multiplicative()),
        ];
        for (a, g) in cases {
            let r = double_substitution_roundtrip(&a, &g, w, 16);
            assert!(r.is_pass(), "{r}");
        }
        // a perturbed second step must be caught
        let g = FormalGroupLaw::multiplicative();
        let a = mono(1, -1, 0);
        let eps1 = g.series().minus(&PowerSeries::var(2, 0)).to_nested(1);
        let b = subst_laurent_base(&a, &eps1, 7).unwrap();
        let wrong = parse_pp("x1 - x2", ["x1", "x2"]).unwrap().minus(&PowerSeries::var(2, 0)).to_nested(1);
        let c = subst_laurent_base(&b, &wrong, 7).unwrap();
        let mut t = Tally::default();
        compare_q(&mut t, &w, |x1, x2| nested_get(&c, x2, x1), |x1, x2| nested_get(&a, x2, x1));
        assert_eq!(t.verdict(), crate::report::Verdict::Fail);
    }

    #[test]
    fn literals_round_trip() {
        let p = pp("x1 + x2 + x1*x2 + O(x1, x2)^4");
        assert_eq!(p.to_literal(&["x1", "x2"]), "x1 + x2 + x1*x2 + O(x1, x2)^4");
        let l = parse_lp("x^-1 + 2*x*z - 1/3*z^2 + O(x^5, z^3)", ["x", "z"]).unwrap();
        let text = nested_literal(&l, "x", "z");
        assert_eq!(parse_lp(&text, ["x", "z"]).unwrap(), l);
        let ww = BiSeries::lp(["x", "z"], l).to_window(Window2::square(-1, 2)).unwrap();
        assert_eq!(ww.to_json()["window"]["var1"], serde_json::json!([-1, 2]));
    }
}
