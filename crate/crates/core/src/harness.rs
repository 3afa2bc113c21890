//! Windowed checks of the vertex F-algebra axioms.
//!
//! Products are nested series: `Y(u,x1)Y(v,x2)w` has outer `x2` and inner
//! `x1`, `Y(v,x2)Y(u,x1)w` outer `x1` inner `x2`, `Y(Y(u,x0)v,x2)w` outer
//! `x0` inner `x2`.

use num_traits::{One, Zero};
use serde_json::json;

use crate::bivar::{clip, compare_v, inner_low, nested_get, nested_inv, subst_diagonal, subst_laurent_base, Nested, Window2};
use crate::error::{Error, Result};
use crate::gseries::GSeries;
use crate::power::PowerSeries;
use crate::report::{CheckReport, Tally, Verdict, Witness};
use crate::scalar::{q, Q};
use crate::series::{Coeff, LaurentSeries, Series, Vector, EXACT};
use crate::vertex::{apply_matrix, Operators, VertexStructure};

pub const DEFAULT_SEARCH: i64 = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Window3 {
    pub x0: (i64, i64),
    pub x1: (i64, i64),
    pub x2: (i64, i64),
}

impl Window3 {
    pub fn cube(lo: i64, hi: i64) -> Self {
        Window3 { x0: (lo, hi), x1: (lo, hi), x2: (lo, hi) }
    }
}

fn labeler<O: Operators + ?Sized>(o: &O) -> impl Fn(usize) -> String + '_ {
    move |i| o.carrier().label(i)
}

fn report<O: Operators + ?Sized>(name: &str, o: &O, vecs: &[(&str, &Vector)]) -> CheckReport {
    let mut r = CheckReport::new(name).input("group", o.algebra().group.to_literal());
    for (k, x) in vecs {
        let lit = if *k == "w" { o.carrier().vector_literal(x) } else { o.algebra().space.vector_literal(x) };
        r = r.input(k, lit);
    }
    r
}

fn nested_is_exact<C: Coeff>(n: &Nested<C>) -> bool {
    n.is_exact() && n.terms().all(|(_, r)| r.is_exact())
}

pub fn x1_minus_x2_pow(k: i64) -> PowerSeries {
    PowerSeries::var(2, 0).minus(&PowerSeries::var(2, 1)).pow(k as u32, EXACT)
}

/// `Y(u,x1)Y(v,x2)w` and `Y(v,x2)Y(u,x1)w` with the x1 bound used for the
/// support test.
#[derive(Clone, Debug)]
pub struct ProductData {
    pub a: Nested<Vector>,
    pub b: Nested<Vector>,
    pub bound: i64,
}

impl ProductData {
    pub fn new<O: Operators + ?Sized>(o: &O, x: &Vector, y: &Vector, w: &Vector) -> Result<Self> {
        Ok(ProductData { a: o.product(x, y, w)?, b: o.product(y, x, w)?, bound: pp_bound(o, x, w) })
    }

    /// Only `Y(u,x1)Y(v,x2)w`; `b` is left empty.
    pub fn one_sided<O: Operators + ?Sized>(o: &O, x: &Vector, y: &Vector, w: &Vector) -> Result<Self> {
        Ok(ProductData { a: o.product(x, y, w)?, b: Series::zero(), bound: pp_bound(o, x, w) })
    }
}

/// Lower bound for x1 exponents of a support-bounded `q·Y(u,x1)Y(v,x2)w`:
/// the least exponent of `Y(u,x1)w`, or over all basis vectors when that
/// vanishes or is unavailable.
pub fn pp_bound<O: Operators + ?Sized>(o: &O, u: &Vector, w: &Vector) -> i64 {
    match o.op(u, w) {
        Ok(s) if s.num_terms() > 0 => s.low(),
        _ => o.op_floor(u),
    }
}

/// Every stored coefficient of `qa` (outer x2, inner x1) sits at x1 exponent
/// `>= bound + shift`.
pub fn pp_supported(qa: &Nested<Vector>, bound: i64, shift: i64) -> bool {
    qa.terms().all(|(_, r)| r.num_terms() == 0 || r.low() >= bound + shift)
}

/// Least x1 exponent of a multiplier in `(x1, x2)`.
pub fn x1_low(p: &PowerSeries) -> i64 {
    p.terms().map(|(e, _)| e[0] as i64).min().unwrap_or(0)
}

/// `(x1 - x2)^k Y(u,x1)Y(v,x2)w` against `(x1 - x2)^k Y(v,x2)Y(u,x1)w`.
pub fn weak_comm_at(d: &ProductData, p: &PowerSeries, window: &Window2, label: &dyn Fn(usize) -> String) -> Tally {
    let pa = d.a.times(&p.to_nested(1));
    let pb = d.b.times(&p.to_nested(0));
    let mut t = Tally::default();
    compare_v(&mut t, window, |x1, x2| nested_get(&pa, x2, x1), |x1, x2| nested_get(&pb, x1, x2), label);
    t
}

/// Least `k <= k_max` for which `(x1-x2)^k` equalizes both orders on every
/// panel vector. Exact polynomial data with a mismatch fails outright since
/// Laurent polynomials have no zero divisors.
pub fn weak_comm<O: Operators + ?Sized>(o: &O, x: &Vector, y: &Vector, panel: &[Vector], k_max: i64, window: Window2) -> CheckReport {
    let r = report("weak-comm", o, &[("u", x), ("v", y)])
        .range("x1", window.var1.0, window.var1.1)
        .range("x2", window.var2.0, window.var2.1)
        .window_entry("k_max", k_max);
    let label = labeler(o);
    let mut data = Vec::new();
    for w in panel {
        match ProductData::new(o, x, y, w) {
            Ok(d) => data.push(d),
            Err(Error::OverflowBeyondCap(_)) => continue,
            Err(e) => return r.insufficient(e.to_string()),
        }
    }
    if data.is_empty() {
        return r.insufficient("every panel vector leaves the degree cap");
    }
    let r = r.window_entry("panel", data.len());
    let exact = data.iter().all(|d| nested_is_exact(&d.a) && nested_is_exact(&d.b));
    let mut last = Tally::default();
    for k in 0..=k_max {
        let p = x1_minus_x2_pow(k);
        let mut t = Tally::default();
        for d in &data {
            t.merge(&weak_comm_at(d, &p, &window, &label));
        }
        match t.verdict() {
            Verdict::Pass => return r.multiplier(Some(k)).tally(&t),
            Verdict::Fail if exact => {
                return r.tally(&t).note("exact data differ, so no power of (x1 - x2) can help");
            }
            _ => last = t,
        }
    }
    match last.mismatch {
        Some(w) => r.insufficient(format!("no k <= {k_max}; last mismatch at {:?}", w.exponents)),
        None => r.tally(&last),
    }
}

/// `F(x0,x2)^l Y(u,F(x0,x2))Y(v,x2)w` against `F(x0,x2)^l Y(Y(u,x0)v,x2)w`
/// on a window in `(x0, x2)`.
pub fn weak_assoc_at<O: Operators + ?Sized>(o: &O, x: &Vector, y: &Vector, w: &Vector, l: i64, window: &Window2) -> Result<Tally> {
    let a = o.product(x, y, w)?;
    let c = o.iterate(x, y, w)?;
    let f = o.algebra().group.series();
    let cap = window.var2.1 + 1;
    let shifted = a.map(|row| row.shift(l));
    let eps = f.minus(&PowerSeries::var(2, 0)).to_nested(1);
    let lhs = subst_laurent_base(&shifted, &eps, cap)?;
    let fl = f.pow(l as u32, f.order()).to_nested(0);
    let rhs = c.times(&fl);
    let mut t = Tally::default();
    let label = labeler(o);
    compare_v(&mut t, window, |x0, x2| nested_get(&lhs, x2, x0), |x0, x2| nested_get(&rhs, x0, x2), &label);
    Ok(t)
}

/// Least `l <= l_max` for weak F-associativity. Running out of `l` is
/// reported as insufficient precision, never as a failure.
pub fn weak_assoc<O: Operators + ?Sized>(o: &O, x: &Vector, y: &Vector, w: &Vector, l_max: i64, window: Window2) -> CheckReport {
    let r = report("weak-assoc", o, &[("u", x), ("v", y), ("w", w)])
        .range("x0", window.var1.0, window.var1.1)
        .range("x2", window.var2.0, window.var2.1)
        .window_entry("l_max", l_max);
    let mut last = None;
    for l in 0..=l_max {
        match weak_assoc_at(o, x, y, w, l, &window) {
            Err(e) => return r.insufficient(e.to_string()),
            Ok(t) => match t.verdict() {
                Verdict::Pass => return r.multiplier(Some(l)).tally(&t),
                Verdict::InsufficientPrecision => return r.tally(&t),
                Verdict::Fail => last = t.mismatch,
            },
        }
    }
    let w = last.expect("loop ran at least once");
    r.insufficient(format!("no l <= {l_max}; last mismatch at {:?}", w.exponents))
}

/// `F(x2,x0) - x2` with outer `x0`, inner `x2`.
pub fn f_increment(v: &VertexStructure) -> Nested<Q> {
    v.group.series().to_nested(1).minus(&Series::exact([(0, LaurentSeries::x())]))
}

/// `(q·Y(u,x1)Y(v,x2)w)|_{x1 = x2 + ε(x2,x0)}` against
/// `q(x2 + ε, x2)·Y(Y(u,x0)v,x2)w`, window in `(x0, x2)`. `ε` has outer
/// `x0` and inner `x2`.
pub fn substituted_assoc_at(
    d: &ProductData,
    c: &Nested<Vector>,
    q: &PowerSeries,
    eps: &Nested<Q>,
    window: &Window2,
    label: &dyn Fn(usize) -> String,
) -> Result<Tally> {
    let qa = d.a.times(&q.to_nested(1));
    let cap = window.var1.1 + 1;
    let lhs = subst_diagonal(&qa, d.bound + x1_low(q), eps, cap)?;
    let qd = subst_diagonal(&q.to_nested(1), 0, eps, cap)?;
    let rhs = c.times(&qd);
    let mut t = Tally::default();
    compare_v(&mut t, window, |x0, x2| nested_get(&lhs, x0, x2), |x0, x2| nested_get(&rhs, x0, x2), label);
    Ok(t)
}

/// Searches `q = (x1 - x2)^k`, `k <= k_max`, for the least support-bounded
/// multiplier and checks the substituted identity there. A definite
/// mismatch at that `k` is a failure.
pub fn substituted_assoc_search<O: Operators + ?Sized>(
    name: &str,
    o: &O,
    x: &Vector,
    y: &Vector,
    w: &Vector,
    eps: &Nested<Q>,
    k_max: i64,
    window: Window2,
) -> CheckReport {
    let r = report(name, o, &[("u", x), ("v", y), ("w", w)])
        .range("x0", window.var1.0, window.var1.1)
        .range("x2", window.var2.0, window.var2.1)
        .window_entry("k_max", k_max);
    let run = || -> Result<CheckReport> {
        let d = ProductData::one_sided(o, x, y, w)?;
        let c = o.iterate(x, y, w)?;
        let label = labeler(o);
        for k in 0..=k_max {
            let p = x1_minus_x2_pow(k);
            if !pp_supported(&d.a.times(&p.to_nested(1)), d.bound, x1_low(&p)) {
                continue;
            }
            let t = substituted_assoc_at(&d, &c, &p, eps, &window, &label)?;
            return Ok(r.clone().multiplier(Some(k)).tally(&t));
        }
        Ok(r.clone().insufficient(format!("no k <= {k_max} bounds the x1 support")))
    };
    run().unwrap_or_else(|e| r.clone().insufficient(e.to_string()))
}

/// Alternative F-associativity on a window in `(x0, x2)`: the least `k`
/// making `(x1-x2)^k Y(u,x1)Y(v,x2)w` support-bounded, then
/// `(that)|_{x1=F(x2,x0)} = (F(x2,x0)-x2)^k Y(Y(u,x0)v,x2)w`. The weak
/// associativity verdict on the same input is recorded alongside.
pub fn f_assoc_alt<O: Operators + ?Sized>(o: &O, x: &Vector, y: &Vector, w: &Vector, k_max: i64, window: Window2) -> CheckReport {
    let eps = f_increment(o.algebra());
    let out = substituted_assoc_search("f-assoc-alt", o, x, y, w, &eps, k_max, window);
    let wa = weak_assoc(o, x, y, w, k_max, window);
    let agree = (out.verdict == Verdict::Pass) == (wa.verdict == Verdict::Pass);
    out.window_entry("weak-assoc", wa.verdict.as_str())
        .window_entry("formulations-agree", agree)
}

/// `Σ_n coef_n(a) · P_n` where `P_n = base^n · data`; `coef_n(a)` is the
/// `a`-th coefficient of the scalar series `f^{-n-1}` in the delta variable.
struct DeltaSum {
    /// per `n`: the product `base^n · data`
    products: Vec<(i64, Nested<Vector>)>,
    /// per `n`: `f^{-n-1}` in the free variable
    scalars: Vec<LaurentSeries>,
}

impl DeltaSum {
    #[allow(clippy::too_many_arguments)]
    fn build(
        base: &Nested<Q>,
        data: &Nested<Vector>,
        f: &LaurentSeries,
        n_lo: i64,
        n_hi: i64,
        outer_cap: i64,
        inner_cap: i64,
        scalar_cap: i64,
    ) -> Result<Self> {
        let mut products = Vec::new();
        let mut scalars = Vec::new();
        if n_lo > n_hi {
            return Ok(DeltaSum { products, scalars });
        }
        let mut pw = if n_lo < 0 {
            let inv = nested_inv(base, inner_cap, outer_cap)?;
            let mut acc: Nested<Q> = Series::exact([(0, LaurentSeries::one())]);
            for _ in 0..(-n_lo) {
                acc = clip(&acc.times(&inv), outer_cap, inner_cap);
            }
            acc
        } else {
            let mut acc: Nested<Q> = Series::exact([(0, LaurentSeries::one())]);
            for _ in 0..n_lo {
                acc = clip(&acc.times(base), outer_cap, inner_cap);
            }
            acc
        };
        for n in n_lo..=n_hi {
            if n > n_lo {
                pw = clip(&pw.times(base), outer_cap, inner_cap);
            }
            products.push((n, data.times(&pw)));
            scalars.push(f.pow(-n - 1, scalar_cap)?);
        }
        Ok(DeltaSum { products, scalars })
    }

    /// Coefficient at scalar exponent `s`, outer `o`, inner `i`; `None` when
    /// any contributing term is unknown.
    fn coeff(&self, s: i64, o: i64, i: i64, sign: bool) -> Option<Vector> {
        let mut acc = Vector::new();
        for ((n, p), sc) in self.products.iter().zip(&self.scalars) {
            if !sc.known(s) {
                return None;
            }
            let c = sc.get(s);
            if c.is_zero() {
                continue;
            }
            let c = if sign && n % 2 != 0 { -c } else { c };
            acc = acc.plus(&nested_get(p, o, i)?.scaled(&c));
        }
        Some(acc)
    }
}

/// Jacobi F-identity on a box of `(x0, x1, x2)` exponents. Each delta term
/// is a sum over `n` of `f(z)^{-n-1}` times a power of the two-variable
/// difference; the range of `n` is bounded from the supports of the three
/// products.
pub fn jacobi_f(v: &VertexStructure, x: &Vector, y: &Vector, w: &Vector, b: Window3) -> CheckReport {
    let r = report("jacobi", v, &[("u", x), ("v", y), ("w", w)])
        .range("x0", b.x0.0, b.x0.1)
        .range("x1", b.x1.0, b.x1.1)
        .range("x2", b.x2.0, b.x2.1);
    let run = || -> Result<Tally> {
        let a = v.product(x, y, w)?;
        let bb = v.product(y, x, w)?;
        let c = v.iterate(x, y, w)?;
        let lows = |n: &Nested<Vector>| -> Result<(i64, i64)> {
            if n.num_terms() == 0 && n.is_exact() {
                return Ok((0, 0));
            }
            let inner = inner_low(n);
            if inner >= EXACT {
                return Err(Error::UnboundedPrincipalPart("no stored row fixes an inner bound".into()));
            }
            Ok((n.low(), inner))
        };
        let (l2, l1) = lows(&a)?;
        let l1 = l1.min(v.floor(x));
        let (m1, m2) = lows(&bb)?;
        let m2 = m2.min(v.floor(y));
        let (k0, k2) = lows(&c)?;
        // enough of f for every power the sums below can reach
        let hi = b.x0.1.max(b.x1.1).max(b.x2.1);
        let lo = [l1, l2, m1, m2, k0, k2, 0].into_iter().min().unwrap();
        let need = 3 * hi - 2 * lo + 4;
        let f = if v.group.is_additive() {
            LaurentSeries::x()
        } else {
            v.group.log(need.min(v.order()).min(v.group.order()))?.into_series()
        };
        // T1: base f(x1) - f(x2), outer x2 inner x1, over A.
        let t1 = DeltaSum::build(
            &swap_roles(&f),
            &a,
            &f,
            -b.x0.1 - 1,
            b.x1.1 + b.x2.1 - l2 - l1,
            b.x2.1 + 1 - l2,
            b.x1.1 + 1 - l1,
            b.x0.1 + 1,
        )?;
        // T2: base f(x2) - f(x1), outer x1 inner x2, over B.
        let t2 = DeltaSum::build(
            &swap_roles(&f),
            &bb,
            &f,
            -b.x0.1 - 1,
            b.x1.1 + b.x2.1 - m1 - m2,
            b.x1.1 + 1 - m1,
            b.x2.1 + 1 - m2,
            b.x0.1 + 1,
        )?;
        // T3: base f(x2) + f(x0), outer x0 inner x2, over C.
        let h = f.map(|c| LaurentSeries::constant(c.clone())).plus(&Series::exact([(0, f.clone())]));
        let t3 = DeltaSum::build(
            &h,
            &c,
            &f,
            -b.x1.1 - 1,
            b.x0.1 + b.x2.1 - k0 - k2,
            b.x0.1 + 1 - k0,
            b.x2.1 + 1 - k2,
            b.x1.1 + 1,
        )?;
        let mut t = Tally::default();
        let label = labeler(v);
        for a0 in b.x0.0..=b.x0.1 {
            for a1 in b.x1.0..=b.x1.1 {
                for a2 in b.x2.0..=b.x2.1 {
                    let lhs = match (t1.coeff(a0, a2, a1, false), t2.coeff(a0, a1, a2, true)) {
                        (Some(p), Some(m)) => Some(p.minus(&m)),
                        _ => None,
                    };
                    let rhs = t3.coeff(a1, a0, a2, false);
                    t.vector(&[a0, a1, a2], lhs.as_ref(), rhs.as_ref(), &label);
                }
            }
        }
        Ok(t)
    };
    match run() {
        Ok(t) => r.tally(&t),
        Err(e) => r.insufficient(e.to_string()),
    }
}

/// `f(inner) - f(outer)` with constant-coefficient outer rows.
fn swap_roles(f: &LaurentSeries) -> Nested<Q> {
    let inner: Nested<Q> = Series::exact([(0, f.clone())]);
    let outer: Nested<Q> = f.map(|c| LaurentSeries::constant(c.clone()));
    inner.minus(&outer)
}

/// `1/f'(x) = ∂F/∂y (x, 0)`.
pub fn inverse_log_derivative(v: &VertexStructure) -> LaurentSeries {
    v.group.series().slice(1, 1)
}

/// Vacuum and creation, both derivative identities for `dmat`, weak
/// commutativity on basis pairs up to `pairs`, and on success weak
/// F-associativity on the same pairs.
pub fn d_definition(v: &VertexStructure, dmat: &[Vector], pairs: usize, window: Window2) -> CheckReport {
    let r = CheckReport::new("d-def")
        .input("group", v.group.to_literal())
        .input("D", json!(dmat.iter().map(|c| v.space.vector_literal(c)).collect::<Vec<_>>()))
        .range("x", window.var1.0, window.var1.1);
    if dmat.len() != v.dim() {
        return r.insufficient("operator size differs from the state space");
    }
    let n = v.dim();
    let label = labeler(v);
    let one = Vector::basis(v.vacuum);
    // vacuum and creation
    for b in 0..n {
        let e = Vector::basis(b);
        if let Ok(s) = v.y(&one, &e) {
            if let Some((ex, l, rr)) = vector_mismatch(&s, &Series::exact([(0, e.clone())]), window.var1) {
                return r.fail(witness(ex, &l, &rr, &label)).note(format!("vacuum on {}", v.label(b)));
            }
        }
        if let Ok(s) = v.y(&e, &one) {
            if s.low() < 0 {
                let l = s.get(s.low());
                return r.fail(witness(s.low(), &l, &Vector::new(), &label)).note(format!("creation on {}", v.label(b)));
            }
            if s.known(0) && s.get(0) != e {
                return r.fail(witness(0, &s.get(0), &e, &label)).note(format!("creation on {}", v.label(b)));
            }
        }
    }
    // derivative identities
    let finv = inverse_log_derivative(v);
    let mut bracket = Tally::default();
    let mut shifted = Tally::default();
    for a in 0..n {
        let ea = Vector::basis(a);
        let da = apply_matrix(dmat, &ea);
        for b in 0..n {
            let eb = Vector::basis(b);
            let Ok(s) = v.y(&ea, &eb) else { continue };
            let deriv = s.derivative().times(&finv);
            let Ok(inner) = v.y(&ea, &apply_matrix(dmat, &eb)) else { continue };
            let outer = s.map(|c| apply_matrix(dmat, c));
            let br = outer.minus(&inner);
            for x in window.var1.0..=window.var1.1 {
                let d = deriv.known(x).then(|| deriv.get(x));
                let l = br.known(x).then(|| br.get(x));
                bracket.vector(&[a as i64, b as i64, x], l.as_ref(), d.as_ref(), &label);
            }
            if let Ok(sd) = v.y(&da, &eb) {
                for x in window.var1.0..=window.var1.1 {
                    let d = deriv.known(x).then(|| deriv.get(x));
                    let l = sd.known(x).then(|| sd.get(x));
                    shifted.vector(&[a as i64, b as i64, x], l.as_ref(), d.as_ref(), &label);
                }
            }
        }
    }
    if bracket.verdict() == Verdict::Fail {
        return r.tally(&bracket).note("[D, Y(v,x)] against (1/f'(x)) d/dx Y(v,x); witness exponents (v, w, x)");
    }
    if shifted.verdict() == Verdict::Fail {
        return r.tally(&shifted).note("Y(Dv,x) against (1/f'(x)) d/dx Y(v,x); witness exponents (v, w, x)");
    }
    if bracket.verdict() != Verdict::Pass || shifted.verdict() != Verdict::Pass {
        return r.insufficient("derivative identities had nothing to compare");
    }
    let m = pairs.min(n);
    let panel = vec![one.clone()];
    let mut assoc_ok = true;
    for a in 0..m {
        for b in 0..m {
            let (ea, eb) = (Vector::basis(a), Vector::basis(b));
            let c = weak_comm(v, &ea, &eb, &panel, DEFAULT_SEARCH, window);
            match c.verdict {
                Verdict::Pass => {}
                Verdict::Fail => {
                    let note = format!("weak commutativity on ({}, {})", v.label(a), v.label(b));
                    return r.fail(c.witness.unwrap()).note(note);
                }
                Verdict::InsufficientPrecision => {
                    return r.insufficient(format!("weak commutativity on ({}, {}) undecided", v.label(a), v.label(b)));
                }
            }
            let wa = weak_assoc(v, &ea, &eb, &one, DEFAULT_SEARCH, window);
            assoc_ok &= wa.is_pass();
        }
    }
    let r = r.window_entry("pairs", m).window_entry("weak-assoc", if assoc_ok { "pass" } else { "unconfirmed" });
    if assoc_ok {
        r.pass()
    } else {
        r.insufficient("weak F-associativity not confirmed on every pair")
    }
}

fn vector_mismatch(l: &Series<Vector>, r: &Series<Vector>, range: (i64, i64)) -> Option<(i64, Vector, Vector)> {
    (range.0..=range.1)
        .filter(|e| l.known(*e) && r.known(*e))
        .find(|e| l.get(*e) != r.get(*e))
        .map(|e| (e, l.get(e), r.get(e)))
}

fn witness(e: i64, l: &Vector, r: &Vector, label: &dyn Fn(usize) -> String) -> Witness {
    let mut t = Tally::default();
    t.vector(&[e], Some(l), Some(r), label);
    t.mismatch.unwrap_or_else(|| Witness::new(vec![e], &Q::one(), &Q::one()))
}

/// Truth values of support-boundedness and equality for one multiplier.
fn locality_facts(d: &ProductData, p: &PowerSeries, window: &Window2, label: &dyn Fn(usize) -> String) -> (bool, Tally) {
    let pa = d.a.times(&p.to_nested(1));
    let supported = pp_supported(&clip(&pa, window.var2.1 + 1, window.var1.1 + 1), d.bound, x1_low(p));
    (supported, weak_comm_at(d, p, window, label))
}

/// Support-boundedness and equality transfer between the multipliers
/// `(x1 - x2)^k` and `(g(x1) - g(x2))^k`: passes when each statement has
/// the same definite truth value for both multipliers.
pub fn g_locality_equiv(v: &VertexStructure, d: &ProductData, g: &GSeries, k: i64, window: Window2) -> CheckReport {
    let r = CheckReport::new("g-equiv")
        .input("g", g.series().to_literal("x"))
        .input("k", k)
        .range("x1", window.var1.0, window.var1.1)
        .range("x2", window.var2.0, window.var2.1)
        .multiplier(Some(k));
    let label = labeler(v);
    let plain = x1_minus_x2_pow(k);
    let gx = match (
        PowerSeries::from_univariate(2, 0, g.series()),
        PowerSeries::from_univariate(2, 1, g.series()),
    ) {
        (Ok(a), Ok(b)) => a.minus(&b),
        (Err(e), _) | (_, Err(e)) => return r.insufficient(e.to_string()),
    };
    let cap = if g.order() >= EXACT { EXACT } else { g.order() + k };
    let twisted = gx.pow(k as u32, cap);
    let (s1, t1) = locality_facts(d, &plain, &window, &label);
    let (s2, t2) = locality_facts(d, &twisted, &window, &label);
    let r = r
        .window_entry("supported", json!([s1, s2]))
        .window_entry("equal", json!([t1.verdict().as_str(), t2.verdict().as_str()]));
    if t1.verdict() == Verdict::InsufficientPrecision || t2.verdict() == Verdict::InsufficientPrecision {
        return r.insufficient("equality undecided on the window");
    }
    if s1 != s2 {
        let w = Witness::new(vec![k], &q(s1 as i64), &q(s2 as i64));
        return r.fail(w).note("support-boundedness differs between multipliers");
    }
    if t1.verdict() != t2.verdict() {
        let w = t1.mismatch.or(t2.mismatch).expect("one side failed");
        return r.fail(w).note("equality differs between multipliers");
    }
    r.pass()
}
