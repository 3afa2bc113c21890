//! Fields `a(x) ∈ Hom(W, W((x)))` on a finite-basis `W`, the phi-product
//! `Y_E^φ(a(x), z)b(x)`, bounded closure, and a truncated Heisenberg Fock
//! space.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde_json::{json, Value};

use crate::associate::{nonvanishing_probe, Associate};
use crate::bivar::{clip, compare_v, inner_only, nested_get, subst_diagonal, substitute_second, Nested, Window2};
use crate::error::{Error, Result};
use crate::formal_group::FormalGroupLaw;
use crate::harness::{x1_low, x1_minus_x2_pow};
use crate::power::PowerSeries;
use crate::report::{CheckReport, Tally, Verdict, Witness};
use crate::scalar::{q, Q};
use crate::series::{Coeff, LaurentSeries, Series, Vector, EXACT};
use crate::vertex::{series_json, Provenance, StateSpace, VSeries, VertexStructure};
use crate::zhu::{ModuleKind, ModuleStructure};

/// A field on `W`, stored per basis vector as `a(x)w`.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldOnW {
    pub carrier: StateSpace,
    values: Vec<VSeries>,
}

impl FieldOnW {
    pub fn new(carrier: StateSpace, values: Vec<VSeries>) -> Result<Self> {
        if values.len() != carrier.dim() {
            return Err(Error::Validation("one value per basis vector of W".into()));
        }
        Ok(FieldOnW { carrier, values })
    }

    pub fn identity(carrier: &StateSpace) -> Self {
        let values = (0..carrier.dim()).map(|w| Series::exact([(0, Vector::basis(w))])).collect();
        FieldOnW { carrier: carrier.clone(), values }
    }

    /// `s(x)·id_W`.
    pub fn scalar(carrier: &StateSpace, s: &LaurentSeries) -> Self {
        let values = (0..carrier.dim()).map(|w| s.map(|c| Vector::from_pairs([(w, c.clone())]))).collect();
        FieldOnW { carrier: carrier.clone(), values }
    }

    pub fn value(&self, w: usize) -> &VSeries {
        &self.values[w]
    }

    pub fn values(&self) -> &[VSeries] {
        &self.values
    }

    /// `a(x)v` for a combination `v` of basis vectors.
    pub fn apply(&self, v: &Vector) -> VSeries {
        let mut acc = VSeries::zero();
        for (w, c) in v.iter() {
            acc = acc.plus(&self.values[w].scaled(c));
        }
        acc
    }

    /// The mode `a_n w`, the coefficient of `x^{-n-1}`.
    pub fn mode(&self, n: i64, w: usize) -> Option<Vector> {
        let s = &self.values[w];
        s.known(-n - 1).then(|| s.get(-n - 1))
    }

    pub fn mode_on(&self, n: i64, v: &Vector) -> Option<Vector> {
        let mut acc = Vector::new();
        for (w, c) in v.iter() {
            acc = acc.plus(&self.mode(n, w)?.scaled(c));
        }
        Some(acc)
    }

    pub fn to_json(&self, name: &str) -> Value {
        let rows: Vec<Value> =
            (0..self.values.len()).map(|w| series_json(&self.carrier, name, &self.carrier.label(w), &self.values[w])).collect();
        json!({"field": name, "values": rows})
    }
}

/// Monomials in `y_1, ..., y_N` of weight at most the cap, `wt(y_n) = n`.
#[derive(Clone, Debug)]
pub struct FockSpace {
    pub weight_cap: u32,
    pub modes: u32,
    monos: Vec<Vec<u32>>,
    index: BTreeMap<Vec<u32>, usize>,
    space: StateSpace,
}

impl FockSpace {
    pub fn new(weight_cap: u32, modes: u32) -> Result<Self> {
        if modes == 0 {
            return Err(Error::Validation("the mode window must be positive".into()));
        }
        fn rec(n: u32, modes: u32, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if n > modes {
                out.push(cur.clone());
                return;
            }
            for e in 0..=left / n {
                cur[n as usize - 1] = e;
                rec(n + 1, modes, left - e * n, cur, out);
            }
            cur[n as usize - 1] = 0;
        }
        let mut monos = Vec::new();
        rec(1, modes, weight_cap, &mut vec![0; modes as usize], &mut monos);
        let wt = |m: &Vec<u32>| m.iter().enumerate().map(|(i, e)| (i as u32 + 1) * e).sum::<u32>();
        monos.sort_by(|a, b| wt(a).cmp(&wt(b)).then_with(|| a.cmp(b)));
        let index = monos.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        let labels = monos.iter().map(|m| mono_label(m)).collect();
        Ok(FockSpace { weight_cap, modes, monos, index, space: StateSpace::new(labels) })
    }

    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.monos.len()
    }

    pub fn weight(&self, i: usize) -> u32 {
        self.monos[i].iter().enumerate().map(|(k, e)| (k as u32 + 1) * e).sum()
    }

    /// `h(x) = Σ h_n x^{-n-1}` with `h_{-n} = y_n·`, `h_n = n ∂/∂y_n` and
    /// `h_0 = 0`. `h(x)w` is known below `x^{min(cap - wt w, N)}`.
    pub fn heisenberg(&self) -> FieldOnW {
        let values = self
            .monos
            .iter()
            .enumerate()
            .map(|(w, m)| {
                let order = (self.weight_cap - self.weight(w)).min(self.modes) as i64;
                let mut terms = Vec::new();
                for n in 1..=self.modes as usize {
                    if m[n - 1] > 0 {
                        let mut lower = m.clone();
                        lower[n - 1] -= 1;
                        let c = q((n as u32 * m[n - 1]) as i64);
                        terms.push((-(n as i64) - 1, Vector::from_pairs([(self.index[&lower], c)])));
                    }
                    if (n as i64) <= order {
                        let mut raise = m.clone();
                        raise[n - 1] += 1;
                        terms.push((n as i64 - 1, Vector::basis(self.index[&raise])));
                    }
                }
                Series::new(order, terms)
            })
            .collect();
        FieldOnW { carrier: self.space.clone(), values }
    }
}

fn mono_label(m: &[u32]) -> String {
    let parts: Vec<String> = m
        .iter()
        .enumerate()
        .filter(|(_, e)| **e > 0)
        .map(|(i, e)| if *e == 1 { format!("y{}", i + 1) } else { format!("y{}^{e}", i + 1) })
        .collect();
    if parts.is_empty() { "1".into() } else { parts.join("*") }
}

/// `[h_m, h_n] = m δ_{m+n,0}` on every basis vector where both orders are known.
pub fn heisenberg_check(h: &FieldOnW, window: (i64, i64)) -> CheckReport {
    let r = CheckReport::new("heisenberg-bracket").range("m", window.0, window.1).range("n", window.0, window.1);
    let label = |i: usize| h.carrier.label(i);
    let mut t = Tally::default();
    for w in 0..h.carrier.dim() {
        for m in window.0..=window.1 {
            for n in window.0..=window.1 {
                let mn = h.mode(n, w).and_then(|v| h.mode_on(m, &v));
                let nm = h.mode(m, w).and_then(|v| h.mode_on(n, &v));
                let lhs = mn.zip(nm).map(|(a, b)| a.minus(&b));
                let rhs = if m + n == 0 { Vector::basis(w).scaled(&q(m)) } else { Vector::new() };
                t.vector(&[w as i64, m, n], lhs.as_ref(), Some(&rhs), &label);
            }
        }
    }
    r.tally(&t).note("witness exponents are (w, m, n)")
}

/// `a(x1)b(x2)w` with outer `x2` and inner `x1`.
fn raw_product(a: &FieldOnW, b: &FieldOnW, w: usize) -> Nested<Vector> {
    let bw = &b.values[w];
    Series::new(bw.order(), bw.terms().map(|(e, c)| (e, a.apply(c))))
}

/// Expected x1 lower bound of `p·a(x1)b(x2)w`, before the shift by `p`.
fn pp_floor(a: &FieldOnW, w: usize) -> i64 {
    let s = &a.values[w];
    if s.num_terms() > 0 {
        return s.low();
    }
    a.values.iter().filter(|s| s.num_terms() > 0).map(|s| s.low()).min().unwrap_or(0)
}

/// First coefficient of `p·a(x1)b(x2)w` below the support bound, as
/// `(x1, x2, vector)`.
fn pp_violation(a: &FieldOnW, b: &FieldOnW, p: &PowerSeries, w: usize) -> Option<(i64, i64, Vector)> {
    let pa = raw_product(a, b, w).times(&p.to_nested(1));
    let bound = pp_floor(a, w) + x1_low(p);
    let found = pa.terms().find(|(_, r)| r.num_terms() > 0 && r.low() < bound).map(|(e, r)| (r.low(), e, r.get(r.low())));
    found
}

/// Support test of `p(x1,x2)a(x1)b(x2)` on every basis vector of `W`, and
/// a nonzero coefficient of `p(φ(x,z), x)` on the window (`var1` = x,
/// `var2` = z).
pub fn compatibility_check(a: &FieldOnW, b: &FieldOnW, p: &PowerSeries, phi: &Associate, window: Window2) -> CheckReport {
    let r = CheckReport::new("compatibility").input("p", p.to_literal(&["x1", "x2"])).input("phi", phi.to_literal());
    for w in 0..a.carrier.dim() {
        if let Some((e1, e2, v)) = pp_violation(a, b, p, w) {
            let (i, c) = v.iter().next().map(|(i, c)| (i, c.clone())).expect("violations are nonzero");
            let wit = Witness::new(vec![e1, e2], &c, &q(0)).with_component(a.carrier.label(i));
            return r.fail(wit).note(format!("x1 principal part survives on {}; exponents (x1, x2)", a.carrier.label(w)));
        }
    }
    let probe = nonvanishing_probe(p, phi, window);
    match probe.verdict {
        Verdict::Pass => CheckReport { witness: probe.witness, ..r.pass() },
        _ => r.insufficient("no nonzero coefficient of p(phi(x, z), x) on the window"),
    }
}

/// `Y_E^φ(a(x), z)b(x)` per basis vector of `W`: outer `z`, inner `x`.
#[derive(Clone, Debug)]
pub struct PhiProduct {
    pub p: PowerSeries,
    carrier: StateSpace,
    per_w: Vec<Nested<Vector>>,
}

impl PhiProduct {
    pub fn per_w(&self, w: usize) -> &Nested<Vector> {
        &self.per_w[w]
    }

    pub fn z_low(&self) -> i64 {
        self.per_w.iter().filter(|s| s.num_terms() > 0).map(|s| s.low()).min().unwrap_or(0).min(0)
    }

    pub fn z_order(&self) -> i64 {
        self.per_w.iter().map(|s| s.order()).min().unwrap_or(EXACT)
    }

    /// The field `a(x)_{-j-1} b(x)`, the coefficient of `z^j`.
    pub fn coefficient(&self, j: i64) -> FieldOnW {
        FieldOnW { carrier: self.carrier.clone(), values: self.per_w.iter().map(|s| s.get(j)).collect() }
    }
}

fn total_degree(p: &PowerSeries) -> i64 {
    p.terms().map(|(e, _)| e.iter().sum::<u32>() as i64).max().unwrap_or(0)
}

/// `p(φ(x,z),x)^{-1} ι_{x,z}(p(x1,x)a(x1)b(x))|_{x1=φ(x,z)}` to `z`-order
/// `z_order`, with `x` exponents kept below `x_cap`.
pub fn y_phi_product(a: &FieldOnW, b: &FieldOnW, p: &PowerSeries, phi: &Associate, z_order: i64, x_cap: i64) -> Result<PhiProduct> {
    for w in 0..a.carrier.dim() {
        if let Some((e1, e2, _)) = pp_violation(a, b, p, w) {
            return Err(Error::IncompatiblePair(format!(
                "x1^{e1} x2^{e2} survives on {} for p = {}",
                a.carrier.label(w),
                p.to_literal(&["x1", "x2"])
            )));
        }
    }
    let eps = phi.phi().minus(&inner_only(&LaurentSeries::x()));
    let pn = p.to_nested(1);
    let den = subst_diagonal(&pn, 0, &eps, z_order + 2 * total_degree(p) + 1)?;
    if den.num_terms() == 0 {
        return Err(Error::IncompatiblePair("p(phi(x, z), x) vanishes".into()));
    }
    let j0 = den.low();
    let inv = crate::bivar::nested_inv(&den, x_cap - 2 * inner_low_of(&den), z_order + j0)?;
    let per_w = (0..a.carrier.dim())
        .map(|w| {
            let pa = raw_product(a, b, w).times(&pn);
            let floor = pp_floor(a, w) + x1_low(p);
            let g = subst_diagonal(&pa, floor, &eps, z_order + j0)?;
            Ok(clip(&g.times(&inv), z_order, x_cap))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PhiProduct { p: p.clone(), carrier: a.carrier.clone(), per_w })
}

fn inner_low_of(d: &Nested<Q>) -> i64 {
    crate::bivar::inner_low(d).min(0)
}

/// Least `k <= k_max` with `(x1 - x2)^k` clearing the pair, and the product.
pub fn search_product(a: &FieldOnW, b: &FieldOnW, phi: &Associate, k_max: i64, z_order: i64, x_cap: i64) -> Result<(i64, PhiProduct)> {
    for k in 0..=k_max {
        let p = x1_minus_x2_pow(k);
        if (0..a.carrier.dim()).all(|w| pp_violation(a, b, &p, w).is_none()) {
            return Ok((k, y_phi_product(a, b, &p, phi, z_order, x_cap)?));
        }
    }
    Err(Error::IncompatiblePair(format!("no (x1 - x2)^k with k <= {k_max} clears the pair")))
}

fn compare_products(t: &mut Tally, l: &PhiProduct, r: &PhiProduct, window: &Window2) {
    let label = |i: usize| l.carrier.label(i);
    for w in 0..l.per_w.len() {
        let mut sub = Tally::default();
        compare_v(&mut sub, window, |x, z| nested_get(&l.per_w[w], z, x), |x, z| nested_get(&r.per_w[w], z, x), &label);
        if let Some(wit) = sub.mismatch.as_mut() {
            wit.exponents.insert(0, w as i64);
        }
        t.merge(&sub);
    }
}

/// The product computed with `p` and with `p·extra` agree on the window
/// (`var1` = x, `var2` = z).
pub fn p_independence_check(
    a: &FieldOnW,
    b: &FieldOnW,
    p: &PowerSeries,
    extra: &PowerSeries,
    phi: &Associate,
    z_order: i64,
    window: Window2,
) -> CheckReport {
    let r = CheckReport::new("p-independence")
        .input("p", p.to_literal(&["x1", "x2"]))
        .input("extra", extra.to_literal(&["x1", "x2"]))
        .range("x", window.var1.0, window.var1.1)
        .range("z", window.var2.0, window.var2.1);
    let x_cap = window.var1.1 + 1;
    let run = || -> Result<Tally> {
        let one = y_phi_product(a, b, p, phi, z_order, x_cap)?;
        let two = y_phi_product(a, b, &p.times(extra), phi, z_order, x_cap)?;
        let mut t = Tally::default();
        compare_products(&mut t, &one, &two, &window);
        Ok(t)
    };
    match run() {
        Ok(t) => r.tally(&t).note("witness exponents are (w, x, z)"),
        Err(e) => r.insufficient(e.to_string()),
    }
}

/// `Y_E^φ(a, z)b = Y_E^{φ̃}(a, f(z))b` with `f` the logarithm of the group
/// of `φ` and `φ̃(x, z) = φ(x, f^{-1}(z))`, an associate of the additive law.
pub fn normalization_check(a: &FieldOnW, b: &FieldOnW, p: &PowerSeries, phi: &Associate, z_order: i64, window: Window2) -> CheckReport {
    let r = CheckReport::new("normalization")
        .input("phi", phi.to_literal())
        .input("p", p.to_literal(&["x1", "x2"]))
        .range("x", window.var1.0, window.var1.1)
        .range("z", window.var2.0, window.var2.1);
    let x_cap = window.var1.1 + 1;
    let run = || -> Result<(Tally, String)> {
        let cap = z_order + 2 * total_degree(p) + 2;
        let f = phi.group().log(cap)?;
        let finv = f.reversion(cap)?;
        let tilde_phi = substitute_second(phi.phi(), &finv)?.truncate(cap.min(phi.z_order()));
        let tilde = Associate::new(tilde_phi, FormalGroupLaw::additive(), phi.x_window())?;
        let lhs = y_phi_product(a, b, p, phi, z_order, x_cap)?;
        let base = y_phi_product(a, b, p, &tilde, z_order, x_cap)?;
        let per_w = base
            .per_w
            .iter()
            .map(|s| Ok(clip(&s.compose(f.series(), z_order)?, z_order, x_cap)))
            .collect::<Result<Vec<_>>>()?;
        let rhs = PhiProduct { per_w, ..base };
        let mut t = Tally::default();
        compare_products(&mut t, &lhs, &rhs, &window);
        Ok((t, tilde.to_literal()))
    };
    match run() {
        Ok((t, lit)) => r.input("phi_tilde", lit).tally(&t).note("witness exponents are (w, x, z)"),
        Err(e) => r.insufficient(e.to_string()),
    }
}

#[derive(Clone, Debug)]
pub struct ClosureParams {
    pub depth: usize,
    pub z_order: i64,
    pub k_max: i64,
    pub size_cap: usize,
    /// Lowest `x` exponent used to tell fields apart.
    pub x_lo: i64,
    /// Field values are kept below `x^{x_cap}`.
    pub x_cap: i64,
}

impl Default for ClosureParams {
    fn default() -> Self {
        ClosureParams { depth: 2, z_order: 3, k_max: 4, size_cap: 96, x_lo: -8, x_cap: 6 }
    }
}

type Key = (usize, i64, usize);

/// Sparse fingerprint of a field on the exponent window with per-vector
/// precision.
#[derive(Clone, Debug)]
struct Print {
    coords: BTreeMap<Key, Q>,
    orders: Vec<i64>,
}

impl Print {
    fn of(f: &FieldOnW, x_lo: i64, x_cap: i64) -> Self {
        let mut coords = BTreeMap::new();
        let mut orders = Vec::new();
        for (w, s) in f.values.iter().enumerate() {
            orders.push(s.order().min(x_cap));
            for (e, v) in s.terms() {
                if e >= x_lo && e < x_cap {
                    for (i, c) in v.iter() {
                        coords.insert((w, e, i), c.clone());
                    }
                }
            }
        }
        Print { coords, orders }
    }

    fn restricted(&self, hi: &[i64]) -> BTreeMap<Key, Q> {
        self.coords.iter().filter(|((w, e, _), _)| *e < hi[*w]).map(|(k, c)| (*k, c.clone())).collect()
    }
}

enum Decomposition {
    Independent,
    Combination(Vec<Q>),
    /// Not decidable at the available precision.
    Undecided,
}

/// Writes `target` in terms of `rows` on the coordinates the target knows.
/// Rows known less precisely than the target are left out; the target is
/// declared independent only when no row was left out.
fn decompose(rows: &[Print], target: &Print) -> Decomposition {
    let hi = &target.orders;
    let covering: Vec<usize> =
        (0..rows.len()).filter(|i| rows[*i].orders.iter().zip(hi).all(|(o, h)| o >= h)).collect();
    type Pivot = (BTreeMap<Key, Q>, Vec<Q>);
    fn reduce(pivots: &BTreeMap<Key, Pivot>, row: &mut BTreeMap<Key, Q>, combo: &mut [Q]) {
        let mut cursor: Option<Key> = None;
        loop {
            let next = match cursor {
                None => row.keys().find(|k| pivots.contains_key(k)).copied(),
                Some(c) => row
                    .range((std::ops::Bound::Excluded(c), std::ops::Bound::Unbounded))
                    .map(|(k, _)| *k)
                    .find(|k| pivots.contains_key(k)),
            };
            let Some(k) = next else { break };
            let c = row[&k].clone();
            let (prow, pcombo) = &pivots[&k];
            for (pk, pc) in prow {
                let v = row.get(pk).cloned().unwrap_or_else(Q::zero) - &c * pc;
                if v.is_zero() {
                    row.remove(pk);
                } else {
                    row.insert(*pk, v);
                }
            }
            for (a, b) in combo.iter_mut().zip(pcombo) {
                *a -= &c * b;
            }
            cursor = Some(k);
        }
    }
    let n = rows.len();
    let mut pivots: BTreeMap<Key, Pivot> = BTreeMap::new();
    for &i in &covering {
        let mut row = rows[i].restricted(hi);
        let mut combo = vec![Q::zero(); n];
        combo[i] = q(1);
        reduce(&pivots, &mut row, &mut combo);
        let Some((&k, lead)) = row.iter().next() else { continue };
        let lead = lead.clone();
        for c in row.values_mut() {
            *c /= &lead;
        }
        for c in combo.iter_mut() {
            *c /= &lead;
        }
        pivots.insert(k, (row, combo));
    }
    let mut row = target.restricted(hi);
    let mut combo = vec![Q::zero(); n];
    reduce(&pivots, &mut row, &mut combo);
    // rows invisible on these coordinates make the combination one of
    // several; any of them agrees with the target wherever it is known
    match (row.is_empty(), covering.len() == n) {
        (true, _) => Decomposition::Combination(combo.into_iter().map(|c| -c).collect()),
        (false, true) => Decomposition::Independent,
        (false, false) => Decomposition::Undecided,
    }
}

/// The generated family with its vertex table and the module `W`.
#[derive(Clone, Debug)]
pub struct Closure {
    pub fields: Vec<(String, FieldOnW)>,
    pub algebra: VertexStructure,
    pub module: ModuleStructure,
    pub depth: usize,
    /// Products whose coefficients could not be placed at this precision.
    pub undecided: usize,
    /// `(a, b) -> k` with `(x1 - x2)^k` the multiplier used.
    pub multipliers: BTreeMap<(usize, usize), i64>,
}

impl Closure {
    pub fn index(&self, name: &str) -> Option<usize> {
        self.fields.iter().position(|(n, _)| n == name)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "depth": self.depth,
            "fields": self.fields.iter().map(|(n, _)| n.clone()).collect::<Vec<_>>(),
            "undecided": self.undecided,
            "algebra": self.algebra.y_table_json(),
        })
    }
}

fn wrap(s: &str) -> String {
    if s.contains('(') || s.contains('*') { format!("({s})") } else { s.to_string() }
}

/// Adjoins `a(x)_n^φ b(x)` for all pairs of the current family, `depth`
/// times, starting from the generators and `1_W`. Adjunction order is by
/// pair index, then `n` descending. Table entries exist for every pair
/// multiplied during the rounds; coefficients that cannot be placed end
/// the entry's precision.
pub fn closure_generate(gens: &[(String, FieldOnW)], phi: &Associate, params: &ClosureParams) -> Result<Closure> {
    let carrier = match gens.first() {
        Some((_, f)) => f.carrier.clone(),
        None => return Err(Error::Validation("closure needs at least one generator".into())),
    };
    let mut fields: Vec<(String, FieldOnW)> = vec![("1".into(), FieldOnW::identity(&carrier))];
    let mut prints: Vec<Print> = vec![Print::of(&fields[0].1, params.x_lo, params.x_cap)];
    let mut undecided = 0;
    let adjoin = |name: String, f: FieldOnW, fields: &mut Vec<(String, FieldOnW)>, prints: &mut Vec<Print>| -> Result<Option<Vector>> {
        let p = Print::of(&f, params.x_lo, params.x_cap);
        match decompose(prints, &p) {
            Decomposition::Combination(c) => Ok(Some(Vector::from_pairs(c.into_iter().enumerate()))),
            Decomposition::Undecided => Ok(None),
            Decomposition::Independent => {
                if fields.len() >= params.size_cap {
                    return Err(Error::BasisExplosion(params.size_cap));
                }
                fields.push((name, f));
                prints.push(p);
                Ok(Some(Vector::basis(fields.len() - 1)))
            }
        }
    };
    for (name, f) in gens {
        if f.carrier != carrier {
            return Err(Error::Validation("generators live on different spaces".into()));
        }
        adjoin(name.clone(), f.clone(), &mut fields, &mut prints)?;
    }
    let mut entries: BTreeMap<(usize, usize), VSeries> = BTreeMap::new();
    let mut multipliers = BTreeMap::new();
    for _ in 0..params.depth {
        let snap = fields.len();
        for i in 0..snap {
            for j in 0..snap {
                if entries.contains_key(&(i, j)) {
                    continue;
                }
                let (k, prod) = match search_product(&fields[i].1, &fields[j].1, phi, params.k_max, params.z_order, params.x_cap) {
                    Ok(x) => x,
                    Err(Error::IncompatiblePair(_)) => continue,
                    Err(e) => return Err(e),
                };
                multipliers.insert((i, j), k);
                let mut terms = Vec::new();
                let mut order = prod.z_order();
                for jz in prod.z_low()..prod.z_order() {
                    let name = format!("{}({}){}", wrap(&fields[i].0), -jz - 1, wrap(&fields[j].0));
                    match adjoin(name, prod.coefficient(jz), &mut fields, &mut prints)? {
                        Some(v) => terms.push((jz, v)),
                        None => {
                            undecided += 1;
                            order = jz;
                            break;
                        }
                    }
                }
                entries.insert((i, j), Series::new(order, terms));
            }
        }
    }
    let dim = fields.len();
    let mut table = vec![vec![None; dim]; dim];
    for ((i, j), s) in entries {
        table[i][j] = Some(s);
    }
    let space = StateSpace::new(fields.iter().map(|(n, _)| n.clone()).collect());
    let algebra = VertexStructure::new(space, 0, table, phi.group().clone(), Provenance::FieldGenerated { depth: params.depth })?;
    let mtable = fields.iter().map(|(_, f)| f.values.iter().cloned().map(Some).collect()).collect();
    let module = ModuleStructure::new(algebra.clone(), carrier, mtable, ModuleKind { phi: Some(phi.clone()), quasi: true })?;
    Ok(Closure { fields, algebra, module, depth: params.depth, undecided, multipliers })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::weak_assoc;
    use crate::scalar::qr;
    use crate::zhu::{check_module, check_phi_d_and_commutator, exp_associate, ModuleParams, ModuleVariant};

    fn fock() -> FockSpace {
        FockSpace::new(3, 6).unwrap()
    }

    #[test]
    fn fock_basis_and_bracket() {
        let f = fock();
        assert_eq!(f.dim(), 7);
        assert_eq!(f.space().labels, ["1", "y1", "y2", "y1^2", "y3", "y1*y2", "y1^3"]);
        let h = f.heisenberg();
        assert_eq!(h.mode(-1, 0), Some(Vector::basis(1)));
        assert_eq!(h.mode(1, 3), Some(Vector::from_pairs([(1, q(2))])));
        assert_eq!(h.mode(-1, 6), None);
        assert!(heisenberg_check(&h, (-5, 5)).is_pass());
    }

    #[test]
    fn compatibility() {
        let f = fock();
        let h = f.heisenberg();
        let phi = exp_associate(8).unwrap();
        let w = Window2::new((-3, 3), (0, 3));
        assert!(compatibility_check(&h, &h, &x1_minus_x2_pow(2), &phi, w).is_pass());
        let r = compatibility_check(&h, &h, &x1_minus_x2_pow(1), &phi, w);
        assert_eq!(r.verdict, Verdict::Fail, "{r}");
        let id = FieldOnW::identity(f.space());
        assert!(compatibility_check(&id, &h, &x1_minus_x2_pow(0), &phi, w).is_pass());
    }

    #[test]
    fn scalar_and_identity_products() {
        let f = fock();
        let phi = exp_associate(8).unwrap();
        let s = FieldOnW::scalar(f.space(), &LaurentSeries::monomial(q(1), -1));
        let prod = y_phi_product(&s, &s, &x1_minus_x2_pow(0), &phi, 4, 6).unwrap();
        // x^-2 e^-z
        for j in 0..4 {
            let sign = if j % 2 == 0 { 1 } else { -1 };
            let c = qr(sign, 1) / crate::scalar::factorial(j as u64);
            let v = prod.coefficient(j);
            assert_eq!(v.value(2).terms().collect::<Vec<_>>(), [(-2, &Vector::from_pairs([(2, c)]))]);
        }
        let h = f.heisenberg();
        let id = FieldOnW::identity(f.space());
        let prod = y_phi_product(&h, &id, &x1_minus_x2_pow(0), &phi, 3, 6).unwrap();
        assert_eq!(prod.coefficient(0), h);
        // z^1: x h'(x)
        let dh = prod.coefficient(1);
        assert_eq!(dh.mode(-2, 0), Some(Vector::basis(2)));
        assert_eq!(dh.mode(-1, 0), Some(Vector::new()));
        assert_eq!(dh.mode(1, 1), Some(Vector::from_pairs([(0, q(-2))])));
        let prod = y_phi_product(&id, &h, &x1_minus_x2_pow(0), &phi, 3, 6).unwrap();
        assert_eq!(prod.coefficient(0), h);
        assert_eq!(prod.z_low(), 0);
    }

    #[test]
    fn p_independence_and_normalization() {
        let f = fock();
        let h = f.heisenberg();
        let phi = exp_associate(10).unwrap();
        let w = Window2::new((-6, 4), (-2, 3));
        let r = p_independence_check(&h, &h, &x1_minus_x2_pow(2), &x1_minus_x2_pow(1), &phi, 4, w);
        assert!(r.is_pass(), "{r}");
        let mult = crate::associate::assoc_from_p(&FormalGroupLaw::multiplicative(), &LaurentSeries::x(), 10, (-4, 8)).unwrap();
        let r = normalization_check(&h, &h, &x1_minus_x2_pow(2), &mult, 4, Window2::new((-6, 4), (-2, 3)));
        assert!(r.is_pass(), "{r}");
    }

    #[test]
    fn heisenberg_closure() {
        let f = fock();
        let h = f.heisenberg();
        let phi = exp_associate(12).unwrap();
        let c = closure_generate(&[("h".into(), h.clone())], &phi, &ClosureParams::default()).unwrap();
        // h(-1)1 is h itself
        for name in ["1", "h", "h(-2)1", "h(-1)h", "h(-2)h"] {
            assert!(c.index(name).is_some(), "{name} missing");
        }
        let hi = c.index("h").unwrap();
        assert_eq!(c.multipliers[&(hi, hi)], 2);
        let alg = &c.algebra;
        let y = alg.entry(hi, hi).unwrap();
        assert_eq!(y.low(), -2);
        let (e, one) = (Vector::basis(hi), Vector::basis(0));
        let win = Window2::square(-3, 3);
        for (a, b, w) in [(&e, &e, &one), (&e, &one, &e), (&one, &e, &e)] {
            let r = weak_assoc(alg, a, b, w, 6, win);
            assert!(r.is_pass(), "{r}");
        }
        let params = ModuleParams { q: Some(x1_minus_x2_pow(2)), ..Default::default() };
        for w in 0..f.dim() {
            let r = check_module(&c.module, ModuleVariant::PhiQuasi, &params, &e, &e, &Vector::basis(w), Window2::new((0, 2), (-5, 5)));
            assert!(r.is_pass(), "{r}");
        }
        let r = check_phi_d_and_commutator(&c.module, &[hi], 2, Window2::square(-5, 5));
        assert!(r.is_pass(), "{r}");
    }

    #[test]
    fn trivial_closure() {
        let f = fock();
        let id = FieldOnW::identity(f.space());
        let phi = exp_associate(8).unwrap();
        let c = closure_generate(&[("id".into(), id)], &phi, &ClosureParams::default()).unwrap();
        assert_eq!(c.fields.len(), 1);
        assert_eq!(c.algebra.entry(0, 0).unwrap().get(0), Vector::basis(0));
    }
}
