//! One-dimensional formal group laws over the rationals.

use serde_json::json;

use crate::bivar::parse_pp;
use crate::error::{exhausted, Error, Result};
use crate::gseries::GSeries;
use crate::power::PowerSeries;
use crate::report::{CheckReport, Witness};
use crate::scalar::q;
use crate::series::{LaurentSeries, EXACT};

/// `F(x, y)` known modulo `(x, y)^order`, checked at construction.
#[derive(Clone, Debug, PartialEq)]
pub struct FormalGroupLaw {
    series: PowerSeries,
    order: i64,
    name: Option<String>,
}

impl FormalGroupLaw {
    /// Validates `F` at `order` (capped by the precision of `F`).
    pub fn new(series: PowerSeries, order: i64) -> Result<Self> {
        let order = order.min(series.order());
        let r = fg_check(&series, order);
        if !r.is_pass() {
            return Err(Error::Validation(r.to_string()));
        }
        Ok(FormalGroupLaw { series: series.truncate(order), order, name: None })
    }

    pub fn additive() -> Self {
        FormalGroupLaw {
            series: PowerSeries::var(2, 0).plus(&PowerSeries::var(2, 1)),
            order: EXACT,
            name: Some("additive".into()),
        }
    }

    pub fn multiplicative() -> Self {
        let x = PowerSeries::var(2, 0);
        let y = PowerSeries::var(2, 1);
        FormalGroupLaw { series: x.plus(&y).plus(&x.times(&y)), order: EXACT, name: Some("multiplicative".into()) }
    }

    pub fn builtin(name: &str) -> Result<Self> {
        match name {
            "additive" | "add" | "Fa" | "a" => Ok(Self::additive()),
            "multiplicative" | "mult" | "Fm" | "m" => Ok(Self::multiplicative()),
            other => Err(Error::Parse(format!("unknown builtin group {other}"))),
        }
    }

    /// A builtin name or a literal in `x`, `y`.
    pub fn parse(s: &str, order: i64) -> Result<Self> {
        match Self::builtin(s.trim()) {
            Ok(g) => Ok(g),
            Err(_) => Self::new(parse_pp(s, ["x", "y"])?, order),
        }
    }

    pub fn series(&self) -> &PowerSeries {
        &self.series
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn is_additive(&self) -> bool {
        *self == Self::additive() || self.series == Self::additive().series
    }

    pub fn to_literal(&self) -> String {
        self.series.to_literal(&["x", "y"])
    }

    /// The logarithm `f` with `f(F(x, y)) = f(x) + f(y)`, from
    /// `f'(x) = 1 / ∂_y F(x, 0)`. The defining identity is re-checked.
    pub fn log(&self, order: i64) -> Result<GSeries> {
        if order > self.order {
            return Err(exhausted(format!("group known to degree {} only", self.order)));
        }
        let d = self.series.slice(1, 1);
        let inv = d.inv(ord_cap(order, -1))?;
        let f = inv.integral()?;
        let f = GSeries::new(if f.is_exact() { f } else { f.truncate(order) })?;
        let lhs = self.series.apply(f.series(), order)?;
        let fx = PowerSeries::from_univariate(2, 0, f.series())?;
        let fy = PowerSeries::from_univariate(2, 1, f.series())?;
        let rhs = fx.plus(&fy).truncate(lhs.order());
        if let Some((e, l, r)) = lhs.first_mismatch(&rhs) {
            return Err(Error::Validation(format!("logarithm identity fails at {e:?}: {l} vs {r}")));
        }
        Ok(f)
    }

    /// `F(x, y) = f^{-1}(f(x) + f(y))`, validated at `order`.
    pub fn from_log(f: &GSeries, order: i64) -> Result<Self> {
        if f.is_identity() && f.series().is_exact() {
            return Ok(Self::additive());
        }
        let sum = Self::log_combination(f, order, false)?;
        let out = Self::new(sum, order)?;
        let back = out.log(order)?;
        if back.series() != &f.series().truncate(order) {
            return Err(Error::Validation("logarithm of the constructed law differs".into()));
        }
        Ok(out)
    }

    /// `f^{-1}(f(x) ± f(y))` modulo `(x, y)^order`.
    fn log_combination(f: &GSeries, order: i64, subtract: bool) -> Result<PowerSeries> {
        let finv = f.reversion(order)?;
        let fx = PowerSeries::from_univariate(2, 0, f.series())?;
        let fy = PowerSeries::from_univariate(2, 1, f.series())?;
        let fy = if subtract { fy.negated() } else { fy };
        fx.plus(&fy).truncate(order).apply(finv.series(), order)
    }

    /// `f^{-1}(f(x) - f(y))`, the solution `x0` of `x = F(x0, y)`.
    pub fn subtraction(&self, order: i64) -> Result<PowerSeries> {
        if self.is_additive() {
            return Ok(PowerSeries::var(2, 0).minus(&PowerSeries::var(2, 1)));
        }
        let f = self.log(order.min(self.order))?;
        Self::log_combination(&f, order.min(self.order), true)
    }

    /// `F_g(x, y) = g^{-1}(F(g(x), g(y)))`.
    pub fn conjugate(&self, g: &GSeries, order: i64) -> Result<Self> {
        if g.is_identity() && g.series().is_exact() {
            return Ok(self.clone());
        }
        let order = order.min(self.order).min(g.order());
        let ginv = g.reversion(order)?;
        let gx = PowerSeries::from_univariate(2, 0, g.series())?.truncate(order);
        let gy = PowerSeries::from_univariate(2, 1, g.series())?.truncate(order);
        let inner = self.series.truncate(order).substitute(&[gx, gy])?;
        Self::new(inner.apply(ginv.series(), order)?, order)
    }
}

fn ord_cap(order: i64, shift: i64) -> i64 {
    crate::series::ord_add(order, shift)
}

/// Unit laws, associativity and commutativity modulo `(x, y)^order`.
pub fn fg_check(f: &PowerSeries, order: i64) -> CheckReport {
    let order = order.min(f.order());
    let report = CheckReport::new("fg-check")
        .input("F", f.to_literal(&["x", "y"]))
        .window_entry("order", if order >= EXACT { json!("exact") } else { json!(order) });
    if order <= 1 {
        return report.insufficient("order leaves no coefficient to compare");
    }
    if f.nvars() != 2 {
        return report.fail(Witness::new(vec![], &q(0), &q(0))).note("not a two-variable series");
    }
    let f = f.truncate(order);
    let x = PowerSeries::var(2, 0);
    let y = PowerSeries::var(2, 1);
    for (i, unit) in [(1usize, &x), (0usize, &y)] {
        let restricted = PowerSeries::new(2, order, f.terms().filter(|(e, _)| e[i] == 0).map(|(e, c)| (e.clone(), c.clone())));
        if let Some((e, l, r)) = restricted.first_mismatch(&unit.truncate(order)) {
            let w = Witness::new(e.iter().map(|d| *d as i64).collect(), &l, &r);
            return report.fail(w).note("unit law");
        }
    }
    let v = |i| PowerSeries::var(3, i);
    let assoc = || -> Result<(PowerSeries, PowerSeries)> {
        let fyz = f.substitute(&[v(1), v(2)])?;
        let fxy = f.substitute(&[v(0), v(1)])?;
        Ok((f.substitute(&[v(0), fyz])?, f.substitute(&[fxy, v(2)])?))
    };
    match assoc() {
        Err(e) => return report.insufficient(e.to_string()),
        Ok((l, r)) => {
            if let Some((e, a, b)) = l.first_mismatch(&r) {
                let w = Witness::new(e.iter().map(|d| *d as i64).collect(), &a, &b);
                return report.fail(w).note("associativity");
            }
        }
    }
    if let Some((e, a, b)) = f.first_mismatch(&f.swap(0, 1)) {
        let w = Witness::new(e.iter().map(|d| *d as i64).collect(), &a, &b);
        return report.fail(w).note("commutativity");
    }
    report.pass()
}

/// `F(x, y) = (x + y)(1 + xy)^{-1}` modulo `(x, y)^order`.
pub fn tanh_law(order: i64) -> PowerSeries {
    let x = PowerSeries::var(2, 0);
    let y = PowerSeries::var(2, 1);
    let xy = x.times(&y);
    let geo = LaurentSeries::new(order, (0..order).map(|k| (k, q(if k % 2 == 0 { 1 } else { -1 }))));
    let inv = xy.apply(&geo, order).expect("xy has positive valuation");
    x.plus(&y).times(&inv).truncate(order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Verdict;
    use crate::scalar::qr;

    fn pp(s: &str) -> PowerSeries {
        parse_pp(s, ["x", "y"]).unwrap()
    }

    fn artanh(order: i64) -> GSeries {
        GSeries::new(LaurentSeries::new(order, (0..order).filter(|k| k % 2 == 1).map(|k| (k, qr(1, k))))).unwrap()
    }

    #[test]
    fn builtins_validate() {
        assert_eq!(FormalGroupLaw::additive().to_literal(), "x + y");
        assert_eq!(FormalGroupLaw::multiplicative().to_literal(), "x + y + x*y");
        for g in [FormalGroupLaw::additive(), FormalGroupLaw::multiplicative()] {
            assert!(fg_check(g.series(), 12).is_pass());
            assert!(fg_check(g.series(), EXACT).is_pass());
        }
    }

    #[test]
    fn logs_of_builtins() {
        assert_eq!(FormalGroupLaw::additive().log(10).unwrap(), GSeries::identity());
        let f = FormalGroupLaw::multiplicative().log(10).unwrap();
        for n in 1..10 {
            assert_eq!(f.series().get(n), qr(if n % 2 == 1 { 1 } else { -1 }, n));
        }
    }

    #[test]
    fn tanh_law_round_trip() {
        let g = FormalGroupLaw::from_log(&artanh(9), 9).unwrap();
        assert!(g.series().first_mismatch(&tanh_law(9)).is_none());
        let t = FormalGroupLaw::new(tanh_law(9), 9).unwrap();
        assert_eq!(t.log(9).unwrap(), artanh(9));
    }

    #[test]
    fn from_log_multiplicative() {
        let g = FormalGroupLaw::from_log(&GSeries::log1p(10), 10).unwrap();
        assert_eq!(g.series(), &FormalGroupLaw::multiplicative().series().truncate(10));
        assert_eq!(FormalGroupLaw::from_log(&GSeries::identity(), 6).unwrap(), FormalGroupLaw::additive());
    }

    #[test]
    fn conjugation() {
        let a = FormalGroupLaw::additive();
        assert_eq!(a.conjugate(&GSeries::identity(), 8).unwrap(), a);
        let c = a.conjugate(&GSeries::log1p(8), 8).unwrap();
        assert_eq!(c.series(), &FormalGroupLaw::multiplicative().series().truncate(8));
        let m = FormalGroupLaw::multiplicative().conjugate(&GSeries::expm1(8), 8).unwrap();
        assert_eq!(m.series(), &a.series().truncate(8));
        assert_eq!(m.log(8).unwrap().series(), &LaurentSeries::x().truncate(8));
    }

    #[test]
    fn check_failures() {
        let r = fg_check(&pp("x + y + x^2"), 6);
        assert_eq!(r.verdict, Verdict::Fail);
        assert_eq!(r.witness.unwrap().exponents, vec![2, 0]);
        let r = fg_check(&pp("x + y + x^2*y - x*y^2"), 5);
        assert_eq!(r.verdict, Verdict::Fail);
        let w = r.witness.unwrap();
        assert!(w.exponents.iter().sum::<i64>() <= 4, "{w:?}");
    }

    #[test]
    fn subtraction_inverts_the_law() {
        let m = FormalGroupLaw::multiplicative();
        let h = m.subtraction(8).unwrap();
        // F(h(x, y), y) = x
        let back = m.series().substitute(&[h, PowerSeries::var(2, 1)]).unwrap();
        assert!(back.first_mismatch(&PowerSeries::var(2, 0).truncate(8)).is_none());
    }
}
