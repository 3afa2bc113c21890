//! Associates `φ(x, z) ∈ Q((x))[[z]]` of a formal group law.
//!
//! `φ` is stored nested: outer variable `z`, inner rows Laurent in `x`.

use num_traits::{One, Zero};
use serde_json::json;

use crate::bivar::{compare_q, inner_only, nested_get, nested_literal, subst_diagonal, subst_laurent_base, substitute_second, Nested, Window2};
use crate::error::{exhausted, Error, Result};
use crate::formal_group::FormalGroupLaw;
use crate::gseries::GSeries;
use crate::power::PowerSeries;
use crate::report::{CheckReport, Tally, Witness};
use crate::scalar::{factorial, q, Q};
use crate::series::{Coeff, LaurentSeries, Series, EXACT};

#[derive(Clone, Debug, PartialEq)]
pub struct Associate {
    phi: Nested<Q>,
    group: FormalGroupLaw,
    p: Option<LaurentSeries>,
    x_window: (i64, i64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TransformKind {
    Conjugate,
    Retime,
    Bar,
}

impl std::str::FromStr for TransformKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "conjugate" => Ok(TransformKind::Conjugate),
            "retime" => Ok(TransformKind::Retime),
            "bar" => Ok(TransformKind::Bar),
            o => Err(Error::Parse(format!("unknown transform {o}"))),
        }
    }
}

impl Associate {
    /// Wraps `φ` after `assoc_check` passes on the window.
    pub fn new(phi: Nested<Q>, group: FormalGroupLaw, x_window: (i64, i64)) -> Result<Self> {
        let r = assoc_check(&phi, &group, x_window);
        if !r.is_pass() {
            return Err(Error::Validation(r.to_string()));
        }
        Ok(Associate { phi, group, p: None, x_window })
    }

    /// `φ(x, z) = x`, an associate of every group.
    pub fn trivial(group: FormalGroupLaw, z_order: i64) -> Self {
        Associate {
            phi: Series::new(z_order, [(0, LaurentSeries::x())]),
            group,
            p: Some(LaurentSeries::zero()),
            x_window: (-EXACT, EXACT),
        }
    }

    pub fn phi(&self) -> &Nested<Q> {
        &self.phi
    }

    pub fn group(&self) -> &FormalGroupLaw {
        &self.group
    }

    pub fn p(&self) -> Option<&LaurentSeries> {
        self.p.as_ref()
    }

    pub fn z_order(&self) -> i64 {
        self.phi.order()
    }

    pub fn x_window(&self) -> (i64, i64) {
        self.x_window
    }

    pub fn to_literal(&self) -> String {
        nested_literal(&self.phi, "x", "z")
    }

    /// Coefficient of `x^i z^j`, `None` if unknown.
    pub fn coeff(&self, i: i64, j: i64) -> Option<Q> {
        nested_get(&self.phi, j, i)
    }

    /// `p = ∂φ/∂z |_{z=0}`.
    pub fn extract_p(&self) -> Result<LaurentSeries> {
        if self.phi.order() < 2 {
            return Err(exhausted("z-order below 2 leaves no linear term"));
        }
        Ok(self.phi.get(1))
    }

    pub fn transform(&self, g: &GSeries, kind: TransformKind, target: Option<&FormalGroupLaw>) -> Result<Associate> {
        let order = self.z_order().min(g.order());
        let identity = g.is_identity() && g.series().is_exact();
        match kind {
            TransformKind::Retime | TransformKind::Conjugate if identity => Ok(self.clone()),
            TransformKind::Retime => {
                let phi = substitute_second(&self.phi, g)?.truncate(order);
                let group = self.group.conjugate(g, order)?;
                Associate::new(phi, group, self.x_window)
            }
            TransformKind::Conjugate => {
                let phi = conjugate_phi(&self.phi, g, order)?;
                let group = self.group.conjugate(g, order)?;
                Associate::new(phi, group, self.x_window)
            }
            TransformKind::Bar => {
                if !self.group.is_additive() {
                    return Err(Error::GroupMismatch("bar transform takes an associate of the additive law".into()));
                }
                let target = target.ok_or_else(|| Error::GroupMismatch("bar transform needs a target group".into()))?;
                let f = target.log(order.min(target.order()))?;
                let phi = conjugate_phi(&self.phi, &f, f.order())?;
                Associate::new(phi, target.clone(), self.x_window)
            }
        }
    }
}

/// `ψ_p(x, z) = Σ_k f(z)^k / k! (p d/dx)^k x` with `f` the logarithm of `F`.
pub fn assoc_from_p(group: &FormalGroupLaw, p: &LaurentSeries, z_order: i64, x_window: (i64, i64)) -> Result<Associate> {
    let f = group.log(z_order.min(group.order()))?;
    let mut phi: Nested<Q> = Series::zero_mod(z_order);
    let mut d = LaurentSeries::x();
    let mut fk = LaurentSeries::one();
    for k in 0..z_order {
        if k > 0 {
            d = p.times(&d.derivative());
            fk = fk.times(f.series()).truncate(z_order);
        }
        if d.order() <= x_window.1 {
            return Err(exhausted(format!(
                "after {k} derivation steps x is known only below x^{}",
                d.order()
            )));
        }
        let c = fk.scaled(&(Q::one() / factorial(k as u64)));
        let term: Nested<Q> = c.map(|a| d.scaled(a));
        phi = phi.plus(&term);
    }
    let mut a = Associate::new(phi, group.clone(), x_window)?;
    a.p = Some(p.clone());
    Ok(a)
}

/// `g^{-1}(φ(g(x), g(z)))`, by Taylor expanding `g^{-1}` around `g(x)`.
fn conjugate_phi(phi: &Nested<Q>, g: &GSeries, order: i64) -> Result<Nested<Q>> {
    let h = g.reversion(order.max(2))?;
    let gz = substitute_second(phi, g)?.truncate(order);
    let mut rows = Vec::new();
    for (j, r) in gz.terms() {
        rows.push((j, r.compose(g.series(), EXACT)?));
    }
    let psi: Nested<Q> = Series::new(gz.order(), rows);
    let gx = g.series().clone();
    let e = psi.minus(&inner_only(&gx));
    let mut acc: Nested<Q> = Series::zero_mod(psi.order());
    let mut dh = h.series().clone();
    let mut ek: Nested<Q> = Series::exact([(0, LaurentSeries::one())]);
    for k in 0..psi.order() {
        if k > 0 {
            dh = dh.derivative();
            ek = ek.times(&e).truncate(psi.order());
        }
        let c = dh.compose(&gx, EXACT)?.scaled(&(Q::one() / factorial(k as u64)));
        acc = acc.plus(&ek.map(|r| c.times(r)));
    }
    Ok(acc)
}

/// Checks `φ(x, 0) = x` and `φ(φ(x, y), z) = φ(x, F(y, z))` for `x` in the
/// window and `y^a z^b` below the joint precision. Witness exponents are
/// `(y, z, x)`.
pub fn assoc_check(phi: &Nested<Q>, group: &FormalGroupLaw, x_window: (i64, i64)) -> CheckReport {
    let zc = phi.order().min(group.order());
    let report = CheckReport::new("assoc-check")
        .input("phi", nested_literal(phi, "x", "z"))
        .input("group", group.to_literal())
        .range("x", x_window.0, x_window.1)
        .window_entry("z_order", if zc >= EXACT { json!("exact") } else { json!(zc) });
    let row0 = phi.get(0).minus(&LaurentSeries::x());
    if let Some((e, c)) = row0.terms().next() {
        let unit = q(if e == 1 { 1 } else { 0 });
        return report.fail(Witness::new(vec![0, 0, e], &c.plus(&unit), &unit)).note("unit law");
    }
    if zc >= EXACT {
        return report.insufficient("exact associates need an explicit z-order");
    }
    let eps = phi.minus(&inner_only(&LaurentSeries::x()));
    let w = group.series().truncate(zc);
    let mut wpow = vec![PowerSeries::constant(2, Q::one())];
    for _ in 1..zc {
        let next = wpow.last().unwrap().times(&w).truncate(zc);
        wpow.push(next);
    }
    let mut t = Tally::default();
    for b in 0..zc {
        let lhs = match subst_laurent_base(&inner_only(&phi.get(b)), &eps, zc - b) {
            Ok(l) => l,
            Err(e) => return report.insufficient(e.to_string()),
        };
        for a in 0..zc - b {
            let mut rhs = LaurentSeries::zero();
            for (j, row) in phi.terms() {
                if j > a + b {
                    break;
                }
                let c = wpow[j as usize].get(&[a as u32, b as u32]);
                if !c.is_zero() {
                    rhs = rhs.plus(&row.scaled(&c));
                }
            }
            for x in x_window.0..=x_window.1 {
                let r = rhs.known(x).then(|| rhs.get(x));
                t.scalar(&[a, b, x], nested_get(&lhs, a, x).as_ref(), r.as_ref());
            }
        }
    }
    report.tally(&t).note("exponents are (y, z, x)")
}

/// Looks for a nonzero coefficient of `q(φ(x, z), x)` on the window
/// (`var1` = x, `var2` = z). Nonvanishing can only be witnessed.
pub fn nonvanishing_probe(qs: &PowerSeries, a: &Associate, window: Window2) -> CheckReport {
    let report = CheckReport::new("nonvanishing-probe")
        .input("q", qs.to_literal(&["x1", "x2"]))
        .input("phi", a.to_literal())
        .range("x", window.var1.0, window.var1.1)
        .range("z", window.var2.0, window.var2.1);
    let eps = a.phi.minus(&inner_only(&LaurentSeries::x()));
    let trivial = (window.var2.0..=window.var2.1)
        .filter(|j| *j >= 1)
        .all(|j| (window.var1.0..=window.var1.1).all(|i| nested_get(&eps, j, i).is_none_or(|c| c.is_zero())));
    if trivial {
        return report.insufficient("phi equals x on the window; the probe does not apply");
    }
    if qs.terms().next().is_none() {
        return report.insufficient("q vanishes modulo its precision");
    }
    let qn = qs.to_nested(1);
    let val = match subst_diagonal(&qn, 0, &eps, window.var2.1 + 1) {
        Ok(v) => v,
        Err(e) => return report.insufficient(e.to_string()),
    };
    let mut seen = 0;
    for (i, j) in window.points() {
        if let Some(c) = nested_get(&val, j, i) {
            seen += 1;
            if !c.is_zero() {
                return CheckReport { witness: Some(Witness::new(vec![i, j], &c, &q(0))), ..report.pass() }
                    .window_entry("compared", seen);
            }
        }
    }
    report.insufficient("inconclusive-window").window_entry("compared", seen)
}

/// Compares two associates coefficientwise on a window (`var1` = x, `var2` = z).
pub fn compare_associates(a: &Nested<Q>, b: &Nested<Q>, window: Window2) -> Tally {
    let mut t = Tally::default();
    compare_q(&mut t, &window, |i, j| nested_get(a, j, i), |i, j| nested_get(b, j, i));
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bivar::parse_lp;
    use crate::report::Verdict;

    fn lp(s: &str) -> Nested<Q> {
        parse_lp(s, ["x", "z"]).unwrap()
    }

    const XW: (i64, i64) = (-3, 8);

    #[test]
    fn from_p_examples() {
        let fa = FormalGroupLaw::additive();
        let fm = FormalGroupLaw::multiplicative();
        let a = assoc_from_p(&fa, &LaurentSeries::zero(), 6, XW).unwrap();
        assert!(compare_associates(a.phi(), &lp("x + O(z^6)"), Window2::new(XW, (0, 5))).verdict() == Verdict::Pass);
        let a = assoc_from_p(&fa, &LaurentSeries::monomial(q(1), 2), 6, XW).unwrap();
        for n in 0..6 {
            assert_eq!(a.coeff(n + 1, n), Some(q(1)));
            assert_eq!(a.coeff(n, n), Some(q(0)));
        }
        let a = assoc_from_p(&fm, &LaurentSeries::x(), 6, XW).unwrap();
        let t = compare_associates(a.phi(), &lp("x + x*z + O(z^6)"), Window2::new(XW, (0, 5)));
        assert_eq!(t.verdict(), Verdict::Pass);
        // x (1 - x log(1+z))^{-1} = Σ x^{n+1} log(1+z)^n
        let a = assoc_from_p(&fm, &LaurentSeries::monomial(q(1), 2), 6, XW).unwrap();
        let l = GSeries::log1p(6).into_series();
        let mut ln = LaurentSeries::one();
        for n in 0..6 {
            for j in 0..6 {
                assert_eq!(a.coeff(n + 1, j), Some(ln.get(j)), "x^{} z^{j}", n + 1);
            }
            ln = ln.times(&l).truncate(6);
        }
    }

    #[test]
    fn check_examples() {
        let fm = FormalGroupLaw::multiplicative();
        assert!(assoc_check(&lp("x + O(z^6)"), &fm, XW).is_pass());
        assert!(assoc_check(&fm.series().to_nested(1).truncate(6), &fm, XW).is_pass());
        let r = assoc_check(&lp("x + z + O(z^6)"), &fm, XW);
        assert_eq!(r.verdict, Verdict::Fail);
        let w = r.witness.unwrap();
        assert_eq!(&w.exponents[..2], &[1, 1]);
        assert!(assoc_check(&lp("x + x^2 + z + O(z^6)"), &FormalGroupLaw::additive(), XW).verdict == Verdict::Fail);
    }

    #[test]
    fn extract_p_examples() {
        let fa = FormalGroupLaw::additive();
        let xez = crate::bivar::x_exp_z(6);
        let a = Associate::new(xez, fa.clone(), XW).unwrap();
        assert_eq!(a.extract_p().unwrap(), LaurentSeries::x());
        assert_eq!(Associate::trivial(fa, 6).extract_p().unwrap(), LaurentSeries::zero());
        let fm = FormalGroupLaw::multiplicative();
        let a = Associate::new(lp("x + x*z + O(z^6)"), fm, XW).unwrap();
        assert_eq!(a.extract_p().unwrap(), LaurentSeries::x());
    }

    #[test]
    fn transforms_and_retime_bar_difference() {
        let fa = FormalGroupLaw::additive();
        let fm = FormalGroupLaw::multiplicative();
        let a = Associate::new(lp("x + z + O(z^7)"), fa.clone(), XW).unwrap();
        let g = GSeries::log1p(7);
        let re = a.transform(&g, TransformKind::Retime, None).unwrap();
        let want: Nested<Q> = Series::new(7, (0..7).map(|j| {
            let c = if j == 0 { LaurentSeries::x() } else { LaurentSeries::constant(g.series().get(j)) };
            (j, c)
        }));
        assert_eq!(compare_associates(re.phi(), &want, Window2::new(XW, (0, 6))).verdict(), Verdict::Pass);
        assert_eq!(re.group().series(), &fm.series().truncate(7));
        let conj = a.transform(&g, TransformKind::Conjugate, None).unwrap();
        let bar = a.transform(&GSeries::identity(), TransformKind::Bar, Some(&fm)).unwrap();
        let xzxz = lp("x + z + x*z + O(z^7)");
        for b in [&conj, &bar] {
            assert_eq!(compare_associates(b.phi(), &xzxz, Window2::new(XW, (0, 6))).verdict(), Verdict::Pass);
        }
        let diff = compare_associates(bar.phi(), re.phi(), Window2::new((0, 4), (0, 4)));
        let w = diff.mismatch.unwrap();
        assert_eq!(w.exponents, vec![1, 1]);
        assert_eq!((w.lhs.as_str(), w.rhs.as_str()), ("1", "0"));
        let same = a.transform(&GSeries::identity(), TransformKind::Conjugate, None).unwrap();
        assert_eq!(same.phi(), a.phi());
        assert!(matches!(re.transform(&g, TransformKind::Bar, Some(&fm)), Err(Error::GroupMismatch(_))));
    }

    #[test]
    fn probe_examples() {
        let fa = FormalGroupLaw::additive();
        let fm = FormalGroupLaw::multiplicative();
        let d = crate::bivar::parse_pp("x1 - x2", ["x1", "x2"]).unwrap();
        let w = Window2::new((-2, 4), (0, 4));
        let a = Associate::new(crate::bivar::x_exp_z(6), fa.clone(), XW).unwrap();
        let r = nonvanishing_probe(&d, &a, w);
        assert!(r.is_pass());
        assert_eq!(r.witness.unwrap().exponents, vec![1, 1]);
        let a = Associate::new(lp("x + z + O(z^6)"), fa, XW).unwrap();
        assert_eq!(nonvanishing_probe(&d, &a, w).witness.unwrap().exponents, vec![0, 1]);
        let a = Associate::new(lp("x + x*z + O(z^6)"), fm, XW).unwrap();
        let r = nonvanishing_probe(&d.times(&d), &a, w);
        assert_eq!(r.witness.unwrap().exponents, vec![2, 2]);
    }
}
