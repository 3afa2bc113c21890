//! Multivariate power series truncated by total degree.
//!
//! `PowerSeries` is the carrier of formal group laws: `F(x, y)` known
//! modulo `(x, y)^order`. Substitution of series with zero constant term
//! respects the total-degree filtration, so precision is a single integer.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Q;
use crate::series::{push_term, LaurentSeries, Series, EXACT};

#[derive(Clone, PartialEq, Debug)]
pub struct PowerSeries {
    nvars: usize,
    order: i64,
    terms: BTreeMap<Vec<u32>, Q>,
}

fn degree(e: &[u32]) -> i64 {
    e.iter().map(|d| *d as i64).sum()
}

/// Total degree first, then lexicographic with the first variable largest.
fn graded_key(e: &[u32]) -> (i64, Vec<std::cmp::Reverse<u32>>) {
    (degree(e), e.iter().map(|d| std::cmp::Reverse(*d)).collect())
}

impl PowerSeries {
    pub fn new(nvars: usize, order: i64, terms: impl IntoIterator<Item = (Vec<u32>, Q)>) -> Self {
        let mut map: BTreeMap<Vec<u32>, Q> = BTreeMap::new();
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent arity");
            if degree(&e) >= order || c.is_zero() {
                continue;
            }
            *map.entry(e).or_insert_with(Q::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        PowerSeries { nvars, order, terms: map }
    }

    pub fn exact(nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, Q)>) -> Self {
        Self::new(nvars, EXACT, terms)
    }

    pub fn zero(nvars: usize) -> Self {
        Self::exact(nvars, [])
    }

    pub fn constant(nvars: usize, c: Q) -> Self {
        Self::exact(nvars, [(vec![0; nvars], c)])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::exact(nvars, [(e, Q::one())])
    }

    /// Embeds a univariate power series as a series in variable `i`.
    pub fn from_univariate(nvars: usize, i: usize, s: &LaurentSeries) -> Result<Self> {
        if s.low() < 0 {
            return Err(Error::DomainViolation("power series cannot carry negative powers".into()));
        }
        Ok(Self::new(
            nvars,
            s.order(),
            s.terms().map(|(d, c)| {
                let mut e = vec![0; nvars];
                e[i] = d as u32;
                (e, c.clone())
            }),
        ))
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn is_exact(&self) -> bool {
        self.order >= EXACT
    }

    /// Least total degree present (or the order for the zero series).
    pub fn valuation(&self) -> i64 {
        self.terms.keys().map(|e| degree(e)).min().unwrap_or(self.order)
    }

    pub fn get(&self, e: &[u32]) -> Q {
        self.terms.get(e).cloned().unwrap_or_else(Q::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Q)> {
        self.terms.iter()
    }

    pub fn truncate(&self, order: i64) -> Self {
        Self::new(self.nvars, order.min(self.order), self.terms.clone())
    }

    pub fn plus(&self, o: &Self) -> Self {
        let order = self.order.min(o.order);
        Self::new(
            self.nvars,
            order,
            self.terms.iter().chain(o.terms.iter()).map(|(e, c)| (e.clone(), c.clone())),
        )
    }

    pub fn negated(&self) -> Self {
        Self::new(self.nvars, self.order, self.terms.iter().map(|(e, c)| (e.clone(), -c)))
    }

    pub fn minus(&self, o: &Self) -> Self {
        self.plus(&o.negated())
    }

    pub fn scaled(&self, r: &Q) -> Self {
        Self::new(self.nvars, self.order, self.terms.iter().map(|(e, c)| (e.clone(), c * r)))
    }

    pub fn times(&self, o: &Self) -> Self {
        let order = sat(self.order, o.valuation()).min(sat(o.order, self.valuation()));
        let mut out: BTreeMap<Vec<u32>, Q> = BTreeMap::new();
        for (a, ca) in &self.terms {
            let da = degree(a);
            for (b, cb) in &o.terms {
                if da + degree(b) >= order {
                    continue;
                }
                let e: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                *out.entry(e).or_insert_with(Q::zero) += ca * cb;
            }
        }
        Self::new(self.nvars, order, out)
    }

    pub fn pow(&self, n: u32, cap: i64) -> Self {
        let mut acc = Self::constant(self.nvars, Q::one()).truncate(cap);
        for _ in 0..n {
            acc = acc.times(self).truncate(cap);
        }
        acc
    }

    /// `f(self)` for a univariate power series `f`; `self` must have zero
    /// constant term.
    pub fn apply(&self, f: &LaurentSeries, cap: i64) -> Result<Self> {
        if f.low() < 0 {
            return Err(Error::DomainViolation("outer series has negative powers".into()));
        }
        let v = self.valuation();
        if v < 1 {
            return Err(Error::DomainViolation("inner series has a constant term".into()));
        }
        let mut order = cap;
        if !f.is_exact() {
            order = order.min(f.order().saturating_mul(v).min(EXACT));
        }
        if f.terms().any(|(m, _)| m >= 1) {
            order = order.min(self.order);
        }
        let mut acc = Self::new(self.nvars, order, []);
        let mut power = Self::constant(self.nvars, Q::one());
        let mut k = 0;
        for (m, c) in f.terms() {
            while k < m {
                power = power.times(self).truncate(order);
                k += 1;
            }
            acc = acc.plus(&power.scaled(c));
        }
        Ok(acc.truncate(order))
    }

    /// `self(args[0], ..., args[n-1])` with every argument of positive valuation.
    pub fn substitute(&self, args: &[PowerSeries]) -> Result<Self> {
        assert_eq!(args.len(), self.nvars, "substitution arity");
        let m = args.first().map(|a| a.nvars).unwrap_or(0);
        let vmin = args.iter().map(|a| a.valuation()).min().unwrap_or(EXACT);
        if vmin < 1 {
            return Err(Error::DomainViolation("substituted series need zero constant term".into()));
        }
        let mut order = args.iter().map(|a| a.order).min().unwrap_or(EXACT);
        if !self.is_exact() {
            order = order.min(self.order.saturating_mul(vmin).min(EXACT));
        }
        let maxdeg: Vec<u32> = (0..self.nvars)
            .map(|i| self.terms.keys().map(|e| e[i]).max().unwrap_or(0))
            .collect();
        let powers: Vec<Vec<PowerSeries>> = args
            .iter()
            .zip(&maxdeg)
            .map(|(a, d)| {
                let mut ps = vec![Self::constant(m, Q::one())];
                for _ in 0..*d {
                    let next = ps.last().unwrap().times(a).truncate(order);
                    ps.push(next);
                }
                ps
            })
            .collect();
        let mut acc = Self::new(m, order, []);
        for (e, c) in &self.terms {
            let mut t = Self::constant(m, c.clone()).truncate(order);
            for (i, d) in e.iter().enumerate() {
                if *d > 0 {
                    t = t.times(&powers[i][*d as usize]).truncate(order);
                }
            }
            acc = acc.plus(&t);
        }
        Ok(acc)
    }

    /// For two variables: the coefficient of `var^power` as a series in the
    /// other variable, known to `order - power`.
    pub fn slice(&self, var: usize, power: u32) -> LaurentSeries {
        assert_eq!(self.nvars, 2);
        let other = 1 - var;
        LaurentSeries::new(
            sat(self.order, -(power as i64)),
            self.terms
                .iter()
                .filter(|(e, _)| e[var] == power)
                .map(|(e, c)| (e[other] as i64, c.clone())),
        )
    }

    /// Two-variable series as a nested series, outer variable `outer`.
    /// Precision becomes the staircase `inner order = order - outer exponent`.
    pub fn to_nested(&self, outer: usize) -> Series<LaurentSeries> {
        assert_eq!(self.nvars, 2);
        let top = if self.is_exact() {
            self.terms.keys().map(|e| e[outer] as i64 + 1).max().unwrap_or(0)
        } else {
            self.order.max(0)
        };
        Series::new(
            self.order,
            (0..top).map(|j| (j, self.slice(outer, j as u32))),
        )
    }

    /// Swaps two variables.
    pub fn swap(&self, i: usize, j: usize) -> Self {
        Self::new(
            self.nvars,
            self.order,
            self.terms.iter().map(|(e, c)| {
                let mut e = e.clone();
                e.swap(i, j);
                (e, c.clone())
            }),
        )
    }

    /// First disagreement on the common precision, in graded order.
    pub fn first_mismatch(&self, o: &Self) -> Option<(Vec<u32>, Q, Q)> {
        let order = self.order.min(o.order);
        let mut keys: Vec<&Vec<u32>> = self
            .terms
            .keys()
            .chain(o.terms.keys())
            .filter(|e| degree(e) < order)
            .collect();
        keys.sort_by_key(|e| graded_key(e));
        keys.dedup();
        for e in keys {
            let (a, b) = (self.get(e), o.get(e));
            if a != b {
                return Some((e.clone(), a, b));
            }
        }
        None
    }

    /// Literal with the total-degree marker `O(x, y)^N`.
    pub fn to_literal(&self, vars: &[&str]) -> String {
        assert_eq!(vars.len(), self.nvars);
        let mut keys: Vec<&Vec<u32>> = self.terms.keys().collect();
        keys.sort_by_key(|e| graded_key(e));
        let mut out = String::new();
        for e in keys {
            let mono: Vec<(&str, i64)> = vars.iter().copied().zip(e.iter().map(|d| *d as i64)).collect();
            push_term(&mut out, &self.terms[e], &mono);
        }
        if out.is_empty() {
            out.push('0');
        }
        if !self.is_exact() {
            out.push_str(&format!(" + O({})^{}", vars.join(", "), self.order));
        }
        out
    }
}

fn sat(order: i64, shift: i64) -> i64 {
    crate::series::ord_add(order, shift)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;
    use crate::series::std_series::log1p;

    fn fm() -> PowerSeries {
        PowerSeries::exact(2, [(vec![1, 0], q(1)), (vec![0, 1], q(1)), (vec![1, 1], q(1))])
    }

    #[test]
    fn product_precision_is_total_degree() {
        let a = PowerSeries::var(2, 0).plus(&PowerSeries::new(2, 4, []));
        let b = PowerSeries::var(2, 1);
        let p = a.times(&b);
        assert_eq!(p.order(), 5);
        assert_eq!(p.get(&[1, 1]), q(1));
    }

    #[test]
    fn log_of_multiplicative_law_is_additive() {
        let f = log1p(9);
        let lhs = fm().apply(&f, EXACT).unwrap();
        let fx = PowerSeries::from_univariate(2, 0, &f).unwrap();
        let fy = PowerSeries::from_univariate(2, 1, &f).unwrap();
        assert_eq!(lhs.order(), 9);
        assert!(lhs.first_mismatch(&fx.plus(&fy)).is_none());
    }

    #[test]
    fn nested_staircase() {
        let n = fm().truncate(4).to_nested(1);
        assert_eq!(n.order(), 4);
        assert_eq!(n.get(1).order(), 3);
        assert_eq!(n.get(1).get(1), q(1));
        assert_eq!(n.get(0).get(1), q(1));
    }

    #[test]
    fn literal() {
        assert_eq!(fm().to_literal(&["x", "y"]), "x + y + x*y");
        assert_eq!(fm().truncate(2).to_literal(&["x", "y"]), "x + y + O(x, y)^2");
    }
}
