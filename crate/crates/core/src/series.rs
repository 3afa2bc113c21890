//! Truncated Laurent series with in-band precision.
//!
//! A [`Series`] stores coefficients for exponents in `[low, order)` and is
//! known modulo `x^order`. `order == EXACT` marks a finite exact expansion.
//! Every operation derives the largest order its inputs justify; nothing
//! is truncated against a global setting.
//!
//! The coefficient type is generic so that nested series
//! (`Series<Series<Q>>`) and vector-valued series (`Series<Vector>`) share
//! the same kernel.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{exhausted, Error, Result};
use crate::scalar::{binomial, fmt_q, q, Q};

/// Order marker for exact (finitely supported, fully known) series.
pub const EXACT: i64 = i64::MAX / 4;

/// `order + shift`, saturating at [`EXACT`].
pub fn ord_add(order: i64, shift: i64) -> i64 {
    if order >= EXACT || shift >= EXACT {
        EXACT
    } else {
        (order + shift).min(EXACT)
    }
}

/// Coefficients a series can carry.
pub trait Coeff: Clone + PartialEq + fmt::Debug {
    fn additive_zero() -> Self;
    /// Exactly zero, safe to drop from storage.
    fn is_exact_zero(&self) -> bool;
    /// Zero on everything that is known.
    fn vanishes(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
    fn scaled(&self, r: &Q) -> Self;
    fn minus(&self, other: &Self) -> Self {
        self.plus(&other.negated())
    }
}

/// Multiplication of a coefficient by a scalar-like value `S`.
pub trait Act<S>: Coeff {
    fn act(&self, s: &S) -> Self;
}

impl Coeff for Q {
    fn additive_zero() -> Self {
        Zero::zero()
    }
    fn is_exact_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn negated(&self) -> Self {
        -self
    }
    fn scaled(&self, r: &Q) -> Self {
        self * r
    }
}

impl Act<Q> for Q {
    fn act(&self, s: &Q) -> Self {
        self * s
    }
}

/// Sparse vector over a finite basis, indexed by basis position.
#[derive(Clone, PartialEq, Eq, Debug, Default, Hash)]
pub struct Vector(BTreeMap<usize, Q>);

impl Vector {
    pub fn new() -> Self {
        Vector(BTreeMap::new())
    }

    pub fn basis(i: usize) -> Self {
        let mut m = BTreeMap::new();
        m.insert(i, Q::one());
        Vector(m)
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, Q)>) -> Self {
        let mut v = Vector::new();
        for (i, c) in pairs {
            v.add_to(i, &c);
        }
        v
    }

    pub fn get(&self, i: usize) -> Q {
        self.0.get(&i).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add_to(&mut self, i: usize, c: &Q) {
        if c.is_zero() {
            return;
        }
        let slot = self.0.entry(i).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            self.0.remove(&i);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Q)> {
        self.0.iter().map(|(i, c)| (*i, c))
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Largest basis index with a nonzero entry.
    pub fn support_max(&self) -> Option<usize> {
        self.0.keys().next_back().copied()
    }
}

impl Coeff for Vector {
    fn additive_zero() -> Self {
        Vector::new()
    }
    fn is_exact_zero(&self) -> bool {
        self.0.is_empty()
    }
    fn vanishes(&self) -> bool {
        self.0.is_empty()
    }
    fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (i, c) in other.iter() {
            out.add_to(i, c);
        }
        out
    }
    fn negated(&self) -> Self {
        Vector(self.0.iter().map(|(i, c)| (*i, -c)).collect())
    }
    fn scaled(&self, r: &Q) -> Self {
        if r.is_zero() {
            return Vector::new();
        }
        Vector(self.0.iter().map(|(i, c)| (*i, c * r)).collect())
    }
}

impl Act<Q> for Vector {
    fn act(&self, s: &Q) -> Self {
        self.scaled(s)
    }
}

/// Univariate Laurent series over `C`, known modulo `x^order`.
#[derive(Clone, PartialEq, Debug)]
pub struct Series<C> {
    low: i64,
    order: i64,
    coeffs: BTreeMap<i64, C>,
}

pub type LaurentSeries = Series<Q>;

impl<C: Coeff> Series<C> {
    /// Builds a series known modulo `x^order`; terms at or beyond `order`
    /// are discarded and exact zeros are dropped.
    pub fn new(order: i64, terms: impl IntoIterator<Item = (i64, C)>) -> Self {
        let mut coeffs: BTreeMap<i64, C> = BTreeMap::new();
        for (e, c) in terms {
            if e >= order {
                continue;
            }
            match coeffs.get_mut(&e) {
                Some(slot) => *slot = slot.plus(&c),
                None => {
                    coeffs.insert(e, c);
                }
            }
        }
        coeffs.retain(|_, c| !c.is_exact_zero());
        let low = coeffs.keys().next().copied().unwrap_or(order).min(order);
        Series { low, order, coeffs }
    }

    pub fn exact(terms: impl IntoIterator<Item = (i64, C)>) -> Self {
        Self::new(EXACT, terms)
    }

    pub fn zero() -> Self {
        Self::new(EXACT, std::iter::empty())
    }

    pub fn zero_mod(order: i64) -> Self {
        Self::new(order, std::iter::empty())
    }

    pub fn monomial(c: C, e: i64) -> Self {
        Self::exact([(e, c)])
    }

    /// Least exponent that may carry a nonzero coefficient.
    pub fn low(&self) -> i64 {
        self.low
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn is_exact(&self) -> bool {
        self.order >= EXACT
    }

    pub fn known(&self, e: i64) -> bool {
        e < self.order
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &C)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    /// Stored coefficient, or zero. Callers check `known(e)` first.
    pub fn get(&self, e: i64) -> C {
        self.coeffs.get(&e).cloned().unwrap_or_else(C::additive_zero)
    }

    pub fn coeff(&self, e: i64) -> Option<&C> {
        self.coeffs.get(&e)
    }

    /// Largest stored exponent.
    pub fn high(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn is_exact_zero(&self) -> bool {
        self.coeffs.is_empty() && self.is_exact()
    }

    /// True when every known coefficient vanishes.
    pub fn vanishes(&self) -> bool {
        self.coeffs.values().all(|c| c.vanishes())
    }

    pub fn truncate(&self, order: i64) -> Self {
        let order = order.min(self.order);
        Self::new(order, self.coeffs.range(..order).map(|(e, c)| (*e, c.clone())))
    }

    /// Multiplies by `x^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self::new(
            ord_add(self.order, k),
            self.coeffs.iter().map(|(e, c)| (e + k, c.clone())),
        )
    }

    pub fn map<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Series<D> {
        Series::new(self.order, self.coeffs.iter().map(|(e, c)| (*e, f(c))))
    }

    pub fn plus(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        let mut out: BTreeMap<i64, C> = self.coeffs.range(..order).map(|(e, c)| (*e, c.clone())).collect();
        for (e, c) in other.coeffs.range(..order) {
            match out.get_mut(e) {
                Some(slot) => *slot = slot.plus(c),
                None => {
                    out.insert(*e, c.clone());
                }
            }
        }
        Self::new(order, out)
    }

    pub fn negated(&self) -> Self {
        Self::new(self.order, self.coeffs.iter().map(|(e, c)| (*e, c.negated())))
    }

    pub fn minus(&self, other: &Self) -> Self {
        self.plus(&other.negated())
    }

    pub fn scaled(&self, r: &Q) -> Self {
        Self::new(self.order, self.coeffs.iter().map(|(e, c)| (*e, c.scaled(r))))
    }

    /// Product with a series over `S`. Order is
    /// `min(a.order + b.low, b.order + a.low)`.
    pub fn times<S: Coeff>(&self, other: &Series<S>) -> Self
    where
        C: Act<S>,
    {
        let order = ord_add(self.order, other.low).min(ord_add(other.order, self.low));
        let mut out: BTreeMap<i64, C> = BTreeMap::new();
        for (i, a) in &self.coeffs {
            for (j, b) in &other.coeffs {
                let e = i + j;
                if e >= order {
                    break;
                }
                let t = a.act(b);
                match out.get_mut(&e) {
                    Some(slot) => *slot = slot.plus(&t),
                    None => {
                        out.insert(e, t);
                    }
                }
            }
        }
        Self::new(order, out)
    }

    /// Termwise d/dx; an order-N series has a derivative of order N-1.
    pub fn derivative(&self) -> Self {
        Self::new(
            ord_add(self.order, -1),
            self.coeffs.iter().map(|(e, c)| (e - 1, c.scaled(&q(*e)))),
        )
    }

    /// Antiderivative with zero constant term.
    pub fn integral(&self) -> Result<Self> {
        if !self.known(-1) {
            return Err(exhausted("x^-1 coefficient is not known"));
        }
        if self.coeffs.get(&-1).is_some_and(|c| !c.vanishes()) {
            return Err(Error::ResidueObstruction);
        }
        Ok(Self::new(
            ord_add(self.order, 1),
            self.coeffs
                .iter()
                .filter(|(e, _)| **e != -1)
                .map(|(e, c)| (e + 1, c.scaled(&Q::new(1.into(), (e + 1).into())))),
        ))
    }

    /// `h(g(x))` for `g` with positive valuation. The output order is the
    /// one guaranteed by `g(x)^m ∈ x^{m·low(g)} Q[[x]]`, capped at `cap`.
    pub fn compose(&self, g: &LaurentSeries, cap: i64) -> Result<Self> {
        let lg = g.low();
        if lg < 1 || g.coeffs.is_empty() {
            return Err(Error::DomainViolation(
                "inner series must have positive valuation".into(),
            ));
        }
        let ng = g.order();
        let mut out_order = cap;
        if !self.is_exact() {
            out_order = out_order.min(self.order.saturating_mul(lg));
        }
        for (m, _) in self.terms() {
            if m != 0 && ng < EXACT {
                out_order = out_order.min(ng + (m - 1) * lg);
            }
        }
        let has_negative = self.coeffs.keys().next().is_some_and(|m| *m < 0);
        let monomial_g = g.coeffs.len() == 1 && g.is_exact();
        if out_order >= EXACT && has_negative && !monomial_g {
            return Err(exhausted("negative powers of a non-monomial need a cap"));
        }
        if out_order <= i64::MIN / 4 {
            return Err(exhausted("composition order underflow"));
        }
        let mut acc: Vec<(i64, C)> = Vec::new();
        let mut pos = LaurentSeries::one();
        let mut pos_exp = 0;
        for (m, c) in self.coeffs.iter() {
            let power = if *m >= 0 {
                while pos_exp < *m {
                    pos = pos.times(g).truncate(out_order);
                    pos_exp += 1;
                }
                pos.clone()
            } else {
                g.pow(*m, out_order)?
            };
            for (e, r) in power.terms() {
                if e < out_order {
                    acc.push((e, c.scaled(r)));
                }
            }
        }
        Ok(Self::new(out_order, acc))
    }
}

impl<C: Coeff> Coeff for Series<C> {
    fn additive_zero() -> Self {
        Series::zero()
    }
    fn is_exact_zero(&self) -> bool {
        Series::is_exact_zero(self)
    }
    fn vanishes(&self) -> bool {
        Series::vanishes(self)
    }
    fn plus(&self, other: &Self) -> Self {
        Series::plus(self, other)
    }
    fn negated(&self) -> Self {
        Series::negated(self)
    }
    fn scaled(&self, r: &Q) -> Self {
        Series::scaled(self, r)
    }
}

impl<C: Act<S>, S: Coeff> Act<Series<S>> for Series<C> {
    fn act(&self, s: &Series<S>) -> Self {
        self.times(s)
    }
}

impl LaurentSeries {
    pub fn one() -> Self {
        Self::monomial(Q::one(), 0)
    }

    /// The variable itself.
    pub fn x() -> Self {
        Self::monomial(Q::one(), 1)
    }

    pub fn constant(c: Q) -> Self {
        Self::monomial(c, 0)
    }

    /// Builds from integer-indexed rational coefficients starting at `low`.
    pub fn from_coeffs(low: i64, order: i64, coeffs: impl IntoIterator<Item = Q>) -> Self {
        Self::new(order, coeffs.into_iter().enumerate().map(|(i, c)| (low + i as i64, c)))
    }

    /// Multiplicative inverse, known to the order the input justifies, capped.
    pub fn inv(&self, cap: i64) -> Result<Self> {
        let l = self.low;
        let lead = match self.coeffs.get(&l) {
            Some(c) => c.clone(),
            None => return Err(Error::DivisionByIndeterminate),
        };
        if self.coeffs.len() == 1 && self.is_exact() {
            return Ok(Self::monomial(Q::one() / lead, -l));
        }
        // self = x^l u with u known modulo x^(order - l).
        let u_order = ord_add(self.order, -l);
        let out_order = ord_add(u_order, -l).min(cap);
        if out_order >= EXACT {
            return Err(exhausted("inverse of a non-monomial needs a cap"));
        }
        let n = out_order + l;
        if n <= 0 {
            return Ok(Self::zero_mod(out_order));
        }
        let inv_lead = Q::one() / &lead;
        let u: Vec<Q> = (0..n).map(|k| self.get(l + k)).collect();
        let mut b: Vec<Q> = Vec::with_capacity(n as usize);
        b.push(inv_lead.clone());
        for k in 1..n as usize {
            let mut s = Q::zero();
            for j in 1..=k {
                if !u[j].is_zero() {
                    s += &u[j] * &b[k - j];
                }
            }
            b.push(-s * &inv_lead);
        }
        Ok(Self::from_coeffs(-l, out_order, b))
    }

    /// `self / other`, capped at `cap`.
    pub fn div(&self, other: &Self, cap: i64) -> Result<Self> {
        if self.is_exact_zero() {
            return Ok(Self::zero());
        }
        let inv = other.inv(ord_add(cap, -self.low.min(0)).max(cap))?;
        Ok(self.times(&inv).truncate(cap))
    }

    /// Integer power; negative exponents go through the inverse.
    pub fn pow(&self, n: i64, cap: i64) -> Result<Self> {
        if n == 0 {
            return Ok(Self::one());
        }
        if self.coeffs.is_empty() {
            if n > 0 {
                return Ok(Self::zero_mod(self.order.saturating_mul(n).min(EXACT)).truncate(cap));
            }
            return Err(Error::DivisionByIndeterminate);
        }
        let l = self.low;
        let u = self.shift(-l);
        let base = if n < 0 { u.inv(ord_add(cap, -(n * l)))? } else { u };
        let k = n.unsigned_abs();
        let ucap = if cap >= EXACT { EXACT } else { cap - n * l };
        let mut acc = Self::one();
        let mut sq = base;
        let mut e = k;
        loop {
            if e & 1 == 1 {
                acc = acc.times(&sq).truncate(ucap);
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            sq = sq.times(&sq).truncate(ucap);
        }
        Ok(acc.shift(n * l).truncate(cap))
    }

    /// Truncated exponential of a series with zero constant term.
    pub fn exp(&self, cap: i64) -> Result<Self> {
        if self.coeffs.keys().any(|e| *e <= 0) {
            return Err(Error::DomainViolation("exp needs a zero constant term and no negative powers".into()));
        }
        if self.is_exact_zero() {
            return Ok(Self::one());
        }
        let order = self.order.min(cap);
        if order >= EXACT {
            return Err(exhausted("exp of a nonzero exact series needs a cap"));
        }
        if order <= 0 {
            return Ok(Self::zero_mod(order));
        }
        // E' = a' E: n E_n = sum_k k a_k E_{n-k}.
        let n = order as usize;
        let mut e: Vec<Q> = vec![Q::one()];
        for m in 1..n {
            let mut s = Q::zero();
            for k in 1..=m {
                let ak = self.get(k as i64);
                if !ak.is_zero() {
                    s += q(k as i64) * ak * &e[m - k];
                }
            }
            e.push(s / q(m as i64));
        }
        Ok(Self::from_coeffs(0, order, e))
    }

    /// Truncated logarithm of a series with constant term 1.
    pub fn log(&self, cap: i64) -> Result<Self> {
        if self.coeffs.keys().any(|e| *e < 0) || !self.known(0) || self.get(0) != Q::one() {
            return Err(Error::DomainViolation("log needs constant term 1".into()));
        }
        let order = self.order.min(cap);
        if order >= EXACT {
            if self.coeffs.len() == 1 {
                return Ok(Self::zero());
            }
            return Err(exhausted("log of a nonconstant exact series needs a cap"));
        }
        let d = self.derivative().div(self, order - 1)?;
        d.integral()
    }

    /// First exponent where the two series differ on their common precision.
    pub fn first_mismatch(&self, other: &Self) -> Option<(i64, Q, Q)> {
        let order = self.order.min(other.order);
        let keys: std::collections::BTreeSet<i64> = self
            .coeffs
            .range(..order)
            .chain(other.coeffs.range(..order))
            .map(|(e, _)| *e)
            .collect();
        for e in keys {
            let (a, b) = (self.get(e), other.get(e));
            if a != b {
                return Some((e, a, b));
            }
        }
        None
    }

    /// Equal on the common precision.
    pub fn agrees_with(&self, other: &Self) -> bool {
        self.first_mismatch(other).is_none()
    }

    /// Prints in the literal grammar with variable `var`.
    pub fn to_literal(&self, var: &str) -> String {
        let mut out = String::new();
        for (e, c) in &self.coeffs {
            push_term(&mut out, c, &[(var, *e)]);
        }
        if self.is_exact() {
            if out.is_empty() {
                out.push('0');
            }
        } else {
            if out.is_empty() {
                out.push('0');
            }
            out.push_str(&format!(" + O({var}^{})", self.order));
        }
        out
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_literal("x"))
    }
}

/// Appends `± c*v1^e1*v2^e2` to `out` in literal form. Zero exponents are
/// omitted; a unit coefficient is omitted unless the monomial is 1.
pub(crate) fn push_term(out: &mut String, c: &Q, vars: &[(&str, i64)]) {
    let neg = c < &Q::zero();
    let abs = if neg { -c } else { c.clone() };
    if out.is_empty() {
        if neg {
            out.push('-');
        }
    } else {
        out.push_str(if neg { " - " } else { " + " });
    }
    let mono: Vec<String> = vars
        .iter()
        .filter(|(_, e)| *e != 0)
        .map(|(v, e)| if *e == 1 { v.to_string() } else { format!("{v}^{e}") })
        .collect();
    if mono.is_empty() {
        out.push_str(&fmt_q(&abs));
    } else if abs.is_one() {
        out.push_str(&mono.join("*"));
    } else {
        out.push_str(&fmt_q(&abs));
        out.push('*');
        out.push_str(&mono.join("*"));
    }
}

/// Standard expansions used across the crate.
pub mod std_series {
    use super::*;

    /// log(1+x) = sum_{n>=1} (-1)^{n-1} x^n / n, modulo x^order.
    pub fn log1p(order: i64) -> LaurentSeries {
        LaurentSeries::new(
            order,
            (1..order).map(|n| {
                let sign = if n % 2 == 1 { 1 } else { -1 };
                (n, Q::new(sign.into(), n.into()))
            }),
        )
    }

    /// e^x - 1 modulo x^order.
    pub fn expm1(order: i64) -> LaurentSeries {
        LaurentSeries::new(
            order,
            (1..order).map(|n| (n, Q::one() / crate::scalar::factorial(n as u64))),
        )
    }

    /// e^{c x} modulo x^order.
    pub fn exp_linear(c: &Q, order: i64) -> LaurentSeries {
        let mut pow = Q::one();
        let mut terms = Vec::new();
        for n in 0..order {
            terms.push((n, &pow / crate::scalar::factorial(n as u64)));
            pow *= c;
        }
        LaurentSeries::new(order, terms)
    }

    /// (1 + x)^m via the binomial series, modulo x^order.
    pub fn binomial_series(m: i64, order: i64) -> LaurentSeries {
        LaurentSeries::new(order, (0..order).map(|k| (k, binomial(m, k as u64))))
    }
}

#[cfg(test)]
mod tests {
    use super::std_series::*;
    use super::*;
    use crate::scalar::qr;

    fn poly(cs: &[i64]) -> LaurentSeries {
        LaurentSeries::exact(cs.iter().enumerate().map(|(i, c)| (i as i64, q(*c))))
    }

    #[test]
    fn difference_of_squares() {
        let a = poly(&[1, 1]);
        let b = poly(&[1, -1]);
        assert_eq!(a.times(&b), poly(&[1, 0, -1]));
    }

    #[test]
    fn laurent_unit() {
        let x = LaurentSeries::x();
        let xi = x.inv(EXACT).unwrap();
        assert_eq!(x.times(&xi), LaurentSeries::one());
    }

    #[test]
    fn log_derivative_times_one_plus_x() {
        for n in [4, 9, 15] {
            let d = log1p(n + 1).derivative();
            let r = d.times(&poly(&[1, 1]));
            assert_eq!(r.order(), n);
            assert_eq!(r, LaurentSeries::one().truncate(n));
        }
    }

    #[test]
    fn precision_of_products() {
        let a = LaurentSeries::new(5, [(-2, q(1)), (0, q(3))]);
        let b = LaurentSeries::new(4, [(1, q(2))]);
        let p = a.times(&b);
        assert_eq!(p.low(), -1);
        assert_eq!(p.order(), 2);
    }

    #[test]
    fn compose_log_with_expm1() {
        let h = log1p(8);
        let g = expm1(8);
        let r = h.compose(&g, EXACT).unwrap();
        assert_eq!(r.order(), 8);
        assert_eq!(r, LaurentSeries::x().truncate(8));
    }

    #[test]
    fn compose_inverse_power() {
        // g = x/(1-x); 1/g = 1/x - 1.
        let g = LaurentSeries::new(10, (1..10).map(|n| (n, q(1))));
        let h = LaurentSeries::monomial(q(1), -1);
        let r = h.compose(&g, EXACT).unwrap();
        let expected = LaurentSeries::exact([(-1, q(1)), (0, q(-1))]).truncate(r.order());
        assert_eq!(r, expected);
        assert_eq!(r.times(&g).truncate(r.order()), LaurentSeries::one().truncate(r.order()));
    }

    #[test]
    fn exp_log_round_trip() {
        for n in 2..=20 {
            let l = log1p(n);
            let e = l.exp(EXACT).unwrap();
            assert_eq!(e, poly(&[1, 1]).truncate(n));
        }
        assert_eq!(LaurentSeries::zero().exp(10).unwrap(), LaurentSeries::one());
        let l = poly(&[1, 1]).log(5).unwrap();
        assert_eq!(l, log1p(5));
    }

    #[test]
    fn calculus() {
        assert_eq!(poly(&[0, 0, 1]).derivative(), poly(&[0, 2]));
        let xi = LaurentSeries::monomial(q(1), -1);
        assert_eq!(xi.derivative(), LaurentSeries::monomial(q(-1), -2));
        let geo = LaurentSeries::new(8, (0..8).map(|n| (n, q(if n % 2 == 0 { 1 } else { -1 }))));
        assert_eq!(geo.integral().unwrap(), log1p(9));
        assert_eq!(xi.integral(), Err(Error::ResidueObstruction));
    }

    #[test]
    fn domain_errors() {
        assert!(poly(&[1, 1]).exp(5).is_err());
        assert!(poly(&[2, 1]).log(5).is_err());
        assert_eq!(
            LaurentSeries::zero_mod(4).inv(10),
            Err(Error::DivisionByIndeterminate)
        );
    }

    #[test]
    fn literal_printing() {
        assert_eq!(log1p(4).to_string(), "x - 1/2*x^2 + 1/3*x^3 + O(x^4)");
        assert_eq!(LaurentSeries::zero().to_string(), "0");
        assert_eq!(LaurentSeries::monomial(qr(-2, 3), -1).to_string(), "-2/3*x^-1");
    }
}
