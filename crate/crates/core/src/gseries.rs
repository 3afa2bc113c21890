//! The group of series `x + a_2 x^2 + ...` under composition.

use std::fmt;

use num_traits::One;

use crate::error::{exhausted, Error, Result};
use crate::series::{std_series, LaurentSeries, EXACT};

/// A series with zero constant term and unit linear coefficient.
#[derive(Clone, PartialEq, Debug)]
pub struct GSeries(LaurentSeries);

impl GSeries {
    pub fn new(s: LaurentSeries) -> Result<Self> {
        if s.terms().any(|(e, _)| e <= 0) {
            return Err(Error::DomainViolation("G-series must have positive valuation".into()));
        }
        if s.order() < 2 || !s.get(1).is_one() {
            return Err(Error::DomainViolation("G-series needs linear coefficient 1".into()));
        }
        Ok(GSeries(s))
    }

    pub fn identity() -> Self {
        GSeries(LaurentSeries::x())
    }

    /// log(1+x) modulo x^order.
    pub fn log1p(order: i64) -> Self {
        GSeries(std_series::log1p(order))
    }

    /// e^x - 1 modulo x^order.
    pub fn expm1(order: i64) -> Self {
        GSeries(std_series::expm1(order))
    }

    pub fn series(&self) -> &LaurentSeries {
        &self.0
    }

    pub fn into_series(self) -> LaurentSeries {
        self.0
    }

    pub fn order(&self) -> i64 {
        self.0.order()
    }

    pub fn is_identity(&self) -> bool {
        self.0.terms().all(|(e, _)| e == 1)
    }

    pub fn truncate(&self, order: i64) -> Self {
        GSeries(self.0.truncate(order))
    }

    /// `self(inner(x))`.
    pub fn compose(&self, inner: &GSeries) -> GSeries {
        GSeries(
            self.0
                .compose(&inner.0, EXACT)
                .expect("G-series composition has positive valuation"),
        )
    }

    /// Compositional inverse modulo `x^order`; both round trips are
    /// asserted before returning.
    pub fn reversion(&self, order: i64) -> Result<GSeries> {
        if order < 2 {
            return Err(exhausted("reversion needs order >= 2"));
        }
        if self.order() < order {
            return Err(exhausted(format!(
                "series known to x^{} cannot be reverted to x^{order}",
                self.order()
            )));
        }
        let g = self.0.truncate(order);
        let mut f: Vec<(i64, crate::scalar::Q)> = vec![(1, One::one())];
        for k in 2..order {
            let trial = LaurentSeries::new(k + 1, f.iter().cloned());
            let c = g.compose(&trial, k + 1)?.get(k);
            f.push((k, -c));
        }
        let inv = LaurentSeries::new(order, f);
        let x = LaurentSeries::x().truncate(order);
        let fwd = g.compose(&inv, order)?;
        let back = inv.compose(&g, order)?;
        if fwd != x || back != x {
            return Err(Error::Validation("reversion round trip failed".into()));
        }
        Ok(GSeries(inv))
    }
}

impl fmt::Display for GSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    #[test]
    fn identity_is_self_inverse() {
        let id = GSeries::identity();
        assert_eq!(id.reversion(8).unwrap().series(), &LaurentSeries::x().truncate(8));
    }

    #[test]
    fn log_reverts_to_expm1() {
        let r = GSeries::log1p(10).reversion(10).unwrap();
        assert_eq!(r, GSeries::expm1(10));
    }

    #[test]
    fn geometric_reverts_to_alternating() {
        let g = GSeries::new(LaurentSeries::new(9, (1..9).map(|n| (n, q(1))))).unwrap();
        let r = g.reversion(9).unwrap();
        let expected = LaurentSeries::new(9, (1..9).map(|n| (n, q(if n % 2 == 1 { 1 } else { -1 }))));
        assert_eq!(r.series(), &expected);
    }

    #[test]
    fn rejects_non_group_elements() {
        assert!(GSeries::new(LaurentSeries::exact([(1, q(2))])).is_err());
        assert!(GSeries::new(LaurentSeries::exact([(0, q(1)), (1, q(1))])).is_err());
        assert!(GSeries::log1p(5).reversion(7).is_err());
    }
}
