//! Finite-basis (nonlocal) vertex F-algebras.
//!
//! `Y(u, x)v` is stored for basis pairs as a vector-valued Laurent series.
//! Entries whose true value leaves a degree cap are absent and any
//! computation that needs them fails with `OverflowBeyondCap`.

use num_traits::One;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::bivar::Nested;
use crate::error::{Error, Result};
use crate::formal_group::FormalGroupLaw;
use crate::gseries::GSeries;
use crate::scalar::{factorial, fmt_q, q, Q};
use crate::series::{push_term, Coeff, LaurentSeries, Series, Vector, EXACT};

pub type VSeries = Series<Vector>;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StateSpace {
    pub labels: Vec<String>,
    pub deg: Option<Vec<i64>>,
}

impl StateSpace {
    pub fn new(labels: Vec<String>) -> Self {
        StateSpace { labels, deg: None }
    }

    pub fn with_grading(mut self, deg: Vec<i64>) -> Self {
        assert_eq!(deg.len(), self.labels.len(), "grading must be total");
        self.deg = Some(deg);
        self
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn label(&self, i: usize) -> String {
        self.labels.get(i).cloned().unwrap_or_else(|| format!("#{i}"))
    }

    pub fn vector_json(&self, v: &Vector) -> Value {
        let m: Map<String, Value> = v.iter().map(|(i, c)| (self.label(i), json!(fmt_q(c)))).collect();
        Value::Object(m)
    }

    /// `c1*label1 + c2*label2`, `0` for the zero vector.
    pub fn vector_literal(&self, v: &Vector) -> String {
        let mut out = String::new();
        for (i, c) in v.iter() {
            let label = self.label(i);
            if label == "1" {
                push_term(&mut out, c, &[]);
            } else {
                push_term(&mut out, c, &[(&label, 1)]);
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

/// Finite-basis associative unital algebra with a derivation.
#[derive(Clone, Debug)]
pub struct DerivationAlgebra {
    pub name: String,
    pub space: StateSpace,
    pub unit: usize,
    /// `mult[a][b]`, `None` when the product leaves the degree cap.
    mult: Vec<Vec<Option<Vector>>>,
    pub d: Vec<Vector>,
    pub commutative: bool,
}

impl DerivationAlgebra {
    /// `Q[t]` up to degree `cap` with `D = d/dt`.
    pub fn poly_t(cap: usize) -> Self {
        let labels = (0..=cap).map(|n| if n == 0 { "1".to_string() } else { format!("t^{n}") }).collect();
        let mult = (0..=cap)
            .map(|a| (0..=cap).map(|b| (a + b <= cap).then(|| Vector::basis(a + b))).collect())
            .collect();
        let d = (0..=cap)
            .map(|n| if n == 0 { Vector::new() } else { Vector::from_pairs([(n - 1, q(n as i64))]) })
            .collect();
        DerivationAlgebra { name: "poly_t".into(), space: StateSpace::new(labels), unit: 0, mult, d, commutative: true }
    }

    /// Upper-triangular 2x2 matrices over `Q[t]` up to degree `cap`, basis
    /// `I t^k, E12 t^k, E22 t^k`, with entrywise `d/dt`.
    pub fn upper_triangular(cap: usize) -> Self {
        let n = cap + 1;
        let names = ["I", "E12", "E22"];
        let mut labels = Vec::new();
        for m in names {
            for k in 0..n {
                labels.push(if k == 0 { m.to_string() } else { format!("{m}*t^{k}") });
            }
        }
        // block products: I is the unit, E12 E22 = E12, E22 E22 = E22, others vanish.
        let block = |a: usize, b: usize| -> Option<usize> {
            match (a, b) {
                (0, x) | (x, 0) => Some(x),
                (1, 2) => Some(1),
                (2, 2) => Some(2),
                _ => None,
            }
        };
        let mut mult = vec![vec![None; 3 * n]; 3 * n];
        for a in 0..3 * n {
            for b in 0..3 * n {
                let (ba, ka) = (a / n, a % n);
                let (bb, kb) = (b / n, b % n);
                mult[a][b] = match block(ba, bb) {
                    None => Some(Vector::new()),
                    Some(c) if ka + kb <= cap => Some(Vector::basis(c * n + ka + kb)),
                    Some(_) => None,
                };
            }
        }
        let d = (0..3 * n)
            .map(|a| {
                let (b, k) = (a / n, a % n);
                if k == 0 { Vector::new() } else { Vector::from_pairs([(b * n + k - 1, q(k as i64))]) }
            })
            .collect();
        DerivationAlgebra {
            name: "upper_triangular".into(),
            space: StateSpace::new(labels),
            unit: 0,
            mult,
            d,
            commutative: false,
        }
    }

    pub fn builtin(name: &str, cap: usize) -> Result<Self> {
        match name {
            "poly_t" => Ok(Self::poly_t(cap)),
            "upper_triangular" => Ok(Self::upper_triangular(cap)),
            o => Err(Error::Parse(format!("unknown example {o}"))),
        }
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn mul(&self, a: &Vector, b: &Vector) -> Result<Vector> {
        let mut out = Vector::new();
        for (i, ca) in a.iter() {
            for (j, cb) in b.iter() {
                match &self.mult[i][j] {
                    Some(p) => out = out.plus(&p.scaled(&(ca * cb))),
                    None => {
                        return Err(Error::OverflowBeyondCap(format!(
                            "{} * {}",
                            self.space.label(i),
                            self.space.label(j)
                        )))
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn derive(&self, a: &Vector) -> Vector {
        a.iter().fold(Vector::new(), |acc, (i, c)| acc.plus(&self.d[i].scaled(c)))
    }

    /// Associativity, unit laws and the Leibniz rule on every basis triple
    /// whose products stay inside the cap.
    pub fn validate(&self) -> Result<()> {
        let n = self.dim();
        let e = Vector::basis;
        for a in 0..n {
            if self.mul(&e(self.unit), &e(a))? != e(a) || self.mul(&e(a), &e(self.unit))? != e(a) {
                return Err(Error::Validation(format!("unit law fails on {}", self.space.label(a))));
            }
            for b in 0..n {
                let Ok(ab) = self.mul(&e(a), &e(b)) else { continue };
                let lhs = self.derive(&ab);
                let rhs = self.mul(&self.derive(&e(a)), &e(b))?.plus(&self.mul(&e(a), &self.derive(&e(b)))?);
                if lhs != rhs {
                    return Err(Error::Validation(format!("Leibniz rule fails on ({a}, {b})")));
                }
                for c in 0..n {
                    if let (Ok(l), Ok(r)) = (self.mul(&ab, &e(c)), self.mul(&e(b), &e(c)).and_then(|bc| self.mul(&e(a), &bc))) {
                        if l != r {
                            return Err(Error::Validation(format!("associativity fails on ({a}, {b}, {c})")));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Provenance {
    Borcherds { algebra: String, group: String },
    Transformed { parent: String, g: String },
    FieldGenerated { depth: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct VertexStructure {
    pub space: StateSpace,
    pub vacuum: usize,
    table: Vec<Vec<Option<VSeries>>>,
    pub group: FormalGroupLaw,
    pub provenance: Provenance,
}

impl VertexStructure {
    /// Checks vacuum and creation on every stored entry.
    pub fn new(
        space: StateSpace,
        vacuum: usize,
        table: Vec<Vec<Option<VSeries>>>,
        group: FormalGroupLaw,
        provenance: Provenance,
    ) -> Result<Self> {
        let v = VertexStructure { space, vacuum, table, group, provenance };
        v.check_vacuum()?;
        Ok(v)
    }

    fn check_vacuum(&self) -> Result<()> {
        for b in 0..self.dim() {
            if let Some(s) = &self.table[self.vacuum][b] {
                let expected = Series::new(s.order(), [(0, Vector::basis(b))]);
                if *s != expected {
                    return Err(Error::Validation(format!("Y(1,x){} is not {}", self.space.label(b), self.space.label(b))));
                }
            }
            if let Some(s) = &self.table[b][self.vacuum] {
                if s.low() < 0 || (s.known(0) && s.get(0) != Vector::basis(b)) {
                    return Err(Error::Validation(format!("creation fails for {}", self.space.label(b))));
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn label(&self, i: usize) -> String {
        self.space.label(i)
    }

    pub fn entry(&self, u: usize, v: usize) -> Result<&VSeries> {
        self.table[u][v]
            .as_ref()
            .ok_or_else(|| Error::OverflowBeyondCap(format!("Y({}, x){}", self.label(u), self.label(v))))
    }

    pub fn entry_opt(&self, u: usize, v: usize) -> Option<&VSeries> {
        self.table[u][v].as_ref()
    }

    /// `Y(u, x)w`, bilinear in the two vectors.
    pub fn y(&self, u: &Vector, w: &Vector) -> Result<VSeries> {
        let mut acc = VSeries::zero();
        for (a, ca) in u.iter() {
            for (b, cb) in w.iter() {
                acc = acc.plus(&self.entry(a, b)?.scaled(&(ca * cb)));
            }
        }
        Ok(acc)
    }

    /// Least exponent of `Y(u, x)b` over stored basis entries `b`.
    pub fn floor(&self, u: &Vector) -> i64 {
        let mut m = EXACT;
        for (a, _) in u.iter() {
            for b in 0..self.dim() {
                if let Some(s) = &self.table[a][b] {
                    if s.num_terms() > 0 || !s.is_exact() {
                        m = m.min(s.low());
                    }
                }
            }
        }
        m
    }

    /// Applies `op` to every stored entry.
    pub fn map_entries(&self, op: impl Fn(&VSeries) -> Result<VSeries>) -> Result<Vec<Vec<Option<VSeries>>>> {
        self.table
            .iter()
            .map(|row| row.iter().map(|e| e.as_ref().map(&op).transpose()).collect())
            .collect()
    }

    pub fn with_table(&self, table: Vec<Vec<Option<VSeries>>>, group: FormalGroupLaw, provenance: Provenance) -> Result<Self> {
        VertexStructure::new(self.space.clone(), self.vacuum, table, group, provenance)
    }

    pub fn with_space(mut self, space: StateSpace) -> Self {
        assert_eq!(space.dim(), self.dim());
        self.space = space;
        self
    }

    /// Least order over stored entries.
    pub fn order(&self) -> i64 {
        self.table.iter().flatten().flatten().map(|s| s.order()).min().unwrap_or(EXACT)
    }

    /// JSON Y-table, one object per stored basis pair.
    pub fn y_table_json(&self) -> Value {
        let mut out = Vec::new();
        for u in 0..self.dim() {
            for v in 0..self.dim() {
                if let Some(s) = &self.table[u][v] {
                    out.push(series_json(&self.space, &self.label(u), &self.label(v), s));
                }
            }
        }
        Value::Array(out)
    }
}

/// Vertex operators of an algebra acting on some carrier: the algebra
/// itself or a module over it.
pub trait Operators {
    fn algebra(&self) -> &VertexStructure;
    fn carrier(&self) -> &StateSpace;
    /// `Y(u, x)w` for `u` in the algebra and `w` in the carrier.
    fn op(&self, u: &Vector, w: &Vector) -> Result<VSeries>;
    /// Least exponent of `Y(u, x)w` over all carrier basis vectors `w`.
    fn op_floor(&self, u: &Vector) -> i64;

    /// `Y(u, x1)Y(v, x2)w` with outer `x2`, inner `x1`.
    fn product(&self, u: &Vector, v: &Vector, w: &Vector) -> Result<Nested<Vector>> {
        let s = self.op(v, w)?;
        let mut rows = Vec::new();
        for (n, c) in s.terms() {
            rows.push((n, self.op(u, c)?));
        }
        Ok(Series::new(s.order(), rows))
    }

    /// `Y(Y(u, x0)v, x2)w` with outer `x0`, inner `x2`.
    fn iterate(&self, u: &Vector, v: &Vector, w: &Vector) -> Result<Nested<Vector>> {
        let s = self.algebra().y(u, v)?;
        let mut rows = Vec::new();
        for (m, d) in s.terms() {
            rows.push((m, self.op(d, w)?));
        }
        Ok(Series::new(s.order(), rows))
    }
}

impl Operators for VertexStructure {
    fn algebra(&self) -> &VertexStructure {
        self
    }

    fn carrier(&self) -> &StateSpace {
        &self.space
    }

    fn op(&self, u: &Vector, w: &Vector) -> Result<VSeries> {
        self.y(u, w)
    }

    fn op_floor(&self, u: &Vector) -> i64 {
        self.floor(u)
    }
}

pub fn series_json(space: &StateSpace, u: &str, v: &str, s: &VSeries) -> Value {
    json!({
        "u": u,
        "v": v,
        "order": if s.is_exact() { Value::Null } else { json!(s.order()) },
        "series": s.terms().map(|(e, c)| json!({"exp": e, "vector": space.vector_json(c)})).collect::<Vec<_>>(),
    })
}

/// `Y_F(a, x)b = (e^{f(x)D}a)b` with `f` the logarithm of `F`.
pub fn borcherds_build(alg: &DerivationAlgebra, group: &FormalGroupLaw, order: i64) -> Result<VertexStructure> {
    alg.validate()?;
    let f = group.log(order.min(group.order()))?;
    let n = alg.dim();
    let mut powers: Vec<LaurentSeries> = vec![LaurentSeries::one()];
    let mut table = vec![vec![None; n]; n];
    for a in 0..n {
        let mut chain = vec![Vector::basis(a)];
        while !chain.last().unwrap().is_empty() {
            if chain.len() > n + 1 {
                return Err(Error::Validation("derivation is not nilpotent on the basis".into()));
            }
            let next = alg.derive(chain.last().unwrap());
            chain.push(next);
        }
        chain.pop();
        while powers.len() < chain.len() {
            let k = powers.len() as u64;
            let p = powers.last().unwrap().times(f.series()).scaled(&(Q::one() / q(k as i64)));
            powers.push(if p.is_exact() { p } else { p.truncate(order) });
        }
        for b in 0..n {
            let mut acc = if f.series().is_exact() { VSeries::zero() } else { VSeries::zero_mod(order) };
            let mut ok = true;
            for (k, dka) in chain.iter().enumerate() {
                match alg.mul(dka, &Vector::basis(b)) {
                    Ok(p) => acc = acc.plus(&powers[k].map(|c| p.scaled(c))),
                    Err(_) => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                table[a][b] = Some(acc);
            }
        }
    }
    VertexStructure::new(
        alg.space.clone(),
        alg.unit,
        table,
        group.clone(),
        Provenance::Borcherds {
            algebra: alg.name.clone(),
            group: group.name().map(String::from).unwrap_or_else(|| group.to_literal()),
        },
    )
}

/// `Y_g(v, x) = Y(v, g(x))`, declared over `F_g`.
pub fn change_variables(v: &VertexStructure, g: &GSeries) -> Result<VertexStructure> {
    if g.is_identity() && g.series().is_exact() {
        return Ok(v.clone());
    }
    let order = g.order().min(v.group.order());
    let table = v.map_entries(|s| s.compose(g.series(), order))?;
    let group = v.group.conjugate(g, order)?;
    v.with_table(
        table,
        group,
        Provenance::Transformed { parent: format!("{:?}", v.provenance), g: g.to_string() },
    )
}

/// Matrix of `D v = v_{-2} 1` as columns.
pub fn d_operator(v: &VertexStructure) -> Result<Vec<Vector>> {
    (0..v.dim())
        .map(|b| {
            let s = v.entry(b, v.vacuum)?;
            if !s.known(1) {
                return Err(Error::PrecisionExhausted(format!("Y({}, x)1 known below x^1 only", v.label(b))));
            }
            Ok(s.get(1))
        })
        .collect()
}

/// Applies a matrix given by columns.
pub fn apply_matrix(m: &[Vector], v: &Vector) -> Vector {
    v.iter().fold(Vector::new(), |acc, (i, c)| acc.plus(&m[i].scaled(c)))
}

/// `e^{z A}` applied to `v`, as a series in `z` modulo `z^order`.
pub fn exp_matrix(m: &[Vector], v: &Vector, order: i64) -> VSeries {
    let mut terms = Vec::new();
    let mut cur = v.clone();
    for k in 0..order {
        if cur.is_empty() {
            return Series::exact(terms);
        }
        terms.push((k, cur.scaled(&(Q::one() / factorial(k as u64)))));
        cur = apply_matrix(m, &cur);
    }
    if cur.is_empty() { Series::exact(terms) } else { Series::new(order, terms) }
}

/// Scalar series acting on a vector: `s(x)·v`.
pub fn scalar_times(s: &LaurentSeries, v: &Vector) -> VSeries {
    s.map(|c| v.scaled(c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::qr;

    fn poly() -> VertexStructure {
        borcherds_build(&DerivationAlgebra::poly_t(8), &FormalGroupLaw::additive(), 8).unwrap()
    }

    #[test]
    fn poly_t_products() {
        let v = poly();
        let t = Vector::basis(1);
        let s = v.y(&t, &t).unwrap();
        assert!(s.is_exact());
        assert_eq!(s.get(0), Vector::basis(2));
        assert_eq!(s.get(1), Vector::basis(1));
        assert_eq!(s.num_terms(), 2);
        for b in 0..9 {
            assert_eq!(v.entry(0, b).unwrap(), &Series::exact([(0, Vector::basis(b))]));
        }
        assert!(v.entry(5, 5).is_err());
    }

    #[test]
    fn multiplicative_products() {
        let v = borcherds_build(&DerivationAlgebra::poly_t(8), &FormalGroupLaw::multiplicative(), 6).unwrap();
        let s = v.entry(1, 1).unwrap();
        assert_eq!(s.order(), 6);
        assert_eq!(s.get(0), Vector::basis(2));
        for n in 1..6 {
            let c = qr(if n % 2 == 1 { 1 } else { -1 }, n);
            assert_eq!(s.get(n), Vector::from_pairs([(1, c)]));
        }
    }

    #[test]
    fn change_of_variables_matches_multiplicative() {
        let a = poly();
        let g = GSeries::log1p(6);
        let c = change_variables(&a, &g).unwrap();
        let m = borcherds_build(&DerivationAlgebra::poly_t(8), &FormalGroupLaw::multiplicative(), 6).unwrap();
        for u in 0..9 {
            for w in 0..9 {
                if let (Some(x), Some(y)) = (c.entry_opt(u, w), m.entry_opt(u, w)) {
                    assert_eq!(x, y, "({u},{w})");
                }
            }
        }
        assert_eq!(c.group.series(), &FormalGroupLaw::multiplicative().series().truncate(6));
        let back = change_variables(&c, &GSeries::expm1(6)).unwrap();
        for u in 0..9 {
            for w in 0..9 {
                if let Some(x) = back.entry_opt(u, w) {
                    assert_eq!(x, &a.entry(u, w).unwrap().truncate(x.order()));
                }
            }
        }
    }

    #[test]
    fn d_operator_is_derivative() {
        let v = poly();
        let d = d_operator(&v).unwrap();
        assert!(d[0].is_empty());
        for m in 1..9 {
            assert_eq!(d[m], Vector::from_pairs([(m - 1, q(m as i64))]));
        }
        // creation: Y(v, x)1 = e^{x D} v
        for b in 0..5 {
            let lhs = v.entry(b, 0).unwrap().truncate(6);
            let rhs = exp_matrix(&d, &Vector::basis(b), 6);
            assert_eq!(lhs, rhs.truncate(6));
        }
    }

    #[test]
    fn upper_triangular_is_noncommutative() {
        let a = DerivationAlgebra::upper_triangular(3);
        a.validate().unwrap();
        let e12 = Vector::basis(4);
        let e22 = Vector::basis(8);
        assert_eq!(a.mul(&e12, &e22).unwrap(), e12);
        assert!(a.mul(&e22, &e12).unwrap().is_empty());
        DerivationAlgebra::poly_t(8).validate().unwrap();
    }

    #[test]
    fn table_json() {
        let v = poly();
        let j = v.y_table_json();
        let first = j.as_array().unwrap().iter().find(|e| e["u"] == "t^1" && e["v"] == "t^1").unwrap();
        assert_eq!(first["series"][1]["exp"], 1);
        assert_eq!(first["series"][1]["vector"]["t^1"], "1");
    }
}
