use proptest::prelude::*;

use fgva_core::associate::{assoc_from_p, compare_associates, TransformKind};
use fgva_core::bivar::{iota_expand, nested_get};
use fgva_core::formal_group::{fg_check, tanh_law};
use fgva_core::harness::{f_assoc_alt, jacobi_f, weak_assoc, weak_assoc_at, weak_comm, Window3};
use fgva_core::scalar::{q, qr};
use fgva_core::suite::derived_x_window;
use fgva_core::vertex::{borcherds_build, change_variables};
use fgva_core::zhu::{
    check_module, module_transform, poly_t_grading, xw_map, GradedVertexStructure, ModuleParams, ModuleStructure, ModuleTransform,
    ModuleVariant,
};
use fgva_core::{
    DerivationAlgebra, FormalGroupLaw, GSeries, LaurentSeries, Nested, PowerSeries, Vector, VertexStructure, Verdict, Window2, Q,
};

fn small_q() -> impl Strategy<Value = Q> {
    (-3i64..=3, 1i64..=3).prop_map(|(n, d)| qr(n, d))
}

fn gseries(order: i64) -> impl Strategy<Value = GSeries> {
    prop::collection::vec(small_q(), (order - 2) as usize).prop_map(move |cs| {
        let terms = std::iter::once((1, q(1))).chain(cs.into_iter().enumerate().map(|(i, c)| (i as i64 + 2, c)));
        GSeries::new(LaurentSeries::new(order, terms.collect::<Vec<_>>())).unwrap()
    })
}

fn truncated(lo: i64, order: i64) -> impl Strategy<Value = LaurentSeries> {
    (lo..=0, prop::collection::vec(small_q(), (order - lo) as usize))
        .prop_map(move |(low, cs)| LaurentSeries::new(order, (low..order).zip(cs).collect::<Vec<_>>()))
}

fn laurent_poly(lo: i64, hi: i64) -> impl Strategy<Value = LaurentSeries> {
    prop::collection::vec((lo..=hi, small_q()), 1..=3).prop_map(LaurentSeries::exact)
}

fn poly2() -> impl Strategy<Value = PowerSeries> {
    prop::collection::vec(((0u32..3, 0u32..3), small_q()), 1..=4).prop_map(|ts| {
        PowerSeries::exact(2, ts.into_iter().map(|((a, b), c)| (vec![a, b], c)))
    })
}

fn agree_on(a: &Nested<Q>, b: &Nested<Q>, w: Window2) -> bool {
    let t = compare_associates(a, b, w);
    t.compared > 0 && t.verdict() != Verdict::Fail
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn ring_axioms(a in truncated(-2, 6), b in truncated(-2, 6), c in truncated(-2, 6)) {
        prop_assert_eq!(a.plus(&b).plus(&c), a.plus(&b.plus(&c)));
        prop_assert!(a.times(&b.plus(&c)).agrees_with(&a.times(&b).plus(&a.times(&c))));
        prop_assert!(a.times(&b).times(&c).agrees_with(&a.times(&b.times(&c))));
    }

    #[test]
    fn composition_group(g in gseries(12), h in gseries(12), k in gseries(12)) {
        let lhs = g.compose(&h).compose(&k);
        let rhs = g.compose(&h.compose(&k));
        prop_assert_eq!(lhs.series().to_literal("x"), rhs.series().to_literal("x"));
        prop_assert_eq!(&g.compose(&GSeries::identity()), &g);
        prop_assert_eq!(&GSeries::identity().compose(&g), &g);
        let inv = g.reversion(12).unwrap();
        prop_assert!(g.compose(&inv).series().agrees_with(&LaurentSeries::x()));
        prop_assert!(inv.compose(&g).series().agrees_with(&LaurentSeries::x()));
    }

    #[test]
    fn composition_is_multiplicative(h1 in truncated(-2, 6), h2 in truncated(-2, 6), g in gseries(8)) {
        let lhs = h1.times(&h2).compose(g.series(), 20).unwrap();
        let rhs = h1.compose(g.series(), 20).unwrap().times(&h2.compose(g.series(), 20).unwrap());
        prop_assert!(lhs.agrees_with(&rhs));
        prop_assert!(lhs.order() > lhs.low().min(0));
    }

    #[test]
    fn iota_is_multiplicative(a in poly2(), b in poly2(), i in 0usize..3, j in 0usize..3) {
        let x = PowerSeries::var(2, 0);
        let y = PowerSeries::var(2, 1);
        let dens = [x.minus(&y), x.plus(&y).plus(&x.times(&y)), x.minus(&y.scaled(&q(2)))];
        let (d1, d2) = (&dens[i], &dens[j]);
        let whole = iota_expand(&a.times(&b), &d1.times(d2), 0, 6, 6).unwrap();
        let prod = iota_expand(&a, d1, 0, 8, 6).unwrap().times(&iota_expand(&b, d2, 0, 8, 6).unwrap());
        prop_assert!(agree_on(&whole, &prod, Window2::new((-6, 5), (0, 5))));
    }

    #[test]
    fn iota_directions_agree_on_power_series(a in poly2()) {
        let one = PowerSeries::constant(2, q(1));
        let n0 = iota_expand(&a, &one, 0, 6, 6).unwrap();
        let n1 = iota_expand(&a, &one, 1, 6, 6).unwrap();
        for e1 in 0..5 {
            for e2 in 0..5 {
                prop_assert_eq!(nested_get(&n0, e2, e1), nested_get(&n1, e1, e2));
            }
        }
    }

    #[test]
    fn log_bijection(f in gseries(10)) {
        let law = FormalGroupLaw::from_log(&f, 10).unwrap();
        prop_assert!(fg_check(law.series(), 10).is_pass());
        let back = law.log(10).unwrap();
        prop_assert_eq!(back.series(), f.series());
        let again = FormalGroupLaw::from_log(&back, 10).unwrap();
        prop_assert_eq!(again.series(), law.series());
    }

    #[test]
    fn conjugation_is_an_action(f in gseries(6), g in gseries(6), h in gseries(6)) {
        let law = FormalGroupLaw::from_log(&f, 6).unwrap();
        let twice = law.conjugate(&g, 6).unwrap().conjugate(&h, 6).unwrap();
        let once = law.conjugate(&g.compose(&h).truncate(6), 6).unwrap();
        prop_assert_eq!(twice.series().to_literal(&["x", "y"]), once.series().to_literal(&["x", "y"]));
    }

    #[test]
    fn classification_round_trip(p in laurent_poly(-2, 4), which in 0usize..3) {
        let group = match which {
            0 => FormalGroupLaw::additive(),
            1 => FormalGroupLaw::multiplicative(),
            _ => FormalGroupLaw::new(tanh_law(8), 8).unwrap(),
        };
        let a = assoc_from_p(&group, &p, 6, derived_x_window(&p, 6)).unwrap();
        prop_assert_eq!(a.extract_p().unwrap(), p);
    }

    #[test]
    fn retime_is_invertible(p in laurent_poly(-1, 3), g in gseries(5)) {
        let a = assoc_from_p(&FormalGroupLaw::additive(), &p, 5, derived_x_window(&p, 5)).unwrap();
        let ginv = g.reversion(5).unwrap();
        let back = a.transform(&g, TransformKind::Retime, None).unwrap().transform(&ginv, TransformKind::Retime, None).unwrap();
        let t = compare_associates(back.phi(), a.phi(), Window2::new(a.x_window(), (0, 4)));
        prop_assert_eq!(t.verdict(), Verdict::Pass);
    }
}

fn entries_agree(a: &VertexStructure, b: &VertexStructure) -> bool {
    for u in 0..a.dim() {
        for v in 0..a.dim() {
            if let (Some(x), Some(y)) = (a.entry_opt(u, v), b.entry_opt(u, v)) {
                let lo = x.low().min(y.low()).max(-20);
                let hi = x.order().min(y.order()).min(20);
                if (lo..hi).any(|e| x.get(e) != y.get(e)) {
                    return false;
                }
            }
        }
    }
    true
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 8, ..ProptestConfig::default() })]

    #[test]
    fn change_variables_composes(g in gseries(5), h in gseries(5)) {
        let v = borcherds_build(&DerivationAlgebra::poly_t(3), &FormalGroupLaw::additive(), 5).unwrap();
        let twice = change_variables(&change_variables(&v, &g).unwrap(), &h).unwrap();
        let once = change_variables(&v, &g.compose(&h).truncate(5)).unwrap();
        prop_assert!(entries_agree(&twice, &once));
    }
}

fn structures() -> Vec<VertexStructure> {
    let mut out = Vec::new();
    for alg in [DerivationAlgebra::poly_t(4), DerivationAlgebra::upper_triangular(4)] {
        for group in [FormalGroupLaw::additive(), FormalGroupLaw::multiplicative()] {
            out.push(borcherds_build(&alg, &group, 6).unwrap());
        }
    }
    out
}

#[test]
fn associativity_formulations_agree() {
    let win = Window2::square(-3, 3);
    for v in structures() {
        let one = Vector::basis(v.vacuum);
        for u in 0..v.dim().min(4) {
            for w in 0..v.dim().min(4) {
                let a = weak_assoc(&v, &Vector::basis(u), &Vector::basis(w), &one, 8, win);
                let b = f_assoc_alt(&v, &Vector::basis(u), &Vector::basis(w), &one, 8, win);
                if a.verdict != Verdict::InsufficientPrecision && b.verdict != Verdict::InsufficientPrecision {
                    assert_eq!(a.is_pass(), b.is_pass(), "{a} / {b}");
                }
            }
        }
    }
}

#[test]
fn multipliers_are_monotone() {
    let win = Window2::square(-3, 3);
    for v in structures() {
        let one = Vector::basis(v.vacuum);
        for u in 1..v.dim().min(4) {
            let x = Vector::basis(u);
            let mut passed = false;
            for l in 0..=8 {
                let Ok(t) = weak_assoc_at(&v, &x, &x, &one, l, &win) else { break };
                let ok = t.verdict() == Verdict::Pass;
                assert!(!passed || ok, "l = {l} fails after a smaller l passed");
                passed |= ok;
            }
        }
    }
}

#[test]
fn reports_are_deterministic() {
    let v = borcherds_build(&DerivationAlgebra::upper_triangular(4), &FormalGroupLaw::additive(), 6).unwrap();
    let (a, b) = (Vector::basis(1), Vector::basis(2));
    let one = Vector::basis(v.vacuum);
    let run = || weak_comm(&v, &a, &b, std::slice::from_ref(&one), 8, Window2::square(-3, 3)).to_json_line();
    assert_eq!(run(), run());
}

#[test]
fn jacobi_implies_weak_axioms() {
    let v = borcherds_build(&DerivationAlgebra::poly_t(4), &FormalGroupLaw::additive(), 6).unwrap();
    let t = Vector::basis(1);
    let one = Vector::basis(v.vacuum);
    for w in [&t, &one] {
        if jacobi_f(&v, &t, &t, w, Window3::cube(-4, 4)).is_pass() {
            assert!(weak_comm(&v, &t, &t, std::slice::from_ref(w), 8, Window2::square(-4, 4)).is_pass());
            assert!(weak_assoc(&v, &t, &t, w, 8, Window2::square(-4, 4)).is_pass());
        }
    }
}

#[test]
fn retagged_module_checks_agree() {
    let v = borcherds_build(&DerivationAlgebra::poly_t(6), &FormalGroupLaw::additive(), 8).unwrap();
    let deg = poly_t_grading(&v.space, -1).unwrap();
    let g = GradedVertexStructure::new(v, deg).unwrap();
    let xw = xw_map(&ModuleStructure::adjoint(g.structure()), &g, 6).unwrap();
    let win = Window2::new((0, 4), (-5, 5));
    for h in [GSeries::log1p(6), GSeries::expm1(6)] {
        let moved = module_transform(&xw, &h, ModuleTransform::Retime).unwrap();
        for (a, b, w) in [(1, 1, 0), (1, 2, 1), (2, 1, 0)] {
            let (a, b, w) = (Vector::basis(a), Vector::basis(b), Vector::basis(w));
            let before = check_module(&xw, ModuleVariant::Phi, &ModuleParams::default(), &a, &b, &w, win);
            let after = check_module(&moved, ModuleVariant::Phi, &ModuleParams::default(), &a, &b, &w, win);
            assert_eq!(before.is_pass(), after.is_pass(), "{before} / {after}");
        }
    }
}
