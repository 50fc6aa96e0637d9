use descent_core::bar::{bar_cosimplicial, bar_vanishing_check, grading_split, GradedAlgebra};
use descent_core::cosimplicial::{normalized_span, validate};
use descent_core::linalg::CoefficientRing;

fn prod(a: &str, b: &str, value: &[(i64, &str)]) -> (String, String, Vec<(i64, String)>) {
    (a.into(), b.into(), value.iter().map(|&(c, n)| (c, n.to_string())).collect())
}

fn exterior(field: CoefficientRing) -> GradedAlgebra {
    let basis = vec![("1".into(), 0), ("a".into(), 1), ("b".into(), 1), ("ab".into(), 2)];
    let products = [prod("a", "b", &[(1, "ab")]), prod("b", "a", &[(-1, "ab")])];
    GradedAlgebra::new(field, basis, "1", &products, false).unwrap()
}

fn truncated_polynomial(field: CoefficientRing) -> GradedAlgebra {
    let basis = vec![("1".into(), 0), ("x".into(), 2), ("x2".into(), 4)];
    GradedAlgebra::new(field, basis, "1", &[prod("x", "x", &[(1, "x2")])], false).unwrap()
}

/// Algebras with the connectivity `k` they satisfy.
fn corpus() -> Vec<(String, GradedAlgebra, usize)> {
    let mut out = Vec::new();
    for (label, f) in [("Q", CoefficientRing::Rationals), ("F2", CoefficientRing::PrimeField(2)), ("F3", CoefficientRing::PrimeField(3))] {
        out.push((format!("ground/{label}"), GradedAlgebra::ground(f).unwrap(), 1));
        for k in 1..=2 {
            out.push((format!("dual{k}/{label}"), GradedAlgebra::dual_numbers(f, k).unwrap(), k));
        }
        out.push((format!("exterior/{label}"), exterior(f), 1));
        out.push((format!("poly/{label}"), truncated_polynomial(f), 2));
    }
    out
}

#[test]
fn bar_objects_are_cosimplicial_and_split_by_weight() {
    for (name, r, _) in corpus() {
        let n_max = if r.dim() > 3 { 2 } else { 3 };
        let c = bar_cosimplicial(&r, n_max).unwrap();
        assert!(validate(&c).is_valid(), "{name}");
        let m_max = r.top_degree() * (n_max + 1);
        let parts = grading_split(&r, &c, m_max).unwrap();
        for n in 0..=n_max {
            let total: usize = parts.iter().map(|p| normalized_span(p, n).rank()).sum();
            assert_eq!(total, normalized_span(&c, n).rank(), "{name}, level {n}");
            let sizes: usize = parts.iter().map(|p| p.level_sizes()[n]).sum();
            assert_eq!(sizes, c.level_sizes()[n], "{name}, level {n}");
        }
        assert!(parts.iter().all(|p| validate(p).is_valid()), "{name}");
    }
}

#[test]
fn normalized_dimension_formula_and_vanishing_line() {
    for (name, r, k) in corpus() {
        let n_max = if r.dim() > 3 { 2 } else { 3 };
        let report = bar_vanishing_check(&r, k, n_max, 6).unwrap();
        assert_eq!(report.kernel_dims, report.formula_dims, "{name}");
        assert!(report.failures.is_empty(), "{name}: {:?}", report.failures);
        assert!(report.passed(), "{name}");
    }
}

#[test]
fn exterior_algebra_is_not_one_connected() {
    let err = bar_vanishing_check(&exterior(CoefficientRing::Rationals), 2, 2, 4).unwrap_err();
    assert!(err.to_string().contains("not 1-connected"), "{err}");
}

#[test]
fn algebras_round_trip_through_json() {
    for (name, r, _) in corpus() {
        let v = r.to_json();
        let back = GradedAlgebra::from_json(&v.to_string()).unwrap();
        assert_eq!(back.to_json(), v, "{name}");
    }
}
