use super::*;
use crate::logder::is_linear_free;
use crate::poly::parse_poly;
use proptest::prelude::*;

const X3: [&str; 3] = ["x0", "x1", "x2"];
const XYZW: [&str; 4] = ["x", "y", "z", "w"];
const DISC: &str = "y^2*z^2 - 4*x*z^3 - 4*y^3*w + 18*x*y*z*w - 27*x^2*w^2";

fn p(s: &str, vars: &[&str]) -> QPoly {
    parse_poly(s, vars).unwrap()
}

fn c(n: usize, v: &[i64]) -> ChowClass {
    ChowClass::from_ints(n, v)
}

fn der(cs: &[&str], vars: &[&str]) -> Derivation {
    Derivation::new(cs.iter().map(|s| p(s, vars)).collect())
}

fn snc_basis() -> Vec<Derivation> {
    vec![der(&["x0", "0", "0"], &X3), der(&["0", "x1", "0"], &X3), der(&["0", "0", "x2"], &X3)]
}

fn policy() -> TrialPolicy {
    TrialPolicy::with_seed(2024)
}

#[test]
fn dual_and_tensor_examples() {
    assert_eq!(ChowClass::h_pow(3, 2).dual(), ChowClass::h_pow(3, 2));
    assert_eq!(ChowClass::h_pow(3, 1).tensor(2), c(3, &[0, 1, -2, 4]));
    assert_eq!(ChowClass::h_pow(4, 1).tensor(-3), c(4, &[0, 1, 3, 9, 27]));
    let a = c(3, &[1, -2, 5, 7]);
    assert_eq!(a.tensor(2).tensor(-2), a);
}

#[test]
fn chern_log_tangent_examples() {
    // k+1 independent hyperplanes in P^4 with k = 1.
    assert_eq!(chern_log_tangent(4, &[1, 1, 0, 0, 0]).unwrap(), one_plus_h_pow(4, 3));
    assert_eq!(chern_log_tangent(3, &[1, 1, 1, 1]).unwrap(), ChowClass::one(3));
    assert_eq!(chern_log_tangent(2, &[1, 0, 2]).unwrap(), c(2, &[1, 0, -1]));
    assert!(chern_log_tangent(2, &[0, 0, 2]).is_err());
    assert!(chern_log_tangent(2, &[1, 1]).is_err());
}

#[test]
fn csm_from_gradient_examples() {
    let conic = csm_complement_gradient(&p("x0^2 + x1^2 + x2^2", &X3), &policy()).unwrap();
    assert_eq!(conic.multidegrees.values, vec![1, 1, 1]);
    assert_eq!(conic.class, c(2, &[1, 1, 1]));
    assert_eq!(euler_char(&conic.class).unwrap(), 1.into());

    let snc = csm_complement_gradient(&p("x0*x1*x2", &X3), &policy()).unwrap();
    assert_eq!(snc.multidegrees.values, vec![1, 2, 1]);
    assert_eq!(snc.class, ChowClass::one(2));
    assert_eq!(euler_char(&snc.class).unwrap(), 0.into());

    let point = csm_complement_gradient(&p("x0", &["x0", "x1"]), &policy()).unwrap();
    assert_eq!(point.class, c(1, &[1, 1]));
    assert_eq!(euler_char(&point.class).unwrap(), 1.into());

    assert!(matches!(csm_complement_gradient(&p("x0^2*x1", &X3), &policy()), Err(Error::NotReduced)));
}

#[test]
fn csm_linear_free_examples() {
    let h = p(DISC, &XYZW);
    let basis = is_linear_free(&h).unwrap().unwrap();
    let g = p("3*x - 5*y + 7*z + w", &XYZW);
    let r = csm_complement_linear_free(&h, &g, &basis, &policy()).unwrap();
    assert_eq!(r.multidegrees.values, vec![1, 1, 1, 1]);
    assert_eq!(r.class, c(3, &[1, -1, 1, -1]));
    assert_eq!(euler_char(&r.class).unwrap(), (-1).into());

    let snc = p("x0*x1*x2", &X3);
    let line = p("2*x0 - 3*x1 + 5*x2", &X3);
    let r = csm_complement_linear_free(&snc, &line, &snc_basis(), &policy()).unwrap();
    assert_eq!(r.multidegrees.values, vec![1, 1, 1]);
    assert_eq!(euler_char(&r.class).unwrap(), 1.into());

    let inside = csm_complement_linear_free(&snc, &p("x0", &X3), &snc_basis(), &policy());
    assert!(matches!(inside, Err(Error::NonTransverse(_))));
}

#[test]
fn log_jacobian_examples() {
    let snc = p("x0*x1*x2", &X3);
    let j = log_jacobian_ideal(&snc, &p("2*x0 - 3*x1 + 5*x2", &X3), &snc_basis()).unwrap();
    assert!(j.hilbert().unwrap().is_empty());

    let h = p(DISC, &XYZW);
    let rows = vec![
        der(&["x", "y", "z", "w"], &XYZW),
        der(&["3*x", "y", "-z", "-3*w"], &XYZW),
        der(&["0", "3*x", "2*y", "z"], &XYZW),
        der(&["y", "2*z", "3*w", "0"], &XYZW),
    ];
    let j = log_jacobian_ideal(&h, &p("2*x + 3*y - z + w", &XYZW), &rows).unwrap();
    let m = Ideal::new(4, (0..4).map(|i| QPoly::x(4, i)));
    assert!(j.same_ideal(&m));

    // A1 = V(x0*x1) with basis x0∂0, x1∂1, ∂2 and a conic.
    let a1 = p("x0*x1", &X3);
    let basis = vec![der(&["x0", "0", "0"], &X3), der(&["0", "x1", "0"], &X3), der(&["0", "0", "1"], &X3)];
    let g = p("x0^2 + 2*x1^2 - 3*x2^2 + x0*x1 + x1*x2", &X3);
    let j = log_jacobian_ideal(&a1, &g, &basis).unwrap();
    assert_eq!(j.gens().len(), 3);
    let not_log = vec![der(&["1", "0", "0"], &X3)];
    assert!(matches!(log_jacobian_ideal(&a1, &g, &not_log), Err(Error::NotLogarithmic { index: 0 })));
}

#[test]
fn double_restriction_examples() {
    // Linear free discriminant with a generic hyperplane: J is irrelevant, s = 0.
    let (v_minus_d, union) = csm_double_restriction(3, &[1, 1, 1, 1], 1, &ChowClass::zero(3)).unwrap();
    assert_eq!(union, c(3, &[1, -1, 1, -1]));
    assert_eq!(v_minus_d, c(3, &[0, 1, -1, 1]));

    // Independent hyperplanes with V empty.
    let (_, union) = csm_double_restriction(3, &[1, 1, 0, 0], 0, &ChowClass::zero(3)).unwrap();
    assert_eq!(union, one_plus_h_pow(3, 2));

    // Coordinate triangle and a generic conic: s(J_V(log D)) = 0, χ = 4.
    let snc = p("x0*x1*x2", &X3);
    let g = p("x0^2 + 2*x1^2 - 3*x2^2 + x0*x1 + x1*x2 - 4*x0*x2", &X3);
    let j = log_jacobian_ideal(&snc, &g, &snc_basis()).unwrap();
    let s = segre_class_of_ideal(j.gens(), 3, false, &policy()).unwrap();
    assert!(s.class.is_zero());
    let (_, union) = csm_double_restriction(2, &[1, 1, 1], 2, &s.class).unwrap();
    // P^2 minus (triangle ∪ conic): 3 - (3 + 2 - 6).
    assert_eq!(euler_char(&union).unwrap(), 4.into());
    assert!(csm_double_restriction(2, &[1, 1, 1], 2, &ChowClass::zero(3)).is_err());
}

#[test]
fn seh_and_lct() {
    let v = seh_numerical_test(&p("x0*x1*x2", &X3), &policy()).unwrap();
    assert!(v.pass);
    assert_eq!(v.multidegrees, vec![1, 2, 1]);
    assert_eq!(lct_obstruction_from(&v), None);
    assert!(matches!(seh_numerical_test(&p("x0^2 + x1^2 + x2^2", &X3), &policy()), Err(Error::Precondition(_))));

    let perturbed = seh_verdict(3, &[1, 3, 4, 1]);
    assert!(!perturbed.pass);
    assert_eq!(lct_obstruction_from(&perturbed), Some(LctObstruction { index: 2, multidegree: 4, binomial: 3 }));
    assert_eq!(lct_obstruction(&p("x0*x1*x2", &X3), &policy()).unwrap(), None);
}

#[test]
fn discriminant_gradient_and_jacobian_segre() {
    let h = p(DISC, &XYZW);
    let grad = csm_complement_gradient(&h, &policy()).unwrap();
    assert_eq!(grad.multidegrees.values, vec![1, 3, 3, 1]);
    assert_eq!(grad.class, c(3, &[1, 0, 0, 0]));
    let seh = seh_numerical_test(&h, &policy()).unwrap();
    assert!(seh.pass);

    let js = jacobian_segre(&h, &policy()).unwrap();
    assert_eq!(js.gradient_multidegrees, vec![1, 3, 3, 1]);
    assert!(js.round_trip);
    // 6[P^1] - 28[P^0]
    assert_eq!(js.segre.class, c(3, &[0, 0, 6, -28]));
}

#[test]
fn generic_section_examples() {
    assert_eq!(generic_section_euler(&one_plus_h_pow(1, 2), 2).unwrap(), 0.into());
    assert_eq!(generic_section_euler(&one_plus_h_pow(2, 3), 2).unwrap(), 1.into());
    assert!(generic_section_euler(&one_plus_h_pow(2, 3), 0).is_err());
    assert_eq!(euler_char(&c(3, &[1, -1, 1, -1])).unwrap(), (-1).into());
    assert_eq!(euler_char(&one_plus_h_pow(4, 5)).unwrap(), 5.into());
    assert_eq!(euler_char(&c(2, &[1, 0, -1])).unwrap(), (-1).into());
}

#[test]
fn empty_divisor_normalization() {
    for n in 1..6 {
        let c_log = chern_log_tangent(n, &vec![1; 1].into_iter().chain(vec![0; n]).collect::<Vec<_>>()).unwrap();
        assert_eq!(c_log, one_plus_h_pow(n, n as u32));
        let full = csm_complement_union(&one_plus_h_pow(n, (n + 1) as u32), 0, &ChowClass::zero(n)).unwrap();
        assert_eq!(euler_char(&full).unwrap(), ((n + 1) as i64).into());
    }
}

fn class(n: usize) -> impl Strategy<Value = ChowClass> {
    proptest::collection::vec(-50i64..50, n + 1).prop_map(move |v| ChowClass::from_ints(n, &v))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn dual_is_an_involution(a in class(5)) {
        prop_assert_eq!(a.dual().dual(), a);
    }

    #[test]
    fn tensor_is_a_group_action(a in class(5), d in -6i64..6, e in -6i64..6) {
        prop_assert_eq!(a.tensor(d).tensor(-d), a.clone());
        prop_assert_eq!(a.tensor(d).tensor(e), a.tensor(d + e));
        prop_assert_eq!(a.tensor(0), a);
    }

    #[test]
    fn tensor_is_multiplicative(a in class(4), b in class(4), d in -4i64..4) {
        // Tensoring substitutes H -> H/(1+dH).
        prop_assert_eq!((&a * &b).tensor(d), &a.tensor(d) * &b.tensor(d));
    }

    #[test]
    fn segre_round_trip_on_random_multidegrees(d1 in 0u64..6, d2 in 0u64..12, r in 1u32..4) {
        let d = [1, d1, d2];
        if let Ok(s) = crate::degrees::segre_from_multidegrees(2, r, &d) {
            let back = crate::degrees::multidegrees_from_segre(2, r, &s).unwrap();
            prop_assert_eq!(back, vec![1, d1 as i64, d2 as i64]);
        }
    }

    #[test]
    fn generic_section_of_hyperplane_complements(n in 0usize..7, k in 0usize..7, d in 1i64..6) {
        prop_assume!(k <= n);
        let v = generic_section_euler(&one_plus_h_pow(n, (n - k) as u32), d).unwrap();
        // Σ_j binom(n-k, j) (-d)^(n-j).
        let m = (n - k) as u32;
        let expected: i64 = (0..=m).map(|j| binomial(m as u64, j as u64) as i64 * (-d).pow(n as u32 - j)).sum();
        prop_assert_eq!(v, expected.into());
    }
}
