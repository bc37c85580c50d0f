use super::*;
use crate::classes::{generic_section_euler, one_plus_h_pow};
use proptest::prelude::*;

const X3: [&str; 3] = ["x0", "x1", "x2"];

fn arr(src: &str) -> Arrangement {
    Arrangement::parse(src, &X3).unwrap()
}

fn boolean() -> Arrangement {
    arr("x0\nx1\nx2")
}

fn braid() -> Arrangement {
    arr("x0 - x1\nx1 - x2\nx0 - x2")
}

fn concurrent() -> Arrangement {
    arr("x0\nx1\nx0 + x1")
}

fn generic4() -> Arrangement {
    arr("x0\nx1\nx2\nx0 + x1 + x2")
}

fn p(s: &str) -> QPoly {
    parse_poly(s, &X3).unwrap()
}

fn policy() -> TrialPolicy {
    TrialPolicy::with_seed(77)
}

fn mobius_by_rank(a: &Arrangement) -> Vec<Vec<i64>> {
    let l = a.lattice().unwrap();
    let mut out = vec![Vec::new(); l.rank() + 1];
    for f in l.flats() {
        out[f.rank].push(f.mobius);
    }
    out
}

#[test]
fn lattices() {
    let b = boolean();
    assert_eq!(b.lattice().unwrap().len(), 8);
    assert!(b.lattice().unwrap().flats().iter().all(|f| f.mobius.abs() == 1));
    assert!(b.lattice().unwrap().whitney_holds());

    assert_eq!(mobius_by_rank(&braid()), vec![vec![1], vec![-1, -1, -1], vec![2]]);
    assert_eq!(mobius_by_rank(&generic4()), vec![vec![1], vec![-1; 4], vec![1; 6], vec![-3]]);
    assert!(generic4().lattice().unwrap().whitney_holds());
}

#[test]
fn characteristic_polynomials() {
    assert_eq!(boolean().char_poly().unwrap(), CharPoly::from_roots(&[1, 1, 1]));
    assert_eq!(braid().char_poly().unwrap(), CharPoly::new(vec![0, 2, -3, 1]));
    assert_eq!(generic4().char_poly().unwrap(), CharPoly::new(vec![-3, 6, -4, 1]));
    for a in [boolean(), braid(), generic4(), concurrent()] {
        let c = a.char_poly().unwrap();
        assert_eq!(c.leading(), 1);
        assert_eq!(c.eval(1), 0);
        assert!(c.signs_alternate());
    }
    assert_eq!(boolean().poincare().unwrap(), CharPoly::new(vec![1, 3, 3, 1]));
}

#[test]
fn deconing() {
    assert_eq!(boolean().decone(2).unwrap(), CharPoly::new(vec![1, -2, 1]));
    assert_eq!(braid().decone(0).unwrap(), CharPoly::new(vec![0, -2, 1]));
    assert_eq!(arr("x2").decone(0).unwrap(), CharPoly::new(vec![0, 0, 1]));
    assert!(boolean().decone(3).is_err());
    for a in [boolean(), braid(), generic4()] {
        assert_eq!(a.decone(0).unwrap().mul_linear(1), a.char_poly().unwrap());
    }
}

#[test]
fn freeness_and_terao() {
    assert_eq!(boolean().exponents().unwrap(), vec![1, 1, 1]);
    assert_eq!(concurrent().exponents().unwrap(), vec![0, 1, 2]);
    assert_eq!(braid().exponents().unwrap(), vec![0, 1, 2]);
    for a in [boolean(), braid(), concurrent()] {
        assert!(a.terao_factorization_holds().unwrap());
    }
    assert!(matches!(generic4().exponents(), Err(Error::NotFree(_))));

    let a3 =
        Arrangement::parse("x0 - x1\nx0 - x2\nx0 - x3\nx1 - x2\nx1 - x3\nx2 - x3", &["x0", "x1", "x2", "x3"]).unwrap();
    assert_eq!(a3.exponents().unwrap(), vec![0, 1, 2, 3]);
    assert!(a3.terao_factorization_holds().unwrap());
}

#[test]
fn aluffi_identity() {
    assert!(boolean().aluffi_identity_check(&[1, 1, 1]).unwrap());
    assert!(concurrent().aluffi_identity_check(&[1, 0, 2]).unwrap());
    assert!(!concurrent().aluffi_identity_check(&[1, 1, 2]).unwrap());
    assert!(generic4().aluffi_identity_check(&[1, 1, 1]).is_err());
    let e = braid().exponents().unwrap();
    assert!(braid().aluffi_identity_check(&e).unwrap());
}

#[test]
fn invalid_arrangements() {
    assert!(matches!(Arrangement::parse("x0\n2*x0", &X3), Err(Error::InvalidArrangement(_))));
    assert!(matches!(Arrangement::parse("x0^2", &X3), Err(Error::InvalidArrangement(_))));
    assert!(matches!(Arrangement::parse("x0 + 1", &X3), Err(Error::InvalidArrangement(_))));
    assert!(matches!(Arrangement::from_ints(3, &[&[0, 0, 0]]), Err(Error::InvalidArrangement(_))));
    assert!(matches!(generic4().with_flat_bound(5).lattice(), Err(Error::TooManyFlats(5))));
}

#[test]
fn bk_examples() {
    let line = p("2*x0 - 3*x1 + 5*x2");
    assert_eq!(boolean().b_k(&line, &policy()).unwrap().b, vec![1, 0, 0]);
    assert_eq!(concurrent().b_k(&line, &policy()).unwrap().b, vec![1, 0, 0]);

    // b_k for a generic conic against χ(P^k \ (V ∪ H)).
    let conic = p("x0^2 + 2*x1^2 - 3*x2^2 + x0*x1 + x1*x2 - 4*x0*x2");
    let b = boolean().b_k(&conic, &policy()).unwrap().b;
    let oracle: Vec<i64> = (0..3)
        .map(|k| i64::try_from(generic_section_euler(&one_plus_h_pow(k, k as u32), 2).unwrap()).unwrap())
        .collect();
    assert_eq!(b, oracle);
    assert_eq!(b, vec![1, -1, 1]);
}

#[test]
fn akbk_examples() {
    let line = p("2*x0 - 3*x1 + 5*x2");
    let r = boolean().euler_via_akbk(&line, 2, &policy()).unwrap();
    assert_eq!(r.a, vec![1, -2, 1]);
    assert_eq!(r.b, vec![1, 0, 0]);
    // Four lines, six double points: 3 - (4*2 - 6).
    assert_eq!(r.euler, 1);
    assert!(r.agree);

    let conic = p("x0^2 + 2*x1^2 - 3*x2^2 + x0*x1 + x1*x2 - 4*x0*x2");
    let r = arr("x2").euler_via_akbk(&conic, 0, &policy()).unwrap();
    // C^2 minus a conic meeting the line at infinity twice: 1 - (2 - 2).
    assert_eq!(r.euler, 1);
    assert!(r.agree);

    let r = boolean().euler_via_akbk(&conic, 2, &policy()).unwrap();
    assert_eq!(r.euler, 4);
    assert!(r.agree);

    // Three concurrent lines and a generic line: 3 - (4*2 - 2 - 3).
    let r = concurrent().euler_via_akbk(&line, 0, &policy()).unwrap();
    assert_eq!(r.euler, 0);
    assert!(r.agree);
    assert!(r.segre.class.is_zero());

    assert!(boolean().euler_via_akbk(&p("3"), 2, &policy()).is_err());
    assert!(matches!(boolean().euler_via_akbk(&p("x0^2*x1"), 2, &policy()), Err(Error::NotReduced)));
}

/// χ by deletion-restriction all the way down, never touching the lattice.
fn chi_recursive(a: &Arrangement) -> CharPoly {
    if a.is_empty() {
        let mut c = vec![0; a.nvars() + 1];
        c[a.nvars()] = 1;
        return CharPoly::new(c);
    }
    let last = a.len() - 1;
    &chi_recursive(&a.delete(last)) - &chi_recursive(&a.restrict(last))
}

fn random_arrangement() -> impl Strategy<Value = Arrangement> {
    (3usize..5).prop_flat_map(|n| {
        proptest::collection::vec(proptest::collection::vec(-2i64..3, n), 1..7).prop_map(move |rows| {
            let mut seen = HashSet::new();
            let rows: Vec<Vec<BigRational>> = rows
                .into_iter()
                .map(|r| r.into_iter().map(|c| BigRational::from_integer(c.into())).collect::<Vec<_>>())
                .filter(|r| r.iter().any(|c| !c.is_zero()))
                .map(|r| linalg::primitive_vector(&r))
                .filter(|r| seen.insert(r.clone()))
                .collect();
            Arrangement::from_rows(n, rows).unwrap()
        })
    })
}

#[test]
fn recursive_oracle_on_examples() {
    for a in [boolean(), braid(), generic4(), concurrent()] {
        assert_eq!(chi_recursive(&a), a.char_poly().unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn deletion_restriction(a in random_arrangement(), pick in 0usize..8) {
        prop_assume!(!a.is_empty());
        let i = pick % a.len();
        let chi = a.char_poly().unwrap();
        prop_assert_eq!(&chi, &(&a.delete(i).char_poly().unwrap() - &a.restrict(i).char_poly().unwrap()));
        prop_assert_eq!(&chi, &chi_recursive(&a));
    }

    #[test]
    fn lattice_invariants(a in random_arrangement()) {
        let l = a.lattice().unwrap();
        prop_assert!(l.whitney_holds());
        let chi = l.char_poly();
        prop_assert_eq!(chi.leading(), 1);
        prop_assert!(chi.signs_alternate());
        if !a.is_empty() {
            prop_assert_eq!(chi.eval(1), 0);
            prop_assert_eq!(a.decone(0).unwrap().mul_linear(1), chi);
        }
    }
}
