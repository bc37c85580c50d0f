use crate::poly::{Coeff, MPoly, MonomialOrder};

use super::Ideal;

/// Monic greatest common divisor, via `lcm(a, b)` as the generator of `(a) ∩ (b)`.
pub fn gcd<C: Coeff>(a: &MPoly<C>, b: &MPoly<C>) -> MPoly<C> {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() || a.is_constant() || b.is_constant() {
        return if b.is_zero() { a.monic() } else { MPoly::constant(a.nvars(), a.sample_coeff().unwrap().one_like()) };
    }
    let n = a.nvars();
    let meet = Ideal::new(n, [a.clone()]).intersect(&Ideal::new(n, [b.clone()]));
    let basis = meet.groebner_basis(MonomialOrder::Grevlex);
    debug_assert_eq!(basis.len(), 1, "intersection of principal ideals is principal");
    (a * b).div_exact(&basis[0]).expect("lcm divides the product").monic()
}

/// `true` when no irreducible factor of `p` is repeated.
pub fn is_squarefree<C: Coeff>(p: &MPoly<C>) -> bool {
    if p.is_zero() {
        return false;
    }
    let mut g = p.monic();
    for i in 0..p.nvars() {
        if g.is_constant() {
            return true;
        }
        let d = p.derivative(i);
        if !d.is_zero() {
            g = gcd(&g, &d);
        }
    }
    g.is_constant()
}
