//! Logarithmic derivations of homogeneous divisors and Saito's criterion.

use std::collections::HashMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::groebner::is_squarefree;
use crate::linalg;
use crate::poly::{default_var_names, Monomial, QPoly};

/// A vector field `Σ a_i ∂_i` on affine space with coordinates `x0..xn`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Derivation {
    coeffs: Vec<QPoly>,
}

impl Derivation {
    pub fn new(coeffs: Vec<QPoly>) -> Self {
        assert!(!coeffs.is_empty());
        let n = coeffs[0].nvars();
        assert!(coeffs.iter().all(|c| c.nvars() == n) && coeffs.len() == n, "one coefficient per variable");
        Derivation { coeffs }
    }

    pub fn euler(nvars: usize) -> Self {
        Derivation { coeffs: (0..nvars).map(|i| QPoly::x(nvars, i)).collect() }
    }

    pub fn partial(nvars: usize, i: usize) -> Self {
        let mut coeffs = vec![QPoly::zero(nvars); nvars];
        coeffs[i] = QPoly::from_int(nvars, 1);
        Derivation { coeffs }
    }

    pub fn nvars(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[QPoly] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Common degree of the coefficients, if they are homogeneous of one degree.
    pub fn degree(&self) -> Option<u32> {
        let mut deg = None;
        for c in self.coeffs.iter().filter(|c| !c.is_zero()) {
            let d = c.homogeneous_degree()?;
            match deg {
                None => deg = Some(d),
                Some(e) if e != d => return None,
                _ => {}
            }
        }
        deg
    }

    pub fn apply(&self, f: &QPoly) -> QPoly {
        let mut acc = QPoly::zero(f.nvars());
        for (i, a) in self.coeffs.iter().enumerate() {
            if !a.is_zero() {
                acc = &acc + &(a * &f.derivative(i));
            }
        }
        acc
    }

    /// `[self, other]`.
    pub fn bracket(&self, other: &Derivation) -> Derivation {
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| &self.apply(b) - &other.apply(a)).collect();
        Derivation { coeffs }
    }

    pub fn scale(&self, c: &BigRational) -> Derivation {
        Derivation { coeffs: self.coeffs.iter().map(|a| a.scale(c)).collect() }
    }

    pub fn mul_poly(&self, f: &QPoly) -> Derivation {
        Derivation { coeffs: self.coeffs.iter().map(|a| a * f).collect() }
    }

    pub fn add(&self, other: &Derivation) -> Derivation {
        Derivation { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect() }
    }

    /// `δ(h) ∈ (h)`.
    pub fn is_logarithmic(&self, h: &QPoly) -> bool {
        let dh = self.apply(h);
        dh.is_zero() || dh.div_exact(h).is_some()
    }

    pub fn fmt_with(&self, vars: &[String]) -> String {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, a)| !a.is_zero())
            .map(|(i, a)| format!("({})*d{}", a.fmt_with(vars), vars[i]))
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }

    fn to_vector(&self, mons: &[Monomial]) -> Vec<BigRational> {
        let mut v = Vec::with_capacity(mons.len() * self.coeffs.len());
        for a in &self.coeffs {
            for m in mons {
                v.push(a.coeff_of(m).cloned().unwrap_or_else(BigRational::zero));
            }
        }
        v
    }

    fn from_vector(nvars: usize, mons: &[Monomial], v: &[BigRational]) -> Derivation {
        let coeffs = (0..nvars)
            .map(|i| {
                QPoly::from_terms(
                    nvars,
                    mons.iter().enumerate().map(|(k, m)| (m.clone(), v[i * mons.len() + k].clone())),
                )
            })
            .collect();
        Derivation { coeffs }
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_with(&default_var_names(self.nvars())))
    }
}

impl fmt::Debug for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Outcome of Saito's determinant criterion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SaitoCertificate {
    pub determinant: QPoly,
    /// `c` with `det = c·h`, when it exists.
    pub unit: Option<BigRational>,
    pub free: bool,
    /// Sorted coefficient degrees; empty unless free and homogeneous.
    pub exponents: Vec<u32>,
}

fn check_divisor(h: &QPoly) -> Result<u32> {
    let d = h
        .homogeneous_degree()
        .filter(|_| !h.is_zero())
        .ok_or_else(|| Error::NotHomogeneous("divisor equation must be a nonzero form".into()))?;
    if d == 0 {
        return Err(Error::Precondition("divisor equation is a constant".into()));
    }
    if !is_squarefree(h) {
        return Err(Error::NotReduced);
    }
    Ok(d)
}

/// Basis of the degree-`d` logarithmic derivations along `V(h)`.
pub fn logder_graded_basis(h: &QPoly, d: u32) -> Result<Vec<Derivation>> {
    check_divisor(h)?;
    Ok(graded_basis_unchecked(h, d))
}

fn graded_basis_unchecked(h: &QPoly, d: u32) -> Vec<Derivation> {
    let n = h.nvars();
    let mons = Monomial::all_of_degree(n, d);
    let qmons = if d == 0 { Vec::new() } else { Monomial::all_of_degree(n, d - 1) };
    let nunk = n * mons.len() + qmons.len();
    let partials: Vec<QPoly> = (0..n).map(|i| h.derivative(i)).collect();

    let mut row_of: HashMap<Monomial, usize> = HashMap::new();
    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    let mut put = |m: Monomial, col: usize, c: &BigRational| {
        let r = *row_of.entry(m).or_insert_with(|| {
            rows.push(vec![BigRational::zero(); nunk]);
            rows.len() - 1
        });
        rows[r][col] += c;
    };
    for (i, di) in partials.iter().enumerate() {
        for (k, m) in mons.iter().enumerate() {
            for (t, c) in di.terms() {
                put(t.mul(m), i * mons.len() + k, c);
            }
        }
    }
    for (k, m) in qmons.iter().enumerate() {
        for (t, c) in h.terms() {
            put(t.mul(m), n * mons.len() + k, &-c);
        }
    }
    let null = linalg::nullspace(&rows, nunk);
    let mut out: Vec<Derivation> = null
        .iter()
        .map(|v| Derivation::from_vector(n, &mons, &v[..n * mons.len()]))
        .filter(|der| !der.is_zero())
        .collect();
    out.sort_by_key(|der| std::cmp::Reverse(der.to_vector(&mons).iter().position(|c| !c.is_zero())));
    out
}

/// Determinant of a square matrix of polynomials by Laplace expansion.
pub fn determinant(m: &[Vec<QPoly>]) -> QPoly {
    let k = m.len();
    assert!(k > 0 && k <= 20 && m.iter().all(|r| r.len() == k), "square matrix expected");
    let nvars = m[0][0].nvars();
    // dp[mask]: minor on the last |mask| rows and the columns in mask.
    let mut dp: HashMap<u32, QPoly> = HashMap::new();
    dp.insert(0, QPoly::from_int(nvars, 1));
    for r in (0..k).rev() {
        let size = (k - r) as u32;
        let mut next = HashMap::new();
        for mask in 0u32..(1 << k) {
            if mask.count_ones() != size {
                continue;
            }
            let mut acc = QPoly::zero(nvars);
            let mut before = 0;
            for c in 0..k {
                if mask & (1 << c) == 0 {
                    continue;
                }
                let entry = &m[r][c];
                if !entry.is_zero() {
                    let minor = &dp[&(mask & !(1 << c))];
                    if !minor.is_zero() {
                        let t = entry * minor;
                        acc = if before % 2 == 0 { &acc + &t } else { &acc - &t };
                    }
                }
                before += 1;
            }
            next.insert(mask, acc);
        }
        dp = next;
    }
    dp.remove(&((1u32 << k) - 1)).unwrap()
}

/// Saito's criterion for `n+1` candidate derivations.
pub fn saito_check(h: &QPoly, ders: &[Derivation]) -> Result<SaitoCertificate> {
    let n = h.nvars();
    if ders.len() != n || ders.iter().any(|der| der.nvars() != n) {
        return Err(Error::DimensionMismatch(format!("need {n} derivations in {n} variables, got {}", ders.len())));
    }
    for (index, der) in ders.iter().enumerate() {
        if !der.is_logarithmic(h) {
            return Err(Error::NotLogarithmic { index });
        }
    }
    let matrix: Vec<Vec<QPoly>> = ders.iter().map(|der| der.coeffs.clone()).collect();
    let det = determinant(&matrix);
    let unit = if det.is_zero() {
        None
    } else {
        det.div_exact(h).filter(|q| q.is_constant()).and_then(|q| q.sample_coeff().cloned())
    };
    let free = unit.is_some();
    let mut exponents = Vec::new();
    if free && h.is_homogeneous() {
        let degs: Option<Vec<u32>> = ders.iter().map(|der| der.degree()).collect();
        if let Some(mut degs) = degs {
            degs.sort_unstable();
            exponents = degs;
        }
    }
    Ok(SaitoCertificate { determinant: det, unit, free, exponents })
}

/// Outcome of the degree-by-degree basis search.
#[derive(Clone, Debug)]
pub enum Freeness {
    Free { basis: Vec<Derivation>, certificate: SaitoCertificate },
    NotFree { reason: String },
}

/// Searches for a homogeneous basis of the logarithmic derivations, picking
/// minimal generators degree by degree up to `max_degree` (the degree of `h`
/// when `None`, which suffices since the exponents of a free divisor add up to it).
pub fn free_basis(h: &QPoly, max_degree: Option<u32>) -> Result<Freeness> {
    let deg_h = check_divisor(h)?;
    let n = h.nvars();
    let max_degree = max_degree.unwrap_or(deg_h);
    let mut chosen: Vec<Derivation> = Vec::new();
    for d in 0..=max_degree {
        let mons = Monomial::all_of_degree(n, d);
        let mut span: Vec<Vec<BigRational>> = Vec::new();
        for g in &chosen {
            let e = g.degree().unwrap_or(0);
            for m in Monomial::all_of_degree(n, d - e) {
                let mp = QPoly::monomial(m, BigRational::one());
                span.push(g.mul_poly(&mp).to_vector(&mons));
            }
        }
        let mut rank = linalg::rank(&span, n * mons.len());
        let mut candidates = graded_basis_unchecked(h, d);
        if d == 1 {
            candidates.insert(0, Derivation::euler(n));
        }
        for der in candidates {
            span.push(der.to_vector(&mons));
            let r = linalg::rank(&span, n * mons.len());
            if r > rank {
                rank = r;
                chosen.push(der);
                if chosen.len() > n {
                    return Ok(Freeness::NotFree { reason: format!("more than {n} minimal generators") });
                }
            } else {
                span.pop();
            }
        }
        if chosen.len() == n {
            let cert = saito_check(h, &chosen)?;
            return Ok(if cert.free {
                Freeness::Free { basis: chosen, certificate: cert }
            } else {
                Freeness::NotFree { reason: "determinant is not a unit multiple of h".into() }
            });
        }
    }
    Ok(Freeness::NotFree { reason: format!("only {} minimal generators up to degree {max_degree}", chosen.len()) })
}

/// A basis of degree-one logarithmic derivations passing Saito's criterion, if any.
/// Requires `deg h = number of variables`.
pub fn is_linear_free(h: &QPoly) -> Result<Option<Vec<Derivation>>> {
    let deg_h = check_divisor(h)?;
    if deg_h as usize != h.nvars() {
        return Ok(None);
    }
    if !graded_basis_unchecked(h, 0).is_empty() {
        return Ok(None);
    }
    match free_basis(h, Some(1))? {
        Freeness::Free { basis, certificate } if certificate.exponents.iter().all(|&e| e == 1) => Ok(Some(basis)),
        _ => Ok(None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_poly, q};
    use proptest::prelude::*;

    fn p(s: &str, vars: &[&str]) -> QPoly {
        parse_poly(s, vars).unwrap()
    }

    const X3: [&str; 3] = ["x0", "x1", "x2"];
    const XYZW: [&str; 4] = ["x", "y", "z", "w"];
    const DISC: &str = "y^2*z^2 - 4*x*z^3 - 4*y^3*w + 18*x*y*z*w - 27*x^2*w^2";

    fn der(cs: &[&str], vars: &[&str]) -> Derivation {
        Derivation::new(cs.iter().map(|c| p(c, vars)).collect())
    }

    fn in_span(basis: &[Derivation], der: &Derivation, mons: &[Monomial]) -> bool {
        let mut rows: Vec<_> = basis.iter().map(|b| b.to_vector(mons)).collect();
        let r = linalg::rank(&rows, rows[0].len());
        rows.push(der.to_vector(mons));
        linalg::rank(&rows, rows[0].len()) == r
    }

    #[test]
    fn coordinate_arrangement() {
        let h = p("x0*x1*x2", &X3);
        let b = logder_graded_basis(&h, 1).unwrap();
        assert_eq!(b.len(), 3);
        let mons = Monomial::all_of_degree(3, 1);
        for i in 0..3 {
            let mut cs = vec![QPoly::zero(3); 3];
            cs[i] = QPoly::x(3, i);
            assert!(in_span(&b, &Derivation::new(cs), &mons));
        }
        let ders = vec![der(&["x0", "0", "0"], &X3), der(&["0", "x1", "0"], &X3), der(&["0", "0", "x2"], &X3)];
        let c = saito_check(&h, &ders).unwrap();
        assert!(c.free);
        assert_eq!(c.unit, Some(q(1)));
        assert_eq!(c.exponents, vec![1, 1, 1]);
        assert!(is_linear_free(&h).unwrap().is_some());
    }

    #[test]
    fn braid_arrangement() {
        let h = p("(x0 - x1)*(x1 - x2)*(x0 - x2)", &X3);
        let b = logder_graded_basis(&h, 0).unwrap();
        assert_eq!(b, vec![der(&["1", "1", "1"], &X3)]);
        let ders = vec![der(&["1", "1", "1"], &X3), Derivation::euler(3), der(&["x0^2", "x1^2", "x2^2"], &X3)];
        let c = saito_check(&h, &ders).unwrap();
        assert!(c.free);
        assert_eq!(c.exponents, vec![0, 1, 2]);
        // Vandermonde: det [1 1 1; x0 x1 x2; x0^2 x1^2 x2^2] = (x1-x0)(x2-x0)(x2-x1) = -h.
        assert_eq!(c.determinant, -&h);
        assert_eq!(c.unit, Some(q(-1)));
        match free_basis(&h, None).unwrap() {
            Freeness::Free { certificate, .. } => assert_eq!(certificate.exponents, vec![0, 1, 2]),
            other => panic!("{other:?}"),
        }
        assert!(is_linear_free(&h).unwrap().is_none());
    }

    fn disc_rows() -> Vec<Derivation> {
        vec![
            der(&["x", "y", "z", "w"], &XYZW),
            der(&["3*x", "y", "-z", "-3*w"], &XYZW),
            der(&["0", "3*x", "2*y", "z"], &XYZW),
            der(&["y", "2*z", "3*w", "0"], &XYZW),
        ]
    }

    #[test]
    fn discriminant_of_binary_cubics() {
        let h = p(DISC, &XYZW);
        let b = logder_graded_basis(&h, 1).unwrap();
        assert_eq!(b.len(), 4);
        let mons = Monomial::all_of_degree(4, 1);
        for r in disc_rows() {
            assert!(r.is_logarithmic(&h));
            assert!(in_span(&b, &r, &mons));
        }
        let c = saito_check(&h, &disc_rows()).unwrap();
        assert!(c.free);
        assert_eq!(c.exponents, vec![1, 1, 1, 1]);
        let unit = c.unit.clone().unwrap();
        assert!(!unit.is_zero());
        assert_eq!(c.determinant, h.scale(&unit));
        let lf = is_linear_free(&h).unwrap().unwrap();
        assert_eq!(lf.len(), 4);
    }

    #[test]
    fn generic_quartic_is_not_linear_free() {
        let h = p("x0^4 + x1^4 + x2^4 + x0*x1^3 - 2*x1*x2^3 + 3*x0^2*x1*x2", &X3);
        let b = logder_graded_basis(&h, 1).unwrap();
        assert_eq!(b, vec![Derivation::euler(3)]);
        assert!(is_linear_free(&h).unwrap().is_none());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(logder_graded_basis(&p("x0^2*x1", &X3), 1), Err(Error::NotReduced)));
        assert!(logder_graded_basis(&p("x0 + x1^2", &X3), 1).is_err());
        let h = p("x0*x1*x2", &X3);
        let bad = vec![der(&["x1", "0", "0"], &X3), Derivation::euler(3), der(&["0", "0", "x2"], &X3)];
        assert!(matches!(saito_check(&h, &bad), Err(Error::NotLogarithmic { index: 0 })));
        assert!(matches!(saito_check(&h, &bad[..2]), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn logarithmic_but_not_a_basis() {
        let h = p("x0*x1*x2", &X3);
        let ders = vec![Derivation::euler(3), Derivation::euler(3), der(&["0", "0", "x2"], &X3)];
        let c = saito_check(&h, &ders).unwrap();
        assert!(!c.free && c.determinant.is_zero());
    }

    #[test]
    fn non_free_arrangement() {
        // Four general planes through the origin of C^3.
        let h = p("x0*x1*x2*(x0 + x1 + x2)", &X3);
        assert!(matches!(free_basis(&h, None).unwrap(), Freeness::NotFree { .. }));
    }

    fn small_int() -> impl Strategy<Value = i64> {
        -3i64..=3
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        #[test]
        fn exponents_are_basis_independent(a in proptest::collection::vec(small_int(), 16), s in proptest::collection::vec(small_int(), 3)) {
            let h = p(DISC, &XYZW);
            let rows = disc_rows();
            // Degree-0 change of basis: rows' = M rows with M = I + strictly triangular part.
            let mut mixed = Vec::new();
            for i in 0..4 {
                let mut der = rows[i].clone();
                for j in 0..i {
                    der = der.add(&rows[j].scale(&q(a[i * 4 + j])));
                }
                mixed.push(der);
            }
            let c = saito_check(&h, &mixed).unwrap();
            prop_assert!(c.free);
            prop_assert_eq!(c.exponents, vec![1, 1, 1, 1]);

            // Braid arrangement: add polynomial multiples of lower-degree elements.
            let hb = p("(x0 - x1)*(x1 - x2)*(x0 - x2)", &X3);
            let d0 = der(&["1", "1", "1"], &X3);
            let e = Derivation::euler(3);
            let lin = QPoly::from_terms(3, (0..3).map(|i| (Monomial::var(3, i), q(s[i]))));
            let d2 = der(&["x0^2", "x1^2", "x2^2"], &X3).add(&e.mul_poly(&lin)).add(&d0.mul_poly(&(&lin * &lin)));
            let d1 = e.add(&d0.mul_poly(&lin));
            let c = saito_check(&hb, &[d0, d1, d2]).unwrap();
            prop_assert!(c.free);
            prop_assert_eq!(c.exponents.iter().sum::<u32>(), 3);
            prop_assert_eq!(c.exponents, vec![0, 1, 2]);
        }

        #[test]
        fn bracket_of_logarithmic_is_logarithmic(a in proptest::collection::vec(small_int(), 8)) {
            let h = p(DISC, &XYZW);
            let rows = disc_rows();
            let mut d1 = rows[0].scale(&q(a[0]));
            let mut d2 = rows[0].scale(&q(a[4]));
            for k in 1..4 {
                d1 = d1.add(&rows[k].scale(&q(a[k])));
                d2 = d2.add(&rows[k].scale(&q(a[4 + k])));
            }
            let d2 = d2.mul_poly(&p("x + 2*w", &XYZW));
            let b = d1.bracket(&d2);
            prop_assert!(b.is_logarithmic(&h));
            let ideal = crate::groebner::Ideal::new(4, [h.clone()]);
            prop_assert!(ideal.contains(&b.apply(&h)));
        }
    }
}
