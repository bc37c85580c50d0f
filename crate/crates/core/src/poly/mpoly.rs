use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::field::{rational_to_fp, Coeff, Fp};
use super::monomial::{Monomial, MonomialOrder};
use crate::error::Error;

/// Sparse multivariate polynomial.
///
/// Terms are stored with nonzero coefficients, sorted by decreasing grevlex
/// order of their monomials, so structural equality is polynomial equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MPoly<C> {
    nvars: usize,
    terms: Vec<(Monomial, C)>,
}

pub type QPoly = MPoly<BigRational>;
pub type FpPoly = MPoly<Fp>;

pub fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl<C: Coeff> MPoly<C> {
    pub fn zero(nvars: usize) -> Self {
        MPoly { nvars, terms: Vec::new() }
    }

    pub fn constant(nvars: usize, c: C) -> Self {
        Self::monomial(Monomial::one(nvars), c)
    }

    pub fn monomial(m: Monomial, c: C) -> Self {
        let nvars = m.nvars();
        if c.is_zero() {
            Self::zero(nvars)
        } else {
            MPoly { nvars, terms: vec![(m, c)] }
        }
    }

    /// The variable `x_i`, with coefficient `one`.
    pub fn var(nvars: usize, i: usize, one: C) -> Self {
        Self::monomial(Monomial::var(nvars, i), one)
    }

    /// Builds a polynomial from arbitrary terms: merges duplicates, drops zeros, sorts.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, C)>) -> Self {
        let mut acc: HashMap<Monomial, C> = HashMap::new();
        for (m, c) in terms {
            debug_assert_eq!(m.nvars(), nvars);
            match acc.get_mut(&m) {
                Some(v) => *v = v.add(&c),
                None => {
                    acc.insert(m, c);
                }
            }
        }
        Self::from_map(nvars, acc)
    }

    fn from_map(nvars: usize, acc: HashMap<Monomial, C>) -> Self {
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| MonomialOrder::Grevlex.cmp(&b.0, &a.0));
        MPoly { nvars, terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[(Monomial, C)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, C)> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    /// Some element of the coefficient field, if the polynomial is nonzero.
    pub fn sample_coeff(&self) -> Option<&C> {
        self.terms.first().map(|(_, c)| c)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.first().map(|(m, _)| m.degree())
    }

    /// Degree when every term has the same total degree.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let d = self.total_degree()?;
        self.terms.iter().all(|(m, _)| m.degree() == d).then_some(d)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.homogeneous_degree().is_some()
    }

    pub fn coeff_of(&self, m: &Monomial) -> Option<&C> {
        self.terms.iter().find(|(t, _)| t == m).map(|(_, c)| c)
    }

    /// Leading term in the given order.
    pub fn leading_term(&self, order: MonomialOrder) -> Option<&(Monomial, C)> {
        match order {
            MonomialOrder::Grevlex => self.terms.first(),
            _ => self.terms.iter().max_by(|a, b| order.cmp(&a.0, &b.0)),
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        MPoly { nvars: self.nvars, terms: self.terms.iter().map(|(m, a)| (m.clone(), a.mul(c))).collect() }
    }

    pub fn mul_term(&self, m: &Monomial, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        // Multiplication by a monomial preserves grevlex order.
        MPoly { nvars: self.nvars, terms: self.terms.iter().map(|(t, a)| (t.mul(m), a.mul(c))).collect() }
    }

    /// Divides every coefficient by the leading (grevlex) coefficient.
    pub fn monic(&self) -> Self {
        match self.terms.first() {
            None => self.clone(),
            Some((_, c)) => self.scale(&c.inv()),
        }
    }

    fn merge(&self, other: &Self, negate: bool) -> Self {
        assert_eq!(self.nvars, other.nvars, "polynomials in different rings");
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() && j < b.len() {
            match MonomialOrder::Grevlex.cmp(&a[i].0, &b[j].0) {
                std::cmp::Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    let c = if negate { b[j].1.neg() } else { b[j].1.clone() };
                    out.push((b[j].0.clone(), c));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = if negate { a[i].1.sub(&b[j].1) } else { a[i].1.add(&b[j].1) };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend(b[j..].iter().map(|(m, c)| (m.clone(), if negate { c.neg() } else { c.clone() })));
        MPoly { nvars: self.nvars, terms: out }
    }

    pub fn pow(&self, e: u32) -> Self {
        let one = match self.sample_coeff() {
            Some(c) => c.one_like(),
            None => {
                assert!(e > 0, "0^0 has no coefficient field");
                return self.clone();
            }
        };
        let mut acc = Self::constant(self.nvars, one);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Formal partial derivative with respect to `x_i`.
    pub fn derivative(&self, i: usize) -> Self {
        assert!(i < self.nvars, "variable index out of range");
        let terms = self.terms.iter().filter(|(m, _)| m.exp(i) > 0).map(|(m, c)| {
            let e = m.exp(i);
            let mut exps: super::monomial::Exponents = m.exps().into();
            exps[i] -= 1;
            (Monomial::new(exps), c.mul(&c.int_like(e as i64)))
        });
        // Differentiation can collide monomials only in characteristic p; from_terms handles both.
        Self::from_terms(self.nvars, terms)
    }

    /// Homogeneous component of degree `d`.
    pub fn component(&self, d: u32) -> Self {
        MPoly { nvars: self.nvars, terms: self.terms.iter().filter(|(m, _)| m.degree() == d).cloned().collect() }
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> MPoly<D> {
        MPoly::from_terms(self.nvars, self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    pub fn try_map_coeffs<D: Coeff, E>(&self, f: impl Fn(&C) -> Result<D, E>) -> Result<MPoly<D>, E> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            terms.push((m.clone(), f(c)?));
        }
        Ok(MPoly::from_terms(self.nvars, terms))
    }

    /// Substitutes `x_i -> images[i]`; all images share one ring.
    pub fn substitute(&self, images: &[MPoly<C>]) -> MPoly<C> {
        assert_eq!(images.len(), self.nvars, "substitution arity");
        let target = images.first().map(|p| p.nvars).unwrap_or(0);
        let mut powers: Vec<Vec<MPoly<C>>> = vec![Vec::new(); self.nvars];
        let mut acc = MPoly::zero(target);
        for (m, c) in &self.terms {
            let mut t = MPoly::constant(target, c.clone());
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let cache = &mut powers[i];
                while cache.len() < e as usize {
                    let next = match cache.last() {
                        Some(p) => p * &images[i],
                        None => images[i].clone(),
                    };
                    cache.push(next);
                }
                t = &t * &cache[e as usize - 1];
                if t.is_zero() {
                    break;
                }
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Relabels variables into a ring with `nvars` variables: `x_i -> x_{map[i]}`.
    pub fn rename_vars(&self, nvars: usize, map: &[usize]) -> Self {
        assert_eq!(map.len(), self.nvars);
        let terms = self.terms.iter().map(|(m, c)| {
            let mut exps: super::monomial::Exponents = smallvec::SmallVec::from_elem(0, nvars);
            for (i, &e) in m.exps().iter().enumerate() {
                exps[map[i]] += e;
            }
            (Monomial::new(exps), c.clone())
        });
        Self::from_terms(nvars, terms)
    }

    pub fn eval(&self, point: &[C]) -> Option<C> {
        assert_eq!(point.len(), self.nvars);
        let mut acc: Option<C> = None;
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exps().iter().enumerate() {
                for _ in 0..e {
                    t = t.mul(&point[i]);
                }
            }
            acc = Some(match acc {
                Some(a) => a.add(&t),
                None => t,
            });
        }
        acc
    }

    /// Exact quotient `self / d`, or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let (lm, lc) = d.terms[0].clone();
        let lc_inv = lc.inv();
        let mut rem = self.clone();
        let mut quot = Vec::new();
        while let Some((m, c)) = rem.terms.first().cloned() {
            if !lm.divides(&m) {
                return None;
            }
            let qm = lm.quotient_of(&m);
            let qc = c.mul(&lc_inv);
            rem = rem.merge(&d.mul_term(&qm, &qc), true);
            quot.push((qm, qc));
        }
        Some(MPoly { nvars: self.nvars, terms: quot })
    }

    pub fn fmt_with(&self, vars: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative_repr();
            let abs = if neg { c.neg() } else { c.clone() };
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || m.is_one() {
                factors.push(abs.to_string());
            }
            for (i, &e) in m.exps().iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(vars[i].clone()),
                    _ => factors.push(format!("{}^{}", vars[i], e)),
                }
            }
            s.push_str(&factors.join("*"));
        }
        s
    }
}

pub fn default_var_names(nvars: usize) -> Vec<String> {
    (0..nvars).map(|i| format!("x{i}")).collect()
}

impl<C: Coeff> fmt::Display for MPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_with(&default_var_names(self.nvars)))
    }
}

impl<C: Coeff> fmt::Debug for MPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MPoly({self})")
    }
}

impl<'a, C: Coeff> Add<&'a MPoly<C>> for &'a MPoly<C> {
    type Output = MPoly<C>;
    fn add(self, rhs: &'a MPoly<C>) -> MPoly<C> {
        self.merge(rhs, false)
    }
}

impl<'a, C: Coeff> Sub<&'a MPoly<C>> for &'a MPoly<C> {
    type Output = MPoly<C>;
    fn sub(self, rhs: &'a MPoly<C>) -> MPoly<C> {
        self.merge(rhs, true)
    }
}

impl<C: Coeff> Neg for &MPoly<C> {
    type Output = MPoly<C>;
    fn neg(self) -> MPoly<C> {
        MPoly { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect() }
    }
}

impl<'a, C: Coeff> Mul<&'a MPoly<C>> for &'a MPoly<C> {
    type Output = MPoly<C>;
    fn mul(self, rhs: &'a MPoly<C>) -> MPoly<C> {
        assert_eq!(self.nvars, rhs.nvars, "polynomials in different rings");
        if self.is_zero() || rhs.is_zero() {
            return MPoly::zero(self.nvars);
        }
        if self.terms.len() == 1 {
            return rhs.mul_term(&self.terms[0].0, &self.terms[0].1);
        }
        if rhs.terms.len() == 1 {
            return self.mul_term(&rhs.terms[0].0, &rhs.terms[0].1);
        }
        let mut acc: HashMap<Monomial, C> = HashMap::with_capacity(self.terms.len() * rhs.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let m = ma.mul(mb);
                let c = ca.mul(cb);
                match acc.get_mut(&m) {
                    Some(v) => *v = v.add(&c),
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        MPoly::from_map(self.nvars, acc)
    }
}

macro_rules! owned_ops {
    ($tr:ident, $f:ident) => {
        impl<C: Coeff> $tr<MPoly<C>> for MPoly<C> {
            type Output = MPoly<C>;
            fn $f(self, rhs: MPoly<C>) -> MPoly<C> {
                (&self).$f(&rhs)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

impl QPoly {
    pub fn from_int(nvars: usize, c: i64) -> Self {
        Self::constant(nvars, q(c))
    }

    pub fn x(nvars: usize, i: usize) -> Self {
        Self::var(nvars, i, BigRational::one())
    }

    /// Coefficient-wise image modulo `p`.
    pub fn reduce_mod_p(&self, p: u64) -> Result<FpPoly, Error> {
        if p >= 1 << 63 {
            return Err(Error::PrimeTooLarge(p));
        }
        self.try_map_coeffs(|c| rational_to_fp(c, p))
    }

    /// Scales to integer coefficients with content 1 and positive leading coefficient.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut den = BigInt::one();
        let mut num = BigInt::zero();
        for (_, c) in &self.terms {
            den = den.lcm(c.denom());
            num = num.gcd(c.numer());
        }
        let mut f = BigRational::new(den, num);
        if self.terms[0].1.is_negative() {
            f = -f;
        }
        self.scale(&f)
    }

    /// True if every coefficient is an integer.
    pub fn has_integer_coeffs(&self) -> bool {
        self.terms.iter().all(|(_, c)| c.is_integer())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse::parse_poly;

    fn p(s: &str, vars: &[&str]) -> QPoly {
        parse_poly(s, vars).unwrap()
    }

    #[test]
    fn derivative_examples() {
        let xy = ["x", "y"];
        assert_eq!(p("y^2 - x^3", &xy).derivative(0), p("-3*x^2", &xy));
        let v = ["x", "y", "z", "w"];
        assert!(p("7", &v).derivative(3).is_zero());
        let disc = p("y^2*z^2 - 4*x*z^3 - 4*y^3*w + 18*x*y*z*w - 27*w^2*x^2", &v);
        assert_eq!(disc.derivative(0), p("-4*z^3 + 18*y*z*w - 54*w^2*x", &v));
    }

    #[test]
    fn reduce_mod_p_examples() {
        let x = ["x"];
        let half = p("x", &x).scale(&BigRational::new(1.into(), 2.into()));
        let r = half.reduce_mod_p(7).unwrap();
        assert_eq!(r.terms()[0].1, Fp::new(4, 7));
        let c = p("x^3 - x", &x).reduce_mod_p(3).unwrap();
        assert_eq!(c.terms()[1].1, Fp::new(2, 3));
        let fifth = p("x", &x).scale(&BigRational::new(1.into(), 5.into()));
        assert!(fifth.reduce_mod_p(5).is_err());
    }

    #[test]
    fn homogeneity() {
        let xy = ["x", "y"];
        assert_eq!(p("x^2*y", &xy).homogeneous_degree(), Some(3));
        assert_eq!(p("x^2 + y", &xy).homogeneous_degree(), None);
    }

    #[test]
    fn exact_division() {
        let xy = ["x", "y"];
        let a = p("x^2 - y^2", &xy);
        assert_eq!(a.div_exact(&p("x - y", &xy)), Some(p("x + y", &xy)));
        assert_eq!(a.div_exact(&p("x + 2*y", &xy)), None);
    }

    #[test]
    fn substitution_composes() {
        let xy = ["x", "y"];
        let f = p("x^2 + y", &xy);
        let img = [p("x + y", &xy), p("x*y", &xy)];
        assert_eq!(f.substitute(&img), p("x^2 + 3*x*y + y^2", &xy));
    }
}
