//! Chow classes on `P^n` and the characteristic-class formulas built on them.
//!
//! Conventions: a class is `Σ c_i H^i ∩ [P^n]`; the dual flips the sign of odd
//! codimension pieces; `⊗ O(d)` divides the codimension-`i` piece by `(1+dH)^i`.

mod chow;

use num_bigint::BigInt;
use num_rational::BigRational;

pub use chow::ChowClass;

use crate::degrees::{
    multidegrees_of_forms, segre_class_of_ideal, MultiDegrees, RationalMap, SegreResult, TrialPolicy,
};
use crate::error::{Error, Result};
use crate::groebner::{is_squarefree, Ideal};
use crate::logder::{saito_check, Derivation};
use crate::poly::QPoly;

fn q(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// `c(T P^n(-log D)) = Π_{i≥1} (1 + (1 - d_i) H)` from the exponents, one of
/// which (the Euler derivation) must be 1.
pub fn chern_log_tangent(n: usize, exponents: &[u32]) -> Result<ChowClass> {
    if exponents.len() != n + 1 {
        return Err(Error::DimensionMismatch(format!("need {} exponents, got {}", n + 1, exponents.len())));
    }
    let Some(euler) = exponents.iter().position(|&d| d == 1) else {
        return Err(Error::Precondition("exponents must contain the Euler exponent 1".into()));
    };
    let mut c = ChowClass::one(n);
    for (i, &d) in exponents.iter().enumerate() {
        if i != euler {
            c = &c * &ChowClass::one_plus(n, 1 - d as i64);
        }
    }
    Ok(c)
}

/// `Σ g_i (-H)^i (1+H)^{n-i}`.
pub fn csm_from_gradient_multidegrees(g: &[u64]) -> ChowClass {
    let n = g.len() - 1;
    let mut acc = ChowClass::zero(n);
    for (i, &gi) in g.iter().enumerate() {
        let t = &ChowClass::h_pow(n, i).scale(&q(if i % 2 == 0 { 1 } else { -1 }))
            * &ChowClass::one_plus(n, 1).pow((n - i) as u32);
        acc = &acc + &t.scale(&q(gi as i64));
    }
    acc
}

/// `Σ (-1)^k m_k [P^{n-k}]`.
pub fn csm_from_log_multidegrees(m: &[u64]) -> ChowClass {
    let n = m.len() - 1;
    ChowClass::new(n, m.iter().enumerate().map(|(k, &v)| if k % 2 == 0 { q(v as i64) } else { -q(v as i64) }))
}

/// The degree-zero coefficient: Euler characteristic of a CSM class.
pub fn euler_char(c: &ChowClass) -> Result<BigInt> {
    let v = c.degree_zero();
    if !v.is_integer() {
        return Err(Error::NonIntegral(v.to_string()));
    }
    Ok(v.to_integer())
}

/// `∫ c / (1 + dH)`: Euler characteristic off a generic degree-`d` hypersurface.
pub fn generic_section_euler(c: &ChowClass, d: i64) -> Result<BigInt> {
    if d < 1 {
        return Err(Error::Precondition("hypersurface degree must be positive".into()));
    }
    let inv = ChowClass::one_plus(c.n(), d).inverse()?;
    euler_char(&(c * &inv))
}

/// The CSM class of the complement of `V(g)` from the gradient multidegrees.
#[derive(Clone, Debug)]
pub struct GradientCsm {
    pub class: ChowClass,
    pub multidegrees: MultiDegrees,
}

pub fn csm_complement_gradient(g: &QPoly, policy: &TrialPolicy) -> Result<GradientCsm> {
    check_reduced_form(g)?;
    let map = RationalMap::gradient(g)?;
    let md = multidegrees_of_forms(map.forms(), policy)?;
    Ok(GradientCsm { class: csm_from_gradient_multidegrees(&md.values), multidegrees: md })
}

pub(crate) fn check_reduced_form(g: &QPoly) -> Result<u32> {
    let d = g
        .homogeneous_degree()
        .filter(|_| !g.is_zero())
        .ok_or_else(|| Error::NotHomogeneous("hypersurface equation must be a nonzero form".into()))?;
    if d == 0 {
        return Err(Error::Precondition("hypersurface must have positive degree".into()));
    }
    if !is_squarefree(g) {
        return Err(Error::NotReduced);
    }
    Ok(d)
}

/// The generators `δ_i(g)` of the logarithmic Jacobian ideal, after checking
/// the derivations are logarithmic along `V(h)`.
pub fn log_jacobian_ideal(h: &QPoly, g: &QPoly, basis: &[Derivation]) -> Result<Ideal<BigRational>> {
    for (index, der) in basis.iter().enumerate() {
        if !der.is_logarithmic(h) {
            return Err(Error::NotLogarithmic { index });
        }
    }
    Ok(Ideal::new(g.nvars(), basis.iter().map(|der| der.apply(g))))
}

/// `c_*(1_{P^n \ (V ∪ D)})` for a linear free `D` from the multidegrees of the
/// map `[δ_0(g) : ... : δ_n(g)]`.
#[derive(Clone, Debug)]
pub struct LinearFreeCsm {
    pub class: ChowClass,
    pub multidegrees: MultiDegrees,
}

pub fn csm_complement_linear_free(
    h: &QPoly,
    g: &QPoly,
    basis: &[Derivation],
    policy: &TrialPolicy,
) -> Result<LinearFreeCsm> {
    check_reduced_form(g)?;
    let cert = saito_check(h, basis)?;
    if !cert.free || cert.exponents.iter().any(|&e| e != 1) {
        return Err(Error::NotLinearFree);
    }
    let ideal = log_jacobian_ideal(h, g, basis)?;
    if ideal.gens().len() < basis.len() {
        return Err(Error::NonTransverse("some δ_i(g) vanishes identically".into()));
    }
    if ideal.gens().len() == basis.len() && g.nvars() > 1 {
        // V inside D makes every δ_i(g) a multiple of g.
        if ideal.gens().iter().all(|f| f.div_exact(g).is_some()) {
            return Err(Error::NonTransverse("hypersurface lies in the divisor".into()));
        }
    }
    let md = multidegrees_of_forms(ideal.gens(), policy)?;
    Ok(LinearFreeCsm { class: csm_from_log_multidegrees(&md.values), multidegrees: md })
}

/// `c(TM(-log D)) c(O(V))^{-1} ∩ ([M] - s^∨ ⊗ O(V))`.
pub fn csm_complement_union(c_log: &ChowClass, deg_v: u32, s: &ChowClass) -> Result<ChowClass> {
    let n = c_log.n();
    if s.n() != n {
        return Err(Error::DimensionMismatch("classes on different projective spaces".into()));
    }
    let d = deg_v as i64;
    let inner = &ChowClass::one(n) - &s.dual().tensor(d);
    Ok(&(c_log * &ChowClass::one_plus(n, d).inverse()?) * &inner)
}

/// Both sides of the double restriction: `(c_*(1_{V\D}), c_*(1_{M\(V∪D)}))`.
pub fn csm_double_restriction(
    n: usize,
    exponents: &[u32],
    deg_v: u32,
    s: &ChowClass,
) -> Result<(ChowClass, ChowClass)> {
    let c_log = chern_log_tangent(n, exponents)?;
    if s.n() != n {
        return Err(Error::DimensionMismatch(format!("Segre class lives on P^{}, expected P^{n}", s.n())));
    }
    let union = csm_complement_union(&c_log, deg_v, s)?;
    let v_minus_d = &c_log - &union;
    Ok((v_minus_d, union))
}

/// Gradient multidegrees against the binomial coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SehVerdict {
    pub multidegrees: Vec<u64>,
    pub binomials: Vec<u64>,
    /// Necessary condition only: a pass is consistent with SEH, not a proof.
    pub pass: bool,
    pub first_mismatch: Option<usize>,
}

pub fn seh_verdict(n: usize, g: &[u64]) -> SehVerdict {
    let binomials: Vec<u64> = (0..=n as u64).map(|i| binomial(n as u64, i)).collect();
    let first_mismatch = g.iter().zip(&binomials).position(|(a, b)| a != b);
    SehVerdict { multidegrees: g.to_vec(), binomials, pass: first_mismatch.is_none(), first_mismatch }
}

fn check_linear_free_degree(f: &QPoly) -> Result<()> {
    let d = check_reduced_form(f)?;
    if d as usize != f.nvars() {
        return Err(Error::Precondition(format!(
            "a linear free divisor in {} variables has degree {}, got {d}",
            f.nvars(),
            f.nvars()
        )));
    }
    Ok(())
}

/// `g_i = binom(n, i)` for the gradient map of `f`.
pub fn seh_numerical_test(f: &QPoly, policy: &TrialPolicy) -> Result<SehVerdict> {
    check_linear_free_degree(f)?;
    let map = RationalMap::gradient(f)?;
    let md = multidegrees_of_forms(map.forms(), policy)?;
    Ok(seh_verdict(f.nvars() - 1, &md.values))
}

/// Certificate that the logarithmic comparison theorem fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LctObstruction {
    pub index: usize,
    pub multidegree: u64,
    pub binomial: u64,
}

pub fn lct_obstruction_from(verdict: &SehVerdict) -> Option<LctObstruction> {
    verdict.first_mismatch.map(|i| LctObstruction {
        index: i,
        multidegree: verdict.multidegrees[i],
        binomial: verdict.binomials[i],
    })
}

pub fn lct_obstruction(f: &QPoly, policy: &TrialPolicy) -> Result<Option<LctObstruction>> {
    Ok(lct_obstruction_from(&seh_numerical_test(f, policy)?))
}

/// Segre class of `J_D = (∂_0 f, ..., ∂_n f)` together with the round trip
/// through the gradient relation.
#[derive(Clone, Debug)]
pub struct JacobianSegre {
    pub segre: SegreResult,
    pub gradient_multidegrees: Vec<u64>,
    /// `Σ(-1)^i g_i [P^{n-i}] = (1+(d-1)H)^{-1} ∩ ([P^n] - s^∨ ⊗ O(d-1))` holds exactly.
    pub round_trip: bool,
}

pub fn jacobian_segre(f: &QPoly, policy: &TrialPolicy) -> Result<JacobianSegre> {
    let d = check_reduced_form(f)?;
    let n = f.nvars() - 1;
    let partials: Vec<QPoly> = (0..f.nvars()).map(|i| f.derivative(i)).collect();
    let segre = segre_class_of_ideal(&partials, f.nvars(), false, policy)?;
    let g: Vec<u64> = segre.multidegrees.as_ref().map(|m| m.values.clone()).unwrap_or_default();
    let back = crate::degrees::multidegrees_from_segre(n, d - 1, &segre.class)?;
    let round_trip = back.iter().zip(&g).all(|(a, b)| *a == *b as i64) && back.len() == g.len();
    Ok(JacobianSegre { segre, gradient_multidegrees: g, round_trip })
}

/// `(1 + H)^k` as a class on `P^n`.
pub fn one_plus_h_pow(n: usize, k: u32) -> ChowClass {
    ChowClass::one_plus(n, 1).pow(k)
}

#[cfg(test)]
mod tests;
