//! Multidegrees of rational maps of projective space and Segre classes of
//! homogeneous ideals.
//!
//! The `k`-th multidegree is the number of points of a generic `P^k` whose
//! image lies in a generic codimension-`k` linear space, away from the base
//! locus. Each trial restricts the forms to a random `P^k`, cuts with `k`
//! random combinations and removes the base locus by saturating with one more
//! random combination. Trials run over random primes and are accepted by
//! agreement; `exact` re-runs the accepted value over the rationals with a
//! full saturation by the restricted base ideal.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::classes::ChowClass;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::groebner::Ideal;
use crate::poly::{random_prime, Coeff, Fp, MPoly, Monomial, QPoly};

/// A rational map given by forms of one common degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMap {
    forms: Vec<QPoly>,
    degree: u32,
}

impl RationalMap {
    pub fn new(forms: Vec<QPoly>) -> Result<Self> {
        let nonzero: Vec<&QPoly> = forms.iter().filter(|f| !f.is_zero()).collect();
        if nonzero.is_empty() {
            return Err(Error::ZeroMap);
        }
        let nvars = forms[0].nvars();
        if forms.iter().any(|f| f.nvars() != nvars) {
            return Err(Error::DimensionMismatch("forms live in different rings".into()));
        }
        let mut degree = None;
        for f in &nonzero {
            let d = f.homogeneous_degree().ok_or_else(|| Error::NotHomogeneous(f.to_string()))?;
            match degree {
                None => degree = Some(d),
                Some(e) if e != d => return Err(Error::MixedDegrees),
                _ => {}
            }
        }
        Ok(RationalMap { forms, degree: degree.unwrap() })
    }

    /// `[∂_0 f : ... : ∂_n f]`.
    pub fn gradient(f: &QPoly) -> Result<Self> {
        RationalMap::new((0..f.nvars()).map(|i| f.derivative(i)).collect())
    }

    pub fn forms(&self) -> &[QPoly] {
        &self.forms
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn nvars(&self) -> usize {
        self.forms[0].nvars()
    }

    /// Dimension `n` of the source `P^n`.
    pub fn n(&self) -> usize {
        self.nvars() - 1
    }
}

/// Brings homogeneous generators to one degree by multiplying each with all
/// monomials of the missing degree. The saturation, hence the subscheme of
/// projective space and its Segre class, is unchanged.
pub fn equalize_degrees(gens: &[QPoly]) -> Result<(Vec<QPoly>, u32, bool)> {
    let gens: Vec<&QPoly> = gens.iter().filter(|g| !g.is_zero()).collect();
    let mut degs = Vec::with_capacity(gens.len());
    for g in &gens {
        degs.push(g.homogeneous_degree().ok_or_else(|| Error::NotHomogeneous(g.to_string()))?);
    }
    let Some(&top) = degs.iter().max() else {
        return Ok((Vec::new(), 0, false));
    };
    let mixed = degs.iter().any(|&d| d != top);
    let mut out = Vec::new();
    for (g, &d) in gens.iter().zip(&degs) {
        if d == top {
            out.push((*g).clone());
        } else {
            for m in Monomial::all_of_degree(g.nvars(), top - d) {
                out.push(g.mul_term(&m, &crate::poly::q(1)));
            }
        }
    }
    Ok((out, top, mixed))
}

/// Agreement policy for the randomized computations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TrialPolicy {
    pub seed: u64,
    pub prime_bits: u32,
    /// Independent trials that must agree before escalating.
    pub agree: usize,
    /// Total trials after escalation; a value must be seen by a strict majority.
    pub escalate_to: usize,
    /// Resamples allowed inside one trial for non-generic choices.
    pub retries: usize,
    /// Re-verify accepted values over the rationals.
    pub exact: bool,
    pub exec: Exec,
}

impl Default for TrialPolicy {
    fn default() -> Self {
        TrialPolicy {
            seed: 0,
            prime_bits: 31,
            agree: 2,
            escalate_to: 5,
            retries: 8,
            exact: false,
            exec: Exec::default(),
        }
    }
}

impl TrialPolicy {
    pub fn with_seed(seed: u64) -> Self {
        TrialPolicy { seed, ..Default::default() }
    }

    fn validate(&self) -> Result<()> {
        if self.agree < 2 || self.escalate_to < self.agree {
            return Err(Error::Precondition("trial policy needs agree >= 2 and escalate_to >= agree".into()));
        }
        if !(2..=62).contains(&self.prime_bits) {
            return Err(Error::Precondition(format!("prime size {} bits out of range", self.prime_bits)));
        }
        Ok(())
    }
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Deterministic sub-seed for task `(k, trial)`.
pub fn sub_seed(seed: u64, k: usize, trial: usize) -> u64 {
    splitmix(seed ^ splitmix((k as u64) << 32 | trial as u64))
}

/// One accepted or rejected attempt.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trial {
    pub seed: u64,
    /// `None` for the exact rational run.
    pub prime: Option<u64>,
    pub value: u64,
    pub resamples: usize,
}

/// How `d_k` was obtained.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Provenance {
    pub k: usize,
    pub trials: Vec<Trial>,
    pub escalated: bool,
    pub exact: Option<Trial>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiDegrees {
    pub values: Vec<u64>,
    pub provenance: Vec<Provenance>,
}

impl MultiDegrees {
    pub fn n(&self) -> usize {
        self.values.len() - 1
    }
}

enum Outcome {
    Value(u64),
    NonGeneric(String),
}

/// `d_k` over the coefficient field of `forms`, with random choices drawn by `sample`.
fn degree_k<C: Coeff>(forms: &[MPoly<C>], k: usize, exact: bool, sample: &mut dyn FnMut() -> C) -> Outcome {
    let nvars = forms[0].nvars();
    let restricted: Vec<MPoly<C>> = if k + 1 == nvars {
        forms.to_vec()
    } else {
        let images: Vec<MPoly<C>> = (0..nvars)
            .map(|_| MPoly::from_terms(k + 1, (0..=k).map(|j| (Monomial::var(k + 1, j), sample()))))
            .collect();
        forms.iter().map(|f| f.substitute(&images)).collect()
    };
    let combo =
        |sample: &mut dyn FnMut() -> C| restricted.iter().fold(MPoly::zero(k + 1), |acc, f| &acc + &f.scale(&sample()));
    let lambdas: Vec<MPoly<C>> = (0..k).map(|_| combo(sample)).collect();
    let q = Ideal::new(k + 1, lambdas);
    let saturated = if exact {
        let base = Ideal::new(k + 1, restricted.iter().cloned());
        if base.is_zero() {
            return Outcome::NonGeneric("linear section lies in the base locus".into());
        }
        match q.saturate(&base) {
            Ok(s) => s,
            Err(e) => return Outcome::NonGeneric(e.to_string()),
        }
    } else {
        let f = combo(sample);
        if f.is_zero() {
            return Outcome::NonGeneric("saturating form vanished".into());
        }
        q.saturate_by_element(&f)
    };
    let data = saturated.hilbert().expect("homogeneous input");
    match data.dim {
        -1 => Outcome::Value(0),
        0 => Outcome::Value(data.degree),
        d => Outcome::NonGeneric(format!("saturation has dimension {d}")),
    }
}

fn trial_mod_p(forms: &[QPoly], k: usize, bits: u32, retries: usize, seed: u64) -> Result<Trial> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut last = String::new();
    for resamples in 0..=retries {
        let p = random_prime(&mut rng, bits);
        let reduced: Result<Vec<_>> = forms.iter().map(|f| f.reduce_mod_p(p)).collect();
        let Ok(reduced) = reduced else {
            last = format!("denominator vanishes modulo {p}");
            continue;
        };
        if reduced.iter().all(|f| f.is_zero()) {
            last = format!("map vanishes modulo {p}");
            continue;
        }
        let mut sample = || Fp::random(&mut rng, p);
        match degree_k(&reduced, k, false, &mut sample) {
            Outcome::Value(value) => return Ok(Trial { seed, prime: Some(p), value, resamples }),
            Outcome::NonGeneric(why) => last = why,
        }
    }
    Err(Error::Genericity { k, retries, detail: last })
}

fn trial_exact(forms: &[QPoly], k: usize, retries: usize, seed: u64) -> Result<Trial> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut last = String::new();
    for resamples in 0..=retries {
        let mut sample = || BigRational::from_integer(BigInt::from(rng.gen_range(-1000i64..=1000)));
        match degree_k(forms, k, true, &mut sample) {
            Outcome::Value(value) => return Ok(Trial { seed, prime: None, value, resamples }),
            Outcome::NonGeneric(why) => last = why,
        }
    }
    Err(Error::Genericity { k, retries, detail: last })
}

/// Multidegrees `d_0..d_n` of the map given by `forms` (any number of forms
/// of one degree).
pub fn multidegrees_of_forms(forms: &[QPoly], policy: &TrialPolicy) -> Result<MultiDegrees> {
    policy.validate()?;
    let map = RationalMap::new(forms.to_vec())?;
    let forms: Vec<QPoly> = map.forms.iter().filter(|f| !f.is_zero()).cloned().collect();
    let n = map.n();
    let bits = policy.prime_bits;

    let first: Vec<(usize, usize)> = (0..=n).flat_map(|k| (0..policy.agree).map(move |t| (k, t))).collect();
    let results =
        policy.exec.map(&first, |&(k, t)| trial_mod_p(&forms, k, bits, policy.retries, sub_seed(policy.seed, k, t)));
    let mut per_k: Vec<Vec<Trial>> = vec![Vec::new(); n + 1];
    for ((k, _), r) in first.iter().zip(results) {
        per_k[*k].push(r?);
    }

    let disputed: Vec<usize> = (0..=n).filter(|&k| per_k[k].iter().any(|t| t.value != per_k[k][0].value)).collect();
    let extra: Vec<(usize, usize)> =
        disputed.iter().flat_map(|&k| (policy.agree..policy.escalate_to).map(move |t| (k, t))).collect();
    let results =
        policy.exec.map(&extra, |&(k, t)| trial_mod_p(&forms, k, bits, policy.retries, sub_seed(policy.seed, k, t)));
    for ((k, _), r) in extra.iter().zip(results) {
        per_k[*k].push(r?);
    }

    let mut values = Vec::with_capacity(n + 1);
    let mut provenance = Vec::with_capacity(n + 1);
    for (k, trials) in per_k.into_iter().enumerate() {
        let escalated = disputed.contains(&k);
        let mut counts: HashMap<u64, usize> = HashMap::new();
        for t in &trials {
            *counts.entry(t.value).or_default() += 1;
        }
        let (value, count) =
            counts.iter().max_by_key(|(v, c)| (**c, std::cmp::Reverse(**v))).map(|(v, c)| (*v, *c)).unwrap();
        if count * 2 <= trials.len() {
            let seen: Vec<u64> = trials.iter().map(|t| t.value).collect();
            return Err(Error::Genericity { k, retries: trials.len(), detail: format!("trials disagree: {seen:?}") });
        }
        values.push(value);
        provenance.push(Provenance { k, trials, escalated, exact: None });
    }

    if policy.exact {
        let ks: Vec<usize> = (0..=n).collect();
        let checks =
            policy.exec.map(&ks, |&k| trial_exact(&forms, k, policy.retries, sub_seed(policy.seed, k, usize::MAX)));
        for (k, r) in checks.into_iter().enumerate() {
            let t = r?;
            if t.value != values[k] {
                return Err(Error::Genericity {
                    k,
                    retries: 0,
                    detail: format!("exact run gives {} but prime-field trials gave {}", t.value, values[k]),
                });
            }
            provenance[k].exact = Some(t);
        }
    }
    Ok(MultiDegrees { values, provenance })
}

/// Multidegrees of a map `P^n ⇢ P^n` given by exactly `n + 1` forms.
pub fn multidegrees(map: &RationalMap, policy: &TrialPolicy) -> Result<MultiDegrees> {
    if map.forms.len() != map.nvars() {
        return Err(Error::Precondition(format!(
            "multidegrees expects {} forms, got {}; use segre_class_of_ideal for other counts",
            map.nvars(),
            map.forms.len()
        )));
    }
    multidegrees_of_forms(&map.forms, policy)
}

/// The degree of the map, `d_n`.
pub fn map_degree(map: &RationalMap, policy: &TrialPolicy) -> Result<u64> {
    Ok(*multidegrees(map, policy)?.values.last().unwrap())
}

/// `s` from multidegrees of a map of degree `r`:
/// `Σ (-1)^i d_i [P^{n-i}] = c(O(r))^{-1} ∩ ([P^n] - s^∨ ⊗ O(r))`.
pub fn segre_from_multidegrees(n: usize, r: u32, d: &[u64]) -> Result<ChowClass> {
    if d.len() != n + 1 {
        return Err(Error::DimensionMismatch(format!("need {} multidegrees, got {}", n + 1, d.len())));
    }
    let g = ChowClass::new(
        n,
        d.iter().enumerate().map(|(i, &v)| {
            let v = BigRational::from_integer(BigInt::from(v));
            if i % 2 == 1 {
                -v
            } else {
                v
            }
        }),
    );
    let twisted = &ChowClass::one(n) - &(&ChowClass::one_plus(n, r as i64) * &g);
    let s = twisted.tensor(-(r as i64)).dual();
    s.to_integers()?;
    Ok(s)
}

/// Inverse of [`segre_from_multidegrees`].
pub fn multidegrees_from_segre(n: usize, r: u32, s: &ChowClass) -> Result<Vec<i64>> {
    let rhs = &ChowClass::one(n) - &s.dual().tensor(r as i64);
    let g = &ChowClass::one_plus(n, r as i64).inverse()? * &rhs;
    let ints = g.to_i64s()?;
    Ok(ints.iter().enumerate().map(|(i, &v)| if i % 2 == 1 { -v } else { v }).collect())
}

/// Segre class with the data used to obtain it.
#[derive(Clone, Debug)]
pub struct SegreResult {
    pub class: ChowClass,
    pub multidegrees: Option<MultiDegrees>,
    /// Common degree of the generators actually used.
    pub degree: u32,
    pub generators_used: usize,
    /// Generators were brought to a common degree by monomial multiples.
    pub equalized: bool,
}

/// `s(I, P^n)` for the ideal generated by `gens`. Generators of mixed degree
/// are refused unless `equalize` is set.
pub fn segre_class_of_ideal(gens: &[QPoly], nvars: usize, equalize: bool, policy: &TrialPolicy) -> Result<SegreResult> {
    let n = nvars.checked_sub(1).ok_or_else(|| Error::Precondition("empty ring".into()))?;
    let nonzero: Vec<QPoly> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    let empty = |degree| SegreResult {
        class: ChowClass::zero(n),
        multidegrees: None,
        degree,
        generators_used: 0,
        equalized: false,
    };
    if nonzero.is_empty() {
        return Ok(empty(0));
    }
    if nonzero.iter().any(|g| g.is_constant()) {
        return Ok(empty(0));
    }
    let (forms, r, mixed) = equalize_degrees(&nonzero)?;
    if mixed && !equalize {
        return Err(Error::MixedDegrees);
    }
    let md = multidegrees_of_forms(&forms, policy)?;
    let class = segre_from_multidegrees(n, r, &md.values)?;
    Ok(SegreResult { class, multidegrees: Some(md), degree: r, generators_used: forms.len(), equalized: mixed })
}
