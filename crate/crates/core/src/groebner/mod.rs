//! Gröbner bases and the ideal operations built on them.

mod buchberger;
mod gcd;
mod hilbert;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use crate::error::{Error, Result};
use crate::poly::{Coeff, MPoly, Monomial, MonomialOrder};

use buchberger::{from_terms, reduced_basis, to_terms, Reducers, Terms};

pub use gcd::{gcd, is_squarefree};
pub use hilbert::{dim_degree, hilbert_numerator, HilbertData};

/// Bound on saturation rounds.
pub const SATURATION_ROUNDS: usize = 64;

struct Basis<C> {
    polys: Vec<MPoly<C>>,
    terms: Vec<Terms<C>>,
}

/// Ideal of a polynomial ring with memoized reduced Gröbner bases.
pub struct Ideal<C: Coeff> {
    nvars: usize,
    gens: Vec<MPoly<C>>,
    cache: RwLock<HashMap<MonomialOrder, Arc<Basis<C>>>>,
}

impl<C: Coeff> Clone for Ideal<C> {
    fn clone(&self) -> Self {
        let cache = self.cache.read().unwrap().clone();
        Ideal { nvars: self.nvars, gens: self.gens.clone(), cache: RwLock::new(cache) }
    }
}

impl<C: Coeff> fmt::Debug for Ideal<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.gens).finish()
    }
}

impl<C: Coeff> Ideal<C> {
    /// Zero generators are dropped.
    pub fn new(nvars: usize, gens: impl IntoIterator<Item = MPoly<C>>) -> Self {
        let gens: Vec<MPoly<C>> = gens.into_iter().filter(|g| !g.is_zero()).collect();
        for g in &gens {
            assert_eq!(g.nvars(), nvars, "generator lives in a different ring");
        }
        Ideal { nvars, gens, cache: RwLock::new(HashMap::new()) }
    }

    pub fn zero(nvars: usize) -> Self {
        Ideal::new(nvars, [])
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn gens(&self) -> &[MPoly<C>] {
        &self.gens
    }

    pub fn is_homogeneous(&self) -> bool {
        self.gens.iter().all(|g| g.is_homogeneous())
    }

    fn basis_entry(&self, order: MonomialOrder) -> Arc<Basis<C>> {
        if let Some(b) = self.cache.read().unwrap().get(&order) {
            return b.clone();
        }
        let input: Vec<Terms<C>> = self.gens.iter().map(|g| to_terms(g, order)).collect();
        let terms = reduced_basis(&input, order);
        let polys = terms.iter().map(|t| from_terms(self.nvars, t.clone())).collect();
        let entry = Arc::new(Basis { polys, terms });
        // Identical values may race in; whichever lands first is kept.
        self.cache.write().unwrap().entry(order).or_insert(entry).clone()
    }

    /// Reduced Gröbner basis: monic, inter-reduced, sorted by increasing
    /// leading monomial.
    pub fn groebner_basis(&self, order: MonomialOrder) -> Vec<MPoly<C>> {
        self.basis_entry(order).polys.clone()
    }

    pub fn leading_monomials(&self, order: MonomialOrder) -> Vec<Monomial> {
        self.basis_entry(order).terms.iter().map(|t| t[0].0.clone()).collect()
    }

    pub fn normal_form(&self, p: &MPoly<C>, order: MonomialOrder) -> MPoly<C> {
        assert_eq!(p.nvars(), self.nvars, "polynomial lives in a different ring");
        let b = self.basis_entry(order);
        let red = Reducers::new(b.terms.iter().map(|t| t.as_slice()));
        from_terms(self.nvars, red.reduce(to_terms(p, order), order))
    }

    pub fn contains(&self, p: &MPoly<C>) -> bool {
        p.is_zero() || self.normal_form(p, MonomialOrder::Grevlex).is_zero()
    }

    pub fn contains_ideal(&self, other: &Ideal<C>) -> bool {
        other.gens.iter().all(|g| self.contains(g))
    }

    pub fn same_ideal(&self, other: &Ideal<C>) -> bool {
        self.contains_ideal(other) && other.contains_ideal(self)
    }

    pub fn is_unit(&self) -> bool {
        let b = self.basis_entry(MonomialOrder::Grevlex);
        b.terms.len() == 1 && b.terms[0][0].0.is_one()
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    fn one(&self) -> Option<C> {
        self.gens.first().and_then(|g| g.sample_coeff()).map(|c| c.one_like())
    }

    pub fn unit(nvars: usize, one: C) -> Self {
        Ideal::new(nvars, [MPoly::constant(nvars, one)])
    }

    pub fn sum(&self, other: &Ideal<C>) -> Ideal<C> {
        Ideal::new(self.nvars, self.gens.iter().chain(&other.gens).cloned())
    }

    pub fn with_gens(&self, extra: impl IntoIterator<Item = MPoly<C>>) -> Ideal<C> {
        Ideal::new(self.nvars, self.gens.iter().cloned().chain(extra))
    }

    /// `I ∩ J`, eliminating `t` from `t·I + (1 - t)·J`.
    pub fn intersect(&self, other: &Ideal<C>) -> Ideal<C> {
        if self.is_zero() || other.is_zero() {
            return Ideal::zero(self.nvars);
        }
        let n = self.nvars;
        let shift: Vec<usize> = (1..=n).collect();
        let one = self.one().unwrap();
        let t = MPoly::var(n + 1, 0, one.clone());
        let one_minus_t = &MPoly::constant(n + 1, one) - &t;
        let mut gens = Vec::new();
        for g in &self.gens {
            gens.push(&t * &g.rename_vars(n + 1, &shift));
        }
        for g in &other.gens {
            gens.push(&one_minus_t * &g.rename_vars(n + 1, &shift));
        }
        drop_leading_block(n + 1, 1, &gens)
    }

    /// `I : f`.
    pub fn quotient(&self, f: &MPoly<C>) -> Ideal<C> {
        if f.is_zero() {
            return match self.one() {
                Some(one) => Ideal::unit(self.nvars, one),
                None => Ideal::zero(self.nvars),
            };
        }
        if self.is_zero() {
            return Ideal::zero(self.nvars);
        }
        if f.is_constant() {
            return self.clone();
        }
        let meet = self.intersect(&Ideal::new(self.nvars, [f.clone()]));
        let gens = meet
            .groebner_basis(MonomialOrder::Grevlex)
            .iter()
            .map(|g| g.div_exact(f).expect("generator of I ∩ (f) is divisible by f"))
            .collect::<Vec<_>>();
        Ideal::new(self.nvars, gens)
    }

    /// `I : J = ∩ (I : f)` over the generators of `J`.
    pub fn quotient_ideal(&self, j: &Ideal<C>) -> Ideal<C> {
        let mut parts = j.gens.iter().map(|f| self.quotient(f));
        let Some(first) = parts.next() else {
            return match self.one() {
                Some(one) => Ideal::unit(self.nvars, one),
                None => Ideal::zero(self.nvars),
            };
        };
        parts.fold(first, |acc, q| acc.intersect(&q))
    }

    /// `I : J^∞` by iterated quotients until the chain stabilizes.
    pub fn saturate(&self, j: &Ideal<C>) -> Result<Ideal<C>> {
        let mut k = self.clone();
        for _ in 0..SATURATION_ROUNDS {
            let next = k.quotient_ideal(j);
            if k.contains_ideal(&next) {
                return Ok(k);
            }
            k = Ideal::new(self.nvars, next.groebner_basis(MonomialOrder::Grevlex));
        }
        Err(Error::SaturationBound(SATURATION_ROUNDS))
    }

    /// `I : f^∞`, eliminating `t` from `I + (1 - t·f)`.
    pub fn saturate_by_element(&self, f: &MPoly<C>) -> Ideal<C> {
        if self.is_zero() {
            return Ideal::zero(self.nvars);
        }
        let n = self.nvars;
        let shift: Vec<usize> = (1..=n).collect();
        let one = self.one().unwrap();
        let t = MPoly::var(n + 1, 0, one.clone());
        let mut gens: Vec<MPoly<C>> = self.gens.iter().map(|g| g.rename_vars(n + 1, &shift)).collect();
        gens.push(&MPoly::constant(n + 1, one) - &(&t * &f.rename_vars(n + 1, &shift)));
        drop_leading_block(n + 1, 1, &gens)
    }

    /// `I ∩ k[x_keep]`, returned in the same ring.
    pub fn eliminate(&self, keep: &[usize]) -> Ideal<C> {
        let n = self.nvars;
        let drop: Vec<usize> = (0..n).filter(|i| !keep.contains(i)).collect();
        if drop.is_empty() {
            return self.clone();
        }
        // New position of each old variable: eliminated ones first.
        let mut pos = vec![0; n];
        for (k, &i) in drop.iter().chain(keep.iter()).enumerate() {
            pos[i] = k;
        }
        let gens: Vec<MPoly<C>> = self.gens.iter().map(|g| g.rename_vars(n, &pos)).collect();
        let b = drop_leading_block(n, drop.len(), &gens);
        let back: Vec<usize> = keep.to_vec();
        Ideal::new(n, b.gens.iter().map(|g| g.rename_vars(n, &back)))
    }

    /// Projective dimension and degree of a homogeneous ideal.
    pub fn hilbert(&self) -> Result<HilbertData> {
        if !self.is_homogeneous() {
            return Err(Error::NotHomogeneous("Hilbert data needs a homogeneous ideal".into()));
        }
        Ok(dim_degree(self.nvars, &self.leading_monomials(MonomialOrder::Grevlex)))
    }
}

/// Generators of `(gens) ∩ k[x_b, ..., x_{n-1}]`, moved into a ring with
/// `nvars - b` variables.
fn drop_leading_block<C: Coeff>(nvars: usize, b: usize, gens: &[MPoly<C>]) -> Ideal<C> {
    let id = Ideal::new(nvars, gens.iter().cloned());
    let basis = id.groebner_basis(MonomialOrder::Elimination(b));
    let kept = basis.into_iter().filter(|g| g.terms().iter().all(|(m, _)| m.exps()[..b].iter().all(|&e| e == 0)));
    let out: Vec<MPoly<C>> = kept
        .map(|g| {
            MPoly::from_terms(
                nvars - b,
                g.terms().iter().map(|(m, c)| (Monomial::new(m.exps()[b..].to_vec()), c.clone())),
            )
        })
        .collect();
    Ideal::new(nvars - b, out)
}

pub fn groebner_basis<C: Coeff>(ideal: &Ideal<C>, order: MonomialOrder) -> Vec<MPoly<C>> {
    ideal.groebner_basis(order)
}

pub fn normal_form<C: Coeff>(p: &MPoly<C>, ideal: &Ideal<C>, order: MonomialOrder) -> MPoly<C> {
    ideal.normal_form(p, order)
}

pub fn ideal_membership<C: Coeff>(p: &MPoly<C>, ideal: &Ideal<C>) -> bool {
    ideal.contains(p)
}
