//! Central hyperplane arrangements: intersection lattices, characteristic
//! polynomials, exponents and the `b_k(V, log A)` invariants.

mod charpoly;

use std::collections::HashSet;
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

pub use charpoly::CharPoly;

use crate::classes::{
    check_reduced_form, chern_log_tangent, csm_double_restriction, euler_char, log_jacobian_ideal, ChowClass,
};
use crate::degrees::{segre_class_of_ideal, SegreResult, TrialPolicy};
use crate::error::{Error, Result};
use crate::linalg;
use crate::logder::{free_basis, Derivation, Freeness};
use crate::poly::{parse_poly, Monomial, QPoly};

/// Default cap on the number of flats.
pub const DEFAULT_FLAT_BOUND: usize = 100_000;

/// A flat, recorded by the hyperplanes containing it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flat {
    pub members: Vec<usize>,
    pub rank: usize,
    pub mobius: i64,
}

#[derive(Clone, Debug)]
pub struct Lattice {
    nvars: usize,
    flats: Vec<Flat>,
}

impl Lattice {
    /// Flats sorted by rank; the first one is the whole space.
    pub fn flats(&self) -> &[Flat] {
        &self.flats
    }

    pub fn len(&self) -> usize {
        self.flats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flats.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.flats.iter().map(|f| f.rank).max().unwrap_or(0)
    }

    /// `Σ_{Y ≤ X} μ(Y) = 0` for every flat above the bottom.
    pub fn whitney_holds(&self) -> bool {
        self.flats.iter().skip(1).all(|x| {
            let s: i64 = self.flats.iter().filter(|y| is_subset(&y.members, &x.members)).map(|y| y.mobius).sum();
            s == 0
        })
    }

    /// `χ(t) = Σ μ(X) t^{dim X}`.
    pub fn char_poly(&self) -> CharPoly {
        let mut c = vec![0i64; self.nvars + 1];
        for f in &self.flats {
            c[self.nvars - f.rank] += f.mobius;
        }
        CharPoly::new(c)
    }

    /// `π(t) = Σ μ(X) (-t)^{rank X}`.
    pub fn poincare(&self) -> CharPoly {
        let mut c = vec![0i64; self.rank() + 1];
        for f in &self.flats {
            c[f.rank] += if f.rank % 2 == 0 { f.mobius } else { -f.mobius };
        }
        CharPoly::new(c)
    }
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    let mut it = b.iter();
    a.iter().all(|x| it.any(|y| y == x))
}

/// A central arrangement of pairwise non-proportional linear forms.
#[derive(Clone)]
pub struct Arrangement {
    nvars: usize,
    rows: Vec<Vec<BigRational>>,
    flat_bound: usize,
    lattice: OnceLock<std::result::Result<Lattice, Error>>,
    freeness: OnceLock<std::result::Result<Freeness, Error>>,
}

fn linear_row(f: &QPoly) -> Result<Vec<BigRational>> {
    if f.is_zero() {
        return Err(Error::InvalidArrangement("zero form".into()));
    }
    if f.homogeneous_degree() != Some(1) {
        return Err(Error::InvalidArrangement(format!("{f} is not a linear form")));
    }
    let n = f.nvars();
    Ok((0..n).map(|i| f.coeff_of(&Monomial::var(n, i)).cloned().unwrap_or_else(BigRational::zero)).collect())
}

impl Arrangement {
    pub fn new(nvars: usize, forms: &[QPoly]) -> Result<Self> {
        let mut rows = Vec::with_capacity(forms.len());
        for f in forms {
            if f.nvars() != nvars {
                return Err(Error::DimensionMismatch(format!("form in {} variables, expected {nvars}", f.nvars())));
            }
            rows.push(linear_row(f)?);
        }
        Self::from_rows(nvars, rows)
    }

    /// Forms given by coefficient vectors.
    pub fn from_rows(nvars: usize, rows: Vec<Vec<BigRational>>) -> Result<Self> {
        for (i, r) in rows.iter().enumerate() {
            if r.len() != nvars {
                return Err(Error::DimensionMismatch(format!(
                    "form {i} has {} coefficients, expected {nvars}",
                    r.len()
                )));
            }
            if r.iter().all(|c| c.is_zero()) {
                return Err(Error::InvalidArrangement(format!("form {i} is zero")));
            }
            for (j, s) in rows[..i].iter().enumerate() {
                if linalg::rank(&[s.clone(), r.clone()], nvars) < 2 {
                    return Err(Error::InvalidArrangement(format!("forms {j} and {i} are proportional")));
                }
            }
        }
        Ok(Arrangement {
            nvars,
            rows,
            flat_bound: DEFAULT_FLAT_BOUND,
            lattice: OnceLock::new(),
            freeness: OnceLock::new(),
        })
    }

    pub fn from_ints(nvars: usize, rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(
            nvars,
            rows.iter().map(|r| r.iter().map(|&c| BigRational::from_integer(BigInt::from(c))).collect()).collect(),
        )
    }

    /// One linear form per nonblank line.
    pub fn parse<S: AsRef<str>>(src: &str, vars: &[S]) -> Result<Self> {
        let forms = src
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(|l| parse_poly(l, vars).map_err(Error::from))
            .collect::<Result<Vec<_>>>()?;
        Self::new(vars.len(), &forms)
    }

    pub fn with_flat_bound(mut self, bound: usize) -> Self {
        self.flat_bound = bound;
        self.lattice = OnceLock::new();
        self
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[Vec<BigRational>] {
        &self.rows
    }

    pub fn form(&self, i: usize) -> QPoly {
        QPoly::from_terms(
            self.nvars,
            self.rows[i].iter().enumerate().map(|(j, c)| (Monomial::var(self.nvars, j), c.clone())),
        )
    }

    pub fn forms(&self) -> Vec<QPoly> {
        (0..self.len()).map(|i| self.form(i)).collect()
    }

    /// Index of the hyperplane `V(f)`, if present.
    pub fn position(&self, f: &QPoly) -> Option<usize> {
        let r = linear_row(f).ok()?;
        self.rows.iter().position(|s| linalg::rank(&[s.clone(), r.clone()], self.nvars) < 2)
    }

    /// The defining polynomial `Π l_i`.
    pub fn product(&self) -> QPoly {
        (0..self.len()).fold(QPoly::from_int(self.nvars, 1), |acc, i| &acc * &self.form(i))
    }

    pub fn lattice(&self) -> Result<&Lattice> {
        self.lattice
            .get_or_init(|| build_lattice(self.nvars, &self.rows, self.flat_bound))
            .as_ref()
            .map_err(Clone::clone)
    }

    pub fn char_poly(&self) -> Result<CharPoly> {
        Ok(self.lattice()?.char_poly())
    }

    pub fn poincare(&self) -> Result<CharPoly> {
        Ok(self.lattice()?.poincare())
    }

    /// Affine characteristic polynomial after sending `l_pivot` to infinity.
    pub fn decone(&self, pivot: usize) -> Result<CharPoly> {
        if pivot >= self.len() {
            return Err(Error::Precondition(format!("pivot {pivot} is not a hyperplane of the arrangement")));
        }
        let (q, r) = self.char_poly()?.div_linear(1);
        if r != 0 {
            return Err(Error::Precondition(format!("characteristic polynomial has remainder {r} at t = 1")));
        }
        Ok(q)
    }

    pub fn delete(&self, i: usize) -> Arrangement {
        let rows = self.rows.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, r)| r.clone()).collect();
        Arrangement { rows, lattice: OnceLock::new(), freeness: OnceLock::new(), ..self.clone() }
    }

    /// `A|H_i`, in coordinates on `H_i` obtained by solving for its first variable.
    pub fn restrict(&self, i: usize) -> Arrangement {
        let l = &self.rows[i];
        let j = l.iter().position(|c| !c.is_zero()).expect("forms are nonzero");
        let mut seen = HashSet::new();
        let mut rows = Vec::new();
        for (k, r) in self.rows.iter().enumerate() {
            if k == i {
                continue;
            }
            let t = &r[j] / &l[j];
            let v: Vec<BigRational> =
                r.iter().zip(l).enumerate().filter(|&(c, _)| c != j).map(|(_, (a, b))| a - &t * b).collect();
            let key = linalg::primitive_vector(&v);
            if seen.insert(key.clone()) {
                rows.push(key);
            }
        }
        Arrangement {
            nvars: self.nvars - 1,
            rows,
            flat_bound: self.flat_bound,
            lattice: OnceLock::new(),
            freeness: OnceLock::new(),
        }
    }

    /// Homogeneous basis of the logarithmic derivations, cached.
    pub fn freeness(&self) -> Result<&Freeness> {
        self.freeness
            .get_or_init(|| {
                if self.is_empty() {
                    return Err(Error::InvalidArrangement("empty arrangement".into()));
                }
                free_basis(&self.product(), Some(self.len() as u32))
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    fn free_data(&self) -> Result<(&[Derivation], Vec<u32>)> {
        match self.freeness()? {
            Freeness::Free { basis, certificate } => Ok((basis, certificate.exponents.clone())),
            Freeness::NotFree { reason } => Err(Error::NotFree(reason.clone())),
        }
    }

    /// Sorted exponents of a free arrangement.
    pub fn exponents(&self) -> Result<Vec<u32>> {
        Ok(self.free_data()?.1)
    }

    pub fn log_basis(&self) -> Result<&[Derivation]> {
        Ok(self.free_data()?.0)
    }

    /// `t · Σ_k c_{n-k} t^k == χ_A(t+1)` for `c = c(TP^n(-log A))` built from
    /// the given exponents. The arrangement itself must be certified free.
    pub fn aluffi_identity_check(&self, exponents: &[u32]) -> Result<bool> {
        self.free_data()?;
        let n = self.nvars - 1;
        let c = chern_log_tangent(n, exponents)?.to_i64s()?;
        let mut lhs = vec![0i64; n + 2];
        for k in 0..=n {
            lhs[k + 1] = c[n - k];
        }
        Ok(CharPoly::new(lhs) == self.char_poly()?.shift(1))
    }

    /// `χ_A(t) = Π (t - d_i)` over the exponents.
    pub fn terao_factorization_holds(&self) -> Result<bool> {
        let e: Vec<i64> = self.exponents()?.iter().map(|&d| d as i64).collect();
        Ok(CharPoly::from_roots(&e) == self.char_poly()?)
    }

    /// `b_0..b_n` for `V = V(g)`: `b_k` is the coefficient of `x^k` in
    /// `(1+x)^k (1+dx)^{-1} (1 - s(J_V(log A))^∨ ⊗ O(d))`.
    pub fn b_k(&self, g: &QPoly, policy: &TrialPolicy) -> Result<BkData> {
        let d = check_reduced_form(g)?;
        if g.nvars() != self.nvars {
            return Err(Error::DimensionMismatch("hypersurface and arrangement in different rings".into()));
        }
        let (basis, exponents) = self.free_data()?;
        let ideal = log_jacobian_ideal(&self.product(), g, basis)?;
        let segre = segre_class_of_ideal(ideal.gens(), self.nvars, true, policy)?;
        let b = bk_from_segre(self.nvars - 1, d, &segre.class)?;
        Ok(BkData { b, degree: d, exponents, segre })
    }

    /// `Σ a_k b_k` with `a` from deconing at `pivot`, cross-checked against
    /// `χ(P^n \ (V ∪ A))` from the double restriction formula.
    pub fn euler_via_akbk(&self, g: &QPoly, pivot: usize, policy: &TrialPolicy) -> Result<AkBkReport> {
        let a = self.decone(pivot)?.coeffs().to_vec();
        let bk = self.b_k(g, policy)?;
        let euler: i64 = a.iter().zip(&bk.b).map(|(x, y)| x * y).sum();
        let (_, union) = csm_double_restriction(self.nvars - 1, &bk.exponents, bk.degree, &bk.segre.class)?;
        let double_restriction = euler_char(&union)?;
        let agree = double_restriction == BigInt::from(euler);
        let mut assumptions = vec!["1_V is log transverse to the arrangement".to_string()];
        if bk.segre.equalized {
            assumptions.push("log Jacobian generators brought to a common degree by monomial multiples".into());
        }
        Ok(AkBkReport { a, b: bk.b, euler, double_restriction, agree, segre: bk.segre, assumptions })
    }
}

/// The `b_k` from a Segre class on `P^n` and `deg V = d`.
pub fn bk_from_segre(n: usize, d: u32, s: &ChowClass) -> Result<Vec<i64>> {
    if s.n() != n {
        return Err(Error::DimensionMismatch(format!("Segre class on P^{}, expected P^{n}", s.n())));
    }
    let d = d as i64;
    let inner = &ChowClass::one(n) - &s.dual().tensor(d);
    let base = &ChowClass::one_plus(n, d).inverse()? * &inner;
    (0..=n)
        .map(|k| {
            let l = &ChowClass::one_plus(n, 1).pow(k as u32) * &base;
            let c = l.codim(k);
            if !c.is_integer() {
                return Err(Error::NonIntegral(c.to_string()));
            }
            i64::try_from(c.to_integer()).map_err(|_| Error::NonIntegral("b_k exceeds 64 bits".into()))
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct BkData {
    pub b: Vec<i64>,
    pub degree: u32,
    pub exponents: Vec<u32>,
    pub segre: SegreResult,
}

#[derive(Clone, Debug)]
pub struct AkBkReport {
    pub a: Vec<i64>,
    pub b: Vec<i64>,
    pub euler: i64,
    pub double_restriction: BigInt,
    pub agree: bool,
    pub segre: SegreResult,
    pub assumptions: Vec<String>,
}

fn build_lattice(nvars: usize, rows: &[Vec<BigRational>], bound: usize) -> std::result::Result<Lattice, Error> {
    let m = rows.len();
    let mut flats = vec![Flat { members: Vec::new(), rank: 0, mobius: 1 }];
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    seen.insert(Vec::new());
    let mut layer = vec![0usize];
    while !layer.is_empty() {
        let mut next = Vec::new();
        for &fi in &layer {
            let (members, rank) = (flats[fi].members.clone(), flats[fi].rank);
            for i in (0..m).filter(|i| !members.contains(i)) {
                let mut base: Vec<Vec<BigRational>> = members.iter().map(|&j| rows[j].clone()).collect();
                base.push(rows[i].clone());
                let closure: Vec<usize> = (0..m)
                    .filter(|&j| {
                        j == i || members.contains(&j) || {
                            base.push(rows[j].clone());
                            let r = linalg::rank(&base, nvars);
                            base.pop();
                            r == rank + 1
                        }
                    })
                    .collect();
                if seen.insert(closure.clone()) {
                    if flats.len() >= bound {
                        return Err(Error::TooManyFlats(bound));
                    }
                    flats.push(Flat { members: closure, rank: rank + 1, mobius: 0 });
                    next.push(flats.len() - 1);
                }
            }
        }
        layer = next;
    }
    for x in 1..flats.len() {
        let s: i64 = flats[..x]
            .iter()
            .filter(|y| y.rank < flats[x].rank && is_subset(&y.members, &flats[x].members))
            .map(|y| y.mobius)
            .sum();
        flats[x].mobius = -s;
    }
    Ok(Lattice { nvars, flats })
}

impl fmt::Debug for Arrangement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Arrangement").field("nvars", &self.nvars).field("forms", &self.forms()).finish()
    }
}

impl fmt::Display for Arrangement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let forms: Vec<String> = self.forms().iter().map(|l| l.to_string()).collect();
        write!(f, "{{{}}}", forms.join(", "))
    }
}

impl PartialEq for Arrangement {
    fn eq(&self, other: &Self) -> bool {
        self.nvars == other.nvars && self.rows == other.rows
    }
}

#[cfg(test)]
mod tests;
