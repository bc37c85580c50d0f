//! Hilbert series of monomial ideals.

use crate::poly::Monomial;

/// Projective dimension and degree of `V(I)`; `dim == -1` means empty.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct HilbertData {
    pub dim: i64,
    pub degree: u64,
}

impl HilbertData {
    pub const EMPTY: HilbertData = HilbertData { dim: -1, degree: 0 };

    pub fn is_empty(&self) -> bool {
        self.dim < 0
    }
}

type Poly = Vec<i128>;

fn trim(mut p: Poly) -> Poly {
    while p.last() == Some(&0) {
        p.pop();
    }
    p
}

fn mul(a: &Poly, b: &Poly) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0i128; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if *x == 0 {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn one_minus_t_pow(d: u32) -> Poly {
    let mut p = vec![0i128; d as usize + 1];
    p[0] = 1;
    p[d as usize] -= 1;
    trim(p)
}

fn minimalize(mut gens: Vec<Monomial>) -> Vec<Monomial> {
    gens.sort_by_key(|m| m.degree());
    gens.dedup();
    let mut out: Vec<Monomial> = Vec::with_capacity(gens.len());
    for g in gens {
        if !out.iter().any(|h| h.divides(&g)) {
            out.push(g);
        }
    }
    out
}

fn pure_power_var(m: &Monomial) -> Option<usize> {
    let mut var = None;
    for (i, &e) in m.exps().iter().enumerate() {
        if e > 0 {
            if var.is_some() {
                return None;
            }
            var = Some(i);
        }
    }
    var
}

/// Numerator `N(t)` of the Hilbert series `N(t) / (1-t)^n` of `k[x]/M`.
pub fn hilbert_numerator(gens: &[Monomial]) -> Vec<i128> {
    numerator(minimalize(gens.to_vec()))
}

fn numerator(gens: Vec<Monomial>) -> Poly {
    if gens.is_empty() {
        return vec![1];
    }
    if gens.iter().any(|m| m.is_one()) {
        return Vec::new();
    }
    let mixed = gens.iter().find(|m| pure_power_var(m).is_none()).cloned();
    let Some(g) = mixed else {
        return gens.iter().fold(vec![1], |acc, m| mul(&acc, &one_minus_t_pow(m.degree())));
    };
    // Pivot on the variable of `g` occurring in the most generators.
    let nv = g.nvars();
    let x = (0..nv).filter(|&i| g.exp(i) > 0).max_by_key(|&i| gens.iter().filter(|m| m.exp(i) > 0).count()).unwrap();
    let mut es: Vec<u32> = gens.iter().map(|m| m.exp(x)).filter(|&e| e > 0).collect();
    es.sort_unstable();
    let e = es[es.len() / 2].min(g.exp(x));
    let mut pexps = vec![0u32; nv];
    pexps[x] = e;
    let p = Monomial::new(pexps);

    let mut plus = gens.clone();
    plus.push(p.clone());
    let plus = minimalize(plus);
    let colon = minimalize(
        gens.iter()
            .map(|m| {
                let mut ex = m.exps().to_vec();
                ex[x] = ex[x].saturating_sub(e);
                Monomial::new(ex)
            })
            .collect(),
    );
    let a = numerator(plus);
    let b = numerator(colon);
    let mut shifted = vec![0i128; e as usize];
    shifted.extend(b);
    let len = a.len().max(shifted.len());
    let mut out = vec![0i128; len];
    for (i, v) in a.iter().enumerate() {
        out[i] += v;
    }
    for (i, v) in shifted.iter().enumerate() {
        out[i] += v;
    }
    trim(out)
}

/// Dimension and degree from the leading monomials of a homogeneous ideal.
pub fn dim_degree(nvars: usize, leading: &[Monomial]) -> HilbertData {
    let mut n = hilbert_numerator(leading);
    if n.is_empty() {
        return HilbertData::EMPTY;
    }
    let mut k = 0;
    // Divide by (1 - t) while N(1) = 0.
    while n.iter().sum::<i128>() == 0 {
        let mut q = vec![0i128; n.len() - 1];
        let mut acc = 0i128;
        for i in 0..n.len() - 1 {
            acc += n[i];
            q[i] = acc;
        }
        n = trim(q);
        k += 1;
    }
    let krull = nvars as i64 - k;
    if krull <= 0 {
        return HilbertData::EMPTY;
    }
    let degree: i128 = n.iter().sum();
    HilbertData { dim: krull - 1, degree: degree as u64 }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial::new(e.to_vec())
    }

    #[test]
    fn numerators() {
        assert_eq!(hilbert_numerator(&[m(&[2, 0])]), vec![1, 0, -1]);
        assert_eq!(hilbert_numerator(&[m(&[1, 1]), m(&[2, 0])]), vec![1, 0, -2, 1]);
    }

    #[test]
    fn point_and_line() {
        assert_eq!(dim_degree(3, &[m(&[1, 0, 0])]), HilbertData { dim: 1, degree: 1 });
        assert_eq!(dim_degree(3, &[m(&[1, 0, 0]), m(&[0, 1, 0])]), HilbertData { dim: 0, degree: 1 });
        assert_eq!(dim_degree(2, &[m(&[1, 0]), m(&[0, 3])]), HilbertData::EMPTY);
        assert_eq!(dim_degree(4, &[m(&[0, 1, 1, 0]), m(&[2, 0, 0, 0])]).degree, 4);
    }
}
