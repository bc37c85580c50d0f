//! Buchberger's algorithm with Gebauer-Möller pair elimination and the sugar
//! selection strategy.
//!
//! Polynomials are handled here as term vectors sorted by decreasing monomial
//! order; conversion to and from [`MPoly`] happens at the boundary.

use std::cmp::Ordering;

use crate::poly::{Coeff, MPoly, Monomial, MonomialOrder};

pub(crate) type Terms<C> = Vec<(Monomial, C)>;

pub(crate) fn to_terms<C: Coeff>(p: &MPoly<C>, order: MonomialOrder) -> Terms<C> {
    let mut t: Terms<C> = p.terms().to_vec();
    if order != MonomialOrder::Grevlex {
        t.sort_by(|a, b| order.cmp(&b.0, &a.0));
    }
    t
}

pub(crate) fn from_terms<C: Coeff>(nvars: usize, t: Terms<C>) -> MPoly<C> {
    MPoly::from_terms(nvars, t)
}

/// `a - c * m * b`, all sorted descending in `order`.
fn sub_mul<C: Coeff>(a: &[(Monomial, C)], b: &[(Monomial, C)], m: &Monomial, c: &C, order: MonomialOrder) -> Terms<C> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let mut next_b: Option<(Monomial, C)> = b.first().map(|(bm, bc)| (bm.mul(m), bc.mul(c)));
    while i < a.len() {
        let Some((bm, bc)) = &next_b else { break };
        match order.cmp(&a[i].0, bm) {
            Ordering::Greater => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Less => {
                out.push((bm.clone(), bc.neg()));
                j += 1;
                next_b = b.get(j).map(|(bm, bc)| (bm.mul(m), bc.mul(c)));
            }
            Ordering::Equal => {
                let v = a[i].1.sub(bc);
                if !v.is_zero() {
                    out.push((a[i].0.clone(), v));
                }
                i += 1;
                j += 1;
                next_b = b.get(j).map(|(bm, bc)| (bm.mul(m), bc.mul(c)));
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    if let Some((bm, bc)) = next_b {
        out.push((bm, bc.neg()));
        for (bm, bc) in &b[j + 1..] {
            out.push((bm.mul(m), bc.mul(c).neg()));
        }
    }
    out
}

fn make_monic<C: Coeff>(p: &mut Terms<C>) {
    if let Some((_, lc)) = p.first() {
        if !lc.is_one() {
            let inv = lc.inv();
            for (_, c) in p.iter_mut() {
                *c = c.mul(&inv);
            }
        }
    }
}

/// Reducer set: sorted term vectors with cached leading monomials and support masks.
pub(crate) struct Reducers<'a, C> {
    polys: Vec<&'a [(Monomial, C)]>,
    masks: Vec<u64>,
}

impl<'a, C: Coeff> Reducers<'a, C> {
    pub(crate) fn new(polys: impl IntoIterator<Item = &'a [(Monomial, C)]>) -> Self {
        let polys: Vec<_> = polys.into_iter().filter(|p| !p.is_empty()).collect();
        let masks = polys.iter().map(|p| p[0].0.support_mask()).collect();
        Reducers { polys, masks }
    }

    fn find(&self, m: &Monomial) -> Option<usize> {
        let mask = m.support_mask();
        (0..self.polys.len()).find(|&i| self.masks[i] & !mask == 0 && self.polys[i][0].0.divides(m))
    }

    /// Full normal form of `p` (every term irreducible).
    pub(crate) fn reduce(&self, p: Terms<C>, order: MonomialOrder) -> Terms<C> {
        let mut rem = p;
        let mut out: Terms<C> = Vec::new();
        let mut start = 0;
        while start < rem.len() {
            let (m, c) = (&rem[start].0, &rem[start].1);
            match self.find(m) {
                Some(i) => {
                    let g = self.polys[i];
                    let q = g[0].0.quotient_of(m);
                    let f = c.div(&g[0].1);
                    rem = sub_mul(&rem[start..], g, &q, &f, order);
                    start = 0;
                }
                None => {
                    out.push(rem[start].clone());
                    start += 1;
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    sugar: u32,
}

struct State<C> {
    order: MonomialOrder,
    polys: Vec<Terms<C>>,
    sugar: Vec<u32>,
    active: Vec<bool>,
    pairs: Vec<Pair>,
}

impl<C: Coeff> State<C> {
    fn lm(&self, i: usize) -> &Monomial {
        &self.polys[i][0].0
    }

    fn pair_sugar(&self, i: usize, j: usize, lcm: &Monomial) -> u32 {
        let si = self.sugar[i] + lcm.degree() - self.lm(i).degree();
        let sj = self.sugar[j] + lcm.degree() - self.lm(j).degree();
        si.max(sj)
    }

    /// Gebauer-Möller update after inserting `h` (already stored at index `hi`).
    fn update(&mut self, hi: usize) {
        let lm_h = self.lm(hi).clone();
        let actives: Vec<usize> = (0..hi).filter(|&g| self.active[g]).collect();

        let cands: Vec<(usize, Monomial, bool)> = actives
            .iter()
            .map(|&g| {
                let lm_g = self.lm(g);
                (g, lm_g.lcm(&lm_h), lm_g.is_coprime(&lm_h))
            })
            .collect();

        // Chain criterion among new pairs: drop (g, h) when some other (g', h)
        // has an lcm properly dividing lcm(g, h); equal lcms keep one representative.
        let mut keep: Vec<bool> = vec![true; cands.len()];
        for a in 0..cands.len() {
            for b in 0..cands.len() {
                if a == b || !keep[b] {
                    continue;
                }
                if cands[b].1.divides(&cands[a].1) && (cands[b].1 != cands[a].1 || b < a) {
                    // Prefer keeping a coprime representative among equal lcms.
                    if cands[b].1 == cands[a].1 && cands[a].2 && !cands[b].2 {
                        continue;
                    }
                    keep[a] = false;
                    break;
                }
            }
        }
        let mut new_pairs = Vec::new();
        for (k, (g, lcm, coprime)) in cands.into_iter().enumerate() {
            // Product criterion: pairs with coprime leading monomials reduce to zero.
            if keep[k] && !coprime {
                let sugar = self.pair_sugar(g, hi, &lcm);
                new_pairs.push(Pair { i: g, j: hi, lcm, sugar });
            }
        }

        // Prune old pairs whose lcm is divisible by lm(h) in the strict sense.
        let polys = &self.polys;
        self.pairs.retain(|p| {
            if !lm_h.divides(&p.lcm) {
                return true;
            }
            let li = polys[p.i][0].0.lcm(&lm_h);
            let lj = polys[p.j][0].0.lcm(&lm_h);
            li == p.lcm || lj == p.lcm
        });
        self.pairs.extend(new_pairs);

        for g in actives {
            if lm_h.divides(self.lm(g)) {
                self.active[g] = false;
            }
        }
    }

    fn select(&mut self) -> Option<Pair> {
        if self.pairs.is_empty() {
            return None;
        }
        let order = self.order;
        let mut best = 0;
        for k in 1..self.pairs.len() {
            let (a, b) = (&self.pairs[k], &self.pairs[best]);
            let better = a.sugar < b.sugar || (a.sugar == b.sugar && order.cmp(&a.lcm, &b.lcm) == Ordering::Less);
            if better {
                best = k;
            }
        }
        Some(self.pairs.swap_remove(best))
    }

    fn spoly(&self, p: &Pair) -> Terms<C> {
        let (f, g) = (&self.polys[p.i], &self.polys[p.j]);
        let mf = f[0].0.quotient_of(&p.lcm);
        let mg = g[0].0.quotient_of(&p.lcm);
        // f and g are monic.
        let one = f[0].1.one_like();
        let fm: Terms<C> = f[1..].iter().map(|(m, c)| (m.mul(&mf), c.clone())).collect();
        sub_mul(&fm, &g[1..], &mg, &one, self.order)
    }

    fn insert(&mut self, mut h: Terms<C>, sugar: u32) {
        make_monic(&mut h);
        self.polys.push(h);
        self.sugar.push(sugar);
        self.active.push(true);
        let hi = self.polys.len() - 1;
        self.update(hi);
    }
}

/// Reduced Gröbner basis of the ideal generated by `gens`, as monic term
/// vectors sorted by increasing leading monomial.
pub(crate) fn reduced_basis<C: Coeff>(gens: &[Terms<C>], order: MonomialOrder) -> Vec<Terms<C>> {
    let mut input: Vec<Terms<C>> = gens.iter().filter(|g| !g.is_empty()).cloned().collect();
    if input.is_empty() {
        return Vec::new();
    }
    input.sort_by(|a, b| order.cmp(&a[0].0, &b[0].0));
    let mut st = State { order, polys: Vec::new(), sugar: Vec::new(), active: Vec::new(), pairs: Vec::new() };
    for g in input {
        let sugar = g.iter().map(|(m, _)| m.degree()).max().unwrap_or(0);
        let red = {
            let reducers = Reducers::new((0..st.polys.len()).filter(|&i| st.active[i]).map(|i| st.polys[i].as_slice()));
            reducers.reduce(g, order)
        };
        if red.is_empty() {
            continue;
        }
        if red[0].0.is_one() {
            return vec![vec![(red[0].0.clone(), red[0].1.one_like())]];
        }
        st.insert(red, sugar);
    }
    while let Some(p) = st.select() {
        let s = st.spoly(&p);
        if s.is_empty() {
            continue;
        }
        let h = {
            let reducers = Reducers::new((0..st.polys.len()).filter(|&i| st.active[i]).map(|i| st.polys[i].as_slice()));
            reducers.reduce(s, order)
        };
        if h.is_empty() {
            continue;
        }
        if h[0].0.is_one() {
            return vec![vec![(h[0].0.clone(), h[0].1.one_like())]];
        }
        st.insert(h, p.sugar);
    }

    // Minimalize, then inter-reduce.
    let mut minimal: Vec<Terms<C>> = Vec::new();
    let actives: Vec<usize> = (0..st.polys.len()).filter(|&i| st.active[i]).collect();
    for &i in &actives {
        let lm = st.lm(i);
        let redundant = actives.iter().any(|&j| j != i && st.lm(j).divides(lm) && (st.lm(j) != lm || j < i));
        if !redundant {
            minimal.push(st.polys[i].clone());
        }
    }
    let mut reduced = Vec::with_capacity(minimal.len());
    for k in 0..minimal.len() {
        let head = minimal[k][0].clone();
        let tail: Terms<C> = minimal[k][1..].to_vec();
        let others = Reducers::new((0..minimal.len()).filter(|&j| j != k).map(|j| minimal[j].as_slice()));
        let mut p = vec![head];
        p.extend(others.reduce(tail, order));
        make_monic(&mut p);
        reduced.push(p);
    }
    reduced.sort_by(|a, b| order.cmp(&a[0].0, &b[0].0));
    reduced
}
