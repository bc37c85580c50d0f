//! The curve test: pull the dual logarithmic 1-forms back along monomial
//! curves `t ↦ (t^{e_0}, ..., t^{e_{n-1}})` and read off pole orders exactly.
//!
//! Verdicts are "curve-test pass/fail" for the hypothesis of the test only.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::logder::{determinant, saito_check, Derivation};
use crate::poly::{q, QPoly};

/// `t ↦ (t^{e_0}, ..., t^{e_{n-1}})` with all exponents positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonomialCurve {
    exps: Vec<u32>,
}

impl MonomialCurve {
    pub fn new(exps: Vec<u32>) -> Result<Self> {
        if exps.is_empty() || exps.contains(&0) {
            return Err(Error::Precondition("curve exponents must be positive".into()));
        }
        Ok(MonomialCurve { exps })
    }

    /// `t ↦ (t^a, t^b)`.
    pub fn plane(a: u32, b: u32) -> Result<Self> {
        Self::new(vec![a, b])
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn gcd(&self) -> u32 {
        self.exps.iter().fold(0, |g, &e| g.gcd(&e))
    }

    /// Exponents divided by their gcd.
    pub fn normalized(&self) -> MonomialCurve {
        let g = self.gcd();
        MonomialCurve { exps: self.exps.iter().map(|e| e / g).collect() }
    }
}

impl fmt::Display for MonomialCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.exps.iter().map(|e| format!("t^{e}")).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Dual basis `ω_i = Σ_j adj(M)_{ji} dx_j / det M` of a Saito basis with matrix `M`.
#[derive(Clone, Debug)]
pub struct LogFormBasis {
    adjugate: Vec<Vec<QPoly>>,
    denominator: QPoly,
}

impl LogFormBasis {
    pub fn adjugate(&self) -> &[Vec<QPoly>] {
        &self.adjugate
    }

    /// `det M = c·h`.
    pub fn denominator(&self) -> &QPoly {
        &self.denominator
    }

    pub fn len(&self) -> usize {
        self.adjugate.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adjugate.is_empty()
    }

    /// Numerator coefficients of `ω_i` against `dx_0, ..., dx_{n-1}`.
    pub fn numerators(&self, i: usize) -> Vec<QPoly> {
        self.adjugate.iter().map(|row| row[i].clone()).collect()
    }

    pub fn fmt_with(&self, vars: &[String]) -> Vec<String> {
        let den = self.denominator.fmt_with(vars);
        (0..self.len())
            .map(|i| {
                let terms: Vec<String> = self
                    .numerators(i)
                    .iter()
                    .zip(vars)
                    .filter(|(c, _)| !c.is_zero())
                    .map(|(c, v)| format!("({})*d{v}", c.fmt_with(vars)))
                    .collect();
                format!("({}) / ({den})", terms.join(" + "))
            })
            .collect()
    }
}

fn matrix(basis: &[Derivation]) -> Vec<Vec<QPoly>> {
    basis.iter().map(|d| d.coeffs().to_vec()).collect()
}

#[allow(clippy::needless_range_loop)]
fn adjugate(m: &[Vec<QPoly>]) -> Vec<Vec<QPoly>> {
    let n = m.len();
    let nvars = m[0][0].nvars();
    if n == 1 {
        return vec![vec![QPoly::from_int(nvars, 1)]];
    }
    let mut adj = vec![vec![QPoly::zero(nvars); n]; n];
    for i in 0..n {
        for j in 0..n {
            let minor: Vec<Vec<QPoly>> = (0..n)
                .filter(|&r| r != j)
                .map(|r| (0..n).filter(|&c| c != i).map(|c| m[r][c].clone()).collect())
                .collect();
            let d = determinant(&minor);
            adj[i][j] = if (i + j) % 2 == 0 { d } else { d.scale(&q(-1)) };
        }
    }
    adj
}

/// Dual logarithmic 1-forms of a Saito basis, with `M · adj(M) = det(M)·I`
/// checked term by term.
#[allow(clippy::needless_range_loop)]
pub fn dual_log_forms(h: &QPoly, basis: &[Derivation]) -> Result<LogFormBasis> {
    let cert = saito_check(h, basis)?;
    if !cert.free {
        return Err(Error::NotFree("determinant is not a nonzero constant multiple of h".into()));
    }
    let m = matrix(basis);
    let adj = adjugate(&m);
    let n = m.len();
    for i in 0..n {
        for j in 0..n {
            let mut s = QPoly::zero(h.nvars());
            for k in 0..n {
                s = &s + &(&m[i][k] * &adj[k][j]);
            }
            let expected = if i == j { cert.determinant.clone() } else { QPoly::zero(h.nvars()) };
            if s != expected {
                return Err(Error::NotFree(format!("pairing identity fails at ({i}, {j})")));
            }
        }
    }
    Ok(LogFormBasis { adjugate: adj, denominator: cert.determinant })
}

/// Pole order of a pulled-back form; a form pulling back to zero is reported separately.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PoleOrder {
    Order(i64),
    ZeroForm,
}

impl PoleOrder {
    /// At most a simple pole; the zero form counts as passing.
    pub fn passes(&self) -> bool {
        match self {
            PoleOrder::Order(k) => *k <= 1,
            PoleOrder::ZeroForm => true,
        }
    }
}

impl fmt::Display for PoleOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PoleOrder::Order(k) => write!(f, "{k}"),
            PoleOrder::ZeroForm => f.write_str("zero"),
        }
    }
}

/// Adds `factor · t^shift · p(t^e)` into `acc`.
fn accumulate(acc: &mut BTreeMap<u64, BigRational>, p: &QPoly, exps: &[u32], shift: u64, factor: &BigRational) {
    for (m, c) in p.terms() {
        let e: u64 = m.exps().iter().zip(exps).map(|(&a, &b)| a as u64 * b as u64).sum::<u64>() + shift;
        *acc.entry(e).or_insert_with(BigRational::zero) += c * factor;
    }
}

fn order(acc: &BTreeMap<u64, BigRational>) -> Option<u64> {
    acc.iter().find(|(_, c)| !c.is_zero()).map(|(&e, _)| e)
}

fn check_curve(h: &QPoly, curve: &MonomialCurve) -> Result<()> {
    if curve.exps.len() != h.nvars() {
        return Err(Error::DimensionMismatch(format!(
            "curve has {} coordinates, divisor lives in {} variables",
            curve.exps.len(),
            h.nvars()
        )));
    }
    Ok(())
}

fn inside(h: &QPoly, curve: &MonomialCurve) -> bool {
    let mut acc = BTreeMap::new();
    accumulate(&mut acc, h, &curve.exps, 0, &BigRational::one());
    order(&acc).is_none()
}

/// `ord_t` of the denominator minus `ord_t` of the numerator of each `φ^*ω_i`.
pub fn pullback_pole_orders(h: &QPoly, forms: &LogFormBasis, curve: &MonomialCurve) -> Result<Vec<PoleOrder>> {
    check_curve(h, curve)?;
    if inside(h, curve) {
        return Err(Error::CurveInDivisor);
    }
    let exps = &curve.exps;
    let mut den = BTreeMap::new();
    accumulate(&mut den, &forms.denominator, exps, 0, &BigRational::one());
    let den_ord = order(&den).expect("det is a nonzero multiple of h") as i64;
    Ok((0..forms.len())
        .map(|i| {
            let mut num = BTreeMap::new();
            for (j, c) in forms.numerators(i).iter().enumerate() {
                // d(t^e) = e t^{e-1} dt
                accumulate(&mut num, c, exps, exps[j] as u64 - 1, &q(exps[j] as i64));
            }
            match order(&num) {
                Some(o) => PoleOrder::Order(den_ord - o as i64),
                None => PoleOrder::ZeroForm,
            }
        })
        .collect())
}

/// Result of the curve test along one monomial curve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveTest {
    pub curve: MonomialCurve,
    pub gcd: u32,
    /// Empty when the curve lies inside the divisor.
    pub orders: Vec<PoleOrder>,
    /// No path leaves the divisor, so the hypothesis holds vacuously.
    pub inside_divisor: bool,
    pub pass: bool,
    /// Verdict on the gcd-normalized curve coincides with `pass`.
    pub normalized_agrees: bool,
}

fn verdict(h: &QPoly, forms: &LogFormBasis, curve: &MonomialCurve) -> Result<(Vec<PoleOrder>, bool, bool)> {
    check_curve(h, curve)?;
    if inside(h, curve) {
        return Ok((Vec::new(), true, true));
    }
    let orders = pullback_pole_orders(h, forms, curve)?;
    let pass = orders.iter().all(PoleOrder::passes);
    Ok((orders, false, pass))
}

fn test_with_forms(h: &QPoly, forms: &LogFormBasis, curve: &MonomialCurve) -> Result<CurveTest> {
    let (orders, inside_divisor, pass) = verdict(h, forms, curve)?;
    let normalized_agrees = if curve.gcd() == 1 { true } else { verdict(h, forms, &curve.normalized())?.2 == pass };
    debug_assert!(normalized_agrees, "verdict changed under gcd normalization");
    Ok(CurveTest { curve: curve.clone(), gcd: curve.gcd(), orders, inside_divisor, pass, normalized_agrees })
}

/// Pass iff every pulled-back dual form has at most a simple pole.
pub fn curve_test(h: &QPoly, basis: &[Derivation], curve: &MonomialCurve) -> Result<CurveTest> {
    let forms = dual_log_forms(h, basis)?;
    test_with_forms(h, &forms, curve)
}

/// `{w_0 x∂x + w_1 y∂y, h_y ∂x - h_x ∂y}` for a reduced `h(x, y)` that is
/// weighted homogeneous with nonnegative weights; its determinant is `-D·h`.
pub fn quasi_homogeneous_basis(h: &QPoly) -> Result<Vec<Derivation>> {
    if h.nvars() != 2 {
        return Err(Error::Precondition("automatic basis needs a bivariate divisor".into()));
    }
    if h.is_zero() || h.is_constant() {
        return Err(Error::Precondition("divisor equation must be a nonconstant polynomial".into()));
    }
    if !crate::groebner::is_squarefree(h) {
        return Err(Error::NotReduced);
    }
    let points: Vec<(i64, i64)> = h.terms().iter().map(|(m, _)| (m.exp(0) as i64, m.exp(1) as i64)).collect();
    let (x0, y0) = points[0];
    let dir = points.iter().map(|&(x, y)| (x - x0, y - y0)).find(|&d| d != (0, 0));
    let (w0, w1) = match dir {
        None => (1, 1),
        Some((dx, dy)) => {
            let g = dx.gcd(&dy);
            let (mut a, mut b) = (dy / g, -dx / g);
            if a < 0 || b < 0 {
                a = -a;
                b = -b;
            }
            (a, b)
        }
    };
    let quasi = w0 >= 0 && w1 >= 0 && points.iter().all(|&(x, y)| w0 * x + w1 * y == w0 * x0 + w1 * y0);
    let degree = w0 * x0 + w1 * y0;
    if !quasi || degree <= 0 {
        return Err(Error::Precondition("divisor is not quasi-homogeneous; supply a logarithmic basis".into()));
    }
    let euler = Derivation::new(vec![QPoly::x(2, 0).scale(&q(w0)), QPoly::x(2, 1).scale(&q(w1))]);
    let hamilton = Derivation::new(vec![h.derivative(1), h.derivative(0).scale(&q(-1))]);
    Ok(vec![euler, hamilton])
}

/// Pass/fail grid over `1 ≤ a ≤ a_max`, `1 ≤ b ≤ b_max`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CuspScan {
    pub a_max: u32,
    pub b_max: u32,
    /// Row-major in `a`, then `b`.
    pub cells: Vec<CurveTest>,
}

impl CuspScan {
    pub fn cell(&self, a: u32, b: u32) -> &CurveTest {
        &self.cells[((a - 1) * self.b_max + (b - 1)) as usize]
    }

    /// One row per `a`; `+` pass, `-` fail, `o` curve inside the divisor.
    pub fn grid(&self) -> String {
        let mut out = String::from("a\\b");
        for b in 1..=self.b_max {
            out.push_str(&format!(" {b:>2}"));
        }
        for a in 1..=self.a_max {
            out.push_str(&format!("\n{a:>3}"));
            for b in 1..=self.b_max {
                let c = self.cell(a, b);
                let mark = if c.inside_divisor {
                    'o'
                } else if c.pass {
                    '+'
                } else {
                    '-'
                };
                out.push_str(&format!("  {mark}"));
            }
        }
        out
    }
}

/// Curve test of a bivariate `h` along every `(t^a, t^b)` in the grid, using
/// `basis` or the quasi-homogeneous basis when none is given.
pub fn cusp_scan(h: &QPoly, basis: Option<&[Derivation]>, a_max: u32, b_max: u32, exec: Exec) -> Result<CuspScan> {
    if h.nvars() != 2 {
        return Err(Error::Precondition("cusp scan needs a bivariate divisor".into()));
    }
    let owned;
    let basis = match basis {
        Some(b) => b,
        None => {
            owned = quasi_homogeneous_basis(h)?;
            &owned[..]
        }
    };
    let forms = dual_log_forms(h, basis)?;
    let pairs: Vec<(u32, u32)> = (1..=a_max).flat_map(|a| (1..=b_max).map(move |b| (a, b))).collect();
    let cells = exec
        .map(&pairs, |&(a, b)| test_with_forms(h, &forms, &MonomialCurve { exps: vec![a, b] }))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    Ok(CuspScan { a_max, b_max, cells })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;
    use proptest::prelude::*;

    const XY: [&str; 2] = ["x", "y"];

    fn p(s: &str) -> QPoly {
        parse_poly(s, &XY).unwrap()
    }

    fn der(cs: &[&str]) -> Derivation {
        Derivation::new(cs.iter().map(|s| p(s)).collect())
    }

    fn cusp() -> (QPoly, Vec<Derivation>) {
        (p("y^2 - x^3"), vec![der(&["2*x", "3*y"]), der(&["2*y", "3*x^2"])])
    }

    fn orders(h: &QPoly, basis: &[Derivation], a: u32, b: u32) -> Vec<PoleOrder> {
        let f = dual_log_forms(h, basis).unwrap();
        pullback_pole_orders(h, &f, &MonomialCurve::plane(a, b).unwrap()).unwrap()
    }

    #[test]
    fn dual_forms() {
        let snc = p("x*y");
        let f = dual_log_forms(&snc, &[der(&["x", "0"]), der(&["0", "y"])]).unwrap();
        assert_eq!(f.denominator(), &snc);
        assert_eq!(f.numerators(0), vec![p("y"), p("0")]);
        assert_eq!(f.numerators(1), vec![p("0"), p("x")]);

        let (h, basis) = cusp();
        let f = dual_log_forms(&h, &basis).unwrap();
        assert_eq!(f.denominator(), &h.scale(&q(-6)));
        assert_eq!(f.numerators(0), vec![p("3*x^2"), p("-2*y")]);
        assert_eq!(f.numerators(1), vec![p("-3*y"), p("2*x")]);

        let singular = [der(&["x", "y"]), der(&["2*x", "2*y"])];
        assert!(matches!(dual_log_forms(&snc, &singular), Err(Error::NotFree(_))));
    }

    #[test]
    fn pole_orders() {
        use PoleOrder::Order;
        let snc = p("x*y");
        let basis = [der(&["x", "0"]), der(&["0", "y"])];
        assert_eq!(orders(&snc, &basis, 1, 5), vec![Order(1), Order(1)]);

        let (h, basis) = cusp();
        assert_eq!(orders(&h, &basis, 3, 4), vec![Order(1), Order(2)]);
        assert_eq!(orders(&h, &basis, 1, 1), vec![Order(1), Order(1)]);
        let f = dual_log_forms(&h, &basis).unwrap();
        let inside = pullback_pole_orders(&h, &f, &MonomialCurve::plane(2, 3).unwrap());
        assert!(matches!(inside, Err(Error::CurveInDivisor)));
    }

    #[test]
    fn zero_form_sentinel() {
        // h = x with basis {x∂x + y∂y, ∂y}: the second dual form is (x dy - y dx)/x.
        let h = p("x");
        let basis = [der(&["x", "y"]), der(&["0", "1"])];
        assert_eq!(orders(&h, &basis, 1, 1), vec![PoleOrder::Order(1), PoleOrder::ZeroForm]);
        assert_eq!(orders(&h, &basis, 1, 2), vec![PoleOrder::Order(1), PoleOrder::Order(-1)]);
        assert!(curve_test(&h, &basis, &MonomialCurve::plane(3, 3).unwrap()).unwrap().pass);
    }

    #[test]
    fn cusp_probes() {
        let (h, basis) = cusp();
        for (a, b, pass) in
            [(2, 3, true), (1, 2, true), (1, 3, true), (3, 4, false), (4, 5, false), (5, 7, false), (1, 1, true)]
        {
            let t = curve_test(&h, &basis, &MonomialCurve::plane(a, b).unwrap()).unwrap();
            assert_eq!(t.pass, pass, "({a}, {b})");
        }
        assert!(curve_test(&h, &basis, &MonomialCurve::plane(2, 3).unwrap()).unwrap().inside_divisor);
    }

    #[test]
    fn scans() {
        let (h, _) = cusp();
        let scan = cusp_scan(&h, None, 5, 7, Exec::Parallel).unwrap();
        for a in 1..=5u32 {
            for b in 1..=7u32 {
                let r = b as f64 / a as f64;
                let band = 1.0 < r && r < 2.0 && 2 * b != 3 * a;
                assert_eq!(scan.cell(a, b).pass, !band, "({a}, {b})");
            }
        }
        assert_eq!(scan, cusp_scan(&h, None, 5, 7, Exec::Sequential).unwrap());
        assert!(scan.grid().starts_with("a\\b  1  2"));

        for smooth_or_snc in ["x*y", "x"] {
            let scan = cusp_scan(&p(smooth_or_snc), None, 6, 6, Exec::Sequential).unwrap();
            assert!(scan.cells.iter().all(|c| c.pass), "{smooth_or_snc}");
        }
        assert!(cusp_scan(&p("x*y - 1"), None, 2, 2, Exec::Sequential).is_err());
        assert!(cusp_scan(&p("y^2 - x^2*y"), None, 2, 2, Exec::Sequential).is_ok());
        assert!(matches!(quasi_homogeneous_basis(&p("x^2*y")), Err(Error::NotReduced)));
    }

    #[test]
    fn snc_in_three_variables() {
        let vars = ["x", "y", "z"];
        let h = parse_poly("x*y*z", &vars).unwrap();
        let basis: Vec<Derivation> = (0..3)
            .map(|i| Derivation::new((0..3).map(|j| if i == j { QPoly::x(3, i) } else { QPoly::zero(3) }).collect()))
            .collect();
        for e in [[1, 2, 3], [5, 1, 1], [2, 7, 4]] {
            let t = curve_test(&h, &basis, &MonomialCurve::new(e.to_vec()).unwrap()).unwrap();
            assert!(t.pass);
            assert!(t.orders.iter().all(|o| *o == PoleOrder::Order(1)));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        #[test]
        fn verdict_survives_scaling(a in 1u32..9, b in 1u32..9, k in 1u32..5) {
            let (h, basis) = cusp();
            let t = curve_test(&h, &basis, &MonomialCurve::plane(a, b).unwrap()).unwrap();
            let s = curve_test(&h, &basis, &MonomialCurve::plane(k * a, k * b).unwrap()).unwrap();
            prop_assert_eq!(t.pass, s.pass);
            prop_assert!(s.normalized_agrees);
        }

        #[test]
        fn snc_always_passes(a in 1u32..12, b in 1u32..12) {
            let h = p("x*y");
            let t = curve_test(&h, &quasi_homogeneous_basis(&h).unwrap(), &MonomialCurve::plane(a, b).unwrap()).unwrap();
            prop_assert!(t.pass);
        }
    }
}
