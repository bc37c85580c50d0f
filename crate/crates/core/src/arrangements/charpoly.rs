use std::fmt;

/// Integer polynomial `Σ a_k t^k`, stored from the constant term up.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CharPoly {
    coeffs: Vec<i64>,
}

impl CharPoly {
    /// Trailing zero coefficients are trimmed.
    pub fn new(mut coeffs: Vec<i64>) -> Self {
        while coeffs.len() > 1 && coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0);
        }
        CharPoly { coeffs }
    }

    /// `Π (t - r)`.
    pub fn from_roots(roots: &[i64]) -> Self {
        roots.iter().fold(CharPoly::new(vec![1]), |acc, &r| acc.mul_linear(r))
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> i64 {
        *self.coeffs.last().unwrap()
    }

    pub fn eval(&self, t: i64) -> i64 {
        self.coeffs.iter().rev().fold(0, |acc, &c| acc * t + c)
    }

    /// Multiplication by `t - r`.
    pub fn mul_linear(&self, r: i64) -> Self {
        let mut c = vec![0i64; self.coeffs.len() + 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            c[i + 1] += a;
            c[i] -= r * a;
        }
        CharPoly::new(c)
    }

    /// Quotient and remainder of division by `t - r`.
    pub fn div_linear(&self, r: i64) -> (Self, i64) {
        let n = self.coeffs.len();
        if n == 1 {
            return (CharPoly::new(vec![0]), self.coeffs[0]);
        }
        let mut q = vec![0i64; n - 1];
        let mut acc = 0i64;
        for i in (0..n).rev() {
            acc = acc * r + self.coeffs[i];
            if i > 0 {
                q[i - 1] = acc;
            }
        }
        (CharPoly::new(q), acc)
    }

    /// `p(t + s)`.
    pub fn shift(&self, s: i64) -> Self {
        let mut out = CharPoly::new(vec![0]);
        for &c in self.coeffs.iter().rev() {
            let mut next = out.mul_linear(-s).coeffs;
            next[0] += c;
            out = CharPoly::new(next);
        }
        out
    }

    /// `(-1)^{d-k} a_k ≥ 0` for every `k`.
    pub fn signs_alternate(&self) -> bool {
        let d = self.degree();
        self.coeffs.iter().enumerate().all(|(k, &a)| if (d - k).is_multiple_of(2) { a >= 0 } else { a <= 0 })
    }
}

impl std::ops::Sub for &CharPoly {
    type Output = CharPoly;
    fn sub(self, o: &CharPoly) -> CharPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        CharPoly::new(
            (0..n).map(|i| self.coeffs.get(i).copied().unwrap_or(0) - o.coeffs.get(i).copied().unwrap_or(0)).collect(),
        )
    }
}

impl fmt::Display for CharPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, &a) in self.coeffs.iter().enumerate().rev() {
            if a == 0 {
                continue;
            }
            if first {
                if a < 0 {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if a < 0 { " - " } else { " + " })?;
            }
            let m = a.unsigned_abs();
            match (k, m) {
                (0, _) => write!(f, "{m}")?,
                (_, 1) => {}
                _ => write!(f, "{m}*")?,
            }
            match k {
                0 => {}
                1 => f.write_str("t")?,
                _ => write!(f, "t^{k}")?,
            }
            first = false;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for CharPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CharPoly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        let p = CharPoly::from_roots(&[0, 1, 2]);
        assert_eq!(p.coeffs(), &[0, 2, -3, 1]);
        assert_eq!(p.to_string(), "t^3 - 3*t^2 + 2*t");
        assert_eq!(p.div_linear(1), (CharPoly::new(vec![0, -2, 1]), 0));
        assert_eq!(p.div_linear(3).1, 6);
        assert_eq!(p.shift(1), CharPoly::new(vec![0, -1, 0, 1]));
        assert_eq!(p.eval(5), 60);
        assert!(p.signs_alternate());
        assert_eq!(CharPoly::new(vec![0, 0]).to_string(), "0");
        assert_eq!(CharPoly::new(vec![-1, 0, 1]).to_string(), "t^2 - 1");
    }
}
