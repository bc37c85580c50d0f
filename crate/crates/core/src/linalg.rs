//! Exact dense linear algebra over the rationals.
//!
//! Elimination is fraction-free: rows are scaled to primitive integer vectors
//! and combined by cross-multiplication, so intermediate entries stay integral.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

fn to_integer_row(row: &[BigRational]) -> Vec<BigInt> {
    let den = row.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    row.iter().map(|c| (c * BigRational::from_integer(den.clone())).to_integer()).collect()
}

fn make_primitive(row: &mut [BigInt]) {
    let g = row.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if !g.is_zero() && !g.is_one() {
        for c in row.iter_mut() {
            *c = &*c / &g;
        }
    }
}

/// Reduced integer echelon form: each pivot column is zero outside its pivot row.
/// Returns the nonzero rows and their pivot columns.
pub fn integer_rref(rows: &[Vec<BigRational>], ncols: usize) -> (Vec<Vec<BigInt>>, Vec<usize>) {
    let mut m: Vec<Vec<BigInt>> = rows.iter().map(|r| to_integer_row(r)).collect();
    for r in &m {
        assert_eq!(r.len(), ncols, "ragged matrix");
    }
    let mut pivots = Vec::new();
    let mut top = 0;
    for col in 0..ncols {
        let Some(pr) = (top..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(top, pr);
        make_primitive(&mut m[top]);
        let pivot_row = m[top].clone();
        let p = pivot_row[col].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r == top || row[col].is_zero() {
                continue;
            }
            let a = row[col].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                *x = &*x * &p - &a * y;
            }
            make_primitive(row);
        }
        pivots.push(col);
        top += 1;
        if top == m.len() {
            break;
        }
    }
    m.truncate(top);
    (m, pivots)
}

pub fn rank(rows: &[Vec<BigRational>], ncols: usize) -> usize {
    integer_rref(rows, ncols).1.len()
}

/// Basis of `{ v : rows * v = 0 }`, each vector primitive integral.
pub fn nullspace(rows: &[Vec<BigRational>], ncols: usize) -> Vec<Vec<BigRational>> {
    let (m, pivots) = integer_rref(rows, ncols);
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![BigRational::zero(); ncols];
        v[free] = BigRational::one();
        for (row, &pc) in m.iter().zip(&pivots) {
            v[pc] = -BigRational::new(row[free].clone(), row[pc].clone());
        }
        basis.push(primitive_vector(&v));
    }
    basis
}

/// Scales a rational vector to a primitive integer vector with positive leading entry.
pub fn primitive_vector(v: &[BigRational]) -> Vec<BigRational> {
    let mut ints = to_integer_row(v);
    make_primitive(&mut ints);
    if let Some(first) = ints.iter().find(|c| !c.is_zero()) {
        if first.is_negative() {
            for c in ints.iter_mut() {
                *c = -&*c;
            }
        }
    }
    ints.into_iter().map(BigRational::from_integer).collect()
}
