//! Exact rational elimination.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Matrix = Vec<Vec<BigRational>>;

fn size(c: &BigRational) -> u64 {
    c.numer().bits() + c.denom().bits()
}

/// Reduces `rows` to reduced row echelon form in place and returns the pivot
/// column of each leading row. The pivot in each column is the entry with the
/// smallest numerator plus denominator bit size, ties going to the lowest row.
pub fn rref(rows: &mut Matrix, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(best) = (r..rows.len())
            .filter(|&i| !rows[i][col].is_zero())
            .min_by_key(|&i| (size(&rows[i][col]), i))
        else {
            continue;
        };
        rows.swap(r, best);
        let inv = rows[r][col].recip();
        for c in rows[r].iter_mut() {
            *c *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (c, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *c -= &f * p;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    pivots
}

/// Basis of `{c : A c = 0}`, one vector per free column in column order.
pub fn nullspace(mut rows: Matrix, ncols: usize) -> Vec<Vec<BigRational>> {
    let pivots = rref(&mut rows, ncols);
    (0..ncols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![BigRational::zero(); ncols];
            v[free] = BigRational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -rows[row][free].clone();
            }
            v
        })
        .collect()
}

pub fn rank(mut rows: Matrix, ncols: usize) -> usize {
    rref(&mut rows, ncols).len()
}

/// Scales `v` to coprime integers with a positive first non-zero entry.
pub fn integer_scaled(v: &[BigRational]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = v.iter().map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    let gcd = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if gcd.is_zero() {
        return ints;
    }
    let sign = match ints.iter().find(|c| !c.is_zero()) {
        Some(c) if c.is_negative() => -BigInt::one(),
        _ => BigInt::one(),
    };
    ints.into_iter().map(|c| c / &gcd * &sign).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn nullspace_of_small_system() {
        // x + 2y - z = 0, 2x + 4y - 2z = 0 -> dimension 2
        let a = vec![vec![q(1), q(2), q(-1)], vec![q(2), q(4), q(-2)]];
        let ns = nullspace(a.clone(), 3);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            for row in &a {
                let dot: BigRational = row.iter().zip(v).map(|(x, y)| x * y).sum();
                assert!(dot.is_zero());
            }
        }
        assert_eq!(rank(a, 3), 1);
    }

    #[test]
    fn pivot_prefers_small_entries() {
        let mut a = vec![vec![q(1000), q(1)], vec![q(1), q(3)]];
        let pivots = rref(&mut a, 2);
        assert_eq!(pivots, vec![0, 1]);
        assert_eq!(a, vec![vec![q(1), q(0)], vec![q(0), q(1)]]);
    }

    #[test]
    fn scaling_clears_denominators() {
        let v = vec![BigRational::new((-1).into(), 2.into()), q(0), BigRational::new(3.into(), 4.into())];
        let ints: Vec<i64> = integer_scaled(&v).iter().map(|c| i64::try_from(c).unwrap()).collect();
        assert_eq!(ints, vec![2, 0, -3]);
    }
}
