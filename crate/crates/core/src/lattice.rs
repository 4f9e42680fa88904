//! Exact integer linear algebra: Hermite normal form with transformation,
//! used to split finitely generated abelian groups along a homomorphism.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Row-style Hermite normal form. Returns `(h, u)` with `u * b = h`, `u`
/// unimodular, `h` upper-triangular with positive pivots and entries above
/// each pivot reduced into `[0, pivot)`.
pub fn hnf_with_transform(b: &[Vec<BigInt>]) -> (Vec<Vec<BigInt>>, Vec<Vec<BigInt>>) {
    let rows = b.len();
    let cols = if rows == 0 { 0 } else { b[0].len() };
    let mut h: Vec<Vec<BigInt>> = b.to_vec();
    let mut u: Vec<Vec<BigInt>> = (0..rows)
        .map(|i| {
            (0..rows)
                .map(|j| if i == j { BigInt::from(1) } else { BigInt::zero() })
                .collect()
        })
        .collect();

    let mut pivot_row = 0;
    for col in 0..cols {
        if pivot_row >= rows {
            break;
        }
        // Euclidean elimination below the pivot: repeatedly reduce by the
        // row with the smallest nonzero entry in this column.
        loop {
            let mut best: Option<usize> = None;
            for i in pivot_row..rows {
                if !h[i][col].is_zero() {
                    match best {
                        None => best = Some(i),
                        Some(j) => {
                            if h[i][col].abs() < h[j][col].abs() {
                                best = Some(i);
                            }
                        }
                    }
                }
            }
            let Some(min_row) = best else { break };
            h.swap(pivot_row, min_row);
            u.swap(pivot_row, min_row);
            let mut any_left = false;
            for i in (pivot_row + 1)..rows {
                if h[i][col].is_zero() {
                    continue;
                }
                let q = h[i][col].div_floor(&h[pivot_row][col]);
                row_sub_mul(&mut h, i, pivot_row, &q);
                row_sub_mul(&mut u, i, pivot_row, &q);
                if !h[i][col].is_zero() {
                    any_left = true;
                }
            }
            if !any_left {
                break;
            }
        }
        if h[pivot_row][col].is_zero() {
            continue; // column already zero below pivot_row
        }
        if h[pivot_row][col].is_negative() {
            row_negate(&mut h, pivot_row);
            row_negate(&mut u, pivot_row);
        }
        // Reduce entries above the pivot into [0, pivot).
        for i in 0..pivot_row {
            let q = h[i][col].div_floor(&h[pivot_row][col]);
            if !q.is_zero() {
                row_sub_mul(&mut h, i, pivot_row, &q);
                row_sub_mul(&mut u, i, pivot_row, &q);
            }
        }
        pivot_row += 1;
    }
    (h, u)
}

fn row_sub_mul(m: &mut [Vec<BigInt>], target: usize, source: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    let src = m[source].clone();
    for (t, s) in m[target].iter_mut().zip(src.iter()) {
        *t -= q * s;
    }
}

fn row_negate(m: &mut [Vec<BigInt>], row: usize) {
    for x in m[row].iter_mut() {
        *x = -std::mem::take(x);
    }
}

/// Basis of the integer kernel `{x : a * x = 0}` of a matrix given by rows.
/// Computed from the HNF of the transpose: rows of the transform matrix
/// sitting over zero rows of the normal form.
pub fn integer_kernel(a_rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = if a_rows.is_empty() { 0 } else { a_rows[0].len() };
    // b = a^T, n rows; left-kernel combinations of b's rows = kernel of a.
    let b: Vec<Vec<BigInt>> = (0..n)
        .map(|j| a_rows.iter().map(|row| row[j].clone()).collect())
        .collect();
    let (h, u) = hnf_with_transform(&b);
    let mut kernel = Vec::new();
    for (h_row, u_row) in h.iter().zip(u.iter()) {
        if h_row.iter().all(BigInt::is_zero) {
            kernel.push(normalize_sign(u_row.clone()));
        }
    }
    kernel
}

/// For a single row `r`, a vector `v` with `r . v = g > 0` the gcd of the
/// entries, together with `g`. `None` when the row is zero.
pub fn gcd_witness(row: &[BigInt]) -> Option<(Vec<BigInt>, BigInt)> {
    if row.iter().all(BigInt::is_zero) {
        return None;
    }
    let b: Vec<Vec<BigInt>> = row.iter().map(|x| vec![x.clone()]).collect();
    let (h, u) = hnf_with_transform(&b);
    let g = h[0][0].clone();
    debug_assert!(g.is_positive());
    Some((u[0].clone(), g))
}

fn normalize_sign(mut v: Vec<BigInt>) -> Vec<BigInt> {
    if let Some(first) = v.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            for x in v.iter_mut() {
                *x = -std::mem::take(x);
            }
        }
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
        a.iter().zip(b).map(|(x, y)| x * y).sum()
    }

    #[test]
    fn kernel_of_equal_weights() {
        let k = integer_kernel(&[vec![bi(1), bi(1)]]);
        assert_eq!(k, vec![vec![bi(1), bi(-1)]]);
    }

    #[test]
    fn kernel_of_coprime_row_has_rank_one() {
        // (2 1): kernel is spanned by (1, -2)
        let k = integer_kernel(&[vec![bi(2), bi(1)]]);
        assert_eq!(k.len(), 1);
        assert_eq!(dot(&k[0], &[bi(2), bi(1)]), bi(0));
    }

    #[test]
    fn kernel_of_injective_row_is_empty() {
        let k = integer_kernel(&[vec![bi(1)]]);
        assert!(k.is_empty());
    }

    #[test]
    fn gcd_witness_bezout() {
        let (v, g) = gcd_witness(&[bi(6), bi(10), bi(15)]).unwrap();
        assert_eq!(g, bi(1));
        assert_eq!(dot(&v, &[bi(6), bi(10), bi(15)]), bi(1));
        assert!(gcd_witness(&[bi(0), bi(0)]).is_none());
    }

    #[test]
    fn hnf_reconstructs_input() {
        let b = vec![
            vec![bi(4), bi(6), bi(2)],
            vec![bi(2), bi(2), bi(0)],
            vec![bi(6), bi(8), bi(2)],
        ];
        let (h, u) = hnf_with_transform(&b);
        for i in 0..3 {
            for j in 0..3 {
                let got: BigInt = (0..3).map(|k| &u[i][k] * &b[k][j]).sum();
                assert_eq!(got, h[i][j], "U*B != H at ({i},{j})");
            }
        }
        // pivots positive, staircase shape
        assert!(h[0][0].is_positive());
    }

    #[test]
    fn kernel_vectors_annihilate_random_rows() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let rows = rng.random_range(1..=2);
            let cols = rng.random_range(1..=4);
            let a: Vec<Vec<BigInt>> = (0..rows)
                .map(|_| (0..cols).map(|_| bi(rng.random_range(-5..=5))).collect())
                .collect();
            let kernel = integer_kernel(&a);
            for v in &kernel {
                for row in &a {
                    assert_eq!(dot(row, v), bi(0));
                }
            }
        }
    }
}
