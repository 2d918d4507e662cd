//! Abelianization of a presentation by integer diagonalization.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::words::Word;

use super::Presentation;

/// Diagonal form `P · M · Q = D` of an integer matrix. Only `Q` is kept: it
/// is all that lattice-membership and kernel queries need.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub diagonal: Vec<BigInt>,
    /// Column transform, `cols × cols`, unimodular.
    pub column_transform: Vec<Vec<BigInt>>,
    pub rank: usize,
}

/// Computes the Smith normal form of an `rows × cols` integer matrix.
pub fn smith_form(matrix: &[Vec<BigInt>], cols: usize) -> SmithForm {
    let mut a: Vec<Vec<BigInt>> = matrix.to_vec();
    let rows = a.len();
    let mut q: Vec<Vec<BigInt>> = (0..cols)
        .map(|i| {
            (0..cols)
                .map(|j| {
                    if i == j {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect();

    let swap_cols = |a: &mut Vec<Vec<BigInt>>, q: &mut Vec<Vec<BigInt>>, i: usize, j: usize| {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
        for row in q.iter_mut() {
            row.swap(i, j);
        }
    };
    // col_j -= k * col_i
    let sub_col =
        |a: &mut Vec<Vec<BigInt>>, q: &mut Vec<Vec<BigInt>>, j: usize, i: usize, k: &BigInt| {
            for row in a.iter_mut() {
                let t = &row[i] * k;
                row[j] -= t;
            }
            for row in q.iter_mut() {
                let t = &row[i] * k;
                row[j] -= t;
            }
        };

    let mut t = 0;
    while t < rows.min(cols) {
        // Pivot: smallest nonzero entry in the remaining block.
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[i][j].is_zero() && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        swap_cols(&mut a, &mut q, t, pj);

        loop {
            let mut changed = false;
            for i in t + 1..rows {
                if !a[i][t].is_zero() {
                    let k = a[i][t].div_floor(&a[t][t]);
                    for j in t..cols {
                        let v = &a[t][j] * &k;
                        a[i][j] -= v;
                    }
                    if !a[i][t].is_zero() {
                        a.swap(t, i);
                        changed = true;
                    }
                }
            }
            for j in t + 1..cols {
                if !a[t][j].is_zero() {
                    let k = a[t][j].div_floor(&a[t][t]);
                    sub_col(&mut a, &mut q, j, t, &k);
                    if !a[t][j].is_zero() {
                        swap_cols(&mut a, &mut q, t, j);
                        changed = true;
                    }
                }
            }
            if changed {
                continue;
            }
            // Divisibility: the pivot must divide the rest of the block.
            let mut fix = None;
            'outer: for i in t + 1..rows {
                for j in t + 1..cols {
                    if !(&a[i][j] % &a[t][t]).is_zero() {
                        fix = Some(i);
                        break 'outer;
                    }
                }
            }
            match fix {
                Some(i) => {
                    for j in t..cols {
                        let v = a[i][j].clone();
                        a[t][j] += v;
                    }
                }
                None => break,
            }
        }
        t += 1;
    }
    let diagonal: Vec<BigInt> = (0..t).map(|i| a[i][i].abs()).collect();
    SmithForm {
        rank: diagonal.len(),
        diagonal,
        column_transform: q,
    }
}

/// Integer abelianization data of a presentation.
#[derive(Clone, Debug, Serialize)]
pub struct AbelianizationData {
    /// Exponent vectors of the relators, one row per relator.
    pub relation_matrix: Vec<Vec<i64>>,
    /// Nonzero diagonal entries of the integer diagonalization.
    pub invariant_factors: Vec<String>,
    pub free_rank: usize,
    /// Homomorphism to ℤ, present exactly when the free rank is 1.
    pub weights: Option<Vec<i64>>,
    #[serde(skip)]
    smith: SmithForm,
    #[serde(skip)]
    generators: usize,
}

impl AbelianizationData {
    pub fn of(p: &Presentation) -> Self {
        let n = p.generator_count();
        let relation_matrix: Vec<Vec<i64>> =
            p.relators().iter().map(|r| r.exponent_vector(n)).collect();
        let big: Vec<Vec<BigInt>> = relation_matrix
            .iter()
            .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        let smith = smith_form(&big, n);
        let free_rank = n - smith.rank;
        let weights = (free_rank == 1).then(|| {
            let col = smith.rank;
            let mut w: Vec<i64> = (0..n)
                .map(|i| {
                    smith.column_transform[i][col]
                        .to_i64()
                        .expect("abelianization weight exceeds i64")
                })
                .collect();
            if w.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
                w.iter_mut().for_each(|x| *x = -*x);
            }
            w
        });
        AbelianizationData {
            relation_matrix,
            invariant_factors: smith.diagonal.iter().map(|d| d.to_string()).collect(),
            free_rank,
            weights,
            smith,
            generators: n,
        }
    }

    /// Torsion coefficients (invariant factors larger than 1).
    pub fn torsion(&self) -> Vec<BigInt> {
        self.smith
            .diagonal
            .iter()
            .filter(|d| !d.is_one())
            .cloned()
            .collect()
    }

    /// True when the abelianization is exactly ℤ.
    pub fn is_infinite_cyclic(&self) -> bool {
        self.free_rank == 1 && self.torsion().is_empty()
    }

    /// Image of `w` under the weight map, if one exists.
    pub fn weight_of(&self, w: &Word) -> Option<i64> {
        let weights = self.weights.as_ref()?;
        let e = w.exponent_vector(self.generators);
        Some(e.iter().zip(weights).map(|(a, b)| a * b).sum())
    }

    /// Coordinates of `w` in the diagonal basis of the abelianization. `w` is
    /// trivial in the abelianization iff coordinate `i` is divisible by the
    /// `i`-th invariant factor for `i < rank` and zero afterwards.
    pub fn coordinates(&self, w: &Word) -> Vec<BigInt> {
        let e = w.exponent_vector(self.generators);
        let q = &self.smith.column_transform;
        (0..self.generators)
            .map(|j| {
                (0..self.generators)
                    .map(|i| BigInt::from(e[i]) * &q[i][j])
                    .sum()
            })
            .collect()
    }

    /// Whether `w` maps to a nonzero element of the abelianization.
    pub fn detects(&self, w: &Word) -> bool {
        let c = self.coordinates(w);
        c.iter().enumerate().any(|(i, x)| {
            if i < self.smith.rank {
                !(x % &self.smith.diagonal[i]).is_zero()
            } else {
                !x.is_zero()
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
        let n = b[0].len();
        a.iter()
            .map(|row| {
                (0..n)
                    .map(|j| row.iter().zip(b).map(|(x, brow)| x * &brow[j]).sum())
                    .collect()
            })
            .collect()
    }

    #[test]
    fn diagonal_of_small_matrices() {
        let s = smith_form(&big(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]), 3);
        let d: Vec<i64> = s.diagonal.iter().map(|x| x.to_i64().unwrap()).collect();
        assert_eq!(d, vec![2, 6, 12]);

        let s = smith_form(&big(&[&[2, -3]]), 2);
        assert_eq!(s.rank, 1);
        assert!(s.diagonal[0].is_one());
    }

    #[test]
    fn kernel_columns_are_killed() {
        let m = big(&[&[2, -3, 0, 0], &[0, 0, 1, 1], &[1, -1, -1, 0]]);
        let s = smith_form(&m, 4);
        let mq = mat_mul(&m, &s.column_transform);
        for row in &mq {
            for x in &row[s.rank..] {
                assert!(x.is_zero());
            }
        }
    }
}
