//! Dense symmetric matrices over exact rationals.
//!
//! This is the oracle side of the crate: determinants by fraction-free
//! (Bareiss) elimination, inertia by symmetric congruence reduction, and
//! negative-definiteness by Sylvester's criterion. None of it knows
//! anything about trees, so it can independently check the combinatorial
//! pipeline in [`crate::diag`].

use std::fmt;

use num::{BigInt, One, Zero};
use thiserror::Error;

use crate::rational::{lcm, sign_of, Rational};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MatrixError {
    #[error("matrix is singular")]
    Singular,
    #[error("rows do not form a symmetric square matrix: {0}")]
    NotSymmetric(String),
}

/// Inertia triple of a symmetric matrix: counts of positive, negative
/// and zero eigenvalues.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Signature {
    pub n_plus: usize,
    pub n_minus: usize,
    pub n_zero: usize,
}

impl Signature {
    pub fn new(n_plus: usize, n_minus: usize, n_zero: usize) -> Self {
        Signature {
            n_plus,
            n_minus,
            n_zero,
        }
    }

    pub fn dimension(&self) -> usize {
        self.n_plus + self.n_minus + self.n_zero
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.n_plus, self.n_minus, self.n_zero)
    }
}

/// Pivot produced by the congruence reduction: either a nonzero diagonal
/// entry, or a hyperbolic 2x2 block `[[0,c],[c,0]]` contributing one
/// positive and one negative eigenvalue.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Pivot {
    Diagonal(Rational),
    Hyperbolic(Rational),
    Zero,
}

/// Full outcome of the congruence reduction.
#[derive(Clone, Debug)]
pub struct CongruenceReduction {
    pub signature: Signature,
    pub pivots: Vec<Pivot>,
    /// True when the reduction needed a row/column swap or a hyperbolic
    /// block, i.e. anything beyond unipotent operations.
    pub used_nonunipotent: bool,
}

impl CongruenceReduction {
    /// Product of the pivot contributions. Congruence by matrices of
    /// determinant +-1 preserves the determinant, so this always equals
    /// `det(M)` (a hyperbolic block `[[0,c],[c,0]]` contributes `-c^2`).
    pub fn pivot_product(&self) -> Rational {
        let mut acc = Rational::one();
        for p in &self.pivots {
            match p {
                Pivot::Diagonal(d) => acc *= d,
                Pivot::Hyperbolic(c) => acc *= -(c * c),
                Pivot::Zero => acc *= Rational::zero(),
            }
        }
        acc
    }
}

/// Dense symmetric matrix over [`Rational`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymMatrix {
    dim: usize,
    entries: Vec<Rational>,
}

impl SymMatrix {
    /// Build from explicit rows, validating squareness and symmetry.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self, MatrixError> {
        let dim = rows.len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(MatrixError::NotSymmetric(format!(
                    "row {} has length {}, expected {}",
                    i,
                    row.len(),
                    dim
                )));
            }
        }
        for i in 0..dim {
            for j in (i + 1)..dim {
                if rows[i][j] != rows[j][i] {
                    return Err(MatrixError::NotSymmetric(format!(
                        "entries ({i},{j}) and ({j},{i}) differ"
                    )));
                }
            }
        }
        Ok(SymMatrix {
            dim,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// Build from integer rows (convenience for tests and framing matrices).
    pub fn from_int_rows(rows: &[&[i64]]) -> Result<Self, MatrixError> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| crate::rational::rat(x)).collect())
                .collect(),
        )
    }

    /// Diagonal matrix with the given entries.
    pub fn from_diagonal(values: &[Rational]) -> Self {
        let dim = values.len();
        let mut entries = vec![Rational::zero(); dim * dim];
        for (i, v) in values.iter().enumerate() {
            entries[i * dim + i] = v.clone();
        }
        SymMatrix { dim, entries }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_diagonal(&vec![Rational::one(); dim])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.dim + j]
    }

    /// Principal submatrix picked out by (sorted, distinct) indices.
    pub fn principal_submatrix(&self, indices: &[usize]) -> SymMatrix {
        let dim = indices.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for &i in indices {
            for &j in indices {
                entries.push(self.get(i, j).clone());
            }
        }
        SymMatrix { dim, entries }
    }

    /// Leading principal submatrix of order `k`.
    pub fn leading_submatrix(&self, k: usize) -> SymMatrix {
        let idx: Vec<usize> = (0..k).collect();
        self.principal_submatrix(&idx)
    }

    /// Exact determinant.
    ///
    /// Denominators are cleared column by column (scaling det by the
    /// product of the per-column lcms), then integer Bareiss elimination
    /// runs fraction-free; the result is divided back by the cleared
    /// factor. The 0-dimensional matrix has determinant 1.
    pub fn determinant(&self) -> Rational {
        let n = self.dim;
        if n == 0 {
            return Rational::one();
        }
        let mut scale = BigInt::one();
        let mut m: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); n]; n];
        for j in 0..n {
            let mut col_lcm = BigInt::one();
            for i in 0..n {
                col_lcm = lcm(&col_lcm, self.get(i, j).denom());
            }
            for i in 0..n {
                let e = self.get(i, j);
                m[i][j] = e.numer() * (&col_lcm / e.denom());
            }
            scale *= col_lcm;
        }

        let mut sign = 1i32;
        let mut prev = BigInt::one();
        for k in 0..n.saturating_sub(1) {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                    Some(r) => {
                        m.swap(k, r);
                        sign = -sign;
                    }
                    None => return Rational::zero(),
                }
            }
            for i in (k + 1)..n {
                for j in (k + 1)..n {
                    let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                    m[i][j] = num / &prev; // exact by Sylvester's identity
                }
                m[i][k] = BigInt::zero();
            }
            prev = m[k][k].clone();
        }
        let det_scaled = if sign < 0 {
            -m[n - 1][n - 1].clone()
        } else {
            m[n - 1][n - 1].clone()
        };
        Rational::new(det_scaled, scale)
    }

    /// Inertia via symmetric congruence reduction with pivoting.
    pub fn signature(&self) -> Signature {
        self.congruence_reduction().signature
    }

    /// Symmetric congruence reduction. Diagonal pivots are used when
    /// available (swapping one in if necessary); when the whole active
    /// block has a zero diagonal, a hyperbolic 2x2 pivot clears a nonzero
    /// off-diagonal coupling, contributing (+1,-1) to the inertia.
    pub fn congruence_reduction(&self) -> CongruenceReduction {
        let n = self.dim;
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut sig = Signature::new(0, 0, 0);
        let mut used_nonunipotent = false;
        let mut k = 0;
        while k < n {
            if let Some(t) = (k..n).find(|&t| !a.get(t, t).is_zero()) {
                if t != k {
                    a.swap_sym(k, t);
                    used_nonunipotent = true;
                }
                let pivot = a.get(k, k).clone();
                for i in (k + 1)..n {
                    if !a.get(i, k).is_zero() {
                        let f = -(a.get(i, k) / &pivot);
                        a.add_multiple_sym(i, k, &f);
                    }
                }
                match sign_of(&pivot) {
                    1 => sig.n_plus += 1,
                    _ => sig.n_minus += 1,
                }
                pivots.push(Pivot::Diagonal(pivot));
                k += 1;
            } else {
                // all active diagonal entries are zero
                let coupling = (k..n)
                    .flat_map(|p| ((p + 1)..n).map(move |q| (p, q)))
                    .find(|&(p, q)| !a.get(p, q).is_zero());
                match coupling {
                    None => {
                        sig.n_zero += n - k;
                        pivots.extend(std::iter::repeat_n(Pivot::Zero, n - k));
                        break;
                    }
                    Some((p, q)) => {
                        used_nonunipotent = true;
                        // k <= p < q, so the swaps below never collide
                        if p != k {
                            a.swap_sym(k, p);
                        }
                        if q != k + 1 {
                            a.swap_sym(k + 1, q);
                        }
                        let c = a.get(k, k + 1).clone();
                        for i in (k + 2)..n {
                            if !a.get(i, k).is_zero() {
                                let f = -(a.get(i, k) / &c);
                                a.add_multiple_sym(i, k + 1, &f);
                            }
                            if !a.get(i, k + 1).is_zero() {
                                let f = -(a.get(i, k + 1) / &c);
                                a.add_multiple_sym(i, k, &f);
                            }
                        }
                        sig.n_plus += 1;
                        sig.n_minus += 1;
                        pivots.push(Pivot::Hyperbolic(c));
                        k += 2;
                    }
                }
            }
        }
        CongruenceReduction {
            signature: sig,
            pivots,
            used_nonunipotent,
        }
    }

    /// Exact inverse.
    pub fn inverse(&self) -> Result<SymMatrix, MatrixError> {
        let n = self.dim;
        let mut left: Vec<Vec<Rational>> = (0..n)
            .map(|i| (0..n).map(|j| self.get(i, j).clone()).collect())
            .collect();
        let mut right: Vec<Vec<Rational>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            Rational::one()
                        } else {
                            Rational::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        for col in 0..n {
            let pivot_row = (col..n)
                .find(|&r| !left[r][col].is_zero())
                .ok_or(MatrixError::Singular)?;
            left.swap(col, pivot_row);
            right.swap(col, pivot_row);
            let p = left[col][col].clone();
            for j in 0..n {
                left[col][j] /= &p;
                right[col][j] /= &p;
            }
            for r in 0..n {
                if r != col && !left[r][col].is_zero() {
                    let f = left[r][col].clone();
                    for j in 0..n {
                        let lv = &f * &left[col][j];
                        left[r][j] -= lv;
                        let rv = &f * &right[col][j];
                        right[r][j] -= rv;
                    }
                }
            }
        }
        SymMatrix::from_rows(right)
    }

    /// Sylvester's criterion: negative definite iff `(-1)^k * minor_k > 0`
    /// for every leading principal minor. Independent of the congruence
    /// reduction, which the property tests exploit.
    ///
    /// One fraction-free elimination pass suffices: without row swaps
    /// the successive Bareiss pivots are exactly the leading principal
    /// minors (of the uniformly scaled matrix, which preserves their
    /// signs), and a zero pivot already refutes definiteness.
    pub fn is_negative_definite(&self) -> bool {
        use num::bigint::Sign;
        let n = self.dim;
        if n == 0 {
            return true;
        }
        let mut scale = BigInt::one();
        for e in &self.entries {
            scale = lcm(&scale, e.denom());
        }
        let mut m: Vec<Vec<BigInt>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let e = self.get(i, j);
                        e.numer() * (&scale / e.denom())
                    })
                    .collect()
            })
            .collect();
        let mut prev = BigInt::one();
        for k in 0..n {
            let expected = if k % 2 == 0 { Sign::Minus } else { Sign::Plus };
            if m[k][k].sign() != expected {
                return false;
            }
            if k + 1 == n {
                break;
            }
            for i in (k + 1)..n {
                for j in (k + 1)..n {
                    let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                    m[i][j] = num / &prev;
                }
            }
            prev = m[k][k].clone();
        }
        true
    }

    /// Matrix product (used by tests to certify inverses).
    pub fn mul(&self, other: &SymMatrix) -> Vec<Vec<Rational>> {
        let n = self.dim;
        let mut out = vec![vec![Rational::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = Rational::zero();
                for k in 0..n {
                    acc += self.get(i, k) * other.get(k, j);
                }
                out[i][j] = acc;
            }
        }
        out
    }

    fn swap_sym(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        let n = self.dim;
        for col in 0..n {
            self.entries.swap(i * n + col, j * n + col);
        }
        for row in 0..n {
            self.entries.swap(row * n + i, row * n + j);
        }
    }

    /// Row then column operation `row_i += f*row_k; col_i += f*col_k`,
    /// keeping the matrix symmetric.
    fn add_multiple_sym(&mut self, i: usize, k: usize, f: &Rational) {
        let n = self.dim;
        for col in 0..n {
            let v = self.get(k, col) * f;
            self.entries[i * n + col] += v;
        }
        for row in 0..n {
            let v = &self.entries[row * n + k] * f;
            self.entries[row * n + i] += v;
        }
    }
}

impl fmt::Display for SymMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.dim {
            let row: Vec<String> = (0..self.dim)
                .map(|j| crate::rational::fmt_rational(self.get(i, j)))
                .collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}
