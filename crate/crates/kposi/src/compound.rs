//! Minors and multiplicative compounds.
//!
//! The k-th multiplicative compound of an n x m matrix collects all its
//! order-k minors in a C(n,k) x C(m,k) matrix, rows and columns indexed by
//! Q_{k,n} and Q_{k,m} in lexicographic order. Cauchy-Binet turns matrix
//! products into compound products, which is what makes these useful for
//! exterior-product dynamics.

use crate::error::{Error, Result};
use crate::index::{binomial, enumerate_sequences_capped, IndexSequence, DEFAULT_SIZE_CAP};
use crate::matrix::Matrix;
use crate::Scalar;

/// The k-th multiplicative compound of a base matrix, stored densely.
#[derive(Debug, Clone, PartialEq)]
pub struct CompoundMatrix<T> {
    order: usize,
    base_rows: usize,
    base_cols: usize,
    data: Matrix<T>,
}

impl<T: Scalar> CompoundMatrix<T> {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn base_rows(&self) -> usize {
        self.base_rows
    }

    pub fn base_cols(&self) -> usize {
        self.base_cols
    }

    /// The C(n,k) x C(m,k) matrix of minors.
    pub fn data(&self) -> &Matrix<T> {
        &self.data
    }

    pub fn into_data(self) -> Matrix<T> {
        self.data
    }
}

/// Extracts the square submatrix A[rows, cols].
pub fn submatrix<T: Scalar>(
    a: &Matrix<T>,
    rows: &IndexSequence,
    cols: &IndexSequence,
) -> Result<Matrix<T>> {
    if rows.ambient() != a.rows() || cols.ambient() != a.cols() {
        return Err(Error::Dimension(format!(
            "index sequences address a {}x{} matrix, but the matrix is {}x{}",
            rows.ambient(),
            cols.ambient(),
            a.rows(),
            a.cols()
        )));
    }
    let mut data = Vec::with_capacity(rows.len() * cols.len());
    for i in rows.positions() {
        for j in cols.positions() {
            data.push(a.get(i, j));
        }
    }
    Matrix::new(rows.len(), cols.len(), data)
}

/// The minor A(rows|cols) = det(A[rows, cols]).
pub fn minor<T: Scalar>(a: &Matrix<T>, rows: &IndexSequence, cols: &IndexSequence) -> Result<T> {
    if rows.len() != cols.len() {
        return Err(Error::Dimension(format!(
            "minor needs equally many rows and columns, got {} and {}",
            rows.len(),
            cols.len()
        )));
    }
    submatrix(a, rows, cols)?.det()
}

/// Minor together with its Hadamard bound (the product of the Euclidean row
/// norms of the submatrix), the scale against which "zero" is judged.
pub fn minor_with_bound<T: Scalar>(
    a: &Matrix<T>,
    rows: &IndexSequence,
    cols: &IndexSequence,
) -> Result<(T, T)> {
    if rows.len() != cols.len() {
        return Err(Error::Dimension(format!(
            "minor needs equally many rows and columns, got {} and {}",
            rows.len(),
            cols.len()
        )));
    }
    let sub = submatrix(a, rows, cols)?;
    let mut bound = T::one();
    for i in 0..sub.rows() {
        bound = bound * sub.row(i).iter().map(|&x| x * x).sum::<T>().sqrt();
    }
    Ok((sub.det()?, bound))
}

/// The k-th multiplicative compound A^(k) under the default size cap.
pub fn compound<T: Scalar>(a: &Matrix<T>, k: usize) -> Result<CompoundMatrix<T>> {
    compound_capped(a, k, DEFAULT_SIZE_CAP)
}

pub fn compound_capped<T: Scalar>(
    a: &Matrix<T>,
    k: usize,
    cap: usize,
) -> Result<CompoundMatrix<T>> {
    let (n, m) = (a.rows(), a.cols());
    if k < 1 || k > n.min(m) {
        return Err(Error::Dimension(format!(
            "compound order must satisfy 1 <= k <= min(n,m) = {}, got {k}",
            n.min(m)
        )));
    }
    let (cn, cm) = (binomial(n, k), binomial(m, k));
    if cn.saturating_mul(cm) > cap {
        return Err(Error::Capacity(format!(
            "compound would hold C({n},{k}) x C({m},{k}) = {cn} x {cm} minors, exceeding the cap {cap}"
        )));
    }
    let row_seqs = enumerate_sequences_capped(k, n, cap)?;
    let col_seqs = enumerate_sequences_capped(k, m, cap)?;
    let mut data = Vec::with_capacity(cn * cm);
    for r in &row_seqs {
        for c in &col_seqs {
            data.push(minor(a, r, c)?);
        }
    }
    Ok(CompoundMatrix {
        order: k,
        base_rows: n,
        base_cols: m,
        data: Matrix::new(cn, cm, data)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{fixture, FixtureId};
    use crate::index::enumerate_sequences;
    use crate::Matrix64;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn seq(indices: &[usize], ambient: usize) -> IndexSequence {
        IndexSequence::new(indices.to_vec(), ambient).unwrap()
    }

    #[test]
    fn intro_matrix_minors_match_known_values() {
        let a: Matrix64 = fixture(FixtureId::Intro4);
        assert_eq!(minor(&a, &seq(&[1, 2], 4), &seq(&[1, 2], 4)).unwrap(), 1.0);
        assert_eq!(minor(&a, &seq(&[1, 4], 4), &seq(&[1, 2], 4)).unwrap(), -2.0);
    }

    #[test]
    fn counterexample_minor() {
        let a: Matrix64 = fixture(FixtureId::Counter3);
        assert_eq!(minor(&a, &seq(&[2, 3], 3), &seq(&[1, 2], 3)).unwrap(), -2.0);
        assert_eq!(minor(&a, &seq(&[1, 2], 3), &seq(&[1, 2], 3)).unwrap(), 26.0);
    }

    #[test]
    fn identity_full_minor_is_one() {
        let id = Matrix64::identity(3);
        let all = seq(&[1, 2, 3], 3);
        assert_eq!(minor(&id, &all, &all).unwrap(), 1.0);
    }

    #[test]
    fn wedge_example_second_compound() {
        let a: Matrix64 = fixture(FixtureId::Wedge3);
        let b = compound(&a, 2).unwrap();
        let expected = [
            [0.612, 0.078, 0.012],
            [0.077, 0.703, 0.177],
            [0.002, 0.088, 0.702],
        ];
        for (i, row) in expected.iter().enumerate() {
            for (j, want) in row.iter().enumerate() {
                assert!((b.data().get(i, j) - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn compound_of_identity_is_identity() {
        for n in 2..=5 {
            for k in 1..=n {
                let c = compound(&Matrix64::identity(n), k).unwrap();
                let expect = Matrix64::identity(crate::index::binomial(n, k));
                assert_eq!(c.data(), &expect);
            }
        }
    }

    #[test]
    fn first_compound_reproduces_the_matrix() {
        let a: Matrix64 = fixture(FixtureId::Example1);
        let c = compound(&a, 1).unwrap();
        assert_eq!(c.data(), &a);
    }

    #[test]
    fn full_compound_is_the_determinant() {
        let a: Matrix64 = fixture(FixtureId::Example1);
        let c = compound(&a, 4).unwrap();
        assert_eq!(c.data().rows(), 1);
        let det = a.det().unwrap();
        assert!(((c.data().get(0, 0) - det) / det).abs() < 1e-10);
    }

    #[test]
    fn random_second_compound_against_direct_two_by_two_minors() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let data: Vec<f64> = (0..16).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let a = Matrix64::new(4, 4, data).unwrap();
        let c = compound(&a, 2).unwrap();
        let seqs = enumerate_sequences(2, 4).unwrap();
        for (ri, r) in seqs.iter().enumerate() {
            for (ci, cseq) in seqs.iter().enumerate() {
                let (p, q) = (r.indices()[0] - 1, r.indices()[1] - 1);
                let (s, t) = (cseq.indices()[0] - 1, cseq.indices()[1] - 1);
                let direct = a.get(p, s) * a.get(q, t) - a.get(p, t) * a.get(q, s);
                assert!((c.data().get(ri, ci) - direct).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn cap_violation_names_the_binomial() {
        let a = Matrix64::zeros(30, 30);
        match compound_capped(&a, 15, 10_000) {
            Err(Error::Capacity(msg)) => assert!(msg.contains("C(30,15)")),
            other => panic!("expected capacity error, got {other:?}"),
        }
    }

    #[test]
    fn mismatched_cardinalities_rejected() {
        let a = Matrix64::identity(4);
        assert!(minor(&a, &seq(&[1, 2], 4), &seq(&[1, 2, 3], 4)).is_err());
        let b = Matrix64::identity(3);
        assert!(minor(&b, &seq(&[1, 2], 4), &seq(&[1, 2], 4)).is_err());
    }
}
