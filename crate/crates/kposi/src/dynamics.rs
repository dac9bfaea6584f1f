//! Trajectory simulation and exterior-product dynamics.
//!
//! States evolve by x(j+1) = A(j) x(j); the k-fold exterior product
//! eta(j) = x(j,w^1) ^ ... ^ x(j,w^k) of k trajectories evolves by the k-th
//! multiplicative compound, eta(j+1) = A^(k) eta(j). When A^(k) is strictly
//! positive the Perron theorem pins the asymptotics:
//! eta(j) / rho^j -> (w^B)' eta(0) v^B.

use crate::compound::{compound, CompoundMatrix};
use crate::error::{Error, Result};
use crate::matrix::{dot, max_abs_entry, normalized, Matrix};
use crate::signvar::{cone_membership, sign_variations, ConeMembership};
use crate::{scalar, Scalar};

/// A simulated state trajectory with per-step sign-variation counts and
/// cone membership at a chosen order.
#[derive(Debug, Clone)]
pub struct TrajectoryTrace<T> {
    pub k: usize,
    pub renormalized: bool,
    /// Relative zero threshold used for the sign counts, times each state's
    /// largest magnitude.
    pub zero_tol_rel: T,
    pub states: Vec<Vec<T>>,
    pub s_minus_trace: Vec<usize>,
    pub s_plus_trace: Vec<usize>,
    pub cone_flags: Vec<ConeMembership>,
}

/// Iterates x(j+1) = A(j mod len) x(j) for `steps` steps, recording states
/// x(0)..x(steps) and their sign-variation data.
pub fn simulate<T: Scalar>(
    a_seq: &[Matrix<T>],
    x0: &[T],
    steps: usize,
    k: usize,
    renormalize: bool,
    zero_tol_rel: T,
) -> Result<TrajectoryTrace<T>> {
    if a_seq.is_empty() {
        return Err(Error::Dimension("need at least one step matrix".into()));
    }
    let n = x0.len();
    for m in a_seq {
        if !m.is_square() || m.rows() != n {
            return Err(Error::Dimension(format!(
                "step matrices must be {n}x{n} to act on the state, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
    }
    if k < 1 || k > n {
        return Err(Error::Dimension(format!(
            "cone order must be in 1..={n}, got {k}"
        )));
    }

    let mut states = Vec::with_capacity(steps + 1);
    let mut x = x0.to_vec();
    if renormalize {
        x = normalized(&x);
    }
    states.push(x.clone());
    for j in 0..steps {
        x = a_seq[j % a_seq.len()].mul_vec(&x)?;
        if renormalize {
            x = normalized(&x);
        }
        states.push(x.clone());
    }

    let mut s_minus_trace = Vec::with_capacity(states.len());
    let mut s_plus_trace = Vec::with_capacity(states.len());
    let mut cone_flags = Vec::with_capacity(states.len());
    for state in &states {
        let t = zero_tol_rel * max_abs_entry(state);
        let sv = sign_variations(state, t)?;
        s_minus_trace.push(sv.s_minus);
        s_plus_trace.push(sv.s_plus);
        cone_flags.push(cone_membership(state, k, t)?);
    }

    Ok(TrajectoryTrace {
        k,
        renormalized: renormalize,
        zero_tol_rel,
        states,
        s_minus_trace,
        s_plus_trace,
        cone_flags,
    })
}

/// Exterior product of k vectors in R^n, laid out as the C(n,k) minors of
/// the n x k matrix with the inputs as columns, rows in lexicographic order.
pub fn wedge<T: Scalar>(vectors: &[Vec<T>]) -> Result<Vec<T>> {
    let k = vectors.len();
    if k == 0 {
        return Err(Error::Dimension("wedge of zero vectors".into()));
    }
    let n = vectors[0].len();
    if vectors.iter().any(|v| v.len() != n) {
        return Err(Error::Dimension(
            "wedge factors must share one length".into(),
        ));
    }
    if k > n {
        return Err(Error::Dimension(format!(
            "cannot wedge {k} vectors in dimension {n}"
        )));
    }
    let mut stacked = Matrix::zeros(n, k);
    for (j, v) in vectors.iter().enumerate() {
        for (i, &x) in v.iter().enumerate() {
            stacked.set(i, j, x);
        }
    }
    let c = compound(&stacked, k)?;
    Ok((0..c.data().rows()).map(|r| c.data().get(r, 0)).collect())
}

/// Right/left Perron eigenpair of an entrywise-positive matrix:
/// rho(B) with B v = rho v, B' w = rho w, v unit norm positive,
/// w scaled so w'v = 1.
#[derive(Debug, Clone, PartialEq)]
pub struct PerronPair<T> {
    pub rho: T,
    pub right: Vec<T>,
    pub left: Vec<T>,
}

fn power_iterate<T: Scalar>(b: &Matrix<T>, tol: T, max_iter: usize) -> Result<(T, Vec<T>)> {
    let n = b.rows();
    let scale = b.frobenius_norm();
    let mut v = vec![T::one() / scalar::<T>((n as f64).sqrt()); n];
    for _ in 0..max_iter {
        let bv = b.mul_vec(&v)?;
        let rho = dot(&v, &bv); // Rayleigh quotient, v has unit norm
        let mut resid = T::zero();
        for i in 0..n {
            let d = bv[i] - rho * v[i];
            resid = resid + d * d;
        }
        if resid.sqrt() <= tol * scale {
            return Ok((rho, v));
        }
        v = normalized(&bv);
    }
    Err(Error::Convergence(format!(
        "power iteration did not meet the residual target in {max_iter} steps"
    )))
}

/// Perron data of a strictly positive matrix via power iteration on B and
/// B transpose; positivity guarantees convergence.
pub fn perron<T: Scalar>(b: &Matrix<T>, tol: T, max_iter: usize) -> Result<PerronPair<T>> {
    if !b.is_square() {
        return Err(Error::Dimension(
            "Perron analysis requires a square matrix".into(),
        ));
    }
    if b.data().iter().any(|&x| x <= T::zero()) {
        return Err(Error::Precondition(
            "Perron analysis requires strictly positive entries".into(),
        ));
    }
    let (rho, mut right) = power_iterate(b, tol, max_iter)?;
    let (_, mut left) = power_iterate(&b.transpose(), tol, max_iter)?;
    // positivity of the limit vector is a theorem; fix the sign convention
    if right[0] < T::zero() {
        right.iter_mut().for_each(|x| *x = -*x);
    }
    if left[0] < T::zero() {
        left.iter_mut().for_each(|x| *x = -*x);
    }
    let inner = dot(&left, &right);
    if inner == T::zero() {
        return Err(Error::Internal(
            "left and right Perron vectors orthogonal".into(),
        ));
    }
    let left = left.iter().map(|&x| x / inner).collect();
    Ok(PerronPair { rho, right, left })
}

/// Exterior-product trace with the Perron-limit prediction when available.
#[derive(Debug, Clone)]
pub struct WedgeTrace<T> {
    pub k: usize,
    /// Raw eta(0)..eta(steps).
    pub eta: Vec<Vec<T>>,
    /// eta(j) / rho^j when the Perron data exists (sign handled for
    /// negative compounds), kept to dodge under/overflow at large j.
    pub eta_scaled: Option<Vec<Vec<T>>>,
    pub rho: Option<T>,
    pub v_b: Option<Vec<T>>,
    pub w_b: Option<Vec<T>>,
    /// (w^B)' eta(0) v^B, the Perron limit of eta(j)/rho^j.
    pub predicted_limit: Option<Vec<T>>,
    /// || eta(j)/rho^j - predicted ||.
    pub scaled_error: Option<Vec<T>>,
    /// True when B = A^(k) < 0 and the analysis ran on -B with the parity
    /// of j reinstating signs.
    pub signature_negative: bool,
    /// Largest relative disagreement between the compound-iteration path
    /// and the wedged-trajectories path.
    pub dual_path_max_rel_err: T,
}

const DUAL_PATH_TOL: f64 = 1e-8;
const PERRON_TOL: f64 = 1e-10;
const PERRON_MAX_ITER: usize = 100_000;

/// Runs the exterior-product dynamics two independent ways (iterating the
/// compound on eta(0), and wedging the k simulated state trajectories),
/// verifies they agree, and attaches the Perron prediction when the
/// compound is strictly one-signed.
pub fn wedge_dynamics<T: Scalar>(
    a: &Matrix<T>,
    inits: &[Vec<T>],
    steps: usize,
) -> Result<WedgeTrace<T>> {
    if !a.is_square() {
        return Err(Error::Dimension(
            "wedge dynamics requires a square matrix".into(),
        ));
    }
    let n = a.rows();
    let k = inits.len();
    if k < 1 || k > n {
        return Err(Error::Dimension(format!(
            "need between 1 and {n} initial vectors, got {k}"
        )));
    }
    let b: CompoundMatrix<T> = compound(a, k)?;
    let b = b.into_data();

    // path one: iterate the compound
    let mut eta = Vec::with_capacity(steps + 1);
    eta.push(wedge(inits)?);
    for j in 0..steps {
        let next = b.mul_vec(&eta[j])?;
        eta.push(next);
    }

    // path two: wedge the simulated trajectories
    let mut trajectories: Vec<Vec<Vec<T>>> = Vec::with_capacity(k);
    for w in inits {
        let trace = simulate(std::slice::from_ref(a), w, steps, 1, false, T::zero())?;
        trajectories.push(trace.states);
    }
    let mut max_rel = T::zero();
    for j in 0..=steps {
        let at_j: Vec<Vec<T>> = trajectories.iter().map(|t| t[j].clone()).collect();
        let wedged = wedge(&at_j)?;
        let scale = max_abs_entry(&eta[j])
            .max(max_abs_entry(&wedged))
            .max(T::one());
        for (x, y) in eta[j].iter().zip(&wedged) {
            max_rel = max_rel.max((*x - *y).abs() / scale);
        }
    }
    if max_rel > scalar(DUAL_PATH_TOL) {
        return Err(Error::Internal(format!(
            "compound iteration and wedged trajectories disagree: relative error {max_rel}"
        )));
    }

    // Perron prediction, applied to -B when the compound is negative
    let all_positive = b.data().iter().all(|&x| x > T::zero());
    let all_negative = b.data().iter().all(|&x| x < T::zero());
    let signature_negative = all_negative;
    let perron_input = if all_negative {
        Some(b.scale(-T::one()))
    } else if all_positive {
        Some(b)
    } else {
        None
    };

    let (mut rho, mut v_b, mut w_b, mut predicted, mut scaled, mut errs) =
        (None, None, None, None, None, None);
    if let Some(bp) = perron_input {
        let pair = perron(&bp, scalar(PERRON_TOL), PERRON_MAX_ITER)?;
        let lim: Vec<T> = {
            let c = dot(&pair.left, &eta[0]);
            pair.right.iter().map(|&x| x * c).collect()
        };
        // eta(j) = (-1)^j (-B)^j eta(0) in the negative case
        let mut scaled_seq = Vec::with_capacity(steps + 1);
        let mut err_seq = Vec::with_capacity(steps + 1);
        let mut denom = T::one();
        for (j, e) in eta.iter().enumerate() {
            let parity = if signature_negative && j % 2 == 1 {
                -T::one()
            } else {
                T::one()
            };
            let row: Vec<T> = e.iter().map(|&x| x * parity / denom).collect();
            let mut err = T::zero();
            for (a_, b_) in row.iter().zip(&lim) {
                let d = *a_ - *b_;
                err = err + d * d;
            }
            err_seq.push(err.sqrt());
            scaled_seq.push(row);
            denom = denom * pair.rho;
        }
        rho = Some(pair.rho);
        v_b = Some(pair.right);
        w_b = Some(pair.left);
        predicted = Some(lim);
        scaled = Some(scaled_seq);
        errs = Some(err_seq);
    }

    Ok(WedgeTrace {
        k,
        eta,
        eta_scaled: scaled,
        rho,
        v_b,
        w_b,
        predicted_limit: predicted,
        scaled_error: errs,
        signature_negative,
        dual_path_max_rel_err: max_rel,
    })
}
