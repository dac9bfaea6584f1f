//! Spectral analysis of nonsingular SSR_k matrices.
//!
//! For such a matrix the eigenvalues ordered by modulus satisfy a strict
//! gap |lambda_k| > |lambda_{k+1}|, and the real vectors u^1..u^n built
//! from the eigenvectors (real ones kept, complex pairs contributing their
//! real and imaginary parts) split R^n into an invariant subspace
//! E = span(u^1..u^k) inside the open cone P^k_+ and an invariant
//! complement meeting P^k_- only at zero. Trajectories started in the two
//! subspaces separate exponentially at rate |lambda_{k+1}/lambda_k|.

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::classify::{classify_order, Verdict};
use crate::eigen::eigen_decompose;
use crate::error::{Error, Result};
use crate::matrix::{dot, max_abs_entry, norm2, normalized, Matrix};
use crate::signvar::{s_minus, s_plus};
use crate::tol::ToleranceProfile;
use crate::{scalar, Scalar};

/// Ordered eigenstructure of a nonsingular SSR_k matrix with the real basis
/// and the invariant splitting E / E^c.
#[derive(Debug, Clone)]
pub struct SpectralSplit<T> {
    pub k: usize,
    /// Common strict sign of the order-k minors.
    pub signature: i8,
    /// Sorted by modulus descending, ties by real part then imaginary part
    /// descending; conjugate pairs adjacent, positive imaginary part first.
    pub eigenvalues: Vec<Complex<T>>,
    /// Canonicalized eigenvectors matching `eigenvalues`: unit norm, entry
    /// of largest modulus made real and positive.
    pub eigenvectors: Vec<Vec<Complex<T>>>,
    /// u^1..u^n: real eigenvectors kept; each complex pair contributes
    /// (Re v, Im v) of its positive-imaginary-part member.
    pub real_basis: Vec<Vec<T>>,
    /// u^1..u^k.
    pub e_basis: Vec<Vec<T>>,
    /// Basis of the invariant complement: u^{k+1}..u^n in the generic case.
    pub ec_basis: Vec<Vec<T>>,
    /// |lambda_{k+1}| / |lambda_k|, strictly inside (0,1).
    pub gap_ratio: T,
    /// Whether epsilon * lambda_1 ... lambda_k is real and positive within
    /// tau_spec.
    pub product_sign_check: bool,
    /// False when u^1..u^n were not independent and `ec_basis` had to be
    /// rebuilt as the annihilator of the leading left eigenvectors.
    pub generic_basis: bool,
}

/// Sampled and fitted evidence for the exponential-separation theorem.
#[derive(Debug, Clone)]
pub struct SeparationCheck<T> {
    /// b = |lambda_{k+1}/lambda_k|.
    pub rate_bound: T,
    /// Least-squares slope of log(||xtilde(j)||/||x(j)||) per trajectory pair.
    pub measured_rates: Vec<T>,
    pub e_in_cone: bool,
    pub ec_meets_cone_only_at_zero: bool,
    /// ||A u - proj_span(A u)|| for every basis vector of E and E^c.
    pub invariance_residuals: Vec<T>,
    pub rates_within_bound: bool,
    pub pass: bool,
    /// Sampled vector from E with s_plus > k-1, if any.
    pub witness_e: Option<Vec<T>>,
    /// Sampled vector from E^c with s_minus < k, if any.
    pub witness_ec: Option<Vec<T>>,
}

/// Result of searching for the finite entry time into P^k_+.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HittingOutcome {
    Found {
        /// Smallest j with s_plus(x(j)) <= k-1.
        q: usize,
        /// First later step where the bound failed again; must stay `None`
        /// when the initial state has a nonzero E-component.
        first_violation: Option<usize>,
    },
    NotFound {
        /// s_plus along the whole simulated trajectory.
        s_plus_trace: Vec<usize>,
    },
}

fn sort_key<T: Scalar>(z: &Complex<T>) -> (T, T, T) {
    (z.norm(), z.re, z.im)
}

/// Scales a complex vector so its largest-modulus entry is real positive
/// and the whole vector has unit norm. This pins down the otherwise
/// arbitrary complex phase, making the real/imaginary split reproducible.
fn canonicalize<T: Scalar>(v: &[Complex<T>]) -> Vec<Complex<T>> {
    let mut best = 0;
    for (i, z) in v.iter().enumerate() {
        if z.norm_sqr() > v[best].norm_sqr() {
            best = i;
        }
    }
    let pivot = v[best];
    let pivot_norm = pivot.norm();
    let norm: T = v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
    if pivot_norm == T::zero() || norm == T::zero() {
        return v.to_vec();
    }
    let factor = pivot.conj() / pivot_norm / norm;
    v.iter().map(|z| z * factor).collect()
}

/// Gram-Schmidt with re-orthogonalization; returns the orthonormal vectors
/// spanning the input (near-dependent directions are dropped).
fn orthonormalize<T: Scalar>(vectors: &[Vec<T>], drop_tol: T) -> Vec<Vec<T>> {
    let mut basis: Vec<Vec<T>> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        for _ in 0..2 {
            for q in &basis {
                let c = dot(&w, q);
                for (wi, qi) in w.iter_mut().zip(q) {
                    *wi = *wi - c * *qi;
                }
            }
        }
        let n = norm2(&w);
        if n > drop_tol * norm2(v).max(T::one()) {
            basis.push(w.iter().map(|&x| x / n).collect());
        }
    }
    basis
}

/// Orthonormal basis of the orthogonal complement of span(vectors) in R^n.
fn orthonormal_complement<T: Scalar>(vectors: &[Vec<T>], n: usize, drop_tol: T) -> Vec<Vec<T>> {
    let mut basis = orthonormalize(vectors, drop_tol);
    let span_dim = basis.len();
    for j in 0..n {
        let mut e = vec![T::zero(); n];
        e[j] = T::one();
        let mut w = e;
        for _ in 0..2 {
            for q in &basis {
                let c = dot(&w, q);
                for (wi, qi) in w.iter_mut().zip(q) {
                    *wi = *wi - c * *qi;
                }
            }
        }
        let nw = norm2(&w);
        if nw > drop_tol {
            basis.push(w.iter().map(|&x| x / nw).collect());
        }
    }
    basis.split_off(span_dim)
}

/// Builds the real vectors u^1..u^n from sorted eigenpairs.
fn real_basis_from_pairs<T: Scalar>(pairs: &[(Complex<T>, Vec<Complex<T>>)]) -> Vec<Vec<T>> {
    let mut out = Vec::with_capacity(pairs.len());
    let mut i = 0;
    while i < pairs.len() {
        let (lambda, vec) = &pairs[i];
        if lambda.im == T::zero() {
            out.push(vec.iter().map(|z| z.re).collect());
            i += 1;
        } else {
            out.push(vec.iter().map(|z| z.re).collect());
            out.push(vec.iter().map(|z| z.im).collect());
            i += 2;
        }
    }
    out
}

/// Sorted, canonicalized eigenpairs of `a` under the crate ordering.
type EigenPairs<T> = Vec<(Complex<T>, Vec<Complex<T>>)>;

fn sorted_eigenpairs<T: Scalar>(a: &Matrix<T>) -> Result<EigenPairs<T>> {
    let dec = eigen_decompose(a)?;
    let mut pairs = dec.eigenpairs();
    pairs.sort_by(|(x, _), (y, _)| {
        let (xm, xr, xi) = sort_key(x);
        let (ym, yr, yi) = sort_key(y);
        (ym, yr, yi)
            .partial_cmp(&(xm, xr, xi))
            .expect("finite eigenvalues")
    });
    // the ordering keys (modulus, re, im) keep conjugates adjacent unless
    // two distinct pairs coincide exactly; the basis construction needs
    // adjacency, so refuse the pathological case instead of mispairing
    let mut i = 0;
    while i < pairs.len() {
        if pairs[i].0.im != T::zero() {
            if i + 1 >= pairs.len() || pairs[i + 1].0 != pairs[i].0.conj() {
                return Err(Error::Internal(
                    "conjugate eigenvalue pair not adjacent after ordering".into(),
                ));
            }
            i += 2;
        } else {
            i += 1;
        }
    }
    Ok(pairs
        .into_iter()
        .map(|(l, v)| (l, canonicalize(&v)))
        .collect())
}

/// Eigenvalues of a square matrix under the crate ordering (modulus
/// descending, ties by real then imaginary part descending, conjugate
/// pairs adjacent with positive imaginary part first).
pub fn eigenvalues<T: Scalar>(a: &Matrix<T>) -> Result<Vec<Complex<T>>> {
    Ok(sorted_eigenpairs(a)?.into_iter().map(|(l, _)| l).collect())
}

/// Computes the ordered eigenstructure and the E / E^c splitting of a
/// nonsingular SSR_k matrix. The SSR_k hypothesis is re-verified.
pub fn spectral_split<T: Scalar>(
    a: &Matrix<T>,
    k: usize,
    tol: &ToleranceProfile,
) -> Result<SpectralSplit<T>> {
    tol.validate()?;
    if !a.is_square() {
        return Err(Error::Dimension(
            "spectral split requires a square matrix".into(),
        ));
    }
    let n = a.rows();
    if k < 1 || k >= n {
        return Err(Error::Dimension(format!(
            "split order must satisfy 1 <= k <= n-1 = {}, got {k}",
            n - 1
        )));
    }
    // Gap first so an equal-modulus pair straddling k is reported as a
    // degenerate spectrum with its moduli, whatever else is wrong.
    let pairs = sorted_eigenpairs(a)?;
    let moduli: Vec<T> = pairs.iter().map(|(l, _)| l.norm()).collect();
    let tau_gap: T = scalar(tol.tau_gap);
    if moduli[k - 1] - moduli[k] <= tau_gap * moduli[k - 1] {
        return Err(Error::DegenerateSpectrum(format!(
            "|lambda_{k}| = {} and |lambda_{}| = {} are closer than tau_gap = {}",
            moduli[k - 1],
            k + 1,
            moduli[k],
            tol.tau_gap
        )));
    }
    let gap_ratio = moduli[k] / moduli[k - 1];

    let full = classify_order(a, n, tol)?;
    if full.witness_positive.is_none() && full.witness_negative.is_none() {
        return Err(Error::Precondition(
            "matrix is singular within tau_zero".into(),
        ));
    }
    let classification = classify_order(a, k, tol)?;
    if classification.verdict != Verdict::Ssr {
        return Err(Error::Precondition(format!(
            "matrix is {} at order {k}, but the spectral split needs SSR",
            classification.verdict.as_str()
        )));
    }
    let signature = classification
        .signature
        .expect("SSR verdict carries a signature");

    let product = pairs
        .iter()
        .take(k)
        .fold(Complex::new(T::one(), T::zero()), |acc, (l, _)| acc * *l);
    let tau_spec: T = scalar(tol.tau_spec);
    let signed_re = scalar::<T>(signature as f64) * product.re;
    let product_sign_check = product.im.abs() <= tau_spec * product.norm() && signed_re > T::zero();

    let real_basis = real_basis_from_pairs(&pairs);
    debug_assert_eq!(real_basis.len(), n);
    let e_basis: Vec<Vec<T>> = real_basis[..k].to_vec();
    let tail: Vec<Vec<T>> = real_basis[k..].to_vec();

    let mut u_matrix = Matrix::zeros(n, n);
    for (j, u) in real_basis.iter().enumerate() {
        for (i, &x) in u.iter().enumerate() {
            u_matrix.set(i, j, x);
        }
    }
    let drop_tol: T = scalar(tol.tau_spec);
    let (ec_basis, generic_basis) = if u_matrix.rank(scalar(tol.tau_zero)) == n {
        (tail, true)
    } else {
        // Non-generic fall-back: the invariant complement is the annihilator
        // of the leading k left eigenvectors (the same construction on A^T).
        let left_pairs = sorted_eigenpairs(&a.transpose())?;
        let left_basis = real_basis_from_pairs(&left_pairs);
        (orthonormal_complement(&left_basis[..k], n, drop_tol), false)
    };

    let (eigenvalues, eigenvectors): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
    Ok(SpectralSplit {
        k,
        signature,
        eigenvalues,
        eigenvectors,
        real_basis,
        e_basis,
        ec_basis,
        gap_ratio,
        product_sign_check,
        generic_basis,
    })
}

fn random_unit_vector<T: Scalar>(dim: usize, rng: &mut ChaCha8Rng) -> Vec<T> {
    loop {
        let v: Vec<T> = (0..dim)
            .map(|_| scalar::<T>(StandardNormal.sample(rng)))
            .collect();
        let n = norm2(&v);
        if n > scalar(1e-6) {
            return v.iter().map(|&x| x / n).collect();
        }
    }
}

fn random_unit_combination<T: Scalar>(basis: &[Vec<T>], n: usize, rng: &mut ChaCha8Rng) -> Vec<T> {
    loop {
        let coeffs = random_unit_vector::<T>(basis.len(), rng);
        let mut y = vec![T::zero(); n];
        for (c, b) in coeffs.iter().zip(basis) {
            for (yi, bi) in y.iter_mut().zip(b) {
                *yi = *yi + *c * *bi;
            }
        }
        let norm = norm2(&y);
        if norm > scalar(1e-6) {
            return y.iter().map(|&x| x / norm).collect();
        }
    }
}

/// Least-squares slope of the points (j, values[j]) for j in the fit window.
fn fitted_slope<T: Scalar>(values: &[T], skip: usize) -> T {
    let pts = &values[skip.min(values.len().saturating_sub(2))..];
    let m = pts.len();
    let mf: T = scalar(m as f64);
    let mean_x = scalar::<T>((m as f64 - 1.0) / 2.0);
    let mean_y = pts.iter().copied().sum::<T>() / mf;
    let mut num = T::zero();
    let mut den = T::zero();
    for (i, &y) in pts.iter().enumerate() {
        let dx = scalar::<T>(i as f64) - mean_x;
        num = num + dx * (y - mean_y);
        den = den + dx * dx;
    }
    num / den
}

/// Residual of projecting `target` onto the span of an orthonormal basis.
fn projection_residual<T: Scalar>(target: &[T], orthonormal: &[Vec<T>]) -> T {
    let mut w = target.to_vec();
    for q in orthonormal {
        let c = dot(&w, q);
        for (wi, qi) in w.iter_mut().zip(q) {
            *wi = *wi - c * *qi;
        }
    }
    norm2(&w)
}

/// Samples the cone inclusions of Theorem-style separation, checks the
/// A-invariance of both subspaces, and fits the trajectory separation rate.
pub fn verify_separation<T: Scalar>(
    a: &Matrix<T>,
    k: usize,
    trials: usize,
    horizon: usize,
    rng_seed: u64,
    tol: &ToleranceProfile,
) -> Result<SeparationCheck<T>> {
    if trials == 0 || horizon < 2 {
        return Err(Error::Dimension(
            "separation check needs at least one trial and a horizon of 2".into(),
        ));
    }
    let split = spectral_split(a, k, tol)?;
    let n = a.rows();
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let state_zero_rel: T = scalar(tol.state_zero_rel);

    // (a) E \ {0} lies in the open cone: s_plus <= k-1
    let mut e_in_cone = true;
    let mut witness_e = None;
    for _ in 0..trials {
        let y = random_unit_combination(&split.e_basis, n, &mut rng);
        if s_plus(&y, state_zero_rel * max_abs_entry(&y))? > k - 1 {
            e_in_cone = false;
            witness_e = Some(y);
            break;
        }
    }

    // (b) E^c meets the closed cone only at zero: s_minus >= k
    let mut ec_ok = true;
    let mut witness_ec = None;
    for _ in 0..trials {
        let y = random_unit_combination(&split.ec_basis, n, &mut rng);
        if s_minus(&y, state_zero_rel * max_abs_entry(&y))? < k {
            ec_ok = false;
            witness_ec = Some(y);
            break;
        }
    }

    // (c) A-invariance of both spans via projection residuals
    let tau_spec: T = scalar(tol.tau_spec);
    let norm_a = a.frobenius_norm();
    let mut invariance_residuals = Vec::new();
    let mut invariant = true;
    let drop_tol: T = scalar(1e-12);
    for basis in [&split.e_basis, &split.ec_basis] {
        let ortho = orthonormalize(basis, drop_tol);
        for u in basis.iter() {
            let au = a.mul_vec(u)?;
            let resid = projection_residual(&au, &ortho);
            if resid > tau_spec * norm_a * norm2(u) {
                invariant = false;
            }
            invariance_residuals.push(resid);
        }
    }

    // (d) paired trajectories: fitted slope of the log norm ratio must stay
    // below log(gap ratio) + tau_rate. Iterating a non-dominant invariant
    // subspace forward in floating point leaks into the dominant
    // eigendirections (amplified by (|lambda_1|/|lambda_{k+1}|)^j), so each
    // trajectory is advanced in orthonormal coordinates of its own
    // A-invariant subspace: the same dynamics, computed stably. The first
    // quarter of the horizon is discarded as transient before fitting.
    let rate_bound = split.gap_ratio;
    let log_bound = rate_bound.ln() + scalar(tol.tau_rate);
    let q_e = orthonormalize(&split.e_basis, drop_tol);
    let q_ec = orthonormalize(&split.ec_basis, drop_tol);
    let restricted = |q: &[Vec<T>]| -> Result<Matrix<T>> {
        let m = q.len();
        let mut out = Matrix::zeros(m, m);
        for (c, qc) in q.iter().enumerate() {
            let aq = a.mul_vec(qc)?;
            for (r, qr) in q.iter().enumerate() {
                out.set(r, c, dot(qr, &aq));
            }
        }
        Ok(out)
    };
    let m_e = restricted(&q_e)?;
    let m_ec = restricted(&q_ec)?;
    let mut measured_rates = Vec::new();
    let mut rates_within_bound = true;
    let pair_runs = trials.clamp(1, 32);
    for _ in 0..pair_runs {
        let mut x = random_unit_vector::<T>(q_e.len(), &mut rng);
        let mut xt = random_unit_vector::<T>(q_ec.len(), &mut rng);
        let mut log_ratio = vec![T::zero(); horizon + 1];
        let mut acc_x = T::zero();
        let mut acc_xt = T::zero();
        for entry in log_ratio.iter_mut().skip(1) {
            let ax = m_e.mul_vec(&x)?;
            let axt = m_ec.mul_vec(&xt)?;
            let (nx, nxt) = (norm2(&ax), norm2(&axt));
            acc_x = acc_x + nx.ln();
            acc_xt = acc_xt + nxt.ln();
            x = ax.iter().map(|&v| v / nx).collect();
            xt = axt.iter().map(|&v| v / nxt).collect();
            *entry = acc_xt - acc_x;
        }
        let slope = fitted_slope(&log_ratio, horizon / 4);
        if slope > log_bound {
            rates_within_bound = false;
        }
        measured_rates.push(slope);
    }

    let pass = e_in_cone && ec_ok && invariant && rates_within_bound;
    Ok(SeparationCheck {
        rate_bound,
        measured_rates,
        e_in_cone,
        ec_meets_cone_only_at_zero: ec_ok,
        invariance_residuals,
        rates_within_bound,
        pass,
        witness_e,
        witness_ec,
    })
}

/// Simulates x(j+1) = A x(j) with per-step renormalization and returns the
/// smallest q <= j_max with s_plus(x(q)) <= k-1, continuing afterwards to
/// confirm the bound never fails again.
pub fn hitting_time<T: Scalar>(
    a: &Matrix<T>,
    k: usize,
    x0: &[T],
    j_max: usize,
    zero_tol_rel: T,
    tol: &ToleranceProfile,
) -> Result<HittingOutcome> {
    if !a.is_square() || a.rows() != x0.len() {
        return Err(Error::Dimension(format!(
            "state length {} does not match a {}x{} matrix",
            x0.len(),
            a.rows(),
            a.cols()
        )));
    }
    if norm2(x0) == T::zero() {
        return Err(Error::Precondition("initial state must be nonzero".into()));
    }
    let classification = classify_order(a, k, tol)?;
    if classification.verdict != Verdict::Ssr {
        return Err(Error::Precondition(format!(
            "matrix is {} at order {k}, hitting time needs SSR",
            classification.verdict.as_str()
        )));
    }

    let mut x = normalized(x0);
    let mut q: Option<usize> = None;
    let mut first_violation = None;
    let mut trace = Vec::with_capacity(j_max + 1);
    for j in 0..=j_max {
        let sp = s_plus(&x, zero_tol_rel * max_abs_entry(&x))?;
        trace.push(sp);
        match q {
            None if sp < k => q = Some(j),
            Some(_) if sp >= k && first_violation.is_none() => first_violation = Some(j),
            _ => {}
        }
        if j < j_max {
            x = normalized(&a.mul_vec(&x)?);
        }
    }
    Ok(match q {
        Some(q) => HittingOutcome::Found { q, first_violation },
        None => HittingOutcome::NotFound {
            s_plus_trace: trace,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{fixture, FixtureId};
    use crate::Matrix64;

    fn tol() -> ToleranceProfile {
        ToleranceProfile::default()
    }

    fn assert_close(a: f64, b: f64, tol: f64, what: &str) {
        assert!((a - b).abs() < tol, "{what}: {a} vs {b}");
    }

    #[test]
    fn spectral_fixture_eigenvalues_and_gap() {
        let a: Matrix64 = fixture(FixtureId::Spectral4);
        let split = spectral_split(&a, 3, &tol()).unwrap();
        let s1 = (1.0 + 4.0 * 3.0f64.sqrt()).sqrt();
        let s2 = (-1.0 + 4.0 * 3.0f64.sqrt()).sqrt();
        assert_close(split.eigenvalues[0].re, 3.0 + s1, 5e-4, "lambda_1");
        assert_close(split.eigenvalues[0].im, 0.0, 5e-4, "lambda_1 imag");
        assert_close(split.eigenvalues[1].re, 3.0, 5e-4, "lambda_2 real");
        assert_close(split.eigenvalues[1].im, s2, 5e-4, "lambda_2 imag");
        assert_close(split.eigenvalues[2].im, -s2, 5e-4, "lambda_3 imag");
        assert_close(split.eigenvalues[3].re, 3.0 - s1, 5e-4, "lambda_4");
        let expected_gap = (3.0 - s1).abs() / (9.0 + s2 * s2).sqrt();
        assert_close(split.gap_ratio, expected_gap, 1e-10, "gap ratio");
        assert!(split.product_sign_check);
        assert!(split.generic_basis);
    }

    #[test]
    fn spectral_fixture_real_basis_sign_patterns() {
        let a: Matrix64 = fixture(FixtureId::Spectral4);
        let split = spectral_split(&a, 3, &tol()).unwrap();
        let sv = |u: &[f64]| {
            let t = 1e-9 * max_abs_entry(u);
            (s_minus(u, t).unwrap(), s_plus(u, t).unwrap())
        };
        assert_eq!(sv(&split.real_basis[0]), (0, 0));
        assert_eq!(sv(&split.real_basis[1]), (1, 1));
        assert_eq!(sv(&split.real_basis[3]), (3, 3));
        let (sm3, sp3) = sv(&split.real_basis[2]);
        assert_eq!((sm3, sp3), (1, 2));
    }

    #[test]
    fn diagonal_matrix_is_rejected_as_not_ssr() {
        // zero entries make a diagonal matrix SR_1 but never SSR_1
        let a = Matrix64::diagonal(&[3.0, 2.0, 1.0]);
        match spectral_split(&a, 1, &tol()) {
            Err(Error::Precondition(msg)) => assert!(msg.contains("SR")),
            other => panic!("expected precondition error, got {other:?}"),
        }
    }

    #[test]
    fn positive_symmetric_split_is_exact() {
        // eigenpairs (3, [1,1]) and (1, [1,-1]); SSR_1 with eps = +1
        let a = Matrix64::from_f64_rows(&[&[2.0, 1.0], &[1.0, 2.0]]).unwrap();
        let split = spectral_split(&a, 1, &tol()).unwrap();
        assert_close(split.gap_ratio, 1.0 / 3.0, 1e-12, "gap");
        let s = 1.0 / 2.0f64.sqrt();
        assert_close(split.real_basis[0][0], s, 1e-10, "u1[0]");
        assert_close(split.real_basis[0][1], s, 1e-10, "u1[1]");
        assert_close(split.real_basis[1][0].abs(), s, 1e-10, "u2[0]");
        assert_close(split.real_basis[1][1].abs(), s, 1e-10, "u2[1]");
        assert!(split.product_sign_check);
    }

    #[test]
    fn split_requires_ssr_k() {
        // example1 is not SSR_1 (mixed-sign entries); its gap at k=1 is wide
        let a: Matrix64 = fixture(FixtureId::Example1);
        match spectral_split(&a, 1, &tol()) {
            Err(Error::Precondition(msg)) => assert!(msg.contains("SSR")),
            other => panic!("expected precondition error, got {other:?}"),
        }
    }

    #[test]
    fn equal_modulus_pair_straddling_k_is_degenerate() {
        // a rotation block has |lambda_1| = |lambda_2|, so k=1 cannot split
        let c = std::f64::consts::FRAC_1_SQRT_2;
        let a = Matrix64::from_f64_rows(&[&[c, -c], &[c, c]]).unwrap();
        match spectral_split(&a, 1, &tol()) {
            Err(Error::DegenerateSpectrum(msg)) => assert!(msg.contains("lambda")),
            other => panic!("expected degenerate spectrum, got {other:?}"),
        }
    }

    #[test]
    fn separation_for_symmetric_positive_matrix_matches_exact_ratio() {
        // decoupled spectrum: slopes must sit at log(1/3) exactly
        let a = Matrix64::from_f64_rows(&[&[2.0, 1.0], &[1.0, 2.0]]).unwrap();
        let check = verify_separation(&a, 1, 50, 40, 7, &tol()).unwrap();
        assert!(check.pass);
        assert_close(check.rate_bound, 1.0 / 3.0, 1e-12, "bound");
        for slope in &check.measured_rates {
            assert_close(*slope, (1.0f64 / 3.0).ln(), 1e-9, "slope");
        }
    }

    #[test]
    fn separation_for_spectral_fixture_passes_all_checks() {
        let a: Matrix64 = fixture(FixtureId::Spectral4);
        let check = verify_separation(&a, 3, 200, 60, 3, &tol()).unwrap();
        assert!(check.e_in_cone, "witness: {:?}", check.witness_e);
        assert!(
            check.ec_meets_cone_only_at_zero,
            "witness: {:?}",
            check.witness_ec
        );
        assert!(check.pass);
    }

    #[test]
    fn separation_for_example1_cone_inclusion() {
        let a: Matrix64 = fixture(FixtureId::Example1);
        let check = verify_separation(&a, 3, 1000, 50, 11, &tol()).unwrap();
        assert!(check.e_in_cone, "witness: {:?}", check.witness_e);
        assert!(check.pass);
    }

    #[test]
    fn hitting_time_example1_starts_inside() {
        let a: Matrix64 = fixture(FixtureId::Example1);
        let outcome = hitting_time(&a, 3, &[1.0, 1.0, -1.0, 1.0], 200, 1e-10, &tol()).unwrap();
        assert_eq!(
            outcome,
            HittingOutcome::Found {
                q: 0,
                first_violation: None
            }
        );
    }

    #[test]
    fn hitting_time_positive_matrix_dominant_direction() {
        let a = Matrix64::from_f64_rows(&[&[2.0, 1.0], &[1.0, 2.0]]).unwrap();
        // the dominant eigenvector [1,1] is inside P^1_+ from the start
        let outcome = hitting_time(&a, 1, &[1.0, 1.0], 100, 1e-10, &tol()).unwrap();
        assert_eq!(
            outcome,
            HittingOutcome::Found {
                q: 0,
                first_violation: None
            }
        );
        // e^1 has s_plus = 1 > 0, but one step lands strictly inside
        let outcome = hitting_time(&a, 1, &[1.0, 0.0], 100, 1e-10, &tol()).unwrap();
        assert_eq!(
            outcome,
            HittingOutcome::Found {
                q: 1,
                first_violation: None
            }
        );
    }

    #[test]
    fn hitting_time_rejects_zero_state() {
        let a = Matrix64::from_f64_rows(&[&[2.0, 1.0], &[1.0, 2.0]]).unwrap();
        assert!(hitting_time(&a, 1, &[0.0, 0.0], 10, 1e-10, &tol()).is_err());
    }
}
