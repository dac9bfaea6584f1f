//! SR_k / SSR_k classification and variation-diminishing-property checks.
//!
//! A matrix is sign-regular of order k (SR_k) when all its order-k minors
//! share a weak sign, and strictly sign-regular of order k (SSR_k) when they
//! share a strict sign; the shared sign is the signature epsilon. The
//! classifier sweeps every minor exhaustively: efficient certification via
//! reduced minor sets is an open problem and deliberately out of scope.
//!
//! Whether a minor is "zero" is judged against its Hadamard bound (product
//! of submatrix row norms), which makes verdicts invariant under positive
//! scaling of the matrix.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::index::{binomial, enumerate_sequences, IndexSequence, DEFAULT_SIZE_CAP};
use crate::matrix::Matrix;
use crate::signvar::{s_minus, s_plus};
use crate::tol::ToleranceProfile;
use crate::{scalar, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// All order-k minors nonzero with one strict sign.
    Ssr,
    /// No two minors of opposite strict sign, but at least one zero minor.
    SrNotSsr,
    /// Minors of both strict signs exist.
    NotSr,
}

impl Verdict {
    /// SR_k holds for both `Ssr` and `SrNotSsr`.
    pub fn is_sr(self) -> bool {
        self != Verdict::NotSr
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Ssr => "SSR",
            Verdict::SrNotSsr => "SR_not_SSR",
            Verdict::NotSr => "not_SR",
        }
    }
}

/// A minor singled out as evidence: its index pair and value.
#[derive(Debug, Clone, PartialEq)]
pub struct MinorWitness<T> {
    pub rows: IndexSequence,
    pub cols: IndexSequence,
    pub value: T,
}

/// Classification of a single order k.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderClassification<T> {
    pub k: usize,
    pub verdict: Verdict,
    /// Common strict sign of the minors; absent when no strict-signed minor
    /// exists (all zero) or when the verdict is `NotSr`.
    pub signature: Option<i8>,
    /// Smallest absolute minor value at this order.
    pub min_abs_minor: T,
    /// First strictly positive minor in the lexicographic sweep, if any.
    pub witness_positive: Option<MinorWitness<T>>,
    /// First strictly negative minor in the lexicographic sweep, if any.
    pub witness_negative: Option<MinorWitness<T>>,
}

/// Classification across every order 1..=min(n,m).
#[derive(Debug, Clone, PartialEq)]
pub struct SsrReport<T> {
    pub classifications: Vec<OrderClassification<T>>,
    pub is_sr: bool,
    pub is_ssr: bool,
    /// Present for square matrices only.
    pub nonsingular: Option<bool>,
    pub tolerance_profile: ToleranceProfile,
}

impl<T: Scalar> SsrReport<T> {
    pub fn order(&self, k: usize) -> &OrderClassification<T> {
        &self.classifications[k - 1]
    }
}

/// Classifies the order-k minors of `a`.
pub fn classify_order<T: Scalar>(
    a: &Matrix<T>,
    k: usize,
    tol: &ToleranceProfile,
) -> Result<OrderClassification<T>> {
    tol.validate()?;
    let (n, m) = (a.rows(), a.cols());
    if k < 1 || k > n.min(m) {
        return Err(Error::Dimension(format!(
            "classification order must satisfy 1 <= k <= min(n,m) = {}, got {k}",
            n.min(m)
        )));
    }
    let count = binomial(n, k).saturating_mul(binomial(m, k));
    if count > DEFAULT_SIZE_CAP {
        return Err(Error::Capacity(format!(
            "order {k} has C({n},{k}) x C({m},{k}) = {count} minors, exceeding the cap {}",
            DEFAULT_SIZE_CAP
        )));
    }
    let row_seqs = enumerate_sequences(k, n)?;
    let col_seqs = enumerate_sequences(k, m)?;
    let tau_zero: T = scalar(tol.tau_zero);

    let mut min_abs: Option<T> = None;
    let mut witness_positive: Option<MinorWitness<T>> = None;
    let mut witness_negative: Option<MinorWitness<T>> = None;
    let mut saw_zero = false;

    for r in &row_seqs {
        for c in &col_seqs {
            let (value, bound) = crate::compound::minor_with_bound(a, r, c)?;
            let abs = value.abs();
            min_abs = Some(match min_abs {
                Some(cur) => cur.min(abs),
                None => abs,
            });
            if abs <= tau_zero * bound.max(T::one()) {
                saw_zero = true;
            } else if value > T::zero() {
                if witness_positive.is_none() {
                    witness_positive = Some(MinorWitness {
                        rows: r.clone(),
                        cols: c.clone(),
                        value,
                    });
                }
            } else if witness_negative.is_none() {
                witness_negative = Some(MinorWitness {
                    rows: r.clone(),
                    cols: c.clone(),
                    value,
                });
            }
        }
    }

    let (verdict, signature) = match (&witness_positive, &witness_negative) {
        (Some(_), Some(_)) => (Verdict::NotSr, None),
        (Some(_), None) => (
            if saw_zero {
                Verdict::SrNotSsr
            } else {
                Verdict::Ssr
            },
            Some(1i8),
        ),
        (None, Some(_)) => (
            if saw_zero {
                Verdict::SrNotSsr
            } else {
                Verdict::Ssr
            },
            Some(-1i8),
        ),
        // every minor vanished: weakly sign-regular with no strict sign
        (None, None) => (Verdict::SrNotSsr, None),
    };

    Ok(OrderClassification {
        k,
        verdict,
        signature,
        min_abs_minor: min_abs.unwrap_or_else(T::zero),
        witness_positive,
        witness_negative,
    })
}

/// Classifies every order and aggregates the SR / SSR verdicts.
pub fn classify_all<T: Scalar>(a: &Matrix<T>, tol: &ToleranceProfile) -> Result<SsrReport<T>> {
    let kmax = a.rows().min(a.cols());
    let mut classifications = Vec::with_capacity(kmax);
    for k in 1..=kmax {
        classifications.push(classify_order(a, k, tol)?);
    }
    let is_ssr = classifications.iter().all(|c| c.verdict == Verdict::Ssr);
    let is_sr = classifications.iter().all(|c| c.verdict.is_sr());
    let nonsingular = if a.is_square() {
        let full = &classifications[kmax - 1];
        // the full minor is det(A); nonzero under the same normalized test
        Some(full.witness_positive.is_some() || full.witness_negative.is_some())
    } else {
        None
    };
    Ok(SsrReport {
        classifications,
        is_sr,
        is_ssr,
        nonsingular,
        tolerance_profile: *tol,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VdpMode {
    /// Requires SR of full column rank; asserts s_minus(Ax) <= s_minus(x).
    Weak,
    /// Requires SSR; asserts s_plus(Ax) <= s_minus(x).
    Strong,
}

impl VdpMode {
    pub fn as_str(self) -> &'static str {
        match self {
            VdpMode::Weak => "weak",
            VdpMode::Strong => "strong",
        }
    }
}

/// A sampled vector that violates the variation-diminishing property.
#[derive(Debug, Clone, PartialEq)]
pub struct VdpCounterexample<T> {
    pub x: Vec<T>,
    pub ax: Vec<T>,
    pub variations_before: usize,
    pub variations_after: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VdpReport<T> {
    pub mode: VdpMode,
    /// Whether the mode's hypothesis (SR of rank m / SSR) holds for the matrix.
    pub precondition_ok: bool,
    pub precondition_note: String,
    pub samples: usize,
    pub pass: bool,
    pub counterexample: Option<VdpCounterexample<T>>,
}

/// Draws a nonzero vector with a prescribed number of sign changes:
/// uniform target for s_minus, random change positions, log-uniform
/// magnitudes. Plain Gaussian sampling almost never exercises the
/// high-variation counts.
pub(crate) fn sample_sign_patterned<T: Scalar>(n: usize, rng: &mut ChaCha8Rng) -> Vec<T> {
    let target = rng.gen_range(0..n);
    // choose `target` flip positions among the n-1 gaps
    let mut gaps: Vec<usize> = (0..n - 1).collect();
    for i in 0..target {
        let j = rng.gen_range(i..gaps.len());
        gaps.swap(i, j);
    }
    let mut flip = vec![false; n.saturating_sub(1)];
    for &g in &gaps[..target] {
        flip[g] = true;
    }
    let mut sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        if i > 0 && flip[i - 1] {
            sign = -sign;
        }
        let magnitude = 10f64.powf(rng.gen_range(-1.0..1.0));
        out.push(scalar::<T>(sign * magnitude));
    }
    out
}

/// Samples random vectors and checks the variation-diminishing property.
/// The hypothesis is re-verified and reported rather than assumed; sampling
/// proceeds either way so a violated hypothesis can be witnessed.
pub fn verify_vdp<T: Scalar>(
    a: &Matrix<T>,
    samples: usize,
    mode: VdpMode,
    rng_seed: u64,
    tol: &ToleranceProfile,
) -> Result<VdpReport<T>> {
    let report = classify_all(a, tol)?;
    let (precondition_ok, precondition_note) = match mode {
        VdpMode::Weak => {
            let full_rank = a.rank(scalar(tol.tau_zero)) == a.cols();
            let ok = report.is_sr && full_rank;
            let note = if ok {
                "matrix is SR with full column rank".to_string()
            } else if !report.is_sr {
                "matrix is not SR (weak VDP hypothesis fails)".to_string()
            } else {
                "matrix is SR but rank-deficient".to_string()
            };
            (ok, note)
        }
        VdpMode::Strong => {
            let ok = report.is_ssr;
            let note = if ok {
                "matrix is SSR".to_string()
            } else {
                "matrix is not SSR (strong VDP hypothesis fails)".to_string()
            };
            (ok, note)
        }
    };

    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut counterexample = None;
    for _ in 0..samples {
        let x = sample_sign_patterned::<T>(a.cols(), &mut rng);
        let ax = a.mul_vec(&x)?;
        let before = s_minus(&x, T::zero())?;
        let state_tol = scalar::<T>(tol.state_zero_rel) * crate::matrix::max_abs_entry(&ax);
        let after = match mode {
            VdpMode::Weak => s_minus(&ax, state_tol)?,
            VdpMode::Strong => s_plus(&ax, state_tol)?,
        };
        if after > before {
            counterexample = Some(VdpCounterexample {
                x,
                ax,
                variations_before: before,
                variations_after: after,
            });
            break;
        }
    }

    Ok(VdpReport {
        mode,
        precondition_ok,
        precondition_note,
        samples,
        pass: counterexample.is_none(),
        counterexample,
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

    #[test]
    fn intro_matrix_per_order_verdicts() {
        let a: Matrix64 = fixture(FixtureId::Intro4);
        let report = classify_all(&a, &tol()).unwrap();
        assert_eq!(report.order(1).verdict, Verdict::SrNotSsr);
        assert_eq!(report.order(1).signature, Some(1));
        assert_eq!(report.order(2).verdict, Verdict::NotSr);
        assert_eq!(report.order(3).verdict, Verdict::Ssr);
        assert_eq!(report.order(3).signature, Some(1));
        assert_eq!(report.order(4).verdict, Verdict::Ssr);
        assert_eq!(report.order(4).signature, Some(1));
        assert!(!report.is_sr);
        assert!(!report.is_ssr);
        assert_eq!(report.nonsingular, Some(true));
    }

    #[test]
    fn intro_matrix_order_two_witnesses() {
        let a: Matrix64 = fixture(FixtureId::Intro4);
        let c = classify_order(&a, 2, &tol()).unwrap();
        let pos = c.witness_positive.unwrap();
        assert_eq!(pos.rows.indices(), &[1, 2]);
        assert_eq!(pos.cols.indices(), &[1, 2]);
        assert_eq!(pos.value, 1.0);
        let neg = c.witness_negative.unwrap();
        assert_eq!(neg.rows.indices(), &[1, 4]);
        assert_eq!(neg.cols.indices(), &[1, 2]);
        assert_eq!(neg.value, -2.0);
    }

    #[test]
    fn example1_order_two_witness_values() {
        let a: Matrix64 = fixture(FixtureId::Example1);
        let c = classify_order(&a, 2, &tol()).unwrap();
        assert_eq!(c.verdict, Verdict::NotSr);
        // the known positive and negative minors appear in the sweep
        let pos = c.witness_positive.unwrap();
        assert_eq!(
            (pos.rows.indices(), pos.cols.indices()),
            (&[1, 2][..], &[1, 2][..])
        );
        assert_eq!(pos.value, 84.0);
        let a12_13 = crate::compound::minor(
            &a,
            &IndexSequence::new(vec![3, 4], 4).unwrap(),
            &IndexSequence::new(vec![1, 3], 4).unwrap(),
        )
        .unwrap();
        assert_eq!(a12_13, -20.0);
    }

    #[test]
    fn example1_is_ssr3() {
        let a: Matrix64 = fixture(FixtureId::Example1);
        let c = classify_order(&a, 3, &tol()).unwrap();
        assert_eq!(c.verdict, Verdict::Ssr);
        assert_eq!(c.signature, Some(1));
    }

    #[test]
    fn spectral_example_is_ssr3_positive() {
        let a: Matrix64 = fixture(FixtureId::Spectral4);
        let c = classify_order(&a, 3, &tol()).unwrap();
        assert_eq!(c.verdict, Verdict::Ssr);
        assert_eq!(c.signature, Some(1));
    }

    #[test]
    fn identity_is_weakly_sign_regular_below_full_order() {
        // off-aligned minors vanish at orders 1..n-1; order n is the single
        // minor det(I) = 1, which is strictly signed
        let id = Matrix64::identity(3);
        let report = classify_all(&id, &tol()).unwrap();
        assert_eq!(report.order(1).verdict, Verdict::SrNotSsr);
        assert_eq!(report.order(2).verdict, Verdict::SrNotSsr);
        assert_eq!(report.order(3).verdict, Verdict::Ssr);
        assert!(report.is_sr);
        assert!(!report.is_ssr);
    }

    #[test]
    fn all_zero_matrix_has_no_signature() {
        let z = Matrix64::zeros(2, 2);
        let c = classify_order(&z, 1, &tol()).unwrap();
        assert_eq!(c.verdict, Verdict::SrNotSsr);
        assert_eq!(c.signature, None);
        assert_eq!(c.min_abs_minor, 0.0);
    }

    #[test]
    fn order_out_of_range() {
        let a = Matrix64::identity(3);
        assert!(classify_order(&a, 0, &tol()).is_err());
        assert!(classify_order(&a, 4, &tol()).is_err());
    }

    #[test]
    fn scaled_identity_preserves_s_minus_in_weak_mode() {
        let a = Matrix64::identity(3).scale(2.0);
        let report = verify_vdp(&a, 500, VdpMode::Weak, 11, &tol()).unwrap();
        assert!(report.precondition_ok);
        assert!(report.pass);
    }

    #[test]
    fn counterexample_matrix_fails_weak_vdp_with_witness() {
        let a: Matrix64 = fixture(FixtureId::Counter3);
        let report = verify_vdp(&a, 2000, VdpMode::Weak, 5, &tol()).unwrap();
        assert!(!report.precondition_ok);
        assert!(
            !report.pass,
            "sampling should refute the VDP for a non-SR matrix"
        );
        let w = report.counterexample.unwrap();
        assert!(w.variations_after > w.variations_before);
    }

    #[test]
    fn signed_sampler_hits_every_variation_count() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut seen = [false; 5];
        for _ in 0..200 {
            let x: Vec<f64> = sample_sign_patterned(5, &mut rng);
            seen[s_minus(&x, 0.0).unwrap()] = true;
        }
        assert!(
            seen.iter().all(|&s| s),
            "sampler must reach all s_minus targets: {seen:?}"
        );
    }
}
