//! Sign-variation counts and the cones they carve out of R^n.
//!
//! `s_minus` counts strict sign changes after deleting zero entries;
//! `s_plus` is the worst case over all +/-1 substitutions for the zeros.
//! P^k_- collects the vectors with `s_minus <= k-1`, P^k_+ those with
//! `s_plus <= k-1`; the latter is the interior of the former.

use crate::error::{Error, Result};
use crate::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SignVarResult {
    pub s_minus: usize,
    pub s_plus: usize,
    pub zero_count: usize,
}

/// Membership of a vector in P^k_- and P^k_+ at a given order k,
/// judged with the zero tolerance recorded by the caller.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConeMembership {
    pub k: usize,
    pub in_p_minus: bool,
    pub in_p_plus: bool,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Sign {
    Neg,
    Zero,
    Pos,
}

fn classify_entries<T: Scalar>(y: &[T], zero_tol: T) -> Result<Vec<Sign>> {
    if y.is_empty() {
        return Err(Error::Dimension("sign variation of an empty vector".into()));
    }
    if zero_tol < T::zero() {
        return Err(Error::InvalidValue(
            "zero tolerance must be nonnegative".into(),
        ));
    }
    Ok(y.iter()
        .map(|&x| {
            if x.abs() <= zero_tol {
                Sign::Zero
            } else if x > T::zero() {
                Sign::Pos
            } else {
                Sign::Neg
            }
        })
        .collect())
}

/// Number of sign variations after deleting zero entries. An entry counts
/// as zero iff its magnitude is at most `zero_tol`.
pub fn s_minus<T: Scalar>(y: &[T], zero_tol: T) -> Result<usize> {
    let signs = classify_entries(y, zero_tol)?;
    let mut changes = 0;
    let mut last: Option<Sign> = None;
    for s in signs {
        if s == Sign::Zero {
            continue;
        }
        if let Some(prev) = last {
            if prev != s {
                changes += 1;
            }
        }
        last = Some(s);
    }
    Ok(changes)
}

/// Maximal number of sign variations over all +/-1 replacements of zero
/// entries; the all-zero vector yields n-1.
///
/// Computed in linear time from the maximal zero runs: a run of z zeros
/// strictly between nonzeros a and b contributes z+1 when
/// sign(b) = (-1)^(z+1) sign(a) and z otherwise; leading and trailing runs
/// contribute their length; adjacent nonzeros contribute 1 per sign flip.
/// Unit tests pin this against the exhaustive-substitution oracle.
pub fn s_plus<T: Scalar>(y: &[T], zero_tol: T) -> Result<usize> {
    let signs = classify_entries(y, zero_tol)?;
    let n = signs.len();
    let nonzero: Vec<(usize, Sign)> = signs
        .iter()
        .enumerate()
        .filter(|(_, s)| **s != Sign::Zero)
        .map(|(i, s)| (i, *s))
        .collect();
    if nonzero.is_empty() {
        return Ok(n - 1);
    }
    let mut total = nonzero[0].0; // leading zero run
    total += n - 1 - nonzero.last().unwrap().0; // trailing zero run
    for w in nonzero.windows(2) {
        let (i, a) = w[0];
        let (j, b) = w[1];
        let z = j - i - 1;
        if z == 0 {
            if a != b {
                total += 1;
            }
        } else {
            let flips_align = (a == b) == (z % 2 == 1); // b == (-1)^(z+1) a
            total += if flips_align { z + 1 } else { z };
        }
    }
    Ok(total)
}

/// Both counts plus the number of tolerated zeros in one pass.
pub fn sign_variations<T: Scalar>(y: &[T], zero_tol: T) -> Result<SignVarResult> {
    let signs = classify_entries(y, zero_tol)?;
    let zero_count = signs.iter().filter(|s| **s == Sign::Zero).count();
    Ok(SignVarResult {
        s_minus: s_minus(y, zero_tol)?,
        s_plus: s_plus(y, zero_tol)?,
        zero_count,
    })
}

/// Membership of y in P^k_- (s_minus <= k-1) and P^k_+ (s_plus <= k-1).
pub fn cone_membership<T: Scalar>(y: &[T], k: usize, zero_tol: T) -> Result<ConeMembership> {
    let n = y.len();
    if k < 1 || k > n {
        return Err(Error::Dimension(format!(
            "cone order must satisfy 1 <= k <= n = {n}, got {k}"
        )));
    }
    let sv = sign_variations(y, zero_tol)?;
    // written as `<= k - 1` to mirror the defining inequalities of the cones
    #[allow(clippy::int_plus_one)]
    Ok(ConeMembership {
        k,
        in_p_minus: sv.s_minus <= k - 1,
        in_p_plus: sv.s_plus <= k - 1,
    })
}
