//! Dense real nonsymmetric eigendecomposition.
//!
//! Householder reduction to upper Hessenberg form followed by the
//! double-shift QR iteration with eigenvector back-substitution, after the
//! Algol procedures orthes/ortran and hqr2 (Martin and Wilkinson, Handbook
//! for Automatic Computation, Vol. II) via their EISPACK and Jama
//! descendants. No balancing step: the intended inputs are small and
//! well scaled, and the accuracy contract (residual below 1e-8 * ||A||)
//! is enforced by the callers' tests.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::{scalar, Scalar};

/// Eigenvalues d + i*e and an eigenvector matrix V in the block convention:
/// a real eigenvalue at index i owns the real column i; a complex pair at
/// (i, i+1) has e[i] > 0, e[i+1] = -e[i], and columns i, i+1 hold the real
/// and imaginary parts of the eigenvector for d[i] + i*e[i].
pub(crate) struct EigenDecomposition<T> {
    n: usize,
    d: Vec<T>,
    e: Vec<T>,
    v: Vec<T>, // row-major n x n
}

impl<T: Scalar> EigenDecomposition<T> {
    #[cfg(test)]
    pub fn eigenvalues(&self) -> Vec<Complex<T>> {
        (0..self.n)
            .map(|i| Complex::new(self.d[i], self.e[i]))
            .collect()
    }

    fn column(&self, j: usize) -> Vec<T> {
        (0..self.n).map(|i| self.v[i * self.n + j]).collect()
    }

    /// Expands the packed representation into one complex eigenpair per
    /// eigenvalue, conjugates included.
    pub fn eigenpairs(&self) -> Vec<(Complex<T>, Vec<Complex<T>>)> {
        let mut out = Vec::with_capacity(self.n);
        let mut i = 0;
        while i < self.n {
            if self.e[i] == T::zero() {
                let col = self.column(i);
                let vec = col
                    .into_iter()
                    .map(|x| Complex::new(x, T::zero()))
                    .collect();
                out.push((Complex::new(self.d[i], T::zero()), vec));
                i += 1;
            } else {
                let re = self.column(i);
                let im = self.column(i + 1);
                let lambda = Complex::new(self.d[i], self.e[i].abs());
                let vec: Vec<Complex<T>> = re
                    .iter()
                    .zip(&im)
                    .map(|(&r, &m)| Complex::new(r, m))
                    .collect();
                let conj: Vec<Complex<T>> = vec.iter().map(|z| z.conj()).collect();
                out.push((lambda, vec));
                out.push((lambda.conj(), conj));
                i += 2;
            }
        }
        out
    }
}

/// Complex scalar division (xr + i*xi) / (yr + i*yi) avoiding overflow.
fn cdiv<T: Scalar>(xr: T, xi: T, yr: T, yi: T) -> (T, T) {
    if yr.abs() > yi.abs() {
        let r = yi / yr;
        let d = yr + r * yi;
        ((xr + r * xi) / d, (xi - r * xr) / d)
    } else {
        let r = yr / yi;
        let d = yi + r * yr;
        ((r * xr + xi) / d, (r * xi - xr) / d)
    }
}

pub(crate) fn eigen_decompose<T: Scalar>(a: &Matrix<T>) -> Result<EigenDecomposition<T>> {
    if !a.is_square() {
        return Err(Error::Dimension(format!(
            "eigendecomposition requires a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let nn = a.rows();
    let mut h: Vec<T> = a.data().to_vec();
    let mut v: Vec<T> = vec![T::zero(); nn * nn];
    let mut d: Vec<T> = vec![T::zero(); nn];
    let mut e: Vec<T> = vec![T::zero(); nn];
    orthes(nn, &mut h, &mut v);
    hqr2(nn, &mut h, &mut v, &mut d, &mut e)?;
    Ok(EigenDecomposition { n: nn, d, e, v })
}

/// Householder reduction of H to upper Hessenberg form, accumulating the
/// orthogonal similarity in V (Algol orthes + ortran).
fn orthes<T: Scalar>(nn: usize, h: &mut [T], v: &mut [T]) {
    if nn == 0 {
        return;
    }
    let high = nn - 1;
    let mut ort: Vec<T> = vec![T::zero(); nn];

    for m in 1..high.max(1) {
        let mut scale = T::zero();
        for i in m..=high {
            scale = scale + h[i * nn + m - 1].abs();
        }
        if scale != T::zero() {
            let mut hh = T::zero();
            for i in (m..=high).rev() {
                ort[i] = h[i * nn + m - 1] / scale;
                hh = hh + ort[i] * ort[i];
            }
            let mut g = hh.sqrt();
            if ort[m] > T::zero() {
                g = -g;
            }
            hh = hh - ort[m] * g;
            ort[m] = ort[m] - g;

            // H = (I - u u' / h) H (I - u u' / h)
            for j in m..nn {
                let mut f = T::zero();
                for i in (m..=high).rev() {
                    f = f + ort[i] * h[i * nn + j];
                }
                f = f / hh;
                for i in m..=high {
                    h[i * nn + j] = h[i * nn + j] - f * ort[i];
                }
            }
            for i in 0..=high {
                let mut f = T::zero();
                for j in (m..=high).rev() {
                    f = f + ort[j] * h[i * nn + j];
                }
                f = f / hh;
                for j in m..=high {
                    h[i * nn + j] = h[i * nn + j] - f * ort[j];
                }
            }
            ort[m] = scale * ort[m];
            h[m * nn + m - 1] = scale * g;
        }
    }

    // accumulate transformations
    for i in 0..nn {
        for j in 0..nn {
            v[i * nn + j] = if i == j { T::one() } else { T::zero() };
        }
    }
    for m in (1..high.max(1)).rev() {
        if h[m * nn + m - 1] != T::zero() {
            for i in m + 1..=high {
                ort[i] = h[i * nn + m - 1];
            }
            for j in m..=high {
                let mut g = T::zero();
                for i in m..=high {
                    g = g + ort[i] * v[i * nn + j];
                }
                // double division avoids possible underflow
                g = (g / ort[m]) / h[m * nn + m - 1];
                for i in m..=high {
                    v[i * nn + j] = v[i * nn + j] + g * ort[i];
                }
            }
        }
    }
}

/// QR iteration on the Hessenberg matrix with eigenvector back-substitution
/// (Algol hqr2). Eigenvalues land in d + i*e, eigenvectors in V.
fn hqr2<T: Scalar>(nn: usize, h: &mut [T], v: &mut [T], d: &mut [T], e: &mut [T]) -> Result<()> {
    if nn == 0 {
        return Ok(());
    }
    let low: usize = 0;
    let high: usize = nn - 1;
    let eps = T::epsilon();
    let mut exshift = T::zero();
    #[allow(unused_assignments)]
    let (mut p, mut q) = (T::zero(), T::zero());
    let mut r = T::zero();
    let mut s = T::zero();
    let mut z = T::zero();
    let mut t;
    let (mut w, mut x, mut y);

    let mut norm = T::zero();
    for i in 0..nn {
        for j in i.saturating_sub(1)..nn {
            norm = norm + h[i * nn + j].abs();
        }
    }

    let mut n = high;
    let mut iter = 0usize;
    'outer: loop {
        // look for a single small subdiagonal element
        let mut l = n;
        while l > low {
            s = h[(l - 1) * nn + l - 1].abs() + h[l * nn + l].abs();
            if s == T::zero() {
                s = norm;
            }
            if h[l * nn + l - 1].abs() < eps * s {
                break;
            }
            l -= 1;
        }

        if l == n {
            // one root found
            h[n * nn + n] = h[n * nn + n] + exshift;
            d[n] = h[n * nn + n];
            e[n] = T::zero();
            iter = 0;
            if n == low {
                break 'outer;
            }
            n -= 1;
        } else if l + 1 == n {
            // two roots found
            w = h[n * nn + n - 1] * h[(n - 1) * nn + n];
            p = (h[(n - 1) * nn + n - 1] - h[n * nn + n]) / scalar(2.0);
            q = p * p + w;
            z = q.abs().sqrt();
            h[n * nn + n] = h[n * nn + n] + exshift;
            h[(n - 1) * nn + n - 1] = h[(n - 1) * nn + n - 1] + exshift;
            x = h[n * nn + n];

            if q >= T::zero() {
                // real pair
                z = if p >= T::zero() { p + z } else { p - z };
                d[n - 1] = x + z;
                d[n] = d[n - 1];
                if z != T::zero() {
                    d[n] = x - w / z;
                }
                e[n - 1] = T::zero();
                e[n] = T::zero();
                x = h[n * nn + n - 1];
                s = x.abs() + z.abs();
                p = x / s;
                q = z / s;
                r = (p * p + q * q).sqrt();
                p = p / r;
                q = q / r;

                for j in n - 1..nn {
                    z = h[(n - 1) * nn + j];
                    h[(n - 1) * nn + j] = q * z + p * h[n * nn + j];
                    h[n * nn + j] = q * h[n * nn + j] - p * z;
                }
                for i in 0..=n {
                    z = h[i * nn + n - 1];
                    h[i * nn + n - 1] = q * z + p * h[i * nn + n];
                    h[i * nn + n] = q * h[i * nn + n] - p * z;
                }
                for i in low..=high {
                    z = v[i * nn + n - 1];
                    v[i * nn + n - 1] = q * z + p * v[i * nn + n];
                    v[i * nn + n] = q * v[i * nn + n] - p * z;
                }
            } else {
                // complex pair
                d[n - 1] = x + p;
                d[n] = x + p;
                e[n - 1] = z;
                e[n] = -z;
            }
            iter = 0;
            if n < low + 2 {
                break 'outer;
            }
            n -= 2;
        } else {
            // no convergence yet: form shift
            x = h[n * nn + n];
            y = T::zero();
            w = T::zero();
            if l < n {
                y = h[(n - 1) * nn + n - 1];
                w = h[n * nn + n - 1] * h[(n - 1) * nn + n];
            }

            // Wilkinson's original ad hoc shift
            if iter == 10 {
                exshift = exshift + x;
                for i in low..=n {
                    h[i * nn + i] = h[i * nn + i] - x;
                }
                s = h[n * nn + n - 1].abs() + h[(n - 1) * nn + n - 2].abs();
                x = scalar::<T>(0.75) * s;
                y = x;
                w = scalar::<T>(-0.4375) * s * s;
            }

            // MATLAB's new ad hoc shift
            if iter == 30 {
                s = (y - x) / scalar(2.0);
                s = s * s + w;
                if s > T::zero() {
                    s = s.sqrt();
                    if y < x {
                        s = -s;
                    }
                    s = x - w / ((y - x) / scalar(2.0) + s);
                    for i in low..=n {
                        h[i * nn + i] = h[i * nn + i] - s;
                    }
                    exshift = exshift + s;
                    x = scalar(0.964);
                    y = x;
                    w = x;
                }
            }

            iter += 1;
            if iter > 100 {
                return Err(Error::Convergence(
                    "QR iteration exceeded 100 steps for one eigenvalue".into(),
                ));
            }

            // look for two consecutive small subdiagonal elements
            let mut m = n - 2;
            loop {
                z = h[m * nn + m];
                r = x - z;
                s = y - z;
                p = (r * s - w) / h[(m + 1) * nn + m] + h[m * nn + m + 1];
                q = h[(m + 1) * nn + m + 1] - z - r - s;
                r = h[(m + 2) * nn + m + 1];
                s = p.abs() + q.abs() + r.abs();
                p = p / s;
                q = q / s;
                r = r / s;
                if m == l {
                    break;
                }
                if h[m * nn + m - 1].abs() * (q.abs() + r.abs())
                    < eps
                        * (p.abs()
                            * (h[(m - 1) * nn + m - 1].abs()
                                + z.abs()
                                + h[(m + 1) * nn + m + 1].abs()))
                {
                    break;
                }
                m -= 1;
            }

            for i in m + 2..=n {
                h[i * nn + i - 2] = T::zero();
                if i > m + 2 {
                    h[i * nn + i - 3] = T::zero();
                }
            }

            // double QR step on rows l..=n, columns m..=n
            for k in m..n {
                let notlast = k != n - 1;
                if k != m {
                    p = h[k * nn + k - 1];
                    q = h[(k + 1) * nn + k - 1];
                    r = if notlast {
                        h[(k + 2) * nn + k - 1]
                    } else {
                        T::zero()
                    };
                    x = p.abs() + q.abs() + r.abs();
                    if x == T::zero() {
                        continue;
                    }
                    p = p / x;
                    q = q / x;
                    r = r / x;
                }
                s = (p * p + q * q + r * r).sqrt();
                if p < T::zero() {
                    s = -s;
                }
                if s != T::zero() {
                    if k != m {
                        h[k * nn + k - 1] = -s * x;
                    } else if l != m {
                        h[k * nn + k - 1] = -h[k * nn + k - 1];
                    }
                    p = p + s;
                    x = p / s;
                    y = q / s;
                    z = r / s;
                    q = q / p;
                    r = r / p;

                    for j in k..nn {
                        p = h[k * nn + j] + q * h[(k + 1) * nn + j];
                        if notlast {
                            p = p + r * h[(k + 2) * nn + j];
                            h[(k + 2) * nn + j] = h[(k + 2) * nn + j] - p * z;
                        }
                        h[k * nn + j] = h[k * nn + j] - p * x;
                        h[(k + 1) * nn + j] = h[(k + 1) * nn + j] - p * y;
                    }
                    for i in 0..=n.min(k + 3) {
                        p = x * h[i * nn + k] + y * h[i * nn + k + 1];
                        if notlast {
                            p = p + z * h[i * nn + k + 2];
                            h[i * nn + k + 2] = h[i * nn + k + 2] - p * r;
                        }
                        h[i * nn + k] = h[i * nn + k] - p;
                        h[i * nn + k + 1] = h[i * nn + k + 1] - p * q;
                    }
                    for i in low..=high {
                        p = x * v[i * nn + k] + y * v[i * nn + k + 1];
                        if notlast {
                            p = p + z * v[i * nn + k + 2];
                            v[i * nn + k + 2] = v[i * nn + k + 2] - p * r;
                        }
                        v[i * nn + k] = v[i * nn + k] - p;
                        v[i * nn + k + 1] = v[i * nn + k + 1] - p * q;
                    }
                }
            }
        }
    }

    // back-substitution: eigenvectors of the quasi-triangular form
    if norm == T::zero() {
        return Ok(());
    }
    for cur in (0..nn).rev() {
        p = d[cur];
        q = e[cur];

        if q == T::zero() {
            // real vector
            let mut l = cur;
            h[cur * nn + cur] = T::one();
            for i in (0..cur).rev() {
                w = h[i * nn + i] - p;
                r = T::zero();
                for j in l..=cur {
                    r = r + h[i * nn + j] * h[j * nn + cur];
                }
                if e[i] < T::zero() {
                    z = w;
                    s = r;
                } else {
                    l = i;
                    if e[i] == T::zero() {
                        h[i * nn + cur] = if w != T::zero() {
                            -r / w
                        } else {
                            -r / (eps * norm)
                        };
                    } else {
                        // solve the 2x2 real block
                        x = h[i * nn + i + 1];
                        y = h[(i + 1) * nn + i];
                        q = (d[i] - p) * (d[i] - p) + e[i] * e[i];
                        t = (x * s - z * r) / q;
                        h[i * nn + cur] = t;
                        h[(i + 1) * nn + cur] = if x.abs() > z.abs() {
                            (-r - w * t) / x
                        } else {
                            (-s - y * t) / z
                        };
                    }
                    // overflow control
                    t = h[i * nn + cur].abs();
                    if (eps * t) * t > T::one() {
                        for j in i..=cur {
                            h[j * nn + cur] = h[j * nn + cur] / t;
                        }
                    }
                }
            }
        } else if q < T::zero() {
            // complex vector, processed at the second index of the pair
            let mut l = cur - 1;

            // last vector component imaginary, so the matrix is triangular
            if h[cur * nn + cur - 1].abs() > h[(cur - 1) * nn + cur].abs() {
                h[(cur - 1) * nn + cur - 1] = q / h[cur * nn + cur - 1];
                h[(cur - 1) * nn + cur] = -(h[cur * nn + cur] - p) / h[cur * nn + cur - 1];
            } else {
                let (re, im) = cdiv(
                    T::zero(),
                    -h[(cur - 1) * nn + cur],
                    h[(cur - 1) * nn + cur - 1] - p,
                    q,
                );
                h[(cur - 1) * nn + cur - 1] = re;
                h[(cur - 1) * nn + cur] = im;
            }
            h[cur * nn + cur - 1] = T::zero();
            h[cur * nn + cur] = T::one();
            for i in (0..cur.saturating_sub(1)).rev() {
                let mut ra = T::zero();
                let mut sa = T::zero();
                for j in l..=cur {
                    ra = ra + h[i * nn + j] * h[j * nn + cur - 1];
                    sa = sa + h[i * nn + j] * h[j * nn + cur];
                }
                w = h[i * nn + i] - p;

                if e[i] < T::zero() {
                    z = w;
                    r = ra;
                    s = sa;
                } else {
                    l = i;
                    if e[i] == T::zero() {
                        let (re, im) = cdiv(-ra, -sa, w, q);
                        h[i * nn + cur - 1] = re;
                        h[i * nn + cur] = im;
                    } else {
                        // solve complex 2x2 block
                        x = h[i * nn + i + 1];
                        y = h[(i + 1) * nn + i];
                        let mut vr = (d[i] - p) * (d[i] - p) + e[i] * e[i] - q * q;
                        let vi = (d[i] - p) * scalar(2.0) * q;
                        if vr == T::zero() && vi == T::zero() {
                            vr = eps * norm * (w.abs() + q.abs() + x.abs() + y.abs() + z.abs());
                        }
                        let (re, im) =
                            cdiv(x * r - z * ra + q * sa, x * s - z * sa - q * ra, vr, vi);
                        h[i * nn + cur - 1] = re;
                        h[i * nn + cur] = im;
                        if x.abs() > z.abs() + q.abs() {
                            h[(i + 1) * nn + cur - 1] =
                                (-ra - w * h[i * nn + cur - 1] + q * h[i * nn + cur]) / x;
                            h[(i + 1) * nn + cur] =
                                (-sa - w * h[i * nn + cur] - q * h[i * nn + cur - 1]) / x;
                        } else {
                            let (re, im) =
                                cdiv(-r - y * h[i * nn + cur - 1], -s - y * h[i * nn + cur], z, q);
                            h[(i + 1) * nn + cur - 1] = re;
                            h[(i + 1) * nn + cur] = im;
                        }
                    }
                    // overflow control
                    t = h[i * nn + cur - 1].abs().max(h[i * nn + cur].abs());
                    if (eps * t) * t > T::one() {
                        for j in i..=cur {
                            h[j * nn + cur - 1] = h[j * nn + cur - 1] / t;
                            h[j * nn + cur] = h[j * nn + cur] / t;
                        }
                    }
                }
            }
        }
    }

    // back-transform to eigenvectors of the original matrix
    for j in (low..nn).rev() {
        for i in low..=high {
            z = T::zero();
            for k in low..=j.min(high) {
                z = z + v[i * nn + k] * h[k * nn + j];
            }
            v[i * nn + j] = z;
        }
    }
    Ok(())
}
