//! Complex FFT for arbitrary lengths.
//!
//! Powers of two use an iterative radix-2 transform; every other length goes through
//! Bluestein's chirp-z algorithm on a zero-padded power-of-two buffer.
//! Forward transforms use the `exp(-2 pi i jk / n)` kernel and are unnormalized;
//! [`inverse`] divides by `n`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::math::sin_cos;

/// In-place forward transform.
pub fn forward(data: &mut [Complex64]) {
    transform(data, false);
}

/// In-place inverse transform, normalized by `1/n`.
pub fn inverse(data: &mut [Complex64]) {
    transform(data, true);
    let scale = 1.0 / data.len().max(1) as f64;
    for v in data.iter_mut() {
        *v *= scale;
    }
}

/// Forward transform of a real signal.
pub fn forward_real(signal: &[f64]) -> Vec<Complex64> {
    let mut buf: Vec<Complex64> = signal.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    forward(&mut buf);
    buf
}

fn transform(data: &mut [Complex64], invert: bool) {
    let n = data.len();
    if n <= 1 {
        return;
    }
    if n.is_power_of_two() {
        radix2(data, invert);
    } else {
        bluestein(data, invert);
    }
}

fn twiddle(numerator: f64, invert: bool) -> Complex64 {
    let angle = if invert { PI * numerator } else { -PI * numerator };
    let (s, c) = sin_cos(angle);
    Complex64::new(c, s)
}

fn radix2(data: &mut [Complex64], invert: bool) {
    let n = data.len();
    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            data.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= n {
        let half = len / 2;
        // twiddles computed directly per index to avoid accumulated rotation error
        let roots: Vec<Complex64> = (0..half).map(|k| twiddle(2.0 * k as f64 / len as f64, invert)).collect();
        for start in (0..n).step_by(len) {
            for k in 0..half {
                let u = data[start + k];
                let v = data[start + k + half] * roots[k];
                data[start + k] = u + v;
                data[start + k + half] = u - v;
            }
        }
        len <<= 1;
    }
}

fn bluestein(data: &mut [Complex64], invert: bool) {
    let n = data.len();
    let m = (2 * n - 1).next_power_of_two();
    // chirp w_k = exp(-i pi k^2 / n); k^2 reduced mod 2n keeps the angle small
    let two_n = 2 * n as u128;
    let chirp: Vec<Complex64> = (0..n)
        .map(|k| {
            let k2 = (k as u128 * k as u128) % two_n;
            twiddle(k2 as f64 / n as f64, invert)
        })
        .collect();
    let mut a = vec![Complex64::new(0.0, 0.0); m];
    for k in 0..n {
        a[k] = data[k] * chirp[k];
    }
    let mut b = vec![Complex64::new(0.0, 0.0); m];
    b[0] = chirp[0].conj();
    for k in 1..n {
        b[k] = chirp[k].conj();
        b[m - k] = chirp[k].conj();
    }
    radix2(&mut a, false);
    radix2(&mut b, false);
    for (x, y) in a.iter_mut().zip(&b) {
        *x *= y;
    }
    radix2(&mut a, true);
    let scale = 1.0 / m as f64;
    for k in 0..n {
        data[k] = a[k] * scale * chirp[k];
    }
}
