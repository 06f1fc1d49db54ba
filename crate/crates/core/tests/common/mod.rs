//! Independent oracles shared by the integration tests. None of these go
//! through the library's own evaluation paths.

#![allow(dead_code)]

/// `ψ^{(k)}(x) = (−1)^{k+1} k! Σ_{j≥0} (x+j)^{−(k+1)}` for `k ≥ 1`: direct sum
/// of the first `N` terms plus an integral tail with two correction terms.
pub fn polygamma_series(k: usize, x: f64) -> f64 {
    assert!(k >= 1);
    const N: usize = 2000;
    let p = (k + 1) as i32;
    let mut sum = 0.0f64;
    // smallest terms first
    for j in (0..N).rev() {
        sum += (x + j as f64).powi(-p);
    }
    let y = x + N as f64;
    let kf = k as f64;
    sum += y.powi(-(k as i32)) / kf + 0.5 * y.powi(-p) + (kf + 1.0) / 12.0 * y.powi(-p - 1);
    let fact: f64 = (1..=k).map(|i| i as f64).product();
    let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
    sign * fact * sum
}

/// `Φ^{(k)}` assembled from [`polygamma_series`].
pub fn phi_deriv_series(k: usize, x: f64) -> f64 {
    if k == 0 {
        x * polygamma_series(1, x) - 1.0
    } else {
        x * polygamma_series(k + 1, x) + k as f64 * polygamma_series(k, x)
    }
}

/// Maclaurin coefficients of `e^t(e^t−1−t)/(e^t−1)²` by formal division of
/// the two power series (both start at `t²`).
pub fn h_series(degree: usize) -> Vec<f64> {
    let len = degree + 3;
    let mut fact = vec![1.0f64; len + 1];
    for i in 1..=len {
        fact[i] = fact[i - 1] * i as f64;
    }
    // e^{2t} − e^t − t e^t and e^{2t} − 2e^t + 1
    let num: Vec<f64> = (0..len)
        .map(|n| {
            let prev = if n == 0 { 0.0 } else { 1.0 / fact[n - 1] };
            (2f64.powi(n as i32) - 1.0) / fact[n] - prev
        })
        .collect();
    let den: Vec<f64> = (0..len)
        .map(|n| if n == 0 { 0.0 } else { (2f64.powi(n as i32) - 2.0) / fact[n] })
        .collect();
    let a = &num[2..];
    let b = &den[2..];
    let mut q = vec![0.0; degree + 1];
    for i in 0..=degree {
        let mut r = a[i];
        for j in 0..i {
            r -= q[j] * b[i - j];
        }
        q[i] = r / b[0];
    }
    q
}

/// Taylor coefficients of the exponential-polynomial bracket
/// `E(t) = Σ p_i(t) e^{α_i t}`, expanded term by term.
pub fn bracket_series(s: f64, orders: &[usize]) -> Vec<f64> {
    // (polynomial coefficients in t, exponent α)
    let terms: Vec<(Vec<f64>, f64)> = vec![
        (vec![-2.0, 1.0], 1.0 + 2.0 * s),
        (vec![2.0, 1.0], 2.0 * s),
        (vec![2.0, -s], 2.0 + s),
        (vec![0.0, 4.0 * (s - 1.0)], 1.0 + s),
        (vec![-2.0, -3.0 * s, -2.0 * s], s),
        (vec![-2.0, -s], 2.0),
        (vec![2.0, 3.0, 2.0 * s], 1.0),
        (vec![0.0, s - 1.0], 0.0),
    ];
    orders
        .iter()
        .map(|&k| {
            let mut total = 0.0;
            for (poly, alpha) in &terms {
                for (j, c) in poly.iter().enumerate() {
                    if j > k {
                        continue;
                    }
                    let r = k - j;
                    let mut term = *c;
                    for i in 1..=r {
                        term *= alpha / i as f64;
                    }
                    if r > 0 && *alpha == 0.0 {
                        term = 0.0;
                    }
                    total += term;
                }
            }
            total
        })
        .collect()
}

pub fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

pub fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}
