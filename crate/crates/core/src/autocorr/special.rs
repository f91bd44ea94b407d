//! Bessel functions of integer order, complete elliptic integrals and the
//! complementary error function.

use std::f64::consts::{FRAC_PI_2, PI};

/// Above this argument the Hankel expansion is used for `J₀` and `J₁`.
const ASYMPTOTIC_SWITCH: f64 = 25.0;

/// `erfc(x)`.
pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}

/// Hankel asymptotic expansion of `J_ν(x)` for large `x`.
fn bessel_asymptotic(nu: f64, x: f64) -> f64 {
    let mu = 4.0 * nu * nu;
    let (mut p, mut q) = (0.0, 0.0);
    let mut term = 1.0;
    let mut last = f64::INFINITY;
    for k in 0..60 {
        if k > 0 {
            let odd = (2 * k - 1) as f64;
            term *= (mu - odd * odd) / (k as f64 * 8.0 * x);
        }
        if term.abs() > last && k > 2 {
            break;
        }
        last = term.abs();
        match k % 4 {
            0 => p += term,
            1 => q += term,
            2 => p -= term,
            _ => q -= term,
        }
        if term.abs() < 1e-17 * p.abs().max(1e-300) {
            break;
        }
    }
    let chi = x - (0.5 * nu + 0.25) * PI;
    (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}

/// `J_n(x)` for `n = 0..=n_max` and `x ≥ 0`, by Miller's backward recurrence
/// for moderate `x` and the Hankel expansion plus upward recurrence (stable
/// while `n < x`) for large `x`.
pub fn bessel_j_all(n_max: usize, x: f64) -> Vec<f64> {
    let mut out = vec![0.0; n_max + 1];
    if x == 0.0 {
        out[0] = 1.0;
        return out;
    }
    let x = x.abs();
    if x > ASYMPTOTIC_SWITCH && (n_max as f64) < x {
        out[0] = bessel_asymptotic(0.0, x);
        if n_max >= 1 {
            out[1] = bessel_asymptotic(1.0, x);
        }
        for k in 1..n_max {
            out[k + 1] = 2.0 * k as f64 / x * out[k] - out[k - 1];
        }
        return out;
    }
    let top = n_max.max(x.ceil() as usize);
    let mut m = top + 20 + (40.0 * top as f64).sqrt() as usize;
    m += m % 2;
    let (mut j_next, mut j_cur) = (0.0f64, 1e-300f64);
    let mut norm = 0.0;
    for k in (1..=m).rev() {
        // j_cur holds the unnormalized J_k.
        if k <= n_max {
            out[k] = j_cur;
        }
        if k % 2 == 0 {
            norm += 2.0 * j_cur;
        }
        let j_prev = 2.0 * k as f64 / x * j_cur - j_next;
        j_next = j_cur;
        j_cur = j_prev;
        if j_cur.abs() > 1e250 {
            j_cur *= 1e-250;
            j_next *= 1e-250;
            norm *= 1e-250;
            for v in out.iter_mut() {
                *v *= 1e-250;
            }
        }
    }
    out[0] = j_cur;
    norm += j_cur;
    for v in out.iter_mut() {
        *v /= norm;
    }
    out
}

/// `J_n(x)` for integer `n` (negative orders via `J₋ₙ = (−1)ⁿ Jₙ`) and real `x`.
pub fn bessel_j(n: i64, x: f64) -> f64 {
    let k = n.unsigned_abs() as usize;
    let mut v = if k <= 1 && x.abs() > ASYMPTOTIC_SWITCH {
        bessel_asymptotic(k as f64, x.abs())
    } else {
        bessel_j_all(k, x.abs())[k]
    };
    if x < 0.0 && k % 2 == 1 {
        v = -v;
    }
    if n < 0 && k % 2 == 1 {
        v = -v;
    }
    v
}

pub fn bessel_j0(x: f64) -> f64 {
    bessel_j(0, x)
}

pub fn bessel_j1(x: f64) -> f64 {
    bessel_j(1, x)
}

/// Complete elliptic integrals `(K(m), E(m))` with parameter `m < 1`
/// (`K(m) = ∫₀^{π/2} (1 − m sin²θ)^{−1/2} dθ`), via the arithmetic–geometric mean.
pub fn elliptic_ke(m: f64) -> (f64, f64) {
    assert!(m < 1.0, "elliptic parameter must be below 1");
    let mut a = 1.0f64;
    let mut b = (1.0 - m).sqrt();
    // c² of the current step; c₀² = m.
    let mut c2 = m;
    let mut sum = 0.5 * m;
    let mut pow = 0.5;
    for _ in 0..64 {
        let an = 0.5 * (a + b);
        // c_{n+1} = c_n²/(4a_{n+1}) avoids the cancellation in (a − b)/2.
        let c = c2 / (4.0 * an);
        b = (a * b).sqrt();
        a = an;
        pow *= 2.0;
        c2 = c * c;
        sum += pow * c2;
        if c.abs() <= 1e-17 * a {
            break;
        }
    }
    let k = FRAC_PI_2 / a;
    (k, k * (1.0 - sum))
}

pub fn elliptic_k(m: f64) -> f64 {
    elliptic_ke(m).0
}

pub fn elliptic_e(m: f64) -> f64 {
    elliptic_ke(m).1
}

/// Binomial coefficient as a float.
pub fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `sup_{x ≥ x0} |J_n(x)|` upper bound used for quadrature tails.
pub(crate) fn bessel_envelope(x0: f64) -> f64 {
    if x0 <= 1.0 {
        1.0
    } else {
        (1.1 * (2.0 / (PI * x0)).sqrt()).min(1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bessel_basic_values() {
        assert_eq!(bessel_j0(0.0), 1.0);
        assert_eq!(bessel_j1(0.0), 0.0);
        assert!((bessel_j0(1.0) - 0.765_197_686_557_966_6).abs() < 1e-15);
        assert!((bessel_j1(1.0) - 0.440_050_585_744_933_5).abs() < 1e-15);
        assert!((bessel_j(-3, 2.0) + bessel_j(3, 2.0)).abs() < 1e-16);
    }

    #[test]
    fn branches_agree_near_switch() {
        for n in 0..5usize {
            let x = ASYMPTOTIC_SWITCH + 1e-9;
            let asym = bessel_j_all(n, x)[n];
            // An order list longer than x forces the backward recurrence.
            let miller = bessel_j_all(30, x)[n];
            assert!((asym - miller).abs() < 1e-13, "n={n}: {asym} vs {miller}");
        }
    }

    #[test]
    fn neumann_sum_rule() {
        // J₀² + 2ΣJₙ² = 1.
        for &x in &[0.3, 4.0, 17.5, 40.0, 300.0] {
            let n = (x as usize) + 40;
            let j = if x > ASYMPTOTIC_SWITCH {
                let mut v = bessel_j_all((x as usize).saturating_sub(1), x);
                let tail = bessel_j_all(n, x);
                v.extend_from_slice(&tail[v.len()..]);
                v
            } else {
                bessel_j_all(n, x)
            };
            let s = j[0] * j[0] + 2.0 * j[1..].iter().map(|v| v * v).sum::<f64>();
            assert!((s - 1.0).abs() < 1e-12, "x={x}: {s}");
        }
    }

    #[test]
    fn elliptic_limits() {
        let (k, e) = elliptic_ke(0.0);
        assert!((k - FRAC_PI_2).abs() < 1e-15 && (e - FRAC_PI_2).abs() < 1e-15);
        // K(−1) = Γ(1/4)²/(4√(2π)).
        assert!((elliptic_k(-1.0) - 1.311_028_777_146_059_9).abs() < 1e-14);
        assert!((elliptic_e(-1.0) - 1.910_098_894_513_856).abs() < 1e-14);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), 6.0);
        assert_eq!(binomial(10, 0), 1.0);
        assert_eq!(binomial(3, 5), 0.0);
    }
}
