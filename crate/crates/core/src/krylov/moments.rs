use crate::error::{Error, Result};

/// Even moments `m₀ = 1, m₂, m₄, …` of an autocorrelation function;
/// `m[k]` holds `m_{2k}`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentSequence {
    pub m: Vec<f64>,
}

impl MomentSequence {
    pub fn new(m: Vec<f64>) -> Result<Self> {
        match m.first() {
            Some(&m0) if (m0 - 1.0).abs() <= 1e-12 => Ok(MomentSequence { m }),
            _ => Err(Error::Domain("moment sequences must start with m0 = 1".into())),
        }
    }

    /// `m_{2k}`.
    pub fn get(&self, k: usize) -> Option<f64> {
        self.m.get(k).copied()
    }

    /// Highest available index `2k`.
    pub fn order(&self) -> usize {
        2 * (self.m.len() - 1)
    }
}

/// Moments `m_0 … m_order` (even indices only) of the chain with
/// coefficients `b`, i.e. `(T^{2n})₀₀` for the tridiagonal matrix with
/// off-diagonal `b`. This is the weighted sum over Dyck paths.
pub fn moments_from_lanczos(b: &[f64], order: usize) -> Result<MomentSequence> {
    if order > 2 * b.len() {
        return Err(Error::InsufficientCoefficients(format!(
            "moment index {order} needs at least {} coefficients, have {}",
            order.div_ceil(2),
            b.len()
        )));
    }
    let n_max = order / 2;
    // x holds the amplitudes (T^s e₀)_h over heights h.
    let mut x = vec![0.0; n_max + 2];
    x[0] = 1.0;
    let mut m = vec![1.0];
    for step in 1..=2 * n_max {
        let top = step.min(n_max + 1);
        let mut y = vec![0.0; n_max + 2];
        for h in 0..=top {
            let down = if h + 1 < x.len() && h < b.len() { b[h] * x[h + 1] } else { 0.0 };
            let up = if h >= 1 && h - 1 < b.len() { b[h - 1] * x[h - 1] } else { 0.0 };
            y[h] = down + up;
        }
        x = y;
        if step % 2 == 0 {
            m.push(x[0]);
        }
    }
    Ok(MomentSequence { m })
}

/// Recovers `b₁ … b_K` from `m₀ … m_{2K}` by the standard moment recursion
///
/// `M_{2k}^{(n)} = M_{2k}^{(n−1)}/b_{n−1}² − M_{2k−2}^{(n−2)}/b_{n−2}²`,
/// `b_n = √M_{2n}^{(n)}`, with `M^{(0)} = m`, `M^{(−1)} = 0`, `b₀ = b₋₁ = 1`.
///
/// A vanishing `M_{2n}^{(n)}` ends the chain; a negative one means the
/// moments are not realizable.
pub fn lanczos_from_moments(m: &MomentSequence) -> Result<Vec<f64>> {
    let kmax = m.m.len() - 1;
    let mut prev2 = vec![0.0; kmax + 1];
    let mut prev1 = m.m.clone();
    let (mut b_nm2, mut b_nm1) = (1.0f64, 1.0f64);
    let mut b = Vec::with_capacity(kmax);
    for n in 1..=kmax {
        let mut cur = vec![0.0; kmax + 1];
        for k in n..=kmax {
            cur[k] = prev1[k] / (b_nm1 * b_nm1) - prev2[k - 1] / (b_nm2 * b_nm2);
        }
        let scale = (prev1[n] / (b_nm1 * b_nm1)).abs().max(f64::MIN_POSITIVE);
        let val = cur[n];
        if val < -1e-10 * scale {
            return Err(Error::Domain(format!(
                "moments are not realizable: b_{n}² = {val:e} < 0"
            )));
        }
        if val <= 1e-10 * scale {
            break;
        }
        let bn = val.sqrt();
        b.push(bn);
        prev2 = prev1;
        prev1 = cur;
        b_nm2 = b_nm1;
        b_nm1 = bn;
    }
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Enumerates Dyck paths of length 2n explicitly and sums the weights.
    fn dyck_sum(b: &[f64], n: usize) -> f64 {
        fn walk(b: &[f64], steps_left: usize, h: usize, acc: f64) -> f64 {
            if steps_left == 0 {
                return if h == 0 { acc } else { 0.0 };
            }
            if h > steps_left {
                return 0.0;
            }
            let mut s = 0.0;
            if h < b.len() {
                s += walk(b, steps_left - 1, h + 1, acc * b[h]);
            }
            if h > 0 {
                s += walk(b, steps_left - 1, h - 1, acc * b[h - 1]);
            }
            s
        }
        walk(b, 2 * n, 0, 1.0)
    }

    #[test]
    fn small_examples() {
        let m = moments_from_lanczos(&[1.0, 2f64.sqrt()], 4).unwrap();
        assert_eq!(m.m.len(), 3);
        assert!((m.m[1] - 1.0).abs() < 1e-15);
        assert!((m.m[2] - 3.0).abs() < 1e-14);
        let m = moments_from_lanczos(&[1.7], 2).unwrap();
        assert!((m.m[1] - 1.7 * 1.7).abs() < 1e-15);
        let m = moments_from_lanczos(&[1.0; 6], 4).unwrap();
        assert_eq!(m.m[2], 2.0);
    }

    #[test]
    fn matches_path_enumeration() {
        let b = [0.7, 1.9, 1.3, 2.4, 0.5];
        let m = moments_from_lanczos(&b, 10).unwrap();
        for n in 0..=5 {
            let d = dyck_sum(&b, n);
            assert!((m.m[n] - d).abs() <= 1e-12 * d.max(1.0), "n={n}");
        }
    }

    #[test]
    fn gaussian_inverse() {
        let m = MomentSequence::new(vec![1.0, 1.0, 3.0, 15.0]).unwrap();
        let b = lanczos_from_moments(&m).unwrap();
        let expect = [1.0, 2f64.sqrt(), 3f64.sqrt()];
        for (x, y) in b.iter().zip(expect) {
            assert!((x - y).abs() < 1e-14);
        }
        let b = lanczos_from_moments(&MomentSequence::new(vec![1.0, 4.0]).unwrap()).unwrap();
        assert_eq!(b, vec![2.0]);
        let b = lanczos_from_moments(&MomentSequence::new(vec![1.0, 1.0, 2.0]).unwrap()).unwrap();
        assert!((b[0] - 1.0).abs() < 1e-15 && (b[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_unrealizable() {
        // m4 < m2² violates Hankel positivity.
        let m = MomentSequence::new(vec![1.0, 2.0, 3.0]).unwrap();
        assert!(matches!(lanczos_from_moments(&m), Err(Error::Domain(_))));
        assert!(MomentSequence::new(vec![2.0, 1.0]).is_err());
        assert!(moments_from_lanczos(&[1.0], 4).is_err());
    }

    #[test]
    fn terminating_chain() {
        let m = moments_from_lanczos(&[2.0, 2.0, 0.0, 0.0], 8).unwrap();
        let b = lanczos_from_moments(&m).unwrap();
        assert_eq!(b.len(), 2);
        assert!((b[0] - 2.0).abs() < 1e-12 && (b[1] - 2.0).abs() < 1e-12);
    }
}
