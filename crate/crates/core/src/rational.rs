//! Rational approximation of frequency ratios by continued fractions.

use num_integer::Integer;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Fraction {
    pub num: i64,
    pub den: i64,
}

impl Fraction {
    pub fn value(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl std::fmt::Display for Fraction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// First continued-fraction convergent `p/q` of `x` with
/// `|x − p/q| ≤ rel_tol·|x|`, or `None` if every such convergent needs a
/// denominator above `max_den`.
///
/// Convergents come out in lowest terms with a positive denominator.
pub fn approximate(x: f64, max_den: u64, rel_tol: f64) -> Option<Fraction> {
    if !x.is_finite() || max_den == 0 {
        return None;
    }
    if x == 0.0 {
        return Some(Fraction { num: 0, den: 1 });
    }
    let max_den = i128::from(max_den.min(i64::MAX as u64));
    let target = rel_tol * x.abs();

    // h_{n} = a_n h_{n-1} + h_{n-2}, likewise k_n.
    let (mut h_prev, mut h) = (0_i128, 1_i128);
    let (mut k_prev, mut k) = (1_i128, 0_i128);
    let mut rest = x;
    for _ in 0..96 {
        let a = rest.floor();
        if a.abs() > 1e18 {
            return None;
        }
        let a_int = a as i128;
        let h_next = a_int.checked_mul(h)?.checked_add(h_prev)?;
        let k_next = a_int.checked_mul(k)?.checked_add(k_prev)?;
        if k_next > max_den {
            return None;
        }
        (h_prev, h) = (h, h_next);
        (k_prev, k) = (k, k_next);

        if (x - h as f64 / k as f64).abs() <= target {
            return Some(Fraction {
                num: i64::try_from(h).ok()?,
                den: i64::try_from(k).ok()?,
            });
        }
        let frac = rest - a;
        if frac == 0.0 {
            return None;
        }
        rest = 1.0 / frac;
    }
    None
}

/// Fundamental angular frequency of a family of frequencies `base·rᵢ`
/// with rational `rᵢ`: `base·gcd(nᵢ)/L` where `L` is the common
/// denominator and `nᵢ = rᵢ·L`. Zero ratios are ignored; `None` if all are zero.
pub fn fundamental_frequency(base: f64, ratios: &[Fraction]) -> Option<f64> {
    let nonzero: Vec<Fraction> = ratios.iter().copied().filter(|r| r.num != 0).collect();
    if nonzero.is_empty() {
        return None;
    }
    let lcm = nonzero
        .iter()
        .fold(1_i128, |l, r| l.lcm(&i128::from(r.den)));
    let gcd = nonzero.iter().fold(0_i128, |g, r| {
        let n = i128::from(r.num) * (lcm / i128::from(r.den));
        g.gcd(&n)
    });
    Some(base.abs() * gcd as f64 / lcm as f64)
}
