//! Packing numbers of CP², equal-radius maxima and the explicit maximality
//! and feasibility tests for small ball counts.
//!
//! The fill-fraction table below is re-derived independently at build time by
//! a brute-force Cremona reduction over exceptional classes (see build.rs);
//! any mismatch fails the build.

use num_rational::Rational64;

use crate::{Error, Result};

/// Fill fractions p_1..p_8; p_k = 1 for k ≥ 9.
pub const PACKING_NUMBERS: [(i64, i64); 8] = [
    (1, 1),
    (1, 2),
    (3, 4),
    (1, 1),
    (4, 5),
    (24, 25),
    (63, 64),
    (288, 289),
];

/// Fill-fraction table for equal balls in CP².
pub struct PackingTable;

impl PackingTable {
    /// p_k as an exact rational.
    pub fn p(k: usize) -> Result<Rational64> {
        if k < 1 {
            return Err(Error::Parameter("ball count must be at least 1".into()));
        }
        Ok(if k <= 8 {
            let (n, d) = PACKING_NUMBERS[k - 1];
            Rational64::new(n, d)
        } else {
            Rational64::new(1, 1)
        })
    }

    /// Exact r² of the maximal equal-radius packing: √(p_k/k), which is a
    /// rational square for every k.
    pub fn r_squared(k: usize) -> Result<Rational64> {
        let q = Self::p(k)? / Rational64::from_integer(k as i64);
        rational_sqrt(q).ok_or_else(|| {
            Error::Geometry(format!("p_{k}/{k} is not a rational square"))
        })
    }
}

fn isqrt(n: i64) -> Option<i64> {
    if n < 0 {
        return None;
    }
    let r = (n as f64).sqrt().round() as i64;
    for c in [r - 1, r, r + 1] {
        if c >= 0 && c * c == n {
            return Some(c);
        }
    }
    None
}

/// Exact square root of a nonnegative rational, if it exists.
pub fn rational_sqrt(q: Rational64) -> Option<Rational64> {
    Some(Rational64::new(isqrt(*q.numer())?, isqrt(*q.denom())?))
}

/// Maximal radius of k equal balls: (p_k/k)^(1/4).
pub fn max_equal_radius(k: usize) -> Result<f64> {
    let r2 = PackingTable::r_squared(k)?;
    Ok((*r2.numer() as f64 / *r2.denom() as f64).sqrt())
}

/// Verdict of a maximality test.
#[derive(Clone, Debug)]
pub struct MaximalityVerdict {
    pub feasible: bool,
    pub binding_constraint: String,
    pub margin: f64,
}

const EQ_TOL: f64 = 1e-9;

/// Maximality of a packing by balls of the given radii (sorted descending).
/// Two balls: r₁²+r₂² = 1; three: r₁²+r₂² = r₁²+r₃² = 1; equal radii: the
/// table value; anything else is reported unsupported with the volume margin.
pub fn maximality_check(radii: &[f64]) -> Result<MaximalityVerdict> {
    if radii.is_empty() || radii.iter().any(|&r| r <= 0.0) {
        return Err(Error::Parameter("radii must be positive".into()));
    }
    if radii.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::Parameter("radii must be sorted descending".into()));
    }
    let equal = radii.windows(2).all(|w| (w[0] - w[1]).abs() < EQ_TOL);
    let verdict = |dev: f64, constraint: &str| MaximalityVerdict {
        feasible: dev < EQ_TOL,
        binding_constraint: constraint.to_string(),
        margin: if dev < EQ_TOL { 0.0 } else { -dev },
    };
    let sq = |r: f64| r * r;
    match radii.len() {
        2 => {
            let dev = (sq(radii[0]) + sq(radii[1]) - 1.0).abs();
            Ok(verdict(dev, "r1^2 + r2^2 = 1"))
        }
        3 => {
            let d12 = (sq(radii[0]) + sq(radii[1]) - 1.0).abs();
            let d13 = (sq(radii[0]) + sq(radii[2]) - 1.0).abs();
            Ok(verdict(d12.max(d13), "r1^2 + r2^2 = r1^2 + r3^2 = 1"))
        }
        k if equal => {
            let dev = (radii[0] - max_equal_radius(k)?).abs();
            Ok(verdict(dev, "r = (p_k/k)^(1/4)"))
        }
        _ => {
            let slack = 1.0 - radii.iter().map(|r| r.powi(4)).sum::<f64>();
            Ok(MaximalityVerdict {
                feasible: false,
                binding_constraint: format!(
                    "unsupported (volume obstruction slack {slack:.6})"
                ),
                margin: -slack.abs().max(EQ_TOL),
            })
        }
    }
}

/// True iff r₁² + r₂² is within 1e-9 of a positive integer (the necessary
/// condition for two balls to share a full Hopf circle).
pub fn pratique_test(r1: f64, r2: f64) -> Result<bool> {
    if r1 <= 0.0 || r2 <= 0.0 {
        return Err(Error::Parameter("radii must be positive".into()));
    }
    let s = r1 * r1 + r2 * r2;
    Ok((s - s.round()).abs() < EQ_TOL && s.round() >= 1.0)
}

/// Volume obstruction: Σ rᵢ⁴ ≤ 1.
pub fn volume_obstruction(radii: &[f64]) -> Result<bool> {
    if radii.is_empty() || radii.iter().any(|&r| r <= 0.0) {
        return Err(Error::Parameter("radii must be positive".into()));
    }
    Ok(radii.iter().map(|r| r.powi(4)).sum::<f64>() <= 1.0 + 1e-12)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_radii_are_exact_rational_squares() {
        let expected = [
            (1, 1),
            (1, 2),
            (1, 2),
            (1, 2),
            (2, 5),
            (2, 5),
            (3, 8),
            (6, 17),
        ];
        for (k, &(n, d)) in expected.iter().enumerate() {
            let r2 = PackingTable::r_squared(k + 1).unwrap();
            assert_eq!(r2, Rational64::new(n, d), "k = {}", k + 1);
            // r^4 · k = p_k exactly
            assert_eq!(
                r2 * r2 * Rational64::from_integer((k + 1) as i64),
                PackingTable::p(k + 1).unwrap()
            );
        }
        assert_eq!(PackingTable::p(9).unwrap(), Rational64::new(1, 1));
        assert_eq!(PackingTable::r_squared(16).unwrap(), Rational64::new(1, 4));
    }

    #[test]
    fn equal_radius_values() {
        assert!((max_equal_radius(5).unwrap() - (2.0f64 / 5.0).sqrt()).abs() < 1e-15);
        assert!((max_equal_radius(2).unwrap() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((max_equal_radius(7).unwrap() - (3.0f64 / 8.0).sqrt()).abs() < 1e-15);
        assert!(max_equal_radius(0).is_err());
    }

    #[test]
    fn maximality_two_and_three_balls() {
        let v = maximality_check(&[0.8, 0.6]).unwrap();
        assert!(v.feasible && v.binding_constraint.contains("r1^2 + r2^2"));
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!(maximality_check(&[r, r, r]).unwrap().feasible);
        let v = maximality_check(&[0.7, 0.6]).unwrap();
        assert!(!v.feasible);
        assert!((v.margin + 0.15).abs() < 1e-12, "margin {}", v.margin);
        assert!(maximality_check(&[0.6, 0.8]).is_err()); // not sorted
    }

    #[test]
    fn maximality_equal_and_unsupported() {
        let r5 = (2.0f64 / 5.0).sqrt();
        assert!(maximality_check(&[r5; 5]).unwrap().feasible);
        let v = maximality_check(&[0.9, 0.5, 0.4, 0.3]).unwrap();
        assert!(!v.feasible && v.binding_constraint.contains("unsupported"));
        assert!(v.margin < 0.0);
    }

    #[test]
    fn pratique_examples() {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!(pratique_test(r, r).unwrap());
        let r5 = (2.0f64 / 5.0).sqrt();
        assert!(!pratique_test(r5, r5).unwrap());
        assert!(pratique_test(1.0, 1.0).unwrap());
        // symmetry
        assert_eq!(
            pratique_test(0.8, 0.6).unwrap(),
            pratique_test(0.6, 0.8).unwrap()
        );
    }

    #[test]
    fn volume_obstruction_examples() {
        let r5 = (2.0f64 / 5.0).sqrt();
        assert!(volume_obstruction(&[r5; 5]).unwrap());
        assert!(!volume_obstruction(&[1.0, 0.3]).unwrap());
        assert!(volume_obstruction(&[1.0]).unwrap());
    }

    #[test]
    fn feasible_maximality_respects_volume_bound() {
        // two-ball maximal families satisfy the volume obstruction
        for i in 1..99 {
            let r1 = 0.1 + 0.89 * (i as f64) / 99.0;
            let r2 = (1.0 - r1 * r1).sqrt();
            let (hi, lo) = if r1 >= r2 { (r1, r2) } else { (r2, r1) };
            let v = maximality_check(&[hi, lo]).unwrap();
            assert!(v.feasible);
            assert!(volume_obstruction(&[hi, lo]).unwrap());
        }
    }
}
