//! Small numeric helpers shared across modules.

/// Full circle length of the angular torus.
pub const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Reduces an angle to the canonical branch [-pi, pi). Idempotent.
pub fn wrap_angle(a: f64) -> f64 {
    let t = (a + std::f64::consts::PI).rem_euclid(TWO_PI) - std::f64::consts::PI;
    if t >= std::f64::consts::PI {
        t - TWO_PI
    } else {
        t
    }
}

/// Compensated (Kahan) sum of an iterator of f64 terms.
pub fn kahan_sum(terms: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut c = 0.0;
    for t in terms {
        let y = t - c;
        let s = sum + y;
        c = (s - sum) - y;
        sum = s;
    }
    sum
}

/// Geometric grid of integers from `lo` to `hi` inclusive, deduplicated.
pub fn geometric_grid(lo: usize, hi: usize, points: usize) -> Vec<usize> {
    assert!(lo >= 1 && hi >= lo && points >= 1);
    if points == 1 || lo == hi {
        return if lo == hi { vec![lo] } else { vec![lo, hi] };
    }
    let (a, b) = (lo as f64, hi as f64);
    let mut out: Vec<usize> = (0..points)
        .map(|i| (a * (b / a).powf(i as f64 / (points - 1) as f64)).round() as usize)
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn wrap_is_idempotent_and_in_range() {
        for &a in &[0.0, 1.0, -1.0, PI, -PI, 3.0 * PI, -3.0 * PI, 1e6, -1e6, PI - 1e-15] {
            let w = wrap_angle(a);
            assert!((-PI..PI).contains(&w), "wrap({a}) = {w} out of range");
            assert_eq!(wrap_angle(w), w, "wrap not idempotent at {a}");
        }
    }

    #[test]
    fn wrap_fixes_branch_endpoints() {
        assert_eq!(wrap_angle(PI), -PI);
        assert_eq!(wrap_angle(-PI), -PI);
        assert_eq!(wrap_angle(0.0), 0.0);
    }

    #[test]
    fn geometric_grid_endpoints() {
        let g = geometric_grid(64, 512, 7);
        assert_eq!(g.first(), Some(&64));
        assert_eq!(g.last(), Some(&512));
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }
}
