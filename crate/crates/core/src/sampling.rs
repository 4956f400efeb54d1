//! Deterministic sample points from the Halton sequence.

/// Number of sample points used when none is configured.
pub const DEFAULT_POINTS: usize = 32;

/// The first `count` primes.
fn primes(count: usize) -> Vec<u64> {
    let mut out: Vec<u64> = Vec::with_capacity(count);
    let mut candidate = 2u64;
    while out.len() < count {
        if out.iter().take_while(|p| *p * *p <= candidate).all(|p| !candidate.is_multiple_of(*p)) {
            out.push(candidate);
        }
        candidate += 1;
    }
    out
}

/// Radical inverse of `index` in `base`.
pub fn radical_inverse(mut index: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut scale = inv;
    let mut acc = 0.0;
    while index > 0 {
        acc += (index % base) as f64 * scale;
        index /= base;
        scale *= inv;
    }
    acc
}

/// `count` points of the Halton sequence mapped into `[-half_width, half_width]^dim`.
///
/// Coordinate `k` uses the `k`-th prime as its base; the sequence starts at
/// index 1 so the all-zero Halton point is skipped.
pub fn halton_points(dim: usize, count: usize, half_width: f64) -> Vec<Vec<f64>> {
    let bases = primes(dim);
    (1..=count as u64)
        .map(|i| {
            bases
                .iter()
                .map(|&b| half_width * (2.0 * radical_inverse(i, b) - 1.0))
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_two_sequence() {
        let got: Vec<f64> = (1..=7).map(|i| radical_inverse(i, 2)).collect();
        assert_eq!(got, vec![0.5, 0.25, 0.75, 0.125, 0.625, 0.375, 0.875]);
    }

    #[test]
    fn base_three_sequence() {
        let got: Vec<f64> = (1..=4).map(|i| radical_inverse(i, 3)).collect();
        let want = [1.0 / 3.0, 2.0 / 3.0, 1.0 / 9.0, 4.0 / 9.0];
        for (g, w) in got.iter().zip(want) {
            assert!((g - w).abs() < 1e-15);
        }
    }

    #[test]
    fn points_lie_in_box_and_repeat() {
        let a = halton_points(8, 32, 0.75);
        assert_eq!(a.len(), 32);
        assert!(a.iter().flatten().all(|v| v.abs() <= 0.75));
        assert_eq!(a, halton_points(8, 32, 0.75));
    }

    #[test]
    fn first_primes() {
        assert_eq!(primes(6), vec![2, 3, 5, 7, 11, 13]);
    }
}
