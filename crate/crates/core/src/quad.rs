//! Gauss–Legendre quadrature nodes and weights.
//!
//! Nodes are the roots of the Legendre polynomial \(P_n\), found by Newton
//! iteration from the Chebyshev-based initial guess
//! \(x_i^{(0)} = \cos\bigl(\pi (i + 3/4)/(n + 1/2)\bigr)\); weights are
//! \(w_i = 2 / \bigl[(1 - x_i^2)\,P_n'(x_i)^2\bigr]\).
//!
//! An \(n\)-point rule integrates polynomials up to degree \(2n - 1\)
//! exactly, so the smooth integrands produced by the volume-density
//! substitution \(r = \sin\alpha\) converge to machine precision long before
//! the 128-point rule used by the callers in this crate.

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
///
/// Nodes are returned in ascending order. Panics if `n == 0`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0, "quadrature order must be positive");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    // Roots come in +/- pairs; solve for the nonnegative half and mirror.
    let half = n.div_ceil(2);
    for i in 0..half {
        // Initial guess for the i-th root counted from +1 downward.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let step = p / d;
            x -= step;
            if step.abs() <= 1e-15 {
                // One polishing step after convergence, then stop.
                let (p2, d2) = legendre_with_derivative(n, x);
                dp = d2;
                x -= p2 / d2;
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[n - 1 - i] = x;
        weights[n - 1 - i] = w;
        nodes[i] = -x;
        weights[i] = w;
    }
    if n % 2 == 1 {
        // The middle root is exactly zero; the mirror loop wrote it twice.
        nodes[n / 2] = 0.0;
        let (_, d) = legendre_with_derivative(n, 0.0);
        weights[n / 2] = 2.0 / (d * d);
    }
    (nodes, weights)
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[a, b]`.
pub fn gauss_legendre_on(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let (xs, ws) = gauss_legendre(n);
    let mid = 0.5 * (a + b);
    let hw = 0.5 * (b - a);
    (
        xs.iter().map(|x| mid + hw * x).collect(),
        ws.iter().map(|w| w * hw).collect(),
    )
}

/// Evaluates \(P_n(x)\) and \(P_n'(x)\) via the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0; // P_0
    let mut p = x; // P_1
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p_next = ((2.0 * kf - 1.0) * x * p - (kf - 1.0) * p_prev) / kf;
        p_prev = p;
        p = p_next;
    }
    // P_n'(x) = n (x P_n - P_{n-1}) / (x^2 - 1)
    let d = (n as f64) * (x * p - p_prev) / (x * x - 1.0);
    (p, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_interval_length() {
        for n in [1, 2, 3, 7, 16, 64, 128] {
            let (_, ws) = gauss_legendre(n);
            let total: f64 = ws.iter().sum();
            assert!(
                (total - 2.0).abs() < 1e-13,
                "n = {n}: weight sum {total} != 2"
            );
        }
    }

    #[test]
    fn nodes_are_symmetric_and_sorted() {
        for n in [2, 5, 16, 33] {
            let (xs, _) = gauss_legendre(n);
            for i in 1..n {
                assert!(xs[i] > xs[i - 1], "nodes must be ascending");
            }
            for i in 0..n {
                assert!(
                    (xs[i] + xs[n - 1 - i]).abs() < 1e-15,
                    "nodes must be symmetric about 0"
                );
            }
        }
    }

    #[test]
    fn integrates_monomials_exactly() {
        // An n-point rule is exact for degree <= 2n - 1. Odd powers integrate
        // to zero by symmetry; even powers to 2/(k+1).
        let n = 16;
        let (xs, ws) = gauss_legendre(n);
        for k in 0..=(2 * n - 1) {
            let got: f64 = xs
                .iter()
                .zip(&ws)
                .map(|(x, w)| w * x.powi(k as i32))
                .sum();
            let want = if k % 2 == 1 { 0.0 } else { 2.0 / (k as f64 + 1.0) };
            assert!(
                (got - want).abs() < 1e-13,
                "x^{k}: got {got}, want {want}"
            );
        }
    }

    #[test]
    fn integrates_smooth_transcendental() {
        // int_0^pi sin = 2, with spectral convergence.
        let (xs, ws) = gauss_legendre_on(32, 0.0, std::f64::consts::PI);
        let got: f64 = xs.iter().zip(&ws).map(|(x, w)| w * x.sin()).sum();
        assert!((got - 2.0).abs() < 1e-14, "got {got}");
    }
}
