//! Adaptive Simpson quadrature.

/// Integrate `f` over `[a, b]` to relative tolerance `rel_tol`, subdividing
/// at most `max_depth` times along any branch.
///
/// The interval is pre-split into `segments` equal panels so that narrow
/// features near `a` (the ground layer of a turbulence profile) are sampled
/// before the error estimate is trusted.
pub fn adaptive_simpson<F>(f: F, a: f64, b: f64, rel_tol: f64, max_depth: u32) -> f64
where
    F: Fn(f64) -> f64,
{
    if a == b {
        return 0.0;
    }
    const SEGMENTS: usize = 16;
    // Coarse pass fixes an absolute tolerance from the integral's magnitude.
    let h = (b - a) / SEGMENTS as f64;
    let panels: Vec<(f64, f64, f64, f64, f64, f64)> = (0..SEGMENTS)
        .map(|i| {
            let lo = a + h * i as f64;
            let hi = if i + 1 == SEGMENTS { b } else { lo + h };
            let (flo, fhi) = (f(lo), f(hi));
            let m = 0.5 * (lo + hi);
            let fm = f(m);
            (lo, hi, flo, fm, fhi, simpson(lo, hi, flo, fm, fhi))
        })
        .collect();
    let coarse: f64 = panels.iter().map(|p| p.5).sum();
    let abs_tol = (rel_tol * coarse.abs()).max(f64::MIN_POSITIVE);
    let per_panel = abs_tol / SEGMENTS as f64;
    panels
        .into_iter()
        .map(|(lo, hi, flo, fm, fhi, whole)| {
            recurse(&f, lo, hi, flo, fm, fhi, whole, per_panel, max_depth)
        })
        .sum()
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn recurse<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let (flm, frm) = (f(lm), f(rm));
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    recurse(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
        + recurse(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials_are_exact() {
        let v = adaptive_simpson(|x| x * x * x - 2.0 * x, 0.0, 3.0, 1e-10, 20);
        assert!((v - (81.0 / 4.0 - 9.0)).abs() < 1e-12);
    }

    #[test]
    fn exponential_and_power_law() {
        let v = adaptive_simpson(|x| (-x).exp(), 0.0, 50.0, 1e-9, 30);
        assert!((v - (1.0 - (-50f64).exp())).abs() < 1e-8);
        let v = adaptive_simpson(|x: f64| x.powf(5.0 / 3.0), 0.0, 1.0, 1e-9, 30);
        assert!((v - 3.0 / 8.0).abs() < 1e-8);
    }

    #[test]
    fn empty_interval() {
        assert_eq!(adaptive_simpson(|x| x, 2.0, 2.0, 1e-6, 10), 0.0);
    }
}
