//! Level crossings `E⁻ₙ₊₂(f) = E⁻ₙ(f)` between same-parity levels.

use crate::error::{QrmaError, Result};
use crate::model::{ModelParams, Parity};
use crate::rwa::{rwar_level, Branch};
use crate::spectrum::{linspace, solve_sector, Truncation};

/// Bracket width at which bisection stops.
pub const F_TOL: f64 = 1e-10;

/// Roots of `diff` on `[f_lo, f_hi]`: every sign change between neighbouring
/// points of a `grid`-point uniform grid, refined by bisection to [`F_TOL`].
/// Grid points where `diff` is exactly zero are reported as they are.
pub fn find_crossings<F>(mut diff: F, f_lo: f64, f_hi: f64, grid: usize) -> Result<Vec<f64>>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !f_lo.is_finite() || !f_hi.is_finite() {
        return Err(QrmaError::InvalidParameter(
            "coupling range must be finite".into(),
        ));
    }
    if grid < 2 {
        return Err(QrmaError::InvalidParameter(format!(
            "crossing grid needs >= 2 points, got {grid}"
        )));
    }
    if f_hi <= f_lo {
        return Ok(Vec::new());
    }
    let xs = linspace(f_lo, f_hi, grid);
    let ys = xs.iter().map(|&x| diff(x)).collect::<Result<Vec<f64>>>()?;

    let mut roots = Vec::new();
    for i in 0..grid - 1 {
        let (mut a, mut b) = (xs[i], xs[i + 1]);
        let (ya, yb) = (ys[i], ys[i + 1]);
        if ya == 0.0 {
            roots.push(a);
            continue;
        }
        if yb == 0.0 || ya.signum() == yb.signum() {
            if yb == 0.0 && i + 2 == grid {
                roots.push(b);
            }
            continue;
        }
        let mut fa = ya;
        while b - a > F_TOL {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            let fm = diff(mid)?;
            if fm == 0.0 {
                a = mid;
                b = mid;
                break;
            }
            if fm.signum() == fa.signum() {
                a = mid;
                fa = fm;
            } else {
                b = mid;
            }
        }
        roots.push(0.5 * (a + b));
    }
    Ok(roots)
}

/// Couplings where the rotating-wave levels `E⁻ₙ₊₂` and `E⁻ₙ` meet.
pub fn rwar_crossings(
    base: &ModelParams,
    n: usize,
    f_lo: f64,
    f_hi: f64,
    grid: usize,
) -> Result<Vec<f64>> {
    find_crossings(
        |f| {
            let p = base.with_coupling(f)?;
            Ok(rwar_level(&p, n + 2, Branch::Minus)?.energy
                - rwar_level(&p, n, Branch::Minus)?.energy)
        },
        f_lo,
        f_hi,
        grid,
    )
}

/// Same condition on exact levels: sector `(−1)ⁿ`, indices `n + 2` and `n`
/// (the indices carrying the labels `E⁻ₙ₊₂` and `E⁻ₙ`).
///
/// Levels are tracked by index within the sector, so an avoided crossing
/// never produces a sign change.
pub fn exact_crossings(
    base: &ModelParams,
    n: usize,
    f_lo: f64,
    f_hi: f64,
    grid: usize,
    trunc: Truncation,
) -> Result<Vec<f64>> {
    let parity = if n.is_multiple_of(2) {
        Parity::Even
    } else {
        Parity::Odd
    };
    find_crossings(
        |f| {
            let p = base.with_coupling(f)?;
            let sol = solve_sector(&p, parity, n + 3, trunc)?;
            Ok(sol.energies[n + 2] - sol.energies[n])
        },
        f_lo,
        f_hi,
        grid,
    )
}
