//! Complex polynomial roots for the eigenvalue polynomials, degree <= 6 in
//! practice. Degrees one and two use closed forms, higher degrees a
//! Durand-Kerner iteration with deterministic initialization followed by a
//! Newton polish.

use num_complex::Complex64;

use crate::error::{GaError, Result};

const MAX_ITERATIONS: usize = 500;
const STEP_TOL: f64 = 1e-14;
const RESIDUAL_TOL: f64 = 1e-10;

/// Evaluate a polynomial with ascending coefficients at `x` (Horner).
pub fn eval(coeffs: &[Complex64], x: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::ZERO, |acc, &c| acc * x + c)
}

fn derivative(coeffs: &[Complex64]) -> Vec<Complex64> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, &c)| c * k as f64)
        .collect()
}

/// All complex roots of the polynomial with ascending coefficients.
/// The leading coefficient must be nonzero; roots are unordered.
pub fn roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let degree = coeffs.len().saturating_sub(1);
    if degree == 0 {
        return Ok(Vec::new());
    }
    let lead = coeffs[degree];
    if lead.norm() == 0.0 {
        return Err(GaError::InvalidArgument(
            "leading polynomial coefficient is zero".into(),
        ));
    }
    let monic: Vec<Complex64> = coeffs.iter().map(|&c| c / lead).collect();
    match degree {
        1 => Ok(vec![-monic[0]]),
        2 => Ok(quadratic(monic[0], monic[1])),
        _ => durand_kerner(&monic),
    }
}

/// Roots of x^2 + b x + c, cancellation-stable via Vieta.
fn quadratic(c: Complex64, b: Complex64) -> Vec<Complex64> {
    let disc = (b * b - c * 4.0).sqrt();
    let r1 = (-b + disc) * 0.5;
    let r2 = (-b - disc) * 0.5;
    let big = if r1.norm() >= r2.norm() { r1 } else { r2 };
    if big.norm() == 0.0 {
        return vec![Complex64::ZERO, Complex64::ZERO];
    }
    vec![big, c / big]
}

fn durand_kerner(monic: &[Complex64]) -> Result<Vec<Complex64>> {
    let degree = monic.len() - 1;
    let seed = Complex64::new(0.4, 0.9);
    let mut xs: Vec<Complex64> = (0..degree)
        .map(|j| seed.powu(j as u32 + 1))
        .collect();

    let mut converged = false;
    for _ in 0..MAX_ITERATIONS {
        let mut max_step = 0.0f64;
        for j in 0..degree {
            let mut den = Complex64::ONE;
            for m in 0..degree {
                if m != j {
                    den *= xs[j] - xs[m];
                }
            }
            if den.norm() < 1e-280 {
                // collided iterates: nudge apart deterministically
                xs[j] += Complex64::new(1e-6, 1e-6);
                max_step = f64::MAX;
                continue;
            }
            let step = eval(monic, xs[j]) / den;
            xs[j] -= step;
            max_step = max_step.max(step.norm());
        }
        let scale = 1.0 + xs.iter().map(|x| x.norm()).fold(0.0, f64::max);
        if max_step <= STEP_TOL * scale {
            converged = true;
            break;
        }
    }

    // Multiple roots stall the step criterion near the attainable accuracy;
    // accept any iterate whose backward error is tiny.
    if !converged && !xs.iter().all(|&x| residual_ok(monic, x)) {
        return Err(GaError::NoConvergence);
    }

    let deriv = derivative(monic);
    for x in xs.iter_mut() {
        for _ in 0..2 {
            let d = eval(&deriv, *x);
            if d.norm() > 1e-12 {
                let step = eval(monic, *x) / d;
                if step.norm() < 1e-2 * (1.0 + x.norm()) {
                    *x -= step;
                }
            }
        }
    }

    if !xs.iter().all(|&x| residual_ok(monic, x)) {
        return Err(GaError::NoConvergence);
    }
    Ok(xs)
}

fn residual_ok(monic: &[Complex64], x: Complex64) -> bool {
    let scale: f64 = monic
        .iter()
        .enumerate()
        .map(|(k, c)| c.norm() * x.norm().powi(k as i32))
        .sum();
    eval(monic, x).norm() <= RESIDUAL_TOL * (1.0 + scale)
}
