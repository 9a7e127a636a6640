//! Closed-form exponentials of bivectors through the invariant
//! decomposition, principal logarithms of simple rotors, generalized
//! trigonometric functions, rotor powers and the series oracle.

use num_complex::Complex64;

use crate::decomposition::split;
use crate::error::{GaError, Result};
use crate::multivector::Multivector;
use crate::tolerance::Tolerance;

/// sinh(z)/z extended continuously by sinhc(0) = 1.
pub fn sinhc(z: Complex64) -> Complex64 {
    if z.norm() < 1e-8 {
        // series: 1 + z^2/6, below double precision beyond this range
        Complex64::ONE + z * z / 6.0
    } else {
        z.sinh() / z
    }
}

/// A grade-2 element whose square is a scalar, carrying that scalar.
#[derive(Debug, Clone)]
pub struct SimpleBivector {
    value: Multivector,
    lambda: Complex64,
}

impl SimpleBivector {
    pub fn new(value: Multivector, tol: Tolerance) -> Result<Self> {
        let scale = value.max_abs();
        if !value.is_grade(2, tol) {
            return Err(GaError::NotAGrade { expected: 2 });
        }
        let sq = value.gp(&value)?;
        let eps = tol.eps_rel.max(1e-9);
        if sq.off_grade_max(0) > tol.eps_abs + eps * scale * scale {
            return Err(GaError::NotSimple);
        }
        Ok(SimpleBivector {
            value,
            lambda: sq.scalar_part(),
        })
    }

    pub(crate) fn new_unchecked(value: Multivector, lambda: Complex64) -> Self {
        SimpleBivector { value, lambda }
    }

    pub fn value(&self) -> &Multivector {
        &self.value
    }

    /// The scalar square lambda = b^2.
    pub fn lambda(&self) -> Complex64 {
        self.lambda
    }

    /// Scaling a simple bivector stays simple; lambda picks up t^2.
    pub fn scaled(&self, t: f64) -> SimpleBivector {
        SimpleBivector {
            value: &self.value * t,
            lambda: self.lambda * (t * t),
        }
    }
}

/// An even multivector normalized to R * reverse(R) = 1.
#[derive(Debug, Clone)]
pub struct Rotor {
    value: Multivector,
}

impl Rotor {
    pub fn new(value: Multivector, tol: Tolerance) -> Result<Self> {
        let scale = value.max_abs();
        let eps = tol.eps_rel.max(1e-9);
        if value.odd_part().max_abs() > tol.eps_abs + eps * scale {
            return Err(GaError::NotAVersor("rotors carry only even grades".into()));
        }
        let sq = value.gp(&value.reverse())?;
        let one = Multivector::scalar(value.algebra(), 1.0);
        if sq.max_abs_diff(&one) > tol.eps_abs + eps * (1.0 + scale * scale) {
            return Err(GaError::NotAVersor(
                "R * reverse(R) differs from 1".into(),
            ));
        }
        Ok(Rotor { value })
    }

    pub(crate) fn new_unchecked(value: Multivector) -> Self {
        Rotor { value }
    }

    pub fn value(&self) -> &Multivector {
        &self.value
    }

    pub fn reverse(&self) -> Rotor {
        Rotor {
            value: self.value.reverse(),
        }
    }
}

/// Generalized cosine: co(b) = cosh(sqrt(lambda)), the scalar part of e^b.
pub fn co(b: &SimpleBivector) -> Complex64 {
    b.lambda().sqrt().cosh()
}

/// Generalized sine: si(b) = b sinhc(sqrt(lambda)), the grade-2 part of e^b.
pub fn si(b: &SimpleBivector) -> Multivector {
    b.value() * sinhc(b.lambda().sqrt())
}

/// Exponential of a simple bivector by the generalized Euler formula.
pub fn exp_simple(b: &SimpleBivector) -> Rotor {
    let value = &Multivector::scalar(b.value().algebra(), co(b)) + &si(b);
    Rotor::new_unchecked(value)
}

/// Exponential of a general bivector: invariant decomposition followed by a
/// product of commuting simple exponentials. Falls back to the series when
/// the decomposition degenerates, so the operation is total on bivectors.
pub fn exp_bivector(b: &Multivector, tol: Tolerance) -> Result<Rotor> {
    if !b.is_grade(2, tol) {
        return Err(GaError::NotAGrade { expected: 2 });
    }
    match split(b, tol) {
        Ok(dec) => {
            let mut acc = Multivector::scalar(b.algebra(), 1.0);
            for blade in &dec.blades {
                let lambda = blade.gp(blade)?.scalar_part();
                let simple = SimpleBivector::new_unchecked(blade.clone(), lambda);
                acc = acc.gp(exp_simple(&simple).value())?;
            }
            Ok(Rotor::new_unchecked(acc))
        }
        Err(GaError::DegenerateRoots(_))
        | Err(GaError::SingularSystem)
        | Err(GaError::NoConvergence) => Ok(Rotor::new_unchecked(exp_series(b, 1e-14))),
        Err(e) => Err(e),
    }
}

/// Truncated Taylor exponential with scaling and squaring; the independent
/// oracle for the closed forms. The coefficient l1 norm bounds the operator
/// norm of left multiplication, so scaling to l1 <= 1 keeps the 30-term
/// remainder below 1e-32.
pub fn exp_series(x: &Multivector, tol: f64) -> Multivector {
    let l1 = x.l1_norm();
    let squarings = if l1 > 1.0 {
        l1.log2().ceil() as u32
    } else {
        0
    };
    let scaled = x * (1.0 / f64::powi(2.0, squarings as i32));
    let mut acc = Multivector::scalar(x.algebra(), 1.0);
    let mut term = Multivector::scalar(x.algebra(), 1.0);
    for n in 1..=30 {
        term = &term.gp(&scaled).expect("same algebra") * (1.0 / n as f64);
        acc = &acc + &term;
        if term.max_abs() <= tol * acc.max_abs() * 1e-2 {
            break;
        }
    }
    for _ in 0..squarings {
        acc = acc.gp(&acc).expect("same algebra");
    }
    acc
}

/// Principal logarithm of a simple rotor R = <R>_0 + <R>_2.
///
/// For real <R>_2^2 the three branches of the closed form apply: arccosh for
/// boosts, the bivector itself for null generators, arccos for rotations,
/// where the sign of the normalized <R>_2 resolves the full 2 pi range. A
/// genuinely complex square goes through the complex arccosh.
pub fn log_simple(r: &Rotor, tol: Tolerance) -> Result<SimpleBivector> {
    let value = r.value();
    let s0 = value.scalar_part();
    let b2 = value.grade_select(2);
    // the rotor must be <R>_0 + <R>_2 with a simple grade-2 part
    let residue = (&(value - &b2)).max_abs_diff(&Multivector::scalar(value.algebra(), s0));
    if residue > tol.eps_abs + tol.eps_rel.max(1e-9) * value.max_abs() {
        return Err(GaError::NotSimple);
    }
    let sq = b2.gp(&b2)?;
    if sq.off_grade_max(0) > tol.eps_abs + tol.eps_rel.max(1e-9) * b2.max_abs() * b2.max_abs() {
        return Err(GaError::NotSimple);
    }
    let lam2 = sq.scalar_part();
    let scale = b2.max_abs();

    if lam2.norm() <= tol.threshold(scale * scale) {
        // null branch: e^b = 1 + b; R = -1 + b has no principal logarithm
        if s0.re < 0.0 {
            return Err(GaError::AxisUndefined);
        }
        return Ok(SimpleBivector::new_unchecked(b2, Complex64::ZERO));
    }

    if Tolerance::default().near_zero(lam2.im, lam2.norm())
        && Tolerance::default().near_zero(s0.im, s0.norm())
    {
        let unit = b2.normalize(tol)?;
        if lam2.re > 0.0 {
            // boost; negative scalar parts have no principal logarithm here
            if s0.re < 1.0 {
                return Err(GaError::AxisUndefined);
            }
            let phi = s0.re.acosh();
            return Ok(SimpleBivector::new_unchecked(
                &unit * phi,
                Complex64::new(phi * phi, 0.0),
            ));
        }
        // rotation: angle in [0, pi], orientation carried by the unit blade
        let theta = s0.re.clamp(-1.0, 1.0).acos();
        return Ok(SimpleBivector::new_unchecked(
            &unit * theta,
            Complex64::new(-theta * theta, 0.0),
        ));
    }

    // complex square: m with cosh(m) = <R>_0 and sinh(m) = sqrt(lam2)
    let u = lam2.sqrt();
    let bhat = &b2 * (Complex64::ONE / u);
    let mut m = s0.acosh();
    if (m.sinh() - u).norm() > (m.sinh() + u).norm() {
        m = -m;
    }
    Ok(SimpleBivector::new_unchecked(&bhat * m, m * m))
}

/// R^t = exp(t Ln R), through the full principal logarithm.
pub fn rotor_power(r: &Rotor, t: f64, tol: Tolerance) -> Result<Rotor> {
    let log = crate::factorization::log_rotor(r, tol)?;
    exp_bivector(&(&log * t), tol)
}

/// Product of exponentials exp(theta_i b_i); order independent when the
/// blades commute (the gauge group of a decomposition).
pub fn gauge_rotor(blades: &[SimpleBivector], thetas: &[f64]) -> Result<Rotor> {
    if blades.len() != thetas.len() {
        return Err(GaError::InvalidArgument(
            "one angle per blade is required".into(),
        ));
    }
    let first = blades
        .first()
        .ok_or_else(|| GaError::InvalidArgument("at least one blade is required".into()))?;
    let mut acc = Multivector::scalar(first.value().algebra(), 1.0);
    for (blade, &theta) in blades.iter().zip(thetas) {
        acc = acc.gp(exp_simple(&blade.scaled(theta)).value())?;
    }
    Ok(Rotor::new_unchecked(acc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Algebra;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn sinhc_values() {
        assert_eq!(sinhc(Complex64::ZERO), Complex64::ONE);
        // sinhc(i pi) = sin(pi)/pi = 0
        assert!(sinhc(c(0.0, std::f64::consts::PI)).norm() < 1e-15);
        assert!((sinhc(Complex64::ONE) - c(1.1752011936438014, 0.0)).norm() < 1e-15);
        // continuity across the series switchover
        let z = c(1e-8, 1e-9);
        assert!((sinhc(z) - z.sinh() / z).norm() < 1e-15);
    }

    #[test]
    fn co_si_euler_case() {
        let alg = Algebra::new(2, 0, 0).unwrap();
        let theta = 0.83f64;
        let b = SimpleBivector::new(
            &Multivector::blade(&alg, "e12").unwrap() * theta,
            tol(),
        )
        .unwrap();
        assert!((co(&b) - c(theta.cos(), 0.0)).norm() < 1e-15);
        let want = &Multivector::blade(&alg, "e12").unwrap() * theta.sin();
        assert!(si(&b).max_abs_diff(&want) < 1e-15);
    }

    #[test]
    fn co_si_null_case() {
        let alg = Algebra::new(3, 0, 1).unwrap();
        let b = SimpleBivector::new(Multivector::blade(&alg, "e01").unwrap(), tol()).unwrap();
        assert_eq!(co(&b), Complex64::ONE);
        assert!(si(&b).max_abs_diff(b.value()) < 1e-15);
    }

    #[test]
    fn co_si_hyperbolic_case() {
        let alg = Algebra::new(1, 3, 0).unwrap();
        let phi = 0.62f64;
        let b = SimpleBivector::new(
            &Multivector::blade(&alg, "e14").unwrap() * phi,
            tol(),
        )
        .unwrap();
        assert!((co(&b) - c(phi.cosh(), 0.0)).norm() < 1e-15);
        let want = &Multivector::blade(&alg, "e14").unwrap() * phi.sinh();
        assert!(si(&b).max_abs_diff(&want) < 1e-15);
    }

    #[test]
    fn exp_examples() {
        let pga = Algebra::new(3, 0, 1).unwrap();
        let zero = Multivector::zero(&pga);
        let one = Multivector::scalar(&pga, 1.0);
        assert!(exp_bivector(&zero, tol()).unwrap().value().max_abs_diff(&one) < 1e-15);

        // translation: exp(e01) = 1 + e01
        let e01 = Multivector::blade(&pga, "e01").unwrap();
        let r = exp_bivector(&e01, tol()).unwrap();
        assert!(r.value().max_abs_diff(&(&one + &e01)) < 1e-14);

        // quarter turn: exp(pi/2 e12) = e12
        let e12 = Multivector::blade(&pga, "e12").unwrap();
        let r = exp_bivector(&(&e12 * std::f64::consts::FRAC_PI_2), tol()).unwrap();
        assert!(r.value().max_abs_diff(&e12) < 1e-15);
    }

    #[test]
    fn exp_commuting_blocks() {
        let alg = Algebra::new(4, 0, 0).unwrap();
        let (alpha, beta) = (0.4f64, 1.1f64);
        let b = &(&Multivector::blade(&alg, "e12").unwrap() * alpha)
            + &(&Multivector::blade(&alg, "e34").unwrap() * beta);
        let r = exp_bivector(&b, tol()).unwrap();
        let ra = exp_simple(
            &SimpleBivector::new(&Multivector::blade(&alg, "e12").unwrap() * alpha, tol()).unwrap(),
        );
        let rb = exp_simple(
            &SimpleBivector::new(&Multivector::blade(&alg, "e34").unwrap() * beta, tol()).unwrap(),
        );
        let want = ra.value().gp(rb.value()).unwrap();
        assert!(r.value().max_abs_diff(&want) < 1e-14);
        // spot check one coefficient: scalar = cos(alpha) cos(beta)
        assert!((r.value().scalar_part() - c(alpha.cos() * beta.cos(), 0.0)).norm() < 1e-14);
    }

    #[test]
    fn exp_matches_series() {
        let alg = Algebra::new(1, 3, 0).unwrap();
        let b = Multivector::from_terms(
            &alg,
            &[
                (0b0011, c(0.8, 0.0)),
                (0b0110, c(-0.5, 0.0)),
                (0b1100, c(0.3, 0.0)),
                (0b1010, c(0.1, 0.0)),
            ],
        );
        let closed = exp_bivector(&b, tol()).unwrap();
        let series = exp_series(&b, 1e-14);
        assert!(closed.value().max_abs_diff(&series) < 1e-12);
    }

    #[test]
    fn exp_degenerate_falls_back_to_series() {
        let alg = Algebra::new(4, 0, 0).unwrap();
        let b = &Multivector::blade(&alg, "e12").unwrap()
            + &Multivector::blade(&alg, "e34").unwrap();
        assert!(matches!(split(&b, tol()), Err(GaError::DegenerateRoots(_))));
        let r = exp_bivector(&b, tol()).unwrap();
        let series = exp_series(&b, 1e-14);
        assert!(r.value().max_abs_diff(&series) < 1e-13);
    }

    #[test]
    fn series_handles_large_norms() {
        let alg = Algebra::new(2, 0, 0).unwrap();
        let theta = 11.0f64; // forces scaling and squaring
        let b = &Multivector::blade(&alg, "e12").unwrap() * theta;
        let r = exp_series(&b, 1e-14);
        let want = &Multivector::scalar(&alg, theta.cos())
            + &(&Multivector::blade(&alg, "e12").unwrap() * theta.sin());
        assert!(r.max_abs_diff(&want) < 1e-12);
    }

    #[test]
    fn log_simple_branches() {
        let alg = Algebra::new(3, 0, 1).unwrap();
        // rotation branch with quadrant resolution
        for theta in [0.3, 1.2, 2.8, -2.0f64] {
            let b = &Multivector::blade(&alg, "e12").unwrap() * theta;
            let r = exp_bivector(&b, tol()).unwrap();
            let log = log_simple(&r, tol()).unwrap();
            assert!(log.value().max_abs_diff(&b) < 1e-12, "theta = {theta}");
        }
        // null branch
        let b = &Multivector::blade(&alg, "e01").unwrap() * 1.7;
        let r = exp_bivector(&b, tol()).unwrap();
        let log = log_simple(&r, tol()).unwrap();
        assert!(log.value().max_abs_diff(&b) < 1e-14);
        assert_eq!(log.lambda(), Complex64::ZERO);

        // hyperbolic branch
        let sta = Algebra::new(1, 3, 0).unwrap();
        let b = &Multivector::blade(&sta, "e14").unwrap() * 0.9;
        let r = exp_bivector(&b, tol()).unwrap();
        let log = log_simple(&r, tol()).unwrap();
        assert!(log.value().max_abs_diff(&b) < 1e-13);
    }

    #[test]
    fn log_of_minus_one_is_axis_undefined() {
        let alg = Algebra::new(2, 0, 0).unwrap();
        let minus_one = Rotor::new(Multivector::scalar(&alg, -1.0), tol()).unwrap();
        assert!(matches!(
            log_simple(&minus_one, tol()),
            Err(GaError::AxisUndefined)
        ));
    }

    #[test]
    fn rotor_power_endpoints() {
        let alg = Algebra::new(3, 0, 0).unwrap();
        let b = &Multivector::blade(&alg, "e12").unwrap() * 0.7;
        let r = exp_bivector(&b, tol()).unwrap();
        let one = rotor_power(&r, 0.0, tol()).unwrap();
        assert!(one
            .value()
            .max_abs_diff(&Multivector::scalar(&alg, 1.0))
            < 1e-14);
        let same = rotor_power(&r, 1.0, tol()).unwrap();
        assert!(same.value().max_abs_diff(r.value()) < 1e-12);
    }

    #[test]
    fn gauge_rotor_is_order_independent() {
        let alg = Algebra::new(4, 0, 0).unwrap();
        let b1 = SimpleBivector::new(Multivector::blade(&alg, "e12").unwrap(), tol()).unwrap();
        let b2 = SimpleBivector::new(Multivector::blade(&alg, "e34").unwrap(), tol()).unwrap();
        let a = gauge_rotor(&[b1.clone(), b2.clone()], &[0.4, 1.3]).unwrap();
        let b = gauge_rotor(&[b2, b1], &[1.3, 0.4]).unwrap();
        assert!(a.value().max_abs_diff(b.value()) < 1e-14);
    }

    #[test]
    fn simple_bivector_validation() {
        let alg = Algebra::new(4, 0, 0).unwrap();
        let not_simple = &Multivector::blade(&alg, "e12").unwrap()
            + &Multivector::blade(&alg, "e34").unwrap();
        assert_eq!(
            SimpleBivector::new(not_simple, tol()).err().unwrap(),
            GaError::NotSimple
        );
        let not_grade2 = Multivector::blade(&alg, "e1").unwrap();
        assert!(SimpleBivector::new(not_grade2, tol()).is_err());
    }

    #[test]
    fn rotor_validation() {
        let alg = Algebra::new(2, 0, 0).unwrap();
        let not_normalized = &Multivector::scalar(&alg, 2.0)
            + &Multivector::blade(&alg, "e12").unwrap();
        assert!(Rotor::new(not_normalized, tol()).is_err());
        let odd = Multivector::blade(&alg, "e1").unwrap();
        assert!(Rotor::new(odd, tol()).is_err());
    }
}
