//! Invariant decomposition of a bivector B into at most floor(n/2)
//! commuting orthogonal simple 2-blades b_i with eigenvalues
//! lambda_i = b_i^2.
//!
//! The lambda_i are the roots of the characteristic polynomial built from
//! the normalized wedge powers W_m = <B^m>_2m / m!, after which each blade
//! follows from a ratio of polynomials in the W_m, evaluated by solving a
//! 2^n linear system through the Clifford representation.

use num_complex::Complex64;

use crate::error::{GaError, Result};
use crate::matrix_rep::solve_gp;
use crate::multivector::Multivector;
use crate::poly;
use crate::tolerance::Tolerance;

/// Relative gap below which two eigenvalues count as degenerate; the split
/// formula is only proven for algebraic multiplicity one.
pub(crate) const DEGENERACY_REL: f64 = 1e-9;
/// Relative magnitude below which an eigenvalue is treated as exactly zero
/// for ordering purposes.
const ZERO_REL: f64 = 1e-12;

/// Normalized wedge powers W_m = (1/m!) <B^m>_2m for m = 0..=floor(n/2).
#[derive(Debug, Clone)]
pub struct WedgePowers {
    powers: Vec<Multivector>,
}

impl WedgePowers {
    /// W_m; index 0 is the scalar 1 and index 1 is B itself.
    pub fn power(&self, m: usize) -> &Multivector {
        &self.powers[m]
    }

    pub fn powers(&self) -> &[Multivector] {
        &self.powers
    }

    /// Largest m with W_m above tolerance: the number of blades in the
    /// decomposition, counting null blades.
    pub fn effective_k(&self, tol: Tolerance) -> usize {
        let scale = self.powers[1].max_abs();
        (1..self.powers.len())
            .rev()
            .find(|&m| !tol.near_zero(self.powers[m].max_abs(), scale.powi(m as i32)))
            .unwrap_or(0)
    }
}

/// Compute the wedge powers of a bivector by iterated wedge with 1/m!
/// normalization.
pub fn wedge_powers(b: &Multivector, tol: Tolerance) -> Result<WedgePowers> {
    if !b.is_grade(2, tol) {
        return Err(GaError::NotAGrade { expected: 2 });
    }
    let k = b.algebra().dim() / 2;
    let mut powers = Vec::with_capacity(k + 1);
    powers.push(Multivector::scalar(b.algebra(), 1.0));
    for m in 1..=k {
        let next = &powers[m - 1].outer(b)? * (1.0 / m as f64);
        powers.push(next);
    }
    Ok(WedgePowers { powers })
}

/// Monic characteristic polynomial (ascending coefficients, degree k):
/// sum_m (-1)^m <W_m^2>_0 lambda^(k-m), whose roots are the lambda_i.
pub fn lambda_polynomial(b: &Multivector, tol: Tolerance) -> Result<Vec<Complex64>> {
    let wp = wedge_powers(b, tol)?;
    Ok(characteristic_coeffs(wp.powers(), wp.powers.len() - 1)?)
}

/// Shared with the tangent decomposition, which feeds rotor grades in
/// place of wedge powers.
pub(crate) fn characteristic_coeffs(ws: &[Multivector], k: usize) -> Result<Vec<Complex64>> {
    let mut coeffs = vec![Complex64::ZERO; k + 1];
    for (m, w) in ws.iter().take(k + 1).enumerate() {
        let sq = w.gp(w)?.scalar_part();
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        coeffs[k - m] = sq * sign;
    }
    Ok(coeffs)
}

/// All roots of the characteristic polynomial, ordered by descending real
/// part, then descending imaginary part, with near-zero roots last.
pub fn solve_lambdas(coeffs: &[Complex64], _tol: Tolerance) -> Result<Vec<Complex64>> {
    let mut roots = poly::roots(coeffs)?;
    sort_lambdas(&mut roots);
    Ok(roots)
}

pub(crate) fn sort_lambdas(roots: &mut [Complex64]) {
    let scale = 1.0 + roots.iter().map(|l| l.norm()).fold(0.0, f64::max);
    let is_zero = |l: &Complex64| l.norm() <= ZERO_REL * scale;
    roots.sort_by(|a, b| {
        is_zero(a)
            .cmp(&is_zero(b))
            .then(b.re.total_cmp(&a.re))
            .then(b.im.total_cmp(&a.im))
    });
}

/// Sort key used for factorizations: descending |lambda|.
pub(crate) fn sort_by_magnitude(roots: &mut [Complex64]) {
    roots.sort_by(|a, b| {
        b.norm()
            .total_cmp(&a.norm())
            .then(b.re.total_cmp(&a.re))
            .then(b.im.total_cmp(&a.im))
    });
}

pub(crate) fn check_distinct(lambdas: &[Complex64]) -> Result<()> {
    let scale = 1.0 + lambdas.iter().map(|l| l.norm()).fold(0.0, f64::max);
    for i in 0..lambdas.len() {
        for j in (i + 1)..lambdas.len() {
            if (lambdas[i] - lambdas[j]).norm() < DEGENERACY_REL * scale {
                return Err(GaError::DegenerateRoots(format!(
                    "lambda_{i} and lambda_{j} coincide within tolerance"
                )));
            }
        }
    }
    Ok(())
}

/// Result of the invariant decomposition: commuting orthogonal simple
/// blades summing to the input, with their scalar squares.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub blades: Vec<Multivector>,
    pub lambdas: Vec<Complex64>,
}

impl Decomposition {
    pub fn len(&self) -> usize {
        self.blades.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blades.is_empty()
    }

    pub fn sum(&self) -> Option<Multivector> {
        let mut iter = self.blades.iter();
        let first = iter.next()?.clone();
        Some(iter.fold(first, |acc, b| &acc + b))
    }
}

/// Numerator/denominator of the ratio formula for the blade belonging to
/// `lambda`, from the list `ws` with `k` terms. Even k pairs even wedge
/// powers over odd ones, odd k the reverse; both agree in the limit
/// lambda -> 0, which yields W_k / W_(k-1).
pub(crate) fn ratio_parts(
    ws: &[Multivector],
    k: usize,
    lambda: Complex64,
) -> (Multivector, Multivector) {
    let r = k / 2;
    let algebra = ws[0].algebra();
    let mut num = Multivector::zero(algebra);
    let mut den = Multivector::zero(algebra);
    if k % 2 == 0 {
        for j in 0..=r {
            num = &num + &(&ws[2 * j] * lambda.powu((r - j) as u32));
        }
        for j in 0..r {
            den = &den + &(&ws[2 * j + 1] * lambda.powu((r - 1 - j) as u32));
        }
    } else {
        for j in 0..=r {
            num = &num + &(&ws[2 * j + 1] * lambda.powu((r - j) as u32));
        }
        for j in 0..=r {
            den = &den + &(&ws[2 * j] * lambda.powu((r - j) as u32));
        }
    }
    (num, den)
}

/// Invariant decomposition of a bivector into commuting simple 2-blades.
///
/// Degenerate eigenvalues are detected and reported, not resolved; the
/// caller falls back to a series exponential in that case.
pub fn split(b: &Multivector, tol: Tolerance) -> Result<Decomposition> {
    let wp = wedge_powers(b, tol)?;
    split_from_powers(b, &wp, tol)
}

fn split_from_powers(b: &Multivector, wp: &WedgePowers, tol: Tolerance) -> Result<Decomposition> {
    if b.is_zero(tol) {
        return Ok(Decomposition {
            blades: Vec::new(),
            lambdas: Vec::new(),
        });
    }
    let k = wp.effective_k(tol);
    if k <= 1 {
        // B wedge B vanishes, so B is already simple.
        let lambda = b.gp(b)?.scalar_part();
        return Ok(Decomposition {
            blades: vec![b.clone()],
            lambdas: vec![lambda],
        });
    }
    let coeffs = characteristic_coeffs(wp.powers(), k)?;
    let mut lambdas = poly::roots(&coeffs)?;
    check_distinct(&lambdas)?;
    sort_lambdas(&mut lambdas);

    let mut blades = Vec::with_capacity(k);
    for &lambda in &lambdas {
        let (num, den) = ratio_parts(wp.powers(), k, lambda);
        blades.push(solve_gp(&den, &num, tol)?);
    }
    let dec = Decomposition { blades, lambdas };
    validate_split(b, &dec)?;
    Ok(dec)
}

/// Postconditions of the decomposition; violations signal an
/// ill-conditioned (near-degenerate) split.
fn validate_split(b: &Multivector, dec: &Decomposition) -> Result<()> {
    let scale = 1.0 + b.max_abs();
    let sum = dec.sum().expect("split produced at least one blade");
    if sum.max_abs_diff(b) > 1e-10 * scale {
        return Err(GaError::DegenerateRoots(
            "blades fail to reconstruct the input within tolerance".into(),
        ));
    }
    for (i, blade) in dec.blades.iter().enumerate() {
        let sq = blade.gp(blade)?;
        let bscale = 1.0 + blade.max_abs() * blade.max_abs();
        if sq.off_grade_max(0) > 1e-9 * bscale
            || (sq.scalar_part() - dec.lambdas[i]).norm() > 1e-8 * (1.0 + dec.lambdas[i].norm())
        {
            return Err(GaError::DegenerateRoots(format!(
                "blade {i} is not simple within tolerance"
            )));
        }
        for other in dec.blades.iter().skip(i + 1) {
            let comm = blade.commutator(other)?;
            if comm.max_abs() > 1e-9 * (1.0 + blade.max_abs() * other.max_abs()) {
                return Err(GaError::DegenerateRoots(format!(
                    "blade {i} does not commute within tolerance"
                )));
            }
        }
    }
    Ok(())
}

/// Closed-form quadratic special case for n < 6:
/// lambda = (B.B +- sqrt((B.B)^2 - (B^B)^2)) / 2 and
/// b_i = (lambda_i + (B^B)/2) / B.
pub fn split_k2(b: &Multivector, tol: Tolerance) -> Result<Decomposition> {
    let n = b.algebra().dim();
    if n >= 6 {
        return Err(GaError::InvalidArgument(
            "split_k2 requires an algebra of dimension below 6".into(),
        ));
    }
    if !b.is_grade(2, tol) {
        return Err(GaError::NotAGrade { expected: 2 });
    }
    if b.is_zero(tol) {
        return Ok(Decomposition {
            blades: Vec::new(),
            lambdas: Vec::new(),
        });
    }
    let scale = b.max_abs();
    let wedge = b.outer(b)?;
    if tol.near_zero(wedge.max_abs(), scale * scale) {
        let lambda = b.gp(b)?.scalar_part();
        return Ok(Decomposition {
            blades: vec![b.clone()],
            lambdas: vec![lambda],
        });
    }
    let b_dot_b = b.gp(b)?.scalar_part();
    let wedge_sq = wedge.gp(&wedge)?.scalar_part();
    let disc = b_dot_b * b_dot_b - wedge_sq;
    let root = disc.sqrt();
    let mut lambdas = vec![(b_dot_b + root) * 0.5, (b_dot_b - root) * 0.5];
    check_distinct(&lambdas)?;
    sort_lambdas(&mut lambdas);

    let half_wedge = &wedge * 0.5;
    let mut blades = Vec::with_capacity(2);
    for &lambda in &lambdas {
        let num = &Multivector::scalar(b.algebra(), lambda) + &half_wedge;
        blades.push(solve_gp(b, &num, tol)?);
    }
    let dec = Decomposition { blades, lambdas };
    validate_split(b, &dec)?;
    Ok(dec)
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

    /// The R(2,2) bivector due to M. Riesz.
    fn riesz_bivector() -> Multivector {
        let alg = Algebra::new(2, 2, 0).unwrap();
        let terms = [("e12", 0.5), ("e14", 0.5), ("e23", -0.5), ("e34", -0.5)];
        let mut b = Multivector::zero(&alg);
        for (name, w) in terms {
            b = &b + &(&Multivector::blade(&alg, name).unwrap() * w);
        }
        b
    }

    #[test]
    fn wedge_power_basics() {
        let alg = Algebra::new(4, 0, 0).unwrap();
        // simple blade: W_2 = 0
        let e12 = Multivector::blade(&alg, "e12").unwrap();
        let wp = wedge_powers(&e12, tol()).unwrap();
        assert!(wp.power(2).is_zero(tol()));
        assert_eq!(wp.effective_k(tol()), 1);
        // disjoint blades: W_2 = e1234
        let b = &e12 + &Multivector::blade(&alg, "e34").unwrap();
        let wp = wedge_powers(&b, tol()).unwrap();
        let e1234 = Multivector::blade(&alg, "e1234").unwrap();
        assert!(wp.power(2).max_abs_diff(&e1234) < 1e-15);
        assert_eq!(wp.effective_k(tol()), 2);
    }

    #[test]
    fn wedge_powers_reject_non_bivectors() {
        let alg = Algebra::new(3, 0, 0).unwrap();
        let v = Multivector::blade(&alg, "e1").unwrap();
        assert_eq!(
            wedge_powers(&v, tol()).err().unwrap(),
            GaError::NotAGrade { expected: 2 }
        );
    }

    #[test]
    fn riesz_wedge_square() {
        // B^2 = B^B = -e1234 here, so W_2 = -(1/2) e1234.
        let b = riesz_bivector();
        let alg = b.algebra().clone();
        let wp = wedge_powers(&b, tol()).unwrap();
        let expected = &Multivector::blade(&alg, "e1234").unwrap() * -0.5;
        assert!(wp.power(2).max_abs_diff(&expected) < 1e-15);
        let sq = b.gp(&b).unwrap();
        assert!(sq.max_abs_diff(&(&wp.power(2).clone() * 2.0)) < 1e-15);
    }

    #[test]
    fn lambda_polynomial_k2_shape() {
        let alg = Algebra::new(4, 0, 0).unwrap();
        let b = &(&Multivector::blade(&alg, "e12").unwrap() * 1.0)
            + &(&Multivector::blade(&alg, "e34").unwrap() * 2.0);
        // lambda^2 - (B.B) lambda + (B^B)^2/4 with B.B = -5, (B^B)^2/4 = 4
        let coeffs = lambda_polynomial(&b, tol()).unwrap();
        assert_eq!(coeffs.len(), 3);
        assert!((coeffs[2] - c(1.0, 0.0)).norm() < 1e-15);
        assert!((coeffs[1] - c(5.0, 0.0)).norm() < 1e-15);
        assert!((coeffs[0] - c(4.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn lambda_polynomial_k3_shape() {
        let alg = Algebra::new(6, 0, 0).unwrap();
        let b = Multivector::from_terms(
            &alg,
            &[
                (0b000011, c(1.0, 0.0)),
                (0b001100, c(2.0, 0.0)),
                (0b110000, c(3.0, 0.0)),
            ],
        );
        let coeffs = lambda_polynomial(&b, tol()).unwrap();
        // roots must be -1, -4, -9
        let mut roots = solve_lambdas(&coeffs, tol()).unwrap();
        roots.sort_by(|a, b| a.re.total_cmp(&b.re));
        for (root, want) in roots.iter().zip([-9.0, -4.0, -1.0]) {
            assert!((root - c(want, 0.0)).norm() < 1e-10);
        }
    }

    #[test]
    fn simple_bivector_polynomial() {
        let alg = Algebra::new(2, 0, 0).unwrap();
        let b = Multivector::blade(&alg, "e12").unwrap();
        let coeffs = lambda_polynomial(&b, tol()).unwrap();
        // lambda - B^2 with B^2 = -1
        assert_eq!(coeffs.len(), 2);
        let roots = solve_lambdas(&coeffs, tol()).unwrap();
        assert!((roots[0] - c(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn solve_lambdas_ordering() {
        // factored (lambda+1)(lambda+4)
        let r = solve_lambdas(&[c(4.0, 0.0), c(5.0, 0.0), c(1.0, 0.0)], tol()).unwrap();
        assert!((r[0] - c(-1.0, 0.0)).norm() < 1e-14);
        assert!((r[1] - c(-4.0, 0.0)).norm() < 1e-14);
        // lambda(lambda - B.B) with B.B < 0: the zero root sorts last
        let r = solve_lambdas(&[c(0.0, 0.0), c(2.5, 0.0), c(1.0, 0.0)], tol()).unwrap();
        assert!((r[0] - c(-2.5, 0.0)).norm() < 1e-14);
        assert_eq!(r[1], Complex64::ZERO);
        // Riesz quadratic lambda^2 + 1/4: +i/2 sorts first
        let r = solve_lambdas(&[c(0.25, 0.0), c(0.0, 0.0), c(1.0, 0.0)], tol()).unwrap();
        assert!((r[0] - c(0.0, 0.5)).norm() < 1e-15);
        assert!((r[1] - c(0.0, -0.5)).norm() < 1e-15);
    }

    #[test]
    fn split_disjoint_blades() {
        let alg = Algebra::new(4, 0, 0).unwrap();
        let e12 = Multivector::blade(&alg, "e12").unwrap();
        let e34 = Multivector::blade(&alg, "e34").unwrap();
        let b = &e12 + &(&e34 * 2.0);
        let dec = split(&b, tol()).unwrap();
        assert_eq!(dec.len(), 2);
        // descending real part: -1 before -4
        assert!((dec.lambdas[0] - c(-1.0, 0.0)).norm() < 1e-12);
        assert!((dec.lambdas[1] - c(-4.0, 0.0)).norm() < 1e-12);
        assert!(dec.blades[0].max_abs_diff(&e12) < 1e-12);
        assert!(dec.blades[1].max_abs_diff(&(&e34 * 2.0)) < 1e-12);
    }

    #[test]
    fn split_riesz_matches_printed_blades() {
        let b = riesz_bivector();
        let dec = split(&b, tol()).unwrap();
        assert_eq!(dec.len(), 2);
        assert!((dec.lambdas[0] - c(0.0, 0.5)).norm() < 1e-12);
        assert!((dec.lambdas[1] - c(0.0, -0.5)).norm() < 1e-12);
        for (blade, lambda) in dec.blades.iter().zip(&dec.lambdas) {
            let sq = blade.gp(blade).unwrap();
            assert!(sq.off_grade_max(0) < 1e-12);
            assert!((sq.scalar_part() - lambda).norm() < 1e-12);
        }
        let sum = dec.sum().unwrap();
        assert!(sum.max_abs_diff(&b) < 1e-12);
    }

    #[test]
    fn split_pga_screw() {
        // generic bivector in R(3,0,1): lambda_2 = 0 and b_2 = (B^B)/(2B)
        let alg = Algebra::new(3, 0, 1).unwrap();
        let b = Multivector::from_terms(
            &alg,
            &[
                (0b0110, c(0.7, 0.0)),  // e12
                (0b1010, c(-0.2, 0.0)), // e13
                (0b0011, c(0.4, 0.0)),  // e01
                (0b1001, c(0.9, 0.0)),  // e03
            ],
        );
        let dec = split(&b, tol()).unwrap();
        assert_eq!(dec.len(), 2);
        assert!(dec.lambdas[1].norm() < 1e-12);
        assert!(dec.lambdas[0].re < 0.0);
        let wedge = b.outer(&b).unwrap();
        let b2 = solve_gp(&(&b * 2.0), &wedge, tol()).unwrap();
        assert!(dec.blades[1].max_abs_diff(&b2) < 1e-10);
    }

    #[test]
    fn split_k2_agrees_with_split() {
        let alg = Algebra::new(1, 3, 0).unwrap();
        let b = Multivector::from_terms(
            &alg,
            &[
                (0b0011, c(0.8, 0.0)),
                (0b0110, c(-0.3, 0.0)),
                (0b1100, c(0.5, 0.0)),
                (0b1001, c(0.2, 0.0)),
            ],
        );
        let a = split(&b, tol()).unwrap();
        let q = split_k2(&b, tol()).unwrap();
        assert_eq!(a.len(), q.len());
        for i in 0..a.len() {
            assert!((a.lambdas[i] - q.lambdas[i]).norm() < 1e-10);
            assert!(a.blades[i].max_abs_diff(&q.blades[i]) < 1e-9);
        }
    }

    #[test]
    fn split_k2_simple_null_wedge() {
        // B = e12 + e13 in R(3): B^B = 0, single blade with lambda = -2
        let alg = Algebra::new(3, 0, 0).unwrap();
        let b = &Multivector::blade(&alg, "e12").unwrap()
            + &Multivector::blade(&alg, "e13").unwrap();
        let dec = split_k2(&b, tol()).unwrap();
        assert_eq!(dec.len(), 1);
        assert!((dec.lambdas[0] - c(-2.0, 0.0)).norm() < 1e-14);
        assert!(dec.blades[0].max_abs_diff(&b) < 1e-14);
    }

    #[test]
    fn split_k2_dimension_guard() {
        let alg = Algebra::new(6, 0, 0).unwrap();
        let b = Multivector::blade(&alg, "e12").unwrap();
        assert!(matches!(
            split_k2(&b, tol()),
            Err(GaError::InvalidArgument(_))
        ));
    }

    #[test]
    fn degenerate_roots_are_reported() {
        let alg = Algebra::new(4, 0, 0).unwrap();
        let b = &Multivector::blade(&alg, "e12").unwrap()
            + &Multivector::blade(&alg, "e34").unwrap();
        assert!(matches!(
            split(&b, tol()),
            Err(GaError::DegenerateRoots(_))
        ));
        assert!(matches!(
            split_k2(&b, tol()),
            Err(GaError::DegenerateRoots(_))
        ));
    }

    #[test]
    fn zero_bivector_splits_empty() {
        let alg = Algebra::new(4, 0, 0).unwrap();
        let dec = split(&Multivector::zero(&alg), tol()).unwrap();
        assert!(dec.is_empty());
    }

    #[test]
    fn sta_signs_are_opposite() {
        let alg = Algebra::new(1, 3, 0).unwrap();
        let b = Multivector::from_terms(
            &alg,
            &[
                (0b0011, c(0.9, 0.0)),  // boost plane e12
                (0b1100, c(0.6, 0.0)),  // rotation plane e34
                (0b0101, c(-0.4, 0.0)), // e13
            ],
        );
        let dec = split(&b, tol()).unwrap();
        assert_eq!(dec.len(), 2);
        assert!(dec.lambdas[0].re > 0.0);
        assert!(dec.lambdas[1].re < 0.0);
        assert!(dec.lambdas[0].im.abs() < 1e-12);
        assert!(dec.lambdas[1].im.abs() < 1e-12);
    }
}
