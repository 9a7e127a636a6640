use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_complex::Complex64;

use crate::algebra::{grade_of, Algebra};
use crate::error::{GaError, Result};
use crate::tolerance::Tolerance;

/// Dense multivector over complex coefficients, indexed by blade bitmask.
///
/// Coefficients are complex throughout: the invariant decomposition of a
/// real bivector can produce complex simple blades, so a real-only carrier
/// would make several operations partial.
#[derive(Debug, Clone, PartialEq)]
pub struct Multivector {
    algebra: Arc<Algebra>,
    coeffs: Vec<Complex64>,
}

impl Multivector {
    pub fn zero(algebra: &Arc<Algebra>) -> Self {
        Multivector {
            algebra: algebra.clone(),
            coeffs: vec![Complex64::ZERO; algebra.blade_count()],
        }
    }

    pub fn scalar(algebra: &Arc<Algebra>, value: impl Into<Complex64>) -> Self {
        let mut mv = Self::zero(algebra);
        mv.coeffs[0] = value.into();
        mv
    }

    /// The basis blade for `mask` with coefficient 1.
    pub fn basis_blade(algebra: &Arc<Algebra>, mask: usize) -> Self {
        let mut mv = Self::zero(algebra);
        mv.coeffs[mask] = Complex64::ONE;
        mv
    }

    /// Generator `gen` (internal 0-based index).
    pub fn generator(algebra: &Arc<Algebra>, gen: usize) -> Self {
        Self::basis_blade(algebra, 1 << gen)
    }

    /// Blade by written name, e.g. `"e21"` yields `-e12`.
    pub fn blade(algebra: &Arc<Algebra>, name: &str) -> Result<Self> {
        let (mask, sign) = algebra.parse_blade_name(name)?;
        let mut mv = Self::zero(algebra);
        mv.coeffs[mask] = Complex64::new(sign, 0.0);
        Ok(mv)
    }

    pub fn from_terms(algebra: &Arc<Algebra>, terms: &[(usize, Complex64)]) -> Self {
        let mut mv = Self::zero(algebra);
        for &(mask, c) in terms {
            mv.coeffs[mask] += c;
        }
        mv
    }

    pub fn from_coeffs(algebra: &Arc<Algebra>, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != algebra.blade_count() {
            return Err(GaError::InvalidArgument(format!(
                "expected {} coefficients, got {}",
                algebra.blade_count(),
                coeffs.len()
            )));
        }
        Ok(Multivector {
            algebra: algebra.clone(),
            coeffs,
        })
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, mask: usize) -> Complex64 {
        self.coeffs[mask]
    }

    pub fn with_coeff(mut self, mask: usize, value: impl Into<Complex64>) -> Self {
        self.coeffs[mask] = value.into();
        self
    }

    pub fn scalar_part(&self) -> Complex64 {
        self.coeffs[0]
    }

    pub fn pseudoscalar_part(&self) -> Complex64 {
        self.coeffs[self.algebra.pseudoscalar_mask()]
    }

    fn same_algebra(&self, other: &Multivector) -> Result<()> {
        if Arc::ptr_eq(&self.algebra, &other.algebra) || self.algebra == other.algebra {
            Ok(())
        } else {
            Err(GaError::AlgebraMismatch)
        }
    }

    /// Geometric product.
    pub fn gp(&self, rhs: &Multivector) -> Result<Multivector> {
        self.same_algebra(rhs)?;
        let mut out = Self::zero(&self.algebra);
        for (a, &ca) in self.coeffs.iter().enumerate() {
            if ca == Complex64::ZERO {
                continue;
            }
            for (b, &cb) in rhs.coeffs.iter().enumerate() {
                if cb == Complex64::ZERO {
                    continue;
                }
                let (sign, mask) = self.algebra.blade_product(a, b);
                if sign != 0.0 {
                    out.coeffs[mask] += ca * cb * sign;
                }
            }
        }
        Ok(out)
    }

    /// Outer (wedge) product: the grade k+l part of the product of a
    /// k-vector and an l-vector, extended bilinearly.
    pub fn outer(&self, rhs: &Multivector) -> Result<Multivector> {
        self.same_algebra(rhs)?;
        let mut out = Self::zero(&self.algebra);
        for (a, &ca) in self.coeffs.iter().enumerate() {
            if ca == Complex64::ZERO {
                continue;
            }
            for (b, &cb) in rhs.coeffs.iter().enumerate() {
                if cb == Complex64::ZERO || a & b != 0 {
                    continue;
                }
                // Disjoint blades: no metric factors, only the reorder sign.
                let (sign, mask) = self.algebra.blade_product(a, b);
                out.coeffs[mask] += ca * cb * sign;
            }
        }
        Ok(out)
    }

    /// Inner (dot) product: the grade |k-l| part of the product of a
    /// k-vector and an l-vector, extended bilinearly.
    pub fn inner(&self, rhs: &Multivector) -> Result<Multivector> {
        self.same_algebra(rhs)?;
        let mut out = Self::zero(&self.algebra);
        for (a, &ca) in self.coeffs.iter().enumerate() {
            if ca == Complex64::ZERO {
                continue;
            }
            for (b, &cb) in rhs.coeffs.iter().enumerate() {
                if cb == Complex64::ZERO {
                    continue;
                }
                let (sign, mask) = self.algebra.blade_product(a, b);
                if sign != 0.0 && grade_of(mask) == grade_of(a).abs_diff(grade_of(b)) {
                    out.coeffs[mask] += ca * cb * sign;
                }
            }
        }
        Ok(out)
    }

    /// Commutator product, (xy - yx)/2.
    pub fn commutator(&self, rhs: &Multivector) -> Result<Multivector> {
        let ab = self.gp(rhs)?;
        let ba = rhs.gp(self)?;
        Ok(&(&ab - &ba) * 0.5)
    }

    /// Grade-k part. Grades above the dimension are zero.
    pub fn grade_select(&self, k: usize) -> Multivector {
        let mut out = Self::zero(&self.algebra);
        for (mask, &c) in self.coeffs.iter().enumerate() {
            if grade_of(mask) == k {
                out.coeffs[mask] = c;
            }
        }
        out
    }

    /// Keep only even grades.
    pub fn even_part(&self) -> Multivector {
        self.filter(|k| k % 2 == 0)
    }

    /// Keep only odd grades.
    pub fn odd_part(&self) -> Multivector {
        self.filter(|k| k % 2 == 1)
    }

    fn filter(&self, keep: impl Fn(usize) -> bool) -> Multivector {
        let mut out = Self::zero(&self.algebra);
        for (mask, &c) in self.coeffs.iter().enumerate() {
            if keep(grade_of(mask)) {
                out.coeffs[mask] = c;
            }
        }
        out
    }

    fn graded_signs(&self, sign: impl Fn(usize) -> f64) -> Multivector {
        let mut out = self.clone();
        for (mask, c) in out.coeffs.iter_mut().enumerate() {
            *c *= sign(grade_of(mask));
        }
        out
    }

    /// Reverse: flips the sign of grades 2, 3 (mod 4).
    pub fn reverse(&self) -> Multivector {
        self.graded_signs(|k| if k % 4 >= 2 { -1.0 } else { 1.0 })
    }

    /// Main involution e_i -> -e_i: flips odd grades.
    pub fn involute(&self) -> Multivector {
        self.graded_signs(|k| if k % 2 == 1 { -1.0 } else { 1.0 })
    }

    /// Clifford conjugation: reverse composed with the main involution.
    pub fn conjugate(&self) -> Multivector {
        self.graded_signs(|k| if (k + 3) % 4 < 2 { -1.0 } else { 1.0 })
    }

    /// Squared norm, the grade-0 part of x * reverse(x).
    pub fn norm_squared(&self) -> Complex64 {
        // Only the grade-0 target contributes, so accumulate it directly.
        let mut acc = Complex64::ZERO;
        let rev = self.reverse();
        for (a, &ca) in self.coeffs.iter().enumerate() {
            if ca == Complex64::ZERO {
                continue;
            }
            let cb = rev.coeffs[a];
            if cb == Complex64::ZERO {
                continue;
            }
            let (sign, mask) = self.algebra.blade_product(a, a);
            debug_assert_eq!(mask, 0);
            acc += ca * cb * sign;
        }
        acc
    }

    /// Norm of the element. For a real squared norm this matches the sign
    /// cases sqrt(x x~) / sqrt(-x x~); a genuinely complex squared norm maps
    /// through the principal square root.
    pub fn norm(&self) -> Complex64 {
        norm_from_square(self.norm_squared())
    }

    pub fn normalize(&self, tol: Tolerance) -> Result<Multivector> {
        let n = self.norm();
        if n.norm() <= tol.eps_abs {
            return Err(GaError::NullNorm);
        }
        Ok(self * (Complex64::ONE / n))
    }

    /// Largest coefficient magnitude.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Sum of coefficient magnitudes; an upper bound for the operator norm
    /// of left multiplication.
    pub fn l1_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).sum()
    }

    /// Largest coefficient difference against `other`.
    pub fn max_abs_diff(&self, other: &Multivector) -> f64 {
        assert_eq!(
            self.algebra, other.algebra,
            "max_abs_diff across algebras"
        );
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_zero(&self, tol: Tolerance) -> bool {
        tol.near_zero(self.max_abs(), 1.0)
    }

    /// True when every coefficient outside grade `k` is negligible
    /// relative to the element's own scale.
    pub fn is_grade(&self, k: usize, tol: Tolerance) -> bool {
        let scale = self.max_abs();
        self.coeffs
            .iter()
            .enumerate()
            .all(|(mask, c)| grade_of(mask) == k || tol.near_zero(c.norm(), scale))
    }

    /// True when every imaginary part is negligible.
    pub fn is_real(&self, tol: Tolerance) -> bool {
        let scale = self.max_abs();
        self.coeffs
            .iter()
            .all(|c| tol.near_zero(c.im, scale))
    }

    /// Grades carrying coefficients above tolerance.
    pub fn grades_present(&self, tol: Tolerance) -> Vec<usize> {
        let scale = self.max_abs();
        let n = self.algebra.dim();
        (0..=n)
            .filter(|&k| {
                self.coeffs.iter().enumerate().any(|(mask, c)| {
                    grade_of(mask) == k && !tol.near_zero(c.norm(), scale)
                })
            })
            .collect()
    }

    /// Off-grade residual: largest coefficient outside grade `k`.
    pub fn off_grade_max(&self, k: usize) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(mask, _)| grade_of(*mask) != k)
            .map(|(_, c)| c.norm())
            .fold(0.0, f64::max)
    }
}

/// Norm from a squared norm: the real branch keeps the value real by
/// flipping the sign of a negative real square; otherwise the principal
/// complex square root applies.
pub(crate) fn norm_from_square(sq: Complex64) -> Complex64 {
    let tol = Tolerance::default();
    if tol.near_zero(sq.im, sq.norm()) {
        if sq.re >= 0.0 {
            Complex64::new(sq.re.sqrt(), 0.0)
        } else {
            Complex64::new((-sq.re).sqrt(), 0.0)
        }
    } else {
        sq.sqrt()
    }
}

impl Add for &Multivector {
    type Output = Multivector;
    fn add(self, rhs: &Multivector) -> Multivector {
        assert_eq!(self.algebra, rhs.algebra, "algebra mismatch in +");
        let mut out = self.clone();
        for (c, r) in out.coeffs.iter_mut().zip(&rhs.coeffs) {
            *c += r;
        }
        out
    }
}

impl Sub for &Multivector {
    type Output = Multivector;
    fn sub(self, rhs: &Multivector) -> Multivector {
        assert_eq!(self.algebra, rhs.algebra, "algebra mismatch in -");
        let mut out = self.clone();
        for (c, r) in out.coeffs.iter_mut().zip(&rhs.coeffs) {
            *c -= r;
        }
        out
    }
}

impl Neg for &Multivector {
    type Output = Multivector;
    fn neg(self) -> Multivector {
        let mut out = self.clone();
        for c in out.coeffs.iter_mut() {
            *c = -*c;
        }
        out
    }
}

impl Mul<Complex64> for &Multivector {
    type Output = Multivector;
    fn mul(self, rhs: Complex64) -> Multivector {
        let mut out = self.clone();
        for c in out.coeffs.iter_mut() {
            *c *= rhs;
        }
        out
    }
}

impl Mul<f64> for &Multivector {
    type Output = Multivector;
    fn mul(self, rhs: f64) -> Multivector {
        self * Complex64::new(rhs, 0.0)
    }
}

impl fmt::Display for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (mask, c) in self.coeffs.iter().enumerate() {
            if *c == Complex64::ZERO {
                continue;
            }
            let name = self.algebra.blade_name(mask);
            let term = if c.im == 0.0 {
                if mask == 0 {
                    format!("{}", c.re)
                } else if c.re == 1.0 {
                    name
                } else if c.re == -1.0 {
                    format!("-{name}")
                } else {
                    format!("{}{}", c.re, name)
                }
            } else if mask == 0 {
                format!("({}{}{}i)", c.re, if c.im < 0.0 { "" } else { "+" }, c.im)
            } else {
                format!(
                    "({}{}{}i){}",
                    c.re,
                    if c.im < 0.0 { "" } else { "+" },
                    c.im,
                    name
                )
            };
            if first {
                write!(f, "{term}")?;
                first = false;
            } else {
                write!(f, " + {term}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}
