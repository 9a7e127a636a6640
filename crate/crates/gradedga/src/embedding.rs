//! Embeddings of geometric primitives as vectors, and the orientation
//! correct (twisted) group action by conjugation.

use std::sync::Arc;

use num_complex::Complex64;

use crate::algebra::Algebra;
use crate::error::{GaError, Result};
use crate::multivector::Multivector;
use crate::tolerance::Tolerance;

/// Reflection-count parity of a versor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

/// A product of invertible vectors, with the reflection parity tracked
/// explicitly so the +/-U ambiguity cannot corrupt the twist sign.
#[derive(Debug, Clone, PartialEq)]
pub struct Versor {
    value: Multivector,
    parity: Parity,
}

impl Versor {
    /// Wrap a multivector with a stated parity. The value must carry only
    /// grades of that parity and U * reverse(U) must be a nonzero scalar.
    pub fn new(value: Multivector, parity: Parity, tol: Tolerance) -> Result<Self> {
        let off = match parity {
            Parity::Even => value.odd_part().max_abs(),
            Parity::Odd => value.even_part().max_abs(),
        };
        if !tol.near_zero(off, value.max_abs()) {
            return Err(GaError::NotAVersor(
                "grades do not match the stated parity".into(),
            ));
        }
        let sq = value.gp(&value.reverse())?;
        let scale = value.max_abs();
        if !sq.off_grade_max(0).max(0.0).is_finite()
            || !tol.near_zero(sq.off_grade_max(0), scale * scale)
        {
            return Err(GaError::NotAVersor(
                "U * reverse(U) is not a scalar".into(),
            ));
        }
        if sq.scalar_part().norm() <= tol.threshold(scale * scale) {
            return Err(GaError::NonInvertible);
        }
        Ok(Versor { value, parity })
    }

    /// Infer the parity from the grades present; mixed parity is rejected.
    pub fn from_multivector(value: Multivector, tol: Tolerance) -> Result<Self> {
        let even = value.even_part().max_abs();
        let odd = value.odd_part().max_abs();
        let scale = value.max_abs();
        let parity = if tol.near_zero(odd, scale) {
            Parity::Even
        } else if tol.near_zero(even, scale) {
            Parity::Odd
        } else {
            return Err(GaError::NotAVersor("mixed even and odd grades".into()));
        };
        Self::new(value, parity, tol)
    }

    /// Product of grade-1 vectors; the parity is the vector count mod 2.
    pub fn from_vectors(vectors: &[Multivector], tol: Tolerance) -> Result<Self> {
        let first = vectors
            .first()
            .ok_or_else(|| GaError::InvalidArgument("empty vector list".into()))?;
        let mut value = Multivector::scalar(first.algebra(), 1.0);
        for v in vectors {
            if !v.is_grade(1, tol) {
                return Err(GaError::NotAGrade { expected: 1 });
            }
            value = value.gp(v)?;
        }
        let parity = if vectors.len() % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        };
        Self::new(value, parity, tol)
    }

    pub fn value(&self) -> &Multivector {
        &self.value
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    /// U^-1 = reverse(U) / <U reverse(U)>_0.
    pub fn inverse(&self, tol: Tolerance) -> Result<Multivector> {
        let sq = self.value.gp(&self.value.reverse())?.scalar_part();
        let scale = self.value.max_abs();
        if sq.norm() <= tol.threshold(scale * scale) {
            return Err(GaError::NonInvertible);
        }
        Ok(&self.value.reverse() * (Complex64::ONE / sq))
    }
}

/// Map the hyperplane `a1 x1 + a2 x2 + ... + delta = 0` to the vector
/// `a1 e1 + a2 e2 + ... + delta e0`, with `e0` the designated null
/// generator.
pub fn embed_plane(algebra: &Arc<Algebra>, normal: &[f64], offset: f64) -> Result<Multivector> {
    let null = algebra.null_generator().ok_or(GaError::NoNullGenerator)?;
    let metric = algebra.metric_generators();
    if normal.len() > metric.len() {
        return Err(GaError::InvalidArgument(format!(
            "plane normal has {} coefficients but the algebra has {} non-null generators",
            normal.len(),
            metric.len()
        )));
    }
    let mut mv = Multivector::zero(algebra);
    for (i, &a) in normal.iter().enumerate() {
        mv = mv.with_coeff(1 << (metric.start + i), a);
    }
    Ok(mv.with_coeff(1 << null, offset))
}

/// Witt basis of the designated positive/negative pair:
/// n_o = (e_minus - e_plus)/2 and n_inf = e_minus + e_plus.
pub fn witt_basis(algebra: &Arc<Algebra>) -> Result<(Multivector, Multivector)> {
    let (plus, minus) = algebra.witt_generators()?;
    let ep = Multivector::generator(algebra, plus);
    let em = Multivector::generator(algebra, minus);
    let n_o = &(&em - &ep) * 0.5;
    let n_inf = &em + &ep;
    Ok((n_o, n_inf))
}

/// Map a hypersphere with the given center and radius to the vector
/// n_o + x + (x^2 - rho^2)/2 n_inf.
pub fn embed_sphere(algebra: &Arc<Algebra>, center: &[f64], radius: f64) -> Result<Multivector> {
    let (n_o, n_inf) = witt_basis(algebra)?;
    let (p, _, r) = algebra.signature();
    // base space: the positive generators other than e_plus
    if center.len() > p - 1 {
        return Err(GaError::InvalidArgument(format!(
            "sphere center has {} coefficients but the base space has {}",
            center.len(),
            p - 1
        )));
    }
    let mut x = Multivector::zero(algebra);
    let mut x_sq = 0.0;
    for (i, &c) in center.iter().enumerate() {
        x = x.with_coeff(1 << (r + i), c);
        x_sq += c * c;
    }
    Ok(&(&n_o + &x) + &(&n_inf * (0.5 * (x_sq - radius * radius))))
}

/// Twisted conjugation: the grade-l part of x maps to
/// (-1)^(kl) U <x>_l U^-1, which is U x U^-1 for even U and
/// U involute(x) U^-1 for odd U.
pub fn sandwich(u: &Versor, x: &Multivector, tol: Tolerance) -> Result<Multivector> {
    let inv = u.inverse(tol)?;
    let arg = match u.parity() {
        Parity::Even => x.clone(),
        Parity::Odd => x.involute(),
    };
    u.value().gp(&arg)?.gp(&inv)
}

/// Determinant of the transformation: (-1)^k for a k-reflection.
pub fn versor_det(u: &Versor) -> f64 {
    match u.parity() {
        Parity::Even => 1.0,
        Parity::Odd => -1.0,
    }
}
