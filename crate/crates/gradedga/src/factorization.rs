//! Tangent decomposition of rotors from their grade parts, factorization of
//! 2k-reflections into commuting bireflections and of (2k+1)-reflections
//! into a reflection times a rotor, and the full principal logarithm.

use num_complex::Complex64;

use crate::decomposition::{
    characteristic_coeffs, check_distinct, ratio_parts, sort_by_magnitude,
};
use crate::embedding::Versor;
use crate::error::{GaError, Result};
use crate::exp_log::{log_simple, Rotor};
use crate::matrix_rep::solve_gp;
use crate::multivector::{norm_from_square, Multivector};
use crate::poly;
use crate::tolerance::Tolerance;

/// The simple bivectors ta(b_i) of a rotor, with lambda_i = ta(b_i)^2,
/// computed from the grades of R directly.
#[derive(Debug, Clone)]
pub struct TangentSplit {
    pub tangents: Vec<Multivector>,
    pub lambdas: Vec<Complex64>,
    /// Number of commuting factors the rotor carries, counting quarter
    /// turns whose tangents are unbounded and therefore omitted.
    pub factors: usize,
}

/// Tangent decomposition: lambda_i are the roots of
/// sum_m <(<R>_2m)^2>_0 (-lambda)^(k-m) and each ta(b_i) follows from the
/// grade ratio formulas. The limit <R>_0 -> 0 drops the leading polynomial
/// coefficient: each vanished degree is a quarter-turn factor with an
/// unbounded tangent, reported through `factors` and recovered by
/// `factor_even` from the residual product.
pub fn tangent_split(r: &Rotor, tol: Tolerance) -> Result<TangentSplit> {
    let value = r.value();
    let k_full = value.algebra().dim() / 2;
    let scale = value.max_abs();
    let grades: Vec<Multivector> = (0..=k_full).map(|m| value.grade_select(2 * m)).collect();
    let k_hat = (1..=k_full)
        .rev()
        .find(|&m| !tol.near_zero(grades[m].max_abs(), scale))
        .unwrap_or(0);
    if k_hat == 0 {
        return Ok(TangentSplit {
            tangents: Vec::new(),
            lambdas: Vec::new(),
            factors: 0,
        });
    }
    let coeffs = characteristic_coeffs(&grades, k_hat)?;

    // drop vanishing leading coefficients; each is a root at infinity
    let cscale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut degree = k_hat;
    while degree > 0 && tol.near_zero_c(coeffs[degree], cscale) {
        degree -= 1;
    }
    let dropped = k_hat - degree;
    if dropped >= 2 {
        return Err(GaError::DegenerateRoots(
            "two or more quarter-turn factors cannot be separated".into(),
        ));
    }

    let mut lambdas = poly::roots(&coeffs[..=degree])?;
    check_distinct(&lambdas)?;
    sort_by_magnitude(&mut lambdas);

    let mut tangents = Vec::with_capacity(lambdas.len());
    for &lambda in &lambdas {
        let (num, den) = ratio_parts(&grades, k_hat, lambda);
        let t = solve_gp(&den, &num, tol)?;
        let sq = t.gp(&t)?;
        let tscale = 1.0 + t.max_abs() * t.max_abs();
        if t.off_grade_max(2) > 1e-9 * (1.0 + t.max_abs()) || sq.off_grade_max(0) > 1e-8 * tscale
        {
            return Err(GaError::DegenerateRoots(
                "tangent solution is not a simple bivector within tolerance".into(),
            ));
        }
        tangents.push(t);
    }
    Ok(TangentSplit {
        tangents,
        lambdas,
        factors: k_hat,
    })
}

/// An ordered list of commuting simple rotors, with an optional single
/// reflection in the odd case. The product of all parts reproduces the
/// factored element exactly, sign included.
#[derive(Debug, Clone)]
pub struct Factorization {
    pub rotors: Vec<Rotor>,
    pub reflection: Option<Multivector>,
}

impl Factorization {
    /// Product reflection * R_1 * ... * R_k.
    pub fn product(&self) -> Result<Multivector> {
        let first = self
            .reflection
            .clone()
            .or_else(|| self.rotors.first().map(|r| r.value().clone()))
            .ok_or_else(|| GaError::InvalidArgument("empty factorization".into()))?;
        let algebra = first.algebra().clone();
        let mut acc = Multivector::scalar(&algebra, 1.0);
        if let Some(refl) = &self.reflection {
            acc = acc.gp(refl)?;
        }
        for r in &self.rotors {
            acc = acc.gp(r.value())?;
        }
        Ok(acc)
    }
}

/// Factor a 2k-reflection into commuting simple rotors: the first factors
/// are normalize(1 + ta(b_i)) ordered by descending |lambda|, the last is
/// the residual reverse(R_1)...reverse(R_(k-1)) R, preserving the
/// distinction between R and -R. A quarter-turn factor (vanishing scalar
/// part) always comes from the residual.
pub fn factor_even(r: &Rotor, tol: Tolerance) -> Result<Factorization> {
    let ts = tangent_split(r, tol)?;
    if ts.factors <= 1 {
        return Ok(Factorization {
            rotors: vec![r.clone()],
            reflection: None,
        });
    }
    let formula_count = if ts.tangents.len() < ts.factors {
        ts.tangents.len()
    } else {
        ts.factors - 1
    };
    let mut rotors: Vec<Rotor> = Vec::with_capacity(ts.factors);
    for t in ts.tangents.iter().take(formula_count) {
        let one_plus = &Multivector::scalar(t.algebra(), 1.0) + t;
        let sq = Complex64::ONE - t.gp(t)?.scalar_part();
        let norm = norm_from_square(sq);
        if norm.norm() <= tol.eps_abs {
            return Err(GaError::NullNorm);
        }
        rotors.push(Rotor::new_unchecked(&one_plus * (Complex64::ONE / norm)));
    }
    let mut residual = r.value().clone();
    for rotor in &rotors {
        residual = rotor.value().reverse().gp(&residual)?;
    }
    let off_simple = residual
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(mask, _)| !matches!(crate::algebra::grade_of(*mask), 0 | 2))
        .map(|(_, c)| c.norm())
        .fold(0.0, f64::max);
    if off_simple > 1e-8 * (1.0 + residual.max_abs()) {
        return Err(GaError::DegenerateRoots(
            "residual factor is not a bireflection".into(),
        ));
    }
    let residual_rotor = Rotor::new_unchecked(residual);
    if ts.tangents.len() < ts.factors {
        // the residual is the quarter-turn factor; it has the largest angle
        rotors.insert(0, residual_rotor);
    } else {
        rotors.push(residual_rotor);
    }
    Ok(Factorization {
        rotors,
        reflection: None,
    })
}

/// Factor an odd versor into a commuting reflection r = normalize(<P>_1)
/// and a 2k-reflection R = P / r, the latter further split into commuting
/// simple rotors.
pub fn factor_odd(p: &Versor, tol: Tolerance) -> Result<Factorization> {
    if p.parity() != crate::embedding::Parity::Odd {
        return Err(GaError::InvalidArgument(
            "factor_odd expects an odd versor".into(),
        ));
    }
    let value = p.value();
    let grade1 = value.grade_select(1);
    let refl = grade1.normalize(tol)?;
    let refl_sq = refl.gp(&refl)?.scalar_part();
    let refl_inv = &refl * (Complex64::ONE / refl_sq);
    let even = value.gp(&refl_inv)?;
    let scale = 1.0 + even.max_abs();
    if even.odd_part().max_abs() > 1e-9 * scale {
        return Err(GaError::NotAVersor(
            "P / r is not an even versor".into(),
        ));
    }
    let rotor = Rotor::new_unchecked(even.even_part());
    let mut fact = factor_even(&rotor, tol)?;
    fact.reflection = Some(refl);
    Ok(fact)
}

/// Principal logarithm of a rotor: factor into commuting simple rotors and
/// sum their principal logarithms.
///
/// A factor with a negative scalar part and a non-negative real square has
/// no principal logarithm of its own; such signs are moved in pairs, with a
/// rotation factor absorbing an odd leftover, since -e^b = e^((theta-pi)
/// unit) only exists on rotation factors. When no rotation can absorb the
/// sign the rotor sits outside the image of exp and AxisUndefined is
/// returned.
pub fn log_rotor(r: &Rotor, tol: Tolerance) -> Result<Multivector> {
    let fact = factor_even(r, tol)?;
    let mut values: Vec<Multivector> = fact.rotors.iter().map(|f| f.value().clone()).collect();

    let mut flip: Vec<usize> = Vec::new();
    let mut rotations: Vec<usize> = Vec::new();
    for (i, v) in values.iter().enumerate() {
        let b2 = v.grade_select(2);
        let lam2 = b2.gp(&b2)?.scalar_part();
        let real = Tolerance::default().near_zero(lam2.im, lam2.norm());
        let null_scale = tol.threshold(b2.max_abs() * b2.max_abs());
        if real && lam2.re < -null_scale {
            rotations.push(i);
        } else if real && v.scalar_part().re < 0.0 {
            flip.push(i);
        }
    }
    if flip.len() % 2 == 1 {
        match rotations.first() {
            Some(&i) => flip.push(i),
            None => return Err(GaError::AxisUndefined),
        }
    }
    for &i in &flip {
        values[i] = -&values[i];
    }

    let mut sum = Multivector::zero(r.value().algebra());
    for v in values {
        let log = log_simple(&Rotor::new_unchecked(v), tol)?;
        sum = &sum + log.value();
    }
    Ok(sum)
}
