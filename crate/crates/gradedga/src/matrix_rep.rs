//! The 2^n x 2^n Clifford representation of R(p,q,r).
//!
//! Generator matrices are Kronecker products of 2x2 seeds, blade matrices
//! are their products, and a signed permutation O built from first columns
//! conjugates the set into the unique representation whose matrices carry
//! the unmodified multivector coefficients in their first column. In that
//! basis both the matrix-matrix and the matrix-vector product realize the
//! geometric product.

use std::ops::Range;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::algebra::{grade_of, Algebra};
use crate::embedding::{sandwich, Versor};
use crate::error::{GaError, Result};
use crate::multivector::Multivector;
use crate::tolerance::Tolerance;

/// Memory cap for representation construction (2^8 x 2^8 matrices).
pub const REP_MAX_DIM: usize = 8;
/// Blade matrices are cached whole up to this dimension and materialized on
/// demand above it.
const CACHE_DIM: usize = 6;

type Mat = DMatrix<Complex64>;

fn czero() -> Complex64 {
    Complex64::ZERO
}

/// 2x2 seed matrices.
mod seeds {
    /// Row-major 2x2 over f64.
    pub type Seed = [[f64; 2]; 2];
    pub const IDENT: Seed = [[1.0, 0.0], [0.0, 1.0]];
    pub const IDENT_MINUS: Seed = [[1.0, 0.0], [0.0, -1.0]];
    pub const POS: Seed = [[0.0, 1.0], [1.0, 0.0]];
    pub const NEG: Seed = [[0.0, 1.0], [-1.0, 0.0]];
    pub const NULL: Seed = [[0.0, 0.0], [1.0, 0.0]];

    pub fn mul(a: Seed, b: Seed) -> Seed {
        let mut out = [[0.0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        out
    }
}

use seeds::Seed;

/// A permutation of all 2^n blade masks together with a written orientation
/// per blade, e.g. `"e032"` for the negated canonical `e023`.
#[derive(Debug, Clone, PartialEq)]
pub struct BladeOrder {
    names: Vec<String>,
    /// canonical mask per position
    masks: Vec<usize>,
    /// orientation of the written blade relative to the canonical one
    signs: Vec<f64>,
    /// written generator sequences (for the Kronecker product path)
    sequences: Vec<Vec<usize>>,
}

impl BladeOrder {
    /// Canonical binary mask order with positive orientation.
    pub fn canonical(algebra: &Algebra) -> Self {
        let count = algebra.blade_count();
        let mut names = Vec::with_capacity(count);
        let mut masks = Vec::with_capacity(count);
        let mut signs = Vec::with_capacity(count);
        let mut sequences = Vec::with_capacity(count);
        for mask in 0..count {
            names.push(algebra.blade_name(mask));
            masks.push(mask);
            signs.push(1.0);
            sequences.push((0..algebra.dim()).filter(|g| mask & (1 << g) != 0).collect());
        }
        BladeOrder {
            names,
            masks,
            signs,
            sequences,
        }
    }

    /// Parse a comma-separated blade list such as
    /// `"1,e1,e2,e3,e0,e23,e31,e12,e01,e02,e03,e032,e013,e021,e123,e0123"`.
    /// The list must be a permutation of all blades and start with the
    /// scalar.
    pub fn parse(algebra: &Algebra, list: &str) -> Result<Self> {
        let items: Vec<&str> = list.split(',').map(str::trim).collect();
        if items.len() != algebra.blade_count() {
            return Err(GaError::InvalidBladeOrder(format!(
                "expected {} blades, got {}",
                algebra.blade_count(),
                items.len()
            )));
        }
        let mut seen = vec![false; algebra.blade_count()];
        let mut names = Vec::new();
        let mut masks = Vec::new();
        let mut signs = Vec::new();
        let mut sequences = Vec::new();
        for item in items {
            let (mask, sign) = algebra.parse_blade_name(item)?;
            if seen[mask] {
                return Err(GaError::InvalidBladeOrder(format!(
                    "blade `{item}` appears twice"
                )));
            }
            seen[mask] = true;
            let seq = written_sequence(algebra, item)?;
            names.push(item.to_string());
            masks.push(mask);
            signs.push(sign);
            sequences.push(seq);
        }
        if masks[0] != 0 {
            return Err(GaError::InvalidBladeOrder(
                "the first blade must be the scalar `1`".into(),
            ));
        }
        Ok(BladeOrder {
            names,
            masks,
            signs,
            sequences,
        })
    }

    /// The blade order of the E(3) conjugation example in R(3,0,1).
    pub fn e3(algebra: &Algebra) -> Result<Self> {
        if algebra.signature() != (3, 0, 1) {
            return Err(GaError::InvalidArgument(
                "the E(3) blade order requires R(3,0,1)".into(),
            ));
        }
        Self::parse(algebra, E3_ORDER)
    }

    pub fn len(&self) -> usize {
        self.masks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn mask(&self, pos: usize) -> usize {
        self.masks[pos]
    }

    pub fn sign(&self, pos: usize) -> f64 {
        self.signs[pos]
    }

    /// Contiguous index ranges per grade; errors when the order does not
    /// group blades by grade.
    pub fn grade_ranges(&self, dim: usize) -> Result<Vec<Range<usize>>> {
        let mut ranges = Vec::new();
        let mut idx = 0;
        for k in 0..=dim {
            let start = idx;
            while idx < self.masks.len() && grade_of(self.masks[idx]) == k {
                idx += 1;
            }
            ranges.push(start..idx);
        }
        if idx != self.masks.len() {
            return Err(GaError::InvalidBladeOrder(
                "blade order is not grouped by grade".into(),
            ));
        }
        Ok(ranges)
    }
}

pub const E3_ORDER: &str =
    "1,e1,e2,e3,e0,e23,e31,e12,e01,e02,e03,e032,e013,e021,e123,e0123";

fn written_sequence(algebra: &Algebra, name: &str) -> Result<Vec<usize>> {
    if name.trim() == "1" {
        return Ok(Vec::new());
    }
    let base = if algebra.null_generator().is_some() { 0 } else { 1 };
    let body = name.trim().strip_prefix('e').unwrap_or("");
    let labels: Vec<usize> = if body.contains('_') {
        body.split('_')
            .map(|p| p.parse::<usize>().map_err(|_| GaError::InvalidBladeOrder(name.into())))
            .collect::<Result<_>>()?
    } else {
        body.chars()
            .map(|c| {
                c.to_digit(10)
                    .map(|d| d as usize)
                    .ok_or_else(|| GaError::InvalidBladeOrder(name.into()))
            })
            .collect::<Result<_>>()?
    };
    Ok(labels.into_iter().map(|l| l - base).collect())
}

/// The built representation: generator matrices, the signed permutation O,
/// and the conjugated blade matrices C^i (cached for small n).
pub struct CliffordRep {
    algebra: Arc<Algebra>,
    order: BladeOrder,
    generators: Vec<Mat>,
    /// row a of O carries perm_sign[a] at column perm[a]
    perm: Vec<usize>,
    perm_sign: Vec<f64>,
    cached: Option<Vec<Mat>>,
}

impl CliffordRep {
    /// Build the representation for `algebra` in the given blade order.
    pub fn build(algebra: &Arc<Algebra>, order: BladeOrder) -> Result<Self> {
        let n = algebra.dim();
        if n > REP_MAX_DIM {
            return Err(GaError::DimensionCap {
                n,
                cap: REP_MAX_DIM,
            });
        }
        if order.len() != algebra.blade_count() {
            return Err(GaError::InvalidBladeOrder(
                "order length does not match the algebra".into(),
            ));
        }

        let generators: Vec<Mat> = (0..n)
            .map(|g| expand_kron(&slot_seeds_for_generator(algebra, g)))
            .collect();

        // O from the first columns of the blade matrices in order.
        let mut perm = Vec::with_capacity(order.len());
        let mut perm_sign = Vec::with_capacity(order.len());
        let mut hit = vec![false; order.len()];
        for pos in 0..order.len() {
            let (row, sign) = first_column(algebra, &order.sequences[pos]);
            if hit[row] {
                return Err(GaError::InvalidBladeOrder(
                    "first columns do not form a permutation".into(),
                ));
            }
            hit[row] = true;
            perm.push(row);
            perm_sign.push(sign);
        }

        let mut rep = CliffordRep {
            algebra: algebra.clone(),
            order,
            generators,
            perm,
            perm_sign,
            cached: None,
        };

        if n <= CACHE_DIM {
            let all: Vec<Mat> = (0..rep.order.len()).map(|p| rep.conjugated(p)).collect();
            rep.cached = Some(all);
        }

        // First-column property: column 0 of C^i is +1 in row i, exactly.
        for pos in 0..rep.order.len() {
            let (row, value) = rep.first_column_conjugated(pos);
            if row != pos || value != 1.0 {
                return Err(GaError::InvalidBladeOrder(format!(
                    "first-column property failed for blade `{}`",
                    rep.order.names[pos]
                )));
            }
        }
        Ok(rep)
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn order(&self) -> &BladeOrder {
        &self.order
    }

    pub fn dim(&self) -> usize {
        self.order.len()
    }

    /// Generator matrix E_i for internal generator index `gen`.
    pub fn generator_matrix(&self, gen: usize) -> &Mat {
        &self.generators[gen]
    }

    /// Raw blade matrix R^i before the similarity transform.
    pub fn blade_matrix_raw(&self, pos: usize) -> Mat {
        expand_kron(&slot_seeds_for_sequence(
            &self.algebra,
            &self.order.sequences[pos],
        ))
    }

    /// The signed permutation O with O_ij = (R^i)_j0.
    pub fn o_matrix(&self) -> Mat {
        let size = self.dim();
        let mut o = Mat::from_element(size, size, czero());
        for a in 0..size {
            o[(a, self.perm[a])] = Complex64::new(self.perm_sign[a], 0.0);
        }
        o
    }

    fn conjugated(&self, pos: usize) -> Mat {
        let raw = self.blade_matrix_raw(pos);
        let size = self.dim();
        let mut out = Mat::from_element(size, size, czero());
        for a in 0..size {
            for b in 0..size {
                out[(a, b)] =
                    raw[(self.perm[a], self.perm[b])] * (self.perm_sign[a] * self.perm_sign[b]);
            }
        }
        out
    }

    /// Clifford representation matrix C^i = O R^i O^T for blade position `pos`.
    pub fn blade_matrix(&self, pos: usize) -> Mat {
        match &self.cached {
            Some(all) => all[pos].clone(),
            None => self.conjugated(pos),
        }
    }

    /// First column of C^i, computed without materializing the matrix.
    fn first_column_conjugated(&self, pos: usize) -> (usize, f64) {
        // C^i e_0 = sigma_a sigma_0 R^i[perm(a), perm(0)]
        let col = self.perm[0];
        let (row_raw, sign_raw) =
            column_of_kron(&slot_seeds_for_sequence(&self.algebra, &self.order.sequences[pos]), col)
                .expect("blade matrix columns at the scalar position are nonzero");
        let a = self
            .perm
            .iter()
            .position(|&p| p == row_raw)
            .expect("perm is a bijection");
        (a, self.perm_sign[a] * self.perm_sign[0] * sign_raw)
    }

    /// Coefficient column of `mv` in this blade order.
    pub fn vec_of(&self, mv: &Multivector) -> Result<DVector<Complex64>> {
        if mv.algebra() != &self.algebra {
            return Err(GaError::AlgebraMismatch);
        }
        Ok(DVector::from_fn(self.dim(), |a, _| {
            mv.coeff(self.order.masks[a]) * self.order.signs[a]
        }))
    }

    /// Inverse of `vec_of`.
    pub fn unvec(&self, v: &DVector<Complex64>) -> Result<Multivector> {
        if v.len() != self.dim() {
            return Err(GaError::InvalidArgument(format!(
                "expected a vector of length {}, got {}",
                self.dim(),
                v.len()
            )));
        }
        let mut mv = Multivector::zero(&self.algebra);
        for a in 0..self.dim() {
            mv = mv.with_coeff(self.order.masks[a], v[a] * self.order.signs[a]);
        }
        Ok(mv)
    }

    /// D(x) = sum_i x_i C^i: left multiplication by `mv` as a matrix, so
    /// that D(x) vec(y) = vec(xy) and D(x) D(y) = D(xy).
    pub fn rep_matrix(&self, mv: &Multivector) -> Result<Mat> {
        let coeffs = self.vec_of(mv)?;
        let size = self.dim();
        if let Some(all) = &self.cached {
            let mut out = Mat::from_element(size, size, czero());
            for (pos, &c) in coeffs.iter().enumerate() {
                if c == Complex64::ZERO {
                    continue;
                }
                out += &all[pos] * c;
            }
            return Ok(out);
        }
        // accumulate sum x_i R^i, then conjugate once by O
        let mut acc = Mat::from_element(size, size, czero());
        for (pos, &c) in coeffs.iter().enumerate() {
            if c == Complex64::ZERO {
                continue;
            }
            acc += self.blade_matrix_raw(pos) * c;
        }
        let mut out = Mat::from_element(size, size, czero());
        for a in 0..size {
            for b in 0..size {
                out[(a, b)] =
                    acc[(self.perm[a], self.perm[b])] * (self.perm_sign[a] * self.perm_sign[b]);
            }
        }
        Ok(out)
    }

    /// Diagonal matrix implementing a grade involution in this blade order.
    pub fn grade_op_matrix(&self, op: GradeOp) -> Mat {
        let size = self.dim();
        let mut out = Mat::from_element(size, size, czero());
        for a in 0..size {
            let k = grade_of(self.order.masks[a]);
            out[(a, a)] = Complex64::new(op.sign(k), 0.0);
        }
        out
    }

    /// Matrix A of the conjugation action x -> U[x], column J being
    /// vec(sandwich(U, blade_J)). Block diagonal on the grade partition for
    /// versors, since conjugation preserves grade.
    pub fn conjugation_matrix(&self, u: &Versor, tol: Tolerance) -> Result<ConjugationMatrix> {
        let ranges = self.order.grade_ranges(self.algebra.dim())?;
        let size = self.dim();
        let mut a = Mat::from_element(size, size, czero());
        for j in 0..size {
            let blade = self.unvec(&DVector::from_fn(size, |i, _| {
                if i == j {
                    Complex64::ONE
                } else {
                    czero()
                }
            }))?;
            let image = sandwich(u, &blade, tol)?;
            let col = self.vec_of(&image)?;
            a.set_column(j, &col);
        }
        Ok(ConjugationMatrix {
            matrix: a,
            grade_ranges: ranges,
            algebra: self.algebra.clone(),
            order: self.order.clone(),
        })
    }
}

/// Grade involutions expressible as diagonal sign matrices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GradeOp {
    Reverse,
    Involute,
    Conjugate,
}

impl GradeOp {
    pub fn sign(self, k: usize) -> f64 {
        match self {
            GradeOp::Reverse => {
                if k % 4 >= 2 {
                    -1.0
                } else {
                    1.0
                }
            }
            GradeOp::Involute => {
                if k % 2 == 1 {
                    -1.0
                } else {
                    1.0
                }
            }
            GradeOp::Conjugate => {
                if (k + 3) % 4 < 2 {
                    -1.0
                } else {
                    1.0
                }
            }
        }
    }

    pub fn apply(self, mv: &Multivector) -> Multivector {
        match self {
            GradeOp::Reverse => mv.reverse(),
            GradeOp::Involute => mv.involute(),
            GradeOp::Conjugate => mv.conjugate(),
        }
    }
}

/// Conjugation matrix together with its grade partition.
pub struct ConjugationMatrix {
    pub matrix: Mat,
    pub grade_ranges: Vec<Range<usize>>,
    algebra: Arc<Algebra>,
    order: BladeOrder,
}

impl ConjugationMatrix {
    /// Largest entry outside the grade-diagonal blocks.
    pub fn off_block_max(&self) -> f64 {
        let mut max = 0.0f64;
        for (i, ri) in self.grade_ranges.iter().enumerate() {
            for (j, rj) in self.grade_ranges.iter().enumerate() {
                if i == j {
                    continue;
                }
                for a in ri.clone() {
                    for b in rj.clone() {
                        max = max.max(self.matrix[(a, b)].norm());
                    }
                }
            }
        }
        max
    }

    pub fn block(&self, grade: usize) -> Mat {
        let r = self.grade_ranges[grade].clone();
        self.matrix.view((r.start, r.start), (r.len(), r.len())).into()
    }
}

/// The five diagonal blocks of the E(3) conjugation matrix: trivial,
/// contravariant (planes), adjoint (lines), covariant (points), trivial.
pub struct E3Blocks {
    pub d1: Complex64,
    pub d2: Mat,
    pub d3: Mat,
    pub d4: Mat,
    pub d5: Complex64,
}

/// Extract the E(3) blocks; requires R(3,0,1) with the paper blade order.
pub fn e3_blocks(a: &ConjugationMatrix) -> Result<E3Blocks> {
    if a.algebra.signature() != (3, 0, 1) {
        return Err(GaError::InvalidArgument(
            "E(3) blocks require R(3,0,1)".into(),
        ));
    }
    let expected = BladeOrder::e3(&a.algebra)?;
    if a.order != expected {
        return Err(GaError::InvalidBladeOrder(
            "E(3) blocks require the dedicated blade order".into(),
        ));
    }
    Ok(E3Blocks {
        d1: a.matrix[(0, 0)],
        d2: a.block(1),
        d3: a.block(2),
        d4: a.block(3),
        d5: a.matrix[(15, 15)],
    })
}

/// Closed-form E(3) conjugation blocks of a normalized rotor
/// a + b e23 + c e31 + d e12 + e e01 + f e02 + g e03 + h e0123.
pub mod e3 {
    /// 3x3 rotation block, quadratic in (a, b, c, d).
    pub fn rotation(coeffs: &[f64; 8]) -> [[f64; 3]; 3] {
        let [a, b, c, d, ..] = *coeffs;
        [
            [
                a * a + b * b - c * c - d * d,
                2.0 * (a * d + b * c),
                2.0 * (-a * c + b * d),
            ],
            [
                2.0 * (-a * d + b * c),
                a * a - b * b + c * c - d * d,
                2.0 * (a * b + c * d),
            ],
            [
                2.0 * (a * c + b * d),
                2.0 * (-a * b + c * d),
                a * a - b * b - c * c + d * d,
            ],
        ]
    }

    /// Translation column of the covariant (point) block.
    pub fn translation(coeffs: &[f64; 8]) -> [f64; 3] {
        let [a, b, c, d, e, f, g, h] = *coeffs;
        [
            2.0 * (c * g - a * e - b * h - d * f),
            2.0 * (d * e - a * f - b * g - c * h),
            2.0 * (b * f - a * g - c * e - d * h),
        ]
    }

    /// Coupling column of the contravariant (plane) block.
    pub fn s_column(coeffs: &[f64; 8]) -> [f64; 3] {
        let [a, b, c, d, e, f, g, h] = *coeffs;
        [
            2.0 * (c * g + a * e + b * h - d * f),
            2.0 * (d * e + a * f - b * g + c * h),
            2.0 * (b * f + a * g - c * e + d * h),
        ]
    }

    /// Cross-product matrix of the translation column.
    pub fn t_skew(t: &[f64; 3]) -> [[f64; 3]; 3] {
        [
            [0.0, t[2], -t[1]],
            [-t[2], 0.0, t[0]],
            [t[1], -t[0], 0.0],
        ]
    }
}

/// Left-multiplication matrix of `x` in canonical mask order, built from
/// blade products. Equal to `rep_matrix` of the canonical representation;
/// used internally where the Kronecker route would be wasteful.
pub fn gp_matrix(x: &Multivector) -> Mat {
    let size = x.algebra().blade_count();
    let mut out = Mat::from_element(size, size, czero());
    for (i, &c) in x.coeffs().iter().enumerate() {
        if c == Complex64::ZERO {
            continue;
        }
        for j in 0..size {
            let (sign, mask) = x.algebra().blade_product(i, j);
            if sign != 0.0 {
                out[(mask, j)] += c * sign;
            }
        }
    }
    out
}

/// Solve den * y = num for y as a 2^n linear system through the Clifford
/// representation.
pub fn solve_gp(den: &Multivector, num: &Multivector, _tol: Tolerance) -> Result<Multivector> {
    if den.algebra() != num.algebra() {
        return Err(GaError::AlgebraMismatch);
    }
    let m = gp_matrix(den);
    let rhs = DVector::from_iterator(num.coeffs().len(), num.coeffs().iter().cloned());
    let lu = m.lu();
    let sol = lu.solve(&rhs).ok_or(GaError::SingularSystem)?;
    let y = Multivector::from_coeffs(den.algebra(), sol.iter().cloned().collect())?;
    // reject solutions the LU only nominally produced
    let residual = den.gp(&y)?.max_abs_diff(num);
    let scale = 1.0 + num.max_abs() + den.max_abs() * y.max_abs();
    if residual > 1e-8 * scale {
        return Err(GaError::SingularSystem);
    }
    Ok(y)
}

fn slot_seeds_for_generator(algebra: &Algebra, gen: usize) -> Vec<Seed> {
    // E_i = I x ... x I x S_i x I' x ... x I', slot `gen` holding the
    // signature seed, (i-1) identities before and (n-i) I' after.
    let n = algebra.dim();
    (0..n)
        .map(|slot| {
            if slot < gen {
                seeds::IDENT
            } else if slot == gen {
                match algebra.square(gen) {
                    s if s == 1.0 => seeds::POS,
                    s if s == -1.0 => seeds::NEG,
                    _ => seeds::NULL,
                }
            } else {
                seeds::IDENT_MINUS
            }
        })
        .collect()
}

/// Slotwise 2x2 products for a written generator sequence: the blade matrix
/// is the Kronecker product of these.
fn slot_seeds_for_sequence(algebra: &Algebra, sequence: &[usize]) -> Vec<Seed> {
    let n = algebra.dim();
    let mut slots = vec![seeds::IDENT; n];
    for &gen in sequence {
        let factors = slot_seeds_for_generator(algebra, gen);
        for (slot, acc) in slots.iter_mut().enumerate() {
            *acc = seeds::mul(*acc, factors[slot]);
        }
    }
    slots
}

fn expand_kron(slots: &[Seed]) -> Mat {
    let mut out = Mat::from_element(1, 1, Complex64::ONE);
    for seed in slots {
        let f = Mat::from_fn(2, 2, |i, j| Complex64::new(seed[i][j], 0.0));
        out = out.kronecker(&f);
    }
    out
}

/// Column `col` of the Kronecker product of the slot seeds, when it has a
/// single nonzero entry: (row, value). Slot 0 is the most significant bit.
fn column_of_kron(slots: &[Seed], col: usize) -> Option<(usize, f64)> {
    let n = slots.len();
    let mut row = 0usize;
    let mut value = 1.0f64;
    for (slot, seed) in slots.iter().enumerate() {
        let bit = (col >> (n - 1 - slot)) & 1;
        let column = [seed[0][bit], seed[1][bit]];
        let (r, v) = match (column[0] != 0.0, column[1] != 0.0) {
            (true, false) => (0, column[0]),
            (false, true) => (1, column[1]),
            _ => return None,
        };
        row = row * 2 + r;
        value *= v;
    }
    Some((row, value))
}

fn first_column(algebra: &Algebra, sequence: &[usize]) -> (usize, f64) {
    column_of_kron(&slot_seeds_for_sequence(algebra, sequence), 0)
        .expect("first columns of blade matrices are single signed entries")
}
