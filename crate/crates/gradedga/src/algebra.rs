use std::sync::Arc;

use crate::error::{GaError, Result};

/// Hard cap on the number of generators, bounding dense storage at 2^12.
pub const MAX_DIM: usize = 12;

/// A real Clifford algebra R(p,q,r) with `p` generators squaring to +1,
/// `q` to -1 and `r` to 0.
///
/// Generators are stored null-first, then positive, then negative. Labels
/// follow the usual convention: they start at `e0` when the algebra has a
/// null generator (so `e0` is the degenerate direction of a projective
/// algebra) and at `e1` otherwise.
#[derive(Debug, Clone, PartialEq)]
pub struct Algebra {
    p: usize,
    q: usize,
    r: usize,
    squares: Vec<f64>,
}

impl Algebra {
    pub fn new(p: usize, q: usize, r: usize) -> Result<Arc<Self>> {
        let n = p + q + r;
        if n > MAX_DIM {
            return Err(GaError::DimensionCap { n, cap: MAX_DIM });
        }
        let mut squares = Vec::with_capacity(n);
        squares.extend(std::iter::repeat(0.0).take(r));
        squares.extend(std::iter::repeat(1.0).take(p));
        squares.extend(std::iter::repeat(-1.0).take(q));
        Ok(Arc::new(Algebra { p, q, r, squares }))
    }

    pub fn signature(&self) -> (usize, usize, usize) {
        (self.p, self.q, self.r)
    }

    /// Number of generators, n = p + q + r.
    pub fn dim(&self) -> usize {
        self.squares.len()
    }

    /// Number of basis blades, 2^n.
    pub fn blade_count(&self) -> usize {
        1 << self.dim()
    }

    pub fn pseudoscalar_mask(&self) -> usize {
        self.blade_count() - 1
    }

    /// Square of generator `gen` (internal 0-based index).
    pub fn square(&self, gen: usize) -> f64 {
        self.squares[gen]
    }

    pub fn squares(&self) -> &[f64] {
        &self.squares
    }

    /// Offset between internal generator indices and printed labels.
    fn label_base(&self) -> usize {
        if self.r > 0 {
            0
        } else {
            1
        }
    }

    /// Whether blade names need an explicit separator between indices.
    fn wide_labels(&self) -> bool {
        self.dim() + self.label_base() > 10
    }

    /// The lowest-index generator with square 0, if any.
    pub fn null_generator(&self) -> Option<usize> {
        (self.r > 0).then_some(0)
    }

    /// The designated Witt pair (e_plus, e_minus): the last positive and
    /// last negative generator.
    pub fn witt_generators(&self) -> Result<(usize, usize)> {
        if self.p == 0 || self.q == 0 {
            return Err(GaError::MissingWittPair);
        }
        Ok((self.r + self.p - 1, self.r + self.p + self.q - 1))
    }

    /// Non-null generators in index order; these carry the coefficients of
    /// plane normals.
    pub fn metric_generators(&self) -> std::ops::Range<usize> {
        self.r..self.dim()
    }

    pub fn generator_name(&self, gen: usize) -> String {
        format!("e{}", gen + self.label_base())
    }

    /// Canonical name of a basis blade: `"1"` for the scalar, otherwise the
    /// ascending generator labels, e.g. `"e12"`. Algebras with labels above
    /// 9 separate indices with underscores (`"e1_10"`).
    pub fn blade_name(&self, mask: usize) -> String {
        if mask == 0 {
            return "1".to_string();
        }
        let sep = if self.wide_labels() { "_" } else { "" };
        let mut name = String::from("e");
        let mut first = true;
        for gen in 0..self.dim() {
            if mask & (1 << gen) != 0 {
                if !first {
                    name.push_str(sep);
                }
                name.push_str(&(gen + self.label_base()).to_string());
                first = false;
            }
        }
        name
    }

    /// Parse a blade name in the order written, returning the canonical mask
    /// and the sign of the permutation that sorts the written indices
    /// (`"e21"` -> (mask of e12, -1)).
    pub fn parse_blade_name(&self, name: &str) -> Result<(usize, f64)> {
        let name = name.trim();
        if name == "1" {
            return Ok((0, 1.0));
        }
        let body = name
            .strip_prefix('e')
            .ok_or_else(|| GaError::InvalidArgument(format!("invalid blade name `{name}`")))?;
        if body.is_empty() {
            return Err(GaError::InvalidArgument(format!(
                "invalid blade name `{name}`"
            )));
        }
        let labels: Vec<usize> = if body.contains('_') {
            body.split('_')
                .map(|part| {
                    part.parse::<usize>().map_err(|_| {
                        GaError::InvalidArgument(format!("invalid blade name `{name}`"))
                    })
                })
                .collect::<Result<_>>()?
        } else {
            body.chars()
                .map(|ch| {
                    ch.to_digit(10)
                        .map(|d| d as usize)
                        .ok_or_else(|| GaError::InvalidArgument(format!("invalid blade name `{name}`")))
                })
                .collect::<Result<_>>()?
        };
        let base = self.label_base();
        let mut indices = Vec::with_capacity(labels.len());
        for label in labels {
            if label < base || label - base >= self.dim() {
                return Err(GaError::InvalidArgument(format!(
                    "generator `e{label}` is not part of this algebra"
                )));
            }
            let gen = label - base;
            if indices.contains(&gen) {
                return Err(GaError::InvalidArgument(format!(
                    "repeated generator in blade name `{name}`"
                )));
            }
            indices.push(gen);
        }
        let sign = sort_sign(&indices);
        let mask = indices.iter().fold(0usize, |m, g| m | (1 << g));
        Ok((mask, sign))
    }

    /// Product of two basis blades: sign (0 when a shared generator squares
    /// to zero) and the resulting blade mask.
    pub fn blade_product(&self, a: usize, b: usize) -> (f64, usize) {
        let mut sign = if swap_count(a, b) % 2 == 0 { 1.0 } else { -1.0 };
        let mut common = a & b;
        while common != 0 {
            let gen = common.trailing_zeros() as usize;
            sign *= self.squares[gen];
            if sign == 0.0 {
                return (0.0, a ^ b);
            }
            common &= common - 1;
        }
        (sign, a ^ b)
    }
}

/// Number of transpositions needed to merge the generator sequence of `a`
/// (ascending) followed by that of `b` (ascending) into one ascending
/// sequence: pairs (i in a, j in b) with i > j.
fn swap_count(a: usize, b: usize) -> u32 {
    let mut total = 0;
    let mut shifted = a >> 1;
    while shifted != 0 {
        total += (shifted & b).count_ones();
        shifted >>= 1;
    }
    total
}

/// Sign of the permutation sorting `indices` ascending (bubble count).
fn sort_sign(indices: &[usize]) -> f64 {
    let mut v = indices.to_vec();
    let mut sign = 1.0;
    for i in 0..v.len() {
        for j in (i + 1)..v.len() {
            if v[i] > v[j] {
                v.swap(i, j);
                sign = -sign;
            }
        }
    }
    sign
}

pub fn grade_of(mask: usize) -> usize {
    mask.count_ones() as usize
}
