//! Borcherds-Cartan data, root-lattice weights and quivers with edge loops.
//!
//! Indices are 0-based in the library API. Every external format (JSON
//! files, graph exports, CLI reports) uses 1-based vertex and index labels.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CartanError {
    #[error("matrix is empty")]
    Empty,
    #[error("matrix is not square: row {row} has {len} entries, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },
    #[error("matrix is not symmetric at ({i}, {j})")]
    NotSymmetric { i: usize, j: usize },
    #[error("diagonal entry a_{i}{i} = {value} is not in {{2, 0, -2, -4, ...}}", i = .index + 1)]
    BadDiagonal { index: usize, value: i64 },
    #[error("off-diagonal entry ({i}, {j}) = {value} is positive")]
    PositiveOffDiagonal { i: usize, j: usize, value: i64 },
    #[error("index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },
    #[error("weight length {left} does not match {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("weight has a negative coordinate at index {index}")]
    NegativeCoordinate { index: usize },
    #[error("quiver arrow {arrow} references vertex {vertex}, but there are only {count} vertices")]
    BadVertex { arrow: usize, vertex: usize, count: usize },
}

/// A symmetric even integral Borcherds-Cartan matrix with its real/imaginary
/// index partition.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CartanDatum {
    matrix: Vec<Vec<i64>>,
    real: Vec<usize>,
    imaginary: Vec<usize>,
}

impl CartanDatum {
    /// Validates a raw integer matrix.
    pub fn new(raw: Vec<Vec<i64>>) -> Result<Self, CartanError> {
        let n = raw.len();
        if n == 0 {
            return Err(CartanError::Empty);
        }
        for (row, r) in raw.iter().enumerate() {
            if r.len() != n {
                return Err(CartanError::NotSquare { row, len: r.len(), expected: n });
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if raw[i][j] != raw[j][i] {
                    return Err(CartanError::NotSymmetric { i, j });
                }
            }
        }
        let mut real = Vec::new();
        let mut imaginary = Vec::new();
        for i in 0..n {
            let a = raw[i][i];
            if a % 2 != 0 || a > 2 {
                return Err(CartanError::BadDiagonal { index: i, value: a });
            }
            if a == 2 {
                real.push(i);
            } else {
                imaginary.push(i);
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && raw[i][j] > 0 {
                    return Err(CartanError::PositiveOffDiagonal { i, j, value: raw[i][j] });
                }
            }
        }
        Ok(Self { matrix: raw, real, imaginary })
    }

    pub fn rank(&self) -> usize {
        self.matrix.len()
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    /// `a_ij`. Panics if either index is out of range.
    pub fn a(&self, i: usize, j: usize) -> i64 {
        self.matrix[i][j]
    }

    pub fn is_real(&self, i: usize) -> bool {
        self.matrix[i][i] == 2
    }

    pub fn is_imaginary(&self, i: usize) -> bool {
        !self.is_real(i)
    }

    pub fn real_indices(&self) -> &[usize] {
        &self.real
    }

    pub fn imaginary_indices(&self) -> &[usize] {
        &self.imaginary
    }

    pub fn indices(&self) -> std::ops::Range<usize> {
        0..self.rank()
    }

    pub fn simple_root(&self, i: usize) -> Weight {
        Weight::simple(self.rank(), i)
    }

    /// `<h_i, w> = sum_j c_j a_ij`.
    pub fn pairing(&self, i: usize, w: &Weight) -> Result<i64, CartanError> {
        if i >= self.rank() {
            return Err(CartanError::IndexOutOfRange { index: i, rank: self.rank() });
        }
        if w.len() != self.rank() {
            return Err(CartanError::LengthMismatch { left: w.len(), right: self.rank() });
        }
        Ok(self.pairing_unchecked(i, w))
    }

    /// [`pairing`](Self::pairing) without bounds checks; panics on bad input.
    pub fn pairing_unchecked(&self, i: usize, w: &Weight) -> i64 {
        self.matrix[i].iter().zip(w.coords()).map(|(a, c)| a * c).sum()
    }

    /// `dim X_alpha = ((2 Id - A) alpha, alpha)`.
    pub fn dim_x(&self, alpha: &Weight) -> Result<i64, CartanError> {
        if alpha.len() != self.rank() {
            return Err(CartanError::LengthMismatch { left: alpha.len(), right: self.rank() });
        }
        if let Some(index) = alpha.coords().iter().position(|&c| c < 0) {
            return Err(CartanError::NegativeCoordinate { index });
        }
        let n = self.rank();
        let shifted: Vec<i64> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let diag = if i == j { 2 } else { 0 };
                        (diag - self.matrix[i][j]) * alpha.coords()[j]
                    })
                    .sum()
            })
            .collect();
        bilinear_form(&Weight::new(shifted), alpha)
    }
}

impl fmt::Display for CartanDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .matrix
            .iter()
            .map(|r| format!("[{}]", r.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        write!(f, "[{}]", rows.join(","))
    }
}

/// An element `sum_j c_j alpha_j` of the root lattice.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Weight(Vec<i64>);

impl Weight {
    pub fn new(coords: Vec<i64>) -> Self {
        Self(coords)
    }

    pub fn zero(rank: usize) -> Self {
        Self(vec![0; rank])
    }

    pub fn simple(rank: usize, i: usize) -> Self {
        let mut c = vec![0; rank];
        c[i] = 1;
        Self(c)
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// Membership in `-Q_+`.
    pub fn is_nonpositive(&self) -> bool {
        self.0.iter().all(|&c| c <= 0)
    }

    pub fn height(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn scaled(&self, k: i64) -> Self {
        Self(self.0.iter().map(|c| c * k).collect())
    }
}

impl Add for &Weight {
    type Output = Weight;
    fn add(self, rhs: &Weight) -> Weight {
        assert_eq!(self.len(), rhs.len(), "weight length mismatch");
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Weight {
    type Output = Weight;
    fn sub(self, rhs: &Weight) -> Weight {
        assert_eq!(self.len(), rhs.len(), "weight length mismatch");
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight(self.0.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","))
    }
}

/// `(sum d_k alpha_k, sum e_k alpha_k) = sum d_k e_k`.
pub fn bilinear_form(u: &Weight, v: &Weight) -> Result<i64, CartanError> {
    if u.len() != v.len() {
        return Err(CartanError::LengthMismatch { left: u.len(), right: v.len() });
    }
    Ok(u.0.iter().zip(&v.0).map(|(a, b)| a * b).sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    /// `h` in the chosen orientation `Omega`.
    Omega,
    /// `h` in the opposite orientation `Omega-bar`.
    OmegaBar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub source: usize,
    pub target: usize,
    pub orientation: Orientation,
}

impl Arrow {
    pub fn is_loop(&self) -> bool {
        self.source == self.target
    }

    /// `epsilon(h)`: `+1` on `Omega`, `-1` on `Omega-bar`.
    pub fn sign(&self) -> i64 {
        match self.orientation {
            Orientation::Omega => 1,
            Orientation::OmegaBar => -1,
        }
    }
}

/// A doubled quiver `H = Omega ⊔ Omega-bar` with a fixed-point-free
/// involution `h -> h-bar`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quiver {
    vertex_count: usize,
    arrows: Vec<Arrow>,
    bar: Vec<usize>,
}

/// Quiver file format: Omega arrows only, with 1-based vertices.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QuiverSpec {
    pub vertices: usize,
    #[serde(default)]
    pub omega_arrows: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertex_names: Option<Vec<String>>,
}

impl Quiver {
    /// Builds `H` from the `Omega` arrows (0-based vertices). Arrow `k` of
    /// `Omega` becomes `h_k`, and its reverse becomes `h_{m+k}` where `m` is
    /// the number of `Omega` arrows.
    pub fn from_omega(vertex_count: usize, omega: &[(usize, usize)]) -> Result<Self, CartanError> {
        let m = omega.len();
        let mut arrows = Vec::with_capacity(2 * m);
        for (k, &(s, t)) in omega.iter().enumerate() {
            for v in [s, t] {
                if v >= vertex_count {
                    return Err(CartanError::BadVertex { arrow: k, vertex: v, count: vertex_count });
                }
            }
            arrows.push(Arrow { source: s, target: t, orientation: Orientation::Omega });
        }
        for &(s, t) in omega {
            arrows.push(Arrow { source: t, target: s, orientation: Orientation::OmegaBar });
        }
        let bar = (0..2 * m).map(|k| if k < m { k + m } else { k - m }).collect();
        Ok(Self { vertex_count, arrows, bar })
    }

    /// Converts the 1-based file representation.
    pub fn from_spec(spec: &QuiverSpec) -> Result<Self, CartanError> {
        let mut omega = Vec::with_capacity(spec.omega_arrows.len());
        for (k, [s, t]) in spec.omega_arrows.iter().enumerate() {
            for &v in [s, t] {
                if v == 0 || v > spec.vertices {
                    return Err(CartanError::BadVertex { arrow: k, vertex: v, count: spec.vertices });
                }
            }
            omega.push((s - 1, t - 1));
        }
        Self::from_omega(spec.vertices, &omega)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow(&self, h: usize) -> &Arrow {
        &self.arrows[h]
    }

    pub fn bar(&self, h: usize) -> usize {
        self.bar[h]
    }

    /// `c_ij`: number of arrows of `H` from `i` to `j`.
    pub fn arrow_count(&self, i: usize, j: usize) -> usize {
        self.arrows.iter().filter(|a| a.source == i && a.target == j).count()
    }

    /// `a_ii = 2 - c_ii`, `a_ij = -c_ij`.
    pub fn cartan_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.vertex_count;
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let c = self.arrow_count(i, j) as i64;
                        if i == j {
                            2 - c
                        } else {
                            -c
                        }
                    })
                    .collect()
            })
            .collect()
    }

    pub fn to_cartan(&self) -> CartanDatum {
        CartanDatum::new(self.cartan_matrix()).expect("a doubled quiver always yields a valid Borcherds-Cartan matrix")
    }
}
