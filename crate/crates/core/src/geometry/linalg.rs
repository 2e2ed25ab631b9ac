//! Dense exact-rational linear algebra for small matrices.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Q::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for k in 0..n {
            m[(k, k)] = Q::one();
        }
        m
    }

    /// Panics on ragged input.
    pub fn from_rows(rows: Vec<Vec<Q>>, cols: usize) -> Self {
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged matrix");
            data.extend(row);
        }
        Self { rows: r, cols, data }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect(), cols)
    }

    /// The matrix whose columns are `vectors`, each of length `rows`.
    pub fn from_columns(vectors: &[Vec<Q>], rows: usize) -> Self {
        let mut m = Self::zeros(rows, vectors.len());
        for (c, v) in vectors.iter().enumerate() {
            for r in 0..rows {
                m[(r, c)] = v[r].clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn row(&self, r: usize) -> &[Q] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Q> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    /// Panics on a shape mismatch.
    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in product");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    let v = a * &rhs[(k, c)];
                    out[(r, c)] += v;
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(self.cols, v.len(), "shape mismatch in apply");
        (0..self.rows).map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn add(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.shape(), rhs.shape(), "shape mismatch in sum");
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect() }
    }

    pub fn scale(&self, k: &Q) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * k).collect() }
    }

    pub fn trace(&self) -> Q {
        (0..self.rows.min(self.cols)).map(|k| self[(k, k)].clone()).sum()
    }

    /// Keeps the listed rows and columns, in order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        let mut out = Self::zeros(rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                out[(i, j)] = self[(r, c)].clone();
            }
        }
        out
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&k| !m[(k, c)].is_zero()) else { continue };
            m.swap_rows(r, p);
            let inv = m[(r, c)].recip();
            for k in c..m.cols {
                let v = &m[(r, k)] * &inv;
                m[(r, k)] = v;
            }
            for other in 0..m.rows {
                if other == r || m[(other, c)].is_zero() {
                    continue;
                }
                let factor = m[(other, c)].clone();
                for k in c..m.cols {
                    let v = &factor * &m[(r, k)];
                    m[(other, k)] -= v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Basis of `{ v : M v = 0 }`, one vector per free column.
    pub fn kernel(&self) -> Vec<Vec<Q>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Q::zero(); self.cols];
                v[f] = Q::one();
                for (row, &p) in pivots.iter().enumerate() {
                    v[p] = -r[(row, f)].clone();
                }
                v
            })
            .collect()
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug[(r, c)] = self[(r, c)].clone();
            }
            aug[(r, n + r)] = Q::one();
        }
        let (red, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let cols: Vec<usize> = (n..2 * n).collect();
        Some(red.select(&(0..n).collect::<Vec<_>>(), &cols))
    }

    /// Coefficients of `det(x I - M)`, lowest degree first (Faddeev-LeVerrier).
    pub fn char_poly(&self) -> Poly {
        assert!(self.is_square(), "characteristic polynomial of a non-square matrix");
        let n = self.rows;
        let mut coeffs = vec![Q::zero(); n + 1];
        coeffs[n] = Q::one();
        let mut aux = Self::zeros(n, n);
        for k in 1..=n {
            aux = self.mul(&aux).add(&Self::identity(n).scale(&coeffs[n - k + 1]));
            let t = self.mul(&aux).trace();
            coeffs[n - k] = -t / q(k as i64);
        }
        Poly::new(coeffs)
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Q;
    fn index(&self, (r, c): (usize, usize)) -> &Q {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Q {
        &mut self.data[r * self.cols + c]
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> =
            (0..self.rows).map(|r| format!("[{}]", self.row(r).iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "))).collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

/// A subspace of `Q^n`, kept as the nonzero rows of a reduced row echelon
/// form so that equal subspaces have equal representations.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<Q>>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Self { ambient, basis: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        Self::span(ambient, (0..ambient).map(|k| unit(ambient, k)))
    }

    pub fn span(ambient: usize, vectors: impl IntoIterator<Item = Vec<Q>>) -> Self {
        let rows: Vec<Vec<Q>> = vectors.into_iter().collect();
        if rows.is_empty() {
            return Self::zero(ambient);
        }
        let (r, pivots) = Matrix::from_rows(rows, ambient).rref();
        Self { ambient, basis: (0..pivots.len()).map(|k| r.row(k).to_vec()).collect() }
    }

    /// The column space of `m`.
    pub fn image(m: &Matrix) -> Self {
        Self::span(m.rows(), (0..m.cols()).map(|c| m.column(c)))
    }

    pub fn kernel(m: &Matrix) -> Self {
        Self::span(m.cols(), m.kernel())
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Q>] {
        &self.basis
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        Self::span(self.ambient, self.basis.iter().chain(&other.basis).cloned())
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        v.iter().all(Zero::is_zero) || self.sum(&Self::span(self.ambient, [v.to_vec()])).dim() == self.dim()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    /// Linear functionals vanishing on the subspace.
    pub fn annihilator(&self) -> Vec<Vec<Q>> {
        if self.basis.is_empty() {
            return (0..self.ambient).map(|k| unit(self.ambient, k)).collect();
        }
        Matrix::from_rows(self.basis.clone(), self.ambient).kernel()
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        let constraints: Vec<Vec<Q>> = self.annihilator().into_iter().chain(other.annihilator()).collect();
        if constraints.is_empty() {
            return Self::full(self.ambient);
        }
        Self::kernel(&Matrix::from_rows(constraints, self.ambient))
    }

    /// `m(S)`.
    pub fn mapped(&self, m: &Matrix) -> Subspace {
        Self::span(m.rows(), self.basis.iter().map(|v| m.apply(v)))
    }

    /// `{ v : m v in S }`.
    pub fn preimage(&self, m: &Matrix) -> Subspace {
        let ann = self.annihilator();
        if ann.is_empty() {
            return Self::full(m.cols());
        }
        Self::kernel(&Matrix::from_rows(ann, self.ambient).mul(m))
    }
}

pub fn unit(n: usize, k: usize) -> Vec<Q> {
    let mut v = vec![Q::zero(); n];
    v[k] = Q::one();
    v
}

/// A polynomial over `Q`, lowest degree first, without trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly(Vec<Q>);

impl Poly {
    pub fn new(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self(coeffs)
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// `-1` for the zero polynomial.
    pub fn degree(&self) -> isize {
        self.0.len() as isize - 1
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(self.0.iter().enumerate().skip(1).map(|(k, c)| c * q(k as i64)).collect())
    }

    pub fn eval(&self, x: &Q) -> Q {
        self.0.iter().rev().fold(Q::zero(), |acc, c| acc * x + c)
    }

    fn rem(&self, d: &Poly) -> Poly {
        assert!(!d.is_zero(), "polynomial division by zero");
        let mut r = self.0.clone();
        let dl = d.0.len();
        let lead = d.0.last().expect("nonzero").clone();
        while r.len() >= dl {
            let c = r.last().expect("nonempty") / &lead;
            let shift = r.len() - dl;
            for (k, dc) in d.0.iter().enumerate() {
                let v = &c * dc;
                r[shift + k] -= v;
            }
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        Poly::new(r)
    }

    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a
    }

    /// No repeated roots over any extension of `Q`.
    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).degree() <= 0
    }

    /// Removes every factor `x - root`.
    pub fn divide_out_root(&self, root: &Q) -> Poly {
        let mut p = self.clone();
        while p.degree() > 0 && p.eval(root).is_zero() {
            // synthetic division, highest degree first
            let mut out = vec![Q::zero(); p.0.len() - 1];
            let mut carry = Q::zero();
            for k in (1..p.0.len()).rev() {
                carry = &carry * root + &p.0[k];
                out[k - 1] = carry.clone();
            }
            p = Poly::new(out);
        }
        p
    }

    /// Distinct rational roots in increasing order. `None` if the
    /// coefficients are too large for the divisor search.
    pub fn rational_roots(&self) -> Option<Vec<Q>> {
        if self.is_zero() {
            return Some(Vec::new());
        }
        // clear denominators
        let lcm = self.0.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self.0.iter().map(|c| (c * Q::from_integer(lcm.clone())).to_integer()).collect();
        let mut roots = Vec::new();
        let low = ints.iter().position(|c| !c.is_zero()).expect("nonzero polynomial");
        if low > 0 {
            roots.push(Q::zero());
        }
        let ints = &ints[low..];
        let constant = ints[0].abs().to_u64()?;
        let lead = ints.last().expect("nonempty").abs().to_u64()?;
        for p in divisors(constant) {
            for qd in divisors(lead) {
                for sign in [-1i64, 1] {
                    let x = Q::new(BigInt::from(p) * sign, BigInt::from(qd));
                    if self.eval(&x).is_zero() && !roots.contains(&x) {
                        roots.push(x);
                    }
                }
            }
        }
        roots.sort();
        Some(roots)
    }
}

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}
