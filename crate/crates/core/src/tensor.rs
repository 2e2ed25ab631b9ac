//! Tensor products of crystals.
//!
//! The two-factor rules are exposed as pure functions on per-index
//! statistics so that multi-factor products (see [`crate::binfinity`]) can
//! evaluate them by left-associated recursion without materialising nested
//! tensor elements.

use crate::cartan::{CartanDatum, Weight};
use crate::crystal::{Crystal, ExtInt, Fin};

/// The statistics of one element at one fixed index `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IndexStats {
    pub wt_i: i64,
    pub eps: ExtInt,
    pub phi: ExtInt,
}

impl IndexStats {
    /// Statistics of the highest weight element of `B(infinity)`.
    pub const HEAD: IndexStats = IndexStats { wt_i: 0, eps: Fin(0), phi: Fin(0) };
}

/// Statistics of `b ⊗ b'` from those of `b` and `b'`.
pub fn combine(left: IndexStats, right: IndexStats) -> IndexStats {
    IndexStats {
        wt_i: left.wt_i + right.wt_i,
        eps: left.eps.max(right.eps - left.wt_i),
        phi: (left.phi + right.wt_i).max(right.phi),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

/// Which factor `f_i` acts on.
pub fn f_side(phi_left: ExtInt, eps_right: ExtInt) -> Side {
    if phi_left > eps_right {
        Side::Left
    } else {
        Side::Right
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ESide {
    Left,
    Right,
    /// The imaginary gap `eps_i(b') < phi_i(b) <= eps_i(b') - a_ii`.
    Gap,
}

/// Which factor `e_i` acts on, or the imaginary gap.
pub fn e_side(d: &CartanDatum, i: usize, phi_left: ExtInt, eps_right: ExtInt) -> ESide {
    if d.is_real(i) {
        if phi_left >= eps_right {
            ESide::Left
        } else {
            ESide::Right
        }
    } else {
        let a_ii = d.a(i, i);
        if phi_left > eps_right - a_ii {
            ESide::Left
        } else if phi_left <= eps_right {
            ESide::Right
        } else {
            ESide::Gap
        }
    }
}

/// `B_1 ⊗ B_2` over a common datum.
#[derive(Debug, Clone)]
pub struct TensorCrystal<A, B> {
    pub left: A,
    pub right: B,
}

impl<A: Crystal, B: Crystal> TensorCrystal<A, B> {
    pub fn new(left: A, right: B) -> Self {
        debug_assert_eq!(left.datum(), right.datum());
        Self { left, right }
    }

    fn left_stats(&self, i: usize, b: &A::Element) -> IndexStats {
        IndexStats { wt_i: self.left.wt_i(i, b), eps: self.left.eps(i, b), phi: self.left.phi(i, b) }
    }

    fn right_stats(&self, i: usize, b: &B::Element) -> IndexStats {
        IndexStats { wt_i: self.right.wt_i(i, b), eps: self.right.eps(i, b), phi: self.right.phi(i, b) }
    }

    pub fn stats(&self, i: usize, x: &(A::Element, B::Element)) -> IndexStats {
        combine(self.left_stats(i, &x.0), self.right_stats(i, &x.1))
    }

    /// Which branch of the `e_i` rule applies to `x`.
    pub fn e_branch(&self, i: usize, x: &(A::Element, B::Element)) -> ESide {
        e_side(self.datum(), i, self.left.phi(i, &x.0), self.right.eps(i, &x.1))
    }
}

impl<A: Crystal, B: Crystal> Crystal for TensorCrystal<A, B> {
    type Element = (A::Element, B::Element);

    fn datum(&self) -> &CartanDatum {
        self.left.datum()
    }

    fn wt(&self, x: &Self::Element) -> Weight {
        &self.left.wt(&x.0) + &self.right.wt(&x.1)
    }

    fn eps(&self, i: usize, x: &Self::Element) -> ExtInt {
        self.stats(i, x).eps
    }

    fn phi(&self, i: usize, x: &Self::Element) -> ExtInt {
        self.stats(i, x).phi
    }

    fn f(&self, i: usize, x: &Self::Element) -> Option<Self::Element> {
        match f_side(self.left.phi(i, &x.0), self.right.eps(i, &x.1)) {
            Side::Left => self.left.f(i, &x.0).map(|l| (l, x.1.clone())),
            Side::Right => self.right.f(i, &x.1).map(|r| (x.0.clone(), r)),
        }
    }

    fn e(&self, i: usize, x: &Self::Element) -> Option<Self::Element> {
        match self.e_branch(i, x) {
            ESide::Left => self.left.e(i, &x.0).map(|l| (l, x.1.clone())),
            ESide::Right => self.right.e(i, &x.1).map(|r| (x.0.clone(), r)),
            ESide::Gap => None,
        }
    }

    fn key(&self, x: &Self::Element) -> String {
        format!("{} ⊗ {}", self.left.key(&x.0), self.right.key(&x.1))
    }

    fn evaluate(&self, x: &Self::Element) -> Result<(), String> {
        self.left.evaluate(&x.0)?;
        self.right.evaluate(&x.1)
    }
}
