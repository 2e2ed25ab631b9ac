//! The elementary crystals `B_i = { b_i(-n) : n >= 0 }`.

use crate::cartan::{CartanDatum, Weight};
use crate::crystal::{Crystal, ExtInt, Fin, NegInf};

/// `b_i(-n)`, stored as `(i, n)`. Negative levels are never represented;
/// they are the zero element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementaryElement {
    pub index: usize,
    pub level: u64,
}

impl ElementaryElement {
    pub fn new(index: usize, level: u64) -> Self {
        Self { index, level }
    }
}

/// Statistics of `b_i(-n)` at index `j`.
pub fn elem_stats(d: &CartanDatum, b: ElementaryElement, j: usize) -> (Weight, ExtInt, ExtInt) {
    let n = b.level as i64;
    let wt = d.simple_root(b.index).scaled(-n);
    let (eps, phi) = if j != b.index {
        (NegInf, NegInf)
    } else if d.is_real(j) {
        (Fin(n), Fin(-n))
    } else {
        (Fin(0), Fin(-n * d.a(j, j)))
    };
    (wt, eps, phi)
}

pub fn elem_e(b: ElementaryElement, j: usize) -> Option<ElementaryElement> {
    (j == b.index && b.level > 0).then(|| ElementaryElement::new(b.index, b.level - 1))
}

pub fn elem_f(b: ElementaryElement, j: usize) -> Option<ElementaryElement> {
    (j == b.index).then(|| ElementaryElement::new(b.index, b.level + 1))
}

/// The disjoint union of all `B_i` over one datum, viewed as a single
/// crystal so that any `B_i` can be a tensor factor.
#[derive(Debug, Clone)]
pub struct ElementaryCrystal {
    datum: CartanDatum,
}

impl ElementaryCrystal {
    pub fn new(datum: CartanDatum) -> Self {
        Self { datum }
    }

    /// `{ b_i(0), ..., b_i(-max_level) }`.
    pub fn truncation(&self, i: usize, max_level: u64) -> Vec<ElementaryElement> {
        (0..=max_level).map(|n| ElementaryElement::new(i, n)).collect()
    }
}

impl Crystal for ElementaryCrystal {
    type Element = ElementaryElement;

    fn datum(&self) -> &CartanDatum {
        &self.datum
    }
    fn wt(&self, b: &ElementaryElement) -> Weight {
        self.datum.simple_root(b.index).scaled(-(b.level as i64))
    }
    fn eps(&self, i: usize, b: &ElementaryElement) -> ExtInt {
        elem_stats(&self.datum, *b, i).1
    }
    fn phi(&self, i: usize, b: &ElementaryElement) -> ExtInt {
        elem_stats(&self.datum, *b, i).2
    }
    fn e(&self, i: usize, b: &ElementaryElement) -> Option<ElementaryElement> {
        elem_e(*b, i)
    }
    fn f(&self, i: usize, b: &ElementaryElement) -> Option<ElementaryElement> {
        elem_f(*b, i)
    }
    fn key(&self, b: &ElementaryElement) -> String {
        if b.level == 0 {
            format!("b{}(0)", b.index + 1)
        } else {
            format!("b{}(-{})", b.index + 1, b.level)
        }
    }
}
