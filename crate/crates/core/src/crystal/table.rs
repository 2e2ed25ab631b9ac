use std::collections::HashMap;

use super::{Crystal, ExtInt};
use crate::cartan::{CartanDatum, Weight};

#[derive(Debug, Clone)]
struct Row {
    key: String,
    wt: Weight,
    eps: Vec<ExtInt>,
    phi: Vec<ExtInt>,
    e: Vec<Option<usize>>,
    f: Vec<Option<usize>>,
}

/// A finite crystal stored as explicit tables, indexed by position.
///
/// Operators leaving the tabulated set are recorded as zero.
#[derive(Debug, Clone)]
pub struct TableCrystal {
    datum: CartanDatum,
    rows: Vec<Row>,
}

impl TableCrystal {
    pub fn tabulate<C: Crystal>(crystal: &C, elements: &[C::Element]) -> Self {
        let datum = crystal.datum().clone();
        let position: HashMap<&C::Element, usize> = elements.iter().enumerate().map(|(k, b)| (b, k)).collect();
        let lookup = |x: Option<C::Element>| x.and_then(|x| position.get(&x).copied());
        let rows = elements
            .iter()
            .map(|b| Row {
                key: crystal.key(b),
                wt: crystal.wt(b),
                eps: datum.indices().map(|i| crystal.eps(i, b)).collect(),
                phi: datum.indices().map(|i| crystal.phi(i, b)).collect(),
                e: datum.indices().map(|i| lookup(crystal.e(i, b))).collect(),
                f: datum.indices().map(|i| lookup(crystal.f(i, b))).collect(),
            })
            .collect();
        Self { datum, rows }
    }

    pub fn elements(&self) -> Vec<usize> {
        (0..self.rows.len()).collect()
    }

    pub fn perturb_phi(&mut self, element: usize, i: usize, delta: i64) {
        let v = &mut self.rows[element].phi[i];
        *v = *v + delta;
    }

    pub fn perturb_eps(&mut self, element: usize, i: usize, delta: i64) {
        let v = &mut self.rows[element].eps[i];
        *v = *v + delta;
    }

    pub fn set_f(&mut self, element: usize, i: usize, target: Option<usize>) {
        self.rows[element].f[i] = target;
    }
}

impl Crystal for TableCrystal {
    type Element = usize;

    fn datum(&self) -> &CartanDatum {
        &self.datum
    }
    fn wt(&self, b: &usize) -> Weight {
        self.rows[*b].wt.clone()
    }
    fn eps(&self, i: usize, b: &usize) -> ExtInt {
        self.rows[*b].eps[i]
    }
    fn phi(&self, i: usize, b: &usize) -> ExtInt {
        self.rows[*b].phi[i]
    }
    fn e(&self, i: usize, b: &usize) -> Option<usize> {
        self.rows[*b].e[i]
    }
    fn f(&self, i: usize, b: &usize) -> Option<usize> {
        self.rows[*b].f[i]
    }
    fn key(&self, b: &usize) -> String {
        self.rows[*b].key.clone()
    }
}
