//! `B(infinity)` realized inside the semi-infinite tensor product
//! `1 ⊗ ... ⊗ B_{i_3} ⊗ B_{i_2} ⊗ B_{i_1}` obtained by iterating the strict
//! embeddings `B(infinity) -> B(infinity) ⊗ B_i` along a fixed index
//! sequence `iota`.
//!
//! An element stores the levels `(a_1, ..., a_L)` of its rightmost `L`
//! factors `b_{i_m}(-a_m)`; every factor further left is at level 0, and the
//! leftmost position holds the highest weight element `1` of `B(infinity)`
//! (the "head", with `eps_i = phi_i = 0` and `e_i 1 = 0`).
//!
//! Before an operator at index `i` is applied, the stored levels are padded
//! with zeros until a zero `i`-slot sits left of every nonzero level. Zero
//! factors are neutral for the statistics, and with that slot in place the
//! `f_i` rule never reaches the head.

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde_json::Value;
use thiserror::Error;

use crate::cartan::{CartanDatum, Weight};
use crate::crystal::{explore, generate_graph, Crystal, CrystalError, CrystalGraph, Exploration, ExtInt, Fin};
use crate::elementary::{elem_stats, ElementaryCrystal, ElementaryElement};
use crate::tensor::{combine, e_side, f_side, ESide, IndexStats, Side, TensorCrystal};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BInfError {
    #[error("invalid index sequence: {0}")]
    Iota(String),
    #[error("internal inconsistency at {key} (i={index}): {detail}", index = .index + 1)]
    InternalInconsistency { key: String, index: usize, detail: String },
    #[error("no e_i acts nontrivially on {key}, which is not the highest weight element")]
    StrippingStuck { key: String },
    #[error(transparent)]
    Crystal(#[from] CrystalError),
}

/// An infinite index sequence: a finite prefix followed by a period
/// repeated forever. Every index occurs in the period.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IotaSequence {
    prefix: Vec<usize>,
    period: Vec<usize>,
}

impl IotaSequence {
    /// `1, 2, ..., n, 1, 2, ...`
    pub fn cyclic(rank: usize) -> Self {
        Self { prefix: Vec::new(), period: (0..rank).collect() }
    }

    /// A periodic sequence (0-based indices).
    pub fn periodic(period: Vec<usize>, rank: usize) -> Result<Self, BInfError> {
        let seq = Self { prefix: Vec::new(), period };
        seq.validate(rank)?;
        Ok(seq)
    }

    /// Parses `"cyclic"` or a JSON array of 1-based indices.
    pub fn from_json(value: &Value, rank: usize) -> Result<Self, BInfError> {
        match value {
            Value::String(s) if s == "cyclic" => Ok(Self::cyclic(rank)),
            Value::Array(items) => {
                let mut period = Vec::with_capacity(items.len());
                for item in items {
                    let k = item
                        .as_u64()
                        .filter(|&k| k >= 1 && k as usize <= rank)
                        .ok_or_else(|| BInfError::Iota(format!("entry {item} is not an index in 1..={rank}")))?;
                    period.push(k as usize - 1);
                }
                Self::periodic(period, rank)
            }
            other => Err(BInfError::Iota(format!("expected \"cyclic\" or an index list, got {other}"))),
        }
    }

    /// Parses the command-line form: `cyclic` or a comma-separated list of
    /// 1-based indices.
    pub fn parse(spec: &str, rank: usize) -> Result<Self, BInfError> {
        let spec = spec.trim();
        if spec == "cyclic" {
            return Ok(Self::cyclic(rank));
        }
        let mut period = Vec::new();
        for part in spec.split(',') {
            let k: usize = part.trim().parse().map_err(|_| BInfError::Iota(format!("cannot parse {part:?}")))?;
            if k == 0 || k > rank {
                return Err(BInfError::Iota(format!("index {k} not in 1..={rank}")));
            }
            period.push(k - 1);
        }
        Self::periodic(period, rank)
    }

    fn validate(&self, rank: usize) -> Result<(), BInfError> {
        if let Some(&bad) = self.prefix.iter().chain(&self.period).find(|&&i| i >= rank) {
            return Err(BInfError::Iota(format!("index {} out of range", bad + 1)));
        }
        for i in 0..rank {
            if !self.period.contains(&i) {
                return Err(BInfError::Iota(format!("index {} never recurs", i + 1)));
            }
        }
        Ok(())
    }

    /// The index at 0-based position `m`.
    pub fn at(&self, m: usize) -> usize {
        if m < self.prefix.len() {
            self.prefix[m]
        } else {
            self.period[(m - self.prefix.len()) % self.period.len()]
        }
    }

    /// Every index occurs in each window of this length past the prefix.
    pub fn recurrence_bound(&self) -> usize {
        self.prefix.len() + self.period.len()
    }

    /// `(i, i_1, i_2, ...)`.
    pub fn with_prefix(&self, i: usize) -> Self {
        let mut prefix = Vec::with_capacity(self.prefix.len() + 1);
        prefix.push(i);
        prefix.extend_from_slice(&self.prefix);
        Self { prefix, period: self.period.clone() }
    }

    fn first_slot_from(&self, start: usize, i: usize) -> usize {
        (start..).find(|&m| self.at(m) == i).expect("every index recurs")
    }
}

impl fmt::Display for IotaSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |v: &[usize]| v.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(",");
        if self.prefix.is_empty() {
            write!(f, "({})*", show(&self.period))
        } else {
            write!(f, "{},({})*", show(&self.prefix), show(&self.period))
        }
    }
}

/// Levels `(a_1, ..., a_L)` with `a_L != 0`; `a_1` belongs to the rightmost
/// factor.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BInfElement(Vec<u64>);

impl BInfElement {
    pub fn new(mut entries: Vec<u64>) -> Self {
        while entries.last() == Some(&0) {
            entries.pop();
        }
        Self(entries)
    }

    pub fn highest_weight() -> Self {
        Self(Vec::new())
    }

    pub fn entries(&self) -> &[u64] {
        &self.0
    }

    pub fn is_highest_weight(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for BInfElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(","))
    }
}

/// Deliberate rule corruptions used to check that the verification suites
/// catch broken implementations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RuleFault {
    /// Replace `-a_ii` by `+a_ii` in the imaginary `e_i` rule.
    GapFlip,
    /// Let `f_i` act on the left factor when `phi_i(b) = eps_i(b')`.
    FTieLeft,
}

/// Outcome of applying `e_i`, with the branch that decided it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ETrace {
    Moved(BInfElement),
    /// The rule selected the head, where `e_i` is zero.
    Head,
    /// The imaginary gap case fired.
    Gap,
    /// The selected factor was already at level 0.
    Exhausted,
}

impl ETrace {
    pub fn into_element(self) -> Option<BInfElement> {
        match self {
            ETrace::Moved(b) => Some(b),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Realization {
    datum: CartanDatum,
    iota: IotaSequence,
    fault: Option<RuleFault>,
    string_bound: usize,
}

impl Realization {
    pub fn new(datum: CartanDatum, iota: IotaSequence) -> Result<Self, BInfError> {
        iota.validate(datum.rank())?;
        Ok(Self { datum, iota, fault: None, string_bound: 10_000 })
    }

    pub fn cyclic(datum: CartanDatum) -> Self {
        let iota = IotaSequence::cyclic(datum.rank());
        Self { datum, iota, fault: None, string_bound: 10_000 }
    }

    pub fn with_fault(mut self, fault: Option<RuleFault>) -> Self {
        self.fault = fault;
        self
    }

    /// Longest real `e_i`-string followed by the consistency check.
    pub fn with_string_bound(mut self, bound: usize) -> Self {
        self.string_bound = bound;
        self
    }

    pub fn iota(&self) -> &IotaSequence {
        &self.iota
    }

    pub fn fault(&self) -> Option<RuleFault> {
        self.fault
    }

    /// The realization along `(i, i_1, i_2, ...)`. Dropping the first level
    /// of one of its elements yields an element of `self`.
    pub fn i_first(&self, i: usize) -> Realization {
        Realization { iota: self.iota.with_prefix(i), ..self.clone() }
    }

    pub fn highest_weight(&self) -> BInfElement {
        BInfElement::highest_weight()
    }

    fn padded(&self, b: &BInfElement, i: usize) -> Vec<u64> {
        let slot = self.iota.first_slot_from(b.0.len(), i);
        let mut levels = b.0.clone();
        levels.resize(slot + 1, 0);
        levels
    }

    fn factor(&self, position: usize, level: u64, i: usize) -> IndexStats {
        let j = self.iota.at(position);
        let (_, eps, phi) = elem_stats(&self.datum, ElementaryElement::new(j, level), i);
        IndexStats { wt_i: -(level as i64) * self.datum.a(i, j), eps, phi }
    }

    /// `stats[k]`: statistics of `1 ⊗ (factors m >= k)`; `stats[len]` is the head.
    fn prefix_stats(&self, levels: &[u64], i: usize) -> Vec<IndexStats> {
        let mut stats = vec![IndexStats::HEAD; levels.len() + 1];
        for k in (0..levels.len()).rev() {
            stats[k] = combine(stats[k + 1], self.factor(k, levels[k], i));
        }
        stats
    }

    pub fn f_op(&self, b: &BInfElement, i: usize) -> BInfElement {
        let mut levels = self.padded(b, i);
        let stats = self.prefix_stats(&levels, i);
        let top = levels.len() - 1;
        let mut k = 0;
        while k < top {
            let right = self.factor(k, levels[k], i);
            let phi_left = stats[k + 1].phi;
            let side = match self.fault {
                Some(RuleFault::FTieLeft) if phi_left == right.eps => Side::Left,
                _ => f_side(phi_left, right.eps),
            };
            match side {
                Side::Right if self.iota.at(k) == i => break,
                // b_j(-a) with j != i has eps_i = -inf and is never selected
                Side::Right => unreachable!("f_{} selected a factor of index {}", i + 1, self.iota.at(k) + 1),
                Side::Left => k += 1,
            }
        }
        // the padding slot at `top` is an i-slot whose left neighbour is the head
        levels[k] += 1;
        BInfElement::new(levels)
    }

    pub fn e_traced(&self, b: &BInfElement, i: usize) -> ETrace {
        let mut levels = self.padded(b, i);
        let stats = self.prefix_stats(&levels, i);
        for k in 0..levels.len() {
            let right = self.factor(k, levels[k], i);
            let phi_left = stats[k + 1].phi;
            let side = match self.fault {
                Some(RuleFault::GapFlip) if self.datum.is_imaginary(i) => {
                    let a_ii = self.datum.a(i, i);
                    if phi_left > right.eps + a_ii {
                        ESide::Left
                    } else if phi_left <= right.eps {
                        ESide::Right
                    } else {
                        ESide::Gap
                    }
                }
                _ => e_side(&self.datum, i, phi_left, right.eps),
            };
            match side {
                ESide::Left => continue,
                ESide::Gap => return ETrace::Gap,
                ESide::Right => {
                    if self.iota.at(k) != i || levels[k] == 0 {
                        return ETrace::Exhausted;
                    }
                    levels[k] -= 1;
                    return ETrace::Moved(BInfElement::new(levels));
                }
            }
        }
        ETrace::Head
    }

    pub fn e_op(&self, b: &BInfElement, i: usize) -> Option<BInfElement> {
        self.e_traced(b, i).into_element()
    }

    pub fn weight(&self, b: &BInfElement) -> Weight {
        let mut w = vec![0; self.datum.rank()];
        for (m, &a) in b.0.iter().enumerate() {
            w[self.iota.at(m)] -= a as i64;
        }
        Weight::new(w)
    }

    /// Statistics of the whole tensor product at index `i`.
    pub fn tensor_stats(&self, b: &BInfElement, i: usize) -> IndexStats {
        self.prefix_stats(&b.0, i)[0]
    }

    /// `(wt, eps_i, phi_i)` as reported by the crystal, after checking that
    /// the tensor product statistics agree with the string length (real `i`)
    /// or with `eps_i = 0` (imaginary `i`).
    pub fn binf_stats(&self, b: &BInfElement, i: usize) -> Result<(Weight, ExtInt, ExtInt), BInfError> {
        let wt = self.weight(b);
        let tensor = self.tensor_stats(b, i);
        let inconsistent = |detail: String| BInfError::InternalInconsistency { key: b.to_string(), index: i, detail };
        let eps = if self.datum.is_real(i) {
            let mut len = 0usize;
            let mut cur = b.clone();
            while let Some(next) = self.e_op(&cur, i) {
                len += 1;
                if len > self.string_bound {
                    return Err(inconsistent(format!("e-string longer than {}", self.string_bound)));
                }
                cur = next;
            }
            if tensor.eps != Fin(len as i64) {
                return Err(inconsistent(format!("tensor eps = {} but e-string length = {len}", tensor.eps)));
            }
            tensor.eps
        } else {
            if tensor.eps != Fin(0) {
                return Err(inconsistent(format!("tensor eps = {} at an imaginary index", tensor.eps)));
            }
            Fin(0)
        };
        let wt_i = self.datum.pairing_unchecked(i, &wt);
        Ok((wt, eps, eps + wt_i))
    }

    /// The `e`-word (smallest index first at each step) that reduces `b` to
    /// the highest weight element, in application order.
    pub fn strip(&self, b: &BInfElement) -> Result<Vec<usize>, BInfError> {
        let mut word = Vec::new();
        let mut cur = b.clone();
        while !cur.is_highest_weight() {
            let step = self.datum.indices().find_map(|i| self.e_op(&cur, i).map(|up| (i, up)));
            match step {
                Some((i, up)) => {
                    word.push(i);
                    cur = up;
                }
                None => return Err(BInfError::StrippingStuck { key: cur.to_string() }),
            }
        }
        Ok(word)
    }

    /// Carries `b` to the element of `target` reached by the same `f`-word.
    pub fn transport(&self, b: &BInfElement, target: &Realization) -> Result<BInfElement, BInfError> {
        let word = self.strip(b)?;
        Ok(word.iter().rev().fold(target.highest_weight(), |cur, &i| target.f_op(&cur, i)))
    }

    /// `eps_i^*(b)`: the level of the rightmost factor of `b` in the
    /// realization along `(i, i_1, i_2, ...)`.
    pub fn eps_star(&self, b: &BInfElement, i: usize) -> Result<u64, BInfError> {
        self.eps_star_via(b, &self.i_first(i))
    }

    /// `eps_i^*(b)` read from an arbitrary realization whose sequence starts
    /// with `i`.
    pub fn eps_star_via(&self, b: &BInfElement, first: &Realization) -> Result<u64, BInfError> {
        let moved = self.transport(b, first)?;
        Ok(moved.0.first().copied().unwrap_or(0))
    }

    /// `Psi_i(b) = e_i^{*c} b ⊗ b_i(-c)` with `c = eps_i^*(b)`.
    pub fn psi_embed(&self, b: &BInfElement, i: usize) -> Result<(BInfElement, ElementaryElement), BInfError> {
        let moved = self.transport(b, &self.i_first(i))?;
        let c = moved.0.first().copied().unwrap_or(0);
        let tail = BInfElement::new(moved.0.iter().skip(1).copied().collect());
        Ok((tail, ElementaryElement::new(i, c)))
    }

    pub fn explore(&self, depth: usize, cap: usize) -> Result<Exploration<BInfElement>, CrystalError> {
        explore(self, &self.highest_weight(), depth, cap)
    }

    pub fn enumerate_to_depth(&self, depth: usize, cap: usize) -> Result<CrystalGraph, CrystalError> {
        generate_graph(self, &self.highest_weight(), depth, cap)
    }

    /// The target crystal of `Psi_i`.
    pub fn psi_target(&self) -> TensorCrystal<&Realization, ElementaryCrystal> {
        TensorCrystal::new(self, ElementaryCrystal::new(self.datum.clone()))
    }
}

impl Crystal for Realization {
    type Element = BInfElement;

    fn datum(&self) -> &CartanDatum {
        &self.datum
    }

    fn wt(&self, b: &BInfElement) -> Weight {
        self.weight(b)
    }

    fn eps(&self, i: usize, b: &BInfElement) -> ExtInt {
        if self.datum.is_real(i) {
            self.tensor_stats(b, i).eps
        } else {
            Fin(0)
        }
    }

    fn phi(&self, i: usize, b: &BInfElement) -> ExtInt {
        self.eps(i, b) + self.wt_i(i, b)
    }

    fn e(&self, i: usize, b: &BInfElement) -> Option<BInfElement> {
        self.e_op(b, i)
    }

    fn f(&self, i: usize, b: &BInfElement) -> Option<BInfElement> {
        Some(self.f_op(b, i))
    }

    fn key(&self, b: &BInfElement) -> String {
        b.to_string()
    }

    fn evaluate(&self, b: &BInfElement) -> Result<(), String> {
        for i in self.datum.indices() {
            self.binf_stats(b, i).map_err(|e| e.to_string())?;
        }
        Ok(())
    }
}

/// Checks that transport from `source` to `target` is an isomorphism of the
/// depth-`depth` crystal graphs, labels included. Returns findings.
pub fn check_realization_independence(
    source: &Realization,
    target: &Realization,
    depth: usize,
    cap: usize,
) -> Result<Vec<String>, BInfError> {
    let a = source.explore(depth, cap)?;
    let b = target.explore(depth, cap)?;
    let mut findings = Vec::new();
    if a.elements.len() != b.elements.len() {
        findings.push(format!("node counts differ: {} vs {}", a.elements.len(), b.elements.len()));
    }
    let position: HashMap<&BInfElement, usize> = b.elements.iter().enumerate().map(|(k, x)| (x, k)).collect();
    let mut image = Vec::with_capacity(a.elements.len());
    let mut hit = HashSet::new();
    for x in &a.elements {
        let y = source.transport(x, target)?;
        match position.get(&y) {
            Some(&k) => {
                if !hit.insert(k) {
                    findings.push(format!("{x} maps onto an already used node {y}"));
                }
                if target.transport(&y, source)? != *x {
                    findings.push(format!("round trip of {x} fails"));
                }
                image.push(Some(k));
            }
            None => {
                findings.push(format!("{x} maps to {y}, outside the target graph"));
                image.push(None);
            }
        }
    }
    let target_edges: HashSet<(usize, usize, usize)> = b.edges.iter().copied().collect();
    let mapped: HashSet<(usize, usize, usize)> = a
        .edges
        .iter()
        .filter_map(|&(s, d, i)| Some((image[s]?, image[d]?, i)))
        .collect();
    if mapped != target_edges {
        findings.push(format!(
            "edge sets differ: {} mapped edges, {} target edges, {} in common",
            mapped.len(),
            target_edges.len(),
            mapped.intersection(&target_edges).count()
        ));
    }
    Ok(findings)
}
