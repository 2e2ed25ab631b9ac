//! Abstract crystals: the crystal contract, axiom and morphism checkers,
//! and breadth-first crystal graph generation.

mod ext;
mod graph;
mod table;

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::hash::Hash;

use thiserror::Error;

use crate::cartan::{CartanDatum, Weight};

pub use ext::{ExtInt, Fin, NegInf};
pub use graph::{explore, export_graph, generate_graph, CrystalGraph, Exploration, GraphEdge, GraphFormat, GraphNode};
pub use table::TableCrystal;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CrystalError {
    #[error("element {key} cannot be evaluated: {reason}")]
    EvaluationFailure { key: String, reason: String },
    #[error("node cap of {cap} exceeded while exploring to depth {depth}")]
    DepthExceeded { cap: usize, depth: usize },
    #[error("unknown graph format {0:?} (expected dot or json)")]
    UnknownFormat(String),
}

/// A crystal: weights, the statistics `eps_i`/`phi_i`, and the Kashiwara
/// operators. `None` plays the role of the zero element.
///
/// Implementations must be pure.
pub trait Crystal {
    type Element: Clone + Eq + Hash + fmt::Debug;

    fn datum(&self) -> &CartanDatum;
    fn wt(&self, b: &Self::Element) -> Weight;
    fn eps(&self, i: usize, b: &Self::Element) -> ExtInt;
    fn phi(&self, i: usize, b: &Self::Element) -> ExtInt;
    fn e(&self, i: usize, b: &Self::Element) -> Option<Self::Element>;
    fn f(&self, i: usize, b: &Self::Element) -> Option<Self::Element>;

    /// Canonical, human-readable key.
    fn key(&self, b: &Self::Element) -> String;

    /// Consistency hook run by the checkers before an element is inspected.
    fn evaluate(&self, _b: &Self::Element) -> Result<(), String> {
        Ok(())
    }

    /// `wt_i(b) = <h_i, wt b>`.
    fn wt_i(&self, i: usize, b: &Self::Element) -> i64 {
        self.datum().pairing_unchecked(i, &self.wt(b))
    }
}

impl<C: Crystal + ?Sized> Crystal for &C {
    type Element = C::Element;

    fn datum(&self) -> &CartanDatum {
        (**self).datum()
    }
    fn wt(&self, b: &Self::Element) -> Weight {
        (**self).wt(b)
    }
    fn eps(&self, i: usize, b: &Self::Element) -> ExtInt {
        (**self).eps(i, b)
    }
    fn phi(&self, i: usize, b: &Self::Element) -> ExtInt {
        (**self).phi(i, b)
    }
    fn e(&self, i: usize, b: &Self::Element) -> Option<Self::Element> {
        (**self).e(i, b)
    }
    fn f(&self, i: usize, b: &Self::Element) -> Option<Self::Element> {
        (**self).f(i, b)
    }
    fn key(&self, b: &Self::Element) -> String {
        (**self).key(b)
    }
    fn evaluate(&self, b: &Self::Element) -> Result<(), String> {
        (**self).evaluate(b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axiom {
    /// `wt(e_i b) = wt b + alpha_i`
    RaiseWeight,
    /// `wt(f_i b) = wt b - alpha_i`
    LowerWeight,
    /// `phi_i = eps_i + <h_i, wt>`
    PhiEpsWeight,
    /// `f_i b = b'` iff `b = e_i b'`
    Inverse,
    /// eps/phi increments under `e_i`
    RaiseStats,
    /// eps/phi increments under `f_i`
    LowerStats,
    /// `phi_i = -inf` forces `e_i b = f_i b = 0`
    NegInfKills,
    /// a real `e_i`-string did not terminate within the bound
    UnboundedString,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axiom::RaiseWeight => "(i)",
            Axiom::LowerWeight => "(ii)",
            Axiom::PhiEpsWeight => "(iii)",
            Axiom::Inverse => "(iv)",
            Axiom::RaiseStats => "(v)",
            Axiom::LowerStats => "(vi)",
            Axiom::NegInfKills => "(vii)",
            Axiom::UnboundedString => "string-bound",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub axiom: Axiom,
    pub element: String,
    /// 0-based index.
    pub index: usize,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "axiom {} at {} (i={}): {}", self.axiom, self.element, self.index + 1, self.detail)
    }
}

/// Checks every crystal axiom on a finite set of elements.
///
/// The inverse axiom is checked only for pairs lying inside `elements`, so
/// truncations of infinite crystals do not produce boundary reports.
pub fn verify_axioms<C: Crystal>(crystal: &C, elements: &[C::Element]) -> Result<Vec<Violation>, CrystalError> {
    let datum = crystal.datum();
    let members: HashSet<&C::Element> = elements.iter().collect();
    let mut out = Vec::new();

    for b in elements {
        evaluate(crystal, b)?;
        let key = crystal.key(b);
        let wt = crystal.wt(b);
        for i in datum.indices() {
            let mut report = |axiom: Axiom, detail: String| {
                out.push(Violation { axiom, element: key.clone(), index: i, detail });
            };
            let eps = crystal.eps(i, b);
            let phi = crystal.phi(i, b);
            let wt_i = datum.pairing_unchecked(i, &wt);
            let a_ii = datum.a(i, i);
            let real = datum.is_real(i);

            if phi != eps + wt_i {
                report(Axiom::PhiEpsWeight, format!("phi = {phi}, eps = {eps}, wt_i = {wt_i}"));
            }

            let raised = crystal.e(i, b);
            let lowered = crystal.f(i, b);

            if phi == NegInf && (raised.is_some() || lowered.is_some()) {
                report(Axiom::NegInfKills, "phi = -inf but an operator is nonzero".into());
            }

            if let Some(up) = &raised {
                evaluate(crystal, up)?;
                let expected = &wt + &datum.simple_root(i);
                if crystal.wt(up) != expected {
                    report(Axiom::RaiseWeight, format!("wt(e b) = {}, expected {expected}", crystal.wt(up)));
                }
                let (de, dp) = if real { (-1, 1) } else { (0, a_ii) };
                let (e2, p2) = (crystal.eps(i, up), crystal.phi(i, up));
                if e2 != eps + de || p2 != phi + dp {
                    report(
                        Axiom::RaiseStats,
                        format!("(eps, phi) {eps},{phi} -> {e2},{p2}, expected {},{}", eps + de, phi + dp),
                    );
                }
                if members.contains(up) && crystal.f(i, up).as_ref() != Some(b) {
                    report(Axiom::Inverse, format!("f(e b) != b for e b = {}", crystal.key(up)));
                }
            }

            if let Some(down) = &lowered {
                evaluate(crystal, down)?;
                let expected = &wt - &datum.simple_root(i);
                if crystal.wt(down) != expected {
                    report(Axiom::LowerWeight, format!("wt(f b) = {}, expected {expected}", crystal.wt(down)));
                }
                let (de, dp) = if real { (1, -1) } else { (0, -a_ii) };
                let (e2, p2) = (crystal.eps(i, down), crystal.phi(i, down));
                if e2 != eps + de || p2 != phi + dp {
                    report(
                        Axiom::LowerStats,
                        format!("(eps, phi) {eps},{phi} -> {e2},{p2}, expected {},{}", eps + de, phi + dp),
                    );
                }
                if members.contains(down) && crystal.e(i, down).as_ref() != Some(b) {
                    report(Axiom::Inverse, format!("e(f b) != b for f b = {}", crystal.key(down)));
                }
            }
        }
    }
    Ok(out)
}

/// Real-index string check: for real `i` with `eps_i(b) = k` finite, `e_i^k b`
/// is nonzero and `e_i^{k+1} b` is zero. Strings longer than `bound` are
/// reported rather than followed.
pub fn check_real_strings<C: Crystal>(crystal: &C, elements: &[C::Element], bound: usize) -> Vec<Violation> {
    let datum = crystal.datum();
    let mut out = Vec::new();
    for b in elements {
        for &i in datum.real_indices() {
            let Fin(k) = crystal.eps(i, b) else { continue };
            let mut cur = b.clone();
            let mut len = 0usize;
            while let Some(next) = crystal.e(i, &cur) {
                len += 1;
                if len > bound {
                    break;
                }
                cur = next;
            }
            let violation = if len > bound {
                Some((Axiom::UnboundedString, format!("string longer than {bound}")))
            } else if len as i64 != k {
                Some((Axiom::RaiseStats, format!("eps = {k} but e-string has length {len}")))
            } else {
                None
            };
            if let Some((axiom, detail)) = violation {
                out.push(Violation { axiom, element: crystal.key(b), index: i, detail });
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MorphismCheck {
    Weight,
    Eps,
    Phi,
    CommutesWithE,
    CommutesWithF,
    Injective,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorphismViolation {
    pub check: MorphismCheck,
    pub element: String,
    pub index: Option<usize>,
    pub detail: String,
}

impl fmt::Display for MorphismViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.index {
            Some(i) => write!(f, "{:?} at {} (i={}): {}", self.check, self.element, i + 1, self.detail),
            None => write!(f, "{:?} at {}: {}", self.check, self.element, self.detail),
        }
    }
}

/// Checks that `psi` is a strict crystal embedding on `elements`: it
/// preserves `wt`, `eps_i`, `phi_i`, commutes with every `e_i` and `f_i`
/// (with `psi(0) = 0`), and is injective on the given set.
pub fn check_strict_morphism<S, T, F>(
    source: &S,
    target: &T,
    psi: F,
    elements: &[S::Element],
) -> Result<Vec<MorphismViolation>, CrystalError>
where
    S: Crystal,
    T: Crystal,
    F: Fn(&S::Element) -> T::Element,
{
    let datum = source.datum();
    let mut out = Vec::new();
    let mut seen: HashMap<T::Element, String> = HashMap::new();
    for b in elements {
        evaluate(source, b)?;
        let key = source.key(b);
        let image = psi(b);
        evaluate(target, &image)?;
        let mut report = |check, index, detail| out.push(MorphismViolation { check, element: key.clone(), index, detail });

        if let Some(prev) = seen.insert(image.clone(), key.clone()) {
            report(MorphismCheck::Injective, None, format!("same image as {prev}"));
        }
        if source.wt(b) != target.wt(&image) {
            report(MorphismCheck::Weight, None, format!("{} -> {}", source.wt(b), target.wt(&image)));
        }
        for i in datum.indices() {
            if source.eps(i, b) != target.eps(i, &image) {
                report(MorphismCheck::Eps, Some(i), format!("{} -> {}", source.eps(i, b), target.eps(i, &image)));
            }
            if source.phi(i, b) != target.phi(i, &image) {
                report(MorphismCheck::Phi, Some(i), format!("{} -> {}", source.phi(i, b), target.phi(i, &image)));
            }
            let lhs = source.e(i, b).map(|x| psi(&x));
            let rhs = target.e(i, &image);
            if lhs != rhs {
                report(MorphismCheck::CommutesWithE, Some(i), format!("psi(e b) = {}, e psi(b) = {}", show(target, &lhs), show(target, &rhs)));
            }
            let lhs = source.f(i, b).map(|x| psi(&x));
            let rhs = target.f(i, &image);
            if lhs != rhs {
                report(MorphismCheck::CommutesWithF, Some(i), format!("psi(f b) = {}, f psi(b) = {}", show(target, &lhs), show(target, &rhs)));
            }
        }
    }
    Ok(out)
}

fn show<C: Crystal>(c: &C, b: &Option<C::Element>) -> String {
    b.as_ref().map_or_else(|| "0".to_string(), |x| c.key(x))
}

fn evaluate<C: Crystal>(c: &C, b: &C::Element) -> Result<(), CrystalError> {
    c.evaluate(b).map_err(|reason| CrystalError::EvaluationFailure { key: c.key(b), reason })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elementary::{ElementaryCrystal, ElementaryElement};

    fn datum() -> CartanDatum {
        CartanDatum::new(vec![vec![2, -1], vec![-1, -2]]).unwrap()
    }

    #[test]
    fn elementary_truncations_satisfy_axioms() {
        let c = ElementaryCrystal::new(datum());
        for i in 0..2 {
            let set: Vec<_> = (0..=5).map(|n| ElementaryElement::new(i, n)).collect();
            assert!(verify_axioms(&c, &set).unwrap().is_empty());
        }
    }

    #[test]
    fn perturbed_phi_is_reported() {
        let c = ElementaryCrystal::new(datum());
        let set: Vec<_> = (0..=5).map(|n| ElementaryElement::new(0, n)).collect();
        let mut table = TableCrystal::tabulate(&c, &set);
        table.perturb_phi(2, 0, 1);
        let report = verify_axioms(&table, &table.elements()).unwrap();
        assert!(!report.is_empty());
        assert!(report.iter().any(|v| v.axiom == Axiom::PhiEpsWeight && v.element == "b1(-2)"));
    }

    #[test]
    fn identity_is_strict() {
        let c = ElementaryCrystal::new(datum());
        let set: Vec<_> = (0..=4).flat_map(|n| [ElementaryElement::new(0, n), ElementaryElement::new(1, n)]).collect();
        assert!(check_strict_morphism(&c, &c, |b| *b, &set).unwrap().is_empty());
    }

    #[test]
    fn weight_shift_is_reported() {
        let c = ElementaryCrystal::new(datum());
        let set = vec![ElementaryElement::new(0, 0)];
        let report = check_strict_morphism(&c, &c, |_| ElementaryElement::new(0, 1), &set).unwrap();
        assert!(report.iter().any(|v| v.check == MorphismCheck::Weight));
    }

    #[test]
    fn collapsing_map_is_not_injective() {
        let c = ElementaryCrystal::new(datum());
        let set: Vec<_> = (0..3).map(|n| ElementaryElement::new(0, n)).collect();
        let report = check_strict_morphism(&c, &c, |_| ElementaryElement::new(0, 0), &set).unwrap();
        assert!(report.iter().any(|v| v.check == MorphismCheck::Injective));
    }

    #[test]
    fn real_strings_match_eps() {
        let c = ElementaryCrystal::new(datum());
        let set: Vec<_> = (0..=6).map(|n| ElementaryElement::new(0, n)).collect();
        assert!(check_real_strings(&c, &set, 100).is_empty());
        let bounded = check_real_strings(&c, &set, 3);
        assert!(bounded.iter().all(|v| v.axiom == Axiom::UnboundedString));
        assert_eq!(bounded.len(), 3);
    }
}
