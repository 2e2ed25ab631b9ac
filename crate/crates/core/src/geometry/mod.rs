//! Pointwise invariants of representations of a doubled quiver.
//!
//! A representation attaches a rational matrix `B_h : V_out(h) -> V_in(h)`
//! to every arrow of `H`. Everything here is exact.

pub mod linalg;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Deserialize;
use thiserror::Error;

use crate::cartan::{CartanError, Orientation, Quiver, QuiverSpec};
pub use linalg::{Matrix, Subspace, Q};

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("arrow h{arrow}: matrix is {found:?}, expected {expected:?}")]
    ShapeMismatch { arrow: usize, expected: (usize, usize), found: (usize, usize) },
    #[error("dimension vector has {found} entries for {expected} vertices")]
    DimsLength { expected: usize, found: usize },
    #[error("representations live on different quivers or dimension vectors")]
    Incompatible,
    #[error("unknown arrow key {0:?}; expected h1..h{1}")]
    UnknownArrow(String, usize),
    #[error("bad rational entry {0:?}")]
    BadEntry(String),
    #[error("total dimension {total} exceeds the flag search bound {bound}")]
    DimensionExceeded { total: usize, bound: usize },
    #[error("loop h{arrow} at vertex {vertex} has eigenvalues outside Q; the flag search works over Q only")]
    NonRationalSpectrum { vertex: usize, arrow: usize },
    #[error("internal inconsistency at vertex {vertex}: {detail}")]
    InternalInconsistency { vertex: usize, detail: String },
    #[error(transparent)]
    Quiver(#[from] CartanError),
    #[error("malformed representation file: {0}")]
    Json(#[from] serde_json::Error),
}

pub const DEFAULT_FLAG_BOUND: usize = 6;

/// `B = (B_h)_{h in H}` with `B_h` of shape `dim V_in(h) x dim V_out(h)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuiverRep {
    quiver: Quiver,
    dims: Vec<usize>,
    mats: Vec<Matrix>,
    vertex_names: Vec<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RepFile {
    quiver: QuiverSpec,
    dims: Vec<usize>,
    #[serde(default)]
    mats: BTreeMap<String, Vec<Vec<serde_json::Value>>>,
}

fn parse_entry(v: &serde_json::Value) -> Result<Q, GeometryError> {
    let bad = || GeometryError::BadEntry(v.to_string());
    match v {
        serde_json::Value::Number(n) => n.as_i64().map(linalg::q).ok_or_else(bad),
        serde_json::Value::String(s) => {
            let s = s.trim();
            let (num, den) = s.split_once('/').unwrap_or((s, "1"));
            let num: BigInt = num.trim().parse().map_err(|_| bad())?;
            let den: BigInt = den.trim().parse().map_err(|_| bad())?;
            if den.is_zero() {
                return Err(bad());
            }
            Ok(Q::new(num, den))
        }
        _ => Err(bad()),
    }
}

impl QuiverRep {
    pub fn new(quiver: Quiver, dims: Vec<usize>, mats: Vec<Matrix>) -> Result<Self, GeometryError> {
        let names = (1..=quiver.vertex_count()).map(|k| k.to_string()).collect();
        Self::with_names(quiver, dims, mats, names)
    }

    pub fn with_names(quiver: Quiver, dims: Vec<usize>, mats: Vec<Matrix>, vertex_names: Vec<String>) -> Result<Self, GeometryError> {
        if dims.len() != quiver.vertex_count() || vertex_names.len() != quiver.vertex_count() {
            return Err(GeometryError::DimsLength { expected: quiver.vertex_count(), found: dims.len() });
        }
        if mats.len() != quiver.arrows().len() {
            return Err(GeometryError::Incompatible);
        }
        for (h, (a, m)) in quiver.arrows().iter().zip(&mats).enumerate() {
            let expected = (dims[a.target], dims[a.source]);
            if m.shape() != expected {
                return Err(GeometryError::ShapeMismatch { arrow: h + 1, expected, found: m.shape() });
            }
        }
        Ok(Self { quiver, dims, mats, vertex_names })
    }

    /// The zero representation.
    pub fn zero(quiver: Quiver, dims: Vec<usize>) -> Result<Self, GeometryError> {
        if dims.len() != quiver.vertex_count() {
            return Err(GeometryError::DimsLength { expected: quiver.vertex_count(), found: dims.len() });
        }
        let mats = quiver.arrows().iter().map(|a| Matrix::zeros(dims[a.target], dims[a.source])).collect();
        Self::new(quiver, dims, mats)
    }

    /// Parses the JSON file format. Arrows are keyed `h1..h2m` in the
    /// order of [`Quiver::from_omega`]; absent arrows carry zero matrices.
    pub fn from_json(text: &str) -> Result<Self, GeometryError> {
        let file: RepFile = serde_json::from_str(text)?;
        let quiver = Quiver::from_spec(&file.quiver)?;
        let n = quiver.vertex_count();
        let names = file.quiver.vertex_names.clone().unwrap_or_else(|| (1..=n).map(|k| k.to_string()).collect());
        if names.len() != n {
            return Err(GeometryError::DimsLength { expected: n, found: names.len() });
        }
        let mut rep = Self::zero(quiver, file.dims)?;
        rep.vertex_names = names;
        let count = rep.mats.len();
        for (key, rows) in &file.mats {
            let h = key
                .strip_prefix('h')
                .and_then(|k| k.parse::<usize>().ok())
                .filter(|&k| k >= 1 && k <= count)
                .ok_or_else(|| GeometryError::UnknownArrow(key.clone(), count))?
                - 1;
            let expected = rep.mats[h].shape();
            let cols = rows.first().map_or(expected.1, |r| r.len());
            if rows.len() != expected.0 || cols != expected.1 || rows.iter().any(|r| r.len() != cols) {
                let found = (rows.len(), cols);
                return Err(GeometryError::ShapeMismatch { arrow: h + 1, expected, found });
            }
            let parsed = rows.iter().map(|r| r.iter().map(parse_entry).collect::<Result<Vec<_>, _>>()).collect::<Result<Vec<_>, _>>()?;
            rep.mats[h] = Matrix::from_rows(parsed, cols);
        }
        Ok(rep)
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn mat(&self, h: usize) -> &Matrix {
        &self.mats[h]
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertex_names
    }

    pub fn set_mat(&mut self, h: usize, m: Matrix) -> Result<(), GeometryError> {
        let expected = self.mats[h].shape();
        if m.shape() != expected {
            return Err(GeometryError::ShapeMismatch { arrow: h + 1, expected, found: m.shape() });
        }
        self.mats[h] = m;
        Ok(())
    }

    fn loops_at(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.mats.len()).filter(move |&h| {
            let a = self.quiver.arrow(h);
            a.source == i && a.target == i
        })
    }

    fn is_bar_loop(&self, h: usize) -> bool {
        let a = self.quiver.arrow(h);
        a.is_loop() && a.orientation == Orientation::OmegaBar
    }

    /// `B*`, with `(B*)_h` the transpose of `B_h-bar`.
    pub fn star(&self) -> QuiverRep {
        let mats = (0..self.mats.len()).map(|h| self.mats[self.quiver.bar(h)].transpose()).collect();
        QuiverRep { quiver: self.quiver.clone(), dims: self.dims.clone(), mats, vertex_names: self.vertex_names.clone() }
    }
}

/// `mu_i(B) = sum over h with out(h) = i of eps(h) B_h-bar B_h`.
pub fn moment_map(r: &QuiverRep, i: usize) -> Matrix {
    let mut acc = Matrix::zeros(r.dims[i], r.dims[i]);
    for (h, a) in r.quiver.arrows().iter().enumerate() {
        if a.source != i {
            continue;
        }
        let term = r.mats[r.quiver.bar(h)].mul(&r.mats[h]);
        acc = acc.add(&term.scale(&linalg::q(a.sign())));
    }
    acc
}

pub fn moment_map_check(r: &QuiverRep) -> bool {
    (0..r.quiver.vertex_count()).all(|i| moment_map(r, i).is_zero())
}

/// Regular semisimplicity of each `Omega-bar` loop, as `(arrow, verdict)`.
pub fn regular_semisimple_verdicts(r: &QuiverRep) -> Vec<(usize, bool)> {
    (0..r.mats.len()).filter(|&h| r.is_bar_loop(h)).map(|h| (h, r.mats[h].char_poly().is_squarefree())).collect()
}

pub fn regular_semisimple_check(r: &QuiverRep) -> bool {
    regular_semisimple_verdicts(r).iter().all(|&(_, ok)| ok)
}

/// A complete `I`-graded flag: `F_k` is spanned by the first `k` steps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlagWitness {
    pub steps: Vec<(usize, Vec<Q>)>,
}

impl FlagWitness {
    /// `F_k` at vertex `i`.
    pub fn subspace(&self, r: &QuiverRep, k: usize, i: usize) -> Subspace {
        Subspace::span(r.dims[i], self.steps[..k].iter().filter(|(v, _)| *v == i).map(|(_, x)| x.clone()))
    }

    /// Checks the flag conditions directly, independently of the search.
    pub fn is_valid_for(&self, r: &QuiverRep) -> bool {
        if self.steps.len() != r.total_dim() {
            return false;
        }
        let n = r.quiver.vertex_count();
        let flag: Vec<Vec<Subspace>> = (0..=self.steps.len()).map(|k| (0..n).map(|i| self.subspace(r, k, i)).collect()).collect();
        for k in 1..flag.len() {
            let grew: usize = (0..n).map(|i| flag[k][i].dim() - flag[k - 1][i].dim()).sum();
            if grew != 1 {
                return false;
            }
            for (h, a) in r.quiver.arrows().iter().enumerate() {
                let img = flag[k][a.source].mapped(&r.mats[h]);
                let bound = if r.is_bar_loop(h) { &flag[k][a.target] } else { &flag[k - 1][a.target] };
                if !bound.contains_subspace(&img) {
                    return false;
                }
            }
        }
        true
    }
}

impl fmt::Display for FlagWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .steps
            .iter()
            .map(|(i, v)| format!("{}:({})", i + 1, v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        f.write_str(&parts.join(" < "))
    }
}

/// Searches for a flag with `B_h(F_k) ⊂ F_k` on `Omega-bar` loops and
/// `B_h(F_k) ⊂ F_{k-1}` on every other arrow.
///
/// The search builds the flag from the bottom. `F_1` must be a line `<v>`
/// at a single vertex with `v` killed by every non-`Omega-bar`-loop arrow
/// and an eigenvector of every `Omega-bar` loop; such a line is a
/// subrepresentation, and the remaining steps form a flag of the quotient.
/// Because all composition series of a representation share their factors,
/// any admissible first line extends whenever some flag exists, so the
/// greedy choice never needs to backtrack. Candidates are tried by vertex,
/// then by increasing eigenvalue, which makes the witness deterministic.
pub fn flag_exists(r: &QuiverRep, bound: usize) -> Result<Option<FlagWitness>, GeometryError> {
    let total = r.total_dim();
    if total > bound {
        return Err(GeometryError::DimensionExceeded { total, bound });
    }
    let mut cur = r.clone();
    // columns of lifts[i] map current coordinates back to representatives in V_i
    let mut lifts: Vec<Matrix> = r.dims.iter().map(|&d| Matrix::identity(d)).collect();
    let mut steps = Vec::with_capacity(total);
    while cur.total_dim() > 0 {
        let Some((i, v)) = admissible_line(&cur)? else { return Ok(None) };
        steps.push((i, lifts[i].apply(&v)));
        let (keep, proj) = quotient_maps(&v);
        for (h, a) in cur.quiver.arrows().iter().enumerate() {
            let mut m = cur.mats[h].clone();
            if a.target == i {
                m = proj.mul(&m);
            }
            if a.source == i {
                m = m.mul(&keep);
            }
            cur.mats[h] = m;
        }
        cur.dims[i] -= 1;
        lifts[i] = lifts[i].mul(&keep);
    }
    Ok(Some(FlagWitness { steps }))
}

/// For `v != 0` in `Q^d`, returns `(S, P)` where the columns of `S` complete
/// `v` to a basis and `P` reads off the coordinates of `V / <v>` in it.
fn quotient_maps(v: &[Q]) -> (Matrix, Matrix) {
    let d = v.len();
    let pivot = v.iter().position(|x| !x.is_zero()).expect("nonzero vector");
    let mut cols = vec![v.to_vec()];
    cols.extend((0..d).filter(|&k| k != pivot).map(|k| linalg::unit(d, k)));
    let t = Matrix::from_columns(&cols, d);
    let t_inv = t.inverse().expect("completed basis is invertible");
    let rest: Vec<usize> = (1..d).collect();
    (t.select(&(0..d).collect::<Vec<_>>(), &rest), t_inv.select(&rest, &(0..d).collect::<Vec<_>>()))
}

fn admissible_line(r: &QuiverRep) -> Result<Option<(usize, Vec<Q>)>, GeometryError> {
    let mut irrational = None;
    for i in 0..r.quiver.vertex_count() {
        let d = r.dims[i];
        if d == 0 {
            continue;
        }
        let mut base = Subspace::full(d);
        let mut bar_loops = Vec::new();
        for (h, a) in r.quiver.arrows().iter().enumerate() {
            if a.source != i {
                continue;
            }
            if r.is_bar_loop(h) {
                bar_loops.push(h);
            } else {
                base = base.intersect(&Subspace::kernel(&r.mats[h]));
            }
        }
        if base.dim() == 0 {
            continue;
        }
        let mut spectra = Vec::with_capacity(bar_loops.len());
        for &h in &bar_loops {
            let poly = r.mats[h].char_poly();
            let roots = poly.rational_roots().unwrap_or_default();
            let split = roots.iter().fold(poly.clone(), |p, x| p.divide_out_root(x));
            if split.degree() > 0 && irrational.is_none() {
                irrational = Some((i, h));
            }
            spectra.push(roots);
        }
        if let Some(v) = common_eigenvector(r, d, &base, &bar_loops, &spectra, 0) {
            return Ok(Some((i, v)));
        }
    }
    match irrational {
        Some((vertex, arrow)) => Err(GeometryError::NonRationalSpectrum { vertex, arrow: arrow + 1 }),
        None => Ok(None),
    }
}

fn common_eigenvector(r: &QuiverRep, d: usize, space: &Subspace, loops: &[usize], spectra: &[Vec<Q>], k: usize) -> Option<Vec<Q>> {
    if space.dim() == 0 {
        return None;
    }
    if k == loops.len() {
        return space.basis().first().cloned();
    }
    for lambda in &spectra[k] {
        let shifted = r.mats[loops[k]].add(&Matrix::identity(d).scale(&-lambda.clone()));
        let next = space.intersect(&Subspace::kernel(&shifted));
        if let Some(v) = common_eigenvector(r, d, &next, loops, spectra, k + 1) {
            return Some(v);
        }
    }
    None
}

/// `C<B>_i . sum of Im B_h` over non-loop arrows into `i`: the smallest
/// subspace of `V_i` containing the images and stable under every loop at `i`.
pub fn eps_closure(r: &QuiverRep, i: usize) -> Subspace {
    let d = r.dims[i];
    let mut w = Subspace::zero(d);
    for (h, a) in r.quiver.arrows().iter().enumerate() {
        if a.target == i && a.source != i {
            w = w.sum(&Subspace::image(&r.mats[h]));
        }
    }
    let loops: Vec<usize> = r.loops_at(i).collect();
    loop {
        let mut next = w.clone();
        for &h in &loops {
            next = next.sum(&w.mapped(&r.mats[h]));
        }
        if next.dim() == w.dim() {
            return w;
        }
        w = next;
    }
}

/// `eps_i(B) = codim_{V_i} C<B>_i . sum Im B_h`.
pub fn eps_point(r: &QuiverRep, i: usize) -> usize {
    r.dims[i] - eps_closure(r, i).dim()
}

/// The largest subspace of the kernels of the non-loop arrows out of `i`
/// that is stable under every loop at `i`.
pub fn eps_star_kernel(r: &QuiverRep, i: usize) -> Subspace {
    let d = r.dims[i];
    let mut k = Subspace::full(d);
    for (h, a) in r.quiver.arrows().iter().enumerate() {
        if a.source == i && a.target != i {
            k = k.intersect(&Subspace::kernel(&r.mats[h]));
        }
    }
    let loops: Vec<usize> = r.loops_at(i).collect();
    loop {
        let mut next = k.clone();
        for &h in &loops {
            next = next.intersect(&k.preimage(&r.mats[h]));
        }
        if next.dim() == k.dim() {
            return k;
        }
        k = next;
    }
}

/// `eps_i*(B) = eps_i(B*)`, cross-checked against the kernel formula.
pub fn eps_star_point(r: &QuiverRep, i: usize) -> Result<usize, GeometryError> {
    let via_star = eps_point(&r.star(), i);
    let direct = eps_star_kernel(r, i).dim();
    if via_star != direct {
        return Err(GeometryError::InternalInconsistency {
            vertex: i,
            detail: format!("eps(B*) = {via_star} but the kernel formula gives {direct}"),
        });
    }
    Ok(via_star)
}

/// `omega(B, B') = sum over h of eps(h) Tr(B_h-bar B'_h)`.
pub fn symplectic_form(r1: &QuiverRep, r2: &QuiverRep) -> Result<Q, GeometryError> {
    if r1.quiver != r2.quiver || r1.dims != r2.dims {
        return Err(GeometryError::Incompatible);
    }
    let mut acc = Q::zero();
    for (h, a) in r1.quiver.arrows().iter().enumerate() {
        let t = r1.mats[r1.quiver.bar(h)].mul(&r2.mats[h]).trace();
        acc += t * linalg::q(a.sign());
    }
    Ok(acc)
}

/// Whether `(x, y)` and `B_1-bar (x, y)` span the plane, for the
/// two-vertex family with `B_1-bar = [[l, a], [0, m]]` and `B_2-bar = (x, y)^T`.
pub fn loop_and_edge_generic(l: &Q, m: &Q, a: &Q, x: &Q, y: &Q) -> bool {
    let det = y * ((m - l) * x - a * y);
    !det.is_zero() && l != m
}

/// The two-vertex representation with two loops at vertex 1 and one arrow
/// in each direction, `B_1 = B_2 = 0`.
pub fn loop_and_edge_rep(l: &Q, m: &Q, a: &Q, x: &Q, y: &Q) -> QuiverRep {
    let quiver = Quiver::from_omega(2, &[(0, 0), (0, 1)]).expect("valid quiver");
    let mut rep = QuiverRep::zero(quiver, vec![2, 1]).expect("valid dims");
    rep.vertex_names = vec!["i".into(), "j".into()];
    let zero = Q::zero();
    rep.mats[2] = Matrix::from_rows(vec![vec![l.clone(), a.clone()], vec![zero, m.clone()]], 2);
    rep.mats[3] = Matrix::from_rows(vec![vec![x.clone()], vec![y.clone()]], 1);
    rep
}
