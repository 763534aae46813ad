//! Critical generators, the induced partition of their neighborhood, and
//! the case analysis that turns a critical generator into a good flip.
//!
//! A generator's support splits into its `A²` qubits (the "a" part, of size
//! `Δ_B`) and its `B²` qubits (the "b" part, of size `Δ_A`). Its checks form
//! a grid: each neighboring check touches exactly one qubit of each part.
//! This holds for both error types, so everything here is written once.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::OracleError;
use crate::code::{CssCode, ErrorType};
use crate::decoder::FlipCandidate;
use crate::gf2::Gf2Vector;

const EPS: f64 = 1e-9;

/// Expansion parameters of both sides of the graph. Only the `delta`
/// values affect the search; the `gamma` values are carried for callers
/// that derive weight bounds from the same struct.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpansionParams {
    pub gamma_a: f64,
    pub delta_a: f64,
    pub gamma_b: f64,
    pub delta_b: f64,
}

impl ExpansionParams {
    /// Largest allowed `|χ_a|` and `|χ_b|` for parts of sizes `p_a`, `p_b`.
    fn chi_caps(&self, p_a: usize, p_b: usize) -> (usize, usize) {
        let cap = |delta: f64, p: usize| ((2.0 * delta * p as f64) + EPS).floor().max(0.0) as usize;
        (cap(self.delta_b, p_a).min(p_a), cap(self.delta_a, p_b).min(p_b))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReducedVariables {
    pub x: f64,
    pub x_bar: f64,
    pub z: f64,
    pub y: f64,
    pub y_bar: f64,
    pub t: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalDecomposition {
    pub error_type: ErrorType,
    /// Row of the generator matrix.
    pub generator: usize,
    /// `(b, a)` for a Z-generator, `(α, β)` for an X-check.
    pub label: (usize, usize),
    pub x_a: Vec<usize>,
    pub x_bar_a: Vec<usize>,
    pub chi_a: Vec<usize>,
    pub x_b: Vec<usize>,
    pub x_bar_b: Vec<usize>,
    pub chi_b: Vec<usize>,
    pub reduced: ReducedVariables,
}

fn union(parts: &[&[usize]]) -> Vec<usize> {
    let mut v: Vec<usize> = parts.iter().flat_map(|p| p.iter().copied()).collect();
    v.sort_unstable();
    v
}

impl CriticalDecomposition {
    /// `x_a ∪ x_b`.
    pub fn x(&self) -> Vec<usize> {
        union(&[&self.x_a, &self.x_b])
    }

    /// `x̄_a ∪ x̄_b`.
    pub fn x_bar(&self) -> Vec<usize> {
        union(&[&self.x_bar_a, &self.x_bar_b])
    }

    /// `x_a ∪ x_b ∪ χ_a ∪ χ_b`.
    pub fn x_chi(&self) -> Vec<usize> {
        union(&[&self.x_a, &self.x_b, &self.chi_a, &self.chi_b])
    }

    fn sizes(&self) -> [i64; 6] {
        [
            self.x_a.len() as i64,
            self.x_bar_a.len() as i64,
            self.chi_a.len() as i64,
            self.x_b.len() as i64,
            self.x_bar_b.len() as i64,
            self.chi_b.len() as i64,
        ]
    }
}

/// The nine-way split of a generator's neighborhood. `s_a` is
/// `Γ(x_a) ∩ Γ(χ_b)`, `s_a_bbar` is `Γ(x_a) ∩ Γ(x̄_b)`, `s_bar` is
/// `Γ(χ_a) ∩ Γ(χ_b)`, and so on.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SyndromePartition {
    pub s_a: Vec<usize>,
    pub s_b: Vec<usize>,
    pub s_abar: Vec<usize>,
    pub s_bbar: Vec<usize>,
    pub s_ab: Vec<usize>,
    pub s_a_bbar: Vec<usize>,
    pub s_abar_b: Vec<usize>,
    pub s_abar_bbar: Vec<usize>,
    pub s_bar: Vec<usize>,
}

impl SyndromePartition {
    pub fn parts(&self) -> [&[usize]; 9] {
        [
            &self.s_a,
            &self.s_b,
            &self.s_abar,
            &self.s_bbar,
            &self.s_ab,
            &self.s_a_bbar,
            &self.s_abar_b,
            &self.s_abar_bbar,
            &self.s_bar,
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Part {
    X,
    Bar,
    Chi,
}

/// A generator's support split into parts, and its check grid.
struct Grid {
    generator: usize,
    aa: Vec<usize>,
    bb: Vec<usize>,
    /// `(check, index into aa, index into bb)`, sorted by check.
    cells: Vec<(usize, usize, usize)>,
}

impl Grid {
    fn new(code: &CssCode, ty: ErrorType, g: usize) -> Self {
        let n_aa = code.graph().n_a() * code.graph().n_a();
        let checks = code.checks(ty);
        let (aa, bb): (Vec<usize>, Vec<usize>) = code.generators(ty).row(g).iter().partition(|&&q| q < n_aa);
        let mut hits: HashMap<usize, (Option<usize>, Option<usize>)> = HashMap::new();
        for (i, &q) in aa.iter().enumerate() {
            for &c in checks.col(q) {
                let entry = hits.entry(c).or_default();
                assert!(entry.0.is_none(), "check {c} meets two a-part qubits");
                entry.0 = Some(i);
            }
        }
        for (j, &q) in bb.iter().enumerate() {
            for &c in checks.col(q) {
                let entry = hits.entry(c).or_default();
                assert!(entry.1.is_none(), "check {c} meets two b-part qubits");
                entry.1 = Some(j);
            }
        }
        let mut cells: Vec<(usize, usize, usize)> = hits
            .into_iter()
            .map(|(c, (i, j))| (c, i.expect("grid cell has an a-part qubit"), j.expect("grid cell has a b-part qubit")))
            .collect();
        cells.sort_unstable();
        Self {
            generator: g,
            aa,
            bb,
            cells,
        }
    }
}

fn label_of(code: &CssCode, ty: ErrorType, g: usize) -> (usize, usize) {
    match ty {
        ErrorType::X => code.z_generator(g),
        ErrorType::Z => code.x_check(g),
    }
}

fn check_error_len(code: &CssCode, e: &Gf2Vector) -> Result<(), OracleError> {
    if e.len() != code.n() {
        return Err(crate::gf2::Gf2Error::DimensionMismatch {
            expected: code.n(),
            found: e.len(),
        }
        .into());
    }
    Ok(())
}

/// All subsets of `0..m` with at most `k` elements, by size then
/// lexicographically.
fn small_subsets(m: usize, k: usize) -> Vec<Vec<usize>> {
    fn extend(start: usize, m: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            cur.push(i);
            extend(i + 1, m, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    for size in 0..=k.min(m) {
        extend(0, m, size, &mut Vec::new(), &mut out);
    }
    out
}

fn labels(in_e: &[bool], chi: &[usize]) -> Vec<Part> {
    let mut out: Vec<Part> = in_e.iter().map(|&b| if b { Part::X } else { Part::Bar }).collect();
    for &i in chi {
        out[i] = Part::Chi;
    }
    out
}

/// Searches all generators touching `e` for one admitting a critical
/// decomposition and returns the first found, scanning generators in
/// increasing order and `χ` parts by increasing size.
pub fn find_critical_generator(
    code: &CssCode,
    ty: ErrorType,
    e: &Gf2Vector,
    params: &ExpansionParams,
) -> Result<Option<CriticalDecomposition>, OracleError> {
    check_error_len(code, e)?;
    if e.is_zero() {
        return Err(OracleError::EmptyErrorSet);
    }
    let checks = code.checks(ty);
    let gens = code.generators(ty);
    let candidates: BTreeSet<usize> = e.ones().flat_map(|q| gens.col(q).iter().copied()).collect();
    for g in candidates {
        let grid = Grid::new(code, ty, g);
        let (cap_a, cap_b) = params.chi_caps(grid.aa.len(), grid.bb.len());
        let in_a: Vec<bool> = grid.aa.iter().map(|&q| e.get(q)).collect();
        let in_b: Vec<bool> = grid.bb.iter().map(|&q| e.get(q)).collect();
        let e_count: Vec<usize> = grid
            .cells
            .iter()
            .map(|&(c, _, _)| checks.row(c).iter().filter(|&&q| e.get(q)).count())
            .collect();
        let chi_as = small_subsets(grid.aa.len(), cap_a);
        let chi_bs = small_subsets(grid.bb.len(), cap_b);
        for chi_a in &chi_as {
            let la = labels(&in_a, chi_a);
            for chi_b in &chi_bs {
                let lb = labels(&in_b, chi_b);
                if !la.contains(&Part::X) && !lb.contains(&Part::X) {
                    continue;
                }
                let ok = grid.cells.iter().zip(&e_count).all(|(&(_, i, j), &cnt)| match (la[i], lb[j]) {
                    (Part::X, Part::X) => cnt == 2,
                    (Part::Bar, Part::Bar) => cnt == 0,
                    (Part::X, Part::Bar) | (Part::Bar, Part::X) => cnt == 1,
                    _ => true,
                });
                if ok {
                    return Ok(Some(build(code, ty, &grid, &la, &lb)));
                }
            }
        }
    }
    Ok(None)
}

fn build(code: &CssCode, ty: ErrorType, grid: &Grid, la: &[Part], lb: &[Part]) -> CriticalDecomposition {
    let pick = |qs: &[usize], ls: &[Part], p: Part| -> Vec<usize> {
        qs.iter().zip(ls).filter(|(_, &l)| l == p).map(|(&q, _)| q).collect()
    };
    let (p_a, p_b) = (grid.aa.len() as f64, grid.bb.len() as f64);
    let x_a = pick(&grid.aa, la, Part::X);
    let x_bar_a = pick(&grid.aa, la, Part::Bar);
    let chi_a = pick(&grid.aa, la, Part::Chi);
    let x_b = pick(&grid.bb, lb, Part::X);
    let x_bar_b = pick(&grid.bb, lb, Part::Bar);
    let chi_b = pick(&grid.bb, lb, Part::Chi);
    let reduced = ReducedVariables {
        x: x_a.len() as f64 / p_a,
        x_bar: x_bar_a.len() as f64 / p_a,
        z: chi_a.len() as f64 / p_a,
        y: x_b.len() as f64 / p_b,
        y_bar: x_bar_b.len() as f64 / p_b,
        t: chi_b.len() as f64 / p_b,
    };
    CriticalDecomposition {
        error_type: ty,
        generator: grid.generator,
        label: label_of(code, ty, grid.generator),
        x_a,
        x_bar_a,
        chi_a,
        x_b,
        x_bar_b,
        chi_b,
        reduced,
    }
}

/// Checks every condition of a critical decomposition from first
/// principles, using plain neighborhood sets.
pub(crate) fn validate(
    code: &CssCode,
    e: &Gf2Vector,
    d: &CriticalDecomposition,
    params: Option<&ExpansionParams>,
) -> Result<(), OracleError> {
    let bad = |msg: String| Err(OracleError::InvalidDecomposition(msg));
    check_error_len(code, e)?;
    let ty = d.error_type;
    let gens = code.generators(ty);
    if d.generator >= gens.rows() {
        return bad(format!("generator {} out of range", d.generator));
    }
    let n_aa = code.graph().n_a() * code.graph().n_a();
    let support = gens.row(d.generator);
    let a_part: BTreeSet<usize> = support.iter().copied().filter(|&q| q < n_aa).collect();
    let b_part: BTreeSet<usize> = support.iter().copied().filter(|&q| q >= n_aa).collect();
    let a_parts = [&d.x_a, &d.x_bar_a, &d.chi_a];
    let b_parts = [&d.x_b, &d.x_bar_b, &d.chi_b];
    for (parts, whole, name) in [(a_parts, &a_part, "a"), (b_parts, &b_part, "b")] {
        let total: usize = parts.iter().map(|p| p.len()).sum();
        let joined: BTreeSet<usize> = parts.iter().flat_map(|p| p.iter().copied()).collect();
        if total != joined.len() || &joined != whole {
            return bad(format!("the {name} parts do not partition the {name} half of the generator"));
        }
    }
    if d.x_a.iter().chain(&d.x_b).any(|&q| !e.get(q)) {
        return bad("x_a or x_b holds an error-free qubit".into());
    }
    if d.x_bar_a.iter().chain(&d.x_bar_b).any(|&q| e.get(q)) {
        return bad("x̄_a or x̄_b holds an error qubit".into());
    }
    if d.x_a.is_empty() && d.x_b.is_empty() {
        return bad("x_a and x_b are both empty".into());
    }
    if let Some(p) = params {
        let (cap_a, cap_b) = p.chi_caps(a_part.len(), b_part.len());
        if d.chi_a.len() > cap_a || d.chi_b.len() > cap_b {
            return bad(format!(
                "χ parts of sizes {} and {} exceed the caps {cap_a} and {cap_b}",
                d.chi_a.len(),
                d.chi_b.len()
            ));
        }
    }
    let checks = code.checks(ty);
    let gamma = |qs: &[usize]| -> BTreeSet<usize> { qs.iter().flat_map(|&q| checks.col(q).iter().copied()).collect() };
    let e_neighbors = |c: usize| checks.row(c).iter().filter(|&&q| e.get(q)).count();
    let rules: [(&[usize], &[usize], usize, &str); 4] = [
        (&d.x_a, &d.x_b, 2, "Γ(x_a) ∩ Γ(x_b)"),
        (&d.x_bar_a, &d.x_bar_b, 0, "Γ(x̄_a) ∩ Γ(x̄_b)"),
        (&d.x_a, &d.x_bar_b, 1, "Γ(x_a) ∩ Γ(x̄_b)"),
        (&d.x_bar_a, &d.x_b, 1, "Γ(x̄_a) ∩ Γ(x_b)"),
    ];
    for (p, q, want, name) in rules {
        for c in gamma(p).intersection(&gamma(q)) {
            if e_neighbors(*c) != want {
                return bad(format!("check {c} in {name} has {} error neighbors, not {want}", e_neighbors(*c)));
            }
        }
    }
    Ok(())
}

/// Splits the generator's neighborhood into the nine cells induced by the
/// decomposition, and checks the syndrome values forced on four of them.
pub fn syndrome_partition(
    code: &CssCode,
    e: &Gf2Vector,
    d: &CriticalDecomposition,
) -> Result<SyndromePartition, OracleError> {
    validate(code, e, d, None)?;
    let ty = d.error_type;
    let grid = Grid::new(code, ty, d.generator);
    let part_of = |q: usize, x: &[usize], bar: &[usize]| {
        if x.binary_search(&q).is_ok() {
            Part::X
        } else if bar.binary_search(&q).is_ok() {
            Part::Bar
        } else {
            Part::Chi
        }
    };
    let mut out = SyndromePartition::default();
    for &(c, i, j) in &grid.cells {
        let pa = part_of(grid.aa[i], &d.x_a, &d.x_bar_a);
        let pb = part_of(grid.bb[j], &d.x_b, &d.x_bar_b);
        let cell = match (pa, pb) {
            (Part::X, Part::Chi) => &mut out.s_a,
            (Part::Chi, Part::X) => &mut out.s_b,
            (Part::Bar, Part::Chi) => &mut out.s_abar,
            (Part::Chi, Part::Bar) => &mut out.s_bbar,
            (Part::X, Part::X) => &mut out.s_ab,
            (Part::X, Part::Bar) => &mut out.s_a_bbar,
            (Part::Bar, Part::X) => &mut out.s_abar_b,
            (Part::Bar, Part::Bar) => &mut out.s_abar_bbar,
            (Part::Chi, Part::Chi) => &mut out.s_bar,
        };
        cell.push(c);
    }
    let s = code.syndrome(ty, e)?;
    for (cells, want, name) in [
        (&out.s_ab, false, "S_ab"),
        (&out.s_abar_bbar, false, "S_āb̄"),
        (&out.s_a_bbar, true, "S_ab̄"),
        (&out.s_abar_b, true, "S_āb"),
    ] {
        if let Some(&c) = cells.iter().find(|&&c| s.get(c) != want) {
            return Err(OracleError::InvalidDecomposition(format!(
                "syndrome bit {c} in {name} is {}, expected {}",
                u8::from(s.get(c)),
                u8::from(want)
            )));
        }
    }
    Ok(out)
}

/// Which branch of the case analysis produced the flip.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FlipCase {
    /// `x + y ≤ 2/3`: flip `x_a ∪ x_b`.
    SmallErrorFraction,
    /// `x ≤ x̄` and `y ≤ ȳ`: flip `x_a ∪ x_b`.
    ErrorMinority,
    /// `x > x̄` and `y > ȳ`: flip `x̄_a ∪ x̄_b`.
    ErrorMajority,
    /// Mixed, with `∂ ≥ ∂̄`: flip `x_a ∪ x_b`.
    MixedFlipX,
    /// Mixed, `∂ < ∂̄` and `|x̄| ≤ (Δ_A + Δ_B)/2`: flip `x̄_a ∪ x̄_b`.
    MixedFlipXBar,
    /// Mixed, `∂ < ∂̄` and `|x̄| > (Δ_A + Δ_B)/2`: flip `x_a ∪ x_b ∪ χ_a ∪ χ_b`.
    MixedFlipXChi,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalFlip {
    pub case: FlipCase,
    pub support: Vec<usize>,
    pub candidate: FlipCandidate,
    /// Exact syndrome decrease when flipping `x_a ∪ x_b`.
    pub partial: i64,
    /// Exact syndrome decrease when flipping `x̄_a ∪ x̄_b`.
    pub partial_bar: i64,
}

/// Chooses a flip inside a critical generator by the four-case analysis,
/// checking the size bounds it relies on and the lower bounds on both
/// syndrome decreases against exact recomputation.
pub fn lemma8_flip(code: &CssCode, e: &Gf2Vector, d: &CriticalDecomposition) -> Result<CriticalFlip, OracleError> {
    validate(code, e, d, None)?;
    let ty = d.error_type;
    let [xa, xba, ca, xb, xbb, cb] = d.sizes();
    let (p_a, p_b) = (xa + xba + ca, xb + xbb + cb);
    if 3 * ca > p_a - 1 || 3 * cb > p_b - 1 {
        return Err(OracleError::HypothesisViolation(format!(
            "χ parts too large: 3·{ca} > {} or 3·{cb} > {}",
            p_a - 1,
            p_b - 1
        )));
    }
    if 2 * (xa + xb) > p_a + p_b {
        return Err(OracleError::HypothesisViolation(format!(
            "{} error qubits in a generator of weight {}",
            xa + xb,
            p_a + p_b
        )));
    }

    let base = code.syndrome(ty, e)?.weight() as i64;
    let decrease = |support: &[usize]| -> Result<i64, OracleError> {
        let mut f = e.clone();
        for &q in support {
            f.flip(q);
        }
        Ok(base - code.syndrome(ty, &f)?.weight() as i64)
    };
    let (x, x_bar, x_chi) = (d.x(), d.x_bar(), d.x_chi());
    let partial = decrease(&x)?;
    let partial_bar = decrease(&x_bar)?;
    if decrease(&x_chi)? != partial_bar {
        return Err(OracleError::BoundViolation(
            "x̄ and its complement in the generator change the syndrome differently".into(),
        ));
    }
    let lower = xa * xbb + xba * xb - xa * cb - xb * ca;
    let lower_bar = xa * xbb + xba * xb - xba * cb - xbb * ca;
    if partial < lower {
        return Err(OracleError::BoundViolation(format!("∂ = {partial} below its bound {lower}")));
    }
    if partial_bar < lower_bar {
        return Err(OracleError::BoundViolation(format!("∂̄ = {partial_bar} below its bound {lower_bar}")));
    }

    let case = if 3 * (xa * p_b + xb * p_a) <= 2 * p_a * p_b {
        FlipCase::SmallErrorFraction
    } else if xa <= xba && xb <= xbb {
        FlipCase::ErrorMinority
    } else if xa > xba && xb > xbb {
        FlipCase::ErrorMajority
    } else if partial >= partial_bar {
        FlipCase::MixedFlipX
    } else if 2 * (x_bar.len() as i64) <= p_a + p_b {
        FlipCase::MixedFlipXBar
    } else {
        FlipCase::MixedFlipXChi
    };
    let (support, dec) = match case {
        FlipCase::SmallErrorFraction | FlipCase::ErrorMinority | FlipCase::MixedFlipX => (x, partial),
        FlipCase::ErrorMajority | FlipCase::MixedFlipXBar => (x_bar, partial_bar),
        FlipCase::MixedFlipXChi => (x_chi, partial_bar),
    };
    let size = support.len() as i64;
    if size == 0 || 3 * dec < size {
        return Err(OracleError::BoundViolation(format!(
            "flip of {size} qubits decreases the syndrome by only {dec}"
        )));
    }
    let row = code.generators(ty).row(d.generator);
    let mask = support
        .iter()
        .map(|q| 1u32 << row.binary_search(q).expect("flip inside the generator"))
        .fold(0, |m, b| m | b);
    Ok(CriticalFlip {
        case,
        candidate: FlipCandidate {
            generator: d.generator,
            mask,
            decrease: dec as u32,
            size: size as u32,
        },
        support,
        partial,
        partial_bar,
    })
}
