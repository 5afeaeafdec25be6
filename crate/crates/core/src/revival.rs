//! Fractional revival on a vertex pair: the spectral characterization
//! (parallel, commutative, quadratic classes, gcd condition), the direct
//! `U(t)` oracle, and balanced revival.

use std::f64::consts::PI;

use num_integer::Integer;
use num_traits::Zero;
use serde::Serialize;
use serde_json::json;

use crate::arith::{integrality_gap, rational_approx, square_free_part, two_adic_valuation, Rational};
use crate::error::{Error, Result};
use crate::quadratic::{BigRatio, QuadraticValue};
use crate::spectral::{SpectralDecomposition, C64};
use crate::states::{subset_state, support_graph};
use crate::time::WalkTime;

/// Entries below this are treated as zero in projector blocks.
const ZERO_TOL: f64 = 1e-9;
/// Residual allowed in `(E_r)_aa − (E_r)_bb = γ (E_r)_ab`.
const GAMMA_TOL: f64 = 1e-8;
const GAMMA_MAX_DEN: i64 = 1_000_000;
const GAMMA_RESIDUAL: f64 = 1e-7;
/// Distance to the nearest integer accepted as integral.
const INT_TOL: f64 = 1e-7;
/// Default amplitude tolerance of the direct oracle.
pub const ORACLE_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    None,
    ImproperOnly,
    ProperFr,
    ProperPst,
}

impl Verdict {
    pub fn is_proper(self) -> bool {
        matches!(self, Verdict::ProperFr | Verdict::ProperPst)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::None => "none",
            Verdict::ImproperOnly => "improper-only",
            Verdict::ProperFr => "proper-FR",
            Verdict::ProperPst => "proper-PST",
        }
    }
}

/// Measured behaviour of `U(t)` on the rows of `a` and `b`.
#[derive(Clone, Debug, PartialEq)]
pub struct FrObservation {
    pub t: f64,
    /// `max_{v ∉ {a,b}} max(|U_av|, |U_bv|)`.
    pub off_block_norm: f64,
    pub cross_amplitude: f64,
    /// `[[U_aa, U_ab], [U_ba, U_bb]]`.
    pub block: [[C64; 2]; 2],
}

impl FrObservation {
    pub fn is_fr(&self, tol: f64) -> bool {
        self.off_block_norm < tol
    }

    pub fn is_proper(&self, tol: f64) -> bool {
        self.is_fr(tol) && self.cross_amplitude > tol
    }

    /// Block equal to a phase times the identity.
    pub fn is_scalar(&self, tol: f64) -> bool {
        self.is_fr(tol) && self.cross_amplitude < tol && (self.block[0][0] - self.block[1][1]).norm() < tol
    }

    /// Zero diagonal on the block: perfect state transfer between `a` and `b`.
    pub fn is_pst(&self, tol: f64) -> bool {
        self.is_fr(tol) && self.block[0][0].norm() < tol && self.block[1][1].norm() < tol
    }

    pub fn to_json(&self) -> serde_json::Value {
        let c = |z: C64| json!([z.re, z.im]);
        json!({
            "t": self.t,
            "off_block_norm": self.off_block_norm,
            "cross_amplitude": self.cross_amplitude,
            "block": [[c(self.block[0][0]), c(self.block[0][1])], [c(self.block[1][0]), c(self.block[1][1])]],
        })
    }
}

pub fn verify_fr_at(d: &SpectralDecomposition, a: usize, b: usize, t: f64) -> Result<FrObservation> {
    d.check_vertex(a)?;
    d.check_vertex(b)?;
    let ra = d.transition_row(t, a);
    let rb = d.transition_row(t, b);
    let off_block_norm = (0..d.n())
        .filter(|&v| v != a && v != b)
        .fold(0.0f64, |m, v| m.max(ra[v].norm()).max(rb[v].norm()));
    Ok(FrObservation {
        t,
        off_block_norm,
        cross_amplitude: ra[b].norm(),
        block: [[ra[a], ra[b]], [rb[a], rb[b]]],
    })
}

/// `(E_r)_aa = (E_r)_bb` for every `r`.
pub fn are_cospectral(d: &SpectralDecomposition, a: usize, b: usize, tol: f64) -> Result<bool> {
    d.check_vertex(a)?;
    d.check_vertex(b)?;
    Ok((0..d.len()).all(|r| {
        let bl = d.block(r, a, b);
        (bl[0][0] - bl[1][1]).abs() < tol
    }))
}

/// Every block `(E_r)_{{a,b},{a,b}}` is singular (rank at most one).
pub fn are_parallel(d: &SpectralDecomposition, a: usize, b: usize, tol: f64) -> Result<bool> {
    d.check_vertex(a)?;
    d.check_vertex(b)?;
    Ok((0..d.len()).all(|r| {
        let bl = d.block(r, a, b);
        (bl[0][0] * bl[1][1] - bl[0][1] * bl[1][0]).abs() < tol
    }))
}

/// The rational `γ` with `(E_r)_aa − (E_r)_bb = γ (E_r)_ab` for every `r`,
/// if one exists. Orientation matters: swapping `a` and `b` negates `γ`.
pub fn fractional_cospectrality(d: &SpectralDecomposition, a: usize, b: usize, tol: f64) -> Result<Option<Rational>> {
    d.check_vertex(a)?;
    d.check_vertex(b)?;
    if !d.is_connected() {
        return Err(Error::Disconnected);
    }
    let blocks: Vec<[[f64; 2]; 2]> = (0..d.len()).map(|r| d.block(r, a, b)).collect();
    let pivot = blocks
        .iter()
        .max_by(|x, y| x[0][1].abs().total_cmp(&y[0][1].abs()))
        .filter(|bl| bl[0][1].abs() > ZERO_TOL);
    let Some(pivot) = pivot else {
        // U(t)_ab vanishes for all t; only γ = 0 can hold, and then only for
        // cospectral vertices
        return Ok(blocks.iter().all(|bl| (bl[0][0] - bl[1][1]).abs() < tol).then(Rational::zero));
    };
    let gamma = (pivot[0][0] - pivot[1][1]) / pivot[0][1];
    if blocks.iter().any(|bl| ((bl[0][0] - bl[1][1]) - gamma * bl[0][1]).abs() > tol) {
        return Ok(None);
    }
    Ok(rational_approx(gamma, GAMMA_MAX_DEN, GAMMA_RESIDUAL))
}

#[derive(Clone, Debug, PartialEq)]
pub struct RevivalCertificate {
    pub pair: (usize, usize),
    pub parallel: bool,
    pub commutative: bool,
    pub gamma: Option<Rational>,
    pub cospectral: bool,
    /// Eigenvalue indices with `(E_r)_ab > 0`.
    pub c_plus: Vec<usize>,
    /// Eigenvalue indices with `(E_r)_ab < 0`.
    pub c_minus: Vec<usize>,
    pub c_plus_values: Vec<f64>,
    pub c_minus_values: Vec<f64>,
    /// Classes are quadratic with within-class differences in `Z·√Δ`.
    pub quadratic_classes: bool,
    pub delta: Option<u64>,
    pub g: Option<u64>,
    pub tau_min: Option<f64>,
    pub tau_exact: Option<WalkTime>,
    pub verdict: Verdict,
    /// `(v₂(ρ), v₂(ω))` when the classes are `{±ρ√Δ}` and `{±ω√Δ}`.
    pub two_adic: Option<(u32, u32)>,
    /// `(ρ_j − ω_ℓ)/g` for the largest members of each class, used to find
    /// the times at which the block is scalar.
    pub cross_ratio: Option<f64>,
    pub oracle: Option<FrObservation>,
    pub exact: bool,
    pub warnings: Vec<String>,
}

impl RevivalCertificate {
    pub fn to_json(&self) -> serde_json::Value {
        let gamma = self.gamma.map(|g| format!("{}/{}", g.numer(), g.denom()));
        json!({
            "pair": [self.pair.0, self.pair.1],
            "parallel": self.parallel,
            "commutative": self.commutative,
            "gamma": gamma,
            "cospectral": self.cospectral,
            "C_plus": self.c_plus_values,
            "C_minus": self.c_minus_values,
            "Delta": self.delta,
            "g": self.g,
            "tau_min": self.tau_min,
            "tau_min_exact": self.tau_exact.map(|t| t.to_string()),
            "verdict": self.verdict.as_str(),
            "two_adic": self.two_adic,
            "backing": if self.exact { "exact" } else { "numeric" },
            "oracle": self.oracle.as_ref().map(|o| json!({
                "t": o.t,
                "off_block_norm": o.off_block_norm,
                "cross_amplitude": o.cross_amplitude,
            })),
            "warnings": self.warnings,
        })
    }
}

/// Result of the class analysis (conditions (c) and (d)).
struct ClassFacts {
    delta: Option<u64>,
    g: Option<u64>,
    /// Length of the first revival time, `2π/(g√Δ)` or `π/|θ₊ − θ₋|`.
    tau: f64,
    tau_exact: Option<WalkTime>,
    quadratic: bool,
    proper: bool,
    two_adic: Option<(u32, u32)>,
    cross_ratio: Option<f64>,
}

/// Tests the characterization of proper fractional revival on `{a, b}` and
/// cross-checks the outcome against `U(τ_min)`.
pub fn certify_fr(d: &SpectralDecomposition, a: usize, b: usize) -> Result<RevivalCertificate> {
    d.check_vertex(a)?;
    d.check_vertex(b)?;
    if a == b {
        return Err(Error::InvalidParameter("fractional revival needs two distinct vertices".into()));
    }
    if !d.is_connected() {
        return Err(Error::Disconnected);
    }
    if let Some(cert) = certify_exact(d, a, b)? {
        return Ok(cert);
    }

    let mut warnings = Vec::new();
    let blocks: Vec<[[f64; 2]; 2]> = (0..d.len()).map(|r| d.block(r, a, b)).collect();
    let support: Vec<usize> = (0..d.len()).filter(|&r| blocks[r][0][0] + blocks[r][1][1] > ZERO_TOL).collect();
    let parallel = are_parallel(d, a, b, ZERO_TOL)?;
    let cospectral = are_cospectral(d, a, b, ZERO_TOL)?;
    let gamma = fractional_cospectrality(d, a, b, GAMMA_TOL)?;
    if gamma.is_none() && parallel {
        let consistent = fractional_cospectrality_residual(&blocks) < GAMMA_TOL;
        if consistent {
            warnings.push("γ satisfies the identity but has no small-denominator rational form".into());
        }
    }
    let commutative = gamma.is_some();

    let c_plus: Vec<usize> = support.iter().copied().filter(|&r| blocks[r][0][1] > ZERO_TOL).collect();
    let c_minus: Vec<usize> = support.iter().copied().filter(|&r| blocks[r][0][1] < -ZERO_TOL).collect();
    let values = |idx: &[usize]| idx.iter().map(|&r| d.eigenvalues()[r]).collect::<Vec<f64>>();

    let mut cert = RevivalCertificate {
        pair: (a, b),
        parallel,
        commutative,
        gamma,
        cospectral,
        c_plus_values: values(&c_plus),
        c_minus_values: values(&c_minus),
        c_plus,
        c_minus,
        quadratic_classes: false,
        delta: None,
        g: None,
        tau_min: None,
        tau_exact: None,
        verdict: Verdict::None,
        two_adic: None,
        cross_ratio: None,
        oracle: None,
        exact: false,
        warnings,
    };
    if !(parallel && commutative) || cert.c_plus.is_empty() || cert.c_minus.is_empty() {
        return Ok(cert);
    }
    let facts = numeric_classes(&cert.c_plus_values, &cert.c_minus_values);
    finish(d, &mut cert, facts)?;
    Ok(cert)
}

fn fractional_cospectrality_residual(blocks: &[[[f64; 2]; 2]]) -> f64 {
    let Some(pivot) = blocks.iter().max_by(|x, y| x[0][1].abs().total_cmp(&y[0][1].abs())) else {
        return f64::INFINITY;
    };
    if pivot[0][1].abs() <= ZERO_TOL {
        return f64::INFINITY;
    }
    let gamma = (pivot[0][0] - pivot[1][1]) / pivot[0][1];
    blocks.iter().fold(0.0f64, |m, bl| m.max(((bl[0][0] - bl[1][1]) - gamma * bl[0][1]).abs()))
}

fn finish(d: &SpectralDecomposition, cert: &mut RevivalCertificate, facts: Option<ClassFacts>) -> Result<()> {
    let Some(facts) = facts else {
        return Ok(());
    };
    cert.quadratic_classes = facts.quadratic;
    cert.delta = facts.delta;
    cert.g = facts.g;
    cert.two_adic = facts.two_adic;
    cert.cross_ratio = facts.cross_ratio;
    cert.tau_min = Some(facts.tau);
    cert.tau_exact = facts.tau_exact;
    let obs = verify_fr_at(d, cert.pair.0, cert.pair.1, facts.tau)?;
    cert.verdict = if !facts.proper {
        Verdict::ImproperOnly
    } else if obs.is_pst(ORACLE_TOL) {
        Verdict::ProperPst
    } else {
        Verdict::ProperFr
    };
    cert.oracle = Some(obs);
    Ok(())
}

/// Conditions (c) and (d) from floating-point eigenvalues.
fn numeric_classes(plus: &[f64], minus: &[f64]) -> Option<ClassFacts> {
    let within: Vec<f64> = [plus, minus]
        .iter()
        .flat_map(|class| class.iter().enumerate().flat_map(move |(i, x)| class[i + 1..].iter().map(move |y| (x - y).abs())))
        .collect();

    if within.is_empty() {
        // both classes are single eigenvalues: revival holds at every time and
        // the cross amplitude first peaks at π/|θ₊ − θ₋|
        let gap = (plus[0] - minus[0]).abs();
        let tau = PI / gap;
        let sq = gap * gap;
        let (delta, g, tau_exact) = if integrality_gap(sq) < INT_TOL && sq.round() >= 1.0 {
            let (delta, m) = square_free_part(sq.round() as u64).ok()?;
            (Some(delta), Some(2 * m), WalkTime::pi_over(1, m as i64, delta).ok())
        } else {
            (None, None, None)
        };
        return Some(ClassFacts {
            delta,
            g,
            tau,
            tau_exact,
            quadratic: delta.is_some(),
            proper: true,
            two_adic: None,
            cross_ratio: None,
        });
    }

    let largest = within.iter().copied().fold(0.0f64, f64::max);
    let sq = largest * largest;
    if integrality_gap(sq) >= INT_TOL || sq.round() < 1.0 {
        return None;
    }
    let (delta, _) = square_free_part(sq.round() as u64).ok()?;
    let root = (delta as f64).sqrt();
    let mut g = 0u64;
    for diff in &within {
        let x = diff / root;
        if integrality_gap(x) >= INT_TOL {
            return None;
        }
        g = g.gcd(&(x.round() as u64));
    }
    if g == 0 {
        return None;
    }
    let tau = 2.0 * PI / (g as f64 * root);
    // (d): some cross difference is not a multiple of g√Δ
    let ratio = |x: f64, y: f64| (x - y) / (g as f64 * root);
    let proper = plus.iter().any(|&x| minus.iter().any(|&y| integrality_gap(ratio(x, y)) >= INT_TOL));
    let two_adic = symmetric_class(plus, root).zip(symmetric_class(minus, root)).and_then(|(r, w)| {
        Some((two_adic_valuation(r).ok()?, two_adic_valuation(w).ok()?))
    });
    Some(ClassFacts {
        delta: Some(delta),
        g: Some(g),
        tau,
        tau_exact: WalkTime::pi_over(2, g as i64, delta).ok(),
        quadratic: true,
        proper,
        two_adic,
        cross_ratio: Some(ratio(plus[0], minus[0])),
    })
}

/// `ρ` when the class is `{ρ√Δ, −ρ√Δ}` with `ρ` a positive integer.
fn symmetric_class(class: &[f64], root: f64) -> Option<i64> {
    if class.len() != 2 || (class[0] + class[1]).abs() > INT_TOL {
        return None;
    }
    let rho = class[0].abs() / root;
    (integrality_gap(rho) < INT_TOL && rho.round() >= 1.0).then(|| rho.round() as i64)
}

/// Exact certification for the centers of a stellar decomposition. Returns
/// `None` when the decomposition carries no exact data for this pair.
fn certify_exact(d: &SpectralDecomposition, a: usize, b: usize) -> Result<Option<RevivalCertificate>> {
    let Some(x) = d.exact() else {
        return Ok(None);
    };
    let swap = match (a, b) {
        (0, 1) => false,
        (1, 0) => true,
        _ => return Ok(None),
    };
    let blocks: Vec<[[QuadraticValue; 2]; 2]> = x
        .center_blocks
        .iter()
        .map(|bl| if swap { [[bl[1][1], bl[1][0]], [bl[0][1], bl[0][0]]] } else { *bl })
        .collect();
    let support: Vec<usize> = (0..blocks.len()).filter(|&r| !(blocks[r][0][0] + blocks[r][1][1]).is_zero()).collect();
    let parallel = blocks.iter().all(|bl| (bl[0][0] * bl[1][1] - bl[0][1] * bl[1][0]).is_zero());
    let cospectral = blocks.iter().all(|bl| (bl[0][0] - bl[1][1]).is_zero());

    let mut gamma: Option<QuadraticValue> = None;
    let mut commutative = true;
    for bl in &blocks {
        let diff = bl[0][0] - bl[1][1];
        if bl[0][1].is_zero() {
            commutative &= diff.is_zero();
            continue;
        }
        let ratio = diff / bl[0][1];
        match gamma {
            None => gamma = Some(ratio),
            Some(g) => commutative &= g == ratio,
        }
    }
    let gamma = match gamma {
        Some(g) if commutative => g.as_rational().and_then(to_rational),
        None if commutative && cospectral => Some(Rational::zero()),
        _ => None,
    };
    let commutative = gamma.is_some();

    let c_plus: Vec<usize> = support.iter().copied().filter(|&r| blocks[r][0][1].signum() > 0).collect();
    let c_minus: Vec<usize> = support.iter().copied().filter(|&r| blocks[r][0][1].signum() < 0).collect();
    let values = |idx: &[usize]| idx.iter().map(|&r| d.eigenvalues()[r]).collect::<Vec<f64>>();
    let mut cert = RevivalCertificate {
        pair: (a, b),
        parallel,
        commutative,
        gamma,
        cospectral,
        c_plus_values: values(&c_plus),
        c_minus_values: values(&c_minus),
        c_plus: c_plus.clone(),
        c_minus: c_minus.clone(),
        quadratic_classes: false,
        delta: None,
        g: None,
        tau_min: None,
        tau_exact: None,
        verdict: Verdict::None,
        two_adic: None,
        cross_ratio: None,
        oracle: None,
        exact: true,
        warnings: Vec::new(),
    };
    if !(parallel && commutative) || c_plus.is_empty() || c_minus.is_empty() {
        return Ok(Some(cert));
    }
    let plus: Option<Vec<QuadraticValue>> = c_plus.iter().map(|&r| x.eigenvalues[r]).collect();
    let minus: Option<Vec<QuadraticValue>> = c_minus.iter().map(|&r| x.eigenvalues[r]).collect();
    let facts = match (plus, minus) {
        (Some(p), Some(m)) => exact_classes(&p, &m),
        _ => None,
    };
    finish(d, &mut cert, facts)?;
    Ok(Some(cert))
}

fn to_rational(r: BigRatio) -> Option<Rational> {
    Some(Rational::new(i64::try_from(*r.numer()).ok()?, i64::try_from(*r.denom()).ok()?))
}

/// Writes `v = n√Δ` with `n` an integer, returning `(n, Δ)`; zero has no
/// preferred radicand.
fn integer_multiple_of_root(v: QuadraticValue) -> Option<(i128, Option<u64>)> {
    if v.is_zero() {
        return Some((0, None));
    }
    let (coeff, delta) = match v.as_rational() {
        Some(p) => (p, 1),
        None if v.rational_part().is_zero() => (v.surd_coefficient(), v.radicand()),
        None => return None,
    };
    coeff.is_integer().then(|| (coeff.to_integer(), Some(delta)))
}

fn exact_classes(plus: &[QuadraticValue], minus: &[QuadraticValue]) -> Option<ClassFacts> {
    let mut delta: Option<u64> = None;
    let mut g: i128 = 0;
    for class in [plus, minus] {
        for (i, &x) in class.iter().enumerate() {
            for &y in &class[i + 1..] {
                if !x.compatible(&y) {
                    return None;
                }
                let (n, dl) = integer_multiple_of_root(x - y)?;
                if let Some(dl) = dl {
                    if delta.is_some_and(|d| d != dl) {
                        return None;
                    }
                    delta = Some(dl);
                }
                g = g.gcd(&n);
            }
        }
    }
    // singleton classes have no exact shortcut; the numeric rule applies
    let (delta, g) = (delta?, u64::try_from(g).ok().filter(|&g| g > 0)?);
    let root = QuadraticValue::sqrt_of(delta);
    let g_root = root * QuadraticValue::integer(g as i128);
    // (d): some (θ_j − θ_ℓ)/(g√Δ) is not an integer
    let proper = plus.iter().any(|&x| {
        minus.iter().any(|&y| {
            if !x.compatible(&y) {
                return true;
            }
            let ratio = (x - y) / g_root;
            !ratio.as_rational().is_some_and(|r| r.is_integer())
        })
    });
    let coeff = |v: QuadraticValue| integer_multiple_of_root(v).filter(|(n, dl)| *n > 0 && dl.is_none_or(|dl| dl == delta)).map(|(n, _)| n);
    let sym = |class: &[QuadraticValue]| {
        (class.len() == 2 && (class[0] + class[1]).is_zero()).then(|| coeff(class[0].abs_value())).flatten()
    };
    let two_adic = sym(plus).zip(sym(minus)).and_then(|(r, w)| {
        Some((two_adic_valuation(r as i64).ok()?, two_adic_valuation(w as i64).ok()?))
    });
    let cross = (plus[0] - minus[0]).to_f64() / (g as f64 * (delta as f64).sqrt());
    Some(ClassFacts {
        delta: Some(delta),
        g: Some(g),
        tau: 2.0 * PI / (g as f64 * (delta as f64).sqrt()),
        tau_exact: WalkTime::pi_over(2, g as i64, delta).ok(),
        quadratic: true,
        proper,
        two_adic,
        cross_ratio: Some(cross),
    })
}

trait AbsValue {
    fn abs_value(self) -> Self;
}

impl AbsValue for QuadraticValue {
    fn abs_value(self) -> Self {
        if self.signum() < 0 {
            -self
        } else {
            self
        }
    }
}

/// The support graph of `D_a + D_b` consists of exactly two complete
/// components with loops (the classes) and loopless isolated vertices.
pub fn support_structure_check(d: &SpectralDecomposition, a: usize, b: usize) -> Result<bool> {
    Ok(support_structure(d, a, b)?.is_some())
}

/// The two looped components of the support graph of `D_a + D_b`, when the
/// support has the two-clique shape.
pub fn support_structure(d: &SpectralDecomposition, a: usize, b: usize) -> Result<Option<[Vec<usize>; 2]>> {
    let rho = subset_state(&[a, b], d.n())?;
    let sg = support_graph(d, &rho, None)?;
    let looped = sg.supported_components();
    let isolated_ok = sg
        .components()
        .iter()
        .filter(|c| !looped.contains(c))
        .all(|c| c.len() == 1 && !sg.loops[c[0]]);
    if looped.len() != 2 || !isolated_ok || !looped.iter().all(|c| sg.is_complete_with_loops(c)) {
        return Ok(None);
    }
    Ok(Some([looped[0].clone(), looped[1].clone()]))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BalancedKind {
    NotBalanced,
    BalancedPstRoute,
    BalancedNoncospectralRoute,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BalancedAnalysis {
    pub kind: BalancedKind,
    /// A time with `|U_aa| = |U_ab| = 1/√2`.
    pub witness: Option<f64>,
    /// For the cospectral route, the PST time `2·witness` and whether `U`
    /// confirms transfer there.
    pub pst_time: Option<f64>,
    pub pst_confirmed: bool,
    /// Multiples `j·τ_min` examined.
    pub multiples_checked: u64,
}

const BALANCED_TOL: f64 = 1e-8;
const MAX_PERIOD_MULTIPLE: i64 = 1_000;
const PERIOD_TOL: f64 = 1e-9;

/// Searches for balanced fractional revival on a pair with proper revival
/// and a periodic `{a, b}` block.
pub fn balanced_fr_analysis(d: &SpectralDecomposition, a: usize, b: usize) -> Result<BalancedAnalysis> {
    let cert = certify_fr(d, a, b)?;
    if !cert.verdict.is_proper() {
        return Err(Error::Precondition(format!(
            "balanced revival needs proper fractional revival on {{{a},{b}}}, verdict is {}",
            cert.verdict.as_str()
        )));
    }
    let tau = cert.tau_min.expect("proper verdict has a time");
    let gamma = cert.gamma.expect("proper verdict is commutative");
    let target = std::f64::consts::FRAC_1_SQRT_2;
    let is_balanced = |o: &FrObservation| {
        o.is_fr(BALANCED_TOL)
            && (o.block[0][0].norm() - target).abs() < BALANCED_TOL
            && (o.cross_amplitude - target).abs() < BALANCED_TOL
    };

    let (witness, checked) = match cert.cross_ratio {
        None => {
            // single-eigenvalue classes: solve cos(t(θ₊ − θ₋)) = −γ²/4
            let g = crate::arith::rational_to_f64(&gamma);
            let c = -g * g / 4.0;
            let witness = (c >= -1.0).then(|| {
                let gap = (cert.c_plus_values[0] - cert.c_minus_values[0]).abs();
                c.acos() / gap
            });
            let witness = witness.filter(|&t| verify_fr_at(d, a, b, t).map(|o| is_balanced(&o)).unwrap_or(false));
            (witness, 0)
        }
        Some(ratio) => {
            let period = rational_approx(ratio, MAX_PERIOD_MULTIPLE, PERIOD_TOL).ok_or_else(|| {
                Error::Precondition(format!("the block on {{{a},{b}}} is not periodic, so no finite search range exists"))
            })?;
            let q = *period.denom() as u64;
            let mut found = None;
            for j in 1..=q {
                let obs = verify_fr_at(d, a, b, j as f64 * tau)?;
                if is_balanced(&obs) {
                    found = Some(j as f64 * tau);
                    break;
                }
            }
            (found, q)
        }
    };

    let Some(t) = witness else {
        return Ok(BalancedAnalysis {
            kind: BalancedKind::NotBalanced,
            witness: None,
            pst_time: None,
            pst_confirmed: false,
            multiples_checked: checked,
        });
    };
    if cert.cospectral {
        let pst = verify_fr_at(d, a, b, 2.0 * t)?;
        Ok(BalancedAnalysis {
            kind: BalancedKind::BalancedPstRoute,
            witness: Some(t),
            pst_time: Some(2.0 * t),
            pst_confirmed: pst.is_pst(1e-7),
            multiples_checked: checked,
        })
    } else {
        Ok(BalancedAnalysis {
            kind: BalancedKind::BalancedNoncospectralRoute,
            witness: Some(t),
            pst_time: None,
            pst_confirmed: false,
            multiples_checked: checked,
        })
    }
}

/// `γ = p/q − q/p` for the block at an FR time: returns `p/q`, the larger
/// root of `x² − γx − 1 = 0`.
pub fn block_ratio_from_gamma(gamma: f64) -> f64 {
    (gamma + (gamma * gamma + 4.0).sqrt()) / 2.0
}

impl RevivalCertificate {
    pub fn gamma_f64(&self) -> Option<f64> {
        self.gamma.map(|g| crate::arith::rational_to_f64(&g))
    }
}
