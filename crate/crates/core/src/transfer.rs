//! Subset state transfer `U(t) D_S U(−t) = D_T`, its spectral consequences,
//! and polygamous revival on `K₂ □ X(a,k,c)`.

use nalgebra::DMatrix;
use serde::Serialize;
use serde_json::json;

use crate::arith::square_free_part;
use crate::error::{Error, Result};
use crate::graphs::{build_complete, build_stellar, cartesian_product, induced_subgraph, Graph};
use crate::poly::characteristic_polynomial;
use crate::revival::{verify_fr_at, FrObservation};
use crate::spectral::{decompose, SpectralDecomposition, C64};
use crate::states::StateMatrix;
use crate::stellar::{analyze, StellarVerdict};
use crate::time::WalkTime;

/// Default residual tolerance for transfer checks.
pub const TRANSFER_TOL: f64 = 1e-8;

/// Blocks of `U(t)` that vanish under subset transfer, as `(row, col)` cell
/// indices into the ordering `S∖T, S∩T, T∖S, complement`.
pub const ZERO_BLOCKS: [(usize, usize); 8] = [(0, 0), (0, 1), (3, 0), (3, 1), (1, 2), (1, 3), (2, 2), (2, 3)];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SubsetTransferReport {
    #[serde(rename = "S")]
    pub s: Vec<usize>,
    #[serde(rename = "T")]
    pub t_set: Vec<usize>,
    pub time: f64,
    /// `‖U(t) D_S U(−t) − D_T‖∞`
    pub residual: f64,
    pub transfers: bool,
    /// One flag per entry of [`ZERO_BLOCKS`]; empty blocks count as zero.
    pub block_zero_pattern: [bool; 8],
    pub induced_cospectral: bool,
    pub complement_cospectral: bool,
}

impl SubsetTransferReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).unwrap_or(serde_json::Value::Null)
    }
}

fn vertex_set(s: &[usize], n: usize) -> Result<Vec<usize>> {
    if s.is_empty() {
        return Err(Error::InvalidParameter("vertex set must be nonempty".into()));
    }
    let mut v = s.to_vec();
    v.sort_unstable();
    v.dedup();
    if let Some(&bad) = v.iter().find(|&&x| x >= n) {
        return Err(Error::VertexOutOfRange { vertex: bad, n });
    }
    Ok(v)
}

fn complex(m: &DMatrix<f64>) -> DMatrix<C64> {
    m.map(|x| C64::new(x, 0.0))
}

fn max_dev(a: &DMatrix<C64>, b: &DMatrix<f64>) -> f64 {
    a.iter().zip(b.iter()).fold(0.0f64, |m, (x, y)| m.max((x - C64::new(*y, 0.0)).norm()))
}

/// `U m U*`
fn evolve(u: &DMatrix<C64>, m: &DMatrix<f64>) -> DMatrix<C64> {
    u * complex(m) * u.adjoint()
}

fn diagonal_indicator(s: &[usize], n: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(n, n);
    for &v in s {
        m[(v, v)] = 1.0;
    }
    m
}

pub fn detect_subset_transfer(
    x: &Graph,
    d: &SpectralDecomposition,
    s: &[usize],
    t_set: &[usize],
    time: f64,
    tol: f64,
) -> Result<SubsetTransferReport> {
    let n = d.n();
    if x.n() != n {
        return Err(Error::DimensionMismatch { expected: n, found: x.n() });
    }
    let s = vertex_set(s, n)?;
    let t_set = vertex_set(t_set, n)?;
    let u = d.transition_matrix(time);
    let u = u.entries();
    let residual = max_dev(&evolve(u, &diagonal_indicator(&s, n)), &diagonal_indicator(&t_set, n));

    let mut cell = vec![3usize; n];
    for &v in &s {
        cell[v] = 0;
    }
    for &v in &t_set {
        cell[v] = if cell[v] == 0 { 1 } else { 2 };
    }
    let mut block_max = [[0.0f64; 4]; 4];
    for i in 0..n {
        for j in 0..n {
            let b = &mut block_max[cell[i]][cell[j]];
            *b = b.max(u[(i, j)].norm());
        }
    }
    let block_zero_pattern = ZERO_BLOCKS.map(|(r, c)| block_max[r][c] < tol);
    let (induced_cospectral, complement_cospectral) = induced_cospectrality(x, &s, &t_set)?;
    Ok(SubsetTransferReport {
        s,
        t_set,
        time,
        residual,
        transfers: residual < tol,
        block_zero_pattern,
        induced_cospectral,
        complement_cospectral,
    })
}

/// Exact comparison of characteristic polynomials: `X[S]` against `X[T]` and
/// `X[V∖S]` against `X[V∖T]`.
pub fn induced_cospectrality(x: &Graph, s: &[usize], t_set: &[usize]) -> Result<(bool, bool)> {
    let n = x.n();
    let complement = |set: &[usize]| (0..n).filter(|v| !set.contains(v)).collect::<Vec<_>>();
    let poly = |set: &[usize]| -> Result<_> { Ok(characteristic_polynomial(&induced_subgraph(x, set)?.0)) };
    let inner = poly(s)? == poly(t_set)?;
    let outer = poly(&complement(s))? == poly(&complement(t_set))?;
    Ok((inner, outer))
}

fn check_state(d: &SpectralDecomposition, rho: &StateMatrix) -> Result<()> {
    if rho.n() != d.n() {
        return Err(Error::DimensionMismatch { expected: d.n(), found: rho.n() });
    }
    Ok(())
}

/// `E_r ρ₁ E_r = E_r ρ₂ E_r` for every `r`, so both states share an average.
pub fn average_state_equality(d: &SpectralDecomposition, rho1: &StateMatrix, rho2: &StateMatrix, tol: f64) -> Result<bool> {
    check_state(d, rho1)?;
    check_state(d, rho2)?;
    let diff = rho1.entries() - rho2.entries();
    Ok(d.projectors().iter().all(|e| crate::states::max_abs(&(e * &diff * e)) < tol))
}

#[derive(Clone, Debug, PartialEq)]
pub struct InducedTransfer {
    /// `U(t) ρ₁E_rρ₁ U(−t) = ρ₂E_rρ₂`, one flag per eigenvalue.
    pub per_eigenvalue: Vec<bool>,
    /// `U(t) ρ₁² U(−t) = ρ₂²`, evaluated only when every flag above holds.
    pub squares: Option<bool>,
}

impl InducedTransfer {
    pub fn all(&self) -> bool {
        self.per_eigenvalue.iter().all(|&b| b)
    }
}

pub fn induced_transfer_check(
    d: &SpectralDecomposition,
    rho1: &StateMatrix,
    rho2: &StateMatrix,
    t: f64,
    tol: f64,
) -> Result<InducedTransfer> {
    check_state(d, rho1)?;
    check_state(d, rho2)?;
    let u = d.transition_matrix(t);
    let u = u.entries();
    let (p, q) = (rho1.entries(), rho2.entries());
    let per_eigenvalue: Vec<bool> = d
        .projectors()
        .iter()
        .map(|e| max_dev(&evolve(u, &(p * e * p)), &(q * e * q)) < tol)
        .collect();
    let squares = per_eigenvalue
        .iter()
        .all(|&b| b)
        .then(|| max_dev(&evolve(u, &(p * p)), &(q * q)) < tol);
    Ok(InducedTransfer { per_eigenvalue, squares })
}

/// Scan grid for subset transfer when no time is known: multiples of
/// `π/(120√Δ)` over `[0, 2π/√Δ]` when every eigenvalue is an integer
/// multiple of a common `√Δ`, otherwise steps of `π/120` over `[0, 2πn]`.
pub fn default_time_grid(d: &SpectralDecomposition) -> Vec<f64> {
    use std::f64::consts::PI;
    match common_radicand(d.eigenvalues()) {
        Some(delta) => {
            let step = PI / (120.0 * (delta as f64).sqrt());
            (1..=240).map(|j| j as f64 * step).collect()
        }
        None => (1..=240 * d.n()).map(|j| j as f64 * PI / 120.0).collect(),
    }
}

fn common_radicand(eigenvalues: &[f64]) -> Option<u64> {
    let mut delta = None;
    for &theta in eigenvalues {
        let sq = theta * theta;
        if sq < 1e-9 {
            continue;
        }
        let r = sq.round();
        if (sq - r).abs() > 1e-7 {
            return None;
        }
        let (df, _) = square_free_part(r as u64).ok()?;
        match delta {
            None => delta = Some(df),
            Some(prev) if prev != df => return None,
            _ => {}
        }
    }
    Some(delta.unwrap_or(1))
}

/// Evidence of overlapping proper revival on `K₂ □ X(a,k,c)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolygamyWitness {
    pub triple: (u64, u64, u64),
    pub ell: u64,
    pub tau_min: WalkTime,
    pub product_order: usize,
    /// `{(0,0), (1,0)}` at `2τ_min`.
    pub across: ((usize, usize), WalkTime, FrObservation),
    /// `{(0,0), (0,1)}` at `π`.
    pub within: ((usize, usize), WalkTime, FrObservation),
}

impl PolygamyWitness {
    pub fn holds(&self, tol: f64) -> bool {
        self.across.2.is_proper(tol) && self.within.2.is_proper(tol)
    }

    pub fn to_json(&self, tol: f64) -> serde_json::Value {
        let side = |(pair, t, obs): &((usize, usize), WalkTime, FrObservation)| {
            json!({"pair": [pair.0, pair.1], "time": t.to_string(), "observation": obs.to_json(), "proper": obs.is_proper(tol)})
        };
        json!({
            "triple": [self.triple.0, self.triple.1, self.triple.2],
            "ell": self.ell,
            "tau_min": self.tau_min.to_string(),
            "product_order": self.product_order,
            "across_copies": side(&self.across),
            "within_copy": side(&self.within),
            "polygamy": self.holds(tol),
        })
    }
}

pub fn polygamy_witness(a: u64, k: u64, c: u64, ell: u64) -> Result<PolygamyWitness> {
    let info = analyze(a, k, c)?;
    let odd = 2 * ell + 1;
    let expected = WalkTime::pi_over(1, odd as i64, 1)?;
    if info.verdict != StellarVerdict::ProperFr || info.tau_min != Some(expected) {
        return Err(Error::Precondition(format!(
            "X({a},{k},{c}) needs proper revival at π/{odd}; found {} at {}",
            info.verdict.as_str(),
            info.tau_min.map_or_else(|| "none".to_string(), |t| t.to_string())
        )));
    }
    let x = build_stellar(a as usize, k as usize, c as usize)?;
    let z = cartesian_product(&build_complete(2)?, &x)?;
    let d = decompose(&z, crate::DEFAULT_GROUPING_TOL)?;
    let nx = x.n();
    let t_across = expected.scale(2);
    let t_within = WalkTime::pi_over(1, 1, 1)?;
    let across = verify_fr_at(&d, 0, nx, t_across.to_f64())?;
    let within = verify_fr_at(&d, 0, 1, t_within.to_f64())?;
    Ok(PolygamyWitness {
        triple: (a, k, c),
        ell,
        tau_min: expected,
        product_order: z.n(),
        across: ((0, nx), t_across, across),
        within: ((0, 1), t_within, within),
    })
}
