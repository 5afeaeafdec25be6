//! Spectral decompositions `A = Σ θ_r E_r` and transition matrices
//! `U(t) = Σ e^{iθ_r t} E_r`.

use nalgebra::{Complex, DMatrix, SymmetricEigen};
use num_traits::Zero;
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::graphs::{stellar_partition, Graph};
use crate::poly::IntPoly;
use crate::quadratic::{BigRatio, QuadraticValue};

pub type C64 = Complex<f64>;

/// How the spectral data was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Backing {
    Numeric { tolerance: f64 },
    /// Closed form for `X(a,k,c)`; `delta` is the radicand of the {0,1}
    /// projector blocks, the square-free part of `σ = 4k² + (a-c)²`.
    ExactQuadratic { delta: u64 },
}

/// A 2×2 exact block `[[E_00, E_01], [E_10, E_11]]`.
pub type ExactBlock = [[QuadraticValue; 2]; 2];

/// Exact data carried by a stellar decomposition, indexed like the
/// eigenvalues of the decomposition.
#[derive(Clone, Debug)]
pub struct StellarExact {
    pub params: (u64, u64, u64),
    pub eigenvalue_squares: Vec<QuadraticValue>,
    /// `θ_r` itself when it is a quadratic surd (i.e. `θ_r²` is rational).
    pub eigenvalues: Vec<Option<QuadraticValue>>,
    /// Projector blocks on the centers `{0, 1}`.
    pub center_blocks: Vec<ExactBlock>,
}

#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    n: usize,
    eigenvalues: Vec<f64>,
    projectors: Vec<DMatrix<f64>>,
    multiplicities: Vec<usize>,
    backing: Backing,
    warnings: Vec<String>,
    connected: bool,
    exact: Option<StellarExact>,
}

impl SpectralDecomposition {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of distinct eigenvalues.
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// Distinct eigenvalues in descending order.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn projectors(&self) -> &[DMatrix<f64>] {
        &self.projectors
    }

    pub fn projector(&self, r: usize) -> &DMatrix<f64> {
        &self.projectors[r]
    }

    pub fn multiplicities(&self) -> &[usize] {
        &self.multiplicities
    }

    pub fn backing(&self) -> Backing {
        self.backing
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn is_connected(&self) -> bool {
        self.connected
    }

    pub fn exact(&self) -> Option<&StellarExact> {
        self.exact.as_ref()
    }

    /// The same decomposition with the exact data dropped.
    pub fn into_numeric(mut self) -> Self {
        self.exact = None;
        self.backing = Backing::Numeric { tolerance: crate::DEFAULT_GROUPING_TOL };
        self
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n {
            return Err(Error::VertexOutOfRange { vertex: v, n: self.n });
        }
        Ok(())
    }

    /// `[[E_aa, E_ab], [E_ba, E_bb]]` of projector `r`.
    pub fn block(&self, r: usize, a: usize, b: usize) -> [[f64; 2]; 2] {
        let e = &self.projectors[r];
        [[e[(a, a)], e[(a, b)]], [e[(b, a)], e[(b, b)]]]
    }

    /// `Σ θ_r E_r`.
    pub fn reconstruct(&self) -> DMatrix<f64> {
        let mut a = DMatrix::zeros(self.n, self.n);
        for (theta, e) in self.eigenvalues.iter().zip(&self.projectors) {
            a += e * *theta;
        }
        a
    }

    pub fn transition_matrix(&self, t: f64) -> TransitionMatrix {
        transition_matrix(self, t)
    }

    /// Row `a` of `U(t)`, without forming the whole matrix.
    pub fn transition_row(&self, t: f64, a: usize) -> Vec<C64> {
        let mut row = vec![C64::zero(); self.n];
        for (theta, e) in self.eigenvalues.iter().zip(&self.projectors) {
            let phase = C64::from_polar(1.0, theta * t);
            for (v, out) in row.iter_mut().enumerate() {
                *out += phase * e[(a, v)];
            }
        }
        row
    }

    pub fn transition_entry(&self, t: f64, a: usize, b: usize) -> C64 {
        self.eigenvalues
            .iter()
            .zip(&self.projectors)
            .map(|(theta, e)| C64::from_polar(1.0, theta * t) * e[(a, b)])
            .sum()
    }

    /// JSON report: eigenvalues, multiplicities and each projector's block on
    /// `pair`.
    pub fn report(&self, pair: (usize, usize)) -> serde_json::Value {
        let (a, b) = pair;
        let blocks: Vec<_> = (0..self.len()).map(|r| self.block(r, a, b)).collect();
        let exact = self.exact.as_ref().filter(|_| pair == (0, 1)).map(|x| {
            json!({
                "eigenvalues": x.eigenvalues.iter().map(|e| e.map(|v| v.to_string())).collect::<Vec<_>>(),
                "eigenvalue_squares": x.eigenvalue_squares.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                "blocks": x.center_blocks.iter().map(|bl| {
                    bl.iter().map(|row| row.iter().map(|v| v.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>()
                }).collect::<Vec<_>>(),
            })
        });
        json!({
            "n": self.n,
            "backing": self.backing,
            "eigenvalues": self.eigenvalues,
            "multiplicities": self.multiplicities,
            "pair": [a, b],
            "blocks": blocks,
            "exact": exact,
            "warnings": self.warnings,
        })
    }
}

#[derive(Clone, Debug)]
pub struct TransitionMatrix {
    t: f64,
    entries: DMatrix<C64>,
    unitarity_deviation: f64,
}

impl TransitionMatrix {
    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn entries(&self) -> &DMatrix<C64> {
        &self.entries
    }

    pub fn entry(&self, i: usize, j: usize) -> C64 {
        self.entries[(i, j)]
    }

    /// `max |(U U*)_{ij} - δ_ij|`.
    pub fn unitarity_deviation(&self) -> f64 {
        self.unitarity_deviation
    }
}

/// Full symmetric eigen-solve followed by grouping of nearly equal
/// eigenvalues. Consecutive eigenvalues closer than
/// `grouping_tolerance · max(1, ρ(A))` share a projector.
pub fn decompose(x: &Graph, grouping_tolerance: f64) -> Result<SpectralDecomposition> {
    let n = x.n();
    if n == 0 {
        return Err(Error::InvalidParameter("cannot decompose an empty graph".into()));
    }
    if !(grouping_tolerance > 0.0 && grouping_tolerance.is_finite()) {
        return Err(Error::InvalidParameter(format!("grouping tolerance must be positive, got {grouping_tolerance}")));
    }
    let eig = SymmetricEigen::try_new(x.adjacency_matrix(), f64::EPSILON, 0).ok_or(Error::EigenSolveFailed)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));

    let radius = eig.eigenvalues.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let threshold = grouping_tolerance * radius.max(1.0);
    let mut warnings = Vec::new();
    let mut clusters: Vec<Vec<usize>> = vec![vec![order[0]]];
    for w in order.windows(2) {
        let gap = eig.eigenvalues[w[0]] - eig.eigenvalues[w[1]];
        if gap > threshold / 10.0 && gap < threshold * 10.0 {
            warnings.push(format!(
                "ambiguous eigenvalue gap {gap:.3e} near grouping threshold {threshold:.3e}"
            ));
        }
        if gap < threshold {
            clusters.last_mut().expect("nonempty").push(w[1]);
        } else {
            clusters.push(vec![w[1]]);
        }
    }

    let mut eigenvalues = Vec::with_capacity(clusters.len());
    let mut projectors = Vec::with_capacity(clusters.len());
    let mut multiplicities = Vec::with_capacity(clusters.len());
    for cluster in &clusters {
        let mean = cluster.iter().map(|&i| eig.eigenvalues[i]).sum::<f64>() / cluster.len() as f64;
        let basis = eig.eigenvectors.select_columns(cluster);
        eigenvalues.push(mean);
        projectors.push(&basis * basis.transpose());
        multiplicities.push(cluster.len());
    }
    Ok(SpectralDecomposition {
        n,
        eigenvalues,
        projectors,
        multiplicities,
        backing: Backing::Numeric { tolerance: grouping_tolerance },
        warnings,
        connected: x.is_connected(),
        exact: None,
    })
}

pub fn transition_matrix(d: &SpectralDecomposition, t: f64) -> TransitionMatrix {
    let n = d.n;
    let mut u = DMatrix::<C64>::zeros(n, n);
    for (theta, e) in d.eigenvalues.iter().zip(&d.projectors) {
        let phase = C64::from_polar(1.0, theta * t);
        u.zip_apply(e, |acc, x| *acc += phase * x);
    }
    let product = &u * u.adjoint();
    let mut deviation = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { 1.0 } else { 0.0 };
            deviation = deviation.max((product[(i, j)] - C64::new(target, 0.0)).norm());
        }
    }
    TransitionMatrix { t, entries: u, unitarity_deviation: deviation }
}

fn q(n: i128) -> QuadraticValue {
    QuadraticValue::integer(n)
}

/// `√x` for a nonnegative rational `x`, as `m√Δ / q`.
fn sqrt_rational(x: BigRatio) -> Option<QuadraticValue> {
    let (p, d) = (*x.numer(), *x.denom());
    if p < 0 {
        return None;
    }
    let pd = u64::try_from(p.checked_mul(d)?).ok()?;
    Some(QuadraticValue::sqrt_of(pd) * QuadraticValue::rational(BigRatio::new(1, d)))
}

/// Exact decomposition of `X(a,k,c)` through its five-cell equitable
/// partition. The {0,1} projector blocks are exact; the full projectors are
/// assembled numerically by lifting normalized quotient eigenvectors.
pub fn stellar_decompose(a: usize, k: usize, c: usize) -> Result<SpectralDecomposition> {
    let partition = stellar_partition(a, k, c)?;
    let n = partition.n();
    let (ai, ki, ci) = (a as i128, k as i128, c as i128);
    let mu = 2 * ki + ai + ci;
    let sigma = 4 * ki * ki + (ai - ci) * (ai - ci);
    let sigma_u = u64::try_from(sigma).map_err(|_| Error::Overflow("stellar sigma"))?;
    let root = QuadraticValue::sqrt_of(sigma_u);
    let half = QuadraticValue::from_fraction(1, 2);
    let x3 = (q(mu) - root) * half;
    let x5 = (q(mu) + root) * half;

    let block = |x: QuadraticValue, other: QuadraticValue| -> ExactBlock {
        let den = (x - other) * q(2);
        let e00 = (x - q(ci + ki)) / den;
        let e11 = (x - q(ai + ki)) / den;
        let e01 = q(ki) / den;
        [[e00, e01], [e01, e11]]
    };
    let b3 = block(x3, x5);
    let b5 = block(x5, x3);
    // E_0 = I - Σ_{θ≠0} E_θ, each nonzero eigenvalue pair contributing twice
    let zero_block: ExactBlock = {
        let mut z = [[q(0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                let id = q((i == j) as i128);
                z[i][j] = id - (b3[i][j] + b5[i][j]) * q(2);
            }
        }
        z
    };

    let e3 = x3.as_rational().and_then(sqrt_rational);
    let e5 = x5.as_rational().and_then(sqrt_rational);
    let exact = StellarExact {
        params: (a as u64, k as u64, c as u64),
        eigenvalue_squares: vec![x5, x3, q(0), x3, x5],
        eigenvalues: vec![e5, e3, Some(q(0)), e3.map(|v| -v), e5.map(|v| -v)],
        center_blocks: vec![b5, b3, zero_block, b3, b5],
    };

    let theta5 = x5.to_f64().sqrt();
    let theta3 = x3.to_f64().sqrt();
    let lift = partition.normalized_characteristic_matrix();
    let (af, kf, cf) = (a as f64, k as f64, c as f64);
    let projector = |theta: f64| {
        // quotient path order: a-leaves, 0, shared cell, 1, c-leaves
        let y0 = 1.0;
        let x1 = af.sqrt() / theta;
        let x2 = (theta * theta - af) / (theta * kf.sqrt());
        let y1 = (theta * theta - af - kf) / kf;
        let x3 = cf.sqrt() * y1 / theta;
        let mut v = nalgebra::DVector::from_vec(vec![x1, y0, x2, y1, x3]);
        v.normalize_mut();
        let u = &lift * v;
        &u * u.transpose()
    };
    let mut projectors: Vec<DMatrix<f64>> = [theta5, theta3, -theta3, -theta5].iter().map(|&t| projector(t)).collect();
    let mut e0 = DMatrix::identity(n, n);
    for e in &projectors {
        e0 -= e;
    }
    projectors.insert(2, e0);

    Ok(SpectralDecomposition {
        n,
        eigenvalues: vec![theta5, theta3, 0.0, -theta3, -theta5],
        projectors,
        multiplicities: vec![1, 1, n - 4, 1, 1],
        backing: Backing::ExactQuadratic { delta: root.radicand() },
        warnings: Vec::new(),
        connected: true,
        exact: Some(exact),
    })
}

/// Characteristic polynomials of `X(a,k,c)` and of its vertex-deleted
/// subgraphs, plus the walk polynomial `ψ_{0,1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharPolySuite {
    pub phi: IntPoly,
    pub phi_minus_0: IntPoly,
    pub phi_minus_1: IntPoly,
    pub phi_minus_01: IntPoly,
    pub psi_01: IntPoly,
}

pub fn char_poly_suite(a: usize, k: usize, c: usize) -> Result<CharPolySuite> {
    if a == 0 || k == 0 || c == 0 {
        return Err(Error::InvalidParameter(format!("X({a},{k},{c}) needs positive parameters")));
    }
    let (ai, ki, ci) = (a as i64, k as i64, c as i64);
    let m = a + k + c;
    let quartic = IntPoly::from_i64(&[ai * ki + ci * ki + ai * ci, 0, -(ai + 2 * ki + ci), 0, 1]);
    let t_pow = |e: usize| IntPoly::monomial(1, e);
    Ok(CharPolySuite {
        phi: &t_pow(m - 2) * &quartic,
        phi_minus_0: &t_pow(m - 1) * &IntPoly::from_i64(&[-(ci + ki), 0, 1]),
        phi_minus_1: &t_pow(m - 1) * &IntPoly::from_i64(&[-(ai + ki), 0, 1]),
        phi_minus_01: t_pow(m),
        psi_01: IntPoly::monomial(ki, m - 1),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{build_path, build_star, build_stellar};
    use crate::poly::characteristic_polynomial;
    use std::f64::consts::PI;

    fn max_abs(m: &DMatrix<f64>) -> f64 {
        m.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    #[test]
    fn k2_by_hand() {
        let d = decompose(&build_star(1).unwrap(), 1e-9).unwrap();
        assert_eq!(d.len(), 2);
        assert!((d.eigenvalues()[0] - 1.0).abs() < 1e-12);
        assert!((d.eigenvalues()[1] + 1.0).abs() < 1e-12);
        let plus = DMatrix::from_row_slice(2, 2, &[0.5, 0.5, 0.5, 0.5]);
        let minus = DMatrix::from_row_slice(2, 2, &[0.5, -0.5, -0.5, 0.5]);
        assert!(max_abs(&(d.projector(0) - plus)) < 1e-12);
        assert!(max_abs(&(d.projector(1) - minus)) < 1e-12);
    }

    #[test]
    fn p3_spectrum_and_kernel_projector() {
        let d = decompose(&build_path(3).unwrap(), 1e-9).unwrap();
        let s = 2f64.sqrt();
        for (got, want) in d.eigenvalues().iter().zip([s, 0.0, -s]) {
            assert!((got - want).abs() < 1e-12);
        }
        // kernel spanned by (1,0,-1)/√2
        let v = nalgebra::DVector::from_vec(vec![1.0, 0.0, -1.0]) / s;
        assert!(max_abs(&(d.projector(1) - &v * v.transpose())) < 1e-12);
    }

    #[test]
    fn x326_numeric_blocks() {
        let d = decompose(&build_stellar(3, 2, 6).unwrap(), 1e-9).unwrap();
        let expected = [3.0, 2.0, 0.0, -2.0, -3.0];
        assert_eq!(d.len(), 5);
        for (got, want) in d.eigenvalues().iter().zip(expected) {
            assert!((got - want).abs() < 1e-10);
        }
        let b2 = [[0.4, -0.2], [-0.2, 0.1]];
        let b3 = [[0.1, 0.2], [0.2, 0.4]];
        for (r, want) in [(0, b3), (1, b2), (3, b2), (4, b3)] {
            let got = d.block(r, 0, 1);
            for i in 0..2 {
                for j in 0..2 {
                    assert!((got[i][j] - want[i][j]).abs() < 1e-9, "r={r}");
                }
            }
        }
    }

    #[test]
    fn x326_exact_blocks() {
        let d = stellar_decompose(3, 2, 6).unwrap();
        let x = d.exact().unwrap();
        let f = |n, m| QuadraticValue::from_fraction(n, m);
        let b3 = [[f(1, 10), f(2, 10)], [f(2, 10), f(4, 10)]];
        let b2 = [[f(4, 10), f(-2, 10)], [f(-2, 10), f(1, 10)]];
        assert_eq!(x.center_blocks, vec![b3, b2, [[q(0); 2]; 2], b2, b3]);
        let evs: Vec<_> = x.eigenvalues.iter().map(|e| e.unwrap()).collect();
        assert_eq!(evs, vec![q(3), q(2), q(0), q(-2), q(-3)]);
        assert_eq!(x.center_blocks[0][0][1], f(2, 10));
        assert_eq!(d.backing(), Backing::ExactQuadratic { delta: 1 });
    }

    #[test]
    fn x141_and_x6_3_14() {
        // μ = 10, σ = 64, so θ² ∈ {1, 9}; cross-checked against the numeric solve
        let x = stellar_decompose(1, 4, 1).unwrap();
        let evs = &x.exact().unwrap().eigenvalues;
        assert_eq!(evs[0], Some(q(3)));
        assert_eq!(evs[1], Some(q(1)));
        let numeric = decompose(&build_stellar(1, 4, 1).unwrap(), 1e-9).unwrap();
        assert!((numeric.eigenvalues()[0] - 3.0).abs() < 1e-10);
        assert!((numeric.eigenvalues()[1] - 1.0).abs() < 1e-10);

        let y = stellar_decompose(6, 3, 14).unwrap();
        let ex = y.exact().unwrap();
        assert_eq!(ex.eigenvalue_squares[1], q(8));
        assert_eq!(ex.eigenvalue_squares[0], q(18));
        assert_eq!(ex.eigenvalues[1], Some(QuadraticValue::sqrt_of(8)));
        assert_eq!(ex.eigenvalues[0].unwrap().radicand(), 2);
    }

    #[test]
    fn stellar_exact_matches_generic_numeric() {
        for (a, k, c) in [(3, 2, 6), (1, 1, 1), (2, 5, 3), (6, 3, 14), (4, 1, 9)] {
            let exact = stellar_decompose(a, k, c).unwrap();
            let numeric = decompose(&build_stellar(a, k, c).unwrap(), 1e-9).unwrap();
            assert_eq!(exact.len(), numeric.len());
            for r in 0..exact.len() {
                assert!((exact.eigenvalues()[r] - numeric.eigenvalues()[r]).abs() < 1e-9);
                assert!(max_abs(&(exact.projector(r) - numeric.projector(r))) < 1e-9, "({a},{k},{c}) r={r}");
                let xb = exact.exact().unwrap().center_blocks[r];
                let nb = numeric.block(r, 0, 1);
                for i in 0..2 {
                    for j in 0..2 {
                        assert!((xb[i][j].to_f64() - nb[i][j]).abs() < 1e-9);
                    }
                }
            }
        }
    }

    #[test]
    fn irrational_squares_have_no_exact_eigenvalue() {
        // σ = 4 + 0 = 4 ⇒ θ² = (4 ± 2)/2 ∈ {1, 3}: √3 is still quadratic
        let d = stellar_decompose(1, 1, 1).unwrap();
        assert_eq!(d.exact().unwrap().eigenvalues[0], Some(QuadraticValue::sqrt_of(3)));
        // σ = 4 + 1 = 5 ⇒ θ² = (7 ± √5)/2, θ not quadratic
        let d = stellar_decompose(1, 1, 2).unwrap();
        assert_eq!(d.exact().unwrap().eigenvalues[0], None);
        assert_eq!(d.backing(), Backing::ExactQuadratic { delta: 5 });
    }

    #[test]
    fn transitions() {
        let d = decompose(&build_star(1).unwrap(), 1e-9).unwrap();
        let u0 = d.transition_matrix(0.0);
        assert!((u0.entry(0, 0) - C64::new(1.0, 0.0)).norm() < 1e-12);
        assert!(u0.entry(0, 1).norm() < 1e-12);
        let u = d.transition_matrix(PI / 2.0);
        assert!(u.entry(0, 0).norm() < 1e-12);
        assert!((u.entry(0, 1) - C64::new(0.0, 1.0)).norm() < 1e-12);
        assert!(u.unitarity_deviation() < 1e-12);
        assert!((d.transition_entry(0.7, 0, 1) - d.transition_row(0.7, 0)[1]).norm() < 1e-14);
    }

    #[test]
    fn x326_at_pi() {
        let d = decompose(&build_stellar(3, 2, 6).unwrap(), 1e-9).unwrap();
        let u = d.transition_matrix(PI);
        for v in 2..13 {
            assert!(u.entry(0, v).norm() < 1e-9 && u.entry(1, v).norm() < 1e-9);
        }
        assert!(u.entry(0, 1).norm() > 0.1);
    }

    #[test]
    fn char_polys() {
        let s = char_poly_suite(3, 2, 6).unwrap();
        let expected = &IntPoly::monomial(1, 9) * &IntPoly::from_i64(&[36, 0, -13, 0, 1]);
        assert_eq!(s.phi, expected);
        assert_eq!(s.phi, characteristic_polynomial(&build_stellar(3, 2, 6).unwrap()));
        // one 0-w-1 path per shared vertex w, and X minus that path is edgeless
        // on a+k+c-1 vertices: ψ = k t^{a+k+c-1}, i.e. t^2 for (1,1,1)
        assert_eq!(char_poly_suite(1, 1, 1).unwrap().psi_01, IntPoly::monomial(1, 2));
        for (a, k, c) in [(3, 2, 6), (1, 4, 1), (5, 3, 2), (2, 6, 11)] {
            let s = char_poly_suite(a, k, c).unwrap();
            let diff = &s.phi_minus_0 - &s.phi_minus_1;
            let gamma = num_rational::BigRational::new((a as i64 - c as i64).into(), (k as i64).into());
            if a == c {
                assert!(diff.is_zero());
            } else {
                assert_eq!(diff.rational_multiple_of(&s.psi_01), Some(gamma));
            }
        }
    }

    #[test]
    fn char_polys_match_faddeev() {
        for (a, k, c) in [(1, 1, 1), (2, 3, 1), (1, 4, 1)] {
            let x = build_stellar(a, k, c).unwrap();
            let s = char_poly_suite(a, k, c).unwrap();
            let n = x.n();
            let without = |drop: &[usize]| {
                let keep: Vec<usize> = (0..n).filter(|v| !drop.contains(v)).collect();
                characteristic_polynomial(&crate::graphs::induced_subgraph(&x, &keep).unwrap().0)
            };
            assert_eq!(s.phi_minus_0, without(&[0]));
            assert_eq!(s.phi_minus_1, without(&[1]));
            assert_eq!(s.phi_minus_01, without(&[0, 1]));
            // ψ² = φ(X∖0)φ(X∖1) − φ(X)φ(X∖{0,1})
            let lhs = &s.psi_01 * &s.psi_01;
            let rhs = &(&s.phi_minus_0 * &s.phi_minus_1) - &(&s.phi * &s.phi_minus_01);
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn report_is_json() {
        let d = stellar_decompose(3, 2, 6).unwrap();
        let r = d.report((0, 1));
        assert_eq!(r["multiplicities"][2], 9);
        assert_eq!(r["exact"]["blocks"][0][0][1], "1/5");
        assert_eq!(r["backing"]["kind"], "exact-quadratic");
    }
}
