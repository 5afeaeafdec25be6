//! States, eigenvalue supports, support graphs, average states and
//! periodicity tests.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use nalgebra::{DMatrix, SymmetricEigen};
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::quadratic::QuadraticValue;
use crate::spectral::{SpectralDecomposition, C64};

const PSD_TOL: f64 = 1e-10;

/// Real symmetric positive semidefinite matrix. Subset states are kept raw
/// (trace `|S|`); [`StateMatrix::normalized`] rescales to trace one.
#[derive(Clone, Debug, PartialEq)]
pub struct StateMatrix {
    entries: DMatrix<f64>,
    normalized: bool,
}

impl StateMatrix {
    pub fn new(entries: DMatrix<f64>) -> Result<Self> {
        let n = entries.nrows();
        if entries.ncols() != n {
            return Err(Error::DimensionMismatch { expected: n, found: entries.ncols() });
        }
        if n == 0 {
            return Err(Error::InvalidParameter("empty state".into()));
        }
        let asym = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .fold(0.0f64, |m, (i, j)| m.max((entries[(i, j)] - entries[(j, i)]).abs()));
        if asym > PSD_TOL {
            return Err(Error::InvalidParameter(format!("state is not symmetric (deviation {asym:.2e})")));
        }
        let smallest = SymmetricEigen::new(entries.clone()).eigenvalues.min();
        if smallest < -PSD_TOL {
            return Err(Error::InvalidParameter(format!("state is not positive semidefinite (eigenvalue {smallest:.3e})")));
        }
        Ok(Self { entries, normalized: false })
    }

    pub fn identity(n: usize) -> Self {
        Self { entries: DMatrix::identity(n, n), normalized: false }
    }

    /// `x xᵀ` for a real vector `x`.
    pub fn pure(x: &[f64]) -> Result<Self> {
        if x.is_empty() {
            return Err(Error::InvalidParameter("empty vector".into()));
        }
        let v = nalgebra::DVector::from_column_slice(x);
        Ok(Self { entries: &v * v.transpose(), normalized: false })
    }

    pub fn n(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn trace(&self) -> f64 {
        self.entries.trace()
    }

    /// Rescaled to trace one.
    pub fn normalized(&self) -> Self {
        Self { entries: &self.entries / self.trace(), normalized: true }
    }

    /// `max |ρ_ij|`.
    pub fn max_norm(&self) -> f64 {
        max_abs(&self.entries)
    }

    /// `L` with `ρ = L Lᵀ`; for diagonal states the columns are scaled unit
    /// vectors, which keeps support computations cheap.
    fn factor(&self) -> DMatrix<f64> {
        let n = self.n();
        let diagonal = (0..n).all(|i| (0..n).all(|j| i == j || self.entries[(i, j)] == 0.0));
        if diagonal {
            let support: Vec<usize> = (0..n).filter(|&i| self.entries[(i, i)] > 0.0).collect();
            let mut l = DMatrix::zeros(n, support.len());
            for (col, &i) in support.iter().enumerate() {
                l[(i, col)] = self.entries[(i, i)].sqrt();
            }
            return l;
        }
        let eig = SymmetricEigen::new(self.entries.clone());
        let scale = eig.eigenvalues.amax().max(f64::MIN_POSITIVE);
        let keep: Vec<usize> = (0..n).filter(|&i| eig.eigenvalues[i] > 1e-14 * scale).collect();
        let mut l = eig.eigenvectors.select_columns(&keep);
        for (col, &i) in keep.iter().enumerate() {
            l.column_mut(col).scale_mut(eig.eigenvalues[i].sqrt());
        }
        l
    }
}

/// Raw indicator state `D_S`.
pub fn subset_state(s: &[usize], n: usize) -> Result<StateMatrix> {
    if s.is_empty() {
        return Err(Error::InvalidParameter("subset state needs a nonempty set".into()));
    }
    let mut m = DMatrix::zeros(n, n);
    for &v in s {
        if v >= n {
            return Err(Error::VertexOutOfRange { vertex: v, n });
        }
        m[(v, v)] = 1.0;
    }
    Ok(StateMatrix { entries: m, normalized: false })
}

pub(crate) fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0f64, |acc, v| acc.max(v.abs()))
}

fn check_dims(d: &SpectralDecomposition, rho: &StateMatrix) -> Result<()> {
    if d.n() != rho.n() {
        return Err(Error::DimensionMismatch { expected: d.n(), found: rho.n() });
    }
    Ok(())
}

/// Support-membership threshold used when the caller passes `None`.
pub fn default_support_tol(rho: &StateMatrix) -> f64 {
    1e-8 * rho.max_norm()
}

/// Index pairs `(r, s)` with `‖E_r ρ E_s‖∞ > tol`. Symmetric by construction.
pub fn eigenvalue_support(d: &SpectralDecomposition, rho: &StateMatrix, tol: Option<f64>) -> Result<BTreeSet<(usize, usize)>> {
    check_dims(d, rho)?;
    let tol = tol.unwrap_or_else(|| default_support_tol(rho));
    let l = rho.factor();
    let f: Vec<DMatrix<f64>> = d.projectors().iter().map(|e| e * &l).collect();
    let mut out = BTreeSet::new();
    for r in 0..f.len() {
        for s in r..f.len() {
            if max_abs(&(&f[r] * f[s].transpose())) > tol {
                out.insert((r, s));
                out.insert((s, r));
            }
        }
    }
    Ok(out)
}

/// Graph on the distinct eigenvalues with loops `(θ_r, θ_r)` and edges
/// `(θ_r, θ_s)` taken from the eigenvalue support.
#[derive(Clone, Debug, PartialEq)]
pub struct SupportGraph {
    pub eigenvalues: Vec<f64>,
    pub loops: Vec<bool>,
    /// Edges `(r, s)` with `r < s`.
    pub edges: BTreeSet<(usize, usize)>,
    /// Exact eigenvalue text, when the decomposition carries it.
    pub exact_labels: Option<Vec<String>>,
}

impl SupportGraph {
    pub fn from_support(d: &SpectralDecomposition, support: &BTreeSet<(usize, usize)>) -> Self {
        let m = d.len();
        let loops = (0..m).map(|r| support.contains(&(r, r))).collect();
        let edges = support.iter().copied().filter(|&(r, s)| r < s).collect();
        let exact_labels = d.exact().and_then(|x| {
            x.eigenvalues.iter().map(|e| e.map(|v| v.to_string())).collect::<Option<Vec<_>>>()
        });
        Self { eigenvalues: d.eigenvalues().to_vec(), loops, edges, exact_labels }
    }

    pub fn has_edge(&self, r: usize, s: usize) -> bool {
        self.edges.contains(&(r.min(s), r.max(s)))
    }

    /// Connected components (through edges) of all eigenvalue vertices.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let m = self.eigenvalues.len();
        let mut comp = vec![usize::MAX; m];
        let mut out = Vec::new();
        for start in 0..m {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![start];
            comp[start] = id;
            let mut i = 0;
            while i < members.len() {
                let r = members[i];
                #[allow(clippy::needless_range_loop)]
                for s in 0..m {
                    if comp[s] == usize::MAX && self.has_edge(r, s) {
                        comp[s] = id;
                        members.push(s);
                    }
                }
                i += 1;
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// Components that carry at least one loop.
    pub fn supported_components(&self) -> Vec<Vec<usize>> {
        self.components().into_iter().filter(|c| c.iter().any(|&r| self.loops[r])).collect()
    }

    /// True when every vertex of `comp` has a loop and every pair is joined.
    pub fn is_complete_with_loops(&self, comp: &[usize]) -> bool {
        comp.iter().all(|&r| self.loops[r])
            && comp.iter().enumerate().all(|(i, &r)| comp[i + 1..].iter().all(|&s| self.has_edge(r, s)))
    }

    fn label(&self, r: usize) -> String {
        match &self.exact_labels {
            Some(labels) => labels[r].clone(),
            None => six_significant(self.eigenvalues[r]),
        }
    }

    /// DOT rendering; `classes` colors the `C⁺` / `C⁻` vertices.
    pub fn to_dot(&self, classes: Option<(&[usize], &[usize])>) -> String {
        let mut s = String::from("graph support {\n");
        for r in 0..self.eigenvalues.len() {
            let color = match classes {
                Some((plus, _)) if plus.contains(&r) => ", color=red, fontcolor=red",
                Some((_, minus)) if minus.contains(&r) => ", color=blue, fontcolor=blue",
                _ => "",
            };
            let _ = writeln!(s, "  t{r} [label=\"{}\"{color}];", self.label(r));
        }
        for r in (0..self.eigenvalues.len()).filter(|&r| self.loops[r]) {
            let _ = writeln!(s, "  t{r} -- t{r};");
        }
        for (r, t) in &self.edges {
            let _ = writeln!(s, "  t{r} -- t{t};");
        }
        s.push_str("}\n");
        s
    }
}

fn six_significant(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let decimals = (5 - x.abs().log10().floor() as i32).max(0) as usize;
    let text = format!("{x:.decimals$}");
    let text = if text.contains('.') { text.trim_end_matches('0').trim_end_matches('.').to_string() } else { text };
    if text == "-0" {
        "0".into()
    } else {
        text
    }
}

pub fn support_graph(d: &SpectralDecomposition, rho: &StateMatrix, tol: Option<f64>) -> Result<SupportGraph> {
    let support = eigenvalue_support(d, rho, tol)?;
    Ok(SupportGraph::from_support(d, &support))
}

/// `Ψ(ρ) = Σ_r E_r ρ E_r`.
pub fn average_state(d: &SpectralDecomposition, rho: &StateMatrix) -> Result<DMatrix<f64>> {
    check_dims(d, rho)?;
    let mut out = DMatrix::zeros(d.n(), d.n());
    for e in d.projectors() {
        out += e * rho.entries() * e;
    }
    Ok(out)
}

/// `‖U(t) ρ − ρ U(t)‖∞ < tol`.
pub fn is_periodic(d: &SpectralDecomposition, rho: &StateMatrix, t: f64, tol: f64) -> Result<bool> {
    Ok(commutator_norm(d, rho, t)? < tol)
}

pub fn commutator_norm(d: &SpectralDecomposition, rho: &StateMatrix, t: f64) -> Result<f64> {
    check_dims(d, rho)?;
    let u = d.transition_matrix(t);
    let r = rho.entries().map(|x| C64::new(x, 0.0));
    let comm = u.entries() * &r - &r * u.entries();
    Ok(comm.iter().fold(0.0f64, |m, z| m.max(z.norm())))
}

/// True when `(θ_r − θ_s)/√Δ` is within `1e-8` of an integer for every pair.
pub fn support_divisibility_check(pairs: &[(f64, f64)], delta: u64) -> bool {
    let root = (delta as f64).sqrt();
    pairs.iter().all(|&(r, s)| {
        let x = (r - s) / root;
        (x - x.round()).abs() < 1e-8
    })
}

/// Exact counterpart of [`support_divisibility_check`].
pub fn support_divisibility_check_exact(pairs: &[(QuadraticValue, QuadraticValue)], delta: u64) -> bool {
    pairs.iter().all(|&(r, s)| {
        if !r.compatible(&s) {
            return false;
        }
        let diff = r - s;
        if diff.is_zero() {
            return true;
        }
        let coeff = if delta == 1 {
            match diff.as_rational() {
                Some(p) => p,
                None => return false,
            }
        } else {
            if !diff.rational_part().is_zero() || diff.radicand() != delta {
                return false;
            }
            diff.surd_coefficient()
        };
        coeff.is_integer()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{build_path, build_star, build_stellar};
    use crate::spectral::{decompose, stellar_decompose};
    use std::f64::consts::PI;

    #[test]
    fn subset_states() {
        let d = subset_state(&[0, 1], 13).unwrap();
        assert_eq!(d.trace(), 2.0);
        assert_eq!(d.entries()[(1, 1)], 1.0);
        assert_eq!(d.entries()[(2, 2)], 0.0);
        assert_eq!(subset_state(&[0, 1, 2], 3).unwrap().entries(), &DMatrix::identity(3, 3));
        assert!(subset_state(&[], 3).is_err());
        assert!(subset_state(&[3], 3).is_err());
        assert!((d.normalized().trace() - 1.0).abs() < 1e-12);
        assert!(StateMatrix::new(DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0])).is_err());
    }

    #[test]
    fn identity_support_is_diagonal() {
        let d = decompose(&build_stellar(3, 2, 6).unwrap(), 1e-9).unwrap();
        let sup = eigenvalue_support(&d, &StateMatrix::identity(13), None).unwrap();
        let expected: BTreeSet<_> = (0..5).map(|r| (r, r)).collect();
        assert_eq!(sup, expected);
        let g = SupportGraph::from_support(&d, &sup);
        assert!(g.edges.is_empty() && g.loops.iter().all(|&l| l));
    }

    #[test]
    fn x326_center_support() {
        let d = decompose(&build_stellar(3, 2, 6).unwrap(), 1e-9).unwrap();
        let rho = subset_state(&[0, 1], 13).unwrap();
        let g = support_graph(&d, &rho, None).unwrap();
        // eigenvalue order 3, 2, 0, -2, -3
        assert_eq!(g.loops, vec![true, true, false, true, true]);
        let edges: Vec<_> = g.edges.iter().copied().collect();
        assert_eq!(edges, vec![(0, 4), (1, 3)]);
        assert_eq!(g.supported_components(), vec![vec![0, 4], vec![1, 3]]);
        assert!(g.components().contains(&vec![2]));
    }

    #[test]
    fn k2_and_p3_supports() {
        let d = decompose(&build_star(1).unwrap(), 1e-9).unwrap();
        let sup = eigenvalue_support(&d, &subset_state(&[0], 2).unwrap(), None).unwrap();
        assert_eq!(sup.len(), 4);
        let p3 = decompose(&build_path(3).unwrap(), 1e-9).unwrap();
        let g = support_graph(&p3, &subset_state(&[0], 3).unwrap(), None).unwrap();
        assert!(g.is_complete_with_loops(&[0, 1, 2]));
        let dot = g.to_dot(None);
        assert!(dot.contains("label=\"1.41421\""));
        assert!(dot.contains("t0 -- t0;"));
    }

    #[test]
    fn average_states() {
        let d = decompose(&build_star(1).unwrap(), 1e-9).unwrap();
        let avg = average_state(&d, &subset_state(&[0], 2).unwrap()).unwrap();
        assert!(max_abs(&(avg - DMatrix::identity(2, 2) * 0.5)) < 1e-12);
        let p3 = decompose(&build_path(3).unwrap(), 1e-9).unwrap();
        let avg = average_state(&p3, &StateMatrix::identity(3)).unwrap();
        assert!(max_abs(&(avg - DMatrix::identity(3, 3))) < 1e-12);
    }

    #[test]
    fn periodicity() {
        let d = decompose(&build_stellar(3, 2, 6).unwrap(), 1e-9).unwrap();
        let rho = subset_state(&[0, 1], 13).unwrap();
        assert!(is_periodic(&d, &rho, 0.0, 1e-9).unwrap());
        assert!(is_periodic(&d, &rho, PI, 1e-9).unwrap());
        assert!(!is_periodic(&d, &rho, 1.0, 1e-6).unwrap());
        let y = decompose(&build_stellar(1, 4, 1).unwrap(), 1e-9).unwrap();
        assert!(is_periodic(&y, &subset_state(&[0], 8).unwrap(), 2.0 * PI, 1e-9).unwrap());
    }

    #[test]
    fn divisibility() {
        assert!(support_divisibility_check(&[(3.0, -3.0)], 1));
        let r18 = 18f64.sqrt();
        assert!(support_divisibility_check(&[(r18, -r18)], 2));
        assert!(!support_divisibility_check(&[(3.0, 2.0 * 2f64.sqrt())], 2));

        let s18 = QuadraticValue::sqrt_of(18);
        assert!(support_divisibility_check_exact(&[(s18, -s18)], 2));
        assert!(!support_divisibility_check_exact(&[(QuadraticValue::integer(3), QuadraticValue::sqrt_of(8))], 2));
        assert!(support_divisibility_check_exact(&[(QuadraticValue::integer(3), QuadraticValue::integer(-3))], 1));
    }

    #[test]
    fn galois_conjugation_swaps_blocks() {
        // σ = 4k² + (a−c)² = 5 for (1,1,2): blocks live in Q(√5)
        let d = stellar_decompose(1, 1, 2).unwrap();
        let x = d.exact().unwrap();
        let conj = |b: [[QuadraticValue; 2]; 2]| b.map(|row| row.map(|v| v.conjugate()));
        assert_eq!(conj(x.center_blocks[0]), x.center_blocks[1]);
        assert_eq!(conj(x.center_blocks[1]), x.center_blocks[0]);
        assert_eq!(x.eigenvalue_squares[0].conjugate(), x.eigenvalue_squares[1]);
    }

    #[test]
    fn significant_digits() {
        assert_eq!(six_significant(2f64.sqrt()), "1.41421");
        assert_eq!(six_significant(-3.0), "-3");
        assert_eq!(six_significant(123.456789), "123.457");
    }
}
