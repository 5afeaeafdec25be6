//! Closed-form analysis of the stellar fusion graphs `X(a,k,c)` and the
//! generators of infinite fractional-revival families.

use nalgebra::{Matrix5, SymmetricEigen};
use num_integer::Integer;
use serde_json::json;

use crate::arith::{exact_sqrt, is_prime, is_square_free, square_free_part, two_adic_valuation, two_squares};
use crate::error::{Error, Result};
use crate::graphs::{build_double_star, Graph};
use crate::quadratic::QuadraticValue;
use crate::revival::FrObservation;
use crate::spectral::C64;
use crate::time::WalkTime;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StellarVerdict {
    NoFr,
    ImproperFr,
    ProperFr,
}

impl StellarVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            StellarVerdict::NoFr => "no-FR",
            StellarVerdict::ImproperFr => "improper-FR",
            StellarVerdict::ProperFr => "proper-FR",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StellarAnalysis {
    pub a: u64,
    pub k: u64,
    pub c: u64,
    /// `2k + a + c`
    pub mu: u64,
    /// `4k² + (a − c)²`
    pub sigma: u64,
    /// `(μ − √σ)/2`
    pub theta3_sq: QuadraticValue,
    /// `(μ + √σ)/2`
    pub theta5_sq: QuadraticValue,
    pub delta: Option<u64>,
    /// `θ₃ = α√Δ`
    pub alpha: Option<u64>,
    /// `θ₅ = β√Δ`
    pub beta: Option<u64>,
    pub verdict: StellarVerdict,
    /// `π / (gcd(α, β) √Δ)`, the first revival time on `{0, 1}`.
    pub tau_min: Option<WalkTime>,
    /// Minimum period of the whole graph, `2 τ_min`.
    pub min_period: Option<WalkTime>,
}

impl StellarAnalysis {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "triple": [self.a, self.k, self.c],
            "mu": self.mu,
            "sigma": self.sigma,
            "theta3_sq": self.theta3_sq.to_string(),
            "theta5_sq": self.theta5_sq.to_string(),
            "Delta": self.delta,
            "alpha": self.alpha,
            "beta": self.beta,
            "verdict": self.verdict.as_str(),
            "tau_min": self.tau_min.map(|t| t.to_string()),
            "tau_min_value": self.tau_min.map(|t| t.to_f64()),
            "min_period": self.min_period.map(|t| t.to_string()),
        })
    }
}

fn check_params(a: u64, k: u64, c: u64) -> Result<()> {
    if a == 0 || k == 0 || c == 0 {
        return Err(Error::InvalidParameter(format!("X({a},{k},{c}) needs positive parameters")));
    }
    // keeps σ and every derived product inside i128/u64
    if a.max(k).max(c) > 1 << 28 {
        return Err(Error::Overflow("stellar parameters"));
    }
    Ok(())
}

pub fn analyze(a: u64, k: u64, c: u64) -> Result<StellarAnalysis> {
    check_params(a, k, c)?;
    let mu = 2 * k + a + c;
    let sigma = 4 * k * k + a.abs_diff(c).pow(2);
    let root = QuadraticValue::sqrt_of(sigma);
    let half = QuadraticValue::from_fraction(1, 2);
    let mu_q = QuadraticValue::integer(mu as i128);
    let theta3_sq = (mu_q - root) * half;
    let theta5_sq = (mu_q + root) * half;

    let mut out = StellarAnalysis {
        a,
        k,
        c,
        mu,
        sigma,
        theta3_sq,
        theta5_sq,
        delta: None,
        alpha: None,
        beta: None,
        verdict: StellarVerdict::NoFr,
        tau_min: None,
        min_period: None,
    };
    let Some(s) = exact_sqrt(sigma) else {
        return Ok(out);
    };
    if !(mu - s).is_multiple_of(2) {
        return Ok(out);
    }
    let (x3, x5) = ((mu - s) / 2, (mu + s) / 2);
    let (d3, alpha) = square_free_part(x3)?;
    let (d5, beta) = square_free_part(x5)?;
    if d3 != d5 {
        return Ok(out);
    }
    let proper = two_adic_valuation(alpha as i64)? != two_adic_valuation(beta as i64)?;
    let g = alpha.gcd(&beta);
    let tau = WalkTime::pi_over(1, g as i64, d3)?;
    out.delta = Some(d3);
    out.alpha = Some(alpha);
    out.beta = Some(beta);
    out.verdict = if proper { StellarVerdict::ProperFr } else { StellarVerdict::ImproperFr };
    out.tau_min = Some(tau);
    out.min_period = Some(tau.scale(2));
    Ok(out)
}

/// `Δ(β² − α²) = √σ` and `Δ(α² + β²) = μ`, exactly.
pub fn diophantine_check(a: u64, k: u64, c: u64, delta: u64, alpha: u64, beta: u64) -> bool {
    if check_params(a, k, c).is_err() || delta == 0 || alpha == 0 || beta == 0 || !is_square_free(delta) {
        return false;
    }
    let (d, al, be) = (delta as i128, alpha as i128, beta as i128);
    let mu = (2 * k + a + c) as i128;
    let sigma = 4 * k * k + a.abs_diff(c).pow(2);
    let Some(s) = exact_sqrt(sigma) else {
        return false;
    };
    d * (be * be - al * al) == s as i128 && d * (al * al + be * be) == mu
}

/// Parameters of the Fermat-based construction of proper fractional revival
/// between non-cospectral vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FamilyRecipe {
    pub p: u64,
    pub f: u64,
    pub g_f: u64,
    pub delta: u64,
    pub alpha: u64,
    pub beta: u64,
    /// `Δ(β² − α²) = p·d`
    pub d: u64,
}

/// Lower bound on `α/β` that guarantees `a > 0` for every prime.
pub const RATIO_BOUND: f64 = std::f64::consts::SQRT_2 - 1.0;

impl FamilyRecipe {
    pub fn new(p: u64, delta: u64, alpha: u64, beta: u64) -> Result<Self> {
        let (f, g_f) = two_squares(p)?;
        if delta == 0 || !is_square_free(delta) {
            return Err(Error::InvalidParameter(format!("Δ = {delta} is not a positive square-free integer")));
        }
        if alpha == 0 || beta == 0 || alpha == beta {
            return Err(Error::InvalidParameter("α and β must be distinct positive integers".into()));
        }
        let (alpha, beta) = (alpha.min(beta), alpha.max(beta));
        if two_adic_valuation(alpha as i64)? == two_adic_valuation(beta as i64)? {
            return Err(Error::InvalidParameter(format!("α = {alpha} and β = {beta} have the same 2-adic valuation")));
        }
        let span = delta
            .checked_mul(beta * beta - alpha * alpha)
            .ok_or(Error::Overflow("family recipe"))?;
        if span % p != 0 {
            return Err(Error::InvalidParameter(format!("p = {p} does not divide Δ(β² − α²) = {span}")));
        }
        Ok(Self { p, f, g_f, delta, alpha, beta, d: span / p })
    }

    /// `α/β` clears the bound that makes `a` positive for any prime.
    pub fn ratio_ok(&self) -> bool {
        self.alpha as f64 / self.beta as f64 > RATIO_BOUND
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FamilyMember {
    pub triple: (u64, u64, u64),
    pub recipe: FamilyRecipe,
    pub analysis: StellarAnalysis,
}

impl FamilyMember {
    pub fn to_json(&self) -> serde_json::Value {
        let r = &self.recipe;
        json!({
            "triple": [self.triple.0, self.triple.1, self.triple.2],
            "recipe": {"p": r.p, "f": r.f, "g_f": r.g_f, "Delta": r.delta, "alpha": r.alpha, "beta": r.beta, "d": r.d},
            "diophantine": diophantine_check(self.triple.0, self.triple.1, self.triple.2, r.delta, r.alpha, r.beta),
            "analysis": self.analysis.to_json(),
        })
    }
}

/// `k = f g d`, `c = Δα² + f d (f − g)`, `a = Δα² − g d (f − g)`.
pub fn generate_family(r: &FamilyRecipe) -> Result<FamilyMember> {
    let base = (r.delta * r.alpha * r.alpha) as i128;
    let spread = (r.d * (r.f - r.g_f)) as i128;
    let a = base - r.g_f as i128 * spread;
    let k = (r.f * r.g_f * r.d) as i128;
    let c = base + r.f as i128 * spread;
    if a <= 0 {
        return Err(Error::InvalidParameter(format!(
            "recipe gives a = {a}; α/β = {}/{} must exceed √2 − 1 ≈ 0.414",
            r.alpha, r.beta
        )));
    }
    let triple = (a as u64, k as u64, c as u64);
    let analysis = analyze(triple.0, triple.1, triple.2)?;
    Ok(FamilyMember { triple, recipe: *r, analysis })
}

/// The triple with `Δ = 1`, `α = pr`, `β = p(r+1)`: proper revival at `π/p`.
pub fn generate_polygamy_triple(p: u64, r: u64) -> Result<(u64, u64, u64)> {
    if r == 0 {
        return Err(Error::InvalidParameter("r must be positive".into()));
    }
    let (f, g) = two_squares(p)?;
    let (p, r, f, g) = (p as i128, r as i128, f as i128, g as i128);
    let a = p * p * r * r - g * p * (2 * r + 1) * (f - g);
    let k = f * g * p * (2 * r + 1);
    let c = p * p * r * r + f * p * (2 * r + 1) * (f - g);
    if a <= 0 {
        return Err(Error::InvalidParameter(format!("p = {p}, r = {r} gives a = {a}; take a larger r")));
    }
    Ok((a as u64, k as u64, c as u64))
}

/// Two `K_{1,a}` stars with adjacent centers 0 and 1, and the revival time
/// `2π/√(4a+1)` on the centers.
pub fn double_star_tree(a: u64) -> Result<(Graph, WalkTime)> {
    let g = build_double_star(a as usize)?;
    Ok((g, WalkTime::pi_over(2, 1, 4 * a + 1)?))
}

/// True when `X(a,1,c)` has no proper fractional revival on `{0,1}`.
pub fn k1_no_fr_check(a: u64, c: u64) -> Result<bool> {
    Ok(analyze(a, 1, c)?.verdict != StellarVerdict::ProperFr)
}

/// Checks `p` is a prime congruent to 1 mod 4.
pub fn check_family_prime(p: u64) -> Result<()> {
    if !is_prime(p) || p % 4 != 1 {
        return Err(Error::InvalidParameter(format!("{p} is not a prime congruent to 1 mod 4")));
    }
    Ok(())
}

/// Symmetrized quotient of `X(a,k,c)` over the cells
/// `(a-leaves, {0}, k-cell, {1}, c-leaves)`.
pub fn stellar_quotient_matrix(a: u64, k: u64, c: u64) -> Result<Matrix5<f64>> {
    check_params(a, k, c)?;
    let (sa, sk, sc) = ((a as f64).sqrt(), (k as f64).sqrt(), (c as f64).sqrt());
    let mut q = Matrix5::zeros();
    for (i, j, w) in [(0, 1, sa), (1, 2, sk), (2, 3, sk), (3, 4, sc)] {
        q[(i, j)] = w;
        q[(j, i)] = w;
    }
    Ok(q)
}

/// Rows 0 and 1 of `U(t)` read off the quotient walk. Both centres are
/// singleton cells, so `U(t)e₀ = P̂ exp(itQ) P̂ᵀe₀` needs only a 5×5 solve and
/// works for graphs far too large to decompose directly.
pub fn quotient_observation(a: u64, k: u64, c: u64, t: f64) -> Result<FrObservation> {
    let q = stellar_quotient_matrix(a, k, c)?;
    let eig = SymmetricEigen::new(q);
    let v = eig.eigenvectors;
    let walk = |i: usize, j: usize| -> C64 {
        (0..5).map(|r| C64::from_polar(1.0, eig.eigenvalues[r] * t) * v[(i, r)] * v[(j, r)]).sum()
    };
    let sizes = [a as f64, 1.0, k as f64, 1.0, c as f64];
    let off_block_norm = [0usize, 2, 4]
        .iter()
        .flat_map(|&j| [1usize, 3].map(|centre| walk(j, centre).norm() / sizes[j].sqrt()))
        .fold(0.0f64, f64::max);
    let block = [[walk(1, 1), walk(1, 3)], [walk(3, 1), walk(3, 3)]];
    Ok(FrObservation { t, off_block_norm, cross_amplitude: block[0][1].norm(), block })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::stellar_decompose;

    fn t(s: &str) -> WalkTime {
        s.parse().unwrap()
    }

    #[test]
    fn worked_triples() {
        let x = analyze(3, 2, 6).unwrap();
        assert_eq!((x.mu, x.sigma), (13, 25));
        assert_eq!(x.theta3_sq, QuadraticValue::integer(4));
        assert_eq!(x.theta5_sq, QuadraticValue::integer(9));
        assert_eq!((x.delta, x.alpha, x.beta), (Some(1), Some(2), Some(3)));
        assert_eq!(x.verdict, StellarVerdict::ProperFr);
        assert_eq!(x.tau_min, Some(t("pi")));
        assert_eq!(x.min_period, Some(t("2pi")));

        let y = analyze(1, 16, 25).unwrap();
        assert_eq!((y.alpha, y.beta), (Some(3), Some(7)));
        assert_eq!(y.verdict, StellarVerdict::ImproperFr);

        let z = analyze(16, 36, 37).unwrap();
        assert_eq!((z.mu, z.sigma), (125, 5625));
        assert_eq!((z.delta, z.alpha, z.beta), (Some(1), Some(5), Some(10)));
        assert_eq!(z.verdict, StellarVerdict::ProperFr);
        assert_eq!(z.tau_min, Some(t("pi/5")));
    }

    #[test]
    fn irrational_and_mismatched() {
        // σ = 5: not a square
        let x = analyze(1, 1, 2).unwrap();
        assert_eq!(x.verdict, StellarVerdict::NoFr);
        assert_eq!(x.theta3_sq.radicand(), 5);
        // (1,1,1): θ² ∈ {1, 3}, different square-free parts
        assert_eq!(analyze(1, 1, 1).unwrap().verdict, StellarVerdict::NoFr);
        assert!(analyze(0, 1, 1).is_err());
    }

    #[test]
    fn vieta() {
        for a in 1..15 {
            for k in 1..15 {
                for c in 1..15 {
                    let x = analyze(a, k, c).unwrap();
                    let sum = x.theta3_sq + x.theta5_sq;
                    let prod = x.theta3_sq * x.theta5_sq;
                    assert_eq!(sum, QuadraticValue::integer(x.mu as i128));
                    assert_eq!(prod, QuadraticValue::integer((a * k + c * k + a * c) as i128));
                }
            }
        }
    }

    #[test]
    fn diophantine() {
        assert!(diophantine_check(3, 2, 6, 1, 2, 3));
        assert!(!diophantine_check(3, 2, 6, 1, 1, 3));
        assert!(diophantine_check(2, 6, 11, 5, 1, 2));
        assert!(!diophantine_check(2, 6, 11, 4, 1, 2));
    }

    #[test]
    fn family_bullets() {
        let m = generate_family(&FamilyRecipe::new(5, 5, 1, 2).unwrap()).unwrap();
        assert_eq!(m.triple, (2, 6, 11));
        let m = generate_family(&FamilyRecipe::new(5, 1, 2, 3).unwrap()).unwrap();
        assert_eq!(m.recipe.d, 1);
        assert_eq!(m.triple, (3, 2, 6));
        let m = generate_family(&FamilyRecipe::new(5, 1, 7, 8).unwrap()).unwrap();
        assert_eq!(m.triple, (46, 6, 55));
        assert_eq!(m.analysis.verdict, StellarVerdict::ProperFr);
        assert!(FamilyRecipe::new(6, 1, 2, 3).is_err());
        assert!(FamilyRecipe::new(5, 1, 1, 3).is_err());
        // α/β = 1/4 < 0.414: a comes out negative
        let r = FamilyRecipe::new(5, 1, 1, 4).unwrap();
        assert!(!r.ratio_ok());
        assert!(generate_family(&r).is_err());
    }

    #[test]
    fn polygamy_triples() {
        assert_eq!(generate_polygamy_triple(5, 1).unwrap(), (10, 30, 55));
        assert_eq!(generate_polygamy_triple(5, 2).unwrap(), (75, 50, 150));
        assert_eq!(generate_polygamy_triple(13, 1).unwrap(), (91, 234, 286));
        for (p, r) in [(5, 1), (5, 2), (5, 3), (13, 1), (13, 2), (17, 2), (29, 3)] {
            let (a, k, c) = generate_polygamy_triple(p, r).unwrap();
            let x = analyze(a, k, c).unwrap();
            assert_eq!(x.verdict, StellarVerdict::ProperFr, "p={p} r={r}");
            assert_eq!(x.tau_min, Some(WalkTime::pi_over(1, p as i64, 1).unwrap()));
        }
        assert!(generate_polygamy_triple(6, 1).is_err());
    }

    #[test]
    fn double_stars() {
        let (g, tau) = double_star_tree(1).unwrap();
        assert_eq!(g.n(), 4);
        assert_eq!(tau, t("2pi/sqrt(5)"));
        assert_eq!(double_star_tree(2).unwrap().1, t("2pi/3"));
        assert_eq!(double_star_tree(6).unwrap().1, t("2pi/5"));
    }

    #[test]
    fn k_equals_one() {
        assert!(k1_no_fr_check(1, 1).unwrap());
        assert!(k1_no_fr_check(4, 4).unwrap());
        assert!(k1_no_fr_check(2, 6).unwrap());
        for a in 1..60 {
            for c in 1..60 {
                assert!(k1_no_fr_check(a, c).unwrap(), "({a},1,{c})");
            }
        }
    }

    #[test]
    fn quotient_matches_full_walk() {
        use crate::graphs::{build_stellar, stellar_partition, symmetrized_quotient};
        use crate::revival::verify_fr_at;
        for (a, k, c) in [(3, 2, 6), (2, 6, 11), (1, 4, 1), (4, 3, 7)] {
            let g = build_stellar(a, k, c).unwrap();
            let w = symmetrized_quotient(&g, &stellar_partition(a, k, c).unwrap()).unwrap();
            let q = stellar_quotient_matrix(a as u64, k as u64, c as u64).unwrap();
            for i in 0..5 {
                for j in 0..5 {
                    assert!((w.weight(i, j) - q[(i, j)]).abs() < 1e-12);
                }
            }
            let d = crate::spectral::decompose(&g, 1e-9).unwrap();
            for t in [0.3, 1.0, std::f64::consts::PI, 7.5] {
                let full = verify_fr_at(&d, 0, 1, t).unwrap();
                let quot = quotient_observation(a as u64, k as u64, c as u64, t).unwrap();
                assert!((full.off_block_norm - quot.off_block_norm).abs() < 1e-9);
                for r in 0..2 {
                    for s in 0..2 {
                        assert!((full.block[r][s] - quot.block[r][s]).norm() < 1e-9);
                    }
                }
            }
        }
    }

    #[test]
    fn scaling_keeps_center_blocks() {
        let base = stellar_decompose(3, 2, 6).unwrap();
        for m in 1..=5 {
            let scaled = stellar_decompose(3 * m, 2 * m, 6 * m).unwrap();
            assert_eq!(scaled.exact().unwrap().center_blocks, base.exact().unwrap().center_blocks);
            let x = analyze(3 * m as u64, 2 * m as u64, 6 * m as u64).unwrap();
            assert_eq!(x.delta, Some(square_free_part(m as u64).unwrap().0));
        }
    }
}
