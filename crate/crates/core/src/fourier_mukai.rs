//! Cohomological Fourier–Mukai transform `H^ev(X,ℤ) → H^ev(X̂,ℤ)` induced by the
//! Poincaré bundle, and the homomorphisms `φ_L : X → X̂` at the level of `H¹`.
//!
//! `X × X̂` is modeled by the exterior algebra on 8 generators: bits 0–3 are
//! `α₀..α₃` on `X`, bits 4–7 the dual basis on `X̂`. Classes on `X̂` use the
//! same six `H²` labels as `X`.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::cohomology::{mukai_pair, EvenClass, SurfaceModel, ELLIPTIC_WEDGE_BASIS};
use crate::error::{Error, Result};
use crate::matrix::{self, IntMatrix};
use crate::oracle::exterior::{rational, ExteriorElement};

const X: usize = 0;
const X_HAT: usize = 1;
const LOW: u64 = 0x0F;
const HIGH: u64 = 0xF0;

/// `ch(𝒫) = exp(Σ_k p₁*α_k ∧ p₂*α_k^∨)`, truncated at degree 8.
pub fn poincare_kernel() -> &'static ExteriorElement {
    static KERNEL: OnceLock<ExteriorElement> = OnceLock::new();
    KERNEL.get_or_init(|| {
        let c1 = (0..4).fold(ExteriorElement::zero(2), |acc, k| {
            let term = ExteriorElement::generator(2, X, k)
                .wedge(&ExteriorElement::generator(2, X_HAT, k))
                .unwrap();
            &acc + &term
        });
        let mut ch = ExteriorElement::one(2);
        let mut power = ExteriorElement::one(2);
        let mut fact = BigInt::one();
        for k in 1..=4u32 {
            power = power.wedge(&c1).unwrap();
            fact *= k;
            ch = &ch + &power.scale(&BigRational::new(BigInt::one(), fact.clone()));
        }
        ch
    })
}

/// `ch(𝒫)^∨`: the degree-`2k` part picks up `(−1)^k`.
fn dual_kernel() -> &'static ExteriorElement {
    static DUAL: OnceLock<ExteriorElement> = OnceLock::new();
    DUAL.get_or_init(|| {
        let ch = poincare_kernel();
        let mut out = ExteriorElement::zero(2);
        for (m, c) in ch.terms() {
            let sign = if (m.count_ones() / 2) % 2 == 1 { -1 } else { 1 };
            out = &out + &ExteriorElement::monomial(2, m, c * rational(sign));
        }
        out
    })
}

fn require_full(s: &SurfaceModel) -> Result<()> {
    if !s.is_elliptic_product() {
        return Err(Error::UnsupportedModel(
            "the Fourier–Mukai transform needs the built-in rank-6 abelian model".into(),
        ));
    }
    Ok(())
}

/// Embeds `(r, c₁, a)` as a class on the given factor of `X × X̂`.
fn embed(x: &EvenClass, factor: usize) -> ExteriorElement {
    let mut out = ExteriorElement::monomial(2, 0, BigRational::from_integer(x.r.clone()));
    for (c, &(i, j, sign)) in x.c1.iter().zip(ELLIPTIC_WEDGE_BASIS.iter()) {
        if c.is_zero() {
            continue;
        }
        let m = ExteriorElement::product_on_factor(2, factor, &[i, j]);
        out = &out + &m.scale(&BigRational::from_integer(c * BigInt::from(sign)));
    }
    let top = ExteriorElement::product_on_factor(2, factor, &[0, 1, 2, 3]);
    &out + &top.scale(&BigRational::from_integer(x.a.clone()))
}

fn integral(q: &BigRational) -> Result<BigInt> {
    if !q.is_integer() {
        return Err(Error::Consistency(format!("non-integral coefficient {q}")));
    }
    Ok(q.to_integer())
}

/// Reads an even class living on one factor, given by masks within a nibble.
fn read(terms: impl Iterator<Item = (u64, BigRational)>) -> Result<EvenClass> {
    let mut out = EvenClass::zero(6);
    for (m, c) in terms {
        match m.count_ones() {
            0 => out.r += integral(&c)?,
            4 => out.a += integral(&c)?,
            2 => {
                let idx = ELLIPTIC_WEDGE_BASIS
                    .iter()
                    .position(|&(i, j, _)| m == (1 << i) | (1 << j))
                    .expect("every pair of generators is a basis label");
                let sign = ELLIPTIC_WEDGE_BASIS[idx].2 as i64;
                out.c1[idx] += integral(&(c * rational(sign)))?;
            }
            d => return Err(Error::Consistency(format!("odd-degree component of degree {d}"))),
        }
    }
    Ok(out)
}

/// `F(x) = p₂*(ch(𝒫) · p₁*x)`.
pub fn fm_forward(x: &EvenClass, s: &SurfaceModel) -> Result<EvenClass> {
    require_full(s)?;
    x.check(s)?;
    let product = poincare_kernel().wedge(&embed(x, X))?;
    let pushed: Vec<(u64, BigRational)> = product
        .terms()
        .filter(|(m, _)| m & LOW == LOW)
        .map(|(m, c)| (m >> 4, c.clone()))
        .collect();
    read(pushed.into_iter())
}

/// `F̂(y) = p₁*(ch(𝒫)^∨ · p₂*y)`.
pub fn fm_inverse(y: &EvenClass, s: &SurfaceModel) -> Result<EvenClass> {
    require_full(s)?;
    y.check(s)?;
    let product = dual_kernel().wedge(&embed(y, X_HAT))?;
    let pushed: Vec<(u64, BigRational)> = product
        .terms()
        .filter(|(m, _)| m & HIGH == HIGH)
        .map(|(m, c)| (m & LOW, c.clone()))
        .collect();
    read(pushed.into_iter())
}

/// Both sides of `⟨F(x), y⟩ = ⟨x, F̂(y)⟩`.
pub fn adjoint_sides(x: &EvenClass, y: &EvenClass, s: &SurfaceModel) -> Result<(BigInt, BigInt)> {
    let lhs = mukai_pair(&fm_forward(x, s)?, y, s)?;
    let rhs = mukai_pair(x, &fm_inverse(y, s)?, s)?;
    Ok((lhs, rhs))
}

pub fn adjoint_check(x: &EvenClass, y: &EvenClass, s: &SurfaceModel) -> Result<bool> {
    let (l, r) = adjoint_sides(x, y, s)?;
    Ok(l == r)
}

/// `F̂(F(x)) = x`.
pub fn roundtrip_check(x: &EvenClass, s: &SurfaceModel) -> Result<bool> {
    Ok(fm_inverse(&fm_forward(x, s)?, s)? == *x)
}

/// `c₁(L̂)`: the `H²` part of `F(v(L))`.
pub fn hat_line_bundle(c1: &[BigInt], s: &SurfaceModel) -> Result<Vec<BigInt>> {
    require_full(s)?;
    s.check_h2(c1)?;
    let sq = s.h2_pair(c1, c1)?;
    let v = EvenClass::new(1, c1.to_vec(), sq / 2);
    Ok(fm_forward(&v, s)?.c1)
}

/// A map on `H¹`-coordinates (4×4 integer matrix).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhiMatrix(#[serde(with = "crate::json::matrix")] pub IntMatrix);

/// The alternating form `A` with `c₁ = Σ_{i<j} A_{ij} αᵢαⱼ`.
fn alternating(c1: &[BigInt]) -> IntMatrix {
    let mut a = vec![vec![BigInt::zero(); 4]; 4];
    for (c, &(i, j, sign)) in c1.iter().zip(ELLIPTIC_WEDGE_BASIS.iter()) {
        let v = c * BigInt::from(sign);
        a[i][j] += &v;
        a[j][i] -= &v;
    }
    a
}

/// `φ_L`: contraction of `H¹(X̂) = H¹(X)*` against the 2-form `c₁(L)`.
pub fn phi_map(c1: &[BigInt], s: &SurfaceModel) -> Result<PhiMatrix> {
    require_full(s)?;
    s.check_h2(c1)?;
    Ok(PhiMatrix(matrix::transpose(&alternating(c1))))
}

/// `φ_{L̂}` built from `c₁(L̂)`; the sign accounts for `X̂̂ = X` through `(−1)*`.
pub fn phi_hat_map(c1: &[BigInt], s: &SurfaceModel) -> Result<PhiMatrix> {
    let hat = hat_line_bundle(c1, s)?;
    let t = matrix::transpose(&alternating(&hat));
    Ok(PhiMatrix(t.into_iter().map(|row| row.into_iter().map(|x| -x).collect()).collect()))
}

fn scalar(n: usize, k: &BigInt) -> IntMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { k.clone() } else { BigInt::zero() }).collect())
        .collect()
}

/// Result of [`phi_composition`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PhiComposition {
    pub phi: PhiMatrix,
    pub phi_hat: PhiMatrix,
    pub composition: PhiMatrix,
    #[serde(with = "crate::json::int")]
    pub chi: BigInt,
    pub holds: bool,
}

/// `φ_{L̂} ∘ φ_L = −χ(L)·1` (and the reverse composition), with `χ(L) = (c₁²)/2`.
pub fn phi_composition(c1: &[BigInt], s: &SurfaceModel) -> Result<PhiComposition> {
    let phi = phi_map(c1, s)?;
    let phi_hat = phi_hat_map(c1, s)?;
    let chi: BigInt = s.h2_pair(c1, c1)? / 2;
    let expected = scalar(4, &-chi.clone());
    let composition = matrix::mul(&phi_hat.0, &phi.0);
    let reverse = matrix::mul(&phi.0, &phi_hat.0);
    let holds = composition == expected && reverse == expected;
    Ok(PhiComposition { phi, phi_hat, composition: PhiMatrix(composition), chi, holds })
}

pub fn phi_composition_check(c1: &[BigInt], s: &SurfaceModel) -> Result<bool> {
    Ok(phi_composition(c1, s)?.holds)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoveringReport {
    #[serde(with = "crate::json::int")]
    pub n: BigInt,
    #[serde(with = "crate::json::matrix")]
    pub alb: IntMatrix,
    #[serde(with = "crate::json::matrix")]
    pub tau: IntMatrix,
    #[serde(with = "crate::json::matrix")]
    pub product: IntMatrix,
    pub holds: bool,
}

fn blocks(tl: &IntMatrix, tr: &IntMatrix, bl: &IntMatrix, br: &IntMatrix) -> IntMatrix {
    let mut out: IntMatrix = tl.iter().zip(tr).map(|(a, b)| a.iter().chain(b).cloned().collect()).collect();
    out.extend(bl.iter().zip(br).map(|(a, b)| a.iter().chain(b).cloned().collect::<Vec<_>>()));
    out
}

fn negate(m: &IntMatrix) -> IntMatrix {
    m.iter().map(|row| row.iter().map(|x| -x).collect()).collect()
}

/// `M·τ = n·1₈` for `M = [[−a, φ_{L̂}], [φ_L, r]]` and
/// `τ = [[r, −φ_{L̂}], [−φ_L, −a]]`, where `n = (c₁²)/2 − ra > 0`.
pub fn covering_identity(r: &BigInt, c1: &[BigInt], a: &BigInt, s: &SurfaceModel) -> Result<CoveringReport> {
    let n: BigInt = s.h2_pair(c1, c1)? / 2 - r * a;
    if n <= BigInt::zero() {
        return Err(Error::Precondition(format!("n = (c₁²)/2 − ra = {n} must be positive")));
    }
    let phi = phi_map(c1, s)?.0;
    let phi_hat = phi_hat_map(c1, s)?.0;
    let alb = blocks(&scalar(4, &-a.clone()), &phi_hat, &phi, &scalar(4, r));
    let tau = blocks(&scalar(4, r), &negate(&phi_hat), &negate(&phi), &scalar(4, &-a.clone()));
    let product = matrix::mul(&alb, &tau);
    let holds = product == scalar(8, &n);
    Ok(CoveringReport { n, alb, tau, product, holds })
}
