//! Integral lattices given by Gram matrices: orthogonal complements,
//! primitivity, discriminants and the rank-2 decomposability test.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::cohomology::{EvenClass, SurfaceModel};
use crate::error::{Error, Result};
use crate::matrix::{self, IntMatrix};

/// A lattice `(ℤᵏ, gram)`, optionally realized as a sublattice of an ambient
/// lattice by the rows of `basis`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntegralLattice {
    #[serde(with = "crate::json::matrix")]
    pub gram: IntMatrix,
    #[serde(
        default,
        skip_serializing_if = "Option::is_none",
        with = "crate::json::opt_matrix"
    )]
    pub basis: Option<IntMatrix>,
    #[serde(
        default,
        skip_serializing_if = "Option::is_none",
        with = "crate::json::opt_matrix"
    )]
    pub ambient_gram: Option<IntMatrix>,
}

impl IntegralLattice {
    pub fn new(gram: IntMatrix) -> Result<Self> {
        if !matrix::is_symmetric(&gram) {
            return Err(Error::InvalidGram("Gram matrix is not square and symmetric".into()));
        }
        Ok(IntegralLattice { gram, basis: None, ambient_gram: None })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        IntegralLattice::new(matrix::from_i64(rows))
    }

    /// The Mukai lattice of `s` in coordinates `(r, c₁…, a)`.
    pub fn mukai(s: &SurfaceModel) -> Self {
        IntegralLattice { gram: s.mukai_gram(), basis: None, ambient_gram: None }
    }

    /// A sublattice spanned by the rows of `basis`; the rows must be independent.
    pub fn sublattice(ambient_gram: IntMatrix, basis: IntMatrix) -> Result<Self> {
        if !matrix::is_symmetric(&ambient_gram) {
            return Err(Error::InvalidGram("ambient Gram matrix is not symmetric".into()));
        }
        if let Some(row) = basis.iter().find(|r| r.len() != ambient_gram.len()) {
            return Err(Error::DimensionMismatch { expected: ambient_gram.len(), found: row.len() });
        }
        if matrix::rank(&basis) != basis.len() {
            return Err(Error::Degenerate("basis rows are linearly dependent".into()));
        }
        let gram = matrix::congruence(&basis, &ambient_gram);
        Ok(IntegralLattice { gram, basis: Some(basis), ambient_gram: Some(ambient_gram) })
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn pair(&self, x: &[BigInt], y: &[BigInt]) -> Result<BigInt> {
        self.check(x)?;
        self.check(y)?;
        Ok(matrix::bilinear(&self.gram, x, y))
    }

    fn check(&self, x: &[BigInt]) -> Result<()> {
        if x.len() != self.rank() {
            return Err(Error::DimensionMismatch { expected: self.rank(), found: x.len() });
        }
        Ok(())
    }

    pub fn is_primitive(&self, x: &[BigInt]) -> Result<bool> {
        self.check(x)?;
        is_primitive(x)
    }
}

/// Saturated orthogonal complement of `v` (coordinates in `ambient`'s basis).
///
/// The kernel of `x ↦ ⟨v,x⟩` is computed with a unimodular column reduction,
/// then put in row Hermite normal form so the returned basis is canonical.
/// Basis rows are expressed in `ambient`'s coordinates.
pub fn orthogonal_complement(v: &[BigInt], ambient: &IntegralLattice) -> Result<IntegralLattice> {
    ambient.check(v)?;
    if v.iter().all(Zero::is_zero) {
        return Err(Error::ZeroVector("the complement of 0 is the whole lattice"));
    }
    let row: Vec<BigInt> = (0..ambient.rank())
        .map(|j| v.iter().zip(&ambient.gram).map(|(vi, gi)| vi * &gi[j]).sum())
        .collect();
    let basis = matrix::row_hnf(&matrix::kernel(&[row], ambient.rank()));
    let gram = matrix::congruence(&basis, &ambient.gram);
    Ok(IntegralLattice {
        gram,
        basis: Some(basis),
        ambient_gram: Some(ambient.gram.clone()),
    })
}

/// `v^⊥` inside the Mukai lattice of `s`. Basis rows are `(r, c₁…, a)` vectors.
pub fn mukai_perp(v: &EvenClass, s: &SurfaceModel) -> Result<IntegralLattice> {
    v.check(s)?;
    orthogonal_complement(&v.to_coords(), &IntegralLattice::mukai(s))
}

pub fn is_primitive(x: &[BigInt]) -> Result<bool> {
    if x.iter().all(Zero::is_zero) {
        return Err(Error::ZeroVector("primitivity is undefined for 0"));
    }
    Ok(matrix::content(x).is_one())
}

/// `det(gram)`; zero flags a degenerate lattice.
pub fn discriminant(l: &IntegralLattice) -> BigInt {
    matrix::det(&l.gram)
}

/// Outcome of [`is_decomposable_rank2`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub decomposable: bool,
    /// An orthogonal ℤ-basis `(x, z)` when one exists.
    #[serde(skip_serializing_if = "Option::is_none", with = "crate::json::opt_matrix")]
    pub witness: Option<IntMatrix>,
    /// `(q(x), q(z))`, so `L ≅ ⟨q(x)⟩ ⊕ ⟨q(z)⟩`.
    #[serde(skip_serializing_if = "Option::is_none", with = "crate::json::opt_matrix")]
    pub diagonal: Option<IntMatrix>,
}

/// Largest search coordinate we are willing to scan in the indefinite case.
const SEARCH_LIMIT: u64 = 50_000_000;

/// Decides whether a nondegenerate rank-2 lattice splits as `⟨p⟩ ⊕ ⟨q⟩`.
///
/// `L` splits iff some primitive `x` has `q(x) ≠ 0` dividing `(x·L)`, i.e.
/// `|q(x)| = gcd(Gx)`; then `L = ℤx ⊕ x^⊥` and `q(x)·q(z) = det`, so
/// `|q(x)| ≤ |det|`. The form is first Gauss-reduced (`|2b| ≤ |a| ≤ |c|`), and
/// the candidates `x` are confined to a finite region meeting every orbit of
/// the automorphism group:
///
/// * definite: `|q(x)| ≥ D·x₂²/|a|` bounds `|x₂| ≤ √|a|`, likewise `|x₁| ≤ √|c|`;
/// * indefinite with `−det = s²`: `a·q` factors into two nonzero integer linear
///   forms whose product is at most `|a·det|`, bounding both coordinates;
/// * indefinite with `−det = N` not a square: the automorph built from the
///   fundamental solution of `t² − N u² = 1` scales the two real linear factors
///   of `a·q` by `ε = t + u√N` and `1/ε`, so each orbit has a point whose factors
///   have ratio in `[1/ε, ε)`, which gives `|x₂| ≤ √(ε|a|)`.
///
/// The witness returned is the smallest found under a fixed ordering, so the
/// answer is deterministic.
pub fn is_decomposable_rank2(l: &IntegralLattice) -> Result<Decomposition> {
    if l.rank() != 2 {
        return Err(Error::Precondition(format!("expected a rank-2 lattice, got rank {}", l.rank())));
    }
    let det = discriminant(l);
    if det.is_zero() {
        return Err(Error::Degenerate("rank-2 lattice with zero determinant".into()));
    }
    let (form, transform) = gauss_reduce(&l.gram[0][0], &l.gram[0][1], &l.gram[1][1]);
    let candidates = candidate_vectors(&form, &det)?;

    let mut best: Option<(BigInt, IntMatrix)> = None;
    for x in candidates {
        let Some((x, z)) = witness_from(&form, &x) else { continue };
        let x = canonical_sign(apply(&transform, &x));
        let z = canonical_sign(apply(&transform, &z));
        let mut pair = vec![x, z];
        pair.sort_by(|p, q| q.cmp(p));
        let weight: BigInt = pair.iter().flatten().map(|c| c.abs()).sum();
        let better = match &best {
            None => true,
            Some((w, p)) => (&weight, &pair) < (w, p),
        };
        if better {
            best = Some((weight, pair));
        }
    }

    Ok(match best {
        Some((_, pair)) => {
            let diagonal = vec![pair
                .iter()
                .map(|v| matrix::bilinear(&l.gram, v, v))
                .collect::<Vec<_>>()];
            Decomposition { decomposable: true, witness: Some(pair), diagonal: Some(diagonal) }
        }
        None => Decomposition { decomposable: false, witness: None, diagonal: None },
    })
}

/// Binary form `a x² + 2b xy + c y²`.
#[derive(Debug, Clone)]
struct Form {
    a: BigInt,
    b: BigInt,
    c: BigInt,
}

impl Form {
    fn value(&self, x: &[BigInt]) -> BigInt {
        &self.a * &x[0] * &x[0] + BigInt::from(2) * &self.b * &x[0] * &x[1] + &self.c * &x[1] * &x[1]
    }
}

/// Returns the reduced form and the 2×2 matrix whose columns are the new basis.
fn gauss_reduce(a: &BigInt, b: &BigInt, c: &BigInt) -> (Form, IntMatrix) {
    let mut f = Form { a: a.clone(), b: b.clone(), c: c.clone() };
    let mut t = matrix::identity(2);
    loop {
        if f.a.is_zero() {
            break;
        }
        // e₂ ← e₂ + k e₁ with k the nearest integer to −b/a
        let two_a = BigInt::from(2) * &f.a;
        let k = -(BigInt::from(2) * &f.b + &f.a).div_floor(&two_a);
        if !k.is_zero() {
            let new_c = &f.c + BigInt::from(2) * &k * &f.b + &k * &k * &f.a;
            f.b += &k * &f.a;
            f.c = new_c;
            for row in t.iter_mut() {
                let add = &k * &row[0];
                row[1] += add;
            }
        }
        if f.c.abs() < f.a.abs() {
            std::mem::swap(&mut f.a, &mut f.c);
            for row in t.iter_mut() {
                row.swap(0, 1);
            }
            continue;
        }
        break;
    }
    (f, t)
}

fn apply(t: &IntMatrix, x: &[BigInt]) -> Vec<BigInt> {
    matrix::mul_vec(t, x)
}

fn canonical_sign(v: Vec<BigInt>) -> Vec<BigInt> {
    match v.iter().find(|c| !c.is_zero()) {
        Some(c) if c.is_negative() => v.into_iter().map(|c| -c).collect(),
        _ => v,
    }
}

fn witness_from(f: &Form, x: &[BigInt]) -> Option<(Vec<BigInt>, Vec<BigInt>)> {
    if !matrix::content(x).is_one() {
        return None;
    }
    let q = f.value(x);
    if q.is_zero() {
        return None;
    }
    let gx0 = &f.a * &x[0] + &f.b * &x[1];
    let gx1 = &f.b * &x[0] + &f.c * &x[1];
    let g = gx0.gcd(&gx1);
    if g != q.abs() {
        return None;
    }
    let z = vec![&gx1 / &g, -(&gx0 / &g)];
    Some((x.to_vec(), z))
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if n.is_multiple_of(&d) {
            out.push(d.clone());
            let e = &n / &d;
            if e != d {
                out.push(e);
            }
        }
        d += 1;
    }
    out.sort();
    out
}

fn range_vectors(b1: &BigInt, b2: &BigInt) -> Vec<Vec<BigInt>> {
    let mut out = Vec::new();
    let mut x2 = BigInt::zero();
    while &x2 <= b2 {
        let mut x1 = -b1.clone();
        while &x1 <= b1 {
            if !(x2.is_zero() && x1.is_negative()) {
                out.push(vec![x1.clone(), x2.clone()]);
            }
            x1 += 1;
        }
        x2 += 1;
    }
    out
}

fn candidate_vectors(f: &Form, det: &BigInt) -> Result<Vec<Vec<BigInt>>> {
    let abs_det = det.abs();
    if det.is_positive() {
        return Ok(range_vectors(&f.c.abs().sqrt(), &f.a.abs().sqrt()));
    }
    let n = -det.clone();
    let s = n.sqrt();
    if &s * &s == n {
        return Ok(isotropic_candidates(f, &s, &abs_det));
    }

    // N not a square: a ≠ 0 and every orbit meets |x₂| ≤ √(ε|a|)
    let (t, u) = pell_fundamental(&n);
    let eps = t.to_f64().unwrap_or(f64::INFINITY) + u.to_f64().unwrap_or(f64::INFINITY) * n.to_f64().unwrap_or(f64::INFINITY).sqrt();
    let bound = (eps * f.a.abs().to_f64().unwrap_or(f64::INFINITY)).sqrt().floor() + 1.0;
    if !bound.is_finite() || bound > SEARCH_LIMIT as f64 {
        return Err(Error::Precondition(format!(
            "decomposability search region too large (|x₂| ≤ {bound:e})"
        )));
    }
    let b2 = BigInt::from(bound as u64);
    let mut out = Vec::new();
    let divs = divisors(det);
    let mut x2 = BigInt::zero();
    while x2 <= b2 {
        for d in &divs {
            for p in [d.clone(), -d.clone()] {
                // a x₁² + 2b x₂ x₁ + c x₂² − p = 0
                let disc = &n * &x2 * &x2 + &f.a * &p;
                if disc.is_negative() {
                    continue;
                }
                let r = disc.sqrt();
                if &r * &r != disc {
                    continue;
                }
                for root in [-(&f.b * &x2) + &r, -(&f.b * &x2) - &r] {
                    if root.is_multiple_of(&f.a) {
                        let x1 = &root / &f.a;
                        if !(x2.is_zero() && x1.is_negative()) {
                            out.push(vec![x1, x2.clone()]);
                        }
                    }
                }
            }
        }
        x2 += 1;
    }
    Ok(out)
}

/// Every primitive `x` with `0 < |q(x)| ≤ |det|` when `−det = s²`.
///
/// `a q = U·W` with `U = a x₁ + (b − s) x₂`, `W = a x₁ + (b + s) x₂`, so
/// `W − U = 2s x₂`; when `a = 0`, `q = x₂ (2b x₁ + c x₂)` instead. Both cases
/// enumerate factor pairs and solve back for `x`.
fn isotropic_candidates(f: &Form, s: &BigInt, abs_det: &BigInt) -> Vec<Vec<BigInt>> {
    let mut out = Vec::new();
    let mut push = |x1: BigInt, x2: BigInt| {
        if x2.is_positive() || (x2.is_zero() && x1.is_positive()) {
            out.push(vec![x1, x2]);
        }
    };
    let two = BigInt::from(2);
    if f.a.is_zero() {
        let two_b = &two * &f.b;
        let mut x2 = BigInt::one();
        while &x2 <= abs_det {
            let lmax = abs_det / &x2;
            let mut l = -lmax.clone();
            while l <= lmax {
                if !l.is_zero() {
                    let num = &l - &f.c * &x2;
                    if num.is_multiple_of(&two_b) {
                        push(&num / &two_b, x2.clone());
                    }
                }
                l += 1;
            }
            x2 += 1;
        }
        return out;
    }
    let bound = f.a.abs() * abs_det;
    let two_s = &two * s;
    let mut u = -bound.clone();
    while u <= bound {
        if !u.is_zero() {
            let wmax = &bound / u.abs();
            let mut w = -wmax.clone();
            while w <= wmax {
                if !w.is_zero() {
                    let diff = &w - &u;
                    if diff.is_multiple_of(&two_s) {
                        let x2 = &diff / &two_s;
                        let num = &u - (&f.b - s) * &x2;
                        if num.is_multiple_of(&f.a) {
                            push(&num / &f.a, x2);
                        }
                    }
                }
                w += 1;
            }
        }
        u += 1;
    }
    out
}

/// Fundamental solution of `t² − N u² = 1` (N > 0 not a square), from the
/// continued fraction of `√N`.
pub fn pell_fundamental(n: &BigInt) -> (BigInt, BigInt) {
    let a0 = n.sqrt();
    let (mut m, mut d, mut a) = (BigInt::zero(), BigInt::one(), a0.clone());
    let (mut p_prev, mut p) = (BigInt::one(), a0.clone());
    let (mut q_prev, mut q) = (BigInt::zero(), BigInt::one());
    loop {
        if &p * &p - n * &q * &q == BigInt::one() {
            return (p, q);
        }
        m = &d * &a - &m;
        d = (n - &m * &m) / &d;
        a = (&a0 + &m) / &d;
        let p_next = &a * &p + &p_prev;
        let q_next = &a * &q + &q_prev;
        p_prev = std::mem::replace(&mut p, p_next);
        q_prev = std::mem::replace(&mut q, q_next);
    }
}
