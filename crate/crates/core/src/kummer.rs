//! `H²(K_{n−1},ℤ) = H²(X,ℤ) ⊕ ℤe` for a generalized Kummer variety, its
//! Beauville form, and the two explicit descriptions of `θ_v`: the rank-one
//! vector `1 − nω`, and the elliptic-product model with coprime `(r, d)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::cohomology::{mukai_pair, twist, EvenClass, SurfaceModel};
use crate::error::{Error, Result};
use crate::matrix::{self, IntMatrix};

/// `x + k·e` in `H²(X,ℤ) ⊕ ℤe`, where `q(e) = −2n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KummerClass {
    #[serde(with = "crate::json::vec")]
    pub x: Vec<BigInt>,
    #[serde(with = "crate::json::int")]
    pub k: BigInt,
    #[serde(with = "crate::json::int")]
    pub n: BigInt,
}

impl KummerClass {
    pub fn new(x: Vec<BigInt>, k: impl Into<BigInt>, n: impl Into<BigInt>) -> Result<Self> {
        let c = KummerClass { x, k: k.into(), n: n.into() };
        if c.n < BigInt::from(2) {
            return Err(Error::Precondition(format!("Kummer parameter n must be ≥ 2, got {}", c.n)));
        }
        Ok(c)
    }
}

/// `q(x + ke) = (x²) − 2n·k²`.
pub fn beauville_q(c: &KummerClass, s: &SurfaceModel) -> Result<BigInt> {
    s.check_h2(&c.x)?;
    Ok(s.h2_pair(&c.x, &c.x)? - BigInt::from(2) * &c.n * &c.k * &c.k)
}

/// `θ_v` for `v = 1 − nω`: `α = x + k(1 + nω) ↦ x + ke`.
pub fn theta_rank1(alpha: &EvenClass, n: &BigInt, s: &SurfaceModel) -> Result<KummerClass> {
    alpha.check(s)?;
    if alpha.a != n * &alpha.r {
        return Err(Error::NotInPerp(format!(
            "⟨α, 1 − {n}ω⟩ = {} ≠ 0",
            &alpha.a - n * &alpha.r
        )));
    }
    KummerClass::new(alpha.c1.clone(), alpha.r.clone(), n.clone())
}

/// Parameters of `θ_v` on `C₁ × C₂`: `(r, d)` coprime, `(r₁, d₁)` with
/// `d·r₁ − r·d₁ = 1`, `r > r₁ > 0`, `r ≥ 2r₁`, and `⟨v²⟩ = 2n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EllipticThetaData {
    #[serde(with = "crate::json::int")]
    pub r: BigInt,
    #[serde(with = "crate::json::int")]
    pub r1: BigInt,
    #[serde(with = "crate::json::int")]
    pub d: BigInt,
    #[serde(with = "crate::json::int")]
    pub d1: BigInt,
    #[serde(with = "crate::json::int")]
    pub n: BigInt,
}

impl EllipticThetaData {
    pub fn new(r: i64, r1: i64, d: i64, d1: i64, n: i64) -> Result<Self> {
        let t = EllipticThetaData {
            r: r.into(),
            r1: r1.into(),
            d: d.into(),
            d1: d1.into(),
            n: n.into(),
        };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        let det = &self.d * &self.r1 - &self.r * &self.d1;
        if !det.is_one() {
            return Err(Error::Precondition(format!("d·r₁ − r·d₁ = {det}, expected 1")));
        }
        if !(self.r > self.r1 && self.r1.is_positive()) {
            return Err(Error::Precondition(format!(
                "need r > r₁ > 0, got r = {}, r₁ = {}",
                self.r, self.r1
            )));
        }
        if self.r < BigInt::from(2) * &self.r1 {
            return Err(Error::Precondition(format!(
                "need r ≥ 2r₁ (apply the dual first), got r = {}, r₁ = {}",
                self.r, self.r1
            )));
        }
        if !self.n.is_positive() {
            return Err(Error::Precondition(format!("n must be positive, got {}", self.n)));
        }
        Ok(())
    }

    /// The canonical companion `(r₁, d₁)` of coprime `(r, d)`: `r₁ ≡ d⁻¹ mod r`
    /// with `0 < r₁ < r`. Fails when `r < 2` or `gcd(r, d) ≠ 1`.
    pub fn companion(r: &BigInt, d: &BigInt) -> Result<(BigInt, BigInt)> {
        if r < &BigInt::from(2) {
            return Err(Error::Precondition(format!("need r ≥ 2, got {r}")));
        }
        let (g, inv, _) = matrix::ext_gcd(d, r);
        if !g.is_one() {
            return Err(Error::Precondition(format!("gcd(r, d) = {g}, expected 1")));
        }
        let r1 = inv.mod_floor(r);
        let d1 = (d * &r1 - BigInt::one()) / r;
        Ok((r1, d1))
    }

    /// `v = r + d·f₂ − (r−r₁)n·f₁ − (d−d₁)n·ω`, the vector whose complement
    /// the coordinates describe.
    pub fn mukai_vector(&self) -> EvenClass {
        let mut c1 = vec![BigInt::zero(); 6];
        c1[0] = -(&self.r - &self.r1) * &self.n;
        c1[1] = self.d.clone();
        EvenClass::new(self.r.clone(), c1, -(&self.d - &self.d1) * &self.n)
    }

    /// Rows give `(y₁, y₂, y₃, y₄)` as linear forms in `(x₁, x₂, x₃, x₄)`,
    /// where `x = x₁ + x₂f₁ + x₃f₂ + x₄ω + D`. Its determinant is 1.
    pub fn coordinate_matrix(&self) -> IntMatrix {
        let (r, r1, d, d1, n) = (&self.r, &self.r1, &self.d, &self.d1, &self.n);
        let two = BigInt::from(2);
        vec![
            vec![d.clone(), BigInt::zero(), -r, BigInt::zero()],
            vec![-(n * (d - &two * d1)), -(d - d1), n * (r - &two * r1), r - r1],
            vec![-d1, BigInt::zero(), r1.clone(), BigInt::zero()],
            vec![n * (d - d1), d.clone(), -(n * (r - r1)), -r],
        ]
    }
}

/// `θ_v(x)` in coordinates: `y₁..y₄` and the untouched `H¹⊗H¹` block `D`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThetaCoordinates {
    #[serde(with = "crate::json::vec")]
    pub y: Vec<BigInt>,
    #[serde(with = "crate::json::vec")]
    pub d_block: Vec<BigInt>,
}

fn require_elliptic(s: &SurfaceModel) -> Result<()> {
    if !s.is_elliptic_product() {
        return Err(Error::UnsupportedModel(
            "the elliptic-product coordinates need the built-in rank-6 abelian model".into(),
        ));
    }
    Ok(())
}

/// `x ↦ (y₁, y₂, y₃, y₄, D)`; `y₄ = ⟨x, v⟩`, so `x ∈ v^⊥` iff `y₄ = 0`.
pub fn theta_elliptic(x: &EvenClass, t: &EllipticThetaData, s: &SurfaceModel) -> Result<ThetaCoordinates> {
    require_elliptic(s)?;
    t.validate()?;
    x.check(s)?;
    let xs = [x.r.clone(), x.c1[0].clone(), x.c1[1].clone(), x.a.clone()];
    Ok(ThetaCoordinates {
        y: matrix::mul_vec(&t.coordinate_matrix(), &xs),
        d_block: x.c1[2..].to_vec(),
    })
}

fn d_square(d_block: &[BigInt], s: &SurfaceModel) -> BigInt {
    let mut full = vec![BigInt::zero(); 2];
    full.extend(d_block.iter().cloned());
    matrix::bilinear(&s.gram, &full, &full)
}

/// `2y₁y₂ + (D²) − 2n·y₃²`, which equals `⟨x²⟩` on `v^⊥`.
pub fn theta_elliptic_q(x: &EvenClass, t: &EllipticThetaData, s: &SurfaceModel) -> Result<BigInt> {
    let c = theta_elliptic(x, t, s)?;
    if !c.y[3].is_zero() {
        return Err(Error::NotInPerp(format!("y₄ = ⟨x, v⟩ = {} ≠ 0", c.y[3])));
    }
    let two = BigInt::from(2);
    Ok(&two * &c.y[0] * &c.y[1] + d_square(&c.d_block, s) - &two * &t.n * &c.y[2] * &c.y[2])
}

/// The image `y₂f₁ + y₁f₂ + D + y₃e` of `x ∈ v^⊥` in `H²(X) ⊕ ℤe`.
pub fn theta_elliptic_class(x: &EvenClass, t: &EllipticThetaData, s: &SurfaceModel) -> Result<KummerClass> {
    let c = theta_elliptic(x, t, s)?;
    if !c.y[3].is_zero() {
        return Err(Error::NotInPerp(format!("y₄ = ⟨x, v⟩ = {} ≠ 0", c.y[3])));
    }
    let mut h2 = vec![c.y[1].clone(), c.y[0].clone()];
    h2.extend(c.d_block);
    KummerClass::new(h2, c.y[2].clone(), t.n.clone())
}

/// Recovers `x` from `(y₁..y₄, D)` by solving the coordinate system exactly.
pub fn theta_elliptic_inverse(
    coords: &ThetaCoordinates,
    t: &EllipticThetaData,
    s: &SurfaceModel,
) -> Result<EvenClass> {
    require_elliptic(s)?;
    t.validate()?;
    if coords.y.len() != 4 {
        return Err(Error::DimensionMismatch { expected: 4, found: coords.y.len() });
    }
    if coords.d_block.len() != 4 {
        return Err(Error::DimensionMismatch { expected: 4, found: coords.d_block.len() });
    }
    let sol = matrix::solve_rational(&t.coordinate_matrix(), &coords.y)
        .ok_or_else(|| Error::Consistency("coordinate matrix is singular".into()))?;
    let mut xs = Vec::with_capacity(4);
    for q in sol {
        if !q.is_integer() {
            return Err(Error::Consistency(format!("non-integral preimage coordinate {q}")));
        }
        xs.push(q.to_integer());
    }
    let mut c1 = vec![xs[1].clone(), xs[2].clone()];
    c1.extend(coords.d_block.iter().cloned());
    Ok(EvenClass::new(xs[0].clone(), c1, xs[3].clone()))
}

/// Result of [`normalize_elliptic_vector`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NormalizedVector {
    pub v_prime: EvenClass,
    #[serde(with = "crate::json::int")]
    pub s1: BigInt,
    #[serde(with = "crate::json::int")]
    pub a1: BigInt,
    #[serde(with = "crate::json::int")]
    pub n: BigInt,
    /// The twist `−(n + s₁)f₁` that was applied, as an `H²` vector.
    #[serde(with = "crate::json::vec")]
    pub twist: Vec<BigInt>,
}

/// Brings `v = r + (d·f₂ + s·f₁) + aω` to the shape
/// `r + d·f₂ − (r−r₁)n·f₁ − (d−d₁)n·ω` by twisting with `−(n + s₁)f₁`.
///
/// With `n = ds − ra` one has `s = n·r₁ + s₁·r` and `a = n·d₁ + a₁·d` where
/// `s₁ = a₁ = a·r₁ − s·d₁`.
pub fn normalize_elliptic_vector(
    v: &EvenClass,
    r1: &BigInt,
    d1: &BigInt,
    s: &SurfaceModel,
) -> Result<NormalizedVector> {
    require_elliptic(s)?;
    v.check(s)?;
    if v.c1[2..].iter().any(|c| !c.is_zero()) {
        return Err(Error::Precondition("v must have no H¹⊗H¹ component".into()));
    }
    let (r, sf, d, a) = (&v.r, &v.c1[0], &v.c1[1], &v.a);
    if !r.gcd(d).is_one() {
        return Err(Error::Precondition(format!("gcd(r, d) = {} ≠ 1", r.gcd(d))));
    }
    let det = d * r1 - r * d1;
    if !det.is_one() {
        return Err(Error::Precondition(format!("d·r₁ − r·d₁ = {det}, expected 1")));
    }
    if !(r > r1 && r1.is_positive()) {
        return Err(Error::Precondition(format!("need r > r₁ > 0, got r = {r}, r₁ = {r1}")));
    }
    let n = d * sf - r * a;
    if !n.is_positive() {
        return Err(Error::Precondition(format!("⟨v²⟩ = {} must be positive", BigInt::from(2) * &n)));
    }

    let s1 = a * r1 - sf * d1;
    let a1 = s1.clone();
    if &n * r1 + &s1 * r != *sf || &n * d1 + &a1 * d != *a {
        return Err(Error::Consistency("congruences for s₁, a₁ have no solution".into()));
    }
    let mut ell = vec![BigInt::zero(); 6];
    ell[0] = -(&n + &s1);
    let v_prime = twist(v, &ell, s)?;

    let target = EllipticThetaData {
        r: r.clone(),
        r1: r1.clone(),
        d: d.clone(),
        d1: d1.clone(),
        n: n.clone(),
    }
    .mukai_vector();
    if v_prime != target {
        return Err(Error::Consistency(format!(
            "twisted vector {} does not have the normalized shape {}",
            v_prime.display(s),
            target.display(s)
        )));
    }
    Ok(NormalizedVector { v_prime, s1, a1, n, twist: ell })
}

/// `y₄(x) = ⟨x, v⟩` for the vector attached to `t`.
pub fn y4_matches_pairing(x: &EvenClass, t: &EllipticThetaData, s: &SurfaceModel) -> Result<bool> {
    let c = theta_elliptic(x, t, s)?;
    Ok(c.y[3] == mukai_pair(x, &t.mukai_vector(), s)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;
    use proptest::prelude::*;

    fn b(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn full() -> SurfaceModel {
        SurfaceModel::abelian_full()
    }

    fn t231() -> EllipticThetaData {
        EllipticThetaData::new(2, 1, 1, 0, 3).unwrap()
    }

    #[test]
    fn beauville_examples() {
        let s = full();
        let e = KummerClass::new(vec![b(0); 6], 1, 3).unwrap();
        assert_eq!(beauville_q(&e, &s).unwrap(), b(-6));
        for n in 2..6 {
            let c = KummerClass::new(vec![b(1), b(1), b(0), b(0), b(0), b(0)], 0, n).unwrap();
            assert_eq!(beauville_q(&c, &s).unwrap(), b(2));
        }
        let h = SurfaceModel::ns_rank1(1).unwrap();
        let c = KummerClass::new(vec![b(1)], 1, 4).unwrap();
        assert_eq!(beauville_q(&c, &h).unwrap(), b(-6));
        assert!(KummerClass::new(vec![b(1)], 1, 1).is_err());
    }

    #[test]
    fn rank_one_theta() {
        let s = full();
        let x = vec![b(1), b(-2), b(0), b(3), b(0), b(1)];
        let c = theta_rank1(&EvenClass::new(0, x.clone(), 0), &b(3), &s).unwrap();
        assert_eq!((c.x, c.k), (x, b(0)));

        let e = theta_rank1(&EvenClass::from_i64(1, &[0; 6], 3), &b(3), &s).unwrap();
        assert_eq!((e.x.clone(), e.k.clone()), (vec![b(0); 6], b(1)));
        let alpha = EvenClass::from_i64(1, &[0; 6], 3);
        assert_eq!(beauville_q(&e, &s).unwrap(), mukai_pair(&alpha, &alpha, &s).unwrap());
        assert_eq!(beauville_q(&e, &s).unwrap(), b(-6));

        assert!(matches!(
            theta_rank1(&EvenClass::from_i64(1, &[0; 6], 2), &b(3), &s),
            Err(Error::NotInPerp(_))
        ));
    }

    #[test]
    fn elliptic_examples() {
        let (s, t) = (full(), t231());
        let y = |x: &EvenClass| theta_elliptic(x, &t, &s).unwrap().y;

        assert_eq!(y(&EvenClass::point(6)), vec![b(0), b(1), b(0), b(-2)]);
        let v = t.mukai_vector();
        assert_eq!(y(&v)[3], b(6));
        assert_eq!(mukai_pair(&v, &v, &s).unwrap(), b(6));

        let x = EvenClass::from_i64(1, &[0, 1, 0, 0, 0, 0], 0);
        assert_eq!(y(&x), vec![b(-1), b(-3), b(1), b(0)]);
        assert_eq!(theta_elliptic_q(&x, &t, &s).unwrap(), b(0));
        assert_eq!(mukai_pair(&x, &x, &s).unwrap(), b(0));

        let dx = EvenClass::from_i64(0, &[0, 0, 2, -1, 3, 1], 0);
        assert_eq!(theta_elliptic_q(&dx, &t, &s).unwrap(), mukai_pair(&dx, &dx, &s).unwrap());

        assert!(matches!(theta_elliptic_q(&EvenClass::point(6), &t, &s), Err(Error::NotInPerp(_))));
        let h = SurfaceModel::ns_rank1(1).unwrap();
        assert!(matches!(
            theta_elliptic(&EvenClass::from_i64(1, &[0], 0), &t, &h),
            Err(Error::UnsupportedModel(_))
        ));
    }

    #[test]
    fn theta_data_validation() {
        assert!(EllipticThetaData::new(2, 1, 1, 1, 3).is_err());
        assert!(EllipticThetaData::new(3, 2, 2, 1, 3).is_err()); // r < 2r₁
        assert!(EllipticThetaData::new(2, 1, 1, 0, 0).is_err());
        let (r1, d1) = EllipticThetaData::companion(&b(5), &b(3)).unwrap();
        assert_eq!((r1, d1), (b(2), b(1)));
        assert!(EllipticThetaData::companion(&b(4), &b(2)).is_err());
    }

    #[test]
    fn coordinate_matrix_is_unimodular() {
        for (r, d) in [(2, 1), (3, 1), (5, 2), (7, 3), (9, 4), (10, 3)] {
            let (r1, d1) = EllipticThetaData::companion(&b(r), &b(d)).unwrap();
            for n in 1..8 {
                let t = EllipticThetaData { r: b(r), r1: r1.clone(), d: b(d), d1: d1.clone(), n: b(n) };
                assert!(matrix::det(&t.coordinate_matrix()).abs().is_one());
            }
        }
    }

    #[test]
    fn image_of_perp_has_full_rank() {
        let (s, t) = (full(), t231());
        let l = crate::lattice::IntegralLattice::mukai(&s);
        let perp = crate::lattice::orthogonal_complement(&t.mukai_vector().to_coords(), &l).unwrap();
        let images: IntMatrix = perp
            .basis
            .unwrap()
            .iter()
            .map(|row| {
                let x = EvenClass::from_coords(row).unwrap();
                let c = theta_elliptic_class(&x, &t, &s).unwrap();
                let mut out = c.x.clone();
                out.push(c.k);
                out
            })
            .collect();
        assert_eq!(matrix::rank(&images), 7);
        assert!(matrix::det(&images).abs().is_one());
    }

    #[test]
    fn e_coefficient_is_surjective() {
        for (r, d) in [(2, 1), (3, 2), (7, 5), (11, 4)] {
            let (r1, d1) = EllipticThetaData::companion(&b(r), &b(d)).unwrap();
            assert!(r1.gcd(&d1).is_one());
        }
    }

    #[test]
    fn normalization_examples() {
        let s = full();
        let v = EvenClass::from_i64(3, &[3, 1, 0, 0, 0, 0], 0);
        let out = normalize_elliptic_vector(&v, &b(1), &b(0), &s).unwrap();
        assert_eq!((out.s1.clone(), out.a1.clone(), out.n.clone()), (b(0), b(0), b(3)));
        assert_eq!(out.v_prime, EvenClass::from_i64(3, &[-6, 1, 0, 0, 0, 0], -3));

        let bad = EvenClass::from_i64(2, &[3, 1, 0, 0, 0, 0], 0);
        assert!(normalize_elliptic_vector(&bad, &b(1), &b(1), &s).is_err());

        // already normalized: the twist is trivial
        let again = normalize_elliptic_vector(&out.v_prime, &b(1), &b(0), &s).unwrap();
        assert_eq!(again.v_prime, out.v_prime);
        assert!(again.twist.iter().all(Zero::is_zero));

        let isotropic = EvenClass::from_i64(3, &[0, 1, 0, 0, 0, 0], 0);
        assert!(normalize_elliptic_vector(&isotropic, &b(1), &b(0), &s).is_err());
    }

    fn class8() -> impl Strategy<Value = EvenClass> {
        proptest::collection::vec(-50i64..=50, 8)
            .prop_map(|v| EvenClass::from_coords(&v.into_iter().map(BigInt::from).collect::<Vec<_>>()).unwrap())
    }

    fn theta_data() -> impl Strategy<Value = EllipticThetaData> {
        (2i64..12, -20i64..20, 2i64..12)
            .prop_filter_map("coprime with r ≥ 2r₁", |(r, d, n)| {
                let (r1, d1) = EllipticThetaData::companion(&b(r), &b(d)).ok()?;
                let t = EllipticThetaData { r: b(r), r1, d: b(d), d1, n: b(n) };
                t.validate().ok().map(|_| t)
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn rank_one_theta_is_isometric(x in proptest::collection::vec(-40i64..=40, 6), k in -40i64..=40, n in 2i64..20) {
            let s = full();
            let alpha = EvenClass::new(k, x.into_iter().map(BigInt::from).collect(), n * k);
            let c = theta_rank1(&alpha, &b(n), &s).unwrap();
            prop_assert_eq!(beauville_q(&c, &s).unwrap(), mukai_pair(&alpha, &alpha, &s).unwrap());
        }

        #[test]
        fn elliptic_theta_is_isometric_on_perp(t in theta_data(), x in class8()) {
            let s = full();
            prop_assert!(y4_matches_pairing(&x, &t, &s).unwrap());
            // project x into v^⊥ (over ℚ, scaled to stay integral)
            let v = t.mukai_vector();
            let v2 = mukai_pair(&v, &v, &s).unwrap();
            let xv = mukai_pair(&x, &v, &s).unwrap();
            let p = x.scale(&v2).add(&v.scale(&-xv));
            let q = theta_elliptic_q(&p, &t, &s).unwrap();
            prop_assert_eq!(&q, &mukai_pair(&p, &p, &s).unwrap());
            prop_assert_eq!(beauville_q(&theta_elliptic_class(&p, &t, &s).unwrap(), &s).unwrap(), q);
        }

        #[test]
        fn elliptic_theta_is_linear(t in theta_data(), x in class8(), y in class8(), k in -9i64..9) {
            let s = full();
            let lhs = theta_elliptic(&x.add(&y.scale(&b(k))), &t, &s).unwrap();
            let (tx, ty) = (theta_elliptic(&x, &t, &s).unwrap(), theta_elliptic(&y, &t, &s).unwrap());
            let rhs: Vec<BigInt> = tx.y.iter().zip(&ty.y).map(|(a, c)| a + c * b(k)).collect();
            prop_assert_eq!(lhs.y, rhs);
        }

        #[test]
        fn elliptic_inverse_roundtrip(t in theta_data(), x in class8()) {
            let s = full();
            let c = theta_elliptic(&x, &t, &s).unwrap();
            prop_assert_eq!(theta_elliptic_inverse(&c, &t, &s).unwrap(), x);
        }

        #[test]
        fn normalization_roundtrip(t in theta_data(), s1 in -6i64..6) {
            let s = full();
            // any v = r + d f₂ + s f₁ + aω with ds − ra = n, built from the target by a twist
            let mut ell = vec![BigInt::zero(); 6];
            ell[0] = b(s1) * b(t.n.to_i64().unwrap() + 1);
            let v = twist(&t.mukai_vector(), &ell, &s).unwrap();
            let out = normalize_elliptic_vector(&v, &t.r1, &t.d1, &s).unwrap();
            prop_assert_eq!(&out.v_prime, &t.mukai_vector());
            let back: Vec<BigInt> = out.twist.iter().map(|c| -c).collect();
            prop_assert_eq!(twist(&out.v_prime, &back, &s).unwrap(), v);
        }
    }
}
