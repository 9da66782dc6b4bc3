//! Classification of Mukai vectors on an abelian surface by `⟨v²⟩`, and the
//! passage from `⟨v²⟩ = 4` on `X` to an isotropic Mukai vector on `Km(X)`.
//!
//! `NS(Km(X))` is only seen through intersection numbers on the blow-up `X̃` of
//! `X` at the 16 two-torsion points: `(π*N)² = 2n`, `E_i² = −1`, mixed terms 0.
//! A class descending along the double cover `X̃ → Km(X)` has half the
//! self-intersection, and the `(−2)`-curve `C_i` pulls back to `2E_i`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::cohomology::{mukai_square, EvenClass, SurfaceKind, SurfaceModel};
use crate::error::{Error, Result};
use crate::lattice::{self, IntegralLattice};
use crate::matrix;

/// `v = r + dN + aω` with `N` a `(1,n)`-polarization.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolarizedVector {
    #[serde(with = "crate::json::int")]
    pub r: BigInt,
    #[serde(with = "crate::json::int")]
    pub d: BigInt,
    #[serde(with = "crate::json::int")]
    pub n: BigInt,
    #[serde(with = "crate::json::int")]
    pub a: BigInt,
}

impl PolarizedVector {
    pub fn new(r: i64, d: i64, n: i64, a: i64) -> Self {
        PolarizedVector { r: r.into(), d: d.into(), n: n.into(), a: a.into() }
    }

    /// `⟨v²⟩ = 2d²n − 2ra`.
    pub fn square(&self) -> BigInt {
        BigInt::from(2) * &self.d * &self.d * &self.n - BigInt::from(2) * &self.r * &self.a
    }

    pub fn validate(&self) -> Result<()> {
        if !self.r.is_positive() {
            return Err(Error::Precondition(format!("rank r = {} must be positive", self.r)));
        }
        if !self.n.is_positive() {
            return Err(Error::Precondition(format!("(N²)/2 = {} must be positive", self.n)));
        }
        if !self.r.gcd(&self.d).is_one() {
            return Err(Error::Precondition(format!("(r, d) = {} ≠ 1", self.r.gcd(&self.d))));
        }
        Ok(())
    }

    /// `v · ch(N)`: `(r, d + r, a + 2nd + rn)`.
    pub fn twist_by_polarization(&self) -> PolarizedVector {
        PolarizedVector {
            r: self.r.clone(),
            d: &self.d + &self.r,
            n: self.n.clone(),
            a: &self.a + BigInt::from(2) * &self.n * &self.d + &self.r * &self.n,
        }
    }
}

/// `π*(N)·dN_coeff/2 + Σ (m_i/2) E_i` on `X̃`, with both coefficients doubled so
/// half-integers are exact.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TildeClass {
    #[serde(with = "crate::json::int")]
    pub dn_coeff: BigInt,
    #[serde(with = "crate::json::vec")]
    pub m: Vec<BigInt>,
    #[serde(with = "crate::json::int")]
    pub n: BigInt,
}

impl TildeClass {
    /// Four times the self-intersection on `X̃`.
    pub fn square_quarters(&self) -> BigInt {
        let m2: BigInt = self.m.iter().map(|m| m * m).sum();
        &self.dn_coeff * &self.dn_coeff * BigInt::from(2) * &self.n - m2
    }

    /// `(ξ²)` of the descended class on `Km(X)`: half of the `X̃` value.
    pub fn descended_square(&self) -> Result<BigInt> {
        let (q, rem) = self.square_quarters().div_rem(&BigInt::from(8));
        if !rem.is_zero() {
            return Err(Error::Consistency(format!(
                "(N₁²)/2 = {}/8 is not an integer",
                self.square_quarters()
            )));
        }
        Ok(q)
    }

    /// `ξ·C_i = (q*ξ · 2E_i)/2 = −m_i/2`.
    pub fn degree_on_curve(&self, i: usize) -> Result<BigInt> {
        let m = self
            .m
            .get(i)
            .ok_or_else(|| Error::Precondition(format!("curve index {} outside 1..16", i + 1)))?;
        if m.is_odd() {
            return Err(Error::Consistency(format!("ξ·C_{} = {}/2 is not integral", i + 1, -m)));
        }
        Ok(-(m / BigInt::from(2)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CaseTag {
    #[serde(rename = "I-even-a")]
    EvenRankEvenA,
    #[serde(rename = "I-odd-a")]
    EvenRankOddA,
    #[serde(rename = "II")]
    OddRank,
}

impl CaseTag {
    pub fn as_str(self) -> &'static str {
        match self {
            CaseTag::EvenRankEvenA => "I-even-a",
            CaseTag::EvenRankOddA => "I-odd-a",
            CaseTag::OddRank => "II",
        }
    }
}

/// `w = r + ξ + bω` on `Km(X)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KummerK3Vector {
    #[serde(with = "crate::json::int")]
    pub r: BigInt,
    pub xi: TildeClass,
    #[serde(with = "crate::json::int")]
    pub xi_square: BigInt,
    #[serde(with = "crate::json::int")]
    pub b: BigInt,
    pub case_tag: CaseTag,
    /// The vector actually used, after the twist by `N` in the odd-rank case.
    pub source: PolarizedVector,
    /// Curves `C_i` (1-based) carrying the special coefficient in the even-rank case.
    pub special_curves: Vec<usize>,
}

impl KummerK3Vector {
    /// `⟨w²⟩ = (ξ²) − 2rb`.
    pub fn square(&self) -> BigInt {
        &self.xi_square - BigInt::from(2) * &self.r * &self.b
    }

    /// Multiplicities `k_i` of the elementary transformation along `C_i`.
    pub fn k_profile(&self) -> Vec<BigInt> {
        let r = &self.r;
        match self.case_tag {
            CaseTag::OddRank => vec![(r - 1) / 2; 16],
            _ => {
                let mut k = vec![(r - 2) / 2; 4];
                k.extend(vec![r / 2; 12]);
                k
            }
        }
    }
}

/// Printed closed form of `(ξ²)` for the case: `r(a−2r+2)`, `r(a−2r+1)` or
/// `r(a−2r+4)`, with `a` taken from the (possibly twisted) source vector.
pub fn xi_square_closed_form(tag: CaseTag, p: &PolarizedVector) -> BigInt {
    let (r, a) = (&p.r, &p.a);
    let shift = match tag {
        CaseTag::EvenRankEvenA => 2,
        CaseTag::EvenRankOddA => 1,
        CaseTag::OddRank => 4,
    };
    r * (a - BigInt::from(2) * r + BigInt::from(shift))
}

pub fn kummer_k3_vector(p: &PolarizedVector) -> Result<KummerK3Vector> {
    p.validate()?;
    let v2 = p.square();
    if v2 != BigInt::from(4) {
        return Err(Error::Precondition(format!("⟨v²⟩ = {v2}, the correspondence needs 4")));
    }
    let two = BigInt::from(2);
    let (tag, source, m) = if p.r.is_even() {
        if p.d.is_even() {
            return Err(Error::Precondition("r even forces d odd since (r, d) = 1".into()));
        }
        if p.n.is_odd() {
            return Err(Error::Precondition(format!("r even needs n even, got n = {}", p.n)));
        }
        let mut m = vec![&p.r - &two; 4];
        m.extend(vec![p.r.clone(); 12]);
        if p.a.is_even() {
            (CaseTag::EvenRankEvenA, p.clone(), m)
        } else {
            // N₂ = N₁(−rE₁)
            m[0] -= &two * &p.r;
            (CaseTag::EvenRankOddA, p.clone(), m)
        }
    } else {
        let source = if p.d.is_odd() { p.twist_by_polarization() } else { p.clone() };
        (CaseTag::OddRank, source, vec![&p.r - BigInt::one(); 16])
    };

    let xi = TildeClass { dn_coeff: &two * &source.d, m, n: source.n.clone() };
    let xi_square = xi.descended_square()?;
    if xi_square.is_odd() {
        return Err(Error::Consistency(format!("(ξ²) = {xi_square} is odd; NS(Km(X)) is even")));
    }
    let closed = xi_square_closed_form(tag, &source);
    if xi_square != closed {
        return Err(Error::Consistency(format!(
            "(ξ²) = {xi_square} disagrees with the closed form {closed}"
        )));
    }
    let (b, rem) = xi_square.div_rem(&(&two * &p.r));
    if !rem.is_zero() {
        return Err(Error::Consistency(format!("b = (ξ²)/2r = {xi_square}/{} is not integral", &two * &p.r)));
    }
    let w = KummerK3Vector {
        r: p.r.clone(),
        xi,
        xi_square,
        b,
        case_tag: tag,
        source,
        special_curves: if tag == CaseTag::OddRank { vec![] } else { vec![1, 2, 3, 4] },
    };
    if !w.square().is_zero() {
        return Err(Error::Consistency(format!("⟨w²⟩ = {} ≠ 0", w.square())));
    }
    Ok(w)
}

/// `⟨v(G)²⟩ = 4r² − Σ k_i(r − k_i)` for the elementary transformation `G`.
pub fn elementary_transform_square(r: &BigInt, k: &[BigInt]) -> Result<BigInt> {
    if k.len() != 16 {
        return Err(Error::DimensionMismatch { expected: 16, found: k.len() });
    }
    if let Some(bad) = k.iter().find(|ki| ki.is_negative() || *ki > r) {
        return Err(Error::Precondition(format!("k_i = {bad} outside [0, {r}]")));
    }
    let sum: BigInt = k.iter().map(|ki| ki * (r - ki)).sum();
    Ok(BigInt::from(4) * r * r - sum)
}

/// Whether `r | ξ·C_i` (1-based `i`), the condition for the locus over `C_i`
/// to be nonempty.
pub fn nonrigid_locus(w: &KummerK3Vector, i: usize) -> Result<bool> {
    if !(1..=16).contains(&i) {
        return Err(Error::Precondition(format!("curve index {i} outside 1..16")));
    }
    let deg = w.xi.degree_on_curve(i - 1)?;
    Ok(deg.is_multiple_of(&w.r))
}

/// Expected value of [`nonrigid_locus`] by rank: always for `r = 1`, exactly
/// the four special curves for `r = 2`, never for `r > 2`.
pub fn expected_nonrigid(r: &BigInt, i: usize) -> bool {
    if r.is_one() {
        true
    } else if *r == BigInt::from(2) {
        i <= 4
    } else {
        false
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KummerVectorChecks {
    pub w_isotropic: bool,
    pub xi_square_even: bool,
    pub xi_matches_closed_form: bool,
    pub transform_square_is_four: bool,
    pub nonrigid_pattern: bool,
}

impl KummerVectorChecks {
    pub fn all(&self) -> bool {
        self.w_isotropic
            && self.xi_square_even
            && self.xi_matches_closed_form
            && self.transform_square_is_four
            && self.nonrigid_pattern
    }
}

/// `kummer-vector` output: `w`, the transform data and every check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KummerVectorReport {
    pub input: PolarizedVector,
    pub w: KummerK3Vector,
    #[serde(with = "crate::json::int")]
    pub w_square: BigInt,
    #[serde(with = "crate::json::int")]
    pub xi_square_closed_form: BigInt,
    #[serde(with = "crate::json::vec")]
    pub k_profile: Vec<BigInt>,
    #[serde(with = "crate::json::int")]
    pub transform_square: BigInt,
    pub nonrigid: Vec<bool>,
    pub checks: KummerVectorChecks,
}

pub fn kummer_vector_report(p: &PolarizedVector) -> Result<KummerVectorReport> {
    let w = kummer_k3_vector(p)?;
    let closed = xi_square_closed_form(w.case_tag, &w.source);
    let k_profile = w.k_profile();
    let transform_square = elementary_transform_square(&w.r, &k_profile)?;
    let nonrigid = (1..=16).map(|i| nonrigid_locus(&w, i)).collect::<Result<Vec<_>>>()?;
    let checks = KummerVectorChecks {
        w_isotropic: w.square().is_zero(),
        xi_square_even: w.xi_square.is_even(),
        xi_matches_closed_form: w.xi_square == closed,
        transform_square_is_four: transform_square == BigInt::from(4),
        nonrigid_pattern: nonrigid.iter().enumerate().all(|(i, &f)| f == expected_nonrigid(&w.r, i + 1)),
    };
    Ok(KummerVectorReport {
        input: p.clone(),
        w_square: w.square(),
        w,
        xi_square_closed_form: closed,
        k_profile,
        transform_square,
        nonrigid,
        checks,
    })
}

/// All valid `(r, d, n, a)` with `1 ≤ r ≤ r_max`, `1 ≤ n ≤ n_max`,
/// `|a| ≤ a_max` and `⟨v²⟩ = 4`; `d` runs over both signs.
pub fn polarized_vectors_with_square_four(r_max: i64, n_max: i64, a_max: i64) -> Vec<PolarizedVector> {
    let mut out = Vec::new();
    for r in 1..=r_max {
        for n in 1..=n_max {
            for a in -a_max..=a_max {
                // d²n = 2 + ra
                let rhs = 2 + r * a;
                if rhs < 0 || rhs % n != 0 {
                    continue;
                }
                let d2 = rhs / n;
                let d = (d2 as f64).sqrt().round() as i64;
                if d * d != d2 {
                    continue;
                }
                let signs: &[i64] = if d == 0 { &[0] } else { &[d, -d] };
                for &d in signs {
                    if num_integer::gcd(r, d) == 1 {
                        out.push(PolarizedVector::new(r, d, n, a));
                    }
                }
            }
        }
    }
    out
}

/// The report of [`classify`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub v: EvenClass,
    #[serde(with = "crate::json::int")]
    pub mukai_square: BigInt,
    pub regime: String,
    pub statement: String,
    #[serde(skip_serializing_if = "Option::is_none", with = "opt_int")]
    pub dim_moduli: Option<BigInt>,
    #[serde(skip_serializing_if = "Option::is_none", with = "opt_int")]
    pub dim_albanese_fiber: Option<BigInt>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub perp: Option<IntegralLattice>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub indecomposable: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub polarized: Option<PolarizedVector>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kummer_k3: Option<KummerK3Vector>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

mod opt_int {
    use num_bigint::BigInt;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(v: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(x) => s.serialize_str(&x.to_string()),
            None => s.serialize_none(),
        }
    }
}

/// Classifies `v` on an abelian surface by `⟨v²⟩`.
pub fn classify(v: &EvenClass, s: &SurfaceModel) -> Result<Classification> {
    if s.kind != SurfaceKind::Abelian {
        return Err(Error::UnsupportedModel("classification is for abelian surfaces".into()));
    }
    v.check(s)?;
    if !v.r.is_positive() {
        return Err(Error::Precondition(format!("hypothesis r > 0 fails: r = {}", v.r)));
    }
    let mut head = vec![v.r.clone()];
    head.extend(v.c1.iter().cloned());
    if !matrix::content(&head).is_one() {
        return Err(Error::Precondition(format!(
            "hypothesis \"r + ξ primitive\" fails: content {}",
            matrix::content(&head)
        )));
    }
    let v2 = mukai_square(v, s)?;
    let two = BigInt::from(2);
    let mut out = Classification {
        v: v.clone(),
        mukai_square: v2.clone(),
        regime: String::new(),
        statement: String::new(),
        dim_moduli: (!v2.is_negative()).then(|| &v2 + &two),
        dim_albanese_fiber: (v2 >= two).then(|| &v2 - &two),
        perp: None,
        indecomposable: None,
        verdict: None,
        polarized: None,
        kummer_k3: None,
        note: None,
    };
    match v2.to_i64() {
        Some(x) if x < 0 => {
            out.regime = "negative".into();
            out.statement = "M_H(v) is empty".into();
        }
        Some(0) => {
            out.regime = "0".into();
            out.statement = "M_H(v) is an abelian surface".into();
        }
        Some(2) => {
            out.regime = "2".into();
            out.statement = "M_H(v) ≅ X × X̂ via the Albanese map".into();
        }
        Some(4) => {
            out.regime = "4".into();
            out.statement = "K_H(v) ≅ M_{H′}(w) on Km(X) for an isotropic w".into();
            classify_square_four(v, s, &mut out)?;
        }
        _ => {
            out.regime = "≥6".into();
            out.statement = "K_H(v) is an irreducible symplectic manifold".into();
            let perp = lattice::mukai_perp(v, s)?;
            if perp.rank() == 2 {
                let indecomposable = !lattice::is_decomposable_rank2(&perp)?.decomposable;
                out.indecomposable = Some(indecomposable);
                if indecomposable {
                    out.verdict = Some(format!(
                        "not birational to Ŷ × Hilb^{} for any abelian surface Y",
                        &v2 / &two
                    ));
                }
            }
            out.perp = Some(perp);
        }
    }
    Ok(out)
}

fn classify_square_four(v: &EvenClass, s: &SurfaceModel, out: &mut Classification) -> Result<()> {
    let d = matrix::content(&v.c1);
    if d.is_zero() {
        out.note = Some("ξ = 0: no polarization to build the Kummer K3 vector from".into());
        return Ok(());
    }
    let primitive: Vec<BigInt> = v.c1.iter().map(|c| c / &d).collect();
    let nn = s.h2_pair(&primitive, &primitive)?;
    if !nn.is_positive() {
        out.note = Some(format!("ξ/d has (N²) = {nn} ≤ 0, not a polarization"));
        return Ok(());
    }
    let p = PolarizedVector { r: v.r.clone(), d, n: nn / 2, a: v.a.clone() };
    match kummer_k3_vector(&p) {
        Ok(w) => out.kummer_k3 = Some(w),
        Err(e) => out.note = Some(e.to_string()),
    }
    out.polarized = Some(p);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn case_examples() {
        let w = kummer_k3_vector(&PolarizedVector::new(2, 1, 4, 1)).unwrap();
        assert_eq!(w.case_tag, CaseTag::EvenRankOddA);
        assert_eq!((w.xi_square.clone(), w.b.clone()), (b(-4), b(-1)));
        assert!(w.square().is_zero());

        let w = kummer_k3_vector(&PolarizedVector::new(2, 1, 6, 2)).unwrap();
        assert_eq!(w.case_tag, CaseTag::EvenRankEvenA);
        assert_eq!((w.xi_square.clone(), w.b.clone()), (b(0), b(0)));

        let w = kummer_k3_vector(&PolarizedVector::new(3, 2, 2, 2)).unwrap();
        assert_eq!(w.case_tag, CaseTag::OddRank);
        assert_eq!((w.xi_square.clone(), w.b.clone()), (b(0), b(0)));
        assert_eq!(w.source, PolarizedVector::new(3, 2, 2, 2));
    }

    #[test]
    fn odd_rank_odd_degree_is_twisted() {
        // r = 1, d = 1: d²n = 2 + a
        let p = PolarizedVector::new(1, 1, 3, 1);
        let w = kummer_k3_vector(&p).unwrap();
        assert_eq!(w.source.d, b(2));
        assert_eq!(w.source.square(), b(4));
        assert_eq!(w.xi_square, xi_square_closed_form(CaseTag::OddRank, &w.source));
    }

    #[test]
    fn case_errors() {
        assert!(kummer_k3_vector(&PolarizedVector::new(2, 1, 1, 0)).is_err()); // ⟨v²⟩ = 2
        assert!(kummer_k3_vector(&PolarizedVector::new(2, 2, 1, 0)).is_err()); // not coprime
        assert!(kummer_k3_vector(&PolarizedVector::new(0, 1, 2, 0)).is_err());
    }

    #[test]
    fn report_checks() {
        let rep = kummer_vector_report(&PolarizedVector::new(2, 1, 4, 1)).unwrap();
        assert!(rep.checks.all());
        assert_eq!(rep.nonrigid.iter().filter(|&&f| f).count(), 4);
        let json: serde_json::Value =
            serde_json::from_str(&crate::json::to_canonical_string(&rep).unwrap()).unwrap();
        assert_eq!(json["w"]["case_tag"], "I-odd-a");
        assert_eq!(json["w"]["xi_square"], "-4");
        assert_eq!(json["checks"]["w_isotropic"], true);
    }

    #[test]
    fn transform_square_examples() {
        let mut k = vec![b(0); 4];
        k.extend(vec![b(1); 12]);
        assert_eq!(elementary_transform_square(&b(2), &k).unwrap(), b(4));
        assert_eq!(elementary_transform_square(&b(3), &vec![b(1); 16]).unwrap(), b(4));
        for r in 1..6 {
            assert_eq!(elementary_transform_square(&b(r), &vec![b(0); 16]).unwrap(), b(4 * r * r));
        }
        assert!(elementary_transform_square(&b(2), &vec![b(3); 16]).is_err());
        assert!(elementary_transform_square(&b(2), &[b(1)]).is_err());
    }

    #[test]
    fn nonrigid_examples() {
        let w = kummer_k3_vector(&PolarizedVector::new(2, 1, 6, 2)).unwrap();
        for i in 1..=16 {
            assert_eq!(nonrigid_locus(&w, i).unwrap(), i <= 4, "i = {i}");
        }
        assert!(nonrigid_locus(&w, 0).is_err());
        assert!(nonrigid_locus(&w, 17).is_err());

        // rank 4 with ξ·C_i = −1 on every curve
        let mut fake = w.clone();
        fake.r = b(4);
        fake.xi.m = vec![b(2); 16];
        assert!((1..=16).all(|i| !nonrigid_locus(&fake, i).unwrap()));
    }

    #[test]
    fn scan_small_range() {
        let all = polarized_vectors_with_square_four(10, 40, 40);
        assert!(all.len() > 100);
        for p in all {
            let w = kummer_k3_vector(&p).unwrap();
            assert!(w.square().is_zero());
            assert_eq!(elementary_transform_square(&w.r, &w.k_profile()).unwrap(), b(4));
            assert!(w.xi_square.is_even());
            for i in 1..=16 {
                assert_eq!(nonrigid_locus(&w, i).unwrap(), expected_nonrigid(&w.r, i));
            }
        }
    }

    #[test]
    fn classify_indecomposable_rank_two_perp() {
        let s = SurfaceModel::ns_rank1(1).unwrap();
        let c = classify(&EvenClass::from_i64(2, &[1], -2), &s).unwrap();
        assert_eq!(c.mukai_square, b(10));
        assert_eq!(c.dim_moduli, Some(b(12)));
        assert_eq!(c.dim_albanese_fiber, Some(b(8)));
        assert_eq!(c.regime, "≥6");
        assert_eq!(c.perp.as_ref().unwrap().gram, matrix::from_i64(&[&[-2, -1], &[-1, 2]]));
        assert_eq!(c.indecomposable, Some(true));
        assert!(c.verdict.as_ref().unwrap().contains("Hilb^5"));
    }

    #[test]
    fn classify_other_regimes() {
        let s = SurfaceModel::ns_rank1(1).unwrap();
        let c = classify(&EvenClass::from_i64(1, &[0], -1), &s).unwrap();
        assert_eq!((c.regime.as_str(), c.mukai_square.clone()), ("2", b(2)));
        assert!(c.statement.contains("X × X̂"));

        let s4 = SurfaceModel::ns_rank1(4).unwrap();
        let c = classify(&EvenClass::from_i64(2, &[1], 1), &s4).unwrap();
        assert_eq!(c.regime, "4");
        let w = c.kummer_k3.unwrap();
        assert_eq!(w.case_tag, CaseTag::EvenRankOddA);
        assert_eq!(c.polarized.unwrap(), PolarizedVector::new(2, 1, 4, 1));

        let c = classify(&EvenClass::from_i64(1, &[0], 0), &s).unwrap();
        assert_eq!((c.regime.as_str(), c.dim_moduli.clone()), ("0", Some(b(2))));

        let c = classify(&EvenClass::from_i64(1, &[0], 1), &s).unwrap();
        assert_eq!((c.regime.as_str(), c.dim_moduli.clone()), ("negative", None));
    }

    #[test]
    fn classify_errors() {
        let s = SurfaceModel::ns_rank1(1).unwrap();
        assert!(matches!(classify(&EvenClass::from_i64(0, &[1], 0), &s), Err(Error::Precondition(_))));
        assert!(matches!(classify(&EvenClass::from_i64(2, &[2], 1), &s), Err(Error::Precondition(_))));
        let k3 = SurfaceModel::k3_ns_rank1(2).unwrap();
        assert!(matches!(classify(&EvenClass::from_i64(1, &[0], 1), &k3), Err(Error::UnsupportedModel(_))));
    }

    #[test]
    fn regime_depends_only_on_square() {
        let s = SurfaceModel::ns_rank1(3).unwrap();
        let mut seen = std::collections::HashMap::new();
        for r in 1..6i64 {
            for d in -4..5i64 {
                for a in -6..7i64 {
                    if num_integer::gcd(r, d) != 1 {
                        continue;
                    }
                    let c = classify(&EvenClass::from_i64(r, &[d], a), &s).unwrap();
                    let prev = seen.insert(c.mukai_square.clone(), c.regime.clone());
                    if let Some(p) = prev {
                        assert_eq!(p, c.regime);
                    }
                }
            }
        }
    }
}
