//! Brute-force intersection numbers on generalized Kummer varieties.
//!
//! `H*(Xⁿ,ℚ)` is modeled as an exterior algebra. Integrals over `K_{n−1}` are
//! pulled back to `N = σ⁻¹(0) ⊂ Xⁿ`, whose class is `σ*ω`, and divided by `n!`.
//! Nothing here uses the closed forms; [`closed_form_integral`] evaluates those
//! separately so the two can be compared.

pub mod exterior;

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

pub use exterior::ExteriorElement;

use crate::cohomology::{ELLIPTIC_LABELS, ELLIPTIC_WEDGE_BASIS};
use crate::error::{Error, Result};
use exterior::rational;

/// Default upper bound on `n`; the algebra has `2^{4n}` monomials.
pub const DEFAULT_N_MAX: usize = 5;

/// A class in `H²(X,ℚ)` in the `f1, f2, d13, d14, d23, d24` basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct H2Symbolic(pub [BigRational; 6]);

impl H2Symbolic {
    pub fn from_ints(v: [i64; 6]) -> Self {
        H2Symbolic(v.map(rational))
    }

    pub fn from_bigints(v: &[BigInt]) -> Result<Self> {
        if v.len() != 6 {
            return Err(Error::DimensionMismatch { expected: 6, found: v.len() });
        }
        Ok(H2Symbolic(std::array::from_fn(|i| BigRational::from_integer(v[i].clone()))))
    }

    pub fn basis(i: usize) -> Self {
        let mut v = [0i64; 6];
        v[i] = 1;
        Self::from_ints(v)
    }

    pub fn label(label: &str) -> Option<Self> {
        ELLIPTIC_LABELS.iter().position(|l| *l == label).map(Self::basis)
    }

    /// `p_i^*` of this class in `H*(Xⁿ)`.
    pub fn pullback(&self, n: usize, factor: usize) -> ExteriorElement {
        let mut out = ExteriorElement::zero(n);
        for (c, &(a, b, sign)) in self.0.iter().zip(ELLIPTIC_WEDGE_BASIS.iter()) {
            if c.is_zero() {
                continue;
            }
            let m = ExteriorElement::product_on_factor(n, factor, &[a, b]);
            out = &out + &m.scale(&(c * rational(sign as i64)));
        }
        out
    }

    /// `Σ_i p_i^*` of this class.
    pub fn diagonal_sum(&self, n: usize) -> ExteriorElement {
        (0..n).fold(ExteriorElement::zero(n), |acc, i| &acc + &self.pullback(n, i))
    }

    /// Intersection form computed in the exterior algebra of one factor.
    pub fn pair(&self, other: &Self) -> BigRational {
        self.pullback(1, 0).wedge(&other.pullback(1, 0)).unwrap().integrate_top()
    }
}

/// `σ*ω = Π_k (Σ_i p_i^* α_k)`, the class of `σ⁻¹(0)` for `σ(x₁,…,xₙ) = Σxᵢ`.
pub fn sigma_omega(n: usize) -> ExteriorElement {
    (0..4).fold(ExteriorElement::one(n), |acc, k| {
        let sum = (0..n).fold(ExteriorElement::zero(n), |s, i| &s + &ExteriorElement::generator(n, i, k));
        acc.wedge(&sum).unwrap()
    })
}

fn subsets_of_four() -> impl Iterator<Item = Vec<usize>> {
    (0u32..16).map(|m| (0..4).filter(|j| m >> j & 1 == 1).collect())
}

/// Class of `Δ^{ij} = {xᵢ = xⱼ}` by Künneth: `Σ_A c_A p_i^* m_A ∧ p_j^* m_{Aᶜ}`
/// over monomials `m_A` of one factor, with `c_A` fixed by
/// `∫ Δ ∧ p_i^*η ∧ p_j^*η′ = ∫_X η ∧ η′`.
pub fn diagonal_class(i: usize, j: usize, n: usize) -> Result<ExteriorElement> {
    if i == j {
        return Err(Error::Precondition("diagonal needs two distinct factors".into()));
    }
    if i >= n || j >= n {
        return Err(Error::DimensionMismatch { expected: n, found: i.max(j) + 1 });
    }
    // signs depend only on the relative order of the two factors, so the
    // coefficients are solved on X² and transplanted
    let (i2, j2) = if i < j { (0, 1) } else { (1, 0) };
    let on = |n, f, js: &[usize]| ExteriorElement::product_on_factor(n, f, js);
    let mut out = ExteriorElement::zero(n);
    for a in subsets_of_four() {
        let ac: Vec<usize> = (0..4).filter(|k| !a.contains(k)).collect();
        let probe = on(2, i2, &ac).wedge(&on(2, j2, &a))?;
        let lhs = on(2, i2, &a).wedge(&on(2, j2, &ac))?.integrate_product(&probe)?;
        let on_x = on(1, 0, &ac).wedge(&on(1, 0, &a))?.integrate_top();
        let term = on(n, i, &a).wedge(&on(n, j, &ac))?;
        out = &out + &term.scale(&(on_x / lhs));
    }
    Ok(out)
}

/// Integrator with cached `σ*ω` and `(Σ_{i<j} Δ^{ij}) ∧ σ*ω` per `n`.
pub struct Oracle {
    n_max: usize,
    sigma: Mutex<HashMap<usize, Arc<ExteriorElement>>>,
    diag_sigma: Mutex<HashMap<usize, Arc<ExteriorElement>>>,
}

impl Default for Oracle {
    fn default() -> Self {
        Oracle::new(DEFAULT_N_MAX)
    }
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

impl Oracle {
    pub fn new(n_max: usize) -> Self {
        Oracle {
            n_max: n_max.min(ExteriorElement::MAX_FACTORS),
            sigma: Mutex::new(HashMap::new()),
            diag_sigma: Mutex::new(HashMap::new()),
        }
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    fn sigma(&self, n: usize) -> Arc<ExteriorElement> {
        let mut cache = self.sigma.lock().unwrap();
        cache.entry(n).or_insert_with(|| Arc::new(sigma_omega(n))).clone()
    }

    fn diag_sigma(&self, n: usize) -> Result<Arc<ExteriorElement>> {
        if let Some(e) = self.diag_sigma.lock().unwrap().get(&n) {
            return Ok(e.clone());
        }
        let mut total = ExteriorElement::zero(n);
        for i in 0..n {
            for j in i + 1..n {
                total = &total + &diagonal_class(i, j, n)?;
            }
        }
        let e = Arc::new(total.wedge(&self.sigma(n))?);
        self.diag_sigma.lock().unwrap().insert(n, e.clone());
        Ok(e)
    }

    /// `∫_{K_{n−1}} θ(l)^a θ(x)^b e^{e_power}`.
    ///
    /// * `e_power = 0`: `(1/n!) ∫_{Xⁿ} (Σl)^a (Σx)^b σ*ω`;
    /// * `e_power = 1`: `0`, since the exceptional divisor pushes `1` forward
    ///   to zero on the symmetric product;
    /// * `e_power = 2`: `−(1/n!) ∫_{Xⁿ} (Σl)^a (Σx)^b (Σ_{i<j}Δ^{ij}) σ*ω`.
    pub fn kummer_integral(
        &self,
        n: usize,
        a: u32,
        b: u32,
        l: &H2Symbolic,
        x: &H2Symbolic,
        e_power: u32,
    ) -> Result<BigRational> {
        if n < 3 {
            return Err(Error::Precondition(format!("need n ≥ 3, got {n}")));
        }
        if n > self.n_max {
            return Err(Error::Precondition(format!("n = {n} exceeds n_max = {}", self.n_max)));
        }
        if e_power > 2 {
            return Err(Error::UnsupportedPattern(format!("e^{e_power} is not supported")));
        }
        let total = (a + b + e_power) as usize;
        if total != 2 * n - 2 {
            return Err(Error::DegreeMismatch(format!(
                "a + b + e_power = {total}, expected 2n − 2 = {}",
                2 * n - 2
            )));
        }
        if e_power == 1 {
            return Ok(BigRational::zero());
        }
        let lsum = l.diagonal_sum(n);
        let mut class = x.diagonal_sum(n).pow(b);
        for _ in 0..a {
            class = class.wedge(&lsum)?;
        }
        let nf = BigRational::from_integer(factorial(n));
        Ok(match e_power {
            0 => class.integrate_product(&self.sigma(n))? / nf,
            _ => -class.integrate_product(&*self.diag_sigma(n)?)? / nf,
        })
    }

    /// Checks the Fujiki relation on `K_{n−1}` for `λ = θ(l)` and `x = θ(x₀) + k·e`,
    /// with `q` from `q(θ(y) + ke) = (y²) − 2nk²`.
    pub fn fujiki_check(&self, n: usize, l: &H2Symbolic, x: &H2Symbolic, k: i64) -> Result<FujikiReport> {
        let m = 2 * n as u32 - 2;
        let kq = rational(k);
        let v = self.kummer_integral(n, m, 0, l, l, 0)?;
        let mixed_sq = self.kummer_integral(n, m - 2, 2, l, x, 0)?
            + rational(2) * &kq * self.kummer_integral(n, m - 2, 1, l, x, 1)?
            + &kq * &kq * self.kummer_integral(n, m - 2, 0, l, x, 2)?;
        let linear = self.kummer_integral(n, m - 1, 1, l, x, 0)?
            + &kq * self.kummer_integral(n, m - 1, 0, l, x, 1)?;

        let q_lambda = l.pair(l);
        let q_x = x.pair(x) - rational(2 * n as i64) * &kq * &kq;
        let lhs = &v * &v * &q_x;
        let rhs = &q_lambda
            * (rational(2 * n as i64 - 3) * &v * &mixed_sq - rational(2 * n as i64 - 4) * &linear * &linear);
        Ok(FujikiReport {
            n,
            lambda_power: v,
            mixed_square: mixed_sq,
            mixed_linear: linear,
            q_lambda,
            q_x,
            holds: lhs == rhs,
            lhs,
            rhs,
        })
    }

    /// `q(x)/q(λ)` recovered from integrals alone via the Fujiki relation.
    pub fn beauville_ratio(&self, n: usize, l: &H2Symbolic, x: &H2Symbolic, k: i64) -> Result<BigRational> {
        let report = self.fujiki_check(n, l, x, k)?;
        let v = &report.lambda_power;
        if v.is_zero() {
            return Err(Error::Degenerate("∫λ^{2n−2} = 0; choose l with (l²) ≠ 0".into()));
        }
        let bracket = rational(2 * n as i64 - 3) * v * &report.mixed_square
            - rational(2 * n as i64 - 4) * &report.mixed_linear * &report.mixed_linear;
        Ok(bracket / (v * v))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FujikiReport {
    pub n: usize,
    #[serde(serialize_with = "ser_rational")]
    pub lambda_power: BigRational,
    #[serde(serialize_with = "ser_rational")]
    pub mixed_square: BigRational,
    #[serde(serialize_with = "ser_rational")]
    pub mixed_linear: BigRational,
    #[serde(serialize_with = "ser_rational")]
    pub q_lambda: BigRational,
    #[serde(serialize_with = "ser_rational")]
    pub q_x: BigRational,
    #[serde(serialize_with = "ser_rational")]
    pub lhs: BigRational,
    #[serde(serialize_with = "ser_rational")]
    pub rhs: BigRational,
    pub holds: bool,
}

pub fn ser_rational<S: serde::Serializer>(q: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}

/// The recognized monomial shapes `θ(l)^a θ(x)^b e^c` with `a + b + c = 2n − 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pattern {
    LambdaPower,
    LambdaLinear,
    LambdaQuadratic,
    LambdaExceptionalSquare,
    LambdaMixedExceptional,
    XPower,
}

impl Pattern {
    pub fn classify(n: usize, a: u32, b: u32, e_power: u32) -> Result<Pattern> {
        if n < 3 {
            return Err(Error::Precondition(format!("need n ≥ 3, got {n}")));
        }
        let top = 2 * n as u32 - 2;
        if a + b + e_power != top {
            return Err(Error::DegreeMismatch(format!("a + b + e_power = {}, expected {top}", a + b + e_power)));
        }
        Ok(match (b, e_power) {
            (0, 0) => Pattern::LambdaPower,
            (1, 0) => Pattern::LambdaLinear,
            (2, 0) => Pattern::LambdaQuadratic,
            (0, 2) => Pattern::LambdaExceptionalSquare,
            (1, 1) => Pattern::LambdaMixedExceptional,
            (b, 0) if b == top => Pattern::XPower,
            _ => {
                return Err(Error::UnsupportedPattern(format!(
                    "θ(l)^{a} θ(x)^{b} e^{e_power} has no closed form"
                )))
            }
        })
    }

    /// `(a, b, e_power)` for this pattern on `K_{n−1}`.
    pub fn exponents(self, n: usize) -> (u32, u32, u32) {
        let top = 2 * n as u32 - 2;
        match self {
            Pattern::LambdaPower => (top, 0, 0),
            Pattern::LambdaLinear => (top - 1, 1, 0),
            Pattern::LambdaQuadratic => (top - 2, 2, 0),
            Pattern::LambdaExceptionalSquare => (top - 2, 0, 2),
            Pattern::LambdaMixedExceptional => (top - 2, 1, 1),
            Pattern::XPower => (0, top, 0),
        }
    }
}

/// `(2n−2)! n² / (n! 2^{n−1})`.
pub fn fujiki_coefficient(n: usize) -> BigRational {
    BigRational::new(
        factorial(2 * n - 2) * BigInt::from(n * n),
        factorial(n) * (BigInt::one() << (n - 1)),
    )
}

fn pow(q: &BigRational, k: usize) -> BigRational {
    (0..k).fold(BigRational::one(), |acc, _| acc * q)
}

/// Closed forms on `K_{n−1}` in terms of `(l²)`, `(l,x)`, `(x²)`, with `C` the
/// [`fujiki_coefficient`]:
///
/// | pattern | value |
/// |---|---|
/// | `θ(l)^{2n−2}` | `C (l²)^{n−1}` |
/// | `θ(l)^{2n−3} θ(x)` | `C (l²)^{n−2} (l,x)` |
/// | `θ(l)^{2n−4} θ(x)²` | `C/(2n−3) · [(l²)^{n−2}(x²) + (2n−4)(l²)^{n−3}(l,x)²]` |
/// | `θ(l)^{2n−4} e²` | `C · (−2n)/(2n−3) · (l²)^{n−2}` |
/// | `θ(l)^{2n−4} θ(x) e` | `0` |
/// | `θ(x)^{2n−2}` | `C (x²)^{n−1}` |
pub fn closed_form_integral(
    n: usize,
    a: u32,
    b: u32,
    e_power: u32,
    l2: &BigRational,
    lx: &BigRational,
    x2: &BigRational,
) -> Result<BigRational> {
    let c = fujiki_coefficient(n);
    let denom = rational(2 * n as i64 - 3);
    Ok(match Pattern::classify(n, a, b, e_power)? {
        Pattern::LambdaPower => c * pow(l2, n - 1),
        Pattern::LambdaLinear => c * pow(l2, n - 2) * lx,
        Pattern::LambdaQuadratic => {
            c / denom * (pow(l2, n - 2) * x2 + rational(2 * n as i64 - 4) * pow(l2, n - 3) * lx * lx)
        }
        Pattern::LambdaExceptionalSquare => c * rational(-2 * n as i64) / denom * pow(l2, n - 2),
        Pattern::LambdaMixedExceptional => BigRational::zero(),
        Pattern::XPower => c * pow(x2, n - 1),
    })
}

/// Parses a pattern string such as `l^4`, `l^2 x^2`, `l^2 e^2` or `l^2*x*e`.
pub fn parse_pattern(text: &str) -> Result<(u32, u32, u32)> {
    let (mut a, mut b, mut e) = (0u32, 0u32, 0u32);
    let cleaned = text.replace('*', " ");
    for token in cleaned.split_whitespace() {
        let (base, exp) = match token.split_once('^') {
            Some((base, exp)) => (
                base,
                exp.parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bad exponent in {token:?}")))?,
            ),
            None => (token, 1),
        };
        match base {
            "l" => a += exp,
            "x" => b += exp,
            "e" => e += exp,
            _ => return Err(Error::Parse(format!("unknown factor {base:?} in pattern {text:?}"))),
        }
    }
    Ok((a, b, e))
}

/// Oracle value and closed form side by side.
pub fn compare(
    oracle: &Oracle,
    n: usize,
    (a, b, e_power): (u32, u32, u32),
    l: &H2Symbolic,
    x: &H2Symbolic,
) -> Result<(BigRational, BigRational)> {
    let brute = oracle.kummer_integral(n, a, b, l, x, e_power)?;
    let closed = closed_form_integral(n, a, b, e_power, &l.pair(l), &l.pair(x), &x.pair(x))?;
    Ok((brute, closed))
}

/// Exact integer value of a rational, when it is one.
pub fn as_integer(q: &BigRational) -> Option<i64> {
    q.is_integer().then(|| q.to_integer().to_i64()).flatten()
}
