//! The even cohomology lattice `H^ev(X,ℤ) = H⁰ ⊕ H² ⊕ H⁴` of an abelian or K3
//! surface, with the Mukai pairing, the dual involution, line-bundle twists
//! and Riemann–Roch bookkeeping.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{self, IntMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SurfaceKind {
    Abelian,
    K3,
}

impl SurfaceKind {
    /// `ε` in `√td_X = 1 + εω`.
    pub fn epsilon(self) -> i64 {
        match self {
            SurfaceKind::Abelian => 0,
            SurfaceKind::K3 => 1,
        }
    }
}

/// Labels of the rank-6 model of `H²` of a product of elliptic curves `C₁ × C₂`.
///
/// `f1`, `f2` are the two fibre classes and `dIJ` spans `H¹(C₁) ⊗ H¹(C₂)`.
pub const ELLIPTIC_LABELS: [&str; 6] = ["f1", "f2", "d13", "d14", "d23", "d24"];

/// How each elliptic-model label sits in `Λ²H¹(X)`: `(i, j, sign)` means the
/// label is `sign · αᵢ ∧ αⱼ` (0-based generator indices). With `ω = α₀α₁α₂α₃`
/// this gives `(f1·f2) = (d13·d24) = 1` and `(d14·d23) = −1`.
pub const ELLIPTIC_WEDGE_BASIS: [(usize, usize, i8); 6] = [
    (0, 1, 1),
    (2, 3, 1),
    (0, 2, 1),
    (0, 3, 1),
    (1, 2, -1),
    (1, 3, -1),
];

/// The ambient lattice: the `H²` Gram matrix plus the surface type.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceModel {
    pub kind: SurfaceKind,
    #[serde(with = "crate::json::matrix")]
    pub gram: IntMatrix,
    pub labels: Vec<String>,
}

impl SurfaceModel {
    pub fn new(kind: SurfaceKind, gram: IntMatrix, labels: Vec<String>) -> Result<Self> {
        let model = SurfaceModel { kind, gram, labels };
        model.validate()?;
        Ok(model)
    }

    /// Checks the invariants; deserialized models should go through this.
    pub fn validate(&self) -> Result<()> {
        if self.gram.is_empty() {
            return Err(Error::InvalidGram("H² must have positive rank".into()));
        }
        if !matrix::is_symmetric(&self.gram) {
            return Err(Error::InvalidGram("Gram matrix is not square and symmetric".into()));
        }
        if let Some(i) = (0..self.gram.len()).find(|&i| self.gram[i][i].is_odd()) {
            return Err(Error::InvalidGram(format!("odd diagonal entry at position {i}")));
        }
        if self.labels.len() != self.gram.len() {
            return Err(Error::DimensionMismatch {
                expected: self.gram.len(),
                found: self.labels.len(),
            });
        }
        Ok(())
    }

    /// Full `H²` of `C₁ × C₂`: three hyperbolic planes, labels [`ELLIPTIC_LABELS`].
    pub fn abelian_full() -> Self {
        let mut gram = vec![vec![BigInt::zero(); 6]; 6];
        let mut set = |i: usize, j: usize, v: i64| {
            gram[i][j] = BigInt::from(v);
            gram[j][i] = BigInt::from(v);
        };
        set(0, 1, 1);
        set(2, 5, 1);
        set(3, 4, -1);
        SurfaceModel {
            kind: SurfaceKind::Abelian,
            gram,
            labels: ELLIPTIC_LABELS.iter().map(|s| s.to_string()).collect(),
        }
    }

    /// Néron–Severi-only model `ℤH` with `(H²) = 2n`, for a `(1,n)`-polarization.
    pub fn ns_rank1(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Precondition("(1,n)-polarization needs n ≥ 1".into()));
        }
        Ok(SurfaceModel {
            kind: SurfaceKind::Abelian,
            gram: vec![vec![BigInt::from(2 * n)]],
            labels: vec!["H".into()],
        })
    }

    pub fn k3_ns_rank1(degree: u64) -> Result<Self> {
        if degree == 0 || degree % 2 == 1 {
            return Err(Error::InvalidGram("K3 polarization degree must be positive and even".into()));
        }
        Ok(SurfaceModel {
            kind: SurfaceKind::K3,
            gram: vec![vec![BigInt::from(degree)]],
            labels: vec!["H".into()],
        })
    }

    pub fn h2_rank(&self) -> usize {
        self.gram.len()
    }

    pub fn epsilon(&self) -> i64 {
        self.kind.epsilon()
    }

    pub fn is_elliptic_product(&self) -> bool {
        self.kind == SurfaceKind::Abelian && *self == SurfaceModel::abelian_full()
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// `(x·y)` on `H²`.
    pub fn h2_pair(&self, x: &[BigInt], y: &[BigInt]) -> Result<BigInt> {
        self.check_h2(x)?;
        self.check_h2(y)?;
        Ok(matrix::bilinear(&self.gram, x, y))
    }

    pub fn check_h2(&self, x: &[BigInt]) -> Result<()> {
        if x.len() != self.h2_rank() {
            return Err(Error::DimensionMismatch {
                expected: self.h2_rank(),
                found: x.len(),
            });
        }
        Ok(())
    }

    /// Gram matrix of the whole Mukai lattice in coordinates `(r, c₁…, a)`.
    pub fn mukai_gram(&self) -> IntMatrix {
        let k = self.h2_rank();
        let mut g = vec![vec![BigInt::zero(); k + 2]; k + 2];
        for i in 0..k {
            for j in 0..k {
                g[i + 1][j + 1] = self.gram[i][j].clone();
            }
        }
        g[0][k + 1] = -BigInt::one();
        g[k + 1][0] = -BigInt::one();
        g
    }

    /// Parses a sum like `f1+f2`, `2f1-3d13` or `H` into an `H²` vector.
    pub fn parse_h2(&self, expr: &str) -> Result<Vec<BigInt>> {
        let mut out = vec![BigInt::zero(); self.h2_rank()];
        let cleaned: String = expr.chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned.is_empty() || cleaned == "0" {
            return Ok(out);
        }
        let mut terms = Vec::new();
        let mut start = 0;
        for (i, ch) in cleaned.char_indices() {
            if (ch == '+' || ch == '-') && i > start {
                terms.push(&cleaned[start..i]);
                start = i;
            }
        }
        terms.push(&cleaned[start..]);
        for term in terms {
            let (sign, body) = match term.strip_prefix('-') {
                Some(rest) => (-1, rest),
                None => (1, term.strip_prefix('+').unwrap_or(term)),
            };
            let split = body.find(|c: char| !c.is_ascii_digit() && c != '*').unwrap_or(body.len());
            let (coef, label) = body.split_at(split);
            let coef = coef.trim_end_matches('*');
            let coef = if coef.is_empty() {
                BigInt::one()
            } else {
                coef.parse::<BigInt>()
                    .map_err(|_| Error::Parse(format!("bad coefficient in {term:?}")))?
            };
            let idx = self
                .label_index(label)
                .ok_or_else(|| Error::Parse(format!("unknown H² label {label:?} in {expr:?}")))?;
            out[idx] += coef * sign;
        }
        Ok(out)
    }

    /// Renders an `H²` vector back into label notation.
    pub fn format_h2(&self, x: &[BigInt]) -> String {
        let mut s = String::new();
        for (c, label) in x.iter().zip(&self.labels) {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if s.is_empty() {
                if c.is_negative() {
                    s.push('-');
                }
            } else {
                s.push_str(if c.is_negative() { " - " } else { " + " });
            }
            if !mag.is_one() {
                s.push_str(&mag.to_string());
            }
            s.push_str(label);
        }
        if s.is_empty() {
            s.push('0');
        }
        s
    }
}

/// An element `r + c₁ + aω` of `H^ev(X,ℤ)`; Mukai vectors are of this form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EvenClass {
    #[serde(with = "crate::json::int")]
    pub r: BigInt,
    #[serde(with = "crate::json::vec")]
    pub c1: Vec<BigInt>,
    #[serde(with = "crate::json::int")]
    pub a: BigInt,
}

impl EvenClass {
    pub fn new(r: impl Into<BigInt>, c1: Vec<BigInt>, a: impl Into<BigInt>) -> Self {
        EvenClass { r: r.into(), c1, a: a.into() }
    }

    pub fn from_i64(r: i64, c1: &[i64], a: i64) -> Self {
        EvenClass::new(r, c1.iter().map(|&x| BigInt::from(x)).collect(), a)
    }

    pub fn zero(h2_rank: usize) -> Self {
        EvenClass::new(0, vec![BigInt::zero(); h2_rank], 0)
    }

    /// `v(𝒪_X)` on an abelian surface, `1`.
    pub fn one(h2_rank: usize) -> Self {
        EvenClass::new(1, vec![BigInt::zero(); h2_rank], 0)
    }

    /// The fundamental class `ω`.
    pub fn point(h2_rank: usize) -> Self {
        EvenClass::new(0, vec![BigInt::zero(); h2_rank], 1)
    }

    pub fn h2_rank(&self) -> usize {
        self.c1.len()
    }

    pub fn is_zero(&self) -> bool {
        self.r.is_zero() && self.a.is_zero() && self.c1.iter().all(Zero::is_zero)
    }

    /// Flat coordinates `(r, c₁…, a)`.
    pub fn to_coords(&self) -> Vec<BigInt> {
        let mut v = Vec::with_capacity(self.c1.len() + 2);
        v.push(self.r.clone());
        v.extend(self.c1.iter().cloned());
        v.push(self.a.clone());
        v
    }

    pub fn from_coords(v: &[BigInt]) -> Result<Self> {
        if v.len() < 2 {
            return Err(Error::DimensionMismatch { expected: 2, found: v.len() });
        }
        let k = v.len() - 2;
        Ok(EvenClass::new(v[0].clone(), v[1..=k].to_vec(), v[k + 1].clone()))
    }

    pub fn check(&self, s: &SurfaceModel) -> Result<()> {
        s.check_h2(&self.c1)
    }

    pub fn add(&self, other: &EvenClass) -> EvenClass {
        EvenClass {
            r: &self.r + &other.r,
            c1: self.c1.iter().zip(&other.c1).map(|(x, y)| x + y).collect(),
            a: &self.a + &other.a,
        }
    }

    pub fn scale(&self, k: &BigInt) -> EvenClass {
        EvenClass {
            r: &self.r * k,
            c1: self.c1.iter().map(|x| x * k).collect(),
            a: &self.a * k,
        }
    }

    pub fn neg(&self) -> EvenClass {
        self.scale(&-BigInt::one())
    }

    /// Renders as `r + c₁ + aω` using the model's labels.
    pub fn display<'a>(&'a self, s: &'a SurfaceModel) -> impl fmt::Display + 'a {
        struct D<'a>(&'a EvenClass, &'a SurfaceModel);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "({}, {}, {})", self.0.r, self.1.format_h2(&self.0.c1), self.0.a)
            }
        }
        D(self, s)
    }
}

/// `⟨x,y⟩ = (x₁·y₁) − x₀y₂ − x₂y₀`.
pub fn mukai_pair(x: &EvenClass, y: &EvenClass, s: &SurfaceModel) -> Result<BigInt> {
    x.check(s)?;
    y.check(s)?;
    Ok(matrix::bilinear(&s.gram, &x.c1, &y.c1) - &x.r * &y.a - &x.a * &y.r)
}

/// `⟨v²⟩`.
pub fn mukai_square(v: &EvenClass, s: &SurfaceModel) -> Result<BigInt> {
    mukai_pair(v, v, s)
}

/// `x ↦ x₀ − x₁ + x₂`.
pub fn dual(x: &EvenClass) -> EvenClass {
    EvenClass {
        r: x.r.clone(),
        c1: x.c1.iter().map(|c| -c).collect(),
        a: x.a.clone(),
    }
}

/// `T_L(x) = x · ch(L)` with `c₁(L) = ℓ`: `(r, c₁ + rℓ, a + (c₁·ℓ) + r(ℓ²)/2)`.
///
/// `(ℓ²)` is even because the Gram matrix has even diagonal, so the result is
/// integral.
pub fn twist(x: &EvenClass, ell: &[BigInt], s: &SurfaceModel) -> Result<EvenClass> {
    x.check(s)?;
    s.check_h2(ell)?;
    let ell_sq = matrix::bilinear(&s.gram, ell, ell);
    let (half, rem) = (&x.r * &ell_sq).div_rem(&BigInt::from(2));
    if !rem.is_zero() {
        return Err(Error::InvalidGram("r·(ℓ²) is odd".into()));
    }
    Ok(EvenClass {
        r: x.r.clone(),
        c1: x.c1.iter().zip(ell).map(|(c, l)| c + &x.r * l).collect(),
        a: &x.a + matrix::bilinear(&s.gram, &x.c1, ell) + half,
    })
}

/// `χ(E,F) = −⟨v(E),v(F)⟩`.
pub fn euler_chi(x: &EvenClass, y: &EvenClass, s: &SurfaceModel) -> Result<BigInt> {
    Ok(-mukai_pair(x, y, s)?)
}

/// `v(E) = ch(E)(1 + εω)`: `(r, c₁, ch₂ + εr)`.
pub fn from_chern(r: BigInt, c1: Vec<BigInt>, ch2: BigInt, s: &SurfaceModel) -> Result<EvenClass> {
    s.check_h2(&c1)?;
    let a = ch2 + &r * s.epsilon();
    Ok(EvenClass { r, c1, a })
}

/// Signed permutation `P` (rows are new basis vectors) with `P·G·Pᵀ = U⊕U⊕U⊕U`
/// for the Mukai lattice of [`SurfaceModel::abelian_full`].
pub fn hyperbolic_frame() -> IntMatrix {
    // coordinates (r, f1, f2, d13, d14, d23, d24, a)
    let e = |i: usize, sign: i64| -> Vec<BigInt> {
        (0..8).map(|j| if j == i { BigInt::from(sign) } else { BigInt::zero() }).collect()
    };
    vec![
        e(0, 1),
        e(7, -1),
        e(1, 1),
        e(2, 1),
        e(3, 1),
        e(6, 1),
        e(4, 1),
        e(5, -1),
    ]
}
