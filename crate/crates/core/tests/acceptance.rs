//! Acceptance criteria, one line each: `[PASS]` or `[FAIL]` with the measured
//! values. Runs without the libtest harness so every line is always printed;
//! the process exits non-zero if any criterion fails.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mukai_core::cohomology::{mukai_pair, mukai_square, twist};
use mukai_core::fourier_mukai::{adjoint_check, covering_identity, fm_forward, phi_composition_check, roundtrip_check};
use mukai_core::km::{self, PolarizedVector};
use mukai_core::kummer::{self, EllipticThetaData};
use mukai_core::lattice;
use mukai_core::matrix;
use mukai_core::oracle::{self, Pattern};
use mukai_core::{EvenClass, H2Symbolic, Oracle, SurfaceModel};

type Criterion = (&'static str, fn() -> Verdict, Duration);

struct Verdict {
    ok: bool,
    detail: String,
}

impl Verdict {
    fn new(ok: bool, detail: impl Into<String>) -> Self {
        Verdict { ok, detail: detail.into() }
    }
}

fn q(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

fn b(x: i64) -> BigInt {
    BigInt::from(x)
}

fn probes() -> Vec<(&'static str, H2Symbolic)> {
    vec![
        ("f1", H2Symbolic::from_ints([1, 0, 0, 0, 0, 0])),
        ("f2", H2Symbolic::from_ints([0, 1, 0, 0, 0, 0])),
        ("f1+f2", H2Symbolic::from_ints([1, 1, 0, 0, 0, 0])),
        ("f1-f2", H2Symbolic::from_ints([1, -1, 0, 0, 0, 0])),
    ]
}

fn random_class(rng: &mut ChaCha8Rng, bound: i64) -> EvenClass {
    let c1: Vec<i64> = (0..6).map(|_| rng.gen_range(-bound..=bound)).collect();
    EvenClass::from_i64(rng.gen_range(-bound..=bound), &c1, rng.gen_range(-bound..=bound))
}

fn example_classification() -> Verdict {
    let s = SurfaceModel::ns_rank1(1).unwrap();
    let c = km::classify(&EvenClass::from_i64(2, &[1], -2), &s).unwrap();
    let gram = c.perp.as_ref().map(|p| p.gram.clone());
    let ok = c.mukai_square == b(10)
        && c.dim_moduli == Some(b(12))
        && gram == Some(matrix::from_i64(&[&[-2, -1], &[-1, 2]]))
        && c.indecomposable == Some(true);
    Verdict::new(
        ok,
        format!(
            "⟨v²⟩ = {}, dim M = {:?}, v⊥ Gram = {:?}, indecomposable = {:?}",
            c.mukai_square,
            c.dim_moduli.map(|d| d.to_string()),
            gram.map(|g| g.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>()),
            c.indecomposable
        ),
    )
}

fn oracle_closed_forms() -> Verdict {
    let o = Oracle::new(4);
    let patterns = [
        Pattern::LambdaPower,
        Pattern::LambdaQuadratic,
        Pattern::LambdaLinear,
        Pattern::LambdaExceptionalSquare,
        Pattern::LambdaMixedExceptional,
    ];
    let mut cases = 0;
    let mut mismatches = Vec::new();
    for n in [3usize, 4] {
        for p in patterns {
            for (ln, l) in probes() {
                for (xn, x) in probes() {
                    cases += 1;
                    let (brute, closed) = oracle::compare(&o, n, p.exponents(n), &l, &x).unwrap();
                    if brute != closed {
                        mismatches.push(format!("n={n} {p:?} l={ln} x={xn}: {brute} vs {closed}"));
                    }
                }
            }
        }
    }
    // anchors with (l²) = 2 on K₂
    let l = H2Symbolic::from_ints([1, 1, 0, 0, 0, 0]);
    let top = o.kummer_integral(3, 4, 0, &l, &l, 0).unwrap();
    let exc = o.kummer_integral(3, 2, 0, &l, &l, 2).unwrap();
    let anchors_ok = top == q(72) && exc == q(-36);
    Verdict::new(
        mismatches.is_empty() && anchors_ok,
        format!(
            "{cases} oracle/closed-form pairs, {} mismatches{}; anchors ∫θ(l)⁴ = {top} (expected 72), ∫θ(l)²e² = {exc} (expected −36)",
            mismatches.len(),
            mismatches.first().map(|m| format!(" (first: {m})")).unwrap_or_default()
        ),
    )
}

fn beauville_recovery() -> Verdict {
    let o = Oracle::new(4);
    let zero = H2Symbolic::from_ints([0; 6]);
    let mut cases = 0;
    let mut failures = 0;
    for n in [3usize, 4] {
        for (_, l) in probes() {
            let l2 = l.pair(&l);
            if l2.is_zero() {
                continue;
            }
            for (_, x) in probes() {
                cases += 1;
                if o.beauville_ratio(n, &l, &x, 0).unwrap() != x.pair(&x) / &l2 {
                    failures += 1;
                }
            }
            cases += 1;
            if o.beauville_ratio(n, &l, &zero, 1).unwrap() != q(-2 * n as i64) / &l2 {
                failures += 1;
            }
        }
    }
    Verdict::new(failures == 0, format!("{cases} ratios q(·)/q(θ(l)), {failures} failures"))
}

fn theta_isometry() -> Verdict {
    let s = SurfaceModel::abelian_full();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut failures = 0;
    let mut cases = 0;
    for n in 3..=10 {
        let t = EllipticThetaData::new(2, 1, 1, 0, n).unwrap();
        let v = t.mukai_vector();
        let perp = lattice::mukai_perp(&v, &s).unwrap();
        let basis = perp.basis.unwrap();
        for _ in 0..1000 {
            let mut coords = vec![BigInt::zero(); 8];
            for row in &basis {
                let k = b(rng.gen_range(-20..=20));
                for (c, r) in coords.iter_mut().zip(row) {
                    *c += &k * r;
                }
            }
            let x = EvenClass::from_coords(&coords).unwrap();
            cases += 1;
            if kummer::theta_elliptic_q(&x, &t, &s).unwrap() != mukai_square(&x, &s).unwrap() {
                failures += 1;
            }
            let free = random_class(&mut rng, 50);
            cases += 1;
            if !kummer::y4_matches_pairing(&free, &t, &s).unwrap() {
                failures += 1;
            }
        }
    }
    Verdict::new(failures == 0, format!("{cases} checks over n = 3..10, {failures} failures"))
}

fn fourier_mukai_laws() -> Verdict {
    let s = SurfaceModel::abelian_full();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut classes: Vec<EvenClass> = (0..8)
        .map(|i| {
            let mut e = vec![BigInt::zero(); 8];
            e[i] = BigInt::one();
            EvenClass::from_coords(&e).unwrap()
        })
        .collect();
    classes.extend((0..500).map(|_| random_class(&mut rng, 25)));
    let mut failures = 0;
    for (i, x) in classes.iter().enumerate() {
        let y = &classes[(i * 31 + 7) % classes.len()];
        let ok = match fm_forward(x, &s) {
            Ok(fx) => {
                mukai_square(&fx, &s).unwrap() == mukai_square(x, &s).unwrap()
                    && adjoint_check(x, y, &s).unwrap()
                    && roundtrip_check(x, &s).unwrap()
            }
            Err(_) => false,
        };
        if !ok {
            failures += 1;
        }
    }
    Verdict::new(failures == 0, format!("{} classes (8 basis + 500 random), {failures} failures", classes.len()))
}

fn phi_and_covering() -> Verdict {
    let s = SurfaceModel::abelian_full();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut phi_fail = 0;
    for _ in 0..100 {
        let c1: Vec<BigInt> = (0..6).map(|_| b(rng.gen_range(-9..=9))).collect();
        if !phi_composition_check(&c1, &s).unwrap() {
            phi_fail += 1;
        }
    }
    let mut cover_fail = 0;
    let mut drawn = 0;
    while drawn < 100 {
        let v = random_class(&mut rng, 8);
        let n = s.h2_pair(&v.c1, &v.c1).unwrap() / 2 - &v.r * &v.a;
        if n <= BigInt::zero() {
            continue;
        }
        drawn += 1;
        let rep = covering_identity(&v.r, &v.c1, &v.a, &s).unwrap();
        if !rep.holds || rep.n != n {
            cover_fail += 1;
        }
    }
    // v = (2, H, −2) with H = f₁ + f₂, (H²) = 2
    let h = vec![b(1), b(1), b(0), b(0), b(0), b(0)];
    let ex = covering_identity(&b(2), &h, &b(-2), &s).unwrap();
    let five = (0..8)
        .map(|i| (0..8).map(|j| if i == j { b(5) } else { b(0) }).collect::<Vec<_>>())
        .collect::<Vec<_>>();
    let ex_ok = ex.holds && ex.product == five;
    Verdict::new(
        phi_fail == 0 && cover_fail == 0 && ex_ok,
        format!("φ: {phi_fail}/100 failures; covering: {cover_fail}/100 failures; (2,H,−2) gives {}·Id₈: {ex_ok}", ex.n),
    )
}

fn kummer_correspondence() -> Verdict {
    let vectors = km::polarized_vectors_with_square_four(10, 40, 40);
    let mut failures = Vec::new();
    let mut by_case = [0usize; 3];
    for p in &vectors {
        let ok = match km::kummer_k3_vector(p) {
            Ok(w) => {
                by_case[w.case_tag as usize] += 1;
                let profile_ok = km::elementary_transform_square(&w.r, &w.k_profile()).unwrap() == b(4);
                let closed_ok = w.xi_square == km::xi_square_closed_form(w.case_tag, &w.source);
                let nonrigid_ok = (1..=16).all(|i| {
                    let got = km::nonrigid_locus(&w, i).unwrap();
                    match p.r.to_string().as_str() {
                        "1" => true,
                        "2" => got == (i <= 4),
                        _ => !got,
                    }
                });
                w.square().is_zero() && closed_ok && profile_ok && nonrigid_ok
            }
            Err(_) => false,
        };
        if !ok {
            failures.push(p.clone());
        }
    }
    Verdict::new(
        failures.is_empty() && !vectors.is_empty(),
        format!(
            "{} vectors (I-even-a {}, I-odd-a {}, II {}), {} failures{}",
            vectors.len(),
            by_case[0],
            by_case[1],
            by_case[2],
            failures.len(),
            failures.first().map(|p: &PolarizedVector| format!(" (first: {p:?})")).unwrap_or_default()
        ),
    )
}

fn normalization_roundtrip() -> Verdict {
    let s = SurfaceModel::abelian_full();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut drawn = 0;
    let mut failures = 0;
    while drawn < 200 {
        let r = rng.gen_range(2..=12i64);
        let d = rng.gen_range(-15..=15i64);
        let Ok((r1, d1)) = EllipticThetaData::companion(&b(r), &b(d)) else { continue };
        let (sf, a) = (rng.gen_range(-30..=30i64), rng.gen_range(-30..=30i64));
        if d * sf - r * a <= 0 {
            continue;
        }
        drawn += 1;
        let v = EvenClass::from_i64(r, &[sf, d, 0, 0, 0, 0], a);
        let ok = match kummer::normalize_elliptic_vector(&v, &r1, &d1, &s) {
            Ok(out) => {
                let target = EllipticThetaData { r: b(r), r1: r1.clone(), d: b(d), d1: d1.clone(), n: out.n.clone() };
                let back: Vec<BigInt> = out.twist.iter().map(|c| -c).collect();
                out.v_prime == target.mukai_vector()
                    && twist(&out.v_prime, &back, &s).unwrap() == v
                    && mukai_pair(&v, &v, &s).unwrap() == b(2) * &out.n
            }
            Err(_) => false,
        };
        if !ok {
            failures += 1;
        }
    }
    Verdict::new(failures == 0, format!("{drawn} vectors, {failures} failures"))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 example classification", example_classification, Duration::from_secs(1)),
        ("2 oracle vs closed forms", oracle_closed_forms, Duration::from_secs(30)),
        ("3 Beauville form recovery", beauville_recovery, Duration::from_secs(30)),
        ("4 θ isometry", theta_isometry, Duration::from_secs(60)),
        ("5 Fourier–Mukai laws", fourier_mukai_laws, Duration::from_secs(5)),
        ("6 φ and covering identities", phi_and_covering, Duration::from_secs(30)),
        ("7 Kummer K3 correspondence", kummer_correspondence, Duration::from_secs(10)),
        ("8 elliptic normalization", normalization_roundtrip, Duration::from_secs(30)),
    ];
    let mut failed = 0;
    for (name, check, limit) in criteria {
        let start = Instant::now();
        let v = check();
        let elapsed = start.elapsed();
        let ok = v.ok && elapsed <= limit;
        if !ok {
            failed += 1;
        }
        println!(
            "[{}] criterion {name}: {} ({:.2?}, limit {:?})",
            if ok { "PASS" } else { "FAIL" },
            v.detail,
            elapsed,
            limit
        );
    }
    println!("acceptance: {} passed, {failed} failed", 8 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
