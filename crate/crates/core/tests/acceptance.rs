//! Acceptance suite. Each criterion runs in sequence so its wall time is
//! measured without other tests competing for the CPU, and prints one line.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use polarization::constants::{
    brute_force_c_l1, exact_c_l1, harris_bound, lp3_bilinear_witness_value, lp3_interpolation_upper_bound,
    lp3_lower_bound, root_sequence, Partition,
};
use polarization::optimize::{
    estimate_blocked_norm, estimate_bochnak_ratio, estimate_multilinear_norm, estimate_poly_norm, estimate_ratio,
    spectral_norm_quadratic, OptimConfig,
};
use polarization::polarize::{polarize_blocked, polarize_sign_sum, BlockTuple};
use polarization::poly::{random_polynomial, real_l1_example, varopoulos, HomogeneousPolynomial};
use polarization::quotient::{build_quotient, greedy_preimage, verify_transfer_bound};
use polarization::spaces::{norm, Exponent, Field, SpaceSpec, Vector};
use polarization::Complex64;

type Outcome = Result<Vec<String>, String>;

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Duration,
    run: fn() -> Outcome,
}

fn check(ok: bool, failures: &mut Vec<String>, msg: String) {
    if !ok {
        failures.push(msg);
    }
}

fn finish(failures: Vec<String>, notes: Vec<String>) -> Outcome {
    if failures.is_empty() {
        Ok(notes)
    } else {
        Err(failures.join("; "))
    }
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// `(k₁!⋯k_d!/k!)·k^k/Πk_i^{k_i}` for an ordered composition.
fn composition_value(parts: &[u32]) -> BigRational {
    let k: u32 = parts.iter().sum();
    let mut num = BigInt::from(k).pow(k) * parts.iter().map(|&a| factorial(a)).product::<BigInt>();
    let mut den = factorial(k);
    for &a in parts {
        den *= BigInt::from(a).pow(a);
    }
    if k == 0 {
        num = BigInt::one();
        den = BigInt::one();
    }
    BigRational::new(num, den)
}

/// Maximum over every ordered composition of `k` into `d` nonnegative parts.
fn max_over_compositions(k: u32, d: u32) -> (BigRational, usize) {
    fn rec(left: u32, slots: u32, cur: &mut Vec<u32>, best: &mut BigRational, count: &mut usize) {
        if slots == 1 {
            cur.push(left);
            let v = composition_value(cur);
            if v > *best {
                *best = v;
            }
            *count += 1;
            cur.pop();
            return;
        }
        for a in 0..=left {
            cur.push(a);
            rec(left - a, slots - 1, cur, best, count);
            cur.pop();
        }
    }
    let mut best = BigRational::from_integer(BigInt::from(0));
    let mut count = 0;
    rec(k, d, &mut Vec::new(), &mut best, &mut count);
    (best, count)
}

fn exact_constants() -> Outcome {
    let mut failures = Vec::new();
    let mut compositions = 0;
    for k in 1..=12u32 {
        for d in 1..=6u32 {
            let exact = exact_c_l1(k, d).map_err(|e| e.to_string())?;
            let (oracle, count) = max_over_compositions(k, d);
            compositions += count;
            check(exact.as_ratio() == &oracle, &mut failures, format!("c({k}, l1^{d}) = {exact}, oracle {oracle}"));
            let (brute, _) = brute_force_c_l1(k, d);
            check(brute == exact, &mut failures, format!("brute force differs at ({k}, {d})"));
            if d >= k {
                let closed = BigRational::new(BigInt::from(k).pow(k), factorial(k));
                check(exact.as_ratio() == &closed, &mut failures, format!("c({k}, l1^{d}) != k^k/k!"));
            }
        }
    }
    let spot = |k, d, n: i64, m: i64| {
        exact_c_l1(k, d).map(|c| c.as_ratio() == &BigRational::new(n.into(), m.into())).unwrap_or(false)
    };
    check(spot(2, 2, 2, 1), &mut failures, "c(2, l1^2) != 2".into());
    check(spot(8, 2, 128, 35), &mut failures, "c(8, l1^2) != 128/35".into());
    finish(failures, vec![format!("72 (k,d) pairs, {compositions} ordered compositions")])
}

fn asymptotics() -> Outcome {
    let mut failures = Vec::new();
    let r3 = root_sequence(3, &[999]).map_err(|e| e.to_string())?[0].1;
    let r2 = root_sequence(2, &[10_000]).map_err(|e| e.to_string())?[0].1;
    check(r3 < 1.01, &mut failures, format!("root(3, 999) = {r3}"));
    check(r2 < 1.002, &mut failures, format!("root(2, 10^4) = {r2}"));
    // c(k, l1^d) ~ (2πc)^{d/2} (2πk)^{-1/2} with k = dc
    let stirling = |d: f64, k: f64| {
        let c = k / d;
        ((d / 2.0) * (2.0 * std::f64::consts::PI * c).ln() - 0.5 * (2.0 * std::f64::consts::PI * k).ln()) / k
    };
    let log_c = |k: u32, d: u32| exact_c_l1(k, d).map(|c| c.ln()).map_err(|e| e.to_string());
    for (d, k) in [(3u32, 999u32), (2, 10_000)] {
        let est = stirling(f64::from(d), f64::from(k)).exp();
        let got = (log_c(k, d)? / f64::from(k)).exp();
        check((got - est).abs() < 1e-4, &mut failures, format!("root({d}, {k}) = {got}, Stirling {est}"));
    }
    let c = log_c(10_000, 2)?;
    let direct = exact_c_l1(10_000, 2).map_err(|e| e.to_string())?;
    let f = direct.as_ratio().to_f64().unwrap_or(f64::NAN);
    check(f.is_finite() && (f.ln() - c).abs() < 1e-9, &mut failures, "log evaluation disagrees".into());
    finish(failures, vec![format!("root(3,999) = {r3:.6}, root(2,10^4) = {r2:.6}")])
}

fn polarization_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst: f64 = 0.0;
    for i in 0..200u64 {
        let k = 1 + (i % 6) as u32;
        let n = 1 + (i / 6 % 4) as usize;
        let field = if i % 2 == 0 { Field::Complex } else { Field::Real };
        let p = random_polynomial(k, n, field, 1000 + i).map_err(|e| e.to_string())?;
        let args: Vec<Vector> = (0..k).map(|_| Vector::gaussian(n, field, &mut rng)).collect();
        let sign_sum = polarize_sign_sum(&p, &args).map_err(|e| e.to_string())?;
        let blocked = polarize_blocked(&p, &BlockTuple::distinct(&args).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        worst = worst.max((sign_sum - blocked).norm() / (1.0 + blocked.norm()));
    }
    let mut failures = Vec::new();
    check(worst <= 1e-9, &mut failures, format!("worst relative gap {worst:e}"));
    finish(failures, vec![format!("200 cases, worst relative gap {worst:.1e}")])
}

/// Largest singular value of the symmetric matrix of a quadratic, via SVD.
fn svd_norm(p: &HomogeneousPolynomial) -> f64 {
    let n = p.dim();
    let mut a = DMatrix::<Complex64>::zeros(n, n);
    for (alpha, &c) in p.terms() {
        let idx: Vec<usize> = alpha.as_slice().iter().enumerate().flat_map(|(j, &e)| vec![j; e as usize]).collect();
        if idx[0] == idx[1] {
            a[(idx[0], idx[0])] += c;
        } else {
            a[(idx[0], idx[1])] += c / 2.0;
            a[(idx[1], idx[0])] += c / 2.0;
        }
    }
    a.singular_values().max()
}

fn varopoulos_reproduction() -> Outcome {
    let e = |e: polarization::Error| e.to_string();
    let mut failures = Vec::new();
    let p = varopoulos();
    let cfg = OptimConfig::with_seed(4);
    let linf = SpaceSpec::complex(3, Exponent::Infinity).map_err(e)?;

    let poly = estimate_poly_norm(&p, &linf, &cfg).map_err(e)?.value;
    check((5.0 - 1e-4..=5.0 + 1e-6).contains(&poly), &mut failures, format!("||P|| estimate {poly}"));
    let multi = estimate_multilinear_norm(&p, &linf, &cfg).map_err(e)?.value;
    check(multi >= 6.0 - 1e-4, &mut failures, format!("||P^v|| estimate {multi}"));
    let sigma = spectral_norm_quadratic(&p, 3).map_err(e)?;
    check((sigma - 2.0).abs() <= 1e-10, &mut failures, format!("spectral norm {sigma}"));
    check((svd_norm(&p) - 2.0).abs() <= 1e-10, &mut failures, "SVD oracle differs from 2".into());

    let parts = Partition::new(vec![1, 1]).map_err(e)?;
    let mut notes = vec![format!("l_inf: ||P|| {poly:.6}, ||P^v|| {multi:.6}")];
    for q in [3.0, 4.0, 8.0] {
        let exp = Exponent::Finite(q);
        let spec = SpaceSpec::complex(3, exp).map_err(e)?;
        let blocked = estimate_blocked_norm(&p, &parts, &spec, &cfg).map_err(e)?.value;
        let floor = 6.0 / 3f64.powf(2.0 / q);
        check(blocked >= floor - 1e-3, &mut failures, format!("p={q}: blocked {blocked} < {floor}"));
        check(
            (lp3_bilinear_witness_value(exp) - floor).abs() < 1e-12,
            &mut failures,
            format!("p={q}: witness value"),
        );
        let upper = 2f64.powf(2.0 / q) * 5f64.powf(1.0 - 2.0 / q);
        check(
            (lp3_interpolation_upper_bound(exp).map_err(e)? - upper).abs() < 1e-12,
            &mut failures,
            format!("p={q}: interpolation bound"),
        );
        let report = estimate_ratio(&p, &spec, &cfg, Some(upper)).map_err(e)?;
        check(report.poly.value <= upper + 1e-6, &mut failures, format!("p={q}: ||P|| {} > {upper}", report.poly.value));
        let lower = (6.0f64 / 5.0).powf(1.0 - 2.0 / q);
        check(
            (lp3_lower_bound(exp).map_err(e)? - lower).abs() < 1e-12,
            &mut failures,
            format!("p={q}: lower bound"),
        );
        check(report.rigorous, &mut failures, format!("p={q}: ratio not rigorous"));
        check(report.ratio >= lower - 1e-3, &mut failures, format!("p={q}: ratio {} < {lower}", report.ratio));
        notes.push(format!("p={q}: ratio {:.4} vs {lower:.4}", report.ratio));
    }
    finish(failures, vec![notes.join(", ")])
}

/// `(xy)^{2m}((x+iy)^{4m} + (x−iy)^{4m})/2`, the same polynomial in closed form.
fn real_l1_closed_form(m: u32, x: Complex64, y: Complex64) -> Complex64 {
    let i = Complex64::i();
    let e = (4 * m) as i32;
    (x * y).powi((2 * m) as i32) * ((x + i * y).powi(e) + (x - i * y).powi(e)) / 2.0
}

fn real_l1_gap() -> Outcome {
    let e = |e: polarization::Error| e.to_string();
    let mut failures = Vec::new();
    let spec = SpaceSpec::real(2, Exponent::Finite(1.0)).map_err(e)?;
    let cfg = OptimConfig::with_seed(5);
    let mut notes = Vec::new();
    for m in [1u32, 2] {
        let p = real_l1_example(m).map_err(e)?;
        let target = 2f64.powi(-6 * m as i32);
        let est = estimate_poly_norm(&p, &spec, &cfg).map_err(e)?.value;
        check((est - target).abs() <= 1e-8, &mut failures, format!("m={m}: ||P|| {est} vs {target}"));

        let point = Vector(vec![Complex64::new(0.5, 0.0), Complex64::new(0.0, 0.5)]);
        let value = p.complexify().map_err(e)?.evaluate(&point).map_err(e)?.norm();
        let expected = 2f64.powi(-(4 * m as i32 + 1));
        check((value - expected).abs() <= 1e-12, &mut failures, format!("m={m}: |P~(1/2, i/2)| = {value}"));
        let closed = real_l1_closed_form(m, point[0], point[1]).norm();
        check((closed - expected).abs() <= 1e-12, &mut failures, format!("m={m}: closed form {closed}"));

        let b = estimate_bochnak_ratio(&p, &spec, &cfg).map_err(e)?.ratio;
        let floor = 2f64.powi(2 * m as i32 - 1);
        check(b >= floor - 1e-3, &mut failures, format!("m={m}: Bochnak ratio {b} < {floor}"));
        notes.push(format!("m={m}: ||P|| {est:.3e}, ratio {b:.3}"));
    }
    finish(failures, vec![notes.join(", ")])
}

fn banach_suite() -> Outcome {
    let e = |e: polarization::Error| e.to_string();
    let spec = SpaceSpec::complex(4, Exponent::Finite(2.0)).map_err(e)?;
    let mut worst: f64 = 0.0;
    let mut oracle_gap: f64 = 0.0;
    for i in 0..50u64 {
        let p = random_polynomial(2, 4, Field::Complex, 6000 + i).map_err(e)?;
        let sigma = spectral_norm_quadratic(&p, 4).map_err(e)?;
        oracle_gap = oracle_gap.max((sigma - svd_norm(&p)).abs());
        let cfg = OptimConfig {
            starts: 32,
            spectral_shortcut: false,
            ..OptimConfig::with_seed(i)
        };
        let poly = estimate_poly_norm(&p, &spec, &cfg).map_err(e)?.value;
        let multi = estimate_multilinear_norm(&p, &spec, &cfg).map_err(e)?.value;
        worst = worst.max((poly - sigma).abs()).max((multi - sigma).abs());
    }
    let mut failures = Vec::new();
    check(worst <= 1e-6, &mut failures, format!("worst gap to spectral norm {worst:e}"));
    check(oracle_gap <= 1e-10, &mut failures, format!("spectral norm vs SVD {oracle_gap:e}"));
    finish(failures, vec![format!("50 quadratics, worst gap {worst:.1e}")])
}

fn quotient_lemma() -> Outcome {
    let e = |e: polarization::Error| e.to_string();
    let mut failures = Vec::new();
    let spec = SpaceSpec::real(2, Exponent::Finite(2.0)).map_err(e)?;
    let q = build_quotient(&spec, 0.1, 0.2, 7).map_err(e)?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut ratio, mut residual) = (0.0f64, 0.0f64);
    for _ in 0..100 {
        let x = spec.random_unit(&mut rng);
        let lift = greedy_preimage(&q, &x, 1e-13, 400).map_err(e)?;
        let xn = norm(&x, &spec).map_err(e)?;
        ratio = ratio.max(lift.z.l1_norm() / xn);
        residual = residual.max(lift.residual);
        let image = q.apply(&lift.z);
        let direct = image.iter().zip(x.iter()).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
        check(direct < 1e-12, &mut failures, format!("q(z) misses x by {direct:e}"));
    }
    check(ratio <= 1.2, &mut failures, format!("||z||_1/||x|| = {ratio}"));
    check(residual < 1e-12, &mut failures, format!("residual {residual:e}"));

    let mut violations = 0;
    for k in [2u32, 3] {
        for i in 0..20u64 {
            let p = random_polynomial(k, 2, Field::Real, 7000 + 100 * u64::from(k) + i).map_err(e)?;
            let cfg = OptimConfig {
                starts: 16,
                ..OptimConfig::with_seed(i)
            };
            violations += verify_transfer_bound(&p, &q, &cfg, 10).map_err(e)?.violations;
        }
    }
    check(violations == 0, &mut failures, format!("{violations} transfer violations"));
    finish(failures, vec![format!("d = {}, max ||z||_1 {ratio:.4}, 40 polynomials", q.d())])
}

fn harris_audit() -> Outcome {
    let e = |e: polarization::Error| e.to_string();
    let mut failures = Vec::new();
    let p = varopoulos();
    let linf = SpaceSpec::complex(3, Exponent::Infinity).map_err(e)?;
    let cfg = OptimConfig {
        starts: 64,
        ..OptimConfig::with_seed(8)
    };
    let mut audited = 0;
    for parts in [vec![2], vec![1, 1]] {
        let pt = Partition::new(parts).map_err(e)?;
        let bound = harris_bound(&pt).map_err(e)?.to_f64() * 5.0;
        let b = estimate_blocked_norm(&p, &pt, &linf, &cfg).map_err(e)?.value;
        check(b <= bound * (1.0 + 1e-9), &mut failures, format!("Varopoulos {pt}: {b} > {bound}"));
        audited += 1;
    }
    let pt = Partition::new(vec![1, 1]).map_err(e)?;
    let harris = harris_bound(&pt).map_err(e)?.to_f64();
    for i in 0..20u64 {
        let n = 2 + (i as usize % 3);
        let spec = SpaceSpec::complex(n, Exponent::Finite(2.0)).map_err(e)?;
        let q = random_polynomial(2, n, Field::Complex, 8000 + i).map_err(e)?;
        let sigma = svd_norm(&q);
        let cfg = OptimConfig {
            starts: 16,
            spectral_shortcut: false,
            ..OptimConfig::with_seed(i)
        };
        let b = estimate_blocked_norm(&q, &pt, &spec, &cfg).map_err(e)?.value;
        check(b <= harris * sigma * (1.0 + 1e-9), &mut failures, format!("quadratic {i}: {b} > {}", harris * sigma));
        audited += 1;
    }
    finish(failures, vec![format!("{audited} blocked estimates within the Harris bound")])
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { id: 1, name: "exact constants", limit: Duration::from_secs(2), run: exact_constants },
        Criterion { id: 2, name: "asymptotics", limit: Duration::from_secs(5), run: asymptotics },
        Criterion { id: 3, name: "polarization oracle", limit: Duration::from_secs(10), run: polarization_oracle },
        Criterion { id: 4, name: "Varopoulos", limit: Duration::from_secs(30), run: varopoulos_reproduction },
        Criterion { id: 5, name: "real l1 gap", limit: Duration::from_secs(20), run: real_l1_gap },
        Criterion { id: 6, name: "Banach quadratics", limit: Duration::from_secs(20), run: banach_suite },
        Criterion { id: 7, name: "quotient lemma", limit: Duration::from_secs(30), run: quotient_lemma },
        Criterion { id: 8, name: "Harris audit", limit: Duration::from_secs(15), run: harris_audit },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(notes) if elapsed < c.limit => (true, notes.join(", ")),
            Ok(_) => (false, format!("too slow: limit {:?}", c.limit)),
            Err(msg) => (false, msg),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {} {:<20} {} ({:.2} s) {detail}",
            c.id,
            c.name,
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
    }
    if failed == 0 {
        println!("acceptance: all {} criteria passed", criteria.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} of {} criteria failed", criteria.len());
        ExitCode::FAILURE
    }
}
