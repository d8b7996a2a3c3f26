use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Claim, Experiment, Params};
use crate::constants::{
    balanced_partition, brute_force_c_l1, exact_c_l1, harris_bound, lp3_bilinear_witness_value, lp3_interpolation_upper_bound,
    lp3_lower_bound, partition_value, partitions, root_sequence, Partition,
};
use crate::error::Result;
use crate::optimize::{
    estimate_blocked_norm, estimate_bochnak_ratio, estimate_multilinear_norm, estimate_poly_norm, estimate_ratio,
    spectral_norm_quadratic, OptimConfig,
};
use crate::polarize::{polarize_blocked, polarize_sign_sum, BlockTuple};
use crate::poly::{random_polynomial, real_l1_example, varopoulos};
use crate::quotient::{build_quotient, greedy_preimage, verify_transfer_bound, DEFAULT_MAX_STEPS, DEFAULT_RESIDUAL_TOL};
use crate::spaces::{Exponent, Field, SpaceSpec, Vector};

pub(super) static EXPERIMENTS: &[Experiment] = &[
    Experiment {
        name: "l1-constants-table",
        summary: "closed-form c(k, l1^d) against brute force over all partitions",
        params: &["k_max", "d_max"],
        body: l1_constants_table,
    },
    Experiment {
        name: "l1-roots-convergence",
        summary: "k-th roots of c(k, l1^d) decreasing to 1",
        params: &["d", "k", "threshold"],
        body: l1_roots_convergence,
    },
    Experiment {
        name: "varopoulos-lp3",
        summary: "norms of the Varopoulos quadratic on l_p^3 and the bound (6/5)^(1-2/p)",
        params: &["p", "starts"],
        body: varopoulos_lp3,
    },
    Experiment {
        name: "real-l1-bochnak",
        summary: "norm growth of the degree-8m example under complexification of real l1^2",
        params: &["m", "starts"],
        body: real_l1_bochnak,
    },
    Experiment {
        name: "banach-hilbert",
        summary: "polynomial and bilinear norms of random quadratics agree on l2^n",
        params: &["n", "trials", "starts", "shortcut"],
        body: banach_hilbert,
    },
    Experiment {
        name: "quotient-lemma",
        summary: "eta-net quotient map, greedy lifts and the transfer bound",
        params: &["p", "dim", "field", "eta", "epsilon", "lifts", "polys", "samples"],
        body: quotient_lemma,
    },
    Experiment {
        name: "harris-audit",
        summary: "blocked norms against Harris' bound where the norm is known exactly",
        params: &["quadratics", "starts"],
        body: harris_audit,
    },
    Experiment {
        name: "polarization-oracle",
        summary: "sign-sum polarization formula against the coefficient evaluator",
        params: &["cases", "k_max", "n_max"],
        body: polarization_oracle,
    },
];

fn sub_seed(seed: u64, i: u64) -> u64 {
    seed ^ (i + 1).wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

fn optim(seed: u64, starts: usize) -> OptimConfig {
    OptimConfig {
        starts,
        ..OptimConfig::with_seed(seed)
    }
}

fn l1_constants_table(params: &mut Params, _seed: u64) -> Result<Vec<Claim>> {
    let k_max: u32 = params.value("k_max", 12)?;
    let d_max: u32 = params.value("d_max", 6)?;
    let mut claims = Vec::new();
    for k in 1..=k_max {
        for d in 1..=d_max {
            let exact = exact_c_l1(k, d)?;
            let (brute, _) = brute_force_c_l1(k, d);
            claims.push(Claim::holds(
                format!("c({k}, l1^{d}) = {exact} matches brute force {brute}"),
                exact == brute,
            ));
            let top = partition_value(&balanced_partition(k, d)?);
            let argmax = partitions(k, d).iter().all(|pt| partition_value(pt) <= top);
            claims.push(Claim::holds(format!("balanced partition maximizes for k={k}, d={d}"), argmax));
            if d >= k {
                let kk = Partition::new(vec![1; k as usize])?;
                claims.push(Claim::holds(
                    format!("c({k}, l1^{d}) = k^k/k!"),
                    exact == partition_value(&kk),
                ));
            }
        }
    }
    if k_max >= 8 && d_max >= 2 {
        claims.push(Claim::two_sided("c(2, l1^2)", 2.0, exact_c_l1(2, 2)?.to_f64(), 0.0));
        claims.push(Claim::two_sided("c(8, l1^2) = 128/35", 128.0 / 35.0, exact_c_l1(8, 2)?.to_f64(), 0.0));
    }
    Ok(claims)
}

/// `(2πc)^{d/2} (2πk)^{−1/2}` for `k = dc`, the leading-order size of `c(k, ℓ₁^d)`.
fn stirling_root(d: u32, k: u32) -> f64 {
    let c = f64::from(k) / f64::from(d);
    let ln = 0.5 * f64::from(d) * (std::f64::consts::TAU * c).ln() - 0.5 * (std::f64::consts::TAU * f64::from(k)).ln();
    (ln / f64::from(k)).exp()
}

fn l1_roots_convergence(params: &mut Params, _seed: u64) -> Result<Vec<Claim>> {
    let d: u32 = params.value("d", 3)?;
    let k: u32 = params.value("k", 999)?;
    let threshold: f64 = params.value("threshold", 1.01)?;
    let mut claims = Vec::new();

    let (_, root) = root_sequence(d, &[k])?[0];
    claims.push(Claim::at_most(format!("c({k}, l1^{d})^(1/{k})"), threshold, root, 0.0));
    let (_, root2) = root_sequence(2, &[10_000])?[0];
    claims.push(Claim::at_most("c(10000, l1^2)^(1/10000)", 1.002, root2, 0.0));
    claims.push(Claim::two_sided(
        format!("root at k={k} against the Stirling estimate"),
        stirling_root(d, k),
        root,
        1e-4,
    ));

    let ks: Vec<u32> = (1..=12).map(|c| d * c * c).collect();
    let seq = root_sequence(d, &ks)?;
    let decreasing = seq.windows(2).all(|w| w[1].1 < w[0].1);
    claims.push(Claim::holds(format!("roots decrease along k = {d}c^2, c = 1..12"), decreasing));
    let (_, last) = seq[seq.len() - 1];
    claims.push(Claim::at_least(format!("root at k = {}", ks[ks.len() - 1]), 1.0, last, 0.0));
    for (kk, r) in root_sequence(1, &[1, 7, 50])? {
        claims.push(Claim::two_sided(format!("c({kk}, l1^1)^(1/{kk})"), 1.0, r, 1e-15));
    }
    Ok(claims)
}

fn varopoulos_lp3(params: &mut Params, seed: u64) -> Result<Vec<Claim>> {
    let ps: Vec<Exponent> = params.list("p", "inf,3,4,8")?;
    let starts: usize = params.value("starts", 200)?;
    let cfg = optim(seed, starts);
    let p = varopoulos();
    let mut claims = vec![Claim::two_sided(
        "spectral norm of the Varopoulos matrix",
        2.0,
        spectral_norm_quadratic(&p, 3)?,
        1e-10,
    )];
    for &pe in &ps {
        let spec = SpaceSpec::complex(3, pe)?;
        let upper = lp3_interpolation_upper_bound(pe)?;
        let lower = lp3_lower_bound(pe)?;
        let poly = estimate_poly_norm(&p, &spec, &cfg)?.value;
        let parts = Partition::new(vec![1, 1])?;
        let blocked = estimate_blocked_norm(&p, &parts, &spec, &cfg)?.value;
        let ratio = estimate_ratio(&p, &spec, &cfg, Some(upper))?;
        if pe == Exponent::Infinity {
            claims.push(Claim::at_least("||P|| on l_inf^3", 5.0, poly, 1e-4));
            claims.push(Claim::at_most("||P|| on l_inf^3", 5.0, poly, 1e-6));
            claims.push(Claim::at_least("||P^v|| on l_inf^3", 6.0, ratio.multilinear.value, 1e-4));
            claims.push(Claim::at_least("||P^v||/5 on l_inf^3", 1.2, ratio.ratio, 1e-4));
        } else {
            claims.push(Claim::at_least(
                format!("blocked (1,1) norm on l_{pe}^3 against 6/3^(2/p)"),
                lp3_bilinear_witness_value(pe),
                blocked,
                1e-3,
            ));
            claims.push(Claim::at_most(format!("||P|| on l_{pe}^3 against 2^(2/p) 5^(1-2/p)"), upper, poly, 1e-6));
            claims.push(Claim::at_least(
                format!("rigorous ratio on l_{pe}^3 against (6/5)^(1-2/p)"),
                lower,
                ratio.ratio,
                1e-3,
            ));
        }
    }

    // sampling sanity check of c(2, l_inf^2) = 1 over the complex field
    let spec = SpaceSpec::complex(2, Exponent::Infinity)?;
    let mut worst: f64 = 0.0;
    for i in 0..10 {
        let q = random_polynomial(2, 2, Field::Complex, sub_seed(seed, i))?;
        let r = estimate_ratio(&q, &spec, &optim(sub_seed(seed, i), 32), None)?;
        worst = worst.max(r.ratio);
    }
    claims.push(Claim::at_most("sampled ||P^v||/||P|| for quadratics on complex l_inf^2", 1.0, worst, 1e-6));
    Ok(claims)
}

fn real_l1_bochnak(params: &mut Params, seed: u64) -> Result<Vec<Claim>> {
    let ms: Vec<u32> = params.list("m", "1,2")?;
    let starts: usize = params.value("starts", 200)?;
    let cfg = optim(seed, starts);
    let spec = SpaceSpec::real(2, Exponent::Finite(1.0))?;
    let mut claims = Vec::new();
    for m in ms {
        let p = real_l1_example(m)?;
        let exact_norm = 0.5f64.powi(6 * m as i32);
        let est = estimate_poly_norm(&p, &spec, &cfg)?;
        claims.push(Claim::two_sided(format!("||P|| for m={m}"), exact_norm, est.value, 1e-8));
        let at = p
            .complexify()?
            .evaluate(&Vector(vec![Complex64::new(0.5, 0.0), Complex64::new(0.0, 0.5)]))?
            .norm();
        claims.push(Claim::two_sided(
            format!("|P~(1/2, i/2)| for m={m}"),
            0.5f64.powi(4 * m as i32 + 1),
            at,
            1e-12,
        ));
        let growth = 2f64.powi(2 * m as i32 - 1);
        claims.push(Claim::at_least(format!("|P~(1/2, i/2)|/||P|| for m={m}"), growth, at / exact_norm, 1e-9));
        let b = estimate_bochnak_ratio(&p, &spec, &cfg)?;
        claims.push(Claim::at_least(format!("Bochnak ratio estimate for m={m}"), growth, b.ratio, 1e-3));
    }
    Ok(claims)
}

fn banach_hilbert(params: &mut Params, seed: u64) -> Result<Vec<Claim>> {
    let n: usize = params.value("n", 4)?;
    let trials: u64 = params.value("trials", 50)?;
    let starts: usize = params.value("starts", 16)?;
    let shortcut: bool = params.value("shortcut", false)?;
    let spec = SpaceSpec::complex(n, Exponent::Finite(2.0))?;
    let real_spec = SpaceSpec::real(n, Exponent::Finite(2.0))?;
    let (mut poly_gap, mut multi_gap, mut ratio_gap, mut bochnak_gap) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for i in 0..trials {
        let s = sub_seed(seed, i);
        let cfg = OptimConfig {
            spectral_shortcut: shortcut,
            ..optim(s, starts)
        };
        let p = random_polynomial(2, n, Field::Complex, s)?;
        let sigma = spectral_norm_quadratic(&p, n)?;
        let poly = estimate_poly_norm(&p, &spec, &cfg)?.value;
        let multi = estimate_multilinear_norm(&p, &spec, &cfg)?.value;
        poly_gap = poly_gap.max((poly - sigma).abs());
        multi_gap = multi_gap.max((multi - sigma).abs());
        ratio_gap = ratio_gap.max((multi / poly - 1.0).abs());
        if i < 10 {
            let q = random_polynomial(2, n, Field::Real, s)?;
            bochnak_gap = bochnak_gap.max((estimate_bochnak_ratio(&q, &real_spec, &cfg)?.ratio - 1.0).abs());
        }
    }
    Ok(vec![
        Claim::at_most("max |poly estimate - spectral norm|", 0.0, poly_gap, 1e-6),
        Claim::at_most("max |multilinear estimate - spectral norm|", 0.0, multi_gap, 1e-6),
        Claim::at_most("max |ratio - 1|", 0.0, ratio_gap, 1e-6),
        Claim::at_most("max |Bochnak ratio - 1| for real quadratics", 0.0, bochnak_gap, 1e-6),
    ])
}

fn quotient_lemma(params: &mut Params, seed: u64) -> Result<Vec<Claim>> {
    let p: Exponent = params.value("p", Exponent::Finite(2.0))?;
    let dim: usize = params.value("dim", 2)?;
    let field: Field = params.value("field", Field::Real)?;
    let eta: f64 = params.value("eta", 0.1)?;
    let epsilon: f64 = params.value("epsilon", 0.2)?;
    let lifts: usize = params.value("lifts", 100)?;
    let polys: u64 = params.value("polys", 20)?;
    let samples: usize = params.value("samples", 10)?;
    let spec = SpaceSpec::new(dim, p, field)?;
    let q = build_quotient(&spec, eta, epsilon, seed)?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut l1_ratio, mut residual, mut geometric) = (0.0f64, 0.0f64, true);
    let mut max_steps = 0;
    for _ in 0..lifts {
        let x = spec.random_unit(&mut rng);
        let lift = greedy_preimage(&q, &x, DEFAULT_RESIDUAL_TOL, DEFAULT_MAX_STEPS)?;
        l1_ratio = l1_ratio.max(lift.z.l1_norm());
        residual = residual.max(lift.residual);
        geometric &= lift.geometric;
        max_steps = max_steps.max(lift.steps);
    }
    let mut claims = vec![
        Claim::at_most("max ||z||_1/||x|| over lifts", 1.0 + epsilon, l1_ratio, 0.0),
        Claim::at_most("max ||z||_1/||x|| against 1/(1-eta)", 1.0 / (1.0 - eta), l1_ratio, 1e-12),
        Claim::at_most("max lift residual", DEFAULT_RESIDUAL_TOL, residual, 0.0),
        Claim::holds("residuals decay like eta^j", geometric),
        Claim::at_most("sampled operator norm of q", 1.0, q.sampled_operator_norm(1000, seed), 1e-12),
    ];

    let (mut violations, mut slack, mut chain) = (0usize, 0.0f64, 0.0f64);
    for k in [2u32, 3] {
        for i in 0..polys {
            let s = sub_seed(seed, u64::from(k) * 1000 + i);
            let poly = random_polynomial(k, dim, field, s)?;
            let report = verify_transfer_bound(&poly, &q, &optim(s, 16), samples)?;
            violations += report.violations;
            slack = slack.max(report.transfer_slack);
            chain = chain.max(report.chain_slack);
        }
    }
    claims.push(Claim::two_sided("transfer-bound violations", 0.0, violations as f64, 0.0));
    claims.push(Claim::at_most("max |P^v(x)| / ((1+eps)^k c(k,l1^d) ||P||)", 1.0, slack, 1e-6));
    claims.push(Claim::at_most("max |P^v(x)| / (c(k,l1^d) ||P|| prod ||z_i||_1)", 1.0, chain, 1e-6));
    params.insert("d", q.d());
    params.insert("max_steps_used", max_steps);
    Ok(claims)
}

fn harris_audit(params: &mut Params, seed: u64) -> Result<Vec<Claim>> {
    let quadratics: u64 = params.value("quadratics", 20)?;
    let starts: usize = params.value("starts", 64)?;
    let parts = Partition::new(vec![1, 1])?;
    let harris = harris_bound(&parts)?.to_f64();
    let mut claims = vec![Claim::two_sided("Harris bound for (1,1)", 2.0, harris, 0.0)];

    let p = varopoulos();
    let linf = SpaceSpec::complex(3, Exponent::Infinity)?;
    let blocked = estimate_blocked_norm(&p, &parts, &linf, &optim(seed, starts))?.value;
    claims.push(Claim::at_most("Varopoulos blocked (1,1) on l_inf^3", harris * 5.0, blocked, harris * 5.0 * 1e-9));
    let diagonal = estimate_blocked_norm(&p, &Partition::new(vec![2])?, &linf, &optim(seed, starts))?.value;
    claims.push(Claim::at_most("Varopoulos blocked (2) on l_inf^3", 5.0, diagonal, 5.0 * 1e-9));

    let mut worst: f64 = 0.0;
    for i in 0..quadratics {
        let s = sub_seed(seed, i);
        let n = 2 + (i as usize % 3);
        let spec = SpaceSpec::complex(n, Exponent::Finite(2.0))?;
        let q = random_polynomial(2, n, Field::Complex, s)?;
        let sigma = spectral_norm_quadratic(&q, n)?;
        let cfg = OptimConfig {
            spectral_shortcut: false,
            ..optim(s, starts.min(16))
        };
        let b = estimate_blocked_norm(&q, &parts, &spec, &cfg)?.value;
        worst = worst.max(b / (harris * sigma));
    }
    claims.push(Claim::at_most(
        "max blocked (1,1) / (Harris bound * ||P||) over spectral quadratics",
        1.0,
        worst,
        1e-9,
    ));
    Ok(claims)
}

fn polarization_oracle(params: &mut Params, seed: u64) -> Result<Vec<Claim>> {
    let cases: u64 = params.value("cases", 200)?;
    let k_max: u32 = params.value("k_max", 6)?;
    let n_max: usize = params.value("n_max", 4)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for i in 0..cases {
        let k = 1 + (i as u32 % k_max.max(1));
        let n = 1 + (i as usize / 2 % n_max.max(1));
        let field = if i % 2 == 0 { Field::Complex } else { Field::Real };
        let p = random_polynomial(k, n, field, sub_seed(seed, i))?;
        let args: Vec<Vector> = (0..k).map(|_| Vector::gaussian(n, field, &mut rng)).collect();
        let sign_sum = polarize_sign_sum(&p, &args)?;
        let blocked = polarize_blocked(&p, &BlockTuple::distinct(&args)?)?;
        worst = worst.max((sign_sum - blocked).norm() / (1.0 + blocked.norm()));
    }
    Ok(vec![Claim::at_most(
        "max |sign-sum - blocked| / (1 + |blocked|)",
        0.0,
        worst,
        1e-9,
    )])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stirling_estimate_matches_expected_size() {
        assert!((stirling_root(3, 999) - 1.007).abs() < 1e-3);
    }
}
