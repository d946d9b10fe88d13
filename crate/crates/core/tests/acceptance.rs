//! Acceptance run: one PASS/FAIL line per criterion.
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use haagerup_core::cumulants::{determining_sequence_exact, haar_alpha_exact, CumulantSpec};
use haagerup_core::engine::family::{prime_family, random_family, random_star_family, CoefficientFamily, Support};
use haagerup_core::engine::matrices::{build_ml, schatten_pow, sigma_max};
use haagerup_core::engine::prime::{max_entry_diff, prime_gram_closed_form, prime_norm_bound};
use haagerup_core::engine::{
    holo_norm_2m, holo_rhs_bound, nonholo_norm_2m, nonholo_rhs_bound, s_eval, CMat, NonHoloFamily,
};
use haagerup_core::families::{
    catalan, chain_count_by_ranks, chain_fibers, chains_by_rank_vector, chebyshev_pair_count,
    enumerate_interval_pairings, enumerate_ncdm, enumerate_ncstar, enumerate_ncstar2, fiber_size_chain_in,
    fiber_size_q, fuss_catalan, ncdm_size_bound, rank_vectors,
};
use haagerup_core::harness::OPERATOR_NORM_NOTE;
use haagerup_core::oracles::brute::BRUTE_CAP;
use haagerup_core::oracles::{brute_moment, fock_moment, fock_operator_norm_estimate, free_group_moment, FockKind};
use haagerup_core::partition::{enumerate_nc, restrict};
use haagerup_core::symmetrize::{
    absorption_probabilities, apply_p, check_b_martingale, mu_exponents, symmetrize_terminal, terminals, GridShape,
    DEFAULT_STATE_CAP,
};
use haagerup_core::Result;

type Outcome = Result<(bool, String)>;

fn grids(dmax: usize, mmax: usize) -> Vec<GridShape> {
    let mut out = Vec::new();
    for d in 1..=dmax {
        for m in 1..=mmax {
            out.push(GridShape::new(d, m).unwrap());
        }
    }
    out
}

fn rel_close(x: f64, y: f64, tol: f64) -> bool {
    (x - y).abs() <= tol * y.abs().max(1e-12)
}

fn within(limit: Duration, start: Instant) -> (bool, String) {
    let t = start.elapsed();
    (t <= limit, format!("{:.1}s of {}s", t.as_secs_f64(), limit.as_secs()))
}

fn counting() -> Outcome {
    let start = Instant::now();
    let mut ok = true;
    for n in 1..=12 {
        ok &= BigUint::from(enumerate_nc(n)?.len()) == catalan(n as u64);
    }
    for g in grids(3, 3) {
        ok &= BigUint::from(enumerate_ncstar2(g)?.len()) == fuss_catalan(g.d, g.m);
        ok &= BigUint::from(enumerate_interval_pairings(g)?.len()) == chebyshev_pair_count(g.d, g.m);
    }
    for m in 1..=4 {
        for d in 1..=4 {
            let by_dp = chains_by_rank_vector(m, d)?;
            let mut total = BigUint::zero();
            for s in rank_vectors(m, d) {
                let c = chain_count_by_ranks(m, &s)?;
                ok &= BigUint::from(by_dp.get(&s).copied().unwrap_or(0)) == c;
                total += c;
            }
            ok &= total == BigUint::from(by_dp.values().sum::<u64>());
            ok &= total == fuss_catalan(d, m);
        }
    }
    let (fast, t) = within(Duration::from_secs(60), start);
    Ok((ok && fast, t))
}

fn martingale() -> Outcome {
    let start = Instant::now();
    let (mut ok, mut checks) = (true, 0);
    for m in 1..=5 {
        for p in enumerate_ncstar(GridShape::new(1, m)?)? {
            for k in 1..=2 * m as i64 {
                ok &= check_b_martingale(&p, k)?.holds();
                checks += 1;
            }
        }
    }
    let (fast, t) = within(Duration::from_secs(30), start);
    Ok((ok && fast, format!("{checks} checks, {t}")))
}

fn classification() -> Outcome {
    let start = Instant::now();
    let (mut ok, mut count, mut failures) = (true, 0, Vec::new());
    for g in grids(3, 3) {
        for (kind, t) in terminals(g) {
            for i in 1..=2 * g.m {
                if apply_p(&t, (i * g.d) as i64)? != t {
                    ok = false;
                    failures.push(format!("{kind} not fixed by P_{}", i * g.d));
                }
            }
        }
        let mut parts = enumerate_ncstar(g)?;
        parts.extend(enumerate_ncdm(g)?);
        for p in parts {
            count += 1;
            if let Err(e) = symmetrize_terminal(&p, g) {
                ok = false;
                if failures.len() < 3 {
                    failures.push(format!("d={} m={}: {e}", g.d, g.m));
                }
            }
        }
    }
    let (fast, t) = within(Duration::from_secs(60), start);
    let mut detail = format!("{count} partitions, {t}");
    if !failures.is_empty() {
        detail.push_str(&format!("; e.g. {}", failures.join("; ")));
    }
    Ok((ok && fast, detail))
}

fn restriction() -> Outcome {
    let (mut ok, mut checks) = (true, 0);
    for g in grids(3, 3) {
        for p in enumerate_ncstar(g)? {
            for k in 1..=2 * g.m {
                let moved = apply_p(&p, (k * g.d) as i64)?;
                for i in 1..=g.d {
                    let class = g.class(i);
                    ok &= restrict(&moved, &class)? == apply_p(&restrict(&p, &class)?, k as i64)?;
                    checks += 1;
                }
            }
        }
    }
    Ok((ok, format!("{checks} checks")))
}

fn fibers() -> Outcome {
    let mut ok = true;
    for g in grids(3, 3) {
        let (d, m) = (g.d, g.m);
        let fibers = chain_fibers(g)?;
        for s in enumerate_ncstar2(g)? {
            let f = fiber_size_chain_in(&s, g, &fibers)?;
            ok &= f.size as f64 <= 4f64.powi(2 * m as i32);
            ok &= f.min_pair_blocks + 2 * m >= d * m;
            ok &= f.all_coarser;
            ok &= f.max_block_size <= 2 * m;
        }
        ok &= BigUint::from(enumerate_ncdm(g)?.len()) <= ncdm_size_bound(d, m);
        let intervals: Vec<(usize, usize)> = (0..2 * m).map(|j| (j * d + 1, (j + 1) * d)).collect();
        let k = intervals.len();
        for s in enumerate_interval_pairings(g)? {
            let q = fiber_size_q(&s, &intervals)?;
            ok &= q.size <= 4usize.pow(k as u32 - 2);
            ok &= q.max_non_pair_elements <= 2 * k - 4;
        }
    }
    Ok((ok, "d, m <= 3".into()))
}

fn ml_powers(a: &CoefficientFamily, m: usize) -> Result<Vec<f64>> {
    (0..=a.d()).map(|l| Ok(schatten_pow(&build_ml(a, l)?.matrix, m))).collect()
}

fn identifications() -> Outcome {
    use haagerup_core::symmetrize::{sigma, sigma_tilde};
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut ok, mut worst) = (true, 0.0f64);
    for g in grids(3, 3) {
        for _ in 0..50 {
            let (r, alpha) = (rng.random_range(1..=3), rng.random_range(1..=3));
            let a = random_family(&mut rng, g.d, r, alpha, Support::Full)?;
            for (l, want) in ml_powers(&a, g.m)?.into_iter().enumerate() {
                let s = s_eval(&a, &sigma(g, l)?, g)?;
                let err = (s.re - want).abs() / want.max(1e-300);
                worst = worst.max(err);
                ok &= err <= 1e-9 && s.im.abs() <= 1e-10 * want;
                if l > 0 {
                    ok &= s_eval(&a, &sigma_tilde(g, l)?, g)?.re <= want * (1.0 + 1e-9);
                }
            }
        }
    }
    Ok((ok, format!("worst relative error {worst:.2e}")))
}

fn cauchy_schwarz() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut ok, mut worst) = (true, 0.0f64);
    for g in grids(2, 3) {
        let parts = enumerate_ncstar(g)?;
        let mus: Vec<Option<Vec<f64>>> = parts
            .iter()
            .map(|p| mu_exponents(p, g).ok().map(|v| v.iter().map(|x| x.to_f64().unwrap()).collect()))
            .collect();
        for _ in 0..20 {
            let a = random_family(&mut rng, g.d, 2, 2, Support::Full)?;
            let powers = ml_powers(&a, g.m)?;
            for (p, mu) in parts.iter().zip(&mus) {
                let s = s_eval(&a, p, g)?.abs();
                for i in 1..=g.m {
                    let x = s_eval(&a, &apply_p(p, (g.d * i) as i64)?, g)?.re;
                    let y = s_eval(&a, &apply_p(p, ((g.m + i) * g.d) as i64)?, g)?.re;
                    let bound = (x.max(0.0) * y.max(0.0)).sqrt();
                    ok &= s <= bound * (1.0 + 1e-9) + 1e-12;
                    worst = worst.max(s / bound);
                }
                if let Some(mu) = mu {
                    let bound: f64 = powers.iter().zip(mu).map(|(x, e)| x.powf(*e)).product();
                    ok &= s <= bound * (1.0 + 1e-9) + 1e-12;
                }
            }
        }
    }
    let mut states = 0;
    for g in grids(2, 3).into_iter().filter(|g| g.m >= 2) {
        let denom = BigRational::from_integer(BigInt::from(g.m - 1));
        for p in enumerate_ncstar(g)? {
            let probs = absorption_probabilities(&p, g, DEFAULT_STATE_CAP)?;
            let mu = mu_exponents(&p, g)?;
            for (l, mu_l) in mu.iter().enumerate() {
                let level: BigRational = probs
                    .iter()
                    .filter(|(k, _)| k.level() == l)
                    .map(|(_, v)| v.clone())
                    .sum();
                ok &= &level * &denom == mu_l * &denom;
            }
            ok &= probs.values().cloned().sum::<BigRational>() == BigRational::one();
            states += 1;
        }
    }
    Ok((ok, format!("worst Cauchy-Schwarz ratio {worst:.6}, absorption checked on {states} partitions")))
}

fn oracle_triangle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (circular, haar) = (CumulantSpec::circular(), CumulantSpec::haar());
    let (mut ok, mut checks) = (true, 0);
    for g in grids(2, 2) {
        for alpha in 1..=2 {
            let a = random_family(&mut rng, g.d, 2, alpha, Support::Full)?;
            let engine = holo_norm_2m(&a, &circular, g.m)?.power;
            ok &= rel_close(engine, fock_moment(&a, FockKind::Circular, g.m)?, 1e-8);
            checks += 1;
        }
    }
    for g in grids(2, 3) {
        for r in 1..=3 {
            let a = random_family(&mut rng, g.d, r, 2, Support::Full)?;
            let engine = holo_norm_2m(&a, &haar, g.m)?.power;
            ok &= rel_close(engine, free_group_moment(&a, g.m)?, 1e-9);
            checks += 1;
            if g.ground_size() <= BRUTE_CAP {
                ok &= rel_close(engine, brute_moment(&haar, &a, g.m)?, 1e-9);
                let c = holo_norm_2m(&a, &circular, g.m)?.power;
                ok &= rel_close(c, brute_moment(&circular, &a, g.m)?, 1e-9);
                checks += 2;
            }
        }
    }
    Ok((ok, format!("{checks} comparisons")))
}

fn main_inequality() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (mut ok, mut worst) = (true, 0.0f64);
    for spec in [CumulantSpec::circular(), CumulantSpec::haar()] {
        for g in grids(3, 3) {
            for _ in 0..100 {
                let a = random_family(&mut rng, g.d, 2, 2, Support::Full)?;
                let lhs = holo_norm_2m(&a, &spec, g.m)?.norm;
                let rhs = holo_rhs_bound(&a, &spec, g.m)?;
                ok &= lhs <= rhs;
                worst = worst.max(lhs / rhs);
            }
        }
    }
    Ok((ok, format!("largest lhs/rhs {worst:.4}")))
}

fn nonholomorphic() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let semi = CumulantSpec::semicircular();
    let (mut ok, mut worst) = (true, 0.0f64);
    for g in grids(2, 2) {
        for _ in 0..50 {
            let a = random_family(&mut rng, g.d, 2, 2, Support::NoAdjacentRepeat)?;
            let lhs = nonholo_norm_2m(NonHoloFamily::Plain(&a), &semi, g.m)?.norm;
            let rhs = nonholo_rhs_bound(&a, &semi, g.m)?;
            ok &= lhs <= rhs;
            worst = worst.max(lhs / rhs);
            let b = random_star_family(&mut rng, g.d, 2, 2)?;
            for spec in [CumulantSpec::circular(), CumulantSpec::haar()] {
                let lhs = nonholo_norm_2m(NonHoloFamily::Star(&b), &spec, g.m)?.norm;
                let rhs = nonholo_rhs_bound(b.as_doubled(), &spec, g.m)?;
                ok &= lhs <= rhs;
                worst = worst.max(lhs / rhs);
            }
        }
        if g.d >= 2 {
            let mut bad = CoefficientFamily::new(g.d, 2, 1)?;
            bad.insert(vec![1; g.d], CMat::identity(1, 1))?;
            ok &= nonholo_norm_2m(NonHoloFamily::Plain(&bad), &semi, g.m).is_err();
        }
    }
    Ok((ok, format!("largest lhs/rhs {worst:.4}")))
}

fn prime() -> Outcome {
    let mut ok = true;
    let mut equality = f64::NAN;
    for (p, d) in [(3u64, 2usize), (5, 2), (5, 3)] {
        let a = prime_family(p, d)?;
        ok &= (a.frobenius_sq() - (p as f64).powi(d as i32)).abs() <= 1e-9;
        let bound = prime_norm_bound(p, d).powi(2);
        for l in 1..d {
            let m = build_ml(&a, l)?.matrix;
            ok &= max_entry_diff(&(&m * m.adjoint()), &prime_gram_closed_form(p, d, l)?) <= 1e-10;
            let s = sigma_max(&m, 1e-14, 100_000);
            ok &= s * s <= bound + 1e-8;
            if (p, d, l) == (3, 2, 1) {
                equality = s * s - bound;
                ok &= equality.abs() <= 1e-8;
            }
        }
    }
    Ok((ok, format!("sigma_max^2 - bound at (3,2,1) = {equality:.1e}")))
}

fn lower_bound() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let (mut ok, mut slack) = (true, f64::INFINITY);
    for d in 1..=2 {
        for trial in 0..10 {
            let alpha = 1 + trial % 2;
            let a = random_family(&mut rng, d, 2, alpha, Support::Full)?;
            let lower = (0..=d)
                .map(|l| Ok(sigma_max(&build_ml(&a, l)?.matrix, 1e-13, 100_000)))
                .collect::<Result<Vec<f64>>>()?
                .into_iter()
                .fold(0.0, f64::max);
            let est = fock_operator_norm_estimate(&a, FockKind::Circular, 2 * d, 1e-12, 20_000, trial as u64)?;
            ok &= lower <= est + 1e-6;
            slack = slack.min(est - lower);
        }
    }
    Ok((ok, format!("smallest margin {slack:.4}")))
}

fn haar_sequence() -> Outcome {
    let mut ok = true;
    let inverted = determining_sequence_exact(&|_| BigRational::one(), 6);
    for n in 1..=6 {
        let sign = if n % 2 == 1 { 1 } else { -1 };
        let want = BigRational::from_integer(BigInt::from(sign) * BigInt::from(catalan(n as u64 - 1)));
        ok &= inverted[n - 1] == want && haar_alpha_exact(n) == want;
        ok &= inverted[n - 1].is_integer();
    }
    let shown: Vec<String> = inverted.iter().map(|x| x.to_string()).collect();
    Ok((ok, format!("alpha_1..6 = {}", shown.join(", "))))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 13] = [
        ("counting", counting),
        ("martingale identity", martingale),
        ("terminal classification", classification),
        ("restriction commutation", restriction),
        ("fiber bounds", fibers),
        ("identifications", identifications),
        ("Cauchy-Schwarz, exponent bound, absorption", cauchy_schwarz),
        ("oracle triangle", oracle_triangle),
        ("main inequality", main_inequality),
        ("non-holomorphic bounds", nonholomorphic),
        ("prime example", prime),
        ("Fock lower bound", lower_bound),
        ("Haar determining sequence", haar_sequence),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (pass, detail) = match f() {
            Ok(x) => x,
            Err(e) => (false, format!("error: {e}")),
        };
        failed += usize::from(!pass);
        println!(
            "{} criterion {:2} {name}: {detail} [{:.1}s]",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            start.elapsed().as_secs_f64()
        );
    }
    println!("{OPERATOR_NORM_NOTE}");
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
