use num_traits::ToPrimitive;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::config::RunConfig;
use super::report::{ReportRow, Worst};
use crate::cumulants::CumulantSpec;
use crate::engine::family::{prime_family, random_family, random_star_family, CMat, CoefficientFamily, Support};
use crate::engine::matrices::{build_ml, schatten_pow, sigma_max};
use crate::engine::prime::{max_entry_diff, prime_gram_closed_form, prime_norm_bound};
use crate::engine::{holo_norm_2m, holo_rhs_bound, nonholo_norm_2m, nonholo_rhs_bound, s_eval, NonHoloFamily};
use crate::error::{Error, Result};
use crate::families::{
    chain_fibers, enumerate_interval_pairings, enumerate_ncdm, enumerate_ncstar, enumerate_ncstar2, fiber_size_chain_in,
    fiber_size_q, ncdm_size_bound,
};
use crate::oracles::{brute_moment, fock_moment, fock_operator_norm_estimate, free_group_moment, FockKind};
use crate::oracles::brute::BRUTE_CAP;
use crate::symmetrize::{apply_p, check_b_martingale, mu_exponents, sigma, sigma_tilde, GridShape};

pub const SUITES: [&str; 8] = [
    "martingale",
    "cauchy-schwarz",
    "identifications",
    "fibers",
    "main-inequality",
    "nonholo",
    "prime",
    "oracles",
];

/// Runs a named suite.
pub fn run_suite(name: &str, cfg: &RunConfig) -> Result<Vec<ReportRow>> {
    cfg.validate()?;
    match name {
        "martingale" => martingale(cfg),
        "cauchy-schwarz" => cauchy_schwarz(cfg),
        "identifications" => identifications(cfg),
        "fibers" => fibers(cfg),
        "main-inequality" => main_inequality(cfg),
        "nonholo" => nonholo(cfg),
        "prime" => prime(cfg),
        "oracles" => oracles(cfg),
        other => Err(Error::Config(format!(
            "unknown suite {other:?}; expected one of {}",
            SUITES.join(", ")
        ))),
    }
}

fn rng(cfg: &RunConfig) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(cfg.seed())
}

fn grid(cfg: &RunConfig) -> Result<GridShape> {
    GridShape::new(cfg.d_or(2), cfg.m_or(2))
}

/// `2B(π) = B(P_k π) + B(P_{k+m} π)` on `NC*(1, m')` for every `m' ≤ m`.
fn martingale(cfg: &RunConfig) -> Result<Vec<ReportRow>> {
    let mut rows = Vec::new();
    for m in 1..=cfg.m_or(5) {
        let parts = enumerate_ncstar(GridShape::new(1, m)?)?;
        for k in 1..=2 * m as i64 {
            let mut bad = 0usize;
            for p in &parts {
                if !check_b_martingale(p, k)?.holds() {
                    bad += 1;
                }
            }
            rows.push(ReportRow::exact(
                "martingale",
                format!("m={m} k={k:02} partitions={}", parts.len()),
                bad as f64,
                0.0,
                bad == 0,
            ));
        }
    }
    Ok(rows)
}

fn ml_powers(a: &CoefficientFamily, m: usize) -> Result<Vec<f64>> {
    (0..=a.d()).map(|l| Ok(schatten_pow(&build_ml(a, l)?.matrix, m))).collect()
}

/// Partition Cauchy–Schwarz and the exponent bound over `NC*(d,m)`.
fn cauchy_schwarz(cfg: &RunConfig) -> Result<Vec<ReportRow>> {
    let g = grid(cfg)?;
    let (tol, mut rng) = (cfg.tol(), rng(cfg));
    let parts = enumerate_ncstar(g)?;
    let mus: Vec<Option<Vec<f64>>> = parts
        .iter()
        .map(|p| {
            mu_exponents(p, g)
                .ok()
                .map(|mu| mu.iter().map(|x| x.to_f64().unwrap()).collect())
        })
        .collect();
    let mut rows = Vec::new();
    for trial in 0..cfg.trials_or(5) {
        let a = random_family(&mut rng, g.d, cfg.r_or(2), cfg.alpha_or(2), Support::Full)?;
        let powers = ml_powers(&a, g.m)?;
        let params = format!("d={} m={} trial={trial:03}", g.d, g.m);
        let (mut cs, mut ex) = (Worst::default(), Worst::default());
        for (p, mu) in parts.iter().zip(&mus) {
            let s = s_eval(&a, p, g)?.abs();
            for i in 1..=g.m {
                let left = s_eval(&a, &apply_p(p, (g.d * i) as i64)?, g)?.re;
                let right = s_eval(&a, &apply_p(p, ((g.m + i) * g.d) as i64)?, g)?.re;
                let bound = (left.max(0.0) * right.max(0.0)).sqrt();
                cs.push(ReportRow::inequality("cauchy-schwarz", params.clone(), s, bound, tol));
            }
            if let Some(mu) = mu {
                let bound: f64 = powers.iter().zip(mu).map(|(x, e)| x.powf(*e)).product();
                ex.push(ReportRow::inequality("exponent-bound", params.clone(), s, bound, tol));
            }
        }
        rows.extend(cs.finish());
        rows.extend(ex.finish());
    }
    Ok(rows)
}

/// `S(a, σ_l) = ‖M_l‖_{2m}^{2m}` and `S(a, σ̃_l) ≤ ‖M_l‖_{2m}^{2m}`.
fn identifications(cfg: &RunConfig) -> Result<Vec<ReportRow>> {
    let g = grid(cfg)?;
    let (tol, mut rng) = (cfg.tol(), rng(cfg));
    let mut rows = Vec::new();
    for trial in 0..cfg.trials_or(10) {
        let a = random_family(&mut rng, g.d, cfg.r_or(2), cfg.alpha_or(2), Support::Full)?;
        let powers = ml_powers(&a, g.m)?;
        for (l, &want) in powers.iter().enumerate() {
            let params = format!("d={} m={} trial={trial:03} l={l}", g.d, g.m);
            let s = s_eval(&a, &sigma(g, l)?, g)?;
            rows.push(ReportRow::equality("sigma", params.clone(), s.re, want, tol));
            rows.push(ReportRow::inequality("sigma-imaginary", params.clone(), s.im.abs(), 1e-10 * want, 0.0));
            if l > 0 {
                let t = s_eval(&a, &sigma_tilde(g, l)?, g)?;
                rows.push(ReportRow::inequality("sigma-tilde", params, t.re, want, tol));
            }
        }
    }
    Ok(rows)
}

/// Chain fibers, `|NC(d,m)|` and `Q` fibers.
fn fibers(cfg: &RunConfig) -> Result<Vec<ReportRow>> {
    let g = grid(cfg)?;
    let (d, m) = (g.d, g.m);
    let params = format!("d={d} m={m}");
    let fibers = chain_fibers(g)?;
    let pairings = enumerate_ncstar2(g)?;
    let (mut size, mut pairs, mut coarse, mut block) = (Worst::default(), Worst::default(), Worst::default(), Worst::default());
    let four_2m = 4f64.powi(2 * m as i32);
    for s in &pairings {
        let f = fiber_size_chain_in(s, g, &fibers)?;
        size.push(ReportRow::at_most("chain-fiber-size", params.clone(), f.size as f64, four_2m));
        let need = (d * m).saturating_sub(2 * m) as f64;
        pairs.push(ReportRow::exact(
            "chain-fiber-pair-blocks",
            params.clone(),
            f.min_pair_blocks as f64,
            need,
            f.min_pair_blocks as f64 >= need,
        ));
        coarse.push(ReportRow::exact("chain-fiber-coarser", params.clone(), f64::from(u8::from(f.all_coarser)), 1.0, f.all_coarser));
        block.push(ReportRow::at_most("chain-fiber-block-size", params.clone(), f.max_block_size as f64, (2 * m) as f64));
    }
    let mut rows: Vec<ReportRow> = [size, pairs, coarse, block].into_iter().filter_map(Worst::finish).collect();
    let ncdm = enumerate_ncdm(g)?.len();
    let bound = ncdm_size_bound(d, m).to_f64().unwrap();
    rows.push(ReportRow::at_most("ncdm-size", params.clone(), ncdm as f64, bound));
    let intervals: Vec<(usize, usize)> = (0..2 * m).map(|j| (j * d + 1, (j + 1) * d)).collect();
    let k = intervals.len() as i32;
    let (mut qsize, mut qpairs) = (Worst::default(), Worst::default());
    for s in enumerate_interval_pairings(g)? {
        let q = fiber_size_q(&s, &intervals)?;
        qsize.push(ReportRow::at_most("q-fiber-size", params.clone(), q.size as f64, 4f64.powi(k - 2)));
        qpairs.push(ReportRow::at_most(
            "q-fiber-non-pair-elements",
            params.clone(),
            q.max_non_pair_elements as f64,
            (2 * k - 4) as f64,
        ));
    }
    rows.extend(qsize.finish());
    rows.extend(qpairs.finish());
    Ok(rows)
}

fn spec(cfg: &RunConfig) -> Result<CumulantSpec> {
    CumulantSpec::from_name(cfg.spec_name())
}

/// `holo_norm_2m ≤ holo_rhs_bound` on random families.
fn main_inequality(cfg: &RunConfig) -> Result<Vec<ReportRow>> {
    let g = grid(cfg)?;
    let spec = spec(cfg)?;
    let (tol, mut rng) = (cfg.tol(), rng(cfg));
    let mut rows = Vec::new();
    for trial in 0..cfg.trials_or(20) {
        let a = random_family(&mut rng, g.d, cfg.r_or(2), cfg.alpha_or(2), Support::Full)?;
        let lhs = holo_norm_2m(&a, &spec, g.m)?.norm;
        let rhs = holo_rhs_bound(&a, &spec, g.m)?;
        rows.push(ReportRow::inequality(
            "main-inequality",
            format!("spec={} d={} m={} trial={trial:03}", spec.name(), g.d, g.m),
            lhs,
            rhs,
            tol,
        ));
    }
    Ok(rows)
}

/// Non-holomorphic bounds: semicircular on admissible plain families, R-diagonal on starred ones.
fn nonholo(cfg: &RunConfig) -> Result<Vec<ReportRow>> {
    let g = grid(cfg)?;
    let (tol, mut rng) = (cfg.tol(), rng(cfg));
    let (r, alpha) = (cfg.r_or(2), cfg.alpha_or(2));
    let rdiag = match spec(cfg)? {
        s if s.is_rdiagonal() => s,
        _ => CumulantSpec::haar(),
    };
    let semi = CumulantSpec::semicircular();
    let mut rows = Vec::new();
    for trial in 0..cfg.trials_or(10) {
        let a = random_family(&mut rng, g.d, r, alpha, Support::NoAdjacentRepeat)?;
        let lhs = nonholo_norm_2m(NonHoloFamily::Plain(&a), &semi, g.m)?.norm;
        let rhs = nonholo_rhs_bound(&a, &semi, g.m)?;
        let params = format!("d={} m={} trial={trial:03}", g.d, g.m);
        rows.push(ReportRow::inequality("nonholo-semicircular", params.clone(), lhs, rhs, tol));
        let b = random_star_family(&mut rng, g.d, r, alpha)?;
        let lhs = nonholo_norm_2m(NonHoloFamily::Star(&b), &rdiag, g.m)?.norm;
        let rhs = nonholo_rhs_bound(b.as_doubled(), &rdiag, g.m)?;
        rows.push(ReportRow::inequality(
            "nonholo-rdiagonal",
            format!("spec={} {params}", rdiag.name()),
            lhs,
            rhs,
            tol,
        ));
    }
    if g.d >= 2 {
        let mut bad = CoefficientFamily::new(g.d, r, alpha)?;
        bad.insert(vec![1; g.d], CMat::identity(alpha, alpha))?;
        let rejected = matches!(
            nonholo_norm_2m(NonHoloFamily::Plain(&bad), &semi, g.m),
            Err(Error::Support(_))
        );
        rows.push(ReportRow::exact(
            "nonholo-repeat-rejected",
            format!("d={} m={}", g.d, g.m),
            f64::from(u8::from(rejected)),
            1.0,
            rejected,
        ));
    }
    Ok(rows)
}

/// The prime family: `‖a‖_2^2 = p^d`, closed form of `M_l M_l^*`, and `‖M_l‖^2 ≤ (d-1)p^{d-1}`.
fn prime(cfg: &RunConfig) -> Result<Vec<ReportRow>> {
    let (p, d) = (cfg.p.unwrap_or(3), cfg.d_or(2));
    let a = prime_family(p, d)?;
    let params = format!("p={p} d={d}");
    let mut rows = vec![ReportRow::equality(
        "prime-frobenius",
        params.clone(),
        a.frobenius_sq(),
        (p as f64).powi(d as i32),
        cfg.tol(),
    )];
    let bound = prime_norm_bound(p, d).powi(2);
    for l in 1..d {
        let m = build_ml(&a, l)?.matrix;
        let gram = &m * m.adjoint();
        let closed = prime_gram_closed_form(p, d, l)?;
        let diff = max_entry_diff(&gram, &closed);
        rows.push(ReportRow::inequality_abs("prime-gram-closed-form", format!("{params} l={l}"), diff, 0.0, 1e-10));
        let s = sigma_max(&m, 1e-14, 100_000);
        rows.push(ReportRow::inequality_abs("prime-norm-bound", format!("{params} l={l}"), s * s, bound, 1e-8));
        if (p, d) == (3, 2) {
            rows.push(ReportRow::equality("prime-norm-equality", format!("{params} l={l}"), s * s, bound, 1e-8));
        }
    }
    Ok(rows)
}

/// Cumulant engine against the Fock, group-algebra and brute-force realizations,
/// plus the Fock lower bound `max_l ‖M_l‖ ≤ ‖A‖`.
fn oracles(cfg: &RunConfig) -> Result<Vec<ReportRow>> {
    let g = grid(cfg)?;
    let (d, m) = (g.d, g.m);
    let mut rng = rng(cfg);
    let (r, alpha) = (cfg.r_or(2), cfg.alpha_or(2));
    let circular = CumulantSpec::circular();
    let haar = CumulantSpec::haar();
    let mut rows = Vec::new();
    for trial in 0..cfg.trials_or(3) {
        let params = format!("d={d} m={m} r={r} alpha={alpha} trial={trial:03}");
        let a = random_family(&mut rng, d, r, alpha, Support::Full)?;
        let engine_c = holo_norm_2m(&a, &circular, m)?.power;
        rows.push(ReportRow::equality("engine-vs-fock", params.clone(), engine_c, fock_moment(&a, FockKind::Circular, m)?, 1e-8));
        let engine_h = holo_norm_2m(&a, &haar, m)?.power;
        rows.push(ReportRow::equality("engine-vs-free-group", params.clone(), engine_h, free_group_moment(&a, m)?, 1e-9));
        if 2 * d * m <= BRUTE_CAP {
            rows.push(ReportRow::equality("engine-vs-brute-circular", params.clone(), engine_c, brute_moment(&circular, &a, m)?, 1e-9));
            rows.push(ReportRow::equality("engine-vs-brute-haar", params.clone(), engine_h, brute_moment(&haar, &a, m)?, 1e-9));
        }
        let lower = (0..=d)
            .map(|l| Ok(sigma_max(&build_ml(&a, l)?.matrix, 1e-13, 100_000)))
            .collect::<Result<Vec<f64>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        let est = fock_operator_norm_estimate(&a, FockKind::Circular, 2 * d, 1e-12, 20_000, cfg.seed() ^ trial as u64)?;
        rows.push(ReportRow::inequality_abs("fock-lower-bound", params, lower, est, 1e-6));
    }
    Ok(rows)
}
