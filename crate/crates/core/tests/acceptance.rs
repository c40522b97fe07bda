//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::f64::consts::{LN_2, PI};
use std::process::Command;
use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use spin_discord::chain::{
    a1_prefactor, asymptotic_correlators, exact_correlators, limit_correlators, magnetization, prefactor_set,
    xxz_prefactors, ModelSpec, Source, GLAISHER,
};
use spin_discord::hermitian::{partial_trace, von_neumann_entropy};
use spin_discord::oracle::{discord_for_measurement, discord_numeric, MeasurementAngles, DEFAULT_GRID};
use spin_discord::scaling::{continuity_report, discord_profile, fit_decay, perturb_xstate};
use spin_discord::thermal::{build_chain_hamiltonian, check_area_law_with, contiguous_cuts, CheckOptions, Geometry, AREA_LAW_TOL};
use spin_discord::xstate::{
    discord_analytic, discord_breakdown, from_correlators, lemma1_holds, limit_discord, random_pure_xstate,
    random_xstate, PairCorrelators,
};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn rel(x: f64, reference: f64) -> f64 {
    ((x - reference) / reference).abs()
}

fn analytic_vs_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut states = Vec::new();
    while states.len() < 1000 {
        let s = random_xstate(&mut rng, true);
        if lemma1_holds(&s) {
            states.push(s);
        }
    }
    let start = Instant::now();
    let worst = states
        .par_iter()
        .map(|s| {
            let d = discord_analytic(&s.correlators()).unwrap();
            let n = discord_numeric(&s.to_density_matrix().unwrap(), DEFAULT_GRID).unwrap().discord;
            (d - n).abs()
        })
        .reduce(|| 0.0, f64::max);
    let secs = start.elapsed().as_secs_f64();
    outcome(worst <= 1e-6 && secs < 60.0, format!("1000 states, max |D_analytic - D_oracle| = {worst:.2e} (tol 1e-6), {secs:.1} s (limit 60 s)"))
}

fn pure_state_reduction() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let (s, _) = random_pure_xstate(&mut rng);
        let d = discord_analytic(&s.correlators()).unwrap();
        // Entanglement entropy from the reduced density matrix, not the closed form.
        let a = partial_trace(&s.to_density_matrix().unwrap(), &[0]).unwrap();
        worst = worst.max((d - von_neumann_entropy(&a).unwrap()).abs());
    }
    outcome(worst <= 1e-8, format!("200 pure states, max |D - S(rho_A)| = {worst:.2e} (tol 1e-8)"))
}

fn tfim_paramagnet() -> Outcome {
    let m = ModelSpec::Tfim { h: 2.0 };
    let p = discord_profile(&m, 20, 60, Source::Exact).unwrap();
    let fit = fit_decay(&p.records).unwrap();
    let target = -2.0 * 2f64.ln();
    let rate = fit.rate.unwrap_or(f64::NAN);
    let rate_err = rel(rate, target);
    let sz = magnetization(&m).unwrap();
    let a1 = a1_prefactor(sz).unwrap();
    let r = 40.0;
    let closed = a1 * 2f64.powf(-2.0 * r) / (PI * (1.0 - 0.25f64).sqrt() * r);
    let d40 = p.records.iter().find(|rec| rec.r == 40).unwrap().discord;
    let form_err = rel(d40, closed);
    outcome(
        rate_err <= 0.01 && form_err <= 0.05,
        format!(
            "fit law {} rate {rate:.6} vs {target:.6} ({:.3}%, tol 1%); D(40) = {d40:.6e} vs closed form {closed:.6e} ({:.3}%, tol 5%)",
            fit.law,
            100.0 * rate_err,
            100.0 * form_err
        ),
    )
}

fn tfim_critical() -> Outcome {
    let m = ModelSpec::Tfim { h: 1.0 };
    let sz = magnetization(&m).unwrap();
    let target = 2f64.powf(1.0 / 6.0) * 0.5f64.exp() * GLAISHER.powi(-6) * a1_prefactor(sz).unwrap();
    let start = Instant::now();
    let rs = [25usize, 50, 100, 150, 200];
    let vals: Vec<(usize, f64)> = rs
        .par_iter()
        .map(|&r| (r, discord_breakdown(&exact_correlators(&m, r).unwrap()).unwrap().discord * (r as f64).sqrt()))
        .collect();
    let secs = start.elapsed().as_secs_f64();
    let trail: Vec<String> = vals.iter().map(|(r, v)| format!("r={r}: {:.3}%", 100.0 * rel(*v, target))).collect();
    let err = rel(vals.last().unwrap().1, target);
    outcome(
        err <= 0.03 && secs < 120.0,
        format!("D r^(1/2) vs {target:.6}; {} (tol 3% at r=200), {secs:.1} s", trail.join(", ")),
    )
}

fn tfim_ferro() -> Outcome {
    let h: f64 = 0.5;
    let m = ModelSpec::Tfim { h };
    let p = discord_profile(&m, 20, 25, Source::Exact).unwrap();
    let a2 = prefactor_set(&m).unwrap().a_2.unwrap();
    let at = |r: usize| {
        let rec = p.records.iter().find(|rec| rec.r == r).unwrap();
        let rf = r as f64;
        let closed = a2 * h.powf(2.0 * rf + 2.0) / (2.0 * PI * (1.0 - h * h).powf(1.75) * rf * rf);
        (rec.discord_minus_limit, closed)
    };
    let (d, closed) = at(25);
    let err = rel(d, closed);
    let (d20, p20) = at(20);
    outcome(
        err <= 0.10,
        format!(
            "D - D_inf at r=25 = {d:.6e} vs {closed:.6e} ({:.2}%, tol 10%); r=20: {:.2}%",
            100.0 * err,
            100.0 * rel(d20, p20)
        ),
    )
}

/// Least-squares intercept of `y = c0 + c1/r + c2/r²`.
fn extrapolate(points: &[(f64, f64)]) -> f64 {
    let a = DMatrix::from_fn(points.len(), 3, |i, j| points[i].0.powi(-(j as i32)));
    let b = DVector::from_iterator(points.len(), points.iter().map(|p| p.1));
    a.svd(true, true).solve(&b, 1e-14).unwrap()[0]
}

fn xx_amplitude() -> Outcome {
    let m = ModelSpec::Xy { alpha: 1.0 };
    let pts: Vec<(f64, f64)> = (20..=200)
        .step_by(2)
        .collect::<Vec<usize>>()
        .par_iter()
        .map(|&r| (r as f64, exact_correlators(&m, r).unwrap().xx.abs() * (r as f64).sqrt()))
        .collect();
    let toeplitz = extrapolate(&pts);
    let (_, a_x) = xxz_prefactors(0.5).unwrap();
    let err = rel(a_x, toeplitz);
    outcome(err <= 0.005, format!("A_x(1/2) = {a_x:.8} vs extrapolated {toeplitz:.8} ({:.4}%, tol 0.5%)", 100.0 * err))
}

fn disorder_circle() -> Outcome {
    let gamma: f64 = 0.6;
    let m = ModelSpec::XyField { gamma, h: (1.0 - gamma * gamma).sqrt() };
    let d_inf = limit_discord(&limit_correlators(&m).unwrap()).unwrap();
    let diffs: Vec<String> = [5usize, 10, 20]
        .iter()
        .map(|&r| (r, discord_breakdown(&exact_correlators(&m, r).unwrap()).unwrap().discord - d_inf))
        .map(|(r, x)| format!("r={r}: {x:.1e}"))
        .collect();
    let worst = [5usize, 10, 20]
        .iter()
        .map(|&r| (discord_breakdown(&exact_correlators(&m, r).unwrap()).unwrap().discord - d_inf).abs())
        .fold(0.0, f64::max);
    outcome(worst <= 1e-8, format!("D_inf = {d_inf:.8}; D - D_inf {} (tol 1e-8)", diffs.join(", ")))
}

fn area_law() -> Outcome {
    let models = [
        ModelSpec::Xxz { delta: 1.0 },
        ModelSpec::Tfim { h: 1.0 },
        ModelSpec::XyField { gamma: 0.5, h: 0.5 },
    ];
    let betas = [0.1, 0.5, 1.0, 2.0, 5.0];
    let start = Instant::now();
    let mut cases = 0;
    let mut failures = Vec::new();
    let mut max_fraction: f64 = 0.0;
    for m in &models {
        for n in [4usize, 6, 8] {
            let h = build_chain_hamiltonian(m, n, Geometry::OpenChain).unwrap();
            let spectrum = h.diagonalize();
            let jobs: Vec<(f64, Vec<usize>)> =
                betas.iter().flat_map(|&b| contiguous_cuts(n).into_iter().map(move |c| (b, c))).collect();
            let checks: Vec<_> = jobs
                .par_iter()
                .map(|(b, c)| check_area_law_with(&h, &spectrum, c, *b, CheckOptions::default()).unwrap())
                .collect();
            for c in checks {
                cases += 1;
                max_fraction = max_fraction.max(c.mutual_info / c.bound);
                let free_ok = c.free_energy_gap.map_or(false, |g| g >= -AREA_LAW_TOL);
                let discord_ok = c.single_site_discord.map_or(true, |d| d <= c.mutual_info + 1e-9);
                if c.mutual_info > c.bound + AREA_LAW_TOL || !free_ok || !discord_ok {
                    failures.push(format!("{m} n={n} beta={} cut={:?}", c.beta, c.cut));
                }
            }
        }
    }
    let mut flat = Vec::new();
    let no_oracle = CheckOptions { single_site_max_sites: 0, ..CheckOptions::default() };
    for m in &models {
        let chains: Vec<_> = [6usize, 8, 10]
            .iter()
            .map(|&n| {
                let h = build_chain_hamiltonian(m, n, Geometry::OpenChain).unwrap();
                let spectrum = h.diagonalize();
                (h, spectrum)
            })
            .collect();
        for &beta in &betas {
            let half: Vec<f64> = chains
                .iter()
                .map(|(h, sp)| {
                    let cut: Vec<usize> = (0..h.n_sites() / 2).collect();
                    check_area_law_with(h, sp, &cut, beta, no_oracle).unwrap().mutual_info
                })
                .collect();
            let (i6, i8, i10) = (half[0], half[1], half[2]);
            // Equal increments to rounding count as flat.
            if i10 - i8 >= i8 - i6 + AREA_LAW_TOL {
                flat.push(format!("{m} beta={beta}: I6={i6:.4e} I8={i8:.4e} I10={i10:.4e}"));
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        failures.is_empty() && flat.is_empty() && secs < 600.0,
        format!(
            "{cases} checks, max I/bound = {max_fraction:.3}, {} bound or free-energy failures {:?}; flattening violations {:?}; {secs:.1} s",
            failures.len(),
            failures.iter().take(3).collect::<Vec<_>>(),
            flat
        ),
    )
}

/// 100 base states, each pushed towards one fixed random X state by five
/// mixing weights a decade apart, so every decade probes the same directions.
fn continuity() -> Outcome {
    const EPS: [f64; 5] = [3e-2, 3e-3, 3e-4, 3e-5, 3e-6];
    let mut rng = ChaCha8Rng::seed_from_u64(909);
    let mut pairs = Vec::new();
    for _ in 0..100 {
        let s = random_xstate(&mut rng, false);
        let direction_seed: u64 = rng.gen();
        for eps in EPS {
            let p = perturb_xstate(&mut ChaCha8Rng::seed_from_u64(direction_seed), &s, eps);
            pairs.push((s.clone(), p));
        }
    }
    let rows = continuity_report(&pairs, 10.0).unwrap();
    let t_max = rows.iter().map(|r| r.t).fold(0.0, f64::max);
    let violations = rows.iter().filter(|r| r.delta_d > r.bound_term + 10.0 * r.t).count();
    let max_ratio: Vec<f64> =
        (0..EPS.len()).map(|k| rows.iter().skip(k).step_by(EPS.len()).map(|r| r.ratio).fold(0.0, f64::max)).collect();
    let monotone = max_ratio.windows(2).all(|w| w[1] < w[0]);
    let summary: Vec<String> = EPS.iter().zip(&max_ratio).map(|(e, m)| format!("eps={e:.0e}: {m:.4}")).collect();
    outcome(
        rows.len() == 500 && t_max <= 0.1 && violations == 0 && monotone,
        format!(
            "{} pairs, t <= {t_max:.3}, {violations} bound violations; max ratio {}",
            rows.len(),
            summary.join(", ")
        ),
    )
}

fn heisenberg_invariance() -> Outcome {
    let m = ModelSpec::Xxz { delta: 1.0 };
    let hulthen = (1.0 - 4.0 * LN_2) / 3.0;
    let mut states = vec![
        ("limit".to_string(), limit_correlators(&m).unwrap()),
        ("nearest neighbour".to_string(), PairCorrelators::symmetric(0.0, hulthen, hulthen, hulthen)),
    ];
    for r in [2usize, 10, 50] {
        states.push((format!("r={r}"), asymptotic_correlators(&m, r).unwrap()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(1010);
    let mut worst: f64 = 0.0;
    let mut parts = Vec::new();
    for (name, c) in &states {
        let rho = from_correlators(c).unwrap().to_density_matrix().unwrap();
        let ds: Vec<f64> = (0..50)
            .map(|_| {
                let angles = MeasurementAngles::new(rng.gen_range(0.0..PI), rng.gen_range(0.0..2.0 * PI)).unwrap();
                discord_for_measurement(&rho, &angles).unwrap()
            })
            .collect();
        let spread = ds.iter().cloned().fold(f64::MIN, f64::max) - ds.iter().cloned().fold(f64::MAX, f64::min);
        worst = worst.max(spread);
        parts.push(format!("{name}: D={:.6e} spread {spread:.1e}", ds[0]));
    }
    outcome(worst < 1e-8, format!("{} (tol 1e-8)", parts.join("; ")))
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let runs: [&[&str]; 3] = [
        &["scan", "--model", "tfim", "--h", "2", "--rmin", "5", "--rmax", "60", "--source", "exact", "--out"],
        &["thermal", "--model", "xxz", "--delta", "1", "--n", "8", "--beta", "0.5,1", "--all-cuts", "--out"],
        &["continuity", "--pairs", "50", "--seed", "3", "--out"],
    ];
    let mut same = true;
    for (k, args) in runs.iter().enumerate() {
        let mut outputs = Vec::new();
        for rep in 0..2 {
            let name = format!("run{k}_{rep}.csv");
            let status = Command::new(env!("CARGO_BIN_EXE_spin-discord"))
                .args(args.iter())
                .arg(&name)
                .current_dir(dir.path())
                .status()
                .unwrap();
            same &= status.success();
            outputs.push(std::fs::read(dir.path().join(&name)).unwrap_or_default());
        }
        same &= !outputs[0].is_empty() && outputs[0] == outputs[1];
    }
    outcome(same, format!("scan, thermal and continuity CSVs byte-identical across two runs: {same}"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("analytic discord matches oracle", analytic_vs_oracle),
        ("pure states reduce to entanglement entropy", pure_state_reduction),
        ("TFIM paramagnetic decay", tfim_paramagnet),
        ("TFIM critical prefactor", tfim_critical),
        ("TFIM ferromagnetic correction", tfim_ferro),
        ("XX amplitude cross-check", xx_amplitude),
        ("disorder circle", disorder_circle),
        ("thermal area law", area_law),
        ("discord continuity", continuity),
        ("Heisenberg measurement invariance", heisenberg_invariance),
        ("CLI determinism", determinism),
    ];
    let mut failed = Vec::new();
    for (k, (name, f)) in criteria.iter().enumerate() {
        let o = f();
        println!("{} {:>2} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, k + 1, o.detail);
        if !o.pass {
            failed.push(k + 1);
        }
    }
    if !failed.is_empty() {
        println!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
