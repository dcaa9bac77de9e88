//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::path::PathBuf;
use std::time::Instant;

use comfort_opt::comfort::{DP_MAX, DP_MIN};
use comfort_opt::psychro::moist_air_enthalpy;
use comfort_opt::report::{reduction_table, sweep_csv};
use comfort_opt::sim::sweep_scenarios;
use comfort_opt::thermal::{ghcs_consumption, ihcs_consumption, occupant_heat};
use comfort_opt::{
    combined_decision, discomfort_index, feasible_tdi_interval, optimal_tdi, run_scenario,
    sample_population, sweep, table1_volume, temperature_for_di, AirState, ComfortBand, IhcsRange,
    Mode, Overrides, Population, PopulationParams, SamplingMode, Scenario, System, ThermalParams,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ContinuousCDF, Normal};

const COUNTS: [usize; 5] = [5, 10, 15, 20, 25];

struct Outcome {
    checks: Vec<(bool, String)>,
}

impl Outcome {
    fn new() -> Self {
        Self { checks: Vec::new() }
    }

    fn check(&mut self, ok: bool, detail: impl Into<String>) {
        self.checks.push((ok, detail.into()));
    }

    fn passed(&self) -> bool {
        self.checks.iter().all(|(ok, _)| *ok)
    }
}

fn nondecreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] >= w[0])
}

fn nonincreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] <= w[0])
}

fn discomfort_index_suite() -> Outcome {
    let mut o = Outcome::new();
    for (t, rh, want) in [(30.0, 60.0, 79.84), (12.0, 60.0, 54.568), (0.0, 0.0, 46.3)] {
        let got = discomfort_index(AirState::new(t, rh).unwrap()).unwrap();
        o.check((got - want).abs() <= 1e-9, format!("DI({t}, {rh}) = {got}"));
    }
    let mut worst: f64 = 0.0;
    for i in 0..10 {
        for j in 0..10 {
            let t = -20.0 + 70.0 * f64::from(i) / 9.0;
            let rh = 100.0 * f64::from(j) / 9.0;
            let di = discomfort_index(AirState::new(t, rh).unwrap()).unwrap();
            worst = worst.max((temperature_for_di(di, rh).unwrap() - t).abs());
        }
    }
    o.check(worst <= 1e-9, format!("100-point round trip, worst {worst:e}"));
    o
}

fn table1_fidelity() -> Outcome {
    let mut o = Outcome::new();
    for (n, want) in COUNTS.iter().zip([172.3, 344.5, 516.8, 689.0, 861.3]) {
        let got = table1_volume(*n);
        o.check(got == want, format!("n={n}: {got}"));
    }
    o
}

fn default_sweep() -> Vec<comfort_opt::ScenarioResult> {
    sweep(&Mode::ALL, &System::ALL, &COUNTS, &Overrides::default()).unwrap()
}

fn es_series(rs: &[comfort_opt::ScenarioResult], mode: Mode, system: System) -> Vec<f64> {
    rs.iter()
        .filter(|r| r.scenario.mode == mode && r.scenario.system == system)
        .map(|r| r.decision.es)
        .collect()
}

fn zero_error_combined() -> Outcome {
    let mut o = Outcome::new();
    let rs = default_sweep();
    for mode in Mode::ALL {
        let es = es_series(&rs, mode, System::Combined);
        o.check(
            es.len() == 5 && es.iter().all(|&e| e == 0.0),
            format!("{mode}: Es = {es:?}"),
        );
    }
    o
}

fn baseline_growth() -> Outcome {
    let mut o = Outcome::new();
    let rs = default_sweep();
    for mode in Mode::ALL {
        for system in [System::GhcsOnly, System::IhcsOnly] {
            let es = es_series(&rs, mode, system);
            o.check(nondecreasing(&es), format!("{mode}/{system} nondecreasing: {es:?}"));
            if mode == Mode::Cooling {
                o.check(
                    es.iter().all(|&e| e > 0.0),
                    format!("{mode}/{system} strictly positive"),
                );
            }
        }
    }
    o
}

/// Independent brute-force scan of one scenario: TDI grid at 0.1 over
/// [50, 90], every device level per occupant, thermal terms computed directly.
struct Scan {
    /// (tdi, Es reachable zero, es, thc)
    points: Vec<(f64, bool, f64, f64)>,
}

impl Scan {
    fn run(dps: &[i32], scenario: &Scenario) -> Self {
        let band = ComfortBand::default();
        let c = scenario.psychro;
        let room = scenario.room;
        let thermal = scenario.thermal;
        let rh = scenario.setpoint_rh;
        let h_out = moist_air_enthalpy(scenario.outside, &c).unwrap();
        let hp = occupant_heat(dps.len(), &thermal);

        let points = (500..=900)
            .map(|k| {
                let tdi = f64::from(k) / 10.0;
                let mut es = 0.0;
                let mut dn = Vec::with_capacity(dps.len());
                for &dp in dps {
                    let mut best = (f64::INFINITY, 0i32);
                    for level in -5i32..=5 {
                        let s = tdi + f64::from(dp) + f64::from(level);
                        let err = (band.lower - s).max(s - band.upper).max(0.0);
                        if err < best.0 || (err == best.0 && level.abs() < best.1.abs()) {
                            best = (err, level);
                        }
                    }
                    es += best.0;
                    dn.push(best.1);
                }
                let t = temperature_for_di(tdi, rh).unwrap();
                let h_set = moist_air_enthalpy(AirState { t, rh }, &c).unwrap();
                let mass = room.volume * room.air_density;
                let hv = mass * (h_set - h_out);
                let hf = room.ach * mass * thermal.duration * (h_out - h_set);
                let thc = ghcs_consumption(&thermal, hv, hf, hp) + ihcs_consumption(&dn, &thermal);
                (tdi, es == 0.0, es, thc)
            })
            .collect();
        Self { points }
    }

    fn argmin(&self) -> f64 {
        self.points
            .iter()
            .min_by(|a, b| a.2.total_cmp(&b.2).then(a.3.total_cmp(&b.3)))
            .unwrap()
            .0
    }
}

fn optimizer_oracle() -> Outcome {
    let mut o = Outcome::new();
    let band = ComfortBand::default();
    let range = IhcsRange::default();
    let mut rng = ChaCha8Rng::seed_from_u64(2019);
    let (mut membership_bad, mut combined_bad, mut projection_bad) = (0, 0, 0);
    let (mut projection_checked, mut cases) = (0, 0);
    let mut first_failure = None;

    for _ in 0..2000 {
        let n = rng.random_range(1..=5usize);
        let dps: Vec<i32> = (0..n).map(|_| rng.random_range(DP_MIN..=DP_MAX)).collect();
        let pop = Population::from_offsets(&dps).unwrap();
        let interval = feasible_tdi_interval(&pop, &band, &range).unwrap().unwrap();

        for mode in Mode::ALL {
            cases += 1;
            let scenario = Scenario::new(mode, System::Combined, n);
            let env = discomfort_index(scenario.outside).unwrap();
            let scan = Scan::run(&dps, &scenario);

            if scan.points.iter().any(|p| interval.contains(p.0) != p.1) {
                membership_bad += 1;
                first_failure.get_or_insert(format!("membership {dps:?} {mode}"));
            }

            let best = scan.argmin();
            let chosen = combined_decision(env, &pop, &band, &range, &scenario.energy_model())
                .unwrap()
                .tdi;
            if (chosen - best).abs() > 0.1 + 1e-9 {
                combined_bad += 1;
                first_failure.get_or_insert(format!("combined {dps:?} {mode}: {chosen} vs {best}"));
            }

            // The plain projection is the energy optimum whenever the global
            // system's load keeps one sign across the feasible interval.
            let energy = scenario.energy_model();
            let sign = |t: f64| {
                let b = energy.breakdown(t, n, &[]).unwrap();
                (b.hv - b.hf - b.hp).signum()
            };
            if sign(interval.lo) == sign(interval.hi) {
                projection_checked += 1;
                let projected = optimal_tdi(env, &pop, &band, &range).unwrap();
                if (projected - best).abs() > 0.1 + 1e-9 {
                    projection_bad += 1;
                    first_failure
                        .get_or_insert(format!("projection {dps:?} {mode}: {projected} vs {best}"));
                }
            }
        }
    }
    o.check(membership_bad == 0, format!("interval membership <=> Es = 0 on {cases} scans ({membership_bad} mismatches)"));
    o.check(combined_bad == 0, format!("combined TDI within one step of scan argmin ({combined_bad} misses)"));
    o.check(
        projection_bad == 0,
        format!("optimal_tdi within one step on {projection_checked} same-sign cases ({projection_bad} misses)"),
    );
    if let Some(f) = first_failure {
        o.check(false, format!("first failure: {f}"));
    }
    o
}

fn calibration_overrides() -> Overrides {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs/calibrated-cooling.json");
    let text = std::fs::read_to_string(&path).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let th = &v["thermal"];
    let get = |k: &str, d: f64| th.get(k).and_then(|x| x.as_f64()).unwrap_or(d);
    let defaults = ThermalParams::default();
    Overrides {
        ach: Some(get("ach", 0.5)),
        thermal: Some(ThermalParams {
            alpha: get("alpha", defaults.alpha),
            ihcs_coeff: get("ihcs_coeff_w", defaults.ihcs_coeff),
            ..defaults
        }),
        ..Default::default()
    }
}

fn cooling_energy_saving() -> Outcome {
    let mut o = Outcome::new();
    let rows = reduction_table(Mode::Cooling, &COUNTS, &Overrides::default()).unwrap();
    for r in &rows {
        o.check(
            r.thc_combined_kj < r.thc_ghcs_kj,
            format!("n={}: combined {:.1} kJ < ghcs-only {:.1} kJ", r.n_users, r.thc_combined_kj, r.thc_ghcs_kj),
        );
    }
    let ratios: Vec<f64> = rows.iter().map(|r| r.reduction_ratio).collect();
    o.check(
        (0.10..=0.40).contains(&ratios[0]),
        format!("ratio at n=5 = {:.6} in [0.10, 0.40]", ratios[0]),
    );
    o.check(
        nonincreasing(&ratios),
        format!("ratio nonincreasing in n: {ratios:.6?}"),
    );

    let calibrated = reduction_table(Mode::Cooling, &COUNTS, &calibration_overrides()).unwrap();
    let max = calibrated
        .iter()
        .map(|r| r.reduction_ratio)
        .fold(f64::NEG_INFINITY, f64::max);
    o.check(
        (0.25..=0.35).contains(&max),
        format!("calibrated cooling maximum {max:.6} in [0.25, 0.35]"),
    );
    o
}

fn occupant_heat_asymmetry() -> Outcome {
    let mut o = Outcome::new();
    for volume in [172.3, 516.8, 861.3] {
        let overrides = Overrides {
            volume: Some(volume),
            ..Default::default()
        };
        for mode in Mode::ALL {
            let runs: Vec<_> = (1..=25)
                .map(|n| run_scenario(&overrides.scenario(mode, System::GhcsOnly, n)).unwrap())
                .collect();
            // Cooling load is negative, heating load positive, until occupant
            // heat overturns it.
            let load_sign = if mode == Mode::Cooling { -1.0 } else { 1.0 };
            let (mut ok, mut compared) = (true, 0);
            for w in runs.windows(2) {
                let (a, b) = (&w[0].heat, &w[1].heat);
                let keeps_sign = (a.hv - a.hf - a.hp).signum() == load_sign
                    && (b.hv - b.hf - b.hp).signum() == load_sign;
                if !keeps_sign {
                    continue;
                }
                compared += 1;
                ok &= match mode {
                    Mode::Cooling => b.he > a.he,
                    Mode::Heating => b.he < a.he,
                };
            }
            let dir = if mode == Mode::Cooling { "increases" } else { "decreases" };
            o.check(
                ok && compared > 0,
                format!("V={volume} {mode}: He strictly {dir} per added occupant ({compared} steps)"),
            );
        }
    }
    o
}

fn determinism() -> Outcome {
    let mut o = Outcome::new();
    let a = sweep_csv(&default_sweep());
    let b = sweep_csv(&default_sweep());
    o.check(a == b, "two default sweeps give byte-identical CSV");

    let sequential: Vec<_> = sweep_scenarios(&Mode::ALL, &System::ALL, &COUNTS, &Overrides::default())
        .unwrap()
        .iter()
        .map(|s| run_scenario(s).unwrap())
        .collect();
    o.check(sweep_csv(&sequential) == a, "parallel and sequential sweeps agree");

    let strat = |seed| sample_population(25, SamplingMode::Stratified, seed, 1.5).unwrap().occupants;
    o.check(strat(1) == strat(12345), "stratified populations seed-independent");
    let rand = |seed| sample_population(500, SamplingMode::SeededRandom, seed, 1.5).unwrap().occupants;
    o.check(rand(42) == rand(42), "seeded populations reproducible");
    o.check(rand(42) != rand(43), "different seeds give different populations");

    let seeded = Overrides {
        population: Some(PopulationParams {
            mode: SamplingMode::SeededRandom,
            seed: 5,
            ..Default::default()
        }),
        ..Default::default()
    };
    let s1 = sweep_csv(&sweep(&Mode::ALL, &System::ALL, &COUNTS, &seeded).unwrap());
    let s2 = sweep_csv(&sweep(&Mode::ALL, &System::ALL, &COUNTS, &seeded).unwrap());
    o.check(s1 == s2, "seeded sweeps byte-identical");
    o
}

fn distribution_check() -> Outcome {
    let mut o = Outcome::new();
    let sigma = 1.5;
    let normal = Normal::standard();
    let mass = |level: i32| {
        let upper = if level == DP_MAX { 1.0 } else { normal.cdf((f64::from(level) + 0.5) / sigma) };
        let lower = if level == DP_MIN { 0.0 } else { normal.cdf((f64::from(level) - 0.5) / sigma) };
        upper - lower
    };
    for seed in [0u64, 1, 2] {
        let pop = sample_population(10_000, SamplingMode::SeededRandom, seed, sigma).unwrap();
        let mut worst: f64 = 0.0;
        for level in DP_MIN..=DP_MAX {
            let freq = pop.offsets().filter(|&d| d == level).count() as f64 / 10_000.0;
            worst = worst.max((freq - mass(level)).abs());
        }
        o.check(worst <= 0.02, format!("seed {seed}: worst level deviation {worst:.4}"));
    }
    o
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 9] = [
        ("AC1 discomfort index and inversion", discomfort_index_suite),
        ("AC2 standard room volumes", table1_fidelity),
        ("AC3 combined system zero comfort error", zero_error_combined),
        ("AC4 baseline comfort error growth", baseline_growth),
        ("AC5 optimizer vs brute-force scan", optimizer_oracle),
        ("AC6 cooling energy saving", cooling_energy_saving),
        ("AC7 occupant heat asymmetry", occupant_heat_asymmetry),
        ("AC8 determinism", determinism),
        ("AC9 population distribution", distribution_check),
    ];

    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let status = if outcome.passed() { "PASS" } else { "FAIL" };
        println!("[{status}] {name} ({:.2?})", start.elapsed());
        for (ok, detail) in &outcome.checks {
            println!("       {} {detail}", if *ok { "ok  " } else { "FAIL" });
        }
        if !outcome.passed() {
            failed += 1;
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
