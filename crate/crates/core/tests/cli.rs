//! End-to-end tests of the `discord-witness` binary: CSV structure, exit
//! codes, and agreement between CLI-surfaced numbers and direct library calls.

use std::collections::HashMap;
use std::process::Output;

use discord_witness::dephasing::{
    dephasing_basis, geometric_discord_in_basis, local_dephase_allow_degenerate,
};
use discord_witness::ensembles::{gibbs_state, rng_from_seed, sample_gue_hamiltonian, GibbsParams};
use discord_witness::haar::haar_stats;
use discord_witness::linalg::{pure_state_z, BipartiteDims};
use discord_witness::witness::{witness_trajectory, TimeGrid};

fn run(args: &[&str]) -> Output {
    std::process::Command::new(env!("CARGO_BIN_EXE_discord-witness"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

/// Metadata keys, the first header line, and the raw data rows of a CSV
/// stream. Rows of later blocks (after further comment lines) are included.
fn parse_csv(text: &str) -> (HashMap<String, String>, Vec<String>, Vec<Vec<String>>) {
    let mut meta = HashMap::new();
    let mut header: Vec<String> = Vec::new();
    let mut rows = Vec::new();
    for line in text.lines() {
        if let Some(rest) = line.strip_prefix("# ") {
            if let Some((key, value)) = rest.split_once(": ") {
                meta.insert(key.to_string(), value.to_string());
            }
            continue;
        }
        if header.is_empty() {
            header = line.split(',').map(|s| s.to_string()).collect();
            continue;
        }
        rows.push(line.split(',').map(|s| s.to_string()).collect());
    }
    (meta, header, rows)
}

fn num(row: &[String], idx: usize) -> f64 {
    row[idx].parse().expect("numeric field")
}

#[test]
fn pure_state_matches_library_values() {
    let out = run(&["pure-state", "--z-steps", "5"]);
    assert!(out.status.success());
    let (_, header, rows) = parse_csv(&stdout_str(&out));
    assert_eq!(header, ["z", "D", "mu", "s2", "sOverMu"]);
    assert_eq!(rows.len(), 5);

    // Endpoint rows are all zero (product states); the ratio is undefined.
    for idx in [0usize, 4] {
        assert_eq!(num(&rows[idx], 1), 0.0);
        assert_eq!(num(&rows[idx], 2), 0.0);
        assert_eq!(num(&rows[idx], 3), 0.0);
        assert!(num(&rows[idx], 4).is_nan());
    }

    // The midpoint row carries the maximally entangled values.
    assert!((num(&rows[2], 1) - 0.5).abs() < 1e-12);
    assert!((num(&rows[2], 2) - 0.2).abs() < 1e-12);

    // Every defined ratio is the constant √(19/56).
    for row in &rows {
        if num(row, 2) > 0.0 {
            assert!((num(row, 4) - (19.0f64 / 56.0).sqrt()).abs() < 1e-10);
        }
    }

    // Single source of truth: re-derive one interior row from the library.
    let z = num(&rows[1], 0);
    let rho = pure_state_z(z).unwrap();
    let basis = dephasing_basis(&rho).unwrap();
    let rho_prime = local_dephase_allow_degenerate(&rho, &basis).unwrap();
    let discord = geometric_discord_in_basis(&rho, &basis).unwrap();
    let stats = haar_stats(&rho, &rho_prime).unwrap();
    assert_eq!(num(&rows[1], 1), discord);
    assert_eq!(num(&rows[1], 2), stats.mu);
    assert_eq!(num(&rows[1], 3), stats.s2);
}

#[test]
fn gibbs_beta_zero_is_silent() {
    let out = run(&[
        "gibbs",
        "--beta",
        "0",
        "--seed",
        "3",
        "--t-end",
        "10",
        "--n-points",
        "40",
    ]);
    assert!(out.status.success());
    let (meta, header, rows) = parse_csv(&stdout_str(&out));
    assert_eq!(header, ["t", "dist"]);
    let discord: f64 = meta["D"].parse().unwrap();
    assert!(discord < 1e-12);
    assert_eq!(meta["basis-degenerate"], "true");
    for row in &rows {
        assert!(num(row, 1) < 1e-12);
    }
}

#[test]
fn gibbs_seeded_run_detects_discord_and_matches_library() {
    let args = [
        "gibbs",
        "--da",
        "2",
        "--db",
        "2",
        "--beta",
        "1",
        "--seed",
        "11",
        "--t-end",
        "20",
        "--n-points",
        "80",
    ];
    let out = run(&args);
    assert!(out.status.success());
    let (meta, _, rows) = parse_csv(&stdout_str(&out));
    assert_eq!(rows.len(), 80);
    assert!(num(&rows[0], 1) < 1e-12, "dist(0) = {}", rows[0][1]);
    assert!(
        rows.iter().any(|r| num(r, 1) > 1e-12),
        "no discord detected"
    );

    // Metadata numbers equal direct library computation bit-for-bit.
    let dims = BipartiteDims::new(2, 2).unwrap();
    let mut rng = rng_from_seed(11);
    let h = sample_gue_hamiltonian(dims, &mut rng);
    let rho = gibbs_state(&h, &GibbsParams::new(1.0, dims).unwrap()).unwrap();
    let basis = dephasing_basis(&rho).unwrap();
    let rho_prime = local_dephase_allow_degenerate(&rho, &basis).unwrap();
    let discord = geometric_discord_in_basis(&rho, &basis).unwrap();
    let delta = rho.matrix() - rho_prime.matrix();
    let spec = discord_witness::haar::gibbs_specialization(2, &delta).unwrap();
    let grid = TimeGrid::new(0.0, 20.0, 80).unwrap();
    let traj = witness_trajectory(&rho, &rho_prime, &h, &grid).unwrap();

    assert_eq!(meta["D"].parse::<f64>().unwrap(), discord);
    assert_eq!(meta["mu"].parse::<f64>().unwrap(), spec.mu);
    assert_eq!(meta["s"].parse::<f64>().unwrap(), spec.s2.sqrt());
    assert_eq!(
        meta["time-average"].parse::<f64>().unwrap(),
        traj.time_average()
    );
    for (row, (&t, &v)) in rows.iter().zip(traj.times().iter().zip(traj.values())) {
        assert_eq!(num(row, 0), t);
        assert_eq!(num(row, 1), v);
    }
}

#[test]
fn temperature_sweep_structure() {
    let out = run(&[
        "temperature-sweep",
        "--da",
        "2",
        "--db",
        "2",
        "--betas",
        "0,0.5,1",
        "--seed",
        "5",
        "--t-end",
        "10",
        "--n-points",
        "20",
    ]);
    assert!(out.status.success());
    let text = stdout_str(&out);

    // One summary plus one block per beta, all with the same fingerprint.
    let fingerprints: Vec<&str> = text
        .lines()
        .filter_map(|l| l.strip_prefix("# h-fingerprint: "))
        .collect();
    assert_eq!(fingerprints.len(), 4);
    assert!(fingerprints.iter().all(|f| *f == fingerprints[0]));
    assert_eq!(
        text.lines()
            .filter(|l| l.starts_with("# block: beta="))
            .count(),
        3
    );

    // Summary block: beta = 0 row reports zero discord.
    let summary_start = text.lines().position(|l| l == "beta,D,mu,s").unwrap();
    let summary: Vec<Vec<f64>> = text
        .lines()
        .skip(summary_start + 1)
        .take(3)
        .map(|l| l.split(',').map(|f| f.parse().unwrap()).collect())
        .collect();
    assert_eq!(summary[0][0], 0.0);
    assert!(summary[0][1] < 1e-12);
    // The analytic mean shrinks toward zero with temperature (reported trend;
    // asserted only at the endpoint).
    assert!(summary[2][2] > summary[0][2]);
}

#[test]
fn haar_stats_default_run_is_consistent() {
    let out = run(&["haar-stats", "--z", "0.5", "--seed", "0"]);
    assert!(out.status.success());
    let (_, header, rows) = parse_csv(&stdout_str(&out));
    assert_eq!(
        header,
        [
            "analyticMu",
            "analyticS2",
            "mcMean",
            "mcVar",
            "stdError",
            "nSamples",
            "zScore"
        ]
    );
    let row = &rows[0];
    assert!((num(row, 0) - 0.2).abs() < 1e-12);
    assert!(num(row, 6).abs() < 3.0, "z-score {}", row[6]);
}

#[test]
fn haar_stats_identical_pair_reports_zeros() {
    let out = run(&["haar-stats", "--z", "0", "--n-samples", "2"]);
    assert!(out.status.success());
    let (_, _, rows) = parse_csv(&stdout_str(&out));
    let row = &rows[0];
    for idx in 0..5 {
        assert_eq!(num(row, idx), 0.0);
    }
    assert_eq!(num(row, 6), 0.0);
}

#[test]
fn effective_dim_uncoupled_rows_are_flagged_not_fatal() {
    let out = run(&[
        "effective-dim",
        "--da",
        "2",
        "--db",
        "4",
        "--n-hamiltonians",
        "2",
        "--inject-uncoupled",
        "--t-end",
        "10",
        "--n-points",
        "30",
    ]);
    assert!(
        out.status.success(),
        "uncoupled injection must not be fatal"
    );
    let text = stdout_str(&out);
    let (_, header, rows) = parse_csv(&text);
    assert_eq!(header, ["hIndex", "timeAverage", "dEff", "converged"]);
    let data: Vec<&Vec<String>> = rows.iter().filter(|r| r.len() == 4).collect();
    assert_eq!(data.len(), 2);
    for row in data {
        assert!(
            num(row, 1) < 1e-12,
            "uncoupled run produced signal {}",
            row[1]
        );
        assert!(num(row, 2).is_nan());
    }
    assert!(text.contains("medianDEff\nNaN"));
    // Rows carry the converged flag as text.
    assert!(text.lines().any(|l| l.ends_with(",false")));
}

#[test]
fn effective_dim_survey_reports_median() {
    let out = run(&[
        "effective-dim",
        "--da",
        "2",
        "--db",
        "8",
        "--seed",
        "42",
        "--n-hamiltonians",
        "3",
    ]);
    assert!(out.status.success());
    let text = stdout_str(&out);
    let median: f64 = text.lines().last().unwrap().parse().unwrap();
    assert!(median.is_finite() && median > 1.0, "median {median}");
}

#[test]
fn exit_codes_follow_the_contract() {
    // Invalid configuration: 2 (both from clap and from range validation).
    let out = run(&["pure-state", "--z-min", "0.9", "--z-max", "0.1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["pure-state", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["haar-stats"]);
    assert_eq!(out.status.code(), Some(2), "state spec is required");
    let out = run(&["haar-stats", "--z", "0.5", "--db", "3"]);
    assert_eq!(out.status.code(), Some(2), "pure family needs 2x2");

    // Non-convergence with a window too short to settle: 4, but the CSV is
    // still delivered in full.
    let out = run(&[
        "effective-dim",
        "--da",
        "2",
        "--db",
        "4",
        "--n-hamiltonians",
        "2",
        "--seed",
        "7",
        "--t-end",
        "5",
        "--n-points",
        "50",
    ]);
    assert_eq!(out.status.code(), Some(4));
    let text = stdout_str(&out);
    assert!(text.contains("medianDEff"));
    let (_, _, rows) = parse_csv(&text);
    assert_eq!(rows.iter().filter(|r| r.len() == 4).count(), 2);
}
