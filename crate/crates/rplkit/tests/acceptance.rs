//! Acceptance suite: one test per release criterion, each printing a
//! pass line (visible with `--nocapture`). Oracles here are independent of
//! the implementation: closed forms, brute-force re-scans, dense grids,
//! and root finders.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rplkit_core::antenna::{solve_p, solve_q, AntennaPattern, DEFAULT_P};
use rplkit_core::assign::{best_server, Observation};
use rplkit_core::evaluate::{sweep, DEFAULT_M_GRID, DEFAULT_N_GRID};
use rplkit_core::geo::{destination, GeoPoint};
use rplkit_core::propagation::{
    breakpoint_distance, radio_horizon, received_power, r_max, LinkBudget, PathLossParams,
};
use rplkit_core::rpl::{
    build_rpl, min_c_for_zero_error, sites_from_sectors, Rpl, RplParams, Sector, SiteRef,
};
use rplkit::synth::{generate_network, generate_observations, ScenarioConfig};

fn pass(criterion: usize, name: &str) {
    println!("[acceptance] criterion {criterion:02} ({name}): PASS");
}

fn point(lat: f64, lon: f64) -> GeoPoint {
    GeoPoint::new(lat, lon).unwrap()
}

fn sector(azimuth_deg: f64, hpbw_deg: f64) -> Sector {
    Sector {
        network_id: "A".into(),
        sector_id: "s1".into(),
        site: point(28.565, -81.586),
        azimuth_deg,
        hpbw_deg,
        height_m: None,
        freq_hz: Some(700e6),
        fb_db: None,
    }
}

/// Neighbor sites at (range, bearing) offsets from a sector's mast.
fn sites_at(s: &Sector, offsets: &[(f64, f64)]) -> Vec<SiteRef> {
    offsets
        .iter()
        .map(|&(r, b)| SiteRef {
            network_id: s.network_id.clone(),
            location: destination(s.site, r, b).unwrap(),
        })
        .collect()
}

#[test]
fn criterion_01_front_to_back_constants() {
    let pattern = AntennaPattern::new(6.5, 0.003, 0.0).unwrap();
    let fb_db = 10.0 * (pattern.gain(0.0) / pattern.gain(180.0)).log10();
    assert!((fb_db - 25.23).abs() <= 0.05, "F/B = {fb_db} dB");
    let p = solve_p(25.23).unwrap();
    assert!((p - 0.003).abs() <= 1e-5, "p = {p}");
    pass(1, "front-to-back constants");
}

#[test]
fn criterion_02_beamwidth_round_trip() {
    for &h in &[33.0, 66.0, 90.0, 120.0] {
        for &p in &[0.0, 0.003] {
            let q = solve_q(h, p).unwrap();
            let back = AntennaPattern::new(q, p, 0.0).unwrap().hpbw_deg().unwrap();
            assert!((back - h).abs() <= 0.01, "H = {h}, p = {p}: round trip {back}");
        }
    }
    let hpbw = AntennaPattern::new(6.5, 0.003, 0.0).unwrap().hpbw_deg().unwrap();
    assert!((66.0..=67.5).contains(&hpbw), "q = 6.5 gives HPBW {hpbw}");
    pass(2, "beamwidth round trip");
}

#[test]
fn criterion_03_horizon_and_breakpoint() {
    let r_h = radio_horizon(10.0).unwrap();
    assert!((r_h - 13_029.0).abs() <= 1.0, "horizon {r_h}");
    let params = PathLossParams::from_freq(4.0, 700e6, 30.0, 1.0).unwrap();
    let r_b = breakpoint_distance(&params);
    assert!((r_b - 880.2).abs() <= 0.5, "breakpoint {r_b}");
    pass(3, "radio horizon and breakpoint distance");
}

#[test]
fn criterion_04_max_range_closure() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for trial in 0..1000 {
        let params = PathLossParams::from_freq(
            rng.gen_range(2.0..6.0),
            rng.gen_range(400e6..3e9),
            rng.gen_range(5.0..60.0),
            rng.gen_range(1.0..2.0),
        )
        .unwrap();
        let budget = LinkBudget::new(
            rng.gen_range(0.1..50.0),
            rng.gen_range(0.1..10.0),
            rng.gen_range(0.5..2.0),
            10f64.powf(rng.gen_range(-15.0..-9.0)),
        )
        .unwrap();
        let r = r_max(&budget, &params);
        let p_r = received_power(&budget, r, &params).unwrap();
        let rel = (p_r - budget.p_rmin_w).abs() / budget.p_rmin_w;
        assert!(rel <= 1e-9, "trial {trial}: closure off by {rel:e}");
    }
    pass(4, "max range inverts received power");
}

#[test]
fn criterion_05_region_shape() {
    let s = sector(90.0, 66.0);
    let sites = sites_at(&s, &[(1000.0, 90.0), (2000.0, 90.0), (3000.0, 90.0)]);
    let at_n = |n: f64| {
        build_rpl(&s, &sites, &RplParams { n, m_neighbors: 3, c: 1.0, grid_size: 720 }).unwrap()
    };
    let r2 = at_n(2.0);
    let r4 = at_n(4.0);

    // symmetry about boresight (grid index 180 = compass 90 degrees)
    for off in 1..360usize {
        let a = r4.radii_m[(180 + off) % 720];
        let b = r4.radii_m[(180 + 720 - off) % 720];
        assert!((a - b).abs() / a <= 1e-9, "asymmetric at offset {off}");
    }
    // shallower decay is pointwise larger
    for k in 0..720 {
        assert!(r4.radii_m[k] >= r2.radii_m[k] - 1e-9, "not nested at index {k}");
    }
    // back-azimuth radius ratio follows the fitted backlobe level
    let ratio = r4.radius_at(270.0) / r2.radius_at(270.0);
    let expected = DEFAULT_P.powf(0.25) / DEFAULT_P.powf(0.5);
    assert!((ratio - expected).abs() / expected <= 1e-9, "ratio {ratio} vs {expected}");
    pass(5, "region shape symmetry, nesting, backlobe ratio");
}

#[test]
fn criterion_06_area_law() {
    let s = sector(90.0, 66.0);
    let sites = sites_at(&s, &[(1000.0, 90.0), (2000.0, 90.0), (3000.0, 90.0)]);
    let at_c = |c: f64| {
        build_rpl(&s, &sites, &RplParams { c, ..RplParams::default() })
            .unwrap()
            .area_m2()
    };
    let base = at_c(1.0);
    for &c in &[0.5, 1.7, 2.0, 2.8, 5.0] {
        assert!((at_c(c) / base - c * c).abs() <= 1e-9, "area law fails at c = {c}");
    }
    assert!((at_c(2.8) / base - 7.84).abs() <= 1e-9);

    let circle = Rpl::from_radii(s, RplParams::default(), vec![1000.0; 720]);
    let expected = std::f64::consts::PI * 1000.0 * 1000.0;
    assert!((circle.area_m2() - expected).abs() / expected <= 1e-6);
    pass(6, "area scales as c squared; circle area");
}

#[test]
fn criterion_07_containment_against_dense_grid() {
    let s = sector(45.0, 66.0);
    let sites = sites_at(&s, &[(1200.0, 40.0), (2100.0, 60.0), (2900.0, 30.0)]);
    let coarse =
        build_rpl(&s, &sites, &RplParams { n: 4.0, m_neighbors: 3, c: 1.0, grid_size: 720 })
            .unwrap();
    // independent check: the same boundary sampled every 0.1 degree
    let dense =
        build_rpl(&s, &sites, &RplParams { n: 4.0, m_neighbors: 3, c: 1.0, grid_size: 3600 })
            .unwrap();
    let r_peak = coarse.radii_m.iter().cloned().fold(0.0, f64::max);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut disagreements = 0usize;
    for _ in 0..10_000 {
        let bearing = rng.gen_range(0.0..360.0);
        let range = rng.gen_range(1.0..1.2 * r_peak);
        let p = destination(s.site, range, bearing).unwrap();
        if coarse.contains(p) != dense.contains(p) {
            disagreements += 1;
            let boundary = dense.radius_at(bearing);
            assert!(
                (range - boundary).abs() <= 0.002 * boundary,
                "disagreement {range} m vs boundary {boundary} m at bearing {bearing}"
            );
        }
    }
    println!("  containment disagreements near boundary: {disagreements} / 10000");
    pass(7, "containment agrees with 0.1-degree re-evaluation");
}

#[test]
fn criterion_08_minimal_c_matches_bisection() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for trial in 0..50 {
        let s = sector(rng.gen_range(0.0..360.0), rng.gen_range(40.0..120.0));
        let offsets: Vec<(f64, f64)> = (0..rng.gen_range(3..7))
            .map(|_| (rng.gen_range(500.0..5000.0), rng.gen_range(0.0..360.0)))
            .collect();
        let sites = sites_at(&s, &offsets);
        let points: Vec<GeoPoint> = (0..25)
            .map(|_| {
                destination(s.site, rng.gen_range(200.0..6000.0), rng.gen_range(0.0..360.0))
                    .unwrap()
            })
            .collect();
        let n = [2.0, 3.0, 4.0][rng.gen_range(0..3)];
        let m = rng.gen_range(1..4);

        let min_c = min_c_for_zero_error(&s, &sites, &points, n, m, 720).unwrap();
        assert!(min_c.feasible);

        let outside_at = |c: f64| {
            let rpl =
                build_rpl(&s, &sites, &RplParams { n, m_neighbors: m, c, grid_size: 720 })
                    .unwrap();
            points.iter().filter(|p| !rpl.contains(**p)).count()
        };
        // independent oracle: bisect containment in c
        let (mut lo, mut hi) = (1e-3, 1.0);
        while outside_at(hi) > 0 {
            hi *= 2.0;
            assert!(hi < 1e6, "trial {trial}: bisection bracket blew up");
        }
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if outside_at(mid) > 0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let oracle = 0.5 * (lo + hi);
        let rel = (min_c.c_star - oracle).abs() / oracle;
        assert!(rel <= 1e-6, "trial {trial}: c_star {} vs bisection {oracle}", min_c.c_star);
        assert_eq!(outside_at(min_c.c_star), 0, "trial {trial}: error at c_star");
        assert!(outside_at(0.99 * min_c.c_star) > 0, "trial {trial}: no error below c_star");
    }
    pass(8, "minimal c matches containment bisection");
}

#[test]
fn criterion_09_sweep_on_noise_free_scenario() {
    let config = ScenarioConfig {
        seed: 9,
        n_sites: 5,
        region_km: 8.0,
        shadowing_sigma_db: 0.0,
        n_true: 4.0,
        ..Default::default()
    };
    let sectors = generate_network(&config).unwrap();
    let observations = generate_observations(&sectors, &config).unwrap();
    let assignments = best_server(&observations);
    let sites = sites_from_sectors(&sectors);
    let report = sweep(
        &sectors,
        &sites,
        &assignments,
        &RplParams::default(),
        &DEFAULT_N_GRID,
        &DEFAULT_M_GRID,
    )
    .unwrap();
    assert!(!report.evaluations.is_empty());

    for eval in &report.evaluations {
        let s = sectors
            .iter()
            .find(|s| s.network_id == eval.network_id && s.sector_id == eval.sector_id)
            .unwrap();
        let points: Vec<GeoPoint> = assignments
            .iter()
            .filter(|a| a.network_id == s.network_id && a.best_sector_id == s.sector_id)
            .map(|a| a.location)
            .collect();
        // the reported optimum really is error-free
        let opt = eval.optimal_params.expect("noise-free scenario is always feasible");
        let rpl = build_rpl(s, &sites, &opt).unwrap();
        assert_eq!(
            points.iter().filter(|p| !rpl.contains(**p)).count(),
            0,
            "{}: optimum leaves points outside",
            eval.sector_id
        );
        // and minimal-area among the nine combinations (exhaustive recheck)
        let rows: Vec<_> = report
            .rows
            .iter()
            .filter(|r| r.network_id == eval.network_id && r.sector_id == eval.sector_id)
            .collect();
        assert_eq!(rows.len(), 9);
        let opt_area = eval.optimal_area_m2.unwrap();
        for row in &rows {
            assert!(opt_area <= row.area_m2 + 1e-9, "{}: sweep row beats optimum", eval.sector_id);
        }
    }

    // a single shared c (the max per-sector c_star) removes every error
    let global_c = report.global_c.unwrap();
    let mut outside = 0usize;
    for eval in &report.evaluations {
        let s = sectors
            .iter()
            .find(|s| s.network_id == eval.network_id && s.sector_id == eval.sector_id)
            .unwrap();
        let rpl = build_rpl(s, &sites, &RplParams { c: global_c, ..RplParams::default() }).unwrap();
        outside += assignments
            .iter()
            .filter(|a| a.network_id == s.network_id && a.best_sector_id == s.sector_id)
            .filter(|a| !rpl.contains(a.location))
            .count();
    }
    assert_eq!(outside, 0, "global c = {global_c} leaves {outside} points outside");
    pass(9, "sweep optimum and shared-c fix on a noise-free scenario");
}

#[test]
fn criterion_10_best_server_against_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let observations: Vec<Observation> = (0..10_000)
        .map(|_| Observation {
            scan_id: rng.gen_range(0..400).to_string(),
            timestamp: 0.0,
            location: point(28.5, -81.5),
            network_id: ["A", "B"][rng.gen_range(0..2)].into(),
            sector_id: format!("s{}", rng.gen_range(0..12)),
            // integer dBm so exact ties occur
            rsrp_dbm: rng.gen_range(-120..-60) as f64,
        })
        .collect();
    let assignments = best_server(&observations);

    // brute force re-scan per assignment
    for a in &assignments {
        let group: Vec<&Observation> = observations
            .iter()
            .filter(|o| o.scan_id == a.scan_id && o.network_id == a.network_id)
            .collect();
        let mut best: Option<&Observation> = None;
        for o in &group {
            best = Some(match best {
                None => o,
                Some(b) if o.rsrp_dbm > b.rsrp_dbm => o,
                Some(b) if o.rsrp_dbm == b.rsrp_dbm && o.sector_id < b.sector_id => o,
                Some(b) => b,
            });
        }
        let best = best.unwrap();
        assert_eq!(a.best_sector_id, best.sector_id, "scan {} net {}", a.scan_id, a.network_id);
        assert_eq!(a.best_rsrp_dbm, best.rsrp_dbm);
        let second = group
            .iter()
            .filter(|o| !std::ptr::eq(**o, best))
            .map(|o| o.rsrp_dbm)
            .fold(f64::NEG_INFINITY, f64::max);
        let margin = if second.is_finite() { best.rsrp_dbm - second } else { 0.0 };
        assert_eq!(a.margin_db, margin);
    }
    // every nonempty (scan, network) group is represented exactly once
    let mut keys: Vec<(String, String)> = observations
        .iter()
        .map(|o| (o.scan_id.clone(), o.network_id.clone()))
        .collect();
    keys.sort();
    keys.dedup();
    assert_eq!(assignments.len(), keys.len());
    pass(10, "best-server matches brute-force re-scan");
}

#[test]
fn criterion_11_pipeline_determinism() {
    let bin = env!("CARGO_BIN_EXE_rplkit");
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("scenario.conf");
    std::fs::write(&config, "seed = 11\nn_sites = 4\nregion_km = 6\n").unwrap();

    let run = |tag: &str| {
        let data = dir.path().join(tag).join("data");
        let eval = dir.path().join(tag).join("eval");
        let sweep_out = dir.path().join(tag).join("sweep");
        let status = |args: &[&str]| {
            let out = std::process::Command::new(bin).args(args).output().unwrap();
            assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        };
        status(&["synth", "--config", config.to_str().unwrap(), "--out", data.to_str().unwrap()]);
        let infra = data.join("infrastructure.csv");
        let meas = data.join("measurements.csv");
        status(&[
            "evaluate",
            "--infra",
            infra.to_str().unwrap(),
            "--measurements",
            meas.to_str().unwrap(),
            "--out",
            eval.to_str().unwrap(),
            "--geojson",
        ]);
        status(&[
            "sweep",
            "--infra",
            infra.to_str().unwrap(),
            "--measurements",
            meas.to_str().unwrap(),
            "--out",
            sweep_out.to_str().unwrap(),
        ]);
        (data, eval, sweep_out)
    };
    let (data_a, eval_a, sweep_a) = run("a");
    let (data_b, eval_b, sweep_b) = run("b");

    // every report and GeoJSON byte-identical across runs (manifests embed
    // run-specific paths and are exempt)
    let mut compared = 0usize;
    for (a, b) in [(data_a, data_b), (eval_a, eval_b), (sweep_a, sweep_b)] {
        let mut names: Vec<String> = std::fs::read_dir(&a)
            .unwrap()
            .map(|e| e.unwrap().file_name().into_string().unwrap())
            .filter(|n| n != "manifest.json")
            .collect();
        names.sort();
        let mut names_b: Vec<String> = std::fs::read_dir(&b)
            .unwrap()
            .map(|e| e.unwrap().file_name().into_string().unwrap())
            .filter(|n| n != "manifest.json")
            .collect();
        names_b.sort();
        assert_eq!(names, names_b, "output file sets differ");
        for name in names {
            let bytes_a = std::fs::read(a.join(&name)).unwrap();
            let bytes_b = std::fs::read(b.join(&name)).unwrap();
            assert_eq!(bytes_a, bytes_b, "{name} differs between runs");
            compared += 1;
        }
    }
    assert!(compared >= 8, "expected a full set of outputs, compared {compared}");
    pass(11, "synth/evaluate/sweep reruns are byte-identical");
}
