//! Acceptance suite: one test per criterion, each printing its measured
//! result as a pass line. Numbers and tolerances are pinned here; the
//! criteria are the project's exit gate.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use collapse4::dd::DoubleDouble;
use collapse4::dynamics::{
    simulate, simulate_absolute, simulate_with, CollisionType, Restitution, SimParams, Termination,
    COLLISION_TYPES,
};
use collapse4::math::{cross, normalize};
use collapse4::pattern::{
    ababcb_closed_form_datum, mobius_map, self_similar_datum, Branch, CollisionWord,
    InfeasibleReason, Verdict,
};
use collapse4::scalar::Scalar;
use collapse4::spherical::{
    config_to_plane, decomposes_into_blocks, iterate, orientation_axis, plane_normal_in,
    plane_to_config, step_trig, step_trig_in, step_vectorial, to_full_state, to_full_state_in,
    validate_sequence, OrbitTermination, PlaneState, SequenceVerdict, SphericalConfig,
};
use collapse4::sweep::{
    cluster_phis, run_sweep, write_records_csv, write_singularities_csv, SweepConfig,
};

fn rest(r: f64) -> Restitution {
    Restitution::new(r).unwrap()
}

fn ababcb() -> CollisionWord {
    CollisionWord::parse("ababcb").unwrap()
}

const THRESHOLD_ABABCB: f64 = 0.1010205144336442; // 5 - 2 sqrt(6)

#[test]
fn criterion_01_threshold_scan() {
    let start = Instant::now();
    let w = ababcb();
    for branch in [Branch::Upper, Branch::Lower] {
        let mut last_feasible = None;
        let mut first_infeasible = None;
        for k in 0..=100 {
            let r = 0.095 + 1e-4 * k as f64;
            let rep = self_similar_datum(&w, rest(r), branch);
            if rep.verdict.is_feasible() {
                assert!(
                    first_infeasible.is_none(),
                    "branch {branch}: feasible at r={r} after the flip"
                );
                last_feasible = Some(r);
            } else if first_infeasible.is_none() {
                first_infeasible = Some(r);
            }
        }
        let lo = last_feasible.expect("feasible region sampled");
        let hi = first_infeasible.expect("infeasible region sampled");
        assert!(
            lo < THRESHOLD_ABABCB && THRESHOLD_ABABCB < hi,
            "branch {branch}: flip bracket [{lo}, {hi}] misses the threshold"
        );
        assert!(
            hi - lo <= 1e-4 * (1.0 + 1e-9),
            "branch {branch}: bracket wider than one step"
        );
    }
    let dt = start.elapsed();
    assert!(dt.as_secs_f64() < 10.0, "scan took {dt:?}");
    println!(
        "acceptance criterion 1: PASS - ababcb verdict flips within one 1e-4 step of {THRESHOLD_ABABCB} on both branches ({dt:?})"
    );
}

#[test]
fn criterion_02_self_similar_realization() {
    // The shape fixed point is repelling (|f'| ~ 348 per period at r=0.08),
    // so binary64 cannot hold the schedule for ten periods; the run uses the
    // double-double scalar behind the same simulation code, with the
    // time-underflow break disabled because inter-collision times shrink
    // below any resolvable fraction of absolute time while gaps and
    // velocities stay accurate.
    let r = rest(0.08);
    let datum = ababcb_closed_form_datum::<DoubleDouble>(r, Branch::Upper).unwrap();
    let params = SimParams::<DoubleDouble> {
        time_underflow_rel: None,
        ..Default::default()
    };
    let tr = simulate_with(datum.p0(), datum.q0(), r, 60, &params);
    assert_eq!(
        tr.letters(),
        "ababcb".repeat(10),
        "termination: {:?}",
        tr.termination
    );

    let q0 = datum.q0();
    let mut scale = DoubleDouble::ONE;
    let mut first_err = 0.0;
    let mut worst_err: f64 = 0.0;
    for period in 1..=10usize {
        scale = scale * datum.lambda;
        let e = &tr.events[6 * period - 1];
        let mut err: f64 = 0.0;
        for (&after, &before) in e.q_after.iter().zip(&q0) {
            let ratio = after / (before * scale);
            err = err.max((ratio - DoubleDouble::ONE).abs().to_f64());
        }
        if period == 1 {
            first_err = err;
            assert!(err <= 1e-6, "period-1 velocity scaling error {err:e}");
        }
        assert!(
            err <= 1e-3,
            "period-{period} velocity scaling error {err:e}"
        );
        worst_err = worst_err.max(err);
    }
    println!(
        "acceptance criterion 2: PASS - (ababcb)^10 realized at r=0.08; velocity scaling error {first_err:.2e} (period 1) .. {worst_err:.2e} (worst of 10)"
    );
}

#[test]
fn criterion_03_upper_branch_instability() {
    let w = ababcb();
    let mut min_ratio = f64::INFINITY;
    for k in 1..=20 {
        let r = 0.01 + 0.0045 * k as f64; // 20 samples in (0.01, 0.10]
        let rep = self_similar_datum(&w, rest(r), Branch::Upper);
        assert_eq!(rep.verdict, Verdict::FeasibleUnstable, "r = {r}");
        let ratio = rep.stability_ratio.unwrap();
        assert!(ratio > 1.0, "stability ratio {ratio} at r = {r}");
        min_ratio = min_ratio.min(ratio);

        // A 1e-8 perturbation of the shape coordinate grows under iterated f.
        let map = mobius_map(&w, rest(r), Branch::Upper).unwrap();
        let x_star = rep.fixed_point.unwrap();
        let mut x = x_star + 1e-8;
        assert!(
            (map.eval(x) - x_star).abs() > (x - x_star).abs(),
            "first iterate does not grow at r = {r}"
        );
        let mut max_dev: f64 = 0.0;
        for _ in 0..20 {
            x = map.eval(x);
            max_dev = max_dev.max((x - x_star).abs());
        }
        assert!(
            max_dev >= 1e-3,
            "perturbation only reached {max_dev:e} at r = {r}"
        );
    }
    println!(
        "acceptance criterion 3: PASS - stability ratio > 1 at 20 sampled r in (0.01, 0.10] (min {min_ratio:.3}); 1e-8 shape perturbations grow under iterated f"
    );
}

#[test]
fn criterion_04_plane_conservation() {
    // Both sides run in double-double. The conservation itself is exact; the
    // comparison precision is limited by passages near the octant corners,
    // where the map's derivative grows like one over the corner distance
    // (a corner is a triple collision). Random trajectories routinely pass
    // within 1e-5..1e-6 of a corner, which in binary64 lenses the two
    // representations' roundoff to ~1e-6 disagreements late in deep
    // collapse; in double-double the same lensing leaves the comparison far
    // below the 1e-9 budget.
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(20260809);
    let mut worst: f64 = 0.0;
    let mut collisions_checked = 0usize;
    type D = DoubleDouble;
    let dd = D::from_f64;
    for &r in &[0.1, 0.3, 0.7] {
        let rr = rest(r);
        for _ in 0..1000 {
            let contact = COLLISION_TYPES[rng.random_range(0..3)];
            let theta = rng.random_range(0.05..std::f64::consts::FRAC_PI_2 - 0.05);
            let phi = rng.random_range(0.05..std::f64::consts::PI - 0.05);
            let radial = rng.random_range(-2.0..2.0);
            let scale = rng.random_range(0.1..10.0);
            let (p0, q0) = to_full_state_in(contact, dd(theta), dd(phi), dd(radial), dd(scale));
            let full = simulate_with(p0, q0, rr, 300, &SimParams::<D>::default());

            let mut state = (contact, dd(theta), dd(phi));
            for event in &full.events {
                let next = match step_trig_in(state.0, state.1, state.2, rr) {
                    Ok(n) => n,
                    Err(_) => break, // reduced map broke first; nothing left to compare
                };
                state = next;
                assert_eq!(
                    event.kind, state.0,
                    "collision order diverged at r={r} from ({contact:?}, {theta}, {phi})"
                );
                let Some(mut u_full) =
                    normalize(&cross(&event.p_after, &event.q_after), dd(1e-200))
                else {
                    break;
                };
                if u_full[orientation_axis(event.kind)] < D::ZERO {
                    u_full = [-u_full[0], -u_full[1], -u_full[2]];
                }
                let u_reduced = plane_normal_in(state.0, state.1, state.2);
                for i in 0..3 {
                    worst = worst.max((u_full[i] - u_reduced[i]).to_f64().abs());
                }
                collisions_checked += 1;
            }
        }
    }
    let dt = start.elapsed();
    assert!(worst <= 1e-9, "plane normals diverged by {worst:e}");
    assert!(dt.as_secs_f64() < 60.0, "conservation check took {dt:?}");
    println!(
        "acceptance criterion 4: PASS - contact sequences identical and plane normals within {worst:.2e} over {collisions_checked} collisions of 3000 lifted trajectories ({dt:?})"
    );
}

#[test]
fn criterion_05_formulation_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    let mut worst: f64 = 0.0;
    for &r in &[0.1, 0.5, 0.9] {
        let rr = rest(r);
        for _ in 0..100_000 {
            let contact = COLLISION_TYPES[rng.random_range(0..3)];
            let theta = rng.random_range(1e-3..std::f64::consts::FRAC_PI_2 - 1e-3);
            let phi = rng.random_range(1e-3..std::f64::consts::PI - 1e-3);
            let cfg = SphericalConfig {
                contact,
                theta,
                phi,
            };
            let plane = config_to_plane(&cfg);
            let trig = step_trig(&cfg, rr);
            let vect = step_vectorial(&plane, rr);
            match (trig, vect) {
                (Ok(t), Ok(v)) => {
                    assert_eq!(t.contact, v.contact);
                    let ut = config_to_plane(&t).normal;
                    for (a, b) in ut.iter().zip(&v.normal) {
                        worst = worst.max((a - b).abs());
                    }
                }
                (Err(a), Err(b)) => assert_eq!(a, b),
                (a, b) => panic!("formulations disagree on failure: {a:?} vs {b:?}"),
            }
        }
    }
    assert!(worst <= 1e-10, "formulations diverged by {worst:e}");
    println!(
        "acceptance criterion 5: PASS - trigonometric and vectorial steps agree within {worst:.2e} on 3 x 100000 random states"
    );
}

#[test]
fn criterion_06_sequence_structure() {
    let mut rng = ChaCha8Rng::seed_from_u64(66);
    let mut orbits = 0usize;
    for &r in &[0.1, 0.15, 0.185, 0.5, 0.9] {
        let rr = rest(r);
        for _ in 0..20 {
            let contact = COLLISION_TYPES[rng.random_range(0..3)];
            let cfg = SphericalConfig {
                contact,
                theta: rng.random_range(0.05..std::f64::consts::FRAC_PI_2 - 0.05),
                phi: rng.random_range(0.05..std::f64::consts::PI - 0.05),
            };
            let orbit = iterate(&cfg, rr, 10_000, 0);
            let seq = orbit.contact_sequence();
            assert_eq!(
                validate_sequence(&seq),
                SequenceVerdict::Ok,
                "structural violation at r={r} from {cfg:?} ({:?})",
                orbit.termination
            );
            assert!(
                decomposes_into_blocks(&seq),
                "tail does not decompose into ab/cb/acb/cab at r={r}"
            );
            orbits += 1;
        }
    }
    assert_eq!(orbits, 100);
    println!(
        "acceptance criterion 6: PASS - no aa/bb/cc/aca/cac, b-gap <= 3 and block decomposition hold on 100 orbits of 10^4 steps"
    );
}

/// Runs the window sweep of one r and returns per-trajectory (cluster count,
/// spread) of the trailing contact-b phi samples.
fn window_stats(r: f64) -> Vec<(usize, f64)> {
    let cfg = SweepConfig::grid(r, r, 1e-4, 2, 4);
    let (records, _) = run_sweep(&cfg).unwrap();
    (0..8)
        .map(|id| {
            let phis: Vec<f64> = records
                .iter()
                .filter(|rec| rec.traj_id == id)
                .map(|rec| rec.phi)
                .collect();
            assert!(!phis.is_empty(), "trajectory {id} at r={r} kept no samples");
            let clusters = cluster_phis(&phis, 0.05);
            let spread = phis.iter().cloned().fold(f64::MIN, f64::max)
                - phis.iter().cloned().fold(f64::MAX, f64::min);
            (clusters.len(), spread)
        })
        .collect()
}

#[test]
fn criterion_07_stability_windows() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for &(r, expected) in &[(0.15, 4usize), (0.098, 6), (0.088, 8), (0.0805, 10)] {
        let stats = window_stats(r);
        let agreeing = stats.iter().filter(|(n, _)| *n == expected).count();
        let counts: Vec<usize> = stats.iter().map(|(n, _)| *n).collect();
        let ok = agreeing >= 6;
        println!(
            "acceptance criterion 7: {} - r={r}: expected {expected} clusters, per-trajectory counts {counts:?} ({agreeing}/8 agree)",
            if ok { "PASS" } else { "FAIL" }
        );
        if !ok {
            failures.push(format!(
                "r={r}: counts {counts:?}, only {agreeing}/8 show {expected}"
            ));
        }
    }
    let stats = window_stats(0.185);
    let min_spread = stats.iter().map(|(_, s)| *s).fold(f64::MAX, f64::min);
    let spread_ok = min_spread >= 1.0;
    println!(
        "acceptance criterion 7: {} - r=0.185: trailing samples span >= 1 rad per trajectory (min {min_spread:.3})",
        if spread_ok { "PASS" } else { "FAIL" }
    );
    if !spread_ok {
        failures.push(format!("r=0.185 spread {min_spread}"));
    }
    let dt = start.elapsed();
    assert!(dt.as_secs_f64() < 300.0, "window sweeps took {dt:?}");
    // r = 0.088 lies above the third window's upper edge
    // 3 + 2 sqrt(2) - 2 sqrt(4 + 3 sqrt(2)) = 0.086426 (see the threshold
    // table), where the reduced orbits are chaotic; the 8-cluster count
    // asserted here is therefore expected to fail at that r, and the
    // in-window behaviour is documented by the r = 0.086 regression test.
    assert!(failures.is_empty(), "{failures:?}");
}

#[test]
fn criterion_08_threshold_table() {
    let table = collapse4::pattern::known_thresholds();
    let expect = [
        ("r_max_(ab)^2(cb)^2", 0.17157),
        ("r_max_(ab)^3(cb)^3", 0.10102),
        ("r_max_(ab)^4(cb)^4", 0.08643),
        ("r_max_(ab)^5(cb)^5", 0.08070),
        ("r_max_(ab)^6(cb)^6", 0.07782),
        ("r_crit_3_particles", 0.07180),
    ];
    for (name, want) in expect {
        let got = table.iter().find(|t| t.name == name).unwrap().value;
        assert!(
            (got - want).abs() <= 5e-6,
            "{name}: {got} does not round to {want}"
        );
    }
    let r_exist = collapse4::pattern::bisect(collapse4::pattern::existence_polynomial, 0.19, 0.192);
    assert!(
        (r_exist - 0.19166).abs() <= 5e-6,
        "bisection root {r_exist}"
    );
    println!(
        "acceptance criterion 8: PASS - all closed forms match their 5-figure values; existence root {r_exist:.7}"
    );
}

#[test]
fn criterion_09_abcab_infeasibility() {
    let w = CollisionWord::parse("abcab").unwrap();
    for k in 0..10 {
        let r = 0.015 + 0.15 * k as f64 / 9.0; // 10 samples inside (0.01, 0.19)
        let rep = self_similar_datum(&w, rest(r), Branch::Upper);
        match &rep.verdict {
            Verdict::Infeasible {
                reason:
                    InfeasibleReason::Kinematics {
                        step,
                        scheduled,
                        description,
                    },
            } => {
                assert_eq!((*step, *scheduled), (3, 'c'), "r = {r}: {description}");
                assert!(
                    description.contains("after collision 2 (b)")
                        && description.contains("the next collision is a"),
                    "diagnostic does not name the post-b mismatch at r = {r}: {description}"
                );
            }
            other => panic!("expected kinematic infeasibility at r = {r}, got {other:?}"),
        }
    }
    println!(
        "acceptance criterion 9: PASS - abcab reports kinematic infeasibility naming the post-b a-vs-c mismatch at 10 sampled r"
    );
}

#[test]
fn criterion_10_sweep_determinism() {
    let sweep_all = || {
        let mut records_csv = Vec::new();
        let mut sing_csv = Vec::new();
        for &r in &[0.15, 0.098, 0.088, 0.0805, 0.185] {
            let cfg = SweepConfig::grid(r, r, 1e-4, 2, 4);
            let (records, singularities) = run_sweep(&cfg).unwrap();
            write_records_csv(&records, &mut records_csv).unwrap();
            write_singularities_csv(&singularities, &mut sing_csv).unwrap();
        }
        (records_csv, sing_csv)
    };
    let mut outputs = Vec::new();
    for threads in [1usize, 2, 8] {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        outputs.push(pool.install(sweep_all));
    }
    assert_eq!(
        outputs[0], outputs[1],
        "1-thread vs 2-thread output differs"
    );
    assert_eq!(
        outputs[0], outputs[2],
        "1-thread vs 8-thread output differs"
    );
    assert!(!outputs[0].0.is_empty());
    println!(
        "acceptance criterion 10: PASS - window sweep emits byte-identical CSV on 1, 2 and 8 worker threads ({} bytes)",
        outputs[0].0.len()
    );
}

#[test]
fn criterion_11_oracle_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(1111);
    let mut compared = 0usize;
    for &r in &[0.1, 0.3, 0.7] {
        let rr = rest(r);
        for _ in 0..1000 {
            let contact = COLLISION_TYPES[rng.random_range(0..3)];
            let cfg = SphericalConfig {
                contact,
                theta: rng.random_range(0.05..std::f64::consts::FRAC_PI_2 - 0.05),
                phi: rng.random_range(0.05..std::f64::consts::PI - 0.05),
            };
            let radial = rng.random_range(-2.0..2.0);
            let scale = rng.random_range(0.1..10.0);
            let (p0, q0) = to_full_state(&cfg, radial, scale);
            let x0 = [0.0, p0[0], p0[0] + p0[1], p0[0] + p0[1] + p0[2]];
            let v0 = [0.0, q0[0], q0[0] + q0[1], q0[0] + q0[1] + q0[2]];

            let rel = simulate(p0, q0, rr, 200);
            let abs = simulate_absolute(x0, v0, rr, 200);
            let n = rel.events.len().min(abs.events.len());
            let p_total: f64 = v0.iter().sum();
            let mut prev_ke = 0.5 * v0.iter().map(|v| v * v).sum::<f64>();
            for k in 0..n {
                let (er, ea) = (&rel.events[k], &abs.events[k]);
                assert_eq!(er.kind, ea.kind, "type sequences diverge at r={r}");
                assert!(
                    (er.time - ea.time).abs() <= 1e-9 * ea.time.abs().max(1.0),
                    "event times diverge: {} vs {}",
                    er.time,
                    ea.time
                );
                // Momentum fixed, kinetic energy non-increasing in the
                // absolute oracle.
                let q = ea.q_after;
                let v1 = (p_total - (3.0 * q[0] + 2.0 * q[1] + q[2])) / 4.0;
                let vs = [v1, v1 + q[0], v1 + q[0] + q[1], v1 + q[0] + q[1] + q[2]];
                let momentum: f64 = vs.iter().sum();
                assert!((momentum - p_total).abs() <= 1e-13 * p_total.abs().max(1.0));
                let ke = 0.5 * vs.iter().map(|v| v * v).sum::<f64>();
                assert!(ke <= prev_ke + 1e-13 * prev_ke.max(1.0));
                prev_ke = ke;
                compared += 1;
            }
        }
    }
    println!(
        "acceptance criterion 11: PASS - relative and absolute simulations agree ({compared} events compared; momentum conserved, energy non-increasing)"
    );
}

// ---------------------------------------------------------------------------
// Supporting regressions beyond the numbered criteria.
// ---------------------------------------------------------------------------

/// True in-window behaviour of the third stability window: its upper edge is
/// 0.086426, and just inside (r = 0.086) every grid trajectory settles on 8
/// clusters. Documents what criterion 7 asserts at r = 0.088, which lies
/// outside the window.
#[test]
fn window_three_inside_regression() {
    let stats = window_stats(0.086);
    let agreeing = stats.iter().filter(|(n, _)| *n == 8).count();
    assert!(
        agreeing >= 6,
        "counts {:?}",
        stats.iter().map(|(n, _)| *n).collect::<Vec<_>>()
    );
    println!("window regression: PASS - r=0.086 settles on 8 clusters ({agreeing}/8 trajectories)");
}

/// Numerical breaks concentrate at the low end of [0.072, 0.08].
#[test]
fn singularities_concentrate_near_the_three_particle_threshold() {
    let cfg = SweepConfig::grid(0.072, 0.08, 5e-4, 2, 4);
    let (_, singularities) = run_sweep(&cfg).unwrap();
    assert!(!singularities.is_empty());
    let mid = 0.076;
    let low = singularities.iter().filter(|s| s.r < mid).count();
    let high = singularities.len() - low;
    assert!(
        low > high,
        "{low} breaks below r={mid} vs {high} above; expected concentration at the low end"
    );
}

/// The reduced orbit lifted from the self-similar datum follows the word for
/// several periods before the repelling shape error takes over.
#[test]
fn reduced_orbit_follows_the_datum_word() {
    let r = rest(0.08);
    let datum = ababcb_closed_form_datum::<f64>(r, Branch::Upper).unwrap();
    let (cfg, _, _) = collapse4::spherical::from_full_state(datum.p0(), datum.q0()).unwrap();
    let orbit = iterate(&cfg, r, 30, 0);
    assert_eq!(orbit.letters(), "ababcb".repeat(5));
}

/// A full f64 simulation of the datum keeps the schedule until the
/// time-underflow break (the collapse contracts inter-collision times by
/// ~1.8e-4 per period).
#[test]
fn f64_datum_simulation_reaches_the_underflow_break() {
    let r = rest(0.08);
    let datum = ababcb_closed_form_datum::<f64>(r, Branch::Upper).unwrap();
    let tr = simulate(datum.p0(), datum.q0(), r, 60);
    assert_eq!(
        tr.termination,
        Termination::NumericalSingularity(collapse4::dynamics::SingularityKind::TimeUnderflow)
    );
    assert!(tr.events.len() >= 18, "only {} events", tr.events.len());
    assert!(tr.letters().starts_with(&"ababcb".repeat(3)));
}

/// Periodic tail detection on a generic orbit in the largest window: the
/// trailing letters repeat with period 8 and spell out ababcbcb cyclically.
#[test]
fn window_one_tail_has_period_eight() {
    let cfg = SphericalConfig {
        contact: CollisionType::B,
        theta: std::f64::consts::FRAC_PI_2 / 3.0,
        phi: 2.0 * std::f64::consts::PI / 5.0,
    };
    let orbit = iterate(&cfg, rest(0.15), 10_000, 0);
    assert_eq!(orbit.termination, OrbitTermination::Completed);
    let seq = orbit.contact_sequence();
    let (period, start) = collapse4::sweep::detect_period(&seq, 12).unwrap();
    assert_eq!(period, 8);
    let tail: String = seq[start..start + 8].iter().map(|c| c.letter()).collect();
    let doubled = format!("{}{}", tail, tail);
    assert!(
        doubled.contains("ababcbcb"),
        "tail {tail} is not a rotation of ababcbcb"
    );
}

/// Vectorial steps keep the orientation convention along whole orbits.
#[test]
fn vectorial_orbit_keeps_orientation() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..20 {
        let cfg = SphericalConfig {
            contact: COLLISION_TYPES[rng.random_range(0..3)],
            theta: rng.random_range(0.05..std::f64::consts::FRAC_PI_2 - 0.05),
            phi: rng.random_range(0.05..std::f64::consts::PI - 0.05),
        };
        let mut plane: PlaneState = config_to_plane(&cfg);
        for _ in 0..2000 {
            match step_vectorial(&plane, rest(0.4)) {
                Ok(next) => {
                    assert!(next.normal[orientation_axis(next.contact)] >= -1e-12);
                    let cfg = plane_to_config(&next);
                    assert!(cfg.phi > 0.0 && cfg.phi < std::f64::consts::PI);
                    plane = next;
                }
                Err(_) => break,
            }
        }
    }
}
