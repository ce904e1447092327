use shor_entanglement::experiments::{
    max_drift, max_step, periodic_cell, run_fig2, run_fig3, run_fig4, run_periodic_study, trace_qft,
    write_periodic_csv, write_sweep_csv, write_trace_csv, Classification, SweepSummary, TraceOptions,
    TraceRecord, ZERO_G_THRESHOLD,
};
use shor_entanglement::rng;
use shor_entanglement::StateVector;

fn by_experiment(records: &[TraceRecord]) -> Vec<Vec<TraceRecord>> {
    let mut out: Vec<Vec<TraceRecord>> = Vec::new();
    for r in records {
        match out.last_mut() {
            Some(v) if v[0].experiment == r.experiment => v.push(r.clone()),
            _ => out.push(vec![r.clone()]),
        }
    }
    out
}

#[test]
fn shor_traces_are_flat_for_every_shift() {
    let opts = TraceOptions::default();
    for shift in 0..2 {
        let recs = run_fig3(&[(33, 4), (33, 23), (91, 41)], shift, 11, &opts).unwrap();
        let traces = by_experiment(&recs);
        assert_eq!(traces.len(), 3);
        for t in &traces {
            assert!(max_drift(t) <= 0.01, "{} shift {shift}: {}", t[0].experiment, max_drift(t));
        }
        assert!(traces[1].iter().all(|r| r.g <= ZERO_G_THRESHOLD));
        assert!((traces[0][0].g - 0.8f64.sqrt()).abs() <= 0.02);
    }
}

#[test]
fn trace_value_does_not_depend_on_shift() {
    let opts = TraceOptions::default();
    let g: Vec<f64> = (0..5)
        .map(|l| run_fig3(&[(33, 4)], l, 3, &opts).unwrap()[0].g)
        .collect();
    for v in &g {
        assert!((v - g[0]).abs() <= 1e-3, "{g:?}");
    }
}

#[test]
fn product_traces_jump_at_near_neighbour_phase_gates() {
    let recs = run_fig2(9, 3, 0, 5, &TraceOptions::default()).unwrap();
    for t in by_experiment(&recs) {
        assert!(t[0].g <= 1e-6);
        let big = t.windows(2).any(|w| {
            let gate = w[1].gate.unwrap();
            let near = gate.control().is_some_and(|m| m - gate.target() <= 2);
            near && (w[1].g - w[0].g).abs() >= 0.05
        });
        assert!(big, "{}: max step {}", t[0].experiment, max_step(&t));
    }
}

#[test]
fn random_states_vary_only_slightly() {
    let recs = run_fig2(8, 0, 2, 5, &TraceOptions::default()).unwrap();
    for t in by_experiment(&recs) {
        assert!(t.iter().all(|r| r.g > 0.9));
        assert!(max_step(&t) < 0.02, "{}", max_step(&t));
    }
}

#[test]
fn reruns_are_byte_identical() {
    let opts = TraceOptions::default();
    let csv = |f: &dyn Fn(&mut Vec<u8>)| {
        let mut buf = Vec::new();
        f(&mut buf);
        buf
    };
    let trace = |buf: &mut Vec<u8>| {
        let recs = run_fig2(6, 2, 2, 42, &opts).unwrap();
        write_trace_csv(buf, &recs, 42).unwrap();
    };
    assert_eq!(csv(&trace), csv(&trace));
    let sweep = |buf: &mut Vec<u8>| write_sweep_csv(buf, &run_fig4(30, 42, 8).unwrap(), 42).unwrap();
    assert_eq!(csv(&sweep), csv(&sweep));
    let periodic = |buf: &mut Vec<u8>| {
        write_periodic_csv(buf, &run_periodic_study(4..=7, &[3, 5], 42, &opts).unwrap(), 42).unwrap()
    };
    assert_eq!(csv(&periodic), csv(&periodic));
}

#[test]
fn sweep_respects_bound_and_classification() {
    let recs = run_fig4(40, 8, 8).unwrap();
    let s = SweepSummary::from_records(&recs);
    assert_eq!(s.bound_violations, 0);
    assert_eq!(s.classification_mismatches, 0);
    assert_eq!(s.total, s.gcd_shortcut + s.power_of_two_order + s.entangled);
    for r in &recs {
        if r.classification == Classification::Entangled {
            let d = r.odd_part.unwrap() as f64;
            // entangled cells follow the 1/d rule loosely
            assert!((1.0 - r.g * r.g - 1.0 / d).abs() < 0.15, "N={} y={}: G={}", r.n, r.y, r.g);
        }
    }
}

#[test]
fn periodic_drift_shrinks_with_register_size() {
    let opts = TraceOptions::default();
    let small = periodic_cell(6, 3, 1, &opts).unwrap();
    let large = periodic_cell(10, 3, 1, &opts).unwrap();
    assert!(large.max_drift < small.max_drift, "{} vs {}", large.max_drift, small.max_drift);
    assert!((large.p_max - 1.0 / 3.0).abs() < (small.p_max - 1.0 / 3.0).abs());
}

#[test]
fn every_gate_trace_agrees_with_default_trace() {
    let mut r = rng::from_seed(4);
    let state = StateVector::random_product(6, &mut r).unwrap().0;
    let coarse = trace_qft("a", &state, &TraceOptions::default(), &mut rng::from_seed(1)).unwrap();
    let fine = trace_qft("a", &state, &TraceOptions { every_gate: true, ..Default::default() }, &mut rng::from_seed(1)).unwrap();
    for rec in &coarse {
        let other = fine.iter().find(|f| f.ordinal == rec.ordinal).unwrap();
        assert!((rec.g - other.g).abs() <= 1e-6, "gate {}", rec.ordinal);
    }
    // Hadamards are local and leave G unchanged
    for w in fine.windows(2) {
        if w[1].gate.unwrap().is_hadamard() {
            assert!((w[1].g - w[0].g).abs() <= 1e-6);
        }
    }
}

// Known failure: at L = 10 the l = 0 state has one more support point than
// l = 1, 2 and G differs by ~6e-4. The gap decays with L (next test).
#[test]
fn periodic_g_does_not_depend_on_shift() {
    let g: Vec<f64> = (0..3)
        .map(|l| {
            let s = StateVector::periodic(&shor_entanglement::PeriodicStateSpec::new(10, 3, l).unwrap());
            shor_entanglement::groverian::groverian(&s, 20, &mut rng::from_seed(l))
        })
        .collect();
    for v in &g {
        assert!((v - g[0]).abs() <= 1e-4, "{g:?}");
    }
}

#[test]
fn shift_dependence_vanishes_with_register_size() {
    let gap = |l: usize| {
        let g: Vec<f64> = (0..3)
            .map(|shift| {
                let s = StateVector::periodic(&shor_entanglement::PeriodicStateSpec::new(l, 3, shift).unwrap());
                shor_entanglement::groverian::groverian(&s, 20, &mut rng::from_seed(shift))
            })
            .collect();
        g.iter().map(|v| (v - g[0]).abs()).fold(0.0, f64::max)
    };
    let gaps: Vec<f64> = [8, 10, 12, 14].into_iter().map(gap).collect();
    assert!(gaps.windows(2).all(|w| w[1] < w[0] / 2.0), "{gaps:?}");
    assert!(gaps[3] <= 1e-4, "{gaps:?}");
}
