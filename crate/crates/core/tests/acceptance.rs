//! Acceptance criteria 1-9. Each test prints one `criterion N: PASS|FAIL ...` line.

use qpce::adversary::{detection_probability, intercept_resend_campaign, tp_campaign};
use qpce::analysis::{
    correctness_scan, encoded_reduced_states, leak_bound, leak_monte_carlo, Resource,
};
use qpce::bits::{hamming, to_bits_le};
use qpce::protocol::{
    run_protocol, Direction, Encoding, ProtocolConfig, RunOptions, Variant, Verdict,
};
use qpce::qsim::{fidelity, helstrom};
use qpce::rng::{stream, Stream};
use qpce::states::stabilizer::{search, GateSet};
use qpce::states::{make_w1, w1_circuit, InitialKind};
use rand::Rng;
use serde_json::Value;
use std::process::{Command, Output};
use std::time::{Duration, Instant};

const CLOSED_FORM: f64 = 1e-12;

fn report(n: u32, pass: bool, detail: &str) {
    println!(
        "criterion {n}: {} {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
}

fn qpce(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qpce"))
        .args(args)
        .env_remove("QPCE_SEED")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn ket_or(s: &str) -> String {
    match s {
        "01|10" => "|01⟩ or |10⟩".into(),
        other => format!("|{other}⟩"),
    }
}

type PublishedRow = (
    u8,
    u8,
    &'static str,
    &'static str,
    &'static str,
    &'static str,
    [u8; 7],
);

/// The published outcome table: x, y, M^A1, M^B2, M^B1, M^A2, then
/// C^A1 C^B2 C^B1 C^A2 C^A C^B C_i.
const TABLE1: [PublishedRow; 16] = [
    (0, 0, "01|10", "0", "01|10", "0", [1, 0, 1, 0, 1, 1, 0]),
    (0, 0, "01|10", "1", "00", "0", [1, 1, 0, 0, 0, 0, 0]),
    (0, 0, "00", "0", "01|10", "1", [0, 0, 1, 1, 0, 0, 0]),
    (0, 0, "00", "1", "00", "1", [0, 1, 0, 1, 1, 1, 0]),
    (0, 1, "01|10", "1", "01|10", "0", [1, 1, 1, 0, 0, 1, 1]),
    (0, 1, "01|10", "0", "00", "0", [1, 0, 0, 0, 1, 0, 1]),
    (0, 1, "00", "0", "00", "1", [0, 0, 0, 1, 0, 1, 1]),
    (0, 1, "00", "1", "01|10", "1", [0, 1, 1, 1, 1, 0, 1]),
    (1, 0, "01|10", "0", "01|10", "1", [1, 0, 1, 1, 1, 0, 1]),
    (1, 0, "00", "0", "01|10", "0", [0, 0, 1, 0, 0, 1, 1]),
    (1, 0, "00", "1", "00", "0", [0, 1, 0, 0, 1, 0, 1]),
    (1, 0, "01|10", "1", "00", "1", [1, 1, 0, 1, 0, 1, 1]),
    (1, 1, "01|10", "1", "01|10", "1", [1, 1, 1, 1, 0, 0, 0]),
    (1, 1, "01|10", "0", "00", "1", [1, 0, 0, 1, 1, 1, 0]),
    (1, 1, "00", "1", "01|10", "0", [0, 1, 1, 0, 1, 1, 0]),
    (1, 1, "00", "0", "00", "0", [0, 0, 0, 0, 0, 0, 0]),
];

type RowKey = (u8, u8, String, String, String, String, Vec<u8>);

fn row_key(r: &Value) -> RowKey {
    let u = |k: &str| r[k].as_u64().unwrap() as u8;
    let s = |k: &str| r[k].as_str().unwrap().to_string();
    (
        u("x"),
        u("y"),
        s("m_a1"),
        s("m_b2"),
        s("m_b1"),
        s("m_a2"),
        ["c_a1", "c_b2", "c_b1", "c_a2", "c_a", "c_b", "c_i"]
            .iter()
            .map(|k| u(k))
            .collect(),
    )
}

#[test]
fn criterion_1_table1_reproduction() {
    let start = Instant::now();
    let out = qpce(&["table1", "--encoding", "isy"]);
    let elapsed = start.elapsed();
    let v = json(&out);
    let mut got: Vec<RowKey> = v["rows"].as_array().unwrap().iter().map(row_key).collect();
    let mut want: Vec<RowKey> = TABLE1
        .iter()
        .map(|(x, y, a1, b2, b1, a2, c)| {
            (
                *x,
                *y,
                ket_or(a1),
                ket_or(b2),
                ket_or(b1),
                ket_or(a2),
                c.to_vec(),
            )
        })
        .collect();
    got.sort();
    want.sort();
    let xor_ok = got.iter().all(|r| r.6[6] == r.0 ^ r.1);
    let pass =
        out.status.code() == Some(0) && got == want && xor_ok && elapsed < Duration::from_secs(1);
    report(
        1,
        pass,
        &format!(
            "{} rows, matches table: {}, C_i = x^y: {xor_ok}, {elapsed:?}",
            got.len(),
            got == want
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_2_reduced_states() {
    let (r0, r1) = encoded_reduced_states(Resource::W1, Encoding::SigmaX).unwrap();
    let half = |rho: &qpce::qsim::DensityMatrix| {
        (rho.entry(0, 0).re - 0.5).abs() < CLOSED_FORM
            && (rho.entry(1, 1).re - 0.5).abs() < CLOSED_FORM
            && rho.entry(0, 1).norm() < CLOSED_FORM
            && rho.entry(1, 0).norm() < CLOSED_FORM
            && rho.entry(0, 0).im.abs() < CLOSED_FORM
            && rho.entry(1, 1).im.abs() < CLOSED_FORM
    };
    let p = helstrom(&r0, &r1).unwrap();
    let pass = half(&r0) && half(&r1) && (p - 0.5).abs() < CLOSED_FORM;
    report(
        2,
        pass,
        &format!(
            "rho0, rho1 = I/2: {}, {}; helstrom {p}",
            half(&r0),
            half(&r1)
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_3_leak_gap() {
    let start = Instant::now();
    let bound = leak_bound(Resource::SymmetricW, Encoding::ISigmaY).unwrap();
    let mut rng = stream(3, Stream::Trials);
    let sym = leak_monte_carlo(Resource::SymmetricW, Encoding::ISigmaY, 100_000, &mut rng).unwrap();
    let w1 = leak_monte_carlo(Resource::W1, Encoding::ISigmaY, 100_000, &mut rng).unwrap();
    let elapsed = start.elapsed();
    let sym_ok = (sym.empirical - 2.0 / 3.0).abs() <= 3.0 * sym.sigma;
    let w1_ok = (w1.empirical - 0.5).abs() <= 3.0 * w1.sigma;
    let pass = (bound - 2.0 / 3.0).abs() < CLOSED_FORM
        && sym_ok
        && w1_ok
        && elapsed < Duration::from_secs(10);
    report(
        3,
        pass,
        &format!(
            "bound {bound:.12}, symW {:.5} (3σ {:.5}), W1 {:.5} (3σ {:.5}), {elapsed:?}",
            sym.empirical,
            3.0 * sym.sigma,
            w1.empirical,
            3.0 * w1.sigma
        ),
    );
    assert!(pass);
}

fn kinds_from_mask(mask: u32, n: usize) -> Vec<InitialKind> {
    (0..n)
        .map(|i| {
            if mask >> i & 1 == 1 {
                InitialKind::W1Prime
            } else {
                InitialKind::W1
            }
        })
        .collect()
}

#[test]
fn criterion_4_end_to_end_correctness() {
    let start = Instant::now();
    let mut failures = 0usize;
    let mut runs = 0usize;
    let n = 3;
    let base = ProtocolConfig {
        bits: n,
        ..ProtocolConfig::default()
    };
    let mut seed = 0u64;
    for x in 0..8u64 {
        for y in 0..8u64 {
            for ka in 0..8u32 {
                for kb in 0..8u32 {
                    let cfg = ProtocolConfig {
                        seed,
                        ..base.clone()
                    };
                    seed += 1;
                    let opts = RunOptions {
                        alice_kinds: Some(kinds_from_mask(ka, n)),
                        bob_kinds: Some(kinds_from_mask(kb, n)),
                        ..RunOptions::default()
                    };
                    let xb = to_bits_le(x, n);
                    let yb = to_bits_le(y, n);
                    let r = run_protocol(&cfg, &xb, &yb, opts).unwrap().report;
                    runs += 1;
                    let ok = r.r == Some(hamming(&xb, &yb))
                        && ((r.verdict == Verdict::Equal) == (x == y));
                    failures += usize::from(!ok);
                }
            }
        }
    }
    let mut rng = stream(4, Stream::Trials);
    for t in 0..1000u64 {
        let cfg = ProtocolConfig {
            bits: 32,
            seed: 1_000_000 + t,
            ..ProtocolConfig::default()
        };
        let x: u64 = rng.gen::<u32>().into();
        let y: u64 = if rng.gen() {
            x
        } else {
            rng.gen::<u32>().into()
        };
        let (xb, yb) = (to_bits_le(x, 32), to_bits_le(y, 32));
        let r = run_protocol(&cfg, &xb, &yb, RunOptions::default())
            .unwrap()
            .report;
        runs += 1;
        let ok = r.r == Some(hamming(&xb, &yb)) && ((r.verdict == Verdict::Equal) == (x == y));
        failures += usize::from(!ok);
    }
    let elapsed = start.elapsed();
    let pass = failures == 0 && elapsed < Duration::from_secs(30);
    report(
        4,
        pass,
        &format!("{runs} runs, {failures} wrong, {elapsed:?}"),
    );
    assert!(pass);
}

#[test]
fn criterion_5_tp_flaw() {
    let mut plaintext_ok = true;
    let mut detail = String::new();
    for variant in [Variant::Lwj11, Variant::Lwg12] {
        let cfg = ProtocolConfig {
            variant,
            seed: 55,
            ..ProtocolConfig::default()
        };
        let c = tp_campaign(&cfg, 100).unwrap();
        let ok = c.recovered == 100 && c.recovered_correct == 100 && c.methods_disagree == 0;
        plaintext_ok &= ok;
        detail += &format!(
            "{variant}: R recovered {}/100, methods disagree {}; ",
            c.recovered_correct, c.methods_disagree
        );
    }
    let aw = tp_campaign(
        &ProtocolConfig {
            seed: 55,
            ..ProtocolConfig::default()
        },
        1000,
    )
    .unwrap();
    let aw_ok = aw.recovered == 0 && (aw.guess_success_rate - 0.5).abs() <= 3.0 * aw.guess_sigma;
    detail += &format!(
        "aw: recovered {}, guess {:.4} over {} (3σ {:.4}), random-bit control {:.4}, R'=0 in {} runs ({} equal)",
        aw.recovered,
        aw.guess_success_rate,
        aw.guesses,
        3.0 * aw.guess_sigma,
        aw.control_success_rate,
        aw.r_prime_zero_runs,
        aw.r_prime_zero_equal
    );
    let pass = plaintext_ok && aw_ok;
    report(5, pass, &detail);
    assert!(plaintext_ok, "plaintext variants: {detail}");
    assert!(aw_ok, "AW guess accuracy: {detail}");
}

#[test]
fn criterion_6_eavesdropping_detection() {
    let cfg = ProtocolConfig {
        decoys: 16,
        error_threshold: 0.0,
        seed: 66,
        ..ProtocolConfig::default()
    };
    let runs = 10_000;
    let c = intercept_resend_campaign(&cfg, runs).unwrap();
    let p = detection_probability(16);
    let sigma = (p * (1.0 - p) / runs as f64).sqrt();
    let ab = c.abort_rate(Direction::AliceToBob);
    let ba = c.abort_rate(Direction::BobToAlice);
    let dir_ok = (ab - p).abs() <= 3.0 * sigma && (ba - p).abs() <= 3.0 * sigma;
    let err_ok = (c.per_decoy_error_rate - 0.25).abs() <= 3.0 * c.error_rate_sigma;
    let pass = dir_ok && err_ok;
    report(
        6,
        pass,
        &format!(
            "aborts A->B {ab:.5} B->A {ba:.5} vs {p:.5} (3σ {:.5}); decoy error {:.5} vs 0.25 (3σ {:.5})",
            3.0 * sigma,
            c.per_decoy_error_rate,
            3.0 * c.error_rate_sigma
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_7_circuit_verification() {
    let start = Instant::now();
    let target = make_w1();
    let fid = fidelity(&w1_circuit().replay().unwrap(), &target).unwrap();
    let nch = search(GateSet::NotCnotHadamard, 3, 64, &target);
    let full = search(GateSet::FullClifford, 3, 64, &target);
    let elapsed = start.elapsed();
    let pass = fid >= 1.0 - CLOSED_FORM
        && nch.closed
        && !nch.target_reachable
        && full.closed
        && full.states_found == 1080
        && !full.target_reachable
        && elapsed < Duration::from_secs(60);
    report(
        7,
        pass,
        &format!(
            "fidelity {fid:.15}; {{NOT,CNOT,H}} closure {} states, reachable {}; full Clifford {} states, reachable {}; {elapsed:?}",
            nch.states_found, nch.target_reachable, full.states_found, full.target_reachable
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_8_sigma_x_inconsistency() {
    let out = qpce(&["table1", "--encoding", "sx"]);
    let v = json(&out);
    let listed = v["mismatches"].as_array().unwrap();
    let listed_ok = !listed.is_empty()
        && listed.iter().all(|r| {
            let bad = |kind: &Value, bit: &Value| kind == "W1'" && bit == 1;
            bad(&r["kind_a"], &r["x"]) || bad(&r["kind_b"], &r["y"])
        });
    // Over the whole enumeration, a row is wrong exactly when one party (not both)
    // prepared W1' with bit 1; two such flips cancel in C_i.
    let scan = correctness_scan(Variant::Aw, Encoding::SigmaX).unwrap();
    let rule_ok = scan.rows.iter().all(|r| {
        let a = r.kind_a == InitialKind::W1Prime && r.x == 1;
        let b = r.kind_b == InitialKind::W1Prime && r.y == 1;
        r.consistent() != (a ^ b)
    });
    let pass = out.status.code() == Some(3) && listed_ok && rule_ok;
    report(
        8,
        pass,
        &format!(
            "exit {:?}, {} mismatch rows listed, all from W1' with bit 1: {listed_ok}, mismatch iff one such party: {rule_ok}",
            out.status.code(),
            listed.len()
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_9_determinism() {
    let invocations: [&[&str]; 5] = [
        &[
            "run",
            "--x",
            "5A",
            "--y",
            "3C",
            "--seed",
            "9",
            "--transcript",
        ],
        &["table1", "--encoding", "isy", "--seed", "9"],
        &[
            "analyze",
            "--resource",
            "symw",
            "--trials",
            "5000",
            "--seed",
            "9",
        ],
        &[
            "attack",
            "--kind",
            "tp_classical",
            "--variant",
            "lwj11",
            "--trials",
            "50",
            "--seed",
            "9",
        ],
        &[
            "circuit",
            "--show-steps",
            "--stabilizer-check",
            "--seed",
            "9",
        ],
    ];
    let mut all = true;
    let mut detail = Vec::new();
    for args in invocations {
        let a = qpce(args);
        let b = qpce(args);
        let same = a.stdout == b.stdout
            && !a.stdout.is_empty()
            && serde_json::from_slice::<Value>(&a.stdout).is_ok();
        all &= same;
        detail.push(format!("{}={same}", args[0]));
    }
    report(9, all, &detail.join(" "));
    assert!(all);
}
