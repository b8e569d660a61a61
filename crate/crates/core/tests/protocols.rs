use qpc::adversary::{AttackConfig, BasisStrategy};
use qpc::protocol::{chi, ghz, swap, Rounds};
use qpc::runtime::rng::{stream_rng, Stream};
use qpc::runtime::{
    run_session, run_session_detailed, run_session_with_id, BitString, ChannelId, ComparisonInput,
    EventKind, Lab, PartyId, ProtocolKind, Session, SessionConfig, Verdict,
};
use qpc::Error;

fn input(x: u64, y: u64, n: u32) -> ComparisonInput {
    ComparisonInput::new(x, y, n).unwrap()
}

fn rounds(p: ProtocolKind, x: u64, y: u64, n: u32, seed: u64) -> Rounds {
    let cfg = SessionConfig::default().with_seed(seed);
    run_session_detailed(p, &input(x, y, n), &cfg, 0)
        .unwrap()
        .rounds
        .unwrap()
}

#[test]
fn documented_runs() {
    let cfg = SessionConfig::default();
    assert_eq!(
        run_session(ProtocolKind::Ghz, &input(5, 5, 3), &cfg)
            .unwrap()
            .result,
        Verdict::Equal
    );
    assert_eq!(
        run_session(ProtocolKind::Chi, &input(5, 1, 3), &cfg)
            .unwrap()
            .result,
        Verdict::NotEqual
    );
    assert_eq!(
        run_session(ProtocolKind::Swap, &input(0b101, 0b001, 3), &cfg)
            .unwrap()
            .result,
        Verdict::NotEqual
    );
}

#[test]
fn ghz_rounds_satisfy_cipher_and_parity() {
    for seed in 0..20 {
        let (x, y) = (0b1011, 0b0010);
        let Rounds::Ghz(rs) = rounds(ProtocolKind::Ghz, x, y, 4, seed) else {
            panic!()
        };
        for r in rs {
            let (xi, yi) = ((x >> r.index & 1) as u8, (y >> r.index & 1) as u8);
            assert_eq!(r.cipher, xi ^ r.key_a ^ yi ^ r.key_b);
            assert_eq!(r.tp_outcome, xi ^ yi);
        }
    }
}

#[test]
fn ghz_outcome_marks_the_differing_bit() {
    let cfg = SessionConfig::default().with_seed(2);
    let t = run_session(ProtocolKind::Ghz, &input(0b000, 0b100, 3), &cfg).unwrap();
    assert_eq!(t.bits("tp_outcomes"), Some(&BitString::from_u64(0b100, 3)));
    assert_eq!(t.result, Verdict::NotEqual);
}

#[test]
fn chi_rounds_satisfy_identity() {
    for seed in 0..20 {
        let (x, y) = (0b0110, 0b1100);
        let Rounds::Chi(rs) = rounds(ProtocolKind::Chi, x, y, 4, seed) else {
            panic!()
        };
        for r in rs {
            let (xi, yi) = ((x >> r.index & 1) as u8, (y >> r.index & 1) as u8);
            assert_eq!(r.r, r.r_a ^ r.r_b);
            assert_eq!(r.r ^ r.r_t, xi ^ yi);
        }
    }
    let t = run_session(
        ProtocolKind::Chi,
        &input(0b01, 0b11, 2),
        &SessionConfig::default(),
    )
    .unwrap();
    let diff = t.bits("R").unwrap().xor(t.bits("R_t").unwrap()).unwrap();
    assert_eq!(diff, BitString::from_u64(0b10, 2));
}

#[test]
fn swap_rounds_satisfy_identities() {
    for seed in 0..20 {
        let (x, y) = (0b10110, 0b00111);
        let Rounds::Swap(rs) = rounds(ProtocolKind::Swap, x, y, 5, seed) else {
            panic!()
        };
        assert_eq!(rs.len(), 3);
        for r in rs {
            assert_eq!(r.x_chunk, ((x >> (2 * r.chunk)) & 3) as u8);
            assert_eq!(r.r, (r.r_a ^ r.x_chunk) ^ (r.r_b ^ r.y_chunk));
            assert_eq!(r.r_c, r.r_a ^ r.r_b);
            assert_eq!(r.r ^ r.r_c, r.x_chunk ^ r.y_chunk);
        }
    }
}

#[test]
fn swap_tally_counts_differing_bits() {
    let cfg = SessionConfig::default();
    let t = run_session(ProtocolKind::Swap, &input(0b1000, 0b0000, 4), &cfg).unwrap();
    assert_eq!(t.tally("R"), Some(1));
    let t = run_session(ProtocolKind::Swap, &input(0b1111, 0b0000, 4), &cfg).unwrap();
    assert_eq!(t.tally("R"), Some(4));
    let t = run_session(ProtocolKind::Swap, &input(0b111, 0b000, 3), &cfg).unwrap();
    assert_eq!(t.tally("R"), Some(3));
    let t = run_session(ProtocolKind::Swap, &input(9, 9, 4), &cfg).unwrap();
    assert_eq!((t.tally("R"), t.result), (Some(0), Verdict::Equal));
}

#[test]
fn swap_exchange_order_does_not_matter() {
    let cfg = SessionConfig::default()
        .with_seed(11)
        .with_attack(
            AttackConfig::intercept_resend(BasisStrategy::UniformRandom).on(&[ChannelId::BobToTp]),
        )
        .with_check_pairs(1);
    for sid in 0..40 {
        let run = |order| {
            let s = Session::new(ProtocolKind::Swap, input(0b0110, 0b0101, 4), &cfg, sid).unwrap();
            swap::run_ordered(s, order).unwrap()
        };
        let a = run(swap::ExchangeOrder::AliceFirst);
        let b = run(swap::ExchangeOrder::BobFirst);
        if a.transcript.result != Verdict::Aborted && b.transcript.result != Verdict::Aborted {
            assert_eq!(a.rounds, b.rounds);
            for label in ["R_A", "R_B", "T_A", "T_B", "R_C", "R_j"] {
                assert_eq!(
                    a.transcript.bits(label),
                    b.transcript.bits(label),
                    "{label}"
                );
            }
        }
        // Bob's exchange fails or passes the same way in both orders.
        let bob_check = |t: &qpc::runtime::Transcript| {
            t.labeled("swap_check:bob").find_map(|e| match &e.kind {
                EventKind::Check { report, .. } => Some(report.passed),
                _ => None,
            })
        };
        if let (Some(x), Some(y)) = (bob_check(&a.transcript), bob_check(&b.transcript)) {
            assert_eq!(x, y);
        }
    }
}

#[test]
fn distribution_structure() {
    let cfg = SessionConfig::default().with_decoys(8);
    let mut s = Session::new(ProtocolKind::Ghz, input(1, 2, 3), &cfg, 0).unwrap();
    let d = ghz::ghz_distribute(&mut s, 3).unwrap();
    assert_eq!((d.alice.len(), d.bob.len(), d.tp.len()), (3, 3, 3));
    let sent = s.events().iter().find_map(|e| match &e.kind {
        EventKind::QubitSend {
            channel: ChannelId::TpToAlice,
            qubits,
            ..
        } => Some(qubits.len()),
        _ => None,
    });
    assert_eq!(sent, Some(11));
    assert!(d.passed());

    let mut s = Session::new(ProtocolKind::Chi, input(1, 2, 4), &cfg, 0).unwrap();
    let d = chi::chi_distribute(&mut s, 4).unwrap();
    assert_eq!(d.states_prepared, 4);
    assert_eq!((d.alice.len(), d.bob.len(), d.tp_pairs.len()), (4, 4, 4));
    for (q, p) in d.alice.iter().zip(&d.bob) {
        assert_eq!(
            s.lab.holder(*q),
            Some(qpc::runtime::Holder::Party(PartyId::Alice))
        );
        assert_eq!(
            s.lab.holder(*p),
            Some(qpc::runtime::Holder::Party(PartyId::Bob))
        );
    }
    assert!(ghz::ghz_distribute(&mut s, 0).is_err());
    assert!(chi::chi_distribute(&mut s, 0).is_err());
}

#[test]
fn step_functions_reject_bad_lengths() {
    let mut lab = Lab::new();
    let mut rng = stream_rng(0, 0, Stream::Inputs);
    let q = lab.prepare(PartyId::Tp, qpc::quantum::prepare_ghz3());
    assert!(matches!(
        ghz::ghz_tp_verdict(&mut lab, &BitString::zeros(2), &q[2..], &mut rng),
        Err(Error::LengthMismatch { .. })
    ));
    assert!(matches!(
        chi::chi_tp_verdict(&mut lab, &BitString::zeros(1), &[], &mut rng),
        Err(Error::LengthMismatch { .. })
    ));
    assert_eq!(
        ghz::ghz_extract_keys(&mut lab, PartyId::Alice, &[], &mut rng).unwrap(),
        BitString::zeros(0)
    );
    assert!(swap::swap_combine_and_verdict(&[]).is_err());
    // TP cannot measure what Alice holds.
    let a = lab.prepare(PartyId::Alice, qpc::quantum::StateVector::zero());
    assert!(matches!(
        ghz::ghz_tp_verdict(&mut lab, &BitString::zeros(1), &a, &mut rng),
        Err(Error::NotHolder { .. })
    ));
}

const LABELS: &[(ProtocolKind, &[&str])] = &[
    (
        ProtocolKind::Ghz,
        &["K_A", "K_B", "C_A", "C", "tp_outcomes"],
    ),
    (ProtocolKind::Chi, &["R_a", "R_b", "share_a", "R", "R_t"]),
    (
        ProtocolKind::Swap,
        &["R_A", "R_B", "T_A", "T_B", "R_C", "share_a", "R_j", "R"],
    ),
];

#[test]
fn transcripts_are_complete_and_scoped() {
    for &(p, labels) in LABELS {
        let t = run_session_with_id(p, &input(0b1001, 0b0011, 4), &SessionConfig::default(), 3)
            .unwrap();
        t.validate().unwrap();
        for l in labels {
            assert_eq!(t.labeled(l).count(), 1, "{p} {l}");
        }
        // Players' private readouts never reach TP.
        for private in ["K_A", "K_B", "R_a", "R_b", "R_A", "R_B", "share_a", "C_A"] {
            assert!(
                t.bits_seen_by(PartyId::Tp, private).is_none(),
                "{p} {private}"
            );
        }
        let verdict = t.events.last().unwrap();
        assert!(matches!(
            verdict.kind,
            EventKind::Verdict {
                result: Verdict::NotEqual
            }
        ));
        assert_eq!(
            verdict.visible_to,
            [PartyId::Alice, PartyId::Bob, PartyId::Tp]
        );
        // Every transmitted qubit crosses one channel once.
        let crossings = t.qubit_crossings();
        assert!(!crossings.is_empty());
        assert!(crossings.values().all(|&c| c == 1), "{p}");
        assert!(t.adversary_log.is_empty());
    }
}

#[test]
fn aborted_sessions_publish_nothing_about_inputs() {
    let cfg = SessionConfig::default()
        .with_decoys(16)
        .with_check_pairs(16)
        .with_attack(AttackConfig::intercept_resend(BasisStrategy::UniformRandom));
    for p in ProtocolKind::ALL {
        let mut aborted = 0;
        for sid in 0..20 {
            let t = run_session_with_id(p, &input(6, 9, 4), &cfg, sid).unwrap();
            t.validate().unwrap();
            if t.result != Verdict::Aborted {
                continue;
            }
            aborted += 1;
            for e in &t.events {
                if let EventKind::Message { label, .. } = &e.kind {
                    assert!(
                        label.starts_with("decoy_outcomes:") || label.starts_with("check_codes:"),
                        "{p} leaked {label}"
                    );
                }
                assert!(!matches!(e.kind, EventKind::Tally { .. }));
            }
            assert!(t.checks().any(|c| !c.passed));
        }
        assert!(aborted > 15, "{p}: {aborted}");
    }
}

#[test]
fn transcripts_replay_and_roundtrip() {
    let cfg = SessionConfig::default()
        .with_seed(99)
        .with_attack(
            AttackConfig::intercept_resend(BasisStrategy::AlwaysX).on(&[ChannelId::TpToBob]),
        )
        .with_decoys(2);
    for p in ProtocolKind::ALL {
        let a = run_session_with_id(p, &input(3, 12, 4), &cfg, 7)
            .unwrap()
            .to_json()
            .unwrap();
        let b = run_session_with_id(p, &input(3, 12, 4), &cfg, 7)
            .unwrap()
            .to_json()
            .unwrap();
        assert_eq!(a, b);
        let c = run_session_with_id(p, &input(3, 12, 4), &cfg, 8)
            .unwrap()
            .to_json()
            .unwrap();
        assert_ne!(a, c);
        let back = qpc::runtime::Transcript::from_json(&a).unwrap();
        assert_eq!(back.to_json().unwrap(), a);
        let v: serde_json::Value = serde_json::from_str(&a).unwrap();
        for key in [
            "schema",
            "session_id",
            "protocol",
            "n_bits",
            "x_hex",
            "y_hex",
            "config",
            "events",
            "result",
        ] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["schema"], "v1");
        assert_eq!(v["x_hex"], "3");
        assert_eq!(v["y_hex"], "c");
    }
}

#[test]
fn tampered_result_is_rejected() {
    let t = run_session(
        ProtocolKind::Ghz,
        &input(1, 1, 2),
        &SessionConfig::default(),
    )
    .unwrap();
    let json = t
        .to_json()
        .unwrap()
        .replace("\"result\": \"EQUAL\"", "\"result\": \"ABORTED\"");
    assert!(qpc::runtime::Transcript::from_json(&json).is_err());
}

/// `|k − n p| ≤ 3 √(n p (1 − p))`.
fn within_3_sigma(k: usize, n: usize, p: f64) -> bool {
    let n = n as f64;
    (k as f64 - n * p).abs() <= 3.0 * (n * p * (1.0 - p)).sqrt()
}

#[test]
fn ghz_key_bits_are_uniform_at_fixed_inputs() {
    const N: usize = 10_000;
    let cfg = SessionConfig::default().with_seed(5).with_decoys(1);
    let mut ones = [0usize; 2];
    for sid in 0..N as u64 {
        let t = run_session_with_id(ProtocolKind::Ghz, &input(0b10, 0b10, 2), &cfg, sid).unwrap();
        let k = t.bits("K_A").unwrap();
        ones[0] += k.get(0) as usize;
        ones[1] += k.get(1) as usize;
    }
    assert!(ones.iter().all(|&k| within_3_sigma(k, N, 0.5)), "{ones:?}");
}

#[test]
fn chi_readouts_and_types_are_balanced() {
    const N: usize = 4_000;
    let cfg = SessionConfig::default().with_seed(8).with_decoys(0);
    let (mut ra, mut rt) = (0, 0);
    for sid in 0..N as u64 {
        let t = run_session_with_id(ProtocolKind::Chi, &input(1, 0, 1), &cfg, sid).unwrap();
        ra += t.bits("R_a").unwrap().get(0) as usize;
        rt += t.bits("R_t").unwrap().get(0) as usize;
    }
    assert!(within_3_sigma(ra, N, 0.5));
    assert!(within_3_sigma(rt, N, 0.5));
}

#[test]
fn chi_attack_on_bobs_channel_spares_alice() {
    const N: usize = 4_000;
    let cfg = SessionConfig::default()
        .with_seed(21)
        .with_decoys(4)
        .with_attack(
            AttackConfig::intercept_resend(BasisStrategy::AlwaysZ).on(&[ChannelId::TpToBob]),
        );
    let mut bob_failed = 0;
    for sid in 0..N as u64 {
        let t = run_session_with_id(ProtocolKind::Chi, &input(2, 3, 2), &cfg, sid).unwrap();
        for e in &t.events {
            if let EventKind::Check { label, report, .. } = &e.kind {
                match label.as_str() {
                    "decoy_check:S_A" => assert!(report.passed),
                    "decoy_check:S_B" => bob_failed += usize::from(!report.passed),
                    _ => {}
                }
            }
        }
    }
    assert!(
        within_3_sigma(bob_failed, N, 1.0 - 0.75f64.powi(4)),
        "{bob_failed}"
    );
}

#[test]
fn single_bit_and_wide_inputs() {
    let cfg = SessionConfig::default();
    for p in ProtocolKind::ALL {
        let verdicts: Vec<Verdict> = [(0, 0), (0, 1), (1, 0), (1, 1)]
            .iter()
            .map(|&(x, y)| run_session(p, &input(x, y, 1), &cfg).unwrap().result)
            .collect();
        assert_eq!(
            verdicts,
            [
                Verdict::Equal,
                Verdict::NotEqual,
                Verdict::NotEqual,
                Verdict::Equal
            ]
        );
        let big = u64::MAX;
        assert_eq!(
            run_session(p, &input(big, big, 64), &cfg).unwrap().result,
            Verdict::Equal
        );
        assert_eq!(
            run_session(p, &input(big, big - 1, 64), &cfg)
                .unwrap()
                .result,
            Verdict::NotEqual
        );
    }
}

#[test]
fn swap_codes_are_uniform() {
    const N: usize = 4_000;
    let mut counts = [0usize; 4];
    for sid in 0..N as u64 {
        let t = run_session_with_id(
            ProtocolKind::Swap,
            &input(0, 0, 2),
            &SessionConfig::default(),
            sid,
        )
        .unwrap();
        let b = t.bits("R_A").unwrap();
        counts[(b.get(0) | b.get(1) << 1) as usize] += 1;
        assert_eq!(t.bits("R_A"), t.bits("T_A"));
        assert_eq!(t.bits("R_B"), t.bits("T_B"));
    }
    assert!(
        counts.iter().all(|&k| within_3_sigma(k, N, 0.25)),
        "{counts:?}"
    );
}
