use std::net::UdpSocket;
use std::thread;

use mibwarden::bench::{train, LearnerParams};
use mibwarden::stream::{serve_udp, stream_classify, StreamStats};
use mibwarden_core::collector::COUNTER64_MODULUS;
use mibwarden_core::{synthesize, DeltaConfig, LearnerId, RuleModel, SynthProfile};

/// PART model on the default corpus with Normal moved to the origin, so a
/// zero delta vector sits inside the Normal region.
fn normal_centered_model() -> RuleModel {
    let mut profile = SynthProfile::default();
    for c in profile.centers[0].iter_mut() {
        *c = 0.0;
    }
    let ds = synthesize(&profile, 11).unwrap();
    train(LearnerId::Part, &ds, &LearnerParams::default()).unwrap()
}

fn line(model: &RuleModel, t: u64, v: u64) -> String {
    let fields: Vec<String> = model.attributes.iter().map(|n| format!("{n}={v}")).collect();
    format!("t={t} {}\n", fields.join(" "))
}

fn classify(model: &RuleModel, input: &str, config: DeltaConfig) -> (String, StreamStats) {
    let mut out = Vec::new();
    let stats = stream_classify(input.as_bytes(), model, config, &mut out).unwrap();
    (String::from_utf8(out).unwrap(), stats)
}

#[test]
fn three_snapshots_give_two_classifications() {
    let m = normal_centered_model();
    let input = [line(&m, 0, 100), line(&m, 30, 100), line(&m, 60, 100)].concat();
    let (out, stats) = classify(&m, &input, DeltaConfig::new(30));
    assert_eq!(out, "t=30 class=Normal\nt=60 class=Normal\n");
    assert_eq!(stats, StreamStats { classified: 2, skipped: 0, degraded: 0 });
}

#[test]
fn malformed_middle_line_is_skipped() {
    let m = normal_centered_model();
    let input = [line(&m, 0, 100), "t=30 ifInOctets=oops\n".to_string(), line(&m, 60, 100)].concat();
    let (out, stats) = classify(&m, &input, DeltaConfig::new(30));
    assert_eq!(out, "t=60 class=Normal\n");
    assert_eq!(stats.classified, 1);
    assert_eq!(stats.skipped, 1);
    // The gap spans two intervals, within the default allowance of three.
    assert_eq!(stats.degraded, 0);
}

#[test]
fn blank_and_comment_lines_are_ignored() {
    let m = normal_centered_model();
    let input = ["# header\n".to_string(), line(&m, 0, 5), "\n".into(), line(&m, 10, 5)].concat();
    let (out, stats) = classify(&m, &input, DeltaConfig::new(10));
    assert_eq!(out, "t=10 class=Normal\n");
    assert_eq!(stats.skipped, 0);
}

#[test]
fn out_of_order_and_out_of_range_snapshots_are_skipped() {
    let m = normal_centered_model();
    let input = [line(&m, 30, 1), line(&m, 20, 1), line(&m, 60, 1 << 32), line(&m, 60, 1)].concat();
    let (out, stats) = classify(&m, &input, DeltaConfig::new(30));
    assert_eq!(out, "t=60 class=Normal\n");
    assert_eq!(stats.skipped, 2);
    let cfg = DeltaConfig { wrap_modulus: COUNTER64_MODULUS, ..DeltaConfig::new(30) };
    let (out, _) = classify(&m, &[line(&m, 0, 1 << 40), line(&m, 30, 1 << 40)].concat(), cfg);
    assert_eq!(out, "t=30 class=Normal\n");
}

#[test]
fn long_gaps_are_flagged_but_classified() {
    let m = normal_centered_model();
    let input = [line(&m, 0, 7), line(&m, 500, 7)].concat();
    let (out, stats) = classify(&m, &input, DeltaConfig::new(30));
    assert_eq!(out, "t=500 class=Normal\n");
    assert_eq!(stats.degraded, 1);
}

#[test]
fn udp_datagrams_are_classified() {
    let m = normal_centered_model();
    let server = UdpSocket::bind("127.0.0.1:0").unwrap();
    let addr = server.local_addr().unwrap();
    let lines = [line(&m, 0, 9), line(&m, 30, 9), line(&m, 60, 9)];
    let sender = thread::spawn(move || {
        let client = UdpSocket::bind("127.0.0.1:0").unwrap();
        for l in &lines {
            client.send_to(l.as_bytes(), addr).unwrap();
        }
    });
    let mut out = Vec::new();
    let stats = serve_udp(&server, &m, DeltaConfig::new(30), &mut out, Some(3)).unwrap();
    sender.join().unwrap();
    assert_eq!(String::from_utf8(out).unwrap(), "t=30 class=Normal\nt=60 class=Normal\n");
    assert_eq!(stats.classified, 2);
}
