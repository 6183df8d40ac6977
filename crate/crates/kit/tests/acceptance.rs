//! End-to-end acceptance suite. Each test prints a single `pass` line on
//! success; a failed assertion prints the `fail` line before panicking.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::time::Instant;

use acvp_core::bignum::BigInt;
use acvp_core::crypto::rsa::{
    populate_private_key, rsa_decrypt, rsa_encrypt, rsa_sign, rsa_verify, RsaPaddingMode,
    RsaPrivateKey,
};
use acvp_core::crypto::sha2::DigestVariant;
use acvp_core::generator::TargetSpec;
use acvp_core::model::{
    expand_groups, parse_vector_set, resolve_field, serialize_vector_set, VectorSet,
};
use acvp_core::rng::SplitMix64;
use acvp_core::subspec::validate_schema;
use acvp_kit::fuzz::{fuzz_loop, FuzzConfig};
use acvp_kit::protocol::{spawn_runner, RunnerFailure};
use acvp_kit::validator::{validate_library, ValidateConfig};

const REF_RUNNER: &str = env!("CARGO_BIN_EXE_acvp-ref-runner");
const FIXTURE_RUNNER: &str = env!("CARGO_BIN_EXE_acvp-fixture-runner");
const ACVPKIT: &str = env!("CARGO_BIN_EXE_acvpkit");

fn fixtures_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn fixture_sets() -> Vec<(PathBuf, VectorSet)> {
    let mut sets = Vec::new();
    for dir in ["vectors", "schema"] {
        let mut paths: Vec<PathBuf> = std::fs::read_dir(fixtures_dir().join(dir))
            .unwrap()
            .map(|e| e.unwrap().path())
            .collect();
        paths.sort();
        for path in paths {
            let text = std::fs::read_to_string(&path).unwrap();
            if let Ok(vs) = parse_vector_set(&text) {
                sets.push((path, vs));
            }
        }
    }
    sets
}

struct Criterion {
    label: &'static str,
    passed: bool,
}

impl Criterion {
    fn new(label: &'static str) -> Self {
        Criterion { label, passed: false }
    }
    fn pass(mut self) {
        self.passed = true;
        println!("criterion {}: pass", self.label);
    }
}

impl Drop for Criterion {
    fn drop(&mut self) {
        if !self.passed {
            println!("criterion {}: fail", self.label);
        }
    }
}

#[test]
fn criterion_1_round_trip() {
    let c = Criterion::new("1 (fixture round-trip)");
    let start = Instant::now();
    let sets = fixture_sets();
    assert!(sets.len() >= 10, "need at least 10 fixture sets, found {}", sets.len());

    let algorithms: BTreeSet<&str> = sets.iter().map(|(_, vs)| vs.algorithm.as_str()).collect();
    for family in ["SHA2-256", "ACVP-AES-GCM", "RSA", "bn", "ECDSA"] {
        assert!(algorithms.contains(family), "fixture corpus lacks {family}");
    }

    for (path, vs) in &sets {
        let text = serialize_vector_set(vs);
        let reparsed = parse_vector_set(&text)
            .unwrap_or_else(|e| panic!("{}: reparse failed: {e}", path.display()));
        assert_eq!(&reparsed, vs, "{}: round trip not identical", path.display());
    }
    assert!(start.elapsed().as_secs_f64() < 1.0, "round trip exceeded 1 s");
    c.pass();
}

#[test]
fn criterion_2_known_answers() {
    let c = Criterion::new("2 (known-answer suite)");
    let start = Instant::now();
    let vectors = fixtures_dir().join("vectors");
    let expected = fixtures_dir().join("expected");
    let mut pairs = Vec::new();
    let mut case_total = 0usize;
    for entry in std::fs::read_dir(&vectors).unwrap() {
        let path = entry.unwrap().path();
        let exp = expected.join(path.file_name().unwrap());
        assert!(exp.exists(), "no expected file for {}", path.display());
        pairs.push((path, exp));
    }
    pairs.sort();
    let report = validate_library(
        &pairs,
        REF_RUNNER,
        &[],
        &ValidateConfig { timeout_ms: 20_000 },
    )
    .unwrap();
    let counts = report.counts();
    case_total += counts.get("pass").copied().unwrap_or(0);
    assert!(report.overall_pass(), "validator failures:\n{}", report.to_text());
    assert!(case_total >= 150, "expected at least 150 KAT cases, got {case_total}");
    assert!(start.elapsed().as_secs() < 30, "KAT suite exceeded 30 s");
    c.pass();
}

fn tiny_key() -> RsaPrivateKey {
    RsaPrivateKey {
        n: Some(BigInt::from_u64(0x0D)),
        e: Some(BigInt::from_u64(0x03)),
        d: Some(BigInt::from_u64(0x07)),
        ..Default::default()
    }
}

fn kat_key_1024() -> (BigInt, BigInt, BigInt) {
    // pull the frozen 1024-bit key out of the fixture corpus
    let text = std::fs::read_to_string(fixtures_dir().join("vectors/rsa_kat.json")).unwrap();
    let vs = parse_vector_set(&text).unwrap();
    let grab = |tc_id, name| {
        let v = resolve_field(&vs, tc_id, name).unwrap().unwrap();
        BigInt::from_raw(&v.as_bytes().unwrap(), false)
    };
    // tcId 11 sits in the pss sigGen group that shares the 1024-bit key
    (grab(11, "n"), grab(11, "e"), grab(11, "d"))
}

#[test]
fn criterion_3_bug_class_regressions() {
    let c = Criterion::new("3 (bug-class regressions)");

    // (a) one-byte modulus: every operation returns a clean error
    let key = tiny_key();
    let n = key.n.clone().unwrap();
    let e = key.e.clone().unwrap();
    let modes = [
        RsaPaddingMode::Pkcs1V15,
        RsaPaddingMode::Pss { salt_len: 32, salt: None },
        RsaPaddingMode::Oaep { label: vec![], seed: None },
    ];
    for mode in &modes {
        assert!(rsa_sign(mode, DigestVariant::Sha2_256, &key, b"x").is_err());
        // verify is total: out-of-range parameters still yield a verdict
        // or a clean error, never a panic
        let _ = rsa_verify(mode, DigestVariant::Sha2_256, &n, &e, b"x", &[0x05]);
        assert!(rsa_encrypt(mode, DigestVariant::Sha2_256, &n, &e, b"x").is_err());
        assert!(rsa_decrypt(mode, DigestVariant::Sha2_256, &key, &[0x05]).is_err());
    }

    // (b) pss verify with salt_len > emLen - hLen - 2 cleanly rejects
    let (big_n, big_e, big_d) = kat_key_1024();
    let em_len = 128;
    let h_len = 32;
    let mode = RsaPaddingMode::Pss { salt_len: em_len - h_len - 1, salt: None };
    let verdict =
        rsa_verify(&mode, DigestVariant::Sha2_256, &big_n, &big_e, b"msg", &[0xAB; 128]);
    assert_eq!(verdict, Ok(false), "oversized salt length must reject, not fail");

    // (c) populate with inconsistent (n, e, d) errors within the bound
    let mut wrong_d = big_d.clone();
    wrong_d = wrong_d.add(&BigInt::from_u64(2));
    let partial = RsaPrivateKey {
        n: Some(big_n.clone()),
        e: Some(big_e.clone()),
        d: Some(wrong_d),
        ..Default::default()
    };
    assert!(populate_private_key(&partial).is_err());

    // (d) negative raw round trip preserves the sign
    let v = BigInt::from_raw(&[0x8F, 0x01, 0x00, 0x42], true);
    assert_eq!(v.to_raw(), (vec![0x8F, 0x01, 0x00, 0x42], true));
    assert!(v.is_negative());

    // (e) mod_exp is total over fuzzed inputs
    let mut rng = SplitMix64::new(0x3E5);
    for _ in 0..100_000 {
        let mut buf = [0u8; 24];
        rng.fill_bytes(&mut buf);
        let b = BigInt::from_raw(&buf[0..8], buf[0] & 1 == 1);
        let e = BigInt::from_raw(&buf[8..14], false);
        let m = BigInt::from_raw(&buf[14..24], buf[15] & 1 == 1);
        let _ = b.mod_exp(&e, &m);
    }
    c.pass();
}

#[test]
fn criterion_4_hybrid_fuzzing_efficacy() {
    let c = Criterion::new("4 (hybrid-fuzzing efficacy)");
    let start = Instant::now();
    let targets = [
        "oaep.decode.pad_present",
        "rsa.key.valid",
        "rsa.pss.encode.salt_ok",
        "rsa.pss.encode.interlink_ok",
    ];
    let hard = ["rsa.key.valid", "rsa.pss.encode.interlink_ok"];

    let mut on = FuzzConfig::new(0xC0FFEE, 10_000, TargetSpec::Rsa, true);
    on.timeout_ms = 20_000;
    let (_, stats_on) = fuzz_loop(&on, REF_RUNNER, &[]).unwrap();
    for probe in targets {
        assert!(
            stats_on.branches.contains(probe),
            "restrictions ON missed `{probe}` in {} iterations",
            stats_on.iterations
        );
    }

    let mut off = FuzzConfig::new(0xC0FFEE, 10_000, TargetSpec::Rsa, false);
    off.timeout_ms = 20_000;
    let (_, stats_off) = fuzz_loop(&off, REF_RUNNER, &[]).unwrap();
    for probe in hard {
        assert!(
            !stats_off.branches.contains(probe),
            "restrictions OFF unexpectedly reached `{probe}`"
        );
    }
    assert!(start.elapsed().as_secs() < 300, "efficacy run exceeded 5 min");
    c.pass();
}

#[test]
fn criterion_5_fuzz_determinism() {
    let c = Criterion::new("5 (fuzz determinism)");
    let base = std::env::temp_dir().join(format!("acvp-determinism-{}", std::process::id()));
    let dirs = [base.join("a"), base.join("b")];
    for dir in &dirs {
        let status = std::process::Command::new(ACVPKIT)
            .args([
                "fuzz",
                "--runner",
                REF_RUNNER,
                "--spec",
                "rsa",
                "--seed",
                "42",
                "--budget",
                "1500",
                "--restrictions",
                "--out",
            ])
            .arg(dir)
            .status()
            .unwrap();
        assert!(status.success());
    }
    for file in ["stats.json", "coverage.json"] {
        let a = std::fs::read(dirs[0].join(file)).unwrap();
        let b = std::fs::read(dirs[1].join(file)).unwrap();
        assert_eq!(a, b, "{file} differs between identical runs");
    }
    // corpus files are part of the run artifacts too
    let list = |d: &Path| {
        let mut v: Vec<_> = std::fs::read_dir(d.join("corpus"))
            .unwrap()
            .map(|e| e.unwrap().path())
            .collect();
        v.sort();
        v
    };
    let (la, lb) = (list(&dirs[0]), list(&dirs[1]));
    assert_eq!(la.len(), lb.len());
    for (pa, pb) in la.iter().zip(&lb) {
        assert_eq!(std::fs::read(pa).unwrap(), std::fs::read(pb).unwrap());
    }
    let _ = std::fs::remove_dir_all(&base);
    c.pass();
}

fn assert_no_zombie(pid: u32) {
    // after a failure the supervisor must have waited on the child; the
    // pid may be gone entirely, but it must not linger as a zombie
    if let Ok(stat) = std::fs::read_to_string(format!("/proc/{pid}/stat")) {
        // the state field follows the parenthesized command name
        let state = stat
            .rsplit(')')
            .next()
            .and_then(|rest| rest.trim_start().chars().next());
        assert_ne!(state, Some('Z'), "child {pid} left as a zombie");
    }
}

#[test]
fn criterion_6_misbehaving_runners() {
    let c = Criterion::new("6 (misbehaving-runner robustness)");
    let demo = fixtures_dir().join("vectors/sha2_256_shared_demo.json");
    let vs = parse_vector_set(&std::fs::read_to_string(demo).unwrap()).unwrap();

    let cases: [(&str, fn(&RunnerFailure) -> bool); 5] = [
        ("crash", |f| matches!(f, RunnerFailure::Crash { .. })),
        ("hang", |f| matches!(f, RunnerFailure::Timeout { .. })),
        ("garbage", |f| matches!(f, RunnerFailure::Protocol { .. })),
        ("partial", |f| {
            matches!(f, RunnerFailure::Protocol { .. } | RunnerFailure::Crash { .. })
        }),
        ("huge", |f| matches!(f, RunnerFailure::Protocol { .. })),
    ];
    for (mode, check) in cases {
        let mut session =
            spawn_runner(FIXTURE_RUNNER, &[mode.to_string()], 1_000, false).unwrap();
        let pid = session.child_pid();
        let failure = match session.run_vector_set(&vs) {
            Err(f) => f,
            Ok(reply) => panic!("mode {mode}: expected a failure, got {reply:?}"),
        };
        assert!(check(&failure), "mode {mode}: wrong failure kind: {failure}");
        drop(session);
        assert_no_zombie(pid);
    }

    // well-behaved fixture modes still complete
    let mut session = spawn_runner(FIXTURE_RUNNER, &["echo".to_string()], 5_000, false).unwrap();
    session.run_vector_set(&vs).unwrap();
    session.close();
    c.pass();
}

#[test]
fn criterion_7_format_extension_equivalence() {
    let c = Criterion::new("7 (format-extension equivalence)");
    let mut shared_field_sets = 0;
    for (path, vs) in fixture_sets() {
        if !validate_schema(&vs).is_empty() {
            // the corpus keeps one deliberately invalid set for lint tests
            continue;
        }
        let expanded = expand_groups(&vs)
            .unwrap_or_else(|e| panic!("{}: expand failed: {e}", path.display()));
        assert!(
            expanded.groups.iter().all(|g| g.subgroups.is_empty()),
            "{}: expanded set still has subgroups",
            path.display()
        );
        assert!(
            expanded.shared_fields.is_empty()
                && expanded.groups.iter().all(|g| g.shared_fields.is_empty()),
            "{}: expanded set still has shared fields",
            path.display()
        );
        assert!(
            validate_schema(&expanded).is_empty(),
            "{}: expanded set fails schema validation",
            path.display()
        );
        let uses_sharing = !vs.shared_fields.is_empty()
            || vs.groups.iter().any(|g| {
                !g.shared_fields.is_empty() || !g.subgroups.is_empty() || g.test_type.is_some()
            });
        if uses_sharing {
            shared_field_sets += 1;
        }
        for group in &expanded.groups {
            for case in &group.tests {
                for (name, literal) in &case.fields {
                    let resolved = resolve_field(&vs, case.tc_id, name)
                        .unwrap()
                        .unwrap_or_else(|| {
                            panic!("{}: tc {} field {name} unresolved", path.display(), case.tc_id)
                        });
                    assert_eq!(resolved, literal, "{}: tc {}", path.display(), case.tc_id);
                }
            }
        }
    }
    assert!(shared_field_sets > 0, "corpus has no shared-field fixtures");
    c.pass();
}

#[test]
fn criterion_8_bignum_oracle_equivalence() {
    let c = Criterion::new("8 (bignum oracle equivalence)");

    // randomized word-size sweep against u128/i128 arithmetic
    let mut rng = SplitMix64::new(0xB16);
    for _ in 0..100_000 {
        let a = rng.next_u64();
        let b = rng.next_u64() | 1;
        let neg_a = rng.next_u64() & 1 == 1;
        let neg_b = rng.next_u64() & 1 == 1;
        let ia = if neg_a { -(a as i128) } else { a as i128 };
        let ib = if neg_b { -(b as i128) } else { b as i128 };
        let ba = BigInt::from_raw(&a.to_be_bytes(), neg_a && a != 0);
        let bb = BigInt::from_raw(&b.to_be_bytes(), neg_b);

        assert_eq!(to_i128(&ba.add(&bb)), ia + ib);
        assert_eq!(to_i128(&ba.sub(&bb)), ia - ib);
        let prod = ba.mul(&bb);
        let (mag, neg) = prod.to_raw();
        let expected_mag = a as u128 * b as u128;
        assert_eq!(u128_from_be(&mag), expected_mag);
        assert_eq!(neg, expected_mag != 0 && neg_a != neg_b && a != 0);
        // euclidean remainder: always in [0, |m|)
        let m = ia.rem_euclid(ib.abs());
        assert_eq!(to_i128(&ba.mod_reduce(&bb.abs_clone()).unwrap()), m);
        assert_eq!(
            to_i128(&ba.gcd(&bb)),
            gcd_u128(a as u128, b as u128) as i128
        );
    }

    // exhaustive small-domain mod_exp against brute force
    for b in 0u64..32 {
        for e in 0u64..32 {
            for m in 1u64..64 {
                let got = BigInt::from_u64(b)
                    .mod_exp(&BigInt::from_u64(e), &BigInt::from_u64(m))
                    .unwrap();
                let mut want = 1u64 % m;
                for _ in 0..e {
                    want = want * b % m;
                }
                assert_eq!(to_i128(&got), want as i128, "b={b} e={e} m={m}");
            }
        }
    }
    c.pass();
}

fn to_i128(v: &BigInt) -> i128 {
    let (bytes, neg) = v.to_raw();
    let mag = u128_from_be(&bytes) as i128;
    if neg {
        -mag
    } else {
        mag
    }
}

fn u128_from_be(bytes: &[u8]) -> u128 {
    let mut out = 0u128;
    for &b in bytes {
        out = (out << 8) | b as u128;
    }
    out
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

trait AbsClone {
    fn abs_clone(&self) -> BigInt;
}

impl AbsClone for BigInt {
    fn abs_clone(&self) -> BigInt {
        let (bytes, _) = self.to_raw();
        BigInt::from_raw(&bytes, false)
    }
}
