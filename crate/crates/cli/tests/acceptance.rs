//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde_json::Value;

use smlab_core::census::{
    enumerate_profiles, profile_at, run_census, sample_at, CensusMode, CensusOptions, Theorem, TheoremStatus,
};
use smlab_core::conditions::{classify, is_max_prop, is_max_rou, Condition};
use smlab_core::fixtures::{gen_extremal, gen_fixture};
use smlab_core::stability::{enumerate_stable, is_usm};
use smlab_core::{run_da, PreferenceProfile, ProposingSide, Side};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn smlab(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_smlab")).args(args).current_dir(root()).output().expect("spawn smlab");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).expect("utf-8 output"))
}

fn smlab_json(args: &[&str]) -> Value {
    let (code, out) = smlab(args);
    assert_eq!(code, 0, "smlab {args:?} exited {code}");
    serde_json::from_str(&out).expect("json output")
}

/// Median wall time of `f` over a few runs.
fn timed(mut f: impl FnMut()) -> Duration {
    let mut v: Vec<Duration> = (0..15)
        .map(|_| {
            let t = Instant::now();
            f();
            t.elapsed()
        })
        .collect();
    v.sort();
    v[v.len() / 2]
}

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok { Ok(()) } else { Err(msg.into()) }
}

const SIDES: [ProposingSide; 2] = [ProposingSide::Men, ProposingSide::Women];

fn criterion_1() -> Outcome {
    let da = smlab_json(&["da", "fixtures/example8.prof", "--proposing", "men", "--json"]);
    ensure(da["proposal_count"] == 13, format!("proposal_count {}", da["proposal_count"]))?;
    let mp = smlab_json(&["check", "fixtures/example8.prof", "--condition", "m-maxprop"]);
    let mr = smlab_json(&["check", "fixtures/example8.prof", "--condition", "m-maxrou"]);
    ensure(mp["verdict"] == true, "m-maxprop not true")?;
    ensure(mr["verdict"] == false, "m-maxrou not false")?;
    let p = gen_fixture("example-8").unwrap();
    let t = timed(|| {
        let o = run_da(&p, ProposingSide::Men);
        assert_eq!(o.proposal_count, 13);
        assert!(is_max_prop(&p, ProposingSide::Men).verdict);
        assert!(!is_max_rou(&p, ProposingSide::Men).verdict);
    });
    ensure(t < Duration::from_millis(1), format!("took {t:?}"))?;
    Ok(format!("13 proposals, m-maxprop true, m-maxrou false ({t:?})"))
}

fn criterion_2() -> Outcome {
    let da = smlab_json(&["da", "fixtures/example12.prof", "--proposing", "men", "--json"]);
    ensure(da["proposal_count"] == 6, format!("proposal_count {}", da["proposal_count"]))?;
    for (cond, want) in [("usm", true), ("spc", false), ("m-maxprop", false)] {
        let r = smlab_json(&["check", "fixtures/example12.prof", "--condition", cond]);
        ensure(r["verdict"] == want, format!("{cond} verdict {}", r["verdict"]))?;
    }
    let p = gen_fixture("example-12").unwrap();
    let t = timed(|| {
        assert_eq!(run_da(&p, ProposingSide::Men).proposal_count, 6);
        assert!(is_usm(&p).unique);
        assert!(!smlab_core::conditions::is_spc(&p).verdict);
        assert!(!is_max_prop(&p, ProposingSide::Men).verdict);
    });
    ensure(t < Duration::from_millis(1), format!("took {t:?}"))?;
    Ok(format!("6 proposals, usm true, spc false, m-maxprop false ({t:?})"))
}

fn criterion_3() -> Outcome {
    for n in 2..=10usize {
        let text = smlab(&["gen", "--family", "extremal", "--n", &n.to_string()]).1;
        let path = std::env::temp_dir().join(format!("smlab-extremal-{n}-{}.prof", std::process::id()));
        std::fs::write(&path, text).unwrap();
        let da = smlab_json(&["da", path.to_str().unwrap(), "--proposing", "men", "--json"]);
        std::fs::remove_file(&path).ok();
        ensure(da["proposal_count"] == n * n - n + 1, format!("n = {n}: proposals {}", da["proposal_count"]))?;
        ensure(da["round_count"] == n * n - 2 * n + 2, format!("n = {n}: rounds {}", da["round_count"]))?;
    }
    let t = timed(|| {
        for n in 2..=10usize {
            let o = run_da(&gen_extremal(n).unwrap(), ProposingSide::Men);
            assert_eq!((o.proposal_count, o.round_count), (n * n - n + 1, n * n - 2 * n + 2));
        }
    });
    ensure(t < Duration::from_millis(10), format!("took {t:?}"))?;
    Ok(format!("n = 2..10 attain n^2-n+1 proposals and n^2-2n+2 rounds ({t:?})"))
}

/// Mismatches between the structural verdicts and the deferred-acceptance
/// counts on one profile.
fn definition_mismatches(p: &PreferenceProfile) -> usize {
    SIDES
        .into_iter()
        .map(|s| {
            let o = run_da(p, s);
            usize::from(is_max_prop(p, s).verdict != o.is_max_proposals())
                + usize::from(is_max_rou(p, s).verdict != o.is_max_rounds())
        })
        .sum()
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let mut bad: usize = (0..46_656u128).into_par_iter().map(|c| definition_mismatches(&profile_at(3, c))).sum();
    let mut hits = 0usize;
    for n in 4..=6 {
        bad += (0..100_000u64).into_par_iter().map(|i| definition_mismatches(&sample_at(n, 2024, i))).sum::<usize>();
        hits += (0..100_000u64)
            .into_par_iter()
            .filter(|&i| is_max_prop(&sample_at(n, 2024, i), ProposingSide::Men).verdict)
            .count();
    }
    let t = start.elapsed();
    ensure(bad == 0, format!("{bad} mismatches"))?;
    ensure(t < Duration::from_secs(120), format!("took {t:?}"))?;
    Ok(format!("0 mismatches over 46656 + 3 x 100000 profiles, {hits} sampled m-MaxProp hits ({t:.1?})"))
}

fn criterion_5() -> Outcome {
    let t = run_census(3, CensusMode::Exhaustive, CensusOptions::default()).map_err(|e| e.to_string())?;
    ensure(t.total == 46_656, "wrong total")?;
    let required = [
        Theorem::MaxrouImpliesMaxprop,
        Theorem::MaxpropImpliesUsm,
        Theorem::MaxrouImpliesUsm,
        Theorem::SpcMaxpropDisjoint,
        Theorem::MWMaxpropDisjoint,
        Theorem::N3MaxpropEqMaxrou,
        Theorem::SingleProposalReceiver,
        Theorem::ProposalRoundBounds,
        Theorem::RoundSizesNonincreasing,
        Theorem::StableExtremesOpposition,
        Theorem::MaxpropTraceStructure,
        Theorem::MaxpropPositionStructure,
    ];
    for th in required {
        match t.theorem(th) {
            Some(TheoremStatus::Holds { checked }) if *checked > 0 => {}
            other => return Err(format!("{}: {other:?}", th.id())),
        }
    }
    let bad: Vec<_> = t.violations().map(|e| e.id.clone()).collect();
    ensure(bad.is_empty(), format!("violations: {bad:?}"))?;
    ensure(t.count_where(&[Condition::Spc, Condition::MMaxProp]) == 0, "SPC meets m-MaxProp")?;
    ensure(t.count_where(&[Condition::MMaxProp, Condition::WMaxProp]) == 0, "m-MaxProp meets w-MaxProp")?;
    let (code, _) = smlab(&["verify", "--n", "3"]);
    ensure(code == 0, format!("verify --n 3 exited {code}"))?;
    Ok(format!("{} checks hold on all 46656 profiles, 0 violations", t.theorems.len()))
}

fn criterion_6() -> Outcome {
    let profiles: Vec<PreferenceProfile> = enumerate_profiles(2).unwrap().collect();
    ensure(profiles.len() == 16, "expected 16 profiles")?;
    let labels: Vec<_> = profiles.iter().map(|p| classify(p).label).collect();
    let set = |f: &dyn Fn(&smlab_core::RegionLabel) -> bool| -> Vec<usize> {
        (0..16).filter(|&i| f(&labels[i])).collect()
    };
    let usm = set(&|l| l.usm);
    let spc = set(&|l| l.spc);
    let ncc = set(&|l| l.ncc == Some(true));
    ensure(usm == spc && spc == ncc, "USM, SPC and NCC differ")?;
    ensure(set(&|l| l.m_max_prop) == set(&|l| l.m_max_rou), "m-MaxProp != m-MaxRou")?;
    ensure(set(&|l| l.w_max_prop) == set(&|l| l.w_max_rou), "w-MaxProp != w-MaxRou")?;
    let maxprop = set(&|l| l.m_max_prop || l.w_max_prop);
    ensure(maxprop.iter().all(|i| spc.contains(i)) && maxprop.len() < spc.len(), "MaxProp not strictly inside SPC")?;
    let gap = classify(&gen_fixture("spc-not-maxprop").unwrap()).label;
    ensure(gap.spc && !gap.m_max_prop && !gap.w_max_prop, "gap fixture is not SPC-but-not-MaxProp")?;
    for (p, l) in profiles.iter().zip(&labels) {
        let men_share = p.row(Side::Man, 0)[0] == p.row(Side::Man, 1)[0];
        let women_share = p.row(Side::Woman, 0)[0] == p.row(Side::Woman, 1)[0];
        ensure(l.m_max_prop == men_share, "m-MaxProp is not 'men share a top'")?;
        ensure(
            (l.m_max_prop && l.w_max_prop) == (men_share && women_share),
            "m-MaxProp and w-MaxProp is not 'both sides share a top'",
        )?;
    }
    Ok(format!("|USM| = |SPC| = |NCC| = {}, |MaxProp| = {} strictly inside", usm.len(), maxprop.len()))
}

fn usm_mismatch(p: &PreferenceProfile) -> bool {
    is_usm(p).unique != (enumerate_stable(p).unwrap().len() == 1)
}

fn criterion_7() -> Outcome {
    let mut checked = 0usize;
    let mut bad = 0usize;
    for n in 1..=3 {
        let all: Vec<PreferenceProfile> = enumerate_profiles(n).unwrap().collect();
        checked += all.len();
        bad += all.par_iter().filter(|p| usm_mismatch(p)).count();
    }
    for n in 4..=5 {
        checked += 10_000;
        bad += (0..10_000u64).into_par_iter().filter(|&i| usm_mismatch(&sample_at(n, 77, i))).count();
    }
    ensure(bad == 0, format!("{bad} mismatches"))?;
    Ok(format!("is_usm agrees with stable enumeration on {checked} profiles"))
}

fn criterion_8() -> Outcome {
    let mut worst = 0.0f64;
    for n in 2..=512usize {
        let mut profiles = vec![gen_extremal(n).unwrap()];
        profiles.extend((0..4).map(|i| sample_at(n, 8, (n * 4 + i) as u64)));
        for p in &profiles {
            for s in SIDES {
                for r in [is_max_prop(p, s), is_max_rou(p, s)] {
                    let q = r.queries.ok_or("no query count")?;
                    ensure(q <= 8 * n, format!("{} used {q} lookups at n = {n}", r.condition))?;
                    worst = worst.max(q as f64 / n as f64);
                }
            }
        }
    }
    Ok(format!("max lookups / n = {worst:.2} over n = 2..512"))
}

fn criterion_9() -> Outcome {
    let pinned = std::fs::read(root().join("crates/cli/tests/data/census-n3-exhaustive.json")).map_err(|e| e.to_string())?;
    let (code, out) = smlab(&["census", "--n", "3", "--exhaustive"]);
    ensure(code == 0, format!("census exited {code}"))?;
    ensure(out.as_bytes() == pinned.as_slice(), "census output differs from the pinned file")?;
    let (_, again) = smlab(&["census", "--n", "3", "--exhaustive"]);
    ensure(again == out, "two runs differ")?;
    Ok(format!("{} bytes match the pinned n = 3 table", pinned.len()))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("maxprop-not-maxrou fixture reproduction", criterion_1),
        ("usm-not-spc fixture reproduction", criterion_2),
        ("extremal family attains both bounds", criterion_3),
        ("MaxProp/MaxRou agree with DA counts", criterion_4),
        ("theorem suite at n = 3", criterion_5),
        ("theorem suite at n = 2", criterion_6),
        ("USM agrees with stable enumeration", criterion_7),
        ("linear lookup bound", criterion_8),
        ("pinned n = 3 census", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            Err(e.downcast_ref::<String>().cloned().or(e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        match result {
            Ok(detail) => println!("PASS criterion {}: {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {}: {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
