//! Acceptance battery: one line per criterion, non-zero exit if any fails.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use copies::certify::{self, Verdict};
use copies::closures;
use copies::copy_engine::{self, CopyHandle, Membership, Subset};
use copies::point::window;
use copies::structures::{builtin, Rankedness, Shared, StructureId};
use copies::suite::{self, SuiteConfig, SUITE_STAGES};
use copies::typesets::{self, RankAnswer, TypeHandle};
use copies::{Error, FiniteSet, Point};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const LIMIT_1: Duration = Duration::from_secs(30);
const LIMIT_2: Duration = Duration::from_secs(120);
const LIMIT_3: Duration = Duration::from_secs(60);
const LIMIT_7: Duration = Duration::from_secs(120);

const COPY_DEPTH: usize = 8;
const COPY_CAP: usize = 2;
const COPY_BUDGET: u64 = 500;

type Outcome = Result<String, String>;

fn s(name: &str) -> Shared {
    builtin(name).expect("built-in structure")
}

fn pt(sh: &Shared, text: &str) -> Point {
    sh.parse_point(text).expect("point parses")
}

fn set(sh: &Shared, items: &[&str]) -> FiniteSet {
    items.iter().map(|t| pt(sh, t)).collect()
}

fn require(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn passes_copy_check(c: &CopyHandle) -> Result<(), String> {
    let cert = certify::check_copy(c, COPY_DEPTH, COPY_CAP, COPY_BUDGET);
    match &cert.verdict {
        Verdict::Pass => require(certify::replay_copy_check(&cert, c) == Ok(true), || {
            format!("{}: pass certificate does not replay", c.label())
        }),
        v => Err(format!(
            "{} on {}: {}",
            c.label(),
            c.structure().id(),
            serde_json::to_string(v).unwrap()
        )),
    }
}

fn within(limit: Duration, start: Instant) -> Result<(), String> {
    require(start.elapsed() <= limit, || {
        format!("took {:.1}s, limit {}s", start.elapsed().as_secs_f64(), limit.as_secs())
    })
}

/// Every constructor output on the five structures passes; the planted
/// set fails at F={-1}, x=-2.
fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    for name in ["dlo", "rado", "pureset", "equiv", "pairs"] {
        let sh = s(name);
        let u = copy_engine::copy_identity(&sh);
        let f = if name == "pairs" {
            set(&sh, &["{0,1}"])
        } else {
            FiniteSet::singleton(Point(0))
        };
        let e = window(10)
            .find(|&p| !f.contains(p) && sh.rankedness(&f, p) == Rankedness::Unranked)
            .expect("an unranked point");
        let mut copies = vec![u.clone()];
        copies.push(copy_engine::copy_through(&sh, &f, &u, false, 1).map_err(|e| e.to_string())?);
        copies.push(copy_engine::copy_through(&sh, &f, &u, true, 2).map_err(|e| e.to_string())?);
        copies.push(copy_engine::copy_avoiding(&sh, &f, &FiniteSet::singleton(e), 3).map_err(|e| e.to_string())?);
        for c in copies.iter_mut() {
            c.advance(SUITE_STAGES).map_err(|e| e.to_string())?;
        }
        let chain = copy_engine::descending_chain(&sh, &f, &u, 3, 10, SUITE_STAGES, 4).map_err(|e| e.to_string())?;
        copies.extend(chain);
        let base = if name == "pairs" {
            set(&sh, &["{0,1}", "{2,3}"])
        } else {
            FiniteSet::new()
        };
        let proper = copies[2].clone();
        let inside = proper.decided_in(COPY_DEPTH).difference(&f);
        let nf = f.union(&inside.iter().take(1).collect());
        let (nb, _) = copy_engine::neighbour_copy(&sh, &proper, &nf, &FiniteSet::new(), COPY_DEPTH, 7)
            .map_err(|e| e.to_string())?;
        copies.push(nb.advanced(SUITE_STAGES).map_err(|e| e.to_string())?);
        let mut pair = copy_engine::disjoint_pair(&sh, &base, 5).map_err(|e| e.to_string())?;
        pair.advance(SUITE_STAGES).map_err(|e| e.to_string())?;
        let (c, d) = pair.handles();
        copies.push(c);
        copies.push(d);
        if name == "dlo" {
            let sq = |v: &[u64]| copy_engine::powerset_embedding_dlo(&sh, &Subset::finite(v.iter().copied())).unwrap();
            copies.push(sq(&[0, 2]));
            copies.push(copy_engine::union_chain(&[sq(&[0]), sq(&[0, 1])], 10).map_err(|e| e.to_string())?);
            let sub = copy_engine::copy_through(&sh, &FiniteSet::new(), &sq(&[0]), false, 6)
                .and_then(|c| c.advanced(SUITE_STAGES))
                .map_err(|e| e.to_string())?;
            copies.push(sub);
        }
        for c in &copies {
            passes_copy_check(c)?;
            checked += 1;
        }
    }
    let dlo = s("dlo");
    let planted = copy_engine::planted_non_copy(&dlo).map_err(|e| e.to_string())?;
    let cert = certify::check_copy(&planted, COPY_DEPTH, 1, COPY_BUDGET);
    let expected = serde_json::json!({"F": ["-1"], "x": "-2"});
    match &cert.verdict {
        Verdict::Fail { counterexample } if *counterexample == expected => {}
        v => return Err(format!("planted non-copy: {}", serde_json::to_string(v).unwrap())),
    }
    require(certify::replay_copy_check(&cert, &planted) == Ok(true), || {
        "planted failure does not replay".into()
    })?;
    within(LIMIT_1, start)?;
    Ok(format!("{checked} copies pass, planted set fails at F={{-1}}, x=-2"))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut total = 0u64;
    for id in StructureId::ALL {
        let sh = id.build();
        let cert = suite::orbit_agreement(sh.as_ref(), 12, 3);
        if !cert.verdict.is_pass() {
            return Err(format!("{id}: {}", serde_json::to_string(&cert.verdict).unwrap()));
        }
        total += cert.parameters["checked"].as_u64().unwrap_or(0);
    }
    within(LIMIT_2, start)?;
    Ok(format!("{total} triples, zero mismatches"))
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let mut exact = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let pool: Vec<Point> = window(10).collect();
    for id in StructureId::ALL {
        let sh = id.build();
        for i in 0..20u64 {
            let n = rng.gen_range(0..=3);
            let f: FiniteSet = pool.choose_multiple(&mut rng, n).copied().collect();
            let cert = suite::closure_sandwich(&sh, &f, 10, 8, i).map_err(|e| format!("{id} F={f:?}: {e}"))?;
            if !cert.verdict.is_pass() {
                return Err(format!(
                    "{id} F={f:?}: {}",
                    serde_json::to_string(&cert.verdict).unwrap()
                ));
            }
            if cert.witnesses[0]["rc"]["exact"] == true {
                exact += 1;
            }
        }
    }
    within(LIMIT_3, start)?;
    Ok(format!("180 random sets, {exact} with exact rc equal to ic_upper"))
}

fn criterion_4() -> Outcome {
    let sh = s("pairs");
    let cert = suite::exchange_failure(sh.as_ref(), 12).map_err(|e| e.to_string())?;
    require(cert.verdict.is_pass(), || serde_json::to_string(&cert.verdict).unwrap())?;
    let ac = closures::algebraic_closure(sh.as_ref(), &set(&sh, &["{0,1}", "{2,3}"]), 12).map_err(|e| e.to_string())?;
    let expected = set(&sh, &["{0,1}", "{2,3}", "{0,2}", "{0,3}", "{1,2}", "{1,3}"]);
    require(ac.closure_window == expected && ac.exact, || {
        format!("ac = {:?}", ac.closure_window)
    })?;
    Ok("{0,2} in ac({0,1},{2,3}), {2,3} not in ac({0,1},{0,2}), |ac| = 6".into())
}

fn criterion_5() -> Outcome {
    let z = s("zorder");
    let ans = typesets::rank_at_most(z.as_ref(), &TypeHandle::new(FiniteSet::new(), Point(0)).unwrap(), 1, 4)
        .map_err(|e| e.to_string())?;
    match &ans {
        RankAnswer::AtMost { rank: 1, witness } if witness.extension == FiniteSet::singleton(pt(&z, "0")) => {}
        other => return Err(format!("zorder: {other:?}")),
    }
    let z2 = s("zeta2");
    let t = TypeHandle::new(FiniteSet::new(), pt(&z2, "(0,0)")).unwrap();
    let one = typesets::rank_at_most(z2.as_ref(), &t, 1, 8).map_err(|e| e.to_string())?;
    require(matches!(one, RankAnswer::NotWithin { k: 1, .. }), || {
        format!("zeta2 k=1: {one:?}")
    })?;
    let two = typesets::rank_at_most(z2.as_ref(), &t, 2, 8).map_err(|e| e.to_string())?;
    require(two.at_most() == Some(2), || format!("zeta2 k=2: {two:?}"))?;
    let dlo = s("dlo");
    let all: FiniteSet = window(8).collect();
    let mut tested = 0;
    for f in all.subsets_up_to(3) {
        for x in window(8).filter(|&x| !f.contains(x)) {
            let ans = typesets::rank_at_most(dlo.as_ref(), &TypeHandle::new(f.clone(), x).unwrap(), 3, 8)
                .map_err(|e| e.to_string())?;
            require(ans.is_unranked(), || format!("dlo F={f:?} x={x}: {ans:?}"))?;
            tested += 1;
        }
    }
    Ok(format!(
        "zorder AtMost(1) via {{0}}, zeta2 NotWithin(1)/AtMost(2), {tested} dlo types unranked"
    ))
}

fn criterion_6() -> Outcome {
    for name in ["zorder", "zeta2"] {
        let sh = s(name);
        let u = copy_engine::copy_identity(&sh);
        let zero = pt(&sh, if name == "zorder" { "0" } else { "(0,0)" });
        let refused =
            |r: Result<CopyHandle, Error>| matches!(r, Err(Error::Unsupported(_)) | Err(Error::Impossible(_)));
        require(
            refused(copy_engine::copy_avoiding(
                &sh,
                &FiniteSet::new(),
                &FiniteSet::singleton(zero),
                0,
            )),
            || format!("{name}: copy_avoiding was not refused"),
        )?;
        require(
            refused(copy_engine::copy_through(&sh, &FiniteSet::new(), &u, true, 0)),
            || format!("{name}: proper copy_through was not refused"),
        )?;
        for depth in [7, 9, 10] {
            let rc = closures::ranked_closure(sh.as_ref(), &FiniteSet::new(), 2, depth).map_err(|e| e.to_string())?;
            require(rc.exact && rc.closure_window == window(depth).collect(), || {
                format!("{name}: rc(empty) at depth {depth} is {:?}", rc.closure_window)
            })?;
        }
    }
    Ok("zorder and zeta2 refuse proper and avoiding copies; rc(empty) = U_d exactly".into())
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let sh = s("dlo");
    let subsets: Vec<u32> = (0..1024).collect();
    let handles: Vec<CopyHandle> = subsets
        .iter()
        .map(|&m| {
            let members = (0..10u64).filter(|i| m >> i & 1 == 1);
            copy_engine::powerset_embedding_dlo(&sh, &Subset::finite(members)).unwrap()
        })
        .collect();
    for c in &handles {
        passes_copy_check(c)?;
    }
    for (i, a) in handles.iter().enumerate() {
        for (j, b) in handles.iter().enumerate() {
            let subset = subsets[i] & !subsets[j] == 0;
            let cert = certify::check_inclusion(a, b, 60);
            require(cert.verdict.is_pass() == subset, || {
                format!(
                    "S={:#b} S'={:#b}: {}",
                    subsets[i],
                    subsets[j],
                    serde_json::to_string(&cert.verdict).unwrap()
                )
            })?;
            require(subset || cert.verdict.is_fail(), || {
                "non-inclusion not certified".into()
            })?;
        }
    }
    within(LIMIT_7, start)?;
    Ok("1024 copies pass; inclusion matches the subset order on all 1048576 pairs".into())
}

fn criterion_8() -> Outcome {
    for (name, base) in [("dlo", vec![]), ("rado", vec![]), ("pairs", vec!["{0,1}", "{2,3}"])] {
        let sh = s(name);
        let f = set(&sh, &base);
        let mut pair = copy_engine::disjoint_pair(&sh, &f, 0).map_err(|e| e.to_string())?;
        pair.advance(SUITE_STAGES).map_err(|e| e.to_string())?;
        let (c, d) = pair.handles();
        let cert = certify::check_disjointness(&c, &d, pair.base(), 12);
        require(cert.verdict.is_pass(), || {
            format!("{name}: {}", serde_json::to_string(&cert.verdict).unwrap())
        })?;
        let meet = c.decided_in(12).intersection(&d.decided_in(12));
        let ac = closures::algebraic_closure(sh.as_ref(), &f, 12).map_err(|e| e.to_string())?;
        let want = if name == "pairs" { 6 } else { 0 };
        require(meet.len() == want && meet == ac.closure_window && ac.exact, || {
            format!("{name}: meet {meet:?}")
        })?;
    }
    Ok("dlo and rado pairs are disjoint on U_12; pairs meet in the 6-element ac(F)".into())
}

fn criterion_9() -> Outcome {
    let sh = s("dlo");
    let f = FiniteSet::singleton(pt(&sh, "0"));
    let u = copy_engine::copy_identity(&sh);
    let chain = copy_engine::descending_chain(&sh, &f, &u, 4, 10, SUITE_STAGES, 9).map_err(|e| e.to_string())?;
    require(chain.len() == 5, || format!("{} links", chain.len()))?;
    for (i, w) in chain.windows(2).enumerate() {
        let cert = certify::check_inclusion(&w[1], &w[0], 10);
        require(cert.verdict.is_pass(), || {
            format!("link {i}: {}", serde_json::to_string(&cert.verdict).unwrap())
        })?;
        let strict = window(40).any(|p| w[0].membership(p) == Membership::In && w[1].membership(p) == Membership::Out);
        require(strict, || format!("link {i} is not strict inside U_40"))?;
    }
    for c in &chain {
        require(c.membership(Point(0)) == Membership::In, || {
            format!("{} misses 0", c.label())
        })?;
    }
    let meet: FiniteSet = window(10)
        .filter(|&p| chain.iter().all(|c| c.membership(p) != Membership::Out))
        .collect();
    require(meet == f, || format!("intersection at depth 10 is {meet:?}"))?;
    Ok("5 strictly nested copies through 0, intersection on U_10 = {0}".into())
}

fn criterion_10() -> Outcome {
    let sh = s("dlo");
    let u = copy_engine::copy_identity(&sh);
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let d = 8;
    for i in 0..10u64 {
        let f0: FiniteSet = window(d)
            .collect::<Vec<_>>()
            .choose_multiple(&mut rng, 1)
            .copied()
            .collect();
        let c = copy_engine::copy_through(&sh, &f0, &u, true, i)
            .and_then(|c| c.advanced(SUITE_STAGES))
            .map_err(|e| e.to_string())?;
        let inside: Vec<Point> = c.decided_in(d).iter().collect();
        let outside: Vec<Point> = c.decided_out(d).iter().collect();
        let nf = rng.gen_range(0..=2usize.min(inside.len()));
        let ne = rng.gen_range(0..=2usize.min(outside.len()));
        let f: FiniteSet = inside.choose_multiple(&mut rng, nf).copied().collect();
        let e: FiniteSet = outside.choose_multiple(&mut rng, ne).copied().collect();
        let (other, z) = copy_engine::neighbour_copy(&sh, &c, &f, &e, d, i).map_err(|e| e.to_string())?;
        let other = other.advanced(SUITE_STAGES).map_err(|e| e.to_string())?;
        require(f.iter().all(|p| other.membership(p) == Membership::In), || {
            format!("sample {i}: F not inside")
        })?;
        require(e.iter().all(|p| other.membership(p) == Membership::Out), || {
            format!("sample {i}: E not avoided")
        })?;
        require(
            z.0 < 2 * d as u64 && c.membership(z) == Membership::In && other.membership(z) == Membership::Out,
            || format!("sample {i}: difference not witnessed in U_{}", 2 * d),
        )?;
        passes_copy_check(&other)?;
    }
    Ok("10 proper copies, each with a distinct neighbour copy".into())
}

fn criterion_11() -> Outcome {
    let sh = s("dlo");
    let family: Vec<CopyHandle> = [vec![0u64], vec![0, 1], vec![0, 1, 2]]
        .iter()
        .map(|v| copy_engine::powerset_embedding_dlo(&sh, &Subset::finite(v.iter().copied())).unwrap())
        .collect();
    let union = copy_engine::union_chain(&family, 10).map_err(|e| e.to_string())?;
    passes_copy_check(&union)?;
    let top = &family[2];
    for d in [8, 10, 60] {
        require(
            certify::check_inclusion(&union, top, d).verdict.is_pass()
                && certify::check_inclusion(top, &union, d).verdict.is_pass(),
            || format!("union differs from S_Q{{0,1,2}} at depth {d}"),
        )?;
    }
    Ok("union of S_Q chain passes and equals S_Q{0,1,2}".into())
}

fn criterion_12() -> Outcome {
    let cfg = SuiteConfig {
        seed: 12,
        ..SuiteConfig::default()
    };
    let mut rows = BTreeSet::new();
    for id in StructureId::ALL {
        let name = id.name();
        let sh = id.build();
        let a = suite::verify_suite(&sh, &cfg);
        let b = suite::verify_suite(&sh, &cfg);
        require(a.jsonl() == b.jsonl(), || format!("{name}: outputs differ"))?;
        require(!a.has_fail(), || {
            let bad: Vec<_> = a
                .rows
                .iter()
                .filter(|r| r.status == suite::RowStatus::Fail)
                .map(|r| r.name.clone())
                .collect();
            format!("{name}: failing rows {bad:?}")
        })?;
        rows.insert(format!("{name}:{}", a.certificates.len()));
    }
    Ok(format!(
        "byte-identical reruns ({})",
        rows.into_iter().collect::<Vec<_>>().join(", ")
    ))
}

fn main() {
    let criteria: [(u32, fn() -> Outcome); 12] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
        (11, criterion_11),
        (12, criterion_12),
    ];
    let only: Option<u32> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    let mut failed = 0;
    for (n, run) in criteria {
        if only.is_some_and(|o| o != n) {
            continue;
        }
        let start = Instant::now();
        let res = run();
        let secs = start.elapsed().as_secs_f64();
        match res {
            Ok(msg) => println!("criterion {n:>2}: PASS  {msg} [{secs:.2}s]"),
            Err(msg) => {
                failed += 1;
                println!("criterion {n:>2}: FAIL  {msg} [{secs:.2}s]");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
