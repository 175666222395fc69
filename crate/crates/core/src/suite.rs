//! The per-structure verification battery.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::certify::{self, points_json, CertKind, Certificate, Verdict};
use crate::closures;
use crate::copy_engine::{self, CopyHandle, Membership, Subset};
use crate::error::Error;
use crate::point::{window, FiniteSet, Point};
use crate::structures::{Rankedness, Shared, Structure};
use crate::typesets::{self, RankAnswer, TypeHandle};

/// Stages every staged copy runs before it is checked.
pub const SUITE_STAGES: usize = 64;
/// Window used by the copy checks of the battery.
pub const CHECK_DEPTH: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    pub depth: usize,
    pub budget: u64,
    pub sockel_cap: usize,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            depth: 10,
            budget: 200,
            sockel_cap: 2,
            seed: 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RowStatus {
    Pass,
    Fail,
    Unknown,
    Unsupported,
}

impl RowStatus {
    pub fn name(self) -> &'static str {
        match self {
            RowStatus::Pass => "pass",
            RowStatus::Fail => "fail",
            RowStatus::Unknown => "unknown",
            RowStatus::Unsupported => "unsupported",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub name: String,
    pub status: RowStatus,
    pub detail: String,
}

#[derive(Clone, Debug, Default)]
pub struct SuiteReport {
    pub rows: Vec<Row>,
    pub certificates: Vec<Certificate>,
}

impl SuiteReport {
    pub fn has_fail(&self) -> bool {
        self.rows.iter().any(|r| r.status == RowStatus::Fail)
    }

    pub fn jsonl(&self) -> String {
        let mut out = String::new();
        for c in &self.certificates {
            out.push_str(&c.to_line());
            out.push('\n');
        }
        out
    }

    fn row(&mut self, name: &str, status: RowStatus, detail: impl Into<String>) {
        self.rows.push(Row {
            name: name.to_string(),
            status,
            detail: detail.into(),
        });
    }

    fn cert(&mut self, row: &str, cert: Certificate) -> RowStatus {
        let status = match cert.verdict {
            Verdict::Pass => RowStatus::Pass,
            Verdict::Fail { .. } => RowStatus::Fail,
            Verdict::Unknown { .. } => RowStatus::Unknown,
        };
        self.certificates.push(cert.param("row", row));
        status
    }

    /// Records a construction error as a refusal certificate.
    fn refusal(&mut self, row: &str, s: &dyn Structure, e: &Error) -> RowStatus {
        let status = match e {
            Error::Unsupported(_) | Error::Impossible(_) => RowStatus::Unsupported,
            Error::Budget { .. } => RowStatus::Unknown,
            _ => RowStatus::Fail,
        };
        let verdict = match status {
            RowStatus::Unsupported => Verdict::Pass,
            RowStatus::Unknown => Verdict::Unknown {
                obligation: json!(e.to_string()),
            },
            _ => Verdict::Fail {
                counterexample: json!(e.to_string()),
            },
        };
        let mut cert = Certificate::new(CertKind::Refusal, s.id()).param("reason", e.to_string());
        cert.verdict = verdict;
        self.certificates.push(cert.param("row", row));
        status
    }
}

fn worst(statuses: &[RowStatus]) -> RowStatus {
    for s in [RowStatus::Fail, RowStatus::Unknown, RowStatus::Unsupported] {
        if statuses.contains(&s) {
            return s;
        }
    }
    RowStatus::Pass
}

/// same_type against the brute-force oracle on U_depth with |F| ≤ cap.
pub fn orbit_agreement(s: &dyn Structure, depth: usize, cap: usize) -> Certificate {
    let mut cert = Certificate::new(CertKind::OrbitAgreement, s.id())
        .param("depth", depth)
        .param("sockel_cap", cap);
    let all: FiniteSet = window(depth).collect();
    let mut checked = 0u64;
    for f in all.subsets_up_to(cap) {
        for x in window(depth).filter(|&x| !f.contains(x)) {
            for y in window(depth).filter(|&y| !f.contains(y)) {
                checked += 1;
                let fast = s.same_type(&f, x, y);
                match certify::brute_same_type(s, &f, x, y, depth) {
                    Ok(b) if b == fast => {}
                    Ok(b) => {
                        cert.verdict = Verdict::Fail {
                            counterexample: json!({
                                "F": points_json(s, &f),
                                "x": s.format_point(x),
                                "y": s.format_point(y),
                                "oracle": fast,
                                "brute": b,
                            }),
                        };
                        return cert.param("checked", checked);
                    }
                    Err(e) => {
                        cert.verdict = Verdict::Unknown {
                            obligation: json!(e.to_string()),
                        };
                        return cert.param("checked", checked);
                    }
                }
            }
        }
    }
    cert.param("checked", checked)
}

/// 𝔞𝔠(F) ⊆ 𝔯𝔠(F) ⊆ ic_upper(F) on U_depth, with equality of the last two
/// whenever the ranked closure is exact.
pub fn closure_sandwich(
    s: &Shared,
    f: &FiniteSet,
    depth: usize,
    samples: usize,
    seed: u64,
) -> Result<Certificate, Error> {
    let sd = s.as_ref();
    let ac = closures::algebraic_closure(sd, f, depth)?;
    let rc = closures::ranked_closure(sd, f, closures::IC_MAXRANK, depth)?;
    let ic = closures::intersection_closure_upper(s, f, samples, depth, seed)?;
    let in_window: FiniteSet = window(depth).collect();
    let ac_w = ac.closure_window.intersection(&in_window);
    let rc_w = rc.closure_window.intersection(&in_window);
    let mut cert = Certificate::new(CertKind::ClosureSandwich, sd.id())
        .param("F", points_json(sd, f))
        .param("depth", depth)
        .param("samples", samples)
        .param("seed", seed);
    cert.witnesses.push(json!({
        "ac": ac.to_json(sd),
        "rc": rc.to_json(sd),
        "ic_upper": points_json(sd, &ic),
    }));
    let problem = if !ac_w.is_subset(&rc_w) {
        Some(("ac not inside rc", ac_w.difference(&rc_w)))
    } else if !rc_w.is_subset(&ic) {
        Some(("rc not inside ic_upper", rc_w.difference(&ic)))
    } else if rc.exact && rc_w != ic {
        Some(("exact rc differs from ic_upper", ic.difference(&rc_w)))
    } else {
        None
    };
    if let Some((what, pts)) = problem {
        cert.verdict = Verdict::Fail {
            counterexample: json!({"violation": what, "points": points_json(sd, &pts)}),
        };
    }
    Ok(cert)
}

/// Each scheduled type meets both sides of the partition.
pub fn check_partition(s: &dyn Structure, a: &FiniteSet, b: &FiniteSet, depth: usize, cap: usize) -> Certificate {
    let mut cert = Certificate::new(CertKind::Partition, s.id())
        .param("depth", depth)
        .param("sockel_cap", cap)
        .param("prefix", a.len() + b.len());
    if !a.is_disjoint(b) {
        cert.verdict = Verdict::Fail {
            counterexample: json!({"overlap": points_json(s, &a.intersection(b))}),
        };
        return cert;
    }
    for t in copy_engine::scheduled_types(s, depth, cap) {
        let meets = |side: &FiniteSet| side.iter().find(|&q| t.contains(s, q));
        match (meets(a), meets(b)) {
            (Some(qa), Some(qb)) => cert.witnesses.push(json!({
                "F": points_json(s, t.sockel()),
                "x": s.format_point(t.rep()),
                "A": s.format_point(qa),
                "B": s.format_point(qb),
            })),
            _ => {
                cert.verdict = Verdict::Fail {
                    counterexample: json!({"F": points_json(s, t.sockel()), "x": s.format_point(t.rep())}),
                };
                return cert;
            }
        }
    }
    cert
}

pub fn rank_certificate(s: &dyn Structure, t: &TypeHandle, k: u32, window_len: usize) -> Result<Certificate, Error> {
    let ans = typesets::rank_at_most(s, t, k, window_len)?;
    let mut cert = Certificate::new(CertKind::Rank, s.id())
        .param("F", points_json(s, t.sockel()))
        .param("p", s.format_point(t.rep()))
        .param("k", k)
        .param("window", window_len);
    cert.witnesses.push(ans.to_json(s));
    if let RankAnswer::NotWithin { .. } | RankAnswer::Unranked { certified: false, .. } = ans {
        cert.verdict = Verdict::Unknown {
            obligation: json!({"k": k, "window": window_len}),
        };
    }
    Ok(cert)
}

/// v ∈ 𝔞𝔠({u, u′}) while u′ ∉ 𝔞𝔠({u, v}) for u={0,1}, u′={2,3}, v={0,2}.
pub fn exchange_failure(s: &dyn Structure, depth: usize) -> Result<Certificate, Error> {
    let u = s.parse_point("{0,1}")?;
    let u2 = s.parse_point("{2,3}")?;
    let v = s.parse_point("{0,2}")?;
    let big = closures::algebraic_closure(s, &FiniteSet::from_indices([u.0, u2.0]), depth)?;
    let small = closures::algebraic_closure(s, &FiniteSet::from_indices([u.0, v.0]), depth)?;
    let mut cert = Certificate::new(CertKind::Exchange, s.id()).param("depth", depth);
    cert.witnesses.push(json!({
        "ac(u,u')": big.to_json(s),
        "ac(u,v)": small.to_json(s),
    }));
    let holds = big.closure_window.contains(v) && !small.closure_window.contains(u2);
    if !holds {
        cert.verdict = Verdict::Fail {
            counterexample: json!({"v_in_ac": big.closure_window.contains(v), "u'_in_ac": small.closure_window.contains(u2)}),
        };
    }
    Ok(cert)
}

/// Least point over F whose type is certified unranked.
fn first_unranked(s: &dyn Structure, f: &FiniteSet, depth: usize) -> Option<Point> {
    window(depth).find(|&p| !f.contains(p) && s.rankedness(f, p) == Rankedness::Unranked)
}

fn pairs_sockel(s: &dyn Structure) -> FiniteSet {
    ["{0,1}", "{2,3}"]
        .iter()
        .filter_map(|t| s.parse_point(t).ok())
        .collect()
}

/// Runs the whole battery for one structure. Deterministic in `cfg`.
pub fn verify_suite(s: &Shared, cfg: &SuiteConfig) -> SuiteReport {
    let sd = s.as_ref();
    let mut rep = SuiteReport::default();
    let d8 = CHECK_DEPTH.min(cfg.depth.max(1));
    let (cap, budget) = (cfg.sockel_cap, cfg.budget.max(cfg.depth as u64));

    let st = rep.cert("orbit-agreement", orbit_agreement(sd, d8, cap));
    rep.row(
        "orbit-agreement",
        st,
        format!("same_type = brute on U_{d8}, |F| <= {cap}"),
    );

    let u = copy_engine::copy_identity(s);
    let st = rep.cert("copy-identity", certify::check_copy(&u, d8, cap, budget));
    rep.row("copy-identity", st, "U passes the copy check");

    match closures::kernel(sd, cfg.depth) {
        Ok(k) => {
            let mut cert = Certificate::new(CertKind::ClosureSandwich, sd.id()).param("kernel_depth", cfg.depth);
            cert.witnesses.push(k.to_json(sd));
            rep.cert("kernel", cert);
            rep.row(
                "kernel",
                RowStatus::Pass,
                format!("ac(empty) has {} window members", k.closure_window.len()),
            );
        }
        Err(e) => {
            let st = rep.refusal("kernel", sd, &e);
            rep.row("kernel", st, e.to_string());
        }
    }

    // closure sandwich on a few seeded sockets
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let pool: Vec<Point> = window(cfg.depth).collect();
    let mut statuses = Vec::new();
    for n in 0..3usize {
        let f: FiniteSet = pool.choose_multiple(&mut rng, n.min(pool.len())).copied().collect();
        match closure_sandwich(s, &f, cfg.depth, 8, cfg.seed) {
            Ok(c) => statuses.push(rep.cert("closure-sandwich", c)),
            Err(e) => statuses.push(rep.refusal("closure-sandwich", sd, &e)),
        }
    }
    rep.row(
        "closure-sandwich",
        worst(&statuses),
        "ac <= rc <= ic_upper, rc = ic_upper when exact",
    );

    // rank of the first point orbit
    match rank_certificate(sd, &TypeHandle::new_unchecked(FiniteSet::new(), Point(0)), 2, 8) {
        Ok(c) => {
            let st = rep.cert("rank", c);
            rep.row("rank", st, "rank of the orbit of the first point");
        }
        Err(e) => {
            let st = rep.refusal("rank", sd, &e);
            rep.row("rank", st, e.to_string());
        }
    }

    if sd.capabilities().single_copy {
        let a = copy_engine::copy_avoiding(s, &FiniteSet::new(), &FiniteSet::singleton(Point(0)), cfg.seed);
        let b = copy_engine::copy_through(s, &FiniteSet::new(), &u, true, cfg.seed);
        let mut statuses = Vec::new();
        for (name, r) in [("copy_avoiding", a), ("proper copy_through", b)] {
            match r {
                Err(e @ (Error::Unsupported(_) | Error::Impossible(_))) => {
                    rep.refusal("single-copy", sd, &e);
                    statuses.push(RowStatus::Pass);
                }
                Err(e) => statuses.push(rep.refusal("single-copy", sd, &e)),
                Ok(_) => {
                    let mut cert = Certificate::new(CertKind::Refusal, sd.id()).param("construction", name);
                    cert.verdict = Verdict::Fail {
                        counterexample: json!("construction was not refused"),
                    };
                    statuses.push(rep.cert("single-copy", cert));
                }
            }
        }
        match closures::ranked_closure(sd, &FiniteSet::new(), 2, cfg.depth.min(9)) {
            Ok(rc) => {
                let full = rc.exact && rc.closure_window.len() == cfg.depth.min(9);
                statuses.push(if full { RowStatus::Pass } else { RowStatus::Fail });
            }
            Err(e) => statuses.push(rep.refusal("single-copy", sd, &e)),
        }
        rep.row(
            "single-copy",
            worst(&statuses),
            "no proper or avoiding copy; rc(empty) covers the window",
        );
    }

    let construct = |r: Result<CopyHandle, Error>| r.and_then(|c| c.advanced(SUITE_STAGES));
    let f0 = FiniteSet::singleton(Point(0));
    let rows: Vec<(&str, Result<CopyHandle, Error>)> = vec![
        (
            "proper-copy",
            construct(copy_engine::copy_through(s, &f0, &u, true, cfg.seed)),
        ),
        (
            "avoiding-copy",
            match first_unranked(sd, &f0, cfg.depth) {
                Some(e) => construct(copy_engine::copy_avoiding(s, &f0, &FiniteSet::singleton(e), cfg.seed)),
                None => Err(Error::Unsupported("no unranked point over the sockel".into())),
            },
        ),
    ];
    for (name, r) in rows {
        match r {
            Ok(c) => {
                let st = rep.cert(name, certify::check_copy(&c, d8, cap, budget));
                rep.row(name, st, c.label().to_string());
            }
            Err(e) => {
                let st = rep.refusal(name, sd, &e);
                rep.row(name, st, e.to_string());
            }
        }
    }

    match copy_engine::descending_chain(s, &f0, &u, 3, cfg.depth, SUITE_STAGES, cfg.seed) {
        Ok(chain) => {
            let mut statuses = Vec::new();
            for w in chain.windows(2) {
                statuses.push(rep.cert("chain", certify::check_inclusion(&w[1], &w[0], cfg.depth)));
                let strict = window(4 * cfg.depth)
                    .any(|p| w[0].membership(p) == Membership::In && w[1].membership(p) == Membership::Out);
                statuses.push(if strict { RowStatus::Pass } else { RowStatus::Unknown });
            }
            for c in &chain {
                statuses.push(rep.cert("chain", certify::check_copy(c, d8, cap, budget)));
            }
            rep.row(
                "chain",
                worst(&statuses),
                format!("{} nested copies through the first point", chain.len()),
            );
        }
        Err(e) => {
            let st = rep.refusal("chain", sd, &e);
            rep.row("chain", st, e.to_string());
        }
    }

    let f_dis = if sd.id() == "pairs" {
        pairs_sockel(sd)
    } else {
        FiniteSet::new()
    };
    match copy_engine::disjoint_pair(s, &f_dis, cfg.seed).and_then(|mut p| p.advance(SUITE_STAGES).map(|_| p)) {
        Ok(pair) => {
            let (c, d) = pair.handles();
            let mut statuses = vec![rep.cert("disjoint", certify::check_disjointness(&c, &d, pair.base(), 12))];
            statuses.push(rep.cert("disjoint", certify::check_copy(&c, d8, cap, budget)));
            statuses.push(rep.cert("disjoint", certify::check_copy(&d, d8, cap, budget)));
            rep.row(
                "disjoint",
                worst(&statuses),
                format!("C and D meet in ac(F), |ac(F)| = {}", pair.base().len()),
            );
        }
        Err(e) => {
            let st = rep.refusal("disjoint", sd, &e);
            rep.row("disjoint", st, e.to_string());
        }
    }

    match copy_engine::bernstein_base(s, cfg.depth.min(6), cap, 1 << 16) {
        Ok((a, b)) => {
            let st = rep.cert("bernstein", check_partition(sd, &a, &b, cfg.depth.min(6), cap));
            rep.row(
                "bernstein",
                st,
                format!("partition of a prefix of {} points", a.len() + b.len()),
            );
        }
        Err(e) => {
            let st = rep.refusal("bernstein", sd, &e);
            rep.row("bernstein", st, e.to_string());
        }
    }

    if sd.id() == "dlo" {
        dlo_rows(s, cfg, &mut rep, d8, cap, budget);
    }
    if sd.id() == "pairs" {
        match exchange_failure(sd, 12) {
            Ok(c) => {
                let st = rep.cert("exchange", c);
                rep.row("exchange", st, "v in ac(u,u') but u' not in ac(u,v)");
            }
            Err(e) => {
                let st = rep.refusal("exchange", sd, &e);
                rep.row("exchange", st, e.to_string());
            }
        }
    }
    rep
}

fn dlo_rows(s: &Shared, cfg: &SuiteConfig, rep: &mut SuiteReport, d8: usize, cap: usize, budget: u64) {
    let sq = |v: &[u64]| copy_engine::powerset_embedding_dlo(s, &Subset::finite(v.iter().copied()));
    let (Ok(s0), Ok(s01), Ok(s1), Ok(s02)) = (sq(&[0]), sq(&[0, 1]), sq(&[1]), sq(&[0, 2])) else {
        rep.row("powerset", RowStatus::Fail, "construction failed");
        return;
    };
    let mut statuses = vec![rep.cert("powerset", certify::check_copy(&s02, d8, cap, budget))];
    statuses.push(rep.cert("powerset", certify::check_inclusion(&s0, &s01, cfg.depth)));
    let cross = certify::check_inclusion(&s0, &s1, cfg.depth);
    statuses.push(if cross.verdict.is_fail() {
        RowStatus::Pass
    } else {
        RowStatus::Fail
    });
    rep.certificates
        .push(cross.param("row", "powerset").param("expect", "fail"));
    rep.row("powerset", worst(&statuses), "S_Q copies ordered like their index sets");

    match copy_engine::planted_non_copy(s) {
        Ok(p) => {
            let cert = certify::check_copy(&p, 8, 1, budget);
            let expected = json!({"F": ["-1"], "x": "-2"});
            let st = match &cert.verdict {
                Verdict::Fail { counterexample } if *counterexample == expected => RowStatus::Pass,
                _ => RowStatus::Fail,
            };
            rep.certificates
                .push(cert.param("row", "planted").param("expect", "fail"));
            rep.row("planted", st, "{-1} + (0,inf) is rejected at F={-1}, x=-2");
        }
        Err(e) => {
            let st = rep.refusal("planted", s.as_ref(), &e);
            rep.row("planted", st, e.to_string());
        }
    }
}
