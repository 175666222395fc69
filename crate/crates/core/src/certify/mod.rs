//! Bounded checks of copies and relations between them, emitted as
//! replayable certificates.

use serde_json::{json, Value};

use crate::copy_engine::closed::sample_points;
use crate::copy_engine::{self, CopyHandle, Membership};
use crate::error::{Error, Result};
use crate::point::{window, FiniteSet, PartialMap, Point};
use crate::structures::{dlo, FinitenessAnswer, Structure, Q};

pub mod brute;
mod certificate;

pub use brute::{brute_extendable, brute_same_type};
pub use certificate::{CertKind, Certificate, Verdict, SCHEMA};

pub fn points_json(s: &dyn Structure, set: &FiniteSet) -> Value {
    json!(set.iter().map(|p| s.format_point(p)).collect::<Vec<_>>())
}

pub fn map_json(s: &dyn Structure, m: &PartialMap) -> Value {
    json!(m
        .pairs()
        .iter()
        .map(|&(a, b)| [s.format_point(a), s.format_point(b)])
        .collect::<Vec<_>>())
}

fn obligation_json(s: &dyn Structure, f: &FiniteSet, x: Point) -> Value {
    json!({"F": points_json(s, f), "x": s.format_point(x)})
}

/// Least-index point of the DLO gap of F around x lying in `c`, when `c`
/// has a closed form. `Some(None)` means the gap provably misses `c`.
fn exact_meet(c: &CopyHandle, f: &FiniteSet, x: Point) -> Option<Option<Point>> {
    let forms = c.dlo_forms()?;
    let (lo, hi) = dlo::gap(f, dlo::value(x.0));
    let mut marks = Vec::new();
    for form in &forms {
        form.marks(&mut marks);
    }
    let mut undecidable = false;
    for q in sample_points(&marks, lo, hi) {
        match dlo::index(q) {
            Some(i) if c.membership(Point(i)) == Membership::In => return Some(Some(Point(i))),
            Some(_) => {}
            None => undecidable = true,
        }
    }
    if undecidable {
        None
    } else {
        Some(None)
    }
}

/// Bounded test of the characterization: for F ⊆ C ∩ U_depth with
/// |F| ≤ sockel_cap and x ∈ U_depth \ F, some g ∈ G⟨F⟩ sends x into C.
pub fn check_copy(c: &CopyHandle, depth: usize, sockel_cap: usize, budget: u64) -> Certificate {
    let s = c.structure().clone();
    let sd = s.as_ref();
    let mut cert = Certificate::new(CertKind::CopyCheck, sd.id())
        .param("subject", c.label())
        .param("stage", c.stage())
        .param("depth", depth)
        .param("sockel_cap", sockel_cap)
        .param("budget", budget);
    let inside = c.decided_in(depth);
    let mut open = Vec::new();
    for f in inside.subsets_up_to(sockel_cap) {
        let mut solved: Vec<(Point, Point)> = Vec::new();
        for x in window(depth).filter(|&x| !f.contains(x)) {
            let reuse = solved.iter().find(|&&(r, _)| sd.same_type(&f, r, x)).map(|&(_, y)| y);
            let found = reuse.or_else(|| {
                (0..budget)
                    .map(Point)
                    .find(|&y| !f.contains(y) && c.membership(y) == Membership::In && sd.same_type(&f, x, y))
            });
            let found = match found {
                Some(y) => Some(y),
                None => match exact_meet(c, &f, x) {
                    Some(Some(y)) => Some(y),
                    Some(None) => {
                        cert.verdict = Verdict::Fail {
                            counterexample: obligation_json(sd, &f, x),
                        };
                        return cert;
                    }
                    None => {
                        if let FinitenessAnswer::Finite(all) = sd.typeset_finite(&f, x) {
                            if all.iter().all(|q| c.membership(q) == Membership::Out) {
                                cert.verdict = Verdict::Fail {
                                    counterexample: obligation_json(sd, &f, x),
                                };
                                return cert;
                            }
                        }
                        None
                    }
                },
            };
            match found {
                Some(y) => {
                    solved.push((x, y));
                    let mut m = PartialMap::identity(&f);
                    m.insert(x, y).expect("x lies outside F");
                    cert.witnesses.push(map_json(sd, &m));
                }
                None => open.push(obligation_json(sd, &f, x)),
            }
        }
    }
    if !open.is_empty() {
        cert.verdict = Verdict::Unknown {
            obligation: json!(open),
        };
    }
    cert
}

/// Re-validates a copy-check certificate against the handle it was issued for.
pub fn replay_copy_check(cert: &Certificate, c: &CopyHandle) -> Result<bool> {
    let s = c.structure().clone();
    let sd = s.as_ref();
    let parse = |v: &Value| -> Result<Point> {
        let t = v
            .as_str()
            .ok_or_else(|| Error::Precondition("point must be a string".into()))?;
        sd.parse_point(t)
    };
    match &cert.verdict {
        Verdict::Fail { counterexample } => {
            let f: FiniteSet = counterexample["F"]
                .as_array()
                .ok_or_else(|| Error::Precondition("missing F".into()))?
                .iter()
                .map(parse)
                .collect::<Result<_>>()?;
            let x = parse(&counterexample["x"])?;
            if f.contains(x) || f.iter().any(|p| c.membership(p) != Membership::In) {
                return Ok(false);
            }
            let fresh = check_single(c, &f, x);
            Ok(fresh == Some(false))
        }
        _ => {
            for w in &cert.witnesses {
                let pairs = w
                    .as_array()
                    .ok_or_else(|| Error::Precondition("witness must be a list".into()))?;
                let mut m = PartialMap::new();
                for pr in pairs {
                    m.insert(parse(&pr[0])?, parse(&pr[1])?)?;
                }
                let (_, y) = *m
                    .pairs()
                    .last()
                    .ok_or_else(|| Error::Precondition("empty witness".into()))?;
                if !sd.extendable(&m) || c.membership(y) != Membership::In {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

/// `Some(true)` if the typeset ⟨F ▷ x⟩ provably meets `c`, `Some(false)` if
/// it provably misses it.
fn check_single(c: &CopyHandle, f: &FiniteSet, x: Point) -> Option<bool> {
    let s = c.structure().clone();
    match exact_meet(c, f, x) {
        Some(r) => Some(r.is_some()),
        None => match s.typeset_finite(f, x) {
            FinitenessAnswer::Finite(all) => {
                if all.iter().any(|q| c.membership(q) == Membership::In) {
                    Some(true)
                } else if all.iter().all(|q| c.membership(q) == Membership::Out) {
                    Some(false)
                } else {
                    None
                }
            }
            _ => None,
        },
    }
}

/// Least-index point In `c` and Out `d`, searched beyond the window through
/// the settled points of both handles and, for closed DLO forms, through the
/// breakpoint regions of both sets.
fn global_conflict(c: &CopyHandle, d: &CopyHandle) -> Option<Point> {
    let mut best: Option<Point> = None;
    let mut consider = |p: Point| {
        if c.membership(p) == Membership::In && d.membership(p) == Membership::Out && best.is_none_or(|b| p < b) {
            best = Some(p);
        }
    };
    for p in c.explicit_points().into_iter().chain(d.explicit_points()) {
        consider(p);
    }
    if let (Some(fc), Some(fd)) = (c.dlo_forms(), d.dlo_forms()) {
        let mut marks: Vec<Q> = Vec::new();
        for form in fc.iter().chain(fd.iter()) {
            form.marks(&mut marks);
        }
        for q in sample_points(&marks, None, None) {
            if let Some(i) = dlo::index(q) {
                consider(Point(i));
            }
        }
    }
    best
}

/// decided_in(c) ⊆ decided_in(d) on U_depth, with no In(c)/Out(d) conflict
/// anywhere the two handles can be compared.
pub fn check_inclusion(c: &CopyHandle, d: &CopyHandle, depth: usize) -> Certificate {
    let s = c.structure().clone();
    let sd = s.as_ref();
    let mut cert = Certificate::new(CertKind::Inclusion, sd.id())
        .param("subject", c.label())
        .param("container", d.label())
        .param("depth", depth);
    let mut open = Vec::new();
    let mut conflict = None;
    for y in window(depth) {
        match (c.membership(y), d.membership(y)) {
            (Membership::In, Membership::Out) => {
                conflict = Some(y);
                break;
            }
            (Membership::In, Membership::UnknownAtStage(_)) => open.push(sd.format_point(y)),
            _ => {}
        }
    }
    let conflict = conflict.or_else(|| global_conflict(c, d));
    if let Some(y) = conflict {
        cert.verdict = Verdict::Fail {
            counterexample: json!({"point": sd.format_point(y)}),
        };
    } else if !open.is_empty() {
        cert.verdict = Verdict::Unknown {
            obligation: json!({"undecided_in_container": open}),
        };
    }
    cert
}

/// Heuristic search for a copy that strictly contains c ∩ U_depth at the
/// window and still excludes x. Pass means "not refuted".
pub fn check_meet_irreducible_candidate(c: &CopyHandle, x: Point, depth: usize, samples: u64) -> Result<Certificate> {
    let s = c.structure().clone();
    let sd = s.as_ref();
    if c.membership(x) != Membership::Out {
        return Err(Error::Precondition(format!(
            "{} is not known to lie outside the copy",
            sd.format_point(x)
        )));
    }
    let mut cert = Certificate::new(CertKind::MeetIrreducible, sd.id())
        .param("subject", c.label())
        .param("excluded", sd.format_point(x))
        .param("depth", depth)
        .param("samples", samples)
        .param("claim", "not-refuted");
    let f = c.decided_in(depth);
    for seed in 0..samples {
        let Ok(cand) = copy_engine::copy_avoiding(&s, &f, &FiniteSet::singleton(x), seed) else {
            continue;
        };
        let Ok(cand) = cand.advanced(2 * depth) else {
            continue;
        };
        let gained =
            window(depth).find(|&y| cand.membership(y) == Membership::In && c.membership(y) == Membership::Out);
        if let Some(y) = gained {
            cert.verdict = Verdict::Fail {
                counterexample: json!({
                    "point": sd.format_point(y),
                    "copy": cand.label(),
                    "seed": seed,
                    "stage": cand.stage(),
                    "inside": points_json(sd, &cand.decided_in(depth)),
                }),
            };
            return Ok(cert);
        }
    }
    Ok(cert)
}

/// Every point of U_depth is excluded from one of the two handles unless
/// it belongs to `base`, which both must contain.
pub fn check_disjointness(c: &CopyHandle, d: &CopyHandle, base: &FiniteSet, depth: usize) -> Certificate {
    let s = c.structure().clone();
    let sd = s.as_ref();
    let mut cert = Certificate::new(CertKind::Disjointness, sd.id())
        .param("left", c.label())
        .param("right", d.label())
        .param("base", points_json(sd, base))
        .param("depth", depth);
    let mut open = Vec::new();
    for y in window(depth) {
        let (mc, md) = (c.membership(y), d.membership(y));
        let ok = if base.contains(y) {
            mc == Membership::In && md == Membership::In
        } else {
            mc == Membership::Out || md == Membership::Out
        };
        let bad = if base.contains(y) {
            mc == Membership::Out || md == Membership::Out
        } else {
            mc == Membership::In && md == Membership::In
        };
        if bad {
            cert.verdict = Verdict::Fail {
                counterexample: json!({"point": sd.format_point(y)}),
            };
            return cert;
        }
        if !ok {
            open.push(sd.format_point(y));
        }
    }
    cert.witnesses
        .push(json!({"meet": points_json(sd, &c.decided_in(depth).intersection(&d.decided_in(depth)))}));
    if !open.is_empty() {
        cert.verdict = Verdict::Unknown {
            obligation: json!({"unsettled": open}),
        };
    }
    cert
}
