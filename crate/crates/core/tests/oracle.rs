use copies::oracle;
use copies::structures::{builtin, FinitenessAnswer, StructureId};
use copies::{FiniteSet, PartialMap, Point};
use num_rational::Ratio;
use proptest::prelude::*;

fn pts(s: &str, items: &[&str]) -> Vec<Point> {
    let sh = builtin(s).unwrap();
    items.iter().map(|t| sh.parse_point(t).unwrap()).collect()
}

fn set(s: &str, items: &[&str]) -> FiniteSet {
    pts(s, items).into_iter().collect()
}

fn map(s: &str, pairs: &[(&str, &str)]) -> PartialMap {
    let sh = builtin(s).unwrap();
    PartialMap::from_pairs(
        pairs
            .iter()
            .map(|(a, b)| (sh.parse_point(a).unwrap(), sh.parse_point(b).unwrap())),
    )
    .unwrap()
}

/// Signed Stern-Brocot breadth-first listing, built from mediants.
fn stern_brocot(n: usize) -> Vec<Ratio<i64>> {
    let mut out = vec![Ratio::from_integer(0)];
    let mut level: Vec<(i64, i64, i64, i64)> = vec![(0, 1, 1, 0)];
    while out.len() < n {
        let mut next = Vec::new();
        let mut pos = Vec::new();
        for &(a, b, c, d) in &level {
            let m = (a + c, b + d);
            pos.push(Ratio::new(m.0, m.1));
            next.push((a, b, m.0, m.1));
            next.push((m.0, m.1, c, d));
        }
        let neg: Vec<_> = pos.iter().map(|q| -q).collect();
        out.extend(pos);
        out.extend(neg);
        level = next;
    }
    out.truncate(n);
    out
}

#[test]
fn enumerate_prefixes() {
    let fmt = |s: &str, n| {
        let sh = builtin(s).unwrap();
        oracle::enumerate(n)
            .into_iter()
            .map(|p| sh.format_point(p))
            .collect::<Vec<_>>()
    };
    assert_eq!(fmt("zorder", 3), ["0", "1", "-1"]);
    assert_eq!(fmt("dlo", 4), ["0", "1", "-1", "1/2"]);
    assert_eq!(fmt("pureset", 2), ["0", "1"]);
    assert_eq!(fmt("pairs", 6), ["{0,1}", "{0,2}", "{1,2}", "{0,3}", "{1,3}", "{2,3}"]);
}

#[test]
fn dlo_enumeration_matches_mediant_tree() {
    let sh = builtin("dlo").unwrap();
    for (i, q) in stern_brocot(4095).into_iter().enumerate() {
        let text = if *q.denom() == 1 {
            q.numer().to_string()
        } else {
            format!("{}/{}", q.numer(), q.denom())
        };
        assert_eq!(sh.format_point(Point(i as u64)), text);
        assert_eq!(sh.parse_point(&text).unwrap(), Point(i as u64));
    }
}

#[test]
fn point_codecs_roundtrip() {
    for id in StructureId::ALL {
        let sh = id.build();
        for p in oracle::enumerate(2000) {
            let text = sh.format_point(p);
            assert_eq!(sh.parse_point(&text).unwrap(), p, "{id}: {text}");
        }
    }
}

#[test]
fn codec_examples() {
    assert_eq!(builtin("equiv").unwrap().format_point(Point(0)), "0.0");
    assert_eq!(builtin("zeta2").unwrap().format_point(Point(0)), "(0,0)");
    assert_eq!(builtin("zetaeta").unwrap().format_point(Point(0)), "(0|0)");
    assert_eq!(builtin("treetz").unwrap().format_point(Point(0)), "L0:[]");
    assert_eq!(builtin("dlo").unwrap().parse_point("-3/2").unwrap(), Point(13));
    assert!(builtin("pairs").unwrap().parse_point("{1,1}").is_err());
    assert!(builtin("nope").is_err());
}

#[test]
fn same_type_examples() {
    let dlo = builtin("dlo").unwrap();
    let f = set("dlo", &["0"]);
    let [one, two, minus] = [pts("dlo", &["1"])[0], pts("dlo", &["2"])[0], pts("dlo", &["-1"])[0]];
    assert!(oracle::same_type(dlo.as_ref(), &f, one, two).unwrap());
    assert!(!oracle::same_type(dlo.as_ref(), &f, one, minus).unwrap());
    assert!(oracle::same_type(dlo.as_ref(), &f, Point(0), one).is_err());
    for id in StructureId::ALL {
        let sh = id.build();
        for x in oracle::enumerate(12).into_iter().skip(1) {
            assert!(sh.same_type(&FiniteSet::singleton(Point(0)), x, x));
        }
    }
}

#[test]
fn extendable_examples() {
    let dlo = builtin("dlo").unwrap();
    assert!(dlo.extendable(&map("dlo", &[("0", "0"), ("1", "2")])));
    assert!(!dlo.extendable(&map("dlo", &[("0", "1"), ("1", "0")])));
    let z = builtin("zorder").unwrap();
    assert!(!z.extendable(&map("zorder", &[("0", "3"), ("1", "5")])));
    assert!(z.extendable(&map("zorder", &[("0", "3"), ("1", "4")])));
}

#[test]
fn extensions_examples() {
    let dlo = builtin("dlo").unwrap();
    let p = map("dlo", &[("0", "0")]);
    let one = pts("dlo", &["1"])[0];
    assert_eq!(oracle::extensions(dlo.as_ref(), &p, one, 10).unwrap().next(), Some(one));

    let z = builtin("zorder").unwrap();
    let p = map("zorder", &[("0", "4")]);
    let got: Vec<String> = oracle::extensions(z.as_ref(), &p, pts("zorder", &["1"])[0], 10)
        .unwrap()
        .map(|q| z.format_point(q))
        .collect();
    assert_eq!(got, ["5"]);

    let ps = builtin("pureset").unwrap();
    let empty = PartialMap::new();
    let got: Vec<Point> = oracle::extensions(ps.as_ref(), &empty, Point(0), 3).unwrap().collect();
    assert_eq!(got, [Point(0), Point(1), Point(2)]);

    assert!(oracle::extensions(dlo.as_ref(), &map("dlo", &[("0", "1"), ("1", "0")]), Point(5), 4).is_err());
}

#[test]
fn typeset_finite_examples() {
    let z = builtin("zorder").unwrap();
    assert_eq!(
        z.typeset_finite(&set("zorder", &["0"]), pts("zorder", &["5"])[0]),
        FinitenessAnswer::Finite(set("zorder", &["5"]))
    );
    let pairs = builtin("pairs").unwrap();
    assert_eq!(
        pairs.typeset_finite(&set("pairs", &["{0,1}", "{2,3}"]), pts("pairs", &["{0,2}"])[0]),
        FinitenessAnswer::Finite(set("pairs", &["{0,2}", "{0,3}", "{1,2}", "{1,3}"]))
    );
    let dlo = builtin("dlo").unwrap();
    assert!(matches!(
        dlo.typeset_finite(&FiniteSet::new(), Point(0)),
        FinitenessAnswer::Infinite(_)
    ));
}

/// Every permutation of {0,1,2,3} applied to pairs, the ground truth for
/// the finite typesets of the pairs action over a sockel with support {0..3}.
#[test]
fn pairs_finite_typeset_by_permutations() {
    let sh = builtin("pairs").unwrap();
    let f = [(0u64, 1u64), (2, 3)];
    let x = (0u64, 2u64);
    let mut orbit = std::collections::BTreeSet::new();
    let perms = permutations(4);
    for p in &perms {
        let image = |(a, b): (u64, u64)| {
            let (c, d) = (p[a as usize], p[b as usize]);
            (c.min(d), c.max(d))
        };
        if f.iter().all(|&e| image(e) == e) {
            orbit.insert(image(x));
        }
    }
    let text: Vec<String> = orbit.iter().map(|(a, b)| format!("{{{a},{b}}}")).collect();
    let expected: FiniteSet = text.iter().map(|t| sh.parse_point(t).unwrap()).collect();
    let fset: FiniteSet = f
        .iter()
        .map(|(a, b)| sh.parse_point(&format!("{{{a},{b}}}")).unwrap())
        .collect();
    assert_eq!(
        sh.typeset_finite(&fset, sh.parse_point("{0,2}").unwrap()),
        FinitenessAnswer::Finite(expected)
    );
}

fn permutations(n: usize) -> Vec<Vec<u64>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, (n - 1) as u64);
            out.push(q);
        }
    }
    out
}

#[test]
fn unranked_witness_examples() {
    let dlo = builtin("dlo").unwrap();
    let q = oracle::unranked_witness(
        dlo.as_ref(),
        &set("dlo", &["0"]),
        pts("dlo", &["1"])[0],
        &set("dlo", &["0", "1", "2"]),
    )
    .unwrap();
    assert_eq!(q.map(|p| dlo.format_point(p)).as_deref(), Some("3/2"));

    let z = builtin("zorder").unwrap();
    assert_eq!(
        oracle::unranked_witness(z.as_ref(), &FiniteSet::new(), Point(0), &set("zorder", &["0"])).unwrap(),
        None
    );

    let ps = builtin("pureset").unwrap();
    let q = oracle::unranked_witness(ps.as_ref(), &FiniteSet::new(), Point(0), &set("pureset", &["0", "1"])).unwrap();
    assert_eq!(q, Some(Point(2)));
}

fn small_set(max: u64, len: usize) -> impl Strategy<Value = FiniteSet> {
    proptest::collection::vec(0..max, 0..=len).prop_map(FiniteSet::from_indices)
}

fn structure() -> impl Strategy<Value = StructureId> {
    proptest::sample::select(StructureId::ALL.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn same_type_is_an_equivalence(id in structure(), f in small_set(12, 3), x in 0u64..12, y in 0u64..12, z in 0u64..12) {
        let s = id.build();
        let (x, y, z) = (Point(x), Point(y), Point(z));
        prop_assume!(!f.contains(x) && !f.contains(y) && !f.contains(z));
        prop_assert!(s.same_type(&f, x, x));
        prop_assert_eq!(s.same_type(&f, x, y), s.same_type(&f, y, x));
        if s.same_type(&f, x, y) && s.same_type(&f, y, z) {
            prop_assert!(s.same_type(&f, x, z));
        }
    }

    #[test]
    fn extendable_closed_under_restriction(id in structure(), src in proptest::collection::vec(0u64..40, 1..5), seed in 0u64..1000) {
        let s = id.build();
        // build an extendable map greedily, images chosen among the first 200 points
        let mut m = PartialMap::new();
        for (i, &a) in src.iter().enumerate() {
            if m.in_domain(Point(a)) {
                continue;
            }
            let start = (seed + i as u64 * 7) % 50;
            if let Some(b) = (start..start + 200).map(Point).find(|&b| s.extend_ok(&m, Point(a), b)) {
                m.insert(Point(a), b).unwrap();
            }
        }
        prop_assert!(s.extendable(&m));
        for keep in m.domain().subsets_up_to(m.len()) {
            prop_assert!(s.extendable(&m.restrict(&keep)));
        }
    }

    #[test]
    fn same_type_matches_extendable_on_homogeneous(name in proptest::sample::select(vec!["pureset", "dlo", "rado", "equiv"]), f in small_set(12, 3), x in 0u64..12, y in 0u64..12) {
        let s = builtin(name).unwrap();
        let (x, y) = (Point(x), Point(y));
        prop_assume!(!f.contains(x) && !f.contains(y));
        let mut m = PartialMap::identity(&f);
        let ext = m.insert(x, y).is_ok() && s.extendable(&m);
        prop_assert_eq!(s.same_type(&f, x, y), ext);
    }

    #[test]
    fn finite_typesets_are_exact(id in structure(), f in small_set(10, 2), x in 0u64..10, d in 8usize..14) {
        let s = id.build();
        let x = Point(x);
        prop_assume!(!f.contains(x));
        if let FinitenessAnswer::Finite(all) = s.typeset_finite(&f, x) {
            for q in all.iter() {
                prop_assert!(s.same_type(&f, x, q));
            }
            for q in oracle::enumerate(d) {
                if !f.contains(q) && !all.contains(q) {
                    prop_assert!(!s.same_type(&f, x, q));
                }
            }
        }
    }

    #[test]
    fn unranked_witness_is_in_typeset(id in structure(), f in small_set(8, 2), extra in small_set(12, 2), x in 0u64..10) {
        let s = id.build();
        let x = Point(x);
        prop_assume!(!f.contains(x));
        let f2 = f.union(&extra);
        if let Some(q) = oracle::unranked_witness(s.as_ref(), &f, x, &f2).unwrap() {
            prop_assert!(!f2.contains(q));
            prop_assert!(s.same_type(&f, x, q));
        }
    }
}
